//! L-functions: Dirichlet coefficients from Euler products, evaluation by the
//! approximate functional equation, root numbers, and algebraic normalizations.

pub mod afe;
pub mod alg;
pub mod coeffs;
pub mod complex;
pub mod gamma;
pub mod specfile;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

pub use afe::{gamma_factor, AfeEngine};
pub use alg::{gauss_sum, lalg_conv, lalg_sym2, petersson_norm, AlgContext, AlgValue, Calibration};
pub use coeffs::{partial_euler_product, Coefficients};
pub use complex::Complex;

use crate::error::{Error, Result};
use crate::exact::DirichletCharacter;
use crate::qexp::QExpansion;

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 150;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GammaKind {
    /// Gamma_R(s) = pi^{-s/2} Gamma(s/2)
    R,
    /// Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s) = Gamma_R(s) Gamma_R(s + 1)
    C,
}

/// A factor Gamma_R(s + shift) or Gamma_C(s + shift).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaShift {
    pub kind: GammaKind,
    pub shift: i64,
}

impl GammaShift {
    pub fn r(shift: i64) -> Self {
        GammaShift { kind: GammaKind::R, shift }
    }

    pub fn c(shift: i64) -> Self {
        GammaShift { kind: GammaKind::C, shift }
    }
}

impl fmt::Display for GammaShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            GammaKind::R => "R",
            GammaKind::C => "C",
        };
        match self.shift {
            0 => write!(f, "Gamma_{k}(s)"),
            x if x > 0 => write!(f, "Gamma_{k}(s+{x})"),
            x => write!(f, "Gamma_{k}(s{x})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RootNumber {
    Unknown,
    Known(Complex),
}

impl RootNumber {
    pub fn sign(s: i32) -> Self {
        RootNumber::Known(Complex::real(Float::with_val(64, s)))
    }
}

#[derive(Debug, Clone)]
pub struct LFunctionSpec {
    pub name: String,
    pub conductor: u64,
    pub gamma_shifts: Vec<GammaShift>,
    pub motivic_weight: i64,
    pub root_number: RootNumber,
    pub coeffs: Coefficients,
    /// Local polynomials at primes dividing the conductor, for reference.
    pub bad_factors: BTreeMap<u64, Vec<Integer>>,
    /// Poles of the completed L-function with their residues.
    pub poles: Vec<(i64, Rational)>,
}

impl LFunctionSpec {
    pub fn degree(&self) -> usize {
        self.gamma_shifts.iter().map(|g| if g.kind == GammaKind::C { 2 } else { 1 }).sum()
    }

    /// lambda_j with gamma(s) = prod Gamma((s + lambda_j)/2).
    pub fn lambdas(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for g in &self.gamma_shifts {
            out.push(g.shift);
            if g.kind == GammaKind::C {
                out.push(g.shift + 1);
            }
        }
        out.sort();
        out
    }

    pub fn with_data(&self, conductor: u64, gamma_shifts: Vec<GammaShift>) -> Self {
        LFunctionSpec { conductor, gamma_shifts, root_number: RootNumber::Unknown, ..self.clone() }
    }

    pub fn describe(&self) -> String {
        let g: Vec<String> = self.gamma_shifts.iter().map(|g| g.to_string()).collect();
        format!("{}: N = {}, {}, w = {}", self.name, self.conductor, g.join(" "), self.motivic_weight)
    }
}

/// Riemann zeta.
pub fn zeta_spec() -> LFunctionSpec {
    LFunctionSpec {
        name: "zeta".into(),
        conductor: 1,
        gamma_shifts: vec![GammaShift::r(0)],
        motivic_weight: 0,
        root_number: RootNumber::sign(1),
        coeffs: Coefficients::Zeta,
        bad_factors: BTreeMap::new(),
        poles: vec![(0, Rational::from(-1)), (1, Rational::from(1))],
    }
}

/// L(s, chi) for a primitive real character.
pub fn dirichlet_spec(chi: DirichletCharacter) -> Result<LFunctionSpec> {
    if chi.primitive() != chi {
        return Err(Error::Unsupported("imprimitive character".into()));
    }
    if chi.conductor() == 1 {
        return Ok(zeta_spec());
    }
    let a = if chi.parity() == 1 { 0 } else { 1 };
    Ok(LFunctionSpec {
        name: format!("L(s, chi_{})", chi.modulus),
        conductor: chi.conductor(),
        gamma_shifts: vec![GammaShift::r(a)],
        motivic_weight: 0,
        root_number: RootNumber::Unknown,
        coeffs: Coefficients::Dirichlet(chi),
        bad_factors: BTreeMap::new(),
        poles: vec![],
    })
}

/// Gamma factors of Sym^2 of a weight-k form, for a twist of the given parity.
pub fn sym2_gamma(k: i64, twist_parity: i32) -> Vec<GammaShift> {
    let r = if twist_parity == 1 { 2 - k } else { 1 - k };
    vec![GammaShift::c(0), GammaShift::r(r)]
}

/// Symmetric square of `f` twisted by `twist`, with the default functional-equation data.
pub fn sym2_spec(f: &QExpansion, twist: DirichletCharacter, n_coeffs: usize) -> Result<LFunctionSpec> {
    if f.truncation() < n_coeffs {
        return Err(Error::InsufficientCoefficients { needed: n_coeffs, available: f.truncation() });
    }
    if !f.is_normalized() {
        return Err(Error::Unsupported("sym2_spec needs a normalized eigenform".into()));
    }
    let coeffs = Coefficients::Sym2 { form: Arc::new(f.clone()), twist };
    let mut bad = BTreeMap::new();
    for p in crate::exact::arith::primes_up_to((f.level * twist.modulus) as usize) {
        if (f.level * twist.modulus) % p == 0 {
            bad.insert(p, coeffs.local_factor(p)?);
        }
    }
    let cond = twist.conductor();
    Ok(LFunctionSpec {
        name: format!("Sym^2 f x chi_{}", twist.modulus),
        conductor: cond * cond * cond,
        gamma_shifts: sym2_gamma(f.weight, twist.parity()),
        motivic_weight: 2 * (f.weight - 1),
        root_number: RootNumber::Unknown,
        coeffs,
        bad_factors: bad,
        poles: vec![],
    })
}

/// Rankin-Selberg convolution of f and g, weight(f) > weight(g).
pub fn conv_spec(f: &QExpansion, g: &QExpansion, n_coeffs: usize) -> Result<LFunctionSpec> {
    if f.weight <= g.weight {
        return Err(Error::WeightOrder(f.weight, g.weight));
    }
    let avail = f.truncation().min(g.truncation());
    if avail < n_coeffs {
        return Err(Error::InsufficientCoefficients { needed: n_coeffs, available: avail });
    }
    let coeffs = Coefficients::Conv { f: Arc::new(f.clone()), g: Arc::new(g.clone()) };
    let level = f.level * g.level;
    let mut bad = BTreeMap::new();
    for p in crate::exact::arith::primes_up_to(level as usize) {
        if level % p == 0 {
            bad.insert(p, coeffs.local_factor(p)?);
        }
    }
    Ok(LFunctionSpec {
        name: "f x g".into(),
        conductor: g.level * g.level,
        gamma_shifts: vec![GammaShift::c(0), GammaShift::c(1 - g.weight)],
        motivic_weight: f.weight + g.weight - 2,
        root_number: RootNumber::Unknown,
        coeffs,
        bad_factors: bad,
        poles: vec![],
    })
}

/// A value of L(s) with an error estimate.
#[derive(Debug, Clone)]
pub struct LValue {
    pub value: Complex,
    pub abs_error_bound: Float,
    pub s: Complex,
    pub precision_digits: u32,
}

/// Split point used for residual checks and root-number solving.
fn split_c(prec: u32) -> Float {
    Float::with_val(prec, 11) / 10u32
}

fn known_root_number(spec: &LFunctionSpec) -> Result<Complex> {
    match &spec.root_number {
        RootNumber::Known(e) => Ok(e.clone()),
        RootNumber::Unknown => Err(Error::RootNumberUnknown),
    }
}

/// Runs `f` on an engine, enlarging the number of terms when a sum's tail is too large.
fn with_engine<T>(
    spec: &LFunctionSpec,
    s: &Complex,
    digits: u32,
    c: f64,
    f: impl Fn(&AfeEngine) -> Result<T>,
) -> Result<T> {
    let mut factor = 1.0;
    loop {
        let engine = AfeEngine::with_terms_factor(spec, s, digits, c, factor)?;
        match f(&engine) {
            Err(Error::InsufficientCoefficients { .. }) if factor < 16.0 => factor *= 2.0,
            r => return r,
        }
    }
}

/// Halves at the split points c and 1/c.
fn split_halves(e: &AfeEngine) -> Result<(afe::Halves, afe::Halves, u32)> {
    let prec = e.precision_bits();
    let c = split_c(prec);
    let h1 = e.halves(&c)?;
    let h2 = e.halves(&Float::with_val(prec, c.recip_ref()))?;
    Ok((h1, h2, prec))
}

/// L(s) via the approximate functional equation.
pub fn afe_eval(spec: &LFunctionSpec, s: &Complex, digits: u32) -> Result<LValue> {
    let eps = known_root_number(spec)?;
    let (h, prec) = with_engine(spec, s, digits, 1.0, |e| {
        let prec = e.precision_bits();
        Ok((e.halves(&Float::with_val(prec, 1))?, prec))
    })?;
    let lambda = h.first + eps.with_prec(prec).mul_ref(&h.second);
    let Some(gs) = h.gamma_s else {
        return Err(Error::NotCritical { s: s.re.to_f64() as i64, reason: "gamma factor has a pole".into() });
    };
    let denom = gs.mul_ref(&h.a_pow_s);
    let value = lambda.div_ref(&denom);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Unsupported(format!("L(s) is not finite at s = {:.10}", s)));
    }
    let out_prec = (digits as f64 * 3.33) as u32 + 64;
    let scale = Float::with_val(out_prec, lambda.abs()).max(&Float::with_val(out_prec, 1));
    let err = scale * Float::with_val(out_prec, 10).pow(-(digits as i32 + 10)) / denom.abs();
    Ok(LValue { value: value.with_prec(out_prec), abs_error_bound: err, s: s.clone(), precision_digits: digits })
}

/// |Lambda(s) - eps Lambda(w + 1 - s)| relative to max(1, |Lambda(s)|),
/// from sums split at c and 1/c.
pub fn fe_residual(spec: &LFunctionSpec, s: &Complex, digits: u32) -> Result<Float> {
    let eps = known_root_number(spec)?;
    let c = split_c(64).to_f64();
    let (h1, h2, prec) = with_engine(spec, s, digits, c, split_halves)?;
    let eps = eps.with_prec(prec);
    let l1 = h1.first + eps.mul_ref(&h1.second);
    let l2 = h2.first + eps.mul_ref(&h2.second);
    let scale = Float::with_val(prec, l1.abs()).max(&Float::with_val(prec, 1));
    Ok((l1 - l2).abs() / scale)
}

/// Solves for eps at real probe points from two split points each.
pub fn solve_root_number(spec: &LFunctionSpec, probes: [f64; 2], digits: u32) -> Result<Complex> {
    let c = split_c(64).to_f64();
    let mut found: Vec<Complex> = Vec::new();
    let mut prec_out = 0;
    for probe in probes {
        let s = Complex::real(Float::with_val((digits as f64 * 3.33) as u32 + 64, probe));
        let (h1, h2, prec) = with_engine(spec, &s, digits, c, split_halves)?;
        prec_out = prec;
        let num = h2.first - &h1.first;
        let den = h1.second - &h2.second;
        found.push(num.div_ref(&den));
    }
    let tol = Float::with_val(prec_out, 1e-20);
    let e = found[0].clone();
    let spread = (found[1].clone() - &e).abs();
    let unit = (Float::with_val(prec_out, e.abs()) - 1u32).abs();
    if spread > tol || unit > tol {
        let residual = Float::with_val(64, spread.max(&unit)).to_string_radix(10, Some(6));
        return Err(Error::Inconsistent { residual });
    }
    Ok(e)
}

/// Default probe points on either side of the center of symmetry.
pub fn default_probes(spec: &LFunctionSpec) -> [f64; 2] {
    let center = (spec.motivic_weight + 1) as f64 / 2.0;
    [center + 0.31, center + 1.73]
}

/// Outcome of testing one candidate set of functional-equation data.
#[derive(Debug, Clone)]
pub struct CandidateReport {
    pub description: String,
    pub root_number: Option<i32>,
    pub residual: Option<f64>,
    pub accepted: bool,
}

/// Tries every (conductor, gamma shifts) candidate and keeps the unique consistent one.
pub fn select_functional_equation(
    base: &LFunctionSpec,
    candidates: &[(u64, Vec<GammaShift>)],
    digits: u32,
) -> Result<(LFunctionSpec, Vec<CandidateReport>)> {
    let mut reports = Vec::new();
    let mut accepted = Vec::new();
    for (n, g) in candidates {
        let mut spec = base.with_data(*n, g.clone());
        let desc = spec.describe();
        let eps = match solve_root_number(&spec, default_probes(&spec), digits) {
            Ok(e) => e,
            Err(_) => {
                reports.push(CandidateReport { description: desc, root_number: None, residual: None, accepted: false });
                continue;
            }
        };
        let sign = if eps.re.is_sign_negative() { -1 } else { 1 };
        spec.root_number = RootNumber::sign(sign);
        let center = (spec.motivic_weight + 1) as f64 / 2.0;
        let prec = (digits as f64 * 3.33) as u32 + 64;
        let test = Complex::from_f64(prec, center + 0.77, 0.41);
        let r = fe_residual(&spec, &test, digits)?;
        let ok = r < Float::with_val(64, 10f64.powi(-(digits as i32 - 20)));
        reports.push(CandidateReport {
            description: desc,
            root_number: Some(sign),
            residual: Some(r.to_f64()),
            accepted: ok,
        });
        if ok {
            accepted.push(spec);
        }
    }
    match accepted.len() {
        1 => Ok((accepted.pop().unwrap(), reports)),
        0 => Err(Error::Inconsistent { residual: "no candidate satisfies the functional equation".into() }),
        _ => Err(Error::Inconsistent { residual: "several candidates satisfy the functional equation".into() }),
    }
}
