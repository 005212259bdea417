//! Algebraic normalizations of critical values.
//!
//! Petersson norms come from the symmetric square at its edge point,
//!
//!   <f, f> = Gamma(k) L(Sym^2 f, k) / (2^{2k-1} pi^{k+1}),
//!
//! and the normalized values are recognized as rationals by continued fractions.

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use super::complex::pi;
use super::{
    afe_eval, conv_spec, select_functional_equation, sym2_spec, CandidateReport, Complex, GammaShift, LFunctionSpec,
};
use crate::error::{Error, Result};
use crate::exact::{cf_recognize, CharacterKind, DirichletCharacter, ExactScalar};
use crate::qexp::QExpansion;

/// Extra digits evaluated beyond the recognition precision.
const GUARD_DIGITS: u32 = 10;

/// Precision used when selecting functional-equation data.
const SELECTION_DIGITS: u32 = 40;

/// Gauss sum of the odd quadratic character mod 3.
pub fn gauss_sum(chi: &DirichletCharacter) -> Result<ExactScalar> {
    if chi.modulus != 3 || chi.kind != CharacterKind::Kronecker(-3) {
        return Err(Error::Unsupported(format!("Gauss sum of a character mod {}", chi.modulus)));
    }
    let mut g = ExactScalar::new(Rational::from(1), 3, 0);
    g.imaginary = true;
    Ok(g)
}

/// i^e as an exact scalar.
pub fn i_power(e: i64) -> ExactScalar {
    let r = e.rem_euclid(4);
    let sign = if r >= 2 { -1 } else { 1 };
    let mut x = ExactScalar::rational(Rational::from(sign));
    x.imaginary = r % 2 == 1;
    x
}

/// Rational factor folded into the Petersson norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    #[serde(serialize_with = "ser_rational")]
    pub factor: Rational,
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration { factor: Rational::from(1) }
    }
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// A recognized normalized value with the float it came from.
#[derive(Debug, Clone)]
pub struct AlgValue {
    pub label: String,
    pub value: Float,
    pub rational: Rational,
    pub digits: u32,
}

fn float_prec(digits: u32) -> u32 {
    ((digits + GUARD_DIGITS) as f64 * std::f64::consts::LOG2_10) as u32 + 64
}

/// Default bound on recognized denominators, in digits.
pub fn default_den_digits(digits: u32) -> u32 {
    digits.saturating_sub(50) / 2
}

fn recognize(label: String, value: Float, digits: u32, den_digits: u32) -> Result<AlgValue> {
    match cf_recognize(&value, digits, den_digits)? {
        Some(rational) => Ok(AlgValue { label, value, rational, digits }),
        None => Err(Error::RecognitionFailed { value: format!("{label} = {}", value.to_string_radix(10, Some(40))) }),
    }
}

fn check_level_one(f: &QExpansion) -> Result<()> {
    if f.level != 1 {
        return Err(Error::UnsupportedLevel(f.level));
    }
    Ok(())
}

/// Sym^2 candidates: both archimedean parities over conductors 1, 3, 9, 27.
fn sym2_candidates(k: i64) -> Vec<(u64, Vec<GammaShift>)> {
    let mut out = Vec::new();
    for n in [1, 3, 9, 27] {
        for shift in [1 - k, 2 - k] {
            out.push((n, vec![GammaShift::c(0), GammaShift::r(shift)]));
        }
    }
    out
}

/// Shared state for L_alg computations attached to one level-1 eigenform.
pub struct AlgContext {
    pub form: QExpansion,
    pub digits: u32,
    pub calibration: Calibration,
    pub petersson: Float,
    /// Bound on recognized denominators, in digits.
    pub den_digits: u32,
    sym2_trivial: LFunctionSpec,
    sym2_odd: Option<LFunctionSpec>,
    pub selections: Vec<(String, Vec<CandidateReport>)>,
}

impl AlgContext {
    /// Selects Sym^2 functional equations and computes the Petersson norm.
    pub fn new(form: &QExpansion, digits: u32, calibration: Calibration) -> Result<Self> {
        check_level_one(form)?;
        if digits < 60 {
            return Err(Error::PrecisionTooLow(format!("{digits} digits, at least 60 needed")));
        }
        let base = sym2_spec(form, DirichletCharacter::trivial(1), 2)?;
        let (sym2_trivial, reports) =
            select_functional_equation(&base, &sym2_candidates(form.weight), SELECTION_DIGITS)?;
        let mut ctx = AlgContext {
            form: form.clone(),
            digits,
            calibration,
            petersson: Float::new(64),
            den_digits: default_den_digits(digits),
            sym2_trivial,
            sym2_odd: None,
            selections: vec![("Sym^2".into(), reports)],
        };
        ctx.petersson = ctx.compute_petersson()?;
        Ok(ctx)
    }

    fn eval_digits(&self) -> u32 {
        self.digits + GUARD_DIGITS
    }

    fn compute_petersson(&self) -> Result<Float> {
        let k = self.form.weight;
        let prec = float_prec(self.digits);
        let s = Complex::real(Float::with_val(prec, k));
        let l = afe_eval(&self.sym2_trivial, &s, self.eval_digits())?.value.re;
        let gamma_k = Float::with_val(prec, Float::factorial((k - 1) as u32));
        let two = Float::with_val(prec, Float::i_exp(1, (2 * k - 1) as i32));
        let denom = two * pi(prec).pow((k + 1) as u32);
        let mut pet = gamma_k * l / denom;
        pet *= Float::with_val(prec, &self.calibration.factor);
        Ok(pet)
    }

    /// Selected Sym^2 twist data, primitive twists only (trivial or chi_{-3}).
    fn sym2_for(&mut self, twist: &DirichletCharacter) -> Result<LFunctionSpec> {
        if twist.is_trivial() {
            return Ok(self.sym2_trivial.clone());
        }
        if let Some(s) = &self.sym2_odd {
            return Ok(s.clone());
        }
        let base = sym2_spec(&self.form, *twist, 2)?;
        let (spec, reports) = select_functional_equation(&base, &sym2_candidates(self.form.weight), SELECTION_DIGITS)?;
        self.selections.push((format!("Sym^2 x chi_{}", twist.modulus), reports));
        self.sym2_odd = Some(spec.clone());
        Ok(spec)
    }

    /// L(Sym^2 f x chi, s) at integer s, including the imprimitive Euler factors of chi.
    pub fn sym2_value(&mut self, twist: &DirichletCharacter, s: i64) -> Result<Float> {
        let prim = twist.primitive();
        let spec = self.sym2_for(&prim)?;
        let prec = float_prec(self.digits);
        let sc = Complex::real(Float::with_val(prec, s));
        let mut l = afe_eval(&spec, &sc, self.eval_digits())?.value.re;
        for p in crate::exact::arith::primes_up_to(twist.modulus as usize) {
            if twist.modulus % p == 0 && prim.conductor() % p != 0 {
                let loc = spec.coeffs.local_factor(p)?;
                let x = Float::with_val(prec, p).pow(-s as i32);
                let mut v = Float::new(prec);
                for c in loc.iter().rev() {
                    v = v * &x + c;
                }
                l *= v;
            }
        }
        Ok(l)
    }

    /// L(Sym^2 f x chi^{j+1}, j + k - 1) / (pi^{k - 1 + 2j} <f, f>) for chi = chi_{-3}.
    pub fn lalg_sym2(&mut self, j: i64) -> Result<AlgValue> {
        let k = self.form.weight;
        if j < 2 || j > 2 * k - 1 {
            return Err(Error::NotCritical { s: j + k - 1, reason: format!("j = {j} outside 2..{}", 2 * k - 1) });
        }
        let chi = DirichletCharacter::kronecker(-3).pow((j + 1) as u32);
        let s = j + k - 1;
        let l = self.sym2_value(&chi, s)?;
        let prec = float_prec(self.digits);
        let denom = pi(prec).pow((k - 1 + 2 * j) as u32) * &self.petersson;
        let twist = if j % 2 == 0 { "chi" } else { "chi^2" };
        let label = format!("L_alg({s}, Sym^2 f x {twist})");
        recognize(label, l / denom, self.digits, self.den_digits)
    }

    /// Convolution data for f x g, selected over conductors 3 and 9.
    pub fn conv_setup(&mut self, g: &QExpansion) -> Result<LFunctionSpec> {
        let base = conv_spec(&self.form, g, 2)?;
        let shifts = vec![GammaShift::c(0), GammaShift::c(1 - g.weight)];
        let candidates: Vec<(u64, Vec<GammaShift>)> = [3, 9].iter().map(|&n| (n, shifts.clone())).collect();
        let (spec, reports) = select_functional_equation(&base, &candidates, SELECTION_DIGITS)?;
        self.selections.push(("f x g".into(), reports));
        Ok(spec)
    }

    /// L(f x g, j) / (pi^{2j + 1 - l} G(chi_g) i^{k + l - 2j} <f, f>) for g of weight l < k.
    pub fn lalg_conv(&self, spec: &LFunctionSpec, g: &QExpansion, j: i64) -> Result<AlgValue> {
        let (k, l) = (self.form.weight, g.weight);
        if j < l || j >= k {
            return Err(Error::NotCritical { s: j, reason: format!("outside the critical range {l} <= j < {k}") });
        }
        let norm = gauss_sum(&g.character)?.mul(&i_power(k + l - 2 * j));
        if norm.imaginary {
            return Err(Error::Unsupported("normalization is not real".into()));
        }
        let prec = float_prec(self.digits);
        let sc = Complex::real(Float::with_val(prec, j));
        let lv = afe_eval(spec, &sc, self.eval_digits())?.value.re;
        let denom = pi(prec).pow((2 * j + 1 - l) as u32) * norm.to_float(prec) * &self.petersson;
        recognize(format!("L_alg({j}, f x g)"), lv / denom, self.digits, self.den_digits)
    }
}

/// Petersson norm of a level-1 eigenform.
pub fn petersson_norm(f: &QExpansion, digits: u32) -> Result<Float> {
    Ok(AlgContext::new(f, digits, Calibration::default())?.petersson)
}

/// Recognized L_alg(j + k - 1, Sym^2 f x chi^{j+1}).
pub fn lalg_sym2(f: &QExpansion, j: i64, digits: u32) -> Result<ExactScalar> {
    let mut ctx = AlgContext::new(f, digits, Calibration::default())?;
    Ok(ExactScalar::rational(ctx.lalg_sym2(j)?.rational))
}

/// Recognized L_alg(j, f x g).
pub fn lalg_conv(f: &QExpansion, g: &QExpansion, j: i64, digits: u32) -> Result<ExactScalar> {
    let mut ctx = AlgContext::new(f, digits, Calibration::default())?;
    let spec = ctx.conv_setup(g)?;
    Ok(ExactScalar::rational(ctx.lalg_conv(&spec, g, j)?.rational))
}
