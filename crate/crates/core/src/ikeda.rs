//! Fourier coefficients of Ikeda lifts at supported local data.
//!
//! A normalized coefficient of the lift I_phi at a hermitian matrix h is
//!
//!   |gamma(h)|^x prod_{p | gamma(h)} F_p(h, alpha'_p),
//!
//! with gamma(h) = (-D_K)^{floor(n/2)} det h, x = k (n even) or k - 1/2 (n odd),
//! and alpha'_p = p^{-x} alpha_p for a Satake parameter alpha_p of phi.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::arith::{factor, primes_up_to};
use crate::exact::kronecker;
use crate::heckechar::ImagQuadField;
use crate::qexp::{satake, QExpansion};

/// Parameters of the lift: phi has weight 2k + 1 and level D_K for n = 2m,
/// weight 2k and level 1 for n = 2m + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiftContext {
    pub n: i64,
    pub m: i64,
    pub k: i64,
    /// Fundamental discriminant of K (negative).
    pub disc: i64,
}

impl LiftContext {
    pub fn new(n: i64, k: i64, disc: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Unsupported(format!("n = {n} < 2")));
        }
        if k < 1 {
            return Err(Error::BadWeight(k));
        }
        ImagQuadField::new(disc)?;
        Ok(LiftContext { n, m: n / 2, k, disc })
    }

    pub fn d_k(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    /// Twice the exponent x.
    pub fn two_x(&self) -> i64 {
        if self.n % 2 == 0 {
            2 * self.k
        } else {
            2 * self.k - 1
        }
    }

    pub fn x_exponent(&self) -> Rational {
        Rational::from((self.two_x(), 2))
    }

    /// Weight of the attached elliptic form.
    pub fn phi_weight(&self) -> i64 {
        if self.n % 2 == 0 {
            2 * self.k + 1
        } else {
            2 * self.k
        }
    }

    pub fn phi_level(&self) -> u64 {
        if self.n % 2 == 0 {
            self.d_k()
        } else {
            1
        }
    }

    fn check_form(&self, f: &QExpansion) -> Result<()> {
        if f.weight != self.phi_weight() {
            return Err(Error::BadWeight(f.weight));
        }
        if f.level != self.phi_level() {
            return Err(Error::UnsupportedLevel(f.level));
        }
        Ok(())
    }
}

/// (-D_K)^{floor(n/2)} det h.
pub fn gamma_of(det_h: &Rational, ctx: &LiftContext) -> Result<Rational> {
    if *det_h == 0 {
        return Err(Error::ZeroInput);
    }
    let c = Integer::from(ctx.disc).pow(ctx.m as u32);
    Ok(Rational::from(det_h * c))
}

/// Laurent polynomial with integer coefficients, keyed by degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    pub coeffs: BTreeMap<i64, Integer>,
}

impl LaurentPoly {
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut coeffs = BTreeMap::new();
        for &(d, c) in terms {
            if c != 0 {
                *coeffs.entry(d).or_insert_with(Integer::new) += c;
            }
        }
        coeffs.retain(|_, c: &mut Integer| *c != 0);
        LaurentPoly { coeffs }
    }

    /// F(1/X).
    pub fn invert(&self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(d, c)| (-d, c.clone())).collect() }
    }

    pub fn scale(&self, s: i64) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(d, c)| (*d, Integer::from(c * s))).collect() }
    }

    /// F(1/X) = sign F(X).
    pub fn satisfies_functional_equation(&self, sign: i32) -> bool {
        self.invert() == self.scale(sign as i64)
    }

    pub fn top_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn bottom_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().rev() {
            let neg = *c < 0;
            let abs = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match d {
                0 => String::new(),
                1 => "X".into(),
                d => format!("X^{d}"),
            };
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// F_p for val_p(gamma) = v and Hilbert-symbol sign chi_sign.
pub fn local_poly(v: u32, chi_sign: i32) -> Result<LaurentPoly> {
    match (v, chi_sign) {
        (0, _) => Ok(LaurentPoly::from_terms(&[(0, 1)])),
        (1, -1) => Ok(LaurentPoly::from_terms(&[(1, 1), (-1, -1)])),
        (1, 1) => Err(Error::Unsupported("F_p for v = 1 and sign +1 has an undetermined middle coefficient".into())),
        _ => Err(Error::Unsupported(format!("F_p for v = {v}"))),
    }
}

/// Element u + v alpha of Q(alpha), alpha^2 = t alpha - nu.
#[derive(Debug, Clone)]
struct SatakeElem {
    u: Rational,
    v: Rational,
}

struct SatakeField {
    t: Rational,
    nu: Rational,
}

impl SatakeField {
    fn mul(&self, a: &SatakeElem, b: &SatakeElem) -> SatakeElem {
        // (a.u + a.v al)(b.u + b.v al), al^2 = t al - nu
        let vv = Rational::from(&a.v * &b.v);
        let u = Rational::from(&a.u * &b.u) - Rational::from(&vv * &self.nu);
        let v = Rational::from(&a.u * &b.v) + Rational::from(&a.v * &b.u) + vv * &self.t;
        SatakeElem { u, v }
    }

    /// alpha^d for any integer d; alpha^{-1} = (t - alpha) / nu.
    fn alpha_pow(&self, d: i64) -> SatakeElem {
        let base = if d >= 0 {
            SatakeElem { u: Rational::new(), v: Rational::from(1) }
        } else {
            SatakeElem { u: Rational::from(&self.t / &self.nu), v: Rational::from(-1) / &self.nu }
        };
        let mut acc = SatakeElem { u: Rational::from(1), v: Rational::new() };
        for _ in 0..d.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }
}

/// Hilbert-symbol sign at an odd prime p || gamma with p prime to D_K.
fn local_sign(ctx: &LiftContext, p: u64) -> i32 {
    kronecker(ctx.disc, p as i64)
}

/// The local polynomial used at p: the sign entering F_p is chi_p(gamma)^{n-1}.
fn supported_local(ctx: &LiftContext, p: u64, v: u32) -> Result<LaurentPoly> {
    if v == 0 {
        return local_poly(0, 1);
    }
    if v > 1 {
        return Err(Error::UnsupportedLocalDatum(format!("val_{p}(gamma) = {v}")));
    }
    if p == 2 || ctx.d_k() % p == 0 {
        return Err(Error::UnsupportedLocalDatum(format!("p = {p} divides 2 D_K")));
    }
    let chi = local_sign(ctx, p);
    if chi != -1 {
        return Err(Error::UnsupportedLocalDatum(format!("p = {p} splits in K")));
    }
    if ctx.n % 2 == 0 {
        return local_poly(1, -1);
    }
    // n odd: the sign is (+1)^{n-1}, F_p = X + a + 1/X, and a p^x with x half-integral
    // is irrational, so a = 0.
    Ok(LaurentPoly::from_terms(&[(1, 1), (-1, 1)]))
}

/// p^{vx} F(p^{-x} alpha), exactly, as an element of Q(alpha).
fn local_value(ctx: &LiftContext, f: &QExpansion, p: u64, v: u32, poly: &LaurentPoly) -> Result<SatakeElem> {
    let loc = satake(f, p)?;
    if loc.norm == 0 {
        return Err(Error::UnsupportedLocalDatum(format!("p = {p} divides the level")));
    }
    let field = SatakeField { t: Rational::from(&loc.trace), nu: Rational::from(&loc.norm) };
    let mut acc = SatakeElem { u: Rational::new(), v: Rational::new() };
    for (d, c) in &poly.coeffs {
        let two_e = (v as i64 - d) * ctx.two_x();
        if two_e % 2 != 0 {
            return Err(Error::UnsupportedLocalDatum(format!("half-integral power of {p}")));
        }
        let scale = Rational::from(Integer::from(p).pow((two_e / 2) as u32) * c);
        let term = field.alpha_pow(*d);
        acc.u += Rational::from(&term.u * &scale);
        acc.v += term.v * scale;
    }
    Ok(acc)
}

/// Normalized lift coefficient at a matrix with gamma(h) = gamma.
pub fn lift_coeff(gamma: &Integer, ctx: &LiftContext, f: &QExpansion) -> Result<Integer> {
    if *gamma == 0 {
        return Err(Error::ZeroInput);
    }
    ctx.check_form(f)?;
    let mut out = Rational::from(1);
    let fac = factor(&Integer::from(gamma.abs_ref()));
    for (p, e) in &fac.factors {
        let p = p.to_u64().ok_or_else(|| Error::UnsupportedLocalDatum(format!("prime {p} too large")))?;
        let poly = supported_local(ctx, p, *e)?;
        let val = local_value(ctx, f, p, *e, &poly)?;
        if val.v != 0 {
            return Err(Error::UnsupportedLocalDatum(format!("irrational local factor at {p}")));
        }
        out *= val.u;
    }
    if *out.denom() != 1 {
        return Err(Error::NonIntegralCoefficient { index: gamma.to_usize().unwrap_or(0), ell: 0 });
    }
    Ok(out.numer().clone())
}

/// Supported gamma up to `bound` in absolute value: 1, -1, and -m for squarefree m
/// built from odd primes inert in K.
pub fn supported_gammas(ctx: &LiftContext, bound: u64) -> Vec<Integer> {
    let inert: Vec<u64> = primes_up_to(bound as usize)
        .into_iter()
        .filter(|&p| p != 2 && ctx.d_k() % p != 0 && local_sign(ctx, p) == -1)
        .collect();
    let mut ms = vec![1u64];
    for &p in &inert {
        let extra: Vec<u64> = ms.iter().filter(|&&m| m * p <= bound).map(|&m| m * p).collect();
        ms.extend(extra);
    }
    ms.sort_unstable();
    let mut out = vec![Integer::from(1), Integer::from(-1)];
    out.extend(ms.into_iter().filter(|&m| m > 1).map(|m| -Integer::from(m)));
    out
}

/// Outcome of comparing lifts of two forms modulo ell^r.
#[derive(Debug, Clone, Serialize)]
pub struct CongruenceReport {
    pub ell: u64,
    pub r: u32,
    pub premise_holds: bool,
    /// First index where the coefficients of the two forms differ mod ell^r.
    pub premise_violation: Option<usize>,
    pub checked: usize,
    /// First gamma where the lift coefficients differ mod ell^r.
    #[serde(serialize_with = "ser_opt_int")]
    pub first_violation: Option<Integer>,
}

fn ser_opt_int<S: serde::Serializer>(x: &Option<Integer>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

impl CongruenceReport {
    pub fn congruent(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks lift_coeff(f) = lift_coeff(f') mod ell^r at every supported gamma with |gamma| <= bound.
pub fn lift_congruence_check(
    f: &QExpansion,
    f2: &QExpansion,
    ctx: &LiftContext,
    ell: u64,
    r: u32,
    bound: u64,
) -> Result<CongruenceReport> {
    let modulus = Integer::from(ell).pow(r);
    let top = (bound as usize).min(f.truncation()).min(f2.truncation());
    let mut premise_violation = None;
    for i in 1..=top {
        let d = Rational::from(&f.coeffs[i] - &f2.coeffs[i]);
        if *d.denom() != 1 || !d.numer().is_divisible(&modulus) {
            premise_violation = Some(i);
            break;
        }
    }
    let gammas = supported_gammas(ctx, bound);
    let mut first_violation = None;
    for g in &gammas {
        let a = lift_coeff(g, ctx, f)?;
        let b = lift_coeff(g, ctx, f2)?;
        if !Integer::from(&a - &b).is_divisible(&modulus) {
            first_violation = Some(g.clone());
            break;
        }
    }
    Ok(CongruenceReport {
        ell,
        r,
        premise_holds: premise_violation.is_none(),
        premise_violation,
        checked: gammas.len(),
        first_violation,
    })
}

/// Smallest odd prime p <= bound with p = -1 mod D_K and a(p) != 0 mod ell.
pub fn nonvanishing_sweep(f: &QExpansion, disc: i64, ell: u64, bound: u64) -> Result<Option<u64>> {
    let d = disc.unsigned_abs();
    if ell == 2 || d % ell == 0 {
        return Err(Error::Unsupported(format!("ell = {ell} divides 2 D_K")));
    }
    if (bound as usize) > f.truncation() {
        return Err(Error::InsufficientCoefficients { needed: bound as usize, available: f.truncation() });
    }
    let candidates: Vec<u64> = primes_up_to(bound as usize).into_iter().filter(|&p| p != 2 && p % d == d - 1).collect();
    let ell_int = Integer::from(ell);
    let hits: Vec<Result<Option<u64>>> = candidates
        .par_iter()
        .map(|&p| {
            debug_assert_eq!(kronecker(disc, p as i64), -1);
            let a = f.coeff(p as usize)?;
            if *a.denom() != 1 {
                return Err(Error::NonIntegralCoefficient { index: p as usize, ell });
            }
            Ok(if a.numer().is_divisible(&ell_int) { None } else { Some(p) })
        })
        .collect();
    let mut best = None;
    for h in hits {
        if let Some(p) = h? {
            best = Some(best.map_or(p, |b: u64| b.min(p)));
        }
    }
    Ok(best)
}

/// Points s + k + m - n - i + 1 for i = 1..n at which the base-change factors are evaluated.
pub fn std_l_points(ctx: &LiftContext, s: &Rational) -> Vec<Rational> {
    (1..=ctx.n).map(|i| Rational::from(s + (ctx.k + ctx.m - ctx.n - i + 1))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::newform_s26;

    fn sec9() -> LiftContext {
        LiftContext::new(5, 13, -3).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let c5 = sec9();
        assert_eq!(gamma_of(&Rational::from((1, 9)), &c5).unwrap(), 1);
        let c6 = LiftContext::new(6, 13, -3).unwrap();
        assert_eq!(gamma_of(&Rational::from(2), &c6).unwrap(), -54);
        let c2 = LiftContext::new(2, 3, -4).unwrap();
        assert_eq!(gamma_of(&Rational::from(5), &c2).unwrap(), -20);
        assert!(gamma_of(&Rational::new(), &c2).is_err());
    }

    #[test]
    fn local_polys() {
        assert_eq!(local_poly(0, 1).unwrap().to_string(), "1");
        let p = local_poly(1, -1).unwrap();
        assert_eq!(p.to_string(), "X - X^-1");
        assert!(p.satisfies_functional_equation(-1));
        assert!(local_poly(1, 1).is_err());
        assert!(local_poly(2, -1).is_err());
    }

    #[test]
    fn lemma_identity_small() {
        let ctx = sec9();
        let f = newform_s26(60).unwrap();
        assert_eq!(lift_coeff(&Integer::from(1), &ctx, &f).unwrap(), 1);
        assert_eq!(lift_coeff(&Integer::from(-5), &ctx, &f).unwrap(), -741989850);
        assert!(matches!(lift_coeff(&Integer::from(25), &ctx, &f), Err(Error::UnsupportedLocalDatum(_))));
        assert!(matches!(lift_coeff(&Integer::from(-7), &ctx, &f), Err(Error::UnsupportedLocalDatum(_))));
        let prod = lift_coeff(&Integer::from(-55), &ctx, &f).unwrap();
        assert_eq!(prod, f.int_coeff(5) * f.int_coeff(11));
    }

    #[test]
    fn even_n_uses_odd_local_sign() {
        // n = 2: phi of weight 2k + 1 = 7, level 3, character chi_{-3}
        let field = ImagQuadField::new(-3).unwrap();
        let g = crate::heckechar::cm_form(&field, -6, 40).unwrap();
        let ctx = LiftContext::new(2, 3, -3).unwrap();
        for p in [5u64, 11, 17, 23, 29] {
            let c = lift_coeff(&-Integer::from(p), &ctx, &g).unwrap();
            assert_eq!(c, g.int_coeff(p as usize), "p = {p}");
        }
    }

    #[test]
    fn points() {
        let ctx = sec9();
        let pts = std_l_points(&ctx, &Rational::from(-2));
        let want: Vec<Rational> = [8, 7, 6, 5, 4].iter().map(|&x| Rational::from(x)).collect();
        assert_eq!(pts, want);
    }

    #[test]
    fn sweep_small() {
        let f = newform_s26(200).unwrap();
        let w = nonvanishing_sweep(&f, -3, 31, 100).unwrap();
        let oracle = (5..100u64)
            .step_by(6)
            .find(|&p| crate::exact::is_prime(&Integer::from(p)) && f.int_coeff(p as usize) % 31u32 != 0);
        assert_eq!(w, oracle);
        assert!(nonvanishing_sweep(&f, -3, 3, 100).is_err());
    }

    #[test]
    fn supported_gamma_list() {
        let g = supported_gammas(&sec9(), 60);
        let vals: Vec<i64> = g.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(vals, vec![1, -1, -5, -11, -17, -23, -29, -41, -47, -53, -55, -59]);
    }
}
