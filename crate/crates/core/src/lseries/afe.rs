//! Smoothed approximate functional equation.
//!
//! With Lambda(s) = A^s gamma(s) L(s), A = sqrt(N) / pi^{d/2}, and a split
//! point c > 0,
//!
//!   Lambda(s) = c^s sum b(n) G_s(n c / A)
//!             + eps c^{s-w-1} sum conj b(n) G_{w+1-s}(n / (c A))
//!             + sum_k r_k c^{s - s_k} / (s - s_k),
//!
//! where r_k are the residues of Lambda at its poles s_k. The value is
//! independent of c exactly when the functional-equation data are right.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer};

use super::complex::{pi, Complex};
use super::gamma::{gamma_product, GFunction, PoleTable};
use super::LFunctionSpec;
use crate::error::{Error, Result};

const LN10: f64 = std::f64::consts::LN_10;
const LN2: f64 = std::f64::consts::LN_2;

/// Crude upper estimate of ln |G_s(t)| for large t.
fn ln_g_estimate(d: usize, lambdas: &[i64], t: f64) -> f64 {
    let d = d as f64;
    let beta = (lambdas.iter().sum::<i64>() as f64 + 1.0 - d) / d;
    -d * t.powf(2.0 / d) + (beta + 1.0) * t.ln().max(0.0) + 5.0
}

fn ln_coeff_bound(w: i64, d: usize, n: usize) -> f64 {
    let ln = (n as f64).ln();
    (w as f64 / 2.0) * ln + d as f64 * (ln + 1.0).ln() * 2.0 + 1.0
}

/// First n past which every term is estimated below `ln_tol`.
fn estimate_n_max(spec: &LFunctionSpec, tau: f64, ln_tol: f64) -> usize {
    let d = spec.degree();
    let lambdas = spec.lambdas();
    let mut n = 1usize;
    loop {
        let t = n as f64 * tau;
        let v = ln_g_estimate(d, &lambdas, t) + ln_coeff_bound(spec.motivic_weight, d, n);
        if v < ln_tol && t > 1.0 {
            return n;
        }
        n += 1 + n / 16;
    }
}

/// Evaluates sum_{n <= n_max} b(n) G(n tau) at the plan's precision.
fn g_sum(
    g: &GFunction,
    planner: &GFunction,
    coeffs: &[Integer],
    tau: &Float,
    n_max: usize,
    cut: f64,
) -> Result<(Complex, f64)> {
    let prec = g.prec;
    let tau_f = tau.to_f64();
    let terms: Vec<Result<(Complex, f64)>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            if coeffs[n].is_zero() {
                return Ok((Complex::zero(prec), f64::NEG_INFINITY));
            }
            let tf = n as f64 * tau_f;
            let (_, counts) = planner.plan(tf, cut).ok_or_else(|| Error::Unsupported("pole table too short".into()))?;
            let t = Float::with_val(prec, tau * n as u32);
            let v = g.eval(&t, &counts);
            let b = Float::with_val(prec, &coeffs[n]);
            let term = v.scale(&b);
            let mag = term.ln_abs_f64();
            Ok((term, mag))
        })
        .collect();
    let mut acc = Complex::zero(prec);
    let mut last = f64::NEG_INFINITY;
    for t in terms {
        let (term, mag) = t?;
        acc = acc + term;
        if mag > f64::NEG_INFINITY {
            last = mag;
        }
    }
    Ok((acc, last))
}

/// The two halves of the approximate functional equation at one split point.
pub struct Halves {
    /// c^s sum b(n) G_s(nc/A) plus the polar terms.
    pub first: Complex,
    /// c^{s-w-1} sum conj b(n) G_{w+1-s}(n/(cA)).
    pub second: Complex,
    pub gamma_s: Option<Complex>,
    pub a_pow_s: Complex,
    pub bits: u32,
}

/// Engine for one L-function at one point s, reusable across split points.
pub struct AfeEngine<'a> {
    spec: &'a LFunctionSpec,
    s: Complex,
    digits: u32,
    prec: u32,
    a: Float,
    g_s: GFunction,
    g_dual: GFunction,
    plan_s: GFunction,
    plan_dual: GFunction,
    coeffs: Vec<Integer>,
    n_max_s: usize,
    n_max_dual: usize,
    cut: f64,
    ln_tol: f64,
}

impl<'a> AfeEngine<'a> {
    /// Prepares sums for split points in [1/c_max, c_max].
    pub fn new(spec: &'a LFunctionSpec, s: &Complex, digits: u32, c_max: f64) -> Result<Self> {
        Self::with_terms_factor(spec, s, digits, c_max, 1.0)
    }

    /// As `new`, with the estimated number of terms multiplied by `factor`.
    pub fn with_terms_factor(
        spec: &'a LFunctionSpec,
        s: &Complex,
        digits: u32,
        c_max: f64,
        factor: f64,
    ) -> Result<Self> {
        let lambdas = spec.lambdas();
        let d = spec.degree();
        let w = spec.motivic_weight;
        let a_f = (spec.conductor as f64).sqrt() / std::f64::consts::PI.powf(d as f64 / 2.0);

        // low precision pass for magnitudes
        let low_prec = 128;
        let s_low = s.with_prec(low_prec);
        let dual_low = dual_point(&s_low, w);
        let mut low_table = PoleTable::new(&lambdas, low_prec);

        // scale of Lambda near the first terms
        let mut k = 64;
        low_table.ensure(k);
        let probe_t = 1.0 / (a_f * c_max);
        let scale = {
            let g1 = GFunction::new(&low_table, &s_low, k);
            let g2 = GFunction::new(&low_table, &dual_low, k);
            let mut best: f64 = 0.0;
            for (g, t) in [(&g1, c_max / a_f), (&g2, probe_t)] {
                if let Some((_, counts)) = g.plan(t, 60.0) {
                    let v = g.eval(&Float::with_val(low_prec, t), &counts);
                    best = best.max(v.ln_abs_f64());
                }
            }
            best
        };
        let ln_tol = -((digits + 15) as f64) * LN10 + scale;
        let n_max_s = (estimate_n_max(spec, 1.0 / (a_f * c_max), ln_tol) as f64 * factor).ceil() as usize;
        let n_max_dual = n_max_s;
        let n_max = n_max_s.max(n_max_dual);
        let t_max = n_max as f64 * c_max / a_f;

        // grow the table until the largest t is covered, then size the precision
        let mut bits = ((digits + 15) as f64 * LN10 / LN2) as u32 * 2 + 64;
        let mut plan_s;
        let mut plan_dual;
        loop {
            plan_s = GFunction::new(&low_table, &s_low, k);
            plan_dual = GFunction::new(&low_table, &dual_low, k);
            let cut = bits as f64 * LN2 + 10.0;
            let a = plan_s.plan(t_max, cut);
            let b = plan_dual.plan(t_max, cut);
            let (Some((m1, _)), Some((m2, _))) = (a, b) else {
                k *= 2;
                low_table.ensure(k);
                continue;
            };
            let ln_b = ln_coeff_bound(w, d, n_max);
            let need = (m1.max(m2) + ln_b - ln_tol) / LN2 + (n_max as f64).log2() + 32.0;
            let need = need.max(((digits + 15) as f64 * LN10 / LN2) + 32.0) as u32;
            if need <= bits {
                bits = need;
                break;
            }
            bits = need;
        }
        let cut = bits as f64 * LN2 + 10.0;
        let mut hi = PoleTable::new(&lambdas, bits);
        hi.ensure(k);
        let s_hi = s.with_prec(bits);
        let dual_hi = dual_point(&s_hi, w);
        let g_s = GFunction::new(&hi, &s_hi, k);
        let g_dual = GFunction::new(&hi, &dual_hi, k);
        let coeffs = spec.coeffs.generate(n_max)?;
        let a = Float::with_val(bits, spec.conductor).sqrt() / Float::with_val(bits, pi(bits).pow(d as f64 / 2.0));
        Ok(AfeEngine {
            spec,
            s: s_hi,
            digits,
            prec: bits,
            a,
            g_s,
            g_dual,
            plan_s,
            plan_dual,
            coeffs,
            n_max_s,
            n_max_dual,
            cut,
            ln_tol,
        })
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    pub fn terms_used(&self) -> usize {
        self.n_max_s.max(self.n_max_dual)
    }

    /// Both halves at split point c.
    pub fn halves(&self, c: &Float) -> Result<Halves> {
        let prec = self.prec;
        let w = self.spec.motivic_weight;
        let c = Float::with_val(prec, c);
        let tau1 = Float::with_val(prec, &c / &self.a);
        let tau2 = Float::with_val(prec, Float::with_val(prec, &c * &self.a).recip_ref());
        let n1 = self.n_max_s.min(self.coeffs.len() - 1);
        let n2 = self.n_max_dual.min(self.coeffs.len() - 1);
        let (sum1, tail1) = g_sum(&self.g_s, &self.plan_s, &self.coeffs, &tau1, n1, self.cut)?;
        let (sum2, tail2) = g_sum(&self.g_dual, &self.plan_dual, &self.coeffs, &tau2, n2, self.cut)?;
        if tail1.max(tail2) > self.ln_tol + 5.0 {
            return Err(Error::InsufficientCoefficients {
                needed: 2 * self.terms_used(),
                available: self.terms_used(),
            });
        }
        let first = Complex::real_pow(&c, &self.s).mul_ref(&sum1);
        let exp2 = self.s.add_real(&Float::with_val(prec, -(w + 1)));
        let second = Complex::real_pow(&c, &exp2).mul_ref(&sum2);
        let mut polar = Complex::zero(prec);
        for (sk, rk) in &self.spec.poles {
            let sk_f = Float::with_val(prec, *sk);
            let diff = self.s.add_real(&Float::with_val(prec, -&sk_f));
            let term = Complex::real_pow(&c, &diff).div_ref(&diff).scale(&Float::with_val(prec, rk));
            polar = polar + term;
        }
        let gamma_s = self.g_s.gamma_s.clone();
        let a_pow_s = Complex::real_pow(&self.a, &self.s);
        Ok(Halves { first: first + polar, second, gamma_s, a_pow_s, bits: prec })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }
}

fn dual_point(s: &Complex, w: i64) -> Complex {
    let prec = s.prec();
    Complex::new(Float::with_val(prec, w + 1) - &s.re, Float::with_val(prec, -&s.im))
}

/// gamma(s) A^s for the spec.
pub fn gamma_factor(spec: &LFunctionSpec, s: &Complex) -> Complex {
    let prec = s.prec();
    let d = spec.degree();
    let a = Float::with_val(prec, spec.conductor).sqrt() / Float::with_val(prec, pi(prec).pow(d as f64 / 2.0));
    gamma_product(&spec.lambdas(), s).mul_ref(&Complex::real_pow(&a, s))
}
