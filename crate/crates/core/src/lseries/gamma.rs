//! Inverse Mellin transforms of products of Gamma factors.
//!
//! For gamma(z) = prod_j Gamma((z + lambda_j)/2) with integer lambda_j, the
//! incomplete transform
//!
//!   G_s(t) = (1/2 pi i) int gamma(z) t^{-z} dz / (z - s)
//!
//! equals the sum of its residues: gamma(s) t^{-s} plus one term
//! t^{-p} P_p(log t) for every pole p of gamma. Poles fall into two parity
//! classes p = p_top - 2k, so each class is a power series in t^2 with
//! polynomial-in-log coefficients, evaluated by Horner's rule.

use rug::ops::Pow;
use rug::{Assign, Float};

use super::complex::{gamma, Complex};

/// Laurent series u^val * sum c_i u^i, truncated to a fixed number of terms.
#[derive(Debug, Clone)]
struct Laurent {
    val: i32,
    c: Vec<Float>,
}

impl Laurent {
    fn mul(&self, o: &Laurent) -> Laurent {
        let r = self.c.len();
        let prec = self.c[0].prec();
        let mut c = vec![Float::new(prec); r];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate().take(r - i) {
                c[i + j] += Float::with_val(prec, a * b);
            }
        }
        Laurent { val: self.val + o.val, c }
    }

    /// Multiply by (x + u) where x = x2/2.
    fn mul_linear(&mut self, x2: i64) {
        if x2 == 0 {
            self.val += 1;
            return;
        }
        let prec = self.c[0].prec();
        let x = Float::with_val(prec, x2) / 2u32;
        for i in (0..self.c.len()).rev() {
            let prev = if i > 0 { self.c[i - 1].clone() } else { Float::new(prec) };
            self.c[i] = Float::with_val(prec, &self.c[i] * &x) + prev;
        }
    }

    /// Divide by (x + u) where x = x2/2.
    fn div_linear(&mut self, x2: i64) {
        if x2 == 0 {
            self.val -= 1;
            return;
        }
        let prec = self.c[0].prec();
        let x = Float::with_val(prec, x2) / 2u32;
        // q_i = (c_i - q_{i-1}) / x
        let mut prev = Float::new(prec);
        for ci in self.c.iter_mut() {
            let q = Float::with_val(prec, &*ci - &prev) / &x;
            prev = q.clone();
            *ci = q;
        }
    }
}

/// exp of a power series with zero constant term.
fn series_exp(a: &[Float]) -> Vec<Float> {
    let n = a.len();
    let prec = a[0].prec();
    let mut e = vec![Float::new(prec); n];
    e[0] = Float::with_val(prec, 1);
    // m e_m = sum_{k=1}^{m} k a_k e_{m-k}
    for m in 1..n {
        let mut acc = Float::new(prec);
        for k in 1..=m {
            acc += Float::with_val(prec, &a[k] * &e[m - k]) * k as u32;
        }
        e[m] = acc / m as u32;
    }
    e
}

/// Taylor coefficients of Gamma(1 + u) and Gamma(1/2 + u).
fn base_series(r: usize, prec: u32) -> (Vec<Float>, Vec<Float>) {
    let euler = Float::with_val(prec, rug::float::Constant::Euler);
    let ln2 = Float::with_val(prec, rug::float::Constant::Log2);
    let mut a1 = vec![Float::new(prec); r];
    let mut ah = vec![Float::new(prec); r];
    if r > 1 {
        a1[1] = Float::with_val(prec, -&euler);
        ah[1] = Float::with_val(prec, -&euler) - Float::with_val(prec, &ln2 * 2u32);
    }
    for m in 2..r {
        let z = Float::with_val(prec, Float::zeta_u(m as u32)) / m as u32;
        let sign = if m % 2 == 0 { 1 } else { -1 };
        a1[m] = Float::with_val(prec, &z * sign);
        let pow2 = Float::with_val(prec, Float::i_exp(1, m as i32)) - 1u32;
        ah[m] = Float::with_val(prec, &z * &pow2) * sign;
    }
    let g1 = series_exp(&a1);
    let sqrtpi = Float::with_val(prec, rug::float::Constant::Pi).sqrt();
    let gh = series_exp(&ah).into_iter().map(|x| x * &sqrtpi).collect();
    (g1, gh)
}

/// Gamma(a + u) for a = a2/2, as a Laurent series.
fn gamma_series(a2: i64, g1: &[Float], gh: &[Float]) -> Laurent {
    let (mut s, b2) =
        if a2 % 2 == 0 { (Laurent { val: 0, c: g1.to_vec() }, 2) } else { (Laurent { val: 0, c: gh.to_vec() }, 1) };
    if a2 > b2 {
        let mut c2 = b2;
        while c2 < a2 {
            s.mul_linear(c2);
            c2 += 2;
        }
    } else {
        let mut c2 = a2;
        while c2 < b2 {
            s.div_linear(c2);
            c2 += 2;
        }
    }
    s
}

#[derive(Debug, Clone)]
pub struct Pole {
    pub p: i64,
    pub order: usize,
    /// Laurent coefficients of gamma(p + 2u) from u^{-order} up to u^0.
    pub coeffs: Vec<Float>,
}

#[derive(Debug, Clone)]
struct Chain {
    top: i64,
    a2: Vec<i64>,
    factors: Vec<Laurent>,
    poles: Vec<Pole>,
}

/// Pole data of gamma(z) for one parity class, computed on demand.
#[derive(Debug, Clone)]
pub struct PoleTable {
    pub lambdas: Vec<i64>,
    pub prec: u32,
    chains: Vec<Chain>,
}

impl PoleTable {
    pub fn new(lambdas: &[i64], prec: u32) -> Self {
        let d = lambdas.len();
        let r = d + 2;
        let (g1, gh) = base_series(r, prec);
        let mut chains = Vec::new();
        for parity in 0..2i64 {
            let top = lambdas.iter().filter(|&&l| (-l).rem_euclid(2) == parity).map(|&l| -l).max();
            let Some(top) = top else { continue };
            let a2: Vec<i64> = lambdas.iter().map(|&l| top + l).collect();
            let factors = a2.iter().map(|&x| gamma_series(x, &g1, &gh)).collect();
            chains.push(Chain { top, a2, factors, poles: Vec::new() });
        }
        PoleTable { lambdas: lambdas.to_vec(), prec, chains }
    }

    pub fn num_classes(&self) -> usize {
        self.chains.len()
    }

    pub fn class_top(&self, class: usize) -> i64 {
        self.chains[class].top
    }

    pub fn len(&self, class: usize) -> usize {
        self.chains[class].poles.len()
    }

    pub fn poles(&self, class: usize) -> &[Pole] {
        &self.chains[class].poles
    }

    /// Extends every class to at least `k` poles.
    pub fn ensure(&mut self, k: usize) {
        for ch in &mut self.chains {
            while ch.poles.len() < k {
                let p = ch.top - 2 * ch.poles.len() as i64;
                let mut prod = ch.factors[0].clone();
                for f in &ch.factors[1..] {
                    prod = prod.mul(f);
                }
                let order = (-prod.val) as usize;
                assert!(order >= 1, "chain point {p} is not a pole");
                let coeffs = prod.c[..=order].to_vec();
                ch.poles.push(Pole { p, order, coeffs });
                for (a2, f) in ch.a2.iter_mut().zip(ch.factors.iter_mut()) {
                    *a2 -= 2;
                    f.div_linear(*a2);
                }
            }
        }
    }

    pub fn is_pole(&self, z: i64) -> bool {
        self.lambdas.iter().any(|&l| z + l <= 0 && (z + l) % 2 == 0)
    }
}

/// Precomputed residue coefficients of gamma(z) t^{-z} / (z - s).
#[derive(Debug, Clone)]
pub struct GFunction {
    pub s: Complex,
    pub prec: u32,
    /// gamma(s), absent when s is itself a pole.
    pub gamma_s: Option<Complex>,
    tops: Vec<i64>,
    /// Per class and pole: number of (log t)^m terms.
    orders: Vec<Vec<usize>>,
    /// Per class and power m of log t: real and imaginary coefficients over the poles.
    columns: Vec<Vec<(Vec<Float>, Option<Vec<Float>>)>>,
    /// Per class and pole: log of the largest coefficient modulus.
    lmag: Vec<Vec<f64>>,
}

/// gamma(s) = prod Gamma((s + lambda_j)/2).
pub fn gamma_product(lambdas: &[i64], s: &Complex) -> Complex {
    let prec = s.prec();
    let mut acc = Complex::real(Float::with_val(prec, 1));
    for &l in lambdas {
        let z = s.add_real(&Float::with_val(prec, l));
        let z = Complex::new(z.re / 2u32, z.im / 2u32);
        acc = acc.mul_ref(&gamma(&z));
    }
    acc
}

fn integer_value(s: &Complex) -> Option<i64> {
    if !s.is_real() || !s.re.is_integer() {
        return None;
    }
    s.re.to_integer().and_then(|i| i.to_i64())
}

impl GFunction {
    /// Residue data for the first `k` poles of each class.
    pub fn new(table: &PoleTable, s: &Complex, k: usize) -> Self {
        let prec = table.prec;
        let s = s.with_prec(prec);
        let s_int = integer_value(&s);
        let gamma_s = match s_int {
            Some(z) if table.is_pole(z) => None,
            _ => Some(gamma_product(&table.lambdas, &s)),
        };
        let mut coeffs = Vec::new();
        let mut lmag = Vec::new();
        let mut tops = Vec::new();
        for class in 0..table.num_classes() {
            tops.push(table.class_top(class));
            let mut cc = Vec::new();
            let mut lm = Vec::new();
            for pole in table.poles(class).iter().take(k) {
                let r = pole.order;
                // h: Laurent coefficients of gamma(p+2u)/(p - s + 2u), leading u^{-big_r}
                let (h, big_r): (Vec<Complex>, usize) = if s_int == Some(pole.p) {
                    (pole.coeffs.iter().map(|g| Complex::real(Float::with_val(prec, g / 2u32))).collect(), r + 1)
                } else {
                    let ps = Complex::real(Float::with_val(prec, pole.p)) - &s;
                    let inv = ps.recip();
                    let mut e = Vec::with_capacity(r);
                    let mut cur = inv.clone();
                    for _ in 0..r {
                        e.push(cur.clone());
                        cur = cur.mul_ref(&inv).scale(&Float::with_val(prec, -2));
                    }
                    let mut h = Vec::with_capacity(r);
                    for i in 0..r {
                        let mut acc = Complex::zero(prec);
                        for j in 0..=i {
                            acc = acc + e[i - j].scale(&pole.coeffs[j]);
                        }
                        h.push(acc);
                    }
                    (h, r)
                };
                let mut row = Vec::with_capacity(big_r);
                let mut fact = Float::with_val(prec, 2);
                let mut best = f64::NEG_INFINITY;
                for m in 0..big_r {
                    if m > 0 {
                        fact *= -2;
                        fact /= m as u32;
                    }
                    let c = h[big_r - 1 - m].scale(&fact);
                    best = best.max(c.ln_abs_f64());
                    row.push(c);
                }
                cc.push(row);
                lm.push(best);
            }
            coeffs.push(cc);
            lmag.push(lm);
        }
        let real = s.is_real();
        let mut orders = Vec::new();
        let mut columns = Vec::new();
        for rows in &coeffs {
            let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
            let mut cols = Vec::new();
            for m in 0..width {
                let pick = |f: &dyn Fn(&Complex) -> Float| -> Vec<Float> {
                    rows.iter().map(|r| r.get(m).map(f).unwrap_or_else(|| Float::new(prec))).collect()
                };
                let re = pick(&|c: &Complex| c.re.clone());
                let im = if real { None } else { Some(pick(&|c: &Complex| c.im.clone())) };
                cols.push((re, im));
            }
            orders.push(rows.iter().map(|r| r.len()).collect());
            columns.push(cols);
        }
        GFunction { s, prec, gamma_s, tops, orders, columns, lmag }
    }

    fn ln_term(&self, class: usize, k: usize, lt: f64) -> f64 {
        let m = self.orders[class][k] as f64 - 1.0;
        let top = self.tops[class] as f64;
        self.lmag[class][k] + (2.0 * k as f64 - top) * lt + m * lt.abs().max(1.0).ln()
    }

    /// Log of the largest series term at t, and the number of poles per class
    /// needed to push the remaining terms below exp(largest - cut).
    /// Returns None when the table is too short.
    pub fn plan(&self, t: f64, cut: f64) -> Option<(f64, Vec<usize>)> {
        let lt = t.ln();
        let mut biggest = match &self.gamma_s {
            Some(g) => g.ln_abs_f64() - self.s.re.to_f64() * lt,
            None => f64::NEG_INFINITY,
        };
        let mut logs = Vec::new();
        for class in 0..self.orders.len() {
            let v: Vec<f64> = (0..self.orders[class].len()).map(|k| self.ln_term(class, k, lt)).collect();
            biggest = v.iter().cloned().fold(biggest, f64::max);
            logs.push(v);
        }
        let mut counts = Vec::new();
        for v in &logs {
            let peak = v
                .iter()
                .cloned()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |a, (i, x)| if x > a.1 { (i, x) } else { a })
                .0;
            let mut k = peak;
            // past the peak the terms decay; stop after a few consecutive small ones
            let mut small = 0;
            loop {
                if k >= v.len() {
                    return None;
                }
                if v[k] < biggest - cut {
                    small += 1;
                    if small >= 3 {
                        break;
                    }
                } else {
                    small = 0;
                }
                k += 1;
            }
            counts.push(k + 1);
        }
        Some((biggest, counts))
    }

    /// G_s(t) using `counts[class]` poles per class.
    pub fn eval(&self, t: &Float, counts: &[usize]) -> Complex {
        let prec = self.prec;
        let t = Float::with_val(prec, t);
        let lt = Float::with_val(prec, t.ln_ref());
        let x = Float::with_val(prec, t.square_ref());
        let mut total = match &self.gamma_s {
            Some(g) => {
                let ms = Complex::new(Float::with_val(prec, -&self.s.re), Float::with_val(prec, -&self.s.im));
                g.mul_ref(&Complex::real_pow(&t, &ms))
            }
            None => Complex::zero(prec),
        };
        let mut acc = Float::new(prec);
        let mut acc_im = Float::new(prec);
        for (class, &count) in counts.iter().enumerate() {
            let mut class_re = Float::new(prec);
            let mut class_im = Float::new(prec);
            let mut lpow = Float::with_val(prec, 1);
            for (m, (re, im)) in self.columns[class].iter().enumerate() {
                if m > 0 {
                    lpow *= &lt;
                }
                acc.assign(0);
                for c in re[..count].iter().rev() {
                    acc *= &x;
                    acc += c;
                }
                acc *= &lpow;
                class_re += &acc;
                if let Some(im) = im {
                    acc_im.assign(0);
                    for c in im[..count].iter().rev() {
                        acc_im *= &x;
                        acc_im += c;
                    }
                    acc_im *= &lpow;
                    class_im += &acc_im;
                }
            }
            let tp = Float::with_val(prec, (&t).pow(-self.tops[class]));
            class_re *= &tp;
            class_im *= &tp;
            total = total + Complex::new(class_re, class_im);
        }
        total
    }

    pub fn table_len(&self) -> usize {
        self.orders.iter().map(|c| c.len()).min().unwrap_or(0)
    }
}
