//! Exact q-expansions of classical modular forms.

use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::arith::is_prime_u64;
use crate::exact::{bernoulli, DirichletCharacter};

/// Truncation used when nothing else is requested.
pub const DEFAULT_TRUNCATION: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QExpansion {
    #[serde(serialize_with = "ser_rationals")]
    pub coeffs: Vec<Rational>,
    pub weight: i64,
    pub level: u64,
    pub character: DirichletCharacter,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// Local data at p: trace a_p and norm chi(p) p^{k-1} (0 at primes dividing the level).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SatakeLocal {
    pub p: u64,
    #[serde(serialize_with = "ser_int")]
    pub trace: Integer,
    #[serde(serialize_with = "ser_int")]
    pub norm: Integer,
}

fn ser_int<S: serde::Serializer>(v: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl SatakeLocal {
    /// Discriminant of the Hecke polynomial X^2 - trace X + norm.
    pub fn discriminant(&self) -> Integer {
        Integer::from(self.trace.square_ref()) - Integer::from(&self.norm * 4u32)
    }
}

/// Truncated product of integer power series via Kronecker substitution.
pub fn mul_series(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    if a.is_empty() || b.is_empty() {
        return vec![Integer::new(); len];
    }
    let bits = |v: &[Integer]| v.iter().map(|x| x.significant_bits()).max().unwrap_or(0);
    let terms = a.len().min(b.len()) as u32;
    let slot = bits(a) + bits(b) + 32 - terms.leading_zeros() + 2;
    let pack = |v: &[Integer]| {
        let mut acc = Integer::new();
        for c in v.iter().rev() {
            acc <<= slot;
            acc += c;
        }
        acc
    };
    let mut prod = pack(a) * pack(b);
    let mut out = Vec::with_capacity(len);
    let half = Integer::from(1) << (slot - 1);
    let full = Integer::from(1) << slot;
    for _ in 0..len {
        // balanced digit extraction
        let mut digit = Integer::from(prod.keep_bits_ref(slot));
        if digit >= half {
            digit -= &full;
        }
        prod -= &digit;
        prod >>= slot;
        out.push(digit);
    }
    out
}

fn power_series_pow(base: &[Integer], mut e: u32, len: usize) -> Vec<Integer> {
    let mut result: Vec<Integer> = vec![Integer::new(); len];
    result[0] = Integer::from(1);
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mul_series(&result, &b, len);
        }
        e >>= 1;
        if e > 0 {
            b = mul_series(&b, &b, len);
        }
    }
    result
}

/// Divisor power sums sigma_r(n) for 1 <= n <= len-1.
fn divisor_sums(r: u32, len: usize) -> Vec<Integer> {
    let mut s = vec![Integer::new(); len];
    for d in 1..len {
        let dr = Integer::from(Integer::u_pow_u(d as u32, r));
        let mut m = d;
        while m < len {
            s[m] += &dr;
            m += d;
        }
    }
    s
}

impl QExpansion {
    pub fn from_integers(coeffs: Vec<Integer>, weight: i64, level: u64, character: DirichletCharacter) -> Self {
        QExpansion { coeffs: coeffs.into_iter().map(Rational::from).collect(), weight, level, character }
    }

    /// Highest computed index.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Result<&Rational> {
        self.coeffs.get(n).ok_or(Error::OutOfRange { index: n, max: self.truncation() })
    }

    pub fn is_cusp_form(&self) -> bool {
        self.coeffs[0] == 0
    }

    pub fn is_normalized(&self) -> bool {
        self.coeffs.len() > 1 && self.coeffs[0] == 0 && self.coeffs[1] == 1
    }

    /// All coefficients as integers, if they are integral.
    pub fn integer_coeffs(&self) -> Option<Vec<Integer>> {
        self.coeffs.iter().map(|q| if *q.denom() == 1 { Some(q.numer().clone()) } else { None }).collect()
    }

    /// Coefficient a(n) as an integer; panics if the form is not integral there.
    pub fn int_coeff(&self, n: usize) -> Integer {
        let q = &self.coeffs[n];
        assert!(*q.denom() == 1, "coefficient {n} is not integral");
        q.numer().clone()
    }

    pub fn scale(&self, c: &Rational) -> QExpansion {
        QExpansion { coeffs: self.coeffs.iter().map(|x| Rational::from(x * c)).collect(), ..self.clone() }
    }
}

/// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.
pub fn eisenstein(k: i64, n: usize) -> Result<QExpansion> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    let c = Rational::from(-2 * k) / bernoulli(k as usize);
    let sig = divisor_sums(k as u32 - 1, n + 1);
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Rational::from(1));
    for s in sig.into_iter().skip(1) {
        coeffs.push(Rational::from(&c * Rational::from(s)));
    }
    Ok(QExpansion { coeffs, weight: k, level: 1, character: DirichletCharacter::trivial(1) })
}

fn eisenstein_integral(k: i64, n: usize) -> Vec<Integer> {
    let e = eisenstein(k, n).expect("valid weight");
    e.integer_coeffs().expect("E4 and E6 are integral")
}

/// Euler product prod_{m>=1} (1 - q^m) by the pentagonal number theorem.
fn euler_product(len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    let mut j: i64 = 0;
    loop {
        let mut any = false;
        for jj in if j == 0 { vec![0] } else { vec![j, -j] } {
            let m = (jj * (3 * jj - 1) / 2) as usize;
            if m < len {
                any = true;
                out[m] += if jj.rem_euclid(2) == 0 { 1 } else { -1 };
            }
        }
        if !any && j > 0 {
            break;
        }
        j += 1;
    }
    out
}

/// Delta = q prod (1 - q^n)^24, coefficients 0..=n.
pub fn delta(n: usize) -> QExpansion {
    let e = euler_product(n + 1);
    let e24 = power_series_pow(&e, 24, n + 1);
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Integer::new());
    coeffs.extend(e24.into_iter().take(n));
    QExpansion::from_integers(coeffs, 12, 1, DirichletCharacter::trivial(1))
}

/// The normalized eigenform spanning S_26(SL_2(Z)), realized as Delta E_4^2 E_6.
pub fn newform_s26(n: usize) -> Result<QExpansion> {
    if n < 6 {
        return Err(Error::OutOfRange { index: 6, max: n });
    }
    let len = n + 1;
    let d = delta(n).integer_coeffs().unwrap();
    let e4 = eisenstein_integral(4, n);
    let e6 = eisenstein_integral(6, n);
    let e4sq = mul_series(&e4, &e4, len);
    let f = mul_series(&mul_series(&d, &e4sq, len), &e6, len);
    debug_assert_eq!(f[1], 1);
    Ok(QExpansion::from_integers(f, 26, 1, DirichletCharacter::trivial(1)))
}

/// Hecke eigenvalue T_m of a normalized eigenform (its m-th coefficient).
/// dim S_k(SL_2(Z)).
pub fn cusp_dimension_level_one(k: i64) -> usize {
    if k < 12 || k % 2 != 0 {
        return 0;
    }
    let d = (k / 12) as usize;
    if k % 12 == 2 {
        d - 1
    } else {
        d
    }
}

/// The normalized eigenform spanning S_k(SL_2(Z)) when that space is one-dimensional.
pub fn unique_level_one_form(k: i64, n: usize) -> Result<QExpansion> {
    if cusp_dimension_level_one(k) != 1 {
        return Err(Error::BadWeight(k));
    }
    let len = n + 1;
    let mut f = delta(n).integer_coeffs().unwrap();
    // Delta E_4^a E_6^b with 4a + 6b = k - 12
    let rest = k - 12;
    let b = if rest % 4 == 0 { 0 } else { 1 };
    let a = (rest - 6 * b) / 4;
    for _ in 0..a {
        f = mul_series(&f, &eisenstein_integral(4, n), len);
    }
    for _ in 0..b {
        f = mul_series(&f, &eisenstein_integral(6, n), len);
    }
    Ok(QExpansion::from_integers(f, k, 1, DirichletCharacter::trivial(1)))
}

pub fn hecke_eigenvalue(f: &QExpansion, m: usize) -> Result<Rational> {
    if !f.is_normalized() {
        return Err(Error::Unsupported("form is not a normalized eigenform".into()));
    }
    if m == 0 {
        return Err(Error::OutOfRange { index: 0, max: f.truncation() });
    }
    f.coeff(m).cloned()
}

/// Arithmetically normalized Satake data at p.
pub fn satake(f: &QExpansion, p: u64) -> Result<SatakeLocal> {
    assert!(is_prime_u64(p), "{p} is not prime");
    let a = f.coeff(p as usize)?;
    let trace = if *a.denom() == 1 {
        a.numer().clone()
    } else {
        return Err(Error::Unsupported("non-integral Hecke eigenvalue".into()));
    };
    let norm = if f.level % p == 0 {
        Integer::new()
    } else {
        Integer::from(f.character.eval(p as i64)) * Integer::from(Integer::u_pow_u(p as u32, (f.weight - 1) as u32))
    };
    Ok(SatakeLocal { p, trace, norm })
}

/// Coefficients reduced modulo ell^r into 0..ell^r.
pub fn reduce_mod(f: &QExpansion, ell: u64, r: u32) -> Result<Vec<Integer>> {
    let modulus = Integer::from(Integer::u_pow_u(ell as u32, r));
    f.coeffs
        .iter()
        .enumerate()
        .map(|(i, q)| {
            if q.denom().is_divisible_u(ell as u32) {
                return Err(Error::NonIntegralCoefficient { index: i, ell });
            }
            let inv =
                q.denom().clone().invert(&modulus).map_err(|_| Error::NonIntegralCoefficient { index: i, ell })?;
            Ok((Integer::from(q.numer() * inv)).modulo(&modulus))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_leading_terms() {
        let e4 = eisenstein(4, 5).unwrap();
        assert_eq!(e4.coeffs[0], 1);
        assert_eq!(e4.coeffs[1], 240);
        assert_eq!(e4.coeffs[2], 240 * 9);
        let e6 = eisenstein(6, 5).unwrap();
        assert_eq!(e6.coeffs[1], -504);
        assert!(matches!(eisenstein(5, 5), Err(Error::BadWeight(5))));
        assert!(matches!(eisenstein(2, 5), Err(Error::BadWeight(2))));
    }

    fn naive_delta(n: usize) -> Vec<i64> {
        // direct product expansion with machine integers
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for m in 1..=n {
            for _ in 0..24 {
                for i in (m..=n).rev() {
                    p[i] -= p[i - m];
                }
            }
        }
        let mut out = vec![0i64; n + 1];
        out[1..=n].copy_from_slice(&p[..n]);
        out
    }

    #[test]
    fn delta_matches_direct_product() {
        let d = delta(30);
        let naive = naive_delta(30);
        for (i, x) in naive.iter().enumerate() {
            assert_eq!(d.coeffs[i], *x, "index {i}");
        }
        assert_eq!(d.coeffs[2], -24);
        assert_eq!(d.coeffs[0], 0);
    }

    #[test]
    fn weight_26_newform() {
        let f = newform_s26(20).unwrap();
        let expect: [i64; 6] = [1, -48, -195804, -33552128, -741989850, 9398592];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(f.coeffs[i + 1], *e);
        }
        assert!(f.is_normalized());
        assert!(newform_s26(5).is_err());
    }

    #[test]
    fn kronecker_product_signs() {
        let a: Vec<Integer> = [3i64, -7, 0, 12].iter().map(|&x| Integer::from(x)).collect();
        let b: Vec<Integer> = [-2i64, 5, 1].iter().map(|&x| Integer::from(x)).collect();
        let c = mul_series(&a, &b, 6);
        let expect = [-6i64, 29, -32, -31, 60, 12];
        for (x, e) in c.iter().zip(expect) {
            assert_eq!(*x, e);
        }
    }

    #[test]
    fn eigenvalues_and_satake() {
        let f = newform_s26(10).unwrap();
        assert_eq!(hecke_eigenvalue(&f, 6).unwrap(), 9398592);
        assert_eq!(hecke_eigenvalue(&f, 6).unwrap(), Rational::from(-48) * Rational::from(-195804));
        assert_eq!(hecke_eigenvalue(&f, 1).unwrap(), 1);
        assert!(hecke_eigenvalue(&f, 11).is_err());
        let s = satake(&f, 2).unwrap();
        assert_eq!(s.trace, -48);
        assert_eq!(s.norm, Integer::from(1) << 25);
        assert!(satake(&f, 11).is_err());
    }

    #[test]
    fn reduction() {
        let f = newform_s26(10).unwrap();
        let r = reduce_mod(&f, 31, 1).unwrap();
        assert_eq!(r[2], 14);
        assert_eq!(r[1], 1);
        let g = f.scale(&Rational::from((1, 31)));
        assert!(matches!(reduce_mod(&g, 31, 1), Err(Error::NonIntegralCoefficient { index: 1, ell: 31 })));
    }

    #[test]
    fn level_one_dimensions() {
        let dims: Vec<usize> = (12..=38).step_by(2).map(cusp_dimension_level_one).collect();
        assert_eq!(dims, vec![1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 3, 2]);
        let f = unique_level_one_form(26, 50).unwrap();
        assert_eq!(f.coeffs, newform_s26(50).unwrap().coeffs);
        let d = unique_level_one_form(12, 20).unwrap();
        assert_eq!(d.int_coeff(2), -24);
        assert!(unique_level_one_form(24, 10).is_err());
    }
}
