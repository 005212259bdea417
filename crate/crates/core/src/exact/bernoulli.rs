//! Bernoulli numbers, generalized Bernoulli numbers and critical Dirichlet L-values.

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::arith::{factor_u64, primes_up_to};
use super::character::DirichletCharacter;
use super::ExactScalar;
use crate::error::{Error, Result};

/// Bernoulli numbers B_0..=B_n with B_1 = -1/2.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::from(0); n + 1];
    b[0] = Rational::from(1);
    for m in 1..=n {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Rational::from(0);
        let mut binom = Integer::from(1); // C(m+1, 0)
        for (k, bk) in b.iter().enumerate().take(m) {
            acc += Rational::from(bk * &binom);
            binom *= (m + 1 - k) as u64;
            binom /= (k + 1) as u64;
        }
        b[m] = -acc / Rational::from(m as u64 + 1);
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_numbers(n).pop().unwrap()
}

/// Bernoulli polynomial B_n evaluated at a rational point.
fn bernoulli_poly(n: usize, x: &Rational, b: &[Rational]) -> Rational {
    let mut acc = Rational::from(0);
    let mut binom = Integer::from(1);
    for (k, bk) in b.iter().enumerate().take(n + 1) {
        let term = Rational::from(bk * &binom) * Rational::from(x.pow((n - k) as i32));
        acc += term;
        binom *= (n - k) as u64;
        binom /= (k + 1) as u64;
    }
    acc
}

/// B_{n,chi} for the primitive character inducing `chi`:
/// f^{n-1} sum_{a=1}^{f} chi(a) B_n(a/f).
pub fn gen_bernoulli(n: usize, chi: &DirichletCharacter) -> Rational {
    assert!(n >= 1);
    let prim = chi.primitive();
    let f = prim.conductor();
    let b = bernoulli_numbers(n);
    let mut acc = Rational::from(0);
    for a in 1..=f {
        let c = prim.eval(a as i64);
        if c == 0 {
            continue;
        }
        let x = Rational::from((a, f));
        let v = bernoulli_poly(n, &x, &b);
        if c > 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    acc * Rational::from(Integer::from(f).pow(n as u32 - 1))
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Exact L(j, chi) at a critical integer j >= 1, as rational * sqrt(D) * pi^j.
///
/// Euler factors at primes dividing the modulus but not the conductor are removed,
/// so `DirichletCharacter::trivial(3)` at j = 2 gives (1 - 3^-2) zeta(2).
pub fn dirichlet_l_critical(j: u32, chi: &DirichletCharacter) -> Result<ExactScalar> {
    if j == 0 {
        return Err(Error::NotCritical { s: 0, reason: "only j >= 1 is supported".into() });
    }
    let parity_ok = (chi.parity() == 1) == (j % 2 == 0);
    if !parity_ok {
        return Err(Error::NotCritical {
            s: j as i64,
            reason: format!("chi(-1) = {} but (-1)^j = {}", chi.parity(), if j % 2 == 0 { 1 } else { -1 }),
        });
    }
    let prim = chi.primitive();
    let f = prim.conductor();
    if f == 1 && j == 1 {
        return Err(Error::NotCritical { s: 1, reason: "pole of the Riemann zeta function".into() });
    }
    let a = if prim.parity() == 1 { 0 } else { 1 };
    let sign = if ((j - a) / 2 + 1) % 2 == 0 { 1 } else { -1 };
    let bern = gen_bernoulli(j as usize, &prim);
    // (-1)^{1+(j-a)/2} sqrt(f)/2 (2 pi / f)^j B_{j,chi}/j!
    let mut q = bern * Rational::from(Integer::from(2).pow(j))
        / Rational::from(Integer::from(f).pow(j))
        / Rational::from(factorial(j))
        / Rational::from(2);
    if sign < 0 {
        q = -q;
    }
    // sqrt(f) = s * sqrt(r), r squarefree
    let mut s = 1u64;
    let mut r = 1u64;
    for (p, e) in factor_u64(f) {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            r *= p;
        }
    }
    q *= Rational::from(s);
    for p in primes_up_to(chi.modulus as usize) {
        if chi.modulus % p == 0 && f % p != 0 {
            let c = prim.eval(p as i64);
            let local = Rational::from(1) - Rational::from((c, Integer::from(p).pow(j)));
            q *= local;
        }
    }
    Ok(ExactScalar::new(q, if r == 1 { 0 } else { r }, j as i32))
}
