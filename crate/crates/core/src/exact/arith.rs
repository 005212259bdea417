//! Primality, factorization and p-adic valuations.

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

const TRIAL_LIMIT: u32 = 1_000_000;

/// Prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub factors: Vec<(Integer, u32)>,
}

impl Serialize for Factorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.factors.iter().map(|(p, e)| (p.to_string(), *e)))
    }
}

impl Factorization {
    pub fn product(&self) -> Integer {
        let mut acc = Integer::from(1);
        for (p, e) in &self.factors {
            acc *= Integer::from(p.pow(*e));
        }
        acc
    }

    pub fn primes(&self) -> impl Iterator<Item = &Integer> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.factors.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        write!(f, "{}", parts.join(" * "))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primality: deterministic below 2^64, 64 Miller-Rabin rounds above.
pub fn is_prime(n: &Integer) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => n.is_probably_prime(64) != rug::integer::IsPrime::No,
    }
}

pub fn primes_up_to(n: usize) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter_map(|(k, &b)| b.then_some(k as u64)).collect()
}

// Brent's variant of Pollard rho; `n` odd composite.
fn pollard_rho(n: &Integer) -> Integer {
    let mut c = Integer::from(1);
    loop {
        let f = |x: &Integer| -> Integer { (Integer::from(x * x) + &c) % n };
        let mut y = Integer::from(2);
        let mut x;
        let mut g = Integer::from(1);
        let mut q = Integer::from(1);
        let mut r = 1u64;
        let m = 64u64;
        let mut ys = Integer::new();
        while g == 1 {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * Integer::from(&x - &y).abs()) % n;
                }
                g = q.clone().gcd(n);
                k += m;
            }
            r *= 2;
            if g == 1 {
                continue;
            }
            if &g == n {
                // backtrack one step at a time
                loop {
                    ys = f(&ys);
                    g = Integer::from(&x - &ys).abs().gcd(n);
                    if g > 1 {
                        break;
                    }
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: Integer, out: &mut Vec<Integer>) {
    if n == 1 {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(&n);
    let rest = Integer::from(&n / &d);
    split_into(d, out);
    split_into(rest, out);
}

/// Factors a positive integer: trial division to 10^6, then Pollard rho.
pub fn factor(n: &Integer) -> Factorization {
    assert!(*n >= 1, "factor expects a positive integer");
    let mut n = n.clone();
    let mut primes: Vec<Integer> = Vec::new();
    let mut p = 2u32;
    while p <= TRIAL_LIMIT {
        if Integer::from(p) * p > n {
            break;
        }
        while n.is_divisible_u(p) {
            n /= p;
            primes.push(Integer::from(p));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        split_into(n, &mut primes);
    }
    primes.sort();
    let mut factors: Vec<(Integer, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    Factorization { factors }
}

pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    factor(&Integer::from(n)).factors.into_iter().map(|(p, e)| (p.to_u64().expect("factor of u64 fits"), e)).collect()
}

/// Exponent of `p` in the nonzero integer `n`.
pub fn val_int(n: &Integer, p: u64) -> u32 {
    debug_assert!(*n != 0);
    let mut n = n.clone().abs();
    let mut e = 0;
    let p = Integer::from(p);
    while n.is_divisible(&p) {
        n /= &p;
        e += 1;
    }
    e
}

/// p-adic valuation of a nonzero rational.
pub fn val_p(q: &Rational, p: u64) -> Result<i64> {
    if *q == 0 {
        return Err(Error::ZeroInput);
    }
    Ok(val_int(q.numer(), p) as i64 - val_int(q.denom(), p) as i64)
}

/// Factored form of a nonzero rational, e.g. `-2^37 * 523 / (3^33 * 5^5)`.
pub fn format_factored(q: &Rational) -> String {
    if *q == 0 {
        return "0".into();
    }
    let sign = if *q < 0 { "-" } else { "" };
    let num = factor(&q.numer().clone().abs());
    let den = factor(q.denom());
    if den.is_empty() {
        format!("{sign}{num}")
    } else if den.factors.len() == 1 {
        format!("{sign}{num} / {den}")
    } else {
        format!("{sign}{num} / ({den})")
    }
}
