//! Dirichlet coefficients from Euler products.

use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::exact::arith::primes_up_to;
use crate::exact::DirichletCharacter;
use crate::qexp::{satake, QExpansion};

/// Where the Dirichlet coefficients of an L-function come from.
#[derive(Debug, Clone)]
pub enum Coefficients {
    Zeta,
    Dirichlet(DirichletCharacter),
    /// Symmetric square of a normalized eigenform, twisted by a character.
    Sym2 {
        form: Arc<QExpansion>,
        twist: DirichletCharacter,
    },
    /// Rankin-Selberg convolution of two normalized eigenforms.
    Conv {
        f: Arc<QExpansion>,
        g: Arc<QExpansion>,
    },
    /// b(1), b(2), ... given directly (index 0 unused).
    Explicit(Arc<Vec<Integer>>),
}

fn int(x: i64) -> Integer {
    Integer::from(x)
}

/// (1 - A x)(1 - B x + C x^2) with A = nu psi, B = (a^2 - 2 nu) psi, C = nu^2 psi^2.
pub fn sym2_local(a: &Integer, nu: &Integer, psi: i32) -> Vec<Integer> {
    let psi = Integer::from(psi);
    let aa = Integer::from(nu * &psi);
    let b = (Integer::from(a.square_ref()) - Integer::from(nu * 2u32)) * &psi;
    let c = Integer::from(nu.square_ref()) * Integer::from(psi.square_ref());
    vec![int(1), -(Integer::from(&aa + &b)), Integer::from(&c + Integer::from(&aa * &b)), -(aa * c)]
}

/// prod over Satake pairs (1 - alpha_i beta_j x), from traces and norms.
pub fn conv_local(a1: &Integer, n1: &Integer, a2: &Integer, n2: &Integer) -> Vec<Integer> {
    let e1 = Integer::from(a1 * a2);
    let e2 = Integer::from(n1 * Integer::from(a2.square_ref())) + Integer::from(n2 * Integer::from(a1.square_ref()))
        - Integer::from(n1 * n2) * 2u32;
    let e3 = Integer::from(n1 * n2) * &e1;
    let e4 = Integer::from(n1 * n2).square();
    vec![int(1), -e1, e2, -e3, e4]
}

impl Coefficients {
    /// Local polynomial F_p with L_p(s) = 1 / F_p(p^{-s}).
    pub fn local_factor(&self, p: u64) -> Result<Vec<Integer>> {
        Ok(match self {
            Coefficients::Zeta => vec![int(1), int(-1)],
            Coefficients::Dirichlet(chi) => vec![int(1), int(-(chi.eval(p as i64) as i64))],
            Coefficients::Sym2 { form, twist } => {
                let loc = satake(form, p).map_err(|_| Error::InsufficientCoefficients {
                    needed: p as usize,
                    available: form.truncation(),
                })?;
                sym2_local(&loc.trace, &loc.norm, twist.eval(p as i64))
            }
            Coefficients::Conv { f, g } => {
                let avail = f.truncation().min(g.truncation());
                let err = |_| Error::InsufficientCoefficients { needed: p as usize, available: avail };
                let lf = satake(f, p).map_err(err)?;
                let lg = satake(g, p).map_err(err)?;
                conv_local(&lf.trace, &lf.norm, &lg.trace, &lg.norm)
            }
            Coefficients::Explicit(_) => {
                return Err(Error::Unsupported("explicit coefficients carry no Euler factors".into()))
            }
        })
    }

    /// b(0..=n) with b(0) = 0.
    pub fn generate(&self, n: usize) -> Result<Vec<Integer>> {
        if let Coefficients::Explicit(v) = self {
            if v.len() <= n {
                return Err(Error::InsufficientCoefficients { needed: n, available: v.len().saturating_sub(1) });
            }
            return Ok(v[..=n].to_vec());
        }
        let primes = primes_up_to(n);
        let mut locals = Vec::with_capacity(primes.len());
        for &p in &primes {
            locals.push(self.local_factor(p)?);
        }
        Ok(euler_coeffs(n, &primes, &locals))
    }
}

/// Coefficients of prod_p 1/F_p(p^{-s}) up to n.
pub fn euler_coeffs(n: usize, primes: &[u64], locals: &[Vec<Integer>]) -> Vec<Integer> {
    let mut b = vec![Integer::new(); n + 1];
    if n == 0 {
        return b;
    }
    b[1] = int(1);
    // smallest prime factor sieve
    let mut spf = vec![0u32; n + 1];
    for &p in primes {
        let mut m = p as usize;
        while m <= n {
            if spf[m] == 0 {
                spf[m] = p as u32;
            }
            m += p as usize;
        }
    }
    // local inverse series, indexed like `primes`
    let mut inv: Vec<Vec<Integer>> = Vec::with_capacity(primes.len());
    for (&p, f) in primes.iter().zip(locals) {
        let mut e_max = 0;
        let mut q = p as usize;
        while q <= n {
            e_max += 1;
            q = q.saturating_mul(p as usize);
        }
        let mut s = vec![int(1)];
        for e in 1..=e_max {
            let mut acc = Integer::new();
            for i in 1..f.len().min(e + 1) {
                acc -= Integer::from(&f[i] * &s[e - i]);
            }
            s.push(acc);
        }
        inv.push(s);
    }
    let index_of = |p: u64| primes.binary_search(&p).expect("prime in list");
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut rest = m;
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        let local = &inv[index_of(p as u64)][e];
        b[m] = Integer::from(local * &b[rest]);
    }
    b
}

/// Partial Euler product prod_{p <= bound} 1/F_p(p^{-s}) at real s.
pub fn partial_euler_product(coeffs: &Coefficients, s: &Float, bound: u64) -> Result<Float> {
    let prec = s.prec();
    let mut acc = Float::with_val(prec, 1);
    for p in primes_up_to(bound as usize) {
        let f = coeffs.local_factor(p)?;
        let x = Float::with_val(prec, p).pow(Float::with_val(prec, -s));
        let mut val = Float::new(prec);
        for c in f.iter().rev() {
            val = val * &x + c;
        }
        acc /= val;
    }
    Ok(acc)
}
