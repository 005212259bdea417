//! Exact arithmetic: factorization, valuations, characters, Bernoulli numbers,
//! Dirichlet L-values and rational recognition.

pub mod arith;
pub mod bernoulli;
pub mod character;
pub mod recognize;

use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

pub use arith::{factor, format_factored, is_prime, primes_up_to, val_p, Factorization};
pub use bernoulli::{bernoulli, dirichlet_l_critical, gen_bernoulli};
pub use character::{kronecker, CharacterKind, DirichletCharacter};
pub use recognize::cf_recognize;

use crate::error::Result;

/// An exact number `rational * sqrt(sqrt_disc) * pi^pi_exp`, times `i` when `imaginary`.
///
/// `sqrt_disc` is squarefree, with 0 meaning "no surd". The pi power is
/// bookkeeping only and never enters valuations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactScalar {
    pub rational: Rational,
    pub sqrt_disc: u64,
    pub pi_exp: i32,
    pub imaginary: bool,
}

impl ExactScalar {
    pub fn new(rational: Rational, sqrt_disc: u64, pi_exp: i32) -> Self {
        debug_assert!(sqrt_disc != 1, "use 0 for the absent surd");
        ExactScalar { rational, sqrt_disc, pi_exp, imaginary: false }
    }

    pub fn rational(q: Rational) -> Self {
        Self::new(q, 0, 0)
    }

    pub fn num(&self) -> &Integer {
        self.rational.numer()
    }

    pub fn den(&self) -> &Integer {
        self.rational.denom()
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt_disc == 0 && self.pi_exp == 0 && !self.imaginary
    }

    /// Valuation of the rational-times-surd part; a surd contributes half its valuation.
    pub fn valuation(&self, p: u64) -> Result<Rational> {
        let v = val_p(&self.rational, p)?;
        let surd = if self.sqrt_disc > 0 { arith::val_int(&Integer::from(self.sqrt_disc), p) } else { 0 };
        Ok(Rational::from(v) + Rational::from((surd, 2)))
    }

    /// Product; surds are combined and reduced to squarefree form.
    pub fn mul(&self, other: &ExactScalar) -> ExactScalar {
        let mut q = Rational::from(&self.rational * &other.rational);
        let (a, b) = (self.sqrt_disc.max(1), other.sqrt_disc.max(1));
        let g = character::gcd(a, b);
        // sqrt(a) sqrt(b) = g sqrt(a b / g^2)
        q *= Rational::from(g);
        let r = (a / g) * (b / g);
        let mut imaginary = self.imaginary ^ other.imaginary;
        if self.imaginary && other.imaginary {
            q = -q;
            imaginary = false;
        }
        ExactScalar {
            rational: q,
            sqrt_disc: if r == 1 { 0 } else { r },
            pi_exp: self.pi_exp + other.pi_exp,
            imaginary,
        }
    }

    /// Numerical magnitude-with-sign (the imaginary flag is ignored).
    pub fn to_float(&self, prec: u32) -> Float {
        let mut x = Float::with_val(prec, &self.rational);
        if self.sqrt_disc > 0 {
            x *= Float::with_val(prec, self.sqrt_disc).sqrt();
        }
        if self.pi_exp != 0 {
            x *= Float::with_val(prec, Constant::Pi).pow(self.pi_exp);
        }
        x
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_factored(&self.rational))?;
        if self.sqrt_disc > 0 {
            write!(f, " * sqrt({})", self.sqrt_disc)?;
        }
        if self.imaginary {
            write!(f, " * i")?;
        }
        match self.pi_exp {
            0 => Ok(()),
            1 => write!(f, " * pi"),
            e => write!(f, " * pi^{e}"),
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
