//! Arithmetic of imaginary quadratic fields of class number one and the CM
//! forms attached to their unramified Hecke characters.

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::DirichletCharacter;
use crate::qexp::QExpansion;

/// |disc| of the imaginary quadratic fields with class number one.
pub const CLASS_NUMBER_ONE: [u64; 9] = [3, 4, 7, 8, 11, 19, 43, 67, 163];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ImagQuadField {
    pub disc: i64,
    pub unit_order: u32,
}

impl ImagQuadField {
    pub fn new(disc: i64) -> Result<Self> {
        let d = disc.unsigned_abs();
        if disc >= 0 || !CLASS_NUMBER_ONE.contains(&d) {
            return Err(Error::UnsupportedField(format!(
                "discriminant {disc} is not that of an imaginary quadratic field of class number one"
            )));
        }
        let unit_order = match d {
            3 => 6,
            4 => 4,
            _ => 2,
        };
        Ok(ImagQuadField { disc, unit_order })
    }

    /// D_K = |disc|.
    pub fn abs_disc(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    pub fn class_number(&self) -> u64 {
        1
    }

    pub fn character(&self) -> DirichletCharacter {
        DirichletCharacter::kronecker(self.disc)
    }

    /// #(O_K / N O_K)^x.
    pub fn unit_group_order_mod(&self, n: u64) -> Integer {
        let chi = self.character();
        let mut acc = Integer::from(1);
        for (p, e) in crate::exact::arith::factor_u64(n) {
            let q = Integer::from(p).pow(2 * e - 2);
            let local = match chi.eval(p as i64) {
                1 => Integer::from((p - 1) * (p - 1)),
                -1 => Integer::from(p * p - 1),
                _ => Integer::from(p * p - p),
            };
            acc *= q * local;
        }
        acc
    }
}

/// The algebraic integer (a + b sqrt(disc)) / 2 with a = b disc mod 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuadInt {
    #[serde(serialize_with = "ser_int")]
    pub a: Integer,
    #[serde(serialize_with = "ser_int")]
    pub b: Integer,
    pub disc: i64,
}

fn ser_int<S: serde::Serializer>(v: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl QuadInt {
    pub fn new(a: impl Into<Integer>, b: impl Into<Integer>, disc: i64) -> Self {
        let (a, b) = (a.into(), b.into());
        debug_assert!(Integer::from(&a - Integer::from(&b * disc)).is_even());
        QuadInt { a, b, disc }
    }

    pub fn one(disc: i64) -> Self {
        Self::new(2, 0, disc)
    }

    pub fn norm(&self) -> Integer {
        (Integer::from(self.a.square_ref()) - Integer::from(self.b.square_ref()) * self.disc) / 4
    }

    pub fn conj(&self) -> Self {
        QuadInt { a: self.a.clone(), b: Integer::from(-&self.b), disc: self.disc }
    }

    pub fn mul(&self, o: &QuadInt) -> QuadInt {
        let re = Integer::from(&self.a * &o.a) + Integer::from(&self.b * &o.b) * self.disc;
        let im = Integer::from(&self.a * &o.b) + Integer::from(&o.a * &self.b);
        QuadInt { a: re / 2, b: im / 2, disc: self.disc }
    }

    pub fn pow(&self, mut e: u32) -> QuadInt {
        let mut acc = Self::one(self.disc);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// True when self / other is a unit.
    pub fn associate(&self, other: &QuadInt) -> bool {
        let n = self.norm();
        if n != other.norm() {
            return false;
        }
        if n == 0 {
            return true;
        }
        let q = self.mul(&other.conj());
        if !q.a.is_divisible(&n) || !q.b.is_divisible(&n) {
            return false;
        }
        let (x, y) = (Integer::from(&q.a / &n), Integer::from(&q.b / &n));
        Integer::from(&x - Integer::from(&y * self.disc)).is_even()
    }

    fn sort_key(&self) -> (bool, Integer, Integer, bool, bool) {
        let pure = self.a == 0 || self.b == 0;
        (!pure, self.b.clone().abs(), self.a.clone().abs(), self.a < 0, self.b < 0)
    }
}

impl std::fmt::Display for QuadInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = self.disc;
        let (a, b) = (&self.a, &self.b);
        if a.is_even() && b.is_even() {
            let (x, y) = (Integer::from(a / 2), Integer::from(b / 2));
            match (x == 0, y == 0) {
                (_, true) => write!(f, "{x}"),
                (true, false) => write!(f, "{y}*sqrt({d})"),
                _ => write!(f, "{x} {} {}*sqrt({d})", if y < 0 { "-" } else { "+" }, y.abs()),
            }
        } else {
            write!(f, "({a} {} {}*sqrt({d}))/2", if *b < 0 { "-" } else { "+" }, b.clone().abs())
        }
    }
}

/// All algebraic integers of norm j, as (a, b) lattice points.
fn elements_of_norm(field: &ImagQuadField, j: u64) -> Vec<QuadInt> {
    let d = field.abs_disc();
    let target = 4 * j;
    let mut out = Vec::new();
    let mut b: u64 = 0;
    while d * b * b <= target {
        let rest = target - d * b * b;
        let a = rest.isqrt();
        if a * a == rest && (a + b * d) % 2 == 0 {
            for &sa in if a == 0 { &[1i64][..] } else { &[1, -1][..] } {
                for &sb in if b == 0 { &[1i64][..] } else { &[1, -1][..] } {
                    out.push(QuadInt::new(sa * a as i64, sb * b as i64, field.disc));
                }
            }
        }
        b += 1;
    }
    out
}

/// One canonical generator for each ideal of norm j.
///
/// Among the associates of a generator, elements in Z or Z sqrt(disc)
/// come first, then smaller |b|, smaller |a|, positive signs.
pub fn ideals_of_norm(field: &ImagQuadField, j: u64) -> Vec<QuadInt> {
    assert!(j >= 1);
    let mut elems = elements_of_norm(field, j);
    elems.sort_by_key(|e| e.sort_key());
    let mut reps: Vec<QuadInt> = Vec::new();
    for e in elems {
        if !reps.iter().any(|r| r.associate(&e)) {
            reps.push(e);
        }
    }
    reps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeckeCharSpec {
    pub field: ImagQuadField,
    /// Infinity type exponent: z -> (z/|z|)^{-t}.
    pub t: i64,
    /// Norm of the conductor.
    pub conductor: u64,
}

impl HeckeCharSpec {
    pub fn new(field: ImagQuadField, t: i64, conductor: u64) -> Result<Self> {
        if conductor != 1 {
            return Err(Error::Unsupported(format!("conductor of norm {conductor}; only unramified characters")));
        }
        if t % field.unit_order as i64 != 0 {
            return Err(Error::UnitObstruction { unit_order: field.unit_order, u: t });
        }
        Ok(HeckeCharSpec { field, t, conductor })
    }
}

/// Weight 1-u CM form whose j-th coefficient sums alpha^{-u} over ideals (alpha) of norm j.
pub fn cm_form(field: &ImagQuadField, u: i64, n: usize) -> Result<QExpansion> {
    let w = field.unit_order as i64;
    if u % w != 0 {
        return Err(Error::UnitObstruction { unit_order: field.unit_order, u });
    }
    if u >= 0 {
        return Err(Error::Unsupported(format!("exponent u = {u}; need u < 0")));
    }
    let e = (-u) as u32;
    let d = field.abs_disc();
    let bound = 4 * n as u64;
    // sum over all elements, then divide by the number of units
    let mut acc = vec![Integer::new(); n + 1];
    let mut b: u64 = 0;
    while d * b * b <= bound {
        let amax = (bound - d * b * b).isqrt() as i64;
        for a in -amax..=amax {
            if (a.unsigned_abs() + b * d) % 2 != 0 || (a == 0 && b == 0) {
                continue;
            }
            let norm = ((a * a) as u64 + d * b * b) as usize / 4;
            if norm > n {
                continue;
            }
            for sb in if b == 0 { &[1i64][..] } else { &[1, -1][..] } {
                acc[norm] += QuadInt::new(a, sb * b as i64, field.disc).pow(e).a;
            }
        }
        b += 1;
    }
    let coeffs: Vec<Rational> = acc
        .into_iter()
        .map(|x| {
            // `a` is twice the real part
            Rational::from((x, Integer::from(2 * w)))
        })
        .collect();
    Ok(QExpansion { coeffs, weight: 1 - u, level: d, character: field.character() })
}

/// Converts base-change evaluation points to convolution points: s -> s - u/2.
pub fn shift_identity_points(u: i64, points: &[Rational]) -> Vec<Rational> {
    let shift = Rational::from((u, 2));
    points.iter().map(|s| Rational::from(s - &shift)).collect()
}
