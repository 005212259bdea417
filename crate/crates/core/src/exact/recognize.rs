//! Rational recognition from high-precision floats by continued fractions.
//!
//! A candidate p/q is accepted only when the partial quotient following it is
//! huge (at least 10^(d - 2*D - 10) for d trusted digits and at most D-digit
//! denominators) and the same candidate reappears from the value truncated to
//! d - 20 digits as a convergent.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Digits dropped for the stability re-check.
pub const STABILITY_DROP: u32 = 20;

/// Rounds `x` to `digits` significant decimal digits, exactly as a rational.
pub fn decimal_truncation(x: &Float, digits: u32) -> Rational {
    if x.is_zero() {
        return Rational::new();
    }
    let prec = x.prec().max(digits * 4 + 64);
    let ax = Float::with_val(prec, x.abs_ref());
    let e10 = Float::with_val(64, ax.log10_ref()).floor().to_f64() as i64;
    let shift = digits as i64 - 1 - e10;
    let ten = Integer::from(10);
    let scaled = if shift >= 0 {
        ax * Float::with_val(prec, Integer::from((&ten).pow(shift as u32)))
    } else {
        ax / Float::with_val(prec, Integer::from((&ten).pow((-shift) as u32)))
    };
    let n = scaled.round().to_integer().expect("finite");
    let mut q = if shift >= 0 {
        Rational::from((n, Integer::from((&ten).pow(shift as u32))))
    } else {
        Rational::from(n * Integer::from((&ten).pow((-shift) as u32)))
    };
    if x.is_sign_negative() {
        q = -q;
    }
    q
}

/// One continued-fraction pass over an exact rational approximation.
fn first_stable_convergent(x: &Rational, digits: u32, max_den_digits: u32) -> Option<Rational> {
    let negative = *x < 0;
    let x = Rational::from(x.abs_ref());
    let exp = digits as i64 - 2 * max_den_digits as i64 - 10;
    let threshold = if exp > 0 { Integer::from(Integer::u_pow_u(10, exp as u32)) } else { Integer::from(1) };
    let den_bound = Integer::from(Integer::u_pow_u(10, max_den_digits));

    let (mut p0, mut q0) = (Integer::from(1), Integer::from(0));
    let (mut rem, a0) = x.fract_floor(Integer::new());
    let (mut p1, mut q1) = (a0, Integer::from(1));
    loop {
        if q1 > den_bound {
            return None;
        }
        if rem == 0 {
            let r = Rational::from((p1.clone(), q1.clone()));
            return Some(if negative { -r } else { r });
        }
        let inv = Rational::from(rem.recip_ref());
        let (fr, a) = inv.fract_floor(Integer::new());
        if a >= threshold {
            let r = Rational::from((p1.clone(), q1.clone()));
            return Some(if negative { -r } else { r });
        }
        rem = fr;
        let p2 = Integer::from(&a * &p1) + &p0;
        let q2 = Integer::from(&a * &q1) + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
}

/// Recognizes `x` as a rational with at most `max_den_digits` denominator digits,
/// trusting `working_digits` significant digits. `Ok(None)` means no match.
pub fn cf_recognize(x: &Float, working_digits: u32, max_den_digits: u32) -> Result<Option<Rational>> {
    if !x.is_finite() {
        return Err(Error::PrecisionTooLow("value is not finite".into()));
    }
    if working_digits < 30 {
        return Err(Error::PrecisionTooLow(format!("working_digits = {working_digits} < 30")));
    }
    if 2 * max_den_digits >= working_digits {
        return Err(Error::PrecisionTooLow(format!(
            "max_den_digits = {max_den_digits} must be below working_digits/2"
        )));
    }
    let bits_needed = (working_digits as f64 * std::f64::consts::LOG2_10) as u32;
    if x.prec() + 8 < bits_needed {
        return Err(Error::PrecisionTooLow(format!(
            "float carries {} bits, {} digits requested",
            x.prec(),
            working_digits
        )));
    }
    let full = first_stable_convergent(&decimal_truncation(x, working_digits), working_digits, max_den_digits);
    let Some(full) = full else { return Ok(None) };
    if full == 0 && !x.is_zero() {
        return Ok(None);
    }
    let low = decimal_truncation(x, working_digits - STABILITY_DROP);
    Ok(if is_convergent(&low, &full) { Some(full) } else { None })
}

/// Whether `target` is a continued-fraction convergent of `x`.
fn is_convergent(x: &Rational, target: &Rational) -> bool {
    if (*x < 0) != (*target < 0) && *target != 0 {
        return false;
    }
    let x = Rational::from(x.abs_ref());
    let target = Rational::from(target.abs_ref());
    let (mut p0, mut q0) = (Integer::from(1), Integer::from(0));
    let (mut rem, a0) = x.fract_floor(Integer::new());
    let (mut p1, mut q1) = (a0, Integer::from(1));
    loop {
        if p1 == *target.numer() && q1 == *target.denom() {
            return true;
        }
        if q1 > *target.denom() || rem == 0 {
            return false;
        }
        let inv = Rational::from(rem.recip_ref());
        let (fr, a) = inv.fract_floor(Integer::new());
        rem = fr;
        let p2 = Integer::from(&a * &p1) + &p0;
        let q2 = Integer::from(&a * &q1) + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
}
