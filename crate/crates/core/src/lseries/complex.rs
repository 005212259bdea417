//! Minimal arbitrary-precision complex numbers on top of MPFR floats.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Complex { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Complex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn i(prec: u32) -> Self {
        Complex { re: Float::new(prec), im: Float::with_val(prec, 1) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Complex { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), self.re.square_ref()) + Float::with_val(self.prec(), self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, x: &Float) -> Self {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    pub fn mul_ref(&self, o: &Complex) -> Complex {
        let p = self.prec();
        if o.im.is_zero() {
            return self.scale(&o.re);
        }
        if self.im.is_zero() {
            return o.with_prec(p).scale(&self.re);
        }
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        Complex { re: ac - bd, im: ad + bc }
    }

    pub fn recip(&self) -> Complex {
        let p = self.prec();
        let n = self.norm_sqr();
        Complex { re: Float::with_val(p, &self.re / &n), im: Float::with_val(p, -&self.im) / n }
    }

    pub fn div_ref(&self, o: &Complex) -> Complex {
        if o.im.is_zero() {
            let p = self.prec();
            return Complex { re: Float::with_val(p, &self.re / &o.re), im: Float::with_val(p, &self.im / &o.re) };
        }
        self.mul_ref(&o.recip())
    }

    pub fn exp(&self) -> Complex {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        if self.im.is_zero() {
            return Complex::real(r);
        }
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        Complex { re: Float::with_val(p, &r * c), im: r * s }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Complex {
        let p = self.prec();
        if self.im.is_zero() && self.re.is_sign_positive() {
            return Complex::real(Float::with_val(p, self.re.ln_ref()));
        }
        Complex { re: self.abs().ln(), im: self.arg() }
    }

    /// x^self for real positive x.
    pub fn real_pow(x: &Float, e: &Complex) -> Complex {
        let l = Float::with_val(e.prec(), x.ln_ref());
        e.scale(&l).exp()
    }

    pub fn add_real(&self, x: &Float) -> Complex {
        Complex { re: Float::with_val(self.prec(), &self.re + x), im: self.im.clone() }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// ln |self| in double precision, robust against under/overflow.
    pub fn ln_abs_f64(&self) -> f64 {
        if self.re.is_zero() && self.im.is_zero() {
            return f64::NEG_INFINITY;
        }
        Float::with_val(64, self.abs().ln_ref()).to_f64()
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        Complex { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<'a> Add<&'a Complex> for Complex {
    type Output = Complex;
    fn add(self, o: &'a Complex) -> Complex {
        Complex { re: self.re + &o.re, im: self.im + &o.im }
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, o: Complex) -> Complex {
        Complex { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<'a> Sub<&'a Complex> for Complex {
    type Output = Complex;
    fn sub(self, o: &'a Complex) -> Complex {
        Complex { re: self.re - &o.re, im: self.im - &o.im }
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, o: Complex) -> Complex {
        self.mul_ref(&o)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        let re = self.re.to_string_radix(10, Some(digits));
        if self.im.is_zero() {
            return write!(f, "{re}");
        }
        let im = Float::with_val(self.prec(), self.im.abs_ref()).to_string_radix(10, Some(digits));
        let sign = if self.im.is_sign_negative() { "-" } else { "+" };
        write!(f, "{re} {sign} {im}*i")
    }
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// log Gamma for complex arguments by shifted Stirling series.
pub fn ln_gamma(z: &Complex) -> Complex {
    let p = z.prec();
    let work = p + 32;
    let zw = z.with_prec(work);
    if z.is_real() && z.re.is_sign_positive() {
        let (lg, _) = Float::with_val(work, &z.re).ln_abs_gamma();
        return Complex::real(Float::with_val(p, lg));
    }
    // shift so that Re(z) is large, then Stirling
    let target = (work as f64 * 0.35).max(20.0);
    let re = zw.re.to_f64();
    let shift = if re < target { (target - re).ceil() as u64 } else { 0 };
    let mut prod = Complex::real(Float::with_val(work, 1));
    let mut w = zw.clone();
    let mut log_acc = Complex::zero(work);
    for i in 0..shift {
        prod = prod.mul_ref(&w);
        w = w.add_real(&Float::with_val(work, 1));
        if i % 32 == 31 {
            log_acc = log_acc + prod.ln();
            prod = Complex::real(Float::with_val(work, 1));
        }
    }
    log_acc = log_acc + prod.ln();
    let half = Float::with_val(work, 0.5);
    let lw = w.ln();
    let mut s = lw.mul_ref(&w.clone().sub(Complex::real(half.clone()))) - &w;
    let ln2pi = Float::with_val(work, pi(work) * 2u32).ln();
    s = s.add_real(&(ln2pi * &half));
    let winv = w.recip();
    let winv2 = winv.mul_ref(&winv);
    let mut pw = winv.clone();
    let eps = Float::with_val(work, Float::i_exp(1, -(work as i32)));
    let mut k: u32 = 1;
    loop {
        let b = bernoulli_float(2 * k, work);
        let denom = Float::with_val(work, (2 * k) as u64 * (2 * k - 1) as u64);
        let term = pw.scale(&(b / denom));
        let small = term.abs() < eps;
        s = s + term;
        if small || k > 2000 {
            break;
        }
        pw = pw.mul_ref(&winv2);
        k += 1;
    }
    let out = s - log_acc;
    out.with_prec(p)
}

/// B_n as a float, from zeta(n) for even n >= 2.
fn bernoulli_float(n: u32, prec: u32) -> Float {
    debug_assert!(n >= 2 && n % 2 == 0);
    let z = Float::with_val(prec, Float::zeta_u(n));
    let fact = Float::with_val(prec, Float::factorial(n));
    let twopi_n = Float::with_val(prec, pi(prec) * 2u32).pow(n);
    let mut b = z * fact * 2u32 / twopi_n;
    if (n / 2) % 2 == 0 {
        b = -b;
    }
    b
}

pub fn gamma(z: &Complex) -> Complex {
    if z.is_real() {
        return Complex::real(Float::with_val(z.prec(), z.re.gamma_ref()));
    }
    ln_gamma(z).exp()
}
