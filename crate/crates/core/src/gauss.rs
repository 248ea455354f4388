//! Gaussian rationals: complex numbers `re + im*i` with rational parts.
//!
//! This is the coefficient field for every exact computation in the crate.
//! Contractions are decided by algebraic cancellation, so no floating point
//! is allowed anywhere near a structure constant.

use num::{BigInt, BigRational, Complex, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// An element of `Q(i)`, stored as exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::default()
    }

    pub fn one() -> Self {
        GaussRat::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `p/q` as a real rational. Panics if `q == 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        GaussRat::new(
            BigRational::new(BigInt::from(p), BigInt::from(q)),
            BigRational::zero(),
        )
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// Squared modulus `re^2 + im^2`, a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussRat::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = GaussRat::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Lossy conversion used only for numeric cross-checks and CLI output.
    pub fn to_complex_f64(&self) -> Complex<f64> {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for &GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: &GaussRat) -> GaussRat {
        let inv = rhs.inv().expect("division by zero Gaussian rational");
        self * &inv
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: GaussRat) -> GaussRat {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -&self
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Prints in the expression grammar: `3/2`, `-1`, `i`, `-2*i`, `1/2 + 3*i`.
/// A mixed value is emitted without outer parentheses; callers that embed a
/// coefficient inside a product add them.
impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |r: &BigRational| -> String {
            if r.is_one() {
                "i".to_string()
            } else if (-r).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(r))
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", fmt_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}", im_part(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{} - {}", fmt_rational(&self.re), im_part(&(-&self.im)))
        } else {
            write!(f, "{} + {}", fmt_rational(&self.re), im_part(&self.im))
        }
    }
}
