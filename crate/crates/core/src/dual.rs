//! Forward-mode differentiation with nested dual numbers.
//!
//! A `Dual<T>` carries a value and one directional derivative. Nesting
//! (`Dual<Dual<f64>>`, three levels deep for third derivatives) yields exact
//! mixed partials of any closed-form expression built from the `Real`
//! operations. All metric derivatives in this crate come from this module;
//! finite differences appear only in test oracles and in the few horizontal
//! derivatives the connection module takes of quadrature results.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar interface every norm family is written against.
///
/// Implemented by `f64` and by `Dual<T>` for any `T: Real`, so the same
/// expression evaluates values and arbitrarily nested derivatives.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn value(self) -> f64;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;

    /// Integer power by repeated squaring. Safe at zero base.
    fn powi(self, n: i32) -> Self {
        if n < 0 {
            return Self::from_f64(1.0) / self.powi(-n);
        }
        let mut acc = Self::from_f64(1.0);
        let mut base = self;
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// Power with a constant exponent. Integer exponents take the
    /// polynomial route so expressions like (y^2)^(p/2) stay smooth
    /// across zeros of the base when p/2 is integral.
    fn powf_const(self, e: f64) -> Self {
        let rounded = e.round();
        if (e - rounded).abs() < 1e-12 && rounded.abs() < 64.0 {
            self.powi(rounded as i32)
        } else {
            (self.ln() * Self::from_f64(e)).exp()
        }
    }
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn value(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
}

/// Value plus one derivative component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Real> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Dual { re, eps }
    }

    /// Constant: derivative zero.
    pub fn constant(re: T) -> Self {
        Dual {
            re,
            eps: T::from_f64(0.0),
        }
    }

    /// Variable seeded with unit derivative.
    pub fn variable(re: T) -> Self {
        Dual {
            re,
            eps: T::from_f64(1.0),
        }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual::new(self.re * o.re, self.eps * o.re + self.re * o.eps)
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = T::from_f64(1.0) / o.re;
        let q = self.re * inv;
        Dual::new(q, (self.eps - q * o.eps) * inv)
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<T: Real> Real for Dual<T> {
    fn from_f64(v: f64) -> Self {
        Dual::constant(T::from_f64(v))
    }
    fn value(self) -> f64 {
        self.re.value()
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Dual::new(s, self.eps / (s + s))
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, self.eps * e)
    }
    fn ln(self) -> Self {
        Dual::new(self.re.ln(), self.eps / self.re)
    }
}
