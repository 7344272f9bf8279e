//! Truncated power series ("jets").
//!
//! A [`Jet`] of order `K` at `base` stores the normalized Taylor coefficients
//! `f^(i)(base) / i!` for `i = 0..=K`. Every derivative used elsewhere in the
//! crate comes from these series; nothing is finite-differenced.
//!
//! The arithmetic operators panic on mismatched base or order. The `checked_*`
//! methods return a usage error instead.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Highest supported truncation order.
pub const MAX_ORDER: usize = 10;

const LEN: usize = MAX_ORDER + 1;

/// Relative tolerance when comparing expansion points.
const BASE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    base: f64,
    order: usize,
    coeffs: [f64; LEN],
}

fn same_base(a: f64, b: f64) -> bool {
    (a - b).abs() <= BASE_TOL * a.abs().max(b.abs()).max(1.0)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

impl Jet {
    /// Builds a jet from normalized coefficients; the order is `coeffs.len() - 1`.
    pub fn new(base: f64, coeffs: &[f64]) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > LEN {
            return Err(Error::usage(format!(
                "jet needs between 1 and {LEN} coefficients, got {}",
                coeffs.len()
            )));
        }
        if !base.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::usage("jet coefficients must be finite"));
        }
        let mut c = [0.0; LEN];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Jet {
            base,
            order: coeffs.len() - 1,
            coeffs: c,
        })
    }

    fn raw(base: f64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        Jet {
            base,
            order,
            coeffs: [0.0; LEN],
        }
    }

    pub fn constant(base: f64, value: f64, order: usize) -> Self {
        let mut j = Self::raw(base, order);
        j.coeffs[0] = value;
        j
    }

    /// The identity function expanded at `base`: `[base, 1, 0, ...]`.
    pub fn variable(base: f64, order: usize) -> Self {
        let mut j = Self::raw(base, order);
        j.coeffs[0] = base;
        if order >= 1 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..=self.order]
    }

    pub fn coeff(&self, i: usize) -> f64 {
        if i <= self.order {
            self.coeffs[i]
        } else {
            0.0
        }
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `f^(i)(base) = i! * coeffs[i]`.
    pub fn nth_derivative(&self, i: usize) -> f64 {
        factorial(i) * self.coeff(i)
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order);
        let mut j = Self::raw(self.base, order);
        j.coeffs[..=order].copy_from_slice(&self.coeffs[..=order]);
        j
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn check_compatible(&self, other: &Jet) -> Result<()> {
        if self.order != other.order {
            return Err(Error::usage(format!(
                "jet orders differ: {} vs {}",
                self.order, other.order
            )));
        }
        if !same_base(self.base, other.base) {
            return Err(Error::usage(format!(
                "jet bases differ: {} vs {}",
                self.base, other.base
            )));
        }
        Ok(())
    }

    fn zip(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        let mut out = Self::raw(self.base, self.order);
        for i in 0..=self.order {
            out.coeffs[i] = f(self.coeffs[i], other.coeffs[i]);
        }
        out
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Jet {
        let mut out = *self;
        for c in out.coeffs[..=self.order].iter_mut() {
            *c = f(*c);
        }
        out
    }

    pub fn checked_add(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    /// Cauchy product truncated at the common order.
    pub fn checked_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let mut out = Self::raw(self.base, self.order);
        let (a, b) = (&self.coeffs, &other.coeffs);
        for k in 0..=self.order {
            // Terms are paired symmetrically so that a * b == b * a bitwise.
            let mut s = 0.0;
            for j in 0..k.div_ceil(2) {
                s += a[j] * b[k - j] + a[k - j] * b[j];
            }
            if k % 2 == 0 {
                s += a[k / 2] * b[k / 2];
            }
            out.coeffs[k] = s;
        }
        Ok(out)
    }

    pub fn checked_div(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let v0 = other.coeffs[0];
        if v0 == 0.0 {
            return Err(Error::Singular {
                at: self.base,
                what: "division by a jet with zero constant term".into(),
            });
        }
        let mut q = Self::raw(self.base, self.order);
        for k in 0..=self.order {
            let s: f64 = (1..=k).map(|j| other.coeffs[j] * q.coeffs[k - j]).sum();
            q.coeffs[k] = (self.coeffs[k] - s) / v0;
        }
        Ok(q)
    }

    /// Jet of `outer ∘ inner` at `inner.base`. `outer` must be expanded at
    /// the value `inner.coeffs[0]`.
    pub fn compose(&self, inner: &Jet) -> Result<Jet> {
        if self.order != inner.order {
            return Err(Error::usage(format!(
                "jet orders differ: {} vs {}",
                self.order, inner.order
            )));
        }
        if !same_base(self.base, inner.coeffs[0]) {
            return Err(Error::usage(format!(
                "outer jet is expanded at {} but inner value is {}",
                self.base, inner.coeffs[0]
            )));
        }
        let mut delta = *inner;
        delta.coeffs[0] = 0.0;
        let mut acc = Jet::constant(inner.base, self.coeffs[self.order], self.order);
        for k in (0..self.order).rev() {
            acc = acc * delta;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Jet of `f'` at the same base, one order lower.
    pub fn derivative(&self) -> Result<Jet> {
        if self.order == 0 {
            return Err(Error::usage("cannot differentiate an order-0 jet"));
        }
        let mut out = Self::raw(self.base, self.order - 1);
        for i in 0..self.order {
            out.coeffs[i] = (i + 1) as f64 * self.coeffs[i + 1];
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Jet {
        self.map(|c| c * s)
    }

    pub fn recip(&self) -> Result<Jet> {
        Jet::constant(self.base, 1.0, self.order).checked_div(self)
    }

    pub fn exp(&self) -> Jet {
        let a = &self.coeffs;
        let mut e = Self::raw(self.base, self.order);
        e.coeffs[0] = a[0].exp();
        for k in 1..=self.order {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e.coeffs[k - j]).sum();
            e.coeffs[k] = s / k as f64;
        }
        e
    }

    pub fn ln(&self) -> Result<Jet> {
        let a = &self.coeffs;
        if a[0] <= 0.0 {
            return Err(Error::Singular {
                at: self.base,
                what: "logarithm of a non-positive value".into(),
            });
        }
        let mut l = Self::raw(self.base, self.order);
        l.coeffs[0] = a[0].ln();
        for k in 1..=self.order {
            let s: f64 = (1..k).map(|j| j as f64 * l.coeffs[j] * a[k - j]).sum();
            l.coeffs[k] = (a[k] - s / k as f64) / a[0];
        }
        Ok(l)
    }

    /// `(sin self, cos self)`.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let a = &self.coeffs;
        let mut s = Self::raw(self.base, self.order);
        let mut c = Self::raw(self.base, self.order);
        s.coeffs[0] = a[0].sin();
        c.coeffs[0] = a[0].cos();
        for k in 1..=self.order {
            let mut ss = 0.0;
            let mut cc = 0.0;
            for j in 1..=k {
                let w = j as f64 * a[j];
                ss += w * c.coeffs[k - j];
                cc += w * s.coeffs[k - j];
            }
            s.coeffs[k] = ss / k as f64;
            c.coeffs[k] = -cc / k as f64;
        }
        (s, c)
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn tan(&self) -> Result<Jet> {
        let a = &self.coeffs;
        if a[0].cos() == 0.0 {
            return Err(Error::Singular {
                at: self.base,
                what: "tangent at a pole".into(),
            });
        }
        // tan' = 1 + tan^2, with u = 1 + tan^2 built alongside.
        let mut t = Self::raw(self.base, self.order);
        let mut u = [0.0; MAX_ORDER + 1];
        t.coeffs[0] = a[0].tan();
        u[0] = 1.0 + t.coeffs[0] * t.coeffs[0];
        for k in 1..=self.order {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * u[k - j]).sum();
            t.coeffs[k] = s / k as f64;
            u[k] = (0..=k).map(|i| t.coeffs[i] * t.coeffs[k - i]).sum();
        }
        Ok(t)
    }

    /// Real power `self^p` for a positive constant term.
    pub fn powf(&self, p: f64) -> Result<Jet> {
        let a = &self.coeffs;
        if a[0] <= 0.0 {
            return Err(Error::Singular {
                at: self.base,
                what: "real power of a non-positive value".into(),
            });
        }
        let mut y = Self::raw(self.base, self.order);
        y.coeffs[0] = a[0].powf(p);
        for k in 1..=self.order {
            let s: f64 = (1..=k)
                .map(|j| (p * j as f64 - (k - j) as f64) * a[j] * y.coeffs[k - j])
                .sum();
            y.coeffs[k] = s / (k as f64 * a[0]);
        }
        Ok(y)
    }

    pub fn sqrt(&self) -> Result<Jet> {
        self.powf(0.5)
    }

    pub fn powi(&self, n: u32) -> Jet {
        let mut acc = Jet::constant(self.base, 1.0, self.order);
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }

    /// Evaluates the truncated series at `x` (Horner in `x - base`).
    pub fn eval(&self, x: f64) -> f64 {
        let h = x - self.base;
        self.coeffs()
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * h + c)
    }
}

/// Polynomial `sum coeffs[i] x^i` evaluated on a jet argument.
pub fn poly_jet(coeffs: &[f64], x: &Jet) -> Jet {
    let mut acc = Jet::constant(x.base(), 0.0, x.order());
    for &c in coeffs.iter().rev() {
        acc = acc * *x + c;
    }
    acc
}

macro_rules! jet_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$checked(&rhs).expect("incompatible jets")
            }
        }
    };
}

jet_binop!(Add, add, checked_add);
jet_binop!(Sub, sub, checked_sub);
jet_binop!(Mul, mul, checked_mul);
jet_binop!(Div, div, checked_div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map(|c| -c)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.scale(1.0 / rhs)
    }
}
