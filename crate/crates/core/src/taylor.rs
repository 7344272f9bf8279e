//! Taylor polynomials as osculating families of graphs.
//!
//! `T_t` is the degree-`n` Taylor polynomial of `f` at `t`. When `f^(n+1)`
//! has constant sign on an interval, members at `a < b` are ordered: for even
//! `n` over the whole line, for odd `n` to the right of `b`. Both claims are
//! checked with Sturm counts on the explicit difference `T_b - T_a`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circles::sample_parameters;
use crate::error::{Error, Result};
use crate::jets::{poly_jet, Jet, MAX_ORDER};
use crate::poly::Poly;
use crate::scan::scan_roots;

/// A function of one variable with jets of every order up to [`MAX_ORDER`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SmoothFunction {
    /// `sum coeffs[i] x^i`.
    Polynomial { coeffs: Vec<f64> },
    /// `exp(-x^2)`.
    Gaussian,
    Sin,
    Cos,
    Exp,
    Tan,
}

impl SmoothFunction {
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        SmoothFunction::Polynomial { coeffs }
    }

    pub fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::usage(format!("jet order {order} exceeds {MAX_ORDER}")));
        }
        let v = Jet::variable(x, order);
        Ok(match self {
            SmoothFunction::Polynomial { coeffs } => poly_jet(coeffs, &v),
            SmoothFunction::Gaussian => (-(v * v)).exp(),
            SmoothFunction::Sin => v.sin(),
            SmoothFunction::Cos => v.cos(),
            SmoothFunction::Exp => v.exp(),
            SmoothFunction::Tan => v.tan()?,
        })
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            SmoothFunction::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
            }
            SmoothFunction::Gaussian => (-(x * x)).exp(),
            SmoothFunction::Sin => x.sin(),
            SmoothFunction::Cos => x.cos(),
            SmoothFunction::Exp => x.exp(),
            SmoothFunction::Tan => x.tan(),
        }
    }

    /// `f^(k)(x)`.
    pub fn derivative(&self, x: f64, k: usize) -> Result<f64> {
        Ok(self.jet(x, k)?.nth_derivative(k))
    }
}

/// `sum coeffs[i] (x - base)^i` with `coeffs[i] = f^(i)(base) / i!`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorPoly {
    pub base: f64,
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl TaylorPoly {
    pub fn eval(&self, x: f64) -> f64 {
        let u = x - self.base;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    /// Expansion in powers of `x`.
    pub fn to_poly(&self) -> Poly {
        Poly::from_shifted(&self.coeffs, self.base)
    }
}

pub fn taylor_poly(f: &SmoothFunction, t: f64, n: usize) -> Result<TaylorPoly> {
    let j = f.jet(t, n)?;
    Ok(TaylorPoly {
        base: t,
        degree: n,
        coeffs: j.coeffs().to_vec(),
    })
}

/// `d/dt T_t(x) = f^(n+1)(t) / n! * (x - t)^n`.
pub fn taylor_velocity(f: &SmoothFunction, t: f64, n: usize, x: f64) -> Result<f64> {
    if n + 1 > MAX_ORDER {
        return Err(Error::usage(format!("degree {n} leaves no room for f^(n+1)")));
    }
    let j = f.jet(t, n + 1)?;
    // coeff(n+1) = f^(n+1)/(n+1)!
    Ok(j.coeff(n + 1) * (n + 1) as f64 * (x - t).powi(n as i32))
}

/// `T_b - T_a` in powers of `x`.
pub fn difference_poly(f: &SmoothFunction, a: f64, b: f64, n: usize) -> Result<Poly> {
    Ok(taylor_poly(f, b, n)?.to_poly().sub(&taylor_poly(f, a, n)?.to_poly()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorOptions {
    /// Uniform members sampled in the interval; every pair is checked.
    pub samples: usize,
    /// Grid over which signs of differences are scanned (even degree).
    /// Defaults to the interval widened by 5 on each side.
    pub x_grid: Option<([f64; 2], usize)>,
    /// Right end of the checked half-line is `b + reach` (odd degree).
    pub reach: f64,
    /// Points used to check the sign of `f^(n+1)` on the interval.
    pub validation_points: usize,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        TaylorOptions {
            samples: 20,
            x_grid: None,
            reach: 100.0,
            validation_points: 201,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorPairVerdict {
    pub a: f64,
    pub b: f64,
    /// Real roots of `T_b - T_a` on the checked region (whole line or
    /// `[b, b + reach]`).
    pub roots: usize,
    /// Real roots left of `b`; only reported for odd degree.
    pub left_roots: Option<usize>,
    /// Smallest `|T_b - T_a|` seen on the scan grid.
    pub min_gap: f64,
    /// Every grid value has the sign of `f^(n+1)`.
    pub sign_ok: bool,
    pub passed: bool,
    /// `T_b - T_a` in powers of `x`, lowest first.
    pub coeffs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorReport {
    pub degree: usize,
    pub interval: [f64; 2],
    pub samples: Vec<f64>,
    /// Sign of `f^(n+1)` on the interval, or 0 when it is not constant.
    pub derivative_sign: f64,
    pub hypothesis_holds: bool,
    pub pairs: Vec<TaylorPairVerdict>,
    pub min_gap: f64,
    pub passed: bool,
}

impl TaylorReport {
    /// Difference polynomials as `a,b,c0,...,cn` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b");
        for i in 0..=self.degree {
            out.push_str(&format!(",c{i}"));
        }
        out.push('\n');
        for p in &self.pairs {
            out.push_str(&format!("{},{}", p.a, p.b));
            for i in 0..=self.degree {
                out.push_str(&format!(",{}", p.coeffs.get(i).copied().unwrap_or(0.0)));
            }
            out.push('\n');
        }
        out
    }
}

/// Sign of `f^(k)` on a grid over `[t0, t1]`, or 0 if it vanishes or changes.
pub fn constant_sign_of_derivative(
    f: &SmoothFunction,
    k: usize,
    interval: [f64; 2],
    points: usize,
) -> Result<f64> {
    let vals = sample_parameters(interval[0], interval[1], points.max(2))
        .into_iter()
        .map(|x| f.derivative(x, k))
        .collect::<Result<Vec<_>>>()?;
    let s = vals[0].signum();
    Ok(if vals.iter().all(|v| *v != 0.0 && v.signum() == s) { s } else { 0.0 })
}

fn check_interval(interval: [f64; 2]) -> Result<()> {
    if !(interval[0].is_finite() && interval[1].is_finite() && interval[0] < interval[1]) {
        return Err(Error::usage(format!("bad interval {interval:?}")));
    }
    Ok(())
}

fn sample_pairs(samples: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            out.push((samples[i], samples[j]));
        }
    }
    out
}

fn sign_scan(d: &Poly, xs: &[f64], sign: f64) -> (bool, f64) {
    xs.iter().fold((true, f64::INFINITY), |(ok, gap), &x| {
        let v = d.eval(x);
        (ok && v != 0.0 && v.signum() == sign, gap.min(v.abs()))
    })
}

fn verify_disjoint(
    f: &SmoothFunction,
    interval: [f64; 2],
    n: usize,
    opts: &TaylorOptions,
) -> Result<TaylorReport> {
    check_interval(interval)?;
    if n + 1 > MAX_ORDER {
        return Err(Error::usage(format!("degree {n} leaves no room for f^(n+1)")));
    }
    if opts.samples < 2 {
        return Err(Error::usage("need at least 2 samples"));
    }
    let samples = sample_parameters(interval[0], interval[1], opts.samples);
    let sign = constant_sign_of_derivative(f, n + 1, interval, opts.validation_points)?;
    if sign == 0.0 {
        return Ok(TaylorReport {
            degree: n,
            interval,
            samples,
            derivative_sign: 0.0,
            hypothesis_holds: false,
            pairs: vec![],
            min_gap: 0.0,
            passed: false,
        });
    }
    let even = n.is_multiple_of(2);
    let grid = if even {
        let ([x0, x1], count) = opts
            .x_grid
            .unwrap_or(([interval[0] - 5.0, interval[1] + 5.0], 1001));
        sample_parameters(x0, x1, count.max(2))
    } else {
        vec![]
    };

    let pairs = sample_pairs(&samples)
        .into_par_iter()
        .map(|(a, b)| {
            let d = difference_poly(f, a, b, n)?;
            let leading_ok = d.degree() == Some(n) && d.leading().signum() == sign;
            let verdict = if even {
                let roots = d.count_real_roots();
                let (sign_ok, min_gap) = sign_scan(&d, &grid, sign);
                TaylorPairVerdict {
                    a,
                    b,
                    roots,
                    left_roots: None,
                    min_gap,
                    sign_ok,
                    passed: roots == 0 && sign_ok && leading_ok,
                    coeffs: d.coeffs().to_vec(),
                }
            } else {
                let right = b + opts.reach;
                let at_b = d.eval(b);
                let roots = d.count_roots_in(b, right) + usize::from(at_b == 0.0);
                let lo = -(d.root_bound() + 1.0);
                let left_roots = d.count_roots_in(lo, b) - usize::from(at_b == 0.0);
                let xs = sample_parameters(b, right, 1001);
                let (sign_ok, min_gap) = sign_scan(&d, &xs, sign);
                TaylorPairVerdict {
                    a,
                    b,
                    roots,
                    left_roots: Some(left_roots),
                    min_gap,
                    sign_ok,
                    passed: roots == 0 && sign_ok && leading_ok,
                    coeffs: d.coeffs().to_vec(),
                }
            };
            Ok(verdict)
        })
        .collect::<Result<Vec<_>>>()?;

    let min_gap = pairs.iter().map(|p| p.min_gap).fold(f64::INFINITY, f64::min);
    let passed = pairs.iter().all(|p| p.passed);
    Ok(TaylorReport {
        degree: n,
        interval,
        samples,
        derivative_sign: sign,
        hypothesis_holds: true,
        pairs,
        min_gap,
        passed,
    })
}

/// Even degree: every pair of sampled members is disjoint over the whole line.
pub fn verify_disjoint_even(
    f: &SmoothFunction,
    interval: [f64; 2],
    n: usize,
    opts: &TaylorOptions,
) -> Result<TaylorReport> {
    if !n.is_multiple_of(2) {
        return Err(Error::usage(format!("degree {n} is odd")));
    }
    verify_disjoint(f, interval, n, opts)
}

/// Odd degree: every pair `a < b` is disjoint on `[b, b + reach]`.
pub fn verify_disjoint_odd(
    f: &SmoothFunction,
    interval: [f64; 2],
    n: usize,
    opts: &TaylorOptions,
) -> Result<TaylorReport> {
    if n.is_multiple_of(2) {
        return Err(Error::usage(format!("degree {n} is even")));
    }
    verify_disjoint(f, interval, n, opts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub order: usize,
    pub real_roots: usize,
    pub positive_on_grid: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub a: f64,
    pub b: f64,
    pub degree: usize,
    /// Sign of `f^(n+1)`; derivatives are judged after multiplying by it.
    pub orientation: f64,
    pub orders: Vec<OrderVerdict>,
    /// `a == b`, so the difference vanishes and the check is vacuous.
    pub degenerate: bool,
    pub passed: bool,
}

/// Checks that every even-order derivative of `T_b - T_a` (oriented by the
/// sign of `f^(n+1)`) is positive: no real roots by Sturm, and positive on
/// a grid spanning `[min(a,b) - 10, max(a,b) + 10]`.
pub fn difference_higher_convexity(
    f: &SmoothFunction,
    a: f64,
    b: f64,
    n: usize,
) -> Result<ConvexityReport> {
    if !n.is_multiple_of(2) {
        return Err(Error::usage(format!("degree {n} is odd")));
    }
    if n + 1 > MAX_ORDER {
        return Err(Error::usage(format!("degree {n} leaves no room for f^(n+1)")));
    }
    let (lo, hi) = (a.min(b), a.max(b));
    if a == b {
        return Ok(ConvexityReport {
            a,
            b,
            degree: n,
            orientation: 0.0,
            orders: vec![],
            degenerate: true,
            passed: true,
        });
    }
    let sign = f.derivative(a, n + 1)?.signum() * (b - a).signum();
    let d = difference_poly(f, a, b, n)?.scale(sign);
    let grid = sample_parameters(lo - 10.0, hi + 10.0, 2001);
    let orders: Vec<OrderVerdict> = (0..=n)
        .step_by(2)
        .map(|k| {
            let dk = d.nth_derivative(k);
            OrderVerdict {
                order: k,
                real_roots: dk.count_real_roots(),
                positive_on_grid: !dk.is_zero() && grid.iter().all(|&x| dk.eval(x) > 0.0),
            }
        })
        .collect();
    let passed = orders
        .iter()
        .all(|o| o.real_roots == 0 && o.positive_on_grid);
    Ok(ConvexityReport {
        a,
        b,
        degree: n,
        orientation: sign,
        orders,
        degenerate: false,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeZeros {
    pub order: usize,
    pub window: [f64; 2],
    pub zeros: Vec<f64>,
    pub count: usize,
    /// The sign of `f^(n)` at a window end differs from its sign at that
    /// infinity, so zeros may lie outside the window.
    pub window_warning: bool,
}

/// Zeros of `f^(n)` inside `window` for the Gaussian.
pub fn count_derivative_zeros(
    f: &SmoothFunction,
    n: usize,
    window: [f64; 2],
    grid_n: usize,
) -> Result<DerivativeZeros> {
    if *f != SmoothFunction::Gaussian {
        return Err(Error::usage("derivative zero counts need a function flat at infinity"));
    }
    check_interval(window)?;
    if n > MAX_ORDER {
        return Err(Error::usage(format!("order {n} exceeds {MAX_ORDER}")));
    }
    if grid_n < 2 {
        return Err(Error::usage("grid needs at least 2 cells"));
    }
    let scan = scan_roots(|x| f.derivative(x, n), window[0], window[1], grid_n, false)?;
    // f^(n) = (-1)^n H_n(x) exp(-x^2) and H_n has leading term (2x)^n.
    let right_sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let left_sign = 1.0;
    let first = *scan.values.first().expect("grid is non-empty");
    let last = *scan.values.last().expect("grid is non-empty");
    let window_warning = first.signum() != left_sign || last.signum() != right_sign;
    Ok(DerivativeZeros {
        order: n,
        window,
        count: scan.count(),
        zeros: scan.roots,
        window_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn cube() -> SmoothFunction {
        SmoothFunction::monomial(3)
    }

    #[test]
    fn quadratic_taylor_of_cube() {
        let t = taylor_poly(&cube(), 1.0, 2).unwrap();
        assert_eq!(t.coeffs, vec![1.0, 3.0, 3.0]);
        let p = t.to_poly();
        assert_eq!(p.coeffs(), &[1.0, -3.0, 3.0]);
    }

    #[test]
    fn degree_zero_is_constant() {
        for f in [SmoothFunction::Sin, SmoothFunction::Gaussian, SmoothFunction::Exp] {
            let t = taylor_poly(&f, 0.3, 0).unwrap();
            assert_eq!(t.coeffs, vec![f.value(0.3)]);
        }
    }

    #[test]
    fn polynomial_is_its_own_taylor_poly() {
        let f = SmoothFunction::Polynomial {
            coeffs: vec![1.0, -2.0, 0.5, 3.0],
        };
        for t in [-1.0, 0.0, 0.75, 2.0] {
            let p = taylor_poly(&f, t, 3).unwrap().to_poly();
            for (c, e) in p.coeffs().iter().zip([1.0, -2.0, 0.5, 3.0]) {
                assert!((c - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn order_zero_jet_matches_value_exactly() {
        let fs = [
            SmoothFunction::Gaussian,
            SmoothFunction::Sin,
            SmoothFunction::Cos,
            SmoothFunction::Exp,
            SmoothFunction::Tan,
            SmoothFunction::Polynomial {
                coeffs: vec![0.1, 0.2, -0.3],
            },
        ];
        for f in &fs {
            for x in [-1.3, -0.2, 0.0, 0.4, 1.1] {
                assert_eq!(f.jet(x, 0).unwrap().value(), f.value(x), "{f:?} at {x}");
            }
        }
    }

    #[test]
    fn velocity_of_cube_family() {
        for &(t, x) in &[(0.0, 1.0), (0.5, -0.5), (1.0, 1.0), (-0.3, 2.0)] {
            let v = taylor_velocity(&cube(), t, 2, x).unwrap();
            assert!((v - 3.0 * (x - t) * (x - t)).abs() < 1e-12);
        }
        assert_eq!(taylor_velocity(&SmoothFunction::Sin, 0.4, 3, 0.4).unwrap(), 0.0);
    }

    #[test]
    fn velocity_matches_central_difference() {
        let h = 1e-5;
        for f in [SmoothFunction::Sin, SmoothFunction::Exp, cube()] {
            for &(t, x) in &[(0.2, 1.5), (-0.4, 0.9), (0.7, -1.0)] {
                let v = taylor_velocity(&f, t, 2, x).unwrap();
                let fd = (taylor_poly(&f, t + h, 2).unwrap().eval(x)
                    - taylor_poly(&f, t - h, 2).unwrap().eval(x))
                    / (2.0 * h);
                assert!((v - fd).abs() <= 1e-6 * v.abs(), "{f:?} {t} {x}: {v} vs {fd}");
            }
        }
    }

    #[test]
    fn cube_quadratics_are_disjoint() {
        let r = verify_disjoint_even(&cube(), [-1.0, 1.0], 2, &TaylorOptions::default()).unwrap();
        assert!(r.hypothesis_holds);
        assert_eq!(r.pairs.len(), 190);
        assert!(r.pairs.iter().all(|p| p.roots == 0));
        assert!(r.passed);
        assert!(r.min_gap > 0.0);
    }

    #[test]
    fn sine_quadratics_are_disjoint() {
        let r = verify_disjoint_even(
            &SmoothFunction::Sin,
            [-FRAC_PI_2 + 0.1, FRAC_PI_2 - 0.1],
            2,
            &TaylorOptions::default(),
        )
        .unwrap();
        assert_eq!(r.derivative_sign, -1.0);
        assert!(r.passed);
    }

    #[test]
    fn sign_change_fails_hypothesis() {
        let r = verify_disjoint_even(&SmoothFunction::Sin, [0.5, 2.5], 2, &TaylorOptions::default())
            .unwrap();
        assert!(!r.hypothesis_holds);
        assert!(!r.passed);
    }

    #[test]
    fn parity_is_enforced() {
        let o = TaylorOptions::default();
        assert!(verify_disjoint_even(&cube(), [-1.0, 1.0], 3, &o).unwrap_err().is_usage());
        assert!(verify_disjoint_odd(&cube(), [-1.0, 1.0], 2, &o).unwrap_err().is_usage());
    }

    #[test]
    fn quartic_cubics_are_disjoint_to_the_right() {
        let f = SmoothFunction::monomial(4);
        let r = verify_disjoint_odd(&f, [-1.0, 1.0], 3, &TaylorOptions::default()).unwrap();
        assert!(r.passed);
        // (x-a)^4 = (x-b)^4 has the single real solution (a+b)/2 < b.
        assert!(r.pairs.iter().all(|p| p.left_roots == Some(1)));
    }

    #[test]
    fn equal_members_have_zero_difference() {
        assert!(difference_poly(&cube(), 0.4, 0.4, 2).unwrap().is_zero());
        let c = difference_higher_convexity(&cube(), 0.4, 0.4, 2).unwrap();
        assert!(c.degenerate && c.passed);
    }

    #[test]
    fn difference_of_cube_members() {
        let d = difference_poly(&cube(), 0.0, 1.0, 2).unwrap();
        assert_eq!(d.coeffs(), &[1.0, -3.0, 3.0]);
        let c = difference_higher_convexity(&cube(), 0.0, 1.0, 2).unwrap();
        assert!(c.passed);
        assert_eq!(c.orders.len(), 2);
    }

    #[test]
    fn quintic_difference_has_positive_even_derivatives() {
        let f = SmoothFunction::monomial(5);
        for &(a, b) in &[(-1.0, 1.0), (0.0, 0.5), (-0.8, -0.1), (0.3, 0.9)] {
            let c = difference_higher_convexity(&f, a, b, 4).unwrap();
            assert!(c.passed, "{a} {b}: {:?}", c.orders);
            assert_eq!(c.orders.iter().map(|o| o.order).collect::<Vec<_>>(), vec![0, 2, 4]);
        }
    }

    #[test]
    fn gaussian_derivative_zeros() {
        let g = SmoothFunction::Gaussian;
        let z = count_derivative_zeros(&g, 2, [-6.0, 6.0], 2000).unwrap();
        assert_eq!(z.count, 2);
        let r = 0.5f64.sqrt();
        assert!((z.zeros[0] + r).abs() < 1e-9 && (z.zeros[1] - r).abs() < 1e-9);
        assert!(!z.window_warning);

        let z = count_derivative_zeros(&g, 1, [-6.0, 6.0], 2000).unwrap();
        assert_eq!(z.count, 1);
        assert!(z.zeros[0].abs() < 1e-9);

        let z = count_derivative_zeros(&g, 6, [-6.0, 6.0], 2000).unwrap();
        assert_eq!(z.count, 6);
    }

    #[test]
    fn narrow_window_warns() {
        let z = count_derivative_zeros(&SmoothFunction::Gaussian, 4, [-1.0, 1.0], 500).unwrap();
        assert!(z.window_warning);
    }

    #[test]
    fn csv_has_one_row_per_pair() {
        let o = TaylorOptions {
            samples: 4,
            ..TaylorOptions::default()
        };
        let r = verify_disjoint_even(&cube(), [-1.0, 1.0], 2, &o).unwrap();
        let csv = r.to_csv();
        assert_eq!(csv.lines().next().unwrap(), "a,b,c0,c1,c2");
        assert_eq!(csv.lines().count(), 7);
    }

    proptest! {
        #[test]
        fn members_increase_in_t(t in -1.0f64..1.0, x in -3.0f64..3.0) {
            prop_assume!((x - t).abs() > 1e-3);
            let f = SmoothFunction::Exp;
            let h = 1e-4;
            let lo = taylor_poly(&f, t - h, 2).unwrap().eval(x);
            let hi = taylor_poly(&f, t + h, 2).unwrap().eval(x);
            prop_assert!(hi > lo);
        }

        #[test]
        fn leading_coefficient_of_difference(a in -1.0f64..1.0, b in -1.0f64..1.0) {
            prop_assume!((a - b).abs() > 1e-3);
            let f = SmoothFunction::Sin;
            let n = 4;
            let d = difference_poly(&f, a, b, n).unwrap();
            prop_assert!(d.degree().unwrap() <= n);
            let expected = (f.derivative(b, n).unwrap() - f.derivative(a, n).unwrap()) / 24.0;
            prop_assert!((d.coeffs()[n] - expected).abs() < 1e-12);
        }

        #[test]
        fn sturm_verdict_matches_dense_scan(a in -1.0f64..1.0, b in -1.0f64..1.0) {
            prop_assume!((a - b).abs() > 1e-3);
            let d = difference_poly(&SmoothFunction::monomial(4), a.min(b), a.max(b), 3).unwrap();
            let sturm = d.count_roots_in(-20.0, 20.0);
            let xs = sample_parameters(-20.0, 20.0, 10_000);
            let changes = xs.windows(2)
                .filter(|w| (d.eval(w[0]) > 0.0) != (d.eval(w[1]) > 0.0))
                .count();
            prop_assert_eq!(sturm, changes);
        }
    }
}
