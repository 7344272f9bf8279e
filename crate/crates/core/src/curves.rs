//! Closed-form plane curve families, their coordinate jets, curvature,
//! vertices and arc length.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::algebraic;
use crate::error::{Error, Result};
use crate::jets::{poly_jet, Jet, MAX_ORDER};
use crate::poly::Poly;
use crate::scan::scan_roots;

/// Below this speed a parameter value is treated as singular.
pub const MIN_SPEED: f64 = 1e-12;

/// Default number of cells for vertex scans.
pub const DEFAULT_VERTEX_GRID: usize = 2048;

/// Vertices with `|kappa''|` below this are flagged degenerate.
const DEGENERATE_VERTEX_TOL: f64 = 1e-8;

/// Bound on the summed absolute Fourier coefficients of an oval.
pub const FOURIER_AMPLITUDE_LIMIT: f64 = 0.2;

/// Absolute error target for arc-length quadrature.
pub const ARC_LENGTH_TOL: f64 = 1e-10;

/// The supported curve families, in the JSON form
/// `{"family": "...", "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum CurveFamily {
    /// `(a cos t, b sin t)`.
    Ellipse { a: f64, b: f64 },
    /// `e^{growth t} (cos t, sin t)`.
    LogSpiral { growth: f64 },
    /// Graph `(t, sum coeffs[i] t^i)`.
    PolynomialGraph { coeffs: Vec<f64> },
    /// Radial curve `r(t) (cos t, sin t)` with
    /// `r = 1 + sum_k cos[k-1] cos(kt) + sin[k-1] sin(kt)`.
    FourierOval { cos: Vec<f64>, sin: Vec<f64> },
    /// Arc of the zero set of a cubic, charted by rays from `center`:
    /// `center + rho(t) (cos t, sin t)` where `rho` is the first positive
    /// root of the cubic along the ray.
    CubicOvalArc { coeffs: [f64; 10], center: [f64; 2] },
}

/// Coordinate jets `(x(t), y(t))` at a common base and order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveJet2 {
    pub x: Jet,
    pub y: Jet,
}

impl CurveJet2 {
    pub fn new(x: Jet, y: Jet) -> Result<Self> {
        if x.order() != y.order() || x.base() != y.base() {
            return Err(Error::usage("coordinate jets must share base and order"));
        }
        Ok(CurveJet2 { x, y })
    }

    pub fn base(&self) -> f64 {
        self.x.base()
    }

    pub fn order(&self) -> usize {
        self.x.order()
    }

    pub fn position(&self) -> [f64; 2] {
        [self.x.value(), self.y.value()]
    }

    pub fn velocity(&self) -> [f64; 2] {
        [self.x.coeff(1), self.y.coeff(1)]
    }

    pub fn derivative(&self) -> Result<CurveJet2> {
        Ok(CurveJet2 {
            x: self.x.derivative()?,
            y: self.y.derivative()?,
        })
    }

    pub fn truncate(&self, order: usize) -> CurveJet2 {
        CurveJet2 {
            x: self.x.truncate(order),
            y: self.y.truncate(order),
        }
    }
}

/// Anything that yields coordinate jets on a parameter interval.
pub trait ParametricCurve: Sync {
    /// Exact coordinate jets at `t`.
    fn jet(&self, t: f64, order: usize) -> Result<CurveJet2>;

    fn domain(&self) -> (f64, f64);

    fn is_closed(&self) -> bool {
        false
    }

    fn point(&self, t: f64) -> Result<[f64; 2]> {
        Ok(self.jet(t, 0)?.position())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneCurve {
    #[serde(flatten)]
    pub family: CurveFamily,
    pub domain: [f64; 2],
    #[serde(default)]
    pub closed: bool,
}

impl PlaneCurve {
    /// Validates regularity (and closure, when claimed) on a grid.
    pub fn new(family: CurveFamily, domain: [f64; 2], closed: bool) -> Result<Self> {
        let c = PlaneCurve {
            family,
            domain,
            closed,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::new(CurveFamily::Ellipse { a, b }, [0.0, TAU], true)
    }

    pub fn ellipse_arc(a: f64, b: f64, t0: f64, t1: f64) -> Result<Self> {
        Self::new(CurveFamily::Ellipse { a, b }, [t0, t1], false)
    }

    pub fn log_spiral(growth: f64, t0: f64, t1: f64) -> Result<Self> {
        Self::new(CurveFamily::LogSpiral { growth }, [t0, t1], false)
    }

    pub fn polynomial_graph(coeffs: Vec<f64>, t0: f64, t1: f64) -> Result<Self> {
        Self::new(CurveFamily::PolynomialGraph { coeffs }, [t0, t1], false)
    }

    pub fn fourier_oval(cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        Self::new(CurveFamily::FourierOval { cos, sin }, [0.0, TAU], true)
    }

    pub fn cubic_oval(coeffs: [f64; 10], center: [f64; 2]) -> Result<Self> {
        Self::new(CurveFamily::CubicOvalArc { coeffs, center }, [0.0, TAU], true)
    }

    /// A seeded random convex Fourier oval with 2 to 4 harmonics.
    pub fn random_fourier_oval<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let k = rng.random_range(2..=4usize);
            let mut cos: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut sin: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
            // Damp higher harmonics so most draws stay convex.
            for (i, (c, s)) in cos.iter_mut().zip(sin.iter_mut()).enumerate() {
                let w = 1.0 / ((i + 1) * (i + 1)) as f64;
                *c *= w;
                *s *= w;
            }
            let total: f64 = cos.iter().chain(&sin).map(|c| c.abs()).sum();
            let target = rng.random_range(0.05..FOURIER_AMPLITUDE_LIMIT);
            let s = target / total;
            cos.iter_mut().chain(sin.iter_mut()).for_each(|c| *c *= s);
            if let Ok(c) = PlaneCurve::fourier_oval(cos, sin) {
                return c;
            }
        }
    }

    /// `n` ovals drawn in order from a ChaCha8 stream seeded with `seed`.
    pub fn fourier_oval_batch(seed: u64, n: usize) -> Vec<Self> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Self::random_fourier_oval(&mut rng)).collect()
    }

    /// Re-runs the construction checks, e.g. after deserializing.
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let [t0, t1] = self.domain;
        if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
            return Err(Error::InvalidCurve(format!("bad domain [{t0}, {t1}]")));
        }
        match &self.family {
            CurveFamily::Ellipse { a, b } => {
                if !(*a > 0.0 && *b > 0.0) {
                    return Err(Error::InvalidCurve("ellipse semi-axes must be positive".into()));
                }
            }
            CurveFamily::LogSpiral { growth } => {
                if !growth.is_finite() {
                    return Err(Error::InvalidCurve("spiral growth must be finite".into()));
                }
            }
            CurveFamily::PolynomialGraph { coeffs } => {
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidCurve("polynomial needs finite coefficients".into()));
                }
            }
            CurveFamily::FourierOval { cos, sin } => {
                let total: f64 = cos.iter().chain(sin).map(|c| c.abs()).sum();
                if total > FOURIER_AMPLITUDE_LIMIT + 1e-15 {
                    return Err(Error::InvalidCurve(format!(
                        "Fourier amplitudes sum to {total}, limit is {FOURIER_AMPLITUDE_LIMIT}"
                    )));
                }
            }
            CurveFamily::CubicOvalArc { coeffs, .. } => {
                if coeffs.iter().all(|c| *c == 0.0) {
                    return Err(Error::InvalidCurve("zero cubic".into()));
                }
            }
        }

        const GRID: usize = 256;
        let mut first_sign = 0.0;
        for i in 0..=GRID {
            let t = t0 + (t1 - t0) * i as f64 / GRID as f64;
            let j = self
                .jet(t, 2)
                .map_err(|e| Error::InvalidCurve(format!("at t = {t}: {e}")))?;
            let [vx, vy] = j.velocity();
            if vx.hypot(vy) <= MIN_SPEED {
                return Err(Error::InvalidCurve(format!("not regular at t = {t}")));
            }
            if matches!(self.family, CurveFamily::FourierOval { .. }) {
                let k = curvature_of(&j)?;
                if first_sign == 0.0 {
                    first_sign = k.signum();
                }
                if k * first_sign <= 0.0 {
                    return Err(Error::InvalidCurve(format!(
                        "Fourier oval is not strictly convex near t = {t}"
                    )));
                }
            }
        }

        if self.closed {
            let a = self.jet(t0, MAX_ORDER)?;
            let b = self.jet(t1, MAX_ORDER)?;
            for (ja, jb) in [(a.x, b.x), (a.y, b.y)] {
                for i in 0..=MAX_ORDER {
                    let (ca, cb) = (ja.coeff(i), jb.coeff(i));
                    if (ca - cb).abs() > 1e-9 * ca.abs().max(cb.abs()).max(1.0) {
                        return Err(Error::InvalidCurve(format!(
                            "curve marked closed but order-{i} jets differ at the ends"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn raw_jet(&self, t: f64, order: usize) -> Result<CurveJet2> {
        let tj = Jet::variable(t, order);
        let (x, y) = match &self.family {
            CurveFamily::Ellipse { a, b } => {
                let (s, c) = tj.sin_cos();
                (c * *a, s * *b)
            }
            CurveFamily::LogSpiral { growth } => {
                let (s, c) = tj.sin_cos();
                let r = (tj * *growth).exp();
                (r * c, r * s)
            }
            CurveFamily::PolynomialGraph { coeffs } => (tj, poly_jet(coeffs, &tj)),
            CurveFamily::FourierOval { cos, sin } => {
                let mut r = Jet::constant(t, 1.0, order);
                for (k, (a, b)) in cos.iter().zip(sin).enumerate() {
                    let (s, c) = (tj * (k + 1) as f64).sin_cos();
                    r = r + c * *a + s * *b;
                }
                // Unpaired trailing coefficients.
                for (k, a) in cos.iter().enumerate().skip(sin.len()) {
                    r = r + (tj * (k + 1) as f64).cos() * *a;
                }
                for (k, b) in sin.iter().enumerate().skip(cos.len()) {
                    r = r + (tj * (k + 1) as f64).sin() * *b;
                }
                let (s, c) = tj.sin_cos();
                (r * c, r * s)
            }
            CurveFamily::CubicOvalArc { coeffs, center } => {
                return cubic_ray_jet(coeffs, *center, t, order);
            }
        };
        CurveJet2::new(x, y)
    }
}

/// Jets of `center + rho(t) (cos t, sin t)` on the zero set of a cubic.
fn cubic_ray_jet(coeffs: &[f64; 10], center: [f64; 2], t: f64, order: usize) -> Result<CurveJet2> {
    let (s0, c0) = t.sin_cos();
    // The cubic restricted to the ray, as a polynomial in rho.
    let rx = Jet::new(0.0, &[center[0], c0, 0.0, 0.0])?;
    let ry = Jet::new(0.0, &[center[1], s0, 0.0, 0.0])?;
    let along = algebraic::eval_jet(coeffs, 3, &rx, &ry);
    let p = Poly::new(along.coeffs().to_vec()).trimmed(1e-14);
    let bound = p.root_bound();
    let rho0 = p
        .real_roots_in(0.0, bound, 1e-13)
        .into_iter()
        .find(|&r| r > 0.0)
        .ok_or_else(|| Error::Singular {
            at: t,
            what: "ray from the chart center misses the cubic".into(),
        })?;

    let (gx, gy) = algebraic::gradient(coeffs, 3);
    let theta = Jet::variable(t, order);
    let (s, c) = theta.sin_cos();
    let mut rho = Jet::constant(t, rho0, order);
    // Newton on jets; the number of correct coefficients doubles each pass.
    for _ in 0..6 {
        let x = c * rho + center[0];
        let y = s * rho + center[1];
        let g = algebraic::eval_jet(coeffs, 3, &x, &y);
        let dg = algebraic::eval_jet(&gx, 3, &x, &y) * c + algebraic::eval_jet(&gy, 3, &x, &y) * s;
        rho = rho - g.checked_div(&dg)?;
    }
    CurveJet2::new(c * rho + center[0], s * rho + center[1])
}

impl ParametricCurve for PlaneCurve {
    fn jet(&self, t: f64, order: usize) -> Result<CurveJet2> {
        if order > MAX_ORDER {
            return Err(Error::usage(format!("order {order} exceeds {MAX_ORDER}")));
        }
        let [t0, t1] = self.domain;
        let slack = 1e-12 * (t1 - t0).max(1.0);
        if !self.closed && (t < t0 - slack || t > t1 + slack) {
            return Err(Error::Domain { t, t0, t1 });
        }
        self.raw_jet(t, order)
    }

    fn domain(&self) -> (f64, f64) {
        (self.domain[0], self.domain[1])
    }

    fn is_closed(&self) -> bool {
        self.closed
    }
}

/// `(x'y'' - y'x'') / |γ'|^3` from a jet of order ≥ 2.
pub fn curvature_of(j: &CurveJet2) -> Result<f64> {
    let (x1, y1) = (j.x.coeff(1), j.y.coeff(1));
    let (x2, y2) = (2.0 * j.x.coeff(2), 2.0 * j.y.coeff(2));
    let speed = x1.hypot(y1);
    if speed <= MIN_SPEED {
        return Err(Error::Singular {
            at: j.base(),
            what: "vanishing velocity".into(),
        });
    }
    Ok((x1 * y2 - y1 * x2) / speed.powi(3))
}

pub fn curvature<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<f64> {
    curvature_of(&c.jet(t, 2)?)
}

/// Jet of the signed curvature at `t`, of order `order` (uses curve jets of
/// order `order + 2`).
pub fn curvature_jet<C: ParametricCurve + ?Sized>(c: &C, t: f64, order: usize) -> Result<Jet> {
    let j = c.jet(t, order + 2)?;
    let d1 = j.derivative()?;
    let d2 = d1.derivative()?;
    let (x1, y1) = (d1.x.truncate(order), d1.y.truncate(order));
    let speed2 = x1 * x1 + y1 * y1;
    if speed2.value().sqrt() <= MIN_SPEED {
        return Err(Error::Singular {
            at: t,
            what: "vanishing velocity".into(),
        });
    }
    let cross = x1 * d2.y - y1 * d2.x;
    cross.checked_div(&speed2.powf(1.5)?)
}

/// Unit tangent at `t`.
pub fn unit_tangent<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<[f64; 2]> {
    let [vx, vy] = c.jet(t, 1)?.velocity();
    let s = vx.hypot(vy);
    if s <= MIN_SPEED {
        return Err(Error::Singular {
            at: t,
            what: "vanishing velocity".into(),
        });
    }
    Ok([vx / s, vy / s])
}

pub fn speed<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<f64> {
    let [vx, vy] = c.jet(t, 1)?.velocity();
    Ok(vx.hypot(vy))
}

/// A curvature extremum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Vertex {
    pub t: f64,
    /// `|kappa''| < 1e-8` at the root (a double root of `kappa'`).
    pub degenerate: bool,
}

/// Zeros of `kappa'` over the domain, from a sign-change scan on `grid_n`
/// cells refined by bisection. Closed curves are scanned over one period.
pub fn find_vertices<C: ParametricCurve + ?Sized>(c: &C, grid_n: usize) -> Result<Vec<Vertex>> {
    if grid_n < 16 {
        return Err(Error::usage("vertex scan needs at least 16 cells"));
    }
    let (t0, t1) = c.domain();
    let dk = |t: f64| -> Result<f64> { Ok(curvature_jet(c, t, 1)?.coeff(1)) };
    let scan = scan_roots(dk, t0, t1, grid_n, c.is_closed())?;

    let kappa_scale = scan
        .grid
        .iter()
        .map(|&t| curvature(c, t).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(1.0f64, f64::max);
    let zero_tol = 1e-12 * kappa_scale;
    let n = scan.values.len();
    for i in 0..n {
        let j = if i + 1 < n { i + 1 } else if c.is_closed() { 0 } else { break };
        let (va, vb) = (scan.values[i], scan.values[j]);
        if va.abs() <= zero_tol && vb.abs() <= zero_tol {
            let h = (t1 - t0) / grid_n as f64;
            let mid = dk(scan.grid[i] + 0.5 * h)?;
            if mid.abs() <= zero_tol {
                return Err(Error::DegenerateFamily(format!(
                    "curvature is constant near t = {}",
                    scan.grid[i]
                )));
            }
        }
    }

    scan.roots
        .into_iter()
        .map(|t| {
            let kj = curvature_jet(c, t, 2)?;
            Ok(Vertex {
                t,
                degenerate: (2.0 * kj.coeff(2)).abs() < DEGENERATE_VERTEX_TOL,
            })
        })
        .collect()
}

/// Integrates a smooth scalar function, splitting long intervals.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if b == a {
        return 0.0;
    }
    let (lo, hi, sign) = if b > a { (a, b, 1.0) } else { (b, a, -1.0) };
    let pieces = ((hi - lo) / 0.5).ceil().max(1.0) as usize;
    let h = (hi - lo) / pieces as f64;
    let per = tol / pieces as f64;
    let total: f64 = (0..pieces)
        .map(|i| {
            let s = lo + h * i as f64;
            let e = if i + 1 == pieces { hi } else { s + h };
            quadrature::double_exponential::integrate(&f, s, e, per).integral
        })
        .sum();
    sign * total
}

/// Length of the arc between parameters `a` and `b` (signed by `b - a`).
pub fn arc_length<C: ParametricCurve + ?Sized>(c: &C, a: f64, b: f64) -> Result<f64> {
    c.jet(a, 0)?;
    c.jet(b, 0)?;
    let v = integrate(
        |t| c.jet(t, 1).map(|j| {
            let [vx, vy] = j.velocity();
            vx.hypot(vy)
        }).unwrap_or(f64::NAN),
        a,
        b,
        ARC_LENGTH_TOL,
    );
    if !v.is_finite() {
        return Err(Error::Singular {
            at: a,
            what: "arc length integrand undefined".into(),
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn ellipse_jet_at_zero() {
        let e = PlaneCurve::ellipse(2.0, 1.0).unwrap();
        let j = e.jet(0.0, 1).unwrap();
        assert_eq!(j.position(), [2.0, 0.0]);
        assert_eq!(j.velocity(), [0.0, 1.0]);
    }

    #[test]
    fn spiral_and_cubic_graph_jets() {
        let s = PlaneCurve::log_spiral(0.2, 0.0, 4.0 * PI).unwrap();
        assert_eq!(s.jet(0.0, 0).unwrap().position(), [1.0, 0.0]);
        let g = PlaneCurve::polynomial_graph(vec![0.0, 0.0, 0.0, 1.0], -2.0, 2.0).unwrap();
        assert_eq!(g.jet(1.0, 3).unwrap().y.coeffs(), &[1.0, 3.0, 3.0, 1.0]);
    }

    #[test]
    fn out_of_domain() {
        let s = PlaneCurve::log_spiral(0.2, 0.0, 1.0).unwrap();
        assert!(matches!(s.jet(1.5, 1), Err(Error::Domain { .. })));
    }

    #[test]
    fn curvature_examples() {
        let c = PlaneCurve::ellipse(1.0, 1.0).unwrap();
        for i in 0..10 {
            assert!((curvature(&c, i as f64 * 0.6).unwrap() - 1.0).abs() < 1e-12);
        }
        let e = PlaneCurve::ellipse(2.0, 1.0).unwrap();
        assert!((curvature(&e, 0.0).unwrap() - 2.0).abs() < 1e-14);
        let a = 0.2;
        let s = PlaneCurve::log_spiral(a, 0.0, 10.0).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let t = i as f64 * 0.2;
            let k = curvature(&s, t).unwrap();
            let oracle = (-a * t).exp() / (1.0 + a * a).sqrt();
            assert!((k - oracle).abs() < 1e-12 * oracle.max(1.0));
            assert!(k < prev);
            prev = k;
        }
    }

    #[test]
    fn curvature_of_circles_of_any_radius() {
        for r in [0.5, 1.0, 3.0] {
            let c = PlaneCurve::ellipse(r, r).unwrap();
            for i in 0..20 {
                let k = curvature(&c, i as f64 * 0.31).unwrap();
                assert!((k - 1.0 / r).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ellipse_vertices() {
        let e = PlaneCurve::ellipse(2.0, 1.0).unwrap();
        let v = find_vertices(&e, DEFAULT_VERTEX_GRID).unwrap();
        let ts: Vec<f64> = v.iter().map(|v| v.t).collect();
        assert_eq!(ts.len(), 4, "{ts:?}");
        for (t, want) in ts.iter().zip([0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]) {
            assert!((t - want).abs() < 1e-9, "{t} vs {want}");
        }
        assert!(v.iter().all(|v| !v.degenerate));
    }

    #[test]
    fn spiral_has_no_vertices() {
        let s = PlaneCurve::log_spiral(0.2, 0.0, 4.0 * PI).unwrap();
        assert!(find_vertices(&s, DEFAULT_VERTEX_GRID).unwrap().is_empty());
    }

    #[test]
    fn circle_vertices_are_degenerate() {
        let c = PlaneCurve::ellipse(1.0, 1.0).unwrap();
        assert!(matches!(
            find_vertices(&c, 64),
            Err(Error::DegenerateFamily(_))
        ));
        assert!(matches!(find_vertices(&c, 8), Err(Error::Usage(_))));
    }

    #[test]
    fn random_ovals_have_even_vertex_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let c = PlaneCurve::random_fourier_oval(&mut rng);
            let n = find_vertices(&c, 1024).unwrap().len();
            assert!(n >= 4 && n.is_multiple_of(2), "{n}");
        }
    }

    /// Complete elliptic integral of the second kind via the AGM (oracle).
    fn elliptic_e(k: f64) -> f64 {
        let (mut a, mut g) = (1.0f64, (1.0 - k * k).sqrt());
        let mut sum = k * k / 2.0;
        let mut pow = 0.5;
        for _ in 0..30 {
            let an = 0.5 * (a + g);
            let gn = (a * g).sqrt();
            let c = 0.5 * (a - g);
            pow *= 2.0;
            sum += pow * c * c;
            a = an;
            g = gn;
        }
        PI / (2.0 * a) * (1.0 - sum)
    }

    #[test]
    fn arc_lengths() {
        let c = PlaneCurve::ellipse(1.0, 1.0).unwrap();
        assert!((arc_length(&c, 0.0, TAU).unwrap() - TAU).abs() < 1e-9);
        let seg = PlaneCurve::polynomial_graph(vec![0.0, 1.0], 0.0, 1.0).unwrap();
        assert!((arc_length(&seg, 0.0, 1.0).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let e = PlaneCurve::ellipse(2.0, 1.0).unwrap();
        let ecc = (1.0f64 - 0.25).sqrt();
        let oracle = 4.0 * 2.0 * elliptic_e(ecc);
        assert!((arc_length(&e, 0.0, TAU).unwrap() - oracle).abs() < 1e-8);
    }

    #[test]
    fn arc_length_is_additive() {
        let s = PlaneCurve::log_spiral(0.2, 0.0, 3.0 * PI).unwrap();
        for (a, b, c) in [(0.0, 1.0, 2.5), (0.3, 4.0, 9.0)] {
            let lac = arc_length(&s, a, c).unwrap();
            let lab = arc_length(&s, a, b).unwrap();
            let lbc = arc_length(&s, b, c).unwrap();
            assert!((lac - lab - lbc).abs() < 1e-9);
        }
    }

    #[test]
    fn fourier_amplitude_limit() {
        assert!(PlaneCurve::fourier_oval(vec![0.15, 0.1], vec![]).is_err());
        assert!(PlaneCurve::fourier_oval(vec![0.0, 0.05], vec![0.0, 0.0, 0.03]).is_ok());
    }

    #[test]
    fn closed_flag_is_checked() {
        let r = PlaneCurve::new(CurveFamily::LogSpiral { growth: 0.2 }, [0.0, TAU], true);
        assert!(matches!(r, Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn cubic_oval_arc_lies_on_cubic() {
        // y^2 - x(x-1)(x+1) = y^2 - x^3 + x
        let k = [0.0, 1.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, 0.0];
        let c = PlaneCurve::cubic_oval(k, [-0.5, 0.0]).unwrap();
        for i in 0..16 {
            let t = i as f64 * TAU / 16.0;
            let j = c.jet(t, 6).unwrap();
            let f = algebraic::eval_jet(&k, 3, &j.x, &j.y);
            assert!(f.norm_inf() < 1e-11, "t={t}: {:?}", f.coeffs());
        }
    }

    #[test]
    fn json_schema() {
        let text = r#"{"family": "ellipse", "params": {"a": 2.0, "b": 1.0},
                       "domain": [0.0, 6.283185307179586], "closed": true}"#;
        let c: PlaneCurve = serde_json::from_str(text).unwrap();
        assert_eq!(c.family, CurveFamily::Ellipse { a: 2.0, b: 1.0 });
        assert!(c.closed);
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        assert_eq!(v["family"], "ellipse");
        assert_eq!(v["params"]["a"], 2.0);
    }
}
