//! Osculating conics, sextactic points, and real intersection counts of
//! conic pairs.

use nalgebra::{DMatrix, Matrix3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::{eval_jet, monomial_jets, null_vector, unshift};
use crate::circles::{sample_parameters, NestingReport, PairRelation};
use crate::curves::{curvature, unit_tangent, ParametricCurve};
use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::poly::Poly;
use crate::scan::scan_roots;

/// Relative singular-value threshold for the rank of the jet conditions.
pub const RANK_RATIO: f64 = 1e-8;

/// `|det q|` at or below this marks a normalized conic as degenerate.
pub const DEGENERATE_DET: f64 = 1e-10;

/// Sextactic values at or below this are treated as zero.
pub const SEXTACTIC_ZERO: f64 = 1e-10;

pub const DEFAULT_SEXTACTIC_GRID: usize = 1024;

/// Angle of the fixed rotation applied before elimination, so that no
/// asymptotic direction is vertical for structured inputs.
const GENERIC_ANGLE: f64 = 0.618_033_988_749_895;

/// `a x^2 + b xy + c y^2 + d x + e y + f`, scaled so the symmetric matrix
/// of the form has Frobenius norm 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conic {
    /// `(a, b, c, d, e, f)`.
    pub coeffs: [f64; 6],
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicKind {
    Ellipse,
    Parabola,
    Hyperbola,
}

impl Conic {
    /// Scales to unit Frobenius norm, keeping the sign.
    pub fn new(coeffs: [f64; 6]) -> Result<Self> {
        let norm = Self::matrix_of(&coeffs).norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::usage("conic coefficients vanish"));
        }
        let coeffs = coeffs.map(|v| v / norm);
        let det = Self::matrix_of(&coeffs).determinant();
        Ok(Conic {
            coeffs,
            degenerate: det.abs() <= DEGENERATE_DET,
        })
    }

    fn matrix_of(q: &[f64; 6]) -> Matrix3<f64> {
        let [a, b, c, d, e, f] = *q;
        Matrix3::new(a, b / 2.0, d / 2.0, b / 2.0, c, e / 2.0, d / 2.0, e / 2.0, f)
    }

    fn from_matrix(m: &Matrix3<f64>) -> Result<Self> {
        Conic::new([
            m[(0, 0)],
            m[(0, 1)] + m[(1, 0)],
            m[(1, 1)],
            m[(0, 2)] + m[(2, 0)],
            m[(1, 2)] + m[(2, 1)],
            m[(2, 2)],
        ])
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Self::matrix_of(&self.coeffs)
    }

    /// Coefficients in the basis `1, x, y, x^2, xy, y^2`.
    pub fn basis_coeffs(&self) -> [f64; 6] {
        let [a, b, c, d, e, f] = self.coeffs;
        [f, d, e, a, b, c]
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let [a, b, c, d, e, f] = self.coeffs;
        a * x * x + b * x * y + c * y * y + d * x + e * y + f
    }

    pub fn negated(&self) -> Conic {
        Conic {
            coeffs: self.coeffs.map(|v| -v),
            degenerate: self.degenerate,
        }
    }

    pub fn kind(&self) -> ConicKind {
        let [a, b, c, ..] = self.coeffs;
        let m = a * c - b * b / 4.0;
        let scale = a.abs().max(b.abs()).max(c.abs()).powi(2);
        if m.abs() <= 1e-12 * scale {
            ConicKind::Parabola
        } else if m > 0.0 {
            ConicKind::Ellipse
        } else {
            ConicKind::Hyperbola
        }
    }

    /// Center of a central conic.
    pub fn center(&self) -> Option<[f64; 2]> {
        let [a, b, c, d, e, _] = self.coeffs;
        let det = a * c - b * b / 4.0;
        if det.abs() <= 1e-14 {
            return None;
        }
        Some([
            (-d / 2.0 * c + e / 2.0 * b / 2.0) / det,
            (-e / 2.0 * a + d / 2.0 * b / 2.0) / det,
        ])
    }

    /// A real ellipse: ellipse type with points on it.
    pub fn is_real_ellipse(&self) -> bool {
        if self.degenerate || self.kind() != ConicKind::Ellipse {
            return false;
        }
        let [x, y] = self.center().expect("ellipse has a center");
        let [a, ..] = self.coeffs;
        self.eval(x, y).signum() != a.signum()
    }

    /// A point of a real ellipse, reached from the center along `+x`.
    fn ellipse_point(&self) -> [f64; 2] {
        let [x, y] = self.center().expect("ellipse has a center");
        let [a, ..] = self.coeffs;
        let s = (-self.eval(x, y) / a).sqrt();
        [x + s, y]
    }

    /// `Conic` in coordinates `X = H X'`: `q' = H^T q H`.
    pub fn transformed(&self, h: &Matrix3<f64>) -> Result<Conic> {
        Conic::from_matrix(&(h.transpose() * self.matrix() * h))
    }

    /// `Conic` seen from a frame with origin `p` rotated by `theta`.
    pub fn in_frame(&self, p: [f64; 2], theta: f64) -> Result<Conic> {
        let (s, c) = theta.sin_cos();
        self.transformed(&Matrix3::new(c, -s, p[0], s, c, p[1], 0.0, 0.0, 1.0))
    }

    pub fn approx_eq(&self, other: &Conic, tol: f64) -> bool {
        self.coeffs
            .iter()
            .zip(other.coeffs)
            .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// Osculating conic at `t` together with its contact data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConicFit {
    pub conic: Conic,
    /// Jet coefficients 0..=5 of `F ∘ γ` at `t` for the normalized conic.
    pub contact: [f64; 6],
    pub nullity: usize,
}

impl ConicFit {
    /// Coefficient 5 of `F ∘ γ`; zero exactly at sextactic points.
    pub fn sextactic(&self) -> f64 {
        self.contact[5]
    }
}

/// Local frame data shared by the osculating conic and cubic fits.
pub(crate) struct LocalJet {
    pub origin: [f64; 2],
    pub u: Jet,
    pub v: Jet,
    /// Interior probe: `γ(t) + 1e-3 ρ N` toward the center of curvature.
    pub probe: [f64; 2],
}

pub(crate) fn local_jet<C: ParametricCurve + ?Sized>(
    c: &C,
    t: f64,
    order: usize,
) -> Result<LocalJet> {
    let j = c.jet(t, order)?;
    let origin = j.position();
    let k = curvature(c, t)?;
    if k.abs() <= 1e-10 {
        return Err(Error::FlatPoint { t, curvature: k });
    }
    let [tx, ty] = unit_tangent(c, t)?;
    let eps = 1e-3 / k;
    Ok(LocalJet {
        origin,
        u: j.x - origin[0],
        v: j.y - origin[1],
        probe: [origin[0] - ty * eps, origin[1] + tx * eps],
    })
}

/// Null vector of the `rows x basis` system asking jet coefficients
/// `0..rows` of `G(u, v)` to vanish.
pub(crate) fn fit_local(degree: u32, rows: usize, lj: &LocalJet) -> crate::algebraic::NullVector {
    let monos = monomial_jets(degree, &lj.u, &lj.v);
    let m = DMatrix::from_fn(rows, monos.len(), |r, col| monos[col].coeff(r));
    null_vector(&m, RANK_RATIO)
}

pub fn fit_osculating_conic<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<ConicFit> {
    let lj = local_jet(c, t, 5)?;
    let nv = fit_local(2, 5, &lj);
    let mut local = nv.vector.clone();
    let global = unshift(&local, 2, lj.origin[0], lj.origin[1]);
    let [f, d, e, a, b, cc] = [global[0], global[1], global[2], global[3], global[4], global[5]];
    let raw = [a, b, cc, d, e, f];
    let mut conic = Conic::new(raw)?;
    let mut factor = 1.0 / Conic::matrix_of(&raw).norm();
    if conic.eval(lj.probe[0], lj.probe[1]) > 0.0 {
        conic = conic.negated();
        factor = -factor;
    }
    local.iter_mut().for_each(|v| *v *= factor);
    let contact_jet = eval_jet(&local, 2, &lj.u, &lj.v);
    let contact: [f64; 6] = std::array::from_fn(|i| contact_jet.coeff(i));
    Ok(ConicFit {
        conic,
        contact,
        nullity: nv.nullity,
    })
}

/// The unique conic with 4-jet contact at `t`.
pub fn osculating_conic<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<Conic> {
    let fit = fit_osculating_conic(c, t)?;
    if fit.nullity != 1 {
        return Err(Error::DegenerateOsculation {
            t,
            nullity: fit.nullity,
        });
    }
    Ok(fit.conic)
}

pub fn sextactic_function<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<f64> {
    let fit = fit_osculating_conic(c, t)?;
    if fit.nullity != 1 {
        return Err(Error::DegenerateOsculation {
            t,
            nullity: fit.nullity,
        });
    }
    Ok(fit.sextactic())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SextacticScan {
    pub grid: Vec<f64>,
    pub s_values: Vec<f64>,
    pub roots: Vec<f64>,
    pub count: usize,
}

/// Sign changes of the sextactic function over the domain (one period for
/// closed curves).
pub fn sextactic_scan<C: ParametricCurve + ?Sized>(c: &C, grid_n: usize) -> Result<SextacticScan> {
    if grid_n < 16 {
        return Err(Error::usage("grid needs at least 16 cells"));
    }
    let (t0, t1) = c.domain();
    let scan = scan_roots(|t| sextactic_function(c, t), t0, t1, grid_n, c.is_closed())?;
    Ok(SextacticScan {
        count: scan.count(),
        grid: scan.grid,
        s_values: scan.values,
        roots: scan.roots,
    })
}

/// Real roots, in the chart `y = 1`, of `a x^2 + b x + c`, plus `∞` when
/// the leading coefficient vanishes.
fn binary_form_roots(a: f64, b: f64, c: f64, tol: f64) -> Vec<Option<f64>> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    let mut out = Vec::new();
    if a.abs() <= tol * scale {
        out.push(None);
        if b.abs() > tol * scale {
            out.push(Some(-c / b));
        }
        return out;
    }
    let disc = b * b - 4.0 * a * c;
    if disc.abs() <= tol * scale * scale {
        out.push(Some(-b / (2.0 * a)));
    } else if disc > 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        out.push(Some(q / a));
        out.push(Some(c / q));
    }
    out
}

/// Real common points on the line at infinity.
fn points_at_infinity(c1: &Conic, c2: &Conic) -> usize {
    let [a1, b1, cc1, ..] = c1.coeffs;
    let [a2, b2, cc2, ..] = c2.coeffs;
    let tol = 1e-9;
    let n1 = a1.abs().max(b1.abs()).max(cc1.abs());
    let n2 = a2.abs().max(b2.abs()).max(cc2.abs());
    if n1 <= tol || n2 <= tol {
        // A conic containing the whole line at infinity is degenerate.
        return 0;
    }
    binary_form_roots(a1, b1, cc1, tol)
        .into_iter()
        .filter(|r| {
            let v = match r {
                Some(x) => (a2 * x * x + b2 * x + cc2) / (1.0 + x * x),
                None => a2,
            };
            v.abs() <= tol * n2
        })
        .count()
}

/// `Res_y(F1, F2)` as a polynomial in `x`, up to a positive factor.
///
/// Computed as `Res_y(F1, D)` with `D = F2 - F1` scaled to unit size: the
/// resultant is unchanged by adding multiples of `F1`, and nearby conics
/// keep every factor linear in the small difference.
fn y_resultant(c1: &Conic, c2: &Conic) -> Poly {
    let [a1, b1, cc1, d1, e1, f1] = c1.coeffs;
    let mut diff: [f64; 6] = std::array::from_fn(|i| c2.coeffs[i] - c1.coeffs[i]);
    let n = diff.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if n > 0.0 {
        diff.iter_mut().for_each(|v| *v /= n);
    }
    let [a2, b2, cc2, d2, e2, f2] = diff;
    // F = A y^2 + B(x) y + C(x)
    let (ay1, ay2) = (Poly::constant(cc1), Poly::constant(cc2));
    let (by1, by2) = (Poly::new(vec![e1, b1]), Poly::new(vec![e2, b2]));
    let (cy1, cy2) = (Poly::new(vec![f1, d1, a1]), Poly::new(vec![f2, d2, a2]));
    let ac = ay1.mul(&cy2).sub(&ay2.mul(&cy1));
    let ab = ay1.mul(&by2).sub(&ay2.mul(&by1));
    let bc = by1.mul(&cy2).sub(&by2.mul(&cy1));
    ac.mul(&ac).sub(&ab.mul(&bc))
}

/// Real common points over a real root `x` of the resultant.
fn partners(c1: &Conic, c2: &Conic, x: f64) -> usize {
    let [a1, b1, cc1, d1, e1, f1] = c1.coeffs;
    let [_, b2, cc2, _, e2, _] = c2.coeffs;
    let (bb1, k1) = (b1 * x + e1, a1 * x * x + d1 * x + f1);
    let bb2 = b2 * x + e2;
    // cc2 F1 - cc1 F2 is linear in y.
    let lin = cc2 * bb1 - cc1 * bb2;
    let scale = 1.0 + x.abs() * x.abs();
    if lin.abs() > 1e-9 * scale {
        return 1;
    }
    // Both y-roots are shared; count the real ones of F1.
    let disc = bb1 * bb1 - 4.0 * cc1 * k1;
    if disc > 1e-12 * scale * scale {
        2
    } else if disc.abs() <= 1e-12 * scale * scale {
        1
    } else {
        0
    }
}

/// Count and gap of real affine intersections in the current frame.
fn affine_intersections(c1: &Conic, c2: &Conic) -> (usize, f64) {
    let r = y_resultant(c1, c2).without_small_leading(1e-13);
    if r.is_zero() {
        return (usize::MAX, 0.0);
    }
    // Rescale x so that the root cluster has unit size.
    let cs = r.coeffs();
    let n = cs.len() - 1;
    let s = if n > 0 && cs[0] != 0.0 {
        (cs[0] / cs[n]).abs().powf(1.0 / n as f64).clamp(1e-8, 1e8)
    } else {
        1.0
    };
    let z = Poly::new(
        cs.iter()
            .enumerate()
            .map(|(k, c)| c * s.powi(k as i32))
            .collect::<Vec<_>>(),
    );
    let roots: Vec<f64> = z.real_roots(1e-13).into_iter().map(|r| r * s).collect();
    let count = roots.iter().map(|&x| partners(c1, c2, x)).sum();
    let gap = if roots.is_empty() { resultant_gap(&z) } else { 0.0 };
    (count, gap)
}

/// `min |R|` over the real critical points of `R`, relative to its size.
fn resultant_gap(r: &Poly) -> f64 {
    let crit = r.derivative().real_roots(1e-13);
    let scale = r.max_abs_coeff();
    crit.iter()
        .map(|&x| r.eval(x).abs() / (scale * (1.0 + x * x).powi(2)))
        .fold(r.coeffs().last().map(|l| l.abs() / scale).unwrap_or(0.0), f64::min)
}

/// Checks that the two conics are not proportional.
fn check_distinct(c1: &Conic, c2: &Conic) -> Result<()> {
    let diff = c1.coeffs.iter().zip(c2.coeffs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let sum = c1.coeffs.iter().zip(c2.coeffs).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
    if diff < 1e-10 || sum < 1e-10 {
        return Err(Error::IdenticalConics);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntersectionCount {
    pub affine: usize,
    pub at_infinity: usize,
    /// Relative distance of the resultant from acquiring a real root; zero
    /// when it has one.
    pub gap: f64,
}

impl IntersectionCount {
    pub fn total(&self) -> usize {
        self.affine + self.at_infinity
    }
}

/// Real intersections, counted in a frame centered at `origin`.
pub fn intersections_about(c1: &Conic, c2: &Conic, origin: [f64; 2]) -> Result<IntersectionCount> {
    check_distinct(c1, c2)?;
    let f1 = c1.in_frame(origin, GENERIC_ANGLE)?;
    let f2 = c2.in_frame(origin, GENERIC_ANGLE)?;
    let at_infinity = points_at_infinity(&f1, &f2);
    let (affine, gap) = affine_intersections(&f1, &f2);
    if affine == usize::MAX {
        return Err(Error::IdenticalConics);
    }
    Ok(IntersectionCount {
        affine,
        at_infinity,
        gap: if at_infinity > 0 { 0.0 } else { gap },
    })
}

/// Number of real points of `F1 = F2 = 0` in the projective plane.
pub fn conic_pair_intersections(c1: &Conic, c2: &Conic) -> Result<usize> {
    Ok(intersections_about(c1, c2, [0.0, 0.0])?.total())
}

/// Relation of two disjoint conics: nesting is decided for real ellipses.
pub fn classify_conic_pair(c1: &Conic, c2: &Conic, intersections: usize) -> PairRelation {
    if intersections > 0 {
        return PairRelation::Intersecting;
    }
    if !(c1.is_real_ellipse() && c2.is_real_ellipse()) {
        return PairRelation::Disjoint;
    }
    let inside = |outer: &Conic, p: [f64; 2]| {
        let [cx, cy] = outer.center().expect("ellipse has a center");
        outer.eval(p[0], p[1]).signum() == outer.eval(cx, cy).signum()
    };
    if inside(c1, c2.ellipse_point()) {
        PairRelation::NestedSecondInsideFirst
    } else if inside(c2, c1.ellipse_point()) {
        PairRelation::NestedFirstInsideSecond
    } else {
        PairRelation::DisjointExternal
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConicReport {
    pub report: NestingReport,
    pub conics: Vec<Conic>,
    pub sextactic: Vec<f64>,
    /// First validation point where the sextactic function vanished or
    /// changed sign.
    pub sign_change_at: Option<f64>,
    pub max_intersections: usize,
    /// Pairs where at least one conic is not an ellipse, so only
    /// disjointness is judged.
    pub projective_pairs: usize,
}

/// Samples osculating conics over the domain and checks that every pair is
/// disjoint in the projective plane.
pub fn verify_theorem5<C: ParametricCurve + ?Sized>(c: &C, n_samples: usize) -> Result<ConicReport> {
    if n_samples < 2 {
        return Err(Error::usage("need at least 2 samples"));
    }
    let (t0, t1) = c.domain();
    let samples = sample_parameters(t0, t1, n_samples);
    let fits = samples
        .par_iter()
        .map(|&t| fit_osculating_conic(c, t))
        .collect::<Result<Vec<_>>>()?;
    let sextactic: Vec<f64> = fits.iter().map(|f| f.sextactic()).collect();
    let validation = sample_parameters(t0, t1, (4 * n_samples).max(201));
    let check = validation
        .par_iter()
        .map(|&t| Ok((t, fit_osculating_conic(c, t)?.sextactic())))
        .collect::<Result<Vec<_>>>()?;
    let sign = sextactic[0].signum();
    let sign_change_at = check
        .iter()
        .chain(samples.iter().zip(&sextactic).map(|(t, s)| (*t, *s)).collect::<Vec<_>>().iter())
        .find(|(_, s)| s.abs() <= SEXTACTIC_ZERO || s.signum() != sign)
        .map(|p| p.0);
    let hypothesis = sign_change_at.is_none() && fits.iter().all(|f| f.nullity == 1);
    let conics: Vec<Conic> = fits.iter().map(|f| f.conic).collect();
    if !hypothesis {
        return Ok(ConicReport {
            report: NestingReport::from_upper(samples, &[], false, f64::NAN, false),
            conics,
            sextactic,
            sign_change_at,
            max_intersections: 0,
            projective_pairs: 0,
        });
    }
    let points = samples
        .iter()
        .map(|&t| c.point(t))
        .collect::<Result<Vec<_>>>()?;
    let index_pairs: Vec<(usize, usize)> = (0..n_samples)
        .flat_map(|i| (i + 1..n_samples).map(move |j| (i, j)))
        .collect();
    let verdicts = index_pairs
        .into_par_iter()
        .map(|(i, j)| {
            let mid = [
                0.5 * (points[i][0] + points[j][0]),
                0.5 * (points[i][1] + points[j][1]),
            ];
            let n = intersections_about(&conics[i], &conics[j], mid)?;
            let rel = classify_conic_pair(&conics[i], &conics[j], n.total());
            Ok((i, j, rel, n))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst_margin = verdicts.iter().map(|v| v.3.gap).fold(f64::INFINITY, f64::min);
    let max_intersections = verdicts.iter().map(|v| v.3.total()).max().unwrap_or(0);
    let projective_pairs = verdicts
        .iter()
        .filter(|v| !(conics[v.0].is_real_ellipse() && conics[v.1].is_real_ellipse()))
        .count();
    let passed = max_intersections == 0 && worst_margin > 0.0;
    let upper: Vec<(usize, usize, PairRelation)> = verdicts.iter().map(|v| (v.0, v.1, v.2)).collect();
    Ok(ConicReport {
        report: NestingReport::from_upper(samples, &upper, true, worst_margin, passed),
        conics,
        sextactic,
        sign_change_at,
        max_intersections,
        projective_pairs,
    })
}

/// `a,b,c,d,e,f` rows, one per conic.
pub fn conics_csv(conics: &[Conic]) -> String {
    let mut out = String::from("a,b,c,d,e,f\n");
    for q in conics {
        let row: Vec<String> = q.coeffs.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
