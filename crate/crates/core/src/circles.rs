//! Osculating circles, evolutes and involutes, and the nesting of osculating
//! circles along arcs of monotone curvature.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{
    arc_length, curvature, curvature_jet, find_vertices, unit_tangent, CurveJet2,
    ParametricCurve, DEFAULT_VERTEX_GRID, MIN_SPEED,
};
use crate::error::{Error, Result};
use crate::jets::Jet;

/// Curvature at or below this magnitude has no osculating circle.
pub const FLAT_CURVATURE: f64 = 1e-10;

/// Allowed mismatch between evolute arc length and the change in radius.
pub const STRING_IDENTITY_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Circle {
    pub fn new(center: [f64; 2], radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::usage(format!("circle radius must be positive, got {radius}")));
        }
        Ok(Circle { center, radius })
    }

    /// Default tangency band for a pair: `1e-9 * (r1 + r2)`.
    pub fn default_tolerance(&self, other: &Circle) -> f64 {
        1e-9 * (self.radius + other.radius)
    }
}

/// How two closed curves sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRelation {
    NestedFirstInsideSecond,
    NestedSecondInsideFirst,
    DisjointExternal,
    Intersecting,
    InternallyTangent,
    ExternallyTangent,
    /// Disjoint, with nesting left undecided (conic pairs that are not both
    /// ellipses).
    Disjoint,
}

impl PairRelation {
    pub fn is_nested(self) -> bool {
        matches!(
            self,
            PairRelation::NestedFirstInsideSecond | PairRelation::NestedSecondInsideFirst
        )
    }

    pub fn is_disjoint(self) -> bool {
        self.is_nested()
            || matches!(self, PairRelation::DisjointExternal | PairRelation::Disjoint)
    }

    /// The same relation seen with the roles of the two curves swapped.
    pub fn swapped(self) -> PairRelation {
        match self {
            PairRelation::NestedFirstInsideSecond => PairRelation::NestedSecondInsideFirst,
            PairRelation::NestedSecondInsideFirst => PairRelation::NestedFirstInsideSecond,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PairRelation::NestedFirstInsideSecond => "nested_first_inside_second",
            PairRelation::NestedSecondInsideFirst => "nested_second_inside_first",
            PairRelation::DisjointExternal => "disjoint_external",
            PairRelation::Intersecting => "intersecting",
            PairRelation::InternallyTangent => "internally_tangent",
            PairRelation::ExternallyTangent => "externally_tangent",
            PairRelation::Disjoint => "disjoint",
        }
    }
}

/// Verdict of a pairwise disjointness/nesting sweep over sampled members of
/// an osculating family.
///
/// `monotone_curvature` records whether the family's hypothesis held on the
/// sample grid: monotone curvature for circles, a constant-sign sextactic
/// (or extactic) function for conics (or cubic ovals).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestingReport {
    pub samples: Vec<f64>,
    /// `verdicts[i][j]` relates member `i` (first) to member `j` (second);
    /// the diagonal is empty.
    pub verdicts: Vec<Vec<Option<PairRelation>>>,
    pub monotone_curvature: bool,
    pub worst_margin: f64,
    pub passed: bool,
}

impl NestingReport {
    /// Builds the full matrix from the strict upper triangle.
    pub(crate) fn from_upper(
        samples: Vec<f64>,
        upper: &[(usize, usize, PairRelation)],
        hypothesis: bool,
        worst_margin: f64,
        passed: bool,
    ) -> Self {
        let n = samples.len();
        let mut verdicts = vec![vec![None; n]; n];
        for &(i, j, r) in upper {
            verdicts[i][j] = Some(r);
            verdicts[j][i] = Some(r.swapped());
        }
        NestingReport {
            samples,
            verdicts,
            monotone_curvature: hypothesis,
            worst_margin,
            passed,
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, PairRelation)> + '_ {
        self.verdicts.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .skip(i + 1)
                .filter_map(move |(j, r)| r.map(|r| (i, j, r)))
        })
    }

    pub fn count(&self, relation: PairRelation) -> usize {
        self.pairs().filter(|p| p.2 == relation).count()
    }

    pub fn all_nested(&self) -> bool {
        self.pairs().all(|p| p.2.is_nested())
    }

    /// One row per unordered pair: `i,j,t_i,t_j,relation`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,t_i,t_j,relation\n");
        for (i, j, r) in self.pairs() {
            out.push_str(&format!(
                "{i},{j},{},{},{}\n",
                self.samples[i],
                self.samples[j],
                r.as_str()
            ));
        }
        out
    }
}

/// `n` equally spaced parameters covering `[t0, t1]` including both ends.
pub fn sample_parameters(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.5 * (t0 + t1)],
        _ => (0..n)
            .map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub fn osculating_circle<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<Circle> {
    let k = curvature(c, t)?;
    if k.abs() <= FLAT_CURVATURE {
        return Err(Error::FlatPoint { t, curvature: k });
    }
    let [x, y] = c.point(t)?;
    let [tx, ty] = unit_tangent(c, t)?;
    // Unit normal is the tangent turned counterclockwise.
    let center = [x - ty / k, y + tx / k];
    Circle::new(center, 1.0 / k.abs())
}

/// Center of the osculating circle at `t`.
pub fn evolute_point<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<[f64; 2]> {
    Ok(osculating_circle(c, t)?.center)
}

/// The locus of curvature centers, as a curve in its own right.
#[derive(Clone, Copy, Debug)]
pub struct Evolute<'a, C: ?Sized>(pub &'a C);

fn evolute_jet_of(j: &CurveJet2, order: usize) -> Result<CurveJet2> {
    let d1 = j.derivative()?;
    let d2 = d1.derivative()?;
    let (x1, y1) = (d1.x.truncate(order), d1.y.truncate(order));
    let speed2 = x1 * x1 + y1 * y1;
    let cross = x1 * d2.y - y1 * d2.x;
    if cross.value().abs() <= FLAT_CURVATURE * speed2.value().powf(1.5) {
        return Err(Error::FlatPoint {
            t: j.base(),
            curvature: cross.value() / speed2.value().powf(1.5),
        });
    }
    let s = speed2.checked_div(&cross)?;
    CurveJet2::new(
        j.x.truncate(order) - y1 * s,
        j.y.truncate(order) + x1 * s,
    )
}

impl<C: ParametricCurve + ?Sized> ParametricCurve for Evolute<'_, C> {
    fn jet(&self, t: f64, order: usize) -> Result<CurveJet2> {
        let j = self.0.jet(t, order + 2)?;
        evolute_jet_of(&j, order)
    }

    fn domain(&self) -> (f64, f64) {
        self.0.domain()
    }

    fn is_closed(&self) -> bool {
        self.0.is_closed()
    }
}

/// Jet of the radius of curvature `1 / |kappa|`.
pub fn radius_of_curvature_jet<C: ParametricCurve + ?Sized>(
    c: &C,
    t: f64,
    order: usize,
) -> Result<Jet> {
    let k = curvature_jet(c, t, order)?;
    if k.value().abs() <= FLAT_CURVATURE {
        return Err(Error::FlatPoint {
            t,
            curvature: k.value(),
        });
    }
    Ok(k.recip()?.scale(k.value().signum()))
}

/// Free end of a taut string unwound from the curve.
///
/// The string is anchored at the domain start with `slack` already hanging
/// free; at parameter `t` the free part has length `slack + s(t0, t)` and
/// leaves the curve tangentially backwards from `γ(t)`.
pub fn involute_point<C: ParametricCurve + ?Sized>(c: &C, t: f64, slack: f64) -> Result<[f64; 2]> {
    let (t0, _) = c.domain();
    let free = slack + arc_length(c, t0, t)?;
    if free < 0.0 {
        return Err(Error::usage(format!(
            "string too short: free length {free} at t = {t}"
        )));
    }
    let [x, y] = c.point(t)?;
    let [tx, ty] = unit_tangent(c, t)?;
    Ok([x - tx * free, y - ty * free])
}

/// Classifies two circles with a tangency band of half-width `tol`.
pub fn classify_pair(c1: &Circle, c2: &Circle, tol: f64) -> PairRelation {
    let d = (c1.center[0] - c2.center[0]).hypot(c1.center[1] - c2.center[1]);
    let (r1, r2) = (c1.radius, c2.radius);
    let inner = (r1 - r2).abs();
    let outer = r1 + r2;
    if d < inner - tol {
        if r1 > r2 {
            PairRelation::NestedSecondInsideFirst
        } else {
            PairRelation::NestedFirstInsideSecond
        }
    } else if (d - inner).abs() <= tol {
        PairRelation::InternallyTangent
    } else if d > outer + tol {
        PairRelation::DisjointExternal
    } else if (d - outer).abs() <= tol {
        PairRelation::ExternallyTangent
    } else {
        PairRelation::Intersecting
    }
}

/// `|r1 - r2| - |z1 z2|`: positive exactly when one circle strictly contains
/// the other.
pub fn nesting_margin(c1: &Circle, c2: &Circle) -> f64 {
    let d = (c1.center[0] - c2.center[0]).hypot(c1.center[1] - c2.center[1]);
    (c1.radius - c2.radius).abs() - d
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaitKneserReport {
    pub report: NestingReport,
    /// First sample where the curvature failed to be strictly monotone with
    /// constant sign.
    pub offending_t: Option<f64>,
    pub curvatures: Vec<f64>,
    /// `| evolute arc length - |Δρ| |` for each adjacent pair of samples.
    pub string_defects: Vec<f64>,
    pub string_identity_holds: bool,
}

fn first_non_monotone(kappa: &[f64], samples: &[f64]) -> Option<f64> {
    let sign = kappa.first().map(|k| k.signum()).unwrap_or(1.0);
    if let Some(i) = kappa.iter().position(|k| k.signum() != sign || *k == 0.0) {
        return Some(samples[i]);
    }
    let abs: Vec<f64> = kappa.iter().map(|k| k.abs()).collect();
    if abs.len() < 2 {
        return None;
    }
    let increasing = abs[1] > abs[0];
    abs.windows(2)
        .position(|w| if increasing { w[1] <= w[0] } else { w[1] >= w[0] })
        .map(|i| samples[i + 1])
}

/// Samples `n_samples` osculating circles uniformly over the domain and
/// checks that all pairs are strictly nested, together with the
/// evolute-length identity on adjacent samples.
pub fn verify_tait_kneser<C: ParametricCurve + ?Sized>(
    c: &C,
    n_samples: usize,
) -> Result<TaitKneserReport> {
    if n_samples < 3 {
        return Err(Error::usage("need at least 3 samples"));
    }
    let (t0, t1) = c.domain();
    let samples = sample_parameters(t0, t1, n_samples);
    let kappa = samples
        .iter()
        .map(|&t| curvature(c, t))
        .collect::<Result<Vec<_>>>()?;
    let offending_t = first_non_monotone(&kappa, &samples);
    let monotone = offending_t.is_none();

    let circles = samples
        .iter()
        .map(|&t| osculating_circle(c, t))
        .collect::<Result<Vec<_>>>()?;

    let upper: Vec<(usize, usize, PairRelation, f64)> = (0..n_samples)
        .into_par_iter()
        .flat_map_iter(|i| {
            let circles = &circles;
            (i + 1..n_samples).map(move |j| {
                let (a, b) = (&circles[i], &circles[j]);
                (i, j, classify_pair(a, b, a.default_tolerance(b)), nesting_margin(a, b))
            })
        })
        .collect();
    let worst_margin = upper
        .iter()
        .map(|p| p.3)
        .fold(f64::INFINITY, f64::min);
    let all_nested = upper.iter().all(|p| p.2.is_nested());

    let evolute = Evolute(c);
    let string_defects = samples
        .par_windows(2)
        .zip(circles.par_windows(2))
        .map(|(ts, cs)| {
            let len = arc_length(&evolute, ts[0], ts[1])?;
            Ok((len - (cs[0].radius - cs[1].radius).abs()).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let string_identity_holds = string_defects.iter().all(|d| *d < STRING_IDENTITY_TOL);

    let triples: Vec<(usize, usize, PairRelation)> =
        upper.iter().map(|&(i, j, r, _)| (i, j, r)).collect();
    let passed = monotone && all_nested && worst_margin > 0.0;
    Ok(TaitKneserReport {
        report: NestingReport::from_upper(samples, &triples, monotone, worst_margin, passed),
        offending_t,
        curvatures: kappa,
        string_defects,
        string_identity_holds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvoluteLength {
    /// Sum over vertex-to-vertex arcs of `sign(ρ') * length`.
    pub signed: f64,
    /// Plain total length.
    pub unsigned: f64,
    pub vertices: Vec<f64>,
}

/// Algebraic length of the evolute of a closed curve, whose sign flips at
/// every cusp (vertex of the curve).
pub fn evolute_signed_length<C: ParametricCurve + ?Sized>(c: &C) -> Result<EvoluteLength> {
    if !c.is_closed() {
        return Err(Error::usage("evolute length needs a closed curve"));
    }
    let vertices: Vec<f64> = find_vertices(c, DEFAULT_VERTEX_GRID)?
        .into_iter()
        .map(|v| v.t)
        .collect();
    if vertices.is_empty() {
        return Err(Error::DegenerateFamily("closed curve without vertices".into()));
    }
    let (t0, t1) = c.domain();
    let period = t1 - t0;
    let evolute = Evolute(c);
    let n = vertices.len();
    let arcs = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = vertices[i];
            let b = if i + 1 < n { vertices[i + 1] } else { vertices[0] + period };
            let len = arc_length(&evolute, a, b)?;
            let rho = radius_of_curvature_jet(c, 0.5 * (a + b), 1)?;
            Ok((rho.coeff(1).signum() * len, len))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    Ok(EvoluteLength {
        signed: arcs.iter().map(|a| a.0).sum(),
        unsigned: arcs.iter().map(|a| a.1).sum(),
        vertices,
    })
}

/// Speed of the evolute, `|Γ'(t)|`.
pub fn evolute_speed<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<f64> {
    let [vx, vy] = Evolute(c).jet(t, 1)?.velocity();
    let s = vx.hypot(vy);
    Ok(if s <= MIN_SPEED { 0.0 } else { s })
}
