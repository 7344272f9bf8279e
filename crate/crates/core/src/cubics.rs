//! Osculating cubic curves, their ovals, and the nesting of osculating
//! ovals along an arc.
//!
//! Ovals are extracted as marching-squares polylines and compared as
//! polygons; no cubic-cubic elimination is attempted.

use std::collections::HashMap;

use nalgebra::{DMatrix, Matrix3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::{self, eval_jet, monomial_jets, monomials, null_vector, unshift};
use crate::circles::{sample_parameters, NestingReport, PairRelation};
use crate::conics::local_jet;
use crate::curves::{curvature, speed, ParametricCurve};
use crate::error::{Error, Result};

/// Relative singular-value threshold for the rank of the jet conditions.
pub const RANK_RATIO: f64 = 1e-8;

/// Residual values at or below this are treated as zero.
pub const EXTACTIC_ZERO: f64 = 1e-12;

pub const DEFAULT_RESOLUTION: usize = 512;
pub const MIN_RESOLUTION: usize = 64;

/// `sum coeffs[k] m_k(x, y)` over the monomials `1, x, y, x^2, xy, y^2,
/// x^3, x^2y, xy^2, y^3`, with unit Euclidean norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cubic {
    pub coeffs: [f64; 10],
    /// Reducible or otherwise non-generic (cube of a linear form, a product
    /// built from lower-degree factors, or an ambiguous osculating fit).
    pub degenerate: bool,
}

impl Cubic {
    pub fn new(coeffs: [f64; 10]) -> Result<Self> {
        let n = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::usage("cubic coefficients vanish"));
        }
        let coeffs = coeffs.map(|c| c / n);
        Ok(Cubic {
            coeffs,
            degenerate: is_cube_of_linear(&coeffs),
        })
    }

    /// `Q(x, y) * L(x, y)` for a conic in the basis `1, x, y, x^2, xy, y^2`
    /// and a line `l0 + l1 x + l2 y`; always flagged degenerate.
    pub fn product(conic: [f64; 6], line: [f64; 3]) -> Result<Self> {
        let q = monomials(2);
        let l = monomials(1);
        let c = monomials(3);
        let mut out = [0.0; 10];
        for (qi, qc) in q.iter().zip(conic) {
            for (li, lc) in l.iter().zip(line) {
                let e = (qi.0 + li.0, qi.1 + li.1);
                let k = c.iter().position(|m| *m == e).expect("degree 3 monomial");
                out[k] += qc * lc;
            }
        }
        let mut k = Cubic::new(out)?;
        k.degenerate = true;
        Ok(k)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let c = &self.coeffs;
        c[0] + x * (c[1] + x * (c[3] + x * c[6] + y * c[7]) + y * (c[4] + y * c[8]))
            + y * (c[2] + y * (c[5] + y * c[9]))
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let (gx, gy) = algebraic::gradient(&self.coeffs, 3);
        [algebraic::eval(&gx, 3, x, y), algebraic::eval(&gy, 3, x, y)]
    }

    pub fn negated(&self) -> Cubic {
        Cubic {
            coeffs: self.coeffs.map(|c| -c),
            degenerate: self.degenerate,
        }
    }

    /// Largest coefficient deviation from `other` up to an overall sign.
    pub fn distance_up_to_sign(&self, other: &Cubic) -> f64 {
        let d = |s: f64| {
            self.coeffs
                .iter()
                .zip(other.coeffs)
                .map(|(a, b)| (a - s * b).abs())
                .fold(0.0, f64::max)
        };
        d(1.0).min(d(-1.0))
    }
}

/// The homogenized Hessian of `L^3` is `6 L ∇L ∇L^T`, of rank at most one.
fn is_cube_of_linear(c: &[f64; 10]) -> bool {
    let points = [[0.3, -0.7, 1.1], [1.3, 0.4, -0.6], [-0.5, 0.9, 0.8]];
    let monos = monomials(3);
    points.iter().all(|p| {
        let mut h = Matrix3::<f64>::zeros();
        for (&(i, j), &coef) in monos.iter().zip(c) {
            let e = [i as i32, j as i32, 3 - (i + j) as i32];
            for a in 0..3 {
                for b in 0..3 {
                    let mut e2 = e;
                    let mut f = coef * e2[a] as f64;
                    e2[a] -= 1;
                    f *= e2[b] as f64;
                    e2[b] -= 1;
                    if f != 0.0 {
                        h[(a, b)] += f * (0..3).map(|k| f64::powi(p[k], e2[k])).product::<f64>();
                    }
                }
            }
        }
        let sv = h.singular_values();
        let mut s = [sv[0], sv[1], sv[2]];
        s.sort_by(|a, b| b.total_cmp(a));
        s[1] <= 1e-9 * s[0].max(f64::MIN_POSITIVE)
    })
}

/// Osculating cubic at `t` together with its contact data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicFit {
    pub cubic: Cubic,
    /// Jet coefficients 0..=9 of `F ∘ γ` at `t` for the normalized cubic.
    pub contact: [f64; 10],
    pub nullity: usize,
    pub singular_values: Vec<f64>,
}

impl CubicFit {
    /// Coefficient 9 of `F ∘ γ`; vanishes at extactic points.
    pub fn residual(&self) -> f64 {
        self.contact[9]
    }
}

/// Fits the cubic through the 8-jet at `t`. A null space of dimension
/// above one (e.g. on a conic, where conic times any line fits) is
/// reported through `nullity` and the degenerate flag.
pub fn fit_osculating_cubic<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<CubicFit> {
    let lj = local_jet(c, t, 9)?;
    let radius = 1e3 * (lj.probe[0] - lj.origin[0]).hypot(lj.probe[1] - lj.origin[1]);
    let v = speed(c, t)?;
    // Work in units of the radius of curvature, in space and in time.
    let (u, w) = (lj.u.scale(1.0 / radius), lj.v.scale(1.0 / radius));
    let monos = monomial_jets(3, &u, &w);
    let row_scale = radius / v;
    let m = DMatrix::from_fn(9, monos.len(), |r, col| {
        monos[col].coeff(r) * row_scale.powi(r as i32)
    });
    let nv = null_vector(&m, RANK_RATIO);
    let mut local: Vec<f64> = monomials(3)
        .iter()
        .zip(&nv.vector)
        .map(|(&(i, j), g)| g / radius.powi((i + j) as i32))
        .collect();
    let global = unshift(&local, 3, lj.origin[0], lj.origin[1]);
    let raw: [f64; 10] = std::array::from_fn(|k| global[k]);
    let norm = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut cubic = Cubic::new(raw)?;
    let mut factor = 1.0 / norm;
    if cubic.eval(lj.probe[0], lj.probe[1]) > 0.0 {
        cubic = cubic.negated();
        factor = -factor;
    }
    cubic.degenerate |= nv.nullity != 1;
    local.iter_mut().for_each(|g| *g *= factor);
    let contact_jet = eval_jet(&local, 3, &lj.u, &lj.v);
    Ok(CubicFit {
        cubic,
        contact: std::array::from_fn(|i| contact_jet.coeff(i)),
        nullity: nv.nullity,
        singular_values: nv.singular_values,
    })
}

/// The unique cubic with 8-jet contact at `t`.
pub fn osculating_cubic<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<Cubic> {
    let fit = fit_osculating_cubic(c, t)?;
    if fit.nullity != 1 {
        return Err(Error::DegenerateOsculation {
            t,
            nullity: fit.nullity,
        });
    }
    Ok(fit.cubic)
}

/// Axis-aligned box `[x0, y0, x1, y1]`.
pub type BBox = [f64; 4];

/// A closed, simple polyline (first point not repeated).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Oval {
    pub points: Vec<[f64; 2]>,
    pub bbox: BBox,
    /// `+1` counterclockwise, `-1` clockwise.
    pub orientation: f64,
    pub degenerate: bool,
}

impl Oval {
    /// Builds and validates a closed polyline.
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidOval("fewer than 3 points".into()));
        }
        let bbox = points.iter().fold(
            [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
            |b, p| [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])],
        );
        let area = signed_area(&points);
        let oval = Oval {
            points,
            bbox,
            orientation: if area >= 0.0 { 1.0 } else { -1.0 },
            degenerate: false,
        };
        if oval.self_crossings() > 0 {
            return Err(Error::InvalidOval("polyline intersects itself".into()));
        }
        Ok(oval)
    }

    /// Regular polygon approximating a circle.
    pub fn circle(center: [f64; 2], radius: f64, n: usize) -> Result<Self> {
        Oval::new(
            (0..n)
                .map(|i| {
                    let a = std::f64::consts::TAU * i as f64 / n as f64;
                    [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
                })
                .collect(),
        )
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.points).abs()
    }

    fn segment(&self, i: usize) -> ([f64; 2], [f64; 2]) {
        (self.points[i], self.points[(i + 1) % self.points.len()])
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let n = self.points.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = self.segment(i);
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                if x > p[0] {
                    inside = !inside;
                }
            }
        }
        inside
    }

    fn self_crossings(&self) -> usize {
        let n = self.points.len();
        let index = SegmentIndex::new(self);
        let mut count = 0;
        for i in 0..n {
            let (a, b) = self.segment(i);
            for j in index.candidates(a, b) {
                if j <= i || j == (i + 1) % n || i == (j + 1) % n {
                    continue;
                }
                let (c, d) = self.segment(j);
                if segments_cross(a, b, c, d) {
                    count += 1;
                }
            }
        }
        count
    }

    /// `x,y` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for p in &self.points {
            out.push_str(&format!("{},{}\n", p[0], p[1]));
        }
        out
    }
}

fn signed_area(points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Proper crossing of two segments.
fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Uniform-grid bucket index over the segments of a polyline.
struct SegmentIndex {
    origin: [f64; 2],
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl SegmentIndex {
    fn new(o: &Oval) -> Self {
        let n = o.points.len();
        let total: f64 = (0..n)
            .map(|i| {
                let (a, b) = o.segment(i);
                (b[0] - a[0]).hypot(b[1] - a[1])
            })
            .sum();
        let cell = (2.0 * total / n as f64).max(1e-12);
        let mut idx = SegmentIndex {
            origin: [o.bbox[0], o.bbox[1]],
            cell,
            buckets: HashMap::new(),
        };
        for i in 0..n {
            let (a, b) = o.segment(i);
            for key in idx.keys(a, b) {
                idx.buckets.entry(key).or_default().push(i);
            }
        }
        idx
    }

    fn keys(&self, a: [f64; 2], b: [f64; 2]) -> Vec<(i64, i64)> {
        let k = |v: f64, o: f64| ((v - o) / self.cell).floor() as i64;
        let (x0, x1) = (k(a[0].min(b[0]), self.origin[0]), k(a[0].max(b[0]), self.origin[0]));
        let (y0, y1) = (k(a[1].min(b[1]), self.origin[1]), k(a[1].max(b[1]), self.origin[1]));
        let mut out = Vec::new();
        if (x1 - x0 + 1) * (y1 - y0 + 1) > 10_000 {
            // A very long segment: fall back to every bucket.
            out.extend(self.buckets.keys().copied());
            return out;
        }
        for x in x0..=x1 {
            for y in y0..=y1 {
                out.push((x, y));
            }
        }
        out
    }

    fn candidates(&self, a: [f64; 2], b: [f64; 2]) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .keys(a, b)
            .iter()
            .filter_map(|k| self.buckets.get(k))
            .flatten()
            .copied()
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Number of proper crossings between the boundaries of two ovals.
pub fn crossing_count(a: &Oval, b: &Oval) -> usize {
    let disjoint_boxes = a.bbox[2] < b.bbox[0]
        || b.bbox[2] < a.bbox[0]
        || a.bbox[3] < b.bbox[1]
        || b.bbox[3] < a.bbox[1];
    if disjoint_boxes {
        return 0;
    }
    let index = SegmentIndex::new(b);
    (0..a.points.len())
        .map(|i| {
            let (p, q) = a.segment(i);
            index
                .candidates(p, q)
                .into_iter()
                .filter(|&j| {
                    let (r, s) = b.segment(j);
                    segments_cross(p, q, r, s)
                })
                .count()
        })
        .sum()
}

/// Relation of two ovals judged on their polylines.
pub fn oval_pair_nested(a: &Oval, b: &Oval) -> Result<PairRelation> {
    for o in [a, b] {
        if o.self_crossings() > 0 {
            return Err(Error::InvalidOval("polyline intersects itself".into()));
        }
    }
    if crossing_count(a, b) > 0 {
        return Ok(PairRelation::Intersecting);
    }
    Ok(if b.contains(a.points[0]) {
        PairRelation::NestedFirstInsideSecond
    } else if a.contains(b.points[0]) {
        PairRelation::NestedSecondInsideFirst
    } else {
        PairRelation::DisjointExternal
    })
}

/// A zero-contour polyline; `closed` ones do not reach the box boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

/// Marching-squares zero set of `k` over `bbox` with `resolution` cells
/// per axis.
pub fn contours(k: &Cubic, bbox: BBox, resolution: usize) -> Result<Vec<Contour>> {
    contours_of(|x, y| k.eval(x, y), bbox, resolution)
}

/// Marching squares for any function sampled on the grid. Grid values of
/// exactly zero count as positive; saddle cells are split by the sign at
/// the cell center.
pub fn contours_of<F>(f: F, bbox: BBox, resolution: usize) -> Result<Vec<Contour>>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    if resolution < MIN_RESOLUTION {
        return Err(Error::usage(format!(
            "resolution {resolution} below {MIN_RESOLUTION}"
        )));
    }
    let [x0, y0, x1, y1] = bbox;
    if !(x1 > x0 && y1 > y0) {
        return Err(Error::usage(format!("empty bounding box {bbox:?}")));
    }
    let n = resolution;
    let (hx, hy) = ((x1 - x0) / n as f64, (y1 - y0) / n as f64);
    let xs = |i: usize| x0 + hx * i as f64;
    let ys = |j: usize| y0 + hy * j as f64;
    let vals: Vec<f64> = (0..=n)
        .into_par_iter()
        .flat_map_iter(|j| {
            let f = &f;
            (0..=n).map(move |i| f(xs(i), ys(j)))
        })
        .collect();
    let v = |i: usize, j: usize| vals[j * (n + 1) + i];
    let pos = |i: usize, j: usize| v(i, j) >= 0.0;

    // Edge ids: horizontal (i,j)-(i+1,j) -> 2*(j*(n+1)+i); vertical
    // (i,j)-(i,j+1) -> 2*(j*(n+1)+i)+1.
    let h_edge = |i: usize, j: usize| 2 * (j * (n + 1) + i);
    let v_edge = |i: usize, j: usize| 2 * (j * (n + 1) + i) + 1;
    let edge_point = |e: usize| -> [f64; 2] {
        let node = e / 2;
        let (i, j) = (node % (n + 1), node / (n + 1));
        let (a, b, p, q) = if e.is_multiple_of(2) {
            (v(i, j), v(i + 1, j), [xs(i), ys(j)], [xs(i + 1), ys(j)])
        } else {
            (v(i, j), v(i, j + 1), [xs(i), ys(j)], [xs(i), ys(j + 1)])
        };
        let s = a / (a - b);
        [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]
    };
    let on_boundary = |e: usize| {
        let node = e / 2;
        let (i, j) = (node % (n + 1), node / (n + 1));
        if e.is_multiple_of(2) {
            j == 0 || j == n
        } else {
            i == 0 || i == n
        }
    };

    let cell_segments: Vec<Vec<(usize, usize)>> = (0..n * n)
        .into_par_iter()
        .map(|c| {
            let (i, j) = (c % n, c / n);
            let (s00, s10, s11, s01) = (pos(i, j), pos(i + 1, j), pos(i + 1, j + 1), pos(i, j + 1));
            let bottom = (s00 != s10).then(|| h_edge(i, j));
            let right = (s10 != s11).then(|| v_edge(i + 1, j));
            let top = (s01 != s11).then(|| h_edge(i, j + 1));
            let left = (s00 != s01).then(|| v_edge(i, j));
            let cut: Vec<usize> = [bottom, right, top, left].into_iter().flatten().collect();
            match cut.len() {
                2 => vec![(cut[0], cut[1])],
                4 => {
                    let center = f(xs(i) + 0.5 * hx, ys(j) + 0.5 * hy) >= 0.0;
                    let (b, r, t, l) = (cut[0], cut[1], cut[2], cut[3]);
                    if center == s00 {
                        // s00 and s11 connect through the center.
                        vec![(b, r), (t, l)]
                    } else {
                        vec![(b, l), (t, r)]
                    }
                }
                _ => vec![],
            }
        })
        .collect();

    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for segs in &cell_segments {
        for &(a, b) in segs {
            adjacency.entry(a).or_default().push(b);
            adjacency.entry(b).or_default().push(a);
        }
    }
    let mut starts: Vec<usize> = adjacency.keys().copied().collect();
    starts.sort_unstable();
    let mut visited: HashMap<usize, bool> = HashMap::new();
    let mut out = Vec::new();
    let walk = |start: usize, visited: &mut HashMap<usize, bool>| -> Vec<usize> {
        let mut path = vec![start];
        visited.insert(start, true);
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = adjacency[&cur]
                .iter()
                .copied()
                .find(|&e| e != prev && !visited.get(&e).copied().unwrap_or(false));
            match next {
                Some(e) => {
                    visited.insert(e, true);
                    path.push(e);
                    prev = cur;
                    cur = e;
                }
                None => break,
            }
        }
        path
    };
    // Open chains start at boundary edges.
    for &e in &starts {
        if on_boundary(e) && !visited.get(&e).copied().unwrap_or(false) {
            let path = walk(e, &mut visited);
            out.push(Contour {
                points: path.into_iter().map(edge_point).collect(),
                closed: false,
            });
        }
    }
    for &e in &starts {
        if !visited.get(&e).copied().unwrap_or(false) {
            let path = walk(e, &mut visited);
            out.push(Contour {
                points: path.into_iter().map(edge_point).collect(),
                closed: true,
            });
        }
    }
    Ok(out)
}

/// Newton projection of contour vertices onto `F = 0`; a step longer than
/// `max_step` leaves the vertex where it was.
fn refine(k: &Cubic, points: &mut [[f64; 2]], max_step: f64) {
    for p in points.iter_mut() {
        let mut q = *p;
        for _ in 0..4 {
            let g = k.gradient(q[0], q[1]);
            let g2 = g[0] * g[0] + g[1] * g[1];
            if g2 == 0.0 {
                break;
            }
            let f = k.eval(q[0], q[1]);
            q = [q[0] - f * g[0] / g2, q[1] - f * g[1] / g2];
        }
        if (q[0] - p[0]).hypot(q[1] - p[1]) <= max_step {
            *p = q;
        }
    }
}

fn oval_from(contour: Contour, k: &Cubic, bbox: BBox, resolution: usize) -> Result<Oval> {
    let mut points = contour.points;
    let cell = (bbox[2] - bbox[0]).hypot(bbox[3] - bbox[1]) / resolution as f64;
    refine(k, &mut points, 0.5 * cell);
    let mut o = Oval::new(points)?;
    o.degenerate = k.degenerate;
    Ok(o)
}

/// The smallest closed zero contour of `k` enclosing `probe`, if any.
pub fn extract_oval(k: &Cubic, bbox: BBox, resolution: usize, probe: [f64; 2]) -> Result<Option<Oval>> {
    let mut best: Option<Oval> = None;
    for c in contours(k, bbox, resolution)?.into_iter().filter(|c| c.closed) {
        let o = oval_from(c, k, bbox, resolution)?;
        if o.contains(probe) && best.as_ref().is_none_or(|b| o.area() < b.area()) {
            best = Some(o);
        }
    }
    Ok(best)
}

fn distance_to_polyline(p: [f64; 2], pts: &[[f64; 2]], closed: bool) -> f64 {
    let n = pts.len();
    let segs = if closed { n } else { n.saturating_sub(1) };
    if n == 1 {
        return (pts[0][0] - p[0]).hypot(pts[0][1] - p[1]);
    }
    (0..segs)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let l2 = dx * dx + dy * dy;
            let s = if l2 > 0.0 {
                (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / l2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            (a[0] + s * dx - p[0]).hypot(a[1] + s * dy - p[1])
        })
        .fold(f64::INFINITY, f64::min)
}

/// The zero contour of `k` passing nearest to `point`, which must close up
/// inside `bbox`.
pub fn extract_oval_through(k: &Cubic, bbox: BBox, resolution: usize, point: [f64; 2]) -> Result<Oval> {
    let cs = contours(k, bbox, resolution)?;
    let nearest = cs
        .into_iter()
        .map(|c| (distance_to_polyline(point, &c.points, c.closed), c))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or(Error::BboxTooSmall)?;
    if !nearest.1.closed {
        return Err(Error::BboxTooSmall);
    }
    oval_from(nearest.1, k, bbox, resolution)
}

/// `extract_oval_through` on square boxes centered at `point`, starting at
/// half-width `2 * scale` and doubling up to five times.
pub fn extract_oval_adaptive(k: &Cubic, point: [f64; 2], scale: f64, resolution: usize) -> Result<Oval> {
    let mut half = 2.0 * scale;
    for _ in 0..6 {
        let bbox = [point[0] - half, point[1] - half, point[0] + half, point[1] + half];
        match extract_oval_through(k, bbox, resolution, point) {
            Err(Error::BboxTooSmall) => half *= 2.0,
            r => return r,
        }
    }
    Err(Error::BboxTooSmall)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicReport {
    pub report: NestingReport,
    pub cubics: Vec<Cubic>,
    pub residuals: Vec<f64>,
    /// Sample indices whose osculating cubic had no oval through the
    /// contact point inside the box.
    pub missing_ovals: Vec<usize>,
    pub sign_change_at: Option<f64>,
    /// Common extraction box; `None` means per-sample boxes scaled by the
    /// radius of curvature.
    pub bbox: Option<BBox>,
    pub resolution: usize,
    /// A single sample: nothing to compare.
    pub degenerate: bool,
    #[serde(skip)]
    pub ovals: Vec<Option<Oval>>,
}

/// Bounding box of the curve over its domain, enlarged by `pad` times its
/// larger side on each side.
pub fn padded_curve_bbox<C: ParametricCurve + ?Sized>(c: &C, pad: f64) -> Result<BBox> {
    let (t0, t1) = c.domain();
    let pts = sample_parameters(t0, t1, 257)
        .into_iter()
        .map(|t| c.point(t))
        .collect::<Result<Vec<_>>>()?;
    let b = pts.iter().fold(
        [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
        |b, p| [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])],
    );
    let side = (b[2] - b[0]).max(b[3] - b[1]);
    Ok([b[0] - pad * side, b[1] - pad * side, b[2] + pad * side, b[3] + pad * side])
}

/// `min |F_outer| / |∇F_outer|` over the vertices of the inner oval: an
/// estimate of the gap between nested ovals.
fn oval_gap(outer: &Cubic, inner: &Oval) -> f64 {
    inner
        .points
        .iter()
        .map(|p| {
            let g = outer.gradient(p[0], p[1]);
            outer.eval(p[0], p[1]).abs() / g[0].hypot(g[1]).max(f64::MIN_POSITIVE)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Samples osculating cubics over the domain, extracts their ovals, and
/// checks that every pair is nested.
pub fn verify_theorem7<C: ParametricCurve + ?Sized>(
    c: &C,
    n_samples: usize,
    bbox: Option<BBox>,
    resolution: usize,
) -> Result<CubicReport> {
    if n_samples == 0 {
        return Err(Error::usage("need at least 1 sample"));
    }
    let (t0, t1) = c.domain();
    let samples = sample_parameters(t0, t1, n_samples);
    let fits = samples
        .par_iter()
        .map(|&t| fit_osculating_cubic(c, t))
        .collect::<Result<Vec<_>>>()?;
    let residuals: Vec<f64> = fits.iter().map(|f| f.residual()).collect();
    let cubics: Vec<Cubic> = fits.iter().map(|f| f.cubic).collect();

    let validation = sample_parameters(t0, t1, (4 * n_samples).max(101));
    let check = validation
        .par_iter()
        .map(|&t| Ok((t, fit_osculating_cubic(c, t)?.residual())))
        .collect::<Result<Vec<_>>>()?;
    let sign = residuals[0].signum();
    let sign_change_at = samples
        .iter()
        .copied()
        .zip(residuals.iter().copied())
        .chain(check)
        .find(|(_, r)| r.abs() <= EXTACTIC_ZERO || r.signum() != sign)
        .map(|p| p.0);

    let ovals: Vec<Option<Oval>> = samples
        .par_iter()
        .zip(cubics.par_iter())
        .map(|(&t, k)| {
            let p = c.point(t)?;
            let found = match bbox {
                Some(b) => extract_oval_through(k, b, resolution, p),
                None => extract_oval_adaptive(k, p, 1.0 / curvature(c, t)?.abs(), resolution),
            };
            match found {
                Ok(o) => Ok(Some(o)),
                Err(Error::BboxTooSmall | Error::InvalidOval(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let missing_ovals: Vec<usize> = (0..n_samples).filter(|&i| ovals[i].is_none()).collect();
    let hypothesis = sign_change_at.is_none()
        && missing_ovals.is_empty()
        && fits.iter().all(|f| f.nullity == 1);

    if n_samples == 1 || !hypothesis {
        let degenerate = n_samples == 1;
        return Ok(CubicReport {
            report: NestingReport::from_upper(
                samples,
                &[],
                hypothesis,
                if degenerate { f64::INFINITY } else { f64::NAN },
                degenerate && hypothesis,
            ),
            cubics,
            residuals,
            missing_ovals,
            sign_change_at,
            bbox,
            resolution,
            degenerate,
            ovals,
        });
    }

    let index_pairs: Vec<(usize, usize)> = (0..n_samples)
        .flat_map(|i| (i + 1..n_samples).map(move |j| (i, j)))
        .collect();
    let verdicts = index_pairs
        .into_par_iter()
        .map(|(i, j)| {
            let (a, b) = (ovals[i].as_ref().expect("checked"), ovals[j].as_ref().expect("checked"));
            let rel = oval_pair_nested(a, b)?;
            let margin = match rel {
                PairRelation::NestedFirstInsideSecond => oval_gap(&cubics[j], a),
                PairRelation::NestedSecondInsideFirst => oval_gap(&cubics[i], b),
                _ => 0.0,
            };
            Ok((i, j, rel, margin))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst_margin = verdicts.iter().map(|v| v.3).fold(f64::INFINITY, f64::min);
    let passed = verdicts.iter().all(|v| v.2.is_nested()) && worst_margin > 0.0;
    let upper: Vec<(usize, usize, PairRelation)> = verdicts.iter().map(|v| (v.0, v.1, v.2)).collect();
    Ok(CubicReport {
        report: NestingReport::from_upper(samples, &upper, true, worst_margin, passed),
        cubics,
        residuals,
        missing_ovals,
        sign_change_at,
        bbox,
        resolution,
        degenerate: false,
        ovals,
    })
}

/// Growth rates tried by [`spiral_oval_preset`], in order.
pub const PRESET_GROWTHS: [f64; 3] = [0.2, 0.3, 0.5];
/// Parameter spacings between sampled ovals, in order.
pub const PRESET_SPACINGS: [f64; 3] = [2.0, 2.5, 3.0];
pub const PRESET_SAMPLES: usize = 4;
/// Required nesting gap relative to the smallest oval's diameter.
pub const PRESET_MIN_RELATIVE_GAP: f64 = 1e-4;

/// A logarithmic spiral arc whose sampled osculating cubic ovals were
/// verified nested.
#[derive(Clone, Debug, Serialize)]
pub struct SpiralOvalPreset {
    pub growth: f64,
    pub spacing: f64,
    pub curve: crate::curves::PlaneCurve,
    pub result: CubicReport,
}

/// Searches growth rates and sample spacings for a spiral arc whose
/// osculating ovals nest with a gap resolvable at `resolution`. The
/// spiral is self-similar, so every osculating cubic along it has an oval
/// as soon as one does.
pub fn spiral_oval_preset(resolution: usize) -> Result<SpiralOvalPreset> {
    let mut last = String::from("no candidate tried");
    for &growth in &PRESET_GROWTHS {
        for &spacing in &PRESET_SPACINGS {
            let t1 = spacing * (PRESET_SAMPLES - 1) as f64;
            let curve = crate::curves::PlaneCurve::log_spiral(growth, 0.0, t1)?;
            let result = verify_theorem7(&curve, PRESET_SAMPLES, None, resolution)?;
            let smallest = result
                .ovals
                .iter()
                .flatten()
                .map(|o| (o.bbox[2] - o.bbox[0]).max(o.bbox[3] - o.bbox[1]))
                .fold(f64::INFINITY, f64::min);
            let gap = result.report.worst_margin / smallest;
            if result.report.passed && gap >= PRESET_MIN_RELATIVE_GAP {
                return Ok(SpiralOvalPreset {
                    growth,
                    spacing,
                    curve,
                    result,
                });
            }
            last = format!(
                "growth {growth}, spacing {spacing}: passed={}, relative gap {gap:e}",
                result.report.passed
            );
        }
    }
    Err(Error::PresetFailed {
        preset: "spiral_cubic_ovals".into(),
        reason: last,
    })
}

/// Rows `oval,x,y` for a list of ovals.
pub fn ovals_csv(ovals: &[Oval]) -> String {
    let mut out = String::from("oval,x,y\n");
    for (k, o) in ovals.iter().enumerate() {
        for p in &o.points {
            out.push_str(&format!("{k},{},{}\n", p[0], p[1]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::PlaneCurve;

    /// `y^2 - x(x - 1)(x + 1) = y^2 - x^3 + x`.
    fn two_component() -> Cubic {
        Cubic::new([0.0, 1.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn eval_matches_generic() {
        let k = Cubic::new([0.3, -1.0, 2.0, 0.5, 0.25, -0.75, 1.0, 0.1, -0.2, 0.4]).unwrap();
        for &(x, y) in &[(0.0, 0.0), (1.0, 2.0), (-0.3, 0.7)] {
            assert!((k.eval(x, y) - algebraic::eval(&k.coeffs, 3, x, y)).abs() < 1e-14);
        }
    }

    #[test]
    fn cube_of_linear_is_flagged() {
        // (1 + x - 2y)^3
        let l = [1.0, 1.0, -2.0];
        let k = Cubic::product([1.0, 2.0, -4.0, 1.0, -4.0, 4.0], l).unwrap();
        let mut plain = k;
        plain.degenerate = false;
        assert!(is_cube_of_linear(&plain.coeffs));
        assert!(!two_component().degenerate);
    }

    #[test]
    fn recovers_fixed_cubic() {
        let arc = PlaneCurve::cubic_oval(two_component().coeffs, [-0.5, 0.0]).unwrap();
        for i in 0..8 {
            let t = 0.4 + 0.7 * i as f64;
            let k = osculating_cubic(&arc, t).unwrap();
            let d = k.distance_up_to_sign(&two_component());
            assert!(d < 1e-7, "t={t}: {d:e}");
        }
    }

    #[test]
    fn ellipse_fit_is_degenerate() {
        let e = PlaneCurve::ellipse(2.0, 1.0).unwrap();
        let fit = fit_osculating_cubic(&e, 0.7).unwrap();
        assert!(fit.nullity > 1);
        assert!(fit.cubic.degenerate);
        assert!(matches!(
            osculating_cubic(&e, 0.7),
            Err(Error::DegenerateOsculation { .. })
        ));
    }

    #[test]
    fn spiral_contact_is_eighth_order() {
        let s = PlaneCurve::log_spiral(0.2, 0.0, 6.0).unwrap();
        for i in 0..6 {
            let t = 1.0 * i as f64;
            let fit = fit_osculating_cubic(&s, t).unwrap();
            assert_eq!(fit.nullity, 1);
            let jet = s.jet(t, 9).unwrap();
            let norm = jet.x.norm_inf().max(jet.y.norm_inf());
            for k in 0..9 {
                assert!(fit.contact[k].abs() <= 1e-7 * norm, "{k}: {:?}", fit.contact);
            }
            assert!(fit.residual().abs() > 1e-9);
        }
    }

    #[test]
    fn oval_of_two_component_cubic() {
        let k = two_component();
        let o = extract_oval(&k, [-2.0, -2.0, 2.0, 2.0], 256, [-0.5, 0.0])
            .unwrap()
            .unwrap();
        assert!((o.bbox[0] + 1.0).abs() < 0.02 && o.bbox[2].abs() < 0.02);
        let cell = (4.0f64 / 256.0) * 2f64.sqrt();
        for p in &o.points {
            let g = k.gradient(p[0], p[1]);
            assert!(k.eval(p[0], p[1]).abs() < 2.0 * cell * g[0].hypot(g[1]));
        }
        let through = extract_oval_through(&k, [-2.0, -2.0, 2.0, 2.0], 256, [0.0, 0.0]).unwrap();
        assert_eq!(through.points.len(), o.points.len());
        assert!(matches!(
            extract_oval_through(&k, [-2.0, -2.0, 2.0, 2.0], 256, [1.0, 0.0]),
            Err(Error::BboxTooSmall)
        ));
    }

    #[test]
    fn one_component_cubic_has_no_oval() {
        let k = Cubic::new([0.0, -1.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, 0.0]).unwrap();
        for probe in [[0.0, 0.0], [0.5, 0.0], [-0.5, 0.3]] {
            assert!(extract_oval(&k, [-3.0, -3.0, 3.0, 3.0], 256, probe).unwrap().is_none());
        }
    }

    #[test]
    fn circle_times_line() {
        // (x^2 + y^2 - 1)(x - 3)
        let k = Cubic::product([-1.0, 0.0, 0.0, 1.0, 0.0, 1.0], [-3.0, 1.0, 0.0]).unwrap();
        let o = extract_oval(&k, [-2.0, -2.0, 4.0, 2.0], 256, [0.0, 0.0]).unwrap().unwrap();
        assert!(o.degenerate);
        assert!((o.area() - std::f64::consts::PI).abs() < 0.01);
    }

    #[test]
    fn pair_relations() {
        let c = |x: f64, r: f64| Oval::circle([x, 0.0], r, 400).unwrap();
        assert_eq!(oval_pair_nested(&c(0.0, 1.0), &c(0.0, 2.0)).unwrap(), PairRelation::NestedFirstInsideSecond);
        assert_eq!(oval_pair_nested(&c(0.0, 2.0), &c(0.0, 1.0)).unwrap(), PairRelation::NestedSecondInsideFirst);
        assert_eq!(oval_pair_nested(&c(0.0, 1.0), &c(3.0, 1.0)).unwrap(), PairRelation::DisjointExternal);
        assert_eq!(oval_pair_nested(&c(0.0, 1.0), &c(1.0, 1.0)).unwrap(), PairRelation::Intersecting);
        assert_eq!(crossing_count(&c(0.0, 1.0), &c(1.0, 1.0)), 2);
    }

    #[test]
    fn self_intersecting_polyline_is_rejected() {
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(matches!(Oval::new(bowtie), Err(Error::InvalidOval(_))));
    }

    #[test]
    fn crossings_of_ovals_come_in_pairs() {
        let base = two_component();
        let ovals: Vec<Oval> = (0..5)
            .map(|i| {
                let dx = 0.1 * i as f64;
                let shifted = unshift(&base.coeffs, 3, dx, 0.05 * i as f64);
                let k = Cubic::new(std::array::from_fn(|j| shifted[j])).unwrap();
                extract_oval(&k, [-2.0, -2.0, 2.0, 2.0], 256, [-0.5 + dx, 0.05 * i as f64])
                    .unwrap()
                    .unwrap()
            })
            .collect();
        for i in 0..ovals.len() {
            for j in i + 1..ovals.len() {
                let n = crossing_count(&ovals[i], &ovals[j]);
                assert!(n > 0 && n.is_multiple_of(2), "{i} {j}: {n}");
            }
        }
    }

    #[test]
    fn single_sample_is_vacuous() {
        let s = PlaneCurve::log_spiral(0.2, 0.0, 1.0).unwrap();
        let r = verify_theorem7(&s, 1, Some([-20.0, -20.0, 20.0, 20.0]), 64).unwrap();
        assert!(r.degenerate);
    }

    #[test]
    fn ellipse_arc_fails_hypothesis() {
        let e = PlaneCurve::ellipse_arc(2.0, 1.0, 0.2, 1.2).unwrap();
        let r = verify_theorem7(&e, 4, None, 64).unwrap();
        assert!(!r.report.monotone_curvature && !r.report.passed);
    }

    #[test]
    fn spiral_preset_nests() {
        let p = spiral_oval_preset(DEFAULT_RESOLUTION).unwrap();
        assert!(p.result.report.passed);
        assert!(p.result.missing_ovals.is_empty());
        assert_eq!(p.result.report.count(PairRelation::NestedFirstInsideSecond), 6);
    }

    #[test]
    fn fourier_oval_has_extactic_sign_change() {
        let c = PlaneCurve::fourier_oval(vec![0.0, 0.08], vec![0.0, 0.0, 0.03]).unwrap();
        let r = verify_theorem7(&c, 8, None, 64).unwrap();
        assert!(r.sign_change_at.is_some());
        assert!(!r.report.monotone_curvature && !r.report.passed);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn contact_vanishes_through_order_eight(growth in 0.05f64..0.6, t in -2.0f64..2.0) {
            let s = PlaneCurve::log_spiral(growth, -3.0, 3.0).unwrap();
            let fit = fit_osculating_cubic(&s, t).unwrap();
            let jet = s.jet(t, 9).unwrap();
            let norm = jet.x.norm_inf().max(jet.y.norm_inf());
            for k in 0..9 {
                proptest::prop_assert!(fit.contact[k].abs() <= 1e-7 * norm);
            }
        }
    }
}
