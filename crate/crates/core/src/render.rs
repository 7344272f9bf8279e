//! Deterministic SVG output for curves and their osculating families, and
//! the figure presets built on the verification ops.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circles::{evolute_signed_length, sample_parameters, verify_tait_kneser, Circle, Evolute};
use crate::conics::{verify_theorem5, Conic};
use crate::cubics::{contours_of, spiral_oval_preset, BBox, DEFAULT_RESOLUTION};
use crate::curves::{ParametricCurve, PlaneCurve};
use crate::error::{Error, Result};
use crate::taylor::{taylor_poly, verify_disjoint_even, verify_disjoint_odd, SmoothFunction, TaylorOptions};

pub const CANVAS_PX: u32 = 800;
/// Minimum blank border, as a fraction of the viewport extent.
pub const MARGIN: f64 = 0.05;
/// Polyline vertices used when sampling a parametric curve.
pub const CURVE_POINTS: usize = 1201;
/// Marching-squares cells per axis when tracing conics.
pub const CONIC_RESOLUTION: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementClass {
    Curve,
    Evolute,
    Circle,
    Conic,
    Oval,
    Graph,
}

impl ElementClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ElementClass::Curve => "curve",
            ElementClass::Evolute => "evolute",
            ElementClass::Circle => "circle",
            ElementClass::Conic => "conic",
            ElementClass::Oval => "oval",
            ElementClass::Graph => "graph",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Style {
    pub stroke: &'static str,
    /// In pixels.
    pub width: f64,
}

/// Default styles, one per element class.
pub fn default_style(class: ElementClass) -> Style {
    match class {
        ElementClass::Curve => Style { stroke: "#000000", width: 2.0 },
        ElementClass::Evolute => Style { stroke: "#d62728", width: 1.5 },
        ElementClass::Circle => Style { stroke: "#1f77b4", width: 0.8 },
        ElementClass::Conic => Style { stroke: "#2ca02c", width: 0.8 },
        ElementClass::Oval => Style { stroke: "#d62728", width: 1.0 },
        ElementClass::Graph => Style { stroke: "#9467bd", width: 1.0 },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Element {
    Polyline {
        class: ElementClass,
        points: Vec<[f64; 2]>,
        closed: bool,
    },
    Circle {
        center: [f64; 2],
        radius: f64,
    },
}

impl Element {
    pub fn polyline(class: ElementClass, points: Vec<[f64; 2]>, closed: bool) -> Self {
        Element::Polyline { class, points, closed }
    }

    pub fn circle(c: &Circle) -> Self {
        Element::Circle {
            center: c.center,
            radius: c.radius,
        }
    }

    pub fn class(&self) -> ElementClass {
        match self {
            Element::Polyline { class, .. } => *class,
            Element::Circle { .. } => ElementClass::Circle,
        }
    }

    fn bounds(&self) -> Option<BBox> {
        match self {
            Element::Polyline { points, .. } => points_bounds(points),
            Element::Circle { center, radius } => Some([
                center[0] - radius,
                center[1] - radius,
                center[0] + radius,
                center[1] + radius,
            ]),
        }
    }
}

fn points_bounds(points: &[[f64; 2]]) -> Option<BBox> {
    if points.is_empty() {
        return None;
    }
    Some(points.iter().fold(
        [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
        |b, p| [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])],
    ))
}

fn union(a: BBox, b: BBox) -> BBox {
    [a[0].min(b[0]), a[1].min(b[1]), a[2].max(b[2]), a[3].max(b[3])]
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub title: Option<String>,
    pub elements: Vec<Element>,
    /// World box mapped onto the canvas; fitted to the elements when absent.
    pub viewport: Option<BBox>,
    /// Canvas size in pixels; [`CANVAS_PX`] when absent.
    pub pixels: Option<u32>,
}

impl Scene {
    pub fn new(title: impl Into<String>) -> Self {
        Scene {
            title: Some(title.into()),
            ..Scene::default()
        }
    }

    pub fn push(&mut self, e: Element) {
        self.elements.push(e);
    }

    pub fn bounds(&self) -> Option<BBox> {
        self.elements.iter().filter_map(Element::bounds).reduce(union)
    }

    /// The world box in use, which leaves at least [`MARGIN`] of blank
    /// border on every side.
    pub fn resolved_viewport(&self) -> Result<BBox> {
        let b = self
            .bounds()
            .ok_or_else(|| Error::usage("scene has no drawable elements"))?;
        match self.viewport {
            Some(v) => {
                let (mx, my) = (MARGIN * (v[2] - v[0]), MARGIN * (v[3] - v[1]));
                let inside = b[0] >= v[0] + mx && b[2] <= v[2] - mx && b[1] >= v[1] + my && b[3] <= v[3] - my;
                if !inside {
                    return Err(Error::usage(format!(
                        "viewport {v:?} does not hold the scene bounds {b:?} with a {MARGIN} margin"
                    )));
                }
                Ok(v)
            }
            None => {
                let side = (b[2] - b[0]).max(b[3] - b[1]).max(1e-9) / (1.0 - 2.5 * MARGIN);
                let (cx, cy) = (0.5 * (b[0] + b[2]), 0.5 * (b[1] + b[3]));
                Ok([cx - 0.5 * side, cy - 0.5 * side, cx + 0.5 * side, cy + 0.5 * side])
            }
        }
    }

    /// World-to-pixel scale and offsets `(s, tx, ty)` with
    /// `px = s x + tx`, `py = -s y + ty`.
    pub fn transform(&self) -> Result<(f64, f64, f64)> {
        let v = self.resolved_viewport()?;
        let px = self.pixels.unwrap_or(CANVAS_PX) as f64;
        let s = (px / (v[2] - v[0])).min(px / (v[3] - v[1]));
        let tx = 0.5 * px - s * 0.5 * (v[0] + v[2]);
        let ty = 0.5 * px + s * 0.5 * (v[1] + v[3]);
        Ok((s, tx, ty))
    }
}

/// Fixed six-decimal formatting with negative zero folded into zero.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// SVG 1.1 text. Geometry is written in world units under a single
/// transform; output depends only on the scene.
pub fn render_scene(s: &Scene) -> Result<String> {
    if s.elements.is_empty() {
        return Err(Error::usage("cannot render an empty scene"));
    }
    let (scale, tx, ty) = s.transform()?;
    let px = s.pixels.unwrap_or(CANVAS_PX);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{px}\" height=\"{px}\" viewBox=\"0 0 {px} {px}\">"
    );
    if let Some(t) = &s.title {
        let _ = writeln!(out, "<title>{}</title>", escape(t));
    }
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{px}\" height=\"{px}\" fill=\"#ffffff\"/>");
    let _ = writeln!(
        out,
        "<g transform=\"matrix({} 0 0 {} {} {})\" fill=\"none\" stroke-linecap=\"round\" stroke-linejoin=\"round\">",
        num(scale),
        num(-scale),
        num(tx),
        num(ty)
    );
    for e in &s.elements {
        let style = default_style(e.class());
        let stroke = format!(
            "class=\"{}\" stroke=\"{}\" stroke-width=\"{}\"",
            e.class().as_str(),
            style.stroke,
            num(style.width / scale)
        );
        match e {
            Element::Circle { center, radius } => {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" {stroke}/>",
                    num(center[0]),
                    num(center[1]),
                    num(*radius)
                );
            }
            Element::Polyline { points, closed, .. } => {
                if points.is_empty() {
                    continue;
                }
                let mut d = String::new();
                for (i, p) in points.iter().enumerate() {
                    let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(p[0]), num(p[1]));
                }
                if *closed {
                    d.push_str(" Z");
                }
                let _ = writeln!(out, "<path d=\"{d}\" {stroke}/>");
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigurePreset {
    SpiralCircles,
    EllipseEvolute,
    TaylorEven,
    TaylorOdd,
    SpiralConics,
    SpiralCubicOvals,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 6] = [
        FigurePreset::SpiralCircles,
        FigurePreset::EllipseEvolute,
        FigurePreset::TaylorEven,
        FigurePreset::TaylorOdd,
        FigurePreset::SpiralConics,
        FigurePreset::SpiralCubicOvals,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigurePreset::SpiralCircles => "spiral_circles",
            FigurePreset::EllipseEvolute => "ellipse_evolute",
            FigurePreset::TaylorEven => "taylor_even",
            FigurePreset::TaylorOdd => "taylor_odd",
            FigurePreset::SpiralConics => "spiral_conics",
            FigurePreset::SpiralCubicOvals => "spiral_cubic_ovals",
        }
    }
}

impl FromStr for FigurePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigurePreset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::usage(format!("unknown figure preset '{s}'")))
    }
}

/// Preset parameters.
pub const SPIRAL_GROWTH: f64 = 0.2;
pub const SPIRAL_CIRCLE_TURNS: f64 = 3.0 * std::f64::consts::PI;
pub const SPIRAL_CIRCLES: usize = 40;
pub const SPIRAL_CONIC_SPAN: f64 = 2.0 * std::f64::consts::PI;
pub const SPIRAL_CONICS: usize = 8;
pub const ELLIPSE_AXES: [f64; 2] = [2.0, 1.0];
pub const EVOLUTE_LENGTH_TOL: f64 = 1e-6;
pub const TAYLOR_MEMBERS: usize = 9;

fn failed(preset: FigurePreset, reason: impl Into<String>) -> Error {
    Error::PresetFailed {
        preset: preset.as_str().into(),
        reason: reason.into(),
    }
}

/// `n` points uniformly spaced in the parameter over `[t0, t1]`.
pub fn sample_curve<C: ParametricCurve + ?Sized>(c: &C, t0: f64, t1: f64, n: usize) -> Result<Vec<[f64; 2]>> {
    sample_parameters(t0, t1, n).into_iter().map(|t| c.point(t)).collect()
}

/// Graph of `f` over `[x0, x1]`, split wherever it leaves `[y0, y1]`.
fn clipped_graph<F: Fn(f64) -> f64>(f: F, x: [f64; 2], y: [f64; 2], n: usize) -> Vec<Vec<[f64; 2]>> {
    let mut runs = Vec::new();
    let mut cur: Vec<[f64; 2]> = Vec::new();
    for xi in sample_parameters(x[0], x[1], n) {
        let yi = f(xi);
        if yi >= y[0] && yi <= y[1] {
            cur.push([xi, yi]);
        } else if !cur.is_empty() {
            runs.push(std::mem::take(&mut cur));
        }
    }
    if cur.len() > 1 {
        runs.push(cur);
    }
    runs.retain(|r| r.len() > 1);
    runs
}

fn conic_gradient(k: &Conic, x: f64, y: f64) -> [f64; 2] {
    let [a, b, c, d, e, _] = k.coeffs;
    [2.0 * a * x + b * y + d, b * x + 2.0 * c * y + e]
}

/// Zero set of a conic traced inside `bbox`, vertices projected onto the
/// curve by Newton steps.
pub fn conic_polylines(k: &Conic, bbox: BBox, resolution: usize) -> Result<Vec<(Vec<[f64; 2]>, bool)>> {
    let cell = (bbox[2] - bbox[0]).hypot(bbox[3] - bbox[1]) / resolution as f64;
    let contours = contours_of(|x, y| k.eval(x, y), bbox, resolution)?;
    Ok(contours
        .into_iter()
        .map(|c| {
            let pts = c
                .points
                .into_iter()
                .map(|p| {
                    let mut q = p;
                    for _ in 0..4 {
                        let g = conic_gradient(k, q[0], q[1]);
                        let g2 = g[0] * g[0] + g[1] * g[1];
                        if g2 == 0.0 {
                            break;
                        }
                        let f = k.eval(q[0], q[1]);
                        q = [q[0] - f * g[0] / g2, q[1] - f * g[1] / g2];
                    }
                    if (q[0] - p[0]).hypot(q[1] - p[1]) <= 0.5 * cell { q } else { p }
                })
                .collect();
            (pts, c.closed)
        })
        .collect())
}

fn spiral_circles() -> Result<Scene> {
    let p = FigurePreset::SpiralCircles;
    let c = PlaneCurve::log_spiral(SPIRAL_GROWTH, 0.0, SPIRAL_CIRCLE_TURNS)?;
    let r = verify_tait_kneser(&c, SPIRAL_CIRCLES)?;
    if !(r.report.passed && r.string_identity_holds) {
        return Err(failed(p, format!("nesting check failed: {:?}", r.offending_t)));
    }
    let mut s = Scene::new("Osculating circles of a logarithmic spiral");
    for &t in &r.report.samples {
        s.push(Element::circle(&crate::circles::osculating_circle(&c, t)?));
    }
    s.push(Element::polyline(
        ElementClass::Curve,
        sample_curve(&c, 0.0, SPIRAL_CIRCLE_TURNS, CURVE_POINTS)?,
        false,
    ));
    Ok(s)
}

fn ellipse_evolute() -> Result<Scene> {
    let p = FigurePreset::EllipseEvolute;
    let [a, b] = ELLIPSE_AXES;
    let e = PlaneCurve::ellipse(a, b)?;
    let len = evolute_signed_length(&e)?;
    if len.vertices.len() != 4 || len.signed.abs() >= EVOLUTE_LENGTH_TOL {
        return Err(failed(
            p,
            format!("{} vertices, signed evolute length {:e}", len.vertices.len(), len.signed),
        ));
    }
    let tau = std::f64::consts::TAU;
    let mut s = Scene::new("The evolute of an ellipse");
    s.push(Element::polyline(ElementClass::Curve, sample_curve(&e, 0.0, tau, CURVE_POINTS)?, true));
    s.push(Element::polyline(
        ElementClass::Evolute,
        sample_curve(&Evolute(&e), 0.0, tau, CURVE_POINTS)?,
        true,
    ));
    Ok(s)
}

fn taylor_scene(preset: FigurePreset) -> Result<Scene> {
    let (f, n, interval, x, y, title) = match preset {
        FigurePreset::TaylorEven => (
            SmoothFunction::monomial(3),
            2,
            [-1.0, 1.0],
            [-2.0, 2.0],
            [-4.0, 4.0],
            "Quadratic Taylor polynomials of x^3",
        ),
        _ => (
            SmoothFunction::monomial(4),
            3,
            [-1.0, 0.0],
            [-1.5, 2.0],
            [-1.0, 6.0],
            "Cubic Taylor polynomials of x^4",
        ),
    };
    let opts = TaylorOptions {
        samples: TAYLOR_MEMBERS,
        ..TaylorOptions::default()
    };
    let r = if n % 2 == 0 {
        verify_disjoint_even(&f, interval, n, &opts)?
    } else {
        verify_disjoint_odd(&f, interval, n, &opts)?
    };
    if !r.passed {
        return Err(failed(preset, format!("minimum gap {:e}", r.min_gap)));
    }
    let mut s = Scene::new(title);
    for &t in &r.samples {
        let tp = taylor_poly(&f, t, n)?;
        for run in clipped_graph(|xi| tp.eval(xi), x, y, CURVE_POINTS) {
            s.push(Element::polyline(ElementClass::Graph, run, false));
        }
    }
    for run in clipped_graph(|xi| f.value(xi), x, y, CURVE_POINTS) {
        s.push(Element::polyline(ElementClass::Curve, run, false));
    }
    Ok(s)
}

fn spiral_conics() -> Result<Scene> {
    let p = FigurePreset::SpiralConics;
    let c = PlaneCurve::log_spiral(SPIRAL_GROWTH, 0.0, SPIRAL_CONIC_SPAN)?;
    let r = verify_theorem5(&c, SPIRAL_CONICS)?;
    if !r.report.passed {
        return Err(failed(p, format!("sextactic sign change at {:?}", r.sign_change_at)));
    }
    let mut s = Scene::new("Osculating conics of a logarithmic spiral");
    let spiral = sample_curve(&c, 0.0, SPIRAL_CONIC_SPAN, CURVE_POINTS)?;
    let base = points_bounds(&spiral).expect("non-empty");
    for k in &r.conics {
        // Grow the box until every traced branch closes, up to 8x.
        let mut half = 0.5 * (base[2] - base[0]).max(base[3] - base[1]);
        let (cx, cy) = (0.5 * (base[0] + base[2]), 0.5 * (base[1] + base[3]));
        let mut lines = Vec::new();
        for _ in 0..4 {
            half *= 2.0;
            lines = conic_polylines(k, [cx - half, cy - half, cx + half, cy + half], CONIC_RESOLUTION)?;
            if lines.iter().all(|l| l.1) {
                break;
            }
        }
        for (pts, closed) in lines {
            s.push(Element::polyline(ElementClass::Conic, pts, closed));
        }
    }
    s.push(Element::polyline(ElementClass::Curve, spiral, false));
    Ok(s)
}

fn spiral_cubic_ovals() -> Result<Scene> {
    let p = spiral_oval_preset(DEFAULT_RESOLUTION)?;
    let (t0, t1) = p.curve.domain();
    let mut s = Scene::new("A spiral osculated by ovals of cubic curves");
    for o in p.result.ovals.iter().flatten() {
        s.push(Element::polyline(ElementClass::Oval, o.points.clone(), true));
    }
    s.push(Element::polyline(ElementClass::Curve, sample_curve(&p.curve, t0, t1, CURVE_POINTS)?, false));
    Ok(s)
}

/// Builds a preset's scene after its family passes verification.
pub fn figure_preset(name: FigurePreset) -> Result<Scene> {
    match name {
        FigurePreset::SpiralCircles => spiral_circles(),
        FigurePreset::EllipseEvolute => ellipse_evolute(),
        FigurePreset::TaylorEven | FigurePreset::TaylorOdd => taylor_scene(name),
        FigurePreset::SpiralConics => spiral_conics(),
        FigurePreset::SpiralCubicOvals => spiral_cubic_ovals(),
    }
}
