//! Fractional-linear maps of the projective line, the Schwarzian derivative,
//! and osculating Möbius maps of a local diffeomorphism.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circles::sample_parameters;
use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::scan::scan_roots;
use crate::taylor::SmoothFunction;

/// `|f'|` at or below this is treated as a critical point.
pub const CRITICAL_DERIVATIVE: f64 = 1e-10;

/// Smallest derivative allowed for a [`CircleDiffeo`] lift.
pub const MIN_LIFT_DERIVATIVE: f64 = 0.1;

/// Schwarzian values at or below this everywhere on a grid count as
/// identically zero.
pub const DEGENERATE_SCHWARZIAN: f64 = 1e-10;

/// A real function with jets, usable by the Schwarzian machinery.
pub trait JetFunction: Sync {
    fn jet(&self, x: f64, order: usize) -> Result<Jet>;
}

impl JetFunction for SmoothFunction {
    fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        SmoothFunction::jet(self, x, order)
    }
}

/// `x -> (a x + b) / (c x + d)`, stored with `|ad - bc| = 1` and the first
/// nonzero of `a, b` positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", try_from = "[f64; 4]")]
pub struct MoebiusMap {
    m: [f64; 4],
}

impl From<MoebiusMap> for [f64; 4] {
    fn from(g: MoebiusMap) -> Self {
        g.m
    }
}

impl TryFrom<[f64; 4]> for MoebiusMap {
    type Error = Error;

    fn try_from(m: [f64; 4]) -> Result<Self> {
        MoebiusMap::new(m[0], m[1], m[2], m[3])
    }
}

impl MoebiusMap {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = [a, b, c, d].iter().fold(0.0f64, |s, v| s.max(v.abs()));
        if !det.is_finite() || det.abs() <= 1e-14 * scale * scale {
            return Err(Error::usage("Moebius matrix is singular"));
        }
        let mut k = 1.0 / det.abs().sqrt();
        if a < 0.0 || (a == 0.0 && b < 0.0) {
            k = -k;
        }
        Ok(MoebiusMap {
            m: [a * k, b * k, c * k, d * k],
        })
    }

    pub fn identity() -> Self {
        MoebiusMap {
            m: [1.0, 0.0, 0.0, 1.0],
        }
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        MoebiusMap::new(c, -s, s, c).expect("rotation is invertible")
    }

    pub fn matrix(&self) -> [f64; 4] {
        self.m
    }

    pub fn det(&self) -> f64 {
        let [a, b, c, d] = self.m;
        a * d - b * c
    }

    /// Image of `x`; the pole maps to infinity.
    pub fn apply(&self, x: f64) -> f64 {
        let [a, b, c, d] = self.m;
        (a * x + b) / (c * x + d)
    }

    pub fn apply_jet(&self, x: &Jet) -> Result<Jet> {
        let [a, b, c, d] = self.m;
        (*x * a + b).checked_div(&(*x * c + d))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        MoebiusMap::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
            .expect("product of invertible matrices")
    }

    pub fn inverse(&self) -> MoebiusMap {
        let [a, b, c, d] = self.m;
        MoebiusMap::new(d, -b, -c, a).expect("inverse of invertible matrix")
    }

    /// Projectively equal to `other` within a relative tolerance.
    pub fn same_as(&self, other: &MoebiusMap, tol: f64) -> bool {
        let [a, b, c, d] = self.compose(&other.inverse()).m;
        let s = a.abs().max(d.abs());
        b.abs() <= tol * s && c.abs() <= tol * s && (a - d).abs() <= tol * s
    }
}

impl JetFunction for MoebiusMap {
    fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        self.apply_jet(&Jet::variable(x, order))
    }
}

/// `S(f) = f'''/f' - 3/2 (f''/f')^2`.
pub fn schwarzian<F: JetFunction + ?Sized>(f: &F, x: f64) -> Result<f64> {
    schwarzian_of(&f.jet(x, 3)?)
}

fn schwarzian_of(j: &Jet) -> Result<f64> {
    let (c1, c2, c3) = (j.coeff(1), j.coeff(2), j.coeff(3));
    if c1.abs() <= CRITICAL_DERIVATIVE {
        return Err(Error::Singular {
            at: j.base(),
            what: "critical point, Schwarzian undefined".into(),
        });
    }
    let r = c2 / c1;
    Ok(6.0 * c3 / c1 - 6.0 * r * r)
}

/// The Möbius map sharing the 2-jet of `f` at `t`.
pub fn osculating_moebius<F: JetFunction + ?Sized>(f: &F, t: f64) -> Result<MoebiusMap> {
    let j = f.jet(t, 2)?;
    let (p0, p1, p2) = (j.coeff(0), j.coeff(1), j.coeff(2));
    if p1.abs() <= CRITICAL_DERIVATIVE {
        return Err(Error::Singular {
            at: t,
            what: "critical point, no osculating Moebius map".into(),
        });
    }
    // In h = x - t: g = (alpha h + beta) / (gamma h + 1).
    let gamma = -p2 / p1;
    let alpha = p1 + p0 * gamma;
    let beta = p0;
    MoebiusMap::new(alpha, beta - alpha * t, gamma, 1.0 - gamma * t)
}

/// Discriminant `(d - a)^2 + 4bc` of `h = g1 ∘ g2^{-1}` and whether its
/// fixed-point equation misses infinity (`c != 0`).
pub fn fixed_point_data(g1: &MoebiusMap, g2: &MoebiusMap) -> Result<(f64, bool)> {
    if g1.same_as(g2, 1e-12) {
        return Err(Error::IdenticalMaps);
    }
    let [a, b, c, d] = g1.compose(&g2.inverse()).m;
    Ok(((d - a) * (d - a) + 4.0 * b * c, c != 0.0))
}

/// True iff the graphs of `g1` and `g2` in `RP^1 x RP^1` do not meet.
pub fn moebius_graphs_disjoint(g1: &MoebiusMap, g2: &MoebiusMap) -> Result<bool> {
    let (disc, finite) = fixed_point_data(g1, g2)?;
    Ok(finite && disc < 0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoebiusPair {
    pub i: usize,
    pub j: usize,
    pub disjoint: bool,
    pub discriminant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoebiusReport {
    pub interval: [f64; 2],
    pub samples: Vec<f64>,
    /// Sign of the Schwarzian on the validation grid, 0 if not constant.
    pub schwarzian_sign: f64,
    pub hypothesis_holds: bool,
    /// First grid point where the Schwarzian vanished or changed sign.
    pub sign_change_at: Option<f64>,
    pub maps: Vec<MoebiusMap>,
    pub pairs: Vec<MoebiusPair>,
    /// Largest discriminant over pairs; negative when every pair is disjoint.
    pub worst_discriminant: f64,
    pub passed: bool,
}

/// Samples osculating Möbius maps over `interval` and checks that their
/// graphs are pairwise disjoint.
pub fn verify_theorem6<F: JetFunction + ?Sized>(
    f: &F,
    interval: [f64; 2],
    n_samples: usize,
) -> Result<MoebiusReport> {
    if !(interval[0] < interval[1]) {
        return Err(Error::usage(format!("bad interval {interval:?}")));
    }
    if n_samples < 2 {
        return Err(Error::usage("need at least 2 samples"));
    }
    let grid = sample_parameters(interval[0], interval[1], 201);
    let s = grid
        .iter()
        .map(|&x| schwarzian(f, x))
        .collect::<Result<Vec<_>>>()?;
    let sign = s[0].signum();
    let sign_change_at = s
        .iter()
        .position(|v| v.abs() <= DEGENERATE_SCHWARZIAN || v.signum() != sign)
        .map(|i| grid[i]);
    let hypothesis_holds = sign_change_at.is_none();

    let samples = sample_parameters(interval[0], interval[1], n_samples);
    if !hypothesis_holds {
        return Ok(MoebiusReport {
            interval,
            samples,
            schwarzian_sign: 0.0,
            hypothesis_holds,
            sign_change_at,
            maps: vec![],
            pairs: vec![],
            worst_discriminant: f64::NAN,
            passed: false,
        });
    }
    let maps = samples
        .iter()
        .map(|&t| osculating_moebius(f, t))
        .collect::<Result<Vec<_>>>()?;
    let index_pairs: Vec<(usize, usize)> = (0..n_samples)
        .flat_map(|i| (i + 1..n_samples).map(move |j| (i, j)))
        .collect();
    let pairs = index_pairs
        .into_par_iter()
        .map(|(i, j)| {
            let (disc, finite) = fixed_point_data(&maps[i], &maps[j])?;
            Ok(MoebiusPair {
                i,
                j,
                disjoint: finite && disc < 0.0,
                discriminant: disc,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let worst_discriminant = pairs
        .iter()
        .map(|p| p.discriminant)
        .fold(f64::NEG_INFINITY, f64::max);
    let passed = hypothesis_holds && pairs.iter().all(|p| p.disjoint);
    Ok(MoebiusReport {
        interval,
        samples,
        schwarzian_sign: sign,
        hypothesis_holds,
        sign_change_at,
        maps,
        pairs,
        worst_discriminant,
        passed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub k: u32,
    pub amplitude: f64,
    pub phase: f64,
}

/// A circle diffeomorphism given by its lift
/// `f(t) = t + sum amplitude * sin(k t + phase)`, so `f(t + 2π) = f(t) + 2π`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleDiffeo {
    pub terms: Vec<Harmonic>,
}

impl CircleDiffeo {
    pub fn new(terms: Vec<Harmonic>) -> Result<Self> {
        let f = CircleDiffeo { terms };
        f.validate()?;
        Ok(f)
    }

    pub fn rotation() -> Self {
        CircleDiffeo { terms: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.iter().any(|h| h.k == 0 || !h.amplitude.is_finite() || !h.phase.is_finite()) {
            return Err(Error::InvalidCurve("harmonics need k >= 1 and finite values".into()));
        }
        let min = (0..1024)
            .map(|i| self.lift_derivative(TAU * i as f64 / 1024.0))
            .fold(f64::INFINITY, f64::min);
        if min < MIN_LIFT_DERIVATIVE {
            return Err(Error::InvalidCurve(format!(
                "lift derivative drops to {min}, below {MIN_LIFT_DERIVATIVE}"
            )));
        }
        Ok(())
    }

    fn lift_derivative(&self, t: f64) -> f64 {
        1.0 + self
            .terms
            .iter()
            .map(|h| h.k as f64 * h.amplitude * (h.k as f64 * t + h.phase).cos())
            .sum::<f64>()
    }

    /// One to three harmonics with `sum k |amplitude|` in `[0.1, 0.9]`, so
    /// the lift derivative stays at or above 0.1.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let n = rng.random_range(1..=3u32);
        let mut terms: Vec<Harmonic> = (1..=n)
            .map(|k| Harmonic {
                k,
                amplitude: rng.random_range(-1.0..1.0),
                phase: rng.random_range(0.0..TAU),
            })
            .collect();
        let weight: f64 = terms.iter().map(|h| h.k as f64 * h.amplitude.abs()).sum();
        let target = rng.random_range(0.1..0.9);
        for h in &mut terms {
            h.amplitude *= target / weight;
        }
        CircleDiffeo { terms }
    }

    /// `n` diffeomorphisms drawn in order from a ChaCha8 stream seeded with
    /// `seed`.
    pub fn batch(seed: u64, n: usize) -> Vec<Self> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Self::random(&mut rng)).collect()
    }
}

impl JetFunction for CircleDiffeo {
    fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        let v = Jet::variable(t, order);
        Ok(self
            .terms
            .iter()
            .fold(v, |acc, h| acc + (v * h.k as f64 + h.phase).sin() * h.amplitude))
    }
}

/// Schwarzian of the induced map of `RP^1` in the chart `x = tan(t/2)`,
/// pulled back to the circle coordinate: `S(f) + (f'^2 - 1) / 2`.
pub fn projective_schwarzian(f: &CircleDiffeo, t: f64) -> Result<f64> {
    let j = f.jet(t, 3)?;
    let d = j.coeff(1);
    Ok(schwarzian_of(&j)? + 0.5 * (d * d - 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchwarzianZeros {
    pub zeros: Vec<f64>,
    pub count: usize,
    /// The Schwarzian vanishes identically (a rotation).
    pub degenerate: bool,
}

/// Zeros of the projective Schwarzian over one period.
pub fn schwarzian_zero_count(f: &CircleDiffeo, grid_n: usize) -> Result<SchwarzianZeros> {
    if grid_n < 16 {
        return Err(Error::usage("grid needs at least 16 cells"));
    }
    let scan = scan_roots(|t| projective_schwarzian(f, t), 0.0, TAU, grid_n, true)?;
    if scan.values.iter().all(|v| v.abs() <= DEGENERATE_SCHWARZIAN) {
        return Ok(SchwarzianZeros {
            zeros: vec![],
            count: 0,
            degenerate: true,
        });
    }
    Ok(SchwarzianZeros {
        count: scan.count(),
        zeros: scan.roots,
        degenerate: false,
    })
}
