//! Dense univariate polynomials over `f64` with Sturm-sequence root counting.

use std::fmt;

/// Coefficients of a remainder below `DROP_RATIO * max|dividend|` are
/// treated as exact zeros when deciding degrees.
pub const DROP_RATIO: f64 = 1e-12;

/// `sum coeffs[i] * x^i`, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut p = Poly {
            coeffs: coeffs.into(),
        };
        p.trim_exact();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// `prod (x - r)`.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Poly::constant(1.0), |acc, &r| {
            acc.mul(&Poly::new(vec![-r, 1.0]))
        })
    }

    fn trim_exact(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }

    fn trim_below(&mut self, threshold: f64) {
        for c in self.coeffs.iter_mut() {
            if c.abs() <= threshold {
                *c = 0.0;
            }
        }
        self.trim_exact();
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect::<Vec<_>>(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Poly {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(0.0)
                        + other.coeffs.get(i).copied().unwrap_or(0.0)
                })
                .collect::<Vec<_>>(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect::<Vec<_>>())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Re-expands `sum c_i (x - center)^i` in powers of `x`.
    pub fn from_shifted(shifted: &[f64], center: f64) -> Poly {
        let lin = Poly::new(vec![-center, 1.0]);
        let mut acc = Poly::zero();
        for &c in shifted.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c));
        }
        acc
    }

    /// Remainder of `self / divisor`, with coefficients that cancel below
    /// [`DROP_RATIO`] of the dividend scale set to zero.
    pub fn rem(&self, divisor: &Poly) -> Poly {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let scale = self.max_abs_coeff();
        let mut r = self.coeffs.clone();
        let lead = divisor.leading();
        while r.len() > dd {
            let k = r.len() - 1;
            let q = r[k] / lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                r[k - dd + j] -= q * d;
            }
            r.pop();
        }
        let mut out = Poly { coeffs: r };
        out.trim_below(DROP_RATIO * scale);
        out
    }

    /// Copy with coefficients below `rel * max|coeff|` set to zero.
    pub fn trimmed(&self, rel: f64) -> Poly {
        let mut p = self.clone();
        p.trim_below(rel * self.max_abs_coeff());
        p
    }

    /// Copy with leading coefficients below `rel * max|coeff|` removed,
    /// lowering the degree; lower-order coefficients are kept as they are.
    pub fn without_small_leading(&self, rel: f64) -> Poly {
        let cut = rel * self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.abs() <= cut) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    fn normalized(&self) -> Poly {
        let m = self.max_abs_coeff();
        if m == 0.0 {
            return Poly::zero();
        }
        self.scale(1.0 / m)
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> f64 {
        let lead = self.leading().abs();
        let n = self.coeffs.len();
        if n <= 1 {
            return 1.0;
        }
        1.0 + self.coeffs[..n - 1]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs() / lead))
    }

    pub fn sturm(&self) -> SturmSequence {
        SturmSequence::new(self)
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        self.sturm().count_all()
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub fn count_roots_in(&self, a: f64, b: f64) -> usize {
        self.sturm().count_in(a, b)
    }

    /// Distinct real roots in `(a, b]`, each located to within `tol`.
    pub fn real_roots_in(&self, a: f64, b: f64, tol: f64) -> Vec<f64> {
        let s = self.sturm();
        let mut out = Vec::new();
        s.isolate(a, b, tol, 0, &mut out);
        out
    }

    /// All distinct real roots, each located to within `tol`.
    pub fn real_roots(&self, tol: f64) -> Vec<f64> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let b = self.root_bound();
        self.real_roots_in(-b, b, tol)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Sturm chain `p, p', -rem(p, p'), ...` with each member rescaled to unit
/// max-coefficient (positive scaling keeps the sign pattern).
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<Poly>,
}

fn sign_changes(values: impl Iterator<Item = f64>) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

impl SturmSequence {
    pub fn new(p: &Poly) -> Self {
        let p0 = p.normalized();
        let mut chain = vec![p0.clone()];
        if p0.degree().unwrap_or(0) == 0 {
            return SturmSequence { chain };
        }
        let mut prev = p0;
        let mut cur = prev.derivative().normalized();
        while !cur.is_zero() {
            chain.push(cur.clone());
            if cur.degree() == Some(0) {
                break;
            }
            let next = prev.rem(&cur).scale(-1.0).normalized();
            prev = cur;
            cur = next;
        }
        SturmSequence { chain }
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn polys(&self) -> &[Poly] {
        &self.chain
    }

    pub fn variations_at(&self, x: f64) -> usize {
        sign_changes(self.chain.iter().map(|p| p.eval(x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        sign_changes(self.chain.iter().map(|p| {
            let d = p.degree().unwrap_or(0);
            let s = p.leading();
            if positive || d % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    pub fn count_all(&self) -> usize {
        if self.chain[0].degree().unwrap_or(0) == 0 {
            return 0;
        }
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }

    pub fn count_in(&self, a: f64, b: f64) -> usize {
        if self.chain[0].degree().unwrap_or(0) == 0 || b <= a {
            return 0;
        }
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    fn isolate(&self, a: f64, b: f64, tol: f64, depth: usize, out: &mut Vec<f64>) {
        let n = self.count_in(a, b);
        if n == 0 {
            return;
        }
        if b - a <= tol || depth > 200 {
            out.push(0.5 * (a + b));
            return;
        }
        if n == 1 {
            // Refine by bisection on the Sturm count; this also handles roots
            // of even multiplicity where the sign does not change.
            let (mut lo, mut hi) = (a, b);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.count_in(lo, mid) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(0.5 * (lo + hi));
            return;
        }
        let mid = 0.5 * (a + b);
        self.isolate(a, mid, tol, depth + 1, out);
        self.isolate(mid, b, tol, depth + 1, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts_distinct_roots() {
        let p = Poly::from_roots(&[-2.0, 0.5, 3.0]);
        assert_eq!(p.count_real_roots(), 3);
        assert_eq!(p.count_roots_in(0.0, 3.5), 2);
        assert_eq!(p.count_roots_in(-1.0, 0.4), 0);
        let double = Poly::from_roots(&[1.0, 1.0, -1.0]);
        assert_eq!(double.count_real_roots(), 2);
    }

    #[test]
    fn no_real_roots() {
        let p = Poly::new(vec![1.0, 0.0, 1.0]);
        assert_eq!(p.count_real_roots(), 0);
        let q = Poly::new(vec![1.0, -3.0, 3.0]);
        assert_eq!(q.count_real_roots(), 0);
        assert_eq!(Poly::constant(2.0).count_real_roots(), 0);
    }

    #[test]
    fn locates_roots() {
        let p = Poly::new(vec![-2.0, 0.0, 1.0]);
        let r = p.real_roots(1e-12);
        assert_eq!(r.len(), 2);
        assert!((r[0] + 2f64.sqrt()).abs() < 1e-11);
        assert!((r[1] - 2f64.sqrt()).abs() < 1e-11);
        let d = Poly::from_roots(&[0.25, 0.25]);
        let r = d.real_roots(1e-10);
        assert_eq!(r.len(), 1);
        // A double root is only resolved to about sqrt(eps).
        assert!((r[0] - 0.25).abs() < 1e-7);
    }

    #[test]
    fn shifted_expansion() {
        // 1 + 3(x-1) + 3(x-1)^2 = 3x^2 - 3x + 1
        let p = Poly::from_shifted(&[1.0, 3.0, 3.0], 1.0);
        assert_eq!(p.coeffs(), &[1.0, -3.0, 3.0]);
    }

    fn dense_scan_count(p: &Poly, lo: f64, hi: f64, n: usize) -> usize {
        let vals: Vec<f64> = (0..=n)
            .map(|i| p.eval(lo + (hi - lo) * i as f64 / n as f64))
            .collect();
        sign_changes(vals.into_iter())
    }

    proptest! {
        #[test]
        fn sturm_agrees_with_scan_for_separated_roots(
            roots in prop::collection::btree_set(-40i32..40, 0..6),
            lead in prop::sample::select(vec![-2.0, 0.5, 3.0]),
        ) {
            let roots: Vec<f64> = roots.into_iter().map(|r| r as f64 * 0.1 + 0.013).collect();
            let p = Poly::from_roots(&roots).scale(lead);
            prop_assert_eq!(p.count_real_roots(), roots.len());
            prop_assert_eq!(dense_scan_count(&p, -4.5, 4.5, 10_000), roots.len());
        }
    }
}
