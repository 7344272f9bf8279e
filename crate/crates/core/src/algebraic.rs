//! Bivariate polynomials in a fixed monomial basis, and the linear algebra
//! used to fit osculating algebraic curves.
//!
//! Coefficients of a degree-`d` polynomial are stored degree by degree, and
//! within a degree from `x^k` down to `y^k`:
//! `1, x, y, x^2, xy, y^2, x^3, x^2y, xy^2, y^3, ...`.

use nalgebra::DMatrix;

use crate::jets::Jet;

/// Number of monomials of total degree `<= degree`.
pub fn basis_len(degree: u32) -> usize {
    ((degree + 1) * (degree + 2) / 2) as usize
}

/// Exponent pairs `(i, j)` for `x^i y^j` in storage order.
pub fn monomials(degree: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(basis_len(degree));
    for k in 0..=degree {
        for j in 0..=k {
            out.push((k - j, j));
        }
    }
    out
}

fn index_of(i: u32, j: u32) -> usize {
    let k = i + j;
    basis_len(k.saturating_sub(1)) * usize::from(k > 0) + j as usize
}

pub fn eval(coeffs: &[f64], degree: u32, x: f64, y: f64) -> f64 {
    monomials(degree)
        .iter()
        .zip(coeffs)
        .map(|(&(i, j), c)| c * x.powi(i as i32) * y.powi(j as i32))
        .sum()
}

/// `(dF/dx, dF/dy)` as coefficient vectors in the same basis.
pub fn gradient(coeffs: &[f64], degree: u32) -> (Vec<f64>, Vec<f64>) {
    let n = basis_len(degree);
    let mut gx = vec![0.0; n];
    let mut gy = vec![0.0; n];
    for (&(i, j), &c) in monomials(degree).iter().zip(coeffs) {
        if i > 0 {
            gx[index_of(i - 1, j)] += i as f64 * c;
        }
        if j > 0 {
            gy[index_of(i, j - 1)] += j as f64 * c;
        }
    }
    (gx, gy)
}

/// Jets of every monomial evaluated along `(x, y)`.
pub fn monomial_jets(degree: u32, x: &Jet, y: &Jet) -> Vec<Jet> {
    let xp: Vec<Jet> = (0..=degree).map(|k| x.powi(k)).collect();
    let yp: Vec<Jet> = (0..=degree).map(|k| y.powi(k)).collect();
    monomials(degree)
        .iter()
        .map(|&(i, j)| xp[i as usize] * yp[j as usize])
        .collect()
}

/// Jet of `F(x(t), y(t))`.
pub fn eval_jet(coeffs: &[f64], degree: u32, x: &Jet, y: &Jet) -> Jet {
    monomial_jets(degree, x, y)
        .into_iter()
        .zip(coeffs)
        .fold(Jet::constant(x.base(), 0.0, x.order()), |acc, (m, &c)| {
            acc + m * c
        })
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Given `G(u, v)`, returns the coefficients of `F(x, y) = G(x - x0, y - y0)`.
pub fn unshift(local: &[f64], degree: u32, x0: f64, y0: f64) -> Vec<f64> {
    let mut out = vec![0.0; basis_len(degree)];
    for (&(i, j), &c) in monomials(degree).iter().zip(local) {
        if c == 0.0 {
            continue;
        }
        // (x - x0)^i (y - y0)^j
        for a in 0..=i {
            let ca = binomial(i, a) * (-x0).powi((i - a) as i32);
            for b in 0..=j {
                let cb = binomial(j, b) * (-y0).powi((j - b) as i32);
                out[index_of(a, b)] += c * ca * cb;
            }
        }
    }
    out
}

/// Result of a null-space extraction.
#[derive(Clone, Debug)]
pub struct NullVector {
    /// Unit vector spanning the (approximate) null space.
    pub vector: Vec<f64>,
    /// Singular values in decreasing order.
    pub singular_values: Vec<f64>,
    /// Number of columns minus the numerical rank.
    pub nullity: usize,
}

/// Unit null vector of a `rows x cols` matrix with `rows < cols`.
///
/// The numerical rank counts singular values above `rank_ratio * sigma_max`.
pub fn null_vector(m: &DMatrix<f64>, rank_ratio: f64) -> NullVector {
    let cols = m.ncols();
    // Pad to a square matrix so the full right singular basis is available.
    let mut sq = DMatrix::<f64>::zeros(cols, cols);
    sq.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = sq.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order
        .iter()
        .take(m.nrows())
        .map(|&i| svd.singular_values[i])
        .collect();
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values
        .iter()
        .filter(|&&s| s > rank_ratio * smax)
        .count();
    let last = *order.last().expect("non-empty matrix");
    let vector: Vec<f64> = v_t.row(last).iter().copied().collect();
    NullVector {
        vector,
        singular_values,
        nullity: cols - rank,
    }
}

pub fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|c| *c /= n);
    }
}
