//! Tensor-product piecewise Lagrange interpolation on a uniform grid, with
//! exact quadrature weights.

use crate::error::{Error, Result};

use super::hoelder::HoelderSpec;

/// Lagrange basis on `p + 1` equispaced nodes of `[0, 1]`, evaluated at `u`.
fn lagrange_basis(p: usize, u: f64, out: &mut [f64]) {
    for (j, o) in out.iter_mut().enumerate().take(p + 1) {
        let xj = j as f64 / p as f64;
        let mut v = 1.0;
        for m in 0..=p {
            if m != j {
                let xm = m as f64 / p as f64;
                v *= (u - xm) / (xj - xm);
            }
        }
        *o = v;
    }
}

/// `∫₀¹ ℓ_j(u) du` for each basis polynomial, by expanding it in monomials.
fn basis_integrals(p: usize) -> Vec<f64> {
    (0..=p)
        .map(|j| {
            let xj = j as f64 / p as f64;
            // coefficients of Π_{m≠j} (u − x_m)/(x_j − x_m), lowest degree first
            let mut coeffs = vec![1.0];
            for m in 0..=p {
                if m == j {
                    continue;
                }
                let xm = m as f64 / p as f64;
                let scale = 1.0 / (xj - xm);
                let mut next = vec![0.0; coeffs.len() + 1];
                for (k, c) in coeffs.iter().enumerate() {
                    next[k + 1] += c * scale;
                    next[k] -= c * xm * scale;
                }
                coeffs = next;
            }
            coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64).sum()
        })
        .collect()
}

/// Largest value of `Σ_j |ℓ_j(u)|` on `[0, 1]`, sampled on a fine grid.
pub fn lebesgue_constant(p: usize) -> f64 {
    let mut basis = vec![0.0; p + 1];
    (0..=4096)
        .map(|s| {
            lagrange_basis(p, s as f64 / 4096.0, &mut basis);
            basis.iter().map(|v| v.abs()).sum::<f64>()
        })
        .fold(1.0, f64::max)
}

/// `P_n f` on `k` cells per axis with local degree `p = max(r, 1)`.
///
/// Nodes form the lattice `{j/(kp)}^d` of `(kp + 1)^d` points, ordered with
/// the first axis most significant.
#[derive(Clone, Debug)]
pub struct Interpolant {
    d: usize,
    cells: usize,
    degree: usize,
    values: Vec<f64>,
    axis_weights: Vec<f64>,
}

impl Interpolant {
    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn points_per_axis(&self) -> usize {
        self.cells * self.degree + 1
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    /// Spacing `h = 1/k` of the coarse cells.
    pub fn cell_width(&self) -> f64 {
        1.0 / self.cells as f64
    }

    fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let q = self.points_per_axis();
        let mut idx = vec![0; self.d];
        for axis in (0..self.d).rev() {
            idx[axis] = flat % q;
            flat /= q;
        }
        idx
    }

    pub fn node(&self, flat: usize) -> Vec<f64> {
        let step = 1.0 / (self.points_per_axis() - 1) as f64;
        self.multi_index(flat).into_iter().map(|j| j as f64 * step).collect()
    }

    pub fn nodes(&self) -> Vec<Vec<f64>> {
        (0..self.node_count()).map(|i| self.node(i)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Quadrature weights `c_i = ∫ basis_i`.
    pub fn weights(&self) -> Vec<f64> {
        (0..self.node_count())
            .map(|i| self.multi_index(i).into_iter().map(|j| self.axis_weights[j]).product())
            .collect()
    }

    /// `Σ_i c_i f(τ_i)`, the exact integral of the interpolant.
    pub fn integral(&self) -> f64 {
        self.weights().iter().zip(&self.values).map(|(c, v)| c * v).sum()
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let p = self.degree;
        let q = self.points_per_axis();
        let mut first = vec![0usize; self.d];
        let mut basis = vec![vec![0.0; p + 1]; self.d];
        for axis in 0..self.d {
            let s = x[axis].clamp(0.0, 1.0) * self.cells as f64;
            let cell = (s.floor() as usize).min(self.cells - 1);
            first[axis] = cell * p;
            lagrange_basis(p, s - cell as f64, &mut basis[axis]);
        }
        let local = (p + 1).pow(self.d as u32);
        let mut total = 0.0;
        for l in 0..local {
            let mut rem = l;
            let mut flat = 0;
            let mut weight = 1.0;
            for axis in 0..self.d {
                let stride = (p + 1).pow((self.d - 1 - axis) as u32);
                let j = rem / stride;
                rem %= stride;
                weight *= basis[axis][j];
                flat = flat * q + first[axis] + j;
            }
            total += weight * self.values[flat];
        }
        total
    }
}

/// Interpolates `f` with `k = ⌊n^{1/d}⌋` cells per axis.
pub fn build_interpolant(f: &dyn Fn(&[f64]) -> f64, spec: &HoelderSpec, n: usize) -> Result<Interpolant> {
    let needed = (spec.r + 1).pow(spec.d as u32);
    if n < needed {
        return Err(Error::invalid(format!("budget n = {n} below (r+1)^d = {needed}")));
    }
    let mut cells = (n as f64).powf(1.0 / spec.d as f64).floor() as usize;
    // guard against n^{1/d} landing just below an integer
    while (cells + 1).pow(spec.d as u32) <= n {
        cells += 1;
    }
    let cells = cells.max(1);
    let degree = spec.r.max(1);
    let q = cells * degree + 1;

    let per_cell = basis_integrals(degree);
    let h = 1.0 / cells as f64;
    let mut axis_weights = vec![0.0; q];
    for c in 0..cells {
        for (j, w) in per_cell.iter().enumerate() {
            axis_weights[c * degree + j] += w * h;
        }
    }

    let mut interp = Interpolant { d: spec.d, cells, degree, values: Vec::new(), axis_weights };
    let total = q.pow(spec.d as u32);
    interp.values = (0..total).map(|i| f(&interp.node(i))).collect();
    Ok(interp)
}

/// `∫ P_n f`.
pub fn quadrature_main(interp: &Interpolant) -> f64 {
    interp.integral()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_cotes_weights() {
        let w1 = basis_integrals(1);
        assert!((w1[0] - 0.5).abs() < 1e-15 && (w1[1] - 0.5).abs() < 1e-15);
        // Simpson
        let w2 = basis_integrals(2);
        for (a, b) in w2.iter().zip([1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn lebesgue_constants() {
        assert!((lebesgue_constant(1) - 1.0).abs() < 1e-12);
        assert!((lebesgue_constant(2) - 1.25).abs() < 1e-6);
    }

    #[test]
    fn reproduces_node_values() {
        let spec = HoelderSpec::new(2, 1.0, 2).unwrap();
        let f = |x: &[f64]| (3.0 * x[0]).sin() * x[1].exp();
        let p = build_interpolant(&f, &spec, 16).unwrap();
        for node in p.nodes() {
            assert!((p.evaluate(&node) - f(&node)).abs() < 1e-12);
        }
        assert!((p.weights().iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn budget_too_small() {
        let spec = HoelderSpec::new(2, 1.0, 2).unwrap();
        assert!(build_interpolant(&|_| 0.0, &spec, 8).is_err());
    }

    #[test]
    fn cell_count_is_floor_root() {
        let spec = HoelderSpec::lipschitz(2);
        assert_eq!(build_interpolant(&|_| 0.0, &spec, 8).unwrap().cells_per_axis(), 2);
        assert_eq!(build_interpolant(&|_| 0.0, &spec, 9).unwrap().cells_per_axis(), 3);
        let spec3 = HoelderSpec::lipschitz(3);
        assert_eq!(build_interpolant(&|_| 0.0, &spec3, 27).unwrap().cells_per_axis(), 3);
    }
}
