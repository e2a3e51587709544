//! Hölder classes `F_d^{r,ρ}` on the unit cube.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HoelderSpec {
    /// Smoothness order.
    pub r: usize,
    /// Hölder exponent of the order-`r` derivatives, in `(0, 1]`.
    pub rho: f64,
    /// Dimension.
    pub d: usize,
}

impl HoelderSpec {
    pub fn new(r: usize, rho: f64, d: usize) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::invalid(format!("Hölder exponent must lie in (0, 1], got {rho}")));
        }
        if d == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        Ok(HoelderSpec { r, rho, d })
    }

    pub fn lipschitz(d: usize) -> Self {
        HoelderSpec { r: 0, rho: 1.0, d }
    }

    /// `(r + ρ)/d`, the deterministic approximation exponent.
    pub fn smoothness_rate(&self) -> f64 {
        (self.r as f64 + self.rho) / self.d as f64
    }

    /// Sampled membership test.
    ///
    /// Checks `|f| ≤ 1` at random points and the Hölder condition of every
    /// order-`r` partial derivative on random point pairs. For `r ≥ 1` the
    /// derivatives come from central finite differences, so `slack` should
    /// absorb their truncation error.
    pub fn check_membership<R: Rng + ?Sized>(
        &self,
        f: &dyn Fn(&[f64]) -> f64,
        pairs: usize,
        slack: f64,
        rng: &mut R,
    ) -> MembershipReport {
        let mut sup_norm: f64 = 0.0;
        let mut worst_ratio: f64 = 0.0;
        let alphas = multi_indices(self.d, self.r);
        let step = 1e-3;
        for _ in 0..pairs {
            // keep finite-difference stencils inside the cube
            let margin = if self.r == 0 { 0.0 } else { step * self.r as f64 };
            let mut point = || -> Vec<f64> { (0..self.d).map(|_| margin + (1.0 - 2.0 * margin) * rng.random::<f64>()).collect() };
            let x = point();
            let y = point();
            sup_norm = sup_norm.max(f(&x).abs()).max(f(&y).abs());
            let dist = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if dist < 1e-9 {
                continue;
            }
            for alpha in &alphas {
                let dx = partial_derivative(f, &x, alpha, step);
                let dy = partial_derivative(f, &y, alpha, step);
                worst_ratio = worst_ratio.max((dx - dy).abs() / dist.powf(self.rho));
            }
        }
        MembershipReport { sup_norm, worst_ratio, member: sup_norm <= 1.0 + slack && worst_ratio <= 1.0 + slack }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MembershipReport {
    pub sup_norm: f64,
    /// Largest observed `|∂^α f(x) − ∂^α f(y)| / |x − y|^ρ`.
    pub worst_ratio: f64,
    pub member: bool,
}

/// All multi-indices of length `d` with `|α| = r`.
fn multi_indices(d: usize, r: usize) -> Vec<Vec<usize>> {
    if d == 1 {
        return vec![vec![r]];
    }
    (0..=r)
        .flat_map(|first| {
            multi_indices(d - 1, r - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Central difference approximation of `∂^α f(x)`.
fn partial_derivative(f: &dyn Fn(&[f64]) -> f64, x: &[f64], alpha: &[usize], h: f64) -> f64 {
    fn go(f: &dyn Fn(&[f64]) -> f64, x: &mut Vec<f64>, alpha: &[usize], axis: usize, h: f64) -> f64 {
        if axis == alpha.len() {
            return f(x);
        }
        let order = alpha[axis];
        let mut total = 0.0;
        let mut binom = 1.0;
        for k in 0..=order {
            // Σ_k (−1)^k C(order, k) f(x + (order/2 − k) h e_axis)
            let offset = (order as f64 / 2.0 - k as f64) * h;
            let saved = x[axis];
            x[axis] = saved + offset;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * binom * go(f, x, alpha, axis + 1, h);
            x[axis] = saved;
            binom = binom * (order - k) as f64 / (k + 1) as f64;
        }
        total / h.powi(order as i32)
    }
    go(f, &mut x.to_vec(), alpha, 0, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::stream_rng;

    #[test]
    fn spec_validation() {
        assert!(HoelderSpec::new(0, 0.0, 1).is_err());
        assert!(HoelderSpec::new(0, 1.5, 1).is_err());
        assert!(HoelderSpec::new(0, 1.0, 0).is_err());
        assert_eq!(HoelderSpec::new(1, 0.5, 3).unwrap().smoothness_rate(), 0.5);
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(2, 2).len(), 3);
        assert_eq!(multi_indices(3, 1).len(), 3);
    }

    #[test]
    fn membership_examples() {
        let mut rng = stream_rng(1, 0);
        let lip = HoelderSpec::lipschitz(1);
        assert!(lip.check_membership(&|x| (x[0] - 0.5).abs(), 500, 1e-9, &mut rng).member);
        assert!(!lip.check_membership(&|x| 2.0 * x[0] - 1.0, 500, 1e-9, &mut rng).member);
        let c1 = HoelderSpec::new(1, 1.0, 1).unwrap();
        assert!(c1.check_membership(&|x| 0.5 * x[0] * x[0], 500, 1e-3, &mut rng).member);
        assert!(!c1.check_membership(&|x| x[0] * x[0], 500, 1e-3, &mut rng).member);
    }
}
