//! Named test integrands with their class parameters and exact integrals.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::hoelder::HoelderSpec;
use super::task::Integrand;

#[derive(Clone, Copy, Debug)]
pub struct TestFunction {
    pub name: &'static str,
    pub d: usize,
    pub r: usize,
    pub rho: f64,
    pub integral: f64,
    pub formula: &'static str,
    pub eval: fn(&[f64]) -> f64,
}

impl TestFunction {
    pub fn spec(&self) -> HoelderSpec {
        HoelderSpec { r: self.r, rho: self.rho, d: self.d }
    }

    pub fn integrand(&self) -> Integrand {
        Arc::new(self.eval)
    }
}

pub const MANIFEST: &[TestFunction] = &[
    TestFunction { name: "constant", d: 1, r: 0, rho: 1.0, integral: 0.7, formula: "0.7", eval: |_| 0.7 },
    TestFunction { name: "linear", d: 1, r: 0, rho: 1.0, integral: 0.5, formula: "x", eval: |x| x[0] },
    TestFunction { name: "abs-center", d: 1, r: 0, rho: 1.0, integral: 0.25, formula: "|x - 1/2|", eval: |x| (x[0] - 0.5).abs() },
    TestFunction {
        name: "sqrt-cusp",
        d: 1,
        r: 0,
        rho: 0.5,
        integral: std::f64::consts::SQRT_2 / 3.0,
        formula: "sqrt|x - 1/2|",
        eval: |x| (x[0] - 0.5).abs().sqrt(),
    },
    TestFunction { name: "half-square", d: 1, r: 1, rho: 1.0, integral: 1.0 / 6.0, formula: "x^2 / 2", eval: |x| 0.5 * x[0] * x[0] },
    TestFunction {
        name: "abs-center-2d",
        d: 2,
        r: 0,
        rho: 1.0,
        integral: 0.25,
        formula: "(|x - 1/2| + |y - 1/2|) / 2",
        eval: |x| 0.5 * ((x[0] - 0.5).abs() + (x[1] - 0.5).abs()),
    },
    TestFunction { name: "product-2d", d: 2, r: 0, rho: 1.0, integral: 0.125, formula: "x y / 2", eval: |x| 0.5 * x[0] * x[1] },
];

pub fn lookup(name: &str) -> Result<&'static TestFunction> {
    MANIFEST.iter().find(|t| t.name == name).ok_or_else(|| {
        let names: Vec<&str> = MANIFEST.iter().map(|t| t.name).collect();
        Error::Config(format!("unknown function '{name}'; available: {}, {TENT_FAMILY}", names.join(", ")))
    })
}

/// Name of the budget-dependent Lipschitz family.
pub const TENT_FAMILY: &str = "lipschitz-tents";

/// `0.75·dist(x, {j/k}) + sin(2πx)/(8π)` on `[0, 1]`, a Lipschitz function
/// whose tents vanish exactly at the nodes of a `k`-cell interpolant. Its
/// integral is `3/(16k)`.
pub fn lipschitz_tent(cells: usize) -> (Integrand, f64) {
    let k = cells as f64;
    let f = move |x: &[f64]| {
        let s = x[0] * k;
        0.75 * (s - s.round()).abs() / k + (2.0 * PI * x[0]).sin() / (8.0 * PI)
    };
    (Arc::new(f), 3.0 / (16.0 * k))
}

/// A function or function family usable in convergence studies.
#[derive(Clone, Copy, Debug)]
pub enum Family {
    Fixed(&'static TestFunction),
    /// One tent function per budget, with tents on the `n`-cell grid.
    LipschitzTents,
}

impl Family {
    pub fn parse(name: &str) -> Result<Self> {
        if name == TENT_FAMILY {
            Ok(Family::LipschitzTents)
        } else {
            lookup(name).map(Family::Fixed)
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Fixed(t) => t.name,
            Family::LipschitzTents => TENT_FAMILY,
        }
    }

    pub fn spec(&self) -> HoelderSpec {
        match self {
            Family::Fixed(t) => t.spec(),
            Family::LipschitzTents => HoelderSpec::lipschitz(1),
        }
    }

    /// Integrand and exact integral for budget `n`.
    pub fn instance(&self, n: usize) -> (Integrand, f64) {
        match self {
            Family::Fixed(t) => (t.integrand(), t.integral),
            Family::LipschitzTents => lipschitz_tent(n.max(1)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::stream_rng;

    /// Composite Simpson on a fine grid, per axis.
    fn simpson(f: &dyn Fn(&[f64]) -> f64, d: usize, panels: usize) -> f64 {
        let w = |j: usize| if j == 0 || j == panels { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
        let h = 1.0 / panels as f64;
        match d {
            1 => (0..=panels).map(|j| w(j) * f(&[j as f64 * h])).sum::<f64>() * h / 3.0,
            2 => (0..=panels)
                .flat_map(|i| (0..=panels).map(move |j| (i, j)))
                .map(|(i, j)| w(i) * w(j) * f(&[i as f64 * h, j as f64 * h]))
                .sum::<f64>()
                * h
                * h
                / 9.0,
            _ => unreachable!(),
        }
    }

    #[test]
    fn manifest_integrals_match_numerical_quadrature() {
        for t in MANIFEST {
            // even panel counts put kinks at 1/2 on a panel boundary
            let approx = simpson(&t.eval, t.d, if t.d == 1 { 20000 } else { 400 });
            let tol = if t.rho < 1.0 { 1e-5 } else { 1e-9 };
            assert!((approx - t.integral).abs() < tol, "{}: {approx} vs {}", t.name, t.integral);
        }
    }

    #[test]
    fn manifest_members_are_in_their_class() {
        let mut rng = stream_rng(3, 0);
        for t in MANIFEST {
            let f = t.integrand();
            let report = t.spec().check_membership(f.as_ref(), 400, 1e-3, &mut rng);
            assert!(report.member, "{}: {report:?}", t.name);
        }
    }

    #[test]
    fn tents_are_lipschitz_with_known_integral() {
        let mut rng = stream_rng(5, 0);
        for k in [4, 8, 32] {
            let (f, exact) = lipschitz_tent(k);
            assert!(HoelderSpec::lipschitz(1).check_membership(f.as_ref(), 400, 1e-9, &mut rng).member);
            assert!((simpson(f.as_ref(), 1, 64 * k) - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn unknown_name_lists_manifest() {
        let err = Family::parse("nope").unwrap_err();
        assert!(err.is_configuration());
        assert!(err.to_string().contains("abs-center"));
    }
}
