//! Classical baselines: deterministic quadrature, plain and control-variate
//! Monte Carlo, and log-log rate fitting of convergence records.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::circuit::CostReport;
use crate::error::{Error, Result};
use crate::integration::{build_interpolant, quadrature_main, HoelderSpec};

/// The interpolant's exact integral, an optimal-order deterministic rule.
pub fn det_quadrature(f: &dyn Fn(&[f64]) -> f64, spec: &HoelderSpec, n: usize) -> Result<f64> {
    Ok(quadrature_main(&build_interpolant(f, spec, n)?))
}

/// Average of `n` entries drawn uniformly with replacement.
pub fn mc_mean<R: Rng + ?Sized>(values: &[f64], n: usize, rng: &mut R) -> Result<f64> {
    if n == 0 || values.is_empty() {
        return Err(Error::invalid("Monte Carlo needs n ≥ 1 and a non-empty sequence"));
    }
    Ok((0..n).map(|_| values[rng.random_range(0..values.len())]).sum::<f64>() / n as f64)
}

fn uniform_point<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    (0..d).map(|_| rng.random::<f64>()).collect()
}

/// Average of `f` at `n` independent uniform points of `[0,1]^d`.
pub fn mc_integrate<R: Rng + ?Sized>(f: &dyn Fn(&[f64]) -> f64, d: usize, n: usize, rng: &mut R) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("Monte Carlo needs n ≥ 1"));
    }
    Ok((0..n).map(|_| f(&uniform_point(d, rng))).sum::<f64>() / n as f64)
}

/// `∫P_n f` plus a Monte Carlo mean of `f − P_n f` at `n` uniform points.
pub fn cv_mc_integrate<R: Rng + ?Sized>(
    f: &dyn Fn(&[f64]) -> f64,
    spec: &HoelderSpec,
    n: usize,
    rng: &mut R,
) -> Result<f64> {
    let interp = build_interpolant(f, spec, n)?;
    let residual = |x: &[f64]| f(x) - interp.evaluate(x);
    Ok(quadrature_main(&interp) + mc_integrate(&residual, spec.d, n, rng)?)
}

/// Median of a non-empty list; the mean of the two middle values for even length.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Method {
    Deterministic,
    MonteCarlo,
    CvMonteCarlo,
    Quantum,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Deterministic, Method::MonteCarlo, Method::CvMonteCarlo, Method::Quantum];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Deterministic => "deterministic",
            Method::MonteCarlo => "monte-carlo",
            Method::CvMonteCarlo => "cv-monte-carlo",
            Method::Quantum => "quantum",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown method '{s}'; expected one of deterministic, monte-carlo, cv-monte-carlo, quantum")))
    }
}

/// Quantum cost model, or the number of classical function evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum RecordCost {
    Quantum(CostReport),
    Classical { evaluations: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub method: Method,
    pub n: usize,
    pub trials: usize,
    pub median_error: f64,
    pub cost: RecordCost,
    pub seed: u64,
}

impl ConvergenceRecord {
    pub fn new(method: Method, n: usize, errors: &[f64], cost: RecordCost, seed: u64) -> Result<Self> {
        if errors.is_empty() {
            return Err(Error::invalid("a convergence record needs at least one trial"));
        }
        let abs: Vec<f64> = errors.iter().map(|e| e.abs()).collect();
        Ok(ConvergenceRecord { method, n, trials: errors.len(), median_error: median(&abs), cost, seed })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination of the log-log fit.
    pub r_squared: f64,
    /// `log err − (intercept + slope·log n)` for each point used.
    pub residuals: Vec<f64>,
    /// Points dropped because their error was zero.
    pub excluded: usize,
}

/// Least-squares line through `(ln n, ln err)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<RateFit> {
    let used: Vec<(f64, f64)> = points.iter().filter(|(_, e)| *e > 0.0).map(|&(n, e)| (n.ln(), e.ln())).collect();
    let excluded = points.len() - used.len();
    if excluded > 0 {
        log::warn!("excluding {excluded} zero-error point(s) from the rate fit");
    }
    let mut xs: Vec<f64> = used.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(Error::invalid(format!("rate fit needs at least 3 distinct n with positive error, got {}", xs.len())));
    }
    let k = used.len() as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / k;
    let my = used.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = used.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = used.iter().map(|p| p.1 - (intercept + slope * p.0)).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(RateFit { slope, intercept, r_squared, residuals, excluded })
}

/// Rate fit over the records' `(n, median_error)` pairs.
pub fn fit_rate(records: &[ConvergenceRecord]) -> Result<RateFit> {
    let points: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.median_error)).collect();
    fit_power_law(&points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::stream_rng;

    #[test]
    fn exact_power_laws() {
        for p in [-1.0, -0.5, -2.0] {
            let pts: Vec<(f64, f64)> = [2.0, 4.0, 8.0].iter().map(|&n: &f64| (n, 3.0 * n.powf(p))).collect();
            let fit = fit_power_law(&pts).unwrap();
            assert!((fit.slope - p).abs() < 1e-12);
            assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_needs_three_positive_points() {
        assert!(fit_power_law(&[(2.0, 1.0), (4.0, 0.5)]).is_err());
        assert!(fit_power_law(&[(2.0, 1.0), (4.0, 0.5), (8.0, 0.0)]).is_err());
        let fit = fit_power_law(&[(2.0, 1.0), (4.0, 0.5), (8.0, 0.25), (16.0, 0.0)]).unwrap();
        assert_eq!(fit.excluded, 1);
    }

    #[test]
    fn constants_and_linears() {
        let mut rng = stream_rng(0, 0);
        assert_eq!(mc_mean(&[0.3; 8], 5, &mut rng).unwrap(), 0.3);
        let spec = HoelderSpec::lipschitz(1);
        assert!((det_quadrature(&|x| x[0], &spec, 4).unwrap() - 0.5).abs() < 1e-15);
        assert!((cv_mc_integrate(&|x| x[0], &spec, 4, &mut rng).unwrap() - 0.5).abs() < 1e-15);
        assert!((cv_mc_integrate(&|_| 0.4, &spec, 4, &mut rng).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("qmc".parse::<Method>().unwrap_err().is_configuration());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
