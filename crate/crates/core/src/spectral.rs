//! Heat trace of a box from its Dirichlet eigenvalues π²Σ kᵢ²/aᵢ².

use std::f64::consts::PI;

use crate::error::{check_positive, check_time, Error, Result};

const SAFETY: f64 = 20.0;

/// A truncated eigenvalue sum with a rigorous bound on what was left out.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSum {
    pub edges: Vec<f64>,
    pub t: f64,
    pub value: f64,
    pub tail_bound: f64,
    /// Number of modes kept along each axis.
    pub terms: Vec<usize>,
}

/// Σ_{k≥1} e^(−π²tk²/a²) truncated at K, with ∫_K^∞ as the remainder bound.
fn axis_sum(a: f64, t: f64, tol: f64) -> (f64, f64, usize) {
    let alpha = PI * PI * t / (a * a);
    let k_max = (a / (PI * t.sqrt()) * ((1.0 / tol).ln().max(0.0) + SAFETY).sqrt()).ceil() as usize;
    let k_max = k_max.max(1);
    // Smallest terms first.
    let sum = (1..=k_max)
        .rev()
        .map(|k| (-alpha * (k * k) as f64).exp())
        .sum::<f64>();
    let tail = 0.5 * (PI / alpha).sqrt() * libm::erfc(k_max as f64 * alpha.sqrt());
    (sum, tail, k_max)
}

pub fn spectral_sum(edges: &[f64], t: f64, tol: f64) -> Result<SpectralSum> {
    check_time(t)?;
    check_positive("tolerance", tol)?;
    if edges.is_empty() {
        return Err(Error::InvalidParameter("need at least one edge".into()));
    }
    edges.iter().try_for_each(|e| check_positive("edge", *e))?;
    let n = edges.len();
    let parts: Vec<(f64, f64, usize)> = edges.iter().map(|&a| axis_sum(a, t, tol / n as f64)).collect();
    let value: f64 = parts.iter().map(|p| p.0).product();
    let upper: f64 = parts.iter().map(|p| p.0 + p.1).product();
    Ok(SpectralSum {
        edges: edges.to_vec(),
        t,
        value,
        tail_bound: upper - value,
        terms: parts.iter().map(|p| p.2).collect(),
    })
}

/// Z(t) of the box with the given edges, to within `tol`.
pub fn spectral_partition_box(edges: &[f64], t: f64, tol: f64) -> Result<f64> {
    spectral_sum(edges, t, tol).map(|s| s.value)
}
