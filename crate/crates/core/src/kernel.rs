//! Free Gaussian kernel and the Dirichlet kernel as a signed image sum.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{check_time, Error, Result};
use crate::geometry::{distance, DomainDescriptor};
use crate::images::{enumerate_images, explore_copies};
use crate::numeric::CompensatedSum;
use crate::reflgroup::{orthogonality_defect, parity, Isometry};

/// Default relative truncation tolerance of image sums.
pub const DEFAULT_EPSILON: f64 = 1e-15;

const MAX_DOUBLINGS: usize = 4;

/// (4πt)^(−n/2): the free kernel at zero distance.
#[inline]
pub fn peak(t: f64, n: usize) -> f64 {
    (4.0 * PI * t).powf(-(n as f64) / 2.0)
}

/// Gauss–Weierstrass kernel in the dimension of `x`.
pub fn free_kernel(x: &[f64], y: &[f64], t: f64) -> Result<f64> {
    check_time(t)?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let d = distance(x, y);
    Ok(peak(t, x.len()) * (-d * d / (4.0 * t)).exp())
}

/// ‖r − Gr‖² evaluated as 2r² − rᵀ(G + Gᵀ)r for orthogonal G.
pub fn reduced_norm(r: &[f64], g: &DMatrix<f64>) -> Result<f64> {
    if g.nrows() != r.len() || g.ncols() != r.len() {
        return Err(Error::DimensionMismatch {
            expected: r.len(),
            found: g.nrows(),
        });
    }
    let deviation = orthogonality_defect(g);
    if deviation > 1e-10 {
        return Err(Error::NonOrthogonal { deviation });
    }
    let n = r.len();
    let mut quad = 0.0;
    let mut r2 = 0.0;
    for i in 0..n {
        r2 += r[i] * r[i];
        for j in 0..n {
            quad += r[i] * (g[(i, j)] + g[(j, i)]) * r[j];
        }
    }
    // Rounding can push a true zero slightly negative.
    Ok((2.0 * r2 - quad).max(0.0))
}

/// Value of an image sum together with its truncation accounting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEstimate {
    pub value: f64,
    /// Upper bound on the neglected terms: ε·peak per pruned frontier copy.
    pub truncation_bound: f64,
    pub images: usize,
    pub cutoff: f64,
}

fn cutoff_radius(t: f64, epsilon: f64) -> f64 {
    (4.0 * t * (1.0 / epsilon).ln()).sqrt()
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )))
    }
}

fn image_sum(
    domain: &DomainDescriptor,
    x: &[f64],
    y: &[f64],
    t: f64,
    epsilon: f64,
) -> Result<KernelEstimate> {
    check_time(t)?;
    check_epsilon(epsilon)?;
    if !domain.contains(x)? || !domain.contains(y)? {
        return Err(Error::PointNotInterior);
    }
    let n = domain.dimension();
    let top = peak(t, n);
    let diagonal = x == y;
    let mut cutoff = 2.0 * cutoff_radius(t, epsilon) + distance(x, y);
    let mut previous: Option<KernelEstimate> = None;
    for _ in 0..=MAX_DOUBLINGS {
        let set = enumerate_images(domain, y, cutoff)?;
        let mut acc = CompensatedSum::new();
        for e in &set.entries {
            let d2 = if diagonal && e.isometry.is_linear() {
                reduced_norm(x, &e.isometry.linear)?
            } else {
                let d = distance(x, &e.point);
                d * d
            };
            acc.add(e.sign as f64 * (-d2 / (4.0 * t)).exp());
        }
        let estimate = KernelEstimate {
            value: top * acc.value(),
            truncation_bound: epsilon * top * set.pruned as f64,
            images: set.len(),
            cutoff,
        };
        if let Some(prev) = previous {
            if (estimate.value - prev.value).abs() <= epsilon.max(1e-14) * top {
                return Ok(estimate);
            }
        }
        // Wedges have a finite group: nothing is gained by a larger cutoff.
        if !domain.is_bounded() && set.pruned == 0 {
            return Ok(estimate);
        }
        previous = Some(estimate);
        cutoff *= 2.0;
    }
    Ok(previous.expect("at least one pass"))
}

/// Dirichlet heat kernel P_t(x, y) with its truncation accounting.
pub fn domain_kernel_estimate(
    domain: &DomainDescriptor,
    x: &[f64],
    y: &[f64],
    t: f64,
    epsilon: f64,
) -> Result<KernelEstimate> {
    image_sum(domain, x, y, t, epsilon)
}

/// Dirichlet heat kernel P_t(x, y).
pub fn domain_kernel(domain: &DomainDescriptor, x: &[f64], y: &[f64], t: f64, epsilon: f64) -> Result<f64> {
    image_sum(domain, x, y, t, epsilon).map(|e| e.value)
}

/// P_t(y, y); linear image terms go through [`reduced_norm`].
pub fn diagonal_kernel(domain: &DomainDescriptor, y: &[f64], t: f64, epsilon: f64) -> Result<f64> {
    image_sum(domain, y, y, t, epsilon).map(|e| e.value)
}

/// One non-identity term of the diagonal kernel, x ↦ sign·exp(−‖gx − x‖²/4t).
#[derive(Debug, Clone)]
pub(crate) struct DiagonalTerm {
    pub sign: f64,
    /// I − G, row-major.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// 2I − G − Gᵀ, row-major; used when the isometry is linear.
    pub q: Option<Vec<f64>>,
}

impl DiagonalTerm {
    fn new(g: &Isometry) -> Result<Self> {
        let n = g.dim();
        let mut a = vec![0.0; n * n];
        let mut q = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { 1.0 } else { 0.0 };
                a[i * n + j] = delta - g.linear[(i, j)];
                q[i * n + j] = 2.0 * delta - g.linear[(i, j)] - g.linear[(j, i)];
            }
        }
        Ok(DiagonalTerm {
            sign: parity(g)? as f64,
            a,
            b: g.translation.iter().copied().collect(),
            q: g.is_linear().then_some(q),
        })
    }

    /// ‖gx − x‖² = ‖(I − G)x − b‖².
    #[inline]
    pub fn squared_displacement(&self, x: &[f64]) -> f64 {
        let n = x.len();
        match &self.q {
            Some(q) => {
                let mut s = 0.0;
                for i in 0..n {
                    let row = &q[i * n..(i + 1) * n];
                    let mut qi = 0.0;
                    for j in 0..n {
                        qi += row[j] * x[j];
                    }
                    s += x[i] * qi;
                }
                s.max(0.0)
            }
            None => {
                let mut s = 0.0;
                for i in 0..n {
                    let row = &self.a[i * n..(i + 1) * n];
                    let mut w = -self.b[i];
                    for j in 0..n {
                        w += row[j] * x[j];
                    }
                    s += w * w;
                }
                s
            }
        }
    }
}

/// The image terms relevant anywhere in a bounded domain at time t, for
/// repeated evaluation of the diagonal kernel at quadrature points.
#[derive(Debug, Clone)]
pub struct ImageSystem {
    pub(crate) terms: Vec<DiagonalTerm>,
    pub(crate) dimension: usize,
    pub(crate) t: f64,
    /// Terms with displacement above this radius are below ε·peak.
    pub(crate) radius: f64,
    pub(crate) identity: bool,
}

impl ImageSystem {
    pub fn new(domain: &DomainDescriptor, t: f64, epsilon: f64) -> Result<Self> {
        check_time(t)?;
        check_epsilon(epsilon)?;
        let radius = cutoff_radius(t, epsilon);
        let c = domain.reference_point();
        // ‖gx − x‖ ≥ ‖gc − c‖ − 2‖x − c‖ for every point of the domain.
        let reach = radius + 2.0 * domain.reference_radius();
        let margin = 2.0 * domain.diameter();
        let disp = |g: &Isometry| distance(&g.apply(&c), &c);
        let all: Vec<usize> = (0..domain.walls().len()).collect();
        let (kept, _) = explore_copies(domain, &all, |g| disp(g) <= reach, |g| disp(g) <= reach + margin)?;
        let terms = kept
            .iter()
            .filter(|g| !g.is_identity(1e-12))
            .map(DiagonalTerm::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(ImageSystem {
            terms,
            dimension: domain.dimension(),
            t,
            radius,
            identity: true,
        })
    }

    /// Explicit list of images (used for partial traces over chosen group elements).
    pub fn from_isometries(isometries: &[Isometry], t: f64, epsilon: f64, include_identity: bool) -> Result<Self> {
        check_time(t)?;
        check_epsilon(epsilon)?;
        let dimension = isometries
            .first()
            .map(|g| g.dim())
            .ok_or_else(|| Error::InvalidParameter("no isometries given".into()))?;
        let mut terms = Vec::new();
        for g in isometries {
            if g.dim() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: g.dim(),
                });
            }
            if !g.is_identity(1e-12) {
                terms.push(DiagonalTerm::new(g)?);
            }
        }
        Ok(ImageSystem {
            terms,
            dimension,
            t,
            radius: cutoff_radius(t, epsilon),
            identity: include_identity,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len() + usize::from(self.identity)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Indices of the terms that can matter for points within `rho` of `center`.
    pub(crate) fn active_terms(&self, center: &[f64], rho: f64) -> Vec<usize> {
                self.terms
            .iter()
            .enumerate()
            .filter(|(_, term)| term.squared_displacement(center).sqrt() - 2.0 * rho <= self.radius)
            .map(|(i, _)| i)
            .collect()
    }

    /// (4πt)^(n/2)·P_t(x, x) restricted to the given terms.
    #[inline]
    pub(crate) fn normalized_value(&self, x: &[f64], active: &[usize]) -> f64 {
        let mut acc = CompensatedSum::new();
        if self.identity {
            acc.add(1.0);
        }
        let scale = -1.0 / (4.0 * self.t);
        for &i in active {
            let term = &self.terms[i];
            acc.add(term.sign * (term.squared_displacement(x) * scale).exp());
        }
        acc.value()
    }

    pub fn peak(&self) -> f64 {
        peak(self.t, self.dimension)
    }

    /// Diagonal kernel at one point, all terms.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let all: Vec<usize> = (0..self.terms.len()).collect();
        self.peak() * self.normalized_value(x, &all)
    }
}
