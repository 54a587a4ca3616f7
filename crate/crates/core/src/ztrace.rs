//! Numerical heat trace Z_Ω(t) = ∫_Ω P_t(x, x) dx and extraction of its
//! constant term.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::asympt::expansion;
use crate::error::{check_positive, check_time, Error, Result};
use crate::geometry::{DomainDescriptor, Shape};
use crate::kernel::{ImageSystem, DEFAULT_EPSILON};
use crate::numeric::pairwise_sum;
use crate::quadrature::{integrate, Cell, Patch, RuleSpec};
use crate::reflgroup::{dihedral_elements, trihedral_reflections, Isometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Graded tensor Gauss–Legendre on boxes, and on the three barycentric
    /// kites of a triangle (extruded for prisms).
    TensorGaussLegendre,
    /// Collapsed-square (Duffy) Gauss rule on whole triangles; other shapes
    /// use the tensor rule.
    TriangleCollapsedGauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub scheme: Scheme,
    pub points_per_axis: usize,
    pub subdivisions: usize,
    pub target_rel_error: f64,
    /// How many times the subdivision count may be doubled.
    pub max_refinements: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            scheme: Scheme::TensorGaussLegendre,
            points_per_axis: 10,
            subdivisions: 1,
            target_rel_error: 1e-11,
            max_refinements: 3,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < 2 {
            return Err(Error::InvalidParameter(format!(
                "points_per_axis must be at least 2, got {}",
                self.points_per_axis
            )));
        }
        if self.subdivisions == 0 {
            return Err(Error::InvalidParameter("subdivisions must be at least 1".into()));
        }
        if !(self.target_rel_error > 0.0 && self.target_rel_error <= 1e-2) {
            return Err(Error::InvalidParameter(format!(
                "target_rel_error must lie in (0, 1e-2], got {}",
                self.target_rel_error
            )));
        }
        Ok(())
    }
}

fn midpoint(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

fn triangle_patches(v: [[f64; 2]; 3], height: Option<f64>, scheme: Scheme) -> Vec<Patch> {
    match scheme {
        Scheme::TriangleCollapsedGauss => vec![Patch::Collapsed { corners: v, height }],
        Scheme::TensorGaussLegendre => {
            let c = [
                (v[0][0] + v[1][0] + v[2][0]) / 3.0,
                (v[0][1] + v[1][1] + v[2][1]) / 3.0,
            ];
            (0..3)
                .map(|i| Patch::Kite {
                    corners: [
                        v[i],
                        midpoint(v[i], v[(i + 1) % 3]),
                        c,
                        midpoint(v[i], v[(i + 2) % 3]),
                    ],
                    height,
                })
                .collect()
        }
    }
}

/// Decomposition of a bounded domain into quadrature patches.
pub fn domain_patches(domain: &DomainDescriptor, scheme: Scheme) -> Result<Vec<Patch>> {
    let boxed = |edges: &[f64]| {
        vec![Patch::Box {
            origin: vec![0.0; edges.len()],
            edges: edges.to_vec(),
        }]
    };
    Ok(match domain.shape() {
        Shape::Interval { length } => boxed(&[*length]),
        Shape::Rectangle { a, b } => boxed(&[*a, *b]),
        Shape::Box { a, b, c } => boxed(&[*a, *b, *c]),
        Shape::Hyperrectangle { edges } => boxed(edges),
        Shape::Triangle { shape, side } => triangle_patches(shape.vertices(*side), None, scheme),
        Shape::TriangularPrism { base, a, c } => triangle_patches(base.vertices(*a), Some(*c), scheme),
        Shape::Wedge { .. } | Shape::TrihedralWedge { .. } => return Err(Error::UnboundedDomain),
    })
}

fn cell_integral(system: &ImageSystem, cell: &Cell) -> f64 {
    let active = system.active_terms(&cell.center, cell.radius);
    let parts: Vec<f64> = (0..cell.len())
        .map(|i| cell.weights[i] * system.normalized_value(cell.point(i), &active))
        .collect();
    pairwise_sum(&parts)
}

/// ∫ P_t(x, x) over the patches, refining until two successive estimates agree.
fn refine(patches: &[Patch], system: &ImageSystem, t: f64, quad: &QuadratureConfig) -> Result<f64> {
    quad.validate()?;
    let run = |subdivisions: usize| -> Result<f64> {
        let spec = RuleSpec {
            points_per_axis: quad.points_per_axis,
            subdivisions,
            t,
        };
        Ok(system.peak() * integrate(patches, &spec, |cell| cell_integral(system, cell))?)
    };
    let mut subdivisions = quad.subdivisions;
    let mut last = run(subdivisions)?;
    if quad.max_refinements == 0 {
        return Ok(last);
    }
    let mut previous = f64::NAN;
    for _ in 0..quad.max_refinements {
        subdivisions *= 2;
        let next = run(subdivisions)?;
        if (next - last).abs() <= quad.target_rel_error * next.abs() {
            return Ok(next);
        }
        previous = last;
        last = next;
    }
    Err(Error::ConvergenceFailure { last, previous })
}

/// Z_Ω(t) by quadrature of the diagonal image sum.
pub fn partition_numeric(domain: &DomainDescriptor, t: f64, quad: &QuadratureConfig, epsilon: f64) -> Result<f64> {
    check_time(t)?;
    if !domain.is_bounded() {
        return Err(Error::UnboundedDomain);
    }
    let patches = domain_patches(domain, quad.scheme)?;
    let system = ImageSystem::new(domain, t, epsilon)?;
    refine(&patches, &system, t, quad)
}

/// −(1/8m) Σ_k (e^(−R² sin²(kπ/m)/t) − 1)/sin²(kπ/m): the rotation part of the
/// trace over the wedge truncated at radius R, in closed form.
pub fn wedge_constant_numeric(m: u32, radius: f64, t: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("wedge index must be at least 2, got {m}")));
    }
    check_positive("radius", radius)?;
    check_positive("t", t)?;
    let mf = m as f64;
    let sum: f64 = (1..m)
        .map(|k| {
            let s2 = (k as f64 * PI / mf).sin().powi(2);
            (-radius * radius * s2 / t).exp_m1() / s2
        })
        .sum();
    Ok(-sum / (8.0 * mf))
}

/// The same rotation part, integrated numerically over the sector.
pub fn wedge_rotation_trace_numeric(m: u32, radius: f64, t: f64, quad: &QuadratureConfig) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("wedge index must be at least 2, got {m}")));
    }
    check_positive("radius", radius)?;
    check_time(t)?;
    let rotations = &dihedral_elements(m)?[1..m as usize];
    let system = ImageSystem::from_isometries(rotations, t, DEFAULT_EPSILON, false)?;
    let patch = [Patch::Sector {
        radius,
        angle: PI / m as f64,
    }];
    refine(&patch, &system, t, quad)
}

/// Elements (R_a1·R_a2)^k·R_a3, k = 1..r−1, of the (r,2,2) trihedral group.
pub fn rotation_reflection_elements(r: u32) -> Result<Vec<Isometry>> {
    let [r1, r2, r3] = trihedral_reflections(r, 2, 2)?;
    let rot = r1.compose(&r2);
    Ok((1..r).map(|k| rot.pow(k).compose(&r3)).collect())
}

/// Integral of the rotation–reflection terms over the truncated chamber
/// 0 < ρ < R, 0 < φ < π/r, 0 < z < R of the (r,2,2) trihedral angle.
pub fn trihedral_constant_numeric(r: u32, radius: f64, t: f64, quad: &QuadratureConfig) -> Result<f64> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("trihedral index must be at least 2, got {r}")));
    }
    check_positive("radius", radius)?;
    check_time(t)?;
    let elements = rotation_reflection_elements(r)?;
    let system = ImageSystem::from_isometries(&elements, t, DEFAULT_EPSILON, false)?;
    let patch = [Patch::CylinderSector {
        radius,
        angle: PI / r as f64,
        height: radius,
    }];
    refine(&patch, &system, t, quad)
}

/// Diagonal kernel restricted to chosen group elements, for inspection.
pub fn partial_trace_density(elements: &[Isometry], x: &[f64], t: f64) -> Result<f64> {
    let system = ImageSystem::from_isometries(elements, t, DEFAULT_EPSILON, false)?;
    if x.len() != system.dimension {
        return Err(Error::DimensionMismatch {
            expected: system.dimension,
            found: x.len(),
        });
    }
    Ok(system.evaluate(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtrapolationMethod {
    /// The last two residuals already agree; the last one is returned.
    Plain,
    /// Fit of c + a·e^(−b/t) through the last three residuals.
    ExponentialFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub constant: f64,
    pub method: ExtrapolationMethod,
    /// (t, Z_numeric − non-constant expansion terms).
    pub residuals: Vec<(f64, f64)>,
}

fn check_decreasing(t_list: &[f64]) -> Result<()> {
    if t_list.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 times, got {}",
            t_list.len()
        )));
    }
    t_list.iter().try_for_each(|&t| check_time(t))?;
    if t_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("times must be strictly decreasing".into()));
    }
    Ok(())
}

/// Limit of a residual sequence at t → 0⁺, assuming c + a·e^(−b/t) behaviour.
pub fn extrapolate_residuals(residuals: &[(f64, f64)], tol: f64) -> Result<Extrapolation> {
    check_positive("tolerance", tol)?;
    let times: Vec<f64> = residuals.iter().map(|r| r.0).collect();
    check_decreasing(&times)?;
    let k = residuals.len();
    let (t1, r1) = residuals[k - 3];
    let (t2, r2) = residuals[k - 2];
    let (t3, r3) = residuals[k - 1];
    let plain = r3;
    let done = |constant, method| {
        Ok(Extrapolation {
            constant,
            method,
            residuals: residuals.to_vec(),
        })
    };
    if (r3 - r2).abs() <= tol {
        return done(plain, ExtrapolationMethod::Plain);
    }
    let d1 = r1 - r2;
    let d2 = r2 - r3;
    if d1 == 0.0 || d1.signum() != d2.signum() {
        return Err(Error::ExtrapolationUnstable(format!(
            "residuals are not monotone: {r1}, {r2}, {r3}"
        )));
    }
    // ρ(b) = (e^{−b/t2} − e^{−b/t3})/(e^{−b/t1} − e^{−b/t2}), decreasing from
    // ρ(0⁺) = (1/t3 − 1/t2)/(1/t2 − 1/t1) to 0.
    let (g1, g2) = (1.0 / t2 - 1.0 / t1, 1.0 / t3 - 1.0 / t2);
    let ratio = |b: f64| (-b * g1).exp() * (-b * g2).exp_m1() / (-b * g1).exp_m1();
    let target = d2 / d1;
    let rho0 = g2 / g1;
    if !(target > 0.0 && target < rho0) {
        return Err(Error::ExtrapolationUnstable(format!(
            "residual ratio {target} outside (0, {rho0})"
        )));
    }
    let (mut lo, mut hi) = (1e-12, 1e-3);
    while ratio(hi) > target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::ExtrapolationUnstable("decay rate not bracketed".into()));
        }
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if ratio(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b = (lo * hi).sqrt();
    let a = d2 / ((-b / t2).exp() - (-b / t3).exp());
    let constant = r3 - a * (-b / t3).exp();
    if (constant - plain).abs() > 10.0 * tol {
        return Err(Error::ExtrapolationUnstable(format!(
            "extrapolated {constant} differs from plain {plain} by more than 10×{tol}"
        )));
    }
    done(constant, ExtrapolationMethod::ExponentialFit)
}

/// Constant term of Z_Ω from numerical traces at decreasing small times.
pub fn topological_extrapolate_report(
    domain: &DomainDescriptor,
    t_list: &[f64],
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<Extrapolation> {
    if !domain.is_bounded() {
        return Err(Error::UnboundedDomain);
    }
    check_decreasing(t_list)?;
    let exp = expansion(domain)?;
    let residuals = t_list
        .iter()
        .map(|&t| {
            let z = partition_numeric(domain, t, quad, DEFAULT_EPSILON)?;
            Ok((t, z - exp.singular_part(t)?))
        })
        .collect::<Result<Vec<_>>>()?;
    extrapolate_residuals(&residuals, tol)
}

pub fn topological_extrapolate(
    domain: &DomainDescriptor,
    t_list: &[f64],
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<f64> {
    topological_extrapolate_report(domain, t_list, quad, tol).map(|e| e.constant)
}

/// One row of a trace table; columns not computed are NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    pub z_numeric: f64,
    pub z_asymptotic: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TraceSeries {
    pub rows: Vec<TraceRow>,
}

pub const CSV_HEADER: &str = "t,z_numeric,z_asymptotic,residual";

fn csv_field(out: &mut String, x: f64) {
    if x.is_finite() {
        let _ = write!(out, "{x:.16e}");
    }
}

impl TraceSeries {
    pub fn new(rows: Vec<TraceRow>) -> Result<Self> {
        if rows.iter().any(|r| !(r.t > 0.0)) {
            return Err(Error::InvalidParameter("times must be positive".into()));
        }
        let up = rows.windows(2).all(|w| w[1].t > w[0].t);
        let down = rows.windows(2).all(|w| w[1].t < w[0].t);
        if !(up || down) {
            return Err(Error::InvalidParameter("times must be strictly monotone".into()));
        }
        Ok(TraceSeries { rows })
    }

    /// CSV with the fixed header; 17 significant digits; empty fields for
    /// columns that were not computed.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            for (i, x) in [r.t, r.z_numeric, r.z_asymptotic, r.residual].into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                csv_field(&mut out, x);
            }
            out.push('\n');
        }
        out
    }
}

/// Which columns of a trace table to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Columns {
    pub numeric: bool,
    pub asymptotic: bool,
}

pub fn trace_series(
    domain: &DomainDescriptor,
    t_list: &[f64],
    quad: &QuadratureConfig,
    epsilon: f64,
    columns: Columns,
) -> Result<TraceSeries> {
    let exp = if columns.asymptotic {
        Some(expansion(domain)?)
    } else {
        None
    };
    let rows = t_list
        .iter()
        .map(|&t| {
            check_time(t)?;
            let z_numeric = if columns.numeric {
                partition_numeric(domain, t, quad, epsilon)?
            } else {
                f64::NAN
            };
            let z_asymptotic = match &exp {
                Some(e) => e.evaluate(t)?,
                None => f64::NAN,
            };
            Ok(TraceRow {
                t,
                z_numeric,
                z_asymptotic,
                residual: z_numeric - z_asymptotic,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    TraceSeries::new(rows)
}

/// Rotation about the z axis by `angle` composed with z ↦ −z.
pub fn rotoreflection(angle: f64) -> Isometry {
    let (s, c) = angle.sin_cos();
    Isometry::linear(
        DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, -1.0]),
        3,
    )
}
