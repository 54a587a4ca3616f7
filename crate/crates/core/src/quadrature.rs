//! Graded tensor Gauss–Legendre rules on mapped cells.
//!
//! A patch maps the unit cube onto part of a domain. Each parameter axis is
//! split geometrically (ratio 1/2) toward the ends that touch a wall, each
//! resulting piece into `subdivisions` equal cells, and every cell carries a
//! tensor Gauss rule. Cells are integrated in parallel and summed pairwise in
//! a fixed order, so results do not depend on the thread count.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Which ends of a parameter axis touch a boundary layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    None,
    Low,
    High,
    Both,
}

/// Break points of a geometrically graded partition of [0, 1].
pub fn graded_breaks(grading: Grading, depth: u32) -> Vec<f64> {
    let toward_zero = |d: u32| -> Vec<f64> {
        let mut b = vec![0.0];
        b.extend((0..d).rev().map(|k| 0.5f64.powi(k as i32 + 1)));
        b.push(1.0);
        b
    };
    match grading {
        Grading::None => vec![0.0, 1.0],
        Grading::Low => toward_zero(depth),
        Grading::High => toward_zero(depth).iter().rev().map(|x| 1.0 - x).collect(),
        Grading::Both => {
            let half: Vec<f64> = toward_zero(depth.saturating_sub(1))
                .iter()
                .map(|x| 0.5 * x)
                .collect();
            let mut b = half.clone();
            b.extend(half.iter().rev().skip(1).map(|x| 1.0 - x));
            b
        }
    }
}

/// Grading depth ⌈log₂(length/√t)⌉ + 1, clamped to a sane range.
pub fn grading_depth(length: f64, t: f64) -> u32 {
    let d = (length / t.sqrt()).log2().ceil() + 1.0;
    d.clamp(1.0, 40.0) as u32
}

/// One parameter axis of a patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub grading: Grading,
    /// Physical length along the axis, used only to pick the grading depth.
    pub length: f64,
}

/// A smooth map from the unit cube onto part of a domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Patch {
    /// x = origin + diag(edges)·u.
    Box { origin: Vec<f64>, edges: Vec<f64> },
    /// Bilinear quadrilateral (v, m1, c, m2), optionally extruded in z.
    Kite {
        corners: [[f64; 2]; 4],
        height: Option<f64>,
    },
    /// Duffy map of the triangle (v0, v1, v2) from the collapsed square,
    /// optionally extruded in z.
    Collapsed {
        corners: [[f64; 2]; 3],
        height: Option<f64>,
    },
    /// Polar sector 0 < ρ < radius, 0 < φ < angle.
    Sector { radius: f64, angle: f64 },
    /// Sector × (0, height).
    CylinderSector { radius: f64, angle: f64, height: f64 },
}

fn norm2(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

impl Patch {
    pub fn dimension(&self) -> usize {
        match self {
            Patch::Box { origin, .. } => origin.len(),
            Patch::Kite { height, .. } | Patch::Collapsed { height, .. } => 2 + usize::from(height.is_some()),
            Patch::Sector { .. } => 2,
            Patch::CylinderSector { .. } => 3,
        }
    }

    pub fn axes(&self) -> Vec<Axis> {
        let both = |length| Axis {
            grading: Grading::Both,
            length,
        };
        let low = |length| Axis {
            grading: Grading::Low,
            length,
        };
        let mut axes = match self {
            Patch::Box { edges, .. } => edges.iter().map(|&e| both(e)).collect(),
            Patch::Kite { corners: [v, m1, _, m2], .. } => vec![low(norm2(*v, *m1)), low(norm2(*v, *m2))],
            Patch::Collapsed { corners: [v0, v1, v2], .. } => {
                vec![both(norm2(*v0, *v1).max(norm2(*v0, *v2))), both(norm2(*v1, *v2))]
            }
            Patch::Sector { radius, angle } => vec![low(*radius), both(radius * angle)],
            Patch::CylinderSector { radius, angle, height } => {
                vec![low(*radius), both(radius * angle), low(*height)]
            }
        };
        if let Patch::Kite { height: Some(h), .. } | Patch::Collapsed { height: Some(h), .. } = self {
            axes.push(both(*h));
        }
        axes
    }

    /// Physical point and Jacobian determinant at parameter `u`.
    pub fn map(&self, u: &[f64], x: &mut [f64]) -> f64 {
        match self {
            Patch::Box { origin, edges } => {
                let mut jac = 1.0;
                for i in 0..origin.len() {
                    x[i] = origin[i] + edges[i] * u[i];
                    jac *= edges[i];
                }
                jac
            }
            Patch::Kite { corners, height } => {
                let [v, m1, c, m2] = corners;
                let (s, r) = (u[0], u[1]);
                let w = [(1.0 - s) * (1.0 - r), s * (1.0 - r), s * r, (1.0 - s) * r];
                for k in 0..2 {
                    x[k] = w[0] * v[k] + w[1] * m1[k] + w[2] * c[k] + w[3] * m2[k];
                }
                let mut dxds = [0.0; 2];
                let mut dxdr = [0.0; 2];
                for k in 0..2 {
                    dxds[k] = (1.0 - r) * (m1[k] - v[k]) + r * (c[k] - m2[k]);
                    dxdr[k] = (1.0 - s) * (m2[k] - v[k]) + s * (c[k] - m1[k]);
                }
                let jac = (dxds[0] * dxdr[1] - dxds[1] * dxdr[0]).abs();
                extrude(jac, u, x, *height)
            }
            Patch::Collapsed { corners, height } => {
                let [v0, v1, v2] = corners;
                let (s, r) = (u[0], u[1]);
                for k in 0..2 {
                    x[k] = v0[k] + s * (v1[k] - v0[k]) + s * r * (v2[k] - v1[k]);
                }
                let det = (v1[0] - v0[0]) * (v2[1] - v1[1]) - (v1[1] - v0[1]) * (v2[0] - v1[0]);
                extrude(s * det.abs(), u, x, *height)
            }
            Patch::Sector { radius, angle } => {
                let rho = u[0] * radius;
                let phi = u[1] * angle;
                x[0] = rho * phi.cos();
                x[1] = rho * phi.sin();
                rho * radius * angle
            }
            Patch::CylinderSector { radius, angle, height } => {
                let rho = u[0] * radius;
                let phi = u[1] * angle;
                x[0] = rho * phi.cos();
                x[1] = rho * phi.sin();
                x[2] = u[2] * height;
                rho * radius * angle * height
            }
        }
    }
}

fn extrude(jac: f64, u: &[f64], x: &mut [f64], height: Option<f64>) -> f64 {
    match height {
        Some(h) => {
            x[2] = u[2] * h;
            jac * h
        }
        None => jac,
    }
}

/// Rule parameters shared by all cells of one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleSpec {
    pub points_per_axis: usize,
    pub subdivisions: usize,
    /// Boundary-layer width squared; sets the grading depth.
    pub t: f64,
}

/// Quadrature points of one cell, flattened.
#[derive(Debug, Clone)]
pub struct Cell {
    pub dimension: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    /// Mean of the cell's points.
    pub center: Vec<f64>,
    /// Largest distance from `center` to a point of the cell.
    pub radius: f64,
}

impl Cell {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dimension..(i + 1) * self.dimension]
    }
}

struct AxisCells {
    /// (nodes, weights) of each cell on [0, 1].
    cells: Vec<(Vec<f64>, Vec<f64>)>,
}

fn axis_cells(axis: &Axis, spec: &RuleSpec, gl: &(Vec<f64>, Vec<f64>)) -> AxisCells {
    let breaks = graded_breaks(axis.grading, grading_depth(axis.length, spec.t));
    let mut cells = Vec::new();
    for w in breaks.windows(2) {
        let h = (w[1] - w[0]) / spec.subdivisions as f64;
        for s in 0..spec.subdivisions {
            let a = w[0] + s as f64 * h;
            let nodes = gl.0.iter().map(|x| a + 0.5 * h * (x + 1.0)).collect();
            let weights = gl.1.iter().map(|w| 0.5 * h * w).collect();
            cells.push((nodes, weights));
        }
    }
    AxisCells { cells }
}

/// Cells of one patch, generated on demand.
struct PatchRule<'a> {
    patch: &'a Patch,
    axes: Vec<AxisCells>,
}

impl PatchRule<'_> {
    fn count(&self) -> usize {
        self.axes.iter().map(|a| a.cells.len()).product()
    }

    fn cell(&self, mut index: usize) -> Cell {
        let dim_u = self.axes.len();
        let mut pick = Vec::with_capacity(dim_u);
        for a in self.axes.iter().rev() {
            pick.push(&a.cells[index % a.cells.len()]);
            index /= a.cells.len();
        }
        pick.reverse();
        let n = self.patch.dimension();
        let per_axis: Vec<usize> = pick.iter().map(|c| c.0.len()).collect();
        let total: usize = per_axis.iter().product();
        let mut points = vec![0.0; total * n];
        let mut weights = vec![0.0; total];
        let mut u = vec![0.0; dim_u];
        let mut digits = vec![0usize; dim_u];
        for k in 0..total {
            let mut w = 1.0;
            for d in 0..dim_u {
                u[d] = pick[d].0[digits[d]];
                w *= pick[d].1[digits[d]];
            }
            let jac = self.patch.map(&u, &mut points[k * n..(k + 1) * n]);
            weights[k] = w * jac;
            for d in (0..dim_u).rev() {
                digits[d] += 1;
                if digits[d] < per_axis[d] {
                    break;
                }
                digits[d] = 0;
            }
        }
        let mut center = vec![0.0; n];
        for k in 0..total {
            for i in 0..n {
                center[i] += points[k * n + i];
            }
        }
        center.iter_mut().for_each(|c| *c /= total as f64);
        let radius = (0..total)
            .map(|k| {
                (0..n)
                    .map(|i| (points[k * n + i] - center[i]).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        Cell {
            dimension: n,
            points,
            weights,
            center,
            radius,
        }
    }
}

/// Total number of cells a rule produces on the given patches.
pub fn cell_count(patches: &[Patch], spec: &RuleSpec) -> usize {
    let gl = gauss_legendre(spec.points_per_axis);
    patches
        .iter()
        .map(|p| PatchRule {
            patch: p,
            axes: p.axes().iter().map(|a| axis_cells(a, spec, &gl)).collect(),
        })
        .map(|r| r.count())
        .sum()
}

/// Σ over cells of `f(cell)`, in parallel with a deterministic reduction.
pub fn integrate<F>(patches: &[Patch], spec: &RuleSpec, f: F) -> Result<f64>
where
    F: Fn(&Cell) -> f64 + Sync,
{
    if spec.points_per_axis < 2 {
        return Err(Error::InvalidParameter(format!(
            "points_per_axis must be at least 2, got {}",
            spec.points_per_axis
        )));
    }
    if spec.subdivisions == 0 {
        return Err(Error::InvalidParameter("subdivisions must be at least 1".into()));
    }
    let gl = gauss_legendre(spec.points_per_axis);
    let rules: Vec<PatchRule> = patches
        .iter()
        .map(|p| PatchRule {
            patch: p,
            axes: p.axes().iter().map(|a| axis_cells(a, spec, &gl)).collect(),
        })
        .collect();
    let index: Vec<(usize, usize)> = rules
        .iter()
        .enumerate()
        .flat_map(|(p, r)| (0..r.count()).map(move |c| (p, c)))
        .collect();
    let parts: Vec<f64> = index
        .par_iter()
        .map(|&(p, c)| f(&rules[p].cell(c)))
        .collect();
    Ok(pairwise_sum(&parts))
}

/// Plain weighted sum of a pointwise integrand over a cell.
pub fn cell_sum<G: Fn(&[f64]) -> f64>(cell: &Cell, g: G) -> f64 {
    let parts: Vec<f64> = (0..cell.len()).map(|i| cell.weights[i] * g(cell.point(i))).collect();
    pairwise_sum(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exactness() {
        for order in 2..=20 {
            let (x, w) = gauss_legendre(order);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            // Exact for degree 2·order − 1.
            for deg in 0..2 * order {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let want = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
                assert!((got - want).abs() < 1e-13, "order {order} degree {deg}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn breaks_are_graded() {
        assert_eq!(graded_breaks(Grading::Low, 3), vec![0.0, 0.125, 0.25, 0.5, 1.0]);
        assert_eq!(graded_breaks(Grading::High, 2), vec![0.0, 0.5, 0.75, 1.0]);
        assert_eq!(graded_breaks(Grading::Both, 3), vec![0.0, 0.125, 0.25, 0.5, 0.75, 0.875, 1.0]);
        assert_eq!(graded_breaks(Grading::None, 7), vec![0.0, 1.0]);
        assert_eq!(grading_depth(1.0, 0.01), 5);
    }

    fn spec() -> RuleSpec {
        RuleSpec {
            points_per_axis: 8,
            subdivisions: 1,
            t: 0.01,
        }
    }

    #[test]
    fn patch_areas() {
        let one = |c: &Cell| cell_sum(c, |_| 1.0);
        let tri = [[0.0, 0.0], [2.0, 0.0], [0.5, 1.5]];
        let area = 1.5;
        let cen = [(tri[0][0] + tri[1][0] + tri[2][0]) / 3.0, (tri[0][1] + tri[1][1] + tri[2][1]) / 3.0];
        let mid = |a: [f64; 2], b: [f64; 2]| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        let kites: Vec<Patch> = (0..3)
            .map(|i| Patch::Kite {
                corners: [tri[i], mid(tri[i], tri[(i + 1) % 3]), cen, mid(tri[i], tri[(i + 2) % 3])],
                height: None,
            })
            .collect();
        assert!((integrate(&kites, &spec(), one).unwrap() - area).abs() < 1e-13);
        let duffy = [Patch::Collapsed {
            corners: tri,
            height: Some(2.0),
        }];
        assert!((integrate(&duffy, &spec(), one).unwrap() - 2.0 * area).abs() < 1e-13);
        let sector = [Patch::Sector {
            radius: 2.0,
            angle: PI / 3.0,
        }];
        assert!((integrate(&sector, &spec(), one).unwrap() - 2.0 * PI / 3.0).abs() < 1e-13);
        let boxed = [Patch::Box {
            origin: vec![1.0, -1.0, 0.0],
            edges: vec![1.0, 2.0, 3.0],
        }];
        assert!((integrate(&boxed, &spec(), one).unwrap() - 6.0).abs() < 1e-13);
    }

    #[test]
    fn boundary_layer_integral() {
        // ∫₀¹ e^{−x²/t} dx = (√(πt)/2) erf(1/√t).
        let t = 1e-4;
        let rule = RuleSpec {
            points_per_axis: 10,
            subdivisions: 1,
            t,
        };
        let patch = [Patch::Box {
            origin: vec![0.0],
            edges: vec![1.0],
        }];
        let got = integrate(&patch, &rule, |c| cell_sum(c, |x| (-x[0] * x[0] / t).exp())).unwrap();
        let want = 0.5 * (PI * t).sqrt() * libm::erf(1.0 / t.sqrt());
        assert!((got - want).abs() < 1e-12 * want, "{got} vs {want}");
    }

    #[test]
    fn result_is_thread_count_independent() {
        let patch = [Patch::CylinderSector {
            radius: 1.0,
            angle: 1.0,
            height: 1.0,
        }];
        let f = |c: &Cell| cell_sum(c, |x| (x[0] * x[1] + x[2]).sin());
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| integrate(&patch, &spec(), f).unwrap());
        let b = four.install(|| integrate(&patch, &spec(), f).unwrap());
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn rejects_bad_rules() {
        let patch = [Patch::Sector { radius: 1.0, angle: 1.0 }];
        let mut r = spec();
        r.points_per_axis = 1;
        assert!(integrate(&patch, &r, |_| 0.0).is_err());
        let mut r = spec();
        r.subdivisions = 0;
        assert!(integrate(&patch, &r, |_| 0.0).is_err());
    }
}
