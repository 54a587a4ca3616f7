//! Catalogue of reflection-compatible domains in dimensions 1 to 3.
//!
//! Every domain is stored in a canonical pose: one vertex at the origin and
//! one face on a coordinate hyperplane. Walls are half-spaces
//! `{x : <normal, x> > offset}` with inward unit normals, so the open domain
//! is the intersection of their interiors.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};
use crate::reflgroup::Isometry;

/// Kinds of domain in the catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainKind {
    Interval,
    Wedge,
    Triangle,
    Rectangle,
    TrihedralWedge,
    TriangularPrism,
    Box,
    Hyperrectangle,
}

impl DomainKind {
    pub const ALL: [DomainKind; 8] = [
        DomainKind::Interval,
        DomainKind::Wedge,
        DomainKind::Triangle,
        DomainKind::Rectangle,
        DomainKind::TrihedralWedge,
        DomainKind::TriangularPrism,
        DomainKind::Box,
        DomainKind::Hyperrectangle,
    ];
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The three triangles that tile the plane by reflections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriangleShape {
    /// Angles (π/3, π/3, π/3); length parameter is the side.
    Equilateral,
    /// Angles (π/2, π/4, π/4); length parameter is a leg.
    IsoscelesRight,
    /// Angles (π/2, π/6, π/3); length parameter is the side opposite π/6.
    HalfEquilateral,
}

impl TriangleShape {
    pub const ALL: [TriangleShape; 3] = [
        TriangleShape::Equilateral,
        TriangleShape::IsoscelesRight,
        TriangleShape::HalfEquilateral,
    ];

    /// Looks up the triangle from its angle indices, in any order.
    pub fn from_indices(p: u32, q: u32, r: u32) -> Result<Self> {
        for idx in [p, q, r] {
            if idx < 2 {
                return Err(Error::InvalidParameter(format!(
                    "angle index {idx} must be at least 2"
                )));
            }
        }
        let mut s = [p, q, r];
        s.sort_unstable();
        match s {
            [3, 3, 3] => Ok(TriangleShape::Equilateral),
            [2, 4, 4] => Ok(TriangleShape::IsoscelesRight),
            [2, 3, 6] => Ok(TriangleShape::HalfEquilateral),
            _ => Err(Error::InadmissibleAngles { p, q, r }),
        }
    }

    /// Looks up the base triangle of a right prism from the prism's label,
    /// i.e. the sorted dihedral indices at a vertex of the prism's top face
    /// for the equilateral case: (2,2,3), (2,4,4), (2,3,6).
    pub fn from_prism_label(p: u32, q: u32, r: u32) -> Result<Self> {
        let mut s = [p, q, r];
        s.sort_unstable();
        match s {
            [2, 2, 3] | [3, 3, 3] => Ok(TriangleShape::Equilateral),
            [2, 4, 4] => Ok(TriangleShape::IsoscelesRight),
            [2, 3, 6] => Ok(TriangleShape::HalfEquilateral),
            _ => Err(Error::UnknownKind(format!("prism ({p},{q},{r})"))),
        }
    }

    /// Angle indices in vertex order; the interior angle at vertex i is π/indices[i].
    pub fn indices(self) -> [u32; 3] {
        match self {
            TriangleShape::Equilateral => [3, 3, 3],
            TriangleShape::IsoscelesRight => [2, 4, 4],
            TriangleShape::HalfEquilateral => [2, 6, 3],
        }
    }

    pub fn prism_label(self) -> [u32; 3] {
        match self {
            TriangleShape::Equilateral => [2, 2, 3],
            TriangleShape::IsoscelesRight => [2, 4, 4],
            TriangleShape::HalfEquilateral => [2, 3, 6],
        }
    }

    /// Counter-clockwise vertices for the length parameter `a`.
    pub fn vertices(self, a: f64) -> [[f64; 2]; 3] {
        let s3 = 3f64.sqrt();
        match self {
            TriangleShape::Equilateral => [[0.0, 0.0], [a, 0.0], [0.5 * a, 0.5 * s3 * a]],
            TriangleShape::IsoscelesRight => [[0.0, 0.0], [a, 0.0], [0.0, a]],
            TriangleShape::HalfEquilateral => [[0.0, 0.0], [s3 * a, 0.0], [0.0, a]],
        }
    }

    fn area(self, a: f64) -> f64 {
        match self {
            TriangleShape::Equilateral => 3f64.sqrt() * a * a / 4.0,
            TriangleShape::IsoscelesRight => a * a / 2.0,
            TriangleShape::HalfEquilateral => 3f64.sqrt() * a * a / 2.0,
        }
    }

    /// Side lengths, side i running from vertex i to vertex i+1.
    fn sides(self, a: f64) -> [f64; 3] {
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        match self {
            TriangleShape::Equilateral => [a, a, a],
            TriangleShape::IsoscelesRight => [a, s2 * a, a],
            TriangleShape::HalfEquilateral => [s3 * a, 2.0 * a, a],
        }
    }

    fn slug(self) -> &'static str {
        match self {
            TriangleShape::Equilateral => "333",
            TriangleShape::IsoscelesRight => "244",
            TriangleShape::HalfEquilateral => "236",
        }
    }
}

/// Kind-specific parameters of a domain. Lengths are positive reals in a
/// common unit; angle indices are integers.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Interval { length: f64 },
    Wedge { m: u32, radius: f64 },
    Triangle { shape: TriangleShape, side: f64 },
    Rectangle { a: f64, b: f64 },
    TrihedralWedge { p: u32, q: u32, r: u32, radius: f64 },
    TriangularPrism { base: TriangleShape, a: f64, c: f64 },
    Box { a: f64, b: f64, c: f64 },
    Hyperrectangle { edges: Vec<f64> },
}

/// Loosely typed parameter bag, as read from a JSON domain spec.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainParams {
    #[serde(rename = "L", alias = "length", default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(rename = "R", alias = "radius", default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<f64>>,
}

/// JSON document `{"kind": ..., "params": {...}}` describing a domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub kind: DomainKind,
    #[serde(default)]
    pub params: DomainParams,
}

impl DomainSpec {
    pub fn build(&self) -> Result<DomainDescriptor> {
        make_domain(self.kind, &self.params)
    }
}

/// A mirror bounding the domain: the open domain lies on the side where
/// `<normal, x> > offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wall {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Wall {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        let norm = normal.iter().map(|v| v * v).sum::<f64>().sqrt();
        Wall {
            normal: normal.iter().map(|v| v / norm).collect(),
            offset: offset / norm,
        }
    }

    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    /// Affine reflection through the wall's hyperplane.
    pub fn reflection(&self) -> Isometry {
        Isometry::affine_reflection(&self.normal, self.offset)
    }
}

/// A tessellation-compatible domain with its walls and vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainDescriptor {
    shape: Shape,
    vertices: Vec<Vec<f64>>,
    walls: Vec<Wall>,
}

/// Exact measures of a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricMeasures {
    /// n-dimensional volume; infinite for wedges.
    pub volume: f64,
    /// (n-1)-dimensional boundary measure; for an interval, the number of endpoints.
    pub boundary_measure: f64,
    /// Edge lengths (3D only).
    pub edge_lengths: Vec<f64>,
    /// Interior dihedral angle along each edge, parallel to `edge_lengths`.
    pub edge_angles: Vec<f64>,
    /// Interior angles at the vertices (2D only).
    pub vertex_angles: Vec<f64>,
    /// Sorted dihedral angle indices (p, q, r) at each vertex (3D only).
    pub vertex_trihedra: Vec<[u32; 3]>,
}

/// Is (p, q, r) the angle-index triple of a plane-tiling triangle?
pub fn admissible_triangle(p: u32, q: u32, r: u32) -> Result<bool> {
    check_indices(p, q, r)?;
    let (p, q, r) = (p as u64, q as u64, r as u64);
    Ok(q * r + p * r + p * q == p * q * r)
}

/// Does the trihedral angle (π/p, π/q, π/r) satisfy π/p + π/q + π/r > π?
pub fn admissible_trihedral(p: u32, q: u32, r: u32) -> Result<bool> {
    check_indices(p, q, r)?;
    let (p, q, r) = (p as u64, q as u64, r as u64);
    Ok(q * r + p * r + p * q > p * q * r)
}

fn check_indices(p: u32, q: u32, r: u32) -> Result<()> {
    for idx in [p, q, r] {
        if idx < 2 {
            return Err(Error::InvalidParameter(format!(
                "angle index {idx} must be at least 2"
            )));
        }
    }
    Ok(())
}

fn require_f(name: &str, v: Option<f64>) -> Result<f64> {
    let v = v.ok_or_else(|| Error::InvalidParameter(format!("missing parameter {name}")))?;
    check_positive(name, v)?;
    Ok(v)
}

fn require_u(name: &str, v: Option<u32>) -> Result<u32> {
    v.ok_or_else(|| Error::InvalidParameter(format!("missing parameter {name}")))
}

/// Builds a catalogue domain from loosely typed parameters.
pub fn make_domain(kind: DomainKind, params: &DomainParams) -> Result<DomainDescriptor> {
    let shape = match kind {
        DomainKind::Interval => Shape::Interval {
            length: require_f("L", params.length.or(params.a))?,
        },
        DomainKind::Wedge => Shape::Wedge {
            m: require_u("m", params.m)?,
            radius: params.radius.unwrap_or(1.0),
        },
        DomainKind::Triangle => {
            let shape = TriangleShape::from_indices(
                require_u("p", params.p)?,
                require_u("q", params.q)?,
                require_u("r", params.r)?,
            )?;
            Shape::Triangle {
                shape,
                side: require_f("a", params.a.or(params.length))?,
            }
        }
        DomainKind::Rectangle => Shape::Rectangle {
            a: require_f("a", params.a)?,
            b: require_f("b", params.b)?,
        },
        DomainKind::TrihedralWedge => Shape::TrihedralWedge {
            p: require_u("p", params.p)?,
            q: require_u("q", params.q)?,
            r: require_u("r", params.r)?,
            radius: params.radius.unwrap_or(1.0),
        },
        DomainKind::TriangularPrism => {
            let (p, q, r) = (
                require_u("p", params.p)?,
                require_u("q", params.q)?,
                require_u("r", params.r)?,
            );
            check_indices(p, q, r)?;
            Shape::TriangularPrism {
                base: TriangleShape::from_prism_label(p, q, r)?,
                a: require_f("a", params.a.or(params.length))?,
                c: require_f("c", params.c)?,
            }
        }
        DomainKind::Box => Shape::Box {
            a: require_f("a", params.a)?,
            b: require_f("b", params.b)?,
            c: require_f("c", params.c)?,
        },
        DomainKind::Hyperrectangle => Shape::Hyperrectangle {
            edges: params
                .edges
                .clone()
                .ok_or_else(|| Error::InvalidParameter("missing parameter edges".into()))?,
        },
    };
    DomainDescriptor::new(shape)
}

impl DomainDescriptor {
    pub fn new(shape: Shape) -> Result<Self> {
        validate(&shape)?;
        let (vertices, walls) = build_pose(&shape);
        Ok(DomainDescriptor {
            shape,
            vertices,
            walls,
        })
    }

    pub fn interval(length: f64) -> Result<Self> {
        Self::new(Shape::Interval { length })
    }

    pub fn wedge(m: u32) -> Result<Self> {
        Self::new(Shape::Wedge { m, radius: 1.0 })
    }

    pub fn triangle(p: u32, q: u32, r: u32, side: f64) -> Result<Self> {
        Self::new(Shape::Triangle {
            shape: TriangleShape::from_indices(p, q, r)?,
            side,
        })
    }

    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        Self::new(Shape::Rectangle { a, b })
    }

    pub fn trihedral_wedge(p: u32, q: u32, r: u32) -> Result<Self> {
        Self::new(Shape::TrihedralWedge {
            p,
            q,
            r,
            radius: 1.0,
        })
    }

    pub fn prism(base: TriangleShape, a: f64, c: f64) -> Result<Self> {
        Self::new(Shape::TriangularPrism { base, a, c })
    }

    pub fn cuboid(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(Shape::Box { a, b, c })
    }

    pub fn hyperrectangle(edges: Vec<f64>) -> Result<Self> {
        Self::new(Shape::Hyperrectangle { edges })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn kind(&self) -> DomainKind {
        match self.shape {
            Shape::Interval { .. } => DomainKind::Interval,
            Shape::Wedge { .. } => DomainKind::Wedge,
            Shape::Triangle { .. } => DomainKind::Triangle,
            Shape::Rectangle { .. } => DomainKind::Rectangle,
            Shape::TrihedralWedge { .. } => DomainKind::TrihedralWedge,
            Shape::TriangularPrism { .. } => DomainKind::TriangularPrism,
            Shape::Box { .. } => DomainKind::Box,
            Shape::Hyperrectangle { .. } => DomainKind::Hyperrectangle,
        }
    }

    pub fn dimension(&self) -> usize {
        match &self.shape {
            Shape::Interval { .. } => 1,
            Shape::Wedge { .. } | Shape::Triangle { .. } | Shape::Rectangle { .. } => 2,
            Shape::TrihedralWedge { .. } | Shape::TriangularPrism { .. } | Shape::Box { .. } => 3,
            Shape::Hyperrectangle { edges } => edges.len(),
        }
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(
            self.shape,
            Shape::Wedge { .. } | Shape::TrihedralWedge { .. }
        )
    }

    /// Truncation radius of a wedge (used only for numeric integration).
    pub fn truncation_radius(&self) -> Option<f64> {
        match self.shape {
            Shape::Wedge { radius, .. } | Shape::TrihedralWedge { radius, .. } => Some(radius),
            _ => None,
        }
    }

    /// Largest distance between two vertices; infinite for wedges.
    pub fn diameter(&self) -> f64 {
        if !self.is_bounded() {
            return f64::INFINITY;
        }
        let mut d: f64 = 0.0;
        for (i, u) in self.vertices.iter().enumerate() {
            for v in &self.vertices[i + 1..] {
                d = d.max(distance(u, v));
            }
        }
        d
    }

    /// A fixed interior point, used to label copies of the domain.
    pub fn reference_point(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Wedge { m, radius } => {
                let half = PI / (2.0 * *m as f64);
                vec![0.5 * radius * half.cos(), 0.5 * radius * half.sin()]
            }
            Shape::TrihedralWedge { radius, .. } => {
                // Solve <n_i, x> = 1 for all three walls, then rescale.
                let n: Vec<&Vec<f64>> = self.walls.iter().map(|w| &w.normal).collect();
                let m = nalgebra::Matrix3::from_fn(|i, j| n[i][j]);
                let x = m
                    .try_inverse()
                    .expect("trihedral walls are independent")
                    * nalgebra::Vector3::new(1.0, 1.0, 1.0);
                let x = x * (0.5 * radius / x.norm());
                vec![x[0], x[1], x[2]]
            }
            _ => {
                let n = self.dimension();
                let mut c = vec![0.0; n];
                for v in &self.vertices {
                    for (ci, vi) in c.iter_mut().zip(v) {
                        *ci += vi;
                    }
                }
                let k = self.vertices.len() as f64;
                c.iter_mut().for_each(|ci| *ci /= k);
                c
            }
        }
    }

    /// Largest distance from the reference point to a vertex.
    pub fn reference_radius(&self) -> f64 {
        if !self.is_bounded() {
            return f64::INFINITY;
        }
        let c = self.reference_point();
        self.vertices
            .iter()
            .map(|v| distance(v, &c))
            .fold(0.0, f64::max)
    }

    /// Open-domain membership; boundary points are outside.
    pub fn contains(&self, point: &[f64]) -> Result<bool> {
        if point.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: point.len(),
            });
        }
        Ok(self.walls.iter().all(|w| w.signed_distance(point) > 0.0))
    }

    /// Smallest distance from an interior point to the walls.
    pub fn wall_distance(&self, point: &[f64]) -> f64 {
        self.walls
            .iter()
            .map(|w| w.signed_distance(point))
            .fold(f64::INFINITY, f64::min)
    }

    /// The same domain with every length multiplied by `rho`.
    pub fn scaled(&self, rho: f64) -> Result<Self> {
        check_positive("scale factor", rho)?;
        let shape = match &self.shape {
            Shape::Interval { length } => Shape::Interval {
                length: length * rho,
            },
            Shape::Wedge { m, radius } => Shape::Wedge {
                m: *m,
                radius: radius * rho,
            },
            Shape::Triangle { shape, side } => Shape::Triangle {
                shape: *shape,
                side: side * rho,
            },
            Shape::Rectangle { a, b } => Shape::Rectangle {
                a: a * rho,
                b: b * rho,
            },
            Shape::TrihedralWedge { p, q, r, radius } => Shape::TrihedralWedge {
                p: *p,
                q: *q,
                r: *r,
                radius: radius * rho,
            },
            Shape::TriangularPrism { base, a, c } => Shape::TriangularPrism {
                base: *base,
                a: a * rho,
                c: c * rho,
            },
            Shape::Box { a, b, c } => Shape::Box {
                a: a * rho,
                b: b * rho,
                c: c * rho,
            },
            Shape::Hyperrectangle { edges } => Shape::Hyperrectangle {
                edges: edges.iter().map(|e| e * rho).collect(),
            },
        };
        Self::new(shape)
    }

    /// Short human-readable label, e.g. `triangle-333(a=1)`.
    pub fn label(&self) -> String {
        match &self.shape {
            Shape::Interval { length } => format!("interval(L={length})"),
            Shape::Wedge { m, radius } => format!("wedge(m={m},R={radius})"),
            Shape::Triangle { shape, side } => format!("triangle-{}(a={side})", shape.slug()),
            Shape::Rectangle { a, b } => format!("rectangle(a={a},b={b})"),
            Shape::TrihedralWedge { p, q, r, radius } => {
                format!("trihedral({p},{q},{r},R={radius})")
            }
            Shape::TriangularPrism { base, a, c } => {
                let [p, q, r] = base.prism_label();
                format!("prism-{p}{q}{r}(a={a},c={c})")
            }
            Shape::Box { a, b, c } => format!("box(a={a},b={b},c={c})"),
            Shape::Hyperrectangle { edges } => format!("hyperrectangle{edges:?}"),
        }
    }

    /// Axis-aligned edge lengths when the domain is a box in canonical pose.
    pub fn box_edges(&self) -> Option<Vec<f64>> {
        match &self.shape {
            Shape::Interval { length } => Some(vec![*length]),
            Shape::Rectangle { a, b } => Some(vec![*a, *b]),
            Shape::Box { a, b, c } => Some(vec![*a, *b, *c]),
            Shape::Hyperrectangle { edges } => Some(edges.clone()),
            _ => None,
        }
    }
}

/// Exact closed-form measures of a domain.
pub fn measures(domain: &DomainDescriptor) -> GeometricMeasures {
    let mut out = GeometricMeasures {
        volume: 0.0,
        boundary_measure: 0.0,
        edge_lengths: Vec::new(),
        edge_angles: Vec::new(),
        vertex_angles: Vec::new(),
        vertex_trihedra: Vec::new(),
    };
    match domain.shape() {
        Shape::Interval { length } => {
            out.volume = *length;
            out.boundary_measure = 2.0;
        }
        Shape::Wedge { m, .. } => {
            out.volume = f64::INFINITY;
            out.boundary_measure = f64::INFINITY;
            out.vertex_angles = vec![PI / *m as f64];
        }
        Shape::Triangle { shape, side } => {
            out.volume = shape.area(*side);
            out.boundary_measure = shape.sides(*side).iter().sum();
            out.vertex_angles = shape.indices().iter().map(|&k| PI / k as f64).collect();
        }
        Shape::Rectangle { a, b } => {
            out.volume = a * b;
            out.boundary_measure = 2.0 * (a + b);
            out.vertex_angles = vec![PI / 2.0; 4];
        }
        Shape::TrihedralWedge { p, q, r, .. } => {
            out.volume = f64::INFINITY;
            out.boundary_measure = f64::INFINITY;
            out.edge_lengths = vec![f64::INFINITY; 3];
            out.edge_angles = [p, q, r].iter().map(|&&k| PI / k as f64).collect();
            let mut t = [*p, *q, *r];
            t.sort_unstable();
            out.vertex_trihedra = vec![t];
        }
        Shape::TriangularPrism { base, a, c } => {
            let area = base.area(*a);
            let sides = base.sides(*a);
            let perimeter: f64 = sides.iter().sum();
            out.volume = area * c;
            out.boundary_measure = 2.0 * area + perimeter * c;
            for _ in 0..2 {
                out.edge_lengths.extend_from_slice(&sides);
                out.edge_angles.extend_from_slice(&[PI / 2.0; 3]);
            }
            for k in base.indices() {
                out.edge_lengths.push(*c);
                out.edge_angles.push(PI / k as f64);
            }
            for _ in 0..2 {
                for k in base.indices() {
                    let mut t = [2, 2, k];
                    t.sort_unstable();
                    out.vertex_trihedra.push(t);
                }
            }
        }
        Shape::Box { a, b, c } => fill_box(&mut out, &[*a, *b, *c]),
        Shape::Hyperrectangle { edges } => fill_box(&mut out, edges),
    }
    out
}

fn fill_box(out: &mut GeometricMeasures, edges: &[f64]) {
    let n = edges.len();
    out.volume = edges.iter().product();
    out.boundary_measure = if n == 1 {
        2.0
    } else {
        (0..n)
            .map(|i| {
                2.0 * edges
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, e)| e)
                    .product::<f64>()
            })
            .sum()
    };
    match n {
        2 => out.vertex_angles = vec![PI / 2.0; 4],
        3 => {
            for e in edges {
                out.edge_lengths.extend_from_slice(&[*e; 4]);
                out.edge_angles.extend_from_slice(&[PI / 2.0; 4]);
            }
            out.vertex_trihedra = vec![[2, 2, 2]; 8];
        }
        _ => {}
    }
}

fn validate(shape: &Shape) -> Result<()> {
    match shape {
        Shape::Interval { length } => check_positive("L", *length),
        Shape::Wedge { m, radius } => {
            if *m < 2 {
                return Err(Error::InvalidParameter(format!("wedge index m={m} < 2")));
            }
            check_positive("R", *radius)
        }
        Shape::Triangle { side, .. } => check_positive("a", *side),
        Shape::Rectangle { a, b } => {
            check_positive("a", *a)?;
            check_positive("b", *b)
        }
        Shape::TrihedralWedge { p, q, r, radius } => {
            if !admissible_trihedral(*p, *q, *r)? {
                return Err(Error::InadmissibleAngles {
                    p: *p,
                    q: *q,
                    r: *r,
                });
            }
            check_positive("R", *radius)
        }
        Shape::TriangularPrism { a, c, .. } => {
            check_positive("a", *a)?;
            check_positive("c", *c)
        }
        Shape::Box { a, b, c } => {
            check_positive("a", *a)?;
            check_positive("b", *b)?;
            check_positive("c", *c)
        }
        Shape::Hyperrectangle { edges } => {
            if edges.is_empty() {
                return Err(Error::InvalidParameter("hyperrectangle needs n >= 1".into()));
            }
            edges.iter().try_for_each(|e| check_positive("edge", *e))
        }
    }
}

fn build_pose(shape: &Shape) -> (Vec<Vec<f64>>, Vec<Wall>) {
    match shape {
        Shape::Interval { length } => box_pose(&[*length]),
        Shape::Rectangle { a, b } => box_pose(&[*a, *b]),
        Shape::Box { a, b, c } => box_pose(&[*a, *b, *c]),
        Shape::Hyperrectangle { edges } => box_pose(edges),
        Shape::Wedge { m, .. } => {
            let theta = PI / *m as f64;
            let walls = vec![
                Wall::new(vec![0.0, 1.0], 0.0),
                Wall::new(vec![theta.sin(), -theta.cos()], 0.0),
            ];
            (vec![vec![0.0, 0.0]], walls)
        }
        Shape::Triangle { shape, side } => {
            let v = shape.vertices(*side);
            let walls = (0..3)
                .map(|i| polygon_wall(v[i], v[(i + 1) % 3]))
                .collect();
            (v.iter().map(|p| p.to_vec()).collect(), walls)
        }
        Shape::TriangularPrism { base, a, c } => {
            let v = base.vertices(*a);
            let mut walls: Vec<Wall> = (0..3)
                .map(|i| {
                    let w = polygon_wall(v[i], v[(i + 1) % 3]);
                    Wall::new(vec![w.normal[0], w.normal[1], 0.0], w.offset)
                })
                .collect();
            walls.push(Wall::new(vec![0.0, 0.0, 1.0], 0.0));
            walls.push(Wall::new(vec![0.0, 0.0, -1.0], -c));
            let mut verts: Vec<Vec<f64>> = v.iter().map(|p| vec![p[0], p[1], 0.0]).collect();
            verts.extend(v.iter().map(|p| vec![p[0], p[1], *c]));
            (verts, walls)
        }
        Shape::TrihedralWedge { p, q, r, .. } => {
            let normals = trihedral_normals(*p, *q, *r);
            let walls = normals
                .iter()
                .map(|n| Wall::new(n.to_vec(), 0.0))
                .collect();
            (vec![vec![0.0; 3]], walls)
        }
    }
}

/// Inward unit normals of a trihedral chamber with pairwise dihedral angles
/// (θ12, θ23, θ31) = (π/p, π/q, π/r), normals satisfying
/// `<n_i, n_j> = -cos θ_ij`.
pub(crate) fn trihedral_normals(p: u32, q: u32, r: u32) -> [[f64; 3]; 3] {
    let t12 = PI / p as f64;
    let t23 = PI / q as f64;
    let t31 = PI / r as f64;
    let n3 = [0.0, 0.0, 1.0];
    let n2 = [0.0, t23.sin(), -t23.cos()];
    let z = -t31.cos();
    let y = (-t12.cos() - t31.cos() * t23.cos()) / t23.sin();
    let x = (1.0 - y * y - z * z).max(0.0).sqrt();
    [[x, y, z], n2, n3]
}

fn polygon_wall(from: [f64; 2], to: [f64; 2]) -> Wall {
    // Left normal of a counter-clockwise edge points inward.
    let normal = vec![-(to[1] - from[1]), to[0] - from[0]];
    let offset = normal[0] * from[0] + normal[1] * from[1];
    Wall::new(normal, offset)
}

fn box_pose(edges: &[f64]) -> (Vec<Vec<f64>>, Vec<Wall>) {
    let n = edges.len();
    let mut walls = Vec::with_capacity(2 * n);
    for (i, e) in edges.iter().enumerate() {
        let mut lo = vec![0.0; n];
        lo[i] = 1.0;
        let mut hi = vec![0.0; n];
        hi[i] = -1.0;
        walls.push(Wall::new(lo, 0.0));
        walls.push(Wall::new(hi, -e));
    }
    let count = 1usize << n.min(20);
    let vertices = (0..count)
        .map(|mask| {
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { edges[i] } else { 0.0 })
                .collect()
        })
        .collect();
    (vertices, walls)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
