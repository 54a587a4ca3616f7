//! Closed-form short-time expansions of the heat trace and the exact sums
//! and integrals behind their constant terms.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{check_positive, check_time, Error, Result};
use crate::geometry::{measures, DomainDescriptor, Shape, TriangleShape};
use crate::numeric::{elementary_symmetric, erf, format_rational};

/// L/(2√(πt)) − 1/2.
pub fn interval_asympt(length: f64, t: f64) -> Result<f64> {
    check_positive("length", length)?;
    check_time(t).map_err(|_| Error::InvalidParameter(format!("t must be positive, got {t}")))?;
    Ok(length / (2.0 * (PI * t).sqrt()) - 0.5)
}

/// Constant-term contribution (π² − φ²)/(24πφ) of a vertex with interior angle φ.
pub fn corner_term(phi: f64) -> Result<f64> {
    if !(phi > 0.0 && phi < 2.0 * PI) {
        return Err(Error::InvalidParameter(format!("angle must lie in (0, 2π), got {phi}")));
    }
    Ok((PI * PI - phi * phi) / (24.0 * PI * phi))
}

/// The polygon constant written through the vertex curvatures k = π − φ.
pub fn corner_term_curvature(angles: &[f64]) -> Result<f64> {
    if angles.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "a polygon needs at least 3 angles, got {}",
            angles.len()
        )));
    }
    let sum: f64 = angles.iter().map(|phi| PI - phi).sum();
    if (sum - 2.0 * PI).abs() > 1e-9 {
        return Err(Error::NotClosedPolygon { sum });
    }
    let n = angles.len() as f64;
    let s: f64 = angles.iter().map(|phi| 1.0 / (PI - (PI - phi))).sum();
    Ok(-(n - 2.0) / 24.0 + PI / 24.0 * s)
}

/// (m² − 1)/(24m): the wedge of angle π/m.
pub fn wedge_constant(m: u32) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("wedge index must be at least 2, got {m}")));
    }
    let m = m as f64;
    Ok((m * m - 1.0) / (24.0 * m))
}

/// −(r² − 1)/(96r): the (2,2,r) trihedral vertex.
pub fn trihedral_constant(r: u32) -> Result<f64> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("trihedral index must be at least 2, got {r}")));
    }
    let r = r as f64;
    Ok(-(r * r - 1.0) / (96.0 * r))
}

/// Short-time expansion Σ c_k t^(k/2), k = −n..0.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticExpansion {
    pub dimension: usize,
    /// Keyed by k, the power of t being k/2.
    pub coefficients: BTreeMap<i32, f64>,
    pub domain_label: String,
}

impl AsymptoticExpansion {
    fn new(dimension: usize, label: String, coefficients: &[(i32, f64)]) -> Self {
        AsymptoticExpansion {
            dimension,
            coefficients: coefficients.iter().copied().collect(),
            domain_label: label,
        }
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self
            .coefficients
            .iter()
            .map(|(&k, &c)| c * t.powf(k as f64 / 2.0))
            .sum())
    }

    pub fn coefficient(&self, k: i32) -> f64 {
        self.coefficients.get(&k).copied().unwrap_or(0.0)
    }

    pub fn leading(&self) -> f64 {
        self.coefficient(-(self.dimension as i32))
    }

    pub fn constant(&self) -> f64 {
        self.coefficient(0)
    }

    /// evaluate(t) minus the constant term.
    pub fn singular_part(&self, t: f64) -> Result<f64> {
        Ok(self.evaluate(t)? - self.constant())
    }
}

fn power_label(k: i32) -> String {
    if k % 2 == 0 {
        format!("t^({})", k / 2).replace('-', "−")
    } else {
        format!("t^({k}/2)").replace('-', "−")
    }
}

impl fmt::Display for AsymptoticExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&k, &c) in &self.coefficients {
            let body = if k == 0 {
                format_rational(c.abs()).unwrap_or_else(|| format!("{:.12}", c.abs()))
            } else {
                format!("{:.12}·{}", c.abs(), power_label(k))
            };
            match (first, c < 0.0) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "−{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " − {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Expansion of Z_Ω(t) for a bounded catalogue domain.
pub fn expansion(domain: &DomainDescriptor) -> Result<AsymptoticExpansion> {
    if !domain.is_bounded() {
        return Err(Error::UnboundedDomain);
    }
    let label = domain.label();
    let g = measures(domain);
    let sqrt_pi = PI.sqrt();
    let out = match domain.shape() {
        Shape::Interval { length } => {
            AsymptoticExpansion::new(1, label, &[(-1, length / (2.0 * sqrt_pi)), (0, -0.5)])
        }
        Shape::Triangle { .. } | Shape::Rectangle { .. } => {
            let constant = g
                .vertex_angles
                .iter()
                .map(|&phi| corner_term(phi))
                .sum::<Result<f64>>()?;
            AsymptoticExpansion::new(
                2,
                label,
                &[
                    (-2, g.volume / (4.0 * PI)),
                    (-1, -g.boundary_measure / (8.0 * sqrt_pi)),
                    (0, constant),
                ],
            )
        }
        Shape::Box { .. } | Shape::TriangularPrism { .. } => {
            let mut edge = 0.0;
            for (l, phi) in g.edge_lengths.iter().zip(&g.edge_angles) {
                edge += l * corner_term(*phi)?;
            }
            let constant = g
                .vertex_trihedra
                .iter()
                .map(|v| trihedral_constant(v[2]))
                .sum::<Result<f64>>()?;
            AsymptoticExpansion::new(
                3,
                label,
                &[
                    (-3, g.volume / (4.0 * PI).powf(1.5)),
                    (-2, -g.boundary_measure / (16.0 * PI)),
                    (-1, edge / (2.0 * sqrt_pi)),
                    (0, constant),
                ],
            )
        }
        Shape::Hyperrectangle { edges } => hyperrectangle_expansion(edges, label)?,
        Shape::Wedge { .. } | Shape::TrihedralWedge { .. } => return Err(Error::UnboundedDomain),
    };
    Ok(out)
}

fn hyperrectangle_expansion(edges: &[f64], label: String) -> Result<AsymptoticExpansion> {
    if edges.is_empty() {
        return Err(Error::InvalidParameter("need at least one edge".into()));
    }
    edges.iter().try_for_each(|e| check_positive("edge", *e))?;
    let n = edges.len();
    let e = elementary_symmetric(edges);
    let coefficients: Vec<(i32, f64)> = (0..=n)
        .map(|m| {
            let c = (0.5 / PI.sqrt()).powi(m as i32) * (-0.5f64).powi((n - m) as i32) * e[m];
            (-(m as i32), c)
        })
        .collect();
    Ok(AsymptoticExpansion::new(n, label, &coefficients))
}

/// The t⁰ coefficient of the expansion.
pub fn topological_constant(domain: &DomainDescriptor) -> Result<f64> {
    expansion(domain).map(|e| e.constant())
}

/// Three-term polygon expansion from area, perimeter and corner terms.
pub fn polygon_asympt(domain: &DomainDescriptor, t: f64) -> Result<f64> {
    if domain.dimension() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: domain.dimension(),
        });
    }
    expansion(domain)?.evaluate(t)
}

/// Σ_m (1/(2√(πt)))^m (−1/2)^(n−m) e_m(edges).
pub fn hyperrectangle_asympt(edges: &[f64], t: f64) -> Result<f64> {
    check_time(t).map_err(|_| Error::InvalidParameter(format!("t must be positive, got {t}")))?;
    hyperrectangle_expansion(edges, String::new())?.evaluate(t)
}

/// Expansion of the triangular prism with base label (2,2,3), (2,4,4) or
/// (2,3,6), base size `a` and height `c`.
pub fn prism_asympt(label: [u32; 3], a: f64, c: f64, t: f64) -> Result<f64> {
    let base = TriangleShape::from_prism_label(label[0], label[1], label[2])?;
    check_time(t).map_err(|_| Error::InvalidParameter(format!("t must be positive, got {t}")))?;
    expansion(&DomainDescriptor::prism(base, a, c)?)?.evaluate(t)
}

/// One entry of the per-vertex box table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxContribution {
    pub element: &'static str,
    pub value: f64,
}

/// Contributions of the non-identity elements of a vertex group of the box,
/// integrated over the octant [0,a/2]×[0,b/2]×[0,c/2].
pub fn box_contribution_table(a: f64, b: f64, c: f64, t: f64) -> Result<[BoxContribution; 7]> {
    for (name, v) in [("a", a), ("b", b), ("c", c), ("t", t)] {
        check_positive(name, v)?;
    }
    let s = 2.0 * t.sqrt();
    let (ea, eb, ec) = (erf(a / s), erf(b / s), erf(c / s));
    let refl = 64.0 * PI * t;
    let rot = 64.0 * (PI * t).sqrt();
    let entry = |element, value| BoxContribution { element, value };
    Ok([
        entry("R_a1", -(b * c) / refl * ea),
        entry("R_a2", -(a * c) / refl * eb),
        entry("R_a3", -(a * b) / refl * ec),
        entry("R_a1·R_a2", c / rot * ea * eb),
        entry("R_a2·R_a3", a / rot * eb * ec),
        entry("R_a3·R_a1", b / rot * ec * ea),
        entry("R_a1·R_a2·R_a3", -ea * eb * ec / 64.0),
    ])
}

/// Identity term plus eight copies of the box table.
pub fn box_table_total(a: f64, b: f64, c: f64, t: f64) -> Result<f64> {
    let table = box_contribution_table(a, b, c, t)?;
    let identity = a * b * c / (4.0 * PI * t).powf(1.5);
    Ok(identity + 8.0 * table.iter().map(|e| e.value).sum::<f64>())
}

/// A numerically summed identity next to its closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub numeric: f64,
    pub closed_form: f64,
}

impl IdentityCheck {
    pub fn relative_error(&self) -> f64 {
        let scale = self.closed_form.abs().max(f64::MIN_POSITIVE);
        if self.closed_form == 0.0 {
            self.numeric.abs()
        } else {
            (self.numeric - self.closed_form).abs() / scale
        }
    }
}

fn check_index(m: u32) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidParameter(format!("index must be at least 2, got {m}")))
    } else {
        Ok(())
    }
}

/// Σ_{k=1}^{m−1} 1/sin²(kπ/m) against (m² − 1)/3.
pub fn sin2_inverse_sum(m: u32) -> Result<IdentityCheck> {
    check_index(m)?;
    let numeric = (1..m)
        .map(|k| (k as f64 * PI / m as f64).sin().powi(-2))
        .sum();
    let mf = m as f64;
    Ok(IdentityCheck {
        numeric,
        closed_form: (mf * mf - 1.0) / 3.0,
    })
}

/// Σ_{k=1}^{m−1} cot²(kπ/m) against (m − 1)(m − 2)/3.
pub fn cot2_sum(m: u32) -> Result<IdentityCheck> {
    check_index(m)?;
    let numeric = (1..m)
        .map(|k| {
            let x = k as f64 * PI / m as f64;
            (x.cos() / x.sin()).powi(2)
        })
        .sum();
    let mf = m as f64;
    Ok(IdentityCheck {
        numeric,
        closed_form: (mf - 1.0) * (mf - 2.0) / 3.0,
    })
}

/// |Σ 1/sin² − (m − 1) − Σ cot²|, from 1/sin² = 1 + cot² termwise.
pub fn sin_cot_decomposition_defect(m: u32) -> Result<f64> {
    let s = sin2_inverse_sum(m)?.numeric;
    let c = cot2_sum(m)?.numeric;
    Ok((s - (m as f64 - 1.0) - c).abs())
}

/// Closed forms of ∫₀^∞ erf(ax)e^(−b²x²)dx and ∫₀^∞ x·erf(ax)e^(−b²x²)dx.
#[derive(Debug, Clone, PartialEq)]
pub struct ErfIdentities {
    pub first: f64,
    /// Only asserted for b² > a².
    pub second: Result<f64>,
}

pub fn erf_integral_identities(a: f64, b: f64) -> Result<ErfIdentities> {
    check_positive("a", a)?;
    check_positive("b", b)?;
    let sqrt_pi = PI.sqrt();
    let first = sqrt_pi / (2.0 * b) - (b / a).atan() / (b * sqrt_pi);
    let second = if b * b > a * a {
        Ok(a / (2.0 * b * b * (a * a + b * b).sqrt()))
    } else {
        Err(Error::DomainViolation(format!("requires b² > a², got a = {a}, b = {b}")))
    };
    Ok(ErfIdentities { first, second })
}
