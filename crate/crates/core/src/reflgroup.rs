//! Reflections, dihedral and trihedral groups, and Coxeter presentations.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::admissible_trihedral;

const UNIT_TOL: f64 = 1e-14;
const RELATION_TOL: f64 = 1e-10;

/// A unit vector normal to a mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct Root(DVector<f64>);

impl Root {
    pub fn new(v: &[f64]) -> Result<Self> {
        let v = DVector::from_column_slice(v);
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitRoot { norm });
        }
        Ok(Root(v))
    }

    /// Normalises a nonzero vector.
    pub fn normalized(v: &[f64]) -> Result<Self> {
        let v = DVector::from_column_slice(v);
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NonUnitRoot { norm });
        }
        Ok(Root(v / norm))
    }

    pub fn vector(&self) -> &DVector<f64> {
        &self.0
    }
}

/// Affine Euclidean isometry `x -> linear * x + translation`, tagged with the
/// number of generator reflections composed to produce it.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    pub linear: DMatrix<f64>,
    pub translation: DVector<f64>,
    pub word_length: u32,
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        Isometry {
            linear: DMatrix::identity(n, n),
            translation: DVector::zeros(n),
            word_length: 0,
        }
    }

    pub fn linear(linear: DMatrix<f64>, word_length: u32) -> Self {
        let n = linear.nrows();
        Isometry {
            linear,
            translation: DVector::zeros(n),
            word_length,
        }
    }

    /// Reflection through the hyperplane `<normal, x> = offset` (unit normal).
    pub fn affine_reflection(normal: &[f64], offset: f64) -> Self {
        let a = DVector::from_column_slice(normal);
        let n = a.len();
        let linear = DMatrix::identity(n, n) - 2.0 * &a * a.transpose();
        Isometry {
            linear,
            translation: 2.0 * offset * a,
            word_length: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.linear.nrows()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v = &self.linear * DVector::from_column_slice(x) + &self.translation;
        v.as_slice().to_vec()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            linear: &self.linear * &other.linear,
            translation: &self.linear * &other.translation + &self.translation,
            word_length: self.word_length + other.word_length,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let lt = self.linear.transpose();
        Isometry {
            translation: -(&lt * &self.translation),
            linear: lt,
            word_length: self.word_length,
        }
    }

    pub fn pow(&self, k: u32) -> Isometry {
        let mut out = Isometry::identity(self.dim());
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    pub fn is_linear(&self) -> bool {
        self.translation.iter().all(|&v| v == 0.0)
    }

    pub fn determinant(&self) -> f64 {
        self.linear.determinant()
    }

    /// Max entry of `|Lᵀ L − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.linear)
    }

    /// Entrywise comparison of linear parts and translations.
    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        self.dim() == other.dim()
            && (&self.linear - &other.linear).amax() <= tol
            && (&self.translation - &other.translation).amax() <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Isometry::identity(self.dim()), tol)
    }
}

pub(crate) fn orthogonality_defect(g: &DMatrix<f64>) -> f64 {
    let n = g.nrows();
    (g.transpose() * g - DMatrix::identity(n, n)).amax()
}

/// `R_a r = r − 2<a,r> a`.
pub fn reflection_matrix(root: &Root) -> Isometry {
    let a = root.vector();
    let n = a.len();
    Isometry::linear(DMatrix::identity(n, n) - 2.0 * a * a.transpose(), 1)
}

/// Generators of `Dih_{2m}` for the wedge of angle π/m, with roots
/// `a1 = (−sin θ, cos θ)` and `a2 = (0, −1)`.
pub fn dihedral_generators(m: u32) -> Result<[Isometry; 2]> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("dihedral index m={m} < 2")));
    }
    let theta = PI / m as f64;
    let a1 = Root::normalized(&[-theta.sin(), theta.cos()])?;
    let a2 = Root::new(&[0.0, -1.0])?;
    Ok([reflection_matrix(&a1), reflection_matrix(&a2)])
}

/// All 2m elements of `Dih_{2m}`: the rotations `(R2 R1)^k` for k = 0..m
/// followed by the reflections `(R2 R1)^k R2`.
pub fn dihedral_elements(m: u32) -> Result<Vec<Isometry>> {
    let [r1, r2] = dihedral_generators(m)?;
    let rot = r2.compose(&r1);
    let mut out = Vec::with_capacity(2 * m as usize);
    let mut power = Isometry::identity(2);
    for _ in 0..m {
        out.push(power.clone());
        power = power.compose(&rot);
    }
    let reflections: Vec<Isometry> = out.iter().map(|g| g.compose(&r2)).collect();
    out.extend(reflections);
    Ok(out)
}

/// The three trihedral reflection matrices for
/// (θ12, θ23, θ31) = (π/p, π/q, π/r).
pub fn trihedral_reflections(p: u32, q: u32, r: u32) -> Result<[Isometry; 3]> {
    if !admissible_trihedral(p, q, r)? {
        return Err(Error::InadmissibleAngles { p, q, r });
    }
    let t12 = PI / p as f64;
    let t23 = PI / q as f64;
    let t31 = PI / r as f64;
    let (s12, c12) = t12.sin_cos();
    let s31 = t31.sin();
    let r1 = DMatrix::from_row_slice(
        3,
        3,
        &[
            1.0 - 2.0 * s12 * s12 * s31 * s31,
            (2.0 * t12).sin() * s31 * s31,
            s12 * (2.0 * t31).sin(),
            (2.0 * t12).sin() * s31 * s31,
            1.0 - 2.0 * c12 * c12 * s31 * s31,
            -c12 * (2.0 * t31).sin(),
            s12 * (2.0 * t31).sin(),
            -c12 * (2.0 * t31).sin(),
            -(2.0 * t31).cos(),
        ],
    );
    let r2 = DMatrix::from_row_slice(
        3,
        3,
        &[
            1.0,
            0.0,
            0.0,
            0.0,
            (2.0 * t23).cos(),
            (2.0 * t23).sin(),
            0.0,
            (2.0 * t23).sin(),
            -(2.0 * t23).cos(),
        ],
    );
    let r3 = DMatrix::from_diagonal(&DVector::from_column_slice(&[1.0, 1.0, -1.0]));
    Ok([
        Isometry::linear(r1, 1),
        Isometry::linear(r2, 1),
        Isometry::linear(r3, 1),
    ])
}

/// Symmetric matrix of relation orders: `(g_i g_j)^{m_ij} = I` with
/// `m_ii = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterMatrix(Vec<Vec<u32>>);

impl CoxeterMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter("Coxeter matrix must be square".into()));
            }
            for (j, &m) in row.iter().enumerate() {
                if m != rows[j][i] || m == 0 {
                    return Err(Error::InvalidParameter(
                        "Coxeter matrix must be symmetric with positive orders".into(),
                    ));
                }
            }
        }
        Ok(CoxeterMatrix(rows))
    }

    pub fn dihedral(m: u32) -> Self {
        CoxeterMatrix(vec![vec![1, m], vec![m, 1]])
    }

    /// Orders for `(R1 R2)^p = (R2 R3)^q = (R3 R1)^r = I`.
    pub fn trihedral(p: u32, q: u32, r: u32) -> Self {
        CoxeterMatrix(vec![vec![1, p, r], vec![p, 1, q], vec![r, q, 1]])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self, i: usize, j: usize) -> u32 {
        self.0[i][j]
    }

    fn max_order(&self) -> u32 {
        self.0.iter().flatten().copied().max().unwrap_or(1)
    }
}

/// Smallest k in 1..=cap with g^k = I (entrywise within 1e-10).
pub fn element_order(g: &Isometry, cap: u32) -> Option<u32> {
    let mut power = g.clone();
    for k in 1..=cap {
        if power.is_identity(RELATION_TOL) {
            return Some(k);
        }
        power = power.compose(g);
    }
    None
}

/// Checks that each generator is an involution and every pairwise product
/// has exactly the prescribed order.
pub fn verify_presentation(generators: &[Isometry], orders: &CoxeterMatrix) -> bool {
    if generators.len() != orders.rank() {
        return false;
    }
    let cap = 2 * orders.max_order().max(2);
    for g in generators {
        if !g.compose(g).is_identity(RELATION_TOL) {
            return false;
        }
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            let product = generators[i].compose(&generators[j]);
            if element_order(&product, cap) != Some(orders.order(i, j)) {
                return false;
            }
        }
    }
    true
}

/// Sign `(−1)^s` of a group element, read off the determinant.
pub fn parity(g: &Isometry) -> Result<i32> {
    let det = g.determinant();
    if (det.abs() - 1.0).abs() > 1e-6 {
        return Err(Error::DegenerateMatrix { det });
    }
    Ok(if det > 0.0 { 1 } else { -1 })
}
