//! Signed virtual image points of a source under a domain's reflection group.
//!
//! Copies of the fundamental domain are reached breadth-first: the copy
//! `gΩ` has walls `g(H_i)`, and reflecting through one of them gives the
//! neighbouring copy `g R_i Ω`. Copies are told apart by the image of the
//! domain's interior reference point, rounded to a 1e-9 grid.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{distance, DomainDescriptor};
use crate::reflgroup::{parity, Isometry};

const KEY_GRID: f64 = 1e9;
const MAX_TILES: usize = 2_000_000;

/// One virtual source.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageEntry {
    pub isometry: Isometry,
    pub point: Vec<f64>,
    pub sign: i32,
}

/// Images of a base point within a distance cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageSet {
    pub base_point: Vec<f64>,
    pub entries: Vec<ImageEntry>,
    pub cutoff: f64,
    /// Set when no image other than the source itself lies within the cutoff.
    pub cutoff_too_small: bool,
    /// Copies visited by the search but left out because they lie beyond the cutoff.
    pub pruned: usize,
}

impl ImageSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Debug dump: `sign,x0,..,x{n-1},parity`, parity being the word-length parity.
    pub fn to_csv(&self) -> String {
        let n = self.base_point.len();
        let mut out = String::from("sign");
        for i in 0..n {
            let _ = write!(out, ",x{i}");
        }
        out.push_str(",parity\n");
        for e in &self.entries {
            let _ = write!(out, "{}", e.sign);
            for x in &e.point {
                let _ = write!(out, ",{x:.17e}");
            }
            let parity = if e.isometry.word_length % 2 == 0 {
                "even"
            } else {
                "odd"
            };
            let _ = writeln!(out, ",{parity}");
        }
        out
    }
}

pub(crate) fn point_key(x: &[f64]) -> Vec<i64> {
    x.iter().map(|v| (v * KEY_GRID).round() as i64).collect()
}

/// Breadth-first search over copies of the domain generated by the given
/// walls. Returns the kept isometries (in discovery order) and the number of
/// visited copies that were not kept.
pub(crate) fn explore_copies<K, E>(
    domain: &DomainDescriptor,
    walls: &[usize],
    keep: K,
    expand: E,
) -> Result<(Vec<Isometry>, usize)>
where
    K: Fn(&Isometry) -> bool,
    E: Fn(&Isometry) -> bool,
{
    let generators: Vec<Isometry> = walls
        .iter()
        .map(|&i| domain.walls()[i].reflection())
        .collect();
    let reference = domain.reference_point();
    let start = Isometry::identity(domain.dimension());
    let mut seen = HashSet::new();
    seen.insert(point_key(&start.apply(&reference)));
    let mut queue = VecDeque::from([start]);
    let mut kept = Vec::new();
    let mut rejected = 0usize;
    while let Some(g) = queue.pop_front() {
        if seen.len() > MAX_TILES {
            return Err(Error::InvalidParameter(format!(
                "image search exceeded {MAX_TILES} copies; cutoff too large"
            )));
        }
        let is_kept = keep(&g);
        if expand(&g) {
            for r in &generators {
                let child = g.compose(r);
                if seen.insert(point_key(&child.apply(&reference))) {
                    queue.push_back(child);
                }
            }
        }
        if is_kept {
            kept.push(g);
        } else {
            rejected += 1;
        }
    }
    Ok((kept, rejected))
}

/// Indices of the walls whose hyperplanes pass through a vertex.
pub fn walls_at_vertex(domain: &DomainDescriptor, vertex: usize) -> Vec<usize> {
    let v = &domain.vertices()[vertex];
    domain
        .walls()
        .iter()
        .enumerate()
        .filter(|(_, w)| w.signed_distance(v).abs() < 1e-12)
        .map(|(i, _)| i)
        .collect()
}

/// All images of `base_point` within `cutoff`, under the full reflection group.
pub fn enumerate_images(domain: &DomainDescriptor, base_point: &[f64], cutoff: f64) -> Result<ImageSet> {
    let walls: Vec<usize> = (0..domain.walls().len()).collect();
    enumerate_images_with_walls(domain, &walls, base_point, cutoff)
}

/// Images under the subgroup generated by a subset of the walls.
pub fn enumerate_images_with_walls(
    domain: &DomainDescriptor,
    walls: &[usize],
    base_point: &[f64],
    cutoff: f64,
) -> Result<ImageSet> {
    if !domain.contains(base_point)? {
        return Err(Error::PointNotInterior);
    }
    if !(cutoff > 0.0) {
        return Err(Error::InvalidParameter(format!("cutoff must be positive, got {cutoff}")));
    }
    if let Some(&bad) = walls.iter().find(|&&i| i >= domain.walls().len()) {
        return Err(Error::InvalidParameter(format!("no wall with index {bad}")));
    }
    // Unbounded wedges have a finite group and an infinite margin.
    let margin = 2.0 * domain.diameter();
    let dist = |g: &Isometry| distance(&g.apply(base_point), base_point);
    let (kept, pruned) = explore_copies(
        domain,
        walls,
        |g| dist(g) <= cutoff,
        |g| dist(g) <= cutoff + margin,
    )?;

    let mut entries: Vec<ImageEntry> = Vec::with_capacity(kept.len());
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    for g in kept {
        let point = g.apply(base_point);
        let sign = parity(&g)?;
        match index.get(&point_key(&point)) {
            Some(&i) => entries[i].sign += sign,
            None => {
                index.insert(point_key(&point), entries.len());
                entries.push(ImageEntry {
                    isometry: g,
                    point,
                    sign,
                });
            }
        }
    }
    entries.retain(|e| e.sign != 0);
    let cutoff_too_small = entries.len() <= 1;
    Ok(ImageSet {
        base_point: base_point.to_vec(),
        entries,
        cutoff,
        cutoff_too_small,
        pruned,
    })
}
