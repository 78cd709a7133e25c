//! Whitney decomposition of an implicit region into dyadic cubes whose
//! certified distance to the complement is at least twice their diameter,
//! plus a boundary layer of cells at the cutoff level.

use super::Region;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// A dyadic cube kept in the interior part of the decomposition.
#[derive(Debug, Clone)]
pub struct InteriorCube {
    /// Level `l`: the cube side is `2^{-l}` (negative levels allowed).
    pub level: i32,
    /// Integer dyadic coordinates: the cube is
    /// `prod_i [index_i 2^{-l}, (index_i + 1) 2^{-l}]`.
    pub index: Vec<i64>,
    pub center: Vec<f64>,
    pub side: f64,
    /// Certified lower bound on dist(cube, complement):
    /// `sdf(center) - radius`, at least `2 diam` by the emission rule.
    pub certified_dist: f64,
}

/// A boundary-layer cell at the cutoff level.
#[derive(Debug, Clone)]
pub struct BoundaryCell {
    pub level: i32,
    pub index: Vec<i64>,
    pub center: Vec<f64>,
    pub side: f64,
}

#[derive(Debug, Clone)]
pub struct WhitneyDecomposition {
    pub interior_cubes: Vec<InteriorCube>,
    pub boundary_cells: Vec<BoundaryCell>,
    pub cutoff: i32,
    pub dim: usize,
}

impl WhitneyDecomposition {
    pub fn interior_volume(&self) -> f64 {
        let d = self.dim as i32;
        self.interior_cubes.iter().map(|c| c.side.powi(d)).sum()
    }

    pub fn boundary_volume(&self) -> f64 {
        let d = self.dim as i32;
        self.boundary_cells.iter().map(|c| c.side.powi(d)).sum()
    }

    /// True if some interior cube or boundary cell contains `p`.
    pub fn covers(&self, p: &[f64]) -> bool {
        let inside = |center: &[f64], side: f64| {
            center
                .iter()
                .zip(p)
                .all(|(c, x)| (x - c).abs() <= 0.5 * side + 1e-12)
        };
        self.interior_cubes
            .iter()
            .any(|c| inside(&c.center, c.side))
            || self.boundary_cells.iter().any(|c| inside(&c.center, c.side))
    }

    /// CSV export: `level,c1,...,cd,side,certified_dist` (boundary cells are
    /// written with an empty certificate column).
    pub fn to_csv(&self) -> String {
        let coord_header: Vec<String> = (1..=self.dim).map(|i| format!("c{i}")).collect();
        let mut out = format!("level,{},side,certified_dist\n", coord_header.join(","));
        for c in &self.interior_cubes {
            let coords: Vec<String> = c.center.iter().map(|x| format!("{x:.17e}")).collect();
            out.push_str(&format!(
                "{},{},{:.17e},{:.17e}\n",
                c.level,
                coords.join(","),
                c.side,
                c.certified_dist
            ));
        }
        for c in &self.boundary_cells {
            let coords: Vec<String> = c.center.iter().map(|x| format!("{x:.17e}")).collect();
            out.push_str(&format!("{},{},{:.17e},\n", c.level, coords.join(","), c.side));
        }
        out
    }
}

/// Shell census: interior cube counts per level, with the fitted constant
/// `C_l = count_l * 2^{-(d-1) l}` per level.
#[derive(Debug, Clone)]
pub struct ShellCensus {
    pub counts: BTreeMap<i32, usize>,
    pub fitted: BTreeMap<i32, f64>,
    pub dim: usize,
}

impl ShellCensus {
    pub fn count(&self, level: i32) -> usize {
        self.counts.get(&level).copied().unwrap_or(0)
    }

    pub fn max_fitted_in(&self, lo: i32, hi: i32) -> f64 {
        self.fitted
            .iter()
            .filter(|(&l, _)| l >= lo && l <= hi)
            .map(|(_, &c)| c)
            .fold(0.0, f64::max)
    }
}

pub fn shell_census(w: &WhitneyDecomposition) -> ShellCensus {
    let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
    for c in &w.interior_cubes {
        *counts.entry(c.level).or_insert(0) += 1;
    }
    let d = w.dim as i32;
    let fitted = counts
        .iter()
        .map(|(&l, &n)| (l, n as f64 * 2f64.powi(-(d - 1) * l)))
        .collect();
    ShellCensus {
        counts,
        fitted,
        dim: w.dim,
    }
}

/// Recursive dyadic subdivision of the region's bounding cube.
///
/// A cube at level `l < D` is emitted as interior when
/// `sdf(center) - radius >= 2 diam` (the certificate transfers the
/// 1-Lipschitz oracle bound to the whole cube); cubes with
/// `sdf(center) + radius <= 0` cannot meet the set and are dropped; whatever
/// survives at level `D` becomes a boundary cell.
pub fn whitney_decompose(region: &Region, cutoff: i32) -> Result<WhitneyDecomposition> {
    let d = region.dim();
    let sides = region.bounding_box().sides();
    let max_side = sides.iter().map(|s| s.length()).fold(0.0, f64::max);
    if !(max_side > 0.0) || !max_side.is_finite() {
        return Err(Error::Domain("degenerate bounding box".into()));
    }
    // Coarsest dyadic level whose grid covers the bounding box with at most
    // two cubes per axis; a single aligned cube need not exist (no dyadic
    // cube straddles the origin), so the recursion starts from a small
    // forest of root cubes.
    let root_level = -(max_side.log2().ceil() as i32);
    if cutoff < root_level {
        return Err(Error::Domain(format!(
            "cutoff level {cutoff} is coarser than the root level {root_level}"
        )));
    }
    let side = 2f64.powi(-root_level);
    let ranges: Vec<(i64, i64)> = sides
        .iter()
        .map(|s| {
            let lo = (s.lo / side).floor() as i64;
            let hi = ((s.hi / side).ceil() as i64 - 1).max(lo);
            (lo, hi)
        })
        .collect();
    let mut w = WhitneyDecomposition {
        interior_cubes: Vec::new(),
        boundary_cells: Vec::new(),
        cutoff,
        dim: d,
    };
    let mut stack: Vec<(i32, Vec<i64>)> = Vec::new();
    let dims: Vec<usize> = ranges.iter().map(|&(lo, hi)| (hi - lo + 1) as usize).collect();
    super::for_each_grid_index(&dims, |idx| {
        let index: Vec<i64> = idx
            .iter()
            .zip(&ranges)
            .map(|(&j, &(lo, _))| lo + j as i64)
            .collect();
        stack.push((root_level, index));
    });
    let sqrt_d = (d as f64).sqrt();
    while let Some((level, index)) = stack.pop() {
        let side = 2f64.powi(-level);
        let center: Vec<f64> = index.iter().map(|&i| (i as f64 + 0.5) * side).collect();
        let value = region.sdf(&center);
        if !value.is_finite() {
            return Err(Error::Oracle(format!(
                "sdf returned {value} at {center:?}"
            )));
        }
        let radius = 0.5 * side * sqrt_d;
        let diam = side * sqrt_d;
        let certified = value - radius;
        if certified >= 2.0 * diam {
            w.interior_cubes.push(InteriorCube {
                level,
                index,
                center,
                side,
                certified_dist: certified,
            });
        } else if value + radius <= 0.0 {
            // Entirely outside.
        } else if level == cutoff {
            w.boundary_cells.push(BoundaryCell {
                level,
                index,
                center,
                side,
            });
        } else {
            let child_level = level + 1;
            for corner in 0..(1usize << d) {
                let child: Vec<i64> = index
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| 2 * b + ((corner >> i) & 1) as i64)
                    .collect();
                stack.push((child_level, child));
            }
        }
    }
    Ok(w)
}
