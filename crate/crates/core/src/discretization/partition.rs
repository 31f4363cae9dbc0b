use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::measures::{FactorSpace, Point};

/// Deepest dyadic level supported (coordinates are located with `f64`).
const MAX_DEPTH: u32 = 50;

/// Diameter bounds `δ_n = base · ratio^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeltaSchedule {
    Geometric { base: f64, ratio: f64 },
}

impl DeltaSchedule {
    /// `δ_n = 2^{-n} diam(K)` with `diam(K)` the largest factor diameter.
    pub fn halving(spaces: &[FactorSpace]) -> Self {
        let base = spaces.iter().map(FactorSpace::diameter).fold(0.0, f64::max);
        DeltaSchedule::Geometric { base, ratio: 0.5 }
    }

    pub fn delta(&self, level: u32) -> f64 {
        match *self {
            DeltaSchedule::Geometric { base, ratio } => base * ratio.powi(level as i32),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DeltaSchedule::Geometric { base, ratio }
                if base.is_finite() && base > 0.0 && ratio > 0.0 && ratio < 1.0 =>
            {
                Ok(())
            }
            _ => Err(Error::InvalidArgument(
                "delta schedule needs base > 0 and 0 < ratio < 1".into(),
            )),
        }
    }
}

/// One retained box `[lo, hi)` of a marginal grid (closed on the upper
/// boundary of the factor box).
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub id: usize,
    /// Grid coordinates at this cell's depth.
    pub index: Vec<u64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Id of the containing cell one level up.
    pub parent: usize,
}

/// The retained dyadic cells of one factor.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalGrid {
    space: FactorSpace,
    depth: u32,
    cells: Vec<Cell>,
    lookup: BTreeMap<Vec<u64>, usize>,
}

impl MarginalGrid {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Diameter shared by all cells.
    pub fn cell_diameter(&self) -> f64 {
        self.space.diameter() / f64::from(2u32).powi(self.depth as i32)
    }

    pub fn locate(&self, p: &Point) -> Option<usize> {
        let index = grid_index(&self.space, p, self.depth)?;
        self.lookup.get(&index).copied()
    }
}

/// Nested per-factor dyadic grids at one level, keeping only the cells
/// that contain support points.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    level: u32,
    delta: f64,
    grids: Vec<MarginalGrid>,
}

impl Partition {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn grids(&self) -> &[MarginalGrid] {
        &self.grids
    }

    /// Largest cell diameter over the factors; always `< δ_n / 2`.
    pub fn max_cell_diameter(&self) -> f64 {
        self.grids.iter().map(MarginalGrid::cell_diameter).fold(0.0, f64::max)
    }

    /// Cell id of `p` in factor `k` (0-based), if retained.
    pub fn locate(&self, k: usize, p: &Point) -> Option<usize> {
        self.grids.get(k)?.locate(p)
    }

    /// Product cell of a tuple.
    pub fn locate_tuple(&self, t: &[Point]) -> Option<Vec<usize>> {
        t.iter().enumerate().map(|(k, p)| self.locate(k, p)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "delta": self.delta,
            "marginals": self.grids.iter().map(|g| json!({
                "depth": g.depth,
                "cells": g.cells.iter().map(|c| json!({
                    "id": c.id,
                    "lo": c.lo,
                    "hi": c.hi,
                    "parent": c.parent,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn grid_index(space: &FactorSpace, p: &Point, depth: u32) -> Option<Vec<u64>> {
    if !space.contains(p) {
        return None;
    }
    let cells = 1u64 << depth;
    Some(
        p.0.iter()
            .zip(space.bounds())
            .map(|(x, (lo, hi))| {
                let t = (x - lo) / (hi - lo);
                ((t * cells as f64).floor() as u64).min(cells - 1)
            })
            .collect(),
    )
}

/// Smallest depth `s` with `diam / 2^s < δ / 2`.
fn depth_for(space: &FactorSpace, delta: f64) -> Result<u32> {
    let diam = space.diameter();
    (0..=MAX_DEPTH)
        .find(|&s| diam / f64::from(2u32).powi(s as i32) < delta / 2.0)
        .ok_or_else(|| Error::Guard {
            what: "dyadic depth",
            requested: u128::from(MAX_DEPTH) + 1,
            limit: u128::from(MAX_DEPTH),
        })
}

fn grid(space: &FactorSpace, points: &[Point], depth: u32, parent: Option<&MarginalGrid>) -> Result<MarginalGrid> {
    let mut indices: Vec<Vec<u64>> = points
        .iter()
        .map(|p| {
            grid_index(space, p, depth)
                .ok_or_else(|| Error::InvalidMeasure(format!("point {p} outside its factor box")))
        })
        .collect::<Result<_>>()?;
    indices.sort();
    indices.dedup();
    let width = |(lo, hi): &(f64, f64)| (hi - lo) / f64::from(2u32).powi(depth as i32);
    let cells: Vec<Cell> = indices
        .into_iter()
        .enumerate()
        .map(|(id, index)| {
            let lo: Vec<f64> = index
                .iter()
                .zip(space.bounds())
                .map(|(i, b)| b.0 + *i as f64 * width(b))
                .collect();
            let hi = index
                .iter()
                .zip(space.bounds())
                .map(|(i, b)| {
                    if *i + 1 == 1u64 << depth {
                        b.1
                    } else {
                        b.0 + (*i + 1) as f64 * width(b)
                    }
                })
                .collect();
            let parent = parent.map_or(0, |g| {
                let shift = depth - g.depth;
                let up: Vec<u64> = index.iter().map(|i| i >> shift).collect();
                g.lookup[&up]
            });
            Cell {
                id,
                index,
                lo,
                hi,
                parent,
            }
        })
        .collect();
    let lookup = cells.iter().map(|c| (c.index.clone(), c.id)).collect();
    Ok(MarginalGrid {
        space: space.clone(),
        depth,
        cells,
        lookup,
    })
}

/// Builds the level-`n` partition (`n >= 1`) of each factor around the given
/// support points, with parents taken from level `n - 1`.
pub fn build_partition(
    spaces: &[FactorSpace],
    supports: &[Vec<Point>],
    level: u32,
    schedule: &DeltaSchedule,
) -> Result<Partition> {
    schedule.validate()?;
    if level == 0 {
        return Err(Error::InvalidArgument("partition levels start at 1".into()));
    }
    if spaces.len() != supports.len() {
        return Err(Error::DimensionMismatch {
            expected: spaces.len(),
            got: supports.len(),
        });
    }
    let delta = schedule.delta(level);
    let grids = spaces
        .iter()
        .zip(supports)
        .map(|(space, points)| {
            if points.is_empty() {
                return Err(Error::InvalidArgument("empty support".into()));
            }
            let coarse_depth = depth_for(space, schedule.delta(level - 1))?;
            let coarse = grid(space, points, coarse_depth, None)?;
            grid(space, points, depth_for(space, delta)?.max(coarse_depth), Some(&coarse))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition { level, delta, grids })
}
