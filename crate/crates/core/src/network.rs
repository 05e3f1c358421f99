//! Agent networks.
//!
//! A [`Network`] stores, for every agent `i`, the agents whose spins `i`
//! reads (its in-neighbors). Lattices are symmetric; depleted variants drop
//! in-links only and are therefore directed. Grid vertices `(r, c)` are
//! flattened row-major to `r * cols + c`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use rand_core::RngCore;

use crate::rng::below;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    in_neighbors: Vec<Vec<usize>>,
    label: String,
}

impl Network {
    /// Builds a network from explicit in-neighbor lists, checking that every
    /// index is in range, non-self and listed once.
    pub fn from_in_neighbors(
        label: impl Into<String>,
        in_neighbors: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = in_neighbors.len();
        if n == 0 {
            return Err(Error::InvalidTopology("network has no vertices"));
        }
        for (i, nbrs) in in_neighbors.iter().enumerate() {
            for (pos, &j) in nbrs.iter().enumerate() {
                if j >= n {
                    return Err(Error::InvalidTopology("neighbor index out of range"));
                }
                if j == i {
                    return Err(Error::InvalidTopology("vertex lists itself"));
                }
                if nbrs[..pos].contains(&j) {
                    return Err(Error::InvalidTopology("duplicate neighbor"));
                }
            }
        }
        Ok(Self {
            in_neighbors,
            label: label.into(),
        })
    }

    /// Number of agents.
    pub fn n(&self) -> usize {
        self.in_neighbors.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Agents read by agent `i`.
    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_neighbors[i]
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.in_neighbors[i].len()
    }

    /// The common in-degree, if every vertex has the same one.
    pub fn constant_in_degree(&self) -> Option<usize> {
        let d = self.in_neighbors[0].len();
        self.in_neighbors.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Total number of directed links `j -> i`.
    pub fn link_count(&self) -> usize {
        self.in_neighbors.iter().map(Vec::len).sum()
    }

    /// `j ∈ in(i) ⇔ i ∈ in(j)` for every pair.
    pub fn is_symmetric(&self) -> bool {
        self.in_neighbors
            .iter()
            .enumerate()
            .all(|(i, nbrs)| nbrs.iter().all(|&j| self.in_neighbors[j].contains(&i)))
    }

    /// Text dump, one line `i: j1 j2 ... jd` per vertex with sorted
    /// neighbors and a trailing newline.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, nbrs) in self.in_neighbors.iter().enumerate() {
            let mut sorted = nbrs.clone();
            sorted.sort_unstable();
            let _ = write!(out, "{i}:");
            for j in sorted {
                let _ = write!(out, " {j}");
            }
            out.push('\n');
        }
        out
    }
}

/// Cycle on `n` vertices, each reading its two ring neighbors.
pub fn build_ring(n: usize) -> Result<Network> {
    if n < 3 {
        return Err(Error::InvalidTopology("ring needs at least 3 vertices"));
    }
    let lists = (0..n)
        .map(|i| alloc::vec![(i + n - 1) % n, (i + 1) % n])
        .collect();
    Network::from_in_neighbors("ring2", lists)
}

fn torus(rows: usize, cols: usize, offsets: &[(isize, isize)], label: &str) -> Result<Network> {
    if rows < 3 || cols < 3 {
        return Err(Error::InvalidTopology(
            "torus dimensions must be at least 3x3",
        ));
    }
    let wrap = |x: usize, dx: isize, m: usize| (x as isize + dx).rem_euclid(m as isize) as usize;
    let lists = (0..rows * cols)
        .map(|v| {
            let (r, c) = (v / cols, v % cols);
            offsets
                .iter()
                .map(|&(dr, dc)| wrap(r, dr, rows) * cols + wrap(c, dc, cols))
                .collect()
        })
        .collect();
    Network::from_in_neighbors(label, lists)
}

/// Four-neighbor (von Neumann) torus. Neighbor order: up, down, left, right.
pub fn build_von_neumann_torus(rows: usize, cols: usize) -> Result<Network> {
    torus(rows, cols, &[(-1, 0), (1, 0), (0, -1), (0, 1)], "vn4")
}

/// Eight-neighbor (Moore) torus. Neighbors ordered by row offset, then
/// column offset.
pub fn build_moore_torus(rows: usize, cols: usize) -> Result<Network> {
    const OFFSETS: [(isize, isize); 8] = [
        (-1, -1),
        (-1, 0),
        (-1, 1),
        (0, -1),
        (0, 1),
        (1, -1),
        (1, 0),
        (1, 1),
    ];
    torus(rows, cols, &OFFSETS, "moore8")
}

/// Removes `k` in-links from every vertex, chosen uniformly without
/// replacement and independently per vertex.
///
/// Vertices are processed in ascending order; each one consumes `k` draws
/// of a partial Fisher–Yates shuffle over its in-neighbor positions. The
/// surviving neighbors keep their original relative order. The label gets a
/// `-minus{k}` suffix when `k > 0`.
pub fn eliminate_random_in_links<R: RngCore + ?Sized>(
    net: &Network,
    k: usize,
    rng: &mut R,
) -> Result<Network> {
    let degree = net.constant_in_degree();
    match degree {
        Some(d) if k < d => {}
        _ => return Err(Error::InvalidDepletion { k, degree }),
    }
    if k == 0 {
        return Ok(net.clone());
    }
    let lists = net
        .in_neighbors
        .iter()
        .map(|nbrs| {
            let d = nbrs.len();
            let mut positions: Vec<usize> = (0..d).collect();
            for r in 0..k {
                let pick = r + below(rng, (d - r) as u64) as usize;
                positions.swap(r, pick);
            }
            let mut keep = positions[k..].to_vec();
            keep.sort_unstable();
            keep.into_iter().map(|p| nbrs[p]).collect()
        })
        .collect();
    Network::from_in_neighbors(format!("{}-minus{k}", net.label), lists)
}
