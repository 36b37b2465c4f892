//! The Khovanov chain complex, split into quantum-degree blocks.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cube::{Algebra, Cube, Generator};
use super::matrix::SparseMatrix;
use crate::diagram::OrientedDiagram;

/// Homological degrees `lo..=hi` requested by the caller, and optionally a set
/// of quantum degrees.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub h: Option<(i32, i32)>,
    pub q: Option<Vec<i32>>,
}

impl Window {
    pub fn full() -> Self {
        Self::default()
    }

    pub fn h(lo: i32, hi: i32) -> Self {
        Window { h: Some((lo, hi)), q: None }
    }

    pub fn at(i: i32, j: i32) -> Self {
        Window { h: Some((i, i)), q: Some(vec![j]) }
    }

    pub fn contains_h(&self, i: i32) -> bool {
        self.h.is_none_or(|(lo, hi)| lo <= i && i <= hi)
    }

    pub fn contains_q(&self, j: i32) -> bool {
        self.q.as_ref().is_none_or(|qs| qs.contains(&j))
    }
}

/// One quantum degree of the complex: generators per homological degree and
/// the differentials `d[i] : C^i -> C^{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QBlock {
    pub q: i32,
    pub gens: BTreeMap<i32, Vec<Generator>>,
    pub d: BTreeMap<i32, SparseMatrix>,
}

impl QBlock {
    pub fn rank(&self, i: i32) -> usize {
        self.gens.get(&i).map_or(0, Vec::len)
    }

    /// Differential out of degree `i`, as a (possibly empty) matrix.
    pub fn d_at(&self, i: i32) -> SparseMatrix {
        self.d.get(&i).cloned().unwrap_or_else(|| SparseMatrix::zero(self.rank(i + 1), self.rank(i)))
    }

    pub fn index(&self, i: i32) -> HashMap<Generator, usize> {
        self.gens.get(&i).map_or_else(HashMap::new, |g| g.iter().enumerate().map(|(k, g)| (*g, k)).collect())
    }

    pub fn check_d_squared(&self) -> bool {
        self.d.keys().all(|&i| match self.d.get(&(i + 1)) {
            Some(next) => next.mul(&self.d[&i]).is_zero(),
            None => true,
        })
    }
}

/// Bigraded chain complex of a diagram, possibly restricted to a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhComplex {
    pub n_plus: i32,
    pub n_minus: i32,
    pub window: Window,
    /// Homological degrees actually generated (window widened by one each side).
    pub h_range: (i32, i32),
    pub blocks: BTreeMap<i32, QBlock>,
}

impl KhComplex {
    pub fn total_rank(&self) -> usize {
        self.blocks.values().flat_map(|b| b.gens.values()).map(Vec::len).sum()
    }

    pub fn check_d_squared(&self) -> bool {
        self.blocks.values().all(QBlock::check_d_squared)
    }
}

/// Number of generators of the full cube, saturating.
pub fn cube_size_estimate(d: &OrientedDiagram) -> u128 {
    let n = d.crossing_count() as u32;
    // every resolution has at most arcs + loops circles; the average is far lower,
    // so use 2^n * 2^(circles at vertex 0) as the estimate
    let cube = Cube::new(d);
    if n >= 100 {
        return u128::MAX;
    }
    let c0 = cube.resolution(0).len() as u32;
    let c1 = cube.resolution(if n == 0 { 0 } else { (1u64 << n) - 1 }).len() as u32;
    (1u128 << n).saturating_mul(1u128 << c0.max(c1).min(100))
}

pub fn build_complex(d: &OrientedDiagram, window: &Window) -> KhComplex {
    build_with(&Cube::new(d), window, Algebra::Khovanov)
}

/// Builds a complex from a cube. With the Lee algebra the differential is not
/// homogeneous, so the whole complex lands in a single block keyed by 0.
pub fn build_with(cube: &Cube, window: &Window, algebra: Algebra) -> KhComplex {
    let n = cube.crossing_count() as i32;
    let (lo_all, hi_all) = (-cube.n_minus(), n - cube.n_minus());
    let (lo, hi) = match window.h {
        Some((a, b)) => ((a - 1).max(lo_all), (b + 1).min(hi_all)),
        None => (lo_all, hi_all),
    };
    let mut blocks: BTreeMap<i32, QBlock> = BTreeMap::new();
    if lo <= hi {
        let qs: Vec<i32> = match algebra {
            Algebra::Lee => vec![0],
            Algebra::Khovanov => {
                let mut qmin = i32::MAX;
                let mut qmax = i32::MIN;
                for i in lo..=hi {
                    if let Some((a, b)) = cube.q_range(i) {
                        qmin = qmin.min(a);
                        qmax = qmax.max(b);
                    }
                }
                (qmin..=qmax).filter(|j| (j - qmin) % 2 == 0).filter(|&j| window.contains_q(j)).collect()
            }
        };
        let built: Vec<QBlock> = qs.par_iter().map(|&q| build_block(cube, q, lo, hi, algebra)).collect();
        for b in built {
            if b.gens.values().any(|g| !g.is_empty()) {
                blocks.insert(b.q, b);
            }
        }
    }
    KhComplex { n_plus: cube.n_plus(), n_minus: cube.n_minus(), window: window.clone(), h_range: (lo, hi), blocks }
}

/// One quantum block over homological degrees `lo..=hi`; empty degrees are kept.
pub fn build_block(cube: &Cube, q: i32, lo: i32, hi: i32, algebra: Algebra) -> QBlock {
    let mut gens: BTreeMap<i32, Vec<Generator>> = BTreeMap::new();
    for i in lo..=hi {
        let g = match algebra {
            Algebra::Khovanov => cube.generators(i, q),
            Algebra::Lee => all_generators(cube, i),
        };
        gens.insert(i, g);
    }
    let mut d = BTreeMap::new();
    for i in lo..hi {
        let src = &gens[&i];
        let tgt_index: HashMap<Generator, usize> = gens[&(i + 1)].iter().enumerate().map(|(k, g)| (*g, k)).collect();
        let cols: Vec<Vec<(usize, i64)>> = src
            .par_iter()
            .map(|g| {
                super::matrix::normalize(
                    cube.differential(g, algebra).into_iter().map(|(t, v)| (tgt_index[&t], v)).collect(),
                )
            })
            .collect();
        d.insert(i, SparseMatrix { rows: tgt_index.len(), cols });
    }
    QBlock { q, gens, d }
}

/// Every generator in homological degree `i`, sorted.
pub fn all_generators(cube: &Cube, i: i32) -> Vec<Generator> {
    let n = cube.crossing_count();
    let w = i + cube.n_minus();
    if w < 0 || w as usize > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for vertex in super::cube::vertices_of_weight(n, w as u32) {
        let c = cube.resolution(vertex).len();
        out.extend((0..1u64 << c).map(|labels| Generator { vertex, labels }));
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_complex_is_a_complex() {
        let d = OrientedDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]").unwrap();
        let c = build_complex(&d, &Window::full());
        assert!(c.check_d_squared());
        // 8 vertices; circles 2,1,1,1,2,2,2,3 -> 4+2*3+4*3+8 = 30
        assert_eq!(c.total_rank(), 30);
    }

    #[test]
    fn empty_window_is_empty() {
        let d = OrientedDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]").unwrap();
        let c = build_complex(&d, &Window::h(10, 12));
        assert_eq!(c.total_rank(), 0);
    }
}
