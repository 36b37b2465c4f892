//! Homology of a (reduced) complex via Smith normal form, keeping enough of
//! the presentation to name classes and evaluate maps on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complex::{build_complex, KhComplex, QBlock, Window};
use super::matrix::{smith, SparseMatrix};
use super::reduce::{simplify, Chain, Reduction};
use crate::diagram::OrientedDiagram;
use crate::error::{KhError, Result};

/// One bidegree of homology. `coords` maps a reduced-complex cycle to its
/// class: the first `torsion.len()` rows give coordinates modulo the torsion
/// divisors, the remaining `free_rank` rows the free coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    /// Rows of the class map on reduced-complex coordinates.
    pub coords: Vec<Vec<BigInt>>,
    /// Cycle representatives of the generators (torsion first, then free) in
    /// reduced-complex coordinates.
    pub reps: Vec<Vec<BigInt>>,
    /// Differential out of this degree, reduced coordinates, for cycle tests.
    pub d_out: SparseMatrix,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }

    /// Class of a reduced-complex cycle. Torsion coordinates are reduced into
    /// `[0, d)`.
    pub fn class_of(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        let dz = self.d_out.to_dense().mul_vec(z);
        if dz.iter().any(|x| !x.is_zero()) {
            return Err(KhError::Invalid("element is not a cycle".into()));
        }
        let mut out: Vec<BigInt> = self
            .coords
            .iter()
            .map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum())
            .collect();
        for (k, d) in self.torsion.iter().enumerate() {
            out[k] = num_integer::Integer::mod_floor(&out[k], d);
        }
        Ok(out)
    }

    pub fn free_part<'a>(&self, class: &'a [BigInt]) -> &'a [BigInt] {
        &class[self.torsion.len()..]
    }

    pub fn free_reps(&self) -> &[Vec<BigInt>] {
        &self.reps[self.torsion.len()..]
    }
}

/// Homology of a single quantum block at degree `i` from its reduction.
pub fn group_at(red: &Reduction, i: i32) -> HomologyGroup {
    let a = red.d_at(i - 1).to_dense();
    let b = red.d_at(i).to_dense();
    let n = red.reduced_rank(i);
    let sb = smith(&b);
    let rb = sb.rank();
    let k = n - rb;
    let kernel = sb.right.col_range(rb..n);
    let coord_b = sb.right_inv.row_range(rb..n);
    let y = coord_b.mul(&a);
    let sy = smith(&y);
    let coords_all = sy.left.mul(&coord_b);
    let reps_all = kernel.mul(&sy.left_inv);
    let mut torsion = Vec::new();
    let mut coords = Vec::new();
    let mut reps = Vec::new();
    for (t, d) in sy.diag.iter().enumerate() {
        if !d.is_one() {
            torsion.push(d.clone());
            coords.push(coords_all.data[t].clone());
            reps.push(reps_all.column(t));
        }
    }
    for t in sy.rank()..k {
        coords.push(coords_all.data[t].clone());
        reps.push(reps_all.column(t));
    }
    HomologyGroup { free_rank: k - sy.rank(), torsion, coords, reps, d_out: red.d_at(i) }
}

/// A quantum block together with its reduction, able to move chains between
/// the original and the reduced complex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReducedBlock {
    pub block: QBlock,
    pub reduction: Reduction,
}

impl ReducedBlock {
    pub fn new(block: QBlock) -> Result<Self> {
        let reduction = simplify(&block)?;
        Ok(ReducedBlock { block, reduction })
    }

    pub fn group(&self, i: i32) -> HomologyGroup {
        group_at(&self.reduction, i)
    }

    /// Reduced coordinates of an original chain, as a dense vector.
    pub fn to_reduced(&self, i: i32, v: &[(usize, i64)]) -> Result<Vec<BigInt>> {
        let p = self.reduction.project(i, v)?;
        let mut out = vec![BigInt::zero(); self.reduction.reduced_rank(i)];
        for (k, c) in p {
            out[k] = BigInt::from(c);
        }
        Ok(out)
    }

    /// Lift of a reduced vector to an original chain.
    pub fn to_original(&self, i: i32, w: &[BigInt]) -> Result<Chain> {
        let mut sparse = Vec::new();
        for (k, c) in w.iter().enumerate() {
            if !c.is_zero() {
                sparse.push((k, c.to_i64().ok_or(KhError::Overflow("representative"))?));
            }
        }
        self.reduction.include(i, &sparse)
    }
}

/// Bigraded homology over a window, with presentations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BigradedGroup {
    pub window: Window,
    pub h_range: (i32, i32),
    /// (i, j) -> group; only nonzero groups are stored.
    pub groups: BTreeMap<(i32, i32), HomologyGroup>,
}

impl BigradedGroup {
    pub fn get(&self, i: i32, j: i32) -> Option<&HomologyGroup> {
        self.groups.get(&(i, j))
    }

    pub fn free_rank(&self, i: i32, j: i32) -> usize {
        self.get(i, j).map_or(0, |g| g.free_rank)
    }

    /// Table of (i, j) -> (free rank, torsion divisors).
    pub fn table(&self) -> BTreeMap<(i32, i32), (usize, Vec<BigInt>)> {
        self.groups.iter().map(|(&k, g)| (k, (g.free_rank, g.torsion.clone()))).collect()
    }
}

/// Degrees at which the window's homology is reliable.
fn valid_degrees(c: &KhComplex) -> Vec<i32> {
    let (lo, hi) = c.h_range;
    (lo..=hi).filter(|&i| c.window.contains_h(i)).collect()
}

/// Simplified blocks of a complex, keyed by quantum degree.
pub fn reduce_complex(c: &KhComplex) -> Result<BTreeMap<i32, ReducedBlock>> {
    let blocks: Vec<Result<(i32, ReducedBlock)>> =
        c.blocks.par_iter().map(|(&q, b)| Ok((q, ReducedBlock::new(b.clone())?))).collect();
    blocks.into_iter().collect()
}

pub fn homology_of(c: &KhComplex) -> Result<BigradedGroup> {
    let reduced = reduce_complex(c)?;
    Ok(homology_from_reduced(c, &reduced))
}

pub fn homology_from_reduced(c: &KhComplex, reduced: &BTreeMap<i32, ReducedBlock>) -> BigradedGroup {
    let mut groups = BTreeMap::new();
    for i in valid_degrees(c) {
        for (&q, rb) in reduced {
            let g = rb.group(i);
            if !g.is_zero() {
                groups.insert((i, q), g);
            }
        }
    }
    BigradedGroup { window: c.window.clone(), h_range: c.h_range, groups }
}

pub fn homology(d: &OrientedDiagram, window: &Window) -> Result<BigradedGroup> {
    homology_of(&build_complex(d, window))
}

/// Graded Euler characteristic over the computed window, as exponent -> coefficient.
pub fn euler_characteristic(h: &BigradedGroup) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for (&(i, j), g) in &h.groups {
        let s = if i % 2 == 0 { 1 } else { -1 };
        *out.entry(j as i64).or_insert(0) += s * g.free_rank as i64;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Sign making the first nonzero entry positive.
pub fn normalizing_sign(v: &[BigInt]) -> i32 {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -1,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(pd: &str) -> BTreeMap<(i32, i32), (usize, Vec<i64>)> {
        let d = OrientedDiagram::parse_pd(pd).unwrap();
        homology(&d, &Window::full())
            .unwrap()
            .table()
            .into_iter()
            .map(|(k, (r, t))| (k, (r, t.iter().map(|x| x.to_i64().unwrap()).collect())))
            .collect()
    }

    #[test]
    fn empty_and_unknot() {
        let t = table("");
        assert_eq!(t, BTreeMap::from([((0, 0), (1, vec![]))]));
        let t = table("O[1]");
        assert_eq!(t, BTreeMap::from([((0, 1), (1, vec![])), ((0, -1), (1, vec![]))]));
        let t = table("X[1,1,2,2]");
        assert_eq!(t, BTreeMap::from([((0, 1), (1, vec![])), ((0, -1), (1, vec![]))]));
    }

    #[test]
    fn right_trefoil() {
        let t = table("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]");
        let expect = BTreeMap::from([
            ((0, 1), (1, vec![])),
            ((0, 3), (1, vec![])),
            ((2, 5), (1, vec![])),
            ((3, 7), (0, vec![2])),
            ((3, 9), (1, vec![])),
        ]);
        assert_eq!(t, expect);
    }

    #[test]
    fn representatives_are_cycles_with_unit_coordinates() {
        let d = OrientedDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]").unwrap();
        let c = build_complex(&d, &Window::full());
        for rb in reduce_complex(&c).unwrap().values() {
            for i in c.h_range.0..=c.h_range.1 {
                let g = rb.group(i);
                for (t, rep) in g.reps.iter().enumerate() {
                    let cls = g.class_of(rep).unwrap();
                    for (s, x) in cls.iter().enumerate() {
                        assert_eq!(x, &BigInt::from((s == t) as i64));
                    }
                }
            }
        }
    }
}
