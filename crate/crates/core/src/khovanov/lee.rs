//! Lee's deformation (X^2 = 1) over the rationals: Lee generators of oriented
//! resolutions and the quantum filtration degree of their classes.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::complex::{build_with, KhComplex, Window};
use super::cube::{Algebra, Cube, Generator};
use super::matrix::normalize;
use crate::diagram::{OrientedDiagram, Sign};
use crate::error::{KhError, Result};

/// Lee complex around homological degree 0, as one inhomogeneous block.
pub struct LeeComplex {
    pub cube: Cube,
    pub complex: KhComplex,
}

pub fn lee_complex(d: &OrientedDiagram) -> LeeComplex {
    let cube = Cube::new(d);
    let complex = build_with(&cube, &Window::h(0, 0), Algebra::Lee);
    LeeComplex { cube, complex }
}

/// A chain in homological degree 0 of a Lee complex, keyed by generator.
pub type LeeChain = BTreeMap<Generator, i64>;

impl LeeComplex {
    fn gens(&self, i: i32) -> &[Generator] {
        self.complex.blocks.get(&0).and_then(|b| b.gens.get(&i)).map_or(&[], Vec::as_slice)
    }

    /// The oriented resolution: the 0-smoothing at positive crossings and the
    /// 1-smoothing at negative ones.
    pub fn oriented_vertex(&self) -> u64 {
        self.cube
            .diagram()
            .crossings()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.sign == Sign::Negative)
            .fold(0, |v, (k, _)| v | 1 << k)
    }

    /// The Lee generator of the diagram's own orientation. Circles that meet at
    /// a crossing carry opposite labels `a = X + 1` and `b = X - 1`; within each
    /// connected piece of the Seifert graph the circle with the smallest arc
    /// carries `a`.
    pub fn lee_generator(&self) -> Result<LeeChain> {
        let v = self.oriented_vertex();
        let res = self.cube.resolution(v);
        let n = res.len();
        let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
        for c in self.cube.diagram().crossings() {
            let (p, q) = (res.circle_of(c.arcs[0]), res.circle_of(c.arcs[2]));
            if p == q {
                return Err(KhError::Invalid("oriented resolution joins a crossing to itself".into()));
            }
            adj[p].insert(q);
            adj[q].insert(p);
        }
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(true);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let cu = colour[u].unwrap();
                let mut nb: Vec<usize> = adj[u].iter().copied().collect();
                nb.sort_unstable();
                for w in nb {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => {
                            return Err(KhError::Invalid("Seifert graph is not bipartite".into()));
                        }
                        _ => {}
                    }
                }
            }
        }
        // expand the tensor product; a = 1 + X, b = -1 + X
        let mut out = LeeChain::new();
        for labels in 0..(1u64 << n) {
            let mut coeff = 1i64;
            for (k, c) in colour.iter().enumerate() {
                let is_x = labels >> k & 1 == 1;
                if !is_x && c == &Some(false) {
                    coeff = -coeff;
                }
            }
            out.insert(Generator { vertex: v, labels }, coeff);
        }
        if !self.is_cycle(&out) {
            return Err(KhError::Invalid("Lee generator is not a cycle".into()));
        }
        Ok(out)
    }

    pub fn is_cycle(&self, z: &LeeChain) -> bool {
        let mut acc: HashMap<Generator, i64> = HashMap::new();
        for (g, &c) in z {
            for (t, k) in self.cube.differential(g, Algebra::Lee) {
                *acc.entry(t).or_default() += c * k;
            }
        }
        acc.values().all(|&v| v == 0)
    }

    /// Largest `k` such that the class of `z` has a representative supported
    /// in quantum degrees `>= k`.
    pub fn filtration_degree(&self, z: &LeeChain) -> Result<i32> {
        if !self.is_cycle(z) {
            return Err(KhError::Invalid("not a cycle of the Lee complex".into()));
        }
        if z.is_empty() {
            return Err(KhError::Invalid("zero class has no finite filtration degree".into()));
        }
        let c0 = self.gens(0);
        let cm = self.gens(-1);
        let index: HashMap<Generator, usize> = c0.iter().enumerate().map(|(k, g)| (*g, k)).collect();
        let q: Vec<i32> = c0.iter().map(|g| self.cube.q_degree(g)).collect();
        // d from degree -1 as columns over C^0
        let cols: Vec<Vec<(usize, i64)>> = cm
            .iter()
            .map(|g| normalize(self.cube.differential(g, Algebra::Lee).into_iter().map(|(t, v)| (index[&t], v)).collect()))
            .collect();
        let mut zv: Vec<(usize, i64)> = z
            .iter()
            .map(|(g, &c)| index.get(g).map(|&k| (k, c)).ok_or_else(|| KhError::Invalid("chain outside degree 0".into())))
            .collect::<Result<_>>()?;
        zv.sort_unstable();
        let mut levels: Vec<i32> = q.clone();
        levels.sort_unstable();
        levels.dedup();
        let mut best = None;
        for &k in &levels {
            let low: Vec<bool> = q.iter().map(|&x| x < k).collect();
            let m: Vec<Vec<(usize, i64)>> =
                cols.iter().map(|c| c.iter().copied().filter(|e| low[e.0]).collect()).collect();
            let v: Vec<(usize, i64)> = zv.iter().copied().filter(|e| low[e.0]).collect();
            if in_column_span(&m, &v) {
                best = Some(k);
            } else {
                break;
            }
        }
        let top = levels.last().copied().unwrap_or(0);
        // above every level the projection is empty and membership is trivial
        match best {
            Some(k) if k == top && in_column_span(&cols, &zv) => Err(KhError::Invalid("class is zero".into())),
            Some(k) => Ok(k),
            None => Err(KhError::Invalid("no filtration level found".into())),
        }
    }
}

/// Whether `v` lies in the rational span of the sparse columns `m`.
fn in_column_span(m: &[Vec<(usize, i64)>], v: &[(usize, i64)]) -> bool {
    if v.is_empty() {
        return true;
    }
    // reduce the columns to echelon form keyed by pivot row
    let mut pivots: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
    let reduce = |pivots: &BTreeMap<usize, BTreeMap<usize, BigRational>>, col: &[(usize, i64)]| {
        let mut c: BTreeMap<usize, BigRational> =
            col.iter().map(|&(r, x)| (r, BigRational::from_integer(BigInt::from(x)))).collect();
        loop {
            let Some((&r, x)) = c.iter().find(|(r, _)| pivots.contains_key(r)) else { break };
            let x = x.clone();
            for (&rr, y) in &pivots[&r] {
                let e = c.entry(rr).or_insert_with(BigRational::zero);
                *e -= &x * y;
                if e.is_zero() {
                    c.remove(&rr);
                }
            }
        }
        c
    };
    for col in m {
        let c = reduce(&pivots, col);
        if let Some((&r, x)) = c.iter().next() {
            let inv = BigRational::one() / x;
            let normed: BTreeMap<usize, BigRational> = c.iter().map(|(&k, y)| (k, y * &inv)).collect();
            // keep pivots fully reduced against the new one
            for p in pivots.values_mut() {
                if let Some(f) = p.get(&r).cloned() {
                    for (&k, y) in &normed {
                        let e = p.entry(k).or_insert_with(BigRational::zero);
                        *e -= &f * y;
                        if e.is_zero() {
                            p.remove(&k);
                        }
                    }
                }
            }
            pivots.insert(r, normed);
        }
    }
    reduce(&pivots, v).is_empty()
}
