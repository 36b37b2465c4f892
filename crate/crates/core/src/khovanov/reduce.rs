//! Gaussian elimination of unit differential entries, with the transfer maps
//! to and from the reduced complex kept as a replay log.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::complex::QBlock;
use super::matrix::{normalize, SparseMatrix};
use crate::error::{KhError, Result};

/// One cancellation of `x -> y` with `d(x, y) = eps`. `gamma` is the rest of
/// the row `d(x, .)`, `delta` the rest of the column `d(., y)`, both recorded
/// at the moment of cancellation and indexed by original generator positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub deg: i32,
    pub x: usize,
    pub y: usize,
    pub eps: i64,
    pub gamma: Vec<(usize, i64)>,
    pub delta: Vec<(usize, i64)>,
}

/// A block together with its elimination log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub original_sizes: BTreeMap<i32, usize>,
    pub steps: Vec<Step>,
    /// Surviving original indices per degree, in increasing order.
    pub survivors: BTreeMap<i32, Vec<usize>>,
    /// Differential of the reduced complex in survivor coordinates.
    pub d: BTreeMap<i32, SparseMatrix>,
}

/// Sparse vector keyed by original generator index.
pub type Chain = Vec<(usize, i64)>;

/// Mutable elimination state over one block.
pub struct Eliminator {
    lo: i32,
    offsets: Vec<usize>,
    sizes: BTreeMap<i32, usize>,
    out: Vec<HashMap<usize, i64>>,
    inn: Vec<HashMap<usize, i64>>,
    alive: Vec<bool>,
    steps: Vec<Step>,
}

impl Eliminator {
    pub fn new(block: &QBlock) -> Self {
        let lo = block.gens.keys().next().copied().unwrap_or(0);
        let mut offsets = Vec::new();
        let mut sizes = BTreeMap::new();
        let mut total = 0;
        for (&i, g) in &block.gens {
            assert_eq!(i, lo + offsets.len() as i32, "block degrees must be contiguous");
            offsets.push(total);
            sizes.insert(i, g.len());
            total += g.len();
        }
        offsets.push(total);
        let mut out = vec![HashMap::new(); total];
        let mut inn = vec![HashMap::new(); total];
        for (&i, m) in &block.d {
            let (so, to) = (offsets[(i - lo) as usize], offsets[(i + 1 - lo) as usize]);
            for (c, col) in m.cols.iter().enumerate() {
                for &(r, v) in col {
                    out[so + c].insert(to + r, v);
                    inn[to + r].insert(so + c, v);
                }
            }
        }
        Eliminator { lo, offsets, sizes, out, inn, alive: vec![true; total], steps: Vec::new() }
    }

    fn degree_of(&self, id: usize) -> i32 {
        let k = self.offsets.partition_point(|&o| o <= id) - 1;
        self.lo + k as i32
    }

    pub fn global(&self, deg: i32, local: usize) -> usize {
        self.offsets[(deg - self.lo) as usize] + local
    }

    fn local(&self, id: usize) -> usize {
        id - self.offsets[(self.degree_of(id) - self.lo) as usize]
    }

    pub fn is_alive(&self, deg: i32, local: usize) -> bool {
        self.alive[self.global(deg, local)]
    }

    /// Current entry `d(x, y)` for `x` in degree `deg` and `y` in `deg + 1`.
    pub fn entry(&self, deg: i32, x: usize, y: usize) -> i64 {
        let gx = self.global(deg, x);
        let gy = self.global(deg + 1, y);
        self.out[gx].get(&gy).copied().unwrap_or(0)
    }

    /// Current nonzero targets of `x` as local indices in degree `deg + 1`.
    pub fn row(&self, deg: i32, x: usize) -> Vec<(usize, i64)> {
        let gx = self.global(deg, x);
        let mut v: Vec<_> = self.out[gx].iter().map(|(&t, &c)| (self.local(t), c)).collect();
        v.sort_unstable();
        v
    }

    /// Current nonzero sources of `y` as local indices in degree `deg - 1`.
    pub fn column(&self, deg: i32, y: usize) -> Vec<(usize, i64)> {
        let gy = self.global(deg, y);
        let mut v: Vec<_> = self.inn[gy].iter().map(|(&s, &c)| (self.local(s), c)).collect();
        v.sort_unstable();
        v
    }

    /// Cancels `x` (degree `deg`) against `y` (degree `deg + 1`).
    pub fn cancel(&mut self, deg: i32, x: usize, y: usize) -> Result<()> {
        let gx = self.global(deg, x);
        let gy = self.global(deg + 1, y);
        let eps = self.out[gx].get(&gy).copied().unwrap_or(0);
        if eps.abs() != 1 {
            return Err(KhError::Invalid(format!("cancellation pivot {eps} is not a unit")));
        }
        let mut gamma: Vec<(usize, i64)> = self.out[gx].iter().filter(|e| *e.0 != gy).map(|(&b, &v)| (b, v)).collect();
        let mut delta: Vec<(usize, i64)> = self.inn[gy].iter().filter(|e| *e.0 != gx).map(|(&a, &v)| (a, v)).collect();
        gamma.sort_unstable();
        delta.sort_unstable();
        for &(a, da) in &delta {
            for &(b, gb) in &gamma {
                let delta_ab = da
                    .checked_mul(gb)
                    .and_then(|t| t.checked_mul(eps))
                    .ok_or(KhError::Overflow("elimination"))?;
                let e = self.out[a].entry(b).or_insert(0);
                *e = e.checked_sub(delta_ab).ok_or(KhError::Overflow("elimination"))?;
                let nv = *e;
                if nv == 0 {
                    self.out[a].remove(&b);
                    self.inn[b].remove(&a);
                } else {
                    self.inn[b].insert(a, nv);
                }
            }
        }
        for id in [gx, gy] {
            let outs: Vec<usize> = self.out[id].keys().copied().collect();
            for b in outs {
                self.inn[b].remove(&id);
            }
            let ins: Vec<usize> = self.inn[id].keys().copied().collect();
            for a in ins {
                self.out[a].remove(&id);
            }
            self.out[id].clear();
            self.inn[id].clear();
            self.alive[id] = false;
        }
        let to_local = |v: Vec<(usize, i64)>, s: &Self| v.into_iter().map(|(g, c)| (s.local(g), c)).collect();
        let gamma = to_local(gamma, self);
        let delta = to_local(delta, self);
        self.steps.push(Step { deg, x, y, eps, gamma, delta });
        Ok(())
    }

    /// Greedy minimum-fill elimination of all unit entries, degree by degree.
    pub fn greedy(&mut self) -> Result<()> {
        let degrees: Vec<i32> = self.sizes.keys().copied().collect();
        loop {
            let mut progress = false;
            for &deg in &degrees {
                if !self.sizes.contains_key(&(deg + 1)) {
                    continue;
                }
                let base = self.global(deg, 0);
                for x in 0..self.sizes[&deg] {
                    let gx = base + x;
                    if !self.alive[gx] {
                        continue;
                    }
                    let pick = self.out[gx]
                        .iter()
                        .filter(|(_, v)| v.abs() == 1)
                        .map(|(&y, _)| ((self.out[gx].len() - 1) * (self.inn[y].len() - 1), y))
                        .min();
                    if let Some((_, gy)) = pick {
                        let y = self.local(gy);
                        self.cancel(deg, x, y)?;
                        progress = true;
                    }
                }
            }
            if !progress {
                return Ok(());
            }
        }
    }

    pub fn finish(self) -> Reduction {
        let mut survivors = BTreeMap::new();
        for (&i, &n) in &self.sizes {
            let base = self.global(i, 0);
            survivors.insert(i, (0..n).filter(|&k| self.alive[base + k]).collect::<Vec<_>>());
        }
        let mut d = BTreeMap::new();
        for (&i, src) in &survivors {
            let Some(tgt) = survivors.get(&(i + 1)) else { continue };
            let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, &g)| (g, k)).collect();
            let base = self.global(i, 0);
            let tbase = self.global(i + 1, 0);
            let cols = src
                .iter()
                .map(|&x| normalize(self.out[base + x].iter().map(|(&t, &v)| (pos[&(t - tbase)], v)).collect()))
                .collect();
            d.insert(i, SparseMatrix { rows: tgt.len(), cols });
        }
        Reduction { original_sizes: self.sizes, steps: self.steps, survivors, d }
    }
}

pub fn simplify(block: &QBlock) -> Result<Reduction> {
    let mut e = Eliminator::new(block);
    e.greedy()?;
    Ok(e.finish())
}

fn add_into(map: &mut BTreeMap<usize, i64>, k: usize, v: i64) -> Result<()> {
    let e = map.entry(k).or_insert(0);
    *e = e.checked_add(v).ok_or(KhError::Overflow("transfer map"))?;
    if *e == 0 {
        map.remove(&k);
    }
    Ok(())
}

impl Reduction {
    /// The identity reduction of a block (nothing cancelled).
    pub fn identity(block: &QBlock) -> Self {
        Eliminator::new(block).finish()
    }

    pub fn reduced_rank(&self, i: i32) -> usize {
        self.survivors.get(&i).map_or(0, Vec::len)
    }

    /// Projection onto the reduced complex: a chain in degree `deg` (original
    /// indices) to survivor coordinates.
    pub fn project(&self, deg: i32, v: &[(usize, i64)]) -> Result<Chain> {
        let mut cur: BTreeMap<usize, i64> = BTreeMap::new();
        for &(k, c) in v {
            add_into(&mut cur, k, c)?;
        }
        for s in &self.steps {
            if s.deg == deg {
                cur.remove(&s.x);
            } else if s.deg + 1 == deg {
                if let Some(c) = cur.remove(&s.y) {
                    // f(y) = -eps^{-1} gamma(x)
                    for &(b, g) in &s.gamma {
                        let t = c.checked_mul(g).and_then(|t| t.checked_mul(-s.eps)).ok_or(KhError::Overflow("transfer map"))?;
                        add_into(&mut cur, b, t)?;
                    }
                }
            }
        }
        let pos: HashMap<usize, usize> =
            self.survivors.get(&deg).map_or_else(HashMap::new, |s| s.iter().enumerate().map(|(k, &g)| (g, k)).collect());
        Ok(cur.into_iter().map(|(k, c)| (pos[&k], c)).collect())
    }

    /// Inclusion of the reduced complex: survivor coordinates in degree `deg`
    /// to a chain on original indices.
    pub fn include(&self, deg: i32, w: &[(usize, i64)]) -> Result<Chain> {
        let surv = self.survivors.get(&deg).map(Vec::as_slice).unwrap_or(&[]);
        let mut cur: BTreeMap<usize, i64> = BTreeMap::new();
        for &(k, c) in w {
            add_into(&mut cur, surv[k], c)?;
        }
        for s in self.steps.iter().rev() {
            if s.deg != deg {
                continue;
            }
            // g(a) = a - eps^{-1} delta(a) x
            let mut coeff: i64 = 0;
            for &(a, da) in &s.delta {
                if let Some(&c) = cur.get(&a) {
                    coeff = c.checked_mul(da).and_then(|t| coeff.checked_add(t)).ok_or(KhError::Overflow("transfer map"))?;
                }
            }
            if coeff != 0 {
                add_into(&mut cur, s.x, -s.eps * coeff)?;
            }
        }
        Ok(cur.into_iter().collect())
    }

    /// The projection in degree `i` as a matrix from original generators to
    /// survivors.
    pub fn projection_matrix(&self, i: i32) -> Result<SparseMatrix> {
        let pos: HashMap<usize, usize> =
            self.survivors.get(&i).map_or_else(HashMap::new, |s| s.iter().enumerate().map(|(k, &g)| (g, k)).collect());
        let n = self.original_sizes.get(&i).copied().unwrap_or(0);
        // images of cancelled generators, filled in reverse so that everything
        // a step pushes onto is already known
        let mut image: HashMap<usize, Chain> = HashMap::new();
        for s in self.steps.iter().rev() {
            if s.deg == i {
                image.insert(s.x, Vec::new());
            } else if s.deg + 1 == i {
                let mut acc = Vec::new();
                for &(b, g) in &s.gamma {
                    let c = g.checked_mul(-s.eps).ok_or(KhError::Overflow("transfer map"))?;
                    match pos.get(&b) {
                        Some(&k) => acc.push((k, c)),
                        None => {
                            for &(k, v) in &image[&b] {
                                acc.push((k, v.checked_mul(c).ok_or(KhError::Overflow("transfer map"))?));
                            }
                        }
                    }
                }
                image.insert(s.y, normalize(acc));
            }
        }
        let cols = (0..n).map(|g| match pos.get(&g) {
            Some(&k) => vec![(k, 1)],
            None => image.get(&g).cloned().unwrap_or_default(),
        });
        Ok(SparseMatrix { rows: pos.len(), cols: cols.collect() })
    }

    /// The inclusion in degree `i` as a matrix from survivors to original
    /// generators.
    pub fn inclusion_matrix(&self, i: i32) -> Result<SparseMatrix> {
        let surv = self.survivors.get(&i).map(Vec::as_slice).unwrap_or(&[]);
        let n = self.original_sizes.get(&i).copied().unwrap_or(0);
        // row of each original generator over survivor coordinates
        let mut rows: HashMap<usize, Chain> = surv.iter().enumerate().map(|(k, &g)| (g, vec![(k, 1)])).collect();
        for s in self.steps.iter().rev() {
            if s.deg != i {
                continue;
            }
            let mut acc = Vec::new();
            for &(a, da) in &s.delta {
                let c = da.checked_mul(-s.eps).ok_or(KhError::Overflow("transfer map"))?;
                for &(k, v) in rows.get(&a).map(Vec::as_slice).unwrap_or(&[]) {
                    acc.push((k, v.checked_mul(c).ok_or(KhError::Overflow("transfer map"))?));
                }
            }
            rows.insert(s.x, normalize(acc));
        }
        let triples = rows.into_iter().flat_map(|(g, row)| row.into_iter().map(move |(k, v)| (g, k, v)));
        Ok(SparseMatrix::from_triples(n, surv.len(), triples))
    }

    pub fn d_at(&self, i: i32) -> SparseMatrix {
        self.d.get(&i).cloned().unwrap_or_else(|| SparseMatrix::zero(self.reduced_rank(i + 1), self.reduced_rank(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::OrientedDiagram;
    use crate::khovanov::complex::{build_complex, Window};

    #[test]
    fn kink_reduces_to_circle() {
        let d = OrientedDiagram::parse_pd("X[1,1,2,2]").unwrap();
        let c = build_complex(&d, &Window::full());
        let total: usize = c
            .blocks
            .values()
            .map(|b| {
                let r = simplify(b).unwrap();
                r.survivors.values().map(Vec::len).sum::<usize>()
            })
            .sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn transfer_maps_are_chain_maps() {
        let d = OrientedDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]").unwrap();
        let c = build_complex(&d, &Window::full());
        for b in c.blocks.values() {
            let r = simplify(b).unwrap();
            for (&i, gens) in &b.gens {
                for k in 0..gens.len() {
                    let v = vec![(k, 1)];
                    // f d = d' f
                    let fd = r.project(i + 1, &b.d_at(i).apply(&v)).unwrap();
                    let df = r.d_at(i).apply(&r.project(i, &v).unwrap());
                    assert_eq!(r.projection_matrix(i).unwrap().apply(&v), r.project(i, &v).unwrap());
                    if b.gens.contains_key(&(i + 1)) {
                        assert_eq!(fd, df);
                    }
                }
                for k in 0..r.reduced_rank(i) {
                    let w = vec![(k, 1)];
                    // d g = g d'
                    let g = r.include(i, &w).unwrap();
                    if b.gens.contains_key(&(i + 1)) {
                        let dg = b.d_at(i).apply(&g);
                        let gd = r.include(i + 1, &r.d_at(i).apply(&w)).unwrap();
                        assert_eq!(dg, gd);
                    }
                    // f g = id
                    assert_eq!(r.project(i, &g).unwrap(), w);
                    assert_eq!(r.inclusion_matrix(i).unwrap().apply(&w), g);
                }
            }
        }
    }
}
