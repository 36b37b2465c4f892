//! Chain maps between quantum blocks, and the elementary cobordism maps that
//! act one cube vertex at a time.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::moves::{saddle_shape, SaddleShape};
use crate::diagram::{ArcId, OrientedDiagram};
use crate::error::{KhError, Result};
use crate::khovanov::matrix::SparseMatrix;
use crate::khovanov::{Cube, Generator, QBlock, Resolution};

/// A chain map restricted to one source quantum degree and a range of
/// homological degrees. `maps[i]` sends source generators in degree `i` (in
/// block order) to target generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMap {
    pub src_q: i32,
    pub dst_q: i32,
    pub maps: BTreeMap<i32, SparseMatrix>,
}

impl BlockMap {
    pub fn identity(block: &QBlock) -> Self {
        let maps = block
            .gens
            .iter()
            .map(|(&i, g)| (i, SparseMatrix { rows: g.len(), cols: (0..g.len()).map(|k| vec![(k, 1)]).collect() }))
            .collect();
        BlockMap { src_q: block.q, dst_q: block.q, maps }
    }

    pub fn at(&self, i: i32) -> Option<&SparseMatrix> {
        self.maps.get(&i)
    }

    /// `next ∘ self` on the degrees both cover.
    pub fn then(&self, next: &BlockMap) -> Result<BlockMap> {
        if self.dst_q != next.src_q {
            return Err(KhError::DomainMismatch(format!(
                "composing a map into q = {} with a map from q = {}",
                self.dst_q, next.src_q
            )));
        }
        let mut maps = BTreeMap::new();
        for (&i, f) in &self.maps {
            if let Some(g) = next.maps.get(&i) {
                if g.ncols() != f.rows {
                    return Err(KhError::DomainMismatch(format!("degree {i}: {} vs {} generators", f.rows, g.ncols())));
                }
                maps.insert(i, g.mul(f));
            }
        }
        Ok(BlockMap { src_q: self.src_q, dst_q: next.dst_q, maps })
    }

    /// Checks `f d = d f` between every pair of adjacent covered degrees.
    pub fn check_chain_map(&self, src: &QBlock, dst: &QBlock) -> Result<()> {
        for (&i, f) in &self.maps {
            if f.ncols() != src.rank(i) || f.rows != dst.rank(i) {
                return Err(KhError::NotChainMap(format!("degree {i}: matrix shape does not match the blocks")));
            }
            let Some(g) = self.maps.get(&(i + 1)) else { continue };
            if g.mul(&src.d_at(i)) != dst.d_at(i).mul(f) {
                return Err(KhError::NotChainMap(format!("degree {i} -> {}", i + 1)));
            }
        }
        Ok(())
    }
}

/// Builds a block map from a rule on generators, checking that every image
/// lands in the target block.
pub(crate) fn generator_map(
    src: &QBlock,
    dst: &QBlock,
    rule: impl Fn(&Generator) -> Vec<(Generator, i64)>,
) -> Result<BlockMap> {
    let mut maps = BTreeMap::new();
    for (&i, gens) in &src.gens {
        let index = dst.index(i);
        let mut triples = Vec::new();
        for (c, g) in gens.iter().enumerate() {
            for (t, v) in rule(g) {
                let r = index.get(&t).ok_or_else(|| {
                    KhError::DomainMismatch(format!("image {t:?} of {g:?} is not in target degree ({i}, {})", dst.q))
                })?;
                triples.push((*r, c, v));
            }
        }
        maps.insert(i, SparseMatrix::from_triples(dst.rank(i), gens.len(), triples));
    }
    Ok(BlockMap { src_q: src.q, dst_q: dst.q, maps })
}

/// Image of the labels of every source circle other than `skip`, moved to the
/// target circle containing its first arc (renamed by `name`).
fn carry_labels(
    src: &Resolution,
    dst: &Resolution,
    labels: u64,
    skip: &[usize],
    name: &impl Fn(ArcId) -> ArcId,
) -> u64 {
    let mut out = 0;
    for (k, circ) in src.circles.iter().enumerate() {
        if !skip.contains(&k) && labels >> k & 1 == 1 {
            out |= 1 << dst.circle_of(name(circ[0]));
        }
    }
    out
}

fn same(a: ArcId) -> ArcId {
    a
}

/// Birth of a loop: the new circle is labelled 1.
pub(crate) fn birth_rule<'a>(src: &'a Cube, dst: &'a Cube) -> impl Fn(&Generator) -> Vec<(Generator, i64)> + 'a {
    move |g| {
        let (rs, rd) = (src.resolution(g.vertex), dst.resolution(g.vertex));
        vec![(Generator { vertex: g.vertex, labels: carry_labels(&rs, &rd, g.labels, &[], &same) }, 1)]
    }
}

/// Death of the loop `arc`: X goes to 1, 1 goes to 0.
pub(crate) fn death_rule<'a>(src: &'a Cube, dst: &'a Cube, arc: ArcId) -> impl Fn(&Generator) -> Vec<(Generator, i64)> + 'a {
    move |g| {
        let (rs, rd) = (src.resolution(g.vertex), dst.resolution(g.vertex));
        let o = rs.circle_of(arc);
        if g.labels >> o & 1 == 0 {
            return Vec::new();
        }
        vec![(Generator { vertex: g.vertex, labels: carry_labels(&rs, &rd, g.labels, &[o], &same) }, 1)]
    }
}

/// Saddle between arcs `x` and `y` of `before`: multiplication or
/// comultiplication at every vertex.
pub(crate) fn saddle_rule<'a>(
    before: &OrientedDiagram,
    src: &'a Cube,
    dst: &'a Cube,
    x: ArcId,
    y: ArcId,
) -> impl Fn(&Generator) -> Vec<(Generator, i64)> + 'a {
    let shape = saddle_shape(before, x, y);
    move |g| {
        let (rs, rd) = (src.resolution(g.vertex), dst.resolution(g.vertex));
        // (source circles involved, target circles produced)
        let (ins, outs): (Vec<usize>, Vec<usize>) = match shape {
            SaddleShape::Generic { a, b } => {
                let (ca, cb) = (rs.circle_of(a), rs.circle_of(b));
                if ca != cb {
                    (vec![ca, cb], vec![rd.circle_of(a)])
                } else {
                    (vec![ca], vec![rd.circle_of(a), rd.circle_of(b)])
                }
            }
            SaddleShape::Merge { a, b, m } => (vec![rs.circle_of(a), rs.circle_of(b)], vec![rd.circle_of(m)]),
            SaddleShape::Split { a, p, q } => (vec![rs.circle_of(a)], vec![rd.circle_of(p), rd.circle_of(q)]),
        };
        let base = carry_labels(&rs, &rd, g.labels, &ins, &same);
        let gen = |labels| Generator { vertex: g.vertex, labels };
        let x_at = |k: usize| g.labels >> k & 1 == 1;
        if ins.len() == 2 {
            let m = outs[0];
            match (x_at(ins[0]), x_at(ins[1])) {
                (false, false) => vec![(gen(base), 1)],
                (true, true) => Vec::new(),
                _ => vec![(gen(base | 1 << m), 1)],
            }
        } else {
            let (p, q) = (outs[0], outs[1]);
            if x_at(ins[0]) {
                vec![(gen(base | 1 << p | 1 << q), 1)]
            } else {
                vec![(gen(base | 1 << p), 1), (gen(base | 1 << q), 1)]
            }
        }
    }
}

/// Renaming arcs and reordering crossings (new crossing `k` is old crossing
/// `order[k]`). Vertices pick up the sign of the permutation restricted to
/// their 1-smoothed crossings.
pub(crate) fn relabel_rule<'a>(
    src: &'a Cube,
    dst: &'a Cube,
    arcs: &'a BTreeMap<ArcId, ArcId>,
    order: &'a [usize],
) -> impl Fn(&Generator) -> Vec<(Generator, i64)> + 'a {
    let n = src.crossing_count();
    let order: Vec<usize> = if order.is_empty() { (0..n).collect() } else { order.to_vec() };
    let mut new_pos = vec![0; n];
    for (k, &old) in order.iter().enumerate() {
        new_pos[old] = k;
    }
    move |g| {
        let mut vertex = 0u64;
        let mut inversions = 0;
        for c in 0..n {
            if g.vertex >> c & 1 == 1 {
                vertex |= 1 << new_pos[c];
                inversions += (0..c).filter(|&b| g.vertex >> b & 1 == 1 && new_pos[b] > new_pos[c]).count();
            }
        }
        let (rs, rd) = (src.resolution(g.vertex), dst.resolution(vertex));
        let name = |a: ArcId| *arcs.get(&a).unwrap_or(&a);
        let labels = carry_labels(&rs, &rd, g.labels, &[], &name);
        vec![(Generator { vertex, labels }, if inversions % 2 == 0 { 1 } else { -1 })]
    }
}
