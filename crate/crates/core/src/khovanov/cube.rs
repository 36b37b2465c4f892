//! Resolutions of a diagram and the edge maps of the cube of resolutions.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::diagram::{ArcId, OrientedDiagram};

/// A basis element of the Khovanov chain group: a cube vertex together with a
/// labelling of its circles. Bit `k` of `labels` is set when circle `k` (in
/// the canonical order) carries `X`; otherwise it carries `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub vertex: u64,
    pub labels: u64,
}

/// The planar circles of one resolution, ordered by smallest arc id.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub circles: Vec<Vec<ArcId>>,
    arc_circle: HashMap<ArcId, usize>,
}

impl Resolution {
    pub fn circle_of(&self, arc: ArcId) -> usize {
        self.arc_circle[&arc]
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }
}

/// Which Frobenius algebra the edge maps use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algebra {
    /// X^2 = 0.
    Khovanov,
    /// X^2 = 1.
    Lee,
}

/// Cube of resolutions of a diagram, with a shared cache of resolutions.
#[derive(Debug)]
pub struct Cube {
    diagram: OrientedDiagram,
    arcs: Vec<ArcId>,
    n_plus: i32,
    n_minus: i32,
    cache: RwLock<HashMap<u64, Arc<Resolution>>>,
}

impl Clone for Cube {
    fn clone(&self) -> Self {
        Cube::new(&self.diagram)
    }
}

pub const MAX_CROSSINGS: usize = 63;

impl Cube {
    pub fn new(diagram: &OrientedDiagram) -> Self {
        assert!(diagram.crossing_count() <= MAX_CROSSINGS, "too many crossings for a u64 cube vertex");
        Cube {
            diagram: diagram.clone(),
            arcs: diagram.arcs(),
            n_plus: diagram.n_plus() as i32,
            n_minus: diagram.n_minus() as i32,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn diagram(&self) -> &OrientedDiagram {
        &self.diagram
    }

    pub fn crossing_count(&self) -> usize {
        self.diagram.crossing_count()
    }

    pub fn n_plus(&self) -> i32 {
        self.n_plus
    }

    pub fn n_minus(&self) -> i32 {
        self.n_minus
    }

    fn compute_resolution(&self, vertex: u64) -> Resolution {
        let idx = |a: ArcId| self.arcs.binary_search(&a).expect("arc of this diagram");
        let mut parent: Vec<usize> = (0..self.arcs.len()).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, c) in self.diagram.crossings().iter().enumerate() {
            for (u, v) in c.smoothing(vertex >> i & 1 == 1) {
                let (ru, rv) = (root(&mut parent, idx(u)), root(&mut parent, idx(v)));
                if ru != rv {
                    // keep the smaller index as root so roots are minimal arcs
                    let (lo, hi) = if ru < rv { (ru, rv) } else { (rv, ru) };
                    parent[hi] = lo;
                }
            }
        }
        let mut circles: Vec<Vec<ArcId>> = Vec::new();
        let mut root_circle: HashMap<usize, usize> = HashMap::new();
        let mut arc_circle = HashMap::with_capacity(self.arcs.len());
        // arcs are sorted, so circles are created in order of their minimal arc
        for (k, &a) in self.arcs.iter().enumerate() {
            let r = root(&mut parent, k);
            let ci = *root_circle.entry(r).or_insert_with(|| {
                circles.push(Vec::new());
                circles.len() - 1
            });
            circles[ci].push(a);
            arc_circle.insert(a, ci);
        }
        Resolution { circles, arc_circle }
    }

    pub fn resolution(&self, vertex: u64) -> Arc<Resolution> {
        if let Some(r) = self.cache.read().unwrap().get(&vertex) {
            return r.clone();
        }
        let r = Arc::new(self.compute_resolution(vertex));
        let mut w = self.cache.write().unwrap();
        if w.len() > 1 << 20 {
            w.clear();
        }
        w.entry(vertex).or_insert(r).clone()
    }

    pub fn h_degree(&self, vertex: u64) -> i32 {
        vertex.count_ones() as i32 - self.n_minus
    }

    pub fn q_degree(&self, g: &Generator) -> i32 {
        let circles = self.resolution(g.vertex).len() as i32;
        let xs = g.labels.count_ones() as i32;
        (circles - 2 * xs) + g.vertex.count_ones() as i32 + self.n_plus - 2 * self.n_minus
    }

    /// Sign of the edge leaving `vertex` through crossing `c`.
    pub fn edge_sign(vertex: u64, c: usize) -> i64 {
        let below = vertex & ((1u64 << c) - 1);
        if below.count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Unsigned edge map from `g` through crossing `c` (which must be 0 at `g`).
    pub fn edge_map(&self, g: &Generator, c: usize, algebra: Algebra) -> Vec<(Generator, i64)> {
        debug_assert!(g.vertex >> c & 1 == 0);
        let src = self.resolution(g.vertex);
        let tv = g.vertex | 1 << c;
        let dst = self.resolution(tv);
        let [a, b, cc, _] = self.diagram.crossings()[c].arcs;
        let ca = src.circle_of(a);
        let cc_ = src.circle_of(cc);
        let label = |k: usize| g.labels >> k & 1 == 1;
        // circles not touching the crossing keep their labels
        let mut base: u64 = 0;
        for (k, circ) in src.circles.iter().enumerate() {
            if k == ca || k == cc_ {
                continue;
            }
            if label(k) {
                base |= 1 << dst.circle_of(circ[0]);
            }
        }
        let gen = |labels: u64| Generator { vertex: tv, labels };
        if ca != cc_ {
            let m = dst.circle_of(a);
            match (label(ca), label(cc_)) {
                (false, false) => vec![(gen(base), 1)],
                (true, false) | (false, true) => vec![(gen(base | 1 << m), 1)],
                (true, true) => match algebra {
                    Algebra::Khovanov => vec![],
                    Algebra::Lee => vec![(gen(base), 1)],
                },
            }
        } else {
            let p = dst.circle_of(a);
            let q = dst.circle_of(b);
            debug_assert_ne!(p, q);
            if label(ca) {
                let mut out = vec![(gen(base | 1 << p | 1 << q), 1)];
                if algebra == Algebra::Lee {
                    out.push((gen(base), 1));
                }
                out
            } else {
                vec![(gen(base | 1 << q), 1), (gen(base | 1 << p), 1)]
            }
        }
    }

    /// Full differential of a generator.
    pub fn differential(&self, g: &Generator, algebra: Algebra) -> Vec<(Generator, i64)> {
        let mut out = Vec::new();
        for c in 0..self.crossing_count() {
            if g.vertex >> c & 1 == 0 {
                let s = Self::edge_sign(g.vertex, c);
                for (t, k) in self.edge_map(g, c, algebra) {
                    out.push((t, s * k));
                }
            }
        }
        out
    }

    /// Generators in bidegree (i, j), sorted.
    pub fn generators(&self, i: i32, j: i32) -> Vec<Generator> {
        let n = self.crossing_count();
        let weight = i + self.n_minus;
        if weight < 0 || weight as usize > n {
            return Vec::new();
        }
        let mut out = Vec::new();
        for vertex in vertices_of_weight(n, weight as u32) {
            let c = self.resolution(vertex).len() as i32;
            let twice_x = c + weight + self.n_plus - 2 * self.n_minus - j;
            if twice_x < 0 || twice_x % 2 != 0 || twice_x / 2 > c {
                continue;
            }
            for labels in masks_of_weight(c as u32, (twice_x / 2) as u32) {
                out.push(Generator { vertex, labels });
            }
        }
        out.sort_unstable();
        out
    }

    /// Range of quantum degrees occurring in homological degree `i`.
    pub fn q_range(&self, i: i32) -> Option<(i32, i32)> {
        let n = self.crossing_count();
        let weight = i + self.n_minus;
        if weight < 0 || weight as usize > n {
            return None;
        }
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for vertex in vertices_of_weight(n, weight as u32) {
            let c = self.resolution(vertex).len() as i32;
            let shift = weight + self.n_plus - 2 * self.n_minus;
            lo = lo.min(shift - c);
            hi = hi.max(shift + c);
        }
        Some((lo, hi))
    }
}

/// All `n`-bit masks with exactly `w` bits set, in increasing order.
pub fn vertices_of_weight(n: usize, w: u32) -> impl Iterator<Item = u64> {
    masks_of_weight(n as u32, w)
}

pub fn masks_of_weight(n: u32, w: u32) -> impl Iterator<Item = u64> {
    let limit: u64 = if n >= 64 { u64::MAX } else { 1u64 << n };
    let first: Option<u64> = if w > n {
        None
    } else if w == 0 {
        Some(0)
    } else {
        Some((1u64 << w) - 1)
    };
    let mut cur = first;
    std::iter::from_fn(move || {
        let v = cur?;
        if n < 64 && v >= limit {
            return None;
        }
        cur = if v == 0 {
            None
        } else {
            // Gosper's hack
            let c = v & v.wrapping_neg();
            let r = v.wrapping_add(c);
            if r == 0 {
                None
            } else {
                Some((((r ^ v) >> 2) / c) | r)
            }
        };
        Some(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks() {
        let v: Vec<u64> = masks_of_weight(4, 2).collect();
        assert_eq!(v, vec![3, 5, 6, 9, 10, 12]);
        assert_eq!(masks_of_weight(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(masks_of_weight(3, 3).collect::<Vec<_>>(), vec![7]);
        assert!(masks_of_weight(2, 3).next().is_none());
    }

    #[test]
    fn circle_generators() {
        let c = Cube::new(&OrientedDiagram::unknot(1));
        assert_eq!(c.generators(0, 1).len(), 1);
        assert_eq!(c.generators(0, -1).len(), 1);
        assert_eq!(c.generators(0, 3).len(), 0);
    }

    #[test]
    fn d_squared_zero_on_trefoil() {
        let d = OrientedDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]").unwrap();
        let cube = Cube::new(&d);
        for alg in [Algebra::Khovanov, Algebra::Lee] {
            for vertex in 0..8u64 {
                let circles = cube.resolution(vertex).len();
                for labels in 0..(1u64 << circles) {
                    let g = Generator { vertex, labels };
                    let mut acc: HashMap<Generator, i64> = HashMap::new();
                    for (t, k) in cube.differential(&g, alg) {
                        for (u, l) in cube.differential(&t, alg) {
                            *acc.entry(u).or_default() += k * l;
                        }
                    }
                    assert!(acc.values().all(|&v| v == 0), "{alg:?} {g:?}");
                }
            }
        }
    }
}
