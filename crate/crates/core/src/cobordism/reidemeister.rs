//! Reidemeister maps by cancelling the local circle of a kink or bigon.
//!
//! Let `big` end in one or two crossings forming a kink or a bigon, and let
//! `small` be the diagram with them removed. Exactly one local resolution `S`
//! of those crossings contains a circle `O` made of local arcs only. Each
//! generator at a local state just before `S` is cancelled against the
//! generator at `S` that labels `O` with X, and each generator at `S` with `O`
//! labelled 1 against its image at the state just after `S`. What survives is
//! a copy of the complex of `small`; the cancellation log gives the chain
//! homotopy equivalences in both directions.

use std::collections::{BTreeMap, BTreeSet};

use super::maps::BlockMap;
use super::moves::{bigon_arcs, check_kink, remove_crossings, removal_names};
use crate::diagram::{ArcId, OrientedDiagram};
use crate::error::{KhError, Result};
use crate::khovanov::matrix::SparseMatrix;
use crate::khovanov::reduce::Eliminator;
use crate::khovanov::{build_block, Algebra, Cube, Generator, QBlock};

/// The two directions of a Reidemeister equivalence on one quantum block.
pub struct Removal {
    pub small: OrientedDiagram,
    /// From `big` to `small`.
    pub project: BlockMap,
    /// From `small` to `big`.
    pub include: BlockMap,
}

fn fail(msg: impl Into<String>) -> KhError {
    KhError::NotChainMap(msg.into())
}

/// Equivalences between `big` and `big` without its last `m` crossings, in
/// quantum degree `q` and homological degrees `lo..=hi`.
/// Cancels the circle made of `local_arcs` that appears at one resolution of
/// the crossings `local` (vertices with crossing `fixed.0` smoothed as
/// `fixed.1` only).
fn cancel_local(
    cube: &Cube,
    block: &QBlock,
    elim: &mut Eliminator,
    local: &[usize],
    fixed: Option<(usize, u64)>,
    local_arcs: &BTreeSet<ArcId>,
) -> Result<()> {
    let m = local.len();
    let expand = |s: u64| -> u64 {
        let mut v = fixed.map_or(0, |(c, b)| b << c);
        for (j, &c) in local.iter().enumerate() {
            v |= (s >> j & 1) << c;
        }
        v
    };
    let state = |v: u64| -> u64 { local.iter().enumerate().fold(0, |s, (j, &c)| s | (v >> c & 1) << j) };
    let in_half = |v: u64| fixed.is_none_or(|(c, b)| v >> c & 1 == b);
    let mut s_o = None;
    for s in 0..1u64 << m {
        let res = cube.resolution(expand(s));
        if let Some(c) = res.circles.iter().find(|c| c.iter().all(|a| local_arcs.contains(a))) {
            if s_o.is_some() {
                return Err(KhError::IllegalMove("two local states carry a local circle".into()));
            }
            s_o = Some((s, c[0]));
        }
    }
    let (s_o, o_arc) = s_o.ok_or_else(|| KhError::IllegalMove("local crossings bound no kink or bigon".into()))?;
    let before: Vec<usize> = (0..m).filter(|b| s_o >> b & 1 == 1).collect();
    let after: Vec<usize> = (0..m).filter(|b| s_o >> b & 1 == 0).collect();
    if before.len() > 1 || after.len() > 1 {
        return Err(KhError::IllegalMove("local circle sits at an extreme local state".into()));
    }
    let o_label = |g: &Generator| g.labels >> cube.resolution(g.vertex).circle_of(o_arc) & 1;
    // pivot pairs: (state before S) -> (S, O = X), then (S, O = 1) -> (state after S)
    let mut passes: Vec<(u64, usize, bool)> = Vec::new();
    for &b in &before {
        passes.push((s_o & !(1 << b), local[b], true));
    }
    for &b in &after {
        passes.push((s_o, local[b], false));
    }
    let degrees: Vec<i32> = block.gens.keys().copied().collect();
    for (from, c, into_s) in passes {
        for &i in &degrees {
            let Some(tgt) = block.gens.contains_key(&(i + 1)).then(|| block.index(i + 1)) else { continue };
            for (x, g) in block.gens[&i].iter().enumerate() {
                if !in_half(g.vertex) || state(g.vertex) != from || (!into_s && o_label(g) == 1) {
                    continue;
                }
                let image = cube.edge_map(g, c, Algebra::Khovanov);
                let pick: Vec<&Generator> =
                    image.iter().map(|(t, _)| t).filter(|t| !into_s || o_label(t) == 1).collect();
                let [t] = pick.as_slice() else {
                    return Err(fail(format!("no unique cancellation partner for {g:?}")));
                };
                let y = *tgt.get(t).ok_or_else(|| fail("cancellation partner outside the block"))?;
                elim.cancel(i, x, y)?;
            }
        }
    }
    Ok(())
}

/// Equivalences between `big` and `big` without its last `m` crossings, in
/// quantum degree `q` and homological degrees `lo..=hi`.
pub fn removal_maps(big: &OrientedDiagram, m: usize, q: i32, lo: i32, hi: i32) -> Result<Removal> {
    let n = big.crossing_count();
    if m == 0 || m > 2 || m > n {
        return Err(KhError::IllegalMove(format!("cannot cancel {m} local crossings")));
    }
    let shift = n - m;
    let local: Vec<usize> = (shift..n).collect();
    let small = remove_crossings(big, &local);
    let names = removal_names(big, &local);
    // the arcs of the kink loop or of the bigon; other arcs between local
    // crossings may close up into circles of their own
    let local_arcs: BTreeSet<ArcId> = if m == 1 {
        BTreeSet::from([check_kink(big, shift)?])
    } else {
        bigon_arcs(big, [shift, shift + 1])?.into_iter().collect()
    };
    let cube = Cube::new(big);
    let block = build_block(&cube, q, lo - 1, hi + 1, Algebra::Khovanov);
    let mut elim = Eliminator::new(&block);
    cancel_local(&cube, &block, &mut elim, &local, None, &local_arcs)?;
    let red = elim.finish();

    // survivors correspond to generators of `small` with the same outer vertex
    let small_cube = Cube::new(&small);
    let small_block = build_block(&small_cube, q, lo, hi, Algebra::Khovanov);
    let mut phi: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for i in lo..=hi {
        let surv = red.survivors.get(&i).map(Vec::as_slice).unwrap_or(&[]);
        let sidx = small_block.index(i);
        if surv.len() != sidx.len() {
            return Err(fail(format!("degree {i}: {} survivors for {} generators", surv.len(), sidx.len())));
        }
        let mut row = Vec::with_capacity(surv.len());
        for &k in surv {
            let g = block.gens[&i][k];
            let vertex = g.vertex & ((1 << shift) - 1);
            let rb = cube.resolution(g.vertex);
            let rs = small_cube.resolution(vertex);
            let mut labels = 0u64;
            for (c, circ) in rb.circles.iter().enumerate() {
                // bigon arcs may carry the name of either strand
                let Some(a) = circ.iter().find(|a| !local_arcs.contains(a)) else { continue };
                if g.labels >> c & 1 == 1 {
                    labels |= 1 << rs.circle_of(names[a]);
                }
            }
            let t = Generator { vertex, labels };
            row.push(*sidx.get(&t).ok_or_else(|| fail(format!("survivor {g:?} has no counterpart")))?);
        }
        let mut seen = row.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != row.len() {
            return Err(fail(format!("degree {i}: survivors do not match generators one to one")));
        }
        phi.insert(i, row);
    }
    // the reduced differential must be the differential of `small`
    for i in lo..hi {
        let d = red.d_at(i);
        let want = small_block.d_at(i);
        for (k, col) in d.cols.iter().enumerate() {
            let mut mapped: Vec<(usize, i64)> = col.iter().map(|&(r, v)| (phi[&(i + 1)][r], v)).collect();
            mapped.sort_unstable();
            if mapped != want.cols[phi[&i][k]] {
                return Err(fail(format!("reduced differential differs from the smaller diagram in degree {i}")));
            }
        }
    }
    let mut project = BTreeMap::new();
    let mut include = BTreeMap::new();
    for i in lo..=hi {
        let p = red.projection_matrix(i)?;
        let rows = small_block.rank(i);
        let cols = p.cols.iter().map(|c| {
            let mut v: Vec<(usize, i64)> = c.iter().map(|&(r, x)| (phi[&i][r], x)).collect();
            v.sort_unstable();
            v
        });
        project.insert(i, SparseMatrix { rows, cols: cols.collect() });
        let g = red.inclusion_matrix(i)?;
        let mut cols = vec![Vec::new(); rows];
        for (k, c) in g.cols.into_iter().enumerate() {
            cols[phi[&i][k]] = c;
        }
        include.insert(i, SparseMatrix { rows: g.rows, cols });
    }
    let project = BlockMap { src_q: q, dst_q: q, maps: project };
    let include = BlockMap { src_q: q, dst_q: q, maps: include };
    let big_block = restrict(&block, lo, hi);
    project.check_chain_map(&big_block, &small_block)?;
    include.check_chain_map(&small_block, &big_block)?;
    Ok(Removal { small, project, include })
}

/// Survivor data of one side of an R3 move.
struct R3Side {
    block: QBlock,
    red: crate::khovanov::Reduction,
    keys: BTreeMap<i32, Vec<R3Key>>,
}

/// Outer vertex, pairing of the six outer arcs through the triangle, and the
/// label of every circle named by its smallest arc off the triangle.
type R3Key = (u64, Vec<(ArcId, ArcId)>, Vec<(ArcId, bool)>);

fn r3_side(d: &OrientedDiagram, ks: [usize; 3], k: usize, tri: &BTreeSet<ArcId>, q: i32, lo: i32, hi: i32) -> Result<R3Side> {
    let cube = Cube::new(d);
    let c = d.crossings()[k];
    let h = [false, true]
        .into_iter()
        .find(|&b| c.smoothing(b).iter().any(|&(x, y)| tri.contains(&x) && tri.contains(&y)))
        .ok_or_else(|| KhError::IllegalMove("triangle arcs are not adjacent".into()))?;
    let others: Vec<usize> = ks.iter().copied().filter(|&x| x != k).collect();
    let block = build_block(&cube, q, lo - 1, hi + 1, Algebra::Khovanov);
    let mut elim = Eliminator::new(&block);
    cancel_local(&cube, &block, &mut elim, &others, Some((k, h as u64)), tri)?;
    let red = elim.finish();
    let mask: u64 = ks.iter().fold(0, |m, &x| m | 1 << x);
    let mut keys = BTreeMap::new();
    for i in lo..=hi {
        let mut row = Vec::new();
        for &s in red.survivors.get(&i).map(Vec::as_slice).unwrap_or(&[]) {
            let g = block.gens[&i][s];
            // outer arcs meet the triangle once, triangle arcs twice, so the
            // smoothings join outer arcs in pairs
            let mut parent: BTreeMap<ArcId, ArcId> = BTreeMap::new();
            fn root(p: &mut BTreeMap<ArcId, ArcId>, a: ArcId) -> ArcId {
                let up = *p.entry(a).or_insert(a);
                if up == a {
                    return a;
                }
                let r = root(p, up);
                p.insert(a, r);
                r
            }
            for &x in &ks {
                for (a, b) in d.crossings()[x].smoothing(g.vertex >> x & 1 == 1) {
                    let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                    parent.insert(ra.max(rb), ra.min(rb));
                }
            }
            let mut groups: BTreeMap<ArcId, Vec<ArcId>> = BTreeMap::new();
            let arcs: Vec<ArcId> = parent.keys().copied().collect();
            for a in arcs {
                let r = root(&mut parent, a);
                groups.entry(r).or_default().push(a);
            }
            let mut matching = Vec::new();
            for arcs in groups.values() {
                let outer: Vec<ArcId> = arcs.iter().copied().filter(|a| !tri.contains(a)).collect();
                match outer.as_slice() {
                    [a, b] => matching.push((*a.min(b), *a.max(b))),
                    _ => return Err(fail("closed circle inside the triangle survives")),
                }
            }
            matching.sort_unstable();
            let res = cube.resolution(g.vertex);
            let mut labels = Vec::new();
            for (ci, circ) in res.circles.iter().enumerate() {
                let name = circ.iter().copied().find(|a| !tri.contains(a)).ok_or_else(|| fail("closed circle inside the triangle survives"))?;
                labels.push((name, g.labels >> ci & 1 == 1));
            }
            labels.sort_unstable();
            row.push((g.vertex & !mask, matching, labels));
        }
        keys.insert(i, row);
    }
    Ok(R3Side { block, red, keys })
}

/// The R3 equivalence from `before` to `after`, where `after` is `before` with
/// the triangle on crossings `ks` (bounded by arcs `tri`) slid across. Both
/// sides are reduced by cancelling an R2 bigon inside one half of their cubes;
/// the survivors are matched by how the triangle connects the outer arcs, and
/// the signs of the matching are fixed along the reduced differential.
pub fn r3_map(
    before: &OrientedDiagram,
    after: &OrientedDiagram,
    ks: [usize; 3],
    tri: [ArcId; 3],
    q: i32,
    lo: i32,
    hi: i32,
) -> Result<BlockMap> {
    let tri: BTreeSet<ArcId> = tri.into_iter().collect();
    let mut sides = None;
    for &k in &ks {
        if let (Ok(a), Ok(b)) = (r3_side(before, ks, k, &tri, q, lo, hi), r3_side(after, ks, k, &tri, q, lo, hi)) {
            sides = Some((a, b));
            break;
        }
    }
    let (s1, s2) = sides.ok_or_else(|| KhError::IllegalMove("no crossing of the triangle resolves into a bigon".into()))?;
    // survivors of the first side to survivors of the second
    let mut phi: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for i in lo..=hi {
        let pos: BTreeMap<&R3Key, usize> = s2.keys[&i].iter().enumerate().map(|(k, key)| (key, k)).collect();
        if pos.len() != s2.keys[&i].len() || s1.keys[&i].len() != pos.len() {
            return Err(fail(format!("degree {i}: survivors of the two sides do not correspond")));
        }
        let row = s1.keys[&i].iter().map(|key| pos.get(key).copied()).collect::<Option<Vec<_>>>();
        phi.insert(i, row.ok_or_else(|| fail(format!("degree {i}: unmatched survivor")))?);
    }
    // one sign per (outer vertex, matching), propagated along the differential
    type State = (i32, u64, Vec<(ArcId, ArcId)>);
    let state = |i: i32, k: usize| -> State {
        let key = &s1.keys[&i][k];
        (i, key.0, key.1.clone())
    };
    let mut sign: BTreeMap<State, i64> = BTreeMap::new();
    let mut edges: Vec<(State, State, i64)> = Vec::new();
    for i in lo..hi {
        let (d1, d2) = (s1.red.d_at(i), s2.red.d_at(i));
        for (a, col) in d1.cols.iter().enumerate() {
            let col2 = &d2.cols[phi[&i][a]];
            for &(b, c1) in col {
                let c2 = col2.iter().find(|e| e.0 == phi[&(i + 1)][b]).map_or(0, |e| e.1);
                if c2.abs() != c1.abs() {
                    return Err(fail(format!("degree {i}: reduced differentials differ")));
                }
                edges.push((state(i, a), state(i + 1, b), c1 * c2));
            }
        }
    }
    let mut all: Vec<State> = Vec::new();
    for i in lo..=hi {
        all.extend((0..s1.keys[&i].len()).map(|k| state(i, k)));
    }
    let mut adj: BTreeMap<State, Vec<(State, i64)>> = BTreeMap::new();
    for (a, b, r) in edges {
        adj.entry(a.clone()).or_default().push((b.clone(), r));
        adj.entry(b).or_default().push((a, r));
    }
    for start in all {
        if sign.contains_key(&start) {
            continue;
        }
        sign.insert(start.clone(), 1);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let su = sign[&u];
            for (w, r) in adj.get(&u).cloned().unwrap_or_default() {
                match sign.get(&w) {
                    None => {
                        sign.insert(w.clone(), su * r);
                        stack.push(w);
                    }
                    Some(&sw) if sw != su * r => return Err(fail("no consistent signs for the R3 matching")),
                    _ => {}
                }
            }
        }
    }
    let mut maps = BTreeMap::new();
    for i in lo..=hi {
        let f = s1.red.projection_matrix(i)?;
        let g = s2.red.inclusion_matrix(i)?;
        let n2 = s2.red.reduced_rank(i);
        let cols = (0..phi[&i].len()).map(|k| vec![(phi[&i][k], sign[&state(i, k)])]);
        let iso = SparseMatrix::from_triples(
            n2,
            phi[&i].len(),
            cols.enumerate().flat_map(|(k, c)| c.into_iter().map(move |(r, v)| (r, k, v))),
        );
        maps.insert(i, g.mul(&iso.mul(&f)));
    }
    let map = BlockMap { src_q: q, dst_q: q, maps };
    map.check_chain_map(&restrict(&s1.block, lo, hi), &restrict(&s2.block, lo, hi))?;
    Ok(map)
}

/// The part of a block in degrees `lo..=hi`.
pub(crate) fn restrict(block: &QBlock, lo: i32, hi: i32) -> QBlock {
    QBlock {
        q: block.q,
        gens: block.gens.range(lo..=hi).map(|(&i, g)| (i, g.clone())).collect(),
        d: block.d.range(lo..hi).map(|(&i, m)| (i, m.clone())).collect(),
    }
}
