//! Elementary movie moves and their effect on PD codes.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::diagram::{ArcId, Crossing, OrientedDiagram, Sign};
use crate::error::{KhError, Result};
use crate::families::insert_crossings;

/// One step of a movie. Moves that add crossings append them after the
/// existing ones; moves that remove crossings keep the order of the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MovieMove {
    /// Adds a kink on `arc`. With `under_first` the strand passes under first.
    #[serde(rename = "R1+")]
    R1Add {
        arc: ArcId,
        sign: Sign,
        #[serde(default)]
        under_first: bool,
    },
    #[serde(rename = "R1-")]
    R1Remove { crossing: usize },
    /// Pushes `over` across `under` through their common face. When one of
    /// them is a crossingless loop, `face & 1` picks the side of the other arc
    /// it is pushed from and `face & 2` reverses the loop.
    #[serde(rename = "R2+")]
    R2Add {
        over: ArcId,
        under: ArcId,
        #[serde(default)]
        face: usize,
    },
    #[serde(rename = "R2-")]
    R2Remove { crossings: [usize; 2] },
    #[serde(rename = "R3")]
    R3 { crossings: [usize; 3] },
    #[serde(rename = "birth")]
    Birth { arc: ArcId },
    #[serde(rename = "death")]
    Death { arc: ArcId },
    /// Oriented band between two arcs (or an arc and itself) across a face.
    #[serde(rename = "saddle")]
    Saddle { arcs: [ArcId; 2] },
    /// Renames arcs and reorders crossings: new crossing `k` is old crossing
    /// `order[k]`. Arcs missing from `arcs` keep their names.
    #[serde(rename = "relabel")]
    Relabel {
        #[serde(default, with = "pairs")]
        arcs: BTreeMap<ArcId, ArcId>,
        #[serde(default)]
        order: Vec<usize>,
    },
}

/// Arc maps as `[[from, to], ...]`: internally tagged enums cannot read
/// integer map keys back from JSON strings.
mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::diagram::ArcId;

    pub fn serialize<S: Serializer>(m: &BTreeMap<ArcId, ArcId>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().map(|(&k, &v)| [k, v]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<ArcId, ArcId>, D::Error> {
        Ok(Vec::<[ArcId; 2]>::deserialize(d)?.into_iter().map(|[k, v]| (k, v)).collect())
    }
}

fn illegal(msg: impl Into<String>) -> KhError {
    KhError::IllegalMove(msg.into())
}

impl MovieMove {
    /// Euler characteristic of the elementary cobordism.
    pub fn euler_characteristic(&self) -> i32 {
        match self {
            MovieMove::Birth { .. } | MovieMove::Death { .. } => 1,
            MovieMove::Saddle { .. } => -1,
            _ => 0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MovieMove::R1Add { .. } => "R1+",
            MovieMove::R1Remove { .. } => "R1-",
            MovieMove::R2Add { .. } => "R2+",
            MovieMove::R2Remove { .. } => "R2-",
            MovieMove::R3 { .. } => "R3",
            MovieMove::Birth { .. } => "birth",
            MovieMove::Death { .. } => "death",
            MovieMove::Saddle { .. } => "saddle",
            MovieMove::Relabel { .. } => "relabel",
        }
    }

    pub fn apply(&self, d: &OrientedDiagram) -> Result<OrientedDiagram> {
        let out = match self {
            MovieMove::R1Add { arc, sign, under_first } => r1_add(d, *arc, *sign, *under_first)?,
            MovieMove::R1Remove { crossing } => {
                check_kink(d, *crossing)?;
                remove_crossings(d, &[*crossing])
            }
            MovieMove::R2Add { over, under, face } => {
                if over == under {
                    return Err(illegal("R2+ needs two distinct arcs"));
                }
                if d.loops().contains(over) || d.loops().contains(under) {
                    return clasp_loop(d, *over, *under, *face);
                }
                insert_crossings(d, *over, *under, 2, *face, |_, _| true).map_err(|e| illegal(e.to_string()))?
            }
            MovieMove::R2Remove { crossings } => {
                bigon_arcs(d, *crossings)?;
                remove_crossings(d, crossings)
            }
            MovieMove::R3 { crossings } => r3(d, *crossings)?.0,
            MovieMove::Birth { arc } => {
                if d.arcs().contains(arc) {
                    return Err(illegal(format!("birth arc {arc} is already in use")));
                }
                let mut loops = d.loops().to_vec();
                loops.push(*arc);
                OrientedDiagram::new(d.crossings().to_vec(), loops)?
            }
            MovieMove::Death { arc } => {
                if !d.loops().contains(arc) {
                    return Err(illegal(format!("death needs a crossingless circle, arc {arc} is not one")));
                }
                let loops = d.loops().iter().copied().filter(|a| a != arc).collect();
                OrientedDiagram::new(d.crossings().to_vec(), loops)?
            }
            MovieMove::Saddle { arcs } => saddle(d, arcs[0], arcs[1])?,
            MovieMove::Relabel { arcs, order } => relabel(d, arcs, order)?,
        };
        out.check_planar().map_err(|e| illegal(format!("{} produced a non-planar diagram: {e}", self.name())))?;
        Ok(out)
    }
}

fn r1_add(d: &OrientedDiagram, a: ArcId, sign: Sign, under_first: bool) -> Result<OrientedDiagram> {
    let l = d.max_arc() + 1;
    let mut crossings = d.crossings().to_vec();
    let mut loops = d.loops().to_vec();
    let n2 = if let Some(pos) = loops.iter().position(|&x| x == a) {
        loops.remove(pos);
        a
    } else {
        let ends = d.arc_ends();
        let (head, _) = *ends.get(&a).ok_or_else(|| illegal(format!("arc {a} is not in the diagram")))?;
        crossings[head.0].arcs[head.1] = l + 1;
        l + 1
    };
    let arcs = match (sign, under_first) {
        (Sign::Positive, true) => [a, n2, l, l],
        (Sign::Positive, false) => [l, l, n2, a],
        (Sign::Negative, true) => [a, l, l, n2],
        (Sign::Negative, false) => [l, a, n2, l],
    };
    crossings.push(Crossing::new(arcs, sign));
    Ok(OrientedDiagram::new(crossings, loops)?)
}

/// Clasps a crossingless loop with another arc (or loop) by two crossings.
/// The loop keeps its name on the far piece; new names are `max+1` (the piece
/// of the loop inside the bigon), `max+2` (the other arc inside the bigon) and
/// `max+3` (the other arc after the bigon).
fn clasp_loop(d: &OrientedDiagram, over: ArcId, under: ArcId, face: usize) -> Result<OrientedDiagram> {
    let loop_over = d.loops().contains(&over);
    let (l, y) = if loop_over { (over, under) } else { (under, over) };
    if !d.arcs().contains(&y) {
        return Err(illegal(format!("arc {y} is not in the diagram")));
    }
    let y_loop = d.loops().contains(&y);
    let max = d.max_arc();
    let (tip, y_mid) = (max + 1, max + 2);
    let y_out = if y_loop { y } else { max + 3 };
    let mut crossings = d.crossings().to_vec();
    if !y_loop {
        let (head, _) = d.arc_ends()[&y];
        crossings[head.0].arcs[head.1] = y_out;
    }
    // compass corners counterclockwise: E, N, W, S; y runs west to east, the
    // loop body sits north of it (south with `face & 1`) and its tip crosses
    const E: usize = 0;
    const W: usize = 2;
    let (body, tip_side) = if face & 1 == 0 { (1, 3) } else { (3, 1) };
    let tip_forward = face & 2 == 0;
    for (k, (y_in, y_next)) in [(y, y_mid), (y_mid, y_out)].into_iter().enumerate() {
        let mut corner = [0; 4];
        corner[W] = y_in;
        corner[E] = y_next;
        corner[body] = l;
        corner[tip_side] = tip;
        // the tip runs west to east when `tip_forward`
        let loop_in = if (k == 0) == tip_forward { body } else { tip_side };
        let (u, o) = if loop_over { (W, loop_in) } else { (loop_in, W) };
        let arcs = [0, 1, 2, 3].map(|j| corner[(u + j) % 4]);
        let sign = if (o + 4 - u) % 4 == 3 { Sign::Positive } else { Sign::Negative };
        crossings.push(Crossing::new(arcs, sign));
    }
    let loops = d.loops().iter().copied().filter(|&a| a != l && a != y).collect();
    Ok(OrientedDiagram::new(crossings, loops)?)
}

/// The arc forming the monogon at crossing `k`.
pub(crate) fn check_kink(d: &OrientedDiagram, k: usize) -> Result<ArcId> {
    let c = d.crossings().get(k).ok_or_else(|| illegal(format!("no crossing {k}")))?;
    for i in 0..4 {
        let a = c.arcs[i];
        if c.arcs[(i + 1) % 4] == a {
            let monogon = d.faces().iter().any(|f| f.boundary.len() == 1 && f.boundary[0].0 == a);
            if monogon {
                return Ok(a);
            }
        }
    }
    Err(illegal(format!("crossing {k} is not a removable kink")))
}

/// The two arcs bounding the bigon between crossings `ks`, checking that one
/// strand passes over at both crossings.
pub(crate) fn bigon_arcs(d: &OrientedDiagram, ks: [usize; 2]) -> Result<[ArcId; 2]> {
    let [k1, k2] = ks;
    if k1 == k2 || k1 >= d.crossing_count() || k2 >= d.crossing_count() {
        return Err(illegal("R2- needs two distinct crossings"));
    }
    let (c1, c2) = (&d.crossings()[k1], &d.crossings()[k2]);
    let shared: BTreeSet<ArcId> = c1.arcs.iter().filter(|a| c2.arcs.contains(a)).copied().collect();
    for f in d.faces() {
        if f.boundary.len() != 2 {
            continue;
        }
        let (p, r) = (f.boundary[0].0, f.boundary[1].0);
        if p == r || !shared.contains(&p) || !shared.contains(&r) {
            continue;
        }
        let parity = |c: &Crossing, a: ArcId| c.arcs.iter().position(|&x| x == a).map(|i| i % 2);
        if parity(c1, p) == parity(c2, p) && parity(c1, r) == parity(c2, r) && parity(c1, p) != parity(c1, r) {
            return Ok([p, r]);
        }
    }
    Err(illegal(format!("crossings {k1} and {k2} do not bound a removable bigon")))
}

/// Name of every arc after deleting crossings `ks`: strands joined through a
/// deleted crossing take the smallest of their names.
pub(crate) fn removal_names(d: &OrientedDiagram, ks: &[usize]) -> BTreeMap<ArcId, ArcId> {
    let arcs = d.arcs();
    let idx: HashMap<ArcId, usize> = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &k in ks {
        let c = &d.crossings()[k];
        for (u, v) in [(c.arcs[0], c.arcs[2]), (c.arcs[c.over_in()], c.arcs[c.over_out()])] {
            let (ru, rv) = (root(&mut parent, idx[&u]), root(&mut parent, idx[&v]));
            let (lo, hi) = if ru < rv { (ru, rv) } else { (rv, ru) };
            parent[hi] = lo;
        }
    }
    arcs.iter().map(|&a| (a, arcs[root(&mut parent, idx[&a])])).collect()
}

/// Deletes crossings, joining the strands through them. Merged arcs take the
/// smallest of their names; strands left without crossings become loops.
pub fn remove_crossings(d: &OrientedDiagram, ks: &[usize]) -> OrientedDiagram {
    let name = removal_names(d, ks);
    let mut kept = Vec::new();
    let mut used: BTreeSet<ArcId> = BTreeSet::new();
    for (k, c) in d.crossings().iter().enumerate() {
        if ks.contains(&k) {
            continue;
        }
        let renamed = c.arcs.map(|a| name[&a]);
        used.extend(renamed);
        kept.push(Crossing::new(renamed, c.sign));
    }
    let mut loops: BTreeSet<ArcId> = d.loops().iter().copied().collect();
    for &k in ks {
        for a in d.crossings()[k].arcs {
            if !used.contains(&name[&a]) {
                loops.insert(name[&a]);
            }
        }
    }
    OrientedDiagram::new(kept, loops.into_iter().collect()).expect("removing crossings keeps a valid diagram")
}

/// How a saddle acts on circles: two source arcs merge into the circle of
/// `into`, or one source arc's circle splits into the circles of `p` and `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SaddleShape {
    /// Arcs `a`, `b` of the source; `m` in the target. If `a` and `b` lie on
    /// the same circle at a vertex the saddle splits it into the circles of
    /// `a` and `b` in the target.
    Generic { a: ArcId, b: ArcId },
    Merge { a: ArcId, b: ArcId, m: ArcId },
    Split { a: ArcId, p: ArcId, q: ArcId },
}

pub(crate) fn saddle_shape(d: &OrientedDiagram, x: ArcId, y: ArcId) -> SaddleShape {
    let (lx, ly) = (d.loops().contains(&x), d.loops().contains(&y));
    let new = d.max_arc() + 1;
    match (x == y, lx, ly) {
        (true, _, _) => SaddleShape::Split { a: x, p: x, q: new },
        (false, false, false) => SaddleShape::Generic { a: x, b: y },
        (false, true, false) => SaddleShape::Merge { a: y, b: x, m: y },
        (false, false, true) => SaddleShape::Merge { a: x, b: y, m: x },
        (false, true, true) => SaddleShape::Merge { a: x, b: y, m: x.min(y) },
    }
}

fn saddle(d: &OrientedDiagram, x: ArcId, y: ArcId) -> Result<OrientedDiagram> {
    let arcs = d.arcs();
    for a in [x, y] {
        if !arcs.contains(&a) {
            return Err(illegal(format!("saddle arc {a} is not in the diagram")));
        }
    }
    let crossings = d.crossings().to_vec();
    let mut loops = d.loops().to_vec();
    match saddle_shape(d, x, y) {
        SaddleShape::Split { q, .. } => {
            loops.push(q);
            Ok(OrientedDiagram::new(crossings, loops)?)
        }
        SaddleShape::Merge { a, b, m } => {
            let gone = if m == a { b } else { a };
            loops.retain(|&l| l != gone);
            Ok(OrientedDiagram::new(crossings, loops)?)
        }
        SaddleShape::Generic { .. } => {
            let ok = d.faces().iter().any(|f| {
                matches!((f.direction_of(x), f.direction_of(y)), (Some(p), Some(q)) if p == q)
                    && f.boundary.iter().filter(|e| e.0 == x || e.0 == y).count() == 2
            });
            if !ok {
                return Err(illegal(format!("arcs {x} and {y} share no face with compatible orientations")));
            }
            let ends = d.arc_ends();
            let (hx, hy) = (ends[&x].0, ends[&y].0);
            let mut crossings = crossings;
            crossings[hx.0].arcs[hx.1] = y;
            crossings[hy.0].arcs[hy.1] = x;
            Ok(OrientedDiagram::new(crossings, loops)?)
        }
    }
}

fn relabel(d: &OrientedDiagram, arcs: &BTreeMap<ArcId, ArcId>, order: &[usize]) -> Result<OrientedDiagram> {
    let n = d.crossing_count();
    let order: Vec<usize> = if order.is_empty() { (0..n).collect() } else { order.to_vec() };
    let mut sorted = order.clone();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(illegal("relabel order is not a permutation of the crossings"));
    }
    let f = |a: ArcId| *arcs.get(&a).unwrap_or(&a);
    let images: BTreeSet<ArcId> = d.arcs().into_iter().map(f).collect();
    if images.len() != d.arcs().len() {
        return Err(illegal("relabel map is not injective"));
    }
    let crossings = order.iter().map(|&k| Crossing::new(d.crossings()[k].arcs.map(f), d.crossings()[k].sign)).collect();
    Ok(OrientedDiagram::new(crossings, d.loops().iter().map(|&a| f(a)).collect())?)
}

/// Third Reidemeister move on the triangle bounded by crossings `ks`.
/// Returns the new diagram, in which the three crossings are replaced (in
/// place, same indices) by the crossings on the far side of the moving strand.
pub(crate) fn r3(d: &OrientedDiagram, ks: [usize; 3]) -> Result<(OrientedDiagram, [ArcId; 3])> {
    let [k0, k1, k2] = ks;
    if k0 == k1 || k1 == k2 || k0 == k2 || ks.iter().any(|&k| k >= d.crossing_count()) {
        return Err(illegal("R3 needs three distinct crossings"));
    }
    let cs: Vec<Crossing> = ks.iter().map(|&k| d.crossings()[k]).collect();
    // the triangle face: three arcs, each joining two of the crossings
    let face = d
        .faces()
        .into_iter()
        .find(|f| {
            f.boundary.len() == 3
                && f.boundary.iter().all(|&(a, _)| cs.iter().filter(|c| c.arcs.contains(&a)).count() == 2)
        })
        .ok_or_else(|| illegal("crossings do not bound a triangle"))?;
    let tri: Vec<ArcId> = face.boundary.iter().map(|e| e.0).collect();
    // level of an arc: over (odd slot) or under (even slot) at each end
    let levels = |a: ArcId| -> Vec<(usize, usize)> {
        cs.iter()
            .enumerate()
            .filter_map(|(i, c)| c.arcs.iter().position(|&x| x == a).map(|p| (i, p % 2)))
            .collect()
    };
    // the top strand is over at both ends, the bottom under at both
    let mut top = None;
    let mut bottom = None;
    for &a in &tri {
        let l = levels(a);
        if l.len() != 2 {
            return Err(illegal("triangle arc meets a crossing twice"));
        }
        if l.iter().all(|e| e.1 == 1) {
            top = Some(a);
        } else if l.iter().all(|e| e.1 == 0) {
            bottom = Some(a);
        }
    }
    let (Some(_), Some(_)) = (top, bottom) else {
        return Err(illegal("triangle is not an R3 configuration"));
    };
    let out = r3_rewrite(d, ks, &tri)?;
    Ok((out, [tri[0], tri[1], tri[2]]))
}

/// Slides the triangle across itself. At each triangle crossing the two
/// triangle arcs keep their slots, each outer arc is replaced by the outer arc
/// of the same strand at that strand's other triangle crossing, and since every
/// strand now meets its two crossings in the opposite order the tuple is
/// rotated by two slots.
fn r3_rewrite(d: &OrientedDiagram, ks: [usize; 3], tri: &[ArcId]) -> Result<OrientedDiagram> {
    let orig = d.crossings();
    // outer arc of the strand through triangle arc `e` at crossing `k`
    let outer_at = |k: usize, e: ArcId| -> ArcId {
        let c = &orig[k];
        let slot = c.arcs.iter().position(|&a| a == e).expect("triangle arc at crossing");
        c.arcs[(slot + 2) % 4]
    };
    let mut outer_arcs: Vec<ArcId> = Vec::new();
    let mut crossings = orig.to_vec();
    for &k in &ks {
        let c = &orig[k];
        let mut t = c.arcs;
        for slot in 0..4 {
            let e = c.arcs[slot];
            if !tri.contains(&e) {
                continue;
            }
            let other = ks.iter().copied().find(|&k2| k2 != k && orig[k2].arcs.contains(&e)).expect("triangle arc has two ends");
            t[(slot + 2) % 4] = outer_at(other, e);
            outer_arcs.push(c.arcs[(slot + 2) % 4]);
        }
        crossings[k] = Crossing::new([t[2], t[3], t[0], t[1]], c.sign);
    }
    let distinct: BTreeSet<ArcId> = outer_arcs.iter().copied().collect();
    if distinct.len() != 6 || distinct.iter().any(|a| tri.contains(a)) {
        return Err(illegal("R3 triangle whose outer arcs are not six distinct arcs is not supported"));
    }
    OrientedDiagram::new(crossings, d.loops().to_vec()).map_err(|e| illegal(format!("R3 rewrite: {e}")))
}

/// A relabel move turning `a` into `b`, if the two diagrams differ only in arc
/// names and crossing order. Crossing slots are fixed by the PD convention, so
/// matching one crossing of each connected piece determines the rest.
pub fn find_isomorphism(a: &OrientedDiagram, b: &OrientedDiagram) -> Option<MovieMove> {
    let n = a.crossing_count();
    if n != b.crossing_count() || a.loops().len() != b.loops().len() {
        return None;
    }
    let (ea, eb) = (a.arc_ends(), b.arc_ends());
    let mut cmap: Vec<Option<usize>> = vec![None; n];
    let mut arcs: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    while let Some(seed) = cmap.iter().position(Option::is_none) {
        let used: BTreeSet<usize> = cmap.iter().flatten().copied().collect();
        let found = (0..n).filter(|j| !used.contains(j)).find_map(|j| {
            let (mut cm, mut am) = (cmap.clone(), arcs.clone());
            grow(a, b, &ea, &eb, seed, j, &mut cm, &mut am).then_some((cm, am))
        });
        (cmap, arcs) = found?;
    }
    for (&x, &y) in a.loops().iter().zip(b.loops()) {
        arcs.insert(x, y);
    }
    let mut order = vec![0; n];
    for (i, j) in cmap.iter().enumerate() {
        order[j.unwrap()] = i;
    }
    arcs.retain(|k, v| k != v);
    let mv = MovieMove::Relabel { arcs, order };
    (mv.apply(a).ok()? == *b).then_some(mv)
}

#[allow(clippy::too_many_arguments)]
fn grow(
    a: &OrientedDiagram,
    b: &OrientedDiagram,
    ea: &HashMap<ArcId, ((usize, usize), (usize, usize))>,
    eb: &HashMap<ArcId, ((usize, usize), (usize, usize))>,
    i0: usize,
    j0: usize,
    cmap: &mut [Option<usize>],
    arcs: &mut BTreeMap<ArcId, ArcId>,
) -> bool {
    let taken: BTreeSet<ArcId> = arcs.values().copied().collect();
    let mut taken = taken;
    let mut stack = vec![(i0, j0)];
    while let Some((i, j)) = stack.pop() {
        match cmap[i] {
            Some(k) if k == j => continue,
            Some(_) => return false,
            None => {}
        }
        if cmap.contains(&Some(j)) || a.crossings()[i].sign != b.crossings()[j].sign {
            return false;
        }
        cmap[i] = Some(j);
        for pos in 0..4 {
            let (x, y) = (a.crossings()[i].arcs[pos], b.crossings()[j].arcs[pos]);
            match arcs.get(&x) {
                Some(&z) if z != y => return false,
                Some(_) => {}
                None => {
                    if !taken.insert(y) {
                        return false;
                    }
                    arcs.insert(x, y);
                }
            }
            let ((ha, ta), (hb, tb)) = (ea[&x], eb[&y]);
            if ha.1 != hb.1 || ta.1 != tb.1 {
                return false;
            }
            stack.push((ha.0, hb.0));
            stack.push((ta.0, tb.0));
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> OrientedDiagram {
        OrientedDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]").unwrap()
    }

    #[test]
    fn r1_round_trip() {
        let t = trefoil();
        for sign in [Sign::Positive, Sign::Negative] {
            for under_first in [true, false] {
                let m = MovieMove::R1Add { arc: 3, sign, under_first };
                let k = m.apply(&t).unwrap();
                assert_eq!(k.crossing_count(), 4);
                assert_eq!(k.crossings()[3].sign, sign);
                let back = MovieMove::R1Remove { crossing: 3 }.apply(&k).unwrap();
                assert_eq!(back, t);
            }
        }
        let u = OrientedDiagram::unknot(1);
        let k = MovieMove::R1Add { arc: 1, sign: Sign::Positive, under_first: true }.apply(&u).unwrap();
        assert_eq!(k.crossing_count(), 1);
        assert_eq!(MovieMove::R1Remove { crossing: 0 }.apply(&k).unwrap(), u);
    }

    #[test]
    fn r2_round_trip() {
        let t = trefoil();
        let faces = t.faces();
        let f = faces.iter().find(|f| f.boundary.len() == 3).unwrap();
        let (x, y) = (f.boundary[0].0, f.boundary[1].0);
        let big = MovieMove::R2Add { over: x, under: y, face: 0 }.apply(&t).unwrap();
        assert_eq!(big.crossing_count(), 5);
        assert_eq!(big.writhe(), t.writhe());
        let back = MovieMove::R2Remove { crossings: [3, 4] }.apply(&big).unwrap();
        assert_eq!(back, t);
        assert!(MovieMove::R2Remove { crossings: [0, 1] }.apply(&t).is_err());
    }

    #[test]
    fn saddles_and_caps() {
        let u = OrientedDiagram::unknot(1);
        let two = MovieMove::Saddle { arcs: [1, 1] }.apply(&u).unwrap();
        assert_eq!(two.loops(), &[1, 2]);
        let one = MovieMove::Saddle { arcs: [1, 2] }.apply(&two).unwrap();
        assert_eq!(one, u);
        let none = MovieMove::Death { arc: 1 }.apply(&u).unwrap();
        assert!(none.is_empty());
        assert!(MovieMove::Death { arc: 1 }.apply(&trefoil()).is_err());
        assert_eq!(MovieMove::Birth { arc: 1 }.apply(&none).unwrap(), u);
    }

    #[test]
    fn band_on_hopf_gives_unknot() {
        let h = OrientedDiagram::parse_pd("X[1,3,2,4]\nX[3,1,4,2]").unwrap();
        let mut merged = None;
        for a in 1..=4 {
            for b in a + 1..=4 {
                if let Ok(d) = (MovieMove::Saddle { arcs: [a, b] }).apply(&h) {
                    merged = Some(d);
                }
            }
        }
        let d = merged.expect("some band merges the two components");
        assert_eq!(d.components().len(), 1);
    }

    #[test]
    fn r3_is_an_involution_preserving_jones() {
        use crate::jones::jones_polynomial;
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/corpus");
        let mut moved = 0;
        let mut names: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        names.sort();
        for path in names {
            let d = OrientedDiagram::parse_pd(&std::fs::read_to_string(&path).unwrap()).unwrap();
            if d.crossing_count() > 10 {
                continue;
            }
            let ends = d.arc_ends();
            for f in d.faces().into_iter().filter(|f| f.boundary.len() == 3) {
                let mut ks: Vec<usize> = f.boundary.iter().flat_map(|e| [ends[&e.0].0 .0, ends[&e.0].1 .0]).collect();
                ks.sort_unstable();
                ks.dedup();
                let Ok(ks) = <[usize; 3]>::try_from(ks) else { continue };
                let Ok(after) = (MovieMove::R3 { crossings: ks }).apply(&d) else { continue };
                assert_eq!(after.writhe(), d.writhe());
                assert_eq!(jones_polynomial(&after), jones_polynomial(&d), "{path:?}");
                assert_ne!(after, d);
                assert_eq!((MovieMove::R3 { crossings: ks }).apply(&after).unwrap(), d, "{path:?}");
                moved += 1;
            }
        }
        assert!(moved >= 3, "only {moved} R3 moves found");
    }
}
