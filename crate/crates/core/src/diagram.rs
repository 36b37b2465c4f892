//! Oriented planar link diagrams stored as planar-diagram (PD) codes.
//!
//! A crossing is a 4-tuple of arc ids listed counterclockwise, starting at the
//! incoming under-strand. The under-strand runs from position 0 to position 2.
//! The over-strand runs 3 -> 1 at a positive crossing and 1 -> 3 at a negative
//! one. Crossingless components are kept separately as loops.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;

pub type ArcId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub arcs: [ArcId; 4],
    pub sign: Sign,
}

impl Crossing {
    pub fn new(arcs: [ArcId; 4], sign: Sign) -> Self {
        Crossing { arcs, sign }
    }

    /// Position at which the over-strand enters.
    pub fn over_in(&self) -> usize {
        match self.sign {
            Sign::Positive => 3,
            Sign::Negative => 1,
        }
    }

    pub fn over_out(&self) -> usize {
        match self.sign {
            Sign::Positive => 1,
            Sign::Negative => 3,
        }
    }

    pub fn is_incoming(&self, pos: usize) -> bool {
        pos == 0 || pos == self.over_in()
    }

    /// Outgoing position reached after entering at `pos`.
    pub fn exit_of(&self, pos: usize) -> usize {
        debug_assert!(self.is_incoming(pos));
        if pos == 0 {
            2
        } else {
            self.over_out()
        }
    }

    /// Arc pairs joined by the 0-smoothing and by the 1-smoothing.
    ///
    /// The 0-smoothing joins positions (0,1) and (2,3); at a positive crossing
    /// this is the oriented resolution.
    pub fn smoothing(&self, bit: bool) -> [(ArcId, ArcId); 2] {
        let [a, b, c, d] = self.arcs;
        if bit {
            [(a, d), (b, c)]
        } else {
            [(a, b), (c, d)]
        }
    }

    /// The mirrored crossing: over and under strands swapped, sign flipped.
    pub fn mirrored(&self) -> Crossing {
        let [a, b, c, d] = self.arcs;
        match self.sign {
            Sign::Positive => Crossing::new([d, a, b, c], Sign::Negative),
            Sign::Negative => Crossing::new([b, c, d, a], Sign::Positive),
        }
    }

    /// The same geometric crossing with its under-strand orientation reversed.
    fn under_reversed(&self) -> Crossing {
        let [a, b, c, d] = self.arcs;
        Crossing::new([c, d, a, b], self.sign.flip())
    }
}

/// A position on a crossing: (crossing index, slot 0..4).
pub type Dart = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientedDiagram {
    crossings: Vec<Crossing>,
    loops: Vec<ArcId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Arcs in traversal order, starting from the smallest arc id.
    pub arcs: Vec<ArcId>,
    pub is_loop: bool,
}

/// A face of the diagram: the boundary arcs in walking order, each flagged
/// with whether the walk follows the arc's orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub boundary: Vec<(ArcId, bool)>,
}

impl Face {
    pub fn contains(&self, arc: ArcId) -> bool {
        self.boundary.iter().any(|&(a, _)| a == arc)
    }

    pub fn direction_of(&self, arc: ArcId) -> Option<bool> {
        self.boundary.iter().find(|&&(a, _)| a == arc).map(|&(_, d)| d)
    }
}

impl OrientedDiagram {
    pub fn empty() -> Self {
        OrientedDiagram { crossings: Vec::new(), loops: Vec::new() }
    }

    /// Builds a diagram from oriented crossings, checking that every arc has
    /// exactly one head and one tail and that loops are disjoint from them.
    pub fn new(crossings: Vec<Crossing>, mut loops: Vec<ArcId>) -> Result<Self, DiagramError> {
        let mut heads: HashMap<ArcId, usize> = HashMap::new();
        let mut tails: HashMap<ArcId, usize> = HashMap::new();
        for c in &crossings {
            for pos in 0..4 {
                let slot = if c.is_incoming(pos) { &mut heads } else { &mut tails };
                *slot.entry(c.arcs[pos]).or_default() += 1;
            }
        }
        let arcs: BTreeSet<ArcId> = heads.keys().chain(tails.keys()).copied().collect();
        for &a in &arcs {
            let h = heads.get(&a).copied().unwrap_or(0);
            let t = tails.get(&a).copied().unwrap_or(0);
            if h + t != 2 {
                return Err(DiagramError::ArcMultiplicity { arc: a, count: h + t });
            }
            if h != 1 {
                return Err(DiagramError::Orientation { arc: a });
            }
        }
        loops.sort_unstable();
        for w in loops.windows(2) {
            if w[0] == w[1] {
                return Err(DiagramError::ArcMultiplicity { arc: w[0], count: 2 });
            }
        }
        for l in &loops {
            if arcs.contains(l) {
                return Err(DiagramError::ArcMultiplicity { arc: *l, count: 3 });
            }
        }
        Ok(OrientedDiagram { crossings, loops })
    }

    /// A single crossingless circle with the given arc id.
    pub fn unknot(arc: ArcId) -> Self {
        OrientedDiagram { crossings: Vec::new(), loops: vec![arc] }
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn loops(&self) -> &[ArcId] {
        &self.loops
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty() && self.loops.is_empty()
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign == Sign::Positive).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.len() - self.n_plus()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign.as_i64()).sum()
    }

    /// All arc ids, crossing arcs and loops together, sorted.
    pub fn arcs(&self) -> Vec<ArcId> {
        let mut v: BTreeSet<ArcId> = self.crossings.iter().flat_map(|c| c.arcs).collect();
        v.extend(self.loops.iter().copied());
        v.into_iter().collect()
    }

    pub fn max_arc(&self) -> ArcId {
        self.arcs().last().copied().unwrap_or(0)
    }

    /// (head dart, tail dart) of every crossing arc.
    pub fn arc_ends(&self) -> HashMap<ArcId, (Dart, Dart)> {
        let mut head: HashMap<ArcId, Dart> = HashMap::new();
        let mut tail: HashMap<ArcId, Dart> = HashMap::new();
        for (x, c) in self.crossings.iter().enumerate() {
            for pos in 0..4 {
                if c.is_incoming(pos) {
                    head.insert(c.arcs[pos], (x, pos));
                } else {
                    tail.insert(c.arcs[pos], (x, pos));
                }
            }
        }
        head.into_iter().map(|(a, h)| (a, (h, tail[&a]))).collect()
    }

    /// Components in order of their smallest arc id.
    pub fn components(&self) -> Vec<Component> {
        let ends = self.arc_ends();
        let mut seen: BTreeSet<ArcId> = BTreeSet::new();
        let mut out = Vec::new();
        let mut starts: Vec<ArcId> = ends.keys().copied().collect();
        starts.sort_unstable();
        for start in starts {
            if seen.contains(&start) {
                continue;
            }
            let mut arcs = Vec::new();
            let mut a = start;
            loop {
                seen.insert(a);
                arcs.push(a);
                let (x, pos) = ends[&a].0;
                let c = &self.crossings[x];
                a = c.arcs[c.exit_of(pos)];
                if a == start {
                    break;
                }
            }
            out.push(Component { arcs, is_loop: false });
        }
        for &l in &self.loops {
            out.push(Component { arcs: vec![l], is_loop: true });
        }
        out.sort_by_key(|c| c.arcs[0]);
        out
    }

    /// Map from arc id to component index (in `components()` order).
    pub fn component_of_arcs(&self) -> HashMap<ArcId, usize> {
        let mut m = HashMap::new();
        for (i, c) in self.components().iter().enumerate() {
            for &a in &c.arcs {
                m.insert(a, i);
            }
        }
        m
    }

    /// Linking number between two components (indices into `components()`).
    pub fn linking_number(&self, i: usize, j: usize) -> i64 {
        let comp = self.component_of_arcs();
        let mut total = 0;
        for c in &self.crossings {
            let u = comp[&c.arcs[0]];
            let o = comp[&c.arcs[1]];
            if (u == i && o == j) || (u == j && o == i) {
                total += c.sign.as_i64();
            }
        }
        total / 2
    }

    /// Faces of the diagram as boundary walks. Loops are not included.
    pub fn faces(&self) -> Vec<Face> {
        let ends = self.arc_ends();
        let other_end = |d: Dart| -> Dart {
            let a = self.crossings[d.0].arcs[d.1];
            let (h, t) = ends[&a];
            if h == d {
                t
            } else {
                h
            }
        };
        let mut used: BTreeSet<Dart> = BTreeSet::new();
        let mut faces = Vec::new();
        for x in 0..self.crossings.len() {
            for pos in 0..4 {
                if used.contains(&(x, pos)) {
                    continue;
                }
                let mut boundary = Vec::new();
                let mut d = (x, pos);
                while used.insert(d) {
                    let a = self.crossings[d.0].arcs[d.1];
                    let e = other_end(d);
                    // leaving through a tail dart means walking along the orientation
                    let forward = !self.crossings[d.0].is_incoming(d.1);
                    boundary.push((a, forward));
                    d = (e.0, (e.1 + 1) % 4);
                }
                faces.push(Face { boundary });
            }
        }
        faces
    }

    /// Number of connected pieces of the crossing graph.
    fn crossing_pieces(&self) -> usize {
        let n = self.crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for (a, (h, t)) in self.arc_ends() {
            let _ = a;
            let (rh, rt) = (find(&mut parent, h.0), find(&mut parent, t.0));
            parent[rh] = rt;
        }
        (0..n).filter(|&i| find(&mut parent, i) == i).count()
    }

    /// Checks the Euler characteristic of the rotation system: each connected
    /// piece must embed in the sphere.
    pub fn check_planar(&self) -> Result<(), DiagramError> {
        let v = self.crossings.len();
        if v == 0 {
            return Ok(());
        }
        let faces = self.faces().len();
        let expected = v + 2 * self.crossing_pieces();
        if faces != expected {
            return Err(DiagramError::NotPlanar { faces, expected });
        }
        Ok(())
    }

    pub fn mirror(&self) -> Self {
        OrientedDiagram {
            crossings: self.crossings.iter().map(Crossing::mirrored).collect(),
            loops: self.loops.clone(),
        }
    }

    /// Reverses the orientation of the listed components.
    pub fn reverse_components(&self, which: &[usize]) -> Self {
        let comp = self.component_of_arcs();
        let rev = |a: ArcId| which.contains(&comp[&a]);
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let under = rev(c.arcs[0]);
                let over = rev(c.arcs[1]);
                let mut out = if under { c.under_reversed() } else { *c };
                if over {
                    out.sign = out.sign.flip();
                }
                out
            })
            .collect();
        OrientedDiagram { crossings, loops: self.loops.clone() }
    }

    /// Renames arcs through `f`; `f` must be injective on this diagram's arcs.
    pub fn relabel(&self, f: impl Fn(ArcId) -> ArcId) -> Self {
        OrientedDiagram {
            crossings: self
                .crossings
                .iter()
                .map(|c| Crossing::new(c.arcs.map(&f), c.sign))
                .collect(),
            loops: {
                let mut l: Vec<ArcId> = self.loops.iter().map(|&a| f(a)).collect();
                l.sort_unstable();
                l
            },
        }
    }

    /// Relabels arcs 1, 2, ... in order of first appearance.
    pub fn canonical(&self) -> Self {
        let mut map: BTreeMap<ArcId, ArcId> = BTreeMap::new();
        let mut next = 1;
        for c in &self.crossings {
            for a in c.arcs {
                map.entry(a).or_insert_with(|| {
                    next += 1;
                    next - 1
                });
            }
        }
        for &l in &self.loops {
            map.entry(l).or_insert_with(|| {
                next += 1;
                next - 1
            });
        }
        self.relabel(|a| map[&a])
    }

    pub fn disjoint_union(&self, other: &Self) -> Self {
        let offset = self.max_arc();
        let shifted = other.relabel(|a| a + offset);
        let mut crossings = self.crossings.clone();
        crossings.extend(shifted.crossings);
        let mut loops = self.loops.clone();
        loops.extend(shifted.loops);
        loops.sort_unstable();
        OrientedDiagram { crossings, loops }
    }

    /// Parses the PD text format (see `docs/FORMATS.md`).
    pub fn parse_pd(text: &str) -> Result<Self, DiagramError> {
        pd::parse(text)
    }

    pub fn to_pd_string(&self) -> String {
        pd::serialize(self)
    }
}

impl fmt::Display for OrientedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

mod pd {
    use super::*;

    struct Raw {
        crossings: Vec<[ArcId; 4]>,
        loops: Vec<ArcId>,
        orient: Vec<(usize, i32, usize)>,
    }

    fn syntax(line: usize, message: impl Into<String>) -> DiagramError {
        DiagramError::Syntax { line, message: message.into() }
    }

    fn parse_ids(line: usize, body: &str) -> Result<Vec<ArcId>, DiagramError> {
        body.split(',')
            .map(|s| s.trim().parse::<ArcId>().map_err(|_| syntax(line, format!("bad arc id `{}`", s.trim()))))
            .collect()
    }

    fn parse_raw(text: &str) -> Result<Raw, DiagramError> {
        let mut raw = Raw { crossings: Vec::new(), loops: Vec::new(), orient: Vec::new() };
        for (idx, full) in text.lines().enumerate() {
            let line = idx + 1;
            let s = full.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            if let Some(rest) = s.strip_prefix("orient:") {
                for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    let (k, v) = item
                        .split_once(':')
                        .ok_or_else(|| syntax(line, format!("bad orientation entry `{item}`")))?;
                    let k: usize = k.trim().parse().map_err(|_| syntax(line, "bad component index"))?;
                    let v: i32 = match v.trim() {
                        "+1" | "1" => 1,
                        "-1" => -1,
                        other => return Err(syntax(line, format!("orientation must be ±1, got `{other}`"))),
                    };
                    if k == 0 {
                        return Err(syntax(line, "component indices start at 1"));
                    }
                    raw.orient.push((k, v, line));
                }
                continue;
            }
            let (tag, body) = s
                .split_once('[')
                .ok_or_else(|| syntax(line, format!("expected X[...] or O[...], got `{s}`")))?;
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| syntax(line, "missing closing bracket"))?;
            let ids = parse_ids(line, body)?;
            match tag.trim() {
                "X" => {
                    let arr: [ArcId; 4] =
                        ids.try_into().map_err(|_| syntax(line, "a crossing needs exactly 4 arcs"))?;
                    raw.crossings.push(arr);
                }
                "O" => {
                    if ids.len() != 1 {
                        return Err(syntax(line, "a loop needs exactly 1 arc"));
                    }
                    raw.loops.push(ids[0]);
                }
                other => return Err(syntax(line, format!("unknown tag `{other}`"))),
            }
        }
        Ok(raw)
    }

    /// Orientation of an unsigned PD code: for every arc, the dart it enters.
    fn orient_raw(crossings: &[[ArcId; 4]]) -> Result<Vec<(ArcId, Dart, Dart)>, DiagramError> {
        let mut occ: BTreeMap<ArcId, Vec<Dart>> = BTreeMap::new();
        for (x, c) in crossings.iter().enumerate() {
            for (p, &a) in c.iter().enumerate() {
                occ.entry(a).or_default().push((x, p));
            }
        }
        for (&a, v) in &occ {
            if v.len() != 2 {
                return Err(DiagramError::ArcMultiplicity { arc: a, count: v.len() });
            }
        }
        let mut assigned: BTreeMap<ArcId, (Dart, Dart)> = BTreeMap::new();
        for (&start, v) in &occ {
            if assigned.contains_key(&start) {
                continue;
            }
            // walk the strand in both directions, find the one consistent with under passes
            let walk = |head: Dart| -> Vec<(ArcId, Dart, Dart)> {
                let mut out = Vec::new();
                let mut a = start;
                let mut h = head;
                loop {
                    let t = if occ[&a][0] == h { occ[&a][1] } else { occ[&a][0] };
                    out.push((a, h, t));
                    let next_pos = (h.1 + 2) % 4;
                    let na = crossings[h.0][next_pos];
                    let nd = (h.0, next_pos);
                    // the next arc leaves through nd; its head is the other occurrence
                    let nh = if occ[&na][0] == nd { occ[&na][1] } else { occ[&na][0] };
                    if na == start && nh == head {
                        break;
                    }
                    a = na;
                    h = nh;
                    if out.len() > occ.len() + 1 {
                        break;
                    }
                }
                out
            };
            let fwd = walk(v[0]);
            let votes = |w: &[(ArcId, Dart, Dart)]| -> (usize, usize) {
                let mut agree = 0;
                let mut disagree = 0;
                for &(_, h, _) in w {
                    match h.1 {
                        0 => agree += 1,
                        2 => disagree += 1,
                        _ => {}
                    }
                }
                (agree, disagree)
            };
            let (agree, disagree) = votes(&fwd);
            let chosen = if agree > 0 && disagree > 0 {
                return Err(DiagramError::Orientation { arc: start });
            } else if agree > 0 {
                fwd
            } else if disagree > 0 {
                walk(v[1])
            } else {
                // over-only strand: enter the smallest arc so that the next arc is the smaller one
                let bwd = walk(v[1]);
                let key = |w: &[(ArcId, Dart, Dart)]| {
                    let next = w.get(1).map(|e| e.0).unwrap_or(w[0].0);
                    (next, w[0].1)
                };
                if key(&fwd) <= key(&bwd) {
                    fwd
                } else {
                    bwd
                }
            };
            for (a, h, t) in chosen {
                assigned.insert(a, (h, t));
            }
        }
        Ok(assigned.into_iter().map(|(a, (h, t))| (a, h, t)).collect())
    }

    pub(super) fn parse(text: &str) -> Result<OrientedDiagram, DiagramError> {
        let raw = parse_raw(text)?;
        let heads = orient_raw(&raw.crossings)?;
        let mut incoming: BTreeSet<Dart> = BTreeSet::new();
        for &(_, h, _) in &heads {
            incoming.insert(h);
        }
        let mut crossings = Vec::with_capacity(raw.crossings.len());
        for (x, arr) in raw.crossings.iter().enumerate() {
            let [a, b, c, d] = *arr;
            let under_fwd = incoming.contains(&(x, 0));
            let (arcs, over_from_3) = if under_fwd {
                ([a, b, c, d], incoming.contains(&(x, 3)))
            } else {
                ([c, d, a, b], incoming.contains(&(x, 1)))
            };
            let sign = if over_from_3 { Sign::Positive } else { Sign::Negative };
            crossings.push(Crossing::new(arcs, sign));
        }
        let diagram = OrientedDiagram::new(crossings, raw.loops)?;
        if raw.orient.is_empty() {
            return Ok(diagram);
        }
        let count = diagram.components().len();
        let mut flips = Vec::new();
        for &(k, v, _) in &raw.orient {
            if k > count {
                return Err(DiagramError::UnknownComponent { index: k, count });
            }
            if v < 0 {
                flips.push(k - 1);
            }
        }
        Ok(diagram.reverse_components(&flips))
    }

    pub(super) fn serialize(d: &OrientedDiagram) -> String {
        let mut out = String::new();
        // components whose orientation differs from the one the tuples imply
        let unsigned: Vec<[ArcId; 4]> = d.crossings.iter().map(|c| c.arcs).collect();
        let implied = orient_raw(&unsigned).expect("valid diagram");
        let implied_head: HashMap<ArcId, Dart> = implied.iter().map(|&(a, h, _)| (a, h)).collect();
        let actual = d.arc_ends();
        let mut flips = Vec::new();
        for (i, comp) in d.components().iter().enumerate() {
            if comp.is_loop {
                continue;
            }
            let a = comp.arcs[0];
            if implied_head[&a] != actual[&a].0 {
                flips.push(i + 1);
            }
        }
        if !flips.is_empty() {
            let items: Vec<String> = flips.iter().map(|k| format!("{k}:-1")).collect();
            out.push_str(&format!("orient: {}\n", items.join(", ")));
        }
        for c in &d.crossings {
            let [a, b, cc, dd] = c.arcs;
            out.push_str(&format!("X[{a},{b},{cc},{dd}]\n"));
        }
        for l in &d.loops {
            out.push_str(&format!("O[{l}]\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TREFOIL_RIGHT: &str = "X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]\n";

    #[test]
    fn empty_code_is_empty_diagram() {
        let d = OrientedDiagram::parse_pd("").unwrap();
        assert!(d.is_empty());
        assert_eq!(d.components().len(), 0);
    }

    #[test]
    fn one_crossing_kink() {
        let d = OrientedDiagram::parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!(d.n_plus() + d.n_minus(), 1);
        assert_eq!(d.components().len(), 1);
        assert!(d.check_planar().is_ok());
    }

    #[test]
    fn trefoil_signs() {
        let d = OrientedDiagram::parse_pd(TREFOIL_RIGHT).unwrap();
        assert_eq!(d.n_plus(), 3);
        assert_eq!(d.faces().len(), 5);
        let m = d.mirror();
        assert_eq!(m.n_minus(), 3);
        assert_eq!(m.mirror(), d);
    }

    #[test]
    fn mirror_of_positive_kink_is_negative() {
        let d = OrientedDiagram::parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!(d.n_plus(), 1);
        let m = d.mirror();
        assert_eq!(m.n_minus(), 1);
        assert!(OrientedDiagram::empty().mirror().is_empty());
    }

    #[test]
    fn multiplicity_error() {
        let e = OrientedDiagram::parse_pd("X[1,2,3,4]").unwrap_err();
        assert!(matches!(e, DiagramError::ArcMultiplicity { .. }));
    }

    #[test]
    fn orientation_error() {
        let e = OrientedDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[2,3,5,6]\n").unwrap_err();
        assert!(matches!(e, DiagramError::Orientation { .. }), "{e:?}");
    }

    #[test]
    fn syntax_errors() {
        for bad in ["Y[1,2,3,4]", "X[1,2,3]", "X[1,2,a,4]", "orient: 1:+2", "X[1,1,2,2"] {
            let e = OrientedDiagram::parse_pd(bad).unwrap_err();
            assert!(matches!(e, DiagramError::Syntax { .. }), "{bad}: {e:?}");
        }
    }

    #[test]
    fn orientation_header_reverses_component() {
        // Hopf link; reversing one component flips both crossing signs
        let text = "X[1,3,2,4]\nX[3,1,4,2]\n";
        let d = OrientedDiagram::parse_pd(text).unwrap();
        assert_eq!(d.components().len(), 2);
        let r = OrientedDiagram::parse_pd(&format!("orient: 2:-1\n{text}")).unwrap();
        assert_eq!(d.writhe(), -r.writhe());
        assert_eq!(d.linking_number(0, 1), -r.linking_number(0, 1));
        let back = OrientedDiagram::parse_pd(&r.to_pd_string()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn disjoint_union_unit() {
        let d = OrientedDiagram::parse_pd(TREFOIL_RIGHT).unwrap();
        assert_eq!(OrientedDiagram::empty().disjoint_union(&d), d);
        let two = d.disjoint_union(&d);
        assert_eq!(two.components().len(), 2);
        assert_eq!(two.linking_number(0, 1), 0);
    }
}
