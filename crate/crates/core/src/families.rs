//! Diagram generators: braid closures, mixed-orientation torus links and
//! twist-region families.

use serde::{Deserialize, Serialize};

use crate::diagram::{ArcId, Crossing, OrientedDiagram, Sign};
use crate::error::DiagramError;

/// Closure of a braid on `strands` strands. Generator `i > 0` is the positive
/// crossing between positions `i-1` and `i`; `-i` is its inverse.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<OrientedDiagram, DiagramError> {
    if strands == 0 {
        return Ok(OrientedDiagram::empty());
    }
    let mut next: ArcId = 1;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let start: Vec<ArcId> = (0..strands).map(|_| fresh()).collect();
    let mut cur = start.clone();
    let mut crossings = Vec::with_capacity(word.len());
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if g == 0 || i >= strands {
            return Err(DiagramError::Invalid(format!("braid generator {g} out of range")));
        }
        let (bl, br) = (cur[i - 1], cur[i]);
        let (tl, tr) = (fresh(), fresh());
        // corners counterclockwise: SW=bl, SE=br, NE=tr, NW=tl
        if g > 0 {
            crossings.push(Crossing::new([br, tr, tl, bl], Sign::Positive));
        } else {
            crossings.push(Crossing::new([bl, br, tr, tl], Sign::Negative));
        }
        cur[i - 1] = tl;
        cur[i] = tr;
    }
    let mut loops = Vec::new();
    let mut rename = std::collections::HashMap::new();
    for k in 0..strands {
        if cur[k] == start[k] {
            loops.push(start[k]);
        } else {
            rename.insert(cur[k], start[k]);
        }
    }
    let crossings = crossings
        .into_iter()
        .map(|c| Crossing::new(c.arcs.map(|a| *rename.get(&a).unwrap_or(&a)), c.sign))
        .collect();
    OrientedDiagram::new(crossings, loops)
}

/// The (p+q, p+q) torus link drawn as the closure of the full twist, with the
/// last `q` strands reversed. Strands with equal orientation cross positively.
pub fn torus_link(p: usize, q: usize) -> Result<OrientedDiagram, DiagramError> {
    let n = p + q;
    if n == 0 {
        return Err(DiagramError::Invalid("torus link needs p + q >= 1".into()));
    }
    let word: Vec<i32> = (0..n).flat_map(|_| 1..n as i32).collect();
    let d = braid_closure(n, &word)?;
    let reversed: Vec<usize> = (p..n).collect();
    Ok(d.reverse_components(&reversed))
}

/// Inserts `half_twists` crossings between arcs `x` and `y`, which must lie on
/// a common face (the `face_hint`-th such face). Positive counts give a
/// right-handed twist: positive crossings when the two strands run parallel.
pub fn insert_twists(
    d: &OrientedDiagram,
    x: ArcId,
    y: ArcId,
    half_twists: i32,
    face_hint: usize,
) -> Result<OrientedDiagram, DiagramError> {
    if half_twists == 0 {
        return Ok(d.clone());
    }
    let ne_sw_over = half_twists < 0;
    insert_crossings(d, x, y, half_twists.unsigned_abs() as usize, face_hint, |_, x_on_ne_sw| x_on_ne_sw == ne_sw_over)
}

/// Inserts `h` crossings between arcs `x` and `y` across a shared face, laid
/// out as a twist region; `x_over(j, x_on_ne_sw)` decides which strand is over
/// at the `j`-th new crossing. New crossings are appended in order.
pub(crate) fn insert_crossings(
    d: &OrientedDiagram,
    x: ArcId,
    y: ArcId,
    h: usize,
    face_hint: usize,
    x_over: impl Fn(usize, bool) -> bool,
) -> Result<OrientedDiagram, DiagramError> {
    if x == y {
        return Err(DiagramError::Invalid("twist region needs two distinct arcs".into()));
    }
    let faces: Vec<_> = d.faces().into_iter().filter(|f| f.contains(x) && f.contains(y)).collect();
    let face = faces
        .get(face_hint)
        .ok_or_else(|| DiagramError::Invalid(format!("arcs {x} and {y} share no face #{face_hint}")))?;
    if face.boundary.iter().filter(|e| e.0 == x || e.0 == y).count() != 2 {
        return Err(DiagramError::Invalid("arc appears twice on the twist face".into()));
    }
    let dx = face.direction_of(x).unwrap();
    let dy = face.direction_of(y).unwrap();

    let ends = d.arc_ends();
    let mut crossings: Vec<Crossing> = d.crossings().to_vec();
    let mut next = d.max_arc() + 1;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    // x pieces in walk order: x, x1..x_{h-1}, x_end ; y pieces walk right-to-left
    let xs: Vec<ArcId> = std::iter::once(x).chain((0..h).map(|_| fresh())).collect();
    let y_left = fresh();
    let y_mid: Vec<ArcId> = (0..h.saturating_sub(1)).map(|_| fresh()).collect();
    // the walk along x ends at its head if the walk follows the orientation
    let x_end = if dx { ends[&x].0 } else { ends[&x].1 };
    let y_end = if dy { ends[&y].0 } else { ends[&y].1 };
    crossings[x_end.0].arcs[x_end.1] = xs[h];
    crossings[y_end.0].arcs[y_end.1] = y_left;

    let y_left_of = |j: usize| if j == 0 { y_left } else { y_mid[j - 1] };
    let y_right_of = |j: usize| if j + 1 == h { y } else { y_mid[j] };
    const SW: usize = 0;
    const SE: usize = 1;
    const NE: usize = 2;
    const NW: usize = 3;
    for j in 0..h {
        let mut corners = [0; 4];
        // (walk-from corner, walk-to corner) for x and y
        let (xf, xt, yf, yt) = if j % 2 == 0 { (NW, SE, NE, SW) } else { (SW, NE, SE, NW) };
        corners[xf] = xs[j];
        corners[xt] = xs[j + 1];
        corners[yf] = y_right_of(j);
        corners[yt] = y_left_of(j);
        let (x_in, y_in) = (if dx { xf } else { xt }, if dy { yf } else { yt });
        let x_on_ne_sw = x_in == NE || x_in == SW;
        let (under_in, over_in) = if x_over(j, x_on_ne_sw) { (y_in, x_in) } else { (x_in, y_in) };
        let arcs = [0, 1, 2, 3].map(|k| corners[(under_in + k) % 4]);
        let over_pos = (over_in + 4 - under_in) % 4;
        let sign = if over_pos == 3 { Sign::Positive } else { Sign::Negative };
        crossings.push(Crossing::new(arcs, sign));
    }
    let out = OrientedDiagram::new(crossings, d.loops().to_vec())?;
    out.check_planar()?;
    Ok(out)
}

/// A diagram with a marked twist region; instance `k` carries `k` extra full
/// twists there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistFamilyTemplate {
    pub name: String,
    pub base: OrientedDiagram,
    pub arcs: (ArcId, ArcId),
    /// +1 or -1: handedness of each inserted full twist.
    pub handedness: i32,
    #[serde(default)]
    pub face_hint: usize,
    /// Value of the family parameter realised by `base`.
    #[serde(default)]
    pub base_k: i64,
}

impl TwistFamilyTemplate {
    pub fn instantiate(&self, k: i64) -> Result<OrientedDiagram, DiagramError> {
        if k < self.base_k {
            return Err(DiagramError::Invalid(format!(
                "family `{}` is defined for k >= {}, got {k}",
                self.name, self.base_k
            )));
        }
        let extra = (k - self.base_k) as i32;
        insert_twists(&self.base, self.arcs.0, self.arcs.1, 2 * extra * self.handedness.signum(), self.face_hint)
    }
}
