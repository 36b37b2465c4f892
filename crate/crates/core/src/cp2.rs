//! Surfaces in the punctured complex projective plane: the quantum degree
//! `gr_q(p,q)`, the projection of `Kh(T(p+q,p+q)_{p,q})` onto its bottom
//! summand in homological degree 0, and the functional of a surface
//! presented by a neck movie ending at that torus link.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cobordism::{
    find_isomorphism, functional_on_homology, homology_map, pull_back, reverse_movie, Functional, Movie, MovieMove,
};
use crate::diagram::{ArcId, OrientedDiagram};
use crate::error::{KhError, Result};
use crate::families::torus_link;
use crate::khovanov::homology::{group_at, HomologyGroup};
use crate::khovanov::{build_block, simplify, Algebra, Cube};
use crate::ribbon::{bands_to_movie, simplify_diagram, BandPresentation, FRAME_CAP};

pub const CP2_FORMAT_VERSION: u32 = 1;

/// Quantum degree of the bottom summand: `(p-q)^2 - 2 max(p,q)`.
pub fn grq(p: usize, q: usize) -> Result<i32> {
    if p + q == 0 {
        return Err(KhError::Invalid("gr_q needs p + q >= 1".into()));
    }
    let (p, q) = (p as i32, q as i32);
    Ok((p - q) * (p - q) - 2 * p.max(q))
}

/// How much of `Kh(T(n,n))` can be computed: everything up to four strands,
/// homological degree 0 alone for five.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorusFeasibility {
    Full,
    DegreeZero,
    Infeasible,
}

pub fn torus_feasibility(p: usize, q: usize) -> TorusFeasibility {
    match p + q {
        0 => TorusFeasibility::Infeasible,
        1..=4 => TorusFeasibility::Full,
        5 => TorusFeasibility::DegreeZero,
        _ => TorusFeasibility::Infeasible,
    }
}

fn check_feasible(p: usize, q: usize) -> Result<()> {
    if torus_feasibility(p, q) == TorusFeasibility::Infeasible {
        let n = p + q;
        return Err(KhError::Infeasible(format!("T({n},{n}) has {} crossings", n * n.saturating_sub(1))));
    }
    Ok(())
}

/// `Kh^{0,q}` of a diagram, computed on homological degrees -1..=1.
pub fn degree_zero_group(d: &OrientedDiagram, q: i32) -> Result<HomologyGroup> {
    let cube = Cube::new(d);
    let red = simplify(&build_block(&cube, q, -1, 1, Algebra::Khovanov))?;
    Ok(group_at(&red, 0))
}

/// The infinite cyclic group `Kh^{0,gr_q}(T(p+q,p+q)_{p,q})` with a generator
/// and the cochain dual to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusProjection {
    pub p: usize,
    pub q: usize,
    pub grq: i32,
    pub diagram: OrientedDiagram,
    /// The generator as a chain on the enhanced states, first nonzero
    /// coefficient positive.
    pub generator: Vec<(usize, i64)>,
    /// Degree 0 cochain with value 1 on the generator and 0 on boundaries.
    pub cochain: Vec<i64>,
}

pub fn torus_projection(p: usize, q: usize) -> Result<TorusProjection> {
    check_feasible(p, q)?;
    let g = grq(p, q)?;
    let diagram = torus_link(p, q)?;
    let cube = Cube::new(&diagram);
    let block = build_block(&cube, g, -1, 1, Algebra::Khovanov);
    let red = simplify(&block)?;
    let group = group_at(&red, 0);
    if !group.is_infinite_cyclic() {
        return Err(KhError::NotCyclic(format!(
            "Kh^(0,{g}) of T({n},{n})_({p},{q}) has rank {} and torsion {:?}",
            group.free_rank,
            group.torsion,
            n = p + q
        )));
    }
    let rep = &group.free_reps()[0];
    let sparse: Vec<(usize, i64)> = rep
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| c.to_i64().map(|c| (k, c)).ok_or(KhError::Overflow("torus generator")))
        .collect::<Result<_>>()?;
    let mut generator = red.include(0, &sparse)?;
    generator.sort_unstable();
    let flip = generator.first().is_some_and(|&(_, c)| c < 0);
    if flip {
        generator.iter_mut().for_each(|(_, c)| *c = -*c);
    }
    // the free coordinate row kills boundaries; pull it back to the original
    // generators through the projection onto the reduced complex
    let coord = &group.coords[group.torsion.len()];
    let proj = red.projection_matrix(0)?;
    let mut cochain = Vec::with_capacity(block.rank(0));
    for col in &proj.cols {
        let mut v = BigInt::zero();
        for &(r, x) in col {
            v += &coord[r] * x;
        }
        if flip {
            v = -v;
        }
        cochain.push(v.to_i64().ok_or(KhError::Overflow("torus cochain"))?);
    }
    let value: i64 = generator.iter().map(|&(k, c)| cochain[k] * c).sum();
    if value != 1 {
        return Err(KhError::Invalid(format!("projection takes the value {value} on the generator")));
    }
    Ok(TorusProjection { p, q, grq: g, diagram, generator, cochain })
}

/// A surface in the punctured CP2 whose boundary is `neck.start()`, meeting
/// the core sphere `p` times positively and `q` times negatively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cp2Presentation {
    pub p: usize,
    pub q: usize,
    pub neck: Movie,
}

#[derive(Serialize, Deserialize)]
struct Cp2File {
    version: u32,
    p: usize,
    q: usize,
    /// Homology class of the surface, `p - q`.
    alpha: i64,
    neck: serde_json::Value,
}

impl Cp2Presentation {
    pub fn alpha(&self) -> i64 {
        self.p as i64 - self.q as i64
    }

    /// Euler characteristic of the closed-up surface: the neck plus one disk
    /// through each intersection point with the core sphere.
    pub fn surface_euler_characteristic(&self) -> i32 {
        self.neck.euler_characteristic() + (self.p + self.q) as i32
    }

    /// Checks that the neck ends at `torus_link(p,q)`, appending a relabel
    /// when it ends at a renamed copy.
    pub fn validated(mut self) -> Result<Self> {
        self.neck.validate()?;
        let target = torus_link(self.p, self.q)?;
        if self.neck.end() != &target {
            let fix = find_isomorphism(self.neck.end(), &target).ok_or_else(|| {
                KhError::DomainMismatch(format!(
                    "neck movie does not end at the ({p}+{q},{p}+{q}) torus link with {p} and {q} strands",
                    p = self.p,
                    q = self.q
                ))
            })?;
            let mut moves = self.neck.moves.clone();
            moves.push(fix);
            self.neck = Movie::from_moves(self.neck.start().clone(), moves)?;
        }
        Ok(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: Cp2File = serde_json::from_str(text).map_err(|e| KhError::Invalid(format!("CP2 file: {e}")))?;
        if f.version != CP2_FORMAT_VERSION {
            return Err(KhError::Invalid(format!("unsupported CP2 format version {}", f.version)));
        }
        if f.alpha != f.p as i64 - f.q as i64 {
            return Err(KhError::Invalid(format!("alpha = {} but p - q = {}", f.alpha, f.p as i64 - f.q as i64)));
        }
        let neck = Movie::from_json(&f.neck.to_string())?;
        Cp2Presentation { p: f.p, q: f.q, neck }.validated()
    }

    pub fn to_json(&self) -> String {
        let neck: serde_json::Value = serde_json::from_str(&self.neck.to_json()).expect("movie JSON");
        let f = Cp2File { version: CP2_FORMAT_VERSION, p: self.p, q: self.q, alpha: self.alpha(), neck };
        serde_json::to_string_pretty(&f).expect("CP2 presentations serialize")
    }
}

/// Functional of the surface on `Kh^{0,·}` of its boundary, sign-normalized.
pub fn cp2_functional(pres: &Cp2Presentation) -> Result<Functional> {
    let pres = pres.clone().validated()?;
    let proj = torus_projection(pres.p, pres.q)?;
    let q0 = proj.grq - pres.neck.euler_characteristic();
    let a = pres.alpha() as i32;
    let shift = pres.surface_euler_characteristic() - a * a + a.abs();
    if q0 != -shift {
        return Err(KhError::Invalid(format!("source degree {q0} disagrees with the bidegree shift {shift}")));
    }
    let row = pull_back(&pres.neck, q0, proj.cochain)?;
    Ok(functional_on_homology(pres.neck.start(), q0, &row)?.0.normalized())
}

/// The blow-up of a ribbon disk at a point: the disk movie without its last
/// death, renamed so that it ends at `torus_link(1,0)`.
pub fn blow_up(bp: &BandPresentation) -> Result<Cp2Presentation> {
    let (movie, _) = bands_to_movie(bp)?;
    let mut moves = movie.moves.clone();
    match moves.pop() {
        Some(MovieMove::Death { .. }) => {}
        _ => return Err(KhError::Invalid("ribbon movie does not end with a death".into())),
    }
    let neck = Movie::from_moves(movie.start().clone(), moves)?;
    Cp2Presentation { p: 1, q: 0, neck }.validated()
}

/// Result of comparing a blown-up disk with the disk itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowdownCheck {
    pub disk: Functional,
    pub cp2: Functional,
    pub equal_up_to_sign: bool,
}

pub fn blowdown_check(bp: &BandPresentation) -> Result<BlowdownCheck> {
    let (movie, _) = bands_to_movie(bp)?;
    let disk = crate::cobordism::induced_functional(&movie)?.normalized();
    let cp2 = cp2_functional(&blow_up(bp)?)?;
    Ok(BlowdownCheck { equal_up_to_sign: disk.equal_up_to_sign(&cp2), disk, cp2 })
}

/// The cobordism from `T(n,n)_{p,q}` to `T(n+2,n+2)_{p+1,q+1}` made of a
/// saddle splitting off an unknot, an isotopy carrying the unknot around
/// two new antiparallel strands, and a saddle merging it into them. Each
/// choice of the final saddle that works gives one movie; `skip` picks a later
/// one.
pub fn two_saddle_movie(p: usize, q: usize, skip: usize) -> Result<Movie> {
    let small = torus_link(p, q)?;
    let big = torus_link(p + 1, q + 1)?;
    let a0 = small.arcs()[0];
    let split = MovieMove::Saddle { arcs: [a0, a0] };
    let with_unknot = split.apply(&small)?;
    let target_crossings = small.crossing_count();
    let mut found = 0;
    for (x, y) in saddle_sites(&big) {
        let cut = MovieMove::Saddle { arcs: [x, y] };
        let Ok(d1) = cut.apply(&big) else { continue };
        if d1.components().len() != p + q + 1 {
            continue;
        }
        let Ok((end, cert)) = simplify_diagram(&d1, |e| e.crossing_count() == target_crossings, FRAME_CAP) else {
            continue;
        };
        let Some(relabel) = find_isomorphism(&with_unknot, &end) else { continue };
        if found < skip {
            found += 1;
            continue;
        }
        let isotopy = Movie::from_moves(d1.clone(), cert.moves)?;
        let back = reverse_movie(&isotopy)?;
        let mut moves = vec![split, relabel];
        moves.extend(back.moves);
        moves.push(MovieMove::Saddle { arcs: [x, y] });
        let movie = Movie::from_moves(small, moves)?;
        if movie.end() != &big {
            return Err(KhError::Invalid("two-saddle movie misses the larger torus link".into()));
        }
        return Ok(movie);
    }
    Err(KhError::SimplifierFailed(format!("no two-saddle movie from T({0},{0}) found", p + q)))
}

/// Pairs of arcs on different components bounding a common face with
/// compatible orientations.
fn saddle_sites(d: &OrientedDiagram) -> Vec<(ArcId, ArcId)> {
    let comp = d.component_of_arcs();
    let mut out = Vec::new();
    for f in d.faces() {
        for (i, &(x, dx)) in f.boundary.iter().enumerate() {
            for &(y, dy) in &f.boundary[i + 1..] {
                if dx == dy && comp[&x] != comp[&y] && !out.contains(&(x.min(y), x.max(y))) {
                    out.push((x.min(y), x.max(y)));
                }
            }
        }
    }
    out
}

/// The map `Kh^{0,gr_q(p,q)}(T_{p,q}) -> Kh^{0,gr_q(p+1,q+1)}(T_{p+1,q+1})`
/// of the two-saddle cobordism, as an integer (both groups are infinite
/// cyclic, presented by their generators).
pub fn two_saddle_map(p: usize, q: usize) -> Result<BigInt> {
    // the chain maps along the movie need degrees -2..=2 of every frame
    if p + q + 2 > 4 {
        return Err(KhError::Infeasible(format!("two-saddle map into T({0},{0}) is beyond four strands", p + q + 2)));
    }
    let movie = two_saddle_movie(p, q, 0)?;
    let g = grq(p, q)?;
    let m = homology_map(&movie, g)?;
    let v = single_entry(&m)?;
    if v.abs() != BigInt::from(1) {
        return Err(KhError::NotCyclic(format!("two-saddle map from ({p},{q}) is multiplication by {v}")));
    }
    Ok(v)
}

/// Composition of `l` two-saddle maps starting at `(p,q)`.
pub fn stabilization_map(p: usize, q: usize, l: usize) -> Result<BigInt> {
    let mut acc = BigInt::from(1);
    for k in 0..l {
        acc *= two_saddle_map(p + k, q + k)?;
    }
    Ok(acc)
}

fn single_entry(m: &[Vec<BigInt>]) -> Result<BigInt> {
    match m {
        [col] if col.len() == 1 => Ok(col[0].clone()),
        _ => Err(KhError::NotCyclic(format!("expected a 1x1 map, got {} columns", m.len()))),
    }
}

/// The presentation continued through a two-saddle movie to `(p+1, q+1)`.
pub fn stabilized(pres: &Cp2Presentation, skip: usize) -> Result<Cp2Presentation> {
    let pres = pres.clone().validated()?;
    let extra = two_saddle_movie(pres.p, pres.q, skip)?;
    let neck = pres.neck.then(&extra)?;
    Cp2Presentation { p: pres.p + 1, q: pres.q + 1, neck }.validated()
}

/// Functionals of the surface continued through different two-saddle movies
/// (attaching the new strands at different places) and whether they agree up
/// to sign.
pub fn isotopy_spot_check(pres: &Cp2Presentation, choices: usize) -> Result<(Vec<Functional>, bool)> {
    let mut fs = Vec::new();
    for k in 0..choices {
        match stabilized(pres, k) {
            Ok(s) => fs.push(cp2_functional(&s)?),
            Err(KhError::SimplifierFailed(_)) if k > 0 => break,
            Err(e) => return Err(e),
        }
    }
    let agree = fs.windows(2).all(|w| w[0].equal_up_to_sign(&w[1]));
    Ok((fs, agree))
}
