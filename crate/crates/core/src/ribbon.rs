//! Ribbon disks from band presentations: the movie of a disk, the functional
//! it induces on `Kh^{0,-1}` of its boundary, and a test telling two such
//! functionals apart by an explicit class.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cobordism::{induced_functional, Functional, Movie, MovieMove};
use crate::diagram::{ArcId, OrientedDiagram, Sign};
use crate::error::{KhError, Result};
use crate::khovanov::matrix::{smith, DenseMatrix};

pub const BAND_FORMAT_VERSION: u32 = 1;

/// Default bound on the number of diagrams the simplifier may visit.
pub const FRAME_CAP: usize = 10_000;

/// One crossing of a band's core with an arc of the current diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub arc: ArcId,
    /// Whether the band passes over `arc`.
    pub over: bool,
    /// Which of the faces shared by the band tip and `arc` to cross.
    #[serde(default)]
    pub face: usize,
}

/// A band from arc `from` to arc `to`. The band is pushed as a finger along
/// `path` and then attached. Arc names refer to the diagram left by the
/// previous bands; the arcs created by a finger step are those of an `R2+`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Band {
    pub from: ArcId,
    pub to: ArcId,
    #[serde(default)]
    pub path: Vec<PathStep>,
    /// Twisting relative to the blackboard framing; must be even.
    #[serde(default)]
    pub half_twists: i32,
}

/// A ribbon disk given by its boundary and bands whose result is an unlink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandPresentation {
    pub boundary: OrientedDiagram,
    pub bands: Vec<Band>,
    /// Components of the unlink after all bands; `bands.len() + 1` for a disk.
    pub components: usize,
    /// Moves from the banded diagram to a crossingless one. The greedy
    /// simplifier is used when absent.
    pub certificate: Option<Vec<MovieMove>>,
}

#[derive(Serialize, Deserialize)]
struct BandFile {
    version: u32,
    boundary: String,
    bands: Vec<Band>,
    components: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certificate: Option<Vec<MovieMove>>,
}

impl BandPresentation {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: BandFile = serde_json::from_str(text).map_err(|e| KhError::Invalid(format!("band file: {e}")))?;
        if f.version != BAND_FORMAT_VERSION {
            return Err(KhError::Invalid(format!("unsupported band format version {}", f.version)));
        }
        Ok(BandPresentation {
            boundary: OrientedDiagram::parse_pd(&f.boundary)?,
            bands: f.bands,
            components: f.components,
            certificate: f.certificate,
        })
    }

    pub fn to_json(&self) -> String {
        let f = BandFile {
            version: BAND_FORMAT_VERSION,
            boundary: self.boundary.to_pd_string(),
            bands: self.bands.clone(),
            components: self.components,
            certificate: self.certificate.clone(),
        };
        serde_json::to_string_pretty(&f).expect("band presentations serialize")
    }

    /// The mirror image: every crossing and every band crossing flips, twists
    /// change sign. A stored certificate is dropped.
    pub fn mirrored(&self) -> Result<Self> {
        let boundary = self.boundary.mirror();
        let (mut d, mut m) = (self.boundary.clone(), boundary.clone());
        let mut bands = Vec::new();
        for band in &self.bands {
            let mut path = Vec::new();
            let mut tip = band.from;
            for step in &band.path {
                let key = shared_face(&d, tip, step.arc, step.face)?;
                let face = (0..)
                    .map_while(|k| shared_face(&m, tip, step.arc, k).ok().map(|f| (k, f)))
                    .find(|(_, f)| *f == key)
                    .map(|(k, _)| k)
                    .ok_or_else(|| KhError::Invalid("mirror lost a band face".into()))?;
                let mv = finger(tip, step);
                d = mv.apply(&d)?;
                let mirrored = PathStep { arc: step.arc, over: !step.over, face };
                m = finger(tip, &mirrored).apply(&m)?;
                tip = finger_tip(&d, step.over);
                path.push(mirrored);
            }
            let flipped = Band { from: band.from, to: band.to, path, half_twists: -band.half_twists };
            d = apply_band_end(&d, band, tip)?.0;
            m = apply_band_end(&m, &flipped, tip)?.0;
            bands.push(flipped);
        }
        Ok(BandPresentation { boundary, bands, components: self.components, certificate: None })
    }
}

/// Arcs (sorted) around the `k`-th face shared by `x` and `y`.
fn shared_face(d: &OrientedDiagram, x: ArcId, y: ArcId, k: usize) -> Result<Vec<ArcId>> {
    let f = d
        .faces()
        .into_iter()
        .filter(|f| f.contains(x) && f.contains(y))
        .nth(k)
        .ok_or_else(|| KhError::Invalid(format!("arcs {x} and {y} share no face #{k}")))?;
    let mut arcs: Vec<ArcId> = f.boundary.iter().map(|e| e.0).collect();
    arcs.sort_unstable();
    Ok(arcs)
}

fn finger(tip: ArcId, step: &PathStep) -> MovieMove {
    if step.over {
        MovieMove::R2Add { over: tip, under: step.arc, face: step.face }
    } else {
        MovieMove::R2Add { over: step.arc, under: tip, face: step.face }
    }
}

/// Tip of a finger just pushed by an `R2+`: the middle piece of the moving
/// strand. `d` is the diagram after the move.
fn finger_tip(d: &OrientedDiagram, over: bool) -> ArcId {
    // the R2+ used max+1 (middle of `over`) .. max+4 (middle of `under`)
    let max = d.max_arc();
    if over {
        max - 3
    } else {
        max
    }
}

/// Twists and the saddle closing a band whose finger ends at `tip`.
fn apply_band_end(d: &OrientedDiagram, band: &Band, tip: ArcId) -> Result<(OrientedDiagram, Vec<MovieMove>)> {
    if band.half_twists % 2 != 0 {
        return Err(KhError::Invalid("an odd number of half twists gives a non-orientable band".into()));
    }
    let sign = if band.half_twists > 0 { Sign::Positive } else { Sign::Negative };
    let twists = band.half_twists.unsigned_abs() / 2;
    let flat = MovieMove::Saddle { arcs: [tip, band.to] };
    let untwisted = flat.apply(d)?;
    if twists == 0 {
        return Ok((untwisted, vec![flat]));
    }
    let target = total_linking(&untwisted) + sign.as_i64() * twists as i64;
    twist_and_close(d, tip, band.to, sign, twists, target)
        .ok_or_else(|| KhError::IllegalMove(format!("no room to twist the band from arc {tip} to arc {}", band.to)))
}

fn total_linking(d: &OrientedDiagram) -> i64 {
    let n = d.components().len();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| d.linking_number(i, j)).sum()
}

/// A full twist is a curl in the band core: a kink at the tip whose loop is
/// then pushed across its own strand. A band always splits a component, so
/// each full twist moves the linking between the two pieces by one, which
/// is what picks the curl among the candidates.
fn twist_and_close(
    d: &OrientedDiagram,
    tip: ArcId,
    to: ArcId,
    sign: Sign,
    twists: u32,
    target: i64,
) -> Option<(OrientedDiagram, Vec<MovieMove>)> {
    if twists == 0 {
        let mv = MovieMove::Saddle { arcs: [tip, to] };
        let end = mv.apply(d).ok()?;
        return (total_linking(&end) == target).then(|| (end, vec![mv]));
    }
    for under_first in [false, true] {
        let kink = MovieMove::R1Add { arc: tip, sign, under_first };
        let lobe = d.max_arc() + 1;
        let Ok(k) = kink.apply(d) else { continue };
        for (over, under) in [(tip, lobe), (lobe, tip)] {
            for face in 0..4 {
                let push = MovieMove::R2Add { over, under, face };
                let Ok(e) = push.apply(&k) else { continue };
                for next in e.arcs() {
                    if let Some((end, rest)) = twist_and_close(&e, next, to, sign, twists - 1, target) {
                        let mut moves = vec![kink.clone(), push];
                        moves.extend(rest);
                        return Some((end, moves));
                    }
                }
            }
        }
    }
    None
}

/// Moves turning a diagram into another one, found by search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplificationCertificate {
    pub moves: Vec<MovieMove>,
    /// Diagrams visited while searching.
    pub visited: usize,
}

fn kinks(d: &OrientedDiagram) -> impl Iterator<Item = MovieMove> + '_ {
    (0..d.crossing_count())
        .map(|k| MovieMove::R1Remove { crossing: k })
        .filter(|mv| mv.apply(d).is_ok())
}

fn bigons(d: &OrientedDiagram) -> impl Iterator<Item = MovieMove> + '_ {
    let n = d.crossing_count();
    (0..n)
        .flat_map(move |a| (a + 1..n).map(move |b| MovieMove::R2Remove { crossings: [a, b] }))
        .filter(|mv| mv.apply(d).is_ok())
}

/// Third moves available on triangular faces.
pub fn r3_sites(d: &OrientedDiagram) -> Vec<MovieMove> {
    let ends = d.arc_ends();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for f in d.faces().into_iter().filter(|f| f.boundary.len() == 3) {
        let mut ks: Vec<usize> = f.boundary.iter().flat_map(|e| [ends[&e.0].0 .0, ends[&e.0].1 .0]).collect();
        ks.sort_unstable();
        ks.dedup();
        let Ok(ks) = <[usize; 3]>::try_from(ks) else { continue };
        let mv = MovieMove::R3 { crossings: ks };
        if seen.insert(ks) && mv.apply(d).is_ok() {
            out.push(mv);
        }
    }
    out
}

/// Greedy simplification: undo kinks and bigons while possible; when stuck,
/// search up to three third moves deep for a diagram that has one. Stops when
/// `done` holds.
pub fn simplify_diagram(
    d: &OrientedDiagram,
    done: impl Fn(&OrientedDiagram) -> bool,
    cap: usize,
) -> Result<(OrientedDiagram, SimplificationCertificate)> {
    let mut cur = d.clone();
    let mut moves = Vec::new();
    let mut visited = 0;
    while !done(&cur) {
        let step = kinks(&cur).next().or_else(|| bigons(&cur).next());
        if let Some(mv) = step {
            cur = mv.apply(&cur)?;
            moves.push(mv);
            continue;
        }
        let path = r3_search(&cur, 3, cap, &mut visited)?;
        for mv in path {
            cur = mv.apply(&cur)?;
            moves.push(mv);
        }
    }
    Ok((cur, SimplificationCertificate { moves, visited }))
}

fn r3_search(d: &OrientedDiagram, depth: usize, cap: usize, visited: &mut usize) -> Result<Vec<MovieMove>> {
    let mut seen = HashSet::from([d.canonical().to_pd_string()]);
    let mut queue = VecDeque::from([(d.clone(), Vec::new())]);
    while let Some((e, path)) = queue.pop_front() {
        if path.len() == depth {
            continue;
        }
        for mv in r3_sites(&e) {
            let f = mv.apply(&e)?;
            if !seen.insert(f.canonical().to_pd_string()) {
                continue;
            }
            *visited += 1;
            if *visited > cap {
                return Err(KhError::SimplifierFailed(format!("visited more than {cap} diagrams")));
            }
            let mut p = path.clone();
            p.push(mv);
            if kinks(&f).next().is_some() || bigons(&f).next().is_some() {
                return Ok(p);
            }
            queue.push_back((f, p));
        }
    }
    Err(KhError::SimplifierFailed(format!(
        "stuck at {} crossings: no kink, bigon or third-move path of length <= {depth} to one",
        d.crossing_count()
    )))
}

/// The movie of the ribbon disk: band saddles (with their fingers and twists),
/// the simplification to a crossingless unlink, and one death per circle.
pub fn bands_to_movie(bp: &BandPresentation) -> Result<(Movie, SimplificationCertificate)> {
    let mut d = bp.boundary.clone();
    let mut moves = Vec::new();
    for band in &bp.bands {
        let mut tip = band.from;
        for step in &band.path {
            let mv = finger(tip, step);
            d = mv.apply(&d)?;
            moves.push(mv);
            tip = finger_tip(&d, step.over);
        }
        let (e, end) = apply_band_end(&d, band, tip)?;
        d = e;
        moves.extend(end);
    }
    let cert = match &bp.certificate {
        Some(ms) => {
            for mv in ms {
                d = mv.apply(&d)?;
            }
            SimplificationCertificate { moves: ms.clone(), visited: 0 }
        }
        None => simplify_diagram(&d, |e| e.crossing_count() == 0, FRAME_CAP)?.1,
    };
    if bp.certificate.is_none() {
        for mv in &cert.moves {
            d = mv.apply(&d)?;
        }
    }
    moves.extend(cert.moves.iter().cloned());
    if d.crossing_count() != 0 {
        return Err(KhError::SimplifierFailed("certificate does not end at a crossingless diagram".into()));
    }
    if d.loops().len() != bp.components {
        return Err(KhError::Invalid(format!(
            "bands give {} circles, the presentation expects {}",
            d.loops().len(),
            bp.components
        )));
    }
    moves.extend(d.loops().iter().map(|&arc| MovieMove::Death { arc }));
    let movie = Movie::from_moves(bp.boundary.clone(), moves)?;
    if movie.euler_characteristic() != 1 {
        return Err(KhError::Invalid(format!("surface has Euler characteristic {}, not a disk", movie.euler_characteristic())));
    }
    Ok((movie, cert))
}

/// Functional of the disk on `Kh^{0,-1}` of its boundary.
pub fn disk_functional(bp: &BandPresentation) -> Result<Functional> {
    let (movie, _) = bands_to_movie(bp)?;
    Ok(induced_functional(&movie)?.normalized())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    DistinctWithWitness,
    NotDistinguished,
}

/// Outcome of [`distinguish`]. `witness` is a class with `f = ±1`, `g = 0`;
/// `reverse_witness` one with `g = ±1`, `f = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distinction {
    pub verdict: Verdict,
    pub witness: Option<Vec<BigInt>>,
    pub reverse_witness: Option<Vec<BigInt>>,
}

/// Looks for an integral class on which `f` is a unit and `g` vanishes, and
/// for one the other way round.
pub fn distinguish(f: &Functional, g: &Functional) -> Result<Distinction> {
    if f.bidegree != g.bidegree || f.values.len() != g.values.len() {
        return Err(KhError::DomainMismatch("functionals live on different groups".into()));
    }
    let witness = unit_on_kernel(&f.values, &g.values);
    let reverse_witness = unit_on_kernel(&g.values, &f.values);
    let verdict = if witness.is_some() || reverse_witness.is_some() {
        Verdict::DistinctWithWitness
    } else {
        Verdict::NotDistinguished
    };
    Ok(Distinction { verdict, witness, reverse_witness })
}

/// `x` with `f·x = ±1` and `g·x = 0`, if one exists.
fn unit_on_kernel(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = f.len();
    if n == 0 {
        return None;
    }
    // basis of ker g: trailing columns of the right transform
    let s = smith(&DenseMatrix { rows: 1, cols: n, data: vec![g.to_vec()] });
    let basis: Vec<Vec<BigInt>> = (s.rank()..n).map(|c| s.right.column(c)).collect();
    let values: Vec<BigInt> = basis.iter().map(|b| b.iter().zip(f).map(|(x, y)| x * y).sum()).collect();
    // Bezout coefficients for the values
    let mut gcd = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::new();
    for v in &values {
        let e = gcd.extended_gcd(v);
        coeffs.iter_mut().for_each(|c| *c *= &e.x);
        coeffs.push(e.y);
        gcd = e.gcd;
    }
    if !gcd.abs().is_one() {
        return None;
    }
    let mut x = vec![BigInt::zero(); n];
    for (b, c) in basis.iter().zip(&coeffs) {
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi += c * bi;
        }
    }
    let fx: BigInt = x.iter().zip(f).map(|(a, b)| a * b).sum();
    if fx.is_negative() {
        x.iter_mut().for_each(|v| *v = -v.clone());
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn functional(v: &[i64]) -> Functional {
        Functional { bidegree: (0, -1), values: v.iter().map(|&x| BigInt::from(x)).collect() }
    }

    fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn witnesses_solve_the_system() {
        let (f, g) = (functional(&[2, 3, 0]), functional(&[4, 6, 1]));
        let d = distinguish(&f, &g).unwrap();
        assert_eq!(d.verdict, Verdict::DistinctWithWitness);
        let w = d.witness.unwrap();
        assert_eq!(dot(&w, &f.values), BigInt::one());
        assert!(dot(&w, &g.values).is_zero());
        let r = d.reverse_witness.unwrap();
        assert!(dot(&r, &f.values).is_zero());
        assert_eq!(dot(&r, &g.values).abs(), BigInt::one());
    }

    #[test]
    fn proportional_functionals_are_not_distinguished() {
        let f = functional(&[1, -2]);
        let g = functional(&[-1, 2]);
        assert_eq!(distinguish(&f, &g).unwrap().verdict, Verdict::NotDistinguished);
        // f = 2g: no class with g = 0 has f = ±1, but g = 1, f = 0 is impossible too
        let (f, g) = (functional(&[2, 4]), functional(&[1, 2]));
        assert_eq!(distinguish(&f, &g).unwrap().verdict, Verdict::NotDistinguished);
    }

    #[test]
    fn gcd_obstruction() {
        // on ker g the functional f only takes even values
        let d = distinguish(&functional(&[2, 0]), &functional(&[0, 1])).unwrap();
        assert!(d.witness.is_none());
        assert!(d.reverse_witness.is_some());
    }
}
