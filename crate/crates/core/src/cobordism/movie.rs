//! Movies, their induced chain maps, and functionals on homology.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::maps::{birth_rule, death_rule, generator_map, relabel_rule, saddle_rule, BlockMap};
use super::moves::{r3, MovieMove};
use super::reidemeister::{r3_map, removal_maps};
use crate::diagram::OrientedDiagram;
use crate::error::{KhError, Result};
use crate::khovanov::homology::{group_at, HomologyGroup};
use crate::khovanov::reduce::simplify;
use crate::khovanov::{build_block, Algebra, Cube, QBlock};

/// Version of the movie file format.
pub const MOVIE_FORMAT_VERSION: u32 = 1;

/// A movie with every intermediate frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Movie {
    pub frames: Vec<OrientedDiagram>,
    pub moves: Vec<MovieMove>,
}

#[derive(Serialize, Deserialize)]
struct MovieFile {
    version: u32,
    frames: Vec<String>,
    moves: Vec<MovieMove>,
}

impl Movie {
    pub fn still(d: OrientedDiagram) -> Self {
        Movie { frames: vec![d], moves: Vec::new() }
    }

    /// Plays `moves` from `start`, recording the frames.
    pub fn from_moves(start: OrientedDiagram, moves: Vec<MovieMove>) -> Result<Self> {
        let mut frames = vec![start];
        for (t, m) in moves.iter().enumerate() {
            let next = m
                .apply(&frames[t])
                .map_err(|e| KhError::BadFrame { index: t + 1, message: e.to_string() })?;
            frames.push(next);
        }
        Ok(Movie { frames, moves })
    }

    pub fn start(&self) -> &OrientedDiagram {
        &self.frames[0]
    }

    pub fn end(&self) -> &OrientedDiagram {
        self.frames.last().expect("a movie has at least one frame")
    }

    pub fn euler_characteristic(&self) -> i32 {
        self.moves.iter().map(MovieMove::euler_characteristic).sum()
    }

    /// Replays every move, reporting the first frame that does not follow.
    pub fn validate(&self) -> Result<()> {
        if self.frames.len() != self.moves.len() + 1 {
            return Err(KhError::BadFrame {
                index: self.frames.len().min(self.moves.len() + 1),
                message: format!("{} frames for {} moves", self.frames.len(), self.moves.len()),
            });
        }
        for (t, m) in self.moves.iter().enumerate() {
            let next = m.apply(&self.frames[t]).map_err(|e| KhError::BadFrame { index: t + 1, message: e.to_string() })?;
            if next != self.frames[t + 1] {
                return Err(KhError::BadFrame {
                    index: t + 1,
                    message: format!("{} does not produce the recorded frame", m.name()),
                });
            }
        }
        Ok(())
    }

    /// This movie followed by `other`.
    pub fn then(&self, other: &Movie) -> Result<Movie> {
        if self.end() != other.start() {
            return Err(KhError::DomainMismatch("movies do not share an end frame".into()));
        }
        let mut frames = self.frames.clone();
        frames.extend(other.frames[1..].iter().cloned());
        let mut moves = self.moves.clone();
        moves.extend(other.moves.iter().cloned());
        Ok(Movie { frames, moves })
    }

    pub fn to_json(&self) -> String {
        let file = MovieFile {
            version: MOVIE_FORMAT_VERSION,
            frames: self.frames.iter().map(OrientedDiagram::to_pd_string).collect(),
            moves: self.moves.clone(),
        };
        serde_json::to_string_pretty(&file).expect("movie serializes")
    }

    /// Parses a movie file. Frames are parsed but not checked against the
    /// moves; call [`Movie::validate`] for that.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MovieFile = serde_json::from_str(text).map_err(|e| KhError::Invalid(format!("movie file: {e}")))?;
        if file.version != MOVIE_FORMAT_VERSION {
            return Err(KhError::Invalid(format!("unsupported movie format version {}", file.version)));
        }
        let frames = file
            .frames
            .iter()
            .enumerate()
            .map(|(t, pd)| {
                OrientedDiagram::parse_pd(pd).map_err(|e| KhError::BadFrame { index: t, message: e.to_string() })
            })
            .collect::<Result<Vec<_>>>()?;
        if frames.is_empty() {
            return Err(KhError::Invalid("movie has no frames".into()));
        }
        Ok(Movie { frames, moves: file.moves })
    }
}

fn block(d: &OrientedDiagram, q: i32, lo: i32, hi: i32) -> (Cube, QBlock) {
    let cube = Cube::new(d);
    let b = build_block(&cube, q, lo, hi, Algebra::Khovanov);
    (cube, b)
}

/// Chain map of one move from quantum degree `q` of `before`, on homological
/// degrees `lo..=hi`, checked against the differentials.
pub fn elementary_map(
    mv: &MovieMove,
    before: &OrientedDiagram,
    after: &OrientedDiagram,
    q: i32,
    lo: i32,
    hi: i32,
) -> Result<BlockMap> {
    if &mv.apply(before)? != after {
        return Err(KhError::IllegalMove(format!("{} does not turn the first frame into the second", mv.name())));
    }
    let dst_q = q + mv.euler_characteristic();
    let local = |f: &dyn Fn(&Cube, &Cube, &QBlock, &QBlock) -> Result<BlockMap>| -> Result<BlockMap> {
        let (cs, bs) = block(before, q, lo, hi);
        let (cd, bd) = block(after, dst_q, lo, hi);
        let map = f(&cs, &cd, &bs, &bd)?;
        map.check_chain_map(&bs, &bd)?;
        Ok(map)
    };
    match mv {
        MovieMove::Birth { .. } => local(&|cs, cd, bs, bd| generator_map(bs, bd, birth_rule(cs, cd))),
        MovieMove::Death { arc } => local(&|cs, cd, bs, bd| generator_map(bs, bd, death_rule(cs, cd, *arc))),
        MovieMove::Saddle { arcs } => {
            local(&|cs, cd, bs, bd| generator_map(bs, bd, saddle_rule(before, cs, cd, arcs[0], arcs[1])))
        }
        MovieMove::Relabel { arcs, order } => {
            local(&|cs, cd, bs, bd| generator_map(bs, bd, relabel_rule(cs, cd, arcs, order)))
        }
        MovieMove::R1Add { .. } | MovieMove::R2Add { .. } => {
            let m = after.crossing_count() - before.crossing_count();
            let r = removal_maps(after, m, q, lo, hi)?;
            if &r.small != before {
                return Err(KhError::IllegalMove("removing the new crossings does not give back the first frame".into()));
            }
            Ok(r.include)
        }
        MovieMove::R1Remove { crossing } => removal_from(before, after, &[*crossing], q, lo, hi),
        MovieMove::R2Remove { crossings } => removal_from(before, after, crossings, q, lo, hi),
        MovieMove::R3 { crossings } => {
            let (_, tri) = r3(before, *crossings)?;
            r3_map(before, after, *crossings, tri, q, lo, hi)
        }
    }
}

/// Removal of crossings `ks`, first moving them to the end of the order.
fn removal_from(before: &OrientedDiagram, after: &OrientedDiagram, ks: &[usize], q: i32, lo: i32, hi: i32) -> Result<BlockMap> {
    let n = before.crossing_count();
    let mut order: Vec<usize> = (0..n).filter(|k| !ks.contains(k)).collect();
    order.extend_from_slice(ks);
    let reorder = MovieMove::Relabel { arcs: BTreeMap::new(), order: order.clone() };
    let moved = reorder.apply(before)?;
    let r = removal_maps(&moved, ks.len(), q, lo, hi)?;
    if &r.small != after {
        return Err(KhError::IllegalMove("removal does not give the recorded frame".into()));
    }
    if order.iter().enumerate().all(|(k, &o)| k == o) {
        return Ok(r.project);
    }
    elementary_map(&reorder, before, &moved, q, lo, hi)?.then(&r.project)
}

/// Chain map of a whole movie from quantum degree `q` of its first frame.
pub fn compose_movie(movie: &Movie, q: i32, lo: i32, hi: i32) -> Result<BlockMap> {
    movie.validate()?;
    let (_, b) = block(movie.start(), q, lo, hi);
    let mut acc = BlockMap::identity(&b);
    let mut qt = q;
    for (t, m) in movie.moves.iter().enumerate() {
        let f = elementary_map(m, &movie.frames[t], &movie.frames[t + 1], qt, lo, hi)
            .map_err(|e| KhError::BadFrame { index: t + 1, message: e.to_string() })?;
        acc = acc.then(&f)?;
        qt += m.euler_characteristic();
    }
    Ok(acc)
}

/// A homomorphism from one bidegree of Kh to the integers, given by its values
/// on the free generators of the chosen presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Functional {
    pub bidegree: (i32, i32),
    pub values: Vec<BigInt>,
}

impl Functional {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// The representative whose first nonzero value is positive.
    pub fn normalized(&self) -> Functional {
        let flip = self.values.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
        let values = if flip { self.values.iter().map(|v| -v).collect() } else { self.values.clone() };
        Functional { bidegree: self.bidegree, values }
    }

    pub fn equal_up_to_sign(&self, other: &Functional) -> bool {
        self.bidegree == other.bidegree && self.normalized() == other.normalized()
    }
}

/// Row vector times a sparse matrix given by columns.
fn row_times(row: &[i64], m: &crate::khovanov::matrix::SparseMatrix) -> Result<Vec<i64>> {
    m.cols
        .iter()
        .map(|col| {
            col.iter().try_fold(0i64, |acc, &(r, v)| {
                row[r].checked_mul(v).and_then(|t| acc.checked_add(t)).ok_or(KhError::Overflow("functional"))
            })
        })
        .collect()
}

/// Pulls `end` (a cochain on homological degree 0, quantum degree
/// `q + χ`, of the last frame) back along the movie to a cochain on degree 0 of
/// the first frame. Each move is checked as a chain map on degrees -1..=1.
pub fn pull_back(movie: &Movie, q: i32, end: Vec<i64>) -> Result<Vec<i64>> {
    movie.validate()?;
    let mut qs = vec![q];
    for m in &movie.moves {
        qs.push(qs.last().unwrap() + m.euler_characteristic());
    }
    let mut row = end;
    for t in (0..movie.moves.len()).rev() {
        let f = elementary_map(&movie.moves[t], &movie.frames[t], &movie.frames[t + 1], qs[t], -1, 1)
            .map_err(|e| KhError::BadFrame { index: t + 1, message: e.to_string() })?;
        let m0 = f.at(0).ok_or_else(|| KhError::Invalid("map has no degree 0 part".into()))?;
        if m0.rows != row.len() {
            return Err(KhError::DomainMismatch(format!("frame {}: cochain has the wrong length", t + 1)));
        }
        row = row_times(&row, m0)?;
    }
    Ok(row)
}

/// A degree 0 cochain as a functional on `Kh^{0,q}` of `d`, after checking
/// that it kills boundaries.
pub fn functional_on_homology(d: &OrientedDiagram, q: i32, row: &[i64]) -> Result<(Functional, HomologyGroup)> {
    let (_, b) = block(d, q, -1, 1);
    if row.len() != b.rank(0) {
        return Err(KhError::DomainMismatch("cochain length differs from the chain group".into()));
    }
    let db = b.d_at(-1);
    if row_times(row, &db)?.iter().any(|&x| x != 0) {
        return Err(KhError::NotWellDefined(format!("nonzero on a boundary in degree (0, {q})")));
    }
    let red = simplify(&b)?;
    let group = group_at(&red, 0);
    let mut values = Vec::new();
    for rep in group.free_reps() {
        let sparse: Vec<(usize, i64)> = rep
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| i64::try_from(c).map(|c| (k, c)).map_err(|_| KhError::Overflow("representative")))
            .collect::<Result<_>>()?;
        let chain = red.include(0, &sparse)?;
        let mut v = BigInt::zero();
        for (k, c) in chain {
            v += BigInt::from(row[k]) * BigInt::from(c);
        }
        values.push(v);
    }
    Ok((Functional { bidegree: (0, q), values }, group))
}

/// Functional of a movie ending at the empty diagram, on `Kh^{0,-χ}` of its
/// first frame.
pub fn induced_functional(movie: &Movie) -> Result<Functional> {
    if !movie.end().is_empty() {
        return Err(KhError::DomainMismatch("movie does not end at the empty diagram".into()));
    }
    let q = -movie.euler_characteristic();
    let row = pull_back(movie, q, vec![1])?;
    Ok(functional_on_homology(movie.start(), q, &row)?.0)
}

/// The map a movie induces on `Kh^{0,q}`, as a matrix on the generators of the
/// presentations (torsion first, then free); column `k` is the image of the
/// `k`-th source generator. Torsion coordinates are reduced.
pub fn homology_map(movie: &Movie, q: i32) -> Result<Vec<Vec<BigInt>>> {
    let f = compose_movie(movie, q, -1, 1)?;
    let (_, bs) = block(movie.start(), q, -1, 1);
    let (_, bd) = block(movie.end(), q + movie.euler_characteristic(), -1, 1);
    let (rs, rd) = (simplify(&bs)?, simplify(&bd)?);
    let (gs, gd) = (group_at(&rs, 0), group_at(&rd, 0));
    let m0 = f.at(0).ok_or_else(|| KhError::Invalid("map has no degree 0 part".into()))?;
    let mut out = Vec::new();
    for rep in &gs.reps {
        let sparse: Vec<(usize, i64)> = rep
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| i64::try_from(c).map(|c| (k, c)).map_err(|_| KhError::Overflow("representative")))
            .collect::<Result<_>>()?;
        let image = m0.apply(&rs.include(0, &sparse)?);
        let reduced: Vec<BigInt> = {
            let p = rd.project(0, &image)?;
            let mut v = vec![BigInt::zero(); rd.reduced_rank(0)];
            for (k, c) in p {
                v[k] = BigInt::from(c);
            }
            v
        };
        out.push(gd.class_of(&reduced)?);
    }
    Ok(out)
}

/// Whether a square homology map is `+identity` or `-identity`.
pub fn is_plus_minus_identity(m: &[Vec<BigInt>], group: &HomologyGroup) -> bool {
    let n = m.len();
    [1i64, -1].iter().any(|&s| {
        (0..n).all(|j| {
            m[j].len() == n
                && (0..n).all(|i| {
                    let want = BigInt::from(if i == j { s } else { 0 });
                    match group.torsion.get(i) {
                        Some(d) => num_integer::Integer::mod_floor(&(&m[j][i] - want), d).is_zero(),
                        None => m[j][i] == want,
                    }
                })
        })
    })
}
