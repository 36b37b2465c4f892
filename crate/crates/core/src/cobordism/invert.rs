//! Running a movie backwards. Each move is undone by a move of the opposite
//! kind, followed by a relabel when the undo only recovers the earlier frame up
//! to names and crossing order.

use std::collections::BTreeMap;

use super::moves::{find_isomorphism, saddle_shape, MovieMove, SaddleShape};
use super::movie::Movie;
use crate::diagram::{OrientedDiagram, Sign};
use crate::error::{KhError, Result};

/// Moves taking `after` back to exactly `before`.
pub fn invert_move(mv: &MovieMove, before: &OrientedDiagram, after: &OrientedDiagram) -> Result<Vec<MovieMove>> {
    let candidates: Vec<MovieMove> = match mv {
        MovieMove::R1Add { .. } => vec![MovieMove::R1Remove { crossing: after.crossing_count() - 1 }],
        MovieMove::R2Add { .. } => {
            let n = after.crossing_count();
            vec![MovieMove::R2Remove { crossings: [n - 2, n - 1] }]
        }
        MovieMove::R3 { crossings } => vec![MovieMove::R3 { crossings: *crossings }],
        MovieMove::Birth { arc } => vec![MovieMove::Death { arc: *arc }],
        MovieMove::Death { arc } => vec![MovieMove::Birth { arc: *arc }],
        MovieMove::Saddle { arcs } => match saddle_shape(before, arcs[0], arcs[1]) {
            SaddleShape::Generic { a, b } => vec![MovieMove::Saddle { arcs: [a, b] }],
            SaddleShape::Split { a, q, .. } => vec![MovieMove::Saddle { arcs: [a, q] }],
            SaddleShape::Merge { a, b, m } => {
                let gone = if m == a { b } else { a };
                // splitting the merged loop and renaming the new one
                let new = after.max_arc() + 1;
                let mut names = BTreeMap::new();
                if new != gone {
                    names.insert(new, gone);
                }
                return finish(
                    vec![MovieMove::Saddle { arcs: [m, m] }, MovieMove::Relabel { arcs: names, order: Vec::new() }],
                    before,
                    after,
                );
            }
        },
        MovieMove::Relabel { arcs, order } => {
            let inv_arcs = arcs.iter().map(|(&k, &v)| (v, k)).collect();
            let mut inv_order = vec![0; order.len()];
            for (k, &o) in order.iter().enumerate() {
                inv_order[o] = k;
            }
            vec![MovieMove::Relabel { arcs: inv_arcs, order: inv_order }]
        }
        MovieMove::R1Remove { crossing } => {
            let sign = before.crossings()[*crossing].sign;
            let mut out = Vec::new();
            for arc in after.arcs() {
                for under_first in [false, true] {
                    out.push(MovieMove::R1Add { arc, sign, under_first });
                }
            }
            out
        }
        MovieMove::R2Remove { .. } => {
            let mut out = Vec::new();
            let faces = after.faces();
            let arcs = after.arcs();
            for &x in &arcs {
                for &y in &arcs {
                    let loose = after.loops().contains(&x) || after.loops().contains(&y);
                    let shared = if loose { 4 } else { faces.iter().filter(|f| f.contains(x) && f.contains(y)).count() };
                    if x != y {
                        out.extend((0..shared).map(|face| MovieMove::R2Add { over: x, under: y, face }));
                    }
                }
            }
            out
        }
    };
    for c in candidates {
        if let Ok(moves) = finish(vec![c], before, after) {
            return Ok(moves);
        }
    }
    if matches!(mv, MovieMove::R2Remove { .. }) {
        if let Some(moves) = kinked_r2(before, after) {
            return Ok(moves);
        }
    }
    Err(KhError::IllegalMove(format!("could not undo {}", mv.name())))
}

/// Undoes a bigon removal that left a loop, or two strands on one arc, where
/// a plain `R2+` has nothing to grip: a kink is added first to supply arcs with
/// ends and taken out again afterwards.
fn kinked_r2(before: &OrientedDiagram, after: &OrientedDiagram) -> Option<Vec<MovieMove>> {
    let n = after.crossing_count();
    for arc in after.arcs() {
        for sign in [Sign::Positive, Sign::Negative] {
            for under_first in [false, true] {
                let kink = MovieMove::R1Add { arc, sign, under_first };
                let Ok(k) = kink.apply(after) else { continue };
                let faces = k.faces();
                let arcs = k.arcs();
                for &x in &arcs {
                    for &y in &arcs {
                        let shared = faces.iter().filter(|f| f.contains(x) && f.contains(y)).count();
                        for face in (0..shared).filter(|_| x != y) {
                            let moves = vec![
                                kink.clone(),
                                MovieMove::R2Add { over: x, under: y, face },
                                MovieMove::R1Remove { crossing: n },
                            ];
                            if let Ok(out) = finish(moves, before, after) {
                                return Some(out);
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Applies `moves` to `after` and appends a relabel onto `before` if needed.
fn finish(mut moves: Vec<MovieMove>, before: &OrientedDiagram, after: &OrientedDiagram) -> Result<Vec<MovieMove>> {
    let mut d = after.clone();
    for mv in &moves {
        d = mv.apply(&d)?;
    }
    if &d == before {
        return Ok(moves);
    }
    let fix = find_isomorphism(&d, before).ok_or_else(|| KhError::IllegalMove("undo gives another diagram".into()))?;
    moves.push(fix);
    Ok(moves)
}

/// The movie played backwards: frames from last to first.
pub fn reverse_movie(movie: &Movie) -> Result<Movie> {
    movie.validate()?;
    let mut moves = Vec::new();
    for t in (0..movie.moves.len()).rev() {
        moves.extend(invert_move(&movie.moves[t], &movie.frames[t], &movie.frames[t + 1])?);
    }
    let out = Movie::from_moves(movie.end().clone(), moves)?;
    debug_assert_eq!(out.end(), movie.start());
    Ok(out)
}
