use std::path::PathBuf;

use khoxotic::cobordism::{homology_map, induced_functional, is_plus_minus_identity, reverse_movie, Movie, MovieMove};
use khoxotic::diagram::Sign;
use khoxotic::khovanov::homology::group_at;
use khoxotic::khovanov::{build_block, simplify, Algebra, Cube};
use khoxotic::OrientedDiagram;
use num_bigint::BigInt;

fn corpus(max_crossings: usize) -> Vec<(String, OrientedDiagram)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus");
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pd"))
        .map(|p| {
            let d = OrientedDiagram::parse_pd(&std::fs::read_to_string(&p).unwrap()).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), d)
        })
        .filter(|(_, d)| d.crossing_count() <= max_crossings)
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Quantum degrees with nonzero Kh^{0,q}.
fn live_degrees(d: &OrientedDiagram) -> Vec<i32> {
    let cube = Cube::new(d);
    let Some((a, b)) = cube.q_range(0) else { return Vec::new() };
    (a..=b)
        .step_by(2)
        .filter(|&q| {
            let red = simplify(&build_block(&cube, q, -1, 1, Algebra::Khovanov)).unwrap();
            !group_at(&red, 0).is_zero()
        })
        .collect()
}

fn assert_identity_on_homology(movie: &Movie, label: &str) {
    for q in live_degrees(movie.start()) {
        let m = homology_map(movie, q).unwrap_or_else(|e| panic!("{label} q={q}: {e}"));
        let cube = Cube::new(movie.start());
        let g = group_at(&simplify(&build_block(&cube, q, -1, 1, Algebra::Khovanov)).unwrap(), 0);
        assert!(is_plus_minus_identity(&m, &g), "{label} q={q}: {m:?}");
    }
}

#[test]
fn unit_and_counit() {
    let empty = OrientedDiagram::empty();
    let birth = Movie::from_moves(empty.clone(), vec![MovieMove::Birth { arc: 1 }]).unwrap();
    // 1 in Kh(empty) goes to the generator of Kh^{0,1}(U)
    let m = homology_map(&birth, 0).unwrap();
    assert_eq!(m, vec![vec![BigInt::from(1)]]);

    let death = Movie::from_moves(OrientedDiagram::unknot(1), vec![MovieMove::Death { arc: 1 }]).unwrap();
    let f = induced_functional(&death).unwrap();
    assert_eq!(f.bidegree, (0, -1));
    assert_eq!(f.normalized().values, vec![BigInt::from(1)]);
    // 1 is killed: the degree (0, 1) map is zero
    assert_eq!(homology_map(&death, 1).unwrap(), vec![Vec::<BigInt>::new()]);

    let both = Movie::from_moves(empty, vec![MovieMove::Birth { arc: 1 }, MovieMove::Death { arc: 1 }]).unwrap();
    assert_eq!(both.euler_characteristic(), 2);
    assert_eq!(homology_map(&both, 0).unwrap(), vec![Vec::<BigInt>::new()]);
}

#[test]
fn split_disk_of_unknot_is_the_counit() {
    let u = OrientedDiagram::unknot(1);
    let movie = Movie::from_moves(
        u,
        vec![MovieMove::Saddle { arcs: [1, 1] }, MovieMove::Death { arc: 1 }, MovieMove::Death { arc: 2 }],
    )
    .unwrap();
    assert_eq!(movie.euler_characteristic(), 1);
    let f = induced_functional(&movie).unwrap();
    assert_eq!(f.normalized().values, vec![BigInt::from(1)]);
}

#[test]
fn r1_forward_inverse_is_identity() {
    for (name, d) in corpus(6) {
        let n = d.crossing_count();
        for sign in [Sign::Positive, Sign::Negative] {
            for under_first in [true, false] {
                let arc = d.arcs()[n % d.arcs().len()];
                let movie = Movie::from_moves(
                    d.clone(),
                    vec![MovieMove::R1Add { arc, sign, under_first }, MovieMove::R1Remove { crossing: n }],
                )
                .unwrap();
                assert_eq!(movie.end(), &d);
                assert_identity_on_homology(&movie, &format!("{name} R1 {sign:?} {under_first}"));
            }
        }
    }
}

#[test]
fn r2_forward_inverse_is_identity() {
    for (name, d) in corpus(6) {
        let n = d.crossing_count();
        let faces = d.faces();
        let f = faces.iter().find(|f| f.boundary.len() >= 2 && f.boundary[0].0 != f.boundary[1].0).unwrap();
        let (x, y) = (f.boundary[0].0, f.boundary[1].0);
        let add = [MovieMove::R2Add { over: x, under: y, face: 0 }, MovieMove::R2Add { over: y, under: x, face: 0 }];
        let mut done = 0;
        for a in add {
            let Ok(movie) = Movie::from_moves(d.clone(), vec![a, MovieMove::R2Remove { crossings: [n, n + 1] }]) else {
                continue;
            };
            assert_eq!(movie.end(), &d);
            assert_identity_on_homology(&movie, &format!("{name} R2"));
            done += 1;
        }
        assert!(done > 0, "{name}: no R2 site");
    }
}

#[test]
fn removal_out_of_order_uses_reordering() {
    // a kink added on the trefoil and then moved to the front of the order
    let t = OrientedDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]").unwrap();
    let order = vec![3, 0, 1, 2];
    let movie = Movie::from_moves(
        t.clone(),
        vec![
            MovieMove::R1Add { arc: 2, sign: Sign::Negative, under_first: false },
            MovieMove::Relabel { arcs: Default::default(), order },
            MovieMove::R1Remove { crossing: 0 },
        ],
    )
    .unwrap();
    assert_eq!(movie.end(), &t);
    assert_identity_on_homology(&movie, "trefoil reorder");
}

#[test]
fn r3_twice_is_identity() {
    let mut found = 0;
    for (name, d) in corpus(7) {
        let ends = d.arc_ends();
        for f in d.faces().into_iter().filter(|f| f.boundary.len() == 3) {
            let mut ks: Vec<usize> = f.boundary.iter().flat_map(|e| [ends[&e.0].0 .0, ends[&e.0].1 .0]).collect();
            ks.sort_unstable();
            ks.dedup();
            let Ok(ks) = <[usize; 3]>::try_from(ks) else { continue };
            let mv = MovieMove::R3 { crossings: ks };
            let Ok(movie) = Movie::from_moves(d.clone(), vec![mv.clone(), mv]) else { continue };
            assert_eq!(movie.end(), &d);
            assert_identity_on_homology(&movie, &format!("{name} R3 {ks:?}"));
            found += 1;
        }
    }
    assert!(found >= 2, "only {found} R3 sites");
}

#[test]
fn movie_json_round_trip_and_broken_frame() {
    let t = OrientedDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]").unwrap();
    let movie =
        Movie::from_moves(t, vec![MovieMove::R1Add { arc: 2, sign: Sign::Positive, under_first: true }]).unwrap();
    let back = Movie::from_json(&movie.to_json()).unwrap();
    assert_eq!(back, movie);
    back.validate().unwrap();
    let mut broken = movie.clone();
    broken.frames[1] = OrientedDiagram::unknot(1);
    match broken.validate() {
        Err(khoxotic::KhError::BadFrame { index, .. }) => assert_eq!(index, 1),
        other => panic!("{other:?}"),
    }
}

/// A few moves on `d`: a kink, a finger over a neighbouring arc, and an R3 if
/// one appears.
fn wiggle(d: &OrientedDiagram) -> Movie {
    let n = d.crossing_count();
    let arc = d.arcs()[0];
    let mut movie = Movie::from_moves(
        d.clone(),
        vec![MovieMove::R1Add { arc, sign: Sign::Negative, under_first: n % 2 == 0 }],
    )
    .unwrap();
    let e = movie.end().clone();
    let f = e.faces().into_iter().find(|f| f.boundary.len() >= 3).unwrap();
    let (x, y) = (f.boundary[0].0, f.boundary[2].0);
    for face in 0..2 {
        if let Ok(m) = Movie::from_moves(e.clone(), vec![MovieMove::R2Add { over: x, under: y, face }]) {
            movie = movie.then(&m).unwrap();
            break;
        }
    }
    movie
}

#[test]
fn reversed_movies_cancel() {
    let mut done = 0;
    for (name, d) in corpus(7).into_iter().take(10) {
        let fwd = wiggle(&d);
        assert!(fwd.moves.len() >= 2, "{name}");
        let back = reverse_movie(&fwd).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(back.end(), &d);
        let round = fwd.then(&back).unwrap();
        assert_identity_on_homology(&round, &format!("{name} reversed"));
        done += 1;
    }
    assert_eq!(done, 10);
}
