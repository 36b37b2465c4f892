use std::collections::BTreeMap;
use std::path::PathBuf;

use khoxotic::jones::jones_polynomial;
use khoxotic::khovanov::homology::euler_characteristic;
use khoxotic::khovanov::{build_complex, homology, Window};
use khoxotic::OrientedDiagram;
use num_traits::ToPrimitive;

fn corpus() -> Vec<(String, OrientedDiagram)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus");
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "pd"))
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let d = OrientedDiagram::parse_pd(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, d)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn oracle_input(d: &OrientedDiagram) -> Vec<khoxotic_oracle::Crossing> {
    d.crossings().iter().map(|c| (c.arcs, c.sign == khoxotic::Sign::Positive)).collect()
}

fn rational_ranks(d: &OrientedDiagram) -> BTreeMap<(i32, i32), usize> {
    homology(d, &Window::full())
        .unwrap()
        .groups
        .iter()
        .filter(|(_, g)| g.free_rank > 0)
        .map(|(&k, g)| (k, g.free_rank))
        .collect()
}

#[test]
fn corpus_is_planar_and_sized() {
    let c = corpus();
    assert!(c.len() >= 20);
    for (name, d) in &c {
        d.check_planar().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(d.crossing_count() <= 12, "{name}");
    }
}

#[test]
fn euler_characteristic_is_jones() {
    for (name, d) in corpus() {
        let h = homology(&d, &Window::full()).unwrap();
        let chi = euler_characteristic(&h);
        let jones: BTreeMap<i64, i64> = jones_polynomial(&d).terms;
        assert_eq!(chi, jones, "{name}");
    }
}

#[test]
fn agrees_with_brute_force_up_to_seven_crossings() {
    for (name, d) in corpus() {
        if d.crossing_count() > 7 {
            continue;
        }
        let ours: khoxotic_oracle::Table = homology(&d, &Window::full())
            .unwrap()
            .table()
            .into_iter()
            .map(|(k, (r, t))| (k, (r, t.iter().map(|x| x.to_u64().unwrap()).collect())))
            .collect();
        let oracle = khoxotic_oracle::khovanov_table(&oracle_input(&d), d.loops().len());
        assert_eq!(ours, oracle, "{name}");
    }
}

#[test]
fn mirror_duality_over_q() {
    for (name, d) in corpus() {
        if d.crossing_count() > 10 {
            continue;
        }
        let a = rational_ranks(&d);
        let b: BTreeMap<(i32, i32), usize> =
            rational_ranks(&d.mirror()).into_iter().map(|((i, j), r)| ((-i, -j), r)).collect();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn windows_agree_with_full_computation() {
    for (name, d) in corpus().into_iter().filter(|(_, d)| d.crossing_count() <= 9) {
        let full = homology(&d, &Window::full()).unwrap().table();
        for i in -3..=3 {
            let w = homology(&d, &Window::h(i, i)).unwrap().table();
            let expect: BTreeMap<_, _> = full.iter().filter(|(k, _)| k.0 == i).map(|(k, v)| (*k, v.clone())).collect();
            assert_eq!(w, expect, "{name} at i = {i}");
        }
    }
}

#[test]
fn complexes_square_to_zero() {
    for (name, d) in corpus().into_iter().filter(|(_, d)| d.crossing_count() <= 10) {
        assert!(build_complex(&d, &Window::full()).check_d_squared(), "{name}");
    }
}
