use std::path::PathBuf;
use std::time::Instant;

use khoxotic::cp2::{
    blow_up, blowdown_check, cp2_functional, grq, isotopy_spot_check, stabilization_map, torus_projection,
    two_saddle_map, Cp2Presentation,
};
use khoxotic::ribbon::BandPresentation;
use khoxotic::OrientedDiagram;
use num_bigint::BigInt;

fn data(name: &str) -> BandPresentation {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    BandPresentation::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn trivial_disk() -> BandPresentation {
    BandPresentation { boundary: OrientedDiagram::unknot(1), bands: vec![], components: 1, certificate: None }
}

#[test]
fn grq_values() {
    assert_eq!(grq(1, 0).unwrap(), -1);
    assert_eq!(grq(1, 1).unwrap(), -2);
    assert_eq!(grq(2, 0).unwrap(), 0);
    assert_eq!(grq(2, 1).unwrap(), -3);
    assert!(grq(0, 0).is_err());
}

#[test]
fn projections_are_infinite_cyclic() {
    for (p, q) in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (2, 1), (1, 2)] {
        let t = torus_projection(p, q).unwrap();
        assert_eq!(t.grq, grq(p, q).unwrap());
        assert!(!t.generator.is_empty());
        assert!(t.generator[0].1 > 0);
    }
}

#[test]
fn trivial_disk_blown_up_is_the_counit() {
    let pres = blow_up(&trivial_disk()).unwrap();
    assert_eq!((pres.p, pres.q), (1, 0));
    let f = cp2_functional(&pres).unwrap();
    assert_eq!(f.bidegree, (0, -1));
    assert_eq!(f.values, vec![BigInt::from(1)]);
}

#[test]
fn blowdown_matches_the_disk() {
    for name in ["9_46_sigma.bands", "9_46_sigma_prime.bands"] {
        let bp = data(name).mirrored().unwrap();
        let c = blowdown_check(&bp).unwrap();
        assert!(c.equal_up_to_sign, "{name}: {:?} vs {:?}", c.disk, c.cp2);
    }
}

#[test]
fn presentation_json_round_trip_and_endpoint_check() {
    let pres = blow_up(&data("9_46_sigma.bands")).unwrap();
    let back = Cp2Presentation::from_json(&pres.to_json()).unwrap();
    assert_eq!(back, pres);
    let wrong = pres.to_json().replace("\"q\": 0", "\"q\": 1").replace("\"alpha\": 1", "\"alpha\": 0");
    assert!(Cp2Presentation::from_json(&wrong).is_err());
    let bad_alpha = pres.to_json().replace("\"alpha\": 1", "\"alpha\": 2");
    assert!(Cp2Presentation::from_json(&bad_alpha).is_err());
}

#[test]
fn two_saddle_maps_are_isomorphisms() {
    for (p, q) in [(1, 0), (0, 1), (1, 1)] {
        let t = Instant::now();
        let v = two_saddle_map(p, q).unwrap();
        assert_eq!(v.magnitude(), &1u32.into(), "({p},{q})");
        eprintln!("two-saddle ({p},{q}) = {v} in {:?}", t.elapsed());
    }
    assert_eq!(stabilization_map(1, 0, 0).unwrap(), BigInt::from(1));
    assert_eq!(stabilization_map(1, 0, 1).unwrap(), two_saddle_map(1, 0).unwrap());
    // T(5,5) would be the target: refused up front rather than run out of memory
    assert!(matches!(stabilization_map(1, 0, 2), Err(khoxotic::KhError::Infeasible(_))));
}

#[test]
fn strand_choice_does_not_matter() {
    let pres = blow_up(&data("9_46_sigma.bands").mirrored().unwrap()).unwrap();
    let base = cp2_functional(&pres).unwrap();
    let (fs, agree) = isotopy_spot_check(&pres, 2).unwrap();
    assert!(agree, "{fs:?}");
    assert!(fs.len() >= 2, "only {} strand choices", fs.len());
    assert!(fs[0].values == base.values || fs[0].values.iter().zip(&base.values).all(|(a, b)| *a == -b));
}
