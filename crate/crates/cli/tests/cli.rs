use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use khoxotic::cobordism::{Movie, MovieMove};
use khoxotic::cp2::blow_up;
use khoxotic::ribbon::BandPresentation;
use khoxotic::{OrientedDiagram, Sign};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn khoxotic(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khoxotic"))
        .arg("--cache-dir")
        .arg(cache)
        .arg("--data-dir")
        .arg(data(""))
        .args(args)
        .env_remove("KHOXOTIC_CACHE_DIR")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn trefoil() -> OrientedDiagram {
    OrientedDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]").unwrap()
}

#[test]
fn unknot_table() {
    let dir = tempfile::tempdir().unwrap();
    let pd = dir.path().join("u.pd");
    std::fs::write(&pd, "O[1]\n").unwrap();
    let out = khoxotic(dir.path(), &["homology", pd.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    let cells: Vec<(i64, i64, u64)> = r["results"]["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| (g["i"].as_i64().unwrap(), g["j"].as_i64().unwrap(), g["rank"].as_u64().unwrap()))
        .collect();
    assert_eq!(cells, [(0, -1, 1), (0, 1, 1)]);
}

#[test]
fn trefoil_has_two_torsion() {
    let dir = tempfile::tempdir().unwrap();
    let out = khoxotic(dir.path(), &["homology", data("corpus/3_1.pd").to_str().unwrap(), "--json"]);
    let r = json_of(&out);
    let torsion: Vec<&Value> = r["results"]["groups"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|g| !g["torsion"].as_array().unwrap().is_empty())
        .collect();
    assert_eq!(torsion.len(), 1);
    assert_eq!(torsion[0]["torsion"], serde_json::json!([2]));
}

#[test]
fn window_and_bad_input_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = data("corpus/9_46.pd");
    let out = khoxotic(dir.path(), &["homology", p.to_str().unwrap(), "--window=i=0,j=-1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let groups = json_of(&out)["results"]["groups"].as_array().unwrap().clone();
    assert!(groups.iter().all(|g| g["i"] == 0 && g["j"] == -1));

    let out = khoxotic(dir.path(), &["homology", p.to_str().unwrap(), "--window=k=3"]);
    assert_eq!(out.status.code(), Some(2));
    let bad = dir.path().join("bad.pd");
    std::fs::write(&bad, "X[1,2,3]\n").unwrap();
    assert_eq!(khoxotic(dir.path(), &["homology", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(khoxotic(dir.path(), &["homology", "/nonexistent.pd"]).status.code(), Some(2));
}

#[test]
fn generator_guard() {
    let dir = tempfile::tempdir().unwrap();
    let p = data("corpus/3_1.pd");
    let out = khoxotic(dir.path(), &["homology", p.to_str().unwrap(), "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));
    let out = khoxotic(dir.path(), &["homology", p.to_str().unwrap(), "--budget", "10", "--force"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn flagship_assets_are_reported_missing() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["verify-hs", "theorem1"] {
        let out = khoxotic(dir.path(), &[cmd, "1"]);
        if !data("sigma1.bands").exists() {
            assert_eq!(out.status.code(), Some(2), "{cmd}");
            assert!(String::from_utf8_lossy(&out.stderr).contains("sigma1.bands"));
        }
    }
}

fn stand_in<'a>(cmd: &'a str, sigma: &'a str, prime: &'a str) -> Vec<&'a str> {
    vec![cmd, "--sigma", sigma, "--sigma-prime", prime, "--json"]
}

#[test]
fn stand_in_disks_are_distinguished_and_blow_down() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (data("9_46_sigma.bands"), data("9_46_sigma_prime.bands"));
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let out = khoxotic(dir.path(), &stand_in("verify-hs", a, b));
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["results"]["distinction"]["verdict"], "distinct-with-witness");
    let v = &r["results"]["distinction"]["witness"]["values"];
    assert_eq!(v[0].as_i64().unwrap().abs(), 1);
    assert_eq!(v[1], 0);

    let mut args = stand_in("verify-hs", a, b);
    args.push("--self-test");
    let out = khoxotic(dir.path(), &args);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["results"]["distinction"]["verdict"], "not-distinguished");

    let out = khoxotic(dir.path(), &stand_in("theorem1", a, b));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["results"]["blowdown_agrees"], true);

    let out = khoxotic(dir.path(), &["theorem1", "--self-test", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["results"]["cp2_is_counit"], true);
}

#[test]
fn mismatched_surface_metadata_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bp = BandPresentation::from_json(&std::fs::read_to_string(data("9_46_sigma.bands")).unwrap()).unwrap();
    let pres = blow_up(&bp.mirrored().unwrap()).unwrap();
    let good = dir.path().join("good.cp2");
    std::fs::write(&good, pres.to_json()).unwrap();
    let mut v: Value = serde_json::from_str(&pres.to_json()).unwrap();
    v["p"] = 2.into();
    v["q"] = 1.into();
    let bad = dir.path().join("bad.cp2");
    std::fs::write(&bad, v.to_string()).unwrap();

    let out = khoxotic(dir.path(), &["cp2-map", good.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["results"]["functional"]["values"], serde_json::json!([1, -1]));

    let (a, b) = (data("9_46_sigma.bands"), data("9_46_sigma_prime.bands"));
    let mut args = stand_in("theorem1", a.to_str().unwrap(), b.to_str().unwrap());
    args.extend(["--cp2", bad.to_str().unwrap()]);
    let out = khoxotic(dir.path(), &args);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("torus link"));
}

#[test]
fn movie_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.movie");
    std::fs::write(&empty, "").unwrap();
    let out = khoxotic(dir.path(), &["movie-check", empty.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["results"]["valid"], true);

    let movie = Movie::from_moves(
        trefoil(),
        vec![
            MovieMove::R1Add { arc: 2, sign: Sign::Positive, under_first: true },
            MovieMove::R1Add { arc: 4, sign: Sign::Negative, under_first: false },
            MovieMove::R1Remove { crossing: 4 },
        ],
    )
    .unwrap();
    let good = dir.path().join("good.movie");
    std::fs::write(&good, movie.to_json()).unwrap();
    let out = khoxotic(dir.path(), &["movie-check", good.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["results"]["frames"], 4);

    let mut v: Value = serde_json::from_str(&movie.to_json()).unwrap();
    v["frames"][2] = "O[1]".into();
    let broken = dir.path().join("broken.movie");
    std::fs::write(&broken, v.to_string()).unwrap();
    let out = khoxotic(dir.path(), &["movie-check", broken.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["results"]["first_failing_frame"], 2);

    let junk = dir.path().join("junk.movie");
    std::fs::write(&junk, "{").unwrap();
    assert_eq!(khoxotic(dir.path(), &["movie-check", junk.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn torus_table_rows_and_limits() {
    let dir = tempfile::tempdir().unwrap();
    let out = khoxotic(dir.path(), &["torus-table", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_of(&out)["results"]["rows"].as_array().unwrap().clone();
    let pq: Vec<(u64, u64)> = rows.iter().map(|r| (r["p"].as_u64().unwrap(), r["q"].as_u64().unwrap())).collect();
    assert_eq!(pq, [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
    assert!(rows.iter().all(|r| r["bottom_is_z"] == true && r["vanishes_below"] == true));
    assert_eq!(khoxotic(dir.path(), &["torus-table", "5"]).status.code(), Some(3));
    assert_eq!(khoxotic(dir.path(), &["torus-table", "7"]).status.code(), Some(3));
}

#[test]
fn cache_is_used_and_unlocked() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let p = data("corpus/4_1.pd");
    let cold = khoxotic(&cache, &["homology", p.to_str().unwrap(), "--json"]);
    let entries: Vec<_> = std::fs::read_dir(&cache).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(entries.len(), 1, "{entries:?}");
    assert!(entries[0].to_string_lossy().ends_with(".json"));
    let warm = khoxotic(&cache, &["homology", p.to_str().unwrap(), "--json"]);
    assert_eq!(cold.stdout, warm.stdout);

    // the environment variable picks the directory when the flag is absent
    let env_dir = dir.path().join("env");
    let out = Command::new(env!("CARGO_BIN_EXE_khoxotic"))
        .args(["homology", p.to_str().unwrap()])
        .env("KHOXOTIC_CACHE_DIR", &env_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&env_dir).unwrap().count(), 1);
}

#[test]
fn export_for_geometry_tools() {
    let dir = tempfile::tempdir().unwrap();
    let out = khoxotic(dir.path(), &["export-link", data("corpus/3_1.pd").to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["results"]["pd"].as_array().unwrap().len(), 3);
    let u = dir.path().join("u.pd");
    std::fs::write(&u, "O[1]\n").unwrap();
    assert_eq!(khoxotic(dir.path(), &["export-link", u.to_str().unwrap()]).status.code(), Some(2));
}
