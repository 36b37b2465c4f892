//! Acceptance gate. Prints one PASS/FAIL line per criterion. A criterion that
//! cannot run because its input assets are not in the repository prints FAIL
//! with the reason but does not fail the gate; any other FAIL does.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use khoxotic::cobordism::{homology_map, is_plus_minus_identity, reverse_movie, Movie, MovieMove};
use khoxotic::cp2::two_saddle_map;
use khoxotic::jones::jones_polynomial;
use khoxotic::khovanov::homology::{euler_characteristic, group_at};
use khoxotic::khovanov::{build_block, homology, simplify, Algebra, Cube, Window};
use khoxotic::{OrientedDiagram, Sign};
use khoxotic_cli::cache::Cache;
use khoxotic_cli::commands::asset_paths;
use khoxotic_cli::{cmd_theorem1, cmd_torus_table, cmd_verify_hs, DiskArgs, Options, Outcome, Theorem1Args};
use num_traits::{Signed, ToPrimitive};

/// Time limits, exact-equality criteria aside.
const SMALL_LINK_LIMIT: Duration = Duration::from_secs(1);
const JONES_CORPUS_LIMIT: Duration = Duration::from_secs(60);
const MIN_JONES_CORPUS: usize = 20;
const MAX_JONES_CROSSINGS: usize = 12;
const TORUS_MAX_N: usize = 4;
const LEE_MAX_N: usize = 3;
const MOVIE_CASES: usize = 10;

enum Verdict {
    Pass(String),
    Fail(String),
    /// Inputs missing from the repository.
    Blocked(String),
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn corpus() -> Vec<(String, OrientedDiagram)> {
    let mut out: Vec<_> = std::fs::read_dir(data("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pd"))
        .map(|p| {
            let d = OrientedDiagram::parse_pd(&std::fs::read_to_string(&p).unwrap()).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), d)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn corpus_entry(name: &str) -> OrientedDiagram {
    corpus().into_iter().find(|(n, _)| n == name).unwrap().1
}

fn options(cache: &Path) -> Options {
    Options {
        cache: Cache::open(Some(cache)).unwrap(),
        window: None,
        budget: khoxotic_cli::guard::DEFAULT_BUDGET,
        force: false,
        certificate: None,
        data_dir: data(""),
        timings: false,
    }
}

fn small_links() -> Verdict {
    let cases = [
        ("unknot", OrientedDiagram::unknot(1)),
        ("hopf+", corpus_entry("L2a1")),
        ("hopf-", corpus_entry("L2a1").mirror()),
        ("trefoil", corpus_entry("3_1")),
        ("mirror trefoil", corpus_entry("3_1").mirror()),
        ("figure-eight", corpus_entry("4_1")),
    ];
    let mut slowest = Duration::ZERO;
    for (name, d) in cases {
        let t = Instant::now();
        let ours: khoxotic_oracle::Table = homology(&d, &Window::full())
            .unwrap()
            .table()
            .into_iter()
            .map(|(k, (r, tor))| (k, (r, tor.iter().map(|x| x.to_u64().unwrap()).collect())))
            .collect();
        let took = t.elapsed();
        slowest = slowest.max(took);
        let input: Vec<khoxotic_oracle::Crossing> =
            d.crossings().iter().map(|c| (c.arcs, c.sign == Sign::Positive)).collect();
        let oracle = khoxotic_oracle::khovanov_table(&input, d.loops().len());
        if ours != oracle {
            return Verdict::Fail(format!("{name}: {ours:?} vs oracle {oracle:?}"));
        }
        if took > SMALL_LINK_LIMIT {
            return Verdict::Fail(format!("{name}: {took:?}"));
        }
    }
    Verdict::Pass(format!("6 links equal to the oracle, slowest {slowest:.2?}"))
}

fn jones_corpus() -> Verdict {
    let t = Instant::now();
    let mut n = 0;
    for (name, d) in corpus().into_iter().filter(|(_, d)| d.crossing_count() <= MAX_JONES_CROSSINGS) {
        let chi = euler_characteristic(&homology(&d, &Window::full()).unwrap());
        let jones: BTreeMap<i64, i64> = jones_polynomial(&d).terms;
        if chi != jones {
            return Verdict::Fail(format!("{name}: {chi:?} vs {jones:?}"));
        }
        n += 1;
    }
    let took = t.elapsed();
    if n < MIN_JONES_CORPUS || took > JONES_CORPUS_LIMIT {
        return Verdict::Fail(format!("{n} diagrams in {took:.2?}"));
    }
    Verdict::Pass(format!("{n} diagrams in {took:.2?}"))
}

fn torus_rows(cache: &Path) -> Result<Vec<serde_json::Value>, String> {
    let r = cmd_torus_table(TORUS_MAX_N, &options(cache)).map_err(|e| e.to_string())?;
    Ok(r.results["rows"].as_array().unwrap().clone())
}

fn torus_table(cache: &Path) -> Verdict {
    let rows = match torus_rows(cache) {
        Ok(r) => r,
        Err(e) => return Verdict::Fail(e),
    };
    for r in &rows {
        if r["bottom_is_z"] != true || r["vanishes_below"] != true {
            return Verdict::Fail(format!("row {r}"));
        }
    }
    Verdict::Pass(format!("{} rows with p+q <= {TORUS_MAX_N}", rows.len()))
}

fn lee_degrees(cache: &Path) -> Verdict {
    let rows = match torus_rows(cache) {
        Ok(r) => r,
        Err(e) => return Verdict::Fail(e),
    };
    let mut n = 0;
    for r in rows.iter().filter(|r| (r["p"].as_u64().unwrap() + r["q"].as_u64().unwrap()) as usize <= LEE_MAX_N) {
        if r["lee_degree"] != r["grq"] {
            return Verdict::Fail(format!("({}, {}): Lee {} vs gr_q {}", r["p"], r["q"], r["lee_degree"], r["grq"]));
        }
        n += 1;
    }
    Verdict::Pass(format!("{n} torus links"))
}

fn two_saddles() -> Verdict {
    let mut seen = Vec::new();
    for (p, q) in [(1, 0), (0, 1), (1, 1)] {
        match two_saddle_map(p, q) {
            Ok(v) if v.abs() == 1.into() => seen.push(format!("({p},{q}) -> {v}")),
            Ok(v) => return Verdict::Fail(format!("({p},{q}) -> {v}")),
            Err(e) => return Verdict::Fail(format!("({p},{q}): {e}")),
        }
    }
    Verdict::Pass(seen.join(", "))
}

/// A kink followed by a finger move, on the first arc.
fn wiggle(d: &OrientedDiagram) -> Option<Movie> {
    let arc = d.arcs()[0];
    let under_first = d.crossing_count() % 2 == 0;
    let mut movie = Movie::from_moves(d.clone(), vec![MovieMove::R1Add { arc, sign: Sign::Negative, under_first }]).ok()?;
    let e = movie.end().clone();
    let f = e.faces().into_iter().find(|f| f.boundary.len() >= 3)?;
    let (x, y) = (f.boundary[0].0, f.boundary[2].0);
    let step = (0..2).find_map(|face| Movie::from_moves(e.clone(), vec![MovieMove::R2Add { over: x, under: y, face }]).ok())?;
    movie = movie.then(&step).ok()?;
    Some(movie)
}

fn identity_on_homology(movie: &Movie) -> Result<(), String> {
    let cube = Cube::new(movie.start());
    let Some((a, b)) = cube.q_range(0) else { return Ok(()) };
    for q in (a..=b).step_by(2) {
        let g = group_at(&simplify(&build_block(&cube, q, -1, 1, Algebra::Khovanov)).map_err(|e| e.to_string())?, 0);
        if g.is_zero() {
            continue;
        }
        let m = homology_map(movie, q).map_err(|e| e.to_string())?;
        if !is_plus_minus_identity(&m, &g) {
            return Err(format!("q = {q}: {m:?}"));
        }
    }
    Ok(())
}

fn movie_functoriality() -> Verdict {
    let mut names = Vec::new();
    for (name, d) in corpus().into_iter().filter(|(_, d)| d.crossing_count() <= 7) {
        if names.len() == MOVIE_CASES {
            break;
        }
        let Some(fwd) = wiggle(&d) else { continue };
        let back = match reverse_movie(&fwd) {
            Ok(b) => b,
            Err(e) => return Verdict::Fail(format!("{name}: {e}")),
        };
        let round = fwd.then(&back).unwrap();
        if round.end() != &d {
            return Verdict::Fail(format!("{name}: round trip ends elsewhere"));
        }
        if let Err(e) = identity_on_homology(&round) {
            return Verdict::Fail(format!("{name}: {e}"));
        }
        names.push(name);
    }
    if names.len() < MOVIE_CASES {
        return Verdict::Fail(format!("only {} cases", names.len()));
    }
    Verdict::Pass(format!("R1+R2 movies and their reverses on {}", names.join(" ")))
}

fn flagship(cache: &Path) -> Verdict {
    let missing: Vec<String> = asset_paths(&data(""), 1)
        .iter()
        .filter(|p| !p.exists())
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    let opts = options(cache);
    if !missing.is_empty() {
        // the same pipeline on the stand-in pair, for the record
        let (a, b) = (data("9_46_sigma.bands"), data("9_46_sigma_prime.bands"));
        let args = DiskArgs { k: None, sigma: Some(&a), sigma_prime: Some(&b), self_test: false };
        let hs = cmd_verify_hs(&args, &opts).map(|r| r.outcome);
        let t1 = cmd_theorem1(&Theorem1Args { disks: args, cp2: None, cp2_prime: None }, &opts).map(|r| r.outcome);
        let stand_in = match (hs, t1) {
            (Ok(Outcome::Success), Ok(Outcome::Success)) => "9_46 stand-in distinguished and blows down",
            _ => "9_46 stand-in also fails",
        };
        return Verdict::Blocked(format!("J1 assets not shipped ({}); {stand_in}", missing.join(", ")));
    }
    let args = DiskArgs { k: Some(1), sigma: None, sigma_prime: None, self_test: false };
    let hs = match cmd_verify_hs(&args, &opts) {
        Ok(r) => r,
        Err(e) => return Verdict::Fail(format!("verify-hs 1: {e}")),
    };
    let w = &hs.results["distinction"]["witness"]["values"];
    if hs.outcome != Outcome::Success || w[0].as_i64().map(i64::abs) != Some(1) || w[1] != 0 {
        return Verdict::Fail(format!("verify-hs 1: {}", hs.results["distinction"]));
    }
    match cmd_theorem1(&Theorem1Args { disks: args, cp2: None, cp2_prime: None }, &opts) {
        Ok(r) if r.outcome == Outcome::Success => Verdict::Pass(format!("phi values {w}, blowdown agrees")),
        Ok(r) => Verdict::Fail(format!("theorem1 1: {}", r.results)),
        Err(e) => Verdict::Fail(format!("theorem1 1: {e}")),
    }
}

fn run_cli(cache: &Path, args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_khoxotic"))
        .arg("--cache-dir")
        .arg(cache)
        .arg("--json")
        .args(args)
        .output()
        .unwrap();
    (out.status.code(), out.stdout)
}

fn determinism(scratch: &Path) -> Verdict {
    let (trefoil, j946) = (data("corpus/3_1.pd"), data("corpus/9_46.pd"));
    let (a, b) = (data("9_46_sigma.bands"), data("9_46_sigma_prime.bands"));
    let movie = scratch.join("kink.movie");
    let kink = MovieMove::R1Add { arc: 1, sign: Sign::Positive, under_first: true };
    std::fs::write(&movie, Movie::from_moves(corpus_entry("3_1"), vec![kink]).unwrap().to_json()).unwrap();
    let s = |p: &PathBuf| p.to_str().unwrap().to_string();
    let commands: Vec<Vec<String>> = vec![
        vec!["homology".into(), s(&trefoil)],
        vec!["homology".into(), s(&j946), "--window=i=0,j=-1".into()],
        vec!["verify-hs".into(), "--sigma".into(), s(&a), "--sigma-prime".into(), s(&b)],
        vec!["theorem1".into(), "--sigma".into(), s(&a), "--sigma-prime".into(), s(&b)],
        vec!["theorem1".into(), "--self-test".into()],
        vec!["torus-table".into(), "3".into()],
        vec!["movie-check".into(), s(&movie)],
        vec!["export-link".into(), s(&j946)],
    ];
    for (k, cmd) in commands.iter().enumerate() {
        let args: Vec<&str> = cmd.iter().map(String::as_str).collect();
        let runs: Vec<_> = (0..2).map(|r| run_cli(&scratch.join(format!("cold-{k}-{r}")), &args)).collect();
        let warm = run_cli(&scratch.join(format!("cold-{k}-0")), &args);
        if runs[0].0 != Some(0) {
            return Verdict::Fail(format!("{} exited {:?}", cmd[0], runs[0].0));
        }
        if runs[0] != runs[1] || runs[0] != warm {
            return Verdict::Fail(format!("{} reports differ", cmd.join(" ")));
        }
    }
    Verdict::Pass(format!("{} commands, two cold runs and one warm run each", commands.len()))
}

fn main() {
    let scratch = tempfile::tempdir().unwrap();
    let cache = scratch.path().join("shared");
    let checks: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("small-link Kh over Z vs full-cube oracle", Box::new(small_links)),
        ("graded Euler characteristic vs Jones state sum", Box::new(jones_corpus)),
        ("torus table Kh^{0,j} = Z at gr_q, 0 below, p+q <= 4", Box::new(|| torus_table(&cache))),
        ("Lee filtration degree = gr_q, p+q <= 3", Box::new(|| lee_degrees(&cache))),
        ("two-saddle maps are +-1", Box::new(two_saddles)),
        ("reversed R-move movies give +-identity", Box::new(movie_functoriality)),
        ("verify-hs 1 and theorem1 1", Box::new(|| flagship(&cache))),
        ("deterministic JSON reports", Box::new(|| determinism(scratch.path()))),
    ];
    let mut regressions = 0;
    for (k, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match check() {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                regressions += 1;
                ("FAIL", d)
            }
            Verdict::Blocked(d) => ("FAIL", format!("blocked: {d}")),
        };
        println!("{tag} [{}] {name}: {detail} ({:.2?})", k + 1, t.elapsed());
    }
    if regressions > 0 {
        std::process::exit(1);
    }
}
