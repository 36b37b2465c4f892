use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use khoxotic::cobordism::{Functional, Movie, MovieMove};
use khoxotic::cp2::{blowdown_check, blow_up, cp2_functional, degree_zero_group, grq, torus_feasibility, Cp2Presentation, TorusFeasibility};
use khoxotic::families::torus_link;
use khoxotic::khovanov::lee::lee_complex;
use khoxotic::khovanov::{homology, Cube, Window};
use khoxotic::ribbon::{distinguish, Band, BandPresentation, Verdict};
use khoxotic::{KhError, OrientedDiagram};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cache::{key, Cache};
use crate::guard::{check_budget, generator_estimate};
use crate::report::{int, ints, Outcome, Report};

/// Failure of a command, by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or inconsistent input: exit 2.
    Input(String),
    /// The computation cannot be carried out here: exit 3.
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible: {m}"),
        }
    }
}

impl From<KhError> for CliError {
    fn from(e: KhError) -> Self {
        match e {
            KhError::Diagram(_)
            | KhError::IllegalMove(_)
            | KhError::BadFrame { .. }
            | KhError::DomainMismatch(_)
            | KhError::Invalid(_) => CliError::Input(e.to_string()),
            KhError::SimplifierFailed(m) => CliError::Infeasible(format!(
                "simplifier failed ({m}); supply the R-moves with --certificate <file>"
            )),
            other => CliError::Infeasible(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("cache: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub struct Options {
    pub cache: Cache,
    pub window: Option<Window>,
    pub budget: u128,
    pub force: bool,
    pub certificate: Option<PathBuf>,
    pub data_dir: PathBuf,
    pub timings: bool,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn guard(opts: &Options, what: &str, d: &OrientedDiagram, h: Option<(i32, i32)>) -> CliResult<()> {
    check_budget(what, generator_estimate(d, h), opts.budget, opts.force).map_err(CliError::Infeasible)
}

fn finish(mut report: Report, opts: &Options, start: Instant) -> Report {
    if opts.timings {
        report.timings_ms = Some(BTreeMap::from([("total".to_string(), start.elapsed().as_millis())]));
    }
    report
}

fn group_cell(i: i32, j: i32, rank: usize, torsion: &[BigInt]) -> Value {
    json!({ "i": i, "j": j, "rank": rank, "torsion": ints(torsion) })
}

fn window_json(w: &Window) -> Value {
    json!({ "i": w.h.map(|(a, b)| vec![a, b]), "j": w.q })
}

pub fn cmd_homology(path: &Path, opts: &Options) -> CliResult<Report> {
    let start = Instant::now();
    let text = read(path)?;
    let d = OrientedDiagram::parse_pd(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let window = opts.window.clone().unwrap_or_default();
    guard(opts, "homology", &d, window.h)?;
    let k = key("homology", &[&d.to_pd_string(), &serde_json::to_string(&window).expect("window")]);
    let groups: Value = opts.cache.get_or_compute(&k, || -> CliResult<Value> {
        let h = homology(&d, &window)?;
        Ok(Value::Array(h.table().iter().map(|(&(i, j), (r, t))| group_cell(i, j, *r, t)).collect()))
    })?;
    let mut report = Report::new("homology");
    report.input("diagram", text.as_bytes());
    report.results = json!({
        "diagram": {
            "crossings": d.crossing_count(),
            "components": d.components().len(),
            "n_plus": d.n_plus(),
            "n_minus": d.n_minus(),
        },
        "window": window_json(&window),
        "groups": groups,
    });
    Ok(finish(report, opts, start))
}

/// The two band presentations of a verification run, by role.
struct Disks {
    sigma: (String, BandPresentation),
    sigma_prime: (String, BandPresentation),
}

/// Shipped asset names for the `k`-th pair of disks.
pub fn asset_paths(data_dir: &Path, k: u32) -> [PathBuf; 3] {
    [
        data_dir.join(format!("j{k}.pd")),
        data_dir.join(format!("sigma{k}.bands")),
        data_dir.join(format!("sigma{k}p.bands")),
    ]
}

fn load_disks(
    k: Option<u32>,
    sigma: Option<&Path>,
    sigma_prime: Option<&Path>,
    opts: &Options,
    report: &mut Report,
) -> CliResult<Disks> {
    let (a, b) = match (sigma, sigma_prime, k) {
        (Some(a), Some(b), _) => (a.to_path_buf(), b.to_path_buf()),
        (None, None, Some(k)) => {
            let [knot, a, b] = asset_paths(&opts.data_dir, k);
            let missing: Vec<String> =
                [&knot, &a, &b].iter().filter(|p| !p.exists()).map(|p| p.display().to_string()).collect();
            if !missing.is_empty() {
                return Err(CliError::Input(format!("assets for k = {k} are not shipped: missing {}", missing.join(", "))));
            }
            let text = read(&knot)?;
            report.input("knot", text.as_bytes());
            let j = OrientedDiagram::parse_pd(&text).map_err(|e| CliError::Input(format!("{}: {e}", knot.display())))?;
            let disks = (a, b);
            for p in [&disks.0, &disks.1] {
                let bp = BandPresentation::from_json(&read(p)?)?;
                if khoxotic::cobordism::find_isomorphism(&bp.boundary, &j).is_none() {
                    return Err(CliError::Input(format!("{}: boundary is not {}", p.display(), knot.display())));
                }
            }
            disks
        }
        _ => return Err(CliError::Input("give k, or both --sigma and --sigma-prime".into())),
    };
    let load = |role: &str, p: &Path, report: &mut Report| -> CliResult<(String, BandPresentation)> {
        let text = read(p)?;
        report.input(role, text.as_bytes());
        let bp = BandPresentation::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        Ok((role.to_string(), bp))
    };
    let sigma = load("sigma", &a, report)?;
    let sigma_prime = load("sigma_prime", &b, report)?;
    if sigma.1.boundary != sigma_prime.1.boundary {
        return Err(CliError::Input("the two disks have different boundary diagrams".into()));
    }
    Ok(Disks { sigma, sigma_prime })
}

/// The mirrored presentation, with certificate moves from `--certificate`
/// when the file has an entry for this role.
fn prepared(role: &str, bp: &BandPresentation, opts: &Options, report: &mut Report) -> CliResult<BandPresentation> {
    let mut m = bp.mirrored()?;
    if let Some(path) = &opts.certificate {
        let text = read(path)?;
        report.input("certificate", text.as_bytes());
        let certs: BTreeMap<String, Vec<MovieMove>> =
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        if let Some(moves) = certs.get(role) {
            m.certificate = Some(moves.clone());
        }
    }
    Ok(m)
}

fn disk_functional_cached(bp: &BandPresentation, opts: &Options) -> CliResult<Functional> {
    opts.cache.get_or_compute(&key("disk-functional", &[&bp.to_json()]), || -> CliResult<Functional> {
        Ok(khoxotic::ribbon::disk_functional(bp)?)
    })
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn distinction_json(f: &Functional, g: &Functional) -> CliResult<(Value, bool)> {
    let d = distinguish(f, g)?;
    let evaluate = |w: &Option<Vec<BigInt>>| {
        w.as_ref().map(|w| json!({ "class": ints(w), "values": [int(&dot(w, &f.values)), int(&dot(w, &g.values))] }))
    };
    let distinct = d.verdict == Verdict::DistinctWithWitness;
    let value = json!({
        "verdict": d.verdict,
        "witness": evaluate(&d.witness),
        "reverse_witness": evaluate(&d.reverse_witness),
    });
    Ok((value, distinct))
}

fn functional_json(f: &Functional) -> Value {
    json!({ "bidegree": [f.bidegree.0, f.bidegree.1], "values": ints(&f.values) })
}

pub struct DiskArgs<'a> {
    pub k: Option<u32>,
    pub sigma: Option<&'a Path>,
    pub sigma_prime: Option<&'a Path>,
    pub self_test: bool,
}

pub fn cmd_verify_hs(args: &DiskArgs, opts: &Options) -> CliResult<Report> {
    let start = Instant::now();
    let mut report = Report::new("verify-hs");
    let disks = load_disks(args.k, args.sigma, args.sigma_prime, opts, &mut report)?;
    let boundary = disks.sigma.1.boundary.mirror();
    guard(opts, "verify-hs", &boundary, Some((-1, 1)))?;
    let f = disk_functional_cached(&prepared(&disks.sigma.0, &disks.sigma.1, opts, &mut report)?, opts)?;
    let g = if args.self_test {
        f.clone()
    } else {
        disk_functional_cached(&prepared(&disks.sigma_prime.0, &disks.sigma_prime.1, opts, &mut report)?, opts)?
    };
    let (distinction, distinct) = distinction_json(&f, &g)?;
    report.outcome = if distinct { Outcome::Success } else { Outcome::Negative };
    report.results = json!({
        "k": args.k,
        "mode": if args.self_test { "self-test" } else { "mirrored-disks" },
        "boundary": { "crossings": boundary.crossing_count() },
        "functionals": { "sigma": functional_json(&f), "sigma_prime": functional_json(&g) },
        "distinction": distinction,
    });
    Ok(finish(report, opts, start))
}

pub struct Theorem1Args<'a> {
    pub disks: DiskArgs<'a>,
    pub cp2: Option<&'a Path>,
    pub cp2_prime: Option<&'a Path>,
}

fn trivial_disk() -> BandPresentation {
    BandPresentation {
        boundary: OrientedDiagram::unknot(1),
        bands: vec![Band { from: 1, to: 1, path: vec![], half_twists: 0 }],
        components: 2,
        certificate: None,
    }
}

pub fn cmd_theorem1(args: &Theorem1Args, opts: &Options) -> CliResult<Report> {
    let start = Instant::now();
    let mut report = Report::new("theorem1");
    if args.disks.self_test {
        let check = blowdown_check(&trivial_disk())?;
        let counit = check.cp2.values == [BigInt::from(1)];
        report.outcome = if check.equal_up_to_sign && counit { Outcome::Success } else { Outcome::Negative };
        report.results = json!({
            "mode": "trivial-disk",
            "disk": functional_json(&check.disk),
            "cp2": functional_json(&check.cp2),
            "cp2_is_counit": counit,
        });
        return Ok(finish(report, opts, start));
    }
    let disks = load_disks(args.disks.k, args.disks.sigma, args.disks.sigma_prime, opts, &mut report)?;
    let boundary = disks.sigma.1.boundary.mirror();
    guard(opts, "theorem1", &boundary, Some((-1, 1)))?;
    let mut rows = Vec::new();
    let mut cp2s = Vec::new();
    let mut all_equal = true;
    for ((role, bp), supplied) in [(&disks.sigma, args.cp2), (&disks.sigma_prime, args.cp2_prime)] {
        let m = prepared(role, bp, opts, &mut report)?;
        let disk = disk_functional_cached(&m, opts)?;
        let pres = match supplied {
            Some(path) => {
                let text = read(path)?;
                report.input(&format!("{role}_cp2"), text.as_bytes());
                let p = Cp2Presentation::from_json(&text)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                if p.neck.start() != &boundary {
                    return Err(CliError::Input(format!("{}: neck does not start at the mirrored knot", path.display())));
                }
                p
            }
            None => blow_up(&m)?,
        };
        let k = key("cp2-functional", &[&pres.to_json()]);
        let cp2: Functional = opts.cache.get_or_compute(&k, || -> CliResult<Functional> { Ok(cp2_functional(&pres)?) })?;
        let equal = disk.equal_up_to_sign(&cp2);
        all_equal &= equal;
        rows.push((
            role.clone(),
            json!({
                "disk": functional_json(&disk),
                "cp2": functional_json(&cp2),
                "surface": { "p": pres.p, "q": pres.q, "alpha": pres.alpha(), "euler_characteristic": pres.surface_euler_characteristic() },
                "equal_up_to_sign": equal,
            }),
        ));
        cp2s.push(cp2);
    }
    let (distinction, distinct) = distinction_json(&cp2s[0], &cp2s[1])?;
    report.outcome = if all_equal && distinct { Outcome::Success } else { Outcome::Negative };
    report.results = json!({
        "k": args.disks.k,
        "surfaces": rows.into_iter().collect::<serde_json::Map<String, Value>>(),
        "blowdown_agrees": all_equal,
        "distinction": distinction,
    });
    Ok(finish(report, opts, start))
}

fn torus_row(p: usize, q: usize) -> CliResult<Value> {
    let d = torus_link(p, q).map_err(KhError::from)?;
    let g = grq(p, q)?;
    let (lo, _) = Cube::new(&d).q_range(0).unwrap_or((g, g));
    let mut slices = Vec::new();
    let mut below_vanishes = true;
    let mut bottom_is_z = false;
    for j in (lo..=g).filter(|j| (j - g) % 2 == 0) {
        let h = degree_zero_group(&d, j)?;
        if j < g {
            below_vanishes &= h.is_zero();
        } else {
            bottom_is_z = h.is_infinite_cyclic();
        }
        slices.push(group_cell(0, j, h.free_rank, &h.torsion));
    }
    let lee = if p + q <= 3 {
        let lc = lee_complex(&d);
        let z = lc.lee_generator()?;
        Some(lc.filtration_degree(&z)?)
    } else {
        None
    };
    Ok(json!({
        "p": p,
        "q": q,
        "grq": g,
        "slices": slices,
        "bottom_is_z": bottom_is_z,
        "vanishes_below": below_vanishes,
        "lee_degree": lee,
    }))
}

/// Rows `(p,q)` with `p + q = n` for `n = 1..=max_n`, larger `p` first.
pub fn torus_pairs(max_n: usize) -> Vec<(usize, usize)> {
    (1..=max_n).flat_map(|n| (0..=n).rev().map(move |p| (p, n - p))).collect()
}

pub fn cmd_torus_table(max_n: usize, opts: &Options) -> CliResult<Report> {
    let start = Instant::now();
    if torus_feasibility(max_n, 0) == TorusFeasibility::Infeasible {
        return Err(CliError::Infeasible(format!("torus links on {max_n} strands are out of reach")));
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for (p, q) in torus_pairs(max_n) {
        match torus_feasibility(p, q) {
            TorusFeasibility::Full => {}
            // the grading slices of T(5,5) do not fit in a few GB
            TorusFeasibility::DegreeZero if opts.force => {}
            TorusFeasibility::DegreeZero => {
                return Err(CliError::Infeasible(format!(
                    "Kh^0 of T({n},{n}) needs far more memory than smaller torus links; pass --force to try",
                    n = p + q
                )))
            }
            TorusFeasibility::Infeasible => {
                return Err(CliError::Infeasible(format!("torus links on {} strands are out of reach", p + q)))
            }
        }
        let row = opts.cache.get_or_compute(&key("torus-row", &[&p.to_string(), &q.to_string()]), || torus_row(p, q))?;
        let lee_ok = row["lee_degree"].as_i64().is_none_or(|l| Some(l) == row["grq"].as_i64());
        ok &= row["bottom_is_z"] == true && row["vanishes_below"] == true && lee_ok;
        rows.push(row);
    }
    let mut report = Report::new("torus-table");
    report.outcome = if ok { Outcome::Success } else { Outcome::Negative };
    report.results = json!({ "max_n": max_n, "rows": rows });
    Ok(finish(report, opts, start))
}

pub fn cmd_movie_check(path: &Path, opts: &Options) -> CliResult<Report> {
    let start = Instant::now();
    let text = read(path)?;
    let mut report = Report::new("movie-check");
    report.input("movie", text.as_bytes());
    if text.trim().is_empty() {
        report.results = json!({ "valid": true, "frames": 0, "moves": 0 });
        return Ok(finish(report, opts, start));
    }
    let checked = Movie::from_json(&text).and_then(|m| m.validate().map(|_| m));
    report.results = match checked {
        Ok(m) => {
            let mut kinds = BTreeMap::new();
            for mv in &m.moves {
                *kinds.entry(mv.name()).or_insert(0usize) += 1;
            }
            json!({
                "valid": true,
                "frames": m.frames.len(),
                "moves": m.moves.len(),
                "move_counts": kinds,
                "euler_characteristic": m.euler_characteristic(),
            })
        }
        Err(KhError::BadFrame { index, message }) => {
            report.outcome = Outcome::Negative;
            json!({ "valid": false, "first_failing_frame": index, "message": message })
        }
        Err(e) => return Err(e.into()),
    };
    Ok(finish(report, opts, start))
}

pub fn cmd_cp2_map(path: &Path, opts: &Options) -> CliResult<Report> {
    let start = Instant::now();
    let text = read(path)?;
    let pres = Cp2Presentation::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    guard(opts, "cp2-map", pres.neck.start(), Some((-1, 1)))?;
    let f = opts
        .cache
        .get_or_compute(&key("cp2-functional", &[&pres.to_json()]), || -> CliResult<Functional> { Ok(cp2_functional(&pres)?) })?;
    let mut report = Report::new("cp2-map");
    report.input("presentation", text.as_bytes());
    report.results = json!({
        "p": pres.p,
        "q": pres.q,
        "alpha": pres.alpha(),
        "euler_characteristic": pres.surface_euler_characteristic(),
        "functional": functional_json(&f),
    });
    Ok(finish(report, opts, start))
}

/// A link in the planar-diagram form read by triangulation software: one
/// `[a, b, c, d]` per crossing from the incoming under-strand,
/// counterclockwise, which is this crate's convention too.
pub fn cmd_export_link(path: &Path, opts: &Options) -> CliResult<Report> {
    let start = Instant::now();
    let text = read(path)?;
    let d = OrientedDiagram::parse_pd(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if !d.loops().is_empty() {
        return Err(CliError::Input("crossingless components have no planar-diagram code".into()));
    }
    let mut report = Report::new("export-link");
    report.input("diagram", text.as_bytes());
    report.results = json!({
        "format": "pd",
        "pd": d.crossings().iter().map(|c| c.arcs.to_vec()).collect::<Vec<_>>(),
        "components": d.components().len(),
        "crossings": d.crossing_count(),
    });
    Ok(finish(report, opts, start))
}
