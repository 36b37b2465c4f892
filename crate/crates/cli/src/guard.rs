//! Parsing of `--window` and the generator-count estimate that stops runs
//! which would not fit in memory.

use khoxotic::khovanov::{Cube, Window};
use khoxotic::OrientedDiagram;

pub const DEFAULT_BUDGET: u128 = 1 << 26;

/// `i=LO..HI` or `i=N`, optionally followed by `,j=LO..HI` or `,j=N`.
/// Either part may be omitted.
pub fn parse_window(s: &str) -> Result<Window, String> {
    let mut w = Window::full();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, range) = part.split_once('=').ok_or_else(|| format!("window part `{part}` is not name=range"))?;
        let (lo, hi) = parse_range(range).ok_or_else(|| format!("bad range `{range}`"))?;
        if lo > hi {
            return Err(format!("empty range `{range}`"));
        }
        match name.trim() {
            "i" | "h" => w.h = Some((lo, hi)),
            "j" | "q" => w.q = Some((lo..=hi).collect()),
            other => return Err(format!("unknown window grading `{other}` (use i or j)")),
        }
    }
    Ok(w)
}

fn parse_range(s: &str) -> Option<(i32, i32)> {
    match s.split_once("..") {
        Some((a, b)) => Some((a.trim().parse().ok()?, b.trim().parse().ok()?)),
        None => {
            let v = s.trim().parse().ok()?;
            Some((v, v))
        }
    }
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i + 1) as u128)
}

/// Upper estimate of the generators needed for homological degrees `lo..=hi`:
/// the cube vertices of degrees `lo-1..=hi+1`, each with as many labels as the
/// larger of the all-0 and all-1 resolutions allows.
pub fn generator_estimate(d: &OrientedDiagram, h: Option<(i32, i32)>) -> u128 {
    let n = d.crossing_count() as u32;
    if n >= 120 {
        return u128::MAX;
    }
    let cube = Cube::new(d);
    let all = if n == 0 { 0 } else { (1u64 << n.min(63)) - 1 };
    let circles = cube.resolution(0).len().max(cube.resolution(all).len()) as u32;
    let nm = cube.n_minus();
    let (lo, hi) = h.unwrap_or((-nm, n as i32 - nm));
    let vertices: u128 = (lo - 1 + nm..=hi + 1 + nm)
        .filter(|&w| w >= 0 && w <= n as i32)
        .map(|w| binomial(n, w as u32))
        .fold(0u128, u128::saturating_add);
    vertices.saturating_mul(1u128 << circles.min(100))
}

pub fn check_budget(what: &str, estimate: u128, budget: u128, force: bool) -> Result<(), String> {
    if estimate > budget && !force {
        return Err(format!(
            "{what}: about {estimate} generators before simplification, over the budget of {budget}; \
             narrow --window or pass --force"
        ));
    }
    Ok(())
}
