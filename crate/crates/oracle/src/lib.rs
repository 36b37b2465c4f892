//! Slow reference computations for tests: Khovanov homology from the full
//! cube with a dense Smith normal form, written without any code from the
//! main crate. Crossings are `([a, b, c, d], positive)` with arcs listed
//! counterclockwise from the incoming under-strand.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Crossing = ([u32; 4], bool);

/// (i, j) -> (free rank, torsion divisors > 1).
pub type Table = BTreeMap<(i32, i32), (usize, Vec<u64>)>;

fn circles(crossings: &[Crossing], loops: usize, state: u64) -> Vec<Vec<u32>> {
    let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for (k, (x, _)) in crossings.iter().enumerate() {
        let pairs = if state >> k & 1 == 0 { [(x[0], x[1]), (x[2], x[3])] } else { [(x[0], x[3]), (x[1], x[2])] };
        for (u, v) in pairs {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
    }
    let mut arcs: Vec<u32> = adj.keys().copied().collect();
    arcs.sort();
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for a in arcs {
        if seen.contains_key(&a) {
            continue;
        }
        let mut comp = vec![];
        let mut stack = vec![a];
        seen.insert(a, ());
        while let Some(u) = stack.pop() {
            comp.push(u);
            for &v in &adj[&u] {
                if seen.insert(v, ()).is_none() {
                    stack.push(v);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out.sort();
    for k in 0..loops {
        out.push(vec![u32::MAX - k as u32]);
    }
    out
}

fn find(circ: &[Vec<u32>], arc: u32) -> usize {
    circ.iter().position(|c| c.binary_search(&arc).is_ok()).unwrap()
}

/// A generator: state and the set of circles marked x, as a sorted list of
/// each marked circle's smallest arc.
type Gen = (u64, Vec<u32>);

fn image(crossings: &[Crossing], loops: usize, g: &Gen) -> Vec<(Gen, i64)> {
    let (s, xs) = g;
    let src = circles(crossings, loops, *s);
    let mut out = Vec::new();
    for (k, (x, _)) in crossings.iter().enumerate() {
        if s >> k & 1 == 1 {
            continue;
        }
        let sign = if (s & ((1 << k) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
        let t = s | 1 << k;
        let dst = circles(crossings, loops, t);
        let marked = |c: &Vec<u32>| xs.contains(&c[0]);
        let (ca, cc) = (find(&src, x[0]), find(&src, x[2]));
        let untouched: Vec<u32> = src
            .iter()
            .enumerate()
            .filter(|(i, c)| *i != ca && *i != cc && marked(c))
            .map(|(_, c)| dst[find(&dst, c[0])][0])
            .collect();
        let mk = |extra: &[u32]| {
            let mut v = untouched.clone();
            v.extend_from_slice(extra);
            v.sort();
            (t, v)
        };
        if ca != cc {
            let m = dst[find(&dst, x[0])][0];
            match (marked(&src[ca]), marked(&src[cc])) {
                (true, true) => {}
                (false, false) => out.push((mk(&[]), sign)),
                _ => out.push((mk(&[m]), sign)),
            }
        } else {
            let p = dst[find(&dst, x[0])][0];
            let q = dst[find(&dst, x[1])][0];
            if marked(&src[ca]) {
                out.push((mk(&[p, q]), sign));
            } else {
                out.push((mk(&[p]), sign));
                out.push((mk(&[q]), sign));
            }
        }
    }
    out
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..1u64 << n).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}

/// Diagonal of the Smith normal form of a dense integer matrix.
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut piv = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && piv.is_none_or(|(pi, pj): (usize, usize)| a[i][j].abs() < a[pi][pj].abs()) {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        let p = a[t][t].clone();
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t].div_floor(&p);
            for j in t..cols {
                let v = &a[t][j] * &q;
                a[i][j] -= v;
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = a[t][j].div_floor(&p);
            for i in t..rows {
                let v = &a[i][t] * &q;
                a[i][j] -= v;
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p))) {
            for j in t..cols {
                let v = a[i][j].clone();
                a[t][j] += v;
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// Full Khovanov homology table of a diagram by brute force.
pub fn khovanov_table(crossings: &[Crossing], loops: usize) -> Table {
    let n = crossings.len();
    let n_minus = crossings.iter().filter(|c| !c.1).count() as i32;
    let n_plus = n as i32 - n_minus;
    let mut gens: BTreeMap<(i32, i32), Vec<Gen>> = BTreeMap::new();
    for s in 0..1u64 << n {
        let circ = circles(crossings, loops, s);
        let w = s.count_ones() as i32;
        for sub in subsets(circ.len()) {
            let j = circ.len() as i32 - 2 * sub.len() as i32 + w + n_plus - 2 * n_minus;
            let xs: Vec<u32> = sub.iter().map(|&k| circ[k][0]).collect();
            gens.entry((w - n_minus, j)).or_default().push((s, xs));
        }
    }
    let matrix = |i: i32, j: i32| -> Vec<Vec<BigInt>> {
        let empty = Vec::new();
        let src = gens.get(&(i, j)).unwrap_or(&empty);
        let tgt = gens.get(&(i + 1, j)).unwrap_or(&empty);
        let idx: HashMap<&Gen, usize> = tgt.iter().enumerate().map(|(k, g)| (g, k)).collect();
        let mut m = vec![vec![BigInt::zero(); src.len()]; tgt.len()];
        for (c, g) in src.iter().enumerate() {
            for (t, v) in image(crossings, loops, g) {
                m[idx[&t]][c] += v;
            }
        }
        m
    };
    let mut table = Table::new();
    for (&(i, j), g) in &gens {
        let out = smith_diagonal(matrix(i, j));
        let inc = smith_diagonal(matrix(i - 1, j));
        let free = g.len() - out.len() - inc.len();
        let torsion: Vec<u64> = inc.iter().filter(|d| **d > BigInt::from(1)).map(|d| d.try_into().unwrap()).collect();
        if free > 0 || !torsion.is_empty() {
            table.insert((i, j), (free, torsion));
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_by_hand() {
        let t = khovanov_table(&[([1, 5, 2, 4], true), ([3, 1, 4, 6], true), ([5, 3, 6, 2], true)], 0);
        assert_eq!(t[&(3, 7)], (0, vec![2]));
        assert_eq!(t[&(0, 1)], (1, vec![]));
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn snf() {
        let m = |v: &[&[i64]]| v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(smith_diagonal(m(&[&[2, 0], &[0, 3]])), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(smith_diagonal(m(&[&[4, 6]])), vec![BigInt::from(2)]);
    }
}
