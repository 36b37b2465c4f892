//! Laurent polynomials in q and the Kauffman state-sum Jones polynomial.
//!
//! The state sum is kept independent of the Khovanov complex code so that it
//! can serve as an oracle for graded Euler characteristics.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::diagram::{ArcId, OrientedDiagram};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentPoly {
    /// exponent -> nonzero coefficient
    pub terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect() }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(e, c)| format!("{c}q^{e}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

fn count_circles(d: &OrientedDiagram, state: u64) -> usize {
    let arcs = d.arcs();
    let index: BTreeMap<ArcId, usize> = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, c) in d.crossings().iter().enumerate() {
        let [a, b, cc, dd] = c.arcs;
        let pairs = if state >> i & 1 == 1 { [(a, dd), (b, cc)] } else { [(a, b), (cc, dd)] };
        for (u, v) in pairs {
            let (ru, rv) = (root(&mut parent, index[&u]), root(&mut parent, index[&v]));
            parent[ru] = rv;
        }
    }
    (0..arcs.len()).filter(|&i| root(&mut parent, i) == i).count()
}

/// Unnormalised Jones polynomial
/// `(-1)^{n-} q^{n+ - 2n-} sum_s (-q)^{|s|} (q + q^{-1})^{circles(s)}`,
/// equal to the graded Euler characteristic of Khovanov homology.
pub fn jones_polynomial(d: &OrientedDiagram) -> LaurentPoly {
    let n = d.crossing_count();
    assert!(n < 40, "state sum over {n} crossings is infeasible");
    let (np, nm) = (d.n_plus() as i64, d.n_minus() as i64);
    let loop_factor = &LaurentPoly::monomial(1, 1) + &LaurentPoly::monomial(1, -1);
    let mut body = LaurentPoly::zero();
    for state in 0..(1u64 << n) {
        let w = state.count_ones() as i64;
        let r = count_circles(d, state) as u32;
        let sign = if w % 2 == 0 { 1 } else { -1 };
        let term = &LaurentPoly::monomial(sign, w) * &loop_factor.pow(r);
        body = &body + &term;
    }
    let sign = if nm % 2 == 0 { 1 } else { -1 };
    &LaurentPoly::monomial(sign, np - 2 * nm) * &body
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_and_empty() {
        assert_eq!(jones_polynomial(&OrientedDiagram::empty()), LaurentPoly::one());
        let u = OrientedDiagram::unknot(1);
        let expect = &LaurentPoly::monomial(1, 1) + &LaurentPoly::monomial(1, -1);
        assert_eq!(jones_polynomial(&u), expect);
        let kink = OrientedDiagram::parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!(jones_polynomial(&kink), expect);
    }

    #[test]
    fn right_trefoil() {
        let t = OrientedDiagram::parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]").unwrap();
        // q + q^3 + q^5 - q^9
        let mut expect = LaurentPoly::zero();
        for (e, c) in [(1, 1), (3, 1), (5, 1), (9, -1)] {
            expect.add_term(e, c);
        }
        assert_eq!(jones_polynomial(&t), expect);
    }
}
