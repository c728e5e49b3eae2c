//! Closed-form first vertices: the case ladder on 2g+1 and on which
//! distinguished coefficients vanish, with the Hasse polynomial of each case.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldElement;
use crate::rational::{Exact, Rational, Vertex};
use crate::zeta::CurvePoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HasseError {
    #[error("case {0} has no Hasse polynomial")]
    NoPolynomial(CaseId),
    #[error("unknown case id {0:?}")]
    UnknownCase(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "T1-i")]
    T1I,
    #[serde(rename = "T1-iia")]
    T1IIa,
    #[serde(rename = "T1-iib")]
    T1IIb,
    #[serde(rename = "T2-ia")]
    T2Ia,
    #[serde(rename = "T2-ib")]
    T2Ib,
    #[serde(rename = "T2-ic")]
    T2Ic,
    #[serde(rename = "T2-id")]
    T2Id,
    #[serde(rename = "T2-ii")]
    T2II,
    #[serde(rename = "T2-iii")]
    T2III,
    #[serde(rename = "T2-iv")]
    T2IV,
    #[serde(rename = "T2-v")]
    T2V,
    #[serde(rename = "out-of-ladder")]
    OutOfLadder,
}

impl CaseId {
    pub const ALL: [CaseId; 12] = [
        CaseId::T1I,
        CaseId::T1IIa,
        CaseId::T1IIb,
        CaseId::T2Ia,
        CaseId::T2Ib,
        CaseId::T2Ic,
        CaseId::T2Id,
        CaseId::T2II,
        CaseId::T2III,
        CaseId::T2IV,
        CaseId::T2V,
        CaseId::OutOfLadder,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::T1I => "T1-i",
            CaseId::T1IIa => "T1-iia",
            CaseId::T1IIb => "T1-iib",
            CaseId::T2Ia => "T2-ia",
            CaseId::T2Ib => "T2-ib",
            CaseId::T2Ic => "T2-ic",
            CaseId::T2Id => "T2-id",
            CaseId::T2II => "T2-ii",
            CaseId::T2III => "T2-iii",
            CaseId::T2IV => "T2-iv",
            CaseId::T2V => "T2-v",
            CaseId::OutOfLadder => "out-of-ladder",
        }
    }

    /// Second-theorem cases are only claimed for large enough genus.
    pub fn large_n_caveat(self) -> bool {
        !matches!(self, CaseId::T1I | CaseId::T1IIa | CaseId::T1IIb | CaseId::OutOfLadder)
    }

    /// (x, y) of the vertex the case asserts when its polynomial is nonzero.
    pub fn vertex(self, n: u32) -> Option<Vertex> {
        let (x, y) = match self {
            CaseId::T1I | CaseId::T1IIb => (n, 1),
            CaseId::T1IIa => (2 * n, 2),
            CaseId::T2Ia | CaseId::T2Ib => (2 * n - 2, 2),
            CaseId::T2Ic | CaseId::T2Id => (3 * n - 3, 3),
            CaseId::T2II | CaseId::T2III | CaseId::T2IV | CaseId::T2V => (2 * n - 1, 2),
            CaseId::OutOfLadder => return None,
        };
        Some(Vertex::integral(x, y))
    }

    /// The polynomial as a sum of monomials, each a product of c_e^(2^k)
    /// given as (e, k).
    pub fn monomials(self, n: u32) -> Option<Vec<Vec<(u32, u32)>>> {
        let p = |k: u32| 1u32 << k;
        let (a, t) = (n - 2, n - 1);
        let m = match self {
            CaseId::T1I | CaseId::T1IIb => vec![vec![(p(n) - 1, 0)]],
            CaseId::T1IIa => vec![vec![(3 * p(t) - 1, 0)]],
            CaseId::T2Ia => vec![vec![(p(n) - 3, 0), (3 * p(a) - 1, 0)]],
            CaseId::T2Ib => vec![vec![(p(n) - 3, a), (3 * p(a) - 1, 0)], vec![(p(n) - 5, a), (5 * p(a) - 1, 0)]],
            CaseId::T2Ic => vec![vec![(p(n) - 3, 0), (3 * p(t) - 5, 0), (5 * p(a) - 1, 0)]],
            CaseId::T2Id => vec![
                vec![(5 * p(a) - 1, 0), (p(n) - 3, 0), (3 * p(t) - 5, 0)],
                vec![(5 * p(a) - 1, 0), (p(n) - 5, 0), (3 * p(t) - 3, 0)],
            ],
            CaseId::T2II => vec![vec![(p(n) - 3, 0), (3 * p(t) - 1, 0)]],
            CaseId::T2III => vec![vec![(p(n + 1) - 7, a), (7 * p(a) - 1, 0)], vec![(p(n) - 3, t), (3 * p(t) - 1, 0)]],
            CaseId::T2IV => vec![
                vec![(p(n + 1) - 5, a), (5 * p(a) - 1, 0)],
                vec![(p(n + 1) - 7, a), (7 * p(a) - 1, 0)],
                vec![(p(n) - 3, t), (3 * p(t) - 1, 0)],
            ],
            CaseId::T2V => vec![
                vec![(p(n + 1) - 3, a), (3 * p(a) - 1, 0)],
                vec![(p(n + 1) - 5, a), (5 * p(a) - 1, 0)],
                vec![(p(n + 1) - 7, a), (7 * p(a) - 1, 0)],
            ],
            CaseId::OutOfLadder => return None,
        };
        Some(m)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = HasseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| HasseError::UnknownCase(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCase {
    pub case: CaseId,
    pub n: u32,
    /// Value of the case's polynomial, as field-element bits.
    pub hasse: Option<u64>,
    pub vertex: Option<Vertex>,
    /// Lower bound on the first slope when the polynomial vanishes, if one is known.
    pub slope_lower_bound: Option<Exact>,
    pub large_n_caveat: bool,
}

/// The ladder position of f, a function of g and of which distinguished
/// coefficients vanish.
pub fn case_of(f: &CurvePoly) -> (CaseId, u32) {
    let g = f.genus();
    let n = (2 * g + 2).ilog2();
    if g < 3 {
        return (CaseId::OutOfLadder, n);
    }
    let d = 2 * g + 1;
    let p = |k: u32| 1u32 << k;
    let nonzero = |e: u32| !f.coeff(e).is_zero();
    let top = p(n + 1) - 3;
    let case = if d == top && nonzero(3 * p(n - 1) - 1) {
        CaseId::T1IIa
    } else if nonzero(p(n) - 1) {
        if d == top {
            CaseId::T1IIb
        } else {
            CaseId::T1I
        }
    } else if d < 3 * p(n - 1) - 1 {
        if d < 5 * p(n - 2) - 1 {
            CaseId::T2Ia
        } else if d < 3 * p(n - 1) - 5 {
            CaseId::T2Ib
        } else if d == 3 * p(n - 1) - 5 {
            CaseId::T2Ic
        } else {
            CaseId::T2Id
        }
    } else if d < p(n + 1) - 7 {
        CaseId::T2II
    } else if d == p(n + 1) - 7 {
        CaseId::T2III
    } else if d == p(n + 1) - 5 {
        CaseId::T2IV
    } else {
        CaseId::T2V
    };
    (case, n)
}

pub fn hasse_polynomial(case: CaseId, n: u32, f: &CurvePoly) -> Result<FieldElement, HasseError> {
    let monomials = case.monomials(n).ok_or(HasseError::NoPolynomial(case))?;
    let ctx = f.ctx();
    let c = |e: u32, k: u32| ctx.frobenius(f.coeff(e), k).expect("coefficient lies in the curve's field");
    let value = monomials.iter().fold(ctx.zero(), |acc, mono| {
        let term = mono.iter().fold(ctx.one(), |t, &(e, k)| ctx.mul(t, c(e, k)).expect("same field"));
        acc + term
    });
    Ok(value)
}

pub fn classify(f: &CurvePoly) -> TheoremCase {
    let (case, n) = case_of(f);
    let hasse = hasse_polynomial(case, n, f).ok();
    let fires = hasse.is_some_and(|h| !h.is_zero());
    let slope_lower_bound = (case == CaseId::T2II && !fires).then(|| Exact(Rational::new(1, i64::from(n) - 1)));
    TheoremCase {
        case,
        n,
        hasse: hasse.map(FieldElement::bits),
        vertex: if fires { case.vertex(n) } else { None },
        slope_lower_bound,
        large_n_caveat: case.large_n_caveat(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    fn f2(text: &str) -> CurvePoly {
        CurvePoly::parse(FieldCtx::new(1).unwrap(), text).unwrap()
    }

    #[test]
    fn first_theorem_cases() {
        let c = classify(&f2("15:1"));
        assert_eq!((c.case, c.vertex), (CaseId::T1I, Some(Vertex::integral(4, 1))));
        assert!(!c.large_n_caveat);
        let c = classify(&f2("29:1,23:1"));
        assert_eq!((c.case, c.vertex), (CaseId::T1IIa, Some(Vertex::integral(8, 2))));
        let c = classify(&f2("29:1,15:1"));
        assert_eq!((c.case, c.vertex), (CaseId::T1IIb, Some(Vertex::integral(4, 1))));
        assert_eq!(classify(&f2("7:1,3:1")).vertex, Some(Vertex::integral(3, 1)));
        assert_eq!(classify(&f2("5:1")).case, CaseId::OutOfLadder);
    }

    #[test]
    fn ladder_positions_at_n4() {
        for (d, case) in [
            (17, CaseId::T2Ia),
            (19, CaseId::T2Ic),
            (21, CaseId::T2Id),
            (23, CaseId::T2II),
            (25, CaseId::T2III),
            (27, CaseId::T2IV),
            (29, CaseId::T2V),
        ] {
            assert_eq!(case_of(&f2(&format!("{d}:1"))), (case, 4), "d={d}");
        }
        // Equality case of the first branch shadows the later one at n=3.
        assert_eq!(case_of(&f2("9:1")), (CaseId::T2Id, 3));
    }

    #[test]
    fn second_theorem_polynomials() {
        let c = classify(&f2("25:1,13:1,3:1"));
        assert_eq!((c.case, c.hasse), (CaseId::T2III, Some(0)));
        assert_eq!(c.vertex, None);
        let c = classify(&f2("25:1,13:1,23:1"));
        assert_eq!((c.case, c.hasse), (CaseId::T2III, Some(1)));
        assert_eq!(c.vertex, Some(Vertex::integral(7, 2)));
        assert!(c.large_n_caveat);
        let c = classify(&f2("23:1"));
        assert_eq!(c.slope_lower_bound, Some(Exact(Rational::new(1, 3))));
    }

    #[test]
    fn frobenius_exponents_in_f16() {
        let ctx = FieldCtx::new(4).unwrap();
        // c_29^8 c_23 + c_27^8 c_39 at n = 5, checked against pow.
        let g = ctx.generator();
        let f = CurvePoly::with_genus(ctx, 19, [(39, 1), (29, g.bits()), (23, 3), (27, 5)]).unwrap();
        let (case, n) = case_of(&f);
        assert_eq!(n, 5);
        assert_eq!(case, CaseId::T2Ib);
        let c = |e: u32| f.coeff(e);
        let expect =
            ctx.mul(ctx.pow(c(29), 8).unwrap(), c(23)).unwrap() + ctx.mul(ctx.pow(c(27), 8).unwrap(), c(39)).unwrap();
        assert_eq!(hasse_polynomial(case, n, &f).unwrap(), expect);
        assert!(hasse_polynomial(CaseId::OutOfLadder, n, &f).is_err());
    }

    #[test]
    fn case_ids_round_trip() {
        for c in CaseId::ALL {
            assert_eq!(c.as_str().parse::<CaseId>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{c}\""));
        }
    }
}
