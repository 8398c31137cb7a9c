//! Unextendible bases from zero-pattern splittings of the matrix space.
//!
//! `M_{d x d'}` is split into a "star" block that carries a complete
//! `k`-singular-value-1 basis and a complementary pattern whose maximum
//! matching is below `k`. No matrix on the complementary pattern can reach
//! rank `k`, so the block basis cannot be extended. Four families:
//!
//! | case | condition | star block          | complement                | count        |
//! |------|-----------|---------------------|---------------------------|--------------|
//! | C1   | k \| d    | d x (d'-i)          | last i columns            | d(d'-i)      |
//! | C2   | k ∤ d     | sk x (d'-t)         | last r rows, last t cols  | sk(d'-t)     |
//! | C3   | k \| d'   | (d-i) x d'          | last i rows               | d'(d-i)      |
//! | C4   | k ∤ d'    | (d-t) x sk          | last t rows, last r cols  | sk(d-t)      |
//!
//! with `i` in `1..k`, `t` in `0..k-r`, and `sk + r` the division of `d`
//! (C2) or `d'` (C4) by `k`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::basis::{BasisKind, BasisSet, Provenance};
use crate::certificate::{Certificate, CertificateKind};
use crate::error::{invalid, Error, Result};
use crate::matrix::{ComplexMatrix, DEFAULT_TOL};
use crate::pattern::{pattern_max_rank, SupportPattern};
use crate::special_basis::{diagonal_partition, sv1b_matrices, PhaseSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sec3Case {
    /// `k | d`, split off trailing columns.
    C1,
    /// `k ∤ d`, split off trailing rows and columns.
    C2,
    /// `k | d'`, split off trailing rows.
    C3,
    /// `k ∤ d'`, split off trailing rows and columns.
    C4,
}

impl fmt::Display for Sec3Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Sec3Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "C1" | "1" => Ok(Self::C1),
            "C2" | "2" => Ok(Self::C2),
            "C3" | "3" => Ok(Self::C3),
            "C4" | "4" => Ok(Self::C4),
            _ => Err(invalid(format!("unknown case {s:?}; expected C1..C4"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sec3Plan {
    pub k: usize,
    pub d: usize,
    pub dprime: usize,
    pub case: Sec3Case,
    /// `i` for C1/C3, `t` for C2/C4.
    pub param: usize,
    pub star_rows: Range<usize>,
    pub star_cols: Range<usize>,
    pub star_pattern: SupportPattern,
    pub complement_pattern: SupportPattern,
    pub expected_count: usize,
}

impl Sec3Plan {
    /// Checks admissibility of `(case, param)` and builds the patterns.
    pub fn new(k: usize, d: usize, dprime: usize, case: Sec3Case, param: usize) -> Result<Self> {
        check_ordering(k, d, dprime)?;
        let reject = |why: String| Err(invalid(format!("{case} with param {param} for (k={k}, d={d}, d'={dprime}): {why}")));
        let (rows, cols) = match case {
            Sec3Case::C1 => {
                if !d.is_multiple_of(k) {
                    return reject("needs k | d".into());
                }
                if !(1..k).contains(&param) || dprime < k + param {
                    return reject(format!("needs 1 <= i <= {} and d' - i >= k", k - 1));
                }
                (0..d, 0..dprime - param)
            }
            Sec3Case::C2 => {
                let r = d % k;
                if r == 0 {
                    return reject("needs k ∤ d".into());
                }
                if param >= k - r || dprime < k + param {
                    return reject(format!("needs 0 <= t < {} and d' - t >= k", k - r));
                }
                (0..d - r, 0..dprime - param)
            }
            Sec3Case::C3 => {
                if !dprime.is_multiple_of(k) {
                    return reject("needs k | d'".into());
                }
                if !(1..k).contains(&param) || d < k + param {
                    return reject(format!("needs 1 <= i <= {} and d - i >= k", k - 1));
                }
                (0..d - param, 0..dprime)
            }
            Sec3Case::C4 => {
                let r = dprime % k;
                if r == 0 {
                    return reject("needs k ∤ d'".into());
                }
                if param >= k - r || d < k + param {
                    return reject(format!("needs 0 <= t < {} and d - t >= k", k - r));
                }
                (0..d - param, 0..dprime - r)
            }
        };
        let star_pattern = SupportPattern::block(d, dprime, rows.clone(), cols.clone());
        let complement_pattern = SupportPattern::trailing(d, dprime, d - rows.end, dprime - cols.end);
        let expected_count = table_count(k, d, dprime, case, param);
        Ok(Self {
            k,
            d,
            dprime,
            case,
            param,
            star_rows: rows,
            star_cols: cols,
            star_pattern,
            complement_pattern,
            expected_count,
        })
    }

    pub fn kind(&self) -> BasisKind {
        if self.k == self.d {
            BasisKind::Umeb
        } else {
            BasisKind::Usv1b
        }
    }
}

/// Closed-form counts: `d(d'-i)`, `sk(d'-t)`, `d'(d-i)`, `sk(d-t)`.
pub fn table_count(k: usize, d: usize, dprime: usize, case: Sec3Case, param: usize) -> usize {
    match case {
        Sec3Case::C1 => d * (dprime - param),
        Sec3Case::C2 => (d / k) * k * (dprime - param),
        Sec3Case::C3 => dprime * (d - param),
        Sec3Case::C4 => (dprime / k) * k * (d - param),
    }
}

fn check_ordering(k: usize, d: usize, dprime: usize) -> Result<()> {
    if !(2 <= k && k <= d && d <= dprime) {
        return Err(invalid(format!("need 2 <= k <= d <= d', got k={k}, d={d}, d'={dprime}")));
    }
    Ok(())
}

/// All admissible plans, ordered by case and then parameter.
pub fn enumerate_constructions(k: usize, d: usize, dprime: usize) -> Result<Vec<Sec3Plan>> {
    check_ordering(k, d, dprime)?;
    let mut plans = Vec::new();
    for case in [Sec3Case::C1, Sec3Case::C2, Sec3Case::C3, Sec3Case::C4] {
        for param in 0..k {
            if let Ok(plan) = Sec3Plan::new(k, d, dprime, case, param) {
                plans.push(plan);
            }
        }
    }
    Ok(plans)
}

pub fn construct_sec3(plan: &Sec3Plan, phases: &PhaseSystem) -> Result<BasisSet> {
    if phases.k() != plan.k {
        return Err(invalid(format!(
            "phase system order {} does not match k={}",
            phases.k(),
            plan.k
        )));
    }
    let (rows, cols) = (plan.star_rows.len(), plan.star_cols.len());
    let partition = diagonal_partition(rows, cols, plan.k)?;
    let blocks = sv1b_matrices(&partition, phases)?;
    let matrices: Vec<ComplexMatrix> = blocks
        .iter()
        .map(|b| {
            ComplexMatrix::from_fn(plan.d, plan.dprime, |r, c| {
                if plan.star_rows.contains(&r) && plan.star_cols.contains(&c) {
                    b[(r - plan.star_rows.start, c - plan.star_cols.start)]
                } else {
                    crate::matrix::ZERO
                }
            })
        })
        .collect();
    debug_assert_eq!(matrices.len(), plan.expected_count);
    let matching = pattern_max_rank(&plan.complement_pattern);
    let certificate = Certificate::new(
        CertificateKind::PatternBound {
            pattern: plan.complement_pattern.clone(),
            matching,
        },
        DEFAULT_TOL,
    );
    let provenance = Provenance::new("zero-pattern")
        .param("case", plan.case)
        .param("param", plan.param)
        .param("k", plan.k)
        .param("d", plan.d)
        .param("dprime", plan.dprime);
    Ok(BasisSet::new(plan.d, plan.dprime, plan.k, matrices, plan.kind(), provenance)?.with_certificate(certificate))
}
