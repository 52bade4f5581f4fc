//! The `(c, d)` Diophantine search and the dimension comparison that isolates
//! the Deligne exceptional series.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{q, qi, ser, Q};
use crate::root_system::TypeLabel;

pub const DEFAULT_SCAN_BOUND: i64 = 1000;
pub const DEFAULT_LEVEL_CAP: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidatePair {
    #[serde(serialize_with = "ser::q")]
    pub c: Q,
    pub d: u64,
    /// `h∨/k = d/c - 1`.
    #[serde(serialize_with = "ser::q")]
    pub ratio: Q,
}

/// `d = c(22 + 5c)/(10 - c)`.
pub fn dimension_from_central_charge(c: &Q) -> Q {
    c * (qi(22) + qi(5) * c) / (qi(10) - c)
}

/// All `c = p/q ∈ (0, 10)` in lowest terms with `q ≤ bound` for which
/// `d = c(22+5c)/(10-c)` is a positive integer, sorted by `c`.
///
/// Fails if a solution with `q ∉ {1, 5}` ever appears.
pub fn enumerate_cd_pairs(bound: i64) -> Result<Vec<CandidatePair>> {
    if bound < 5 {
        return Err(Error::InvalidArgument(format!("scan bound must be at least 5, got {bound}")));
    }
    let mut out = Vec::new();
    for den in 1..=bound {
        for num in 1..10 * den {
            if num.gcd(&den) != 1 {
                continue;
            }
            let top = num * (22 * den + 5 * num);
            let bottom = den * (10 * den - num);
            if top % bottom != 0 {
                continue;
            }
            if den != 1 && den != 5 {
                return Err(Error::Assertion(format!("solution c = {num}/{den} has denominator outside {{1, 5}}")));
            }
            let c = q(num, den);
            let d = (top / bottom) as u64;
            let ratio = qi(d as i64) / &c - Q::one();
            out.push(CandidatePair { c, d, ratio });
        }
    }
    out.sort_by(|a, b| a.c.cmp(&b.c));
    Ok(out)
}

/// Simple types with dual Coxeter number `hv`, from the closed formulas.
pub fn types_with_dual_coxeter(hv: usize) -> Vec<TypeLabel> {
    let mut out = Vec::new();
    if hv >= 2 {
        out.push(TypeLabel::A(hv - 1));
    }
    if hv % 2 == 1 && hv >= 3 {
        out.push(TypeLabel::B(hv.div_ceil(2)));
    }
    if hv >= 3 {
        out.push(TypeLabel::C(hv - 1));
    }
    if hv.is_multiple_of(2) && hv >= 6 {
        out.push(TypeLabel::D(hv / 2 + 1));
    }
    for t in [TypeLabel::E6, TypeLabel::E7, TypeLabel::E8, TypeLabel::F4, TypeLabel::G2] {
        if t.dual_coxeter_table() == hv {
            out.push(t);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinDimension {
    pub dual_coxeter: usize,
    pub dim: usize,
    pub type_label: TypeLabel,
}

/// Smallest simple Lie algebra with dual Coxeter number `hv`; `None` if there is none.
pub fn min_dimension_by_dual_coxeter(hv: usize) -> Option<MinDimension> {
    types_with_dual_coxeter(hv).into_iter().min_by_key(|t| (t.dimension(), *t)).map(|t| MinDimension {
        dual_coxeter: hv,
        dim: t.dimension(),
        type_label: t,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeligneRow {
    #[serde(serialize_with = "ser::q")]
    pub c: Q,
    pub d: u64,
    pub type_label: TypeLabel,
    pub level: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeligneSelection {
    pub rows: Vec<DeligneRow>,
    pub level_cap: i64,
    pub comparisons: usize,
    /// Cases with `d` above the minimum dimension; expected to be empty.
    pub exceeding: Vec<String>,
}

/// For every pair and every level `k ≤ level_cap` with `h∨ = k(d/c - 1)` an
/// integer `≥ 2`, keeps the cases where `d` equals the minimal dimension.
pub fn select_deligne_candidates(pairs: &[CandidatePair], level_cap: i64) -> DeligneSelection {
    let mut rows = Vec::new();
    let mut exceeding = Vec::new();
    let mut comparisons = 0;
    for pair in pairs {
        for k in 1..=level_cap {
            let hv = qi(k) * &pair.ratio;
            if !hv.is_integer() || hv < qi(2) {
                continue;
            }
            let hv = hv.to_integer().to_usize().expect("small dual Coxeter number");
            let Some(min) = min_dimension_by_dual_coxeter(hv) else {
                continue;
            };
            comparisons += 1;
            let d = pair.d as usize;
            if d == min.dim {
                rows.push(DeligneRow { c: pair.c.clone(), d: pair.d, type_label: min.type_label, level: k });
            } else if d > min.dim {
                exceeding.push(format!("c = {}, k = {k}: d = {d} > {} ({})", pair.c, min.dim, min.type_label));
            }
        }
    }
    DeligneSelection { rows, level_cap, comparisons, exceeding }
}

/// Central charges `1 - 6(p-q)²/(pq)` over coprime `p, q ≥ 2` with `(p-1)(q-1) = n`.
pub fn degenerate_central_charges(n: i64) -> Result<Vec<Q>> {
    if !(1..=64).contains(&n) {
        return Err(Error::InvalidArgument(format!("degree {n} out of range")));
    }
    let mut out: Vec<Q> = Vec::new();
    for p in 2..=n + 1 {
        if n % (p - 1) != 0 {
            continue;
        }
        let qq = n / (p - 1) + 1;
        if qq < 2 || p.gcd(&qq) != 1 {
            continue;
        }
        let c = Q::one() - qi(6 * (p - qq) * (p - qq)) / qi(p * qq);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out.sort();
    Ok(out)
}

/// Every degenerate value for degrees `2..=n`.
pub fn degenerate_central_charges_up_to(n: i64) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::new();
    for k in 2..=n {
        for c in degenerate_central_charges(k).unwrap_or_default() {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out.sort();
    out
}

/// Checks `d = c(22+5c)/(10-c)` and the ratio identity for a pair.
pub fn pair_is_consistent(p: &CandidatePair) -> bool {
    !p.c.is_zero()
        && dimension_from_central_charge(&p.c) == qi(p.d as i64)
        && p.ratio == qi(p.d as i64) / &p.c - Q::one()
}
