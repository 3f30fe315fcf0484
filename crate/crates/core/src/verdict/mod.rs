//! Case classification: the crude reflection-count bound, the refined bound
//! from per-group module data, and subgroup relations between the seventeen
//! reflection groups.

mod subgroups;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::families::{largest_reflection_subgroup, reflection_group_specs, FamilySpec, Kind};
use crate::reflect::{reflection_count, ReflectError};
use crate::rigidity::{forbidden_indices, FamilyKind};

pub use subgroups::{verify_table2, Certificate, PairReport, PairStatus, SubgroupReport, POSITIVE_CONTAINMENTS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerdictError {
    #[error("no module data for {0}")]
    NoData(String),
    #[error("{0} is not a reflection group of the table")]
    NotReflectionGroup(String),
    #[error("d = {d} does not belong to the family of {g0}")]
    NotInFamily { g0: String, d: u32 },
    #[error("realization error: {0}")]
    Realization(String),
    #[error(transparent)]
    Reflect(#[from] ReflectError),
}

/// Module data for one reflection group: the extended representation
/// `lambda`, the vanishing degree `k`, `d_1 = d1_multiplier * d_0` and the
/// central shift `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChampRecord {
    pub g0: FamilySpec,
    pub st_number: u32,
    pub character_label: &'static str,
    pub champ_index: u32,
    pub k: u32,
    pub d1_multiplier: u32,
    pub m: u32,
    pub has_data: bool,
}

impl ChampRecord {
    pub fn d1(&self) -> u32 {
        self.d1_multiplier * self.g0.d
    }

    /// Smallest `d` satisfying the refined inequality, ignoring `d_1` and
    /// family membership.
    pub fn inequality_bound(&self) -> Result<u32, VerdictError> {
        if !self.has_data {
            return Err(VerdictError::NoData(self.g0.label()));
        }
        Ok((1..)
            .find(|&d| refined_inequality(self.g0.kind, d, self.k, self.m))
            .unwrap())
    }
}

/// Version tag of the embedded dataset.
pub const CHAMP_DATA_VERSION: &str = "1";

const fn rec(kind: Kind, d: u32, st: u32, ch: &'static str, idx: u32, k: u32, mult: u32, m: u32) -> ChampRecord {
    ChampRecord {
        g0: FamilySpec { kind, d },
        st_number: st,
        character_label: ch,
        champ_index: idx,
        k,
        d1_multiplier: mult,
        m,
        has_data: true,
    }
}

const fn none(kind: Kind, d: u32, st: u32) -> ChampRecord {
    ChampRecord {
        g0: FamilySpec { kind, d },
        st_number: st,
        character_label: "",
        champ_index: 0,
        k: 0,
        d1_multiplier: 0,
        m: 0,
        has_data: false,
    }
}

pub const CHAMP_RECORDS: [ChampRecord; 17] = [
    rec(Kind::MuT, 6, 5, "phi_{3,4}", 19, 5, 3, 2),
    rec(Kind::MuT, 12, 7, "phi_{3,10}", 37, 7, 1, 2),
    rec(Kind::MuO, 4, 13, "phi_{2,1}", 7, 3, 5, 3),
    rec(Kind::MuO, 8, 9, "phi_{4,5}", 32, 7, 2, 3),
    rec(Kind::MuO, 12, 15, "phi_{3,10}''", 36, 11, 1, 2),
    none(Kind::MuO, 24, 11),
    rec(Kind::MuI, 4, 22, "phi_{4,6}", 12, 1, 2, 2),
    rec(Kind::MuI, 6, 20, "phi_{3,10}'", 13, 1, 3, 2),
    rec(Kind::MuI, 10, 16, "phi_{5,8}", 39, 9, 1, 2),
    none(Kind::MuI, 12, 21),
    none(Kind::MuI, 20, 17),
    none(Kind::MuI, 30, 18),
    none(Kind::MuI, 60, 19),
    rec(Kind::OT, 2, 12, "phi_{2,1}", 3, 3, 5, 3),
    rec(Kind::OT, 4, 8, "phi_{4,5}", 15, 7, 5, 3),
    rec(Kind::OT, 6, 14, "phi_{2,4}", 14, 5, 3, 2),
    rec(Kind::OT, 12, 10, "phi_{3,10}'", 36, 11, 1, 2),
];

pub fn champ_record(g0: FamilySpec) -> Option<&'static ChampRecord> {
    CHAMP_RECORDS.iter().find(|r| r.g0 == g0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Stage {
    ExcludedCrude,
    ExcludedRefined,
    Open,
    SelfCase,
}

impl Stage {
    pub fn is_open(self) -> bool {
        matches!(self, Stage::Open | Stage::SelfCase)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::ExcludedCrude => "excluded-crude",
            Stage::ExcludedRefined => "excluded-refined",
            Stage::Open => "open",
            Stage::SelfCase => "self",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseStatus {
    pub g0: FamilySpec,
    pub d: u32,
    pub stage: Stage,
}

fn family_kind(kind: Kind) -> FamilyKind {
    FamilyKind::of(kind)
}

fn check_g0(g0: FamilySpec) -> Result<(), VerdictError> {
    if reflection_group_specs().contains(&g0) {
        Ok(())
    } else {
        Err(VerdictError::NotReflectionGroup(g0.label()))
    }
}

/// `2N + 7` for the first three families, `N + 4` for `OT`.
pub fn crude_minimal_d_from(kind: Kind, n: usize) -> u32 {
    let n = n as u32;
    if kind.is_ot() {
        n + 4
    } else {
        2 * n + 7
    }
}

pub fn crude_minimal_d(g0: FamilySpec) -> Result<u32, VerdictError> {
    check_g0(g0)?;
    Ok(crude_minimal_d_from(g0.kind, reflection_count(g0)?))
}

/// Whether `d` indexes a group of the family whose reflection subgroup is `g0`.
/// No upper bound on `d`.
pub fn in_family(g0: FamilySpec, d: u32) -> bool {
    g0.kind.accepts(d) && largest_reflection_subgroup(FamilySpec { kind: g0.kind, d }).1 == g0.d
}

/// Family indices up to and including `max`.
pub fn family_indices(g0: FamilySpec, max: u32) -> Vec<u32> {
    (1..=max).filter(|&d| in_family(g0, d)).collect()
}

/// The window `{d - (span - 1) - m, ..., d - m}` mod `d` avoids the forbidden
/// central indices.
pub fn window_check(g0: FamilySpec, d: u32, span: u32, m: u32) -> bool {
    if d == 0 || span == 0 {
        return false;
    }
    let forbidden = forbidden_indices(family_kind(g0.kind), d);
    if span >= d {
        return forbidden.is_empty();
    }
    let hi = d as i64 - m as i64;
    let lo = hi - (span as i64 - 1);
    (lo..=hi).all(|i| forbidden.binary_search(&(i.rem_euclid(d as i64) as u32)).is_err())
}

fn refined_inequality(kind: Kind, d: u32, k: u32, m: u32) -> bool {
    let lhs = d as i64 - (k as i64 - 1) - m as i64;
    if kind.is_ot() {
        lhs > 1
    } else {
        // lhs > d/2 + 1, kept in integers
        2 * lhs > d as i64 + 2
    }
}

pub fn refined_exclude(record: &ChampRecord, d: u32) -> Result<bool, VerdictError> {
    if !record.has_data {
        return Err(VerdictError::NoData(record.g0.label()));
    }
    Ok(d >= record.d1() && refined_inequality(record.g0.kind, d, record.k, record.m))
}

/// Status of one case after the crude stage.
pub fn crude_status(g0: FamilySpec, d: u32, min_d: u32) -> Stage {
    if d == g0.d {
        Stage::SelfCase
    } else if d < min_d {
        Stage::Open
    } else {
        Stage::ExcludedCrude
    }
}

fn crude_cases(g0: FamilySpec, min_d: u32) -> Vec<CaseStatus> {
    family_indices(g0, min_d)
        .into_iter()
        .map(|d| CaseStatus {
            g0,
            d,
            stage: crude_status(g0, d, min_d),
        })
        .filter(|c| c.stage.is_open())
        .collect()
}

/// Cases left open by the crude bound: the self case and every family index
/// below the bound.
pub fn open_after_crude(g0: FamilySpec) -> Result<Vec<CaseStatus>, VerdictError> {
    Ok(crude_cases(g0, crude_minimal_d(g0)?))
}

/// Open cases of every reflection group, in table order.
pub fn all_open_after_crude() -> Result<Vec<CaseStatus>, VerdictError> {
    let rows: Result<Vec<_>, _> = reflection_group_specs().into_par_iter().map(open_after_crude).collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// Applies the refined bound to the crude cases; groups without data keep
/// every crude case.
pub fn refine(cases: &[CaseStatus], records: &[ChampRecord]) -> Vec<CaseStatus> {
    cases
        .iter()
        .map(|c| {
            let rec = records.iter().find(|r| r.g0 == c.g0 && r.has_data);
            let stage = match (c.stage, rec) {
                (Stage::Open, Some(r)) if refined_exclude(r, c.d).unwrap_or(false) => Stage::ExcludedRefined,
                (s, _) => s,
            };
            CaseStatus { stage, ..c.clone() }
        })
        .collect()
}

/// Cases still open after the refined bound.
pub fn open_after_refined(records: &[ChampRecord]) -> Result<Vec<CaseStatus>, VerdictError> {
    let crude = all_open_after_crude()?;
    Ok(refine(&crude, records)
        .into_iter()
        .filter(|c| c.stage.is_open())
        .collect())
}

/// One row of the reflection-count table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReflectionRow {
    pub g0: FamilySpec,
    pub st_number: u32,
    pub n: usize,
    pub minimal_d: u32,
}

pub fn reflection_table() -> Result<Vec<ReflectionRow>, VerdictError> {
    crate::families::REFLECTION_GROUPS
        .par_iter()
        .map(|&(kind, d, st)| {
            let g0 = FamilySpec { kind, d };
            let n = reflection_count(g0)?;
            Ok(ReflectionRow {
                g0,
                st_number: st,
                n,
                minimal_d: crude_minimal_d_from(kind, n),
            })
        })
        .collect()
}

/// Open `d` values grouped per reflection group, in table order.
pub fn group_rows(cases: &[CaseStatus]) -> Vec<(FamilySpec, Vec<u32>)> {
    reflection_group_specs()
        .into_iter()
        .map(|g0| (g0, cases.iter().filter(|c| c.g0 == g0).map(|c| c.d).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> FamilySpec {
        s.parse().unwrap()
    }

    #[test]
    fn windows() {
        let g = spec("muT:6");
        assert!(window_check(g, 18, 5, 2));
        assert!(window_check(g, 39, 17, 2));
        assert!(!window_check(g, 38, 17, 2));
        assert!(!window_check(g, 20, 3, 0));
    }

    #[test]
    fn refined_examples() {
        let r = champ_record(spec("muT:6")).unwrap();
        assert_eq!(r.d1(), 18);
        assert!(refined_exclude(r, 18).unwrap());
        assert_eq!(r.inequality_bound().unwrap(), 15);
        let r = champ_record(spec("muO:8")).unwrap();
        assert!(!refined_exclude(r, 16).unwrap());
        let r = champ_record(spec("OT:12")).unwrap();
        assert!(refined_exclude(r, 36).unwrap());
        let r = champ_record(spec("muI:60")).unwrap();
        assert!(matches!(refined_exclude(r, 120), Err(VerdictError::NoData(_))));
    }

    #[test]
    fn families_by_g0() {
        assert_eq!(family_indices(spec("muT:6"), 40), vec![6, 18, 30]);
        assert_eq!(family_indices(spec("OT:2"), 16), vec![2, 10, 14]);
        assert_eq!(family_indices(spec("OT:4"), 22), vec![4, 20]);
    }
}
