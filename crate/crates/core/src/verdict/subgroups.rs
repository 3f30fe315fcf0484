//! Containments between the seventeen reflection groups. Positive relations
//! are checked literally on the fixed realizations; absent ones need a
//! conjugation-invariant obstruction.

use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::VerdictError;
use crate::families::{build, det_set, reflection_group_specs, FamilySpec, Kind};
use crate::matrep::{CycMatrix, FiniteMatrixGroup};

/// Positive relations `(H, G)` meaning `H` is conjugate to a subgroup of `G`.
pub const POSITIVE_CONTAINMENTS: &[((Kind, u32), &[(Kind, u32)])] = &[
    (
        (Kind::MuT, 6),
        &[
            (Kind::MuT, 12),
            (Kind::MuO, 12),
            (Kind::MuO, 24),
            (Kind::MuI, 6),
            (Kind::MuI, 12),
            (Kind::MuI, 30),
            (Kind::MuI, 60),
            (Kind::OT, 6),
            (Kind::OT, 12),
        ],
    ),
    (
        (Kind::MuT, 12),
        &[
            (Kind::MuO, 12),
            (Kind::MuO, 24),
            (Kind::MuI, 12),
            (Kind::MuI, 60),
            (Kind::OT, 12),
        ],
    ),
    ((Kind::MuO, 4), &[(Kind::MuO, 8), (Kind::MuO, 12), (Kind::MuO, 24)]),
    ((Kind::MuO, 8), &[(Kind::MuO, 24)]),
    ((Kind::MuO, 12), &[(Kind::MuO, 24)]),
    ((Kind::MuI, 4), &[(Kind::MuI, 12), (Kind::MuI, 20), (Kind::MuI, 60)]),
    ((Kind::MuI, 6), &[(Kind::MuI, 12), (Kind::MuI, 30), (Kind::MuI, 60)]),
    ((Kind::MuI, 10), &[(Kind::MuI, 20), (Kind::MuI, 30), (Kind::MuI, 60)]),
    ((Kind::MuI, 12), &[(Kind::MuI, 60)]),
    ((Kind::MuI, 20), &[(Kind::MuI, 60)]),
    ((Kind::MuI, 30), &[(Kind::MuI, 60)]),
    (
        (Kind::OT, 2),
        &[
            (Kind::MuO, 4),
            (Kind::MuO, 8),
            (Kind::MuO, 12),
            (Kind::MuO, 24),
            (Kind::OT, 6),
        ],
    ),
    ((Kind::OT, 4), &[(Kind::MuO, 8), (Kind::MuO, 24), (Kind::OT, 12)]),
    ((Kind::OT, 6), &[(Kind::MuO, 12), (Kind::MuO, 24)]),
    ((Kind::OT, 12), &[(Kind::MuO, 24)]),
];

fn is_positive(h: FamilySpec, g: FamilySpec) -> bool {
    POSITIVE_CONTAINMENTS
        .iter()
        .any(|&((hk, hd), gs)| hk == h.kind && hd == h.d && gs.iter().any(|&(k, d)| k == g.kind && d == g.d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Certificate {
    /// Literal elementwise containment of the realizations.
    Literal,
    /// `|H|` does not divide `|G|`.
    Order,
    /// No central subgroup makes `H / (H cap Z(G))` fit in `G / Z(G)`.
    CentreQuotient,
    /// Some determinant of `H` is not a determinant of `G`.
    Determinants,
    /// `|H cap SL_2|` does not divide `|G cap SL_2|`.
    Unimodular,
    /// `OT_e` in `OT_e'` needs `e | e'` with odd quotient.
    OtDivisibility,
    /// Some characteristic polynomial occurs more often in `H` than in `G`.
    CharPolys,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Literal => "literal-containment",
            Certificate::Order => "order",
            Certificate::CentreQuotient => "centre-quotient",
            Certificate::Determinants => "determinant-set",
            Certificate::Unimodular => "unimodular-part",
            Certificate::OtDivisibility => "ot-divisibility",
            Certificate::CharPolys => "charpoly-multiset",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairStatus {
    /// Listed relation, verified literally.
    Contained,
    /// Listed relation that fails on the realizations.
    Failed,
    /// Unlisted relation ruled out by at least one certificate.
    Absent,
    /// Unlisted relation with no certificate.
    Undetermined,
}

impl PairStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PairStatus::Contained => "contained",
            PairStatus::Failed => "fail",
            PairStatus::Absent => "absent",
            PairStatus::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub sub: FamilySpec,
    pub group: FamilySpec,
    pub listed: bool,
    pub status: PairStatus,
    pub certificates: Vec<Certificate>,
    pub witness: Option<CycMatrix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupReport {
    pub pairs: Vec<PairReport>,
}

impl SubgroupReport {
    pub fn failures(&self) -> impl Iterator<Item = &PairReport> {
        self.pairs.iter().filter(|p| p.status == PairStatus::Failed)
    }

    pub fn count(&self, status: PairStatus) -> usize {
        self.pairs.iter().filter(|p| p.status == status).count()
    }

    pub fn find(&self, sub: FamilySpec, group: FamilySpec) -> Option<&PairReport> {
        self.pairs.iter().find(|p| p.sub == sub && p.group == group)
    }
}

/// Invariants of one realization.
struct Profile {
    spec: FamilySpec,
    group: FiniteMatrixGroup,
    order: usize,
    centre: usize,
    dets: Vec<Vec<u8>>,
    unimodular: usize,
    charpolys: BTreeMap<(Vec<u8>, Vec<u8>), usize>,
}

impl Profile {
    fn new(spec: FamilySpec) -> Result<Self, VerdictError> {
        let realization = |e: crate::matrep::MatError| VerdictError::Realization(format!("{spec}: {e}"));
        let group = build(spec).map_err(|e| VerdictError::Realization(format!("{spec}: {e}")))?;
        let set = group.elements().map_err(realization)?;
        let centre = group.centre().map_err(realization)?.order().unwrap_or(0);
        let mut charpolys = BTreeMap::new();
        let mut unimodular = 0;
        for m in set.iter() {
            let det = m.det();
            if det.is_one() {
                unimodular += 1;
            }
            *charpolys.entry((m.trace().to_bytes(), det.to_bytes())).or_insert(0) += 1;
        }
        let mut dets: Vec<Vec<u8>> = det_set(spec)
            .map_err(|e| VerdictError::Realization(format!("{spec}: {e}")))?
            .iter()
            .map(|x| x.to_bytes())
            .collect();
        dets.sort();
        Ok(Profile {
            spec,
            order: set.len(),
            group,
            centre,
            dets,
            unimodular,
            charpolys,
        })
    }
}

fn certificates(h: &Profile, g: &Profile) -> Vec<Certificate> {
    let mut out = Vec::new();
    if g.order % h.order != 0 {
        out.push(Certificate::Order);
    }
    let quotient = g.order / g.centre;
    let c = h.centre.gcd(&g.centre);
    let fits = (1..=c).filter(|x| c % x == 0).any(|x| quotient % (h.order / x) == 0);
    if !fits {
        out.push(Certificate::CentreQuotient);
    }
    if h.dets.iter().any(|x| g.dets.binary_search(x).is_err()) {
        out.push(Certificate::Determinants);
    }
    if g.unimodular % h.unimodular != 0 {
        out.push(Certificate::Unimodular);
    }
    if h.spec.kind == Kind::OT && g.spec.kind == Kind::OT {
        let (e, f) = (h.spec.d, g.spec.d);
        if f % e != 0 || (f / e) % 2 == 0 {
            out.push(Certificate::OtDivisibility);
        }
    }
    if h.charpolys
        .iter()
        .any(|(k, &n)| g.charpolys.get(k).copied().unwrap_or(0) < n)
    {
        out.push(Certificate::CharPolys);
    }
    out
}

fn literal_witness(h: &Profile, g: &Profile) -> Result<Option<CycMatrix>, VerdictError> {
    let set = h
        .group
        .elements()
        .map_err(|e| VerdictError::Realization(e.to_string()))?;
    for m in set.iter() {
        if !g
            .group
            .contains(&m)
            .map_err(|e| VerdictError::Realization(e.to_string()))?
        {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Checks every ordered pair of distinct reflection groups.
pub fn verify_table2() -> Result<SubgroupReport, VerdictError> {
    let specs = reflection_group_specs();
    let profiles: Vec<Profile> = specs.par_iter().map(|&s| Profile::new(s)).collect::<Result<_, _>>()?;
    let pairs: Vec<(usize, usize)> = (0..specs.len())
        .flat_map(|i| (0..specs.len()).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let pairs = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (h, g) = (&profiles[i], &profiles[j]);
            let listed = is_positive(h.spec, g.spec);
            if listed {
                let witness = literal_witness(h, g)?;
                return Ok(PairReport {
                    sub: h.spec,
                    group: g.spec,
                    listed,
                    status: if witness.is_none() {
                        PairStatus::Contained
                    } else {
                        PairStatus::Failed
                    },
                    certificates: if witness.is_none() {
                        vec![Certificate::Literal]
                    } else {
                        vec![]
                    },
                    witness,
                });
            }
            let certs = certificates(h, g);
            Ok(PairReport {
                sub: h.spec,
                group: g.spec,
                listed,
                status: if certs.is_empty() {
                    PairStatus::Undetermined
                } else {
                    PairStatus::Absent
                },
                certificates: certs,
                witness: None,
            })
        })
        .collect::<Result<Vec<_>, VerdictError>>()?;
    Ok(SubgroupReport { pairs })
}
