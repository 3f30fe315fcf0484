//! Irreducible representations of the dihedral group `D_d` and the
//! `c_2`-rigidity rules stated on their labels.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum RigidityError {
    #[error("d = {0} must be even and at least 2")]
    InvalidOrder(u32),
    #[error("phi_{i} needs 1 <= i <= {max} for d = {d}")]
    InvalidLabel { i: u32, max: u32, d: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IrrepLabel {
    Triv,
    Sgn,
    V1,
    V2,
    Phi(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DihedralIrrep {
    label: IrrepLabel,
    d: u32,
}

impl DihedralIrrep {
    pub fn new(label: IrrepLabel, d: u32) -> Result<Self, RigidityError> {
        if d < 2 || d % 2 != 0 {
            return Err(RigidityError::InvalidOrder(d));
        }
        if let IrrepLabel::Phi(i) = label {
            if i < 1 || i > d / 2 - 1 {
                return Err(RigidityError::InvalidLabel { i, max: d / 2 - 1, d });
            }
        }
        Ok(DihedralIrrep { label, d })
    }

    pub fn label(&self) -> IrrepLabel {
        self.label
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn dim(&self) -> u32 {
        match self.label {
            IrrepLabel::Phi(_) => 2,
            _ => 1,
        }
    }

    /// All irreducibles of `D_d`: four characters and `d/2 - 1` planes.
    pub fn all(d: u32) -> Result<Vec<Self>, RigidityError> {
        let mut out = vec![
            DihedralIrrep::new(IrrepLabel::Triv, d)?,
            DihedralIrrep::new(IrrepLabel::Sgn, d)?,
            DihedralIrrep::new(IrrepLabel::V1, d)?,
            DihedralIrrep::new(IrrepLabel::V2, d)?,
        ];
        for i in 1..d / 2 {
            out.push(DihedralIrrep::new(IrrepLabel::Phi(i), d)?);
        }
        Ok(out)
    }
}

impl fmt::Display for DihedralIrrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            IrrepLabel::Triv => write!(f, "Triv"),
            IrrepLabel::Sgn => write!(f, "Sgn"),
            IrrepLabel::V1 => write!(f, "V1"),
            IrrepLabel::V2 => write!(f, "V2"),
            IrrepLabel::Phi(i) => write!(f, "phi_{i}"),
        }
    }
}

/// `chi_l(z(d)^k) = z(d)^{kl}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CentralCharacter {
    pub index: u32,
}

impl CentralCharacter {
    pub fn new(index: i64, d: u32) -> Self {
        CentralCharacter {
            index: index.rem_euclid(d as i64) as u32,
        }
    }
}

/// Families built from `T`, `O`, `I` versus the `OT` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyKind {
    ABC,
    D,
}

impl FamilyKind {
    pub fn of(kind: crate::families::Kind) -> Self {
        if kind.is_ot() {
            FamilyKind::D
        } else {
            FamilyKind::ABC
        }
    }
}

/// Characters of `mu_d` in the restriction, sorted.
pub fn restrict_to_centre(rep: &DihedralIrrep) -> Vec<CentralCharacter> {
    let d = rep.d;
    match rep.label {
        IrrepLabel::Triv | IrrepLabel::Sgn => vec![CentralCharacter { index: 0 }],
        IrrepLabel::V1 | IrrepLabel::V2 => vec![CentralCharacter { index: d / 2 }],
        IrrepLabel::Phi(i) => {
            let mut v = vec![CentralCharacter { index: i }, CentralCharacter { index: d - i }];
            v.sort();
            v
        }
    }
}

pub fn always_rigid(rep: &DihedralIrrep, kind: FamilyKind) -> bool {
    let d = rep.d;
    match (kind, rep.label) {
        // 1 < i < (d - 2)/2
        (FamilyKind::ABC, IrrepLabel::Phi(i)) => 1 < i && 2 * i < d - 2,
        (FamilyKind::ABC, _) => false,
        // 1 < i <= (d - 2)/2
        (FamilyKind::D, IrrepLabel::Phi(i)) => 1 < i && 2 * i <= d - 2,
        (FamilyKind::D, IrrepLabel::V1 | IrrepLabel::V2) => true,
        (FamilyKind::D, _) => false,
    }
}

/// Central indices that obstruct rigidity, sorted and deduplicated.
pub fn forbidden_indices(kind: FamilyKind, d: u32) -> Vec<u32> {
    let d = d as i64;
    let raw: Vec<i64> = match kind {
        FamilyKind::ABC => vec![0, 1, d / 2 - 1, d / 2, d / 2 + 1, d - 1],
        FamilyKind::D => vec![0, 1, d - 1],
    };
    let mut v: Vec<u32> = raw.into_iter().map(|x| x.rem_euclid(d) as u32).collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn all_constituents_rigid(restriction: &[CentralCharacter], kind: FamilyKind, d: u32) -> bool {
    let forbidden = forbidden_indices(kind, d);
    restriction
        .iter()
        .all(|c| forbidden.binary_search(&(c.index % d)).is_err())
}

/// A representation where the label rule and the central-character rule disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryAnomaly {
    pub d: u32,
    pub kind: FamilyKind,
    pub rep: String,
    pub by_label: bool,
    pub by_centre: bool,
}

/// Compares both rules on every irreducible for each even `d` in the range.
pub fn consistency_anomalies(ds: impl IntoIterator<Item = u32>) -> Vec<BoundaryAnomaly> {
    let mut out = Vec::new();
    for d in ds {
        let Ok(reps) = DihedralIrrep::all(d) else { continue };
        for kind in [FamilyKind::ABC, FamilyKind::D] {
            for rep in &reps {
                let a = always_rigid(rep, kind);
                let b = all_constituents_rigid(&restrict_to_centre(rep), kind, d);
                if a != b {
                    out.push(BoundaryAnomaly {
                        d,
                        kind,
                        rep: rep.to_string(),
                        by_label: a,
                        by_centre: b,
                    });
                }
            }
        }
    }
    out
}

/// Irreducibles that are not always rigid.
pub fn non_rigid(d: u32, kind: FamilyKind) -> Result<Vec<DihedralIrrep>, RigidityError> {
    Ok(DihedralIrrep::all(d)?
        .into_iter()
        .filter(|r| !always_rigid(r, kind))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(l: IrrepLabel, d: u32) -> DihedralIrrep {
        DihedralIrrep::new(l, d).unwrap()
    }

    #[test]
    fn restriction() {
        let idx = |r: DihedralIrrep| restrict_to_centre(&r).iter().map(|c| c.index).collect::<Vec<_>>();
        assert_eq!(idx(rep(IrrepLabel::Phi(2), 12)), vec![2, 10]);
        assert_eq!(idx(rep(IrrepLabel::Triv, 8)), vec![0]);
        assert_eq!(idx(rep(IrrepLabel::V1, 6)), vec![3]);
    }

    #[test]
    fn rules() {
        assert!(always_rigid(&rep(IrrepLabel::Phi(3), 12), FamilyKind::ABC));
        assert!(always_rigid(&rep(IrrepLabel::Phi(5), 12), FamilyKind::D));
        assert!(!always_rigid(&rep(IrrepLabel::Triv, 12), FamilyKind::ABC));
        assert!(!always_rigid(&rep(IrrepLabel::Triv, 12), FamilyKind::D));
        let c = |xs: &[u32], d| {
            xs.iter()
                .map(|&i| CentralCharacter::new(i as i64, d))
                .collect::<Vec<_>>()
        };
        assert!(all_constituents_rigid(&c(&[4, 8], 12), FamilyKind::ABC, 12));
        assert!(!all_constituents_rigid(&c(&[1], 10), FamilyKind::D, 10));
        assert!(all_constituents_rigid(&[], FamilyKind::ABC, 6));
    }

    #[test]
    fn labels_validated() {
        assert!(DihedralIrrep::new(IrrepLabel::Phi(0), 8).is_err());
        assert!(DihedralIrrep::new(IrrepLabel::Phi(4), 8).is_err());
        assert!(DihedralIrrep::new(IrrepLabel::Triv, 5).is_err());
        assert!(DihedralIrrep::all(2).unwrap().len() == 4);
    }

    #[test]
    fn small_d_is_vacuous() {
        for d in [2, 4, 6] {
            assert!(DihedralIrrep::all(d)
                .unwrap()
                .iter()
                .all(|r| !always_rigid(r, FamilyKind::ABC)));
        }
        let rigid: Vec<_> = DihedralIrrep::all(8)
            .unwrap()
            .into_iter()
            .filter(|r| always_rigid(r, FamilyKind::ABC))
            .collect();
        assert_eq!(rigid, vec![rep(IrrepLabel::Phi(2), 8)]);
    }

    #[test]
    fn only_d2_disagrees() {
        let anomalies = consistency_anomalies((2..=240).step_by(2));
        assert!(anomalies.iter().all(|a| a.d == 2 && a.kind == FamilyKind::D));
        assert_eq!(anomalies.len(), 2);
    }
}
