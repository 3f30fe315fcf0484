//! The families `mu_d T`, `mu_d O`, `mu_d I`, `OT_d` in `GL_2`, their
//! symplectic doubles `E(G)` in `Sp_4`, and the dihedral subgroups `D_d`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::cyclo::{CycNumber, Rational};
use crate::matrep::{CycMatrix, FiniteMatrixGroup, MatError, DEFAULT_CAP};

pub const MAX_D: u32 = 240;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("{kind} requires {rule}, got d = {d}")]
    Constraint { kind: Kind, d: u32, rule: &'static str },
    #[error("d = {0} exceeds the supported bound {MAX_D}")]
    TooLarge(u32),
    #[error("cannot parse family spec {0:?}")]
    Parse(String),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    MuT,
    MuO,
    MuI,
    OT,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::MuT, Kind::MuO, Kind::MuI, Kind::OT];

    /// Prefix used in spec strings.
    pub fn tag(self) -> &'static str {
        match self {
            Kind::MuT => "muT",
            Kind::MuO => "muO",
            Kind::MuI => "muI",
            Kind::OT => "OT",
        }
    }

    pub fn accepts(self, d: u32) -> bool {
        d > 0
            && match self {
                Kind::MuT => d % 6 == 0,
                Kind::MuO => d % 4 == 0,
                Kind::MuI => d % 4 == 0 || d % 6 == 0 || d % 10 == 0,
                Kind::OT => d % 2 == 0 && d % 8 != 0,
            }
    }

    fn rule(self) -> &'static str {
        match self {
            Kind::MuT => "d divisible by 6",
            Kind::MuO => "d divisible by 4",
            Kind::MuI => "d divisible by 4, 6 or 10",
            Kind::OT => "d even and not divisible by 8",
        }
    }

    /// Order of the base group `T`, `O` or `I` scaled into the family.
    pub fn base_order(self) -> u64 {
        match self {
            Kind::MuT => 24,
            Kind::MuO | Kind::OT => 48,
            Kind::MuI => 120,
        }
    }

    /// The families `mu_d T`, `mu_d O`, `mu_d I` versus `OT_d`.
    pub fn is_ot(self) -> bool {
        self == Kind::OT
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A group of one of the four families. For `OT`, `d` is the order of the
/// centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilySpec {
    pub kind: Kind,
    pub d: u32,
}

impl FamilySpec {
    pub fn new(kind: Kind, d: u32) -> Result<Self, FamilyError> {
        if !kind.accepts(d) {
            return Err(FamilyError::Constraint {
                kind,
                d,
                rule: kind.rule(),
            });
        }
        if d > MAX_D {
            return Err(FamilyError::TooLarge(d));
        }
        Ok(FamilySpec { kind, d })
    }

    /// Group order: `12d`, `24d`, `60d`, `24d`.
    pub fn order(&self) -> u64 {
        self.kind.base_order() * self.d as u64 / 2
    }

    /// Compact label such as `mu6T` or `OT12`.
    pub fn label(&self) -> String {
        match self.kind {
            Kind::MuT => format!("mu{}T", self.d),
            Kind::MuO => format!("mu{}O", self.d),
            Kind::MuI => format!("mu{}I", self.d),
            Kind::OT => format!("OT{}", self.d),
        }
    }

    /// All valid `d` up to `max` for a kind.
    pub fn all_of_kind(kind: Kind, max: u32) -> Vec<FamilySpec> {
        (1..=max.min(MAX_D))
            .filter(|&d| kind.accepts(d))
            .map(|d| FamilySpec { kind, d })
            .collect()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.tag(), self.d)
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let err = || FamilyError::Parse(s.to_string());
        let (tag, d) = s.trim().split_once(':').ok_or_else(err)?;
        let kind = Kind::ALL
            .into_iter()
            .find(|k| k.tag().eq_ignore_ascii_case(tag))
            .ok_or_else(err)?;
        let d: u32 = d.parse().map_err(|_| err())?;
        FamilySpec::new(kind, d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DerivedObject {
    G,
    G0,
    EG,
    Dd,
    Z,
}

/// A family group or an object derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DerivedSpec {
    pub base: FamilySpec,
    pub object: DerivedObject,
}

impl DerivedSpec {
    /// Expected order of the object.
    pub fn order(&self) -> u64 {
        match self.object {
            DerivedObject::G => self.base.order(),
            DerivedObject::G0 => largest_reflection_subgroup(self.base).0.order(),
            DerivedObject::EG => 2 * self.base.order(),
            DerivedObject::Dd => 2 * self.base.d as u64,
            DerivedObject::Z => self.base.d as u64,
        }
    }

    pub fn build(&self) -> Result<FiniteMatrixGroup, FamilyError> {
        match self.object {
            DerivedObject::G => build(self.base),
            DerivedObject::G0 => build(largest_reflection_subgroup(self.base).0),
            DerivedObject::EG => build_eg(self.base),
            DerivedObject::Dd => build_dd(self.base),
            DerivedObject::Z => Ok(build(self.base)?.centre()?),
        }
    }
}

impl fmt::Display for DerivedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.object {
            DerivedObject::G => write!(f, "{}", self.base),
            o => write!(f, "{}:{:?}", self.base, o),
        }
    }
}

impl FromStr for DerivedSpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let s = s.trim();
        let parts: Vec<&str> = s.split(':').collect();
        let object = match parts.get(2).map(|p| p.to_ascii_lowercase()) {
            None => DerivedObject::G,
            Some(p) => match p.as_str() {
                "g" => DerivedObject::G,
                "g0" => DerivedObject::G0,
                "eg" => DerivedObject::EG,
                "dd" => DerivedObject::Dd,
                "z" => DerivedObject::Z,
                _ => return Err(FamilyError::Parse(s.to_string())),
            },
        };
        if parts.len() > 3 || parts.len() < 2 {
            return Err(FamilyError::Parse(s.to_string()));
        }
        let base: FamilySpec = format!("{}:{}", parts[0], parts[1]).parse().map_err(|e| match e {
            FamilyError::Parse(_) => FamilyError::Parse(s.to_string()),
            other => other,
        })?;
        Ok(DerivedSpec { base, object })
    }
}

fn half(x: CycNumber) -> CycNumber {
    x.scale(&Rational::new(1, 2))
}

/// `a + bi + cj + dk` as `[[a + bi, c + di], [-c + di, a - bi]]`.
pub fn quaternion(a: &CycNumber, b: &CycNumber, c: &CycNumber, d: &CycNumber) -> CycMatrix {
    let i = CycNumber::i();
    CycMatrix::from_rows(vec![
        vec![a + &(b * &i), c + &(d * &i)],
        vec![&(d * &i) - c, a - &(b * &i)],
    ])
}

fn quat_int(a: i64, b: i64, c: i64, d: i64) -> CycMatrix {
    quaternion(
        &CycNumber::from_int(a),
        &CycNumber::from_int(b),
        &CycNumber::from_int(c),
        &CycNumber::from_int(d),
    )
}

/// `(1 + sqrt 5) / 2`.
pub fn golden_ratio() -> CycNumber {
    let sqrt5 = CycNumber::one() + (CycNumber::zeta(5, 1) + CycNumber::zeta(5, 4)).scale(&Rational::from_int(2));
    half(CycNumber::one() + sqrt5)
}

/// `diag(z(8), z(8)^-1)`, the unit `(1 + i) / sqrt 2`.
pub fn omega() -> CycMatrix {
    CycMatrix::diag(&[CycNumber::zeta(8, 1), CycNumber::zeta(8, -1)])
}

/// The fixed realizations of the binary polyhedral groups.
#[derive(Debug, Clone)]
pub struct BaseGroups {
    pub t: FiniteMatrixGroup,
    pub o: FiniteMatrixGroup,
    pub i: FiniteMatrixGroup,
    pub omega: CycMatrix,
}

fn t_generators() -> Vec<CycMatrix> {
    let one = CycNumber::one();
    let h = half(one.clone());
    vec![quat_int(0, 1, 0, 0), quat_int(0, 0, 1, 0), quaternion(&h, &h, &h, &h)]
}

/// `T` from Hurwitz units, `O = <T, omega>`, and `I` from icosians, generated
/// by `T` and `(phi + phi^-1 i + j) / 2`. All three are enumerated.
pub fn base_generators() -> &'static BaseGroups {
    static BASE: OnceLock<BaseGroups> = OnceLock::new();
    BASE.get_or_init(|| {
        let tg = t_generators();
        let t = FiniteMatrixGroup::new(2, tg.clone())
            .unwrap()
            .enumerate(DEFAULT_CAP)
            .unwrap();
        let w = omega();
        let mut og = tg.clone();
        og.push(w.clone());
        let o = FiniteMatrixGroup::new(2, og).unwrap().enumerate(DEFAULT_CAP).unwrap();
        let phi = golden_ratio();
        let phi_inv = &phi - &CycNumber::one();
        let q = quaternion(&half(phi), &half(phi_inv), &half(CycNumber::one()), &CycNumber::zero());
        let mut ig = tg;
        ig.push(q);
        let i = FiniteMatrixGroup::new(2, ig).unwrap().enumerate(DEFAULT_CAP).unwrap();
        BaseGroups { t, o, i, omega: w }
    })
}

fn scalars(n: u32, step: i64, offset: i64, count: u32) -> Vec<CycMatrix> {
    (0..count as i64)
        .map(|j| CycMatrix::scalar(2, &CycNumber::zeta(n, offset + step * j)))
        .collect()
}

fn memo<K: std::hash::Hash + Eq + Copy, V: Clone>(
    table: &'static OnceLock<Mutex<HashMap<K, V>>>,
    key: K,
    make: impl FnOnce() -> Result<V, FamilyError>,
) -> Result<V, FamilyError> {
    let map = table.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = make()?;
    map.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

/// The enumerated group of a spec, assembled from its coset description.
pub fn build(spec: FamilySpec) -> Result<FiniteMatrixGroup, FamilyError> {
    let spec = FamilySpec::new(spec.kind, spec.d)?;
    static CACHE: OnceLock<Mutex<HashMap<FamilySpec, FiniteMatrixGroup>>> = OnceLock::new();
    memo(&CACHE, spec, || {
        let base = base_generators();
        let d = spec.d;
        let g = match spec.kind {
            Kind::MuT | Kind::MuO | Kind::MuI => {
                let x = match spec.kind {
                    Kind::MuT => &base.t,
                    Kind::MuO => &base.o,
                    _ => &base.i,
                };
                let mut gens = x.generators().to_vec();
                gens.push(CycMatrix::scalar(2, &CycNumber::zeta(d, 1)));
                let xs: Vec<CycMatrix> = x.elements()?.iter().collect();
                let zs = scalars(d, 1, 0, d);
                FiniteMatrixGroup::from_products(2, gens, &[(&zs, &xs)])?
            }
            Kind::OT => {
                let ts: Vec<CycMatrix> = base.t.elements()?.iter().collect();
                let wts: Vec<CycMatrix> = ts.iter().map(|t| base.omega.mul_ref(t)).collect();
                let even = scalars(2 * d, 2, 0, d);
                let odd = scalars(2 * d, 2, 1, d);
                let mut gens = base.t.generators().to_vec();
                gens.push(base.omega.scale(&CycNumber::zeta(2 * d, 1)));
                FiniteMatrixGroup::from_products(2, gens, &[(&even, &ts), (&odd, &wts)])?
            }
        };
        Ok(g)
    })
}

/// Sorted, deduplicated determinants of all elements.
pub fn det_set(spec: FamilySpec) -> Result<Vec<CycNumber>, FamilyError> {
    let g = build(spec)?;
    let mut dets: Vec<(Vec<u8>, CycNumber)> = g
        .elements()?
        .iter()
        .map(|m| {
            let d = m.det();
            (d.to_bytes(), d)
        })
        .collect();
    dets.sort_by(|a, b| a.0.cmp(&b.0));
    dets.dedup_by(|a, b| a.0 == b.0);
    Ok(dets.into_iter().map(|x| x.1).collect())
}

/// The scalars `mu_n` as numbers, sorted like [`det_set`].
pub fn roots_of_unity(n: u32) -> Vec<CycNumber> {
    let mut v: Vec<(Vec<u8>, CycNumber)> = (0..n as i64)
        .map(|k| {
            let z = CycNumber::zeta(n, k);
            (z.to_bytes(), z)
        })
        .collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v.into_iter().map(|x| x.1).collect()
}

/// `(G_0, d_0, d / d_0)` by the case rules for the largest complex
/// reflection subgroup.
pub fn largest_reflection_subgroup(spec: FamilySpec) -> (FamilySpec, u32, u32) {
    let d = spec.d;
    let d0 = match spec.kind {
        Kind::MuT => largest_divisor(&[6, 12], d),
        Kind::MuO => largest_divisor(&[4, 8, 12, 24], d),
        Kind::MuI => largest_divisor(&[4, 6, 10, 12, 20, 30, 60], d),
        Kind::OT => {
            let m = d / 2;
            2 * [6, 3, 2, 1]
                .into_iter()
                .find(|&m0| m % m0 == 0 && (m / m0) % 2 == 1)
                .expect("m is not divisible by 4")
        }
    };
    (FamilySpec { kind: spec.kind, d: d0 }, d0, d / d0)
}

fn largest_divisor(options: &[u32], d: u32) -> u32 {
    options
        .iter()
        .rev()
        .copied()
        .find(|&x| d % x == 0)
        .expect("spec is valid for its kind")
}

/// The seventeen complex reflection groups `G_0` with their Shephard-Todd
/// numbers.
pub const REFLECTION_GROUPS: [(Kind, u32, u32); 17] = [
    (Kind::MuT, 6, 5),
    (Kind::MuT, 12, 7),
    (Kind::MuO, 4, 13),
    (Kind::MuO, 8, 9),
    (Kind::MuO, 12, 15),
    (Kind::MuO, 24, 11),
    (Kind::MuI, 4, 22),
    (Kind::MuI, 6, 20),
    (Kind::MuI, 10, 16),
    (Kind::MuI, 12, 21),
    (Kind::MuI, 20, 17),
    (Kind::MuI, 30, 18),
    (Kind::MuI, 60, 19),
    (Kind::OT, 2, 12),
    (Kind::OT, 4, 8),
    (Kind::OT, 6, 14),
    (Kind::OT, 12, 10),
];

pub fn reflection_group_specs() -> Vec<FamilySpec> {
    REFLECTION_GROUPS
        .iter()
        .map(|&(kind, d, _)| FamilySpec { kind, d })
        .collect()
}

/// Inverse of a 2x2 or general matrix, taking the cheap route when the
/// determinant is a root of unity.
fn inverse_transpose(g: &CycMatrix) -> CycMatrix {
    if g.rows() == 2 {
        let det = g.det();
        let det_conj = det.conj();
        let dinv = if det.mul_ref(&det_conj).is_one() {
            det_conj
        } else {
            det.inv().expect("invertible")
        };
        // (g^T)^-1 = adj(g)^T / det
        return CycMatrix::from_rows(vec![
            vec![g.get(1, 1).mul_ref(&dinv), g.get(1, 0).neg_ref().mul_ref(&dinv)],
            vec![g.get(0, 1).neg_ref().mul_ref(&dinv), g.get(0, 0).mul_ref(&dinv)],
        ]);
    }
    g.transpose().inverse().expect("invertible")
}

/// `g^v = diag(g, (g^T)^-1)`.
pub fn vee(g: &CycMatrix) -> CycMatrix {
    CycMatrix::block_diag(g, &inverse_transpose(g))
}

/// The anti-diagonal involution swapping the two Lagrangian halves.
pub fn s_matrix() -> CycMatrix {
    CycMatrix::from_int_rows(&[&[0, 0, 0, 1], &[0, 0, -1, 0], &[0, -1, 0, 0], &[1, 0, 0, 0]])
}

/// The symplectic form `[[0, I_2], [-I_2, 0]]` preserved by `E(G)`.
pub fn omega_form() -> CycMatrix {
    standard_form(2)
}

/// `[[0, I_n], [-I_n, 0]]`.
pub fn standard_form(n: usize) -> CycMatrix {
    let mut m = CycMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m.set(i, n + i, CycNumber::one());
        m.set(n + i, i, CycNumber::from_int(-1));
    }
    m
}

/// Whether `m^T J m = J`.
pub fn preserves_form(m: &CycMatrix, form: &CycMatrix) -> bool {
    &m.transpose().mul_ref(form).mul_ref(m) == form
}

/// `E(G) = {g^v, g^v s}`, enumerated.
pub fn build_eg(spec: FamilySpec) -> Result<FiniteMatrixGroup, FamilyError> {
    static CACHE: OnceLock<Mutex<HashMap<FamilySpec, FiniteMatrixGroup>>> = OnceLock::new();
    let g = build(spec)?;
    memo(&CACHE, spec, || {
        let gv: Vec<CycMatrix> = g.elements()?.iter().map(|x| vee(&x)).collect();
        let mut gens: Vec<CycMatrix> = g.generators().iter().map(vee).collect();
        gens.push(s_matrix());
        let right = [CycMatrix::identity(4), s_matrix()];
        Ok(FiniteMatrixGroup::from_products(4, gens, &[(&gv, &right)])?)
    })
}

/// `G^v` inside `E(G)`, enumerated.
pub fn build_gvee(spec: FamilySpec) -> Result<FiniteMatrixGroup, FamilyError> {
    let g = build(spec)?;
    Ok(g.map_elements(4, vee)?)
}

/// `D_d = <(z(d) I_2)^v, s>`, enumerated.
pub fn build_dd(spec: FamilySpec) -> Result<FiniteMatrixGroup, FamilyError> {
    let spec = FamilySpec::new(spec.kind, spec.d)?;
    let d = spec.d;
    let zs: Vec<CycMatrix> = scalars(d, 1, 0, d).iter().map(vee).collect();
    let gens = vec![zs[1 % zs.len()].clone(), s_matrix()];
    let right = [CycMatrix::identity(4), s_matrix()];
    Ok(FiniteMatrixGroup::from_products(4, gens, &[(&zs, &right)])?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_parsing() {
        assert_eq!(
            "muT:6".parse::<FamilySpec>().unwrap(),
            FamilySpec { kind: Kind::MuT, d: 6 }
        );
        assert_eq!("OT:12".parse::<FamilySpec>().unwrap().label(), "OT12");
        assert!(matches!(
            "muT:8".parse::<FamilySpec>(),
            Err(FamilyError::Constraint { .. })
        ));
        assert!(matches!(
            "OT:8".parse::<FamilySpec>(),
            Err(FamilyError::Constraint { .. })
        ));
        assert!(matches!("xx:8".parse::<FamilySpec>(), Err(FamilyError::Parse(_))));
        assert!(matches!(
            "muI:480".parse::<FamilySpec>(),
            Err(FamilyError::TooLarge(480))
        ));
        let ds: DerivedSpec = "muT:6:EG".parse().unwrap();
        assert_eq!(ds.object, DerivedObject::EG);
        assert_eq!(ds.to_string(), "muT:6:EG");
    }

    #[test]
    fn base_orders() {
        let b = base_generators();
        assert_eq!(b.t.order(), Some(24));
        assert_eq!(b.o.order(), Some(48));
        assert_eq!(b.i.order(), Some(120));
        assert!(!b.t.contains(&b.omega).unwrap());
        assert!(b.t.contains(&b.omega.mul_ref(&b.omega)).unwrap());
    }

    #[test]
    fn vee_and_s() {
        assert_eq!(vee(&CycMatrix::identity(2)), CycMatrix::identity(4));
        let s = s_matrix();
        assert!(s.mul_ref(&s).is_identity());
        assert!(preserves_form(&s, &omega_form()));
    }

    #[test]
    fn reflection_subgroup_rule() {
        let f = |k, d| largest_reflection_subgroup(FamilySpec { kind: k, d });
        assert_eq!(f(Kind::MuT, 30).1, 6);
        assert_eq!(f(Kind::MuT, 30).2, 5);
        assert_eq!(f(Kind::MuI, 144).1, 12);
        assert_eq!(f(Kind::OT, 36).1, 12);
        assert_eq!(f(Kind::OT, 20).1, 4);
        assert_eq!(f(Kind::OT, 10).1, 2);
    }
}
