//! Complex and symplectic reflections, found by scanning every element.

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::cyclo::{CycNumber, ModField};
use crate::families::{
    self, build, build_dd, build_eg, build_gvee, det_set, largest_reflection_subgroup, omega_form, preserves_form,
    roots_of_unity, s_matrix, vee, FamilyError, FamilySpec,
};
use crate::matrep::{ConjugacyClass, CycMatrix, ElementSet, FiniteMatrixGroup, MatError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReflectError {
    #[error("expected a {expected}x{expected} matrix, found {rows}x{cols}")]
    Shape { expected: usize, rows: usize, cols: usize },
    #[error("{lemma} fails; witness {witness:?}")]
    LemmaViolation {
        lemma: &'static str,
        witness: Option<CycMatrix>,
    },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

fn square(m: &CycMatrix, n: Option<usize>) -> Result<usize, ReflectError> {
    let want = n.unwrap_or(m.rows());
    if m.rows() != want || m.cols() != want {
        return Err(ReflectError::Shape {
            expected: want,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(want)
}

fn deviation_rank(m: &CycMatrix) -> usize {
    (m - &CycMatrix::identity(m.rows())).rank()
}

/// `rank(g - I) = 1` for a square matrix.
pub fn is_complex_reflection(g: &CycMatrix) -> Result<bool, ReflectError> {
    square(g, None)?;
    Ok(deviation_rank(g) == 1)
}

/// `t` preserves `[[0, I_2], [-I_2, 0]]` and `rank(t - I_4) = 2`.
pub fn is_symplectic_reflection(t: &CycMatrix) -> Result<bool, ReflectError> {
    square(t, Some(4))?;
    Ok(preserves_form(t, &omega_form()) && deviation_rank(t) == 2)
}

/// Indices of elements with `rank(g - I) = r`. A modular rank above `r`
/// rules an element out; everything else gets an exact rank.
pub fn elements_with_deviation_rank(set: &ElementSet, r: usize) -> Vec<usize> {
    let n = set.dim();
    let conductor = set
        .values()
        .iter()
        .fold(1u32, |acc, v| num_integer::lcm(acc, v.conductor()));
    let field = ModField::cached(conductor);
    let reduced: Vec<Option<u64>> = set.values().iter().map(|v| field.reduce(v)).collect();
    let p = field.prime();
    (0..set.len())
        .into_par_iter()
        .filter(|&i| {
            let c = set.compact(i);
            let mut m = Vec::with_capacity(n * n);
            for (j, &id) in c.iter().enumerate() {
                let Some(mut v) = reduced[id as usize] else {
                    return deviation_rank(&set.get(i)) == r;
                };
                if j / n == j % n {
                    v = (v + p - 1) % p;
                }
                m.push(v);
            }
            if field.rank(&mut m, n, n) > r {
                return false;
            }
            deviation_rank(&set.get(i)) == r
        })
        .collect()
}

/// `R(G)`, sorted canonically.
pub fn complex_reflections(group: &FiniteMatrixGroup) -> Result<Vec<CycMatrix>, ReflectError> {
    let set = group.elements()?;
    Ok(elements_with_deviation_rank(set, 1)
        .into_iter()
        .map(|i| set.get(i))
        .collect())
}

/// Symplectic reflections of an enumerated group in `Sp_4`, sorted canonically.
pub fn symplectic_reflections(group: &FiniteMatrixGroup) -> Result<Vec<CycMatrix>, ReflectError> {
    let set = group.elements()?;
    let form = omega_form();
    Ok(elements_with_deviation_rank(set, 2)
        .into_iter()
        .map(|i| set.get(i))
        .filter(|t| preserves_form(t, &form))
        .collect())
}

/// `N = |R(G_0)|` by exhaustive rank test.
pub fn reflection_count(spec0: FamilySpec) -> Result<usize, ReflectError> {
    Ok(complex_reflections(&build(spec0)?)?.len())
}

/// Whether the group is generated by its complex reflections.
pub fn generated_by_reflections(group: &FiniteMatrixGroup) -> Result<bool, ReflectError> {
    let refl = complex_reflections(group)?;
    let order = group.order().ok_or(MatError::NotEnumerated)?;
    if refl.is_empty() {
        return Ok(order == 1);
    }
    let sub = FiniteMatrixGroup::new(group.dim(), refl)?.enumerate(order)?;
    Ok(sub.order() == Some(order))
}

#[derive(Debug, Clone, Serialize)]
pub struct ReflectionInventory {
    pub group: FamilySpec,
    pub g0: FamilySpec,
    /// `N = |R(G_0)|`.
    pub n: usize,
    pub complex_reflections: Vec<CycMatrix>,
    pub symplectic_reflections: Vec<CycMatrix>,
    pub g0vee_part: Vec<CycMatrix>,
    pub dd_part: Vec<CycMatrix>,
    /// `E(G)`-classes of all symplectic reflections.
    pub classes: Vec<ClassSummary>,
    pub dd_class_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    pub representative: CycMatrix,
    pub size: usize,
    pub part: &'static str,
}

fn set_of(ms: &[CycMatrix]) -> FxHashSet<&CycMatrix> {
    ms.iter().collect()
}

fn first_missing(a: &[CycMatrix], b: &[CycMatrix]) -> Option<CycMatrix> {
    let sb = set_of(b);
    a.iter().find(|x| !sb.contains(x)).cloned()
}

fn violation(lemma: &'static str, witness: Option<CycMatrix>) -> ReflectError {
    ReflectError::LemmaViolation { lemma, witness }
}

/// Scans `E(G)` for symplectic reflections and checks them against
/// `R(G)^v` and `{z^v s : z in mu_d}`, `R(G) = R(G_0)`, and the class count of
/// the dihedral part (two for the first three families, one for `OT`).
pub fn inventory(spec: FamilySpec) -> Result<ReflectionInventory, ReflectError> {
    let g = build(spec)?;
    let e = build_eg(spec)?;
    let (spec0, _, _) = largest_reflection_subgroup(spec);
    let g0 = build(spec0)?;
    let rg = complex_reflections(&g)?;
    let rg0 = complex_reflections(&g0)?;
    if let Some(w) = first_missing(&rg, &rg0).or_else(|| first_missing(&rg0, &rg)) {
        return Err(violation("reflections of G lie in G_0", Some(w)));
    }
    let sym = symplectic_reflections(&e)?;
    let s = s_matrix();
    let mut closed: Vec<CycMatrix> = rg.iter().map(vee).collect();
    let dd_closed: Vec<CycMatrix> = roots_of_unity(spec.d)
        .iter()
        .map(|z| vee(&CycMatrix::scalar(2, z)).mul_ref(&s))
        .collect();
    closed.extend(dd_closed.iter().cloned());
    if let Some(w) = first_missing(&sym, &closed).or_else(|| first_missing(&closed, &sym)) {
        return Err(violation("symplectic reflections of E(G)", Some(w)));
    }
    let n = rg0.len();
    if sym.len() != n + spec.d as usize {
        return Err(violation("|S(E(G))| = N + d", None));
    }
    let dd_set = set_of(&dd_closed);
    let (dd_part, g0vee_part): (Vec<CycMatrix>, Vec<CycMatrix>) = sym.iter().cloned().partition(|t| dd_set.contains(t));
    let g0vee = build_gvee(spec0)?;
    if let Some(w) = g0vee_part.iter().find(|t| !g0vee.contains(t).unwrap_or(false)) {
        return Err(violation("symplectic reflections lie in G_0^v or D_d", Some(w.clone())));
    }
    let classes: Vec<ConjugacyClass> = e.conjugacy_classes(&sym)?;
    let mut summaries = Vec::with_capacity(classes.len());
    let mut dd_class_count = 0;
    for c in &classes {
        let in_dd = c.members.iter().filter(|m| dd_set.contains(m)).count();
        if in_dd != 0 && in_dd != c.members.len() {
            return Err(violation(
                "no reflection of D_d is conjugate into G_0^v",
                Some(c.representative.clone()),
            ));
        }
        if in_dd != 0 {
            dd_class_count += 1;
        }
        summaries.push(ClassSummary {
            representative: c.representative.clone(),
            size: c.members.len(),
            part: if in_dd != 0 { "Dd" } else { "G0vee" },
        });
    }
    let expected = if spec.kind.is_ot() { 1 } else { 2 };
    if dd_class_count != expected {
        return Err(violation("E(G)-classes in S(D_d)", None));
    }
    Ok(ReflectionInventory {
        group: spec,
        g0: spec0,
        n,
        complex_reflections: rg,
        symplectic_reflections: sym,
        g0vee_part,
        dd_part,
        classes: summaries,
        dd_class_count,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub witness: Option<CycMatrix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub spec: FamilySpec,
    pub checks: Vec<LemmaCheck>,
    /// Total `E(G)`-classes of symplectic reflections, when computed.
    pub symplectic_classes: Option<usize>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> LemmaCheck {
    LemmaCheck {
        name,
        passed,
        detail: detail.into(),
        witness: None,
    }
}

/// Runs every structural check on one group: centre, determinants, `D_d`,
/// normality in `E(G)`, `G_0` index, and the reflection inventory.
pub fn verify_lemmas(spec: FamilySpec) -> Result<LemmaReport, ReflectError> {
    let g = build(spec)?;
    let e = build_eg(spec)?;
    let d = spec.d;
    let mut checks = Vec::new();

    let z = g.centre()?;
    let scalars_ok = z
        .elements()?
        .iter()
        .all(|m| m.get(0, 1).is_zero() && m.get(1, 0).is_zero() && m.get(0, 0) == m.get(1, 1));
    checks.push(check(
        "centre",
        z.order() == Some(d as usize) && scalars_ok,
        format!("|Z(G)| = {}", z.order().unwrap_or(0)),
    ));

    let dets = det_set(spec)?;
    let want = roots_of_unity(if spec.kind.is_ot() { d } else { d / 2 });
    checks.push(check(
        "determinants",
        dets == want,
        format!("{} determinants", dets.len()),
    ));

    checks.push(check(
        "eg-order",
        e.order() == Some(2 * g.order().unwrap_or(0)),
        format!("|E(G)| = {}", e.order().unwrap_or(0)),
    ));
    let form = omega_form();
    checks.push(check(
        "symplectic",
        e.generators().iter().all(|m| preserves_form(m, &form)),
        "generators preserve the form",
    ));

    let dd = build_dd(spec)?;
    let r = vee(&CycMatrix::scalar(2, &CycNumber::zeta(d, 1)));
    let s = s_matrix();
    let r_inv = vee(&CycMatrix::scalar(2, &CycNumber::zeta(d, -1)));
    let dihedral = dd.order() == Some(2 * d as usize)
        && s.mul_ref(&s).is_identity()
        && s.mul_ref(&r).mul_ref(&s) == r_inv
        && (1..d as u64).all(|k| !r.pow(k).is_identity());
    checks.push(check(
        "dd-dihedral",
        dihedral,
        format!("|D_d| = {}", dd.order().unwrap_or(0)),
    ));
    checks.push(check("dd-normal", dd.is_normal_in(&e)?, "D_d normal in E(G)"));

    let gv = build_gvee(spec)?;
    checks.push(check("gvee-normal", gv.is_normal_in(&e)?, "G^v normal in E(G)"));
    let (spec0, _, dprime) = largest_reflection_subgroup(spec);
    let g0v = build_gvee(spec0)?;
    checks.push(check(
        "g0vee-normal",
        g0v.is_normal_in(&e)?,
        format!("{}^v normal in E(G)", spec0.label()),
    ));
    let g0 = build(spec0)?;
    let index_ok = g0.is_normal_in(&g)? && g.order().unwrap_or(0) == dprime as usize * g0.order().unwrap_or(0);
    checks.push(check(
        "g0-index",
        index_ok,
        format!("G_0 = {}, index {dprime}", spec0.label()),
    ));

    let mut symplectic_classes = None;
    match inventory(spec) {
        Ok(inv) => {
            checks.push(check(
                "reflections",
                true,
                format!(
                    "|S(E(G))| = {} = N + d with N = {}",
                    inv.symplectic_reflections.len(),
                    inv.n
                ),
            ));
            checks.push(check("dd-classes", true, format!("{} classes", inv.dd_class_count)));
            symplectic_classes = Some(inv.classes.len());
            let fused = inv.dd_class_count == 1;
            let zeta_is_det = det_set(spec)?.contains(&CycNumber::zeta(d, 1));
            checks.push(check(
                "fusion",
                fused == zeta_is_det,
                format!("s ~ z^v s: {fused}; z(d) is a determinant: {zeta_is_det}"),
            ));
        }
        Err(ReflectError::LemmaViolation { lemma, witness }) => {
            checks.push(LemmaCheck {
                name: "reflections",
                passed: false,
                detail: lemma.to_string(),
                witness,
            });
        }
        Err(e) => return Err(e),
    }
    Ok(LemmaReport {
        spec,
        checks,
        symplectic_classes,
    })
}

/// Family kinds and their reflection groups, for callers that only need the
/// spec list.
pub fn g0_specs() -> Vec<FamilySpec> {
    families::reflection_group_specs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_reflections() {
        let g = CycMatrix::diag(&[CycNumber::zeta(3, 1), CycNumber::one()]);
        assert!(is_complex_reflection(&g).unwrap());
        assert!(!is_complex_reflection(&CycMatrix::identity(2)).unwrap());
        let z = vee(&CycMatrix::scalar(2, &CycNumber::zeta(6, 1))).mul_ref(&s_matrix());
        assert!(is_symplectic_reflection(&z).unwrap());
        assert!(matches!(
            is_symplectic_reflection(&CycMatrix::identity(2)),
            Err(ReflectError::Shape { .. })
        ));
    }
}
