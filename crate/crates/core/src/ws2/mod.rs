//! The rank-8 symplectic reflection group `W(S_2)` of order 82944, the
//! stabilizer of a vector, and the identification of its action on the
//! invariant complement.

mod molien;

use serde::Serialize;

use crate::cyclo::{CycNumber, Rational};
use crate::families::standard_form;
use crate::matrep::{
    averaging_projector, fixed_space, invariant_complement, restrict, CycMatrix, ElementCache, FiniteMatrixGroup,
    MatError, Subspace,
};
use crate::reflect::generated_by_reflections;

pub use molien::{cyclotomic_poly, invariant_dimension, molien, symmetric_power, QPoly, RationalFunction};

pub const WS2_ORDER: usize = 82944;
pub const STABILIZER_ORDER: usize = 96;
pub const G443_DEGREES: [usize; 3] = [3, 4, 8];
const CACHE_KEY: &str = "ws2";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Ws2Error {
    #[error("{check} failed")]
    Mismatch {
        check: &'static str,
        witness: Option<CycMatrix>,
    },
    #[error(transparent)]
    Matrix(#[from] MatError),
}

fn sparse8(entries: &[(usize, usize, i64)], diag_rest: bool) -> CycMatrix {
    let mut m = CycMatrix::zeros(8, 8);
    if diag_rest {
        for i in 0..8 {
            m.set(i, i, CycNumber::one());
        }
    }
    for &(i, j, v) in entries {
        m.set(i - 1, j - 1, CycNumber::from_int(v));
    }
    m
}

/// The four generators `M_1, ..., M_4`.
pub fn generators() -> [CycMatrix; 4] {
    let rows: [[&str; 8]; 8] = [
        ["1", "i", "0", "0", "0", "0", "-1", "-i"],
        ["-i", "1", "0", "0", "0", "0", "-i", "1"],
        ["0", "0", "1", "i", "1", "i", "0", "0"],
        ["0", "0", "-i", "1", "i", "-1", "0", "0"],
        ["0", "0", "1", "-i", "1", "-i", "0", "0"],
        ["0", "0", "-i", "-1", "i", "1", "0", "0"],
        ["-1", "i", "0", "0", "0", "0", "1", "-i"],
        ["i", "1", "0", "0", "0", "0", "i", "1"],
    ];
    let half = Rational::new(1, 2);
    let m1 = CycMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| gauss(s).scale(&half)).collect())
            .collect(),
    );
    let m2 = sparse8(
        &[
            (1, 2, -1),
            (2, 1, -1),
            (3, 3, 1),
            (4, 4, 1),
            (5, 6, -1),
            (6, 5, -1),
            (7, 7, 1),
            (8, 8, 1),
        ],
        false,
    );
    let m3 = sparse8(
        &[
            (1, 3, -1),
            (2, 2, 1),
            (3, 1, -1),
            (4, 4, 1),
            (5, 7, -1),
            (6, 6, 1),
            (7, 5, -1),
            (8, 8, 1),
        ],
        false,
    );
    let m4 = sparse8(&[(1, 1, -1), (5, 5, -1)], true);
    [m1, m2, m3, m4]
}

fn gauss(s: &str) -> CycNumber {
    match s {
        "i" => CycNumber::i(),
        "-i" => CycNumber::i().neg_ref(),
        _ => CycNumber::from_int(s.parse().expect("integer")),
    }
}

/// `v = (0,0,1,0,0,0,0,-1)`.
pub fn stabilized_vector() -> Vec<CycNumber> {
    [0, 0, 1, 0, 0, 0, 0, -1]
        .iter()
        .map(|&x| CycNumber::from_int(x))
        .collect()
}

/// Second basis vector of the fixed space.
pub fn second_fixed_vector() -> Vec<CycNumber> {
    [0, 0, 0, 1, 0, 0, 1, 0]
        .iter()
        .map(|&x| CycNumber::from_int(x))
        .collect()
}

/// Columns `w_1, ..., w_6` of the complement basis, `z = z(8)`.
pub fn complement_basis() -> Vec<Vec<CycNumber>> {
    let rows: [[&str; 6]; 8] = [
        ["-z3", "-z3", "0", "-z3", "-z3", "0"],
        ["-z", "z", "0", "z", "-z", "0"],
        ["0", "0", "-z3", "0", "0", "z3"],
        ["0", "0", "-z", "0", "0", "-z"],
        ["-z", "-z", "0", "z", "z", "0"],
        ["z3", "-z3", "0", "z3", "-z3", "0"],
        ["0", "0", "z", "0", "0", "z"],
        ["0", "0", "-z3", "0", "0", "z3"],
    ];
    let half = Rational::new(1, 2);
    let entry = |s: &str| -> CycNumber {
        let (neg, body) = s.strip_prefix('-').map_or((false, s), |b| (true, b));
        let x = match body {
            "0" => CycNumber::zero(),
            "z" => CycNumber::zeta(8, 1),
            "z3" => CycNumber::zeta(8, 3),
            _ => unreachable!(),
        };
        let x = x.scale(&half);
        if neg {
            x.neg_ref()
        } else {
            x
        }
    };
    (0..6).map(|j| rows.iter().map(|r| entry(r[j])).collect()).collect()
}

/// The three displayed generators of the restricted group, in the basis `w`.
pub fn displayed_restricted_generators() -> [CycMatrix; 3] {
    let build = |entries: &[(usize, usize, &str)]| {
        let mut m = CycMatrix::zeros(6, 6);
        for &(i, j, s) in entries {
            m.set(i - 1, j - 1, gauss(s));
        }
        m
    };
    [
        build(&[
            (1, 2, "-i"),
            (2, 1, "i"),
            (3, 3, "1"),
            (4, 5, "i"),
            (5, 4, "-i"),
            (6, 6, "1"),
        ]),
        build(&[
            (1, 2, "-1"),
            (2, 1, "-1"),
            (3, 3, "1"),
            (4, 5, "-1"),
            (5, 4, "-1"),
            (6, 6, "1"),
        ]),
        build(&[
            (1, 3, "-i"),
            (2, 2, "1"),
            (3, 1, "i"),
            (4, 6, "i"),
            (5, 5, "1"),
            (6, 4, "-i"),
        ]),
    ]
}

/// `M_2, M_4, M_1 M_3 M_4 M_2 M_4 M_3 M_1`.
pub fn stabilizer_word_generators() -> Vec<CycMatrix> {
    let [m1, m2, m3, m4] = generators();
    let word = [&m1, &m3, &m4, &m2, &m4, &m3, &m1]
        .iter()
        .fold(CycMatrix::identity(8), |acc, m| acc.mul_ref(m));
    vec![m2, m4, word]
}

/// Enumerated `W(S_2)`, read from or written to the cache when given.
pub fn build_ws2(cache: Option<&ElementCache>, cap: usize) -> Result<FiniteMatrixGroup, MatError> {
    let g = FiniteMatrixGroup::new(8, generators().to_vec())?;
    match cache {
        Some(c) => c.enumerate(CACHE_KEY, &g, cap),
        None => g.enumerate(cap),
    }
}

/// Invariant bilinear forms of a set of matrices: a basis of the solutions
/// of `M^T X M = X`.
pub fn invariant_bilinear_forms(gens: &[CycMatrix]) -> Vec<CycMatrix> {
    let n = gens[0].rows();
    let mut rows = Vec::with_capacity(gens.len() * n * n);
    for m in gens {
        for a in 0..n {
            for b in 0..n {
                let mut row = vec![CycNumber::zero(); n * n];
                for cc in 0..n {
                    let mca = m.get(cc, a);
                    if mca.is_zero() {
                        continue;
                    }
                    for d in 0..n {
                        let mdb = m.get(d, b);
                        if !mdb.is_zero() {
                            row[cc * n + d] = row[cc * n + d].add_ref(&mca.mul_ref(mdb));
                        }
                    }
                }
                row[a * n + b] = row[a * n + b].sub_ref(&CycNumber::one());
                rows.push(row);
            }
        }
    }
    CycMatrix::from_rows(rows)
        .nullspace()
        .into_iter()
        .map(|v| CycMatrix::new(n, n, v))
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Ws2Options {
    /// Also filter all elements for the stabilizer and compare, and check
    /// Molien coefficients against symmetric powers.
    pub full: bool,
    pub cap: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Ws2Report {
    pub group_order: usize,
    pub generators_are_symplectic_reflections: bool,
    pub form_solution_dim: usize,
    pub form_nondegenerate: bool,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    pub stabilizer_matches_word: bool,
    pub stabilizer_matches_filter: Option<bool>,
    pub fixed_dim: usize,
    pub fixed_contains_vectors: bool,
    pub projector_rank: usize,
    pub projector_equivariant: bool,
    pub complement_dim: usize,
    pub complement_matches_basis: bool,
    pub form_on_complement_standard: bool,
    pub lagrangian_preserved: bool,
    pub restricted_preserves_form: bool,
    pub displayed_generators_in_restriction: bool,
    pub restricted_order: usize,
    pub molien_full: RationalFunction,
    pub molien_series_full: Vec<String>,
    pub symmetric_power_agrees: Option<bool>,
    pub molien_lagrangian: RationalFunction,
    pub molien_num_degrees: Option<Vec<usize>>,
    pub identified: bool,
}

impl Ws2Report {
    /// Every check the report records, by name.
    pub fn checks(&self) -> Vec<(&'static str, bool)> {
        let mut v = vec![
            ("order", self.group_order == WS2_ORDER),
            ("generators", self.generators_are_symplectic_reflections),
            ("form-unique", self.form_solution_dim == 1 && self.form_nondegenerate),
            ("orbit", self.orbit_size * self.stabilizer_order == self.group_order),
            ("stabilizer-order", self.stabilizer_order == STABILIZER_ORDER),
            ("stabilizer-word", self.stabilizer_matches_word),
            ("fixed-space", self.fixed_dim == 2 && self.fixed_contains_vectors),
            ("projector", self.projector_rank == 2 && self.projector_equivariant),
            ("complement", self.complement_dim == 6 && self.complement_matches_basis),
            ("form-on-complement", self.form_on_complement_standard),
            ("lagrangian", self.lagrangian_preserved),
            ("restricted-form", self.restricted_preserves_form),
            ("displayed-generators", self.displayed_generators_in_restriction),
            (
                "molien-degrees",
                self.molien_num_degrees.as_deref() == Some(&G443_DEGREES[..]),
            ),
            ("identified", self.identified),
        ];
        if let Some(b) = self.stabilizer_matches_filter {
            v.push(("stabilizer-filter", b));
        }
        if let Some(b) = self.symmetric_power_agrees {
            v.push(("symmetric-powers", b));
        }
        v
    }

    pub fn all_passed(&self) -> bool {
        self.checks().iter().all(|c| c.1)
    }
}

fn top_left(m: &CycMatrix, k: usize) -> CycMatrix {
    CycMatrix::from_rows((0..k).map(|i| (0..k).map(|j| m.get(i, j).clone()).collect()).collect())
}

/// Order 96, rank 3, generated by complex reflections and invariant degrees
/// 3, 4, 8.
pub fn identify_g443(group: &FiniteMatrixGroup) -> Result<bool, MatError> {
    if group.dim() != 3 || group.order() != Some(STABILIZER_ORDER) {
        return Ok(false);
    }
    let reflections = generated_by_reflections(group).map_err(|e| match e {
        crate::reflect::ReflectError::Matrix(m) => m,
        _ => MatError::NotEnumerated,
    })?;
    if !reflections {
        return Ok(false);
    }
    Ok(molien(group)?.same_as(&RationalFunction::free_algebra(&G443_DEGREES)))
}

/// Runs the whole computation on an enumerated `W(S_2)`.
pub fn stabilizer_pipeline(ws2: &FiniteMatrixGroup, opts: Ws2Options) -> Result<Ws2Report, Ws2Error> {
    let cap = if opts.cap == 0 {
        crate::matrep::DEFAULT_CAP
    } else {
        opts.cap
    };
    let gens = generators();
    let group_order = ws2.order().ok_or(MatError::NotEnumerated)?;
    let id8 = CycMatrix::identity(8);
    let forms = invariant_bilinear_forms(&gens);
    let form_nondegenerate = forms.len() == 1 && forms[0].rank() == 8;
    let generators_are_symplectic_reflections = gens.iter().all(|m| (m - &id8).rank() == 2)
        && form_nondegenerate
        && forms[0].transpose() == forms[0].scale(&CycNumber::from_int(-1));

    let v = stabilized_vector();
    let (orbit, h) = ws2.orbit_stabilizer(&v, cap)?;
    let stabilizer_order = h.order().ok_or(MatError::NotEnumerated)?;
    let word = FiniteMatrixGroup::new(8, stabilizer_word_generators())?.enumerate(cap)?;
    let stabilizer_matches_word = word.same_elements(&h)?;
    let stabilizer_matches_filter = if opts.full {
        Some(ws2.stabilizer_by_filter(&v)?.same_elements(&h)?)
    } else {
        None
    };

    let fixed = fixed_space(&h)?;
    let fixed_contains_vectors = fixed.contains(&v) && fixed.contains(&second_fixed_vector());
    let p = averaging_projector(&h)?;
    let projector_equivariant = h
        .elements()?
        .iter()
        .all(|g| g.mul_ref(&p) == p.mul_ref(&g) && g.mul_ref(&p) == p);
    let projector_rank = p.rank();
    let complement = invariant_complement(&h, &fixed)?;
    let w = Subspace::new(8, complement_basis())?;
    let complement_matches_basis = complement.dim() == w.dim()
        && w.basis().iter().all(|x| complement.contains(x))
        && h.generators().iter().all(|g| w.is_invariant_under(g));

    // scale the invariant form so that it is standard on the basis w
    let mut form_on_complement_standard = false;
    let mut lagrangian_form = false;
    if form_nondegenerate {
        let wm = w.matrix();
        let f = wm.transpose().mul_ref(&forms[0]).mul_ref(&wm);
        let scale = f.get(0, 3).clone();
        if !scale.is_zero() {
            let f = f.scale(&scale.inv().expect("nonzero"));
            form_on_complement_standard = f == standard_form(3);
            lagrangian_form = (0..3).all(|i| (0..3).all(|j| f.get(i, j).is_zero()));
        }
    }

    let hw = restrict(&h, &w)?;
    let hw_set = hw.elements()?;
    let j6 = standard_form(3);
    let restricted_preserves_form = hw_set.iter().all(|g| g.transpose().mul_ref(&j6).mul_ref(&g) == j6);
    let lower_left_zero = hw_set
        .iter()
        .all(|g| (3..6).all(|i| (0..3).all(|j| g.get(i, j).is_zero())));
    let lagrangian_preserved = lower_left_zero && lagrangian_form;
    let displayed_generators_in_restriction = displayed_restricted_generators().iter().all(|g| hw_set.contains(g));

    let molien_full = molien(&hw)?;
    let series = molien_full.series(7);
    let symmetric_power_agrees = if opts.full {
        Some((0..=4).all(|k| series[k] == Rational::from_int(invariant_dimension(&hw, k) as i64)))
    } else {
        None
    };

    let g3 = FiniteMatrixGroup::new(3, hw.generators().iter().map(|g| top_left(g, 3)).collect())?.enumerate(cap)?;
    let restricted_order = g3.order().unwrap_or(0);
    let molien_lagrangian = molien(&g3)?;
    let molien_num_degrees = molien_lagrangian.free_degrees(3);
    let identified = lower_left_zero && identify_g443(&g3)?;

    Ok(Ws2Report {
        group_order,
        generators_are_symplectic_reflections,
        form_solution_dim: forms.len(),
        form_nondegenerate,
        orbit_size: orbit.len(),
        stabilizer_order,
        stabilizer_matches_word,
        stabilizer_matches_filter,
        fixed_dim: fixed.dim(),
        fixed_contains_vectors,
        projector_rank,
        projector_equivariant,
        complement_dim: complement.dim(),
        complement_matches_basis,
        form_on_complement_standard,
        lagrangian_preserved,
        restricted_preserves_form,
        displayed_generators_in_restriction,
        restricted_order,
        molien_full,
        molien_series_full: series.iter().map(|r| r.to_string()).collect(),
        symmetric_power_agrees,
        molien_lagrangian,
        molien_num_degrees,
        identified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_shapes() {
        let [m1, m2, m3, m4] = generators();
        let id = CycMatrix::identity(8);
        for m in [&m1, &m2, &m3, &m4] {
            assert_eq!((m - &id).rank(), 2);
        }
        assert!(m4.mul_ref(&m4).is_identity());
        assert!(m2.mul_ref(&m2).is_identity());
        let v = stabilized_vector();
        for g in stabilizer_word_generators() {
            assert_eq!(g.mul_vec(&v), v);
        }
    }

    #[test]
    fn unique_form() {
        let forms = invariant_bilinear_forms(&generators());
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].transpose(), forms[0].scale(&CycNumber::from_int(-1)));
    }

    #[test]
    fn cyclic_96_is_not_g443() {
        let g = CycMatrix::diag(&[CycNumber::zeta(96, 1), CycNumber::zeta(96, -1), CycNumber::one()]);
        let c = FiniteMatrixGroup::new(3, vec![g]).unwrap().enumerate(200).unwrap();
        assert_eq!(c.order(), Some(96));
        assert!(!identify_g443(&c).unwrap());
        assert!(!identify_g443(&FiniteMatrixGroup::trivial(3).enumerate(1).unwrap()).unwrap());
    }
}
