use crate::cyclo::{CycNumber, Rational};

use super::group::FiniteMatrixGroup;
use super::matrix::CycMatrix;
use super::MatError;

/// A subspace of `C^n` given by a linearly independent list of column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<CycNumber>>,
}

impl Subspace {
    /// Fails unless the vectors have length `ambient` and are independent.
    pub fn new(ambient: usize, basis: Vec<Vec<CycNumber>>) -> Result<Self, MatError> {
        if let Some(v) = basis.iter().find(|v| v.len() != ambient) {
            return Err(MatError::Shape {
                expected: (ambient, 1),
                found: (v.len(), 1),
            });
        }
        let s = Subspace { ambient, basis };
        if !s.basis.is_empty() && s.matrix().rank() != s.basis.len() {
            return Err(MatError::Dependent);
        }
        Ok(s)
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn whole(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { CycNumber::one() } else { CycNumber::zero() })
                    .collect()
            })
            .collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<CycNumber>] {
        &self.basis
    }

    /// `ambient x dim` matrix with the basis as columns.
    pub fn matrix(&self) -> CycMatrix {
        CycMatrix::from_columns(&self.basis)
    }

    pub fn contains(&self, v: &[CycNumber]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        if v.iter().all(CycNumber::is_zero) {
            return true;
        }
        let mut cols = self.basis.clone();
        cols.push(v.to_vec());
        CycMatrix::from_columns(&cols).rank() == self.basis.len()
    }

    /// Whether `g` maps the subspace into itself.
    pub fn is_invariant_under(&self, g: &CycMatrix) -> bool {
        self.basis.iter().all(|b| self.contains(&g.mul_vec(b)))
    }

    /// Coordinates of `v` in the basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[CycNumber]) -> Option<Vec<CycNumber>> {
        let b = self.matrix();
        let (_, pivots) = b.transpose().rref();
        // rows of B at `pivots` form an invertible square block
        let r = self.basis.len();
        let block = CycMatrix::new(r, r, pivots.iter().flat_map(|&i| b.row(i).to_vec()).collect());
        let rhs: Vec<CycNumber> = pivots.iter().map(|&i| v[i].clone()).collect();
        let x = block.inverse().ok()?.mul_vec(&rhs);
        (b.mul_vec(&x) == v).then_some(x)
    }
}

/// `(1/|G|) sum_g g`.
pub fn averaging_projector(group: &FiniteMatrixGroup) -> Result<CycMatrix, MatError> {
    let set = group.elements()?;
    let n = group.dim();
    let mut sums = vec![CycNumber::zero(); n * n];
    for g in set.iter() {
        for (s, x) in sums.iter_mut().zip(g.entries()) {
            if !x.is_zero() {
                *s = s.add_ref(x);
            }
        }
    }
    let f = Rational::new(1, set.len() as i64);
    Ok(CycMatrix::new(n, n, sums.into_iter().map(|x| x.scale(&f)).collect()))
}

/// Image of the averaging projector.
pub fn fixed_space(group: &FiniteMatrixGroup) -> Result<Subspace, MatError> {
    let p = averaging_projector(group)?;
    Ok(Subspace {
        ambient: group.dim(),
        basis: p.column_basis(),
    })
}

/// Kernel of the averaging projector, the invariant complement of the fixed
/// space. `fixed` must be the fixed space of `group`.
pub fn invariant_complement(group: &FiniteMatrixGroup, fixed: &Subspace) -> Result<Subspace, MatError> {
    let p = averaging_projector(group)?;
    if fixed.basis.iter().any(|v| p.mul_vec(v) != *v) {
        return Err(MatError::Invariance);
    }
    let basis = p.nullspace();
    debug_assert_eq!(basis.len() + fixed.dim(), group.dim());
    Ok(Subspace {
        ambient: group.dim(),
        basis,
    })
}

/// Matrix of the action of `g` on an invariant subspace, in its basis.
pub fn restrict_matrix(g: &CycMatrix, sub: &Subspace) -> Result<CycMatrix, MatError> {
    let cols: Option<Vec<Vec<CycNumber>>> = sub.basis.iter().map(|b| sub.coordinates(&g.mul_vec(b))).collect();
    cols.map(|c| CycMatrix::from_columns(&c)).ok_or(MatError::Invariance)
}

/// The group acting on an invariant subspace, in the subspace's basis.
/// Enumerated when `group` is.
pub fn restrict(group: &FiniteMatrixGroup, sub: &Subspace) -> Result<FiniteMatrixGroup, MatError> {
    if sub.ambient != group.dim() {
        return Err(MatError::Shape {
            expected: (group.dim(), group.dim()),
            found: (sub.ambient, sub.dim()),
        });
    }
    let gens: Vec<CycMatrix> = group
        .generators()
        .iter()
        .map(|g| restrict_matrix(g, sub))
        .collect::<Result<_, _>>()?;
    match group.order() {
        Some(n) => FiniteMatrixGroup::new(sub.dim(), gens)?.enumerate(n),
        None => FiniteMatrixGroup::new(sub.dim(), gens),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_group_fixed_space() {
        let s = CycMatrix::from_int_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let g = FiniteMatrixGroup::new(3, vec![s]).unwrap().enumerate(10).unwrap();
        let p = averaging_projector(&g).unwrap();
        assert_eq!(p.mul_ref(&p), p);
        let f = fixed_space(&g).unwrap();
        assert_eq!(f.dim(), 2);
        let c = invariant_complement(&g, &f).unwrap();
        assert_eq!(c.dim(), 1);
        let r = restrict(&g, &c).unwrap();
        assert_eq!(r.order(), Some(2));
        assert_eq!(r.generators()[0], CycMatrix::from_int_rows(&[&[-1]]));
    }

    #[test]
    fn non_invariant_subspace_is_rejected() {
        let s = CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let g = FiniteMatrixGroup::new(2, vec![s]).unwrap();
        let sub = Subspace::new(2, vec![vec![CycNumber::one(), CycNumber::zero()]]).unwrap();
        assert_eq!(restrict(&g, &sub).unwrap_err(), MatError::Invariance);
    }
}
