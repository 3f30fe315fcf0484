//! Molien series as exact rational functions, and invariant dimensions of
//! symmetric powers by linear algebra.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::{CycNumber, Rational};
use crate::matrep::{CycMatrix, FiniteMatrixGroup, MatError};

/// Polynomial over `Q`, coefficients in ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QPoly(Vec<Rational>);

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        QPoly::new(cs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn one() -> Self {
        QPoly::from_ints(&[1])
    }

    /// `1 - t^k`
    pub fn one_minus_power(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[0] = Rational::one();
        c[k] = Rational::from_int(-1);
        QPoly::new(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::default();
        }
        let mut out = vec![Rational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QPoly::new(self.0.iter().map(|c| c * r).collect())
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].recip().unwrap();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (QPoly::default(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&c * dc);
            }
            q[i] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    /// First `n` coefficients of `self / den` as a power series; needs `den(0) != 0`.
    pub fn series_div(&self, den: &Self, n: usize) -> Vec<Rational> {
        let d0 = den.coeff(0).recip().expect("denominator vanishes at 0");
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(den.0.len().saturating_sub(1)) {
                acc = &acc - &(&den.0[j] * &out[k - j]);
            }
            out.push(&acc * &d0);
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.signum() < 0;
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{abs}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{abs}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Cyclotomic polynomial `Phi_k` over `Z`.
pub fn cyclotomic_poly(k: usize) -> QPoly {
    // t^k - 1 divided by Phi_j for every proper divisor j
    let mut p = QPoly::one_minus_power(k).scale(&Rational::from_int(-1));
    for j in 1..k {
        if k % j == 0 {
            p = p.div_rem(&cyclotomic_poly(j)).0;
        }
    }
    p
}

/// `num / den` over `Q`, with `den(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: QPoly,
    pub den: QPoly,
}

impl RationalFunction {
    /// `1 / prod (1 - t^d)`
    pub fn free_algebra(degrees: &[usize]) -> Self {
        let den = degrees
            .iter()
            .fold(QPoly::one(), |acc, &d| acc.mul(&QPoly::one_minus_power(d)));
        RationalFunction { num: QPoly::one(), den }
    }

    /// Exact equality by cross-multiplication.
    pub fn same_as(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    pub fn series(&self, n: usize) -> Vec<Rational> {
        self.num.series_div(&self.den, n)
    }

    /// Degrees `d_i` with `self = 1 / prod (1 - t^{d_i})`, found by peeling
    /// the series against growing products and then checked exactly.
    pub fn free_degrees(&self, rank: usize) -> Option<Vec<usize>> {
        let bound = self.den.degree().unwrap_or(0) + self.num.degree().unwrap_or(0) + 2;
        let target = self.series(bound + 1);
        let mut degrees = Vec::new();
        while degrees.len() < rank {
            let current = RationalFunction::free_algebra(&degrees).series(bound + 1);
            let k = (1..=bound).find(|&k| target[k] != current[k])?;
            if target[k] < current[k] {
                return None;
            }
            degrees.push(k);
        }
        self.same_as(&RationalFunction::free_algebra(&degrees))
            .then_some(degrees)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn cyc_poly_div_exact(num: &[CycNumber], den: &[CycNumber]) -> Vec<CycNumber> {
    let dd = den.len() - 1;
    let lead = den[dd].inv().expect("nonzero leading coefficient");
    let mut r = num.to_vec();
    let mut q = vec![CycNumber::zero(); r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd].mul_ref(&lead);
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            r[i + j] = r[i + j].sub_ref(&c.mul_ref(dc));
        }
        q[i] = c;
    }
    debug_assert!(r[..dd].iter().all(|x| x.is_zero()));
    q
}

fn element_order(g: &CycMatrix) -> u64 {
    let mut x = g.clone();
    let mut k = 1;
    while !x.is_identity() {
        x = x.mul_ref(g);
        k += 1;
    }
    k
}

fn binomial_power(e: usize, n: usize) -> Vec<CycNumber> {
    // (1 - t^e)^n
    let base = QPoly::one_minus_power(e);
    let p = (0..n).fold(QPoly::one(), |acc, _| acc.mul(&base));
    (0..=e * n).map(|i| CycNumber::from_rational(p.coeff(i))).collect()
}

/// `(1/|G|) sum_g 1 / det(I - t g)` in lowest terms.
pub fn molien(group: &FiniteMatrixGroup) -> Result<RationalFunction, MatError> {
    let set = group.elements()?;
    let n = group.dim();
    // det(I - t g) depends only on the characteristic polynomial
    let mut classes: BTreeMap<Vec<u8>, (CycMatrix, Vec<CycNumber>, usize)> = BTreeMap::new();
    for g in set.iter() {
        let cp = g.charpoly();
        let mut key = Vec::new();
        for c in &cp {
            c.write_bytes(&mut key);
        }
        classes.entry(key).or_insert_with(|| (g, cp, 0)).2 += 1;
    }
    let classes: Vec<_> = classes.into_values().collect();
    let e = classes
        .iter()
        .map(|(g, _, _)| element_order(g))
        .fold(1u64, |a, b| a.lcm(&b)) as usize;
    let top = binomial_power(e, n);
    let parts: Vec<Vec<CycNumber>> = classes
        .par_iter()
        .map(|(_, cp, count)| {
            let q = cyc_poly_div_exact(&top, cp);
            let c = Rational::from_int(*count as i64);
            q.iter().map(|x| x.scale(&c)).collect()
        })
        .collect();
    let order = Rational::new(1, set.len() as i64);
    let mut num = Vec::with_capacity(parts[0].len());
    for i in 0..parts[0].len() {
        let s = parts.iter().fold(CycNumber::zero(), |acc, p| acc.add_ref(&p[i]));
        let r = s.as_rational().ok_or(MatError::Invariance)?;
        num.push(&r * &order);
    }
    let mut num = QPoly::new(num);
    // (1 - t^e)^n = (-1)^n prod_{k | e} Phi_k^n
    let mut den_factors: Vec<(QPoly, usize)> = (1..=e)
        .filter(|k| e % k == 0)
        .map(|k| (cyclotomic_poly(k), n))
        .collect();
    for (phi, mult) in den_factors.iter_mut() {
        while *mult > 0 {
            let (q, r) = num.div_rem(phi);
            if !r.is_zero() {
                break;
            }
            num = q;
            *mult -= 1;
        }
    }
    let sign = QPoly::from_ints(&[if n % 2 == 0 { 1 } else { -1 }]);
    let mut den = den_factors
        .iter()
        .fold(sign, |acc, (phi, m)| (0..*m).fold(acc, |a, _| a.mul(phi)));
    let c0 = den.coeff(0).recip().expect("den(0) is +-1");
    den = den.scale(&c0);
    num = num.scale(&c0);
    Ok(RationalFunction { num, den })
}

fn monomials(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for m in monomials(n, k - 1) {
        let start = m.last().copied().unwrap_or(0);
        for i in start..n {
            let mut x = m.clone();
            x.push(i);
            out.push(x);
        }
    }
    out
}

/// Matrix of `g` on `Sym^k` in the monomial basis.
pub fn symmetric_power(g: &CycMatrix, k: usize) -> CycMatrix {
    let n = g.rows();
    let basis = monomials(n, k);
    let index: BTreeMap<&[usize], usize> = basis.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let mut out = CycMatrix::zeros(basis.len(), basis.len());
    for (col, mono) in basis.iter().enumerate() {
        // expand prod_j (g e_{m_j}) as a polynomial
        let mut terms: BTreeMap<Vec<usize>, CycNumber> = BTreeMap::new();
        terms.insert(vec![], CycNumber::one());
        for &j in mono {
            let mut next: BTreeMap<Vec<usize>, CycNumber> = BTreeMap::new();
            for (m, c) in &terms {
                for r in 0..n {
                    let a = g.get(r, j);
                    if a.is_zero() {
                        continue;
                    }
                    let mut key = m.clone();
                    let pos = key.partition_point(|&x| x <= r);
                    key.insert(pos, r);
                    let v = c.mul_ref(a);
                    let e = next.entry(key).or_insert_with(CycNumber::zero);
                    *e = e.add_ref(&v);
                }
            }
            terms = next;
        }
        for (m, c) in terms {
            if !c.is_zero() {
                out.set(index[m.as_slice()], col, c);
            }
        }
    }
    out
}

/// Dimension of the invariants of the group on `Sym^k`.
pub fn invariant_dimension(group: &FiniteMatrixGroup, k: usize) -> usize {
    let mats: Vec<CycMatrix> = group
        .generators()
        .par_iter()
        .map(|g| &symmetric_power(g, k) - &CycMatrix::identity(monomials(g.rows(), k).len()))
        .collect();
    let size = mats.first().map_or(1, |m| m.cols());
    if mats.is_empty() {
        return monomials(group.dim(), k).len();
    }
    let mut rows = Vec::new();
    for m in &mats {
        rows.extend(m.to_rows());
    }
    size - CycMatrix::from_rows(rows).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), QPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), QPoly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), QPoly::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), QPoly::from_ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn trivial_and_sign() {
        let t = FiniteMatrixGroup::trivial(1).enumerate(1).unwrap();
        let m = molien(&t).unwrap();
        assert!(m.same_as(&RationalFunction::free_algebra(&[1])));
        let pm = FiniteMatrixGroup::new(2, vec![CycMatrix::scalar(2, &CycNumber::from_int(-1))])
            .unwrap()
            .enumerate(2)
            .unwrap();
        let m = molien(&pm).unwrap();
        let want = RationalFunction {
            num: QPoly::from_ints(&[1, 0, 1]),
            den: QPoly::one_minus_power(2).mul(&QPoly::one_minus_power(2)),
        };
        assert!(m.same_as(&want));
        assert_eq!(m.free_degrees(2), None);
    }

    #[test]
    fn symmetric_group_degrees() {
        let s = CycMatrix::from_int_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let c = CycMatrix::from_int_rows(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let g = FiniteMatrixGroup::new(3, vec![s, c]).unwrap().enumerate(10).unwrap();
        let m = molien(&g).unwrap();
        assert_eq!(m.free_degrees(3), Some(vec![1, 2, 3]));
        let series = m.series(5);
        for k in 0..5 {
            assert_eq!(series[k], Rational::from_int(invariant_dimension(&g, k) as i64));
        }
    }
}
