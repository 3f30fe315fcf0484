use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::cyclo::{CycNumber, Rational};

use super::MatError;

/// A dense matrix over cyclotomic numbers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CycNumber>,
}

impl CycMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<CycNumber>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        CycMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![CycNumber::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &CycNumber::one())
    }

    pub fn scalar(n: usize, x: &CycNumber) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    pub fn diag(xs: &[CycNumber]) -> Self {
        let n = xs.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in xs.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycNumber>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| CycNumber::from_int(v)).collect())
                .collect(),
        )
    }

    /// Column matrix.
    pub fn column(v: &[CycNumber]) -> Self {
        Self::new(v.len(), 1, v.to_vec())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<CycNumber>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m.data[i * c + j] = x.clone();
            }
        }
        m
    }

    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let (r, c) = (a.rows + b.rows, a.cols + b.cols);
        let mut m = Self::zeros(r, c);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m.data[i * c + j] = a.get(i, j).clone();
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.data[(a.rows + i) * c + a.cols + j] = b.get(i, j).clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &CycNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: CycNumber) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[CycNumber] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[CycNumber] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<CycNumber> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<CycNumber>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNumber::is_zero)
    }

    /// Smallest conductor containing every entry.
    pub fn conductor(&self) -> u32 {
        self.data
            .iter()
            .fold(1u32, |acc, x| num_integer::lcm(acc, x.conductor()))
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for j in 0..rhs.cols {
                data.push(CycNumber::sum_of_products(
                    row.iter().enumerate().map(|(k, a)| (a, rhs.get(k, j))),
                ));
            }
        }
        Self::new(self.rows, rhs.cols, data)
    }

    pub fn mul_vec(&self, v: &[CycNumber]) -> Vec<CycNumber> {
        assert_eq!(self.cols, v.len(), "shape mismatch in product");
        (0..self.rows)
            .map(|i| CycNumber::sum_of_products(self.row(i).iter().zip(v)))
            .collect()
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&CycNumber, &CycNumber) -> CycNumber) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Self::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        )
    }

    pub fn map(&self, f: impl Fn(&CycNumber) -> CycNumber) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(f).collect())
    }

    pub fn scale(&self, x: &CycNumber) -> Self {
        self.map(|a| a.mul_ref(x))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.map(|a| a.scale(r))
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Self::new(self.cols, self.rows, data)
    }

    pub fn conj(&self) -> Self {
        self.map(CycNumber::conj)
    }

    pub fn conj_transpose(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> CycNumber {
        (0..self.rows.min(self.cols)).fold(CycNumber::zero(), |acc, i| acc.add_ref(self.get(i, i)))
    }

    /// Coefficients of `det(x I - A)` from the leading `1` down to the constant
    /// term (Berkowitz, division-free).
    pub fn charpoly(&self) -> Vec<CycNumber> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut p = vec![CycNumber::one()];
        for r in 1..=n {
            let k = r - 1;
            let a_rr = self.get(k, k);
            // t[0] = 1, t[1] = -a_rr, t[j] = -R A^(j-2) C for j >= 2
            let mut t = Vec::with_capacity(r + 1);
            t.push(CycNumber::one());
            t.push(a_rr.neg_ref());
            let mut c: Vec<CycNumber> = (0..k).map(|i| self.get(i, k).clone()).collect();
            for _ in 2..=r {
                let rc = CycNumber::sum_of_products((0..k).map(|j| (self.get(k, j), &c[j])));
                t.push(rc.neg_ref());
                c = (0..k)
                    .map(|i| CycNumber::sum_of_products((0..k).map(|j| (self.get(i, j), &c[j]))))
                    .collect();
            }
            let mut next = Vec::with_capacity(r + 1);
            for i in 0..=r {
                next.push(CycNumber::sum_of_products((0..=i.min(k)).map(|j| (&t[i - j], &p[j]))));
            }
            p = next;
        }
        p
    }

    pub fn det(&self) -> CycNumber {
        let n = self.rows;
        if n == 2 && self.cols == 2 {
            return self
                .get(0, 0)
                .mul_ref(self.get(1, 1))
                .sub_ref(&self.get(0, 1).mul_ref(self.get(1, 0)));
        }
        let c = self.charpoly().pop().unwrap();
        if n % 2 == 1 {
            c.neg_ref()
        } else {
            c
        }
    }

    /// Exact rank. Small matrices use division-free elimination; larger ones
    /// reduce to row echelon form.
    pub fn rank(&self) -> usize {
        if self.rows * self.cols <= 16 {
            self.rank_fraction_free()
        } else {
            self.rref().1.len()
        }
    }

    fn rank_fraction_free(&self) -> usize {
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| !m[r * cols + c].is_zero()) else {
                continue;
            };
            for j in 0..cols {
                m.swap(piv * cols + j, rank * cols + j);
            }
            let pv = m[rank * cols + c].clone();
            for r in rank + 1..rows {
                let f = m[r * cols + c].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let v = pv.mul_ref(&m[r * cols + j]).sub_ref(&f.mul_ref(&m[rank * cols + j]));
                    m[r * cols + j] = v;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..cols {
                m.data.swap(piv * cols + j, r * cols + j);
            }
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..cols {
                let v = m.get(r, j).mul_ref(&inv);
                m.set(r, j, v);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let v = m.get(i, j).sub_ref(&f.mul_ref(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of `{x : A x = 0}` as column vectors.
    pub fn nullspace(&self) -> Vec<Vec<CycNumber>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![CycNumber::zero(); self.cols];
                v[f] = CycNumber::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = r.get(row, f).neg_ref();
                }
                v
            })
            .collect()
    }

    /// Linearly independent columns spanning the column space.
    pub fn column_basis(&self) -> Vec<Vec<CycNumber>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.col(c)).collect()
    }

    pub fn inverse(&self) -> Result<Self, MatError> {
        if !self.is_square() {
            return Err(MatError::Shape {
                expected: (self.rows, self.rows),
                found: (self.rows, self.cols),
            });
        }
        let h = self.conj_transpose();
        if self.mul_ref(&h).is_identity() {
            return Ok(h);
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, CycNumber::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(MatError::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Canonical binary layout: `u32` LE rows, `u32` LE columns, then the
    /// entries in row-major order, each in the layout of
    /// [`CycNumber::write_bytes`].
    pub fn write_bytes(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.rows as u32).to_le_bytes());
        out.extend_from_slice(&(self.cols as u32).to_le_bytes());
        for x in &self.data {
            x.write_bytes(out);
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.write_bytes(&mut v);
        v
    }

    pub fn read_bytes(input: &mut &[u8]) -> Option<Self> {
        let rd = |input: &mut &[u8]| -> Option<usize> {
            let v = u32::from_le_bytes(input.get(..4)?.try_into().ok()?);
            *input = &input[4..];
            Some(v as usize)
        };
        let rows = rd(input)?;
        let cols = rd(input)?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(CycNumber::read_bytes(input)?);
        }
        Some(Self::new(rows, cols, data))
    }
}

impl fmt::Display for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for CycMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'a> Mul<&'a CycMatrix> for &'a CycMatrix {
    type Output = CycMatrix;
    fn mul(self, rhs: &'a CycMatrix) -> CycMatrix {
        self.mul_ref(rhs)
    }
}

impl Mul for CycMatrix {
    type Output = CycMatrix;
    fn mul(self, rhs: CycMatrix) -> CycMatrix {
        self.mul_ref(&rhs)
    }
}

impl<'a> Add<&'a CycMatrix> for &'a CycMatrix {
    type Output = CycMatrix;
    fn add(self, rhs: &'a CycMatrix) -> CycMatrix {
        self.zip_with(rhs, CycNumber::add_ref)
    }
}

impl<'a> Sub<&'a CycMatrix> for &'a CycMatrix {
    type Output = CycMatrix;
    fn sub(self, rhs: &'a CycMatrix) -> CycMatrix {
        self.zip_with(rhs, CycNumber::sub_ref)
    }
}

impl Neg for &CycMatrix {
    type Output = CycMatrix;
    fn neg(self) -> CycMatrix {
        self.map(CycNumber::neg_ref)
    }
}
