//! Interned arithmetic: matrices as `u32` ids into a value table, with memoized
//! sums and products of ids.

use rustc_hash::FxHashMap;

use crate::cyclo::CycNumber;

use super::matrix::CycMatrix;

pub(crate) struct Kernel {
    pub dim: usize,
    pub values: Vec<CycNumber>,
    index: FxHashMap<CycNumber, u32>,
    mul: FxHashMap<u64, u32>,
    add: FxHashMap<u64, u32>,
    zero: u32,
    one: u32,
}

#[inline]
fn key(a: u32, b: u32) -> u64 {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    ((a as u64) << 32) | b as u64
}

impl Kernel {
    pub fn new(dim: usize) -> Self {
        Self::with_values(dim, &[])
    }

    /// Starts from an existing table so ids stay compatible with it. Zero and
    /// one are appended when absent.
    pub fn with_values(dim: usize, values: &[CycNumber]) -> Self {
        let mut k = Kernel {
            dim,
            values: Vec::new(),
            index: FxHashMap::default(),
            mul: FxHashMap::default(),
            add: FxHashMap::default(),
            zero: 0,
            one: 0,
        };
        for v in values {
            k.intern(v);
        }
        k.zero = k.intern(&CycNumber::zero());
        k.one = k.intern(&CycNumber::one());
        k
    }

    pub fn intern(&mut self, x: &CycNumber) -> u32 {
        if let Some(&id) = self.index.get(x) {
            return id;
        }
        let id = self.values.len() as u32;
        self.values.push(x.clone());
        self.index.insert(x.clone(), id);
        id
    }

    #[inline]
    pub fn mul(&mut self, a: u32, b: u32, zero: u32, one: u32) -> u32 {
        if a == zero || b == zero {
            return zero;
        }
        if a == one {
            return b;
        }
        if b == one {
            return a;
        }
        let k = key(a, b);
        if let Some(&r) = self.mul.get(&k) {
            return r;
        }
        let v = self.values[a as usize].mul_ref(&self.values[b as usize]);
        let r = self.intern(&v);
        self.mul.insert(k, r);
        r
    }

    #[inline]
    pub fn add(&mut self, a: u32, b: u32, zero: u32) -> u32 {
        if a == zero {
            return b;
        }
        if b == zero {
            return a;
        }
        let k = key(a, b);
        if let Some(&r) = self.add.get(&k) {
            return r;
        }
        let v = self.values[a as usize].add_ref(&self.values[b as usize]);
        let r = self.intern(&v);
        self.add.insert(k, r);
        r
    }

    pub fn matmul(&mut self, a: &[u32], b: &[u32], out: &mut Vec<u32>) {
        let n = self.dim;
        let (zero, one) = (self.zero_id(), self.one_id());
        out.clear();
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero;
                for k in 0..n {
                    let p = self.mul(a[i * n + k], b[k * n + j], zero, one);
                    acc = self.add(acc, p, zero);
                }
                out.push(acc);
            }
        }
    }

    pub fn matvec(&mut self, a: &[u32], v: &[u32]) -> Vec<u32> {
        let n = self.dim;
        let (zero, one) = (self.zero_id(), self.one_id());
        (0..n)
            .map(|i| {
                let mut acc = zero;
                for k in 0..n {
                    let p = self.mul(a[i * n + k], v[k], zero, one);
                    acc = self.add(acc, p, zero);
                }
                acc
            })
            .collect()
    }

    #[inline]
    pub fn zero_id(&self) -> u32 {
        self.zero
    }

    #[inline]
    pub fn one_id(&self) -> u32 {
        self.one
    }

    pub fn identity(&mut self) -> Vec<u32> {
        let n = self.dim;
        let (zero, one) = (self.zero_id(), self.one_id());
        let mut v = vec![zero; n * n];
        for i in 0..n {
            v[i * n + i] = one;
        }
        v
    }

    pub fn compact(&mut self, m: &CycMatrix) -> Vec<u32> {
        m.entries().iter().map(|x| self.intern(x)).collect()
    }

    pub fn compact_vec(&mut self, v: &[CycNumber]) -> Vec<u32> {
        v.iter().map(|x| self.intern(x)).collect()
    }

    pub fn expand(&self, c: &[u32]) -> CycMatrix {
        CycMatrix::new(
            self.dim,
            self.dim,
            c.iter().map(|&i| self.values[i as usize].clone()).collect(),
        )
    }

    pub fn expand_vec(&self, c: &[u32]) -> Vec<CycNumber> {
        c.iter().map(|&i| self.values[i as usize].clone()).collect()
    }

    /// Inverse of an element of finite order by repeated multiplication.
    pub fn finite_order_inverse(&mut self, a: &[u32], max_order: usize) -> Option<Vec<u32>> {
        let id = self.identity();
        if a == id.as_slice() {
            return Some(id);
        }
        let mut prev = a.to_vec();
        let mut cur = Vec::new();
        for _ in 1..max_order {
            self.matmul(&prev, a, &mut cur);
            if cur == id {
                return Some(prev);
            }
            std::mem::swap(&mut prev, &mut cur);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memoized_product_matches_exact() {
        let a = CycMatrix::from_rows(vec![
            vec![CycNumber::zeta(8, 1), CycNumber::from_int(2)],
            vec![CycNumber::zero(), CycNumber::zeta(3, 2)],
        ]);
        let mut k = Kernel::new(2);
        let ca = k.compact(&a);
        let mut out = Vec::new();
        k.matmul(&ca, &ca, &mut out);
        assert_eq!(k.expand(&out), a.mul_ref(&a));
        let d = k.compact(&CycMatrix::diag(&[CycNumber::zeta(8, 1), CycNumber::one()]));
        let inv = k.finite_order_inverse(&d, 16).unwrap();
        assert_eq!(
            k.expand(&inv),
            CycMatrix::diag(&[CycNumber::zeta(8, 7), CycNumber::one()])
        );
    }
}
