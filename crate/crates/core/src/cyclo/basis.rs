//! Per-conductor reduction tables for the sparse cyclotomic basis.
//!
//! For `n = prod q_p` with `q_p = p^e`, the exponent `k` of `z(n)^k` splits
//! into components `c_p = k * (n/q_p)^-1 mod q_p`, the exponent of the
//! compatible root `z(q_p) = z(n)^(n/q_p)`. Write `c_p = a + b * p^(e-1)`.
//! A monomial is a basis element iff `b != 0` at every odd `p` and `b == 0`
//! at `p = 2`. Non-basis monomials expand through
//! `sum_b z(q)^(a + b p^(e-1)) = 0` (odd p) and `z(q)^(a + q/2) = -z(q)^a`.

use std::sync::{OnceLock, RwLock};

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

#[derive(Debug, Clone, Copy)]
pub(crate) struct PrimePart {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    /// `(n / q)^-1 mod q`.
    pub cofactor_inv: u32,
}

#[derive(Debug)]
pub(crate) struct Table {
    pub parts: Vec<PrimePart>,
    /// `expansion[k]`: basis exponents with signs summing to `z(n)^k`.
    pub expansion: Vec<SmallVec<[(u32, i8); 2]>>,
    #[allow(dead_code)]
    pub is_basis: Vec<bool>,
}

pub(crate) fn factor(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m as i64, (a % m) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible mod {m}");
    t.rem_euclid(m as i64) as u64
}

pub fn euler_phi(n: u32) -> u32 {
    factor(n).iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
}

impl Table {
    fn build(n: u32) -> Self {
        let parts: Vec<PrimePart> = factor(n)
            .into_iter()
            .map(|(p, e)| {
                let q = p.pow(e);
                let cof = (n / q) as u64;
                PrimePart {
                    p,
                    e,
                    q,
                    cofactor_inv: mod_inverse(cof % q as u64, q as u64) as u32,
                }
            })
            .collect();
        let mut expansion = Vec::with_capacity(n as usize);
        let mut is_basis = Vec::with_capacity(n as usize);
        for k in 0..n {
            let comps: SmallVec<[u32; 4]> = parts
                .iter()
                .map(|pp| ((k as u64 * pp.cofactor_inv as u64) % pp.q as u64) as u32)
                .collect();
            // alternatives per prime: list of (component, sign)
            let mut choices: SmallVec<[SmallVec<[(u32, i8); 4]>; 4]> = SmallVec::new();
            let mut basis = true;
            for (pp, &c) in parts.iter().zip(&comps) {
                let step = pp.q / pp.p;
                let top = c / step;
                let mut alt = SmallVec::new();
                if pp.p == 2 {
                    if top == 0 {
                        alt.push((c, 1));
                    } else {
                        basis = false;
                        alt.push((c - step, -1));
                    }
                } else if top != 0 {
                    alt.push((c, 1));
                } else {
                    basis = false;
                    for b in 1..pp.p {
                        alt.push((c + b * step, -1));
                    }
                }
                choices.push(alt);
            }
            let mut terms: SmallVec<[(u32, i8); 2]> = SmallVec::new();
            terms.push((0u32, 1i8));
            for (pp, alt) in parts.iter().zip(&choices) {
                let cof = n / pp.q;
                let mut next = SmallVec::new();
                for &(acc, s) in &terms {
                    for &(c, t) in alt {
                        let k2 = ((acc as u64 + c as u64 * cof as u64) % n as u64) as u32;
                        next.push((k2, s * t));
                    }
                }
                terms = next;
            }
            terms.sort_unstable();
            expansion.push(terms);
            is_basis.push(basis);
        }
        Table {
            parts,
            expansion,
            is_basis,
        }
    }

    /// Component of `k` at prime part `idx`.
    #[inline]
    pub fn component(&self, k: u32, idx: usize) -> u32 {
        let pp = &self.parts[idx];
        ((k as u64 * pp.cofactor_inv as u64) % pp.q as u64) as u32
    }
}

const DIRECT: usize = 1025;

static SMALL: [OnceLock<Table>; DIRECT] = [const { OnceLock::new() }; DIRECT];
// Tables are process-lifetime caches; large ones are leaked once per conductor.
static LARGE: OnceLock<RwLock<FxHashMap<u32, &'static Table>>> = OnceLock::new();

pub(crate) fn table(n: u32) -> &'static Table {
    assert!(n >= 1);
    if (n as usize) < DIRECT {
        return SMALL[n as usize].get_or_init(|| Table::build(n));
    }
    let map = LARGE.get_or_init(|| RwLock::new(FxHashMap::default()));
    if let Some(t) = map.read().unwrap().get(&n) {
        return t;
    }
    let mut w = map.write().unwrap();
    w.entry(n).or_insert_with(|| Box::leak(Box::new(Table::build(n))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_size_is_phi() {
        for n in 1..=240 {
            let t = table(n);
            let count = t.is_basis.iter().filter(|&&b| b).count() as u32;
            assert_eq!(count, euler_phi(n), "n = {n}");
        }
    }

    #[test]
    fn expansions_land_in_basis() {
        for n in [1, 2, 3, 4, 8, 9, 12, 15, 20, 24, 45, 240] {
            let t = table(n);
            for k in 0..n as usize {
                for &(b, _) in &t.expansion[k] {
                    assert!(t.is_basis[b as usize], "n={n} k={k} -> {b}");
                }
                if t.is_basis[k] {
                    assert_eq!(t.expansion[k].as_slice(), &[(k as u32, 1)]);
                }
            }
        }
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(240), 64);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(8), 4);
    }
}
