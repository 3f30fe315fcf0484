//! Reduction of cyclotomic numbers modulo a prime `p = 1 mod n`.
//!
//! `z(n) -> r` for a fixed element `r` of order `n` in `F_p` extends to a ring
//! map from the `p`-integral part of `Q(z(n))` onto `F_p`. Ranks can only drop
//! under such a map, so a modular rank is a certified lower bound.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::number::CycNumber;
use super::rational::Rational;

#[derive(Debug, Clone)]
pub struct ModField {
    p: u64,
    n: u32,
    powers: Vec<u64>,
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl ModField {
    /// Smallest prime `p = 1 mod n` above `2^61`, with the least admissible root.
    pub fn new(n: u32) -> Self {
        assert!(n >= 1);
        let n64 = n as u64;
        let mut p = (1u64 << 61) / n64 * n64 + 1;
        while !is_prime(p) {
            p += n64;
        }
        let primes: Vec<u64> = super::basis::factor(n).iter().map(|f| f.0 as u64).collect();
        let root = (2..)
            .map(|a| pow_mod(a, (p - 1) / n64, p))
            .find(|&r| primes.iter().all(|&q| pow_mod(r, n64 / q, p) != 1))
            .unwrap();
        let mut powers = Vec::with_capacity(n as usize);
        let mut x = 1;
        for _ in 0..n {
            powers.push(x);
            x = mul_mod(x, root, p);
        }
        ModField { p, n, powers }
    }

    /// Shared field for conductor `n`, built once per process.
    pub fn cached(n: u32) -> Arc<ModField> {
        static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<ModField>>>> = OnceLock::new();
        let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        map.lock()
            .unwrap()
            .entry(n)
            .or_insert_with(|| Arc::new(ModField::new(n)))
            .clone()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    fn reduce_rational(&self, r: &Rational) -> Option<u64> {
        let p = self.p;
        let red = |x: BigInt| -> u64 {
            let m = x % BigInt::from(p);
            let v = m.to_i128().unwrap();
            v.rem_euclid(p as i128) as u64
        };
        let (num, den) = match r.as_small() {
            Some((a, b)) => (
                (a as i128).rem_euclid(p as i128) as u64,
                (b as i128).rem_euclid(p as i128) as u64,
            ),
            None => (red(r.numer()), red(r.denom())),
        };
        if den == 0 {
            return None;
        }
        Some(mul_mod(num, pow_mod(den, p - 2, p), p))
    }

    /// Image in `F_p`; `None` if the conductor does not divide `n` or a
    /// denominator vanishes mod `p`.
    pub fn reduce(&self, x: &CycNumber) -> Option<u64> {
        let c = x.conductor();
        if self.n % c != 0 {
            return None;
        }
        let f = self.n / c;
        let mut acc = 0u64;
        for (k, coeff) in x.terms() {
            let v = mul_mod(self.reduce_rational(coeff)?, self.powers[(k * f) as usize], self.p);
            acc = (acc + v) % self.p;
        }
        Some(acc)
    }

    /// Rank of a row-major `rows x cols` matrix over `F_p`; destroys the input.
    pub fn rank(&self, m: &mut [u64], rows: usize, cols: usize) -> usize {
        let p = self.p;
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                m.swap(piv * cols + j, rank * cols + j);
            }
            let inv = pow_mod(m[rank * cols + c], p - 2, p);
            for r in 0..rows {
                if r == rank || m[r * cols + c] == 0 {
                    continue;
                }
                let f = mul_mod(m[r * cols + c], inv, p);
                for j in c..cols {
                    let sub = mul_mod(f, m[rank * cols + j], p);
                    m[r * cols + j] = (m[r * cols + j] + p - sub) % p;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_has_exact_order() {
        for n in [1, 2, 8, 20, 240] {
            let f = ModField::new(n);
            assert_eq!((f.prime() - 1) % n as u64, 0);
            let z = f.reduce(&CycNumber::zeta(n, 1)).unwrap();
            assert_eq!(pow_mod(z, n as u64, f.prime()), 1);
        }
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let f = ModField::new(240);
        let p = f.prime();
        let xs = [
            CycNumber::zeta(240, 7) + CycNumber::from_rational(Rational::new(3, 5)),
            CycNumber::zeta(12, 5) - CycNumber::zeta(5, 2),
            CycNumber::zeta(16, 3).scale(&Rational::new(-7, 2)),
        ];
        for a in &xs {
            for b in &xs {
                let (ra, rb) = (f.reduce(a).unwrap(), f.reduce(b).unwrap());
                assert_eq!(f.reduce(&(a * b)).unwrap(), mul_mod(ra, rb, p));
                assert_eq!(f.reduce(&(a + b)).unwrap(), (ra + rb) % p);
            }
        }
    }

    #[test]
    fn modular_rank() {
        let f = ModField::new(4);
        let mut m = vec![1, 2, 3, 2, 4, 6, 0, 1, 1];
        assert_eq!(f.rank(&mut m, 3, 3), 2);
    }
}
