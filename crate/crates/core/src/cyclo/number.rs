use num_integer::Integer;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use smallvec::SmallVec;

use super::basis::table;
use super::rational::Rational;
use super::CycError;

type Terms = SmallVec<[(u32, Rational); 2]>;

/// An element of a cyclotomic field, always in canonical form: minimal
/// conductor, basis exponents in increasing order, nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNumber {
    n: u32,
    terms: Terms,
}

/// Sparse coordinates of a number in the basis of a stated conductor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedded {
    pub conductor: u32,
    pub coords: Vec<(u32, Rational)>,
}

impl Embedded {
    pub fn canonicalize(&self) -> CycNumber {
        let t = table(self.conductor);
        let mut raw = Terms::new();
        for (k, c) in &self.coords {
            push_expanded(t, *k % self.conductor, c, &mut raw);
        }
        CycNumber::from_raw(self.conductor, raw)
    }
}

fn push_expanded(t: &super::basis::Table, k: u32, c: &Rational, out: &mut Terms) {
    for &(b, s) in &t.expansion[k as usize] {
        out.push((b, if s > 0 { c.clone() } else { -c }));
    }
}

impl CycNumber {
    pub fn zero() -> Self {
        CycNumber {
            n: 1,
            terms: Terms::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::ONE)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_int(v))
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = Terms::new();
        if !r.is_zero() {
            terms.push((0, r));
        }
        CycNumber { n: 1, terms }
    }

    /// `z(n)^k`, where `z(n)` is the distinguished generator of `Q(z(n))`.
    pub fn root_of_unity(n: u32, k: i64) -> Result<Self, CycError> {
        if n == 0 {
            return Err(CycError::InvalidConductor);
        }
        let k = k.rem_euclid(n as i64) as u32;
        let t = table(n);
        let mut raw = Terms::new();
        push_expanded(t, k, &Rational::ONE, &mut raw);
        Ok(Self::from_raw(n, raw))
    }

    /// Shorthand for `root_of_unity` with a nonzero conductor.
    pub fn zeta(n: u32, k: i64) -> Self {
        Self::root_of_unity(n, k).expect("conductor must be positive")
    }

    /// Imaginary unit `z(4)`.
    pub fn i() -> Self {
        Self::zeta(4, 1)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &[(u32, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.n != 1 {
            return None;
        }
        Some(self.terms.first().map_or(Rational::ZERO, |t| t.1.clone()))
    }

    /// Builds a canonical number from basis terms of conductor `n`
    /// (duplicates allowed).
    fn from_raw(n: u32, mut raw: Terms) -> Self {
        raw.sort_unstable_by_key(|t| t.0);
        let mut merged = Terms::new();
        for (k, c) in raw {
            match merged.last_mut() {
                Some((lk, lc)) if *lk == k => *lc = &*lc + &c,
                _ => merged.push((k, c)),
            }
        }
        merged.retain(|t| !t.1.is_zero());
        let mut x = CycNumber { n, terms: merged };
        x.descend();
        x
    }

    /// Moves to the smallest conductor whose field contains the value.
    fn descend(&mut self) {
        if self.terms.is_empty() {
            self.n = 1;
            return;
        }
        'outer: loop {
            if self.n == 1 {
                return;
            }
            let t = table(self.n);
            for (idx, pp) in t.parts.iter().enumerate() {
                let n = self.n;
                let p = pp.p;
                if p == 2 && pp.e == 1 {
                    // Q(z(2m)) = Q(z(m)) for odd m; every basis exponent is even.
                    for term in self.terms.iter_mut() {
                        debug_assert!(term.0 % 2 == 0);
                        term.0 /= 2;
                    }
                    self.n = n / 2;
                    self.terms.sort_unstable_by_key(|t| t.0);
                    continue 'outer;
                }
                if pp.e >= 2 {
                    if self.terms.iter().all(|t| t.0 % p == 0) {
                        for term in self.terms.iter_mut() {
                            term.0 /= p;
                        }
                        self.n = n / p;
                        self.terms.sort_unstable_by_key(|t| t.0);
                        continue 'outer;
                    }
                    continue;
                }
                // odd p with p || n: coefficients of z(p)^1..z(p)^(p-1) must agree
                // over every fixed cofactor exponent.
                if self.terms.len() % (p as usize - 1) != 0 {
                    continue;
                }
                let cof = n / p;
                let mut keyed: SmallVec<[(u32, u32, &Rational); 8]> = self
                    .terms
                    .iter()
                    .map(|(k, c)| {
                        let comp = t.component(*k, idx);
                        let k0 = ((*k as u64 + n as u64 - (comp as u64 * cof as u64) % n as u64) % n as u64) as u32;
                        (k0, comp, c)
                    })
                    .collect();
                keyed.sort_unstable_by_key(|x| (x.0, x.1));
                let group = p as usize - 1;
                let ok = keyed.chunks(group).all(|ch| {
                    ch.iter().all(|x| x.0 == ch[0].0 && x.2 == ch[0].2)
                        && ch.iter().enumerate().all(|(i, x)| x.1 == i as u32 + 1)
                });
                if !ok {
                    continue;
                }
                let new_terms: Terms = keyed.chunks(group).map(|ch| (ch[0].0 / p, -ch[0].2)).collect();
                drop(keyed);
                self.terms = new_terms;
                self.n = n / p;
                self.terms.sort_unstable_by_key(|t| t.0);
                continue 'outer;
            }
            return;
        }
    }

    /// Coordinates in the basis of `Q(z(n))`; fails unless the conductor divides `n`.
    pub fn embed(&self, n: u32) -> Result<Embedded, CycError> {
        if n == 0 {
            return Err(CycError::InvalidConductor);
        }
        if n % self.n != 0 {
            return Err(CycError::Embedding {
                conductor: self.n,
                target: n,
            });
        }
        let t = table(n);
        let f = n / self.n;
        let mut raw = Terms::new();
        for (k, c) in &self.terms {
            push_expanded(t, k * f, c, &mut raw);
        }
        raw.sort_unstable_by_key(|t| t.0);
        let mut coords: Vec<(u32, Rational)> = Vec::with_capacity(raw.len());
        for (k, c) in raw {
            match coords.last_mut() {
                Some((lk, lc)) if *lk == k => *lc = &*lc + &c,
                _ => coords.push((k, c)),
            }
        }
        coords.retain(|t| !t.1.is_zero());
        Ok(Embedded { conductor: n, coords })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CycNumber {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    pub fn add_ref(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let l = self.n.lcm(&rhs.n);
        let t = table(l);
        let mut raw = Terms::new();
        for x in [self, rhs] {
            let f = l / x.n;
            for (k, c) in &x.terms {
                push_expanded(t, k * f, c, &mut raw);
            }
        }
        Self::from_raw(l, raw)
    }

    pub fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        CycNumber {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.n == 1 {
            return rhs.scale(&self.terms[0].1);
        }
        if rhs.n == 1 {
            return self.scale(&rhs.terms[0].1);
        }
        let l = self.n.lcm(&rhs.n);
        let t = table(l);
        let (f1, f2) = (l / self.n, l / rhs.n);
        let mut raw = Terms::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                let k = ((k1 * f1) as u64 + (k2 * f2) as u64) % l as u64;
                push_expanded(t, k as u32, &(c1 * c2), &mut raw);
            }
        }
        Self::from_raw(l, raw)
    }

    /// `sum_i a_i * b_i`, reduced once at the end.
    pub fn sum_of_products<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a CycNumber, &'a CycNumber)>,
    {
        let pairs: SmallVec<[(&CycNumber, &CycNumber); 8]> = pairs
            .into_iter()
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .collect();
        match pairs.len() {
            0 => return Self::zero(),
            1 => return pairs[0].0.mul_ref(pairs[0].1),
            _ => {}
        }
        let l = pairs.iter().fold(1u32, |acc, (a, b)| acc.lcm(&a.n).lcm(&b.n));
        let t = table(l);
        let mut raw = Terms::new();
        for (a, b) in pairs {
            let (fa, fb) = (l / a.n, l / b.n);
            for (k1, c1) in &a.terms {
                for (k2, c2) in &b.terms {
                    let k = ((k1 * fa) as u64 + (k2 * fb) as u64) % l as u64;
                    push_expanded(t, k as u32, &(c1 * c2), &mut raw);
                }
            }
        }
        Self::from_raw(l, raw)
    }

    /// The Galois automorphism `z(n) -> z(n)^a` for `a` coprime to the conductor.
    pub fn galois(&self, a: i64) -> Self {
        if self.n == 1 {
            return self.clone();
        }
        let n = self.n;
        let a = a.rem_euclid(n as i64) as u64;
        debug_assert_eq!(num_integer::gcd(a, n as u64), 1);
        let t = table(n);
        let mut raw = Terms::new();
        for (k, c) in &self.terms {
            push_expanded(t, ((*k as u64 * a) % n as u64) as u32, c, &mut raw);
        }
        Self::from_raw(n, raw)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip().unwrap()));
        }
        // x^-1 = prod_{s != 1} s(x) / N(x)
        let n = self.n as u64;
        let mut prod = Self::one();
        for a in 2..n {
            if num_integer::gcd(a, n) == 1 {
                prod = prod.mul_ref(&self.galois(a as i64));
            }
        }
        let norm = self.mul_ref(&prod).as_rational().expect("field norm is rational");
        Ok(prod.scale(&norm.recip().unwrap()))
    }

    pub fn div_ref(&self, rhs: &Self) -> Result<Self, CycError> {
        Ok(self.mul_ref(&rhs.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
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

    /// If the value is a root of unity `z(m)^k` with `gcd(k, m) = 1`,
    /// returns its order `m`.
    pub fn root_order(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let n = self.n;
        let m = if n % 2 == 1 { 2 * n } else { n };
        (0..m)
            .find(|&k| *self == Self::zeta(m, k as i64))
            .map(|k| m / num_integer::gcd(k, m))
    }

    /// Canonical binary layout: `u32` LE conductor, `u32` LE term count, then
    /// per term a `u32` LE exponent followed by the coefficient bytes of
    /// [`Rational::write_bytes`].
    pub fn write_bytes(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.n.to_le_bytes());
        out.extend_from_slice(&(self.terms.len() as u32).to_le_bytes());
        for (k, c) in &self.terms {
            out.extend_from_slice(&k.to_le_bytes());
            c.write_bytes(out);
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.write_bytes(&mut v);
        v
    }

    /// Reads the layout written by [`write_bytes`](Self::write_bytes) and
    /// re-canonicalizes.
    pub fn read_bytes(input: &mut &[u8]) -> Option<Self> {
        let rd = |input: &mut &[u8]| -> Option<u32> {
            let v = u32::from_le_bytes(input.get(..4)?.try_into().ok()?);
            *input = &input[4..];
            Some(v)
        };
        let n = rd(input)?;
        let len = rd(input)?;
        if n == 0 {
            return None;
        }
        let mut coords = Vec::with_capacity(len as usize);
        for _ in 0..len {
            let k = rd(input)?;
            let c = Rational::read_bytes(input)?;
            coords.push((k, c));
        }
        Some(Embedded { conductor: n, coords }.canonicalize())
    }
}

impl Default for CycNumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CycNumber {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<Rational> for CycNumber {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a> $tr<&'a CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &CycNumber) -> CycNumber {
                self.$f(rhs)
            }
        }
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                self.$f(&rhs)
            }
        }
    };
}
binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        self.neg_ref()
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        self.neg_ref()
    }
}

/// `c0 + c1*z(n)^1 + ...`: the exponent-0 term is a bare rational, every
/// other term is `coefficient*z(conductor)^exponent`.
impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *k == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*z({})^{k}", self.n)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc({self})")
    }
}

impl FromStr for CycNumber {
    type Err = CycError;

    /// Accepts the `Display` format, with terms of any conductor in any order.
    fn from_str(s: &str) -> Result<Self, CycError> {
        let err = || CycError::Parse(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(err());
        }
        let mut acc = CycNumber::zero();
        for term in s.split(" + ") {
            let term = term.trim();
            let value = match term.split_once("*z(") {
                None => CycNumber::from_rational(term.parse().map_err(|_| err())?),
                Some((coef, rest)) => {
                    let (n, k) = rest.split_once(")^").ok_or_else(err)?;
                    let n: u32 = n.trim().parse().map_err(|_| err())?;
                    let k: i64 = k.trim().parse().map_err(|_| err())?;
                    let c: Rational = coef.parse().map_err(|_| err())?;
                    CycNumber::root_of_unity(n, k).map_err(|_| err())?.scale(&c)
                }
            };
            acc = acc.add_ref(&value);
        }
        Ok(acc)
    }
}

impl serde::Serialize for CycNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for CycNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNumber {
        CycNumber::zeta(n, k)
    }

    #[test]
    fn root_of_unity_examples() {
        assert_eq!(z(1, 0), CycNumber::one());
        assert_eq!(z(8, 2), z(4, 1));
        assert_eq!(z(6, 3), CycNumber::from_int(-1));
        assert_eq!(z(12, 17), z(12, 5));
        assert!(matches!(
            CycNumber::root_of_unity(0, 1),
            Err(CycError::InvalidConductor)
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let one = CycNumber::one();
        let i = z(4, 1);
        assert_eq!((&one + &i) * (&one - &i), CycNumber::from_int(2));
        assert_eq!(z(8, 1).conj(), z(8, 7));
        assert_eq!(
            CycNumber::from_int(2).inv().unwrap(),
            CycNumber::from_rational(Rational::new(1, 2))
        );
        assert!(matches!(CycNumber::zero().inv(), Err(CycError::DivisionByZero)));
    }

    #[test]
    fn sums_of_roots_collapse() {
        // 1 + z3 + z3^2 = 0
        let s = &(&CycNumber::one() + &z(3, 1)) + &z(3, 2);
        assert!(s.is_zero());
        assert_eq!(s.conductor(), 1);
        // z5 + z5^4 is real, lives in Q(sqrt 5) of conductor 5
        let t = &z(5, 1) + &z(5, 4);
        assert_eq!(t.conductor(), 5);
        // sqrt(2) = z8 + z8^7 has conductor 8
        let r2 = &z(8, 1) + &z(8, 7);
        assert_eq!(&r2 * &r2, CycNumber::from_int(2));
        // z12^3 = i
        assert_eq!(z(12, 3), z(4, 1));
        // z(3)*z(5) lives in Q(z15)
        assert_eq!((&z(3, 1) * &z(5, 1)).conductor(), 15);
        assert_eq!(&z(3, 1) * &z(5, 1), z(15, 8));
    }

    #[test]
    fn embed_examples() {
        let e = z(4, 1).embed(8).unwrap();
        assert_eq!(e.coords, vec![(2, Rational::ONE)]);
        assert_eq!(e.canonicalize(), z(8, 2));
        let half3 = CycNumber::from_rational(Rational::new(3, 2));
        let e = half3.embed(240).unwrap();
        assert_eq!(e.canonicalize(), half3);
        assert!(matches!(z(6, 1).embed(4), Err(CycError::Embedding { .. })));
    }

    #[test]
    fn inverse_in_large_field() {
        let x = &(&z(240, 7) + &z(20, 3)) + &CycNumber::from_int(2);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
    }

    #[test]
    fn text_roundtrip() {
        for x in [
            CycNumber::zero(),
            CycNumber::from_rational(Rational::new(-5, 3)),
            &z(8, 3) + &CycNumber::from_rational(Rational::new(1, 2)),
            &z(240, 77) - &z(5, 2),
        ] {
            let s = x.to_string();
            assert_eq!(s.parse::<CycNumber>().unwrap(), x, "{s}");
        }
        assert!("1 + q".parse::<CycNumber>().is_err());
        assert!("1*z(0)^1".parse::<CycNumber>().is_err());
    }

    #[test]
    fn bytes_roundtrip() {
        let x = &z(24, 5) - &CycNumber::from_rational(Rational::new(7, 4));
        let b = x.to_bytes();
        let mut s = b.as_slice();
        assert_eq!(CycNumber::read_bytes(&mut s).unwrap(), x);
        assert!(s.is_empty());
    }

    #[test]
    fn root_order_detects_primitive_roots() {
        assert_eq!(z(6, 1).root_order(), Some(6));
        assert_eq!(z(3, 1).root_order(), Some(3));
        assert_eq!(CycNumber::from_int(-1).root_order(), Some(2));
        assert_eq!(CycNumber::from_int(2).root_order(), None);
    }
}
