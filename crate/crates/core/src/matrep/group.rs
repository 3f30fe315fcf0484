use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::cyclo::CycNumber;

use super::kernel::Kernel;
use super::matrix::CycMatrix;
use super::MatError;

pub const DEFAULT_CAP: usize = 200_000;

/// A fully enumerated element set. Entry values are interned and sorted by
/// canonical bytes, so comparing id sequences orders matrices by their
/// canonical serialization. Elements are stored sorted in that order.
#[derive(Debug)]
pub struct ElementSet {
    dim: usize,
    values: Vec<CycNumber>,
    value_index: FxHashMap<CycNumber, u32>,
    flat: Vec<u32>,
}

impl ElementSet {
    fn finalize(dim: usize, kernel: &Kernel, elements: Vec<Vec<u32>>) -> Self {
        let mut used: Vec<u32> = elements
            .iter()
            .flatten()
            .copied()
            .collect::<FxHashSet<_>>()
            .into_iter()
            .collect();
        let bytes: FxHashMap<u32, Vec<u8>> = used
            .iter()
            .map(|&i| (i, kernel.values[i as usize].to_bytes()))
            .collect();
        used.sort_by(|a, b| bytes[a].cmp(&bytes[b]));
        let remap: FxHashMap<u32, u32> = used.iter().enumerate().map(|(r, &i)| (i, r as u32)).collect();
        let values: Vec<CycNumber> = used.iter().map(|&i| kernel.values[i as usize].clone()).collect();
        let mut mapped: Vec<Vec<u32>> = elements
            .into_iter()
            .map(|e| e.into_iter().map(|i| remap[&i]).collect())
            .collect();
        mapped.sort_unstable();
        mapped.dedup();
        let value_index = values.iter().enumerate().map(|(i, v)| (v.clone(), i as u32)).collect();
        ElementSet {
            dim,
            values,
            value_index,
            flat: mapped.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.flat.len() / (self.dim * self.dim).max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn values(&self) -> &[CycNumber] {
        &self.values
    }

    pub(crate) fn compact(&self, i: usize) -> &[u32] {
        let s = self.dim * self.dim;
        &self.flat[i * s..(i + 1) * s]
    }

    /// The `i`-th element in canonical order.
    pub fn get(&self, i: usize) -> CycMatrix {
        CycMatrix::new(
            self.dim,
            self.dim,
            self.compact(i)
                .iter()
                .map(|&v| self.values[v as usize].clone())
                .collect(),
        )
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = CycMatrix> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    pub(crate) fn position_compact(&self, c: &[u32]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.compact(mid).cmp(c) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn position(&self, m: &CycMatrix) -> Option<usize> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return None;
        }
        let c: Option<Vec<u32>> = m.entries().iter().map(|x| self.value_index.get(x).copied()).collect();
        self.position_compact(&c?)
    }

    pub fn contains(&self, m: &CycMatrix) -> bool {
        self.position(m).is_some()
    }

    pub(crate) fn kernel(&self) -> Kernel {
        Kernel::with_values(self.dim, &self.values)
    }

    /// Serialized form: magic `SRGE`, `u32` LE version, `u32` LE dim,
    /// `u32` LE value count, the values in [`CycNumber::write_bytes`] layout,
    /// `u32` LE element count, then every element as `dim * dim` `u32` LE ids.
    pub fn write_bytes(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(b"SRGE");
        out.extend_from_slice(&1u32.to_le_bytes());
        out.extend_from_slice(&(self.dim as u32).to_le_bytes());
        out.extend_from_slice(&(self.values.len() as u32).to_le_bytes());
        for v in &self.values {
            v.write_bytes(out);
        }
        out.extend_from_slice(&(self.len() as u32).to_le_bytes());
        for id in &self.flat {
            out.extend_from_slice(&id.to_le_bytes());
        }
    }

    pub fn read_bytes(mut input: &[u8]) -> Option<Self> {
        let rd = |input: &mut &[u8]| -> Option<u32> {
            let v = u32::from_le_bytes(input.get(..4)?.try_into().ok()?);
            *input = &input[4..];
            Some(v)
        };
        if input.get(..4)? != b"SRGE" {
            return None;
        }
        input = &input[4..];
        if rd(&mut input)? != 1 {
            return None;
        }
        let dim = rd(&mut input)? as usize;
        let nv = rd(&mut input)? as usize;
        let mut values = Vec::with_capacity(nv);
        for _ in 0..nv {
            values.push(CycNumber::read_bytes(&mut input)?);
        }
        let ne = rd(&mut input)? as usize;
        let total = ne.checked_mul(dim * dim)?;
        let mut flat = Vec::with_capacity(total);
        for _ in 0..total {
            let id = rd(&mut input)?;
            if id as usize >= nv {
                return None;
            }
            flat.push(id);
        }
        if !input.is_empty() {
            return None;
        }
        let value_index = values.iter().enumerate().map(|(i, v)| (v.clone(), i as u32)).collect();
        Some(ElementSet {
            dim,
            values,
            value_index,
            flat,
        })
    }
}

/// A finite group of invertible square matrices given by generators, with an
/// optional enumerated element set.
#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup {
    dim: usize,
    generators: Vec<CycMatrix>,
    elements: Option<Arc<ElementSet>>,
}

/// One orbit of a conjugation action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: CycMatrix,
    pub members: Vec<CycMatrix>,
}

fn check_shape(dim: usize, m: &CycMatrix) -> Result<(), MatError> {
    if m.rows() != dim || m.cols() != dim {
        return Err(MatError::Shape {
            expected: (dim, dim),
            found: (m.rows(), m.cols()),
        });
    }
    Ok(())
}

/// Dimino closure over interned matrices. Returns the elements and the
/// generators that were not already contained when reached.
fn dimino(kernel: &mut Kernel, gens: &[Vec<u32>], cap: usize) -> Result<(Vec<Vec<u32>>, Vec<usize>), MatError> {
    let id = kernel.identity();
    let mut elements: Vec<Vec<u32>> = vec![id.clone()];
    let mut seen: FxHashSet<Vec<u32>> = FxHashSet::default();
    seen.insert(id);
    let mut used: Vec<usize> = Vec::new();
    let mut buf = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        if seen.contains(g) {
            continue;
        }
        used.push(gi);
        let prev_len = elements.len();
        let mut reps: Vec<Vec<u32>> = vec![g.clone()];
        add_coset(kernel, &mut elements, &mut seen, prev_len, g, cap, &mut buf)?;
        let mut pos = 0;
        while pos < reps.len() {
            for &si in &used {
                kernel.matmul(&reps[pos], &gens[si], &mut buf);
                if !seen.contains(&buf) {
                    let r = buf.clone();
                    add_coset(kernel, &mut elements, &mut seen, prev_len, &r, cap, &mut buf)?;
                    reps.push(r);
                }
            }
            pos += 1;
        }
    }
    Ok((elements, used))
}

fn add_coset(
    kernel: &mut Kernel,
    elements: &mut Vec<Vec<u32>>,
    seen: &mut FxHashSet<Vec<u32>>,
    prev_len: usize,
    rep: &[u32],
    cap: usize,
    buf: &mut Vec<u32>,
) -> Result<(), MatError> {
    for h in 0..prev_len {
        kernel.matmul(&elements[h], rep, buf);
        let e = buf.clone();
        if seen.insert(e.clone()) {
            elements.push(e);
        }
        if elements.len() > cap {
            return Err(MatError::ClosureOverflow { cap });
        }
    }
    Ok(())
}

impl FiniteMatrixGroup {
    /// Group generated by `generators`, all of size `dim` and invertible.
    pub fn new(dim: usize, generators: Vec<CycMatrix>) -> Result<Self, MatError> {
        for g in &generators {
            check_shape(dim, g)?;
            if g.det().is_zero() {
                return Err(MatError::Singular);
            }
        }
        Ok(FiniteMatrixGroup {
            dim,
            generators,
            elements: None,
        })
    }

    pub fn trivial(dim: usize) -> Self {
        let mut g = FiniteMatrixGroup {
            dim,
            generators: Vec::new(),
            elements: None,
        };
        let mut k = Kernel::new(dim);
        let id = k.identity();
        g.elements = Some(Arc::new(ElementSet::finalize(dim, &k, vec![id])));
        g
    }

    /// A group with a known element set, e.g. assembled from a coset
    /// description. The set must be the group generated by `generators`;
    /// [`verify_closed`](Self::verify_closed) checks this.
    pub fn from_elements(dim: usize, generators: Vec<CycMatrix>, elements: &[CycMatrix]) -> Result<Self, MatError> {
        let mut k = Kernel::new(dim);
        let mut compact = Vec::with_capacity(elements.len());
        for e in elements {
            check_shape(dim, e)?;
            compact.push(k.compact(e));
        }
        Ok(FiniteMatrixGroup {
            dim,
            generators,
            elements: Some(Arc::new(ElementSet::finalize(dim, &k, compact))),
        })
    }

    /// A group whose elements are the products `a * b` over the given pairs
    /// of lists, e.g. scalars times a base group.
    pub fn from_products(
        dim: usize,
        generators: Vec<CycMatrix>,
        parts: &[(&[CycMatrix], &[CycMatrix])],
    ) -> Result<Self, MatError> {
        let mut k = Kernel::new(dim);
        let mut compact = Vec::new();
        let mut buf = Vec::new();
        for (left, right) in parts {
            let l: Vec<Vec<u32>> = left.iter().map(|m| k.compact(m)).collect::<Vec<_>>();
            let r: Vec<Vec<u32>> = right.iter().map(|m| k.compact(m)).collect::<Vec<_>>();
            for m in left.iter().chain(right.iter()) {
                check_shape(dim, m)?;
            }
            for a in &l {
                for b in &r {
                    k.matmul(a, b, &mut buf);
                    compact.push(buf.clone());
                }
            }
        }
        Ok(FiniteMatrixGroup {
            dim,
            generators,
            elements: Some(Arc::new(ElementSet::finalize(dim, &k, compact))),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[CycMatrix] {
        &self.generators
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    pub fn elements(&self) -> Result<&ElementSet, MatError> {
        self.elements.as_deref().ok_or(MatError::NotEnumerated)
    }

    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(|e| e.len())
    }

    pub fn with_element_set(mut self, set: ElementSet) -> Self {
        self.elements = Some(Arc::new(set));
        self
    }

    /// Dimino closure of the generators; fails once more than `cap` elements
    /// are produced.
    pub fn enumerate(&self, cap: usize) -> Result<Self, MatError> {
        if self.elements.is_some() {
            return Ok(self.clone());
        }
        let mut k = Kernel::new(self.dim);
        let gens: Vec<Vec<u32>> = self.generators.iter().map(|g| k.compact(g)).collect();
        let (elements, _) = dimino(&mut k, &gens, cap)?;
        Ok(FiniteMatrixGroup {
            dim: self.dim,
            generators: self.generators.clone(),
            elements: Some(Arc::new(ElementSet::finalize(self.dim, &k, elements))),
        })
    }

    /// Checks that the stored element set contains the identity and is closed
    /// under multiplication by each generator, and that each generator lies in it.
    pub fn verify_closed(&self) -> Result<bool, MatError> {
        let set = self.elements()?;
        let mut k = set.kernel();
        let id = k.identity();
        if set.position_compact(&id).is_none() {
            return Ok(false);
        }
        let gens: Vec<Vec<u32>> = self.generators.iter().map(|g| k.compact(g)).collect();
        if gens.iter().any(|g| set.position_compact(g).is_none()) {
            return Ok(false);
        }
        let mut buf = Vec::new();
        for i in 0..set.len() {
            for g in &gens {
                k.matmul(set.compact(i), g, &mut buf);
                if set.position_compact(&buf).is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn contains(&self, m: &CycMatrix) -> Result<bool, MatError> {
        Ok(self.elements()?.contains(m))
    }

    /// Containment by membership of generators.
    pub fn is_subgroup_of(&self, other: &Self) -> Result<bool, MatError> {
        let set = other.elements()?;
        Ok(self.generators.iter().all(|g| set.contains(g)))
    }

    /// Every element of `self` lies in `other`.
    pub fn is_contained_elementwise(&self, other: &Self) -> Result<bool, MatError> {
        let set = other.elements()?;
        Ok(self.elements()?.iter().all(|e| set.contains(&e)))
    }

    fn generator_inverses(&self) -> Result<Vec<CycMatrix>, MatError> {
        self.generators.iter().map(CycMatrix::inverse).collect()
    }

    /// `g G g^-1`, enumerated when `self` is.
    pub fn conjugate_by(&self, g: &CycMatrix) -> Result<Self, MatError> {
        check_shape(self.dim, g)?;
        let gi = g.inverse()?;
        let conj = |x: &CycMatrix| g.mul_ref(x).mul_ref(&gi);
        let gens = self.generators.iter().map(conj).collect();
        match &self.elements {
            Some(set) => {
                let els: Vec<CycMatrix> = set.iter().map(|x| conj(&x)).collect();
                Self::from_elements(self.dim, gens, &els)
            }
            None => Self::new(self.dim, gens),
        }
    }

    /// Greedy generating set for an enumerated subset closed under products.
    fn from_closed_subset(dim: usize, set: &ElementSet, members: &[usize]) -> Self {
        let mut k = set.kernel();
        let mut gens_c: Vec<Vec<u32>> = Vec::new();
        let mut generated: FxHashSet<Vec<u32>> = FxHashSet::default();
        generated.insert(k.identity());
        for &i in members {
            let c = set.compact(i).to_vec();
            if generated.contains(&c) {
                continue;
            }
            gens_c.push(c);
            let (els, _) = dimino(&mut k, &gens_c, usize::MAX).expect("no cap");
            generated = els.into_iter().collect();
        }
        let gens = gens_c.iter().map(|c| k.expand(c)).collect();
        let compact: Vec<Vec<u32>> = members.iter().map(|&i| set.compact(i).to_vec()).collect();
        FiniteMatrixGroup {
            dim,
            generators: gens,
            elements: Some(Arc::new(ElementSet::finalize(dim, &k, compact))),
        }
    }

    /// Elements commuting with every generator.
    pub fn centre(&self) -> Result<Self, MatError> {
        let set = self.elements()?;
        let mut k = set.kernel();
        let gens: Vec<Vec<u32>> = self.generators.iter().map(|g| k.compact(g)).collect();
        let (mut ab, mut ba) = (Vec::new(), Vec::new());
        let members: Vec<usize> = (0..set.len())
            .filter(|&i| {
                gens.iter().all(|g| {
                    k.matmul(set.compact(i), g, &mut ab);
                    k.matmul(g, set.compact(i), &mut ba);
                    ab == ba
                })
            })
            .collect();
        Ok(Self::from_closed_subset(self.dim, set, &members))
    }

    /// Whether `self` is a normal subgroup of `group`.
    pub fn is_normal_in(&self, group: &Self) -> Result<bool, MatError> {
        let sub = self.elements()?;
        if let Some(gset) = &group.elements {
            if !sub.iter().all(|h| gset.contains(&h)) {
                return Err(MatError::Containment);
            }
        }
        let mut k = sub.kernel();
        let gens: Vec<Vec<u32>> = group.generators.iter().map(|g| k.compact(g)).collect();
        let invs: Vec<Vec<u32>> = group.generator_inverses()?.iter().map(|g| k.compact(g)).collect();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for i in 0..sub.len() {
            for (g, gi) in gens.iter().zip(&invs) {
                k.matmul(g, sub.compact(i), &mut a);
                k.matmul(&a, gi, &mut b);
                if sub.position_compact(&b).is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Partition of `subset` into orbits under conjugation by the group.
    /// Representatives are the members with least canonical bytes; classes
    /// are sorted by representative.
    pub fn conjugacy_classes(&self, subset: &[CycMatrix]) -> Result<Vec<ConjugacyClass>, MatError> {
        let mut k = Kernel::new(self.dim);
        let gens: Vec<Vec<u32>> = self.generators.iter().map(|g| k.compact(g)).collect();
        let invs: Vec<Vec<u32>> = self.generator_inverses()?.iter().map(|g| k.compact(g)).collect();
        let mut index: FxHashMap<Vec<u32>, usize> = FxHashMap::default();
        let mut items: Vec<Vec<u32>> = Vec::new();
        for m in subset {
            check_shape(self.dim, m)?;
            let c = k.compact(m);
            if !index.contains_key(&c) {
                index.insert(c.clone(), items.len());
                items.push(c);
            }
        }
        let mut class_of = vec![usize::MAX; items.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for start in 0..items.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let cid = classes.len();
            class_of[start] = cid;
            let mut orbit = vec![start];
            let mut pos = 0;
            while pos < orbit.len() {
                let x = items[orbit[pos]].clone();
                for (g, gi) in gens.iter().zip(&invs) {
                    k.matmul(g, &x, &mut a);
                    k.matmul(&a, gi, &mut b);
                    let Some(&j) = index.get(&b) else {
                        return Err(MatError::Partition);
                    };
                    if class_of[j] == usize::MAX {
                        class_of[j] = cid;
                        orbit.push(j);
                    }
                }
                pos += 1;
            }
            classes.push(orbit);
        }
        let mut out: Vec<(Vec<u8>, ConjugacyClass)> = classes
            .into_iter()
            .map(|orbit| {
                let mut members: Vec<(Vec<u8>, CycMatrix)> = orbit
                    .iter()
                    .map(|&i| {
                        let m = k.expand(&items[i]);
                        (m.to_bytes(), m)
                    })
                    .collect();
                members.sort_by(|x, y| x.0.cmp(&y.0));
                let key = members[0].0.clone();
                let representative = members[0].1.clone();
                (
                    key,
                    ConjugacyClass {
                        representative,
                        members: members.into_iter().map(|m| m.1).collect(),
                    },
                )
            })
            .collect();
        out.sort_by(|x, y| x.0.cmp(&y.0));
        Ok(out.into_iter().map(|x| x.1).collect())
    }

    /// Orbit of a column vector and its stabilizer, via Schreier generators.
    /// The stabilizer is returned enumerated.
    pub fn orbit_stabilizer(&self, v: &[CycNumber], cap: usize) -> Result<(Vec<Vec<CycNumber>>, Self), MatError> {
        if v.len() != self.dim {
            return Err(MatError::Shape {
                expected: (self.dim, 1),
                found: (v.len(), 1),
            });
        }
        let mut k = match &self.elements {
            Some(set) => set.kernel(),
            None => Kernel::new(self.dim),
        };
        let gens: Vec<Vec<u32>> = self.generators.iter().map(|g| k.compact(g)).collect();
        let invs: Vec<Vec<u32>> = self.generator_inverses()?.iter().map(|g| k.compact(g)).collect();
        let id = k.identity();
        let start = k.compact_vec(v);
        let mut orbit: Vec<Vec<u32>> = vec![start.clone()];
        let mut where_: FxHashMap<Vec<u32>, usize> = FxHashMap::default();
        where_.insert(start, 0);
        let mut trans: Vec<(Vec<u32>, Vec<u32>)> = vec![(id.clone(), id.clone())];
        let mut schreier: Vec<Vec<u32>> = Vec::new();
        let mut schreier_seen: FxHashSet<Vec<u32>> = FxHashSet::default();
        schreier_seen.insert(id);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        let mut pos = 0;
        while pos < orbit.len() {
            let x = orbit[pos].clone();
            for (s, si) in gens.iter().zip(&invs) {
                let y = k.matvec(s, &x);
                match where_.get(&y) {
                    None => {
                        k.matmul(s, &trans[pos].0, &mut a);
                        k.matmul(&trans[pos].1, si, &mut b);
                        where_.insert(y.clone(), orbit.len());
                        orbit.push(y);
                        trans.push((a.clone(), b.clone()));
                        if orbit.len() > cap {
                            return Err(MatError::ClosureOverflow { cap });
                        }
                    }
                    Some(&j) => {
                        k.matmul(s, &trans[pos].0, &mut a);
                        k.matmul(&trans[j].1, &a, &mut b);
                        if schreier_seen.insert(b.clone()) {
                            schreier.push(b.clone());
                        }
                    }
                }
            }
            pos += 1;
        }
        let (elements, used) = dimino(&mut k, &schreier, cap)?;
        let stab_gens: Vec<CycMatrix> = used.iter().map(|&i| k.expand(&schreier[i])).collect();
        let stab = FiniteMatrixGroup {
            dim: self.dim,
            generators: stab_gens,
            elements: Some(Arc::new(ElementSet::finalize(self.dim, &k, elements))),
        };
        let orbit = orbit.iter().map(|o| k.expand_vec(o)).collect();
        Ok((orbit, stab))
    }

    /// Stabilizer by scanning every element.
    pub fn stabilizer_by_filter(&self, v: &[CycNumber]) -> Result<Self, MatError> {
        let set = self.elements()?;
        let mut k = set.kernel();
        let cv = k.compact_vec(v);
        let members: Vec<usize> = (0..set.len())
            .filter(|&i| k.matvec(set.compact(i), &cv) == cv)
            .collect();
        Ok(Self::from_closed_subset(self.dim, set, &members))
    }

    /// Inverse of an enumerated element.
    pub fn inverse_of(&self, m: &CycMatrix) -> Result<CycMatrix, MatError> {
        let set = self.elements()?;
        let mut k = set.kernel();
        let c = k.compact(m);
        k.finite_order_inverse(&c, set.len() + 1)
            .map(|inv| k.expand(&inv))
            .ok_or(MatError::Containment)
    }

    /// Subgroup generated by the given elements, enumerated.
    pub fn subgroup(&self, gens: Vec<CycMatrix>, cap: usize) -> Result<Self, MatError> {
        Self::new(self.dim, gens)?.enumerate(cap)
    }

    /// Whether two enumerated groups have the same elements.
    pub fn same_elements(&self, other: &Self) -> Result<bool, MatError> {
        let (a, b) = (self.elements()?, other.elements()?);
        Ok(a.len() == b.len() && a.iter().all(|x| b.contains(&x)))
    }

    /// Maps every element through `f` and rebuilds with mapped generators.
    pub fn map_elements(&self, dim: usize, f: impl Fn(&CycMatrix) -> CycMatrix) -> Result<Self, MatError> {
        let gens = self.generators.iter().map(&f).collect();
        let els: Vec<CycMatrix> = self.elements()?.iter().map(|x| f(&x)).collect();
        Self::from_elements(dim, gens, &els)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNumber {
        CycNumber::zeta(n, k)
    }

    fn dihedral(d: u32) -> FiniteMatrixGroup {
        let r = CycMatrix::diag(&[z(d, 1), z(d, -1)]);
        let s = CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        FiniteMatrixGroup::new(2, vec![r, s]).unwrap()
    }

    #[test]
    fn dimino_orders() {
        for d in [1, 2, 3, 6, 12] {
            let g = dihedral(d).enumerate(DEFAULT_CAP).unwrap();
            assert_eq!(g.order(), Some(2 * d as usize), "d = {d}");
            assert!(g.verify_closed().unwrap());
        }
        let t = FiniteMatrixGroup::new(2, vec![CycMatrix::identity(2)]).unwrap();
        assert_eq!(t.enumerate(10).unwrap().order(), Some(1));
    }

    #[test]
    fn cap_overflow() {
        let e = dihedral(12).enumerate(5).unwrap_err();
        assert_eq!(e, MatError::ClosureOverflow { cap: 5 });
    }

    #[test]
    fn generator_order_does_not_matter() {
        let g = dihedral(6);
        let mut gens = g.generators().to_vec();
        gens.reverse();
        let h = FiniteMatrixGroup::new(2, gens).unwrap();
        let (a, b) = (g.enumerate(100).unwrap(), h.enumerate(100).unwrap());
        let la: Vec<_> = a.elements().unwrap().iter().collect();
        let lb: Vec<_> = b.elements().unwrap().iter().collect();
        assert_eq!(la, lb);
    }

    #[test]
    fn centre_of_dihedral() {
        let g = dihedral(6).enumerate(100).unwrap();
        let c = g.centre().unwrap();
        assert_eq!(c.order(), Some(2));
        assert!(c.is_normal_in(&g).unwrap());
    }

    #[test]
    fn orbit_stabilizer_agrees_with_filter() {
        let g = dihedral(6).enumerate(100).unwrap();
        let v = vec![CycNumber::one(), CycNumber::one()];
        let (orbit, stab) = g.orbit_stabilizer(&v, 100).unwrap();
        assert_eq!(orbit.len() * stab.order().unwrap(), 12);
        let f = g.stabilizer_by_filter(&v).unwrap();
        assert!(stab.same_elements(&f).unwrap());
    }

    #[test]
    fn classes_of_reflections() {
        let g = dihedral(6).enumerate(100).unwrap();
        let refl: Vec<CycMatrix> = g
            .elements()
            .unwrap()
            .iter()
            .filter(|m| m.det() == CycNumber::from_int(-1))
            .collect();
        let classes = g.conjugacy_classes(&refl).unwrap();
        assert_eq!(classes.len(), 2);
        let partial = &refl[..1];
        assert_eq!(g.conjugacy_classes(partial), Err(MatError::Partition));
    }

    #[test]
    fn cache_round_trip() {
        let g = dihedral(12).enumerate(100).unwrap();
        let mut bytes = Vec::new();
        g.elements().unwrap().write_bytes(&mut bytes);
        let back = ElementSet::read_bytes(&bytes).unwrap();
        let h = FiniteMatrixGroup::new(2, g.generators().to_vec())
            .unwrap()
            .with_element_set(back);
        assert!(g.same_elements(&h).unwrap());
    }
}
