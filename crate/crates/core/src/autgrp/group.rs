use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{AffineAlgMap, AutError, AutResult, MapKey};
use crate::gfield::FieldCtx;

pub const DEFAULT_CLOSURE_BOUND: usize = 100_000;

const MAX_COMPONENT_DEGREE: u64 = 1 << 12;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A finite group of plane maps, closed under composition. The product
/// `g * h` is the point map `P ↦ h(g(P))`.
#[derive(Clone, Debug)]
pub struct AutGroupTable {
    elements: Vec<AffineAlgMap>,
    index: HashMap<MapKey, usize>,
    generators: Vec<usize>,
    /// `(element, generator)` whose product first produced each element.
    parent: Vec<Option<(usize, usize)>>,
    bound: usize,
}

impl AutGroupTable {
    fn trivial(ctx: &Arc<FieldCtx>, bound: usize) -> Self {
        let id = AffineAlgMap::identity(ctx);
        let mut index = HashMap::new();
        index.insert(id.key(), 0);
        AutGroupTable { elements: vec![id], index, generators: Vec::new(), parent: vec![None], bound }
    }

    fn insert(&mut self, m: AffineAlgMap, parent: (usize, usize)) -> AutResult<bool> {
        let key = m.key();
        if self.index.contains_key(&key) {
            return Ok(false);
        }
        if self.elements.len() >= self.bound {
            return Err(AutError::BoundExceeded(self.bound));
        }
        self.index.insert(key, self.elements.len());
        self.elements.push(m);
        self.parent.push(Some(parent));
        Ok(true)
    }

    /// Order of `g` as a permutation, or an error when its powers never
    /// return to the identity.
    fn invertible_order(&self, g: &AffineAlgMap) -> AutResult<usize> {
        let mut seen = std::collections::HashSet::new();
        let mut cur = g.clone();
        for k in 1..=self.bound {
            if cur.is_identity() {
                return Ok(k);
            }
            let too_big = [&cur.x_image, &cur.y_image]
                .iter()
                .any(|c| c.total_degree().unwrap_or(0) > MAX_COMPONENT_DEGREE);
            if too_big || !seen.insert(cur.key()) {
                return Err(AutError::NotInvertible(g.to_text()));
            }
            cur = cur.then(g)?;
        }
        Err(AutError::BoundExceeded(self.bound))
    }

    /// Adds a generator and restores closure.
    fn adjoin(&mut self, g: AffineAlgMap) -> AutResult<()> {
        if self.index.contains_key(&g.key()) {
            return Ok(());
        }
        self.invertible_order(&g)?;
        let g_slot = self.generators.len();
        let old = self.elements.len();
        self.insert(g.clone(), (0, g_slot))?;
        let g_idx = self.elements.len() - 1;
        self.generators.push(g_idx);
        for i in 1..old {
            let prod = self.elements[i].then(&g)?;
            self.insert(prod, (i, g_slot))?;
        }
        let mut cursor = old;
        while cursor < self.elements.len() {
            for slot in 0..self.generators.len() {
                let gen = &self.elements[self.generators[slot]];
                let prod = self.elements[cursor].then(gen)?;
                self.insert(prod, (cursor, slot))?;
            }
            cursor += 1;
        }
        Ok(())
    }

    pub fn closure(ctx: &Arc<FieldCtx>, gens: &[AffineAlgMap]) -> AutResult<Self> {
        Self::closure_bounded(ctx, gens, DEFAULT_CLOSURE_BOUND)
    }

    pub fn closure_bounded(ctx: &Arc<FieldCtx>, gens: &[AffineAlgMap], bound: usize) -> AutResult<Self> {
        let mut t = Self::trivial(ctx, bound);
        for g in gens {
            if **g.ctx() != **ctx {
                return Err(AutError::Poly(crate::polyring::PolyError::CtxMismatch));
            }
            t.adjoin(g.clone())?;
        }
        Ok(t)
    }

    /// The group generated by a set of maps, picking generators greedily.
    pub fn from_set(ctx: &Arc<FieldCtx>, set: &[AffineAlgMap]) -> AutResult<Self> {
        let mut t = Self::trivial(ctx, DEFAULT_CLOSURE_BOUND);
        for m in set {
            t.adjoin(m.clone())?;
        }
        Ok(t)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.elements[0].ctx()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[AffineAlgMap] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &AffineAlgMap {
        &self.elements[i]
    }

    pub fn generators(&self) -> Vec<&AffineAlgMap> {
        self.generators.iter().map(|&i| &self.elements[i]).collect()
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, m: &AffineAlgMap) -> Option<usize> {
        self.index.get(&m.key()).copied()
    }

    pub fn contains(&self, m: &AffineAlgMap) -> bool {
        self.index.contains_key(&m.key())
    }

    /// Element `i` as a word in the generator slots.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((prev, slot)) = self.parent[i] {
            w.push(slot);
            i = prev;
        }
        w.reverse();
        w
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let prod = self.elements[i].then(&self.elements[j]).expect("same field");
        self.index_of(&prod).expect("group is closed")
    }

    pub fn power(&self, i: usize, k: u64) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, i))
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut acc = i;
        let mut k = 1;
        while acc != 0 {
            acc = self.mul(acc, i);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<u64> {
        (0..self.order()).map(|i| self.element_order(i)).collect()
    }

    pub fn exponent(&self) -> u64 {
        self.element_orders().into_iter().fold(1, |l, o| l / gcd(l, o) * o)
    }

    pub fn order_histogram(&self) -> BTreeMap<u64, usize> {
        let mut hist = BTreeMap::new();
        for o in self.element_orders() {
            *hist.entry(o).or_insert(0) += 1;
        }
        hist
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.power(i, self.element_order(i) - 1)
    }

    pub fn commutes(&self, i: usize, j: usize) -> bool {
        self.mul(i, j) == self.mul(j, i)
    }

    /// `i^-1 j^-1 i j`.
    pub fn commutator(&self, i: usize, j: usize) -> usize {
        let a = self.mul(self.inverse(i), self.inverse(j));
        self.mul(self.mul(a, i), j)
    }

    /// `g^-1 i g`.
    pub fn conjugate(&self, i: usize, g: usize) -> usize {
        self.mul(self.mul(self.inverse(g), i), g)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.commutes(a, b)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.generators.iter().all(|&g| self.commutes(i, g))).collect()
    }

    pub fn centralizer(&self, i: usize) -> Vec<usize> {
        (0..self.order()).filter(|&j| self.commutes(i, j)).collect()
    }

    pub fn subgroup(&self, members: &[usize]) -> AutResult<AutGroupTable> {
        let maps: Vec<AffineAlgMap> = members.iter().map(|&i| self.elements[i].clone()).collect();
        Self::from_set(self.ctx(), &maps)
    }

    /// Whether `sub` is contained in this group.
    pub fn contains_group(&self, sub: &AutGroupTable) -> bool {
        sub.generators().iter().all(|g| self.contains(g))
    }

    /// Whether element `g` of this group normalizes `sub`.
    pub fn normalizes(&self, g: usize, sub: &AutGroupTable) -> bool {
        sub.generators().iter().all(|h| {
            self.index_of(h).is_some_and(|hi| sub.contains(&self.elements[self.conjugate(hi, g)]))
        })
    }

    pub fn is_normal(&self, sub: &AutGroupTable) -> bool {
        self.contains_group(sub) && self.generators.iter().all(|&g| self.normalizes(g, sub))
    }

    pub fn normalizer(&self, sub: &AutGroupTable) -> Vec<usize> {
        (0..self.order()).filter(|&g| self.normalizes(g, sub)).collect()
    }

    /// Normal closure of the generator commutators.
    pub fn commutator_subgroup(&self) -> AutResult<AutGroupTable> {
        let g = &self.generators;
        let mut seeds: Vec<AffineAlgMap> = Vec::new();
        for &a in g {
            for &b in g {
                seeds.push(self.elements[self.commutator(a, b)].clone());
            }
        }
        let mut h = Self::from_set(self.ctx(), &seeds)?;
        loop {
            let mut extra = Vec::new();
            for m in h.generators() {
                let mi = self.index_of(m).expect("subgroup");
                for &x in g {
                    let c = &self.elements[self.conjugate(mi, x)];
                    if !h.contains(c) {
                        extra.push(c.clone());
                    }
                }
            }
            if extra.is_empty() {
                return Ok(h);
            }
            for m in extra {
                h.adjoin(m)?;
            }
        }
    }

    /// Cosets of a normal subgroup, each as a sorted index list; the
    /// result is ordered by least representative.
    pub fn cosets(&self, sub: &AutGroupTable) -> Vec<Vec<usize>> {
        let sub_idx: Vec<usize> = sub.elements().iter().map(|m| self.index_of(m).expect("subgroup")).collect();
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> = sub_idx.iter().map(|&s| self.mul(g, s)).collect();
            coset.sort_unstable();
            for &c in &coset {
                seen[c] = true;
            }
            out.push(coset);
        }
        out
    }

    /// Order of `g` modulo the normal subgroup `sub`.
    pub fn order_modulo(&self, g: usize, sub: &AutGroupTable) -> u64 {
        let mut acc = g;
        let mut k = 1;
        while !sub.contains(&self.elements[acc]) {
            acc = self.mul(acc, g);
            k += 1;
        }
        k
    }
}
