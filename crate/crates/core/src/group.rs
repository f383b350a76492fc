//! Closure of a finite permutation group with dense element ids.
//!
//! Element ids index `elements`, which is sorted lexicographically by image
//! array. The ordering is therefore canonical: it depends only on the element
//! set, never on generator order or traversal order, and id 0 is always the
//! identity. Everything downstream (class ordering, orbit minima, canonical
//! tuples) inherits determinism from this.

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use std::collections::{HashMap, HashSet, VecDeque};

pub type ElemId = u32;

/// Largest order for which the dense multiplication table is precomputed.
const MULT_TABLE_MAX: usize = 2048;

pub struct ConjClass {
    /// Sorted element ids; the representative is `members[0]`.
    pub members: Vec<ElemId>,
}

impl ConjClass {
    pub fn representative(&self) -> ElemId {
        self.members[0]
    }
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

pub struct GroupContext {
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, ElemId>,
    generator_ids: Vec<ElemId>,
    inv: Vec<ElemId>,
    mult: Option<Vec<ElemId>>,
    order_of: Vec<u32>,
    exponent: u64,
    derived: Vec<ElemId>,
    classes: Vec<ConjClass>,
    class_of: Vec<u32>,
}

impl GroupContext {
    /// Encloses the generators, assigns canonical ids, and precomputes the
    /// inverse table, conjugacy classes, exponent, and derived subgroup.
    pub fn new(generators: Vec<Permutation>, caps: &Caps) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("no generators given".into()));
        }
        let degree = generators[0].degree();
        if degree == 0 || degree > caps.degree {
            return Err(Error::CapExceeded {
                cap: "degree",
                limit: caps.degree as u64,
                needed: degree as u64,
            });
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    detail: format!(
                        "generator {} has degree {}, expected {}",
                        g,
                        g.degree(),
                        degree
                    ),
                });
            }
        }

        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue: VecDeque<Permutation> = VecDeque::new();
        seen.insert(Permutation::identity(degree));
        queue.push_back(Permutation::identity(degree));
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = x.compose(g);
                if !seen.contains(&y) {
                    if seen.len() >= caps.group_order {
                        return Err(Error::CapExceeded {
                            cap: "group_order",
                            limit: caps.group_order as u64,
                            needed: seen.len() as u64 + 1,
                        });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }

        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort_unstable();
        debug_assert!(elements[0].is_identity());
        let index: HashMap<Permutation, ElemId> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as ElemId))
            .collect();
        let generator_ids: Vec<ElemId> = {
            let mut ids: Vec<ElemId> = generators.iter().map(|g| index[g]).collect();
            ids.sort_unstable();
            ids.dedup();
            ids
        };

        let n = elements.len();
        let inv: Vec<ElemId> = elements.iter().map(|p| index[&p.inverse()]).collect();
        let mult = if n <= MULT_TABLE_MAX {
            let mut t = vec![0 as ElemId; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = index[&elements[a].compose(&elements[b])];
                }
            }
            Some(t)
        } else {
            None
        };

        let order_of: Vec<u32> = elements.iter().map(|p| p.order() as u32).collect();
        let exponent = order_of
            .iter()
            .fold(1u64, |acc, &o| num_integer::lcm(acc, o as u64));

        let mut ctx = GroupContext {
            degree,
            elements,
            index,
            generator_ids,
            inv,
            mult,
            order_of,
            exponent,
            derived: Vec::new(),
            classes: Vec::new(),
            class_of: vec![0; n],
        };
        ctx.build_classes();
        ctx.derived = ctx.derived_of(&ctx.generator_ids.clone());
        Ok(ctx)
    }

    fn build_classes(&mut self) {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut classes: Vec<ConjClass> = Vec::new();
        for start in 0..n as ElemId {
            if assigned[start as usize] {
                continue;
            }
            let mut members = vec![start];
            assigned[start as usize] = true;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for &g in &self.generator_ids.clone() {
                    let y = self.conj(g, x);
                    if !assigned[y as usize] {
                        assigned[y as usize] = true;
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            classes.push(ConjClass { members });
        }
        classes.sort_by_key(|c| (c.members.len(), c.members[0]));
        for (ci, c) in classes.iter().enumerate() {
            for &m in &c.members {
                self.class_of[m as usize] = ci as u32;
            }
        }
        self.classes = classes;
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perm(&self, a: ElemId) -> &Permutation {
        &self.elements[a as usize]
    }

    pub fn id_of(&self, p: &Permutation) -> Option<ElemId> {
        self.index.get(p).copied()
    }

    pub fn identity_id(&self) -> ElemId {
        0
    }

    pub fn generator_ids(&self) -> &[ElemId] {
        &self.generator_ids
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        match &self.mult {
            Some(t) => t[a as usize * self.elements.len() + b as usize],
            None => self.index[&self.elements[a as usize].compose(&self.elements[b as usize])],
        }
    }

    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inv[a as usize]
    }

    /// g x g⁻¹.
    pub fn conj(&self, g: ElemId, x: ElemId) -> ElemId {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: ElemId) -> u32 {
        self.order_of[a as usize]
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Sorted element ids of the derived subgroup [G, G].
    pub fn derived_subgroup(&self) -> &[ElemId] {
        &self.derived
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_of(&self, a: ElemId) -> u32 {
        self.class_of[a as usize]
    }

    /// Subgroup closure of `seed`, returned as sorted ids. Inverses come for
    /// free from finiteness.
    pub fn closure_of(&self, seed: &[ElemId]) -> Vec<ElemId> {
        let mut member = vec![false; self.order()];
        member[0] = true;
        let mut out = vec![0 as ElemId];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &s in seed {
                let y = self.mul(x, s);
                if !member[y as usize] {
                    member[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Derived subgroup of ⟨gens⟩: the normal closure, inside ⟨gens⟩, of the
    /// generator commutators.
    pub fn derived_of(&self, gens: &[ElemId]) -> Vec<ElemId> {
        let mut comm_gens: Vec<ElemId> = Vec::new();
        for &a in gens {
            for &b in gens {
                let c = self.mul(self.mul(a, b), self.inv(self.mul(b, a)));
                if c != 0 {
                    comm_gens.push(c);
                }
            }
        }
        comm_gens.sort_unstable();
        comm_gens.dedup();
        let mut closure = self.closure_of(&comm_gens);
        loop {
            let mut grew = false;
            for &x in &closure.clone() {
                for &g in gens {
                    let y = self.conj(g, x);
                    if closure.binary_search(&y).is_err() {
                        comm_gens.push(y);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
            closure = self.closure_of(&comm_gens);
        }
        closure
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn ctx_from(gens: &[&str], degree: usize) -> GroupContext {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|s| Permutation::parse(s, degree).unwrap())
            .collect();
        GroupContext::new(gens, &Caps::default()).unwrap()
    }

    #[test]
    fn closure_orders_match_hand_counts() {
        // Oracle: |S_3| = 3! and |⟨(1 2)(3 4), (1 3)(2 4)⟩| = 4 by direct listing.
        assert_eq!(ctx_from(&["(1 2)", "(1 2 3)"], 3).order(), 6);
        assert_eq!(ctx_from(&["(1 2)(3 4)", "(1 3)(2 4)"], 4).order(), 4);
        assert_eq!(ctx_from(&["(1 2)", "(1 2 3 4)"], 4).order(), 24);
    }

    #[test]
    fn identity_gets_id_zero() {
        let ctx = ctx_from(&["(1 2)", "(1 2 3)"], 3);
        assert!(ctx.perm(0).is_identity());
        assert_eq!(ctx.identity_id(), 0);
    }

    #[test]
    fn s3_class_sizes() {
        let ctx = ctx_from(&["(1 2)", "(1 2 3)"], 3);
        let sizes: Vec<usize> = ctx.classes().iter().map(|c| c.size()).collect();
        // Sorted by (size, min id): identity, the two 3-cycles, the three
        // transpositions.
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn s4_has_five_classes_with_six_transpositions() {
        let ctx = ctx_from(&["(1 2)", "(1 2 3 4)"], 4);
        assert_eq!(ctx.classes().len(), 5);
        let t = ctx.id_of(&Permutation::parse("(1 2)", 4).unwrap()).unwrap();
        let class = &ctx.classes()[ctx.class_of(t) as usize];
        assert_eq!(class.size(), 6);
        assert!(class
            .members
            .iter()
            .all(|&m| ctx.perm(m).is_transposition()));
    }

    #[test]
    fn multiplication_table_agrees_with_composition() {
        let ctx = ctx_from(&["(1 2)", "(1 2 3 4)"], 4);
        for a in 0..ctx.order() as ElemId {
            for b in 0..ctx.order() as ElemId {
                let via_perm = ctx.perm(a).compose(ctx.perm(b));
                assert_eq!(ctx.perm(ctx.mul(a, b)), &via_perm);
            }
        }
    }

    #[test]
    fn inverse_table() {
        let ctx = ctx_from(&["(1 2)", "(1 2 3 4)"], 4);
        for a in 0..ctx.order() as ElemId {
            assert_eq!(ctx.mul(a, ctx.inv(a)), 0);
        }
    }

    #[test]
    fn conjugation_stays_in_class() {
        let ctx = ctx_from(&["(1 2)", "(1 2 3 4)"], 4);
        for g in 0..ctx.order() as ElemId {
            for x in 0..ctx.order() as ElemId {
                assert_eq!(ctx.class_of(ctx.conj(g, x)), ctx.class_of(x));
            }
        }
    }

    #[test]
    fn exponent_and_derived_subgroup() {
        let s3 = ctx_from(&["(1 2)", "(1 2 3)"], 3);
        assert_eq!(s3.exponent(), 6);
        // [S_3, S_3] = A_3.
        assert_eq!(s3.derived_subgroup().len(), 3);
        let s4 = ctx_from(&["(1 2)", "(1 2 3 4)"], 4);
        assert_eq!(s4.exponent(), 12);
        assert_eq!(s4.derived_subgroup().len(), 12);
        let klein = ctx_from(&["(1 2)(3 4)", "(1 3)(2 4)"], 4);
        assert_eq!(klein.derived_subgroup(), &[0]);
    }

    #[test]
    fn closure_of_subsets() {
        let s4 = ctx_from(&["(1 2)", "(1 2 3 4)"], 4);
        let t12 = s4.id_of(&Permutation::parse("(1 2)", 4).unwrap()).unwrap();
        let t34 = s4.id_of(&Permutation::parse("(3 4)", 4).unwrap()).unwrap();
        assert_eq!(s4.closure_of(&[t12]).len(), 2);
        assert_eq!(s4.closure_of(&[t12, t34]).len(), 4);
        assert_eq!(s4.closure_of(&[]), vec![0]);
    }

    #[test]
    fn group_order_cap_is_enforced() {
        let gens = vec![
            Permutation::parse("(1 2)", 4).unwrap(),
            Permutation::parse("(1 2 3 4)", 4).unwrap(),
        ];
        let caps = Caps {
            group_order: 10,
            ..Caps::default()
        };
        match GroupContext::new(gens, &caps) {
            Err(Error::CapExceeded { cap, .. }) => assert_eq!(cap, "group_order"),
            Err(e) => panic!("expected cap error, got {e:?}"),
            Ok(_) => panic!("expected cap error, got a group"),
        }
    }
}
