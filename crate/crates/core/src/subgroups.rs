//! The class setting (distinguished conjugacy classes with multiplicities)
//! and the registry of class-generated subgroups.
//!
//! A subgroup is *class-generated* when it is generated by a subset of the
//! union of the distinguished classes. The registry enumerates all of them by
//! closing one adjoined class element at a time, which reaches every such
//! subgroup because ⟨s₁, …, s_k⟩ grows through the chain of prefixes.
//!
//! A record is flagged `d_generated` when the subgroup is trivial or meets
//! every distinguished class; those are exactly the subgroups that can occur
//! as the group generated by a component tuple.

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{ElemId, GroupContext};
use crate::perm::Permutation;
use std::collections::HashMap;
use std::sync::Mutex;

/// The distinguished classes D together with the multiplicity vector ξ.
pub struct ClassData {
    /// Indices into `ctx.classes()`, in input order.
    pub class_ids: Vec<u32>,
    /// ξ(c) ≥ 1 per class, parallel to `class_ids`.
    pub xi: Vec<u32>,
    /// Sorted union of all class members: the tuple-entry alphabet.
    pub support: Vec<ElemId>,
    /// Entry element -> index into `class_ids`.
    pub class_of_support: HashMap<ElemId, usize>,
}

impl ClassData {
    pub fn new(ctx: &GroupContext, reps: &[Permutation], xi: Vec<u32>) -> Result<Self> {
        if reps.is_empty() {
            return Err(Error::InvalidInput("no distinguished classes given".into()));
        }
        if xi.len() != reps.len() {
            return Err(Error::LengthMismatch {
                expected: reps.len(),
                got: xi.len(),
            });
        }
        if let Some(i) = xi.iter().position(|&x| x == 0) {
            return Err(Error::InvalidInput(format!(
                "multiplicity for class {i} must be at least 1"
            )));
        }
        let mut class_ids = Vec::with_capacity(reps.len());
        for rep in reps {
            let id = ctx.id_of(rep).ok_or_else(|| Error::NotAMember {
                element: rep.to_string(),
                container: "the group".into(),
            })?;
            if id == ctx.identity_id() {
                return Err(Error::InvalidInput(
                    "the identity class cannot be distinguished".into(),
                ));
            }
            let ci = ctx.class_of(id);
            if class_ids.contains(&ci) {
                return Err(Error::InvalidInput(format!(
                    "class of {rep} listed twice"
                )));
            }
            class_ids.push(ci);
        }
        let mut support: Vec<ElemId> = Vec::new();
        let mut class_of_support = HashMap::new();
        for (di, &ci) in class_ids.iter().enumerate() {
            for &m in &ctx.classes()[ci as usize].members {
                support.push(m);
                class_of_support.insert(m, di);
            }
        }
        support.sort_unstable();
        if ctx.closure_of(&support).len() != ctx.order() {
            return Err(Error::InvalidInput(
                "distinguished classes do not generate the group".into(),
            ));
        }
        Ok(ClassData {
            class_ids,
            xi,
            support,
            class_of_support,
        })
    }

    /// Tuple length of a degree-n element: n · Σ_c ξ(c).
    pub fn tuple_len(&self, n: u32) -> usize {
        n as usize * self.xi.iter().sum::<u32>() as usize
    }

    /// Entries required from class `di` at degree n.
    pub fn entries_for(&self, di: usize, n: u32) -> u32 {
        n * self.xi[di]
    }

    pub fn num_classes(&self) -> usize {
        self.class_ids.len()
    }
}

/// One H-conjugacy class inside a distinguished class.
pub struct HClass {
    /// Index of the distinguished class containing this one.
    pub tau: usize,
    /// Sorted member ids.
    pub members: Vec<ElemId>,
}

pub type SubgroupId = u32;

pub struct SubgroupRecord {
    pub id: SubgroupId,
    /// Sorted element ids.
    pub elements: Vec<ElemId>,
    pub generators: Vec<ElemId>,
    /// H-classes of the distinguished-class intersections, ordered by
    /// (containing class, size, minimal member).
    pub d_classes: Vec<HClass>,
    /// |D_H| − |D| when the subgroup meets every distinguished class.
    pub omega: Option<u32>,
    pub d_generated: bool,
    /// Entry element -> index into `d_classes`.
    pub elem_class: HashMap<ElemId, usize>,
}

impl SubgroupRecord {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains_element(&self, x: ElemId) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// μ_H of a tuple: entry counts per H-class. Entries must lie in the
    /// distinguished-class support of the subgroup.
    pub fn multidiscriminant(&self, ctx: &GroupContext, tuple: &[ElemId]) -> Result<Vec<u32>> {
        let mut mu = vec![0u32; self.d_classes.len()];
        for &e in tuple {
            match self.elem_class.get(&e) {
                Some(&k) => mu[k] += 1,
                None => {
                    return Err(Error::EntryNotInSubgroup {
                        entry: ctx.perm(e).to_string(),
                    })
                }
            }
        }
        Ok(mu)
    }

    /// Number of H-classes lying over each distinguished class.
    pub fn fiber_sizes(&self, num_d: usize) -> Vec<usize> {
        let mut k = vec![0usize; num_d];
        for hc in &self.d_classes {
            k[hc.tau] += 1;
        }
        k
    }
}

fn split_classes(
    ctx: &GroupContext,
    elements: &[ElemId],
    generators: &[ElemId],
    classes: &ClassData,
) -> Vec<HClass> {
    let mut out: Vec<HClass> = Vec::new();
    for (di, &ci) in classes.class_ids.iter().enumerate() {
        let inside: Vec<ElemId> = ctx.classes()[ci as usize]
            .members
            .iter()
            .copied()
            .filter(|m| elements.binary_search(m).is_ok())
            .collect();
        let mut claimed: HashMap<ElemId, bool> = HashMap::new();
        let mut fibers: Vec<HClass> = Vec::new();
        for &x in &inside {
            if claimed.contains_key(&x) {
                continue;
            }
            let mut members = vec![x];
            claimed.insert(x, true);
            let mut i = 0;
            while i < members.len() {
                let y = members[i];
                for &g in generators {
                    let z = ctx.conj(g, y);
                    if !claimed.contains_key(&z) {
                        claimed.insert(z, true);
                        members.push(z);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            fibers.push(HClass { tau: di, members });
        }
        fibers.sort_by_key(|f| (f.members.len(), f.members[0]));
        out.extend(fibers);
    }
    out
}

fn make_record(
    ctx: &GroupContext,
    classes: &ClassData,
    id: SubgroupId,
    elements: Vec<ElemId>,
    generators: Vec<ElemId>,
) -> SubgroupRecord {
    let d_classes = split_classes(ctx, &elements, &generators, classes);
    let mut met = vec![false; classes.num_classes()];
    for hc in &d_classes {
        met[hc.tau] = true;
    }
    let meets_all = met.iter().all(|&b| b);
    let omega = if meets_all {
        Some((d_classes.len() - classes.num_classes()) as u32)
    } else {
        None
    };
    let d_generated = elements.len() == 1 || meets_all;
    let mut elem_class = HashMap::new();
    for (k, hc) in d_classes.iter().enumerate() {
        for &m in &hc.members {
            elem_class.insert(m, k);
        }
    }
    SubgroupRecord {
        id,
        elements,
        generators,
        d_classes,
        omega,
        d_generated,
        elem_class,
    }
}

pub struct SubgroupRegistry {
    records: Vec<SubgroupRecord>,
    by_elements: HashMap<Vec<ElemId>, SubgroupId>,
    join_cache: Mutex<HashMap<(SubgroupId, SubgroupId), SubgroupId>>,
}

impl SubgroupRegistry {
    /// Enumerates every class-generated subgroup.
    pub fn build(ctx: &GroupContext, classes: &ClassData, caps: &Caps) -> Result<Self> {
        let mut sets: Vec<(Vec<ElemId>, Vec<ElemId>)> = Vec::new();
        let mut seen: HashMap<Vec<ElemId>, usize> = HashMap::new();
        let trivial = (vec![ctx.identity_id()], Vec::new());
        seen.insert(trivial.0.clone(), 0);
        sets.push(trivial);
        let mut i = 0;
        while i < sets.len() {
            let (elements, gens) = sets[i].clone();
            for &y in &classes.support {
                if elements.binary_search(&y).is_ok() {
                    continue;
                }
                let mut new_gens = gens.clone();
                new_gens.push(y);
                let closure = ctx.closure_of(&new_gens);
                if !seen.contains_key(&closure) {
                    if sets.len() >= caps.subgroup_count {
                        return Err(Error::CapExceeded {
                            cap: "subgroup_count",
                            limit: caps.subgroup_count as u64,
                            needed: sets.len() as u64 + 1,
                        });
                    }
                    seen.insert(closure.clone(), sets.len());
                    sets.push((closure, new_gens));
                }
            }
            i += 1;
        }
        sets.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        let mut records = Vec::with_capacity(sets.len());
        let mut by_elements = HashMap::new();
        for (id, (elements, gens)) in sets.into_iter().enumerate() {
            by_elements.insert(elements.clone(), id as SubgroupId);
            records.push(make_record(ctx, classes, id as SubgroupId, elements, gens));
        }
        Ok(SubgroupRegistry {
            records,
            by_elements,
            join_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: SubgroupId) -> &SubgroupRecord {
        &self.records[id as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &SubgroupRecord> {
        self.records.iter()
    }

    /// The trivial subgroup sorts first.
    pub fn trivial_id(&self) -> SubgroupId {
        debug_assert_eq!(self.records[0].order(), 1);
        0
    }

    pub fn find_by_elements(&self, sorted_elements: &[ElemId]) -> Option<SubgroupId> {
        self.by_elements.get(sorted_elements).copied()
    }

    /// Subgroup generated by the entries of a tuple. Entries must come from
    /// the distinguished-class support, so the closure is class-generated and
    /// always present.
    pub fn subgroup_of_tuple(&self, ctx: &GroupContext, tuple: &[ElemId]) -> Option<SubgroupId> {
        self.find_by_elements(&ctx.closure_of(tuple))
    }

    /// a ⊇ b.
    pub fn contains(&self, a: SubgroupId, b: SubgroupId) -> bool {
        let (ae, be) = (&self.records[a as usize].elements, &self.records[b as usize].elements);
        if be.len() > ae.len() {
            return false;
        }
        be.iter().all(|x| ae.binary_search(x).is_ok())
    }

    pub fn join(&self, ctx: &GroupContext, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(&j) = self.join_cache.lock().unwrap().get(&key) {
            return j;
        }
        let mut gens = self.records[key.0 as usize].generators.clone();
        gens.extend_from_slice(&self.records[key.1 as usize].elements);
        let closure = ctx.closure_of(&gens);
        let j = self
            .find_by_elements(&closure)
            .expect("join of class-generated subgroups is class-generated");
        self.join_cache.lock().unwrap().insert(key, j);
        j
    }
}

/// Cosets of the derived subgroup, with multiplication. Coset ids are ordered
/// by minimal member, so the identity coset is always 0.
pub struct Abelianization {
    pub cosets: Vec<Vec<ElemId>>,
    coset_of: HashMap<ElemId, u32>,
    mult: Vec<u32>,
}

impl Abelianization {
    pub fn new(ctx: &GroupContext, record: &SubgroupRecord) -> Self {
        let derived = if record.generators.is_empty() {
            vec![ctx.identity_id()]
        } else {
            ctx.derived_of(&record.generators)
        };
        let mut coset_of: HashMap<ElemId, u32> = HashMap::new();
        let mut cosets: Vec<Vec<ElemId>> = Vec::new();
        for &x in &record.elements {
            if coset_of.contains_key(&x) {
                continue;
            }
            let mut members: Vec<ElemId> = derived.iter().map(|&d| ctx.mul(x, d)).collect();
            members.sort_unstable();
            debug_assert_eq!(members[0], x);
            let id = cosets.len() as u32;
            for &m in &members {
                coset_of.insert(m, id);
            }
            cosets.push(members);
        }
        let n = cosets.len();
        let mut mult = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[a * n + b] = coset_of[&ctx.mul(cosets[a][0], cosets[b][0])];
            }
        }
        Abelianization {
            cosets,
            coset_of,
            mult,
        }
    }

    pub fn order(&self) -> usize {
        self.cosets.len()
    }

    pub fn coset_of(&self, x: ElemId) -> Option<u32> {
        self.coset_of.get(&x).copied()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mult[a as usize * self.cosets.len() + b as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = 0u32;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut acc = a;
        let mut n = 1u64;
        while acc != 0 {
            acc = self.mul(acc, a);
            n += 1;
        }
        n
    }
}
