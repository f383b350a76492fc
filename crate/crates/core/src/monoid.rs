//! The graded commutative monoid of braid-orbit components.
//!
//! Degree-n elements are orbits of product-one tuples whose per-class entry
//! counts equal n·ξ; the product of two components is the orbit of the
//! concatenation. Each degree is built in one of two modes:
//!
//! - `Brute`: every valid tuple is generated and the set is partitioned into
//!   orbits by BFS. Canonical representatives (orbit minima) are exact.
//! - `Closure`: used once the tuple space outgrows the caps. Every component
//!   of such a degree is a product of a lower component and a
//!   non-factorizable one, so the degree is generated by multiplying the
//!   table by its non-factorizable members. Products are deduplicated by the
//!   (generated subgroup, multidiscriminant) key, which is verified to be
//!   injective on components at every brute degree; if that verification
//!   fails anywhere the closure mode refuses to run.
//!
//! Two caveats are tracked honestly in the table flags rather than hidden:
//! closure degrees assume no new non-factorizable component appears beyond
//! the last brute degree (`nonfact_complete` records whether the proven
//! degree bound for non-factorizables was actually reached), and the key
//! injectivity seen at brute degrees is extrapolated (`key_certified`).

use crate::braid::{self, Alphabet, GTuple};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{ElemId, GroupContext};
use crate::subgroups::{ClassData, SubgroupId, SubgroupRegistry};
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize)]
pub struct CompRef {
    pub degree: u32,
    pub index: u32,
}

pub struct Component {
    pub subgroup: SubgroupId,
    /// Entry counts per H-class of the generated subgroup.
    pub mu: Vec<u32>,
    /// Orbit minimum; present exactly at brute degrees.
    pub canonical: Option<GTuple>,
    /// Some member of the orbit (equals the canonical tuple when known).
    pub rep: GTuple,
    pub orbit_size: Option<u64>,
    pub non_factorizable: bool,
}

impl Component {
    pub fn key(&self) -> (SubgroupId, &[u32]) {
        (self.subgroup, &self.mu)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LevelMode {
    Brute,
    Closure,
}

pub struct DegreeLevel {
    pub mode: LevelMode,
    pub comps: Vec<Component>,
    by_canon: HashMap<GTuple, u32>,
    by_key: HashMap<(SubgroupId, Vec<u32>), u32>,
    /// Whether (subgroup, μ) distinguishes the components of this level.
    pub key_injective: bool,
}

impl DegreeLevel {
    fn index_maps(comps: &[Component]) -> (HashMap<GTuple, u32>, HashMap<(SubgroupId, Vec<u32>), u32>, bool) {
        let mut by_canon = HashMap::new();
        let mut by_key = HashMap::new();
        let mut injective = true;
        for (i, c) in comps.iter().enumerate() {
            if let Some(canon) = &c.canonical {
                by_canon.insert(canon.clone(), i as u32);
            }
            if by_key.insert((c.subgroup, c.mu.clone()), i as u32).is_some() {
                injective = false;
            }
        }
        (by_canon, by_key, injective)
    }
}

pub struct MonoidTable {
    pub ctx: GroupContext,
    pub classes: ClassData,
    pub registry: SubgroupRegistry,
    pub levels: Vec<DegreeLevel>,
    pub max_degree: u32,
    pub caps: Caps,
    /// Largest exhaustively enumerated degree (0 when none).
    pub brute_max: u32,
    pub closure_used: bool,
    /// (subgroup, μ) injective at every brute degree.
    pub key_certified: bool,
    /// Product keys matched the enumerated components at every brute degree.
    pub crosscheck_ok: bool,
    pub observed_nonfact_max: u32,
    /// Proven upper bound for degrees of non-factorizable components.
    pub nonfact_bound: u64,
    /// True when brute enumeration reached the proven bound, so the
    /// non-factorizable list is complete rather than empirically complete.
    pub nonfact_complete: bool,
}

impl MonoidTable {
    pub fn comp(&self, r: CompRef) -> &Component {
        &self.levels[r.degree as usize].comps[r.index as usize]
    }

    pub fn comps_at(&self, degree: u32) -> impl Iterator<Item = (CompRef, &Component)> {
        self.levels[degree as usize]
            .comps
            .iter()
            .enumerate()
            .map(move |(i, c)| {
                (
                    CompRef {
                        degree,
                        index: i as u32,
                    },
                    c,
                )
            })
    }

    pub fn all_comps(&self) -> impl Iterator<Item = (CompRef, &Component)> {
        (0..=self.max_degree).flat_map(move |n| self.comps_at(n))
    }

    pub fn identity(&self) -> CompRef {
        CompRef {
            degree: 0,
            index: 0,
        }
    }

    pub fn non_factorizable_all(&self) -> Vec<CompRef> {
        self.all_comps()
            .filter(|(_, c)| c.non_factorizable)
            .map(|(r, _)| r)
            .collect()
    }

    fn key_of_concat(&self, rep: &[ElemId], sub_a: SubgroupId, sub_b: SubgroupId) -> Result<(SubgroupId, Vec<u32>)> {
        let join = self.registry.join(&self.ctx, sub_a, sub_b);
        let mu = self.registry.get(join).multidiscriminant(&self.ctx, rep)?;
        Ok((join, mu))
    }

    /// Component of the concatenated tuple. At certified tables this is a key
    /// lookup; otherwise the concatenation is canonicalized by an orbit walk,
    /// which requires the result degree to be a brute level.
    pub fn multiply(&self, a: CompRef, b: CompRef) -> Result<CompRef> {
        let n = a.degree + b.degree;
        if n > self.max_degree {
            return Err(Error::TableTooSmall {
                needed: n,
                have: self.max_degree,
            });
        }
        let (ca, cb) = (self.comp(a), self.comp(b));
        let mut rep = ca.rep.clone();
        rep.extend_from_slice(&cb.rep);
        if self.key_certified {
            let key = self.key_of_concat(&rep, ca.subgroup, cb.subgroup)?;
            let level = &self.levels[n as usize];
            let idx = level.by_key.get(&key).copied().ok_or_else(|| {
                Error::InsufficientData {
                    detail: format!("product key missing at degree {n}; table inconsistent"),
                }
            })?;
            return Ok(CompRef { degree: n, index: idx });
        }
        self.canonical_lookup(n, &rep)
    }

    /// Canonicalizes a member tuple by a full orbit walk and resolves it at a
    /// brute level. Exposed for cross-checking the key-based product.
    pub fn canonical_lookup(&self, degree: u32, member: &[ElemId]) -> Result<CompRef> {
        let level = &self.levels[degree as usize];
        if level.mode != LevelMode::Brute {
            return Err(Error::SettingViolated {
                required: "an exhaustively enumerated degree",
                got: format!("degree {degree} built by closure"),
            });
        }
        let rec = braid::orbit(&self.ctx, member, self.caps.orbit_tuples)?;
        let idx = level
            .by_canon
            .get(&rec.canonical)
            .copied()
            .ok_or_else(|| Error::InsufficientData {
                detail: format!("orbit not present at degree {degree}; table inconsistent"),
            })?;
        Ok(CompRef {
            degree,
            index: idx,
        })
    }

    /// z with y = z·x, preferring ⟨z⟩ = ⟨y⟩; `None` is definitive within the
    /// table. Requires ⟨x⟩ ⊆ ⟨y⟩.
    pub fn factor(&self, y: CompRef, x: CompRef) -> Result<Option<CompRef>> {
        let (cy, cx) = (self.comp(y), self.comp(x));
        if !self.registry.contains(cy.subgroup, cx.subgroup) {
            return Err(Error::SettingViolated {
                required: "⟨x⟩ ⊆ ⟨y⟩",
                got: "a factor outside the target subgroup".into(),
            });
        }
        if x.degree > y.degree {
            return Ok(None);
        }
        let dz = y.degree - x.degree;
        let mut fallback = None;
        for (zr, zc) in self.comps_at(dz) {
            if self.multiply(zr, x)? == y {
                if zc.subgroup == cy.subgroup {
                    return Ok(Some(zr));
                }
                if fallback.is_none() {
                    fallback = Some(zr);
                }
            }
        }
        Ok(fallback)
    }

    /// Largest |c|·ord(c) over the distinguished-class splittings of H. This
    /// is the per-class margin beyond which a factor can always be divided
    /// out without dropping the generated subgroup.
    pub fn kappa(&self, h: SubgroupId) -> u64 {
        self.registry
            .get(h)
            .d_classes
            .iter()
            .map(|c| c.members.len() as u64 * self.ctx.element_order(c.members[0]) as u64)
            .max()
            .unwrap_or(0)
    }

    /// Whether μ_H(y) exceeds μ_H(x) by κ(H) on every H-class that x uses,
    /// for H = ⟨y⟩ ⊇ ⟨x⟩. When true, `factor(y, x)` is guaranteed to return
    /// a cofactor generating H.
    pub fn has_factor_margin(&self, y: CompRef, x: CompRef) -> Result<bool> {
        let (cy, cx) = (self.comp(y), self.comp(x));
        if !self.registry.contains(cy.subgroup, cx.subgroup) {
            return Err(Error::SettingViolated {
                required: "⟨x⟩ ⊆ ⟨y⟩",
                got: "a factor outside the target subgroup".into(),
            });
        }
        let h = self.registry.get(cy.subgroup);
        let mu_x = h.multidiscriminant(&self.ctx, &cx.rep)?;
        let kappa = self.kappa(cy.subgroup);
        Ok(cy.mu.iter().zip(&mu_x).all(|(&my, &mx)| {
            my as u64 >= mx as u64 + if mx > 0 { kappa } else { 0 }
        }))
    }

    pub fn hilbert(&self) -> HilbertTable {
        let mut subgroups: BTreeMap<SubgroupId, Vec<u64>> = BTreeMap::new();
        for r in self.registry.iter() {
            if r.d_generated {
                subgroups.insert(r.id, vec![0; self.max_degree as usize + 1]);
            }
        }
        let mut totals = vec![0u64; self.max_degree as usize + 1];
        for (r, c) in self.all_comps() {
            totals[r.degree as usize] += 1;
            subgroups
                .get_mut(&c.subgroup)
                .expect("component subgroups are admissible")[r.degree as usize] += 1;
        }
        HilbertTable {
            max_degree: self.max_degree,
            subgroups,
            totals,
        }
    }
}

pub struct HilbertTable {
    pub max_degree: u32,
    /// Per-subgroup component counts by degree, for admissible subgroups.
    pub subgroups: BTreeMap<SubgroupId, Vec<u64>>,
    pub totals: Vec<u64>,
}

impl HilbertTable {
    pub fn count(&self, h: SubgroupId, degree: u32) -> u64 {
        self.subgroups
            .get(&h)
            .map_or(0, |v| v[degree as usize])
    }

    /// Plain CSV: one row per degree, one column per subgroup plus the total.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "degree")?;
        for id in self.subgroups.keys() {
            write!(w, ",H{id}")?;
        }
        writeln!(w, ",total")?;
        for n in 0..=self.max_degree as usize {
            write!(w, "{n}")?;
            for v in self.subgroups.values() {
                write!(w, ",{}", v[n])?;
            }
            writeln!(w, ",{}", self.totals[n])?;
        }
        Ok(())
    }
}

/// Membership predicates for the spanning-set ideals attached to a subgroup.
/// `m_sub` is the generated subgroup of a component.
pub fn in_ideal_i(reg: &SubgroupRegistry, m_sub: SubgroupId, h: SubgroupId) -> bool {
    reg.contains(m_sub, h)
}
pub fn in_ideal_i_star(reg: &SubgroupRegistry, m_sub: SubgroupId, h: SubgroupId) -> bool {
    m_sub != h && reg.contains(m_sub, h)
}
pub fn in_ideal_j(reg: &SubgroupRegistry, m_sub: SubgroupId, h: SubgroupId) -> bool {
    !(m_sub != h && reg.contains(h, m_sub))
}
pub fn in_ideal_j_star(reg: &SubgroupRegistry, m_sub: SubgroupId, h: SubgroupId) -> bool {
    !reg.contains(h, m_sub)
}
pub fn in_subring_r(reg: &SubgroupRegistry, m_sub: SubgroupId, h: SubgroupId) -> bool {
    reg.contains(h, m_sub)
}

struct Builder<'a> {
    ctx: &'a GroupContext,
    classes: &'a ClassData,
    registry: &'a SubgroupRegistry,
    caps: &'a Caps,
    alpha: Alphabet,
    levels: Vec<DegreeLevel>,
    nonfacts: Vec<CompRef>,
}

impl<'a> Builder<'a> {
    /// Products of a lower-degree component with a non-factorizable one,
    /// keyed by (subgroup, μ). Exactly the factorizable keys of degree n when
    /// all lower degrees are complete.
    fn product_candidates(&self, n: u32) -> Result<BTreeMap<(SubgroupId, Vec<u32>), GTuple>> {
        let mut out = BTreeMap::new();
        for &g in &self.nonfacts {
            if g.degree >= n {
                continue;
            }
            let gc = &self.levels[g.degree as usize].comps[g.index as usize];
            for a in &self.levels[(n - g.degree) as usize].comps {
                let join = self.registry.join(self.ctx, a.subgroup, gc.subgroup);
                let mut rep = a.rep.clone();
                rep.extend_from_slice(&gc.rep);
                let mu = self.registry.get(join).multidiscriminant(self.ctx, &rep)?;
                out.entry((join, mu)).or_insert(rep);
            }
        }
        Ok(out)
    }

    /// Exhaustive generation of the valid tuples of degree n, lexicographically
    /// ascending in the packed encoding.
    fn enumerate_tuples(&self, n: u32) -> Result<Vec<u128>> {
        let len = self.classes.tuple_len(n);
        let m = self.alpha.elems.len();
        let order = self.ctx.order();

        // need[r] = elements expressible as a product of r alphabet entries;
        // a prefix with product p survives iff p⁻¹ ∈ need[remaining].
        let words = (order + 63) / 64;
        let mut need = vec![vec![0u64; words]; len + 1];
        need[0][0] |= 1; // identity has id 0
        for r in 1..=len {
            let (lo, hi) = need.split_at_mut(r);
            let prev = &lo[r - 1];
            let cur = &mut hi[0];
            for x in 0..order {
                if prev[x / 64] >> (x % 64) & 1 == 1 {
                    for &c in &self.alpha.elems {
                        let y = self.ctx.mul(c, x as ElemId) as usize;
                        cur[y / 64] |= 1 << (y % 64);
                    }
                }
            }
        }

        let mut remaining: Vec<u32> = (0..self.classes.num_classes())
            .map(|di| self.classes.entries_for(di, n))
            .collect();
        let class_of_letter: Vec<usize> = self
            .alpha
            .elems
            .iter()
            .map(|e| self.classes.class_of_support[e])
            .collect();

        let mut out: Vec<u128> = Vec::new();
        let mut letters = vec![0u8; len];
        // Recursion depth equals the tuple length, which the caps keep small.
        struct Dfs<'b, 'a> {
            b: &'b Builder<'a>,
            need: Vec<Vec<u64>>,
            class_of_letter: Vec<usize>,
            len: usize,
            m: usize,
            out: Vec<u128>,
            store_cap: usize,
        }
        impl Dfs<'_, '_> {
            fn go(
                &mut self,
                pos: usize,
                p: ElemId,
                letters: &mut [u8],
                remaining: &mut [u32],
            ) -> Result<()> {
                let r = self.len - pos;
                let pinv = self.b.ctx.inv(p) as usize;
                if r == 1 {
                    // Last entry is forced to p⁻¹.
                    if let Some(l) = self.b.alpha.letter(pinv as ElemId) {
                        if remaining[self.class_of_letter[l as usize]] > 0 {
                            letters[pos] = l;
                            if self.out.len() >= self.store_cap {
                                return Err(Error::CapExceeded {
                                    cap: "brute_store",
                                    limit: self.store_cap as u64,
                                    needed: self.out.len() as u64 + 1,
                                });
                            }
                            self.out.push(self.b.alpha.pack(letters));
                        }
                    }
                    return Ok(());
                }
                if self.need[r][pinv / 64] >> (pinv % 64) & 1 == 0 {
                    return Ok(());
                }
                for l in 0..self.m {
                    let di = self.class_of_letter[l];
                    if remaining[di] == 0 {
                        continue;
                    }
                    remaining[di] -= 1;
                    letters[pos] = l as u8;
                    let q = self.b.ctx.mul(p, self.b.alpha.elems[l]);
                    self.go(pos + 1, q, letters, remaining)?;
                    remaining[di] += 1;
                }
                Ok(())
            }
        }
        let mut dfs = Dfs {
            b: self,
            need,
            class_of_letter,
            len,
            m,
            out,
            store_cap: self.caps.brute_store,
        };
        dfs.go(0, self.ctx.identity_id(), &mut letters, &mut remaining)?;
        out = dfs.out;
        Ok(out)
    }

    /// Partitions the sorted valid-tuple set into orbits. Iterating seeds in
    /// ascending order makes every seed the minimum of its orbit.
    fn partition(&self, n: u32, tuples: Vec<u128>) -> Result<Vec<Component>> {
        let len = self.classes.tuple_len(n);
        let mut remaining: HashSet<u128> = tuples.iter().copied().collect();
        let mut comps = Vec::new();
        let mut queue: VecDeque<u128> = VecDeque::new();
        let mut nbrs: Vec<u128> = Vec::with_capacity(2 * len);
        for &seed in &tuples {
            if !remaining.remove(&seed) {
                continue;
            }
            let mut size = 1u64;
            queue.clear();
            queue.push_back(seed);
            while let Some(k) = queue.pop_front() {
                self.alpha.neighbors(k, len, &mut nbrs);
                for &nk in &nbrs {
                    if remaining.remove(&nk) {
                        debug_assert!(nk > seed);
                        size += 1;
                        queue.push_back(nk);
                    }
                }
            }
            let entries = self.alpha.unpack_tuple(seed, len);
            let subgroup = self
                .registry
                .subgroup_of_tuple(self.ctx, &entries)
                .expect("entry closures are class-generated");
            let mu = self
                .registry
                .get(subgroup)
                .multidiscriminant(self.ctx, &entries)?;
            comps.push(Component {
                subgroup,
                mu,
                canonical: Some(entries.clone()),
                rep: entries,
                orbit_size: Some(size),
                non_factorizable: false,
            });
        }
        Ok(comps)
    }
}

/// Builds the component table up to `max_degree`.
pub fn enumerate_components(
    ctx: GroupContext,
    classes: ClassData,
    max_degree: u32,
    caps: &Caps,
) -> Result<MonoidTable> {
    let registry = SubgroupRegistry::build(&ctx, &classes, caps)?;
    let alpha = Alphabet::over_elements(&ctx, classes.support.clone())?;

    // Degree bound for non-factorizable components: with e = exp(G) and
    // A = Π_c |c|^ξ(c), nothing non-factorizable lives above max(e, (e−1)·A).
    let e = ctx.exponent();
    let a_val: u128 = classes
        .class_ids
        .iter()
        .zip(&classes.xi)
        .map(|(&ci, &x)| (ctx.classes()[ci as usize].size() as u128).pow(x))
        .product();
    let nonfact_bound = u64::try_from((e as u128).max((e as u128 - 1) * a_val)).unwrap_or(u64::MAX);

    let identity_level = {
        let comps = vec![Component {
            subgroup: registry.trivial_id(),
            mu: Vec::new(),
            canonical: Some(Vec::new()),
            rep: Vec::new(),
            orbit_size: Some(1),
            non_factorizable: false,
        }];
        let (by_canon, by_key, key_injective) = DegreeLevel::index_maps(&comps);
        DegreeLevel {
            mode: LevelMode::Brute,
            comps,
            by_canon,
            by_key,
            key_injective,
        }
    };

    let mut b = Builder {
        ctx: &ctx,
        classes: &classes,
        registry: &registry,
        caps,
        alpha,
        levels: vec![identity_level],
        nonfacts: Vec::new(),
    };

    let mut brute_max = 0u32;
    let mut closure_used = false;
    let mut key_certified = true;
    let mut crosscheck_ok = true;
    let mut observed_nonfact_max = 0u32;

    for n in 1..=max_degree {
        let len = classes.tuple_len(n);
        let m = b.alpha.elems.len() as f64;
        let est_work = m.powi(len as i32 - 1);
        let est_store = m.powi(len as i32) / ctx.order() as f64 * 3.0;
        let brute = !closure_used
            && b.alpha.fits(len)
            && est_work <= caps.brute_work as f64
            && est_store <= caps.brute_store as f64;

        let candidates = b.product_candidates(n)?;
        let level = if brute {
            brute_max = n;
            let tuples = b.enumerate_tuples(n)?;
            let mut comps = b.partition(n, tuples)?;
            // Non-factorizable = not expressible as a product; cross-check
            // that every product key is realized by an enumerated component.
            let keys: HashSet<(SubgroupId, Vec<u32>)> = comps
                .iter()
                .map(|c| (c.subgroup, c.mu.clone()))
                .collect();
            for key in candidates.keys() {
                if !keys.contains(key) {
                    crosscheck_ok = false;
                }
            }
            for c in &mut comps {
                c.non_factorizable = !candidates.contains_key(&(c.subgroup, c.mu.clone()));
            }
            let (by_canon, by_key, key_injective) = DegreeLevel::index_maps(&comps);
            key_certified &= key_injective;
            DegreeLevel {
                mode: LevelMode::Brute,
                comps,
                by_canon,
                by_key,
                key_injective,
            }
        } else {
            if !key_certified {
                return Err(Error::SettingViolated {
                    required: "injective (subgroup, multidiscriminant) keys for closure mode",
                    got: format!("a key collision at a degree ≤ {brute_max}"),
                });
            }
            closure_used = true;
            let comps: Vec<Component> = candidates
                .into_iter()
                .map(|((subgroup, mu), rep)| Component {
                    subgroup,
                    mu,
                    canonical: None,
                    rep,
                    orbit_size: None,
                    non_factorizable: false,
                })
                .collect();
            let (by_canon, by_key, key_injective) = DegreeLevel::index_maps(&comps);
            debug_assert!(key_injective);
            DegreeLevel {
                mode: LevelMode::Closure,
                comps,
                by_canon,
                by_key,
                key_injective,
            }
        };
        for (i, c) in level.comps.iter().enumerate() {
            if c.non_factorizable {
                observed_nonfact_max = n;
                b.nonfacts.push(CompRef {
                    degree: n,
                    index: i as u32,
                });
            }
        }
        b.levels.push(level);
    }

    let levels = std::mem::take(&mut b.levels);
    let nonfact_complete = (brute_max as u64) >= nonfact_bound;
    Ok(MonoidTable {
        ctx,
        classes,
        registry,
        levels,
        max_degree,
        caps: caps.clone(),
        brute_max,
        closure_used,
        key_certified,
        crosscheck_ok,
        observed_nonfact_max,
        nonfact_bound,
        nonfact_complete,
    })
}
