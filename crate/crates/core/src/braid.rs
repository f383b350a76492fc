//! Braid moves on tuples of group elements and orbit enumeration.
//!
//! The move at position i (0-based) sends (…, x, y, …) to (…, x y x⁻¹, x, …)
//! and its inverse sends it to (…, y, y⁻¹ x y, …). Both preserve the
//! left-to-right product, the subgroup generated by the entries, and the
//! per-class entry counts, which is what makes orbit enumeration by plain BFS
//! sound: orbits live inside the finite set of tuples sharing those
//! invariants.
//!
//! Orbits are walked over a packed encoding: entries stay inside the union of
//! the conjugacy classes of the seed entries, so each entry is a small letter
//! index and a whole tuple packs into a u128 whenever letter_bits × length
//! ≤ 128. The canonical representative of an orbit is its lexicographically
//! minimal tuple under element-id order, which the packing preserves.

use crate::error::{Error, Result};
use crate::group::{ElemId, GroupContext};
use std::collections::{HashMap, HashSet, VecDeque};

pub type GTuple = Vec<ElemId>;

/// Applies the braid move at position i; `inverse` selects σᵢ⁻¹.
pub fn braid_move(ctx: &GroupContext, t: &mut [ElemId], i: usize, inverse: bool) -> Result<()> {
    if t.len() < 2 || i >= t.len() - 1 {
        return Err(Error::IndexOutOfRange {
            what: "braid position",
            index: i,
            max: t.len().saturating_sub(2),
        });
    }
    let (x, y) = (t[i], t[i + 1]);
    if inverse {
        t[i] = y;
        t[i + 1] = ctx.conj(ctx.inv(y), x);
    } else {
        t[i] = ctx.conj(x, y);
        t[i + 1] = x;
    }
    Ok(())
}

/// Applies a braid word left to right; each letter is (position, inverse?).
pub fn apply_word(ctx: &GroupContext, t: &mut [ElemId], word: &[(usize, bool)]) -> Result<()> {
    for &(i, inv) in word {
        braid_move(ctx, t, i, inv)?;
    }
    Ok(())
}

/// Left-to-right product of the entries.
pub fn product(ctx: &GroupContext, t: &[ElemId]) -> ElemId {
    t.iter().fold(ctx.identity_id(), |acc, &g| ctx.mul(acc, g))
}

// Constructive rewriting words. Each builder returns a braid word whose
// effect on a tuple of the stated shape is exact, entry for entry, so
// rewriting claims can be checked by applying the word and comparing tuples
// instead of searching orbits.

/// Word moving the entry at `pos` right by `k` slots; each passed entry x
/// becomes m x m⁻¹ for the moved entry m.
pub fn push_right_word(pos: usize, k: usize) -> Vec<(usize, bool)> {
    (pos..pos + k).map(|j| (j, false)).collect()
}

/// Word moving the entry at `pos` left by `k` slots; each passed entry x
/// becomes m⁻¹ x m for the moved entry m.
pub fn push_left_word(pos: usize, k: usize) -> Vec<(usize, bool)> {
    (0..k).map(|j| (pos - 1 - j, true)).collect()
}

/// Word sending (g₁, …, gₙ) to (g₂, …, gₙ, g₁) when the tuple has product
/// one.
pub fn rotate_left_word(len: usize) -> Vec<(usize, bool)> {
    (0..len.saturating_sub(1)).map(|j| (j, true)).collect()
}

/// Word sending (g₁, …, gₙ) to (gₙ, g₁, …, gₙ₋₁) when the tuple has product
/// one.
pub fn rotate_right_word(len: usize) -> Vec<(usize, bool)> {
    (0..len.saturating_sub(1)).rev().map(|j| (j, false)).collect()
}

/// Word conjugating every entry of a product-one tuple by the entry at `i`:
/// each x becomes tᵢ x tᵢ⁻¹, with the moved copy of tᵢ ending back at `i`.
pub fn conj_by_entry_word(len: usize, i: usize) -> Vec<(usize, bool)> {
    let mut w = push_right_word(i, len - 1 - i);
    w.extend(rotate_right_word(len));
    w.extend(push_right_word(0, i));
    w
}

/// Word swapping the product-one block at `start .. start + p` past the `q`
/// entries that follow it. Both blocks come out entrywise unchanged.
pub fn swap_right_word(start: usize, p: usize, q: usize) -> Vec<(usize, bool)> {
    let mut w = Vec::with_capacity(p * q);
    for j in (0..p).rev() {
        w.extend(push_right_word(start + j, q));
    }
    w
}

/// Word swapping the product-one block at `start + r .. start + r + q` past
/// the `r` entries that precede it. Both blocks come out entrywise unchanged.
pub fn swap_left_word(start: usize, r: usize, q: usize) -> Vec<(usize, bool)> {
    let mut w = Vec::with_capacity(r * q);
    for j in 0..q {
        w.extend(push_left_word(start + r + j, r));
    }
    w
}

/// Word conjugating the product-one block at `block_start .. block_start +
/// block_len` entrywise by the entry at `i`, which must lie outside the
/// block: each block entry x becomes tᵢ x tᵢ⁻¹. Entries outside the block
/// return to their places unchanged.
pub fn conj_block_word(block_start: usize, block_len: usize, i: usize) -> Vec<(usize, bool)> {
    let (b, q) = (block_start, block_len);
    debug_assert!(i < b || i >= b + q);
    let mut w;
    if i < b {
        let r = b - i - 1;
        w = swap_left_word(i + 1, r, q);
        w.extend(push_right_word(i, q));
        w.extend(swap_right_word(i, q, r + 1));
    } else {
        let r = i - (b + q);
        w = swap_right_word(b, q, r + 1);
        w.extend(push_right_word(i - q, q));
        w.extend(swap_left_word(b, r, q));
    }
    w
}

/// Letter tables over the union of the conjugacy classes of the seed entries.
/// That union is closed under conjugation by any group element, so braid
/// moves never leave it.
pub(crate) struct Alphabet {
    pub elems: Vec<ElemId>,
    pub bits: u32,
    m: usize,
    fwd: Vec<u8>,
    bwd: Vec<u8>,
}

impl Alphabet {
    pub fn for_entries(ctx: &GroupContext, entries: &[ElemId]) -> Result<Self> {
        let mut class_ids: Vec<u32> = entries.iter().map(|&e| ctx.class_of(e)).collect();
        class_ids.sort_unstable();
        class_ids.dedup();
        let mut elems: Vec<ElemId> = Vec::new();
        for ci in class_ids {
            elems.extend_from_slice(&ctx.classes()[ci as usize].members);
        }
        elems.sort_unstable();
        Alphabet::over_elements(ctx, elems)
    }

    /// `elems` must be sorted and closed under mutual conjugation.
    pub fn over_elements(ctx: &GroupContext, elems: Vec<ElemId>) -> Result<Self> {
        let m = elems.len();
        if m > 256 {
            return Err(Error::CapExceeded {
                cap: "alphabet",
                limit: 256,
                needed: m as u64,
            });
        }
        let letter: HashMap<ElemId, u8> = elems
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u8))
            .collect();
        let mut fwd = vec![0u8; m * m];
        let mut bwd = vec![0u8; m * m];
        for a in 0..m {
            for b in 0..m {
                fwd[a * m + b] = letter[&ctx.conj(elems[a], elems[b])];
                bwd[a * m + b] = letter[&ctx.conj(ctx.inv(elems[a]), elems[b])];
            }
        }
        let bits = (usize::BITS - (m - 1).leading_zeros()).max(1);
        Ok(Alphabet {
            elems,
            bits,
            m,
            fwd,
            bwd,
        })
    }

    pub fn letter(&self, e: ElemId) -> Option<u8> {
        self.elems.binary_search(&e).ok().map(|i| i as u8)
    }

    pub fn fits(&self, len: usize) -> bool {
        len as u32 * self.bits <= 128
    }

    /// MSB-first packing: integer order on keys equals lexicographic order on
    /// letter sequences, hence on element-id sequences.
    pub fn pack(&self, letters: &[u8]) -> u128 {
        let mut key = 0u128;
        for &l in letters {
            key = (key << self.bits) | l as u128;
        }
        key
    }

    pub fn unpack(&self, mut key: u128, len: usize, out: &mut Vec<u8>) {
        out.clear();
        out.resize(len, 0);
        let mask = (1u128 << self.bits) - 1;
        for i in (0..len).rev() {
            out[i] = (key & mask) as u8;
            key >>= self.bits;
        }
    }

    pub fn pack_tuple(&self, t: &[ElemId]) -> Option<u128> {
        let mut key = 0u128;
        for &e in t {
            key = (key << self.bits) | self.letter(e)? as u128;
        }
        Some(key)
    }

    pub fn unpack_tuple(&self, key: u128, len: usize) -> Vec<ElemId> {
        let mut letters = Vec::new();
        self.unpack(key, len, &mut letters);
        letters.into_iter().map(|l| self.elems[l as usize]).collect()
    }

    /// All single-move neighbours of a packed tuple.
    pub fn neighbors(&self, key: u128, len: usize, out: &mut Vec<u128>) {
        out.clear();
        let bits = self.bits;
        let mask = (1u128 << bits) - 1;
        for i in 0..len - 1 {
            let lo = (bits as usize * (len - 2 - i)) as u32;
            let hi = lo + bits;
            let a = ((key >> hi) & mask) as usize;
            let b = ((key >> lo) & mask) as usize;
            let cleared = key & !((mask << hi) | (mask << lo));
            let f = self.fwd[a * self.m + b] as u128;
            out.push(cleared | (f << hi) | ((a as u128) << lo));
            let w = self.bwd[b * self.m + a] as u128;
            out.push(cleared | ((b as u128) << hi) | (w << lo));
        }
    }
}

pub struct OrbitRecord {
    /// Lexicographically minimal tuple in the orbit, by element id.
    pub canonical: GTuple,
    pub size: u64,
    pub product: ElemId,
    /// Sorted elements of ⟨entries⟩.
    pub subgroup_elements: Vec<ElemId>,
}

enum Walk {
    Exhausted { min: u128, size: u64 },
    Found,
}

fn packed_walk(
    alpha: &Alphabet,
    len: usize,
    seed: u128,
    target: Option<u128>,
    cap: usize,
) -> Result<Walk> {
    let mut visited: HashSet<u128> = HashSet::new();
    let mut queue: VecDeque<u128> = VecDeque::new();
    visited.insert(seed);
    queue.push_back(seed);
    if target == Some(seed) {
        return Ok(Walk::Found);
    }
    let mut min = seed;
    let mut nbrs = Vec::with_capacity(2 * len);
    while let Some(k) = queue.pop_front() {
        alpha.neighbors(k, len, &mut nbrs);
        for &nk in &nbrs {
            if visited.insert(nk) {
                if visited.len() > cap {
                    return Err(Error::CapExceeded {
                        cap: "orbit_tuples",
                        limit: cap as u64,
                        needed: visited.len() as u64,
                    });
                }
                if target == Some(nk) {
                    return Ok(Walk::Found);
                }
                if nk < min {
                    min = nk;
                }
                queue.push_back(nk);
            }
        }
    }
    Ok(Walk::Exhausted {
        min,
        size: visited.len() as u64,
    })
}

fn boxed_walk(
    ctx: &GroupContext,
    seed: &[ElemId],
    target: Option<&[ElemId]>,
    cap: usize,
) -> Result<(Option<GTuple>, u64, bool)> {
    let len = seed.len();
    let mut visited: HashSet<Box<[ElemId]>> = HashSet::new();
    let mut queue: VecDeque<Box<[ElemId]>> = VecDeque::new();
    let boxed: Box<[ElemId]> = seed.into();
    let mut min = boxed.clone();
    visited.insert(boxed.clone());
    queue.push_back(boxed);
    if target == Some(seed) {
        return Ok((None, 1, true));
    }
    while let Some(k) = queue.pop_front() {
        for i in 0..len - 1 {
            for inv in [false, true] {
                let mut n = k.clone();
                braid_move(ctx, &mut n, i, inv)?;
                if !visited.contains(&n) {
                    if visited.len() >= cap {
                        return Err(Error::CapExceeded {
                            cap: "orbit_tuples",
                            limit: cap as u64,
                            needed: visited.len() as u64 + 1,
                        });
                    }
                    if target == Some(&*n) {
                        return Ok((None, visited.len() as u64 + 1, true));
                    }
                    if n < min {
                        min = n.clone();
                    }
                    visited.insert(n.clone());
                    queue.push_back(n);
                }
            }
        }
    }
    Ok((Some(min.into_vec()), visited.len() as u64, false))
}

/// Full orbit of a tuple: canonical representative, size, and the invariants.
pub fn orbit(ctx: &GroupContext, t: &[ElemId], cap: usize) -> Result<OrbitRecord> {
    if t.is_empty() {
        return Ok(OrbitRecord {
            canonical: Vec::new(),
            size: 1,
            product: ctx.identity_id(),
            subgroup_elements: vec![ctx.identity_id()],
        });
    }
    let product = product(ctx, t);
    let subgroup_elements = ctx.closure_of(t);
    let canonical;
    let size;
    if t.len() == 1 {
        canonical = t.to_vec();
        size = 1;
    } else {
        let alpha = Alphabet::for_entries(ctx, t)?;
        if alpha.fits(t.len()) {
            let seed = alpha.pack_tuple(t).expect("entries are in their own classes");
            match packed_walk(&alpha, t.len(), seed, None, cap)? {
                Walk::Exhausted { min, size: s } => {
                    canonical = alpha.unpack_tuple(min, t.len());
                    size = s;
                }
                Walk::Found => unreachable!("no target requested"),
            }
        } else {
            let (min, s, _) = boxed_walk(ctx, t, None, cap)?;
            canonical = min.expect("walk without target returns the minimum");
            size = s;
        }
    }
    Ok(OrbitRecord {
        canonical,
        size,
        product,
        subgroup_elements,
    })
}

/// True iff the tuples lie in the same orbit. Cheap invariants are compared
/// first; the walk from `a` stops as soon as it meets `b`.
pub fn equivalent(ctx: &GroupContext, a: &[ElemId], b: &[ElemId], cap: usize) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    if a == b {
        return Ok(true);
    }
    if product(ctx, a) != product(ctx, b) {
        return Ok(false);
    }
    let classes_of = |t: &[ElemId]| {
        let mut c: Vec<u32> = t.iter().map(|&e| ctx.class_of(e)).collect();
        c.sort_unstable();
        c
    };
    if classes_of(a) != classes_of(b) {
        return Ok(false);
    }
    if ctx.closure_of(a) != ctx.closure_of(b) {
        return Ok(false);
    }
    let alpha = Alphabet::for_entries(ctx, a)?;
    if alpha.fits(a.len()) {
        let (sa, sb) = (
            alpha.pack_tuple(a).expect("entries are in their own classes"),
            alpha.pack_tuple(b).expect("same class multiset as a"),
        );
        match packed_walk(&alpha, a.len(), sa, Some(sb), cap)? {
            Walk::Found => Ok(true),
            Walk::Exhausted { .. } => Ok(false),
        }
    } else {
        let (_, _, found) = boxed_walk(ctx, a, Some(b), cap)?;
        Ok(found)
    }
}

/// Entry counts per distinguished class; errors if an entry's class is not
/// distinguished.
pub fn class_counts(
    ctx: &GroupContext,
    classes: &crate::subgroups::ClassData,
    t: &[ElemId],
) -> Result<Vec<u32>> {
    let mut mu = vec![0u32; classes.num_classes()];
    for &e in t {
        match classes.class_of_support.get(&e) {
            Some(&di) => mu[di] += 1,
            None => {
                return Err(Error::NotAMember {
                    element: ctx.perm(e).to_string(),
                    container: "the distinguished classes".into(),
                })
            }
        }
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Caps;
    use crate::perm::Permutation;
    use proptest::prelude::*;

    fn s_n(n: usize) -> GroupContext {
        let gens = vec![
            Permutation::parse("(1 2)", n).unwrap(),
            Permutation::parse(
                &format!(
                    "({})",
                    (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
                ),
                n,
            )
            .unwrap(),
        ];
        GroupContext::new(gens, &Caps::default()).unwrap()
    }

    fn ids(ctx: &GroupContext, strs: &[&str]) -> Vec<ElemId> {
        strs.iter()
            .map(|s| ctx.id_of(&Permutation::parse(s, ctx.degree()).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn first_move_conjugates_and_shifts() {
        let ctx = s_n(3);
        let mut t = ids(&ctx, &["(1 2)", "(2 3)"]);
        braid_move(&ctx, &mut t, 0, false).unwrap();
        assert_eq!(t, ids(&ctx, &["(1 3)", "(1 2)"]));
        braid_move(&ctx, &mut t, 0, true).unwrap();
        assert_eq!(t, ids(&ctx, &["(1 2)", "(2 3)"]));
    }

    #[test]
    fn move_index_out_of_range() {
        let ctx = s_n(3);
        let mut t = ids(&ctx, &["(1 2)", "(2 3)"]);
        assert!(braid_move(&ctx, &mut t, 1, false).is_err());
        assert!(braid_move(&ctx, &mut [], 0, false).is_err());
    }

    #[test]
    fn orbit_of_pair_with_three_cycle_product() {
        // (a, b) with a∘b = (1 2 3) has exactly three solutions in
        // transpositions, all braid-connected.
        let ctx = s_n(3);
        let t = ids(&ctx, &["(1 2)", "(2 3)"]);
        let rec = orbit(&ctx, &t, 1_000_000).unwrap();
        assert_eq!(rec.size, 3);
        assert_eq!(rec.product, product(&ctx, &t));
        assert_eq!(rec.subgroup_elements.len(), 6);
        // Canonical is the id-lexicographic minimum: (2 3) < (1 2) < (1 3).
        assert_eq!(rec.canonical, ids(&ctx, &["(2 3)", "(1 3)"]));
    }

    #[test]
    fn repeated_entry_is_fixed_by_its_move() {
        let ctx = s_n(3);
        let t = ids(&ctx, &["(1 2)", "(1 2)"]);
        let rec = orbit(&ctx, &t, 1_000).unwrap();
        assert_eq!(rec.size, 1);
        assert_eq!(rec.canonical, t);
    }

    #[test]
    fn equivalence_examples() {
        let ctx = s_n(3);
        let a = ids(&ctx, &["(1 2)", "(2 3)"]);
        let b = ids(&ctx, &["(1 3)", "(1 2)"]);
        assert!(equivalent(&ctx, &a, &b, 1_000_000).unwrap());
        let c = ids(&ctx, &["(1 2)", "(1 2)"]);
        assert!(!equivalent(&ctx, &a, &c, 1_000_000).unwrap());
        assert!(!equivalent(&ctx, &a, &a[..1].to_vec(), 1_000_000).unwrap());
        // Same class data and product, different generated subgroup: must be
        // distinguished by the closure short-circuit or the walk.
        let d = ids(&ctx, &["(1 2)", "(1 2)", "(1 3)", "(1 3)"]);
        let e = ids(&ctx, &["(1 2)", "(1 2)", "(1 2)", "(1 2)"]);
        assert!(!equivalent(&ctx, &d, &e, 1_000_000).unwrap());
    }

    #[test]
    fn rotation_of_product_one_tuple_stays_in_orbit() {
        let ctx = s_n(3);
        let t = ids(&ctx, &["(1 2)", "(1 2)", "(2 3)", "(2 3)"]);
        assert_eq!(product(&ctx, &t), ctx.identity_id());
        let mut rotated = t.clone();
        rotated.rotate_left(1);
        assert!(equivalent(&ctx, &t, &rotated, 1_000_000).unwrap());
    }

    #[test]
    fn orbit_cap_is_enforced() {
        let ctx = s_n(4);
        let t = ids(&ctx, &["(1 2)", "(2 3)", "(3 4)", "(1 2)"]);
        match orbit(&ctx, &t, 5) {
            Err(Error::CapExceeded { cap, .. }) => assert_eq!(cap, "orbit_tuples"),
            Err(e) => panic!("unexpected error {e:?}"),
            Ok(r) => panic!("expected cap error, got orbit of size {}", r.size),
        }
    }

    #[test]
    fn long_tuple_takes_the_unpacked_path() {
        // Alphabet {(1 2)} has one letter, so 129 entries exceed 128 bits.
        let ctx = s_n(3);
        let t = vec![ids(&ctx, &["(1 2)"])[0]; 129];
        let rec = orbit(&ctx, &t, 1_000).unwrap();
        assert_eq!(rec.size, 1);
        assert_eq!(rec.canonical, t);
    }

    #[test]
    fn empty_and_singleton_orbits() {
        let ctx = s_n(3);
        let rec = orbit(&ctx, &[], 10).unwrap();
        assert_eq!((rec.size, rec.product), (1, ctx.identity_id()));
        let t = ids(&ctx, &["(1 2 3)"]);
        let rec = orbit(&ctx, &t, 10).unwrap();
        assert_eq!(rec.size, 1);
        assert_eq!(rec.canonical, t);
    }

    #[test]
    fn rotation_words_are_exact_on_product_one_tuples() {
        let ctx = s_n(4);
        let t = ids(&ctx, &["(1 2)", "(2 3 4)", "(1 4)", "(1 4)", "(1 2)(3 4)"]);
        let t = complete_to_product_one(&ctx, t);
        let mut u = t.clone();
        apply_word(&ctx, &mut u, &rotate_left_word(t.len())).unwrap();
        let mut expect = t.clone();
        expect.rotate_left(1);
        assert_eq!(u, expect);
        apply_word(&ctx, &mut u, &rotate_right_word(t.len())).unwrap();
        assert_eq!(u, t);
    }

    fn complete_to_product_one(ctx: &GroupContext, mut t: Vec<ElemId>) -> Vec<ElemId> {
        let p = product(ctx, &t);
        t.push(ctx.inv(p));
        t
    }

    #[test]
    fn entry_conjugation_word_is_exact() {
        let ctx = s_n(4);
        let t = complete_to_product_one(&ctx, ids(&ctx, &["(1 2)", "(2 3 4)", "(1 4)"]));
        for i in 0..t.len() {
            let mut u = t.clone();
            apply_word(&ctx, &mut u, &conj_by_entry_word(t.len(), i)).unwrap();
            let expect: Vec<ElemId> = t.iter().map(|&x| ctx.conj(t[i], x)).collect();
            assert_eq!(u, expect, "conjugation by entry {i}");
        }
    }

    #[test]
    fn block_swap_words_are_exact() {
        let ctx = s_n(4);
        // b is the product-one block, surrounded by arbitrary entries.
        let b = complete_to_product_one(&ctx, ids(&ctx, &["(1 3)", "(2 4)"]));
        let edge = ids(&ctx, &["(1 2 3)", "(3 4)", "(1 4)(2 3)"]);
        let t: Vec<ElemId> = [&b[..], &edge[..]].concat();
        let mut u = t.clone();
        apply_word(&ctx, &mut u, &swap_right_word(0, b.len(), edge.len())).unwrap();
        assert_eq!(u, [&edge[..], &b[..]].concat());
        apply_word(&ctx, &mut u, &swap_left_word(0, edge.len(), b.len())).unwrap();
        assert_eq!(u, t);
    }

    #[test]
    fn block_conjugation_word_is_exact_from_both_sides() {
        let ctx = s_n(4);
        let pre = ids(&ctx, &["(1 2 3 4)", "(1 3)"]);
        let block = complete_to_product_one(&ctx, ids(&ctx, &["(1 2)", "(3 4)", "(1 2 3)"]));
        let post = ids(&ctx, &["(2 3)", "(1 4 2)"]);
        let t: Vec<ElemId> = [&pre[..], &block[..], &post[..]].concat();
        let (b, q) = (pre.len(), block.len());
        for i in (0..pre.len()).chain(b + q..t.len()) {
            let mut u = t.clone();
            apply_word(&ctx, &mut u, &conj_block_word(b, q, i)).unwrap();
            let mut expect = t.clone();
            for x in &mut expect[b..b + q] {
                *x = ctx.conj(t[i], *x);
            }
            assert_eq!(u, expect, "block conjugation by entry {i}");
        }
    }

    fn arb_tuple(order: usize, len: usize) -> impl Strategy<Value = Vec<ElemId>> {
        prop::collection::vec(0..order as ElemId, len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn moves_preserve_product_subgroup_and_classes(
            t in arb_tuple(24, 6),
            word in prop::collection::vec((0usize..5, any::<bool>()), 0..40),
        ) {
            let ctx = s_n(4);
            let mut u = t.clone();
            apply_word(&ctx, &mut u, &word).unwrap();
            prop_assert_eq!(product(&ctx, &u), product(&ctx, &t));
            prop_assert_eq!(ctx.closure_of(&u), ctx.closure_of(&t));
            let classes = |v: &[ElemId]| {
                let mut c: Vec<u32> = v.iter().map(|&e| ctx.class_of(e)).collect();
                c.sort_unstable();
                c
            };
            prop_assert_eq!(classes(&u), classes(&t));
        }

        #[test]
        fn inverse_move_undoes(t in arb_tuple(24, 5), i in 0usize..4, inv in any::<bool>()) {
            let ctx = s_n(4);
            let mut u = t.clone();
            braid_move(&ctx, &mut u, i, inv).unwrap();
            braid_move(&ctx, &mut u, i, !inv).unwrap();
            prop_assert_eq!(u, t);
        }

        #[test]
        fn rewriting_words_are_exact_on_random_tuples(
            head in arb_tuple(24, 5),
            i in 0usize..6,
            split in 1usize..5,
        ) {
            let ctx = s_n(4);
            let t = complete_to_product_one(&ctx, head);
            let mut u = t.clone();
            apply_word(&ctx, &mut u, &rotate_left_word(t.len())).unwrap();
            let mut expect = t.clone();
            expect.rotate_left(1);
            prop_assert_eq!(&u, &expect);
            let mut u = t.clone();
            apply_word(&ctx, &mut u, &conj_by_entry_word(t.len(), i)).unwrap();
            let conj: Vec<ElemId> = t.iter().map(|&x| ctx.conj(t[i], x)).collect();
            prop_assert_eq!(&u, &conj);
            // Swapping the halves of a product-one tuple needs the moving
            // block to have product one itself, so close up the front half.
            let front = complete_to_product_one(&ctx, t[..split].to_vec());
            let t2: Vec<ElemId> = [&front[..], &t[split..]].concat();
            let mut u = t2.clone();
            apply_word(&ctx, &mut u, &swap_right_word(0, front.len(), t2.len() - front.len())).unwrap();
            let expect: Vec<ElemId> = [&t2[front.len()..], &front[..]].concat();
            prop_assert_eq!(u, expect);
        }

        #[test]
        fn braid_relations_hold(t in arb_tuple(24, 5)) {
            let ctx = s_n(4);
            // Far commutation: positions 0 and 2.
            let mut u = t.clone();
            apply_word(&ctx, &mut u, &[(0, false), (2, false)]).unwrap();
            let mut v = t.clone();
            apply_word(&ctx, &mut v, &[(2, false), (0, false)]).unwrap();
            prop_assert_eq!(&u, &v);
            // Adjacent relation: 010 = 101.
            let mut u = t.clone();
            apply_word(&ctx, &mut u, &[(0, false), (1, false), (0, false)]).unwrap();
            let mut v = t.clone();
            apply_word(&ctx, &mut v, &[(1, false), (0, false), (1, false)]).unwrap();
            prop_assert_eq!(u, v);
        }
    }
}
