//! Fast path for symmetric groups with the transposition class.
//!
//! A tuple of transpositions is read as a multigraph on the points, one edge
//! per entry. Orbits are classified exactly by the partition into connected
//! components together with the edge count of each component, so census
//! questions reduce to block combinatorics and stay exact far beyond the
//! reach of orbit search. The closed-form count is treated as a hypothesis
//! and always validated against the census.

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{ElemId, GroupContext};
use crate::monoid::{CompRef, MonoidTable};
use crate::perm::Permutation;
use crate::spectrum::disjoint_families;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

/// Multigraph on `d` points, 1-based. Loops are rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Multigraph {
    pub d: usize,
    /// Unordered pair (min, max) -> multiplicity ≥ 1.
    pub edges: BTreeMap<(u8, u8), u32>,
}

impl Multigraph {
    pub fn new(d: usize) -> Self {
        Multigraph {
            d,
            edges: BTreeMap::new(),
        }
    }

    pub fn add_edge(&mut self, i: u8, j: u8) -> Result<()> {
        if i == j || i == 0 || j == 0 || i as usize > self.d || j as usize > self.d {
            return Err(Error::InvalidInput(format!(
                "edge ({i},{j}) invalid on {} points",
                self.d
            )));
        }
        *self.edges.entry((i.min(j), i.max(j))).or_insert(0) += 1;
        Ok(())
    }

    pub fn edge_count(&self) -> u64 {
        self.edges.values().map(|&m| m as u64).sum()
    }
}

fn transposition_points(p: &Permutation) -> Option<(u8, u8)> {
    let mut moved = p
        .images()
        .iter()
        .enumerate()
        .filter(|&(i, &v)| i as u8 != v)
        .map(|(i, _)| i as u8);
    match (moved.next(), moved.next(), moved.next()) {
        (Some(a), Some(b), None) => Some((a, b)),
        _ => None,
    }
}

/// Multigraph of a transposition tuple: one edge {i,j} per entry (i j).
pub fn tuple_to_multigraph(ctx: &GroupContext, t: &[ElemId]) -> Result<Multigraph> {
    let mut g = Multigraph::new(ctx.degree());
    for &e in t {
        let p = ctx.perm(e);
        let Some((i, j)) = transposition_points(p) else {
            return Err(Error::NonTransposition {
                entry: p.to_string(),
            });
        };
        g.add_edge(i + 1, j + 1)?;
    }
    Ok(g)
}

/// Orbit invariant of a transposition tuple: the partition of the points
/// into connected components of the multigraph and the total edge count of
/// each component. Blocks are ascending and sorted by minimal point;
/// singleton blocks are kept and carry count 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Signature {
    pub blocks: Vec<Vec<u8>>,
    pub edge_counts: Vec<u64>,
}

impl Signature {
    pub fn degree(&self) -> u64 {
        self.edge_counts.iter().sum()
    }
}

pub fn signature(g: &Multigraph) -> Signature {
    let mut parent: Vec<usize> = (0..g.d).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for &(i, j) in g.edges.keys() {
        let (a, b) = (
            find(&mut parent, i as usize - 1),
            find(&mut parent, j as usize - 1),
        );
        parent[a] = b;
    }
    let mut by_root: BTreeMap<usize, Vec<u8>> = BTreeMap::new();
    for p in 0..g.d {
        by_root
            .entry(find(&mut parent, p))
            .or_default()
            .push(p as u8 + 1);
    }
    let mut blocks: Vec<Vec<u8>> = by_root.into_values().collect();
    blocks.sort_by_key(|b| b[0]);
    let root_of: HashMap<u8, usize> = blocks
        .iter()
        .enumerate()
        .flat_map(|(k, b)| b.iter().map(move |&p| (p, k)))
        .collect();
    let mut edge_counts = vec![0u64; blocks.len()];
    for (&(i, _), &m) in &g.edges {
        edge_counts[root_of[&i]] += m as u64;
    }
    Signature {
        blocks,
        edge_counts,
    }
}

/// One census row: an admissible signature together with the subgroup its
/// components generate, a direct product of symmetric groups on the
/// multi-point blocks.
#[derive(Clone, Debug, Serialize)]
pub struct CensusEntry {
    pub signature: Signature,
    pub subgroup_blocks: Vec<Vec<u8>>,
    pub subgroup_order: u64,
}

fn factorial(v: usize) -> u64 {
    (2..=v as u64).product()
}

/// Signatures realizable by a product-one tuple of n transpositions on d
/// points. A block on v ≥ 2 points must carry an even edge count of at
/// least 2(v − 1); odd n admits nothing. Sorted by signature.
pub fn component_census_sd(d: usize, n: u32, caps: &Caps) -> Result<Vec<CensusEntry>> {
    if d < 2 {
        return Err(Error::SettingViolated {
            required: "at least two points",
            got: format!("d = {d}"),
        });
    }
    if d > caps.sym_d {
        return Err(Error::CapExceeded {
            cap: "symmetric census points",
            limit: caps.sym_d as u64,
            needed: d as u64,
        });
    }
    if n % 2 == 1 {
        return Ok(Vec::new());
    }
    let half = (n / 2) as u64;
    let masks: Vec<u32> = (0u32..1 << d).filter(|m| m.count_ones() >= 2).collect();
    let mut families: Vec<Vec<u32>> = vec![Vec::new()];
    disjoint_families(&masks, 0, 0, &mut Vec::new(), &mut families);

    let mut out: Vec<CensusEntry> = Vec::new();
    for fam in &families {
        let sizes: Vec<u64> = fam.iter().map(|m| m.count_ones() as u64).collect();
        let min: u64 = sizes.iter().map(|v| v - 1).sum();
        if min > half || (fam.is_empty() && half > 0) {
            continue;
        }
        // weak compositions of the surplus over the blocks
        let mut dist = vec![0u64; fam.len()];
        distribute(half - min, 0, &mut dist, &mut |dist| {
            if out.len() >= caps.brute_store {
                return Err(Error::CapExceeded {
                    cap: "census entries",
                    limit: caps.brute_store as u64,
                    needed: out.len() as u64 + 1,
                });
            }
            let mut blocks: Vec<(Vec<u8>, u64)> = fam
                .iter()
                .zip(dist.iter().zip(&sizes))
                .map(|(&mask, (&extra, &v))| {
                    let pts: Vec<u8> = (0..d as u8)
                        .filter(|&p| (mask >> p) & 1 == 1)
                        .map(|p| p + 1)
                        .collect();
                    (pts, 2 * (v - 1 + extra))
                })
                .collect();
            let covered: u32 = fam.iter().fold(0, |a, &m| a | m);
            for p in 0..d as u8 {
                if (covered >> p) & 1 == 0 {
                    blocks.push((vec![p + 1], 0));
                }
            }
            blocks.sort_by_key(|(b, _)| b[0]);
            let subgroup_blocks: Vec<Vec<u8>> = blocks
                .iter()
                .filter(|(b, _)| b.len() >= 2)
                .map(|(b, _)| b.clone())
                .collect();
            let subgroup_order = subgroup_blocks.iter().map(|b| factorial(b.len())).product();
            let (blocks, edge_counts) = blocks.into_iter().unzip();
            out.push(CensusEntry {
                signature: Signature {
                    blocks,
                    edge_counts,
                },
                subgroup_blocks,
                subgroup_order,
            });
            Ok(())
        })?;
    }
    out.sort_by(|a, b| a.signature.cmp(&b.signature));
    Ok(out)
}

fn distribute(
    rest: u64,
    pos: usize,
    dist: &mut Vec<u64>,
    emit: &mut impl FnMut(&[u64]) -> Result<()>,
) -> Result<()> {
    if dist.is_empty() {
        return if rest == 0 { emit(&[]) } else { Ok(()) };
    }
    if pos + 1 == dist.len() {
        dist[pos] = rest;
        return emit(dist);
    }
    for v in 0..=rest {
        dist[pos] = v;
        distribute(rest - v, pos + 1, dist, emit)?;
    }
    Ok(())
}

fn binom_i(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || a < b {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for k in 0..b {
        out = out * BigInt::from(a - k) / BigInt::from(k + 1);
    }
    out
}

fn multinomial3(d: i64, a: i64, b: i64, c: i64) -> BigInt {
    if a < 0 || b < 0 || c < 0 {
        return BigInt::zero();
    }
    debug_assert_eq!(a + b + c, d);
    let f = |x: i64| (1..=x).map(BigInt::from).product::<BigInt>();
    f(d) / (f(a) * f(b) * f(c))
}

/// Stirling numbers of the second kind by the standard recurrence.
fn stirling2(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    if a == 0 {
        return BigInt::one();
    }
    if b == 0 {
        return BigInt::zero();
    }
    let (a, b) = (a as usize, b as usize);
    let mut row = vec![BigInt::zero(); b + 1];
    row[0] = BigInt::one();
    for n in 1..=a {
        let hi = b.min(n);
        for k in (1..=hi).rev() {
            row[k] = BigInt::from(k as u64) * &row[k] + &row[k - 1];
        }
        if n <= b {
            // S(n, k) = 0 for k > n; row[0] stops feeding after the start
            row[0] = BigInt::zero();
        }
    }
    row[b].clone()
}

/// Closed-form count of the degree-2n components on d points, the triple
/// alternating sum over Stirling numbers. Binomials with a negative upper
/// index vanish. Validated against the census for n ≥ 1: at n = 0 the sum
/// yields 0 although the empty component exists.
pub fn hf_closed_form(d: usize, n: u64) -> BigInt {
    let (dd, nn) = (d as i64, n as i64);
    let mut total = BigInt::zero();
    for s in 1..=dd {
        for w in 1..=s {
            for j in 0..=w {
                let b = binom_i(nn - dd + s + w - 1, w - 1);
                if b.is_zero() {
                    continue;
                }
                let m = multinomial3(dd, s - w, j, dd - s + w - j);
                if m.is_zero() {
                    continue;
                }
                let term = b * m * stirling2(dd - s + w - j, w - j);
                if j % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
        }
    }
    total
}

/// Leading coefficient of the eventual degree-⌊d/2⌋−1 polynomial in n of
/// the degree-2n count: d!/(2^{d'} d'! (d'−1)!) with d' = ⌊d/2⌋, times
/// (1 + d'/3) when d is odd.
pub fn hf_leading_coefficient(d: usize) -> BigRational {
    let dp = d / 2;
    let f = |x: usize| (1..=x).map(BigInt::from).product::<BigInt>();
    let base = BigRational::new(
        f(d),
        BigInt::from(2u64).pow(dp as u32) * f(dp) * f(dp.saturating_sub(1)).max(BigInt::one()),
    );
    if d % 2 == 1 {
        base * BigRational::new(BigInt::from(3 + dp), BigInt::from(3))
    } else {
        base
    }
}

/// Number of degree-n components generating the full symmetric group: one
/// when n is even and at least 2(d − 1), zero otherwise.
pub fn full_group_count(d: usize, n: u32) -> u64 {
    u64::from(d >= 2 && n % 2 == 0 && n as u64 >= 2 * (d as u64 - 1))
}

/// Compares the closed form against the census at every even degree up to
/// `max_degree`. The census is authoritative; a mismatch names the degree.
/// Returns the number of degrees checked.
pub fn check_formula(d: usize, max_degree: u32, caps: &Caps) -> Result<u32> {
    let mut checked = 0;
    for n in (2..=max_degree).step_by(2) {
        let census = component_census_sd(d, n, caps)?.len();
        let formula = hf_closed_form(d, n as u64 / 2);
        if BigInt::from(census) != formula {
            return Err(Error::InvalidInput(format!(
                "closed form disagrees with the census at d = {d}, degree {n}: formula {formula}, census {census}"
            )));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Transposition pairs (1-based) of a representative in squares normal
/// form: a doubled spanning path per block, surplus doubled on the first
/// pair. Rejects inadmissible signatures.
pub fn signature_rep_pairs(sig: &Signature) -> Result<Vec<(u8, u8)>> {
    let mut half: Vec<(u8, u8)> = Vec::new();
    for (b, &e) in sig.blocks.iter().zip(&sig.edge_counts) {
        let v = b.len() as u64;
        if v == 1 {
            if e != 0 {
                return Err(Error::InvalidInput(format!(
                    "singleton block {} carries {e} edges",
                    b[0]
                )));
            }
            continue;
        }
        if e % 2 != 0 || e < 2 * (v - 1) {
            return Err(Error::InvalidInput(format!(
                "block of {v} points needs an even edge count of at least {}, got {e}",
                2 * (v - 1)
            )));
        }
        for w in b.windows(2) {
            half.push((w[0], w[1]));
        }
        for _ in 0..(e / 2 - (v - 1)) {
            half.push((b[0], b[1]));
        }
    }
    Ok(half.into_iter().flat_map(|p| [p, p]).collect())
}

/// Representative tuple of an admissible signature, in squares normal form.
pub fn signature_tuple(ctx: &GroupContext, sig: &Signature) -> Result<Vec<ElemId>> {
    signature_rep_pairs(sig)?
        .into_iter()
        .map(|(i, j)| {
            let p = Permutation::from_cycles(&[vec![i - 1, j - 1]], ctx.degree())?;
            ctx.id_of(&p).ok_or_else(|| Error::NotAMember {
                element: p.to_string(),
                container: "the group".into(),
            })
        })
        .collect()
}

/// DOT rendering of one representative multigraph of the signature.
pub fn signature_dot(sig: &Signature) -> String {
    let mut out = String::from("graph signature {\n");
    for b in &sig.blocks {
        for &p in b {
            writeln!(out, "  p{p};").unwrap();
        }
    }
    let mut mult: BTreeMap<(u8, u8), u32> = BTreeMap::new();
    for (i, j) in signature_rep_pairs(sig).unwrap_or_default() {
        *mult.entry((i.min(j), i.max(j))).or_insert(0) += 1;
    }
    for ((i, j), m) in &mult {
        writeln!(out, "  p{i} -- p{j} [label=\"{m}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Serialize)]
pub struct PresentationReport {
    pub d: usize,
    pub generator_count: usize,
    pub relation_triples: usize,
    /// Total degree through which rewrite-connectivity was exhausted.
    pub completeness_degree: u32,
    pub monomials_checked: u64,
}

/// Confirms the degree-2 components are exactly the transposition squares
/// X_ij, that X_ij X_jk = X_ik X_jk = X_ij X_ik holds in the table, and
/// that these relations connect any two equal-degree monomials with the
/// same signature, exhaustively through total degree 6.
pub fn verify_presentation(table: &MonoidTable) -> Result<PresentationReport> {
    if table.max_degree < 6 {
        return Err(Error::TableTooSmall {
            needed: 6,
            have: table.max_degree,
        });
    }
    let ctx = &table.ctx;
    let d = ctx.degree();

    // (a) degree-2 components are the squares of the C(d,2) transpositions
    let mut gen_pairs: Vec<(u8, u8)> = Vec::new();
    let mut gen_refs: Vec<CompRef> = Vec::new();
    for (r, c) in table.comps_at(2) {
        let canon = c.canonical.as_ref().ok_or(Error::InsufficientData {
            detail: "degree 2 was not enumerated exhaustively".into(),
        })?;
        let pts = (canon.len() == 2 && canon[0] == canon[1])
            .then(|| transposition_points(ctx.perm(canon[0])))
            .flatten();
        let Some((i, j)) = pts else {
            return Err(Error::InvalidInput(format!(
                "degree-2 component {} is not a transposition square",
                r.index
            )));
        };
        gen_pairs.push((i + 1, j + 1));
        gen_refs.push(r);
    }
    if gen_pairs.len() != d * (d - 1) / 2 {
        return Err(Error::InvalidInput(format!(
            "expected {} degree-2 generators, found {}",
            d * (d - 1) / 2,
            gen_pairs.len()
        )));
    }
    let gen_index: HashMap<(u8, u8), usize> = gen_pairs
        .iter()
        .enumerate()
        .map(|(k, &p)| (p, k))
        .collect();

    // (b) the defining relations as equalities of table products
    let mut relation_triples = 0;
    for i in 1..=d as u8 {
        for j in i + 1..=d as u8 {
            for k in j + 1..=d as u8 {
                let x = |a: u8, b: u8| gen_refs[gen_index[&(a.min(b), a.max(b))]];
                let ij_jk = table.multiply(x(i, j), x(j, k))?;
                let ik_jk = table.multiply(x(i, k), x(j, k))?;
                let ij_ik = table.multiply(x(i, j), x(i, k))?;
                if ij_jk != ik_jk || ik_jk != ij_ik {
                    return Err(Error::InvalidInput(format!(
                        "relation fails on points ({i},{j},{k})"
                    )));
                }
                relation_triples += 1;
            }
        }
    }

    // (c) rewrite-connectivity of equal-signature monomials
    let completeness_degree = 6.min(table.max_degree);
    let mut monomials_checked = 0u64;
    for m in 2..=(completeness_degree / 2) as usize {
        let multis = multisets(gen_pairs.len(), m);
        let index: HashMap<Vec<usize>, usize> = multis
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), k))
            .collect();
        let mut uf: Vec<usize> = (0..multis.len()).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            let mut c = x;
            while uf[c] != r {
                let n = uf[c];
                uf[c] = r;
                c = n;
            }
            r
        }
        for (mi, multi) in multis.iter().enumerate() {
            for a in 0..m {
                for b in a + 1..m {
                    let (pa, pb) = (gen_pairs[multi[a]], gen_pairs[multi[b]]);
                    let shared: Vec<u8> = [pa.0, pa.1]
                        .into_iter()
                        .filter(|p| *p == pb.0 || *p == pb.1)
                        .collect();
                    if shared.len() != 1 {
                        continue;
                    }
                    let mut tri = vec![pa.0, pa.1, pb.0, pb.1];
                    tri.sort_unstable();
                    tri.dedup();
                    let (i, j, k) = (tri[0], tri[1], tri[2]);
                    for variant in [[(i, j), (j, k)], [(i, k), (j, k)], [(i, j), (i, k)]] {
                        let mut next = multi.clone();
                        next.remove(b);
                        next.remove(a);
                        next.push(gen_index[&variant[0]]);
                        next.push(gen_index[&variant[1]]);
                        next.sort_unstable();
                        let (ra, rb) = (find(&mut uf, mi), find(&mut uf, index[&next]));
                        uf[ra] = rb;
                    }
                }
            }
        }
        // signatures and table products per rewrite class must agree
        let mut by_sig: BTreeMap<Signature, Vec<usize>> = BTreeMap::new();
        for (mi, multi) in multis.iter().enumerate() {
            let mut g = Multigraph::new(d);
            for &gi in multi {
                let (i, j) = gen_pairs[gi];
                g.add_edge(i, j)?;
                g.add_edge(i, j)?;
            }
            by_sig.entry(signature(&g)).or_default().push(mi);
            monomials_checked += 1;
        }
        for (sig, members) in &by_sig {
            let root = find(&mut uf, members[0]);
            let prod = |mi: usize| -> Result<CompRef> {
                multis[mi]
                    .iter()
                    .try_fold(table.identity(), |acc, &gi| table.multiply(acc, gen_refs[gi]))
            };
            let key = prod(members[0])?;
            for &mi in &members[1..] {
                if find(&mut uf, mi) != root {
                    return Err(Error::InvalidInput(format!(
                        "monomials with signature {sig:?} are not connected by the relations"
                    )));
                }
                if prod(mi)? != key {
                    return Err(Error::InvalidInput(format!(
                        "monomials with signature {sig:?} multiply to different components"
                    )));
                }
            }
        }
    }
    Ok(PresentationReport {
        d,
        generator_count: gen_pairs.len(),
        relation_triples,
        completeness_degree,
        monomials_checked,
    })
}

fn multisets(g: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn go(g: usize, m: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in from..g {
            cur.push(i);
            go(g, m, i, cur, out);
            cur.pop();
        }
    }
    go(g, m, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid;
    use crate::monoid::enumerate_components;
    use crate::subgroups::ClassData;

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

    fn transposition_table(n: usize, max_degree: u32) -> MonoidTable {
        let ctx = s_n(n);
        let rep = Permutation::parse("(1 2)", n).unwrap();
        let classes = ClassData::new(&ctx, &[rep], vec![1]).unwrap();
        enumerate_components(ctx, classes, max_degree, &Caps::default()).unwrap()
    }

    fn tuple(ctx: &GroupContext, entries: &[&str]) -> Vec<ElemId> {
        entries
            .iter()
            .map(|s| {
                ctx.id_of(&Permutation::parse(s, ctx.degree()).unwrap())
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn multigraph_counts_edge_occurrences() {
        let ctx = s_n(3);
        let g = tuple_to_multigraph(&ctx, &tuple(&ctx, &["(1 2)", "(1 2)"])).unwrap();
        assert_eq!(g.edges, BTreeMap::from([((1, 2), 2)]));

        let g = tuple_to_multigraph(
            &ctx,
            &tuple(&ctx, &["(1 2)", "(2 3)", "(1 2)", "(2 3)"]),
        )
        .unwrap();
        assert_eq!(g.edges, BTreeMap::from([((1, 2), 2), ((2, 3), 2)]));
        assert_eq!(g.edge_count(), 4);

        assert_eq!(tuple_to_multigraph(&ctx, &[]).unwrap().edges.len(), 0);

        let threecycle = tuple(&ctx, &["(1 2 3)"]);
        assert!(matches!(
            tuple_to_multigraph(&ctx, &threecycle),
            Err(Error::NonTransposition { .. })
        ));
    }

    #[test]
    fn signatures_read_off_connected_components() {
        let mut g = Multigraph::new(3);
        g.add_edge(1, 2).unwrap();
        g.add_edge(2, 1).unwrap();
        let s = signature(&g);
        assert_eq!(s.blocks, vec![vec![1, 2], vec![3]]);
        assert_eq!(s.edge_counts, vec![2, 0]);

        let mut g = Multigraph::new(3);
        g.add_edge(1, 2).unwrap();
        g.add_edge(2, 3).unwrap();
        let s = signature(&g);
        assert_eq!(s.blocks, vec![vec![1, 2, 3]]);
        assert_eq!(s.edge_counts, vec![2]);

        let mut g = Multigraph::new(4);
        g.add_edge(1, 2).unwrap();
        for _ in 0..3 {
            g.add_edge(3, 4).unwrap();
        }
        let s = signature(&g);
        assert_eq!(s.blocks, vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(s.edge_counts, vec![1, 3]);
    }

    #[test]
    fn census_reproduces_the_worked_counts() {
        let caps = Caps::default();
        let c34 = component_census_sd(3, 4, &caps).unwrap();
        assert_eq!(c34.len(), 4);
        let singles = c34
            .iter()
            .filter(|e| e.subgroup_blocks.len() == 1 && e.subgroup_blocks[0].len() == 2)
            .count();
        let triples = c34
            .iter()
            .filter(|e| e.subgroup_blocks == vec![vec![1, 2, 3]])
            .count();
        assert_eq!((singles, triples), (3, 1));
        assert!(c34.iter().all(|e| e.signature.degree() == 4));

        let c46 = component_census_sd(4, 6, &caps).unwrap();
        assert_eq!(c46.len(), 17);
        let shape = |e: &CensusEntry| {
            let mut s: Vec<usize> = e.subgroup_blocks.iter().map(|b| b.len()).collect();
            s.sort_unstable();
            s
        };
        assert_eq!(c46.iter().filter(|e| shape(e) == [2]).count(), 6);
        assert_eq!(c46.iter().filter(|e| shape(e) == [3]).count(), 4);
        assert_eq!(c46.iter().filter(|e| shape(e) == [4]).count(), 1);
        assert_eq!(c46.iter().filter(|e| shape(e) == [2, 2]).count(), 6);

        assert!(component_census_sd(3, 5, &caps).unwrap().is_empty());
        assert_eq!(component_census_sd(4, 0, &caps).unwrap().len(), 1);
        assert!(matches!(
            component_census_sd(13, 4, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn census_agrees_with_orbit_enumeration() {
        // Oracle first: the braid-orbit census from the exhaustive table.
        for (d, max_degree) in [(3usize, 8u32), (4, 6)] {
            let table = transposition_table(d, max_degree);
            for n in (0..=max_degree).step_by(2) {
                let mut orbit_side: Vec<(Signature, u64)> = table
                    .comps_at(n)
                    .map(|(_, c)| {
                        let g = tuple_to_multigraph(&table.ctx, &c.rep).unwrap();
                        (
                            signature(&g),
                            table.registry.get(c.subgroup).order() as u64,
                        )
                    })
                    .collect();
                orbit_side.sort();
                let census = component_census_sd(d, n, &Caps::default()).unwrap();
                let census_side: Vec<(Signature, u64)> = census
                    .iter()
                    .map(|e| (e.signature.clone(), e.subgroup_order))
                    .collect();
                assert_eq!(orbit_side, census_side, "d = {d}, degree {n}");
            }
        }
    }

    #[test]
    fn representatives_realize_their_signatures() {
        let ctx = s_n(4);
        for n in [0u32, 2, 4, 6, 8] {
            for entry in component_census_sd(4, n, &Caps::default()).unwrap() {
                let t = signature_tuple(&ctx, &entry.signature).unwrap();
                assert_eq!(t.len() as u32, n);
                assert_eq!(braid::product(&ctx, &t), ctx.identity_id());
                let g = tuple_to_multigraph(&ctx, &t).unwrap();
                assert_eq!(signature(&g), entry.signature);
            }
        }
        let bad = Signature {
            blocks: vec![vec![1, 2, 3], vec![4]],
            edge_counts: vec![2, 0],
        };
        assert!(signature_rep_pairs(&bad).is_err());
    }

    #[test]
    fn stirling_numbers_match_partition_enumeration() {
        // Oracle: count the set partitions of {0..a} into b blocks directly.
        fn count_partitions(a: usize, b: usize) -> u64 {
            fn go(next: usize, a: usize, blocks: &mut Vec<Vec<usize>>, b: usize) -> u64 {
                if next == a {
                    return u64::from(blocks.len() == b);
                }
                let mut total = 0;
                for i in 0..blocks.len() {
                    blocks[i].push(next);
                    total += go(next + 1, a, blocks, b);
                    blocks[i].pop();
                }
                blocks.push(vec![next]);
                total += go(next + 1, a, blocks, b);
                blocks.pop();
                total
            }
            go(0, a, &mut Vec::new(), b)
        }
        for a in 0..=8i64 {
            for b in 0..=8i64 {
                assert_eq!(
                    stirling2(a, b),
                    BigInt::from(count_partitions(a as usize, b as usize)),
                    "S({a},{b})"
                );
            }
        }
        assert!(stirling2(3, 5).is_zero());
        assert!(stirling2(-1, 0).is_zero());
    }

    #[test]
    fn closed_form_is_validated_by_the_census() {
        let caps = Caps::default();
        for d in 2..=5 {
            for n in 1..=8u64 {
                let census = component_census_sd(d, 2 * n as u32, &caps).unwrap().len();
                assert_eq!(
                    hf_closed_form(d, n),
                    BigInt::from(census),
                    "d = {d}, half-degree {n}"
                );
            }
        }
        // The sum misses the empty component.
        assert!(hf_closed_form(4, 0).is_zero());

        assert_eq!(hf_closed_form(3, 1), BigInt::from(3));
        for n in 2..=20u64 {
            assert_eq!(hf_closed_form(3, n), BigInt::from(4));
        }
        for n in 3..=20u64 {
            assert_eq!(hf_closed_form(4, n), BigInt::from(3 * n + 8));
        }
        assert_eq!(check_formula(5, 16, &caps).unwrap(), 8);
    }

    #[test]
    fn eventual_polynomials_have_the_stated_degree_and_leading_term() {
        assert_eq!(hf_leading_coefficient(3), BigRational::from(BigInt::from(4)));
        assert_eq!(hf_leading_coefficient(4), BigRational::from(BigInt::from(3)));
        assert_eq!(
            hf_leading_coefficient(5),
            BigRational::from(BigInt::from(25))
        );
        assert_eq!(
            hf_leading_coefficient(6),
            BigRational::new(BigInt::from(15), BigInt::from(2))
        );

        // d = 5: linear from n ≥ 4 with slope 25
        for n in 4..=12u64 {
            let diff = hf_closed_form(5, n + 1) - hf_closed_form(5, n);
            assert_eq!(diff, BigInt::from(25));
        }
        // d = 6: quadratic from n ≥ 5; second difference = 2 · 15/2
        for n in 5..=12u64 {
            let d2 = hf_closed_form(6, n + 2) - BigInt::from(2) * hf_closed_form(6, n + 1)
                + hf_closed_form(6, n);
            assert_eq!(d2, BigInt::from(15));
        }
    }

    #[test]
    fn full_group_components_appear_at_twice_d_minus_one() {
        let caps = Caps::default();
        for d in 3..=5usize {
            for n in 0..=14u32 {
                let want = full_group_count(d, n);
                let have = component_census_sd(d, n, &caps)
                    .unwrap()
                    .iter()
                    .filter(|e| e.subgroup_blocks.len() == 1 && e.subgroup_blocks[0].len() == d)
                    .count() as u64;
                assert_eq!(have, want, "d = {d}, degree {n}");
            }
        }
    }

    #[test]
    fn presentation_checks_out_on_small_tables() {
        let t3 = transposition_table(3, 6);
        let r = verify_presentation(&t3).unwrap();
        assert_eq!((r.generator_count, r.relation_triples), (3, 1));
        assert!(r.monomials_checked > 0);

        let t4 = transposition_table(4, 6);
        let r = verify_presentation(&t4).unwrap();
        assert_eq!((r.generator_count, r.relation_triples), (6, 4));

        // disjoint versus overlapping supports stay distinct
        let x = |a: &str| {
            let e = t4.ctx.id_of(&Permutation::parse(a, 4).unwrap()).unwrap();
            t4.canonical_lookup(2, &[e, e]).unwrap()
        };
        let disjoint = t4.multiply(x("(1 2)"), x("(3 4)")).unwrap();
        let overlap = t4.multiply(x("(1 2)"), x("(1 3)")).unwrap();
        assert_ne!(disjoint, overlap);
        // commuting monomials reorder freely
        assert_eq!(
            t4.multiply(x("(3 4)"), x("(1 2)")).unwrap(),
            disjoint
        );

        let shallow = transposition_table(3, 4);
        assert!(matches!(
            verify_presentation(&shallow),
            Err(Error::TableTooSmall { needed: 6, .. })
        ));
    }

    #[test]
    fn random_product_one_tuples_reach_squares_form() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let ctx = s_n(4);
        let transpositions: Vec<ElemId> = (0..ctx.order() as ElemId)
            .filter(|&e| ctx.perm(e).is_transposition())
            .collect();
        let mut rng = StdRng::seed_from_u64(11);
        let mut found = 0;
        while found < 25 {
            let t: Vec<ElemId> = (0..6)
                .map(|_| transpositions[rng.random_range(0..transpositions.len())])
                .collect();
            if braid::product(&ctx, &t) != ctx.identity_id() {
                continue;
            }
            found += 1;
            let sig = signature(&tuple_to_multigraph(&ctx, &t).unwrap());
            let rep = signature_tuple(&ctx, &sig).unwrap();
            assert!(braid::equivalent(&ctx, &t, &rep, 1_000_000).unwrap());
        }
    }

    #[test]
    fn doubled_pair_moves_stay_in_one_orbit() {
        let ctx = s_n(4);
        for (i, j, k) in [(1u8, 2u8, 3u8), (1, 3, 4), (2, 3, 4)] {
            let pair = |a: u8, b: u8| format!("({a} {b})");
            let t1 = tuple(
                &ctx,
                &[&pair(i, j), &pair(i, j), &pair(j, k), &pair(j, k)],
            );
            let t2 = tuple(
                &ctx,
                &[&pair(i, k), &pair(i, k), &pair(j, k), &pair(j, k)],
            );
            assert!(braid::equivalent(&ctx, &t1, &t2, 1_000_000).unwrap());
        }
    }

    #[test]
    fn signature_dot_is_deterministic_and_labelled() {
        let caps = Caps::default();
        let census = component_census_sd(4, 6, &caps).unwrap();
        let full = census
            .iter()
            .find(|e| e.subgroup_blocks == vec![vec![1, 2, 3, 4]])
            .unwrap();
        let dot = signature_dot(&full.signature);
        assert_eq!(dot, signature_dot(&full.signature));
        assert!(dot.starts_with("graph signature {"));
        assert_eq!(dot.matches("p1;").count(), 1);
        assert!(dot.contains(" -- "));
        assert!(dot.contains("label="));
    }
}
