//! Growth analysis of per-subgroup component counts.
//!
//! The central objects are the likely maps of a subgroup H: candidate
//! multidiscriminants ψ at degree n, those with per-class sums matching n·ξ.
//! Every component lands on one, components generating H land on the ones
//! with trivial abelianization obstruction, and the number of components per
//! such ψ is eventually a constant V. The reports here count likely maps
//! exactly, detect the eventual period and constant of a subgroup's count
//! sequence, and run the averaged leading-coefficient consistency check.

use crate::error::{Error, Result};
use crate::group::{ElemId, GroupContext};
use crate::monoid::MonoidTable;
use crate::subgroups::{Abelianization, ClassData, SubgroupId, SubgroupRecord};
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Exact C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn fiber_check(classes: &ClassData, h: &SubgroupRecord) -> Result<Vec<usize>> {
    let fibers = h.fiber_sizes(classes.num_classes());
    if let Some(c) = fibers.iter().position(|&k| k == 0) {
        return Err(Error::OmegaUndefined { class: c });
    }
    Ok(fibers)
}

/// Number of H-likely maps of degree n: over each distinguished class c with
/// k splittings in H, the weak compositions of n·ξ(c) into k parts.
pub fn count_likely_maps(classes: &ClassData, h: &SubgroupRecord, n: u32) -> Result<BigUint> {
    let fibers = fiber_check(classes, h)?;
    let mut acc = BigUint::one();
    for (c, &k) in fibers.iter().enumerate() {
        let target = n as u64 * classes.xi[c] as u64;
        acc *= binomial(target + k as u64 - 1, k as u64 - 1);
    }
    Ok(acc)
}

/// Leading coefficient of the likely-map count in n: Π_c ξ(c)^{k−1}/(k−1)!.
pub fn likely_leading_coefficient(classes: &ClassData, h: &SubgroupRecord) -> Result<BigRational> {
    let fibers = fiber_check(classes, h)?;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (c, &k) in fibers.iter().enumerate() {
        num *= BigUint::from(classes.xi[c] as u64).pow(k as u32 - 1);
        for i in 1..k as u64 {
            den *= BigUint::from(i);
        }
    }
    Ok(BigRational::new(num.into(), den.into()))
}

/// All H-likely maps of degree n as vectors over the H-classes, in
/// lexicographic order. The H-classes over one distinguished class are
/// consecutive, so each map is a concatenation of weak compositions.
pub fn enumerate_likely(classes: &ClassData, h: &SubgroupRecord, n: u32) -> Result<Vec<Vec<u32>>> {
    let fibers = fiber_check(classes, h)?;
    debug_assert!(h
        .d_classes
        .windows(2)
        .all(|w| w[0].tau <= w[1].tau));
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for (c, &k) in fibers.iter().enumerate() {
        let target = n * classes.xi[c];
        let mut parts: Vec<Vec<u32>> = Vec::new();
        let mut cur = vec![0u32; k];
        compositions(target, 0, &mut cur, &mut parts);
        out = out
            .iter()
            .flat_map(|prefix| {
                parts.iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(p);
                    v
                })
            })
            .collect();
    }
    Ok(out)
}

fn compositions(rest: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == cur.len() {
        cur[pos] = rest;
        out.push(cur.clone());
        return;
    }
    for v in 0..=rest {
        cur[pos] = v;
        compositions(rest - v, pos + 1, cur, out);
    }
}

/// A candidate multidiscriminant with its abelianization verdict.
#[derive(Debug, Clone, Serialize)]
pub struct LikelyMap {
    pub psi: Vec<u32>,
    pub degree: u32,
    pub really_likely: bool,
}

/// Class representative images in H^{ab}, one per H-class.
fn class_cosets(h: &SubgroupRecord, ab: &Abelianization) -> Vec<u32> {
    h.d_classes
        .iter()
        .map(|c| ab.coset_of(c.members[0]).expect("class members lie in H"))
        .collect()
}

fn obstruction(ab: &Abelianization, cosets: &[u32], psi: &[u32]) -> u32 {
    psi.iter()
        .zip(cosets)
        .fold(0, |acc, (&e, &c)| ab.mul(acc, ab.pow(c, e as u64)))
}

/// Likely maps of degree n with the really-likely flag: ψ is really likely
/// when Π c̃^{ψ(c)} is the identity coset of H^{ab}.
pub fn likely_maps(
    ctx: &GroupContext,
    classes: &ClassData,
    h: &SubgroupRecord,
    n: u32,
) -> Result<Vec<LikelyMap>> {
    let ab = Abelianization::new(ctx, h);
    let cosets = class_cosets(h, &ab);
    Ok(enumerate_likely(classes, h, n)?
        .into_iter()
        .map(|psi| {
            let really_likely = obstruction(&ab, &cosets, &psi) == 0;
            LikelyMap {
                psi,
                degree: n,
                really_likely,
            }
        })
        .collect())
}

pub fn enumerate_really_likely(
    ctx: &GroupContext,
    classes: &ClassData,
    h: &SubgroupRecord,
    n: u32,
) -> Result<Vec<Vec<u32>>> {
    Ok(likely_maps(ctx, classes, h, n)?
        .into_iter()
        .filter(|m| m.really_likely)
        .map(|m| m.psi)
        .collect())
}

/// Which components a census covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Components whose group is contained in H.
    Within,
    /// Components whose group is exactly H.
    Exact,
}

/// Degree-n component counts keyed by μ_H.
pub fn multidiscriminant_census(
    table: &MonoidTable,
    h: SubgroupId,
    n: u32,
    scope: Scope,
) -> Result<BTreeMap<Vec<u32>, u64>> {
    let rec = table.registry.get(h);
    let mut out: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for (_, c) in table.comps_at(n) {
        let keep = match scope {
            Scope::Within => table.registry.contains(h, c.subgroup),
            Scope::Exact => c.subgroup == h,
        };
        if keep {
            *out.entry(rec.multidiscriminant(&table.ctx, &c.rep)?).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// Exponent of the subgroup: lcm of its element orders.
pub fn subgroup_exponent(ctx: &GroupContext, h: &SubgroupRecord) -> u64 {
    h.elements
        .iter()
        .fold(1u64, |acc, &x| acc.lcm(&(ctx.element_order(x) as u64)))
}

/// Product-one tuple with e·ψ(c) copies of a member of each H-class c, for
/// e the exponent of H. Concatenation to any tuple adds e·ψ to μ_H while
/// keeping the product and shifting the degree by e·(degree of ψ).
pub fn psi_seed_tuple(ctx: &GroupContext, h: &SubgroupRecord, psi: &[u32]) -> Vec<ElemId> {
    let e = subgroup_exponent(ctx, h);
    let mut t = Vec::new();
    for (c, &count) in h.d_classes.iter().zip(psi) {
        for _ in 0..(e * count as u64) {
            t.push(c.members[0]);
        }
    }
    t
}

/// Growth summary for one subgroup's count sequence.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub subgroup: SubgroupId,
    pub subgroup_order: usize,
    pub omega: Option<u32>,
    /// Largest tabulated degree.
    pub window: u32,
    /// Degrees with a positive count.
    pub nonzero_degrees: Vec<u32>,
    /// Order of the abelianization obstruction of the forced map; degrees
    /// carrying group-H components are multiples of it when Ω = 0.
    pub period: Option<u32>,
    /// Eventual component count per really-likely multidiscriminant.
    pub stable_value: Option<u64>,
    /// Ω = 0 only: counts equal `stable_value` on multiples of `period` from
    /// this degree through the window.
    pub degree_threshold: Option<u32>,
    /// Every tabulated really-likely ψ at or above this vector, classwise,
    /// had exactly `stable_value` components.
    pub per_class_threshold: Option<Vec<u32>>,
    /// (min, max) of count(n)/n^Ω over nonzero degrees in the top half.
    pub ratio_fit: Option<(f64, f64)>,
    /// Largest per-multidiscriminant component count in the window.
    pub sandwich_c: u64,
}

/// Count sequence for components of group exactly h.
pub fn count_sequence(table: &MonoidTable, h: SubgroupId) -> Vec<u64> {
    let mut hf = vec![0u64; table.max_degree as usize + 1];
    for (r, c) in table.all_comps() {
        if c.subgroup == h {
            hf[r.degree as usize] += 1;
        }
    }
    hf
}

/// Detects the eventual behavior of the subgroup's count sequence within the
/// table window. Thresholds are observed, never extrapolated: a window too
/// small to pin them down is reported as insufficient data.
pub fn stabilization_report(table: &MonoidTable, h: SubgroupId) -> Result<GrowthReport> {
    let rec = table.registry.get(h);
    let window = table.max_degree;
    let hf = count_sequence(table, h);
    let nonzero_degrees: Vec<u32> = (0..=window).filter(|&n| hf[n as usize] > 0).collect();

    if h == table.registry.trivial_id() {
        // The lone degree-0 component; nothing beyond it, ever.
        return Ok(GrowthReport {
            subgroup: h,
            subgroup_order: 1,
            omega: None,
            window,
            nonzero_degrees,
            period: None,
            stable_value: Some(0),
            degree_threshold: Some(1),
            per_class_threshold: None,
            ratio_fit: None,
            sandwich_c: 1,
        });
    }
    if !rec.d_generated {
        return Err(Error::InsufficientData {
            detail: format!("subgroup {h} carries no components in this setting"),
        });
    }
    let omega = rec.omega.ok_or(Error::OmegaUndefined { class: 0 })?;
    if nonzero_degrees.len() < 3 {
        return Err(Error::InsufficientData {
            detail: format!(
                "{} nonzero counts for subgroup {h} in a window of {window}; need 3",
                nonzero_degrees.len()
            ),
        });
    }

    let ab = Abelianization::new(&table.ctx, rec);
    let cosets = class_cosets(rec, &ab);
    let forced: Vec<u32> = rec
        .d_classes
        .iter()
        .map(|c| table.classes.xi[c.tau])
        .collect();
    let period = ab.element_order(obstruction(&ab, &cosets, &forced)) as u32;

    // Per-ψ counts over every tabulated degree, really-likely ψ only.
    let mut per_psi: Vec<(Vec<u32>, u64)> = Vec::new();
    let mut sandwich_c = 0u64;
    for n in 1..=window {
        let census = multidiscriminant_census(table, h, n, Scope::Exact)?;
        sandwich_c = sandwich_c.max(census.values().copied().max().unwrap_or(0));
        for psi in enumerate_really_likely(&table.ctx, &table.classes, rec, n)? {
            let count = census.get(&psi).copied().unwrap_or(0);
            per_psi.push((psi, count));
        }
    }

    let (stable_value, degree_threshold) = if omega == 0 {
        debug_assert!(nonzero_degrees.iter().all(|&n| n % period == 0));
        let v = hf[window as usize - (window % period) as usize];
        let mut threshold = None;
        let mut t = window - (window % period);
        while t >= period && hf[t as usize] == v {
            threshold = Some(t);
            t -= period;
        }
        let t = threshold.ok_or_else(|| Error::InsufficientData {
            detail: format!("no constant tail for subgroup {h} in a window of {window}"),
        })?;
        if (window - t) / period + 1 < 3 {
            return Err(Error::InsufficientData {
                detail: format!(
                    "constant tail for subgroup {h} holds only from degree {t} of {window}; need 3 values"
                ),
            });
        }
        (Some(v), Some(t))
    } else {
        // Infer the eventual per-ψ constant from the deepest maps when the
        // data reaches that far: at least 3 maps sharing the maximal
        // min-coordinate band must agree.
        let mut by_depth: Vec<(u32, u64)> = per_psi
            .iter()
            .map(|(psi, c)| (psi.iter().copied().min().unwrap_or(0), *c))
            .collect();
        by_depth.sort_by(|a, b| b.0.cmp(&a.0));
        let v = by_depth.first().map(|&(_, c)| c);
        let agreed = v.is_some_and(|v| {
            by_depth.len() >= 3 && by_depth[..3].iter().all(|&(_, c)| c == v)
        });
        (if agreed { v } else { None }, None)
    };

    let per_class_threshold = stable_value.map(|v| {
        let m = rec.d_classes.len();
        let bad: Vec<&Vec<u32>> = per_psi
            .iter()
            .filter(|(_, c)| *c != v)
            .map(|(p, _)| p)
            .collect();
        // Start from the scalar box excluding every bad map (each has a
        // coordinate below it), then greedily lower one class at a time while
        // the box {ψ ≥ t} stays free of bad maps.
        let m0 = bad
            .iter()
            .map(|p| p.iter().copied().min().unwrap_or(0) + 1)
            .max()
            .unwrap_or(0);
        let mut t = vec![m0; m];
        for i in 0..m {
            for lo in 0..=m0 {
                t[i] = lo;
                if bad
                    .iter()
                    .all(|p| p.iter().zip(&t).any(|(&x, &ti)| x < ti))
                {
                    break;
                }
            }
        }
        t
    });

    let ratio_fit = if omega > 0 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &n in &nonzero_degrees {
            if n > window / 2 {
                let r = hf[n as usize] as f64 / (n as f64).powi(omega as i32);
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        if lo.is_finite() {
            Some((lo, hi))
        } else {
            None
        }
    } else {
        None
    };

    Ok(GrowthReport {
        subgroup: h,
        subgroup_order: rec.order(),
        omega: Some(omega),
        window,
        nonzero_degrees,
        period: Some(period),
        stable_value,
        degree_threshold,
        per_class_threshold,
        ratio_fit,
        sandwich_c,
    })
}

/// Averaged leading-coefficient consistency check.
#[derive(Debug, Clone, Serialize)]
pub struct LeadingReport {
    pub subgroup: SubgroupId,
    /// Ω + 1, the polynomial degree of the cumulative count.
    pub s: u32,
    pub ab_order: u64,
    pub window: u32,
    /// Σ_{k≤n} count(k) · s! · |H^{ab}| / n^s at n = window.
    pub estimate: f64,
    pub estimate_exact: String,
    /// Product of the stable values of the given factors.
    pub expected: u64,
    pub relative_error: f64,
    pub consistent: bool,
}

/// Compares the cumulative count sum against the product of the factors'
/// stable values. The factors are the non-splitter constituents of h (h
/// itself when h does not split). Requires the single-class, multiplicity-one
/// setting the averaged statement is proved in.
pub fn average_leading_coefficient(
    table: &MonoidTable,
    h: SubgroupId,
    factors: &[SubgroupId],
) -> Result<LeadingReport> {
    if table.classes.num_classes() != 1 || table.classes.xi != vec![1] {
        return Err(Error::SettingViolated {
            required: "a single distinguished class with multiplicity 1",
            got: format!(
                "{} classes with multiplicities {:?}",
                table.classes.num_classes(),
                table.classes.xi
            ),
        });
    }
    let rec = table.registry.get(h);
    let omega = rec.omega.ok_or(Error::OmegaUndefined { class: 0 })?;
    let s = omega + 1;
    let window = table.max_degree;
    let hf = count_sequence(table, h);
    let total: u64 = hf.iter().sum();
    if total == 0 {
        return Err(Error::InsufficientData {
            detail: format!("no components of subgroup {h} in a window of {window}"),
        });
    }

    let ab_order = Abelianization::new(&table.ctx, rec).order() as u64;
    let mut num = BigUint::from(total) * BigUint::from(ab_order);
    for i in 1..=s as u64 {
        num *= BigUint::from(i);
    }
    let den = BigUint::from(window as u64).pow(s);
    let estimate_exact = BigRational::new(num.into(), den.into());

    let mut expected = 1u64;
    for &f in factors {
        let r = stabilization_report(table, f)?;
        expected *= r.stable_value.ok_or_else(|| Error::InsufficientData {
            detail: format!("no stable value inferred for factor subgroup {f}"),
        })?;
    }

    let rel = (&estimate_exact / BigRational::from_integer(expected.into())
        - BigRational::one())
    .abs();
    let tolerance = BigRational::new(1.into(), 4.into());
    Ok(LeadingReport {
        subgroup: h,
        s,
        ab_order,
        window,
        estimate: estimate_exact.to_f64().unwrap_or(f64::NAN),
        estimate_exact: estimate_exact.to_string(),
        expected,
        relative_error: rel.to_f64().unwrap_or(f64::NAN),
        consistent: rel <= tolerance,
    })
}
