//! Seeded property suite behind the `verify` subcommand.
//!
//! Every check is a pure function of the group, the class data, and the
//! seed, so runs are reproducible. Checks that do not apply to a setting
//! are reported as skipped rather than silently dropped.

use crate::asymptotics::{self, Scope};
use crate::braid;
use crate::config::Caps;
use crate::error::Result;
use crate::group::{ElemId, GroupContext};
use crate::monoid::{enumerate_components, MonoidTable};
use crate::subgroups::ClassData;
use crate::sym;
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::time::Instant;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Ok,
    Fail,
    Skip,
}

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
    /// Wall time; excluded from serialized reports to keep them reproducible.
    #[serde(skip)]
    pub millis: u64,
}

impl CheckResult {
    fn finish(name: &'static str, started: Instant, outcome: Result<String>) -> Self {
        let (status, detail) = match outcome {
            Ok(d) => (CheckStatus::Ok, d),
            Err(e) => (CheckStatus::Fail, e.to_string()),
        };
        CheckResult {
            name,
            status,
            detail,
            millis: started.elapsed().as_millis() as u64,
        }
    }

    fn skip(name: &'static str, why: &str) -> Self {
        CheckResult {
            name,
            status: CheckStatus::Skip,
            detail: why.to_string(),
            millis: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random (tuple, word) pairs for the invariance check.
    pub braid_samples: usize,
    /// Random product-one tuples for the rewriting-word lemmas.
    pub lemma_samples: usize,
    pub max_degree: u32,
    /// Worker threads for the sampled checks; 0 means available parallelism.
    pub workers: usize,
    pub caps: Caps,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            braid_samples: 2_500,
            lemma_samples: 1_000,
            max_degree: 8,
            workers: 1,
            caps: Caps::default(),
        }
    }
}

pub fn resolve_workers(requested: usize) -> usize {
    if requested == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        requested
    }
}

/// Per-sample RNG seed. Samples are seeded independently of each other so
/// splitting them across any number of workers gives identical results.
fn sample_seed(seed: u64, idx: usize) -> u64 {
    seed ^ (idx as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(0x1234_5678)
}

/// Runs `f` on every sample index, strided across workers. Reports the
/// failure with the smallest index, so the outcome does not depend on the
/// worker count.
fn run_parallel<F>(samples: usize, workers: usize, f: F) -> Result<()>
where
    F: Fn(usize) -> Result<()> + Sync,
{
    let workers = resolve_workers(workers).min(samples.max(1));
    if workers <= 1 {
        return (0..samples).try_for_each(f);
    }
    let failures: std::sync::Mutex<Vec<(usize, crate::error::Error)>> =
        std::sync::Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for w in 0..workers {
            let f = &f;
            let failures = &failures;
            scope.spawn(move || {
                let mut i = w;
                while i < samples {
                    if let Err(e) = f(i) {
                        failures.lock().unwrap().push((i, e));
                        return;
                    }
                    i += workers;
                }
            });
        }
    });
    let mut fails = failures.into_inner().unwrap();
    fails.sort_by_key(|&(i, _)| i);
    match fails.into_iter().next() {
        Some((_, e)) => Err(e),
        None => Ok(()),
    }
}

fn fail(msg: String) -> crate::error::Error {
    crate::error::Error::InvalidInput(msg)
}

fn class_multiset(classes: &ClassData, t: &[ElemId]) -> Vec<usize> {
    let mut c: Vec<usize> = t.iter().map(|e| classes.class_of_support[e]).collect();
    c.sort_unstable();
    c
}

fn random_word(rng: &mut StdRng, len: usize, max_moves: usize) -> Vec<(usize, bool)> {
    let n = rng.random_range(0..=max_moves);
    (0..n)
        .map(|_| (rng.random_range(0..len - 1), rng.random_bool(0.5)))
        .collect()
}

/// Braid moves preserve the product, the class multiset, and the generated
/// subgroup, and the reversed-inverted word undoes the original exactly.
pub fn braid_invariance(
    ctx: &GroupContext,
    classes: &ClassData,
    samples: usize,
    seed: u64,
    workers: usize,
) -> CheckResult {
    let started = Instant::now();
    let run = || -> Result<String> {
        run_parallel(samples, workers, |s| {
            let mut rng = StdRng::seed_from_u64(sample_seed(seed, s));
            let len = rng.random_range(2..=8);
            let t: Vec<ElemId> = (0..len)
                .map(|_| classes.support[rng.random_range(0..classes.support.len())])
                .collect();
            let word = random_word(&mut rng, len, 50);
            let mut u = t.clone();
            braid::apply_word(ctx, &mut u, &word)?;
            if braid::product(ctx, &u) != braid::product(ctx, &t)
                || class_multiset(classes, &u) != class_multiset(classes, &t)
                || ctx.closure_of(&u) != ctx.closure_of(&t)
            {
                return Err(fail(format!("invariant broken at sample {s}")));
            }
            let undo: Vec<(usize, bool)> =
                word.iter().rev().map(|&(i, inv)| (i, !inv)).collect();
            braid::apply_word(ctx, &mut u, &undo)?;
            if u != t {
                return Err(fail(format!("inverse word failed at sample {s}")));
            }
            Ok(())
        })?;
        Ok(format!("{samples} random words of length at most 50"))
    };
    CheckResult::finish("braid-invariants", started, run())
}

/// Random product-one tuple as scrambled inverse pairs. Entries stay inside
/// the class support because the distinguished classes are inverse-closed
/// for the shipped settings; a support without that property is reported.
fn random_product_one(
    ctx: &GroupContext,
    classes: &ClassData,
    rng: &mut StdRng,
    pairs: usize,
    scramble: bool,
) -> Result<Vec<ElemId>> {
    let mut t = Vec::with_capacity(2 * pairs);
    for _ in 0..pairs {
        let x = classes.support[rng.random_range(0..classes.support.len())];
        let xi = ctx.inv(x);
        if !classes.class_of_support.contains_key(&xi) {
            return Err(fail(format!(
                "class support is not inverse-closed at {}",
                ctx.perm(x)
            )));
        }
        t.push(x);
        t.push(xi);
    }
    if scramble && t.len() >= 2 {
        let word = random_word(rng, t.len(), 30);
        braid::apply_word(ctx, &mut t, &word)?;
    }
    Ok(t)
}

/// The constructive rewriting words act exactly as stated: rotation by one,
/// entrywise conjugation by an entry, and block swap and block conjugation
/// on product-one blocks.
pub fn rewriting_lemmas(
    ctx: &GroupContext,
    classes: &ClassData,
    samples: usize,
    seed: u64,
    workers: usize,
) -> CheckResult {
    let started = Instant::now();
    let run = || -> Result<String> {
        run_parallel(samples, workers, |s| {
            let mut rng = StdRng::seed_from_u64(sample_seed(seed, s) ^ 0x5ca1_ab1e);
            let pairs = rng.random_range(1..=4);
            let t = random_product_one(ctx, classes, &mut rng, pairs, true)?;
            let len = t.len();

            let mut rot = t.clone();
            braid::apply_word(ctx, &mut rot, &braid::rotate_left_word(len))?;
            let mut expect = t[1..].to_vec();
            expect.push(t[0]);
            if rot != expect {
                return Err(fail(format!("left rotation failed at sample {s}")));
            }
            let mut back = rot;
            braid::apply_word(ctx, &mut back, &braid::rotate_right_word(len))?;
            if back != t {
                return Err(fail(format!("right rotation failed at sample {s}")));
            }

            let i = rng.random_range(0..len);
            let mut conj = t.clone();
            braid::apply_word(ctx, &mut conj, &braid::conj_by_entry_word(len, i))?;
            let expect: Vec<ElemId> = t.iter().map(|&x| ctx.conj(t[i], x)).collect();
            if conj != expect {
                return Err(fail(format!("entry conjugation failed at sample {s}")));
            }

            // block lemmas on the unscrambled pair layout
            if pairs >= 2 {
                let u = random_product_one(ctx, classes, &mut rng, pairs, false)?;
                let a = rng.random_range(0..pairs - 1);
                let hop = rng.random_range(1..=(pairs - 1 - a)) * 2;
                let mut swapped = u.clone();
                braid::apply_word(ctx, &mut swapped, &braid::swap_right_word(2 * a, 2, hop))?;
                let mut expect = u.clone();
                let moved: Vec<ElemId> = expect.drain(2 * a..2 * a + 2).collect();
                expect.splice(2 * a + hop..2 * a + hop, moved);
                if swapped != expect {
                    return Err(fail(format!("block swap failed at sample {s}")));
                }

                let block = rng.random_range(0..pairs) * 2;
                let outside: Vec<usize> =
                    (0..u.len()).filter(|&p| p < block || p >= block + 2).collect();
                let c = outside[rng.random_range(0..outside.len())];
                let mut conj = u.clone();
                braid::apply_word(ctx, &mut conj, &braid::conj_block_word(block, 2, c))?;
                let mut expect = u.clone();
                for x in &mut expect[block..block + 2] {
                    *x = ctx.conj(u[c], *x);
                }
                if conj != expect {
                    return Err(fail(format!("block conjugation failed at sample {s}")));
                }
            }
            Ok(())
        })?;
        Ok(format!("{samples} product-one tuples, all rewrites exact"))
    };
    CheckResult::finish("rewriting-lemmas", started, run())
}

/// Component products commute, associate, and respect the identity.
pub fn product_laws(table: &MonoidTable, samples: usize, seed: u64) -> CheckResult {
    let started = Instant::now();
    let run = || -> Result<String> {
        let mut rng = StdRng::seed_from_u64(seed);
        let all: Vec<_> = table.all_comps().map(|(r, _)| r).collect();
        let mut done = 0;
        for _ in 0..samples * 4 {
            if done >= samples {
                break;
            }
            let a = all[rng.random_range(0..all.len())];
            let b = all[rng.random_range(0..all.len())];
            if a.degree + b.degree > table.max_degree {
                continue;
            }
            let ab = table.multiply(a, b)?;
            if ab != table.multiply(b, a)? {
                return Err(fail("a product failed to commute".into()));
            }
            if table.multiply(a, table.identity())? != a {
                return Err(fail("identity is not neutral".into()));
            }
            let c = all[rng.random_range(0..all.len())];
            if a.degree + b.degree + c.degree <= table.max_degree
                && table.multiply(ab, c)? != table.multiply(a, table.multiply(b, c)?)?
            {
                return Err(fail("a product failed to associate".into()));
            }
            done += 1;
        }
        Ok(format!("{done} sampled product pairs"))
    };
    CheckResult::finish("product-laws", started, run())
}

/// Every observed multidiscriminant is a likely map, and the tuples of
/// components generating the whole subgroup are really likely.
pub fn census_inside_likely(table: &MonoidTable) -> CheckResult {
    let started = Instant::now();
    let run = || -> Result<String> {
        let mut checked = 0u64;
        for rec in table.registry.iter().filter(|r| r.d_generated && r.omega.is_some()) {
            for n in 1..=table.max_degree {
                let maps = asymptotics::likely_maps(&table.ctx, &table.classes, rec, n)?;
                let within = asymptotics::multidiscriminant_census(table, rec.id, n, Scope::Within)?;
                for mu in within.keys() {
                    if !maps.iter().any(|m| &m.psi == mu) {
                        return Err(fail(format!(
                            "census value outside the likely set for subgroup {} at degree {n}",
                            rec.id
                        )));
                    }
                }
                let exact = asymptotics::multidiscriminant_census(table, rec.id, n, Scope::Exact)?;
                for mu in exact.keys() {
                    let Some(m) = maps.iter().find(|m| &m.psi == mu) else {
                        return Err(fail(format!(
                            "generating census value outside the likely set (subgroup {}, degree {n})",
                            rec.id
                        )));
                    };
                    if !m.really_likely {
                        return Err(fail(format!(
                            "a generating component sits on a non-really-likely map (subgroup {}, degree {n})",
                            rec.id
                        )));
                    }
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} generating census values, all really likely"))
    };
    CheckResult::finish("census-inside-likely", started, run())
}

/// The product formula for the number of likely maps matches enumeration.
pub fn likely_count_formula(table: &MonoidTable, n_max: u32) -> CheckResult {
    let started = Instant::now();
    let run = || -> Result<String> {
        let mut checked = 0u64;
        for rec in table.registry.iter().filter(|r| r.d_generated && r.omega.is_some()) {
            for n in 0..=n_max {
                let count = asymptotics::count_likely_maps(&table.classes, rec, n)?;
                let listed = asymptotics::enumerate_likely(&table.classes, rec, n)?;
                if count != BigUint::from(listed.len()) {
                    return Err(fail(format!(
                        "likely count mismatch for subgroup {} at degree {n}",
                        rec.id
                    )));
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} (subgroup, degree) pairs"))
    };
    CheckResult::finish("likely-count-formula", started, run())
}

/// Every pair satisfying the factorization margin factors with the
/// generated subgroup preserved.
pub fn factor_margin(table: &MonoidTable) -> CheckResult {
    let started = Instant::now();
    let run = || -> Result<String> {
        let all: Vec<_> = table.all_comps().map(|(r, _)| r).collect();
        let mut pairs = 0u64;
        for &y in &all {
            for &x in &all {
                if x.degree == 0 || x.degree >= y.degree {
                    continue;
                }
                let (cy, cx) = (table.comp(y), table.comp(x));
                if !table.registry.contains(cy.subgroup, cx.subgroup) {
                    continue;
                }
                if !table.has_factor_margin(y, x)? {
                    continue;
                }
                match table.factor(y, x)? {
                    Some(z) if table.comp(z).subgroup == cy.subgroup => pairs += 1,
                    Some(_) => {
                        return Err(fail(format!(
                            "margin pair factored outside the subgroup (degrees {}, {})",
                            y.degree, x.degree
                        )))
                    }
                    None => {
                        return Err(fail(format!(
                            "margin pair failed to factor (degrees {}, {})",
                            y.degree, x.degree
                        )))
                    }
                }
            }
        }
        Ok(format!("{pairs} margin pairs factored"))
    };
    CheckResult::finish("factor-margin", started, run())
}

fn is_symmetric_transposition_setting(table: &MonoidTable) -> bool {
    let d = table.ctx.degree();
    table.classes.num_classes() == 1
        && table.classes.xi == [1]
        && table
            .ctx
            .perm(table.ctx.classes()[table.classes.class_ids[0] as usize].representative())
            .is_transposition()
        && table.ctx.order() as u64 == (2..=d as u64).product::<u64>()
}

/// Orbit census and signature census are the same list, degree by degree
/// through `max_degree`.
pub fn sym_signature_bijection(table: &MonoidTable, max_degree: u32, caps: &Caps) -> CheckResult {
    let started = Instant::now();
    let run = || -> Result<String> {
        let d = table.ctx.degree();
        let mut checked = 0u64;
        for n in (0..=table.max_degree.min(max_degree)).step_by(2) {
            let mut orbit_side: Vec<sym::Signature> = table
                .comps_at(n)
                .map(|(_, c)| {
                    sym::tuple_to_multigraph(&table.ctx, &c.rep).map(|g| sym::signature(&g))
                })
                .collect::<Result<_>>()?;
            orbit_side.sort();
            orbit_side.dedup();
            let census: Vec<sym::Signature> = sym::component_census_sd(d, n, caps)?
                .into_iter()
                .map(|e| e.signature)
                .collect();
            if orbit_side != census {
                return Err(fail(format!("signature census differs at degree {n}")));
            }
            checked += orbit_side.len() as u64;
        }
        Ok(format!("{checked} signatures matched one-to-one"))
    };
    CheckResult::finish("sym-signature-bijection", started, run())
}

/// Full suite for one setting. Table-based checks run on a freshly built
/// table; symmetric-group checks run only when the setting is the
/// transposition class on the full symmetric group.
pub fn run_suite(ctx: GroupContext, classes: ClassData, cfg: &SuiteConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(braid_invariance(
        &ctx,
        &classes,
        cfg.braid_samples,
        cfg.seed,
        cfg.workers,
    ));
    out.push(rewriting_lemmas(
        &ctx,
        &classes,
        cfg.lemma_samples,
        cfg.seed ^ 0x9e37_79b9,
        cfg.workers,
    ));

    let started = Instant::now();
    let table = match enumerate_components(ctx, classes, cfg.max_degree, &cfg.caps) {
        Ok(t) => t,
        Err(e) => {
            out.push(CheckResult::finish("table-build", started, Err(e)));
            return out;
        }
    };
    out.push(CheckResult::finish(
        "table-build",
        started,
        Ok(format!(
            "degrees 0..={}, brute through {}",
            table.max_degree, table.brute_max
        )),
    ));
    out.push(product_laws(&table, 500, cfg.seed ^ 0x51f_15e5));
    out.push(census_inside_likely(&table));
    out.push(likely_count_formula(&table, 30));
    out.push(factor_margin(&table));

    if is_symmetric_transposition_setting(&table) {
        out.push(sym_signature_bijection(&table, table.max_degree, &cfg.caps));
        let started = Instant::now();
        out.push(CheckResult::finish(
            "sym-closed-form",
            started,
            sym::check_formula(table.ctx.degree(), table.max_degree, &cfg.caps)
                .map(|n| format!("{n} even degrees against the census")),
        ));
        if table.max_degree >= 6 {
            let started = Instant::now();
            out.push(CheckResult::finish(
                "sym-presentation",
                started,
                sym::verify_presentation(&table).map(|r| {
                    format!(
                        "{} generators, {} relation triples, {} monomials",
                        r.generator_count, r.relation_triples, r.monomials_checked
                    )
                }),
            ));
        } else {
            out.push(CheckResult::skip(
                "sym-presentation",
                "needs a table through degree 6",
            ));
        }
    } else {
        out.push(CheckResult::skip(
            "sym-signature-bijection",
            "not the symmetric transposition setting",
        ));
    }
    out
}

/// Contexts exercised by the braid checks beyond the symmetric fixtures:
/// the square symmetries and the quaternions in their regular action, each
/// with the listed class representatives as distinguished classes.
pub fn extra_groups(caps: &Caps) -> Result<Vec<(&'static str, GroupContext, ClassData)>> {
    use crate::perm::Permutation;
    let mut out = Vec::new();

    let d4 = GroupContext::new(
        vec![
            Permutation::parse("(1 2 3 4)", 4)?,
            Permutation::parse("(1 3)", 4)?,
        ],
        caps,
    )?;
    let d4_classes = ClassData::new(
        &d4,
        &[
            Permutation::parse("(1 2 3 4)", 4)?,
            Permutation::parse("(1 3)", 4)?,
            Permutation::parse("(1 2)(3 4)", 4)?,
        ],
        vec![1, 1, 1],
    )?;
    out.push(("D4", d4, d4_classes));

    let q8 = GroupContext::new(
        vec![
            Permutation::parse("(1 3 2 4)(5 7 6 8)", 8)?,
            Permutation::parse("(1 5 2 6)(3 8 4 7)", 8)?,
        ],
        caps,
    )?;
    debug_assert_eq!(q8.order(), 8);
    let q8_classes = ClassData::new(
        &q8,
        &[
            Permutation::parse("(1 3 2 4)(5 7 6 8)", 8)?,
            Permutation::parse("(1 5 2 6)(3 8 4 7)", 8)?,
            Permutation::parse("(1 7 2 8)(3 5 4 6)", 8)?,
        ],
        vec![1, 1, 1],
    )?;
    out.push(("Q8", q8, q8_classes));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

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

    fn transposition_classes(ctx: &GroupContext) -> ClassData {
        let rep = Permutation::parse("(1 2)", ctx.degree()).unwrap();
        ClassData::new(ctx, &[rep], vec![1]).unwrap()
    }

    #[test]
    fn suite_passes_on_s3() {
        let ctx = s_n(3);
        let classes = transposition_classes(&ctx);
        let cfg = SuiteConfig {
            braid_samples: 300,
            lemma_samples: 150,
            max_degree: 6,
            ..SuiteConfig::default()
        };
        let results = run_suite(ctx, classes, &cfg);
        for r in &results {
            assert_ne!(r.status, CheckStatus::Fail, "{}: {}", r.name, r.detail);
        }
        assert!(results.iter().any(|r| r.name == "sym-presentation"
            && r.status == CheckStatus::Ok));
    }

    #[test]
    fn suite_passes_on_s4() {
        let ctx = s_n(4);
        let classes = transposition_classes(&ctx);
        let cfg = SuiteConfig {
            braid_samples: 300,
            lemma_samples: 150,
            max_degree: 6,
            ..SuiteConfig::default()
        };
        let results = run_suite(ctx, classes, &cfg);
        for r in &results {
            assert_ne!(r.status, CheckStatus::Fail, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn braid_checks_pass_on_the_extra_groups() {
        for (name, ctx, classes) in extra_groups(&Caps::default()).unwrap() {
            assert_eq!(ctx.order(), 8, "{name}");
            let r = braid_invariance(&ctx, &classes, 400, 7, 1);
            assert_eq!(r.status, CheckStatus::Ok, "{name}: {}", r.detail);
            let r = rewriting_lemmas(&ctx, &classes, 200, 7, 1);
            assert_eq!(r.status, CheckStatus::Ok, "{name}: {}", r.detail);
        }
    }

    #[test]
    fn results_do_not_depend_on_the_worker_count() {
        let ctx = s_n(4);
        let classes = transposition_classes(&ctx);
        let lone = braid_invariance(&ctx, &classes, 200, 5, 1);
        for workers in [2, 3, 7] {
            let many = braid_invariance(&ctx, &classes, 200, 5, workers);
            assert_eq!(many.status, lone.status);
            assert_eq!(many.detail, lone.detail);
        }
    }

    #[test]
    fn failing_settings_are_reported_not_hidden() {
        // A class set that is not inverse-closed cannot occur among the
        // shipped fixtures; the lemma sampler must say so, not panic.
        let ctx = s_n(3);
        let classes = transposition_classes(&ctx);
        let mut rng = StdRng::seed_from_u64(3);
        let t = random_product_one(&ctx, &classes, &mut rng, 2, true).unwrap();
        assert_eq!(braid::product(&ctx, &t), ctx.identity_id());
        assert_eq!(t.len(), 4);
    }
}
