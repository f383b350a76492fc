//! Command-line front end: loads a group file or a symmetric-group setting,
//! runs the requested enumeration or analysis, and emits deterministic JSON,
//! CSV, or DOT reports.

mod reports;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};
use compring::asymptotics;
use compring::config::Caps;
use compring::error::{Error, Result};
use compring::group::GroupContext;
use compring::io::{load_group_file, tuple_to_strings, LoadedGroup};
use compring::monoid::{enumerate_components, MonoidTable};
use compring::perm::Permutation;
use compring::spectrum;
use compring::subgroups::Abelianization;
use compring::sym;
use compring::verify;
use reports::*;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "compring",
    version,
    about = "Braid-orbit components of branched covers: enumeration, growth, spectra"
)]
struct Cli {
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads for sampled suites; 0 means available parallelism.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the conjugacy classes of the group in a group file.
    Classes {
        #[arg(long)]
        group: PathBuf,
    },
    /// List the class-generated subgroups discovered up to a degree.
    Subgroups {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
    },
    /// Enumerate components degree by degree.
    Components {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        /// Emit CSV rows instead of JSON.
        #[arg(long)]
        csv: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth reports per subgroup: stabilization, thresholds, leading
    /// coefficient consistency.
    Growth {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
        /// Restrict to one subgroup id.
        #[arg(long)]
        subgroup: Option<u32>,
    },
    /// Spectrum description: strata with weighted spans, one per admissible
    /// subgroup, or the closed-form symmetric-group spectrum.
    Spectrum {
        #[arg(long)]
        group: Option<PathBuf>,
        /// Symbol count d for the closed-form transposition spectrum.
        #[arg(long)]
        symmetric: Option<usize>,
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
        /// Emit a DOT sketch instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Symmetric-group fast path: signature census and optional checks.
    Sym {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        max_degree: u32,
        /// Verify the degree-2 presentation against a table built to degree 6.
        #[arg(long)]
        check_presentation: bool,
        /// Compare the closed-form count with the census on every even degree.
        #[arg(long)]
        check_formula: bool,
        /// Emit one DOT multigraph per census signature instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Run the property suite on a group file; nonzero exit on any failure.
    Verify {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
        #[arg(long, default_value_t = 2500)]
        braid_samples: usize,
        #[arg(long, default_value_t = 1000)]
        lemma_samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = match caps_from_env() {
        Ok(c) => c,
        Err(msg) => {
            // Malformed cap overrides are usage errors.
            Cli::command().error(ErrorKind::InvalidValue, msg).exit()
        }
    };
    match run(cli, caps) {
        Ok(code) => code,
        Err(Error::CapExceeded { cap, limit, needed }) => {
            eprintln!("error: cap exceeded: cap={cap} limit={limit} needed={needed}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Caps, with `COMPRING_CAP_*` environment overrides.
fn caps_from_env() -> std::result::Result<Caps, String> {
    fn read<T: std::str::FromStr>(slot: &mut T, var: &str) -> std::result::Result<(), String> {
        match std::env::var(var) {
            Ok(text) => {
                *slot = text
                    .parse()
                    .map_err(|_| format!("{var}={text:?} is not a valid value"))?;
                Ok(())
            }
            Err(std::env::VarError::NotPresent) => Ok(()),
            Err(e) => Err(format!("{var}: {e}")),
        }
    }
    let mut caps = Caps::default();
    read(&mut caps.group_order, "COMPRING_CAP_GROUP_ORDER")?;
    read(&mut caps.degree, "COMPRING_CAP_DEGREE")?;
    read(&mut caps.orbit_tuples, "COMPRING_CAP_ORBIT_TUPLES")?;
    read(&mut caps.brute_work, "COMPRING_CAP_BRUTE_WORK")?;
    read(&mut caps.brute_store, "COMPRING_CAP_BRUTE_STORE")?;
    read(&mut caps.sym_d, "COMPRING_CAP_SYM_D")?;
    read(&mut caps.subgroup_count, "COMPRING_CAP_SUBGROUP_COUNT")?;
    Ok(caps)
}

fn usage_error(msg: &str) -> ! {
    Cli::command().error(ErrorKind::InvalidValue, msg).exit()
}

fn group_label(g: &LoadedGroup, path: &Path) -> String {
    g.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string())
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(&text, out)
}

fn build_table(path: &Path, max_degree: u32, caps: &Caps) -> Result<(String, MonoidTable)> {
    let g = load_group_file(path, caps)?;
    let label = group_label(&g, path);
    let table = enumerate_components(g.ctx, g.classes, max_degree, caps)?;
    Ok((label, table))
}

fn symmetric_context(d: usize, caps: &Caps) -> Result<GroupContext> {
    let cycle = format!(
        "({})",
        (1..=d).map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
    );
    let gens = vec![
        Permutation::parse("(1 2)", d)?,
        Permutation::parse(&cycle, d)?,
    ];
    GroupContext::new(gens, caps)
}

fn run(cli: Cli, caps: Caps) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Classes { group } => {
            let g = load_group_file(&group, &caps)?;
            let label = group_label(&g, &group);
            let classes: Vec<ClassRow> = g
                .ctx
                .classes()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let rep = c.representative();
                    let distinguished =
                        g.classes.class_ids.iter().position(|&id| id as usize == i);
                    ClassRow {
                        index: i,
                        size: c.size(),
                        element_order: g.ctx.element_order(rep) as usize,
                        representative: g.ctx.perm(rep).to_string(),
                        distinguished,
                        xi: distinguished.map(|p| g.classes.xi[p]),
                    }
                })
                .collect();
            emit_json(
                &ClassesReport {
                    schema_version: SCHEMA_VERSION,
                    group: label,
                    degree: g.ctx.degree(),
                    order: g.ctx.order(),
                    classes,
                },
                None,
            )?;
        }
        Cmd::Subgroups { group, max_degree } => {
            let (label, table) = build_table(&group, max_degree, &caps)?;
            let subgroups: Vec<SubgroupRow> = table
                .registry
                .iter()
                .map(|rec| SubgroupRow {
                    id: rec.id,
                    order: rec.order(),
                    generators: tuple_to_strings(&table.ctx, &rec.generators),
                    d_generated: rec.d_generated,
                    omega: rec.omega,
                    d_class_count: rec.d_classes.len(),
                    abelianization_order: Abelianization::new(&table.ctx, rec).order(),
                    hilbert: asymptotics::count_sequence(&table, rec.id),
                })
                .collect();
            emit_json(
                &SubgroupsReport {
                    schema_version: SCHEMA_VERSION,
                    group: label,
                    max_degree,
                    count: subgroups.len(),
                    subgroups,
                },
                None,
            )?;
        }
        Cmd::Components {
            group,
            max_degree,
            csv,
            out,
        } => {
            let (label, table) = build_table(&group, max_degree, &caps)?;
            let report = components_report(&label, &table);
            if csv {
                emit(&components_csv(&report), out.as_ref())?;
            } else {
                emit_json(&report, out.as_ref())?;
            }
        }
        Cmd::Growth {
            group,
            max_degree,
            subgroup,
        } => {
            let (label, table) = build_table(&group, max_degree, &caps)?;
            let mut entries = Vec::new();
            for rec in table.registry.iter().filter(|r| r.d_generated) {
                if subgroup.is_some_and(|want| want != rec.id) {
                    continue;
                }
                let (growth, growth_note) = split(asymptotics::stabilization_report(&table, rec.id));
                let (factors, _) = split(spectrum::stabilization_factors(&table, rec.id));
                let (leading, leading_note) =
                    split(spectrum::leading_coefficient_check(&table, rec.id));
                entries.push(GrowthEntry {
                    subgroup: rec.id,
                    order: rec.order(),
                    growth,
                    growth_note,
                    factors,
                    leading,
                    leading_note,
                });
            }
            if entries.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "no matching subgroup{}",
                    subgroup.map_or(String::new(), |s| format!(" {s}"))
                )));
            }
            emit_json(
                &GrowthOut {
                    schema_version: SCHEMA_VERSION,
                    group: label,
                    max_degree,
                    entries,
                },
                None,
            )?;
        }
        Cmd::Spectrum {
            group,
            symmetric,
            max_degree,
            dot,
        } => match (group, symmetric) {
            (Some(path), None) => {
                let (label, table) = build_table(&path, max_degree, &caps)?;
                let description = spectrum::spec_description(&table)?;
                let relations_checked =
                    spectrum::relation_sanity_check(&table, &description, table.max_degree)?;
                if dot {
                    emit(&spectrum::spectrum_dot(&description), None)?;
                } else {
                    emit_json(
                        &SpectrumOut {
                            schema_version: SCHEMA_VERSION,
                            group: label,
                            max_degree,
                            description,
                            relations_checked,
                        },
                        None,
                    )?;
                }
            }
            (None, Some(d)) => {
                let spectrum = spectrum::spec_sd(d, &caps)?;
                if dot {
                    emit(&spectrum::sym_spectrum_dot(&spectrum), None)?;
                } else {
                    emit_json(
                        &SpectrumSymOut {
                            schema_version: SCHEMA_VERSION,
                            d,
                            spectrum,
                        },
                        None,
                    )?;
                }
            }
            _ => usage_error("spectrum needs exactly one of --group and --symmetric"),
        },
        Cmd::Sym {
            d,
            max_degree,
            check_presentation,
            check_formula,
            dot,
        } => {
            let mut census = Vec::new();
            for degree in (0..=max_degree).step_by(2) {
                let entries: Vec<CensusRow> = sym::component_census_sd(d, degree, &caps)?
                    .into_iter()
                    .map(|e| CensusRow {
                        signature: e.signature,
                        subgroup_blocks: e.subgroup_blocks,
                        subgroup_order: e.subgroup_order,
                    })
                    .collect();
                census.push(DegreeCensus {
                    degree,
                    count: entries.len(),
                    entries,
                });
            }
            if dot {
                let mut text = String::new();
                for block in &census {
                    for (i, row) in block.entries.iter().enumerate() {
                        text.push_str(&format!("// degree {} entry {}\n", block.degree, i));
                        text.push_str(&sym::signature_dot(&row.signature));
                        text.push('\n');
                    }
                }
                emit(&text, None)?;
                return Ok(ExitCode::SUCCESS);
            }
            let formula_checked_degrees = if check_formula {
                Some(sym::check_formula(d, max_degree, &caps)?)
            } else {
                None
            };
            let presentation = if check_presentation {
                let ctx = symmetric_context(d, &caps)?;
                let rep = Permutation::parse("(1 2)", d)?;
                let classes = compring::subgroups::ClassData::new(&ctx, &[rep], vec![1])?;
                let table = enumerate_components(ctx, classes, 6, &caps)?;
                Some(sym::verify_presentation(&table)?)
            } else {
                None
            };
            emit_json(
                &SymOut {
                    schema_version: SCHEMA_VERSION,
                    d,
                    max_degree,
                    census,
                    formula_checked_degrees,
                    presentation,
                },
                None,
            )?;
        }
        Cmd::Verify {
            group,
            max_degree,
            braid_samples,
            lemma_samples,
        } => {
            let g = load_group_file(&group, &caps)?;
            let label = group_label(&g, &group);
            let workers = verify::resolve_workers(cli.workers);
            let cfg = verify::SuiteConfig {
                seed: cli.seed,
                braid_samples,
                lemma_samples,
                max_degree,
                workers,
                caps: caps.clone(),
            };
            let results = verify::run_suite(g.ctx, g.classes, &cfg);
            let mut ok = true;
            for r in &results {
                let tag = match r.status {
                    verify::CheckStatus::Ok => "ok  ",
                    verify::CheckStatus::Fail => {
                        ok = false;
                        "FAIL"
                    }
                    verify::CheckStatus::Skip => "skip",
                };
                eprintln!("{tag} {} ({}) [{} ms]", r.name, r.detail, r.millis);
            }
            emit_json(
                &VerifyOut {
                    schema_version: SCHEMA_VERSION,
                    group: label,
                    seed: cli.seed,
                    workers,
                    max_degree,
                    ok,
                    results,
                },
                None,
            )?;
            return Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn split<T>(r: Result<T>) -> (Option<T>, Option<String>) {
    match r {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

fn components_report(label: &str, table: &MonoidTable) -> ComponentsReport {
    let mut totals = vec![0u64; table.max_degree as usize + 1];
    let mut degrees = Vec::new();
    for degree in 0..=table.max_degree {
        let components: Vec<ComponentRow> = table
            .comps_at(degree)
            .map(|(r, c)| ComponentRow {
                index: r.index,
                subgroup: c.subgroup,
                subgroup_order: table.registry.get(c.subgroup).order(),
                multidiscriminant: c.mu.clone(),
                orbit_size: c.orbit_size,
                representative: tuple_to_strings(&table.ctx, &c.rep),
            })
            .collect();
        totals[degree as usize] = components.len() as u64;
        degrees.push(DegreeBlock {
            degree,
            count: components.len(),
            components,
        });
    }
    ComponentsReport {
        schema_version: SCHEMA_VERSION,
        group: label.to_string(),
        max_degree: table.max_degree,
        totals,
        exhaustive_through: table.brute_max,
        key_certified: table.key_certified,
        degrees,
    }
}

fn components_csv(report: &ComponentsReport) -> String {
    let mut text =
        String::from("degree,index,subgroup,subgroup_order,multidiscriminant,orbit_size,representative\n");
    for block in &report.degrees {
        for row in &block.components {
            let mu = row
                .multidiscriminant
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            let orbit = row.orbit_size.map_or(String::new(), |s| s.to_string());
            text.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                block.degree,
                row.index,
                row.subgroup,
                row.subgroup_order,
                mu,
                orbit,
                row.representative.join(" ")
            ));
        }
    }
    text
}
