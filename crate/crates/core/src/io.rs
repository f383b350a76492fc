//! JSON input and output: group description files, tuple serialization, orbit
//! dumps.
//!
//! A group file names a permutation group by generators together with the
//! distinguished conjugacy classes, everything in 1-based cycle arrays:
//!
//! ```json
//! {
//!   "name": "s4",
//!   "degree": 4,
//!   "generators": [[[1, 2]], [[1, 2, 3, 4]]],
//!   "classes": [[[1, 2]]],
//!   "xi": { "0": 1 }
//! }
//! ```
//!
//! A permutation is an array of cycles, a cycle an array of 1-based points.
//! `xi` maps class indices (as decimal strings) to multiplicities and defaults
//! to 1 for every class it omits.

use crate::braid::{GTuple, OrbitRecord};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{ElemId, GroupContext};
use crate::perm::Permutation;
use crate::subgroups::ClassData;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// A permutation written as 1-based cycles.
pub type CycleArrays = Vec<Vec<usize>>;

/// Parsed group description file, prior to validation.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    #[serde(default)]
    pub name: Option<String>,
    pub degree: usize,
    pub generators: Vec<CycleArrays>,
    pub classes: Vec<CycleArrays>,
    #[serde(default)]
    pub xi: BTreeMap<String, u32>,
}

/// A validated group with its distinguished-class setting.
pub struct LoadedGroup {
    pub name: Option<String>,
    pub ctx: GroupContext,
    pub classes: ClassData,
}

fn perm_from_cycle_arrays(cycles: &[Vec<usize>], degree: usize) -> Result<Permutation> {
    let mut converted: Vec<Vec<u8>> = Vec::with_capacity(cycles.len());
    for cyc in cycles {
        let mut c = Vec::with_capacity(cyc.len());
        for &v in cyc {
            if v == 0 || v > degree {
                return Err(Error::InvalidInput(format!(
                    "cycle point {v} out of range 1..={degree}"
                )));
            }
            c.push((v - 1) as u8);
        }
        converted.push(c);
    }
    Permutation::from_cycles(&converted, degree)
}

/// Builds the group and class setting described by `file`.
pub fn group_from_file(file: &GroupFile, caps: &Caps) -> Result<LoadedGroup> {
    if file.degree == 0 || file.degree > caps.degree {
        return Err(Error::CapExceeded {
            cap: "degree",
            limit: caps.degree as u64,
            needed: file.degree as u64,
        });
    }
    let gens = file
        .generators
        .iter()
        .map(|c| perm_from_cycle_arrays(c, file.degree))
        .collect::<Result<Vec<_>>>()?;
    let ctx = GroupContext::new(gens, caps)?;
    let reps = file
        .classes
        .iter()
        .map(|c| perm_from_cycle_arrays(c, file.degree))
        .collect::<Result<Vec<_>>>()?;
    let mut xi = vec![1u32; reps.len()];
    for (k, &v) in &file.xi {
        let idx: usize = k.parse().map_err(|_| {
            Error::InvalidInput(format!("xi key {k:?} is not a class index"))
        })?;
        if idx >= reps.len() {
            return Err(Error::InvalidInput(format!(
                "xi key {idx} out of range for {} classes",
                reps.len()
            )));
        }
        if v == 0 {
            return Err(Error::InvalidInput(format!(
                "xi[{idx}] must be at least 1"
            )));
        }
        xi[idx] = v;
    }
    let classes = ClassData::new(&ctx, &reps, xi)?;
    Ok(LoadedGroup {
        name: file.name.clone(),
        ctx,
        classes,
    })
}

pub fn parse_group_json(text: &str, caps: &Caps) -> Result<LoadedGroup> {
    let file: GroupFile = serde_json::from_str(text)?;
    group_from_file(&file, caps)
}

pub fn load_group_file(path: &Path, caps: &Caps) -> Result<LoadedGroup> {
    let text = std::fs::read_to_string(path)?;
    parse_group_json(&text, caps)
}

/// Renders each entry in 1-based cycle notation, e.g. `["(1 2)", "(3 4)"]`.
pub fn tuple_to_strings(ctx: &GroupContext, t: &[ElemId]) -> Vec<String> {
    t.iter().map(|&e| ctx.perm(e).to_string()).collect()
}

/// Parses 1-based cycle strings back into element ids.
pub fn tuple_from_strings<S: AsRef<str>>(ctx: &GroupContext, entries: &[S]) -> Result<GTuple> {
    entries
        .iter()
        .map(|s| {
            let p = Permutation::parse(s.as_ref(), ctx.degree())?;
            ctx.id_of(&p).ok_or_else(|| Error::NotAMember {
                element: p.to_string(),
                container: "the group".into(),
            })
        })
        .collect()
}

/// Serializable orbit summary.
#[derive(Debug, Serialize, Deserialize)]
pub struct OrbitDump {
    pub canonical: Vec<String>,
    pub size: u64,
    pub product: String,
    pub subgroup_order: usize,
}

pub fn orbit_dump(ctx: &GroupContext, rec: &OrbitRecord) -> OrbitDump {
    OrbitDump {
        canonical: tuple_to_strings(ctx, &rec.canonical),
        size: rec.size,
        product: ctx.perm(rec.product).to_string(),
        subgroup_order: rec.subgroup_elements.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S4_DOC: &str = r#"{
        "name": "s4",
        "degree": 4,
        "generators": [[[1, 2]], [[1, 2, 3, 4]]],
        "classes": [[[1, 2]]]
    }"#;

    fn expect_err(doc: &str) -> Error {
        match parse_group_json(doc, &Caps::default()) {
            Ok(_) => panic!("expected an error for {doc}"),
            Err(e) => e,
        }
    }

    #[test]
    fn loads_s4_with_default_xi() {
        let g = parse_group_json(S4_DOC, &Caps::default()).unwrap();
        assert_eq!(g.name.as_deref(), Some("s4"));
        assert_eq!(g.ctx.order(), 24);
        assert_eq!(g.classes.num_classes(), 1);
        assert_eq!(g.classes.xi, vec![1]);
        assert_eq!(g.classes.support.len(), 6);
    }

    #[test]
    fn xi_override_applies_and_zero_is_rejected() {
        let doc = r#"{
            "degree": 3,
            "generators": [[[1, 2]], [[1, 2, 3]]],
            "classes": [[[1, 2]], [[1, 2, 3]]],
            "xi": { "1": 3 }
        }"#;
        let g = parse_group_json(doc, &Caps::default()).unwrap();
        assert_eq!(g.classes.xi, vec![1, 3]);

        let bad = doc.replace("\"1\": 3", "\"0\": 0");
        let err = expect_err(&bad);
        assert!(matches!(err, Error::InvalidInput(_)), "{err}");
    }

    #[test]
    fn xi_key_out_of_range_is_rejected() {
        let doc = r#"{
            "degree": 3,
            "generators": [[[1, 2]], [[1, 2, 3]]],
            "classes": [[[1, 2]]],
            "xi": { "5": 1 }
        }"#;
        let err = expect_err(doc);
        assert!(matches!(err, Error::InvalidInput(_)), "{err}");
    }

    #[test]
    fn cycle_points_are_one_based_and_range_checked() {
        let doc = r#"{
            "degree": 3,
            "generators": [[[0, 1]]],
            "classes": [[[1, 2]]]
        }"#;
        let err = expect_err(doc);
        assert!(matches!(err, Error::InvalidInput(_)), "{err}");

        let doc = r#"{
            "degree": 3,
            "generators": [[[1, 4]]],
            "classes": [[[1, 2]]]
        }"#;
        let err = expect_err(doc);
        assert!(matches!(err, Error::InvalidInput(_)), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let doc = r#"{
            "degree": 3,
            "generators": [[[1, 2]], [[1, 2, 3]]],
            "classes": [[[1, 2]]],
            "extra": true
        }"#;
        let err = expect_err(doc);
        assert!(matches!(err, Error::Json(_)), "{err}");
    }

    #[test]
    fn tuple_strings_round_trip() {
        let g = parse_group_json(S4_DOC, &Caps::default()).unwrap();
        let t = tuple_from_strings(&g.ctx, &["(1 2)", "(3 4)", "(1 2)(3 4)", "()"]).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t[3], g.ctx.identity_id());
        let s = tuple_to_strings(&g.ctx, &t);
        assert_eq!(s, vec!["(1 2)", "(3 4)", "(1 2)(3 4)", "()"]);
        let back = tuple_from_strings(&g.ctx, &s).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn orbit_dump_reports_invariants() {
        let g = parse_group_json(S4_DOC, &Caps::default()).unwrap();
        let t = tuple_from_strings(&g.ctx, &["(1 2)", "(1 2)"]).unwrap();
        let rec = crate::braid::orbit(&g.ctx, &t, 10_000).unwrap();
        let dump = orbit_dump(&g.ctx, &rec);
        assert_eq!(dump.canonical, vec!["(1 2)", "(1 2)"]);
        assert_eq!(dump.size, 1);
        assert_eq!(dump.product, "()");
        assert_eq!(dump.subgroup_order, 2);
        let text = serde_json::to_string(&dump).unwrap();
        let back: OrbitDump = serde_json::from_str(&text).unwrap();
        assert_eq!(back.canonical, dump.canonical);
    }
}
