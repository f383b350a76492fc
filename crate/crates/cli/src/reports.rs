//! Serializable report payloads. Every payload carries `schema_version` and
//! uses only ordered containers, so serialized output is byte-identical
//! across runs for a fixed configuration.

use compring::asymptotics::{GrowthReport, LeadingReport};
use compring::spectrum::{SpectrumDescription, SymSpectrum};
use compring::subgroups::SubgroupId;
use compring::sym::{PresentationReport, Signature};
use compring::verify::CheckResult;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct ClassRow {
    pub index: usize,
    pub size: usize,
    pub element_order: usize,
    pub representative: String,
    /// Position among the distinguished classes, when this class is one.
    pub distinguished: Option<usize>,
    pub xi: Option<u32>,
}

#[derive(Serialize)]
pub struct ClassesReport {
    pub schema_version: u32,
    pub group: String,
    pub degree: usize,
    pub order: usize,
    pub classes: Vec<ClassRow>,
}

#[derive(Serialize)]
pub struct SubgroupRow {
    pub id: SubgroupId,
    pub order: usize,
    pub generators: Vec<String>,
    pub d_generated: bool,
    pub omega: Option<u32>,
    pub d_class_count: usize,
    pub abelianization_order: usize,
    /// Component counts by degree for components of exactly this subgroup.
    pub hilbert: Vec<u64>,
}

#[derive(Serialize)]
pub struct SubgroupsReport {
    pub schema_version: u32,
    pub group: String,
    pub max_degree: u32,
    pub count: usize,
    pub subgroups: Vec<SubgroupRow>,
}

#[derive(Serialize)]
pub struct ComponentRow {
    pub index: u32,
    pub subgroup: SubgroupId,
    pub subgroup_order: usize,
    pub multidiscriminant: Vec<u32>,
    pub orbit_size: Option<u64>,
    pub representative: Vec<String>,
}

#[derive(Serialize)]
pub struct DegreeBlock {
    pub degree: u32,
    pub count: usize,
    pub components: Vec<ComponentRow>,
}

#[derive(Serialize)]
pub struct ComponentsReport {
    pub schema_version: u32,
    pub group: String,
    pub max_degree: u32,
    /// Component totals indexed by degree, 0 through max_degree.
    pub totals: Vec<u64>,
    pub exhaustive_through: u32,
    pub key_certified: bool,
    pub degrees: Vec<DegreeBlock>,
}

#[derive(Serialize)]
pub struct GrowthEntry {
    pub subgroup: SubgroupId,
    pub order: usize,
    pub growth: Option<GrowthReport>,
    pub growth_note: Option<String>,
    pub factors: Option<Vec<SubgroupId>>,
    pub leading: Option<LeadingReport>,
    pub leading_note: Option<String>,
}

#[derive(Serialize)]
pub struct GrowthOut {
    pub schema_version: u32,
    pub group: String,
    pub max_degree: u32,
    pub entries: Vec<GrowthEntry>,
}

#[derive(Serialize)]
pub struct SpectrumOut {
    pub schema_version: u32,
    pub group: String,
    pub max_degree: u32,
    pub description: SpectrumDescription,
    /// Same-fiber monomial pairs whose span evaluations were compared.
    pub relations_checked: u64,
}

#[derive(Serialize)]
pub struct SpectrumSymOut {
    pub schema_version: u32,
    pub d: usize,
    pub spectrum: SymSpectrum,
}

#[derive(Serialize)]
pub struct CensusRow {
    pub signature: Signature,
    pub subgroup_blocks: Vec<Vec<u8>>,
    pub subgroup_order: u64,
}

#[derive(Serialize)]
pub struct DegreeCensus {
    pub degree: u32,
    pub count: usize,
    pub entries: Vec<CensusRow>,
}

#[derive(Serialize)]
pub struct SymOut {
    pub schema_version: u32,
    pub d: usize,
    pub max_degree: u32,
    pub census: Vec<DegreeCensus>,
    /// Even degrees on which the closed formula matched the census.
    pub formula_checked_degrees: Option<u32>,
    pub presentation: Option<PresentationReport>,
}

#[derive(Serialize)]
pub struct VerifyOut {
    pub schema_version: u32,
    pub group: String,
    pub seed: u64,
    pub workers: usize,
    pub max_degree: u32,
    pub ok: bool,
    pub results: Vec<CheckResult>,
}
