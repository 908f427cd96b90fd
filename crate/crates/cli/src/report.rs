//! The JSON report. Every section records its own status; the overall verdict
//! is derived from them.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Passed,
    Falsified,
    #[default]
    Undetermined,
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Falsified,
    Undetermined,
}

impl Verdict {
    pub fn from_statuses(statuses: &[Status]) -> Verdict {
        if statuses.contains(&Status::Falsified) {
            Verdict::Falsified
        } else if statuses.contains(&Status::Undetermined) {
            Verdict::Undetermined
        } else {
            Verdict::Certified
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Certified => 0,
            Verdict::Falsified => 2,
            Verdict::Undetermined => 3,
        }
    }
}

/// `(slope numerator, slope denominator, length)`.
pub type SegmentTriple = (i64, i64, i64);

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSection {
    pub status: Status,
    /// Set when the computation stopped early.
    pub error: Option<String>,
    pub max_degree: usize,
    pub primes_checked: usize,
    pub good: usize,
    /// Primes other than `p` without good reduction, with their class.
    pub exceptions: Vec<String>,
    pub class_at_p: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionAtPSection {
    pub status: Status,
    pub error: Option<String>,
    pub reduction_rank: Option<usize>,
    pub scaling_exponent: Option<i64>,
    pub reduced: Option<String>,
    pub carlitz_identical: bool,
    pub height: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertiaSection {
    pub status: Status,
    pub error: Option<String>,
    pub height: usize,
    pub connected_count: u128,
    pub etale_count: u128,
    pub reduction_torsion_count: u128,
    pub expected_total: u128,
    pub polygon: Vec<SegmentTriple>,
    pub positive_slope_denominators: Vec<i64>,
    pub product_law: bool,
    pub ramification_witness: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub level: usize,
    pub residue_degree: usize,
    pub root_count: u64,
    pub expected_root_count: u64,
    pub min_residual_valuation: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfinitySection {
    pub status: Status,
    pub error: Option<String>,
    pub note: Option<String>,
    pub polygon: Vec<SegmentTriple>,
    pub reduced_root_count: Option<u64>,
    pub precision: usize,
    pub levels: Vec<LevelEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrEntry {
    pub degree_bound: usize,
    pub extension_degree: usize,
    pub dimension: usize,
    pub str_image_dimension: usize,
    pub all_in_image: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarlitzEndoSection {
    pub status: Status,
    pub error: Option<String>,
    pub prime: String,
    pub module: String,
    pub entries: Vec<StrEntry>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalEndoSection {
    pub status: Status,
    pub error: Option<String>,
    pub module: String,
    pub degree_bound: usize,
    pub coefficient_degree_bound: usize,
    pub dimension: usize,
    pub str_image_dimension: usize,
    pub basis: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusEntry {
    pub prime: String,
    pub matrix: Vec<Vec<String>>,
    pub charpoly: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageSection {
    pub status: Status,
    pub error: Option<String>,
    pub scan_degree: usize,
    pub frobenius: Vec<FrobeniusEntry>,
    pub closure_order: Option<u128>,
    pub cap_exceeded: bool,
    pub gl_order: u128,
    pub index: Option<u128>,
    pub stable: bool,
    pub skipped_primes: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionSection {
    pub status: Status,
    pub error: Option<String>,
    pub prime: String,
    pub level: usize,
    pub field_degree: usize,
    pub cardinality: u128,
    pub expected_cardinality: u128,
    pub module_rank: Option<usize>,
    pub surjective_onto_previous: Option<bool>,
    pub frobenius: Option<FrobeniusEntry>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonSection {
    pub status: Status,
    pub error: Option<String>,
    pub place: String,
    pub polygon: Vec<SegmentTriple>,
    pub note: Option<String>,
}

/// A complete `verify` report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: RunConfig,
    pub module: String,
    pub good_reduction_sweep: SweepSection,
    pub reduction_at_p: ReductionAtPSection,
    pub inertia: InertiaSection,
    pub infinity: InfinitySection,
    pub carlitz_endomorphisms: CarlitzEndoSection,
    pub rational_endomorphisms: RationalEndoSection,
    pub image: ImageSection,
    pub verdict: Verdict,
}

impl Report {
    pub fn statuses(&self) -> Vec<Status> {
        vec![
            self.good_reduction_sweep.status,
            self.reduction_at_p.status,
            self.inertia.status,
            self.infinity.status,
            self.carlitz_endomorphisms.status,
            self.rational_endomorphisms.status,
            self.image.status,
        ]
    }
}

/// Output of a single-section subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionReport<S> {
    pub schema_version: u32,
    pub config: RunConfig,
    pub section: S,
    pub verdict: Verdict,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_precedence() {
        use Status::*;
        assert_eq!(
            Verdict::from_statuses(&[Passed, Skipped]),
            Verdict::Certified
        );
        assert_eq!(
            Verdict::from_statuses(&[Passed, Undetermined]),
            Verdict::Undetermined
        );
        assert_eq!(
            Verdict::from_statuses(&[Undetermined, Falsified]),
            Verdict::Falsified
        );
        assert_eq!(Verdict::Certified.exit_code(), 0);
        assert_eq!(Verdict::Falsified.exit_code(), 2);
        assert_eq!(Verdict::Undetermined.exit_code(), 3);
    }

    #[test]
    fn status_strings() {
        assert_eq!(
            serde_json::to_string(&Status::Skipped).unwrap(),
            "\"skipped\""
        );
        assert_eq!(
            serde_json::to_string(&Verdict::Certified).unwrap(),
            "\"certified\""
        );
    }
}
