use serde::{Deserialize, Serialize};

use drinfeld_core::drinfeld::trinomial_module;
use drinfeld_core::finite_field::prime_power;
use drinfeld_core::parse::parse_poly_a;
use drinfeld_core::{FiniteField, GlobalModule, PrimeIdeal, RatFuncField};

use crate::CliError;

pub const DEFAULT_SCAN_DEG: usize = 4;
pub const DEFAULT_LEVEL: usize = 2;
pub const DEFAULT_PRECISION: usize = 32;
pub const DEFAULT_CAP: usize = 1_000_000;
pub const DEFAULT_MAX_DEG: usize = 3;
pub const DEFAULT_COEF_DEG: usize = 3;

/// Everything a run depends on. Echoed verbatim in the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub q: u64,
    pub r: usize,
    /// Monic generator of `p`, in the element grammar.
    pub p: String,
    pub scan_deg: usize,
    pub level: usize,
    pub precision: usize,
    pub cap: usize,
    /// `tau`-degree bound for endomorphism solving.
    pub max_deg: usize,
    /// Coefficient degree bound for the rational endomorphism search.
    pub coef_deg: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q: 2,
            r: 2,
            p: "T".into(),
            scan_deg: DEFAULT_SCAN_DEG,
            level: DEFAULT_LEVEL,
            precision: DEFAULT_PRECISION,
            cap: DEFAULT_CAP,
            max_deg: DEFAULT_MAX_DEG,
            coef_deg: DEFAULT_COEF_DEG,
        }
    }
}

/// A validated configuration: the base field, `p` and the module.
#[derive(Clone, Debug)]
pub struct Instance {
    pub fq: FiniteField,
    pub field: RatFuncField,
    pub prime: PrimeIdeal,
    pub module: GlobalModule,
}

/// Parses a monic irreducible polynomial over `F_q`.
pub fn parse_prime(fq: &FiniteField, s: &str) -> Result<PrimeIdeal, CliError> {
    let field = RatFuncField::new(fq.clone());
    let f = parse_poly_a(&field, s)?;
    PrimeIdeal::new(fq, &f)
        .map_err(|e| CliError::Config(format!("'{s}' is not a monic irreducible polynomial: {e}")))
}

pub fn base_field(q: u64) -> Result<FiniteField, CliError> {
    if prime_power(q).is_none() {
        return Err(CliError::Config(format!("q = {q} is not a prime power")));
    }
    Ok(FiniteField::of_order(q)?)
}

impl RunConfig {
    pub fn validate(&self) -> Result<Instance, CliError> {
        let fq = base_field(self.q)?;
        if self.r < 2 {
            return Err(CliError::Config(format!(
                "r = {} must be at least 2",
                self.r
            )));
        }
        if self.scan_deg == 0 {
            return Err(CliError::Config("scan-deg must be at least 1".into()));
        }
        if self.level == 0 {
            return Err(CliError::Config("level must be at least 1".into()));
        }
        if self.cap == 0 {
            return Err(CliError::Config("cap must be at least 1".into()));
        }
        let prime = parse_prime(&fq, &self.p)?;
        let module = trinomial_module(&fq, self.r, &prime)?;
        Ok(Instance {
            field: RatFuncField::new(fq.clone()),
            fq,
            prime,
            module,
        })
    }
}
