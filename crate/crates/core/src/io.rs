//! Config, profile and report files, and the CSV outputs.
//!
//! Config (TOML):
//!
//! ```toml
//! store_counts = [3, 1, 1]
//! mu = 0.1666666666666667
//! c = 1.0
//! M = 100.0
//!
//! [groups]                      # optional; default groups otherwise
//! full_mixers = [1, 2]
//! pure_reserve = []
//! cutoffs = [{ seller = 3, at = 0.8 }]   # cutoff price = at * P_M
//!
//! [tolerances]                  # optional
//! deviation = 1e-6
//! profit = 1e-6
//! grid = 10000
//!
//! [sweep]                       # optional; cartesian product of the lists
//! store_counts = [[1, 1, 1, 1, 1, 1], [4, 1, 1]]
//! mu = [0.25]
//! ```
//!
//! Profiles carry `schema_version = 1`, the reserve price and one
//! `[[strategies]]` table per seller.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::equilibrium::{ConstructedEquilibrium, GroupSpec};
use crate::error::FileError;
use crate::market::MarketConfig;
use crate::simulate::{SimulationResult, SweepPoint, SweepRow};
use crate::strategy::{PricingStrategy, StrategyProfile};
use crate::verify::{Tolerances, VerificationReport};

pub const PROFILE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub store_counts: Vec<Vec<u32>>,
    #[serde(default)]
    pub mu: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub store_counts: Vec<u32>,
    pub mu: f64,
    pub c: f64,
    #[serde(rename = "M")]
    pub valuation_bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

impl ConfigFile {
    pub fn market(&self) -> Result<MarketConfig, FileError> {
        Ok(MarketConfig::new(
            self.store_counts.clone(),
            self.mu,
            self.c,
            self.valuation_bound,
        )?)
    }

    /// Sweep grid; missing lists fall back to the base config's values.
    pub fn sweep_points(&self) -> Vec<SweepPoint> {
        let spec = self.sweep.clone().unwrap_or_default();
        let counts = if spec.store_counts.is_empty() {
            vec![self.store_counts.clone()]
        } else {
            spec.store_counts
        };
        let mus = if spec.mu.is_empty() {
            vec![self.mu]
        } else {
            spec.mu
        };
        counts
            .iter()
            .flat_map(|c| {
                mus.iter().map(move |&mu| SweepPoint {
                    store_counts: c.clone(),
                    mu,
                })
            })
            .collect()
    }
}

fn read(path: &Path) -> Result<String, FileError> {
    fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), FileError> {
    fs::write(path, text).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_error(path: &Path, e: impl std::fmt::Display) -> FileError {
    FileError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

pub fn parse_config(text: &str, path: &Path) -> Result<ConfigFile, FileError> {
    toml::from_str(text).map_err(|e| parse_error(path, e))
}

pub fn load_config(path: &Path) -> Result<ConfigFile, FileError> {
    parse_config(&read(path)?, path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    schema_version: u32,
    reserve_price: f64,
    strategies: Vec<PricingStrategy>,
}

pub fn profile_to_string(profile: &StrategyProfile) -> String {
    toml::to_string(&ProfileFile {
        schema_version: PROFILE_SCHEMA_VERSION,
        reserve_price: profile.reserve_price,
        strategies: profile.strategies.clone(),
    })
    .expect("profiles serialize to TOML")
}

/// Parses a profile, rejecting unknown schema versions before anything else
/// and structurally malformed strategies after.
pub fn parse_profile(text: &str, path: &Path) -> Result<StrategyProfile, FileError> {
    let table: toml::Table = text.parse().map_err(|e| parse_error(path, e))?;
    let found = table
        .get("schema_version")
        .and_then(toml::Value::as_integer)
        .ok_or_else(|| parse_error(path, "missing integer schema_version"))?;
    if found != i64::from(PROFILE_SCHEMA_VERSION) {
        return Err(FileError::SchemaVersion {
            path: path.display().to_string(),
            found: u32::try_from(found).unwrap_or(u32::MAX),
            expected: PROFILE_SCHEMA_VERSION,
        });
    }
    let file: ProfileFile = toml::from_str(text).map_err(|e| parse_error(path, e))?;
    for s in &file.strategies {
        s.validate()?;
    }
    Ok(StrategyProfile::new(file.strategies, file.reserve_price))
}

pub fn load_profile(path: &Path) -> Result<StrategyProfile, FileError> {
    parse_profile(&read(path)?, path)
}

pub fn save_profile(path: &Path, profile: &StrategyProfile) -> Result<(), FileError> {
    write(path, &profile_to_string(profile))
}

pub fn report_to_string(report: &VerificationReport) -> String {
    toml::to_string(report).expect("reports serialize to TOML")
}

pub fn save_report(path: &Path, report: &VerificationReport) -> Result<(), FileError> {
    write(path, &report_to_string(report))
}

/// Human-readable description of a constructed equilibrium.
pub fn summary(eq: &ConstructedEquilibrium, config: &MarketConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model: {:?}", eq.kind);
    let _ = writeln!(s, "reserve price P_M: {}", eq.reserve_price());
    let _ = writeln!(s, "lowest price P_L: {}", eq.lowest_price);
    let _ = writeln!(s, "kappa (min E[price] / P_M): {}", eq.diagnostics.kappa);
    let _ = writeln!(
        s,
        "|min E[price] - (P_M - c)|: {:e}",
        eq.diagnostics.expected_price_residual
    );
    let _ = writeln!(s, "seller  stores  strategy     profit  profit_per_store");
    for (i, st) in eq.profile.strategies.iter().enumerate() {
        let n = config.store_counts[i];
        let kind = match st {
            PricingStrategy::PurePoint { .. } => "pure",
            PricingStrategy::MixedFull { .. } => "mixed",
            PricingStrategy::Cutoff { .. } => "cutoff",
        };
        let _ = writeln!(
            s,
            "{i:>6}  {n:>6}  {kind:<8}  {:>10.6}  {:>16.6}",
            eq.analytic_profit[i],
            eq.analytic_profit[i] / f64::from(n)
        );
    }
    s
}

#[derive(Serialize)]
struct SellerRow {
    seller: usize,
    stores: u32,
    mean_profit: f64,
    profit_se: f64,
    mean_quantity: f64,
}

#[derive(Serialize)]
struct SummaryRow {
    replications: u64,
    seed: u64,
    agents: bool,
    mean_searches: f64,
    first_store_fraction: f64,
    mean_search_cost: f64,
    mean_searcher_price: f64,
    mean_shopper_price: f64,
    total_profit: f64,
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, FileError> {
    let file = fs::File::create(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(csv::Writer::from_writer(file))
}

/// Writes `simulation.csv`, `simulation_summary.csv` and
/// `price_paid_histogram.csv` into `dir`.
pub fn write_simulation_csv(dir: &Path, result: &SimulationResult) -> Result<(), FileError> {
    let mut w = csv_writer(&dir.join("simulation.csv"))?;
    for s in &result.sellers {
        w.serialize(SellerRow {
            seller: s.seller,
            stores: s.stores,
            mean_profit: s.mean_profit,
            profit_se: s.profit_se,
            mean_quantity: s.mean_quantity,
        })?;
    }
    w.flush().map_err(csv::Error::from)?;

    let mut w = csv_writer(&dir.join("simulation_summary.csv"))?;
    w.serialize(SummaryRow {
        replications: result.replications,
        seed: result.seed,
        agents: result.agents,
        mean_searches: result.mean_searches,
        first_store_fraction: result.first_store_fraction,
        mean_search_cost: result.mean_search_cost,
        mean_searcher_price: result.mean_searcher_price,
        mean_shopper_price: result.mean_shopper_price,
        total_profit: result.total_profit(),
    })?;
    w.flush().map_err(csv::Error::from)?;

    let mut w = csv_writer(&dir.join("price_paid_histogram.csv"))?;
    for b in &result.histogram {
        w.serialize(b)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Serialize)]
struct SweepCsvRow<'a> {
    point: usize,
    store_counts: String,
    mu: f64,
    kind: &'a str,
    reserve_price: Option<f64>,
    lowest_price: Option<f64>,
    searcher_price: Option<f64>,
    searcher_price_ratio: Option<f64>,
    shopper_price: Option<f64>,
    simulated_searcher_price: Option<f64>,
    simulated_shopper_price: Option<f64>,
    error: &'a str,
}

/// Writes the sweep table; `store_counts` is space separated.
pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<(), FileError> {
    let mut w = csv_writer(path)?;
    for r in rows {
        let kind = match r.kind {
            Some(crate::market::ModelKind::Original) => "original",
            Some(crate::market::ModelKind::Extended) => "extended",
            Some(crate::market::ModelKind::UniqueSmallest) => "unique_smallest",
            None => "",
        };
        w.serialize(SweepCsvRow {
            point: r.point,
            store_counts: r
                .store_counts
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(" "),
            mu: r.mu,
            kind,
            reserve_price: r.reserve_price,
            lowest_price: r.lowest_price,
            searcher_price: r.searcher_price,
            searcher_price_ratio: r.searcher_price_ratio,
            shopper_price: r.shopper_price,
            simulated_searcher_price: r.simulated_searcher_price,
            simulated_shopper_price: r.simulated_shopper_price,
            error: r.error.as_deref().unwrap_or(""),
        })?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::construct;

    #[test]
    fn config_round_trip() {
        let text = r#"
store_counts = [1, 1, 1, 1]
mu = 0.25
c = 1.0
M = 100.0

[groups]
full_mixers = [0, 1]
pure_reserve = [3]
cutoffs = [{ seller = 2, at = 0.8 }]

[sweep]
mu = [0.2, 0.4]
"#;
        let cfg = parse_config(text, Path::new("cfg.toml")).unwrap();
        assert_eq!(cfg.groups.as_ref().unwrap().cutoff_sellers[0].at, 0.8);
        assert_eq!(cfg.sweep_points().len(), 2);
        assert!(cfg.tolerances.is_none());
        let again = parse_config(&toml::to_string(&cfg).unwrap(), Path::new("x")).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn config_typos_are_rejected() {
        let text = "store_counts = [1, 1]\nmu = 0.2\nc = 1.0\nM = 10.0\nshoppers = 3\n";
        assert!(matches!(
            parse_config(text, Path::new("c.toml")),
            Err(FileError::Parse { .. })
        ));
    }

    #[test]
    fn profile_round_trip() {
        let config = MarketConfig::new(vec![1, 2, 2], 0.2, 1.0, 100.0).unwrap();
        let eq = construct(&config, None).unwrap();
        let text = profile_to_string(&eq.profile);
        let back = parse_profile(&text, Path::new("p.toml")).unwrap();
        assert_eq!(back, eq.profile);
    }

    #[test]
    fn unknown_schema_version() {
        let text = "schema_version = 7\nreserve_price = 1.0\n";
        assert!(matches!(
            parse_profile(text, Path::new("p.toml")),
            Err(FileError::SchemaVersion { found: 7, .. })
        ));
    }

    #[test]
    fn report_serializes() {
        let config = MarketConfig::new(vec![1, 1], 0.5, 1.0, 100.0).unwrap();
        let eq = construct(&config, None).unwrap();
        let r = crate::verify::verify(&eq.profile, &config, &Tolerances::default()).unwrap();
        let text = report_to_string(&r);
        assert!(text.starts_with("passed = true"));
        assert!(text.contains("name = \"support_bound\""));
    }
}
