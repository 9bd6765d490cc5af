//! Error types for every layer of the crate.

use thiserror::Error;

/// A violated [`MarketConfig`](crate::market::MarketConfig) invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("shopper fraction mu = {0} must lie strictly between 0 and 1")]
    ShopperFraction(f64),
    #[error("need at least 2 sellers, got {0}")]
    TooFewSellers(usize),
    #[error("seller {0} has no stores; every store count must be positive")]
    EmptySeller(usize),
    #[error("search cost c = {0} must be positive and finite")]
    SearchCost(f64),
    #[error("valuation bound M = {bound} must be finite and exceed the search cost c = {cost}")]
    ValuationBound { bound: f64, cost: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CdfError {
    #[error("support [{lo}, {hi}] is empty or not finite")]
    BadSupport { lo: f64, hi: f64 },
    #[error("tabulated cdf needs at least 2 knots, got {0}")]
    TooFewKnots(usize),
    #[error("cdf decreases between p = {at} and the previous knot")]
    NotMonotone { at: f64 },
    #[error("cdf must start at 0 on the left end of its support, found {0}")]
    LeftEnd(f64),
    #[error("cdf exceeds 1 ({0})")]
    AboveOne(f64),
    #[error("invalid closed-form parameters: {0}")]
    Parameters(String),
}

/// Structural problems with a single pricing strategy.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StrategyError {
    #[error(transparent)]
    Cdf(#[from] CdfError),
    #[error("price {0} is not a positive finite number")]
    Price(f64),
    #[error("mass at top {0} is outside [0, 1)")]
    Mass(f64),
    #[error("cdf right-end value {right} plus mass at top {mass} does not sum to 1")]
    MassBalance { right: f64, mass: f64 },
    #[error("cutoff price {cutoff} does not match the cdf support end {hi}")]
    CutoffSupport { cutoff: f64, hi: f64 },
    #[error("cutoff price {cutoff} must lie below the atom location {top}")]
    CutoffAboveTop { cutoff: f64, top: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PayoffError {
    #[error("seller {seller} profit varies on its support (relative spread {spread:e})")]
    NotConstant { seller: usize, spread: f64 },
    #[error("seller index {0} out of range")]
    Seller(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Cdf(#[from] CdfError),
    #[error("need at least 2 full mixers, got {0}")]
    TooFewMixers(usize),
    #[error("the original model requires equal store counts for every seller")]
    UnequalStores,
    #[error("the smallest store count is attained by a single seller; use the unique-smallest construction")]
    UniqueSmallest,
    #[error("the smallest store count is not unique; use the extended construction")]
    SmallestNotUnique,
    #[error("invalid group specification: {0}")]
    Groups(String),
    #[error("structure constant kappa = {kappa} >= 1 leaves no valid reserve price ({structure})")]
    NoReservePrice { kappa: f64, structure: String },
    #[error("solved reserve price {reserve} exceeds the valuation bound {bound}")]
    ReserveAboveBound { reserve: f64, bound: f64 },
    #[error("reserve price root-finding failed: {0}")]
    RootFinding(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BeliefError {
    #[error("belief state lists the same strategy twice (entry {0})")]
    DuplicateStrategy(usize),
    #[error("price {0} has zero likelihood under every believed strategy")]
    OffBelief(f64),
    #[error("no further store to search (total believed count {0})")]
    NoFurtherStore(u32),
}

/// Structural errors that prevent verification from running at all.
/// Equilibrium failures are reported inside the
/// [`VerificationReport`](crate::verify::VerificationReport) instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("profile has {strategies} strategies but the market has {sellers} sellers")]
    SellerCount { strategies: usize, sellers: usize },
    #[error("reserve price {0} is not a positive finite number")]
    ReservePrice(f64),
    #[error("seller {seller}: malformed strategy: {source}")]
    Malformed {
        seller: usize,
        #[source]
        source: StrategyError,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulateError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("replications must be at least 1")]
    NoReplications,
    #[error("profile has {strategies} strategies but the market has {sellers} sellers")]
    SellerCount { strategies: usize, sellers: usize },
    #[error("fluid search over {0} sellers is not supported (at most {1})")]
    TooManySellers(usize, usize),
}

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: unsupported profile schema version {found} (expected {expected})")]
    SchemaVersion {
        path: String,
        found: u32,
        expected: u32,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Failures of a CLI command; all map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("construction failed: {0}")]
    Construct(#[from] ConstructError),
    #[error("verification could not run: {0}")]
    Verify(#[from] VerifyError),
    #[error("simulation failed: {0}")]
    Simulate(#[from] SimulateError),
}
