//! Market primitives: sellers with store counts, the shopper/searcher split,
//! the search cost and the valuation bound, plus the constants derived from
//! them.
//!
//! Production cost is normalised to zero throughout, so profit is simply
//! price times expected quantity.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketConfig {
    /// Stores owned by each seller. All ones is the single-store model.
    pub store_counts: Vec<u32>,
    /// Fraction of buyers who are shoppers (always buy at the cheapest store).
    #[serde(rename = "mu")]
    pub shopper_fraction: f64,
    /// Cost of every search after the first (free) one.
    #[serde(rename = "c")]
    pub search_cost: f64,
    /// Upper bound on prices; the buyers' valuation.
    #[serde(rename = "M")]
    pub valuation_bound: f64,
}

/// Which equilibrium characterisation applies to a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Every seller has the same number of stores.
    Original,
    /// Unequal sizes, smallest store count attained by two or more sellers.
    Extended,
    /// Unequal sizes with a single smallest seller.
    UniqueSmallest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedConstants {
    pub total_stores: u32,
    /// Searcher mass initially routed to each seller, `(1 - mu) n_i / N`.
    pub searcher_shares: Vec<f64>,
    /// Sellers attaining the minimum store count.
    pub smallest: Vec<usize>,
    /// Sellers attaining the second-smallest distinct store count.
    pub second_smallest: Vec<usize>,
    pub smallest_count: u32,
    pub second_smallest_count: Option<u32>,
}

impl MarketConfig {
    pub fn new(
        store_counts: Vec<u32>,
        shopper_fraction: f64,
        search_cost: f64,
        valuation_bound: f64,
    ) -> Result<Self, ConfigError> {
        validate(MarketConfig {
            store_counts,
            shopper_fraction,
            search_cost,
            valuation_bound,
        })
    }

    pub fn sellers(&self) -> usize {
        self.store_counts.len()
    }

    pub fn total_stores(&self) -> u32 {
        self.store_counts.iter().sum()
    }

    pub fn searcher_share(&self, seller: usize) -> f64 {
        (1.0 - self.shopper_fraction) * f64::from(self.store_counts[seller])
            / f64::from(self.total_stores())
    }

    pub fn derived(&self) -> DerivedConstants {
        derived_constants(self)
    }

    pub fn model_kind(&self) -> ModelKind {
        let d = self.derived();
        if d.second_smallest_count.is_none() {
            ModelKind::Original
        } else if d.smallest.len() >= 2 {
            ModelKind::Extended
        } else {
            ModelKind::UniqueSmallest
        }
    }

    /// Same market with search cost and valuation bound multiplied by `factor`.
    pub fn scale_prices(&self, factor: f64) -> MarketConfig {
        MarketConfig {
            search_cost: self.search_cost * factor,
            valuation_bound: self.valuation_bound * factor,
            ..self.clone()
        }
    }
}

/// Returns the configuration unchanged if every invariant holds, otherwise
/// the first violated one.
pub fn validate(config: MarketConfig) -> Result<MarketConfig, ConfigError> {
    let mu = config.shopper_fraction;
    if !(mu > 0.0 && mu < 1.0) {
        return Err(ConfigError::ShopperFraction(mu));
    }
    if config.store_counts.len() < 2 {
        return Err(ConfigError::TooFewSellers(config.store_counts.len()));
    }
    if let Some(i) = config.store_counts.iter().position(|&n| n == 0) {
        return Err(ConfigError::EmptySeller(i));
    }
    let c = config.search_cost;
    if !(c > 0.0 && c.is_finite()) {
        return Err(ConfigError::SearchCost(c));
    }
    let m = config.valuation_bound;
    if !(m.is_finite() && m > c) {
        return Err(ConfigError::ValuationBound { bound: m, cost: c });
    }
    Ok(config)
}

pub fn derived_constants(config: &MarketConfig) -> DerivedConstants {
    let counts = &config.store_counts;
    let smallest_count = counts.iter().copied().min().unwrap_or(0);
    let second_smallest_count = counts.iter().copied().filter(|&n| n > smallest_count).min();
    let members = |target: Option<u32>| -> Vec<usize> {
        counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| Some(n) == target)
            .map(|(i, _)| i)
            .collect()
    };
    DerivedConstants {
        total_stores: config.total_stores(),
        searcher_shares: (0..counts.len())
            .map(|i| config.searcher_share(i))
            .collect(),
        smallest: members(Some(smallest_count)),
        second_smallest: members(second_smallest_count),
        smallest_count,
        second_smallest_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(counts: &[u32], mu: f64) -> MarketConfig {
        MarketConfig {
            store_counts: counts.to_vec(),
            shopper_fraction: mu,
            search_cost: 1.0,
            valuation_bound: 100.0,
        }
    }

    #[test]
    fn three_single_store_sellers_are_valid() {
        assert!(validate(cfg(&[1, 1, 1], 0.25)).is_ok());
    }

    #[test]
    fn monopoly_is_rejected() {
        assert_eq!(
            validate(cfg(&[1], 0.25)),
            Err(ConfigError::TooFewSellers(1))
        );
    }

    #[test]
    fn all_shoppers_is_rejected() {
        assert_eq!(
            validate(cfg(&[3, 1, 1], 1.0)),
            Err(ConfigError::ShopperFraction(1.0))
        );
    }

    #[test]
    fn other_invariants() {
        assert_eq!(
            validate(cfg(&[1, 0], 0.5)),
            Err(ConfigError::EmptySeller(1))
        );
        let mut c = cfg(&[1, 1], 0.5);
        c.search_cost = 0.0;
        assert_eq!(validate(c), Err(ConfigError::SearchCost(0.0)));
        let mut c = cfg(&[1, 1], 0.5);
        c.valuation_bound = 0.5;
        assert!(matches!(
            validate(c),
            Err(ConfigError::ValuationBound { .. })
        ));
        assert!(validate(cfg(&[1, 1], f64::NAN)).is_err());
    }

    #[test]
    fn shares_for_chain_example() {
        let d = cfg(&[3, 1, 1], 1.0 / 6.0).derived();
        let expect = [0.5, 1.0 / 6.0, 1.0 / 6.0];
        for (s, e) in d.searcher_shares.iter().zip(expect) {
            assert!((s - e).abs() < 1e-15);
        }
        assert_eq!(d.smallest, vec![1, 2]);
        assert_eq!(d.second_smallest, vec![0]);
    }

    #[test]
    fn shares_symmetric_and_unique_smallest() {
        let d = cfg(&[1, 1], 0.5).derived();
        assert_eq!(d.searcher_shares, vec![0.25, 0.25]);
        let d = cfg(&[1, 2, 2], 0.2).derived();
        // (1 - 0.2) * n_i / 5
        for (s, e) in d.searcher_shares.iter().zip([0.16, 0.32, 0.32]) {
            assert!((s - e).abs() < 1e-15);
        }
        let total: f64 = d.searcher_shares.iter().sum();
        assert!((total - 0.8).abs() < 1e-12);
    }

    #[test]
    fn model_kinds() {
        assert_eq!(cfg(&[2, 2, 2], 0.3).model_kind(), ModelKind::Original);
        assert_eq!(cfg(&[3, 1, 1], 0.3).model_kind(), ModelKind::Extended);
        assert_eq!(cfg(&[1, 2, 2], 0.3).model_kind(), ModelKind::UniqueSmallest);
    }
}
