//! Win probabilities, expected profits and expected prices.
//!
//! A seller charging `p <= P_M` keeps every searcher who starts at one of
//! her stores and wins the shoppers when she is the cheapest, so
//! `profit(p) = p (mu * alpha(p) + Src_i)`. Above the reserve price searchers
//! walk away; the off-path trickle of searchers who return after finding
//! everything dear is left to the simulator and counted as zero here.

use serde::{Deserialize, Serialize};

use crate::error::PayoffError;
use crate::market::MarketConfig;
use crate::numerics::{pairwise_sum, same_price};
use crate::strategy::{PricingStrategy, StrategyProfile};

/// Quantile points used to average profit over a seller's own mixture.
const PROFIT_QUANTILE_POINTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfitBreakdown {
    pub price: f64,
    pub shopper_win_prob: f64,
    pub shopper_revenue: f64,
    pub searcher_revenue: f64,
    pub total: f64,
    /// The price is above the reserve price, so searcher revenue is a bound.
    pub off_reserve: bool,
}

/// Probability that seller `j` prices strictly above `p`.
pub fn survival(j: usize, p: f64, profile: &StrategyProfile) -> f64 {
    profile.strategies[j].prob_above(p)
}

/// Expected share of shoppers won by seller `i` when charging `p`.
///
/// Without rival atoms at `p` this is the product of rival survivals. When
/// rivals may tie at `p`, shoppers spread uniformly over all tying stores, so
/// seller `i` wins `n_i / (n_i + tied rival stores)` of them.
pub fn win_probability(i: usize, p: f64, profile: &StrategyProfile, config: &MarketConfig) -> f64 {
    let rivals = (0..profile.sellers()).filter(|&j| j != i);
    let any_tie = rivals
        .clone()
        .any(|j| profile.strategies[j].prob_at(p) > 0.0);
    if !any_tie {
        return rivals.map(|j| survival(j, p, profile)).product();
    }
    let counts = &config.store_counts;
    let total = config.total_stores() as usize;
    // dist[s]: probability that no rival undercuts and tied rivals own s stores
    let mut dist = vec![0.0; total + 1];
    dist[0] = 1.0;
    for j in rivals {
        let s = &profile.strategies[j];
        let (above, at) = (s.prob_above(p), s.prob_at(p));
        let nj = counts[j] as usize;
        let mut next = vec![0.0; total + 1];
        for (k, &w) in dist.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            next[k] += w * above;
            if at > 0.0 {
                next[k + nj] += w * at;
            }
        }
        dist = next;
    }
    let ni = f64::from(counts[i]);
    dist.iter()
        .enumerate()
        .map(|(k, w)| w * ni / (ni + k as f64))
        .sum()
}

pub fn expected_profit(
    i: usize,
    p: f64,
    profile: &StrategyProfile,
    config: &MarketConfig,
) -> ProfitBreakdown {
    let alpha = win_probability(i, p, profile, config);
    let shopper_revenue = p * config.shopper_fraction * alpha;
    let reserve = profile.reserve_price;
    let off_reserve = p > reserve && !same_price(p, reserve);
    let searcher_revenue = if off_reserve {
        0.0
    } else {
        p * config.searcher_share(i)
    };
    ProfitBreakdown {
        price: p,
        shopper_win_prob: alpha,
        shopper_revenue,
        searcher_revenue,
        total: shopper_revenue + searcher_revenue,
        off_reserve,
    }
}

/// Prices at which `strategy` puts mass: `per_interval` interior midpoints of
/// each continuous support interval, followed by the atoms.
pub fn support_sample(strategy: &PricingStrategy, per_interval: usize) -> Vec<f64> {
    let mut pts = Vec::new();
    for (a, b) in strategy.continuous_support() {
        let n = per_interval.max(1);
        pts.extend((0..n).map(|k| a + (b - a) * (k as f64 + 0.5) / n as f64));
    }
    pts.extend(strategy.atoms().iter().map(|a| a.0));
    pts
}

/// Expected profit of seller `i` playing her own (possibly mixed) strategy
/// against the rest of the profile.
pub fn strategy_profit(i: usize, profile: &StrategyProfile, config: &MarketConfig) -> f64 {
    let s = &profile.strategies[i];
    let atoms: f64 = s
        .atoms()
        .iter()
        .map(|&(loc, mass)| mass * expected_profit(i, loc, profile, config).total)
        .sum();
    let continuous = match s.cdf() {
        Some(cdf) if cdf.right_value() > 0.0 => {
            let mass = cdf.right_value();
            let k = PROFIT_QUANTILE_POINTS;
            let vals: Vec<f64> = (0..k)
                .map(|t| {
                    let u = mass * (t as f64 + 0.5) / k as f64;
                    expected_profit(i, cdf.quantile(u), profile, config).total
                })
                .collect();
            mass * pairwise_sum(&vals) / k as f64
        }
        _ => 0.0,
    };
    atoms + continuous
}

/// Relative spread `(max - min) / max` of profit over the seller's support.
pub fn support_profit_spread(
    i: usize,
    profile: &StrategyProfile,
    config: &MarketConfig,
    per_interval: usize,
) -> f64 {
    let profits: Vec<f64> = support_sample(&profile.strategies[i], per_interval)
        .into_iter()
        .map(|p| expected_profit(i, p, profile, config).total)
        .collect();
    let max = profits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = profits.iter().copied().fold(f64::INFINITY, f64::min);
    if max <= 0.0 {
        return if min == max { 0.0 } else { f64::INFINITY };
    }
    (max - min) / max
}

/// Profit divided by store count. Fails if profit is not constant on the
/// seller's support (relative spread above `tol`).
pub fn profit_per_branch(
    i: usize,
    profile: &StrategyProfile,
    config: &MarketConfig,
    tol: f64,
) -> Result<f64, PayoffError> {
    if i >= profile.sellers() || i >= config.sellers() {
        return Err(PayoffError::Seller(i));
    }
    let spread = support_profit_spread(i, profile, config, 200);
    if spread > tol {
        return Err(PayoffError::NotConstant { seller: i, spread });
    }
    Ok(strategy_profit(i, profile, config) / f64::from(config.store_counts[i]))
}

/// Mean price of a strategy, atoms included.
pub fn expected_price(strategy: &PricingStrategy) -> f64 {
    let atoms: f64 = strategy.atoms().iter().map(|(loc, m)| loc * m).sum();
    atoms + strategy.cdf().map_or(0.0, |c| c.partial_mean())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdf::{ParamCdf, SharedGroupParams};
    use crate::numerics::linspace;

    fn two_mixers_one_pure(reserve: f64) -> (StrategyProfile, MarketConfig) {
        let cdf = ParamCdf::shared_group(
            SharedGroupParams {
                reserve,
                share_ratio: 1.0,
                full_mixers: 2,
                cutoffs: vec![],
            },
            reserve,
        )
        .unwrap();
        let mix = PricingStrategy::mixed(cdf);
        let profile = StrategyProfile::new(
            vec![PricingStrategy::pure(reserve), mix.clone(), mix],
            reserve,
        );
        let config = MarketConfig::new(vec![1, 1, 1], 0.25, 1.0, 100.0).unwrap();
        (profile, config)
    }

    #[test]
    fn survival_examples() {
        let (profile, _) = two_mixers_one_pure(2.0);
        assert_eq!(survival(0, 1.0, &profile), 1.0);
        assert_eq!(survival(1, 1.0, &profile), 1.0);
        assert!((survival(1, 1.5, &profile) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn win_probability_examples() {
        let (profile, config) = two_mixers_one_pure(2.0);
        assert!((win_probability(1, 1.0, &profile, &config) - 1.0).abs() < 1e-15);
        // pure seller undercutting to 0.75 P_M faces two mixers
        assert!((win_probability(0, 1.5, &profile, &config) - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn mixers_earn_a_quarter_of_the_reserve() {
        let (profile, config) = two_mixers_one_pure(2.0);
        for p in linspace(1.0, 2.0, 101) {
            let b = expected_profit(1, p, &profile, &config);
            assert!((b.total - 0.5).abs() < 1e-14, "p={p} total={}", b.total);
        }
    }

    #[test]
    fn above_reserve_flags_and_drops_searchers() {
        let (profile, config) = two_mixers_one_pure(2.0);
        let b = expected_profit(0, 2.5, &profile, &config);
        assert!(b.off_reserve);
        assert_eq!(b.searcher_revenue, 0.0);
        assert_eq!(b.total, 0.0);
    }

    #[test]
    fn ties_split_by_store_count() {
        let config = MarketConfig::new(vec![3, 1], 0.5, 0.1, 10.0).unwrap();
        let profile = StrategyProfile::new(
            vec![PricingStrategy::pure(1.0), PricingStrategy::pure(1.0)],
            1.0,
        );
        assert!((win_probability(0, 1.0, &profile, &config) - 0.75).abs() < 1e-15);
        assert!((win_probability(1, 1.0, &profile, &config) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn expected_price_of_group_mixer() {
        let (profile, _) = two_mixers_one_pure(2.0);
        let e = expected_price(&profile.strategies[1]);
        assert!((e - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert_eq!(expected_price(&PricingStrategy::pure(1.7)), 1.7);
    }

    #[test]
    fn per_branch_rejects_non_constant_profit() {
        let config = MarketConfig::new(vec![1, 1], 0.5, 0.1, 10.0).unwrap();
        let uniform = ParamCdf::tabulated(vec![[1.0, 0.0], [2.0, 1.0]]).unwrap();
        let profile = StrategyProfile::new(
            vec![
                PricingStrategy::mixed(uniform.clone()),
                PricingStrategy::mixed(uniform),
            ],
            2.0,
        );
        assert!(matches!(
            profit_per_branch(0, &profile, &config, 1e-6),
            Err(PayoffError::NotConstant { .. })
        ));
    }
}
