//! Anonymous-knowledge beliefs and the searcher stopping rule.
//!
//! A searcher knows how many stores use each strategy but not which seller
//! plays which. After observing a price she forms a posterior over the
//! strategy that produced it: atoms dominate densities, so if any believed
//! strategy has an atom at the price only atom-bearing strategies remain,
//! weighted by `n(s) * mass`; otherwise weights are `n(s) * density`.
//!
//! The expected price of one more search, given the observed strategy `s`,
//! averages the remaining stores: `(sum_s' n(s') e(s') - e(s)) / (total - 1)`.
//! For several past observations the same one-step rule is re-applied to a
//! belief state with one count removed per identified observation (see
//! [`BeliefState::without_one`]).

use serde::Serialize;

use crate::error::BeliefError;
use crate::market::MarketConfig;
use crate::numerics::linspace;
use crate::payoff::expected_price;
use crate::strategy::{PricingStrategy, StrategyProfile};

/// Atom-window half width relative to the largest believed price.
const ATOM_WINDOW: f64 = 1e-9;
/// Relative slack under which continuing counts as indifferent (and stops).
const INDIFFERENCE_TOL: f64 = 1e-9;
/// Grid size of the exact sequential reserve-price check.
const RESERVE_GRID: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct BeliefEntry {
    pub strategy: PricingStrategy,
    pub count: u32,
    expected: f64,
}

impl BeliefEntry {
    pub fn expected_price(&self) -> f64 {
        self.expected
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeliefState {
    entries: Vec<BeliefEntry>,
}

impl BeliefState {
    /// Beliefs from explicit `(strategy, count)` pairs. Entries with a zero
    /// count are dropped; listing a strategy twice is an error.
    pub fn new(entries: Vec<(PricingStrategy, u32)>) -> Result<Self, BeliefError> {
        for (k, (s, _)) in entries.iter().enumerate() {
            if entries[..k].iter().any(|(t, _)| t == s) {
                return Err(BeliefError::DuplicateStrategy(k));
            }
        }
        Ok(BeliefState {
            entries: entries
                .into_iter()
                .filter(|e| e.1 > 0)
                .map(|(strategy, count)| BeliefEntry {
                    expected: expected_price(&strategy),
                    strategy,
                    count,
                })
                .collect(),
        })
    }

    /// Beliefs that coincide with the profile: each distinct strategy is
    /// believed to be used by the stores of the sellers playing it.
    pub fn truthful(profile: &StrategyProfile, config: &MarketConfig) -> Self {
        let mut merged: Vec<(PricingStrategy, u32)> = Vec::new();
        for (s, &n) in profile.strategies.iter().zip(&config.store_counts) {
            match merged.iter_mut().find(|(t, _)| t == s) {
                Some(entry) => entry.1 += n,
                None => merged.push((s.clone(), n)),
            }
        }
        BeliefState::new(merged).expect("merged entries are distinct")
    }

    pub fn entries(&self) -> &[BeliefEntry] {
        &self.entries
    }

    pub fn total(&self) -> u32 {
        self.entries.iter().map(|e| e.count).sum()
    }

    /// The state after one store using entry `index` has been identified.
    pub fn without_one(&self, index: usize) -> Self {
        let mut entries = self.entries.clone();
        entries[index].count -= 1;
        if entries[index].count == 0 {
            entries.remove(index);
        }
        BeliefState { entries }
    }

    fn atom_window(&self) -> f64 {
        let scale = self
            .entries
            .iter()
            .map(|e| e.strategy.support_max())
            .fold(0.0, f64::max);
        ATOM_WINDOW * scale
    }
}

/// Posterior probability of each belief entry (in entry order) having
/// produced the observed price `p`.
pub fn posterior(p: f64, beliefs: &BeliefState) -> Result<Vec<f64>, BeliefError> {
    let eps = beliefs.atom_window();
    let weigh = |f: &dyn Fn(&PricingStrategy) -> f64| -> Vec<f64> {
        beliefs
            .entries
            .iter()
            .map(|e| f64::from(e.count) * f(&e.strategy))
            .collect()
    };
    let mut w = weigh(&|s| s.atom_mass_near(p, eps));
    if w.iter().all(|&x| x == 0.0) {
        w = weigh(&|s| s.density(p));
        if w.iter().any(|x| x.is_infinite()) {
            // integrable singularity at a support end; only singular
            // strategies carry weight there
            w = w
                .iter()
                .zip(&beliefs.entries)
                .map(|(x, e)| {
                    if x.is_infinite() {
                        f64::from(e.count)
                    } else {
                        0.0
                    }
                })
                .collect();
        }
    }
    let total: f64 = w.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(BeliefError::OffBelief(p));
    }
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// Expected price at the next store after observing `p`.
pub fn continuation_price(p: f64, beliefs: &BeliefState) -> Result<f64, BeliefError> {
    let total = beliefs.total();
    if total <= 1 {
        return Err(BeliefError::NoFurtherStore(total));
    }
    let post = posterior(p, beliefs)?;
    let all: f64 = beliefs
        .entries
        .iter()
        .map(|e| f64::from(e.count) * e.expected)
        .sum();
    let rest = f64::from(total - 1);
    Ok(post
        .iter()
        .zip(&beliefs.entries)
        .map(|(q, e)| q * (all - e.expected) / rest)
        .sum())
}

/// Whether a searcher holding `lowest_observed` searches again. Prices at or
/// below the search cost are always accepted and indifference stops.
pub fn should_continue(
    lowest_observed: f64,
    beliefs: &BeliefState,
    search_cost: f64,
    stores_left: u32,
) -> Result<bool, BeliefError> {
    if stores_left == 0 || lowest_observed <= search_cost {
        return Ok(false);
    }
    let next = continuation_price(lowest_observed, beliefs)?;
    let slack = INDIFFERENCE_TOL * lowest_observed.abs().max(search_cost);
    Ok(next < lowest_observed - search_cost - slack)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReserveReport {
    /// Every seller's expected price is at least `P_M - c` (within tolerance).
    pub sufficient: bool,
    /// `E[price_i] - (P_M - c)` per seller.
    pub margins: Vec<f64>,
    /// No observable price at or below `P_M` makes another search worthwhile.
    pub exact: bool,
    /// Largest `(p - c) - continuation(p)` over the checked prices.
    pub worst_gain: f64,
    pub worst_price: f64,
    /// Checked prices where searching again is strictly profitable.
    pub violations: Vec<f64>,
    pub prices_checked: usize,
}

impl ReserveReport {
    pub fn passed(&self) -> bool {
        self.exact
    }
}

/// Checks that the profile's reserve price is rational for searchers: the
/// sufficient expected-price bound and the exact sequential rule on a grid
/// of observable prices under truthful beliefs.
pub fn reserve_price_rational(profile: &StrategyProfile, config: &MarketConfig) -> ReserveReport {
    reserve_price_rational_with(profile, config, &BeliefState::truthful(profile, config))
}

/// As [`reserve_price_rational`], with the sequential rule run under the
/// given beliefs.
pub fn reserve_price_rational_with(
    profile: &StrategyProfile,
    config: &MarketConfig,
    beliefs: &BeliefState,
) -> ReserveReport {
    let reserve = profile.reserve_price;
    let c = config.search_cost;
    let margins: Vec<f64> = profile
        .strategies
        .iter()
        .map(|s| expected_price(s) - (reserve - c))
        .collect();
    let tol = 1e-9 * reserve;
    let sufficient = margins.iter().all(|&m| m >= -tol);

    let stores_left = config.total_stores() - 1;
    let mut prices = linspace(profile.lowest_price(), reserve, RESERVE_GRID);
    for s in &profile.strategies {
        prices.extend(s.atoms().iter().map(|a| a.0));
    }
    prices.retain(|&p| p <= reserve * (1.0 + 1e-12));

    let mut worst_gain = f64::NEG_INFINITY;
    let mut worst_price = reserve;
    let mut violations = Vec::new();
    let mut checked = 0;
    for p in prices {
        let Ok(next) = continuation_price(p, beliefs) else {
            continue;
        };
        checked += 1;
        let gain = (p - c) - next;
        if gain > worst_gain {
            worst_gain = gain;
            worst_price = p;
        }
        if should_continue(p, beliefs, c, stores_left).unwrap_or(false) {
            violations.push(p);
        }
    }
    ReserveReport {
        sufficient,
        margins,
        exact: violations.is_empty(),
        worst_gain,
        worst_price,
        violations,
        prices_checked: checked,
    }
}
