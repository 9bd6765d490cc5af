//! Monte Carlo market simulation and parameter sweeps.
//!
//! Each replication draws every seller's price by inverse-cdf sampling, sends
//! the shoppers to the cheapest stores and routes the searchers. A searcher
//! starts at a store drawn in proportion to store counts, buys at once if
//! the price is at most the reserve price (or at most the search cost), and
//! otherwise pays `c` to visit a store of a seller she has not seen yet,
//! again in proportion to store counts. Having seen every seller she buys at
//! the cheapest one, returning for free.
//!
//! By default searcher mass is propagated as an exact expected flow given the
//! drawn prices. The agent mode instead follows a single randomly drawn
//! searcher per replication who carries the whole searcher mass.
//!
//! Replication `r` draws from ChaCha8 seeded with the run seed on stream `r`,
//! and all reductions run in replication order, so serial and parallel runs
//! give identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::equilibrium::construct;
use crate::error::SimulateError;
use crate::market::{MarketConfig, ModelKind};
use crate::numerics::{integrate_pieces, pairwise_sum, same_price};
use crate::payoff::expected_price;
use crate::strategy::StrategyProfile;

/// Sellers beyond this make the subset flow too large.
pub const MAX_FLUID_SELLERS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOptions {
    pub replications: u64,
    pub seed: u64,
    pub parallel: bool,
    pub agents: bool,
    pub histogram_bins: usize,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            replications: 100_000,
            seed: 42,
            parallel: true,
            agents: false,
            histogram_bins: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SellerOutcome {
    pub seller: usize,
    pub stores: u32,
    pub mean_profit: f64,
    pub profit_se: f64,
    pub mean_quantity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub searcher_mass: f64,
    pub shopper_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub replications: u64,
    pub seed: u64,
    pub agents: bool,
    pub sellers: Vec<SellerOutcome>,
    /// Stores visited per searcher, the free first visit included.
    pub mean_searches: f64,
    pub first_store_fraction: f64,
    pub mean_search_cost: f64,
    pub mean_searcher_price: f64,
    pub mean_shopper_price: f64,
    pub histogram: Vec<HistogramBin>,
}

impl SimulationResult {
    pub fn total_profit(&self) -> f64 {
        self.sellers.iter().map(|s| s.mean_profit).sum()
    }
}

struct Replication {
    profit: Vec<f64>,
    quantity: Vec<f64>,
    visits: f64,
    first_store: f64,
    searcher_paid: f64,
    shopper_paid: f64,
    /// `(seller, searcher mass, shopper mass)` with nonzero purchases.
    purchases: Vec<(usize, f64, f64)>,
    prices: Vec<f64>,
}

/// Shares of `mass` for the cheapest sellers, split by store count.
fn cheapest_split(prices: &[f64], counts: &[u32]) -> Vec<(usize, f64)> {
    let min = prices.iter().copied().fold(f64::INFINITY, f64::min);
    let tied: Vec<usize> = (0..prices.len())
        .filter(|&i| same_price(prices[i], min))
        .collect();
    let stores: u32 = tied.iter().map(|&i| counts[i]).sum();
    tied.into_iter()
        .map(|i| (i, f64::from(counts[i]) / f64::from(stores)))
        .collect()
}

struct SearchOutcome {
    flow: Vec<f64>,
    visits: f64,
    first_store: f64,
}

fn fluid_search(prices: &[f64], counts: &[u32], accepted: &[bool]) -> SearchOutcome {
    let n = prices.len();
    let total: u32 = counts.iter().sum();
    let mut flow = vec![0.0; n];
    if accepted.iter().all(|&a| a) {
        for i in 0..n {
            flow[i] = f64::from(counts[i]) / f64::from(total);
        }
        return SearchOutcome {
            flow,
            visits: 1.0,
            first_store: 1.0,
        };
    }
    let rejected: Vec<usize> = (0..n).filter(|&i| !accepted[i]).collect();
    let states = 1usize << rejected.len();
    // prob[mask]: probability of having visited exactly the rejected sellers
    // in `mask` and still searching
    let mut prob = vec![0.0; states];
    prob[0] = 1.0;
    let (mut visits, mut first_store) = (0.0, 0.0);
    for mask in 0..states {
        let w = prob[mask];
        if w == 0.0 {
            continue;
        }
        let depth = mask.count_ones() as f64;
        let seen: u32 = rejected
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &i)| counts[i])
            .sum();
        let left = total - seen;
        if left == 0 {
            for (i, share) in cheapest_split(prices, counts) {
                flow[i] += w * share;
            }
            visits += w * depth;
            if depth == 1.0 {
                first_store += w;
            }
            continue;
        }
        let left = f64::from(left);
        for i in (0..n).filter(|&i| accepted[i]) {
            let q = w * f64::from(counts[i]) / left;
            flow[i] += q;
            visits += q * (depth + 1.0);
            if mask == 0 {
                first_store += q;
            }
        }
        for (b, &i) in rejected.iter().enumerate() {
            if mask >> b & 1 == 0 {
                prob[mask | 1 << b] += w * f64::from(counts[i]) / left;
            }
        }
    }
    SearchOutcome {
        flow,
        visits,
        first_store,
    }
}

fn pick_store(rng: &mut ChaCha8Rng, counts: &[u32], open: &[bool]) -> usize {
    let total: u32 = (0..counts.len())
        .filter(|&i| open[i])
        .map(|i| counts[i])
        .sum();
    let mut t = rng.random_range(0..total);
    for i in 0..counts.len() {
        if !open[i] {
            continue;
        }
        if t < counts[i] {
            return i;
        }
        t -= counts[i];
    }
    unreachable!("store draw inside the open total")
}

fn agent_search(
    rng: &mut ChaCha8Rng,
    prices: &[f64],
    counts: &[u32],
    accepted: &[bool],
) -> SearchOutcome {
    let n = prices.len();
    let mut open = vec![true; n];
    let mut flow = vec![0.0; n];
    for visit in 1..=n {
        let i = pick_store(rng, counts, &open);
        if accepted[i] {
            flow[i] = 1.0;
            return SearchOutcome {
                flow,
                visits: visit as f64,
                first_store: if visit == 1 { 1.0 } else { 0.0 },
            };
        }
        open[i] = false;
    }
    for (i, share) in cheapest_split(prices, counts) {
        flow[i] += share;
    }
    SearchOutcome {
        flow,
        visits: n as f64,
        first_store: if n == 1 { 1.0 } else { 0.0 },
    }
}

fn replicate(
    profile: &StrategyProfile,
    config: &MarketConfig,
    opts: &SimulationOptions,
    rep: u64,
) -> Replication {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(rep);
    let prices: Vec<f64> = profile
        .strategies
        .iter()
        .map(|s| s.sample(rng.random::<f64>()))
        .collect();
    let counts = &config.store_counts;
    let mu = config.shopper_fraction;
    let reserve = profile.reserve_price;
    let accepted: Vec<bool> = prices
        .iter()
        .map(|&p| p <= reserve || same_price(p, reserve) || p <= config.search_cost)
        .collect();
    let search = if opts.agents {
        agent_search(&mut rng, &prices, counts, &accepted)
    } else {
        fluid_search(&prices, counts, &accepted)
    };
    let mut shopper = vec![0.0; prices.len()];
    for (i, share) in cheapest_split(&prices, counts) {
        shopper[i] = mu * share;
    }
    let searcher: Vec<f64> = search.flow.iter().map(|f| (1.0 - mu) * f).collect();
    let quantity: Vec<f64> = shopper.iter().zip(&searcher).map(|(a, b)| a + b).collect();
    let profit = prices.iter().zip(&quantity).map(|(p, q)| p * q).collect();
    let searcher_paid = search.flow.iter().zip(&prices).map(|(f, p)| f * p).sum();
    let shopper_paid = prices.iter().copied().fold(f64::INFINITY, f64::min);
    let purchases = (0..prices.len())
        .filter(|&i| quantity[i] > 0.0)
        .map(|i| (i, searcher[i], shopper[i]))
        .collect();
    Replication {
        profit,
        quantity,
        visits: search.visits,
        first_store: search.first_store,
        searcher_paid,
        shopper_paid,
        purchases,
        prices,
    }
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs the market `opts.replications` times.
pub fn simulate(
    profile: &StrategyProfile,
    config: &MarketConfig,
    opts: &SimulationOptions,
) -> Result<SimulationResult, SimulateError> {
    let config = crate::market::validate(config.clone())?;
    if opts.replications == 0 {
        return Err(SimulateError::NoReplications);
    }
    let n = config.sellers();
    if profile.sellers() != n {
        return Err(SimulateError::SellerCount {
            strategies: profile.sellers(),
            sellers: n,
        });
    }
    if n > MAX_FLUID_SELLERS && !opts.agents {
        return Err(SimulateError::TooManySellers(n, MAX_FLUID_SELLERS));
    }
    let run = |r: u64| replicate(profile, &config, opts, r);
    let reps: Vec<Replication> = if opts.parallel {
        (0..opts.replications).into_par_iter().map(run).collect()
    } else {
        (0..opts.replications).map(run).collect()
    };
    let column = |f: &dyn Fn(&Replication) -> f64| -> Vec<f64> { reps.iter().map(f).collect() };
    let mean = |f: &dyn Fn(&Replication) -> f64| mean_and_se(&column(f)).0;

    let sellers = (0..n)
        .map(|i| {
            let (mean_profit, profit_se) = mean_and_se(&column(&|r| r.profit[i]));
            SellerOutcome {
                seller: i,
                stores: config.store_counts[i],
                mean_profit,
                profit_se,
                mean_quantity: mean(&|r| r.quantity[i]),
            }
        })
        .collect();
    let mean_searches = mean(&|r| r.visits);

    let bins = opts.histogram_bins.max(1);
    let top = profile.highest_price().max(f64::MIN_POSITIVE);
    let width = top / bins as f64;
    let mut histogram: Vec<HistogramBin> = (0..bins)
        .map(|b| HistogramBin {
            lower: width * b as f64,
            upper: if b + 1 == bins {
                top
            } else {
                width * (b + 1) as f64
            },
            searcher_mass: 0.0,
            shopper_mass: 0.0,
        })
        .collect();
    let scale = 1.0 / opts.replications as f64;
    for r in &reps {
        for &(i, searcher, shopper) in &r.purchases {
            let b = ((r.prices[i] / width) as usize).min(bins - 1);
            histogram[b].searcher_mass += searcher * scale;
            histogram[b].shopper_mass += shopper * scale;
        }
    }

    Ok(SimulationResult {
        replications: opts.replications,
        seed: opts.seed,
        agents: opts.agents,
        sellers,
        mean_searches,
        first_store_fraction: mean(&|r| r.first_store),
        mean_search_cost: (mean_searches - 1.0) * config.search_cost,
        mean_searcher_price: mean(&|r| r.searcher_paid),
        mean_shopper_price: mean(&|r| r.shopper_paid),
        histogram,
    })
}

/// Expected price paid by searchers who all buy at the first store visited.
pub fn first_store_price(profile: &StrategyProfile, config: &MarketConfig) -> f64 {
    let total = f64::from(config.total_stores());
    profile
        .strategies
        .iter()
        .zip(&config.store_counts)
        .map(|(s, &n)| f64::from(n) / total * expected_price(s))
        .sum()
}

/// Expected minimum price, the price paid by shoppers.
pub fn expected_min_price(profile: &StrategyProfile) -> f64 {
    let lo = profile
        .strategies
        .iter()
        .map(|s| s.support_min())
        .fold(f64::INFINITY, f64::min);
    let hi = profile.highest_price();
    if !(hi > lo) {
        return lo;
    }
    let all_above =
        |p: f64| -> f64 { profile.strategies.iter().map(|s| s.prob_above(p)).product() };
    lo + integrate_pieces(all_above, lo, hi, &profile.kinks(), 1e-11)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub store_counts: Vec<u32>,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub point: usize,
    pub store_counts: Vec<u32>,
    pub mu: f64,
    pub kind: Option<ModelKind>,
    pub reserve_price: Option<f64>,
    pub lowest_price: Option<f64>,
    pub searcher_price: Option<f64>,
    /// `searcher_price / reserve_price`.
    pub searcher_price_ratio: Option<f64>,
    pub shopper_price: Option<f64>,
    pub simulated_searcher_price: Option<f64>,
    pub simulated_shopper_price: Option<f64>,
    pub error: Option<String>,
}

/// Constructs the default equilibrium at every point (store counts and
/// shopper fraction replaced in `template`) and records expected prices.
/// A failing point yields a row carrying the error; the sweep goes on.
pub fn sweep(
    template: &MarketConfig,
    points: &[SweepPoint],
    sim: Option<&SimulationOptions>,
) -> Vec<SweepRow> {
    points
        .iter()
        .enumerate()
        .map(|(k, pt)| {
            let mut row = SweepRow {
                point: k,
                store_counts: pt.store_counts.clone(),
                mu: pt.mu,
                kind: None,
                reserve_price: None,
                lowest_price: None,
                searcher_price: None,
                searcher_price_ratio: None,
                shopper_price: None,
                simulated_searcher_price: None,
                simulated_shopper_price: None,
                error: None,
            };
            let config = MarketConfig {
                store_counts: pt.store_counts.clone(),
                shopper_fraction: pt.mu,
                ..template.clone()
            };
            let eq = match crate::market::validate(config.clone())
                .map_err(|e| e.to_string())
                .and_then(|c| construct(&c, None).map_err(|e| e.to_string()))
            {
                Ok(eq) => eq,
                Err(e) => {
                    row.error = Some(e);
                    return row;
                }
            };
            row.kind = Some(eq.kind);
            row.reserve_price = Some(eq.reserve_price());
            row.lowest_price = Some(eq.lowest_price);
            let searcher_price = first_store_price(&eq.profile, &config);
            row.searcher_price = Some(searcher_price);
            row.searcher_price_ratio = Some(searcher_price / eq.reserve_price());
            row.shopper_price = Some(expected_min_price(&eq.profile));
            if let Some(opts) = sim {
                match simulate(&eq.profile, &config, opts) {
                    Ok(res) => {
                        row.simulated_searcher_price = Some(res.mean_searcher_price);
                        row.simulated_shopper_price = Some(res.mean_shopper_price);
                    }
                    Err(e) => row.error = Some(e.to_string()),
                }
            }
            row
        })
        .collect()
}
