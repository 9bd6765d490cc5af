//! Construction of the equilibrium families.
//!
//! * Equal-size sellers: at least two full mixers share one distribution on
//!   `[P_L, P_M]`, optional cutoff sellers follow it up to a private cutoff
//!   and then jump to `P_M`, and the rest charge `P_M`.
//! * Unequal sizes, smallest count shared by two or more sellers: every
//!   larger seller charges `P_M` and the smallest sellers play the
//!   equal-size game, each keeping her own searchers `(1 - mu) n_m / N`.
//! * A unique smallest seller `m`: `m` and at least one second-smallest
//!   seller mix, the latter with an atom at `P_M`; larger sellers charge `P_M`.
//!
//! Every distribution is homogeneous of degree one in prices, so each family
//! has a structure constant `kappa` with `min_i E[price_i] = kappa P_M`. The
//! searchers' reserve price solves `min_i E[price_i] = P_M - c`.

use serde::{Deserialize, Serialize};

use crate::cdf::{CdfFamily, PairParams, ParamCdf, SharedGroupParams};
use crate::error::ConstructError;
use crate::market::{MarketConfig, ModelKind};
use crate::numerics::find_root;
use crate::payoff::expected_price;
use crate::strategy::{PricingStrategy, StrategyProfile};

/// A cutoff seller; the cutoff price is `at * P_M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffSeller {
    pub seller: usize,
    pub at: f64,
}

/// Partition of the mixing sellers into full mixers, pure reserve-price
/// sellers and cutoff sellers.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub full_mixers: Vec<usize>,
    #[serde(default)]
    pub pure_reserve: Vec<usize>,
    #[serde(default, rename = "cutoffs")]
    pub cutoff_sellers: Vec<CutoffSeller>,
}

impl GroupSpec {
    pub fn all_mixing(sellers: &[usize]) -> Self {
        GroupSpec {
            full_mixers: sellers.to_vec(),
            ..Default::default()
        }
    }

    fn cutoff_of(&self, seller: usize) -> Option<f64> {
        self.cutoff_sellers
            .iter()
            .find(|c| c.seller == seller)
            .map(|c| c.at)
    }

    /// Checks that the groups partition `expected` exactly and that every
    /// relative cutoff lies in `(low_ratio, 1)`.
    fn check(&self, expected: &[usize], low_ratio: f64) -> Result<(), ConstructError> {
        let mut seen: Vec<usize> = self
            .full_mixers
            .iter()
            .chain(&self.pure_reserve)
            .copied()
            .chain(self.cutoff_sellers.iter().map(|c| c.seller))
            .collect();
        seen.sort_unstable();
        let mut want = expected.to_vec();
        want.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(ConstructError::Groups(
                "a seller appears in two groups".into(),
            ));
        }
        if seen != want {
            return Err(ConstructError::Groups(format!(
                "groups cover sellers {seen:?} but must partition {want:?}"
            )));
        }
        for c in &self.cutoff_sellers {
            if !(c.at > low_ratio && c.at < 1.0) {
                return Err(ConstructError::Groups(format!(
                    "seller {} cutoff {} P_M must lie in ({low_ratio}, 1) P_M",
                    c.seller, c.at
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub reserve_price: f64,
    /// `min_i E[price_i] / P_M`.
    pub kappa: f64,
    /// `|min_i E[price_i] - (P_M - c)|`.
    pub expected_price_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructedEquilibrium {
    pub kind: ModelKind,
    pub profile: StrategyProfile,
    pub analytic_profit: Vec<f64>,
    pub lowest_price: f64,
    pub diagnostics: Diagnostics,
}

impl ConstructedEquilibrium {
    pub fn reserve_price(&self) -> f64 {
        self.profile.reserve_price
    }
}

/// `P_L` for `n` equal single-store sellers: `P_M (1-mu) / ((n-1) mu + 1)`.
pub fn lowest_price_symmetric(reserve: f64, n: usize, mu: f64) -> f64 {
    reserve * (1.0 - mu) / ((n as f64 - 1.0) * mu + 1.0)
}

/// Price at which a mixer keeping searcher mass `share` and winning all
/// shoppers earns `reserve * share`.
pub fn lowest_price(reserve: f64, mu: f64, share: f64) -> f64 {
    reserve * share / (mu + share)
}

fn shared_params(groups: &GroupSpec, reserve: f64, mu: f64, share: f64) -> SharedGroupParams {
    SharedGroupParams {
        reserve,
        share_ratio: share / mu,
        full_mixers: groups.full_mixers.len() as u32,
        cutoffs: groups
            .cutoff_sellers
            .iter()
            .map(|c| c.at * reserve)
            .collect(),
    }
}

/// Shared group distribution `F(p)` for the given groups, where `share` is
/// the searcher mass kept by each mixing seller.
pub fn group_cdf(
    p: f64,
    groups: &GroupSpec,
    reserve: f64,
    mu: f64,
    share: f64,
) -> Result<f64, ConstructError> {
    if groups.full_mixers.len() < 2 {
        return Err(ConstructError::TooFewMixers(groups.full_mixers.len()));
    }
    let cdf = ParamCdf::shared_group(shared_params(groups, reserve, mu, share), reserve)?;
    Ok(cdf.eval(p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReserveSolution {
    pub reserve: f64,
    pub kappa: f64,
    pub residual: f64,
}

fn min_expected_price(profile: &StrategyProfile) -> f64 {
    profile
        .strategies
        .iter()
        .map(expected_price)
        .fold(f64::INFINITY, f64::min)
}

/// Solves `min_i E[price_i](P_M) = P_M - c` for the reserve price of the
/// family produced by `build`, bracketing on `[c, bound]`.
pub fn solve_reserve_price<B>(
    build: B,
    search_cost: f64,
    bound: f64,
    structure: &str,
) -> Result<ReserveSolution, ConstructError>
where
    B: Fn(f64) -> Result<StrategyProfile, ConstructError>,
{
    let kappa = min_expected_price(&build(1.0)?);
    if !(kappa < 1.0) {
        return Err(ConstructError::NoReservePrice {
            kappa,
            structure: structure.to_string(),
        });
    }
    let closed_form = search_cost / (1.0 - kappa);
    if closed_form > bound {
        return Err(ConstructError::ReserveAboveBound {
            reserve: closed_form,
            bound,
        });
    }
    let residual = |reserve: f64| match build(reserve) {
        Ok(profile) => min_expected_price(&profile) - (reserve - search_cost),
        Err(_) => f64::NAN,
    };
    let reserve = find_root(residual, search_cost, bound, 1e-13 * search_cost)
        .map_err(ConstructError::RootFinding)?;
    let profile = build(reserve)?;
    Ok(ReserveSolution {
        reserve,
        kappa,
        residual: (min_expected_price(&profile) - (reserve - search_cost)).abs(),
    })
}

/// Equal store counts; `groups` must partition every seller.
pub fn construct_original_ne(
    config: &MarketConfig,
    groups: &GroupSpec,
) -> Result<ConstructedEquilibrium, ConstructError> {
    let first = config.store_counts[0];
    if config.store_counts.iter().any(|&n| n != first) {
        return Err(ConstructError::UnequalStores);
    }
    construct_extended_ne(config, groups)
}

/// Smallest store count attained by at least two sellers; `groups`
/// partitions those smallest sellers, all others charge the reserve price.
pub fn construct_extended_ne(
    config: &MarketConfig,
    groups: &GroupSpec,
) -> Result<ConstructedEquilibrium, ConstructError> {
    let config = crate::market::validate(config.clone())?;
    let derived = config.derived();
    if derived.smallest.len() < 2 {
        return Err(ConstructError::UniqueSmallest);
    }
    if groups.full_mixers.len() < 2 {
        return Err(ConstructError::TooFewMixers(groups.full_mixers.len()));
    }
    let mu = config.shopper_fraction;
    let share = derived.searcher_shares[derived.smallest[0]];
    groups.check(&derived.smallest, share / (mu + share))?;

    let build = |reserve: f64| -> Result<StrategyProfile, ConstructError> {
        let params = shared_params(groups, reserve, mu, share);
        let full = PricingStrategy::mixed(ParamCdf::shared_group(params.clone(), reserve)?);
        let strategies = (0..config.sellers())
            .map(|i| {
                if groups.full_mixers.contains(&i) {
                    Ok(full.clone())
                } else if let Some(at) = groups.cutoff_of(i) {
                    let cdf = ParamCdf::shared_group(params.clone(), at * reserve)?;
                    Ok(PricingStrategy::cutoff(cdf, reserve))
                } else {
                    Ok(PricingStrategy::pure(reserve))
                }
            })
            .collect::<Result<Vec<_>, ConstructError>>()?;
        Ok(StrategyProfile::new(strategies, reserve))
    };
    let structure = format!(
        "{} full mixers, {} cutoff sellers, searcher share {share}",
        groups.full_mixers.len(),
        groups.cutoff_sellers.len()
    );
    let sol = solve_reserve_price(
        build,
        config.search_cost,
        config.valuation_bound,
        &structure,
    )?;
    let profile = build(sol.reserve)?;
    let per_store = sol.reserve * (1.0 - mu) / f64::from(derived.total_stores);
    let kind = config.model_kind();
    Ok(ConstructedEquilibrium {
        kind,
        analytic_profit: config
            .store_counts
            .iter()
            .map(|&n| f64::from(n) * per_store)
            .collect(),
        lowest_price: lowest_price(sol.reserve, mu, share),
        diagnostics: Diagnostics {
            reserve_price: sol.reserve,
            kappa: sol.kappa,
            expected_price_residual: sol.residual,
        },
        profile,
    })
}

/// Unique smallest seller. `second_groups` partitions the second-smallest
/// sellers and needs at least one full mixer; larger sellers charge `P_M`.
pub fn construct_unique_smallest_ne(
    config: &MarketConfig,
    second_groups: &GroupSpec,
) -> Result<ConstructedEquilibrium, ConstructError> {
    let config = crate::market::validate(config.clone())?;
    let derived = config.derived();
    if derived.smallest.len() != 1 || derived.second_smallest.is_empty() {
        return Err(ConstructError::SmallestNotUnique);
    }
    if second_groups.full_mixers.is_empty() {
        return Err(ConstructError::TooFewMixers(0));
    }
    let mu = config.shopper_fraction;
    let m = derived.smallest[0];
    let src_m = derived.searcher_shares[m];
    let src_j = derived.searcher_shares[derived.second_smallest[0]];
    second_groups.check(&derived.second_smallest, src_j / (mu + src_j))?;

    let params_at = |reserve: f64| PairParams {
        reserve,
        shopper_fraction: mu,
        smallest_share: src_m,
        second_share: src_j,
        second_mixers: second_groups.full_mixers.len() as u32,
        second_cutoffs: second_groups
            .cutoff_sellers
            .iter()
            .map(|c| c.at * reserve)
            .collect(),
    };
    let build = |reserve: f64| -> Result<StrategyProfile, ConstructError> {
        let params = params_at(reserve);
        let smallest =
            PricingStrategy::mixed(ParamCdf::new(CdfFamily::Smallest(params.clone()), reserve)?);
        let second = PricingStrategy::mixed(ParamCdf::new(
            CdfFamily::SecondSmallest(params.clone()),
            reserve,
        )?);
        let strategies = (0..config.sellers())
            .map(|i| {
                if i == m {
                    Ok(smallest.clone())
                } else if second_groups.full_mixers.contains(&i) {
                    Ok(second.clone())
                } else if let Some(at) = second_groups.cutoff_of(i) {
                    let cdf =
                        ParamCdf::new(CdfFamily::SecondSmallest(params.clone()), at * reserve)?;
                    Ok(PricingStrategy::cutoff(cdf, reserve))
                } else {
                    Ok(PricingStrategy::pure(reserve))
                }
            })
            .collect::<Result<Vec<_>, ConstructError>>()?;
        Ok(StrategyProfile::new(strategies, reserve))
    };
    let structure = format!(
        "unique smallest seller {m}, {} second-smallest full mixers, {} cutoff sellers",
        second_groups.full_mixers.len(),
        second_groups.cutoff_sellers.len()
    );
    let sol = solve_reserve_price(
        build,
        config.search_cost,
        config.valuation_bound,
        &structure,
    )?;
    let profile = build(sol.reserve)?;
    let params = params_at(sol.reserve);
    let analytic_profit = (0..config.sellers())
        .map(|i| {
            if i == m {
                params.smallest_profit()
            } else {
                derived.searcher_shares[i] * sol.reserve
            }
        })
        .collect();
    Ok(ConstructedEquilibrium {
        kind: ModelKind::UniqueSmallest,
        analytic_profit,
        lowest_price: params.lowest_price(),
        diagnostics: Diagnostics {
            reserve_price: sol.reserve,
            kappa: sol.kappa,
            expected_price_residual: sol.residual,
        },
        profile,
    })
}

/// Groups used when the caller gives none: every smallest seller mixes over
/// the full interval; with a unique smallest seller only the first
/// second-smallest seller mixes and the others charge `P_M`.
pub fn default_groups(config: &MarketConfig) -> GroupSpec {
    let d = config.derived();
    match config.model_kind() {
        ModelKind::Original | ModelKind::Extended => GroupSpec::all_mixing(&d.smallest),
        ModelKind::UniqueSmallest => GroupSpec {
            full_mixers: vec![d.second_smallest[0]],
            pure_reserve: d.second_smallest[1..].to_vec(),
            cutoff_sellers: Vec::new(),
        },
    }
}

/// Builds the equilibrium family matching the configuration's model kind.
pub fn construct(
    config: &MarketConfig,
    groups: Option<&GroupSpec>,
) -> Result<ConstructedEquilibrium, ConstructError> {
    let default;
    let groups = match groups {
        Some(g) => g,
        None => {
            default = default_groups(config);
            &default
        }
    };
    match config.model_kind() {
        ModelKind::Original => construct_original_ne(config, groups),
        ModelKind::Extended => construct_extended_ne(config, groups),
        ModelKind::UniqueSmallest => construct_unique_smallest_ne(config, groups),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(counts: &[u32], mu: f64) -> MarketConfig {
        MarketConfig::new(counts.to_vec(), mu, 1.0, 100.0).unwrap()
    }

    #[test]
    fn lowest_price_examples() {
        assert!((lowest_price_symmetric(1.0, 3, 0.25) - 0.5).abs() < 1e-15);
        assert!((lowest_price_symmetric(1.0, 2, 0.5) - 1.0 / 3.0).abs() < 1e-15);
        assert!((lowest_price_symmetric(1.0, 5, 1e-9) - 1.0).abs() < 1e-8);
        // same price through the searcher-share form
        let share = 0.75 / 3.0;
        assert!((lowest_price(1.0, 0.25, share) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn group_cdf_endpoints() {
        let g = GroupSpec {
            full_mixers: vec![1, 2],
            pure_reserve: vec![0],
            cutoff_sellers: vec![],
        };
        let share = 0.25;
        assert_eq!(group_cdf(0.5, &g, 1.0, 0.25, share).unwrap(), 0.0);
        assert!((group_cdf(1.0 - 1e-12, &g, 1.0, 0.25, share).unwrap() - 1.0).abs() < 1e-9);
        assert!((group_cdf(0.8, &g, 1.0, 0.25, share).unwrap() - (2.0 - 1.0 / 0.8)).abs() < 1e-15);
    }

    #[test]
    fn group_cdf_needs_two_full_mixers() {
        let g = GroupSpec::all_mixing(&[0]);
        assert!(matches!(
            group_cdf(0.8, &g, 1.0, 0.25, 0.25),
            Err(ConstructError::TooFewMixers(1))
        ));
    }

    #[test]
    fn three_seller_example_reserve() {
        let g = GroupSpec {
            full_mixers: vec![1, 2],
            pure_reserve: vec![0],
            cutoff_sellers: vec![],
        };
        let eq = construct_original_ne(&cfg(&[1, 1, 1], 0.25), &g).unwrap();
        let expect = 1.0 / (1.0 - 2f64.ln());
        assert!((eq.reserve_price() - expect).abs() < 1e-11);
        assert!((eq.lowest_price - expect / 2.0).abs() < 1e-11);
        assert!(eq.diagnostics.expected_price_residual < 1e-10);
    }

    #[test]
    fn chain_example_profits() {
        let eq = construct(&cfg(&[3, 1, 1], 1.0 / 6.0), None).unwrap();
        let r = eq.reserve_price();
        assert!((r - 1.0 / (1.0 - 2f64.ln())).abs() < 1e-11);
        for (got, want) in eq.analytic_profit.iter().zip([r / 2.0, r / 6.0, r / 6.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn unique_smallest_reserve_closed_form() {
        let eq = construct(&cfg(&[1, 2, 2], 0.2), None).unwrap();
        let expect = 1.0 / (1.0 - 1.6 * 1.625f64.ln());
        assert!((eq.reserve_price() - expect).abs() < 1e-10 * expect);
        assert_eq!(eq.kind, ModelKind::UniqueSmallest);
    }

    #[test]
    fn routing_errors() {
        let g = GroupSpec::all_mixing(&[0, 1]);
        assert_eq!(
            construct_original_ne(&cfg(&[2, 1], 0.3), &g),
            Err(ConstructError::UnequalStores)
        );
        assert_eq!(
            construct_extended_ne(&cfg(&[1, 2, 2], 0.3), &g),
            Err(ConstructError::UniqueSmallest)
        );
        assert_eq!(
            construct_unique_smallest_ne(&cfg(&[1, 1, 2], 0.3), &g),
            Err(ConstructError::SmallestNotUnique)
        );
        assert!(matches!(
            construct_original_ne(&cfg(&[1, 1, 1], 0.3), &GroupSpec::all_mixing(&[0])),
            Err(ConstructError::TooFewMixers(1))
        ));
    }

    #[test]
    fn groups_must_partition() {
        let g = GroupSpec {
            full_mixers: vec![0, 1],
            pure_reserve: vec![1],
            cutoff_sellers: vec![],
        };
        assert!(matches!(
            construct_original_ne(&cfg(&[1, 1], 0.3), &g),
            Err(ConstructError::Groups(_))
        ));
        let g = GroupSpec {
            full_mixers: vec![0, 1],
            pure_reserve: vec![],
            cutoff_sellers: vec![CutoffSeller { seller: 2, at: 0.1 }],
        };
        assert!(matches!(
            construct_original_ne(&cfg(&[1, 1, 1], 0.3), &g),
            Err(ConstructError::Groups(_))
        ));
    }

    #[test]
    fn reserve_above_bound_is_reported() {
        let config = MarketConfig::new(vec![1, 1, 1], 0.25, 1.0, 2.0).unwrap();
        assert!(matches!(
            construct(&config, None),
            Err(ConstructError::ReserveAboveBound { .. })
        ));
    }
}
