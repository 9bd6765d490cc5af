use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chainsearch::belief::{continuation_price, posterior, should_continue, BeliefState};
use chainsearch::equilibrium::{
    construct, group_cdf, ConstructedEquilibrium, CutoffSeller, GroupSpec,
};
use chainsearch::market::MarketConfig;
use chainsearch::numerics::{linspace, pairwise_sum};
use chainsearch::payoff::{expected_price, expected_profit, win_probability};
use chainsearch::simulate::{simulate, SimulationOptions};

fn market() -> impl Strategy<Value = MarketConfig> {
    (prop::collection::vec(1u32..=10, 2..=6), 0.05f64..0.9)
        .prop_map(|(counts, mu)| MarketConfig::new(counts, mu, 1.0, 1e4).unwrap())
}

/// Equal-size markets with optional cutoff sellers among the later sellers.
fn single_store_with_groups() -> impl Strategy<Value = (MarketConfig, GroupSpec)> {
    (
        3usize..=6,
        0.05f64..0.9,
        prop::collection::vec(0.0f64..1.0, 4),
    )
        .prop_map(|(n, mu, draws)| {
            let config = MarketConfig::new(vec![1; n], mu, 1.0, 1e4).unwrap();
            let share = (1.0 - mu) / n as f64;
            let low = share / (mu + share);
            let mut groups = GroupSpec::all_mixing(&[0, 1]);
            for (k, seller) in (2..n).enumerate() {
                let d = draws[k % draws.len()];
                if d < 0.4 {
                    groups.full_mixers.push(seller);
                } else if d < 0.7 {
                    groups.pure_reserve.push(seller);
                } else {
                    let at = low + (1.0 - low) * (0.05 + 0.9 * (d - 0.7) / 0.3);
                    groups.cutoff_sellers.push(CutoffSeller { seller, at });
                }
            }
            (config, groups)
        })
}

fn equilibrium() -> impl Strategy<Value = (MarketConfig, ConstructedEquilibrium)> {
    prop_oneof![
        market().prop_map(|c| {
            let eq = construct(&c, None).unwrap();
            (c, eq)
        }),
        single_store_with_groups().prop_map(|(c, g)| {
            let eq = construct(&c, Some(&g)).unwrap();
            (c, eq)
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn searcher_shares_and_shoppers_add_to_one(config in market()) {
        let d = config.derived();
        let total: f64 = d.searcher_shares.iter().sum();
        prop_assert!((total + config.shopper_fraction - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cdfs_invert_and_are_monotone((_c, eq) in equilibrium()) {
        for s in &eq.profile.strategies {
            let Some(cdf) = s.cdf() else { continue };
            let top = cdf.right_value();
            for u in linspace(0.0, top, 50) {
                let back = cdf.eval(cdf.quantile(u));
                prop_assert!((back - u).abs() < 1e-8, "u {} -> {}", u, back);
            }
            let mut last = 0.0;
            for p in linspace(cdf.lo(), cdf.hi(), 1000) {
                let v = cdf.eval(p);
                prop_assert!(v >= last - 1e-15);
                last = v;
            }
        }
    }

    #[test]
    fn win_probability_is_nonincreasing((config, eq) in equilibrium()) {
        let r = eq.reserve_price();
        for i in 0..config.sellers() {
            let mut last = f64::INFINITY;
            for p in linspace(0.01 * r, r * (1.0 - 1e-9), 300) {
                let a = win_probability(i, p, &eq.profile, &config);
                prop_assert!(a <= last + 1e-12);
                last = a;
            }
        }
    }

    #[test]
    fn posterior_and_continuation_are_convex((config, eq) in equilibrium(), t in 0.0f64..1.0) {
        let beliefs = BeliefState::truthful(&eq.profile, &config);
        let e: Vec<f64> = beliefs.entries().iter().map(|b| b.expected_price()).collect();
        let (lo, hi) = e.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, &x| (a.0.min(x), a.1.max(x)));
        let p = eq.lowest_price + t * (eq.reserve_price() - eq.lowest_price);
        for price in [p, eq.reserve_price()] {
            let post = posterior(price, &beliefs).unwrap();
            prop_assert!((post.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let next = continuation_price(price, &beliefs).unwrap();
            prop_assert!(next >= lo - 1e-9 * hi && next <= hi + 1e-9 * hi);
        }
    }

    #[test]
    fn searchers_never_search_on_by_equilibrium((config, eq) in equilibrium()) {
        let beliefs = BeliefState::truthful(&eq.profile, &config);
        let left = config.sellers() as u32 - 1;
        for p in linspace(eq.lowest_price, eq.reserve_price(), 1000) {
            if let Ok(go) = should_continue(p, &beliefs, config.search_cost, left) {
                prop_assert!(!go, "continues at {}", p);
            }
        }
    }

    #[test]
    fn profit_is_constant_on_support((config, groups) in single_store_with_groups()) {
        let eq = construct(&config, Some(&groups)).unwrap();
        for (i, s) in eq.profile.strategies.iter().enumerate() {
            for (a, b) in s.continuous_support() {
                let base = eq.analytic_profit[i];
                for p in linspace(a, b, 1000) {
                    let v = expected_profit(i, p, &eq.profile, &config).total;
                    prop_assert!((v - base).abs() <= 1e-7 * base, "seller {} at {}: {} vs {}", i, p, v, base);
                }
            }
        }
    }

    #[test]
    fn simulated_markets_clear((config, eq) in equilibrium(), seed in any::<u64>()) {
        let res = simulate(&eq.profile, &config, &SimulationOptions { replications: 200, seed, ..Default::default() }).unwrap();
        let q: f64 = res.sellers.iter().map(|s| s.mean_quantity).sum();
        prop_assert!((q - 1.0).abs() < 1e-12);
        prop_assert_eq!(res.mean_searches, 1.0);
        prop_assert_eq!(res.first_store_fraction, 1.0);
    }
}

#[test]
fn group_cdf_matches_bisection_on_profit_equality() {
    let (mu, reserve) = (0.25, 1.0);
    let share = (1.0 - mu) / 3.0;
    let cutoff = 0.8;
    let groups = GroupSpec {
        full_mixers: vec![0, 1],
        pure_reserve: vec![],
        cutoff_sellers: vec![CutoffSeller {
            seller: 2,
            at: cutoff,
        }],
    };
    // a full mixer's profit with the shared cdf value `f` at price p
    let profit = |p: f64, f: f64, above_cut: Option<f64>| {
        let rivals = match above_cut {
            None => (1.0 - f).powi(2),
            Some(mass) => (1.0 - f) * mass,
        };
        p * (share + mu * rivals)
    };
    let solve = |p: f64, above_cut: Option<f64>| {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if profit(p, mid, above_cut) > reserve * share {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mass = 1.0 - solve(cutoff, None);
    let low = reserve * share / (mu + share);
    for p in linspace(low, reserve, 100) {
        let oracle = solve(p, (p > cutoff).then_some(mass));
        let got = group_cdf(p, &groups, reserve, mu, share).unwrap();
        assert!((got - oracle).abs() < 1e-12, "{p}: {got} vs {oracle}");
    }
}

#[test]
fn expected_price_matches_sampling() {
    let configs = [
        (vec![1, 1, 1, 1], 0.3),
        (vec![1, 2, 2], 0.2),
        (vec![3, 1, 1], 1.0 / 6.0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (counts, mu) in configs {
        let config = MarketConfig::new(counts, mu, 1.0, 100.0).unwrap();
        let eq = construct(&config, None).unwrap();
        for s in &eq.profile.strategies {
            let n = 1_000_000;
            let draws: Vec<f64> = (0..n).map(|_| s.sample(rng.random::<f64>())).collect();
            let mean = pairwise_sum(&draws) / n as f64;
            let sq: Vec<f64> = draws.iter().map(|x| (x - mean) * (x - mean)).collect();
            let var = pairwise_sum(&sq) / (n - 1) as f64;
            let se = (var / n as f64).sqrt();
            let e = expected_price(s);
            assert!(
                (mean - e).abs() <= 3.0 * se + 1e-12 * e,
                "{mean} vs {e} (se {se})"
            );
        }
    }
}
