//! Equilibrium verification and the best-response oracle.
//!
//! `verify` runs a fixed battery of checks on a candidate profile. Structural
//! problems (wrong seller count, malformed strategies) come back as
//! [`VerifyError`]; equilibrium failures are recorded in the report.
//!
//! Deviations are searched over pure prices only: the profit of any mixed
//! deviation is an average of pure-price profits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::belief::{posterior, reserve_price_rational_with, BeliefState};
use crate::cdf::ParamCdf;
use crate::error::{CdfError, VerifyError};
use crate::market::{MarketConfig, ModelKind};
use crate::numerics::{golden_section_max, linspace, logspace, same_price};
use crate::payoff::{expected_profit, strategy_profit, support_profit_spread, support_sample};
use crate::strategy::{PricingStrategy, StrategyProfile};

/// Relative tolerance for the location checks on supports and atoms.
const LOCATION_TOL: f64 = 1e-9;
const SPREAD_SAMPLES: usize = 250;
const LINEAR_CANDIDATES: usize = 1000;
const REFINE_CELLS: usize = 3;
const GOLDEN_ITERATIONS: usize = 80;
const PERTURB_KNOTS: usize = crate::cdf::DEFAULT_TABULATION_KNOTS;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Largest admissible deviation gain, as a fraction of `P_M`.
    pub deviation: f64,
    /// Relative tolerance for profit comparisons.
    pub profit: f64,
    /// Size of the log-spaced deviation grid.
    pub grid: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            deviation: 1e-6,
            profit: 1e-6,
            grid: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst-case number behind the verdict.
    pub evidence: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BestResponse {
    pub price: f64,
    pub profit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviation {
    pub seller: usize,
    pub price: f64,
    pub profit: f64,
    pub equilibrium_profit: f64,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub best_deviations: Vec<Deviation>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn max_gain(&self) -> f64 {
        self.best_deviations
            .iter()
            .map(|d| d.gain)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn check(name: &str, passed: bool, evidence: f64, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        evidence,
        detail,
    }
}

fn candidate_prices(
    i: usize,
    profile: &StrategyProfile,
    config: &MarketConfig,
    grid: usize,
) -> Vec<f64> {
    let reserve = profile.reserve_price;
    let bound = config.valuation_bound.max(reserve);
    let mut pts = logspace(config.search_cost / 100.0, bound, grid.max(2));
    let low = profile.lowest_price().min(reserve);
    pts.extend(linspace(low, reserve, LINEAR_CANDIDATES));
    for p in profile.kinks() {
        pts.push(p);
        pts.push(p * (1.0 - 1e-9));
    }
    for (j, s) in profile.strategies.iter().enumerate() {
        if j == i {
            continue;
        }
        for (loc, _) in s.atoms() {
            pts.push(loc * (1.0 - 1e-12));
        }
    }
    pts.retain(|&p| p > 0.0 && p <= bound);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Maximises seller `i`'s expected profit over prices in `(0, M]`: a
/// log-spaced grid, a linear grid over the support union, kinks and points
/// just below rival atoms, then golden-section refinement around the best
/// grid cells.
pub fn brute_force_best_response(
    i: usize,
    profile: &StrategyProfile,
    config: &MarketConfig,
    grid: usize,
) -> BestResponse {
    let profit = |p: f64| expected_profit(i, p, profile, config).total;
    let pts = candidate_prices(i, profile, config, grid);
    let vals: Vec<f64> = pts.iter().map(|&p| profit(p)).collect();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    let mut best = BestResponse {
        price: pts[order[0]],
        profit: vals[order[0]],
    };
    for &k in order.iter().take(REFINE_CELLS) {
        let a = pts[k.saturating_sub(1)];
        let b = pts[(k + 1).min(pts.len() - 1)];
        if b > a {
            let (x, fx) = golden_section_max(profit, a, b, GOLDEN_ITERATIONS);
            if fx > best.profit {
                best = BestResponse {
                    price: x,
                    profit: fx,
                };
            }
        }
    }
    best
}

fn structural(profile: &StrategyProfile, config: &MarketConfig) -> Result<(), VerifyError> {
    crate::market::validate(config.clone())?;
    if profile.sellers() != config.sellers() {
        return Err(VerifyError::SellerCount {
            strategies: profile.sellers(),
            sellers: config.sellers(),
        });
    }
    let r = profile.reserve_price;
    if !(r > 0.0 && r.is_finite()) {
        return Err(VerifyError::ReservePrice(r));
    }
    for (seller, s) in profile.strategies.iter().enumerate() {
        s.validate()
            .map_err(|source| VerifyError::Malformed { seller, source })?;
    }
    Ok(())
}

/// Runs every check under truthful beliefs.
pub fn verify(
    profile: &StrategyProfile,
    config: &MarketConfig,
    tolerances: &Tolerances,
) -> Result<VerificationReport, VerifyError> {
    structural(profile, config)?;
    verify_with_beliefs(
        profile,
        config,
        tolerances,
        &BeliefState::truthful(profile, config),
    )
}

/// Runs every check with the searchers holding `beliefs`.
pub fn verify_with_beliefs(
    profile: &StrategyProfile,
    config: &MarketConfig,
    tolerances: &Tolerances,
    beliefs: &BeliefState,
) -> Result<VerificationReport, VerifyError> {
    structural(profile, config)?;
    let reserve = profile.reserve_price;
    let near_reserve = |p: f64| (p - reserve).abs() <= LOCATION_TOL * reserve;
    let mut checks = Vec::new();

    // support bound
    let excess = profile
        .strategies
        .iter()
        .map(|s| s.support_max() - reserve)
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(check(
        "support_bound",
        excess <= LOCATION_TOL * reserve,
        excess.max(0.0),
        format!(
            "largest price above the reserve price: {:e}",
            excess.max(0.0)
        ),
    ));

    // atoms only at the reserve price
    let stray: Vec<(usize, f64)> = profile
        .strategies
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.atoms().into_iter().map(move |(loc, _)| (i, loc)))
        .filter(|&(_, loc)| !near_reserve(loc))
        .collect();
    let stray_dist = stray
        .iter()
        .map(|&(_, loc)| (loc - reserve).abs())
        .fold(0.0, f64::max);
    checks.push(check(
        "atoms_at_reserve",
        stray.is_empty(),
        stray_dist,
        if stray.is_empty() {
            "every atom sits at the reserve price".into()
        } else {
            format!("atoms away from the reserve price (seller, price): {stray:?}")
        },
    ));

    // common supremum
    let sup_gap = profile
        .strategies
        .iter()
        .map(|s| (s.support_max() - reserve).abs())
        .fold(0.0, f64::max);
    checks.push(check(
        "common_supremum",
        sup_gap <= LOCATION_TOL * reserve,
        sup_gap,
        format!("largest |sup support - P_M|: {sup_gap:e}"),
    ));

    checks.push(interval_coverage(profile));

    // profit constancy on own support
    let spreads: Vec<f64> = (0..config.sellers())
        .into_par_iter()
        .map(|i| support_profit_spread(i, profile, config, SPREAD_SAMPLES))
        .collect();
    let (worst_seller, worst_spread) =
        spreads
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, 0.0_f64),
                |acc, (i, s)| if s > acc.1 { (i, s) } else { acc },
            );
    checks.push(check(
        "profit_constancy",
        worst_spread <= tolerances.profit,
        worst_spread,
        format!(
            "largest relative profit spread on support: {worst_spread:e} (seller {worst_seller})"
        ),
    ));

    // no profitable deviation
    let profits: Vec<f64> = (0..config.sellers())
        .into_par_iter()
        .map(|i| strategy_profit(i, profile, config))
        .collect();
    let best_deviations: Vec<Deviation> = (0..config.sellers())
        .into_par_iter()
        .map(|i| {
            let br = brute_force_best_response(i, profile, config, tolerances.grid);
            Deviation {
                seller: i,
                price: br.price,
                profit: br.profit,
                equilibrium_profit: profits[i],
                gain: br.profit - profits[i],
            }
        })
        .collect();
    let worst = best_deviations
        .iter()
        .copied()
        .max_by(|a, b| a.gain.total_cmp(&b.gain))
        .expect("at least two sellers");
    checks.push(check(
        "no_profitable_deviation",
        worst.gain <= tolerances.deviation * reserve,
        worst.gain / reserve,
        format!(
            "best gain {:e} P_M: seller {} at price {}",
            worst.gain / reserve,
            worst.seller,
            worst.price
        ),
    ));

    // reserve-price rationality
    let rr = reserve_price_rational_with(profile, config, beliefs);
    let min_margin = rr.margins.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(check(
        "reserve_rationality",
        rr.exact,
        rr.worst_gain,
        format!(
            "sufficient expected-price bound {} (smallest margin {min_margin:e}); \
             sequential check over {} prices {}, worst search gain {:e} at {}",
            if rr.sufficient { "holds" } else { "fails" },
            rr.prices_checked,
            if rr.exact { "passes" } else { "fails" },
            rr.worst_gain,
            rr.worst_price
        ),
    ));

    checks.push(belief_consistency(profile, config, beliefs));
    checks.push(profit_law(profile, config, &profits, tolerances.profit));

    Ok(VerificationReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
        best_deviations,
    })
}

fn interval_coverage(profile: &StrategyProfile) -> CheckResult {
    let intervals: Vec<Vec<(f64, f64)>> = profile
        .strategies
        .iter()
        .map(PricingStrategy::continuous_support)
        .collect();
    let mut cuts: Vec<f64> = intervals
        .iter()
        .flatten()
        .flat_map(|&(a, b)| [a, b])
        .collect();
    cuts.push(profile.reserve_price);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| same_price(*a, *b));
    if intervals.iter().all(Vec::is_empty) || cuts.len() < 2 {
        return check(
            "interval_coverage",
            false,
            0.0,
            "no seller mixes over an interval".into(),
        );
    }
    let mut min_cover = usize::MAX;
    let mut at = cuts[0];
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let cover = intervals
            .iter()
            .filter(|iv| iv.iter().any(|&(a, b)| a <= mid && mid <= b))
            .count();
        if cover < min_cover {
            min_cover = cover;
            at = mid;
        }
    }
    check(
        "interval_coverage",
        min_cover >= 2,
        min_cover as f64,
        format!(
            "support union [{}, {}]; fewest sellers on a piece: {min_cover} (near {at})",
            cuts[0],
            cuts[cuts.len() - 1]
        ),
    )
}

fn belief_consistency(
    profile: &StrategyProfile,
    config: &MarketConfig,
    beliefs: &BeliefState,
) -> CheckResult {
    let truthful = BeliefState::truthful(profile, config);
    let same_entries = truthful.entries().len() == beliefs.entries().len()
        && truthful.entries().iter().all(|t| {
            beliefs
                .entries()
                .iter()
                .any(|b| b.strategy == t.strategy && b.count == t.count)
        });
    let mut misses = 0usize;
    for s in &profile.strategies {
        let idx = beliefs.entries().iter().position(|e| e.strategy == *s);
        for p in support_sample(s, 50) {
            let ok = match (idx, posterior(p, beliefs)) {
                (Some(k), Ok(post)) => post[k] > 0.0,
                _ => false,
            };
            if !ok {
                misses += 1;
            }
        }
    }
    check(
        "belief_consistency",
        same_entries && misses == 0,
        misses as f64,
        format!(
            "beliefs {} the profile; {misses} support prices unexplained",
            if same_entries { "match" } else { "differ from" }
        ),
    )
}

fn profit_law(
    profile: &StrategyProfile,
    config: &MarketConfig,
    profits: &[f64],
    tol: f64,
) -> CheckResult {
    let reserve = profile.reserve_price;
    let mu = config.shopper_fraction;
    let per_store = reserve * (1.0 - mu) / f64::from(config.total_stores());
    let ppb: Vec<f64> = profits
        .iter()
        .zip(&config.store_counts)
        .map(|(p, &n)| p / f64::from(n))
        .collect();
    let rel = |x: f64| (x - per_store).abs() / per_store;
    match config.model_kind() {
        ModelKind::Original | ModelKind::Extended => {
            let worst = ppb.iter().copied().map(rel).fold(0.0, f64::max);
            let law = if config.model_kind() == ModelKind::Original {
                "profit P_M(1-mu)/n for every seller"
            } else {
                "profit per store P_M(1-mu)/N for every seller"
            };
            check(
                "profit_law",
                worst <= tol,
                worst,
                format!("{law}; largest relative gap {worst:e}"),
            )
        }
        ModelKind::UniqueSmallest => {
            let m = config.derived().smallest[0];
            let worst = ppb
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != m)
                .map(|(_, &x)| rel(x))
                .fold(0.0, f64::max);
            let lead = ppb[m] / per_store - 1.0;
            check(
                "profit_law",
                worst <= tol && lead > tol,
                worst,
                format!(
                    "profit per store P_M(1-mu)/N for all but the smallest seller \
                     (largest gap {worst:e}); smallest seller ahead by {lead:e}"
                ),
            )
        }
    }
}

/// Index of the first seller mixing over an interval without a cutoff.
pub fn first_full_mixer(profile: &StrategyProfile) -> Option<usize> {
    profile.strategies.iter().position(
        |s| matches!(s, PricingStrategy::MixedFull { cdf, .. } if cdf.right_value() > 0.0),
    )
}

fn full_mixer(profile: &StrategyProfile, seller: usize) -> Result<(&ParamCdf, f64), CdfError> {
    match profile.strategies.get(seller) {
        Some(PricingStrategy::MixedFull { cdf, mass_at_top }) => Ok((cdf, *mass_at_top)),
        _ => Err(CdfError::Parameters(format!(
            "seller {seller} is not a full mixer"
        ))),
    }
}

/// Moves a full mixer's lowest price up by `fraction`, stretching the rest
/// of her distribution linearly onto the shorter interval.
pub fn shift_lower_support(
    profile: &StrategyProfile,
    seller: usize,
    fraction: f64,
) -> Result<StrategyProfile, CdfError> {
    let (cdf, mass) = full_mixer(profile, seller)?;
    let (lo, hi) = (cdf.lo(), cdf.hi());
    let new_lo = lo * (1.0 + fraction);
    if !(new_lo < hi) {
        return Err(CdfError::BadSupport { lo: new_lo, hi });
    }
    let squeeze = (hi - lo) / (hi - new_lo);
    let moved = ParamCdf::tabulate_fn(new_lo, hi, PERTURB_KNOTS, |p| {
        cdf.eval(lo + (p - new_lo) * squeeze)
    })?;
    let mut out = profile.clone();
    out.strategies[seller] = PricingStrategy::MixedFull {
        cdf: moved,
        mass_at_top: mass,
    };
    Ok(out)
}

/// Takes probability `fraction` from a full mixer's continuous part, pro
/// rata, and adds it to her atom at the top of her support.
pub fn move_mass_to_top(
    profile: &StrategyProfile,
    seller: usize,
    fraction: f64,
) -> Result<StrategyProfile, CdfError> {
    let (cdf, _) = full_mixer(profile, seller)?;
    let cont = cdf.right_value();
    if !(fraction > 0.0 && fraction < cont) {
        return Err(CdfError::Parameters(format!(
            "cannot move {fraction} out of continuous mass {cont}"
        )));
    }
    let scale = (cont - fraction) / cont;
    let scaled = ParamCdf::tabulate_fn(cdf.lo(), cdf.hi(), PERTURB_KNOTS, |p| scale * cdf.eval(p))?;
    let mut out = profile.clone();
    out.strategies[seller] = PricingStrategy::MixedFull {
        mass_at_top: 1.0 - scaled.right_value(),
        cdf: scaled,
    };
    Ok(out)
}

/// Two support prices of a symmetric profile at which the profit-equality
/// conditions of two different-size sellers contradict each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryWitness {
    pub larger: usize,
    pub smaller: usize,
    pub p: f64,
    pub q: f64,
    /// `profit_larger(p) - profit_larger(q)`.
    pub larger_residual: f64,
    /// `profit_smaller(p) - profit_smaller(q)`.
    pub smaller_residual: f64,
    /// Difference of the two residuals, `(p - q)(Src_larger - Src_smaller)`.
    pub combined_residual: f64,
}

/// For a profile in which every seller plays the same mixed strategy and
/// sizes differ, returns prices `p != q` on the common support at which a
/// largest and a smallest seller cannot both be indifferent.
pub fn no_symmetric_ne_witness(
    config: &MarketConfig,
    profile: &StrategyProfile,
) -> Option<SymmetryWitness> {
    let first = profile.strategies.first()?;
    if profile.strategies.iter().any(|s| s != first) {
        return None;
    }
    let cdf = first.cdf()?;
    let mass = cdf.right_value();
    if mass <= 0.0 {
        return None;
    }
    let counts = &config.store_counts;
    let larger = (0..counts.len()).max_by_key(|&i| (counts[i], std::cmp::Reverse(i)))?;
    let smaller = (0..counts.len()).min_by_key(|&i| (counts[i], i))?;
    if counts[larger] == counts[smaller] {
        return None;
    }
    let p = cdf.quantile(0.25 * mass);
    let q = cdf.quantile(0.75 * mass);
    if same_price(p, q) {
        return None;
    }
    let gap = |i: usize| {
        expected_profit(i, p, profile, config).total - expected_profit(i, q, profile, config).total
    };
    let (rl, rs) = (gap(larger), gap(smaller));
    Some(SymmetryWitness {
        larger,
        smaller,
        p,
        q,
        larger_residual: rl,
        smaller_residual: rs,
        combined_residual: rl - rs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{construct, construct_extended_ne, CutoffSeller, GroupSpec};

    fn cfg(counts: &[u32], mu: f64) -> MarketConfig {
        MarketConfig::new(counts.to_vec(), mu, 1.0, 100.0).unwrap()
    }

    fn assert_passes(config: &MarketConfig, profile: &StrategyProfile) {
        let r = verify(profile, config, &Tolerances::default()).unwrap();
        assert!(r.passed, "{:#?}", r.checks);
        assert!(r.max_gain() < 1e-6 * profile.reserve_price);
    }

    #[test]
    fn three_seller_example_passes() {
        let config = cfg(&[1, 1, 1], 0.25);
        let eq = construct(
            &config,
            Some(&GroupSpec {
                full_mixers: vec![1, 2],
                pure_reserve: vec![0],
                cutoff_sellers: vec![],
            }),
        )
        .unwrap();
        assert_passes(&config, &eq.profile);
        let br = brute_force_best_response(0, &eq.profile, &config, 10_000);
        assert!(br.profit - eq.analytic_profit[0] < 1e-7 * eq.reserve_price());
    }

    #[test]
    fn chain_example_passes() {
        let config = cfg(&[3, 1, 1], 1.0 / 6.0);
        let eq = construct(&config, None).unwrap();
        assert_passes(&config, &eq.profile);
    }

    #[test]
    fn cutoff_seller_passes() {
        let config = cfg(&[1, 1, 1, 1], 0.25);
        let g = GroupSpec {
            full_mixers: vec![0, 1],
            pure_reserve: vec![3],
            cutoff_sellers: vec![CutoffSeller { seller: 2, at: 0.8 }],
        };
        let eq = construct(&config, Some(&g)).unwrap();
        assert_passes(&config, &eq.profile);
    }

    #[test]
    fn extended_with_pure_smallest_passes() {
        let config = cfg(&[5, 2, 2, 2], 1.0 / 3.0);
        let g = GroupSpec {
            full_mixers: vec![1, 2],
            pure_reserve: vec![3],
            cutoff_sellers: vec![],
        };
        let eq = construct_extended_ne(&config, &g).unwrap();
        assert_passes(&config, &eq.profile);
    }

    #[test]
    fn unique_smallest_passes() {
        let config = cfg(&[1, 2, 2], 0.2);
        let eq = construct(&config, None).unwrap();
        assert_passes(&config, &eq.profile);
    }

    #[test]
    fn all_pure_reserve_fails_on_undercutting() {
        let config = cfg(&[3, 1, 1], 1.0 / 6.0);
        let profile = StrategyProfile::new(vec![PricingStrategy::pure(3.0); 3], 3.0);
        let r = verify(&profile, &config, &Tolerances::default()).unwrap();
        assert!(!r.passed);
        assert!(!r.check("no_profitable_deviation").unwrap().passed);
    }

    #[test]
    fn price_above_reserve_fails_support_bound() {
        let config = cfg(&[1, 1, 1], 0.25);
        let mut eq = construct(&config, None).unwrap();
        eq.profile.strategies[0] = PricingStrategy::pure(eq.reserve_price() * 1.1);
        let r = verify(&eq.profile, &config, &Tolerances::default()).unwrap();
        assert_eq!(r.failed_checks()[0], "support_bound");
    }

    #[test]
    fn structural_errors() {
        let config = cfg(&[1, 1, 1], 0.25);
        let profile = StrategyProfile::new(vec![PricingStrategy::pure(3.0); 2], 3.0);
        assert!(matches!(
            verify(&profile, &config, &Tolerances::default()),
            Err(VerifyError::SellerCount { .. })
        ));
        let profile = StrategyProfile::new(vec![PricingStrategy::pure(-1.0); 3], 3.0);
        assert!(matches!(
            verify(&profile, &config, &Tolerances::default()),
            Err(VerifyError::Malformed { seller: 0, .. })
        ));
    }

    #[test]
    fn perturbations_are_detected() {
        let config = cfg(&[1, 1, 1], 0.25);
        let eq = construct(&config, None).unwrap();
        let i = first_full_mixer(&eq.profile).unwrap();
        for perturbed in [
            shift_lower_support(&eq.profile, i, 0.02).unwrap(),
            move_mass_to_top(&eq.profile, i, 0.05).unwrap(),
        ] {
            let r = verify(&perturbed, &config, &Tolerances::default()).unwrap();
            assert!(r.max_gain() > 1e-4 * eq.reserve_price());
            assert!(!r.passed);
        }
    }

    #[test]
    fn symmetry_witness_residual() {
        let config = cfg(&[2, 1], 0.4);
        let u = PricingStrategy::mixed(ParamCdf::tabulated(vec![[1.0, 0.0], [2.0, 1.0]]).unwrap());
        let profile = StrategyProfile::new(vec![u.clone(), u], 2.0);
        let w = no_symmetric_ne_witness(&config, &profile).unwrap();
        let expect = (w.p - w.q) * (2.0 - 1.0) * 0.6 / 3.0;
        assert!((w.combined_residual - expect).abs() < 1e-12);
        assert!((w.p - 1.25).abs() < 1e-12 && (w.q - 1.75).abs() < 1e-12);

        let equal = cfg(&[2, 2], 0.4);
        assert!(no_symmetric_ne_witness(&equal, &profile).is_none());
    }
}
