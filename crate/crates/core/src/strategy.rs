//! Seller pricing strategies and strategy profiles.

use serde::{Deserialize, Serialize};

use crate::cdf::ParamCdf;
use crate::error::StrategyError;
use crate::numerics::same_price;

/// Tolerance for the mass balance `cdf(hi) + mass_at_top = 1`.
const BALANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PricingStrategy {
    /// A single price with probability one.
    PurePoint { price: f64 },
    /// Mixing over the whole cdf support, with any leftover mass sitting on
    /// an atom at the support's right end.
    MixedFull { cdf: ParamCdf, mass_at_top: f64 },
    /// Mixing up to `cutoff_price`, then an atom of mass `mass_at_top` at
    /// `top` (the reserve price in equilibrium).
    Cutoff {
        cutoff_price: f64,
        cdf: ParamCdf,
        mass_at_top: f64,
        top: f64,
    },
}

impl PricingStrategy {
    pub fn pure(price: f64) -> Self {
        PricingStrategy::PurePoint { price }
    }

    /// Full mixer whose top mass is whatever the cdf leaves over.
    pub fn mixed(cdf: ParamCdf) -> Self {
        let mass_at_top = leftover(&cdf);
        PricingStrategy::MixedFull { cdf, mass_at_top }
    }

    /// Cutoff strategy: the cdf's support ends at the cutoff and the leftover
    /// mass goes to `top`.
    pub fn cutoff(cdf: ParamCdf, top: f64) -> Self {
        PricingStrategy::Cutoff {
            cutoff_price: cdf.hi(),
            mass_at_top: leftover(&cdf),
            cdf,
            top,
        }
    }

    pub fn cdf(&self) -> Option<&ParamCdf> {
        match self {
            PricingStrategy::PurePoint { .. } => None,
            PricingStrategy::MixedFull { cdf, .. } | PricingStrategy::Cutoff { cdf, .. } => {
                Some(cdf)
            }
        }
    }

    /// `(location, mass)` of every atom.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        match *self {
            PricingStrategy::PurePoint { price } => vec![(price, 1.0)],
            PricingStrategy::MixedFull {
                ref cdf,
                mass_at_top,
            } if mass_at_top > 0.0 => vec![(cdf.hi(), mass_at_top)],
            PricingStrategy::Cutoff {
                mass_at_top, top, ..
            } if mass_at_top > 0.0 => vec![(top, mass_at_top)],
            _ => Vec::new(),
        }
    }

    /// Intervals carrying the continuous part of the distribution.
    pub fn continuous_support(&self) -> Vec<(f64, f64)> {
        self.cdf()
            .map(ParamCdf::support_intervals)
            .unwrap_or_default()
    }

    /// Continuous probability mass.
    pub fn continuous_mass(&self) -> f64 {
        self.cdf().map(ParamCdf::right_value).unwrap_or(0.0)
    }

    pub fn support_min(&self) -> f64 {
        match self {
            PricingStrategy::PurePoint { price } => *price,
            PricingStrategy::MixedFull { cdf, .. } | PricingStrategy::Cutoff { cdf, .. } => {
                cdf.lo()
            }
        }
    }

    /// Highest price the strategy can realise (atoms included).
    pub fn support_max(&self) -> f64 {
        let atom_max = self
            .atoms()
            .iter()
            .map(|a| a.0)
            .fold(f64::NEG_INFINITY, f64::max);
        let cont_max = self
            .continuous_support()
            .last()
            .map_or(f64::NEG_INFINITY, |iv| iv.1);
        atom_max.max(cont_max)
    }

    /// Probability that the realised price is strictly above `p`.
    pub fn prob_above(&self, p: f64) -> f64 {
        let atoms_above: f64 = self
            .atoms()
            .iter()
            .filter(|(loc, _)| *loc > p && !same_price(*loc, p))
            .map(|a| a.1)
            .sum();
        let continuous_above = match self.cdf() {
            Some(cdf) => cdf.right_value() - cdf.eval(p),
            None => 0.0,
        };
        (atoms_above + continuous_above).clamp(0.0, 1.0)
    }

    /// Atom mass located at `p` (up to floating-point coincidence).
    pub fn prob_at(&self, p: f64) -> f64 {
        self.atoms()
            .iter()
            .filter(|(loc, _)| same_price(*loc, p))
            .map(|a| a.1)
            .sum()
    }

    /// Atom mass inside `[p - eps, p + eps]`.
    pub fn atom_mass_near(&self, p: f64, eps: f64) -> f64 {
        self.atoms()
            .iter()
            .filter(|(loc, _)| (loc - p).abs() <= eps)
            .map(|a| a.1)
            .sum()
    }

    pub fn density(&self, p: f64) -> f64 {
        self.cdf().map_or(0.0, |c| c.density(p))
    }

    /// Inverse-cdf draw from a uniform `u` in `[0, 1)`. Atoms occupy the
    /// bottom of the unit interval, the continuous part the rest.
    pub fn sample(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for (loc, mass) in self.atoms() {
            acc += mass;
            if u < acc {
                return loc;
            }
        }
        match self.cdf() {
            Some(cdf) => cdf.quantile(u - acc),
            None => self.support_max(),
        }
    }

    /// Structural sanity: positive prices, masses in range, cdf and atoms
    /// summing to one, cutoff bookkeeping consistent.
    pub fn validate(&self) -> Result<(), StrategyError> {
        let check_price = |p: f64| {
            if p > 0.0 && p.is_finite() {
                Ok(())
            } else {
                Err(StrategyError::Price(p))
            }
        };
        let check_balance = |cdf: &ParamCdf, mass: f64| {
            if !(0.0..1.0).contains(&mass) {
                return Err(StrategyError::Mass(mass));
            }
            check_price(cdf.lo())?;
            let right = cdf.right_value();
            if (right + mass - 1.0).abs() > BALANCE_TOL {
                return Err(StrategyError::MassBalance { right, mass });
            }
            Ok(())
        };
        match self {
            PricingStrategy::PurePoint { price } => check_price(*price),
            PricingStrategy::MixedFull { cdf, mass_at_top } => check_balance(cdf, *mass_at_top),
            PricingStrategy::Cutoff {
                cutoff_price,
                cdf,
                mass_at_top,
                top,
            } => {
                check_balance(cdf, *mass_at_top)?;
                check_price(*top)?;
                if !same_price(*cutoff_price, cdf.hi()) {
                    return Err(StrategyError::CutoffSupport {
                        cutoff: *cutoff_price,
                        hi: cdf.hi(),
                    });
                }
                if *cutoff_price >= *top {
                    return Err(StrategyError::CutoffAboveTop {
                        cutoff: *cutoff_price,
                        top: *top,
                    });
                }
                if *mass_at_top <= 0.0 {
                    return Err(StrategyError::Mass(*mass_at_top));
                }
                Ok(())
            }
        }
    }
}

fn leftover(cdf: &ParamCdf) -> f64 {
    let m = 1.0 - cdf.right_value();
    if m < 1e-14 {
        0.0
    } else {
        m
    }
}

/// One strategy per seller plus the searchers' common reserve price.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub strategies: Vec<PricingStrategy>,
    pub reserve_price: f64,
}

impl StrategyProfile {
    pub fn new(strategies: Vec<PricingStrategy>, reserve_price: f64) -> Self {
        StrategyProfile {
            strategies,
            reserve_price,
        }
    }

    pub fn sellers(&self) -> usize {
        self.strategies.len()
    }

    /// Lowest price any seller can realise.
    pub fn lowest_price(&self) -> f64 {
        self.strategies
            .iter()
            .map(PricingStrategy::support_min)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn highest_price(&self) -> f64 {
        self.strategies
            .iter()
            .map(PricingStrategy::support_max)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Every price where some strategy's distribution changes shape: support
    /// ends, closed-form breakpoints and atoms.
    pub fn kinks(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for s in &self.strategies {
            for (a, b) in s.continuous_support() {
                out.push(a);
                out.push(b);
            }
            if let Some(cdf) = s.cdf() {
                out.extend(cdf.breakpoints());
            }
            out.extend(s.atoms().iter().map(|a| a.0));
        }
        out.push(self.reserve_price);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| same_price(*a, *b));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdf::SharedGroupParams;

    fn group_cdf(hi: f64, cutoffs: Vec<f64>) -> ParamCdf {
        ParamCdf::shared_group(
            SharedGroupParams {
                reserve: 1.0,
                share_ratio: 1.0,
                full_mixers: 2,
                cutoffs,
            },
            hi,
        )
        .unwrap()
    }

    #[test]
    fn pure_point_survival() {
        let s = PricingStrategy::pure(2.0);
        assert_eq!(s.prob_above(1.0), 1.0);
        assert_eq!(s.prob_above(2.0), 0.0);
        assert_eq!(s.prob_at(2.0), 1.0);
        assert_eq!(s.sample(0.3), 2.0);
    }

    #[test]
    fn mixed_survival_tracks_cdf() {
        let s = PricingStrategy::mixed(group_cdf(1.0, vec![]));
        // F(p) = 2 - 1/p
        assert!((s.prob_above(0.75) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.prob_above(0.5), 1.0);
        assert_eq!(s.prob_above(1.0), 0.0);
        assert!(s.atoms().is_empty());
        s.validate().unwrap();
    }

    #[test]
    fn cutoff_strategy_keeps_its_mass_until_the_top() {
        let cdf = group_cdf(0.8, vec![0.8]);
        let f_cut = cdf.right_value();
        let s = PricingStrategy::cutoff(cdf, 1.0);
        s.validate().unwrap();
        let a = 1.0 - f_cut;
        assert!((s.prob_above(0.9) - a).abs() < 1e-15);
        assert!((s.prob_at(1.0) - a).abs() < 1e-15);
        assert_eq!(s.support_max(), 1.0);
        assert_eq!(s.sample(a * 0.5), 1.0);
        assert!(s.sample(a + 1e-6) < 0.8);
    }

    #[test]
    fn mass_balance_is_enforced() {
        let s = PricingStrategy::MixedFull {
            cdf: group_cdf(1.0, vec![]),
            mass_at_top: 0.2,
        };
        assert!(matches!(
            s.validate(),
            Err(StrategyError::MassBalance { .. })
        ));
        assert!(PricingStrategy::pure(-1.0).validate().is_err());
    }
}
