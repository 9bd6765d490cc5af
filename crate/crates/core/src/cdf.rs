//! Parametric price distributions used by mixing sellers.
//!
//! Three closed-form families cover every equilibrium the crate constructs;
//! a piecewise-linear tabulated family covers arbitrary candidate profiles.
//!
//! # Shared-group form
//!
//! Equal-size sellers that mix share one distribution `F` on `[P_L, P_M]`.
//! At a price `p` let `k(p)` be the number of sellers still mixing there (the
//! full mixers plus cutoff sellers whose cutoff lies above `p`) and let `Π(p)`
//! be the product of the top masses `a_j` of cutoff sellers whose cutoff lies
//! below `p`. A rival that is still mixing prices above `p` with probability
//! `1 - F(p)`, a rival past its cutoff does so with probability exactly `a_j`,
//! and a pure reserve-price seller always does. Indifference of a mixer,
//!
//! ```text
//! p [ s + mu (1 - F(p))^(k(p)-1) Π(p) ] = P_M s,
//! ```
//!
//! with `s` the searcher share of one mixer, gives
//! `1 - F(p) = ( r (P_M/p - 1) / Π(p) )^(1/(k(p)-1))` where `r = s / mu`.
//! Setting `a_j = 1 - F(cp_j)` keeps `F` continuous across every cutoff.
//!
//! # Unique-smallest forms
//!
//! With one smallest seller `m` and second-smallest sellers `j`, write
//! `A(p) = (π_m/p - s_m)/mu` and `B(p) = (P_M/p - 1) s_j/mu`, where
//! `π_m = P_L (mu + s_m)` and `P_L = P_M s_j/(mu + s_j)`. Indifference of `m`
//! and of a mixing `j` gives `(1 - F_j)^k Π = A` and
//! `(1 - F_m)(1 - F_j)^(k-1) Π = B`, hence `1 - F_m = B (1 - F_j) / A`.

use serde::{Deserialize, Serialize};

use crate::error::CdfError;
use crate::numerics::{integrate_pieces, invert_monotone};

/// Default knot count when resampling a distribution onto a grid.
pub const DEFAULT_TABULATION_KNOTS: usize = 4096;

const QUAD_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharedGroupParams {
    pub reserve: f64,
    /// Searcher share of one mixer divided by the shopper fraction.
    pub share_ratio: f64,
    pub full_mixers: u32,
    /// Absolute cutoff prices of every cutoff seller in the group.
    #[serde(default)]
    pub cutoffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    pub reserve: f64,
    pub shopper_fraction: f64,
    pub smallest_share: f64,
    pub second_share: f64,
    /// Second-smallest sellers mixing over the whole interval (at least 1).
    pub second_mixers: u32,
    /// Absolute cutoff prices of second-smallest cutoff sellers.
    #[serde(default)]
    pub second_cutoffs: Vec<f64>,
}

impl PairParams {
    pub fn lowest_price(&self) -> f64 {
        self.reserve * self.second_share / (self.shopper_fraction + self.second_share)
    }

    /// Equilibrium profit of the smallest seller.
    pub fn smallest_profit(&self) -> f64 {
        self.lowest_price() * (self.shopper_fraction + self.smallest_share)
    }

    fn a(&self, p: f64) -> f64 {
        (self.smallest_profit() / p - self.smallest_share) / self.shopper_fraction
    }

    fn a_prime(&self, p: f64) -> f64 {
        -self.smallest_profit() / (self.shopper_fraction * p * p)
    }

    fn b(&self, p: f64) -> f64 {
        (self.reserve / p - 1.0) * self.second_share / self.shopper_fraction
    }

    fn b_prime(&self, p: f64) -> f64 {
        -self.reserve * self.second_share / (self.shopper_fraction * p * p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CdfFamily {
    SharedGroup(SharedGroupParams),
    /// `F_m`: the unique smallest seller.
    Smallest(PairParams),
    /// `F_j`: second-smallest sellers (continuous part; the rest sits at `P_M`).
    SecondSmallest(PairParams),
    /// Piecewise-linear through `(price, cdf)` knots.
    Tabulated {
        knots: Vec<[f64; 2]>,
    },
}

/// Piece of a closed-form cdf with a fixed exponent and cutoff-mass product.
#[derive(Debug, Clone, PartialEq)]
struct Segment {
    upper: f64,
    exponent: u32,
    product: f64,
    cdf_at_upper: f64,
}

/// A cdf on `[lo, hi]`. Below `lo` it is 0; from `hi` on it stays at its
/// right-end value, which may fall short of 1 when the owning strategy puts
/// the remaining mass on an atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CdfSpec", into = "CdfSpec")]
pub struct ParamCdf {
    family: CdfFamily,
    lo: f64,
    hi: f64,
    segments: Vec<Segment>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CdfSpec {
    lo: f64,
    hi: f64,
    family: CdfFamily,
}

impl TryFrom<CdfSpec> for ParamCdf {
    type Error = CdfError;

    fn try_from(spec: CdfSpec) -> Result<Self, CdfError> {
        let cdf = ParamCdf::new(spec.family, spec.hi)?;
        if (cdf.lo - spec.lo).abs() > 1e-9 * cdf.lo.abs().max(1.0) {
            return Err(CdfError::Parameters(format!(
                "stated lower end {} disagrees with the family's {}",
                spec.lo, cdf.lo
            )));
        }
        Ok(cdf)
    }
}

impl From<ParamCdf> for CdfSpec {
    fn from(cdf: ParamCdf) -> Self {
        CdfSpec {
            lo: cdf.lo,
            hi: cdf.hi,
            family: cdf.family,
        }
    }
}

impl ParamCdf {
    /// Builds a cdf of `family` whose support ends at `hi` (the reserve price
    /// for full mixers, the cutoff for cutoff sellers). Tabulated cdfs take
    /// their support from the knots and ignore `hi`.
    pub fn new(family: CdfFamily, hi: f64) -> Result<Self, CdfError> {
        match family {
            CdfFamily::SharedGroup(params) => Self::shared_group(params, hi),
            CdfFamily::Smallest(params) => Self::pair(params, hi, false),
            CdfFamily::SecondSmallest(params) => Self::pair(params, hi, true),
            CdfFamily::Tabulated { knots } => Self::tabulated(knots),
        }
    }

    pub fn shared_group(params: SharedGroupParams, hi: f64) -> Result<Self, CdfError> {
        let SharedGroupParams {
            reserve,
            share_ratio,
            full_mixers,
            ref cutoffs,
        } = params;
        if !(reserve > 0.0 && reserve.is_finite() && share_ratio > 0.0 && share_ratio.is_finite()) {
            return Err(CdfError::Parameters(format!(
                "reserve {reserve} and share ratio {share_ratio} must be positive"
            )));
        }
        if full_mixers < 2 {
            return Err(CdfError::Parameters(format!(
                "shared group needs at least 2 full mixers, got {full_mixers}"
            )));
        }
        let lo = reserve * share_ratio / (1.0 + share_ratio);
        let cuts = sorted_cutoffs(cutoffs, lo, reserve)?;
        check_hi(lo, hi, reserve)?;
        let active = full_mixers + cuts.len() as u32;
        let segments = build_segments(
            &cuts,
            reserve,
            |t| active - 1 - t,
            |p, seg| {
                let base = share_ratio * (reserve / p - 1.0) / seg.product;
                1.0 - root_clamped(base, seg.exponent)
            },
        );
        Ok(ParamCdf {
            family: CdfFamily::SharedGroup(params),
            lo,
            hi,
            segments,
        })
    }

    fn pair(params: PairParams, hi: f64, second: bool) -> Result<Self, CdfError> {
        let PairParams {
            reserve,
            shopper_fraction: mu,
            smallest_share,
            second_share,
            second_mixers,
            ref second_cutoffs,
        } = params;
        if !(reserve > 0.0 && reserve.is_finite() && mu > 0.0 && mu < 1.0) {
            return Err(CdfError::Parameters(format!(
                "reserve {reserve} must be positive and mu {mu} in (0,1)"
            )));
        }
        if !(smallest_share > 0.0 && second_share > smallest_share) {
            return Err(CdfError::Parameters(format!(
                "second-smallest share {second_share} must exceed smallest share {smallest_share} > 0"
            )));
        }
        if second_mixers < 1 {
            return Err(CdfError::Parameters(
                "at least one second-smallest seller must mix over the full interval".into(),
            ));
        }
        let lo = params.lowest_price();
        let cuts = sorted_cutoffs(second_cutoffs, lo, reserve)?;
        check_hi(lo, hi, reserve)?;
        let active = second_mixers + cuts.len() as u32;
        let p2 = params.clone();
        let segments = build_segments(
            &cuts,
            reserve,
            |t| active - t,
            move |p, seg| 1.0 - root_clamped(p2.a(p) / seg.product, seg.exponent),
        );
        let family = if second {
            CdfFamily::SecondSmallest(params)
        } else {
            CdfFamily::Smallest(params)
        };
        Ok(ParamCdf {
            family,
            lo,
            hi,
            segments,
        })
    }

    pub fn tabulated(knots: Vec<[f64; 2]>) -> Result<Self, CdfError> {
        if knots.len() < 2 {
            return Err(CdfError::TooFewKnots(knots.len()));
        }
        let lo = knots[0][0];
        let hi = knots[knots.len() - 1][0];
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CdfError::BadSupport { lo, hi });
        }
        if knots[0][1].abs() > 1e-12 {
            return Err(CdfError::LeftEnd(knots[0][1]));
        }
        for w in knots.windows(2) {
            if !(w[1][0] > w[0][0]) {
                return Err(CdfError::BadSupport {
                    lo: w[0][0],
                    hi: w[1][0],
                });
            }
            if w[1][1] < w[0][1] || !w[1][1].is_finite() {
                return Err(CdfError::NotMonotone { at: w[1][0] });
            }
        }
        let top = knots[knots.len() - 1][1];
        if top > 1.0 + 1e-12 {
            return Err(CdfError::AboveOne(top));
        }
        Ok(ParamCdf {
            family: CdfFamily::Tabulated { knots },
            lo,
            hi,
            segments: Vec::new(),
        })
    }

    /// Samples `f` at `knots` evenly spaced prices on `[lo, hi]` into a
    /// tabulated cdf. `f(lo)` is forced to 0 and the samples made monotone.
    pub fn tabulate_fn<F>(lo: f64, hi: f64, knots: usize, f: F) -> Result<Self, CdfError>
    where
        F: Fn(f64) -> f64,
    {
        let n = knots.max(2);
        let mut running = 0.0_f64;
        let table = (0..n)
            .map(|k| {
                let p = if k == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                };
                let v = if k == 0 { 0.0 } else { f(p).clamp(0.0, 1.0) };
                running = running.max(v);
                [p, running]
            })
            .collect();
        Self::tabulated(table)
    }

    /// Resamples this cdf onto an even grid.
    pub fn tabulate(&self, knots: usize) -> ParamCdf {
        Self::tabulate_fn(self.lo, self.hi, knots, |p| self.eval(p))
            .expect("a valid cdf tabulates to a valid cdf")
    }

    pub fn family(&self) -> &CdfFamily {
        &self.family
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Value at the right end of the support.
    pub fn right_value(&self) -> f64 {
        self.eval(self.hi)
    }

    /// Prices inside the support where the closed form switches pieces.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.family {
            CdfFamily::Tabulated { .. } => Vec::new(),
            _ => self
                .segments
                .iter()
                .map(|s| s.upper)
                .filter(|&u| u > self.lo && u < self.hi)
                .collect(),
        }
    }

    pub fn eval(&self, p: f64) -> f64 {
        if p <= self.lo {
            return 0.0;
        }
        let p = p.min(self.hi);
        match &self.family {
            CdfFamily::Tabulated { knots } => interpolate(knots, p),
            CdfFamily::SharedGroup(g) => {
                let seg = self.segment(p);
                let base = g.share_ratio * (g.reserve / p - 1.0) / seg.product;
                1.0 - root_clamped(base, seg.exponent)
            }
            CdfFamily::SecondSmallest(pp) => {
                let seg = self.segment(p);
                1.0 - root_clamped(pp.a(p) / seg.product, seg.exponent)
            }
            CdfFamily::Smallest(pp) => {
                let seg = self.segment(p);
                let sj = root_clamped(pp.a(p) / seg.product, seg.exponent);
                (1.0 - pp.b(p) * sj / pp.a(p)).clamp(0.0, 1.0)
            }
        }
    }

    /// Density of the continuous part; 0 outside `(lo, hi)`. May be infinite
    /// at the reserve price when three or more sellers are mixing there.
    pub fn density(&self, p: f64) -> f64 {
        if p < self.lo || p > self.hi {
            return 0.0;
        }
        match &self.family {
            CdfFamily::Tabulated { knots } => {
                let k = knots
                    .partition_point(|kn| kn[0] <= p)
                    .clamp(1, knots.len() - 1);
                let (a, b) = (knots[k - 1], knots[k]);
                (b[1] - a[1]) / (b[0] - a[0])
            }
            CdfFamily::SharedGroup(g) => {
                let seg = self.segment(p);
                let e = f64::from(seg.exponent);
                let base = g.share_ratio * (g.reserve / p - 1.0) / seg.product;
                if base <= 0.0 && seg.exponent > 1 {
                    return f64::INFINITY;
                }
                let dbase = -g.share_ratio * g.reserve / (p * p * seg.product);
                -(base.max(0.0).powf(1.0 / e - 1.0) * dbase / e)
            }
            CdfFamily::SecondSmallest(pp) => {
                let seg = self.segment(p);
                -second_survival_slope(pp, seg, p)
            }
            CdfFamily::Smallest(pp) => {
                let seg = self.segment(p);
                let (a, b) = (pp.a(p), pp.b(p));
                let sj = root_clamped(a / seg.product, seg.exponent);
                let dsj = second_survival_slope(pp, seg, p);
                let (da, db) = (pp.a_prime(p), pp.b_prime(p));
                let dsm = (db * sj + b * dsj) / a - b * sj * da / (a * a);
                -dsm
            }
        }
    }

    /// Smallest price whose cdf value reaches `u`, for `u` in
    /// `[0, right_value()]`. Larger `u` map to `hi`.
    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.lo;
        }
        if u >= self.right_value() {
            return self.hi;
        }
        let p = match &self.family {
            CdfFamily::Tabulated { knots } => {
                let k = knots
                    .partition_point(|kn| kn[1] < u)
                    .clamp(1, knots.len() - 1);
                let (a, b) = (knots[k - 1], knots[k]);
                if b[1] > a[1] {
                    a[0] + (u - a[1]) / (b[1] - a[1]) * (b[0] - a[0])
                } else {
                    a[0]
                }
            }
            CdfFamily::SharedGroup(g) => {
                let seg = self.segment_for_value(u);
                let x = seg.product * (1.0 - u).powi(seg.exponent as i32);
                g.share_ratio * g.reserve / (x + g.share_ratio)
            }
            CdfFamily::SecondSmallest(pp) => {
                let seg = self.segment_for_value(u);
                let a = seg.product * (1.0 - u).powi(seg.exponent as i32);
                pp.smallest_profit() / (pp.shopper_fraction * a + pp.smallest_share)
            }
            CdfFamily::Smallest(_) => {
                let tol = 1e-14 * self.hi.max(1.0);
                invert_monotone(|p| self.eval(p), u, self.lo, self.hi, tol)
            }
        };
        p.clamp(self.lo, self.hi)
    }

    /// `∫ p dF(p)` over the support (not normalised by the right-end value).
    pub fn partial_mean(&self) -> f64 {
        match &self.family {
            CdfFamily::Tabulated { knots } => knots
                .windows(2)
                .map(|w| (w[1][1] - w[0][1]) * 0.5 * (w[0][0] + w[1][0]))
                .sum(),
            _ => {
                let area = integrate_pieces(
                    |p| self.eval(p),
                    self.lo,
                    self.hi,
                    &self.breakpoints(),
                    QUAD_TOL * self.hi.max(1.0),
                );
                self.hi * self.right_value() - area
            }
        }
    }

    /// Maximal sub-intervals on which the cdf strictly increases.
    pub fn support_intervals(&self) -> Vec<(f64, f64)> {
        match &self.family {
            CdfFamily::Tabulated { knots } => {
                let mut out: Vec<(f64, f64)> = Vec::new();
                for w in knots.windows(2) {
                    if w[1][1] > w[0][1] {
                        match out.last_mut() {
                            Some(last) if last.1 == w[0][0] => last.1 = w[1][0],
                            _ => out.push((w[0][0], w[1][0])),
                        }
                    }
                }
                out
            }
            _ => vec![(self.lo, self.hi)],
        }
    }

    fn segment(&self, p: f64) -> &Segment {
        let k = self.segments.partition_point(|s| s.upper < p);
        &self.segments[k.min(self.segments.len() - 1)]
    }

    fn segment_for_value(&self, u: f64) -> &Segment {
        let k = self.segments.partition_point(|s| s.cdf_at_upper < u);
        &self.segments[k.min(self.segments.len() - 1)]
    }
}

fn second_survival_slope(pp: &PairParams, seg: &Segment, p: f64) -> f64 {
    let k = f64::from(seg.exponent);
    let base = pp.a(p) / seg.product;
    base.max(0.0).powf(1.0 / k - 1.0) * pp.a_prime(p) / (seg.product * k)
}

/// `base^(1/exponent)` clamped to `[0, 1]`.
fn root_clamped(base: f64, exponent: u32) -> f64 {
    let b = base.clamp(0.0, 1.0);
    match exponent {
        1 => b,
        2 => b.sqrt(),
        e => b.powf(1.0 / f64::from(e)),
    }
}

fn interpolate(knots: &[[f64; 2]], p: f64) -> f64 {
    let k = knots.partition_point(|kn| kn[0] <= p);
    if k == 0 {
        return 0.0;
    }
    if k >= knots.len() {
        return knots[knots.len() - 1][1];
    }
    let (a, b) = (knots[k - 1], knots[k]);
    a[1] + (b[1] - a[1]) * (p - a[0]) / (b[0] - a[0])
}

fn sorted_cutoffs(cutoffs: &[f64], lo: f64, reserve: f64) -> Result<Vec<f64>, CdfError> {
    let mut cuts = cutoffs.to_vec();
    cuts.sort_by(f64::total_cmp);
    if let Some(&bad) = cuts.iter().find(|&&c| !(c > lo && c < reserve)) {
        return Err(CdfError::Parameters(format!(
            "cutoff {bad} must lie strictly inside ({lo}, {reserve})"
        )));
    }
    Ok(cuts)
}

fn check_hi(lo: f64, hi: f64, reserve: f64) -> Result<(), CdfError> {
    if !(hi > lo && hi <= reserve * (1.0 + 1e-12)) {
        return Err(CdfError::BadSupport { lo, hi });
    }
    Ok(())
}

/// Splits `[lo, reserve]` at the cutoffs. Piece `t` (counting from the left)
/// has exponent `exponent(t)`; its product collects `1 - F(cp)` over the
/// cutoffs already passed, evaluated with the piece to their left.
fn build_segments<E, F>(cuts: &[f64], reserve: f64, exponent: E, cdf_on: F) -> Vec<Segment>
where
    E: Fn(u32) -> u32,
    F: Fn(f64, &Segment) -> f64,
{
    let mut segments = Vec::with_capacity(cuts.len() + 1);
    let mut product = 1.0;
    for t in 0..=cuts.len() {
        let upper = cuts.get(t).copied().unwrap_or(reserve);
        let mut seg = Segment {
            upper,
            exponent: exponent(t as u32),
            product,
            cdf_at_upper: 0.0,
        };
        seg.cdf_at_upper = cdf_on(upper, &seg);
        product *= 1.0 - seg.cdf_at_upper;
        segments.push(seg);
    }
    segments
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_mixers(reserve: f64) -> ParamCdf {
        ParamCdf::shared_group(
            SharedGroupParams {
                reserve,
                share_ratio: 1.0,
                full_mixers: 2,
                cutoffs: vec![],
            },
            reserve,
        )
        .unwrap()
    }

    #[test]
    fn shared_group_single_piece_is_two_minus_reserve_over_p() {
        let f = two_mixers(3.0);
        assert!((f.lo() - 1.5).abs() < 1e-15);
        for p in [1.6, 2.0, 2.5, 2.99] {
            assert!((f.eval(p) - (2.0 - 3.0 / p)).abs() < 1e-14);
            assert!((f.density(p) - 3.0 / (p * p)).abs() < 1e-12);
        }
        assert_eq!(f.eval(1.0), 0.0);
        assert!((f.right_value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quantile_inverts() {
        let f = two_mixers(3.0);
        for u in [0.0, 0.1, 0.5, 0.9, 0.999] {
            assert!((f.eval(f.quantile(u)) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_mean_matches_log_formula() {
        let f = two_mixers(3.0);
        assert!((f.partial_mean() - 3.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn cutoffs_keep_the_cdf_continuous() {
        let f = ParamCdf::shared_group(
            SharedGroupParams {
                reserve: 1.0,
                share_ratio: 1.0 / 3.0,
                full_mixers: 2,
                cutoffs: vec![0.8, 0.5],
            },
            1.0,
        )
        .unwrap();
        for cp in [0.5, 0.8] {
            let left = f.eval(cp - 1e-10);
            let right = f.eval(cp + 1e-10);
            assert!(
                (left - right).abs() < 1e-8,
                "jump at {cp}: {left} vs {right}"
            );
        }
        assert!((f.right_value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cutoff_outside_support_is_rejected() {
        let err = ParamCdf::shared_group(
            SharedGroupParams {
                reserve: 1.0,
                share_ratio: 1.0,
                full_mixers: 2,
                cutoffs: vec![0.2],
            },
            1.0,
        );
        assert!(matches!(err, Err(CdfError::Parameters(_))));
    }

    #[test]
    fn single_full_mixer_is_rejected() {
        let err = ParamCdf::shared_group(
            SharedGroupParams {
                reserve: 1.0,
                share_ratio: 1.0,
                full_mixers: 1,
                cutoffs: vec![],
            },
            1.0,
        );
        assert!(err.is_err());
    }

    #[test]
    fn tabulated_uniform() {
        let f = ParamCdf::tabulated(vec![[1.0, 0.0], [9.0, 1.0]]).unwrap();
        assert_eq!(f.eval(5.0), 0.5);
        assert_eq!(f.density(3.0), 0.125);
        assert_eq!(f.quantile(0.25), 3.0);
        assert_eq!(f.partial_mean(), 5.0);
    }

    #[test]
    fn tabulated_rejects_bad_knots() {
        assert!(matches!(
            ParamCdf::tabulated(vec![[1.0, 0.0]]),
            Err(CdfError::TooFewKnots(1))
        ));
        assert!(matches!(
            ParamCdf::tabulated(vec![[1.0, 0.1], [2.0, 1.0]]),
            Err(CdfError::LeftEnd(_))
        ));
        assert!(matches!(
            ParamCdf::tabulated(vec![[1.0, 0.0], [2.0, 0.6], [3.0, 0.5]]),
            Err(CdfError::NotMonotone { .. })
        ));
    }

    #[test]
    fn tabulated_support_skips_flat_pieces() {
        let f = ParamCdf::tabulated(vec![[1.0, 0.0], [2.0, 0.5], [3.0, 0.5], [4.0, 1.0]]).unwrap();
        assert_eq!(f.support_intervals(), vec![(1.0, 2.0), (3.0, 4.0)]);
    }

    #[test]
    fn pair_forms_match_their_closed_expressions() {
        let pp = PairParams {
            reserve: 2.0,
            shopper_fraction: 0.2,
            smallest_share: 0.16,
            second_share: 0.32,
            second_mixers: 1,
            second_cutoffs: vec![],
        };
        let low = pp.lowest_price();
        let fm = ParamCdf::new(CdfFamily::Smallest(pp.clone()), 2.0).unwrap();
        let fj = ParamCdf::new(CdfFamily::SecondSmallest(pp.clone()), 2.0).unwrap();
        for p in [low * 1.01, 1.5, 1.9] {
            let closed_m = 1.0 - 0.32 / 0.2 * (2.0 / p - 1.0);
            let closed_j = (1.0 - low / p) * (1.0 + 0.16 / 0.2);
            assert!((fm.eval(p) - closed_m).abs() < 1e-13);
            assert!((fj.eval(p) - closed_j).abs() < 1e-13);
        }
        let mass = 1.0 - fj.right_value();
        assert!((mass - (0.32 - 0.16) / (0.2 + 0.32)).abs() < 1e-13);
    }

    #[test]
    fn serde_roundtrip_keeps_segments() {
        let f = ParamCdf::shared_group(
            SharedGroupParams {
                reserve: 1.0,
                share_ratio: 0.5,
                full_mixers: 2,
                cutoffs: vec![0.7],
            },
            1.0,
        )
        .unwrap();
        let text = toml::to_string(&f).unwrap();
        let back: ParamCdf = toml::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
