//! The s-score mean-reversion expert family.
//!
//! Each expert is parameterized by a pair of thresholds `0 < gamma1 < gamma2`
//! and a rolling window for the mean/std estimates. The standardized
//! deviation `s = (price - mean) / std` drives a three-state position
//! machine: a flat expert opens long when `s < -gamma2` and short when
//! `s > gamma2`; a long closes when `s > -gamma1`, a short when `s < gamma1`.
//! Close is evaluated before open, so a position never flips long/short in a
//! single step. The classic thresholds are `(0.5, 1.25)`.

use serde::{Deserialize, Serialize};

use crate::ensemble::LossMode;
use crate::error::{Error, Result};

/// Thresholds and estimation window of one expert.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpertSpec {
    gamma1: f64,
    gamma2: f64,
    stats_window: usize,
}

impl ExpertSpec {
    pub fn new(gamma1: f64, gamma2: f64, stats_window: usize) -> Result<Self> {
        if !gamma1.is_finite() || !gamma2.is_finite() || gamma1 <= 0.0 || gamma2 <= 0.0 {
            return Err(Error::invalid(format!(
                "thresholds ({gamma1}, {gamma2}) must be positive"
            )));
        }
        if gamma1 >= gamma2 {
            return Err(Error::invalid(format!(
                "close threshold {gamma1} must be below open threshold {gamma2}"
            )));
        }
        if stats_window < 2 {
            return Err(Error::invalid("stats window must be at least 2"));
        }
        Ok(Self {
            gamma1,
            gamma2,
            stats_window,
        })
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn stats_window(&self) -> usize {
        self.stats_window
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Position {
    Flat,
    Long,
    Short,
}

/// Position lifecycle of one expert. The entry price is present exactly when
/// a position is open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpertState {
    position: Position,
    entry_price: Option<f64>,
}

impl ExpertState {
    pub fn flat() -> Self {
        Self {
            position: Position::Flat,
            entry_price: None,
        }
    }

    pub fn position(&self) -> Position {
        self.position
    }

    pub fn entry_price(&self) -> Option<f64> {
        self.entry_price
    }
}

impl Default for ExpertState {
    fn default() -> Self {
        Self::flat()
    }
}

/// A trade emitted by a position transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TradeAction {
    OpenLong,
    OpenShort,
    CloseLong,
    CloseShort,
}

/// The trade implied by a position transition, if any.
pub fn transition(before: Position, after: Position) -> Option<TradeAction> {
    match (before, after) {
        (Position::Flat, Position::Long) => Some(TradeAction::OpenLong),
        (Position::Flat, Position::Short) => Some(TradeAction::OpenShort),
        (Position::Long, Position::Flat) => Some(TradeAction::CloseLong),
        (Position::Short, Position::Flat) => Some(TradeAction::CloseShort),
        _ => None,
    }
}

/// Advances the position machine by one observation.
///
/// Close rules take precedence over open rules, and a freshly closed
/// position cannot reopen within the same step.
pub fn step_position(state: &ExpertState, s: f64, spec: &ExpertSpec, price: f64) -> ExpertState {
    match state.position {
        Position::Long if s > -spec.gamma1 => ExpertState::flat(),
        Position::Short if s < spec.gamma1 => ExpertState::flat(),
        Position::Flat if s < -spec.gamma2 => ExpertState {
            position: Position::Long,
            entry_price: Some(price),
        },
        Position::Flat if s > spec.gamma2 => ExpertState {
            position: Position::Short,
            entry_price: Some(price),
        },
        _ => *state,
    }
}

/// Mean and sample standard deviation (divisor `window - 1`) of the `window`
/// prices ending at `end_index` inclusive.
pub fn rolling_stats(prices: &[f64], end_index: usize, window: usize) -> Result<(f64, f64)> {
    if window < 2 {
        return Err(Error::invalid("stats window must be at least 2"));
    }
    if end_index >= prices.len() {
        return Err(Error::invalid(format!(
            "end index {end_index} out of range for series of length {}",
            prices.len()
        )));
    }
    if end_index + 1 < window {
        return Err(Error::NotEnoughData {
            needed: window,
            available: end_index + 1,
        });
    }
    let slice = &prices[end_index + 1 - window..=end_index];
    let mean = slice.iter().sum::<f64>() / window as f64;
    let ss: f64 = slice.iter().map(|&x| (x - mean) * (x - mean)).sum();
    let std = (ss / (window - 1) as f64).sqrt();
    Ok((mean, std))
}

/// Standardized deviation `(price - mean) / std`.
pub fn s_score(price: f64, mean: f64, std: f64) -> Result<f64> {
    if !(std > 0.0) || !std.is_finite() {
        return Err(Error::DegenerateVolatility);
    }
    Ok((price - mean) / std)
}

/// An s-score observation together with the statistics that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SScore {
    pub value: f64,
    pub mean: f64,
    pub std: f64,
    pub price: f64,
}

impl SScore {
    pub fn compute(price: f64, mean: f64, std: f64) -> Result<Self> {
        Ok(Self {
            value: s_score(price, mean, std)?,
            mean,
            std,
            price,
        })
    }
}

/// Cartesian product of the threshold lists, filtered to `gamma1 < gamma2`
/// and sorted lexicographically by `(gamma1, gamma2)`.
pub fn expert_grid(
    gamma1_values: &[f64],
    gamma2_values: &[f64],
    window: usize,
) -> Result<Vec<ExpertSpec>> {
    for &g in gamma1_values.iter().chain(gamma2_values) {
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::invalid(format!("threshold {g} must be positive")));
        }
    }
    let mut specs = Vec::new();
    for &g1 in gamma1_values {
        for &g2 in gamma2_values {
            if g1 < g2 {
                specs.push(ExpertSpec::new(g1, g2, window)?);
            }
        }
    }
    if specs.is_empty() {
        return Err(Error::invalid(
            "threshold grid is empty after the gamma1 < gamma2 filter",
        ));
    }
    specs.sort_by(|a, b| {
        (a.gamma1, a.gamma2)
            .partial_cmp(&(b.gamma1, b.gamma2))
            .expect("thresholds are finite")
    });
    Ok(specs)
}

/// Simple return of the held position over one step.
pub fn round_return(state_before: &ExpertState, price_prev: f64, price_now: f64) -> Result<f64> {
    if !(price_prev > 0.0) || !(price_now > 0.0) || !price_prev.is_finite() || !price_now.is_finite()
    {
        return Err(Error::invalid(format!(
            "prices ({price_prev}, {price_now}) must be positive"
        )));
    }
    Ok(match state_before.position {
        Position::Flat => 0.0,
        Position::Long => (price_now - price_prev) / price_prev,
        Position::Short => -(price_now - price_prev) / price_prev,
    })
}

/// Maps a round return to a loss in [0, 1].
///
/// Zero-one mode counts any negative return as a mistake. Continuous mode is
/// the affine map `0.5 - r / (2 cap)` clamped to [0, 1], so a flat round
/// costs 0.5 and returns at `+cap`/`-cap` map to 0 and 1.
pub fn return_to_loss(r: f64, mode: LossMode, cap: f64) -> f64 {
    debug_assert!(cap > 0.0, "return cap must be positive");
    match mode {
        LossMode::ZeroOne => {
            if r < 0.0 {
                1.0
            } else {
                0.0
            }
        }
        LossMode::Continuous => (0.5 - r / (2.0 * cap)).clamp(0.0, 1.0),
    }
}
