//! Randomized weighted majority (RWM) over a fixed set of experts.
//!
//! The learner keeps one weight per expert and plays the normalized weight
//! distribution each round. After the round's loss vector arrives, the weight
//! of expert `i` is scaled by `beta^l_i`; with zero-one losses this halves
//! (for `beta = 1/2`) the weight of every expert that made a mistake and
//! leaves the others untouched. Weights are stored in log space so that long
//! horizons cannot underflow the working state; the exponentiated weights are
//! still exposed for inspection and trace export.
//!
//! `optimal_beta` implements the horizon-tuned damping factor
//! `max(1/2, 1 - sqrt(ln N / T))`, and `run_doubling` wraps the learner in a
//! doubling schedule for streams of unknown length. All logarithms are
//! natural.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `optimal_beta` never returns 1.0; degenerate cases clamp to `1 - BETA_CLAMP`.
const BETA_CLAMP: f64 = 1e-9;

/// How per-round losses are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossMode {
    /// Every loss entry must be exactly 0 or 1 (mistake counting). The
    /// theorem-style bound assertions apply in this mode.
    ZeroOne,
    /// Loss entries may take any value in [0, 1].
    Continuous,
}

/// A validated per-round loss vector, one entry per expert.
#[derive(Debug, Clone, PartialEq)]
pub struct LossVector {
    losses: Vec<f64>,
    mode: LossMode,
}

impl LossVector {
    pub fn new(losses: Vec<f64>, mode: LossMode) -> Result<Self> {
        for (i, &l) in losses.iter().enumerate() {
            if !l.is_finite() || !(0.0..=1.0).contains(&l) {
                return Err(Error::invalid(format!(
                    "loss entry {i} is {l}, must lie in [0, 1]"
                )));
            }
            if mode == LossMode::ZeroOne && l != 0.0 && l != 1.0 {
                return Err(Error::invalid(format!(
                    "loss entry {i} is {l}, must be 0 or 1 in zero-one mode"
                )));
            }
        }
        Ok(Self { losses, mode })
    }

    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }

    pub fn mode(&self) -> LossMode {
        self.mode
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.losses
    }
}

/// Regret accounting at a fixed horizon, together with the two loss bounds
/// the analysis provides: `ln N / (1 - beta) + (2 - beta) * L_min` for any
/// beta, and `L_min + 2 sqrt(T ln N)` for the horizon-tuned beta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    /// Number of completed rounds (T).
    pub horizon: u64,
    /// Cumulative expected loss of the learner.
    pub cum_algo_loss: f64,
    /// Cumulative loss of the best single expert in hindsight.
    pub min_expert_loss: f64,
    /// Index of that expert (lowest index on ties).
    pub best_expert_index: usize,
    /// `cum_algo_loss - min_expert_loss`.
    pub regret: f64,
    pub bound_general: f64,
    pub bound_sqrt: f64,
}

impl RegretReport {
    /// Assembles a report from raw accounting. `beta` only enters the
    /// `bound_general` reference value.
    pub fn from_parts(
        horizon: u64,
        beta: f64,
        cum_algo_loss: f64,
        cum_expert_losses: &[f64],
    ) -> Result<Self> {
        let n = cum_expert_losses.len();
        if n == 0 {
            return Err(Error::invalid("need at least one expert"));
        }
        let (best_expert_index, min_expert_loss) = argmin(cum_expert_losses);
        Ok(RegretReport {
            horizon,
            cum_algo_loss,
            min_expert_loss,
            best_expert_index,
            regret: cum_algo_loss - min_expert_loss,
            bound_general: theoretical_bound_general(n, beta, min_expert_loss)?,
            bound_sqrt: theoretical_bound_sqrt(n, horizon, min_expert_loss),
        })
    }
}

/// First index of the minimum value (ties broken by lowest index).
fn argmin(values: &[f64]) -> (usize, f64) {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    (best, values[best])
}

/// The RWM learner state.
///
/// `round` starts at 1 and increments once per `update`; the elapsed horizon
/// is `round - 1`.
#[derive(Debug, Clone)]
pub struct EnsembleState {
    beta: f64,
    ln_beta: f64,
    loss_mode: LossMode,
    round: u64,
    log_weights: Vec<f64>,
    distribution: Vec<f64>,
    cum_expert_losses: Vec<f64>,
    cum_algo_loss: f64,
}

impl EnsembleState {
    /// Uniform initial distribution over `n` experts, all weights 1.
    pub fn new(n: usize, beta: f64, loss_mode: LossMode) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("number of experts must be at least 1"));
        }
        if !beta.is_finite() || beta <= 0.0 || beta >= 1.0 {
            return Err(Error::invalid(format!(
                "beta is {beta}, must lie in the open interval (0, 1)"
            )));
        }
        Ok(Self {
            beta,
            ln_beta: beta.ln(),
            loss_mode,
            round: 1,
            log_weights: vec![0.0; n],
            distribution: vec![1.0 / n as f64; n],
            cum_expert_losses: vec![0.0; n],
            cum_algo_loss: 0.0,
        })
    }

    pub fn n_experts(&self) -> usize {
        self.log_weights.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn loss_mode(&self) -> LossMode {
        self.loss_mode
    }

    /// Current round index `t` (1 before any update).
    pub fn round(&self) -> u64 {
        self.round
    }

    /// Number of completed rounds `T`.
    pub fn horizon(&self) -> u64 {
        self.round - 1
    }

    /// Exponentiated weights `beta^(cumulative loss of i)`. These underflow
    /// to zero for extreme horizons; prefer `log_weights` there.
    pub fn weights(&self) -> Vec<f64> {
        self.log_weights.iter().map(|&lw| lw.exp()).collect()
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn distribution(&self) -> &[f64] {
        &self.distribution
    }

    pub fn cum_expert_losses(&self) -> &[f64] {
        &self.cum_expert_losses
    }

    pub fn cum_algo_loss(&self) -> f64 {
        self.cum_algo_loss
    }

    /// Potential `W_t`, the sum of the weights.
    pub fn potential(&self) -> f64 {
        self.log_potential().exp()
    }

    /// `ln W_t`, computed without leaving log space.
    pub fn log_potential(&self) -> f64 {
        log_sum_exp(&self.log_weights)
    }

    /// Plays the current distribution against `losses` and returns the
    /// round's expected loss `L_t = sum_i p_i l_i`.
    pub fn update(&mut self, losses: &LossVector) -> Result<f64> {
        if losses.mode() != self.loss_mode {
            return Err(Error::invalid(format!(
                "loss vector mode {:?} does not match ensemble mode {:?}",
                losses.mode(),
                self.loss_mode
            )));
        }
        if losses.len() != self.n_experts() {
            return Err(Error::invalid(format!(
                "loss vector has {} entries, expected {}",
                losses.len(),
                self.n_experts()
            )));
        }
        let l = losses.as_slice();
        let expected_loss: f64 = self
            .distribution
            .iter()
            .zip(l)
            .map(|(&p, &li)| p * li)
            .sum();
        for (i, &li) in l.iter().enumerate() {
            if li > 0.0 {
                self.log_weights[i] += li * self.ln_beta;
            }
            self.cum_expert_losses[i] += li;
        }
        self.cum_algo_loss += expected_loss;
        self.round += 1;
        self.renormalize();
        Ok(expected_loss)
    }

    fn renormalize(&mut self) {
        let max = self
            .log_weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for (p, &lw) in self.distribution.iter_mut().zip(&self.log_weights) {
            *p = (lw - max).exp();
            total += *p;
        }
        for p in &mut self.distribution {
            *p /= total;
        }
    }

    /// Regret and bound accounting at the current horizon.
    pub fn regret_report(&self) -> RegretReport {
        RegretReport::from_parts(
            self.horizon(),
            self.beta,
            self.cum_algo_loss,
            &self.cum_expert_losses,
        )
        .expect("state invariants guarantee valid report inputs")
    }

    /// Draws an expert index distributed according to `p_t`.
    pub fn sample_expert<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        sample_index(&self.distribution, rng)
    }
}

/// Inverse-CDF sampling from a normalized distribution.
pub fn sample_index<R: Rng + ?Sized>(distribution: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in distribution.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    distribution.len() - 1
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Horizon-tuned damping factor `max(1/2, 1 - sqrt(ln n / horizon))`.
///
/// The degenerate single-expert case would give exactly 1, which is outside
/// the admissible open interval; it is clamped to `1 - 1e-9`.
pub fn optimal_beta(n: usize, horizon: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("number of experts must be at least 1"));
    }
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let beta = 0.5_f64.max(1.0 - ((n as f64).ln() / horizon as f64).sqrt());
    Ok(beta.min(1.0 - BETA_CLAMP))
}

/// Loss bound `ln n / (1 - beta) + (2 - beta) * min_loss`, valid for any
/// zero-one sequence.
pub fn theoretical_bound_general(n: usize, beta: f64, min_loss: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("number of experts must be at least 1"));
    }
    if !beta.is_finite() || beta <= 0.0 || beta >= 1.0 {
        return Err(Error::invalid(format!(
            "beta is {beta}, must lie in the open interval (0, 1)"
        )));
    }
    Ok((n as f64).ln() / (1.0 - beta) + (2.0 - beta) * min_loss)
}

/// Loss bound `min_loss + 2 sqrt(horizon * ln n)`, valid under the
/// horizon-tuned beta.
pub fn theoretical_bound_sqrt(n: usize, horizon: u64, min_loss: f64) -> f64 {
    debug_assert!(n >= 1);
    min_loss + 2.0 * (horizon as f64 * (n as f64).ln()).sqrt()
}

/// One epoch of a doubling-trick run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: u32,
    /// Scheduled epoch length `2^epoch`.
    pub planned_rounds: u64,
    /// Rounds actually consumed (the stream may end mid-epoch).
    pub rounds: u64,
    pub beta: f64,
    pub algo_loss: f64,
}

/// Result of a doubling-trick run over a finite stream.
#[derive(Debug, Clone)]
pub struct DoublingOutcome {
    /// Regret against the best single expert over the whole stream. Bound
    /// fields use the horizon-tuned beta for the realized total horizon.
    pub report: RegretReport,
    pub epochs: Vec<EpochRecord>,
    /// The learner's expected loss at every round, across epochs.
    pub round_losses: Vec<f64>,
}

/// Runs RWM over a stream of unknown length by restarting a fresh learner on
/// epochs of length 1, 2, 4, ..., each tuned for its own scheduled length.
pub fn run_doubling<I>(n: usize, losses: I, loss_mode: LossMode) -> Result<DoublingOutcome>
where
    I: IntoIterator<Item = LossVector>,
{
    if n == 0 {
        return Err(Error::invalid("number of experts must be at least 1"));
    }
    let mut cum_expert_losses = vec![0.0; n];
    let mut epochs = Vec::new();
    let mut round_losses = Vec::new();

    let mut epoch: u32 = 0;
    let mut planned = 1u64;
    let mut remaining = planned;
    let mut state: Option<EnsembleState> = None;

    for lv in losses {
        let learner = match state.as_mut() {
            Some(s) => s,
            None => state.insert(EnsembleState::new(n, optimal_beta(n, planned)?, loss_mode)?),
        };
        let l_t = learner.update(&lv)?;
        round_losses.push(l_t);
        for (cum, &li) in cum_expert_losses.iter_mut().zip(lv.as_slice()) {
            *cum += li;
        }
        remaining -= 1;
        if remaining == 0 {
            let finished = state.take().expect("epoch learner present");
            epochs.push(EpochRecord {
                epoch,
                planned_rounds: planned,
                rounds: finished.horizon(),
                beta: finished.beta(),
                algo_loss: finished.cum_algo_loss(),
            });
            epoch += 1;
            planned = planned.saturating_mul(2);
            remaining = planned;
        }
    }
    if let Some(partial) = state.take() {
        epochs.push(EpochRecord {
            epoch,
            planned_rounds: planned,
            rounds: partial.horizon(),
            beta: partial.beta(),
            algo_loss: partial.cum_algo_loss(),
        });
    }

    let horizon = round_losses.len() as u64;
    let total_loss: f64 = epochs.iter().map(|e| e.algo_loss).sum();
    let reference_beta = optimal_beta(n, horizon.max(1))?;
    let report = RegretReport::from_parts(horizon, reference_beta, total_loss, &cum_expert_losses)?;
    Ok(DoublingOutcome {
        report,
        epochs,
        round_losses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zero_one(losses: &[f64]) -> LossVector {
        LossVector::new(losses.to_vec(), LossMode::ZeroOne).unwrap()
    }

    #[test]
    fn init_uniform_distribution() {
        let state = EnsembleState::new(3, 0.5, LossMode::ZeroOne).unwrap();
        assert_eq!(state.round(), 1);
        assert_eq!(state.weights(), vec![1.0, 1.0, 1.0]);
        for &p in state.distribution() {
            assert_relative_eq!(p, 1.0 / 3.0, max_relative = 1e-15);
        }
        assert_eq!(state.cum_algo_loss(), 0.0);
        assert_eq!(state.cum_expert_losses(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn init_single_expert() {
        let state = EnsembleState::new(1, 0.9, LossMode::Continuous).unwrap();
        assert_eq!(state.distribution(), &[1.0]);
    }

    #[test]
    fn init_rejects_bad_arguments() {
        assert!(EnsembleState::new(0, 0.5, LossMode::ZeroOne).is_err());
        assert!(EnsembleState::new(2, 1.0, LossMode::ZeroOne).is_err());
        assert!(EnsembleState::new(2, 0.0, LossMode::ZeroOne).is_err());
        assert!(EnsembleState::new(2, -0.1, LossMode::ZeroOne).is_err());
        assert!(EnsembleState::new(2, f64::NAN, LossMode::ZeroOne).is_err());
    }

    #[test]
    fn optimal_beta_clamps_to_half() {
        // 1 - sqrt(ln 2 / 1) is negative, so the boundary value wins.
        assert_eq!(optimal_beta(2, 1).unwrap(), 0.5);
    }

    #[test]
    fn optimal_beta_interior_value() {
        let beta = optimal_beta(10, 10_000).unwrap();
        assert_relative_eq!(beta, 0.984826, epsilon = 1e-6);
    }

    #[test]
    fn optimal_beta_single_expert_clamped_below_one() {
        let beta = optimal_beta(1, 100).unwrap();
        assert!(beta < 1.0);
        assert_relative_eq!(beta, 1.0 - 1e-9, epsilon = 1e-15);
    }

    #[test]
    fn optimal_beta_rejects_degenerate_counts() {
        assert!(optimal_beta(0, 10).is_err());
        assert!(optimal_beta(10, 0).is_err());
    }

    #[test]
    fn update_single_step_matches_hand_execution() {
        // Two experts, beta 1/2, losses [1, 0]: weights become [1/2, 1],
        // distribution [1/3, 2/3], expected loss 1/2.
        let mut state = EnsembleState::new(2, 0.5, LossMode::ZeroOne).unwrap();
        let expected = state.update(&zero_one(&[1.0, 0.0])).unwrap();
        assert_relative_eq!(expected, 0.5, max_relative = 1e-15);
        assert_relative_eq!(state.distribution()[0], 1.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(state.distribution()[1], 2.0 / 3.0, max_relative = 1e-12);
        assert_eq!(state.round(), 2);
        assert_relative_eq!(state.cum_algo_loss(), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn update_all_zero_losses_is_identity() {
        let mut state = EnsembleState::new(4, 0.7, LossMode::ZeroOne).unwrap();
        let before = state.distribution().to_vec();
        let expected = state.update(&zero_one(&[0.0; 4])).unwrap();
        assert_eq!(expected, 0.0);
        assert_eq!(state.distribution(), &before[..]);
    }

    #[test]
    fn update_all_one_losses_keeps_distribution() {
        let mut state = EnsembleState::new(3, 0.5, LossMode::ZeroOne).unwrap();
        state.update(&zero_one(&[1.0, 0.0, 0.0])).unwrap();
        let before = state.distribution().to_vec();
        let expected = state.update(&zero_one(&[1.0; 3])).unwrap();
        assert_relative_eq!(expected, 1.0, max_relative = 1e-12);
        for (a, b) in state.distribution().iter().zip(&before) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn update_rejects_bad_vectors() {
        let mut state = EnsembleState::new(2, 0.5, LossMode::ZeroOne).unwrap();
        assert!(state.update(&zero_one(&[1.0])).is_err());
        assert!(LossVector::new(vec![1.5, 0.0], LossMode::ZeroOne).is_err());
        assert!(LossVector::new(vec![-0.1, 0.0], LossMode::Continuous).is_err());
        assert!(LossVector::new(vec![0.5, 0.0], LossMode::ZeroOne).is_err());
        let continuous = LossVector::new(vec![0.5, 0.0], LossMode::Continuous).unwrap();
        assert!(state.update(&continuous).is_err());
    }

    #[test]
    fn continuous_update_uses_fractional_exponent() {
        let mut state = EnsembleState::new(2, 0.25, LossMode::Continuous).unwrap();
        let lv = LossVector::new(vec![0.5, 0.0], LossMode::Continuous).unwrap();
        state.update(&lv).unwrap();
        let w = state.weights();
        assert_relative_eq!(w[0], 0.25f64.powf(0.5), max_relative = 1e-12);
        assert_relative_eq!(w[1], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn regret_zero_for_single_expert() {
        let mut state = EnsembleState::new(1, 0.5, LossMode::ZeroOne).unwrap();
        for l in [1.0, 0.0, 1.0, 1.0] {
            state.update(&zero_one(&[l])).unwrap();
        }
        let report = state.regret_report();
        assert_eq!(report.horizon, 4);
        assert_eq!(report.regret, 0.0);
        assert_eq!(report.best_expert_index, 0);
    }

    #[test]
    fn regret_after_single_asymmetric_round() {
        let mut state = EnsembleState::new(2, 0.5, LossMode::ZeroOne).unwrap();
        state.update(&zero_one(&[1.0, 0.0])).unwrap();
        let report = state.regret_report();
        assert_relative_eq!(report.cum_algo_loss, 0.5, max_relative = 1e-15);
        assert_eq!(report.min_expert_loss, 0.0);
        assert_eq!(report.best_expert_index, 1);
        assert_relative_eq!(report.regret, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn regret_zero_on_identical_columns() {
        let mut state = EnsembleState::new(3, 0.6, LossMode::ZeroOne).unwrap();
        for l in [1.0, 0.0, 1.0] {
            state.update(&zero_one(&[l, l, l])).unwrap();
        }
        let report = state.regret_report();
        assert_relative_eq!(report.regret, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bound_general_examples() {
        assert_relative_eq!(
            theoretical_bound_general(1, 0.5, 7.0).unwrap(),
            10.5,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            theoretical_bound_general(10, 0.9, 0.0).unwrap(),
            23.0259,
            epsilon = 1e-4
        );
        assert_relative_eq!(
            theoretical_bound_general(10, 0.984826, 100.0).unwrap(),
            253.26,
            epsilon = 0.1
        );
        assert!(theoretical_bound_general(10, 1.0, 0.0).is_err());
    }

    #[test]
    fn bound_sqrt_examples() {
        assert_relative_eq!(
            theoretical_bound_sqrt(10, 10_000, 0.0),
            303.49,
            epsilon = 0.01
        );
        assert_eq!(theoretical_bound_sqrt(1, 12_345, 5.0), 5.0);
        assert_relative_eq!(theoretical_bound_sqrt(3, 100, 0.0), 20.963, epsilon = 0.01);
    }

    #[test]
    fn sample_single_expert_is_always_zero() {
        let state = EnsembleState::new(1, 0.5, LossMode::ZeroOne).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            assert_eq!(state.sample_expert(&mut rng), 0);
        }
    }

    #[test]
    fn sample_degenerate_distribution() {
        // Enough mistakes by expert 0 drive its weight to exactly zero
        // after exponentiation, leaving the point mass on expert 1.
        let mut state = EnsembleState::new(2, 0.5, LossMode::ZeroOne).unwrap();
        for _ in 0..1100 {
            state.update(&zero_one(&[1.0, 0.0])).unwrap();
        }
        assert_eq!(state.distribution()[0], 0.0);
        assert_eq!(state.distribution()[1], 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            assert_eq!(state.sample_expert(&mut rng), 1);
        }
    }

    #[test]
    fn sample_frequency_matches_distribution() {
        let mut state = EnsembleState::new(2, 0.5, LossMode::ZeroOne).unwrap();
        state.update(&zero_one(&[1.0, 0.0])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let draws = 30_000;
        let ones = (0..draws)
            .filter(|_| state.sample_expert(&mut rng) == 1)
            .count();
        let freq = ones as f64 / draws as f64;
        // 4-sigma binomial interval around 2/3.
        assert!(
            (0.655..=0.678).contains(&freq),
            "frequency {freq} outside [0.655, 0.678]"
        );
    }

    #[test]
    fn doubling_single_round_matches_plain_rwm() {
        let lv = zero_one(&[1.0, 0.0]);
        let outcome = run_doubling(2, vec![lv.clone()], LossMode::ZeroOne).unwrap();
        assert_eq!(outcome.epochs.len(), 1);
        assert_eq!(outcome.epochs[0].rounds, 1);

        let mut plain = EnsembleState::new(2, optimal_beta(2, 1).unwrap(), LossMode::ZeroOne)
            .unwrap();
        let l_plain = plain.update(&lv).unwrap();
        assert_eq!(outcome.round_losses, vec![l_plain]);
        assert_eq!(outcome.report.cum_algo_loss, plain.cum_algo_loss());
    }

    #[test]
    fn doubling_epoch_lengths_partition_the_stream() {
        let rows: Vec<LossVector> = (0..7).map(|_| zero_one(&[0.0, 1.0])).collect();
        let outcome = run_doubling(2, rows, LossMode::ZeroOne).unwrap();
        let lengths: Vec<u64> = outcome.epochs.iter().map(|e| e.rounds).collect();
        assert_eq!(lengths, vec![1, 2, 4]);
        assert_eq!(outcome.report.horizon, 7);
    }

    #[test]
    fn doubling_empty_stream_reports_zero_regret() {
        let outcome = run_doubling(3, Vec::new(), LossMode::ZeroOne).unwrap();
        assert_eq!(outcome.report.horizon, 0);
        assert_eq!(outcome.report.regret, 0.0);
        assert!(outcome.epochs.is_empty());
    }

    #[test]
    fn doubling_regret_within_envelope_on_random_losses() {
        let n = 10;
        let t = 4095;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rows: Vec<LossVector> = (0..t)
            .map(|_| {
                let losses: Vec<f64> = (0..n)
                    .map(|_| if rng.gen::<f64>() < 0.5 { 1.0 } else { 0.0 })
                    .collect();
                zero_one(&losses)
            })
            .collect();
        let outcome = run_doubling(n, rows, LossMode::ZeroOne).unwrap();
        let envelope = 7.0 * (t as f64 * (n as f64).ln()).sqrt();
        assert!(
            outcome.report.regret <= envelope,
            "doubling regret {} exceeds {envelope}",
            outcome.report.regret
        );
    }

    #[test]
    fn potential_identity_holds_per_round() {
        // W_{t+1} = W_t (1 - (1 - beta) L_t) for zero-one losses.
        let mut state = EnsembleState::new(5, 0.5, LossMode::ZeroOne).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let losses: Vec<f64> = (0..5)
                .map(|_| if rng.gen::<f64>() < 0.4 { 1.0 } else { 0.0 })
                .collect();
            let w_before: f64 = state.weights().iter().sum();
            let l_t = state.update(&zero_one(&losses)).unwrap();
            let w_after: f64 = state.weights().iter().sum();
            let predicted = w_before * (1.0 - (1.0 - state.beta()) * l_t);
            assert!(
                ((w_after - predicted) / w_before).abs() <= 1e-12,
                "potential identity violated: {w_after} vs {predicted}"
            );
        }
    }

    #[test]
    fn potential_lower_bound_holds() {
        let mut state = EnsembleState::new(4, 0.6, LossMode::ZeroOne).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let losses: Vec<f64> = (0..4)
                .map(|_| if rng.gen::<f64>() < 0.5 { 1.0 } else { 0.0 })
                .collect();
            state.update(&zero_one(&losses)).unwrap();
        }
        let min_loss = state
            .cum_expert_losses()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        assert!(state.log_potential() >= min_loss * state.beta().ln() - 1e-9);
    }
}
