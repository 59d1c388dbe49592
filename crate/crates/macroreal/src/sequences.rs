//! Statistics of sequential measurements: single-time probabilities,
//! multi-time joint probabilities, and two-time correlation functions for
//! equally spaced measurement times with a chosen sharpness.
//!
//! Joint probabilities are computed by propagating the state — evolve to
//! the next measured time, apply the Lüders update, multiply the branch
//! probabilities — rather than from precomputed closed forms. Times without
//! a measurement contribute unitary evolution only, which composes exactly
//! (evolving twice by τ equals evolving once by 2τ).

use crate::qm::{
    effects, evolve, initial_state, luders_update, Effect, ModelParams, Outcome, QubitState,
};
use crate::{Error, Result};

/// A schedule of `n_times` equally spaced measurement opportunities with a
/// fixed sharpness and initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementPlan {
    n_times: usize,
    tau_step: f64,
    lambda: f64,
    theta: f64,
    phi: f64,
}

impl MeasurementPlan {
    pub fn new(n_times: usize, tau_step: f64, lambda: f64, theta: f64, phi: f64) -> Result<Self> {
        if n_times < 1 {
            return Err(Error::UnsupportedTimes {
                n: n_times,
                expected: "n_times >= 1",
            });
        }
        // Range checks are shared with ModelParams.
        ModelParams::new(theta, phi, tau_step, lambda)?;
        Ok(Self {
            n_times,
            tau_step,
            lambda,
            theta,
            phi,
        })
    }

    /// Plan over `n_times` times at the given parameter point, with the
    /// spacing taken from `params.tau()`.
    pub fn from_params(n_times: usize, params: &ModelParams) -> Result<Self> {
        Self::new(
            n_times,
            params.tau(),
            params.lambda(),
            params.theta(),
            params.phi(),
        )
    }

    pub fn n_times(&self) -> usize {
        self.n_times
    }

    pub fn tau_step(&self) -> f64 {
        self.tau_step
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn initial_state(&self) -> QubitState {
        initial_state(self.theta, self.phi).expect("plan angles validated on construction")
    }

    /// The (F₊, F₋) pair for this plan's sharpness.
    pub fn effect_pair(&self) -> (Effect, Effect) {
        effects(self.lambda).expect("plan lambda validated on construction")
    }
}

/// Which outcomes occur at which (1-based) time indices. Indices absent
/// from the list mean no measurement is performed at that time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSpec {
    entries: Vec<(usize, Outcome)>,
}

impl EventSpec {
    /// Requires indices to be at least 1 and strictly increasing.
    pub fn new(entries: Vec<(usize, Outcome)>) -> Result<Self> {
        if entries.first().is_some_and(|(idx, _)| *idx < 1) {
            return Err(Error::InvalidEvent);
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidEvent);
        }
        Ok(Self { entries })
    }

    /// Two-time convenience constructor.
    pub fn pair(i: usize, a: Outcome, j: usize, b: Outcome) -> Result<Self> {
        Self::new(vec![(i, a), (j, b)])
    }

    /// Single-time convenience constructor.
    pub fn single(i: usize, a: Outcome) -> Result<Self> {
        Self::new(vec![(i, a)])
    }

    pub fn entries(&self) -> &[(usize, Outcome)] {
        &self.entries
    }

    /// Largest referenced time index (0 for the empty event).
    pub fn max_index(&self) -> usize {
        self.entries.last().map_or(0, |(idx, _)| *idx)
    }

    /// The same event with every outcome label flipped.
    pub fn flipped(&self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|&(idx, out)| (idx, out.flipped()))
                .collect(),
        }
    }
}

/// Probability that the listed outcomes occur at the listed times, with no
/// measurement at any other time.
///
/// Propagates the plan's initial state through alternating evolution and
/// Lüders updates and returns the product of branch probabilities.
/// Conditioning on a zero-probability prefix yields 0 rather than an error.
pub fn joint_probability(plan: &MeasurementPlan, event: &EventSpec) -> f64 {
    assert!(
        event.max_index() <= plan.n_times(),
        "event references time index {} beyond the plan's {} times",
        event.max_index(),
        plan.n_times()
    );
    let (f_plus, f_minus) = plan.effect_pair();
    let mut state = plan.initial_state();
    let mut position = 1usize;
    let mut probability = 1.0f64;
    for &(index, outcome) in event.entries() {
        if index > position {
            state = evolve(&state, (index - position) as f64 * plan.tau_step());
        }
        let effect = match outcome {
            Outcome::Plus => &f_plus,
            Outcome::Minus => &f_minus,
        };
        match luders_update(&state, effect) {
            (p, Some(post)) => {
                probability *= p;
                state = post;
            }
            (_, None) => return 0.0,
        }
        position = index;
    }
    probability
}

/// Probability of `outcome` at the given time with no earlier measurement:
/// the initial state evolves freely to that time and tr(ρF) is taken.
pub fn single_time_probability(
    plan: &MeasurementPlan,
    time_index: usize,
    outcome: Outcome,
) -> f64 {
    assert!(
        time_index >= 1 && time_index <= plan.n_times(),
        "time index {time_index} outside plan"
    );
    let state = evolve(
        &plan.initial_state(),
        (time_index - 1) as f64 * plan.tau_step(),
    );
    let (f_plus, f_minus) = plan.effect_pair();
    let effect = match outcome {
        Outcome::Plus => f_plus,
        Outcome::Minus => f_minus,
    };
    state
        .matrix()
        .trace_of_product(effect.operator())
        .re
        .clamp(0.0, 1.0)
}

/// Two-time correlation ⟨Q_i Q_j⟩ of sequential measurements at times `i`
/// and `j` only:
/// P(i+, j+) + P(i−, j−) − P(i−, j+) − P(i+, j−).
///
/// For this model the result is λ²·cos(2(j−i)τ) independent of the initial
/// state; the tests pin that identity down.
pub fn correlation(plan: &MeasurementPlan, i: usize, j: usize) -> f64 {
    assert!(i >= 1 && i < j && j <= plan.n_times(), "need 1 <= i < j <= n_times");
    let mut total = 0.0;
    for a in [Outcome::Plus, Outcome::Minus] {
        for b in [Outcome::Plus, Outcome::Minus] {
            let event = EventSpec::pair(i, a, j, b).expect("indices are increasing");
            let sign = f64::from(a.sign() * b.sign());
            total += sign * joint_probability(plan, &event);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::SplitMix64;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

    use Outcome::{Minus, Plus};

    fn plan(theta: f64, phi: f64, tau: f64, lambda: f64, n: usize) -> MeasurementPlan {
        MeasurementPlan::new(n, tau, lambda, theta, phi).unwrap()
    }

    #[test]
    fn event_spec_validation() {
        assert!(EventSpec::new(vec![(1, Plus), (3, Minus)]).is_ok());
        assert!(matches!(
            EventSpec::new(vec![(0, Plus)]),
            Err(Error::InvalidEvent)
        ));
        assert!(matches!(
            EventSpec::new(vec![(2, Plus), (2, Minus)]),
            Err(Error::InvalidEvent)
        ));
        assert!(matches!(
            EventSpec::new(vec![(3, Plus), (1, Minus)]),
            Err(Error::InvalidEvent)
        ));
    }

    #[test]
    fn sharp_adjacent_joint_is_product_of_squared_cosines() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..100 {
            let theta = rng.next_f64() * FRAC_PI_2;
            let phi = rng.next_f64() * 2.0 * PI;
            let tau = rng.next_f64() * PI;
            let p = plan(theta, phi, tau, 1.0, 2);
            let event = EventSpec::pair(1, Plus, 2, Plus).unwrap();
            let expected = theta.cos().powi(2) * tau.cos().powi(2);
            assert!((joint_probability(&p, &event) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn certain_outcome_has_probability_one() {
        let p = plan(0.0, 0.0, 0.0, 1.0, 1);
        let event = EventSpec::single(1, Plus).unwrap();
        assert!((joint_probability(&p, &event) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_probability_prefix_returns_zero() {
        // Starting in |A⟩, a sharp minus outcome at t1 is impossible, so any
        // longer event conditioned on it has probability zero.
        let p = plan(0.0, 0.0, FRAC_PI_4, 1.0, 2);
        let event = EventSpec::pair(1, Minus, 2, Plus).unwrap();
        assert_eq!(joint_probability(&p, &event), 0.0);
    }

    #[test]
    fn unmeasured_times_compose_unitarily() {
        // Measuring at times {1, 3} of a 3-time plan must equal measuring at
        // times {1, 2} of a plan with doubled spacing.
        let mut rng = SplitMix64::new(17);
        for _ in 0..50 {
            let theta = rng.next_f64() * FRAC_PI_2;
            let phi = rng.next_f64() * 2.0 * PI;
            let tau = rng.next_f64() * PI;
            let lambda = rng.next_f64().max(1e-3);
            let skip = plan(theta, phi, tau, lambda, 3);
            let direct = plan(theta, phi, 2.0 * tau, lambda, 2);
            for (a, b) in [(Plus, Plus), (Plus, Minus), (Minus, Plus), (Minus, Minus)] {
                let via_skip =
                    joint_probability(&skip, &EventSpec::pair(1, a, 3, b).unwrap());
                let via_direct =
                    joint_probability(&direct, &EventSpec::pair(1, a, 2, b).unwrap());
                assert!((via_skip - via_direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn joint_probabilities_normalise() {
        // Sum over all 2^k outcome strings of the measured indices is 1.
        let p = plan(0.9, 1.2, 0.7, 0.6, 4);
        let indices = [1, 2, 4];
        let mut total = 0.0;
        for bits in 0..(1u32 << indices.len()) {
            let entries = indices
                .iter()
                .enumerate()
                .map(|(k, &idx)| (idx, if bits >> k & 1 == 1 { Plus } else { Minus }))
                .collect();
            total += joint_probability(&p, &EventSpec::new(entries).unwrap());
        }
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn single_time_evolves_then_projects() {
        // From |A⟩ with τ = π/4 the second-time plus probability is 1/2.
        let p = plan(0.0, 0.0, FRAC_PI_4, 1.0, 2);
        assert!((single_time_probability(&p, 2, Plus) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_time_outcomes_are_complete() {
        let p = plan(1.1, 0.3, 0.8, 0.4, 3);
        for idx in 1..=3 {
            let sum = single_time_probability(&p, idx, Plus)
                + single_time_probability(&p, idx, Minus);
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn earlier_measurement_disturbs_later_statistics() {
        // At θ=π/4, φ=π/2, τ=π/4 the unconditioned second-time probability
        // exceeds the sum of the measured-at-t1 joints by exactly 1/2.
        let p = plan(FRAC_PI_4, FRAC_PI_2, FRAC_PI_4, 1.0, 2);
        let unconditioned = single_time_probability(&p, 2, Plus);
        let summed = joint_probability(&p, &EventSpec::pair(1, Plus, 2, Plus).unwrap())
            + joint_probability(&p, &EventSpec::pair(1, Minus, 2, Plus).unwrap());
        assert!((unconditioned - summed - 0.5).abs() < 1e-12);
    }

    #[test]
    fn correlation_special_values() {
        let p = plan(0.4, 0.9, 0.0, 1.0, 2);
        assert!((correlation(&p, 1, 2) - 1.0).abs() < 1e-12);

        let p = plan(0.4, 0.9, FRAC_PI_4, 1.0, 2);
        assert!(correlation(&p, 1, 2).abs() < 1e-12);

        let p = plan(0.4, 0.9, FRAC_PI_6, 0.5, 2);
        assert!((correlation(&p, 1, 2) - 0.125).abs() < 1e-12);
    }

    #[test]
    fn correlation_is_state_independent_and_scales_with_lambda_squared() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..50 {
            let tau = rng.next_f64() * PI;
            let lambda = rng.next_f64().max(1e-3);
            let theta_a = rng.next_f64() * FRAC_PI_2;
            let theta_b = rng.next_f64() * FRAC_PI_2;
            let phi_a = rng.next_f64() * 2.0 * PI;
            let phi_b = rng.next_f64() * 2.0 * PI;

            let a = correlation(&plan(theta_a, phi_a, tau, lambda, 2), 1, 2);
            let b = correlation(&plan(theta_b, phi_b, tau, lambda, 2), 1, 2);
            assert!((a - b).abs() < 1e-10, "correlator depends on the state");

            let sharp = correlation(&plan(theta_a, phi_a, tau, 1.0, 2), 1, 2);
            assert!((a - lambda * lambda * sharp).abs() < 1e-10);
            assert!((a - lambda * lambda * (2.0 * tau).cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn correlation_spans_multiple_steps() {
        // Separation of k steps behaves like a single step of kτ.
        let p = plan(0.7, 2.0, 0.3, 0.8, 5);
        for j in 2..=5 {
            let k = (j - 1) as f64;
            let expected = 0.64 * (2.0 * k * 0.3).cos();
            assert!((correlation(&p, 1, j) - expected).abs() < 1e-10);
        }
    }
}
