//! Stochastic trajectory sampling of sequential unsharp measurements, used
//! to cross-validate the analytic engine. Results are bit-reproducible from
//! the seed, across platforms and implementations, because the generator is
//! part of the contract rather than a library detail.

use std::collections::BTreeMap;

use crate::inequalities::{lgi_event_spec, lookup, Criterion, InequalitySpec};
use crate::qm::{evolution_unitary, luders_update, ModelParams, Outcome, QubitState};
use crate::sequences::{EventSpec, MeasurementPlan};
use crate::{Error, Result};

/// SplitMix64: the 64-bit generator with output function
///
/// ```text
/// state += 0x9E3779B97F4A7C15
/// z = state
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// return z ^ (z >> 31)
/// ```
///
/// Seeding the state with 0 must produce 0xE220A8397B1DCDAF as the first
/// output (pinned by a test). Uniform doubles in [0, 1) take the top 53
/// bits: `(x >> 11) · 2⁻⁵³`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Disjoint substream for `(seed, index)`: the stream is seeded with one
    /// SplitMix64 output drawn from state `seed XOR index·0x9E3779B97F4A7C15`.
    /// Different indices land in unrelated regions of the state space, so
    /// per-event sub-ensembles are statistically independent.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut keyed = Self::new(seed ^ index.wrapping_mul(GOLDEN_GAMMA));
        Self::new(keyed.next_u64())
    }
}

/// What to sample: which times of the plan are measured, how many
/// trajectories to draw, and the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryConfig {
    plan: MeasurementPlan,
    measured_indices: Vec<usize>,
    n_samples: u64,
    rng_seed: u64,
}

impl TrajectoryConfig {
    pub fn new(
        plan: MeasurementPlan,
        measured_indices: Vec<usize>,
        n_samples: u64,
        rng_seed: u64,
    ) -> Result<Self> {
        if n_samples < 1 {
            return Err(Error::OutOfRange {
                name: "n_samples",
                value: 0.0,
                expected: "at least 1",
            });
        }
        let increasing = measured_indices.windows(2).all(|w| w[0] < w[1]);
        let in_range = measured_indices
            .iter()
            .all(|&idx| idx >= 1 && idx <= plan.n_times());
        if measured_indices.is_empty() || !increasing || !in_range {
            return Err(Error::InvalidEvent);
        }
        // Outcome tuples are tallied through a 32-bit word.
        if measured_indices.len() > 32 {
            return Err(Error::UnsupportedTimes {
                n: measured_indices.len(),
                expected: "at most 32 measured times per trajectory",
            });
        }
        Ok(Self {
            plan,
            measured_indices,
            n_samples,
            rng_seed,
        })
    }

    pub fn plan(&self) -> &MeasurementPlan {
        &self.plan
    }

    pub fn measured_indices(&self) -> &[usize] {
        &self.measured_indices
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }
}

fn sample_with_rng(config: &TrajectoryConfig, rng: &mut SplitMix64) -> BTreeMap<Vec<Outcome>, u64> {
    let plan = &config.plan;
    let (f_plus, f_minus) = plan.effect_pair();
    // Evolution operators between consecutive measured times, fixed per
    // config so the sampling loop is trig-free.
    let mut gaps = Vec::with_capacity(config.measured_indices.len());
    let mut position = 1usize;
    for &idx in &config.measured_indices {
        gaps.push(if idx > position {
            Some(evolution_unitary((idx - position) as f64 * plan.tau_step()))
        } else {
            None
        });
        position = idx;
    }
    let initial = plan.initial_state();

    let k = config.measured_indices.len();
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for _ in 0..config.n_samples {
        let mut state = initial;
        let mut bits = 0u32;
        for (slot, gap) in gaps.iter().enumerate() {
            if let Some(u) = gap {
                state = QubitState::new_unchecked((*u * *state.matrix()) * u.adjoint());
            }
            let p_plus = state
                .matrix()
                .trace_of_product(f_plus.operator())
                .re
                .clamp(0.0, 1.0);
            let effect = if rng.next_f64() < p_plus {
                bits |= 1 << slot;
                &f_plus
            } else {
                &f_minus
            };
            // A None post-state (branch probability ≤ 1e-14) keeps the
            // premeasurement state; reachable with probability ≤ 1e-14 per
            // draw.
            if let (_, Some(post)) = luders_update(&state, effect) {
                state = post;
            }
        }
        *counts.entry(bits).or_insert(0) += 1;
    }

    counts
        .into_iter()
        .map(|(bits, count)| {
            let tuple = (0..k)
                .map(|slot| {
                    if bits >> slot & 1 == 1 {
                        Outcome::Plus
                    } else {
                        Outcome::Minus
                    }
                })
                .collect();
            (tuple, count)
        })
        .collect()
}

/// Draws `n_samples` measurement trajectories and tallies the outcome
/// tuples (ordered as `measured_indices`). Counts sum to `n_samples`, and
/// an identical config yields identical counts.
pub fn sample_sequences(config: &TrajectoryConfig) -> BTreeMap<Vec<Outcome>, u64> {
    let mut rng = SplitMix64::new(config.rng_seed);
    sample_with_rng(config, &mut rng)
}

/// Estimates a criterion by Monte Carlo: each event probability is
/// estimated from its own sub-ensemble of `n_samples` trajectories (as an
/// experiment would measure it), on a random substream derived from the
/// seed and the term's position. Returns the signed combination and its
/// propagated standard error.
///
/// Correlator-chain names (`lgi:<n>`) are estimated through their
/// event-probability expansion.
pub fn estimate_inequality(
    spec_name: &str,
    params: &ModelParams,
    n_samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    let spec: InequalitySpec = match lookup(spec_name)? {
        Criterion::Spec(spec) => spec,
        Criterion::Lgi(n) => lgi_event_spec(n)?,
    };
    let plan = MeasurementPlan::from_params(spec.n_times(), params)?;

    let mut estimate = 0.0;
    let mut variance = 0.0;
    for (term_index, (sign, event)) in spec.terms().iter().enumerate() {
        let p_hat = estimate_event(&plan, event, n_samples, seed, term_index as u64)?;
        estimate += f64::from(*sign) * p_hat;
        variance += p_hat * (1.0 - p_hat) / n_samples as f64;
    }
    Ok((estimate, variance.sqrt()))
}

fn estimate_event(
    plan: &MeasurementPlan,
    event: &EventSpec,
    n_samples: u64,
    seed: u64,
    term_index: u64,
) -> Result<f64> {
    let indices: Vec<usize> = event.entries().iter().map(|&(idx, _)| idx).collect();
    let target: Vec<Outcome> = event.entries().iter().map(|&(_, out)| out).collect();
    let config = TrajectoryConfig::new(*plan, indices, n_samples, seed)?;
    let mut rng = SplitMix64::substream(seed, term_index);
    let counts = sample_with_rng(&config, &mut rng);
    let hits = counts.get(&target).copied().unwrap_or(0);
    Ok(hits as f64 / n_samples as f64)
}
