//! The macrorealism criteria as data: each inequality is a signed linear
//! combination of event probabilities over n measurement times together
//! with its classical bound. One evaluator covers the three-term Wigner-form
//! inequalities, their n-term generalisation, the correlator-based
//! Leggett-Garg chain, and the no-signalling-in-time residual.

use crate::qm::{ModelParams, Outcome};
use crate::sequences::{
    correlation, joint_probability, single_time_probability, EventSpec, MeasurementPlan,
};
use crate::{Error, Result};

use Outcome::{Minus, Plus};

/// A signed combination of event probabilities with a classical upper bound
/// (and, for correlator chains, a lower bound).
#[derive(Debug, Clone, PartialEq)]
pub struct InequalitySpec {
    name: String,
    n_times: usize,
    terms: Vec<(i8, EventSpec)>,
    upper_bound: f64,
    lower_bound: Option<f64>,
}

impl InequalitySpec {
    pub fn new(
        name: impl Into<String>,
        n_times: usize,
        terms: Vec<(i8, EventSpec)>,
        upper_bound: f64,
        lower_bound: Option<f64>,
    ) -> Result<Self> {
        let name = name.into();
        for (_, event) in &terms {
            if event.max_index() > n_times {
                return Err(Error::IndexBeyondPlan {
                    name,
                    index: event.max_index(),
                    n_times,
                });
            }
        }
        Ok(Self {
            name,
            n_times,
            terms,
            upper_bound,
            lower_bound,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_times(&self) -> usize {
        self.n_times
    }

    pub fn terms(&self) -> &[(i8, EventSpec)] {
        &self.terms
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper_bound
    }

    pub fn lower_bound(&self) -> Option<f64> {
        self.lower_bound
    }

    /// The inequality with every outcome label flipped (+ ↔ −). Classical
    /// validity is preserved because the deterministic assignment set is
    /// symmetric under a global flip.
    pub fn flipped(&self) -> Self {
        Self {
            name: format!("{}-flipped", self.name),
            n_times: self.n_times,
            terms: self
                .terms
                .iter()
                .map(|(sign, event)| (*sign, event.flipped()))
                .collect(),
            upper_bound: self.upper_bound,
            lower_bound: self.lower_bound,
        }
    }
}

/// Evaluation of a criterion at one parameter point. `margin > 0` means the
/// quantum value exceeds the macrorealist bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViolationResult {
    pub params: ModelParams,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
}

fn three_term(
    name: &str,
    positive: [(usize, Outcome); 2],
    neg_a: [(usize, Outcome); 2],
    neg_b: [(usize, Outcome); 2],
) -> InequalitySpec {
    let event = |pair: [(usize, Outcome); 2]| EventSpec::new(pair.to_vec()).expect("fixed indices");
    InequalitySpec::new(
        name,
        3,
        vec![(1, event(positive)), (-1, event(neg_a)), (-1, event(neg_b))],
        0.0,
        None,
    )
    .expect("catalog entries are well formed")
}

/// The 24 three-time Wigner-form inequalities: twelve base forms, each with
/// one positive and two negative two-time joint probabilities bounded by 0,
/// plus the twelve obtained by flipping every outcome label.
pub fn wlgi3_catalog() -> Vec<InequalitySpec> {
    let base = vec![
        three_term("wlgi3-4", [(2, Plus), (3, Minus)], [(1, Plus), (2, Plus)], [(1, Minus), (3, Minus)]),
        three_term("wlgi3-5a", [(2, Plus), (3, Plus)], [(1, Minus), (2, Plus)], [(1, Plus), (3, Plus)]),
        three_term("wlgi3-5b", [(2, Plus), (3, Minus)], [(1, Minus), (2, Plus)], [(1, Plus), (3, Minus)]),
        three_term("wlgi3-5c", [(2, Plus), (3, Plus)], [(1, Plus), (2, Plus)], [(1, Minus), (3, Plus)]),
        three_term("wlgi3-5d", [(1, Plus), (3, Minus)], [(1, Plus), (2, Minus)], [(2, Plus), (3, Minus)]),
        three_term("wlgi3-5e", [(1, Plus), (3, Minus)], [(1, Plus), (2, Plus)], [(2, Minus), (3, Minus)]),
        three_term("wlgi3-5f", [(1, Plus), (3, Plus)], [(1, Plus), (2, Plus)], [(2, Minus), (3, Plus)]),
        three_term("wlgi3-5g", [(1, Plus), (3, Plus)], [(1, Plus), (2, Minus)], [(2, Plus), (3, Plus)]),
        three_term("wlgi3-5h", [(1, Plus), (2, Minus)], [(1, Plus), (3, Minus)], [(2, Minus), (3, Plus)]),
        three_term("wlgi3-5i", [(1, Plus), (2, Minus)], [(1, Plus), (3, Plus)], [(2, Minus), (3, Minus)]),
        three_term("wlgi3-5j", [(1, Plus), (2, Plus)], [(1, Plus), (3, Plus)], [(2, Plus), (3, Minus)]),
        three_term("wlgi3-5k", [(1, Plus), (2, Plus)], [(1, Plus), (3, Minus)], [(2, Plus), (3, Plus)]),
    ];
    let flipped: Vec<_> = base.iter().map(InequalitySpec::flipped).collect();
    base.into_iter().chain(flipped).collect()
}

/// The n-term Wigner-form inequality
/// P(1+, n−) − Σ_{i=1}^{n−1} P(i+, (i+1)−) ≤ 0,
/// valid classically because the left side marginalises to a sum of
/// negated non-negative residual terms (see `oracle::residual_terms`).
pub fn wlgi_n(n: usize) -> Result<InequalitySpec> {
    if n < 3 {
        return Err(Error::UnsupportedTimes {
            n,
            expected: "n >= 3",
        });
    }
    let mut terms = vec![(1i8, EventSpec::pair(1, Plus, n, Minus)?)];
    for i in 1..n {
        terms.push((-1, EventSpec::pair(i, Plus, i + 1, Minus)?));
    }
    InequalitySpec::new(format!("wlgi-n:{n}"), n, terms, 0.0, None)
}

/// The no-signalling-in-time condition as an equality residual:
/// P(Q₂=+1) − P(1+, 2+) − P(1−, 2+), bounded by 0 with any nonzero value
/// counting as a violation.
pub fn nsit_spec() -> InequalitySpec {
    InequalitySpec::new(
        "nsit",
        2,
        vec![
            (1, EventSpec::single(2, Plus).expect("fixed index")),
            (-1, EventSpec::pair(1, Plus, 2, Plus).expect("fixed indices")),
            (-1, EventSpec::pair(1, Minus, 2, Plus).expect("fixed indices")),
        ],
        0.0,
        None,
    )
    .expect("well formed")
}

/// Classical bounds of the n-term correlator chain: the upper bound is
/// n−2; the lower bound is −n for odd n and −(n−2) for even n.
pub fn lgi_bounds(n: usize) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(Error::UnsupportedTimes {
            n,
            expected: "n >= 3",
        });
    }
    let upper = (n - 2) as f64;
    let lower = if n % 2 == 1 {
        -(n as f64)
    } else {
        -((n - 2) as f64)
    };
    Ok((lower, upper))
}

/// The n-term correlator chain expanded into event probabilities (four
/// signed events per correlator). Used by the classical oracle, which works
/// on events; quantum evaluation goes through [`lgi_kn`] instead.
pub fn lgi_event_spec(n: usize) -> Result<InequalitySpec> {
    let (lower, upper) = lgi_bounds(n)?;
    let mut terms = Vec::with_capacity(4 * n);
    let push_correlator = |terms: &mut Vec<(i8, EventSpec)>, i: usize, j: usize, sign: i8| {
        for (a, b) in [(Plus, Plus), (Minus, Minus), (Minus, Plus), (Plus, Minus)] {
            let product = sign * a.sign() * b.sign();
            terms.push((
                product,
                EventSpec::pair(i, a, j, b).expect("indices increase"),
            ));
        }
    };
    for i in 1..n {
        push_correlator(&mut terms, i, i + 1, 1);
    }
    push_correlator(&mut terms, 1, n, -1);
    InequalitySpec::new(format!("lgi:{n}"), n, terms, upper, Some(lower))
}

/// Evaluates a spec at a parameter point: the signed sum of joint event
/// probabilities, with the margin taken against the upper bound.
pub fn evaluate(spec: &InequalitySpec, params: &ModelParams) -> ViolationResult {
    let plan = MeasurementPlan::from_params(spec.n_times(), params)
        .expect("validated params give a valid plan");
    let value = spec
        .terms()
        .iter()
        .map(|(sign, event)| f64::from(*sign) * joint_probability(&plan, event))
        .sum();
    ViolationResult {
        params: *params,
        value,
        bound: spec.upper_bound(),
        margin: value - spec.upper_bound(),
    }
}

/// The n-term correlator chain
/// K_n = C_{21} + C_{32} + … + C_{n(n−1)} − C_{n1}
/// over an equally spaced n-time plan, with the margin relative to the
/// upper bound n−2.
pub fn lgi_kn(n: usize, params: &ModelParams) -> Result<ViolationResult> {
    let (_, upper) = lgi_bounds(n)?;
    let plan = MeasurementPlan::from_params(n, params)?;
    let mut value = 0.0;
    for i in 1..n {
        value += correlation(&plan, i, i + 1);
    }
    value -= correlation(&plan, 1, n);
    Ok(ViolationResult {
        params: *params,
        value,
        bound: upper,
        margin: value - upper,
    })
}

/// No-signalling-in-time residual
/// P(Q₂=+1) − [P(1+, 2+) + P(1−, 2+)];
/// any nonzero value is a violation. Evaluates to
/// ½·λ·sin(2τ)·sin(2θ)·sin(φ)·(1 − √(1−λ²)) for this model.
pub fn nsit_delta(params: &ModelParams) -> f64 {
    let plan = MeasurementPlan::from_params(2, params).expect("two-time plan");
    let unconditioned = single_time_probability(&plan, 2, Plus);
    let conditioned = joint_probability(&plan, &EventSpec::pair(1, Plus, 2, Plus).unwrap())
        + joint_probability(&plan, &EventSpec::pair(1, Minus, 2, Plus).unwrap());
    unconditioned - conditioned
}

/// A named criterion resolved from its stable identifier.
#[derive(Debug, Clone, PartialEq)]
pub enum Criterion {
    /// An event-probability combination evaluated by [`evaluate`].
    Spec(InequalitySpec),
    /// The n-term correlator chain, evaluated through [`lgi_kn`].
    Lgi(usize),
}

impl Criterion {
    pub fn name(&self) -> String {
        match self {
            Criterion::Spec(spec) => spec.name().to_string(),
            Criterion::Lgi(n) => format!("lgi:{n}"),
        }
    }

    pub fn evaluate(&self, params: &ModelParams) -> ViolationResult {
        match self {
            Criterion::Spec(spec) => evaluate(spec, params),
            Criterion::Lgi(n) => lgi_kn(*n, params).expect("n validated on construction"),
        }
    }
}

/// Resolves the stable criterion identifiers: `wlgi3-4`,
/// `wlgi3-5a` … `wlgi3-5k` (with optional `-flipped` suffix),
/// `wlgi-n:<n>`, `lgi:<n>`, and `nsit`.
pub fn lookup(name: &str) -> Result<Criterion> {
    if name == "nsit" {
        return Ok(Criterion::Spec(nsit_spec()));
    }
    if let Some(rest) = name.strip_prefix("lgi:") {
        let n: usize = rest
            .parse()
            .map_err(|_| Error::UnknownCriterion(name.to_string()))?;
        if n < 3 {
            return Err(Error::UnsupportedTimes {
                n,
                expected: "n >= 3",
            });
        }
        return Ok(Criterion::Lgi(n));
    }
    if let Some(rest) = name.strip_prefix("wlgi-n:") {
        let n: usize = rest
            .parse()
            .map_err(|_| Error::UnknownCriterion(name.to_string()))?;
        return Ok(Criterion::Spec(wlgi_n(n)?));
    }
    wlgi3_catalog()
        .into_iter()
        .find(|spec| spec.name() == name)
        .map(Criterion::Spec)
        .ok_or_else(|| Error::UnknownCriterion(name.to_string()))
}
