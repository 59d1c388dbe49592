//! Brute-force macrorealist checker.
//!
//! Any classical (macrorealist) joint distribution over the outcomes at n
//! times is a convex mixture of the 2^n deterministic assignments, so the
//! classical extremum of a signed combination of event probabilities is
//! attained at one of those assignments. Enumerating them gives the exact
//! classical bound of every criterion in integer arithmetic — no floating
//! point, no solver.

use std::collections::BTreeMap;
use std::fmt;

use crate::inequalities::{lgi_event_spec, wlgi3_catalog, wlgi_n, InequalitySpec};
use crate::qm::Outcome;
use crate::sequences::EventSpec;
use crate::{Error, Result};

/// Enumeration guard: 2^24 assignments is the largest set the oracle will
/// walk exhaustively.
pub const MAX_ENUM_TIMES: usize = 24;

/// A deterministic outcome assignment: one ±1 value per measurement time.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Assignment {
    outcomes: Vec<Outcome>,
}

impl Assignment {
    pub fn new(outcomes: Vec<Outcome>) -> Self {
        Self { outcomes }
    }

    /// Assignment from the low `n` bits of `bits`; bit i set means the
    /// outcome at time i+1 is +1.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        let outcomes = (0..n)
            .map(|i| {
                if bits >> i & 1 == 1 {
                    Outcome::Plus
                } else {
                    Outcome::Minus
                }
            })
            .collect();
        Self { outcomes }
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    /// Whether this assignment realises every (time, outcome) entry of the
    /// event. The empty event is vacuously satisfied.
    pub fn satisfies(&self, event: &EventSpec) -> bool {
        event
            .entries()
            .iter()
            .all(|&(idx, out)| self.outcomes[idx - 1] == out)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, out) in self.outcomes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{out}")?;
        }
        write!(f, ")")
    }
}

/// Value of the spec's signed combination on one deterministic assignment.
pub fn assignment_value(spec: &InequalitySpec, assignment: &Assignment) -> i64 {
    spec.terms()
        .iter()
        .map(|(sign, event)| {
            if assignment.satisfies(event) {
                i64::from(*sign)
            } else {
                0
            }
        })
        .sum()
}

/// An event compiled to bitmasks over the assignment word, for fast
/// enumeration: satisfied iff all `plus` bits are set and no `minus` bit is.
struct MaskedTerm {
    sign: i64,
    plus: u64,
    minus: u64,
}

fn compile(spec: &InequalitySpec) -> Vec<MaskedTerm> {
    spec.terms()
        .iter()
        .map(|(sign, event)| {
            let mut plus = 0u64;
            let mut minus = 0u64;
            for &(idx, out) in event.entries() {
                let bit = 1u64 << (idx - 1);
                match out {
                    Outcome::Plus => plus |= bit,
                    Outcome::Minus => minus |= bit,
                }
            }
            MaskedTerm {
                sign: i64::from(*sign),
                plus,
                minus,
            }
        })
        .collect()
}

fn extremum(spec: &InequalitySpec, want_max: bool) -> Result<i64> {
    let n = spec.n_times();
    if n > MAX_ENUM_TIMES {
        return Err(Error::UnsupportedTimes {
            n,
            expected: "n <= 24 for exhaustive enumeration",
        });
    }
    let terms = compile(spec);
    let mut best: Option<i64> = None;
    for bits in 0..(1u64 << n) {
        let value: i64 = terms
            .iter()
            .map(|t| {
                if bits & t.plus == t.plus && bits & t.minus == 0 {
                    t.sign
                } else {
                    0
                }
            })
            .sum();
        best = Some(match best {
            None => value,
            Some(b) if want_max => b.max(value),
            Some(b) => b.min(value),
        });
    }
    Ok(best.expect("at least one assignment"))
}

/// Exact macrorealist maximum of the spec's value, by enumerating all 2^n
/// deterministic assignments. By convexity this bounds every classical
/// joint distribution.
pub fn classical_max(spec: &InequalitySpec) -> Result<i64> {
    extremum(spec, true)
}

/// Exact macrorealist minimum, for two-sided bounds.
pub fn classical_min(spec: &InequalitySpec) -> Result<i64> {
    extremum(spec, false)
}

/// Per-assignment residual coefficients of the chain marginalisation
/// identity behind the n-term Wigner-form inequality:
///
/// c(v) = Σ_{i=1}^{n−1} [v_i = +, v_{i+1} = −] − [v_1 = +, v_n = −].
///
/// Returns the full map v ↦ c(v) and the total Σ c(v). Every coefficient is
/// non-negative (a chain that starts + and ends − must step down somewhere)
/// and the total is (n−2)·2^{n−2}; the tests execute both facts, which
/// together are the inequality's proof.
pub fn residual_terms(n: usize) -> Result<(BTreeMap<Assignment, i64>, i64)> {
    if !(3..=20).contains(&n) {
        return Err(Error::UnsupportedTimes {
            n,
            expected: "3 <= n <= 20",
        });
    }
    let mut coefficients = BTreeMap::new();
    let mut total = 0i64;
    for bits in 0..(1u64 << n) {
        let mut c = 0i64;
        for i in 0..n - 1 {
            if bits >> i & 1 == 1 && bits >> (i + 1) & 1 == 0 {
                c += 1;
            }
        }
        if bits & 1 == 1 && bits >> (n - 1) & 1 == 0 {
            c -= 1;
        }
        total += c;
        coefficients.insert(Assignment::from_bits(bits, n), c);
    }
    Ok((coefficients, total))
}

/// One certification line: the computed exact classical bounds of a spec
/// against its declared bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct CertEntry {
    pub name: String,
    pub computed_max: i64,
    pub declared_upper: f64,
    pub computed_min: Option<i64>,
    pub declared_lower: Option<f64>,
    pub passed: bool,
}

impl fmt::Display for CertEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "ok" } else { "FAIL" };
        match (self.computed_min, self.declared_lower) {
            (Some(min), Some(lower)) => write!(
                f,
                "{:<18} classical range [{}, {}], declared [{}, {}] .. {}",
                self.name, min, self.computed_max, lower, self.declared_upper, status
            ),
            _ => write!(
                f,
                "{:<18} classical max {}, declared bound {} .. {}",
                self.name, self.computed_max, self.declared_upper, status
            ),
        }
    }
}

/// Certification report over the whole criterion catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub entries: Vec<CertEntry>,
}

impl CertificationReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

impl fmt::Display for CertificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for entry in &self.entries {
            writeln!(f, "{entry}")?;
        }
        Ok(())
    }
}

/// Certifies one spec: its enumerated classical maximum must not exceed the
/// declared upper bound, and (when a lower bound is declared) its minimum
/// must not fall below it.
pub fn certify(spec: &InequalitySpec) -> Result<CertEntry> {
    let computed_max = classical_max(spec)?;
    let (computed_min, lower_ok) = match spec.lower_bound() {
        Some(lower) => {
            let min = classical_min(spec)?;
            (Some(min), min as f64 >= lower)
        }
        None => (None, true),
    };
    Ok(CertEntry {
        name: spec.name().to_string(),
        computed_max,
        declared_upper: spec.upper_bound(),
        computed_min,
        declared_lower: spec.lower_bound(),
        passed: (computed_max as f64) <= spec.upper_bound() && lower_ok,
    })
}

/// Runs the classical certification over all 24 three-time Wigner-form
/// inequalities, the n-term chains for n = 3..8, and the correlator-chain
/// bounds for n = 3..8.
pub fn certify_catalog() -> CertificationReport {
    let mut entries = Vec::new();
    for spec in wlgi3_catalog() {
        entries.push(certify(&spec).expect("catalog specs are enumerable"));
    }
    for n in 3..=8 {
        let spec = wlgi_n(n).expect("n in range");
        entries.push(certify(&spec).expect("enumerable"));
    }
    for n in 3..=8 {
        let spec = lgi_event_spec(n).expect("n in range");
        entries.push(certify(&spec).expect("enumerable"));
    }
    CertificationReport { entries }
}
