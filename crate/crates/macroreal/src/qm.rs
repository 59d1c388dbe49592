//! Exact complex 2×2 linear algebra for the two-level system: density
//! matrices, the oscillation unitary, projective and unsharp measurement
//! effects, and the Lüders state-update rule.
//!
//! The computational basis is the ordered pair {|A⟩, |B⟩} of degenerate
//! states the system oscillates between; the measured observable is
//! Q = |A⟩⟨A| − |B⟩⟨B| with outcomes ±1.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerance for single algebraic identities (Hermiticity, unit trace,
/// operator square roots).
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Tolerance for quantities assembled from a chain of 2×2 operations.
pub const PIPELINE_TOL: f64 = 1e-10;

/// Branch probabilities at or below this threshold count as null events:
/// the post-measurement state is undefined.
pub const NULL_EVENT_THRESHOLD: f64 = 1e-14;

/// A 2×2 complex matrix over the ordered basis {|A⟩, |B⟩}, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMat2 {
    entries: [Complex64; 4],
}

impl ComplexMat2 {
    /// Builds a matrix from row-major entries `[m00, m01, m10, m11]`.
    pub const fn new(entries: [Complex64; 4]) -> Self {
        Self { entries }
    }

    /// Builds a matrix from row-major real entries.
    pub fn from_real(entries: [f64; 4]) -> Self {
        Self::new(entries.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn zero() -> Self {
        Self::from_real([0.0; 4])
    }

    pub fn identity() -> Self {
        Self::from_real([1.0, 0.0, 0.0, 1.0])
    }

    /// Diagonal matrix `diag(d0, d1)`.
    pub fn diagonal(d0: f64, d1: f64) -> Self {
        Self::from_real([d0, 0.0, 0.0, d1])
    }

    /// Entry at `(row, col)`, both in {0, 1}.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[2 * row + col]
    }

    /// Row-major view of the four entries.
    pub fn entries(&self) -> &[Complex64; 4] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = self.entries;
        Self::new([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0] + self.entries[3]
    }

    /// tr(self · other) without materialising the product.
    pub fn trace_of_product(&self, other: &Self) -> Complex64 {
        let [a0, a1, a2, a3] = self.entries;
        let [b0, b1, b2, b3] = other.entries;
        a0 * b0 + a1 * b2 + a2 * b1 + a3 * b3
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.entries.map(|x| x * k))
    }

    /// Largest absolute difference between corresponding entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Whether the matrix equals its adjoint within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending. The caller is expected
    /// to have checked Hermiticity; only the real parts of the diagonal are
    /// used.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let a = self.entries[0].re;
        let d = self.entries[3].re;
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + self.entries[1].norm_sqr()).sqrt();
        (mean - disc, mean + disc)
    }

    /// PSD square root of a Hermitian positive semidefinite matrix, via the
    /// spectral decomposition. Eigenvalues within `ALGEBRA_TOL` below zero
    /// are clamped to zero.
    pub fn hermitian_sqrt(&self) -> Result<Self> {
        let (lo, hi) = self.hermitian_eigenvalues();
        if lo < -ALGEBRA_TOL {
            return Err(Error::InvalidOperator("matrix is not positive semidefinite"));
        }
        let lo = lo.max(0.0);
        if hi - lo <= ALGEBRA_TOL {
            // Scalar matrix; avoids dividing by the eigenvalue gap.
            return Ok(Self::identity().scale(Complex64::new(lo.sqrt(), 0.0)));
        }
        // P_hi = (M - lo·I) / (hi - lo), and sqrt = √hi·P_hi + √lo·(I - P_hi).
        let gap = hi - lo;
        let p_hi = (*self - Self::identity().scale(Complex64::new(lo, 0.0)))
            .scale(Complex64::new(1.0 / gap, 0.0));
        let p_lo = Self::identity() - p_hi;
        Ok(p_hi.scale(Complex64::new(hi.sqrt(), 0.0)) + p_lo.scale(Complex64::new(lo.sqrt(), 0.0)))
    }
}

impl Add for ComplexMat2 {
    type Output = ComplexMat2;
    fn add(self, rhs: ComplexMat2) -> ComplexMat2 {
        let mut out = self.entries;
        for (x, y) in out.iter_mut().zip(rhs.entries.iter()) {
            *x += y;
        }
        ComplexMat2::new(out)
    }
}

impl Sub for ComplexMat2 {
    type Output = ComplexMat2;
    fn sub(self, rhs: ComplexMat2) -> ComplexMat2 {
        let mut out = self.entries;
        for (x, y) in out.iter_mut().zip(rhs.entries.iter()) {
            *x -= y;
        }
        ComplexMat2::new(out)
    }
}

impl Mul for ComplexMat2 {
    type Output = ComplexMat2;
    fn mul(self, rhs: ComplexMat2) -> ComplexMat2 {
        let [a0, a1, a2, a3] = self.entries;
        let [b0, b1, b2, b3] = rhs.entries;
        ComplexMat2::new([
            a0 * b0 + a1 * b2,
            a0 * b1 + a1 * b3,
            a2 * b0 + a3 * b2,
            a2 * b1 + a3 * b3,
        ])
    }
}

impl fmt::Debug for ComplexMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// Measurement outcome label for the dichotomic observable Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        })
    }
}

/// Density matrix of the two-level system.
///
/// Valid states are Hermitian, unit-trace, and positive semidefinite within
/// [`ALGEBRA_TOL`]; the validating constructor enforces all three.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    matrix: ComplexMat2,
}

impl QubitState {
    /// Validates and wraps a density matrix.
    pub fn new(matrix: ComplexMat2) -> Result<Self> {
        if !matrix.is_hermitian(ALGEBRA_TOL) {
            return Err(Error::InvalidOperator("density matrix is not Hermitian"));
        }
        if (matrix.trace().re - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::InvalidOperator("density matrix trace is not 1"));
        }
        if matrix.hermitian_eigenvalues().0 < -ALGEBRA_TOL {
            return Err(Error::InvalidOperator(
                "density matrix has a negative eigenvalue",
            ));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix produced by operations that preserve the state
    /// invariants (unitary conjugation, normalised Lüders updates).
    pub(crate) fn new_unchecked(matrix: ComplexMat2) -> Self {
        debug_assert!(matrix.is_hermitian(PIPELINE_TOL));
        debug_assert!((matrix.trace().re - 1.0).abs() <= PIPELINE_TOL);
        debug_assert!(matrix.hermitian_eigenvalues().0 >= -PIPELINE_TOL);
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMat2 {
        &self.matrix
    }

    /// tr(ρ²); equals 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_of_product(&self.matrix).re
    }
}

/// Physical parameters of one model configuration: the initial state angles
/// `theta` and `phi`, the per-step evolution phase `tau`, and the
/// measurement sharpness `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    theta: f64,
    phi: f64,
    tau: f64,
    lambda: f64,
}

impl ModelParams {
    /// Validates `theta ∈ [0, π/2]`, `phi ∈ [0, 2π]`, `tau ≥ 0`, and
    /// `lambda ∈ (0, 1]`.
    pub fn new(theta: f64, phi: f64, tau: f64, lambda: f64) -> Result<Self> {
        check_theta(theta)?;
        check_phi(phi)?;
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::OutOfRange {
                name: "tau",
                value: tau,
                expected: "[0, ∞)",
            });
        }
        check_lambda(lambda)?;
        Ok(Self {
            theta,
            phi,
            tau,
            lambda,
        })
    }

    /// Sharp-measurement (`lambda = 1`) convenience constructor.
    pub fn sharp(theta: f64, phi: f64, tau: f64) -> Result<Self> {
        Self::new(theta, phi, tau, 1.0)
    }

    /// Same point with a different sharpness.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.theta, self.phi, self.tau, lambda)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            expected: "[0, π/2]",
        });
    }
    Ok(())
}

fn check_phi(phi: f64) -> Result<()> {
    if !phi.is_finite() || !(0.0..=2.0 * std::f64::consts::PI).contains(&phi) {
        return Err(Error::OutOfRange {
            name: "phi",
            value: phi,
            expected: "[0, 2π]",
        });
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda <= 0.0 || lambda > 1.0 {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            expected: "(0, 1]",
        });
    }
    Ok(())
}

/// One element of the two-outcome measurement: the effect operator, its PSD
/// square root (cached for Lüders updates), and the outcome it reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Effect {
    operator: ComplexMat2,
    sqrt_operator: ComplexMat2,
    outcome: Outcome,
}

impl Effect {
    /// Validates that `operator` is Hermitian with eigenvalues in [0, 1] and
    /// computes its square root.
    pub fn new(operator: ComplexMat2, outcome: Outcome) -> Result<Self> {
        if !operator.is_hermitian(ALGEBRA_TOL) {
            return Err(Error::InvalidOperator("effect operator is not Hermitian"));
        }
        let (lo, hi) = operator.hermitian_eigenvalues();
        if lo < -ALGEBRA_TOL || hi > 1.0 + ALGEBRA_TOL {
            return Err(Error::InvalidOperator(
                "effect eigenvalues are outside [0, 1]",
            ));
        }
        let sqrt_operator = operator.hermitian_sqrt()?;
        Ok(Self {
            operator,
            sqrt_operator,
            outcome,
        })
    }

    pub fn operator(&self) -> &ComplexMat2 {
        &self.operator
    }

    pub fn sqrt_operator(&self) -> &ComplexMat2 {
        &self.sqrt_operator
    }

    pub fn outcome(&self) -> Outcome {
        self.outcome
    }
}

/// Pure initial state cos(θ)|A⟩ + e^{iφ} sin(θ)|B⟩ as a density matrix.
pub fn initial_state(theta: f64, phi: f64) -> Result<QubitState> {
    check_theta(theta)?;
    check_phi(phi)?;
    let a = Complex64::new(theta.cos(), 0.0);
    let b = Complex64::from_polar(theta.sin(), phi);
    // Outer product |ψ⟩⟨ψ|.
    let matrix = ComplexMat2::new([
        a * a.conj(),
        a * b.conj(),
        b * a.conj(),
        b * b.conj(),
    ]);
    Ok(QubitState::new_unchecked(matrix))
}

/// Oscillation unitary for an evolution phase `tau`:
/// U = cos(τ)·I − i·sin(τ)·(|A⟩⟨B| + |B⟩⟨A|).
///
/// The physically irrelevant global phase is fixed to 1; every probability
/// computed downstream is invariant under it.
pub fn evolution_unitary(tau: f64) -> ComplexMat2 {
    assert!(tau.is_finite(), "evolution phase must be finite");
    let c = Complex64::new(tau.cos(), 0.0);
    let ms = Complex64::new(0.0, -tau.sin());
    ComplexMat2::new([c, ms, ms, c])
}

/// The unsharp two-outcome measurement with sharpness `lambda`:
/// F± = ½(I ± λQ) = diag((1±λ)/2, (1∓λ)/2).
///
/// At `lambda = 1` the effects reduce to the projectors onto |A⟩ and |B⟩.
pub fn effects(lambda: f64) -> Result<(Effect, Effect)> {
    check_lambda(lambda)?;
    let hi = 0.5 * (1.0 + lambda);
    let lo = 0.5 * (1.0 - lambda);
    let plus = Effect {
        operator: ComplexMat2::diagonal(hi, lo),
        sqrt_operator: ComplexMat2::diagonal(hi.sqrt(), lo.sqrt()),
        outcome: Outcome::Plus,
    };
    let minus = Effect {
        operator: ComplexMat2::diagonal(lo, hi),
        sqrt_operator: ComplexMat2::diagonal(lo.sqrt(), hi.sqrt()),
        outcome: Outcome::Minus,
    };
    Ok((plus, minus))
}

/// Generalised Lüders update: returns the outcome probability tr(ρF) and,
/// when that probability exceeds [`NULL_EVENT_THRESHOLD`], the normalised
/// post-measurement state √F ρ √F† / tr(ρF).
///
/// √F is Hermitian, so the adjoint is redundant; it is applied anyway to
/// keep the update in its general form.
pub fn luders_update(state: &QubitState, effect: &Effect) -> (f64, Option<QubitState>) {
    let probability = state
        .matrix()
        .trace_of_product(effect.operator())
        .re
        .clamp(0.0, 1.0);
    if probability <= NULL_EVENT_THRESHOLD {
        return (probability, None);
    }
    let s = effect.sqrt_operator();
    let numerator = (*s * *state.matrix()) * s.adjoint();
    let post = numerator.scale(Complex64::new(1.0 / probability, 0.0));
    (probability, Some(QubitState::new_unchecked(post)))
}

/// Lüders update for callers that require the post-measurement state;
/// fails with [`Error::NullEvent`] on an (almost) impossible outcome.
pub fn luders_update_strict(state: &QubitState, effect: &Effect) -> Result<(f64, QubitState)> {
    match luders_update(state, effect) {
        (p, Some(post)) => Ok((p, post)),
        (p, None) => Err(Error::NullEvent { probability: p }),
    }
}

/// Unitary evolution ρ → U ρ U† over an evolution phase `tau`.
pub fn evolve(state: &QubitState, tau: f64) -> QubitState {
    let u = evolution_unitary(tau);
    QubitState::new_unchecked((u * *state.matrix()) * u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::SplitMix64;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_mat(rng: &mut SplitMix64) -> ComplexMat2 {
        let mut e = [Complex64::default(); 4];
        for x in &mut e {
            *x = c(rng.next_f64() * 2.0 - 1.0, rng.next_f64() * 2.0 - 1.0);
        }
        ComplexMat2::new(e)
    }

    #[test]
    fn matrix_algebra_identities() {
        let mut rng = SplitMix64::new(0xA11CE);
        for _ in 0..200 {
            let (a, b, m) = (random_mat(&mut rng), random_mat(&mut rng), random_mat(&mut rng));
            // Associativity of multiplication.
            assert!(((a * b) * m).max_abs_diff(&(a * (b * m))) < 1e-12);
            // Adjoint of a product reverses order.
            assert!((a * b).adjoint().max_abs_diff(&(b.adjoint() * a.adjoint())) < 1e-12);
            // Trace is linear and cyclic on pairs.
            let lhs = (a + b).trace();
            let rhs = a.trace() + b.trace();
            assert!((lhs - rhs).norm() < 1e-12);
            assert!(((a * b).trace() - (b * a).trace()).norm() < 1e-12);
            assert!((a.trace_of_product(&b) - (a * b).trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn initial_state_matches_hand_expansion() {
        // θ=0 gives |A⟩⟨A| for any φ.
        let rho = initial_state(0.0, 1.3).unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMat2::diagonal(1.0, 0.0)) < 1e-15);

        // θ=π/2, φ=0 gives |B⟩⟨B|.
        let rho = initial_state(FRAC_PI_2, 0.0).unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMat2::diagonal(0.0, 1.0)) < 1e-15);

        // θ=π/4, φ=π/2: diagonal (1/2, 1/2), off-diagonal ∓i/2.
        let rho = initial_state(FRAC_PI_4, FRAC_PI_2).unwrap();
        let expected = ComplexMat2::new([c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.5, 0.0)]);
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn initial_state_is_a_valid_rank_one_projector() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..100 {
            let theta = rng.next_f64() * FRAC_PI_2;
            let phi = rng.next_f64() * 2.0 * PI;
            let rho = initial_state(theta, phi).unwrap();
            assert!(QubitState::new(*rho.matrix()).is_ok());
            assert!((rho.purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_state_rejects_out_of_range_angles() {
        let err = initial_state(2.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { name: "theta", .. }));
        let err = initial_state(0.3, 7.0).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { name: "phi", .. }));
    }

    #[test]
    fn unitary_special_values() {
        assert!(evolution_unitary(0.0).max_abs_diff(&ComplexMat2::identity()) < 1e-15);

        let u = evolution_unitary(FRAC_PI_2);
        let expected =
            ComplexMat2::new([c(0.0, 0.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, 0.0)]);
        assert!(u.max_abs_diff(&expected) < 1e-12);

        let u = evolution_unitary(FRAC_PI_4);
        let h = 0.5_f64.sqrt();
        let expected = ComplexMat2::new([c(h, 0.0), c(0.0, -h), c(0.0, -h), c(h, 0.0)]);
        assert!(u.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn unitary_is_unitary_and_composes() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..100 {
            let tau = (rng.next_f64() - 0.5) * 8.0;
            let u = evolution_unitary(tau);
            assert!((u * u.adjoint()).max_abs_diff(&ComplexMat2::identity()) < 1e-12);
            // Evolving twice by τ equals evolving once by 2τ.
            assert!((u * u).max_abs_diff(&evolution_unitary(2.0 * tau)) < 1e-12);
        }
    }

    #[test]
    fn effects_reduce_to_projectors_at_full_sharpness() {
        let (fp, fm) = effects(1.0).unwrap();
        assert!(fp.operator().max_abs_diff(&ComplexMat2::diagonal(1.0, 0.0)) < 1e-15);
        assert!(fm.operator().max_abs_diff(&ComplexMat2::diagonal(0.0, 1.0)) < 1e-15);
    }

    #[test]
    fn effects_half_sharpness_values() {
        let (fp, _) = effects(0.5).unwrap();
        assert!(fp.operator().max_abs_diff(&ComplexMat2::diagonal(0.75, 0.25)) < 1e-15);
    }

    #[test]
    fn effect_pair_invariants() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..50 {
            let lambda = rng.next_f64().max(1e-6);
            let (fp, fm) = effects(lambda).unwrap();
            let sum = *fp.operator() + *fm.operator();
            assert!(sum.max_abs_diff(&ComplexMat2::identity()) < 1e-12);
            for f in [&fp, &fm] {
                let (lo, hi) = f.operator().hermitian_eigenvalues();
                assert!(lo >= -1e-12 && hi <= 1.0 + 1e-12);
                let squared = *f.sqrt_operator() * *f.sqrt_operator();
                assert!(squared.max_abs_diff(f.operator()) < 1e-12);
                assert!(f.sqrt_operator().hermitian_eigenvalues().0 >= -1e-12);
            }
        }
    }

    #[test]
    fn effects_reject_bad_lambda() {
        assert!(effects(0.0).is_err());
        assert!(effects(1.5).is_err());
        assert!(effects(-0.2).is_err());
    }

    #[test]
    fn general_effect_constructor_computes_sqrt() {
        // Non-diagonal Hermitian PSD operator: ½(I + 0.6·σx).
        let op = ComplexMat2::new([c(0.5, 0.0), c(0.3, 0.0), c(0.3, 0.0), c(0.5, 0.0)]);
        let eff = Effect::new(op, Outcome::Plus).unwrap();
        let squared = *eff.sqrt_operator() * *eff.sqrt_operator();
        assert!(squared.max_abs_diff(&op) < 1e-12);

        // Eigenvalue above 1 is rejected.
        let too_big = ComplexMat2::diagonal(1.2, 0.0);
        assert!(Effect::new(too_big, Outcome::Plus).is_err());
    }

    #[test]
    fn luders_projector_on_own_eigenstate() {
        let rho = initial_state(0.0, 0.0).unwrap();
        let (fp, fm) = effects(1.0).unwrap();
        let (p, post) = luders_update(&rho, &fp);
        assert!((p - 1.0).abs() < 1e-15);
        assert!(post.unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-12);

        let (p, post) = luders_update(&rho, &fm);
        assert!(p.abs() < 1e-15);
        assert!(post.is_none());
        assert!(matches!(
            luders_update_strict(&rho, &fm),
            Err(Error::NullEvent { .. })
        ));
    }

    #[test]
    fn luders_unsharp_hand_evaluation() {
        // ρ = |A⟩⟨A|, F₊(λ=0.8): probability 0.9, post state diag(1, 0).
        let rho = initial_state(0.0, 0.0).unwrap();
        let (fp, _) = effects(0.8).unwrap();
        let (p, post) = luders_update(&rho, &fp);
        assert!((p - 0.9).abs() < 1e-12);
        assert!(
            post.unwrap()
                .matrix()
                .max_abs_diff(&ComplexMat2::diagonal(1.0, 0.0))
                < 1e-12
        );
    }

    #[test]
    fn luders_probabilities_sum_to_one() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..100 {
            let rho = initial_state(rng.next_f64() * FRAC_PI_2, rng.next_f64() * 2.0 * PI).unwrap();
            let rho = evolve(&rho, rng.next_f64() * PI);
            let (fp, fm) = effects(rng.next_f64().max(1e-3)).unwrap();
            let (pp, _) = luders_update(&rho, &fp);
            let (pm, _) = luders_update(&rho, &fm);
            assert!((pp + pm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn evolve_special_cases() {
        let rho = initial_state(0.3, 0.4).unwrap();
        assert!(evolve(&rho, 0.0).matrix().max_abs_diff(rho.matrix()) < 1e-15);

        // Full population transfer |A⟩ → |B⟩ at τ = π/2.
        let a = initial_state(0.0, 0.0).unwrap();
        let b = evolve(&a, FRAC_PI_2);
        assert!(b.matrix().max_abs_diff(&ComplexMat2::diagonal(0.0, 1.0)) < 1e-12);

        // Half transfer at τ = π/4 with off-diagonal ±i/2.
        let half = evolve(&a, FRAC_PI_4);
        let expected = ComplexMat2::new([c(0.5, 0.0), c(0.0, 0.5), c(0.0, -0.5), c(0.5, 0.0)]);
        assert!(half.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn evolve_preserves_state_invariants() {
        let mut rng = SplitMix64::new(21);
        for _ in 0..100 {
            let rho = initial_state(rng.next_f64() * FRAC_PI_2, rng.next_f64() * 2.0 * PI).unwrap();
            let out = evolve(&rho, (rng.next_f64() - 0.5) * 20.0);
            let m = out.matrix();
            assert!(m.is_hermitian(1e-10));
            assert!((m.trace().re - 1.0).abs() < 1e-10);
            assert!(m.hermitian_eigenvalues().0 >= -1e-10);
        }
    }

    #[test]
    fn model_params_validation() {
        assert!(ModelParams::new(0.5, 1.0, 2.0, 0.7).is_ok());
        assert!(matches!(
            ModelParams::new(-0.1, 1.0, 2.0, 0.7),
            Err(Error::OutOfRange { name: "theta", .. })
        ));
        assert!(matches!(
            ModelParams::new(0.5, 1.0, -2.0, 0.7),
            Err(Error::OutOfRange { name: "tau", .. })
        ));
        assert!(matches!(
            ModelParams::new(0.5, 1.0, 2.0, 0.0),
            Err(Error::OutOfRange { name: "lambda", .. })
        ));
    }
}
