//! Hand-derived closed-form reference expressions for the two-level
//! oscillation model. These are computed independently of the propagation
//! engine (direct trigonometric forms) and serve as oracles for it.

#![allow(dead_code)]

/// Sharp (λ = 1) value of the three-term combination
/// P(2+, 3−) − P(1+, 2+) − P(1−, 3−)
/// as an explicit trigonometric function of the state and evolution
/// parameters.
pub fn sharp_three_term(theta: f64, phi: f64, tau: f64) -> f64 {
    0.5 * (2.0 * theta).sin() * tau.sin().powi(2) * (2.0 * tau).sin() * phi.sin()
        + theta.cos().powi(2) * (2.0 * tau).cos() * tau.sin().powi(2)
        + tau.sin().powi(4)
        - theta.cos().powi(2) * tau.cos().powi(2)
        - theta.sin().powi(2) * (2.0 * tau).cos().powi(2)
}

/// Unsharp generalisation of [`sharp_three_term`]; reduces to it at λ = 1.
pub fn unsharp_three_term(theta: f64, phi: f64, tau: f64, lambda: f64) -> f64 {
    let s2t = (2.0 * theta).sin();
    let c2t = (2.0 * theta).cos();
    let s2tau = (2.0 * tau).sin();
    let c2tau = (2.0 * tau).cos();
    let root = (1.0 - lambda * lambda).max(0.0).sqrt();
    0.25
        * (2.0 * lambda
            * tau.sin().powi(2)
            * (c2t * c2tau + s2t * s2tau * phi.sin() + c2t)
            - 2.0 * lambda * s2tau.powi(2) * c2t
            + lambda
                * root
                * s2tau
                * (s2tau * c2t + c2tau * s2t * phi.sin() - s2t * phi.sin())
            - 2.0 * lambda * lambda * c2tau
            - lambda * lambda * (4.0 * tau).cos()
            - 1.0)
}

/// The rounded-coefficient sharpness profile of the three-term combination
/// at the reported optimum (θ = 1.0666, φ = π/2, τ = 1.0083):
/// 0.3816·λ·(1 − √(1−λ²)) + 0.3726·λ² − 0.25.
pub fn printed_sharpness_profile(lambda: f64) -> f64 {
    0.3816 * lambda * (1.0 - (1.0 - lambda * lambda).max(0.0).sqrt()) + 0.3726 * lambda * lambda
        - 0.25
}

/// Analytic partial derivatives (∂/∂τ, ∂/∂θ) of [`sharp_three_term`] with
/// sin φ = ±1.
pub fn sharp_three_term_gradient(theta: f64, tau: f64, sin_phi: f64) -> (f64, f64) {
    let d_tau = (2.0 * theta).sin()
        * sin_phi
        * (tau.sin().powi(2) * (2.0 * tau).cos() + 0.5 * (2.0 * tau).sin().powi(2))
        + 2.0 * (2.0 * tau).sin() * tau.cos().powi(2)
        + theta.sin().powi(2) * (4.0 * tau).sin();
    let d_theta = (2.0 * theta).cos() * tau.sin().powi(2) * (2.0 * tau).sin() * sin_phi
        + 0.5 * (2.0 * theta).sin() * (2.0 * tau).sin().powi(2);
    (d_tau, d_theta)
}

/// Closed form of the no-signalling-in-time residual:
/// ½·λ·sin(2τ)·sin(2θ)·sin(φ)·(1 − √(1−λ²)).
pub fn nsit_closed_form(theta: f64, phi: f64, tau: f64, lambda: f64) -> f64 {
    0.5 * lambda
        * (2.0 * tau).sin()
        * (2.0 * theta).sin()
        * phi.sin()
        * (1.0 - (1.0 - lambda * lambda).max(0.0).sqrt())
}

/// Sharp two-time joint P(1+, 2+) = cos²(θ)·cos²(τ).
pub fn sharp_adjacent_joint(theta: f64, tau: f64) -> f64 {
    theta.cos().powi(2) * tau.cos().powi(2)
}

/// The n-term correlator chain in closed form:
/// λ²·((n−1)·cos(2τ) − cos(2(n−1)τ)).
pub fn chain_closed_form(n: usize, tau: f64, lambda: f64) -> f64 {
    lambda * lambda * ((n as f64 - 1.0) * (2.0 * tau).cos() - (2.0 * (n as f64 - 1.0) * tau).cos())
}
