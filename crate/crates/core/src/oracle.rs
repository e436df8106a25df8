//! Brute-force Wigner transform by composite Simpson quadrature of
//!
//! ```text
//! W(x, p) = (πħ)^{−1} ∫ ψ*(x+y) ψ(x−y) e^{2ipy/ħ} dy
//! ```
//!
//! Only used to validate the closed-form engine; it is deliberately slow and
//! shares nothing with [`crate::wigner`] beyond the wavefunction.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::states::{eval_psi, StateSpec};
use crate::{ComplexAmplitude, Error, Result};

/// Symmetric window `[−y_halfwidth, y_halfwidth]` split into `n_points` panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub y_halfwidth: f64,
    pub n_points: usize,
}

/// Result of one quadrature, with the imaginary residue kept for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureValue {
    pub value: f64,
    pub imaginary: f64,
}

/// Composite Simpson rule with `panels` (even) intervals on `[a, b]`.
pub fn simpson<F>(f: F, a: f64, b: f64, panels: usize) -> ComplexAmplitude
where
    F: Fn(f64) -> ComplexAmplitude,
{
    assert!(
        panels >= 2 && panels.is_multiple_of(2),
        "Simpson needs an even panel count"
    );
    let h = (b - a) / panels as f64;
    let mut odd = ComplexAmplitude::new(0.0, 0.0);
    let mut even = ComplexAmplitude::new(0.0, 0.0);
    for k in 1..panels {
        let v = f(a + k as f64 * h);
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    (f(a) + f(b) + odd * 4.0 + even * 2.0) * (h / 3.0)
}

fn round_up_even(n: f64) -> usize {
    let n = n.ceil().max(2.0) as usize;
    n + n % 2
}

/// Envelope rate of the Wigner integrand in `y`: the momentum oscillation
/// `2|p|/ħ` plus `2/ξ` for the Gaussian factors.
fn min_panels(y_halfwidth: f64, p: f64, hbar: f64, xi: f64) -> usize {
    let rate = 2.0 * p.abs() / hbar + 2.0 / xi;
    round_up_even(16.0 * y_halfwidth * rate / PI)
}

/// Smallest window whose integrand edge sits `1e-16` below its peak.
fn min_halfwidth(state: &StateSpec, xi: f64) -> f64 {
    state.max_abs_center() + (1e16f64).ln().sqrt() * xi
}

impl QuadratureSpec {
    /// Default for the Wigner integral at momentum `p`: window
    /// `max|center| + 8ξ`, panel count from the resolution criterion.
    pub fn for_wigner(state: &StateSpec, p: f64) -> Result<Self> {
        let xi = state.common_xi()?;
        let y_halfwidth = state.max_abs_center() + 8.0 * xi;
        Ok(Self {
            y_halfwidth,
            n_points: min_panels(y_halfwidth, p, state.constants().hbar(), xi),
        })
    }

    /// Default for `∫|ψ|² dx`.
    pub fn for_norm(state: &StateSpec) -> Result<Self> {
        Self::for_wigner(state, 0.0)
    }

    fn check_panels(&self) -> Result<()> {
        if self.n_points < 2 || !self.n_points.is_multiple_of(2) {
            return Err(Error::Quadrature(format!(
                "panel count must be even and at least 2, got {}",
                self.n_points
            )));
        }
        Ok(())
    }
}

pub fn wigner_quadrature(state: &StateSpec, x: f64, p: f64, quad: QuadratureSpec) -> Result<QuadratureValue> {
    let xi = state.common_xi()?;
    let hbar = state.constants().hbar();
    quad.check_panels()?;
    let needed_window = min_halfwidth(state, xi);
    if quad.y_halfwidth < needed_window {
        return Err(Error::Quadrature(format!(
            "window {} below envelope criterion {needed_window:.6}",
            quad.y_halfwidth
        )));
    }
    let needed_panels = min_panels(quad.y_halfwidth, p, hbar, xi);
    if quad.n_points < needed_panels {
        return Err(Error::Quadrature(format!(
            "{} panels below resolution criterion {needed_panels}",
            quad.n_points
        )));
    }
    let z = wigner_integral(|u| eval_psi(state, u), x, p, hbar, quad);
    Ok(QuadratureValue {
        value: z.re,
        imaginary: z.im,
    })
}

/// The Wigner integral of an arbitrary wavefunction; no window checks.
pub fn wigner_integral<F>(psi: F, x: f64, p: f64, hbar: f64, quad: QuadratureSpec) -> ComplexAmplitude
where
    F: Fn(f64) -> ComplexAmplitude,
{
    let y = quad.y_halfwidth;
    let integrand = |s: f64| psi(x + s).conj() * psi(x - s) * ComplexAmplitude::from_polar(1.0, 2.0 * p * s / hbar);
    simpson(integrand, -y, y, quad.n_points) / (PI * hbar)
}

/// `∫ |ψ(x)|² dx` over `[−y_halfwidth, y_halfwidth]`.
pub fn norm_quadrature(state: &StateSpec, quad: QuadratureSpec) -> Result<f64> {
    let xi = state.common_xi()?;
    quad.check_panels()?;
    let needed = state.max_abs_center() + 8.0 * xi;
    if quad.y_halfwidth < needed {
        return Err(Error::Quadrature(format!(
            "window {} does not cover all components ±8ξ ({needed})",
            quad.y_halfwidth
        )));
    }
    let needed_panels = min_panels(quad.y_halfwidth, 0.0, state.constants().hbar(), xi);
    if quad.n_points < needed_panels {
        return Err(Error::Quadrature(format!(
            "{} panels below resolution criterion {needed_panels}",
            quad.n_points
        )));
    }
    let y = quad.y_halfwidth;
    Ok(simpson(
        |u| ComplexAmplitude::new(eval_psi(state, u).norm_sqr(), 0.0),
        -y,
        y,
        quad.n_points,
    )
    .re)
}

/// `count` phase-space points drawn uniformly from the region where the
/// state lives: `|x| ≤ max|center| + 2ξ`, `|p| ≤ 3ħ/ξ`. Fixed `seed` gives a
/// fixed sequence.
pub fn sample_points(state: &StateSpec, count: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
    let xi = state.common_xi()?;
    let hx = state.max_abs_center() + 2.0 * xi;
    let hp = 3.0 * state.constants().hbar() / xi;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| (rng.random_range(-hx..=hx), rng.random_range(-hp..=hp)))
        .collect())
}
