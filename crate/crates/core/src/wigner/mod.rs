//! Closed-form Wigner distributions of Gaussian superpositions.
//!
//! With the convention `W(x,p) = (πħ)^{−1} ∫ ψ*(x+y) ψ(x−y) e^{2ipy/ħ} dy`,
//! the contribution of the ordered component pair `(a, b)` with common width
//! `ξ` is
//!
//! ```text
//! conj(c_a) c_b / (πħ) · e^{−(x − (x_a + x_b)/2)²/ξ²} · e^{−p²ξ²/ħ²} · e^{ip(x_a − x_b)/ħ}
//! ```
//!
//! This follows by writing `x ± y` relative to the pair midpoint: the
//! product of the two Gaussians factors into `e^{−X²/ξ²} e^{−Y²/ξ²}` with
//! `X = x − (x_a + x_b)/2` and `Y = y − (x_a − x_b)/2`, and the remaining
//! `Y` integral is a Gaussian Fourier transform. Pairs `(a, b)` and `(b, a)`
//! are complex conjugates, so the full sum is real. For a two-component cat
//! the diagonal pairs give `[G(x−Δx,p) + G(x+Δx,p)]/2` and the off-diagonal
//! pairs give `G(x,p) cos(2pΔx/ħ)`.

mod grid;

pub use grid::{eval_grid, eval_grid_naive, marginal_x, overlap, total_integral, GridSpec, PhaseSpaceGrid};

use std::f64::consts::PI;

use crate::states::{GaussianComponent, PhysicalConstants, StateSpec};
use crate::{ComplexAmplitude, Error, Result};

/// Anything that can be evaluated as a real function on phase space.
pub trait PhaseSpaceFunction: Sync {
    fn value(&self, x: f64, p: f64) -> Result<f64>;

    /// Fills a lattice. The default evaluates point by point.
    fn grid(&self, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
        grid::pointwise(self, spec)
    }
}

/// Adapts a closure to [`PhaseSpaceFunction`].
pub struct FnSource<F>(pub F);

impl<F: Fn(f64, f64) -> f64 + Sync> PhaseSpaceFunction for FnSource<F> {
    fn value(&self, x: f64, p: f64) -> Result<f64> {
        Ok((self.0)(x, p))
    }
}

/// Kernel of one ordered pair of components.
pub fn pair_kernel(
    a: &GaussianComponent,
    b: &GaussianComponent,
    x: f64,
    p: f64,
    constants: PhysicalConstants,
) -> Result<ComplexAmplitude> {
    if a.xi != b.xi {
        return Err(Error::MixedWidths(a.xi, b.xi));
    }
    let hbar = constants.hbar();
    let xi = a.xi;
    let u = (x - 0.5 * (a.center + b.center)) / xi;
    let v = p * xi / hbar;
    let envelope = (-u * u - v * v).exp() / (PI * hbar);
    let phase = ComplexAmplitude::from_polar(1.0, p * (a.center - b.center) / hbar);
    Ok(a.coeff.conj() * b.coeff * phase * envelope)
}

/// Real part of the sum over all ordered pairs, computed from the `j ≤ k`
/// half with doubled off-diagonal terms.
pub fn eval_wigner(state: &StateSpec, x: f64, p: f64) -> Result<f64> {
    let xi = state.common_xi()?;
    let hbar = state.constants().hbar();
    let comps = state.components();
    let mut total = 0.0;
    for (j, a) in comps.iter().enumerate() {
        let u = (x - a.center) / xi;
        total += a.coeff.norm_sqr() * (-u * u).exp();
        for b in &comps[j + 1..] {
            let u = (x - 0.5 * (a.center + b.center)) / xi;
            let w = a.coeff.conj() * b.coeff;
            let phase = ComplexAmplitude::from_polar(1.0, p * (a.center - b.center) / hbar);
            total += 2.0 * (w * phase).re * (-u * u).exp();
        }
    }
    let v = p * xi / hbar;
    Ok(total * (-v * v).exp() / (PI * hbar))
}

/// Full ordered-pair sum without using Hermitian symmetry; the imaginary
/// part measures how well the pairs cancel.
pub fn eval_wigner_complex(state: &StateSpec, x: f64, p: f64) -> Result<ComplexAmplitude> {
    let constants = state.constants();
    let mut total = ComplexAmplitude::new(0.0, 0.0);
    for a in state.components() {
        for b in state.components() {
            total += pair_kernel(a, b, x, p, constants)?;
        }
    }
    Ok(total)
}

impl PhaseSpaceFunction for StateSpec {
    fn value(&self, x: f64, p: f64) -> Result<f64> {
        eval_wigner(self, x, p)
    }

    fn grid(&self, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
        grid::separable(&[(self, 1.0, Rotation::Identity)], spec)
    }
}

/// Phase-space rotation applied to the evaluation coordinates of a mixture term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    Identity,
    /// `(x, p) ↦ (−p, x)`.
    QuarterTurn,
}

impl Rotation {
    pub fn apply(self, x: f64, p: f64) -> (f64, f64) {
        match self {
            Rotation::Identity => (x, p),
            Rotation::QuarterTurn => (-p, x),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MixtureTerm {
    pub state: StateSpec,
    pub weight: f64,
    pub rotation: Rotation,
}

/// Incoherent mixture `Σ_t w_t W_t(R_t(x, p))`.
#[derive(Debug, Clone)]
pub struct MixtureSpec {
    terms: Vec<MixtureTerm>,
}

impl MixtureSpec {
    pub fn new(terms: Vec<MixtureTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("mixture has no terms".into()));
        }
        if let Some(t) = terms.iter().find(|t| t.weight.is_nan() || t.weight < 0.0) {
            return Err(Error::InvalidParameter(format!("negative mixture weight {}", t.weight)));
        }
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        for t in &terms {
            t.state.common_xi()?;
        }
        Ok(Self { terms })
    }

    /// `W_+(x,p) = [W(x,p) + W(−p,x)]/2`.
    pub fn cross(state: StateSpec) -> Result<Self> {
        Self::new(vec![
            MixtureTerm {
                state: state.clone(),
                weight: 0.5,
                rotation: Rotation::Identity,
            },
            MixtureTerm {
                state,
                weight: 0.5,
                rotation: Rotation::QuarterTurn,
            },
        ])
    }

    pub fn terms(&self) -> &[MixtureTerm] {
        &self.terms
    }
}

pub fn eval_mixture(mix: &MixtureSpec, x: f64, p: f64) -> Result<f64> {
    let mut total = 0.0;
    for t in &mix.terms {
        let (xr, pr) = t.rotation.apply(x, p);
        total += t.weight * eval_wigner(&t.state, xr, pr)?;
    }
    Ok(total)
}

impl PhaseSpaceFunction for MixtureSpec {
    fn value(&self, x: f64, p: f64) -> Result<f64> {
        eval_mixture(self, x, p)
    }

    fn grid(&self, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
        let parts: Vec<_> = self.terms.iter().map(|t| (&t.state, t.weight, t.rotation)).collect();
        grid::separable(&parts, spec)
    }
}

/// Either a pure state or a mixture; convenient for callers that accept both.
#[derive(Debug, Clone)]
pub enum Source {
    Pure(StateSpec),
    Mixed(MixtureSpec),
}

impl Source {
    /// The pure state underlying the source (the first term of a mixture).
    pub fn base_state(&self) -> &StateSpec {
        match self {
            Source::Pure(s) => s,
            Source::Mixed(m) => &m.terms[0].state,
        }
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.base_state().constants()
    }

    /// Half-widths `(x, p)` of a window outside which `|W|` is below `e^{−64}`
    /// of its scale.
    pub fn support_halfwidths(&self) -> (f64, f64) {
        let half = |s: &StateSpec| {
            let xi = s.components()[0].xi;
            let hbar = s.constants().hbar();
            (s.max_abs_center() + 8.0 * xi, 8.0 * hbar / xi)
        };
        match self {
            Source::Pure(s) => half(s),
            Source::Mixed(m) => m.terms.iter().fold((0.0f64, 0.0f64), |(hx, hp), t| {
                let (sx, sp) = half(&t.state);
                match t.rotation {
                    Rotation::Identity => (hx.max(sx), hp.max(sp)),
                    Rotation::QuarterTurn => (hx.max(sp), hp.max(sx)),
                }
            }),
        }
    }
}

impl PhaseSpaceFunction for Source {
    fn value(&self, x: f64, p: f64) -> Result<f64> {
        match self {
            Source::Pure(s) => s.value(x, p),
            Source::Mixed(m) => m.value(x, p),
        }
    }

    fn grid(&self, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
        match self {
            Source::Pure(s) => s.grid(spec),
            Source::Mixed(m) => m.grid(spec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{build_cat, build_psi, Normalization};
    use crate::superosc::SuperoscParams;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn g(x: f64, p: f64, xi: f64) -> f64 {
        (-x * x / (xi * xi) - p * p * xi * xi).exp() / PI
    }

    fn single(center: f64, xi: f64) -> StateSpec {
        StateSpec::new(
            vec![GaussianComponent::new(center, xi, ComplexAmplitude::new(1.0, 0.0)).unwrap()],
            PhysicalConstants::atomic(),
        )
        .unwrap()
    }

    #[test]
    fn single_gaussian_peak() {
        let s = single(0.0, 1.0);
        let c = s.components()[0];
        let k = pair_kernel(&c, &c, 0.0, 0.0, PhysicalConstants::atomic()).unwrap();
        assert_eq!(k, ComplexAmplitude::new(1.0 / PI, 0.0));
        for &(x, p) in &[(0.3, -0.7), (1.5, 2.0), (-0.2, 0.1)] {
            let w = eval_wigner(&single(0.0, 0.5), x, p).unwrap();
            assert!((w - g(x, p, 0.5)).abs() < 1e-16);
        }
    }

    #[test]
    fn kernel_is_hermitian() {
        let a = GaussianComponent::new(-1.3, 0.7, ComplexAmplitude::new(0.3, -0.4)).unwrap();
        let b = GaussianComponent::new(2.1, 0.7, ComplexAmplitude::new(-0.1, 0.9)).unwrap();
        let c = PhysicalConstants::new(0.8).unwrap();
        for &(x, p) in &[(0.0, 0.0), (0.4, 1.9), (-2.0, -0.3)] {
            let ab = pair_kernel(&a, &b, x, p, c).unwrap();
            let ba = pair_kernel(&b, &a, x, p, c).unwrap();
            assert_eq!(ab, ba.conj());
        }
    }

    #[test]
    fn kernel_rejects_mixed_widths() {
        let a = GaussianComponent::new(0.0, 1.0, ComplexAmplitude::new(1.0, 0.0)).unwrap();
        let b = GaussianComponent::new(0.0, 2.0, ComplexAmplitude::new(1.0, 0.0)).unwrap();
        assert!(pair_kernel(&a, &b, 0.0, 0.0, PhysicalConstants::atomic()).is_err());
    }

    #[test]
    fn cat_pair_sum_reproduces_three_terms() {
        let w = ComplexAmplitude::new(FRAC_1_SQRT_2, 0.0);
        let cat = StateSpec::new(
            vec![
                GaussianComponent::new(-3.0, 1.0, w).unwrap(),
                GaussianComponent::new(3.0, 1.0, w).unwrap(),
            ],
            PhysicalConstants::atomic(),
        )
        .unwrap();
        for &p in &[0.0, 0.1, PI / 6.0, -0.77] {
            let expected = 0.5 * (g(-3.0, p, 1.0) + g(3.0, p, 1.0)) + g(0.0, p, 1.0) * (6.0 * p).cos();
            let got = eval_wigner(&cat, 0.0, p).unwrap();
            assert!((got - expected).abs() <= 1e-15, "p={p}");
        }
    }

    #[test]
    fn hermitian_half_sum_matches_full_sum() {
        let p = SuperoscParams::new(8, 10.0).unwrap();
        let psi = build_psi(p, 3.0, 0.25, PhysicalConstants::atomic(), Normalization::Unit).unwrap();
        for &(x, pp) in &[(0.0, 0.0), (0.01, 0.3), (3.1, -2.2), (-5.9, 0.05)] {
            let half = eval_wigner(&psi, x, pp).unwrap();
            let full = eval_wigner_complex(&psi, x, pp).unwrap();
            assert!((half - full.re).abs() <= 1e-13, "{half} {}", full.re);
            assert!(full.im.abs() <= 1e-12 * half.abs().max(1.0));
        }
    }

    #[test]
    fn mixture_of_one_term_is_the_state() {
        let cat = build_cat(3.0, 1.0, PhysicalConstants::atomic()).unwrap();
        let mix = MixtureSpec::new(vec![MixtureTerm {
            state: cat.clone(),
            weight: 1.0,
            rotation: Rotation::Identity,
        }])
        .unwrap();
        for &(x, p) in &[(0.2, 0.4), (-3.0, 1.0)] {
            assert_eq!(eval_mixture(&mix, x, p).unwrap(), eval_wigner(&cat, x, p).unwrap());
        }
    }

    #[test]
    fn mixture_weights_validated() {
        let cat = build_cat(3.0, 1.0, PhysicalConstants::atomic()).unwrap();
        let term = |w| MixtureTerm {
            state: cat.clone(),
            weight: w,
            rotation: Rotation::Identity,
        };
        assert!(MixtureSpec::new(vec![term(0.5)]).is_err());
        assert!(MixtureSpec::new(vec![term(1.5), term(-0.5)]).is_err());
        assert!(MixtureSpec::new(vec![]).is_err());
    }

    #[test]
    fn cross_state_symmetries() {
        let p = SuperoscParams::new(4, 6.0).unwrap();
        let psi = build_psi(p, 6.0, 1.0, PhysicalConstants::atomic(), Normalization::Unit).unwrap();
        let cross = MixtureSpec::cross(psi.clone()).unwrap();
        // ψ(−x) = ψ*(x), so W_Ψ is even in x and W₊ is symmetric about the diagonal
        for &(x, pp) in &[(0.0, 0.0), (1.3, -0.4), (12.0, 0.5), (-6.2, 5.9)] {
            let w = eval_wigner(&psi, x, pp).unwrap();
            assert!((w - eval_wigner(&psi, -x, pp).unwrap()).abs() <= 1e-15);
            let a = eval_mixture(&cross, x, pp).unwrap();
            let b = eval_mixture(&cross, pp, x).unwrap();
            assert!((a - b).abs() <= 1e-15, "{a} {b}");
        }
        // W_Ψ is not even in p, so a quarter turn does not map W₊ onto itself
        let a = eval_mixture(&cross, 1.3, -0.4).unwrap();
        let b = eval_mixture(&cross, 0.4, 1.3).unwrap();
        assert!((a - b).abs() > 1e-3);
    }

    #[test]
    fn quarter_turn_four_times_is_identity() {
        for &(x, p) in &[(0.3, -1.7), (1e-300, 5.0), (-2.5, 0.0)] {
            let mut q = (x, p);
            for _ in 0..4 {
                q = Rotation::QuarterTurn.apply(q.0, q.1);
            }
            assert_eq!(q, (x, p));
        }
    }
}
