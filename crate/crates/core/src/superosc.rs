//! The superoscillating function `f(x) = (cos x + iα sin x)^N`.
//!
//! `f` is band limited to frequencies in `[−N, N]`, yet near the origin it
//! oscillates like `e^{iNαx}`. Its Fourier coefficients `C_j` are computed
//! exactly (see [`crate::exact`]) and rounded to `f64` only for storage, so
//! the sum identities hold to the last bit and the Fourier form can be
//! evaluated without the catastrophic cancellation of the `α^N`-sized terms.

use num_bigint::BigInt;

use crate::exact::{self, DyadicCoefficients};
use crate::{ComplexAmplitude, Error, Result};

/// Exponent `N` (even, ≥ 2) and superoscillation strength `α ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperoscParams {
    n: u32,
    alpha: f64,
}

impl SuperoscParams {
    pub fn new(n: u32, alpha: f64) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "N must be even and at least 2, got {n}"
            )));
        }
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite and at least 1, got {alpha}"
            )));
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn half_n(&self) -> usize {
        (self.n / 2) as usize
    }
}

/// Fourier coefficients `C_0..C_N`, paired weights `D_0..D_{N/2}` and
/// amplitudes `K_0..K_{N/2}`.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    params: SuperoscParams,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub k: Vec<f64>,
    exact_c: DyadicCoefficients,
    exact_d: Vec<BigInt>,
}

impl CoeffTable {
    pub fn params(&self) -> SuperoscParams {
        self.params
    }

    /// `Σ C_j`, summed exactly and then rounded.
    pub fn sum_c(&self) -> f64 {
        let s: BigInt = self.exact_c.numerators.iter().sum();
        exact::scaled_to_f64(&s, self.exact_c.shift as i64)
    }

    /// `Σ D_l`, summed exactly and then rounded.
    pub fn sum_d(&self) -> f64 {
        let s: BigInt = self.exact_d.iter().sum();
        exact::scaled_to_f64(&s, self.exact_c.shift as i64)
    }

    /// Base-2 logarithm of `Σ |C_j|` (equal to `N log2 α`).
    fn log2_abs_sum(&self) -> f64 {
        let s: BigInt = self.exact_c.numerators.iter().map(num_traits::Signed::abs).sum();
        exact::log2_magnitude(&s, self.exact_c.shift as i64)
    }
}

pub fn fourier_coeffs(params: SuperoscParams) -> Result<CoeffTable> {
    let exact_c = exact::fourier_numerators(params.n, params.alpha);
    let shift = exact_c.shift as i64;
    let half = params.half_n();

    let max_log2 = exact_c
        .numerators
        .iter()
        .map(|n| exact::log2_magnitude(n, shift))
        .fold(f64::NEG_INFINITY, f64::max);
    if max_log2 >= 1024.0 {
        return Err(Error::CoefficientOverflow {
            log2_magnitude: max_log2,
        });
    }

    let nums = &exact_c.numerators;
    let exact_d: Vec<BigInt> = (0..=half)
        .map(|j| {
            if j == 0 {
                nums[half].clone()
            } else {
                &nums[half + j] + &nums[half - j]
            }
        })
        .collect();

    let c: Vec<f64> = nums.iter().map(|n| exact::scaled_to_f64(n, shift)).collect();
    let d: Vec<f64> = exact_d.iter().map(|n| exact::scaled_to_f64(n, shift)).collect();
    if let Some(bad) = d.iter().find(|v| !v.is_finite()) {
        return Err(Error::CoefficientOverflow {
            log2_magnitude: bad.abs().log2(),
        });
    }

    let mut table = CoeffTable {
        params,
        c,
        d,
        k: Vec::new(),
        exact_c,
        exact_d,
    };
    let d_sum = table.sum_d();
    assert!(
        (d_sum - 1.0).abs() <= 1e-12,
        "paired weights sum to {d_sum}, expected 1"
    );
    table.k = table.d.iter().map(|&dj| (dj.abs() / d_sum).sqrt()).collect();
    Ok(table)
}

/// `(cos x + iα sin x)^N` by exponentiation by squaring.
pub fn eval_f_direct(params: SuperoscParams, x: f64) -> ComplexAmplitude {
    let base = ComplexAmplitude::new(x.cos(), params.alpha * x.sin());
    let mut result = ComplexAmplitude::new(1.0, 0.0);
    let mut b = base;
    let mut e = params.n;
    while e > 0 {
        if e & 1 == 1 {
            result *= b;
        }
        b *= b;
        e >>= 1;
    }
    result
}

/// `Σ_j C_j e^{i(N−2j)x}`.
///
/// The sum is carried out in fixed point with enough bits to absorb the
/// cancellation between terms of size up to `α^N`, so the result agrees with
/// [`eval_f_direct`] to double precision relative to `max(1, |f(x)|)`.
pub fn eval_f_fourier(table: &CoeffTable, params: SuperoscParams, x: f64) -> Result<ComplexAmplitude> {
    if table.params != params {
        return Err(Error::TableMismatch {
            table_n: table.params.n,
            table_alpha: table.params.alpha,
            n: params.n,
            alpha: params.alpha,
        });
    }
    let guard = 96 + (params.n as f64 + 1.0).log2().ceil() as u64;
    let bits = table.log2_abs_sum().max(0.0).ceil() as u64 + guard;
    let (re, im) = exact::fourier_sum(&table.exact_c, x, bits);
    Ok(ComplexAmplitude::new(re, im))
}

/// Gaussian factor used by [`local_expansion`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Envelope {
    /// `e^{Nα²x²/2}`.
    #[default]
    Printed,
    /// `e^{N(α²−1)x²/2}`, the full second-order term of `N ln(cos x + iα sin x)`.
    SecondOrder,
}

/// Local plane-wave form of `f` near the origin: `e^{iNαx}` times a Gaussian
/// envelope. Only meaningful for `|x| ≲ 1/(α√N)`.
pub fn local_expansion(params: SuperoscParams, x: f64, envelope: Envelope) -> ComplexAmplitude {
    let n = params.n as f64;
    let a2 = params.alpha * params.alpha;
    let growth = match envelope {
        Envelope::Printed => n * a2 * x * x / 2.0,
        Envelope::SecondOrder => n * (a2 - 1.0) * x * x / 2.0,
    };
    ComplexAmplitude::from_polar(growth.exp(), n * params.alpha * x)
}

/// Finite-difference step used by [`phase_gradient`].
pub const PHASE_STEP: f64 = 1e-6;

/// Local phase gradient `d arg f / dx` at `x` by central differences.
pub fn phase_gradient(params: SuperoscParams, x: f64) -> f64 {
    let fwd = eval_f_direct(params, x + PHASE_STEP);
    let bwd = eval_f_direct(params, x - PHASE_STEP);
    (fwd * bwd.conj()).arg() / (2.0 * PHASE_STEP)
}
