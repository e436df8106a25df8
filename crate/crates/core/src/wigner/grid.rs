use std::f64::consts::PI;

use rayon::prelude::*;

use super::{PhaseSpaceFunction, Rotation};
use crate::states::{PhysicalConstants, StateSpec};
use crate::{ComplexAmplitude, Error, Result};

/// Endpoint-inclusive uniform lattice over `[x_min, x_max] × [p_min, p_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub np: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, nx: usize, p_min: f64, p_max: f64, np: usize) -> Result<Self> {
        let bounds = [x_min, x_max, p_min, p_max];
        if bounds.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite bounds {bounds:?}")));
        }
        if !(x_max > x_min && p_max > p_min) {
            return Err(Error::InvalidGrid(format!("zero or negative extent {bounds:?}")));
        }
        if nx < 2 || np < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples per axis, got {nx}×{np}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            nx,
            p_min,
            p_max,
            np,
        })
    }

    /// Square lattice `[−half, half]²` with at most `spacing` between samples.
    pub fn square(half: f64, spacing: f64) -> Result<Self> {
        let n = (2.0 * half / spacing).ceil() as usize + 1;
        Self::new(-half, half, n, -half, half, n)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }

    pub fn len(&self) -> usize {
        self.nx * self.np
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The same lattice translated by `(dx, dp)`.
    pub fn translated(&self, dx: f64, dp: f64) -> Result<Self> {
        Self::new(
            self.x_min + dx,
            self.x_max + dx,
            self.nx,
            self.p_min + dp,
            self.p_max + dp,
            self.np,
        )
    }
}

/// Sampled values, row-major with `x` as the slow index: `values[i·np + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl PhaseSpaceGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.np + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.spec.np..(i + 1) * self.spec.np]
    }

    /// Largest `|W|` on the outer edge of the lattice.
    pub fn boundary_max_abs(&self) -> f64 {
        let (nx, np) = (self.spec.nx, self.spec.np);
        let rows = self.row(0).iter().chain(self.row(nx - 1));
        let cols = (0..nx).flat_map(|i| [self.get(i, 0), self.get(i, np - 1)]);
        rows.copied().chain(cols).map(f64::abs).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    w[0] = 0.5 * h;
    w[n - 1] = 0.5 * h;
    w
}

pub fn eval_grid<S: PhaseSpaceFunction + ?Sized>(source: &S, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
    source.grid(spec)
}

/// Point-by-point evaluation, ignoring any fast path.
pub fn eval_grid_naive<S: PhaseSpaceFunction + ?Sized>(source: &S, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
    pointwise(source, spec)
}

pub(super) fn pointwise<S: PhaseSpaceFunction + ?Sized>(source: &S, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
    let mut values = vec![0.0; spec.len()];
    values.par_chunks_mut(spec.np).enumerate().try_for_each(|(i, row)| {
        let x = spec.x(i);
        for (j, v) in row.iter_mut().enumerate() {
            *v = source.value(x, spec.p(j))?;
        }
        Ok::<_, Error>(())
    })?;
    Ok(PhaseSpaceGrid { spec: *spec, values })
}

/// Each `j ≤ k` pair contributes `E(x_i) · Q(p_j)`, a rank-1 term: `E` is
/// the Gaussian envelope around the pair midpoint and `Q` carries the
/// momentum envelope and the interference phase. The lattice is the sum of
/// these outer products, accumulated in a fixed pair order per sample.
pub(super) fn separable(parts: &[(&StateSpec, f64, Rotation)], spec: &GridSpec) -> Result<PhaseSpaceGrid> {
    let xs: Vec<f64> = (0..spec.nx).map(|i| spec.x(i)).collect();
    let ps: Vec<f64> = (0..spec.np).map(|j| spec.p(j)).collect();
    let neg_ps: Vec<f64> = ps.iter().map(|p| -p).collect();

    let mut row_factors: Vec<Vec<f64>> = Vec::new();
    let mut col_factors: Vec<Vec<f64>> = Vec::new();
    for &(state, weight, rotation) in parts {
        let xi = state.common_xi()?;
        let hbar = state.constants().hbar();
        let comps = state.components();
        for (a_idx, a) in comps.iter().enumerate() {
            for (b_off, b) in comps[a_idx..].iter().enumerate() {
                let mult = if b_off == 0 { 1.0 } else { 2.0 };
                let w = a.coeff.conj() * b.coeff * (mult * weight / (PI * hbar));
                if w == ComplexAmplitude::new(0.0, 0.0) {
                    continue;
                }
                let mid = 0.5 * (a.center + b.center);
                let sep = a.center - b.center;
                let envelope = |x: &f64| {
                    let u = (x - mid) / xi;
                    (-u * u).exp()
                };
                let momentum = |p: &f64| {
                    let v = p * xi / hbar;
                    (w * ComplexAmplitude::from_polar(1.0, p * sep / hbar)).re * (-v * v).exp()
                };
                match rotation {
                    Rotation::Identity => {
                        row_factors.push(xs.iter().map(envelope).collect());
                        col_factors.push(ps.iter().map(momentum).collect());
                    }
                    Rotation::QuarterTurn => {
                        // W(−p, x): the momentum factor runs along x, the envelope along −p
                        row_factors.push(xs.iter().map(momentum).collect());
                        col_factors.push(neg_ps.iter().map(envelope).collect());
                    }
                }
            }
        }
    }

    let mut values = vec![0.0; spec.len()];
    values.par_chunks_mut(spec.np).enumerate().for_each(|(i, row)| {
        for (rf, cf) in row_factors.iter().zip(&col_factors) {
            let r = rf[i];
            if r == 0.0 {
                continue;
            }
            for (v, c) in row.iter_mut().zip(cf) {
                *v += r * c;
            }
        }
    });
    Ok(PhaseSpaceGrid { spec: *spec, values })
}

/// Trapezoidal `∫∫ W dx dp` over the lattice.
pub fn total_integral(grid: &PhaseSpaceGrid) -> f64 {
    let wx = trapezoid_weights(grid.spec.nx, grid.spec.dx());
    let wp = trapezoid_weights(grid.spec.np, grid.spec.dp());
    wx.iter()
        .enumerate()
        .map(|(i, wxi)| wxi * grid.row(i).iter().zip(&wp).map(|(v, w)| v * w).sum::<f64>())
        .sum()
}

/// `∫ W(x, p) dp` for every `x` column of the lattice, which equals `|Ψ(x)|²`.
///
/// The momentum window must reach far enough that the envelope
/// `e^{−p²ξ²/ħ²}` has dropped below `1e-14` at both ends.
pub fn marginal_x(grid: &PhaseSpaceGrid, state: &StateSpec) -> Result<Vec<f64>> {
    let xi = state.common_xi()?;
    let hbar = state.constants().hbar();
    for p in [grid.spec.p_min, grid.spec.p_max] {
        let v = p * xi / hbar;
        let envelope = (-v * v).exp();
        if envelope >= 1e-14 {
            return Err(Error::InsufficientWindow(format!(
                "momentum envelope is {envelope:.3e} at p = {p}; need < 1e-14"
            )));
        }
    }
    let wp = trapezoid_weights(grid.spec.np, grid.spec.dp());
    Ok((0..grid.spec.nx)
        .map(|i| grid.row(i).iter().zip(&wp).map(|(v, w)| v * w).sum())
        .collect())
}

/// Moyal overlap `2πħ ∫∫ W_A W_B dx dp` on a shared lattice.
pub fn overlap(a: &PhaseSpaceGrid, b: &PhaseSpaceGrid, constants: PhysicalConstants) -> Result<f64> {
    if a.spec != b.spec {
        return Err(Error::LatticeMismatch);
    }
    for g in [a, b] {
        let edge = g.boundary_max_abs();
        if edge >= 1e-12 {
            return Err(Error::InsufficientWindow(format!(
                "|W| reaches {edge:.3e} on the lattice boundary; need < 1e-12"
            )));
        }
    }
    let wx = trapezoid_weights(a.spec.nx, a.spec.dx());
    let wp = trapezoid_weights(a.spec.np, a.spec.dp());
    let sum: f64 = wx
        .iter()
        .enumerate()
        .map(|(i, wxi)| {
            wxi * a
                .row(i)
                .iter()
                .zip(b.row(i))
                .zip(&wp)
                .map(|((u, v), w)| u * v * w)
                .sum::<f64>()
        })
        .sum();
    Ok(constants.h() * sum)
}
