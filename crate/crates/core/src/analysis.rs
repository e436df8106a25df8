//! Phase-space structure scales.
//!
//! The Zurek scale `a_Z = (h/P)(h/L)` is the generic smallest structure of a
//! state spread over `L × P`. Superoscillating states show fringes `α` times
//! finer near the origin, so the measured patch area is `a_Z/α²`. The factor
//! is recovered from zero crossings of `W` along a cut through the origin.

use std::f64::consts::PI;
use std::fmt;
use std::fmt::Write as _;

use crate::states::{PhysicalConstants, StateSpec};
use crate::wigner::{eval_wigner, overlap, GridSpec, PhaseSpaceFunction, PhaseSpaceGrid};
use crate::{ComplexAmplitude, Error, Result};

/// Overspill is considered negligible below this ratio.
pub const OVERSPILL_LIMIT: f64 = 1e-3;

/// Samples per finest fringe required along a crossing cut.
pub const CUT_SAMPLES_PER_FRINGE: f64 = 64.0;

pub fn zurek_scale(l: f64, p: f64, constants: PhysicalConstants) -> Result<f64> {
    if !(l > 0.0 && p > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "extents must be positive, got L={l}, P={p}"
        )));
    }
    let h = constants.h();
    Ok((h / p) * (h / l))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutAxis {
    /// `W(0, p)`.
    MomentumAtOrigin,
    /// `W(x, 0)`.
    PositionAtOrigin,
}

/// Number of cut samples giving [`CUT_SAMPLES_PER_FRINGE`] per `fringe`.
pub fn cut_samples(width: f64, fringe: f64) -> usize {
    (CUT_SAMPLES_PER_FRINGE * width / fringe).ceil() as usize + 1
}

/// Sign changes of `values` sampled at `coords`, located by linear
/// interpolation. A run of exact zeros between opposite signs counts once, at
/// its middle.
pub fn zero_crossings(coords: &[f64], values: &[f64]) -> Vec<f64> {
    assert_eq!(coords.len(), values.len());
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        if let Some(k) = last {
            let u = values[k];
            if u.signum() != v.signum() {
                if k + 1 == i {
                    let t = u / (u - v);
                    out.push(coords[k] + t * (coords[i] - coords[k]));
                } else {
                    out.push(0.5 * (coords[k + 1] + coords[i - 1]));
                }
            }
        }
        last = Some(i);
    }
    out
}

/// Zero crossings of `W` along a cut of total `width` centred on the origin.
pub fn central_cut_crossings<S: PhaseSpaceFunction + ?Sized>(
    source: &S,
    axis: CutAxis,
    width: f64,
    samples: usize,
) -> Result<Vec<f64>> {
    if width.is_nan() || width <= 0.0 || samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "cut needs positive width and ≥ 2 samples, got {width} and {samples}"
        )));
    }
    let coords: Vec<f64> = (0..samples)
        .map(|k| -0.5 * width + k as f64 * width / (samples - 1) as f64)
        .collect();
    let values = coords
        .iter()
        .map(|&t| match axis {
            CutAxis::MomentumAtOrigin => source.value(0.0, t),
            CutAxis::PositionAtOrigin => source.value(t, 0.0),
        })
        .collect::<Result<Vec<_>>>()?;
    let crossings = zero_crossings(&coords, &values);
    if crossings.len() < 2 {
        return Err(Error::InsufficientCrossings {
            found: crossings.len(),
            required: 2,
        });
    }
    Ok(crossings)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleReport {
    pub l: f64,
    pub p: f64,
    pub a_z: f64,
    pub alpha_est: f64,
    pub a_so_est: f64,
    pub crossing_spacings: Vec<f64>,
    pub overspill_lhs: Option<f64>,
    pub overspill_rhs: Option<f64>,
}

impl ScaleReport {
    pub fn overspill_ratio(&self) -> Option<f64> {
        Some(self.overspill_lhs? / self.overspill_rhs?)
    }

    /// `key = value` lines with 17 significant digits.
    pub fn to_text(&self) -> String {
        let num = |v: f64| format!("{v:.16e}");
        let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), num);
        let mut out = String::new();
        writeln!(out, "L = {}", num(self.l)).unwrap();
        writeln!(out, "P = {}", num(self.p)).unwrap();
        writeln!(out, "a_Z = {}", num(self.a_z)).unwrap();
        writeln!(out, "alpha_est = {}", num(self.alpha_est)).unwrap();
        writeln!(out, "a_SO_est = {}", num(self.a_so_est)).unwrap();
        let spacings: Vec<String> = self.crossing_spacings.iter().map(|&s| num(s)).collect();
        writeln!(out, "crossing_spacings = {}", spacings.join(" ")).unwrap();
        writeln!(out, "overspill_lhs = {}", opt(self.overspill_lhs)).unwrap();
        writeln!(out, "overspill_rhs = {}", opt(self.overspill_rhs)).unwrap();
        out
    }
}

impl fmt::Display for ScaleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<22}{:>14.6}", "L", self.l)?;
        writeln!(f, "{:<22}{:>14.6}", "P", self.p)?;
        writeln!(f, "{:<22}{:>14.6e}", "a_Z", self.a_z)?;
        writeln!(f, "{:<22}{:>14.6}", "alpha_est", self.alpha_est)?;
        writeln!(f, "{:<22}{:>14.6e}", "a_SO_est", self.a_so_est)?;
        writeln!(f, "{:<22}{:>14.6}", "a_Z / a_SO_est", self.a_z / self.a_so_est)?;
        let min = self.crossing_spacings.iter().copied().fold(f64::INFINITY, f64::min);
        writeln!(f, "{:<22}{:>14.6e}", "smallest spacing", min)?;
        match self.overspill_ratio() {
            Some(r) => write!(f, "{:<22}{:>14.6e}", "overspill ratio", r),
            None => write!(f, "{:<22}{:>14}", "overspill ratio", "skipped"),
        }
    }
}

/// Scale report from the crossings of a cut through the origin.
///
/// `alpha_est = (h/2L) / s_min` where `s_min` is the smallest spacing between
/// consecutive crossings, and `a_SO_est = (h/(L α_est)) (h/(P α_est))`.
pub fn superosc_scale(crossings: &[f64], l: f64, p: f64, constants: PhysicalConstants) -> Result<ScaleReport> {
    if crossings.len() < 2 {
        return Err(Error::InsufficientCrossings {
            found: crossings.len(),
            required: 2,
        });
    }
    let a_z = zurek_scale(l, p, constants)?;
    let spacings: Vec<f64> = crossings.windows(2).map(|w| w[1] - w[0]).collect();
    if let Some(bad) = spacings.iter().find(|s| s.is_nan() || **s <= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "crossings must be strictly increasing (spacing {bad})"
        )));
    }
    let smallest = spacings.iter().copied().fold(f64::INFINITY, f64::min);
    let h = constants.h();
    let alpha_est = (h / (2.0 * l)) / smallest;
    Ok(ScaleReport {
        l,
        p,
        a_z,
        alpha_est,
        a_so_est: (h / (l * alpha_est)) * (h / (p * alpha_est)),
        crossing_spacings: spacings,
        overspill_lhs: None,
        overspill_rhs: None,
    })
}

/// Cuts `W(0, p)` over two Zurek lengths `2h/L`, sampled for an expected
/// factor `expected_alpha`, and builds the report with `P = L`.
pub fn measure_scales(state: &StateSpec, l: f64, expected_alpha: f64) -> Result<ScaleReport> {
    let constants = state.constants();
    let h = constants.h();
    let width = 2.0 * h / l;
    let fringe = h / (2.0 * l * expected_alpha.max(1.0));
    let crossings = central_cut_crossings(state, CutAxis::MomentumAtOrigin, width, cut_samples(width, fringe))?;
    superosc_scale(&crossings, l, l, constants)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverspillReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub satisfied: bool,
}

/// Compares the Wigner weight of the two components adjacent to the central
/// one, evaluated at the origin, with `|W_Ψ(0,0)|`.
pub fn overspill_check(state: &StateSpec) -> Result<OverspillReport> {
    let xi = state.common_xi()?;
    let hbar = state.constants().hbar();
    let comps = state.components();
    if !comps.iter().any(|c| c.center == 0.0) {
        return Err(Error::InvalidParameter("overspill needs a central component".into()));
    }
    let left = comps
        .iter()
        .filter(|c| c.center < 0.0)
        .max_by(|a, b| a.center.total_cmp(&b.center));
    let right = comps
        .iter()
        .filter(|c| c.center > 0.0)
        .min_by(|a, b| a.center.total_cmp(&b.center));
    let (Some(left), Some(right)) = (left, right) else {
        return Err(Error::InvalidParameter(
            "overspill needs components on both sides of the origin".into(),
        ));
    };
    let self_wigner_at_origin = |c: &crate::states::GaussianComponent| {
        let u = c.center / xi;
        c.coeff.norm_sqr() * (-u * u).exp() / (PI * hbar)
    };
    let lhs = self_wigner_at_origin(left) + self_wigner_at_origin(right);
    let rhs = eval_wigner(state, 0.0, 0.0)?.abs();
    if rhs < 1e-280 {
        return Err(Error::Indeterminate(format!(
            "|W(0,0)| = {rhs:e} is below the numerical floor"
        )));
    }
    let ratio = lhs / rhs;
    let satisfied = ratio < OVERSPILL_LIMIT;
    if !satisfied {
        log::warn!(
            "overspill condition violated: neighbours contribute {lhs:.3e} against |W(0,0)| = {rhs:.3e} (ratio {ratio:.3e})"
        );
    }
    Ok(OverspillReport {
        lhs,
        rhs,
        ratio,
        satisfied,
    })
}

/// `O(δ) = overlap(W, W(· − δ)) / overlap(W, W)`, with the shifted copy
/// evaluated on a translated lattice.
pub fn displacement_sensitivity<S: PhaseSpaceFunction + ?Sized>(
    source: &S,
    delta_x: f64,
    delta_p: f64,
    grid: &GridSpec,
    constants: PhysicalConstants,
) -> Result<f64> {
    let base = source.grid(grid)?;
    let norm = overlap(&base, &base, constants)?;
    shifted_overlap(source, &base, norm, delta_x, delta_p, constants)
}

fn shifted_overlap<S: PhaseSpaceFunction + ?Sized>(
    source: &S,
    base: &PhaseSpaceGrid,
    norm: f64,
    delta_x: f64,
    delta_p: f64,
    constants: PhysicalConstants,
) -> Result<f64> {
    let moved = source.grid(&base.spec.translated(-delta_x, -delta_p)?)?;
    let moved = PhaseSpaceGrid {
        spec: base.spec,
        values: moved.values,
    };
    Ok(overlap(base, &moved, constants)? / norm)
}

/// Smallest displacement along `direction` (normalized internally) at which
/// `O(δ)` first falls to 1/2. Scans in steps of `step` up to `max`, then bisects.
pub fn half_overlap_displacement<S: PhaseSpaceFunction + ?Sized>(
    source: &S,
    direction: (f64, f64),
    grid: &GridSpec,
    constants: PhysicalConstants,
    step: f64,
    max: f64,
) -> Result<f64> {
    let len = direction.0.hypot(direction.1);
    if !(len > 0.0 && step > 0.0 && max > step) {
        return Err(Error::InvalidParameter(
            "need a non-zero direction and 0 < step < max".into(),
        ));
    }
    let (ux, up) = (direction.0 / len, direction.1 / len);
    let base = source.grid(grid)?;
    let norm = overlap(&base, &base, constants)?;
    let o = |d: f64| shifted_overlap(source, &base, norm, d * ux, d * up, constants);

    let mut lo = 0.0;
    let mut hi = None;
    let mut d = step;
    while d <= max {
        if o(d)? <= 0.5 {
            hi = Some(d);
            break;
        }
        lo = d;
        d += step;
    }
    let mut hi = hi.ok_or_else(|| Error::InsufficientWindow(format!("overlap stays above 1/2 up to δ = {max}")))?;
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if o(mid)? <= 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Square-cell lattice over `[−half_x, half_x] × [−half_p, half_p]` for
/// overlap integrals. `extent` bounds the component separations in both
/// directions, so a product of two distributions oscillates at most at
/// `2·extent/ħ`; the spacing is two thirds of the matching Nyquist step, and
/// at most a fifth of either Gaussian width.
pub fn overlap_lattice(
    half_x: f64,
    half_p: f64,
    extent: f64,
    xi: f64,
    constants: PhysicalConstants,
) -> Result<GridSpec> {
    let hbar = constants.hbar();
    let spacing = (xi / 5.0).min(hbar / (5.0 * xi)).min(PI * hbar / (3.0 * extent));
    let count = |half: f64| 2 * (half / spacing).ceil() as usize + 1;
    let (nx, np) = (count(half_x), count(half_p));
    let (hx, hp) = (0.5 * (nx - 1) as f64 * spacing, 0.5 * (np - 1) as f64 * spacing);
    GridSpec::new(-hx, hx, nx, -hp, hp, np)
}

/// Zurek's compass state: a coherent superposition of four Gaussians of
/// width `ξ` at `(±L/2, 0)` and `(0, ±P/2)` in phase space. Used as the
/// non-superoscillating reference for displacement sensitivity.
#[derive(Debug, Clone)]
pub struct CompassState {
    points: [(f64, f64); 4],
    coeff: f64,
    xi: f64,
    constants: PhysicalConstants,
}

impl CompassState {
    pub fn new(l: f64, p: f64, xi: f64, constants: PhysicalConstants) -> Result<Self> {
        if !(l > 0.0 && p > 0.0 && xi > 0.0) {
            return Err(Error::InvalidParameter("compass needs positive L, P and xi".into()));
        }
        let points = [(-0.5 * l, 0.0), (0.5 * l, 0.0), (0.0, -0.5 * p), (0.0, 0.5 * p)];
        let mut compass = Self {
            points,
            coeff: 1.0,
            xi,
            constants,
        };
        let mut norm = 0.0;
        for a in &points {
            for b in &points {
                norm += compass.inner(*a, *b).re;
            }
        }
        compass.coeff = norm.sqrt().recip();
        Ok(compass)
    }

    /// `⟨g_a|g_b⟩` for `g_k(u) = S(u − x_k) e^{i p_k u/ħ}`.
    fn inner(&self, a: (f64, f64), b: (f64, f64)) -> ComplexAmplitude {
        let hbar = self.constants.hbar();
        let (dx, dp) = (a.0 - b.0, b.1 - a.1);
        let mag = (-dx * dx / (4.0 * self.xi * self.xi) - dp * dp * self.xi * self.xi / (4.0 * hbar * hbar)).exp();
        ComplexAmplitude::from_polar(mag, dp * 0.5 * (a.0 + b.0) / hbar)
    }

    /// Half-widths `(x, p)` outside which `|W|` is below `e^{−64}` of its scale.
    pub fn support_halfwidths(&self) -> (f64, f64) {
        let hbar = self.constants.hbar();
        let hx = self.points.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
        let hp = self.points.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
        (hx + 8.0 * self.xi, hp + 8.0 * hbar / self.xi)
    }

    pub fn wavefunction(&self, u: f64) -> ComplexAmplitude {
        let hbar = self.constants.hbar();
        let norm = (PI * self.xi * self.xi).powf(-0.25);
        self.points
            .iter()
            .map(|&(x0, p0)| {
                let s = (u - x0) / self.xi;
                ComplexAmplitude::from_polar(self.coeff * norm * (-0.5 * s * s).exp(), p0 * u / hbar)
            })
            .sum()
    }
}

impl PhaseSpaceFunction for CompassState {
    fn value(&self, x: f64, p: f64) -> Result<f64> {
        let hbar = self.constants.hbar();
        let xi = self.xi;
        let mut total = 0.0;
        for &(xa, pa) in &self.points {
            for &(xb, pb) in &self.points {
                let (xm, pm) = (0.5 * (xa + xb), 0.5 * (pa + pb));
                let u = (x - xm) / xi;
                let v = (p - pm) * xi / hbar;
                let phase = (x * (pb - pa) + (xa - xb) * (p - pm)) / hbar;
                total += (-u * u - v * v).exp() * phase.cos();
            }
        }
        Ok(self.coeff * self.coeff * total / (PI * hbar))
    }

    /// Each pair term is `e^{−u²} e^{−v²} cos(A(x) + B(p))`, i.e. the rank-2
    /// sum `cos A cos B − sin A sin B` of outer products.
    fn grid(&self, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
        let hbar = self.constants.hbar();
        let xi = self.xi;
        let scale = self.coeff * self.coeff / (PI * hbar);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut cols: Vec<Vec<f64>> = Vec::new();
        for &(xa, pa) in &self.points {
            for &(xb, pb) in &self.points {
                let (xm, pm) = (0.5 * (xa + xb), 0.5 * (pa + pb));
                let row = |i: usize| {
                    let x = spec.x(i);
                    let u = (x - xm) / xi;
                    ((-u * u).exp(), x * (pb - pa) / hbar)
                };
                let col = |j: usize| {
                    let p = spec.p(j);
                    let v = (p - pm) * xi / hbar;
                    (scale * (-v * v).exp(), (xa - xb) * (p - pm) / hbar)
                };
                let r: Vec<(f64, f64)> = (0..spec.nx).map(row).collect();
                let c: Vec<(f64, f64)> = (0..spec.np).map(col).collect();
                rows.push(r.iter().map(|(e, a)| e * a.cos()).collect());
                cols.push(c.iter().map(|(e, b)| e * b.cos()).collect());
                rows.push(r.iter().map(|(e, a)| -e * a.sin()).collect());
                cols.push(c.iter().map(|(e, b)| e * b.sin()).collect());
            }
        }
        let mut values = vec![0.0; spec.len()];
        for (i, out) in values.chunks_mut(spec.np).enumerate() {
            for (r, c) in rows.iter().zip(&cols) {
                let ri = r[i];
                for (v, cj) in out.iter_mut().zip(c) {
                    *v += ri * cj;
                }
            }
        }
        Ok(PhaseSpaceGrid { spec: *spec, values })
    }
}
