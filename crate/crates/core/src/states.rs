//! Superpositions of displaced squeezed Gaussians
//! `S(x) = (πξ²)^{−1/4} e^{−x²/(2ξ²)}` in position space.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;
use std::str::FromStr;

use crate::superosc::{fourier_coeffs, SuperoscParams};
use crate::{ComplexAmplitude, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { hbar })
    }

    /// Atomic units, `ħ = 1`.
    pub fn atomic() -> Self {
        Self { hbar: 1.0 }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Planck's constant `h = 2πħ`.
    pub fn h(&self) -> f64 {
        2.0 * PI * self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::atomic()
    }
}

/// One term `coeff · S(x − center)` with width `xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    pub center: f64,
    pub xi: f64,
    pub coeff: ComplexAmplitude,
}

impl GaussianComponent {
    pub fn new(center: f64, xi: f64, coeff: ComplexAmplitude) -> Result<Self> {
        if !(xi.is_finite() && xi > 0.0) {
            return Err(Error::InvalidParameter(format!("xi must be positive, got {xi}")));
        }
        if !center.is_finite() || !coeff.re.is_finite() || !coeff.im.is_finite() {
            return Err(Error::InvalidParameter("component values must be finite".into()));
        }
        Ok(Self { center, xi, coeff })
    }

    /// Unweighted Gaussian `S(x − center)`.
    pub fn profile(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.xi;
        (PI * self.xi * self.xi).powf(-0.25) * (-0.5 * u * u).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Rescale coefficients to unit norm.
    #[default]
    Unit,
    /// Keep the coefficients exactly as constructed.
    Raw,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    components: Vec<GaussianComponent>,
    constants: PhysicalConstants,
    normalized: bool,
}

impl StateSpec {
    pub fn new(components: Vec<GaussianComponent>, constants: PhysicalConstants) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyState);
        }
        Ok(Self {
            components,
            constants,
            normalized: false,
        })
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// The width shared by all components.
    pub fn common_xi(&self) -> Result<f64> {
        let xi = self.components[0].xi;
        match self.components.iter().find(|c| c.xi != xi) {
            Some(other) => Err(Error::MixedWidths(xi, other.xi)),
            None => Ok(xi),
        }
    }

    pub fn max_abs_center(&self) -> f64 {
        self.components.iter().map(|c| c.center.abs()).fold(0.0, f64::max)
    }

    /// Distance between the outermost components with non-zero weight.
    pub fn extent(&self) -> f64 {
        let (lo, hi) = self
            .components
            .iter()
            .filter(|c| c.coeff.norm_sqr() > 0.0)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
                (lo.min(c.center), hi.max(c.center))
            });
        if lo.is_finite() {
            hi - lo
        } else {
            0.0
        }
    }

    /// Rescales all coefficients so that `⟨Ψ|Ψ⟩ = 1`.
    pub fn normalize(mut self) -> Result<Self> {
        let norm = norm_squared(&self)?;
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cannot normalize state of norm {norm}"
            )));
        }
        let scale = norm.sqrt().recip();
        for c in &mut self.components {
            c.coeff *= scale;
        }
        self.normalized = true;
        Ok(self)
    }

    /// Flat text form; floats carry 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "hbar = {:.16e}", self.constants.hbar).unwrap();
        writeln!(out, "normalized = {}", self.normalized).unwrap();
        writeln!(out, "components = {}", self.components.len()).unwrap();
        for (i, c) in self.components.iter().enumerate() {
            writeln!(
                out,
                "component.{i} = {:.16e} {:.16e} {:.16e} {:.16e}",
                c.center, c.xi, c.coeff.re, c.coeff.im
            )
            .unwrap();
        }
        out
    }

    /// Applies `f` to every component; used for rescaling experiments.
    pub fn map_components(mut self, f: impl Fn(&mut GaussianComponent)) -> Self {
        self.components.iter_mut().for_each(f);
        self.normalized = false;
        self
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut hbar = None;
        let mut normalized = None;
        let mut count = None;
        let mut components: Vec<Option<GaussianComponent>> = Vec::new();
        let float = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad number {v:?}: {e}")))
        };
        for line in s.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Parse(format!("expected key = value, got {line:?}")))?;
            match key {
                "hbar" => hbar = Some(float(value)?),
                "normalized" => normalized = Some(value.parse::<bool>().map_err(|e| Error::Parse(e.to_string()))?),
                "components" => {
                    let n: usize = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad count {value:?}")))?;
                    components.resize(n, None);
                    count = Some(n);
                }
                _ => {
                    let idx: usize = key
                        .strip_prefix("component.")
                        .and_then(|i| i.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("unknown key {key:?}")))?;
                    let fields = value.split_whitespace().map(float).collect::<Result<Vec<_>>>()?;
                    let [center, xi, re, im] = fields[..] else {
                        return Err(Error::Parse(format!("component.{idx} needs 4 values")));
                    };
                    let slot = components
                        .get_mut(idx)
                        .ok_or_else(|| Error::Parse(format!("component index {idx} out of range")))?;
                    *slot = Some(GaussianComponent::new(center, xi, ComplexAmplitude::new(re, im))?);
                }
            }
        }
        let hbar = hbar.ok_or_else(|| Error::Parse("missing hbar".into()))?;
        count.ok_or_else(|| Error::Parse("missing components".into()))?;
        let components = components
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| Error::Parse(format!("missing component.{i}"))))
            .collect::<Result<Vec<_>>>()?;
        let mut state = StateSpec::new(components, PhysicalConstants::new(hbar)?)?;
        state.normalized = normalized.unwrap_or(false);
        Ok(state)
    }
}

/// Two equally weighted Gaussians at `±delta_x`, normalized.
pub fn build_cat(delta_x: f64, xi: f64, constants: PhysicalConstants) -> Result<StateSpec> {
    let w = ComplexAmplitude::new(FRAC_1_SQRT_2, 0.0);
    let components = vec![
        GaussianComponent::new(-delta_x, xi, w)?,
        GaussianComponent::new(delta_x, xi, w)?,
    ];
    StateSpec::new(components, constants)?.normalize()
}

/// `(−i)^j`, with `(−i)^{−j} = i^j` for negative `j`.
pub fn phase_factor(j: i64) -> ComplexAmplitude {
    // (−i)^j for j mod 4 = 0, 1, 2, 3
    const TABLE: [(f64, f64); 4] = [(1.0, 0.0), (0.0, -1.0), (-1.0, 0.0), (0.0, 1.0)];
    let (re, im) = TABLE[j.rem_euclid(4) as usize];
    ComplexAmplitude::new(re, im)
}

/// The superoscillating state
/// `Ψ = K_0 S(x) + (1/√2) Σ_{j≠0} (−i)^j K_{|j|} S(x − jΔx)`.
pub fn build_psi(
    params: SuperoscParams,
    delta_x: f64,
    xi: f64,
    constants: PhysicalConstants,
    normalization: Normalization,
) -> Result<StateSpec> {
    if !(delta_x.is_finite() && delta_x > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delta_x must be positive, got {delta_x}"
        )));
    }
    let table = fourier_coeffs(params)?;
    let half = params.half_n() as i64;
    if half % 2 == 1 {
        log::warn!("N/2 = {half} is odd: the central fringe of W at the origin has the opposite sign to Re f");
    }
    let components = (-half..=half)
        .map(|j| {
            let k = table.k[j.unsigned_abs() as usize];
            let coeff = if j == 0 {
                ComplexAmplitude::new(k, 0.0)
            } else {
                phase_factor(j) * (k * FRAC_1_SQRT_2)
            };
            GaussianComponent::new(j as f64 * delta_x, xi, coeff)
        })
        .collect::<Result<Vec<_>>>()?;
    let state = StateSpec::new(components, constants)?;
    match normalization {
        Normalization::Unit => state.normalize(),
        Normalization::Raw => Ok(state),
    }
}

pub fn eval_psi(state: &StateSpec, x: f64) -> ComplexAmplitude {
    state.components.iter().map(|c| c.coeff * c.profile(x)).sum()
}

/// `⟨Ψ|Ψ⟩` from the Gaussian overlap `⟨S_a|S_b⟩ = e^{−(a−b)²/(4ξ²)}`.
pub fn norm_squared(state: &StateSpec) -> Result<f64> {
    let xi = state.common_xi()?;
    let comps = &state.components;
    let mut total = 0.0;
    for (j, a) in comps.iter().enumerate() {
        total += a.coeff.norm_sqr();
        for b in &comps[j + 1..] {
            let d = a.center - b.center;
            let overlap = (-d * d / (4.0 * xi * xi)).exp();
            total += 2.0 * (a.coeff.conj() * b.coeff).re * overlap;
        }
    }
    Ok(total)
}
