//! Parameter sets of the reference figures.

use std::fmt;
use std::str::FromStr;

use crate::states::{build_cat, build_psi, Normalization, PhysicalConstants, StateSpec};
use crate::superosc::SuperoscParams;
use crate::wigner::{MixtureSpec, Source};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Superoscillating state, N=8, α=10, ξ=1/4, Δx=3.
    Fig1,
    /// Cross-state, N=4, α=6, ξ=1, Δx=6.
    Fig2a,
    /// Cross-state, N=12, α=10, ξ=1/4, Δx=3.
    Fig2b,
    /// Cross-state, N=12, α=16, ξ=1/4, Δx=3.
    Fig2c,
    /// Two-component cat, Δx=3, ξ=1.
    Cat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Superoscillating,
    Cat,
}

/// Fully resolved scenario parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub kind: StateKind,
    pub n: u32,
    pub alpha: f64,
    pub xi: f64,
    pub delta_x: f64,
    pub hbar: f64,
    pub cross: bool,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Fig1, Preset::Fig2a, Preset::Fig2b, Preset::Fig2c, Preset::Cat];

    pub fn params(self) -> ScenarioParams {
        let so = |n, alpha, xi, delta_x, cross| ScenarioParams {
            kind: StateKind::Superoscillating,
            n,
            alpha,
            xi,
            delta_x,
            hbar: 1.0,
            cross,
        };
        match self {
            Preset::Fig1 => so(8, 10.0, 0.25, 3.0, false),
            Preset::Fig2a => so(4, 6.0, 1.0, 6.0, true),
            Preset::Fig2b => so(12, 10.0, 0.25, 3.0, true),
            Preset::Fig2c => so(12, 16.0, 0.25, 3.0, true),
            Preset::Cat => ScenarioParams {
                kind: StateKind::Cat,
                n: 2,
                alpha: 1.0,
                xi: 1.0,
                delta_x: 3.0,
                hbar: 1.0,
                cross: false,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig2c => "fig2c",
            Preset::Cat => "cat",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown preset {s:?}")))
    }
}

impl ScenarioParams {
    pub fn constants(&self) -> Result<PhysicalConstants> {
        PhysicalConstants::new(self.hbar)
    }

    /// The pure state of the scenario (normalized).
    pub fn state(&self) -> Result<StateSpec> {
        let constants = self.constants()?;
        match self.kind {
            StateKind::Cat => build_cat(self.delta_x, self.xi, constants),
            StateKind::Superoscillating => build_psi(
                SuperoscParams::new(self.n, self.alpha)?,
                self.delta_x,
                self.xi,
                constants,
                Normalization::Unit,
            ),
        }
    }

    /// The state, or its cross-state mixture when `cross` is set.
    pub fn source(&self) -> Result<Source> {
        let state = self.state()?;
        Ok(if self.cross {
            Source::Mixed(MixtureSpec::cross(state)?)
        } else {
            Source::Pure(state)
        })
    }

    /// Position extent `L` between the outermost components.
    pub fn extent(&self) -> f64 {
        match self.kind {
            StateKind::Cat => 2.0 * self.delta_x,
            StateKind::Superoscillating => self.n as f64 * self.delta_x,
        }
    }

    /// Expected superoscillation factor (1 for a cat).
    pub fn expected_alpha(&self) -> f64 {
        match self.kind {
            StateKind::Cat => 1.0,
            StateKind::Superoscillating => self.alpha,
        }
    }

    /// Finest expected fringe `h/(2Lα)` along `p`.
    pub fn finest_fringe(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar / (2.0 * self.extent() * self.expected_alpha())
    }
}
