//! Scenario settings: preset defaults, then a `key = value` file, then flags.
//!
//! Every layer is kept as strings in one sorted map so the resolved
//! configuration can be echoed verbatim into output headers.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use subzurek::analysis::CutAxis;
use subzurek::export::{BitDepth, ValueMap};
use subzurek::presets::{Preset, ScenarioParams, StateKind};
use subzurek::wigner::GridSpec;

use crate::CliError;

/// Keys accepted in config files; flag names without the leading dashes.
pub const KEYS: &[&str] = &[
    "preset",
    "state",
    "n",
    "alpha",
    "xi",
    "delta-x",
    "hbar",
    "cross",
    "grid",
    "cut",
    "format",
    "map",
    "depth",
    "out",
    "allow-undersampled",
    "points",
    "shift-x",
    "shift-p",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Pgm,
}

fn canonical_key(key: &str) -> Result<String, CliError> {
    let k = key.trim().replace('_', "-");
    if KEYS.contains(&k.as_str()) {
        Ok(k)
    } else {
        Err(CliError::Invalid(format!("unknown setting {key:?}")))
    }
}

impl Settings {
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), CliError> {
        self.values.insert(canonical_key(key)?, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Later layers win.
    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn parse_file(text: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Invalid(format!("config line {}: expected key = value", lineno + 1)))?;
            s.set(k, v.trim())?;
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_file(&text)
    }

    pub fn preset_defaults(preset: Preset) -> Self {
        let p = preset.params();
        let mut s = Settings::default();
        let mut put = |k: &str, v: String| {
            s.values.insert(k.to_string(), v);
        };
        put("preset", preset.name().to_string());
        put("state", kind_name(p.kind).to_string());
        if p.kind == StateKind::Superoscillating {
            put("n", p.n.to_string());
            put("alpha", p.alpha.to_string());
        }
        put("xi", p.xi.to_string());
        put("delta-x", p.delta_x.to_string());
        put("hbar", p.hbar.to_string());
        put("cross", p.cross.to_string());
        s
    }

    /// Preset layer (if any preset is named), then the file, then flags.
    pub fn resolve(config_file: Option<&Path>, flags: &Settings) -> Result<Self, CliError> {
        let file = match config_file {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        let preset = flags.get("preset").or_else(|| file.get("preset"));
        let mut s = match preset {
            None | Some("custom") => Settings::default(),
            Some(name) => Settings::preset_defaults(
                name.parse()
                    .map_err(|e: subzurek::Error| CliError::Invalid(e.to_string()))?,
            ),
        };
        s.overlay(&file);
        s.overlay(flags);
        Ok(s)
    }

    /// `(key, value)` pairs in key order, for output headers.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.values.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn name(&self) -> &str {
        self.get("preset").unwrap_or("custom")
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Invalid(format!("{key} = {v:?}: {e}")))
            })
            .transpose()
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.parsed(key)?
            .ok_or_else(|| CliError::Invalid(format!("missing --{key} (no preset supplies it)")))
    }

    pub fn n(&self) -> Result<u32, CliError> {
        self.required("n")
    }

    pub fn alpha(&self) -> Result<f64, CliError> {
        self.required("alpha")
    }

    pub fn scenario(&self) -> Result<ScenarioParams, CliError> {
        let kind = match self.get("state").unwrap_or("superosc") {
            "superosc" => StateKind::Superoscillating,
            "cat" => StateKind::Cat,
            other => {
                return Err(CliError::Invalid(format!(
                    "state = {other:?}: expected superosc or cat"
                )))
            }
        };
        let (n, alpha) = match kind {
            StateKind::Superoscillating => (self.n()?, self.alpha()?),
            StateKind::Cat => (2, 1.0),
        };
        Ok(ScenarioParams {
            kind,
            n,
            alpha,
            xi: self.required("xi")?,
            delta_x: self.required("delta-x")?,
            hbar: self.parsed("hbar")?.unwrap_or(1.0),
            cross: self.parsed("cross")?.unwrap_or(false),
        })
    }

    pub fn grid(&self) -> Result<Option<GridSpec>, CliError> {
        self.get("grid").map(parse_grid).transpose()
    }

    pub fn cut(&self) -> Result<Option<CutAxis>, CliError> {
        match self.get("cut") {
            None => Ok(None),
            Some("p") => Ok(Some(CutAxis::MomentumAtOrigin)),
            Some("x") => Ok(Some(CutAxis::PositionAtOrigin)),
            Some(other) => Err(CliError::Invalid(format!("cut = {other:?}: expected x or p"))),
        }
    }

    pub fn format(&self) -> Result<Format, CliError> {
        match self.get("format").unwrap_or("csv") {
            "csv" => Ok(Format::Csv),
            "pgm" => Ok(Format::Pgm),
            other => Err(CliError::Invalid(format!("format = {other:?}: expected csv or pgm"))),
        }
    }

    pub fn map(&self) -> Result<Option<ValueMap>, CliError> {
        self.get("map")
            .map(|m| m.parse::<ValueMap>().map_err(|e| CliError::Invalid(e.to_string())))
            .transpose()
    }

    pub fn depth(&self) -> Result<BitDepth, CliError> {
        match self.get("depth").unwrap_or("8") {
            "8" => Ok(BitDepth::Eight),
            "16" => Ok(BitDepth::Sixteen),
            other => Err(CliError::Invalid(format!("depth = {other:?}: expected 8 or 16"))),
        }
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.get("out").map(PathBuf::from)
    }

    pub fn allow_undersampled(&self) -> Result<bool, CliError> {
        Ok(self.parsed("allow-undersampled")?.unwrap_or(false))
    }

    pub fn points(&self, default: usize) -> Result<usize, CliError> {
        Ok(self.parsed("points")?.unwrap_or(default))
    }

    pub fn shift(&self) -> Result<Option<(f64, f64)>, CliError> {
        let x: Option<f64> = self.parsed("shift-x")?;
        let p: Option<f64> = self.parsed("shift-p")?;
        Ok(match (x, p) {
            (None, None) => None,
            (x, p) => Some((x.unwrap_or(0.0), p.unwrap_or(0.0))),
        })
    }
}

fn kind_name(kind: StateKind) -> &'static str {
    match kind {
        StateKind::Superoscillating => "superosc",
        StateKind::Cat => "cat",
    }
}

/// `x0:x1:nx,p0:p1:np`.
pub fn parse_grid(s: &str) -> Result<GridSpec, CliError> {
    let bad = || CliError::Invalid(format!("grid = {s:?}: expected x0:x1:nx,p0:p1:np"));
    let (xs, ps) = s.split_once(',').ok_or_else(bad)?;
    let axis = |a: &str| -> Result<(f64, f64, usize), CliError> {
        let f: Vec<&str> = a.split(':').map(str::trim).collect();
        if f.len() != 3 {
            return Err(bad());
        }
        Ok((
            f[0].parse().map_err(|_| bad())?,
            f[1].parse().map_err(|_| bad())?,
            f[2].parse().map_err(|_| bad())?,
        ))
    };
    let (x0, x1, nx) = axis(xs)?;
    let (p0, p1, np) = axis(ps)?;
    GridSpec::new(x0, x1, nx, p0, p1, np).map_err(|e| CliError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flags_over_file_over_preset() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# comment\npreset = fig1\nalpha = 12\nxi = 0.5\n").unwrap();
        let mut flags = Settings::default();
        flags.set("xi", "0.3").unwrap();
        let s = Settings::resolve(Some(&path), &flags).unwrap();
        let p = s.scenario().unwrap();
        assert_eq!((p.n, p.alpha, p.xi, p.delta_x), (8, 12.0, 0.3, 3.0));
        assert_eq!(s.name(), "fig1");
    }

    #[test]
    fn underscores_and_unknown_keys() {
        let s = Settings::parse_file("delta_x = 2\n").unwrap();
        assert_eq!(s.get("delta-x"), Some("2"));
        assert!(Settings::parse_file("colour = red\n").is_err());
        assert!(Settings::parse_file("just words\n").is_err());
    }

    #[test]
    fn custom_needs_every_parameter() {
        let mut flags = Settings::default();
        flags.set("n", "4").unwrap();
        flags.set("alpha", "2").unwrap();
        let s = Settings::resolve(None, &flags).unwrap();
        assert!(s.scenario().is_err());
        assert_eq!(s.name(), "custom");
    }

    #[test]
    fn grid_syntax() {
        let g = parse_grid("-1:1:3,0:2:5").unwrap();
        assert_eq!((g.nx, g.np, g.p_max), (3, 5, 2.0));
        assert!(parse_grid("-1:1:3").is_err());
        assert!(parse_grid("-1:1,0:2:5").is_err());
        assert!(parse_grid("1:-1:3,0:2:5").is_err());
    }
}
