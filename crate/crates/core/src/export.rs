//! Grid files: CSV with full precision and binary PGM heatmaps.
//!
//! CSV layout: optional `# key = value` metadata lines, then the header row
//! `x_min,x_max,p_min,p_max,nx,np`, one row with those values, and `nx` rows of
//! `np` values each (`x` index slow, `p` index fast). Floats use 17
//! significant digits, so files round-trip exactly.
//!
//! PGM images put `x` along the horizontal axis and `p` upwards (top row is
//! `p_max`).

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use crate::wigner::{GridSpec, PhaseSpaceGrid};
use crate::{Error, Result};

/// Floor applied to `|W|` before taking its logarithm.
pub const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueMap {
    /// `[min, max] → [0, 1]`.
    #[default]
    Linear,
    /// `[−m, m] → [0, 1]` with `m = max|v|`; zero sits at mid-gray.
    Signed,
    /// `ln max(|v|, 1e-300)`, then linear.
    LogAbs,
}

impl ValueMap {
    pub fn name(self) -> &'static str {
        match self {
            ValueMap::Linear => "linear",
            ValueMap::Signed => "signed",
            ValueMap::LogAbs => "logabs",
        }
    }

    /// The value that gets mapped to gray levels.
    pub fn transform(self, v: f64) -> f64 {
        match self {
            ValueMap::LogAbs => v.abs().max(LOG_FLOOR).ln(),
            _ => v,
        }
    }

    /// Range `[lo, hi]` of the transformed values that spans the gray scale.
    pub fn range(self, values: &[f64]) -> (f64, f64) {
        match self {
            ValueMap::Signed => {
                let m = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
                (-m, m)
            }
            _ => values
                .iter()
                .map(|&v| self.transform(v))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t))),
        }
    }
}

impl fmt::Display for ValueMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ValueMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ValueMap::Linear),
            "signed" => Ok(ValueMap::Signed),
            "logabs" => Ok(ValueMap::LogAbs),
            _ => Err(Error::InvalidParameter(format!("unknown value map {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BitDepth {
    #[default]
    Eight,
    Sixteen,
}

impl BitDepth {
    fn max_value(self) -> u32 {
        match self {
            BitDepth::Eight => 255,
            BitDepth::Sixteen => 65535,
        }
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_grid_csv<W: Write>(mut out: W, grid: &PhaseSpaceGrid, metadata: &[(String, String)]) -> io::Result<()> {
    for (k, v) in metadata {
        writeln!(out, "# {k} = {v}")?;
    }
    let s = &grid.spec;
    writeln!(out, "x_min,x_max,p_min,p_max,nx,np")?;
    writeln!(
        out,
        "{},{},{},{},{},{}",
        fmt17(s.x_min),
        fmt17(s.x_max),
        fmt17(s.p_min),
        fmt17(s.p_max),
        s.nx,
        s.np
    )?;
    let mut line = String::new();
    for i in 0..s.nx {
        line.clear();
        for (j, v) in grid.row(i).iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&fmt17(*v));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_grid_csv<R: BufRead>(input: R) -> Result<PhaseSpaceGrid> {
    let mut lines = input
        .lines()
        .filter(|l| !matches!(l, Ok(s) if s.starts_with('#') || s.trim().is_empty()));
    let mut next = || -> Result<String> {
        lines
            .next()
            .ok_or_else(|| Error::Parse("unexpected end of grid file".into()))?
            .map_err(Error::from)
    };
    let header = next()?;
    if header.trim() != "x_min,x_max,p_min,p_max,nx,np" {
        return Err(Error::Parse(format!("bad header row {header:?}")));
    }
    let dims = next()?;
    let fields: Vec<&str> = dims.split(',').map(str::trim).collect();
    if fields.len() != 6 {
        return Err(Error::Parse(format!("expected 6 header values, got {}", fields.len())));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
    let count = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
    let spec = GridSpec::new(
        num(fields[0])?,
        num(fields[1])?,
        count(fields[4])?,
        num(fields[2])?,
        num(fields[3])?,
        count(fields[5])?,
    )?;
    let mut values = Vec::with_capacity(spec.len());
    for i in 0..spec.nx {
        let row = next()?;
        let before = values.len();
        for v in row.split(',') {
            values.push(num(v.trim())?);
        }
        if values.len() - before != spec.np {
            return Err(Error::Parse(format!(
                "row {i} has {} values, expected {}",
                values.len() - before,
                spec.np
            )));
        }
    }
    Ok(PhaseSpaceGrid { spec, values })
}

/// Two- or three-column profile `coord,value[,mapped]`.
pub fn write_profile_csv<W: Write>(
    mut out: W,
    axis: &str,
    coords: &[f64],
    values: &[f64],
    map: Option<ValueMap>,
    metadata: &[(String, String)],
) -> io::Result<()> {
    for (k, v) in metadata {
        writeln!(out, "# {k} = {v}")?;
    }
    match map {
        Some(m) => writeln!(out, "{axis},w,{}", m.name())?,
        None => writeln!(out, "{axis},w")?,
    }
    for (c, v) in coords.iter().zip(values) {
        match map {
            Some(m) => writeln!(out, "{},{},{}", fmt17(*c), fmt17(*v), fmt17(m.transform(*v)))?,
            None => writeln!(out, "{},{}", fmt17(*c), fmt17(*v))?,
        }
    }
    Ok(())
}

/// Binary (P5) graymap. The comment line records the mapping and the
/// transformed range that spans the gray scale.
pub fn write_grid_pgm<W: Write>(
    mut out: W,
    grid: &PhaseSpaceGrid,
    map: ValueMap,
    depth: BitDepth,
    metadata: &[(String, String)],
) -> io::Result<()> {
    let (lo, hi) = map.range(&grid.values);
    let span = hi - lo;
    let max = depth.max_value();
    let level = |v: f64| -> u32 {
        let t = map.transform(v);
        let u = if span > 0.0 { (t - lo) / span } else { 0.5 };
        (u.clamp(0.0, 1.0) * max as f64).round() as u32
    };

    let (nx, np) = (grid.spec.nx, grid.spec.np);
    write!(out, "P5\n# map={} min={} max={}", map.name(), fmt17(lo), fmt17(hi))?;
    if map == ValueMap::LogAbs {
        write!(out, " floor={LOG_FLOOR:e}")?;
    }
    writeln!(out)?;
    for (k, v) in metadata {
        writeln!(out, "# {k} = {v}")?;
    }
    write!(out, "{nx} {np}\n{max}\n")?;

    let bytes_per = if depth == BitDepth::Eight { 1 } else { 2 };
    let mut buf = Vec::with_capacity(nx * np * bytes_per);
    for j in (0..np).rev() {
        for i in 0..nx {
            let g = level(grid.get(i, j));
            match depth {
                BitDepth::Eight => buf.push(g as u8),
                BitDepth::Sixteen => buf.extend_from_slice(&(g as u16).to_be_bytes()),
            }
        }
    }
    out.write_all(&buf)
}
