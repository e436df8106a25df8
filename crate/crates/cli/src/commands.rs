use std::f64::consts::PI;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use subzurek::analysis::{
    cut_samples, half_overlap_displacement, measure_scales, overlap_lattice, overspill_check, CompassState, CutAxis,
};
use subzurek::export::{write_grid_csv, write_grid_pgm, write_profile_csv};
use subzurek::oracle::{norm_quadrature, sample_points, wigner_quadrature, QuadratureSpec};
use subzurek::presets::{ScenarioParams, StateKind};
use subzurek::states::{eval_psi, norm_squared, StateSpec};
use subzurek::superosc::{fourier_coeffs, SuperoscParams};
use subzurek::wigner::{eval_grid, eval_wigner, marginal_x, total_integral, GridSpec, PhaseSpaceFunction, Source};

use crate::config::{Format, Settings};
use crate::output::{with_extension, Outputs};
use crate::CliError;

/// Samples required per finest expected fringe.
const SAMPLES_PER_FRINGE: f64 = 8.0;

const ORACLE_SEED: u64 = 0x5eed_2024;
const ORACLE_TOL: f64 = 1e-8;
const NORM_TOL: f64 = 1e-8;
const MARGINAL_TOL: f64 = 1e-6;
const INTEGRAL_TOL: f64 = 1e-6;

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(command: &str, settings: &Settings) -> Vec<(String, String)> {
    let mut meta = vec![
        ("command".to_string(), command.to_string()),
        ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ];
    meta.extend(settings.echo());
    meta
}

fn header_text(meta: &[(String, String)]) -> String {
    meta.iter().map(|(k, v)| format!("# {k} = {v}\n")).collect()
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn coeffs(settings: &Settings) -> Result<(), CliError> {
    let params = SuperoscParams::new(settings.n()?, settings.alpha()?)?;
    let table = fourier_coeffs(params)?;
    let canonical = format!("n={};alpha={}", params.n(), fmt17(params.alpha()));
    let mut meta = header("coeffs", settings);
    meta.push((
        "checksum".into(),
        format!("sha256:{}", hex(&Sha256::digest(canonical.as_bytes()))),
    ));

    let mut text = header_text(&meta);
    text.push_str("j,C_j,D_j,K_j\n");
    for (j, c) in table.c.iter().enumerate() {
        let opt = |v: Option<&f64>| v.map_or_else(String::new, |v| fmt17(*v));
        writeln!(
            text,
            "{j},{},{},{}",
            fmt17(*c),
            opt(table.d.get(j)),
            opt(table.k.get(j))
        )
        .unwrap();
    }
    writeln!(text, "# sum_C = {}", fmt17(table.sum_c())).unwrap();
    writeln!(text, "# sum_D = {}", fmt17(table.sum_d())).unwrap();

    let mut out = Outputs::default();
    out.text(settings.out().as_deref(), "csv", text.into_bytes());
    out.commit()
}

/// Finest expected fringe `h/(2Lα)` of the scenario.
fn fringe(scenario: &ScenarioParams) -> f64 {
    scenario.finest_fringe()
}

/// Lattice spacing that puts [`SAMPLES_PER_FRINGE`] samples on a fringe.
fn fringe_spacing(scenario: &ScenarioParams) -> f64 {
    fringe(scenario) / SAMPLES_PER_FRINGE
}

fn count_for(width: f64, spacing: f64) -> usize {
    (width / spacing - 1e-9).ceil().max(1.0) as usize + 1
}

/// Default 2-D window: the central `h/L × h/L` panel for superoscillating
/// scenarios, the whole support for a cat.
fn default_grid(scenario: &ScenarioParams, source: &Source) -> Result<GridSpec, CliError> {
    let hbar = scenario.hbar;
    let fine = fringe_spacing(scenario);
    let (hx, hp) = match scenario.kind {
        StateKind::Superoscillating => {
            let half = PI * hbar / scenario.extent();
            (half, half)
        }
        StateKind::Cat => source.support_halfwidths(),
    };
    let x_spacing = match scenario.kind {
        StateKind::Superoscillating => fine,
        StateKind::Cat => fine.min(scenario.xi / 8.0),
    };
    let p_spacing = fine.min(hbar / (8.0 * scenario.xi));
    let nx = count_for(2.0 * hx, x_spacing);
    let np = count_for(2.0 * hp, p_spacing);
    Ok(GridSpec::new(-hx, hx, nx, -hp, hp, np)?)
}

/// Fails unless every fine-structure axis has a step of at most
/// `h/(2Lα)/8`; along `x` this applies to cross-states only.
fn check_sampling(scenario: &ScenarioParams, dx: Option<f64>, dp: Option<f64>, allow: bool) -> Result<(), CliError> {
    let limit = fringe_spacing(scenario) * (1.0 + 1e-9);
    let mut problems = Vec::new();
    if let Some(dp) = dp.filter(|d| *d > limit) {
        problems.push(format!("p step {dp:.4e}"));
    }
    if scenario.cross {
        if let Some(dx) = dx.filter(|d| *d > limit) {
            problems.push(format!("x step {dx:.4e}"));
        }
    }
    if problems.is_empty() {
        return Ok(());
    }
    let msg = format!(
        "{} exceeds {:.4e} ({} samples per fringe h/(2L alpha) = {:.4e})",
        problems.join(" and "),
        limit,
        SAMPLES_PER_FRINGE,
        fringe(scenario)
    );
    if allow {
        log::warn!("{msg}");
        Ok(())
    } else {
        Err(CliError::Undersampled(format!(
            "{msg}; pass --allow-undersampled to proceed"
        )))
    }
}

pub fn wigner(settings: &Settings) -> Result<(), CliError> {
    let scenario = settings.scenario()?;
    let source = scenario.source()?;
    let format = settings.format()?;
    let map = settings.map()?;
    let allow = settings.allow_undersampled()?;
    let user_grid = settings.grid()?;
    let prefix = settings.out();
    let meta = header("wigner", settings);
    let mut out = Outputs::default();

    if let Some(axis) = settings.cut()? {
        if format == Format::Pgm {
            return Err(CliError::Invalid("a cut is one-dimensional; use --format csv".into()));
        }
        let (lo, hi, count) = match (user_grid, axis) {
            (Some(g), CutAxis::MomentumAtOrigin) => (g.p_min, g.p_max, g.np),
            (Some(g), CutAxis::PositionAtOrigin) => (g.x_min, g.x_max, g.nx),
            (None, _) => {
                let half = PI * scenario.hbar / scenario.extent();
                (-half, half, cut_samples(2.0 * half, fringe(&scenario)))
            }
        };
        let step = if count > 1 {
            (hi - lo) / (count - 1) as f64
        } else {
            f64::INFINITY
        };
        match axis {
            CutAxis::MomentumAtOrigin => check_sampling(&scenario, None, Some(step), allow)?,
            CutAxis::PositionAtOrigin => check_sampling(&scenario, Some(step), None, allow)?,
        }
        let coords: Vec<f64> = (0..count).map(|k| lo + k as f64 * step.min(hi - lo)).collect();
        let values = coords
            .iter()
            .map(|&c| match axis {
                CutAxis::MomentumAtOrigin => source.value(0.0, c),
                CutAxis::PositionAtOrigin => source.value(c, 0.0),
            })
            .collect::<Result<Vec<f64>, _>>()?;
        let name = if axis == CutAxis::MomentumAtOrigin { "p" } else { "x" };
        let mut buf = Vec::new();
        write_profile_csv(&mut buf, name, &coords, &values, map, &meta)?;
        out.text(prefix.as_deref(), "csv", buf);
        return out.commit();
    }

    let spec = match user_grid {
        Some(g) => {
            check_sampling(&scenario, Some(g.dx()), Some(g.dp()), allow)?;
            g
        }
        None => default_grid(&scenario, &source)?,
    };
    let grid = eval_grid(&source, &spec)?;
    let mut csv = Vec::new();
    write_grid_csv(&mut csv, &grid, &meta)?;
    if format == Format::Pgm {
        let mut pgm = Vec::new();
        write_grid_pgm(&mut pgm, &grid, map.unwrap_or_default(), settings.depth()?, &meta)?;
        let image = with_extension(
            prefix.as_deref().unwrap_or(std::path::Path::new(settings.name())),
            "pgm",
        );
        out.file(image, pgm);
    }
    out.text(prefix.as_deref(), "csv", csv);
    out.commit()
}

pub fn analyze(settings: &Settings) -> Result<(), CliError> {
    let scenario = settings.scenario()?;
    let state = scenario.state()?;
    let report =
        measure_scales(&state, scenario.extent(), scenario.expected_alpha()).map_err(|source| CliError::Analysis {
            stage: "superosc_scale",
            source,
        })?;
    let (report, overspill) = if scenario.kind == StateKind::Cat {
        eprintln!("notice: overspill check skipped (a cat state has no central superoscillating component)");
        (report, None)
    } else {
        let o = overspill_check(&state).map_err(|source| CliError::Analysis {
            stage: "overspill_check",
            source,
        })?;
        let report = subzurek::analysis::ScaleReport {
            overspill_lhs: Some(o.lhs),
            overspill_rhs: Some(o.rhs),
            ..report
        };
        (report, Some(o))
    };

    let mut text = header_text(&header("analyze", settings));
    text.push_str(&report.to_text());
    match overspill {
        Some(o) => {
            writeln!(text, "overspill_ratio = {}", fmt17(o.ratio)).unwrap();
            writeln!(text, "overspill_satisfied = {}", o.satisfied).unwrap();
        }
        None => text.push_str("overspill_ratio = none\noverspill_satisfied = skipped\n"),
    }
    let mut out = Outputs::default();
    match settings.out() {
        Some(prefix) => {
            out.file(with_extension(&prefix, "txt"), text.into_bytes());
            out.stdout(format!("{report}\n").as_bytes());
        }
        None => out.stdout(text.as_bytes()),
    }
    out.commit()
}

struct Gate {
    name: &'static str,
    residual: f64,
    tolerance: f64,
}

impl Gate {
    fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Lattice for marginal and normalization gates: covers the support, with a
/// momentum step well inside the Nyquist limit of the widest pair.
fn gate_lattice(state: &StateSpec) -> Result<GridSpec, CliError> {
    let xi = state.common_xi()?;
    let hbar = state.constants().hbar();
    let hx = state.max_abs_center() + 8.0 * xi;
    let hp = 8.0 * hbar / xi;
    let sep = 2.0 * state.max_abs_center();
    let dp = (hbar / (8.0 * xi)).min(if sep > 0.0 {
        PI * hbar / (4.0 * sep)
    } else {
        f64::INFINITY
    });
    let np = 2 * (hp / dp).ceil() as usize + 1;
    let nx = 2 * (hx / (xi / 8.0)).ceil() as usize + 1;
    Ok(GridSpec::new(-hx, hx, nx, -hp, hp, np)?)
}

pub fn validate(settings: &Settings) -> Result<(), CliError> {
    let scenario = settings.scenario()?;
    let state = scenario.state()?;
    let points = sample_points(&state, settings.points(20)?, ORACLE_SEED)?;

    let mut text = header_text(&header("validate", settings));
    text.push_str("x,p,closed_form,quadrature,abs_diff\n");
    let (mut worst, mut worst_imag) = (0.0f64, 0.0f64);
    for &(x, p) in &points {
        let closed = eval_wigner(&state, x, p)?;
        let quad = wigner_quadrature(&state, x, p, QuadratureSpec::for_wigner(&state, p)?)?;
        let diff = (closed - quad.value).abs();
        worst = worst.max(diff);
        worst_imag = worst_imag.max(quad.imaginary.abs());
        writeln!(
            text,
            "{},{},{},{},{}",
            fmt17(x),
            fmt17(p),
            fmt17(closed),
            fmt17(quad.value),
            fmt17(diff)
        )
        .unwrap();
    }

    let norm_q = norm_quadrature(&state, QuadratureSpec::for_norm(&state)?)?;
    let norm_c = norm_squared(&state)?;
    let lattice = gate_lattice(&state)?;
    let grid = eval_grid(&state, &lattice)?;
    let marginal = marginal_x(&grid, &state)?;
    let marginal_err = marginal
        .iter()
        .enumerate()
        .map(|(i, m)| (m - eval_psi(&state, lattice.x(i)).norm_sqr()).abs())
        .fold(0.0, f64::max);

    let gates = [
        Gate {
            name: "oracle",
            residual: worst,
            tolerance: ORACLE_TOL,
        },
        Gate {
            name: "realness",
            residual: worst_imag,
            tolerance: ORACLE_TOL,
        },
        Gate {
            name: "norm_quadrature",
            residual: (norm_q - 1.0).abs(),
            tolerance: NORM_TOL,
        },
        Gate {
            name: "norm_closed_form",
            residual: (norm_c - 1.0).abs(),
            tolerance: NORM_TOL,
        },
        Gate {
            name: "marginal",
            residual: marginal_err,
            tolerance: MARGINAL_TOL,
        },
        Gate {
            name: "total_integral",
            residual: (total_integral(&grid) - 1.0).abs(),
            tolerance: INTEGRAL_TOL,
        },
    ];
    text.push_str("gate,residual,tolerance,status\n");
    for g in &gates {
        let status = if g.passed() { "pass" } else { "FAIL" };
        writeln!(text, "{},{:.3e},{:.0e},{status}", g.name, g.residual, g.tolerance).unwrap();
    }
    writeln!(text, "max_point_deviation = {}", fmt17(worst)).unwrap();

    let mut out = Outputs::default();
    out.text(settings.out().as_deref(), "csv", text.into_bytes());
    out.commit()?;
    let failed: Vec<String> = gates
        .iter()
        .filter(|g| !g.passed())
        .map(|g| g.name.to_string())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ValidateFailed(failed))
    }
}

pub fn sensitivity(settings: &Settings) -> Result<(), CliError> {
    let scenario = settings.scenario()?;
    let source = scenario.source()?;
    let constants = scenario.constants()?;
    let l = scenario.extent();
    let compass = CompassState::new(l, l, scenario.xi, constants)?;
    let (sx, sp) = source.support_halfwidths();
    let (cx, cp) = compass.support_halfwidths();
    let lattice = overlap_lattice(sx.max(cx), sp.max(cp), l, scenario.xi, constants)?;
    let step = constants.h() / (16.0 * l);
    let max = 8.0 * scenario.xi.max(scenario.hbar / scenario.xi);
    let stage = |source| CliError::Analysis {
        stage: "half_overlap_displacement",
        source,
    };

    let mut text = header_text(&header("sensitivity", settings));
    writeln!(
        text,
        "lattice = {}:{}:{},{}:{}:{}",
        lattice.x_min, lattice.x_max, lattice.nx, lattice.p_min, lattice.p_max, lattice.np
    )
    .unwrap();
    writeln!(text, "compass_extent = {}", fmt17(l)).unwrap();
    if let Some((dx, dp)) = settings.shift()? {
        let o_src =
            subzurek::analysis::displacement_sensitivity(&source, dx, dp, &lattice, constants).map_err(stage)?;
        let o_cmp =
            subzurek::analysis::displacement_sensitivity(&compass, dx, dp, &lattice, constants).map_err(stage)?;
        writeln!(text, "overlap_source = {}", fmt17(o_src)).unwrap();
        writeln!(text, "overlap_compass = {}", fmt17(o_cmp)).unwrap();
    }
    for (axis, dir) in [("p", (0.0, 1.0)), ("x", (1.0, 0.0))] {
        let d_src = half_overlap_displacement(&source, dir, &lattice, constants, step, max).map_err(stage)?;
        let d_cmp = half_overlap_displacement(&compass, dir, &lattice, constants, step, max).map_err(stage)?;
        writeln!(text, "half_overlap_{axis}_source = {}", fmt17(d_src)).unwrap();
        writeln!(text, "half_overlap_{axis}_compass = {}", fmt17(d_cmp)).unwrap();
        writeln!(text, "half_overlap_{axis}_ratio = {}", fmt17(d_src / d_cmp)).unwrap();
    }
    let mut out = Outputs::default();
    out.text(settings.out().as_deref(), "txt", text.into_bytes());
    out.commit()
}
