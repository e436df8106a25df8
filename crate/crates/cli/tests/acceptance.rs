//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines are always
//! printed.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

use subzurek::analysis::{half_overlap_displacement, measure_scales, overlap_lattice, overspill_check, CompassState};
use subzurek::oracle::{sample_points, wigner_quadrature, QuadratureSpec};
use subzurek::presets::Preset;
use subzurek::states::{build_psi, eval_psi, GaussianComponent, Normalization, PhysicalConstants, StateSpec};
use subzurek::superosc::{eval_f_direct, eval_f_fourier, fourier_coeffs, SuperoscParams};
use subzurek::wigner::{
    eval_grid, eval_grid_naive, eval_wigner, marginal_x, overlap, total_integral, MixtureSpec, PhaseSpaceFunction,
    Source,
};
use subzurek::ComplexAmplitude;

const ORACLE_SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

static WARNINGS: AtomicUsize = AtomicUsize::new(0);

struct WarnCounter;

impl log::Log for WarnCounter {
    fn enabled(&self, m: &log::Metadata) -> bool {
        m.level() <= log::Level::Warn
    }

    fn log(&self, record: &log::Record) {
        if record.level() == log::Level::Warn {
            WARNINGS.fetch_add(1, Ordering::SeqCst);
        }
    }

    fn flush(&self) {}
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for preset in [Preset::Fig1, Preset::Fig2a, Preset::Fig2b, Preset::Cat] {
        let s = preset.params().state().unwrap();
        for (x, p) in sample_points(&s, 50, ORACLE_SEED).unwrap() {
            let closed = eval_wigner(&s, x, p).unwrap();
            let quad = wigner_quadrature(&s, x, p, QuadratureSpec::for_wigner(&s, p).unwrap()).unwrap();
            worst = worst.max((closed - quad.value).abs());
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max |closed − quadrature| = {worst:.2e} over 4×50 points (tol 1e-8)"),
    )
}

fn cat_formula() -> Outcome {
    let (dx, xi, hbar) = (3.0, 1.0, 1.0);
    let amp = ComplexAmplitude::new(0.5f64.sqrt(), 0.0);
    let cat = StateSpec::new(
        vec![
            GaussianComponent::new(-dx, xi, amp).unwrap(),
            GaussianComponent::new(dx, xi, amp).unwrap(),
        ],
        PhysicalConstants::new(hbar).unwrap(),
    )
    .unwrap();
    let g = |x: f64, p: f64| (-x * x / (xi * xi) - p * p * xi * xi / (hbar * hbar)).exp() / (PI * hbar);
    let mut worst = 0.0f64;
    for i in 0..40 {
        for j in 0..25 {
            let x = -6.0 + 12.0 * i as f64 / 39.0;
            let p = -3.0 + 6.0 * j as f64 / 24.0;
            let printed = 0.5 * (g(x - dx, p) + g(x + dx, p)) + g(x, p) * (2.0 * p * dx / hbar).cos();
            worst = worst.max((eval_wigner(&cat, x, p).unwrap() - printed).abs());
        }
    }
    outcome(
        worst <= 1e-12,
        format!("max deviation from printed expression = {worst:.2e} at 1000 points (tol 1e-12)"),
    )
}

fn coefficient_identities() -> Outcome {
    let mut sum_err = 0.0f64;
    let mut rel_err = 0.0f64;
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut uniform = || {
        // xorshift; any fixed sequence will do
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for n in (2..=32).step_by(2) {
        for alpha in [1.0, 2.0, 6.0, 10.0, 16.0] {
            let params = SuperoscParams::new(n, alpha).unwrap();
            let table = fourier_coeffs(params).unwrap();
            sum_err = sum_err
                .max((table.sum_c() - 1.0).abs())
                .max((table.sum_d() - 1.0).abs());
            for _ in 0..100 {
                let x = PI * (2.0 * uniform() - 1.0);
                let d = eval_f_direct(params, x);
                let f = eval_f_fourier(&table, params, x).unwrap();
                rel_err = rel_err.max((d - f).norm() / d.norm());
            }
        }
    }
    outcome(
        sum_err <= 1e-12 && rel_err <= 1e-9,
        format!(
            "max |ΣC−1|,|ΣD−1| = {sum_err:.2e} (tol 1e-12); max direct/Fourier rel. diff = {rel_err:.2e} (tol 1e-9)"
        ),
    )
}

fn factor_recovery() -> Outcome {
    let p = Preset::Fig1.params();
    let r = measure_scales(&p.state().unwrap(), p.extent(), p.expected_alpha()).unwrap();
    let dev = (r.alpha_est - 10.0).abs() / 10.0;
    outcome(
        dev <= 0.15,
        format!("fig1 alpha_est = {:.4} (target 10 ± 15%)", r.alpha_est),
    )
}

fn sub_zurek_scaling() -> Outcome {
    let area = |preset: Preset| {
        let p = preset.params();
        measure_scales(&p.state().unwrap(), p.extent(), p.expected_alpha())
            .unwrap()
            .a_so_est
    };
    let ratio = area(Preset::Fig2c) / area(Preset::Fig2b);
    let target = (10.0f64 / 16.0).powi(2);
    outcome(
        ((ratio - target) / target).abs() <= 0.2,
        format!("a_SO(fig2c)/a_SO(fig2b) = {ratio:.4} (target {target:.4} ± 20%)"),
    )
}

fn overspill() -> Outcome {
    let p = Preset::Fig1.params();
    let good = overspill_check(&p.state().unwrap()).unwrap();
    let before = WARNINGS.load(Ordering::SeqCst);
    let wide = build_psi(
        SuperoscParams::new(p.n, p.alpha).unwrap(),
        p.delta_x,
        3.0,
        p.constants().unwrap(),
        Normalization::Unit,
    )
    .unwrap();
    let bad = overspill_check(&wide).unwrap();
    let warned = WARNINGS.load(Ordering::SeqCst) > before;
    outcome(
        good.ratio < 1e-3 && good.satisfied && bad.ratio > 0.1 && !bad.satisfied && warned,
        format!(
            "fig1 ratio = {:.2e} (< 1e-3); xi = 3 ratio = {:.2e} (> 0.1), warning emitted = {warned}",
            good.ratio, bad.ratio
        ),
    )
}

fn wigner_axioms() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let (mut int_err, mut marg_err, mut bound_excess, mut purity_err) = (0.0f64, 0.0f64, f64::NEG_INFINITY, 0.0f64);
    for preset in Preset::ALL {
        let params = preset.params();
        let c = params.constants().unwrap();
        let state = params.state().unwrap();
        let source = Source::Mixed(MixtureSpec::cross(state.clone()).unwrap());
        let (hx, hp) = source.support_halfwidths();
        let lattice = overlap_lattice(hx, hp, params.extent(), params.xi, c).unwrap();
        let grid = eval_grid(&state, &lattice).unwrap();

        int_err = int_err.max((total_integral(&grid) - 1.0).abs());
        let marginal = marginal_x(&grid, &state).unwrap();
        for (i, m) in marginal.iter().enumerate() {
            marg_err = marg_err.max((m - eval_psi(&state, lattice.x(i)).norm_sqr()).abs());
        }
        bound_excess = bound_excess.max(grid.max_abs() - 1.0 / (PI * c.hbar()));
        let purity = overlap(&grid, &grid, c).unwrap();
        purity_err = purity_err.max((purity - 1.0).abs());

        if params.cross {
            let cross = source.grid(&lattice).unwrap();
            let mixed = overlap(&cross, &cross, c).unwrap();
            if mixed >= purity {
                pass = false;
            }
            notes.push(format!("{preset} cross purity {mixed:.4}"));
        }
    }
    pass &= int_err <= 1e-6 && marg_err <= 1e-6 && bound_excess <= 1e-9 && purity_err <= 1e-4;
    outcome(
        pass,
        format!(
            "|∫W−1| = {int_err:.1e}, marginal err = {marg_err:.1e}, max|W|−1/πħ = {bound_excess:.2e}, |purity−1| = {purity_err:.1e}; {}",
            notes.join(", ")
        ),
    )
}

fn no_sensitivity_gain() -> Outcome {
    let params = Preset::Fig2a.params();
    let c = params.constants().unwrap();
    let l = params.extent();
    let cross = params.source().unwrap();
    let compass = CompassState::new(l, l, params.xi, c).unwrap();
    let (sx, sp) = cross.support_halfwidths();
    let (cx, cp) = compass.support_halfwidths();
    let lattice = overlap_lattice(sx.max(cx), sp.max(cp), l, params.xi, c).unwrap();
    let step = c.h() / (16.0 * l);
    let max = 8.0 * params.xi.max(params.hbar / params.xi);
    let d_cross = half_overlap_displacement(&cross, (0.0, 1.0), &lattice, c, step, max).unwrap();
    let d_compass = half_overlap_displacement(&compass, (0.0, 1.0), &lattice, c, step, max).unwrap();
    let ratio = d_cross / d_compass;
    outcome(
        (ratio - 1.0).abs() <= 0.25,
        format!("δp*: cross {d_cross:.4}, compass(L=P={l}) {d_compass:.4}, ratio {ratio:.3} (target 1 ± 25%)"),
    )
}

fn determinism() -> Outcome {
    let params = Preset::Fig2b.params();
    let cross = params.source().unwrap();
    let spec = subzurek::wigner::GridSpec::new(-20.0, 20.0, 257, -20.0, 20.0, 257).unwrap();
    let fast = eval_grid(&cross, &spec).unwrap();
    let naive = eval_grid_naive(&cross, &spec).unwrap();
    let err = fast
        .values
        .iter()
        .zip(&naive.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_subzurek"))
            .args(args)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let mut identical = true;
    for args in [
        &["wigner", "--preset", "fig2b"][..],
        &["coeffs", "--n", "12", "--alpha", "16"][..],
        &["analyze", "--preset", "fig2c"][..],
    ] {
        identical &= run(args) == run(args);
    }
    outcome(
        err <= 1e-12 && identical,
        format!(
            "fast vs naive max-abs = {err:.2e} on 257×257 (tol 1e-12); repeated CLI runs byte-identical = {identical}"
        ),
    )
}

fn main() {
    log::set_logger(&WarnCounter).unwrap();
    log::set_max_level(log::LevelFilter::Warn);
    std::panic::set_hook(Box::new(|_| {}));

    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("cat-state formula", cat_formula),
        ("coefficient identities", coefficient_identities),
        ("superoscillation factor recovery", factor_recovery),
        ("sub-Zurek scaling", sub_zurek_scaling),
        ("overspill condition", overspill),
        ("Wigner axioms", wigner_axioms),
        ("no sensitivity gain", no_sensitivity_gain),
        ("determinism and fast path", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {}", k + 1, result.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
