//! Experiment dispatch: builds core objects from the validated config,
//! computes, and assembles the results block. `dry` mode stops after input
//! construction, which is what `weakvel validate` runs.

use crate::config::{ExperimentConfig, ExperimentKind, ProfileKindName, ScanSpacing, ScanVariable};
use crate::error::CliError;
use crate::report::{
    csv_float, render_report, resolve_output, write_atomic, BranchOverlaps, ConvergenceJson,
    DesyncRowJson, EpsilonJson, PointerRowJson, Results, RoundtripJson, RunReport, SpeedsJson,
    ToolInfo, VslShiftJson,
};
use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use weakvel::clock::{self, DesyncProfile, TauRatio, TimeStates};
use weakvel::pointer::{evolve_exact, evolve_weak, gaussian_pointer, PointerField};
use weakvel::vsl::{self, SpeedProfile};
use weakvel::weakval::{
    build_pre_post, epsilon_tau_scan, time_states_for_tau, weak_velocity_closed_form,
    weak_velocity_full,
};
use weakvel::{oneway, PointerField64, TimeStates64};

const MAX_SPINS: usize = 10;

pub struct Outcome {
    pub summary: Vec<String>,
}

/// A config with a [scan] section validates as a scan; anything else
/// validates as a run of its experiment kind.
pub fn validate(cfg: &ExperimentConfig, base: &Path) -> Result<(), CliError> {
    if cfg.scan.is_some() {
        prepare_scan(cfg)
    } else {
        dispatch(cfg, base, true).map(|_| ())
    }
}

pub fn run(cfg: &ExperimentConfig, base: &Path) -> Result<Outcome, CliError> {
    let results = dispatch(cfg, base, false)?.expect("wet run returns results");
    let mut summary = summarize(&results);

    let report = RunReport {
        tool: ToolInfo::current(),
        tolerances: &cfg.tolerances,
        config: cfg,
        results,
    };
    let bytes = render_report(&report)?;
    let path = resolve_output(&cfg.output.report);
    write_atomic(&path, &bytes)?;
    summary.push(format!("report: {}", path.display()));
    Ok(Outcome { summary })
}

fn dispatch(cfg: &ExperimentConfig, base: &Path, dry: bool) -> Result<Option<Results>, CliError> {
    match cfg.experiment {
        ExperimentKind::WeakVelocity => weak_velocity(cfg, dry),
        ExperimentKind::NspinOracle => nspin_oracle(cfg, dry),
        ExperimentKind::Pointer => pointer_experiment(cfg, dry),
        ExperimentKind::ClockDesync => clock_desync(cfg, dry),
        ExperimentKind::OnewayMap => oneway_map(cfg, dry),
        ExperimentKind::Vsl => vsl_experiment(cfg, base, dry),
        ExperimentKind::Causality => causality(cfg, dry),
    }
}

// ---- shared input builders ----

fn selection(cfg: &ExperimentConfig) -> Result<(f64, f64), CliError> {
    cfg.selection
        .as_ref()
        .ok_or_else(|| CliError::config("this experiment needs a [selection] section"))?
        .normalized()
}

/// Clock states from the config: explicit packets, or packets synthesized to
/// hit `run.tau_override` on the configured grid.
fn time_states(cfg: &ExperimentConfig) -> Result<TimeStates64, CliError> {
    let section = cfg
        .clock
        .as_ref()
        .ok_or_else(|| CliError::config("this experiment needs a [clock] section"))?;
    let grid = section.grid.build()?;
    if let Some(target) = cfg.run.tau_override {
        return Ok(time_states_for_tau(target, section.in_plus.width, grid)?);
    }
    Ok(TimeStates {
        in_plus: clock::make_packet(section.in_plus.center, section.in_plus.width, grid)?,
        in_minus: clock::make_packet(section.in_minus.center, section.in_minus.width, grid)?,
        fin_plus: clock::make_packet(section.fin_plus.center, section.fin_plus.width, grid)?,
        fin_minus: clock::make_packet(section.fin_minus.center, section.fin_minus.width, grid)?,
    })
}

fn measured_tau(cfg: &ExperimentConfig, states: &TimeStates64) -> Result<TauRatio<f64>, CliError> {
    Ok(clock::tau_with_threshold(
        states,
        cfg.tolerances.orthogonality_threshold,
    )?)
}

fn pointer_field(cfg: &ExperimentConfig) -> Result<PointerField64, CliError> {
    let section = cfg
        .pointer
        .as_ref()
        .ok_or_else(|| CliError::config("this experiment needs a [pointer] section"))?;
    let grid = section.grid.build()?;
    Ok(gaussian_pointer(section.epsilon_width, grid)?)
}

fn schedule(cfg: &ExperimentConfig) -> Result<&[f64], CliError> {
    if cfg.run.t_b.is_empty() {
        return Err(CliError::config(
            "this experiment needs a non-empty `t_b` schedule under [run]",
        ));
    }
    if cfg.run.t_b.iter().any(|&t| t.is_nan() || t <= 0.0) {
        return Err(CliError::config("every t_b entry must be positive"));
    }
    Ok(&cfg.run.t_b)
}

fn n_spins(cfg: &ExperimentConfig) -> Result<usize, CliError> {
    let n = cfg.run.n_spins;
    if n == 0 || n > MAX_SPINS {
        return Err(CliError::config(format!(
            "n_spins must lie in 1..={MAX_SPINS} (full contraction is dense)"
        )));
    }
    Ok(n)
}

/// Real-τ scalar for experiments that need one: the override, or the
/// measured packet ratio when its imaginary part is negligible.
fn real_tau(cfg: &ExperimentConfig) -> Result<f64, CliError> {
    if let Some(t) = cfg.run.tau_override {
        return Ok(t);
    }
    let states = time_states(cfg)?;
    let tau = measured_tau(cfg, &states)?;
    if tau.value.im.abs() > cfg.tolerances.real_tau_threshold {
        return Err(CliError::config(format!(
            "measured τ has a non-negligible imaginary part ({:e}); the ε map needs real τ",
            tau.value.im
        )));
    }
    Ok(tau.value.re)
}

fn margin_info(cfg: &ExperimentConfig, g: &DesyncProfile<f64>) -> (Option<f64>, bool) {
    match cfg.run.t_b.first() {
        Some(&t) if t > 0.0 => {
            let margin = clock::weak_regime_margin(g, t);
            (Some(margin), margin > cfg.tolerances.weak_margin_warn)
        }
        _ => (None, false),
    }
}

// ---- experiments ----

fn weak_velocity(cfg: &ExperimentConfig, dry: bool) -> Result<Option<Results>, CliError> {
    let (alpha, beta) = selection(cfg)?;
    let n = n_spins(cfg)?;
    let states = time_states(cfg)?;
    let g = cfg.desync.build()?;
    let pair = build_pre_post(alpha, beta, &states, n)?;
    if dry {
        return Ok(None);
    }
    let c0 = cfg.units.c0;
    let tau = measured_tau(cfg, &states)?;
    let closed = weak_velocity_closed_form(alpha, beta, tau.value, c0)?;
    let full = weak_velocity_full(&pair, c0)?;
    let tau_is_real = tau.value.im.abs() <= cfg.tolerances.real_tau_threshold;
    let (margin, warning) = margin_info(cfg, &g);

    let epsilon = if tau_is_real {
        oneway::epsilon_from_weak(alpha, beta, tau.value.re)
            .ok()
            .map(|m| EpsilonJson {
                value: m.epsilon,
                in_range: m.in_range,
                tau_bound_ok: m.tau_bound_ok,
            })
    } else {
        None
    };
    let directional_speeds = epsilon.as_ref().filter(|e| e.in_range).map(|e| {
        let conv = oneway::SynchronizationConvention::new(e.value, c0)
            .expect("in-range ε builds a convention");
        let speeds = oneway::directional_speeds(&conv);
        SpeedsJson {
            forward: speeds.forward,
            backward: speeds.backward,
        }
    });
    let causality = oneway::causality_class(closed.re, c0)?;

    Ok(Some(Results::WeakVelocity {
        n_spins: n,
        c0,
        overlaps: BranchOverlaps {
            plus: tau.plus_overlap.into(),
            minus: tau.minus_overlap.into(),
        },
        tau: tau.value.into(),
        tau_is_real,
        weak_regime_margin: margin,
        margin_warning: warning,
        closed_form: closed.into(),
        full_contraction: full.value.into(),
        closed_vs_full_abs: (closed - full.value).norm(),
        post_selection_probability: full.post_selection_probability,
        epsilon,
        directional_speeds,
        causality: causality.into(),
    }))
}

fn nspin_oracle(cfg: &ExperimentConfig, dry: bool) -> Result<Option<Results>, CliError> {
    let (alpha, beta) = selection(cfg)?;
    let n = n_spins(cfg)?;
    let states = time_states(cfg)?;
    let pair = build_pre_post(alpha, beta, &states, n)?;
    if dry {
        return Ok(None);
    }
    let c0 = cfg.units.c0;
    let tau = measured_tau(cfg, &states)?;
    let closed = weak_velocity_closed_form(alpha, beta, tau.value, c0)?;
    let full = weak_velocity_full(&pair, c0)?;
    Ok(Some(Results::NspinOracle {
        n_spins: n,
        c0,
        tau: tau.value.into(),
        closed_form: closed.into(),
        full_contraction: full.value.into(),
        abs_difference: (closed - full.value).norm(),
        post_selection_probability: full.post_selection_probability,
    }))
}

fn pointer_experiment(cfg: &ExperimentConfig, dry: bool) -> Result<Option<Results>, CliError> {
    let (alpha, beta) = selection(cfg)?;
    let states = time_states(cfg)?;
    let pointer = pointer_field(cfg)?;
    let g = cfg.desync.build()?;
    let steps = schedule(cfg)?.to_vec();
    let pair = build_pre_post(alpha, beta, &states, 1)?;
    if dry {
        return Ok(None);
    }
    let c0 = cfg.units.c0;
    let eps = pointer.epsilon_width();

    let mut rows = Vec::with_capacity(steps.len());
    let mut fields = Vec::with_capacity(steps.len());
    for &t_b in &steps {
        let (field, report) = evolve_exact(&pointer, &pair, &g, c0, t_b)?;
        let margin = clock::weak_regime_margin(&g, t_b);
        rows.push(PointerRowJson {
            t_b,
            displacement_over_width: c0 * t_b / eps,
            mean_z: report.mean_z,
            measured_weak_velocity: report.measured_weak_velocity,
            predicted_weak_velocity: report.predicted_weak_velocity.into(),
            abs_deviation: (report.measured_weak_velocity - report.predicted_weak_velocity.re)
                .abs(),
            fidelity_to_weak_prediction: report.fidelity_to_weak_prediction,
            post_selection_probability: report.post_selection_probability,
            weak_regime_margin: margin,
            margin_warning: margin > cfg.tolerances.weak_margin_warn,
        });
        fields.push(field);
    }

    let convergence = convergence_fit(&rows);

    if let Some(dump) = &cfg.output.field_dump {
        for (i, field) in fields.iter().enumerate() {
            let path = resolve_output(&indexed_path(dump, i, fields.len()));
            write_atomic(&path, field.to_csv().as_bytes())?;
        }
    }

    Ok(Some(Results::Pointer {
        c0,
        epsilon_width: eps,
        rows,
        convergence,
    }))
}

fn convergence_fit(rows: &[PointerRowJson]) -> Option<ConvergenceJson> {
    if rows.len() < 2 {
        return None;
    }
    if rows.iter().any(|r| r.abs_deviation <= 1e-300) {
        return None;
    }
    let ratios: Vec<f64> = rows
        .windows(2)
        .map(|w| w[0].abs_deviation / w[1].abs_deviation)
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| r.t_b.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.abs_deviation.ln()).collect();
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let var: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    if var == 0.0 {
        return None;
    }
    Some(ConvergenceJson {
        deviation_ratios: ratios,
        estimated_order: cov / var,
    })
}

fn indexed_path(path: &Path, index: usize, total: usize) -> PathBuf {
    if total <= 1 {
        return path.to_path_buf();
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "field".into());
    let ext = path
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    path.with_file_name(format!("{stem}-{index}.{ext}"))
}

fn clock_desync(cfg: &ExperimentConfig, dry: bool) -> Result<Option<Results>, CliError> {
    let section = cfg
        .clock
        .as_ref()
        .ok_or_else(|| CliError::config("clock-desync needs a [clock] section"))?;
    let grid = section.grid.build()?;
    let probe = clock::make_packet(section.in_plus.center, section.in_plus.width, grid)?;
    let g = cfg.desync.build()?;
    let steps = schedule(cfg)?.to_vec();
    if dry {
        return Ok(None);
    }
    let start = probe.measured_center();
    let mut rows = Vec::with_capacity(steps.len());
    for &t_b in &steps {
        let integral = clock::desync_integral(&g, t_b);
        let evolved = clock::evolve_packet(&probe, t_b, &g)?;
        let measured = evolved.measured_center() - start;
        let expected = t_b + integral;
        let margin = clock::weak_regime_margin(&g, t_b);
        rows.push(DesyncRowJson {
            t_b,
            desync_integral: integral,
            expected_advance: expected,
            measured_advance: measured,
            advance_error: (measured - expected).abs(),
            norm_drift: (evolved.norm_sq() - 1.0).abs(),
            weak_regime_margin: margin,
            margin_warning: margin > cfg.tolerances.weak_margin_warn,
        });
    }
    Ok(Some(Results::ClockDesync { rows }))
}

fn oneway_map(cfg: &ExperimentConfig, dry: bool) -> Result<Option<Results>, CliError> {
    let c0 = cfg.units.c0;
    let length = cfg.run.length;
    if length.is_nan() || length <= 0.0 {
        return Err(CliError::config("run.length must be positive"));
    }

    let (tau, epsilon) = if let Some(eps) = cfg.run.epsilon {
        let in_range = eps > 0.0 && eps < 1.0;
        (
            None,
            EpsilonJson {
                value: eps,
                in_range,
                tau_bound_ok: true,
            },
        )
    } else {
        let (alpha, beta) = selection(cfg)?;
        let tau = real_tau(cfg)?;
        let map = oneway::epsilon_from_weak(alpha, beta, tau)?;
        (
            Some(tau),
            EpsilonJson {
                value: map.epsilon,
                in_range: map.in_range,
                tau_bound_ok: map.tau_bound_ok,
            },
        )
    };
    if dry {
        return Ok(None);
    }
    if !epsilon.in_range {
        return Err(CliError::Numerical(weakvel::Error::Domain {
            what: format!(
                "derived ε = {} lies outside (0, 1); no synchronization convention exists",
                epsilon.value
            ),
        }));
    }
    let conv = oneway::SynchronizationConvention::new(epsilon.value, c0)?;
    let speeds = oneway::directional_speeds(&conv);
    let rt = oneway::roundtrip_check(&conv, length)?;
    Ok(Some(Results::OnewayMap {
        tau,
        epsilon,
        directional_speeds: SpeedsJson {
            forward: speeds.forward,
            backward: speeds.backward,
        },
        roundtrip: RoundtripJson {
            length,
            t_forward: rt.t_forward,
            t_backward: rt.t_backward,
            c_effective: rt.c_effective,
        },
    }))
}

/// Deterministic commutator test suite derived from the pointer width.
fn commutator_suite(pointer: &PointerField<f64>) -> Vec<PointerField<f64>> {
    let grid = *pointer.grid();
    let eps = pointer.epsilon_width();
    let gaussian = |center: f64, width: f64, momentum: f64| {
        let amps: Vec<Complex64> = grid
            .values()
            .map(|z| {
                let d = z - center;
                Complex64::from_polar((-d * d / (2.0 * width * width)).exp(), momentum * z)
            })
            .collect();
        PointerField::from_samples(grid, amps, width).expect("suite matches grid")
    };
    vec![
        pointer.clone(),
        gaussian(eps, 0.8 * eps, 0.0),
        gaussian(-eps, 0.8 * eps, 0.0),
        gaussian(0.0, 0.6 * eps, 0.0),
        gaussian(0.5 * eps, eps, 0.3 / eps),
    ]
}

fn vsl_experiment(
    cfg: &ExperimentConfig,
    base: &Path,
    dry: bool,
) -> Result<Option<Results>, CliError> {
    let (alpha, beta) = selection(cfg)?;
    let tau = real_tau(cfg)?;
    let pointer = pointer_field(cfg)?;
    let section = cfg
        .vsl
        .as_ref()
        .ok_or_else(|| CliError::config("vsl experiment needs a [vsl] section"))?;
    let c0 = cfg.units.c0;
    let hbar0 = cfg.units.hbar0;
    let lambda = section.lambda.unwrap_or(hbar0 * c0 * c0);
    let kind = section.profile.build(c0, base)?;
    let profile = SpeedProfile::sample(kind, *pointer.grid())?;
    let t_b = *schedule(cfg)?.first().expect("schedule checked non-empty");
    if dry {
        return Ok(None);
    }

    let hbar = vsl::hbar_from_speed(&profile, lambda)?;
    let constancy = hbar.constancy_defect(&profile);
    let suite = commutator_suite(&pointer);
    let commutator = vsl::commutator_check(&hbar, &suite)?;

    let v0 = weak_velocity_closed_form(alpha, beta, Complex64::new(tau, 0.0), c0)?.re;
    let shift =
        vsl::vsl_pointer_shift(&pointer, alpha, beta, tau, c0, hbar0, &profile, lambda, t_b)?;
    let speed_min = shift
        .displacement_speed
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let speed_max = shift
        .displacement_speed
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);

    let flat_reduction = if matches!(section.profile.kind, ProfileKindName::Constant)
        && (lambda - hbar0 * c0 * c0).abs() <= 1e-12 * lambda
    {
        let flat = evolve_weak(&pointer, v0, t_b)?;
        Some(
            shift
                .field
                .amplitudes()
                .iter()
                .zip(flat.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    } else {
        None
    };

    if let Some(dump) = &cfg.output.field_dump {
        let path = resolve_output(dump);
        write_atomic(&path, shift.field.to_csv().as_bytes())?;
    }

    Ok(Some(Results::Vsl {
        c0,
        hbar0,
        lambda,
        hbar_constancy_defect: constancy,
        commutator_max_deviation: commutator,
        commutator_grid_points: pointer.grid().points(),
        shift: VslShiftJson {
            flat_weak_velocity: v0,
            t_b,
            displacement_speed_min: speed_min,
            displacement_speed_max: speed_max,
            norm_defect: shift.norm_defect,
            mean_z: shift.field.mean_z(),
        },
        flat_reduction_max_abs: flat_reduction,
    }))
}

fn causality(cfg: &ExperimentConfig, dry: bool) -> Result<Option<Results>, CliError> {
    let (alpha, beta) = selection(cfg)?;
    let tau = real_tau(cfg)?;
    if dry {
        return Ok(None);
    }
    let c0 = cfg.units.c0;
    let v = weak_velocity_closed_form(alpha, beta, Complex64::new(tau, 0.0), c0)?;
    let verdict = oneway::causality_class(v.re, c0)?;
    Ok(Some(Results::Causality {
        weak_velocity: v.into(),
        speed_ratio: v.re.abs() / c0,
        verdict: verdict.into(),
    }))
}

// ---- scans ----

fn prepare_scan(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let scan = cfg
        .scan
        .as_ref()
        .ok_or_else(|| CliError::config("scan mode needs a [scan] section"))?;
    scan.points()?;
    match scan.variable {
        ScanVariable::Tau => {
            selection(cfg)?;
            if scan.spacing != ScanSpacing::Linear {
                return Err(CliError::config("tau scans are linear"));
            }
        }
        ScanVariable::TB => {
            selection(cfg)?;
            time_states(cfg)?;
            pointer_field(cfg)?;
            cfg.desync.build()?;
        }
        ScanVariable::Epsilon => {
            if scan.min <= 0.0 || scan.max >= 1.0 {
                return Err(CliError::config("epsilon scans must stay inside (0, 1)"));
            }
            if cfg.run.length.is_nan() || cfg.run.length <= 0.0 {
                return Err(CliError::config("run.length must be positive"));
            }
        }
    }
    Ok(())
}

pub fn scan(cfg: &ExperimentConfig, _base: &Path) -> Result<Outcome, CliError> {
    prepare_scan(cfg)?;
    let scan = cfg.scan.as_ref().expect("checked by prepare_scan");
    let csv = match scan.variable {
        ScanVariable::Tau => tau_scan_csv(cfg)?,
        ScanVariable::TB => t_b_scan_csv(cfg)?,
        ScanVariable::Epsilon => epsilon_scan_csv(cfg)?,
    };
    let path = resolve_output(&scan.output);
    write_atomic(&path, csv.as_bytes())?;
    let rows = csv.lines().count().saturating_sub(1);
    Ok(Outcome {
        summary: vec![format!("{rows} rows -> {}", path.display())],
    })
}

fn tau_scan_csv(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let (alpha, beta) = selection(cfg)?;
    let scan = cfg.scan.as_ref().expect("scan section present");
    let rows = epsilon_tau_scan(alpha, beta, scan.min, scan.max, scan.steps)?;
    let mut out = String::from(
        "tau,weak_velocity_over_c,epsilon,epsilon_in_range,tau_bound_ok,pole\n",
    );
    for row in rows {
        let velocity = row.weak_velocity_over_c.map(csv_float).unwrap_or_default();
        let epsilon = row.epsilon.map(csv_float).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            csv_float(row.tau),
            velocity,
            epsilon,
            row.epsilon_in_range,
            row.tau_bound_ok,
            row.pole
        );
    }
    Ok(out)
}

fn t_b_scan_csv(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let (alpha, beta) = selection(cfg)?;
    let states = time_states(cfg)?;
    let pointer = pointer_field(cfg)?;
    let g = cfg.desync.build()?;
    let pair = build_pre_post(alpha, beta, &states, 1)?;
    let scan = cfg.scan.as_ref().expect("scan section present");
    let points = scan.points()?;
    let c0 = cfg.units.c0;
    let eps = pointer.epsilon_width();

    let mut out = String::from(
        "t_b,displacement_over_width,mean_z,measured_weak_velocity,predicted_re,predicted_im,\
         abs_deviation,deviation_ratio,fidelity,post_selection_probability\n",
    );
    let mut previous_deviation: Option<f64> = None;
    for &t_b in &points {
        let (_, report) = evolve_exact(&pointer, &pair, &g, c0, t_b)?;
        let deviation = (report.measured_weak_velocity - report.predicted_weak_velocity.re).abs();
        let ratio = previous_deviation
            .filter(|&prev| prev > 0.0)
            .map(|prev| csv_float(deviation / prev))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            csv_float(t_b),
            csv_float(c0 * t_b / eps),
            csv_float(report.mean_z),
            csv_float(report.measured_weak_velocity),
            csv_float(report.predicted_weak_velocity.re),
            csv_float(report.predicted_weak_velocity.im),
            csv_float(deviation),
            ratio,
            csv_float(report.fidelity_to_weak_prediction),
            csv_float(report.post_selection_probability),
        );
        previous_deviation = Some(deviation);
    }
    Ok(out)
}

fn epsilon_scan_csv(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let scan = cfg.scan.as_ref().expect("scan section present");
    let points = scan.points()?;
    let c0 = cfg.units.c0;
    let length = cfg.run.length;
    let mut out =
        String::from("epsilon,c_forward,c_backward,harmonic_mean,roundtrip_c_effective\n");
    for &eps in &points {
        let conv = oneway::SynchronizationConvention::new(eps, c0)?;
        let speeds = oneway::directional_speeds(&conv);
        let harmonic = 2.0 / (1.0 / speeds.forward + 1.0 / speeds.backward);
        let rt = oneway::roundtrip_check(&conv, length)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_float(eps),
            csv_float(speeds.forward),
            csv_float(speeds.backward),
            csv_float(harmonic),
            csv_float(rt.c_effective),
        );
    }
    Ok(out)
}

// ---- summaries ----

fn summarize(results: &Results) -> Vec<String> {
    match results {
        Results::WeakVelocity {
            tau,
            closed_form,
            full_contraction,
            closed_vs_full_abs,
            epsilon,
            ..
        } => {
            let mut lines = vec![
                format!("tau = {} + {}i", tau.re, tau.im),
                format!(
                    "weak velocity: closed {} + {}i, full {} + {}i (|diff| {:.3e})",
                    closed_form.re,
                    closed_form.im,
                    full_contraction.re,
                    full_contraction.im,
                    closed_vs_full_abs
                ),
            ];
            if let Some(eps) = epsilon {
                lines.push(format!(
                    "epsilon = {} (in range: {})",
                    eps.value, eps.in_range
                ));
            }
            lines
        }
        Results::NspinOracle {
            n_spins,
            abs_difference,
            ..
        } => vec![format!(
            "N = {n_spins}: |closed − full| = {abs_difference:.3e}"
        )],
        Results::Pointer {
            rows, convergence, ..
        } => {
            let mut lines: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "t_b = {}: measured {} vs predicted {} (fidelity {})",
                        r.t_b,
                        r.measured_weak_velocity,
                        r.predicted_weak_velocity.re,
                        r.fidelity_to_weak_prediction
                    )
                })
                .collect();
            if let Some(c) = convergence {
                lines.push(format!("estimated order: {}", c.estimated_order));
            }
            lines
        }
        Results::ClockDesync { rows } => rows
            .iter()
            .map(|r| {
                format!(
                    "t_b = {}: advance {} (expected {}, error {:.3e})",
                    r.t_b, r.measured_advance, r.expected_advance, r.advance_error
                )
            })
            .collect(),
        Results::OnewayMap {
            epsilon,
            directional_speeds,
            roundtrip,
            ..
        } => vec![
            format!("epsilon = {}", epsilon.value),
            format!(
                "c_forward = {}, c_backward = {}, roundtrip c = {}",
                directional_speeds.forward, directional_speeds.backward, roundtrip.c_effective
            ),
        ],
        Results::Vsl {
            hbar_constancy_defect,
            commutator_max_deviation,
            shift,
            ..
        } => vec![
            format!("constancy defect {hbar_constancy_defect:.3e}"),
            format!("commutator deviation {commutator_max_deviation:.3e}"),
            format!(
                "shift: mean_z {} (norm defect {:.3e})",
                shift.mean_z, shift.norm_defect
            ),
        ],
        Results::Causality {
            weak_velocity,
            verdict,
            ..
        } => vec![format!(
            "v = {}c: {} (information transmitted: {})",
            weak_velocity.re, verdict.regime, verdict.information_transmitted
        )],
    }
}
