//! Run reports: JSON with a provenance block, the echoed configuration, and
//! a results object per experiment kind. Every float is serialized with 17
//! significant digits so reports round-trip double precision losslessly and
//! identical runs produce byte-identical files.

use crate::config::{ExperimentConfig, ToleranceSection};
use crate::error::CliError;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: "weakvel",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchOverlaps {
    pub plus: ComplexJson,
    pub minus: ComplexJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpsilonJson {
    pub value: f64,
    pub in_range: bool,
    pub tau_bound_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpeedsJson {
    pub forward: f64,
    pub backward: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictJson {
    pub regime: String,
    pub information_transmitted: bool,
    pub note: String,
}

impl From<weakvel::oneway::CausalityVerdict> for VerdictJson {
    fn from(v: weakvel::oneway::CausalityVerdict) -> Self {
        VerdictJson {
            regime: v.regime.as_str().to_string(),
            information_transmitted: v.information_transmitted,
            note: v.note,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointerRowJson {
    pub t_b: f64,
    /// Dimensionless displacement scale c·t_B/ε.
    pub displacement_over_width: f64,
    pub mean_z: f64,
    pub measured_weak_velocity: f64,
    pub predicted_weak_velocity: ComplexJson,
    pub abs_deviation: f64,
    pub fidelity_to_weak_prediction: f64,
    pub post_selection_probability: f64,
    pub weak_regime_margin: f64,
    pub margin_warning: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceJson {
    /// Consecutive deviation ratios along the t_B schedule.
    pub deviation_ratios: Vec<f64>,
    /// Least-squares slope of ln(deviation) against ln(t_B).
    pub estimated_order: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DesyncRowJson {
    pub t_b: f64,
    pub desync_integral: f64,
    pub expected_advance: f64,
    pub measured_advance: f64,
    pub advance_error: f64,
    pub norm_drift: f64,
    pub weak_regime_margin: f64,
    pub margin_warning: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundtripJson {
    pub length: f64,
    pub t_forward: f64,
    pub t_backward: f64,
    pub c_effective: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VslShiftJson {
    pub flat_weak_velocity: f64,
    pub t_b: f64,
    pub displacement_speed_min: f64,
    pub displacement_speed_max: f64,
    pub norm_defect: f64,
    pub mean_z: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Results {
    WeakVelocity {
        n_spins: usize,
        c0: f64,
        overlaps: BranchOverlaps,
        tau: ComplexJson,
        tau_is_real: bool,
        weak_regime_margin: Option<f64>,
        margin_warning: bool,
        closed_form: ComplexJson,
        full_contraction: ComplexJson,
        closed_vs_full_abs: f64,
        post_selection_probability: f64,
        epsilon: Option<EpsilonJson>,
        directional_speeds: Option<SpeedsJson>,
        causality: VerdictJson,
    },
    NspinOracle {
        n_spins: usize,
        c0: f64,
        tau: ComplexJson,
        closed_form: ComplexJson,
        full_contraction: ComplexJson,
        abs_difference: f64,
        post_selection_probability: f64,
    },
    Pointer {
        c0: f64,
        epsilon_width: f64,
        rows: Vec<PointerRowJson>,
        convergence: Option<ConvergenceJson>,
    },
    ClockDesync {
        rows: Vec<DesyncRowJson>,
    },
    OnewayMap {
        tau: Option<f64>,
        epsilon: EpsilonJson,
        directional_speeds: SpeedsJson,
        roundtrip: RoundtripJson,
    },
    Vsl {
        c0: f64,
        hbar0: f64,
        lambda: f64,
        hbar_constancy_defect: f64,
        commutator_max_deviation: f64,
        commutator_grid_points: usize,
        shift: VslShiftJson,
        flat_reduction_max_abs: Option<f64>,
    },
    Causality {
        weak_velocity: ComplexJson,
        speed_ratio: f64,
        verdict: VerdictJson,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport<'a> {
    pub tool: ToolInfo,
    pub tolerances: &'a ToleranceSection,
    pub config: &'a ExperimentConfig,
    pub results: Results,
}

/// Pretty JSON with every f64 printed as `{:.16e}` (17 significant digits).
struct SigFig17<'a> {
    inner: PrettyFormatter<'a>,
}

impl SigFig17<'_> {
    fn new() -> Self {
        SigFig17 {
            inner: PrettyFormatter::new(),
        }
    }
}

impl Formatter for SigFig17<'_> {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        if !value.is_finite() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                "non-finite number reached the report serializer",
            ));
        }
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_object_key(writer, first)
    }

    fn end_object_key<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_object_key(writer)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_object_value(writer)
    }
}

pub fn render_report(report: &RunReport) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::with_capacity(16 * 1024);
    let mut ser = Serializer::with_formatter(&mut out, SigFig17::new());
    report
        .serialize(&mut ser)
        .map_err(|e| CliError::io(format!("report serialization failed: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

/// Resolve an output path, honoring the `WEAKVEL_OUT_DIR` directory
/// override (file name kept).
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os("WEAKVEL_OUT_DIR") {
        Some(dir) if !dir.is_empty() => {
            let name = path.file_name().unwrap_or(path.as_os_str());
            PathBuf::from(dir).join(name)
        }
        _ => path.to_path_buf(),
    }
}

/// Write a file atomically: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::io(format!("mkdir {}: {e}", parent.display())))?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)
        .map_err(|e| CliError::io(format!("write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| CliError::io(format!("rename to {}: {e}", path.display())))
}

/// Format one float for CSV output (same 17-significant-digit contract as
/// the JSON reports).
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}
