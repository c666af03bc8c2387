//! Declarative experiment configuration: a flat TOML file with one section
//! per concern. Unknown keys are rejected everywhere, and every run report
//! embeds the parsed configuration so results stay reproducible from the
//! report alone.

use crate::error::CliError;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use weakvel::clock::DesyncProfile;
use weakvel::vsl::SpeedProfileKind;
use weakvel::{tolerances, Grid64};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub units: Units,
    pub selection: Option<Selection>,
    pub clock: Option<ClockSection>,
    #[serde(default)]
    pub desync: DesyncSection,
    pub pointer: Option<PointerSection>,
    #[serde(default)]
    pub run: RunSection,
    pub vsl: Option<VslSection>,
    pub scan: Option<ScanSection>,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub tolerances: ToleranceSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    WeakVelocity,
    NspinOracle,
    Pointer,
    ClockDesync,
    OnewayMap,
    Vsl,
    Causality,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::WeakVelocity => "weak-velocity",
            ExperimentKind::NspinOracle => "nspin-oracle",
            ExperimentKind::Pointer => "pointer",
            ExperimentKind::ClockDesync => "clock-desync",
            ExperimentKind::OnewayMap => "oneway-map",
            ExperimentKind::Vsl => "vsl",
            ExperimentKind::Causality => "causality",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    #[serde(default = "one")]
    pub c0: f64,
    #[serde(default = "one")]
    pub hbar0: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for Units {
    fn default() -> Self {
        Units {
            c0: 1.0,
            hbar0: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Selection {
    pub alpha: f64,
    pub beta: f64,
}

impl Selection {
    /// Validate α² + β² = 1 to the config tolerance, then renormalize
    /// exactly so downstream invariants hold at machine precision.
    pub fn normalized(&self) -> Result<(f64, f64), CliError> {
        let norm_sq = self.alpha * self.alpha + self.beta * self.beta;
        if (norm_sq - 1.0).abs() > 1e-9 {
            return Err(CliError::config(format!(
                "selection must satisfy α² + β² = 1 (got {norm_sq})"
            )));
        }
        let norm = norm_sq.sqrt();
        Ok((self.alpha / norm, self.beta / norm))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid64, CliError> {
        Grid64::new(self.min, self.max, self.points).map_err(CliError::from)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSpec {
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClockSection {
    pub grid: GridSpec,
    pub in_plus: PacketSpec,
    pub in_minus: PacketSpec,
    pub fin_plus: PacketSpec,
    pub fin_minus: PacketSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesyncKind {
    Zero,
    Constant,
    Table,
    Ramp,
    Sin2,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesyncSection {
    pub kind: DesyncKind,
    pub g0: Option<f64>,
    pub table: Option<Vec<[f64; 2]>>,
    pub slope: Option<f64>,
    pub amplitude: Option<f64>,
    pub omega: Option<f64>,
}

impl Default for DesyncSection {
    fn default() -> Self {
        DesyncSection {
            kind: DesyncKind::Zero,
            g0: None,
            table: None,
            slope: None,
            amplitude: None,
            omega: None,
        }
    }
}

impl DesyncSection {
    pub fn build(&self) -> Result<DesyncProfile<f64>, CliError> {
        let reject_extras = |allowed: &[&str]| -> Result<(), CliError> {
            let extras = [
                ("g0", self.g0.is_some()),
                ("table", self.table.is_some()),
                ("slope", self.slope.is_some()),
                ("amplitude", self.amplitude.is_some()),
                ("omega", self.omega.is_some()),
            ];
            for (name, present) in extras {
                if present && !allowed.contains(&name) {
                    return Err(CliError::config(format!(
                        "desync key `{name}` does not apply to this kind"
                    )));
                }
            }
            Ok(())
        };
        let profile = match self.kind {
            DesyncKind::Zero => {
                reject_extras(&[])?;
                DesyncProfile::Zero
            }
            DesyncKind::Constant => {
                reject_extras(&["g0"])?;
                let g0 = self
                    .g0
                    .ok_or_else(|| CliError::config("constant desync needs `g0`"))?;
                DesyncProfile::Constant(g0)
            }
            DesyncKind::Table => {
                reject_extras(&["table"])?;
                let rows = self
                    .table
                    .as_ref()
                    .ok_or_else(|| CliError::config("table desync needs `table`"))?;
                DesyncProfile::Table(rows.iter().map(|r| (r[0], r[1])).collect())
            }
            DesyncKind::Ramp => {
                reject_extras(&["slope"])?;
                let slope = self
                    .slope
                    .ok_or_else(|| CliError::config("ramp desync needs `slope`"))?;
                DesyncProfile::Ramp { slope }
            }
            DesyncKind::Sin2 => {
                reject_extras(&["amplitude", "omega"])?;
                let amplitude = self
                    .amplitude
                    .ok_or_else(|| CliError::config("sin2 desync needs `amplitude`"))?;
                let omega = self
                    .omega
                    .ok_or_else(|| CliError::config("sin2 desync needs `omega`"))?;
                DesyncProfile::SinSquared { amplitude, omega }
            }
        };
        profile.validate()?;
        Ok(profile)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointerSection {
    pub grid: GridSpec,
    pub epsilon_width: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "one_spin")]
    pub n_spins: usize,
    #[serde(default)]
    pub t_b: Vec<f64>,
    pub tau_override: Option<f64>,
    #[serde(default = "one")]
    pub length: f64,
    pub epsilon: Option<f64>,
}

fn one_spin() -> usize {
    1
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            n_spins: 1,
            t_b: Vec::new(),
            tau_override: None,
            length: 1.0,
            epsilon: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKindName {
    Constant,
    Tanh,
    Table,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub kind: ProfileKindName,
    pub amplitude: Option<f64>,
    pub length_scale: Option<f64>,
    pub path: Option<PathBuf>,
}

impl ProfileSpec {
    pub fn build(&self, c0: f64, base_dir: &Path) -> Result<SpeedProfileKind<f64>, CliError> {
        match self.kind {
            ProfileKindName::Constant => Ok(SpeedProfileKind::Constant { c0 }),
            ProfileKindName::Tanh => {
                let amplitude = self
                    .amplitude
                    .ok_or_else(|| CliError::config("tanh profile needs `amplitude`"))?;
                let length_scale = self
                    .length_scale
                    .ok_or_else(|| CliError::config("tanh profile needs `length_scale`"))?;
                Ok(SpeedProfileKind::Tanh {
                    c0,
                    amplitude,
                    length_scale,
                })
            }
            ProfileKindName::Table => {
                let path = self
                    .path
                    .as_ref()
                    .ok_or_else(|| CliError::config("table profile needs `path`"))?;
                let resolved = if path.is_absolute() {
                    path.clone()
                } else {
                    base_dir.join(path)
                };
                Ok(SpeedProfileKind::Table(read_speed_table(&resolved)?))
            }
        }
    }
}

/// Parse a `z, c` CSV table; a single header row is allowed.
pub fn read_speed_table(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::config(format!("cannot read speed table {}: {e}", path.display()))
    })?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (Some(z), Some(c)) = (cols.next(), cols.next()) else {
            return Err(CliError::config(format!(
                "speed table {}:{}: expected two columns `z, c`",
                path.display(),
                lineno + 1
            )));
        };
        match (z.parse::<f64>(), c.parse::<f64>()) {
            (Ok(z), Ok(c)) => rows.push((z, c)),
            _ if lineno == 0 => continue, // header row
            _ => {
                return Err(CliError::config(format!(
                    "speed table {}:{}: cannot parse `{line}`",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::config(format!(
            "speed table {} has no data rows",
            path.display()
        )));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VslSection {
    pub profile: ProfileSpec,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanVariable {
    Tau,
    TB,
    Epsilon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanSpacing {
    Linear,
    Geometric,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub variable: ScanVariable,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    #[serde(default = "linear")]
    pub spacing: ScanSpacing,
    pub output: PathBuf,
}

fn linear() -> ScanSpacing {
    ScanSpacing::Linear
}

impl ScanSection {
    /// Scan points in deterministic ascending order.
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        if self.steps < 1 {
            return Err(CliError::config("scan needs steps ≥ 1"));
        }
        if self.max < self.min {
            return Err(CliError::config("scan needs max ≥ min"));
        }
        if self.steps == 1 {
            return Ok(vec![self.min]);
        }
        match self.spacing {
            ScanSpacing::Linear => Ok((0..self.steps)
                .map(|j| self.min + (self.max - self.min) * j as f64 / (self.steps - 1) as f64)
                .collect()),
            ScanSpacing::Geometric => {
                if self.min <= 0.0 {
                    return Err(CliError::config("geometric scan needs min > 0"));
                }
                let ratio = self.max / self.min;
                Ok((0..self.steps)
                    .map(|j| self.min * ratio.powf(j as f64 / (self.steps - 1) as f64))
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_report")]
    pub report: PathBuf,
    pub field_dump: Option<PathBuf>,
}

fn default_report() -> PathBuf {
    PathBuf::from("report.json")
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            report: default_report(),
            field_dump: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    #[serde(default = "default_orthogonality")]
    pub orthogonality_threshold: f64,
    #[serde(default = "default_real_tau")]
    pub real_tau_threshold: f64,
    #[serde(default = "default_margin_warn")]
    pub weak_margin_warn: f64,
}

fn default_orthogonality() -> f64 {
    tolerances::ORTHOGONALITY
}

fn default_real_tau() -> f64 {
    tolerances::REAL_TAU
}

fn default_margin_warn() -> f64 {
    tolerances::WEAK_MARGIN_WARN
}

impl Default for ToleranceSection {
    fn default() -> Self {
        ToleranceSection {
            orthogonality_threshold: tolerances::ORTHOGONALITY,
            real_tau_threshold: tolerances::REAL_TAU,
            weak_margin_warn: tolerances::WEAK_MARGIN_WARN,
        }
    }
}

/// Load and parse a config file. Schema errors are config errors (exit 2).
pub fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}
