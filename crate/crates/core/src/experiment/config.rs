use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{SiteCoordinates, ZeroModePolicy};
use crate::error::{Error, Result};
use crate::floquet::DriveProtocol;
use crate::model::{ChainParams, DisorderKind, DisorderRange, DisorderSpec, Model2D, DEFAULT_MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig4,
    Custom,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::Fig2a,
        Scenario::Fig2b,
        Scenario::Fig3a,
        Scenario::Fig3b,
        Scenario::Fig3c,
        Scenario::Fig4,
        Scenario::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fig2a => "fig2a",
            Scenario::Fig2b => "fig2b",
            Scenario::Fig3a => "fig3a",
            Scenario::Fig3b => "fig3b",
            Scenario::Fig3c => "fig3c",
            Scenario::Fig4 => "fig4",
            Scenario::Custom => "custom",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Scenario::Fig2a => "Min|E| and V_2D vs vx, separable 200x200 cells",
            Scenario::Fig2b => "Min|E|, wipr and kappa vs chiral disorder d at vx=-1.5, 60x60 cells",
            Scenario::Fig3a => "Min[s] and zero-mode count vs vx, dense 20x20 cells",
            Scenario::Fig3b => "Min[s] vs system size at vx=1.5 with corner-state mass",
            Scenario::Fig3c => "real-space and non-Bloch windings vs vx, dense 20x20 cells",
            Scenario::Fig4 => "Floquet Min[s-+] and V-+ vs vx, 20x20 cells",
            Scenario::Custom => "single point, fully user-configured",
        }
    }

    /// Fully populated configuration for this scenario.
    pub fn preset(self) -> ExperimentConfig {
        let fig3_model = ModelConfig {
            wx: 1.0,
            gamma_x: 1.5,
            wy: 0.0,
            gamma_y: 9.0,
            vx: 1.5,
            vy: None,
            vy_ratio: 6.0,
            lx: 20,
            ly: 20,
        };
        let base = ExperimentConfig {
            scenario: self,
            seed: 0x5eed_2d55,
            model: fig3_model.clone(),
            sweep: SweepConfig::none(),
            disorder: None,
            drive: None,
            analysis: AnalysisConfig::default(),
            output: OutputConfig::new(self),
            limits: Limits::default(),
            paper_scale: None,
        };
        use Diagnostic::*;
        match self {
            Scenario::Fig2a => ExperimentConfig {
                model: ModelConfig { lx: 200, ly: 200, ..fig3_model },
                sweep: SweepConfig::linear(SweepParameter::Vx, 0.0, 2.0, 101),
                analysis: AnalysisConfig {
                    method: Method::Separable,
                    diagnostics: vec![MinAbsE, VNonbloch],
                    ..AnalysisConfig::default()
                },
                output: OutputConfig {
                    plots: vec!["min_abs_e".into(), "v_2d".into()],
                    log_scale: vec!["min_abs_e".into()],
                    ..base.output.clone()
                },
                paper_scale: Some(PaperScale { lx: 1000, ly: 1000 }),
                ..base
            },
            Scenario::Fig2b => ExperimentConfig {
                model: ModelConfig {
                    vx: -1.5,
                    lx: 60,
                    ly: 60,
                    ..fig3_model
                },
                sweep: SweepConfig::linear(SweepParameter::Disorder, 0.0, 0.4, 9),
                disorder: Some(DisorderConfig {
                    kind: DisorderKind::ChiralPreserving,
                    strength: 0.0,
                    range: DisorderRange::Dense,
                    symmetric: false,
                    realizations: 10,
                }),
                analysis: AnalysisConfig {
                    method: Method::Separable,
                    diagnostics: vec![MinAbsE, Wipr, Kappa],
                    ..AnalysisConfig::default()
                },
                output: OutputConfig {
                    plots: vec!["min_abs_e".into(), "wipr".into()],
                    log_scale: vec![],
                    ..base.output.clone()
                },
                paper_scale: Some(PaperScale { lx: 60, ly: 60 }),
                ..base
            },
            Scenario::Fig3a => ExperimentConfig {
                sweep: SweepConfig::linear(SweepParameter::Vx, 0.0, 1.6, 33),
                analysis: AnalysisConfig {
                    diagnostics: vec![MinS, ZeroModes],
                    ..AnalysisConfig::default()
                },
                output: OutputConfig {
                    plots: vec!["min_s".into(), "zero_modes".into()],
                    log_scale: vec!["min_s".into()],
                    ..base.output.clone()
                },
                paper_scale: Some(PaperScale { lx: 40, ly: 40 }),
                ..base
            },
            Scenario::Fig3b => ExperimentConfig {
                sweep: SweepConfig {
                    parameter: SweepParameter::Size,
                    sizes: vec![8, 12, 16, 20, 24, 28],
                    ..SweepConfig::none()
                },
                analysis: AnalysisConfig {
                    diagnostics: vec![MinS, ZeroModes, CornerMass],
                    ..AnalysisConfig::default()
                },
                output: OutputConfig {
                    plots: vec!["min_s".into()],
                    log_scale: vec!["min_s".into()],
                    ..base.output.clone()
                },
                ..base
            },
            Scenario::Fig3c => ExperimentConfig {
                sweep: SweepConfig::linear(SweepParameter::Vx, 0.0, 1.6, 33),
                analysis: AnalysisConfig {
                    diagnostics: vec![MinS, ZeroModes, VRealspace, VNonbloch],
                    ..AnalysisConfig::default()
                },
                output: OutputConfig {
                    plots: vec!["v_realspace".into(), "v_2d".into()],
                    log_scale: vec![],
                    ..base.output.clone()
                },
                paper_scale: Some(PaperScale { lx: 40, ly: 40 }),
                ..base
            },
            Scenario::Fig4 => ExperimentConfig {
                model: ModelConfig {
                    wx: 1.0,
                    gamma_x: 1.5,
                    wy: 0.0,
                    gamma_y: 10.5,
                    vx: 1.7,
                    vy: None,
                    vy_ratio: 7.0,
                    lx: 20,
                    ly: 20,
                },
                sweep: SweepConfig::linear(SweepParameter::Vx, 0.0, 2.5, 51),
                drive: Some(DriveConfig {
                    period: 0.6,
                    first_duration: 0.3,
                    qx: 0.2,
                    qy: 0.2,
                }),
                analysis: AnalysisConfig {
                    diagnostics: vec![Floquet],
                    ..AnalysisConfig::default()
                },
                output: OutputConfig {
                    plots: vec![
                        "min_s_minus".into(),
                        "min_s_plus".into(),
                        "v_minus".into(),
                        "v_plus".into(),
                    ],
                    log_scale: vec!["min_s_minus".into(), "min_s_plus".into()],
                    ..base.output.clone()
                },
                paper_scale: Some(PaperScale { lx: 40, ly: 40 }),
                ..base
            },
            Scenario::Custom => ExperimentConfig {
                model: ModelConfig { lx: 10, ly: 10, ..fig3_model },
                analysis: AnalysisConfig {
                    diagnostics: vec![MinS, ZeroModes, VRealspace, VNonbloch],
                    ..AnalysisConfig::default()
                },
                ..base
            },
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown scenario `{s}` (expected one of fig2a, fig2b, fig3a, fig3b, fig3c, fig4, custom)"
                ))
            })
    }
}

/// Static model; `vy = vy_ratio·vx` unless `vy` is pinned.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub wx: f64,
    pub gamma_x: f64,
    pub wy: f64,
    pub gamma_y: f64,
    pub vx: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vy: Option<f64>,
    pub vy_ratio: f64,
    pub lx: usize,
    pub ly: usize,
}

impl ModelConfig {
    pub fn vy_for(&self, vx: f64) -> f64 {
        self.vy.unwrap_or(self.vy_ratio * vx)
    }

    pub fn build(&self, vx: f64, lx: usize, ly: usize) -> Result<Model2D> {
        Model2D::new(
            ChainParams::new(self.wx, vx, self.gamma_x)?,
            ChainParams::new(self.wy, self.vy_for(vx), self.gamma_y)?,
            lx,
            ly,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Single point at the model's `vx`.
    None,
    Vx,
    /// Disorder strength `d` (or `d′`).
    Disorder,
    /// `Lx = Ly = L` over `sizes`.
    Size,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    #[serde(default)]
    pub start: f64,
    #[serde(default)]
    pub stop: f64,
    #[serde(default)]
    pub points: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sizes: Vec<usize>,
}

impl SweepConfig {
    pub fn none() -> Self {
        SweepConfig {
            parameter: SweepParameter::None,
            start: 0.0,
            stop: 0.0,
            points: 0,
            sizes: Vec::new(),
        }
    }

    pub fn linear(parameter: SweepParameter, start: f64, stop: f64, points: usize) -> Self {
        SweepConfig {
            parameter,
            start,
            stop,
            points,
            sizes: Vec::new(),
        }
    }

    /// Sweep values in order; `start + (stop − start)·i/(n − 1)`.
    pub fn values(&self, model: &ModelConfig) -> Vec<f64> {
        match self.parameter {
            SweepParameter::None => vec![model.vx],
            SweepParameter::Size => self.sizes.iter().map(|&l| l as f64).collect(),
            SweepParameter::Vx | SweepParameter::Disorder => match self.points {
                0 => Vec::new(),
                1 => vec![self.start],
                n => (0..n)
                    .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderConfig {
    pub kind: DisorderKind,
    /// Ignored when the sweep runs over disorder strength.
    pub strength: f64,
    #[serde(default)]
    pub range: DisorderRange,
    #[serde(default)]
    pub symmetric: bool,
    pub realizations: usize,
}

impl DisorderConfig {
    pub fn spec(&self, strength: f64, seed: u64) -> DisorderSpec {
        DisorderSpec {
            kind: self.kind,
            strength,
            seed,
            range: self.range,
            symmetric: self.symmetric,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    pub period: f64,
    pub first_duration: f64,
    pub qx: f64,
    pub qy: f64,
}

impl DriveConfig {
    /// Protocol with `fx = vx`, `fy = vy`.
    pub fn protocol(&self, fx: f64, fy: f64) -> Result<DriveProtocol> {
        DriveProtocol::new(self.period, self.first_duration, self.qx, self.qy, fx, fy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// 1D factor decompositions for Min|E|, wipr and κ.
    Separable,
    /// Full 2D decompositions.
    Dense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostic {
    MinAbsE,
    MinS,
    Wipr,
    Kappa,
    VNonbloch,
    VRealspace,
    ZeroModes,
    CornerMass,
    Floquet,
}

impl Diagnostic {
    /// Needs the SVD of the dense 2D Hamiltonian.
    pub fn needs_svd(self) -> bool {
        matches!(
            self,
            Diagnostic::MinS | Diagnostic::VRealspace | Diagnostic::ZeroModes | Diagnostic::CornerMass
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub method: Method,
    pub diagnostics: Vec<Diagnostic>,
    #[serde(default)]
    pub zero_mode_policy: ZeroModePolicy,
    #[serde(default)]
    pub coordinates: SiteCoordinates,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

fn default_grid() -> usize {
    256
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            method: Method::Dense,
            diagnostics: vec![Diagnostic::MinS],
            zero_mode_policy: ZeroModePolicy::default(),
            coordinates: SiteCoordinates::default(),
            grid: default_grid(),
        }
    }
}

impl AnalysisConfig {
    pub fn wants(&self, d: Diagnostic) -> bool {
        self.diagnostics.contains(&d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
    #[serde(default)]
    pub plots: Vec<String>,
    #[serde(default)]
    pub log_scale: Vec<String>,
}

impl OutputConfig {
    fn new(s: Scenario) -> Self {
        OutputConfig {
            dir: PathBuf::from("out").join(s.name()),
            formats: vec![Format::Csv, Format::Json, Format::Svg],
            plots: vec!["min_s".into()],
            log_scale: vec!["min_s".into()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    pub max_dim: usize,
    /// Worker threads; `0` uses every available core.
    pub threads: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: DEFAULT_MAX_DIM,
            threads: 0,
        }
    }
}

/// Lattice extents used in the paper, recorded next to the run scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaperScale {
    pub lx: usize,
    pub ly: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub seed: u64,
    pub model: ModelConfig,
    pub sweep: SweepConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disorder: Option<DisorderConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveConfig>,
    pub analysis: AnalysisConfig,
    pub output: OutputConfig,
    pub limits: Limits,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_scale: Option<PaperScale>,
}

impl ExperimentConfig {
    /// Parse a TOML document layered over the preset named by its `scenario`
    /// key (or `base` when given, or `custom`).
    pub fn from_toml_str(text: &str, base: Option<Scenario>) -> Result<Self> {
        let overlay: toml::Table = toml::from_str(text)?;
        let scenario = match (base, overlay.get("scenario")) {
            (Some(s), _) => s,
            (None, Some(toml::Value::String(s))) => s.parse()?,
            (None, Some(other)) => {
                return Err(Error::Config(format!("scenario must be a string, got {other}")))
            }
            (None, None) => Scenario::Custom,
        };
        let mut merged = toml::Table::try_from(scenario.preset())?;
        merge(&mut merged, overlay);
        let cfg: ExperimentConfig = merged.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Read a TOML config, or the `config` member of a JSON manifest.
    pub fn load(path: &Path, base: Option<Scenario>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let cfg_value = value.get("config").cloned().unwrap_or(value);
            let cfg: ExperimentConfig =
                serde_json::from_value(cfg_value).map_err(|e| Error::Config(e.to_string()))?;
            cfg.validate()?;
            return Ok(cfg);
        }
        Self::from_toml_str(&text, base)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let m = &self.model;
        let reals = [m.wx, m.gamma_x, m.wy, m.gamma_y, m.vx, m.vy_ratio, m.vy.unwrap_or(0.0)];
        if reals.iter().any(|x| !x.is_finite()) {
            return bad("model parameters must be finite".into());
        }
        if m.lx == 0 || m.ly == 0 {
            return bad("lattice extents lx, ly must be at least 1".into());
        }
        let s = &self.sweep;
        if !(s.start.is_finite() && s.stop.is_finite()) {
            return bad("sweep range must be finite".into());
        }
        match s.parameter {
            SweepParameter::Size if s.sizes.contains(&0) => {
                return bad("sweep sizes must be at least 1".into())
            }
            SweepParameter::Disorder if self.disorder.is_none() => {
                return bad("a disorder sweep needs a [disorder] table".into())
            }
            SweepParameter::Disorder if s.start < 0.0 || s.stop < 0.0 => {
                return bad("disorder strengths must be non-negative".into())
            }
            _ => {}
        }
        if let Some(d) = &self.disorder {
            if d.realizations == 0 {
                return bad("disorder realizations must be at least 1".into());
            }
            if !(d.strength.is_finite() && d.strength >= 0.0) {
                return bad("disorder strength must be finite and non-negative".into());
            }
        }
        if self.analysis.diagnostics.is_empty() {
            return bad("at least one diagnostic is required".into());
        }
        if self.analysis.grid < crate::invariants::MIN_GRID {
            return bad(format!(
                "analysis grid must be at least {}",
                crate::invariants::MIN_GRID
            ));
        }
        let floquet = self.analysis.wants(Diagnostic::Floquet);
        match (&self.drive, floquet) {
            (None, true) => return bad("the floquet diagnostic needs a [drive] table".into()),
            (Some(d), true) => {
                d.protocol(m.vx, m.vy_for(m.vx))?;
                if self.disorder.is_some() {
                    return bad("disorder is not supported for driven models".into());
                }
            }
            _ => {}
        }
        if self.output.formats.is_empty() {
            return bad("at least one output format is required".into());
        }
        for col in self.output.plots.iter().chain(&self.output.log_scale) {
            if !super::record::PLOTTABLE.contains(&col.as_str()) {
                return bad(format!("`{col}` is not a plottable column"));
            }
        }
        if self.limits.max_dim == 0 {
            return bad("max_dim must be positive".into());
        }
        Ok(())
    }

    /// Lattice extents at one sweep value.
    pub fn extents_at(&self, value: f64) -> (usize, usize) {
        match self.sweep.parameter {
            SweepParameter::Size => (value as usize, value as usize),
            _ => (self.model.lx, self.model.ly),
        }
    }

    /// Dense 2D dimension the configuration will need, or `None` when no
    /// dense 2D matrix is formed.
    pub fn dense_dim(&self) -> Option<usize> {
        let a = &self.analysis;
        let dense = a.method == Method::Dense
            && a.diagnostics
                .iter()
                .any(|d| matches!(d, Diagnostic::MinAbsE | Diagnostic::Wipr | Diagnostic::Kappa))
            || a.diagnostics.iter().any(|d| d.needs_svd() || *d == Diagnostic::Floquet);
        if !dense {
            return None;
        }
        self.sweep
            .values(&self.model)
            .into_iter()
            .map(|v| {
                let (lx, ly) = self.extents_at(v);
                4 * lx * ly
            })
            .max()
    }

    pub fn realizations(&self) -> usize {
        self.disorder.as_ref().map_or(1, |d| d.realizations)
    }
}

fn merge(base: &mut toml::Table, overlay: toml::Table) {
    for (key, value) in overlay {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate_and_round_trip() {
        for s in Scenario::ALL {
            let cfg = s.preset();
            cfg.validate().unwrap();
            let text = cfg.to_toml_string().unwrap();
            let back = ExperimentConfig::from_toml_str(&text, None).unwrap();
            assert_eq!(back, cfg, "{s}");
        }
    }

    #[test]
    fn overlay_changes_only_named_keys() {
        let cfg = ExperimentConfig::from_toml_str(
            "scenario = \"fig3a\"\n[model]\nlx = 6\nly = 6\n[sweep]\npoints = 3\n",
            None,
        )
        .unwrap();
        assert_eq!((cfg.model.lx, cfg.model.ly), (6, 6));
        assert_eq!(cfg.model.gamma_y, 9.0);
        assert_eq!(cfg.sweep.values(&cfg.model), vec![0.0, 0.8, 1.6]);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        assert!(ExperimentConfig::from_toml_str("[model]\nwz = 1.0\n", None).is_err());
        assert!(ExperimentConfig::from_toml_str("scenario = \"fig9\"\n", None).is_err());
        let no_real = "scenario = \"fig2b\"\n[disorder]\nrealizations = 0\n";
        assert!(matches!(
            ExperimentConfig::from_toml_str(no_real, None),
            Err(Error::Config(_))
        ));
        let inf = "[sweep]\nparameter = \"vx\"\nstart = 0.0\nstop = inf\npoints = 3\n";
        assert!(ExperimentConfig::from_toml_str(inf, None).is_err());
    }

    #[test]
    fn fig_presets_carry_caption_parameters() {
        let f3 = Scenario::Fig3a.preset();
        assert_eq!(
            (f3.model.wx, f3.model.wy, f3.model.gamma_x, f3.model.gamma_y, f3.model.vy_ratio),
            (1.0, 0.0, 1.5, 9.0, 6.0)
        );
        let f2b = Scenario::Fig2b.preset();
        assert_eq!((f2b.model.vx, f2b.model.vy_for(f2b.model.vx)), (-1.5, -9.0));
        let f4 = Scenario::Fig4.preset();
        let d = f4.drive.unwrap();
        assert_eq!((d.period, d.first_duration, d.qx, d.qy), (0.6, 0.3, 0.2, 0.2));
        assert_eq!((f4.model.gamma_y, f4.model.vy_ratio), (10.5, 7.0));
    }

    #[test]
    fn linear_sweep_endpoints_are_exact() {
        let s = SweepConfig::linear(SweepParameter::Vx, 0.0, 2.0, 101);
        let v = s.values(&Scenario::Fig2a.preset().model);
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[100], 2.0);
        assert!(SweepConfig::linear(SweepParameter::Vx, 0.0, 1.0, 0)
            .values(&Scenario::Custom.preset().model)
            .is_empty());
    }
}
