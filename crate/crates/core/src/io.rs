//! Run configuration, dataset and report file formats, the end-to-end
//! pipeline, and plot-table emission.
//!
//! * Config: JSON, unknown keys rejected. Every default is written back out
//!   when a loaded config is saved.
//! * Dataset: CSV with columns `setting_index,eta,k,counts,shots`, preceded by
//!   `# key: value` metadata lines (`format`, `version`, provenance).
//! * Report: JSON whose `comparable_body` holds everything that is a pure
//!   function of config and seed; timing fields live outside it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::channel::{
    binomial_thinning, mix_source_noise, truncation_bound, ChannelScenario, DetectionPlan,
    NoiseDistribution, NoiseKind, Pmf, DEFAULT_TAIL_EPSILON,
};
use crate::error::{Error, Result};
use crate::metrics::{fidelity, mean_photon_number, photocount_fidelity, FidelityReport};
use crate::reconstruct::{
    objective, residuals, smoothness_penalty, solve, ReconstructionProblem, ReconstructionResult,
    SolverSettings, DEFAULT_LAMBDA,
};
use crate::sim::{simulate_run, EmpiricalDataset, SettingRecord, SimulationConfig};

pub const CONFIG_VERSION: u32 = 1;
pub const DATASET_VERSION: u32 = 1;
pub const REPORT_VERSION: u32 = 1;

const DATASET_FORMAT: &str = "chancal-dataset";
const REPORT_FORMAT: &str = "chancal-report";
const DATASET_COLUMNS: [&str; 5] = ["setting_index", "eta", "k", "counts", "shots"];

/// Noise injected into the channel: a parametric family or explicit `b(m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum NoiseSpec {
    Poisson {
        mean: f64,
        #[serde(default)]
        cutoff: Option<usize>,
    },
    Thermal {
        mean: f64,
        #[serde(default)]
        cutoff: Option<usize>,
    },
    Explicit {
        probs: Vec<f64>,
    },
}

impl NoiseSpec {
    pub fn parametric(kind: NoiseKind, mean: f64) -> Self {
        match kind {
            NoiseKind::Poisson => NoiseSpec::Poisson { mean, cutoff: None },
            NoiseKind::Thermal => NoiseSpec::Thermal { mean, cutoff: None },
        }
    }

    fn family(&self) -> Option<(NoiseKind, f64, Option<usize>)> {
        match *self {
            NoiseSpec::Poisson { mean, cutoff } => Some((NoiseKind::Poisson, mean, cutoff)),
            NoiseSpec::Thermal { mean, cutoff } => Some((NoiseKind::Thermal, mean, cutoff)),
            NoiseSpec::Explicit { .. } => None,
        }
    }

    pub fn cutoff(&self) -> Option<usize> {
        match self {
            NoiseSpec::Explicit { probs } => Some(probs.len().saturating_sub(1)),
            _ => self.family().and_then(|f| f.2),
        }
    }

    /// The distribution at its own cutoff.
    pub fn distribution(&self) -> Result<NoiseDistribution> {
        match self {
            NoiseSpec::Explicit { probs } => NoiseDistribution::new(probs.clone()),
            _ => {
                let (kind, mean, cutoff) = self.family().unwrap();
                let cutoff = match cutoff {
                    Some(c) => c,
                    None => truncation_bound(kind, mean, DEFAULT_TAIL_EPSILON)?,
                };
                kind.distribution(mean, cutoff)
            }
        }
    }

    /// The reference distribution re-expressed at `cutoff`: parametric laws
    /// are re-truncated, explicit ones are zero-padded or cut and renormalized.
    pub fn reference_at(&self, cutoff: usize) -> Result<NoiseDistribution> {
        match self {
            NoiseSpec::Explicit { probs } => {
                let mut p = probs.clone();
                p.resize(cutoff + 1, 0.0);
                let s: f64 = p.iter().sum();
                if s <= 0.0 {
                    return Err(Error::invalid("noise", "no mass below the reconstruction cutoff"));
                }
                NoiseDistribution::new(p.into_iter().map(|x| x / s).collect())
            }
            _ => {
                let (kind, mean, _) = self.family().unwrap();
                kind.distribution(mean, cutoff)
            }
        }
    }

    fn resolve(&mut self) -> Result<()> {
        if let Some((kind, mean, None)) = self.family() {
            let bound = truncation_bound(kind, mean, DEFAULT_TAIL_EPSILON)
                .map_err(|e| Error::invalid("noise.mean", e.to_string()))?;
            if let NoiseSpec::Poisson { cutoff, .. } | NoiseSpec::Thermal { cutoff, .. } = self {
                *cutoff = Some(bound);
            }
        }
        self.distribution()
            .map(drop)
            .map_err(|e| match self {
                NoiseSpec::Explicit { .. } => Error::invalid("noise.probs", e.to_string()),
                _ => Error::invalid("noise", e.to_string()),
            })
    }
}

fn default_version() -> u32 {
    CONFIG_VERSION
}
fn default_shots() -> u64 {
    100_000
}
fn default_lambda() -> f64 {
    DEFAULT_LAMBDA
}
fn default_tau_range() -> [f64; 2] {
    [0.0, 1.0]
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Attenuation plan as written in a config; `settings` defaults to ten
/// values 0.1, 0.2, ..., 1.0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSpec {
    pub eta_tot: f64,
    #[serde(default)]
    pub settings: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_det: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl PlanSpec {
    pub fn plan(&self) -> Result<DetectionPlan> {
        let settings = match &self.settings {
            Some(s) => s.clone(),
            None => DetectionPlan::evenly_spaced(self.eta_tot, 10)?.settings,
        };
        let plan = DetectionPlan {
            eta_tot: self.eta_tot,
            settings,
            eta_det: self.eta_det,
            gamma: self.gamma,
        };
        plan.validate()?;
        Ok(plan)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructionConfig {
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    /// Reconstruction cutoff `M`; defaults to the noise cutoff.
    #[serde(default)]
    pub cutoff: Option<usize>,
    #[serde(default = "default_tau_range")]
    pub tau_range: [f64; 2],
    #[serde(default)]
    pub solver: SolverSettings,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        Self {
            lambda: default_lambda(),
            cutoff: None,
            tau_range: default_tau_range(),
            solver: SolverSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_out_dir(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_version")]
    pub version: u32,
    pub scenario: ChannelScenario,
    pub noise: NoiseSpec,
    pub plan: PlanSpec,
    #[serde(default = "default_shots")]
    pub shots_per_setting: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub reconstruction: ReconstructionConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    /// Fills derived defaults (cutoffs, settings) and validates every field.
    pub fn resolve(mut self) -> Result<Self> {
        if self.version != CONFIG_VERSION {
            return Err(Error::Version {
                what: "config",
                found: self.version.to_string(),
                supported: CONFIG_VERSION,
            });
        }
        self.scenario.validate()?;
        self.noise.resolve()?;
        let plan = self.plan.plan()?;
        if plan.settings.len() < 2 {
            return Err(Error::invalid(
                "plan.settings",
                "at least two efficiency settings are required",
            ));
        }
        self.plan.settings = Some(plan.settings);
        if self.shots_per_setting < 1 {
            return Err(Error::invalid("shots_per_setting", "must be at least 1"));
        }
        let rec = &mut self.reconstruction;
        if rec.cutoff.is_none() {
            rec.cutoff = self.noise.cutoff();
        }
        if !(rec.lambda >= 0.0 && rec.lambda.is_finite()) {
            return Err(Error::invalid(
                "reconstruction.lambda",
                format!("{} must be >= 0", rec.lambda),
            ));
        }
        let [lo, hi] = rec.tau_range;
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::invalid(
                "reconstruction.tau_range",
                format!("[{lo}, {hi}] is not an interval within [0, 1]"),
            ));
        }
        Ok(self)
    }

    pub fn detection_plan(&self) -> Result<DetectionPlan> {
        self.plan.plan()
    }

    pub fn reconstruction_cutoff(&self) -> usize {
        self.reconstruction
            .cutoff
            .or_else(|| self.noise.cutoff())
            .unwrap_or(0)
    }

    pub fn simulation(&self) -> Result<SimulationConfig> {
        Ok(SimulationConfig {
            scenario: self.scenario,
            noise: self.noise.distribution()?,
            plan: self.detection_plan()?,
            shots_per_setting: self.shots_per_setting,
            seed: self.seed,
        })
    }

    pub fn problem(&self, dataset: &EmpiricalDataset) -> Result<ReconstructionProblem> {
        let rec = &self.reconstruction;
        ReconstructionProblem::from_dataset(dataset, self.scenario.xi, self.reconstruction_cutoff())?
            .with_lambda(rec.lambda)?
            .with_tau_range(rec.tau_range[0], rec.tau_range[1])?
            .with_settings(rec.solver)
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text)?;
    cfg.resolve()
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    parse_config(&fs::read_to_string(path)?)
}

pub fn save_config(config: &RunConfig, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(config)? + "\n")?;
    Ok(())
}

pub fn dataset_to_string(dataset: &EmpiricalDataset) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "# format: {DATASET_FORMAT}");
    let _ = writeln!(out, "# version: {DATASET_VERSION}");
    for (key, value) in &dataset.provenance {
        if key.contains(':') || key.contains('\n') || value.contains('\n') {
            return Err(Error::invalid("provenance", format!("unwritable entry `{key}`")));
        }
        let _ = writeln!(out, "# {key}: {value}");
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(DATASET_COLUMNS)?;
    for (i, r) in dataset.records.iter().enumerate() {
        for (k, c) in r.counts.iter().enumerate() {
            w.write_record([
                i.to_string(),
                r.eta.to_string(),
                k.to_string(),
                c.to_string(),
                r.shots.to_string(),
            ])?;
        }
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
    Ok(out)
}

pub fn write_dataset(dataset: &EmpiricalDataset, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, dataset_to_string(dataset)?)?;
    Ok(())
}

struct PendingSetting {
    eta: f64,
    shots: u64,
    counts: BTreeMap<usize, u64>,
}

/// Parses a dataset file. Rows are numbered from 1 after the header.
pub fn parse_dataset(text: &str) -> Result<EmpiricalDataset> {
    let mut provenance = Vec::new();
    let mut body_start = 0;
    let mut version = None;
    for line in text.lines() {
        let Some(meta) = line.strip_prefix('#') else {
            break;
        };
        body_start += line.len() + 1;
        let Some((key, value)) = meta.split_once(':') else {
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "format" if value != DATASET_FORMAT => {
                return Err(Error::invalid("format", format!("unknown dataset format `{value}`")))
            }
            "format" => {}
            "version" => version = Some(value.to_string()),
            _ => provenance.push((key.to_string(), value.to_string())),
        }
    }
    if let Some(v) = version {
        let major = v.split('.').next().unwrap_or("");
        if major.parse::<u32>().ok() != Some(DATASET_VERSION) {
            return Err(Error::Version {
                what: "dataset",
                found: v,
                supported: DATASET_VERSION,
            });
        }
    }

    let body = text.get(body_start.min(text.len())..).unwrap_or("");
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes());
    let headers = reader.headers()?.clone();
    let mut cols = [0usize; 5];
    for (slot, name) in cols.iter_mut().zip(DATASET_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::schema(0, name, "missing column"))?;
    }

    let mut settings: BTreeMap<usize, PendingSetting> = BTreeMap::new();
    for (n, rec) in reader.records().enumerate() {
        let row = n + 1;
        let rec = rec?;
        let field = |c: usize| rec.get(cols[c]).unwrap_or("");
        let index: usize = field(0)
            .parse()
            .map_err(|_| Error::schema(row, "setting_index", "not a nonnegative integer"))?;
        let eta: f64 = field(1)
            .parse()
            .map_err(|_| Error::schema(row, "eta", "not a number"))?;
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::schema(row, "eta", format!("{eta} is outside (0, 1]")));
        }
        let k: usize = field(2)
            .parse()
            .map_err(|_| Error::schema(row, "k", "not a nonnegative integer"))?;
        let counts: i128 = field(3)
            .parse()
            .map_err(|_| Error::schema(row, "counts", "not an integer"))?;
        if counts < 0 {
            return Err(Error::schema(row, "counts", format!("negative count {counts}")));
        }
        let counts = u64::try_from(counts)
            .map_err(|_| Error::schema(row, "counts", "count out of range"))?;
        let shots: u64 = field(4)
            .parse()
            .map_err(|_| Error::schema(row, "shots", "not a positive integer"))?;

        let entry = settings.entry(index).or_insert_with(|| PendingSetting {
            eta,
            shots,
            counts: BTreeMap::new(),
        });
        if entry.eta != eta {
            return Err(Error::schema(row, "eta", "differs from earlier rows of this setting"));
        }
        if entry.shots != shots {
            return Err(Error::schema(row, "shots", "differs from earlier rows of this setting"));
        }
        if entry.counts.insert(k, counts).is_some() {
            return Err(Error::schema(row, "k", format!("duplicate photocount bin {k}")));
        }
    }
    if settings.is_empty() {
        return Err(Error::schema(0, "setting_index", "dataset has no rows"));
    }

    let mut records = Vec::with_capacity(settings.len());
    for (expected, (index, s)) in settings.into_iter().enumerate() {
        if index != expected {
            return Err(Error::schema(
                0,
                "setting_index",
                format!("settings must be numbered 0..n, missing {expected}"),
            ));
        }
        let len = s.counts.keys().next_back().map_or(1, |k| k + 1);
        let mut counts = vec![0u64; len];
        for (k, c) in s.counts {
            counts[k] = c;
        }
        records.push(SettingRecord::new(s.eta, counts, s.shots).map_err(|e| {
            Error::schema(0, "shots", format!("setting {index}: {e}"))
        })?);
    }
    Ok(EmpiricalDataset {
        records,
        provenance,
    })
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<EmpiricalDataset> {
    let path = path.as_ref();
    let mut ds = parse_dataset(&fs::read_to_string(path)?)?;
    if !ds.provenance.iter().any(|(k, _)| k == "source") {
        ds.provenance
            .push(("source".into(), format!("file {}", path.display())));
    }
    Ok(ds)
}

/// Experimental, reconstructed and expected photocount laws for one setting,
/// zero-padded to a common length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingTable {
    pub setting_index: usize,
    pub eta: f64,
    pub p_experimental: Vec<f64>,
    pub p_reconstructed: Vec<f64>,
    pub p_expected: Vec<f64>,
}

/// Everything in a report that is reproducible from config and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportBody {
    pub config: RunConfig,
    pub dataset: EmpiricalDataset,
    pub result: ReconstructionResult,
    pub expected_noise: Vec<f64>,
    pub fidelity: FidelityReport,
    pub settings: Vec<SettingTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub format: String,
    pub version: u32,
    pub comparable_body: ReportBody,
    pub wall_clock_seconds: f64,
    pub generated_unix_seconds: u64,
}

impl RunReport {
    fn new(body: ReportBody, started: Instant) -> Self {
        Self {
            format: REPORT_FORMAT.into(),
            version: REPORT_VERSION,
            comparable_body: body,
            wall_clock_seconds: started.elapsed().as_secs_f64(),
            generated_unix_seconds: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    /// Canonical serialization of the reproducible part of the report.
    pub fn comparable_bytes(&self) -> Result<Vec<u8>> {
        Ok(serde_json::to_vec(&self.comparable_body)?)
    }
}

fn pad(mut v: Vec<f64>, len: usize) -> Vec<f64> {
    v.resize(len, 0.0);
    v
}

/// Derives tables and fidelities from a config, dataset and reconstruction.
/// `evaluate` calls this on a stored report to check it.
pub fn assemble_body(
    config: &RunConfig,
    dataset: &EmpiricalDataset,
    result: ReconstructionResult,
) -> Result<ReportBody> {
    let xi = config.scenario.xi;
    let expected = config.noise.reference_at(result.noise.cutoff())?;
    let mixed_r = mix_source_noise(&result.noise, xi)?;
    let mixed_e = mix_source_noise(&expected, xi)?;
    let mut settings = Vec::with_capacity(dataset.records.len());
    let mut setting_fidelities = Vec::with_capacity(dataset.records.len());
    for (i, rec) in dataset.records.iter().enumerate() {
        let p_xp = rec.frequencies();
        let p_r = binomial_thinning(&mixed_r, result.tau * rec.eta)?.into_probs();
        let p_e = binomial_thinning(&mixed_e, config.scenario.tau_ch * rec.eta)?.into_probs();
        let len = p_xp.len().max(p_r.len()).max(p_e.len());
        let (p_xp, p_r, p_e) = (pad(p_xp, len), pad(p_r, len), pad(p_e, len));
        setting_fidelities.push(photocount_fidelity(&p_xp, &p_r)?);
        settings.push(SettingTable {
            setting_index: i,
            eta: rec.eta,
            p_experimental: p_xp,
            p_reconstructed: p_r,
            p_expected: p_e,
        });
    }
    let fidelity_report = FidelityReport {
        distribution_fidelity: fidelity(result.noise.probs(), expected.probs())?,
        setting_fidelities,
        tau_reconstructed: result.tau,
        tau_reference: config.scenario.tau_ch,
        mean_reconstructed: mean_photon_number(result.noise.probs())?,
        mean_expected: mean_photon_number(expected.probs())?,
    };
    Ok(ReportBody {
        config: config.clone(),
        dataset: dataset.clone(),
        result,
        expected_noise: expected.into_probs(),
        fidelity: fidelity_report,
        settings,
    })
}

/// Reconstructs from an existing dataset and assembles the report.
pub fn reconstruct_dataset(config: &RunConfig, dataset: &EmpiricalDataset) -> Result<RunReport> {
    let started = Instant::now();
    let problem = config.problem(dataset)?;
    let result = solve(&problem)?;
    Ok(RunReport::new(assemble_body(config, dataset, result)?, started))
}

/// Simulate, reconstruct, compare.
pub fn run_pipeline(config: &RunConfig) -> Result<RunReport> {
    let started = Instant::now();
    let dataset = simulate_run(&config.simulation()?)?;
    let problem = config.problem(&dataset)?;
    let result = solve(&problem)?;
    Ok(RunReport::new(assemble_body(config, &dataset, result)?, started))
}

/// Recomputes every derived number of a report. Returns the names of fields
/// that do not match bit for bit (empty when the report is consistent).
pub fn evaluate(report: &RunReport) -> Result<Vec<String>> {
    check_report_header(report)?;
    let body = &report.comparable_body;
    let config = body.config.clone().resolve()?;
    let problem = config.problem(&body.dataset)?;
    let stored = &body.result;

    let mut result = stored.clone();
    result.misfit = objective(&stored.noise, stored.tau, &problem.clone().with_lambda(0.0)?)?;
    result.penalty = smoothness_penalty(stored.noise.probs());
    result.objective = objective(&stored.noise, stored.tau, &problem)?;
    let recomputed = assemble_body(&config, &body.dataset, result.clone())?;

    let mut mismatches = Vec::new();
    let mut check = |name: &str, same: bool| {
        if !same {
            mismatches.push(name.to_string());
        }
    };
    check("config", recomputed.config == body.config);
    check("result.misfit", result.misfit.to_bits() == stored.misfit.to_bits());
    check("result.penalty", result.penalty.to_bits() == stored.penalty.to_bits());
    check("result.objective", result.objective.to_bits() == stored.objective.to_bits());
    let residuals = residuals(&stored.noise, stored.tau, &problem)?;
    check("result.residuals", residuals == stored.residuals);
    check("expected_noise", recomputed.expected_noise == body.expected_noise);
    check("fidelity", recomputed.fidelity == body.fidelity);
    check("settings", recomputed.settings == body.settings);
    Ok(mismatches)
}

fn check_report_header(report: &RunReport) -> Result<()> {
    if report.format != REPORT_FORMAT {
        return Err(Error::invalid(
            "format",
            format!("unknown report format `{}`", report.format),
        ));
    }
    if report.version != REPORT_VERSION {
        return Err(Error::Version {
            what: "report",
            found: report.version.to_string(),
            supported: REPORT_VERSION,
        });
    }
    Ok(())
}

pub fn write_report(report: &RunReport, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(report)? + "\n")?;
    Ok(())
}

pub fn load_report(path: impl AsRef<Path>) -> Result<RunReport> {
    let report: RunReport = serde_json::from_str(&fs::read_to_string(path)?)?;
    check_report_header(&report)?;
    Ok(report)
}

/// Header of the noise-distribution table.
pub const NOISE_TABLE_HEADER: [&str; 3] = ["m", "b_expected", "b_reconstructed"];
/// Header of the per-setting photocount table.
pub const PHOTOCOUNT_TABLE_HEADER: [&str; 5] = [
    "setting_index",
    "k",
    "p_expected",
    "p_reconstructed",
    "p_experimental",
];
/// Header of the per-setting fidelity table.
pub const FIDELITY_TABLE_HEADER: [&str; 2] = ["setting_index", "fidelity"];

pub const NOISE_TABLE_FILE: &str = "noise_distribution.csv";
pub const PHOTOCOUNT_TABLE_FILE: &str = "photocounts.csv";
pub const FIDELITY_TABLE_FILE: &str = "setting_fidelity.csv";

/// Writes the three plot tables into `dir` and returns their paths.
pub fn emit_plot_data(report: &RunReport, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let body = &report.comparable_body;

    let noise_path = dir.join(NOISE_TABLE_FILE);
    let mut w = csv::Writer::from_path(&noise_path)?;
    w.write_record(NOISE_TABLE_HEADER)?;
    let b_r = body.result.noise.probs();
    let b_e = &body.expected_noise;
    for m in 0..b_r.len().max(b_e.len()) {
        w.write_record([
            m.to_string(),
            b_e.get(m).copied().unwrap_or(0.0).to_string(),
            b_r.get(m).copied().unwrap_or(0.0).to_string(),
        ])?;
    }
    w.flush()?;

    let counts_path = dir.join(PHOTOCOUNT_TABLE_FILE);
    let mut w = csv::Writer::from_path(&counts_path)?;
    w.write_record(PHOTOCOUNT_TABLE_HEADER)?;
    for t in &body.settings {
        for k in 0..t.p_experimental.len() {
            w.write_record([
                t.setting_index.to_string(),
                k.to_string(),
                t.p_expected[k].to_string(),
                t.p_reconstructed[k].to_string(),
                t.p_experimental[k].to_string(),
            ])?;
        }
    }
    w.flush()?;

    let fid_path = dir.join(FIDELITY_TABLE_FILE);
    let mut w = csv::Writer::from_path(&fid_path)?;
    w.write_record(FIDELITY_TABLE_HEADER)?;
    for (t, f) in body.settings.iter().zip(&body.fidelity.setting_fidelities) {
        w.write_record([t.setting_index.to_string(), f.to_string()])?;
    }
    w.flush()?;

    Ok(vec![noise_path, counts_path, fid_path])
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "scenario": {"xi": 0.092, "tau_ch": 0.85},
        "noise": {"kind": "poisson", "mean": 0.84},
        "plan": {"eta_tot": 0.509}
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.version, 1);
        assert_eq!(cfg.shots_per_setting, 100_000);
        assert_eq!(cfg.reconstruction.lambda, DEFAULT_LAMBDA);
        assert_eq!(cfg.reconstruction.tau_range, [0.0, 1.0]);
        assert_eq!(cfg.noise.cutoff(), Some(10));
        assert_eq!(cfg.reconstruction.cutoff, Some(10));
        assert_eq!(cfg.plan.settings.as_ref().unwrap().len(), 10);
    }

    #[test]
    fn range_errors_name_the_field() {
        let bad = MINIMAL.replace("0.092", "1.2");
        let err = parse_config(&bad).unwrap_err().to_string();
        assert!(err.contains("xi"), "{err}");
        let bad = MINIMAL.replace("\"plan\"", "\"plam\"");
        let err = parse_config(&bad).unwrap_err().to_string();
        assert!(err.contains("plam"), "{err}");
        let bad = MINIMAL.replace("\"mean\": 0.84", "\"mean\": 0.84, \"sigma\": 1");
        let err = parse_config(&bad).unwrap_err().to_string();
        assert!(err.contains("sigma"), "{err}");
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_config("{\n  \"scenario\": ,\n}").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn single_setting_rejected() {
        let bad = MINIMAL.replace("\"eta_tot\": 0.509", "\"eta_tot\": 0.509, \"settings\": [1.0]");
        let err = parse_config(&bad).unwrap_err().to_string();
        assert!(err.contains("settings"), "{err}");
    }

    #[test]
    fn dataset_schema_errors() {
        let missing = "setting_index,k,counts,shots\n0,0,10,10\n";
        match parse_dataset(missing) {
            Err(Error::Schema { field, .. }) => assert_eq!(field, "eta"),
            other => panic!("{other:?}"),
        }
        let negative = "setting_index,eta,k,counts,shots\n0,0.5,0,11,10\n0,0.5,1,-1,10\n";
        match parse_dataset(negative) {
            Err(Error::Schema { row, field, .. }) => {
                assert_eq!(row, 2);
                assert_eq!(field, "counts");
            }
            other => panic!("{other:?}"),
        }
        let mismatch = "setting_index,eta,k,counts,shots\n0,0.5,0,3,10\n0,0.5,1,3,10\n";
        assert!(parse_dataset(mismatch).is_err());
        let future = "# version: 2\nsetting_index,eta,k,counts,shots\n0,0.5,0,10,10\n";
        assert!(matches!(parse_dataset(future), Err(Error::Version { .. })));
    }

    #[test]
    fn dataset_without_metadata_parses() {
        let text = "setting_index,eta,k,counts,shots\n0,0.25,0,7,10\n0,0.25,1,3,10\n1,0.5,0,10,10\n";
        let ds = parse_dataset(text).unwrap();
        assert_eq!(ds.records.len(), 2);
        assert_eq!(ds.records[0].counts, vec![7, 3]);
        assert_eq!(ds.records[1].counts, vec![10]);
    }
}
