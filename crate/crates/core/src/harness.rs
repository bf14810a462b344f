//! Seeded batch experiments: sample states, synthesize a schedule for each,
//! and write records, a summary, control-path dumps and plot-ready CSVs.
//!
//! Output directory layout:
//!
//! ```text
//! records.csv     one row per sample
//! summary.json    convergence rate, error quantiles, histogram
//! scatter.csv     concurrence,measurement
//! histogram.csv   bin_left,count (last row is the overflow bin)
//! paths/          sample_NNNNN.json control schedules
//! ```

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::control::{
    measurement_error, mix_seed, ControlPath, Dynamics, ErrorKind, SynthesisConfig,
    SynthesisResult, Synthesizer,
};
use crate::controllability::{dla_closure, GeneratorSet, LieBasis, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_part, CMatrix4};
use crate::quantum::{
    concurrence, sample_state, spectrum_bounds, zz_expectation, DensityMatrix, StateKind,
};

pub const RECORDS_HEADER: &str =
    "sample_id,state_kind,concurrence,measurement,error_kind,error,iterations,converged,seed,wall_time_ms";

/// Upper edge of the regular histogram bins; larger errors go to the overflow bin.
pub const HISTOGRAM_MAX: f64 = 0.1;
pub const HISTOGRAM_BINS: usize = 20;

/// Which states a batch draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindSelection {
    Pure,
    Mixed,
    Rank2,
    /// Cycles pure, mixed, rank2 by sample id.
    All,
}

impl KindSelection {
    pub fn kind_for(self, sample_id: usize) -> StateKind {
        match self {
            KindSelection::Pure => StateKind::Pure,
            KindSelection::Mixed => StateKind::Mixed,
            KindSelection::Rank2 => StateKind::Rank2,
            KindSelection::All => StateKind::ALL[sample_id % 3],
        }
    }
}

impl FromStr for KindSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(KindSelection::All),
            other => Ok(match other.parse::<StateKind>()? {
                StateKind::Pure => KindSelection::Pure,
                StateKind::Mixed => KindSelection::Mixed,
                StateKind::Rank2 => KindSelection::Rank2,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub n_samples: usize,
    pub state_kind: KindSelection,
    /// `synthesis.seed` is ignored; every sample gets its own derived seed.
    pub synthesis: SynthesisConfig,
    /// Scale of the fixed Hermitian drift added to every slice. 0 disables it.
    pub drift_magnitude: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Worker threads for the sample pool; 0 lets rayon decide.
    pub workers: usize,
    /// Fill `wall_time_ms`. Off by default so outputs stay byte-identical.
    pub record_timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_samples: 100,
            state_kind: KindSelection::All,
            synthesis: SynthesisConfig::default(),
            drift_magnitude: 0.0,
            output_dir: PathBuf::from("out"),
            seed: 0,
            workers: 0,
            record_timing: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 1 {
            return Err(Error::InvalidConfig("n_samples must be at least 1".into()));
        }
        if !(self.drift_magnitude >= 0.0) || !self.drift_magnitude.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "drift_magnitude must be finite and non-negative, got {}",
                self.drift_magnitude
            )));
        }
        self.synthesis.validate()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn sample_seed(&self, sample_id: usize) -> u64 {
        mix_seed(self.seed, sample_id as u64)
    }

    /// The batch drift, or `None` when `drift_magnitude` is zero.
    pub fn drift(&self) -> Option<CMatrix4> {
        (self.drift_magnitude > 0.0)
            .then(|| drift_hamiltonian(self.drift_magnitude, mix_seed(self.seed, u64::MAX)))
    }
}

/// `magnitude · (G + G†)/2` with `G` a complex Gaussian matrix drawn from `seed`.
pub fn drift_hamiltonian(magnitude: f64, seed: u64) -> CMatrix4 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix4::from_fn(|_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    hermitian_part(&g).scale(magnitude)
}

/// One initial state of a batch.
#[derive(Debug, Clone)]
pub struct Sample {
    pub id: usize,
    pub kind: String,
    pub seed: u64,
    pub rho: DensityMatrix,
}

/// Draws the states of a batch.
pub fn sample_batch(cfg: &ExperimentConfig) -> Vec<Sample> {
    (0..cfg.n_samples)
        .map(|id| {
            let kind = cfg.state_kind.kind_for(id);
            let seed = cfg.sample_seed(id);
            Sample {
                id,
                kind: kind.to_string(),
                seed,
                rho: sample_state(kind, seed),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub sample_id: usize,
    pub state_kind: String,
    pub concurrence: f64,
    pub measurement: f64,
    pub error_kind: ErrorKind,
    pub error: f64,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
    pub wall_time_ms: u64,
}

/// A record together with everything needed to audit it.
#[derive(Debug, Clone)]
pub struct SampleOutcome {
    pub record: RunRecord,
    pub rho0: DensityMatrix,
    /// `None` when synthesis failed; the record then reports the unevolved state.
    pub result: Option<SynthesisResult>,
}

fn run_one(sample: &Sample, cfg: &ExperimentConfig, dynamics: &Dynamics) -> SampleOutcome {
    let start = Instant::now();
    let synth_cfg = SynthesisConfig {
        seed: sample.seed,
        ..cfg.synthesis.clone()
    };
    let result = Synthesizer::new(synth_cfg)
        .map(|s| s.with_dynamics(dynamics.clone()))
        .and_then(|s| s.run(&sample.rho))
        .ok();
    let wall_time_ms = if cfg.record_timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    let record = match &result {
        Some(r) => RunRecord {
            sample_id: sample.id,
            state_kind: sample.kind.clone(),
            concurrence: r.target,
            measurement: r.measurement,
            error_kind: r.error_kind,
            error: r.relative_error,
            iterations: r.iterations,
            converged: r.converged,
            seed: sample.seed,
            wall_time_ms,
        },
        None => {
            let target = concurrence(&sample.rho).unwrap_or(0.0);
            let measurement = zz_expectation(&sample.rho);
            let (error_kind, error) = measurement_error(target, measurement);
            RunRecord {
                sample_id: sample.id,
                state_kind: sample.kind.clone(),
                concurrence: target,
                measurement,
                error_kind,
                error,
                iterations: 0,
                converged: false,
                seed: sample.seed,
                wall_time_ms,
            }
        }
    };
    SampleOutcome {
        record,
        rho0: sample.rho,
        result,
    }
}

/// Synthesizes every sample on a pool of `cfg.workers` threads. The result
/// is sorted by sample id and does not depend on the worker count.
pub fn run_samples(cfg: &ExperimentConfig, samples: &[Sample]) -> Result<Vec<SampleOutcome>> {
    cfg.validate()?;
    let dynamics = match cfg.drift() {
        Some(d) => Dynamics::with_drift(d)?,
        None => Dynamics::ideal(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let mut out: Vec<SampleOutcome> = pool.install(|| {
        samples
            .par_iter()
            .map(|s| run_one(s, cfg, &dynamics))
            .collect()
    });
    out.sort_by_key(|o| o.record.sample_id);
    Ok(out)
}

/// Samples, synthesizes and writes every output file into `cfg.output_dir`.
pub fn run_batch(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    let outcomes = run_samples(cfg, &sample_batch(cfg))?;
    write_outputs(&cfg.output_dir, &outcomes)?;
    Ok(outcomes.into_iter().map(|o| o.record).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub p50: f64,
    pub p90: f64,
    pub p99: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n_samples: usize,
    pub n_converged: usize,
    pub convergence_rate: f64,
    pub error_quantiles: Quantiles,
    /// Regular bins over `[0, HISTOGRAM_MAX)`.
    pub histogram: Vec<HistogramBin>,
    /// Errors at or above `HISTOGRAM_MAX`.
    pub overflow: usize,
    pub mean_iterations: f64,
}

/// Linear interpolation between order statistics of an ascending slice.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(records: &[RunRecord]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = records.len();
    let n_converged = records.iter().filter(|r| r.converged).count();
    let mut errors: Vec<f64> = records.iter().map(|r| r.error).collect();
    errors.sort_by(f64::total_cmp);

    let width = HISTOGRAM_MAX / HISTOGRAM_BINS as f64;
    let mut counts = vec![0usize; HISTOGRAM_BINS];
    let mut overflow = 0;
    for &e in &errors {
        if e >= HISTOGRAM_MAX || !e.is_finite() {
            overflow += 1;
        } else {
            counts[((e / width) as usize).min(HISTOGRAM_BINS - 1)] += 1;
        }
    }
    Ok(Summary {
        n_samples: n,
        n_converged,
        convergence_rate: n_converged as f64 / n as f64,
        error_quantiles: Quantiles {
            p50: quantile(&errors, 0.5),
            p90: quantile(&errors, 0.9),
            p99: quantile(&errors, 0.99),
        },
        histogram: counts
            .into_iter()
            .enumerate()
            .map(|(i, count)| HistogramBin {
                bin_left: i as f64 * width,
                count,
            })
            .collect(),
        overflow,
        mean_iterations: records.iter().map(|r| r.iterations as f64).sum::<f64>() / n as f64,
    })
}

#[derive(Serialize)]
struct PathDump<'a> {
    sample_id: usize,
    converged: bool,
    #[serde(flatten)]
    path: &'a ControlPath,
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn csv_bytes<T: Serialize>(header: Option<&[&str]>, rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(header.is_none())
        .from_writer(Vec::new());
    if let Some(h) = header {
        w.write_record(h).map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.into_inner()
        .map_err(|e| Error::InvalidConfig(format!("csv buffer: {e}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidConfig(format!("csv: {e}"))
}

/// Writes records, summary, scatter, histogram and control paths.
pub fn write_outputs(dir: &Path, outcomes: &[SampleOutcome]) -> Result<Summary> {
    let paths_dir = dir.join("paths");
    fs::create_dir_all(&paths_dir).map_err(|e| Error::io(&paths_dir, e))?;

    let records: Vec<RunRecord> = outcomes.iter().map(|o| o.record.clone()).collect();
    let summary = summarize(&records)?;

    write_file(&dir.join("records.csv"), &csv_bytes(None, &records)?)?;
    write_file(
        &dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)?.as_bytes(),
    )?;

    let scatter: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.concurrence, r.measurement))
        .collect();
    write_file(
        &dir.join("scatter.csv"),
        &csv_bytes(Some(&["concurrence", "measurement"]), &scatter)?,
    )?;

    let mut hist: Vec<(f64, usize)> = summary
        .histogram
        .iter()
        .map(|b| (b.bin_left, b.count))
        .collect();
    hist.push((HISTOGRAM_MAX, summary.overflow));
    write_file(
        &dir.join("histogram.csv"),
        &csv_bytes(Some(&["bin_left", "count"]), &hist)?,
    )?;

    for o in outcomes {
        if let Some(r) = &o.result {
            let dump = PathDump {
                sample_id: o.record.sample_id,
                converged: r.converged,
                path: &r.path,
            };
            let file = paths_dir.join(format!("sample_{:05}.json", o.record.sample_id));
            write_file(&file, serde_json::to_string_pretty(&dump)?.as_bytes())?;
        }
    }
    Ok(summary)
}

/// Checks each outcome against the feasibility box `[m, M]` of its initial
/// state and, when converged, against the scatter tolerance. Returns the ids
/// that violate either.
pub fn audit(outcomes: &[SampleOutcome], rel_err_target: f64, tol: f64) -> Result<Vec<usize>> {
    let mut bad = Vec::new();
    for o in outcomes {
        let r = &o.record;
        let bounds = spectrum_bounds(&o.rho0)?;
        let feasible = bounds.contains(r.measurement, tol);
        let on_line = !r.converged
            || (r.measurement - r.concurrence).abs()
                <= rel_err_target * r.concurrence.max(crate::control::RELATIVE_ERROR_FLOOR) + tol;
        if !feasible || !on_line {
            bad.push(r.sample_id);
        }
    }
    Ok(bad)
}

/// DLA dimension, round growth and DMC verdicts with and without drift.
#[derive(Debug, Clone)]
pub struct ControllabilityReport {
    pub basis: LieBasis,
    pub dmc: bool,
    pub drift_magnitude: f64,
    /// One verdict per random drift.
    pub drift_verdicts: Vec<bool>,
}

impl ControllabilityReport {
    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    pub fn rounds(&self) -> &[usize] {
        &self.basis.rounds
    }
}

impl fmt::Display for ControllabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dimension: {}", self.dimension())?;
        writeln!(f, "rounds: {:?}", self.rounds())?;
        writeln!(f, "dmc: {}", self.dmc)?;
        let held = self.drift_verdicts.iter().filter(|&&v| v).count();
        writeln!(
            f,
            "dmc with drift (magnitude {}): {}/{}",
            self.drift_magnitude,
            held,
            self.drift_verdicts.len()
        )?;
        writeln!(f, "basis:")?;
        for (i, e) in self.basis.basis.iter().enumerate() {
            writeln!(f, "  {:2}  round {}  {}", i + 1, e.round, e.derivation)?;
        }
        Ok(())
    }
}

/// Closure of the six control generators plus `n_drifts` seeded random drifts.
pub fn check_controllability_with(
    n_drifts: usize,
    drift_magnitude: f64,
    seed: u64,
) -> Result<ControllabilityReport> {
    let gens = GeneratorSet::two_qubit_controls();
    let basis = dla_closure(&gens, DEFAULT_TOL)?;
    let dmc = basis.is_full_su4();
    let drift_verdicts = (0..n_drifts)
        .map(|i| {
            let h = drift_hamiltonian(drift_magnitude, mix_seed(seed, i as u64));
            let with = gens.clone().with_drift(&h, "iHd")?;
            Ok(dla_closure(&with, DEFAULT_TOL)?.is_full_su4())
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(ControllabilityReport {
        basis,
        dmc,
        drift_magnitude,
        drift_verdicts,
    })
}

pub fn check_controllability() -> Result<ControllabilityReport> {
    check_controllability_with(10, 1.0, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_deviation;

    fn record(id: usize, error: f64, converged: bool, iterations: usize) -> RunRecord {
        RunRecord {
            sample_id: id,
            state_kind: "mixed".into(),
            concurrence: 0.5,
            measurement: 0.5,
            error_kind: ErrorKind::Relative,
            error,
            iterations,
            converged,
            seed: 0,
            wall_time_ms: 0,
        }
    }

    fn quick(n: usize) -> ExperimentConfig {
        ExperimentConfig {
            n_samples: n,
            synthesis: SynthesisConfig {
                restarts: 2,
                max_iters: 400,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    #[test]
    fn summarize_rejects_empty() {
        assert!(matches!(summarize(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn summarize_zero_errors() {
        let recs: Vec<_> = (0..5).map(|i| record(i, 0.0, true, 10)).collect();
        let s = summarize(&recs).unwrap();
        assert_eq!(s.convergence_rate, 1.0);
        assert_eq!(
            s.error_quantiles,
            Quantiles {
                p50: 0.0,
                p90: 0.0,
                p99: 0.0
            }
        );
        assert_eq!(s.histogram[0].count, 5);
        assert_eq!(s.mean_iterations, 10.0);
    }

    #[test]
    fn summarize_single_record() {
        let s = summarize(&[record(0, 0.037, true, 3)]).unwrap();
        assert_eq!(
            s.error_quantiles,
            Quantiles {
                p50: 0.037,
                p90: 0.037,
                p99: 0.037
            }
        );
        assert_eq!(s.histogram[7].count, 1);
    }

    #[test]
    fn summarize_fixture() {
        // errors 0.00, 0.01, ..., 0.10 plus 0.5
        let mut recs: Vec<_> = (0..=10)
            .map(|i| record(i, i as f64 / 100.0, i < 6, i))
            .collect();
        recs.push(record(11, 0.5, false, 100));
        let s = summarize(&recs).unwrap();
        assert_eq!(s.n_converged, 6);
        assert!((s.convergence_rate - 0.5).abs() < 1e-15);
        // 12 values: positions 5.5, 9.9, 10.89
        assert!((s.error_quantiles.p50 - 0.055).abs() < 1e-12);
        assert!((s.error_quantiles.p90 - (0.09 + 0.9 * 0.01)).abs() < 1e-12);
        assert!((s.error_quantiles.p99 - (0.10 + 0.89 * 0.4)).abs() < 1e-12);
        assert_eq!(s.overflow, 2);
        assert_eq!(s.histogram.iter().map(|b| b.count).sum::<usize>(), 10);
        assert_eq!(s.histogram.len(), 20);
        assert!((s.mean_iterations - (55.0 + 100.0) / 12.0).abs() < 1e-12);
    }

    #[test]
    fn kind_selection_parses_and_cycles() {
        assert_eq!("all".parse::<KindSelection>().unwrap(), KindSelection::All);
        assert_eq!(
            "rank2".parse::<KindSelection>().unwrap(),
            KindSelection::Rank2
        );
        assert!("bell".parse::<KindSelection>().is_err());
        let kinds: Vec<_> = (0..4).map(|i| KindSelection::All.kind_for(i)).collect();
        assert_eq!(
            kinds,
            [
                StateKind::Pure,
                StateKind::Mixed,
                StateKind::Rank2,
                StateKind::Pure
            ]
        );
    }

    #[test]
    fn config_roundtrips_and_fills_defaults() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"n_samples": 7, "state_kind": "pure", "synthesis": {"restarts": 2}}"#,
        )
        .unwrap();
        assert_eq!(cfg.n_samples, 7);
        assert_eq!(cfg.state_kind, KindSelection::Pure);
        assert_eq!(cfg.synthesis.restarts, 2);
        assert_eq!(cfg.synthesis.n_slices, 4);
        let back: ExperimentConfig =
            serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(ExperimentConfig {
            n_samples: 0,
            ..cfg.clone()
        }
        .validate()
        .is_err());
        assert!(ExperimentConfig {
            drift_magnitude: -1.0,
            ..cfg
        }
        .validate()
        .is_err());
    }

    #[test]
    fn drift_is_hermitian_seeded_and_scaled() {
        let a = drift_hamiltonian(2.0, 9);
        assert!(hermitian_deviation(&a) < 1e-15);
        assert_eq!(a, drift_hamiltonian(2.0, 9));
        assert!((a.unscale(2.0) - drift_hamiltonian(1.0, 9)).norm() < 1e-15);
        assert_ne!(a, drift_hamiltonian(2.0, 10));
        assert!(quick(1).drift().is_none());
    }

    #[test]
    fn maximally_mixed_sample() {
        let cfg = quick(1);
        let samples = [Sample {
            id: 0,
            kind: "injected".into(),
            seed: 1,
            rho: DensityMatrix::maximally_mixed(),
        }];
        let out = run_samples(&cfg, &samples).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].record.concurrence, 0.0);
        assert!(out[0].record.measurement.abs() < 1e-12);
        assert!(out[0].record.converged);
    }

    #[test]
    fn batch_is_independent_of_worker_count() {
        let a = run_samples(
            &ExperimentConfig {
                workers: 1,
                ..quick(6)
            },
            &sample_batch(&quick(6)),
        )
        .unwrap();
        let b = run_samples(
            &ExperimentConfig {
                workers: 3,
                ..quick(6)
            },
            &sample_batch(&quick(6)),
        )
        .unwrap();
        let ra: Vec<_> = a.iter().map(|o| o.record.clone()).collect();
        let rb: Vec<_> = b.iter().map(|o| o.record.clone()).collect();
        assert_eq!(ra, rb);
        assert!(ra.iter().enumerate().all(|(i, r)| r.sample_id == i));
        assert!(audit(&a, 0.05, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn outputs_have_expected_shape() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            output_dir: dir.path().to_path_buf(),
            ..quick(3)
        };
        let records = run_batch(&cfg).unwrap();
        assert_eq!(records.len(), 3);
        let csv = fs::read_to_string(dir.path().join("records.csv")).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(RECORDS_HEADER));
        assert_eq!(lines.count(), 3);
        let hist = fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
        assert!(hist.starts_with("bin_left,count\n"));
        assert_eq!(hist.lines().count(), 1 + HISTOGRAM_BINS + 1);
        let scatter = fs::read_to_string(dir.path().join("scatter.csv")).unwrap();
        assert!(scatter.starts_with("concurrence,measurement\n"));
        let summary: Summary =
            serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
                .unwrap();
        assert_eq!(summary.n_samples, 3);
        let dump: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(dir.path().join("paths/sample_00001.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(dump["slices"].as_array().unwrap().len(), 4);
        assert!(dump["slices"][0]["zeta"].is_number());
        assert_eq!(dump["dt"], 100.0);
    }

    #[test]
    fn unwritable_output_is_io_error() {
        let file = tempfile::NamedTempFile::new().unwrap();
        let cfg = ExperimentConfig {
            output_dir: file.path().join("sub"),
            ..quick(1)
        };
        assert!(matches!(run_batch(&cfg), Err(Error::Io { .. })));
    }

    #[test]
    fn controllability_report() {
        let r = check_controllability_with(3, 1.0, 4).unwrap();
        assert_eq!(r.dimension(), 15);
        assert!(r.dmc);
        assert_eq!(r.drift_verdicts, vec![true; 3]);
        let text = r.to_string();
        assert!(text.contains("dimension: 15"));
        assert_eq!(text.lines().filter(|l| l.contains("round")).count(), 16);
        let none = check_controllability_with(0, 0.0, 0).unwrap();
        assert_eq!(none.rounds(), r.rounds());
    }
}
