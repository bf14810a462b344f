use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zzcert::harness::{self, ExperimentConfig, KindSelection};
use zzcert::linalg::{c, CMatrix4};
use zzcert::quantum::{concurrence, spectrum_bounds, zz_expectation, DensityMatrix};
use zzcert::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Concurrence readout through a single ZZ measurement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run a seeded batch and write records, summary and plot data.
    Run(RunArgs),
    /// Print the Lie closure of the control generators.
    Dla {
        /// Number of random drifts to test.
        #[arg(long, default_value_t = 10)]
        drifts: usize,
        #[arg(long, default_value_t = 1.0)]
        drift_magnitude: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Concurrence of a 4x4 density matrix given as JSON [re, im] pairs.
    Concurrence { matrix: PathBuf },
    /// Bounds on the ZZ expectation over the unitary orbit of a state.
    Bounds { matrix: PathBuf },
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    samples: Option<usize>,
    /// pure, mixed, rank2 or all
    #[arg(long)]
    kind: Option<KindSelection>,
    #[arg(long)]
    slices: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    rel_err: Option<f64>,
    #[arg(long)]
    drift: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Record wall-clock time per sample (outputs are then not reproducible).
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_json_file(p)?,
            None => ExperimentConfig::default(),
        };
        let s = &mut cfg.synthesis;
        macro_rules! set {
            ($($flag:ident => $field:expr),* $(,)?) => {
                $(if let Some(v) = self.$flag.clone() { $field = v; })*
            };
        }
        set! {
            slices => s.n_slices,
            dt => s.dt,
            eta => s.eta,
            epsilon => s.epsilon,
            max_iters => s.max_iters,
            restarts => s.restarts,
            rel_err => s.rel_err_target,
            samples => cfg.n_samples,
            kind => cfg.state_kind,
            drift => cfg.drift_magnitude,
            seed => cfg.seed,
            out => cfg.output_dir,
            workers => cfg.workers,
        }
        cfg.record_timing |= self.timing;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read_matrix(path: &Path) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)?;
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(Error::InvalidState(
            "expected a 4x4 array of [re, im] pairs".into(),
        ));
    }
    DensityMatrix::new(CMatrix4::from_fn(|i, j| c(rows[i][j][0], rows[i][j][1])))
}

fn execute(command: Command) -> Result<String> {
    Ok(match command {
        Command::Run(args) => {
            let cfg = args.config()?;
            let summary = harness::summarize(&harness::run_batch(&cfg)?)?;
            format!(
                "{} samples, {} converged ({:.1}%), median error {:.4}, outputs in {}\n",
                summary.n_samples,
                summary.n_converged,
                100.0 * summary.convergence_rate,
                summary.error_quantiles.p50,
                cfg.output_dir.display()
            )
        }
        Command::Dla {
            drifts,
            drift_magnitude,
            seed,
        } => harness::check_controllability_with(drifts, drift_magnitude, seed)?.to_string(),
        Command::Concurrence { matrix } => {
            format!("{}\n", concurrence(&read_matrix(&matrix)?)?)
        }
        Command::Bounds { matrix } => {
            let rho = read_matrix(&matrix)?;
            let b = spectrum_bounds(&rho)?;
            format!(
                "min {}\nmax {}\nconcurrence {}\nzz {}\n",
                b.min,
                b.max,
                b.concurrence,
                zz_expectation(&rho)
            )
        }
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BELL: &str = "[[[0.5,0],[0,0],[0,0],[0.5,0]],[[0,0],[0,0],[0,0],[0,0]],\
                        [[0,0],[0,0],[0,0],[0,0]],[[0.5,0],[0,0],[0,0],[0.5,0]]]";

    fn exec(args: &[&str]) -> Result<String> {
        execute(
            Cli::try_parse_from(std::iter::once("zzcert").chain(args.iter().copied()))
                .unwrap()
                .command,
        )
    }

    #[test]
    fn concurrence_and_bounds_of_a_bell_state() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("bell.json");
        fs::write(&m, BELL).unwrap();
        let m = m.to_str().unwrap();

        let c: f64 = exec(&["concurrence", m]).unwrap().trim().parse().unwrap();
        assert!((c - 1.0).abs() < 1e-10);
        let text = exec(&["bounds", m]).unwrap();
        assert!(text.starts_with("min -1\nmax 1\n"), "{text}");
    }

    #[test]
    fn exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.json");
        fs::write(&bad, "[[[1,0]]]").unwrap();
        let e = exec(&["concurrence", bad.to_str().unwrap()]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
        let missing = dir.path().join("missing.json");
        let e = exec(&["concurrence", missing.to_str().unwrap()]).unwrap_err();
        assert_eq!(exit_code(&e), 1);
        let out = dir.path().join("out");
        let e = exec(&[
            "run",
            "--samples",
            "2",
            "--rel-err",
            "2",
            "--out",
            out.to_str().unwrap(),
        ])
        .unwrap_err();
        assert!(matches!(e, Error::InvalidConfig(_)));
        assert_eq!(exit_code(&e), 2);
        assert!(Cli::try_parse_from(["zzcert", "run", "--kind", "bell"]).is_err());
    }

    #[test]
    fn dla_report() {
        let text = exec(&["dla", "--drifts", "2"]).unwrap();
        assert!(text.starts_with("dimension: 15\n"), "{text}");
        assert!(text.contains("dmc: true"));
        assert!(text.contains("2/2"));
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        fs::write(
            &cfg,
            r#"{"n_samples": 50, "state_kind": "pure", "seed": 3, "synthesis": {"restarts": 1, "dt": 7.0}}"#,
        )
        .unwrap();
        let cli = Cli::try_parse_from([
            "zzcert",
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--samples",
            "3",
            "--eta",
            "0.001",
            "--kind",
            "all",
        ])
        .unwrap();
        let Command::Run(args) = cli.command else {
            panic!("expected run")
        };
        let c = args.config().unwrap();
        assert_eq!(c.n_samples, 3);
        assert_eq!(c.state_kind, KindSelection::All);
        assert_eq!(c.seed, 3);
        assert_eq!(c.synthesis.restarts, 1);
        assert_eq!(c.synthesis.dt, 7.0);
        assert_eq!(c.synthesis.eta, 0.001);
    }

    #[test]
    fn run_is_reproducible_across_worker_counts() {
        let dir = tempfile::tempdir().unwrap();
        let run = |name: &str, workers: &str| {
            let out = dir.path().join(name);
            let args = [
                "run",
                "--samples",
                "3",
                "--kind",
                "pure",
                "--restarts",
                "1",
                "--seed",
                "9",
            ];
            let mut v: Vec<&str> = args.to_vec();
            v.extend(["--workers", workers, "--out", out.to_str().unwrap()]);
            exec(&v).unwrap();
            fs::read_to_string(out.join("records.csv")).unwrap()
        };
        let a = run("a", "1");
        assert_eq!(a.lines().count(), 4);
        assert!(a
            .lines()
            .skip(1)
            .all(|l| l.split(',').nth(1) == Some("pure")));
        assert_eq!(a, run("b", "2"));
    }
}
