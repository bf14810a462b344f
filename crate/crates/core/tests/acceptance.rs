//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::fs;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zzcert::control::{ControlPath, Dynamics, SynthesisConfig};
use zzcert::controllability::{dla_closure, GeneratorSet, DEFAULT_TOL};
use zzcert::harness::{self, drift_hamiltonian, ExperimentConfig, KindSelection};
use zzcert::linalg::{kron, CMatrix4};
use zzcert::quantum::{
    concurrence, concurrence_from_spin_flip_product, random_local_unitary, sample_state,
    spectrum_bounds, Bell, DensityMatrix, StateKind,
};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dla_dimension() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_zzcert"))
        .arg("dla")
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    let field = |name: &str| {
        text.lines()
            .find_map(|l| l.strip_prefix(name))
            .map(str::trim)
            .unwrap_or("")
            .to_string()
    };
    let dimension = field("dimension:");
    let rounds = field("rounds:");
    check(
        out.status.success() && dimension == "15" && rounds == "[6, 7, 2]",
        format!("dimension {dimension} (want 15), rounds {rounds} (want [6, 7, 2])"),
    )
}

fn drift_robustness() -> Outcome {
    let gens = GeneratorSet::two_qubit_controls();
    let mut held = 0;
    let mut total = 0;
    for (m, magnitude) in [0.1, 1.0, 10.0].into_iter().enumerate() {
        for i in 0..50u64 {
            let h = drift_hamiltonian(magnitude, 1000 * m as u64 + i);
            let with = gens
                .clone()
                .with_drift(&h, "iHd")
                .map_err(|e| e.to_string())?;
            total += 1;
            if dla_closure(&with, DEFAULT_TOL)
                .map_err(|e| e.to_string())?
                .is_full_su4()
            {
                held += 1;
            }
        }
    }
    check(
        held == total,
        format!("{held}/{total} drifts keep the full algebra"),
    )
}

fn product_state(rng: &mut impl Rng) -> DensityMatrix {
    let a = random_local_unitary(rng);
    let b = random_local_unitary(rng);
    let u = kron(&a, &b);
    let base = if rng.random_bool(0.5) {
        DensityMatrix::basis(rng.random_range(0..4))
    } else {
        // diagonal product of two single-qubit mixtures
        let (p, q): (f64, f64) = (rng.random(), rng.random());
        let d = [p * q, p * (1.0 - q), (1.0 - p) * q, (1.0 - p) * (1.0 - q)];
        let mut m = CMatrix4::zeros();
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = (*x).into();
        }
        DensityMatrix::new(m).unwrap()
    };
    base.conjugate_by(&u)
}

fn concurrence_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bell = Bell::ALL
        .iter()
        .map(|&b| (concurrence(&DensityMatrix::bell(b)).unwrap() - 1.0).abs())
        .fold(0.0, f64::max);
    let product = (0..200)
        .map(|_| concurrence(&product_state(&mut rng)).unwrap())
        .fold(0.0, f64::max);
    let routes = (0..1000u64)
        .map(|s| {
            let rho = sample_state(StateKind::Mixed, 50_000 + s);
            (concurrence(&rho).unwrap() - concurrence_from_spin_flip_product(&rho)).abs()
        })
        .fold(0.0, f64::max);
    let local = (0..1000u64)
        .map(|s| {
            let rho = sample_state(StateKind::ALL[(s % 3) as usize], 60_000 + s);
            let u = kron(
                &random_local_unitary(&mut rng),
                &random_local_unitary(&mut rng),
            );
            (concurrence(&rho).unwrap() - concurrence(&rho.conjugate_by(&u)).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    check(
        bell <= 1e-10 && product <= 1e-10 && routes <= 1e-8 && local <= 1e-8,
        format!(
            "bell dev {bell:.1e}, product max {product:.1e}, route gap {routes:.1e}, local-unitary gap {local:.1e}"
        ),
    )
}

fn sandwich() -> Outcome {
    let mut violations = 0;
    let mut corner_dev: f64 = 0.0;
    for s in 0..10_000u64 {
        let kind = StateKind::ALL[(s % 3) as usize];
        let b = spectrum_bounds(&sample_state(kind, 70_000 + s)).map_err(|e| e.to_string())?;
        if !(b.min <= 0.0 && 0.0 <= b.concurrence && b.concurrence <= b.max) {
            violations += 1;
        }
        if kind != StateKind::Mixed {
            corner_dev = corner_dev.max((b.min + 1.0).abs()).max((b.max - 1.0).abs());
        }
    }
    check(
        violations == 0 && corner_dev <= 1e-12,
        format!("{violations} violations in 10000 states, pure/rank2 (m, M) off (-1, 1) by {corner_dev:.1e}"),
    )
}

fn max_diff(a: &[[f64; 6]], b: &[[f64; 6]]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn gradient_consistency() -> Outcome {
    let dynamics = Dynamics::ideal();
    let scale = SynthesisConfig::default().init_scale;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut worst = f64::INFINITY;
    for i in 0..20u64 {
        let rho = sample_state(StateKind::ALL[(i % 3) as usize], 80_000 + i);
        let base = ControlPath::random(4, 1.0, scale, &mut rng).unwrap();
        let d: f64 = rng.random();
        let errs: Vec<f64> = [0.5, 0.25, 0.125]
            .iter()
            .map(|&dt| {
                let path = ControlPath { dt, ..base.clone() };
                let g = dynamics.adjoint_gradient(&rho, &path, d).unwrap();
                let fd = dynamics
                    .finite_difference_gradient(&rho, &path, d, 1e-6)
                    .unwrap();
                max_diff(&g, &fd)
            })
            .collect();
        worst = worst.min(errs[0] / errs[1]).min(errs[1] / errs[2]);
    }
    check(
        worst >= 1.8,
        format!("smallest error ratio per halving {worst:.3} over 20 instances"),
    )
}

fn realness() -> Outcome {
    let dynamics = Dynamics::ideal();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let rho = sample_state(StateKind::ALL[(i % 3) as usize], 90_000 + i);
        let path = ControlPath::random(4, 0.5, 1.5, &mut rng).unwrap();
        let d: f64 = rng.random();
        let j = dynamics
            .cost_complex(&rho, &path, d)
            .map_err(|e| e.to_string())?;
        worst = worst.max(j.im.abs());
    }
    check(
        worst < 1e-9,
        format!("max |Im J| {worst:.1e} over 100 trajectories"),
    )
}

struct Batch {
    rate: f64,
    off_line: usize,
    composition: f64,
    converged: usize,
    identical: bool,
}

fn batch() -> Result<Batch, String> {
    let e = |e: zzcert::Error| e.to_string();
    let dir_a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir_b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = ExperimentConfig {
        n_samples: 100,
        state_kind: KindSelection::All,
        seed: 2024,
        output_dir: dir_a.path().to_path_buf(),
        ..Default::default()
    };
    let samples = harness::sample_batch(&cfg);
    let outcomes = harness::run_samples(&cfg, &samples).map_err(e)?;
    let summary = harness::write_outputs(&cfg.output_dir, &outcomes).map_err(e)?;

    // scatter points of converged samples must sit on the line
    let scatter =
        fs::read_to_string(dir_a.path().join("scatter.csv")).map_err(|e| e.to_string())?;
    let mut off_line = 0;
    for (line, o) in scatter.lines().skip(1).zip(&outcomes) {
        let (c, m) = line.split_once(',').ok_or("bad scatter row")?;
        let (c, m): (f64, f64) = (
            c.parse().map_err(|_| "bad float")?,
            m.parse().map_err(|_| "bad float")?,
        );
        if o.record.converged && (m - c).abs() > 0.05 * c.max(0.05) {
            off_line += 1;
        }
    }

    let dynamics = Dynamics::ideal();
    let mut composition: f64 = 0.0;
    let mut converged = 0;
    for o in &outcomes {
        if let Some(r) = o.result.as_ref().filter(|r| r.converged) {
            converged += 1;
            let u = dynamics.composed_unitary(&r.path).map_err(e)?;
            let dev = (o.rho0.conjugate_by(&u).matrix() - r.rho_final.matrix()).norm();
            composition = composition.max(dev);
        }
    }

    let cfg_b = ExperimentConfig {
        output_dir: dir_b.path().to_path_buf(),
        workers: 2,
        ..cfg.clone()
    };
    harness::run_batch(&cfg_b).map_err(e)?;
    let identical = ["records.csv", "scatter.csv", "histogram.csv"]
        .iter()
        .all(|f| fs::read(dir_a.path().join(f)).ok() == fs::read(dir_b.path().join(f)).ok());

    Ok(Batch {
        rate: summary.convergence_rate,
        off_line,
        composition,
        converged,
        identical,
    })
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |name: &str, start: Instant, outcome: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS  {name}: {d} [{secs:.1}s]"),
            Err(d) => {
                failures += 1;
                println!("FAIL  {name}: {d} [{secs:.1}s]")
            }
        }
    };

    let t = Instant::now();
    report("lie closure dimension and round growth", t, dla_dimension());
    let t = Instant::now();
    report("controllability under drift", t, drift_robustness());
    let t = Instant::now();
    report("concurrence oracles", t, concurrence_suite());
    let t = Instant::now();
    report("spectrum bounds sandwich", t, sandwich());
    let t = Instant::now();
    report("adjoint gradient consistency", t, gradient_consistency());
    let t = Instant::now();
    report("realness of the complex cost", t, realness());

    let t = Instant::now();
    match batch() {
        Ok(b) => {
            let after = Instant::now();
            report(
                "batch convergence and scatter",
                t,
                check(
                    b.rate >= 0.9 && b.off_line == 0,
                    format!(
                        "{:.0}% converged, {} converged scatter points off the line",
                        100.0 * b.rate,
                        b.off_line
                    ),
                ),
            );
            report(
                "unitary composition",
                after,
                check(
                    b.composition <= 1e-9,
                    format!(
                        "max deviation {:.1e} over {} converged samples",
                        b.composition, b.converged
                    ),
                ),
            );
            report(
                "determinism",
                after,
                check(
                    b.identical,
                    format!("repeat run CSVs identical: {}", b.identical),
                ),
            );
        }
        Err(e) => {
            for name in [
                "batch convergence and scatter",
                "unitary composition",
                "determinism",
            ] {
                report(name, t, Err(e.clone()));
            }
        }
    }

    if failures == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
