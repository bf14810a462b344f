//! A small seeded batch written to a directory (first argument, default
//! `batch_out`). The same files come out of `zzcert run`.
use zzcert::harness::{run_batch, summarize, ExperimentConfig};

fn main() -> zzcert::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "batch_out".into());
    let cfg = ExperimentConfig {
        n_samples: 24,
        output_dir: out.into(),
        seed: 7,
        ..Default::default()
    };
    let records = run_batch(&cfg)?;
    for r in &records {
        println!(
            "{:>3} {:<6} C {:.4}  zz {:.4}  {} {:.2e}{}",
            r.sample_id,
            r.state_kind,
            r.concurrence,
            r.measurement,
            r.error_kind.as_str(),
            r.error,
            if r.converged { "" } else { "  (not converged)" }
        );
    }
    let s = summarize(&records)?;
    println!(
        "rate {:.2}, error quantiles p50 {:.2e} p90 {:.2e} p99 {:.2e}, outputs in {}",
        s.convergence_rate,
        s.error_quantiles.p50,
        s.error_quantiles.p90,
        s.error_quantiles.p99,
        cfg.output_dir.display()
    );
    Ok(())
}
