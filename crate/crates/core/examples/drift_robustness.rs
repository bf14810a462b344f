//! Synthesis with an unknown-to-the-user but fixed drift Hamiltonian added
//! to every slice. The optimizer sees the perturbed dynamics.
use zzcert::control::{Dynamics, SynthesisConfig, Synthesizer};
use zzcert::harness::drift_hamiltonian;
use zzcert::quantum::{sample_state, StateKind};

fn main() -> zzcert::Result<()> {
    let cfg = SynthesisConfig::default();
    let states: Vec<_> = (0..6)
        .map(|s| sample_state(StateKind::ALL[s % 3], 40 + s as u64))
        .collect();
    for magnitude in [0.0, 1e-3, 1e-2, 1e-1] {
        let dynamics = Dynamics::with_drift(drift_hamiltonian(magnitude, 1))?;
        let synth = Synthesizer::new(cfg.clone())?.with_dynamics(dynamics);
        let mut converged = 0;
        let mut worst: f64 = 0.0;
        for rho in &states {
            let r = synth.run(rho)?;
            converged += r.converged as usize;
            worst = worst.max(r.relative_error);
        }
        println!(
            "drift {magnitude:<6} converged {converged}/{}  worst error {worst:.3e}",
            states.len()
        );
    }
    Ok(())
}
