//! Finds a four-slice schedule whose final ZZ expectation equals the
//! concurrence of the starting state.
use zzcert::control::{synthesize, SynthesisConfig};
use zzcert::quantum::{sample_state, Bell, ControlVector, DensityMatrix, StateKind};

fn report(label: &str, rho: &DensityMatrix, cfg: &SynthesisConfig) {
    let r = synthesize(rho, cfg).expect("valid config");
    println!(
        "{label}: C = {:.5}, measured {:.5}, error {:.2e} ({}), {} iterations, converged {}",
        r.target,
        r.measurement,
        r.relative_error,
        r.error_kind.as_str(),
        r.iterations,
        r.converged
    );
    println!(
        "  slice  {}",
        ControlVector::NAMES.map(|n| format!("{n:>10}")).join("")
    );
    for (k, u) in r.path.slices.iter().enumerate() {
        println!(
            "  {:>5}  {}",
            k + 1,
            u.to_array().map(|x| format!("{x:>10.2e}")).join("")
        );
    }
}

fn main() {
    let cfg = SynthesisConfig::default();
    report("bell psi-", &DensityMatrix::bell(Bell::PsiMinus), &cfg);
    report("werner 0.8", &DensityMatrix::werner(0.8).unwrap(), &cfg);
    report("random mixed", &sample_state(StateKind::Mixed, 3), &cfg);
}
