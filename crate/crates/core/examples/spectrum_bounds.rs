//! How far the ZZ expectation can be pushed by unitary evolution, compared
//! with the concurrence it has to reach.
use zzcert::quantum::{sample_state, spectrum_bounds, zz_expectation, DensityMatrix, StateKind};

fn main() {
    let mut states: Vec<(String, DensityMatrix)> = StateKind::ALL
        .into_iter()
        .flat_map(|k| (0..3).map(move |s| (format!("{k} #{s}"), sample_state(k, s))))
        .collect();
    states.push(("werner 0.6".into(), DensityMatrix::werner(0.6).unwrap()));
    states.push(("I/4".into(), DensityMatrix::maximally_mixed()));

    println!(
        "{:<12} {:>9} {:>9} {:>9} {:>9}",
        "state", "m", "zz now", "C", "M"
    );
    for (label, rho) in &states {
        let b = spectrum_bounds(rho).unwrap();
        println!(
            "{label:<12} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            b.min,
            zz_expectation(rho),
            b.concurrence,
            b.max
        );
        assert!(b.is_sandwiched(1e-12));
    }
}
