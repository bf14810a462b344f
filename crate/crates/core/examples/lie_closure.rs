//! Lie closure of the six control directions, with and without a drift term.
use zzcert::controllability::{dla_closure, is_dmc, GeneratorSet, DEFAULT_TOL};
use zzcert::harness::drift_hamiltonian;

fn main() -> zzcert::Result<()> {
    let gens = GeneratorSet::two_qubit_controls();
    let basis = dla_closure(&gens, DEFAULT_TOL)?;
    println!(
        "dimension {} after rounds {:?}",
        basis.dimension(),
        basis.rounds
    );
    for e in &basis.basis {
        println!("  round {}  {}", e.round, e.derivation);
    }

    // a weak subset is not enough
    let z_only = GeneratorSet::new(
        gens.generators()[2..5].to_vec(),
        gens.labels()[2..5].to_vec(),
    )?;
    println!(
        "z-only subset: dimension {}",
        dla_closure(&z_only, DEFAULT_TOL)?.dimension()
    );

    for magnitude in [0.1, 1.0, 10.0] {
        let with = gens
            .clone()
            .with_drift(&drift_hamiltonian(magnitude, 7), "iHd")?;
        println!(
            "with drift of magnitude {magnitude}: controllable = {}",
            is_dmc(&with)?
        );
    }
    Ok(())
}
