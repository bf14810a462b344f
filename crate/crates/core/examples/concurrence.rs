//! Concurrence of a few textbook states, by both routes.
use zzcert::quantum::{
    concurrence, concurrence_from_spin_flip_product, sample_state, Bell, DensityMatrix, StateKind,
};

fn show(label: &str, rho: &DensityMatrix) {
    let c = concurrence(rho).expect("valid state");
    let alt = concurrence_from_spin_flip_product(rho);
    println!("{label:<14} C = {c:.6}   (spin-flip product route {alt:.6})");
}

fn main() {
    for b in Bell::ALL {
        show(&format!("{b:?}"), &DensityMatrix::bell(b));
    }
    show("|00>", &DensityMatrix::basis(0));
    show("I/4", &DensityMatrix::maximally_mixed());
    for p in [0.2, 1.0 / 3.0, 0.5, 0.8] {
        // C = max(0, (3p - 1)/2)
        show(
            &format!("werner {p:.3}"),
            &DensityMatrix::werner(p).unwrap(),
        );
    }
    for (i, kind) in StateKind::ALL.into_iter().enumerate() {
        show(&format!("random {kind}"), &sample_state(kind, i as u64));
    }
}
