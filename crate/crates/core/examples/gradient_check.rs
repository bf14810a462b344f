//! Compares the adjoint gradient with central differences of the cost while
//! the slice duration shrinks. The mismatch should roughly halve each time.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zzcert::control::{ControlPath, Dynamics};
use zzcert::quantum::{sample_state, StateKind};

fn main() -> zzcert::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rho = sample_state(StateKind::Mixed, 5);
    let base = ControlPath::random(4, 1.0, 0.005, &mut rng)?;
    let target = 0.3;
    let dynamics = Dynamics::ideal();

    let mut prev: Option<f64> = None;
    for dt in [1.0, 0.5, 0.25, 0.125, 0.0625] {
        let path = ControlPath { dt, ..base.clone() };
        let g = dynamics.adjoint_gradient(&rho, &path, target)?;
        let fd = dynamics.finite_difference_gradient(&rho, &path, target, 1e-6)?;
        let err = g
            .iter()
            .flatten()
            .zip(fd.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        match prev {
            Some(p) => println!("dt {dt:<7} max error {err:.3e}  ratio {:.3}", p / err),
            None => println!("dt {dt:<7} max error {err:.3e}"),
        }
        prev = Some(err);
    }
    Ok(())
}
