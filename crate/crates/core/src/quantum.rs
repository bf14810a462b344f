//! Two-qubit states, the six-parameter control Hamiltonian, and the
//! entanglement quantities the measurement protocol is built around.
//!
//! Basis ordering is `|00⟩, |01⟩, |10⟩, |11⟩` and `ħ = 1` throughout.

use std::fmt;
use std::str::FromStr;

use nalgebra::SVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, expm_skew, herm_eig, hermitian_deviation, hermitian_part, identity2, kron, sigma_x, sigma_y,
    sigma_z, sqrtm_psd, CMatrix4,
};

/// Tolerance for the Hermiticity, unit-trace and positivity checks on states.
pub const STATE_TOL: f64 = 1e-9;

pub type StateVector = SVector<Complex64, 4>;

/// A 4×4 Hermitian, positive semi-definite, unit-trace matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(CMatrix4);

impl DensityMatrix {
    /// Validates `m` against the density-matrix invariants.
    pub fn new(m: CMatrix4) -> Result<Self> {
        if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let deviation = hermitian_deviation(&m);
        if deviation > STATE_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let eig = herm_eig(&m)?;
        if eig.values[3] < -STATE_TOL {
            return Err(Error::NegativeSpectrum { min: eig.values[3] });
        }
        Ok(DensityMatrix(hermitian_part(&m)))
    }

    // Callers guarantee the invariants (unitary conjugation of a valid state).
    pub(crate) fn from_trusted(m: CMatrix4) -> Self {
        DensityMatrix(hermitian_part(&m))
    }

    /// `|ψ⟩⟨ψ|` for the normalised `psi`.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState(
                "zero or non-finite state vector".into(),
            ));
        }
        let psi = psi / c(norm, 0.0);
        Ok(DensityMatrix(hermitian_part(&(psi * psi.adjoint()))))
    }

    /// Computational basis state `|index⟩`, `index` in `0..4`.
    pub fn basis(index: usize) -> Self {
        let mut m = CMatrix4::zeros();
        m[(index, index)] = c(1.0, 0.0);
        DensityMatrix(m)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(CMatrix4::identity().scale(0.25))
    }

    pub fn bell(which: Bell) -> Self {
        Self::from_pure(&which.vector()).expect("bell vectors are normalised")
    }

    /// `p |Φ⁺⟩⟨Φ⁺| + (1 - p) I/4`
    pub fn werner(p: f64) -> Result<Self> {
        let phi = Self::bell(Bell::PhiPlus).0;
        Self::new(phi.scale(p) + CMatrix4::identity().scale((1.0 - p) / 4.0))
    }

    pub fn matrix(&self) -> &CMatrix4 {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix4 {
        self.0
    }

    /// Eigenvalues in descending order.
    pub fn spectrum(&self) -> [f64; 4] {
        let v = herm_eig(&self.0)
            .expect("density matrices are Hermitian")
            .values;
        [v[0], v[1], v[2], v[3]]
    }

    pub fn conjugate_by(&self, u: &CMatrix4) -> Self {
        DensityMatrix::from_trusted(u * self.0 * u.adjoint())
    }

    /// `(σy⊗σy) ρ* (σy⊗σy)`
    pub fn spin_flip(&self) -> CMatrix4 {
        let yy = kron(&sigma_y(), &sigma_y());
        yy * self.0.conjugate() * yy
    }
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus];

    pub fn vector(self) -> StateVector {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b, cc, d) = match self {
            Bell::PhiPlus => (h, 0.0, 0.0, h),
            Bell::PhiMinus => (h, 0.0, 0.0, -h),
            Bell::PsiPlus => (0.0, h, h, 0.0),
            Bell::PsiMinus => (0.0, h, -h, 0.0),
        };
        StateVector::new(c(a, 0.), c(b, 0.), c(cc, 0.), c(d, 0.))
    }
}

/// The six real parameters of one Hamiltonian slice.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ControlVector {
    /// Tunneling amplitude of qubit A.
    pub kappa_a: f64,
    /// Tunneling amplitude of qubit B.
    pub kappa_b: f64,
    /// Bias of qubit A.
    pub eps_a: f64,
    /// Bias of qubit B.
    pub eps_b: f64,
    /// ZZ coupling.
    pub zeta: f64,
    /// XX coupling.
    pub nu: f64,
}

impl ControlVector {
    pub const NAMES: [&'static str; 6] = ["kappa_a", "kappa_b", "eps_a", "eps_b", "zeta", "nu"];

    pub fn from_array(u: [f64; 6]) -> Self {
        ControlVector {
            kappa_a: u[0],
            kappa_b: u[1],
            eps_a: u[2],
            eps_b: u[3],
            zeta: u[4],
            nu: u[5],
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.kappa_a,
            self.kappa_b,
            self.eps_a,
            self.eps_b,
            self.zeta,
            self.nu,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.to_array().iter().map(|x| x * x).sum()
    }
}

/// `∂H/∂u_l` for each control, in [`ControlVector::NAMES`] order:
/// `σx⊗1, 1⊗σx, σz⊗1, 1⊗σz, σz⊗σz, σx⊗σx`.
pub fn control_generators() -> [CMatrix4; 6] {
    let (i, x, z) = (identity2(), sigma_x(), sigma_z());
    [
        kron(&x, &i),
        kron(&i, &x),
        kron(&z, &i),
        kron(&i, &z),
        kron(&z, &z),
        kron(&x, &x),
    ]
}

/// Pauli labels of [`control_generators`].
pub const GENERATOR_LABELS: [&str; 6] = ["XI", "IX", "ZI", "IZ", "ZZ", "XX"];

/// The real symmetric slice Hamiltonian, written out entry by entry.
pub fn hamiltonian(u: &ControlVector) -> CMatrix4 {
    let ep = u.eps_a + u.eps_b;
    let em = u.eps_a - u.eps_b;
    let (ka, kb, z, n) = (u.kappa_a, u.kappa_b, u.zeta, u.nu);
    #[rustfmt::skip]
    let rows = [
        ep + z, kb,      ka,      n,
        kb,     em - z,  n,       ka,
        ka,     n,       -em - z, kb,
        n,      ka,      kb,      -ep + z,
    ];
    CMatrix4::from_row_slice(&rows.map(|x| c(x, 0.0)))
}

/// `σz⊗σz`
pub fn zz_observable() -> CMatrix4 {
    kron(&sigma_z(), &sigma_z())
}

/// `Tr((σz⊗σz) ρ) = ρ₁₁ - ρ₂₂ - ρ₃₃ + ρ₄₄`
pub fn zz_expectation(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    m[(0, 0)].re - m[(1, 1)].re - m[(2, 2)].re + m[(3, 3)].re
}

/// `exp(-i dt H)`
pub fn propagator(h: &CMatrix4, dt: f64) -> Result<CMatrix4> {
    expm_skew(h, dt)
}

/// `U ρ U†` with `U = exp(-i dt H(u))`.
pub fn evolve(rho: &DensityMatrix, u: &ControlVector, dt: f64) -> Result<DensityMatrix> {
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "slice duration must be positive, got {dt}"
        )));
    }
    let prop = propagator(&hamiltonian(u), dt)?;
    Ok(rho.conjugate_by(&prop))
}

/// Wootters concurrence, `max(0, λ₁ - λ₂ - λ₃ - λ₄)` over the descending
/// eigenvalues of `R = √(√ρ ρ̃ √ρ)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let sqrt_rho = sqrtm_psd(rho.matrix())?;
    let inner = hermitian_part(&(sqrt_rho * rho.spin_flip() * sqrt_rho));
    let r = sqrtm_psd(&inner)?;
    let l = herm_eig(&r)?.values;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// Concurrence from the square roots of the eigenvalues of the non-Hermitian
/// product `ρ ρ̃`, computed with a general (Schur) eigensolver. Independent of
/// the Hermitian route in [`concurrence`]; the two agree to rounding.
pub fn concurrence_from_spin_flip_product(rho: &DensityMatrix) -> f64 {
    let product = rho.matrix() * rho.spin_flip();
    let eig = product
        .eigenvalues()
        .expect("complex Schur form is triangular");
    let mut roots: Vec<f64> = eig.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0)
}

/// Range `[min, max]` of `Tr((σz⊗σz) ρ')` over all `ρ'` unitarily equivalent
/// to a state, together with that state's concurrence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBounds {
    pub min: f64,
    pub max: f64,
    pub concurrence: f64,
}

impl SpectrumBounds {
    /// `min ≤ 0 ≤ concurrence ≤ max`, up to `tol`.
    pub fn is_sandwiched(&self, tol: f64) -> bool {
        self.min <= tol && self.concurrence >= -tol && self.concurrence <= self.max + tol
    }

    pub fn contains(&self, value: f64, tol: f64) -> bool {
        value >= self.min - tol && value <= self.max + tol
    }
}

/// The ZZ eigenvalues are `(1, 1, -1, -1)`, so pairing them with the sorted
/// spectrum of `ρ` gives the extremes of the reachable measurement.
pub fn spectrum_bounds(rho: &DensityMatrix) -> Result<SpectrumBounds> {
    let [l1, l2, l3, l4] = rho.spectrum();
    let max = (l1 + l2) - (l3 + l4);
    Ok(SpectrumBounds {
        min: -max,
        max,
        concurrence: concurrence(rho)?,
    })
}

/// Kind of random state drawn by [`sample_state`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    /// Haar-random rank-1 state.
    Pure,
    /// Full-rank Ginibre state `GG†/Tr(GG†)` with a 4×4 `G`.
    Mixed,
    /// Ginibre state with a 4×2 `G`.
    Rank2,
}

impl StateKind {
    pub const ALL: [StateKind; 3] = [StateKind::Pure, StateKind::Mixed, StateKind::Rank2];

    pub fn as_str(self) -> &'static str {
        match self {
            StateKind::Pure => "pure",
            StateKind::Mixed => "mixed",
            StateKind::Rank2 => "rank2",
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(StateKind::Pure),
            "mixed" => Ok(StateKind::Mixed),
            "rank2" => Ok(StateKind::Rank2),
            other => Err(Error::InvalidConfig(format!(
                "unknown state kind {other:?}"
            ))),
        }
    }
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Draws a random state of the given kind. A pure function of `seed`.
pub fn sample_state(kind: StateKind, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let columns = match kind {
        StateKind::Pure => 1,
        StateKind::Rank2 => 2,
        StateKind::Mixed => 4,
    };
    if columns == 1 {
        let psi = StateVector::from_fn(|_, _| gaussian(&mut rng));
        return DensityMatrix::from_pure(&psi).expect("gaussian vector is non-zero");
    }
    let mut g = CMatrix4::zeros();
    for j in 0..columns {
        for i in 0..4 {
            g[(i, j)] = gaussian(&mut rng);
        }
    }
    let w = g * g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_trusted(w.unscale(tr))
}

/// Haar-ish random single-qubit unitary, `exp(-i H)` for a Gaussian Hermitian `H`.
pub fn random_local_unitary(rng: &mut impl Rng) -> crate::linalg::CMatrix2 {
    let g = crate::linalg::CMatrix2::from_fn(|_, _| gaussian(rng));
    let h = hermitian_part(&g);
    expm_skew(&h, 1.0).expect("hermitian by construction")
}
