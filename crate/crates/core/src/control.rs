//! Adjoint-gradient synthesis of piecewise-constant control schedules.
//!
//! The schedule has `N` slices of duration `dt`; slice `k` (1-based) applies
//! `H(u_k)` and maps `ρ_{k-1}` to `ρ_k = U_k ρ_{k-1} U_k†` with
//! `U_k = exp(-i dt H(u_k))`. The cost is
//!
//! ```text
//! J = ½ (d - Tr(σzz ρ_N))² + Σ_k (dt/8) Tr(H(u_k)† H(u_k))
//! ```
//!
//! Costates run backwards from `λ_N = -(d - Tr(ρ_N σzz)) σzz` through
//! `λ_{k-1} = U_k† λ_k U_k`, so `λ_k` sits at the same time as `ρ_k`. The
//! gradient of the control Hamiltonian for slice `k` and parameter `l` is
//!
//! ```text
//! g_{k,l} = u_{l,k} + (1/i) Tr(λ_k [∂H/∂u_l, ρ_k])
//! ```
//!
//! which equals `(1/dt) ∂J/∂u_{l,k}` up to `O(dt)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, commutator, expm_skew, hermitian_deviation, CMatrix4, HERMITIAN_TOL};
use crate::quantum::{
    concurrence, control_generators, hamiltonian, zz_expectation, zz_observable, ControlVector,
    DensityMatrix,
};

/// Concurrence below which the relative error is replaced by the absolute error.
pub const RELATIVE_ERROR_FLOOR: f64 = 0.05;

/// An ordered schedule of slice controls with a common slice duration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlPath {
    pub slices: Vec<ControlVector>,
    pub dt: f64,
}

impl ControlPath {
    pub fn new(slices: Vec<ControlVector>, dt: f64) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::InvalidConfig(
                "a control path needs at least one slice".into(),
            ));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "slice duration must be positive, got {dt}"
            )));
        }
        if !slices.iter().all(ControlVector::is_finite) {
            return Err(Error::InvalidConfig("non-finite control value".into()));
        }
        Ok(ControlPath { slices, dt })
    }

    pub fn zeros(n_slices: usize, dt: f64) -> Result<Self> {
        Self::new(vec![ControlVector::default(); n_slices], dt)
    }

    /// Every parameter uniform in `[-scale, scale]`.
    pub fn random(n_slices: usize, dt: f64, scale: f64, rng: &mut impl Rng) -> Result<Self> {
        let slices = (0..n_slices)
            .map(|_| {
                ControlVector::from_array(std::array::from_fn(|_| {
                    if scale > 0.0 {
                        rng.random_range(-scale..=scale)
                    } else {
                        0.0
                    }
                }))
            })
            .collect();
        Self::new(slices, dt)
    }

    pub fn n_slices(&self) -> usize {
        self.slices.len()
    }

    /// The schedule that undoes this one in the absence of drift: slices in
    /// reverse order with negated controls.
    pub fn inverse(&self) -> Self {
        ControlPath {
            slices: self
                .slices
                .iter()
                .rev()
                .map(|u| ControlVector::from_array(u.to_array().map(|x| -x)))
                .collect(),
            dt: self.dt,
        }
    }

    /// `self - step · grad`
    pub fn stepped(&self, grad: &[[f64; 6]], step: f64) -> Self {
        let slices = self
            .slices
            .iter()
            .zip(grad)
            .map(|(u, g)| {
                let a = u.to_array();
                ControlVector::from_array(std::array::from_fn(|l| a[l] - step * g[l]))
            })
            .collect();
        ControlPath {
            slices,
            dt: self.dt,
        }
    }
}

/// Lagrange-multiplier matrix propagated backwards in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Costate(pub CMatrix4);

impl Costate {
    pub fn matrix(&self) -> &CMatrix4 {
        &self.0
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        hermitian_deviation(&self.0) <= tol
    }
}

/// `λ_N = -(d - Tr(ρ_N σzz)) σzz`
pub fn terminal_costate(rho_final: &DensityMatrix, target: f64) -> Costate {
    let residual = target - zz_expectation(rho_final);
    Costate(zz_observable().scale(-residual))
}

/// Slice dynamics: the control Hamiltonian plus a fixed Hermitian drift.
#[derive(Debug, Clone, PartialEq)]
pub struct Dynamics {
    drift: CMatrix4,
}

impl Default for Dynamics {
    fn default() -> Self {
        Self::ideal()
    }
}

impl Dynamics {
    pub fn ideal() -> Self {
        Dynamics {
            drift: CMatrix4::zeros(),
        }
    }

    /// `H(u) + drift` on every slice.
    pub fn with_drift(drift: CMatrix4) -> Result<Self> {
        let deviation = hermitian_deviation(&drift);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Dynamics { drift })
    }

    pub fn drift(&self) -> &CMatrix4 {
        &self.drift
    }

    pub fn slice_hamiltonian(&self, u: &ControlVector) -> CMatrix4 {
        hamiltonian(u) + self.drift
    }

    /// `U_k = exp(-i dt (H(u_k) + drift))` for every slice.
    pub fn propagators(&self, path: &ControlPath) -> Result<Vec<CMatrix4>> {
        path.slices
            .iter()
            .map(|u| expm_skew(&self.slice_hamiltonian(u), path.dt))
            .collect()
    }

    /// `U_N ⋯ U_2 U_1`
    pub fn composed_unitary(&self, path: &ControlPath) -> Result<CMatrix4> {
        Ok(self
            .propagators(path)?
            .iter()
            .fold(CMatrix4::identity(), |acc, u| u * acc))
    }

    /// `ρ_0, …, ρ_N`
    pub fn forward(&self, rho0: &DensityMatrix, path: &ControlPath) -> Result<Vec<DensityMatrix>> {
        Ok(forward_with(&self.propagators(path)?, rho0))
    }

    /// `λ_1, …, λ_N` with `λ_N = lambda_n`.
    pub fn backward(&self, lambda_n: &Costate, path: &ControlPath) -> Result<Vec<Costate>> {
        Ok(backward_with(&self.propagators(path)?, lambda_n))
    }

    pub fn cost(&self, rho0: &DensityMatrix, path: &ControlPath, target: f64) -> Result<f64> {
        let rhos = self.forward(rho0, path)?;
        Ok(cost_from(&rhos[rhos.len() - 1], path, target))
    }

    /// The full discretised Lagrangian, evaluated in complex arithmetic:
    ///
    /// ```text
    /// ½(d - Tr(σzz ρ_N))² + Σ_k dt [ Tr(λ_k† ((1/i)[H_k, ρ_k] - (ρ_k - ρ_{k-1})/dt))
    ///                                + ⅛ Tr(H_k† H_k) ]
    /// ```
    ///
    /// The constraint residual uses a finite difference of the trajectory,
    /// so it does not vanish; the sum is nevertheless real for Hermitian
    /// costates and states.
    pub fn cost_complex(
        &self,
        rho0: &DensityMatrix,
        path: &ControlPath,
        target: f64,
    ) -> Result<Complex64> {
        let props = self.propagators(path)?;
        let rhos = forward_with(&props, rho0);
        let n = path.n_slices();
        let lambdas = backward_with(&props, &terminal_costate(&rhos[n], target));
        let zz = zz_observable();
        let residual = c(target, 0.0) - (zz * rhos[n].matrix()).trace();
        let mut total = residual * residual * 0.5;
        let minus_i = c(0.0, -1.0);
        for k in 1..=n {
            let hk = self.slice_hamiltonian(&path.slices[k - 1]);
            let rho = rhos[k].matrix();
            let drho = (rho - rhos[k - 1].matrix()).unscale(path.dt);
            let constraint = commutator(&hk, rho) * minus_i - drho;
            total += (lambdas[k - 1].0.adjoint() * constraint).trace() * path.dt;
            let hc = hamiltonian(&path.slices[k - 1]);
            total += (hc.adjoint() * hc).trace() * (path.dt / 8.0);
        }
        Ok(total)
    }

    /// `g_{k,l} = u_{l,k} + (1/i) Tr(λ_k [∂H/∂u_l, ρ_k])` for `k = 1..N`.
    ///
    /// `rhos` holds `ρ_0..ρ_N` and `lambdas` holds `λ_1..λ_N`.
    pub fn gradient(
        &self,
        path: &ControlPath,
        rhos: &[DensityMatrix],
        lambdas: &[Costate],
    ) -> Result<Vec<[f64; 6]>> {
        let n = path.n_slices();
        if rhos.len() != n + 1 {
            return Err(Error::MisalignedTrajectories {
                expected: n + 1,
                got: rhos.len(),
            });
        }
        if lambdas.len() != n {
            return Err(Error::MisalignedTrajectories {
                expected: n,
                got: lambdas.len(),
            });
        }
        let gens = control_generators();
        let minus_i = c(0.0, -1.0);
        Ok((1..=n)
            .map(|k| {
                let u = path.slices[k - 1].to_array();
                let rho = rhos[k].matrix();
                let lam = lambdas[k - 1].matrix();
                std::array::from_fn(|l| {
                    let t = (lam * commutator(&gens[l], rho)).trace() * minus_i;
                    u[l] + t.re
                })
            })
            .collect())
    }

    /// Forward pass, terminal costate, backward pass and gradient in one call.
    pub fn adjoint_gradient(
        &self,
        rho0: &DensityMatrix,
        path: &ControlPath,
        target: f64,
    ) -> Result<Vec<[f64; 6]>> {
        let props = self.propagators(path)?;
        let rhos = forward_with(&props, rho0);
        let lambdas = backward_with(&props, &terminal_costate(&rhos[path.n_slices()], target));
        self.gradient(path, &rhos, &lambdas)
    }

    /// Central differences of [`Dynamics::cost`] with step `h`, divided by
    /// `dt` so they are on the same scale as [`Dynamics::gradient`].
    pub fn finite_difference_gradient(
        &self,
        rho0: &DensityMatrix,
        path: &ControlPath,
        target: f64,
        h: f64,
    ) -> Result<Vec<[f64; 6]>> {
        let bumped = |k: usize, l: usize, delta: f64| {
            let mut p = path.clone();
            let mut a = p.slices[k].to_array();
            a[l] += delta;
            p.slices[k] = ControlVector::from_array(a);
            self.cost(rho0, &p, target)
        };
        let mut out = vec![[0.0; 6]; path.n_slices()];
        for (k, row) in out.iter_mut().enumerate() {
            for (l, g) in row.iter_mut().enumerate() {
                *g = (bumped(k, l, h)? - bumped(k, l, -h)?) / (2.0 * h * path.dt);
            }
        }
        Ok(out)
    }
}

fn forward_with(props: &[CMatrix4], rho0: &DensityMatrix) -> Vec<DensityMatrix> {
    let mut out = Vec::with_capacity(props.len() + 1);
    out.push(*rho0);
    for u in props {
        let next = out[out.len() - 1].conjugate_by(u);
        out.push(next);
    }
    out
}

fn backward_with(props: &[CMatrix4], lambda_n: &Costate) -> Vec<Costate> {
    let n = props.len();
    let mut out = vec![*lambda_n; n];
    for k in (1..n).rev() {
        // λ_k = U_{k+1}† λ_{k+1} U_{k+1}; props[k] is U_{k+1}
        let u = &props[k];
        let next = u.adjoint() * out[k].0 * u;
        out[k - 1] = Costate(crate::linalg::hermitian_part(&next));
    }
    out
}

fn cost_from(rho_final: &DensityMatrix, path: &ControlPath, target: f64) -> f64 {
    let residual = target - zz_expectation(rho_final);
    // Tr(H†H) = 4 |u|² for the Pauli-sum Hamiltonian
    let control: f64 = path
        .slices
        .iter()
        .map(|u| 0.5 * path.dt * u.norm_sqr())
        .sum();
    0.5 * residual * residual + control
}

pub fn forward(rho0: &DensityMatrix, path: &ControlPath) -> Result<Vec<DensityMatrix>> {
    Dynamics::ideal().forward(rho0, path)
}

pub fn backward(lambda_n: &Costate, path: &ControlPath) -> Result<Vec<Costate>> {
    Dynamics::ideal().backward(lambda_n, path)
}

pub fn cost(rho0: &DensityMatrix, path: &ControlPath, target: f64) -> Result<f64> {
    Dynamics::ideal().cost(rho0, path, target)
}

pub fn gradient(
    path: &ControlPath,
    rhos: &[DensityMatrix],
    lambdas: &[Costate],
) -> Result<Vec<[f64; 6]>> {
    Dynamics::ideal().gradient(path, rhos, lambdas)
}

/// How a measurement is compared with its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    /// `|d - m| / d`
    Relative,
    /// `|d - m|`, used when `d` is below [`RELATIVE_ERROR_FLOOR`].
    Absolute,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Relative => "relative",
            ErrorKind::Absolute => "absolute",
        }
    }
}

/// Error of `measurement` against `target` and which metric was used.
pub fn measurement_error(target: f64, measurement: f64) -> (ErrorKind, f64) {
    let abs = (target - measurement).abs();
    if target < RELATIVE_ERROR_FLOOR {
        (ErrorKind::Absolute, abs)
    } else {
        (ErrorKind::Relative, abs / target)
    }
}

/// `|d - m| ≤ tol · max(d, 0.05)`
pub fn within_tolerance(target: f64, measurement: f64, tol: f64) -> bool {
    (target - measurement).abs() <= tol * target.max(RELATIVE_ERROR_FLOOR)
}

/// Optimizer settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthesisConfig {
    pub n_slices: usize,
    pub dt: f64,
    /// Initial learning rate; halved whenever a step would increase the cost.
    pub eta: f64,
    /// Stop once `Σ_k Σ_l |g_{k,l}|` falls below this.
    pub epsilon: f64,
    pub max_iters: usize,
    /// Controls start uniform in `[-init_scale, init_scale]`.
    pub init_scale: f64,
    pub restarts: usize,
    pub rel_err_target: f64,
    pub seed: u64,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            n_slices: 4,
            dt: 100.0,
            eta: 1e-5,
            epsilon: 1e-5,
            max_iters: 5000,
            init_scale: 0.005,
            restarts: 8,
            rel_err_target: 0.05,
            seed: 0,
        }
    }
}

impl SynthesisConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_slices < 1 {
            return bad("n_slices must be at least 1".into());
        }
        if !(self.dt > 0.0) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.eta > 0.0) {
            return bad(format!("eta must be positive, got {}", self.eta));
        }
        if !(self.epsilon > 0.0) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.max_iters < 1 {
            return bad("max_iters must be at least 1".into());
        }
        if self.restarts < 1 {
            return bad("restarts must be at least 1".into());
        }
        if !(self.init_scale >= 0.0) {
            return bad(format!(
                "init_scale must be non-negative, got {}",
                self.init_scale
            ));
        }
        if !(self.rel_err_target > 0.0 && self.rel_err_target < 1.0) {
            return bad(format!(
                "rel_err_target must lie in (0, 1), got {}",
                self.rel_err_target
            ));
        }
        Ok(())
    }
}

/// Outcome of [`synthesize`].
#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub path: ControlPath,
    pub rho_final: DensityMatrix,
    /// `Tr(σzz ρ(t_f))`
    pub measurement: f64,
    /// Concurrence of the initial state.
    pub target: f64,
    pub error_kind: ErrorKind,
    /// Relative error, or absolute error when `error_kind` is `Absolute`.
    pub relative_error: f64,
    pub cost_history: Vec<f64>,
    pub iterations: usize,
    /// Measurement within `rel_err_target · max(d, 0.05)` of the target.
    pub converged: bool,
    /// The stopping criterion `Σ |g|` at the returned controls.
    pub grad_norm_final: f64,
    /// Steps where the cost went up (only possible once the step size has
    /// bottomed out).
    pub cost_increases: usize,
    /// Index of the restart that produced this result.
    pub restart: usize,
}

/// SplitMix64 finaliser, used to derive independent child seeds.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Gradient-descent synthesizer bound to a configuration and dynamics.
#[derive(Debug, Clone)]
pub struct Synthesizer {
    cfg: SynthesisConfig,
    dynamics: Dynamics,
}

const MIN_STEP: f64 = 1e-14;

impl Synthesizer {
    pub fn new(cfg: SynthesisConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Synthesizer {
            cfg,
            dynamics: Dynamics::ideal(),
        })
    }

    pub fn with_dynamics(mut self, dynamics: Dynamics) -> Self {
        self.dynamics = dynamics;
        self
    }

    pub fn config(&self) -> &SynthesisConfig {
        &self.cfg
    }

    pub fn dynamics(&self) -> &Dynamics {
        &self.dynamics
    }

    /// Runs every restart and keeps the one whose measurement lands closest
    /// to the concurrence of `rho0`.
    pub fn run(&self, rho0: &DensityMatrix) -> Result<SynthesisResult> {
        let target = concurrence(rho0)?;
        let runs: Vec<Result<SynthesisResult>> = (0..self.cfg.restarts)
            .into_par_iter()
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(self.cfg.seed, r as u64));
                let init = ControlPath::random(
                    self.cfg.n_slices,
                    self.cfg.dt,
                    self.cfg.init_scale,
                    &mut rng,
                )?;
                self.descend(rho0, target, init, r)
            })
            .collect();
        let mut best: Option<SynthesisResult> = None;
        for run in runs {
            let run = run?;
            let better = match &best {
                None => true,
                Some(b) => (run.target - run.measurement).abs() < (b.target - b.measurement).abs(),
            };
            if better {
                best = Some(run);
            }
        }
        Ok(best.expect("at least one restart"))
    }

    /// Plain gradient descent from `init` with step halving on cost increase.
    pub fn descend(
        &self,
        rho0: &DensityMatrix,
        target: f64,
        init: ControlPath,
        restart: usize,
    ) -> Result<SynthesisResult> {
        let dyn_ = &self.dynamics;
        let mut path = init;
        let mut props = dyn_.propagators(&path)?;
        let mut rhos = forward_with(&props, rho0);
        let mut cost = cost_from(&rhos[rhos.len() - 1], &path, target);
        let mut eta = self.cfg.eta;
        let mut history = Vec::new();
        let mut iterations = 0;
        let mut cost_increases = 0;
        let mut grad_sum;

        loop {
            history.push(cost);
            let n = path.n_slices();
            let lambdas = backward_with(&props, &terminal_costate(&rhos[n], target));
            let grad = dyn_.gradient(&path, &rhos, &lambdas)?;
            grad_sum = grad.iter().flatten().map(|g| g.abs()).sum::<f64>();
            if grad_sum < self.cfg.epsilon || iterations >= self.cfg.max_iters {
                break;
            }
            iterations += 1;

            let mut accepted = false;
            while eta >= MIN_STEP {
                let trial = path.stepped(&grad, eta);
                let trial_props = dyn_.propagators(&trial)?;
                let trial_rhos = forward_with(&trial_props, rho0);
                let trial_cost = cost_from(&trial_rhos[n], &trial, target);
                if trial_cost <= cost {
                    path = trial;
                    props = trial_props;
                    rhos = trial_rhos;
                    cost = trial_cost;
                    eta *= 1.2;
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            if !accepted {
                // the approximate gradient is no longer a descent direction
                break;
            }
        }
        // any increase would show up here; steps are only accepted downhill
        cost_increases += history.windows(2).filter(|w| w[1] > w[0]).count();

        let rho_final = rhos[rhos.len() - 1];
        let measurement = zz_expectation(&rho_final);
        let (error_kind, relative_error) = measurement_error(target, measurement);
        Ok(SynthesisResult {
            converged: within_tolerance(target, measurement, self.cfg.rel_err_target),
            path,
            rho_final,
            measurement,
            target,
            error_kind,
            relative_error,
            cost_history: history,
            iterations,
            grad_norm_final: grad_sum,
            cost_increases,
            restart,
        })
    }
}

/// Synthesizes a schedule for `rho0` under ideal (drift-free) dynamics.
pub fn synthesize(rho0: &DensityMatrix, cfg: &SynthesisConfig) -> Result<SynthesisResult> {
    Synthesizer::new(cfg.clone())?.run(rho0)
}
