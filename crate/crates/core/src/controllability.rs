//! Dynamical Lie algebra closure for sets of skew-Hermitian generators.
//!
//! Elements are tracked as traceless Hermitian matrices `K` with the
//! skew-Hermitian element being `iK`; each is mapped to a 16-component real
//! coordinate vector whose Euclidean inner product equals the Frobenius inner
//! product, and a modified Gram–Schmidt basis of those vectors decides linear
//! independence. Bracket rounds run breadth-first: round `r` brackets every
//! element present at the start of the round with every element added in
//! round `r - 1`.

use crate::error::{Error, Result};
use crate::linalg::{c, commutator, hermitian_deviation, CMatrix4};
use crate::quantum::{control_generators, GENERATOR_LABELS};

/// Dimension of `su(4)`.
pub const SU4_DIM: usize = 15;

/// Default relative residual threshold for declaring an element new.
pub const DEFAULT_TOL: f64 = 1e-8;

const SKEW_TOL: f64 = 1e-10;

/// Skew-Hermitian generators with human-readable names.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    generators: Vec<CMatrix4>,
    labels: Vec<String>,
}

impl GeneratorSet {
    /// Each generator must satisfy `G† = -G`.
    pub fn new(generators: Vec<CMatrix4>, labels: Vec<String>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::DegenerateInput("no generators".into()));
        }
        if generators.len() != labels.len() {
            return Err(Error::DegenerateInput(format!(
                "{} generators but {} labels",
                generators.len(),
                labels.len()
            )));
        }
        for (g, label) in generators.iter().zip(&labels) {
            let dev = hermitian_deviation(&(g * c(0.0, -1.0)));
            if !(dev <= SKEW_TOL) {
                return Err(Error::DegenerateInput(format!(
                    "{label} is not skew-Hermitian (deviation {dev:e})"
                )));
            }
        }
        Ok(GeneratorSet { generators, labels })
    }

    /// `{iH}` for each Hermitian `H`.
    pub fn from_hamiltonians(hs: &[CMatrix4], labels: &[&str]) -> Result<Self> {
        Self::new(
            hs.iter().map(|h| h * c(0.0, 1.0)).collect(),
            labels.iter().map(|l| format!("i{l}")).collect(),
        )
    }

    /// `{iσx⊗1, i1⊗σx, iσz⊗1, i1⊗σz, iσz⊗σz, iσx⊗σx}`, the control directions
    /// of the six-parameter Hamiltonian.
    pub fn two_qubit_controls() -> Self {
        Self::from_hamiltonians(&control_generators(), &GENERATOR_LABELS)
            .expect("pauli products are Hermitian")
    }

    /// Adds `iH` for a Hermitian drift `H`.
    pub fn with_drift(mut self, drift: &CMatrix4, label: &str) -> Result<Self> {
        let g = drift * c(0.0, 1.0);
        let mut extra = GeneratorSet::new(vec![g], vec![format!("i{label}")])?;
        self.generators.append(&mut extra.generators);
        self.labels.append(&mut extra.labels);
        Ok(self)
    }

    pub fn generators(&self) -> &[CMatrix4] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Reorders the generators; closure dimension does not depend on order.
    pub fn permuted(&self, order: &[usize]) -> Self {
        GeneratorSet {
            generators: order.iter().map(|&i| self.generators[i]).collect(),
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }
}

/// One basis element of the closure and how it was obtained.
#[derive(Debug, Clone)]
pub struct BasisElement {
    /// Traceless skew-Hermitian matrix.
    pub matrix: CMatrix4,
    /// A generator label or a nested bracket such as `[iXI, iZZ]`.
    pub derivation: String,
    /// 0 for input generators, `r` for elements found in bracket round `r`.
    pub round: usize,
}

/// Linearly independent skew-Hermitian elements spanning the closure.
#[derive(Debug, Clone)]
pub struct LieBasis {
    pub basis: Vec<BasisElement>,
    /// Number of elements added per round, starting with the input generators.
    /// Trailing rounds that add nothing are not recorded.
    pub rounds: Vec<usize>,
    /// Whether any generator carried a component along the identity.
    pub has_identity_component: bool,
    pub tol: f64,
}

impl LieBasis {
    /// Number of independent traceless elements (the `su(4)` part).
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full_su4(&self) -> bool {
        self.dimension() == SU4_DIM
    }

    /// Runs one more full bracket round over the whole basis and returns how
    /// many new independent elements it would add. Zero for a closed basis.
    pub fn extra_round_growth(&self) -> usize {
        let mut span = Span::new(self.tol);
        for e in &self.basis {
            span.try_insert(&e.matrix);
        }
        let mut added = 0;
        for i in 0..self.basis.len() {
            for j in (i + 1)..self.basis.len() {
                let b = commutator(&self.basis[i].matrix, &self.basis[j].matrix);
                if span.try_insert(&b) {
                    added += 1;
                }
            }
        }
        added
    }
}

// Orthonormal vectors in the real 16-dimensional coordinate space.
struct Span {
    ortho: Vec<[f64; 16]>,
    tol: f64,
}

impl Span {
    fn new(tol: f64) -> Self {
        Span {
            ortho: Vec::new(),
            tol,
        }
    }

    // Inserts the traceless part of `g` if its residual against the span
    // exceeds `tol` times its own norm.
    fn try_insert(&mut self, g: &CMatrix4) -> bool {
        let mut v = coordinates(&traceless(g));
        let norm = l2(&v);
        if norm == 0.0 {
            return false;
        }
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for q in &self.ortho {
                let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= d * y;
                }
            }
        }
        let resid = l2(&v);
        if resid <= self.tol * norm {
            return false;
        }
        for x in v.iter_mut() {
            *x /= resid;
        }
        self.ortho.push(v);
        true
    }
}

fn l2(v: &[f64; 16]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn traceless(g: &CMatrix4) -> CMatrix4 {
    let shift = g.trace() / c(4.0, 0.0);
    g - CMatrix4::identity() * shift
}

// Coordinates of a skew-Hermitian G = iK: the diagonal of K and the real and
// imaginary parts of its upper triangle, the latter weighted by √2 so that the
// dot product reproduces Re Tr(A† B).
fn coordinates(g: &CMatrix4) -> [f64; 16] {
    let k = g * c(0.0, -1.0);
    let mut out = [0.0; 16];
    let mut n = 0;
    for i in 0..4 {
        out[n] = k[(i, i)].re;
        n += 1;
    }
    let s = std::f64::consts::SQRT_2;
    for i in 0..4 {
        for j in (i + 1)..4 {
            out[n] = s * k[(i, j)].re;
            out[n + 1] = s * k[(i, j)].im;
            n += 2;
        }
    }
    out
}

/// Closure of the generators under commutators, up to relative tolerance `tol`.
pub fn dla_closure(gens: &GeneratorSet, tol: f64) -> Result<LieBasis> {
    if gens.is_empty() {
        return Err(Error::DegenerateInput("no generators".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut span = Span::new(tol);
    let mut basis: Vec<BasisElement> = Vec::new();
    let mut has_identity_component = false;

    for (g, label) in gens.generators().iter().zip(gens.labels()) {
        if g.trace().norm() > tol * g.norm().max(1.0) {
            has_identity_component = true;
        }
        if span.try_insert(g) {
            basis.push(BasisElement {
                matrix: traceless(g),
                derivation: label.clone(),
                round: 0,
            });
        }
    }
    let mut rounds = vec![basis.len()];
    let mut frontier = 0..basis.len();

    for round in 1.. {
        let start = basis.len();
        for n in frontier.clone() {
            for m in 0..start {
                // pairs inside the frontier are visited once
                if frontier.contains(&m) && m >= n {
                    continue;
                }
                let bracket = commutator(&basis[m].matrix, &basis[n].matrix);
                if span.try_insert(&bracket) {
                    let derivation = format!("[{}, {}]", basis[m].derivation, basis[n].derivation);
                    basis.push(BasisElement {
                        matrix: bracket,
                        derivation,
                        round,
                    });
                }
            }
        }
        let added = basis.len() - start;
        if added == 0 {
            break;
        }
        rounds.push(added);
        frontier = start..basis.len();
    }

    Ok(LieBasis {
        basis,
        rounds,
        has_identity_component,
        tol,
    })
}

/// Density-matrix controllability: the closure is all of `su(4)`.
pub fn is_dmc(gens: &GeneratorSet) -> Result<bool> {
    Ok(dla_closure(gens, DEFAULT_TOL)?.is_full_su4())
}

/// Frobenius norm of the anti-Hermitian defect `G + G†`.
pub fn skew_deviation(g: &CMatrix4) -> f64 {
    (g + g.adjoint()).norm()
}
