//! Bipartite state representations: validation, partial traces, the rank-2
//! eigenbasis, Bloch-ball coordinates over that eigenbasis, and seeded
//! random-state generation.
//!
//! Conventions fixed here and shared by every other module:
//! composite basis ordering `|ij> -> i * d_B + j`, and the Bloch frame of a
//! rank-2 state puts the dominant eigenvector `v1` at the +z pole, so the
//! eigen-decomposed state itself sits at `r = (0, 0, 2p - 1)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};

/// Default tolerance below which trailing eigenvalues count as zero rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

const HERMITICITY_TOL: f64 = 1e-8;
const EIGENVALUE_FLOOR: f64 = -1e-8;
const TRACE_TOL: f64 = 1e-8;
const NORM_TOL: f64 = 1e-10;
const BALL_TOL: f64 = 1e-9;
const SUPPORT_TOL: f64 = 1e-8;

/// Subsystem dimensions of a bipartite operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteDims {
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteDims {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a < 2 || dim_b < 2 {
            return Err(Error::BadDims(format!(
                "subsystem dimensions must be at least 2, got {dim_a}x{dim_b}"
            )));
        }
        Ok(Self { dim_a, dim_b })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    /// Composite index of `|ij>`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.dim_b + j
    }

    pub fn swapped(&self) -> Self {
        Self {
            dim_a: self.dim_b,
            dim_b: self.dim_a,
        }
    }
}

/// Which subsystem an operation removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Normalized pure state of a bipartite system.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    dims: BipartiteDims,
}

impl PureState {
    /// Wrap an amplitude vector, requiring unit norm within 1e-10.
    pub fn new(amplitudes: Vec<Complex64>, dims: BipartiteDims) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::BadDims(format!(
                "amplitude vector has length {}, dims require {}",
                amplitudes.len(),
                dims.total()
            )));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes, dims })
    }

    /// Normalize and wrap. Errors only on the zero vector.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex64>, dims: BipartiteDims) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes, dims)
    }

    /// Computational basis state `|ij>`.
    pub fn basis_state(dims: BipartiteDims, i: usize, j: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dims.total()];
        amplitudes[dims.index(i, j)] = Complex64::new(1.0, 0.0);
        Self { amplitudes, dims }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Projector `|psi><psi|` as a dense matrix.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.amplitudes.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        m
    }

    /// Reduced density operator of one subsystem of `|psi><psi|`.
    pub fn marginal(&self, keep: Subsystem) -> ComplexMatrix {
        let (da, db) = (self.dims.dim_a, self.dims.dim_b);
        match keep {
            Subsystem::A => {
                let mut m = ComplexMatrix::zeros(da, da);
                for i in 0..da {
                    for ip in 0..da {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for j in 0..db {
                            acc += self.amplitudes[self.dims.index(i, j)]
                                * self.amplitudes[self.dims.index(ip, j)].conj();
                        }
                        m[(i, ip)] = acc;
                    }
                }
                m
            }
            Subsystem::B => {
                let mut m = ComplexMatrix::zeros(db, db);
                for j in 0..db {
                    for jp in 0..db {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for i in 0..da {
                            acc += self.amplitudes[self.dims.index(i, j)]
                                * self.amplitudes[self.dims.index(i, jp)].conj();
                        }
                        m[(j, jp)] = acc;
                    }
                }
                m
            }
        }
    }
}

/// Validated density operator: Hermitian, positive semidefinite, trace one.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: BipartiteDims,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Density operator of a pure state.
    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: psi.projector(),
            dims: psi.dims(),
        }
    }

    /// Convex mixture `p |v1><v1| + (1-p) |v2><v2|`.
    pub fn from_rank2_mixture(p: f64, v1: &PureState, v2: &PureState) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange { value: p });
        }
        if v1.dims() != v2.dims() {
            return Err(Error::BadDims("mixture components differ in dims".into()));
        }
        let m1 = v1.projector().scale(Complex64::new(p, 0.0));
        let m2 = v2.projector().scale(Complex64::new(1.0 - p, 0.0));
        Ok(Self {
            matrix: &m1 + &m2,
            dims: v1.dims(),
        })
    }

    /// Relabel the subsystems: `rho_AB -> rho_BA`.
    pub fn swap_subsystems(&self) -> Self {
        let dims = self.dims;
        let swapped = dims.swapped();
        let n = dims.total();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..dims.dim_a {
            for j in 0..dims.dim_b {
                for ip in 0..dims.dim_a {
                    for jp in 0..dims.dim_b {
                        m[(swapped.index(j, i), swapped.index(jp, ip))] =
                            self.matrix[(dims.index(i, j), dims.index(ip, jp))];
                    }
                }
            }
        }
        Self { matrix: m, dims: swapped }
    }
}

/// Check a raw matrix against the density-operator invariants.
///
/// The matrix is symmetrized via `(M + M^dagger)/2` before the spectral
/// checks, but only after its asymmetry has been verified to be within
/// tolerance.
pub fn validate_density(m: &ComplexMatrix, dims: BipartiteDims) -> Result<DensityMatrix> {
    if !m.is_square() || m.rows() != dims.total() {
        return Err(Error::BadDims(format!(
            "matrix is {}x{}, dims {}x{} require {}",
            m.rows(),
            m.cols(),
            dims.dim_a(),
            dims.dim_b(),
            dims.total()
        )));
    }
    let residual = m.hermiticity_residual();
    if !residual.is_finite() || residual > HERMITICITY_TOL * m.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    let sym = m.symmetrize();
    let eig = hermitian_eig(&sym)?;
    if eig.eigenvalues[0] < EIGENVALUE_FLOOR {
        return Err(Error::NotPsd {
            eigenvalue: eig.eigenvalues[0],
        });
    }
    let trace = sym.trace().re;
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceNotOne { trace });
    }
    Ok(DensityMatrix { matrix: sym, dims })
}

/// Partial trace of an arbitrary operator (not necessarily a state).
pub fn partial_trace_op(
    m: &ComplexMatrix,
    dims: BipartiteDims,
    trace_out: Subsystem,
) -> ComplexMatrix {
    let (da, db) = (dims.dim_a(), dims.dim_b());
    match trace_out {
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(da, da);
            for i in 0..da {
                for ip in 0..da {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..db {
                        acc += m[(dims.index(i, j), dims.index(ip, j))];
                    }
                    out[(i, ip)] = acc;
                }
            }
            out
        }
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(db, db);
            for j in 0..db {
                for jp in 0..db {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..da {
                        acc += m[(dims.index(i, j), dims.index(i, jp))];
                    }
                    out[(j, jp)] = acc;
                }
            }
            out
        }
    }
}

/// Reduced density operator after tracing out one subsystem.
pub fn partial_trace(rho: &DensityMatrix, trace_out: Subsystem) -> ComplexMatrix {
    partial_trace_op(rho.matrix(), rho.dims(), trace_out)
}

/// Dominant eigenpair data of a rank-2 state.
///
/// `v1` carries the larger eigenvalue `p >= 1/2`; together with `v2` it
/// spans the support and doubles as the Bloch frame with `v1` at +z.
#[derive(Debug, Clone)]
pub struct Rank2Eigenbasis {
    p: f64,
    v1: PureState,
    v2: PureState,
}

impl Rank2Eigenbasis {
    /// Assemble from parts, enforcing orthonormality and `p >= 1 - p`.
    pub fn new(p: f64, v1: PureState, v2: PureState) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange { value: p });
        }
        if p < 0.5 {
            return Err(Error::OutOfRange { value: p });
        }
        if v1.dims() != v2.dims() {
            return Err(Error::BadDims("eigenvectors differ in dims".into()));
        }
        let overlap = v1.inner(&v2).norm();
        if overlap > 1e-9 {
            return Err(Error::NotNormalized { norm: overlap });
        }
        Ok(Self { p, v1, v2 })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn v1(&self) -> &PureState {
        &self.v1
    }

    pub fn v2(&self) -> &PureState {
        &self.v2
    }

    pub fn dims(&self) -> BipartiteDims {
        self.v1.dims()
    }

    /// The state this basis was extracted from, `p|v1><v1| + (1-p)|v2><v2|`.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_rank2_mixture(self.p, &self.v1, &self.v2)
            .expect("basis invariants guarantee a valid mixture")
    }
}

/// Extract the two dominant eigenpairs of `rho`, rejecting states whose
/// third eigenvalue reaches `rank_tol`.
///
/// Eigenvectors are selected by descending eigenvalue with ties broken by
/// the eigensolver's deterministic column order, so a pure input gets a
/// deterministic null-space completion for `v2`.
pub fn rank2_eigenbasis(rho: &DensityMatrix, rank_tol: f64) -> Result<Rank2Eigenbasis> {
    let eig = hermitian_eig(rho.matrix())?;
    let n = rho.dims().total();
    // Descending by eigenvalue, ascending by original column on ties.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .unwrap()
            .then(i.cmp(&j))
    });
    for &k in order.iter().skip(2) {
        let lambda = eig.eigenvalues[k];
        if lambda >= rank_tol {
            return Err(Error::RankExceeded {
                eigenvalue: lambda,
                tol: rank_tol,
            });
        }
    }
    let l1 = eig.eigenvalues[order[0]].max(0.0);
    let l2 = eig.eigenvalues[order[1]].max(0.0);
    let p = if l1 + l2 > 0.0 { l1 / (l1 + l2) } else { 1.0 };
    let v1 = PureState::from_unnormalized(eig.eigenvector(order[0]), rho.dims())?;
    let v2 = PureState::from_unnormalized(eig.eigenvector(order[1]), rho.dims())?;
    Rank2Eigenbasis::new(p.clamp(0.5, 1.0), v1, v2)
}

/// Point in (or on) the Bloch ball of a rank-2 state space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    fn check_in_ball(&self) -> Result<()> {
        let norm_sq = self.norm_sq();
        if norm_sq > 1.0 + BALL_TOL {
            return Err(Error::OutsideBall { norm_sq });
        }
        Ok(())
    }
}

/// 2x2 operator `omega = (I + r . sigma)/2` expressed in the `{v1, v2}` frame.
fn omega_from_bloch(r: &BlochVector) -> [[Complex64; 2]; 2] {
    let [x, y, z] = r.0;
    [
        [
            Complex64::new((1.0 + z) / 2.0, 0.0),
            Complex64::new(x / 2.0, -y / 2.0),
        ],
        [
            Complex64::new(x / 2.0, y / 2.0),
            Complex64::new((1.0 - z) / 2.0, 0.0),
        ],
    ]
}

/// Density operator at Bloch point `r` of the ball spanned by the basis.
///
/// Pole convention: `r = (0, 0, 1)` maps to `|v1><v1|`.
pub fn bloch_to_density(r: &BlochVector, basis: &Rank2Eigenbasis) -> Result<DensityMatrix> {
    r.check_in_ball()?;
    let omega = omega_from_bloch(r);
    let dims = basis.dims();
    let n = dims.total();
    let vs = [basis.v1().amplitudes(), basis.v2().amplitudes()];
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, vi) in vs.iter().enumerate() {
        for (j, vj) in vs.iter().enumerate() {
            let w = omega[i][j];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            for a in 0..n {
                for b in 0..n {
                    m[(a, b)] += w * vi[a] * vj[b].conj();
                }
            }
        }
    }
    // Mixing orthonormal projectors with the PSD omega keeps every invariant.
    Ok(DensityMatrix { matrix: m.symmetrize(), dims })
}

/// Pure state at a point on the sphere surface: `c1 v1 + c2 v2` with
/// `c1 = sqrt((1 + z)/2)` real and `c2` carrying the azimuthal phase.
pub fn bloch_to_pure(r: &BlochVector, basis: &Rank2Eigenbasis) -> Result<PureState> {
    let norm_sq = r.norm_sq();
    if (norm_sq - 1.0).abs() > BALL_TOL {
        return Err(Error::OutsideBall { norm_sq });
    }
    let [x, y, z] = r.0;
    let c1 = ((1.0 + z).max(0.0) / 2.0).sqrt();
    let c2 = if c1 > 1e-12 {
        Complex64::new(x, y) / (2.0 * c1)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let v1 = basis.v1().amplitudes();
    let v2 = basis.v2().amplitudes();
    let amps: Vec<Complex64> = v1
        .iter()
        .zip(v2.iter())
        .map(|(a, b)| a * c1 + b * c2)
        .collect();
    PureState::from_unnormalized(amps, basis.dims())
}

/// Bloch coordinates of a state supported on `span{v1, v2}`.
pub fn density_to_bloch(rho: &DensityMatrix, basis: &Rank2Eigenbasis) -> Result<BlochVector> {
    let m = rho.matrix();
    let v1 = basis.v1().amplitudes();
    let v2 = basis.v2().amplitudes();
    let omega = [
        [m.sandwich(v1, v1), m.sandwich(v1, v2)],
        [m.sandwich(v2, v1), m.sandwich(v2, v2)],
    ];
    // Support check: the component of rho on the span must be all of rho.
    let r = BlochVector([
        (omega[0][1] + omega[1][0]).re,
        (Complex64::i() * (omega[0][1] - omega[1][0])).re,
        (omega[0][0] - omega[1][1]).re,
    ]);
    let span_state = bloch_reconstruct(&omega, basis);
    let residual = rho.matrix().max_abs_diff(&span_state);
    if residual > SUPPORT_TOL {
        return Err(Error::OutsideSupport { residual });
    }
    Ok(r)
}

fn bloch_reconstruct(omega: &[[Complex64; 2]; 2], basis: &Rank2Eigenbasis) -> ComplexMatrix {
    let dims = basis.dims();
    let n = dims.total();
    let vs = [basis.v1().amplitudes(), basis.v2().amplitudes()];
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, vi) in vs.iter().enumerate() {
        for (j, vj) in vs.iter().enumerate() {
            let w = omega[i][j];
            for a in 0..n {
                for b in 0..n {
                    m[(a, b)] += w * vi[a] * vj[b].conj();
                }
            }
        }
    }
    m
}

/// One standard complex Gaussian draw (real part first, then imaginary).
fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state: normalized vector of i.i.d. complex Gaussians.
pub fn random_pure(dims: BipartiteDims, rng: &mut ChaCha8Rng) -> PureState {
    loop {
        let amps: Vec<Complex64> = (0..dims.total()).map(|_| complex_normal(rng)).collect();
        if let Ok(psi) = PureState::from_unnormalized(amps, dims) {
            return psi;
        }
    }
}

/// Haar-random pure state from a bare seed.
pub fn random_pure_seeded(dims: BipartiteDims, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_pure(dims, &mut rng)
}

/// Random rank-2 state: two Haar-random vectors orthonormalized by
/// Gram-Schmidt, mixed with a weight `p` drawn uniformly from [0, 1].
///
/// Stream ordering is fixed (first vector's amplitudes, second vector's
/// amplitudes, then `p`), so output is reproducible bit for bit.
pub fn random_rank2_with_rng(dims: BipartiteDims, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let v1 = random_pure(dims, rng);
    let v2 = loop {
        let raw: Vec<Complex64> = (0..dims.total()).map(|_| complex_normal(rng)).collect();
        let overlap: Complex64 = v1
            .amplitudes()
            .iter()
            .zip(raw.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let ortho: Vec<Complex64> = raw
            .iter()
            .zip(v1.amplitudes().iter())
            .map(|(b, a)| b - overlap * a)
            .collect();
        let norm = ortho.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            break PureState::from_unnormalized(ortho, dims).expect("norm checked above");
        }
    };
    let p: f64 = rng.gen();
    DensityMatrix::from_rank2_mixture(p, &v1, &v2).expect("p sampled in range")
}

/// Random rank-2 state on ChaCha stream `stream` of the given seed.
///
/// Distinct streams are statistically independent, which lets batch
/// generation index states without coupling their draws.
pub fn random_rank2_stream(dims: BipartiteDims, seed: u64, stream: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    random_rank2_with_rng(dims, &mut rng)
}

/// Random rank-2 state, deterministic in the seed (stream 0).
pub fn random_rank2(dims: BipartiteDims, seed: u64) -> DensityMatrix {
    random_rank2_stream(dims, seed, 0)
}

/// Spectral truncation to the top two eigenvectors, renormalized.
///
/// This changes the physics of higher-rank states; it exists so a caller
/// can opt in explicitly instead of the library truncating silently.
pub fn project_rank2(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let eig = hermitian_eig(rho.matrix())?;
    let n = rho.dims().total();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .unwrap()
            .then(i.cmp(&j))
    });
    let l1 = eig.eigenvalues[order[0]].max(0.0);
    let l2 = eig.eigenvalues[order[1]].max(0.0);
    let p = if l1 + l2 > 0.0 { l1 / (l1 + l2) } else { 1.0 };
    let v1 = PureState::from_unnormalized(eig.eigenvector(order[0]), rho.dims())?;
    let v2 = PureState::from_unnormalized(eig.eigenvector(order[1]), rho.dims())?;
    DensityMatrix::from_rank2_mixture(p, &v1, &v2)
}

/// `1/sqrt(2)` as a complex amplitude.
pub(crate) fn inv_sqrt2() -> Complex64 {
    Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

/// Bell states on 2x2, used across the test suites.
pub fn bell_state(which: Bell) -> PureState {
    let dims = BipartiteDims::new(2, 2).unwrap();
    let s = inv_sqrt2();
    let zero = Complex64::new(0.0, 0.0);
    let amps = match which {
        Bell::PhiPlus => vec![s, zero, zero, s],
        Bell::PhiMinus => vec![s, zero, zero, -s],
        Bell::PsiPlus => vec![zero, s, s, zero],
        Bell::PsiMinus => vec![zero, s, -s, zero],
    };
    PureState::new(amps, dims).unwrap()
}

/// The four maximally entangled two-qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}
