//! The universal state inverter and its two-qubit-subspace decomposition.
//!
//! Two algebraically equivalent routes are kept side by side: the
//! trace/marginal formula ([`state_invert`]) and the sum over embedded
//! spin flips on 2x2 subspaces ([`invert_via_subspaces`]). Their equality
//! on random operators is one of the crate's standing cross-checks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{
    partial_trace_op, BipartiteDims, PureState, Rank2Eigenbasis, Subsystem,
};

/// Universal state inverter of an arbitrary operator on `A (x) B`:
///
/// `X~ = tr(X^dag) I - X_A^dag (x) I - I (x) X_B^dag + X^dag`
///
/// where `X_A`, `X_B` are the partial traces of `X`. The trace and adjoint
/// terms keep the map defined for non-Hermitian input.
pub fn state_invert(x: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    let n = dims.total();
    if !x.is_square() || x.rows() != n {
        return Err(Error::BadDims(format!(
            "operator is {}x{}, dims require {}",
            x.rows(),
            x.cols(),
            n
        )));
    }
    let (da, db) = (dims.dim_a(), dims.dim_b());
    let xa_dag = partial_trace_op(x, dims, Subsystem::B).adjoint();
    let xb_dag = partial_trace_op(x, dims, Subsystem::A).adjoint();
    let trace = x.trace().conj();

    let mut out = x.adjoint();
    for i in 0..da {
        for j in 0..db {
            let row = dims.index(i, j);
            out[(row, row)] += trace;
            for ip in 0..da {
                out[(row, dims.index(ip, j))] -= xa_dag[(i, ip)];
            }
            for jp in 0..db {
                out[(row, dims.index(i, jp))] -= xb_dag[(j, jp)];
            }
        }
    }
    Ok(out)
}

/// Two-qubit spin flip of a pure state: `sigma_y (x) sigma_y` applied to the
/// complex conjugate taken in the computational basis.
pub fn spin_flip_pure_2q(psi: &PureState) -> Result<PureState> {
    let dims = psi.dims();
    if dims.dim_a() != 2 || dims.dim_b() != 2 {
        return Err(Error::BadDims(format!(
            "spin flip needs a 2x2 system, got {}x{}",
            dims.dim_a(),
            dims.dim_b()
        )));
    }
    let a = psi.amplitudes();
    let flipped = vec![
        -a[3].conj(),
        a[2].conj(),
        a[1].conj(),
        -a[0].conj(),
    ];
    PureState::new(flipped, dims)
}

/// A pair of levels in each subsystem, selecting one 2x2 subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubspacePair {
    pub a_lo: usize,
    pub a_hi: usize,
    pub b_lo: usize,
    pub b_hi: usize,
}

impl SubspacePair {
    pub fn new(a_lo: usize, a_hi: usize, b_lo: usize, b_hi: usize, dims: BipartiteDims) -> Result<Self> {
        if a_lo >= a_hi || a_hi >= dims.dim_a() || b_lo >= b_hi || b_hi >= dims.dim_b() {
            return Err(Error::BadSubspace(format!(
                "({a_lo},{a_hi},{b_lo},{b_hi}) out of range for {}x{}",
                dims.dim_a(),
                dims.dim_b()
            )));
        }
        Ok(Self { a_lo, a_hi, b_lo, b_hi })
    }

    /// Composite indices of the subspace basis `|a_lo b_lo>, |a_lo b_hi>,
    /// |a_hi b_lo>, |a_hi b_hi>` with the partner/sign table of the
    /// embedded spin flip.
    ///
    /// The embedding maps `|a_lo>` to the flip's `|0>` and `|a_hi>` to its
    /// `|1>` (lexicographic orientation); the final tangle is invariant
    /// under this choice.
    fn flip_table(&self, dims: BipartiteDims) -> [(usize, usize, f64); 4] {
        let ll = dims.index(self.a_lo, self.b_lo);
        let lh = dims.index(self.a_lo, self.b_hi);
        let hl = dims.index(self.a_hi, self.b_lo);
        let hh = dims.index(self.a_hi, self.b_hi);
        // (index, partner under sigma_y (x) sigma_y, sign)
        [
            (ll, hh, -1.0),
            (lh, hl, 1.0),
            (hl, lh, 1.0),
            (hh, ll, -1.0),
        ]
    }
}

/// All subspace pairs in lexicographic order; there are
/// `(d_A (d_A - 1) / 2) (d_B (d_B - 1) / 2)` of them.
pub fn enumerate_subspaces(dims: BipartiteDims) -> Vec<SubspacePair> {
    let mut out = Vec::new();
    for a_lo in 0..dims.dim_a() {
        for a_hi in (a_lo + 1)..dims.dim_a() {
            for b_lo in 0..dims.dim_b() {
                for b_hi in (b_lo + 1)..dims.dim_b() {
                    out.push(SubspacePair { a_lo, a_hi, b_lo, b_hi });
                }
            }
        }
    }
    out
}

/// Apply the antilinear subspace flip `theta_alpha` to a raw amplitude
/// vector: project onto the 2x2 subspace, conjugate in the computational
/// basis, apply the embedded `sigma_y (x) sigma_y`.
pub(crate) fn theta_alpha_vec(
    v: &[Complex64],
    alpha: &SubspacePair,
    dims: BipartiteDims,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dims.total()];
    for (idx, partner, sign) in alpha.flip_table(dims) {
        out[idx] = v[partner].conj() * sign;
    }
    out
}

/// `theta_alpha |phi>`; the output is supported on the subspace and in
/// general subnormalized.
pub fn theta_alpha_apply(
    phi: &PureState,
    alpha: &SubspacePair,
) -> Result<Vec<Complex64>> {
    let dims = phi.dims();
    SubspacePair::new(alpha.a_lo, alpha.a_hi, alpha.b_lo, alpha.b_hi, dims)?;
    Ok(theta_alpha_vec(phi.amplitudes(), alpha, dims))
}

/// Universal state inverter as the sum of subspace flips:
/// `X~ = sum_alpha theta_alpha X theta_alpha`.
///
/// Must agree with [`state_invert`] to machine precision; the two share no
/// arithmetic.
pub fn invert_via_subspaces(x: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    let n = dims.total();
    if !x.is_square() || x.rows() != n {
        return Err(Error::BadDims(format!(
            "operator is {}x{}, dims require {}",
            x.rows(),
            x.cols(),
            n
        )));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for alpha in enumerate_subspaces(dims) {
        let table = alpha.flip_table(dims);
        for &(m, pm, sm) in &table {
            for &(k, pk, sk) in &table {
                out[(m, k)] += x[(pm, pk)].conj() * (sm * sk);
            }
        }
    }
    Ok(out)
}

/// The 2x2 matrix of flip overlaps `zeta_ij = <v_i| theta_alpha |v_j>` for
/// one subspace pair. Symmetric because the flip is a symmetric antilinear
/// operator.
#[derive(Debug, Clone)]
pub struct ZetaMatrix {
    pub entries: [[Complex64; 2]; 2],
    pub alpha: SubspacePair,
}

impl ZetaMatrix {
    pub fn symmetry_residual(&self) -> f64 {
        (self.entries[0][1] - self.entries[1][0]).norm()
    }
}

/// Flip overlap matrices of the eigenbasis, one per subspace pair in
/// lexicographic order.
pub fn zeta_matrices(basis: &Rank2Eigenbasis) -> Vec<ZetaMatrix> {
    let dims = basis.dims();
    let vs = [basis.v1().amplitudes(), basis.v2().amplitudes()];
    enumerate_subspaces(dims)
        .into_iter()
        .map(|alpha| {
            let mut entries = [[Complex64::new(0.0, 0.0); 2]; 2];
            for (j, vj) in vs.iter().enumerate() {
                let flipped = theta_alpha_vec(vj, &alpha, dims);
                for (i, vi) in vs.iter().enumerate() {
                    entries[i][j] = vi
                        .iter()
                        .zip(flipped.iter())
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                }
            }
            ZetaMatrix { entries, alpha }
        })
        .collect()
}

/// Tangle of a pure state, `<psi| rho~ |psi>` with `rho = |psi><psi|`.
pub fn pure_tangle(psi: &PureState) -> f64 {
    let rho = psi.projector();
    let inverted = state_invert(&rho, psi.dims()).expect("projector dims match state dims");
    inverted.sandwich(psi.amplitudes(), psi.amplitudes()).re
}

/// Same quantity through the reduced state: `2 (1 - tr(rho_A^2))`.
///
/// Algebraically identical to [`pure_tangle`] and much cheaper; the
/// equality of the two is a standing test.
pub fn pure_tangle_marginal(psi: &PureState) -> f64 {
    let ra = psi.marginal(Subsystem::A);
    2.0 * (1.0 - (&ra * &ra).trace().re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        bell_state, random_pure_seeded, random_rank2, Bell, DensityMatrix,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dims(a: usize, b: usize) -> BipartiteDims {
        BipartiteDims::new(a, b).unwrap()
    }

    fn random_operator(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        m
    }

    #[test]
    fn inverter_fixes_maximally_mixed() {
        let quarter = ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0));
        let inverted = state_invert(&quarter, dims(2, 2)).unwrap();
        assert!(inverted.max_abs_diff(&quarter) < 1e-14);
    }

    #[test]
    fn inverter_fixes_singlet() {
        let rho = bell_state(Bell::PsiMinus).projector();
        let inverted = state_invert(&rho, dims(2, 2)).unwrap();
        assert!(inverted.max_abs_diff(&rho) < 1e-14);
    }

    #[test]
    fn inverter_annihilates_product_state_overlap() {
        let psi = PureState::basis_state(dims(2, 2), 0, 0);
        let inverted = state_invert(&psi.projector(), dims(2, 2)).unwrap();
        let overlap = inverted.sandwich(psi.amplitudes(), psi.amplitudes());
        assert!(overlap.norm() < 1e-14);
    }

    #[test]
    fn spin_flip_singlet_is_itself_up_to_sign() {
        let psi = bell_state(Bell::PsiMinus);
        let flipped = spin_flip_pure_2q(&psi).unwrap();
        let overlap = psi.inner(&flipped);
        assert!((overlap.norm() - 1.0).abs() < 1e-14);
        // Direct application of sigma_y (x) sigma_y with conjugation
        // sends the singlet to minus itself.
        assert!((overlap + Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn spin_flip_of_basis_state() {
        let psi = PureState::basis_state(dims(2, 2), 0, 0);
        let flipped = spin_flip_pure_2q(&psi).unwrap();
        assert!((flipped.amplitudes()[3] + Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(psi.inner(&flipped).norm() < 1e-15);
    }

    #[test]
    fn spin_flip_concurrence_of_schmidt_pair() {
        // alpha|00> + beta|11> with real coefficients has |<psi|psi~>| = 2 alpha beta.
        let (alpha, beta) = (0.6_f64, 0.8_f64);
        let amps = vec![
            Complex64::new(alpha, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(beta, 0.0),
        ];
        let psi = PureState::new(amps, dims(2, 2)).unwrap();
        let flipped = spin_flip_pure_2q(&psi).unwrap();
        assert!((psi.inner(&flipped).norm() - 2.0 * alpha * beta).abs() < 1e-14);
    }

    #[test]
    fn subspace_counts_match_formula() {
        assert_eq!(enumerate_subspaces(dims(2, 2)).len(), 1);
        assert_eq!(enumerate_subspaces(dims(2, 3)).len(), 3);
        assert_eq!(enumerate_subspaces(dims(3, 3)).len(), 9);
        // Lexicographic, duplicate-free.
        let pairs = enumerate_subspaces(dims(3, 4));
        assert_eq!(pairs.len(), 3 * 6);
        let mut sorted = pairs.clone();
        sorted.sort_by_key(|p| (p.a_lo, p.a_hi, p.b_lo, p.b_hi));
        sorted.dedup();
        assert_eq!(sorted.len(), pairs.len());
        assert_eq!(sorted, pairs);
    }

    #[test]
    fn theta_on_full_space_matches_spin_flip() {
        let psi = bell_state(Bell::PsiMinus);
        let alpha = SubspacePair::new(0, 1, 0, 1, dims(2, 2)).unwrap();
        let themed = theta_alpha_apply(&psi, &alpha).unwrap();
        let flipped = spin_flip_pure_2q(&psi).unwrap();
        for (a, b) in themed.iter().zip(flipped.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn theta_annihilates_states_outside_subspace() {
        let d = dims(2, 3);
        let psi = PureState::basis_state(d, 0, 2);
        let alpha = SubspacePair::new(0, 1, 0, 1, d).unwrap();
        let themed = theta_alpha_apply(&psi, &alpha).unwrap();
        assert!(themed.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn theta_embedded_flip_on_qubit_qutrit() {
        // theta_(0,1,0,2) |00> = -|12> on a 2x3 system.
        let d = dims(2, 3);
        let psi = PureState::basis_state(d, 0, 0);
        let alpha = SubspacePair::new(0, 1, 0, 2, d).unwrap();
        let themed = theta_alpha_apply(&psi, &alpha).unwrap();
        for (k, z) in themed.iter().enumerate() {
            if k == d.index(1, 2) {
                assert!((z + Complex64::new(1.0, 0.0)).norm() < 1e-15);
            } else {
                assert!(z.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn subspace_sum_equals_trace_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for (da, db) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
            let d = dims(da, db);
            for _ in 0..100 {
                let x = random_operator(d.total(), &mut rng);
                let via_trace = state_invert(&x, d).unwrap();
                let via_sum = invert_via_subspaces(&x, d).unwrap();
                let scale = x.frobenius_norm().max(1.0);
                assert!(via_trace.max_abs_diff(&via_sum) <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn inverted_state_is_hermitian_psd() {
        use crate::linalg::hermitian_eig;
        for seed in 0..20 {
            let rho = random_rank2(dims(2, 3), seed);
            let inverted = state_invert(rho.matrix(), rho.dims()).unwrap();
            assert!(inverted.hermiticity_residual() < 1e-12);
            let eig = hermitian_eig(&inverted).unwrap();
            assert!(eig.eigenvalues[0] > -1e-10);
        }
    }

    #[test]
    fn zeta_of_phi_bell_basis_is_diagonal() {
        let basis = crate::states::Rank2Eigenbasis::new(
            0.7,
            bell_state(Bell::PhiPlus),
            bell_state(Bell::PhiMinus),
        )
        .unwrap();
        let zetas = zeta_matrices(&basis);
        assert_eq!(zetas.len(), 1);
        let z = &zetas[0].entries;
        assert!((z[0][0] + Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((z[1][1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(z[0][1].norm() < 1e-14 && z[1][0].norm() < 1e-14);
    }

    #[test]
    fn zeta_of_schmidt_basis_is_antidiagonal() {
        let d = dims(2, 2);
        let basis = crate::states::Rank2Eigenbasis::new(
            0.7,
            PureState::basis_state(d, 0, 0),
            PureState::basis_state(d, 1, 1),
        )
        .unwrap();
        let z = &zeta_matrices(&basis)[0].entries;
        assert!(z[0][0].norm() < 1e-14 && z[1][1].norm() < 1e-14);
        assert!((z[0][1] + Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((z[1][0] + Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn zeta_vanishes_on_shared_a_level() {
        let d = dims(2, 2);
        let basis = crate::states::Rank2Eigenbasis::new(
            0.7,
            PureState::basis_state(d, 0, 0),
            PureState::basis_state(d, 0, 1),
        )
        .unwrap();
        let z = &zeta_matrices(&basis)[0].entries;
        for row in z {
            for e in row {
                assert!(e.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn zeta_is_symmetric_for_random_bases() {
        for seed in 0..30 {
            let rho = random_rank2(dims(3, 3), seed);
            let basis = crate::states::rank2_eigenbasis(&rho, 1e-8).unwrap();
            for z in zeta_matrices(&basis) {
                assert!(z.symmetry_residual() < 1e-10);
            }
        }
    }

    #[test]
    fn pure_tangle_reference_values() {
        assert!((pure_tangle(&bell_state(Bell::PsiMinus)) - 1.0).abs() < 1e-12);
        assert!(pure_tangle(&PureState::basis_state(dims(2, 2), 0, 0)).abs() < 1e-12);

        // Maximally entangled qutrit pair: 2 (1 - 1/3) = 4/3.
        let d = dims(3, 3);
        let mut amps = vec![Complex64::new(0.0, 0.0); 9];
        for i in 0..3 {
            amps[d.index(i, i)] = Complex64::new(1.0 / 3.0_f64.sqrt(), 0.0);
        }
        let psi = PureState::new(amps, d).unwrap();
        assert!((pure_tangle(&psi) - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn pure_tangle_matches_marginal_route() {
        for seed in 0..100 {
            let psi = random_pure_seeded(dims(2, 3), seed);
            assert!((pure_tangle(&psi) - pure_tangle_marginal(&psi)).abs() < 1e-12);
        }
        for seed in 0..50 {
            let psi = random_pure_seeded(dims(3, 3), seed);
            assert!((pure_tangle(&psi) - pure_tangle_marginal(&psi)).abs() < 1e-12);
        }
    }

    #[test]
    fn subspace_sum_reproduces_pure_tangle() {
        // <psi| rho~ |psi> evaluated through the subspace sum agrees with
        // the trace-formula value.
        for seed in 0..30 {
            let psi = random_pure_seeded(dims(2, 3), seed);
            let rho = DensityMatrix::from_pure(&psi);
            let via_sum = invert_via_subspaces(rho.matrix(), rho.dims()).unwrap();
            let tau = via_sum.sandwich(psi.amplitudes(), psi.amplitudes()).re;
            assert!((tau - pure_tangle(&psi)).abs() < 1e-12);
        }
    }
}
