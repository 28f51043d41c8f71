//! Two-qubit concurrence, tangle, and exact entanglement of formation.
//!
//! This is the special case the rank-2 closed form must reduce to, so it
//! doubles as an independent cross-check for the rest of the crate.

use crate::error::{Error, Result};
use crate::inverter::state_invert;
use crate::linalg::{hermitian_eig, psd_sqrt};
use crate::states::DensityMatrix;

/// The four spin-flip spectrum values of a two-qubit state, nonincreasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceSpectrum {
    pub lambdas: [f64; 4],
}

fn require_2x2(rho: &DensityMatrix) -> Result<()> {
    let dims = rho.dims();
    if dims.dim_a() != 2 || dims.dim_b() != 2 {
        return Err(Error::BadDims(format!(
            "concurrence requires a 2x2 system, got {}x{}",
            dims.dim_a(),
            dims.dim_b()
        )));
    }
    Ok(())
}

/// Square roots of the spectrum of `rho rho~`, nonincreasing.
///
/// Evaluated through the Hermitian PSD matrix `sqrt(rho) rho~ sqrt(rho)`,
/// which has the same spectrum and avoids a non-normal eigenproblem.
pub fn concurrence_spectrum(rho: &DensityMatrix) -> Result<ConcurrenceSpectrum> {
    require_2x2(rho)?;
    let flipped = state_invert(rho.matrix(), rho.dims())?;
    let root = psd_sqrt(rho.matrix())?;
    let sandwich = &(&root * &flipped) * &root;
    let eig = hermitian_eig(&sandwich.symmetrize())?;
    let mut lambdas = [0.0; 4];
    for (k, &mu) in eig.eigenvalues.iter().rev().enumerate() {
        // Rounding can push tiny eigenvalues below zero.
        lambdas[k] = mu.max(0.0).sqrt();
    }
    Ok(ConcurrenceSpectrum { lambdas })
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)`, clamped to [0, 1].
pub fn concurrence_2q(rho: &DensityMatrix) -> Result<f64> {
    let s = concurrence_spectrum(rho)?;
    let c = s.lambdas[0] - s.lambdas[1] - s.lambdas[2] - s.lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Two-qubit tangle, the square of the concurrence.
pub fn tangle_2q(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence_2q(rho)?;
    Ok(c * c)
}

const RANGE_TOL: f64 = 1e-9;

fn clamp_unit_interval(x: f64) -> Result<f64> {
    if !x.is_finite() || x < -RANGE_TOL || x > 1.0 + RANGE_TOL {
        return Err(Error::OutOfRange { value: x });
    }
    Ok(x.clamp(0.0, 1.0))
}

/// Binary entropy in bits, with `H(0) = H(1) = 0` by continuity.
pub fn binary_entropy(x: f64) -> Result<f64> {
    let x = clamp_unit_interval(x)?;
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Pure-state entanglement of formation as a function of the tangle:
/// `E(tau) = H(1/2 + sqrt(1 - tau)/2)`. Monotone increasing with
/// `E(0) = 0` and `E(1) = 1`.
pub fn eof_from_tangle(tau: f64) -> Result<f64> {
    let tau = clamp_unit_interval(tau)?;
    binary_entropy(0.5 + 0.5 * (1.0 - tau).sqrt())
}

/// Exact two-qubit entanglement of formation, `E(C(rho)^2)`.
pub fn eof_exact_2q(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence_2q(rho)?;
    eof_from_tangle(c * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverter::spin_flip_pure_2q;
    use crate::states::{bell_state, random_rank2, BipartiteDims, Bell, PureState};
    use num_complex::Complex64;

    fn bell_mixture(p: f64) -> DensityMatrix {
        DensityMatrix::from_rank2_mixture(
            p,
            &bell_state(Bell::PhiPlus),
            &bell_state(Bell::PhiMinus),
        )
        .unwrap()
    }

    #[test]
    fn singlet_has_unit_concurrence() {
        let rho = DensityMatrix::from_pure(&bell_state(Bell::PsiMinus));
        assert!((concurrence_2q(&rho).unwrap() - 1.0).abs() < 1e-10);
        assert!((tangle_2q(&rho).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn maximally_mixed_is_separable() {
        use crate::linalg::ComplexMatrix;
        let m = ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0));
        let rho = crate::states::validate_density(&m, BipartiteDims::new(2, 2).unwrap()).unwrap();
        assert!(concurrence_2q(&rho).unwrap() < 1e-10);
    }

    #[test]
    fn bell_mixture_concurrence() {
        // Spectrum of rho rho~ for this mixture is {p^2, (1-p)^2, 0, 0},
        // so C = |2p - 1|.
        let rho = bell_mixture(0.8);
        let s = concurrence_spectrum(&rho).unwrap();
        assert!((s.lambdas[0] - 0.8).abs() < 1e-9);
        assert!((s.lambdas[1] - 0.2).abs() < 1e-9);
        assert!(s.lambdas[2].abs() < 1e-9 && s.lambdas[3].abs() < 1e-9);
        assert!((concurrence_2q(&rho).unwrap() - 0.6).abs() < 1e-9);
        assert!((tangle_2q(&rho).unwrap() - 0.36).abs() < 1e-9);
    }

    #[test]
    fn separable_pure_state() {
        let psi = PureState::basis_state(BipartiteDims::new(2, 2).unwrap(), 0, 1);
        let rho = DensityMatrix::from_pure(&psi);
        assert!(tangle_2q(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn pure_state_concurrence_matches_spin_flip_overlap() {
        for seed in 0..100 {
            let psi = crate::states::random_pure_seeded(BipartiteDims::new(2, 2).unwrap(), seed);
            let flipped = spin_flip_pure_2q(&psi).unwrap();
            let direct = psi.inner(&flipped).norm();
            let rho = DensityMatrix::from_pure(&psi);
            assert!((concurrence_2q(&rho).unwrap() - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn binary_entropy_values() {
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // -0.11 log2(0.11) - 0.89 log2(0.89), evaluated independently.
        assert!((binary_entropy(0.11).unwrap() - 0.499915).abs() < 1e-5);
        assert!(matches!(binary_entropy(1.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(binary_entropy(-0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn eof_curve_endpoints_and_midpoint() {
        assert_eq!(eof_from_tangle(0.0).unwrap(), 0.0);
        assert!((eof_from_tangle(1.0).unwrap() - 1.0).abs() < 1e-15);
        // E(0.36) = H(0.9).
        let expect = binary_entropy(0.9).unwrap();
        assert!((eof_from_tangle(0.36).unwrap() - expect).abs() < 1e-15);
        assert!((expect - 0.46900).abs() < 1e-5);
        // Monotone increasing on a grid.
        let mut prev = 0.0;
        for k in 1..=100 {
            let v = eof_from_tangle(k as f64 / 100.0).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn eof_exact_reference_values() {
        let singlet = DensityMatrix::from_pure(&bell_state(Bell::PsiMinus));
        assert!((eof_exact_2q(&singlet).unwrap() - 1.0).abs() < 1e-9);
        let separable = DensityMatrix::from_pure(&PureState::basis_state(
            BipartiteDims::new(2, 2).unwrap(),
            1,
            0,
        ));
        assert!(eof_exact_2q(&separable).unwrap() < 1e-9);
        assert!((eof_exact_2q(&bell_mixture(0.8)).unwrap() - 0.46900).abs() < 1e-5);
    }

    #[test]
    fn local_unitary_invariance() {
        use crate::linalg::{kron, ComplexMatrix};
        use crate::states::validate_density;
        let dims = BipartiteDims::new(2, 2).unwrap();
        // Deterministic non-trivial local unitaries.
        let u = |theta: f64, phi: f64| {
            let (c, s) = (theta.cos(), theta.sin());
            ComplexMatrix::from_vec(
                2,
                2,
                vec![
                    Complex64::new(c, 0.0),
                    -Complex64::from_polar(s, phi),
                    Complex64::from_polar(s, -phi),
                    Complex64::new(c, 0.0),
                ],
            )
        };
        for seed in 0..20 {
            let rho = random_rank2(dims, seed);
            let c0 = concurrence_2q(&rho).unwrap();
            let local = kron(&u(0.3 + seed as f64 * 0.1, 0.7), &u(1.1, -0.4 + seed as f64 * 0.05));
            let rotated = &(&local * rho.matrix()) * &local.adjoint();
            let rho2 = validate_density(&rotated, dims).unwrap();
            assert!((concurrence_2q(&rho2).unwrap() - c0).abs() < 1e-9);
        }
    }
}
