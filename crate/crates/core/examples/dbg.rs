use tanglekit_core::states::*;
use tanglekit_core::wootters::*;
use tanglekit_core::inverter::*;

fn main() {
    let dims = BipartiteDims::new(2, 2).unwrap();
    for seed in 0..5 {
        let psi = random_pure_seeded(dims, seed);
        let flipped = spin_flip_pure_2q(&psi).unwrap();
        let direct = psi.inner(&flipped).norm();
        let rho = DensityMatrix::from_pure(&psi);
        let s = concurrence_spectrum(&rho).unwrap();
        println!("seed {seed}: direct={direct:.12} lambdas={:?} C={:.12}", s.lambdas, concurrence_2q(&rho).unwrap());
        println!("  tau(pure)={:.12}", pure_tangle(&psi));
    }
}
