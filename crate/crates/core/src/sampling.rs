//! Seeded random states and measurements.
//!
//! Every sampler takes its seed explicitly; the same `(dim, seed)` always
//! produces the same value.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::{BinaryChannel, DensityMatrix, Povm};
use crate::error::Result;
use crate::linalg::{ComplexMatrix, HermitianOperator};

/// dim × dim matrix of independent standard complex Gaussians.
pub fn ginibre(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let entries = (0..dim * dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re * scale, im * scale)
        })
        .collect();
    ComplexMatrix::from_entries(dim, entries).expect("dim >= 1")
}

/// ρ = G G† / tr(G G†).
pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    let g = ginibre(dim, seed);
    let gg = &g * &g.adjoint();
    let norm = gg.trace().re;
    DensityMatrix::from_operator_unchecked(HermitianOperator::hermitize(&gg.scale(1.0 / norm)))
}

/// Unitary from Gram-Schmidt on a Ginibre matrix (Haar up to column phases).
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    orthonormalize(&ginibre(dim, seed))
}

/// Rank-one projectors onto the columns of a random unitary.
pub fn random_basis_povm(dim: usize, seed: u64) -> Povm {
    Povm::from_orthonormal_basis(&random_unitary(dim, seed))
        .expect("Gram-Schmidt output is orthonormal")
}

/// Channel with `rho0 = random_density(dim, seed)` and
/// `rho1 = random_density(dim, seed + 1)`.
pub fn random_channel(dim: usize, seed: u64, t: f64) -> Result<BinaryChannel> {
    BinaryChannel::new(
        random_density(dim, seed),
        random_density(dim, seed.wrapping_add(1)),
        t,
    )
}

/// Modified Gram-Schmidt with one re-orthogonalization pass, column-wise.
fn orthonormalize(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();
    for j in 0..n {
        let (done, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        for _ in 0..2 {
            for prev in done.iter() {
                let proj: Complex64 = prev.iter().zip(col.iter()).map(|(p, c)| p.conj() * c).sum();
                for (c, p) in col.iter_mut().zip(prev) {
                    *c -= proj * p;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut out = ComplexMatrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            out[(i, j)] = z;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_is_deterministic() {
        assert_eq!(random_density(2, 42), random_density(2, 42));
        assert_ne!(random_density(2, 42), random_density(2, 43));
    }

    #[test]
    fn density_is_full_rank_and_normalized() {
        let rho = random_density(3, 1);
        let ev = rho.eigenvalues();
        assert!(ev.iter().all(|&x| x > 0.0));
        assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn one_dimensional_density() {
        let rho = random_density(1, 5);
        assert!((rho.matrix()[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn basis_povm_is_complete() {
        let povm = random_basis_povm(2, 3);
        assert_eq!(povm.len(), 2);
        let sum = povm.elements()[0].add(&povm.elements()[1]);
        assert!(sum.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-9);
        assert_eq!(random_basis_povm(4, 8), random_basis_povm(4, 8));
        let single = random_basis_povm(1, 9);
        assert!(
            single.elements()[0]
                .matrix()
                .max_abs_diff(&ComplexMatrix::identity(1))
                < 1e-15
        );
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(5, 17);
        let uu = &u.adjoint() * &u;
        assert!(uu.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-13);
    }

    #[test]
    fn mean_density_is_near_maximally_mixed() {
        let mut acc = ComplexMatrix::zeros(2);
        for seed in 0..1000 {
            acc = &acc + random_density(2, seed).matrix();
        }
        let mean = acc.scale(1.0 / 1000.0);
        assert!(mean.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 0.05);
    }
}
