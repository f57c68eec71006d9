//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Jacobi is slow asymptotically but dimensions here are small, and it
//! produces eigenvectors that are orthonormal to working precision, which
//! the measurement constructions downstream rely on.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, HermitianOperator};

const MAX_SWEEPS: usize = 100;
/// First eigenvector component above this modulus is made real positive.
const PHASE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the unit eigenvector for `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j)
    }

    /// V diag(values) V†.
    pub fn compose(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &lambda) in values.iter().enumerate() {
                    acc += v[(i, k)] * v[(j, k)].conj() * lambda;
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// V† a V: `a` expressed in the eigenbasis.
    pub fn to_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.eigenvectors;
        &(&v.adjoint() * a) * v
    }

    /// V a V†: inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.eigenvectors;
        &(v * a) * &v.adjoint()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

pub fn eig_hermitian(h: &HermitianOperator) -> EigenDecomposition {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let off = off_diagonal_norm(&a);
            if off <= f64::EPSILON * 1e-2 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut columns: Vec<Vec<Complex64>> = (0..n).map(|j| fix_phase(v.column(j))).collect();
    // Exact eigenvalue ties are ordered by the position of the first
    // significant component of the (phase-fixed) eigenvector.
    order.sort_by(|&x, &y| {
        diag[x]
            .total_cmp(&diag[y])
            .then_with(|| leading_index(&columns[x]).cmp(&leading_index(&columns[y])))
    });

    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (j, &k) in order.iter().enumerate() {
        let col = std::mem::take(&mut columns[k]);
        for (i, z) in col.into_iter().enumerate() {
            eigenvectors[(i, j)] = z;
        }
    }
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation zeroing a[p][q] (and a[q][p]).
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Phase-strip apq, then a real symmetric rotation.
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let g00 = Complex64::new(c, 0.0);
    let g01 = Complex64::new(s, 0.0);
    let g10 = -phase.conj() * s;
    let g11 = phase.conj() * c;

    let n = a.dim();
    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g00 + akq * g10;
        a[(k, q)] = akp * g01 + akq * g11;
    }
    // A <- G† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
        a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g00 + vkq * g10;
        v[(k, q)] = vkp * g01 + vkq * g11;
    }
}

fn leading_index(col: &[Complex64]) -> usize {
    col.iter()
        .position(|z| z.norm() > PHASE_THRESHOLD)
        .unwrap_or(col.len())
}

fn fix_phase(mut col: Vec<Complex64>) -> Vec<Complex64> {
    let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in col.iter_mut() {
            *z /= norm;
        }
    }
    if let Some(lead) = col.iter().find(|z| z.norm() > PHASE_THRESHOLD).copied() {
        let rot = lead.conj() / lead.norm();
        for z in col.iter_mut() {
            *z *= rot;
        }
    }
    col
}
