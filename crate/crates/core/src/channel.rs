//! Validated states, measurements and the binary channel.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, HermitianOperator};

/// Conditioning threshold for operations that need `ρ^{-1/2}`.
pub const INVERTIBILITY_THRESHOLD: f64 = 1e-8;

/// Unit-trace positive semidefinite Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    operator: HermitianOperator,
}

impl DensityMatrix {
    pub const TRACE_TOLERANCE: f64 = 1e-9;
    pub const POSITIVITY_TOLERANCE: f64 = 1e-10;

    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        validate_density(matrix)
    }

    /// Pure state |ψ><ψ| for a normalized vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        validate_density(ComplexMatrix::projector(psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            operator: HermitianOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// Real diagonal state; must already be a probability vector.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        validate_density(ComplexMatrix::from_real_diagonal(probabilities))
    }

    /// Skips validation; used for mixtures of already-valid states.
    pub(crate) fn from_operator_unchecked(operator: HermitianOperator) -> Self {
        DensityMatrix { operator }
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.operator.matrix()
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eig_hermitian(&self.operator).eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Fails with a conditioning error unless the smallest eigenvalue
    /// exceeds [`INVERTIBILITY_THRESHOLD`].
    pub fn require_invertible(&self, what: &str) -> Result<()> {
        let min_eigenvalue = self.min_eigenvalue();
        if min_eigenvalue > INVERTIBILITY_THRESHOLD {
            Ok(())
        } else {
            Err(Error::Conditioning {
                what: what.to_string(),
                min_eigenvalue,
                threshold: INVERTIBILITY_THRESHOLD,
            })
        }
    }
}

pub fn validate_density(matrix: ComplexMatrix) -> Result<DensityMatrix> {
    let operator = HermitianOperator::new(matrix)?;
    let tr = operator.matrix().trace();
    if (tr - 1.0).norm() > DensityMatrix::TRACE_TOLERANCE {
        return Err(Error::Trace {
            re: tr.re,
            im: tr.im,
        });
    }
    let operator = HermitianOperator::hermitize(operator.matrix());
    let min = eig_hermitian(&operator).eigenvalues[0];
    if min < -DensityMatrix::POSITIVITY_TOLERANCE {
        return Err(Error::NotPositive { eigenvalue: min });
    }
    Ok(DensityMatrix { operator })
}

/// Positive operators summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<HermitianOperator>,
}

impl Povm {
    pub const POSITIVITY_TOLERANCE: f64 = 1e-10;
    pub const COMPLETENESS_TOLERANCE: f64 = 1e-8;

    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        validate_povm(elements)
    }

    /// Rank-one projectors onto the columns of `basis`. Positivity holds by
    /// construction; completeness is still checked, which rejects
    /// non-unitary input.
    pub fn from_orthonormal_basis(basis: &ComplexMatrix) -> Result<Self> {
        let elements = (0..basis.dim())
            .map(|j| HermitianOperator::hermitize(&ComplexMatrix::projector(&basis.column(j))))
            .collect::<Vec<_>>();
        check_completeness(&elements)?;
        Ok(Povm { elements })
    }

    /// The computational-basis projective measurement.
    pub fn computational(dim: usize) -> Self {
        Povm::from_orthonormal_basis(&ComplexMatrix::identity(dim))
            .expect("identity columns are orthonormal")
    }

    /// The single-outcome measurement {1}.
    pub fn trivial(dim: usize) -> Self {
        Povm {
            elements: vec![HermitianOperator::identity(dim)],
        }
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }
}

pub fn validate_povm(elements: Vec<ComplexMatrix>) -> Result<Povm> {
    let Some(first) = elements.first() else {
        return Err(Error::EmptyPovm);
    };
    let dim = first.dim();
    let mut checked = Vec::with_capacity(elements.len());
    for (index, m) in elements.into_iter().enumerate() {
        if m.dim() != dim {
            return Err(
                Error::shape(format!("dimension {dim}"), format!("dimension {}", m.dim()))
                    .in_field(format!("element {index}")),
            );
        }
        let op = HermitianOperator::new(m).map_err(|e| e.in_field(format!("element {index}")))?;
        let op = HermitianOperator::hermitize(op.matrix());
        let min = eig_hermitian(&op).eigenvalues[0];
        if min < -Povm::POSITIVITY_TOLERANCE {
            return Err(Error::PovmElementNegative {
                index,
                eigenvalue: min,
            });
        }
        checked.push(op);
    }
    check_completeness(&checked)?;
    Ok(Povm { elements: checked })
}

fn check_completeness(elements: &[HermitianOperator]) -> Result<()> {
    let dim = elements[0].dim();
    let mut sum = ComplexMatrix::zeros(dim);
    for e in elements {
        sum = &sum + e.matrix();
    }
    let residual = sum.max_abs_diff(&ComplexMatrix::identity(dim));
    if residual > Povm::COMPLETENESS_TOLERANCE {
        return Err(Error::Incomplete { residual });
    }
    Ok(())
}

/// Probability vector over measurement outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub const NEGATIVE_TOLERANCE: f64 = 1e-12;
    pub const SUM_TOLERANCE: f64 = 1e-9;

    /// Entries in `[-1e-12, 0)` are clamped to zero.
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::Distribution {
                reason: "no outcomes".into(),
            });
        }
        if let Some((i, &p)) = probabilities
            .iter()
            .enumerate()
            .find(|(_, &p)| !p.is_finite() || p < -Self::NEGATIVE_TOLERANCE)
        {
            return Err(Error::Distribution {
                reason: format!("entry {i} = {p:e}"),
            });
        }
        let probabilities: Vec<f64> = probabilities.into_iter().map(|p| p.max(0.0)).collect();
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::Distribution {
                reason: format!("sum is {sum:.12}"),
            });
        }
        Ok(OutcomeDistribution { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// Born-rule probabilities tr(ρ E_b).
pub fn outcome_distribution(rho: &DensityMatrix, povm: &Povm) -> Result<OutcomeDistribution> {
    rho.matrix().check_same_dim(povm.elements()[0].matrix())?;
    let probabilities = povm
        .elements()
        .iter()
        .enumerate()
        .map(|(index, e)| {
            let z = rho.matrix().trace_product(e.matrix());
            if z.im.abs() > 1e-9 {
                Err(Error::Singularity {
                    index,
                    reason: format!("tr(rho E) has imaginary part {:e}", z.im),
                })
            } else {
                Ok(z.re.max(0.0))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    OutcomeDistribution::new(probabilities)
}

/// Two signal states with prior `t` on `rho1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryChannel {
    rho0: DensityMatrix,
    rho1: DensityMatrix,
    t: f64,
}

impl BinaryChannel {
    pub const DEFAULT_PRIOR: f64 = 0.5;

    pub fn new(rho0: DensityMatrix, rho1: DensityMatrix, t: f64) -> Result<Self> {
        if rho0.dim() != rho1.dim() {
            return Err(Error::shape(
                format!("rho1 of dimension {}", rho0.dim()),
                format!("dimension {}", rho1.dim()),
            ));
        }
        check_prior(t)?;
        Ok(BinaryChannel { rho0, rho1, t })
    }

    pub fn rho0(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn rho1(&self) -> &DensityMatrix {
        &self.rho1
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.rho0.dim()
    }

    /// Same states, different prior.
    pub fn with_prior(&self, t: f64) -> Result<Self> {
        check_prior(t)?;
        Ok(BinaryChannel { t, ..self.clone() })
    }

    /// Δ = ρ1 − ρ0.
    pub fn delta(&self) -> HermitianOperator {
        self.rho1.operator().sub(self.rho0.operator())
    }

    /// (1 − t) ρ0 + t ρ1.
    pub fn mixture(&self) -> DensityMatrix {
        let t = self.t;
        DensityMatrix::from_operator_unchecked(
            self.rho0
                .operator()
                .scale(1.0 - t)
                .add(&self.rho1.operator().scale(t)),
        )
    }

    /// Max entry of |[ρ0, ρ1]|.
    pub fn commutator_norm(&self) -> f64 {
        self.rho0.matrix().commutator_norm(self.rho1.matrix())
    }
}

fn check_prior(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Range {
            field: "t".into(),
            value: t,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}
