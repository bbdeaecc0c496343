//! Exact density-operator engine for one to three spin-1/2 particles.
//!
//! States are dense 2^n x 2^n complex matrices (n <= 3), so every operation
//! is exact up to floating point and auditable entry by entry. Basis
//! convention: qubit 0 is the most significant bit of the basis index, i.e.
//! `tensor(a, b)` puts `a`'s qubits in front.
//!
//! Randomness never lives in this module. Sampling operations take a single
//! uniform deviate in [0, 1) supplied by the caller, which keeps every code
//! path replayable from recorded deviates.

use num_complex::Complex64;
use thiserror::Error;

use crate::cmatrix::{c, cr, CMatrix};
use crate::vec3::Vec3;

/// Hermiticity tolerance on max |A - A^dagger| entry.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Unit-trace tolerance, |tr(rho) - 1|.
pub const TRACE_TOL: f64 = 1e-12;
/// Positivity floor: smallest eigenvalue may round down to this.
pub const PSD_EIGENVALUE_FLOOR: f64 = -1e-10;
/// How close to unit norm an axis or pure-state Bloch vector must be.
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Branch probabilities below this cannot be renormalized into a state.
pub const PROB_FLOOR: f64 = 1e-14;

const MAX_QUBITS: usize = 3;

#[derive(Debug, Error, PartialEq)]
pub enum QuantumError {
    #[error("axis must have unit norm, got {norm}")]
    InvalidAxis { norm: f64 },
    #[error("Bloch vector norm must be <= 1, got {norm}")]
    BlochTooLong { norm: f64 },
    #[error("pure state requires a unit Bloch vector, got norm {norm}")]
    BlochNotUnit { norm: f64 },
    #[error("singlet fraction must lie in [0, 1], got {value}")]
    InvalidFraction { value: f64 },
    #[error("uniform deviate must lie in [0, 1), got {value}")]
    InvalidUniform { value: f64 },
    #[error("qubit index {qubit} out of range for {n_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("qubit index {qubit} repeated")]
    DuplicateQubit { qubit: usize },
    #[error("operation needs a {expected}-qubit state, got {actual}")]
    WrongQubitCount { expected: usize, actual: usize },
    #[error("product state would have {requested} qubits, limit is {max}")]
    TooManyQubits { requested: usize, max: usize },
    #[error("cannot trace out every qubit")]
    EmptyReduction,
    #[error("matrix dimension {actual} does not match state dimension {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not Hermitian, residual {residual}")]
    NotHermitian { residual: f64 },
    #[error("trace differs from one by {deviation}")]
    NotUnitTrace { deviation: f64 },
    #[error("matrix is not positive semidefinite, smallest eigenvalue {min_eigenvalue}")]
    NotPositive { min_eigenvalue: f64 },
}

/// Unit-norm measurement direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis(Vec3);

impl Axis {
    pub fn new(v: Vec3) -> Result<Self, QuantumError> {
        let norm = v.norm();
        if !v.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(QuantumError::InvalidAxis { norm });
        }
        Ok(Axis(v))
    }

    /// Normalizes an arbitrary direction; errors when it is too short.
    pub fn from_unnormalized(v: Vec3) -> Result<Self, QuantumError> {
        match v.unit() {
            Some(u) if v.is_finite() => Ok(Axis(u)),
            _ => Err(QuantumError::InvalidAxis { norm: v.norm() }),
        }
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }
}

/// Polarization vector with norm <= 1 (1 = pure, < 1 = mixed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(Vec3);

impl BlochVector {
    pub fn new(v: Vec3) -> Result<Self, QuantumError> {
        let norm = v.norm();
        if !v.is_finite() || norm > 1.0 + UNIT_NORM_TOL {
            return Err(QuantumError::BlochTooLong { norm });
        }
        Ok(BlochVector(v))
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }
}

/// Two-qubit Bell basis. The enumeration order is also the cumulative order
/// used when sampling a Bell measurement from a uniform deviate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellOutcome {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] =
        [BellOutcome::PsiMinus, BellOutcome::PsiPlus, BellOutcome::PhiMinus, BellOutcome::PhiPlus];

    /// The entangled-pair outcome the teleportation trigger keeps.
    pub fn is_singlet(self) -> bool {
        self == BellOutcome::PsiMinus
    }

    /// State vector in the product basis |q0 q1>.
    pub fn state_vector(self) -> [Complex64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            BellOutcome::PsiMinus => [cr(0.0), cr(h), cr(-h), cr(0.0)],
            BellOutcome::PsiPlus => [cr(0.0), cr(h), cr(h), cr(0.0)],
            BellOutcome::PhiMinus => [cr(h), cr(0.0), cr(0.0), cr(-h)],
            BellOutcome::PhiPlus => [cr(h), cr(0.0), cr(0.0), cr(h)],
        }
    }
}

/// Entangled-pair source quality: weight `singlet_fraction` on the singlet,
/// the remainder spread evenly over the three triplet Bell states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    singlet_fraction: f64,
}

impl ChannelSpec {
    pub fn new(singlet_fraction: f64) -> Result<Self, QuantumError> {
        if !singlet_fraction.is_finite() || !(0.0..=1.0).contains(&singlet_fraction) {
            return Err(QuantumError::InvalidFraction { value: singlet_fraction });
        }
        Ok(ChannelSpec { singlet_fraction })
    }

    pub fn singlet_fraction(self) -> f64 {
        self.singlet_fraction
    }
}

/// Binary spin outcome along a measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One projective branch: its Born probability and, when the probability is
/// large enough to renormalize, the collapsed state.
#[derive(Debug, Clone)]
pub struct Projection {
    pub probability: f64,
    pub collapsed: Option<DensityOperator>,
}

#[derive(Debug, Clone)]
pub struct SpinMeasurement {
    pub outcome: Sign,
    pub probability: f64,
    pub collapsed: DensityOperator,
}

#[derive(Debug, Clone)]
pub struct BellMeasurement {
    pub outcome: BellOutcome,
    pub probability: f64,
    pub collapsed: DensityOperator,
}

/// Result of one post-selected teleportation attempt. `output` is the state
/// of the receiving qubit and is present exactly when the attempt was
/// accepted (singlet outcome at the sender).
#[derive(Debug, Clone)]
pub struct Teleportation {
    pub accepted: bool,
    pub outcome: BellOutcome,
    pub probability: f64,
    pub output: Option<DensityOperator>,
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_fn(2, |r, k| if r != k { cr(1.0) } else { cr(0.0) })
}

pub fn pauli_y() -> CMatrix {
    let mut m = CMatrix::zeros(2);
    m.set(0, 1, c(0.0, -1.0));
    m.set(1, 0, c(0.0, 1.0));
    m
}

pub fn pauli_z() -> CMatrix {
    let mut m = CMatrix::zeros(2);
    m.set(0, 0, cr(1.0));
    m.set(1, 1, cr(-1.0));
    m
}

/// n . sigma for a unit direction n.
pub fn axis_sigma(axis: Axis) -> CMatrix {
    let v = axis.vec();
    pauli_x().scale(v.x).add(&pauli_y().scale(v.y)).add(&pauli_z().scale(v.z))
}

/// Projector onto spin `sign` along `axis`: (I + sign * n.sigma) / 2.
pub fn spin_projector(axis: Axis, sign: Sign) -> CMatrix {
    CMatrix::identity(2).add(&axis_sigma(axis).scale(sign.value())).scale(0.5)
}

/// Rotation exp(-i theta n.sigma / 2) about `axis`.
pub fn rotation(axis: Axis, angle_rad: f64) -> CMatrix {
    let (s, co) = (angle_rad / 2.0).sin_cos();
    let mut m = axis_sigma(axis);
    for r in 0..2 {
        for k in 0..2 {
            m.set(r, k, m.get(r, k) * c(0.0, -s));
        }
    }
    m.add(&CMatrix::identity(2).scale(co))
}

fn bit_of(index: usize, qubit: usize, n_qubits: usize) -> usize {
    (index >> (n_qubits - 1 - qubit)) & 1
}

/// Lifts a one-qubit operator onto qubit `k` of an n-qubit space.
pub fn op_on_qubit(n_qubits: usize, k: usize, m2: &CMatrix) -> CMatrix {
    assert_eq!(m2.dim(), 2);
    let dim = 1 << n_qubits;
    let mask = 1usize << (n_qubits - 1 - k);
    CMatrix::from_fn(dim, |r, col| {
        if (r & !mask) == (col & !mask) {
            m2.get(bit_of(r, k, n_qubits), bit_of(col, k, n_qubits))
        } else {
            cr(0.0)
        }
    })
}

/// Lifts a two-qubit operator onto the ordered qubit pair (i, j) of an
/// n-qubit space; qubit i supplies the operator's most significant bit.
pub fn op_on_pair(n_qubits: usize, pair: (usize, usize), m4: &CMatrix) -> CMatrix {
    assert_eq!(m4.dim(), 4);
    let (i, j) = pair;
    let dim = 1 << n_qubits;
    let mask = (1usize << (n_qubits - 1 - i)) | (1usize << (n_qubits - 1 - j));
    let sub = |x: usize| (bit_of(x, i, n_qubits) << 1) | bit_of(x, j, n_qubits);
    CMatrix::from_fn(dim, |r, col| {
        if (r & !mask) == (col & !mask) {
            m4.get(sub(r), sub(col))
        } else {
            cr(0.0)
        }
    })
}

/// Density operator for 1..=3 spin-1/2 particles.
///
/// Invariants (checked by [`DensityOperator::validate`], preserved by every
/// operation): Hermitian within [`HERMITIAN_TOL`], unit trace within
/// [`TRACE_TOL`], smallest eigenvalue >= [`PSD_EIGENVALUE_FLOOR`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n_qubits: usize,
    mat: CMatrix,
}

impl DensityOperator {
    /// Wraps an explicit matrix after checking dimensions and all state
    /// invariants.
    pub fn from_matrix(n_qubits: usize, mat: CMatrix) -> Result<Self, QuantumError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QuantumError::TooManyQubits { requested: n_qubits, max: MAX_QUBITS });
        }
        if mat.dim() != 1 << n_qubits {
            return Err(QuantumError::DimensionMismatch {
                expected: 1 << n_qubits,
                actual: mat.dim(),
            });
        }
        let state = DensityOperator { n_qubits, mat };
        state.validate()?;
        Ok(state)
    }

    /// (I + b.sigma) / 2 for any admissible Bloch vector, pure or mixed.
    pub fn from_bloch(b: BlochVector) -> Self {
        let v = b.vec();
        let mat = CMatrix::identity(2)
            .add(&pauli_x().scale(v.x))
            .add(&pauli_y().scale(v.y))
            .add(&pauli_z().scale(v.z))
            .scale(0.5);
        DensityOperator { n_qubits: 1, mat }
    }

    /// Pure one-qubit state; the Bloch vector must sit on the unit sphere.
    pub fn pure(b: BlochVector) -> Result<Self, QuantumError> {
        let norm = b.norm();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(QuantumError::BlochNotUnit { norm });
        }
        Ok(Self::from_bloch(b))
    }

    /// The two-qubit singlet (|01> - |10>) / sqrt(2) as a density operator.
    pub fn singlet() -> Self {
        let v = BellOutcome::PsiMinus.state_vector();
        DensityOperator { n_qubits: 2, mat: CMatrix::outer(&v) }
    }

    /// Werner-form entangled pair: f on the singlet plus (1-f)/3 on each
    /// triplet Bell state, i.e. f*P + (1-f)/3 * (I - P).
    pub fn werner(spec: ChannelSpec) -> Self {
        let f = spec.singlet_fraction();
        let p = CMatrix::outer(&BellOutcome::PsiMinus.state_vector());
        let rest = CMatrix::identity(4).sub(&p);
        DensityOperator { n_qubits: 2, mat: p.scale(f).add(&rest.scale((1.0 - f) / 3.0)) }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Kronecker product; `self`'s qubits become the leading indices.
    pub fn tensor(&self, other: &DensityOperator) -> Result<Self, QuantumError> {
        let n = self.n_qubits + other.n_qubits;
        if n > MAX_QUBITS {
            return Err(QuantumError::TooManyQubits { requested: n, max: MAX_QUBITS });
        }
        Ok(DensityOperator { n_qubits: n, mat: self.mat.kron(&other.mat) })
    }

    fn check_qubit(&self, q: usize) -> Result<(), QuantumError> {
        if q >= self.n_qubits {
            Err(QuantumError::QubitOutOfRange { qubit: q, n_qubits: self.n_qubits })
        } else {
            Ok(())
        }
    }

    /// Traces out the listed qubits, returning the reduced state of the rest.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<Self, QuantumError> {
        let mut seen = [false; MAX_QUBITS];
        for &q in traced {
            self.check_qubit(q)?;
            if seen[q] {
                return Err(QuantumError::DuplicateQubit { qubit: q });
            }
            seen[q] = true;
        }
        let kept: Vec<usize> = (0..self.n_qubits).filter(|q| !seen[*q]).collect();
        if kept.is_empty() {
            return Err(QuantumError::EmptyReduction);
        }
        let n = self.n_qubits;
        let traced: Vec<usize> = (0..n).filter(|q| seen[*q]).collect();
        // Rebuild a full basis index from a kept-subspace index and a
        // traced-subspace index, preserving each qubit's original position.
        let full_index = |kept_idx: usize, traced_idx: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &q) in kept.iter().enumerate() {
                idx |= bit_of(kept_idx, pos, kept.len()) << (n - 1 - q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                idx |= bit_of(traced_idx, pos, traced.len()) << (n - 1 - q);
            }
            idx
        };
        let kdim = 1usize << kept.len();
        let tdim = 1usize << traced.len();
        let mat = CMatrix::from_fn(kdim, |r, col| {
            (0..tdim).map(|t| self.mat.get(full_index(r, t), full_index(col, t))).sum()
        });
        Ok(DensityOperator { n_qubits: kept.len(), mat })
    }

    /// Bloch vector (tr(rho sigma_x), tr(rho sigma_y), tr(rho sigma_z)) of a
    /// one-qubit state.
    pub fn bloch(&self) -> Result<Vec3, QuantumError> {
        if self.n_qubits != 1 {
            return Err(QuantumError::WrongQubitCount { expected: 1, actual: self.n_qubits });
        }
        Ok(Vec3::new(
            self.mat.mul(&pauli_x()).trace().re,
            self.mat.mul(&pauli_y()).trace().re,
            self.mat.mul(&pauli_z()).trace().re,
        ))
    }

    /// Overlap with the pure state at `reference`: (1 + bloch . reference)/2.
    pub fn fidelity_with(&self, reference: BlochVector) -> Result<f64, QuantumError> {
        let norm = reference.norm();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(QuantumError::BlochNotUnit { norm });
        }
        Ok((1.0 + self.bloch()?.dot(reference.vec())) / 2.0)
    }

    /// U rho U^dagger.
    pub fn apply_unitary(&self, u: &CMatrix) -> Result<Self, QuantumError> {
        if u.dim() != self.dim() {
            return Err(QuantumError::DimensionMismatch { expected: self.dim(), actual: u.dim() });
        }
        Ok(DensityOperator { n_qubits: self.n_qubits, mat: u.mul(&self.mat).mul(&u.adjoint()) })
    }

    fn project(&self, projector: &CMatrix) -> Projection {
        let probability = projector.mul(&self.mat).trace().re.clamp(0.0, 1.0);
        let collapsed = if probability > PROB_FLOOR {
            let m = projector.mul(&self.mat).mul(projector).scale(1.0 / probability);
            Some(DensityOperator { n_qubits: self.n_qubits, mat: m })
        } else {
            None
        };
        Projection { probability, collapsed }
    }

    /// Born probability and collapsed state for spin `sign` along `axis` on
    /// one qubit, other qubits untouched.
    pub fn spin_projection(
        &self,
        qubit: usize,
        axis: Axis,
        sign: Sign,
    ) -> Result<Projection, QuantumError> {
        self.check_qubit(qubit)?;
        let p = op_on_qubit(self.n_qubits, qubit, &spin_projector(axis, sign));
        Ok(self.project(&p))
    }

    /// Samples a projective spin measurement from one uniform deviate.
    ///
    /// The outcome is Plus iff `u` < P(Plus), so a zero-probability branch is
    /// never selected: u >= 0 rules out Plus when P(Plus) = 0, and u < 1
    /// rules out Minus when P(Minus) = 0.
    pub fn measure_spin(
        &self,
        qubit: usize,
        axis: Axis,
        u: f64,
    ) -> Result<SpinMeasurement, QuantumError> {
        check_uniform(u)?;
        let plus = self.spin_projection(qubit, axis, Sign::Plus)?;
        let (outcome, branch) = if u < plus.probability {
            (Sign::Plus, plus)
        } else {
            (Sign::Minus, self.spin_projection(qubit, axis, Sign::Minus)?)
        };
        let collapsed = branch.collapsed.expect("selected branch has positive probability");
        Ok(SpinMeasurement { outcome, probability: branch.probability, collapsed })
    }

    /// Two-point spin correlation tr(rho (a.sigma x b.sigma)) of a two-qubit
    /// state; -a.b for the singlet.
    pub fn correlation(&self, a: Axis, b: Axis) -> Result<f64, QuantumError> {
        if self.n_qubits != 2 {
            return Err(QuantumError::WrongQubitCount { expected: 2, actual: self.n_qubits });
        }
        let obs = axis_sigma(a).kron(&axis_sigma(b));
        Ok(self.mat.mul(&obs).trace().re)
    }

    /// Born probability and collapsed state for projecting the ordered qubit
    /// pair onto one Bell state.
    pub fn bell_projection(
        &self,
        pair: (usize, usize),
        outcome: BellOutcome,
    ) -> Result<Projection, QuantumError> {
        self.check_bell_pair(pair)?;
        let proj4 = CMatrix::outer(&outcome.state_vector());
        let p = op_on_pair(self.n_qubits, pair, &proj4);
        Ok(self.project(&p))
    }

    fn check_bell_pair(&self, pair: (usize, usize)) -> Result<(), QuantumError> {
        self.check_qubit(pair.0)?;
        self.check_qubit(pair.1)?;
        if pair.0 == pair.1 {
            return Err(QuantumError::DuplicateQubit { qubit: pair.0 });
        }
        Ok(())
    }

    /// Samples a Bell-basis measurement of the ordered qubit pair from one
    /// uniform deviate, walking outcomes in [`BellOutcome::ALL`] order.
    pub fn bell_measure(
        &self,
        pair: (usize, usize),
        u: f64,
    ) -> Result<BellMeasurement, QuantumError> {
        check_uniform(u)?;
        self.check_bell_pair(pair)?;
        let branches: Vec<Projection> = BellOutcome::ALL
            .iter()
            .map(|&o| self.bell_projection(pair, o))
            .collect::<Result<_, _>>()?;
        let mut cumulative = 0.0;
        let mut chosen = None;
        for (k, b) in branches.iter().enumerate() {
            cumulative += b.probability;
            if u < cumulative {
                chosen = Some(k);
                break;
            }
        }
        // Probabilities sum to 1 up to rounding; if u slipped past the last
        // cumulative edge, fall back to the last branch that can collapse.
        let k = chosen.unwrap_or_else(|| {
            branches
                .iter()
                .rposition(|b| b.collapsed.is_some())
                .expect("a trace-one state has a positive-probability Bell branch")
        });
        let branch = &branches[k];
        let collapsed =
            branch.collapsed.clone().expect("selected branch has positive probability");
        Ok(BellMeasurement {
            outcome: BellOutcome::ALL[k],
            probability: branch.probability,
            collapsed,
        })
    }

    /// Invariant check: Hermitian, unit trace, positive semidefinite.
    pub fn validate(&self) -> Result<(), QuantumError> {
        let residual = self.mat.hermitian_residual();
        if residual > HERMITIAN_TOL {
            return Err(QuantumError::NotHermitian { residual });
        }
        let deviation = (self.mat.trace() - cr(1.0)).norm();
        if deviation > TRACE_TOL {
            return Err(QuantumError::NotUnitTrace { deviation });
        }
        let min_eigenvalue = self.min_eigenvalue();
        if min_eigenvalue < PSD_EIGENVALUE_FLOOR {
            return Err(QuantumError::NotPositive { min_eigenvalue });
        }
        Ok(())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.mat.hermitian_eigenvalues()[0]
    }
}

fn check_uniform(u: f64) -> Result<(), QuantumError> {
    if !u.is_finite() || !(0.0..1.0).contains(&u) {
        return Err(QuantumError::InvalidUniform { value: u });
    }
    Ok(())
}

/// CHSH combination E(a,b) - E(a,b') + E(a',b) + E(a',b') of two-point
/// correlations of a two-qubit state.
pub fn chsh(
    state: &DensityOperator,
    a: Axis,
    a_prime: Axis,
    b: Axis,
    b_prime: Axis,
) -> Result<f64, QuantumError> {
    Ok(state.correlation(a, b)? - state.correlation(a, b_prime)?
        + state.correlation(a_prime, b)?
        + state.correlation(a_prime, b_prime)?)
}

/// Axes (a, a', b, b') for which the singlet saturates the CHSH quantum
/// bound 2*sqrt(2) under [`chsh`]'s sign pattern:
/// a = x, a' = z, b = -(x+z)/sqrt(2), b' = (x-z)/sqrt(2).
pub fn optimal_chsh_axes() -> (Axis, Axis, Axis, Axis) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    (
        Axis::new(Vec3::new(1.0, 0.0, 0.0)).expect("unit"),
        Axis::new(Vec3::new(0.0, 0.0, 1.0)).expect("unit"),
        Axis::new(Vec3::new(-h, 0.0, -h)).expect("unit"),
        Axis::new(Vec3::new(h, 0.0, -h)).expect("unit"),
    )
}

/// One post-selected teleportation attempt.
///
/// Builds input (x) channel with the input as qubit 0 and the channel's
/// receiving qubit as qubit 2, Bell-measures qubits (0, 1) with the supplied
/// deviate, and accepts exactly on the singlet outcome. No conditional
/// correction is applied on acceptance: with a perfect singlet channel the
/// singlet branch already reproduces the input on qubit 2.
pub fn teleport(
    input: BlochVector,
    channel: ChannelSpec,
    u: f64,
) -> Result<Teleportation, QuantumError> {
    let full = DensityOperator::from_bloch(input).tensor(&DensityOperator::werner(channel))?;
    let m = full.bell_measure((0, 1), u)?;
    let accepted = m.outcome.is_singlet();
    let output = if accepted { Some(m.collapsed.partial_trace(&[0, 1])?) } else { None };
    Ok(Teleportation { accepted, outcome: m.outcome, probability: m.probability, output })
}
