//! Dense complex algebra for single- and two-qubit operators.
//!
//! Basis index convention: `i = 2*psi_A + phi_B`, so the two-qubit basis is
//! ordered `|00>, |01>, |10>, |11>`. Single-qubit operators act on `(|0>, |1>)`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{DensityDefect, Error, Result};

pub type ComplexScalar = Complex64;

/// Default absolute tolerance for structural checks.
pub const TOL: f64 = 1e-10;

pub const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
pub const ONE: ComplexScalar = Complex64::new(1.0, 0.0);
pub const I: ComplexScalar = Complex64::new(0.0, 1.0);

/// 2x2 complex matrix, row-major.
pub type Mat2 = [[ComplexScalar; 2]; 2];

pub fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

pub fn mat2(a: [[f64; 2]; 2]) -> Mat2 {
    [
        [c(a[0][0], 0.0), c(a[0][1], 0.0)],
        [c(a[1][0], 0.0), c(a[1][1], 0.0)],
    ]
}

pub mod pauli {
    use super::{mat2, Mat2, I, ZERO};

    pub fn identity() -> Mat2 {
        mat2([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn x() -> Mat2 {
        mat2([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn y() -> Mat2 {
        [[ZERO, -I], [I, ZERO]]
    }

    /// Logical-basis sigma^z with `sigma^z |1> = +|1>`.
    pub fn z() -> Mat2 {
        mat2([[-1.0, 0.0], [0.0, 1.0]])
    }

    /// `|0><0|`
    pub fn proj0() -> Mat2 {
        mat2([[1.0, 0.0], [0.0, 0.0]])
    }

    /// `|1><1|`
    pub fn proj1() -> Mat2 {
        mat2([[0.0, 0.0], [0.0, 1.0]])
    }
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_distance(a: &Mat2, b: &Mat2) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

/// Normalizable pure state of two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    pub amp: [ComplexScalar; 4],
}

impl TwoQubitState {
    pub fn basis(index: usize) -> Self {
        let mut amp = [ZERO; 4];
        amp[index] = ONE;
        Self { amp }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= TOL
    }

    /// `|psi><psi|` as an operator.
    pub fn projector(&self) -> TwoQubitOperator {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.amp[i] * self.amp[j].conj();
            }
        }
        TwoQubitOperator { m }
    }
}

/// Dense 4x4 complex operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitOperator {
    pub m: [[ComplexScalar; 4]; 4],
}

impl TwoQubitOperator {
    pub fn zero() -> Self {
        Self { m: [[ZERO; 4]; 4] }
    }

    pub fn identity() -> Self {
        Self::from_diag([ONE; 4])
    }

    pub fn from_diag(d: [ComplexScalar; 4]) -> Self {
        let mut out = Self::zero();
        for (i, v) in d.into_iter().enumerate() {
            out.m[i][i] = v;
        }
        out
    }

    pub fn from_real_diag(d: [f64; 4]) -> Self {
        Self::from_diag(d.map(|x| c(x, 0.0)))
    }

    pub fn from_real(a: [[f64; 4]; 4]) -> Self {
        Self {
            m: a.map(|row| row.map(|x| c(x, 0.0))),
        }
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.m[i][j] = self.m[j][i].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: ComplexScalar) -> Self {
        Self {
            m: self.m.map(|row| row.map(|x| x * s)),
        }
    }

    pub fn trace(&self) -> ComplexScalar {
        (0..4).map(|i| self.m[i][i]).sum()
    }

    pub fn apply(&self, state: &TwoQubitState) -> TwoQubitState {
        let mut amp = [ZERO; 4];
        for (i, a) in amp.iter_mut().enumerate() {
            *a = (0..4).map(|j| self.m[i][j] * state.amp[j]).sum();
        }
        TwoQubitState { amp }
    }

    /// Column `j`, i.e. the image of basis state `j`.
    pub fn column(&self, j: usize) -> TwoQubitState {
        TwoQubitState {
            amp: [self.m[0][j], self.m[1][j], self.m[2][j], self.m[3][j]],
        }
    }

    /// `max |A - A^dagger|`
    pub fn hermiticity_defect(&self) -> f64 {
        op_distance(self, &self.dagger())
    }

    /// `max |U^dagger U - 1|`
    pub fn unitarity_defect(&self) -> f64 {
        op_distance(&(self.dagger() * *self), &Self::identity())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= TOL
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= TOL
    }

    /// Largest singular value, from the spectrum of `A^dagger A`.
    pub fn spectral_norm(&self) -> f64 {
        let gram = self.dagger() * *self;
        let eig = eigh(&gram).expect("Gram matrix is Hermitian");
        eig.values[3].max(0.0).sqrt()
    }
}

impl Index<(usize, usize)> for TwoQubitOperator {
    type Output = ComplexScalar;
    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        &self.m[i][j]
    }
}

impl IndexMut<(usize, usize)> for TwoQubitOperator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        &mut self.m[i][j]
    }
}

impl Add for TwoQubitOperator {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.m[i][j] += rhs.m[i][j];
            }
        }
        self
    }
}

impl Sub for TwoQubitOperator {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.m[i][j] -= rhs.m[i][j];
            }
        }
        self
    }
}

impl Mul for TwoQubitOperator {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.m[i][j] = (0..4).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        out
    }
}

/// Kronecker product `a (x) b`: `m[2i+k][2j+l] = a[i][j] * b[k][l]`.
pub fn tensor(a: &Mat2, b: &Mat2) -> TwoQubitOperator {
    let mut out = TwoQubitOperator::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.m[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Max-absolute-entry distance.
pub fn op_distance(a: &TwoQubitOperator, b: &TwoQubitOperator) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((a.m[i][j] - b.m[i][j]).norm());
        }
    }
    d
}

/// Eigendecomposition `h = V diag(values) V^dagger`, values ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: [f64; 4],
    pub vectors: TwoQubitOperator,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> TwoQubitOperator {
        let d = TwoQubitOperator::from_real_diag(self.values);
        self.vectors * d * self.vectors.dagger()
    }
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Cyclic complex Jacobi diagonalization of a Hermitian 4x4 matrix.
pub fn eigh(h: &TwoQubitOperator) -> Result<HermitianEigen> {
    let defect = h.hermiticity_defect();
    if defect > TOL {
        return Err(Error::NotHermitian(defect));
    }
    // symmetrize so round-off in the input does not leak into the rotations
    let mut a = (*h + h.dagger()).scale(c(0.5, 0.0));
    let mut v = TwoQubitOperator::identity();
    let scale = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| a.m[i][j].norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| a.m[i][j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a.m[p][q];
                let b = apq.norm();
                // below this the rotation is a no-op and the phase loses precision
                if b <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / b;
                let app = a.m[p][p].re;
                let aqq = a.m[q][q].re;
                let theta = 0.5 * (2.0 * b).atan2(app - aqq);
                let (s, cs) = theta.sin_cos();
                // W = diag(1, conj(phase)) * [[cos, -sin], [sin, cos]] on (p, q)
                let mut w = TwoQubitOperator::identity();
                w.m[p][p] = c(cs, 0.0);
                w.m[p][q] = c(-s, 0.0);
                w.m[q][p] = phase.conj() * s;
                w.m[q][q] = phase.conj() * cs;
                a = w.dagger() * a * w;
                v = v * w;
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a.m[i][i].re.total_cmp(&a.m[j][j].re));
    let mut values = [0.0; 4];
    let mut vectors = TwoQubitOperator::zero();
    for (col, &k) in order.iter().enumerate() {
        values[col] = a.m[k][k].re;
        for row in 0..4 {
            vectors.m[row][col] = v.m[row][k];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// `exp(i s h)` for Hermitian `h`, through its eigendecomposition.
pub fn expm_hermitian(h: &TwoQubitOperator, s: f64) -> Result<TwoQubitOperator> {
    let eig = eigh(h)?;
    let phases = eig.values.map(|lambda| c(0.0, s * lambda).exp());
    Ok(eig.vectors * TwoQubitOperator::from_diag(phases) * eig.vectors.dagger())
}

/// A validated two-qubit density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityOperator(TwoQubitOperator);

impl DensityOperator {
    pub fn matrix(&self) -> &TwoQubitOperator {
        &self.0
    }

    pub fn populations(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.0.m[i][i].re)
    }

    pub fn maximally_mixed() -> Self {
        Self(TwoQubitOperator::identity().scale(c(0.25, 0.0)))
    }

    /// `U rho U^dagger`; unitary conjugation keeps every invariant.
    pub fn evolve(&self, u: &TwoQubitOperator) -> Self {
        Self(*u * self.0 * u.dagger())
    }
}

pub fn validate_density(r: TwoQubitOperator) -> Result<DensityOperator> {
    let herm = r.hermiticity_defect();
    if herm > TOL {
        return Err(Error::InvalidDensity {
            defect: DensityDefect::Hermiticity,
            value: herm,
        });
    }
    let tr = r.trace();
    let tr_dev = (tr - ONE).norm();
    if tr_dev > TOL {
        return Err(Error::InvalidDensity {
            defect: DensityDefect::Trace,
            value: tr.re,
        });
    }
    let min_eig = eigh(&r)?.values[0];
    if min_eig < -TOL {
        return Err(Error::InvalidDensity {
            defect: DensityDefect::Positivity,
            value: min_eig,
        });
    }
    Ok(DensityOperator(r))
}
