//! Hamiltonian model of the controlled-rotation gate.
//!
//! Natural units throughout: `hbar = 1`, and in the defaults `omega_L = 1`.
//! The local Hamiltonian is `(omega_L/2)(sz (x) 1 + 1 (x) sz)` and the
//! interaction `(omega_int/2) |1><1|_A (x) sx_B`, with the logical
//! `sz = diag(-1, +1)` on `(|0>, |1>)`. In photonic terms `|0> = |H>` and
//! `|1> = |V>`; plotting code that lists `|V>` first is using the reversed
//! ordering of the same basis.

use crate::error::{invalid, Error, Result};
use crate::linalg::{
    c, mat2, mat2_distance, pauli, tensor, validate_density, ComplexScalar, DensityOperator,
    Mat2, TwoQubitOperator, TwoQubitState, I, ONE, ZERO,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega_l: f64,
    omega_int: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            omega_l: 1.0,
            omega_int: 5.0,
        }
    }
}

impl ModelParams {
    pub fn new(omega_l: f64, omega_int: f64) -> Result<Self> {
        if !(omega_l.is_finite() && omega_l > 0.0) {
            return Err(invalid("omega_L", format!("must be > 0, got {omega_l}")));
        }
        if !(omega_int.is_finite() && omega_int >= 0.0) {
            return Err(invalid("omega_int", format!("must be >= 0, got {omega_int}")));
        }
        Ok(Self { omega_l, omega_int })
    }

    pub fn omega_l(&self) -> f64 {
        self.omega_l
    }

    pub fn omega_int(&self) -> f64 {
        self.omega_int
    }

    /// `Delta = sqrt(omega_L^2 + omega_int^2) / 2`
    pub fn delta(&self) -> f64 {
        self.omega_l.hypot(self.omega_int) / 2.0
    }

    /// Time at which `Delta t = k pi / 2`, where the transition amplitude
    /// `|h2|` peaks for odd `k`.
    pub fn quarter_period(&self, k: u32) -> f64 {
        k as f64 * std::f64::consts::FRAC_PI_2 / self.delta()
    }
}

/// `(H_L, H_int, H_tot)`
pub fn hamiltonians(p: &ModelParams) -> (TwoQubitOperator, TwoQubitOperator, TwoQubitOperator) {
    let half_l = c(p.omega_l / 2.0, 0.0);
    let half_int = c(p.omega_int / 2.0, 0.0);
    let id = pauli::identity();
    let h_l = (tensor(&pauli::z(), &id) + tensor(&id, &pauli::z())).scale(half_l);
    let h_int = tensor(&pauli::proj1(), &pauli::x()).scale(half_int);
    (h_l, h_int, h_l + h_int)
}

/// Trajectory amplitudes `(h1, h2)` at time `t`.
pub fn h_coeffs(p: &ModelParams, t: f64) -> (ComplexScalar, ComplexScalar) {
    let delta = p.delta();
    let (s, cs) = (delta * t).sin_cos();
    let h1 = c(cs, p.omega_l / (2.0 * delta) * s);
    let h2 = c(0.0, -p.omega_int / (2.0 * delta) * s);
    (h1, h2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub t: f64,
    pub h1: ComplexScalar,
    pub h2: ComplexScalar,
    pub u: TwoQubitOperator,
}

impl Propagator {
    /// `|h2|^2`, the probability of flipping B when A is in `|1>`.
    pub fn flip_probability(&self) -> f64 {
        self.h2.norm_sqr()
    }
}

/// Closed-form `exp(-i H_tot t)`.
pub fn propagator_analytic(p: &ModelParams, t: f64) -> Propagator {
    let (h1, h2) = h_coeffs(p, t);
    let wt = p.omega_l * t;
    let mut u = TwoQubitOperator::zero();
    u.m[0][0] = c(0.0, wt).exp();
    u.m[1][1] = ONE;
    let pre = c(0.0, -wt / 2.0).exp();
    // columns are the images of |10> and |11>
    u.m[2][2] = pre * h1;
    u.m[3][2] = pre * h2;
    u.m[2][3] = pre * h2;
    u.m[3][3] = pre * h1.conj();
    Propagator { t, h1, h2, u }
}

/// Conditional rotation of qubit B: angle `phi = Delta t` about
/// `n = (sin zeta, 0, cos zeta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationDecomposition {
    pub zeta: f64,
    pub phi: f64,
    pub axis: [f64; 3],
}

impl RotationDecomposition {
    /// `cos(phi) 1 - i sin(phi) (n . sigma)`
    pub fn operator(&self) -> Mat2 {
        let [nx, ny, nz] = self.axis;
        let (s, cs) = self.phi.sin_cos();
        let (x, y, z) = (pauli::x(), pauli::y(), pauli::z());
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let n_sigma = x[i][j] * nx + y[i][j] * ny + z[i][j] * nz;
                let id = if i == j { ONE } else { ZERO };
                out[i][j] = id * cs - I * s * n_sigma;
            }
        }
        out
    }

    /// Distance between the reconstructed rotation and the A=1 block of `U`
    /// with the `exp(-i omega_L t / 2)` prefactor stripped.
    pub fn block_mismatch(&self, p: &ModelParams, prop: &Propagator) -> f64 {
        let pre = c(0.0, p.omega_l * prop.t / 2.0).exp();
        let block = [
            [prop.u.m[2][2] * pre, prop.u.m[2][3] * pre],
            [prop.u.m[3][2] * pre, prop.u.m[3][3] * pre],
        ];
        mat2_distance(&self.operator(), &block)
    }
}

pub fn rotation_decomposition(p: &ModelParams, t: f64) -> Result<RotationDecomposition> {
    if p.omega_int == 0.0 {
        return Err(Error::DegenerateAxis);
    }
    let zeta = (p.omega_l / (2.0 * p.delta())).acos();
    Ok(RotationDecomposition {
        zeta,
        phi: p.delta() * t,
        axis: [zeta.sin(), 0.0, zeta.cos()],
    })
}

/// Product Gibbs state parameters. `beta_A` follows from `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    alpha: f64,
    beta_b: f64,
}

impl Default for ThermalSpec {
    fn default() -> Self {
        Self {
            alpha: 0.2,
            beta_b: 0.5,
        }
    }
}

impl ThermalSpec {
    pub fn new(alpha: f64, beta_b: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        if !beta_b.is_finite() {
            return Err(invalid("beta_B", format!("must be finite, got {beta_b}")));
        }
        Ok(Self { alpha, beta_b })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta_b(&self) -> f64 {
        self.beta_b
    }

    /// `beta_A = ln(alpha / (1 - alpha)) / (2 omega_L)`
    pub fn beta_a(&self, p: &ModelParams) -> f64 {
        (self.alpha / (1.0 - self.alpha)).ln() / (2.0 * p.omega_l)
    }
}

fn gibbs_qubit(beta: f64, omega_l: f64) -> Mat2 {
    // exp(-beta omega_L sz) with sz = diag(-1, +1)
    let w0 = (beta * omega_l).exp();
    let w1 = (-beta * omega_l).exp();
    let z = w0 + w1;
    mat2([[w0 / z, 0.0], [0.0, w1 / z]])
}

pub fn thermal_state(spec: &ThermalSpec, p: &ModelParams) -> Result<DensityOperator> {
    let rho_a = gibbs_qubit(spec.beta_a(p), p.omega_l);
    let rho_b = gibbs_qubit(spec.beta_b, p.omega_l);
    validate_density(tensor(&rho_a, &rho_b))
}

/// Sum of absolute off-diagonal entries.
pub fn coherence_l1(rho: &DensityOperator) -> f64 {
    let m = rho.matrix();
    let mut total = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                total += m.m[i][j].norm();
            }
        }
    }
    total
}

/// Coherence of the pure state `U(t)|input>`.
pub fn trajectory_coherence(prop: &Propagator, input: usize) -> f64 {
    let psi: TwoQubitState = prop.u.apply(&TwoQubitState::basis(input));
    let rho = validate_density(psi.projector()).expect("pure state from a unitary");
    coherence_l1(&rho)
}

/// Gate angle `gamma` with `cos gamma = |h1|`, `sin gamma = |h2|`.
pub fn gate_angle(p: &ModelParams, t: f64) -> f64 {
    let (h1, h2) = h_coeffs(p, t);
    h2.norm().atan2(h1.norm())
}
