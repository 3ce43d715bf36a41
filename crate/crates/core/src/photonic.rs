//! Linear-optical realization of the controlled rotation.
//!
//! Two photons, control in spatial mode `a` and target in mode `b`, each
//! carrying a polarization qubit (`|H> = |0>`, `|V> = |1>`). Modes are
//! ordered `(a,H), (a,V), (b,H), (b,V)`. A partially polarizing beam splitter
//! with `T_H = 1`, `T_V = 1/3` followed by `1/sqrt(3)` H-amplitude equalizers
//! on both arms yields a control-sigma^z with success probability 1/9 once
//! coincidences (one photon per spatial mode) are post-selected. Half-wave
//! plates `u_{gamma/2}` on the target arm before and after the gate turn it
//! into a controlled `u_gamma` because `u sz u = u_{2 theta}`.
//!
//! Beam-splitter convention: amplitude `i sqrt(1 - T)` on reflection,
//! symmetric for both inputs. Inside this module `sz = diag(+1, -1)` on
//! `(H, V)`.

use crate::error::{invalid, Error, Result};
use crate::linalg::{c, mat2, Mat2, TwoQubitOperator, ONE};
use crate::tpm::ConditionalMatrix;

pub const A_H: usize = 0;
pub const A_V: usize = 1;
pub const B_H: usize = 2;
pub const B_V: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalParams {
    pub t_h: f64,
    pub t_v: f64,
    /// H amplitude factor of each loss equalizer.
    pub atten_h: f64,
    /// Uniform accidental-coincidence background.
    pub accidental_eps: f64,
}

impl Default for OpticalParams {
    fn default() -> Self {
        Self {
            t_h: 1.0,
            t_v: 1.0 / 3.0,
            atten_h: 1.0 / 3f64.sqrt(),
            accidental_eps: 0.0,
        }
    }
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(invalid(name, format!("must lie in [0, 1], got {x}")))
    }
}

impl OpticalParams {
    pub fn validate(&self) -> Result<()> {
        check_unit("photonic.T_H", self.t_h)?;
        check_unit("photonic.T_V", self.t_v)?;
        check_unit("photonic.atten_H", self.atten_h)?;
        if !(0.0..1.0).contains(&self.accidental_eps) {
            return Err(invalid(
                "photonic.eps",
                format!("must lie in [0, 1), got {}", self.accidental_eps),
            ));
        }
        Ok(())
    }
}

/// Linear map on the four optical modes: output amplitude `m[out][in]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTransform {
    pub m: TwoQubitOperator,
}

impl ModeTransform {
    pub fn identity() -> Self {
        Self {
            m: TwoQubitOperator::identity(),
        }
    }

    /// `self` applied after `inner`.
    pub fn then_after(&self, inner: &ModeTransform) -> Self {
        Self { m: self.m * inner.m }
    }

    /// Polarization operator on one arm, identity on the other.
    pub fn on_arm(arm: usize, u: &Mat2) -> Self {
        let mut m = TwoQubitOperator::identity();
        let base = 2 * arm;
        for i in 0..2 {
            for j in 0..2 {
                m.m[base + i][base + j] = u[i][j];
            }
        }
        Self { m }
    }

    pub fn is_unitary(&self) -> bool {
        self.m.unitarity_defect() <= 1e-12
    }

    pub fn max_singular_value(&self) -> f64 {
        self.m.spectral_norm()
    }
}

pub fn ppbs_transform(t_h: f64, t_v: f64) -> Result<ModeTransform> {
    check_unit("T_H", t_h)?;
    check_unit("T_V", t_v)?;
    let mut m = TwoQubitOperator::zero();
    for (pol, t) in [(0, t_h), (1, t_v)] {
        let (a, b) = (pol, 2 + pol);
        let tr = c(t.sqrt(), 0.0);
        let rf = c(0.0, (1.0 - t).sqrt());
        m.m[a][a] = tr;
        m.m[b][b] = tr;
        m.m[b][a] = rf;
        m.m[a][b] = rf;
    }
    Ok(ModeTransform { m })
}

/// Half-wave-plate action `u_theta = [[cos, sin], [sin, -cos]]` on `(H, V)`.
pub fn hwp_u(theta: f64) -> Mat2 {
    let (s, cs) = theta.sin_cos();
    mat2([[cs, s], [s, -cs]])
}

/// Physical fast-axis angle of the plate realizing `u_theta`.
pub fn plate_angle(theta: f64) -> f64 {
    theta / 2.0
}

fn equalizers(atten_h: f64) -> ModeTransform {
    let a = c(atten_h, 0.0);
    ModeTransform {
        m: TwoQubitOperator::from_diag([a, ONE, a, ONE]),
    }
}

/// `u_{gamma/2}(b) . equalizers . PPBS . u_{gamma/2}(b)`
pub fn compose_circuit(params: &OpticalParams, gamma: f64) -> Result<ModeTransform> {
    params.validate()?;
    let plate = ModeTransform::on_arm(1, &hwp_u(gamma / 2.0));
    let ppbs = ppbs_transform(params.t_h, params.t_v)?;
    Ok(plate
        .then_after(&equalizers(params.atten_h))
        .then_after(&ppbs)
        .then_after(&plate))
}

/// Effective two-qubit coincidence amplitudes and per-input success probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostselectedGate {
    pub g: TwoQubitOperator,
    pub success: [f64; 4],
}

/// Two-photon coincidence amplitudes: the permanent of the 2x2 submatrix
/// connecting inputs `(a,p), (b,q)` to outputs `(a,p'), (b,q')`.
pub fn postselect(mt: &ModeTransform) -> PostselectedGate {
    let m = &mt.m.m;
    let mut g = TwoQubitOperator::zero();
    for p in 0..2 {
        for q in 0..2 {
            for p_out in 0..2 {
                for q_out in 0..2 {
                    let (ai, bi) = (p, 2 + q);
                    let (ao, bo) = (p_out, 2 + q_out);
                    g.m[2 * p_out + q_out][2 * p + q] =
                        m[ao][ai] * m[bo][bi] + m[ao][bi] * m[bo][ai];
                }
            }
        }
    }
    let success = [0, 1, 2, 3].map(|j| (0..4).map(|i| g.m[i][j].norm_sqr()).sum());
    PostselectedGate { g, success }
}

/// Renormalized transition probabilities with an `eps` uniform background.
/// `eps = 1` is accepted here as the fully random limit.
pub fn photonic_conditional_matrix(gate: &PostselectedGate, eps: f64) -> Result<ConditionalMatrix> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(invalid("eps", format!("must lie in [0, 1], got {eps}")));
    }
    let mut c = [[0.0; 4]; 4];
    for input in 0..4 {
        let s = gate.success[input];
        if !(s > 0.0) {
            return Err(Error::BlockedInput(input));
        }
        for (fin, row) in c.iter_mut().enumerate() {
            row[input] = (1.0 - eps) * gate.g.m[fin][input].norm_sqr() / s + eps / 4.0;
        }
    }
    Ok(ConditionalMatrix(c))
}

/// Convenience wrapper: conditional matrix of the circuit at gate angle `gamma`.
pub fn conditional_at(params: &OpticalParams, gamma: f64) -> Result<ConditionalMatrix> {
    let gate = postselect(&compose_circuit(params, gamma)?);
    photonic_conditional_matrix(&gate, params.accidental_eps)
}

/// Control-sigma^z in the logical basis.
pub fn cz() -> TwoQubitOperator {
    TwoQubitOperator::from_diag([ONE, ONE, ONE, -ONE])
}
