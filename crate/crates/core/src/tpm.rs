//! Two-point measurement statistics with local energy projectors.
//!
//! Outcomes are tracked as bit pairs `(psi_A, phi_B)` indexed `2*psi_A + phi_B`.
//! Energies use the dimensionless labels `eps(0) = -1`, `eps(1) = +1` per qubit,
//! so a pair carries `E in {-2, 0, +2}`. The degenerate `E = 0` outcomes
//! (`01` and `10`) are only merged when a distribution is built.

use crate::error::{invalid, Error, Result};
use crate::linalg::{pauli, tensor, DensityOperator, TwoQubitOperator, TOL};
use crate::model::Propagator;

/// Merge tolerance for equal-valued atoms.
pub const MERGE_TOL: f64 = 1e-12;
/// `|<ds>|` below this leaves the energy/entropy ratio undefined.
pub const RATIO_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeLabel {
    pub psi_a: u8,
    pub phi_b: u8,
}

impl OutcomeLabel {
    pub const ALL: [OutcomeLabel; 4] = [
        OutcomeLabel { psi_a: 0, phi_b: 0 },
        OutcomeLabel { psi_a: 0, phi_b: 1 },
        OutcomeLabel { psi_a: 1, phi_b: 0 },
        OutcomeLabel { psi_a: 1, phi_b: 1 },
    ];

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    pub fn index(&self) -> usize {
        2 * self.psi_a as usize + self.phi_b as usize
    }

    pub fn energy(&self) -> i32 {
        let eps = |b: u8| if b == 0 { -1 } else { 1 };
        eps(self.psi_a) + eps(self.phi_b)
    }

    /// `"00"`, `"01"`, `"10"` or `"11"`.
    pub fn bits(&self) -> String {
        format!("{}{}", self.psi_a, self.phi_b)
    }
}

pub fn energy_of(i: usize) -> f64 {
    OutcomeLabel::from_index(i).energy() as f64
}

/// `Pi_{psi phi} = |psi><psi|_A (x) |phi><phi|_B`, in outcome order.
pub fn projectors() -> [TwoQubitOperator; 4] {
    let single = [pauli::proj0(), pauli::proj1()];
    OutcomeLabel::ALL.map(|o| tensor(&single[o.psi_a as usize], &single[o.phi_b as usize]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbVector(pub [f64; 4]);

impl ProbVector {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if p.iter().any(|&x| !(x >= -1e-12)) {
            return Err(invalid("probabilities", "negative entry"));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(invalid("probabilities", format!("sum is {sum}")));
        }
        Ok(Self(p))
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// `p[n] = Tr[rho0 Pi_n]`. Only populations survive the first measurement.
pub fn initial_probs(rho0: &DensityOperator) -> ProbVector {
    let pis = projectors();
    ProbVector(pis.map(|pi| (*rho0.matrix() * pi).trace().re))
}

/// Column-stochastic transition matrix `c[fin][in] = p(fin | in)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalMatrix(pub [[f64; 4]; 4]);

impl ConditionalMatrix {
    pub fn get(&self, fin: usize, input: usize) -> f64 {
        self.0[fin][input]
    }

    /// Max deviation of column sums from 1.
    pub fn column_defect(&self) -> f64 {
        (0..4)
            .map(|j| ((0..4).map(|i| self.0[i][j]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Max deviation of row sums from 1.
    pub fn row_defect(&self) -> f64 {
        (0..4)
            .map(|i| (self.0[i].iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_doubly_stochastic(&self, tol: f64) -> bool {
        self.column_defect() <= tol && self.row_defect() <= tol
    }

    pub fn max_abs_diff(&self, other: &ConditionalMatrix) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }
}

/// `c[fin][in] = Tr[Pi_fin U Pi_in U^dagger] = |<fin|U|in>|^2`.
pub fn conditional_matrix(prop: &Propagator) -> Result<ConditionalMatrix> {
    conditional_from_unitary(&prop.u)
}

pub fn conditional_from_unitary(u: &TwoQubitOperator) -> Result<ConditionalMatrix> {
    let defect = u.unitarity_defect();
    if defect > TOL {
        return Err(Error::NotUnitary(defect));
    }
    let mut c = [[0.0; 4]; 4];
    for (fin, row) in c.iter_mut().enumerate() {
        for (input, e) in row.iter_mut().enumerate() {
            *e = u.m[fin][input].norm_sqr();
        }
    }
    Ok(ConditionalMatrix(c))
}

/// Joint outcome table `j[in][fin] = p(fin | in) p_in(in)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointTable(pub [[f64; 4]; 4]);

impl JointTable {
    pub fn get(&self, input: usize, fin: usize) -> f64 {
        self.0[input][fin]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().flatten().sum()
    }

    pub fn row_marginal(&self) -> [f64; 4] {
        self.0.map(|row| row.iter().sum())
    }

    /// Row-major flattening `(in, fin)`.
    pub fn flat(&self) -> [f64; 16] {
        let mut out = [0.0; 16];
        for (k, v) in self.0.iter().flatten().enumerate() {
            out[k] = *v;
        }
        out
    }

    /// Column names matching [`JointTable::flat`].
    pub fn column_names(prefix: &str) -> Vec<String> {
        let mut names = Vec::with_capacity(16);
        for i in OutcomeLabel::ALL {
            for f in OutcomeLabel::ALL {
                names.push(format!("{prefix}{}_{}", i.bits(), f.bits()));
            }
        }
        names
    }
}

pub fn joint_from_conditional(p_in: &ProbVector, c: &ConditionalMatrix) -> JointTable {
    let mut j = [[0.0; 4]; 4];
    for (input, row) in j.iter_mut().enumerate() {
        for (fin, e) in row.iter_mut().enumerate() {
            *e = c.0[fin][input] * p_in[input];
        }
    }
    JointTable(j)
}

pub fn joint_table(rho0: &DensityOperator, prop: &Propagator) -> Result<JointTable> {
    let c = conditional_matrix(prop)?;
    Ok(joint_from_conditional(&initial_probs(rho0), &c))
}

/// `p_fin[m] = sum_n j[n][m]`
pub fn final_probs(j: &JointTable) -> ProbVector {
    let mut p = [0.0; 4];
    for row in &j.0 {
        for (m, v) in row.iter().enumerate() {
            p[m] += v;
        }
    }
    ProbVector(p)
}

/// Finite distribution over real values, sorted by value, zero-weight atoms dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteDistribution {
    /// Aggregates `(value, weight)` pairs, merging values within [`MERGE_TOL`].
    pub fn from_weighted<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut raw: Vec<(f64, f64)> = pairs.into_iter().filter(|&(_, w)| w != 0.0).collect();
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (v, w) in raw {
            match atoms.last_mut() {
                Some(last) if (v - last.0).abs() <= MERGE_TOL => last.1 += w,
                _ => atoms.push((v, w)),
            }
        }
        Self { atoms }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn prob_of(&self, value: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|(v, _)| (v - value).abs() <= MERGE_TOL)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|(_, p)| p).sum()
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|(v, p)| v * p).sum()
    }
}

/// `Prob(dE)` with `dE = E_fin - E_in`.
pub fn delta_e_distribution(j: &JointTable) -> DiscreteDistribution {
    DiscreteDistribution::from_weighted((0..4).flat_map(|n| {
        (0..4).map(move |m| (energy_of(m) - energy_of(n), j.0[n][m]))
    }))
}

/// The 16 stochastic entropy-production values `ln p_in(n) - ln p_fin(m)`;
/// `None` where either probability vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRealizations(pub [[Option<f64>; 4]; 4]);

impl EntropyRealizations {
    pub fn get(&self, input: usize, fin: usize) -> Option<f64> {
        self.0[input][fin]
    }
}

pub fn entropy_realizations(p_in: &ProbVector, p_fin: &ProbVector) -> EntropyRealizations {
    let mut s = [[None; 4]; 4];
    for (n, row) in s.iter_mut().enumerate() {
        for (m, e) in row.iter_mut().enumerate() {
            if p_in[n] > 0.0 && p_fin[m] > 0.0 {
                *e = Some(p_in[n].ln() - p_fin[m].ln());
            }
        }
    }
    EntropyRealizations(s)
}

/// Joint weight sitting on undefined realizations.
pub fn undefined_weight(j: &JointTable, s: &EntropyRealizations) -> f64 {
    let mut w = 0.0;
    for n in 0..4 {
        for m in 0..4 {
            if s.0[n][m].is_none() {
                w += j.0[n][m];
            }
        }
    }
    w
}

pub fn entropy_distribution(j: &JointTable, s: &EntropyRealizations) -> DiscreteDistribution {
    DiscreteDistribution::from_weighted(
        (0..4).flat_map(|n| (0..4).filter_map(move |m| s.0[n][m].map(|v| (v, j.0[n][m])))),
    )
}

/// Raw moments `sum p v^h` for `h = 1..=h_max`.
pub fn moments(d: &DiscreteDistribution, h_max: usize) -> Result<Vec<f64>> {
    if h_max < 1 {
        return Err(invalid("moments_max", "must be at least 1"));
    }
    Ok((1..=h_max)
        .map(|h| d.atoms.iter().map(|(v, p)| p * v.powi(h as i32)).sum())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoReport {
    pub de_mean: f64,
    pub ds_mean: f64,
    /// `<exp(-ds)>`
    pub ift: f64,
    /// `beta <dE>`
    pub landauer_lhs: f64,
    /// `beta <dE> - <ds>`
    pub landauer_slack: f64,
    /// `<dE> / <ds>`, undefined when `|<ds>|` is within [`RATIO_GUARD`] of 0.
    pub ratio: Option<f64>,
}

pub fn thermo_report(j: &JointTable, s: &EntropyRealizations, beta: f64) -> Result<ThermoReport> {
    if !(beta > 0.0) {
        return Err(invalid("beta", format!("must be > 0, got {beta}")));
    }
    let mut de_mean = 0.0;
    let mut ds_mean = 0.0;
    let mut ift = 0.0;
    for n in 0..4 {
        for m in 0..4 {
            let w = j.0[n][m];
            de_mean += w * (energy_of(m) - energy_of(n));
            if let Some(sigma) = s.0[n][m] {
                ds_mean += w * sigma;
                ift += w * (-sigma).exp();
            }
        }
    }
    let landauer_lhs = beta * de_mean;
    Ok(ThermoReport {
        de_mean,
        ds_mean,
        ift,
        landauer_lhs,
        landauer_slack: landauer_lhs - ds_mean,
        ratio: (ds_mean.abs() > RATIO_GUARD).then(|| de_mean / ds_mean),
    })
}

/// Everything the TPM scheme yields at one time point.
#[derive(Debug, Clone)]
pub struct TpmStats {
    pub p_in: ProbVector,
    pub conditional: ConditionalMatrix,
    pub joint: JointTable,
    pub p_fin: ProbVector,
    pub realizations: EntropyRealizations,
    pub de: DiscreteDistribution,
    pub ds: DiscreteDistribution,
    pub de_moments: Vec<f64>,
    pub ds_moments: Vec<f64>,
    pub report: ThermoReport,
}

impl TpmStats {
    pub fn compute(
        p_in: ProbVector,
        conditional: ConditionalMatrix,
        h_max: usize,
        beta: f64,
    ) -> Result<Self> {
        let joint = joint_from_conditional(&p_in, &conditional);
        let p_fin = final_probs(&joint);
        let realizations = entropy_realizations(&p_in, &p_fin);
        let de = delta_e_distribution(&joint);
        let ds = entropy_distribution(&joint, &realizations);
        let de_moments = moments(&de, h_max)?;
        let ds_moments = moments(&ds, h_max)?;
        let report = thermo_report(&joint, &realizations, beta)?;
        Ok(Self {
            p_in,
            conditional,
            joint,
            p_fin,
            realizations,
            de,
            ds,
            de_moments,
            ds_moments,
            report,
        })
    }
}
