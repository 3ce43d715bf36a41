//! Seeded Monte Carlo emulation of the measured TPM statistics.
//!
//! Each shot prepares a basis pair drawn from the populations of `rho0` (the
//! laboratory mixes pure inputs for times proportional to their weights, which
//! is the same categorical law for a diagonal state), evolves the collapsed
//! state and draws the final pair from the Born probabilities.
//!
//! Shots are cut into fixed-size chunks; chunk `k` owns ChaCha stream `k` of
//! the configured seed. Counts are summed, so the table is identical for any
//! number of workers.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::exec::{map_indexed, Backend};
use crate::linalg::{DensityOperator, TwoQubitOperator, TwoQubitState};
use crate::tpm::JointTable;

pub const CHUNK_SHOTS: u64 = 1 << 16;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub t: f64,
}

impl SampleConfig {
    pub fn new(n_samples: u64, seed: u64, t: f64) -> Result<Self> {
        if n_samples < 1 {
            return Err(invalid("samples", "must be at least 1"));
        }
        Ok(Self { n_samples, seed, t })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmpiricalTable {
    pub counts: [[u64; 4]; 4],
    pub n: u64,
}

impl EmpiricalTable {
    pub fn empty() -> Self {
        Self {
            counts: [[0; 4]; 4],
            n: 0,
        }
    }

    fn merge(mut self, other: &Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.counts[i][j] += other.counts[i][j];
            }
        }
        self.n += other.n;
        self
    }

    /// Empirical joint frequencies; an error for an empty table.
    pub fn frequencies(&self) -> Result<JointTable> {
        if self.n == 0 {
            return Err(Error::EmptySample);
        }
        let n = self.n as f64;
        Ok(JointTable(self.counts.map(|row| row.map(|k| k as f64 / n))))
    }

    /// Rounds an exact table to counts, largest-remainder style so they sum to `n`.
    pub fn from_exact(j: &JointTable, n: u64) -> Self {
        let mut counts = [[0u64; 4]; 4];
        let mut rem = Vec::with_capacity(16);
        let mut assigned = 0;
        for i in 0..4 {
            for k in 0..4 {
                let x = j.0[i][k].max(0.0) * n as f64;
                counts[i][k] = x.floor() as u64;
                assigned += counts[i][k];
                rem.push((x - x.floor(), i, k));
            }
        }
        rem.sort_by(|a, b| b.0.total_cmp(&a.0));
        for &(_, i, k) in rem.iter().take(n.saturating_sub(assigned) as usize) {
            counts[i][k] += 1;
        }
        Self { counts, n }
    }
}

fn chunk_sizes(n: u64) -> Vec<u64> {
    let full = n / CHUNK_SHOTS;
    let mut sizes = vec![CHUNK_SHOTS; full as usize];
    let rest = n % CHUNK_SHOTS;
    if rest > 0 {
        sizes.push(rest);
    }
    sizes
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Two-stage prepare-then-measure sampling.
pub fn sample_tpm(
    rho0: &DensityOperator,
    u: &TwoQubitOperator,
    cfg: &SampleConfig,
    backend: Backend,
) -> Result<EmpiricalTable> {
    let prep = WeightedIndex::new(rho0.populations().map(|p| p.max(0.0)))
        .map_err(|e| invalid("rho0", e.to_string()))?;
    let mut measure = Vec::with_capacity(4);
    for input in 0..4 {
        let evolved = u.apply(&TwoQubitState::basis(input));
        let born = evolved.amp.map(|a| a.norm_sqr());
        measure.push(WeightedIndex::new(born).map_err(|e| invalid("U", e.to_string()))?);
    }

    let sizes = chunk_sizes(cfg.n_samples);
    let parts = map_indexed(backend, sizes.len(), |k| {
        let mut rng = chunk_rng(cfg.seed, k);
        let mut table = EmpiricalTable::empty();
        for _ in 0..sizes[k] {
            let input = prep.sample(&mut rng);
            let fin = measure[input].sample(&mut rng);
            table.counts[input][fin] += 1;
        }
        table.n = sizes[k];
        table
    });
    Ok(parts.iter().fold(EmpiricalTable::empty(), |acc, p| acc.merge(p)))
}

/// Direct categorical sampling of the 16 joint cells.
pub fn sample_joint(j: &JointTable, cfg: &SampleConfig, backend: Backend) -> Result<EmpiricalTable> {
    let cells = WeightedIndex::new(j.flat().map(|p| p.max(0.0)))
        .map_err(|e| invalid("joint", e.to_string()))?;
    let sizes = chunk_sizes(cfg.n_samples);
    let parts = map_indexed(backend, sizes.len(), |k| {
        let mut rng = chunk_rng(cfg.seed, k);
        let mut table = EmpiricalTable::empty();
        for _ in 0..sizes[k] {
            let cell = cells.sample(&mut rng);
            table.counts[cell / 4][cell % 4] += 1;
        }
        table.n = sizes[k];
        table
    });
    Ok(parts.iter().fold(EmpiricalTable::empty(), |acc, p| acc.merge(p)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    /// `(1/2) sum |f - j|`
    pub tv: f64,
    pub max_cell: f64,
}

pub fn tv_distance(e: &EmpiricalTable, j: &JointTable) -> Result<Deviation> {
    let f = e.frequencies()?;
    let mut tv = 0.0;
    let mut max_cell: f64 = 0.0;
    for (a, b) in f.flat().iter().zip(j.flat()) {
        let d = (a - b).abs();
        tv += d;
        max_cell = max_cell.max(d);
    }
    Ok(Deviation {
        tv: 0.5 * tv,
        max_cell,
    })
}

/// Named columns sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub times: Vec<f64>,
    pub names: Vec<String>,
    /// `rows[i][k]` is column `k` at `times[i]`.
    pub rows: Vec<Vec<f64>>,
}

/// Per-time, per-column `|theory - estimate|`.
pub fn error_report(theory: &Curve, estimate: &Curve) -> Result<Curve> {
    if theory.names != estimate.names {
        return Err(Error::GridMismatch("column names differ".into()));
    }
    if theory.times.len() != estimate.times.len() || theory.rows.len() != estimate.rows.len() {
        return Err(Error::GridMismatch(format!(
            "{} vs {} time points",
            theory.times.len(),
            estimate.times.len()
        )));
    }
    if let Some((a, b)) = theory
        .times
        .iter()
        .zip(&estimate.times)
        .find(|(a, b)| (*a - *b).abs() > 1e-12)
    {
        return Err(Error::GridMismatch(format!("time {a} vs {b}")));
    }
    let rows = theory
        .rows
        .iter()
        .zip(&estimate.rows)
        .map(|(a, b)| {
            if a.len() != b.len() {
                return Err(Error::GridMismatch("row width differs".into()));
            }
            Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(Curve {
        times: theory.times.clone(),
        names: theory.names.clone(),
        rows,
    })
}
