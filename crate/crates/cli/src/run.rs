//! The `evolve` and `steady-sweep` runs.

use oscdamp::dynamics::{evolve, initial_exponent, moments, Moments};
use oscdamp::fock_oracle::{self, DensityMatrix};
use oscdamp::generators::build;
use oscdamp::measures::{fidelity, log_negativity, one_mode_reduce, Mode};
use oscdamp::steady::nbar_sweep;
use oscdamp::{CovarianceState, DampingModel, Error};
use thiserror::Error;

use crate::config::{ConfigError, Output, RunConfig};
use crate::csv::Table;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Model(#[from] Error),

    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    /// 2 for configuration problems, 3 for unstable parameters or
    /// dynamics, 4 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Model(e) => match e {
                Error::StabilityViolation { .. } | Error::NotHurwitz { .. } => 3,
                Error::StepSizeUnderflow { .. }
                | Error::PhysicalityLoss { .. }
                | Error::UnphysicalCovariance(_)
                | Error::Singular(_)
                | Error::InvalidDensityMatrix(_) => 4,
                Error::NegativeParameter { .. }
                | Error::NonFiniteParameter { .. }
                | Error::AsymmetricDamping { .. }
                | Error::AsymmetricBath { .. }
                | Error::InvalidTimeGrid(_)
                | Error::NonzeroMean { .. }
                | Error::CutoffTooSmall { .. } => 2,
            },
            RunError::Output { .. } => 4,
        }
    }
}

/// Which engine produces the moments of an evolve run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Gaussian,
    /// Truncated Fock space at the configured cutoff.
    Oracle,
}

/// Upper-triangle covariance entries, 1-based labels.
const COV_ENTRIES: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

fn header(cfg: &RunConfig) -> Vec<String> {
    let models = cfg.model.models();
    let mut h = vec!["t".to_string()];
    for &out in &cfg.outputs {
        match out {
            Output::NA | Output::NB | Output::LogNeg => {
                for m in models {
                    h.push(format!("{}_{}", out.name(), m.name()));
                }
            }
            Output::Covariance => {
                for (i, j) in COV_ENTRIES {
                    for m in models {
                        h.push(format!("cov_{}{}_{}", i + 1, j + 1, m.name()));
                    }
                }
            }
            Output::FidelityA | Output::FidelityB => h.push(out.name().to_string()),
        }
    }
    h
}

fn gaussian_trajectory(
    cfg: &RunConfig,
    model: DampingModel,
    t_max: f64,
    dt_out: f64,
) -> Result<Vec<(f64, Moments)>, RunError> {
    let gen = build(model, &cfg.params)?;
    let traj = evolve(&initial_exponent(&cfg.initial)?, &gen, t_max, dt_out)?;
    Ok(traj.iter().map(|s| (s.t, moments(s))).collect())
}

fn oracle_trajectory(
    cfg: &RunConfig,
    model: DampingModel,
    t_max: f64,
    dt_out: f64,
) -> Result<Vec<(f64, Moments)>, RunError> {
    let cutoff = cfg.oracle_cutoff;
    let system = match model {
        DampingModel::Local => fock_oracle::build_local_superop(&cfg.params, cutoff)?,
        DampingModel::Nonlocal => fock_oracle::build_nonlocal_superop(&cfg.params, cutoff)?,
    };
    let rho0 = DensityMatrix::product_gaussian(&cfg.initial, cutoff)?;
    let traj = fock_oracle::integrate(&system, &rho0, t_max, dt_out)?;
    Ok(traj.iter().map(|r| (r.t, r.moments(&system.ops))).collect())
}

/// CSV of the requested outputs at every output time.
pub fn run_evolve(cfg: &RunConfig, engine: Engine) -> Result<Table, RunError> {
    let (t_max, dt_out) = cfg.time_grid()?;
    cfg.params.validate()?;
    let models = cfg.model.models();
    let trajectories = models
        .iter()
        .map(|&m| match engine {
            Engine::Gaussian => gaussian_trajectory(cfg, m, t_max, dt_out),
            Engine::Oracle => oracle_trajectory(cfg, m, t_max, dt_out),
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(header(cfg));
    for k in 0..trajectories[0].len() {
        let t = trajectories[0][k].0;
        let samples: Vec<&Moments> = trajectories.iter().map(|tr| &tr[k].1).collect();
        let covs = samples
            .iter()
            .map(|m| {
                let c = m.covariance();
                c.check_physical().map_err(|_| Error::PhysicalityLoss {
                    t,
                    min_eigenvalue: c.uncertainty_margin(),
                })?;
                Ok(c)
            })
            .collect::<Result<Vec<CovarianceState>, Error>>()?;

        let mut row = vec![t];
        for &out in &cfg.outputs {
            match out {
                Output::NA => row.extend(samples.iter().map(|m| m.n_a)),
                Output::NB => row.extend(samples.iter().map(|m| m.n_b)),
                Output::LogNeg => {
                    for c in &covs {
                        row.push(log_negativity(c)?);
                    }
                }
                Output::Covariance => {
                    for (i, j) in COV_ENTRIES {
                        row.extend(covs.iter().map(|c| c.v[(i, j)]));
                    }
                }
                Output::FidelityA | Output::FidelityB => {
                    let mode = if out == Output::FidelityA { Mode::A } else { Mode::B };
                    row.push(fidelity(
                        &one_mode_reduce(&covs[0], mode),
                        &one_mode_reduce(&covs[1], mode),
                    )?);
                }
            }
        }
        table.push(row);
    }
    Ok(table)
}

/// Stationary negativities and one-mode fidelity over the configured grid.
pub fn run_steady_sweep(cfg: &RunConfig) -> Result<Table, RunError> {
    let grid = cfg.nbar_grid.as_ref().ok_or(ConfigError::Missing("nbar_grid"))?;
    let rows = nbar_sweep(&cfg.params, grid)?;
    let mut table = Table::new(
        ["nbar", "logneg_local", "logneg_nonlocal", "fidelity_onemode"]
            .map(String::from)
            .to_vec(),
    );
    for r in rows {
        table.push(vec![r.nbar, r.logneg_local, r.logneg_nonlocal, r.fidelity_onemode]);
    }
    Ok(table)
}

/// Checks everything `evolve` or `steady-sweep` would need before running.
pub fn validate(cfg: &RunConfig) -> Result<(), RunError> {
    cfg.params.validate()?;
    cfg.initial.validate()?;
    for &m in cfg.model.models() {
        build(m, &cfg.params)?;
    }
    Ok(())
}
