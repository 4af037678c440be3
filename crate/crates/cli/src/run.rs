//! Serializable run configurations and their execution.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use spectator_core::cpdiagram::{
    dephasing_concurrence_at, in_unital_region, mems_frontier, teleport_windows, trajectory,
    werner_concurrence_at,
};
use spectator_core::ensemble::{run_ensemble, run_ensemble_with_threads, EnsembleConfig};
use spectator_core::measures::{concurrence, purity};
use spectator_core::models::{evolve_reduced, oracle_suite, EvolutionConfig};
use spectator_core::Error;

use crate::table::{Format, Table};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_IO: u8 = 4;
pub const EXIT_COMPUTE: u8 = 5;
pub const EXIT_TOLERANCE: u8 = 6;

/// Deviation the oracle suite must stay under.
pub const ORACLE_TOL: f64 = 1e-8;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::Domain(_) | Error::Truncation { .. } | Error::Unsupported(_) => EXIT_CONFIG,
            _ => EXIT_COMPUTE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "snake_case")]
pub enum Job {
    Evolve(EvolutionConfig),
    Cp(EvolutionConfig),
    Threshold(EvolutionConfig),
    Ensemble {
        #[serde(flatten)]
        config: EnsembleConfig,
        #[serde(default)]
        threads: Option<usize>,
    },
    Curves {
        samples: usize,
    },
    Validate {
        points: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub job: Job,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Failure> {
        match &self.job {
            Job::Evolve(cfg) | Job::Cp(cfg) | Job::Threshold(cfg) => cfg.validate()?,
            Job::Ensemble { config, threads } => {
                config.validate()?;
                if *threads == Some(0) {
                    return Err(Failure::config("--threads must be at least 1"));
                }
            }
            Job::Curves { samples } if *samples < 2 => {
                return Err(Failure::config("curves need at least two samples"));
            }
            Job::Validate { points: 0, .. } => return Err(Failure::config("validate needs at least one point")),
            _ => {}
        }
        Ok(())
    }

    /// Runs the job and writes its table. Returns the exit status.
    pub fn execute(&self) -> Result<u8, Failure> {
        self.validate()?;
        let table = match &self.job {
            Job::Evolve(cfg) => evolve_table(cfg)?,
            Job::Cp(cfg) => cp_table(cfg)?,
            Job::Threshold(cfg) => threshold_table(cfg)?,
            Job::Ensemble { config, threads } => ensemble_table(config, *threads)?,
            Job::Curves { samples } => curves_table(*samples)?,
            Job::Validate { points, seed } => return validate(*points, *seed),
        };
        match table.emit(self.format, self.out.as_deref()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(Failure::io(format!("cannot write output: {e}")))
            }
            _ => Ok(0),
        }
    }
}

fn evolve_table(cfg: &EvolutionConfig) -> Result<Table, Failure> {
    let mut table = Table::new(&[
        "t", "P", "C", "rho11", "rho22", "rho33", "rho44", "re_rho14", "im_rho14", "re_rho23", "im_rho23",
    ]);
    for (rho, &t) in evolve_reduced(cfg)?.iter().zip(&cfg.grid) {
        let (r14, r23) = (rho.get(0, 3), rho.get(1, 2));
        table.push(vec![
            t.into(),
            purity(rho).into(),
            concurrence(rho)?.into(),
            rho.get(0, 0).re.into(),
            rho.get(1, 1).re.into(),
            rho.get(2, 2).re.into(),
            rho.get(3, 3).re.into(),
            r14.re.into(),
            r14.im.into(),
            r23.re.into(),
            r23.im.into(),
        ]);
    }
    Ok(table)
}

fn cp_table(cfg: &EvolutionConfig) -> Result<Table, Failure> {
    let mut table = Table::new(&["t", "P", "C", "in_unital"]);
    for pt in trajectory(cfg)? {
        table.push(vec![pt.t.into(), pt.p.into(), pt.c.into(), in_unital_region(&pt).into()]);
    }
    Ok(table)
}

fn threshold_table(cfg: &EvolutionConfig) -> Result<Table, Failure> {
    let mut table = Table::new(&["t", "C", "C_th", "P", "P_th", "usable"]);
    for r in teleport_windows(cfg)? {
        table.push(vec![
            r.t.into(),
            r.c.into(),
            r.c_th.into(),
            r.p.into(),
            r.p_th.into(),
            r.usable.into(),
        ]);
    }
    Ok(table)
}

fn ensemble_table(cfg: &EnsembleConfig, threads: Option<usize>) -> Result<Table, Failure> {
    let result = match threads {
        Some(n) => run_ensemble_with_threads(cfg, n)?,
        None => run_ensemble(cfg)?,
    };
    let mut table = Table::new(&["t", "meanC", "stderr"]);
    for pt in result.points {
        table.push(vec![pt.t.into(), pt.mean_c.into(), pt.std_err.into()]);
    }
    Ok(table)
}

fn curves_table(samples: usize) -> Result<Table, Failure> {
    let mut table = Table::new(&["P", "C_W", "C_D", "C_MEMS"]);
    for k in 0..samples {
        let p = 0.25 + 0.75 * k as f64 / (samples - 1) as f64;
        table.push(vec![
            p.into(),
            werner_concurrence_at(p).into(),
            dephasing_concurrence_at(p).into(),
            mems_frontier(p)?.into(),
        ]);
    }
    Ok(table)
}

fn validate(points: usize, seed: u64) -> Result<u8, Failure> {
    let report = oracle_suite(points, seed)?;
    println!("points: {}", report.points);
    println!("max deviation tc: {:e}", report.max_deviation_tc);
    println!("max deviation bs: {:e}", report.max_deviation_bs);
    let ok = report.passes(ORACLE_TOL);
    println!("{} (tolerance {ORACLE_TOL:e})", if ok { "ok" } else { "FAILED" });
    Ok(if ok { 0 } else { EXIT_TOLERANCE })
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectator_core::models::ModelKind;
    use spectator_core::states::{FieldSpec, WernerParams};

    fn evolve_config() -> RunConfig {
        RunConfig {
            job: Job::Evolve(EvolutionConfig {
                model: ModelKind::TavisCummingsSpectator,
                werner: WernerParams::bell(),
                field: FieldSpec::Fock { n: 2 },
                grid: vec![0.0, 0.5],
            }),
            out: None,
            format: Format::Csv,
        }
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(evolve_config()).unwrap();
        assert_eq!(v["command"], "evolve");
        assert_eq!(v["params"]["field"]["kind"], "fock");
        assert_eq!(v["format"], "csv");
    }

    #[test]
    fn round_trips() {
        let ensemble = RunConfig {
            job: Job::Ensemble {
                config: EnsembleConfig::new(5, 100, 9, vec![0.0, 1.0], WernerParams::bell()),
                threads: Some(2),
            },
            out: Some("x.csv".into()),
            format: Format::Json,
        };
        for cfg in [evolve_config(), ensemble, RunConfig {
            job: Job::Validate { points: 3, seed: 1 },
            out: None,
            format: Format::Csv,
        }] {
            let text = serde_json::to_string(&cfg).unwrap();
            assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
        }
    }

    #[test]
    fn core_errors_map_to_exit_codes() {
        assert_eq!(Failure::from(Error::Config("x".into())).code, EXIT_CONFIG);
        assert_eq!(Failure::from(Error::NumericalFailure("x".into())).code, EXIT_COMPUTE);
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut cfg = evolve_config();
        if let Job::Evolve(c) = &mut cfg.job {
            c.grid = vec![1.0, 0.0];
        }
        assert_eq!(cfg.validate().unwrap_err().code, EXIT_CONFIG);
        let curves = RunConfig {
            job: Job::Curves { samples: 1 },
            out: None,
            format: Format::Csv,
        };
        assert!(curves.validate().is_err());
    }
}
