//! Entanglement growth after a Neel-state quench.

use nhchain::quench::{quench_entropy_series, QuenchRun};

use super::Recipe;
use crate::config::{ExperimentConfig, RawConfig};
use crate::error::{Context, Result};
use crate::output::{csv, num, Artifact};

fn run_csv(config: &ExperimentConfig, run: &QuenchRun, file_name: String) -> Result<Artifact> {
    let mut body = Vec::new();
    run.write_csv(&mut body).context(|| "quench table".into())?;
    let body = String::from_utf8(body).expect("csv is ascii");
    let saturation = run
        .series
        .keys()
        .map(|&l| format!("l={l}: {}", num(run.saturation(l).expect("size present"))))
        .collect::<Vec<_>>()
        .join("; ");
    let meta = [("L", run.params.l.to_string()), ("saturation_final_third", saturation)];
    Ok(csv(file_name, config, &meta, &body))
}

/// Entropies of several leftmost subsystems of one chain.
pub struct QuenchSubsystem;

impl Recipe for QuenchSubsystem {
    fn name(&self) -> &'static str {
        "quench_subsystem"
    }

    fn summary(&self) -> &'static str {
        "entanglement entropy of leftmost subsystems after a Neel quench"
    }

    fn defaults(&self) -> RawConfig {
        RawConfig {
            family: Some("isospectral".into()),
            preset: Some("chaotic".into()),
            l: Some(10),
            beta: Some(0.1),
            subsystem_sizes: Some(vec![1, 2, 3, 4, 5]),
            t_max: Some(40.0),
            t_step: Some(0.25),
            ..Default::default()
        }
    }

    fn run(&self, config: &ExperimentConfig) -> Result<Vec<Artifact>> {
        let run = quench_entropy_series(&config.model, &config.subsystem_sizes, &config.grid.points())
            .context(|| format!("quench of {}", config.model.describe()))?;
        Ok(vec![run_csv(config, &run, "quench_subsystem.csv".into())?])
    }
}

/// Half-chain entropy for each chain length.
pub struct QuenchScaling;

impl Recipe for QuenchScaling {
    fn name(&self) -> &'static str {
        "quench_scaling"
    }

    fn summary(&self) -> &'static str {
        "half-chain entanglement entropy after a Neel quench for several chain lengths"
    }

    fn defaults(&self) -> RawConfig {
        RawConfig {
            family: Some("measurement_induced".into()),
            preset: Some("chaotic".into()),
            gamma: Some(2.0),
            lengths: Some(vec![6, 8, 10]),
            t_max: Some(60.0),
            t_step: Some(0.25),
            ..Default::default()
        }
    }

    fn run(&self, config: &ExperimentConfig) -> Result<Vec<Artifact>> {
        let grid = config.grid.points();
        config
            .lengths
            .iter()
            .map(|&l| {
                let params = config.model_at(l);
                let run = quench_entropy_series(&params, &[l / 2], &grid)
                    .context(|| format!("quench of {}", params.describe()))?;
                run_csv(config, &run, format!("quench_scaling_L{l}.csv"))
            })
            .collect()
    }
}
