//! OTOC lightcones and Haar-sampled bipartite OTOCs.

use nhchain::evolution::shifted_propagator;
use nhchain::opent::linear_opent;
use nhchain::scrambling::{haar_bipartite_otoc, heisenberg_haar_otoc, otoc_lightcone};
use serde_json::json;

use super::{cut, decompose, label, Recipe};
use crate::config::{ExperimentConfig, RawConfig};
use crate::error::{Context, Result};
use crate::output::{csv, json_report, num, Artifact};
use crate::seeds::component_seed;

/// Normalized `Z`-`Z` OTOC heatmap with onset times, one pair of files per deformation value.
pub struct Lightcone;

impl Recipe for Lightcone {
    fn name(&self) -> &'static str {
        "lightcone"
    }

    fn summary(&self) -> &'static str {
        "normalized OTOC of Z operators versus site and time, with onset times"
    }

    fn defaults(&self) -> RawConfig {
        RawConfig {
            family: Some("isospectral".into()),
            preset: Some("chaotic".into()),
            l: Some(7),
            beta: Some(0.0),
            t_max: Some(6.0),
            t_step: Some(0.1),
            ..Default::default()
        }
    }

    fn run(&self, config: &ExperimentConfig) -> Result<Vec<Artifact>> {
        let l = config.model.l;
        let v_site = config.v_site.unwrap_or(l.div_ceil(2));
        let grid = config.grid.points();
        let mut artifacts = Vec::new();
        for &value in &config.values {
            let params = config.model.with_deformation(value);
            let table = otoc_lightcone(&params, v_site, &grid, config.threshold)
                .context(|| format!("lightcone for {}", params.describe()))?;
            let meta = [
                ("deformation", format!("{value}")),
                ("v_site", v_site.to_string()),
                ("threshold", format!("{}", config.threshold)),
            ];

            let mut heatmap = Vec::new();
            table.write_csv(&mut heatmap).context(|| "lightcone table".into())?;
            let heatmap = String::from_utf8(heatmap).expect("csv is ascii");
            artifacts.push(csv(format!("lightcone_{}.csv", label(value)), config, &meta, &heatmap));

            let mut onsets = String::from("site,distance,onset_time,onset_index\n");
            for (s, (time, index)) in table.onsets().into_iter().zip(table.onset_indices()).enumerate() {
                let site = s + 1;
                let time = time.map(num).unwrap_or_default();
                let index = index.map(|k| k.to_string()).unwrap_or_default();
                onsets.push_str(&format!("{site},{},{time},{index}\n", site.abs_diff(v_site)));
            }
            artifacts.push(csv(format!("lightcone_onsets_{}.csv", label(value)), config, &meta, &onsets));
        }
        Ok(artifacts)
    }
}

/// Haar-sampled bipartite OTOC against the closed forms it should converge to.
pub struct HaarConvergence;

impl Recipe for HaarConvergence {
    fn name(&self) -> &'static str {
        "haar_convergence"
    }

    fn summary(&self) -> &'static str {
        "sampled Haar-averaged OTOC versus linear operator entanglement and the Heisenberg closed form"
    }

    fn defaults(&self) -> RawConfig {
        RawConfig {
            family: Some("isospectral".into()),
            preset: Some("chaotic".into()),
            l: Some(8),
            beta: Some(1.0),
            times: Some(vec![0.5, 1.0, 2.0, 3.0, 5.0]),
            samples: Some(100),
            ..Default::default()
        }
    }

    fn run(&self, config: &ExperimentConfig) -> Result<Vec<Artifact>> {
        let l = config.model.l;
        let bi = cut(config, l)?;
        let spec = decompose(config, &config.model)?;
        let mut body = String::from("t,haar_mean,haar_stderr,linear_opent,heisenberg_haar_otoc,n_samples,seed\n");
        let mut points = Vec::new();
        for &t in &config.times {
            let context = || format!("t = {t}");
            let u = shifted_propagator(&spec, t).context(context)?;
            let seed = component_seed(config.seed, &format!("{}/t={t}", config.recipe));
            let sampled = haar_bipartite_otoc(&u, &bi, config.samples, seed).context(context)?;
            let linear = linear_opent(&u, &bi).context(context)?;
            let heisenberg = heisenberg_haar_otoc(&u, &bi).context(context)?;
            body.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                num(t),
                num(sampled.mean),
                num(sampled.stderr),
                num(linear),
                num(heisenberg),
                sampled.n_samples,
                seed
            ));
            points.push(json!({
                "t": t,
                "haar_mean": sampled.mean,
                "haar_stderr": sampled.stderr,
                "linear_opent": linear,
                "heisenberg_haar_otoc": heisenberg,
                "deviation_in_stderr": (sampled.mean - linear).abs() / sampled.stderr,
                "seed": seed,
            }));
        }
        let meta = [("cut", bi.label())];
        Ok(vec![
            csv("haar_convergence.csv", config, &meta, &body),
            json_report("haar_convergence.json", config, json!({ "cut": bi.label(), "points": points })),
        ])
    }
}
