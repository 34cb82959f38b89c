//! Spectral flow along a deformation sweep, and the isospectral stationary state.

use nhchain::evolution::{evolve_mixed, propagator, QuantumState};
use nhchain::hamiltonians::{stationary_purity_cosh_ratio, stationary_purity_sech_form, stationary_state};
use nhchain::spectral::{detect_transitions, long_time_indices, spectral_flow};
use nhchain::ModelFamily;
use serde_json::json;

use super::{decompose, Recipe};
use crate::config::{ExperimentConfig, RawConfig};
use crate::error::{Context, ExperimentError, Result};
use crate::output::{csv, json_report, Artifact};

/// `|Im lambda|` above which an eigenvalue counts as complex.
pub const IMAG_TOL: f64 = 1e-8;

/// Eigenvalue branches along a sweep, with exceptional onsets and long-time degeneracies.
pub struct SpectrumFlow;

impl Recipe for SpectrumFlow {
    fn name(&self) -> &'static str {
        "spectrum_flow"
    }

    fn summary(&self) -> &'static str {
        "eigenvalue flow along a deformation sweep, exceptional onsets and long-time degeneracy"
    }

    fn defaults(&self) -> RawConfig {
        RawConfig {
            family: Some("measurement_induced".into()),
            preset: Some("integrable".into()),
            l: Some(6),
            sweep_start: Some(0.005),
            sweep_stop: Some(1.995),
            sweep_step: Some(0.01),
            ..Default::default()
        }
    }

    fn run(&self, config: &ExperimentConfig) -> Result<Vec<Artifact>> {
        if config.model.family == ModelFamily::Hermitian {
            return Err(ExperimentError::config("family", "a deformation sweep needs a non-Hermitian family"));
        }
        let flow = spectral_flow(&config.model, &config.sweep.points())
            .context(|| format!("spectral flow of {}", config.model.describe()))?;
        let mut table = Vec::new();
        flow.write_csv(&mut table).context(|| "flow table".into())?;
        let table = String::from_utf8(table).expect("csv is ascii");

        let report = detect_transitions(&flow, IMAG_TOL);
        let onsets: Vec<_> = report
            .exceptional_onsets
            .iter()
            .map(|o| {
                json!({
                    "lower": o.lower,
                    "upper": o.upper,
                    "complex_before": o.complex_before,
                    "complex_after": o.complex_after,
                })
            })
            .collect();
        let degeneracy: Vec<_> = flow
            .points
            .iter()
            .map(|p| {
                json!({
                    "sweep_value": p.value,
                    "long_time_degeneracy": long_time_indices(&p.eigenvalues, None).len(),
                    "near_defective": p.near_defective,
                })
            })
            .collect();
        let meta = [("imag_tol", format!("{IMAG_TOL:e}"))];
        Ok(vec![
            csv("spectrum_flow.csv", config, &meta, &table),
            json_report(
                "spectrum_transitions.json",
                config,
                json!({
                    "imag_tol": IMAG_TOL,
                    "exceptional_onsets": onsets,
                    "degenerate_points": report.degenerate_points,
                    "long_time_degeneracy": degeneracy,
                }),
            ),
        ])
    }
}

/// Drift of the stationary state under normalized isospectral evolution, and its purity.
pub struct StationaryCheck;

impl Recipe for StationaryCheck {
    fn name(&self) -> &'static str {
        "stationary_check"
    }

    fn summary(&self) -> &'static str {
        "stationary-state drift and purity against both closed forms"
    }

    fn defaults(&self) -> RawConfig {
        RawConfig {
            family: Some("isospectral".into()),
            preset: Some("chaotic".into()),
            l: Some(4),
            beta: Some(1.0),
            times: Some(vec![0.5, 5.0]),
            ..Default::default()
        }
    }

    fn run(&self, config: &ExperimentConfig) -> Result<Vec<Artifact>> {
        if config.model.family != ModelFamily::Isospectral {
            return Err(ExperimentError::config("family", "stationary_check needs the isospectral family"));
        }
        let (beta, l) = (config.model.beta, config.model.l);
        let spec = decompose(config, &config.model)?;
        let ss = stationary_state(beta, l).context(|| "stationary state".into())?;
        let rho0 = QuantumState::mixed(ss.rho.clone()).context(|| "stationary state".into())?;
        let mut drifts = Vec::new();
        for &t in &config.times {
            let context = || format!("t = {t}");
            let u = propagator(&spec, t).context(context)?;
            let rho_t = evolve_mixed(&u, &rho0).context(context)?;
            drifts.push(rho_t.as_mixed().context(context)?.max_abs_diff(&ss.rho));
        }
        let max_drift = drifts.iter().copied().fold(0.0, f64::max);
        let report = json!({
            "purity_matrix": (&ss.rho * &ss.rho).trace().re,
            "purity_cosh_ratio_form": stationary_purity_cosh_ratio(beta, l),
            "purity_sech_form": stationary_purity_sech_form(beta, l),
            "max_drift_over_t": max_drift,
            "drift_by_t": config.times.iter().zip(&drifts).map(|(t, d)| json!({"t": t, "drift": d})).collect::<Vec<_>>(),
        });
        Ok(vec![json_report("stationary_check.json", config, report)])
    }
}
