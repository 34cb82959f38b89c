//! Operator-entanglement series and long-time-average scans.

use nhchain::lta::{analytic_lta, numeric_lta, opent_series};
use nhchain::opent::Bipartition;
use nhchain::spectral::{
    long_time_eigenspace, Diagonalizer, GeneralDiagonalizer, HermitianDiagonalizer, SpectralDecomposition,
};
use nhchain::{ModelFamily, SpinChainParams};

use super::{cut, decompose, label, Recipe};
use crate::config::{ExperimentConfig, LtaWindow, RawConfig};
use crate::ensemble::{EnsembleKind, RandomEnsemble, VARIANCE_CONVENTION};
use crate::error::{Context, ExperimentError, Result};
use crate::output::{csv, num, Artifact};
use crate::seeds::component_seed;

pub const LTA_SCAN_HEADER: &str = "sweep_value,L,numeric_lta,analytic_lta,nrc_violated,degeneracy_n";

/// One scan point: numeric and closed-form long-time averages of `E_op(U_t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LtaRow {
    pub sweep_value: f64,
    pub l: usize,
    /// NaN when the numeric average was not requested.
    pub numeric: f64,
    pub analytic: f64,
    pub nrc_violated: bool,
    pub degeneracy: usize,
}

impl LtaRow {
    fn skipped(sweep_value: f64, l: usize) -> Self {
        Self { sweep_value, l, numeric: f64::NAN, analytic: f64::NAN, nrc_violated: false, degeneracy: 0 }
    }

    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}\n",
            num(self.sweep_value),
            self.l,
            num(self.numeric),
            num(self.analytic),
            self.nrc_violated as u8,
            self.degeneracy
        )
    }
}

/// Scan point for an already decomposed generator.
pub fn lta_row(
    spec: &SpectralDecomposition,
    bi: &Bipartition,
    window: &LtaWindow,
    numeric: bool,
    sweep_value: f64,
) -> nhchain::Result<LtaRow> {
    let lte = long_time_eigenspace(spec, None);
    let analytic = analytic_lta(spec, &lte, bi)?;
    let numeric = if numeric {
        numeric_lta(|t| opent_series(spec, bi, &[t]).map(|v| v[0]), window.t_min, window.t_max, window.points)?
    } else {
        f64::NAN
    };
    Ok(LtaRow {
        sweep_value,
        l: bi.l(),
        numeric,
        analytic: analytic.renyi2,
        nrc_violated: !analytic.nrc.longtime_nrc,
        degeneracy: analytic.degeneracy,
    })
}

fn deformation_name(family: ModelFamily) -> &'static str {
    match family {
        ModelFamily::Hermitian => "none",
        ModelFamily::MeasurementInduced => "gamma",
        ModelFamily::Isospectral => "beta",
    }
}

fn window_meta(config: &ExperimentConfig) -> (&'static str, String) {
    ("lta_window", format!("[{}, {}] with {} points", config.lta.t_min, config.lta.t_max, config.lta.points))
}

/// `E_op(U_t)` on a uniform grid, one file per deformation value.
pub struct OpentSeries;

impl Recipe for OpentSeries {
    fn name(&self) -> &'static str {
        "opent_series"
    }

    fn summary(&self) -> &'static str {
        "operator entanglement of U_t over time, one CSV per deformation value"
    }

    fn defaults(&self) -> RawConfig {
        RawConfig {
            family: Some("measurement_induced".into()),
            preset: Some("chaotic".into()),
            l: Some(10),
            values: Some(vec![0.0, 1.2]),
            t_max: Some(20.0),
            t_step: Some(0.1),
            ..Default::default()
        }
    }

    fn run(&self, config: &ExperimentConfig) -> Result<Vec<Artifact>> {
        let l = config.model.l;
        let bi = cut(config, l)?;
        let grid = config.grid.points();
        let name = deformation_name(config.model.family);
        config
            .values
            .iter()
            .map(|&value| {
                let params = config.model.with_deformation(value);
                let spec = decompose(config, &params)?;
                let series = opent_series(&spec, &bi, &grid).context(|| format!("series at {name} = {value}"))?;
                let mut body = String::from("t,value\n");
                for (t, v) in grid.iter().zip(&series) {
                    body.push_str(&format!("{},{}\n", num(*t), num(*v)));
                }
                let meta = [("deformation", format!("{name} = {value}")), ("cut", bi.label())];
                Ok(csv(format!("opent_series_{name}_{}.csv", label(value)), config, &meta, &body))
            })
            .collect()
    }
}

/// Long-time averages versus chain length, for the configured chain or a
/// random-matrix ensemble.
pub struct OpentLtaScanL;

impl OpentLtaScanL {
    fn chain_rows(&self, config: &ExperimentConfig) -> Result<Vec<LtaRow>> {
        let mut rows = Vec::new();
        for &l in &config.lengths {
            let bi = cut(config, l)?;
            for &value in &config.values {
                let params = config.model_at(l).with_deformation(value);
                let spec = decompose(config, &params)?;
                rows.push(
                    lta_row(&spec, &bi, &config.lta, config.numeric, value)
                        .context(|| format!("long-time average for {}", params.describe()))?,
                );
            }
        }
        Ok(rows)
    }

    fn ensemble_rows(&self, config: &ExperimentConfig, kind: EnsembleKind) -> Result<Vec<LtaRow>> {
        let mut rows = Vec::new();
        for &l in &config.lengths {
            if l < 2 {
                return Err(ExperimentError::config("lengths", "ensemble scans need L >= 2"));
            }
            let bi = cut(config, l)?;
            let seed = component_seed(config.seed, &format!("{}/{kind}/L={l}", config.recipe));
            let ensemble = RandomEnsemble::new(kind, 1 << l, seed);
            let solver: Box<dyn Diagonalizer> = match kind {
                EnsembleKind::Gue => Box::new(HermitianDiagonalizer),
                EnsembleKind::Ginibre => Box::new(GeneralDiagonalizer),
            };
            for draw in 0..config.ensemble_samples {
                let h = ensemble.sample(draw as u64);
                let context = || format!("{kind} draw {draw} at L = {l}");
                let spec = solver.decompose(&h).context(context)?;
                rows.push(lta_row(&spec, &bi, &config.lta, config.numeric, draw as f64).context(context)?);
            }
        }
        Ok(rows)
    }
}

impl Recipe for OpentLtaScanL {
    fn name(&self) -> &'static str {
        "opent_lta_scan_L"
    }

    fn summary(&self) -> &'static str {
        "numeric and analytic long-time operator entanglement versus L (chain, gue or ginibre)"
    }

    fn defaults(&self) -> RawConfig {
        RawConfig {
            family: Some("hermitian".into()),
            preset: Some("chaotic".into()),
            lengths: Some(vec![4, 6, 8, 10]),
            ..Default::default()
        }
    }

    fn run(&self, config: &ExperimentConfig) -> Result<Vec<Artifact>> {
        let mut meta = vec![window_meta(config)];
        let (rows, file_name) = match config.ensemble {
            Some(kind) => {
                meta.push(("ensemble", kind.to_string()));
                meta.push(("variance_convention", VARIANCE_CONVENTION.to_string()));
                meta.push(("sweep_value", "ensemble draw index".to_string()));
                (self.ensemble_rows(config, kind)?, format!("opent_lta_scan_L_{kind}.csv"))
            }
            None => {
                meta.push(("sweep_value", deformation_name(config.model.family).to_string()));
                (self.chain_rows(config)?, "opent_lta_scan_L.csv".to_string())
            }
        };
        let body: String =
            std::iter::once(format!("{LTA_SCAN_HEADER}\n")).chain(rows.iter().map(LtaRow::csv_line)).collect();
        Ok(vec![csv(file_name, config, &meta, &body)])
    }
}

/// Long-time averages along a sweep of the deformation parameter.
pub struct OpentLtaScanParam;

impl Recipe for OpentLtaScanParam {
    fn name(&self) -> &'static str {
        "opent_lta_scan_param"
    }

    fn summary(&self) -> &'static str {
        "numeric and analytic long-time operator entanglement along a deformation sweep"
    }

    fn defaults(&self) -> RawConfig {
        RawConfig {
            family: Some("measurement_induced".into()),
            preset: Some("chaotic".into()),
            l: Some(8),
            sweep_start: Some(0.025),
            sweep_stop: Some(2.975),
            sweep_step: Some(0.05),
            ..Default::default()
        }
    }

    fn run(&self, config: &ExperimentConfig) -> Result<Vec<Artifact>> {
        if config.model.family == ModelFamily::Hermitian {
            return Err(ExperimentError::config("family", "a deformation sweep needs a non-Hermitian family"));
        }
        let l = config.model.l;
        let bi = cut(config, l)?;
        let mut body = format!("{LTA_SCAN_HEADER}\n");
        let mut meta = vec![window_meta(config), ("sweep_value", deformation_name(config.model.family).to_string())];
        for value in config.sweep.points() {
            let params: SpinChainParams = config.model.with_deformation(value);
            let row = match decompose(config, &params)
                .and_then(|spec| lta_row(&spec, &bi, &config.lta, config.numeric, value).context(|| params.describe()))
            {
                Ok(row) => row,
                Err(ExperimentError::Model { source, .. }) if source.is_numerical() => {
                    meta.push(("skipped", format!("{value}: {source}")));
                    LtaRow::skipped(value, l)
                }
                Err(e) => return Err(e),
            };
            body.push_str(&row.csv_line());
        }
        let name = format!("opent_lta_scan_{}.csv", deformation_name(config.model.family));
        Ok(vec![csv(name, config, &meta, &body)])
    }
}
