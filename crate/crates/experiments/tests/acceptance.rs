//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Failures are reported but do not fail the process unless
//! `NHCHAIN_ACCEPTANCE_STRICT=1` is set.

use std::time::Instant;

use nhchain::evolution::{evolve_mixed, propagator, shifted_propagator, QuantumState};
use nhchain::haar::{complex_gaussian, sample_rng};
use nhchain::hamiltonians::{
    build_hamiltonian, stationary_purity_cosh_ratio, stationary_purity_sech_form, stationary_state,
};
use nhchain::lta::{analytic_lta, numeric_lta, opent_series};
use nhchain::opent::{renyi2_opent_svd, swap_contraction_purity, Bipartition};
use nhchain::quench::quench_bipartite_scaling;
use nhchain::scrambling::{heisenberg_haar_otoc, heisenberg_haar_sampled, uniform_grid};
use nhchain::spectral::{
    decompose_model, long_time_eigenspace, Diagonalizer, GeneralDiagonalizer, HermitianDiagonalizer,
};
use nhchain::{DenseOperator, Error, ModelFamily, Preset, SpinChainParams};
use nhchain_experiments::config::LtaWindow;
use nhchain_experiments::ensemble::{EnsembleKind, RandomEnsemble};
use nhchain_experiments::output::csv_table;
use nhchain_experiments::recipes::lta_row;
use nhchain_experiments::seeds::component_seed;
use nhchain_experiments::{resolve, Artifact, RawConfig, Registry};
use serde_json::Value;

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;
type Criterion = (&'static str, fn() -> Outcome);

const STRICT_ENV: &str = "NHCHAIN_ACCEPTANCE_STRICT";

fn run_recipe(name: &str, flags: RawConfig) -> Result<Vec<Artifact>, Box<dyn std::error::Error>> {
    let registry = Registry::builtin();
    let recipe = registry.get(name).ok_or("recipe missing")?;
    let config = resolve(recipe, None, &flags, None)?;
    Ok(recipe.run(&config)?)
}

fn artifact<'a>(artifacts: &'a [Artifact], file_name: &str) -> Result<&'a Artifact, String> {
    artifacts.iter().find(|a| a.file_name == file_name).ok_or_else(|| format!("{file_name} not produced"))
}

fn column(contents: &str, name: &str) -> Result<Vec<String>, String> {
    let mut lines = csv_table(contents);
    let header: Vec<&str> = lines.next().ok_or("empty table")?.split(',').collect();
    let k = header.iter().position(|h| *h == name).ok_or_else(|| format!("no column {name}"))?;
    Ok(lines.map(|line| line.split(',').nth(k).unwrap_or("").to_string()).collect())
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn min(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::INFINITY, f64::min)
}

fn hermitian_chaotic_lta() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for l in [8, 10] {
        let spec = decompose_model(&SpinChainParams::hermitian(Preset::Chaotic, l))?;
        let bi = Bipartition::half_cut(l)?;
        let numeric = numeric_lta(|t| opent_series(&spec, &bi, &[t]).map(|v| v[0]), 50.0, 150.0, 200)?;
        let target = l as f64 - 1.6;
        pass &= (numeric - target).abs() <= 0.3;
        detail.push(format!("L={l}: {numeric:.3} vs {target:.1}"));
    }
    Ok((pass, detail.join(", ")))
}

fn isospectrality() -> Outcome {
    let mut worst: f64 = 0.0;
    for l in [6, 8] {
        let reference =
            HermitianDiagonalizer.decompose(&build_hamiltonian(&SpinChainParams::hermitian(Preset::Chaotic, l))?)?;
        let mut reference: Vec<f64> = reference.eigenvalues().iter().map(|z| z.re).collect();
        reference.sort_by(f64::total_cmp);
        for beta in [0.25, 1.0, 2.0] {
            let h = build_hamiltonian(&SpinChainParams::isospectral(Preset::Chaotic, l, beta))?;
            let mut ev = h.as_mat().eigenvalues().map_err(|_| Error::EigenFailure)?;
            ev.sort_by(|a, b| a.re.total_cmp(&b.re));
            let err = ev.iter().zip(&reference).map(|(z, e)| (z.re - e).hypot(z.im)).fold(0.0, f64::max);
            worst = worst.max(err);
        }
    }
    Ok((worst <= 1e-8, format!("max eigenvalue deviation {worst:.2e} (general eigensolver)")))
}

fn stationarity() -> Outcome {
    let (mut drift, mut purity_err, mut gap): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for l in [4, 6] {
        for beta in [0.25, 1.0, 2.0] {
            let spec = decompose_model(&SpinChainParams::isospectral(Preset::Chaotic, l, beta))?;
            let ss = stationary_state(beta, l)?;
            let rho0 = QuantumState::mixed(ss.rho.clone())?;
            for t in [0.5, 5.0] {
                let rho_t = evolve_mixed(&propagator(&spec, t)?, &rho0)?;
                drift = drift.max(rho_t.as_mixed()?.max_abs_diff(&ss.rho));
            }
            let purity = (&ss.rho * &ss.rho).trace().re;
            purity_err = purity_err.max((purity - stationary_purity_cosh_ratio(beta, l)).abs());
            gap = gap.min((purity - stationary_purity_sech_form(beta, l)).abs());
        }
    }
    let pass = drift <= 1e-8 && purity_err <= 1e-12;
    Ok((
        pass,
        format!("drift {drift:.2e}, purity vs cosh-ratio form {purity_err:.2e}, smallest gap to sech form {gap:.3e}"),
    ))
}

fn lightcone_breakdown() -> Outcome {
    let flags = RawConfig { values: Some(vec![0.0, 2.0]), ..Default::default() };
    let artifacts = run_recipe("lightcone", flags)?;
    let onsets = artifact(&artifacts, "lightcone_onsets_0.csv")?;
    let distance: Vec<usize> =
        column(&onsets.contents, "distance")?.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let time: Vec<f64> =
        column(&onsets.contents, "onset_time")?.iter().map(|s| s.parse().unwrap_or(f64::INFINITY)).collect();
    let mut by_distance: Vec<(usize, f64)> = distance.into_iter().zip(time).collect();
    by_distance.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let ordered = by_distance.windows(2).all(|w| w[1].1 >= w[0].1) && by_distance.iter().all(|p| p.1.is_finite());

    let deformed = artifact(&artifacts, "lightcone_onsets_2.csv")?;
    let indices: Vec<Option<usize>> =
        column(&deformed.contents, "onset_index")?.iter().map(|s| s.parse().ok()).collect();
    let immediate = indices.iter().all(|k| matches!(k, Some(0 | 1)));
    let times: Vec<String> = by_distance.iter().map(|(d, t)| format!("{d}:{t:.1}")).collect();
    Ok((
        ordered && immediate,
        format!("beta=0 onsets by distance [{}]; beta=2 onset indices {indices:?}", times.join(" ")),
    ))
}

fn haar_points(beta: f64) -> Result<Vec<(f64, f64)>, Box<dyn std::error::Error>> {
    let flags = RawConfig { beta: Some(beta), ..Default::default() };
    let artifacts = run_recipe("haar_convergence", flags)?;
    let report: Value = serde_json::from_str(&artifact(&artifacts, "haar_convergence.json")?.contents)?;
    let points = report["points"].as_array().ok_or("no points")?;
    Ok(points
        .iter()
        .map(|p| (p["t"].as_f64().unwrap_or(f64::NAN), p["deviation_in_stderr"].as_f64().unwrap_or(f64::NAN)))
        .collect())
}

fn haar_convergence() -> Outcome {
    let hermitian = haar_points(0.0)?;
    let deformed = haar_points(1.0)?;
    let converged = hermitian.len() == 5 && hermitian.iter().all(|p| p.1 <= 3.0);
    let at_3 = deformed.iter().find(|p| p.0 == 3.0).map(|p| p.1).unwrap_or(f64::NAN);
    let devs: Vec<String> = hermitian.iter().map(|p| format!("{:.2}", p.1)).collect();
    Ok((converged && at_3 > 5.0, format!("beta=0 deviations/stderr [{}]; beta=1 at t=3: {at_3:.1}", devs.join(", "))))
}

/// Local minimum within 0.1 of gamma = 1, a rise within 0.5 after it, then monotone decay.
fn scan_shape(l: usize) -> Result<(bool, String), Box<dyn std::error::Error>> {
    let bi = Bipartition::half_cut(l)?;
    let mut points = Vec::new();
    for k in 0..60 {
        let gamma = 0.025 + 0.05 * k as f64;
        match decompose_model(&SpinChainParams::measurement(Preset::Chaotic, l, gamma)) {
            Ok(spec) => points.push((gamma, analytic_lta(&spec, &long_time_eigenspace(&spec, None), &bi)?.renyi2)),
            Err(e) if e.is_numerical() => continue,
            Err(e) => return Err(e.into()),
        }
    }
    let local_min = (1..points.len() - 1)
        .filter(|&k| (points[k].0 - 1.0).abs() <= 0.1)
        .filter(|&k| points[k].1 < points[k - 1].1 && points[k].1 < points[k + 1].1)
        .min_by(|&a, &b| points[a].1.total_cmp(&points[b].1));
    let Some(m) = local_min else {
        return Ok((false, format!("L={l}: no local minimum near gamma=1")));
    };
    let (gamma_min, value_min) = points[m];
    let peak = (m + 1..points.len())
        .filter(|&k| points[k].0 <= gamma_min + 0.5)
        .max_by(|&a, &b| points[a].1.total_cmp(&points[b].1))
        .ok_or("no points after the minimum")?;
    let rises = points[peak].1 > 1.5 * value_min;
    let tail = &points[peak..];
    let decays = tail.windows(2).all(|w| w[1].1 <= w[0].1) && tail[tail.len() - 1].1 < 0.5 * points[peak].1;
    Ok((
        rises && decays,
        format!(
            "L={l}: min {value_min:.3} at {gamma_min:.3}, peak {:.3} at {:.3}, end {:.3}",
            points[peak].1,
            points[peak].0,
            tail[tail.len() - 1].1
        ),
    ))
}

fn analytic_vs_numeric() -> Outcome {
    let long = LtaWindow { t_min: 5e4, t_max: 1.5e5, points: 400 };
    let short = LtaWindow { t_min: 50.0, t_max: 150.0, points: 200 };
    let mut pass = true;
    let mut detail = Vec::new();
    for (preset, gamma) in [(Preset::Chaotic, 0.5), (Preset::Chaotic, 1.3), (Preset::Classical, 0.2)] {
        for l in [6, 8] {
            let spec = decompose_model(&SpinChainParams::measurement(preset, l, gamma))?;
            let bi = Bipartition::half_cut(l)?;
            let row = lta_row(&spec, &bi, &long, true, gamma)?;
            let default_window = lta_row(&spec, &bi, &short, true, gamma)?.numeric;
            pass &= (row.analytic - row.numeric).abs() <= 0.3;
            detail.push(format!(
                "{} g={gamma} L={l}: analytic {:.3} numeric {:.3} ([50,150]: {default_window:.3}{})",
                preset.as_str(),
                row.analytic,
                row.numeric,
                if row.nrc_violated { ", NRC flagged" } else { "" }
            ));
        }
    }
    for l in [6, 8] {
        let (ok, text) = scan_shape(l)?;
        pass &= ok;
        detail.push(text);
    }
    Ok((pass, detail.join("; ")))
}

fn spectral_transitions() -> Outcome {
    let artifacts = run_recipe("spectrum_flow", RawConfig::default())?;
    let report: Value = serde_json::from_str(&artifact(&artifacts, "spectrum_transitions.json")?.contents)?;
    let onsets: Vec<(f64, f64)> = report["exceptional_onsets"]
        .as_array()
        .ok_or("no onsets")?
        .iter()
        .map(|o| (o["lower"].as_f64().unwrap_or(f64::NAN), o["upper"].as_f64().unwrap_or(f64::NAN)))
        .collect();
    let at_one = onsets.iter().any(|&(lo, hi)| lo <= 1.0 && 1.0 <= hi);
    let near_1_2 = onsets.iter().any(|&(lo, hi)| ((lo + hi) / 2.0 - 1.2).abs() <= 0.05);

    let degeneracy = |preset, gamma| -> Result<usize, Error> {
        let spec = decompose_model(&SpinChainParams::measurement(preset, 6, gamma))?;
        Ok(long_time_eigenspace(&spec, None).degeneracy())
    };
    let chaotic = degeneracy(Preset::Chaotic, 1.3)?;
    let integrable = degeneracy(Preset::Integrable, 1.1)?;
    let intervals: Vec<String> = onsets.iter().map(|(a, b)| format!("[{a:.3}, {b:.3}]")).collect();
    Ok((
        at_one && near_1_2 && chaotic == 1 && integrable > 1,
        format!("onsets {}; degeneracy chaotic g=1.3: {chaotic}, integrable g=1.1: {integrable}", intervals.join(" ")),
    ))
}

fn purification_quench() -> Outcome {
    let grid = uniform_grid(60.0, 0.25);
    let saturations = |gamma| -> Result<Vec<f64>, Error> {
        let runs =
            quench_bipartite_scaling(&SpinChainParams::measurement(Preset::Chaotic, 6, gamma), &[6, 8, 10], &grid)?;
        Ok(runs.iter().map(|r| r.saturation(r.params.l / 2).unwrap_or(f64::NAN)).collect())
    };
    let strong = saturations(2.0)?;
    let weak = saturations(0.25)?;
    let spread = max(strong.iter().copied()) - min(strong.iter().copied());
    let increasing = weak.windows(2).all(|w| w[1] > w[0]);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", ");
    Ok((
        spread < 0.2 && increasing,
        format!("g=2 saturation [{}] spread {spread:.3}; g=0.25 [{}]", fmt(&strong), fmt(&weak)),
    ))
}

fn oracle_equivalences() -> Outcome {
    let mut opent_err: f64 = 0.0;
    for k in 0..50u64 {
        let l = 2 + (k as usize % 5);
        let d = 1 << l;
        let g = complex_gaussian(d, d, &mut sample_rng(7, k));
        let x = DenseOperator::from_fn(d, |i, j| g[(i, j)]);
        let sites_a: Vec<usize> = (1..=l).filter(|s| (s + k as usize).is_multiple_of(2)).collect();
        let sites_a = if sites_a.is_empty() || sites_a.len() == l { vec![1] } else { sites_a };
        let bi = Bipartition::new(l, &sites_a)?;
        let svd = renyi2_opent_svd(&x, &bi)?;
        let swap = -swap_contraction_purity(&x, &bi)?.log2();
        opent_err = opent_err.max((svd - swap).abs());
    }

    let (mut biorth, mut recon, mut count, mut rejected): (f64, f64, usize, usize) = (0.0, 0.0, 0, 0);
    let l = 6;
    for preset in Preset::ALL {
        let herm = SpinChainParams::hermitian(preset, l);
        let h = build_hamiltonian(&herm)?;
        let spec = HermitianDiagonalizer.decompose(&h)?;
        biorth = biorth.max(spec.biorthonormality_residual());
        recon = recon.max(spec.reconstruction_residual(&h));
        count += 1;
        for family in [ModelFamily::MeasurementInduced, ModelFamily::Isospectral] {
            for k in 0..200 {
                let params = SpinChainParams { family, ..herm.clone() }.with_deformation(0.005 + 0.01 * k as f64);
                let h = build_hamiltonian(&params)?;
                match GeneralDiagonalizer.decompose(&h) {
                    Ok(spec) => {
                        biorth = biorth.max(spec.biorthonormality_residual());
                        recon = recon.max(spec.reconstruction_residual(&h));
                        count += 1;
                    }
                    Err(Error::NearDefective { .. }) => rejected += 1,
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }

    let bi = Bipartition::contiguous(6, 2)?;
    let spec = decompose_model(&SpinChainParams::measurement(Preset::Chaotic, 6, 0.8))?;
    let u = shifted_propagator(&spec, 1.5)?;
    let exact = heisenberg_haar_otoc(&u, &bi)?;
    let mc = heisenberg_haar_sampled(&u, &bi, 10_000, 2024)?;
    let mc_ok = (mc.mean - exact).abs() <= 3.0 * mc.stderr;

    let pass = opent_err <= 1e-8 && biorth <= 1e-8 && recon <= 1e-8 && mc_ok;
    Ok((
        pass,
        format!(
            "svd vs swap {opent_err:.1e} (50 operators); {count} decompositions: biorthonormality {biorth:.1e}, \
             reconstruction {recon:.1e} ({rejected} near-defective points refused); Heisenberg {exact:.4} vs MC {:.4} +- {:.4}",
            mc.mean, mc.stderr
        ),
    ))
}

fn ensemble_means(
    kind: EnsembleKind,
    lengths: &[usize],
    draws: u64,
) -> Result<Vec<(f64, f64)>, Box<dyn std::error::Error>> {
    let window = LtaWindow { t_min: 50.0, t_max: 150.0, points: 200 };
    let solver: Box<dyn Diagonalizer> = match kind {
        EnsembleKind::Gue => Box::new(HermitianDiagonalizer),
        EnsembleKind::Ginibre => Box::new(GeneralDiagonalizer),
    };
    let mut out = Vec::new();
    for &l in lengths {
        let ensemble = RandomEnsemble::new(kind, 1 << l, component_seed(0, &format!("acceptance/{kind}/L={l}")));
        let bi = Bipartition::half_cut(l)?;
        let (mut analytic, mut numeric) = (0.0, 0.0);
        for draw in 0..draws {
            let spec = solver.decompose(&ensemble.sample(draw))?;
            let row = lta_row(&spec, &bi, &window, l <= 8, draw as f64)?;
            analytic += row.analytic;
            numeric += row.numeric;
        }
        out.push((analytic / draws as f64, numeric / draws as f64));
    }
    Ok(out)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn gue_scaling() -> Outcome {
    let lengths = [4, 6, 8, 10];
    let gue = ensemble_means(EnsembleKind::Gue, &lengths, 3)?;
    let ginibre = ensemble_means(EnsembleKind::Ginibre, &lengths, 3)?;
    let xs: Vec<f64> = lengths.iter().map(|&l| l as f64).collect();
    let ys: Vec<f64> = gue.iter().map(|p| p.0).collect();
    let mu = slope(&xs, &ys);
    let worst_gap = max(gue.iter().zip(&ginibre).map(|(a, b)| (a.0 - b.0).abs()));
    let fmt = |v: &[(f64, f64)]| {
        v.iter()
            .map(|(a, n)| if n.is_nan() { format!("{a:.2}") } else { format!("{a:.2}/{n:.2}") })
            .collect::<Vec<_>>()
            .join(", ")
    };
    Ok((
        (0.8..=1.1).contains(&mu) && worst_gap <= 0.3,
        format!(
            "GUE slope {mu:.3}; analytic/numeric GUE [{}], Ginibre [{}]; max |GUE - Ginibre| {worst_gap:.2}",
            fmt(&gue),
            fmt(&ginibre)
        ),
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("hermitian_chaotic_lta", hermitian_chaotic_lta),
        ("isospectrality", isospectrality),
        ("stationarity", stationarity),
        ("lightcone_breakdown", lightcone_breakdown),
        ("haar_convergence", haar_convergence),
        ("analytic_vs_numeric_lta", analytic_vs_numeric),
        ("spectral_transitions", spectral_transitions),
        ("purification_quench", purification_quench),
        ("oracle_equivalences", oracle_equivalences),
        ("gue_scaling", gue_scaling),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        failures += usize::from(!pass);
        println!(
            "{} {:>2} {name}: {detail} [{:.0} s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 && std::env::var(STRICT_ENV).is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
