//! Harness integration: preset structure, analytic-only runs, histograms,
//! and determinism of full experiment outputs.

use rvqcap::harness::{run_experiment, ExperimentConfig, Preset};

#[test]
fn analytic_only_run_keeps_asymptotic_columns() {
    let mut config = ExperimentConfig::preset(Preset::Fig2, 7);
    config.trials = Some(0);
    let result = run_experiment(&config).unwrap();
    let series = result.series_by_name("rho10").unwrap();
    assert_eq!(series.rows.len(), 4);
    for row in &series.rows {
        assert!(row.sim_mean.is_none());
        assert!(row.sim_stderr.is_none());
        assert!(row.asymptotic.is_some());
        assert_eq!(row.trials, 0);
    }
}

#[test]
fn projection_preset_emits_histograms() {
    let mut config = ExperimentConfig::preset(Preset::Fig1, 7);
    config.trials = Some(2000);
    let result = run_experiment(&config).unwrap();
    assert_eq!(result.series.len(), 2);
    assert_eq!(result.histograms.len(), 6);
    for h in &result.histograms {
        assert_eq!(h.histogram.counts.len(), 128);
        assert_eq!(h.histogram.total(), 2000);
    }
    // the selected projection tightens toward 1 - 2^-2 with feedback
    let fed = result.series_by_name("bbar2").unwrap();
    let top = fed.rows.last().unwrap();
    assert_eq!(top.b_used, 40);
    assert!((top.sim_mean.unwrap() - 0.75).abs() < 0.05);
}

#[test]
fn beamforming_presets_track_their_limits() {
    let mut config = ExperimentConfig::preset(Preset::Fig3, 11);
    config.trials = Some(60);
    let result = run_experiment(&config).unwrap();
    // four series: two sizes x two SNRs
    assert_eq!(result.series.len(), 4);
    let tall = result.series_by_name("16x24_rho10").unwrap();
    for row in &tall.rows {
        let dev = (row.sim_mean.unwrap() - row.asymptotic.unwrap()).abs();
        assert!(dev < 0.3, "sweep {}: dev {dev}", row.sweep);
    }
}

#[test]
fn gaussian_preset_rows_have_both_columns() {
    let mut config = ExperimentConfig::preset(Preset::Fig5, 5);
    config.trials = Some(50);
    let result = run_experiment(&config).unwrap();
    for name in ["rho-5", "rho0", "rho5"] {
        let series = result.series_by_name(name).unwrap();
        assert_eq!(series.rows.len(), 9);
        for row in &series.rows {
            assert!(row.sim_mean.is_some() && row.asymptotic.is_some());
            // realized normalized feedback is what the row reports
            assert_eq!(row.sweep, row.b_used as f64 / 16.0);
        }
    }
}

#[test]
fn rerun_reproduces_rows_exactly() {
    let mut config = ExperimentConfig::preset(Preset::Fig5, 5);
    config.trials = Some(30);
    let a = run_experiment(&config).unwrap();
    let b = run_experiment(&config).unwrap();
    assert_eq!(a.series, b.series);
    assert_eq!(a.metadata.config_hash, b.metadata.config_hash);
}

#[test]
fn simulated_rate_grows_with_feedback_within_noise() {
    let mut config = ExperimentConfig::preset(Preset::Fig5, 13);
    config.trials = Some(300);
    let result = run_experiment(&config).unwrap();
    for series in result.series.iter() {
        let rows = &series.rows;
        for pair in rows.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.b_used == b.b_used {
                continue;
            }
            let slack = 2.0 * (a.sim_stderr.unwrap() + b.sim_stderr.unwrap());
            assert!(
                b.sim_mean.unwrap() >= a.sim_mean.unwrap() - slack,
                "{}: rate fell from b={} to b={}",
                series.name,
                a.b_used,
                b.b_used
            );
        }
    }
}
