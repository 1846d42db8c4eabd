use std::collections::BTreeSet;

use super::*;

#[test]
fn registry_names_are_unique() {
    let r = registry();
    assert_eq!(r.len(), 9);
    let names: BTreeSet<&str> = r.iter().map(|e| e.name).collect();
    assert_eq!(names.len(), 9);
    assert!(find("loc-ratio").is_ok());
    assert!(find("nope").is_err());
}

#[test]
fn every_preset_resolves() {
    for r in registry() {
        for p in [Preset::Quick, Preset::Full] {
            r.resolve(p, &toml::Table::new()).unwrap_or_else(|e| panic!("{} {:?}: {e}", r.name, p));
        }
    }
}

#[test]
fn unknown_and_mistyped_parameters_are_rejected() {
    let spec = ExperimentSpec::new("loc-ratio", Preset::Quick).with_param("lambda_max", 3);
    assert!(matches!(run_in_memory(&spec), Err(Error::InvalidArgument { .. })));
    let spec = ExperimentSpec::new("loc-ratio", Preset::Quick).with_param("s", "one");
    assert!(matches!(run_in_memory(&spec), Err(Error::InvalidArgument { .. })));
    let spec = ExperimentSpec::new("loc-ratio", Preset::Quick).with_param("delta", 1.5);
    assert!(matches!(run_in_memory(&spec), Err(Error::InvalidArgument { .. })));
    let spec = ExperimentSpec::new("strichartz", Preset::Quick).with_param("p", 4.0);
    assert!(run_in_memory(&spec).is_err());
}

#[test]
fn invalid_spec_creates_no_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    let spec = ExperimentSpec::new("bona-smith", Preset::Quick).with_param("s", 1.0);
    assert!(run_to_dir(&spec, &dir).is_err());
    assert!(!dir.exists());
}

#[test]
fn quick_runs_are_bit_identical_and_reports_idempotent() {
    let tmp = tempfile::tempdir().unwrap();
    for name in ["loc-ratio", "kato-ponce"] {
        let spec = ExperimentSpec::new(name, Preset::Quick);
        let (a, _) = run_to_dir(&spec, &tmp.path().join(format!("{name}-a"))).unwrap();
        let (b, _) = run_to_dir(&spec, &tmp.path().join(format!("{name}-b"))).unwrap();
        assert!(!a.partial && !b.partial);
        for e in &a.series {
            assert_eq!(a.checksums[&e.file], b.checksums[&e.file], "{name} {}", e.file);
        }
        let d = tmp.path().join(format!("{name}-a"));
        let before: Vec<String> = render_plots(&d, &a).unwrap().iter().map(|f| std::fs::read_to_string(d.join(f)).unwrap()).collect();
        let again: Vec<String> = render_plots(&d, &a).unwrap().iter().map(|f| std::fs::read_to_string(d.join(f)).unwrap()).collect();
        assert_eq!(before, again);
        assert_eq!(RunManifest::read(&d).unwrap().experiment, name);
    }
}

#[test]
fn seed_changes_survey_samples() {
    let a = run_in_memory(&ExperimentSpec { seed: 1, ..ExperimentSpec::new("kato-ponce", Preset::Quick) }).unwrap();
    let b = run_in_memory(&ExperimentSpec { seed: 2, ..ExperimentSpec::new("kato-ponce", Preset::Quick) }).unwrap();
    assert_ne!(a.series[0].rows, b.series[0].rows);
}

#[test]
fn budget_picks_largest_fitting_candidate() {
    assert_eq!(largest_within_budget(&[16.0, 64.0, 32.0], 100.0, |x| x), Some(64.0));
    assert_eq!(largest_within_budget(&[16.0, 64.0, 32.0], 40.0, |x| x), Some(32.0));
    assert_eq!(largest_within_budget(&[16.0], 1.0, |x| x), None);
}

#[test]
fn sup_rel_dev_oracle() {
    assert_eq!(sup_rel_dev(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
    assert!((sup_rel_dev(&[1.0, 2.2], &[1.0, 2.0]) - 0.1).abs() < 1e-12);
}

#[test]
fn loc_ratio_quick_passes() {
    let out = run_in_memory(&ExperimentSpec::new("loc-ratio", Preset::Quick).with_param("tolerance", 0.05)).unwrap();
    assert!(out.all_pass(), "{:?}", out.failures());
}

#[test]
fn mollified_band_limited_data_is_unchanged() {
    use crate::spectral_core::{make_grid, mollify, Field1D};
    let g = make_grid(256, std::f64::consts::TAU).unwrap();
    let u = Field1D::from_fn_real(&g, |x| x.sin() + 0.3 * (4.0 * x).cos());
    for e in [1e-1, 3e-2, 1e-2, 3e-3] {
        assert!(mollify(&u, e).unwrap().sub(&u).unwrap().max_abs() < 1e-14);
    }
}

#[test]
fn quantile_oracle() {
    let v = [1.0, 2.0, 3.0, 4.0, 5.0];
    assert_eq!(surveys::quantile(&v, 0.5), 3.0);
    assert_eq!(surveys::quantile(&v, 0.0), 1.0);
    assert_eq!(surveys::quantile(&v, 1.0), 5.0);
    assert!((surveys::quantile(&v, 0.1) - 1.4).abs() < 1e-12);
}
