//! Run a registered experiment into a directory, then read the manifest back.
use displab::experiments::{registry, run_to_dir, ExperimentSpec, Preset, RunManifest};

fn main() -> displab::Result<()> {
    for r in registry() {
        println!("{:<24} {}", r.name, r.description);
    }
    let dir = std::env::temp_dir().join("displab-example-loc-ratio");
    let spec = ExperimentSpec::new("loc-ratio", Preset::Quick).with_param("alphas", vec![0.0, 0.5, 1.0]);
    let (m, out) = run_to_dir(&spec, &dir)?;
    println!("pass={} files={}", m.pass, m.checksums.len());
    for c in &out.checks {
        println!("  {} {} {:.3e}", if c.pass { "ok" } else { "FAIL" }, c.name, c.value);
    }
    let back = RunManifest::read(&dir)?;
    println!("manifest reread: {} partial={}", back.experiment, back.partial);
    Ok(())
}
