// Drive the experiment runner from code: tweak a spec, run it, and read the
// manifest back. Output goes to $CONDLIN_OUT or a temporary directory.

use condlin::experiment::{run, ExperimentId, ExperimentSpec, Manifest, MethodId};

fn main() {
    let out = std::env::var_os("CONDLIN_OUT")
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("condlin-run-experiment"));
    let mut spec = ExperimentSpec::new(ExperimentId::Hh, &out);
    spec.methods = vec![MethodId::ExpEuler, MethodId::Strang];
    spec.steps = vec![0.05];
    spec.write_trajectories = false;

    let report = run(&spec).unwrap();
    for t in &report.tables {
        println!("{}:\n{}", t.display(), std::fs::read_to_string(t).unwrap());
    }
    let manifest = Manifest::read(&report.manifest).unwrap();
    println!("{} runs recorded by version {}", manifest.runs.len(), manifest.library_version);
}
