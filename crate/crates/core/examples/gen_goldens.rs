//! Regenerates the golden files under `tests/data/`.
//!
//! Run with `cargo run -p benford-audit --example gen_goldens` after any
//! intentional change to the mixture sampler or serialization, and commit
//! the result. The byte-identity acceptance check compares against these.

use std::fs;
use std::path::Path;

use benford_audit::{audit, cli, modone, Base};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data");
    fs::create_dir_all(&dir).unwrap();
    let b10 = Base::new(10).unwrap();

    let spec = audit::randomized_mixture(20, 20_000, 42);
    fs::write(
        dir.join("mixture_spec_seed42.json"),
        cli::to_json_text(&spec),
    )
    .unwrap();

    let trace = audit::mixture_experiment(&spec, b10).unwrap();
    let last = trace.rows.last().unwrap();
    assert!(
        last.ks < 0.05,
        "final pooled KS {} spoils the demonstration",
        last.ks
    );
    fs::write(
        dir.join("mixture_trace_seed42.csv"),
        cli::trace_csv(&trace.rows).unwrap(),
    )
    .unwrap();

    let cdf = modone::uniform_phase_cdf(0.25, b10).unwrap();
    fs::write(dir.join("uc_theta025_cdf.json"), cdf.to_json()).unwrap();

    println!("goldens written to {}", dir.display());
    println!("final pooled ks {:.6} chisq {:.3}", last.ks, last.chisq);
}
