use std::env;
use std::path::PathBuf;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include").join("benford_audit.h");
    // regenerate the committed header; on failure (e.g. a vendored build
    // without cbindgen's full toolchain) the committed copy stays in use
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(header);
        }
        Err(err) => {
            println!("cargo:warning=cbindgen skipped: {err}");
        }
    }
}
