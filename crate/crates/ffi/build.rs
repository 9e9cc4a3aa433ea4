//! Generates the C header for the isodef ABI with cbindgen.

use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("ISODEF_H".into()),
        header: Some(
            "/* C interface to the isodef exact deformation-theory workbench. */".into(),
        ),
        cpp_compat: true,
        documentation: true,
        ..Default::default()
    };

    let header = crate_dir.join("include").join("isodef.h");
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("cbindgen header generation failed")
        .write_to_file(header);
}
