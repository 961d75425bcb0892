use std::env;
use std::path::PathBuf;

// Writes the generated header to OUT_DIR. The copy under include/ is the one
// shipped; a test checks that the two agree.
fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let out = PathBuf::from(env::var("OUT_DIR").unwrap()).join("twolocal.h");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml")).unwrap_or_default();
    match cbindgen::Builder::new().with_crate(&crate_dir).with_config(config).generate() {
        Ok(bindings) => {
            bindings.write_to_file(&out);
        }
        Err(e) => {
            println!("cargo:warning=cbindgen failed ({e}); using include/twolocal.h");
            std::fs::copy(crate_dir.join("include/twolocal.h"), &out).unwrap();
        }
    }
}
