//! Generates `include/linkform.h` from the annotated `extern "C"` surface.
//! cbindgen only rewrites the file when its contents change, so the
//! committed header stays in lockstep with the source without churning
//! rebuilds.

fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("cargo sets CARGO_MANIFEST_DIR");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    cbindgen::generate(&crate_dir)
        .expect("cbindgen parses the crate")
        .write_to_file(format!("{crate_dir}/include/linkform.h"));
}
