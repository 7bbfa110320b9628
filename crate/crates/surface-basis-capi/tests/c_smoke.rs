//! Compiles and runs a small C program against the generated header and
//! the static library, proving the ABI from the C side.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "surface_basis.h"

int main(void) {
    const char *theta =
        "v 2\n"
        "e 0 0 1 1 0\n"
        "e 1 0 1 2 0\n"
        "e 2 0 1 3 0\n"
        "rot 0 0- 1- 2-\n"
        "rot 1 2+ 1+ 0+\n"
        "bnd 0-\n";
    sb_graph *g = NULL;
    if (sb_graph_parse_text(theta, &g) != SB_OK) return 1;
    sb_stats stats;
    if (sb_graph_stats(g, &stats) != SB_OK) return 2;
    if (stats.vertices != 2 || stats.edges != 3 || stats.genus != 0) return 3;
    sb_basis *b = NULL;
    if (sb_minimum_cycle_basis(g, &b) != SB_OK) return 4;
    if (sb_basis_cycle_count(b) != 2) return 5;
    if (sb_basis_total_weight(b) != 7.0) return 6;
    uint32_t edges[8];
    size_t written = 0;
    if (sb_basis_cycle_edges(b, 0, edges, 8, &written) != SB_OK) return 7;
    if (written != 2 || edges[0] != 0 || edges[1] != 1) return 8;
    int ok = 0;
    if (sb_basis_verify(g, b, 0, &ok) != SB_OK || !ok) return 9;
    sb_basis_free(b);
    sb_graph_free(g);
    printf("c smoke ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    if !include.join("surface_basis.h").exists() {
        panic!("generated header missing; build script should have produced it");
    }
    // The static library lands next to this test binary's directory.
    let mut lib_dir = PathBuf::from(std::env::current_exe().unwrap());
    lib_dir.pop(); // test binary
    lib_dir.pop(); // deps -> profile dir
    let static_lib = lib_dir.join("libsurface_basis_capi.a");
    if !static_lib.exists() {
        panic!("static library not found at {}", static_lib.display());
    }
    let work = std::env::temp_dir().join(format!("sb-c-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let c_file = work.join("smoke.c");
    std::fs::write(&c_file, C_PROGRAM).unwrap();
    let exe = work.join("smoke");
    let compile = Command::new("cc")
        .arg(&c_file)
        .arg("-I")
        .arg(&include)
        .arg(&static_lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "compile failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = Command::new(&exe).output().expect("smoke binary runs");
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
    assert!(String::from_utf8_lossy(&run.stdout).contains("c smoke ok"));
}
