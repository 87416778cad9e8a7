//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r##"
#include <stdio.h>
#include <string.h>
#include "cfml.h"

int main(void) {
    CfmlGraph *g = NULL;
    if (cfml_graph_parse("# 2x3 grid\n6 7\n0 1\n1 2\n3 4\n4 5\n0 3\n1 4\n2 5\n", &g) != CFML_STATUS_OK) return 1;
    CfmlLabels *labels = NULL;
    if (cfml_encode(g, CFML_LABEL_KIND_DISTANCE, false, &labels) != CFML_STATUS_OK) return 2;
    uint32_t d = 0;
    if (cfml_query(labels, 0, 5, &d) != CFML_STATUS_OK || d != 3) return 3;
    uint8_t *buf = NULL;
    size_t len = 0;
    if (cfml_labels_save(labels, CFML_FORMAT_BINARY, &buf, &len) != CFML_STATUS_OK) return 4;
    CfmlLabels *back = NULL;
    if (cfml_labels_load(buf, len, &back) != CFML_STATUS_OK) return 5;
    cfml_buffer_free(buf, len);
    if (cfml_query(back, 5, 0, &d) != CFML_STATUS_OK || d != 3) return 6;
    if (cfml_query(back, 0, 6, &d) != CFML_STATUS_INVALID_VERTEX) return 7;
    if (strstr(cfml_last_error(), "out of range") == NULL) return 8;
    cfml_labels_free(back);
    cfml_labels_free(labels);
    cfml_graph_free(g);
    printf("ok\n");
    return 0;
}
"##;

fn target_dir() -> PathBuf {
    // .../target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libcfml_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let work = std::env::temp_dir().join(format!("cfml-c-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("smoke.c");
    let exe = work.join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c11", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status();
    let Ok(status) = status else {
        eprintln!("skipping: no C compiler ({cc})");
        return;
    };
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_dir_all(&work);
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
