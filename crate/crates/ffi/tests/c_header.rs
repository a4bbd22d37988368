//! Compiles a C program against the generated header and the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "gstable.h"

int main(int argc, char **argv) {
    FILE *f = fopen(argv[1], "rb");
    static char buf[1 << 20];
    size_t n = fread(buf, 1, sizeof buf - 1, f);
    buf[n] = 0;
    fclose(f);

    GstableProblem *problem = NULL;
    if (gstable_problem_from_json(buf, &problem) != GSTABLE_STATUS_OK) return 10;
    GstableReport *report = NULL;
    if (gstable_run(problem, &report) != GSTABLE_STATUS_OK) return 11;
    bool passed = false;
    if (gstable_verify(report, &passed, NULL) != GSTABLE_STATUS_OK || !passed) return 12;
    char *json = NULL;
    if (gstable_report_to_json(report, &json) != GSTABLE_STATUS_OK) return 13;
    printf("%s\n", strstr(json, "\"schema\":\"gstable.report/1\"") ? "schema ok" : "schema missing");
    gstable_string_free(json);
    gstable_report_free(report);
    gstable_problem_free(problem);

    if (gstable_problem_from_json("[", &problem) != GSTABLE_STATUS_JSON) return 14;
    printf("error: %s\n", gstable_last_error());
    return 0;
}
"#;

/// `target/<profile>`, found from the test binary in `target/<profile>/deps`.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = profile_dir().join("libgstable_ffi.a");
    assert!(lib.exists(), "{} was not built", lib.display());
    let dir = std::env::temp_dir().join(format!("gstable-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let bin = dir.join("main");
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let cc = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .expect("a C compiler");
    assert!(cc.status.success(), "{}", String::from_utf8_lossy(&cc.stderr));

    let inst = gstable::corpus::instances().into_iter().find(|i| i.name == "a4-v4-perm-gf2").unwrap();
    let problem = dir.join("problem.json");
    std::fs::write(&problem, serde_json::to_string(&inst.spec).unwrap()).unwrap();
    let run = Command::new(&bin).arg(&problem).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert_eq!(run.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("schema ok"), "{stdout}");
    assert!(stdout.contains("error: json"), "{stdout}");
}
