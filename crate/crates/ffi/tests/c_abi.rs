//! Compiles `tests/c/smoke.c` against the generated header and the static
//! library, then runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

fn static_lib() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    [deps, deps.parent().unwrap()]
        .iter()
        .map(|d| d.join("libhomop_ffi.a"))
        .find(|p| p.exists())
        .expect("libhomop_ffi.a next to the test binary")
}

#[test]
fn c_program_links_and_runs() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = Command::new(&cc)
        .arg("-std=c99")
        .arg("-D_DEFAULT_SOURCE")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(root.join("include"))
        .arg(root.join("tests/c/smoke.c"))
        .arg(static_lib())
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .output()
        .expect("C compiler runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let s = String::from_utf8(run.stdout).unwrap();
    assert_eq!(s.trim(), format!("homop {} ok", env!("CARGO_PKG_VERSION")));
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/homop.h")).unwrap();
    for f in [
        "homop_version",
        "homop_last_error_message",
        "homop_status_name",
        "homop_kernel_eval",
        "homop_riesz_constant",
        "homop_config_new",
        "homop_config_set",
        "homop_config_free",
        "homop_line_fn_new",
        "homop_line_fn_free",
        "homop_periodic_fn_new",
        "homop_periodic_fn_free",
        "homop_hilbert_line",
        "homop_k1_apply",
        "homop_k_apply",
    ] {
        assert!(h.contains(&format!("{f}(")), "{f} missing");
    }
    assert!(h.contains("typedef struct HomopLineFn HomopLineFn;"));
    assert!(h.contains("HOMOP_STATUS_OK = 0"));
}
