//! Shared helpers for black-box tests of the `effsec` binary.

// Each integration-test target compiles this module separately and not
// every target uses every helper.
#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

/// Fresh scratch directory per test, under the target-specific temp dir.
pub fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("effsec-cli-test-{tag}"));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// Run the compiled binary with the given arguments.
pub fn effsec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_effsec"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

pub fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

pub fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

pub fn exit_code(output: &Output) -> i32 {
    output
        .status
        .code()
        .expect("no exit code; killed by signal?")
}
