#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn iepoly(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_iepoly"))
        .args(args)
        .env_remove("IEPOLY_MEMORY_CAP")
        .env_remove("IEPOLY_ORACLE_CAP")
        .env_remove("IEPOLY_SUBSET_CAP")
        .env_remove("IEPOLY_MANTISSA_BITS")
        .env_remove("IEPOLY_FORMAT")
        .output()
        .expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
        code: out.status.code().unwrap_or(-1),
    }
}

pub struct GoldenCase {
    pub name: String,
    pub args: Vec<String>,
    dir: PathBuf,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

/// Each case is `NAME.cmd` (whitespace-separated arguments) next to the
/// expected `NAME.stdout` and `NAME.code`.
pub fn golden_cases() -> Vec<GoldenCase> {
    let dir = golden_dir();
    let mut cases: Vec<GoldenCase> = fs::read_dir(&dir)
        .expect("golden directory")
        .filter_map(|e| {
            let path = e.ok()?.path();
            (path.extension()? == "cmd").then_some(path)
        })
        .map(|path| GoldenCase {
            name: path.file_stem().unwrap().to_string_lossy().into_owned(),
            args: fs::read_to_string(&path)
                .unwrap()
                .split_whitespace()
                .map(String::from)
                .collect(),
            dir: dir.clone(),
        })
        .collect();
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    cases
}

impl GoldenCase {
    pub fn run(&self) -> Run {
        let args: Vec<&str> = self.args.iter().map(String::as_str).collect();
        iepoly(&args)
    }

    /// `Err` describes the first difference from the recorded output.
    /// With `IEPOLY_BLESS=1` the recorded files are rewritten instead.
    pub fn check(&self) -> Result<(), String> {
        let run = self.run();
        let stdout_path = self.dir.join(format!("{}.stdout", self.name));
        let code_path = self.dir.join(format!("{}.code", self.name));
        if std::env::var_os("IEPOLY_BLESS").is_some() {
            fs::write(&stdout_path, &run.stdout).unwrap();
            fs::write(&code_path, format!("{}\n", run.code)).unwrap();
            return Ok(());
        }
        let want_code: i32 = fs::read_to_string(&code_path)
            .map_err(|e| format!("{}: {e}", code_path.display()))?
            .trim()
            .parse()
            .map_err(|e| format!("{}: {e}", code_path.display()))?;
        let want_stdout = fs::read_to_string(&stdout_path)
            .map_err(|e| format!("{}: {e}", stdout_path.display()))?;
        if run.code != want_code {
            return Err(format!(
                "{}: exit {} (expected {want_code}); stderr: {}",
                self.name, run.code, run.stderr
            ));
        }
        if run.stdout != want_stdout {
            return Err(format!("{}: stdout differs from golden file", self.name));
        }
        let again = self.run();
        if again.stdout != run.stdout || again.code != run.code {
            return Err(format!("{}: second run is not byte-identical", self.name));
        }
        Ok(())
    }
}
