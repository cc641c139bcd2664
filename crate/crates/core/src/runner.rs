//! Candidate execution against unit tests, with per-language toolchains,
//! fresh working directories, timeouts, and error classification.

use crate::corpus::TranslationPair;
use crate::error::{Error, Result};
use crate::lang::Language;
use crate::postproc::LanguageProfile;
use regex::Regex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};

const RUNNER_DATA: &str = include_str!("../data/runners.json");
const CAPTURE_CAP: usize = 1 << 20; // 1 MiB per stream

/// Execution status. Timeout is reported separately and folded into the
/// runtime group for six-type reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusKind {
    Pass,
    TypeError,
    UndeclaredError,
    AssertionError,
    RuntimeError,
    OtherSyntaxError,
    Unhelpful,
    Timeout,
}

/// Coarse grouping used by conversion matrices and error summaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusGroup {
    Pass,
    Semantic,
    Syntactic,
    Runtime,
}

impl StatusKind {
    pub fn group(self) -> StatusGroup {
        match self {
            StatusKind::Pass => StatusGroup::Pass,
            StatusKind::AssertionError | StatusKind::Unhelpful => StatusGroup::Semantic,
            StatusKind::TypeError
            | StatusKind::UndeclaredError
            | StatusKind::OtherSyntaxError => StatusGroup::Syntactic,
            StatusKind::RuntimeError | StatusKind::Timeout => StatusGroup::Runtime,
        }
    }
}

/// Result of executing one candidate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExecOutcome {
    pub status: StatusKind,
    pub stdout: String,
    pub stderr: String,
    pub duration_s: f64,
    pub exit_code: Option<i32>,
}

#[derive(Debug, Clone, Deserialize)]
struct RunnerRecord {
    language: Language,
    file_name: String,
    #[serde(default)]
    build_cmd: Option<Vec<String>>,
    run_cmd: Vec<String>,
    check_cmd: Vec<String>,
    timeout_s: f64,
    error_patterns: Vec<(StatusKind, String)>,
}

/// Command templates and the ordered error-pattern table for one language.
#[derive(Debug, Clone)]
pub struct RunnerSpec {
    pub language: Language,
    pub file_name: String,
    pub build_cmd: Option<Vec<String>>,
    pub run_cmd: Vec<String>,
    pub check_cmd: Vec<String>,
    pub timeout_s: f64,
    error_patterns: Vec<(StatusKind, Regex)>,
}

#[derive(Debug, Clone)]
pub struct RunnerTable {
    specs: BTreeMap<Language, RunnerSpec>,
}

impl RunnerTable {
    pub fn builtin() -> Result<RunnerTable> {
        Self::from_json(RUNNER_DATA)
    }

    pub fn from_json(json: &str) -> Result<RunnerTable> {
        let records: Vec<RunnerRecord> = serde_json::from_str(json)?;
        let mut specs = BTreeMap::new();
        for r in records {
            if r.timeout_s <= 0.0 {
                return Err(Error::Config(format!("{}: timeout must be > 0", r.language)));
            }
            let mut error_patterns = Vec::new();
            for (kind, pat) in &r.error_patterns {
                let re = Regex::new(pat).map_err(|e| Error::Config(e.to_string()))?;
                error_patterns.push((*kind, re));
            }
            specs.insert(
                r.language,
                RunnerSpec {
                    language: r.language,
                    file_name: r.file_name,
                    build_cmd: r.build_cmd,
                    run_cmd: r.run_cmd,
                    check_cmd: r.check_cmd,
                    timeout_s: r.timeout_s,
                    error_patterns,
                },
            );
        }
        Ok(RunnerTable { specs })
    }

    pub fn get(&self, language: Language) -> Result<&RunnerSpec> {
        self.specs
            .get(&language)
            .ok_or_else(|| Error::Environment {
                language: language.id().to_string(),
                message: "no runner spec".to_string(),
            })
    }

    pub fn languages(&self) -> impl Iterator<Item = Language> + '_ {
        self.specs.keys().copied()
    }

    /// Checks each language's toolchain once; returns availability per language.
    pub fn availability(&self) -> BTreeMap<Language, bool> {
        self.specs
            .iter()
            .map(|(lang, spec)| (*lang, spec.toolchain_available()))
            .collect()
    }
}

impl RunnerSpec {
    pub fn toolchain_available(&self) -> bool {
        Command::new(&self.check_cmd[0])
            .args(&self.check_cmd[1..])
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .map(|s| s.success())
            .unwrap_or(false)
    }
}

/// Comment-only / placeholder detection, checked on the candidate body before
/// execution (TODO markers, "your code here", or nothing but comments).
pub fn is_unhelpful(candidate: &str, language: Language) -> bool {
    let lowered = candidate.to_lowercase();
    if lowered.contains("todo") || lowered.contains("your code here") {
        // Only unhelpful when there is no real code around the marker.
        return comment_only(candidate, language);
    }
    !candidate.trim().is_empty() && comment_only(candidate, language)
}

fn comment_only(candidate: &str, language: Language) -> bool {
    let markers: &[&str] = match language {
        Language::Py | Language::Sh | Language::Pl | Language::R | Language::Rb => &["#"],
        Language::Lua => &["--"],
        Language::Rkt => &[";"],
        _ => &["//", "/*", "*"],
    };
    let mut saw_comment = false;
    for line in candidate.lines() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if markers.iter().any(|m| t.starts_with(m)) {
            saw_comment = true;
        } else {
            return false;
        }
    }
    saw_comment
}

/// First matching pattern over stdout+stderr wins; an unmatched failure is an
/// OtherSyntaxError.
pub fn classify_error(stdout: &str, stderr: &str, exit_ok: bool, spec: &RunnerSpec) -> StatusKind {
    if exit_ok {
        return StatusKind::Pass;
    }
    let combined = format!("{stdout}\n{stderr}");
    for (kind, re) in &spec.error_patterns {
        if re.is_match(&combined) {
            return *kind;
        }
    }
    StatusKind::OtherSyntaxError
}

/// Assembles scaffold + candidate body + closer + tests.
pub fn assemble_program(
    scaffold: &str,
    candidate_body: &str,
    tests: &str,
    profile: Option<&LanguageProfile>,
) -> String {
    let closer = profile.and_then(|p| p.closer.as_deref()).unwrap_or("");
    format!("{scaffold}{candidate_body}{closer}\n{tests}")
}

/// Executes an assembled program in a fresh temp dir.
pub fn execute_program(program: &str, spec: &RunnerSpec) -> Result<ExecOutcome> {
    let dir = tempfile::tempdir()?;
    let file = dir.path().join(&spec.file_name);
    fs::write(&file, program)?;

    let substitute = |cmd: &[String]| -> Vec<String> {
        cmd.iter()
            .map(|a| a.replace("{file}", &file.display().to_string()))
            .collect()
    };

    let start = Instant::now();
    if let Some(build) = &spec.build_cmd {
        let argv = substitute(build);
        let out = run_with_timeout(&argv, dir.path(), Duration::from_secs_f64(60.0))?;
        match out {
            RunResult::Completed {
                stdout,
                stderr,
                exit_code,
            } if exit_code != Some(0) => {
                // Build diagnostics classify just like runtime diagnostics.
                let status = classify_error(&stdout, &stderr, false, spec);
                return Ok(ExecOutcome {
                    status,
                    stdout,
                    stderr,
                    duration_s: start.elapsed().as_secs_f64(),
                    exit_code,
                });
            }
            RunResult::TimedOut { stdout, stderr } => {
                return Ok(ExecOutcome {
                    status: StatusKind::Timeout,
                    stdout,
                    stderr,
                    duration_s: start.elapsed().as_secs_f64(),
                    exit_code: None,
                });
            }
            _ => {}
        }
    }

    let argv = substitute(&spec.run_cmd);
    let out = run_with_timeout(&argv, dir.path(), Duration::from_secs_f64(spec.timeout_s))?;
    let duration_s = start.elapsed().as_secs_f64();
    Ok(match out {
        RunResult::Completed {
            stdout,
            stderr,
            exit_code,
        } => {
            let status = classify_error(&stdout, &stderr, exit_code == Some(0), spec);
            ExecOutcome {
                status,
                stdout,
                stderr,
                duration_s,
                exit_code,
            }
        }
        RunResult::TimedOut { stdout, stderr } => ExecOutcome {
            status: StatusKind::Timeout,
            stdout,
            stderr,
            duration_s,
            exit_code: None,
        },
    })
}

/// Executes a candidate translation against its unit tests. The candidate is
/// assumed to be already truncated; the profile's closer is re-appended here.
pub fn execute_candidate(
    pair: &TranslationPair,
    candidate_body: &str,
    spec: &RunnerSpec,
    profile: Option<&LanguageProfile>,
) -> Result<ExecOutcome> {
    if is_unhelpful(candidate_body, pair.target_language) {
        return Ok(ExecOutcome {
            status: StatusKind::Unhelpful,
            stdout: String::new(),
            stderr: String::new(),
            duration_s: 0.0,
            exit_code: None,
        });
    }
    let program = assemble_program(
        &pair.target_scaffold,
        candidate_body,
        &pair.target_tests,
        profile,
    );
    execute_program(&program, spec)
}

enum RunResult {
    Completed {
        stdout: String,
        stderr: String,
        exit_code: Option<i32>,
    },
    TimedOut {
        stdout: String,
        stderr: String,
    },
}

fn run_with_timeout(argv: &[String], cwd: &std::path::Path, timeout: Duration) -> Result<RunResult> {
    use std::os::unix::process::CommandExt;

    let mut cmd = Command::new(&argv[0]);
    cmd.args(&argv[1..])
        .current_dir(cwd)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0);
    let mut child = cmd.spawn().map_err(|e| Error::Environment {
        language: argv[0].clone(),
        message: e.to_string(),
    })?;

    let stdout_handle = capture_stream(child.stdout.take());
    let stderr_handle = capture_stream(child.stderr.take());

    let deadline = Instant::now() + timeout;
    let timed_out = loop {
        match child.try_wait()? {
            Some(_) => break false,
            None => {
                if Instant::now() >= deadline {
                    kill_group(&child);
                    let _ = child.wait();
                    break true;
                }
                std::thread::sleep(Duration::from_millis(10));
            }
        }
    };

    let stdout = stdout_handle.join().unwrap_or_default();
    let stderr = stderr_handle.join().unwrap_or_default();
    if timed_out {
        return Ok(RunResult::TimedOut { stdout, stderr });
    }
    let status = child.wait()?;
    Ok(RunResult::Completed {
        stdout,
        stderr,
        exit_code: status.code(),
    })
}

fn capture_stream<R: Read + Send + 'static>(
    stream: Option<R>,
) -> std::thread::JoinHandle<String> {
    std::thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut s) = stream {
            let mut chunk = [0u8; 8192];
            while let Ok(n) = s.read(&mut chunk) {
                if n == 0 {
                    break;
                }
                if buf.len() < CAPTURE_CAP {
                    let take = n.min(CAPTURE_CAP - buf.len());
                    buf.extend_from_slice(&chunk[..take]);
                }
                // keep draining past the cap so the child never blocks
            }
        }
        String::from_utf8_lossy(&buf).into_owned()
    })
}

fn kill_group(child: &Child) {
    let pid = child.id() as i32;
    unsafe {
        libc::kill(-pid, libc::SIGKILL);
        libc::kill(pid, libc::SIGKILL);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn py_spec() -> RunnerSpec {
        RunnerTable::builtin().unwrap().get(Language::Py).unwrap().clone()
    }

    #[test]
    fn pass_on_success() {
        let spec = py_spec();
        let out = execute_program("assert 1 + 1 == 2\n", &spec).unwrap();
        assert_eq!(out.status, StatusKind::Pass);
        assert_eq!(out.exit_code, Some(0));
    }

    #[test]
    fn assertion_error_classified() {
        let spec = py_spec();
        let out = execute_program("assert 1 + 1 == 3\n", &spec).unwrap();
        assert_eq!(out.status, StatusKind::AssertionError);
    }

    #[test]
    fn name_error_is_undeclared() {
        let spec = py_spec();
        let out = execute_program("print(no_such_name)\n", &spec).unwrap();
        assert_eq!(out.status, StatusKind::UndeclaredError);
    }

    #[test]
    fn timeout_kills_infinite_loop() {
        let mut spec = py_spec();
        spec.timeout_s = 1.0;
        let start = Instant::now();
        let out = execute_program("while True:\n    pass\n", &spec).unwrap();
        assert_eq!(out.status, StatusKind::Timeout);
        assert!(start.elapsed() < Duration::from_secs(10));
    }

    #[test]
    fn unhelpful_placeholder_detected() {
        assert!(is_unhelpful("    # TODO: Your code here", Language::Py));
        assert!(is_unhelpful("    // TODO", Language::Jv));
        assert!(!is_unhelpful("    return 1  # TODO tidy", Language::Py));
        assert!(!is_unhelpful("    return x + 1;", Language::Js));
    }

    #[test]
    fn status_groups_partition() {
        for status in [
            StatusKind::TypeError,
            StatusKind::UndeclaredError,
            StatusKind::AssertionError,
            StatusKind::RuntimeError,
            StatusKind::OtherSyntaxError,
            StatusKind::Unhelpful,
            StatusKind::Timeout,
        ] {
            assert_ne!(status.group(), StatusGroup::Pass);
        }
        assert_eq!(StatusKind::Timeout.group(), StatusGroup::Runtime);
        assert_eq!(StatusKind::Unhelpful.group(), StatusGroup::Semantic);
    }

    #[test]
    fn determinism_on_deterministic_programs() {
        let spec = py_spec();
        let a = execute_program("assert sorted([2,1]) == [1,2]\n", &spec).unwrap();
        let b = execute_program("assert sorted([2,1]) == [1,2]\n", &spec).unwrap();
        assert_eq!(a.status, b.status);
    }
}
