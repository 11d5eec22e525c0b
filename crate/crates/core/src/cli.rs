//! Command implementations behind the `breuil` binary. Each command reads a
//! block-format job and produces deterministic text plus an exit code:
//! 0 on success, 1 on a validation failure, 2 on a parse error.

use std::sync::Arc;

use crate::blocks::{parse_job, to_matrix, JobSpec, WindowBlock};
use crate::display::{display_lie, to_display, validate_display};
use crate::frame::Frame;
use crate::matrix::Matrix;
use crate::module::{make_module, validate_breuil_module};
use crate::series::Ring;
use crate::tframe::{nu, solve_iso, TMatrix};
use crate::window::{check_morphism, lie, special_fiber, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Kv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    SpecialFiber,
    Display,
    SolveIso,
    Module,
    Nu,
    Selftest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Line-oriented writer: `key = value` facts under an optional section.
struct Out {
    format: Format,
    section: Option<String>,
    text: String,
}

impl Out {
    fn new(format: Format) -> Out {
        Out { format, section: None, text: String::new() }
    }

    fn section(&mut self, name: &str) {
        if self.format == Format::Human {
            if !self.text.is_empty() {
                self.text.push('\n');
            }
            self.text.push_str(&format!("[{}]\n", name.replace('.', " ")));
        }
        self.section = Some(name.to_string());
    }

    fn key(&self, k: &str) -> String {
        match (&self.section, self.format) {
            (Some(s), Format::Kv) => format!("{}.{}", s, k),
            _ => k.to_string(),
        }
    }

    fn fact(&mut self, k: &str, v: impl std::fmt::Display) {
        let line = format!("{} = {}\n", self.key(k), v);
        self.text.push_str(&line);
    }

    fn matrix(&mut self, k: &str, rows: Vec<Vec<String>>) {
        match self.format {
            Format::Human => {
                self.text.push_str(&format!("{} =\n", k));
                for r in rows {
                    self.text.push_str(&format!("  [{}]\n", r.join(", ")));
                }
            }
            Format::Kv => {
                for (i, r) in rows.iter().enumerate() {
                    for (j, x) in r.iter().enumerate() {
                        let line = format!("{}[{}][{}] = {}\n", self.key(k), i, j, x);
                        self.text.push_str(&line);
                    }
                }
            }
        }
    }
}

fn rows_of(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

fn trows_of(m: &TMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

fn parse_error(msg: String) -> Outcome {
    Outcome { stdout: String::new(), stderr: format!("parse error: {}\n", msg), code: 2 }
}

fn failure(out: Out, msg: String) -> Outcome {
    Outcome { stdout: out.text, stderr: format!("error: {}\n", msg), code: 1 }
}

fn ok(out: Out, good: bool) -> Outcome {
    Outcome { stdout: out.text, stderr: String::new(), code: if good { 0 } else { 1 } }
}

/// The frame of a job, requiring every invariant. Failures are validation
/// failures (exit 1).
fn frame_of(job: &JobSpec) -> Result<Arc<Frame>, String> {
    let spec = job.frame.clone().ok_or("a [frame] block is required")?;
    Frame::checked(spec)
}

fn window_of_block(frame: &Arc<Frame>, b: &WindowBlock) -> Result<Window, String> {
    let level = b.level_or(frame);
    if level == 0 || level > frame.max_level() {
        return Err(format!("level {} outside 1..={}", level, frame.max_level()));
    }
    let ring = Ring::series(frame, level);
    Window::new(b.d, b.c, to_matrix(&ring, &b.rows)).map_err(|e| e.to_string())
}

fn windows(frame: &Arc<Frame>, job: &JobSpec, count: usize) -> Result<Vec<Window>, String> {
    if job.windows.len() < count {
        return Err(format!("expected {} [window] block(s), found {}", count, job.windows.len()));
    }
    job.windows.iter().map(|b| window_of_block(frame, b)).collect()
}

/// Run a command on a job text.
pub fn run(cmd: Command, input: &str, format: Format) -> Outcome {
    run_with(cmd, input, format, None)
}

/// As [`run`]; `nu_args = (p, a)` overrides the frame block for `nu`.
pub fn run_with(cmd: Command, input: &str, format: Format, nu_args: Option<(u64, u64)>) -> Outcome {
    let mut out = Out::new(format);
    if cmd == Command::Selftest {
        return selftest(out);
    }
    if let (Command::Nu, Some((p, a))) = (cmd, nu_args) {
        if a == 0 || !crate::frame::is_prime(p) || p < 3 {
            return failure(out, "nu needs an odd prime p and a ≥ 1".to_string());
        }
        out.fact("nu", nu(a, p));
        return ok(out, true);
    }
    let job = match parse_job(input) {
        Ok(j) => j,
        Err(e) => return parse_error(e.to_string()),
    };
    match cmd {
        Command::Validate => validate(out, &job),
        Command::Nu => match &job.frame {
            Some(f) => {
                out.fact("nu", nu(f.a as u64, f.p));
                ok(out, true)
            }
            None => parse_error("nu needs --p and --a or a [frame] block".to_string()),
        },
        _ => {
            let frame = match frame_of(&job) {
                Ok(f) => f,
                Err(e) => return failure(out, e),
            };
            let res = match cmd {
                Command::SpecialFiber => cmd_special_fiber(&mut out, &frame, &job),
                Command::Display => cmd_display(&mut out, &frame, &job),
                Command::SolveIso => cmd_solve_iso(&mut out, &frame, &job),
                Command::Module => cmd_module(&mut out, &frame, &job),
                _ => unreachable!(),
            };
            match res {
                Ok(good) => ok(out, good),
                Err(e) => failure(out, e),
            }
        }
    }
}

fn validate(mut out: Out, job: &JobSpec) -> Outcome {
    let Some(spec) = job.frame.clone() else {
        return failure(out, "a [frame] block is required".to_string());
    };
    out.section("frame");
    let frame = match Frame::new(spec) {
        Ok(f) => f,
        Err(e) => {
            out.fact("valid", false);
            out.fact("violation", &e);
            return ok(out, false);
        }
    };
    let report = frame.validate();
    out.fact("valid", report.is_valid());
    for v in &report.violations {
        out.fact("violation", v);
    }
    let mut good = report.is_valid();
    if !good {
        return ok(out, false);
    }
    let mut built = Vec::new();
    for (i, b) in job.windows.iter().enumerate() {
        out.section(&format!("window.{}", i + 1));
        match window_of_block(&frame, b) {
            Ok(w) => {
                out.fact("valid", true);
                out.fact("level", w.level());
                out.fact("d", w.d());
                out.fact("c", w.c());
                built.push(w);
            }
            Err(e) => {
                good = false;
                out.fact("valid", false);
                out.fact("violation", e);
            }
        }
    }
    if let (Some(rows), [src, tgt]) = (&job.matrix, built.as_slice()) {
        out.section("morphism");
        let u = to_matrix(tgt.ring(), rows);
        match check_morphism(src, tgt, &u) {
            Ok(m) => {
                out.fact("valid", m);
                good &= m;
            }
            Err(e) => {
                out.fact("valid", false);
                out.fact("violation", e);
                good = false;
            }
        }
    }
    ok(out, good)
}

fn cmd_special_fiber(out: &mut Out, frame: &Arc<Frame>, job: &JobSpec) -> Result<bool, String> {
    let ws = windows(frame, job, 1)?;
    for (i, w) in ws.iter().enumerate() {
        out.section(&format!("window.{}", i + 1));
        let sf = special_fiber(w);
        out.fact("height", sf.height);
        out.fact("dim", sf.dim);
        out.fact("nilpotent", sf.is_nilpotent);
        out.matrix("A0", rows_of(&sf.a0));
        out.matrix("Phi0", rows_of(&sf.phi0));
    }
    Ok(true)
}

fn cmd_display(out: &mut Out, frame: &Arc<Frame>, job: &JobSpec) -> Result<bool, String> {
    let ws = windows(frame, job, 1)?;
    let mut good = true;
    for (i, w) in ws.iter().enumerate() {
        out.section(&format!("window.{}", i + 1));
        let dd = to_display(w).map_err(|e| e.to_string())?;
        let report = validate_display(&dd);
        out.fact("level", dd.level);
        out.fact("L", dd.witt_len);
        out.fact("d", dd.d);
        out.fact("c", dd.c);
        let rows = (0..dd.b.rows()).map(|r| (0..dd.b.cols()).map(|c| dd.b.get(r, c).to_string()).collect()).collect();
        out.matrix("B", rows);
        out.fact("valid", report.is_valid());
        for v in &report.violations {
            out.fact("violation", v);
        }
        out.fact("lie_rank", display_lie(&dd));
        out.fact("window_lie_rank", lie(w).rank);
        good &= report.is_valid();
    }
    Ok(good)
}

fn cmd_solve_iso(out: &mut Out, frame: &Arc<Frame>, job: &JobSpec) -> Result<bool, String> {
    let ws = windows(frame, job, 2)?;
    let (w1, w2) = (&ws[0], &ws[1]);
    if (w1.d(), w1.c(), w1.level()) != (w2.d(), w2.c(), w2.level()) {
        return Err("windows must share d, c and level".to_string());
    }
    let sol = solve_iso(w1.a(), w2.a(), w1.d(), w1.c(), w1.level()).map_err(|e| e.to_string())?;
    let h = w1.height();
    let congruent = sol.x.is_identity_mod_v();
    let image = (0..h).all(|i| (0..h).all(|j| sol.x.get(i, j).in_series_image()));
    out.matrix("X", trows_of(&sol.x));
    out.fact("residual", if sol.residual_zero { "0" } else { "nonzero" });
    out.fact("congruent_mod_v", congruent);
    out.fact("in_series_image", image);
    Ok(sol.residual_zero && congruent)
}

fn cmd_module(out: &mut Out, frame: &Arc<Frame>, job: &JobSpec) -> Result<bool, String> {
    let ws = windows(frame, job, 2)?;
    let rows = job.matrix.as_ref().ok_or("a [matrix] block is required")?;
    let (src, tgt) = (&ws[0], &ws[1]);
    let u = to_matrix(tgt.ring(), rows);
    let report = validate_breuil_module(src, tgt, &u);
    out.section("module");
    out.fact("valid", report.is_valid());
    for v in &report.violations {
        out.fact("violation", v);
    }
    if report.is_valid() {
        let m = make_module(src, tgt, &u).map_err(|e| e.to_string())?;
        out.fact("m", m.p_length());
        out.fact("order", m.group_order());
    }
    Ok(report.is_valid())
}

fn selftest(mut out: Out) -> Outcome {
    let res = crate::selftest::run_selftest(2024);
    out.section("selftest");
    let mut good = true;
    for (name, pass) in res {
        out.fact(name, if pass { "pass" } else { "fail" });
        good &= pass;
    }
    ok(out, good)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FRAME: &str = "[frame]\np = 3\ne = 1\na = 2\nN = 6\nE = u + p\n";

    #[test]
    fn nu_command() {
        let o = run_with(Command::Nu, "", Format::Human, Some((3, 1)));
        assert_eq!((o.stdout.as_str(), o.code), ("nu = 1\n", 0));
        let o = run(Command::Nu, FRAME, Format::Kv);
        // the frame has a = 2
        assert_eq!(o.stdout, "nu = 2\n");
    }

    #[test]
    fn validate_bad_frame() {
        let o = run(Command::Validate, &FRAME.replace("u + p", "u + 1"), Format::Human);
        assert_eq!(o.code, 1);
        assert!(o.stdout.contains("a0 not divisible by p"));
    }

    #[test]
    fn solve_iso_command() {
        let src = format!("{}[window]\nd = 1\nc = 0\nrow = 1\n[window]\nd = 1\nc = 0\nrow = 1 + u\n", FRAME);
        let o = run(Command::SolveIso, &src, Format::Human);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("[1 + 726*v]"));
        assert!(o.stdout.contains("residual = 0"));
        let o = run(Command::SolveIso, &src, Format::Kv);
        assert!(o.stdout.starts_with("X[0][0] = 1 + 726*v\nresidual = 0\n"));
    }

    #[test]
    fn parse_errors_exit_two() {
        let o = run(Command::Display, "[frame]\np = three\n", Format::Human);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("line 2"));
    }
}
