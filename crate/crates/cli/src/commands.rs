use divcorr::arith::{build_instance, divisor_count, gcd, ProblemInstance};
use divcorr::characters::DirichletGroup;
use divcorr::correlate::{
    fit_exponent, residual_scan_with_step, sharp_conditions, smooth_conditions, split_identity_check, Mode, THETA,
};
use divcorr::expsums::{ramanujan, s_hat_all, KloostermanModulus, Sign};
use divcorr::mainterm::MainTerm;
use divcorr::selftest;
use divcorr::specfun::BumpFunction;
use divcorr::voronoi::VoronoiEngine;
use divcorr::Error;
use serde_json::{json, Value};

use crate::args::{Cli, Command, Format, SignArg};
use crate::table::{f, i, Table};

pub enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

pub struct Output {
    pub text: String,
    pub passed: bool,
}

type Outcome = Result<Output, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::VerifyVoronoi { moduli } => verify_voronoi(cli, moduli),
        Command::Kloosterman { modulus, mmax, nmax } => kloosterman(cli, *modulus, *mmax, *nmax),
        Command::Ramanujan { qmax, nmax } => ramanujan_table(cli, *qmax, *nmax),
        Command::Shat { v, n, sign } => shat(cli, *v, *n, *sign),
        Command::MainTerm => main_term(cli),
        Command::Correlate => correlate(cli),
        Command::SplitCheck { samples } => split_check(cli, *samples),
        Command::Selftest => run_selftest(cli),
    }
}

fn instance(cli: &Cli) -> Result<ProblemInstance, Failure> {
    let c = &cli.common;
    let (Some(r1), Some(r2), Some(f1), Some(f2)) = (c.r1, c.r2, c.f1, c.f2) else {
        return Err(Failure::Usage("this command needs --r1, --r2, --f1 and --f2".into()));
    };
    match build_instance(r1, r2, f1, f2) {
        Ok(inst) => Ok(inst),
        Err(Error::DegenerateShift) => Err(Failure::Usage(format!(
            "invalid instance: the hypothesis h ≠ 0 fails, h = r1 f2 - r2 f1 = {r1}*{f2} - {r2}*{f1} = 0"
        ))),
        Err(Error::ZeroArgument) => Err(Failure::Usage("r1 and r2 must be positive".into())),
        Err(e) => Err(e.into()),
    }
}

fn render(cli: &Cli, default: Format, table: Table, value: Value, passed: bool) -> Outcome {
    let text = match cli.common.out.unwrap_or(default) {
        Format::Csv => table.render(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("plain data serializes");
            s.push('\n');
            s
        }
    };
    Ok(Output { text, passed })
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn verify_voronoi(cli: &Cli, moduli: &[u64]) -> Outcome {
    if moduli.is_empty() || moduli.contains(&0) {
        return Err(Failure::Usage("--moduli must list positive integers".into()));
    }
    let x = cli.common.x.unwrap_or(5000) as f64;
    let tol = cli.common.tol.unwrap_or(1e-6);
    let bump = BumpFunction::new(x, 2.0 * x)?;
    let mut engine = VoronoiEngine::new(&bump)?;
    let mut table = Table::new(&[
        "b", "c", "lhs", "rhs", "main_part", "y_part", "k_part", "n_truncation", "relative_discrepancy",
    ]);
    let mut rows = Vec::new();
    let mut passed = true;
    for &c in moduli {
        for b in 0..c as i64 {
            let report = match engine.rhs(b, c, tol) {
                Ok(r) => r,
                Err(Error::TruncationCap { partial, .. }) => {
                    passed = false;
                    *partial
                }
                Err(e) => return Err(e.into()),
            };
            let rel = report.relative_discrepancy();
            passed &= rel <= tol;
            table.row(vec![
                i(b),
                i(c),
                f(report.lhs),
                f(report.rhs),
                f(report.main_part),
                f(report.y_part),
                f(report.k_part),
                i(report.n_truncation),
                f(rel),
            ]);
            rows.push(json!({ "b": b, "c": c, "report": to_value(&report), "relative_discrepancy": rel }));
        }
    }
    let value = json!({ "support": [x, 2.0 * x], "tol": tol, "rows": rows, "passed": passed });
    render(cli, Format::Csv, table, value, passed)
}

fn kloosterman(cli: &Cli, c: u64, mmax: i64, nmax: i64) -> Outcome {
    let km = KloostermanModulus::new(c)?;
    let dc = divisor_count(c)? as f64;
    let mut table = Table::new(&["m", "n", "c", "value", "weil_bound"]);
    let mut rows = Vec::new();
    for m in 0..=mmax {
        for n in 0..=nmax {
            let value = km.sum_real(m as i128, n as i128);
            let g = gcd(gcd(m.unsigned_abs(), n.unsigned_abs()), c) as f64;
            let bound = dc * (g * c as f64).sqrt();
            table.row(vec![i(m), i(n), i(c), f(value), f(bound)]);
            rows.push(json!({ "m": m, "n": n, "c": c, "value": value, "weil_bound": bound }));
        }
    }
    render(cli, Format::Csv, table, json!({ "rows": rows }), true)
}

fn ramanujan_table(cli: &Cli, qmax: u64, nmax: i64) -> Outcome {
    let mut table = Table::new(&["q", "n", "value"]);
    let mut rows = Vec::new();
    for q in 1..=qmax {
        for n in 0..=nmax {
            let v = ramanujan(q, n as i128)?;
            table.row(vec![i(q), i(n), i(v)]);
            rows.push(json!({ "q": q, "n": n, "value": v }));
        }
    }
    render(cli, Format::Csv, table, json!({ "rows": rows }), true)
}

fn shat(cli: &Cli, v: u64, n: i64, sign: SignArg) -> Outcome {
    let f1 = cli.common.f1.unwrap_or(0);
    let sign = match sign {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    };
    let group = DirichletGroup::new(v)?;
    let values = s_hat_all(v, f1 as i128, n as i128, sign)?;
    let mut table = Table::new(&["index", "order", "conductor", "re", "im", "abs"]);
    let mut rows = Vec::new();
    for chi in group.characters() {
        let z = values[chi.index()];
        table.row(vec![i(chi.index()), i(chi.order()), i(chi.conductor()), f(z.re), f(z.im), f(z.norm())]);
        rows.push(json!({
            "index": chi.index(), "order": chi.order(), "conductor": chi.conductor(),
            "re": z.re, "im": z.im, "abs": z.norm(),
        }));
    }
    render(cli, Format::Csv, table, json!({ "v": v, "f1": f1, "n": n, "rows": rows }), true)
}

fn main_term(cli: &Cli) -> Outcome {
    let inst = instance(cli)?;
    let mt = MainTerm::new(&inst)?;
    let p = mt.polynomial;
    let mut table = Table::new(&["quantity", "value"]);
    for (name, v) in [
        ("a00", mt.c.a00),
        ("a10", mt.c.a10),
        ("a01", mt.c.a01),
        ("a11", mt.c.a11),
        ("q11", p.q11),
        ("q10", p.q10),
        ("q01", p.q01),
        ("q00", p.q00),
    ] {
        table.row(vec![name.to_string(), f(v)]);
    }
    let mut value = json!({
        "instance": to_value(&inst),
        "c": to_value(&mt.c),
        "polynomial": to_value(&p),
    });
    if let Some(x) = cli.common.x {
        let xf = x as f64;
        let sharp = mt.sharp(xf)?;
        let w = BumpFunction::dyadic();
        let (x1, x2) = (inst.r1 as f64 * xf, inst.r2 as f64 * xf);
        let smooth = mt.smooth(x1, x2, &w, &w)?;
        table.row(vec!["sharp".into(), f(sharp)]);
        table.row(vec!["smooth".into(), f(smooth.value)]);
        value["x"] = json!(x);
        value["sharp"] = json!(sharp);
        value["smooth"] = json!({ "x1": x1, "x2": x2, "value": smooth.value, "empty_support": smooth.empty_support });
    }
    render(cli, Format::Json, table, value, true)
}

fn correlate(cli: &Cli) -> Outcome {
    let inst = instance(cli)?;
    let c = &cli.common;
    let mode: Mode = c.mode.map(Mode::from).unwrap_or(Mode::Sharp);
    let (kmin, kmax) = (c.kmin.unwrap_or(14), c.kmax.unwrap_or(23));
    if kmin > kmax || kmax > 40 {
        return Err(Failure::Usage(format!("need kmin ≤ kmax ≤ 40, got {kmin} and {kmax}")));
    }
    let step = c.geometric_step.unwrap_or(2.0);
    if !(step > 1.0) {
        return Err(Failure::Usage(format!("--geometric-step must exceed 1, got {step}")));
    }
    let rows = residual_scan_with_step(&inst, mode, kmin, kmax, step)?;
    let exponent = fit_exponent(&rows).ok();
    let x_top = rows.last().map(|r| r.x as f64).unwrap_or(0.0);
    let (norm_name, theory, warnings) = match mode {
        Mode::Sharp => ("norm_sharp", 2.0 / 3.0, sharp_conditions(&inst, x_top)),
        Mode::Smooth => (
            "norm_smooth",
            0.5 + THETA,
            smooth_conditions(&inst, inst.r1 as f64 * x_top, inst.r2 as f64 * x_top),
        ),
    };
    let mut table = Table::new(&["x", "brute", "main", "residual", norm_name]);
    for r in &rows {
        let norm = if mode == Mode::Sharp { r.norm_sharp } else { r.norm_smooth };
        table.row(vec![i(r.x), f(r.brute), f(r.main), f(r.residual), f(norm)]);
    }
    match exponent {
        Some(e) => table.note(format!("exponent {e}")),
        None => table.note("exponent unavailable (fewer than 5 nonzero residuals)".into()),
    }
    table.note(format!("theory exponent {theory} (plus epsilon)"));
    for w in &warnings {
        table.note(format!("warning {}", serde_json::to_string(w).expect("plain data serializes")));
    }
    let value = json!({
        "instance": to_value(&inst),
        "mode": to_value(&mode),
        "rows": to_value(&rows),
        "exponent": exponent,
        "theory_exponent": theory,
        "warnings": to_value(&warnings),
    });
    render(cli, Format::Csv, table, value, true)
}

fn split_check(cli: &Cli, samples: usize) -> Outcome {
    let x2 = cli.common.x.unwrap_or(10_000);
    if x2 < 4 {
        return Err(Failure::Usage(format!("split-check needs --x ≥ 4, got {x2}")));
    }
    let tol = cli.common.tol.unwrap_or(1e-9);
    let err = split_identity_check(x2, samples, cli.common.seed)?;
    let passed = err <= tol;
    let mut table = Table::new(&["x2", "samples", "max_error", "tol"]);
    table.row(vec![i(x2), i(samples), f(err), f(tol)]);
    let value = json!({ "x2": x2, "samples": samples, "max_error": err, "tol": tol, "passed": passed });
    render(cli, Format::Csv, table, value, passed)
}

fn run_selftest(cli: &Cli) -> Outcome {
    let outcomes = selftest::quick(cli.common.seed)?;
    let passed = outcomes.iter().all(|o| o.passed);
    let mut table = Table::new(&["check", "passed", "measured", "limit"]);
    for o in &outcomes {
        table.row(vec![format!("\"{}\"", o.name), i(o.passed), f(o.measured), f(o.limit)]);
    }
    let value = json!({ "seed": cli.common.seed, "checks": to_value(&outcomes), "passed": passed });
    render(cli, Format::Csv, table, value, passed)
}
