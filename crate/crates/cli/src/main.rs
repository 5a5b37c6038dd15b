//! Command-line front door: parse flags and config, dispatch one command,
//! write a deterministic CSV or JSON report.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical or I/O
//! failure.

use std::process::ExitCode;

use szego_core::conserved::{self, ConservedAudit, J_GRID};
use szego_core::experiments::{
    default_inflation_dim, inflation_run, kernel_residual, InflationParams, KernelParams,
};
use szego_core::flow::{default_dt, exact_flow, exact_flow_report, rk4_evolve};
use szego_core::FourierVector;

mod config;
mod emit;

use config::{Cli, Command, Format, RunConfig};
use emit::{complex_row, g17, render_csv, CsvSection, Json};

enum Failure {
    Config(String),
    Numeric(String),
}

impl From<szego_core::Error> for Failure {
    fn from(e: szego_core::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = <Cli as clap::Parser>::parse();
    let rc = match RunConfig::resolve(cli) {
        Ok(rc) => rc,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(&rc) {
        Ok(report) => match write_out(&rc, &report) {
            Ok(()) => ExitCode::SUCCESS,
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(3)
            }
        },
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn write_out(rc: &RunConfig, report: &str) -> Result<(), String> {
    match &rc.out {
        None => {
            print!("{report}");
            Ok(())
        }
        Some(path) => std::fs::write(path, report)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
    }
}

fn run(rc: &RunConfig) -> Result<String, Failure> {
    match rc.command {
        Command::Evolve => evolve(rc),
        Command::Compare => compare(rc),
        Command::Conserve => conserve(rc),
        Command::Inflate => inflate(rc),
        Command::ToeplitzKernel => toeplitz_kernel(rc),
    }
}

fn required<T: Copy>(v: Option<T>, name: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Config(format!("missing required field '{name}'")))
}

fn symbol_of(rc: &RunConfig) -> Result<FourierVector, Failure> {
    let raw = rc
        .symbol
        .as_ref()
        .ok_or_else(|| Failure::Config("missing required field 'symbol'".into()))?;
    config::symbol_from_value(raw.clone(), rc.seed)
        .map_err(Failure::Config)?
        .build()
        .map_err(|e| Failure::Config(format!("invalid symbol: {e}")))
}

fn default_trunc(u: &FourierVector) -> usize {
    (4 * u.dim()).next_power_of_two().max(64)
}

fn audit_header() -> Vec<&'static str> {
    vec!["t", "l2", "E", "J@0.1", "J@1", "J@10", "dJ0", "d2J0", "h4"]
}

fn audit_row(t: f64, a: &ConservedAudit) -> Vec<String> {
    let mut row = vec![g17(t), g17(a.l2_norm), g17(a.energy)];
    for &(_, j) in &a.j_samples {
        row.push(g17(j));
    }
    row.extend([g17(a.dj0), g17(a.d2j0), g17(a.h4_from_j)]);
    row
}

fn audit_json(t: f64, a: &ConservedAudit) -> Json {
    Json::object(vec![
        ("t", Json::Float(t)),
        ("l2", Json::Float(a.l2_norm)),
        ("E", Json::Float(a.energy)),
        ("J@0.1", Json::Float(a.j_samples[0].1)),
        ("J@1", Json::Float(a.j_samples[1].1)),
        ("J@10", Json::Float(a.j_samples[2].1)),
        ("dJ0", Json::Float(a.dj0)),
        ("d2J0", Json::Float(a.d2j0)),
        ("h4", Json::Float(a.h4_from_j)),
    ])
}

fn evolve(rc: &RunConfig) -> Result<String, Failure> {
    let u = symbol_of(rc)?;
    let t = required(rc.t, "t")?;
    let n = rc.n.unwrap_or_else(|| default_trunc(&u));
    let m = rc.m.unwrap_or(n);
    let state = exact_flow(&u, t, n, m)?;
    let audit = conserved::audit(&state)?;

    match rc.format {
        Format::Csv => {
            let mut coeffs = CsvSection::new(&["m", "re", "im"]);
            for (j, &z) in state.coeffs().iter().enumerate() {
                coeffs.push_row(complex_row(j, z));
            }
            let mut audits = CsvSection::new(&audit_header());
            audits.push_row(audit_row(t, &audit));
            Ok(render_csv(&[coeffs, audits]))
        }
        Format::Json => Ok(Json::object(vec![
            ("t", Json::Float(t)),
            (
                "coeffs",
                Json::Array(state.coeffs().iter().map(|&z| Json::Complex(z)).collect()),
            ),
            ("audit", audit_json(t, &audit)),
        ])
        .render()
            + "\n"),
    }
}

fn compare(rc: &RunConfig) -> Result<String, Failure> {
    let u = symbol_of(rc)?;
    let t = required(rc.t, "t")?;
    let n = rc.n.unwrap_or_else(|| default_trunc(&u));
    let m = rc.m.unwrap_or(u.dim()).min(n);
    let dt = rc.dt.unwrap_or_else(|| default_dt(&u));

    let exact = exact_flow(&u, t, n, n)?;
    let report = rk4_evolve(&u, t, dt, n)?;
    let integrated = report.states.last().expect("report has final state");
    let max_abs_diff = (0..n)
        .map(|j| (exact.coeff(j) - integrated.coeff(j)).norm())
        .fold(0.0f64, f64::max);

    match rc.format {
        Format::Csv => {
            let mut rows =
                CsvSection::new(&["m", "exact_re", "exact_im", "rk4_re", "rk4_im", "abs_diff"]);
            for j in 0..m {
                let a = exact.coeff(j);
                let b = integrated.coeff(j);
                rows.push_row(vec![
                    j.to_string(),
                    g17(a.re),
                    g17(a.im),
                    g17(b.re),
                    g17(b.im),
                    g17((a - b).norm()),
                ]);
            }
            let mut summary = CsvSection::new(&["max_abs_diff"]);
            summary.push_row(vec![g17(max_abs_diff)]);
            Ok(render_csv(&[rows, summary]))
        }
        Format::Json => Ok(Json::object(vec![
            ("t", Json::Float(t)),
            ("dt", Json::Float(dt)),
            (
                "exact",
                Json::Array((0..m).map(|j| Json::Complex(exact.coeff(j))).collect()),
            ),
            (
                "rk4",
                Json::Array((0..m).map(|j| Json::Complex(integrated.coeff(j))).collect()),
            ),
            ("max_abs_diff", Json::Float(max_abs_diff)),
        ])
        .render()
            + "\n"),
    }
}

fn conserve(rc: &RunConfig) -> Result<String, Failure> {
    let u = symbol_of(rc)?;
    let t = required(rc.t, "t")?;
    let n = rc.n.unwrap_or_else(|| default_trunc(&u));
    let times: Vec<f64> = (0..=4).map(|k| t * k as f64 / 4.0).collect();
    let report = exact_flow_report(&u, &times, n, n)?;

    match rc.format {
        Format::Csv => {
            let mut section = CsvSection::new(&audit_header());
            for (tk, a) in report.times.iter().zip(&report.audits) {
                section.push_row(audit_row(*tk, a));
            }
            Ok(render_csv(&[section]))
        }
        Format::Json => Ok(Json::object(vec![
            (
                "x_grid",
                Json::Array(J_GRID.iter().map(|&x| Json::Float(x)).collect()),
            ),
            (
                "audits",
                Json::Array(
                    report
                        .times
                        .iter()
                        .zip(&report.audits)
                        .map(|(tk, a)| audit_json(*tk, a))
                        .collect(),
                ),
            ),
        ])
        .render()
            + "\n"),
    }
}

fn inflate(rc: &RunConfig) -> Result<String, Failure> {
    let eps = required(rc.eps, "eps")?;
    let delta = required(rc.delta, "delta")?;
    let r = required(rc.r, "R")?;
    let nsub = required(rc.nsub, "nsub")?;
    let params =
        InflationParams::new(delta, eps, r, nsub).map_err(|e| Failure::Config(e.to_string()))?;
    let n = rc.n.unwrap_or_else(|| default_inflation_dim(&params));
    let m = rc.m.unwrap_or(16).min(n);
    let report = inflation_run(&params, n, m)?;

    match rc.format {
        Format::Csv => {
            let mut section = CsvSection::new(&[
                "eps",
                "delta",
                "R",
                "Nsub",
                "sobolev_at_0",
                "t_eps",
                "observable",
                "predicted_observable",
                "rel_err",
            ]);
            section.push_row(vec![
                g17(eps),
                g17(delta),
                g17(r),
                nsub.to_string(),
                g17(report.sobolev_at_0),
                g17(report.t_eps),
                g17(report.observable),
                g17(report.predicted_observable),
                g17(report.rel_err),
            ]);
            Ok(render_csv(&[section]))
        }
        Format::Json => Ok(Json::object(vec![
            ("eps", Json::Float(eps)),
            ("delta", Json::Float(delta)),
            ("R", Json::Float(r)),
            ("Nsub", Json::Int(nsub as i64)),
            ("sobolev_at_0", Json::Float(report.sobolev_at_0)),
            ("t_eps", Json::Float(report.t_eps)),
            ("observable", Json::Float(report.observable)),
            (
                "predicted_observable",
                Json::Float(report.predicted_observable),
            ),
            ("rel_err", Json::Float(report.rel_err)),
            (
                "evolved",
                Json::Array(
                    report
                        .evolved
                        .coeffs()
                        .iter()
                        .map(|&z| Json::Complex(z))
                        .collect(),
                ),
            ),
        ])
        .render()
            + "\n"),
    }
}

fn toeplitz_kernel(rc: &RunConfig) -> Result<String, Failure> {
    let eps = required(rc.eps, "eps")?;
    let grid_m = rc.grid_m.unwrap_or(1 << 16);
    let dim_n = rc.n.unwrap_or(512);
    let trunc_k = rc.m.unwrap_or(64);
    let params = KernelParams::new(eps, grid_m, trunc_k, dim_n)
        .map_err(|e| Failure::Config(e.to_string()))?;
    let residual = kernel_residual(&params)?;

    match rc.format {
        Format::Csv => {
            let mut section = CsvSection::new(&["eps", "grid_M", "dim_N", "trunc_K", "residual"]);
            section.push_row(vec![
                g17(eps),
                grid_m.to_string(),
                dim_n.to_string(),
                trunc_k.to_string(),
                g17(residual),
            ]);
            Ok(render_csv(&[section]))
        }
        Format::Json => Ok(Json::object(vec![
            ("eps", Json::Float(eps)),
            ("grid_M", Json::Int(grid_m as i64)),
            ("dim_N", Json::Int(dim_n as i64)),
            ("trunc_K", Json::Int(trunc_k as i64)),
            ("residual", Json::Float(residual)),
        ])
        .render()
            + "\n"),
    }
}
