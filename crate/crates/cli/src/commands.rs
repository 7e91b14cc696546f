use std::io::Write;

use puo_core::classical::{self, TwoModeSolution};
use puo_core::modes::{InverseForm, PuoParams};
use puo_core::puo::{self, MomentReport};
use puo_core::validate::{self, Bound, GridSize, ValidateOptions, ValidationReport};

use crate::args::{EvolveArgs, GridArg, ReportArgs, ScanArgs, Spacing, ValidateArgs, ValidateFormat};
use crate::config::{self, OutputConfig, TimeRange};
use crate::output::{format_number, Cell, Table};
use crate::Failure;

/// Largest RK4 substep in units of `1/Ω` for the classical column of `evolve`.
const CLASSICAL_SUBSTEP: f64 = 0.002;

pub fn report(args: &ReportArgs, out: impl Write) -> Result<(), Failure> {
    let file = config::load(args.output.config.as_deref())?;
    let state = config::state(&args.state, &file)?;
    let output = config::output(&args.output, &file)?;
    let t = config::finite(args.t.or(file.t).unwrap_or(0.0), "--t")?;
    let label = state.label.at_time(t);

    let closed = puo::closed_moments(&state.params, &label);
    let numeric = puo::numeric_moments(&state.params, &label, state.truncation).map_err(Failure::numerical)?;

    let mut columns = vec!["source"];
    columns.extend(MomentReport::FIELD_NAMES);
    let mut table = Table::new(out, columns, output)?;
    let (c, n) = (closed.values(), numeric.values());
    let abs: Vec<f64> = c.iter().zip(n).map(|(a, b)| (a - b).abs()).collect();
    let rel: Vec<f64> = c.iter().zip(n).map(|(a, b)| relative_deviation(*a, b)).collect();
    for (source, values) in [
        ("closed", &c[..]),
        ("numeric", &n[..]),
        ("abs_dev", &abs[..]),
        ("rel_dev", &rel[..]),
    ] {
        let mut cells = vec![Cell::Text(source.into())];
        cells.extend(values.iter().map(|&v| Cell::Num(v)));
        table.row(&cells)?;
    }
    table.finish()?;
    Ok(())
}

/// `|a − b| / max(|a|, |b|, 0.01)`. The floor is the oracle's absolute
/// tolerance over its relative one, so `rel_dev ≤ 1e-8` is exactly the
/// closed-vs-numeric pass condition.
pub fn relative_deviation(a: f64, b: f64) -> f64 {
    let floor = validate::ORACLE_ABS_TOL / validate::ORACLE_REL_TOL;
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

pub const EVOLVE_COLUMNS: [&str; 8] = [
    "t",
    "mean_z_closed",
    "mean_z_numeric",
    "z_classical",
    "var_z",
    "var_pz",
    "product",
    "constraint_residual",
];

pub fn evolve(args: &EvolveArgs, out: impl Write) -> Result<(), Failure> {
    let file = config::load(args.output.config.as_deref())?;
    let state = config::state(&args.state, &file)?;
    let output = config::output(&args.output, &file)?;
    let range = TimeRange::new(
        args.t0.or(file.t0).unwrap_or(0.0),
        args.t1
            .or(file.t1)
            .ok_or_else(|| Failure::Usage("--t1 is required (flag or config file)".into()))?,
        args.dt
            .or(file.dt)
            .ok_or_else(|| Failure::Usage("--dt is required (flag or config file)".into()))?,
    )?;
    let params = state.params;

    let substeps = (range.dt * params.big_freq() / CLASSICAL_SUBSTEP).ceil().max(1.0) as usize;
    let solution = TwoModeSolution::for_label(&params, &state.label);
    let trajectory = classical::integrate_from(
        &params,
        solution.init_at(&params, range.t0),
        range.t0,
        range.end(),
        range.dt / substeps as f64,
    )
    .map_err(Failure::numerical)?;
    if trajectory.len() != range.intervals * substeps + 1 {
        return Err(Failure::Numerical(
            "classical integrator produced an unexpected number of steps".into(),
        ));
    }

    let mut table = Table::new(out, EVOLVE_COLUMNS.to_vec(), output)?;
    for k in 0..=range.intervals {
        let t = range.time(k);
        let label = state.label.at_time(t);
        let closed = puo::closed_moments(&params, &label);
        let numeric = puo::numeric_moments(&params, &label, state.truncation).map_err(Failure::numerical)?;
        table.row(&[
            Cell::Num(t),
            Cell::Num(closed.mean_z),
            Cell::Num(numeric.mean_z),
            Cell::Num(trajectory.z[k * substeps]),
            Cell::Num(numeric.var_z),
            Cell::Num(numeric.var_pz),
            Cell::Num(numeric.uncertainty_product),
            Cell::Num(numeric.constraint_residual),
        ])?;
    }
    table.finish()?;
    Ok(())
}

pub fn scan(args: &ScanArgs, out: impl Write) -> Result<(), Failure> {
    let file = config::load(args.output.config.as_deref())?;
    let output = config::output(&args.output, &file)?;
    let ratios = scan_points(args.from, args.to, args.steps, args.spacing)?;

    let mut table = Table::new(out, vec!["ratio", "exact", "leading", "gap"], output)?;
    for ratio in ratios {
        let params = PuoParams::new(ratio, 1.0).map_err(|e| Failure::Usage(e.to_string()))?;
        let p = puo::asymptotic_product(&params);
        table.row(&[
            Cell::Num(ratio),
            Cell::Num(p.exact),
            Cell::Num(p.leading),
            Cell::Num(p.gap),
        ])?;
    }
    table.finish()?;
    Ok(())
}

/// `steps` ratios from `from` to `to`, both endpoints exact.
pub fn scan_points(from: f64, to: f64, steps: usize, spacing: Spacing) -> Result<Vec<f64>, Failure> {
    let (from, to) = (config::finite(from, "--from")?, config::finite(to, "--to")?);
    if from <= 1.0 || to <= 1.0 {
        return Err(Failure::Usage(format!(
            "ratio range must lie above 1 (got {from} .. {to})"
        )));
    }
    if !(2..=config::MAX_ROWS).contains(&steps) {
        return Err(Failure::Usage(format!(
            "--steps must be between 2 and {} (got {steps})",
            config::MAX_ROWS
        )));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| match k {
            0 => from,
            k if k == steps - 1 => to,
            k => {
                let f = k as f64 / last;
                match spacing {
                    Spacing::Linear => from + (to - from) * f,
                    Spacing::Log => (from.ln() + (to.ln() - from.ln()) * f).exp(),
                }
            }
        })
        .collect())
}

pub fn validate(args: &ValidateArgs, mut out: impl Write) -> Result<bool, Failure> {
    let file = config::load(args.config.as_deref())?;
    let grid = match (args.grid, &file.grid) {
        (Some(g), _) => g,
        (None, Some(name)) => config::parse_enum::<GridArg>(name, "grid")?,
        (None, None) => GridArg::Full,
    };
    let format = match (args.format, &file.format) {
        (Some(f), _) => f,
        (None, Some(name)) => config::parse_enum::<ValidateFormat>(name, "format")?,
        (None, None) => ValidateFormat::default(),
    };
    let precision = config::precision(args.precision.or(file.precision))?;
    let opts = ValidateOptions {
        grid: match grid {
            GridArg::Small => GridSize::Small,
            GridArg::Full => GridSize::Full,
        },
        inverse_form: if args.inject_inverse_misprint {
            InverseForm::Misprinted
        } else {
            InverseForm::Exact
        },
    };

    let report = validate::run(&opts);
    match format {
        ValidateFormat::Text => write_text(&report, precision, &mut out)?,
        ValidateFormat::Csv => write_checks(
            &report,
            OutputConfig {
                format: crate::args::Format::Csv,
                precision,
            },
            &mut out,
        )?,
        ValidateFormat::Json => write_checks(
            &report,
            OutputConfig {
                format: crate::args::Format::Json,
                precision,
            },
            &mut out,
        )?,
    }
    out.flush()?;
    for (suite, check) in report.failing_checks() {
        eprintln!("failing invariant: {suite}: {check}");
    }
    Ok(report.passed())
}

fn bound_text(bound: Bound, precision: usize) -> String {
    match bound {
        Bound::AtMost(v) => format!("<= {}", format_number(v, precision)),
        Bound::AtLeast(v) => format!(">= {}", format_number(v, precision)),
        Bound::Above(v) => format!("> {}", format_number(v, precision)),
    }
}

fn write_text(report: &ValidationReport, precision: usize, out: &mut impl Write) -> std::io::Result<()> {
    let width = report
        .suites
        .iter()
        .flat_map(|s| &s.checks)
        .map(|c| c.name.len())
        .max()
        .unwrap_or(0);
    for suite in &report.suites {
        writeln!(
            out,
            "{}: {}/{} checks passed",
            suite.name,
            suite.passed_count(),
            suite.checks.len()
        )?;
        for check in &suite.checks {
            writeln!(
                out,
                "  {}  {:<width$}  worst {}  bound {}  cases {}  failures {}",
                if check.passed() { "pass" } else { "FAIL" },
                check.name,
                format_number(check.worst, precision),
                bound_text(check.bound, precision),
                check.cases,
                check.failures,
            )?;
        }
    }
    let failing = report.failing_checks();
    if failing.is_empty() {
        writeln!(out, "result: all {} suites passed", report.suites.len())
    } else {
        let names: Vec<String> = failing.iter().map(|(s, c)| format!("{s}: {c}")).collect();
        writeln!(out, "result: FAILED ({})", names.join("; "))
    }
}

fn write_checks(report: &ValidationReport, output: OutputConfig, out: &mut impl Write) -> std::io::Result<()> {
    let columns = vec!["suite", "invariant", "status", "cases", "failures", "worst", "bound"];
    let mut table = Table::new(out, columns, output)?;
    for suite in &report.suites {
        for check in &suite.checks {
            table.row(&[
                Cell::Text(suite.name.into()),
                Cell::Text(check.name.into()),
                Cell::Text(if check.passed() { "pass" } else { "fail" }.into()),
                Cell::Int(check.cases as u64),
                Cell::Int(check.failures as u64),
                Cell::Num(check.worst),
                Cell::Text(bound_text(check.bound, output.precision)),
            ])?;
        }
    }
    table.finish()?;
    Ok(())
}
