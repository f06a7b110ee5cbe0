//! Single-trajectory runs.

use crate::error::Result;
use crate::evolve::{evolve_analytic, evolve_numeric_with, sample_times, NumericOptions};
use crate::harness::config::{Mode, Scenario};
use crate::harness::csv::{Cell, Table};
use crate::measures::correlation_report;
use crate::model::{werner_state, DensityMatrix};

pub const SCENARIO_COLUMNS: [&str; 8] = ["t", "C", "QD", "CC", "MI", "trace_err", "min_eig", "argmin_branch"];

fn describe(s: &Scenario, mode: Mode) -> String {
    format!(
        "scenario env={} gamma={} p0={} delta={} d={} mode={}",
        s.env.kind, s.env.gamma, s.p0, s.params.delta, s.params.d, mode
    )
}

fn row(t: f64, state: &DensityMatrix) -> Result<Vec<Cell>> {
    let report = correlation_report(state)?;
    Ok(vec![
        Cell::Num(t),
        Cell::Num(report.concurrence),
        Cell::Num(report.discord),
        Cell::Num(report.classical),
        Cell::Num(report.mutual_info),
        Cell::Num(state.trace_error()),
        Cell::Num(state.min_eigenvalue()?),
        Cell::Int(report.argmin_branch as i64),
    ])
}

fn run_inner(s: &Scenario, mode: Mode) -> Result<Table> {
    let opts = NumericOptions::new(s.dt, s.stride)?;
    let mut header: Vec<&str> = SCENARIO_COLUMNS.to_vec();
    if mode == Mode::Both {
        header.push("analytic_dev");
    }
    let mut table = Table::new(header);
    match mode {
        Mode::Analytic => {
            for t in sample_times(s.t_end, opts)? {
                let state = evolve_analytic(s.p0, &s.params, &s.env, t)?;
                table.push(row(t, &state)?);
            }
        }
        Mode::Numeric | Mode::Both => {
            let traj = evolve_numeric_with(&werner_state(s.p0)?, &s.params, &s.env, s.t_end, opts)?;
            for sample in &traj.samples {
                let mut cells = row(sample.t, &sample.state)?;
                if mode == Mode::Both {
                    let exact = evolve_analytic(s.p0, &s.params, &s.env, sample.t)?;
                    cells.push(Cell::Num(exact.distance(&sample.state)));
                }
                table.push(cells);
            }
        }
    }
    Ok(table)
}

/// Time series of correlation measures, one row per stored sample.
///
/// Columns are [`SCENARIO_COLUMNS`], plus `analytic_dev` (max entry distance
/// between RK4 and closed form) when `mode` is [`Mode::Both`].
pub fn run_scenario(s: &Scenario, mode: Mode) -> Result<Table> {
    run_inner(s, mode).map_err(|e| e.with_context(describe(s, mode)))
}
