//! Two-axis parameter sweeps.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolve::{evolve_analytic, evolve_numeric_to};
use crate::harness::config::{Axis, AxisName, Config, Mode, Scenario};
use crate::harness::csv::{Cell, Table};
use crate::measures::correlation_report;
use crate::model::{werner_state, DensityMatrix, EnvSpec, ModelParams};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axis1: Axis,
    pub axis2: Axis,
    /// Values for every parameter not on an axis. `t_end` is the evaluation
    /// time unless one axis is `t`.
    pub base: Scenario,
    /// [`Mode::Numeric`] or [`Mode::Analytic`].
    pub mode: Mode,
}

impl SweepGrid {
    pub fn new(axis1: Axis, axis2: Axis, base: Scenario, mode: Mode) -> Result<Self> {
        if axis1.name == axis2.name {
            return Err(Error::Config(format!("both axes are `{}`", axis1.name.as_str())));
        }
        if mode == Mode::Both {
            return Err(Error::Config("sweeps support mode=numeric or mode=analytic".into()));
        }
        Ok(Self {
            axis1,
            axis2,
            base,
            mode,
        })
    }

    pub fn from_config(cfg: &Config) -> Result<Self> {
        let (Some(a1), Some(a2)) = (cfg.axis1, cfg.axis2) else {
            return Err(Error::Config("sweep needs both axis1 and axis2".into()));
        };
        Self::new(a1, a2, cfg.scenario()?, cfg.mode)
    }

    fn t_axis(&self) -> Option<u8> {
        match (self.axis1.name, self.axis2.name) {
            (AxisName::T, _) => Some(1),
            (_, AxisName::T) => Some(2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    p: f64,
    delta: f64,
    d: f64,
    gamma: f64,
    t: f64,
}

impl Point {
    fn from_base(base: &Scenario) -> Self {
        Point {
            p: base.p0,
            delta: base.params.delta,
            d: base.params.d,
            gamma: base.env.gamma,
            t: base.t_end,
        }
    }

    fn with(mut self, name: AxisName, v: f64) -> Self {
        match name {
            AxisName::Delta => self.delta = v,
            AxisName::D => self.d = v,
            AxisName::Gamma => self.gamma = v,
            AxisName::P => self.p = v,
            AxisName::T => self.t = v,
        }
        self
    }
}

type CellResult = std::result::Result<[f64; 3], &'static str>;

fn measures(state: &DensityMatrix) -> Result<[f64; 3]> {
    let r = correlation_report(state)?;
    Ok([r.concurrence, r.discord, r.classical])
}

/// Every cell of one task; `points` share all parameters except possibly `t`,
/// which is nondecreasing when there is a t axis.
fn evaluate_task(grid: &SweepGrid, points: &[Point]) -> Vec<CellResult> {
    let first = points[0];
    let setup = (|| -> Result<(DensityMatrix, ModelParams, EnvSpec)> {
        Ok((
            werner_state(first.p)?,
            ModelParams::with_coupling(grid.base.params.j, first.delta, first.d)?,
            EnvSpec::new(grid.base.env.kind, first.gamma)?,
        ))
    })();
    let (rho0, params, env) = match setup {
        Ok(v) => v,
        Err(e) => return vec![Err(e.code()); points.len()],
    };
    match grid.mode {
        Mode::Analytic => points
            .iter()
            .map(|pt| {
                evolve_analytic(pt.p, &params, &env, pt.t)
                    .and_then(|s| measures(&s))
                    .map_err(|e| e.code())
            })
            .collect(),
        _ => {
            // march forward through the t values, reusing the previous state
            let mut out = Vec::with_capacity(points.len());
            let mut state = rho0;
            let mut now = 0.0;
            let mut failed: Option<&'static str> = None;
            for pt in points {
                if let Some(code) = failed {
                    out.push(Err(code));
                    continue;
                }
                let step = if pt.t > now {
                    evolve_numeric_to(&state, &params, &env, pt.t - now, grid.base.dt)
                } else {
                    Ok(state)
                };
                match step.and_then(|s| measures(&s).map(|m| (s, m))) {
                    Ok((s, m)) => {
                        state = s;
                        now = now.max(pt.t);
                        out.push(Ok(m));
                    }
                    Err(e) => {
                        failed = Some(e.code());
                        out.push(Err(e.code()));
                    }
                }
            }
            out
        }
    }
}

/// Tasks in a fixed order, each a list of `(axis1 index, axis2 index, point)`.
fn plan(grid: &SweepGrid) -> Vec<Vec<(usize, usize, Point)>> {
    let base = Point::from_base(&grid.base);
    let cell = |i: usize, j: usize| {
        (
            i,
            j,
            base.with(grid.axis1.name, grid.axis1.value(i))
                .with(grid.axis2.name, grid.axis2.value(j)),
        )
    };
    let (n1, n2) = (grid.axis1.count, grid.axis2.count);
    match grid.t_axis() {
        Some(1) => (0..n2).map(|j| (0..n1).map(|i| cell(i, j)).collect()).collect(),
        Some(_) => (0..n1).map(|i| (0..n2).map(|j| cell(i, j)).collect()).collect(),
        None => (0..n1).flat_map(|i| (0..n2).map(move |j| vec![cell(i, j)])).collect(),
    }
}

fn assemble(grid: &SweepGrid, tasks: &[Vec<(usize, usize, Point)>], results: Vec<Vec<CellResult>>) -> Table {
    let (n1, n2) = (grid.axis1.count, grid.axis2.count);
    let mut cells: Vec<Option<CellResult>> = vec![None; n1 * n2];
    for (task, res) in tasks.iter().zip(results) {
        for (&(i, j, _), r) in task.iter().zip(res) {
            cells[i * n2 + j] = Some(r);
        }
    }
    let mut table = Table::new([
        grid.axis1.name.as_str(),
        grid.axis2.name.as_str(),
        "C",
        "QD",
        "CC",
        "error",
    ]);
    for i in 0..n1 {
        for j in 0..n2 {
            let mut row = vec![Cell::Num(grid.axis1.value(i)), Cell::Num(grid.axis2.value(j))];
            match cells[i * n2 + j].expect("every cell planned") {
                Ok(m) => {
                    row.extend(m.iter().map(|&x| Cell::Num(x)));
                    row.push(Cell::Text(String::new()));
                }
                Err(code) => {
                    row.extend([Cell::Num(f64::NAN), Cell::Num(f64::NAN), Cell::Num(f64::NAN)]);
                    row.push(Cell::Text(code.into()));
                }
            }
            table.push(row);
        }
    }
    table
}

/// Row-major grid table (axis1 outer, axis2 inner) with columns
/// `<axis1>,<axis2>,C,QD,CC,error`. Cells run in parallel; a failing cell
/// becomes a NaN row with its error code.
///
/// With a `t` axis, each trajectory is integrated once and read off at every
/// t value in turn.
pub fn run_sweep(grid: &SweepGrid) -> Table {
    let tasks = plan(grid);
    let results = tasks.par_iter().map(|task| evaluate_points(grid, task)).collect();
    assemble(grid, &tasks, results)
}

/// Same as [`run_sweep`] on the current thread.
pub fn run_sweep_serial(grid: &SweepGrid) -> Table {
    let tasks = plan(grid);
    let results = tasks.iter().map(|task| evaluate_points(grid, task)).collect();
    assemble(grid, &tasks, results)
}

fn evaluate_points(grid: &SweepGrid, task: &[(usize, usize, Point)]) -> Vec<CellResult> {
    let points: Vec<Point> = task.iter().map(|c| c.2).collect();
    evaluate_task(grid, &points)
}
