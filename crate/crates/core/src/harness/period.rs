//! Minimum concurrence over one oscillation period of the closed system.

use crate::error::{Error, Result};
use crate::evolve::{evolve_numeric_with, NumericOptions};
use crate::harness::config::Config;
use crate::harness::csv::{Cell, Table};
use crate::measures::concurrence_x;
use crate::model::{werner_state, EnvSpec, ModelParams};

/// Bisection stops once the bracket on D is this narrow.
pub const CRITICAL_D_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodMin {
    pub d: f64,
    pub nu: f64,
    /// `π/ν`.
    pub period: f64,
    pub min_concurrence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodScan {
    pub p0: f64,
    pub rows: Vec<PeriodMin>,
    /// Smallest D at which the minimum reaches 0, if the D list brackets it.
    pub critical_d: Option<f64>,
}

impl PeriodScan {
    pub fn table(&self) -> Table {
        let mut t = Table::new(["d", "nu", "period", "min_C"]);
        for r in &self.rows {
            t.push(vec![
                Cell::Num(r.d),
                Cell::Num(r.nu),
                Cell::Num(r.period),
                Cell::Num(r.min_concurrence),
            ]);
        }
        t
    }
}

/// Smallest concurrence on the RK4 grid (every step) over `[0, π/ν]`, γ = 0.
pub fn min_concurrence_over_period(p0: f64, params: &ModelParams, dt: f64) -> Result<PeriodMin> {
    let period = std::f64::consts::PI / params.nu();
    let traj = evolve_numeric_with(
        &werner_state(p0)?,
        params,
        &EnvSpec::closed(),
        period,
        NumericOptions::new(dt, 1)?,
    )?;
    let mut min = f64::INFINITY;
    for s in &traj.samples {
        min = min.min(concurrence_x(&s.state)?);
    }
    Ok(PeriodMin {
        d: params.d,
        nu: params.nu(),
        period,
        min_concurrence: min,
    })
}

/// Scans `d_values` (sorted ascending) and bisects the first interval where the
/// period minimum drops from positive to zero.
pub fn scan_min_over_period(p0: f64, delta: f64, d_values: &[f64], dt: f64) -> Result<PeriodScan> {
    if d_values.is_empty() {
        return Err(Error::Config("d_values is empty".into()));
    }
    let mut ds = d_values.to_vec();
    ds.sort_by(f64::total_cmp);
    let at = |d: f64| -> Result<PeriodMin> { min_concurrence_over_period(p0, &ModelParams::new(delta, d)?, dt) };
    let rows = ds.iter().map(|&d| at(d)).collect::<Result<Vec<_>>>()?;

    let mut critical_d = None;
    if let Some(k) = rows.iter().position(|r| r.min_concurrence == 0.0) {
        if k > 0 {
            let (mut lo, mut hi) = (rows[k - 1].d, rows[k].d);
            while hi - lo > CRITICAL_D_TOL {
                let mid = 0.5 * (lo + hi);
                if at(mid)?.min_concurrence == 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            critical_d = Some(0.5 * (lo + hi));
        }
    }
    Ok(PeriodScan { p0, rows, critical_d })
}

pub fn scan_from_config(cfg: &Config) -> Result<PeriodScan> {
    let s = cfg.scenario()?;
    if cfg.d_values.iter().any(|&d| d < 0.0) {
        return Err(Error::Config("d_values must be >= 0".into()));
    }
    scan_min_over_period(s.p0, s.params.delta, &cfg.d_values, s.dt)
}
