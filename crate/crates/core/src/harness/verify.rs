//! Regression checks against the published spot values.

use std::fmt;

use crate::error::Result;
use crate::evolve::{asymptotic_concurrence_dissipative, asymptotic_state, evolve_numeric_to, DEFAULT_DT};
use crate::harness::config::{Axis, AxisName, Mode, Scenario};
use crate::harness::scenario::run_scenario;
use crate::harness::sweep::{run_sweep, SweepGrid};
use crate::linalg::{max_abs, partial_trace, von_neumann_entropy, ComplexMat4, Subsystem, C64};
use crate::measures::{concurrence_x, correlation_report, mutual_information, theta_params};
use crate::model::{werner_state, DensityMatrix, EnvKind, EnvSpec, ModelParams};

/// Tolerance for two-decimal published figures.
pub const ROUNDING_TOL: f64 = 0.005;
/// Tolerance for values read off a plot.
pub const FIGURE_TOL: f64 = 0.01;
pub const EXACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `|value − expected| ≤ tol`
    Within,
    /// `value < expected`
    Below,
    /// `value > expected`
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tol: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    pub fn within(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        let passed = (value - expected).abs() <= tol;
        Self {
            name: name.into(),
            value,
            expected,
            tol,
            relation: Relation::Within,
            passed,
        }
    }

    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            expected: bound,
            tol: 0.0,
            relation: Relation::Below,
            passed: value < bound,
        }
    }

    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            expected: bound,
            tol: 0.0,
            relation: Relation::Above,
            passed: value > bound,
        }
    }

    fn errored(name: impl Into<String>, expected: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value: f64::NAN,
            expected,
            tol,
            relation: Relation::Within,
            passed: false,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        match self.relation {
            Relation::Within => write!(
                f,
                "[{tag}] {:<40} value={:<12.6} expected={:<10} tol={:e}",
                self.name, self.value, self.expected, self.tol
            ),
            Relation::Below => write!(
                f,
                "[{tag}] {:<40} value={:<12.6e} expected < {}",
                self.name, self.value, self.expected
            ),
            Relation::Above => write!(
                f,
                "[{tag}] {:<40} value={:<12.6e} expected > {}",
                self.name, self.value, self.expected
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} checks, {} passed, {} failed",
            self.checks.len(),
            self.checks.len() - failed,
            failed
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySettings {
    /// Decay rate used for the t = 2 snapshot.
    pub snapshot_gamma: f64,
    pub dt: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            snapshot_gamma: 0.5,
            dt: DEFAULT_DT,
        }
    }
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    /// Runs `body`; if it errors, records one failed check under `name`.
    fn group(&mut self, name: &str, body: impl FnOnce(&mut Vec<Check>) -> Result<()>) {
        let mut local = Vec::new();
        match body(&mut local) {
            Ok(()) => self.checks.extend(local),
            Err(e) => {
                self.checks.extend(local);
                let mut c = Check::errored(format!("{name} ({e})"), f64::NAN, 0.0);
                c.passed = false;
                self.checks.push(c);
            }
        }
    }
}

fn dissipative(gamma: f64) -> Result<EnvSpec> {
    EnvSpec::new(EnvKind::Dissipative, gamma)
}

fn werner_checks(out: &mut Vec<Check>) -> Result<()> {
    out.push(Check::within(
        "werner p=1/3 C",
        concurrence_x(&werner_state(1.0 / 3.0)?)?,
        0.0,
        EXACT_TOL,
    ));
    let r = correlation_report(&werner_state(0.5)?)?;
    out.push(Check::within("werner p=0.5 C", r.concurrence, 0.25, EXACT_TOL));
    out.push(Check::within("werner p=0.5 QD", r.discord, 0.26, ROUNDING_TOL));
    out.push(Check::within("werner p=0.5 CC", r.classical, 0.19, ROUNDING_TOL));
    Ok(())
}

/// Dissipative state at t = 2 from p = 0, Δ = 0.4, D = 0.
pub fn snapshot_state(gamma: f64, dt: f64) -> Result<DensityMatrix> {
    evolve_numeric_to(
        &werner_state(0.0)?,
        &ModelParams::new(0.4, 0.0)?,
        &dissipative(gamma)?,
        2.0,
        dt,
    )
}

fn snapshot_checks(settings: &VerifySettings, out: &mut Vec<Check>) -> Result<()> {
    let rho = snapshot_state(settings.snapshot_gamma, settings.dt)?;
    for (k, expected) in [0.11, 0.17, 0.17, 0.55].into_iter().enumerate() {
        out.push(Check::within(
            format!("snapshot rho{}{}", k + 1, k + 1),
            rho.get(k, k).re,
            expected,
            ROUNDING_TOL,
        ));
    }
    out.push(Check::within(
        "snapshot |rho14|",
        rho.get(0, 3).norm(),
        0.17,
        ROUNDING_TOL,
    ));
    let s_a = von_neumann_entropy(&partial_trace(rho.matrix(), Subsystem::A))?;
    let s_b = von_neumann_entropy(&partial_trace(rho.matrix(), Subsystem::B))?;
    out.push(Check::within("snapshot S(rho_A)", s_a, 0.85, ROUNDING_TOL));
    out.push(Check::within("snapshot S(rho_B)", s_b, 0.85, ROUNDING_TOL));
    out.push(Check::within(
        "snapshot S(rho)",
        von_neumann_entropy(rho.matrix())?,
        1.5,
        ROUNDING_TOL,
    ));
    out.push(Check::within(
        "snapshot MI",
        mutual_information(&rho)?,
        0.2,
        ROUNDING_TOL,
    ));
    let branches = theta_params(&rho)?.branch_entropies()?;
    out.push(Check::within("snapshot S1", branches[0], 0.83, ROUNDING_TOL));
    for (k, s) in branches.iter().enumerate().skip(1) {
        out.push(Check::within(format!("snapshot S{}", k + 1), *s, 0.75, ROUNDING_TOL));
    }
    let r = correlation_report(&rho)?;
    out.push(Check::within("snapshot QD", r.discord, 0.1, ROUNDING_TOL));
    out.push(Check::within("snapshot CC", r.classical, 0.1, ROUNDING_TOL));
    Ok(())
}

fn limit_checks(settings: &VerifySettings, out: &mut Vec<Check>) -> Result<()> {
    let quarter = ComplexMat4::identity() * C64::new(0.25, 0.0);
    let noisy = EnvSpec::new(EnvKind::Noisy, 0.5)?;
    let rho = evolve_numeric_to(
        &werner_state(0.5)?,
        &ModelParams::new(0.0, 0.0)?,
        &noisy,
        10.0,
        settings.dt,
    )?;
    out.push(Check::within(
        "noisy t=10 max|rho - I/4|",
        max_abs(&(rho.matrix() - quarter)),
        0.0,
        1e-4,
    ));
    let lim = asymptotic_state(0.3, &ModelParams::new(0.2, 1.0)?, &noisy)?;
    out.push(Check::within(
        "noisy limit max|rho - I/4|",
        max_abs(&(lim.matrix() - quarter)),
        0.0,
        EXACT_TOL,
    ));

    let deph = EnvSpec::new(EnvKind::Dephasing, 0.5)?;
    let rho = evolve_numeric_to(
        &werner_state(0.5)?,
        &ModelParams::new(0.0, 0.0)?,
        &deph,
        20.0,
        settings.dt,
    )?;
    let target = [0.125, 0.375, 0.375, 0.125];
    let dev = (0..4).map(|k| (rho.get(k, k).re - target[k]).abs()).fold(0.0, f64::max);
    out.push(Check::within(
        "dephasing t=20 max|diag - target|",
        dev,
        0.0,
        ROUNDING_TOL,
    ));

    out.push(Check::within(
        "asymptotic C delta=0.2",
        asymptotic_concurrence_dissipative(0.2, 0.5),
        0.29,
        ROUNDING_TOL,
    ));
    out.push(Check::within(
        "asymptotic C delta=0.5",
        asymptotic_concurrence_dissipative(0.5, 0.5),
        0.0,
        EXACT_TOL,
    ));
    let lim = asymptotic_state(0.5, &ModelParams::new(0.2, 0.0)?, &dissipative(0.5)?)?;
    out.push(Check::within(
        "asymptotic state delta=0.2 C",
        concurrence_x(&lim)?,
        0.29,
        ROUNDING_TOL,
    ));
    let r = correlation_report(&asymptotic_state(
        0.5,
        &ModelParams::new(0.8, 0.0)?,
        &dissipative(0.5)?,
    )?)?;
    out.push(Check::within("asymptotic delta=0.8 QD", r.discord, 0.06, ROUNDING_TOL));
    out.push(Check::within(
        "asymptotic delta=0.8 CC",
        r.classical,
        0.06,
        ROUNDING_TOL,
    ));
    Ok(())
}

fn scenario(p0: f64, delta: f64, d: f64, env: EnvSpec, t_end: f64, dt: f64) -> Result<Scenario> {
    Scenario::new(p0, ModelParams::new(delta, d)?, env, t_end, dt, 10, None)
}

fn scenario_checks(settings: &VerifySettings, out: &mut Vec<Check>) -> Result<()> {
    // closed, p = 0.5, D = 1: first row only matters
    let t = run_scenario(
        &scenario(0.5, 0.0, 1.0, EnvSpec::closed(), 0.1, settings.dt)?,
        Mode::Numeric,
    )?;
    out.push(Check::within(
        "closed D=1 t=0 C",
        t.num(0, "C").unwrap_or(f64::NAN),
        0.25,
        EXACT_TOL,
    ));
    out.push(Check::within(
        "closed D=1 t=0 QD",
        t.num(0, "QD").unwrap_or(f64::NAN),
        0.26,
        ROUNDING_TOL,
    ));
    out.push(Check::within(
        "closed D=1 t=0 CC",
        t.num(0, "CC").unwrap_or(f64::NAN),
        0.19,
        ROUNDING_TOL,
    ));

    let t = run_scenario(
        &scenario(0.5, 0.0, 0.0, dissipative(0.5)?, 10.0, settings.dt)?,
        Mode::Numeric,
    )?;
    let last = t.rows.len() - 1;
    for col in ["C", "QD", "CC"] {
        out.push(Check::below(
            format!("dissipative delta=0 t=10 {col}"),
            t.num(last, col).unwrap_or(f64::NAN),
            0.01,
        ));
    }

    let t = run_scenario(
        &scenario(0.0, 0.8, 0.0, dissipative(0.5)?, 30.0, settings.dt)?,
        Mode::Numeric,
    )?;
    let max_c = (0..t.rows.len())
        .map(|i| t.num(i, "C").unwrap_or(f64::NAN))
        .fold(0.0, f64::max);
    out.push(Check::within("p=0 delta=0.8 max C over [0,30]", max_c, 0.0, EXACT_TOL));
    let last = t.rows.len() - 1;
    let (qd, cc) = (
        t.num(last, "QD").unwrap_or(f64::NAN),
        t.num(last, "CC").unwrap_or(f64::NAN),
    );
    out.push(Check::above("p=0 delta=0.8 t=30 QD", qd, 0.0));
    out.push(Check::above("p=0 delta=0.8 t=30 CC", cc, 0.0));
    out.push(Check::within("p=0 delta=0.8 t=30 QD-CC", qd - cc, 0.0, ROUNDING_TOL));
    Ok(())
}

fn sweep_checks(settings: &VerifySettings, out: &mut Vec<Check>) -> Result<()> {
    let grid = SweepGrid::new(
        Axis::new(AxisName::T, 0.0, 30.0, 4)?,
        Axis::new(AxisName::Delta, 0.0, 1.0, 11)?,
        scenario(0.5, 0.0, 0.0, dissipative(0.5)?, 30.0, settings.dt)?,
        Mode::Numeric,
    )?;
    let table = run_sweep(&grid);
    let late = (table.rows.len() - 11)..table.rows.len();
    for i in late {
        let delta = table.num(i, "delta").unwrap_or(f64::NAN);
        let name = |q: &str| format!("sweep t=30 delta={delta:.1} {q}");
        if delta >= 0.5 - 1e-12 {
            out.push(Check::within(
                name("C"),
                table.num(i, "C").unwrap_or(f64::NAN),
                0.0,
                FIGURE_TOL,
            ));
        }
        if (delta - 0.2).abs() < 1e-12 {
            out.push(Check::within(
                name("QD"),
                table.num(i, "QD").unwrap_or(f64::NAN),
                0.21,
                ROUNDING_TOL,
            ));
            out.push(Check::within(
                name("CC"),
                table.num(i, "CC").unwrap_or(f64::NAN),
                0.21,
                ROUNDING_TOL,
            ));
        }
    }
    Ok(())
}

/// Every published spot value, recomputed.
pub fn verify_spot_values(settings: &VerifySettings) -> VerifyReport {
    let mut suite = Suite { checks: Vec::new() };
    suite.group("werner", werner_checks);
    suite.group("snapshot", |out| snapshot_checks(settings, out));
    suite.group("limits", |out| limit_checks(settings, out));
    suite.group("scenarios", |out| scenario_checks(settings, out));
    suite.group("sweep", |out| sweep_checks(settings, out));
    VerifyReport { checks: suite.checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_relations() {
        assert!(Check::within("a", 0.254, 0.25, 0.005).passed);
        assert!(!Check::within("a", 0.256, 0.25, 0.005).passed);
        assert!(!Check::within("a", f64::NAN, 0.25, 0.005).passed);
        assert!(Check::below("b", 0.001, 0.01).passed);
        assert!(!Check::above("c", 0.0, 0.0).passed);
        assert!(Check::within("a", 0.25, 0.25, 0.0).to_string().starts_with("[PASS]"));
    }

    #[test]
    fn perturbed_gamma_fails_snapshot() {
        let mut out = Vec::new();
        snapshot_checks(
            &VerifySettings {
                snapshot_gamma: 0.6,
                dt: 1e-3,
            },
            &mut out,
        )
        .unwrap();
        assert!(out.iter().any(|c| c.name == "snapshot rho11" && !c.passed));
    }

    #[test]
    fn report_summary_counts() {
        let report = VerifyReport {
            checks: vec![Check::within("x", 1.0, 1.0, 0.0), Check::within("y", 2.0, 1.0, 0.1)],
        };
        assert!(!report.all_passed());
        assert_eq!(report.failures().count(), 1);
        assert!(report.to_string().ends_with("2 checks, 1 passed, 1 failed"));
    }
}
