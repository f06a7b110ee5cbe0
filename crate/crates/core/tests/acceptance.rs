//! Acceptance criteria 1–8. Each test prints its individual checks followed by
//! one `[PASS]`/`[FAIL]` line for the criterion.
//!
//! `cargo test -p spindyn-core --test acceptance -- --nocapture --test-threads=1`

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spindyn_core::evolve::{compare_with_numeric, evolve_numeric_to, evolve_numeric_with, NumericOptions};
use spindyn_core::harness::period::scan_min_over_period;
use spindyn_core::harness::{run_scenario, Check, Config, Mode};
use spindyn_core::linalg::{partial_trace, von_neumann_entropy};
use spindyn_core::{
    asymptotic_concurrence_dissipative, concurrence_general, concurrence_x, correlation_report, discord_and_classical,
    discord_bruteforce, theta_params, werner_state, ComplexMat4, DensityMatrix, EnvKind, EnvSpec, ModelParams,
    Subsystem, Trajectory, C64,
};

const ROUND: f64 = 0.005;

fn env(kind: EnvKind, gamma: f64) -> EnvSpec {
    EnvSpec::new(kind, gamma).unwrap()
}

fn params(delta: f64, d: f64) -> ModelParams {
    ModelParams::new(delta, d).unwrap()
}

fn trajectory(p: f64, params: ModelParams, env: EnvSpec, t_end: f64, stride: usize) -> Trajectory {
    evolve_numeric_with(
        &werner_state(p).unwrap(),
        &params,
        &env,
        t_end,
        NumericOptions::new(1e-3, stride).unwrap(),
    )
    .unwrap()
}

fn state_at(p: f64, params: ModelParams, env: EnvSpec, t: f64) -> DensityMatrix {
    evolve_numeric_to(&werner_state(p).unwrap(), &params, &env, t, 1e-3).unwrap()
}

fn max_abs(m: &ComplexMat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn conclude(number: u32, title: &str, checks: &[Check], started: Instant, budget_s: f64) {
    for c in checks {
        println!("    {c}");
    }
    let elapsed = started.elapsed().as_secs_f64();
    let failed = checks.iter().filter(|c| !c.passed).count();
    let tag = if failed == 0 { "PASS" } else { "FAIL" };
    println!(
        "[{tag}] criterion {number}: {title} ({} checks, {failed} failed, {elapsed:.2}s, budget {budget_s}s)",
        checks.len()
    );
    let names: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert!(failed == 0, "criterion {number} failed: {}", names.join(", "));
}

#[test]
fn criterion_1_initial_spot_values() {
    let started = Instant::now();
    let mut checks = Vec::new();
    for d in [0.0, 1.0, 2.0, 3.0, 5.0] {
        let scenario = Config {
            d,
            t_end: 0.01,
            ..Config::default()
        }
        .scenario()
        .unwrap();
        let table = run_scenario(&scenario, Mode::Numeric).unwrap();
        assert_eq!(table.num(0, "t"), Some(0.0));
        checks.push(Check::within(
            format!("D={d} t=0 C"),
            table.num(0, "C").unwrap(),
            0.25,
            1e-9,
        ));
        checks.push(Check::within(
            format!("D={d} t=0 QD"),
            table.num(0, "QD").unwrap(),
            0.26,
            ROUND,
        ));
        checks.push(Check::within(
            format!("D={d} t=0 CC"),
            table.num(0, "CC").unwrap(),
            0.19,
            ROUND,
        ));
    }
    conclude(1, "t=0 spot values for p=0.5", &checks, started, 1.0);
}

#[test]
fn criterion_2_snapshot_at_t2() {
    let started = Instant::now();
    let rho = state_at(0.0, params(0.4, 0.0), env(EnvKind::Dissipative, 0.5), 2.0);
    let mut checks = Vec::new();
    for (k, expected) in [0.11, 0.17, 0.17, 0.55].into_iter().enumerate() {
        checks.push(Check::within(
            format!("rho{0}{0}", k + 1),
            rho.get(k, k).re,
            expected,
            ROUND,
        ));
    }
    checks.push(Check::within("|rho14|", rho.get(0, 3).norm(), 0.17, ROUND));
    let s_a = von_neumann_entropy(&partial_trace(rho.matrix(), Subsystem::A)).unwrap();
    let s_b = von_neumann_entropy(&partial_trace(rho.matrix(), Subsystem::B)).unwrap();
    checks.push(Check::within("S(rho_A)", s_a, 0.85, ROUND));
    checks.push(Check::within("S(rho_B)", s_b, 0.85, ROUND));
    checks.push(Check::within(
        "S(rho)",
        von_neumann_entropy(rho.matrix()).unwrap(),
        1.5,
        ROUND,
    ));
    let s = theta_params(&rho).unwrap().branch_entropies().unwrap();
    checks.push(Check::within("S1", s[0], 0.83, ROUND));
    for (k, v) in s.iter().enumerate().skip(1) {
        checks.push(Check::within(format!("S{}", k + 1), *v, 0.75, ROUND));
    }
    let r = correlation_report(&rho).unwrap();
    checks.push(Check::within("QD", r.discord, 0.1, ROUND));
    checks.push(Check::within("CC", r.classical, 0.1, ROUND));
    conclude(
        2,
        "dissipative snapshot p=0, delta=0.4, gamma=0.5, t=2",
        &checks,
        started,
        5.0,
    );
}

#[test]
fn criterion_3_dissipative_asymptotics() {
    let started = Instant::now();
    let diss = env(EnvKind::Dissipative, 0.5);
    let c_inf = asymptotic_concurrence_dissipative(0.2, 0.5);
    let mut checks = vec![Check::within("asymptotic C delta=0.2", c_inf, 0.293, ROUND)];
    let late = correlation_report(&state_at(0.5, params(0.2, 0.0), diss, 30.0)).unwrap();
    checks.push(Check::within(
        "numeric C(t=30) vs asymptotic, delta=0.2",
        late.concurrence,
        c_inf,
        0.01,
    ));
    checks.push(Check::within("QD(t=30) delta=0.2", late.discord, 0.21, ROUND));
    checks.push(Check::within("CC(t=30) delta=0.2", late.classical, 0.21, ROUND));
    let late = correlation_report(&state_at(0.5, params(0.8, 0.0), diss, 30.0)).unwrap();
    checks.push(Check::within("QD(t=30) delta=0.8", late.discord, 0.06, ROUND));
    checks.push(Check::within("CC(t=30) delta=0.8", late.classical, 0.06, ROUND));
    conclude(3, "dissipative late-time values", &checks, started, 10.0);
}

#[test]
fn criterion_4_environment_limits() {
    let started = Instant::now();
    let mut checks = Vec::new();
    let rho = state_at(0.5, params(0.0, 0.0), env(EnvKind::Noisy, 0.5), 10.0);
    let quarter = ComplexMat4::identity() * C64::new(0.25, 0.0);
    checks.push(Check::within(
        "noisy t=10 max|rho - I/4|",
        max_abs(&(rho.matrix() - quarter)),
        0.0,
        1e-4,
    ));
    let r = correlation_report(&rho).unwrap();
    checks.push(Check::below("noisy t=10 C", r.concurrence, 1e-3));
    checks.push(Check::below("noisy t=10 QD", r.discord, 1e-3));
    checks.push(Check::below("noisy t=10 CC", r.classical, 1e-3));
    let r = correlation_report(&state_at(0.5, params(0.0, 0.0), env(EnvKind::Dephasing, 0.5), 10.0)).unwrap();
    checks.push(Check::within("dephasing t=10 CC", r.classical, 0.19, ROUND));
    checks.push(Check::below("dephasing t=10 QD", r.discord, 1e-3));
    checks.push(Check::within("dephasing t=10 C", r.concurrence, 0.0, 0.0));
    conclude(4, "noisy and dephasing limits", &checks, started, 10.0);
}

fn random_x_state(rng: &mut impl Rng, phases: bool) -> DensityMatrix {
    let raw: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.01..1.0));
    let total: f64 = raw.iter().sum();
    let diag = raw.map(|x| x / total);
    let mut m = ComplexMat4::zeros();
    for (k, v) in diag.iter().enumerate() {
        m[(k, k)] = C64::new(*v, 0.0);
    }
    for (r, c) in [(0, 3), (1, 2)] {
        let mag = rng.gen_range(-1.0..1.0) * (diag[r] * diag[c]).sqrt();
        let z = if phases {
            C64::from_polar(mag, rng.gen_range(0.0..std::f64::consts::TAU))
        } else {
            C64::new(mag, 0.0)
        };
        m[(r, c)] = z;
        m[(c, r)] = z.conj();
    }
    DensityMatrix::new(m).unwrap()
}

#[test]
fn criterion_5_oracle_equivalence() {
    let started = Instant::now();
    let mut checks = Vec::new();

    let mut worst = 0.0_f64;
    let mut worst_at = String::new();
    for kind in [EnvKind::Dissipative, EnvKind::Noisy, EnvKind::Dephasing] {
        for p in [0.0, 0.5, 1.0] {
            for delta in [0.0, 0.2, 0.8] {
                for d in [0.0, 1.0] {
                    for gamma in [0.25, 0.5] {
                        let dev = compare_with_numeric(
                            p,
                            &params(delta, d),
                            &env(kind, gamma),
                            10.0,
                            NumericOptions::default(),
                        )
                        .unwrap();
                        if dev.exceeds(1e-5) {
                            println!(
                                "    diagnostic: {kind} p={p} delta={delta} d={d} gamma={gamma}: {:.3e} in {} at t={}",
                                dev.max_deviation, dev.worst_element, dev.worst_t
                            );
                        }
                        if dev.max_deviation > worst {
                            worst = dev.max_deviation;
                            worst_at = format!("{} at t={}", dev.worst_element, dev.worst_t);
                        }
                    }
                }
            }
        }
    }
    checks.push(Check::within(
        format!("closed form vs RK4, 108 trajectories (worst {worst_at})"),
        worst,
        0.0,
        1e-5,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let rho = random_x_state(&mut rng, false);
        let gap = discord_and_classical(&rho).unwrap().discord - discord_bruteforce(&rho, 64).unwrap();
        worst = worst.max(gap.abs());
    }
    checks.push(Check::within(
        "closed-form vs swept discord, 50 X-states",
        worst,
        0.0,
        2e-3,
    ));

    let mut worst = 0.0_f64;
    for _ in 0..500 {
        let rho = random_x_state(&mut rng, true);
        worst = worst.max((concurrence_x(&rho).unwrap() - concurrence_general(&rho).unwrap()).abs());
    }
    checks.push(Check::within(
        "X-state vs general concurrence, 500 X-states",
        worst,
        0.0,
        1e-9,
    ));
    checks.push(Check::below("runtime (s)", started.elapsed().as_secs_f64(), 120.0));
    conclude(5, "oracle equivalence", &checks, started, 120.0);
}

#[test]
fn criterion_6_structural_invariants() {
    let started = Instant::now();
    let mut trajectories = Vec::new();
    for kind in EnvKind::ALL {
        let gammas: &[f64] = if kind == EnvKind::Closed { &[0.0] } else { &[0.25, 0.5] };
        for &gamma in gammas {
            for p in [0.0, 0.5, 1.0] {
                for delta in [0.0, 0.2, 0.8] {
                    for d in [0.0, 1.0] {
                        trajectories.push(trajectory(p, params(delta, d), env(kind, gamma), 10.0, 10));
                    }
                }
            }
        }
    }
    let preset_dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets");
    for entry in std::fs::read_dir(&preset_dir).unwrap() {
        let cfg = Config::load(entry.unwrap().path()).unwrap();
        if cfg.axis1.is_some() {
            continue;
        }
        let s = cfg.scenario().unwrap();
        trajectories.push(trajectory(s.p0, s.params, s.env, s.t_end, s.stride));
    }

    let (mut trace, mut herm, mut min_eig, mut split) = (0.0_f64, 0.0_f64, f64::INFINITY, 0.0_f64);
    let mut samples = 0usize;
    for traj in &trajectories {
        for s in &traj.samples {
            let m = s.state.matrix();
            trace = trace.max(s.state.trace_error());
            herm = herm.max(max_abs(&(m - m.adjoint())));
            min_eig = min_eig.min(s.state.min_eigenvalue().unwrap());
            let r = correlation_report(&s.state).unwrap();
            split = split.max((r.discord + r.classical - r.mutual_info).abs());
            samples += 1;
        }
    }
    let checks = vec![
        Check::within(format!("max |trace - 1| over {samples} samples"), trace, 0.0, 1e-7),
        Check::within("max Hermiticity deviation", herm, 0.0, 1e-9),
        Check::above("min eigenvalue (> -1e-6)", min_eig, -1e-6),
        Check::within("max |QD + CC - I|", split, 0.0, 1e-9),
    ];
    conclude(
        6,
        &format!("structural invariants on {} trajectories", trajectories.len()),
        &checks,
        started,
        60.0,
    );
}

#[test]
fn criterion_7_closed_system() {
    let started = Instant::now();
    let a = trajectory(0.5, params(0.0, 1.0), EnvSpec::closed(), 10.0, 10);
    let b = trajectory(0.5, params(0.7, 1.0), EnvSpec::closed(), 10.0, 10);
    let gap = a
        .samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| x.state.distance(&y.state))
        .fold(0.0, f64::max);
    let mut checks = vec![Check::within(
        "closed delta=0 vs delta=0.7 max entry gap",
        gap,
        0.0,
        1e-8,
    )];

    let scan = scan_min_over_period(0.5, 0.0, &[1.0, 2.0, 3.0, 5.0], 1e-3).unwrap();
    for row in &scan.rows {
        println!("    min C over one period, D={}: {:.6}", row.d, row.min_concurrence);
    }
    let drops = scan
        .rows
        .windows(2)
        .all(|w| w[1].min_concurrence <= w[0].min_concurrence);
    checks.push(Check::within(
        "min-over-period non-increasing in D (1 = yes)",
        drops as u8 as f64,
        1.0,
        0.0,
    ));
    let zero = scan.rows.iter().filter(|r| r.min_concurrence == 0.0).count();
    checks.push(Check::above("D values where min C reaches 0", zero as f64, 0.0));
    match scan.critical_d {
        Some(d) => println!("    critical D (reported, not asserted): {d:.4}"),
        None => println!("    critical D not bracketed"),
    }
    conclude(7, "closed-system behaviour", &checks, started, 30.0);
}

#[test]
fn criterion_8_sudden_death_ordering() {
    let started = Instant::now();
    let traj = trajectory(0.5, params(0.0, 0.0), env(EnvKind::Noisy, 0.5), 3.0, 1);
    let death = traj.samples.iter().find(|s| concurrence_x(&s.state).unwrap() == 0.0);
    let mut checks = Vec::new();
    match death {
        Some(s) => {
            let r = correlation_report(&s.state).unwrap();
            println!("    first C = 0 at t = {}", s.t);
            checks.push(Check::above(format!("QD at t={}", s.t), r.discord, 0.0));
            checks.push(Check::above(format!("CC at t={}", s.t), r.classical, 0.0));
            checks.push(Check::below("death time", s.t, f64::INFINITY));
        }
        None => checks.push(Check::below("death time", f64::INFINITY, f64::INFINITY)),
    }
    conclude(
        8,
        "concurrence dies first (noisy, gamma=0.5, p=0.5)",
        &checks,
        started,
        10.0,
    );
}
