//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process fails if any
//! criterion does.

mod common;

use std::time::{Duration, Instant};

use qpga::array::{expectation, Estimation};
use qpga::catmap::{cat_map_unitary, covariance_scan, CatMapSpec};
use qpga::decision::{decide_threshold, required_shots, DecisionParams, Verdict};
use qpga::domain::{PhaseDomain, Sign};
use qpga::phase_space::{fundamental_cell, phase_point_op};
use qpga::random;
use qpga::scattering::{scatter_exact, scatter_sampled};
use qpga::wigner::{general_line_sum, line_class, translation_probabilities, wigner, wigner_circuit};
use qpga::{OperatorSpec, QuditState, Tolerances, C64};

use common::{phase_point_trace, rng, trace_of_product, wigner_value};
use std::process::Command;

const TOL: Tolerances = Tolerances::DEFAULT;

type Criterion = (&'static str, fn() -> Check, Option<Duration>);

struct Check {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Check {
    Check {
        ok,
        detail: detail.into(),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let mut c = f();
    let elapsed = start.elapsed();
    c.detail += &format!("; {:.2}s", elapsed.as_secs_f64());
    if let Some(limit) = limit {
        if elapsed > limit {
            c.ok = false;
            c.detail += &format!(" exceeds {}s", limit.as_secs());
        }
    }
    c
}

fn basis_suite() -> Check {
    let mut worst_structure = 0.0f64;
    let mut worst_orthogonality = 0.0f64;
    for n in [2usize, 3, 4, 5, 8] {
        let ops: Vec<_> = fundamental_cell(n).map(|idx| (idx, phase_point_op(idx))).collect();
        for (_, a) in &ops {
            worst_structure = worst_structure
                .max(a.hermiticity_deviation())
                .max(a.unitarity_deviation());
        }
        for (i, (_, a)) in ops.iter().enumerate() {
            for (j, (_, b)) in ops.iter().enumerate() {
                let expected = if i == j { n as f64 } else { 0.0 };
                let t = trace_of_product(a, b);
                worst_orthogonality = worst_orthogonality.max((t - C64::new(expected, 0.0)).norm());
            }
        }
    }
    check(
        worst_structure <= 1e-12 && worst_orthogonality <= 1e-10,
        format!(
            "max hermitian/unitary deviation {worst_structure:.1e}, max orthogonality error {worst_orthogonality:.1e}"
        ),
    )
}

fn scattering_identity() -> Check {
    let mut r = rng(1001);
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 1..=8 {
        for _ in 0..100 {
            let rho = random::mixed_state(n, &mut r);
            let a = random::unitary(n, &mut r);
            let out = scatter_exact(&rho, &a, &TOL).unwrap();
            let oracle = trace_of_product(&a, &rho.density_matrix());
            worst = worst
                .max((out.sigma_z - oracle.re).abs())
                .max((out.sigma_y - oracle.im).abs());
            count += 1;
        }
    }
    check(
        worst <= 1e-10,
        format!("{count} pairs, max |circuit - Tr(a rho)| {worst:.1e}"),
    )
}

fn programmable_pipeline() -> Check {
    let mut r = rng(1002);
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 2..=8 {
        for i in 0..50 {
            let rho = random::mixed_state(n, &mut r);
            // alternate hermitian and general complex operators
            let o = if i % 2 == 0 {
                random::hermitian(n, &mut r)
            } else {
                random::complex_matrix(n, &mut r)
            };
            let oracle = trace_of_product(&rho.density_matrix(), &o);
            let e = expectation(&rho, &OperatorSpec::matrix(o).unwrap(), Estimation::Exact, &TOL).unwrap();
            worst = worst.max((e.value() - oracle).norm());
            count += 1;
        }
    }
    check(
        worst <= 1e-10,
        format!("{count} (rho, O) pairs, max |pipeline - Tr(rho O)| {worst:.1e}"),
    )
}

fn wigner_duality() -> Check {
    let mut r = rng(1003);
    let mut worst = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for n in 1..=6 {
        for _ in 0..10 {
            let rho = random::mixed_state(n, &mut r);
            let direct = wigner(&rho);
            let circuit = wigner_circuit(&rho).unwrap();
            worst = worst.max(direct.max_abs_diff(&circuit));
            for q in 0..2 * n as i64 {
                for p in 0..2 * n as i64 {
                    worst_oracle = worst_oracle.max((direct.get(q, p) - wigner_value(&rho, q, p)).abs());
                }
            }
        }
    }
    check(
        worst <= 1e-10 && worst_oracle <= 1e-10,
        format!("max |circuit - direct| {worst:.1e}, max |direct - closed form| {worst_oracle:.1e}"),
    )
}

fn line_probability_correspondence() -> Check {
    let mut r = rng(1004);
    let mut worst = 0.0f64;
    let mut worst_family = 0.0f64;
    let mut worst_probability_total = 0.0f64;
    let mut families = 0;
    for n in 2..=5usize {
        let side = 2 * n as i64;
        let states = [random::mixed_state(n, &mut r), random::pure_state(n, &mut r)];
        for rho in &states {
            let w = wigner(rho);
            for a in 0..side {
                for b in 0..side {
                    if a % n as i64 == 0 && b % n as i64 == 0 {
                        continue;
                    }
                    let probs = translation_probabilities(rho, b, a, &TOL).unwrap();
                    worst_probability_total = worst_probability_total.max((probs.iter().sum::<f64>() - 1.0).abs());
                    let mut family_total = 0.0;
                    for c in 0..side {
                        let s = general_line_sum(&w, a, b, c);
                        family_total += s;
                        worst = worst.max((s - probs[line_class(n, c)]).abs());
                    }
                    worst_family = worst_family.max((family_total - 1.0).abs());
                    families += 1;
                }
            }
        }
    }
    check(
        worst <= 1e-8 && worst_family <= 1e-10 && worst_probability_total <= 1e-10,
        format!(
            "{families} (state, family) cases, max |line sum - projector| {worst:.1e}, \
             max |family sum - 1| {worst_family:.1e}, max |sum of probabilities - 1| {worst_probability_total:.1e}"
        ),
    )
}

fn sampling_convergence() -> Check {
    let mut r = rng(1006);
    let rho = random::mixed_state(3, &mut r);
    let a = random::unitary(3, &mut r);
    let exact = scatter_exact(&rho, &a, &TOL).unwrap();
    let mut inside = 0;
    for seed in 0..100 {
        let s = scatter_sampled(&rho, &a, 100_000, seed, &TOL).unwrap();
        let z_ok = (s.sigma_z - exact.sigma_z).abs() <= 5.0 * s.stderr_z;
        let y_ok = (s.sigma_y - exact.sigma_y).abs() <= 5.0 * s.stderr_y;
        if z_ok && y_ok {
            inside += 1;
        }
    }
    let stderr = |shots: u64| {
        let runs: Vec<f64> = (0..20)
            .map(|seed| scatter_sampled(&rho, &a, shots, 500 + seed, &TOL).unwrap().stderr_z)
            .collect();
        runs.iter().sum::<f64>() / runs.len() as f64
    };
    let (s3, s4, s5) = (stderr(1_000), stderr(10_000), stderr(100_000));
    let root10 = 10f64.sqrt();
    let ratios = [s3 / s4 / root10, s4 / s5 / root10];
    let scaling_ok = ratios.iter().all(|&x| (1.0 / 1.2..=1.2).contains(&x));
    check(
        inside >= 99 && scaling_ok,
        format!(
            "{inside}/100 seeds within 5 stderr (z and y), stderr ratios / sqrt(10) = {:.3}, {:.3}",
            ratios[0], ratios[1]
        ),
    )
}

fn decision_problem() -> Check {
    let params = |threshold| DecisionParams {
        threshold,
        epsilon: 0.05,
        delta: 0.01,
    };
    let expected_shots = (200f64.ln() / 0.005).ceil() as u64;
    let mut r = rng(1007);
    let mut shots_ok = true;
    let mut contradictions = Vec::new();
    let mut n32_time = Duration::ZERO;
    for n in [4usize, 8, 16, 32] {
        let rho = random::mixed_state(n, &mut r);
        let (q, p) = (1, 2);
        let exact = phase_point_trace(&rho, q as i64, p as i64).re;
        let domain = PhaseDomain::single_point(n, q, p, Sign::Plus).unwrap();
        let mut bad = 0;
        for seed in 0..100u64 {
            // thresholds sweep across the exact value in steps of ε/2
            let threshold = exact + 0.025 * (seed % 9) as f64 - 0.1;
            let start = Instant::now();
            let d = decide_threshold(&rho, &domain, &params(threshold), seed).unwrap();
            if n == 32 {
                n32_time = n32_time.max(start.elapsed());
            }
            shots_ok &= d.shots == expected_shots && required_shots(1.0, 0.05, 0.01) == expected_shots;
            let wrong = match d.verdict {
                Verdict::Above => exact < threshold - 0.05,
                Verdict::Below => exact > threshold + 0.05,
                Verdict::Abstain => false,
            };
            if wrong {
                bad += 1;
            }
        }
        contradictions.push(bad);
    }
    check(
        shots_ok && contradictions.iter().all(|&b| b <= 1) && n32_time < Duration::from_secs(60),
        format!(
            "shots {expected_shots} for N in 4, 8, 16, 32: {shots_ok}; contradictions per 100 runs {contradictions:?}; \
             slowest N=32 run {:.1} ms",
            n32_time.as_secs_f64() * 1e3
        ),
    )
}

fn cat_map_covariance() -> Check {
    let mut r = rng(1008);
    let mut worst_displacement = 0.0f64;
    for n in [2usize, 3, 4, 5, 8] {
        let side = 2 * n as i64;
        let rho = random::mixed_state(n, &mut r);
        let w = wigner(&rho);
        for c in (2..side).step_by(2) {
            let map = cat_map_unitary(&CatMapSpec::new(n, 0, c), &TOL).unwrap();
            let u = &map.unitary;
            let moved = QuditState::mixed(
                &(u * &rho.density_matrix()) * &u.dagger(),
                &Tolerances::with_override(1e-10),
            )
            .unwrap();
            let wm = wigner(&moved);
            for q in 0..side {
                for p in 0..side {
                    worst_displacement = worst_displacement.max((wm.get(q, p + c) - w.get(q, p)).abs());
                }
            }
        }
    }

    let dims = [3usize, 4, 5, 8];
    let scan = covariance_scan(&dims, &TOL);
    let reproducible = scan == covariance_scan(&dims, &TOL);
    let exact_cases = scan.iter().filter(|row| row.exact).count();
    let mut worst_exact = 0.0f64;
    let mut rule_ok = true;
    for row in &scan {
        let rule = if row.n % 2 == 0 {
            row.c % 2 == 0
        } else {
            row.b % 2 == row.c % 2
        };
        rule_ok &= rule == row.exact;
        if row.exact {
            worst_exact = worst_exact.max(row.max_residual_grid);
            let rho = random::mixed_state(row.n, &mut r);
            let map = cat_map_unitary(&CatMapSpec::new(row.n, row.b as i64, row.c as i64), &TOL).unwrap();
            let u = &map.unitary;
            let moved = QuditState::mixed(
                &(u * &rho.density_matrix()) * &u.dagger(),
                &Tolerances::with_override(1e-10),
            )
            .unwrap();
            let (w, wm) = (wigner(&rho), wigner(&moved));
            let side = 2 * row.n;
            for q in 0..side {
                for p in 0..side {
                    let (q2, p2) = map.spec.map_point(q, p);
                    worst_exact = worst_exact.max((wm.get(q2 as i64, p2 as i64) - w.get(q as i64, p as i64)).abs());
                }
            }
        }
    }
    check(
        worst_displacement <= 1e-12 && reproducible && rule_ok && worst_exact < 1e-8,
        format!(
            "even displacements max error {worst_displacement:.1e}; scan of {} maps reproducible: {reproducible}; \
             {exact_cases} exactly covariant (N even: c even; N odd: b = c mod 2) with max residual {worst_exact:.1e}",
            scan.len()
        ),
    )
}

fn cli_reproducibility() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(1009);
    let state = dir.path().join("state.txt");
    let operator = dir.path().join("op.txt");
    let domain = dir.path().join("domain.txt");
    std::fs::write(&state, qpga::io::format_state(&random::mixed_state(3, &mut r))).unwrap();
    let o = OperatorSpec::matrix(random::complex_matrix(3, &mut r)).unwrap();
    std::fs::write(&operator, qpga::io::format_operator(&o)).unwrap();
    std::fs::write(&domain, "dim=3\ndescriptor=hline p0=1\n").unwrap();

    let runs: [Vec<&str>; 2] = [
        vec!["expect", "--mode", "sampled", "--shots", "100000", "--seed", "7"],
        vec![
            "decide",
            "--threshold",
            "0",
            "--epsilon",
            "0.05",
            "--delta",
            "0.01",
            "--seed",
            "11",
        ],
    ];
    let mut identical = 0;
    for args in &runs {
        let files: Vec<&std::path::Path> = if args[0] == "expect" {
            vec![&state, &operator]
        } else {
            vec![&state, &domain]
        };
        let once = || {
            let out = Command::new(env!("CARGO_BIN_EXE_qpga"))
                .arg("--json")
                .arg(args[0])
                .args(&files)
                .args(&args[1..])
                .output()
                .unwrap();
            let mut report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
            report.as_object_mut().unwrap().remove("duration_ms");
            report
        };
        if once() == once() {
            identical += 1;
        }
    }
    check(
        identical == runs.len(),
        format!(
            "{identical}/{} sampled commands rerun with identical reports",
            runs.len()
        ),
    )
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 9] = [
        ("1 basis suite", basis_suite, secs(10)),
        ("2 scattering identity", scattering_identity, secs(30)),
        ("3 programmable pipeline", programmable_pipeline, secs(120)),
        ("4 wigner duality", wigner_duality, None),
        ("5 line sums vs projectors", line_probability_correspondence, None),
        ("6 sampling convergence", sampling_convergence, None),
        ("7 decision problem", decision_problem, None),
        ("8 cat-map covariance", cat_map_covariance, None),
        ("9 CLI reproducibility", cli_reproducibility, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let c = timed(limit, run);
        println!(
            "criterion {name}: {} ({})",
            if c.ok { "PASS" } else { "FAIL" },
            c.detail
        );
        if !c.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
