mod common;

use qpga::array::{expectation, run_point_program, Estimation};
use qpga::domain::{domain_sum_circuit, domain_sum_direct, tilted_line_sum_via_cat_map, PhaseDomain, Sign};
use qpga::phase_space::{phase_point_op, PhasePointIndex};
use qpga::wigner::{general_line_sum, line_class, translation_probabilities, wigner};
use qpga::{random, ComplexMatrix, OperatorSpec, QuditState, Tolerances};

use common::{phase_point_trace, rng, trace_of_product};

const TOL: Tolerances = Tolerances::DEFAULT;

fn exact(rho: &QuditState, o: ComplexMatrix) -> qpga::Expectation {
    expectation(rho, &OperatorSpec::matrix(o).unwrap(), Estimation::Exact, &TOL).unwrap()
}

#[test]
fn identity_expectation_is_one() {
    let mut r = rng(20);
    for n in 1..=6 {
        let rho = random::mixed_state(n, &mut r);
        let e = exact(&rho, ComplexMatrix::identity(n));
        assert!((e.re - 1.0).abs() < 1e-10 && e.im.abs() < 1e-10, "N={n}: {e:?}");
    }
}

#[test]
fn single_phase_point_operator() {
    let mut r = rng(21);
    let rho = random::mixed_state(3, &mut r);
    let a = (*phase_point_op(PhasePointIndex::new(3, 1, 1))).clone();
    let e = exact(&rho, a);
    let oracle = phase_point_trace(&rho, 1, 1);
    assert!((e.value() - oracle).norm() < 1e-10);
    assert!((e.scale_h() - 1.0).abs() < 1e-12);
    assert_eq!(e.anti_hermitian, None);
}

#[test]
fn hermitian_operators_have_real_expectations() {
    let mut r = rng(22);
    for n in 2..=8 {
        let rho = random::mixed_state(n, &mut r);
        let h = random::hermitian(n, &mut r);
        let oracle = trace_of_product(&rho.density_matrix(), &h);
        let e = exact(&rho, h);
        assert!(e.im.abs() < 1e-10);
        assert!((e.re - oracle.re).abs() < 1e-10);
    }
}

#[test]
fn anti_hermitian_part_carries_the_imaginary_value() {
    let mut r = rng(23);
    let rho = random::pure_state(5, &mut r);
    let o = random::complex_matrix(5, &mut r);
    let oracle = trace_of_product(&rho.density_matrix(), &o);
    let e = exact(&rho, o);
    assert!((e.value() - oracle).norm() < 1e-10);
    assert!(e.scale_k() > 0.0);
}

#[test]
fn sampled_expectation_converges() {
    let mut r = rng(24);
    let rho = random::mixed_state(4, &mut r);
    let o = random::complex_matrix(4, &mut r);
    let oracle = trace_of_product(&rho.density_matrix(), &o);
    let spec = OperatorSpec::matrix(o).unwrap();
    let e = expectation(
        &rho,
        &spec,
        Estimation::Sampled {
            shots: 200_000,
            seed: 3,
        },
        &TOL,
    )
    .unwrap();
    assert!((e.re - oracle.re).abs() < 5.0 * e.stderr_re);
    assert!((e.im - oracle.im).abs() < 5.0 * e.stderr_im);
    let again = expectation(
        &rho,
        &spec,
        Estimation::Sampled {
            shots: 200_000,
            seed: 3,
        },
        &TOL,
    )
    .unwrap();
    assert_eq!(e, again);
}

#[test]
fn point_programs_off_the_fundamental_cell() {
    let mut r = rng(25);
    for n in [3usize, 4] {
        let rho = random::mixed_state(n, &mut r);
        for q in 0..n {
            for p in 0..n {
                let base = run_point_program(&rho, q, p).unwrap().sigma_z;
                let q_shift = run_point_program(&rho, q + n, p).unwrap().sigma_z;
                let p_shift = run_point_program(&rho, q, p + n).unwrap().sigma_z;
                let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
                assert!((q_shift - sign(p) * base).abs() < 1e-10);
                assert!((p_shift - sign(q) * base).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn line_sums_three_ways() {
    let mut r = rng(26);
    for n in 2..=4usize {
        let rho = random::mixed_state(n, &mut r);
        let w = wigner(&rho);
        let side = 2 * n as i64;
        for b in 0..side {
            let probs = translation_probabilities(&rho, b, 1, &TOL).unwrap();
            for c in 0..side {
                let direct = general_line_sum(&w, 1, b, c);
                let line = PhaseDomain::line(n, b as usize, c as usize).unwrap();
                let circuit = domain_sum_circuit(&rho, &line).unwrap().raw;
                let tilted = tilted_line_sum_via_cat_map(&rho, b, c, &TOL).unwrap();
                assert!((direct - probs[line_class(n, c)]).abs() < 1e-8);
                assert!((direct - circuit).abs() < 1e-10);
                assert!((direct - tilted).abs() < 1e-10);
                assert!((-1e-10..=1.0 + 1e-10).contains(&direct));
            }
        }
    }
}

#[test]
fn signed_domains_against_the_grid() {
    let mut r = rng(27);
    let rho = random::mixed_state(5, &mut r);
    let w = wigner(&rho);
    let d = PhaseDomain::custom(
        5,
        vec![
            (0, 0, Sign::Plus),
            (3, 7, Sign::Minus),
            (9, 2, Sign::Minus),
            (4, 4, Sign::Plus),
        ],
    )
    .unwrap();
    let circuit = domain_sum_circuit(&rho, &d).unwrap();
    let direct = domain_sum_direct(&w, &d).unwrap();
    assert!((circuit.raw - direct).abs() < 1e-10);
    assert!((circuit.polarization_scaled - 10.0 * direct).abs() < 1e-10);
}
