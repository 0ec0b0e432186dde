use std::f64::consts::PI;

use anyon_chronos::anyon_model::su2_level2;
use anyon_chronos::braiding::{self, BraidRepresentation, BraidWord, Crossing};
use anyon_chronos::fusion_space::{standard_basis, Register, StateVector};
use anyon_chronos::linalg::{self, c, cr, CMatrix, CVector};
use anyon_chronos::measurement::{self, PovmEffect};
use anyon_chronos::relational_clock::{self, ClockSchedule, GlobalState};
use anyon_chronos::report;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config() -> ProptestConfig {
    let mut cfg = ProptestConfig::with_cases(128);
    if let Some(seed) = std::env::var("ANYON_CHRONOS_SEED").ok().and_then(|s| s.parse().ok()) {
        cfg.rng_seed = RngSeed::Fixed(seed);
    }
    cfg
}

fn word(n_strands: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1..n_strands, any::<bool>()), 0..12).prop_map(move |letters| {
        let crossings = letters
            .into_iter()
            .map(|(i, over)| (i, if over { Crossing::Over } else { Crossing::Under }))
            .collect();
        BraidWord::new(n_strands, crossings).unwrap()
    })
}

fn unitary_2x2() -> impl Strategy<Value = CMatrix> {
    (0.0..2.0 * PI, 0.0..PI, 0.0..2.0 * PI).prop_map(|(a, b, g)| {
        let ry = linalg::from_rows(&[
            &[cr((b / 2.0).cos()), cr(-(b / 2.0).sin())],
            &[cr((b / 2.0).sin()), cr((b / 2.0).cos())],
        ]);
        linalg::rot_z(a) * ry * linalg::rot_z(g)
    })
}

fn qubit_state() -> impl Strategy<Value = CVector> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|[a, b, x, y]| {
            let v = CVector::from_column_slice(&[c(a, b), c(x, y)]);
            let n = v.norm();
            v / cr(n)
        })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn braid_words_are_unitary_and_invertible(w in word(6)) {
        let model = su2_level2();
        let rep = BraidRepresentation::new(&model, &standard_basis(&model, 6, 0).unwrap()).unwrap();
        let u = rep.evaluate(&w).unwrap();
        prop_assert!(u.unitarity_error() < 1e-10);
        let back = rep.evaluate(&w.inverse()).unwrap().compose(&u);
        prop_assert!(linalg::max_abs_diff(back.matrix(), &linalg::identity(4)) < 1e-10);
    }

    #[test]
    fn three_strand_words_stay_in_the_clifford_group(w in word(3)) {
        let model = su2_level2();
        let rep = BraidRepresentation::new(&model, &standard_basis(&model, 3, 1).unwrap()).unwrap();
        let group = braiding::group_closure(rep.generators(), 100).unwrap();
        prop_assert!(group.contains(&rep.evaluate(&w).unwrap()));
    }

    #[test]
    fn fusion_is_a_projective_measurement(psi in qubit_state(), pair in prop::sample::select(vec![(1, 2), (2, 3), (1, 3)])) {
        let model = su2_level2();
        let state = StateVector::new(Register::Fusion(standard_basis(&model, 3, 1).unwrap()), psi).unwrap();
        let outcomes = measurement::fuse_pair(&model, &state, pair).unwrap();
        prop_assert!((outcomes[0].probability + outcomes[1].probability - 1.0).abs() < 1e-12);
        for (k, o) in outcomes.iter().enumerate() {
            if let Some(post) = &o.post_state {
                let again = measurement::fuse_pair(&model, post, pair).unwrap();
                prop_assert!((again[k].probability - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn maximally_entangled_states_show_emergent_evolution(l in unitary_2x2(), n in 2usize..=16) {
        let singlet = GlobalState::bell_singlet();
        let rotated = singlet.state().apply(&linalg::kron(&linalg::identity(2), &l)).unwrap();
        let global = GlobalState::new(rotated).unwrap();
        let schedule = ClockSchedule::equatorial(n).unwrap();
        let run = relational_clock::run_schedule(&global, &schedule);
        prop_assert!((run.total_probability - 1.0).abs() < 1e-10);
        prop_assert!(run.uniform_probabilities);
        prop_assert!(run.hamiltonians.as_ref().is_some_and(|h| h.eigen_residual < 1e-10));
        prop_assert!(run.min_fidelity().is_some_and(|f| f > 1.0 - 1e-10));
    }

    #[test]
    fn tick_branches_recover_the_system_marginal(l in unitary_2x2(), psi in qubit_state(), n in 2usize..=12) {
        // an arbitrary (not necessarily entangled) global state
        let clock = StateVector::new(Register::Qubits(1), psi).unwrap();
        let system = StateVector::new(Register::Qubits(1), l.column(0).into_owned()).unwrap();
        let singlet = GlobalState::bell_singlet().state().amplitudes().clone();
        let product = linalg::kron(
            &CMatrix::from_column_slice(2, 1, clock.amplitudes().as_slice()),
            &CMatrix::from_column_slice(2, 1, system.amplitudes().as_slice()),
        );
        let mixed = (product.column(0) + &singlet).into_owned();
        prop_assume!(mixed.norm() > 1e-3);
        let global = GlobalState::new(StateVector::normalized(Register::Qubits(2), mixed).unwrap()).unwrap();
        let schedule = ClockSchedule::equatorial(n).unwrap();
        let blocks = relational_clock::reconstruct_block_mixture(&global, &schedule).unwrap();
        let marginal = CMatrix::from_fn(2, 2, |i, j| blocks[(i, j)] + blocks[(2 + i, 2 + j)]);
        prop_assert!(linalg::max_abs_diff(&marginal, &global.reduced_system()) < 1e-9);
        let total: f64 = schedule
            .effects()
            .iter()
            .map(|e| global.clone().condition(e).map(|b| b.probability).unwrap_or(0.0))
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn schedules_ignore_listing_order(order in (2usize..=16).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())) {
        let n = order.len();
        let all = measurement::covariant_equatorial_povm(n).unwrap();
        let listed: Vec<PovmEffect> = order.iter().map(|&j| all[j].clone()).collect();
        let schedule = ClockSchedule::from_effects(listed).unwrap();
        let got: Vec<usize> = schedule.effects().iter().map(|e| e.outcome.parse().unwrap()).collect();
        let want: Vec<usize> = (0..n).map(|k| (order[0] + k) % n).collect();
        prop_assert_eq!(got, want);
        prop_assert!((schedule.uniform_step().unwrap() - 2.0 * PI / n as f64).abs() < 1e-12);
    }

    #[test]
    fn dilation_reproduces_rotated_covariant_povms(m in 0usize..=3, l in unitary_2x2()) {
        let n = 2usize << m;
        let target: Vec<PovmEffect> = measurement::covariant_equatorial_povm(n)
            .unwrap()
            .into_iter()
            .map(|e| PovmEffect::new(&l * &e.matrix * l.adjoint(), e.outcome))
            .collect();
        let u = measurement::naimark_dilation(&target, m).unwrap();
        let got = measurement::povm_from_circuit(&u, m).unwrap();
        prop_assert!(measurement::check_povm(&got).passed());
        for (a, b) in got.iter().zip(&target) {
            prop_assert!(linalg::max_abs_diff(&a.matrix, &b.matrix) < 1e-10);
        }
    }

    #[test]
    fn float_format_round_trips(x in -1e6f64..1e6) {
        let text = report::format_float(x);
        let back: f64 = text.parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-14) || x.abs() < 1e-14);
        prop_assert_eq!(report::num(x).to_string(), text);
    }
}
