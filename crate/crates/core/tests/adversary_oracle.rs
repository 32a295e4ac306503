use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use witness_loophole::adversary::{
    adversarial_extremum, enumerate_extremum, measured_expectation, verify_closed_form,
    verify_for_state, Allocation, CountRecord, Direction, Outcome,
};
use witness_loophole::decomposition::{decompose, pauli_basis};
use witness_loophole::loophole::EfficiencyPair;
use witness_loophole::operator::hs_inner;
use witness_loophole::{random, witnesses};

fn record<R: Rng>(rng: &mut R, k: usize, max_total: u64) -> CountRecord {
    loop {
        let outcomes = (0..k)
            .map(|_| Outcome {
                eigenvalue: rng.random_range(-1.0..1.0),
                ideal_count: rng.random_range(0..=max_total / k as u64),
            })
            .collect();
        if let Ok(r) = CountRecord::new(outcomes, rng.random_range(0..=6), rng.random_range(0..=6)) {
            return r;
        }
    }
}

#[test]
fn greedy_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..500 {
        let k = rng.random_range(1..=4);
        let rec = record(&mut rng, k, 24);
        let c = rng.random_range(-1.0..1.0);
        for dir in [Direction::Minimize, Direction::Maximize] {
            let g = adversarial_extremum(&rec, c, dir);
            let e = enumerate_extremum(&rec, c, dir).unwrap();
            assert!((g.value - e.value).abs() < 1e-12, "{rec:?} {c} {dir:?}");
            // the greedy allocation is feasible and realizes its value
            let m = measured_expectation(&rec, &g.allocation).unwrap();
            assert!((c * m - g.value).abs() < 1e-12);
        }
    }
}

#[test]
fn maximize_dominates_minimize_and_stays_in_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..500 {
        let rec = record(&mut rng, 3, 30);
        let lo = adversarial_extremum(&rec, 1.0, Direction::Minimize).value;
        let hi = adversarial_extremum(&rec, 1.0, Direction::Maximize).value;
        assert!(lo <= hi + 1e-15);
        let lmin = rec.outcomes().iter().map(|o| o.eigenvalue).fold(f64::INFINITY, f64::min);
        let lmax = rec.outcomes().iter().map(|o| o.eigenvalue).fold(f64::NEG_INFINITY, f64::max);
        assert!(lo >= lmin - 1e-12 && hi <= lmax + 1e-12);
    }
}

#[test]
fn infeasible_allocations_are_rejected() {
    let rec = CountRecord::new(
        vec![
            Outcome { eigenvalue: 1.0, ideal_count: 2 },
            Outcome { eigenvalue: -1.0, ideal_count: 5 },
        ],
        1,
        3,
    )
    .unwrap();
    // loses 3 from a bin of 2
    let bad = Allocation { eps_plus: vec![1, 0], eps_minus: vec![3, 0] };
    assert!(measured_expectation(&rec, &bad).is_err());
    let short = Allocation { eps_plus: vec![0, 0], eps_minus: vec![0, 3] };
    assert!(measured_expectation(&rec, &short).is_err());
    assert!(CountRecord::new(vec![Outcome { eigenvalue: 1.0, ideal_count: 2 }], 0, 3).is_err());
}

/// Two settings handled jointly: the adversary's worst case on the sum is the
/// sum of per-setting worst cases, because the error budgets are per setting.
#[test]
fn joint_enumeration_is_separable() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let r1 = record(&mut rng, 2, 12);
        let r2 = record(&mut rng, 2, 12);
        let (c1, c2) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let separate = adversarial_extremum(&r1, c1, Direction::Minimize).value
            + adversarial_extremum(&r2, c2, Direction::Minimize).value;
        let mut joint = f64::INFINITY;
        for a in allocations(&r1) {
            let v1 = c1 * measured_expectation(&r1, &a).unwrap();
            for b in allocations(&r2) {
                joint = joint.min(v1 + c2 * measured_expectation(&r2, &b).unwrap());
            }
        }
        assert!((joint - separate).abs() < 1e-12);
    }
}

fn allocations(rec: &CountRecord) -> Vec<Allocation> {
    // two outcomes only
    let n0 = rec.outcomes()[0].ideal_count;
    let n1 = rec.outcomes()[1].ideal_count;
    let mut all = Vec::new();
    for p0 in 0..=rec.eps_plus() {
        for m0 in 0..=rec.eps_minus() {
            let m1 = rec.eps_minus() - m0;
            if m0 > n0 || m1 > n1 {
                continue;
            }
            all.push(Allocation {
                eps_plus: vec![p0, rec.eps_plus() - p0],
                eps_minus: vec![m0, m1],
            });
        }
    }
    all
}

#[test]
fn oracle_never_beats_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let dec = decompose(&witnesses::w_phi_plus(), &pauli_basis()).unwrap();
    for _ in 0..30 {
        let rho = random::density_matrix(&[2, 2], &mut rng);
        let eff = EfficiencyPair::new(rng.random_range(0.6..1.0), rng.random_range(0.5..1.0)).unwrap();
        let rep = verify_for_state(&dec, &rho, eff, 2000).unwrap();
        assert!(rep.attainability_deficit >= 0.0);
        // rounding to integer counts may move either way by O(1/N)
        assert!(rep.discretization.abs() < 5e-3, "{rep:?}");
        assert!(rep.gap >= rep.discretization - 1e-12);
    }
}

#[test]
fn expectation_and_state_entry_points_agree_for_unit_spectra() {
    let dec = decompose(&witnesses::w_phi_plus(), &pauli_basis()).unwrap();
    let rho = witnesses::werner_state(0.8);
    let ex: Vec<f64> = dec.settings().iter().map(|s| hs_inner(s.operator(), &rho).unwrap()).collect();
    let eff = EfficiencyPair::new(0.9, 0.8).unwrap();
    let a = verify_closed_form(&dec, &ex, eff, 5000).unwrap();
    let b = verify_for_state(&dec, &rho, eff, 5000).unwrap();
    assert!((a.oracle_value - b.oracle_value).abs() < 1e-12);
    assert!((a.formula_value - b.formula_value).abs() < 1e-12);
}
