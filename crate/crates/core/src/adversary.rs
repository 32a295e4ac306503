//! Count-level adversary for one measurement setting.
//!
//! The measured mean of a setting is
//! `sum_i (n_i + eps_plus_i - eps_minus_i) lambda_i / (N + eps_plus - eps_minus)`.
//! The denominator only depends on the totals, so for a fixed coefficient the
//! objective is linear in the allocation and the extremum is reached greedily:
//! every additional event on the best outcome, lost events taken from the
//! worst outcomes first, never more than an outcome holds.

use serde::Serialize;

use crate::decomposition::WitnessDecomposition;
use crate::error::{Error, Result};
use crate::loophole::{kappa, omega, worst_case_setting_expectation, EfficiencyPair};
use crate::operator::{hermitian_eigen, HermitianOperator};

/// Full enumeration is only attempted below this many allocations.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Eigenvalues closer than this are merged into one outcome.
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Outcome {
    pub eigenvalue: f64,
    pub ideal_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRecord {
    outcomes: Vec<Outcome>,
    eps_plus: u64,
    eps_minus: u64,
}

impl CountRecord {
    pub fn new(outcomes: Vec<Outcome>, eps_plus: u64, eps_minus: u64) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::InvalidCountRecord("no outcomes".into()));
        }
        if outcomes.iter().any(|o| !o.eigenvalue.is_finite()) {
            return Err(Error::InvalidCountRecord("non-finite eigenvalue".into()));
        }
        let total: u64 = outcomes.iter().map(|o| o.ideal_count).sum();
        if eps_minus > total {
            return Err(Error::InvalidCountRecord(format!(
                "{eps_minus} lost events exceed the {total} ideal events"
            )));
        }
        if total + eps_plus - eps_minus == 0 {
            return Err(Error::InvalidCountRecord("no recorded events".into()));
        }
        Ok(Self {
            outcomes,
            eps_plus,
            eps_minus,
        })
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn eps_plus(&self) -> u64 {
        self.eps_plus
    }

    pub fn eps_minus(&self) -> u64 {
        self.eps_minus
    }

    pub fn ideal_total(&self) -> u64 {
        self.outcomes.iter().map(|o| o.ideal_count).sum()
    }

    pub fn recorded_total(&self) -> u64 {
        self.ideal_total() + self.eps_plus - self.eps_minus
    }

    /// Mean eigenvalue under perfect detection.
    pub fn ideal_expectation(&self) -> f64 {
        let s: f64 = self
            .outcomes
            .iter()
            .map(|o| o.ideal_count as f64 * o.eigenvalue)
            .sum();
        s / self.ideal_total() as f64
    }
}

/// Per-outcome additional and lost events.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Allocation {
    pub eps_plus: Vec<u64>,
    pub eps_minus: Vec<u64>,
}

pub fn measured_expectation(rec: &CountRecord, alloc: &Allocation) -> Result<f64> {
    let k = rec.outcomes.len();
    if alloc.eps_plus.len() != k || alloc.eps_minus.len() != k {
        return Err(Error::InfeasibleAllocation(format!(
            "allocation has {}/{} entries for {k} outcomes",
            alloc.eps_plus.len(),
            alloc.eps_minus.len()
        )));
    }
    if alloc.eps_plus.iter().sum::<u64>() != rec.eps_plus {
        return Err(Error::InfeasibleAllocation(format!(
            "additional events do not sum to {}",
            rec.eps_plus
        )));
    }
    if alloc.eps_minus.iter().sum::<u64>() != rec.eps_minus {
        return Err(Error::InfeasibleAllocation(format!(
            "lost events do not sum to {}",
            rec.eps_minus
        )));
    }
    let mut num = 0.0;
    for (i, o) in rec.outcomes.iter().enumerate() {
        if alloc.eps_minus[i] > o.ideal_count {
            return Err(Error::InfeasibleAllocation(format!(
                "outcome {i} loses {} of {} events",
                alloc.eps_minus[i], o.ideal_count
            )));
        }
        let n = o.ideal_count + alloc.eps_plus[i] - alloc.eps_minus[i];
        num += n as f64 * o.eigenvalue;
    }
    Ok(num / rec.recorded_total() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremum {
    /// `c` times the measured mean.
    pub value: f64,
    pub allocation: Allocation,
}

/// Exact extremum of `c * measured_expectation` over feasible allocations.
pub fn adversarial_extremum(rec: &CountRecord, c: f64, direction: Direction) -> Extremum {
    let k = rec.outcomes.len();
    // Score each outcome by how much one event there moves the objective in
    // the adversary's favour (lower is better for the adversary's additions).
    let sign = match direction {
        Direction::Minimize => 1.0,
        Direction::Maximize => -1.0,
    };
    let score: Vec<f64> = rec.outcomes.iter().map(|o| sign * c * o.eigenvalue).collect();

    let mut eps_plus = vec![0; k];
    let best = (0..k)
        .min_by(|&i, &j| score[i].total_cmp(&score[j]))
        .expect("nonempty");
    eps_plus[best] = rec.eps_plus;

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| score[j].total_cmp(&score[i]));
    let mut eps_minus = vec![0; k];
    let mut remaining = rec.eps_minus;
    for i in order {
        let take = remaining.min(rec.outcomes[i].ideal_count);
        eps_minus[i] = take;
        remaining -= take;
    }

    let allocation = Allocation {
        eps_plus,
        eps_minus,
    };
    let value = if c == 0.0 {
        0.0
    } else {
        c * measured_expectation(rec, &allocation).expect("greedy allocation is feasible")
    };
    Extremum { value, allocation }
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of allocations an exhaustive search would visit (upper bound).
pub fn lattice_size(rec: &CountRecord) -> u128 {
    let k = rec.outcomes.len() as u64;
    binomial(rec.eps_plus + k - 1, k - 1) * binomial(rec.eps_minus + k - 1, k - 1)
}

/// Calls `f` on every composition of `total` into `caps.len()` parts bounded by `caps`.
fn for_each_composition(total: u64, caps: &[u64], f: &mut dyn FnMut(&[u64])) {
    fn rec(pos: usize, left: u64, caps: &[u64], cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        if pos == caps.len() - 1 {
            if left <= caps[pos] {
                cur.push(left);
                f(cur);
                cur.pop();
            }
            return;
        }
        for x in 0..=left.min(caps[pos]) {
            cur.push(x);
            rec(pos + 1, left - x, caps, cur, f);
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(caps.len());
    rec(0, total, caps, &mut cur, f);
}

/// Brute-force extremum over every feasible allocation, or `None` when the
/// lattice exceeds [`ENUMERATION_LIMIT`].
pub fn enumerate_extremum(rec: &CountRecord, c: f64, direction: Direction) -> Option<Extremum> {
    if lattice_size(rec) > ENUMERATION_LIMIT {
        return None;
    }
    let k = rec.outcomes.len();
    let unbounded = vec![u64::MAX; k];
    let caps: Vec<u64> = rec.outcomes.iter().map(|o| o.ideal_count).collect();
    let mut best: Option<Extremum> = None;
    for_each_composition(rec.eps_plus, &unbounded, &mut |plus| {
        for_each_composition(rec.eps_minus, &caps, &mut |minus| {
            let allocation = Allocation {
                eps_plus: plus.to_vec(),
                eps_minus: minus.to_vec(),
            };
            let value = c * measured_expectation(rec, &allocation).expect("enumerated allocation is feasible");
            let better = match (&best, direction) {
                (None, _) => true,
                (Some(b), Direction::Minimize) => value < b.value,
                (Some(b), Direction::Maximize) => value > b.value,
            };
            if better {
                best = Some(Extremum { value, allocation });
            }
        });
    });
    best
}

/// Splits `total` events according to `probabilities` by largest remainder,
/// so the counts sum to `total` exactly. Ties go to the lower index.
pub fn ideal_counts(probabilities: &[f64], total: u64) -> Vec<u64> {
    let raw: Vec<f64> = probabilities.iter().map(|p| p.max(0.0) * total as f64).collect();
    let mut counts: Vec<u64> = raw.iter().map(|x| x.floor() as u64).collect();
    let assigned: u64 = counts.iter().sum();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&i, &j| (raw[j] - raw[j].floor()).total_cmp(&(raw[i] - raw[i].floor())).then(i.cmp(&j)));
    let mut left = total.saturating_sub(assigned);
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    counts
}

/// Distinct outcomes of a setting with their Born probabilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    pub eigenvalues: Vec<f64>,
    pub probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn expectation(&self) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.probabilities)
            .map(|(l, p)| l * p)
            .sum()
    }

    /// Outcome statistics of measuring `setting` on `rho`.
    pub fn from_state(setting: &HermitianOperator, rho: &HermitianOperator) -> Result<Self> {
        if setting.dims() != rho.dims() {
            return Err(Error::DimensionMismatch(format!(
                "setting on {:?}, state on {:?}",
                setting.dims(),
                rho.dims()
            )));
        }
        let eig = hermitian_eigen(setting);
        let mut eigenvalues: Vec<f64> = Vec::new();
        let mut probabilities: Vec<f64> = Vec::new();
        for (k, &lam) in eig.spectrum.eigenvalues().iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            let p = (v.adjoint() * rho.matrix() * v)[(0, 0)].re.max(0.0);
            match eigenvalues.last() {
                Some(&prev) if (lam - prev).abs() <= DEGENERACY_TOL => {
                    *probabilities.last_mut().expect("paired") += p;
                }
                _ => {
                    eigenvalues.push(lam);
                    probabilities.push(p);
                }
            }
        }
        let total: f64 = probabilities.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidState("state has zero trace".into()));
        }
        probabilities.iter_mut().for_each(|p| *p /= total);
        Ok(Self {
            eigenvalues,
            probabilities,
        })
    }

    /// Two-point distribution on the extreme eigenvalues with mean `expectation`.
    pub fn extremal(lambda_min: f64, lambda_max: f64, expectation: f64) -> Result<Self> {
        if expectation < lambda_min - DEGENERACY_TOL || expectation > lambda_max + DEGENERACY_TOL {
            return Err(Error::OutOfSpectrumRange {
                value: expectation,
                low: lambda_min,
                high: lambda_max,
            });
        }
        if lambda_max - lambda_min <= DEGENERACY_TOL {
            return Ok(Self {
                eigenvalues: vec![lambda_min],
                probabilities: vec![1.0],
            });
        }
        let p_max = ((expectation - lambda_min) / (lambda_max - lambda_min)).clamp(0.0, 1.0);
        Ok(Self {
            eigenvalues: vec![lambda_min, lambda_max],
            probabilities: vec![1.0 - p_max, p_max],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SettingVerification {
    pub label: String,
    pub coefficient: f64,
    pub true_expectation: f64,
    pub record: CountRecord,
    /// Closed-form worst case of `c<S>_m`.
    pub formula: f64,
    /// Same worst case with the realized integer error counts, ignoring that
    /// an outcome cannot lose more events than it holds.
    pub relaxed: f64,
    /// `oracle - relaxed`.
    pub deficit: f64,
    /// Exact count-level worst case of `c<S>_m`.
    pub oracle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    /// Closed-form worst-case `<W>_m`.
    pub formula_value: f64,
    /// Count-level worst-case `<W>_m`.
    pub oracle_value: f64,
    /// `oracle_value - formula_value`.
    pub gap: f64,
    /// Part of the gap caused by outcomes holding fewer events than the
    /// adversary wants to lose; always nonnegative.
    pub attainability_deficit: f64,
    /// Part of the gap from rounding counts to integers.
    pub discretization: f64,
    pub settings: Vec<SettingVerification>,
}

/// Lost and additional event totals for `n_ideal` ideal events.
pub fn error_counts(eff: EfficiencyPair, n_ideal: u64) -> (u64, u64) {
    let n = n_ideal as f64;
    let eps_minus = ((1.0 - eff.eta_minus()) * n).round() as u64;
    let eps_plus = (n * (1.0 / eff.eta_plus() - 1.0)).round() as u64;
    (eps_plus, eps_minus.min(n_ideal))
}

/// Compares the closed-form worst case against the count-level adversary,
/// with one outcome distribution per setting of `dec`.
pub fn verify_with_distributions(
    dec: &WitnessDecomposition,
    distributions: &[OutcomeDistribution],
    eff: EfficiencyPair,
    n_ideal: u64,
) -> Result<VerificationReport> {
    if distributions.len() != dec.settings().len() {
        return Err(Error::DimensionMismatch(format!(
            "{} distributions for {} settings",
            distributions.len(),
            dec.settings().len()
        )));
    }
    if n_ideal == 0 {
        return Err(Error::InvalidCountRecord("N_ideal must be positive".into()));
    }
    let (eps_plus, eps_minus) = error_counts(eff, n_ideal);
    let mut settings = Vec::with_capacity(distributions.len());
    for (s, dist) in dec.settings().iter().zip(distributions) {
        let c = s.coefficient();
        let true_expectation = dist.expectation();
        let formula = worst_case_setting_expectation(c, s.spectrum(), true_expectation, eff)?;
        let counts = ideal_counts(&dist.probabilities, n_ideal);
        let outcomes = dist
            .eigenvalues
            .iter()
            .zip(counts)
            .map(|(&eigenvalue, ideal_count)| Outcome {
                eigenvalue,
                ideal_count,
            })
            .collect();
        let record = CountRecord::new(outcomes, eps_plus, eps_minus)?;
        let extremum = adversarial_extremum(&record, c, Direction::Minimize);
        // Each lost event taken from an outcome below omega_minus costs the
        // adversary omega_minus - c * lambda_i; every term is nonnegative.
        let (_, om) = omega(c, s.spectrum());
        let deficit: f64 = record
            .outcomes()
            .iter()
            .zip(&extremum.allocation.eps_minus)
            .map(|(o, &lost)| lost as f64 * (om - c * o.eigenvalue))
            .sum::<f64>()
            / record.recorded_total() as f64;
        let oracle = extremum.value;
        let relaxed = oracle - deficit;
        settings.push(SettingVerification {
            label: s.label().to_string(),
            coefficient: c,
            true_expectation,
            record,
            formula,
            relaxed,
            deficit,
            oracle,
        });
    }
    let formula_value = dec.c0() + settings.iter().map(|s| s.formula).sum::<f64>();
    let oracle_value = dec.c0() + settings.iter().map(|s| s.oracle).sum::<f64>();
    let attainability_deficit: f64 = settings.iter().map(|s| s.deficit).sum();
    let gap = oracle_value - formula_value;
    Ok(VerificationReport {
        formula_value,
        oracle_value,
        gap,
        attainability_deficit,
        discretization: gap - attainability_deficit,
        settings,
    })
}

/// Cross-check from per-setting true expectations. Each setting's statistics
/// are taken as the two-point distribution on its extreme eigenvalues, which
/// is exact for `+-1` spectra.
pub fn verify_closed_form(
    dec: &WitnessDecomposition,
    state_expectations: &[f64],
    eff: EfficiencyPair,
    n_ideal: u64,
) -> Result<VerificationReport> {
    if state_expectations.len() != dec.settings().len() {
        return Err(Error::DimensionMismatch(format!(
            "{} expectations for {} settings",
            state_expectations.len(),
            dec.settings().len()
        )));
    }
    let distributions = dec
        .settings()
        .iter()
        .zip(state_expectations)
        .map(|(s, &e)| {
            OutcomeDistribution::extremal(s.spectrum().lambda_min(), s.spectrum().lambda_max(), e)
        })
        .collect::<Result<Vec<_>>>()?;
    verify_with_distributions(dec, &distributions, eff, n_ideal)
}

/// Cross-check with the full outcome statistics of `rho` for every setting.
pub fn verify_for_state(
    dec: &WitnessDecomposition,
    rho: &HermitianOperator,
    eff: EfficiencyPair,
    n_ideal: u64,
) -> Result<VerificationReport> {
    let distributions = dec
        .settings()
        .iter()
        .map(|s| OutcomeDistribution::from_state(s.operator(), rho))
        .collect::<Result<Vec<_>>>()?;
    verify_with_distributions(dec, &distributions, eff, n_ideal)
}

/// Closed-form worst-case `<W>_m` for a state with true value `wt`.
pub fn closed_form_wm(dec: &WitnessDecomposition, wt: f64, eff: EfficiencyPair) -> f64 {
    let k = kappa(eff);
    let penalty: f64 = dec
        .settings()
        .iter()
        .map(|s| {
            let (op, om) = omega(s.coefficient(), s.spectrum());
            op * (1.0 - 1.0 / eff.eta_plus()) + om * (1.0 - eff.eta_minus())
        })
        .sum();
    dec.c0() + k * (wt - dec.c0()) - k * penalty
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{decompose, pauli_basis};
    use crate::operator::hs_inner;
    use crate::witnesses;

    fn rec(pairs: &[(f64, u64)], ep: u64, em: u64) -> CountRecord {
        CountRecord::new(
            pairs
                .iter()
                .map(|&(eigenvalue, ideal_count)| Outcome {
                    eigenvalue,
                    ideal_count,
                })
                .collect(),
            ep,
            em,
        )
        .unwrap()
    }

    #[test]
    fn record_validation() {
        let o = vec![Outcome { eigenvalue: 1.0, ideal_count: 3 }];
        assert!(CountRecord::new(o.clone(), 0, 4).is_err());
        assert!(CountRecord::new(o.clone(), 0, 3).is_err());
        assert!(CountRecord::new(o, 1, 3).is_ok());
        assert!(CountRecord::new(vec![], 0, 0).is_err());
    }

    #[test]
    fn measured_expectation_examples() {
        let r = rec(&[(1.0, 30), (-1.0, 70)], 0, 0);
        let none = Allocation { eps_plus: vec![0, 0], eps_minus: vec![0, 0] };
        assert!((measured_expectation(&r, &none).unwrap() + 0.4).abs() < 1e-15);

        let r = rec(&[(1.0, 100)], 0, 50);
        let a = Allocation { eps_plus: vec![0], eps_minus: vec![50] };
        assert_eq!(measured_expectation(&r, &a).unwrap(), 1.0);

        let r = rec(&[(1.0, 50), (-1.0, 50)], 0, 20);
        let a = Allocation { eps_plus: vec![0, 0], eps_minus: vec![20, 0] };
        assert!((measured_expectation(&r, &a).unwrap() + 0.25).abs() < 1e-15);
    }

    #[test]
    fn infeasible_allocations() {
        let r = rec(&[(1.0, 5), (-1.0, 50)], 0, 20);
        let over = Allocation { eps_plus: vec![0, 0], eps_minus: vec![20, 0] };
        assert!(matches!(measured_expectation(&r, &over), Err(Error::InfeasibleAllocation(_))));
        let wrong_sum = Allocation { eps_plus: vec![0, 0], eps_minus: vec![5, 5] };
        assert!(measured_expectation(&r, &wrong_sum).is_err());
        let wrong_len = Allocation { eps_plus: vec![0], eps_minus: vec![20] };
        assert!(measured_expectation(&r, &wrong_len).is_err());
    }

    #[test]
    fn extremum_examples() {
        let r = rec(&[(1.0, 50), (-1.0, 50)], 0, 20);
        let g = adversarial_extremum(&r, 1.0, Direction::Minimize);
        assert!((g.value + 0.25).abs() < 1e-15);
        assert_eq!(g.allocation.eps_minus, vec![20, 0]);
        let e = enumerate_extremum(&r, 1.0, Direction::Minimize).unwrap();
        assert_eq!(e.value, g.value);

        let r = rec(&[(1.0, 50), (-1.0, 50)], 10, 0);
        let g = adversarial_extremum(&r, 1.0, Direction::Minimize);
        assert!((g.value + 1.0 / 11.0).abs() < 1e-15);
        assert_eq!(g.allocation.eps_plus, vec![0, 10]);
        assert_eq!(enumerate_extremum(&r, 1.0, Direction::Minimize).unwrap().value, g.value);

        assert_eq!(adversarial_extremum(&r, 0.0, Direction::Minimize).value, 0.0);
        assert_eq!(adversarial_extremum(&r, 0.0, Direction::Maximize).value, 0.0);
    }

    #[test]
    fn negative_coefficient_flips_the_bins() {
        let r = rec(&[(1.0, 50), (-1.0, 50)], 0, 20);
        let g = adversarial_extremum(&r, -0.5, Direction::Minimize);
        assert_eq!(g.allocation.eps_minus, vec![0, 20]);
        assert!((g.value - (-0.5 * 20.0 / 80.0)).abs() < 1e-15);
    }

    #[test]
    fn enumeration_respects_limit() {
        let r = rec(&[(1.0, 5000), (0.5, 5000), (0.0, 5000), (-1.0, 5000)], 1000, 1000);
        assert!(lattice_size(&r) > ENUMERATION_LIMIT);
        assert!(enumerate_extremum(&r, 1.0, Direction::Minimize).is_none());
    }

    #[test]
    fn largest_remainder_counts() {
        assert_eq!(ideal_counts(&[0.5, 0.5], 3), vec![2, 1]);
        assert_eq!(ideal_counts(&[1.0 / 3.0; 3], 10), vec![4, 3, 3]);
        assert_eq!(ideal_counts(&[0.25, 0.75], 10_000), vec![2500, 7500]);
        let c = ideal_counts(&[0.1234, 0.5, 0.3766], 997);
        assert_eq!(c.iter().sum::<u64>(), 997);
    }

    #[test]
    fn distribution_from_bell_state() {
        let dec = decompose(&witnesses::w_phi_plus(), &pauli_basis()).unwrap();
        let rho = witnesses::phi_plus_density();
        for s in dec.settings() {
            let d = OutcomeDistribution::from_state(s.operator(), &rho).unwrap();
            let direct = hs_inner(s.operator(), &rho).unwrap();
            assert!((d.expectation() - direct).abs() < 1e-12);
            assert_eq!(d.eigenvalues.len(), 2);
        }
    }

    #[test]
    fn perfect_detectors_have_no_gap() {
        let dec = decompose(&witnesses::w_phi_plus(), &pauli_basis()).unwrap();
        let rep = verify_for_state(&dec, &witnesses::werner_state(0.8), EfficiencyPair::perfect(), 1000).unwrap();
        assert!(rep.gap.abs() < 1e-12);
        assert_eq!(rep.attainability_deficit, 0.0);
    }

    #[test]
    fn deficit_when_the_opposite_bin_is_empty() {
        // On |phi+> every ideal event of a setting lands on the outcome with
        // c * lambda = -|c|; the outcome the adversary would drop is empty.
        let dec = decompose(&witnesses::w_phi_plus(), &pauli_basis()).unwrap();
        let eff = EfficiencyPair::new(1.0, 0.8).unwrap();
        let rep = verify_for_state(&dec, &witnesses::phi_plus_density(), eff, 10_000).unwrap();
        assert!(rep.attainability_deficit > 0.1);
        // every setting already sits at -|c|; losing events cannot push it lower
        assert!((rep.oracle_value + 0.5).abs() < 1e-12);
    }

    #[test]
    fn werner_state_without_deficit() {
        let dec = decompose(&witnesses::w_phi_plus(), &pauli_basis()).unwrap();
        let rho = witnesses::werner_state(0.36);
        let eff = EfficiencyPair::new(1.0, 0.7).unwrap();
        let rep = verify_for_state(&dec, &rho, eff, 10_000).unwrap();
        assert_eq!(rep.attainability_deficit, 0.0);
        assert!(rep.gap.abs() < 1e-12, "{rep:?}");
        let wt = hs_inner(&witnesses::w_phi_plus(), &rho).unwrap();
        assert!((closed_form_wm(&dec, wt, eff) - rep.formula_value).abs() < 1e-12);
    }

    #[test]
    fn expectation_entry_point_matches_state_entry_point() {
        let dec = decompose(&witnesses::w_phi_plus(), &pauli_basis()).unwrap();
        let rho = witnesses::werner_state(0.5);
        let ex: Vec<f64> = dec.settings().iter().map(|s| hs_inner(s.operator(), &rho).unwrap()).collect();
        let eff = EfficiencyPair::new(0.9, 0.75).unwrap();
        let a = verify_closed_form(&dec, &ex, eff, 5000).unwrap();
        let b = verify_for_state(&dec, &rho, eff, 5000).unwrap();
        assert!((a.oracle_value - b.oracle_value).abs() < 1e-12);
        assert!((a.formula_value - b.formula_value).abs() < 1e-12);
        assert!(verify_closed_form(&dec, &[0.0], eff, 10).is_err());
        assert!(verify_closed_form(&dec, &[2.0, 0.0, 0.0], eff, 10).is_err());
        assert!(verify_closed_form(&dec, &ex, eff, 0).is_err());
    }
}
