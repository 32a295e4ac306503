//! Worst-case analysis of lost and additional detector events.
//!
//! For a setting `c * S` the adversary places every additional event on the
//! outcome minimizing `c * lambda` and removes lost events from the outcome
//! maximizing it. With `kappa = (1/eta_plus + eta_minus - 1)^-1` this gives
//!
//! ```text
//! c<S>_m = kappa * (c<S>_t - omega_plus * (1 - 1/eta_plus) - omega_minus * (1 - eta_minus))
//! ```
//!
//! and summing over settings yields the largest measured `<W>_m` that still
//! guarantees `<W>_t < 0`.

use serde::Serialize;

use crate::decomposition::WitnessDecomposition;
use crate::error::{Error, Result};
use crate::operator::Spectrum;

/// Slack allowed when checking that a true expectation lies in the spectral range.
const RANGE_TOL: f64 = 1e-9;

/// Detector efficiencies, both in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencyPair {
    eta_plus: f64,
    eta_minus: f64,
}

impl EfficiencyPair {
    pub fn new(eta_plus: f64, eta_minus: f64) -> Result<Self> {
        for (name, v) in [("eta_plus", eta_plus), ("eta_minus", eta_minus)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidEfficiency(format!(
                    "{name} = {v} is outside (0, 1]"
                )));
            }
        }
        Ok(Self {
            eta_plus,
            eta_minus,
        })
    }

    pub fn perfect() -> Self {
        Self {
            eta_plus: 1.0,
            eta_minus: 1.0,
        }
    }

    pub fn eta_plus(&self) -> f64 {
        self.eta_plus
    }

    pub fn eta_minus(&self) -> f64 {
        self.eta_minus
    }
}

/// `(omega_plus, omega_minus)`: the smallest and largest value of `c * lambda`
/// over the spectrum. A zero coefficient contributes nothing.
pub fn omega(c: f64, spectrum: &Spectrum) -> (f64, f64) {
    if c == 0.0 {
        return (0.0, 0.0);
    }
    let (lo, hi) = (spectrum.lambda_min(), spectrum.lambda_max());
    if c > 0.0 {
        (c * lo, c * hi)
    } else {
        (c * hi, c * lo)
    }
}

pub fn kappa(eff: EfficiencyPair) -> f64 {
    1.0 / (1.0 / eff.eta_plus + eff.eta_minus - 1.0)
}

/// Lowest measurable `c<S>_m` given the true `<S>_t`.
pub fn worst_case_setting_expectation(
    c: f64,
    spectrum: &Spectrum,
    true_expect: f64,
    eff: EfficiencyPair,
) -> Result<f64> {
    if c == 0.0 {
        return Ok(0.0);
    }
    let (lo, hi) = (spectrum.lambda_min(), spectrum.lambda_max());
    if true_expect < lo - RANGE_TOL || true_expect > hi + RANGE_TOL {
        return Err(Error::OutOfSpectrumRange {
            value: true_expect,
            low: lo,
            high: hi,
        });
    }
    let (op, om) = omega(c, spectrum);
    Ok(kappa(eff)
        * (c * true_expect - op * (1.0 - 1.0 / eff.eta_plus) - om * (1.0 - eff.eta_minus)))
}

/// Per-setting error contributions, kept separate so efficiencies could be
/// indexed by setting later.
fn setting_penalty(c: f64, spectrum: &Spectrum, eff: EfficiencyPair) -> f64 {
    let (op, om) = omega(c, spectrum);
    op * (1.0 - 1.0 / eff.eta_plus) + om * (1.0 - eff.eta_minus)
}

/// Largest measured `<W>_m` that still certifies entanglement; certification
/// needs `<W>_m` strictly below this value.
pub fn wm_bound(dec: &WitnessDecomposition, eff: EfficiencyPair) -> f64 {
    let k = kappa(eff);
    let penalty: f64 = dec
        .settings()
        .iter()
        .map(|s| setting_penalty(s.coefficient(), s.spectrum(), eff))
        .sum();
    dec.c0() * (1.0 - k) - k * penalty
}

/// `wm_bound` specialized to settings with eigenvalues `+-1`, where only
/// `c0` and `abs_sum = sum |c_a|` matter.
pub fn wm_bound_qubits(c0: f64, abs_sum: f64, eff: EfficiencyPair) -> f64 {
    let inv_plus = 1.0 / eff.eta_plus;
    c0 - (c0 + abs_sum * (inv_plus - eff.eta_minus)) / (eff.eta_minus + inv_plus - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum EtaThreshold {
    /// Certification requires `eta_minus` strictly above this value.
    Threshold(f64),
    /// `<W>_m >= 0`: no efficiency certifies anything.
    Impossible,
}

impl EtaThreshold {
    pub fn value(&self) -> Option<f64> {
        match self {
            EtaThreshold::Threshold(v) => Some(*v),
            EtaThreshold::Impossible => None,
        }
    }
}

/// Minimal lost-events efficiency (with `eta_plus = 1`) that certifies a
/// measured `wm`. For general decompositions pass `sum_a omega_a-` as
/// `abs_sum`; for `+-1` spectra the two coincide.
pub fn eta_minus_threshold(wm: f64, c0: f64, abs_sum: f64) -> Result<EtaThreshold> {
    let total = c0 + abs_sum;
    if !(total > 0.0) {
        return Err(Error::InvalidDecomposition(format!(
            "c0 + sum|c_a| = {total} must be positive"
        )));
    }
    if !(wm < 0.0) {
        return Ok(EtaThreshold::Impossible);
    }
    Ok(EtaThreshold::Threshold(1.0 / (1.0 - wm / total)))
}

/// Below this `eta_minus` the bound decreases when `eta_plus` grows.
///
/// With `A = -sum omega_+` and `B = sum omega_-` the derivative of the bound
/// in `1/eta_plus` has the sign of `c0 + B - (A + B) * eta_minus`.
pub fn eta_plus_monotone_floor(dec: &WitnessDecomposition) -> f64 {
    let (a, b) = dec.settings().iter().fold((0.0, 0.0), |(a, b), s| {
        let (op, om) = omega(s.coefficient(), s.spectrum());
        (a - op, b + om)
    });
    if a + b == 0.0 {
        0.0
    } else {
        (dec.c0() + b) / (a + b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopholeReport {
    pub kappa: f64,
    pub omega_plus: Vec<f64>,
    pub omega_minus: Vec<f64>,
    pub wm_bound: f64,
    pub certified: bool,
    pub eta_minus_threshold: EtaThreshold,
}

/// Full worst-case analysis of a measured `wm` at the given efficiencies.
pub fn analyze(
    dec: &WitnessDecomposition,
    eff: EfficiencyPair,
    wm_measured: f64,
) -> Result<LoopholeReport> {
    let (omega_plus, omega_minus): (Vec<f64>, Vec<f64>) = dec
        .settings()
        .iter()
        .map(|s| omega(s.coefficient(), s.spectrum()))
        .unzip();
    let bound = wm_bound(dec, eff);
    let sum_minus: f64 = omega_minus.iter().sum();
    Ok(LoopholeReport {
        kappa: kappa(eff),
        omega_plus,
        omega_minus,
        wm_bound: bound,
        certified: wm_measured < bound,
        eta_minus_threshold: eta_minus_threshold(wm_measured, dec.c0(), sum_minus)?,
    })
}

/// `wm_bound_qubits` on a Cartesian grid; rows follow `eta_minus`, columns `eta_plus`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourGrid {
    pub eta_plus: Vec<f64>,
    pub eta_minus: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

pub fn contour_grid(
    c0: f64,
    abs_sum: f64,
    eta_plus: &[f64],
    eta_minus: &[f64],
) -> Result<ContourGrid> {
    let mut values = Vec::with_capacity(eta_minus.len());
    for &em in eta_minus {
        let row = eta_plus
            .iter()
            .map(|&ep| EfficiencyPair::new(ep, em).map(|eff| wm_bound_qubits(c0, abs_sum, eff)))
            .collect::<Result<Vec<_>>>()?;
        values.push(row);
    }
    Ok(ContourGrid {
        eta_plus: eta_plus.to_vec(),
        eta_minus: eta_minus.to_vec(),
        values,
    })
}

/// `k / n` for `k = 1..=n`.
pub fn uniform_axis(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / n as f64).collect()
}

/// Linear interpolation of where `values` (sampled at `axis`) crosses `level`.
pub fn crossing(axis: &[f64], values: &[f64], level: f64) -> Option<f64> {
    axis.windows(2)
        .zip(values.windows(2))
        .find(|(_, v)| (v[0] - level) * (v[1] - level) <= 0.0 && v[0] != v[1])
        .map(|(x, v)| x[0] + (level - v[0]) * (x[1] - x[0]) / (v[1] - v[0]))
}
