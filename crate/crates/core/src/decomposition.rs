//! Expansion of witnesses in a local operator basis, `W = c0 Id + sum_a c_a S_a`,
//! where every `S_a` is a tensor product of single-party basis elements.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::operator::{
    hermitian_eigenvalues, hs_inner, tensor_product_all, HermitianOperator, Spectrum,
};
use crate::random;

/// Coefficients with modulus at or below this are dropped from a decomposition.
pub const PRUNE_TOL: f64 = 1e-12;

const TRACELESS_TOL: f64 = 1e-10;

/// Single-party basis: the identity first, then `d^2 - 1` traceless,
/// mutually orthogonal Hermitian generators normalized to `tr(g^2) = 2`.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<HermitianOperator>,
    labels: Vec<String>,
}

impl OperatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single(d: usize, m: DMatrix<Complex64>) -> HermitianOperator {
    HermitianOperator::new(vec![d], m).expect("basis elements are Hermitian by construction")
}

/// Pauli operator by index: 0 = identity, 1/2/3 = x/y/z.
pub fn pauli(k: usize) -> HermitianOperator {
    let m = match k {
        0 => [c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)],
        1 => [c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
        2 => [c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
        3 => [c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
        _ => panic!("Pauli index {k} out of range"),
    };
    single(2, DMatrix::from_row_slice(2, 2, &m))
}

/// `{Id, X, Y, Z}`.
pub fn pauli_basis() -> OperatorBasis {
    OperatorBasis {
        dim: 2,
        elements: (0..4).map(pauli).collect(),
        labels: ["I", "X", "Y", "Z"].iter().map(|s| s.to_string()).collect(),
    }
}

/// Generalized Gell-Mann matrices for SU(d), in the usual ordering: for each
/// column `k` the symmetric and antisymmetric off-diagonal pairs `(j, k)`,
/// `j < k`, followed by the `k`-th diagonal generator. For `d = 2` this is
/// exactly `{X, Y, Z}`.
pub fn gellmann_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut elements = vec![HermitianOperator::identity(vec![d])];
    let mut labels = vec!["I".to_string()];
    for k in 1..d {
        for j in 0..k {
            let mut sym = DMatrix::zeros(d, d);
            sym[(j, k)] = c(1., 0.);
            sym[(k, j)] = c(1., 0.);
            elements.push(single(d, sym));

            let mut anti = DMatrix::zeros(d, d);
            anti[(j, k)] = c(0., -1.);
            anti[(k, j)] = c(0., 1.);
            elements.push(single(d, anti));
        }
        let norm = (2.0 / (k * (k + 1)) as f64).sqrt();
        let mut diag = DMatrix::zeros(d, d);
        for m in 0..k {
            diag[(m, m)] = c(norm, 0.);
        }
        diag[(k, k)] = c(-(k as f64) * norm, 0.);
        elements.push(single(d, diag));
    }
    for n in 1..elements.len() {
        labels.push(format!("gm{n}"));
    }
    Ok(OperatorBasis {
        dim: d,
        elements,
        labels,
    })
}

/// One measured term `c * S` with `S = factor_1 (x) ... (x) factor_n`.
#[derive(Debug, Clone)]
pub struct LocalSetting {
    coefficient: f64,
    factors: Vec<HermitianOperator>,
    label: String,
    operator: HermitianOperator,
    spectrum: Spectrum,
}

fn is_identity(op: &HermitianOperator) -> bool {
    op.max_abs_diff(&HermitianOperator::identity(op.dims().to_vec())) <= TRACELESS_TOL
}

impl LocalSetting {
    pub fn new(coefficient: f64, factors: Vec<HermitianOperator>, label: String) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDecomposition("setting without factors".into()));
        }
        if let Some(bad) = factors.iter().find(|f| f.dims().len() != 1) {
            return Err(Error::InvalidDecomposition(format!(
                "setting factors must be single-party operators, got dims {:?}",
                bad.dims()
            )));
        }
        let identities = factors.iter().filter(|f| is_identity(f)).count();
        if factors
            .iter()
            .any(|f| !is_identity(f) && f.trace().abs() > TRACELESS_TOL)
        {
            return Err(Error::InvalidDecomposition(format!(
                "setting {label}: every factor must be traceless or the identity"
            )));
        }
        if identities == factors.len() {
            return Err(Error::InvalidDecomposition(format!(
                "setting {label} is the identity; it belongs in c0"
            )));
        }
        let operator = tensor_product_all(&factors)?;
        let spectrum = hermitian_eigenvalues(&operator);
        Ok(Self {
            coefficient,
            factors,
            label,
            operator,
            spectrum,
        })
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn factors(&self) -> &[HermitianOperator] {
        &self.factors
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The assembled tensor product `S`.
    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dims(&self) -> &[usize] {
        self.operator.dims()
    }
}

#[derive(Debug, Clone)]
pub struct WitnessDecomposition {
    c0: f64,
    settings: Vec<LocalSetting>,
    dims: Vec<usize>,
}

impl WitnessDecomposition {
    pub fn new(c0: f64, settings: Vec<LocalSetting>, dims: Vec<usize>) -> Result<Self> {
        if let Some(s) = settings.iter().find(|s| s.dims() != dims.as_slice()) {
            return Err(Error::DimensionMismatch(format!(
                "setting {} acts on {:?}, decomposition on {:?}",
                s.label(),
                s.dims(),
                dims
            )));
        }
        Ok(Self { c0, settings, dims })
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn settings(&self) -> &[LocalSetting] {
        &self.settings
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `sum_a |c_a|`.
    pub fn abs_sum(&self) -> f64 {
        self.settings.iter().map(|s| s.coefficient.abs()).sum()
    }

    /// Multiplies `c0` and every `c_a` by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        let settings = self
            .settings
            .iter()
            .map(|s| LocalSetting {
                coefficient: s.coefficient * t,
                ..s.clone()
            })
            .collect();
        Self {
            c0: self.c0 * t,
            settings,
            dims: self.dims.clone(),
        }
    }
}

/// Expands `w` with the same single-party basis on every subsystem.
pub fn decompose(w: &HermitianOperator, basis: &OperatorBasis) -> Result<WitnessDecomposition> {
    let bases = vec![basis.clone(); w.dims().len()];
    decompose_per_party(w, &bases)
}

/// Expands `w` with one basis per subsystem.
pub fn decompose_per_party(
    w: &HermitianOperator,
    bases: &[OperatorBasis],
) -> Result<WitnessDecomposition> {
    let dims = w.dims();
    if bases.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} bases for {} subsystems",
            bases.len(),
            dims.len()
        )));
    }
    for (nu, (b, &d)) in bases.iter().zip(dims).enumerate() {
        if b.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "basis for party {nu} has dimension {}, witness has {d}",
                b.dim()
            )));
        }
    }

    let total: usize = dims.iter().product();
    let c0 = w.trace() / total as f64;
    let mut settings = Vec::new();
    let mut index = vec![0usize; dims.len()];
    // Odometer over all multi-indices, skipping the all-identity term.
    while advance(&mut index, bases) {
        let factors: Vec<HermitianOperator> = index
            .iter()
            .zip(bases)
            .map(|(&i, b)| b.elements[i].clone())
            .collect();
        let s = tensor_product_all(&factors)?;
        let norm: f64 = factors.iter().map(|f| hs_inner(f, f).unwrap_or(0.0)).product();
        let coefficient = hs_inner(w, &s)? / norm;
        if coefficient.abs() <= PRUNE_TOL {
            continue;
        }
        let label = join_labels(index.iter().zip(bases).map(|(&i, b)| b.labels[i].as_str()));
        settings.push(LocalSetting::new(coefficient, factors, label)?);
    }
    WitnessDecomposition::new(c0, settings, dims.to_vec())
}

fn advance(index: &mut [usize], bases: &[OperatorBasis]) -> bool {
    for pos in (0..index.len()).rev() {
        index[pos] += 1;
        if index[pos] < bases[pos].len() {
            return true;
        }
        index[pos] = 0;
    }
    false
}

fn join_labels<'a>(labels: impl Iterator<Item = &'a str>) -> String {
    let labels: Vec<&str> = labels.collect();
    if labels.iter().all(|l| l.len() == 1) {
        labels.concat()
    } else {
        labels.join("*")
    }
}

/// `c0 Id + sum_a c_a S_a`.
pub fn reassemble(dec: &WitnessDecomposition) -> Result<HermitianOperator> {
    dec.settings.iter().try_fold(
        HermitianOperator::identity(dec.dims.clone()).scale(dec.c0),
        |acc, s| acc.add_scaled(&s.operator, s.coefficient),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// Smallest `<psi|W|psi>` over the sampled product states.
    pub min_product_value: f64,
    pub has_negative_eigenvalue: bool,
}

/// Screens `w` against random pure product states. A negative
/// `min_product_value` means `w` is not a witness; the converse is not implied.
pub fn validate_witness(w: &HermitianOperator, samples: usize, seed: u64) -> ValidationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_value = f64::INFINITY;
    for _ in 0..samples {
        let psi: DVector<Complex64> = random::product_state(w.dims(), &mut rng);
        let value = (psi.adjoint() * w.matrix() * &psi)[(0, 0)].re;
        min_value = min_value.min(value);
    }
    ValidationReport {
        min_product_value: min_value,
        has_negative_eigenvalue: hermitian_eigenvalues(w).lambda_min() < -PRUNE_TOL,
    }
}
