//! Reference witnesses and states used by the examples, CLI and tests.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::operator::HermitianOperator;

/// `(|0...0> + |1...1>) / sqrt(2)` on `n` qubits.
pub fn ghz_state(n: usize) -> DVector<Complex64> {
    let d = 1usize << n;
    let mut v = DVector::zeros(d);
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = amp;
    v[d - 1] = amp;
    v
}

/// `(|00> + |11>) / sqrt(2)`.
pub fn phi_plus_state() -> DVector<Complex64> {
    ghz_state(2)
}

/// `(1/2 * Id - |psi><psi|)` rescaled to unit trace. For the GHZ family the
/// largest overlap with a product state is 1/2, so this is a witness.
pub fn projector_witness(dims: Vec<usize>, psi: &DVector<Complex64>) -> HermitianOperator {
    let p = HermitianOperator::projector(dims.clone(), psi).expect("projector is Hermitian");
    let w = HermitianOperator::identity(dims)
        .scale(0.5)
        .add_scaled(&p, -1.0)
        .expect("same dims");
    let tr = w.trace();
    w.scale(1.0 / tr)
}

/// The optimal two-qubit witness for `|phi+>`; already trace one.
pub fn w_phi_plus() -> HermitianOperator {
    projector_witness(vec![2, 2], &phi_plus_state())
}

/// Normalized GHZ-projector witness on `n` qubits.
pub fn ghz_witness(n: usize) -> HermitianOperator {
    projector_witness(vec![2; n], &ghz_state(n))
}

pub fn phi_plus_density() -> HermitianOperator {
    HermitianOperator::projector(vec![2, 2], &phi_plus_state()).expect("projector is Hermitian")
}

/// `p |phi+><phi+| + (1 - p) Id / 4`.
pub fn werner_state(p: f64) -> HermitianOperator {
    phi_plus_density()
        .scale(p)
        .add_scaled(&HermitianOperator::identity(vec![2, 2]), (1.0 - p) / 4.0)
        .expect("same dims")
}

pub fn maximally_mixed(dims: Vec<usize>) -> HermitianOperator {
    let d: usize = dims.iter().product();
    HermitianOperator::identity(dims).scale(1.0 / d as f64)
}
