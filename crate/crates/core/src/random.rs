//! Random operators, states and rotations for sampling checks.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::operator::HermitianOperator;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| Complex64::new(normal(rng), normal(rng)))
}

/// GUE-distributed Hermitian operator.
pub fn hermitian<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> HermitianOperator {
    let n = dims.iter().product();
    let g = ginibre(n, rng);
    let h = (&g + g.adjoint()).scale(0.5);
    HermitianOperator::new(dims.to_vec(), h).expect("symmetrized Gaussian matrix is Hermitian")
}

/// Hilbert-Schmidt distributed density matrix.
pub fn density_matrix<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> HermitianOperator {
    let n = dims.iter().product();
    let g = ginibre(n, rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    HermitianOperator::new(dims.to_vec(), rho.unscale(tr)).expect("G G^dagger is Hermitian")
}

/// Haar-random pure state of dimension `d`.
pub fn haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<Complex64> {
    let v = DVector::from_fn(d, |_, _| Complex64::new(normal(rng), normal(rng)));
    let norm = v.norm();
    v.unscale(norm)
}

/// Product of independent Haar-random states, one per party.
pub fn product_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> DVector<Complex64> {
    dims.iter()
        .map(|&d| haar_state(d, rng))
        .reduce(|acc, v| acc.kronecker(&v))
        .expect("at least one party")
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase fix.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let qr = ginibre(n, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// Haar-random element of O(3).
pub fn orthogonal3<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let g = Matrix3::from_fn(|_, _| normal(rng));
    let (mut q, r) = g.qr().unpack();
    for k in 0..3 {
        if r[(k, k)] < 0.0 {
            let mut col = q.column_mut(k);
            col *= -1.0;
        }
    }
    q
}

pub fn unit_vector3<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(normal(rng), normal(rng), normal(rng));
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}
