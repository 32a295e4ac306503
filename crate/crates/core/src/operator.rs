//! Dense complex operators on small multipartite Hilbert spaces.
//!
//! Everything in this crate lives on at most a handful of qubits or qutrits,
//! so operators are stored as dense `DMatrix<Complex64>` together with the
//! list of subsystem dimensions they act on.

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum entrywise deviation `|A - A^dagger|` accepted as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dims: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Validates shape, finiteness and Hermiticity, then symmetrizes to
    /// `(A + A^dagger) / 2` so downstream code sees an exactly Hermitian matrix.
    pub fn new(dims: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!(
                "subsystem dimensions must be positive, got {dims:?}"
            )));
        }
        let side: usize = dims.iter().product();
        if matrix.nrows() != side || matrix.ncols() != side {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} require a {side}x{side} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        for r in 0..side {
            for c in 0..side {
                let z = matrix[(r, c)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        let adjoint = matrix.adjoint();
        let deviation = (&matrix - &adjoint)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > HERMITICITY_TOL {
            return Err(Error::NonHermitianInput { deviation });
        }
        let matrix = (matrix + adjoint).scale(0.5);
        Ok(Self { dims, matrix })
    }

    /// Single-party operator from a row-major list of entries.
    pub fn from_rows(dims: Vec<usize>, rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix is not square".into()));
        }
        let m = DMatrix::from_fn(n, n, |r, c| rows[r][c]);
        Self::new(dims, m)
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let side = dims.iter().product();
        Self {
            dims,
            matrix: DMatrix::identity(side, side),
        }
    }

    /// `|psi><psi|` for a (not necessarily normalized) vector.
    pub fn projector(dims: Vec<usize>, psi: &DVector<Complex64>) -> Result<Self> {
        let m = psi * psi.adjoint();
        Self::new(dims, m)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            dims: self.dims.clone(),
            matrix: self.matrix.scale(t),
        }
    }

    /// `self + t * other`.
    pub fn add_scaled(&self, other: &Self, t: f64) -> Result<Self> {
        check_same_dims(self, other)?;
        Ok(Self {
            dims: self.dims.clone(),
            matrix: &self.matrix + other.matrix.scale(t),
        })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Unitary conjugation `U A U^dagger`.
    pub fn conjugate_by(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary is {}x{}, operator is {}x{}",
                u.nrows(),
                u.ncols(),
                self.dim(),
                self.dim()
            )));
        }
        Self::new(self.dims.clone(), u * &self.matrix * u.adjoint())
    }
}

fn check_same_dims(a: &HermitianOperator, b: &HermitianOperator) -> Result<()> {
    if a.dims != b.dims {
        return Err(Error::DimensionMismatch(format!(
            "dims {:?} vs {:?}",
            a.dims, b.dims
        )));
    }
    Ok(())
}

/// Kronecker product; the subsystem lists are concatenated.
pub fn tensor_product(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    HermitianOperator {
        dims,
        matrix: a.matrix.kronecker(&b.matrix),
    }
}

/// Tensor product of a nonempty list of factors, left to right.
pub fn tensor_product_all(factors: &[HermitianOperator]) -> Result<HermitianOperator> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::DimensionMismatch("empty tensor product".into()))?;
    Ok(rest
        .iter()
        .fold(first.clone(), |acc, f| tensor_product(&acc, f)))
}

/// `tr(A B)`. Real for Hermitian operands.
pub fn hs_inner(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "total dimensions {} and {} differ",
            a.dim(),
            b.dim()
        )));
    }
    // tr(AB) = sum_{ij} A_ij B_ji, no need to form the product.
    let n = a.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a.matrix[(i, j)] * b.matrix[(j, i)];
        }
    }
    Ok(acc.re)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts ascending. Panics on an empty list.
    pub fn new(mut eigenvalues: Vec<f64>) -> Self {
        assert!(!eigenvalues.is_empty(), "spectrum must be nonempty");
        eigenvalues.sort_by(f64::total_cmp);
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
}

/// Eigenvalues ascending, with the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub spectrum: Spectrum,
    pub eigenvectors: DMatrix<Complex64>,
}

pub fn hermitian_eigen(a: &HermitianOperator) -> Eigensystem {
    let eig = SymmetricEigen::new(a.matrix.clone());
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Eigensystem {
        spectrum: Spectrum { eigenvalues: values },
        eigenvectors: vectors,
    }
}

pub fn hermitian_eigenvalues(a: &HermitianOperator) -> Spectrum {
    hermitian_eigen(a).spectrum
}

/// `u * c * v^T = diag(singular_values)`; rows of `u` and `v` are the
/// left and right singular vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd3 {
    pub u: Matrix3<f64>,
    pub singular_values: [f64; 3],
    pub v: Matrix3<f64>,
}

const SVD_TIE_TOL: f64 = 1e-12;

/// SVD of a real 3x3 matrix with a deterministic gauge.
///
/// Singular values are sorted descending; equal values are ordered by the
/// lexicographic order of the corresponding rows of `u`. Each row of `u` has
/// its first non-negligible component positive, with the sign compensated in
/// the matching row of `v`.
pub fn svd_3x3(c: &Matrix3<f64>) -> Svd3 {
    let svd = c.svd(true, true);
    let big_u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");

    let mut triples: Vec<(f64, [f64; 3], [f64; 3])> = (0..3)
        .map(|k| {
            let mut urow = [big_u[(0, k)], big_u[(1, k)], big_u[(2, k)]];
            let mut vrow = [v_t[(k, 0)], v_t[(k, 1)], v_t[(k, 2)]];
            let lead = urow.iter().copied().find(|x| x.abs() > SVD_TIE_TOL);
            if lead.is_some_and(|x| x < 0.0) {
                urow.iter_mut().for_each(|x| *x = -*x);
                vrow.iter_mut().for_each(|x| *x = -*x);
            }
            (svd.singular_values[k].max(0.0), urow, vrow)
        })
        .collect();

    triples.sort_by(|a, b| {
        if (a.0 - b.0).abs() > SVD_TIE_TOL {
            b.0.total_cmp(&a.0)
        } else {
            a.1.iter()
                .zip(b.1.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        }
    });

    let u = Matrix3::from_fn(|r, col| triples[r].1[col]);
    let v = Matrix3::from_fn(|r, col| triples[r].2[col]);
    Svd3 {
        u,
        singular_values: [triples[0].0, triples[1].0, triples[2].0],
        v,
    }
}
