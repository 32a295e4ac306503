//! Optimal local decomposition of two-qubit witnesses.
//!
//! The two-body part `sum c_ij X_i (x) X_j` is brought to operator-Schmidt form
//! through the SVD of the real 3x3 coefficient matrix, and each single-body
//! part `sum a_i X_i` collapses to one rotated Pauli with weight `|a|`. The
//! resulting `sum |c_a|` is the smallest reachable with local Stern-Gerlach
//! settings, which minimizes the detector efficiency needed.

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomposition::{pauli, LocalSetting, WitnessDecomposition, PRUNE_TOL};
use crate::error::{Error, Result};
use crate::operator::{hs_inner, svd_3x3, tensor_product, HermitianOperator};
use crate::random;

fn require_two_qubits(w: &HermitianOperator) -> Result<()> {
    if w.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit witness required, got dims {:?}",
            w.dims()
        )));
    }
    Ok(())
}

/// Real Pauli expansion of a two-qubit operator:
/// `c00 Id + sum a_i X_i (x) Id + sum b_j Id (x) X_j + sum C_ij X_i (x) X_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliCoefficients {
    pub c00: f64,
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub c: Matrix3<f64>,
}

impl PauliCoefficients {
    pub fn to_operator(&self) -> HermitianOperator {
        let mut acc = HermitianOperator::identity(vec![2, 2]).scale(self.c00);
        for i in 0..3 {
            let add = |acc: HermitianOperator, l: usize, r: usize, t: f64| {
                acc.add_scaled(&tensor_product(&pauli(l), &pauli(r)), t)
                    .expect("two-qubit operands")
            };
            acc = add(acc, i + 1, 0, self.a[i]);
            acc = add(acc, 0, i + 1, self.b[i]);
            for j in 0..3 {
                acc = add(acc, i + 1, j + 1, self.c[(i, j)]);
            }
        }
        acc
    }
}

pub fn pauli_coefficients(w: &HermitianOperator) -> Result<PauliCoefficients> {
    require_two_qubits(w)?;
    let coeff = |l: usize, r: usize| -> Result<f64> {
        Ok(hs_inner(w, &tensor_product(&pauli(l), &pauli(r)))? / 4.0)
    };
    let mut a = Vector3::zeros();
    let mut b = Vector3::zeros();
    let mut c = Matrix3::zeros();
    for i in 0..3 {
        a[i] = coeff(i + 1, 0)?;
        b[i] = coeff(0, i + 1)?;
        for j in 0..3 {
            c[(i, j)] = coeff(i + 1, j + 1)?;
        }
    }
    Ok(PauliCoefficients {
        c00: coeff(0, 0)?,
        a,
        b,
        c,
    })
}

/// `n . (X, Y, Z)` for a unit Bloch vector `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotatedPauli {
    pub bloch: [f64; 3],
}

impl RotatedPauli {
    /// Normalizes `v`; `None` for a (numerically) zero vector.
    pub fn along(v: &Vector3<f64>) -> Option<Self> {
        let n = v.norm();
        (n > PRUNE_TOL).then(|| Self {
            bloch: [v[0] / n, v[1] / n, v[2] / n],
        })
    }

    pub fn vector(&self) -> Vector3<f64> {
        Vector3::from(self.bloch)
    }

    pub fn operator(&self) -> HermitianOperator {
        let m = (0..3).fold(DMatrix::<Complex64>::zeros(2, 2), |m, k| {
            m + pauli(k + 1).matrix().scale(self.bloch[k])
        });
        HermitianOperator::new(vec![2], m).expect("real combination of Paulis is Hermitian")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchmidtTerm {
    pub weight: f64,
    pub sigma_a: RotatedPauli,
    pub sigma_b: RotatedPauli,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalTerm {
    pub weight: f64,
    pub sigma: RotatedPauli,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalDecomposition {
    pub c0: f64,
    /// Nonzero singular values with their Schmidt operators, descending.
    pub singular_settings: Vec<SchmidtTerm>,
    /// Single-body part on party A, absent when it vanishes.
    pub local_a: Option<LocalTerm>,
    pub local_b: Option<LocalTerm>,
    pub abs_sum: f64,
}

impl OptimalDecomposition {
    /// As a generic decomposition, so the loophole bounds apply directly.
    pub fn to_decomposition(&self) -> Result<WitnessDecomposition> {
        let id = pauli(0);
        let mut settings = Vec::new();
        for (k, t) in self.singular_settings.iter().enumerate() {
            settings.push(LocalSetting::new(
                t.weight,
                vec![t.sigma_a.operator(), t.sigma_b.operator()],
                format!("S{}", k + 1),
            )?);
        }
        if let Some(t) = &self.local_a {
            settings.push(LocalSetting::new(
                t.weight,
                vec![t.sigma.operator(), id.clone()],
                "A".into(),
            )?);
        }
        if let Some(t) = &self.local_b {
            settings.push(LocalSetting::new(
                t.weight,
                vec![id, t.sigma.operator()],
                "B".into(),
            )?);
        }
        WitnessDecomposition::new(self.c0, settings, vec![2, 2])
    }
}

pub fn optimize_two_qubit(w: &HermitianOperator) -> Result<OptimalDecomposition> {
    let pc = pauli_coefficients(w)?;
    let svd = svd_3x3(&pc.c);
    let mut singular_settings = Vec::new();
    for k in 0..3 {
        let s = svd.singular_values[k];
        if s <= PRUNE_TOL {
            continue;
        }
        let ua: Vector3<f64> = svd.u.row(k).transpose();
        let vb: Vector3<f64> = svd.v.row(k).transpose();
        singular_settings.push(SchmidtTerm {
            weight: s,
            sigma_a: RotatedPauli::along(&ua).expect("rows of an orthogonal matrix are unit"),
            sigma_b: RotatedPauli::along(&vb).expect("rows of an orthogonal matrix are unit"),
        });
    }
    let local = |v: &Vector3<f64>| {
        RotatedPauli::along(v).map(|sigma| LocalTerm {
            weight: v.norm(),
            sigma,
        })
    };
    let local_a = local(&pc.a);
    let local_b = local(&pc.b);
    let abs_sum = singular_settings.iter().map(|t| t.weight).sum::<f64>()
        + local_a.map_or(0.0, |t| t.weight)
        + local_b.map_or(0.0, |t| t.weight);
    Ok(OptimalDecomposition {
        c0: pc.c00,
        singular_settings,
        local_a,
        local_b,
        abs_sum,
    })
}

/// `W3 = sum_j b_j sigma'_Aj (x) sigma'_Bj` with every `b_j > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternativeDecomposition {
    pub terms: Vec<SchmidtTerm>,
}

impl AlternativeDecomposition {
    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    pub fn to_operator(&self) -> HermitianOperator {
        self.terms.iter().fold(
            HermitianOperator::identity(vec![2, 2]).scale(0.0),
            |acc, t| {
                acc.add_scaled(
                    &tensor_product(&t.sigma_a.operator(), &t.sigma_b.operator()),
                    t.weight,
                )
                .expect("two-qubit operands")
            },
        )
    }
}

/// The two-body part `sum C_ij X_i (x) X_j` of `w`.
pub fn two_body_part(w: &HermitianOperator) -> Result<HermitianOperator> {
    let mut pc = pauli_coefficients(w)?;
    pc.c00 = 0.0;
    pc.a = Vector3::zeros();
    pc.b = Vector3::zeros();
    Ok(pc.to_operator())
}

/// Rewrites the two-body part through an explicit mixing.
///
/// In Schmidt coordinates `diag(s) = A B^T` with `A = diag(sqrt s) G` and
/// `B = diag(sqrt s) G^-T`; for `Q` with orthonormal columns the rows `q_j`
/// give `diag(s) = sum_j (A q_j)(B q_j)^T`, one product term per row. `Q = Id`
/// and `G = Id` reproduce the SVD terms.
pub fn mix_decomposition(
    w: &HermitianOperator,
    q: &DMatrix<f64>,
    g: &Matrix3<f64>,
) -> Result<AlternativeDecomposition> {
    if q.ncols() != 3 || q.nrows() < 3 {
        return Err(Error::ConstructionFailed(format!(
            "mixing matrix must be M x 3 with M >= 3, got {}x{}",
            q.nrows(),
            q.ncols()
        )));
    }
    if (q.transpose() * q - DMatrix::<f64>::identity(3, 3)).amax() > 1e-10 {
        return Err(Error::ConstructionFailed("mixing columns are not orthonormal".into()));
    }
    let g_inv_t = g
        .try_inverse()
        .ok_or_else(|| Error::ConstructionFailed("singular mixing matrix G".into()))?
        .transpose();
    let pc = pauli_coefficients(w)?;
    let svd = svd_3x3(&pc.c);
    let sqrt_s = Matrix3::from_diagonal(&Vector3::from(svd.singular_values.map(f64::sqrt)));
    let a_mat = sqrt_s * g;
    let b_mat = sqrt_s * g_inv_t;

    let mut terms = Vec::with_capacity(q.nrows());
    for j in 0..q.nrows() {
        let qj = Vector3::new(q[(j, 0)], q[(j, 1)], q[(j, 2)]);
        // back from Schmidt to Pauli coordinates
        let alpha = svd.u.transpose() * (a_mat * qj);
        let beta = svd.v.transpose() * (b_mat * qj);
        let weight = alpha.norm() * beta.norm();
        if weight <= PRUNE_TOL {
            return Err(Error::ConstructionFailed(format!("term {j} has zero weight")));
        }
        terms.push(SchmidtTerm {
            weight,
            sigma_a: RotatedPauli::along(&alpha).expect("nonzero"),
            sigma_b: RotatedPauli::along(&beta).expect("nonzero"),
        });
    }
    Ok(AlternativeDecomposition { terms })
}

const MIXING_ATTEMPTS: usize = 64;

/// A random valid decomposition of the two-body part into `terms` products of
/// rotated Paulis, used as an adversary for the optimality property.
pub fn random_decomposition(
    w: &HermitianOperator,
    terms: usize,
    seed: u64,
) -> Result<AlternativeDecomposition> {
    require_two_qubits(w)?;
    if terms < 3 {
        return Err(Error::ConstructionFailed(format!(
            "at least 3 terms required, got {terms}"
        )));
    }
    let target = two_body_part(w)?;
    if target.matrix().iter().all(|z| z.norm() <= PRUNE_TOL) {
        return Err(Error::ConstructionFailed("two-body part vanishes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MIXING_ATTEMPTS {
        let gauss = DMatrix::<f64>::from_fn(terms, 3, |_, _| {
            rand::Rng::sample(&mut rng, rand_distr::StandardNormal)
        });
        let q = gauss.qr().q();
        let g = random::orthogonal3(&mut rng)
            * Matrix3::from_diagonal(&Vector3::from_fn(|_, _| {
                rand::Rng::random_range(&mut rng, 0.3..3.0)
            }))
            * random::orthogonal3(&mut rng);
        let Ok(dec) = mix_decomposition(w, &q, &g) else {
            continue;
        };
        if dec.to_operator().max_abs_diff(&target) <= 1e-9 {
            return Ok(dec);
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no exact mixing found in {MIXING_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{decompose, pauli_basis, reassemble};
    use crate::loophole::eta_minus_threshold;
    use crate::witnesses;
    use rand::SeedableRng;

    #[test]
    fn phi_plus_coefficients() {
        let pc = pauli_coefficients(&witnesses::w_phi_plus()).unwrap();
        assert!((pc.c00 - 0.25).abs() < 1e-15);
        assert!(pc.a.amax() < 1e-15 && pc.b.amax() < 1e-15);
        let want = Matrix3::from_diagonal(&Vector3::new(-0.25, 0.25, -0.25));
        assert!((pc.c - want).amax() < 1e-15);
    }

    #[test]
    fn identity_coefficients() {
        let pc = pauli_coefficients(&HermitianOperator::identity(vec![2, 2]).scale(0.25)).unwrap();
        assert_eq!(pc.c00, 0.25);
        assert_eq!(pc.a, Vector3::zeros());
        assert_eq!(pc.c, Matrix3::zeros());
        let opt = optimize_two_qubit(&HermitianOperator::identity(vec![2, 2]).scale(0.25)).unwrap();
        assert_eq!(opt.abs_sum, 0.0);
        assert!(opt.singular_settings.is_empty() && opt.local_a.is_none());
    }

    #[test]
    fn rejects_non_two_qubit() {
        let w = witnesses::ghz_witness(3);
        assert!(matches!(pauli_coefficients(&w), Err(Error::DimensionMismatch(_))));
        assert!(matches!(optimize_two_qubit(&w), Err(Error::DimensionMismatch(_))));
        let q = HermitianOperator::identity(vec![4]);
        assert!(optimize_two_qubit(&q).is_err());
    }

    #[test]
    fn phi_plus_optimum() {
        let opt = optimize_two_qubit(&witnesses::w_phi_plus()).unwrap();
        assert_eq!(opt.singular_settings.len(), 3);
        for t in &opt.singular_settings {
            assert!((t.weight - 0.25).abs() < 1e-14);
        }
        assert!(opt.local_a.is_none() && opt.local_b.is_none());
        assert!((opt.abs_sum - 0.75).abs() < 1e-14);
        assert!((opt.c0 + opt.abs_sum - 1.0).abs() < 1e-14);
        let back = reassemble(&opt.to_decomposition().unwrap()).unwrap();
        assert!(back.max_abs_diff(&witnesses::w_phi_plus()) < 1e-12);
    }

    #[test]
    fn single_body_part_collapses() {
        let pc = PauliCoefficients {
            c00: 0.25,
            a: Vector3::new(0.3, 0.0, 0.4),
            b: Vector3::zeros(),
            c: Matrix3::zeros(),
        };
        let w = pc.to_operator();
        let opt = optimize_two_qubit(&w).unwrap();
        assert!(opt.singular_settings.is_empty());
        assert!(opt.local_b.is_none());
        let a = opt.local_a.unwrap();
        assert!((a.weight - 0.5).abs() < 1e-14);
        assert!((a.sigma.vector() - Vector3::new(0.6, 0.0, 0.8)).amax() < 1e-14);
        assert!((opt.abs_sum - 0.5).abs() < 1e-14);
        let dec = opt.to_decomposition().unwrap();
        assert_eq!(dec.settings().len(), 1);
        assert!(reassemble(&dec).unwrap().max_abs_diff(&w) < 1e-12);
    }

    #[test]
    fn rotated_paulis_square_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = random::hermitian(&[2, 2], &mut rng);
        let opt = optimize_two_qubit(&w).unwrap();
        let id = HermitianOperator::identity(vec![2]);
        let check = |p: &RotatedPauli| {
            let op = p.operator();
            assert!(op.trace().abs() < 1e-12);
            let sq = HermitianOperator::new(vec![2], op.matrix() * op.matrix()).unwrap();
            assert!(sq.max_abs_diff(&id) < 1e-9);
        };
        for t in &opt.singular_settings {
            check(&t.sigma_a);
            check(&t.sigma_b);
        }
        let n = opt.singular_settings.len();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                let sa = &opt.singular_settings;
                let ipa = hs_inner(&sa[i].sigma_a.operator(), &sa[j].sigma_a.operator()).unwrap() / 2.0;
                let ipb = hs_inner(&sa[i].sigma_b.operator(), &sa[j].sigma_b.operator()).unwrap() / 2.0;
                assert!((ipa - want).abs() < 1e-9 && (ipb - want).abs() < 1e-9);
            }
        }
        assert!(reassemble(&opt.to_decomposition().unwrap()).unwrap().max_abs_diff(&w) < 1e-9);
    }

    #[test]
    fn trivial_mixing_recovers_svd() {
        let w = witnesses::w_phi_plus();
        let q = DMatrix::<f64>::identity(3, 3);
        let alt = mix_decomposition(&w, &q, &Matrix3::identity()).unwrap();
        assert_eq!(alt.terms.len(), 3);
        assert!((alt.weight_sum() - 0.75).abs() < 1e-14);
        let opt = optimize_two_qubit(&w).unwrap();
        for (t, s) in alt.terms.iter().zip(&opt.singular_settings) {
            assert!((t.weight - s.weight).abs() < 1e-14);
            assert!((t.sigma_a.vector() - s.sigma_a.vector()).amax() < 1e-12);
            assert!((t.sigma_b.vector() - s.sigma_b.vector()).amax() < 1e-12);
        }
    }

    #[test]
    fn random_decomposition_errors() {
        let w = witnesses::w_phi_plus();
        assert!(matches!(random_decomposition(&w, 2, 0), Err(Error::ConstructionFailed(_))));
        let id = HermitianOperator::identity(vec![2, 2]).scale(0.25);
        assert!(matches!(random_decomposition(&id, 4, 0), Err(Error::ConstructionFailed(_))));
        assert!(random_decomposition(&witnesses::ghz_witness(3), 4, 0).is_err());
    }

    #[test]
    fn phi_plus_never_beats_svd() {
        let w = witnesses::w_phi_plus();
        let target = two_body_part(&w).unwrap();
        let mut best = f64::INFINITY;
        for seed in 0..1000 {
            let alt = random_decomposition(&w, 3 + (seed as usize % 5), seed).unwrap();
            assert!(alt.to_operator().max_abs_diff(&target) <= 1e-9);
            assert!(alt.terms.iter().all(|t| t.weight > 0.0));
            best = best.min(alt.weight_sum());
        }
        assert!(best >= 0.75 - 1e-9, "best = {best}");
    }

    #[test]
    fn optimal_abs_sum_is_below_raw_pauli_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let w = random::hermitian(&[2, 2], &mut rng);
            let raw = decompose(&w, &pauli_basis()).unwrap();
            let opt = optimize_two_qubit(&w).unwrap();
            assert!(opt.abs_sum <= raw.abs_sum() + 1e-12);
            let wm = -0.1;
            let c0 = raw.c0().abs() + 0.1;
            let t_opt = eta_minus_threshold(wm, c0, opt.abs_sum).unwrap().value().unwrap();
            let t_raw = eta_minus_threshold(wm, c0, raw.abs_sum()).unwrap().value().unwrap();
            assert!(t_opt <= t_raw + 1e-12);
        }
    }

    #[test]
    fn local_unitary_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let w = random::hermitian(&[2, 2], &mut rng);
            let u = random::unitary(2, &mut rng).kronecker(&random::unitary(2, &mut rng));
            let w2 = w.conjugate_by(&u).unwrap();
            let (o1, o2) = (optimize_two_qubit(&w).unwrap(), optimize_two_qubit(&w2).unwrap());
            assert!((o1.abs_sum - o2.abs_sum).abs() < 1e-9);
            let s1 = svd_3x3(&pauli_coefficients(&w).unwrap().c).singular_values;
            let s2 = svd_3x3(&pauli_coefficients(&w2).unwrap().c).singular_values;
            for k in 0..3 {
                assert!((s1[k] - s2[k]).abs() < 1e-9);
            }
        }
    }
}
