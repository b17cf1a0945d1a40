use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Needed for f64 math in no_std builds; shadowed by inherent methods in tests.
#[allow(unused_imports)]
use num_traits::Float;

use super::{cis, ComplexMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `H = V diag(values) V^dagger` of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending; `vectors` holds the orthonormal
/// eigenvectors as columns, in the same order.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Applies `exp(-i H t)` to `x` through the factorization.
    pub fn propagate(&self, t: f64, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.values.len();
        debug_assert_eq!(x.len(), n);
        // c = V^dagger x
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        for (k, ck) in c.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, xi) in x.iter().enumerate() {
                acc += self.vectors[(i, k)].conj() * xi;
            }
            *ck = acc;
        }
        for (k, ck) in c.iter_mut().enumerate() {
            *ck *= cis(-self.values[k] * t);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, oi) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, ck) in c.iter().enumerate() {
                acc += self.vectors[(i, k)] * ck;
            }
            *oi = acc;
        }
        out
    }

    /// Smallest gap between adjacent eigenvalues.
    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Matrices here are small (dim <= a few tens), where Jacobi is
/// simple, dependency-free and accurate to machine precision.
pub fn hermitian_eigen(m: &ComplexMatrix, hermiticity_tol: f64) -> Result<HermitianEigen> {
    m.require_hermitian(hermiticity_tol)?;
    let n = m.rows();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(HermitianEigen {
            values: vec![0.0; n],
            vectors: v,
        });
    }
    let stop = f64::EPSILON * scale * (n as f64);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, scale);
            }
        }
    }
    if !converged {
        // One final check: the sweep that ran last may have finished the job.
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off > stop {
            return Err(Error::EigenConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, k)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Zeroes a[(p, q)] with a unitary plane rotation, updating `a` and
/// accumulating the rotation into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, scale: f64) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r <= f64::EPSILON * scale {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = apq / r; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let d = app - aqq;
    // tan(2 theta) = 2 r / d, smaller-angle root.
    let t = if d == 0.0 {
        1.0
    } else {
        let zeta = d / (2.0 * r);
        zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = a.rows();
    // Columns/rows p, q of A <- G^dagger A G with
    // G[p][p] = c, G[p][q] = -s e^{i phi}, G[q][p] = s e^{-i phi}, G[q][q] = c.
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = akp * c + akq * s * phase.conj();
        let new_kq = -akp * s * phase + akq * c;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp.conj();
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq.conj();
    }
    let new_pp = app * c * c + aqq * s * s + 2.0 * c * s * r;
    let new_qq = app * s * s + aqq * c * c - 2.0 * c * s * r;
    a[(p, p)] = Complex64::new(new_pp, 0.0);
    a[(q, q)] = Complex64::new(new_qq, 0.0);
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * s * phase.conj();
        v[(k, q)] = -vkp * s * phase + vkq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn pauli_x_eigenpairs() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(1.0, 0.0);
        let eig = hermitian_eigen(&m, 1e-12).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3, 5, 8, 12] {
            let m = random_hermitian(n, &mut rng);
            let eig = hermitian_eigen(&m, 1e-12).unwrap();
            // V diag(w) V^dagger == M
            for i in 0..n {
                for j in 0..n {
                    let mut acc = c(0.0, 0.0);
                    for k in 0..n {
                        acc += eig.vectors[(i, k)] * eig.values[k] * eig.vectors[(j, k)].conj();
                    }
                    assert!(
                        (acc - m[(i, j)]).norm() < 1e-12,
                        "reconstruction failed at ({i},{j}) for n={n}"
                    );
                }
            }
            // Columns orthonormal.
            for k in 0..n {
                for l in 0..n {
                    let mut acc = c(0.0, 0.0);
                    for i in 0..n {
                        acc += eig.vectors[(i, k)].conj() * eig.vectors[(i, l)];
                    }
                    let expect = if k == l { 1.0 } else { 0.0 };
                    assert!((acc - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(0.5, 0.0);
        let err = hermitian_eigen(&m, 1e-12).unwrap_err();
        match err {
            Error::NotHermitian { max_asymmetry, .. } => assert!(max_asymmetry > 0.4),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
