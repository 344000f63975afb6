//! Dense complex factorizations: LU, QR, Hermitian eigendecomposition, SVD.
//!
//! Everything here is written for desk-scale matrices (dimensions in the tens,
//! occasionally a few hundred).  The SVD is a one-sided Jacobi iteration, which
//! is slow but very accurate; the operator norm switches to a power iteration
//! above dimension 64 where a full SVD would be wasteful.

use crate::error::{Error, Result};
use crate::matrix::{cx, Complex64, ComplexMatrix};
use crate::tolerance::ToleranceConfig;

/// Dimension threshold above which `op_norm` uses power iteration instead of SVD.
const OP_NORM_SVD_LIMIT: usize = 64;

/// LU factorization with partial pivoting.
pub struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
    singular: bool,
}

/// Factors a square matrix as `P * a = L * U` with partial pivoting.
pub fn lu_factor(a: &ComplexMatrix) -> LuFactors {
    assert!(a.is_square(), "LU needs a square matrix");
    let n = a.rows;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    let mut singular = false;
    let scale = lu.max_abs().max(1e-300);
    for k in 0..n {
        let mut best = k;
        let mut best_mag = lu.get(k, k).norm();
        for i in (k + 1)..n {
            let mag = lu.get(i, k).norm();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if best_mag <= scale * 1e-300_f64.max(f64::EPSILON * 1e-3) {
            singular = true;
            continue;
        }
        if best != k {
            for j in 0..n {
                let tmp = lu.get(k, j);
                lu.set(k, j, lu.get(best, j));
                lu.set(best, j, tmp);
            }
            perm.swap(k, best);
            swaps += 1;
        }
        let pivot = lu.get(k, k);
        for i in (k + 1)..n {
            let factor = lu.get(i, k) / pivot;
            lu.set(i, k, factor);
            for j in (k + 1)..n {
                let v = lu.get(i, j) - factor * lu.get(k, j);
                // Raw write: elimination can transiently produce tiny values fine for set.
                lu.data[i * n + j] = v;
            }
        }
    }
    LuFactors { lu, perm, swaps, singular }
}

impl LuFactors {
    /// True when a zero pivot was encountered.
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Determinant of the factored matrix.
    pub fn det(&self) -> Complex64 {
        if self.singular {
            return cx(0.0, 0.0);
        }
        let n = self.lu.rows;
        let mut d = if self.swaps % 2 == 0 { cx(1.0, 0.0) } else { cx(-1.0, 0.0) };
        for k in 0..n {
            d *= self.lu.get(k, k);
        }
        d
    }

    /// Solves `a * x = b` for each column of `b`.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.singular {
            return Err(Error::SingularSystem);
        }
        let n = self.lu.rows;
        assert!(b.rows == n, "right-hand side has wrong row count");
        let mut x = ComplexMatrix::zeros(n, b.cols);
        for col in 0..b.cols {
            // Apply the row permutation, then forward- and back-substitute.
            let mut y = vec![cx(0.0, 0.0); n];
            for i in 0..n {
                y[i] = b.get(self.perm[i], col);
            }
            for i in 0..n {
                let mut acc = y[i];
                for j in 0..i {
                    acc -= self.lu.get(i, j) * y[j];
                }
                y[i] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = y[i];
                for j in (i + 1)..n {
                    acc -= self.lu.get(i, j) * y[j];
                }
                y[i] = acc / self.lu.get(i, i);
            }
            for i in 0..n {
                x.set(i, col, y[i]);
            }
        }
        Ok(x)
    }
}

/// Determinant via LU with partial pivoting.
pub fn det(a: &ComplexMatrix) -> Complex64 {
    if a.rows == 0 {
        return cx(1.0, 0.0);
    }
    lu_factor(a).det()
}

/// Solves `a * x = b`; fails on a singular system.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    lu_factor(a).solve(b)
}

/// Matrix inverse; fails on a singular input.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve(a, &ComplexMatrix::identity(a.rows))
}

/// Householder QR decomposition `a = q * r` with unitary `q`.
pub fn qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let m = a.rows;
    let n = a.cols;
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(m);
    for k in 0..n.min(m) {
        // Build the Householder vector for column k below the diagonal.
        let mut norm_sq = 0.0;
        for i in k..m {
            norm_sq += r.get(i, k).norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm <= 1e-300 {
            continue;
        }
        let x0 = r.get(k, k);
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { cx(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k..m).map(|i| r.get(i, k)).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm <= norm * 1e-15 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // r <- (1 - 2 v v*) r on the trailing block.
        for j in 0..n {
            let mut dot = cx(0.0, 0.0);
            for i in k..m {
                dot += v[i - k].conj() * r.get(i, j);
            }
            let dot = dot * 2.0;
            for i in k..m {
                let val = r.get(i, j) - v[i - k] * dot;
                r.data[i * n + j] = val;
            }
        }
        // q <- q (1 - 2 v v*).
        for i in 0..m {
            let mut dot = cx(0.0, 0.0);
            for j in k..m {
                dot += q.get(i, j) * v[j - k];
            }
            let dot = dot * 2.0;
            for j in k..m {
                let val = q.get(i, j) - dot * v[j - k].conj();
                q.data[i * m + j] = val;
            }
        }
    }
    // Zero the numerically eliminated lower triangle.
    for i in 0..m {
        for j in 0..n.min(i) {
            r.data[i * n + j] = cx(0.0, 0.0);
        }
    }
    (q, r)
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order and a unitary `v` with
/// `a = v * diag(lambda) * v^*`.  The input is symmetrized first, so mildly
/// non-Hermitian inputs are projected onto their Hermitian part.
pub fn eig_hermitian(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    assert!(a.is_square(), "eigendecomposition needs a square matrix");
    let n = a.rows;
    if n == 0 {
        return (Vec::new(), ComplexMatrix::identity(0));
    }
    let adj = a.adjoint();
    let mut w = a.add(&adj).scale(cx(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);
    let scale = w.max_abs().max(1e-300);
    let threshold = scale * 1e-15;
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = w.get(p, q);
                let mag = beta.norm();
                if mag <= threshold {
                    continue;
                }
                rotated = true;
                let alpha = w.get(p, p).re;
                let gamma = w.get(q, q).re;
                let phi = beta / mag;
                let tau = (gamma - alpha) / (2.0 * mag);
                let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = -sign / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Right multiply by the rotation on columns (p, q).
                for i in 0..n {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    w.data[i * n + p] = wp * (phi * c) + wq * s;
                    w.data[i * n + q] = wp * (-phi * s) + wq * c;
                }
                // Left multiply by the adjoint rotation on rows (p, q).
                for j in 0..n {
                    let wp = w.get(p, j);
                    let wq = w.get(q, j);
                    w.data[p * n + j] = wp * (phi.conj() * c) + wq * s;
                    w.data[q * n + j] = wp * (-phi.conj() * s) + wq * c;
                }
                for i in 0..n {
                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.data[i * n + p] = vp * (phi * c) + vq * s;
                    v.data[i * n + q] = vp * (-phi * s) + vq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| w.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vs = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vs.set(i, new_col, v.get(i, old_col));
        }
    }
    (values, vs)
}

/// Applies a real function to a Hermitian matrix through its eigendecomposition.
///
/// Eigenvalues are clamped at zero before `f` is applied, which makes the helper
/// safe for square roots of nearly positive semidefinite inputs.
pub fn hermitian_func(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (values, v) = eig_hermitian(a);
    let n = a.rows;
    let mut scaled = v.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let fx = f(lambda.max(0.0));
        if !fx.is_finite() {
            return Err(Error::SingularPivot);
        }
        for i in 0..n {
            let val = scaled.get(i, j) * fx;
            scaled.set(i, j, val);
        }
    }
    Ok(scaled.mul(&v.adjoint()))
}

/// Full singular value decomposition `a = u * diag(s) * v^*`.
pub struct Svd {
    /// Unitary left factor, `rows x rows`.
    pub u: ComplexMatrix,
    /// Singular values in descending order, `min(rows, cols)` of them.
    pub s: Vec<f64>,
    /// Unitary right factor, `cols x cols`.
    pub v: ComplexMatrix,
}

/// One-sided Jacobi SVD with full unitary factors.
pub fn svd(a: &ComplexMatrix) -> Svd {
    if a.rows < a.cols {
        let t = svd(&a.adjoint());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let m = a.rows;
    let n = a.cols;
    if n == 0 {
        return Svd { u: ComplexMatrix::identity(m), s: Vec::new(), v: ComplexMatrix::identity(0) };
    }
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut hpp = 0.0;
                let mut hqq = 0.0;
                let mut hpq = cx(0.0, 0.0);
                for i in 0..m {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    hpp += wp.norm_sqr();
                    hqq += wq.norm_sqr();
                    hpq += wp.conj() * wq;
                }
                let mag = hpq.norm();
                if mag <= 1e-30 || mag * mag <= 1e-30 * hpp * hqq {
                    continue;
                }
                rotated = true;
                let phi = hpq / mag;
                let tau = (hqq - hpp) / (2.0 * mag);
                let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = -sign / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..m {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    w.data[i * n + p] = wp * (phi * c) + wq * s;
                    w.data[i * n + q] = wp * (-phi * s) + wq * c;
                }
                for i in 0..n {
                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.data[i * n + p] = vp * (phi * c) + vq * s;
                    v.data[i * n + q] = vp * (-phi * s) + vq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    // Column norms are the singular values; sort descending.
    let mut sigmas: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| w.get(i, j).norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigmas[j].partial_cmp(&sigmas[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut ws = ComplexMatrix::zeros(m, n);
    let mut vs = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..m {
            ws.set(i, new_col, w.get(i, old_col));
        }
        for i in 0..n {
            vs.set(i, new_col, v.get(i, old_col));
        }
    }
    sigmas.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    // Normalize the nonzero columns of w into u; complete the rest orthonormally.
    let sigma_floor = sigmas.first().copied().unwrap_or(0.0) * 1e-14 + 1e-290;
    let rank = sigmas.iter().take_while(|&&s| s > sigma_floor).count();
    let mut u_cols = ComplexMatrix::zeros(m, rank);
    for j in 0..rank {
        for i in 0..m {
            u_cols.set(i, j, ws.get(i, j) / sigmas[j]);
        }
    }
    let u = if rank == m { u_cols } else { complete_to_unitary(&u_cols) };
    Svd { u, s: sigmas, v: vs }
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    svd(a).s
}

/// Completes a matrix with orthonormal columns to a full unitary.
///
/// The completion is deterministic: it QR-factors `[e | identity]` and keeps the
/// trailing columns of the unitary factor.
pub fn complete_to_unitary(e: &ComplexMatrix) -> ComplexMatrix {
    let m = e.rows;
    let r = e.cols;
    assert!(r <= m, "cannot complete more columns than rows");
    if r == m {
        return e.clone();
    }
    let mut stacked = ComplexMatrix::zeros(m, r + m);
    stacked.set_block(0, 0, e);
    stacked.set_block(0, r, &ComplexMatrix::identity(m));
    let (q, _) = qr(&stacked);
    let mut out = ComplexMatrix::zeros(m, m);
    out.set_block(0, 0, e);
    for j in r..m {
        for i in 0..m {
            out.set(i, j, q.get(i, j));
        }
    }
    out
}

/// Operator (spectral) norm: full SVD up to dimension 64, power iteration above.
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    if a.rows == 0 || a.cols == 0 {
        return 0.0;
    }
    if a.rows.max(a.cols) <= OP_NORM_SVD_LIMIT {
        return singular_values(a).first().copied().unwrap_or(0.0);
    }
    power_iteration_norm(a)
}

/// Largest singular value by power iteration on `a^* a`, deterministic start.
fn power_iteration_norm(a: &ComplexMatrix) -> f64 {
    let n = a.cols;
    let mut v: Vec<Complex64> =
        (0..n).map(|k| cx(0.7 + 0.3 * (1.7 * k as f64).cos(), 0.2 * (0.9 * k as f64 + 0.4).sin())).collect();
    let norm0 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm0;
    }
    let at = a.adjoint();
    let mut sigma = 0.0;
    for _ in 0..20_000 {
        let av = a.apply(&v);
        let mut w = at.apply(&av);
        let wnorm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if wnorm <= 1e-300 {
            return 0.0;
        }
        for z in w.iter_mut() {
            *z /= wnorm;
        }
        let new_sigma = wnorm.sqrt();
        let done = (new_sigma - sigma).abs() <= 1e-12 * new_sigma.max(1.0);
        sigma = new_sigma;
        v = w;
        if done {
            break;
        }
    }
    sigma
}

/// True when the pivot matrix is safely invertible under the conditioning cap.
pub fn pivot_is_regular(pivot: &ComplexMatrix, tol: &ToleranceConfig) -> bool {
    if pivot.rows == 0 {
        return true;
    }
    let sv = singular_values(pivot);
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    smin >= smax.max(1.0) / tol.cond_cap
}

/// Unitarity check: `op_norm(u^* u - 1) <= atol * dim`.
pub fn is_unitary(u: &ComplexMatrix, tol: &ToleranceConfig) -> bool {
    if !u.is_square() {
        return false;
    }
    unitarity_defect(u) <= tol.scaled(u.rows)
}

/// Deviation of `u^* u` from the identity in operator norm.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    if u.rows == 0 {
        return 0.0;
    }
    let gram = u.adjoint().mul(u);
    op_norm(&gram.sub(&ComplexMatrix::identity(u.cols)))
}

/// The indefinite form `diag(-1_n, 1_n)` preserved by pseudo-unitary matrices.
pub fn indefinite_form(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i != j {
            cx(0.0, 0.0)
        } else if i < n {
            cx(-1.0, 0.0)
        } else {
            cx(1.0, 0.0)
        }
    })
}

/// Pseudo-unitarity check for the form `diag(-1_n, 1_n)`; errors on a shape mismatch.
pub fn is_pseudo_unitary(g: &ComplexMatrix, n: usize, tol: &ToleranceConfig) -> Result<bool> {
    if g.rows != 2 * n || g.cols != 2 * n {
        return Err(Error::ShapeMismatch(format!(
            "pseudo-unitarity check needs a {0}x{0} matrix, got {1}x{2}",
            2 * n,
            g.rows,
            g.cols
        )));
    }
    let j = indefinite_form(n);
    let defect = op_norm(&g.mul(&j).mul(&g.adjoint()).sub(&j));
    Ok(defect <= tol.scaled(2 * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, m: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, m, |_, _| {
            cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    #[test]
    fn lu_solves_known_system() {
        let a = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let b = ComplexMatrix::from_real_rows(&[vec![5.0], vec![10.0]]).unwrap();
        let x = solve(&a, &b).unwrap();
        // 2x + y = 5, x + 3y = 10 has solution x = 1, y = 3.
        assert!((x.get(0, 0) - cx(1.0, 0.0)).norm() < 1e-12);
        assert!((x.get(1, 0) - cx(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn lu_reports_singularity() {
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let b = ComplexMatrix::identity(2);
        assert!(matches!(solve(&a, &b), Err(Error::SingularSystem)));
        assert_eq!(det(&a), cx(0.0, 0.0));
    }

    #[test]
    fn det_of_triangular_is_diagonal_product() {
        let a = ComplexMatrix::from_rows(&[
            vec![cx(2.0, 0.0), cx(5.0, 1.0)],
            vec![cx(0.0, 0.0), cx(0.0, 3.0)],
        ])
        .unwrap();
        assert!((det(&a) - cx(0.0, 6.0)).norm() < 1e-12);
    }

    #[test]
    fn inverse_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 3, 5, 8] {
            let a = random_matrix(n, n, &mut rng);
            let inv = inverse(&a).unwrap();
            let err = a.mul(&inv).max_abs_diff(&ComplexMatrix::identity(n));
            assert!(err < 1e-10, "n={n} inverse error {err}");
        }
    }

    #[test]
    fn qr_reconstructs_and_q_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tol = ToleranceConfig::default();
        for n in [1usize, 2, 4, 7] {
            let a = random_matrix(n, n, &mut rng);
            let (q, r) = qr(&a);
            assert!(is_unitary(&q, &tol), "q not unitary at n={n}");
            assert!(q.mul(&r).max_abs_diff(&a) < 1e-12 * n as f64);
            for i in 0..n {
                for j in 0..i {
                    assert!(r.get(i, j).norm() == 0.0, "r not upper triangular");
                }
            }
        }
    }

    #[test]
    fn eig_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [1usize, 2, 3, 6, 12] {
            let g = random_matrix(n, n, &mut rng);
            let h = g.add(&g.adjoint()).scale(cx(0.5, 0.0));
            let (values, v) = eig_hermitian(&h);
            let lambda = ComplexMatrix::diagonal(
                &values.iter().map(|&x| cx(x, 0.0)).collect::<Vec<_>>(),
            );
            let err = v.mul(&lambda).mul(&v.adjoint()).max_abs_diff(&h);
            assert!(err < 1e-11 * n as f64, "reconstruction error {err} at n={n}");
            assert!(is_unitary(&v, &ToleranceConfig::default()));
            for w in values.windows(2) {
                assert!(w[0] <= w[1] + 1e-12, "eigenvalues not ascending");
            }
        }
    }

    #[test]
    fn eig_hermitian_known_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let h = ComplexMatrix::from_rows(&[
            vec![cx(2.0, 0.0), cx(0.0, 1.0)],
            vec![cx(0.0, -1.0), cx(2.0, 0.0)],
        ])
        .unwrap();
        let (values, _) = eig_hermitian(&h);
        assert!((values[0] - 1.0).abs() < 1e-12);
        assert!((values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn svd_reconstructs_rectangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let tol = ToleranceConfig::default();
        for (m, n) in [(3usize, 3usize), (5, 2), (2, 5), (6, 6), (8, 3)] {
            let a = random_matrix(m, n, &mut rng);
            let f = svd(&a);
            assert!(is_unitary(&f.u, &tol), "u not unitary for {m}x{n}");
            assert!(is_unitary(&f.v, &tol), "v not unitary for {m}x{n}");
            let mut sigma = ComplexMatrix::zeros(m, n);
            for (k, &s) in f.s.iter().enumerate() {
                sigma.set(k, k, cx(s, 0.0));
            }
            let err = f.u.mul(&sigma).mul(&f.v.adjoint()).max_abs_diff(&a);
            assert!(err < 1e-11, "svd reconstruction error {err} for {m}x{n}");
        }
    }

    #[test]
    fn svd_handles_rank_deficiency() {
        // Rank-one 3x3 matrix: one nonzero singular value, full unitary factors.
        let col = ComplexMatrix::from_rows(&[vec![cx(1.0, 0.0)], vec![cx(2.0, 0.0)], vec![cx(2.0, 0.0)]])
            .unwrap();
        let row = ComplexMatrix::from_rows(&[vec![cx(1.0, 0.0), cx(0.0, 1.0), cx(0.0, 0.0)]]).unwrap();
        let a = col.mul(&row);
        let f = svd(&a);
        assert!((f.s[0] - 3.0 * 2.0_f64.sqrt()).abs() < 1e-10);
        assert!(f.s[1].abs() < 1e-10);
        assert!(is_unitary(&f.u, &ToleranceConfig::default()));
    }

    #[test]
    fn op_norm_hand_checked_value() {
        // The matrix [[3, 0], [4, 0]] has a single nonzero singular value 5.
        let a = ComplexMatrix::from_real_rows(&[vec![3.0, 0.0], vec![4.0, 0.0]]).unwrap();
        assert!((op_norm(&a) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn op_norm_of_zero_and_identity() {
        assert_eq!(op_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
        assert!((op_norm(&ComplexMatrix::identity(4)) - 1.0).abs() < 1e-13);
        assert_eq!(op_norm(&ComplexMatrix::zeros(0, 0)), 0.0);
    }

    #[test]
    fn op_norm_power_iteration_matches_svd() {
        // Above the SVD limit the power iteration takes over; compare on an
        // 80x80 matrix against the Jacobi SVD called directly.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_matrix(80, 80, &mut rng);
        let by_power = op_norm(&a);
        let by_svd = singular_values(&a)[0];
        assert!(
            (by_power - by_svd).abs() < 1e-8 * by_svd,
            "power {by_power} vs svd {by_svd}"
        );
    }

    #[test]
    fn complete_to_unitary_extends_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let a = random_matrix(5, 2, &mut rng);
        let f = svd(&a);
        let e = f.u.block(0, 0, 5, 2);
        let q = complete_to_unitary(&e);
        assert!(is_unitary(&q, &ToleranceConfig::default()));
        assert!(q.block(0, 0, 5, 2).max_abs_diff(&e) == 0.0);
    }

    #[test]
    fn pseudo_unitarity_examples() {
        let tol = ToleranceConfig::default();
        assert!(is_pseudo_unitary(&ComplexMatrix::identity(4), 2, &tol).unwrap());
        // diag(u, v) with unitary blocks preserves the form.
        let u = ComplexMatrix::from_rows(&[vec![cx(0.0, 1.0)]]).unwrap();
        let v = ComplexMatrix::from_rows(&[vec![cx(0.6, 0.8)]]).unwrap();
        assert!(is_pseudo_unitary(&u.direct_sum(&v), 1, &tol).unwrap());
        // Hyperbolic rotation [[cosh, sinh], [sinh, cosh]] preserves the form.
        let t = 0.7_f64;
        let h = ComplexMatrix::from_real_rows(&[
            vec![t.cosh(), t.sinh()],
            vec![t.sinh(), t.cosh()],
        ])
        .unwrap();
        assert!(is_pseudo_unitary(&h, 1, &tol).unwrap());
        // A plain rotation by a generic angle does not.
        let r = ComplexMatrix::from_real_rows(&[vec![0.6, -0.8], vec![0.8, 0.6]]).unwrap();
        assert!(!is_pseudo_unitary(&r, 1, &tol).unwrap());
        assert!(is_pseudo_unitary(&ComplexMatrix::identity(3), 2, &tol).is_err());
    }

    #[test]
    fn pivot_regularity_thresholds() {
        let tol = ToleranceConfig::default();
        assert!(pivot_is_regular(&ComplexMatrix::identity(3), &tol));
        let nearly = ComplexMatrix::diagonal(&[cx(1.0, 0.0), cx(1e-14, 0.0)]);
        assert!(!pivot_is_regular(&nearly, &tol));
        let small_but_fine = ComplexMatrix::diagonal(&[cx(0.19, 0.0)]);
        assert!(pivot_is_regular(&small_but_fine, &tol));
        let lenient = ToleranceConfig::new(1e-9, 3.0).unwrap();
        assert!(!pivot_is_regular(&small_but_fine, &lenient));
    }
}
