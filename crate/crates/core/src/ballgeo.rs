//! Geometry of the matrix ball: Möbius action, ball morphisms, boundary strata.
//!
//! The closed matrix ball consists of square complex matrices of operator norm
//! at most one.  Pseudo-unitary matrices act on it by linear-fractional
//! transformations; unitary matrices of size `n + m` induce the holomorphic
//! "ball morphisms" `u -> a + b u (1 - d u)^{-1} c` from the `m`-ball to the
//! `n`-ball, which compose through an explicit product on the matrices
//! ([`circledast`]).  Boundary points are classified by how many singular
//! values sit on the unit circle ([`stratum`]), and every boundary point can be
//! moved into the canonical component `diag(u', 1_k)` by the Möbius action
//! ([`canonical_component_form`]).

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_func, inverse, is_pseudo_unitary, op_norm, pivot_is_regular, svd, unitarity_defect,
};
use crate::matrix::{cx, ComplexMatrix};
use crate::sample::{haar_unitary_rng, sample_ball_point_rng};
use crate::tolerance::ToleranceConfig;

/// A holomorphic morphism between matrix balls, carried by a unitary matrix.
///
/// The matrix has size `n + m` and block structure `(a b; c d)` with `a` of size
/// `n x n`; the induced map sends the closed `m`-ball into the closed `n`-ball.
#[derive(Debug, Clone)]
pub struct KSMorphism {
    /// Target ball dimension.
    pub n: usize,
    /// Source ball dimension.
    pub m: usize,
    matrix: ComplexMatrix,
}

impl KSMorphism {
    /// Wraps a unitary `(n+m) x (n+m)` matrix; rejects wrong shapes and non-unitary input.
    pub fn new(n: usize, m: usize, matrix: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let size = n + m;
        if matrix.rows != size || matrix.cols != size {
            return Err(Error::ShapeMismatch(format!(
                "ball morphism needs a {size}x{size} matrix, got {}x{}",
                matrix.rows, matrix.cols
            )));
        }
        let defect = unitarity_defect(&matrix);
        if defect > tol.scaled(size) {
            return Err(Error::NotUnitary { defect });
        }
        Ok(KSMorphism { n, m, matrix })
    }

    /// Assembles a morphism from its four blocks.
    pub fn from_blocks(
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        c: &ComplexMatrix,
        d: &ComplexMatrix,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let n = a.rows;
        let m = d.rows;
        if a.cols != n || d.cols != m || b.rows != n || b.cols != m || c.rows != m || c.cols != n {
            return Err(Error::ShapeMismatch("inconsistent block shapes".into()));
        }
        let mut u = ComplexMatrix::zeros(n + m, n + m);
        u.set_block(0, 0, a);
        u.set_block(0, n, b);
        u.set_block(n, 0, c);
        u.set_block(n, n, d);
        KSMorphism::new(n, m, u, tol)
    }

    /// The underlying unitary matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Upper-left block, `n x n`.
    pub fn a(&self) -> ComplexMatrix {
        self.matrix.block(0, 0, self.n, self.n)
    }

    /// Upper-right block, `n x m`.
    pub fn b(&self) -> ComplexMatrix {
        self.matrix.block(0, self.n, self.n, self.m)
    }

    /// Lower-left block, `m x n`.
    pub fn c(&self) -> ComplexMatrix {
        self.matrix.block(self.n, 0, self.m, self.n)
    }

    /// Lower-right block, `m x m`.
    pub fn d(&self) -> ComplexMatrix {
        self.matrix.block(self.n, self.n, self.m, self.m)
    }
}

/// Evaluates the ball morphism: `a + b u (1 - d u)^{-1} c`.
///
/// The resolvent pivot is `1 - d u`; the map is undefined where that pivot is
/// singular, which can only happen when `u` touches the boundary.
pub fn ks_map(zeta: &KSMorphism, u: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    if u.rows != zeta.m || u.cols != zeta.m {
        return Err(Error::ShapeMismatch(format!(
            "morphism argument must be {0}x{0}, got {1}x{2}",
            zeta.m, u.rows, u.cols
        )));
    }
    let norm = op_norm(u);
    if norm > 1.0 + tol.atol {
        return Err(Error::NotInBall { norm });
    }
    let m = zeta.m;
    let pivot = ComplexMatrix::identity(m).sub(&zeta.d().mul(u));
    if !pivot_is_regular(&pivot, tol) {
        return Err(Error::SingularPivot);
    }
    let x = crate::linalg::solve(&pivot, &zeta.c()).map_err(|_| Error::SingularPivot)?;
    Ok(zeta.a().add(&zeta.b().mul(u).mul(&x)))
}

/// Composition product of ball morphisms: `ks_map` of the result is the composite map.
///
/// With `zeta = (a b; c d)` of size `n + m` and `upsilon = (p q; r t)` of size
/// `m + k`, the product is
/// `[[a + b (1-pd)^{-1} p c,  b (1-pd)^{-1} q], [r (1-dp)^{-1} c,  t + r d (1-pd)^{-1} q]]`,
/// defined whenever `1 - p d` is invertible.
pub fn circledast(
    zeta: &KSMorphism,
    upsilon: &KSMorphism,
    tol: &ToleranceConfig,
) -> Result<KSMorphism> {
    if upsilon.n != zeta.m {
        return Err(Error::ShapeMismatch(format!(
            "inner morphism targets a {}-ball but the outer one expects {}",
            upsilon.n, zeta.m
        )));
    }
    let m = zeta.m;
    let (a, b, c, d) = (zeta.a(), zeta.b(), zeta.c(), zeta.d());
    let (p, q, r, t) = (upsilon.a(), upsilon.b(), upsilon.c(), upsilon.d());
    let eye = ComplexMatrix::identity(m);
    let pivot_pd = eye.sub(&p.mul(&d));
    let pivot_dp = eye.sub(&d.mul(&p));
    if !pivot_is_regular(&pivot_pd, tol) || !pivot_is_regular(&pivot_dp, tol) {
        return Err(Error::SingularPivot);
    }
    let inv_pd = inverse(&pivot_pd).map_err(|_| Error::SingularPivot)?;
    let inv_dp = inverse(&pivot_dp).map_err(|_| Error::SingularPivot)?;
    let new_a = a.add(&b.mul(&inv_pd).mul(&p).mul(&c));
    let new_b = b.mul(&inv_pd).mul(&q);
    let new_c = r.mul(&inv_dp).mul(&c);
    let new_d = t.add(&r.mul(&d).mul(&inv_pd).mul(&q));
    KSMorphism::from_blocks(&new_a, &new_b, &new_c, &new_d, tol)
}

/// Checks shape and pseudo-unitarity of a Möbius matrix, returning the ball size.
fn check_mobius_matrix(g: &ComplexMatrix, tol: &ToleranceConfig) -> Result<usize> {
    if !g.is_square() || g.rows % 2 != 0 {
        return Err(Error::ShapeMismatch(format!(
            "Möbius matrices have even square size, got {}x{}",
            g.rows, g.cols
        )));
    }
    let n = g.rows / 2;
    if !is_pseudo_unitary(g, n, tol)? {
        let j = crate::linalg::indefinite_form(n);
        let defect = op_norm(&g.mul(&j).mul(&g.adjoint()).sub(&j));
        return Err(Error::NotPseudoUnitary { defect });
    }
    Ok(n)
}

/// Linear-fractional action of a pseudo-unitary matrix on the closed ball.
///
/// With `g = (A B; C D)` preserving `diag(-1_n, 1_n)`, the action is
/// `z -> (A + z C)^{-1} (B + z D)`.  Composing two actions multiplies the
/// matrices in reversed order: acting by `h` and then by `g` is the action of
/// `h * g`.
pub fn mobius(g: &ComplexMatrix, z: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    let n = check_mobius_matrix(g, tol)?;
    if z.rows != n || z.cols != n {
        return Err(Error::ShapeMismatch(format!(
            "Möbius argument must be {n}x{n}, got {}x{}",
            z.rows, z.cols
        )));
    }
    let norm = op_norm(z);
    if norm > 1.0 + tol.atol {
        return Err(Error::NotInBall { norm });
    }
    let a = g.block(0, 0, n, n);
    let b = g.block(0, n, n, n);
    let c = g.block(n, 0, n, n);
    let d = g.block(n, n, n, n);
    let pivot = a.add(&z.mul(&c));
    if !pivot_is_regular(&pivot, tol) {
        return Err(Error::SingularPivot);
    }
    crate::linalg::solve(&pivot, &b.add(&z.mul(&d))).map_err(|_| Error::SingularPivot)
}

/// Pseudo-unitary transvection moving the origin to a given interior point.
///
/// Returns `h` with `mobius(h, 0) = s0`, built from the Hermitian inverse square
/// roots of `1 - s0 s0^*` and `1 - s0^* s0`; both defining properties are
/// validated at runtime before the matrix is returned.
pub fn transvection_to(s0: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    if !s0.is_square() {
        return Err(Error::ShapeMismatch("transvection target must be square".into()));
    }
    let n = s0.rows;
    let norm = op_norm(s0);
    if norm >= 1.0 {
        return Err(Error::NotInterior { norm });
    }
    let eye = ComplexMatrix::identity(n);
    let gram_left = eye.sub(&s0.mul(&s0.adjoint()));
    let gram_right = eye.sub(&s0.adjoint().mul(s0));
    let p = hermitian_func(&gram_left, |x| 1.0 / x.sqrt())?;
    let q = hermitian_func(&gram_right, |x| 1.0 / x.sqrt())?;
    let mut h = ComplexMatrix::zeros(2 * n, 2 * n);
    h.set_block(0, 0, &p);
    h.set_block(0, n, &p.mul(s0));
    h.set_block(n, 0, &q.mul(&s0.adjoint()));
    h.set_block(n, n, &q);
    // Runtime validation: the result must preserve the indefinite form and move
    // the origin to s0.  Conditioning grows as s0 approaches the boundary, so
    // the acceptance threshold scales with the square of the block norms.
    let kappa = op_norm(&p).max(op_norm(&q)).max(1.0);
    let slack = tol.scaled(2 * n) * kappa * kappa;
    let form = crate::linalg::indefinite_form(n);
    let defect = op_norm(&h.mul(&form).mul(&h.adjoint()).sub(&form));
    if defect > slack {
        return Err(Error::NotPseudoUnitary { defect });
    }
    let at_origin = mobius(&h, &ComplexMatrix::zeros(n, n), tol)?;
    if at_origin.max_abs_diff(s0) > slack.max(tol.scaled(n)) {
        return Err(Error::NotPseudoUnitary { defect: at_origin.max_abs_diff(s0) });
    }
    Ok(h)
}

/// Inverse of a pseudo-unitary matrix through the indefinite form: `J g^* J`.
pub fn pseudo_unitary_inverse(g: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    let n = check_mobius_matrix(g, tol)?;
    let j = crate::linalg::indefinite_form(n);
    Ok(j.mul(&g.adjoint()).mul(&j))
}

/// Realizes a Möbius action as a ball morphism on the same ball.
///
/// For `h = (A B; C D)` pseudo-unitary with invertible `A`, the unitary matrix
/// `[[A^{-1}B, A^{-1}], [D - C A^{-1} B, -C A^{-1}]]` induces exactly the map
/// `z -> (A + z C)^{-1}(B + z D)`; the agreement is validated at probe points.
pub fn mobius_to_ks(h: &ComplexMatrix, tol: &ToleranceConfig) -> Result<KSMorphism> {
    let n = check_mobius_matrix(h, tol)?;
    let a = h.block(0, 0, n, n);
    let b = h.block(0, n, n, n);
    let c = h.block(n, 0, n, n);
    let d = h.block(n, n, n, n);
    if !pivot_is_regular(&a, tol) {
        return Err(Error::SingularPivot);
    }
    let a_inv = inverse(&a).map_err(|_| Error::SingularPivot)?;
    let new_a = a_inv.mul(&b);
    let new_b = a_inv.clone();
    let new_c = d.sub(&c.mul(&a_inv).mul(&b));
    let new_d = c.mul(&a_inv).scale(cx(-1.0, 0.0));
    let zeta = KSMorphism::from_blocks(&new_a, &new_b, &new_c, &new_d, tol)?;
    // Validate against the Möbius action on a few deterministic interior points.
    for probe in mobius_probe_points(n) {
        let via_mobius = mobius(h, &probe, tol)?;
        let via_ks = ks_map(&zeta, &probe, tol)?;
        if via_mobius.max_abs_diff(&via_ks) > tol.scaled(n).max(1e-9) * 1e3 {
            return Err(Error::ShapeMismatch(
                "ball-morphism realization disagrees with the Möbius action".into(),
            ));
        }
    }
    Ok(zeta)
}

/// Small deterministic interior probe points used for runtime validations.
fn mobius_probe_points(n: usize) -> Vec<ComplexMatrix> {
    let mut points = vec![ComplexMatrix::zeros(n, n)];
    if n > 0 {
        points.push(ComplexMatrix::identity(n).scale(cx(0.3, 0.1)));
        points.push(ComplexMatrix::from_fn(n, n, |i, j| {
            let k = (i * n + j + 1) as f64;
            cx(0.4 * (k * 0.7).sin(), 0.4 * (k * 1.3).cos()) * cx(1.0 / n as f64, 0.0)
        }));
    }
    points
}

/// Boundary classification of a ball point by its number of unit singular values.
#[derive(Debug, Clone)]
pub struct BoundaryStratum {
    /// Ball dimension.
    pub ambient: usize,
    /// Number of singular values equal to one within the tolerance band.
    pub defect_rank: usize,
    /// The classified point.
    pub witness: ComplexMatrix,
}

/// Classifies a point of the closed ball by its boundary defect rank.
///
/// A singular value `sigma` counts as one when `1 - sigma <= 100 * atol`.
/// Interior points get defect rank zero.
pub fn stratum(u: &ComplexMatrix, tol: &ToleranceConfig) -> Result<BoundaryStratum> {
    if !u.is_square() {
        return Err(Error::ShapeMismatch("stratum needs a square matrix".into()));
    }
    let norm = op_norm(u);
    if norm > 1.0 + tol.atol {
        return Err(Error::NotInBall { norm });
    }
    let band = tol.unit_singular_band();
    let defect_rank = svd(u).s.iter().filter(|&&s| 1.0 - s <= band).count();
    Ok(BoundaryStratum { ambient: u.rows, defect_rank, witness: u.clone() })
}

/// Möbius matrix moving a boundary point to the canonical component form.
///
/// Returns `(h, k)` where `k` is the defect rank of `u` and
/// `mobius(h, u) = diag(u', 1_k)` with `op_norm(u') < 1`; both postconditions
/// are validated before returning.  Fails with `NotOnBoundary` for interior
/// points.
pub fn canonical_component_form(
    u: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<(ComplexMatrix, usize)> {
    let st = stratum(u, tol)?;
    let k = st.defect_rank;
    if k == 0 {
        return Err(Error::NotOnBoundary { norm: op_norm(u) });
    }
    let n = u.rows;
    let f = svd(u);
    // Reverse the (descending) singular order so unit singular values land in
    // the trailing block; h = diag(left, right) then acts by z -> left^* z right.
    let mut left = ComplexMatrix::zeros(n, n);
    let mut right = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            left.set(i, n - 1 - j, f.u.get(i, j));
            right.set(i, n - 1 - j, f.v.get(i, j));
        }
    }
    let h = left.direct_sum(&right);
    let canonical = mobius(&h, u, tol)?;
    let moving = canonical.block(0, 0, n - k, n - k);
    let corner = canonical.block(n - k, n - k, k, k);
    let band = tol.unit_singular_band();
    let off_mass = (canonical.max_abs_diff(&moving.direct_sum(&corner))).max(
        corner.max_abs_diff(&ComplexMatrix::identity(k)),
    );
    if off_mass > band.max(tol.scaled(n) * 100.0) {
        return Err(Error::NotOnBoundary { norm: off_mass });
    }
    if op_norm(&moving) >= 1.0 - band {
        return Err(Error::NotOnBoundary { norm: op_norm(&moving) });
    }
    Ok((h, k))
}

/// Random pseudo-unitary matrix: a transvection times a block-diagonal unitary pair.
pub fn random_pseudo_unitary(
    n: usize,
    rng: &mut ChaCha8Rng,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    let s0 = sample_ball_point_rng(n, 0.85, rng);
    let h = transvection_to(&s0, tol)?;
    let u = haar_unitary_rng(n, rng);
    let v = haar_unitary_rng(n, rng);
    Ok(h.mul(&u.direct_sum(&v)))
}
