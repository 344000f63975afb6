//! Unitary colligations and their characteristic functions.
//!
//! A colligation is a unitary matrix of size `alpha + m*j` with a distinguished
//! outer block of size `alpha`.  Its characteristic function sends an `m x m`
//! ball point `S` to the `alpha x alpha` matrix
//! `a + b M (1 - d M)^{-1} c` where `M` is the lane inflation of `S`: `m x m`
//! blocks `S[mu][nu] * 1_j` acting on the internal space of `m` channel groups
//! with `j` lanes each.  Characteristic functions are rational inner maps: they
//! send the closed ball to itself and unitary boundary points to unitary
//! values.  [`certify_inner`] checks both properties on random samples.

use rand_chacha::ChaCha8Rng;

use crate::ballgeo::KSMorphism;
use crate::error::{Error, Result};
use crate::linalg::{is_unitary, op_norm, pivot_is_regular, solve, unitarity_defect};
use crate::matrix::{cx, kron, ComplexMatrix};
use crate::sample::{haar_unitary_rng, rng_from_seed, sample_ball_point_rng};
use crate::tolerance::ToleranceConfig;

/// A unitary colligation with outer size `alpha`, `m` channel groups, `j` lanes.
///
/// The underlying matrix has size `alpha + m*j`.  Internal coordinates are
/// ordered group-major: the entry for group `mu` and lane `s` sits at offset
/// `alpha + mu*j + s`.
#[derive(Debug, Clone)]
pub struct Colligation {
    /// Outer (boundary value) dimension.
    pub alpha: usize,
    /// Number of channel groups; the characteristic function eats `m x m` points.
    pub m: usize,
    /// Lanes per channel group (the multiplicity of the inflation).
    pub j: usize,
    u: ComplexMatrix,
}

impl Colligation {
    /// Wraps a unitary matrix of size `alpha + m*j`; rejects anything else.
    pub fn new(
        alpha: usize,
        m: usize,
        j: usize,
        u: ComplexMatrix,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let size = alpha + m * j;
        if u.rows != size || u.cols != size {
            return Err(Error::ShapeMismatch(format!(
                "colligation ({alpha}, {m}, {j}) needs a {size}x{size} matrix, got {}x{}",
                u.rows, u.cols
            )));
        }
        let defect = unitarity_defect(&u);
        if defect > tol.scaled(size) {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Colligation { alpha, m, j, u })
    }

    /// Haar-random colligation of the given shape.
    pub fn random(alpha: usize, m: usize, j: usize, rng: &mut ChaCha8Rng) -> Self {
        let u = haar_unitary_rng(alpha + m * j, rng);
        Colligation { alpha, m, j, u }
    }

    /// Constant colligation (`j = 0`): the characteristic function is identically `u0`.
    pub fn constant(u0: &ComplexMatrix, m: usize, tol: &ToleranceConfig) -> Result<Self> {
        if !u0.is_square() {
            return Err(Error::ShapeMismatch("constant block must be square".into()));
        }
        Colligation::new(u0.rows, m, 0, u0.clone(), tol)
    }

    /// Constant identity colligation on a `k`-dimensional target.
    pub fn constant_identity(k: usize, m: usize) -> Self {
        Colligation { alpha: k, m, j: 0, u: ComplexMatrix::identity(k) }
    }

    /// Size of the underlying unitary matrix.
    pub fn dim(&self) -> usize {
        self.alpha + self.m * self.j
    }

    /// Size of the internal space, `m * j`.
    pub fn inner_dim(&self) -> usize {
        self.m * self.j
    }

    /// The underlying unitary matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }

    /// Outer block, `alpha x alpha`.
    pub fn a(&self) -> ComplexMatrix {
        self.u.block(0, 0, self.alpha, self.alpha)
    }

    /// Outer-to-internal block, `alpha x m*j`.
    pub fn b(&self) -> ComplexMatrix {
        self.u.block(0, self.alpha, self.alpha, self.inner_dim())
    }

    /// Internal-to-outer block, `m*j x alpha`.
    pub fn c(&self) -> ComplexMatrix {
        self.u.block(self.alpha, 0, self.inner_dim(), self.alpha)
    }

    /// Internal block, `m*j x m*j`.
    pub fn d(&self) -> ComplexMatrix {
        self.u.block(self.alpha, self.alpha, self.inner_dim(), self.inner_dim())
    }

    /// Views a single-lane (`j = 1`) colligation as a ball morphism.
    pub fn as_ks(&self, tol: &ToleranceConfig) -> Result<KSMorphism> {
        if self.j != 1 {
            return Err(Error::ShapeMismatch(format!(
                "only single-lane colligations are ball morphisms, got j = {}",
                self.j
            )));
        }
        KSMorphism::new(self.alpha, self.m, self.u.clone(), tol)
    }

    /// Views a ball morphism as a single-lane colligation.
    pub fn from_ks(ks: &KSMorphism, tol: &ToleranceConfig) -> Result<Self> {
        Colligation::new(ks.n, ks.m, 1, ks.matrix().clone(), tol)
    }

    /// Internal-lane conjugation: `diag(1_alpha, T (x) 1_m)` with `T` unitary of
    /// size `j`.  Leaves the characteristic function unchanged because the
    /// conjugator commutes with every lane inflation.
    pub fn conjugate(&self, t: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        if t.rows != self.j || t.cols != self.j {
            return Err(Error::ShapeMismatch(format!(
                "lane conjugator must be {0}x{0}, got {1}x{2}",
                self.j, t.rows, t.cols
            )));
        }
        if !is_unitary(t, tol) {
            return Err(Error::NotUnitary { defect: unitarity_defect(t) });
        }
        let r = kron(t, &ComplexMatrix::identity(self.m));
        let conj = ComplexMatrix::identity(self.alpha).direct_sum(&r);
        let u = conj.mul(&self.u).mul(&conj.adjoint());
        Colligation::new(self.alpha, self.m, self.j, u, tol)
    }

    /// Outer conjugation by a unitary `Q`: the characteristic function becomes
    /// `S -> Q^* Theta(S) Q`.
    pub fn outer_conjugate(&self, q: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        if q.rows != self.alpha || q.cols != self.alpha {
            return Err(Error::ShapeMismatch(format!(
                "outer conjugator must be {0}x{0}, got {1}x{2}",
                self.alpha, q.rows, q.cols
            )));
        }
        if !is_unitary(q, tol) {
            return Err(Error::NotUnitary { defect: unitarity_defect(q) });
        }
        let eye = ComplexMatrix::identity(self.inner_dim());
        let left = q.adjoint().direct_sum(&eye);
        let right = q.direct_sum(&eye);
        let u = left.mul(&self.u).mul(&right);
        Colligation::new(self.alpha, self.m, self.j, u, tol)
    }
}

/// Lane inflation of a ball point: the `m x m` block matrix with blocks
/// `s[mu][nu] * 1_j`, acting on the group-major internal coordinates.
pub fn lane_inflation(s: &ComplexMatrix, j: usize) -> ComplexMatrix {
    kron(&ComplexMatrix::identity(j), s)
}

fn check_argument(g: &Colligation, s: &ComplexMatrix, tol: &ToleranceConfig) -> Result<()> {
    if s.rows != g.m || s.cols != g.m {
        return Err(Error::ShapeMismatch(format!(
            "characteristic function argument must be {0}x{0}, got {1}x{2}",
            g.m, s.rows, s.cols
        )));
    }
    let norm = op_norm(s);
    if norm > 1.0 + tol.atol {
        return Err(Error::NotInBall { norm });
    }
    Ok(())
}

/// Evaluates the characteristic function `a + b M (1 - d M)^{-1} c` at `s`.
pub fn theta_eval(g: &Colligation, s: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    check_argument(g, s, tol)?;
    let inner = g.inner_dim();
    if inner == 0 {
        return Ok(g.a());
    }
    let m_infl = lane_inflation(s, g.j);
    let pivot = ComplexMatrix::identity(inner).sub(&g.d().mul(&m_infl));
    if !pivot_is_regular(&pivot, tol) {
        return Err(Error::SingularPivot);
    }
    let x = solve(&pivot, &g.c()).map_err(|_| Error::SingularPivot)?;
    Ok(g.a().add(&g.b().mul(&m_infl).mul(&x)))
}

/// Evaluates the characteristic function through one joint linear system.
///
/// Solves `[[1, -bM], [0, 1 - dM]] (p; x) = (a; c)` for the stacked unknown and
/// reads the value off the top block.  Shares no elimination path with
/// [`theta_eval`], which makes it a useful cross-check.
pub fn theta_oracle(
    g: &Colligation,
    s: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    check_argument(g, s, tol)?;
    let inner = g.inner_dim();
    if inner == 0 {
        return Ok(g.a());
    }
    let size = g.alpha + inner;
    let m_infl = lane_inflation(s, g.j);
    let mut sys = ComplexMatrix::identity(size);
    let minus_bm = g.b().mul(&m_infl).scale(cx(-1.0, 0.0));
    sys.set_block(0, g.alpha, &minus_bm);
    let lower = ComplexMatrix::identity(inner).sub(&g.d().mul(&m_infl));
    sys.set_block(g.alpha, g.alpha, &lower);
    let mut rhs = ComplexMatrix::zeros(size, g.alpha);
    rhs.set_block(0, 0, &g.a());
    rhs.set_block(g.alpha, 0, &g.c());
    let sol = solve(&sys, &rhs)?;
    Ok(sol.block(0, 0, g.alpha, g.alpha))
}

/// Evidence that a characteristic function behaves as a rational inner map.
#[derive(Debug, Clone)]
pub struct InnerCertificate {
    /// Number of boundary samples and of interior samples.
    pub trials: usize,
    /// Largest unitarity defect of the value at a unitary boundary sample.
    pub max_unitarity_defect: f64,
    /// Largest amount by which an interior value's norm exceeded one.
    pub max_interior_norm_excess: f64,
    /// Samples skipped because the resolvent pivot was numerically singular.
    pub skipped_singular: usize,
}

/// Samples the characteristic function at Haar-random unitary boundary points
/// and at random interior points, recording how far it strays from inner
/// behaviour.  Singular pivots are skipped and counted, not treated as failures.
pub fn certify_inner(
    g: &Colligation,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> InnerCertificate {
    let mut rng = rng_from_seed(seed);
    let mut cert = InnerCertificate {
        trials,
        max_unitarity_defect: 0.0,
        max_interior_norm_excess: 0.0,
        skipped_singular: 0,
    };
    for _ in 0..trials {
        let boundary = haar_unitary_rng(g.m, &mut rng);
        match theta_eval(g, &boundary, tol) {
            Ok(value) => {
                let defect = unitarity_defect(&value);
                cert.max_unitarity_defect = cert.max_unitarity_defect.max(defect);
            }
            Err(_) => cert.skipped_singular += 1,
        }
        let interior = sample_ball_point_rng(g.m, 0.98, &mut rng);
        match theta_eval(g, &interior, tol) {
            Ok(value) => {
                let excess = (op_norm(&value) - 1.0).max(0.0);
                cert.max_interior_norm_excess = cert.max_interior_norm_excess.max(excess);
            }
            Err(_) => cert.skipped_singular += 1,
        }
    }
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballgeo::ks_map;
    use rand::Rng;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn rejects_non_unitary_and_wrong_shapes() {
        let bad = ComplexMatrix::identity(3).scale(cx(2.0, 0.0));
        assert!(matches!(
            Colligation::new(1, 1, 2, bad, &tol()),
            Err(Error::NotUnitary { .. })
        ));
        let wrong = ComplexMatrix::identity(4);
        assert!(matches!(
            Colligation::new(1, 1, 2, wrong, &tol()),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn scalar_characteristic_function_hand_value() {
        // The real 2x2 Hadamard-type unitary gives s -> (1 + sqrt2 s)/(sqrt2 + s).
        let f = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_real_rows(&[vec![f, f], vec![f, -f]]).unwrap();
        let g = Colligation::new(1, 1, 1, u, &tol()).unwrap();
        let sqrt2 = std::f64::consts::SQRT_2;
        for s in [cx(0.0, 0.0), cx(0.4, 0.3), cx(-0.7, 0.0), cx(0.0, 1.0)] {
            let arg = ComplexMatrix::from_rows(&[vec![s]]).unwrap();
            let got = theta_eval(&g, &arg, &tol()).unwrap().get(0, 0);
            let expected = (cx(1.0, 0.0) + s * sqrt2) / (cx(sqrt2, 0.0) + s);
            assert!((got - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn multi_lane_diagonal_colligation_gives_powers() {
        // alpha = 1, m = 1, j = 2 built from a cyclic permutation on 3 points:
        // theta(s) = s^2.  The permutation sends outer -> lane1 -> lane2 -> outer.
        let u = ComplexMatrix::from_real_rows(&[
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        let g = Colligation::new(1, 1, 2, u, &tol()).unwrap();
        for s in [cx(0.5, 0.0), cx(0.3, -0.4), cx(0.0, 0.9)] {
            let arg = ComplexMatrix::from_rows(&[vec![s]]).unwrap();
            let got = theta_eval(&g, &arg, &tol()).unwrap().get(0, 0);
            assert!((got - s * s).norm() < 1e-13, "expected s^2, got {got}");
        }
    }

    #[test]
    fn oracle_and_closed_form_agree() {
        let mut rng = rng_from_seed(60);
        for _ in 0..60 {
            let alpha = 1 + rng.random_range(0..2usize);
            let m = 1 + rng.random_range(0..2usize);
            let j = rng.random_range(0..4usize);
            let g = Colligation::random(alpha, m, j, &mut rng);
            let s = sample_ball_point_rng(m, 0.95, &mut rng);
            let via_eval = theta_eval(&g, &s, &tol()).unwrap();
            let via_oracle = theta_oracle(&g, &s, &tol()).unwrap();
            assert!(
                via_eval.max_abs_diff(&via_oracle) < 1e-10,
                "evaluation paths disagree by {}",
                via_eval.max_abs_diff(&via_oracle)
            );
        }
    }

    #[test]
    fn zero_lane_colligation_is_constant() {
        let mut rng = rng_from_seed(61);
        let u0 = haar_unitary_rng(2, &mut rng);
        let g = Colligation::constant(&u0, 3, &tol()).unwrap();
        for _ in 0..5 {
            let s = sample_ball_point_rng(3, 0.9, &mut rng);
            let value = theta_eval(&g, &s, &tol()).unwrap();
            assert!(value.max_abs_diff(&u0) < 1e-14);
        }
    }

    #[test]
    fn constant_identity_evaluates_to_identity() {
        let g = Colligation::constant_identity(2, 2);
        let s = ComplexMatrix::zeros(2, 2);
        let value = theta_eval(&g, &s, &tol()).unwrap();
        assert!(value.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn boundary_pivot_can_be_singular() {
        // diag(e^{i phi}, e^{i psi}) with zero coupling: at s = conj(e^{i psi})
        // the pivot 1 - d s vanishes exactly.
        let a = cx(0.6, 0.8);
        let d = cx(0.0, 1.0);
        let u = ComplexMatrix::diagonal(&[a, d]);
        let g = Colligation::new(1, 1, 1, u, &tol()).unwrap();
        let singular_point = ComplexMatrix::from_rows(&[vec![d.conj()]]).unwrap();
        assert!(matches!(
            theta_eval(&g, &singular_point, &tol()),
            Err(Error::SingularPivot)
        ));
        // Anywhere else the value is the constant a.
        let s = ComplexMatrix::from_rows(&[vec![cx(0.3, 0.1)]]).unwrap();
        let value = theta_eval(&g, &s, &tol()).unwrap();
        assert!((value.get(0, 0) - a).norm() < 1e-13);
    }

    #[test]
    fn single_lane_colligation_matches_ball_morphism() {
        let mut rng = rng_from_seed(62);
        for _ in 0..10 {
            let g = Colligation::random(2, 2, 1, &mut rng);
            let zeta = g.as_ks(&tol()).unwrap();
            let s = sample_ball_point_rng(2, 0.9, &mut rng);
            let via_theta = theta_eval(&g, &s, &tol()).unwrap();
            let via_ks = ks_map(&zeta, &s, &tol()).unwrap();
            assert!(via_theta.max_abs_diff(&via_ks) < 1e-12);
            let back = Colligation::from_ks(&zeta, &tol()).unwrap();
            assert!(back.matrix().max_abs_diff(g.matrix()) < 1e-15);
        }
    }

    #[test]
    fn characteristic_function_factors_through_inflation() {
        // theta(g, s) equals the ball-morphism value of the same unitary at the
        // inflated point: an independent check of the internal index layout.
        let mut rng = rng_from_seed(63);
        for _ in 0..10 {
            let (alpha, m, j) = (2, 2, 2);
            let g = Colligation::random(alpha, m, j, &mut rng);
            let s = sample_ball_point_rng(m, 0.9, &mut rng);
            let zeta = KSMorphism::new(alpha, m * j, g.matrix().clone(), &tol()).unwrap();
            let via_theta = theta_eval(&g, &s, &tol()).unwrap();
            let via_inflated = ks_map(&zeta, &lane_inflation(&s, j), &tol()).unwrap();
            assert!(via_theta.max_abs_diff(&via_inflated) < 1e-12);
        }
    }

    #[test]
    fn lane_conjugation_preserves_the_characteristic_function() {
        let mut rng = rng_from_seed(64);
        let g = Colligation::random(2, 2, 3, &mut rng);
        let t = haar_unitary_rng(3, &mut rng);
        let conj = g.conjugate(&t, &tol()).unwrap();
        for _ in 0..8 {
            let s = sample_ball_point_rng(2, 0.9, &mut rng);
            let lhs = theta_eval(&g, &s, &tol()).unwrap();
            let rhs = theta_eval(&conj, &s, &tol()).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        }
    }

    #[test]
    fn outer_conjugation_conjugates_values() {
        let mut rng = rng_from_seed(65);
        let g = Colligation::random(3, 2, 2, &mut rng);
        let q = haar_unitary_rng(3, &mut rng);
        let moved = g.outer_conjugate(&q, &tol()).unwrap();
        for _ in 0..8 {
            let s = sample_ball_point_rng(2, 0.9, &mut rng);
            let lhs = theta_eval(&moved, &s, &tol()).unwrap();
            let rhs = q.adjoint().mul(&theta_eval(&g, &s, &tol()).unwrap()).mul(&q);
            assert!(lhs.max_abs_diff(&rhs) < 1e-11);
        }
    }

    #[test]
    fn certify_inner_on_random_colligations() {
        let mut rng = rng_from_seed(66);
        for _ in 0..5 {
            let alpha = 1 + rng.random_range(0..3usize);
            let m = 1 + rng.random_range(0..2usize);
            let j = rng.random_range(0..3usize);
            let g = Colligation::random(alpha, m, j, &mut rng);
            let cert = certify_inner(&g, 20, 7, &tol());
            assert!(cert.max_unitarity_defect < 1e-9, "boundary values must be unitary");
            assert!(cert.max_interior_norm_excess < 1e-9, "interior values must stay in the ball");
            assert!(cert.skipped_singular <= 2);
        }
    }

    #[test]
    fn theta_rejects_arguments_outside_the_ball() {
        let mut rng = rng_from_seed(67);
        let g = Colligation::random(1, 2, 1, &mut rng);
        let outside = ComplexMatrix::identity(2).scale(cx(1.5, 0.0));
        assert!(matches!(theta_eval(&g, &outside, &tol()), Err(Error::NotInBall { .. })));
    }

    #[test]
    fn lane_inflation_layout() {
        // For j = 2 lanes the inflation of [[0, 1], [0, 0]] has identity blocks
        // in the (0, 1) block position and zeros elsewhere.
        let s = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let infl = lane_inflation(&s, 2);
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected.set_block(0, 2, &ComplexMatrix::identity(2));
        assert!(infl.max_abs_diff(&expected) < 1e-15);
    }
}
