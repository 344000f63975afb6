//! Seeded random sampling: Haar unitaries, ball points, pseudo-unitary group elements.
//!
//! All sampling goes through an explicit ChaCha generator so that every consumer
//! is reproducible from a single `u64` seed; nothing reads thread-local state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::qr;
use crate::matrix::{cx, ComplexMatrix};

/// Deterministic generator from a seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cx(re * inv_sqrt2, im * inv_sqrt2)
    })
}

/// Haar-distributed unitary via Ginibre sampling, QR, and phase correction.
///
/// The QR factor alone is not Haar distributed; multiplying each column by the
/// phase of the matching diagonal entry of `r` fixes the distribution.
pub fn haar_unitary_rng(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::identity(0);
    }
    let g = ginibre(n, n, rng);
    let (q, r) = qr(&g);
    let mut out = q;
    for j in 0..n {
        let d = r.get(j, j);
        let phase = if d.norm() > 0.0 { d / d.norm() } else { cx(1.0, 0.0) };
        for i in 0..n {
            let val = out.get(i, j) * phase;
            out.set(i, j, val);
        }
    }
    out
}

/// Haar-distributed unitary from a seed.
pub fn haar_unitary(n: usize, seed: u64) -> ComplexMatrix {
    haar_unitary_rng(n, &mut rng_from_seed(seed))
}

/// Random point of the closed matrix ball of the given radius.
///
/// A Gaussian matrix is rescaled to operator norm `radius` and then shrunk by a
/// uniform factor in (0, 1], so the sample is strictly inside whenever
/// `radius < 1`.
pub fn sample_ball_point_rng(m: usize, radius: f64, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    assert!((0.0..=1.0).contains(&radius), "radius must lie in [0, 1]");
    if m == 0 || radius == 0.0 {
        return ComplexMatrix::zeros(m, m);
    }
    let g = ginibre(m, m, rng);
    let norm = crate::linalg::op_norm(&g);
    let shrink: f64 = 1.0 - rng.random_range(0.0..1.0);
    if norm <= 1e-300 {
        return ComplexMatrix::zeros(m, m);
    }
    g.scale(cx(radius * shrink / norm, 0.0))
}

/// Random ball point from a seed.
pub fn sample_ball_point(m: usize, radius: f64, seed: u64) -> ComplexMatrix {
    sample_ball_point_rng(m, radius, &mut rng_from_seed(seed))
}
