//! Polynomial representations of the general linear group, realized inside
//! tensor products of exterior powers.
//!
//! A weakly decreasing [`Signature`] labels an irreducible polynomial
//! representation.  The representation space is found numerically: the highest
//! vector of the ambient tensor product of exterior powers is moved around by
//! random unitaries, and the span of the orbit — whose dimension is the Weyl
//! dimension of the signature — is extracted by a singular value decomposition.
//! [`rep_apply`] evaluates the representation matrix on that subspace, and
//! [`rep_compose_colligation`] pushes a whole colligation through the
//! representation so that characteristic functions commute with it.

use crate::calculus::{split_off, tensor_product, SplitSpec};
use crate::colligation::Colligation;
use crate::error::{Error, Result};
use crate::linalg::{complete_to_unitary, det, svd};
use crate::matrix::{cx, kron_chain_apply, Complex64, ComplexMatrix};
use crate::sample::{haar_unitary_rng, rng_from_seed};
use crate::tolerance::ToleranceConfig;

/// A weakly decreasing sequence of non-negative integers labelling an
/// irreducible polynomial representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature(Vec<usize>);

impl Signature {
    /// Validates that the parts are weakly decreasing.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSignature);
        }
        Ok(Signature(parts))
    }

    /// The parts, longest first.
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Total number of boxes (sum of the parts).
    pub fn boxes(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Binomial coefficient as an exact machine integer.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for idx in 0..k {
        num *= (n - idx) as u128;
        den *= (idx + 1) as u128;
    }
    (num / den) as usize
}

/// All `k`-element subsets of `{0, .., n-1}` in lexicographic order.
pub fn lex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        // Advance to the next combination in lexicographic order.
        let mut idx = k;
        loop {
            if idx == 0 {
                return out;
            }
            idx -= 1;
            if current[idx] != idx + n - k {
                break;
            }
            if idx == 0 {
                return out;
            }
        }
        current[idx] += 1;
        for t in idx + 1..k {
            current[t] = current[t - 1] + 1;
        }
    }
}

fn minor(g: &ComplexMatrix, rows: &[usize], cols: &[usize]) -> Complex64 {
    let k = rows.len();
    let sub = ComplexMatrix::from_fn(k, k, |r, c| g.get(rows[r], cols[c]));
    det(&sub)
}

/// Matrix of the `k`-th exterior power in the lexicographic minor basis:
/// entry `(I, J)` is the `k x k` minor of `g` with rows `I` and columns `J`.
pub fn wedge_rep(k: usize, g: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !g.is_square() {
        return Err(Error::ShapeMismatch("exterior powers need a square matrix".into()));
    }
    if k > g.rows {
        return Err(Error::ShapeMismatch(format!(
            "exterior power degree {k} exceeds the matrix size {}",
            g.rows
        )));
    }
    let subsets = lex_subsets(g.rows, k);
    let size = subsets.len();
    let mut out = ComplexMatrix::zeros(size, size);
    for (r, rows) in subsets.iter().enumerate() {
        for (c, cols) in subsets.iter().enumerate() {
            out.set(r, c, minor(g, rows, cols));
        }
    }
    Ok(out)
}

/// Exact dimension of the irreducible representation with the given signature,
/// by the product-over-pairs formula.
pub fn weyl_dim(sig: &Signature) -> usize {
    let parts = sig.parts();
    let n = parts.len();
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..n {
        for j in i + 1..n {
            num *= parts[i] as i128 - parts[j] as i128 + j as i128 - i as i128;
            den *= j as i128 - i as i128;
            let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i128;
            if g > 1 {
                num /= g;
                den /= g;
            }
        }
    }
    (num / den) as usize
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Exterior-power degrees of the ambient tensor product: degree `k` appears
/// with multiplicity `parts[k-1] - parts[k]` (the last part gives determinant
/// factors).
fn factor_list(sig: &Signature) -> Vec<usize> {
    let parts = sig.parts();
    let n = parts.len();
    let mut factors = Vec::new();
    for k in 1..=n {
        let next = if k < n { parts[k] } else { 0 };
        for _ in 0..parts[k - 1] - next {
            factors.push(k);
        }
    }
    factors
}

/// An irreducible polynomial representation, stored as an isometric embedding
/// of its space into an ambient tensor product of exterior powers.
#[derive(Debug, Clone)]
pub struct PolyRep {
    /// Size of the matrices being represented.
    pub n: usize,
    /// Dimension of the representation space.
    pub dim: usize,
    /// Dimension of the ambient tensor product.
    pub ambient_dim: usize,
    /// Exterior-power degree of each tensor factor, in application order.
    pub factors: Vec<usize>,
    embed: ComplexMatrix,
}

impl PolyRep {
    /// The isometric embedding of the representation space into the ambient
    /// tensor product (`ambient_dim x dim`, orthonormal columns).
    pub fn embedding(&self) -> &ComplexMatrix {
        &self.embed
    }
}

/// First column of the `k`-th exterior power: minors of the first `k` columns.
fn leading_wedge_column(k: usize, g: &ComplexMatrix) -> Vec<Complex64> {
    let cols: Vec<usize> = (0..k).collect();
    lex_subsets(g.rows, k).iter().map(|rows| minor(g, rows, &cols)).collect()
}

fn kron_vec(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![cx(0.0, 0.0); x.len() * y.len()];
    for (iy, &vy) in y.iter().enumerate() {
        for (ix, &vx) in x.iter().enumerate() {
            out[ix + x.len() * iy] = vx * vy;
        }
    }
    out
}

/// The orbit vector: the image of the ambient highest vector under the tensor
/// product of exterior powers of `g`.
fn orbit_vector(factors: &[usize], g: &ComplexMatrix) -> Vec<Complex64> {
    let mut v = vec![cx(1.0, 0.0)];
    for &k in factors {
        let col = leading_wedge_column(k, g);
        v = kron_vec(&v, &col);
    }
    v
}

/// Applies the ambient operator `wedge(k_1, g) (x) ... (x) wedge(k_p, g)` to
/// each column of `e` without forming the dense ambient matrix.
fn apply_ambient(factors: &[usize], g: &ComplexMatrix, e: &ComplexMatrix) -> Result<ComplexMatrix> {
    let wedges: Vec<ComplexMatrix> =
        factors.iter().map(|&k| wedge_rep(k, g)).collect::<Result<_>>()?;
    let refs: Vec<&ComplexMatrix> = wedges.iter().collect();
    let mut out = ComplexMatrix::zeros(e.rows, e.cols);
    for c in 0..e.cols {
        let col: Vec<Complex64> = (0..e.rows).map(|r| e.get(r, c)).collect();
        let y = kron_chain_apply(&refs, &col);
        for (r, &val) in y.iter().enumerate() {
            out.set(r, c, val);
        }
    }
    Ok(out)
}

/// Builds the irreducible representation with the given signature by sampling
/// the unitary orbit of the ambient highest vector.
///
/// Fails with [`Error::DimensionMismatch`] when the sampled orbit span does not
/// reach the Weyl dimension (too few samples) or exceeds a numerically clean
/// rank gap; [`build_irrep_default`] retries with more samples.
pub fn build_irrep(
    n: usize,
    sig: &Signature,
    samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<PolyRep> {
    if sig.parts().len() != n {
        return Err(Error::InvalidSignature);
    }
    let factors = factor_list(sig);
    let ambient_dim: usize = factors.iter().map(|&k| binomial(n, k)).product();
    let target = weyl_dim(sig);
    let cols = samples.max(1);
    let mut rng = rng_from_seed(seed);
    let mut w = ComplexMatrix::zeros(ambient_dim, cols);
    for c in 0..cols {
        let g = haar_unitary_rng(n, &mut rng);
        let v = orbit_vector(&factors, &g);
        for (r, &val) in v.iter().enumerate() {
            w.set(r, c, val);
        }
    }
    let f = svd(&w);
    let rank = f.s.iter().filter(|&&s| s > 1e-8).count();
    if rank != target {
        return Err(Error::DimensionMismatch { expected: target, got: rank });
    }
    let embed = f.u.block(0, 0, ambient_dim, rank);
    // The span must be invariant: residual of projected group action.
    for probe in 0..2 {
        let g = haar_unitary_rng(n, &mut rng);
        let moved = apply_ambient(&factors, &g, &embed)?;
        let projected = embed.mul(&embed.adjoint().mul(&moved));
        let defect = moved.max_abs_diff(&projected);
        if defect > tol.scaled(ambient_dim).max(1e-12) * 1e3 {
            let _ = probe;
            return Err(Error::DimensionMismatch { expected: target, got: rank });
        }
    }
    Ok(PolyRep { n, dim: rank, ambient_dim, factors, embed })
}

/// Builds an irreducible representation with an automatic sample budget of
/// four times the Weyl dimension, doubling up to twice on a rank mismatch.
pub fn build_irrep_default(
    n: usize,
    sig: &Signature,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<PolyRep> {
    let mut samples = 4 * weyl_dim(sig).max(1);
    let mut last = None;
    for attempt in 0..3u64 {
        match build_irrep(n, sig, samples, seed.wrapping_add(attempt), tol) {
            Ok(rep) => return Ok(rep),
            Err(e @ Error::DimensionMismatch { .. }) => {
                last = Some(e);
                samples *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("loop ran"))
}

/// Evaluates the representation matrix of `g` on the representation space.
///
/// Defined for every square `g` (not only unitary ones): polynomial
/// representations extend holomorphically, and the embedded subspace stays
/// invariant.
pub fn rep_apply(rep: &PolyRep, g: &ComplexMatrix) -> Result<ComplexMatrix> {
    if g.rows != rep.n || g.cols != rep.n {
        return Err(Error::ShapeMismatch(format!(
            "representation expects {0}x{0} input, got {1}x{2}",
            rep.n, g.rows, g.cols
        )));
    }
    let moved = apply_ambient(&rep.factors, g, &rep.embed)?;
    Ok(rep.embed.adjoint().mul(&moved))
}

/// Isometry from the lexicographic minor basis into the `k`-fold tensor power:
/// each subset column is the normalized alternating sum over orderings.
pub fn antisymmetrizer(n: usize, k: usize) -> ComplexMatrix {
    let subsets = lex_subsets(n, k);
    let dim = n.pow(k as u32);
    let mut out = ComplexMatrix::zeros(dim, subsets.len());
    let perms = permutations_with_sign(k);
    let norm = 1.0 / (perms.len() as f64).sqrt();
    for (c, subset) in subsets.iter().enumerate() {
        for (perm, sign) in &perms {
            // Tensor slot f carries basis index subset[perm[f]]; slot 0 varies
            // fastest in the chained Kronecker convention.
            let mut idx = 0usize;
            let mut stride = 1usize;
            for &p in perm {
                idx += subset[p] * stride;
                stride *= n;
            }
            out.set(idx, c, cx(sign * norm, 0.0));
        }
    }
    out
}

/// All permutations of `{0, .., k-1}` with their signs.
fn permutations_with_sign(k: usize) -> Vec<(Vec<usize>, f64)> {
    let mut result: Vec<(Vec<usize>, f64)> = vec![(Vec::new(), 1.0)];
    for item in 0..k {
        let mut next = Vec::with_capacity(result.len() * (item + 1));
        for (p, s) in &result {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, item);
                let flips = p.len() - pos;
                let sign = if flips % 2 == 0 { *s } else { -*s };
                next.push((q, sign));
            }
        }
        result = next;
    }
    result
}

/// Compresses a colligation onto the block selected by an isometry with
/// invariant column span: the result's characteristic function is
/// `E^* theta(S) E`.
fn project_to_block(
    t: &Colligation,
    isometry: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<Colligation> {
    let r = isometry.cols;
    if r == t.alpha {
        return t.outer_conjugate(isometry, tol);
    }
    let q = complete_to_unitary(isometry);
    let rotated = t.outer_conjugate(&q, tol)?;
    let (part, _rest) = split_off(&rotated, &SplitSpec::new(r, t.alpha - r), tol)?;
    Ok(part)
}

/// Colligation for the `k`-th exterior power of a characteristic function:
/// the `k`-fold tensor power compressed onto the alternating subspace.
fn wedge_colligation(k: usize, f: &Colligation, tol: &ToleranceConfig) -> Result<Colligation> {
    if k == 1 {
        return Ok(f.clone());
    }
    let mut power = f.clone();
    for _ in 1..k {
        power = tensor_product(&power, f, tol)?;
    }
    let e_k = antisymmetrizer(f.alpha, k);
    project_to_block(&power, &e_k, tol)
}

/// Pushes a colligation through a polynomial representation: the result's
/// characteristic function is `S -> rep_apply(rep, theta_f(S))`.
pub fn rep_compose_colligation(
    rep: &PolyRep,
    f: &Colligation,
    tol: &ToleranceConfig,
) -> Result<Colligation> {
    if f.alpha != rep.n {
        return Err(Error::ShapeMismatch(format!(
            "representation of size {} cannot eat values of size {}",
            rep.n, f.alpha
        )));
    }
    let mut ambient: Option<Colligation> = None;
    for &k in &rep.factors {
        let factor = wedge_colligation(k, f, tol)?;
        ambient = Some(match ambient {
            None => factor,
            Some(acc) => tensor_product(&acc, &factor, tol)?,
        });
    }
    let ambient = match ambient {
        Some(a) => a,
        // Empty signature: the trivial one-dimensional representation.
        None => Colligation::constant_identity(1, f.m),
    };
    project_to_block(&ambient, &rep.embed, tol)
}
