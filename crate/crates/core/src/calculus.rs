//! A calculus of operations on colligations.
//!
//! Every operation here acts on characteristic functions through explicit
//! constructions on the underlying unitary matrices: direct sums give
//! block-diagonal values, the interleaved product multiplies values, the
//! tensor product takes Kronecker products of values, and composition chains
//! two colligations through a resolvent pivot.  Splitting and the boundary
//! component operations invert these constructions where the values permit it.

use num_complex::Complex;

use crate::ballgeo::{
    canonical_component_form, mobius_to_ks, pseudo_unitary_inverse, stratum, transvection_to,
    KSMorphism,
};
use crate::colligation::{theta_eval, Colligation};
use crate::error::{Error, Result};
use crate::linalg::op_norm;
use crate::matrix::{cx, kron, Complex64, ComplexMatrix};
use crate::tolerance::ToleranceConfig;

/// Deterministic interior probe points of the `m`-ball, used to test value
/// structure (block diagonality, component membership) without randomness.
pub fn probe_points(m: usize, count: usize) -> Vec<ComplexMatrix> {
    (0..count)
        .map(|idx| {
            if idx == 0 || m == 0 {
                return ComplexMatrix::zeros(m, m);
            }
            let raw = ComplexMatrix::from_fn(m, m, |r, c| {
                let t = (idx * m * m + r * m + c) as f64;
                cx((0.9 * t + 0.3 * idx as f64).sin(), (1.7 * t - 0.5 * idx as f64).cos())
            });
            let scale = (0.3 + 0.4 * idx as f64 / count as f64) / op_norm(&raw).max(1.0);
            raw.scale(cx(scale, 0.0))
        })
        .collect()
}

/// Copies `u` into `dest` along an injective index map (rows and columns alike).
fn place(dest: &mut ComplexMatrix, u: &ComplexMatrix, map: &[usize]) {
    for r in 0..u.rows {
        for c in 0..u.cols {
            dest.set(map[r], map[c], u.get(r, c));
        }
    }
}

/// Embeds `u` into a larger identity matrix along an injective index map.
fn embed_in_identity(u: &ComplexMatrix, map: &[usize], size: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(size);
    for &d in map {
        out.set(d, d, cx(0.0, 0.0));
    }
    place(&mut out, u, map);
    out
}

/// Direct sum of colligations sharing the source ball: the characteristic
/// function of the result is `diag(theta_g, theta_h)`.
///
/// Internal lanes are interleaved group by group so that the result keeps the
/// group-major lane layout.
pub fn direct_sum(g: &Colligation, h: &Colligation, tol: &ToleranceConfig) -> Result<Colligation> {
    if g.m != h.m {
        return Err(Error::ShapeMismatch(format!(
            "direct summands must share the source ball, got {} and {}",
            g.m, h.m
        )));
    }
    let (alpha, beta, m, i, j) = (g.alpha, h.alpha, g.m, g.j, h.j);
    let size = alpha + beta + m * (i + j);
    let map_g: Vec<usize> = (0..g.dim())
        .map(|idx| {
            if idx < alpha {
                idx
            } else {
                let off = idx - alpha;
                alpha + beta + (off / i) * (i + j) + (off % i)
            }
        })
        .collect();
    let map_h: Vec<usize> = (0..h.dim())
        .map(|idx| {
            if idx < beta {
                alpha + idx
            } else {
                let off = idx - beta;
                alpha + beta + (off / j) * (i + j) + i + (off % j)
            }
        })
        .collect();
    let mut u = ComplexMatrix::zeros(size, size);
    place(&mut u, g.matrix(), &map_g);
    place(&mut u, h.matrix(), &map_h);
    Colligation::new(alpha + beta, m, i + j, u, tol)
}

/// Interleaved product of colligations with the same target and source: the
/// characteristic function of the result is the pointwise product
/// `theta_g(S) * theta_h(S)`.
pub fn odot_product(g: &Colligation, h: &Colligation, tol: &ToleranceConfig) -> Result<Colligation> {
    if g.alpha != h.alpha || g.m != h.m {
        return Err(Error::ShapeMismatch(format!(
            "product factors must share target and source, got ({}, {}) and ({}, {})",
            g.alpha, g.m, h.alpha, h.m
        )));
    }
    let (alpha, m, i, j) = (g.alpha, g.m, g.j, h.j);
    let size = alpha + m * (i + j);
    let map_g: Vec<usize> = (0..g.dim())
        .map(|idx| {
            if idx < alpha {
                idx
            } else {
                let off = idx - alpha;
                alpha + (off / i) * (i + j) + (off % i)
            }
        })
        .collect();
    let map_h: Vec<usize> = (0..h.dim())
        .map(|idx| {
            if idx < alpha {
                idx
            } else {
                let off = idx - alpha;
                alpha + (off / j) * (i + j) + i + (off % j)
            }
        })
        .collect();
    let m1 = embed_in_identity(g.matrix(), &map_g, size);
    let m2 = embed_in_identity(h.matrix(), &map_h, size);
    Colligation::new(alpha, m, i + j, m1.mul(&m2), tol)
}

/// Left inflation: turns `f` with target `beta` into a colligation with target
/// `alpha * beta` whose characteristic function is `1_alpha (x) theta_f(S)`.
pub fn inflate_left(f: &Colligation, alpha: usize, tol: &ToleranceConfig) -> Result<Colligation> {
    let eye = ComplexMatrix::identity(alpha);
    let new_alpha = alpha * f.alpha;
    let new_j = alpha * f.j;
    let size = new_alpha + f.m * new_j;
    let mut u = ComplexMatrix::zeros(size, size);
    u.set_block(0, 0, &kron(&eye, &f.a()));
    u.set_block(0, new_alpha, &kron(&eye, &f.b()));
    u.set_block(new_alpha, 0, &kron(&eye, &f.c()));
    u.set_block(new_alpha, new_alpha, &kron(&eye, &f.d()));
    Colligation::new(new_alpha, f.m, new_j, u, tol)
}

/// Right inflation: turns `f` with target `alpha` into a colligation with
/// target `alpha * beta` whose characteristic function is `theta_f(S) (x) 1_beta`.
///
/// The internal blocks are inflated group by group so the result keeps the
/// group-major lane layout; a whole-matrix Kronecker product would interleave
/// lanes of different groups.
pub fn inflate_right(f: &Colligation, beta: usize, tol: &ToleranceConfig) -> Result<Colligation> {
    let eye = ComplexMatrix::identity(beta);
    let (alpha, m, i) = (f.alpha, f.m, f.j);
    let new_alpha = alpha * beta;
    let new_j = i * beta;
    let size = new_alpha + m * new_j;
    let mut u = ComplexMatrix::zeros(size, size);
    u.set_block(0, 0, &kron(&f.a(), &eye));
    let (b, c, d) = (f.b(), f.c(), f.d());
    for mu in 0..m {
        let b_mu = b.block(0, mu * i, alpha, i);
        u.set_block(0, new_alpha + mu * new_j, &kron(&b_mu, &eye));
        let c_mu = c.block(mu * i, 0, i, alpha);
        u.set_block(new_alpha + mu * new_j, 0, &kron(&c_mu, &eye));
        for nu in 0..m {
            let d_block = d.block(mu * i, nu * i, i, i);
            u.set_block(new_alpha + mu * new_j, new_alpha + nu * new_j, &kron(&d_block, &eye));
        }
    }
    Colligation::new(new_alpha, m, new_j, u, tol)
}

/// Tensor product: the characteristic function of the result is the Kronecker
/// product `theta_f1(S) (x) theta_f2(S)`.
pub fn tensor_product(
    f1: &Colligation,
    f2: &Colligation,
    tol: &ToleranceConfig,
) -> Result<Colligation> {
    if f1.m != f2.m {
        return Err(Error::ShapeMismatch(format!(
            "tensor factors must share the source ball, got {} and {}",
            f1.m, f2.m
        )));
    }
    let left = inflate_left(f2, f1.alpha, tol)?;
    let right = inflate_right(f1, f2.alpha, tol)?;
    odot_product(&left, &right, tol)
}

/// Composition of colligations: the characteristic function of the result is
/// `theta_g(theta_f(S))`.
///
/// The construction requires the resolvent pivot `1 - d_g * infl(a_f)` to be
/// regular, where `infl` repeats the constant term of `f` across the lanes of
/// `g`.  A numerically singular pivot yields [`Error::CompositionSingular`];
/// [`compose_with_probe`] can often rescue such cases by moving the origin.
pub fn compose(g: &Colligation, f: &Colligation, tol: &ToleranceConfig) -> Result<Colligation> {
    if g.m != f.alpha {
        return Err(Error::ShapeMismatch(format!(
            "composition needs the outer source ({}) to match the inner target ({})",
            g.m, f.alpha
        )));
    }
    let eye = ComplexMatrix::identity(g.j);
    let fa = kron(&eye, &f.a());
    let fb = kron(&eye, &f.b());
    let fc = kron(&eye, &f.c());
    let fd = kron(&eye, &f.d());
    let upsilon = KSMorphism::from_blocks(&fa, &fb, &fc, &fd, tol)?;
    let zeta = KSMorphism::new(g.alpha, g.m * g.j, g.matrix().clone(), tol)?;
    let prod = crate::ballgeo::circledast(&zeta, &upsilon, tol).map_err(|e| match e {
        Error::SingularPivot => Error::CompositionSingular,
        other => other,
    })?;
    Colligation::new(g.alpha, f.m, f.j * g.j, prod.matrix().clone(), tol)
}

/// Precomposition with a Möbius automorphism of the source ball:
/// `theta(S) -> theta(mobius(h, S))`.
pub fn aut_precompose(
    f: &Colligation,
    h: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<Colligation> {
    let c_h = Colligation::from_ks(&mobius_to_ks(h, tol)?, tol)?;
    compose(f, &c_h, tol)
}

/// Postcomposition with a Möbius automorphism of the target ball:
/// `theta(S) -> mobius(h, theta(S))`.
pub fn aut_postcompose(
    f: &Colligation,
    h: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<Colligation> {
    let c_h = Colligation::from_ks(&mobius_to_ks(h, tol)?, tol)?;
    compose(&c_h, f, tol)
}

/// Composition through a moved origin: conjugates `f` by the transvection to
/// `s0` before composing, then moves the origin back.
///
/// The composite map is unchanged, but the resolvent pivot is evaluated at
/// `theta_f(s0)` instead of `theta_f(0)`, which can rescue compositions whose
/// plain pivot is numerically singular.  With `s0 = 0` this degenerates to the
/// plain composition.
pub fn compose_with_probe(
    g: &Colligation,
    f: &Colligation,
    s0: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<Colligation> {
    let h = transvection_to(s0, tol)?;
    let h_inv = pseudo_unitary_inverse(&h, tol)?;
    let f_moved = aut_precompose(f, &h, tol)?;
    let partial = compose(g, &f_moved, tol)?;
    aut_precompose(&partial, &h_inv, tol)
}

/// How to split a block-diagonal characteristic function into its two summands.
#[derive(Debug, Clone)]
pub struct SplitSpec {
    /// Target size of the first summand.
    pub alpha1: usize,
    /// Target size of the second summand.
    pub alpha2: usize,
    /// Unimodular twist applied to the selector matrices when the plain split
    /// hits a singular pivot; `-1` by default.
    pub lambda_twist: Complex64,
}

impl SplitSpec {
    /// Split into parts of the given sizes with the default twist.
    pub fn new(alpha1: usize, alpha2: usize) -> Self {
        SplitSpec { alpha1, alpha2, lambda_twist: Complex::new(-1.0, 0.0) }
    }
}

/// Selector colligation extracting one diagonal block of a block-diagonal
/// ball point; `lambda` twists the passive part of its internal block.
fn selector(
    alpha1: usize,
    alpha2: usize,
    first: bool,
    lambda: Complex64,
    tol: &ToleranceConfig,
) -> Result<Colligation> {
    let alpha = alpha1 + alpha2;
    let target = if first { alpha1 } else { alpha2 };
    let size = target + alpha;
    let mut u = ComplexMatrix::zeros(size, size);
    for t in 0..target {
        // b block: pass the selected rows out; c block: feed the selected
        // columns in.  The selected range starts at 0 for the first block and
        // at alpha1 for the second.
        let sel = if first { t } else { alpha1 + t };
        u.set(t, target + sel, cx(1.0, 0.0));
        u.set(target + sel, t, cx(1.0, 0.0));
    }
    for t in 0..(alpha - target) {
        // d block: the passive diagonal carries the twist.
        let passive = if first { alpha1 + t } else { t };
        u.set(target + passive, target + passive, lambda);
    }
    Colligation::new(target, alpha, 1, u, tol)
}

/// Splits a colligation whose characteristic function is block diagonal
/// `diag(theta_1, theta_2)` into colligations for the two blocks.
///
/// The values are probed at deterministic points first; visible off-diagonal
/// mass fails with [`Error::NotBlockDiagonal`].  If the plain selectors hit a
/// singular pivot the split is retried with the twist from `spec`; if both
/// attempts fail the error is [`Error::SplitSingular`].
pub fn split_off(
    f: &Colligation,
    spec: &SplitSpec,
    tol: &ToleranceConfig,
) -> Result<(Colligation, Colligation)> {
    if spec.alpha1 + spec.alpha2 != f.alpha {
        return Err(Error::ShapeMismatch(format!(
            "split sizes {} + {} must add up to the target {}",
            spec.alpha1, spec.alpha2, f.alpha
        )));
    }
    if (spec.lambda_twist.norm() - 1.0).abs() > tol.atol {
        return Err(Error::NotUnitary { defect: (spec.lambda_twist.norm() - 1.0).abs() });
    }
    let (a1, a2) = (spec.alpha1, spec.alpha2);
    let mut defect = 0.0f64;
    let mut evaluated = 0usize;
    for p in probe_points(f.m, 8) {
        let th = match theta_eval(f, &p, tol) {
            Ok(t) => t,
            Err(Error::SingularPivot) => continue,
            Err(e) => return Err(e),
        };
        evaluated += 1;
        defect = defect.max(th.block(0, a1, a1, a2).max_abs());
        defect = defect.max(th.block(a1, 0, a2, a1).max_abs());
    }
    if evaluated == 0 {
        return Err(Error::SingularPivot);
    }
    if defect > tol.unit_singular_band() {
        return Err(Error::NotBlockDiagonal { defect });
    }
    let attempt = |lambda: Complex64| -> Result<(Colligation, Colligation)> {
        let e1 = selector(a1, a2, true, lambda, tol)?;
        let e2 = selector(a1, a2, false, lambda, tol)?;
        Ok((compose(&e1, f, tol)?, compose(&e2, f, tol)?))
    };
    match attempt(cx(1.0, 0.0)) {
        Ok(pair) => Ok(pair),
        Err(Error::CompositionSingular) => match attempt(spec.lambda_twist) {
            Ok(pair) => Ok(pair),
            Err(Error::CompositionSingular) => Err(Error::SplitSingular),
            Err(e) => Err(e),
        },
        Err(e) => Err(e),
    }
}

/// Embedding colligation of the canonical boundary component: sends `u` of
/// size `m - l` to `diag(u, 1_l)` in the `m`-ball.
fn component_embedding(m: usize, l: usize, tol: &ToleranceConfig) -> Result<Colligation> {
    let k = m - l;
    let mut u = ComplexMatrix::zeros(m + k, m + k);
    for t in 0..l {
        u.set(k + t, k + t, cx(1.0, 0.0));
    }
    for t in 0..k {
        u.set(t, m + t, cx(1.0, 0.0));
        u.set(m + t, t, cx(1.0, 0.0));
    }
    Colligation::new(m, k, 1, u, tol)
}

/// Restricts a colligation to the canonical boundary component of defect `l`
/// in its source ball: the result's characteristic function is
/// `u -> theta_f(diag(u, 1_l))`.
///
/// An optional `reducer` (a pseudo-unitary Möbius matrix) is applied to the
/// source first, for components that are not in canonical position.
pub fn restrict_to_component(
    f: &Colligation,
    l: usize,
    reducer: Option<&ComplexMatrix>,
    tol: &ToleranceConfig,
) -> Result<Colligation> {
    if l > f.m {
        return Err(Error::ShapeMismatch(format!(
            "component defect {l} exceeds the source ball size {}",
            f.m
        )));
    }
    let base = match reducer {
        Some(h) => aut_precompose(f, h, tol)?,
        None => f.clone(),
    };
    let emb = component_embedding(f.m, l, tol)?;
    compose(&base, &emb, tol).map_err(|e| match e {
        Error::CompositionSingular => Error::SingularOnComponent,
        other => other,
    })
}

/// Checks whether a ball point already has the canonical component shape
/// `diag(u', 1_k)` within the unit-singular tolerance band.
fn is_canonical_block(u0: &ComplexMatrix, k: usize, tol: &ToleranceConfig) -> bool {
    let n = u0.rows;
    let band = tol.unit_singular_band();
    let corner = u0.block(n - k, n - k, k, k);
    if corner.max_abs_diff(&ComplexMatrix::identity(k)) > band {
        return false;
    }
    let off = u0.block(0, n - k, n - k, k).max_abs().max(u0.block(n - k, 0, k, n - k).max_abs());
    off <= band
}

/// Corestricts a colligation whose values lie in one boundary component of the
/// target ball: returns the colligation of the moving part together with the
/// Möbius matrix that moved the component to canonical position (when one was
/// needed).
///
/// The component is detected from the value at a deterministic probe point.
/// Interior-valued colligations are returned unchanged.  Values that fail to
/// stay in the detected component fail with [`Error::ImageNotInComponent`].
pub fn corestrict_from_component(
    f: &Colligation,
    tol: &ToleranceConfig,
) -> Result<(Colligation, Option<ComplexMatrix>)> {
    let probes = probe_points(f.m, 8);
    let detection = if probes.len() > 2 { &probes[2] } else { &probes[0] };
    let u0 = theta_eval(f, detection, tol)?;
    let k = stratum(&u0, tol)?.defect_rank;
    if k == 0 {
        return Ok((f.clone(), None));
    }
    let beta = f.alpha;
    let (g_prime, mover) = if is_canonical_block(&u0, k, tol) {
        (f.clone(), None)
    } else {
        let (h, detected) = canonical_component_form(&u0, tol)?;
        if detected != k {
            return Err(Error::ImageNotInComponent { expected: k });
        }
        (aut_postcompose(f, &h, tol)?, Some(h))
    };
    let band = tol.unit_singular_band() * 10.0;
    for p in &probes {
        let th = match theta_eval(&g_prime, p, tol) {
            Ok(t) => t,
            Err(Error::SingularPivot) => continue,
            Err(e) => return Err(e),
        };
        let corner = th.block(beta - k, beta - k, k, k);
        let off = th
            .block(0, beta - k, beta - k, k)
            .max_abs()
            .max(th.block(beta - k, 0, k, beta - k).max_abs());
        if corner.max_abs_diff(&ComplexMatrix::identity(k)) > band || off > band {
            return Err(Error::ImageNotInComponent { expected: k });
        }
    }
    let (part, _unit_part) = split_off(&g_prime, &SplitSpec::new(beta - k, k), tol)?;
    Ok((part, mover))
}
