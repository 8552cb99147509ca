//! Gauss rules (Golub–Welsch), geometrically graded panels for integrable
//! endpoint singularities, and the Jacobi-weighted integral over the
//! `eta`-interval `[|rho - r|, rho + r]`.

use alloc::vec;
use alloc::vec::Vec;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;

use super::special::gamma_positive;

/// An `m`-point Gauss rule on `[-1, 1]` for the weight `(1-x)^a (1+x)^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    a: f64,
    b: f64,
}

impl GaussRule {
    pub fn legendre(m: usize) -> Self {
        Self::jacobi(m, 0.0, 0.0)
    }

    /// Gauss–Jacobi rule via the eigen-decomposition of the Jacobi matrix.
    pub fn jacobi(m: usize, a: f64, b: f64) -> Self {
        assert!(m >= 1, "need at least one node");
        assert!(a > -1.0 && b > -1.0, "Jacobi exponents must exceed -1");
        let ab = a + b;
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m];
        diag[0] = (b - a) / (ab + 2.0);
        for k in 1..m {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            diag[k] = (b * b - a * a) / (s * (s + 2.0));
        }
        for k in 1..m {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            let beta = if k == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            off[k - 1] = beta.sqrt();
        }
        let mu0 = 2f64.powf(ab + 1.0) * gamma_positive(a + 1.0) * gamma_positive(b + 1.0)
            / gamma_positive(ab + 2.0);
        let mut first = vec![0.0; m];
        first[0] = 1.0;
        symmetric_tridiagonal_ql(&mut diag, &mut off, &mut first);
        let mut pairs: Vec<(f64, f64)> = diag
            .iter()
            .zip(first.iter())
            .map(|(&x, &z)| (x, mu0 * z * z))
            .collect();
        pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("finite nodes"));
        let (nodes, weights) = pairs.into_iter().unzip();
        Self {
            nodes,
            weights,
            a,
            b,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `int_lo^hi (hi - x)^a (x - lo)^b f(x) dx`.
    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let scale = half.powf(self.a + self.b + 1.0);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(lo + half * (1.0 + x));
        }
        scale * acc
    }

    /// Mapped nodes and weights on `[lo, hi]` (weight function absorbed).
    pub fn push_mapped(&self, lo: f64, hi: f64, out: &mut Vec<(f64, f64)>) {
        let half = 0.5 * (hi - lo);
        let scale = half.powf(self.a + self.b + 1.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            out.push((lo + half * (1.0 + x), scale * w));
        }
    }
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
/// `diag` receives the eigenvalues; `first` carries the first row of the
/// accumulated eigenvector matrix (enough for Gauss weights).
fn symmetric_tridiagonal_ql(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) {
    let n = diag.len();
    if n == 1 {
        return;
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            assert!(iterations < 60, "tridiagonal QL failed to converge");
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let zf = first[i + 1];
                first[i + 1] = s * first[i] + c * zf;
                first[i] = c * first[i] - s * zf;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
}

/// Which end of an interval carries the singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Left,
    Right,
}

/// Geometric grading toward one end of `[a, b]`: panels of width
/// `L σ^k (1 - σ)` for `k < levels`, then a last panel of width `L σ^levels`
/// touching the singular end. Gauss nodes never hit the endpoint itself.
pub fn push_graded(
    rule: &GaussRule,
    a: f64,
    b: f64,
    toward: End,
    ratio: f64,
    levels: usize,
    out: &mut Vec<(f64, f64)>,
) {
    let len = b - a;
    if len <= 0.0 {
        return;
    }
    // panels narrower than this cannot be resolved next to the singular end
    let end = match toward {
        End::Left => a,
        End::Right => b,
    };
    let resolution = 16.0 * f64::EPSILON * end.abs();
    let mut outer = 1.0;
    for _ in 0..levels {
        let inner = outer * ratio;
        if len * inner < resolution {
            break;
        }
        match toward {
            End::Left => rule.push_mapped(a + len * inner, a + len * outer, out),
            End::Right => rule.push_mapped(b - len * outer, b - len * inner, out),
        }
        outer = inner;
    }
    let start = out.len();
    match toward {
        End::Left => rule.push_mapped(a, a + len * outer, out),
        End::Right => rule.push_mapped(b - len * outer, b, out),
    }
    // a node rounded onto the singular end would evaluate the singularity
    let mut k = start;
    while k < out.len() {
        if out[k].0 == end {
            out.remove(k);
        } else {
            k += 1;
        }
    }
}

/// Grading depth that makes the unresolved innermost panel negligible for an
/// integrand behaving like `d^beta` (`beta > -1`) at distance `d` from the
/// singular end: `ratio^{levels (1 + beta)} <= tol`.
pub fn grading_levels_for(beta: f64, ratio: f64, tol: f64) -> usize {
    let power = (1.0 + beta).clamp(0.02, 1.0);
    (tol.ln() / (power * ratio.ln())).ceil().clamp(1.0, 2000.0) as usize
}

/// Points for `int_a^b f` where `f` is smooth except at `s` (possibly
/// outside the interval). Intervals far from `s` get a plain rule.
#[allow(clippy::too_many_arguments)]
pub fn push_singular_aware(
    far: &GaussRule,
    near: &GaussRule,
    a: f64,
    b: f64,
    s: f64,
    ratio: f64,
    levels: usize,
    near_factor: f64,
    out: &mut Vec<(f64, f64)>,
) {
    let len = b - a;
    if s > a && s < b {
        push_graded(near, a, s, End::Right, ratio, levels, out);
        push_graded(near, s, b, End::Left, ratio, levels, out);
        return;
    }
    if s == a {
        push_graded(near, a, b, End::Left, ratio, levels, out);
        return;
    }
    if s == b {
        push_graded(near, a, b, End::Right, ratio, levels, out);
        return;
    }
    let (dist, end) = if s < a { (a - s, End::Left) } else { (s - b, End::Right) };
    if dist >= near_factor * len {
        far.push_mapped(a, b, out);
        return;
    }
    let needed = if dist >= len {
        1
    } else {
        ((dist / len).ln() / ratio.ln()).ceil().max(1.0) as usize
    };
    push_graded(near, a, b, end, ratio, needed.min(levels), out);
}

/// Rules used by [`eta_integral`] for a fixed endpoint exponent `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRules {
    alpha: f64,
    both: GaussRule,
    left: GaussRule,
    right: GaussRule,
    plain: GaussRule,
}

impl JacobiRules {
    pub fn new(alpha: f64, points: usize) -> Self {
        Self {
            alpha,
            both: GaussRule::jacobi(points, alpha, alpha),
            // weight (1+x)^alpha sits at the left end of the mapped panel
            left: GaussRule::jacobi(points, 0.0, alpha),
            right: GaussRule::jacobi(points, alpha, 0.0),
            plain: GaussRule::legendre(points),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `int_lo^hi ((eta - lo)(hi - eta))^alpha f(eta) d eta` for `0 <= lo < hi`.
///
/// `f` may vary on the scale `eta` itself (it typically contains powers of
/// `eta` and of `eta + lo`), so when `lo` is small compared with the
/// interval length the range is cut into dyadic panels `[2^k lo, 2^{k+1} lo]`,
/// each as wide as its distance from the origin. The endpoint weights stay
/// exact on the first and last panel.
pub fn eta_integral(rules: &JacobiRules, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let alpha = rules.alpha;
    let width = hi - lo;
    if width <= 0.0 {
        return 0.0;
    }
    if lo >= 0.5 * width {
        return rules.both.integrate(lo, hi, &f);
    }
    let mut left_end = lo;
    let mut right_end = lo + lo.max(width * 1e-18);
    // first panel: exact weight at lo
    let mut total = rules
        .left
        .integrate(left_end, right_end, |e| (hi - e).powf(alpha) * f(e));
    loop {
        left_end = right_end;
        right_end = 2.0 * left_end;
        if right_end >= hi || hi - right_end < 0.25 * (right_end - left_end) {
            total += rules
                .right
                .integrate(left_end, hi, |e| (e - lo).powf(alpha) * f(e));
            break;
        }
        total += rules.plain.integrate(left_end, right_end, |e| {
            ((e - lo) * (hi - e)).powf(alpha) * f(e)
        });
    }
    total
}
