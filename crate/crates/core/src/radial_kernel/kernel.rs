//! The h-kernel, John's spherical-mean identity, and the radial form of the
//! Riesz convolution `|x|^{-gamma} * U(|x|)`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::grid::RadialGrid;
use super::quadrature::{
    eta_integral, grading_levels_for, push_singular_aware, GaussRule, JacobiRules,
};
use super::special::unit_sphere_area;
use crate::error::{domain, invalid, Error, Result};
use crate::wave_rep::RadialField;

/// `{eta^2 - (rho - r)^2}^{(n-3)/2} {(rho + r)^2 - eta^2}^{(n-3)/2}`.
pub fn h_kernel(eta: f64, rho: f64, r: f64, n: u32) -> Result<f64> {
    if n < 2 {
        return Err(invalid("n", "h-kernel needs n >= 2"));
    }
    if !(rho > 0.0 && r > 0.0) {
        return Err(domain("h_kernel", format!("requires rho, r > 0, got ({rho}, {r})")));
    }
    let lo = (rho - r).abs();
    let hi = rho + r;
    let slack = 1e-14 * hi;
    if eta < lo - slack || eta > hi + slack {
        return Err(domain(
            "h_kernel",
            format!("eta = {eta} outside [{lo}, {hi}]"),
        ));
    }
    if n == 3 {
        return Ok(1.0);
    }
    let alpha = (n as f64 - 3.0) / 2.0;
    let first = (eta * eta - lo * lo).max(0.0);
    let second = (hi * hi - eta * eta).max(0.0);
    if alpha < 0.0 && (first == 0.0 || second == 0.0) {
        return Err(domain(
            "h_kernel",
            format!("endpoint eta = {eta} with negative exponent {alpha}"),
        ));
    }
    Ok(first.powf(alpha) * second.powf(alpha))
}

/// Reusable evaluator of `int_{|omega|=1} b(|x + rho omega|) dS` for radial `b`.
#[derive(Debug, Clone)]
pub struct SphereMeans {
    n: u32,
    alpha: f64,
    prefactor: f64,
    omega_n: f64,
    rules: JacobiRules,
}

impl SphereMeans {
    pub fn new(n: u32, points: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", "spherical means need n >= 2"));
        }
        let alpha = (n as f64 - 3.0) / 2.0;
        Ok(Self {
            n,
            alpha,
            prefactor: 2f64.powi(3 - n as i32) * unit_sphere_area(n - 1),
            omega_n: unit_sphere_area(n),
            rules: JacobiRules::new(alpha, points),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Surface integral (not the mean) over the unit sphere; `r = 0` or
    /// `rho = 0` degenerate to `omega_n b(rho + r)`.
    pub fn integral(&self, b: impl Fn(f64) -> f64, r: f64, rho: f64) -> f64 {
        if r == 0.0 || rho == 0.0 {
            return self.omega_n * b(r + rho);
        }
        let lo = (rho - r).abs();
        let hi = rho + r;
        let alpha = self.alpha;
        let inner = eta_integral(&self.rules, lo, hi, |eta| {
            let tail = if alpha == 0.0 {
                1.0
            } else {
                ((eta + lo) * (eta + hi)).powf(alpha)
            };
            eta * b(eta) * tail
        });
        self.prefactor * (r * rho).powi(2 - self.n as i32) * inner
    }
}

/// John's identity: the surface integral of `b(|x + rho omega|)` over the
/// unit sphere, reduced to a one-dimensional `eta`-integral. The value is
/// computed with two rule sizes; disagreement beyond `1e-9` (relative) is
/// reported as a quadrature failure.
pub fn john_sphere_mean(b: impl Fn(f64) -> f64, r: f64, rho: f64, n: u32) -> Result<f64> {
    if !(r > 0.0 && rho > 0.0) {
        return Err(domain(
            "john_sphere_mean",
            format!("requires r, rho > 0, got ({r}, {rho})"),
        ));
    }
    let coarse = SphereMeans::new(n, 20)?.integral(&b, r, rho);
    let fine = SphereMeans::new(n, 32)?.integral(&b, r, rho);
    let estimate = (fine - coarse).abs();
    if !fine.is_finite() || estimate > 1e-9 * fine.abs().max(1e-300) {
        return Err(Error::Quadrature {
            func: "john_sphere_mean",
            estimate,
        });
    }
    Ok(fine)
}

/// Quadrature knobs for kernel rows. They enter the cache key.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    /// Gauss–Jacobi points on each `eta` panel.
    pub eta_points: usize,
    /// Gauss–Legendre points on elements far from the singular radius.
    pub far_points: usize,
    /// Points per graded panel near the singular radius.
    pub near_points: usize,
    pub grading_ratio: f64,
    pub grading_levels: usize,
    /// Elements closer than `near_factor * width` to the singularity are graded.
    pub near_factor: f64,
    /// Relative tolerance above which a near-singular element is flagged.
    pub panel_tolerance: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            eta_points: 16,
            far_points: 6,
            near_points: 12,
            grading_ratio: 0.3,
            grading_levels: 30,
            near_factor: 3.0,
            panel_tolerance: 1e-8,
        }
    }
}

/// `G_gamma(U)(r) = int_0^inf K(r, rho) U(rho) d rho`, the radial reduction
/// of `int_{R^n} |x - y|^{-gamma} U(|y|) dy` at `|x| = r`.
///
/// For `n = 1` the kernel is `|r - rho|^{-gamma} + (r + rho)^{-gamma}`
/// (even extension to the line).
#[derive(Debug, Clone)]
pub struct RadialConvolution {
    n: u32,
    gamma: f64,
    settings: QuadratureSettings,
    omega_n: f64,
    c0: f64,
    rules: Option<JacobiRules>,
    levels: usize,
    far: GaussRule,
    near: GaussRule,
    near_check: GaussRule,
}

/// One kernel row together with its quadrature diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRow {
    pub values: Vec<f64>,
    pub clamped: usize,
    pub negative: usize,
    /// Largest estimated error of a graded element, relative to the row sum.
    pub panel_error: f64,
}

impl RadialConvolution {
    pub fn new(n: u32, gamma: f64, settings: QuadratureSettings) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "dimension must be positive"));
        }
        if !(gamma > 0.0 && gamma < n as f64) {
            return Err(invalid("gamma", format!("must lie in (0, {n}), got {gamma}")));
        }
        let alpha = (n as f64 - 3.0) / 2.0;
        let rules = if n >= 2 && n != 3 {
            Some(JacobiRules::new(alpha, settings.eta_points))
        } else {
            None
        };
        let c0 = if n >= 2 {
            2f64.powi(3 - n as i32) * unit_sphere_area(n - 1)
        } else {
            0.0
        };
        // K(r, rho) ~ |rho - r|^{n-1-gamma} near the diagonal (and near
        // rho = 0 on the r = 0 row)
        let beta = (n as f64 - 1.0 - gamma).min(0.0);
        let levels = settings
            .grading_levels
            .max(grading_levels_for(beta, settings.grading_ratio, 1e-15));
        Ok(Self {
            n,
            gamma,
            settings,
            omega_n: unit_sphere_area(n),
            c0,
            rules,
            levels,
            far: GaussRule::legendre(settings.far_points),
            near: GaussRule::legendre(settings.near_points),
            near_check: GaussRule::legendre(settings.near_points + 4),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn settings(&self) -> &QuadratureSettings {
        &self.settings
    }

    /// `int_{|rho-r|}^{rho+r} eta^{1-gamma} h(eta, rho, r) d eta` for `n >= 2`.
    pub fn inner_integral(&self, rho: f64, r: f64) -> f64 {
        let lo = (rho - r).abs();
        let hi = rho + r;
        let c = 2.0 - self.gamma;
        match &self.rules {
            None => {
                if lo == 0.0 {
                    return if c > 0.0 { hi.powf(c) / c } else { f64::INFINITY };
                }
                let log_ratio = (2.0 * rho.min(r) / lo).ln_1p();
                if c == 0.0 {
                    log_ratio
                } else {
                    lo.powf(c) * (c * log_ratio).exp_m1() / c
                }
            }
            Some(rules) => {
                let alpha = rules.alpha();
                let one_minus = 1.0 - self.gamma;
                eta_integral(rules, lo, hi, |eta| {
                    eta.powf(one_minus) * ((eta + lo) * (eta + hi)).powf(alpha)
                })
            }
        }
    }

    /// Kernel `K(r, rho)`.
    pub fn kernel(&self, r: f64, rho: f64) -> f64 {
        if r == 0.0 {
            return self.omega_n * rho.powf(self.n as f64 - 1.0 - self.gamma);
        }
        if self.n == 1 {
            return (r - rho).abs().powf(-self.gamma) + (r + rho).powf(-self.gamma);
        }
        if rho == 0.0 {
            return 0.0;
        }
        self.c0 * rho * r.powi(2 - self.n as i32) * self.inner_integral(rho, r)
    }

    fn singular_point(&self, r: f64) -> f64 {
        r
    }

    fn element_points(&self, rule: &GaussRule, a: f64, b: f64, s: f64, out: &mut Vec<(f64, f64)>) {
        let st = &self.settings;
        push_singular_aware(
            &self.far,
            rule,
            a,
            b,
            s,
            st.grading_ratio,
            self.levels,
            st.near_factor,
            out,
        );
    }

    fn is_near(&self, a: f64, b: f64, s: f64) -> bool {
        let dist = if s < a {
            a - s
        } else if s > b {
            s - b
        } else {
            0.0
        };
        dist < self.settings.near_factor * (b - a)
    }

    /// Product-integration weights `W_j = int K(r, rho) L_j(rho) d rho`
    /// over the grid's truncated domain, for an arbitrary target radius.
    pub fn row(&self, grid: &RadialGrid, r: f64) -> KernelRow {
        let nodes = grid.nodes();
        let mut values = vec![0.0; grid.len()];
        let mut pts = Vec::with_capacity(256);
        let mut basis = [0.0; 16];
        let mut local = [0.0; 16];
        let mut check = [0.0; 16];
        let mut max_err: f64 = 0.0;
        let s = self.singular_point(r);
        for e in grid.elements() {
            let near = self.is_near(e.a, e.b, s);
            pts.clear();
            self.element_points(&self.near, e.a, e.b, s, &mut pts);
            local[..e.count].iter_mut().for_each(|v| *v = 0.0);
            for &(rho, w) in &pts {
                let kw = w * self.kernel(r, rho);
                e.basis(nodes, rho, &mut basis);
                for j in 0..e.count {
                    local[j] += kw * basis[j];
                }
            }
            if near {
                pts.clear();
                self.element_points(&self.near_check, e.a, e.b, s, &mut pts);
                check[..e.count].iter_mut().for_each(|v| *v = 0.0);
                for &(rho, w) in &pts {
                    let kw = w * self.kernel(r, rho);
                    e.basis(nodes, rho, &mut basis);
                    for j in 0..e.count {
                        check[j] += kw * basis[j];
                    }
                }
                for j in 0..e.count {
                    max_err = max_err.max((check[j] - local[j]).abs());
                    local[j] = check[j];
                }
            }
            for j in 0..e.count {
                values[e.first + j] += local[j];
            }
        }
        let mut clamped = 0;
        let mut negative = 0;
        if grid.is_piecewise_linear() {
            for v in values.iter_mut() {
                if *v < 0.0 {
                    *v = 0.0;
                    clamped += 1;
                }
            }
        } else {
            negative = values.iter().filter(|&&v| v < 0.0).count();
        }
        let scale: f64 = values.iter().map(|v| v.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
        KernelRow {
            values,
            clamped,
            negative,
            panel_error: max_err / scale,
        }
    }

    /// Direct quadrature of `G_gamma(u)(r)` over `[breaks[0], breaks.last()]`;
    /// `u` should be smooth between consecutive breaks.
    pub fn evaluate(&self, r: f64, u: impl Fn(f64) -> f64, breaks: &[f64]) -> f64 {
        let mut pts = Vec::new();
        let s = self.singular_point(r);
        for w in breaks.windows(2) {
            push_singular_aware(
                &self.near_check,
                &self.near_check,
                w[0],
                w[1],
                s,
                self.settings.grading_ratio,
                self.levels + 10,
                self.settings.near_factor,
                &mut pts,
            );
        }
        pts.iter()
            .map(|&(rho, wt)| {
                let v = u(rho);
                if v == 0.0 {
                    0.0
                } else {
                    wt * self.kernel(r, rho) * v
                }
            })
            .sum()
    }
}

/// Summary of the quadrature behaviour over all rows of a kernel matrix.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct KernelDiagnostics {
    /// Negative entries set to zero (piecewise-linear grids only).
    pub clamped: usize,
    /// Negative entries kept (high-order grids, where they are genuine).
    pub negative: usize,
    /// Rows whose largest graded-element error exceeded the tolerance.
    pub flagged_rows: usize,
    pub max_panel_error: f64,
}

/// Dense `N x N` product-integration matrix of `G_gamma` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    grid: Arc<RadialGrid>,
    n: u32,
    gamma: f64,
    settings: QuadratureSettings,
    entries: Vec<f64>,
    diagnostics: KernelDiagnostics,
}

impl KernelMatrix {
    /// Assembles a matrix from rows computed elsewhere (e.g. in parallel).
    pub fn from_rows(
        grid: Arc<RadialGrid>,
        n: u32,
        gamma: f64,
        settings: QuadratureSettings,
        rows: Vec<KernelRow>,
    ) -> Result<Self> {
        let size = grid.len();
        if rows.len() != size || rows.iter().any(|r| r.values.len() != size) {
            return Err(Error::GridMismatch(format!(
                "expected {size} rows of length {size}"
            )));
        }
        let mut diagnostics = KernelDiagnostics::default();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            diagnostics.clamped += row.clamped;
            diagnostics.negative += row.negative;
            diagnostics.max_panel_error = diagnostics.max_panel_error.max(row.panel_error);
            if row.panel_error > settings.panel_tolerance {
                diagnostics.flagged_rows += 1;
            }
            entries.extend_from_slice(&row.values);
        }
        Ok(Self {
            grid,
            n,
            gamma,
            settings,
            entries,
            diagnostics,
        })
    }

    /// Rebuilds a matrix from stored entries (cache path).
    pub fn from_parts(
        grid: Arc<RadialGrid>,
        n: u32,
        gamma: f64,
        settings: QuadratureSettings,
        entries: Vec<f64>,
        diagnostics: KernelDiagnostics,
    ) -> Result<Self> {
        if entries.len() != grid.len() * grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} entries for a grid of {} nodes",
                entries.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            n,
            gamma,
            settings,
            entries,
            diagnostics,
        })
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn settings(&self) -> &QuadratureSettings {
        &self.settings
    }

    pub fn diagnostics(&self) -> &KernelDiagnostics {
        &self.diagnostics
    }

    pub fn size(&self) -> usize {
        self.grid.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.size();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size() + j]
    }

    /// `out = W values`.
    pub fn apply_values(&self, values: &[f64], out: &mut [f64]) {
        let n = self.size();
        assert_eq!(values.len(), n, "input length must match the grid");
        assert_eq!(out.len(), n, "output length must match the grid");
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.entries[i * n..(i + 1) * n];
            *o = dot(row, values);
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    // four accumulators let the compiler vectorize without reassociation flags
    let mut acc = [0.0; 4];
    let chunks = a.len() / 4;
    for k in 0..chunks {
        for l in 0..4 {
            acc[l] += a[4 * k + l] * b[4 * k + l];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in 4 * chunks..a.len() {
        s += a[k] * b[k];
    }
    s
}

/// Builds the kernel matrix row by row with default quadrature settings.
pub fn build_kernel_matrix(
    grid: impl Into<Arc<RadialGrid>>,
    n: u32,
    gamma: f64,
) -> Result<KernelMatrix> {
    build_kernel_matrix_with(grid, n, gamma, QuadratureSettings::default())
}

pub fn build_kernel_matrix_with(
    grid: impl Into<Arc<RadialGrid>>,
    n: u32,
    gamma: f64,
    settings: QuadratureSettings,
) -> Result<KernelMatrix> {
    let grid = grid.into();
    let op = RadialConvolution::new(n, gamma, settings)?;
    let rows = grid.nodes().iter().map(|&r| op.row(&grid, r)).collect();
    KernelMatrix::from_rows(grid, n, gamma, settings, rows)
}

/// `G_gamma(U)` on the matrix grid. The time and metadata of `u` are kept.
pub fn apply_convolution(k: &KernelMatrix, u: &RadialField) -> Result<RadialField> {
    k.grid().check_same(u.grid())?;
    let mut out = vec![0.0; k.size()];
    k.apply_values(u.values(), &mut out);
    RadialField::new(k.grid().clone(), out, u.time(), u.meta())
}

/// Upper bound for the dropped tail `int_{r_max}^inf K(r, rho) U(rho) d rho`
/// when `0 <= U(rho) <= amplitude (1 + rho)^{-decay}` beyond `r_max > r`.
/// Infinite when the tail is not integrable (`decay <= n - gamma`).
pub fn tail_bound(n: u32, gamma: f64, decay: f64, amplitude: f64, r: f64, r_max: f64) -> f64 {
    if r >= r_max {
        return f64::INFINITY;
    }
    let excess = decay - (n as f64 - gamma);
    if excess <= 0.0 {
        return f64::INFINITY;
    }
    // |x - rho omega| >= rho - r >= rho (r_max - r) / r_max for rho >= r_max
    let near = (r_max / (r_max - r)).powf(gamma);
    unit_sphere_area(n) * amplitude * near * r_max.powf(-excess) / excess
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn h_kernel_examples() {
        assert_eq!(h_kernel(1.3, 1.0, 0.8, 3).unwrap(), 1.0);
        assert_eq!(h_kernel(1.8, 1.0, 0.8, 5).unwrap(), 0.0);
        let v = h_kernel(1.0, 1.0, 1.0, 2).unwrap();
        assert!((v - 3f64.powf(-0.5)).abs() < 1e-15);
        assert!(h_kernel(2.0, 1.0, 1.0, 2).is_err());
        assert!(h_kernel(2.5, 1.0, 1.0, 4).is_err());
    }

    #[test]
    fn john_constant_gives_sphere_area() {
        for n in 2..=7u32 {
            for &(r, rho) in &[(0.3, 1.0), (1.0, 1.0), (2.0, 0.1), (5.0, 4.9)] {
                let v = john_sphere_mean(|_| 1.0, r, rho, n).unwrap();
                let area = unit_sphere_area(n);
                assert!((v - area).abs() < 1e-10 * area, "n {n} ({r},{rho}): {v}");
            }
        }
        let v = john_sphere_mean(|e| e * e, 1.0, 1.0, 3).unwrap();
        assert!((v - 8.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn kernel_at_origin_row() {
        let op = RadialConvolution::new(3, 1.0, QuadratureSettings::default()).unwrap();
        // r -> 0 limit of the general formula
        let a = op.kernel(1e-7, 2.0);
        let b = op.kernel(0.0, 2.0);
        assert!((a - b).abs() < 1e-6 * b);
        let op4 = RadialConvolution::new(4, 1.5, QuadratureSettings::default()).unwrap();
        let a = op4.kernel(1e-6, 1.5);
        let b = op4.kernel(0.0, 1.5);
        assert!((a - b).abs() < 1e-5 * b, "{a} {b}");
    }

    #[test]
    fn gamma_two_log_branch_is_continuous() {
        let s = QuadratureSettings::default();
        let at = RadialConvolution::new(3, 2.0, s).unwrap().inner_integral(1.0, 0.5);
        let near = RadialConvolution::new(3, 2.0 - 1e-9, s).unwrap().inner_integral(1.0, 0.5);
        assert!((at - 3f64.ln()).abs() < 1e-14);
        assert!((at - near).abs() < 1e-8);
    }

    #[test]
    fn newton_potential_of_unit_ball() {
        let op = RadialConvolution::new(3, 1.0, QuadratureSettings::default()).unwrap();
        let v = op.evaluate(2.0, |rho| if rho <= 1.0 { 1.0 } else { 0.0 }, &[0.0, 1.0]);
        assert!((v - 2.0 * PI / 3.0).abs() < 1e-12);
        // inside: 2 pi (1 - r^2 / 3)
        let v = op.evaluate(0.5, |_| 1.0, &[0.0, 1.0]);
        assert!((v - 2.0 * PI * (1.0 - 0.25 / 3.0)).abs() < 1e-10, "{v}");
    }

    #[test]
    fn small_gamma_rows_are_nearly_identical() {
        let grid = Arc::new(RadialGrid::gauss_uniform_panels(0.5, 2.0, 8).unwrap());
        let k = build_kernel_matrix(grid.clone(), 3, 1e-6).unwrap();
        let u: Vec<f64> = grid.nodes().iter().map(|x| (-x * x).exp()).collect();
        let mut out = vec![0.0; grid.len()];
        k.apply_values(&u, &mut out);
        let exact: f64 = grid
            .nodes()
            .iter()
            .zip(grid.weights())
            .map(|(x, w)| w * 4.0 * PI * x * x * (-x * x).exp())
            .sum();
        for v in out {
            assert!((v - exact).abs() < 1e-4 * exact);
        }
    }

    #[test]
    fn tail_bound_behaviour() {
        assert!(tail_bound(3, 1.0, 2.0, 1.0, 0.0, 10.0).is_infinite());
        let b = tail_bound(3, 1.0, 4.0, 1.0, 0.0, 10.0);
        assert!((b - 4.0 * PI * 0.01 / 2.0).abs() < 1e-12);
    }
}
