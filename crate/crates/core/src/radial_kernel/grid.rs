use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::quadrature::GaussRule;
use crate::error::{invalid, Error, Result};

/// One interpolation element `[a, b]` owning the consecutive nodes
/// `first .. first + count` (shared endpoints belong to both neighbours).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    pub a: f64,
    pub b: f64,
    pub first: usize,
    pub count: usize,
    bary: Vec<f64>,
}

impl Element {
    fn new(a: f64, b: f64, first: usize, nodes: &[f64]) -> Self {
        let count = nodes.len();
        let bary = (0..count)
            .map(|j| {
                let mut p = 1.0;
                for k in 0..count {
                    if k != j {
                        p *= nodes[j] - nodes[k];
                    }
                }
                1.0 / p
            })
            .collect();
        Self {
            a,
            b,
            first,
            count,
            bary,
        }
    }

    /// Lagrange basis values of the element's nodes at `x`.
    pub fn basis(&self, nodes: &[f64], x: f64, out: &mut [f64]) {
        let local = &nodes[self.first..self.first + self.count];
        if self.count == 1 {
            out[0] = 1.0;
            return;
        }
        if let Some(hit) = local.iter().position(|&v| v == x) {
            out[..self.count].iter_mut().for_each(|o| *o = 0.0);
            out[hit] = 1.0;
            return;
        }
        let mut ell = 1.0;
        for &v in local {
            ell *= x - v;
        }
        for j in 0..self.count {
            out[j] = ell * self.bary[j] / (x - local[j]);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GridLayout {
    /// Equispaced nodes `0, dr, 2 dr, ...` with piecewise polynomial
    /// interpolation of degree `order`.
    Uniform { dr: f64, order: usize },
    /// Gauss–Legendre nodes inside each panel (no node at the breakpoints).
    GaussPanels { points: usize },
}

/// Radial nodes `0 <= r_0 < ... < r_{N-1}` with quadrature weights for
/// `int_0^{r_max} phi(rho) d rho` and a piecewise Lagrange interpolant.
///
/// The grid is also the domain cut-off: integrals over `rho > r_max` are
/// dropped, see [`super::tail_bound`] for the size of what is lost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    elements: Vec<Element>,
    layout: GridLayout,
    r_max: f64,
}

impl RadialGrid {
    /// Uniform grid on `[0, r_max]` (rounded up so the element count divides evenly).
    pub fn uniform(dr: f64, r_max: f64, order: usize) -> Result<Self> {
        if !(dr.is_finite() && dr > 0.0) {
            return Err(invalid("dr", format!("must be > 0, got {dr}")));
        }
        if !(r_max.is_finite() && r_max >= dr) {
            return Err(invalid("r_max", format!("must be >= dr, got {r_max}")));
        }
        if !(1..=6).contains(&order) {
            return Err(invalid("order", format!("must lie in 1..=6, got {order}")));
        }
        let mut intervals = (r_max / dr - 1e-9).ceil() as usize;
        intervals = intervals.div_ceil(order) * order;
        let nodes: Vec<f64> = (0..=intervals).map(|i| i as f64 * dr).collect();
        let elements = (0..intervals / order)
            .map(|e| {
                let first = e * order;
                Element::new(
                    nodes[first],
                    nodes[first + order],
                    first,
                    &nodes[first..=first + order],
                )
            })
            .collect();
        Self::assemble(nodes, elements, GridLayout::Uniform { dr, order })
    }

    /// Gauss–Legendre panels between consecutive `breaks` (the first break
    /// is normally 0). High-order interpolation without a node at `r = 0`.
    pub fn gauss_panels(breaks: &[f64], points: usize) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(invalid("breaks", "need at least two breakpoints"));
        }
        if breaks[0] < 0.0 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("breaks", "must be nonnegative and strictly increasing"));
        }
        if !(1..=16).contains(&points) {
            return Err(invalid("points", format!("must lie in 1..=16, got {points}")));
        }
        let rule = GaussRule::legendre(points);
        let mut nodes = Vec::with_capacity(points * (breaks.len() - 1));
        let mut elements = Vec::with_capacity(breaks.len() - 1);
        for w in breaks.windows(2) {
            let first = nodes.len();
            let half = 0.5 * (w[1] - w[0]);
            for x in rule.nodes() {
                nodes.push(w[0] + half * (1.0 + x));
            }
            elements.push(Element::new(w[0], w[1], first, &nodes[first..]));
        }
        let mut grid = Self::assemble(nodes, elements, GridLayout::GaussPanels { points })?;
        grid.r_max = *breaks.last().expect("checked length");
        Ok(grid)
    }

    /// Equal-width panels on `[0, r_max]`.
    pub fn gauss_uniform_panels(panel: f64, r_max: f64, points: usize) -> Result<Self> {
        if !(panel > 0.0 && r_max > 0.0) {
            return Err(invalid("panel", "panel width and r_max must be positive"));
        }
        let count = (r_max / panel - 1e-9).ceil().max(1.0) as usize;
        let breaks: Vec<f64> = (0..=count).map(|k| k as f64 * panel).collect();
        Self::gauss_panels(&breaks, points)
    }

    fn assemble(nodes: Vec<f64>, elements: Vec<Element>, layout: GridLayout) -> Result<Self> {
        let mut weights = vec![0.0; nodes.len()];
        let mut basis = vec![0.0; 16];
        for e in &elements {
            let rule = GaussRule::legendre(e.count.max(1));
            let mut pts = Vec::new();
            rule.push_mapped(e.a, e.b, &mut pts);
            for (x, w) in pts {
                e.basis(&nodes, x, &mut basis);
                for j in 0..e.count {
                    weights[e.first + j] += w * basis[j];
                }
            }
        }
        let r_max = elements.last().map(|e| e.b).unwrap_or(0.0);
        Ok(Self {
            nodes,
            weights,
            elements,
            layout,
            r_max,
        })
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

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn layout(&self) -> GridLayout {
        self.layout
    }

    /// Truncation radius; the domain is `[0, r_max]`.
    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Spacing of a uniform grid.
    pub fn dr(&self) -> Option<f64> {
        match self.layout {
            GridLayout::Uniform { dr, .. } => Some(dr),
            GridLayout::GaussPanels { .. } => None,
        }
    }

    /// Interpolation degree + 1 nodes per element.
    pub fn nodes_per_element(&self) -> usize {
        self.elements.first().map(|e| e.count).unwrap_or(0)
    }

    /// True when every basis function is a hat function (piecewise linear),
    /// so that kernel weights can only be negative through quadrature error.
    pub fn is_piecewise_linear(&self) -> bool {
        matches!(self.layout, GridLayout::Uniform { order: 1, .. })
    }

    /// Index of the element containing `r` (clamped to the grid range).
    pub fn element_of(&self, r: f64) -> usize {
        let idx = self.elements.partition_point(|e| e.b < r);
        idx.min(self.elements.len() - 1)
    }

    /// Interpolated value at `r`; zero beyond `r_max` (the truncated domain).
    pub fn interpolate(&self, values: &[f64], r: f64) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        if r > self.r_max || r < 0.0 {
            return 0.0;
        }
        let e = &self.elements[self.element_of(r)];
        let mut basis = [0.0; 16];
        e.basis(&self.nodes, r, &mut basis);
        (0..e.count).map(|j| basis[j] * values[e.first + j]).sum()
    }

    /// Piecewise-linear interpolation between neighbouring nodes; constant
    /// extension below the first node, zero beyond `r_max`.
    pub fn interpolate_linear(&self, values: &[f64], r: f64) -> f64 {
        if r > self.r_max || r < 0.0 {
            return 0.0;
        }
        let k = self.nodes.partition_point(|&x| x <= r);
        if k == 0 {
            return values[0];
        }
        if k >= self.nodes.len() {
            return values[self.nodes.len() - 1];
        }
        let (x0, x1) = (self.nodes[k - 1], self.nodes[k]);
        let s = (r - x0) / (x1 - x0);
        values[k - 1] * (1.0 - s) + values[k] * s
    }

    /// Same layout with every radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(invalid("factor", format!("must be > 0, got {factor}")));
        }
        let nodes: Vec<f64> = self.nodes.iter().map(|x| x * factor).collect();
        let elements = self
            .elements
            .iter()
            .map(|e| {
                Element::new(
                    e.a * factor,
                    e.b * factor,
                    e.first,
                    &nodes[e.first..e.first + e.count],
                )
            })
            .collect();
        let layout = match self.layout {
            GridLayout::Uniform { dr, order } => GridLayout::Uniform {
                dr: dr * factor,
                order,
            },
            other => other,
        };
        Ok(Self {
            weights: self.weights.iter().map(|w| w * factor).collect(),
            nodes,
            elements,
            layout,
            r_max: self.r_max * factor,
        })
    }

    pub(crate) fn check_same(&self, other: &RadialGrid) -> Result<()> {
        if self.nodes == other.nodes {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "grids differ ({} vs {} nodes)",
                self.len(),
                other.len()
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_layout() {
        let g = RadialGrid::uniform(0.25, 2.0, 1).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.r_max(), 2.0);
        assert!(g.weights().iter().all(|&w| w > 0.0));
        assert!((g.weights()[0] - 0.125).abs() < 1e-15);
        let quad = RadialGrid::uniform(0.25, 2.1, 2).unwrap();
        assert_eq!(quad.len() % 2, 1);
        assert!(quad.r_max() >= 2.1);
    }

    #[test]
    fn weights_integrate_polynomials() {
        let g = RadialGrid::gauss_uniform_panels(0.5, 3.0, 6).unwrap();
        let v: f64 = g
            .nodes()
            .iter()
            .zip(g.weights())
            .map(|(x, w)| w * x.powi(7))
            .sum();
        assert!((v - 3f64.powi(8) / 8.0).abs() < 1e-10);
        let s = RadialGrid::uniform(0.1, 1.0, 2).unwrap();
        let v: f64 = s.nodes().iter().zip(s.weights()).map(|(x, w)| w * x * x).sum();
        assert!((v - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn interpolation_reproduces_degree() {
        let g = RadialGrid::gauss_uniform_panels(1.0, 4.0, 5).unwrap();
        let vals: Vec<f64> = g.nodes().iter().map(|x| x.powi(4) - x).collect();
        for &r in &[0.0, 0.3, 1.0, 2.71, 3.99] {
            let p = g.interpolate(&vals, r);
            assert!((p - (r.powi(4) - r)).abs() < 1e-10, "r = {r}");
        }
        assert_eq!(g.interpolate(&vals, 5.0), 0.0);
    }

    #[test]
    fn scaling_maps_nodes_and_weights() {
        let g = RadialGrid::uniform(0.5, 2.0, 1).unwrap();
        let s = g.scaled(2.0).unwrap();
        assert_eq!(s.nodes()[2], 2.0);
        assert_eq!(s.r_max(), 4.0);
        assert_eq!(s.weights()[1], 2.0 * g.weights()[1]);
        assert!(g.scaled(0.0).is_err());
    }
}
