//! Phase-space points and the shared quadrature grid.
//!
//! All numeric integrals in this crate use the same scheme: a tensor-product
//! trapezoid rule on a symmetric box, summed in a fixed row-major order so
//! results are bitwise reproducible, with the error estimated by comparing
//! against the nested every-other-node subgrid.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GridError {
    #[error("grid needs an odd point count >= 3 per axis, got {0}")]
    BadPointCount(usize),
    #[error("grid half-width must be positive and finite, got {0}")]
    BadHalfWidth(f64),
}

/// A single-degree-of-freedom phase-space point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Self {
        PhasePoint { q, p }
    }

    pub fn origin() -> Self {
        PhasePoint { q: 0.0, p: 0.0 }
    }
}

/// Uniform symmetric box `[-L, L]^2` with an odd number of nodes per axis,
/// so the stride-2 subgrid is again a valid trapezoid grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadGrid {
    half_width: f64,
    points_per_axis: usize,
}

impl QuadGrid {
    pub fn new(half_width: f64, points_per_axis: usize) -> Result<Self, GridError> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(GridError::BadHalfWidth(half_width));
        }
        if points_per_axis < 3 || points_per_axis % 2 == 0 {
            return Err(GridError::BadPointCount(points_per_axis));
        }
        Ok(QuadGrid { half_width, points_per_axis })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points_per_axis - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.half_width + self.spacing() * i as f64
    }

    /// All 2-D nodes in row-major (q outer, p inner) order.
    pub fn points(&self) -> Vec<PhasePoint> {
        let n = self.points_per_axis;
        let mut out = Vec::with_capacity(n * n);
        for iq in 0..n {
            for ip in 0..n {
                out.push(PhasePoint::new(self.node(iq), self.node(ip)));
            }
        }
        out
    }

    fn axis_weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.points_per_axis - 1 {
            0.5
        } else {
            1.0
        }
    }

    /// Trapezoid weight of node `(iq, ip)` including the cell area.
    pub fn weight(&self, iq: usize, ip: usize) -> f64 {
        let h = self.spacing();
        self.axis_weight(iq) * self.axis_weight(ip) * h * h
    }

    /// Integrates `f` over the box with the full grid and the nested coarse
    /// grid; returns `(fine, |fine - coarse|)`. The summation order is fixed.
    pub fn integrate_with_estimate(
        &self,
        mut f: impl FnMut(f64, f64) -> Complex64,
    ) -> (Complex64, f64) {
        let n = self.points_per_axis;
        let mut fine = Complex64::new(0.0, 0.0);
        let mut coarse = Complex64::new(0.0, 0.0);
        let coarse_grid = QuadGrid {
            half_width: self.half_width,
            points_per_axis: (n + 1) / 2,
        };
        for iq in 0..n {
            for ip in 0..n {
                let v = f(self.node(iq), self.node(ip));
                fine += self.weight(iq, ip) * v;
                if iq % 2 == 0 && ip % 2 == 0 {
                    coarse += coarse_grid.weight(iq / 2, ip / 2) * v;
                }
            }
        }
        (fine, (fine - coarse).norm())
    }
}
