//! Uniform grids with trapezoid and Simpson quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `len` equally spaced points from `start` to `end` inclusive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    start: f64,
    end: f64,
    len: usize,
}

impl UniformGrid {
    pub fn new(start: f64, end: f64, len: usize) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && end > start) || len < 2 {
            return Err(Error::InvalidGrid { start, end, len });
        }
        Ok(Self { start, end, len })
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, len: usize) -> Result<Self> {
        Self::new(-half_width, half_width, len)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.end - self.start) / (self.len - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.len {
            self.end
        } else {
            self.start + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.point(i))
    }

    /// Trapezoid weight of point `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.len {
            0.5 * self.step()
        } else {
            self.step()
        }
    }

    pub fn weights(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.weight(i))
    }

    /// Trapezoid rule over samples taken at the grid points.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len);
        let inner: f64 = values[1..self.len - 1].iter().sum();
        self.step() * (inner + 0.5 * (values[0] + values[self.len - 1]))
    }

    /// Second-order central differences, one-sided second-order at the ends.
    pub fn derivative(&self, values: &[f64]) -> Vec<f64> {
        let n = self.len;
        let h = self.step();
        let mut out = vec![0.0; n];
        if n == 2 {
            let d = (values[1] - values[0]) / h;
            return vec![d, d];
        }
        out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
        out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
        for i in 1..n - 1 {
            out[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
        }
        out
    }

    /// Five-point central differences (fourth order) in the interior, falling
    /// back to [`derivative`](Self::derivative) within two points of the ends.
    pub fn derivative_fourth_order(&self, values: &[f64]) -> Vec<f64> {
        let mut out = self.derivative(values);
        let n = self.len;
        let h12 = 12.0 * self.step();
        for i in 2..n.saturating_sub(2) {
            out[i] = (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2]) / h12;
        }
        out
    }
}

/// Composite Simpson rule for `f` on `[a, b]` with at least `min_panels` panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, min_panels: usize) -> f64 {
    let n = (min_panels.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}
