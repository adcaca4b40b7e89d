use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::su2::wigner_column;
use super::FockInput;
use crate::error::{Error, Result};
use crate::grid::UniformGrid;

/// Half-width of the default phase window, `[-π/2, π/2]`.
pub const DEFAULT_WINDOW: f64 = PI / 2.0;
pub const DEFAULT_POSTERIOR_POINTS: usize = 4001;
/// An update leaving less than this much mass is treated as contradictory data.
pub const ZERO_POSTERIOR: f64 = 1e-300;

/// Flat-prior phase posterior on a uniform grid over `[-W, W]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Posterior {
    grid: UniformGrid,
    density: Vec<f64>,
    shots: Vec<f64>,
}

impl Default for Posterior {
    fn default() -> Self {
        Self::new(DEFAULT_WINDOW, DEFAULT_POSTERIOR_POINTS).expect("default window is valid")
    }
}

impl Posterior {
    pub fn new(window: f64, points: usize) -> Result<Self> {
        if !(window > 0.0 && window <= PI) {
            return Err(Error::InvalidInput(format!("phase window ±{window} must lie within ±π")));
        }
        let grid = UniformGrid::symmetric(window, points)?;
        let density = vec![0.5 / window; points];
        Ok(Self {
            grid,
            density,
            shots: Vec::new(),
        })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Recorded outcomes, in order.
    pub fn shots(&self) -> &[f64] {
        &self.shots
    }

    pub fn window(&self) -> f64 {
        self.grid.end()
    }

    /// Multiplies by the likelihood `p_k(φ)` of outcome `k` and renormalizes.
    pub fn update(&mut self, input: &FockInput, k: f64) -> Result<()> {
        let idx = input
            .outcome_index(k)
            .ok_or_else(|| Error::InvalidInput(format!("outcome {k} is impossible for j = {}", input.j())))?;
        let (j, m) = (input.j(), input.m());
        let likelihood: Vec<f64> = self
            .grid
            .points()
            .map(|phi| wigner_column(j, m, phi).map(|c| c[idx] * c[idx]))
            .collect::<Result<_>>()?;
        self.update_with(&likelihood)?;
        self.shots.push(k);
        Ok(())
    }

    fn update_with(&mut self, likelihood: &[f64]) -> Result<()> {
        let next: Vec<f64> = self.density.iter().zip(likelihood).map(|(d, l)| d * l).collect();
        let integral = self.grid.trapezoid(&next);
        if !(integral >= ZERO_POSTERIOR) {
            return Err(Error::ZeroPosterior { integral });
        }
        self.density = next.into_iter().map(|v| v / integral).collect();
        Ok(())
    }

    pub fn integral(&self) -> f64 {
        self.grid.trapezoid(&self.density)
    }

    pub fn mean(&self) -> f64 {
        let first: Vec<f64> = self.grid.points().zip(&self.density).map(|(x, d)| x * d).collect();
        self.grid.trapezoid(&first)
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let second: Vec<f64> = self.grid.points().zip(&self.density).map(|(x, d)| x * x * d).collect();
        self.grid.trapezoid(&second) - mean * mean
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_prior() {
        let p = Posterior::default();
        assert!((p.integral() - 1.0).abs() < 1e-12);
        assert!(p.mean().abs() < 1e-12);
        let w = DEFAULT_WINDOW;
        assert!((p.variance() - w * w / 3.0).abs() < 1e-6);
        assert!(Posterior::new(4.0, 11).is_err());
    }

    #[test]
    fn single_particle_update() {
        let input = FockInput::new(1, 0).unwrap();
        let mut p = Posterior::new(PI, 2001).unwrap();
        p.update(&input, 0.5).unwrap();
        assert!((p.integral() - 1.0).abs() < 1e-8);
        // density ∝ cos²(φ/2): exactly 1/π · cos²(φ/2) on [-π, π]
        let mid = p.grid().len() / 2;
        assert!((p.density()[mid] - 1.0 / PI).abs() < 1e-6);
        assert_eq!(p.shots(), &[0.5]);
        assert!(p.update(&input, 0.0).is_err());
    }

    #[test]
    fn balanced_shots_narrow_and_stay_centred() {
        let input = FockInput::balanced(20).unwrap();
        let mut p = Posterior::default();
        let mut last = p.variance();
        for _ in 0..4 {
            p.update(&input, 0.0).unwrap();
            assert!(p.mean().abs() < 1e-10);
            assert!((p.integral() - 1.0).abs() < 1e-8);
            assert!(p.variance() < last);
            last = p.variance();
        }
    }

    #[test]
    fn contradictory_data_is_reported() {
        let input = FockInput::new(1, 0).unwrap();
        let mut p = Posterior::new(1e-200, 3).unwrap();
        assert!(matches!(p.update(&input, -0.5), Err(Error::ZeroPosterior { .. })));
        assert!(p.shots().is_empty());
    }
}
