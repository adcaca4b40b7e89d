//! Single-slit diffraction read as a momentum measurement.
//!
//! A plane wave with transverse wavenumber `k_x` passing a slit of width `a`
//! leaves the state `exp(i k_x x)/sqrt(a)` on `|x| <= a/2`. In the far field the
//! screen coordinate `ξ` maps to the dimensionless `μ = a k ξ / (2d)`, and hits
//! are distributed as `sinc²(μ - ν)/π` with `ν = a k_x / 2`. The conjugate of
//! `μ` is `ξ̃ = 2x/a`, so `(Δp_x)² = (2ħ/a)² (Δμ)²`.
//!
//! The density has `1/μ²` tails. Models and wavefunctions here carry the
//! out-of-grid part analytically so grid quantities converge to the
//! infinite-screen values.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{simpson, UniformGrid};
use crate::special::{sinc, sinc_prime, sinc_prime_sq_tail, sinc_sq_tail};
use crate::stats::{fisher_information, Family, GridTail, ParametricModel, SUPPORT_EPS};

/// Default far-field grid: `μ ∈ [-200, 200]`, spacing 0.01.
pub const DEFAULT_HALF_WIDTH: f64 = 200.0;
pub const DEFAULT_POINTS: usize = 40_001;
/// Default parameter domain `ν ∈ [-10, 10]`.
pub const DEFAULT_NU_RANGE: f64 = 10.0;
/// Closest the grid edge may come to the pattern centre; the tail series
/// needs at least this much room.
const MIN_TAIL_DISTANCE: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlitGeometry {
    /// Slit width.
    pub a: f64,
    /// de Broglie wavelength.
    pub lambda: f64,
    /// Slit-to-screen distance.
    pub d: f64,
    /// Incident transverse wavenumber.
    pub k_x: f64,
    pub hbar: f64,
}

impl Default for SlitGeometry {
    fn default() -> Self {
        Self {
            a: 1.0,
            lambda: 0.01,
            d: 100.0,
            k_x: 0.0,
            hbar: 1.0,
        }
    }
}

impl SlitGeometry {
    pub fn new(a: f64, lambda: f64, d: f64, k_x: f64) -> Result<Self> {
        Self {
            a,
            lambda,
            d,
            k_x,
            hbar: 1.0,
        }
        .validated()
    }

    pub fn with_hbar(self, hbar: f64) -> Result<Self> {
        Self { hbar, ..self }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        for (name, v) in [("a", self.a), ("lambda", self.lambda), ("d", self.d), ("hbar", self.hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidGeometry(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.k_x.is_finite() {
            return Err(Error::InvalidGeometry(format!("k_x = {}", self.k_x)));
        }
        Ok(self)
    }

    pub fn k(&self) -> f64 {
        2.0 * PI / self.lambda
    }

    /// Pattern centre `ν = a k_x / 2`.
    pub fn nu(&self) -> f64 {
        0.5 * self.a * self.k_x
    }

    pub fn mu_of_screen(&self, xi: f64) -> f64 {
        self.a * self.k() * xi / (2.0 * self.d)
    }

    pub fn screen_of_mu(&self, mu: f64) -> f64 {
        2.0 * self.d * mu / (self.a * self.k())
    }

    /// `(Δp_x)² / (Δμ)²`.
    pub fn momentum_scale_sq(&self) -> f64 {
        (2.0 * self.hbar / self.a).powi(2)
    }
}

/// Far-field grid and parameter range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FarFieldGrid {
    pub half_width: f64,
    pub points: usize,
    pub nu_range: f64,
}

impl Default for FarFieldGrid {
    fn default() -> Self {
        Self {
            half_width: DEFAULT_HALF_WIDTH,
            points: DEFAULT_POINTS,
            nu_range: DEFAULT_NU_RANGE,
        }
    }
}

impl FarFieldGrid {
    fn grid(&self) -> Result<UniformGrid> {
        if self.half_width - self.nu_range < MIN_TAIL_DISTANCE || self.nu_range <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "far-field half-width {} leaves less than {MIN_TAIL_DISTANCE} beyond nu range {}",
                self.half_width, self.nu_range
            )));
        }
        UniformGrid::symmetric(self.half_width, self.points)
    }
}

struct SincSquared {
    grid: UniformGrid,
}

impl Family for SincSquared {
    fn values(&self, nu: f64) -> Vec<f64> {
        self.grid.points().map(|mu| sinc(mu - nu).powi(2) / PI).collect()
    }

    fn derivatives(&self, nu: f64) -> Option<Vec<f64>> {
        Some(
            self.grid
                .points()
                .map(|mu| {
                    let u = mu - nu;
                    -2.0 * sinc(u) * sinc_prime(u) / PI
                })
                .collect(),
        )
    }

    fn value(&self, nu: f64, outcome: usize) -> f64 {
        sinc(self.grid.point(outcome) - nu).powi(2) / PI
    }
}

/// Same density with the derivative left to finite differences.
struct SincSquaredNumeric(SincSquared);

impl Family for SincSquaredNumeric {
    fn values(&self, nu: f64) -> Vec<f64> {
        self.0.values(nu)
    }

    fn value(&self, nu: f64, outcome: usize) -> f64 {
        self.0.value(nu, outcome)
    }
}

/// Beyond `|μ| = half_width`.
struct SincTail {
    half_width: f64,
}

impl GridTail for SincTail {
    fn mass(&self, nu: f64) -> [f64; 2] {
        [
            sinc_sq_tail(self.half_width + nu) / PI,
            sinc_sq_tail(self.half_width - nu) / PI,
        ]
    }

    fn mass_derivative(&self, nu: f64) -> [f64; 2] {
        [
            -sinc(self.half_width + nu).powi(2) / PI,
            sinc(self.half_width - nu).powi(2) / PI,
        ]
    }

    fn fisher(&self, nu: f64) -> f64 {
        4.0 / PI * (sinc_prime_sq_tail(self.half_width + nu) + sinc_prime_sq_tail(self.half_width - nu))
    }
}

/// Far-field statistics in `μ` with unknown centre `ν`, on the default grid.
pub fn farfield_model(geometry: &SlitGeometry) -> Result<ParametricModel> {
    farfield_model_on(geometry, &FarFieldGrid::default())
}

pub fn farfield_model_on(geometry: &SlitGeometry, config: &FarFieldGrid) -> Result<ParametricModel> {
    let geometry = geometry.validated()?;
    let grid = config.grid()?;
    check_nu(&geometry, config)?;
    Ok(ParametricModel::continuous_grid(
        "slit",
        grid.clone(),
        (-config.nu_range, config.nu_range),
        SincSquared { grid },
    )?
    .with_tail(SincTail {
        half_width: config.half_width,
    }))
}

/// As [`farfield_model_on`] but with `dp/dν` by central differences.
pub fn farfield_model_numeric(geometry: &SlitGeometry, config: &FarFieldGrid) -> Result<ParametricModel> {
    let geometry = geometry.validated()?;
    let grid = config.grid()?;
    check_nu(&geometry, config)?;
    Ok(ParametricModel::continuous_grid(
        "slit-fd",
        grid.clone(),
        (-config.nu_range, config.nu_range),
        SincSquaredNumeric(SincSquared { grid }),
    )?
    .with_tail(SincTail {
        half_width: config.half_width,
    }))
}

fn check_nu(geometry: &SlitGeometry, config: &FarFieldGrid) -> Result<()> {
    if geometry.nu().abs() > config.nu_range {
        return Err(Error::InvalidGeometry(format!(
            "pattern centre nu = {} outside the modelled range ±{}",
            geometry.nu(),
            config.nu_range
        )));
    }
    Ok(())
}

/// Fisher information of the far-field pattern about `ν`; `4/3` for every slit.
pub fn fisher_slit(geometry: &SlitGeometry) -> Result<f64> {
    let model = farfield_model(geometry)?;
    fisher_information(&model, geometry.nu())
}

/// `(Δx)²` of the state behind the slit, by Simpson quadrature of `x²|ψ(x)|²`.
pub fn position_variance(geometry: &SlitGeometry) -> Result<f64> {
    let g = geometry.validated()?;
    let half = 0.5 * g.a;
    let density = |x: f64| {
        let psi = Complex64::from_polar(1.0, g.k_x * x) / g.a.sqrt();
        psi.norm_sqr()
    };
    let mean = simpson(|x| x * density(x), -half, half, 64);
    let second = simpson(|x| x * x * density(x), -half, half, 64);
    Ok(second - mean * mean)
}

/// The Cramér-Rao route to the uncertainty relation for the slit state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyChain {
    /// Fisher information about `ν`, per particle.
    pub fisher_mu: f64,
    /// `1/F`, the bound on `(Δμ)²`.
    pub crb_mu: f64,
    /// The same bound on `(Δp_x)²`.
    pub momentum_bound: f64,
    pub position_variance: f64,
    /// `ħ² / (4 (Δx)²)`.
    pub heisenberg_bound: f64,
    /// `momentum_bound * (Δx)²`; `ħ²/4` when the bound is saturated.
    pub product: f64,
}

pub fn uncertainty_chain(geometry: &SlitGeometry) -> Result<UncertaintyChain> {
    let g = geometry.validated()?;
    let fisher_mu = fisher_slit(&g)?;
    let crb_mu = 1.0 / fisher_mu;
    let momentum_bound = g.momentum_scale_sq() * crb_mu;
    let position_variance = position_variance(&g)?;
    Ok(UncertaintyChain {
        fisher_mu,
        crb_mu,
        momentum_bound,
        position_variance,
        heisenberg_bound: g.hbar * g.hbar / (4.0 * position_variance),
        product: momentum_bound * position_variance,
    })
}

/// `∫_{-W}^{W} μ² sinc²(μ)/π dμ`, which grows without bound (like `W/π`).
pub fn truncated_momentum_variance(window: f64) -> f64 {
    if !(window > 0.0) {
        return 0.0;
    }
    let panels = ((window / 0.005).ceil() as usize).max(16);
    2.0 * simpson(|mu| mu * mu * sinc(mu).powi(2) / PI, 0.0, window, panels)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Position,
    Momentum,
}

/// Out-of-grid integrals of a momentum-space wavefunction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
struct MomentumTail {
    mass: f64,
    /// `∫ ρ'²/ρ`
    fisher: f64,
    /// `∫ |ψ'|²`
    grad_sq: f64,
    /// `∫ Im(ψ* ψ') = ∫ ρ φ'`
    phase_flux: f64,
    /// `∫ ρ φ'²`
    phase_sq: f64,
}

/// A wavefunction sampled on a uniform grid.
///
/// Position samples are in `x`; momentum samples are in `μ`, normalized so
/// that `∫|ψ(μ)|² dμ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlitWavefunction {
    geometry: Option<SlitGeometry>,
    representation: Representation,
    grid: UniformGrid,
    amplitude: Vec<Complex64>,
    tail: Option<MomentumTail>,
}

impl SlitWavefunction {
    /// `exp(i k_x x)/sqrt(a)` on `|x| <= a/2` (odd `points` for Simpson).
    pub fn position(geometry: &SlitGeometry, points: usize) -> Result<Self> {
        let g = geometry.validated()?;
        let grid = UniformGrid::symmetric(0.5 * g.a, points | 1)?;
        let amplitude = grid
            .points()
            .map(|x| Complex64::from_polar(1.0 / g.a.sqrt(), g.k_x * x))
            .collect();
        Ok(Self {
            geometry: Some(g),
            representation: Representation::Position,
            grid,
            amplitude,
            tail: None,
        })
    }

    /// `sinc(μ - ν)/sqrt(π)` on the default far-field grid.
    pub fn momentum(geometry: &SlitGeometry) -> Result<Self> {
        let c = FarFieldGrid::default();
        Self::momentum_on(geometry, UniformGrid::symmetric(c.half_width, c.points)?)
    }

    pub fn momentum_on(geometry: &SlitGeometry, grid: UniformGrid) -> Result<Self> {
        let g = geometry.validated()?;
        let nu = g.nu();
        let below = -grid.start() + nu;
        let above = grid.end() - nu;
        if below.min(above) < MIN_TAIL_DISTANCE {
            return Err(Error::InvalidGeometry(format!(
                "grid [{}, {}] too narrow for nu = {nu}",
                grid.start(),
                grid.end()
            )));
        }
        let amplitude = grid
            .points()
            .map(|mu| Complex64::new(sinc(mu - nu) / PI.sqrt(), 0.0))
            .collect();
        let grad = (sinc_prime_sq_tail(below) + sinc_prime_sq_tail(above)) / PI;
        let tail = MomentumTail {
            mass: (sinc_sq_tail(below) + sinc_sq_tail(above)) / PI,
            fisher: 4.0 * grad,
            grad_sq: grad,
            phase_flux: 0.0,
            phase_sq: 0.0,
        };
        Ok(Self {
            geometry: Some(g),
            representation: Representation::Momentum,
            grid,
            amplitude,
            tail: Some(tail),
        })
    }

    /// Arbitrary samples; integrals are taken over the grid only.
    pub fn from_samples(representation: Representation, grid: UniformGrid, amplitude: Vec<Complex64>) -> Result<Self> {
        if amplitude.len() != grid.len() {
            return Err(Error::InvalidModel(format!(
                "{} samples on a {}-point grid",
                amplitude.len(),
                grid.len()
            )));
        }
        Ok(Self {
            geometry: None,
            representation,
            grid,
            amplitude,
            tail: None,
        })
    }

    pub fn from_fn(representation: Representation, grid: UniformGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let amplitude = grid.points().map(f).collect();
        Self {
            geometry: None,
            representation,
            grid,
            amplitude,
            tail: None,
        }
    }

    /// Multiplies by `exp(i(α + βμ))` (in momentum space: a position shift by `-β`).
    pub fn with_linear_phase(mut self, alpha: f64, beta: f64) -> Self {
        for (psi, x) in self.amplitude.iter_mut().zip(self.grid.points()) {
            *psi *= Complex64::from_polar(1.0, alpha + beta * x);
        }
        if let Some(t) = &mut self.tail {
            // ψ' -> ψ' + iβψ
            let flux = t.phase_flux;
            t.grad_sq += 2.0 * beta * flux + beta * beta * t.mass;
            t.phase_sq += 2.0 * beta * flux + beta * beta * t.mass;
            t.phase_flux += beta * t.mass;
        }
        self
    }

    pub fn geometry(&self) -> Option<&SlitGeometry> {
        self.geometry.as_ref()
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    pub fn density(&self) -> Vec<f64> {
        self.amplitude.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `∫|ψ|²`, including any analytic out-of-grid part.
    pub fn norm(&self) -> f64 {
        self.grid.trapezoid(&self.density()) + self.tail.map_or(0.0, |t| t.mass)
    }

    /// Momentum amplitude `(2π)^{-1/2} ∫ ψ(ξ̃) e^{-iμξ̃} dξ̃` of a position-space
    /// state, with `ξ̃ = 2x/a`, by Simpson quadrature at each point of `grid`.
    pub fn momentum_from_position(&self, grid: UniformGrid) -> Result<Self> {
        let g = match (self.representation, self.geometry) {
            (Representation::Position, Some(g)) => g,
            _ => {
                return Err(Error::InvalidModel(
                    "needs a position-space slit wavefunction".into(),
                ))
            }
        };
        let n = self.grid.len();
        if n.is_multiple_of(2) {
            return Err(Error::InvalidModel("position grid needs an odd number of points".into()));
        }
        let h = 2.0 * self.grid.step() / g.a;
        let scale = (0.5 * g.a).sqrt() / (2.0 * PI).sqrt();
        let xi: Vec<f64> = self.grid.points().map(|x| 2.0 * x / g.a).collect();
        let amplitude = grid
            .points()
            .map(|mu| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, (psi, x)) in self.amplitude.iter().zip(&xi).enumerate() {
                    let w = if i == 0 || i == n - 1 {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    acc += w * psi * Complex64::from_polar(1.0, -mu * x);
                }
                acc * (h / 3.0) * scale
            })
            .collect();
        Ok(Self {
            geometry: Some(g),
            representation: Representation::Momentum,
            grid,
            amplitude,
            tail: None,
        })
    }
}

/// `F_p` of a momentum-space wavefunction and its decomposition into the
/// position variance and the phase-gradient term.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionFisher {
    /// `∫ (dρ/dμ)² / ρ dμ` with `ρ = |ψ|²`, from differences of `ρ`.
    pub fisher: f64,
    /// `4 ⟨(Δξ̃)²⟩`.
    pub variance_term: f64,
    /// `4 ∫ ρ (φ' + ξ̄)²` with `φ = arg ψ`; zero for minimum-uncertainty states.
    pub phase_term: f64,
    /// `⟨ξ̃⟩`, the mean position in units of `a/2`.
    pub mean_position: f64,
}

impl WavefunctionFisher {
    /// `|F - (V - P)| / F`.
    pub fn decomposition_error(&self) -> f64 {
        (self.fisher - (self.variance_term - self.phase_term)).abs() / self.fisher
    }
}

/// Computes `F_p` directly and through `F_p = 4⟨(Δξ̃)²⟩ - 4∫ρ(φ' + ξ̄)²`.
///
/// Points with `ρ <= SUPPORT_EPS` are skipped in all three integrals. The
/// phase must be resolved by the grid: inside the support, a step of more than
/// π/2 between neighbours is only accepted at a node (where the amplitude
/// passes through zero between the two samples).
pub fn fisher_from_wavefunction(psi: &SlitWavefunction) -> Result<WavefunctionFisher> {
    if psi.representation != Representation::Momentum {
        return Err(Error::InvalidModel("expected a momentum-space wavefunction".into()));
    }
    let grid = &psi.grid;
    let amp = &psi.amplitude;
    let rho = psi.density();
    check_phase_resolved(amp, &rho)?;

    let drho = grid.derivative_fourth_order(&rho);
    let re: Vec<f64> = amp.iter().map(|z| z.re).collect();
    let im: Vec<f64> = amp.iter().map(|z| z.im).collect();
    let dre = grid.derivative_fourth_order(&re);
    let dim = grid.derivative_fourth_order(&im);

    let tail = psi.tail.unwrap_or_default();
    let mut norm = tail.mass;
    let mut fisher = tail.fisher;
    let mut grad_sq = tail.grad_sq;
    let mut flux = tail.phase_flux;
    let mut phase_sq = tail.phase_sq;
    for i in 0..grid.len() {
        if rho[i] <= SUPPORT_EPS {
            continue;
        }
        let w = grid.weight(i);
        let dpsi = Complex64::new(dre[i], dim[i]);
        // Im(ψ* ψ') = ρ φ'
        let j = (amp[i].conj() * dpsi).im;
        norm += w * rho[i];
        fisher += w * drho[i] * drho[i] / rho[i];
        grad_sq += w * dpsi.norm_sqr();
        flux += w * j;
        phase_sq += w * j * j / rho[i];
    }
    // ξ̃ = i d/dμ, so ⟨ξ̃⟩ = -∫ρφ'
    let mean = -flux / norm;
    let variance = grad_sq / norm - mean * mean;
    // ∫ρ(φ' + ξ̄)² = ∫ρφ'² + 2ξ̄∫ρφ' + ξ̄²∫ρ
    let phase = phase_sq / norm + 2.0 * mean * flux / norm + mean * mean;
    Ok(WavefunctionFisher {
        fisher: fisher / norm,
        variance_term: 4.0 * variance,
        phase_term: 4.0 * phase,
        mean_position: mean,
    })
}

fn check_phase_resolved(amp: &[Complex64], rho: &[f64]) -> Result<()> {
    for i in 0..amp.len().saturating_sub(1) {
        if rho[i] <= SUPPORT_EPS || rho[i + 1] <= SUPPORT_EPS {
            continue;
        }
        let (p, q) = (amp[i], amp[i + 1]);
        let jump = (q * p.conj()).arg();
        if jump.abs() <= 0.5 * PI {
            continue;
        }
        // distance from the origin to the chord p -> q
        let d = q - p;
        let t = (-(p.re * d.re + p.im * d.im) / d.norm_sqr()).clamp(0.0, 1.0);
        let closest = (p + d * t).norm();
        if closest > 0.1 * p.norm().max(q.norm()) {
            return Err(Error::PhaseUnwrapFailure { index: i, jump });
        }
    }
    Ok(())
}
