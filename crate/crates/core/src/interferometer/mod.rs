//! Mach-Zehnder phase estimation with Fock-state inputs.
//!
//! Two input ports holding `n1` and `n2` particles form the state `|j, m⟩`
//! with `j = (n1 + n2)/2` and `m = (n1 - n2)/2`. The interferometer acts as
//! `e^{-iφJ₂}` and the output ports measure `J₃`, so outcome `k` has
//! probability `d^j_{k,m}(φ)²`.

mod posterior;
mod su2;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::special::bessel_j;
use crate::stats::{Family, ParametricModel};

pub use posterior::{Posterior, DEFAULT_POSTERIOR_POINTS, DEFAULT_WINDOW, ZERO_POSTERIOR};
pub use su2::{
    build_rep, build_rep_capped, mz_transform_check, twice, wigner_column, wigner_column_with_derivative, wigner_d,
    wigner_d_capped, AngularMomentumRep, WignerRotation, DEFAULT_DIM_CAP,
};

/// Particle numbers at the two input ports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockInput {
    pub n1: u32,
    pub n2: u32,
}

impl FockInput {
    pub fn new(n1: u32, n2: u32) -> Result<Self> {
        if n1 == 0 && n2 == 0 {
            return Err(Error::InvalidInput("at least one particle is required".into()));
        }
        Ok(Self { n1, n2 })
    }

    /// `n1 = n2 = j`, the balanced input with `m = 0`.
    pub fn balanced(j: u32) -> Result<Self> {
        Self::new(j, j)
    }

    pub fn from_spin(j: f64, m: f64) -> Result<Self> {
        su2::twice(j)?;
        su2::check_projection(j, m)?;
        Self::new((j + m) as u32, (j - m) as u32)
    }

    pub fn j(&self) -> f64 {
        f64::from(self.n1 + self.n2) / 2.0
    }

    pub fn m(&self) -> f64 {
        (f64::from(self.n1) - f64::from(self.n2)) / 2.0
    }

    /// Total particle number `N = 2j`.
    pub fn total(&self) -> u32 {
        self.n1 + self.n2
    }

    /// Outcome values `k = j, j-1, …, -j` in index order.
    pub fn outcomes(&self) -> Vec<f64> {
        let j = self.j();
        (0..=self.total()).map(|i| j - f64::from(i)).collect()
    }

    /// Index of outcome `k`, if it is one.
    pub fn outcome_index(&self, k: f64) -> Option<usize> {
        let offset = self.j() - k;
        (offset >= 0.0 && offset.fract() == 0.0 && offset <= f64::from(self.total())).then_some(offset as usize)
    }

    fn casimir(&self) -> f64 {
        let j = self.j();
        j * (j + 1.0)
    }
}

/// `p_k(φ)` for `k = j…-j`.
pub fn outcome_distribution(input: &FockInput, phi: f64) -> Result<Vec<f64>> {
    Ok(wigner_column(input.j(), input.m(), phi)?
        .into_iter()
        .map(|c| c * c)
        .collect())
}

struct PhaseFamily {
    j: f64,
    m: f64,
}

impl Family for PhaseFamily {
    fn values(&self, phi: f64) -> Vec<f64> {
        wigner_column(self.j, self.m, phi)
            .expect("validated at construction")
            .into_iter()
            .map(|c| c * c)
            .collect()
    }

    fn derivatives(&self, phi: f64) -> Option<Vec<f64>> {
        let (c, dc) = wigner_column_with_derivative(self.j, self.m, phi).expect("validated at construction");
        Some(c.iter().zip(&dc).map(|(a, b)| 2.0 * a * b).collect())
    }
}

/// Outcome statistics as a model in `φ`.
///
/// `p_k(-φ) = p_k(φ)`, so the phase is only identifiable up to sign and the
/// domain is `[0, π]`.
pub fn phase_model(input: &FockInput) -> Result<ParametricModel> {
    let (j, m) = (input.j(), input.m());
    wigner_column(j, m, 0.0)?;
    let labels = input.outcomes().iter().map(|k| format!("k={k}")).collect();
    ParametricModel::discrete("mz", labels, (0.0, PI), PhaseFamily { j, m })
}

/// `⟨J₃⟩` and `⟨J₃²⟩` in the output state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean_j3: f64,
    pub mean_j3_sq: f64,
}

impl Moments {
    pub fn variance(&self) -> f64 {
        self.mean_j3_sq - self.mean_j3 * self.mean_j3
    }
}

pub fn moments(input: &FockInput, phi: f64) -> Moments {
    let m = input.m();
    let (s, c) = phi.sin_cos();
    Moments {
        mean_j3: m * c,
        mean_j3_sq: m * m * c * c + 0.5 * (input.casimir() - m * m) * s * s,
    }
}

/// Result of linear error propagation, which breaks down for `m = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum LinearizedError {
    Value(f64),
    Undefined,
}

impl LinearizedError {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Self::Value(v) => Some(v),
            Self::Undefined => None,
        }
    }
}

impl fmt::Display for LinearizedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Value(v) => write!(f, "{v}"),
            Self::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for LinearizedError {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Self::Value(v) => s.serialize_f64(v),
            Self::Undefined => s.serialize_str("undefined"),
        }
    }
}

/// `ΔJ₃ / |d⟨J₃⟩/dφ|`.
///
/// Both numerator and denominator carry a factor `|sin φ|`, so the ratio is
/// `√((j(j+1) - m²)/2) / |m|` at every `φ`, including the `φ → 0` limit.
pub fn linearized_phase_error(input: &FockInput, phi: f64) -> LinearizedError {
    let m = input.m();
    if m == 0.0 {
        return LinearizedError::Undefined;
    }
    let s = phi.sin();
    if s.abs() < 1e-8 {
        return LinearizedError::Value((0.5 * (input.casimir() - m * m)).sqrt() / m.abs());
    }
    let spread = moments(input, phi).variance().max(0.0).sqrt();
    LinearizedError::Value(spread / (m * s).abs())
}

/// Fisher information about `φ` at the working point `φ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseFisher {
    /// `2(j(j+1) - m²)`.
    pub closed_form: f64,
    /// `-2 p_m''(0)` by a central second difference.
    pub finite_difference: f64,
}

impl PhaseFisher {
    pub fn relative_gap(&self) -> f64 {
        (self.closed_form - self.finite_difference).abs() / self.closed_form
    }

    /// `1/F₀`, the single-shot bound on `(Δφ)²`.
    pub fn crb(&self) -> f64 {
        1.0 / self.closed_form
    }
}

/// Step of the second difference in [`fisher_phase_at_zero`].
pub const CURVATURE_STEP: f64 = 1e-4;

/// At `φ = 0` every `p_k` except `p_m` vanishes and the Fisher sum is 0/0;
/// its limit is `-2 p_m''(0)`, which this evaluates both exactly and by a
/// second difference of the computed `p_m`.
pub fn fisher_phase_at_zero(input: &FockInput) -> Result<PhaseFisher> {
    let (j, m) = (input.j(), input.m());
    let idx = (j - m) as usize;
    let p = |phi: f64| -> Result<f64> { Ok(wigner_column(j, m, phi)?[idx].powi(2)) };
    let h = CURVATURE_STEP;
    let second = (p(h)? - 2.0 * p(0.0)? + p(-h)?) / (h * h);
    Ok(PhaseFisher {
        closed_form: 2.0 * (input.casimir() - m * m),
        finite_difference: -2.0 * second,
    })
}

/// `J_m(φ j)²`, the small-angle large-`j` form of `p_m(φ)` (integer `m`).
pub fn bessel_likelihood(j: f64, m: i32, phi: f64) -> f64 {
    bessel_j(m, phi * j).powi(2)
}

/// Predicted phase variance `4n / N_tot²` after `n` balanced shots of
/// `N = 2j` particles each (`N_tot = nN`).
pub fn resource_scaling(j: f64, n_repeats: u32) -> f64 {
    let n = f64::from(n_repeats);
    let total = 2.0 * j * n;
    4.0 * n / (total * total)
}
