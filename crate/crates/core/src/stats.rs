//! Parametric statistical models, likelihood, Fisher information, the
//! Cramér-Rao bound and maximum-likelihood estimation.
//!
//! A [`ParametricModel`] is either a finite set of outcomes with probabilities
//! `p_x(θ)` or a density sampled on a [`UniformGrid`], in which case integrals
//! use the trapezoid rule. Grid models may declare a [`GridTail`]: the mass the
//! density puts beyond both ends of the grid. The two tail regions then become
//! extra "overflow" outcomes (indices `grid.len()` and `grid.len() + 1`) so that
//! data and sampling still see a normalized distribution, and the Fisher
//! information includes what those regions would carry if resolved.
//!
//! Log-likelihoods are defined up to an additive constant: for grid outcomes the
//! density value stands in for the cell probability.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::UniformGrid;

/// Outcomes with `p_x <= SUPPORT_EPS` are left out of Fisher sums.
pub const SUPPORT_EPS: f64 = 1e-14;
/// Central-difference step used when a family has no analytic derivative.
pub const FD_STEP: f64 = 1e-5;
/// Points in the coarse likelihood scan of [`mle`].
pub const SCAN_POINTS: usize = 201;
/// Golden-section bracket width at which [`mle`] stops.
pub const GOLDEN_TOL: f64 = 1e-8;
/// Minimum spread of the scanned log-likelihood for [`mle`] to proceed.
pub const FLAT_SPREAD: f64 = 1e-12;
/// Half-width of the neighbourhood fitted by [`quadratic_expansion_check`].
pub const EXPANSION_RADIUS: f64 = 0.01;

/// The θ-dependence of a model: one value per outcome (a probability for
/// discrete models, a density sample for grid models).
pub trait Family: Send + Sync {
    fn values(&self, theta: f64) -> Vec<f64>;

    /// Analytic `d/dθ` of [`Family::values`], if available.
    fn derivatives(&self, _theta: f64) -> Option<Vec<f64>> {
        None
    }

    /// A single value. Override when cheaper than computing all of them.
    fn value(&self, theta: f64, outcome: usize) -> f64 {
        self.values(theta)[outcome]
    }
}

/// Probability carried by a grid model beyond the ends of its grid.
pub trait GridTail: Send + Sync {
    /// Mass below the grid and above the grid.
    fn mass(&self, theta: f64) -> [f64; 2];
    fn mass_derivative(&self, theta: f64) -> [f64; 2];
    /// Fisher information of the out-of-grid region with positions resolved.
    fn fisher(&self, theta: f64) -> f64;
}

type ValuesFn = dyn Fn(f64) -> Vec<f64> + Send + Sync;

/// A [`Family`] built from closures.
pub struct FnFamily {
    values: Box<ValuesFn>,
    derivatives: Option<Box<ValuesFn>>,
}

impl FnFamily {
    pub fn new(values: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Self {
            values: Box::new(values),
            derivatives: None,
        }
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.derivatives = Some(Box::new(d));
        self
    }
}

impl Family for FnFamily {
    fn values(&self, theta: f64) -> Vec<f64> {
        (self.values)(theta)
    }

    fn derivatives(&self, theta: f64) -> Option<Vec<f64>> {
        self.derivatives.as_ref().map(|d| d(theta))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Discrete,
    ContinuousGrid,
}

#[derive(Clone)]
enum Outcomes {
    Discrete(Vec<String>),
    Grid {
        grid: UniformGrid,
        tail: Option<Arc<dyn GridTail>>,
    },
}

#[derive(Clone)]
pub struct ParametricModel {
    name: String,
    outcomes: Outcomes,
    family: Arc<dyn Family>,
    domain: (f64, f64),
}

impl fmt::Debug for ParametricModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("ParametricModel");
        s.field("name", &self.name).field("kind", &self.kind());
        match &self.outcomes {
            Outcomes::Discrete(labels) => s.field("outcomes", labels),
            Outcomes::Grid { grid, tail } => s.field("grid", grid).field("tail", &tail.is_some()),
        };
        s.field("theta_domain", &self.domain).finish()
    }
}

fn check_domain(domain: (f64, f64)) -> Result<()> {
    if domain.0.is_finite() && domain.1.is_finite() && domain.1 > domain.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "theta domain [{}, {}] is empty or infinite",
            domain.0, domain.1
        )))
    }
}

impl ParametricModel {
    pub fn discrete(
        name: impl Into<String>,
        labels: Vec<String>,
        theta_domain: (f64, f64),
        family: impl Family + 'static,
    ) -> Result<Self> {
        check_domain(theta_domain)?;
        if labels.is_empty() {
            return Err(Error::InvalidModel("no outcomes".into()));
        }
        Ok(Self {
            name: name.into(),
            outcomes: Outcomes::Discrete(labels),
            family: Arc::new(family),
            domain: theta_domain,
        })
    }

    pub fn continuous_grid(
        name: impl Into<String>,
        grid: UniformGrid,
        theta_domain: (f64, f64),
        family: impl Family + 'static,
    ) -> Result<Self> {
        check_domain(theta_domain)?;
        Ok(Self {
            name: name.into(),
            outcomes: Outcomes::Grid { grid, tail: None },
            family: Arc::new(family),
            domain: theta_domain,
        })
    }

    /// Declares the mass beyond the grid. No effect on discrete models.
    pub fn with_tail(mut self, tail: impl GridTail + 'static) -> Self {
        if let Outcomes::Grid { tail: slot, .. } = &mut self.outcomes {
            *slot = Some(Arc::new(tail));
        }
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModelKind {
        match self.outcomes {
            Outcomes::Discrete(_) => ModelKind::Discrete,
            Outcomes::Grid { .. } => ModelKind::ContinuousGrid,
        }
    }

    pub fn theta_domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn grid(&self) -> Option<&UniformGrid> {
        match &self.outcomes {
            Outcomes::Grid { grid, .. } => Some(grid),
            Outcomes::Discrete(_) => None,
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        match &self.outcomes {
            Outcomes::Discrete(labels) => Some(labels),
            Outcomes::Grid { .. } => None,
        }
    }

    fn tail(&self) -> Option<&dyn GridTail> {
        match &self.outcomes {
            Outcomes::Grid { tail: Some(t), .. } => Some(t.as_ref()),
            _ => None,
        }
    }

    pub fn has_tail(&self) -> bool {
        self.tail().is_some()
    }

    /// Outcomes from the family (discrete outcomes or grid points).
    fn core_count(&self) -> usize {
        match &self.outcomes {
            Outcomes::Discrete(labels) => labels.len(),
            Outcomes::Grid { grid, .. } => grid.len(),
        }
    }

    /// Number of outcomes data must be aligned with, overflow outcomes included.
    pub fn outcome_count(&self) -> usize {
        self.core_count() + if self.has_tail() { 2 } else { 0 }
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.domain.0 && theta <= self.domain.1
    }

    fn require_domain(&self, theta: f64) -> Result<()> {
        if self.contains(theta) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                theta,
                lo: self.domain.0,
                hi: self.domain.1,
            })
        }
    }

    /// Quadrature weight of outcome `x`: 1 for discrete and overflow outcomes,
    /// the trapezoid weight for grid points.
    pub fn weight(&self, x: usize) -> f64 {
        match &self.outcomes {
            Outcomes::Grid { grid, .. } if x < grid.len() => grid.weight(x),
            _ => 1.0,
        }
    }

    /// Per-outcome values `p_x(θ)`; overflow outcomes hold the tail masses.
    pub fn values(&self, theta: f64) -> Vec<f64> {
        let mut v = self.family.values(theta);
        if let Some(tail) = self.tail() {
            v.extend_from_slice(&tail.mass(theta));
        }
        v
    }

    pub fn value(&self, theta: f64, x: usize) -> f64 {
        let core = self.core_count();
        if x < core {
            self.family.value(theta, x)
        } else {
            self.tail().map_or(0.0, |t| t.mass(theta)[x - core])
        }
    }

    /// `p'_x(θ)`: analytic when the family supplies it, otherwise a central
    /// difference with step [`FD_STEP`].
    pub fn derivatives(&self, theta: f64) -> Vec<f64> {
        let mut d = self.family.derivatives(theta).unwrap_or_else(|| {
            let up = self.family.values(theta + FD_STEP);
            let down = self.family.values(theta - FD_STEP);
            up.iter().zip(&down).map(|(u, d)| (u - d) / (2.0 * FD_STEP)).collect()
        });
        if let Some(tail) = self.tail() {
            d.extend_from_slice(&tail.mass_derivative(theta));
        }
        d
    }

    /// Probability of each outcome (value times quadrature weight).
    pub fn cell_masses(&self, theta: f64) -> Vec<f64> {
        self.values(theta)
            .into_iter()
            .enumerate()
            .map(|(x, v)| v * self.weight(x))
            .collect()
    }

    /// Total probability at θ; 1 for a valid model.
    pub fn normalization(&self, theta: f64) -> f64 {
        self.cell_masses(theta).iter().sum()
    }

    /// Total derivative `sum_x p'_x(θ)`; 0 for a valid model.
    pub fn derivative_sum(&self, theta: f64) -> f64 {
        self.derivatives(theta)
            .iter()
            .enumerate()
            .map(|(x, d)| d * self.weight(x))
            .sum()
    }

    /// Checks non-negativity, normalization and the derivative of normalization.
    pub fn validate_at(&self, theta: f64) -> Result<()> {
        self.require_domain(theta)?;
        let values = self.values(theta);
        if let Some(x) = values.iter().position(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidModel(format!(
                "negative or NaN probability {} at outcome {x}, theta = {theta}",
                values[x]
            )));
        }
        let tol = match self.kind() {
            ModelKind::Discrete => 1e-10,
            ModelKind::ContinuousGrid => 1e-8,
        };
        let norm = self.normalization(theta);
        if (norm - 1.0).abs() > tol {
            return Err(Error::InvalidModel(format!(
                "normalization {norm} at theta = {theta}"
            )));
        }
        let dsum = self.derivative_sum(theta);
        if dsum.abs() > 1e-8 {
            return Err(Error::InvalidModel(format!(
                "derivatives sum to {dsum:e} at theta = {theta}"
            )));
        }
        Ok(())
    }
}

/// Outcome counts aligned with a model's outcomes.
///
/// Counts are stored as `f64` so that expected counts `n p_x(θ)` can be used
/// in place of data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataSet {
    counts: Vec<f64>,
}

impl DataSet {
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        Self::from_weights(counts.iter().map(|&c| c as f64).collect())
    }

    pub fn from_weights(counts: Vec<f64>) -> Result<Self> {
        if counts.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidData);
        }
        let data = Self { counts };
        if data.total() <= 0.0 {
            return Err(Error::InvalidData);
        }
        Ok(data)
    }

    /// Expected counts `n * P(x | θ)`.
    pub fn expected(model: &ParametricModel, theta: f64, n: f64) -> Result<Self> {
        model.require_domain(theta)?;
        Self::from_weights(model.cell_masses(theta).into_iter().map(|m| n * m).collect())
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    /// `(outcome, count)` for every observed outcome.
    pub fn observed(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.counts.iter().copied().enumerate().filter(|&(_, c)| c > 0.0)
    }

    fn aligned(&self, model: &ParametricModel) -> Result<()> {
        if self.counts.len() == model.outcome_count() {
            Ok(())
        } else {
            Err(Error::DataMismatch {
                expected: model.outcome_count(),
                got: self.counts.len(),
            })
        }
    }
}

/// Result of [`mle`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub theta_hat: f64,
    /// Asymptotic variance, set to the Cramér-Rao bound.
    pub variance: f64,
    /// Fisher information per particle at `theta_hat`.
    pub fisher: f64,
    pub crb: f64,
    pub log_likelihood: f64,
}

/// `sum_x n_x ln p_x(θ)`; unobserved outcomes contribute nothing even where
/// `p_x = 0`.
pub fn log_likelihood(model: &ParametricModel, data: &DataSet, theta: f64) -> Result<f64> {
    data.aligned(model)?;
    Observed::new(model, data).log_likelihood(theta)
}

/// Observed outcomes gathered once, for repeated likelihood evaluation.
struct Observed<'a> {
    model: &'a ParametricModel,
    pairs: Vec<(usize, f64)>,
    pointwise: bool,
}

impl<'a> Observed<'a> {
    fn new(model: &'a ParametricModel, data: &DataSet) -> Self {
        let pairs: Vec<_> = data.observed().collect();
        let pointwise = pairs.len() * 8 < model.outcome_count();
        Self { model, pairs, pointwise }
    }

    fn log_likelihood(&self, theta: f64) -> Result<f64> {
        self.model.require_domain(theta)?;
        let mut total = 0.0;
        if self.pointwise {
            for &(x, n) in &self.pairs {
                total += term(n, self.model.value(theta, x), theta, x)?;
            }
        } else {
            let values = self.model.values(theta);
            for &(x, n) in &self.pairs {
                total += term(n, values[x], theta, x)?;
            }
        }
        Ok(total)
    }
}

fn term(n: f64, p: f64, theta: f64, outcome: usize) -> Result<f64> {
    if p > 0.0 {
        Ok(n * p.ln())
    } else {
        Err(Error::NonFiniteLikelihood { theta, outcome })
    }
}

/// Fisher information per particle, `sum_x p'_x^2 / p_x` over outcomes with
/// `p_x > SUPPORT_EPS` (a trapezoid integral on grids, plus the resolved tail).
pub fn fisher_information(model: &ParametricModel, theta: f64) -> Result<f64> {
    model.require_domain(theta)?;
    let core = model.core_count();
    let values = model.family.values(theta);
    let derivs = model.derivatives(theta);
    let mut support = 0usize;
    let mut fisher = 0.0;
    for x in 0..core {
        let p = values[x];
        if p > SUPPORT_EPS {
            support += 1;
            fisher += model.weight(x) * derivs[x] * derivs[x] / p;
        }
    }
    if let Some(tail) = model.tail() {
        support += tail.mass(theta).iter().filter(|&&m| m > SUPPORT_EPS).count();
        fisher += tail.fisher(theta);
    }
    if support < 2 {
        return Err(Error::DegenerateModel { theta, support });
    }
    Ok(fisher)
}

/// Cramér-Rao bound `1 / (n F(θ))` for `n` independent particles.
pub fn crb(model: &ParametricModel, theta: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidData);
    }
    Ok(1.0 / (n as f64 * fisher_information(model, theta)?))
}

/// Maximum-likelihood estimate over the model's θ domain.
///
/// A [`SCAN_POINTS`]-point scan locates the best grid value (ties go to the
/// smallest θ); golden-section search then refines within one scan step on
/// either side to [`GOLDEN_TOL`].
pub fn mle(model: &ParametricModel, data: &DataSet) -> Result<Estimate> {
    let (theta_hat, ll) = maximize_likelihood(model, data)?;
    let fisher = fisher_information(model, theta_hat)?;
    let n = data.total();
    let crb = 1.0 / (n * fisher);
    Ok(Estimate {
        theta_hat,
        variance: crb,
        fisher,
        crb,
        log_likelihood: ll,
    })
}

/// The argmax of [`mle`] and the log-likelihood there.
pub(crate) fn maximize_likelihood(model: &ParametricModel, data: &DataSet) -> Result<(f64, f64)> {
    data.aligned(model)?;
    let (lo, hi) = model.domain;
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let observed = Observed::new(model, data);
    let eval = |theta: f64| observed.log_likelihood(theta).unwrap_or(f64::NEG_INFINITY);

    let mut best = (0usize, f64::NEG_INFINITY);
    let mut lowest = f64::INFINITY;
    let mut first_err = None;
    for i in 0..SCAN_POINTS {
        let theta = if i + 1 == SCAN_POINTS { hi } else { lo + i as f64 * step };
        let ll = match observed.log_likelihood(theta) {
            Ok(v) => v,
            Err(e) => {
                first_err.get_or_insert(e);
                f64::NEG_INFINITY
            }
        };
        if ll > best.1 {
            best = (i, ll);
        }
        lowest = lowest.min(ll);
    }
    if best.1 == f64::NEG_INFINITY {
        return Err(first_err.unwrap_or(Error::InvalidData));
    }
    let spread = best.1 - lowest;
    if spread < FLAT_SPREAD {
        return Err(Error::FlatLikelihood { spread });
    }

    let centre = lo + best.0 as f64 * step;
    let a = (centre - step).max(lo);
    let b = (centre + step).min(hi);
    let (refined, refined_ll) = golden_section_max(eval, a, b, GOLDEN_TOL);
    let (theta_hat, ll) = if refined_ll > best.1 {
        (refined, refined_ll)
    } else {
        (centre.clamp(lo, hi), best.1)
    };
    Ok((theta_hat, ll))
}

/// Points per pass of [`posterior_mean`].
pub const POSTERIOR_POINTS: usize = 2001;

/// Posterior mean of θ under a flat prior on the model's domain.
///
/// A first pass over the whole domain finds where the log-likelihood is within
/// 50 of its maximum; the mean is then taken by trapezoid on a second grid
/// spanning that region, so narrow posteriors are still resolved.
pub fn posterior_mean(model: &ParametricModel, data: &DataSet) -> Result<f64> {
    data.aligned(model)?;
    let observed = Observed::new(model, data);
    let (lo, hi) = model.domain;
    let coarse = UniformGrid::new(lo, hi, POSTERIOR_POINTS)?;
    let ll: Vec<f64> = coarse
        .points()
        .map(|t| observed.log_likelihood(t).unwrap_or(f64::NEG_INFINITY))
        .collect();
    let peak = ll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return Err(observed.log_likelihood(0.5 * (lo + hi)).err().unwrap_or(Error::InvalidData));
    }
    let live = |v: f64| v > peak - 50.0;
    let first = ll.iter().position(|&v| live(v)).unwrap_or(0);
    let last = ll.iter().rposition(|&v| live(v)).unwrap_or(ll.len() - 1);
    let a = coarse.point(first.saturating_sub(1));
    let b = coarse.point((last + 1).min(ll.len() - 1));

    let fine = UniformGrid::new(a, b, POSTERIOR_POINTS)?;
    let ll: Vec<f64> = fine
        .points()
        .map(|t| observed.log_likelihood(t).unwrap_or(f64::NEG_INFINITY))
        .collect();
    let peak = ll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = ll.iter().map(|v| (v - peak).exp()).collect();
    let first_moment: Vec<f64> = fine.points().zip(&weights).map(|(t, w)| t * w).collect();
    Ok(fine.trapezoid(&first_moment) / fine.trapezoid(&weights))
}

/// Maximizes `f` on `[a, b]`; returns the argmax and its value.
pub(crate) fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        // >= keeps the left bracket on ties
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |acc, cand| if cand.1 > acc.1 { cand } else { acc })
}

/// Second-order check of the large-sample likelihood expansion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCheck {
    /// `-2 c2 / n`, from the parabola `c0 + c1 t + c2 t^2` fitted to
    /// `n sum_x p_x(θ̄) ln p_x(θ̄ + t)`.
    pub curvature: f64,
    /// `-2 c2`, i.e. `n F` for a correct expansion.
    pub total_curvature: f64,
    pub fisher: f64,
}

impl ExpansionCheck {
    pub fn relative_gap(&self) -> f64 {
        (self.curvature - self.fisher).abs() / self.fisher
    }
}

/// Fits a parabola by least squares to `θ ↦ n sum_x p_x(θ̄) ln p_x(θ)` at five
/// points spaced over `θ̄ ± EXPANSION_RADIUS` and compares the curvature with
/// the Fisher information. The two agree within 1% for a regular model.
pub fn quadratic_expansion_check(model: &ParametricModel, theta_true: f64, n: u64) -> Result<ExpansionCheck> {
    let fisher = fisher_information(model, theta_true)?;
    let n = n.max(1) as f64;
    let masses = model.cell_masses(theta_true);
    let offsets = [-1.0, -0.5, 0.0, 0.5, 1.0].map(|s| s * EXPANSION_RADIUS);
    let mut ys = [0.0; 5];
    for (y, &t) in ys.iter_mut().zip(&offsets) {
        let theta = theta_true + t;
        model.require_domain(theta)?;
        let values = model.values(theta);
        let mut acc = 0.0;
        for (x, &m) in masses.iter().enumerate() {
            if m / model.weight(x) <= SUPPORT_EPS {
                continue;
            }
            acc += term(m, values[x], theta, x)?;
        }
        *y = n * acc;
    }
    // the design is symmetric, so the quadratic coefficient decouples from
    // the linear one after centring t^2
    let mean_sq = offsets.iter().map(|t| t * t).sum::<f64>() / 5.0;
    let (num, den) = offsets.iter().zip(&ys).fold((0.0, 0.0), |(num, den), (t, y)| {
        let u = t * t - mean_sq;
        (num + u * y, den + u * u)
    });
    let c2 = num / den;
    Ok(ExpansionCheck {
        curvature: -2.0 * c2 / n,
        total_curvature: -2.0 * c2,
        fisher,
    })
}

/// Reference models.
pub mod models {
    use super::*;

    /// Two outcomes with probabilities `(θ, 1 - θ)`, θ in `[0, 1]`.
    pub fn bernoulli() -> ParametricModel {
        let family = FnFamily::new(|t| vec![t, 1.0 - t]).with_derivative(|_| vec![1.0, -1.0]);
        ParametricModel::discrete(
            "bernoulli",
            vec!["first".into(), "second".into()],
            (0.0, 1.0),
            family,
        )
        .expect("static model")
    }

    struct GaussianLocation {
        grid: UniformGrid,
        sigma: f64,
    }

    impl GaussianLocation {
        fn density(&self, x: f64, theta: f64) -> f64 {
            let z = (x - theta) / self.sigma;
            (-0.5 * z * z).exp() / (self.sigma * (2.0 * std::f64::consts::PI).sqrt())
        }
    }

    impl Family for GaussianLocation {
        fn values(&self, theta: f64) -> Vec<f64> {
            self.grid.points().map(|x| self.density(x, theta)).collect()
        }

        fn derivatives(&self, theta: f64) -> Option<Vec<f64>> {
            let s2 = self.sigma * self.sigma;
            Some(
                self.grid
                    .points()
                    .map(|x| self.density(x, theta) * (x - theta) / s2)
                    .collect(),
            )
        }

        fn value(&self, theta: f64, outcome: usize) -> f64 {
            self.density(self.grid.point(outcome), theta)
        }
    }

    /// Normal density with unknown mean θ on `[-10σ, 10σ]` (2001 points), θ
    /// in `[-3σ, 3σ]`.
    pub fn gaussian_location(sigma: f64) -> Result<ParametricModel> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidModel(format!("sigma = {sigma}")));
        }
        let grid = UniformGrid::symmetric(10.0 * sigma, 2001)?;
        ParametricModel::continuous_grid(
            "gaussian",
            grid.clone(),
            (-3.0 * sigma, 3.0 * sigma),
            GaussianLocation { grid, sigma },
        )
    }
}
