//! Repeated simulated experiments.
//!
//! Every trial draws from its own ChaCha8 stream, selected by the trial
//! index, so a run is reproducible from its seed no matter how trials are
//! scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interferometer::{outcome_distribution, FockInput, Posterior, DEFAULT_POSTERIOR_POINTS, DEFAULT_WINDOW};
use crate::stats::{crb, maximize_likelihood, posterior_mean, DataSet, ParametricModel};

/// Name of the generator, as recorded in reports.
pub const RNG_ALGORITHM: &str = "ChaCha8";

/// Largest tolerated share of failed trials.
pub const MAX_FAILURE_RATE: f64 = 0.01;

/// Generator for substream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Inverse-CDF sampler over a finite set of outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampler {
    cdf: Vec<f64>,
}

impl Sampler {
    /// Samples outcomes of `model` at `theta`, with grid cells weighted by
    /// their quadrature width.
    pub fn new(model: &ParametricModel, theta: f64) -> Result<Self> {
        if !model.contains(theta) {
            let (lo, hi) = model.theta_domain();
            return Err(Error::OutOfDomain { theta, lo, hi });
        }
        Self::from_weights(&model.cell_masses(theta))
    }

    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidModel("sampling weights must be finite and non-negative".into()));
        }
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        if !(acc > 0.0) {
            return Err(Error::InvalidModel("sampling weights sum to zero".into()));
        }
        for c in &mut cdf {
            *c /= acc;
        }
        // the last outcome with positive weight closes the CDF exactly
        if let Some(last) = weights.iter().rposition(|&w| w > 0.0) {
            for c in &mut cdf[last..] {
                *c = 1.0;
            }
        }
        Ok(Self { cdf })
    }

    pub fn outcome_count(&self) -> usize {
        self.cdf.len()
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    pub fn draw(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c <= u)
    }

    /// Outcome counts of `n` independent draws.
    pub fn counts(&self, rng: &mut impl Rng, n: u64) -> Vec<u64> {
        let mut counts = vec![0u64; self.cdf.len()];
        for _ in 0..n {
            counts[self.draw(rng)] += 1;
        }
        counts
    }
}

/// `n` independent outcomes of `model` at `theta`.
pub fn sample_outcomes(model: &ParametricModel, theta: f64, n: u64, rng: &mut impl Rng) -> Result<DataSet> {
    let counts = Sampler::new(model, theta)?.counts(rng, n);
    DataSet::from_counts(&counts)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    #[default]
    Mle,
    /// Flat-prior posterior mean over the model's domain.
    BayesMean,
}

impl Estimator {
    pub fn estimate(self, model: &ParametricModel, data: &DataSet) -> Result<f64> {
        match self {
            Self::Mle => maximize_likelihood(model, data).map(|(theta, _)| theta),
            Self::BayesMean => posterior_mean(model, data),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub model: ParametricModel,
    pub theta_true: f64,
    pub n_particles: u64,
    pub n_trials: usize,
    pub seed: u64,
    pub estimator: Estimator,
}

impl TrialConfig {
    pub fn new(model: ParametricModel, theta_true: f64, n_particles: u64, n_trials: usize, seed: u64) -> Self {
        Self {
            model,
            theta_true,
            n_particles,
            n_trials,
            seed,
            estimator: Estimator::Mle,
        }
    }

    pub fn with_estimator(mut self, estimator: Estimator) -> Self {
        self.estimator = estimator;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_particles == 0 {
            return Err(Error::InvalidConfig("n_particles must be at least 1".into()));
        }
        // a variance needs two estimates
        if self.n_trials < 2 {
            return Err(Error::InvalidConfig("n_trials must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub model: String,
    pub theta_true: f64,
    pub n_particles: u64,
    pub n_trials: usize,
    pub seed: u64,
    pub rng: String,
    pub estimator: Estimator,
    pub empirical_mean: f64,
    /// Unbiased sample variance of the successful estimates.
    pub empirical_variance: f64,
    pub crb: f64,
    /// `crb / empirical_variance`.
    pub efficiency: f64,
    /// Standard error of `efficiency` from the sampling spread of the variance.
    pub efficiency_standard_error: f64,
    pub failures: usize,
}

/// Runs `n_trials` independent experiments and compares the spread of the
/// estimates with the Cramér-Rao bound at `theta_true`.
pub fn run_trials(config: &TrialConfig) -> Result<TrialReport> {
    config.validate()?;
    let model = &config.model;
    let sampler = Sampler::new(model, config.theta_true)?;
    let bound = crb(model, config.theta_true, config.n_particles)?;

    let results: Vec<Result<f64>> = (0..config.n_trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(config.seed, i as u64);
            let data = DataSet::from_counts(&sampler.counts(&mut rng, config.n_particles))?;
            config.estimator.estimate(model, &data)
        })
        .collect();

    let mut estimates = Vec::with_capacity(results.len());
    let mut failures = 0;
    let mut first_failure = None;
    for r in results {
        match r {
            Ok(t) => estimates.push(t),
            Err(e) => {
                failures += 1;
                first_failure.get_or_insert(e);
            }
        }
    }
    if failures as f64 > MAX_FAILURE_RATE * config.n_trials as f64 || estimates.len() < 2 {
        return Err(Error::TooManyFailures {
            failures,
            trials: config.n_trials,
            first: first_failure.map(|e| e.to_string()).unwrap_or_default(),
        });
    }

    let k = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / k;
    let variance = estimates.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (k - 1.0);
    let efficiency = bound / variance;
    Ok(TrialReport {
        model: model.name().to_string(),
        theta_true: config.theta_true,
        n_particles: config.n_particles,
        n_trials: config.n_trials,
        seed: config.seed,
        rng: RNG_ALGORITHM.to_string(),
        estimator: config.estimator,
        empirical_mean: mean,
        empirical_variance: variance,
        crb: bound,
        efficiency,
        efficiency_standard_error: efficiency * (2.0 / (k - 1.0)).sqrt(),
        failures,
    })
}

/// Repeated single shots of a balanced interferometer (`n1 = n2 = j`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccumulationConfig {
    pub j: u32,
    pub n_repeats: u32,
    pub phi_true: f64,
    /// Posterior window half-width.
    pub window: f64,
    pub points: usize,
    /// Condition on every shot giving `k = 0` instead of sampling.
    pub postselect: bool,
    pub seed: u64,
}

impl Default for AccumulationConfig {
    fn default() -> Self {
        Self {
            j: 50,
            n_repeats: 4,
            phi_true: 0.0,
            window: DEFAULT_WINDOW,
            points: DEFAULT_POSTERIOR_POINTS,
            postselect: false,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AccumulationRun {
    pub posterior: Posterior,
    pub variance: f64,
    /// Posterior variance before any shot and after each one.
    pub variances: Vec<f64>,
}

impl AccumulationRun {
    pub fn outcomes(&self) -> &[f64] {
        self.posterior.shots()
    }
}

pub fn run_accumulation(config: &AccumulationConfig) -> Result<AccumulationRun> {
    run_accumulation_with(config, |_, _| {})
}

/// As [`run_accumulation`], calling `on_shot(shot_index, posterior)` after every update.
pub fn run_accumulation_with(
    config: &AccumulationConfig,
    mut on_shot: impl FnMut(usize, &Posterior),
) -> Result<AccumulationRun> {
    let input = FockInput::balanced(config.j)?;
    let mut posterior = Posterior::new(config.window, config.points)?;
    let mut variances = vec![posterior.variance()];
    let mut draw: Box<dyn FnMut() -> f64> = if config.postselect {
        Box::new(|| 0.0)
    } else {
        let sampler = Sampler::from_weights(&outcome_distribution(&input, config.phi_true)?)?;
        let outcomes = input.outcomes();
        let mut rng = stream_rng(config.seed, 0);
        Box::new(move || outcomes[sampler.draw(&mut rng)])
    };
    for shot in 0..config.n_repeats as usize {
        posterior.update(&input, draw())?;
        variances.push(posterior.variance());
        on_shot(shot, &posterior);
    }
    Ok(AccumulationRun {
        variance: posterior.variance(),
        posterior,
        variances,
    })
}
