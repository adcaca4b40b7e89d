//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use qfisher::interferometer::{
    bessel_likelihood, build_rep, fisher_phase_at_zero, mz_transform_check, outcome_distribution, resource_scaling,
    wigner_d, FockInput, Posterior,
};
use qfisher::montecarlo::{run_accumulation, run_trials, stream_rng, AccumulationConfig, TrialConfig};
use qfisher::slit::{
    farfield_model, fisher_from_wavefunction, fisher_slit, truncated_momentum_variance, uncertainty_chain,
    SlitGeometry, SlitWavefunction,
};

const FISHER_TOL: f64 = 1e-6;
const FISHER_TIME: Duration = Duration::from_secs(1);
const SATURATION_TOL: f64 = 1e-6;
const SATURATION_TIME: Duration = Duration::from_secs(1);
const TAIL_WINDOWS: [f64; 3] = [1e2, 1e3, 1e4];
const TAIL_TOL: f64 = 0.05;
const DECOMPOSITION_TOL: f64 = 1e-4;
const CONSTANT_PHASE_TOL: f64 = 1e-8;
const RANDOM_STATES: usize = 20;
const WIGNER_TOL: f64 = 1e-10;
const BEAMSPLITTER_TOL: f64 = 1e-9;
const WIGNER_ANGLES: usize = 10;
const WIGNER_TIME: Duration = Duration::from_secs(10);
const CURVATURE_TOL: f64 = 1e-3;
const MAX_TWO_J: u32 = 400;
const MC_PARTICLES: u64 = 1000;
const MC_TRIALS: usize = 4000;
const MC_SEED: u64 = 20_240_601;
const MC_VARIANCE_TOL: f64 = 0.15;
const MC_SCALING_TOL: f64 = 0.20;
const MC_TIME: Duration = Duration::from_secs(120);
const BESSEL_J: u32 = 100;
const BESSEL_REACH: f64 = 2.0;
const BESSEL_TOL: f64 = 0.02;
const ACCUMULATION_J: u32 = 50;
const ACCUMULATION_FACTOR: f64 = 1.5;
const ACCUMULATION_TIME: Duration = Duration::from_secs(30);
const LOG_LAW_SPINS: [u32; 4] = [50, 100, 200, 400];
const LOG_LAW_TOL: f64 = 0.20;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn c1_slit_fisher() -> Verdict {
    let start = Instant::now();
    let f = fisher_slit(&SlitGeometry::default()).expect("slit model");
    let took = start.elapsed();
    let gap = (f - 4.0 / 3.0).abs();
    verdict(
        gap <= FISHER_TOL && took < FISHER_TIME,
        format!("F = {f:.10}, |F - 4/3| = {gap:.2e} (tol {FISHER_TOL:e}), {took:.2?}"),
    )
}

fn c2_heisenberg_saturation() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for hbar in [1.0, 2.0, 0.37] {
        let g = SlitGeometry::default().with_hbar(hbar).expect("geometry");
        let chain = uncertainty_chain(&g).expect("chain");
        let want = hbar * hbar / 4.0;
        worst = worst.max((chain.product - want).abs() / want);
    }
    let took = start.elapsed();
    verdict(
        worst <= SATURATION_TOL && took < SATURATION_TIME,
        format!("max relative gap to hbar^2/4 = {worst:.2e} (tol {SATURATION_TOL:e}), {took:.2?}"),
    )
}

fn c3_heavy_tail() -> Verdict {
    let values: Vec<f64> = TAIL_WINDOWS.iter().map(|&w| truncated_momentum_variance(w)).collect();
    let gaps: Vec<f64> = TAIL_WINDOWS
        .iter()
        .zip(&values)
        .map(|(w, v)| (v - w / PI).abs() / (w / PI))
        .collect();
    let increasing = values.windows(2).all(|p| p[1] > p[0]);
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    verdict(
        increasing && worst <= TAIL_TOL,
        format!("variances {values:.3?}, max gap to W/pi = {worst:.2e} (tol {TAIL_TOL}), increasing = {increasing}"),
    )
}

fn c4_decomposition() -> Verdict {
    let mut rng = stream_rng(4, 0);
    let mut worst_gap: f64 = 0.0;
    let mut worst_constant: f64 = 0.0;

    let slit = SlitWavefunction::momentum(&SlitGeometry::default()).expect("state");
    let f = fisher_from_wavefunction(&slit).expect("decomposition");
    worst_gap = worst_gap.max(f.decomposition_error());
    worst_constant = worst_constant.max(f.phase_term.abs());

    for i in 0..RANDOM_STATES {
        let nu = rng.random_range(-5.0..5.0);
        let alpha = rng.random_range(-PI..PI);
        let g = SlitGeometry {
            k_x: 2.0 * nu,
            ..SlitGeometry::default()
        };
        let base = SlitWavefunction::momentum(&g).expect("state");
        // every other state keeps a constant (global) phase
        let beta = if i % 2 == 0 { rng.random_range(-5.0..5.0) } else { 0.0 };
        let f = fisher_from_wavefunction(&base.with_linear_phase(alpha, beta)).expect("decomposition");
        worst_gap = worst_gap.max(f.decomposition_error());
        if beta == 0.0 {
            worst_constant = worst_constant.max(f.phase_term.abs());
        }
    }
    verdict(
        worst_gap <= DECOMPOSITION_TOL && worst_constant <= CONSTANT_PHASE_TOL,
        format!(
            "max |F_p - (V - P)|/F_p = {worst_gap:.2e} (tol {DECOMPOSITION_TOL:e}), \
             max constant-phase term = {worst_constant:.2e} (tol {CONSTANT_PHASE_TOL:e})"
        ),
    )
}

/// Taylor series with scaling and squaring.
fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let norm: f64 = a.iter().map(|z| z.norm()).sum();
    let squarings = norm.log2().ceil().max(0.0) as i32 + 4;
    let scaled = a * Complex64::new(0.5f64.powi(squarings), 0.0);
    let n = a.nrows();
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = result.clone();
    for k in 1..40 {
        term = &term * &scaled * Complex64::new(1.0 / f64::from(k), 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn c5_wigner_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = stream_rng(5, 0);
    let mut worst_oracle: f64 = 0.0;
    let mut worst_splitter: f64 = 0.0;
    for two_j in 1..=20u32 {
        let j = f64::from(two_j) / 2.0;
        let rep = build_rep(j).expect("rep");
        for _ in 0..WIGNER_ANGLES {
            let phi = rng.random_range(-PI..PI);
            let oracle = expm(&(&rep.j2 * Complex64::new(0.0, -phi)));
            let d = wigner_d(j, phi).expect("wigner");
            for (a, b) in oracle.iter().zip(d.d.iter()) {
                worst_oracle = worst_oracle.max((a - Complex64::new(*b, 0.0)).norm());
            }
            worst_splitter = worst_splitter.max(mz_transform_check(j, phi).expect("check"));
        }
    }
    let took = start.elapsed();
    verdict(
        worst_oracle <= WIGNER_TOL && worst_splitter <= BEAMSPLITTER_TOL && took < WIGNER_TIME,
        format!(
            "max |d - expm| = {worst_oracle:.2e} (tol {WIGNER_TOL:e}), beamsplitter {worst_splitter:.2e} \
             (tol {BEAMSPLITTER_TOL:e}), {took:.2?}"
        ),
    )
}

fn c6_fisher_at_zero() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut limits_exact = true;
    for total in 1..=MAX_TWO_J {
        for n1 in 0..=total {
            let f = fisher_phase_at_zero(&FockInput::new(n1, total - n1).expect("input")).expect("fisher");
            worst = worst.max(f.relative_gap());
        }
        let n = f64::from(total);
        let standard = fisher_phase_at_zero(&FockInput::new(total, 0).expect("input")).expect("fisher");
        limits_exact &= standard.closed_form == n;
        if total % 2 == 0 {
            let balanced = fisher_phase_at_zero(&FockInput::balanced(total / 2).expect("input")).expect("fisher");
            let quantum = 2.0 / (n * n * (1.0 + 2.0 / n));
            limits_exact &= (balanced.crb() - quantum).abs() <= 4.0 * f64::EPSILON * quantum;
        }
    }
    verdict(
        worst <= CURVATURE_TOL && limits_exact,
        format!(
            "max |F0 - (-2 p'')|/F0 over 2j <= {MAX_TWO_J}, all m = {worst:.2e} (tol {CURVATURE_TOL:e}); \
             F0 = N and 1/F0 = 2/(N^2 (1 + 2/N)) exact: {limits_exact}"
        ),
    )
}

fn c7_monte_carlo() -> Verdict {
    let start = Instant::now();
    let model = farfield_model(&SlitGeometry {
        k_x: 0.6,
        ..SlitGeometry::default()
    })
    .expect("model");
    let nu = 0.3;
    let base = run_trials(&TrialConfig::new(model.clone(), nu, MC_PARTICLES, MC_TRIALS, MC_SEED)).expect("trials");
    let doubled =
        run_trials(&TrialConfig::new(model, nu, 2 * MC_PARTICLES, MC_TRIALS, MC_SEED)).expect("trials");
    let took = start.elapsed();
    let target = 3.0 / (4.0 * MC_PARTICLES as f64);
    let gap = (base.empirical_variance - target).abs() / target;
    let ratio = doubled.empirical_variance / base.empirical_variance;
    let scaling = (ratio - 0.5).abs() / 0.5;
    verdict(
        gap <= MC_VARIANCE_TOL && scaling <= MC_SCALING_TOL && took < MC_TIME,
        format!(
            "variance {:.4e} vs 3/(4n) = {target:.4e}, gap {gap:.3} (tol {MC_VARIANCE_TOL}); \
             doubled-n ratio {ratio:.3} (tol {MC_SCALING_TOL} of 0.5); {took:.1?}",
            base.empirical_variance
        ),
    )
}

/// `(max - min) / (max + min)`, the half-spread around the best constant.
fn spread(ratios: &[f64]) -> f64 {
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    (hi - lo) / (hi + lo)
}

fn c8_bessel_posterior() -> Verdict {
    let j = f64::from(BESSEL_J);
    let input = FockInput::balanced(BESSEL_J).expect("input");
    let centre = BESSEL_J as usize;

    let mut posterior = Posterior::default();
    posterior.update(&input, 0.0).expect("update");
    let near: Vec<(usize, f64)> = posterior
        .grid()
        .points()
        .enumerate()
        .filter(|(_, phi)| phi.abs() * j <= BESSEL_REACH)
        .collect();

    let single: Vec<f64> = near
        .iter()
        .map(|&(_, phi)| outcome_distribution(&input, phi).expect("p")[centre] / bessel_likelihood(j, 0, phi))
        .collect();
    posterior.update(&input, 0.0).expect("update");
    let double: Vec<f64> = near
        .iter()
        .map(|&(i, phi)| posterior.density()[i] / bessel_likelihood(j, 0, phi).powi(2))
        .collect();
    let (s1, s2) = (spread(&single), spread(&double));
    verdict(
        s1 <= BESSEL_TOL && s2 <= BESSEL_TOL,
        format!(
            "p0/J0^2(phi j) spread {s1:.4} and two-shot posterior/J0^4 spread {s2:.4} over |phi| j <= {BESSEL_REACH} \
             (tol {BESSEL_TOL})"
        ),
    )
}

fn c9_accumulation() -> Verdict {
    let start = Instant::now();
    let run = |n: u32| {
        run_accumulation(&AccumulationConfig {
            j: ACCUMULATION_J,
            n_repeats: n,
            postselect: true,
            ..AccumulationConfig::default()
        })
        .expect("accumulation")
        .variance
    };
    let j = f64::from(ACCUMULATION_J);
    let (v4, v8) = (run(4), run(8));
    let took = start.elapsed();
    let p4 = 1.0 / (4.0 * j * j);
    let p8 = resource_scaling(j, 8);
    let within = |v: f64, p: f64| v <= ACCUMULATION_FACTOR * p && v >= p / ACCUMULATION_FACTOR;
    verdict(
        within(v4, p4) && within(v8, p8) && took < ACCUMULATION_TIME,
        format!(
            "n=4: {v4:.3e} vs 1/(n j^2) = {p4:.1e}; n=8: {v8:.3e} vs 4n/N_tot^2 = {p8:.1e} \
             (factor {ACCUMULATION_FACTOR}); {took:.1?}"
        ),
    )
}

fn c10_log_width() -> Verdict {
    let scaled: Vec<f64> = LOG_LAW_SPINS
        .iter()
        .map(|&j| {
            let run = run_accumulation(&AccumulationConfig {
                j,
                n_repeats: 1,
                postselect: true,
                ..AccumulationConfig::default()
            })
            .expect("accumulation");
            run.variance * f64::from(j).ln()
        })
        .collect();
    let hi = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    verdict(
        hi / lo - 1.0 <= LOG_LAW_TOL,
        format!("variance * ln j = {scaled:.3?}, max/min - 1 = {:.3} (tol {LOG_LAW_TOL})", hi / lo - 1.0),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("slit Fisher information", c1_slit_fisher),
        ("Heisenberg saturation", c2_heisenberg_saturation),
        ("heavy-tail divergence", c3_heavy_tail),
        ("F_p decomposition", c4_decomposition),
        ("Wigner oracle", c5_wigner_oracle),
        ("F0 closed form", c6_fisher_at_zero),
        ("Monte Carlo efficiency", c7_monte_carlo),
        ("Bessel posterior", c8_bessel_posterior),
        ("accumulation scaling", c9_accumulation),
        ("log-width law", c10_log_width),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{:>2}] {name}: {}", i + 1, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
