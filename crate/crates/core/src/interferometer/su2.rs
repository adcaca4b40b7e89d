//! Fixed-`j` angular momentum matrices and rotations about the 2-axis.
//!
//! Basis vectors are ordered `k = j, j-1, …, -j`, so row/column `i` holds
//! `k = j - i`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest representation dimension `2j + 1` built by default.
pub const DEFAULT_DIM_CAP: usize = 4097;

/// Recursion values are rescaled once they pass this magnitude.
const RESCALE: f64 = 1e100;
/// Below this `|sin φ|` the rotation is taken to be exactly `d(0)` or `d(π)`.
const TRIVIAL_SIN: f64 = 1e-100;

/// `2j` for a non-negative integer or half-integer `j`.
pub fn twice(j: f64) -> Result<u32> {
    let t = 2.0 * j;
    if !(t >= 0.0 && t.fract() == 0.0 && t < f64::from(u32::MAX)) {
        return Err(Error::InvalidInput(format!("j = {j} is not a non-negative half-integer")));
    }
    Ok(t as u32)
}

fn check_dim(two_j: u32, cap: usize) -> Result<usize> {
    let dim = two_j as usize + 1;
    if dim > cap {
        return Err(Error::SizeLimit { dim, cap });
    }
    Ok(dim)
}

/// `√(j(j+1) - k(k-1))`, the `J₊` element `⟨k|J₊|k-1⟩`.
fn raise(j: f64, k: f64) -> f64 {
    (j * (j + 1.0) - k * (k - 1.0)).max(0.0).sqrt()
}

/// `√(j(j+1) - k(k+1))`, the `J₋` element `⟨k|J₋|k+1⟩`.
fn lower(j: f64, k: f64) -> f64 {
    (j * (j + 1.0) - k * (k + 1.0)).max(0.0).sqrt()
}

/// `J₁, J₂, J₃` on the `2j + 1` dimensional irreducible subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularMomentumRep {
    pub j: f64,
    pub j1: DMatrix<Complex64>,
    pub j2: DMatrix<Complex64>,
    pub j3: DMatrix<Complex64>,
}

pub fn build_rep(j: f64) -> Result<AngularMomentumRep> {
    build_rep_capped(j, DEFAULT_DIM_CAP)
}

pub fn build_rep_capped(j: f64, cap: usize) -> Result<AngularMomentumRep> {
    let dim = check_dim(twice(j)?, cap)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut plus = DMatrix::from_element(dim, dim, zero);
    let mut j3 = DMatrix::from_element(dim, dim, zero);
    for i in 0..dim {
        let k = j - i as f64;
        j3[(i, i)] = Complex64::new(k, 0.0);
        if i + 1 < dim {
            // |k-1> is column i+1
            plus[(i, i + 1)] = Complex64::new(raise(j, k), 0.0);
        }
    }
    let minus = plus.adjoint();
    let j1 = (&plus + &minus) * Complex64::new(0.5, 0.0);
    let j2 = (&plus - &minus) * Complex64::new(0.0, -0.5);
    Ok(AngularMomentumRep { j, j1, j2, j3 })
}

impl AngularMomentumRep {
    pub fn dim(&self) -> usize {
        self.j3.nrows()
    }

    /// Largest elementwise deviation from `[J₁,J₂] = iJ₃` and its cyclic versions.
    pub fn commutator_residual(&self) -> f64 {
        let i = Complex64::new(0.0, 1.0);
        let comm = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| a * b - b * a;
        [
            comm(&self.j1, &self.j2) - &self.j3 * i,
            comm(&self.j2, &self.j3) - &self.j1 * i,
            comm(&self.j3, &self.j1) - &self.j2 * i,
        ]
        .iter()
        .flat_map(|m| m.iter().map(|z| z.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max)
    }
}

/// `d^j_{k,m}(φ) = ⟨j,k| e^{-iφJ₂} |j,m⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerRotation {
    pub j: f64,
    pub phi: f64,
    pub d: DMatrix<f64>,
}

impl WignerRotation {
    /// `max |dᵀd - I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.d.nrows();
        let g = self.d.transpose() * &self.d;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let want = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((g[(r, c)] - want).abs());
            }
        }
        worst
    }

    pub fn element(&self, k: f64, m: f64) -> f64 {
        let i = (self.j - k) as usize;
        let c = (self.j - m) as usize;
        self.d[(i, c)]
    }
}

pub fn wigner_d(j: f64, phi: f64) -> Result<WignerRotation> {
    wigner_d_capped(j, phi, DEFAULT_DIM_CAP)
}

pub fn wigner_d_capped(j: f64, phi: f64, cap: usize) -> Result<WignerRotation> {
    let two_j = twice(j)?;
    let dim = check_dim(two_j, cap)?;
    let mut d = DMatrix::zeros(dim, dim);
    for c in 0..dim {
        let m = j - c as f64;
        let col = column_unchecked(two_j, m, phi);
        d.set_column(c, &nalgebra::DVector::from_vec(col));
    }
    Ok(WignerRotation { j, phi, d })
}

/// Column `m` of `d^j(φ)`, indexed by `k = j - i`.
pub fn wigner_column(j: f64, m: f64, phi: f64) -> Result<Vec<f64>> {
    let two_j = twice(j)?;
    check_dim(two_j, DEFAULT_DIM_CAP)?;
    check_projection(j, m)?;
    Ok(column_unchecked(two_j, m, phi))
}

/// Column `m` of `d^j(φ)` together with its `φ`-derivative.
pub fn wigner_column_with_derivative(j: f64, m: f64, phi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let c = wigner_column(j, m, phi)?;
    let dim = c.len();
    // d' = -iJ₂ d = -(J₊ - J₋) d / 2
    let dc = (0..dim)
        .map(|i| {
            let k = j - i as f64;
            let from_below = if i + 1 < dim { raise(j, k) * c[i + 1] } else { 0.0 };
            let from_above = if i > 0 { lower(j, k) * c[i - 1] } else { 0.0 };
            -0.5 * (from_below - from_above)
        })
        .collect();
    Ok((c, dc))
}

pub(crate) fn check_projection(j: f64, m: f64) -> Result<()> {
    let offset = j - m;
    if !(m.abs() <= j && offset.fract() == 0.0) {
        return Err(Error::InvalidInput(format!("m = {m} is not a projection of j = {j}")));
    }
    Ok(())
}

fn column_unchecked(two_j: u32, m: f64, phi: f64) -> Vec<f64> {
    let j = f64::from(two_j) / 2.0;
    let dim = two_j as usize + 1;

    // U(φ + 2π) = (-1)^{2j} U(φ); bring φ into (-π, π]
    let turns = ((phi + PI) / (2.0 * PI)).ceil() - 1.0;
    let mut reduced = phi - 2.0 * PI * turns;
    if reduced <= -PI {
        reduced += 2.0 * PI;
    }
    let turns = ((phi - reduced) / (2.0 * PI)).round() as i64;
    let sign = if two_j % 2 == 1 && turns.rem_euclid(2) == 1 { -1.0 } else { 1.0 };

    let mut col = vec![0.0; dim];
    let (s, c) = reduced.sin_cos();
    let target = (j - m) as usize;
    if s.abs() < TRIVIAL_SIN {
        if c > 0.0 {
            col[target] = sign;
        } else {
            // d_{k,m}(π) = (-1)^{j+k} δ_{k,-m}
            let i = (j + m) as usize;
            let k = j - i as f64;
            let parity = ((j + k).round() as i64).rem_euclid(2);
            col[i] = sign * if parity == 0 { 1.0 } else { -1.0 };
        }
        return col;
    }
    if dim == 1 {
        col[0] = sign;
        return col;
    }

    // Rows of (cos φ J₃ + sin φ J₁) d_m = m d_m:
    //   k cos φ c_k + ½ sin φ (A_k c_{k-1} + B_k c_{k+1}) = m c_k
    // with A_k = raise(j, k), B_k = lower(j, k), and c_{k±1} at index i∓1.
    let k_of = |i: usize| j - i as f64;
    // pivot rows around the lattice point nearest the classical centre m cos φ
    let ip_lo = ((j - m * c).round() as usize).clamp(1, dim - 1);
    let ip_hi = ip_lo - 1;

    // from the top (i = 0) down to index ip_lo
    let mut top = vec![0.0; dim];
    // sign of d_{j,m}: (-sin(φ/2))^{j-m}
    top[0] = if (reduced / 2.0).sin() > 0.0 && target % 2 == 1 { -1.0 } else { 1.0 };
    for i in 0..ip_lo {
        let k = k_of(i);
        let above = if i > 0 { top[i - 1] } else { 0.0 };
        let next = (2.0 * (m - k * c) * top[i] / s - lower(j, k) * above) / raise(j, k);
        top[i + 1] = next;
        if next.abs() > RESCALE {
            for v in &mut top[..=i + 1] {
                *v /= RESCALE;
            }
        }
    }

    // from the bottom (i = dim - 1) up to index ip_hi
    let mut bottom = vec![0.0; dim];
    bottom[dim - 1] = 1.0;
    for i in (ip_hi + 1..dim).rev() {
        let k = k_of(i);
        let below = if i + 1 < dim { bottom[i + 1] } else { 0.0 };
        let next = (2.0 * (m - k * c) * bottom[i] / s - raise(j, k) * below) / lower(j, k);
        bottom[i - 1] = next;
        if next.abs() > RESCALE {
            for v in &mut bottom[i - 1..] {
                *v /= RESCALE;
            }
        }
    }

    // match the bottom solution onto the top one at the two pivot rows
    let tb = top[ip_hi] * bottom[ip_hi] + top[ip_lo] * bottom[ip_lo];
    let bb = bottom[ip_hi] * bottom[ip_hi] + bottom[ip_lo] * bottom[ip_lo];
    let scale = tb / bb;
    col[..=ip_hi].copy_from_slice(&top[..=ip_hi]);
    for i in ip_lo..dim {
        col[i] = scale * bottom[i];
    }
    let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in &mut col {
        *v *= sign / norm;
    }
    col
}

/// Beamsplitter `e^{-iπ/2 J₁}`, phase shift `e^{-iφJ₃}`, second beamsplitter;
/// returns the largest elementwise deviation of
/// `e^{iπ/2 J₁} e^{-iφJ₃} e^{-iπ/2 J₁}` from `d^j(φ)` and of `U†J₃U` from
/// `-sin φ J₁ + cos φ J₃`.
pub fn mz_transform_check(j: f64, phi: f64) -> Result<f64> {
    let rep = build_rep(j)?;
    let i = Complex64::new(0.0, 1.0);
    let half_pi = Complex64::new(0.5 * PI, 0.0);
    let splitter_in = (&rep.j1 * (-i * half_pi)).exp();
    let splitter_out = (&rep.j1 * (i * half_pi)).exp();
    let shift = (&rep.j3 * (-i * phi)).exp();
    let u = &splitter_out * shift * &splitter_in;

    let d = wigner_d(j, phi)?;
    let mut worst: f64 = 0.0;
    for (a, b) in u.iter().zip(d.d.iter()) {
        worst = worst.max((a - Complex64::new(*b, 0.0)).norm());
    }
    let rotated = u.adjoint() * &rep.j3 * &u;
    let (s, c) = phi.sin_cos();
    let want = &rep.j1 * Complex64::new(-s, 0.0) + &rep.j3 * Complex64::new(c, 0.0);
    for (a, b) in rotated.iter().zip(want.iter()) {
        worst = worst.max((a - b).norm());
    }
    Ok(worst)
}
