//! Independent finite-volume eigenvalues for Gaussian-tailed radial problems.
//!
//! The radial equation for `R = r^ℓ w` becomes an `ℓ = 0` problem in
//! `D' = 2ℓ + D` dimensions. Cells of width `h` on `[0, r_max]` carry the
//! weight `r^{D'-1}`, the flux through `r = 0` vanishes and `w(r_max) = 0`.
//! The resulting symmetric tridiagonal matrix is diagonalized level by level
//! with Sturm-count bisection, and two grids are combined by Richardson
//! extrapolation to cancel the `O(h²)` error.

use thiserror::Error;

use crate::potentials::{gaussian_rate, potential_value, PotentialError, PotentialSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("the grid oracle needs a Gaussian-tailed potential")]
    Unsupported,
    #[error("need at least 16 cells, got {0}")]
    TooFewCells(usize),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

/// Default number of cells on the fine grid.
pub const DEFAULT_CELLS: usize = 2000;

struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues below `x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - x - if b2 == 0.0 { 0.0 } else { b2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (x.abs() + 1.0);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `j`-th smallest eigenvalue (0-based).
    fn eigenvalue(&self, j: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 1e-15 * mid.abs().max(1.0) {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn outer_radius(spec: &PotentialSpec, levels: usize) -> Result<f64, GridError> {
    let gamma = gaussian_rate(spec).ok_or(GridError::Unsupported)?;
    let dp = (2 * spec.ell + spec.dim) as f64;
    let mut r_max = ((4.0 * levels as f64 + dp + 60.0) / gamma).sqrt();
    if let crate::potentials::PotentialKind::Pseudoharmonic { r_e, .. } = spec.kind {
        r_max += r_e;
    }
    Ok(r_max)
}

fn assemble(spec: &PotentialSpec, r_max: f64, cells: usize) -> Result<Tridiagonal, GridError> {
    let dp = (2 * spec.ell + spec.dim) as i32;
    let h = r_max / cells as f64;
    let k = spec.lambda_per_energy();
    let face = |i: usize| (i as f64 * h).powi(dp - 1) / h;
    let volume = |i: usize| (((i + 1) as f64 * h).powi(dp) - (i as f64 * h).powi(dp)) / dp as f64;
    // potential without the centrifugal term, which the r^ℓ substitution absorbed
    let mut diag = Vec::with_capacity(cells);
    let mut off = Vec::with_capacity(cells - 1);
    for i in 0..cells {
        let r = (i as f64 + 0.5) * h;
        let v = volume(i);
        let flux = if i == 0 { 0.0 } else { face(i) } + face(i + 1);
        diag.push(flux / v + k * potential_value(spec, r)?);
        if i + 1 < cells {
            off.push(-face(i + 1) / (v * volume(i + 1)).sqrt());
        }
    }
    Ok(Tridiagonal { diag, off })
}

/// Lowest `levels` energies on a single grid of `cells` cells.
pub fn grid_energies(spec: &PotentialSpec, levels: usize, cells: usize) -> Result<Vec<f64>, GridError> {
    if cells < 16 {
        return Err(GridError::TooFewCells(cells));
    }
    let r_max = outer_radius(spec, levels)?;
    let matrix = assemble(spec, r_max, cells)?;
    let k = spec.lambda_per_energy();
    Ok((0..levels).map(|j| matrix.eigenvalue(j) / k).collect())
}

/// Richardson combination `(4 E_N - E_{N/2}) / 3` of two grids.
pub fn oracle_energies(spec: &PotentialSpec, levels: usize, cells: usize) -> Result<Vec<f64>, GridError> {
    let fine = grid_energies(spec, levels, cells)?;
    let coarse = grid_energies(spec, levels, cells / 2)?;
    Ok(fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect())
}
