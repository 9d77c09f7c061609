//! Finite-truncation trace geometry: coherent-state symbols on the projective
//! space of truncated states, Hermite-basis thermal densities with spatial
//! quadrature, Euclidean Heisenberg conjugation, and the Matsubara-product
//! form of the partition value.
//!
//! The spatial-integration contract is the load-bearing check here: the
//! thermal density summed over the first `N+1` eigenfunctions must integrate
//! over the line back to the truncated partition sum, because the
//! eigenfunctions are orthonormal. Quadrature uses a Gauss-Hermite rule with
//! the Gaussian weight folded into the density, doubling the node count until
//! two successive results agree.
//!
//! On normalization: the closed trace here is `1/(2 sinh(x/2))` throughout,
//! matching the partition value. The variant that drops the factor two lives
//! in the asymmetry module's index density, where it is an explicit opt-in.

use std::fmt;

use num_complex::Complex64;

use crate::quad::{GaussHermite, QuadError, QuadratureResult};
use crate::thermo::{self, Spectrum};

#[derive(Debug, Clone, PartialEq)]
pub enum TraceGeomError {
    /// A strictly positive quantity was zero, negative, or non-finite.
    NonPositiveArgument(&'static str),
    /// A projective state needs at least one nonzero coefficient.
    ZeroState,
    /// Coefficient and energy lists of different lengths.
    LengthMismatch { coefficients: usize, energies: usize },
    /// Closed-form summation requested for a spectrum with no closed form.
    UnboundedNonCanonical,
    /// Operator entries do not form a square matrix over the energy list.
    DimensionMismatch { entries: usize, dimension: usize },
    /// Node doubling did not stabilize the spatial integral.
    QuadratureNonConvergence { achieved: f64, requested: f64 },
}

impl fmt::Display for TraceGeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceGeomError::NonPositiveArgument(name) => {
                write!(f, "{name} must be positive and finite")
            }
            TraceGeomError::ZeroState => write!(f, "state has zero norm"),
            TraceGeomError::LengthMismatch {
                coefficients,
                energies,
            } => write!(
                f,
                "state has {coefficients} coefficients but {energies} energies supplied"
            ),
            TraceGeomError::UnboundedNonCanonical => write!(
                f,
                "unbounded trace has a closed form only for the canonical ladder"
            ),
            TraceGeomError::DimensionMismatch { entries, dimension } => write!(
                f,
                "operator with {entries} entries is not square of dimension {dimension}"
            ),
            TraceGeomError::QuadratureNonConvergence {
                achieved,
                requested,
            } => write!(
                f,
                "spatial integral did not stabilize: {achieved:e} above {requested:e}"
            ),
        }
    }
}

impl std::error::Error for TraceGeomError {}

impl From<QuadError> for TraceGeomError {
    fn from(e: QuadError) -> Self {
        match e {
            QuadError::NonConvergence {
                achieved,
                requested,
            } => TraceGeomError::QuadratureNonConvergence {
                achieved,
                requested,
            },
            QuadError::NodeSearchFailed { .. } | QuadError::EmptyRule => {
                TraceGeomError::QuadratureNonConvergence {
                    achieved: f64::INFINITY,
                    requested: 0.0,
                }
            }
        }
    }
}

/// Point of the projective space of states truncated to finitely many levels,
/// held as homogeneous coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    coefficients: Vec<Complex64>,
}

impl TruncatedState {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self, TraceGeomError> {
        if coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() <= 0.0 {
            return Err(TraceGeomError::ZeroState);
        }
        Ok(TruncatedState { coefficients })
    }

    pub fn from_real(coefficients: &[f64]) -> Result<Self, TraceGeomError> {
        Self::new(coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Matrix over a truncated eigenbasis, carried together with the diagonal
/// reference spectrum that drives its Euclidean evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteOperator {
    energies: Vec<f64>,
    entries: Vec<Complex64>, // row-major, dimension^2 entries
}

impl FiniteOperator {
    pub fn new(energies: Vec<f64>, entries: Vec<Complex64>) -> Result<Self, TraceGeomError> {
        let dim = energies.len();
        if dim == 0 {
            return Err(TraceGeomError::NonPositiveArgument("dimension"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(TraceGeomError::NonPositiveArgument("energies"));
        }
        for window in energies.windows(2) {
            if window[1] <= window[0] {
                return Err(TraceGeomError::NonPositiveArgument("energy ordering"));
            }
        }
        if entries.len() != dim * dim {
            return Err(TraceGeomError::DimensionMismatch {
                entries: entries.len(),
                dimension: dim,
            });
        }
        Ok(FiniteOperator { energies, entries })
    }

    pub fn dimension(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dimension() + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dimension()).map(|i| self.entry(i, i)).sum()
    }
}

/// Covariant symbol of the diagonal Hamiltonian at a projective point:
/// `sum E_i |z_i|^2 / ||z||^2`. Invariant under rescaling of `z`; the value
/// lies between the smallest and largest energy.
pub fn coherent_symbol(state: &TruncatedState, energies: &[f64]) -> Result<f64, TraceGeomError> {
    if state.coefficients().len() != energies.len() {
        return Err(TraceGeomError::LengthMismatch {
            coefficients: state.coefficients().len(),
            energies: energies.len(),
        });
    }
    let norm_sqr = state.norm_sqr();
    if norm_sqr <= 0.0 {
        return Err(TraceGeomError::ZeroState);
    }
    let weighted: f64 = state
        .coefficients()
        .iter()
        .zip(energies)
        .map(|(c, &e)| e * c.norm_sqr())
        .sum();
    Ok(weighted / norm_sqr)
}

/// Trace of the thermal operator over the spectrum.
///
/// With `levels = Some(n)` the sum runs over levels `0..=n` (canonical
/// ladders generate them on the fly; explicit spectra use their stored list,
/// truncated to the first `n + 1` entries). With `levels = None` the full
/// trace is returned in closed form, which exists only for the canonical
/// ladder; any other spectrum is an error.
pub fn chern_trace(
    spectrum: &Spectrum,
    beta: f64,
    levels: Option<u32>,
) -> Result<f64, TraceGeomError> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(TraceGeomError::NonPositiveArgument("beta"));
    }
    match levels {
        Some(n) => {
            if let Some(spec) = spectrum.canonical_spec() {
                let mut acc = 0.0;
                for k in 0..=n {
                    acc += (-beta * spec.energy(k)).exp();
                }
                Ok(acc)
            } else {
                Ok(spectrum
                    .levels()
                    .iter()
                    .take(n as usize + 1)
                    .map(|&(e, c)| c as f64 * (-beta * e).exp())
                    .sum())
            }
        }
        None => {
            let spec = spectrum
                .canonical_spec()
                .ok_or(TraceGeomError::UnboundedNonCanonical)?;
            thermo::partition_closed(beta * spec.hbar_omega())
                .map_err(|_| TraceGeomError::NonPositiveArgument("beta"))
        }
    }
}

/// Normalized oscillator eigenfunction in dimensionless coordinates
/// (mass, frequency and hbar all one), via the stable normalized recurrence
/// `psi_{n+1} = q sqrt(2/(n+1)) psi_n - sqrt(n/(n+1)) psi_{n-1}`.
pub fn hermite_psi(n: u32, q: f64) -> f64 {
    let gaussian = (-0.5 * q * q).exp();
    let mut prev = 0.0f64;
    let mut cur = std::f64::consts::PI.powf(-0.25) * gaussian;
    for j in 0..n {
        let jf = j as f64;
        let next = q * (2.0 / (jf + 1.0)).sqrt() * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Values `psi_0(q) .. psi_n(q)` in one recurrence pass.
pub fn hermite_psi_all(n: u32, q: f64) -> Vec<f64> {
    let gaussian = (-0.5 * q * q).exp();
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut prev = 0.0f64;
    let mut cur = std::f64::consts::PI.powf(-0.25) * gaussian;
    out.push(cur);
    for j in 0..n {
        let jf = j as f64;
        let next = q * (2.0 / (jf + 1.0)).sqrt() * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Hermite eigenbasis truncated at `max_level`, dimensionless convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteBasis {
    max_level: u32,
}

impl HermiteBasis {
    pub fn new(max_level: u32) -> Self {
        HermiteBasis { max_level }
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Basis values at `q`.
    pub fn values(&self, q: f64) -> Vec<f64> {
        hermite_psi_all(self.max_level, q)
    }

    /// Gram matrix of the basis under the given rule, with the Gaussian
    /// weight folded out of the eigenfunctions. Deviation from the identity
    /// measures both the basis normalization and the rule.
    #[allow(clippy::needless_range_loop)]
    pub fn gram_matrix(&self, rule: &GaussHermite) -> Vec<Vec<f64>> {
        let dim = self.max_level as usize + 1;
        let mut gram = vec![vec![0.0; dim]; dim];
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            let vals = bare_hermite_all(self.max_level, t);
            for m in 0..dim {
                for n in 0..=m {
                    gram[m][n] += w * vals[m] * vals[n];
                }
            }
        }
        for m in 0..dim {
            for n in (m + 1)..dim {
                gram[m][n] = gram[n][m];
            }
        }
        gram
    }
}

/// Eigenfunction values with the Gaussian stripped: `psi_n(q) e^{q^2/2}`.
/// This is the polynomial factor the Gauss-Hermite weight expects.
fn bare_hermite_all(n: u32, q: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut prev = 0.0f64;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    out.push(cur);
    for j in 0..n {
        let jf = j as f64;
        let next = q * (2.0 / (jf + 1.0)).sqrt() * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Thermal position density truncated at level `n`:
/// `sum_{k<=n} e^{-x(k+1/2)} psi_k(q)^2`. Strictly positive and even in `q`.
pub fn thermal_density(q: f64, x: f64, n: u32) -> Result<f64, TraceGeomError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(TraceGeomError::NonPositiveArgument("x"));
    }
    let psi = hermite_psi_all(n, q);
    Ok(psi
        .iter()
        .enumerate()
        .map(|(k, &p)| (-x * (k as f64 + 0.5)).exp() * p * p)
        .sum())
}

/// Spatial integral of the thermal density over the whole line.
///
/// Orthonormality makes the exact value the truncated partition sum; the
/// returned error estimate is the difference between the last two
/// node-doubling stages (200, 400, ... nodes until agreement at 1e-11).
pub fn integrate_density(x: f64, n: u32) -> Result<QuadratureResult, TraceGeomError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(TraceGeomError::NonPositiveArgument("x"));
    }
    let weights: Vec<f64> = (0..=n).map(|k| (-x * (k as f64 + 0.5)).exp()).collect();
    let folded = |t: f64| -> f64 {
        let vals = bare_hermite_all(n, t);
        vals.iter()
            .zip(&weights)
            .map(|(&v, &w)| w * v * v)
            .sum::<f64>()
    };
    let tolerance = 1e-11;
    let mut nodes = 200usize;
    let mut evaluations = 0u64;
    let mut prev: Option<f64> = None;
    loop {
        let rule = GaussHermite::new(nodes)?;
        let value = rule.integrate(folded);
        evaluations += nodes as u64;
        if let Some(previous) = prev {
            let delta = (value - previous).abs();
            if delta <= tolerance {
                return Ok(QuadratureResult {
                    value,
                    error_estimate: delta,
                    evaluations,
                });
            }
        }
        if nodes >= 1600 {
            return Err(TraceGeomError::QuadratureNonConvergence {
                achieved: prev.map_or(f64::INFINITY, |p| (value - p).abs()),
                requested: tolerance,
            });
        }
        prev = Some(value);
        nodes *= 2;
    }
}

/// Euclidean Heisenberg conjugation against the diagonal reference spectrum:
/// entry `(m, n)` picks up `e^{tau (E_m - E_n)}`. Diagonal operators are
/// fixed points; the trace is preserved for every `tau`.
pub fn euclidean_evolve(op: &FiniteOperator, tau: f64) -> FiniteOperator {
    let dim = op.dimension();
    let mut entries = Vec::with_capacity(dim * dim);
    for m in 0..dim {
        for n in 0..dim {
            let factor = (tau * (op.energies()[m] - op.energies()[n])).exp();
            entries.push(op.entry(m, n) * factor);
        }
    }
    FiniteOperator {
        energies: op.energies().to_vec(),
        entries,
    }
}

/// Bosonic mode frequencies `2 pi n / beta` for `n = -n_max ..= n_max`.
pub fn matsubara_freqs(beta: f64, n_max: u32) -> Result<Vec<f64>, TraceGeomError> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(TraceGeomError::NonPositiveArgument("beta"));
    }
    let step = 2.0 * std::f64::consts::PI / beta;
    Ok((-(n_max as i64)..=n_max as i64)
        .map(|n| n as f64 * step)
        .collect())
}

/// Partition value through the mode product
/// `(1/x) prod_{n=1}^{N} (1 + x^2/(4 pi^2 n^2))^{-1}`.
///
/// The truncated product converges to the closed trace from above with
/// relative deviation close to `x^2 / (4 pi^2 N)`; the empty product is the
/// classical value `1/x`.
pub fn matsubara_partition(x: f64, n_modes: u32) -> Result<f64, TraceGeomError> {
    matsubara_partition_impl(x, n_modes, false)
}

/// Same product with the first-order tail factor compensated, for callers
/// that want the accelerated value rather than the bare truncation whose
/// convergence rate is itself the observable.
pub fn matsubara_partition_with_tail(x: f64, n_modes: u32) -> Result<f64, TraceGeomError> {
    matsubara_partition_impl(x, n_modes, true)
}

fn matsubara_partition_impl(x: f64, n_modes: u32, tail: bool) -> Result<f64, TraceGeomError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(TraceGeomError::NonPositiveArgument("x"));
    }
    let four_pi_sq = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut log_product = 0.0;
    for n in 1..=n_modes as u64 {
        let nf = n as f64;
        log_product += (x * x / (four_pi_sq * nf * nf)).ln_1p();
    }
    if tail && n_modes > 0 {
        // The omitted factors multiply to about exp(x^2/(4 pi^2 N)).
        log_product += x * x / (four_pi_sq * n_modes as f64);
    }
    Ok((-log_product).exp() / x)
}

/// Norm of the coefficients dropped when truncating a normalized expansion
/// after index `n`: `sqrt(sum_{i>n} |c_i|^2 / ||c||^2)`. Non-increasing in
/// `n` and exactly zero once every coefficient is retained.
pub fn l2_truncation_residual(target: &TruncatedState, n: u32) -> f64 {
    let total = target.norm_sqr();
    let tail: f64 = target
        .coefficients()
        .iter()
        .skip(n as usize + 1)
        .map(|c| c.norm_sqr())
        .sum();
    (tail / total).sqrt()
}
