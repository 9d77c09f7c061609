//! Quadrature engines shared by the trace and asymmetry modules: a
//! Gauss-Hermite rule for weight-folded whole-line integrals and an adaptive
//! bisection scheme driven by an embedded 7/15-point Gauss-Kronrod pair.

use std::collections::BinaryHeap;
use std::fmt;

/// Outcome of a quadrature run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Estimated absolute error; at most the requested tolerance on success.
    pub error_estimate: f64,
    /// Number of integrand evaluations.
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuadError {
    /// The error target was not reached within the subdivision or
    /// node-doubling budget.
    NonConvergence { achieved: f64, requested: f64 },
    /// Newton iteration for a quadrature node failed to settle.
    NodeSearchFailed { index: usize, nodes: usize },
    /// A rule with zero nodes was requested.
    EmptyRule,
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::NonConvergence {
                achieved,
                requested,
            } => write!(
                f,
                "quadrature did not converge: error estimate {achieved:e} above requested {requested:e}"
            ),
            QuadError::NodeSearchFailed { index, nodes } => {
                write!(f, "node {index} of the {nodes}-point rule did not converge")
            }
            QuadError::EmptyRule => write!(f, "quadrature rule needs at least one node"),
        }
    }
}

impl std::error::Error for QuadError {}

/// Gauss-Hermite rule: `integral e^{-t^2} f(t) dt ~ sum w_i f(t_i)`.
///
/// Nodes and weights come from the Jacobi matrix of the orthonormal Hermite
/// recurrence: eigenvalues are the nodes and the squared first eigenvector
/// components, scaled by `sqrt(pi)`, are the weights. The implicit-shift QL
/// sweep below stays accurate for node counts well into the thousands.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Result<Self, QuadError> {
        if n == 0 {
            return Err(QuadError::EmptyRule);
        }
        // Hermite Jacobi matrix: zero diagonal, off-diagonal sqrt((k+1)/2).
        let mut diag = vec![0.0f64; n];
        let mut off: Vec<f64> = (0..n).map(|k| ((k as f64 + 1.0) / 2.0).sqrt()).collect();
        off[n - 1] = 0.0;
        let mut first_row = vec![0.0f64; n];
        first_row[0] = 1.0;
        tridiagonal_eigen_first_row(&mut diag, &mut off, &mut first_row)
            .map_err(|index| QuadError::NodeSearchFailed { index, nodes: n })?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let mut nodes: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
        let mut weights: Vec<f64> = order
            .iter()
            .map(|&i| sqrt_pi * first_row[i] * first_row[i])
            .collect();
        // The rule is symmetric about the origin; enforce it exactly.
        for i in 0..n / 2 {
            let node = 0.5 * (nodes[n - 1 - i] - nodes[i]);
            nodes[i] = -node;
            nodes[n - 1 - i] = node;
            let weight = 0.5 * (weights[i] + weights[n - 1 - i]);
            weights[i] = weight;
            weights[n - 1 - i] = weight;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(GaussHermite { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum w_i f(t_i)`, approximating `integral e^{-t^2} f(t) dt`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix,
/// accumulating the rotations only on one row of the eigenvector matrix.
/// `diag` returns the eigenvalues (unsorted), `row` the corresponding row
/// entries. Errors with the stuck index if an eigenvalue needs more than 30
/// sweeps, which does not happen for Jacobi matrices of quadrature rules.
fn tridiagonal_eigen_first_row(
    diag: &mut [f64],
    off: &mut [f64],
    row: &mut [f64],
) -> Result<(), usize> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    for l in 0..n {
        let mut iterations = 0;
        loop {
            // Split point: negligible off-diagonal entry.
            let mut m = l;
            while m + 1 < n {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 30 {
                return Err(l);
            }
            // Wilkinson-style shift from the leading 2x2 block.
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = row[i + 1];
                row[i + 1] = s * row[i] + c * f;
                row[i] = c * row[i] - s * f;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK values).
// Odd-indexed abscissae are the embedded Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];
#[allow(clippy::excessive_precision)]
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// One Gauss-Kronrod pass over `[a, b]`: high-order value and the
/// `|K15 - G7|` error gauge. 15 evaluations.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = WGK15[7] * f_center;
    let mut gauss = WG7[3] * f_center;
    for j in 0..7 {
        let t = half * XGK15[j];
        let fsum = f(center - t) + f(center + t);
        kronrod += WGK15[j] * fsum;
        if j % 2 == 1 {
            gauss += WG7[j / 2] * fsum;
        }
    }
    ((kronrod * half), ((kronrod - gauss) * half).abs())
}

#[derive(Debug)]
struct Segment {
    error: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive bisection with the embedded 7/15 pair: the worst segment is split
/// until the summed error gauge drops below `tol` or the segment budget runs
/// out. Deterministic for a given integrand and interval.
pub fn adaptive_quadrature<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_segments: usize,
) -> Result<QuadratureResult, QuadError> {
    let (value, error) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        error,
        a,
        b,
        value,
    });
    let mut evaluations = 15u64;
    while heap.len() < max_segments {
        let total_error: f64 = heap.iter().map(|s| s.error).sum();
        if total_error <= tol {
            break;
        }
        let worst = heap.pop().expect("heap starts nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval already at floating-point resolution: no further
            // refinement is possible, let the final check decide.
            heap.push(worst);
            break;
        }
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        evaluations += 30;
        heap.push(Segment {
            error: le,
            a: worst.a,
            b: mid,
            value: lv,
        });
        heap.push(Segment {
            error: re,
            a: mid,
            b: worst.b,
            value: rv,
        });
    }
    let error_estimate: f64 = heap.iter().map(|s| s.error).sum();
    let value: f64 = heap.iter().map(|s| s.value).sum();
    if error_estimate > tol {
        return Err(QuadError::NonConvergence {
            achieved: error_estimate,
            requested: tol,
        });
    }
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
    })
}
