//! Sufficient-condition certificate for coercivity of `[𝒫; 𝒮]` using the
//! sine basis `sin(μ_k (ξ − a))`, `μ_k = kπ/(b − a)`.
//!
//! On a sine mode the operator `Σ_j d^j X_j d^j` acts as the matrix
//! `Φ_X(k) = Σ_j (−1)^j μ_k^{2j} X_j`. If `σ_min(Φ_S(k))² + σ_min(Φ_P(k))²`
//! stays above a positive constant for every `k ≥ 1`, the stacked operator
//! is coercive on functions expanded componentwise in that basis. The scan
//! covers `k ≤ k_max`; the tail `k > k_max` is covered by a lower bound on the
//! leading coefficient.

use crate::numkernel::{singular_values, ComplexMatrix};
use crate::opspec::{EvenOrderOperatorPair, Interval};

/// `μ_k = kπ/(b − a)`.
pub fn sine_frequency(interval: Interval, k: usize) -> f64 {
    k as f64 * std::f64::consts::PI / interval.length()
}

/// `Σ_j (−1)^j μ^{2j} X_j`.
pub fn fourier_symbol(coeffs: &[ComplexMatrix], mu: f64) -> ComplexMatrix {
    let n = coeffs.first().map_or(0, ComplexMatrix::rows);
    coeffs
        .iter()
        .enumerate()
        .fold(ComplexMatrix::zeros(n, n), |acc, (j, x)| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            &acc + &x.scale_real(sign * mu.powi(2 * j as i32))
        })
}

/// `(Φ_P(k), Φ_S(k))` for mode `k ≥ 1`.
pub fn fourier_coefficient_matrices(
    pair: &EvenOrderOperatorPair,
    k: usize,
) -> (ComplexMatrix, ComplexMatrix) {
    let mu = sine_frequency(pair.interval(), k);
    (
        fourier_symbol(pair.p_coeffs(), mu),
        fourier_symbol(pair.s_coeffs(), mu),
    )
}

fn sigma_min(m: &ComplexMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Whether the tail `k > k_max` is covered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailStatus {
    /// Every `k ≥ k*` satisfies `c_{S,k}² + c_{P,k}² ≥ c_squared_min`, shown
    /// through the leading-coefficient bounds of `𝒮` and `𝒫` combined.
    CertifiedAt(usize),
    Uncertified,
}

/// Result of the sufficient-condition scan.
#[derive(Debug, Clone, PartialEq)]
pub struct CoercivityCertificate {
    /// `min_{k ≤ k_max} c_{S,k}² + c_{P,k}²`.
    pub c_squared_min: f64,
    pub argmin_k: usize,
    pub k_max_scanned: usize,
    pub tail_status: TailStatus,
    pub certified: bool,
    /// `(c_{P,k}, c_{S,k})` for `k = 1..=k_max`.
    pub per_mode: Vec<(f64, f64)>,
}

impl CoercivityCertificate {
    /// Label used in reports.
    pub const LABEL: &'static str = "sufficient-condition certificate";
}

/// Lower bound `σ_min(X_N) μ^{2N} − Σ_{j<N} ‖X_j‖₂ μ^{2j}` on `σ_min(Φ_X)`,
/// where `X_N` is the highest nonzero coefficient; `None` when it is
/// singular.
fn leading_bound(coeffs: &[ComplexMatrix]) -> Option<impl Fn(f64) -> f64> {
    let last = coeffs.iter().rposition(|x| !x.is_zero())?;
    let lead = sigma_min(&coeffs[last]);
    let scale = coeffs[last].spectral_norm();
    if lead <= 1e-12 * scale {
        return None;
    }
    let lower: Vec<f64> = coeffs[..last]
        .iter()
        .map(ComplexMatrix::spectral_norm)
        .collect();
    Some(move |mu: f64| {
        let tail: f64 = lower
            .iter()
            .enumerate()
            .map(|(j, s)| s * mu.powi(2 * j as i32))
            .sum();
        lead * mu.powi(2 * last as i32) - tail
    })
}

/// Scan on raw coefficient lists; `p` and `s` need not satisfy the pair
/// invariants (e.g. `𝒮 = 0` is allowed here).
pub fn coercivity_scan_coefficients(
    p: &[ComplexMatrix],
    s: &[ComplexMatrix],
    interval: Interval,
    k_max: usize,
) -> CoercivityCertificate {
    let k_max = k_max.max(1);
    let per_mode: Vec<(f64, f64)> = (1..=k_max)
        .map(|k| {
            let mu = sine_frequency(interval, k);
            (
                sigma_min(&fourier_symbol(p, mu)),
                sigma_min(&fourier_symbol(s, mu)),
            )
        })
        .collect();
    let (argmin_k, c_squared_min) = per_mode
        .iter()
        .enumerate()
        .map(|(i, (cp, cs))| (i + 1, cp * cp + cs * cs))
        .fold(
            (1, f64::INFINITY),
            |best, cur| if cur.1 < best.1 { cur } else { best },
        );

    // Each bound is nondecreasing in μ once positive, so the combined bound
    // holds for every k ≥ k* as soon as it holds at k*.
    let bounds: Vec<_> = [s, p].into_iter().filter_map(leading_bound).collect();
    let tail_status = if bounds.is_empty() {
        TailStatus::Uncertified
    } else {
        (1..=k_max)
            .find(|&k| {
                let mu = sine_frequency(interval, k);
                let combined: f64 = bounds.iter().map(|f| f(mu).max(0.0).powi(2)).sum();
                combined >= c_squared_min
            })
            .map_or(TailStatus::Uncertified, TailStatus::CertifiedAt)
    };
    let certified = c_squared_min > 0.0 && matches!(tail_status, TailStatus::CertifiedAt(_));
    CoercivityCertificate {
        c_squared_min,
        argmin_k,
        k_max_scanned: k_max,
        tail_status,
        certified,
        per_mode,
    }
}

/// Sufficient-condition scan for a pair over `k = 1..=k_max`.
pub fn coercivity_scan(pair: &EvenOrderOperatorPair, k_max: usize) -> CoercivityCertificate {
    coercivity_scan_coefficients(pair.p_coeffs(), pair.s_coeffs(), pair.interval(), k_max)
}

/// When `𝒮` or `𝒫` is a constant multiplication operator `X₀` with
/// `σ_min(X₀) > 0`, it is boundedly invertible and `‖[𝒫; 𝒮]x‖² ≥ σ_min(X₀)²‖x‖²`
/// for every `x`; returns the best such constant.
pub fn direct_coercivity(pair: &EvenOrderOperatorPair) -> Option<f64> {
    [pair.s_coeffs(), pair.p_coeffs()]
        .into_iter()
        .filter(|coeffs| coeffs[1..].iter().all(ComplexMatrix::is_zero))
        .map(|coeffs| sigma_min(&coeffs[0]))
        .filter(|&sigma| sigma > 1e-12 * 1f64.max(sigma))
        .map(|sigma| sigma * sigma)
        .fold(None, |best: Option<f64>, c2| {
            Some(best.map_or(c2, |b| b.max(c2)))
        })
}
