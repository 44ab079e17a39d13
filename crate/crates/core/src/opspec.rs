//! Operator data model and structural checks.
//!
//! An [`EvenOrderOperatorPair`] holds the constant coefficients of
//! `𝒫 = Σ_k d^k P_k d^k` and `𝒮 = Σ_l d^l S_l d^l` on an interval; a
//! [`SkewOperator`] holds those of `𝒥 = Σ_k J_k d^k`.

use crate::error::{Error, Result};
use crate::numkernel::{re, ComplexMatrix, C64};

/// Bounded open interval `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite);
        }
        if a >= b {
            return Err(Error::InvalidInput(format!("empty interval ({a}, {b})")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

fn check_square_family(name: &str, mats: &[ComplexMatrix], n: usize) -> Result<()> {
    for (k, m) in mats.iter().enumerate() {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{name}_{k} is {}x{}, expected {n}x{n}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    Ok(())
}

/// Coefficients `P_0..P_N`, `S_0..S_N` of a pair of even-order operators.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenOrderOperatorPair {
    n: usize,
    p: Vec<ComplexMatrix>,
    s: Vec<ComplexMatrix>,
    interval: Interval,
}

impl EvenOrderOperatorPair {
    /// Both coefficient lists must have the same length `N + 1` (dense,
    /// zero matrices stored explicitly).
    pub fn new(interval: Interval, p: Vec<ComplexMatrix>, s: Vec<ComplexMatrix>) -> Result<Self> {
        if p.is_empty() || p.len() != s.len() {
            return Err(Error::DimensionMismatch(format!(
                "coefficient lists of length {} and {}; both must equal N + 1 >= 1",
                p.len(),
                s.len()
            )));
        }
        let n = p[0].rows();
        if n == 0 {
            return Err(Error::InvalidInput(
                "state dimension must be positive".into(),
            ));
        }
        check_square_family("P", &p, n)?;
        check_square_family("S", &s, n)?;
        if p.iter().all(ComplexMatrix::is_zero) {
            return Err(Error::InvalidInput("all P_k vanish".into()));
        }
        if s.iter().all(ComplexMatrix::is_zero) {
            return Err(Error::InvalidInput("all S_l vanish".into()));
        }
        Ok(Self { n, p, s, interval })
    }

    /// Scalar (`n = 1`) pair from real coefficient lists.
    pub fn scalar(interval: Interval, p: &[f64], s: &[f64]) -> Result<Self> {
        let lift = |xs: &[f64]| xs.iter().map(|&x| ComplexMatrix::scalar(re(x))).collect();
        Self::new(interval, lift(p), lift(s))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Half-order `N`.
    pub fn order(&self) -> usize {
        self.p.len() - 1
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn p_coeffs(&self) -> &[ComplexMatrix] {
        &self.p
    }

    pub fn s_coeffs(&self) -> &[ComplexMatrix] {
        &self.s
    }

    /// `P_k`, or the zero matrix when `k > N`.
    pub fn p(&self, k: usize) -> ComplexMatrix {
        self.p
            .get(k)
            .cloned()
            .unwrap_or_else(|| ComplexMatrix::zeros(self.n, self.n))
    }

    /// `S_l`, or the zero matrix when `l > N`.
    pub fn s(&self, l: usize) -> ComplexMatrix {
        self.s
            .get(l)
            .cloned()
            .unwrap_or_else(|| ComplexMatrix::zeros(self.n, self.n))
    }

    /// Largest Frobenius norm among all coefficients.
    pub fn coefficient_scale(&self) -> f64 {
        self.p
            .iter()
            .chain(&self.s)
            .map(ComplexMatrix::frobenius_norm)
            .fold(0.0, f64::max)
    }
}

/// Coefficients `J_0..J_M` of `𝒥 = Σ_k J_k d^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewOperator {
    n: usize,
    j: Vec<ComplexMatrix>,
    interval: Interval,
}

impl SkewOperator {
    pub fn new(interval: Interval, j: Vec<ComplexMatrix>) -> Result<Self> {
        if j.len() < 2 {
            return Err(Error::InvalidInput("skew operator needs M >= 1".into()));
        }
        let n = j[0].rows();
        if n == 0 {
            return Err(Error::InvalidInput(
                "state dimension must be positive".into(),
            ));
        }
        check_square_family("J", &j, n)?;
        Ok(Self { n, j, interval })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Order `M`.
    pub fn order(&self) -> usize {
        self.j.len() - 1
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.j
    }

    pub fn coeff(&self, k: usize) -> &ComplexMatrix {
        &self.j[k]
    }
}

/// Outcome of one structural check: a raw defect compared to its allowance.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralCheck {
    pub name: &'static str,
    pub defect: f64,
    pub allowed: f64,
    pub pass: bool,
    /// Index (p or k) where the defect is largest, when meaningful.
    pub worst_index: Option<usize>,
}

impl StructuralCheck {
    fn new(name: &'static str, defect: f64, allowed: f64, worst_index: Option<usize>) -> Self {
        Self {
            name,
            defect,
            allowed,
            pass: defect <= allowed,
            worst_index,
        }
    }
}

/// `C_p = Σ_{m=0}^{p} S_m^H P_{p−m}` for `p = 0..2N`.
pub fn reciprocity_matrices(pair: &EvenOrderOperatorPair) -> Vec<ComplexMatrix> {
    let order = pair.order();
    (0..=2 * order)
        .map(|p| {
            let mut acc = ComplexMatrix::zeros(pair.n(), pair.n());
            for m in p.saturating_sub(order)..=p.min(order) {
                acc = &acc + &(&pair.s(m).adjoint() * &pair.p(p - m));
            }
            acc
        })
        .collect()
}

/// Maxwell reciprocity: every `C_p` must be Hermitian.
pub fn check_maxwell_symmetry(pair: &EvenOrderOperatorPair, tol: f64) -> StructuralCheck {
    let cs = reciprocity_matrices(pair);
    let scale = cs
        .iter()
        .map(ComplexMatrix::frobenius_norm)
        .fold(1.0, f64::max);
    let (worst, defect) = cs
        .iter()
        .map(ComplexMatrix::hermitian_defect)
        .enumerate()
        .fold((0, 0.0), |acc, (p, d)| if d > acc.1 { (p, d) } else { acc });
    StructuralCheck::new("maxwell_symmetry", defect, tol * scale, Some(worst))
}

/// True iff some `P_k ≠ 0` and `S_l ≠ 0` with `k ≠ l`.
pub fn check_mixed_order(pair: &EvenOrderOperatorPair) -> bool {
    let nonzero = |ms: &[ComplexMatrix]| -> Vec<usize> {
        ms.iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(k, _)| k)
            .collect()
    };
    let pk = nonzero(pair.p_coeffs());
    let sl = nonzero(pair.s_coeffs());
    pk.iter().any(|k| sl.iter().any(|l| k != l))
}

/// Parity `J_k = (−1)^{k+1} J_k^H` for every coefficient.
pub fn check_skew_parity(j: &SkewOperator, tol: f64) -> StructuralCheck {
    let scale = j
        .coeffs()
        .iter()
        .map(ComplexMatrix::frobenius_norm)
        .fold(1.0, f64::max);
    let (worst, defect) = j
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, jk)| {
            let d = if k % 2 == 0 {
                jk.skew_hermitian_defect()
            } else {
                jk.hermitian_defect()
            };
            (k, d)
        })
        .fold((0, 0.0), |acc, (k, d)| if d > acc.1 { (k, d) } else { acc });
    StructuralCheck::new("skew_parity", defect, tol * scale, Some(worst))
}

/// Square matrix whose entries are polynomials in `λ`, stored as one
/// coefficient matrix per power (ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    pub coeffs: Vec<ComplexMatrix>,
}

impl MatrixPolynomial {
    pub fn dim(&self) -> usize {
        self.coeffs.first().map_or(0, ComplexMatrix::rows)
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn evaluate(&self, lambda: C64) -> ComplexMatrix {
        let n = self.dim();
        self.coeffs
            .iter()
            .rev()
            .fold(ComplexMatrix::zeros(n, n), |acc, c| &acc.scale(lambda) + c)
    }

    /// Coefficients of `det T(λ)` (ascending), recovered by sampling on a
    /// circle of radius `radius` and inverting the discrete Fourier transform.
    pub fn determinant_coefficients(&self, radius: f64) -> Vec<C64> {
        let degree = self.degree_bound() * self.dim();
        let samples = degree + 1;
        let omega =
            |k: usize| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / samples as f64);
        let values: Vec<C64> = (0..samples)
            .map(|k| self.evaluate(omega(k) * radius).determinant())
            .collect();
        (0..samples)
            .map(|j| {
                let sum: C64 = values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * omega((j * k) % samples).conj())
                    .sum();
                sum / (samples as f64 * radius.powi(j as i32))
            })
            .collect()
    }
}

/// Symbol `T(λ) = Σ_l λ^{2l} S_l − μ Σ_k λ^{2k} P_k` of `𝒮 − μ𝒫`.
pub fn symbol_pencil(pair: &EvenOrderOperatorPair, mu: C64) -> MatrixPolynomial {
    let n = pair.n();
    let mut coeffs = vec![ComplexMatrix::zeros(n, n); 2 * pair.order() + 1];
    for l in 0..=pair.order() {
        coeffs[2 * l] = &pair.s(l) - &pair.p(l).scale(mu);
    }
    MatrixPolynomial { coeffs }
}

/// Default relative threshold for deciding the degree of `det T(λ)`.
pub const DEFAULT_DEG_TOL: f64 = 1e-8;

/// Relative size below which sampled determinants count as identically zero.
const DEGENERACY_RTOL: f64 = 1e-12;

/// Dimensions of `ker(𝒮 ∓ i𝒫)` on the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefectDimensions {
    pub plus: usize,
    pub minus: usize,
}

impl DefectDimensions {
    /// Equal defect dimensions, i.e. a boundary triplet exists.
    pub fn triplet_exists(&self) -> bool {
        self.plus == self.minus
    }
}

/// Degree of `det(𝒮 − μ𝒫)(λ)` with scaled-coefficient threshold `deg_tol`.
pub fn pencil_determinant_degree(
    pair: &EvenOrderOperatorPair,
    mu: C64,
    deg_tol: f64,
) -> Result<usize> {
    let pencil = symbol_pencil(pair, mu);
    let radius = pair.coefficient_scale().max(1.0);
    let coeffs = pencil.determinant_coefficients(radius);

    // |det T(λ)| ≤ ‖T(λ)‖^n on the sampling circle.
    let bound: f64 = pencil
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c.frobenius_norm() * radius.powi(j as i32))
        .sum();
    let scaled: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c.norm() * radius.powi(j as i32))
        .collect();
    let largest = scaled.iter().copied().fold(0.0, f64::max);
    if largest <= DEGENERACY_RTOL * bound.powi(pair.n() as i32) {
        return Err(Error::DegeneratePencil);
    }
    Ok(scaled
        .iter()
        .rposition(|&x| x > deg_tol * largest)
        .unwrap_or(0))
}

/// `d_± = deg det(𝒮 ∓ i𝒫)(λ)`: the dimension of the solution space of the
/// constant-coefficient system `(𝒮 ∓ i𝒫) x = 0`.
pub fn defect_dimensions(pair: &EvenOrderOperatorPair, deg_tol: f64) -> Result<DefectDimensions> {
    Ok(DefectDimensions {
        plus: pencil_determinant_degree(pair, C64::new(0.0, 1.0), deg_tol)?,
        minus: pencil_determinant_degree(pair, C64::new(0.0, -1.0), deg_tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::c;
    use std::f64::consts::PI;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn dzektser() -> EvenOrderOperatorPair {
        EvenOrderOperatorPair::scalar(
            Interval::new(0.0, PI).unwrap(),
            &[1.0, 1.0, 0.0],
            &[0.0, 1.0, 2.0],
        )
        .unwrap()
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn pair_validation() {
        assert!(EvenOrderOperatorPair::scalar(unit(), &[0.0, 0.0], &[1.0, 0.0]).is_err());
        assert!(EvenOrderOperatorPair::scalar(unit(), &[1.0, 0.0], &[0.0]).is_err());
        let bad = EvenOrderOperatorPair::new(
            unit(),
            vec![ComplexMatrix::identity(2)],
            vec![ComplexMatrix::identity(3)],
        );
        assert!(matches!(bad, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn dzektser_is_reciprocal() {
        assert!(check_maxwell_symmetry(&dzektser(), 1e-10).pass);
    }

    #[test]
    fn equal_coefficients_are_reciprocal() {
        let m0 = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 1.0)],
            vec![c(0.0, 3.0), c(1.0, -1.0)],
        ])
        .unwrap();
        let m1 = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.0, 1.0)],
            vec![c(1.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let pair =
            EvenOrderOperatorPair::new(unit(), vec![m0.clone(), m1.clone()], vec![m0, m1]).unwrap();
        assert!(check_maxwell_symmetry(&pair, 1e-10).pass);
    }

    #[test]
    fn imaginary_zeroth_coefficient_fails_at_p0() {
        let pair = EvenOrderOperatorPair::new(
            unit(),
            vec![
                ComplexMatrix::scalar(re(1.0)),
                ComplexMatrix::scalar(re(0.0)),
            ],
            vec![
                ComplexMatrix::scalar(c(0.0, 1.0)),
                ComplexMatrix::scalar(re(0.0)),
            ],
        )
        .unwrap();
        let check = check_maxwell_symmetry(&pair, 1e-10);
        assert!(!check.pass);
        assert_eq!(check.worst_index, Some(0));
        assert!((check.defect - 2.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_order_examples() {
        assert!(check_mixed_order(&dzektser()));
        let same = EvenOrderOperatorPair::scalar(unit(), &[1.0], &[1.0]).unwrap();
        assert!(!check_mixed_order(&same));
    }

    #[test]
    fn skew_parity_examples() {
        let rod = SkewOperator::new(
            unit(),
            vec![
                ComplexMatrix::from_real_rows(&[
                    [0.0, 0.0, 1.0],
                    [0.0, 0.0, 0.0],
                    [-1.0, 0.0, 0.0],
                ]),
                ComplexMatrix::from_real_rows(&[[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]),
            ],
        )
        .unwrap();
        assert!(check_skew_parity(&rod, 1e-12).pass);
        let wave = SkewOperator::new(
            unit(),
            vec![
                ComplexMatrix::zeros(2, 2),
                ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]),
            ],
        )
        .unwrap();
        assert!(check_skew_parity(&wave, 1e-12).pass);
        let bad = SkewOperator::new(
            unit(),
            vec![ComplexMatrix::identity(1), ComplexMatrix::zeros(1, 1)],
        )
        .unwrap();
        let check = check_skew_parity(&bad, 1e-12);
        assert!(!check.pass);
        assert_eq!(check.worst_index, Some(0));
        assert!(SkewOperator::new(unit(), vec![ComplexMatrix::identity(1)]).is_err());
    }

    #[test]
    fn dzektser_symbol_at_i() {
        // 2λ⁴ + (1 − i)λ² − i
        let t = symbol_pencil(&dzektser(), c(0.0, 1.0));
        let expect = [c(0.0, -1.0), re(0.0), c(1.0, -1.0), re(0.0), re(2.0)];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(t.coeffs[k][(0, 0)], *e, "coefficient {k}");
        }
    }

    #[test]
    fn symbol_at_zero_is_s() {
        let t = symbol_pencil(&dzektser(), re(0.0));
        assert_eq!(t.coeffs[0][(0, 0)], re(0.0));
        assert_eq!(t.coeffs[2][(0, 0)], re(1.0));
        assert_eq!(t.coeffs[4][(0, 0)], re(2.0));
    }

    #[test]
    fn second_order_symbol() {
        let pair = EvenOrderOperatorPair::scalar(unit(), &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        let t = symbol_pencil(&pair, c(0.0, 1.0));
        assert_eq!(t.coeffs[0][(0, 0)], c(0.0, -1.0));
        assert_eq!(t.coeffs[2][(0, 0)], re(1.0));
    }

    #[test]
    fn defect_dimension_examples() {
        let d = defect_dimensions(&dzektser(), DEFAULT_DEG_TOL).unwrap();
        assert_eq!((d.plus, d.minus), (4, 4));
        assert!(d.triplet_exists());
        let pair = EvenOrderOperatorPair::scalar(unit(), &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        let d = defect_dimensions(&pair, DEFAULT_DEG_TOL).unwrap();
        assert_eq!((d.plus, d.minus), (2, 2));
    }

    #[test]
    fn zero_first_rows_are_degenerate() {
        let m = |a: f64, b: f64| ComplexMatrix::from_real_rows(&[[0.0, 0.0], [a, b]]);
        let pair = EvenOrderOperatorPair::new(
            unit(),
            vec![m(1.0, 0.0), m(0.0, 1.0)],
            vec![m(0.0, 2.0), m(1.0, 1.0)],
        )
        .unwrap();
        assert_eq!(
            defect_dimensions(&pair, DEFAULT_DEG_TOL).unwrap_err(),
            Error::DegeneratePencil
        );
    }

    #[test]
    fn determinant_interpolation_matches_direct_expansion() {
        // det of diag(λ² − i, 2λ⁴ + λ²) = (λ² − i)(2λ⁴ + λ²)
        let pair = EvenOrderOperatorPair::new(
            unit(),
            vec![
                ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]]),
                ComplexMatrix::zeros(2, 2),
                ComplexMatrix::zeros(2, 2),
            ],
            vec![
                ComplexMatrix::zeros(2, 2),
                ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 1.0]]),
                ComplexMatrix::from_real_rows(&[[0.0, 0.0], [0.0, 2.0]]),
            ],
        )
        .unwrap();
        let coeffs = symbol_pencil(&pair, c(0.0, 1.0)).determinant_coefficients(2.0);
        let expect = [
            re(0.0),
            re(0.0),
            c(0.0, -1.0),
            re(0.0),
            c(1.0, -2.0),
            re(0.0),
            re(2.0),
            re(0.0),
            re(0.0),
        ];
        for (k, e) in expect.iter().enumerate() {
            assert!(
                (coeffs[k] - e).norm() < 1e-12,
                "coefficient {k}: {:?}",
                coeffs[k]
            );
        }
        assert_eq!(
            pencil_determinant_degree(&pair, c(0.0, 1.0), DEFAULT_DEG_TOL).unwrap(),
            6
        );
    }
}
