//! Worked examples and seeded random operator families.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numkernel::{c, hermitian_eig, re, ComplexMatrix};
use crate::opspec::{EvenOrderOperatorPair, Interval, SkewOperator};

fn interval_0_pi() -> Interval {
    Interval::new(0.0, std::f64::consts::PI).expect("valid interval")
}

/// Dzektser pair on `(0, π)`: `𝒫 = 1 + d²`, `𝒮 = d² + 2d⁴`.
pub fn dzektser() -> EvenOrderOperatorPair {
    EvenOrderOperatorPair::scalar(interval_0_pi(), &[1.0, 1.0, 0.0], &[0.0, 1.0, 2.0])
        .expect("valid pair")
}

/// Trace-form Dirichlet conditions `x = x″ = 0` at both ends of the
/// Dzektser interval: `Q_b` acts on the `b`-side traces, `R_b` on the
/// `a`-side traces.
pub fn dzektser_dirichlet() -> (ComplexMatrix, ComplexMatrix) {
    let qb = ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ]);
    let rb = ComplexMatrix::from_real_rows(&[
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
    ]);
    (qb, rb)
}

/// Biharmonic wave pair on `(0, 1)`: `𝒫 = I`, `𝒮 = diag(1, 0) − d diag(0, 1) d`.
pub fn wave_pair() -> EvenOrderOperatorPair {
    EvenOrderOperatorPair::new(
        Interval::new(0.0, 1.0).expect("valid interval"),
        vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(2, 2)],
        vec![
            ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]]),
            ComplexMatrix::from_real_rows(&[[0.0, 0.0], [0.0, -1.0]]),
        ],
    )
    .expect("valid pair")
}

/// Biharmonic wave skew operator `𝒥 = [[0, 1], [1, 0]] d`.
pub fn wave_skew() -> SkewOperator {
    SkewOperator::new(
        Interval::new(0.0, 1.0).expect("valid interval"),
        vec![
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]),
        ],
    )
    .expect("valid operator")
}

/// Physical parameters of the elastic rod with non-local elasticity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RodParameters {
    pub mu: f64,
    pub tension: f64,
    pub kappa: f64,
    pub rho_a: f64,
}

impl Default for RodParameters {
    fn default() -> Self {
        Self {
            mu: 1.0,
            tension: 1.0,
            kappa: 1.0,
            rho_a: 1.0,
        }
    }
}

impl RodParameters {
    /// All four parameters must be finite and strictly positive.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("mu", self.mu),
            ("tension", self.tension),
            ("kappa", self.kappa),
            ("rho_a", self.rho_a),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "rod parameter {name} must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// Elastic rod pair on `(0, 1)`: `𝒫 = I − d μE₂₂ d`, `𝒮 = diag(κ, T, 1/ρA)`.
pub fn rod_pair(params: RodParameters) -> Result<EvenOrderOperatorPair> {
    params.validate()?;
    let mut p1 = ComplexMatrix::zeros(3, 3);
    p1[(1, 1)] = re(-params.mu);
    EvenOrderOperatorPair::new(
        Interval::new(0.0, 1.0)?,
        vec![ComplexMatrix::identity(3), p1],
        vec![
            ComplexMatrix::from_diagonal(&[
                re(params.kappa),
                re(params.tension),
                re(1.0 / params.rho_a),
            ]),
            ComplexMatrix::zeros(3, 3),
        ],
    )
}

/// Elastic rod skew operator `𝒥 = J₀ + J₁ d`.
pub fn rod_skew() -> SkewOperator {
    SkewOperator::new(
        Interval::new(0.0, 1.0).expect("valid interval"),
        vec![
            ComplexMatrix::from_real_rows(&[[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]),
            ComplexMatrix::from_real_rows(&[[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]),
        ],
    )
    .expect("valid operator")
}

/// `n x n` matrix with entries uniform in `[−1, 1) + i[−1, 1)`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let entries = (0..rows * cols)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_row_major(rows, cols, entries).expect("finite entries")
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let x = random_matrix(rng, n, n);
    &x + &x.adjoint()
}

pub fn random_skew_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let x = random_matrix(rng, n, n);
    &x - &x.adjoint()
}

/// Random unitary matrix (eigenvectors of a random Hermitian matrix).
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    hermitian_eig(&random_hermitian(rng, n))
        .expect("Hermitian input")
        .vectors
}

/// Random well-conditioned invertible matrix.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    &random_matrix(rng, n, n).scale_real(0.5) + &ComplexMatrix::identity(n).scale_real(1.5)
}

fn random_scalar<R: Rng>(rng: &mut R) -> f64 {
    let magnitude = rng.gen_range(0.5..1.5);
    if rng.gen::<bool>() {
        magnitude
    } else {
        -magnitude
    }
}

/// Random pair satisfying Maxwell reciprocity and the mixed-order condition.
///
/// One family receives coefficients `W (t_k I) V` with real `t_k` and the
/// other `W H_k V` with Hermitian `H_k`, for a shared unitary `W` and
/// invertible `V`; then every `C_p` is congruent to a real combination of the
/// `H_k` and hence Hermitian, while the coefficients do not commute.
pub fn random_maxwell_pair<R: Rng>(
    rng: &mut R,
    n: usize,
    order: usize,
    interval: Interval,
) -> EvenOrderOperatorPair {
    let w = random_unitary(rng, n);
    let v = random_invertible(rng, n);
    let scalar_side_is_p = rng.gen::<bool>();
    loop {
        let scalars: Vec<ComplexMatrix> = (0..=order)
            .map(|_| {
                let t = random_scalar(rng);
                &(&w * &ComplexMatrix::identity(n).scale_real(t)) * &v
            })
            .collect();
        let hermitian: Vec<ComplexMatrix> = (0..=order)
            .map(|_| &(&w * &random_hermitian(rng, n)) * &v)
            .collect();
        let (p, s) = if scalar_side_is_p {
            (scalars, hermitian)
        } else {
            (hermitian, scalars)
        };
        let pair = EvenOrderOperatorPair::new(interval, p, s).expect("valid random pair");
        if crate::opspec::check_mixed_order(&pair) {
            return pair;
        }
    }
}

/// Copy of `pair` with an anti-Hermitian perturbation of spectral norm 1
/// added to `S₀`; breaks Maxwell reciprocity for generic pairs.
pub fn perturb_s0<R: Rng>(rng: &mut R, pair: &EvenOrderOperatorPair) -> EvenOrderOperatorPair {
    let e = random_skew_hermitian(rng, pair.n());
    let e = e.scale_real(1.0 / e.spectral_norm());
    let mut s = pair.s_coeffs().to_vec();
    s[0] = &s[0] + &e;
    EvenOrderOperatorPair::new(pair.interval(), pair.p_coeffs().to_vec(), s)
        .expect("valid perturbed pair")
}

/// Random skew operator of order `m ≥ 1` satisfying the parity condition:
/// even-index coefficients skew-Hermitian, odd-index ones Hermitian.
pub fn random_parity_skew<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    interval: Interval,
) -> SkewOperator {
    let coeffs = (0..=m)
        .map(|k| {
            if k % 2 == 0 {
                random_skew_hermitian(rng, n)
            } else {
                random_hermitian(rng, n)
            }
        })
        .collect();
    SkewOperator::new(interval, coeffs).expect("valid random operator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opspec::{check_maxwell_symmetry, check_mixed_order, check_skew_parity};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixtures_pass_structural_checks() {
        for pair in [
            dzektser(),
            wave_pair(),
            rod_pair(RodParameters::default()).unwrap(),
        ] {
            assert!(check_maxwell_symmetry(&pair, 1e-12).pass);
            assert!(check_mixed_order(&pair));
        }
        for j in [wave_skew(), rod_skew()] {
            assert!(check_skew_parity(&j, 1e-12).pass);
        }
    }

    #[test]
    fn rod_parameters_must_be_positive() {
        let bad = RodParameters {
            tension: 0.0,
            ..RodParameters::default()
        };
        assert!(matches!(rod_pair(bad), Err(Error::InvalidInput(_))));
        let nan = RodParameters {
            mu: f64::NAN,
            ..RodParameters::default()
        };
        assert!(nan.validate().is_err());
    }

    #[test]
    fn random_families_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let interval = Interval::new(-0.5, 1.0).unwrap();
        for n in 1..=3 {
            for order in 1..=3 {
                let pair = random_maxwell_pair(&mut rng, n, order, interval);
                assert!(check_maxwell_symmetry(&pair, 1e-10).pass);
                assert!(check_mixed_order(&pair));
                let perturbed = perturb_s0(&mut rng, &pair);
                assert!(!check_maxwell_symmetry(&perturbed, 1e-10).pass);
                let j = random_parity_skew(&mut rng, n, order, interval);
                assert!(check_skew_parity(&j, 1e-12).pass);
            }
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = random_unitary(&mut rng, 4);
        let gram = &w.adjoint() * &w;
        assert!((&gram - &ComplexMatrix::identity(4)).max_abs() < 1e-12);
    }
}
