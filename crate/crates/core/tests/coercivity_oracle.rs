//! Mode-wise coercivity constants against direct evaluation of the operators
//! on polynomial approximations of the sine modes.

use pht_core::coercivity::{coercivity_scan, sine_frequency};
use pht_core::fixtures::random_maxwell_pair;
use pht_core::greens::{apply_even_order_pair, l2_inner_product, VectorPolynomial};
use pht_core::opspec::Interval;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TAYLOR_DEGREE: usize = 45;

/// Taylor polynomial of `sin(μξ)` about `ξ = 0`.
fn sine_polynomial(interval: Interval, mu: f64) -> VectorPolynomial {
    let mut coeffs = vec![0.0; TAYLOR_DEGREE + 1];
    let mut term = 1.0;
    for (j, c) in coeffs.iter_mut().enumerate() {
        if j > 0 {
            term *= mu / j as f64;
        }
        *c = match j % 4 {
            1 => term,
            3 => -term,
            _ => 0.0,
        };
    }
    VectorPolynomial::scalar_real(interval, &coeffs)
}

fn norm_squared(x: &VectorPolynomial) -> f64 {
    l2_inner_product(x, x).unwrap().re
}

#[test]
fn scalar_mode_constants_match_operator_norms() {
    let interval = Interval::new(0.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for order in 1..=3 {
        let pair = random_maxwell_pair(&mut rng, 1, order, interval);
        let cert = coercivity_scan(&pair, 3);
        for k in 1..=3 {
            let phi = sine_polynomial(interval, sine_frequency(interval, k));
            let (p_phi, s_phi) = apply_even_order_pair(&pair, &phi).unwrap();
            let norm = norm_squared(&phi);
            let oracle_p = norm_squared(&p_phi) / norm;
            let oracle_s = norm_squared(&s_phi) / norm;
            let (cp, cs) = cert.per_mode[k - 1];
            for (oracle, c) in [(oracle_p, cp), (oracle_s, cs)] {
                assert!(
                    (oracle - c * c).abs() <= 1e-4 * oracle.max(1.0),
                    "N = {order}, k = {k}: oracle {oracle}, certificate {}",
                    c * c
                );
            }
        }
    }
}
