//! Exact polynomial calculus used as an independent integration-by-parts
//! oracle.
//!
//! Vector polynomials are differentiated and integrated monomial by
//! monomial, so `⟨𝒮x, 𝒫y⟩ − ⟨𝒫x, 𝒮y⟩` is computed without ever touching the
//! boundary matrices. Comparing it against the boundary forms built in
//! [`crate::triplet`] checks those constructions end to end.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numkernel::{ComplexMatrix, C64};
use crate::opspec::{EvenOrderOperatorPair, Interval, SkewOperator};
use crate::triplet::{trace_of_polynomial, RangeTriplet, SkewTriplet, TraceLayout};

/// Degree cap for generated test polynomials.
pub const MAX_DEGREE: usize = 32;

/// `n` complex polynomials in `ξ` on an interval, coefficients ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorPolynomial {
    components: Vec<Vec<C64>>,
    interval: Interval,
}

fn derive_scalar(coeffs: &[C64], order: usize) -> Vec<C64> {
    if order >= coeffs.len() {
        return vec![];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(order)
        .map(|(k, &c)| {
            let falling: f64 = ((k - order + 1)..=k).map(|f| f as f64).product();
            c * falling
        })
        .collect()
}

fn eval_scalar(coeffs: &[C64], xi: f64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * xi + c)
}

fn add_scaled(acc: &mut Vec<C64>, coeffs: &[C64], factor: C64) {
    if acc.len() < coeffs.len() {
        acc.resize(coeffs.len(), C64::new(0.0, 0.0));
    }
    for (a, &c) in acc.iter_mut().zip(coeffs) {
        *a += factor * c;
    }
}

impl VectorPolynomial {
    pub fn new(interval: Interval, components: Vec<Vec<C64>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput(
                "vector polynomial needs at least one component".into(),
            ));
        }
        if components
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            components,
            interval,
        })
    }

    pub fn zero(interval: Interval, n: usize) -> Self {
        Self {
            components: vec![vec![]; n],
            interval,
        }
    }

    /// Scalar polynomial from real coefficients (ascending).
    pub fn scalar_real(interval: Interval, coeffs: &[f64]) -> Self {
        Self {
            components: vec![coeffs.iter().map(|&x| C64::new(x, 0.0)).collect()],
            interval,
        }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn components(&self) -> &[Vec<C64>] {
        &self.components
    }

    /// Largest degree with a nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.components
            .iter()
            .filter_map(|c| c.iter().rposition(|z| *z != C64::new(0.0, 0.0)))
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate(&self, xi: f64) -> Vec<C64> {
        self.components.iter().map(|c| eval_scalar(c, xi)).collect()
    }

    pub fn derivative(&self, order: usize) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|c| derive_scalar(c, order))
                .collect(),
            interval: self.interval,
        }
    }

    /// `M · x` for a constant `m x n` matrix.
    pub fn left_multiply(&self, m: &ComplexMatrix) -> Result<Self> {
        if m.cols() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to a {}-component polynomial",
                m.rows(),
                m.cols(),
                self.n()
            )));
        }
        let mut components = vec![Vec::new(); m.rows()];
        for (i, out) in components.iter_mut().enumerate() {
            for (j, comp) in self.components.iter().enumerate() {
                add_scaled(out, comp, m[(i, j)]);
            }
        }
        Ok(Self {
            components,
            interval: self.interval,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.n() != self.n() {
            return Err(Error::DimensionMismatch(
                "adding polynomials of different sizes".into(),
            ));
        }
        if other.interval != self.interval {
            return Err(Error::IntervalMismatch);
        }
        let mut components = self.components.clone();
        for (acc, c) in components.iter_mut().zip(&other.components) {
            add_scaled(acc, c, C64::new(1.0, 0.0));
        }
        Ok(Self {
            components,
            interval: self.interval,
        })
    }
}

/// Componentwise `order`-th derivative.
pub fn poly_derivative(x: &VectorPolynomial, order: usize) -> VectorPolynomial {
    x.derivative(order)
}

fn check_components(x: &VectorPolynomial, n: usize) -> Result<()> {
    if x.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator acts on {n} components, polynomial has {}",
            x.n()
        )));
    }
    Ok(())
}

/// `(𝒫x, 𝒮x)` with `𝒫x = Σ_k P_k x^{(2k)}` and `𝒮x = Σ_l S_l x^{(2l)}`.
pub fn apply_even_order_pair(
    pair: &EvenOrderOperatorPair,
    x: &VectorPolynomial,
) -> Result<(VectorPolynomial, VectorPolynomial)> {
    check_components(x, pair.n())?;
    let mut px = VectorPolynomial::zero(x.interval(), pair.n());
    let mut sx = VectorPolynomial::zero(x.interval(), pair.n());
    for k in 0..=pair.order() {
        let d = x.derivative(2 * k);
        px = px.add(&d.left_multiply(&pair.p_coeffs()[k])?)?;
        sx = sx.add(&d.left_multiply(&pair.s_coeffs()[k])?)?;
    }
    Ok((px, sx))
}

/// `𝒥x = Σ_k J_k x^{(k)}`.
pub fn apply_skew(j: &SkewOperator, x: &VectorPolynomial) -> Result<VectorPolynomial> {
    check_components(x, j.n())?;
    let mut out = VectorPolynomial::zero(x.interval(), j.n());
    for (k, jk) in j.coeffs().iter().enumerate() {
        out = out.add(&x.derivative(k).left_multiply(jk)?)?;
    }
    Ok(out)
}

/// `⟨u, v⟩ = ∫_a^b v(ξ)^H u(ξ) dξ`, linear in `u`, evaluated exactly.
pub fn l2_inner_product(u: &VectorPolynomial, v: &VectorPolynomial) -> Result<C64> {
    if u.interval != v.interval {
        return Err(Error::IntervalMismatch);
    }
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch(
            "inner product of polynomials of different sizes".into(),
        ));
    }
    let (a, b) = (u.interval.a(), u.interval.b());
    let mut total = C64::new(0.0, 0.0);
    for (uc, vc) in u.components.iter().zip(&v.components) {
        if uc.is_empty() || vc.is_empty() {
            continue;
        }
        let mut product = vec![C64::new(0.0, 0.0); uc.len() + vc.len() - 1];
        for (i, &ui) in uc.iter().enumerate() {
            for (j, &vj) in vc.iter().enumerate() {
                product[i + j] += ui * vj.conj();
            }
        }
        let mut antiderivative = vec![C64::new(0.0, 0.0); product.len() + 1];
        for (k, &p) in product.iter().enumerate() {
            antiderivative[k + 1] = p / (k + 1) as f64;
        }
        total += eval_scalar(&antiderivative, b) - eval_scalar(&antiderivative, a);
    }
    Ok(total)
}

/// `v^H u` for boundary vectors.
fn vec_inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

/// One evaluation of a Green identity: the interior side computed by exact
/// integration against the two boundary-side expressions.
#[derive(Debug, Clone, Copy)]
pub struct GreenResidual {
    /// Interior side, e.g. `⟨𝒮x, 𝒫y⟩ − ⟨𝒫x, 𝒮y⟩`.
    pub interior: C64,
    /// `γ(y)^H · blockdiag(A, −A) · γ(x)` (or with `Q`).
    pub trace_form: C64,
    /// The same pairing through the boundary maps.
    pub map_form: C64,
    /// `max(1, |first inner product|, |second inner product|)`.
    pub scale: f64,
}

impl GreenResidual {
    pub fn trace_residual(&self) -> f64 {
        (self.interior - self.trace_form).norm()
    }

    pub fn map_residual(&self) -> f64 {
        (self.interior - self.map_form).norm()
    }

    /// Larger of the two absolute residuals.
    pub fn residual(&self) -> f64 {
        self.trace_residual().max(self.map_residual())
    }

    pub fn relative(&self) -> f64 {
        self.residual() / self.scale
    }
}

fn block_form(matrix: &ComplexMatrix, gx: &[C64], gy: &[C64], layout: &TraceLayout) -> C64 {
    let half = layout.total() / 2;
    let (xb, xa) = gx.split_at(half);
    let (yb, ya) = gy.split_at(half);
    vec_inner(&matrix.mat_vec(xb), yb) - vec_inner(&matrix.mat_vec(xa), ya)
}

/// Green identity residual for the range triplet:
/// `⟨𝒮x, 𝒫y⟩ − ⟨𝒫x, 𝒮y⟩` against `γ(y)^H blockdiag(A, −A) γ(x)` and
/// against `⟨Γ₁x, Γ₀y⟩ − ⟨Γ₀x, Γ₁y⟩`.
pub fn green_residual_range(
    pair: &EvenOrderOperatorPair,
    triplet: &RangeTriplet,
    x: &VectorPolynomial,
    y: &VectorPolynomial,
) -> Result<GreenResidual> {
    let (px, sx) = apply_even_order_pair(pair, x)?;
    let (py, sy) = apply_even_order_pair(pair, y)?;
    let first = l2_inner_product(&sx, &py)?;
    let second = l2_inner_product(&px, &sy)?;

    let layout = triplet.layout();
    let gx = trace_of_polynomial(x, &layout)?;
    let gy = trace_of_polynomial(y, &layout)?;
    let trace_form = block_form(&triplet.a_matrix, &gx, &gy, &layout);

    let (g0x, g1x) = triplet.apply(&gx);
    let (g0y, g1y) = triplet.apply(&gy);
    let map_form = vec_inner(&g1x, &g0y) - vec_inner(&g0x, &g1y);

    Ok(GreenResidual {
        interior: first - second,
        trace_form,
        map_form,
        scale: 1f64.max(first.norm()).max(second.norm()),
    })
}

/// Green identity residual for the skew triplet:
/// `⟨𝒥x, y⟩ + ⟨x, 𝒥y⟩` against `γ(y)^H blockdiag(Q, −Q) γ(x)` and against
/// `⟨Γ̂₁x, Γ̂₀y⟩ + ⟨Γ̂₀x, Γ̂₁y⟩`.
pub fn green_residual_skew(
    j: &SkewOperator,
    triplet: &SkewTriplet,
    x: &VectorPolynomial,
    y: &VectorPolynomial,
) -> Result<GreenResidual> {
    let jx = apply_skew(j, x)?;
    let jy = apply_skew(j, y)?;
    let first = l2_inner_product(&jx, y)?;
    let second = l2_inner_product(x, &jy)?;

    let layout = triplet.layout();
    let gx = trace_of_polynomial(x, &layout)?;
    let gy = trace_of_polynomial(y, &layout)?;
    let trace_form = block_form(&triplet.q_matrix, &gx, &gy, &layout);

    let (g0x, g1x) = triplet.apply(&gx);
    let (g0y, g1y) = triplet.apply(&gy);
    let map_form = vec_inner(&g1x, &g0y) + vec_inner(&g0x, &g1y);

    Ok(GreenResidual {
        interior: first + second,
        trace_form,
        map_form,
        scale: 1f64.max(first.norm()).max(second.norm()),
    })
}

/// Random vector polynomial: each component has a degree drawn uniformly
/// from `0..=max_degree` and coefficients uniform in `[0,1) + i[0,1)`.
pub fn random_vector_polynomial<R: Rng>(
    rng: &mut R,
    n: usize,
    max_degree: usize,
    interval: Interval,
) -> VectorPolynomial {
    let max_degree = max_degree.min(MAX_DEGREE);
    let components = (0..n)
        .map(|_| {
            let degree = rng.gen_range(0..=max_degree);
            (0..=degree)
                .map(|_| C64::new(rng.gen::<f64>(), rng.gen::<f64>()))
                .collect()
        })
        .collect();
    VectorPolynomial {
        components,
        interval,
    }
}

/// Summary of a seeded batch of Green-identity residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualStats {
    pub count: usize,
    pub seed: u64,
    pub max_degree: usize,
    /// Largest `|interior − trace form| / scale`.
    pub max_trace_relative: f64,
    /// Largest `|interior − map form| / scale`.
    pub max_map_relative: f64,
    pub max_absolute: f64,
}

impl ResidualStats {
    fn new(seed: u64, max_degree: usize) -> Self {
        Self {
            count: 0,
            seed,
            max_degree,
            max_trace_relative: 0.0,
            max_map_relative: 0.0,
            max_absolute: 0.0,
        }
    }

    fn record(&mut self, r: &GreenResidual) {
        self.count += 1;
        self.max_trace_relative = self.max_trace_relative.max(r.trace_residual() / r.scale);
        self.max_map_relative = self.max_map_relative.max(r.map_residual() / r.scale);
        self.max_absolute = self.max_absolute.max(r.residual());
    }

    pub fn max_relative(&self) -> f64 {
        self.max_trace_relative.max(self.max_map_relative)
    }
}

/// Runs `samples` seeded random pairs `(x, y)` through [`green_residual_range`].
pub fn range_residual_batch(
    pair: &EvenOrderOperatorPair,
    triplet: &RangeTriplet,
    samples: usize,
    seed: u64,
    max_degree: usize,
) -> Result<ResidualStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = ResidualStats::new(seed, max_degree);
    for _ in 0..samples {
        let x = random_vector_polynomial(&mut rng, pair.n(), max_degree, pair.interval());
        let y = random_vector_polynomial(&mut rng, pair.n(), max_degree, pair.interval());
        stats.record(&green_residual_range(pair, triplet, &x, &y)?);
    }
    Ok(stats)
}

/// Runs `samples` seeded random pairs `(x, y)` through [`green_residual_skew`].
pub fn skew_residual_batch(
    j: &SkewOperator,
    triplet: &SkewTriplet,
    samples: usize,
    seed: u64,
    max_degree: usize,
) -> Result<ResidualStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = ResidualStats::new(seed, max_degree);
    for _ in 0..samples {
        let x = random_vector_polynomial(&mut rng, j.n(), max_degree, j.interval());
        let y = random_vector_polynomial(&mut rng, j.n(), max_degree, j.interval());
        stats.record(&green_residual_skew(j, triplet, &x, &y)?);
    }
    Ok(stats)
}
