//! Boundary matrices and boundary triplets.
//!
//! The range triplet maps the trace vector `γx` (depth `2N`) to
//! `(Γ₀x, Γ₁x) ∈ ℂ^g × ℂ^g` such that
//! `⟨𝒮x, 𝒫y⟩ − ⟨𝒫x, 𝒮y⟩ = ⟨Γ₁x, Γ₀y⟩ − ⟨Γ₀x, Γ₁y⟩`. The skew triplet does
//! the same for `𝒥` on the depth-`M` trace with
//! `⟨𝒥x, y⟩ + ⟨x, 𝒥y⟩ = ⟨Γ̂₁x, Γ̂₀y⟩ + ⟨Γ̂₀x, Γ̂₁y⟩`.

use crate::error::{Error, Result};
use crate::greens::VectorPolynomial;
use crate::numkernel::{
    numerical_rank, re, reduced_spectral_factorization, ComplexMatrix, ReducedFactorization, C64,
    DEFAULT_RANK_RTOL,
};
use crate::opspec::{
    check_maxwell_symmetry, check_mixed_order, check_skew_parity, EvenOrderOperatorPair,
    SkewOperator,
};

/// Relative tolerance for the structural coefficient checks performed by
/// the triplet constructors.
pub const DEFAULT_STRUCTURAL_TOL: f64 = 1e-10;

/// Layout of the trace vector
/// `[x(b), x′(b), …, x^{(d−1)}(b), x(a), …, x^{(d−1)}(a)]`, each entry a
/// block of `n` components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceLayout {
    pub n: usize,
    pub depth: usize,
}

impl TraceLayout {
    pub fn new(n: usize, depth: usize) -> Self {
        Self { n, depth }
    }

    /// Length of one side (`d·n`).
    pub fn side(&self) -> usize {
        self.depth * self.n
    }

    /// Full length `2·d·n`.
    pub fn total(&self) -> usize {
        2 * self.side()
    }

    /// Position of component `i` of `x^{(order)}` at the right endpoint
    /// (`at_b = true`) or the left endpoint.
    pub fn index(&self, at_b: bool, order: usize, component: usize) -> usize {
        let offset = if at_b { 0 } else { self.side() };
        offset + order * self.n + component
    }
}

/// Evaluates `γx` for a vector polynomial in the given layout.
pub fn trace_of_polynomial(x: &VectorPolynomial, layout: &TraceLayout) -> Result<Vec<C64>> {
    if x.n() != layout.n {
        return Err(Error::DimensionMismatch(format!(
            "trace layout expects {} components, polynomial has {}",
            layout.n,
            x.n()
        )));
    }
    let interval = x.interval();
    let mut gamma = Vec::with_capacity(layout.total());
    for endpoint in [interval.b(), interval.a()] {
        for order in 0..layout.depth {
            gamma.extend(x.derivative(order).evaluate(endpoint));
        }
    }
    Ok(gamma)
}

/// How the range boundary maps were assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripletMode {
    /// `A` invertible: `[Γ₀; Γ₁] = (1/√2)[[A, −A], [−I, −I]]`.
    FullRank,
    /// `A` singular: maps built from the reduced factorization `U_r D_r U_r^H`.
    Reduced,
}

impl TripletMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            TripletMode::FullRank => "full_rank",
            TripletMode::Reduced => "reduced",
        }
    }
}

/// Boundary triplet for the range representation of `(𝒫, 𝒮)`.
#[derive(Debug, Clone)]
pub struct RangeTriplet {
    pub a_matrix: ComplexMatrix,
    pub b_matrix: ComplexMatrix,
    pub factorization: ReducedFactorization,
    pub boundary_space_dim: usize,
    /// `g x 4Nn`, acting on the trace vector.
    pub gamma0_matrix: ComplexMatrix,
    /// `g x 4Nn`, acting on the trace vector.
    pub gamma1_matrix: ComplexMatrix,
    pub mode: TripletMode,
    layout: TraceLayout,
}

impl RangeTriplet {
    pub fn layout(&self) -> TraceLayout {
        self.layout
    }

    /// `[Γ₀; Γ₁]` as one `2g x 4Nn` matrix.
    pub fn stacked_maps(&self) -> ComplexMatrix {
        ComplexMatrix::vstack(&[&self.gamma0_matrix, &self.gamma1_matrix])
    }

    /// `(Γ₀x, Γ₁x)` for a trace vector `γx`.
    pub fn apply(&self, trace: &[C64]) -> (Vec<C64>, Vec<C64>) {
        (
            self.gamma0_matrix.mat_vec(trace),
            self.gamma1_matrix.mat_vec(trace),
        )
    }

    /// Assembles the triplet from a boundary matrix `B` without checking the
    /// structural assumptions on the coefficients.
    pub fn from_boundary_matrix(b_matrix: ComplexMatrix, n: usize, rtol: f64) -> Result<Self> {
        let dim = b_matrix.rows();
        if !b_matrix.is_square() || n == 0 || !dim.is_multiple_of(2 * n) {
            return Err(Error::DimensionMismatch(format!(
                "boundary matrix {}x{} does not match n = {n}",
                b_matrix.rows(),
                b_matrix.cols()
            )));
        }
        let a_matrix = &b_matrix - &b_matrix.adjoint();
        let factorization = reduced_spectral_factorization(&a_matrix, rtol)?;
        let g = factorization.rank;
        let layout = TraceLayout::new(n, dim / n);
        let s = std::f64::consts::FRAC_1_SQRT_2;

        let (mode, gamma0, gamma1) = if g == dim {
            let id = ComplexMatrix::identity(dim).scale_real(-s);
            let a = a_matrix.scale_real(s);
            (
                TripletMode::FullRank,
                ComplexMatrix::hstack(&[&a, &(-&a)]),
                ComplexMatrix::hstack(&[&id, &id]),
            )
        } else {
            let uh = factorization.u_r.adjoint();
            let du = (&factorization.d_matrix() * &uh).scale_real(s);
            let minus_u = uh.scale_real(-s);
            (
                TripletMode::Reduced,
                ComplexMatrix::hstack(&[&du, &(-&du)]),
                ComplexMatrix::hstack(&[&minus_u, &minus_u]),
            )
        };
        Ok(Self {
            a_matrix,
            b_matrix,
            factorization,
            boundary_space_dim: g,
            gamma0_matrix: gamma0,
            gamma1_matrix: gamma1,
            mode,
            layout,
        })
    }
}

/// The boundary matrix `B` (`2Nn x 2Nn`) with `A = B − B^H`.
///
/// Block indices are derivative orders `0..2N`. For every `l = 1..N`,
/// `k = 0..l−1` and odd `m` in `2l−1..=2N−1` the term `M_lkm` contributes
/// `(−1)^k S_{(m+1)/2}^H P_{(m+1−2l)/2}` at block `(m−k, m+1−2l+k)` and
/// `(−1)^k S_{(m+1−2l)/2}^H P_{(m+1)/2}` at block `(m+1−2l+k, m−k)`;
/// `B` is the adjoint of the sum.
pub fn build_boundary_matrix(pair: &EvenOrderOperatorPair) -> Result<ComplexMatrix> {
    let order = pair.order();
    if order == 0 {
        return Err(Error::OrderZero);
    }
    let n = pair.n();
    let mut sum = ComplexMatrix::zeros(2 * order * n, 2 * order * n);
    for l in 1..=order {
        for k in 0..l {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for m in (2 * l - 1..2 * order).step_by(2) {
                let hi = m.div_ceil(2);
                let lo = (m + 1 - 2 * l) / 2;
                let row = m - k;
                let col = m + 1 - 2 * l + k;
                let first = (&pair.s(hi).adjoint() * &pair.p(lo)).scale_real(sign);
                let second = (&pair.s(lo).adjoint() * &pair.p(hi)).scale_real(sign);
                sum.add_to_block(row * n, col * n, &first);
                sum.add_to_block(col * n, row * n, &second);
            }
        }
    }
    Ok(sum.adjoint())
}

/// Range boundary triplet for a pair satisfying Maxwell reciprocity and the
/// mixed-order condition.
pub fn build_range_triplet(pair: &EvenOrderOperatorPair, rtol: f64) -> Result<RangeTriplet> {
    let maxwell = check_maxwell_symmetry(pair, DEFAULT_STRUCTURAL_TOL);
    if !maxwell.pass {
        return Err(Error::AssumptionViolated(format!(
            "Maxwell reciprocity fails (defect {:.3e}, allowed {:.3e})",
            maxwell.defect, maxwell.allowed
        )));
    }
    if !check_mixed_order(pair) {
        return Err(Error::AssumptionViolated(
            "no P_k and S_l with k != l are both nonzero".into(),
        ));
    }
    RangeTriplet::from_boundary_matrix(build_boundary_matrix(pair)?, pair.n(), rtol)
}

/// The Hermitian matrix `Q` (`Mn x Mn`): block `(r, s)` (0-based) equals
/// `(−1)^r J_{r+s+1}` when `r + s + 1 ≤ M` and vanishes otherwise.
pub fn build_q_matrix(j: &SkewOperator) -> Result<ComplexMatrix> {
    let parity = check_skew_parity(j, DEFAULT_STRUCTURAL_TOL);
    if !parity.pass {
        return Err(Error::ParityViolated(parity.defect));
    }
    let (m, n) = (j.order(), j.n());
    let mut q = ComplexMatrix::zeros(m * n, m * n);
    for r in 0..m {
        for s in 0..m - r {
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            q.set_block(r * n, s * n, &j.coeff(r + s + 1).scale_real(sign));
        }
    }
    Ok(q)
}

/// Boundary triplet for the skew operator `𝒥`.
#[derive(Debug, Clone)]
pub struct SkewTriplet {
    pub q_matrix: ComplexMatrix,
    /// `Q = S_r K_r S_r^H` with `u_r = S_r` and real `d_r = K_r`.
    pub factorization: ReducedFactorization,
    pub boundary_space_dim: usize,
    /// `g_Q x 2Mn`, acting on the trace vector.
    pub gamma0_matrix: ComplexMatrix,
    /// `g_Q x 2Mn`, acting on the trace vector.
    pub gamma1_matrix: ComplexMatrix,
    layout: TraceLayout,
}

impl SkewTriplet {
    pub fn layout(&self) -> TraceLayout {
        self.layout
    }

    pub fn stacked_maps(&self) -> ComplexMatrix {
        ComplexMatrix::vstack(&[&self.gamma0_matrix, &self.gamma1_matrix])
    }

    pub fn apply(&self, trace: &[C64]) -> (Vec<C64>, Vec<C64>) {
        (
            self.gamma0_matrix.mat_vec(trace),
            self.gamma1_matrix.mat_vec(trace),
        )
    }
}

/// `[Γ̂₀; Γ̂₁] = (1/√2)[[K_r, −K_r], [I, I]] · blockdiag(S_r^H, S_r^H)`.
pub fn build_skew_triplet(j: &SkewOperator, rtol: f64) -> Result<SkewTriplet> {
    let q = build_q_matrix(j)?;
    let factorization = reduced_spectral_factorization(&q, rtol)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let sh = factorization.u_r.adjoint();
    let ks = (&factorization.d_matrix() * &sh).scale_real(s);
    let plain = sh.scale_real(s);
    Ok(SkewTriplet {
        boundary_space_dim: factorization.rank,
        gamma0_matrix: ComplexMatrix::hstack(&[&ks, &(-&ks)]),
        gamma1_matrix: ComplexMatrix::hstack(&[&plain, &plain]),
        factorization,
        q_matrix: q,
        layout: TraceLayout::new(j.n(), j.order()),
    })
}

/// `(√2/2)·[[A^{−1}, −I], [−A^{−1}, −I]]`, the inverse of the full-rank
/// boundary-map matrix, so `γx = triplet_to_trace(A)·Γx`.
pub fn triplet_to_trace(a_matrix: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a_matrix.is_square() {
        return Err(Error::DimensionMismatch(
            "boundary matrix must be square".into(),
        ));
    }
    let dim = a_matrix.rows();
    if dim == 0 || numerical_rank(a_matrix, DEFAULT_RANK_RTOL)? < dim {
        return Err(Error::SingularA);
    }
    let inv = a_matrix.try_inverse().ok_or(Error::SingularA)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let inv = inv.scale(re(h));
    let minus_id = ComplexMatrix::identity(dim).scale_real(-h);
    let top = ComplexMatrix::hstack(&[&inv, &minus_id]);
    let bottom = ComplexMatrix::hstack(&[&(-&inv), &minus_id]);
    Ok(ComplexMatrix::vstack(&[&top, &bottom]))
}
