//! Classification of boundary conditions in the boundary space, plus a
//! brute-force oracle working directly with linear relations `Θ ⊂ ℂ^g × ℂ^g`.

use crate::error::{Error, Result};
use crate::numkernel::{
    column_space, is_psd, min_eigenvalue, null_space, numerical_rank, projector, subspace_distance,
    ComplexMatrix,
};
use crate::triplet::{triplet_to_trace, RangeTriplet, SkewTriplet, TripletMode};
use crate::Tolerances;

fn check_square_pair(first: &ComplexMatrix, second: &ComplexMatrix, what: &str) -> Result<usize> {
    let g = first.rows();
    for m in [first, second] {
        if m.rows() != g || m.cols() != g {
            return Err(Error::DimensionMismatch(format!(
                "{what} matrices must both be {g}x{g}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    Ok(g)
}

/// Boundary condition `Γx ∈ Θ = ker [K L]` for the range triplet.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationBC {
    pub k_matrix: ComplexMatrix,
    pub l_matrix: ComplexMatrix,
}

impl RelationBC {
    pub fn new(k_matrix: ComplexMatrix, l_matrix: ComplexMatrix) -> Result<Self> {
        check_square_pair(&k_matrix, &l_matrix, "K and L")?;
        Ok(Self { k_matrix, l_matrix })
    }

    pub fn boundary_space_dim(&self) -> usize {
        self.k_matrix.rows()
    }

    /// `[K L]`.
    pub fn combined(&self) -> ComplexMatrix {
        ComplexMatrix::hstack(&[&self.k_matrix, &self.l_matrix])
    }

    /// Orthonormal basis of `Θ = ker [K L] ⊂ ℂ^{2g}`.
    pub fn relation(&self, rtol: f64) -> SubspaceBasis {
        SubspaceBasis::kernel_of(&self.combined(), rtol)
    }
}

/// Boundary condition `Γ̂x ∈ ker [F E]` for the skew triplet.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewBC {
    pub f_matrix: ComplexMatrix,
    pub e_matrix: ComplexMatrix,
}

impl SkewBC {
    pub fn new(f_matrix: ComplexMatrix, e_matrix: ComplexMatrix) -> Result<Self> {
        check_square_pair(&f_matrix, &e_matrix, "F and E")?;
        Ok(Self { f_matrix, e_matrix })
    }

    pub fn boundary_space_dim(&self) -> usize {
        self.f_matrix.rows()
    }

    pub fn combined(&self) -> ComplexMatrix {
        ComplexMatrix::hstack(&[&self.f_matrix, &self.e_matrix])
    }

    pub fn relation(&self, rtol: f64) -> SubspaceBasis {
        SubspaceBasis::kernel_of(&self.combined(), rtol)
    }
}

/// Which kind of boundary condition a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Relation,
    Skew,
}

/// Verdicts with the raw numbers they were derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub kind: BoundaryKind,
    /// `‖KL^H − LK^H‖_F` (relation) or `‖FE^H + EF^H‖_F` (skew).
    pub symmetry_defect: f64,
    /// Allowance the symmetry defect is compared against.
    pub symmetry_allowed: f64,
    /// Smallest eigenvalue of `KL^H + LK^H` (relation) or `FE^H + EF^H` (skew).
    pub dissipativity_min_eig: f64,
    pub combined_rank: usize,
    pub boundary_space_dim: usize,
    /// Self-adjoint for relation conditions, skew-adjoint for skew ones.
    pub adjoint: bool,
    pub maximally_dissipative: bool,
}

impl ClassificationReport {
    pub fn self_adjoint(&self) -> Option<bool> {
        (self.kind == BoundaryKind::Relation).then_some(self.adjoint)
    }

    pub fn skew_adjoint(&self) -> Option<bool> {
        (self.kind == BoundaryKind::Skew).then_some(self.adjoint)
    }
}

fn classify_pair(
    kind: BoundaryKind,
    first: &ComplexMatrix,
    second: &ComplexMatrix,
    tols: &Tolerances,
) -> Result<ClassificationReport> {
    let g = check_square_pair(first, second, "boundary condition")?;
    let cross = first * &second.adjoint();
    let symmetric_part = &cross + &cross.adjoint();
    let symmetry = match kind {
        BoundaryKind::Relation => &cross - &cross.adjoint(),
        BoundaryKind::Skew => symmetric_part.clone(),
    };
    let scale = 1f64.max(first.spectral_norm() * second.spectral_norm());
    let allowed = tols.classify * scale;
    let combined = ComplexMatrix::hstack(&[first, second]);
    let combined_rank = if g == 0 {
        0
    } else {
        numerical_rank(&combined, tols.rank_rtol)?
    };
    let full_rank = combined_rank == g;
    let symmetry_defect = symmetry.frobenius_norm();
    let dissipativity_min_eig = if g == 0 {
        0.0
    } else {
        min_eigenvalue(&symmetric_part)?
    };
    Ok(ClassificationReport {
        kind,
        symmetry_defect,
        symmetry_allowed: allowed,
        dissipativity_min_eig,
        combined_rank,
        boundary_space_dim: g,
        adjoint: symmetry_defect <= allowed && full_rank,
        maximally_dissipative: dissipativity_min_eig >= -allowed && full_rank,
    })
}

/// Self-adjointness (`KL^H = LK^H`) and maximal dissipativity
/// (`KL^H + LK^H ≥ 0`), each together with `rk [K L] = g`.
pub fn classify_relation_bc(bc: &RelationBC, tols: &Tolerances) -> Result<ClassificationReport> {
    classify_pair(BoundaryKind::Relation, &bc.k_matrix, &bc.l_matrix, tols)
}

/// Skew-adjointness (`FE^H + EF^H = 0`) and maximal dissipativity
/// (`FE^H + EF^H ≥ 0`), each together with `rk [F E] = g_Q`.
pub fn classify_skew_bc(bc: &SkewBC, tols: &Tolerances) -> Result<ClassificationReport> {
    classify_pair(BoundaryKind::Skew, &bc.f_matrix, &bc.e_matrix, tols)
}

/// Orthonormal basis of a subspace of `ℂ^{2g}`, split as `(upper, lower)`
/// halves of length `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    pub basis: ComplexMatrix,
}

impl SubspaceBasis {
    /// Orthonormalizes the columns of `m` (rank decided by `rtol`).
    pub fn span(m: &ComplexMatrix, rtol: f64) -> Self {
        Self {
            basis: column_space(m, rtol),
        }
    }

    pub fn kernel_of(m: &ComplexMatrix, rtol: f64) -> Self {
        Self {
            basis: null_space(m, rtol),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn projector(&self) -> ComplexMatrix {
        projector(&self.basis)
    }

    /// Spectral distance between the orthogonal projectors.
    pub fn distance(&self, other: &SubspaceBasis) -> f64 {
        subspace_distance(&self.basis, &other.basis)
    }

    fn halves(&self) -> (ComplexMatrix, ComplexMatrix) {
        let g = self.ambient_dim() / 2;
        (
            self.basis.block(0, 0, g, self.dim()),
            self.basis.block(g, 0, g, self.dim()),
        )
    }

    /// `{(−h₂, h₁) : (h₁, h₂) ∈ Θ}`.
    fn flipped(&self) -> ComplexMatrix {
        let (h1, h2) = self.halves();
        ComplexMatrix::vstack(&[&(-&h2), &h1])
    }

    /// `{(h₁, −h₂) : (h₁, h₂) ∈ Θ}`.
    pub fn negated(&self) -> SubspaceBasis {
        let (h1, h2) = self.halves();
        SubspaceBasis {
            basis: ComplexMatrix::vstack(&[&h1, &(-&h2)]),
        }
    }

    /// Adjoint relation `{(g₁, g₂) : ⟨g₂, h₁⟩ = ⟨g₁, h₂⟩ ∀ (h₁, h₂) ∈ Θ}`,
    /// the orthogonal complement of the flipped relation.
    pub fn adjoint(&self, rtol: f64) -> SubspaceBasis {
        let ambient = self.ambient_dim();
        if self.dim() == 0 {
            return SubspaceBasis {
                basis: ComplexMatrix::identity(ambient),
            };
        }
        SubspaceBasis::kernel_of(&self.flipped().adjoint(), rtol)
    }
}

/// Ground-truth verdicts for a relation `Θ ⊂ ℂ^g × ℂ^g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleVerdicts {
    pub self_adjoint: bool,
    pub skew_adjoint: bool,
    pub dissipative: bool,
    pub maximal_dissipative: bool,
}

/// Decides the relation properties from their definitions:
/// `Θ = Θ*`, `Θ = −Θ*`, `Re⟨v, u⟩ ≤ 0` on `Θ`, and maximality via
/// `dim Θ = g` for dissipative relations.
pub fn oracle_classify(
    theta: &SubspaceBasis,
    g: usize,
    tols: &Tolerances,
) -> Result<OracleVerdicts> {
    if theta.ambient_dim() != 2 * g {
        return Err(Error::DimensionMismatch(format!(
            "relation lives in C^{}, expected C^{}",
            theta.ambient_dim(),
            2 * g
        )));
    }
    let tol = tols.classify.max(1e3 * tols.rank_rtol);
    let adjoint = theta.adjoint(tols.rank_rtol);
    let same = |a: &SubspaceBasis, b: &SubspaceBasis| a.dim() == b.dim() && a.distance(b) <= tol;
    let self_adjoint = same(theta, &adjoint);
    let skew_adjoint = same(theta, &adjoint.negated());
    let dissipative = if theta.dim() == 0 {
        true
    } else {
        let (z1, z2) = theta.halves();
        let cross = &z1.adjoint() * &z2;
        let form = &cross + &cross.adjoint();
        is_psd(&(-&form), tol)?
    };
    Ok(OracleVerdicts {
        self_adjoint,
        skew_adjoint,
        dissipative,
        maximal_dissipative: dissipative && theta.dim() == g,
    })
}

/// Orthonormal basis of `Θ* = ran [L^H; −K^H]`, the parameter relation of
/// the adjoint.
pub fn relation_adjoint_parameters(bc: &RelationBC, rtol: f64) -> SubspaceBasis {
    let stacked = ComplexMatrix::vstack(&[&bc.l_matrix.adjoint(), &(-&bc.k_matrix.adjoint())]);
    SubspaceBasis::span(&stacked, rtol)
}

/// Converts `Q_b·γ_b(x) + R_b·γ_a(x) = 0` into `(K, L) = ((Q_b − R_b)A^{−1}, −(Q_b + R_b))`
/// for a full-rank range triplet.
pub fn trace_bc_to_triplet_bc(
    qb: &ComplexMatrix,
    rb: &ComplexMatrix,
    triplet: &RangeTriplet,
) -> Result<RelationBC> {
    if triplet.mode != TripletMode::FullRank {
        return Err(Error::SingularA);
    }
    let dim = triplet.a_matrix.rows();
    for (name, m) in [("Q_b", qb), ("R_b", rb)] {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{}, expected {dim}x{dim}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let a_inv = triplet.a_matrix.try_inverse().ok_or(Error::SingularA)?;
    RelationBC::new(&(qb - rb) * &a_inv, -&(qb + rb))
}

/// Equivalent trace-form check: `[Q_b R_b]` composed with the map from
/// boundary values back to traces gives `[K L]` up to a factor `√2/2`.
pub fn trace_bc_kernel(
    qb: &ComplexMatrix,
    rb: &ComplexMatrix,
    triplet: &RangeTriplet,
) -> Result<ComplexMatrix> {
    let back = triplet_to_trace(&triplet.a_matrix)?;
    Ok(&ComplexMatrix::hstack(&[qb, rb]) * &back)
}

/// Outcome of the generalized port-Hamiltonian check.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPhReport {
    pub relation: ClassificationReport,
    pub skew: ClassificationReport,
    pub is_generalized_ph: bool,
}

/// True iff `(K, L)` is self-adjoint for the range triplet and `(F, E)` is
/// skew-adjoint for the skew triplet.
pub fn check_generalized_ph(
    rel: &RelationBC,
    range: &RangeTriplet,
    skew: &SkewBC,
    skew_triplet: &SkewTriplet,
    tols: &Tolerances,
) -> Result<GeneralizedPhReport> {
    if rel.boundary_space_dim() != range.boundary_space_dim {
        return Err(Error::DimensionMismatch(format!(
            "(K, L) are {0}x{0}, range boundary space has dimension {1}",
            rel.boundary_space_dim(),
            range.boundary_space_dim
        )));
    }
    if skew.boundary_space_dim() != skew_triplet.boundary_space_dim {
        return Err(Error::DimensionMismatch(format!(
            "(F, E) are {0}x{0}, skew boundary space has dimension {1}",
            skew.boundary_space_dim(),
            skew_triplet.boundary_space_dim
        )));
    }
    let relation = classify_relation_bc(rel, tols)?;
    let skew = classify_skew_bc(skew, tols)?;
    let is_generalized_ph = relation.adjoint && skew.adjoint;
    Ok(GeneralizedPhReport {
        relation,
        skew,
        is_generalized_ph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{
        dzektser, dzektser_dirichlet, rod_pair, rod_skew, wave_pair, RodParameters,
    };
    use crate::numkernel::{c, re, DEFAULT_RANK_RTOL};
    use crate::triplet::{build_range_triplet, build_skew_triplet};

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn id(g: usize) -> ComplexMatrix {
        ComplexMatrix::identity(g)
    }

    fn relation(k: ComplexMatrix, l: ComplexMatrix) -> ClassificationReport {
        classify_relation_bc(&RelationBC::new(k, l).unwrap(), &tols()).unwrap()
    }

    fn skew(f: ComplexMatrix, e: ComplexMatrix) -> ClassificationReport {
        classify_skew_bc(&SkewBC::new(f, e).unwrap(), &tols()).unwrap()
    }

    #[test]
    fn relation_examples() {
        let r = relation(id(2), -&id(2));
        assert!(r.adjoint);
        assert_eq!(r.self_adjoint(), Some(true));
        assert_eq!(r.skew_adjoint(), None);
        assert_eq!(r.combined_rank, 2);

        let r = relation(id(2), id(2));
        assert!(r.adjoint && r.maximally_dissipative);

        let r = relation(id(1), ComplexMatrix::scalar(c(-1.0, -1.0)));
        assert!(!r.adjoint && !r.maximally_dissipative);
    }

    #[test]
    fn rank_deficient_relation_is_neither() {
        let r = relation(ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 2));
        assert_eq!(r.combined_rank, 0);
        assert!(!r.adjoint && !r.maximally_dissipative);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            RelationBC::new(id(2), id(3)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            SkewBC::new(id(1), ComplexMatrix::zeros(1, 2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn skew_examples() {
        let r = skew(ComplexMatrix::zeros(2, 2), id(2));
        assert_eq!(r.skew_adjoint(), Some(true));
        let r = skew(id(2), id(2));
        assert!(r.maximally_dissipative && !r.adjoint);
        let r = skew(id(2), ComplexMatrix::zeros(2, 2));
        assert!(r.adjoint);
    }

    #[test]
    fn dzektser_dirichlet_is_self_adjoint() {
        let triplet = build_range_triplet(&dzektser(), DEFAULT_RANK_RTOL).unwrap();
        let (qb, rb) = dzektser_dirichlet();
        let bc = trace_bc_to_triplet_bc(&qb, &rb, &triplet).unwrap();
        let r = classify_relation_bc(&bc, &tols()).unwrap();
        assert!(r.adjoint);
        assert!(r.symmetry_defect <= 1e-10);
        assert_eq!(r.combined_rank, 4);
        // Same kernel as [Q_b R_b] expressed through the boundary maps.
        let k = trace_bc_kernel(&qb, &rb, &triplet).unwrap();
        let expected = bc.combined().scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!((&k - &expected).max_abs() < 1e-12);
    }

    #[test]
    fn trace_conversion_examples() {
        let triplet = build_range_triplet(&dzektser(), DEFAULT_RANK_RTOL).unwrap();
        let bc = trace_bc_to_triplet_bc(&id(4), &ComplexMatrix::zeros(4, 4), &triplet).unwrap();
        let a_inv = triplet.a_matrix.try_inverse().unwrap();
        assert!((&bc.k_matrix - &a_inv).max_abs() < 1e-14);
        assert_eq!(bc.l_matrix, -&id(4));

        let wave = build_range_triplet(&wave_pair(), DEFAULT_RANK_RTOL).unwrap();
        assert_eq!(
            trace_bc_to_triplet_bc(&id(4), &id(4), &wave).unwrap_err(),
            Error::SingularA
        );
        assert!(matches!(
            trace_bc_to_triplet_bc(&id(3), &id(4), &triplet),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn adjoint_parameter_examples() {
        let bc = RelationBC::new(id(2), -&id(2)).unwrap();
        let adjoint = relation_adjoint_parameters(&bc, DEFAULT_RANK_RTOL);
        assert!(adjoint.distance(&bc.relation(DEFAULT_RANK_RTOL)) < 1e-12);

        let bc = RelationBC::new(id(2), ComplexMatrix::zeros(2, 2)).unwrap();
        let adjoint = relation_adjoint_parameters(&bc, DEFAULT_RANK_RTOL);
        let multivalued = SubspaceBasis::span(
            &ComplexMatrix::vstack(&[&ComplexMatrix::zeros(2, 2), &id(2)]),
            DEFAULT_RANK_RTOL,
        );
        assert!(adjoint.distance(&multivalued) < 1e-12);
    }

    #[test]
    fn oracle_examples() {
        let graph_minus_one = SubspaceBasis::span(
            &ComplexMatrix::from_real_rows(&[[1.0], [-1.0]]),
            DEFAULT_RANK_RTOL,
        );
        let v = oracle_classify(&graph_minus_one, 1, &tols()).unwrap();
        assert!(v.self_adjoint && v.dissipative && v.maximal_dissipative && !v.skew_adjoint);

        let multivalued = SubspaceBasis::span(
            &ComplexMatrix::from_real_rows(&[[0.0], [1.0]]),
            DEFAULT_RANK_RTOL,
        );
        let v = oracle_classify(&multivalued, 1, &tols()).unwrap();
        assert!(v.self_adjoint && v.dissipative && v.maximal_dissipative && v.skew_adjoint);

        let graph_plus = SubspaceBasis::span(
            &ComplexMatrix::from_rows(&[vec![re(1.0)], vec![c(1.0, 1.0)]]).unwrap(),
            DEFAULT_RANK_RTOL,
        );
        let v = oracle_classify(&graph_plus, 1, &tols()).unwrap();
        assert!(!v.self_adjoint && !v.dissipative);

        let everything = SubspaceBasis::span(&id(2), DEFAULT_RANK_RTOL);
        let v = oracle_classify(&everything, 1, &tols()).unwrap();
        assert!(!v.self_adjoint && !v.dissipative);

        let nothing = SubspaceBasis::kernel_of(&id(2), DEFAULT_RANK_RTOL);
        let v = oracle_classify(&nothing, 1, &tols()).unwrap();
        assert!(v.dissipative && !v.maximal_dissipative && !v.self_adjoint);
    }

    #[test]
    fn generalized_ph_examples() {
        let range = build_range_triplet(
            &rod_pair(RodParameters::default()).unwrap(),
            DEFAULT_RANK_RTOL,
        )
        .unwrap();
        let skew_triplet = build_skew_triplet(&rod_skew(), DEFAULT_RANK_RTOL).unwrap();
        let rel = RelationBC::new(id(2), -&id(2)).unwrap();
        let good = SkewBC::new(ComplexMatrix::zeros(2, 2), id(2)).unwrap();
        let report = check_generalized_ph(&rel, &range, &good, &skew_triplet, &tols()).unwrap();
        assert!(report.is_generalized_ph);
        let bad = SkewBC::new(id(2), id(2)).unwrap();
        assert!(
            !check_generalized_ph(&rel, &range, &bad, &skew_triplet, &tols())
                .unwrap()
                .is_generalized_ph
        );
        let degenerate =
            SkewBC::new(ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 2)).unwrap();
        assert!(
            !check_generalized_ph(&rel, &range, &degenerate, &skew_triplet, &tols())
                .unwrap()
                .is_generalized_ph
        );
        let wrong_size = RelationBC::new(id(3), id(3)).unwrap();
        assert!(matches!(
            check_generalized_ph(&wrong_size, &range, &good, &skew_triplet, &tols()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn dzektser_dirichlet_with_rank_deficient_skew_pair_is_not_ph() {
        let range = build_range_triplet(&dzektser(), DEFAULT_RANK_RTOL).unwrap();
        let (qb, rb) = dzektser_dirichlet();
        let rel = trace_bc_to_triplet_bc(&qb, &rb, &range).unwrap();
        let skew_triplet = build_skew_triplet(&rod_skew(), DEFAULT_RANK_RTOL).unwrap();
        let mut f = ComplexMatrix::zeros(2, 2);
        f[(0, 0)] = re(1.0);
        let skew_bc = SkewBC::new(f.clone(), f).unwrap();
        let report = check_generalized_ph(&rel, &range, &skew_bc, &skew_triplet, &tols()).unwrap();
        assert!(report.relation.adjoint);
        assert!(!report.is_generalized_ph);
    }
}
