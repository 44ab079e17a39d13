//! JSON encoding of library results.

use pht_core::classify::ClassificationReport;
use pht_core::coercivity::{CoercivityCertificate, TailStatus};
use pht_core::greens::ResidualStats;
use pht_core::numkernel::{ComplexMatrix, ReducedFactorization, SpectralKind};
use pht_core::opspec::StructuralCheck;
use pht_core::{Tolerances, C64};
use serde_json::{json, Value};

use crate::spec::matrix_spec;

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix(m: &ComplexMatrix) -> Value {
    serde_json::to_value(matrix_spec(m)).expect("matrix serializes")
}

pub fn tolerances(t: &Tolerances) -> Value {
    json!({
        "rank_rtol": t.rank_rtol,
        "structural": t.structural,
        "classify": t.classify,
        "green": t.green,
        "deg_tol": t.deg_tol,
        "k_max": t.k_max,
    })
}

pub fn structural(check: &StructuralCheck) -> Value {
    json!({
        "pass": check.pass,
        "defect": check.defect,
        "allowed": check.allowed,
        "worst_index": check.worst_index,
    })
}

pub fn factorization(f: &ReducedFactorization) -> Value {
    let kind = match f.kind {
        SpectralKind::Hermitian => "hermitian",
        SpectralKind::SkewHermitian => "skew_hermitian",
    };
    json!({
        "kind": kind,
        "rank": f.rank,
        "u_r": matrix(&f.u_r),
        "d_r": f.d_r.iter().copied().map(complex).collect::<Vec<_>>(),
    })
}

pub fn classification(r: &ClassificationReport) -> Value {
    let verdict = match r.kind {
        pht_core::classify::BoundaryKind::Relation => "self_adjoint",
        pht_core::classify::BoundaryKind::Skew => "skew_adjoint",
    };
    let mut value = json!({
        "symmetry_defect": r.symmetry_defect,
        "symmetry_allowed": r.symmetry_allowed,
        "dissipativity_min_eig": r.dissipativity_min_eig,
        "combined_rank": r.combined_rank,
        "boundary_space_dim": r.boundary_space_dim,
        "maximally_dissipative": r.maximally_dissipative,
    });
    value[verdict] = json!(r.adjoint);
    value
}

pub fn certificate(cert: &CoercivityCertificate, direct: Option<f64>) -> Value {
    let tail = match cert.tail_status {
        TailStatus::CertifiedAt(k) => json!({ "certified_at": k }),
        TailStatus::Uncertified => json!("uncertified"),
    };
    json!({
        "label": CoercivityCertificate::LABEL,
        "c_squared_min": cert.c_squared_min,
        "argmin_k": cert.argmin_k,
        "k_max_scanned": cert.k_max_scanned,
        "tail_status": tail,
        "certified": cert.certified,
        "constant_multiplication_bound": direct,
    })
}

pub fn residuals(stats: &ResidualStats, tolerance: f64) -> Value {
    json!({
        "count": stats.count,
        "seed": stats.seed,
        "max_degree": stats.max_degree,
        "max_trace_form_relative": stats.max_trace_relative,
        "max_map_form_relative": stats.max_map_relative,
        "max_absolute": stats.max_absolute,
        "tolerance": tolerance,
        "pass": stats.max_relative() <= tolerance,
    })
}
