//! The subcommands. Each returns a JSON report, a short text summary and,
//! when the run must end with a nonzero exit code, the reason.

use pht_core::classify::{
    check_generalized_ph, classify_relation_bc, classify_skew_bc, trace_bc_to_triplet_bc,
    RelationBC, SkewBC,
};
use pht_core::coercivity::{coercivity_scan, direct_coercivity};
use pht_core::fixtures::{self, RodParameters};
use pht_core::greens::{range_residual_batch, skew_residual_batch};
use pht_core::opspec::{
    check_maxwell_symmetry, check_mixed_order, check_skew_parity, defect_dimensions,
    EvenOrderOperatorPair,
};
use pht_core::triplet::{build_range_triplet, build_skew_triplet, RangeTriplet};
use pht_core::{Error, Tolerances};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report;
use crate::spec::{matrix_spec, parse_matrix, BoundarySpec, ProblemSpec};

pub struct CommandOutput {
    pub report: Value,
    pub summary: Vec<String>,
    pub failure: Option<CliError>,
}

impl CommandOutput {
    fn ok(report: Value, summary: Vec<String>) -> Self {
        Self {
            report,
            summary,
            failure: None,
        }
    }
}

/// Seed and sample count of the sign-orientation evidence in triplet reports.
const ORIENTATION_SEED: u64 = 0;
const ORIENTATION_SAMPLES: usize = 20;

fn ensure_structure(pair: &EvenOrderOperatorPair, tols: &Tolerances) -> Result<(), CliError> {
    let maxwell = check_maxwell_symmetry(pair, tols.structural);
    if !maxwell.pass {
        return Err(Error::AssumptionViolated(format!(
            "Maxwell reciprocity fails (defect {:.3e}, allowed {:.3e})",
            maxwell.defect, maxwell.allowed
        ))
        .into());
    }
    Ok(())
}

fn range_triplet(
    pair: &EvenOrderOperatorPair,
    tols: &Tolerances,
) -> Result<RangeTriplet, CliError> {
    ensure_structure(pair, tols)?;
    Ok(build_range_triplet(pair, tols.rank_rtol)?)
}

pub fn check(spec: &ProblemSpec, tols: &Tolerances) -> Result<CommandOutput, CliError> {
    let pair = spec.pair()?;
    let skew = spec.skew()?;
    let maxwell = check_maxwell_symmetry(&pair, tols.structural);
    let mixed = check_mixed_order(&pair);
    let parity = skew.as_ref().map(|j| check_skew_parity(j, tols.structural));
    let defects = defect_dimensions(&pair, tols.deg_tol);
    let certificate = coercivity_scan(&pair, tols.k_max);
    let direct = direct_coercivity(&pair);

    let mut summary = vec![
        format!(
            "maxwell symmetry: {} (defect {:.3e})",
            pass_word(maxwell.pass),
            maxwell.defect
        ),
        format!("mixed order: {}", pass_word(mixed)),
    ];
    if let Some(p) = &parity {
        summary.push(format!(
            "skew parity: {} (defect {:.3e})",
            pass_word(p.pass),
            p.defect
        ));
    }
    let defects_json = match &defects {
        Ok(d) => {
            summary.push(format!("defect dimensions: ({}, {})", d.plus, d.minus));
            json!({ "plus": d.plus, "minus": d.minus, "triplet_exists": d.triplet_exists() })
        }
        Err(e) => {
            summary.push(format!("defect dimensions: {e}"));
            json!({ "error": e.to_string() })
        }
    };
    summary.push(format!(
        "coercivity ({}): c^2_min = {:.6e} at k = {}, certified = {}",
        pht_core::coercivity::CoercivityCertificate::LABEL,
        certificate.c_squared_min,
        certificate.argmin_k,
        certificate.certified
    ));
    if let Some(c2) = direct {
        summary.push(format!(
            "constant multiplication operator bound: c^2 >= {c2:.6e}"
        ));
    }

    let failure = if !maxwell.pass || !mixed || parity.as_ref().is_some_and(|p| !p.pass) {
        Some(CliError::Assumption("structural checks failed".into()))
    } else {
        match &defects {
            Err(e) => Some(CliError::Core(e.clone())),
            Ok(d) if !d.triplet_exists() => Some(CliError::Assumption(format!(
                "defect dimensions differ ({}, {})",
                d.plus, d.minus
            ))),
            Ok(_) => None,
        }
    };
    let report = json!({
        "command": "check",
        "tolerances": report::tolerances(tols),
        "structural": {
            "maxwell_symmetry": report::structural(&maxwell),
            "mixed_order": mixed,
            "skew_parity": parity.as_ref().map(report::structural),
        },
        "defect_dimensions": defects_json,
        "coercivity": report::certificate(&certificate, direct),
        "assumptions_satisfied": failure.is_none(),
    });
    Ok(CommandOutput {
        report,
        summary,
        failure,
    })
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

/// Green residuals of the built triplet and of the one with `A` negated,
/// documenting which sign convention the integration oracle accepts.
fn orientation_check(
    pair: &EvenOrderOperatorPair,
    triplet: &RangeTriplet,
    tols: &Tolerances,
) -> Result<Value, CliError> {
    let degree = 2 * pair.order() + 4;
    let flipped =
        RangeTriplet::from_boundary_matrix(triplet.b_matrix.adjoint(), pair.n(), tols.rank_rtol)?;
    let ours = range_residual_batch(pair, triplet, ORIENTATION_SAMPLES, ORIENTATION_SEED, degree)?;
    let theirs = range_residual_batch(
        pair,
        &flipped,
        ORIENTATION_SAMPLES,
        ORIENTATION_SEED,
        degree,
    )?;
    Ok(json!({
        "samples": ORIENTATION_SAMPLES,
        "seed": ORIENTATION_SEED,
        "max_degree": degree,
        "residual": ours.max_trace_relative,
        "negated_a_residual": theirs.max_trace_relative,
    }))
}

pub fn triplet(spec: &ProblemSpec, tols: &Tolerances) -> Result<CommandOutput, CliError> {
    let pair = spec.pair()?;
    let range = range_triplet(&pair, tols)?;
    let mut summary = vec![format!(
        "range triplet: mode {}, g = {}",
        range.mode.as_str(),
        range.boundary_space_dim
    )];
    let range_json = json!({
        "B": report::matrix(&range.b_matrix),
        "A": report::matrix(&range.a_matrix),
        "mode": range.mode.as_str(),
        "boundary_space_dim": range.boundary_space_dim,
        "factorization": report::factorization(&range.factorization),
        "gamma0": report::matrix(&range.gamma0_matrix),
        "gamma1": report::matrix(&range.gamma1_matrix),
        "orientation_check": orientation_check(&pair, &range, tols)?,
    });
    let skew_json = match spec.skew()? {
        Some(j) => {
            let skew = build_skew_triplet(&j, tols.rank_rtol)?;
            summary.push(format!("skew triplet: g_Q = {}", skew.boundary_space_dim));
            json!({
                "Q": report::matrix(&skew.q_matrix),
                "boundary_space_dim": skew.boundary_space_dim,
                "factorization": report::factorization(&skew.factorization),
                "gamma0": report::matrix(&skew.gamma0_matrix),
                "gamma1": report::matrix(&skew.gamma1_matrix),
            })
        }
        None => Value::Null,
    };
    let report = json!({
        "command": "triplet",
        "tolerances": report::tolerances(tols),
        "range": range_json,
        "skew": skew_json,
    });
    Ok(CommandOutput::ok(report, summary))
}

pub fn classify(spec: &ProblemSpec, tols: &Tolerances) -> Result<CommandOutput, CliError> {
    let bc = spec
        .boundary_conditions
        .as_ref()
        .ok_or_else(|| CliError::Parse("spec has no boundary_conditions".into()))?;
    let pair = spec.pair()?;
    let range = range_triplet(&pair, tols)?;
    let g = range.boundary_space_dim;
    let (relation, skew_bc) = match bc {
        BoundarySpec::Trace { qb, rb } => {
            let relation = trace_bc_to_triplet_bc(
                &parse_matrix("Q_b", qb)?,
                &parse_matrix("R_b", rb)?,
                &range,
            )?;
            (relation, None)
        }
        BoundarySpec::Triplet { k, l, f, e } => {
            let relation = RelationBC::new(parse_matrix("K", k)?, parse_matrix("L", l)?)?;
            let skew_bc = match (f, e) {
                (Some(f), Some(e)) => {
                    Some(SkewBC::new(parse_matrix("F", f)?, parse_matrix("E", e)?)?)
                }
                (None, None) => None,
                _ => return Err(CliError::Parse("F and E must be given together".into())),
            };
            (relation, skew_bc)
        }
    };
    if relation.boundary_space_dim() != g {
        return Err(Error::DimensionMismatch(format!(
            "(K, L) are {0}x{0}, range boundary space has dimension {g}",
            relation.boundary_space_dim()
        ))
        .into());
    }
    let relation_report = classify_relation_bc(&relation, tols)?;
    let mut summary = vec![format!(
        "relation: self_adjoint = {}, maximally_dissipative = {}, rk [K L] = {}",
        relation_report.adjoint,
        relation_report.maximally_dissipative,
        relation_report.combined_rank
    )];
    let mut report = json!({
        "command": "classify",
        "tolerances": report::tolerances(tols),
        "K": report::matrix(&relation.k_matrix),
        "L": report::matrix(&relation.l_matrix),
        "relation": report::classification(&relation_report),
        "skew": Value::Null,
        "generalized_ph": Value::Null,
    });
    if let Some(skew_bc) = skew_bc {
        let j = spec
            .skew()?
            .ok_or_else(|| CliError::Parse("F and E need a skew operator J".into()))?;
        let skew_triplet = build_skew_triplet(&j, tols.rank_rtol)?;
        let ph = check_generalized_ph(&relation, &range, &skew_bc, &skew_triplet, tols)?;
        let skew_report = classify_skew_bc(&skew_bc, tols)?;
        summary.push(format!(
            "skew: skew_adjoint = {}, maximally_dissipative = {}; generalized port-Hamiltonian = {}",
            skew_report.adjoint, skew_report.maximally_dissipative, ph.is_generalized_ph
        ));
        report["skew"] = report::classification(&skew_report);
        report["generalized_ph"] = json!(ph.is_generalized_ph);
    }
    Ok(CommandOutput::ok(report, summary))
}

pub fn green(
    spec: &ProblemSpec,
    tols: &Tolerances,
    samples: usize,
    seed: u64,
    degree: Option<usize>,
) -> Result<CommandOutput, CliError> {
    let pair = spec.pair()?;
    let range = range_triplet(&pair, tols)?;
    let degree = degree.unwrap_or(2 * pair.order() + 4);
    let stats = range_residual_batch(&pair, &range, samples, seed, degree)?;
    let mut pass = stats.max_relative() <= tols.green;
    let mut summary = vec![format!(
        "range green identity: {} samples, max relative residual {:.3e} (seed {seed}, degree <= {degree})",
        stats.count,
        stats.max_relative()
    )];
    let skew_json = match spec.skew()? {
        Some(j) => {
            let skew = build_skew_triplet(&j, tols.rank_rtol)?;
            let skew_stats = skew_residual_batch(&j, &skew, samples, seed, degree)?;
            pass &= skew_stats.max_relative() <= tols.green;
            summary.push(format!(
                "skew green identity: {} samples, max relative residual {:.3e}",
                skew_stats.count,
                skew_stats.max_relative()
            ));
            report::residuals(&skew_stats, tols.green)
        }
        None => Value::Null,
    };
    let report = json!({
        "command": "green",
        "tolerances": report::tolerances(tols),
        "range": report::residuals(&stats, tols.green),
        "skew": skew_json,
    });
    let failure =
        (!pass).then(|| CliError::Assumption("Green identity residual exceeds tolerance".into()));
    Ok(CommandOutput {
        report,
        summary,
        failure,
    })
}

pub fn coercivity(spec: &ProblemSpec, tols: &Tolerances) -> Result<CommandOutput, CliError> {
    let pair = spec.pair()?;
    let cert = coercivity_scan(&pair, tols.k_max);
    let direct = direct_coercivity(&pair);
    let per_mode: Vec<Value> = cert
        .per_mode
        .iter()
        .enumerate()
        .map(|(i, (cp, cs))| json!({ "k": i + 1, "c_p": cp, "c_s": cs }))
        .collect();
    let summary = vec![format!(
        "{}: c^2_min = {:.6e} at k = {}, tail {:?}, certified = {}",
        pht_core::coercivity::CoercivityCertificate::LABEL,
        cert.c_squared_min,
        cert.argmin_k,
        cert.tail_status,
        cert.certified
    )];
    let report = json!({
        "command": "coercivity",
        "tolerances": report::tolerances(tols),
        "certificate": report::certificate(&cert, direct),
        "modes": per_mode,
    });
    Ok(CommandOutput::ok(report, summary))
}

/// The bundled worked examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExampleName {
    Dzektser,
    DzektserDirichlet,
    Wave,
    Rod,
}

impl ExampleName {
    pub fn file_stem(&self) -> &'static str {
        match self {
            ExampleName::Dzektser => "dzektser",
            ExampleName::DzektserDirichlet => "dzektser-dirichlet",
            ExampleName::Wave => "wave",
            ExampleName::Rod => "rod",
        }
    }
}

fn spec_from_pair(pair: &EvenOrderOperatorPair) -> ProblemSpec {
    ProblemSpec {
        interval: [pair.interval().a(), pair.interval().b()],
        n: pair.n(),
        order: pair.order(),
        p: pair.p_coeffs().iter().map(matrix_spec).collect(),
        s: pair.s_coeffs().iter().map(matrix_spec).collect(),
        skew_order: None,
        j: None,
        boundary_conditions: None,
        tolerances: None,
        k_max: None,
    }
}

fn with_skew(mut spec: ProblemSpec, j: &pht_core::opspec::SkewOperator) -> ProblemSpec {
    spec.skew_order = Some(j.order());
    spec.j = Some(j.coeffs().iter().map(matrix_spec).collect());
    spec
}

/// Fixture spec for `name`.
pub fn example_spec(name: ExampleName, rod: RodParameters) -> Result<ProblemSpec, CliError> {
    Ok(match name {
        ExampleName::Dzektser => spec_from_pair(&fixtures::dzektser()),
        ExampleName::DzektserDirichlet => {
            let (qb, rb) = fixtures::dzektser_dirichlet();
            let mut spec = spec_from_pair(&fixtures::dzektser());
            spec.boundary_conditions = Some(BoundarySpec::Trace {
                qb: matrix_spec(&qb),
                rb: matrix_spec(&rb),
            });
            spec
        }
        ExampleName::Wave => with_skew(
            spec_from_pair(&fixtures::wave_pair()),
            &fixtures::wave_skew(),
        ),
        ExampleName::Rod => {
            let id = pht_core::ComplexMatrix::identity(2);
            let zero = pht_core::ComplexMatrix::zeros(2, 2);
            let mut spec = with_skew(
                spec_from_pair(&fixtures::rod_pair(rod)?),
                &fixtures::rod_skew(),
            );
            spec.boundary_conditions = Some(BoundarySpec::Triplet {
                k: matrix_spec(&id),
                l: matrix_spec(&(-&id)),
                f: Some(matrix_spec(&zero)),
                e: Some(matrix_spec(&id)),
            });
            spec
        }
    })
}

fn rod_notes(rod: RodParameters, triplet_report: &Value) -> Vec<String> {
    let mu_t = rod.mu * rod.tension;
    let check = &triplet_report["range"]["orientation_check"];
    vec![format!(
        "On the (x2, x2') traces the boundary matrix is [[0, {mu_t}], [{}, 0]]. The integration oracle \
         confirms this orientation (relative residual {:.1e}) and rejects the opposite sign \
         [[0, {}], [{mu_t}, 0]] (relative residual {:.1e}).",
        -mu_t,
        check["residual"].as_f64().unwrap_or(f64::NAN),
        -mu_t,
        check["negated_a_residual"].as_f64().unwrap_or(f64::NAN),
    )]
}

/// Expected reports for a spec: `check`, `triplet` and, when boundary
/// conditions are present, `classify`.
pub fn expected_reports(spec: &ProblemSpec, tols: &Tolerances) -> Result<Value, CliError> {
    let mut expected = json!({
        "check": check(spec, tols)?.report,
        "triplet": triplet(spec, tols)?.report,
    });
    if spec.boundary_conditions.is_some() {
        expected["classify"] = classify(spec, tols)?.report;
    }
    Ok(expected)
}

/// Returns the fixture spec and its expected-report bundle.
pub fn example(name: ExampleName, rod: RodParameters) -> Result<(ProblemSpec, Value), CliError> {
    let spec = example_spec(name, rod)?;
    let tols = spec.tolerances(None, None)?;
    let mut expected = expected_reports(&spec, &tols)?;
    expected["fixture"] = json!(name.file_stem());
    let notes = match name {
        ExampleName::Rod => rod_notes(rod, &expected["triplet"]),
        _ => Vec::new(),
    };
    expected["notes"] = json!(notes);
    Ok((spec, expected))
}
