//! JSON problem specification.
//!
//! Complex scalars are `[re, im]` (a bare number is read as a real scalar);
//! matrices are row-major nested arrays.

use pht_core::numkernel::{c, ComplexMatrix};
use pht_core::opspec::{EvenOrderOperatorPair, Interval, SkewOperator};
use pht_core::Tolerances;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl Scalar {
    fn parts(self) -> (f64, f64) {
        match self {
            Scalar::Real(x) => (x, 0.0),
            Scalar::Complex([re, im]) => (re, im),
        }
    }
}

pub type MatrixSpec = Vec<Vec<Scalar>>;

/// Boundary conditions in boundary-space or trace form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum BoundarySpec {
    Triplet {
        #[serde(rename = "K")]
        k: MatrixSpec,
        #[serde(rename = "L")]
        l: MatrixSpec,
        #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
        f: Option<MatrixSpec>,
        #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
        e: Option<MatrixSpec>,
    },
    Trace {
        #[serde(rename = "Q_b")]
        qb: MatrixSpec,
        #[serde(rename = "R_b")]
        rb: MatrixSpec,
    },
}

/// Optional overrides of the default tolerances.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_rtol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structural: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classify: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub green: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub interval: [f64; 2],
    pub n: usize,
    #[serde(rename = "N")]
    pub order: usize,
    #[serde(rename = "P")]
    pub p: Vec<MatrixSpec>,
    #[serde(rename = "S")]
    pub s: Vec<MatrixSpec>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub skew_order: Option<usize>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_conditions: Option<BoundarySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
}

pub fn parse_matrix(name: &str, rows: &MatrixSpec) -> Result<ComplexMatrix, CliError> {
    let entries: Vec<Vec<_>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|z| {
                    let (re, im) = z.parts();
                    c(re, im)
                })
                .collect()
        })
        .collect();
    if entries.is_empty() {
        return Err(CliError::Parse(format!("{name}: matrix has no rows")));
    }
    ComplexMatrix::from_rows(&entries).map_err(|e| CliError::Parse(format!("{name}: {e}")))
}

fn parse_family(
    name: &str,
    mats: &[MatrixSpec],
    count: usize,
    n: usize,
) -> Result<Vec<ComplexMatrix>, CliError> {
    if mats.len() != count {
        return Err(CliError::Parse(format!(
            "{name} has {} coefficients, expected {count}",
            mats.len()
        )));
    }
    mats.iter()
        .enumerate()
        .map(|(k, m)| {
            let label = format!("{name}[{k}]");
            let matrix = parse_matrix(&label, m)?;
            if matrix.rows() != n || matrix.cols() != n {
                return Err(CliError::Parse(format!(
                    "{label} is {}x{}, expected {n}x{n}",
                    matrix.rows(),
                    matrix.cols()
                )));
            }
            Ok(matrix)
        })
        .collect()
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn interval(&self) -> Result<Interval, CliError> {
        Interval::new(self.interval[0], self.interval[1])
            .map_err(|e| CliError::Parse(format!("interval: {e}")))
    }

    pub fn pair(&self) -> Result<EvenOrderOperatorPair, CliError> {
        let p = parse_family("P", &self.p, self.order + 1, self.n)?;
        let s = parse_family("S", &self.s, self.order + 1, self.n)?;
        EvenOrderOperatorPair::new(self.interval()?, p, s)
            .map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn skew(&self) -> Result<Option<SkewOperator>, CliError> {
        match (&self.j, self.skew_order) {
            (None, None) => Ok(None),
            (Some(j), m) => {
                let m = m.unwrap_or(j.len().saturating_sub(1));
                let coeffs = parse_family("J", j, m + 1, self.n)?;
                SkewOperator::new(self.interval()?, coeffs)
                    .map(Some)
                    .map_err(|e| CliError::Parse(e.to_string()))
            }
            (None, Some(_)) => Err(CliError::Parse("M given without J".into())),
        }
    }

    /// Defaults, then the spec's overrides, then the command-line `--rtol`.
    pub fn tolerances(
        &self,
        rtol: Option<f64>,
        k_max: Option<usize>,
    ) -> Result<Tolerances, CliError> {
        let mut tols = Tolerances::default();
        if let Some(t) = &self.tolerances {
            let overrides = [
                (&mut tols.rank_rtol, t.rank_rtol),
                (&mut tols.structural, t.structural),
                (&mut tols.classify, t.classify),
                (&mut tols.green, t.green),
                (&mut tols.deg_tol, t.deg_tol),
            ];
            for (slot, value) in overrides {
                if let Some(v) = value {
                    *slot = v;
                }
            }
        }
        if let Some(r) = rtol {
            tols.rank_rtol = r;
        }
        if let Some(k) = k_max.or(self.k_max) {
            tols.k_max = k;
        }
        let positive = [
            tols.rank_rtol,
            tols.structural,
            tols.classify,
            tols.green,
            tols.deg_tol,
        ];
        if positive.iter().any(|t| !t.is_finite() || *t <= 0.0) || tols.k_max == 0 {
            return Err(CliError::Parse(
                "tolerances must be positive and k_max at least 1".into(),
            ));
        }
        Ok(tols)
    }
}

/// Inverse of [`parse_matrix`], always writing `[re, im]`.
pub fn matrix_spec(m: &ComplexMatrix) -> MatrixSpec {
    m.to_rows()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|z| Scalar::Complex([z.re, z.im]))
                .collect()
        })
        .collect()
}
