//! Analysis reports shared by the command-line front end.
//!
//! Every index in a report is 1-based; rationals are written as `"p/q"`
//! strings so they survive a JSON round trip exactly.

use num_rational::BigRational;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bounds::{bounds_report, characteristic_matrix, linear_system_order, BoundsReport};
use crate::canon::{
    brute_force_minimal_canon, minimal_canon_with, CanonOptions, CanonResult, TraceStep,
    BRUTE_FORCE_CANON_MAX_BOX, BRUTE_FORCE_CANON_MAX_N,
};
use crate::diffpoly::{
    check_truncated_jacobian, truncated_jacobian, DiffSystem, JacobianStatus, ReductionPlan,
};
use crate::error::Result;
use crate::order_matrix::{brute_force_jacobi_number, MatrixJson, OrderMatrix, BRUTE_FORCE_MAX_N};
use crate::resolvent::ResolventPlan;

pub fn input_digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Strong,
    Weak,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CanonSummary {
    pub ell: Vec<u64>,
    pub lambda: u64,
    pub alpha: Vec<u64>,
    pub beta: Vec<i64>,
    pub jacobi_number: Option<u64>,
    pub starred: Vec<[usize; 2]>,
}

impl From<&CanonResult> for CanonSummary {
    fn from(c: &CanonResult) -> Self {
        CanonSummary {
            ell: c.ell.clone(),
            lambda: c.lambda,
            alpha: c.alpha.clone(),
            beta: c.beta.clone(),
            jacobi_number: c.jacobi_number.finite(),
            starred: c.starred.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointValue {
    pub derivative: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianReport {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<PointValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
}

impl JacobianReport {
    pub fn new(status: &JacobianStatus, names: &[String]) -> Self {
        let mut r = JacobianReport {
            status: match status {
                JacobianStatus::NonzeroWitnessed { .. } => "nonzeroWitnessed",
                JacobianStatus::ZeroSymbolic => "zeroSymbolic",
                JacobianStatus::ProbablyZero { .. } => "probablyZero",
                JacobianStatus::NotComputed => "notComputed",
            },
            point: None,
            value: None,
            trials: None,
        };
        match status {
            JacobianStatus::NonzeroWitnessed { point, value } => {
                r.point = Some(
                    point
                        .iter()
                        .map(|(d, v)| PointValue {
                            derivative: d.display_with(names),
                            value: rational_string(v),
                        })
                        .collect(),
                );
                r.value = Some(rational_string(value));
            }
            JacobianStatus::ProbablyZero { trials } => r.trials = Some(*trials),
            _ => {}
        }
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleReport {
    /// `None` when `n` exceeds the enumeration guard.
    pub brute_force_jacobi_number: Option<Option<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force_canon: Option<Vec<u64>>,
    pub agrees: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl OracleReport {
    pub fn check(a: &OrderMatrix, canon: &CanonResult) -> Self {
        let mut skipped = Vec::new();
        let mut agrees = true;
        let brute_force_jacobi_number = if a.n() <= BRUTE_FORCE_MAX_N {
            let j = brute_force_jacobi_number(a).expect("guarded");
            agrees &= j == canon.jacobi_number;
            Some(j.finite())
        } else {
            skipped.push(format!("permutation oracle needs n <= {BRUTE_FORCE_MAX_N}"));
            None
        };
        let bound = canon.lambda + 2;
        let brute_force_canon =
            if a.n() <= BRUTE_FORCE_CANON_MAX_N && bound <= BRUTE_FORCE_CANON_MAX_BOX {
                let l = brute_force_minimal_canon(a, bound).ok();
                agrees &= l.as_ref() == Some(&canon.ell);
                l
            } else {
                skipped.push(format!(
                    "canon oracle needs n <= {BRUTE_FORCE_CANON_MAX_N} and Lambda + 2 <= {BRUTE_FORCE_CANON_MAX_BOX}"
                ));
                None
            };
        OracleReport {
            brute_force_jacobi_number,
            brute_force_canon,
            agrees,
            skipped,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProlongedEquation {
    pub equation: String,
    pub order: u64,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolvedDerivative {
    pub derivative: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub input_digest: String,
    pub input_kind: &'static str,
    pub convention: Convention,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    pub matrix: MatrixJson,
    pub canon: CanonSummary,
    pub bounds: BoundsReport,
    pub truncated_jacobian: JacobianReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_system_order: Option<Option<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction_plan: Option<ReductionPlan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prolonged_equations: Option<Vec<ProlongedEquation>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<Vec<SolvedDerivative>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolvent_plan: Option<ResolventPlan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forma_elegans: Option<Vec<Option<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    /// Analysed matrix and full canon, for human-readable rendering.
    #[serde(skip)]
    pub analysed: Option<(OrderMatrix, CanonResult)>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalysisOptions {
    pub convention: Convention,
    pub oracle: bool,
    pub trace: bool,
    pub check_jacobian: bool,
}

impl AnalysisReport {
    fn base(
        digest: String,
        kind: &'static str,
        a: &OrderMatrix,
        options: AnalysisOptions,
    ) -> Result<Self> {
        let a = match options.convention {
            Convention::Strong => a.clone(),
            Convention::Weak => a.to_weak(),
        };
        let canon = minimal_canon_with(&a, CanonOptions { trace: options.trace })?;
        Ok(AnalysisReport {
            input_digest: digest,
            input_kind: kind,
            convention: options.convention,
            variables: None,
            matrix: a.to_json(),
            canon: CanonSummary::from(&canon),
            bounds: bounds_report(&a),
            truncated_jacobian: JacobianReport::new(&JacobianStatus::NotComputed, &[]),
            linear_system_order: None,
            reduction_plan: None,
            prolonged_equations: None,
            normal_form: None,
            resolvent_plan: None,
            forma_elegans: None,
            trace: options.trace.then(|| canon.trace.clone()),
            oracle: options.oracle.then(|| OracleReport::check(&a, &canon)),
            analysed: Some((a, canon)),
        })
    }

    pub fn for_matrix(input: &[u8], a: &OrderMatrix, options: AnalysisOptions) -> Result<Self> {
        Self::base(input_digest(input), "matrix", a, options)
    }

    pub fn for_system(input: &[u8], sys: &DiffSystem, options: AnalysisOptions) -> Result<Self> {
        let mut r = Self::base(input_digest(input), "system", &sys.order_matrix(), options)?;
        r.variables = Some(sys.names().to_vec());
        if options.check_jacobian {
            let canon = &r.analysed.as_ref().expect("set by base").1;
            let grid = truncated_jacobian(sys, canon)?;
            r.truncated_jacobian = JacobianReport::new(&check_truncated_jacobian(&grid), sys.names());
        }
        if let Ok(p) = characteristic_matrix(sys) {
            if let Ok(order) = linear_system_order(&p) {
                r.linear_system_order = Some(order.finite());
            }
        }
        Ok(r)
    }

    pub fn canon(&self) -> &CanonResult {
        &self.analysed.as_ref().expect("set at construction").1
    }

    pub fn analysed_matrix(&self) -> &OrderMatrix {
        &self.analysed.as_ref().expect("set at construction").0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}
