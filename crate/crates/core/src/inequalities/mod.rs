//! Evaluators for the inequality catalog: each computes both sides of one
//! inequality — classic sup-norm form or its half-spread perturbation — and
//! returns a [`BoundReport`]. In exact mode `lhs <= rhs` is a theorem; a
//! violation is an implementation bug, and the verification sweeps treat it
//! as such.

mod first_degree;
mod median;
mod nth_degree;
mod zero_degree;

pub use first_degree::{bound_cheby, bound_ostrowski, bound_ostrowski_gruss, bound_trapezoid};
pub use median::{median_shift, ShiftPolynomial};
pub use nth_degree::{
    bound_boundary_nth, bound_interior_nth, identity_residual, kernel_integrals, kernel_kn,
    IdentityVariant,
};
pub use zero_degree::{
    bound_gruss_classic, bound_gruss_mean, bound_gruss_stieltjes, bound_stieltjes,
    bound_zero_mean,
};

use crate::error::{Error, Result};
use crate::funcmodel::{Interval, Rigor};
use crate::scalar::{NumericMode, Scalar};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InequalityId {
    ZeroMean,
    GrussMean,
    Gruss,
    Stieltjes,
    StieltjesWeighted,
    GrussStieltjes,
    Ostrowski,
    OstrowskiPert,
    Trapezoid,
    TrapezoidPert,
    OGruss,
    OGrussPert,
    Cheby,
    InteriorN,
    InteriorNPert,
    BoundaryN,
    BoundaryNPert,
}

impl InequalityId {
    pub const ALL: [InequalityId; 17] = [
        InequalityId::ZeroMean,
        InequalityId::GrussMean,
        InequalityId::Gruss,
        InequalityId::Stieltjes,
        InequalityId::StieltjesWeighted,
        InequalityId::GrussStieltjes,
        InequalityId::Ostrowski,
        InequalityId::OstrowskiPert,
        InequalityId::Trapezoid,
        InequalityId::TrapezoidPert,
        InequalityId::OGruss,
        InequalityId::OGrussPert,
        InequalityId::Cheby,
        InequalityId::InteriorN,
        InequalityId::InteriorNPert,
        InequalityId::BoundaryN,
        InequalityId::BoundaryNPert,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::ZeroMean => "zero_mean",
            InequalityId::GrussMean => "gruss_mean",
            InequalityId::Gruss => "gruss",
            InequalityId::Stieltjes => "stieltjes",
            InequalityId::StieltjesWeighted => "stieltjes_weighted",
            InequalityId::GrussStieltjes => "gruss_stieltjes",
            InequalityId::Ostrowski => "ostrowski",
            InequalityId::OstrowskiPert => "ostrowski_pert",
            InequalityId::Trapezoid => "trapezoid",
            InequalityId::TrapezoidPert => "trapezoid_pert",
            InequalityId::OGruss => "ogruss",
            InequalityId::OGrussPert => "ogruss_pert",
            InequalityId::Cheby => "cheby",
            InequalityId::InteriorN => "interior_n",
            InequalityId::InteriorNPert => "interior_n_pert",
            InequalityId::BoundaryN => "boundary_n",
            InequalityId::BoundaryNPert => "boundary_n_pert",
        }
    }

    pub fn is_perturbed(self) -> bool {
        matches!(
            self,
            InequalityId::OstrowskiPert
                | InequalityId::TrapezoidPert
                | InequalityId::OGrussPert
                | InequalityId::InteriorNPert
                | InequalityId::BoundaryNPert
        )
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InequalityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownInequality(s.to_string()))
    }
}

/// Inputs echoed back with every report.
#[derive(Clone, Debug, Serialize)]
pub struct ParamsEcho {
    pub a: String,
    pub b: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl ParamsEcho {
    pub fn new(interval: &Interval) -> Self {
        ParamsEcho {
            a: interval.a().to_string(),
            b: interval.b().to_string(),
            x: None,
            n: None,
        }
    }

    pub fn with_x(mut self, x: &crate::scalar::Rat) -> Self {
        self.x = Some(x.to_string());
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub id: InequalityId,
    pub lhs: Scalar,
    pub rhs: Scalar,
    /// lhs / rhs, defined as 0 for the degenerate 0/0 case.
    pub ratio: Scalar,
    /// The subtracted perturbation term; 0 for classic forms.
    pub perturbation: Scalar,
    pub mode: NumericMode,
    pub rigor: Rigor,
    pub params: ParamsEcho,
}

impl BoundReport {
    pub(crate) fn build(
        id: InequalityId,
        lhs: Scalar,
        rhs: Scalar,
        perturbation: Scalar,
        rigor: Rigor,
        params: ParamsEcho,
    ) -> BoundReport {
        debug_assert!(lhs >= Scalar::zero() && rhs >= Scalar::zero());
        let ratio = if rhs.is_zero() {
            if lhs.is_zero() {
                Scalar::zero()
            } else {
                Scalar::Float(f64::INFINITY)
            }
        } else {
            &lhs / &rhs
        };
        let mode = if lhs.is_exact() && rhs.is_exact() {
            NumericMode::Exact
        } else {
            NumericMode::Float
        };
        BoundReport {
            id,
            lhs,
            rhs,
            ratio,
            perturbation,
            mode,
            rigor,
            params,
        }
    }

    /// Whether the inequality holds: exact comparison in exact mode, a
    /// 1e-9-relative tolerance in float mode.
    pub fn holds(&self) -> bool {
        self.lhs.le_with_mode_tolerance(&self.rhs)
    }
}
