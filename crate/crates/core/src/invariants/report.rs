//! Named verdicts and the per-germ report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::Length;
use crate::error::Result;

use super::singularity::{InvariantOptions, SingularityInput};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    /// Whether a failure counts against the run; unasserted verdicts are informational.
    pub asserted: bool,
    pub detail: String,
}

impl Verdict {
    pub fn asserted(holds: bool, detail: impl Into<String>) -> Self {
        Verdict {
            holds,
            asserted: true,
            detail: detail.into(),
        }
    }

    pub fn reported(holds: bool, detail: impl Into<String>) -> Self {
        Verdict {
            holds,
            asserted: false,
            detail: detail.into(),
        }
    }

    pub fn fails(&self) -> bool {
        self.asserted && !self.holds
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// The entry itself is malformed, e.g. a coefficient not defined over the chosen field.
    Input,
    /// A configurable cap was hit: the stabilization window or the step budget.
    ResourceCap,
    Computation,
}

/// Why an entry could not be fully evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportError {
    pub kind: ErrorKind,
    pub message: String,
}

impl ReportError {
    pub fn input(message: impl Into<String>) -> Self {
        ReportError {
            kind: ErrorKind::Input,
            message: message.into(),
        }
    }
}

impl From<&crate::error::Error> for ReportError {
    fn from(e: &crate::error::Error) -> Self {
        use crate::error::Error as E;
        let kind = if e.is_resource_cap() {
            ErrorKind::ResourceCap
        } else if matches!(
            e,
            E::InvalidGerm(_) | E::InvalidField(_) | E::InvalidRing(_) | E::DivisionByZero
        ) {
            ErrorKind::Input
        } else {
            ErrorKind::Computation
        };
        ReportError {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub is_icis: bool,
    pub tau: Option<Length>,
    pub mu_exact: Option<u64>,
    pub mu_bound: Option<u64>,
    pub e_crit_samuel: Option<u64>,
    pub e_crit_generic: Option<u64>,
    pub checks: BTreeMap<String, Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ReportError>,
}

impl InvariantReport {
    pub fn new(name: impl Into<String>, n: usize, k: usize) -> Self {
        InvariantReport {
            name: name.into(),
            n,
            k,
            is_icis: false,
            tau: None,
            mu_exact: None,
            mu_bound: None,
            e_crit_samuel: None,
            e_crit_generic: None,
            checks: BTreeMap::new(),
            timings: None,
            error: None,
        }
    }

    /// True when every asserted check holds and no error occurred.
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.checks.values().any(Verdict::fails)
    }
}

/// Verdicts relating the invariants of an ICIS:
/// `mu <= e_crit`; `mu <= (n+1) tau` for hypersurfaces; and, for plane
/// curves, `mu <= 4/3 tau`, asserted only when `mu = tau`.
pub fn inequality_verdicts(n: usize, k: usize, mu: u64, tau: u64, e_crit: u64) -> BTreeMap<String, Verdict> {
    let mut out = BTreeMap::new();
    out.insert(
        "mu_le_e_crit".to_string(),
        Verdict::asserted(mu <= e_crit, format!("{mu} <= {e_crit}")),
    );
    if k == 1 {
        let rhs = (n as u64 + 1) * tau;
        out.insert(
            "mu_le_n1_tau".to_string(),
            Verdict::asserted(mu <= rhs, format!("{mu} <= {} * {tau}", n + 1)),
        );
        if n == 1 {
            let holds = 3 * mu <= 4 * tau;
            let v = format!("3 * {mu} <= 4 * {tau}");
            let verdict = if mu == tau {
                Verdict::asserted(holds, v)
            } else {
                Verdict::reported(holds, v)
            };
            out.insert("mu_le_4_3_tau".to_string(), verdict);
        }
    }
    out
}

/// Computes the invariants of an ICIS and evaluates [`inequality_verdicts`].
pub fn check_inequalities(s: &SingularityInput, opts: &InvariantOptions) -> Result<BTreeMap<String, Verdict>> {
    let mu = s.milnor_exact(opts)?;
    let tau = s
        .tjurina_with(&opts.engine)?
        .finite()
        .ok_or(crate::error::Error::NotIcis)?;
    let e = s.critical_multiplicity(opts)?;
    Ok(inequality_verdicts(s.n(), s.k(), mu, tau, e.e_samuel))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_inequalities() {
        let v = inequality_verdicts(1, 1, 2, 2, 2);
        assert!(v.values().all(|x| x.holds && x.asserted));
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn ratio_is_reported_when_not_quasi_homogeneous() {
        let v = inequality_verdicts(1, 1, 10, 7, 10);
        assert!(!v["mu_le_4_3_tau"].holds);
        assert!(!v["mu_le_4_3_tau"].fails());
    }

    #[test]
    fn space_curve_has_only_critical_check() {
        let v = inequality_verdicts(1, 2, 5, 5, 6);
        assert_eq!(v.keys().collect::<Vec<_>>(), vec!["mu_le_e_crit"]);
    }
}
