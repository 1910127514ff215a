//! Runs every check on a list of corpus entries.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::engine::{EngineOptions, IdealBasis, Length};
use crate::error::{Error, Result};
use crate::field::{Field, DEFAULT_PRIME};
use crate::invariants::{
    alternating_bound, binomial, check_samuel_bounds, inequality_verdicts, multiplicity, ErrorKind, InvariantOptions,
    InvariantReport, ReportError, SamuelTable, SingularityInput, Verdict,
};
use crate::jets::{
    critical_jet_test_with, stabilization_scan_with, tjurina_jet_test_with, ClassVerdict, JetClass, JetVector,
};

use super::entry::CorpusEntry;

/// Entries tagged with this are weighted homogeneous, so `mu = tau` is asserted for them.
pub const QUASI_HOMOGENEOUS_TAG: &str = "quasi-homogeneous";

/// Levels beyond this are not tried when looking for the level at which `C(e_crit + 1)` fails.
pub const MAX_CRITICAL_LEVEL: u32 = 4096;

/// Which groups of checks to run. Invariants and expectations are always checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckSelection {
    pub bounds: bool,
    pub inequality: bool,
    pub jets: bool,
}

impl CheckSelection {
    pub fn all() -> Self {
        CheckSelection {
            bounds: true,
            inequality: true,
            jets: true,
        }
    }

    pub fn none() -> Self {
        CheckSelection {
            bounds: false,
            inequality: false,
            jets: false,
        }
    }
}

impl Default for CheckSelection {
    fn default() -> Self {
        Self::all()
    }
}

impl FromStr for CheckSelection {
    type Err = String;

    /// A comma separated list of `bounds`, `inequality`, `jets` and `all`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut sel = CheckSelection::none();
        for part in s.split(',').map(str::trim) {
            match part {
                "bounds" => sel.bounds = true,
                "inequality" => sel.inequality = true,
                "jets" => sel.jets = true,
                "all" => sel = CheckSelection::all(),
                other => {
                    return Err(format!(
                        "unknown check group `{other}` (expected bounds, inequality, jets or all)"
                    ))
                }
            }
        }
        Ok(sel)
    }
}

impl fmt::Display for CheckSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [
            (self.bounds, "bounds"),
            (self.inequality, "inequality"),
            (self.jets, "jets"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub field: Field,
    pub max_t: usize,
    pub window: usize,
    pub seed: u64,
    pub jobs: usize,
    pub step_budget: u64,
    pub checks: CheckSelection,
    /// Also compute the invariants over the other field (`F_32003` for `Q` and vice versa)
    /// and report, without asserting, whether they agree.
    pub cross_check: bool,
    /// Record wall-clock time per phase. Off by default so that reports are reproducible.
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: Field::Rational,
            max_t: 30,
            window: 3,
            seed: 0,
            jobs: 1,
            step_budget: EngineOptions::default().step_budget,
            checks: CheckSelection::all(),
            cross_check: false,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);

impl RunConfig {
    pub fn validate(&self) -> std::result::Result<(), ConfigError> {
        if self.window == 0 {
            return Err(ConfigError("window must be at least 1".into()));
        }
        if self.max_t < self.window + 2 {
            return Err(ConfigError(format!(
                "max_t = {} must be at least window + 2 = {}",
                self.max_t,
                self.window + 2
            )));
        }
        if self.jobs == 0 {
            return Err(ConfigError("jobs must be at least 1".into()));
        }
        if self.step_budget == 0 {
            return Err(ConfigError("step budget must be at least 1".into()));
        }
        Field::from_characteristic(self.field.characteristic()).map_err(|e| ConfigError(e.to_string()))?;
        Ok(())
    }

    pub fn invariant_options(&self) -> InvariantOptions {
        InvariantOptions {
            engine: EngineOptions {
                step_budget: self.step_budget,
            },
            window: self.window,
            max_t: self.max_t,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub reports: Vec<InvariantReport>,
    pub exit_code: i32,
}

/// Evaluates every entry on a pool of `config.jobs` threads; reports keep the input order.
pub fn run_corpus(entries: &[CorpusEntry], config: &RunConfig) -> std::result::Result<RunOutcome, ConfigError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| ConfigError(format!("cannot start worker pool: {e}")))?;
    let reports: Vec<InvariantReport> = pool.install(|| entries.par_iter().map(|e| run_entry(e, config)).collect());
    let exit_code = exit_code(&reports);
    Ok(RunOutcome { reports, exit_code })
}

/// `2` if some entry is malformed, else `3` if a resource cap was hit, else `1`
/// if an asserted check failed or an entry could not be evaluated, else `0`.
pub fn exit_code(reports: &[InvariantReport]) -> i32 {
    let has = |kind: ErrorKind| reports.iter().any(|r| r.error.as_ref().is_some_and(|e| e.kind == kind));
    if has(ErrorKind::Input) {
        2
    } else if has(ErrorKind::ResourceCap) {
        3
    } else if reports.iter().any(|r| !r.passed()) {
        1
    } else {
        0
    }
}

/// Evaluates one entry. Errors end the evaluation but keep everything computed before them.
pub fn run_entry(entry: &CorpusEntry, config: &RunConfig) -> InvariantReport {
    let mut report = InvariantReport::new(&entry.name, entry.n(), entry.k());
    let mut clock = Clock::new(config.timings);
    match entry.input(config.field) {
        Ok(s) => {
            if let Err(e) = evaluate(&s, entry, config, &mut report, &mut clock) {
                report.error = Some(ReportError::from(&e));
            }
        }
        Err(e) => report.error = Some(ReportError::input(e.to_string())),
    }
    if config.cross_check && report.error.is_none() {
        let other = match config.field {
            Field::Rational => Field::Prime(DEFAULT_PRIME),
            Field::Prime(_) => Field::Rational,
        };
        let verdict = cross_check(entry, &report, other, config);
        report.checks.insert("cross_check_field".into(), verdict);
    }
    report.timings = clock.finish();
    report
}

struct Clock {
    enabled: bool,
    last: Instant,
    phases: BTreeMap<String, f64>,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Clock {
            enabled,
            last: Instant::now(),
            phases: BTreeMap::new(),
        }
    }

    fn lap(&mut self, phase: &str) {
        if self.enabled {
            let now = Instant::now();
            *self.phases.entry(phase.to_string()).or_default() += (now - self.last).as_secs_f64();
            self.last = now;
        }
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.phases)
    }
}

fn expect_check<T: PartialEq + fmt::Display>(expected: Option<T>, actual: Option<T>) -> Option<Verdict> {
    let expected = expected?;
    Some(match actual {
        Some(a) => Verdict::asserted(a == expected, format!("expected {expected}, computed {a}")),
        None => Verdict::asserted(false, format!("expected {expected}, not computed")),
    })
}

fn evaluate(
    s: &SingularityInput,
    entry: &CorpusEntry,
    config: &RunConfig,
    report: &mut InvariantReport,
    clock: &mut Clock,
) -> Result<()> {
    let opts = config.invariant_options();
    let engine = &opts.engine;
    let checks = &mut report.checks;

    report.is_icis = s.is_icis_with(engine)?;
    if let Some(v) = expect_check(entry.expect.icis, Some(report.is_icis)) {
        checks.insert("expect_icis".into(), v);
    }
    let tau = s.tjurina_with(engine)?;
    report.tau = Some(tau);
    clock.lap("tjurina");

    if report.is_icis {
        let mu = s.milnor_exact(&opts)?;
        report.mu_exact = Some(mu);
        clock.lap("milnor_exact");
        let bound = s.milnor_bound(&opts)?;
        report.mu_bound = Some(bound.value);
        let crit = s.critical_multiplicity(&opts)?;
        report.e_crit_samuel = Some(crit.e_samuel);
        report.e_crit_generic = Some(crit.e_generic);
        clock.lap("critical_multiplicity");

        checks.insert(
            "mu_le_mu_bound".into(),
            Verdict::asserted(mu <= bound.value, format!("{mu} <= {}", bound.value)),
        );
        checks.insert(
            "e_crit_paths_agree".into(),
            Verdict::asserted(
                crit.e_samuel == crit.e_generic,
                format!("Samuel {} vs generic {}", crit.e_samuel, crit.e_generic),
            ),
        );
        let draws: Vec<String> = bound.draws.iter().map(Length::to_string).collect();
        checks.insert(
            "generic_draws_agree".into(),
            Verdict::reported(!bound.disagreement, format!("draws [{}]", draws.join(", "))),
        );
        if s.k() == 1 {
            let all = [mu, bound.value, crit.e_generic, crit.e_samuel];
            checks.insert(
                "hypersurface_collapse".into(),
                Verdict::asserted(
                    all.iter().all(|&v| v == mu),
                    format!("mu {mu}, bound {}, generic {}, Samuel {}", all[1], all[2], all[3]),
                ),
            );
        }
        if entry.tags.iter().any(|t| t == QUASI_HOMOGENEOUS_TAG) {
            checks.insert(
                "mu_eq_tau_quasi_homogeneous".into(),
                Verdict::asserted(Length::Finite(mu) == tau, format!("mu {mu}, tau {tau}")),
            );
        }
        if config.checks.inequality {
            if let Some(tau) = tau.finite() {
                checks.extend(inequality_verdicts(s.n(), s.k(), mu, tau, crit.e_samuel));
            }
        }
    }
    let e = &entry.expect;
    for (key, v) in [
        ("expect_mu", expect_check(e.mu, report.mu_exact)),
        ("expect_tau", expect_check(e.tau.map(Length::Finite), Some(tau))),
        ("expect_e_crit", expect_check(e.e_crit, report.e_crit_samuel)),
    ] {
        if let Some(v) = v {
            checks.insert(key.into(), v);
        }
    }

    if config.checks.bounds {
        samuel_bound_checks(s, report.is_icis, &opts, checks)?;
        clock.lap("samuel_bounds");
    }
    if config.checks.jets {
        jet_checks(s, report.is_icis, tau, report.e_crit_samuel, &opts, checks)?;
        clock.lap("jets");
    }
    Ok(())
}

/// The three lower bounds on the `m`-adic tables of `A / (<f> + J)` and of
/// the critical locus `A / J_k`, and on the `<f>`-adic table of the critical locus.
fn samuel_bound_checks(
    s: &SingularityInput,
    icis: bool,
    opts: &InvariantOptions,
    checks: &mut BTreeMap<String, Verdict>,
) -> Result<()> {
    let m = IdealBasis::maximal(s.context());
    let mopts = opts.multiplicity();
    let mut tables = Vec::new();
    let sigma = s.sigma_scheme(s.n())?;
    if !sigma.is_unit()? {
        tables.push(("samuel_bounds_tjurina_algebra", multiplicity(&sigma, &m, &mopts)?, None));
    }
    let critical = s.critical_locus()?;
    if !critical.is_unit()? {
        let m_adic = multiplicity(&critical, &m, &mopts)?;
        // <f> is primary to the maximal ideal of the critical locus only for an ICIS
        let f_adic = if icis {
            Some(multiplicity(&critical, &s.ideal(), &mopts)?)
        } else {
            None
        };
        let e_m = m_adic.e;
        tables.push(("samuel_bounds_critical_locus", m_adic, None));
        if let Some(t) = f_adic {
            tables.push(("samuel_bounds_critical_locus_f_adic", t, Some(e_m)));
        }
    }
    for (name, result, e_override) in tables {
        let e = e_override.unwrap_or(result.e);
        let verdict = check_samuel_bounds(&result.table, e);
        let detail = match verdict.violations().next() {
            None => format!(
                "e = {e}, d = {}, {} inequalities over t = 0..{}",
                result.d,
                verdict.checks.len(),
                result.table.values.len() - 1
            ),
            Some(v) => format!(
                "bound ({}) fails at t = {}: {} < {}",
                v.bound, v.t, v.actual, v.required
            ),
        };
        checks.insert(name.into(), Verdict::asserted(verdict.holds(), detail));
    }
    Ok(())
}

fn jet_checks(
    s: &SingularityInput,
    icis: bool,
    tau: Length,
    e_crit: Option<u64>,
    opts: &InvariantOptions,
    checks: &mut BTreeMap<String, Verdict>,
) -> Result<()> {
    let engine = &opts.engine;
    if let (true, Length::Finite(tau)) = (icis, tau) {
        // true at r = tau and false at every other r up to tau + 2
        let mut members = Vec::new();
        for r in 0..=tau + 2 {
            let jet = JetVector::of(s, r as u32 + 2);
            if tjurina_jet_test_with(&jet, r, engine)?.member {
                members.push(r);
            }
        }
        checks.insert(
            "jet_tjurina_exact".into(),
            Verdict::asserted(members == [tau], format!("member for r in {members:?}, tau = {tau}")),
        );
    }

    let sigma = s.sigma_scheme(s.n())?;
    match sigma.colength_with(engine)? {
        Length::Finite(len) if icis => {
            // the left side is capped by len(O_Sigma), so the test fails once r - 2 >= len
            let scan = stabilization_scan_with(s, JetClass::D, 1, (len as u32 + 3).max(3), engine)?;
            checks.insert(
                "jet_dimension_eventually_false".into(),
                Verdict::asserted(
                    !scan.final_member,
                    format!("false from level {} of {}", scan.stable_from, scan.verdicts.len()),
                ),
            );
        }
        Length::Infinite => {
            let scan = stabilization_scan_with(s, JetClass::D, 1, 8, engine)?;
            let all = scan.verdicts.iter().all(|v| v.member);
            checks.insert(
                "jet_dimension_always_true".into(),
                Verdict::asserted(all, format!("checked levels 1..={}", scan.verdicts.len())),
            );
        }
        Length::Finite(_) => {}
    }

    if let (true, Some(e)) = (icis, e_crit.filter(|&e| e > 0)) {
        let samuel = multiplicity(&s.critical_locus()?, &s.ideal(), &opts.multiplicity()).ok();
        let (above, level) = critical_failure(s, e + 1, samuel.as_ref().map(|m| &m.table), engine)?;
        let detail = match above.witness.last() {
            Some(w) if !above.member => format!("fails at t = {} ({} < {}), level {level}", w.t, w.lhs, w.rhs),
            _ => format!("no violation up to level {level}"),
        };
        checks.insert(
            "jet_critical_above_e_crit_false".into(),
            Verdict::asserted(!above.member, detail),
        );
        let at = critical_jet_test_with(&JetVector::of(s, level), e, engine)?;
        let holds = at.member && !at.vacuous;
        let t_max = at.witness.last().map_or(0, |w| w.t);
        checks.insert(
            "jet_critical_at_e_crit_true".into(),
            Verdict::asserted(
                holds,
                format!("level {level}, {} values of t up to {t_max}", at.witness.len()),
            ),
        );
    }
    Ok(())
}

/// Finds a level at which the critical test with parameter `e` fails and
/// returns that verdict with the smallest level exhibiting the violation.
///
/// The left side at `t` is at most `chi(t)`, the `<f>`-adic Samuel function of
/// the critical locus, so the first `t` where its polynomial drops below the
/// bound gives a level that must fail. Doubling from the first non-empty
/// level is the fallback. The left side at `t` only depends on the jet of
/// level `N_t + 2`, so the witnesses up to the violation are the same at
/// every level whose range reaches it.
fn critical_failure(
    s: &SingularityInput,
    e: u64,
    samuel: Option<&SamuelTable>,
    engine: &EngineOptions,
) -> Result<(ClassVerdict, u32)> {
    let k = s.k() as u64;
    let level_of = |t: u64| {
        u32::try_from(e as i128 * binomial(t + k - 1, k - 1) + 2)
            .map_err(|_| Error::InvalidParameter("level overflow".into()))
    };
    let mut level = level_of(e - 1)?;
    if let Some(t) = samuel.and_then(|table| predicted_violation(table, e, k)) {
        level = level.max(level_of(t)?.min(MAX_CRITICAL_LEVEL));
    }
    loop {
        let mut v = critical_jet_test_with(&JetVector::of(s, level), e, engine)?;
        if !v.member {
            let t = v.witness.last().expect("a failing verdict has a witness").t;
            v.level = level_of(t)?;
            return Ok((v.clone(), v.level));
        }
        if level >= MAX_CRITICAL_LEVEL {
            return Ok((v, level));
        }
        level = (level * 2).min(MAX_CRITICAL_LEVEL);
    }
}

/// First `t >= e - 1` at which the extrapolated Samuel polynomial falls below
/// the alternating bound for multiplicity `e` in dimension `k - 1`.
fn predicted_violation(table: &SamuelTable, e: u64, k: u64) -> Option<u64> {
    const HORIZON: u64 = 10_000;
    let d = table.dimension;
    if !table.stabilized || table.values.len() < d + 1 {
        return None;
    }
    // last entry of each difference order, for the final d + 1 values
    let tail = &table.values[table.values.len() - d - 1..];
    let mut row: Vec<i128> = tail.iter().map(|&v| v as i128).collect();
    let mut diffs = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        diffs.push(*row.last().expect("non-empty"));
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let last = table.values.len() as u64 - 1;
    for target in 0..HORIZON {
        let value = if target <= last {
            table.values[target as usize] as i128
        } else {
            for j in (0..d).rev() {
                diffs[j] += diffs[j + 1];
            }
            diffs[0]
        };
        if target + 1 >= e && value < alternating_bound(e, (k - 1) as usize, target as usize) {
            return Some(target);
        }
    }
    None
}

fn cross_check(entry: &CorpusEntry, report: &InvariantReport, other: Field, config: &RunConfig) -> Verdict {
    let opts = config.invariant_options();
    let computed = entry
        .input(other)
        .map_err(|e| e.to_string())
        .and_then(|s| core_invariants(entry, &s, &opts).map_err(|e| e.to_string()));
    let field_name = match other {
        Field::Rational => "Q".to_string(),
        Field::Prime(p) => format!("F_{p}"),
    };
    match computed {
        Err(msg) => Verdict::reported(false, format!("over {field_name}: {msg}")),
        Ok(r) => {
            let fields = [
                ("is_icis", report.is_icis.to_string(), r.is_icis.to_string()),
                ("tau", fmt_opt(report.tau), fmt_opt(r.tau)),
                ("mu_exact", fmt_opt(report.mu_exact), fmt_opt(r.mu_exact)),
                ("mu_bound", fmt_opt(report.mu_bound), fmt_opt(r.mu_bound)),
                ("e_crit_samuel", fmt_opt(report.e_crit_samuel), fmt_opt(r.e_crit_samuel)),
                (
                    "e_crit_generic",
                    fmt_opt(report.e_crit_generic),
                    fmt_opt(r.e_crit_generic),
                ),
            ];
            let diffs: Vec<String> = fields
                .iter()
                .filter(|(_, a, b)| a != b)
                .map(|(n, a, b)| format!("{n}: {a} vs {b}"))
                .collect();
            if diffs.is_empty() {
                Verdict::reported(true, format!("invariants agree over {field_name}"))
            } else {
                Verdict::reported(false, format!("over {field_name}: {}", diffs.join("; ")))
            }
        }
    }
}

/// The invariants alone, without any checks.
fn core_invariants(entry: &CorpusEntry, s: &SingularityInput, opts: &InvariantOptions) -> Result<InvariantReport> {
    let mut r = InvariantReport::new(&entry.name, entry.n(), entry.k());
    r.is_icis = s.is_icis_with(&opts.engine)?;
    r.tau = Some(s.tjurina_with(&opts.engine)?);
    if r.is_icis {
        r.mu_exact = Some(s.milnor_exact(opts)?);
        r.mu_bound = Some(s.milnor_bound(opts)?.value);
        let c = s.critical_multiplicity(opts)?;
        r.e_crit_samuel = Some(c.e_samuel);
        r.e_crit_generic = Some(c.e_generic);
    }
    Ok(r)
}

fn fmt_opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}
