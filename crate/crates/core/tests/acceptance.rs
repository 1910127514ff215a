//! Acceptance suite: one PASS or FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{brute_samuel, ideal_colength};
use milnor_core::corpus::{bundled_corpus, run_entry, CheckSelection, CorpusEntry, RunConfig, QUASI_HOMOGENEOUS_TAG};
use milnor_core::invariants::{
    multiplicity, samuel_function, InvariantOptions, MultiplicityOptions, SamuelTable, SingularityInput,
};
use milnor_core::{mora_normal_form, Field, IdealBasis, Length, LocalPolynomial, RingContext};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Entry {
    meta: CorpusEntry,
    s: SingularityInput,
    icis: bool,
}

fn corpus() -> Vec<Entry> {
    bundled_corpus()
        .into_iter()
        .map(|meta| {
            let s = meta.input(Field::Rational).unwrap();
            let icis = s.is_icis().unwrap();
            Entry { meta, s, icis }
        })
        .collect()
}

fn name(e: &Entry) -> &str {
    &e.meta.name
}

/// `C(n, k)` by the multiplicative formula.
fn choose(n: i128, k: i128) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn regular_ring_samuel() -> Outcome {
    let mut count = 0;
    for dim in 1..=4 {
        let ctx = RingContext::with_vars(dim);
        let zero = IdealBasis::new(&ctx, Vec::new()).map_err(|e| e.to_string())?;
        let m = IdealBasis::maximal(&ctx);
        for t in 0..=10u32 {
            let got = samuel_function(&zero, &m, t).map_err(|e| e.to_string())?;
            let want = choose(t as i128 + dim as i128, dim as i128) as u64;
            ensure(got == Length::Finite(want), || {
                format!("dim {dim}, t = {t}: {got:?} != {want}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} values"))
}

/// The three lower bounds, written out independently of the library.
fn bound_failures(table: &SamuelTable, e: i128) -> Vec<String> {
    let d = table.dimension as i128;
    let mut out = Vec::new();
    for (t, &chi) in table.values.iter().enumerate() {
        let (t, chi) = (t as i128, chi as i128);
        if chi < choose(t + d, d) {
            out.push(format!("(1) at t = {t}"));
        }
        if t < e && chi < choose(t + d + 1, d + 1) {
            out.push(format!("(2) at t = {t}"));
        }
        if t >= e - 1 {
            let alt: i128 = (0..=d)
                .map(|i| (-1i128).pow(i as u32) * choose(e, i + 1) * choose(t + d - i, d - i))
                .sum();
            if chi < alt {
                out.push(format!("(3) at t = {t}"));
            }
        }
    }
    out
}

fn samuel_bounds() -> Outcome {
    let opts = MultiplicityOptions::default();
    let mut tables = 0;
    let mut values = 0;
    for e in corpus() {
        let s = &e.s;
        let m = IdealBasis::maximal(s.context());
        let mut rings = vec![("tjurina algebra", s.sigma_scheme(s.n()).unwrap())];
        let crit = s.critical_locus().unwrap();
        if s.k() == 1 {
            rings.push(("milnor algebra", crit.clone()));
        } else {
            rings.push(("critical locus", crit.clone()));
        }
        for (what, k) in &rings {
            if k.is_unit().unwrap() {
                continue;
            }
            let r = multiplicity(k, &m, &opts).map_err(|err| format!("{}, {what}: {err}", name(&e)))?;
            let fails = bound_failures(&r.table, r.e as i128);
            ensure(fails.is_empty(), || format!("{}, {what}: {fails:?}", name(&e)))?;
            tables += 1;
            values += r.table.values.len();
            if e.icis && std::ptr::eq(k, &rings[1].1) {
                // <f>-adic table of the critical locus, with e of its maximal ideal
                let f = multiplicity(k, &s.ideal(), &opts).map_err(|err| format!("{}, <f>-adic: {err}", name(&e)))?;
                let fails = bound_failures(&f.table, r.e as i128);
                ensure(fails.is_empty(), || format!("{}, <f>-adic: {fails:?}", name(&e)))?;
                tables += 1;
                values += f.table.values.len();
            }
        }
    }
    Ok(format!("{tables} tables, {values} values"))
}

fn hypersurface_collapse() -> Outcome {
    let opts = InvariantOptions::default();
    let mut count = 0;
    for e in corpus().into_iter().filter(|e| e.s.k() == 1 && e.icis) {
        let s = &e.s;
        let partials: Vec<LocalPolynomial> = (0..s.num_vars())
            .map(|j| s.polys()[0].partial_derivative(j).unwrap())
            .collect();
        let oracle =
            ideal_colength(s.context(), &partials, 64).ok_or_else(|| format!("{}: oracle gave up", name(&e)))?;
        let exact = s.milnor_exact(&opts).unwrap();
        let bound = s.milnor_bound(&opts).unwrap().value;
        let crit = s.critical_multiplicity(&opts).unwrap();
        let all = [exact, bound, crit.e_generic, crit.e_samuel, oracle];
        ensure(all.iter().all(|&v| v == oracle), || {
            format!("{}: mu, bound, e_generic, e_samuel, oracle = {all:?}", name(&e))
        })?;
        count += 1;
    }
    Ok(format!("{count} hypersurfaces"))
}

fn milnor_bound_and_critical_multiplicity() -> Outcome {
    let opts = InvariantOptions::default();
    let mut count = 0;
    let mut drawn = 0;
    for e in corpus().into_iter().filter(|e| e.icis) {
        let s = &e.s;
        let exact = s.milnor_exact(&opts).unwrap();
        let bound = s.milnor_bound(&opts).unwrap();
        let crit = s.critical_multiplicity(&opts).unwrap();
        ensure(exact <= bound.value, || {
            format!("{}: mu = {exact} > bound {}", name(&e), bound.value)
        })?;
        ensure(crit.e_samuel == crit.e_generic, || {
            format!(
                "{}: e_samuel = {} != e_generic = {}",
                name(&e),
                crit.e_samuel,
                crit.e_generic
            )
        })?;
        // with k = 1 nothing is drawn; the smooth germ has no critical locus at all
        let draws = if s.k() == 1 || crit.e_generic == 0 {
            crit.draws.len().min(1)
        } else {
            3
        };
        ensure(
            crit.draws.len() == draws && crit.draws.iter().all(|d| *d == Length::Finite(crit.e_generic)),
            || format!("{}: draws {:?}", name(&e), crit.draws),
        )?;
        count += 1;
        drawn += usize::from(draws == 3);
    }
    Ok(format!("{count} ICIS entries, {drawn} with 3 generic draws"))
}

fn mu_tau_inequality() -> Outcome {
    let opts = InvariantOptions::default();
    let mut rows = Vec::new();
    let mut checked = 0;
    for e in corpus().into_iter().filter(|e| e.s.k() == 1 && e.icis) {
        let s = &e.s;
        let mu = s.milnor_exact(&opts).unwrap();
        let tau = s.tjurina().unwrap().finite().unwrap();
        let n = s.n() as u64;
        ensure(mu <= (n + 1) * tau, || {
            format!("{}: mu = {mu} > (n+1) tau = {}", name(&e), (n + 1) * tau)
        })?;
        checked += 1;
        if s.n() == 1 && tau > 0 {
            rows.push(format!("{} {mu}/{tau}", name(&e)));
            if e.meta.tags.iter().any(|t| t == QUASI_HOMOGENEOUS_TAG) {
                ensure(mu == tau, || {
                    format!("{}: quasi-homogeneous but mu = {mu}, tau = {tau}", name(&e))
                })?;
                ensure(3 * mu <= 4 * tau, || format!("{}: mu/tau = {mu}/{tau} > 4/3", name(&e)))?;
            }
        }
    }
    Ok(format!(
        "{checked} hypersurfaces; plane curve mu/tau: {}",
        rows.join(", ")
    ))
}

/// Colength of a monomial ideal by counting the monomials under its staircase.
fn staircase_count(gens: &[Vec<u16>]) -> Option<u64> {
    let n = gens.first()?.len();
    let bounds: Vec<u16> = (0..n)
        .map(|i| {
            gens.iter()
                .filter(|g| (0..n).all(|j| j == i || g[j] == 0))
                .map(|g| g[i])
                .min()
        })
        .collect::<Option<_>>()?;
    let mut count = 0;
    let mut e = vec![0u16; n];
    'outer: loop {
        if !gens.iter().any(|g| g.iter().zip(&e).all(|(a, b)| a <= b)) {
            count += 1;
        }
        for i in 0..n {
            e[i] += 1;
            if e[i] < bounds[i] {
                continue 'outer;
            }
            e[i] = 0;
        }
        return Some(count);
    }
}

fn exponents(p: &LocalPolynomial) -> Vec<Vec<u16>> {
    p.terms().iter().map(|(e, _)| e.exponents().to_vec()).collect()
}

fn ade_values() -> Outcome {
    let opts = InvariantOptions::default();
    let wanted: Vec<(String, u64)> = (1..=6)
        .map(|n| (format!("A{n}"), n))
        .chain([("E8".to_string(), 8)])
        .collect();
    let corpus = corpus();
    let mut seen = Vec::new();
    for (label, n) in wanted {
        let e = corpus
            .iter()
            .find(|e| name(e) == label)
            .ok_or_else(|| format!("{label} missing from the corpus"))?;
        let f = &e.s.polys()[0];
        let partials: Vec<LocalPolynomial> = (0..e.s.num_vars()).map(|j| f.partial_derivative(j).unwrap()).collect();
        ensure(partials.iter().all(|p| p.terms().len() == 1), || {
            format!("{label}: Jacobian ideal is not monomial")
        })?;
        let gens: Vec<Vec<u16>> = partials.iter().flat_map(exponents).collect();
        // every term of f lies in the Jacobian ideal, so the Tjurina algebra is the Milnor algebra
        let f_in_j = exponents(f)
            .iter()
            .all(|t| gens.iter().any(|g| g.iter().zip(t).all(|(a, b)| a <= b)));
        ensure(f_in_j, || format!("{label}: f is not in its monomial Jacobian ideal"))?;
        let oracle = staircase_count(&gens).ok_or_else(|| format!("{label}: staircase is unbounded"))?;
        let mu = e.s.milnor_exact(&opts).unwrap();
        let tau = e.s.tjurina().unwrap().finite().unwrap();
        ensure(mu == oracle && tau == oracle && oracle == n, || {
            format!("{label}: mu = {mu}, tau = {tau}, staircase = {oracle}, expected {n}")
        })?;
        seen.push(format!("{label}={oracle}"));
    }
    Ok(seen.join(" "))
}

fn jet_classes() -> Outcome {
    let config = RunConfig {
        checks: CheckSelection {
            bounds: false,
            inequality: false,
            jets: true,
        },
        ..RunConfig::default()
    };
    let mut count = 0;
    for e in corpus() {
        let report = run_entry(&e.meta, &config);
        if let Some(err) = &report.error {
            return Err(format!("{}: {}", name(&e), err.message));
        }
        let required: &[&str] = if e.icis {
            &[
                "jet_tjurina_exact",
                "jet_dimension_eventually_false",
                "jet_critical_at_e_crit_true",
                "jet_critical_above_e_crit_false",
            ]
        } else if name(&e) == "X2Y" {
            &["jet_dimension_always_true"]
        } else {
            &[]
        };
        let crit_applies = report.e_crit_samuel.is_some_and(|v| v > 0);
        for check in required
            .iter()
            .filter(|c| crit_applies || !c.starts_with("jet_critical"))
        {
            let v = report
                .checks
                .get(*check)
                .ok_or_else(|| format!("{}: {check} missing", name(&e)))?;
            ensure(v.holds, || format!("{}: {check}: {}", name(&e), v.detail))?;
            count += 1;
        }
        if let Some((k, v)) = report.checks.iter().find(|(_, v)| v.fails()) {
            return Err(format!("{}: {k}: {}", name(&e), v.detail));
        }
    }
    Ok(format!("{count} jet checks"))
}

fn brute_force_samuel() -> Outcome {
    let mut count = 0;
    for e in corpus() {
        let s = &e.s;
        let ctx = s.context();
        let m = IdealBasis::maximal(ctx);
        let sigma = s.sigma_scheme(s.n()).unwrap();
        let crit = s.critical_locus().unwrap();
        let f = s.ideal();
        let mut pairs = vec![("tjurina algebra", &sigma, &m), ("critical locus", &crit, &m)];
        if e.icis {
            pairs.push(("critical locus, <f>-adic", &crit, &f));
        }
        for (what, k, i) in pairs {
            for t in 0..=5 {
                let fast = samuel_function(k, i, t).unwrap().finite().unwrap();
                let slow = brute_samuel(ctx, k.generators(), i.generators(), t);
                ensure(fast == slow, || {
                    format!("{}, {what}, t = {t}: {fast} != {slow}", name(&e))
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} values"))
}

fn local_reduction() -> Outcome {
    let ctx = RingContext::new(["x"], Field::Rational).unwrap();
    let g = common::polys(&ctx, &["x", "x - x^2"]);
    let r = mora_normal_form(&g[0], &g[1..]).map_err(|e| e.to_string())?;
    ensure(r.is_zero(), || format!("normal form of x is {r}"))?;
    Ok("normal form of x by x - x^2 is 0".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("regular-ring Samuel function", regular_ring_samuel),
        ("Samuel lower bounds", samuel_bounds),
        ("hypersurface collapse", hypersurface_collapse),
        (
            "Milnor bound and critical multiplicity",
            milnor_bound_and_critical_multiplicity,
        ),
        ("mu <= (n+1) tau", mu_tau_inequality),
        ("ADE values", ade_values),
        ("jet classes", jet_classes),
        ("brute-force Samuel oracle", brute_force_samuel),
        ("local reduction", local_reduction),
    ];
    let mut failed = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {label} ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {label} ({detail}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
