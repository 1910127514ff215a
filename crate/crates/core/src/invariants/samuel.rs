//! Samuel functions, multiplicities and the lower bounds they satisfy.

use serde::{Deserialize, Serialize};

use crate::engine::{EngineOptions, IdealBasis, Length, MonomialStaircase};
use crate::error::{Error, Result};
use crate::poly::LocalPolynomial;

/// `C(n, k)` in exact integer arithmetic; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Values `t -> len(R / I^{t+1})` for `t = 0, 1, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamuelTable {
    pub ring_ideal: String,
    pub values: Vec<u64>,
    pub dimension: usize,
    pub stabilized: bool,
    pub window: usize,
}

impl SamuelTable {
    /// `order`-th finite difference, indexed so that entry `i` belongs to `t = i + order`.
    pub fn differences(&self, order: usize) -> Vec<i128> {
        let mut cur: Vec<i128> = self.values.iter().map(|&v| v as i128).collect();
        for _ in 0..order {
            cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
        }
        cur
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityResult {
    pub e: u64,
    pub d: usize,
    pub t_stable: usize,
    pub table: SamuelTable,
}

/// How the Samuel function of a pair `(A/K, I)` is evaluated.
enum Evaluator<'a> {
    /// `I = m`: for a degree-compatible local order the leading ideal of
    /// `K + m^{t+1}` is `L(K) + m^{t+1}`, so one standard basis suffices.
    MAdic(&'a MonomialStaircase),
    /// `m^corner ⊆ K + I` with `corner` known, so `m^{corner(t+1)} ⊆ K + I^{t+1}`.
    General {
        k_basis: Vec<LocalPolynomial>,
        i_gens: Vec<LocalPolynomial>,
        corner: u32,
        fixed: bool,
    },
    Zero,
    Infinite,
}

impl<'a> Evaluator<'a> {
    fn new(k: &'a IdealBasis, i: &IdealBasis, opts: &EngineOptions) -> Result<Self> {
        if is_maximal(i, opts)? {
            return Ok(Evaluator::MAdic(k.standard_basis_with(opts)?.leading_structure()));
        }
        let sum = k.sum(i)?;
        let max_deg = match highest_corner(&sum, opts)? {
            Some(0) => return Ok(Evaluator::Zero),
            Some(c) => c - 1,
            None => return Ok(Evaluator::Infinite),
        };
        let k_sb = k.standard_basis_with(opts)?;
        // when A/K itself has finite length one corner serves every t
        let (corner, fixed) = match k_sb.leading_structure().max_outside_degree() {
            Some(d) => (d + 1, true),
            None if k_sb.leading_structure().is_everything() => (1, true),
            None => (max_deg + 1, false),
        };
        Ok(Evaluator::General {
            k_basis: k_sb.polynomials(),
            i_gens: i.generators().to_vec(),
            corner,
            fixed,
        })
    }

    fn value(&self, t: u32, opts: &EngineOptions) -> Result<Length> {
        match self {
            Evaluator::Zero => Ok(Length::Finite(0)),
            Evaluator::Infinite => Ok(Length::Infinite),
            Evaluator::MAdic(stairs) => Ok(Length::Finite(stairs.outside_by_degree(t).iter().sum())),
            Evaluator::General {
                k_basis,
                i_gens,
                corner,
                fixed,
            } => {
                let n = if *fixed { *corner } else { corner * (t + 1) };
                let mut gens = k_basis.clone();
                gens.extend(truncated_power(i_gens, t + 1, n));
                let ctx = k_basis.first().or(i_gens.first()).map(|p| p.context().clone());
                let Some(ctx) = ctx else {
                    return Ok(Length::Infinite);
                };
                IdealBasis::new(&ctx, gens)?.plus_maximal_power(n).colength_with(opts)
            }
        }
    }
}

/// Corners tried before falling back to a standard basis without one.
const CORNER_PROBES: [u32; 5] = [8, 16, 32, 64, 128];

/// The least `c` with `m^c ⊆ I`, if `I` is primary to the maximal ideal (or the unit ideal).
///
/// Standard bases without a corner can be very expensive, so `I + m^N` is
/// tried first for growing `N`: its leading ideal is `L(I) + m^N`, and if every
/// standard monomial has degree below `N - 1` then `L(I)`, hence `I`, contains
/// all monomials of that degree.
pub(crate) fn highest_corner(i: &IdealBasis, opts: &EngineOptions) -> Result<Option<u32>> {
    if i.corner().is_none() {
        for n in CORNER_PROBES {
            let stairs = i
                .plus_maximal_power(n)
                .standard_basis_with(opts)?
                .leading_structure()
                .clone();
            if stairs.is_everything() {
                return Ok(Some(0));
            }
            if let Some(d) = stairs.max_outside_degree().filter(|&d| d + 1 < n) {
                return Ok(Some(d + 1));
            }
        }
    }
    let stairs = i.standard_basis_with(opts)?.leading_structure();
    if stairs.is_everything() {
        return Ok(Some(0));
    }
    Ok(stairs.max_outside_degree().map(|d| d + 1))
}

/// Whether `I` is the maximal ideal: contained in it with colength one.
fn is_maximal(i: &IdealBasis, opts: &EngineOptions) -> Result<bool> {
    if i.generators().iter().any(|g| !g.constant_term().is_zero()) {
        return Ok(false);
    }
    Ok(i.colength_with(opts)? == Length::Finite(1))
}

/// Generators of `I^p` with every term of degree `>= n` dropped.
pub(crate) fn truncated_power(gens: &[LocalPolynomial], p: u32, n: u32) -> Vec<LocalPolynomial> {
    let gens: Vec<LocalPolynomial> = gens.iter().map(|g| g.truncate(n)).filter(|g| !g.is_zero()).collect();
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    // each product remembers its last factor so factors are taken in non-decreasing order
    let mut acc = vec![(LocalPolynomial::one(first.context()), 0usize)];
    for _ in 0..p {
        let mut next: Vec<(LocalPolynomial, usize)> = Vec::new();
        for (a, start) in &acc {
            for (j, g) in gens.iter().enumerate().skip(*start) {
                let q = a.mul(g).expect("same context").truncate(n);
                if !q.is_zero() && !next.iter().any(|(x, _)| *x == q) {
                    next.push((q, j));
                }
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(q, _)| q).collect()
}

/// `len(A / (K + I^{t+1}))`; infinite when `I` is not primary to the maximal ideal modulo `K`.
pub fn samuel_function(k: &IdealBasis, i: &IdealBasis, t: u32) -> Result<Length> {
    samuel_function_with(k, i, t, &EngineOptions::default())
}

pub fn samuel_function_with(k: &IdealBasis, i: &IdealBasis, t: u32, opts: &EngineOptions) -> Result<Length> {
    Evaluator::new(k, i, opts)?.value(t, opts)
}

/// Stabilization controls for [`multiplicity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicityOptions {
    pub window: usize,
    pub max_t: usize,
    pub engine: EngineOptions,
}

impl Default for MultiplicityOptions {
    fn default() -> Self {
        MultiplicityOptions {
            window: 3,
            max_t: 30,
            engine: EngineOptions::default(),
        }
    }
}

/// Multiplicity of `A/K` with respect to `I`, read off as the eventually
/// constant `d`-th difference of the Samuel function, `d = dim A/K`.
pub fn multiplicity(k: &IdealBasis, i: &IdealBasis, opts: &MultiplicityOptions) -> Result<MultiplicityResult> {
    let eng = &opts.engine;
    let Some(d) = k.krull_dimension_with(eng)? else {
        return Err(Error::InvalidRing("the quotient ring is zero".into()));
    };
    let eval = Evaluator::new(k, i, eng)?;
    match eval {
        Evaluator::Infinite => return Err(Error::InfiniteLength),
        Evaluator::Zero => return Err(Error::InvalidRing("the ideal is the whole ring".into())),
        _ => {}
    }
    let window = opts.window.max(1);
    let mut table = SamuelTable {
        ring_ideal: String::new(),
        values: Vec::new(),
        dimension: d,
        stabilized: false,
        window,
    };
    for t in 0..=opts.max_t {
        let v = eval.value(t as u32, eng)?.finite().ok_or(Error::InfiniteLength)?;
        table.values.push(v);
        let diffs = table.differences(d);
        if diffs.len() < window {
            continue;
        }
        let tail = &diffs[diffs.len() - window..];
        if tail[0] >= 1 && tail.iter().all(|&x| x == tail[0]) {
            let mut first = diffs.len() - window;
            while first > 0 && diffs[first - 1] == tail[0] {
                first -= 1;
            }
            table.stabilized = true;
            let e = if d == 0 {
                k.colength_with(eng)?.finite().ok_or(Error::InfiniteLength)?
            } else {
                tail[0] as u64
            };
            debug_assert_eq!(e as i128, tail[0]);
            return Ok(MultiplicityResult {
                e,
                d,
                t_stable: first + d,
                table,
            });
        }
    }
    Err(Error::NoStabilization { max_t: opts.max_t })
}

/// One evaluated lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub t: usize,
    /// Which of the three bounds (1, 2 or 3).
    pub bound: u8,
    pub actual: u64,
    pub required: i128,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.actual as i128 >= self.required
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamuelBoundsVerdict {
    pub e: u64,
    pub d: usize,
    pub checks: Vec<BoundCheck>,
}

impl SamuelBoundsVerdict {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(BoundCheck::holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.holds())
    }
}

/// Lower bound (3): `sum_{i=0}^{d} (-1)^i C(e, i+1) C(t+d-i, d-i)`.
pub fn alternating_bound(e: u64, d: usize, t: usize) -> i128 {
    (0..=d)
        .map(|i| {
            let term = binomial(e, i as u64 + 1) * binomial((t + d - i) as u64, (d - i) as u64);
            if i % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// Evaluates the three lower bounds on every entry of the table, with `e` the
/// multiplicity with respect to the maximal ideal:
/// (1) `chi(t) >= C(t+d, d)`;
/// (2) `chi(t) >= C(t+d+1, d+1)` for `t <= e-1`;
/// (3) `chi(t) >=` [`alternating_bound`] for `t >= e-1`.
pub fn check_samuel_bounds(table: &SamuelTable, e: u64) -> SamuelBoundsVerdict {
    let d = table.dimension;
    let mut checks = Vec::new();
    for (t, &actual) in table.values.iter().enumerate() {
        let tt = t as u64;
        let dd = d as u64;
        checks.push(BoundCheck {
            t,
            bound: 1,
            actual,
            required: binomial(tt + dd, dd),
        });
        if tt < e {
            checks.push(BoundCheck {
                t,
                bound: 2,
                actual,
                required: binomial(tt + dd + 1, dd + 1),
            });
        }
        if tt + 1 >= e {
            checks.push(BoundCheck {
                t,
                bound: 3,
                actual,
                required: alternating_bound(e, d, t),
            });
        }
    }
    SamuelBoundsVerdict { e, d, checks }
}
