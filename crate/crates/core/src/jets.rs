//! Membership of concrete jets in the truncated conditions behind the classes
//! `T(r)` (Tjurina number `r`), `D(d)` (singular locus of dimension `>= d`)
//! and `C(e)` (critical locus of multiplicity `>= e`).
//!
//! The Tjurina condition lives on jets of level `r + 2`; the other two on
//! jets of level `r`. Each verdict records every inequality it evaluated.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{EngineOptions, IdealBasis, Length};
use crate::error::{Error, Result};
use crate::invariants::samuel::highest_corner;
use crate::invariants::{alternating_bound, binomial, SingularityInput};
use crate::poly::{LocalPolynomial, RingContext};

/// A tuple of polynomials modulo `m^level`.
#[derive(Clone, Debug)]
pub struct JetVector {
    level: u32,
    input: SingularityInput,
}

impl JetVector {
    pub fn new(ctx: &Arc<RingContext>, polys: &[LocalPolynomial], level: u32) -> Result<Self> {
        let input = SingularityInput::new(ctx, polys.iter().map(|p| p.truncate(level)).collect())?;
        Ok(JetVector { level, input })
    }

    /// The `level`-jet of a germ.
    pub fn of(s: &SingularityInput, level: u32) -> Self {
        JetVector {
            level,
            input: s.truncate(level),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn polys(&self) -> &[LocalPolynomial] {
        self.input.polys()
    }

    pub fn context(&self) -> &Arc<RingContext> {
        self.input.context()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JetClass {
    T,
    D,
    C,
}

impl fmt::Display for JetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            JetClass::T => "T",
            JetClass::D => "D",
            JetClass::C => "C",
        };
        write!(f, "{s}")
    }
}

/// One evaluated inequality `lhs >= rhs` (for `T`, the equation `lhs = rhs`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub t: u64,
    pub lhs: u64,
    pub rhs: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub class: JetClass,
    pub parameter: u64,
    pub level: u32,
    pub member: bool,
    /// No inequality fell in the tested range.
    pub vacuous: bool,
    pub witness: Vec<Witness>,
}

/// `len(T^1 / m^{r+1} T^1) = r` for a jet of level `r + 2`.
pub fn tjurina_jet_test(j: &JetVector, r: u64) -> Result<ClassVerdict> {
    tjurina_jet_test_with(j, r, &EngineOptions::default())
}

pub fn tjurina_jet_test_with(j: &JetVector, r: u64, opts: &EngineOptions) -> Result<ClassVerdict> {
    let expected = level_for(r, 2)?;
    if j.level != expected {
        return Err(Error::LevelMismatch {
            expected,
            found: j.level,
        });
    }
    let module = j.input.tjurina_module().plus_maximal_power(r as u32 + 1);
    let lhs = finite(module.colength_with(opts)?)?;
    Ok(ClassVerdict {
        class: JetClass::T,
        parameter: r,
        level: j.level,
        member: lhs == r,
        vacuous: false,
        witness: vec![Witness {
            t: r,
            lhs,
            rhs: r as i128,
        }],
    })
}

fn level_for(r: u64, offset: u64) -> Result<u32> {
    u32::try_from(r + offset).map_err(|_| Error::InvalidParameter(format!("level {r} is too large")))
}

fn finite(l: Length) -> Result<u64> {
    // every length below is taken modulo a power of the maximal ideal
    l.finite().ok_or(Error::InfiniteLength)
}

/// `len(O_Sigma / m^{t+1}) >= C(t+d, d)` for all `t <= r - 2`, with `Sigma`
/// the singular locus of the jet.
pub fn dimension_jet_test(j: &JetVector, d: u64) -> Result<ClassVerdict> {
    dimension_jet_test_with(j, d, &EngineOptions::default())
}

pub fn dimension_jet_test_with(j: &JetVector, d: u64, opts: &EngineOptions) -> Result<ClassVerdict> {
    let r = j.level;
    let mut verdict = ClassVerdict {
        class: JetClass::D,
        parameter: d,
        level: r,
        member: true,
        vacuous: r < 2,
        witness: Vec::new(),
    };
    if r < 2 {
        return Ok(verdict);
    }
    let sigma = j.input.sigma_scheme(j.input.n())?.plus_maximal_power(r - 1);
    let per_degree = sigma
        .standard_basis_with(opts)?
        .leading_structure()
        .outside_by_degree(r - 2);
    let mut lhs = 0u64;
    for (t, count) in per_degree.into_iter().enumerate() {
        lhs += count;
        let w = Witness {
            t: t as u64,
            lhs,
            rhs: binomial(t as u64 + d, d),
        };
        verdict.member &= lhs as i128 >= w.rhs;
        verdict.witness.push(w);
    }
    Ok(verdict)
}

/// For `e - 1 <= t` with `N_t = e C(t+k-1, k-1) <= r - 2`:
/// `len(O_C / (m^{N_t} + <f>^{t+1})) >=` the alternating sum with `d = k - 1`,
/// `C` the critical locus of the jet. Evaluation stops at the first violation.
pub fn critical_jet_test(j: &JetVector, e: u64) -> Result<ClassVerdict> {
    critical_jet_test_with(j, e, &EngineOptions::default())
}

pub fn critical_jet_test_with(j: &JetVector, e: u64, opts: &EngineOptions) -> Result<ClassVerdict> {
    if e == 0 {
        return Err(Error::InvalidParameter(
            "the multiplicity parameter must be at least 1".into(),
        ));
    }
    let k = j.input.k() as u64;
    let mut verdict = ClassVerdict {
        class: JetClass::C,
        parameter: e,
        level: j.level,
        member: true,
        vacuous: true,
        witness: Vec::new(),
    };
    let range = critical_range(e, k, j.level as u64);
    let Some(&t_max) = range.last() else {
        return Ok(verdict);
    };
    let bound = |t: u64| (e as i128 * binomial(t + k - 1, k - 1)) as u32;
    let mut lhs = CriticalLhs::new(&j.input, bound(t_max), t_max, opts)?;
    verdict.vacuous = false;
    for t in range {
        let w = Witness {
            t,
            lhs: lhs.value(t, bound(t), opts)?,
            rhs: alternating_bound(e, (k - 1) as usize, t as usize),
        };
        verdict.witness.push(w);
        if (w.lhs as i128) < w.rhs {
            verdict.member = false;
            break;
        }
    }
    Ok(verdict)
}

/// The `t` range of the critical condition at level `r`.
///
/// For `k = 1` the bound `N_t = e` does not depend on `t` and the range is
/// unbounded; the left side only grows with `t` while the right side stays
/// `e`, so `t = e - 1` decides and two more values are recorded.
pub fn critical_range(e: u64, k: u64, r: u64) -> Vec<u64> {
    let start = e - 1;
    let fits = |t: u64| r >= 2 && (e as i128) * binomial(t + k - 1, k - 1) <= (r - 2) as i128;
    if k == 1 {
        return if fits(start) {
            (start..start + 3).collect()
        } else {
            Vec::new()
        };
    }
    (start..).take_while(|&t| fits(t)).collect()
}

/// Successive values of `len(A / (J_k + <f>^{t+1} + m^N))` for the jet's polynomials.
///
/// All work happens modulo one fixed `m^corner`, where
/// `J + I^{t+1} + m^c = J + I (J + I^t + m^c) + m^c`; so each power is obtained
/// from the standard basis of the previous one. Since `L(K + m^N) = L(K) + m^N`
/// for the local degree order, any smaller `N` is read off by degree.
struct CriticalLhs {
    ctx: Arc<RingContext>,
    minors: Vec<LocalPolynomial>,
    polys: Vec<LocalPolynomial>,
    corner: u32,
    /// `m^c ⊆ <f> + J_k`, when known; then `m^{c(t+1)} ⊆ J_k + <f>^{t+1}`.
    sigma_corner: Option<u32>,
    /// Standard basis of `J + I^{t+1} + m^corner` for the last computed `t`.
    current: Option<(u64, Vec<LocalPolynomial>, crate::engine::MonomialStaircase)>,
}

impl CriticalLhs {
    fn new(s: &SingularityInput, n_max: u32, t_max: u64, opts: &EngineOptions) -> Result<Self> {
        let minors = s.critical_locus()?.generators().to_vec();
        let sigma_corner = highest_corner(&s.sigma_scheme(s.n())?, opts)?;
        let corner = Self::effective(sigma_corner, n_max, t_max);
        Ok(CriticalLhs {
            ctx: s.context().clone(),
            minors,
            polys: s.polys().to_vec(),
            corner,
            sigma_corner,
            current: None,
        })
    }

    fn effective(sigma_corner: Option<u32>, n: u32, t: u64) -> u32 {
        match sigma_corner {
            Some(c) => n.min(c.saturating_mul(t as u32 + 1)),
            None => n,
        }
    }

    fn step(
        &self,
        prev: Option<&[LocalPolynomial]>,
        opts: &EngineOptions,
    ) -> Result<(Vec<LocalPolynomial>, crate::engine::MonomialStaircase)> {
        let mut gens = self.minors.clone();
        match prev {
            None => gens.extend(self.polys.iter().map(|f| f.truncate(self.corner))),
            Some(basis) => {
                for f in &self.polys {
                    for b in basis {
                        let p = f.mul(b)?.truncate(self.corner);
                        if !p.is_zero() {
                            gens.push(p);
                        }
                    }
                }
            }
        }
        let ideal = IdealBasis::new(&self.ctx, gens)?.plus_maximal_power(self.corner);
        let sb = ideal.standard_basis_with(opts)?;
        Ok((sb.polynomials(), sb.leading_structure().clone()))
    }

    /// Must be called with non-decreasing `t`.
    fn value(&mut self, t: u64, n: u32, opts: &EngineOptions) -> Result<u64> {
        loop {
            let next = match &self.current {
                Some((s, _, _)) if *s == t => break,
                Some((s, basis, _)) => (*s + 1, self.step(Some(basis), opts)?),
                None => (0, self.step(None, opts)?),
            };
            self.current = Some((next.0, next.1 .0, next.1 .1));
        }
        let (_, _, stairs) = self.current.as_ref().expect("computed above");
        let n = Self::effective(self.sigma_corner, n, t);
        debug_assert!(n <= self.corner);
        Ok(stairs
            .outside_by_degree(n.saturating_sub(1))
            .iter()
            .take(n as usize)
            .sum())
    }
}

/// Verdicts of one class test at levels `1..=r_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub class: JetClass,
    pub parameter: u64,
    pub verdicts: Vec<ClassVerdict>,
    /// First level from which every verdict up to `r_max` agrees with the last one.
    pub stable_from: u32,
    pub final_member: bool,
}

/// Runs a class test on the truncations of `s` at each level up to `r_max`.
///
/// For `T` the test needs a jet of level `param + 2`; below that level the
/// truncation at the scan level is used as its representative.
pub fn stabilization_scan(s: &SingularityInput, class: JetClass, param: u64, r_max: u32) -> Result<ScanResult> {
    stabilization_scan_with(s, class, param, r_max, &EngineOptions::default())
}

pub fn stabilization_scan_with(
    s: &SingularityInput,
    class: JetClass,
    param: u64,
    r_max: u32,
    opts: &EngineOptions,
) -> Result<ScanResult> {
    if r_max < 3 {
        return Err(Error::InvalidParameter(format!("scan needs r_max >= 3, got {r_max}")));
    }
    let mut verdicts = Vec::with_capacity(r_max as usize);
    for level in 1..=r_max {
        let v = match class {
            JetClass::T => {
                let full = level_for(param, 2)?;
                let jet = JetVector {
                    level: full,
                    input: s.truncate(level.min(full)),
                };
                let mut v = tjurina_jet_test_with(&jet, param, opts)?;
                v.level = level;
                v
            }
            JetClass::D => dimension_jet_test_with(&JetVector::of(s, level), param, opts)?,
            JetClass::C => critical_jet_test_with(&JetVector::of(s, level), param, opts)?,
        };
        verdicts.push(v);
    }
    let final_member = verdicts.last().map(|v| v.member).unwrap_or(true);
    let mut stable_from = r_max;
    while stable_from > 1 && verdicts[stable_from as usize - 2].member == final_member {
        stable_from -= 1;
    }
    Ok(ScanResult {
        class,
        parameter: param,
        verdicts,
        stable_from,
        final_member,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn germ(src: &[&str], vars: &[&str]) -> SingularityInput {
        let r = RingContext::new(vars.iter().copied(), Field::Rational).unwrap();
        let polys = src
            .iter()
            .map(|s| crate::corpus::parse_polynomial(s, &r).unwrap())
            .collect();
        SingularityInput::new(&r, polys).unwrap()
    }

    fn cusp() -> SingularityInput {
        germ(&["x^3 + y^2"], &["x", "y"])
    }

    #[test]
    fn truncation_bounds_degrees() {
        let j = JetVector::of(&cusp(), 3);
        assert_eq!(j.polys()[0].to_string(), "y^2");
    }

    #[test]
    fn tjurina_class_of_cusp() {
        let f = cusp();
        assert!(tjurina_jet_test(&JetVector::of(&f, 4), 2).unwrap().member);
        assert!(!tjurina_jet_test(&JetVector::of(&f, 3), 1).unwrap().member);
        assert!(!tjurina_jet_test(&JetVector::of(&f, 5), 3).unwrap().member);
        assert_eq!(
            tjurina_jet_test(&JetVector::of(&f, 4), 1).unwrap_err(),
            Error::LevelMismatch { expected: 3, found: 4 }
        );
        let smooth = germ(&["x"], &["x", "y"]);
        assert!(tjurina_jet_test(&JetVector::of(&smooth, 2), 0).unwrap().member);
    }

    #[test]
    fn dimension_class() {
        let line = germ(&["x^2*y"], &["x", "y"]);
        for r in 1..10 {
            assert!(
                dimension_jet_test(&JetVector::of(&line, r), 1).unwrap().member,
                "r = {r}"
            );
        }
        let v = dimension_jet_test(&JetVector::of(&cusp(), 12), 1).unwrap();
        assert!(!v.member);
        assert_eq!(v.witness[2], Witness { t: 2, lhs: 2, rhs: 3 });
        assert!(dimension_jet_test(&JetVector::of(&cusp(), 12), 0).unwrap().member);
        assert!(dimension_jet_test(&JetVector::of(&cusp(), 1), 1).unwrap().vacuous);
    }

    #[test]
    fn critical_class_of_cusp() {
        let f = cusp();
        assert!(critical_jet_test(&JetVector::of(&f, 10), 2).unwrap().member);
        let v = critical_jet_test(&JetVector::of(&f, 10), 3).unwrap();
        assert!(!v.member);
        assert_eq!(v.witness[0], Witness { t: 2, lhs: 2, rhs: 3 });
        assert!(critical_jet_test(&JetVector::of(&f, 3), 2).unwrap().vacuous);
    }

    #[test]
    fn ranges() {
        assert_eq!(critical_range(2, 1, 4), vec![1, 2, 3]);
        assert!(critical_range(2, 1, 3).is_empty());
        // k = 2: N_t = e (t + 1)
        assert_eq!(critical_range(2, 2, 10), vec![1, 2, 3]);
    }

    #[test]
    fn scans() {
        let t = stabilization_scan(&cusp(), JetClass::T, 2, 8).unwrap();
        assert!(t.final_member);
        assert!(t.stable_from <= 4);
        let d = stabilization_scan(&cusp(), JetClass::D, 1, 8).unwrap();
        assert!(!d.final_member);
        assert_eq!(d.stable_from, 4);
        let line = stabilization_scan(&germ(&["x^2*y"], &["x", "y"]), JetClass::D, 1, 8).unwrap();
        assert!(line.final_member && line.stable_from == 1);
        assert!(stabilization_scan(&cusp(), JetClass::D, 1, 2).is_err());
    }
}
