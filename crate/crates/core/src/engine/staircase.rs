//! Monomial ideals and submodules given by their minimal generators.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::monomial::{monomials_of_degree, ExponentVector};

/// Length of a quotient module: a count, or infinite when the support is positive dimensional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Length {
    Finite(u64),
    Infinite,
}

impl Length {
    pub fn is_finite(&self) -> bool {
        matches!(self, Length::Finite(_))
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            Length::Finite(n) => Some(*n),
            Length::Infinite => None,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Length::Finite(n) => s.serialize_u64(*n),
            Length::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Length {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Length::Finite(n)),
            Raw::S(s) if s == "infinite" => Ok(Length::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("invalid length `{s}`"))),
        }
    }
}

/// Minimal generators of a monomial submodule of `A^rank`, one antichain per position.
///
/// `corner = Some(n)` records that every monomial of degree `>= n` belongs to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialStaircase {
    num_vars: usize,
    generators: Vec<Vec<ExponentVector>>,
    corner: Option<u32>,
}

impl MonomialStaircase {
    /// Builds the staircase, discarding non-minimal generators.
    pub fn new(
        num_vars: usize,
        rank: usize,
        gens: impl IntoIterator<Item = (usize, ExponentVector)>,
        corner: Option<u32>,
    ) -> Self {
        let mut generators: Vec<Vec<ExponentVector>> = vec![Vec::new(); rank];
        let mut all: Vec<(usize, ExponentVector)> = gens.into_iter().collect();
        all.sort_by_key(|(p, e)| (*p, e.degree()));
        for (pos, e) in all {
            if corner.is_some_and(|n| e.degree() >= n) {
                continue;
            }
            let slot = &mut generators[pos];
            if slot.iter().any(|g| g.divides(&e)) {
                continue;
            }
            slot.retain(|g| !e.divides(g));
            slot.push(e);
        }
        for slot in &mut generators {
            slot.sort_by(|a, b| crate::monomial::compare_neg_degrevlex(b, a));
        }
        MonomialStaircase {
            num_vars,
            generators,
            corner,
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn corner(&self) -> Option<u32> {
        self.corner
    }

    /// Minimal generators at a position.
    pub fn generators(&self, pos: usize) -> &[ExponentVector] {
        &self.generators[pos]
    }

    pub fn contains(&self, pos: usize, e: &ExponentVector) -> bool {
        self.corner.is_some_and(|n| e.degree() >= n) || self.generators[pos].iter().any(|g| g.divides(e))
    }

    /// Whether every position contains the monomial 1.
    pub fn is_everything(&self) -> bool {
        (0..self.rank()).all(|p| self.contains(p, &ExponentVector::one(self.num_vars)))
    }

    /// Number of monomials outside; this is the colength of the quotient.
    pub fn colength(&self) -> Length {
        let mut total = 0u64;
        for pos in 0..self.rank() {
            match self.bounds(pos) {
                None => return Length::Infinite,
                Some(bounds) => total += self.count_box(pos, &bounds),
            }
        }
        Length::Finite(total)
    }

    /// Per-variable exclusive bounds on standard monomials, when they are finitely many.
    fn bounds(&self, pos: usize) -> Option<Vec<u32>> {
        let mut bounds = vec![u32::MAX; self.num_vars];
        for g in &self.generators[pos] {
            let mut support = g.support();
            if let (Some(i), None) = (support.next(), support.next()) {
                bounds[i] = bounds[i].min(g.get(i) as u32);
            }
            if g.is_one() {
                return Some(vec![0; self.num_vars]);
            }
        }
        if let Some(n) = self.corner {
            for b in &mut bounds {
                *b = (*b).min(n);
            }
        }
        if bounds.contains(&u32::MAX) {
            None
        } else {
            Some(bounds)
        }
    }

    fn count_box(&self, pos: usize, bounds: &[u32]) -> u64 {
        let mut count = 0;
        self.for_each_outside(pos, bounds, &mut |_| count += 1);
        count
    }

    fn for_each_outside(&self, pos: usize, bounds: &[u32], f: &mut impl FnMut(&ExponentVector)) {
        if bounds.contains(&0) {
            return;
        }
        let mut current = vec![0u16; self.num_vars];
        self.walk(pos, bounds, 0, 0, &mut current, f);
    }

    fn walk(
        &self,
        pos: usize,
        bounds: &[u32],
        index: usize,
        degree: u32,
        current: &mut [u16],
        f: &mut impl FnMut(&ExponentVector),
    ) {
        if self.corner.is_some_and(|n| degree >= n) {
            return;
        }
        if index == self.num_vars {
            let e = ExponentVector::new(current.iter().copied());
            if !self.generators[pos].iter().any(|g| g.divides(&e)) {
                f(&e);
            }
            return;
        }
        for a in 0..bounds[index] {
            current[index] = a as u16;
            self.walk(pos, bounds, index + 1, degree + a, current, f);
        }
        current[index] = 0;
    }

    /// Highest degree of a monomial outside; `None` if there are none or infinitely many.
    pub fn max_outside_degree(&self) -> Option<u32> {
        let mut best: Option<u32> = None;
        for pos in 0..self.rank() {
            let bounds = self.bounds(pos)?;
            self.for_each_outside(pos, &bounds, &mut |e| {
                best = Some(best.map_or(e.degree(), |b| b.max(e.degree())))
            });
        }
        best
    }

    /// All monomials outside at `pos`, when finitely many.
    pub fn standard_monomials(&self, pos: usize) -> Option<Vec<ExponentVector>> {
        let bounds = self.bounds(pos)?;
        let mut out = Vec::new();
        self.for_each_outside(pos, &bounds, &mut |e| out.push(e.clone()));
        Some(out)
    }

    /// Monomials outside, per degree `0..=max_degree`, summed over positions.
    pub fn outside_by_degree(&self, max_degree: u32) -> Vec<u64> {
        (0..=max_degree)
            .map(|d| {
                let monos = monomials_of_degree(self.num_vars, d);
                (0..self.rank())
                    .map(|p| monos.iter().filter(|e| !self.contains(p, e)).count() as u64)
                    .sum()
            })
            .collect()
    }

    /// Krull dimension of the quotient by a monomial ideal (position 0).
    ///
    /// The largest set of variables carrying no generator supported inside it;
    /// `None` when the ideal is the whole ring.
    pub fn dimension(&self) -> Option<usize> {
        if self.contains(0, &ExponentVector::one(self.num_vars)) {
            return None;
        }
        if self.corner.is_some() {
            return Some(0);
        }
        let n = self.num_vars;
        let masks: Vec<u64> = self.generators[0]
            .iter()
            .map(|g| g.support().fold(0u64, |m, i| m | (1 << i)))
            .collect();
        let best = (0u64..(1u64 << n))
            .filter(|s| masks.iter().all(|m| m & !s != 0))
            .map(|s| s.count_ones() as usize)
            .max();
        Some(best.unwrap_or(0))
    }
}
