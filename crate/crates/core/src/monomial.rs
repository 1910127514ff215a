//! Exponent vectors and the anti-graded reverse lexicographic order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

pub type Exponent = u16;

/// Exponents of a monomial `x_1^a_1 ... x_n^a_n`, with its total degree cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    exps: SmallVec<[Exponent; 6]>,
    degree: u32,
}

impl ExponentVector {
    pub fn new<I: IntoIterator<Item = Exponent>>(exps: I) -> Self {
        let exps: SmallVec<[Exponent; 6]> = exps.into_iter().collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        ExponentVector { exps, degree }
    }

    /// The monomial 1.
    pub fn one(num_vars: usize) -> Self {
        ExponentVector {
            exps: SmallVec::from_elem(0, num_vars),
            degree: 0,
        }
    }

    /// The variable `x_index`.
    pub fn variable(num_vars: usize, index: usize) -> Self {
        let mut e = Self::one(num_vars);
        e.exps[index] = 1;
        e.degree = 1;
        e
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exps
    }

    pub fn get(&self, i: usize) -> Exponent {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert!(self.divides(other));
        ExponentVector {
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
            degree: other.degree - self.degree,
        }
    }

    pub fn lcm(&self, other: &ExponentVector) -> ExponentVector {
        Self::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)))
    }

    pub fn is_coprime(&self, other: &ExponentVector) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// Drops the derivative exponent of variable `i`; `None` if `x_i` does not occur.
    pub(crate) fn lower(&self, i: usize) -> Option<ExponentVector> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut e = self.clone();
        e.exps[i] -= 1;
        e.degree -= 1;
        Some(e)
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// The only supported monomial order.
///
/// Lower total degree is larger, so `1` is the largest monomial and `x > x^2`.
/// Ties in degree are broken reverse lexicographically: the monomial with the
/// smaller exponent in the last differing variable is larger. Under this rule
/// `x^2 > x*y > y^2` in `k[x, y]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalOrder {
    #[default]
    NegDegRevLex,
}

impl LocalOrder {
    pub fn compare(&self, a: &ExponentVector, b: &ExponentVector) -> Ordering {
        compare_neg_degrevlex(a, b)
    }
}

#[inline]
pub fn compare_neg_degrevlex(a: &ExponentVector, b: &ExponentVector) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    match b.degree.cmp(&a.degree) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (x, y) in a.exps.iter().rev().zip(b.exps.iter().rev()) {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// All exponent vectors in `num_vars` variables of exactly `degree`.
pub fn monomials_of_degree(num_vars: usize, degree: u32) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let mut current = vec![0 as Exponent; num_vars];
    fill(&mut out, &mut current, 0, degree);
    out
}

fn fill(out: &mut Vec<ExponentVector>, current: &mut [Exponent], index: usize, remaining: u32) {
    if index + 1 == current.len() {
        current[index] = remaining as Exponent;
        out.push(ExponentVector::new(current.iter().copied()));
        return;
    }
    if current.is_empty() {
        if remaining == 0 {
            out.push(ExponentVector::new([]));
        }
        return;
    }
    for e in (0..=remaining).rev() {
        current[index] = e as Exponent;
        fill(out, current, index + 1, remaining - e);
    }
    current[index] = 0;
}
