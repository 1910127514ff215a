//! Term lists over a free module `A^r`, ordered position-over-term.
//!
//! Ideals are handled as rank-one modules, so the reduction code only deals
//! with this one representation.

use std::cmp::Ordering;

use crate::field::Scalar;
use crate::monomial::{compare_neg_degrevlex, ExponentVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub pos: u32,
    pub exps: ExponentVector,
    pub coeff: Scalar,
}

/// Position first (lower index is larger), then the local monomial order.
#[inline]
pub(crate) fn compare_terms(pa: u32, a: &ExponentVector, pb: u32, b: &ExponentVector) -> Ordering {
    match pb.cmp(&pa) {
        Ordering::Equal => compare_neg_degrevlex(a, b),
        ord => ord,
    }
}

/// Nonzero terms sorted decreasingly; the first term leads.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Vector {
    pub terms: Vec<Term>,
}

impl Vector {
    pub fn from_terms_sorted(terms: Vec<Term>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| { compare_terms(w[0].pos, &w[0].exps, w[1].pos, &w[1].exps) == Ordering::Greater }));
        Vector { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &Term {
        &self.terms[0]
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exps.degree()).max().unwrap_or(0)
    }

    /// Degree minus the degree of the leading monomial.
    pub fn ecart(&self) -> u32 {
        if self.terms.is_empty() {
            return 0;
        }
        self.degree() - self.lead().exps.degree()
    }

    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    /// Drops terms of degree `>= corner`.
    pub fn truncate(&mut self, corner: Option<u32>) {
        if let Some(n) = corner {
            self.terms.retain(|t| t.exps.degree() < n);
        }
    }

    pub fn make_monic(&mut self) {
        if self.terms.is_empty() || self.lead().coeff.is_one() {
            return;
        }
        let inv = self.lead().coeff.inv();
        for t in &mut self.terms {
            t.coeff = t.coeff.mul(&inv);
        }
    }

    /// `self - c * x^shift * other`, dropping terms of degree `>= corner`.
    pub fn sub_scaled(&self, c: &Scalar, shift: &ExponentVector, other: &Vector, corner: Option<u32>) -> Vector {
        let limit = corner.unwrap_or(u32::MAX);
        let shift_deg = shift.degree();
        let neg_c = c.neg();
        let mut a = self.terms.iter().filter(|t| t.exps.degree() < limit).peekable();
        let mut b = other
            .terms
            .iter()
            .filter(|t| t.exps.degree() + shift_deg < limit)
            .map(|t| Term {
                pos: t.pos,
                exps: t.exps.mul(shift),
                coeff: t.coeff.mul(&neg_c),
            })
            .peekable();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(ta), Some(tb)) => compare_terms(ta.pos, &ta.exps, tb.pos, &tb.exps),
            };
            match ord {
                Ordering::Greater => out.push(a.next().unwrap().clone()),
                Ordering::Less => out.push(b.next().unwrap()),
                Ordering::Equal => {
                    let ta = a.next().unwrap();
                    let tb = b.next().unwrap();
                    let s = ta.coeff.add(&tb.coeff);
                    if !s.is_zero() {
                        out.push(Term {
                            pos: tb.pos,
                            exps: tb.exps,
                            coeff: s,
                        });
                    }
                }
            }
        }
        Vector { terms: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn t(pos: u32, e: &[u16], c: i64) -> Term {
        Term {
            pos,
            exps: ExponentVector::new(e.iter().copied()),
            coeff: Field::Rational.from_i64(c),
        }
    }

    #[test]
    fn sub_scaled_cancels_lead() {
        // (x - x^2) - 1 * x^0 * (x) = -x^2
        let a = Vector::from_terms_sorted(vec![t(0, &[1], 1), t(0, &[2], -1)]);
        let b = Vector::from_terms_sorted(vec![t(0, &[1], 1)]);
        let r = a.sub_scaled(&Field::Rational.one(), &ExponentVector::new([0]), &b, None);
        assert_eq!(r.terms, vec![t(0, &[2], -1)]);
        assert_eq!(a.ecart(), 1);
    }

    #[test]
    fn sub_scaled_respects_corner() {
        let a = Vector::from_terms_sorted(vec![t(0, &[1], 1)]);
        let b = Vector::from_terms_sorted(vec![t(0, &[0], 1), t(0, &[3], 5)]);
        // a - x*b = -5 x^4, dropped under corner 4
        let r = a.sub_scaled(&Field::Rational.one(), &ExponentVector::new([1]), &b, Some(4));
        assert!(r.is_zero());
    }

    #[test]
    fn position_over_term() {
        let hi = ExponentVector::new([3]);
        let lo = ExponentVector::new([0]);
        assert_eq!(compare_terms(0, &hi, 1, &lo), Ordering::Greater);
        assert_eq!(compare_terms(1, &lo, 1, &hi), Ordering::Greater);
    }
}
