//! Mora's tangent cone algorithm.
//!
//! The normal form is a weak normal form: the result is zero exactly when the
//! input lies in the submodule generated by the reducers over the local ring.
//! Reducers are chosen by minimal ecart, and whenever the current remainder has
//! smaller ecart than the chosen reducer it joins the reducer set. This is what
//! lets `x` reduce to zero modulo `x - x^2`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::monomial::ExponentVector;

use super::vector::{compare_terms, Vector};

/// Default cap on reduction steps per standard basis computation.
pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

pub(crate) struct StepCounter {
    used: u64,
    budget: u64,
}

impl StepCounter {
    pub fn new(budget: u64) -> Self {
        StepCounter { used: 0, budget }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.budget {
            return Err(Error::StepBudgetExceeded { budget: self.budget });
        }
        Ok(())
    }
}

pub(crate) struct Reducer {
    pub vector: Vector,
    ecart: u32,
}

impl Reducer {
    pub fn new(vector: Vector) -> Self {
        let ecart = vector.ecart();
        Reducer { vector, ecart }
    }
}

/// Index of the preferred reducer for `lead`: minimal ecart, then larger
/// leading term, then earliest insertion.
fn select<'a>(lead_pos: u32, lead: &ExponentVector, sets: [&'a [Reducer]; 2]) -> Option<&'a Reducer> {
    let mut best: Option<&Reducer> = None;
    for r in sets.into_iter().flatten() {
        let t = r.vector.lead();
        if t.pos != lead_pos || !t.exps.divides(lead) {
            continue;
        }
        best = match best {
            None => Some(r),
            Some(b) => {
                let better = match r.ecart.cmp(&b.ecart) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        let bt = b.vector.lead();
                        compare_terms(t.pos, &t.exps, bt.pos, &bt.exps) == Ordering::Greater
                    }
                };
                if better {
                    Some(r)
                } else {
                    Some(b)
                }
            }
        };
    }
    best
}

/// Weak normal form of `h` with respect to `basis`.
pub(crate) fn normal_form(
    mut h: Vector,
    basis: &[Reducer],
    corner: Option<u32>,
    steps: &mut StepCounter,
) -> Result<Vector> {
    h.truncate(corner);
    let mut extra: Vec<Reducer> = Vec::new();
    while !h.is_zero() {
        let lead = h.lead().clone();
        let Some(g) = select(lead.pos, &lead.exps, [basis, &extra]) else {
            break;
        };
        steps.tick()?;
        let shift = g.vector.lead().exps.quotient_of(&lead.exps);
        let c = lead.coeff.div(&g.vector.lead().coeff);
        let next = h.sub_scaled(&c, &shift, &g.vector, corner);
        let h_ecart = h.ecart();
        if g.ecart > h_ecart {
            extra.push(Reducer {
                vector: h,
                ecart: h_ecart,
            });
        }
        h = next;
    }
    Ok(h)
}

struct Pair {
    i: usize,
    j: usize,
    pos: u32,
    lcm: ExponentVector,
}

/// Standard basis of the submodule generated by `gens`, minimalized so that no
/// leading term divides another. `corner` promises that all terms of degree
/// `>= corner` lie in the submodule; such terms are discarded throughout.
pub(crate) fn standard_basis(gens: Vec<Vector>, rank: usize, corner: Option<u32>, budget: u64) -> Result<Vec<Vector>> {
    // coprime leading monomials only give a trivial syzygy for ideals
    let product_criterion = rank == 1;
    let mut steps = StepCounter::new(budget);
    let mut basis: Vec<Reducer> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    for mut g in gens {
        g.truncate(corner);
        if g.is_zero() {
            continue;
        }
        g.make_monic();
        add_element(&mut basis, &mut pairs, g, product_criterion);
    }

    let mut sorted = false;
    while !pairs.is_empty() {
        if !sorted {
            // pop() takes the largest lcm, i.e. the lowest degree
            pairs.sort_by(|a, b| compare_terms(a.pos, &a.lcm, b.pos, &b.lcm).then_with(|| (b.i, b.j).cmp(&(a.i, a.j))));
            sorted = true;
        }
        let pair = pairs.pop().unwrap();
        let s = s_vector(&basis[pair.i].vector, &basis[pair.j].vector, &pair.lcm, corner);
        let mut h = normal_form(s, &basis, corner, &mut steps)?;
        if !h.is_zero() {
            h.make_monic();
            add_element(&mut basis, &mut pairs, h, product_criterion);
            sorted = false;
        }
    }

    Ok(minimalize(basis.into_iter().map(|r| r.vector).collect()))
}

fn s_vector(f: &Vector, g: &Vector, lcm: &ExponentVector, corner: Option<u32>) -> Vector {
    let (lf, lg) = (f.lead(), g.lead());
    let sf = lf.exps.quotient_of(lcm);
    let sg = lg.exps.quotient_of(lcm);
    // elements are monic, so the leading coefficients are one
    let scaled_f = Vector::default().sub_scaled(&lf.coeff.neg().inv(), &sf, f, corner);
    scaled_f.sub_scaled(&lg.coeff.inv(), &sg, g, corner)
}

fn add_element(basis: &mut Vec<Reducer>, pairs: &mut Vec<Pair>, v: Vector, product_criterion: bool) {
    let k = basis.len();
    let (pos, lead) = (v.lead().pos, v.lead().exps.clone());

    // chain criterion on the old pairs
    pairs.retain(|p| {
        if p.pos != pos || !lead.divides(&p.lcm) {
            return true;
        }
        let li = &basis[p.i].vector.lead().exps;
        let lj = &basis[p.j].vector.lead().exps;
        li.lcm(&lead) == p.lcm || lj.lcm(&lead) == p.lcm
    });

    for (i, r) in basis.iter().enumerate() {
        let t = r.vector.lead();
        if t.pos != pos {
            continue;
        }
        // two monomials have a vanishing s-vector
        if r.vector.is_single_term() && v.is_single_term() {
            continue;
        }
        if product_criterion && t.exps.is_coprime(&lead) {
            continue;
        }
        pairs.push(Pair {
            i,
            j: k,
            pos,
            lcm: t.exps.lcm(&lead),
        });
    }
    basis.push(Reducer::new(v));
}

fn minimalize(mut elems: Vec<Vector>) -> Vec<Vector> {
    let mut keep = vec![true; elems.len()];
    for a in 0..elems.len() {
        for b in 0..elems.len() {
            if a == b || !keep[b] {
                continue;
            }
            let (ta, tb) = (elems[a].lead(), elems[b].lead());
            if ta.pos == tb.pos && tb.exps.divides(&ta.exps) && (ta.exps != tb.exps || b < a) {
                keep[a] = false;
                break;
            }
        }
    }
    let mut k = keep.into_iter();
    elems.retain(|_| k.next().unwrap());
    elems
}

/// Mora reduction against an arbitrary generator list.
pub(crate) fn reduce(h: Vector, gens: &[Vector], corner: Option<u32>, budget: u64) -> Result<Vector> {
    let basis: Vec<Reducer> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .cloned()
        .map(Reducer::new)
        .collect();
    normal_form(h, &basis, corner, &mut StepCounter::new(budget))
}

/// s-vectors of all pairs with a common leading position, for verification.
pub(crate) fn all_s_vectors(elems: &[Vector]) -> Vec<Vector> {
    let mut out = Vec::new();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            let (a, b) = (elems[i].lead(), elems[j].lead());
            if a.pos == b.pos {
                out.push(s_vector(&elems[i], &elems[j], &a.exps.lcm(&b.exps), None));
            }
        }
    }
    out
}
