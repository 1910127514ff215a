//! Independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use milnor_core::{ExponentVector, LocalPolynomial, RingContext, Scalar};

/// All exponent vectors in `n` variables of total degree `< bound`.
pub fn monomials_below(n: usize, bound: u32) -> Vec<Vec<u16>> {
    fn go(n: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in 0..left {
            cur.push(a as u16);
            go(n, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, bound, &mut Vec::new(), &mut out);
    out
}

/// Rank of a set of sparse rows by Gaussian elimination.
fn rank(rows: Vec<HashMap<usize, Scalar>>) -> usize {
    let mut pivots: HashMap<usize, HashMap<usize, Scalar>> = HashMap::new();
    for mut row in rows {
        loop {
            row.retain(|_, c| !c.is_zero());
            let Some(&lead) = row.keys().min() else { break };
            match pivots.get(&lead) {
                None => {
                    let inv = row[&lead].inv();
                    for c in row.values_mut() {
                        *c = c.mul(&inv);
                    }
                    pivots.insert(lead, row);
                    break;
                }
                Some(p) => {
                    let factor = row[&lead].clone();
                    for (k, v) in p {
                        let next = match row.remove(k) {
                            Some(cur) => cur.sub(&v.mul(&factor)),
                            None => v.mul(&factor).neg(),
                        };
                        row.insert(*k, next);
                    }
                }
            }
        }
    }
    pivots.len()
}

/// `dim_k (A^r / (M + m^N A^r))` by linear algebra on truncated multiples.
pub fn truncated_colength(ctx: &Arc<RingContext>, gens: &[Vec<LocalPolynomial>], rank_r: usize, n_bound: u32) -> u64 {
    let nv = ctx.num_vars();
    let monos = monomials_below(nv, n_bound);
    let index: HashMap<(usize, Vec<u16>), usize> = (0..rank_r)
        .flat_map(|p| monos.iter().map(move |m| (p, m.clone())))
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let mut rows = Vec::new();
    for g in gens {
        for shift in &monos {
            let mut row: HashMap<usize, Scalar> = HashMap::new();
            for (pos, comp) in g.iter().enumerate() {
                for (e, c) in comp.terms() {
                    let prod: Vec<u16> = e.exponents().iter().zip(shift).map(|(a, b)| a + b).collect();
                    let deg: u32 = prod.iter().map(|&a| a as u32).sum();
                    if deg >= n_bound {
                        continue;
                    }
                    row.insert(index[&(pos, prod)], c.clone());
                }
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    (index.len() - rank(rows)) as u64
}

/// Colength of a submodule of finite colength. `M + m^N = M + m^{N+1}` means
/// `m^N ⊆ M` by Nakayama, so the pair `(N, N + 1)` is tested for `N = 1, 2, 4, ...`.
pub fn module_colength(
    ctx: &Arc<RingContext>,
    gens: &[Vec<LocalPolynomial>],
    rank_r: usize,
    max_n: u32,
) -> Option<u64> {
    let mut n = 1;
    while n < max_n {
        let cur = truncated_colength(ctx, gens, rank_r, n);
        if cur == truncated_colength(ctx, gens, rank_r, n + 1) {
            return Some(cur);
        }
        n *= 2;
    }
    None
}

pub fn ideal_colength(ctx: &Arc<RingContext>, gens: &[LocalPolynomial], max_n: u32) -> Option<u64> {
    let gens: Vec<Vec<LocalPolynomial>> = gens.iter().map(|g| vec![g.clone()]).collect();
    module_colength(ctx, &gens, 1, max_n)
}

pub fn ev(e: &[u16]) -> ExponentVector {
    ExponentVector::new(e.iter().copied())
}

/// Determinant by the Leibniz formula: a sum over all permutations.
pub fn leibniz_det(ctx: &Arc<RingContext>, m: &[Vec<LocalPolynomial>]) -> LocalPolynomial {
    fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
        if n == 0 {
            return vec![(Vec::new(), false)];
        }
        let mut out = Vec::new();
        for (p, odd) in perms(n - 1) {
            // insert n - 1 at each position; moving it left past j elements flips parity j times
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push((q, odd ^ ((p.len() - pos) % 2 == 1)));
            }
        }
        out
    }
    let mut acc = LocalPolynomial::zero(ctx);
    for (p, odd) in perms(m.len()) {
        let mut term = LocalPolynomial::one(ctx);
        for (i, &j) in p.iter().enumerate() {
            term = term.mul(&m[i][j]).unwrap();
        }
        acc = if odd { acc.sub(&term) } else { acc.add(&term) }.unwrap();
    }
    acc
}

/// Generators of `<gens>^t` as all products of `t` generators, with equal products merged.
pub fn naive_power(ctx: &Arc<RingContext>, gens: &[LocalPolynomial], t: u32) -> Vec<LocalPolynomial> {
    let mut out = vec![LocalPolynomial::one(ctx)];
    for _ in 0..t {
        let all = out.iter().flat_map(|p| gens.iter().map(move |g| p.mul(g).unwrap()));
        let unique: std::collections::BTreeMap<String, LocalPolynomial> = all.map(|p| (p.to_string(), p)).collect();
        out = unique.into_values().collect();
    }
    out
}

/// Parses a list of expressions over the rationals.
pub fn polys(ctx: &Arc<RingContext>, src: &[&str]) -> Vec<LocalPolynomial> {
    src.iter()
        .map(|s| milnor_core::corpus::parse_polynomial(s, ctx).unwrap())
        .collect()
}

/// `len(A / (K + I^{t+1}))` with the power generated afresh.
pub fn brute_samuel(ctx: &Arc<RingContext>, k: &[LocalPolynomial], i: &[LocalPolynomial], t: u32) -> u64 {
    let mut gens = k.to_vec();
    gens.extend(naive_power(ctx, i, t + 1));
    ideal_colength(ctx, &gens, 256).expect("finite colength")
}
