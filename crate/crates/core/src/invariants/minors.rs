//! Jacobian matrices and their minor ideals.

use std::collections::HashMap;
use std::sync::Arc;

use crate::engine::IdealBasis;
use crate::error::{Error, Result};
use crate::poly::{LocalPolynomial, RingContext};

/// The `k x N` matrix of partial derivatives `d f_i / d x_j`.
#[derive(Clone, Debug)]
pub struct JacobianMatrix {
    ctx: Arc<RingContext>,
    entries: Vec<Vec<LocalPolynomial>>,
}

impl JacobianMatrix {
    pub fn new(ctx: &Arc<RingContext>, polys: &[LocalPolynomial]) -> Result<Self> {
        let entries = polys
            .iter()
            .map(|f| {
                (0..ctx.num_vars())
                    .map(|j| f.partial_derivative(j))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(JacobianMatrix {
            ctx: ctx.clone(),
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.ctx.num_vars()
    }

    pub fn entry(&self, i: usize, j: usize) -> &LocalPolynomial {
        &self.entries[i][j]
    }

    /// Column `j` as a vector of length `rows`.
    pub fn column(&self, j: usize) -> Vec<LocalPolynomial> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    /// All `s x s` minors, in lexicographic order of (row set, column set).
    pub fn minors(&self, s: usize) -> Result<Vec<LocalPolynomial>> {
        let max = self.rows().min(self.cols());
        if s == 0 || s > max {
            return Err(Error::InvalidMinorSize { size: s, max });
        }
        let mut memo: HashMap<(u64, u64), LocalPolynomial> = HashMap::new();
        let mut out = Vec::new();
        for rows in combinations(self.rows(), s) {
            for cols in combinations(self.cols(), s) {
                out.push(self.det(mask(&rows), mask(&cols), &mut memo));
            }
        }
        Ok(out)
    }

    /// Cofactor expansion along the first remaining row, memoized on (rows, cols).
    fn det(&self, rows: u64, cols: u64, memo: &mut HashMap<(u64, u64), LocalPolynomial>) -> LocalPolynomial {
        if rows == 0 {
            return LocalPolynomial::one(&self.ctx);
        }
        if let Some(p) = memo.get(&(rows, cols)) {
            return p.clone();
        }
        let r = rows.trailing_zeros() as usize;
        let rest = rows & !(1 << r);
        let mut acc = LocalPolynomial::zero(&self.ctx);
        for (k, c) in bits(cols).enumerate() {
            let a = &self.entries[r][c];
            if a.is_zero() {
                continue;
            }
            let sub = self.det(rest, cols & !(1 << c), memo);
            let term = a.mul(&sub).expect("same context");
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) }.expect("same context");
        }
        memo.insert((rows, cols), acc.clone());
        acc
    }
}

fn mask(indices: &[usize]) -> u64 {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

fn bits(m: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| m & (1 << i) != 0)
}

/// `s`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(s);
    fn go(start: usize, n: usize, s: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == s {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, s, current, out);
            current.pop();
        }
    }
    go(0, n, s, &mut current, &mut out);
    out
}

/// Ideal of `s x s` minors of the Jacobian of `polys`, zero minors and repeats dropped.
pub fn minor_ideal(ctx: &Arc<RingContext>, polys: &[LocalPolynomial], s: usize) -> Result<IdealBasis> {
    let mut gens: Vec<LocalPolynomial> = Vec::new();
    for m in JacobianMatrix::new(ctx, polys)?.minors(s)? {
        if !m.is_zero() && !gens.contains(&m) {
            gens.push(m);
        }
    }
    IdealBasis::new(ctx, gens)
}
