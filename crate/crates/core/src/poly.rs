//! Sparse polynomials read as germs at the origin of affine space.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::monomial::{compare_neg_degrevlex, ExponentVector, LocalOrder};

/// The ambient local ring: variables, coefficient field and monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    var_names: Vec<String>,
    field: Field,
    order: LocalOrder,
}

impl RingContext {
    pub fn new<S: Into<String>>(var_names: impl IntoIterator<Item = S>, field: Field) -> Result<Arc<Self>> {
        let var_names: Vec<String> = var_names.into_iter().map(Into::into).collect();
        if var_names.is_empty() {
            return Err(Error::InvalidRing("at least one variable is required".into()));
        }
        for (i, v) in var_names.iter().enumerate() {
            if var_names[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        if let Field::Prime(p) = field {
            Field::from_characteristic(p)?;
        }
        Ok(Arc::new(RingContext {
            var_names,
            field,
            order: LocalOrder::NegDegRevLex,
        }))
    }

    /// `x_1, ..., x_n` over the rationals.
    pub fn with_vars(num_vars: usize) -> Arc<Self> {
        Self::new((1..=num_vars).map(|i| format!("x{i}")), Field::Rational).expect("valid ring")
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> LocalOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    /// The same variables over another field.
    pub fn with_field(&self, field: Field) -> Result<Arc<Self>> {
        RingContext::new(self.var_names.clone(), field)
    }
}

pub(crate) fn same_context(a: &Arc<RingContext>, b: &Arc<RingContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A polynomial with terms kept sorted by the local order, largest first.
#[derive(Clone)]
pub struct LocalPolynomial {
    ctx: Arc<RingContext>,
    terms: Vec<(ExponentVector, Scalar)>,
}

impl PartialEq for LocalPolynomial {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for LocalPolynomial {}

impl LocalPolynomial {
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        LocalPolynomial {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Arc<RingContext>, c: Scalar) -> Self {
        Self::from_terms(ctx, [(ExponentVector::one(ctx.num_vars()), c)])
    }

    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Self::constant(ctx, ctx.field().one())
    }

    pub fn variable(ctx: &Arc<RingContext>, index: usize) -> Result<Self> {
        if index >= ctx.num_vars() {
            return Err(Error::VariableOutOfRange {
                index,
                num_vars: ctx.num_vars(),
            });
        }
        Ok(Self::monomial(
            ctx,
            ExponentVector::variable(ctx.num_vars(), index),
            ctx.field().one(),
        ))
    }

    pub fn monomial(ctx: &Arc<RingContext>, exps: ExponentVector, c: Scalar) -> Self {
        Self::from_terms(ctx, [(exps, c)])
    }

    /// Collects terms, merging duplicates and dropping zero coefficients.
    pub fn from_terms(ctx: &Arc<RingContext>, terms: impl IntoIterator<Item = (ExponentVector, Scalar)>) -> Self {
        let mut acc: HashMap<ExponentVector, Scalar> = HashMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), ctx.num_vars(), "exponent vector length");
            match acc.get_mut(&e) {
                Some(v) => *v = v.add(&c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        Self::from_sorted_unchecked(ctx, sort_terms(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()))
    }

    pub(crate) fn from_sorted_unchecked(ctx: &Arc<RingContext>, terms: Vec<(ExponentVector, Scalar)>) -> Self {
        LocalPolynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &[(ExponentVector, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The largest term under the local order, i.e. a term of lowest degree.
    pub fn leading_term(&self) -> Option<&(ExponentVector, Scalar)> {
        self.terms.first()
    }

    /// Largest total degree of a term; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.degree()).max().unwrap_or(0)
    }

    /// Smallest total degree of a term (the m-adic order); `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.first().map(|(e, _)| e.degree())
    }

    pub fn constant_term(&self) -> Scalar {
        match self.terms.first() {
            Some((e, c)) if e.is_one() => c.clone(),
            _ => self.ctx.field().zero(),
        }
    }

    /// True when every term is a single monomial (at most one term).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() <= 1
    }

    fn check(&self, other: &LocalPolynomial) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &LocalPolynomial) -> Result<LocalPolynomial> {
        self.check(other)?;
        Ok(Self::from_sorted_unchecked(
            &self.ctx,
            merge_terms(&self.terms, &other.terms, |c| c.clone()),
        ))
    }

    pub fn sub(&self, other: &LocalPolynomial) -> Result<LocalPolynomial> {
        self.check(other)?;
        Ok(Self::from_sorted_unchecked(
            &self.ctx,
            merge_terms(&self.terms, &other.terms, Scalar::neg),
        ))
    }

    pub fn neg(&self) -> LocalPolynomial {
        Self::from_sorted_unchecked(
            &self.ctx,
            self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        )
    }

    pub fn scalar_mul(&self, c: &Scalar) -> LocalPolynomial {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        Self::from_sorted_unchecked(
            &self.ctx,
            self.terms.iter().map(|(e, a)| (e.clone(), a.mul(c))).collect(),
        )
    }

    /// Multiplies by `c * x^shift`; the order is multiplicative so sorting is preserved.
    pub fn mul_term(&self, shift: &ExponentVector, c: &Scalar) -> LocalPolynomial {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        Self::from_sorted_unchecked(
            &self.ctx,
            self.terms.iter().map(|(e, a)| (e.mul(shift), a.mul(c))).collect(),
        )
    }

    pub fn mul(&self, other: &LocalPolynomial) -> Result<LocalPolynomial> {
        self.check(other)?;
        let mut acc: HashMap<ExponentVector, Scalar> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.mul(e2);
                let c = c1.mul(c2);
                match acc.get_mut(&e) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Ok(Self::from_sorted_unchecked(
            &self.ctx,
            sort_terms(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()),
        ))
    }

    pub fn pow(&self, n: u32) -> LocalPolynomial {
        let mut result = Self::one(&self.ctx);
        for _ in 0..n {
            result = result.mul(self).expect("same context");
        }
        result
    }

    /// Formal partial derivative with respect to the variable at `index` (zero-based).
    pub fn partial_derivative(&self, index: usize) -> Result<LocalPolynomial> {
        if index >= self.ctx.num_vars() {
            return Err(Error::VariableOutOfRange {
                index,
                num_vars: self.ctx.num_vars(),
            });
        }
        let field = self.ctx.field();
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let power = e.get(index) as i64;
                e.lower(index).map(|lowered| (lowered, c.mul(&field.from_i64(power))))
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        // surviving terms are all divisible by x_i, so dividing keeps them sorted
        Ok(Self::from_sorted_unchecked(&self.ctx, terms))
    }

    /// Image in `A / m^level`: drops every term of total degree `>= level`.
    pub fn truncate(&self, level: u32) -> LocalPolynomial {
        Self::from_sorted_unchecked(
            &self.ctx,
            self.terms.iter().filter(|(e, _)| e.degree() < level).cloned().collect(),
        )
    }

    /// Re-reads the same integer/rational coefficients in another context.
    pub fn change_field(&self, ctx: &Arc<RingContext>) -> Result<LocalPolynomial> {
        if ctx.num_vars() != self.ctx.num_vars() {
            return Err(Error::ContextMismatch);
        }
        let field = ctx.field();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let c = match c {
                Scalar::Rational(q) => field.from_ratio(q.numer(), q.denom())?,
                Scalar::Modular { value, .. } => field.from_i64(*value as i64),
            };
            terms.push((e.clone(), c));
        }
        Ok(Self::from_terms(ctx, terms))
    }
}

pub(crate) fn sort_terms(mut terms: Vec<(ExponentVector, Scalar)>) -> Vec<(ExponentVector, Scalar)> {
    terms.sort_by(|a, b| compare_neg_degrevlex(&b.0, &a.0));
    terms
}

fn merge_terms(
    a: &[(ExponentVector, Scalar)],
    b: &[(ExponentVector, Scalar)],
    map_b: impl Fn(&Scalar) -> Scalar,
) -> Vec<(ExponentVector, Scalar)> {
    use std::cmp::Ordering::*;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match compare_neg_degrevlex(&a[i].0, &b[j].0) {
            Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Less => {
                out.push((b[j].0.clone(), map_b(&b[j].1)));
                j += 1;
            }
            Equal => {
                let c = a[i].1.add(&map_b(&b[j].1));
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(e, c)| (e.clone(), map_b(c))));
    out
}

impl fmt::Debug for LocalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints in the corpus expression syntax, so the output re-parses to the same polynomial.
impl fmt::Display for LocalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { c.neg() } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || e.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &p) in e.exponents().iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(self.ctx.var_names()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ctx.var_names()[i], p)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
