//! Standard bases of ideals and submodules of free modules over the local ring.
//!
//! Every length in the crate is computed here: a standard basis with respect
//! to the local degree order has a leading structure whose standard monomials
//! count the length of the quotient of the *local* ring.

mod mora;
mod staircase;
mod vector;

use std::sync::{Arc, OnceLock};

pub use mora::DEFAULT_STEP_BUDGET;
pub use staircase::{Length, MonomialStaircase};

use crate::error::{Error, Result};
use crate::poly::{same_context, LocalPolynomial, RingContext};
use vector::{Term, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub step_budget: u64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }
}

fn poly_to_vector(p: &LocalPolynomial, pos: u32) -> Vector {
    Vector::from_terms_sorted(
        p.terms()
            .iter()
            .map(|(e, c)| Term {
                pos,
                exps: e.clone(),
                coeff: c.clone(),
            })
            .collect(),
    )
}

fn vector_to_poly(ctx: &Arc<RingContext>, v: &Vector) -> LocalPolynomial {
    LocalPolynomial::from_sorted_unchecked(ctx, v.terms.iter().map(|t| (t.exps.clone(), t.coeff.clone())).collect())
}

/// An element of `A^rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModuleElement {
    components: Vec<LocalPolynomial>,
}

impl FreeModuleElement {
    pub fn new(components: Vec<LocalPolynomial>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidRing("free module elements need rank >= 1".into()));
        };
        if components.iter().any(|c| !same_context(c.context(), first.context())) {
            return Err(Error::ContextMismatch);
        }
        Ok(FreeModuleElement { components })
    }

    /// `p * e_pos` in `A^rank`.
    pub fn basis_multiple(p: &LocalPolynomial, pos: usize, rank: usize) -> Self {
        let zero = LocalPolynomial::zero(p.context());
        let components = (0..rank)
            .map(|i| if i == pos { p.clone() } else { zero.clone() })
            .collect();
        FreeModuleElement { components }
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[LocalPolynomial] {
        &self.components
    }

    pub fn context(&self) -> &Arc<RingContext> {
        self.components[0].context()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(LocalPolynomial::is_zero)
    }

    fn to_vector(&self) -> Vector {
        let mut terms: Vec<Term> = Vec::new();
        for (pos, c) in self.components.iter().enumerate() {
            terms.extend(poly_to_vector(c, pos as u32).terms);
        }
        Vector::from_terms_sorted(terms)
    }

    fn from_vector(ctx: &Arc<RingContext>, rank: usize, v: &Vector) -> Self {
        let mut buckets: Vec<Vec<Term>> = vec![Vec::new(); rank];
        for t in &v.terms {
            buckets[t.pos as usize].push(t.clone());
        }
        let components = buckets
            .into_iter()
            .map(|terms| vector_to_poly(ctx, &Vector::from_terms_sorted(terms)))
            .collect();
        FreeModuleElement { components }
    }
}

/// A computed standard basis together with its leading structure.
#[derive(Clone, Debug)]
pub struct StandardBasis {
    ctx: Arc<RingContext>,
    rank: usize,
    elements: Vec<Vector>,
    staircase: MonomialStaircase,
}

impl StandardBasis {
    fn build(ctx: &Arc<RingContext>, rank: usize, elements: Vec<Vector>, corner: Option<u32>) -> Self {
        let staircase = MonomialStaircase::new(
            ctx.num_vars(),
            rank,
            elements.iter().map(|v| (v.lead().pos as usize, v.lead().exps.clone())),
            corner,
        );
        StandardBasis {
            ctx: ctx.clone(),
            rank,
            elements,
            staircase,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements of a rank-one basis as polynomials.
    pub fn polynomials(&self) -> Vec<LocalPolynomial> {
        self.elements.iter().map(|v| vector_to_poly(&self.ctx, v)).collect()
    }

    pub fn module_elements(&self) -> Vec<FreeModuleElement> {
        self.elements
            .iter()
            .map(|v| FreeModuleElement::from_vector(&self.ctx, self.rank, v))
            .collect()
    }

    pub fn leading_structure(&self) -> &MonomialStaircase {
        &self.staircase
    }

    pub fn colength(&self) -> Length {
        self.staircase.colength()
    }

    /// Checks that every s-vector reduces to zero, i.e. the basis is standard.
    pub fn verify(&self, opts: &EngineOptions) -> Result<bool> {
        for s in mora::all_s_vectors(&self.elements) {
            let r = mora::reduce(s, &self.elements, self.staircase.corner(), opts.step_budget)?;
            if !r.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// An ideal of the local ring given by generators.
///
/// An optional `corner` records the promise `m^corner ⊆ I`; computations then
/// work modulo `m^corner`.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    ctx: Arc<RingContext>,
    generators: Vec<LocalPolynomial>,
    corner: Option<u32>,
    cache: OnceLock<StandardBasis>,
}

impl IdealBasis {
    pub fn new(ctx: &Arc<RingContext>, generators: Vec<LocalPolynomial>) -> Result<Self> {
        if generators.iter().any(|g| !same_context(g.context(), ctx)) {
            return Err(Error::ContextMismatch);
        }
        Ok(IdealBasis {
            ctx: ctx.clone(),
            generators,
            corner: None,
            cache: OnceLock::new(),
        })
    }

    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        IdealBasis {
            ctx: ctx.clone(),
            generators: Vec::new(),
            corner: None,
            cache: OnceLock::new(),
        }
    }

    pub fn unit(ctx: &Arc<RingContext>) -> Self {
        Self::new(ctx, vec![LocalPolynomial::one(ctx)]).expect("same context")
    }

    /// The maximal ideal `m = <x_1, ..., x_n>`.
    pub fn maximal(ctx: &Arc<RingContext>) -> Self {
        let gens = (0..ctx.num_vars())
            .map(|i| LocalPolynomial::variable(ctx, i).unwrap())
            .collect();
        Self::new(ctx, gens).expect("same context")
    }

    /// `I + m^n`, computed modulo `m^n`.
    pub fn plus_maximal_power(&self, n: u32) -> Self {
        let corner = Some(self.corner.map_or(n, |c| c.min(n)));
        IdealBasis {
            ctx: self.ctx.clone(),
            generators: self.generators.clone(),
            corner,
            cache: OnceLock::new(),
        }
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[LocalPolynomial] {
        &self.generators
    }

    pub fn corner(&self) -> Option<u32> {
        self.corner
    }

    pub fn standard_basis(&self) -> Result<&StandardBasis> {
        self.standard_basis_with(&EngineOptions::default())
    }

    /// Computes (once) and caches the standard basis.
    pub fn standard_basis_with(&self, opts: &EngineOptions) -> Result<&StandardBasis> {
        if let Some(sb) = self.cache.get() {
            return Ok(sb);
        }
        let gens = self.generators.iter().map(|g| poly_to_vector(g, 0)).collect();
        let elements = mora::standard_basis(gens, 1, self.corner, opts.step_budget)?;
        let sb = StandardBasis::build(&self.ctx, 1, elements, self.corner);
        Ok(self.cache.get_or_init(|| sb))
    }

    pub fn leading_structure(&self) -> Result<&MonomialStaircase> {
        Ok(self.standard_basis()?.leading_structure())
    }

    /// `len(A / I)`.
    pub fn colength(&self) -> Result<Length> {
        self.colength_with(&EngineOptions::default())
    }

    pub fn colength_with(&self, opts: &EngineOptions) -> Result<Length> {
        Ok(self.standard_basis_with(opts)?.colength())
    }

    /// Krull dimension of `A / I`; `None` when `I` is the unit ideal.
    pub fn krull_dimension(&self) -> Result<Option<usize>> {
        self.krull_dimension_with(&EngineOptions::default())
    }

    pub fn krull_dimension_with(&self, opts: &EngineOptions) -> Result<Option<usize>> {
        Ok(self.standard_basis_with(opts)?.leading_structure().dimension())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.krull_dimension()?.is_none())
    }

    /// Weak normal form against the standard basis; zero iff `p` lies in the ideal.
    pub fn normal_form(&self, p: &LocalPolynomial) -> Result<LocalPolynomial> {
        self.normal_form_with(p, &EngineOptions::default())
    }

    pub fn normal_form_with(&self, p: &LocalPolynomial, opts: &EngineOptions) -> Result<LocalPolynomial> {
        if !same_context(p.context(), &self.ctx) {
            return Err(Error::ContextMismatch);
        }
        let sb = self.standard_basis_with(opts)?;
        let r = mora::reduce(poly_to_vector(p, 0), &sb.elements, self.corner, opts.step_budget)?;
        Ok(vector_to_poly(&self.ctx, &r))
    }

    pub fn contains(&self, p: &LocalPolynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn sum(&self, other: &IdealBasis) -> Result<IdealBasis> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        let mut out = IdealBasis::new(&self.ctx, gens)?;
        out.corner = min_corner(self.corner, other.corner);
        Ok(out)
    }

    pub fn product(&self, other: &IdealBasis) -> Result<IdealBasis> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                let p = a.mul(b)?;
                if !p.is_zero() && !gens.contains(&p) {
                    gens.push(p);
                }
            }
        }
        IdealBasis::new(&self.ctx, gens)
    }

    /// `I^t`, with `I^0` the unit ideal.
    pub fn power(&self, t: u32) -> IdealBasis {
        let mut acc = IdealBasis::unit(&self.ctx);
        for _ in 0..t {
            acc = acc.product(self).expect("same context");
        }
        acc
    }
}

fn min_corner(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    }
}

/// A submodule of `A^rank`, ordered position-over-term.
#[derive(Clone, Debug)]
pub struct SubmoduleBasis {
    ctx: Arc<RingContext>,
    rank: usize,
    generators: Vec<FreeModuleElement>,
    corner: Option<u32>,
    cache: OnceLock<StandardBasis>,
}

impl SubmoduleBasis {
    pub fn new(ctx: &Arc<RingContext>, rank: usize, generators: Vec<FreeModuleElement>) -> Result<Self> {
        for g in &generators {
            if g.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: g.rank(),
                });
            }
            if !same_context(g.context(), ctx) {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(SubmoduleBasis {
            ctx: ctx.clone(),
            rank,
            generators,
            corner: None,
            cache: OnceLock::new(),
        })
    }

    /// `M + m^n A^rank`, computed modulo `m^n`.
    pub fn plus_maximal_power(&self, n: u32) -> Self {
        let corner = Some(self.corner.map_or(n, |c| c.min(n)));
        SubmoduleBasis {
            corner,
            cache: OnceLock::new(),
            ..self.clone()
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[FreeModuleElement] {
        &self.generators
    }

    pub fn standard_basis(&self) -> Result<&StandardBasis> {
        self.standard_basis_with(&EngineOptions::default())
    }

    pub fn standard_basis_with(&self, opts: &EngineOptions) -> Result<&StandardBasis> {
        if let Some(sb) = self.cache.get() {
            return Ok(sb);
        }
        let gens = self.generators.iter().map(FreeModuleElement::to_vector).collect();
        let elements = mora::standard_basis(gens, self.rank, self.corner, opts.step_budget)?;
        let sb = StandardBasis::build(&self.ctx, self.rank, elements, self.corner);
        Ok(self.cache.get_or_init(|| sb))
    }

    /// `len(A^rank / M)`.
    pub fn colength(&self) -> Result<Length> {
        self.colength_with(&EngineOptions::default())
    }

    pub fn colength_with(&self, opts: &EngineOptions) -> Result<Length> {
        Ok(self.standard_basis_with(opts)?.colength())
    }

    pub fn normal_form(&self, v: &FreeModuleElement) -> Result<FreeModuleElement> {
        if v.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: v.rank(),
            });
        }
        let opts = EngineOptions::default();
        let sb = self.standard_basis_with(&opts)?;
        let r = mora::reduce(v.to_vector(), &sb.elements, self.corner, opts.step_budget)?;
        Ok(FreeModuleElement::from_vector(&self.ctx, self.rank, &r))
    }
}

/// Mora reduction of `p` against the given generators as they stand.
///
/// When the generators form a standard basis the result is zero exactly when
/// `p` lies in the ideal they generate in the local ring.
pub fn mora_normal_form(p: &LocalPolynomial, basis: &[LocalPolynomial]) -> Result<LocalPolynomial> {
    mora_normal_form_with(p, basis, &EngineOptions::default())
}

pub fn mora_normal_form_with(
    p: &LocalPolynomial,
    basis: &[LocalPolynomial],
    opts: &EngineOptions,
) -> Result<LocalPolynomial> {
    if basis.iter().any(|b| !same_context(b.context(), p.context())) {
        return Err(Error::ContextMismatch);
    }
    let gens: Vec<Vector> = basis.iter().map(|b| poly_to_vector(b, 0)).collect();
    let r = mora::reduce(poly_to_vector(p, 0), &gens, None, opts.step_budget)?;
    Ok(vector_to_poly(p.context(), &r))
}
