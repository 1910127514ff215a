//! Germs `f = (f_1, ..., f_k)` and their Tjurina, Milnor and critical-locus invariants.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{EngineOptions, FreeModuleElement, IdealBasis, Length, SubmoduleBasis};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::poly::{same_context, LocalPolynomial, RingContext};

use super::minors::minor_ideal;
use super::samuel::{multiplicity, MultiplicityOptions, MultiplicityResult};

/// Coefficients of generic combinations are drawn from `[-COEFF_RANGE, COEFF_RANGE]`.
pub const COEFF_RANGE: i64 = 997;
/// Independent draws used for the generic colength.
pub const GENERIC_DRAWS: usize = 3;
/// Re-draws allowed before the recursion for the Milnor number gives up.
pub const MAX_GENERICITY_RETRIES: usize = 5;

/// Options shared by all invariant computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvariantOptions {
    pub engine: EngineOptions,
    pub window: usize,
    pub max_t: usize,
    pub seed: u64,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions {
            engine: EngineOptions::default(),
            window: 3,
            max_t: 30,
            seed: 0,
        }
    }
}

impl InvariantOptions {
    pub fn multiplicity(&self) -> MultiplicityOptions {
        MultiplicityOptions {
            window: self.window,
            max_t: self.max_t,
            engine: self.engine,
        }
    }
}

/// A germ of a map `(k^{n+k}, 0) -> (k^k, 0)` with fibre `X = f^{-1}(0)`.
#[derive(Clone, Debug)]
pub struct SingularityInput {
    ctx: Arc<RingContext>,
    polys: Vec<LocalPolynomial>,
}

impl SingularityInput {
    pub fn new(ctx: &Arc<RingContext>, polys: Vec<LocalPolynomial>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::InvalidGerm("at least one equation is required".into()));
        }
        if polys.len() > ctx.num_vars() {
            return Err(Error::InvalidGerm(format!(
                "{} equations in {} variables",
                polys.len(),
                ctx.num_vars()
            )));
        }
        for p in &polys {
            if !same_context(p.context(), ctx) {
                return Err(Error::ContextMismatch);
            }
            if !p.constant_term().is_zero() {
                return Err(Error::InvalidGerm(format!("`{p}` does not vanish at the origin")));
            }
        }
        Ok(SingularityInput {
            ctx: ctx.clone(),
            polys,
        })
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn polys(&self) -> &[LocalPolynomial] {
        &self.polys
    }

    /// Number of equations.
    pub fn k(&self) -> usize {
        self.polys.len()
    }

    /// Expected dimension of the fibre.
    pub fn n(&self) -> usize {
        self.ctx.num_vars() - self.polys.len()
    }

    pub fn num_vars(&self) -> usize {
        self.ctx.num_vars()
    }

    /// The same germ over another ground field.
    pub fn change_field(&self, field: crate::field::Field) -> Result<Self> {
        let ctx = self.ctx.with_field(field)?;
        let polys = self
            .polys
            .iter()
            .map(|p| p.change_field(&ctx))
            .collect::<Result<Vec<_>>>()?;
        SingularityInput::new(&ctx, polys)
    }

    /// The germ with every equation truncated below degree `level`.
    pub fn truncate(&self, level: u32) -> Self {
        SingularityInput {
            ctx: self.ctx.clone(),
            polys: self.polys.iter().map(|p| p.truncate(level)).collect(),
        }
    }

    pub fn ideal(&self) -> IdealBasis {
        IdealBasis::new(&self.ctx, self.polys.clone()).expect("same context")
    }

    /// Ideal of `s x s` minors of the Jacobian matrix.
    pub fn jacobian_minors(&self, s: usize) -> Result<IdealBasis> {
        minor_ideal(&self.ctx, &self.polys, s)
    }

    /// `I(X) + J_{N - alpha}(f)` with `N` the number of variables; `alpha = n` gives the singular locus.
    pub fn sigma_scheme(&self, alpha: usize) -> Result<IdealBasis> {
        let (min, max) = (self.n(), self.num_vars() - 1);
        if alpha < min || alpha > max {
            return Err(Error::InvalidAlpha { alpha, min, max });
        }
        self.ideal().sum(&self.jacobian_minors(self.num_vars() - alpha)?)
    }

    /// The critical locus, cut out by the maximal minors.
    pub fn critical_locus(&self) -> Result<IdealBasis> {
        self.jacobian_minors(self.k())
    }

    pub fn is_regular_sequence(&self) -> Result<bool> {
        self.is_regular_sequence_with(&EngineOptions::default())
    }

    pub fn is_regular_sequence_with(&self, opts: &EngineOptions) -> Result<bool> {
        Ok(self.ideal().krull_dimension_with(opts)? == Some(self.n()))
    }

    pub fn is_icis(&self) -> Result<bool> {
        self.is_icis_with(&EngineOptions::default())
    }

    /// A regular sequence whose singular locus is at most the origin; smooth germs count.
    pub fn is_icis_with(&self, opts: &EngineOptions) -> Result<bool> {
        if !self.is_regular_sequence_with(opts)? {
            return Ok(false);
        }
        Ok(matches!(
            self.sigma_scheme(self.n())?.krull_dimension_with(opts)?,
            None | Some(0)
        ))
    }

    /// The submodule of `A^k` spanned by the Jacobian columns and all `f_i e_l`.
    pub fn tjurina_module(&self) -> SubmoduleBasis {
        let k = self.k();
        let mut gens = Vec::new();
        for j in 0..self.num_vars() {
            let column = self
                .polys
                .iter()
                .map(|f| f.partial_derivative(j).expect("index in range"))
                .collect();
            gens.push(FreeModuleElement::new(column).expect("same context"));
        }
        for f in &self.polys {
            for l in 0..k {
                gens.push(FreeModuleElement::basis_multiple(f, l, k));
            }
        }
        SubmoduleBasis::new(&self.ctx, k, gens).expect("ranks agree")
    }

    pub fn tjurina(&self) -> Result<Length> {
        self.tjurina_with(&EngineOptions::default())
    }

    pub fn tjurina_with(&self, opts: &EngineOptions) -> Result<Length> {
        self.tjurina_module().colength_with(opts)
    }

    fn require_icis(&self, opts: &EngineOptions) -> Result<()> {
        if self.is_icis_with(opts)? {
            Ok(())
        } else {
            Err(Error::NotIcis)
        }
    }

    /// `len(A / (J_k(f) + <g_1..g_{k-1}>))` for generic combinations `g`.
    pub fn milnor_bound(&self, opts: &InvariantOptions) -> Result<MilnorBound> {
        self.require_icis(&opts.engine)?;
        let jk = self.critical_locus()?;
        let k = self.k();
        if k == 1 {
            let v = jk.colength_with(&opts.engine)?;
            return match v {
                Length::Finite(value) => Ok(MilnorBound {
                    value,
                    draws: vec![v],
                    disagreement: false,
                }),
                Length::Infinite => Err(Error::DegenerateDraws),
            };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut draws = Vec::with_capacity(GENERIC_DRAWS);
        for _ in 0..GENERIC_DRAWS {
            let coeffs = random_matrix(&mut rng, k - 1, k);
            let g = self.combine(&coeffs);
            draws.push(jk.sum(&IdealBasis::new(&self.ctx, g)?)?.colength_with(&opts.engine)?);
        }
        let value = draws
            .iter()
            .filter_map(Length::finite)
            .min()
            .ok_or(Error::DegenerateDraws)?;
        let disagreement = draws.iter().any(|d| *d != draws[0]);
        Ok(MilnorBound {
            value,
            draws,
            disagreement,
        })
    }

    /// `sum_j c_{ij} f_j` for every row `i` of `coeffs`.
    fn combine(&self, coeffs: &[Vec<i64>]) -> Vec<LocalPolynomial> {
        let field = self.ctx.field();
        coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.polys)
                    .fold(LocalPolynomial::zero(&self.ctx), |acc, (&c, f)| {
                        acc.add(&f.scalar_mul(&field.from_i64(c))).expect("same context")
                    })
            })
            .collect()
    }

    /// Milnor number by the Lê–Greuel recursion
    /// `mu(g_1..g_j) + mu(g_1..g_{j-1}) = len(A / (<g_1..g_{j-1}> + J_j(g_1..g_j)))`
    /// applied to a generic invertible recombination `g = C f`.
    pub fn milnor_exact(&self, opts: &InvariantOptions) -> Result<u64> {
        self.require_icis(&opts.engine)?;
        if self.k() == 1 {
            return self
                .critical_locus()?
                .colength_with(&opts.engine)?
                .finite()
                .ok_or(Error::NotIcis);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(1);
        let k = self.k();
        for _ in 0..MAX_GENERICITY_RETRIES {
            let coeffs = random_matrix(&mut rng, k, k);
            if self.is_singular_matrix(&coeffs) {
                continue;
            }
            let g = self.combine(&coeffs);
            if let Some(mu) = lê_greuel(&self.ctx, &g, &opts.engine)? {
                return Ok(mu);
            }
        }
        Err(Error::GenericityFailure {
            attempts: MAX_GENERICITY_RETRIES,
        })
    }

    fn is_singular_matrix(&self, m: &[Vec<i64>]) -> bool {
        let field = self.ctx.field();
        let mut rows: Vec<Vec<Scalar>> = m
            .iter()
            .map(|r| r.iter().map(|&c| field.from_i64(c)).collect())
            .collect();
        let n = rows.len();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
                return true;
            };
            rows.swap(col, p);
            let inv = rows[col][col].inv();
            let (top, rest) = rows.split_at_mut(col + 1);
            let pivot = &top[col];
            for row in rest {
                let factor = row[col].mul(&inv);
                for (c, p) in pivot.iter().enumerate().skip(col) {
                    row[c] = row[c].sub(&factor.mul(p));
                }
            }
        }
        false
    }

    /// `(e_samuel, e_generic)`: the multiplicity of the critical locus with
    /// respect to `<f>`, once from its Samuel function and once as a generic colength.
    pub fn critical_multiplicity(&self, opts: &InvariantOptions) -> Result<CriticalMultiplicity> {
        self.require_icis(&opts.engine)?;
        let jk = self.critical_locus()?;
        if jk.is_unit()? {
            return Ok(CriticalMultiplicity {
                e_samuel: 0,
                e_generic: 0,
                samuel: None,
                draws: Vec::new(),
                disagreement: false,
            });
        }
        let samuel = multiplicity(&jk, &self.ideal(), &opts.multiplicity())?;
        let bound = self.milnor_bound(opts)?;
        Ok(CriticalMultiplicity {
            e_samuel: samuel.e,
            e_generic: bound.value,
            samuel: Some(samuel),
            draws: bound.draws,
            disagreement: bound.disagreement,
        })
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-COEFF_RANGE..=COEFF_RANGE)).collect())
        .collect()
}

/// The recursion on prefixes; `None` when some prefix is not an ICIS or a difference goes negative.
fn lê_greuel(ctx: &Arc<RingContext>, g: &[LocalPolynomial], opts: &EngineOptions) -> Result<Option<u64>> {
    let mut prev: u64 = 0;
    for j in 1..=g.len() {
        let prefix = SingularityInput::new(ctx, g[..j].to_vec())?;
        if !prefix.is_icis_with(opts)? {
            return Ok(None);
        }
        let ideal = IdealBasis::new(ctx, g[..j - 1].to_vec())?.sum(&prefix.critical_locus()?)?;
        let Length::Finite(total) = ideal.colength_with(opts)? else {
            return Ok(None);
        };
        let Some(mu) = total.checked_sub(prev) else {
            return Ok(None);
        };
        prev = mu;
    }
    Ok(Some(prev))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorBound {
    /// Minimum over the draws; the generic value by semicontinuity.
    pub value: u64,
    pub draws: Vec<Length>,
    pub disagreement: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalMultiplicity {
    pub e_samuel: u64,
    pub e_generic: u64,
    pub samuel: Option<MultiplicityResult>,
    pub draws: Vec<Length>,
    pub disagreement: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn xyz() -> (Arc<RingContext>, LocalPolynomial, LocalPolynomial, LocalPolynomial) {
        let r = RingContext::new(["x", "y", "z"], Field::Rational).unwrap();
        let v: Vec<_> = (0..3).map(|i| LocalPolynomial::variable(&r, i).unwrap()).collect();
        (r, v[0].clone(), v[1].clone(), v[2].clone())
    }

    fn xy() -> (Arc<RingContext>, LocalPolynomial, LocalPolynomial) {
        let r = RingContext::new(["x", "y"], Field::Rational).unwrap();
        let x = LocalPolynomial::variable(&r, 0).unwrap();
        let y = LocalPolynomial::variable(&r, 1).unwrap();
        (r, x, y)
    }

    #[test]
    fn rejects_bad_germs() {
        let (r, x, y) = xy();
        let one = LocalPolynomial::one(&r);
        assert!(SingularityInput::new(&r, vec![x.add(&one).unwrap()]).is_err());
        assert!(SingularityInput::new(&r, vec![x.clone(), y.clone(), x.mul(&y).unwrap()]).is_err());
        assert!(SingularityInput::new(&r, vec![]).is_err());
    }

    #[test]
    fn cusp_invariants() {
        let (r, x, y) = xy();
        let s = SingularityInput::new(&r, vec![x.pow(3).add(&y.pow(2)).unwrap()]).unwrap();
        let opts = InvariantOptions::default();
        assert_eq!((s.n(), s.k()), (1, 1));
        assert!(s.is_icis().unwrap());
        assert_eq!(s.tjurina().unwrap(), Length::Finite(2));
        assert_eq!(s.sigma_scheme(1).unwrap().colength().unwrap(), Length::Finite(2));
        assert_eq!(s.milnor_bound(&opts).unwrap().value, 2);
        assert_eq!(s.milnor_exact(&opts).unwrap(), 2);
        let e = s.critical_multiplicity(&opts).unwrap();
        assert_eq!((e.e_samuel, e.e_generic), (2, 2));
        assert!(s.sigma_scheme(0).is_err());
        assert!(s.sigma_scheme(2).is_err());
    }

    #[test]
    fn non_isolated_curve() {
        let (r, x, y) = xy();
        let s = SingularityInput::new(&r, vec![x.pow(2).mul(&y).unwrap()]).unwrap();
        assert_eq!(s.sigma_scheme(1).unwrap().krull_dimension().unwrap(), Some(1));
        assert!(!s.is_icis().unwrap());
        assert_eq!(
            s.milnor_exact(&InvariantOptions::default()).unwrap_err(),
            Error::NotIcis
        );
        assert_eq!(s.tjurina().unwrap(), Length::Infinite);
    }

    #[test]
    fn regular_sequences() {
        let (r, x, y) = xy();
        assert!(SingularityInput::new(&r, vec![x.clone(), y.clone()])
            .unwrap()
            .is_regular_sequence()
            .unwrap());
        assert!(!SingularityInput::new(&r, vec![x.clone(), x.clone()])
            .unwrap()
            .is_regular_sequence()
            .unwrap());
        let (r3, x3, y3, z3) = xyz();
        let s = SingularityInput::new(&r3, vec![x3.mul(&y3).unwrap(), x3.mul(&z3).unwrap()]).unwrap();
        assert!(!s.is_regular_sequence().unwrap());
    }

    #[test]
    fn smooth_germ() {
        let (r, x, _) = xy();
        let s = SingularityInput::new(&r, vec![x]).unwrap();
        let opts = InvariantOptions::default();
        assert!(s.is_icis().unwrap());
        assert_eq!(s.tjurina().unwrap(), Length::Finite(0));
        assert_eq!(s.milnor_exact(&opts).unwrap(), 0);
        let e = s.critical_multiplicity(&opts).unwrap();
        assert_eq!((e.e_samuel, e.e_generic), (0, 0));
    }

    #[test]
    fn node_tjurina() {
        let (r, x, y) = xy();
        let s = SingularityInput::new(&r, vec![x.pow(2).add(&y.pow(2)).unwrap()]).unwrap();
        assert_eq!(s.tjurina().unwrap(), Length::Finite(1));
        assert_eq!(s.milnor_bound(&InvariantOptions::default()).unwrap().value, 1);
    }

    #[test]
    fn space_curve_paths_agree() {
        let (r, x, y, z) = xyz();
        let q = x.pow(2).add(&y.pow(2)).unwrap().add(&z.pow(2)).unwrap();
        let s = SingularityInput::new(&r, vec![q, x.mul(&y).unwrap()]).unwrap();
        let opts = InvariantOptions::default();
        assert!(s.is_icis().unwrap());
        let bound = s.milnor_bound(&opts).unwrap();
        let mu = s.milnor_exact(&opts).unwrap();
        assert!(mu <= bound.value);
        let e = s.critical_multiplicity(&opts).unwrap();
        assert_eq!(e.e_samuel, e.e_generic);
    }
}
