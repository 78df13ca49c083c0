//! Tensor powers `S^{⊗n}`, the multiplication map `Δ_n` and its kernel, and
//! the explicit lift `φ̂_e` of the canonical splitting on Segre products.

mod dn;

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

pub use dn::{
    dn_map_space, dn_membership, dn_regularity_witness, verify_dn_witness, Caps, DnMembership, DnTarget,
    DnWitness, RegularityWitness,
};

use crate::error::{Error, Result};
use crate::groebner::IdealHandle;
use crate::poly::{ExpVec, Polynomial};
use crate::ring::{Block, Ring};
use crate::segre::{canonical_splitting, enumerate_generators, SegreContext};

/// `S^{⊗n}` for a polynomial ring `S`, with the maps between them.
#[derive(Clone, Debug)]
pub struct TensorPower {
    base: Arc<Ring>,
    ring: Arc<Ring>,
    n: u32,
}

impl TensorPower {
    pub fn new(base: &Arc<Ring>, n: u32) -> Result<Self> {
        Ok(TensorPower {
            base: Arc::clone(base),
            ring: base.tensor_power(n)?,
            n,
        })
    }

    pub fn base(&self) -> &Arc<Ring> {
        &self.base
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Position of base variable `v` in factor `k` (1-based).
    pub fn index(&self, v: usize, k: u32) -> usize {
        (k as usize - 1) * self.base.num_vars() + v
    }

    /// `Δ_n` on exponents: sum over factors.
    pub fn collapse(&self, ex: &ExpVec) -> ExpVec {
        let nb = self.base.num_vars();
        let mut out = vec![0; nb];
        for (i, &a) in ex.as_slice().iter().enumerate() {
            out[i % nb] += a;
        }
        ExpVec::from_vec(out)
    }

    /// `ϖ_k`: the base ring into factor `k`.
    pub fn embed(&self, f: &Polynomial, k: u32) -> Result<Polynomial> {
        if !f.ring().same_as(&self.base) {
            return Err(Error::ContextMismatch);
        }
        if k == 0 || k > self.n {
            return Err(Error::precondition(format!("factor {k} outside 1..={}", self.n)));
        }
        let total = self.ring.num_vars();
        Ok(f.map_monomials(&self.ring, |ex| {
            let mut v = vec![0; total];
            for (i, &a) in ex.as_slice().iter().enumerate() {
                v[self.index(i, k)] = a;
            }
            ExpVec::from_vec(v)
        }))
    }

    /// `Δ_n(f)`.
    pub fn delta_eval(&self, f: &Polynomial) -> Result<Polynomial> {
        if !f.ring().same_as(&self.ring) {
            return Err(Error::ContextMismatch);
        }
        Ok(f.map_monomials(&self.base, |ex| self.collapse(ex)))
    }

    /// `𝔡_n = ker Δ_n`, generated by `v_1 − v_k` for every base variable
    /// `v` and `k = 2..n`.
    pub fn diagonal_ideal(&self) -> Result<IdealHandle> {
        if self.n < 2 {
            return Err(Error::precondition("the diagonal ideal needs n >= 2"));
        }
        let mut gens = Vec::new();
        for k in 2..=self.n {
            for v in 0..self.base.num_vars() {
                gens.push(Polynomial::var(&self.ring, self.index(v, 1)) - Polynomial::var(&self.ring, self.index(v, k)));
            }
        }
        IdealHandle::new(&self.ring, gens)
    }

    /// `(x-degree, y-degree)` of factor `k` of a monomial.
    pub fn factor_bidegree(&self, ex: &ExpVec, k: u32) -> (u64, u64) {
        let nb = self.base.num_vars();
        let start = (k as usize - 1) * nb;
        let mut out = (0, 0);
        for (v, &a) in self.base.variables().iter().zip(&ex.as_slice()[start..start + nb]) {
            match v.id.block {
                Block::X => out.0 += a as u64,
                Block::Y => out.1 += a as u64,
                Block::Plain => {}
            }
        }
        out
    }

    /// Every monomial is balanced in every factor, i.e. `f ∈ R^{⊗n}`.
    pub fn in_segre_power(&self, f: &Polynomial) -> bool {
        f.terms()
            .iter()
            .all(|(ex, _)| (1..=self.n).all(|k| {
                let (x, y) = self.factor_bidegree(ex, k);
                x == y
            }))
    }
}

pub fn diagonal_ideal(tp: &TensorPower) -> Result<IdealHandle> {
    tp.diagonal_ideal()
}

pub fn delta_eval(tp: &TensorPower, f: &Polynomial) -> Result<Polynomial> {
    tp.delta_eval(f)
}

/// A Segre context together with the tensor power of its ambient ring.
#[derive(Clone, Debug)]
pub struct DiagonalContext {
    segre: SegreContext,
    tensor: TensorPower,
}

impl DiagonalContext {
    pub fn new(segre: &SegreContext, n: u32) -> Result<Self> {
        Ok(DiagonalContext {
            tensor: TensorPower::new(segre.ring(), n)?,
            segre: segre.clone(),
        })
    }

    pub fn segre(&self) -> &SegreContext {
        &self.segre
    }

    pub fn tensor(&self) -> &TensorPower {
        &self.tensor
    }

    pub fn n(&self) -> u32 {
        self.tensor.n
    }

    /// Number of free-basis elements `q^{(r+s+2)n}` of `F^e_* S^{⊗n}`.
    pub fn basis_count(&self) -> u128 {
        (self.segre.q() as u128).pow(self.tensor.ring.num_vars() as u32)
    }
}

/// Exponents `a_{i,k}, b_{j,k} ∈ [0, q−1]` of a free-basis element of
/// `F^e_* S^{⊗n}`. Rows are tensor factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisExponent {
    q: u32,
    a: Vec<Vec<u32>>,
    b: Vec<Vec<u32>>,
}

impl BasisExponent {
    /// `a[k]` holds `a_{0,k+1}..a_{r,k+1}`, and likewise for `b`.
    pub fn new(q: u32, a: Vec<Vec<u32>>, b: Vec<Vec<u32>>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::DimensionMismatch("a and b need the same nonzero number of factors".into()));
        }
        let (nx, ny) = (a[0].len(), b[0].len());
        if nx == 0 || ny == 0 || a.iter().any(|row| row.len() != nx) || b.iter().any(|row| row.len() != ny) {
            return Err(Error::DimensionMismatch("ragged exponent grid".into()));
        }
        if a.iter().chain(&b).flatten().any(|&v| v >= q) {
            return Err(Error::precondition(format!("basis exponents must lie in [0, {}]", q - 1)));
        }
        Ok(BasisExponent { q, a, b })
    }

    /// Reads a tensor-ring exponent vector whose entries are all below `q`.
    pub fn from_exponent(ctx: &DiagonalContext, ex: &ExpVec) -> Result<Self> {
        let nx = ctx.segre.num_x();
        let nb = nx + ctx.segre.num_y();
        let v = ex.as_slice();
        let (a, b) = (0..ctx.n() as usize)
            .map(|k| (v[k * nb..k * nb + nx].to_vec(), v[k * nb + nx..(k + 1) * nb].to_vec()))
            .unzip();
        Self::new(ctx.segre.q(), a, b)
    }

    /// The `idx`-th basis element in mixed-radix order (first variable
    /// fastest).
    pub fn from_index(ctx: &DiagonalContext, mut idx: u128) -> Result<Self> {
        let q = ctx.segre.q() as u128;
        let total = ctx.tensor.ring.num_vars();
        let mut v = Vec::with_capacity(total);
        for _ in 0..total {
            v.push((idx % q) as u32);
            idx /= q;
        }
        Self::from_exponent(ctx, &ExpVec::from_vec(v))
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Vec<u32>] {
        &self.a
    }

    pub fn b(&self) -> &[Vec<u32>] {
        &self.b
    }

    /// `a_k = Σ_i a_{i,k}` (k 1-based).
    pub fn a_k(&self, k: usize) -> u64 {
        self.a[k - 1].iter().map(|&v| v as u64).sum()
    }

    pub fn b_k(&self, k: usize) -> u64 {
        self.b[k - 1].iter().map(|&v| v as u64).sum()
    }

    /// `Σ_k a_{i,k}` for each `i`.
    pub fn column_sums_a(&self) -> Vec<u64> {
        column_sums(&self.a)
    }

    pub fn column_sums_b(&self) -> Vec<u64> {
        column_sums(&self.b)
    }

    pub fn exponent(&self) -> ExpVec {
        ExpVec::from_vec(self.a.iter().zip(&self.b).flat_map(|(a, b)| a.iter().chain(b).copied()).collect())
    }

    /// `(b_k − a_k)/q` for every factor, or `None` if some difference is
    /// not divisible by `q`.
    pub fn factor_surpluses(&self) -> Option<Vec<i64>> {
        let q = self.q as i64;
        (1..=self.n())
            .map(|k| {
                let d = self.b_k(k) as i64 - self.a_k(k) as i64;
                (d % q == 0).then_some(d / q)
            })
            .collect()
    }
}

fn column_sums(grid: &[Vec<u32>]) -> Vec<u64> {
    let mut out = vec![0u64; grid[0].len()];
    for row in grid {
        for (o, &v) in out.iter_mut().zip(row) {
            *o += v as u64;
        }
    }
    out
}

fn upsilon(v: u64, q: u32) -> u32 {
    (v / q as u64) as u32
}

/// `Σ_k a_{0,k} ≡ Σ_k b_{0,k} ≡ 1` and every other column sum `≡ 0` mod `q`.
pub fn lala_check(b: &BasisExponent) -> bool {
    let q = b.q as u64;
    let ok = |sums: Vec<u64>| sums.iter().enumerate().all(|(i, &s)| s % q == u64::from(i == 0) % q);
    ok(b.column_sums_a()) && ok(b.column_sums_b())
}

/// `ψ(F^e_* x^a y^b) = x^{υ(Σa)} y^{υ(Σb)}` when the column condition holds,
/// else 0; this equals `φ_e(F^e_* Δ_n(x^a y^b))`.
pub fn psi_eval(ctx: &DiagonalContext, b: &BasisExponent) -> Polynomial {
    let ring = ctx.segre.ring();
    if !lala_check(b) {
        return Polynomial::zero(ring);
    }
    let q = b.q;
    let ex = b
        .column_sums_a()
        .into_iter()
        .chain(b.column_sums_b())
        .map(|s| upsilon(s, q))
        .collect();
    Polynomial::monomial(ring, ExpVec::from_vec(ex), 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LiftCase {
    /// The column condition fails; the image is 0.
    LalaFail,
    /// Some `b_k − a_k ≢ 0 (mod q)`: `ψ` is placed in factor 1.
    FactorImbalance,
    MainCase,
}

/// Which tensor factor receives the leftover monomial `ϑ` in the main case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum ResidualPlacement {
    First,
    #[default]
    Last,
}

/// One `ϑ_k`: a y-monomial `g_k` of degree `μ_{+,k}` or an x-monomial `f_k`
/// of degree `ν_{+,k}`, taken from `ψ` and placed in factor `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub factor: u32,
    pub block: Block,
    /// Exponents within the block.
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftImage {
    #[serde(serialize_with = "crate::report::display")]
    pub value: Polynomial,
    pub case: LiftCase,
    pub extractions: Vec<Extraction>,
    /// `ϑ` as an exponent vector of `S`, and the factor it went to.
    pub residual: Option<(Vec<u32>, u32)>,
}

/// Takes `need` units from `pool`, lowest index first.
fn take_lowest_first(pool: &mut [u32], mut need: u32) -> Option<Vec<u32>> {
    let mut taken = vec![0; pool.len()];
    for (slot, t) in pool.iter_mut().zip(taken.iter_mut()) {
        let k = (*slot).min(need);
        *slot -= k;
        *t = k;
        need -= k;
    }
    (need == 0).then_some(taken)
}

/// `φ̂_e(F^e_* x^a y^b)` for a free-basis element.
pub fn lift_basis_image(ctx: &DiagonalContext, b: &BasisExponent, placement: ResidualPlacement) -> Result<LiftImage> {
    let tp = &ctx.tensor;
    if !lala_check(b) {
        return Ok(LiftImage {
            value: Polynomial::zero(tp.ring()),
            case: LiftCase::LalaFail,
            extractions: vec![],
            residual: None,
        });
    }
    let Some(surplus) = b.factor_surpluses() else {
        return Ok(LiftImage {
            value: tp.embed(&psi_eval(ctx, b), 1)?,
            case: LiftCase::FactorImbalance,
            extractions: vec![],
            residual: None,
        });
    };
    let q = b.q;
    let nx = ctx.segre.num_x();
    let mut xpool: Vec<u32> = b.column_sums_a().into_iter().map(|s| upsilon(s, q)).collect();
    let mut ypool: Vec<u32> = b.column_sums_b().into_iter().map(|s| upsilon(s, q)).collect();
    let nb = tp.base.num_vars();
    let mut ex = vec![0u32; tp.ring.num_vars()];
    let mut extractions = Vec::new();
    for (k0, &d) in surplus.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let k = k0 as u32 + 1;
        let (pool, block, offset) = if d > 0 {
            (&mut ypool, Block::Y, nx)
        } else {
            (&mut xpool, Block::X, 0)
        };
        let taken = take_lowest_first(pool, d.unsigned_abs() as u32).ok_or_else(|| {
            Error::Invariant(format!("not enough variables to extract for factor {k} of {b:?}"))
        })?;
        for (i, &t) in taken.iter().enumerate() {
            ex[k0 * nb + offset + i] += t;
        }
        extractions.push(Extraction {
            factor: k,
            block,
            exponents: taken,
        });
    }
    let residual: Vec<u32> = xpool.iter().chain(&ypool).copied().collect();
    let rk = match placement {
        ResidualPlacement::First => 1,
        ResidualPlacement::Last => tp.n,
    };
    for (i, &v) in residual.iter().enumerate() {
        ex[tp.index(i, rk)] += v;
    }
    Ok(LiftImage {
        value: Polynomial::monomial(tp.ring(), ExpVec::from_vec(ex), 1),
        case: LiftCase::MainCase,
        extractions,
        residual: Some((residual, rk)),
    })
}

/// Checks `Σ_k (b_k − a_k) = q(Σ_j υ(B_j) − Σ_i υ(A_i))`, `Σ_j υ(B_j) ≥ μ_+`
/// and `Σ_i υ(A_i) ≥ ν_+`. Requires the column condition and
/// `b_k ≡ a_k (mod q)` for every `k`.
pub fn balance_identity_check(b: &BasisExponent) -> Result<bool> {
    if !lala_check(b) {
        return Err(Error::precondition("balance identities need the column condition"));
    }
    let surplus = b
        .factor_surpluses()
        .ok_or_else(|| Error::precondition("balance identities need b_k ≡ a_k (mod q) in every factor"))?;
    let q = b.q;
    let sum_ub: i64 = b.column_sums_b().into_iter().map(|s| upsilon(s, q) as i64).sum();
    let sum_ua: i64 = b.column_sums_a().into_iter().map(|s| upsilon(s, q) as i64).sum();
    let lhs: i64 = (1..=b.n()).map(|k| b.b_k(k) as i64 - b.a_k(k) as i64).sum();
    let mu_plus: i64 = surplus.iter().filter(|&&d| d > 0).sum();
    let nu_plus: i64 = surplus.iter().filter(|&&d| d < 0).map(|d| -d).sum();
    Ok(lhs == q as i64 * (sum_ub - sum_ua) && sum_ub >= mu_plus && sum_ua >= nu_plus)
}

/// Result of [`verify_lift`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftVerification {
    pub basis_elements: u64,
    pub generator_products: u64,
    pub failure: Option<String>,
}

impl LiftVerification {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `Δ_n(φ̂_e(b)) = ψ(b)` on every free-basis element, then that
/// `φ̂_e` sends every tensor product of `F^e_* R`-generators with outer
/// degree at most `degree_bound` into `R^{⊗n}`.
pub fn verify_lift(ctx: &DiagonalContext, degree_bound: u32, cap: u64) -> Result<LiftVerification> {
    let count = ctx.basis_count();
    if count > cap as u128 {
        return Err(Error::cap("basis elements", count, cap as u128));
    }
    let placement = ResidualPlacement::default();
    let tp = &ctx.tensor;
    let diagram_failure = (0..count as u64)
        .into_par_iter()
        .map(|idx| -> Result<Option<String>> {
            let b = BasisExponent::from_index(ctx, idx as u128)?;
            let lift = lift_basis_image(ctx, &b, placement)?;
            let lhs = tp.delta_eval(&lift.value)?;
            let rhs = psi_eval(ctx, &b);
            Ok((lhs != rhs).then(|| format!("diagram fails at {b:?}: Δ(φ̂) = {lhs}, ψ = {rhs}")))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    if let Some(found) = diagram_failure {
        return Ok(LiftVerification {
            basis_elements: count as u64,
            generator_products: 0,
            failure: Some(found?.expect("filtered to failures")),
        });
    }

    let gens = enumerate_generators(&ctx.segre, degree_bound);
    let n = ctx.n() as usize;
    let products = (gens.len() as u128).pow(n as u32);
    if products > cap as u128 {
        return Err(Error::cap("generator tensor products", products, cap as u128));
    }
    let q = ctx.segre.q();
    let nb = tp.base.num_vars();
    let restriction_failure = (0..products as u64)
        .into_par_iter()
        .map(|mut idx| -> Result<Option<String>> {
            let mut ex = Vec::with_capacity(n * nb);
            for _ in 0..n {
                let g = &gens[(idx % gens.len() as u64) as usize];
                idx /= gens.len() as u64;
                ex.extend_from_slice(g.monomial(q).as_slice());
            }
            let mu = ExpVec::from_vec(ex.iter().map(|&v| v / q).collect());
            let inner = ExpVec::from_vec(ex.iter().map(|&v| v % q).collect());
            let b = BasisExponent::from_exponent(ctx, &inner)?;
            let image = lift_basis_image(ctx, &b, placement)?.value.mul_monomial(&mu);
            Ok((!tp.in_segre_power(&image)).then(|| {
                let source = Polynomial::monomial(tp.ring(), ExpVec::from_vec(ex.clone()), 1);
                format!("φ̂ sends F_*({source}) to {image}, outside R^⊗{n}")
            }))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    Ok(LiftVerification {
        basis_elements: count as u64,
        generator_products: products as u64,
        failure: restriction_failure.transpose()?.flatten(),
    })
}

/// `ψ` computed the long way, as `φ_e(F^e_* Δ_n(monomial))`.
pub fn psi_via_splitting(ctx: &DiagonalContext, b: &BasisExponent) -> Result<Polynomial> {
    let mono = Polynomial::monomial(ctx.tensor.ring(), b.exponent(), 1);
    canonical_splitting(&ctx.segre)?.apply(&ctx.tensor.delta_eval(&mono)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> (DiagonalContext, BasisExponent) {
        let seg = SegreContext::new(5, 1, 1, 1).unwrap();
        let ctx = DiagonalContext::new(&seg, 2).unwrap();
        let b = BasisExponent::new(5, vec![vec![1, 1], vec![0, 4]], vec![vec![3, 4], vec![3, 1]]).unwrap();
        (ctx, b)
    }

    #[test]
    fn diagonal_ideal_examples() {
        let x = Ring::new(3, &["x"]).unwrap();
        let tp = TensorPower::new(&x, 2).unwrap();
        let d = tp.diagonal_ideal().unwrap();
        assert_eq!(d.generators().len(), 1);
        assert_eq!(d.generators()[0].to_string(), "x_1 + 2*x_2");
        for g in d.generators() {
            assert!(tp.delta_eval(g).unwrap().is_zero());
        }
        let s00 = Ring::segre_ambient(2, 0, 0).unwrap();
        let tp3 = TensorPower::new(&s00, 3).unwrap();
        assert_eq!(tp3.diagonal_ideal().unwrap().generators().len(), 4);
        assert!(TensorPower::new(&x, 1).unwrap().diagonal_ideal().is_err());
    }

    #[test]
    fn delta_examples() {
        let (ctx, _) = example();
        let tp = ctx.tensor();
        let t = |s: &str| Polynomial::parse(tp.ring(), s).unwrap();
        let s = |s: &str| Polynomial::parse(tp.base(), s).unwrap();
        assert_eq!(tp.delta_eval(&t("x0_1*x0_2")).unwrap(), s("x0^2"));
        let g = t("x0_1*x1_1*y0_1^3*y1_1^4*x1_2^4*y0_2^3*y1_2");
        assert_eq!(tp.delta_eval(&g).unwrap(), s("x0*x1^5*y0^6*y1^5"));
    }

    #[test]
    fn worked_example() {
        let (ctx, b) = example();
        assert!(lala_check(&b));
        assert_eq!(b.column_sums_a(), [1, 5]);
        assert_eq!(b.column_sums_b(), [6, 5]);
        assert_eq!(psi_eval(&ctx, &b).to_string(), "x1*y0*y1");
        assert_eq!(psi_via_splitting(&ctx, &b).unwrap(), psi_eval(&ctx, &b));
        let lift = lift_basis_image(&ctx, &b, ResidualPlacement::Last).unwrap();
        assert_eq!(lift.case, LiftCase::MainCase);
        assert_eq!(lift.value.to_string(), "y0_1*x1_2*y1_2");
        assert!(balance_identity_check(&b).unwrap());
        let first = lift_basis_image(&ctx, &b, ResidualPlacement::First).unwrap();
        assert_eq!(first.value.to_string(), "x1_1*y0_1*y1_1");
    }

    #[test]
    fn lala_examples() {
        let (ctx, _) = example();
        let zero = BasisExponent::new(5, vec![vec![0, 0]; 2], vec![vec![0, 0]; 2]).unwrap();
        assert!(!lala_check(&zero));
        assert!(psi_eval(&ctx, &zero).is_zero());
        assert_eq!(lift_basis_image(&ctx, &zero, ResidualPlacement::Last).unwrap().case, LiftCase::LalaFail);
        // n = 1, all entries q − 1: column sums q − 1 ≡ −1.
        let full = |q: u32| BasisExponent::new(q, vec![vec![q - 1; 2]], vec![vec![q - 1; 2]]).unwrap();
        assert!(!lala_check(&full(5)));
        assert!(!lala_check(&full(3)));
    }

    #[test]
    fn factor_imbalance_example() {
        let seg = SegreContext::new(2, 1, 1, 1).unwrap();
        let ctx = DiagonalContext::new(&seg, 2).unwrap();
        // Factor 1 carries x0 only; ψ vanishes on this grid.
        let b = BasisExponent::new(2, vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert!(b.factor_surpluses().is_none());
        assert!(psi_eval(&ctx, &b).is_zero());
        assert!(lift_basis_image(&ctx, &b, ResidualPlacement::Last).unwrap().value.is_zero());
        // A grid with the column condition and an imbalanced factor.
        let c = BasisExponent::new(2, vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![1, 0]]).unwrap();
        assert!(lala_check(&c));
        let lift = lift_basis_image(&ctx, &c, ResidualPlacement::Last).unwrap();
        assert_eq!(lift.case, LiftCase::FactorImbalance);
        assert!(lift.value.is_one());
    }

    #[test]
    fn balance_identities_on_symmetric_grid() {
        let b = BasisExponent::new(3, vec![vec![1, 0]], vec![vec![1, 0]]).unwrap();
        assert!(balance_identity_check(&b).unwrap());
        let bad = BasisExponent::new(3, vec![vec![0, 0]], vec![vec![0, 0]]).unwrap();
        assert!(balance_identity_check(&bad).is_err());
    }

    #[test]
    fn exhaustive_p2_sweep() {
        let seg = SegreContext::new(2, 1, 1, 1).unwrap();
        let ctx = DiagonalContext::new(&seg, 2).unwrap();
        let mut preconditioned = 0;
        for idx in 0..ctx.basis_count() {
            let b = BasisExponent::from_index(&ctx, idx).unwrap();
            assert_eq!(psi_via_splitting(&ctx, &b).unwrap(), psi_eval(&ctx, &b));
            let lift = lift_basis_image(&ctx, &b, ResidualPlacement::Last).unwrap();
            if lift.case == LiftCase::MainCase {
                preconditioned += 1;
                assert!(balance_identity_check(&b).unwrap());
                let surplus = b.factor_surpluses().unwrap();
                let (_, term) = (lift.value.terms()[0].1, &lift.value.terms()[0].0);
                for k in 1..=2u32 {
                    let (x, y) = ctx.tensor().factor_bidegree(term, k);
                    assert_eq!(y as i64 - x as i64, surplus[k as usize - 1]);
                }
            }
        }
        assert!(preconditioned > 0);
    }

    #[test]
    fn verify_lift_small() {
        let seg = SegreContext::new(2, 1, 1, 1).unwrap();
        let rep = verify_lift(&DiagonalContext::new(&seg, 2).unwrap(), 3, 1_000_000).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.basis_elements, 256);
        let one = verify_lift(&DiagonalContext::new(&seg, 1).unwrap(), 2, 1_000_000).unwrap();
        assert!(one.passed());
        assert!(verify_lift(&DiagonalContext::new(&seg, 2).unwrap(), 3, 100).is_err());
    }
}
