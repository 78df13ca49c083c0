//! The Segre product `R = k[x_0..x_r] # k[y_0..y_s]` inside
//! `S = k[x_0..x_r, y_0..y_s]`: the monomials with equal x- and y-degree.

use std::sync::Arc;

use serde::Serialize;

use crate::cartier::{frobenius_scale, frobenius_trace, CartierMap};
use crate::error::{Error, Result};
use crate::poly::{ExpVec, Polynomial};
use crate::ring::{Block, Ring};

#[derive(Clone, Debug)]
pub struct SegreContext {
    p: u32,
    e: u32,
    q: u32,
    r: u32,
    s: u32,
    ring: Arc<Ring>,
}

impl SegreContext {
    pub fn new(p: u64, e: u32, r: u32, s: u32) -> Result<Self> {
        if r == 0 || s == 0 {
            return Err(Error::precondition("Segre blocks need r, s >= 1"));
        }
        if e == 0 {
            return Err(Error::precondition("Frobenius level e must be >= 1"));
        }
        let ring = Ring::segre_ambient(p, r, s)?;
        let q = frobenius_scale(ring.characteristic(), e)?;
        Ok(SegreContext {
            p: ring.characteristic(),
            e,
            q,
            r,
            s,
            ring,
        })
    }

    /// The same blocks at another Frobenius level.
    pub fn with_e(&self, e: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::precondition("Frobenius level e must be >= 1"));
        }
        Ok(SegreContext {
            e,
            q: frobenius_scale(self.p, e)?,
            ..self.clone()
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// The ambient ring `S`, variables `x0..xr, y0..ys` in that order.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn num_x(&self) -> usize {
        self.r as usize + 1
    }

    pub fn num_y(&self) -> usize {
        self.s as usize + 1
    }

    /// `q > max(r+1, s+1)`, the range where the module generator list is
/// known to be minimal.
    pub fn generator_bound_holds(&self) -> bool {
        self.q > self.r.max(self.s) + 1
    }

    /// `(x-degree, y-degree)` of an exponent vector of `S`.
    pub fn bidegree(&self, ex: &ExpVec) -> (u64, u64) {
        let v = ex.as_slice();
        let nx = self.num_x();
        (
            v[..nx].iter().map(|&a| a as u64).sum(),
            v[nx..].iter().map(|&b| b as u64).sum(),
        )
    }
}

/// Every monomial has x-degree equal to y-degree. Variables outside the two
/// blocks are ignored; in a tensor power the x- and y-degrees are summed
/// over all factors (use the per-factor check in `diagonal` for `R^{⊗n}`).
pub fn segre_membership(f: &Polynomial) -> bool {
    f.terms()
        .iter()
        .all(|(ex, _)| f.block_degrees(ex, Block::X) == f.block_degrees(ex, Block::Y))
}

/// Exponent of the canonical multiplier
/// `x_0^{q−2} x_1^{q−1}⋯x_r^{q−1} y_0^{q−2} y_1^{q−1}⋯y_s^{q−1}`.
pub fn canonical_multiplier(ctx: &SegreContext) -> ExpVec {
    let q = ctx.q;
    let mut v = vec![q - 1; ctx.num_x() + ctx.num_y()];
    v[0] = q - 2;
    v[ctx.num_x()] = q - 2;
    ExpVec::from_vec(v)
}

/// `φ_e = Φ^e · x_0^{q−2}x_1^{q−1}⋯y_0^{q−2}y_1^{q−1}⋯`, which sends
/// `F^e_*(x_0 y_0)` to 1.
///
/// When `r ≠ s` the multiplier itself is not balanced, but the map still
/// sends `F^e_* R` into `R`: a balanced input picks up `q·(r − s)` more
/// x-degree than y-degree, and the trace only survives when the resulting
/// exponents are all `≡ q − 1`, which forces the output to balance.
pub fn canonical_splitting(ctx: &SegreContext) -> Result<CartierMap> {
    if ctx.q < 2 {
        return Err(Error::precondition("q must be at least 2"));
    }
    CartierMap::new(ctx.e, Polynomial::monomial(&ctx.ring, canonical_multiplier(ctx), 1))
}

/// Outcome of a trace-restriction sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRestrictionReport {
    pub monomials_checked: u64,
    /// First balanced monomial whose trace left `R`, with that trace.
    pub counterexample: Option<(String, String)>,
}

impl TraceRestrictionReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// All exponent vectors of length `nvars` and total degree `d`, in
/// lexicographically descending order.
pub fn exponents_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn go(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == nvars {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            go(nvars, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Balanced monomials `x^a y^b` with `|a| = |b| ≤ bound`.
pub fn balanced_monomials(ctx: &SegreContext, bound: u32) -> Vec<ExpVec> {
    let mut out = Vec::new();
    for d in 0..=bound {
        let xs = exponents_of_degree(ctx.num_x(), d);
        let ys = exponents_of_degree(ctx.num_y(), d);
        for a in &xs {
            for b in &ys {
                let mut v = a.clone();
                v.extend_from_slice(b);
                out.push(ExpVec::from_vec(v));
            }
        }
    }
    out
}

/// Checks `Φ^e(F^e_* m) ∈ R` for every balanced monomial `m` whose x-degree
/// (equivalently y-degree) is at most `degree_bound`.
pub fn trace_restriction_check(ctx: &SegreContext, degree_bound: u32) -> Result<TraceRestrictionReport> {
    let mut checked = 0;
    for m in balanced_monomials(ctx, degree_bound) {
        let f = Polynomial::monomial(&ctx.ring, m, 1);
        let image = frobenius_trace(&f, ctx.e)?;
        checked += 1;
        if !segre_membership(&image) {
            return Ok(TraceRestrictionReport {
                monomials_checked: checked,
                counterexample: Some((f.to_string(), image.to_string())),
            });
        }
    }
    Ok(TraceRestrictionReport {
        monomials_checked: checked,
        counterexample: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    /// The outer monomial is `x^μ` with `q|μ| = |β| − |α| > 0`.
    XSurplus,
    /// The outer monomial is `y^ν` with `q|ν| = |α| − |β| > 0`.
    YSurplus,
    /// `|α| = |β|` and there is no outer monomial.
    Balanced,
}

/// An `R`-module generator `ρ·F^e_*(x^α y^β)` of `F^e_* R`, standing for the
/// monomial `x^{ρ_x q + α} y^{ρ_y q + β}` of `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SegreGenerator {
    pub side: Side,
    /// Outer monomial as an exponent vector of `S` (x- or y-part only).
    pub rho: Vec<u32>,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl SegreGenerator {
    pub fn outer_degree(&self) -> u32 {
        self.rho.iter().sum()
    }

    /// The monomial of `S` this generator represents.
    pub fn monomial(&self, q: u32) -> ExpVec {
        let inner = self.alpha.iter().chain(&self.beta);
        ExpVec::from_vec(self.rho.iter().zip(inner).map(|(&r, &a)| r * q + a).collect())
    }
}

/// Generators of `F^e_* R` as an `R`-module whose outer monomial has degree
/// at most `degree_bound`. Requires `q > max(r+1, s+1)`.
pub fn segre_module_generators(ctx: &SegreContext, degree_bound: u32) -> Result<Vec<SegreGenerator>> {
    if !ctx.generator_bound_holds() {
        return Err(Error::precondition(format!(
            "generator enumeration needs q > max(r+1, s+1); q = {}, r = {}, s = {}",
            ctx.q, ctx.r, ctx.s
        )));
    }
    Ok(enumerate_generators(ctx, degree_bound))
}

/// The same enumeration without the bound on `q`. Every emitted monomial is
/// still balanced and the factorization of [`factor_balanced_monomial`]
/// still lands in this list; only minimality needs the bound.
pub(crate) fn enumerate_generators(ctx: &SegreContext, degree_bound: u32) -> Vec<SegreGenerator> {
    let q = ctx.q;
    let (nx, ny) = (ctx.num_x(), ctx.num_y());
    let alphas = all_inner(nx, q);
    let betas = all_inner(ny, q);
    let mut out = Vec::new();
    for alpha in &alphas {
        let da: u32 = alpha.iter().sum();
        for beta in &betas {
            let db: u32 = beta.iter().sum();
            if da.abs_diff(db) % q != 0 {
                continue;
            }
            let d = da.abs_diff(db) / q;
            if d > degree_bound {
                continue;
            }
            let (side, rhos) = match db.cmp(&da) {
                std::cmp::Ordering::Equal => (Side::Balanced, vec![vec![0; nx + ny]]),
                std::cmp::Ordering::Greater => (
                    Side::XSurplus,
                    exponents_of_degree(nx, d)
                        .into_iter()
                        .map(|mut v| {
                            v.resize(nx + ny, 0);
                            v
                        })
                        .collect(),
                ),
                std::cmp::Ordering::Less => (
                    Side::YSurplus,
                    exponents_of_degree(ny, d)
                        .into_iter()
                        .map(|v| {
                            let mut w = vec![0; nx];
                            w.extend(v);
                            w
                        })
                        .collect(),
                ),
            };
            for rho in rhos {
                out.push(SegreGenerator {
                    side,
                    rho,
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                });
            }
        }
    }
    out
}

fn all_inner(len: usize, q: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// Writes a balanced monomial `m` as `t^q · (generator monomial)` with `t`
/// balanced, taking the outer monomial from the lowest-index variables
/// first. Returns `(t, generator)`.
pub fn factor_balanced_monomial(ctx: &SegreContext, m: &ExpVec) -> Result<(ExpVec, SegreGenerator)> {
    let (dx, dy) = ctx.bidegree(m);
    if dx != dy {
        return Err(Error::precondition("monomial is not balanced"));
    }
    let q = ctx.q;
    let nx = ctx.num_x();
    let v = m.as_slice();
    let mut mu: Vec<u32> = v.iter().map(|&a| a / q).collect();
    let inner: Vec<u32> = v.iter().map(|&a| a % q).collect();
    let mux: u32 = mu[..nx].iter().sum();
    let muy: u32 = mu[nx..].iter().sum();
    let mut rho = vec![0; v.len()];
    let (side, range, mut need) = match mux.cmp(&muy) {
        std::cmp::Ordering::Equal => (Side::Balanced, 0..0, 0),
        std::cmp::Ordering::Greater => (Side::XSurplus, 0..nx, mux - muy),
        std::cmp::Ordering::Less => (Side::YSurplus, nx..v.len(), muy - mux),
    };
    for i in range {
        let take = mu[i].min(need);
        rho[i] = take;
        mu[i] -= take;
        need -= take;
    }
    let generator = SegreGenerator {
        side,
        rho,
        alpha: inner[..nx].to_vec(),
        beta: inner[nx..].to_vec(),
    };
    Ok((ExpVec::from_vec(mu), generator))
}
