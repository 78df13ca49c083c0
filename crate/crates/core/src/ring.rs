//! Polynomial ring contexts with block-structured variables.
//!
//! A variable carries a [`VarId`]: which block it belongs to (the x-block or
//! y-block of a Segre ambient ring, or a plain variable), its index inside
//! that block, and the tensor factor it lives in. Tensor powers replicate the
//! base ring's variables factor by factor, so per-block and per-factor degree
//! sums never need index arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PrimeField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Block {
    X,
    Y,
    /// A variable outside any Segre block (`a, b, c, d`, ...).
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VarId {
    pub block: Block,
    pub index: u32,
    /// Tensor factor, starting at 1.
    pub factor: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Variable {
    pub name: String,
    pub id: VarId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct TensorInfo {
    base: Arc<Ring>,
    factors: u32,
}

/// A polynomial ring 𝔽_p[v_0, …, v_{N-1}].
///
/// Variables are ordered; that order is the variable priority used by the
/// canonical term order and by default Gröbner orders.
#[derive(Clone, Debug)]
pub struct Ring {
    field: PrimeField,
    vars: Vec<Variable>,
    by_name: HashMap<String, usize>,
    tensor: Option<TensorInfo>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars && self.tensor == other.tensor
    }
}

impl Eq for Ring {}

pub(crate) fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    /// A ring with plain variables named as given.
    pub fn new<S: AsRef<str>>(p: u64, names: &[S]) -> Result<Arc<Ring>> {
        let vars = names
            .iter()
            .enumerate()
            .map(|(i, n)| Variable {
                name: n.as_ref().to_string(),
                id: VarId {
                    block: Block::Plain,
                    index: i as u32,
                    factor: 1,
                },
            })
            .collect();
        Self::with_variables(p, vars)
    }

    pub fn with_variables(p: u64, vars: Vec<Variable>) -> Result<Arc<Ring>> {
        Self::build(PrimeField::new(p)?, vars, None)
    }

    fn build(field: PrimeField, vars: Vec<Variable>, tensor: Option<TensorInfo>) -> Result<Arc<Ring>> {
        let mut by_name = HashMap::with_capacity(vars.len());
        let mut ids = std::collections::HashSet::new();
        for (i, v) in vars.iter().enumerate() {
            if !valid_identifier(&v.name) {
                return Err(Error::precondition(format!("invalid variable name `{}`", v.name)));
            }
            if by_name.insert(v.name.clone(), i).is_some() {
                return Err(Error::precondition(format!("duplicate variable `{}`", v.name)));
            }
            if !ids.insert(v.id) {
                return Err(Error::precondition(format!("duplicate variable id {:?}", v.id)));
            }
            if v.id.factor == 0 {
                return Err(Error::precondition("tensor factors are numbered from 1"));
            }
        }
        Ok(Arc::new(Ring {
            field,
            vars,
            by_name,
            tensor,
        }))
    }

    /// The Segre ambient ring 𝔽_p[x_0..x_r, y_0..y_s].
    pub fn segre_ambient(p: u64, r: u32, s: u32) -> Result<Arc<Ring>> {
        let mut vars = Vec::new();
        for i in 0..=r {
            vars.push(Variable {
                name: format!("x{i}"),
                id: VarId { block: Block::X, index: i, factor: 1 },
            });
        }
        for j in 0..=s {
            vars.push(Variable {
                name: format!("y{j}"),
                id: VarId { block: Block::Y, index: j, factor: 1 },
            });
        }
        Self::with_variables(p, vars)
    }

    /// The n-fold tensor power over 𝔽_p. Variable `v` of factor `k` is
    /// named `v_k`; variables are laid out factor-major.
    pub fn tensor_power(self: &Arc<Self>, n: u32) -> Result<Arc<Ring>> {
        if n == 0 {
            return Err(Error::precondition("tensor power needs n >= 1"));
        }
        if self.tensor.is_some() || self.vars.iter().any(|v| v.id.factor != 1) {
            return Err(Error::precondition("base ring of a tensor power must be a single factor"));
        }
        let mut vars = Vec::with_capacity(self.vars.len() * n as usize);
        for k in 1..=n {
            for v in &self.vars {
                vars.push(Variable {
                    name: format!("{}_{k}", v.name),
                    id: VarId { factor: k, ..v.id },
                });
            }
        }
        Self::build(
            self.field,
            vars,
            Some(TensorInfo {
                base: Arc::clone(self),
                factors: n,
            }),
        )
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn variable(&self, i: usize) -> &Variable {
        &self.vars[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn index_of_id(&self, id: VarId) -> Option<usize> {
        self.vars.iter().position(|v| v.id == id)
    }

    /// Base ring and number of factors, when this ring is a tensor power.
    pub fn tensor_base(&self) -> Option<(&Arc<Ring>, u32)> {
        self.tensor.as_ref().map(|t| (&t.base, t.factors))
    }

    pub fn has_segre_blocks(&self) -> bool {
        self.vars.iter().any(|v| v.id.block == Block::X)
            && self.vars.iter().any(|v| v.id.block == Block::Y)
    }

    /// Structural compatibility check used by every binary operation.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Ring>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[", self.characteristic())?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", v.name)?;
        }
        write!(f, "]")
    }
}
