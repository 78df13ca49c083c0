pub mod cartier;
pub mod diagonal;
pub mod error;
pub mod field;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod ring;
pub mod segre;
pub mod testideal;
pub mod ustp;

pub use error::{Error, Result};
pub use field::{Fp, PrimeField};
pub use groebner::{IdealHandle, MonomialOrder, OrderKind};
pub use linalg::{solve_linear, FpMatrix, SolveOutcome};
pub use poly::{ExpVec, Polynomial};
pub use ring::{Block, Ring, VarId, Variable};
pub use report::Verdict;
