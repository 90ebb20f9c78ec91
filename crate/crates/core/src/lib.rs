//! Vector invariants of `C_p` and `SL_2(F_p)` acting diagonally on `m` copies
//! of the natural representation `V_2` over a prime field.

pub mod cpaction;
pub mod error;
pub mod ffield;
pub mod paths;
pub mod polarize;
pub mod polyring;
pub mod sagbi;
pub mod sl2;
pub mod straighten;

pub use cpaction::{ModuleDecomposition, SigmaOperator};
pub use error::{Error, Result};
pub use ffield::{EchelonSpace, FpMatrix, FpOp, FpScalar, Prime, Rref};
pub use paths::{CountTables, LatticePath, Matching, PathClass};
pub use polyring::{
    component_basis, grevlex_cmp, BlockLinearMap, Component, Monomial, MultiDegree, Polynomial,
    VarKind, VarRef,
};
pub use sagbi::{GenTag, Generator, GeneratorSet, SetKind, SubductionResult};
pub use sl2::{DicksonPair, SL2Element, SL2GeneratorReport, Sl2Config};
pub use straighten::UProduct;
