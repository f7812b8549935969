//! Exact arithmetic over Q, Q(n) and Q(n, k).

pub mod factor;
pub mod linalg;
pub mod modp;
pub mod parse;
pub mod polyk;
pub mod polynk;
pub mod rfunc_n;
pub mod rfunc_nk;
pub mod zpoly;

pub use factor::{affine_roots, dispersion_set, factor_k, rational_roots, AffineRoots};
pub use polyk::{PolyK, Root, RootClass};
pub use polynk::PolyNK;
pub use rfunc_n::RFuncN;
pub use rfunc_nk::RFuncNK;
pub use zpoly::ZPoly;

pub type Rational = num_rational::BigRational;
