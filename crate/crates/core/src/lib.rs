//! Classification of almost ι-complexes up to local equivalence through
//! immersed curves on the twice-punctured disk.

pub mod coeff;
pub mod error;
pub mod invariants;
pub mod iota;
pub mod linalg;
pub mod matching;
pub mod oracle;
pub mod precurve;

pub use coeff::{F2Poly, RElem, Var};
pub use error::{Error, Result};
pub use iota::{AlmostIotaComplex, Generator, ModUMap, RComplex, Sign, StandardParams};
pub use precurve::{CurveComponent, Multicurve, Precurve, PrimitiveCurve, SimplyFaced};
pub use invariants::{classify, InvariantRecord};
pub use oracle::{Answer, SearchBudget};
