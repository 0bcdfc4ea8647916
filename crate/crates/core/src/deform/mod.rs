//! Square-zero extensions, κ, Baer calculus and the lifting equivalences at finite scale.

mod bundle;
mod canonical;
mod ext;
mod module;
mod solve;

pub use bundle::*;
pub use canonical::{frobenius_lift, reduces_to_base, witt_extension, CanonicalExtensions, FrobeniusLift, LiftDatum, PsiOutput, SplitLift};
pub use ext::{ExtensionIso, SquareZeroExtension, MAX_BASE_ORDER};
pub use module::{frobenius_map, AModule, AModuleMap, Quotient};
