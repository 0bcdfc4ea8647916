//! Divided and symmetric powers, symbol calculus, and the Frobenius/Verschiebung sequences.

mod algebra;
mod law;
mod module;
mod symbols;
mod verfrob;

pub use algebra::{contingency_tables, matrix_expansion_product, GammaAlgebra};
pub use law::{PolynomialLaw, ZpnPoly};
pub use module::{compare_integral_gamma, DividedPowerModule, IntegralComparison, RelatorScheme, SymmetricPowerModule, FULL_SCHEME_LIMIT};
pub use symbols::{exponent_vectors, gamma_product, multinomial, sym_product, GammaFamily, SymbolBasis};
pub use verfrob::{duality_check, DualityCertificate, VerFrob};
