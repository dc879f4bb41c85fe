//! Finite W-superalgebras: Lie superalgebra construction, nilpotent data,
//! PBW normal forms in the generalized Gelfand-Graev module, generators and
//! relations in characteristic zero and reduced modules in characteristic p.

pub mod algebra;
pub mod frame;
pub mod io;
pub mod linalg;
pub mod modp;
pub mod nilpotent;
pub mod pbw;
pub mod scalar;
pub mod sl2;
pub mod w;
pub mod wchar0;
