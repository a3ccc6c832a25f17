//! Gate-level representation of the decoders and their assembly output.

mod builders;
mod ir;
mod qasm;
mod ustar;

pub use builders::*;
pub use ir::*;
pub use qasm::*;
pub use ustar::*;
