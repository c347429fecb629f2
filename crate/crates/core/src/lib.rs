pub mod algebra;
pub mod complexes;
pub mod error;
pub mod exactlin;
pub mod io;
pub mod presets;
pub mod series;
pub mod tensor;

pub use error::{Error, Result};
