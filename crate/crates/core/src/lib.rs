pub mod error;
pub mod hyperarrange;
pub mod lifts;
pub mod num;
pub mod polyfan;
pub mod symmetry;
pub mod trop;

pub use error::{Error, Result};
