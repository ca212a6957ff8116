pub mod acgrading;
pub mod classify;
pub mod determinacy;
pub mod field;
pub mod frontend;
pub(crate) mod linalg;
pub mod jumps;
pub mod localalg;
pub mod newton;
pub mod series;
