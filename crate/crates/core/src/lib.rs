pub mod dims;
pub mod einstein;
pub mod galilei;
pub mod harness;
pub mod modelspec;
pub mod quantum;
pub mod smooth;
