pub mod ballot;
pub mod combinatorics;
pub mod decomposition;
pub mod error;
pub mod linalg;
pub mod paradox;
pub mod ranking;
