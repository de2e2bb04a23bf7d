//! Exact Picard numbers, Néron–Severi bases and endomorphism ranks of complex
//! tori `ℂ^g / (τ I_g)ℤ^{2g}` whose period entries are algebraic numbers.

pub mod analysis;
pub mod ball;
pub mod jsonnum;
pub mod linalg;
pub mod generate;
pub mod instance;
pub mod numberfield;
pub mod poly;
pub mod report;
pub mod roots;
pub mod torus;
pub mod verify;
