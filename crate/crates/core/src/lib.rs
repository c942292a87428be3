//! Exact spectral and metric invariants of digraphs: pre-distance
//! polynomials, the Hoffman polynomial, simple, weighted and spectral
//! excess, projection bounds, and distance-regularity tests.

pub mod analysis;
pub mod classify;
pub mod digraph;
pub mod distance;
pub mod error;
pub mod excess;
pub mod generators;
pub mod hp;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod orthopoly;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod spectrum;
pub mod verify;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;

pub use analysis::{Analysis, AnalysisOptions};
pub use generators::{Family, Filter};
pub use digraph::{CycleLength, Digraph};
pub use distance::{DeltaProfile, DistanceStructure};
pub use error::{Error, GraphError, ParseError, Result};
pub use hp::{Fixed, HpComplex, Precision, RealValue};
pub use matrix::Matrix;
pub use poly::Poly;

pub type IntMatrix = Matrix<BigInt>;
pub type ExactMatrix = Matrix<BigRational>;
pub type RationalPoly = Poly<BigRational>;
pub type HpPoly = Poly<Fixed>;
pub type ComplexPoly = Poly<Complex<Fixed>>;
