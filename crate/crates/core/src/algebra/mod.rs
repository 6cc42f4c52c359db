//! Exact coefficient polynomials and the graded supercommutative function
//! algebra of a Darboux chart.

pub mod chart;
pub mod element;
pub mod poly;

pub use chart::{make_chart, ChartKind, ChartSpec, DarbouxPair, Family, Generator, GeneratorFamily};
pub use element::{gmul, normalize, Degree, GradedElement, GradedMonomial};
pub use poly::{rat, ratio, Poly};
