//! Computational toolkit for ordered Ramsey numbers of ordered uniform hypergraphs.
//!
//! Vertices are `0..n` in their natural order. Hyperedges are strictly increasing
//! vertex tuples. Every red/blue coloring and edge labeling is laid out in
//! colexicographic order of its subsets (see [`colex`]).
//!
//! Numeric code is generic where it makes sense:
//! * threshold arithmetic (densities, embedding schedules) over any [`Scalar`],
//!   with [`Rational`] the exact default used at every decision point;
//! * log-space bound evaluation over any [`Real`] float, with [`Log2`] (`f64`)
//!   the default.

pub mod bounds;
pub mod colex;
pub mod coloring;
pub mod constructions;
pub mod containment;
pub mod density;
pub mod embedding;
mod error;
pub mod hypergraph;
pub mod ramsey;
mod scalar;
mod seed;

pub use error::{Error, ParseError, Result};
pub use scalar::{parse_rational, Real, Scalar};
pub use seed::mix_seed;

pub use coloring::{Color, ColorView, EdgeLabeling, HyperedgeColoring};
pub use containment::{count_embeddings, find_embedding, Embedding};
pub use hypergraph::{Hypergraph, OrderedHypergraph, PrefixDegreeTable};

/// Exact rational scalar used for all density and schedule decisions.
pub type Rational = num_rational::BigRational;

/// Log-space value in double precision.
pub type Log2 = bounds::Log2Value<f64>;
/// Log-space value in single precision.
pub type Log2F32 = bounds::Log2Value<f32>;

/// Bi-density verdict over exact rationals.
pub type BiDensityVerdict = density::BiDensity;
/// Embedding parameters over exact rationals.
pub type RationalEmbeddingParams = embedding::EmbeddingParams<Rational>;
