//! Co-recursive lazy streams and the semi-numerical structures built on
//! them: formal power series, derivative towers, audio sample streams, the
//! WKB double expansion and the 0-dimensional Dyson-Schwinger series.

pub mod catalog;
pub mod coeff;
pub mod dif;
pub mod dsp;
pub mod error;
pub mod parallel;
pub mod qft;
pub mod series;
pub mod stream;
pub mod wkb;

pub use coeff::{Coeff, Elementary, Rational};
pub use dif::{Dif, DifKnot};
pub use error::{Error, Result};
pub use series::{Series, SeriesKnot};
pub use stream::{CellState, Knot, Stream};
