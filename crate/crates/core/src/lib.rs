//! Random geometric graphs on the square `[-√n/2, √n/2]²`: sampling, graph
//! distances, closed-form hop-count bounds, and the constructive strip
//! procedures behind them.

pub mod bounds;
pub mod concentration;
pub mod error;
pub mod geometry;
pub mod io;
pub mod sampler;
pub mod spatial_graph;
pub mod strip_path;

pub use error::{Error, Result};
pub use geometry::Point;
