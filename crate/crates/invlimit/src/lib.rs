pub mod cli;
pub mod codes;
pub mod embedding;
pub mod error;
pub mod figures;
pub mod limit_space;
pub mod map_family;
pub mod moebius;

pub use codes::{Tail, TypeCode};
pub use embedding::{Embedding, ExtendedCoord, NeighborhoodBase, Sheet};
pub use error::{Error, Result};
pub use limit_space::{BrickInterval, LimitPoint};
pub use map_family::{CaseLabel, Landmarks, PeriodCensus, UnimodalMap};
pub use moebius::MoebiusTransform;
