//! Stable Roommates and Stable Marriage instances placed on a map.
//!
//! Instances are compared through their mutual attraction matrices, sampled
//! from statistical cultures, analysed with exact stability solvers and
//! embedded in the plane.

pub mod assignment;
mod error;
pub mod cultures;
pub mod extremes;
pub mod instances;
pub mod mutual_attraction;
pub mod mapping;
pub mod solvers;

pub use error::{Error, Result};
pub use cultures::{Culture, CultureSpec};
pub use extremes::{ExtremeKind, SmExtremeKind};
pub use instances::{AgentId, Instance, Matching, Profile, SmInstance, SrInstance};
pub use mutual_attraction::{MaMatrix, MaPair};
