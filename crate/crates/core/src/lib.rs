//! Exact computation of the 3D-index of ideal triangulations as a sum over
//! Q-normal surface classes, with the normal-surface, angle-structure and
//! Pachner-move tooling around it.

pub mod angles;
pub mod engine;
pub mod linalg;
pub mod pachner;
pub mod qnormal;
pub mod series;
pub mod surfaces;
pub mod tetindex;
pub mod tri;

pub use angles::{AngleVector, AnglesError, StrictOutcome};
pub use engine::{BaseClass, EngineError, IndexRequest, IndexResult, Limits, Probe, Verdict};
pub use linalg::{IntMatrix, LinalgError};
pub use pachner::{Invariance, MoveSpec, PachnerError, PathReport, PathStep};
pub use qnormal::{ClassDescriptor, LatticeStructure, QNormalError, QuadVector};
pub use series::{HalfInt, SeriesParseError, TruncatedSeries};
pub use surfaces::{EfficiencyReport, EfficiencyVerdict, RayInfo, SurfacesError};
pub use tetindex::TetIndexKey;
pub use tri::{GluingData, Perm4, TriError, Triangulation};
