//! Mobility measurement: movement profiles, classical mobility indices,
//! two axiomatically grounded families of mobility measures with their
//! decompositions, inequality counterparts, and a property audit harness.
//!
//! ```
//! use mobility::{class1, MovementProfile};
//!
//! let p = MovementProfile::new(vec![10.0, 20.0, 40.0], vec![20.0, 40.0, 10.0]).unwrap();
//! let m = class1::s1(&p, 0.0).unwrap();
//! assert!((m - 0.396).abs() < 1e-3);
//! ```

pub mod axioms;
pub mod class1;
pub mod class2;
pub mod error;
pub mod inequality;
pub mod io;
pub mod legacy;
pub mod measure;
pub mod profile;
pub mod stats;
pub mod tables;

pub use class1::{Component, DecompositionResult, SubgroupPartition};
pub use class2::{DistanceConcept, PMode, WeightScheme};
pub use error::{MobilityError, Result};
pub use measure::{MeasureId, MeasureSpec};
pub use profile::{MovementProfile, StatusTransform, StatusVector, SummaryStats};
pub use stats::VarianceConvention;
