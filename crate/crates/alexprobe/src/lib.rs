//! Classify 4- and 5-point arrays in arbitrary metric spaces by the
//! spectral and combinatorial type of their associated quadratic form, and
//! probe model geometries for the types they contain.
//!
//! Pipeline, bottom to top:
//!
//! * [`metric`] — validated distance matrices, text parsing/serialization.
//! * [`forms`] — the associated quadratic form of an array, its Jacobi
//!   eigendecomposition, negative inertia, Euclidean embeddability, and
//!   coordinate realization.
//! * [`classify`] — the comparison types `PSD`, `Quadra3`/`Quadra4` (four
//!   points), `OneNegative5`/`Penta3`/`Penta4`/`Penta5` (five points), and
//!   `Degenerate` for everything the tolerances cannot decide.
//! * [`spaces`] — samplers with exact geodesic distances: Euclidean boxes,
//!   the round sphere, the hyperbolic plane, L^p planes, weighted graphs,
//!   and explicit matrices.
//! * [`search`] — type censuses over samples, margin-guided hill-climbing
//!   search for a target type, and the L^p plane scan.
//!
//! Everything is deterministic given a seed, and every batch operation
//! derives per-item seeds so results do not depend on thread count.

pub mod classify;
pub mod forms;
pub mod metric;
pub mod search;
pub mod spaces;

pub use classify::{
    classify_array, classify_quadruple, classify_quintuple, Classification, ComparisonType,
    DegenerateReason,
};
pub use forms::{associated_form, is_euclidean, realize_points, spectrum, AssociatedForm, Spectrum};
pub use metric::{parse_matrix, validate_metric, DistanceMatrix, MetricViolation};
pub use search::{census, find_type, normed_plane_scan, type_margin, Census, SearchResult, SearchTarget};
pub use spaces::{graph_metric, pairwise_distance, sample_batch, SampleBatch, Sampler, SpaceSpec};
