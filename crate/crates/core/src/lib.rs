#![no_std]
extern crate alloc;

pub mod chart;
pub mod error;
pub mod fixed;
pub mod geometry;
pub mod integer;
pub mod labelling;
pub mod pendulum;
pub mod projective;
pub mod quadrature;
pub mod rotnum;
pub mod semitoric;
pub mod sequence;
pub mod snapshot;

pub use chart::{
    classical_drift, classical_rotation, generate_family, generate_snapshot, ChartModel,
    OracleLabelling, PerturbationSpec, SystemPreset,
};
pub use error::{Error, Neighbor, Result};
pub use fixed::{
    check_unimodular_basis, label_window, seed_affine_basis, transition_between, transport_point,
    AffineBasis, AlgoConfig, WindowLabelling,
};
pub use geometry::{Matrix2, PlanckValue, Point2, PointKey, Window};
pub use integer::{AffineInt2, IntMatrix2, Label2, UnimodularMatrix2};
pub use labelling::{Labelling, LabellingKind};
pub use pendulum::pendulum_rotation;
pub use projective::{mobius_apply, projective_distance, Projective1};
pub use rotnum::{
    compare_convergence, quantum_rotation, rotation_field, semitoric_rotation_mod1,
    ConvergenceReport, QuantumRotationSample,
};
pub use semitoric::{
    detect_strips, label_from_elliptic_boundary, label_semitoric, semitoric_rebase,
    StripAssignment, StripModel,
};
pub use sequence::{
    estimate_drift, monodromy_along_path, round_to_int_matrix, track_point, uniform_label_family,
    DriftConfig, DriftEstimate, SequenceState, TrackedPoint,
};
pub use snapshot::{nearest_point, separation_radius, SpectrumFamily, SpectrumSnapshot};
