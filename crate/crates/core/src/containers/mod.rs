//! Containers: the constant schedule, the container function `f_m`,
//! saturating sets, greedy deletion, fingerprint extraction and
//! verification.

pub mod cascade;
pub mod deletion;
pub mod extraction;
pub mod fingerprint;
pub mod presets;
pub mod saturation;
pub mod schedule;
pub mod verify;

pub use cascade::{cascade, compute_container, prune_level, ContainerTrace};
pub use deletion::{
    deletion_prune, deletion_prune_with, first_violation, DeletionFailure, DeletionMethod,
    DeletionOutcome, Violation,
};
pub use extraction::{
    extract_fingerprint, BadReason, ExtractionConfig, ExtractionOutcome, Extractor, LevelRecord,
    P2Certificate, Tag,
};
pub use fingerprint::{fingerprint_size, Fingerprint, FingerprintError};
pub use saturation::{find_saturating_set, is_saturating, SaturatingSet, SaturationError};
pub use schedule::{
    derive_schedule, ConstantSchedule, ScheduleError, ScheduleMode, ScheduleOverrides,
};
pub use verify::{verify_container, verify_fingerprint, Check, VerificationReport, VerifyError};
