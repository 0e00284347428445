//! Subsequence sums of zero-sum free sequences over finite abelian groups.
//!
//! The crate computes `Σ(S)`, the set of sums of nonempty subsequences of a
//! sequence `S`, as a bitset over a finite abelian group, certifies
//! smoothness, classifies the zero-sum free sequences with
//! `f(S) = |Σ(S)| <= 2|S| - 1`, and checks a family of structural bounds by
//! exhaustive enumeration on small groups.

pub mod classify;
pub mod enumerate;
pub mod error;
pub mod group;
pub mod lemmas;
pub mod sequence;
pub mod sumset;

pub use classify::{
    find_smooth_base, match_theorem_forms, smooth_certificate, SmoothCertificate, Verdict,
    VerdictTag,
};
pub use enumerate::{
    audit_classification, davenport_constant, enumerate_zero_sum_free, fg_table, AuditReport,
    EnumConfig, FgTableEntry,
};
pub use error::{Error, Result};
pub use group::{Element, Group, DEFAULT_ORDER_CAP};
pub use lemmas::{lemma_bound_scan, LemmaId, LemmaReport};
pub use sequence::Sequence;
pub use sumset::{f_value, is_zero_sum_free, naive_sums_oracle, subsequence_sums, SumsetMask};

/// Tool name and version, stamped on every report.
pub const VERSION: &str = concat!("zsl ", env!("CARGO_PKG_VERSION"));
