//! Termination analysis for guarded integer loops with user-controlled
//! cases and inputs.
//!
//! Programs are parsed from a small loop language ([`program`]), executed
//! and exhaustively explored on bounded boxes ([`interp`]), and analyzed by
//! size-change matrices over the min-plus semiring ([`tropical`], [`sct`]),
//! lexicographic ranking functions ([`ranking`]) and disjunctive transition
//! invariants ([`transinv`]). [`ramsey`] holds the finite Ramsey theory the
//! invariant method rests on.

use std::fmt;

use serde::Serialize;

pub mod affine;
pub mod corpus;
pub mod interp;
pub mod program;
pub mod ramsey;
pub mod ranking;
pub mod sct;
pub mod syntax;
pub mod transinv;
pub mod tropical;

pub use affine::Affine;
pub use interp::{Choice, StateBox, Strategy, Trace};
pub use program::{Case, EvalError, ParseError, Program, StateVector, UpdateRhs};
pub use ramsey::{EdgeColoring, MipResult};
pub use ranking::RankingSpec;
pub use sct::{Criterion, MeasureBasis, SctCertificate};
pub use transinv::{Disjunct, InvariantCandidate, RelAtom};
pub use tropical::{ClampBound, Entry, TropicalMatrix};

/// Outcome of a termination check. `Unknown` never means "diverges".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Terminates,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Terminates => "terminates",
            Verdict::Unknown => "unknown",
        })
    }
}
