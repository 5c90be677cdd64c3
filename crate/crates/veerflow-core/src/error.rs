//! Error type shared by every module.

use thiserror::Error;

/// Broad error category, used for process exit codes and machine-readable reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input is well formed but violates a mathematical precondition.
    Precondition,
    /// The input could not be parsed.
    Parse,
    /// An internal invariant was breached.
    Internal,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("gluing of tetrahedron {tet} face {face} is not an involution")]
    Involution { tet: usize, face: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("malformed signature: {0}")]
    MalformedSignature(String),
    #[error("taut digit count {found} does not match tetrahedron count {expected}")]
    DigitCount { expected: usize, found: usize },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("triangulation is not orientable")]
    NotOrientable,
    #[error("not taut: {0}")]
    NotTaut(String),
    #[error("not veering: {0}")]
    NotVeering(String),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("cycle is a branch curve")]
    BranchCurve,
    #[error("class is not positive: {0}")]
    NotPositive(String),
    #[error("negative face weight {weight} on face {face}")]
    NegativeWeight { face: usize, weight: i64 },
    #[error("class is outside the dual cone")]
    NotInCone,
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("gluing conflict: {0}")]
    GluingConflict(String),
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Syntax { .. }
            | Involution { .. }
            | IndexOutOfRange(_)
            | MalformedSignature(_)
            | DigitCount { .. }
            | Json(_) => ErrorClass::Parse,
            NotOrientable
            | NotTaut(_)
            | NotVeering(_)
            | InvalidCocycle(_)
            | NotACycle
            | BranchCurve
            | NotPositive(_)
            | NegativeWeight { .. }
            | NotInCone
            | TooLarge(_) => ErrorClass::Precondition,
            DimensionMismatch(_) | GluingConflict(_) | Internal(_) => ErrorClass::Internal,
        }
    }

    /// Short stable identifier for reports.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            Syntax { .. } => "syntax",
            Involution { .. } => "involution",
            IndexOutOfRange(_) => "index_out_of_range",
            MalformedSignature(_) => "malformed_signature",
            DigitCount { .. } => "digit_count",
            Json(_) => "json",
            NotOrientable => "not_orientable",
            NotTaut(_) => "not_taut",
            NotVeering(_) => "not_veering",
            InvalidCocycle(_) => "invalid_cocycle",
            NotACycle => "not_a_cycle",
            BranchCurve => "branch_curve",
            NotPositive(_) => "not_positive",
            NegativeWeight { .. } => "negative_weight",
            NotInCone => "not_in_cone",
            TooLarge(_) => "too_large",
            DimensionMismatch(_) => "dimension_mismatch",
            GluingConflict(_) => "gluing_conflict",
            Internal(_) => "internal",
        }
    }

    /// Process exit code: 1 precondition, 3 parse, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Precondition => 1,
            ErrorClass::Parse => 3,
            ErrorClass::Internal => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_map_to_exit_codes() {
        let cases = [
            (Error::Syntax { line: 1, column: 2, message: "x".into() }, 3, "syntax"),
            (Error::DigitCount { expected: 2, found: 1 }, 3, "digit_count"),
            (Error::NotVeering("x".into()), 1, "not_veering"),
            (Error::BranchCurve, 1, "branch_curve"),
            (Error::NegativeWeight { face: 0, weight: -1 }, 1, "negative_weight"),
            (Error::Internal("x".into()), 4, "internal"),
        ];
        for (e, exit, code) in cases {
            assert_eq!((e.exit_code(), e.code()), (exit, code), "{e}");
        }
    }

    #[test]
    fn messages_carry_positions() {
        let e = Error::Syntax { line: 4, column: 7, message: "bad".into() };
        let text = e.to_string();
        assert!(text.contains('4') && text.contains('7') && text.contains("bad"), "{text}");
    }
}
