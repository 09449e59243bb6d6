use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("resolution {resolution} too small for {kind} (needs at least {minimum})")]
    ResolutionTooSmall {
        kind: &'static str,
        resolution: usize,
        minimum: usize,
    },

    #[error("invalid domain spec: {0}")]
    InvalidSpec(String),

    #[error("non-manifold mesh: face {face:?} is shared by {count} cells")]
    NonManifold { face: [usize; 3], count: usize },

    #[error("non-conforming mesh: {0}")]
    NonConformingMesh(String),

    #[error("markers failed validation: {0}")]
    InvalidMarkers(String),

    #[error("cochain degree {0} out of range")]
    DegreeOutOfRange(usize),

    #[error("cochain length {got} does not match {expected} entities of degree {degree}")]
    LengthMismatch {
        degree: usize,
        expected: usize,
        got: usize,
    },

    #[error("field kind does not match degree {0}")]
    FieldKindMismatch(usize),

    #[error("edge {0:?} is not an edge of the complex")]
    UnknownEdge([usize; 2]),

    #[error("face {0:?} is not a face of the complex")]
    UnknownFace([usize; 3]),

    #[error("index {index} out of range (valid: 1..={max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("solver did not converge: relative residual {residual:.3e} after {iterations} iterations")]
    SolverDiverged { residual: f64, iterations: usize },

    #[error("non-finite value in solver input")]
    NonFiniteInput,

    #[error("singular system: {0}")]
    SingularMatrix(String),

    #[error("dense problem with {size} columns exceeds the cap of {cap}")]
    MeshTooLargeForDense { size: usize, cap: usize },

    #[error("boundary edge {edge:?} joins two vertices of tunnel loop {loop_index} without belonging to it")]
    ChordViolation { loop_index: usize, edge: [usize; 2] },

    #[error("cannot classify the sides of tunnel loop {loop_index} at vertex {vertex}")]
    SideAmbiguity { loop_index: usize, vertex: usize },

    #[error("harmonic basis column {0} has nonzero boundary-edge values")]
    InconsistentBasis(usize),

    #[error("cochain does not belong to this complex: {0}")]
    MismatchedComplex(String),

    #[error("unsupported format version {found} (expected {expected})")]
    FormatVersionMismatch { found: String, expected: u32 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
