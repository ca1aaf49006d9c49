use thiserror::Error;

/// Errors raised while building or transforming polyhedra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a ball needs at least one face")]
    NoFaces,
    #[error("face `{0}` has an empty boundary word")]
    EmptyFace(String),
    #[error("face name `{0}` is declared more than once")]
    DuplicateFace(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("edge label `{label}` occurs {count} times; every label must occur exactly twice")]
    LabelCount { label: String, count: usize },
    #[error("edge label `{0}` occurs twice with the same sign")]
    Orientation(String),
    #[error("the face graph is disconnected")]
    Disconnected,
    #[error("the faces do not tile a sphere (Euler characteristic {chi}, expected 2)")]
    NotSphere { chi: i64 },
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("unknown edge label `{0}`")]
    UnknownLabel(String),
    #[error("unknown face `{0}`")]
    UnknownFace(String),
    #[error("vertex {vertex} has degree {degree}, expected 2")]
    Degree { vertex: usize, degree: usize },
    #[error("vertex {0} is the base of a loop edge")]
    Loop(usize),
    #[error("face `{0}` is paired with itself")]
    SelfPairing(String),
    #[error("faces `{a}` ({len_a} sides) and `{b}` ({len_b} sides) have different side counts")]
    SideCountMismatch {
        a: String,
        len_a: usize,
        b: String,
        len_b: usize,
    },
    #[error("face `{0}` is not paired")]
    Unpaired(String),
    #[error("face `{0}` appears in more than one pairing")]
    PairedTwice(String),
    #[error("offset {offset} is out of range for {sides}-sided faces")]
    OffsetOutOfRange { offset: usize, sides: usize },
    #[error("corner {corner} is out of range for face `{face}`")]
    CornerOutOfRange { face: String, corner: usize },
    #[error("side {side} is out of range for face `{face}`")]
    SideOutOfRange { face: String, side: usize },
    #[error("the polyhedron has needless vertices; normalize it first")]
    NotStandard,
    #[error("edge class of `{label}` has cycle {cycle}, expected 2")]
    NotCycle2 { label: String, cycle: usize },
    #[error("removing the edge class of `{0}` disconnects the graph")]
    Disconnect(String),
    #[error("removing the edge class of `{0}` would pair a face with itself")]
    SelfMerge(String),
    #[error("chord endpoints coincide (corner {0})")]
    DegenerateChord(usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("the ball has {0} faces; an identification scheme needs an even count")]
    OddFaceCount(usize),
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
