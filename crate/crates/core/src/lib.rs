//! Abstract origami: faces, adjacency and superposition relations, single-line
//! folds, Huzita-Justin fold-line rules, and composite folds modeled by
//! cutting and re-gluing creases.

pub mod classics;
pub mod engine;
pub mod geometry;
pub mod invariants;
pub mod num;
pub mod origami;
pub mod render;
pub mod rules;
pub mod script;

pub use engine::{fold, fold_bring, moving_set, unfold, EngineError, FoldRecord, FoldSpec};
pub use geometry::{GeometryError, Line, Point, Polygon, Ray, Segment, Side, EPS};
pub use origami::{
    graph_equal, AbstractOrigami, AdjacencyEdge, ConstructionTrace, CreaseKind, Face, FaceId, Graph, OrigamiError,
    SuperpositionPair, TraceStep,
};
