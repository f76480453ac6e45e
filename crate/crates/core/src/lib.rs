//! Non-alternating asynchronous games: construction, strategy checks,
//! closure operators, composition and correctness criteria.

pub mod asyncgraph;
pub mod concurrent;
pub mod criteria;
pub mod dot;
pub mod error;
pub mod events;
pub mod fixtures;
pub mod formula;
pub mod games;
pub mod interaction;
pub mod order;
pub mod strategies;
pub mod syntax;

pub use asyncgraph::{AsyncGraph, Edge, EdgeId, Path, StructuralReport, Tile, VertexId};
pub use concurrent::{closure_of, halting, strategy_of, ClosureOp, ClosureReport, PositionLattice};
pub use criteria::{
    clustered_scheduling_check, clusterize, directed_acyclicity_check, innocence_check, restrict_to_switching,
    scheduling_check, ClusteredPlay, CriterionReport, InnocenceReport, JumpGraph, SwitchVerdict, Switching,
};
pub use error::{Error, Result, SourceSpan};
pub use events::{Configuration, Event, EventStructure};
pub use formula::{interpret, parse_formula, Formula};
pub use games::{Env, Game, Label, Modality, Move, MoveId, Polarity, Position, Side};
pub use interaction::{
    compose, compose_closures, functoriality_check, interact, Functoriality, InteractionClass, Status,
};
pub use order::MovePartialOrder;
pub use strategies::{copycat, Check, InducedEvents, IngenuityReport, Presentation, Strategy, Witness};
