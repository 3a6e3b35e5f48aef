//! Dual balanced presentations, AC-moves with dual bookkeeping, and the
//! combinatorial Heegaard diagrams they determine.

pub mod completing;
pub mod correspond;
pub mod diagram;
pub mod dual_pair;
pub mod error;
pub mod floer;
pub mod moves;
pub mod presentation;
pub mod search;
pub mod snf;
pub mod word;

pub use completing::{check_completing, CompletingCurveSet, CompletingReport, SurfaceCurve, Triviality};
pub use correspond::{correspond, ChangeClass, CorrespondenceReport};
pub use diagram::{build_diagram, read_dual_pair, roundtrip_check, Basepoints, CombinatorialDiagram};
pub use dual_pair::{CorrespondenceFamily, DualPair, MapKind, Violation};
pub use error::{CurveError, DiagramError, FormatError, MoveError, ParseError};
pub use floer::{domain_between, enumerate_generators, periodic_domains, FloerGenerator, MarkedPoints};
pub use moves::{apply_move, check_preconditions, inverse_move, AcMove, MoveSequence};
pub use presentation::{abelian_invariants, abelianization_matrix, occurrence_sets, BalancedPresentation, OccurrenceSets};
pub use search::{search_trivialization, SearchConfig, SearchOutcome, Step, Strategy};
pub use word::{free_reduce, Letter, Sign, Word};
