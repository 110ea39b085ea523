//! Vertex transmissions and transmission irregular graphs.

pub mod canon;
pub mod chordal;
pub mod classify;
pub mod distance;
pub mod error;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod product;
pub mod search;
pub mod session;

pub use canon::{are_isomorphic, canonical_form};
pub use chordal::{ChordalError, ChordalPath, CoreWithPaths, WeightedCoreGraph};
pub use classify::{classify, spectrum_string, TransmissionSpectrum};
pub use distance::{all_pairs_distances, transmissions, DistanceError, DistanceMatrix, TransmissionProfile};
pub use error::GraphError;
pub use families::{build, closed_form_transmissions, ClosedFormProfile, FamilySpec};
pub use graph::Graph;
pub use graph6::{encode_graph6, parse_graph6, Graph6Code, Graph6Error};
pub use product::{cartesian_product, check_product_theorem, product_transmissions};
pub use search::{classify_stream, enumerate_cycle_chords, scan_order_conjecture, CensusReport, ChordSearchTask, Predicate};
pub use session::{parse_command, Command, Session};
