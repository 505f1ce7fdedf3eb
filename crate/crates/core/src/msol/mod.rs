//! Monadic second-order logic over display graphs: the relational structure,
//! formula syntax, the predicate library and a direct evaluator, together with
//! the checks tying each formulation to the combinatorial algorithms.

mod checks;
mod eval;
pub mod formula;
pub mod library;
mod structure;

pub use checks::*;
pub use eval::{evaluate, EvalConfig, Evaluator, Value, DEFAULT_BUDGET, LEAF_FAMILIES};
pub use formula::{Binder, Formula, Kind, Term};
pub use library::{definition, Definition};
pub use structure::{structure_from_display, structure_from_graph, MsoStructure, Sort, StructureDump, MAX_UNIVERSE};
