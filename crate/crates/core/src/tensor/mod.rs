//! Abstract-index tensor expressions on a flat and a curved spacetime.

pub mod canon;
pub mod constraint;
pub mod corpus;
pub mod derivative;
pub mod expr;
pub mod generalize;
pub mod index;
pub mod print;
pub mod symbol;
pub mod trace;
pub mod witness;

pub use canon::{canonical_equal, canonicalize, canonicalize_with, CanonOptions};
pub use expr::{labels, Connection, Constant, Derivative, Factor, IndexStructure, Scalar, TensorExpr, Term};
pub use index::{IndexLabel, Variance};
pub use symbol::{Side, SlotSymmetry, SymbolKind, SymmetryKind, TensorSymbol};
pub use derivative::{
    curved_commute, curved_sort, differentiate, flat_commute_sort, next_unsorted, symmetrize_at, symmetrize_dummy_pairs,
    Location,
};
pub use generalize::{generalize, wellposedness_check, Wellposedness};
pub use constraint::{apply_constraints, ConstraintRule};
pub use witness::{
    antisymmetric_f, double_divergence, flat_current_conservation, gr_witness, lorentz_expected,
    lorentz_gauge_contradiction, lorentz_gauge_rule, lorentz_start, lorentz_steps, order2_family, symmetric_defect,
    symmetric_image, symmetric_map_check, theorem_pair, LorentzReport, LorentzStep, SymmetricCheck,
};
pub use trace::{apply_op, replay, RewriteTrace, TraceOp, TraceStep, TRACE_HEADER};
pub use corpus::{corpus_examples, BUILTIN_CORPUS, load_corpus_dir, parse_corpus, run_corpus, run_entry, CorpusEntry, CorpusMode, CorpusOutcome};
