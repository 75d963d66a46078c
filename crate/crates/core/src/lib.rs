//! Exact inference over credal sets for argument schemas with uncertain
//! premises.
//!
//! The crate models arguments whose premises carry probability constraints:
//! probability-qualified conclusions are exact lower/upper conditional
//! probability intervals over the constraint-defined set of admissible
//! distributions, and categorical conclusions are detached when the lower
//! probability clears an acceptance level. On top of plain evaluation it
//! mechanizes rewriting an argument so that accepted-but-uncertain evidence
//! is replaced by its own support (with the resulting `2^k`-term
//! total-probability expansion and deviation bound), the conjunction audit
//! that exposes lottery-style acceptance failures, and interval
//! expected-utility decisions.
//!
//! Layout:
//! - [`logic`]: finite propositional worlds, formulas, model bitsets.
//! - [`credal`]: constraint-defined credal sets; exact conditional bounds
//!   via the Charnes-Cooper transformation; grid oracle for cross-checks.
//! - [`schema`]: the two argument forms, premise combination, elimination,
//!   conjunction audit.
//! - [`decision`]: interval expected utility and act selection.
//! - [`solver`]: the underlying exact rational simplex (Bland's rule).
//!
//! All arithmetic is exact rational except [`credal::CredalSet::max_entropy`],
//! which is declared approximate with a 1e-9 mass tolerance. Every value is
//! immutable after construction and every operation is pure, so concurrent
//! use needs no coordination.

pub mod credal;
pub mod decision;
pub mod logic;
mod maxent;
mod oracle;
pub mod rational;
pub mod schema;
pub mod solver;

pub use credal::{
    ConditionalBounds, Consistency, CredalError, CredalSet, Distribution, Interval, ProbStatement,
};
pub use decision::{
    choose, expected_utility_interval, Act, ChoiceRule, DecisionError, DecisionProblem,
    UtilityInterval,
};
pub use logic::{
    models, parse_formula, world_space, Atom, AtomId, Formula, ParseError, SpaceError, WorldSet,
    WorldSpace, DEFAULT_ATOM_CAP,
};
pub use oracle::world_formula;
pub use rational::{frac, int, parse_fraction, render_fraction, Fraction};
pub use schema::{
    combine_premises, conjunction_audit, eliminate, evaluate_schema_i, evaluate_schema_ii,
    expansion_terms, frechet_lower, AuditReport, EliminationReport, SchemaError, SchemaIArgument,
    SchemaIIArgument, UncertaintyPremise, Verdict,
};
