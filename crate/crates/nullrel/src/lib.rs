//! Relational theories with null values, compiled to ground answer set
//! programs.
//!
//! The pipeline mirrors Reiter's semantics of disjunctive databases: a
//! theory is a finite set of positive ground clauses over a signature whose
//! object constants are split into database constants (subject to unique
//! name axioms) and null values (exempt from them, except for explicitly
//! chosen axioms).  The [`translate`] module turns such a theory into a
//! ground program whose Herbrand stable models encode the first-order
//! models of the theory: equality is traded for an explicit `eq` predicate
//! together with equivalence and substitution rules, so models that merge
//! constants become ordinary answer sets.
//!
//! Everything the compiler produces can be checked against the [`fo`]
//! module, a brute-force first-order oracle that enumerates models of the
//! theory directly, by walking set partitions of the constants and
//! predicate extensions over the resulting quotient universes.  Models on
//! both sides are normalized to diagrams (sets of ground atoms plus ground
//! equalities), which determine an interpretation up to isomorphism.

pub mod cli;
pub mod diagrams;
pub mod fo;
mod lex;
pub mod solver;
pub mod theory;
pub mod translate;

pub use theory::{parse_theory, print_theory, required_una_pairs, Atom, Clause, ConstId, ConstKind, ParseError, PredId, Signature, TheorySpec};
