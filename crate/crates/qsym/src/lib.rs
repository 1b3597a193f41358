//! Rigidity certificates for quantum symmetries of graph C*-algebras.
//!
//! Every finite directed multigraph `Γ` has a graph C*-algebra `C*(Γ)` and a
//! universal quantum family of linear transformations acting on it — the
//! largest compact quantum group that rotates each generating partial
//! isometry `S_e` linearly while preserving the canonical state. For some
//! graphs that symmetry is as small as it can possibly be: a free product of
//! one circle per edge, each `S_e` merely rescaled by its own unitary. We
//! call such graphs *rigid*.
//!
//! This crate decides rigidity and produces checkable evidence either way:
//!
//! * [`graph`] — directed multigraphs with stable ids, and the structural
//!   requirement (R) (no simple cycle of length ≥ 2, a spanning path, no
//!   parallel edges) that characterizes when a canonical vertex ordering
//!   exists. Every check returns witnesses, not just booleans.
//! * [`certifier`] — a saturation engine over vanishing flags that proves
//!   collapse of the quantum symmetry. A `RIGID` verdict comes with a
//!   step-by-step derivation that [`certifier::replay`] re-checks from
//!   scratch; a refuted graph names the coaction that refutes it.
//! * [`action`] — exact arithmetic for linear coactions with free-circle
//!   coefficients: the diagonal rescaling action every graph admits, and the
//!   doubling action that mixes a parallel pair and breaks rigidity.
//! * [`algebra`] — normal forms in `C*(Γ)` itself: words in the generators
//!   reduce to rational combinations of `S_μ S_ν*` path monomials, giving
//!   the state, the fixed-point dimension, and relation checks.
//! * [`families`] — named example families (paths, Toeplitz-like chains,
//!   quantum lens and projective spaces, …) with their expected verdicts,
//!   plus pattern matching from a bare graph back to the registry.
//! * [`census`] — exhaustive enumeration of all 83 103 small connected
//!   multigraphs, used to cross-validate the structural and algebraic
//!   characterizations against each other.
//! * [`report`] — the JSON envelope shared by the `qsym` command-line tool.
//!
//! # Quick start
//!
//! ```
//! use qsym::certifier::{certify, CertifyOptions, Verdict};
//! use qsym::families::make_family;
//!
//! let opts = CertifyOptions::default();
//!
//! // The directed path on four vertices is rigid…
//! let path = make_family("P", &[4]).unwrap();
//! let cert = certify(&path.graph, &opts).unwrap();
//! assert_eq!(cert.verdict, Verdict::Rigid);
//!
//! // …and the derivation replays independently of the engine.
//! qsym::certifier::replay(&path.graph, &cert.steps, &opts).unwrap();
//!
//! // A doubled edge is not: the refutation names a concrete coaction.
//! let doubled = make_family("L2prime", &[]).unwrap();
//! let cert = certify(&doubled.graph, &opts).unwrap();
//! assert_eq!(cert.verdict, Verdict::NotRigidParallelEdges);
//! ```
//!
//! # Examples
//!
//! Each major capability has a runnable program under `examples/`:
//!
//! * `parse_and_dot` — read the graph file format, round-trip it, emit DOT.
//! * `property_r` — the three structural requirements, with witnesses.
//! * `canonical_form` — canonical orderings and the matrix normal form.
//! * `families_tour` — the whole registry with expected verdicts.
//! * `normal_forms` — reducing words in the generators to path monomials.
//! * `algebra_dimension` — fixed-point dimensions by exact counting.
//! * `state_and_f_matrix` — the canonical state and its density matrix.
//! * `diagonal_action` — the one-circle-per-edge rescaling coaction.
//! * `doubling_action` — the rigidity-breaking action on a parallel pair.
//! * `certify_walkthrough` — a full derivation, replayed and then tampered.
//! * `antipode_audit` — what the antipode rule contributes, family by family.
//! * `census_selfcheck` — the 83 103-graph cross-validation sweep.
//!
//! The `qsym` binary exposes the same capabilities as subcommands
//! (`check-r`, `order`, `certify`, `classify`, `nf`, `dim`, `family`,
//! `verify-action`, `emit-dot`, `selfcheck`), each with `--json` reports.

pub mod action;
pub mod algebra;
pub mod census;
pub mod certifier;
pub mod families;
pub mod graph;
pub mod report;
