//! Deciding whether the universal linear quantum symmetry of a graph
//! C*-algebra collapses to independent circle rotations.
//!
//! The engine works on the matrix `Q = (q_{ef}* q_{ef})` of self-adjoint
//! coefficients attached to a linear action `α(S_e) = Σ_f S_f ⊗ q_{fe}` that
//! preserves the canonical state. Two kinds of facts are tracked in a
//! [`FlagMatrix`]: `ZERO(e,f)` — the off-diagonal entry `Q_{ef}` vanishes in
//! the universal object — and `ONE(e)` — the diagonal entry is the unit.
//! Diagonal entries can never vanish (the componentwise rotation action
//! witnesses `q_{ee} ≠ 0`), and the rules below preserve that invariant by
//! construction.
//!
//! [`saturate`] applies seven deduction rules round-robin until a fixed
//! point, recording a replayable [`Step`] for every state change.
//! [`certify`] turns the fixed point into a [`Certificate`]: `RIGID` when
//! every off-diagonal entry is flagged zero (the symmetry is the free
//! product of one circle per edge), `NOT_RIGID_PARALLEL_EDGES` when a
//! verified doubling action refutes rigidity outright, `KNOWN_LARGER` for
//! the two adjacency patterns whose symmetry is a known strictly larger
//! quantum group, and `INCONCLUSIVE` otherwise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::action::{doubling_action, verify_action, ActionSpec};
use crate::graph::{
    adjacency_matrix, canonical_ordering_with_path, DirectedMultigraph, EdgeId, VertexId,
};

/// Default bound on how many unit-partition selectors are enumerated.
pub const DEFAULT_SELECTOR_CAP: usize = 100_000;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("graph is not connected (vertex `{0}` touches no edge)")]
    NotConnected(String),
    #[error("soundness fault in rule `{rule}`: {detail}")]
    SoundnessFault { rule: String, detail: String },
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("step {step}: unknown identifier `{id}`")]
    UnknownId { step: usize, id: String },
    #[error("step {step} does not replay: {detail}")]
    Mismatch { step: usize, detail: String },
}

// --- verdicts and flags ---------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Verdict {
    #[serde(rename = "RIGID")]
    Rigid,
    #[serde(rename = "NOT_RIGID_PARALLEL_EDGES")]
    NotRigidParallelEdges,
    #[serde(rename = "KNOWN_LARGER")]
    KnownLarger,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Rigid => "RIGID",
            Verdict::NotRigidParallelEdges => "NOT_RIGID_PARALLEL_EDGES",
            Verdict::KnownLarger => "KNOWN_LARGER",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// A single certified fact, in edge-id form for serialization and replay.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
#[serde(tag = "flag", rename_all = "snake_case")]
pub enum Flag {
    /// `Q_{row,col} = 0` (always off-diagonal).
    Zero { row: EdgeId, col: EdgeId },
    /// `Q_{edge,edge} = 1`.
    One { edge: EdgeId },
}

/// Index form of a [`Flag`], used internally by the engine.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum FlagIx {
    Zero(usize, usize),
    One(usize),
}

/// Known entries of the coefficient matrix `Q`. Off-diagonal entries can be
/// flagged zero; diagonal entries can be flagged one; nothing else is
/// representable, which keeps every reachable state diagonally sound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlagMatrix {
    m: usize,
    zero: Vec<bool>,
    one: Vec<bool>,
}

impl FlagMatrix {
    pub fn new(edge_count: usize) -> Self {
        FlagMatrix {
            m: edge_count,
            zero: vec![false; edge_count * edge_count],
            one: vec![false; edge_count],
        }
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Is `Q_{i,j}` flagged zero? Diagonal queries always answer `false`.
    pub fn is_zero(&self, i: usize, j: usize) -> bool {
        i != j && self.zero[i * self.m + j]
    }

    pub fn is_one(&self, i: usize) -> bool {
        self.one[i]
    }

    fn set_zero(&mut self, i: usize, j: usize) -> bool {
        assert_ne!(i, j, "diagonal entries of Q never vanish");
        let cell = &mut self.zero[i * self.m + j];
        let new = !*cell;
        *cell = true;
        new
    }

    fn set_one(&mut self, i: usize) -> bool {
        let new = !self.one[i];
        self.one[i] = true;
        new
    }

    fn is_set(&self, f: FlagIx) -> bool {
        match f {
            FlagIx::Zero(i, j) => self.is_zero(i, j),
            FlagIx::One(i) => self.is_one(i),
        }
    }

    fn set(&mut self, f: FlagIx) -> bool {
        match f {
            FlagIx::Zero(i, j) => self.set_zero(i, j),
            FlagIx::One(i) => self.set_one(i),
        }
    }

    pub fn all_offdiagonal_zero(&self) -> bool {
        (0..self.m).all(|i| (0..self.m).all(|j| i == j || self.is_zero(i, j)))
    }

    /// Off-diagonal pairs still unknown, in row-major order.
    pub fn unknown_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in 0..self.m {
                if i != j && !self.is_zero(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn known_count(&self) -> usize {
        self.zero.iter().filter(|&&b| b).count() + self.one.iter().filter(|&&b| b).count()
    }
}

// --- rule applications ------------------------------------------------------------

/// One choice of in-edge per vertex that has in-edges; vertices without
/// in-edges (at most one) contribute through their fan-out instead.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct Selector {
    pub chosen: BTreeMap<VertexId, EdgeId>,
    pub out_expanded: Vec<VertexId>,
}

/// A rule instance, with enough parameters to re-derive its conclusions.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RuleApp {
    /// Row `e` vanishes against the fan-out of `r(h)`.
    FanoutZero { h: EdgeId, e: EdgeId },
    /// `r(e)` is a sink, `r(h)` is not: column `h` vanishes on `r(e)`'s in-edges.
    SinkZero { h: EdgeId, e: EdgeId },
    /// Loop at `s(e)`: a known zero at `(e,h)` spreads over the fan-out of `r(h)`.
    LoopTransferForward { e: EdgeId, h: EdgeId },
    /// Loop at `s(e)`: zeros on the whole fan-out of `r(h)` pull back to `(e,h)`.
    LoopTransferBackward { e: EdgeId, h: EdgeId },
    /// Transpose of a known zero.
    Antipode { row: EdgeId, col: EdgeId },
    /// A fully vanishing off-diagonal row forces a unit diagonal.
    RowUnitarityOne { edge: EdgeId },
    /// A unit diagonal forces the whole off-diagonal row to vanish.
    RowUnitarityZeros { edge: EdgeId },
    /// `left` and `right` share their range: in-flow columns balance at `vertex`.
    RangeBalance { left: EdgeId, right: EdgeId, vertex: VertexId },
    /// The unit resolution along a selector, read at `vertex`.
    PartitionUnit { selector: Selector, vertex: VertexId },
}

impl RuleApp {
    pub fn rule_name(&self) -> &'static str {
        match self {
            RuleApp::FanoutZero { .. } => "fanout_zero",
            RuleApp::SinkZero { .. } => "sink_zero",
            RuleApp::LoopTransferForward { .. } | RuleApp::LoopTransferBackward { .. } => {
                "loop_transfer"
            }
            RuleApp::Antipode { .. } => "antipode",
            RuleApp::RowUnitarityOne { .. } | RuleApp::RowUnitarityZeros { .. } => "row_unitarity",
            RuleApp::RangeBalance { .. } => "range_balance",
            RuleApp::PartitionUnit { .. } => "partition_unit",
        }
    }

    fn justification(&self) -> &'static str {
        match self {
            RuleApp::FanoutZero { .. } => {
                "expanding the source projection of e over its in-edges kills every \
                 coefficient pairing e with the fan-out of r(h)"
            }
            RuleApp::SinkZero { .. } => {
                "e ends at a sink, so its range projection cannot meet the fan-out of r(h)"
            }
            RuleApp::LoopTransferForward { .. } => {
                "the loop at s(e) ties the coefficient at h to the fan-out of r(h): \
                 the known zero transfers forward"
            }
            RuleApp::LoopTransferBackward { .. } => {
                "the loop at s(e) ties the coefficient at h to the fan-out of r(h): \
                 the zeros transfer back"
            }
            RuleApp::Antipode { .. } => "the antipode transposes vanishing coefficients",
            RuleApp::RowUnitarityOne { .. } => {
                "each row of the coefficient matrix sums to one: a fully vanishing \
                 off-diagonal row forces a unit diagonal"
            }
            RuleApp::RowUnitarityZeros { .. } => {
                "each row of the coefficient matrix sums to one: a unit diagonal \
                 forces the off-diagonal row to vanish"
            }
            RuleApp::RangeBalance { .. } => {
                "the two edges share a range projection, so their in-flow columns \
                 balance at every vertex"
            }
            RuleApp::PartitionUnit { .. } => {
                "the vertex projections resolve the identity; flagged zeros collapse \
                 the expansion"
            }
        }
    }
}

/// One state-changing rule firing: the flags it consumed as hypotheses and
/// the strictly new flags it produced.
#[derive(Clone, Debug, Serialize)]
pub struct Step {
    #[serde(flatten)]
    pub rule: RuleApp,
    pub consumed: Vec<Flag>,
    pub produced: Vec<Flag>,
    pub justification: String,
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    /// Allow the antipode (transposition) rule.
    pub use_antipode: bool,
    /// Cap on enumerated unit-partition selectors.
    pub selector_cap: usize,
    /// Record a full derivation (disable for bulk sweeps).
    pub record_trace: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            use_antipode: true,
            selector_cap: DEFAULT_SELECTOR_CAP,
            record_trace: true,
        }
    }
}

/// Outcome of running the rules to a fixed point.
#[derive(Clone, Debug)]
pub struct SaturationResult {
    pub flags: FlagMatrix,
    pub steps: Vec<Step>,
    pub notes: Vec<String>,
    pub rules_used: BTreeSet<String>,
    /// Total state changes; monotonicity bounds this by `|E|² + |E|`.
    pub changes: usize,
    /// Off-diagonal entries forced to be unit by some partition instance.
    /// Nonempty only on inconsistent inputs; it blocks a RIGID verdict.
    pub forced_unitary: Vec<(EdgeId, EdgeId)>,
}

/// The final answer: a verdict plus the evidence backing it.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub rules_used: BTreeSet<String>,
    pub steps: Vec<Step>,
    /// Off-diagonal pairs still unknown at the fixed point.
    pub residual_pairs: Vec<(EdgeId, EdgeId)>,
    /// Named mathematical objects identifying the symmetry, when known.
    pub citations: Vec<String>,
    /// The verified refuting action, for parallel-edge graphs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionSpec>,
    pub notes: Vec<String>,
}

// --- rule evaluation ----------------------------------------------------------------

/// Reusable buffers for evaluating one rule instance.
#[derive(Default)]
struct Scratch {
    consumed: Vec<FlagIx>,
    produced: Vec<FlagIx>,
    survivors: Vec<(usize, usize)>,
    colmark: Vec<bool>,
}

impl Scratch {
    fn clear(&mut self) {
        self.consumed.clear();
        self.produced.clear();
        self.survivors.clear();
    }
}

enum Eval {
    NotApplicable,
    Applicable,
    /// The instance's hypotheses hold but its conclusion would be
    /// inconsistent. Unreachable from sound states; kept as defense.
    Fault(String),
}

/// Fan-out rule. Hypotheses: `r(h)` is not a sink; every in-edge `g` of
/// `s(e)` has `ZERO(g,h)` (vacuously if there are none). Conclusion:
/// `ZERO(e,f)` for every `f` with `s(f) = r(h)`.
///
/// Diagonal safety: a target `f = e` would mean `s(e) = r(h)`, putting `h`
/// among the in-edges of `s(e)` and demanding the unsatisfiable `ZERO(h,h)`.
fn eval_fanout(
    g: &DirectedMultigraph,
    flags: &FlagMatrix,
    h: usize,
    e: usize,
    s: &mut Scratch,
) -> Eval {
    s.clear();
    let targets = g.out_edge_indices(g.range_index(h));
    if targets.is_empty() {
        return Eval::NotApplicable;
    }
    for &p in g.in_edge_indices(g.source_index(e)) {
        if !flags.is_zero(p, h) {
            return Eval::NotApplicable;
        }
        s.consumed.push(FlagIx::Zero(p, h));
    }
    for &f in targets {
        debug_assert_ne!(f, e, "fan-out rule reached a diagonal entry");
        s.produced.push(FlagIx::Zero(e, f));
    }
    Eval::Applicable
}

/// Sink rule. Hypotheses: `r(h)` is not a sink, `r(e)` is. Conclusion:
/// `ZERO(g,h)` for every `g` with `r(g) = r(e)` (including `e` itself).
///
/// Diagonal safety: `g = h` would force `r(h) = r(e)`, contradicting the
/// two hypotheses.
fn eval_sink(
    g: &DirectedMultigraph,
    flags: &FlagMatrix,
    h: usize,
    e: usize,
    s: &mut Scratch,
) -> Eval {
    s.clear();
    let _ = flags;
    if g.out_edge_indices(g.range_index(h)).is_empty() {
        return Eval::NotApplicable;
    }
    if !g.out_edge_indices(g.range_index(e)).is_empty() {
        return Eval::NotApplicable;
    }
    for &gg in g.in_edge_indices(g.range_index(e)) {
        debug_assert_ne!(gg, h, "sink rule reached a diagonal entry");
        s.produced.push(FlagIx::Zero(gg, h));
    }
    if s.produced.is_empty() {
        return Eval::NotApplicable;
    }
    Eval::Applicable
}

/// Loop-transfer rule. Hypotheses: `e` is a loop whose companion in-edges at
/// `s(e)` (all in-edges besides `e` itself) are flagged zero against `h`,
/// and `r(h)` is not a sink. The coefficients `Q_{e,h}` and
/// `{Q_{e,f} : s(f) = r(h)}` then vanish together; `forward` spreads a known
/// zero at `(e,h)` over the fan-out, `backward` pulls fan-out zeros back.
///
/// Diagonal safety: if `e` itself lies in the fan-out of `r(h)` then `h` is
/// a companion in-edge at `s(e)` and the companion hypothesis would demand
/// `ZERO(h,h)`; the forward fault branch is therefore unreachable.
fn eval_loop(
    g: &DirectedMultigraph,
    flags: &FlagMatrix,
    e: usize,
    h: usize,
    forward: bool,
    s: &mut Scratch,
) -> Eval {
    s.clear();
    if !g.is_loop(e) || h == e {
        return Eval::NotApplicable;
    }
    let targets = g.out_edge_indices(g.range_index(h));
    if targets.is_empty() {
        return Eval::NotApplicable;
    }
    for &p in g.in_edge_indices(g.source_index(e)) {
        if p == e {
            continue;
        }
        if !flags.is_zero(p, h) {
            return Eval::NotApplicable;
        }
        s.consumed.push(FlagIx::Zero(p, h));
    }
    let e_in_targets = targets.contains(&e);
    if forward {
        if !flags.is_zero(e, h) {
            return Eval::NotApplicable;
        }
        if e_in_targets {
            return Eval::Fault(format!(
                "loop transfer would zero the diagonal at edge index {e}"
            ));
        }
        s.consumed.push(FlagIx::Zero(e, h));
        for &f in targets {
            s.produced.push(FlagIx::Zero(e, f));
        }
    } else {
        if e_in_targets {
            return Eval::NotApplicable;
        }
        for &f in targets {
            if !flags.is_zero(e, f) {
                return Eval::NotApplicable;
            }
            s.consumed.push(FlagIx::Zero(e, f));
        }
        s.produced.push(FlagIx::Zero(e, h));
    }
    Eval::Applicable
}

fn eval_antipode(flags: &FlagMatrix, i: usize, j: usize, s: &mut Scratch) -> Eval {
    s.clear();
    if i == j || !flags.is_zero(i, j) {
        return Eval::NotApplicable;
    }
    s.consumed.push(FlagIx::Zero(i, j));
    s.produced.push(FlagIx::Zero(j, i));
    Eval::Applicable
}

fn eval_unitarity_one(flags: &FlagMatrix, e: usize, s: &mut Scratch) -> Eval {
    s.clear();
    for k in 0..flags.edge_count() {
        if k == e {
            continue;
        }
        if !flags.is_zero(e, k) {
            return Eval::NotApplicable;
        }
        s.consumed.push(FlagIx::Zero(e, k));
    }
    s.produced.push(FlagIx::One(e));
    Eval::Applicable
}

fn eval_unitarity_zeros(flags: &FlagMatrix, e: usize, s: &mut Scratch) -> Eval {
    s.clear();
    if !flags.is_one(e) {
        return Eval::NotApplicable;
    }
    s.consumed.push(FlagIx::One(e));
    for k in 0..flags.edge_count() {
        if k != e {
            s.produced.push(FlagIx::Zero(e, k));
        }
    }
    if s.produced.is_empty() {
        return Eval::NotApplicable;
    }
    Eval::Applicable
}

/// Balance rule, concluding on the `right` column. Hypotheses: `left` and
/// `right` share a range, `w` is a different vertex, and every in-edge `g`
/// of `w` has `ZERO(g,left)`. Conclusion: `ZERO(g,right)` for those `g`.
///
/// Diagonal safety: `r(g) = w ≠ r(right)` forces `g ≠ right`.
fn eval_balance(
    g: &DirectedMultigraph,
    flags: &FlagMatrix,
    left: usize,
    right: usize,
    w: usize,
    s: &mut Scratch,
) -> Eval {
    s.clear();
    if left == right || g.range_index(left) != g.range_index(right) {
        return Eval::NotApplicable;
    }
    if w == g.range_index(left) {
        return Eval::NotApplicable;
    }
    let rows = g.in_edge_indices(w);
    if rows.is_empty() {
        return Eval::NotApplicable;
    }
    for &gg in rows {
        if !flags.is_zero(gg, left) {
            return Eval::NotApplicable;
        }
        s.consumed.push(FlagIx::Zero(gg, left));
    }
    for &gg in rows {
        debug_assert_ne!(gg, right, "balance rule reached a diagonal entry");
        s.produced.push(FlagIx::Zero(gg, right));
    }
    Eval::Applicable
}

enum PartitionEval {
    NotApplicable,
    Applicable,
    /// A single off-diagonal summand survives, forcing it to be unit.
    /// Structurally unreachable (the diagonal summand at the selected
    /// in-edge of the vertex always survives); kept as defense.
    ForcedUnitary(usize, usize),
    /// The surviving summands force a diagonal zero. Also structurally
    /// unreachable, for the same reason.
    Fault(String),
}

/// Unit-partition rule at vertex `u` under selector `sel` (chosen in-edge
/// index per vertex, `None` for in-edge-free vertices). The identity
/// `Σ_{g: r(g)=u} Σ_{v} Q_{g, sel(v)} = 1` drops its zero-flagged summands:
///
/// * a single surviving diagonal summand yields `ONE`;
/// * survivors confined to one row subtract from that row's unit sum,
///   zeroing every column outside the survivors.
fn eval_partition(
    g: &DirectedMultigraph,
    flags: &FlagMatrix,
    sel: &[Option<usize>],
    u: usize,
    s: &mut Scratch,
) -> PartitionEval {
    s.clear();
    if sel[u].is_none() {
        return PartitionEval::NotApplicable;
    }
    for &gg in g.in_edge_indices(u) {
        for chosen in sel.iter().flatten() {
            let k = *chosen;
            if gg == k {
                s.survivors.push((gg, gg));
            } else if flags.is_zero(gg, k) {
                s.consumed.push(FlagIx::Zero(gg, k));
            } else {
                s.survivors.push((gg, k));
            }
        }
    }
    match s.survivors.as_slice() {
        [] => PartitionEval::Fault(format!(
            "unit partition at vertex index {u} dropped every summand"
        )),
        [(gg, k)] if gg == k => {
            s.produced.push(FlagIx::One(*gg));
            PartitionEval::Applicable
        }
        [(gg, k)] => PartitionEval::ForcedUnitary(*gg, *k),
        rest => {
            let row = rest[0].0;
            if !rest.iter().all(|&(r, _)| r == row) {
                return PartitionEval::NotApplicable;
            }
            if !rest.iter().any(|&(r, c)| r == c) {
                return PartitionEval::Fault(format!(
                    "unit partition at vertex index {u} forces a diagonal zero in row {row}"
                ));
            }
            let m = flags.edge_count();
            s.colmark.clear();
            s.colmark.resize(m, false);
            for &(_, c) in rest.iter() {
                s.colmark[c] = true;
            }
            for k in 0..m {
                if k != row && !s.colmark[k] {
                    s.produced.push(FlagIx::Zero(row, k));
                }
            }
            if s.produced.is_empty() {
                PartitionEval::NotApplicable
            } else {
                PartitionEval::Applicable
            }
        }
    }
}

// --- selector enumeration -------------------------------------------------------------

/// Enumerate unit-partition selectors: one in-edge per vertex that has any.
/// Graphs with two or more in-edge-free vertices yield none (their unit
/// resolution mixes rows beyond what the rule reads). When the graph admits
/// a canonical ordering, the selector following its spanning path comes
/// first; the rest follow in declaration order, up to `cap`.
fn enumerate_selectors(
    g: &DirectedMultigraph,
    cap: usize,
) -> (Vec<Vec<Option<usize>>>, Vec<String>) {
    let n = g.vertex_count();
    let no_in: Vec<usize> = (0..n).filter(|&v| g.in_edge_indices(v).is_empty()).collect();
    let mut notes = Vec::new();
    if no_in.len() >= 2 {
        let names: Vec<&str> = no_in.iter().map(|&v| g.vertex_ids()[v].as_str()).collect();
        notes.push(format!(
            "no unit-partition selectors: vertices {} have no in-edges",
            names.join(", ")
        ));
        return (Vec::new(), notes);
    }

    let mut sels: Vec<Vec<Option<usize>>> = Vec::new();
    if let Some((order, path)) = canonical_ordering_with_path(g) {
        let mut sel = vec![None; n];
        for (i, eid) in path.edge_ids().iter().enumerate() {
            let v = g.vertex_index(&order[i + 1]).expect("ordering vertex");
            sel[v] = Some(g.edge_index(eid).expect("path edge"));
        }
        let first = g.vertex_index(&order[0]).expect("ordering vertex");
        if let Some(&h) = g.in_edge_indices(first).first() {
            sel[first] = Some(h);
        }
        sels.push(sel);
    }

    let choosers: Vec<usize> = (0..n).filter(|&v| !g.in_edge_indices(v).is_empty()).collect();
    let mut idx = vec![0usize; choosers.len()];
    let mut capped = false;
    'outer: loop {
        let mut sel = vec![None; n];
        for (ci, &v) in choosers.iter().enumerate() {
            sel[v] = Some(g.in_edge_indices(v)[idx[ci]]);
        }
        // The only possible duplicate is the canonical selector up front.
        if sels.first() != Some(&sel) {
            if sels.len() >= cap {
                capped = true;
                break;
            }
            sels.push(sel);
        }
        let mut k = choosers.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < g.in_edge_indices(choosers[k]).len() {
                break;
            }
            idx[k] = 0;
        }
    }
    if capped {
        notes.push(format!("selector enumeration capped at {cap}"));
    }
    (sels, notes)
}

fn selector_to_public(g: &DirectedMultigraph, sel: &[Option<usize>]) -> Selector {
    let mut chosen = BTreeMap::new();
    let mut out_expanded = Vec::new();
    for (v, choice) in sel.iter().enumerate() {
        match choice {
            Some(e) => {
                chosen.insert(g.vertex_ids()[v].clone(), g.edges()[*e].id.clone());
            }
            None => out_expanded.push(g.vertex_ids()[v].clone()),
        }
    }
    Selector { chosen, out_expanded }
}

// --- the saturation driver ---------------------------------------------------------------

struct Sat<'g> {
    g: &'g DirectedMultigraph,
    m: usize,
    n: usize,
    flags: FlagMatrix,
    opts: CertifyOptions,
    steps: Vec<Step>,
    notes: Vec<String>,
    rules_used: BTreeSet<&'static str>,
    forced_unitary: BTreeSet<(usize, usize)>,
    changes: usize,
}

impl<'g> Sat<'g> {
    fn new(g: &'g DirectedMultigraph, opts: CertifyOptions) -> Self {
        Sat {
            g,
            m: g.edge_count(),
            n: g.vertex_count(),
            flags: FlagMatrix::new(g.edge_count()),
            opts,
            steps: Vec::new(),
            notes: Vec::new(),
            rules_used: BTreeSet::new(),
            forced_unitary: BTreeSet::new(),
            changes: 0,
        }
    }

    fn flag_to_public(&self, f: FlagIx) -> Flag {
        match f {
            FlagIx::Zero(i, j) => Flag::Zero {
                row: self.g.edges()[i].id.clone(),
                col: self.g.edges()[j].id.clone(),
            },
            FlagIx::One(i) => Flag::One { edge: self.g.edges()[i].id.clone() },
        }
    }

    /// Apply an applicable instance if it yields anything new. Returns
    /// whether the state changed.
    fn fire(&mut self, s: &Scratch, mk_rule: impl FnOnce(&Self) -> RuleApp) -> bool {
        if s.produced.iter().all(|&f| self.flags.is_set(f)) {
            return false;
        }
        let mut produced = Vec::new();
        for &f in &s.produced {
            if self.flags.set(f) {
                self.changes += 1;
                if self.opts.record_trace {
                    produced.push(self.flag_to_public(f));
                }
            }
        }
        let rule = mk_rule(self);
        self.rules_used.insert(rule.rule_name());
        if self.opts.record_trace {
            let consumed = s.consumed.iter().map(|&f| self.flag_to_public(f)).collect();
            let justification = rule.justification().to_owned();
            self.steps.push(Step { rule, consumed, produced, justification });
        }
        true
    }

    fn eid(&self, i: usize) -> EdgeId {
        self.g.edges()[i].id.clone()
    }
    fn vid(&self, v: usize) -> VertexId {
        self.g.vertex_ids()[v].clone()
    }

    fn pass(
        &mut self,
        selectors: &[Vec<Option<usize>>],
        s: &mut Scratch,
    ) -> Result<bool, CertifyError> {
        let mut changed = false;

        // 1. fan-out rule
        for h in 0..self.m {
            for e in 0..self.m {
                if let Eval::Applicable = eval_fanout(self.g, &self.flags, h, e, s) {
                    changed |= self.fire(s, |me| RuleApp::FanoutZero {
                        h: me.eid(h),
                        e: me.eid(e),
                    });
                }
            }
        }

        // 2. sink rule
        for h in 0..self.m {
            for e in 0..self.m {
                if let Eval::Applicable = eval_sink(self.g, &self.flags, h, e, s) {
                    changed |= self.fire(s, |me| RuleApp::SinkZero {
                        h: me.eid(h),
                        e: me.eid(e),
                    });
                }
            }
        }

        // 3. loop transfer, both directions
        for e in 0..self.m {
            if !self.g.is_loop(e) {
                continue;
            }
            for h in 0..self.m {
                if h == e {
                    continue;
                }
                match eval_loop(self.g, &self.flags, e, h, true, s) {
                    Eval::Applicable => {
                        changed |= self.fire(s, |me| RuleApp::LoopTransferForward {
                            e: me.eid(e),
                            h: me.eid(h),
                        });
                    }
                    Eval::Fault(detail) => {
                        return Err(CertifyError::SoundnessFault {
                            rule: "loop_transfer".to_owned(),
                            detail,
                        })
                    }
                    Eval::NotApplicable => {}
                }
                if let Eval::Applicable = eval_loop(self.g, &self.flags, e, h, false, s) {
                    changed |= self.fire(s, |me| RuleApp::LoopTransferBackward {
                        e: me.eid(e),
                        h: me.eid(h),
                    });
                }
            }
        }

        // 4. antipode
        if self.opts.use_antipode {
            for i in 0..self.m {
                for j in 0..self.m {
                    if i == j {
                        continue;
                    }
                    if let Eval::Applicable = eval_antipode(&self.flags, i, j, s) {
                        changed |= self.fire(s, |me| RuleApp::Antipode {
                            row: me.eid(i),
                            col: me.eid(j),
                        });
                    }
                }
            }
        }

        // 5. row unitarity, both directions
        for e in 0..self.m {
            if self.flags.is_one(e) {
                continue;
            }
            if let Eval::Applicable = eval_unitarity_one(&self.flags, e, s) {
                changed |= self.fire(s, |me| RuleApp::RowUnitarityOne { edge: me.eid(e) });
            }
        }
        for e in 0..self.m {
            if let Eval::Applicable = eval_unitarity_zeros(&self.flags, e, s) {
                changed |= self.fire(s, |me| RuleApp::RowUnitarityZeros { edge: me.eid(e) });
            }
        }

        // 6. range balance
        for left in 0..self.m {
            for right in 0..self.m {
                if left == right || self.g.range_index(left) != self.g.range_index(right) {
                    continue;
                }
                for w in 0..self.n {
                    if let Eval::Applicable = eval_balance(self.g, &self.flags, left, right, w, s)
                    {
                        changed |= self.fire(s, |me| RuleApp::RangeBalance {
                            left: me.eid(left),
                            right: me.eid(right),
                            vertex: me.vid(w),
                        });
                    }
                }
            }
        }

        // 7. unit partition
        for sel in selectors {
            for u in 0..self.n {
                match eval_partition(self.g, &self.flags, sel, u, s) {
                    PartitionEval::Applicable => {
                        changed |= self.fire(s, |me| RuleApp::PartitionUnit {
                            selector: selector_to_public(me.g, sel),
                            vertex: me.vid(u),
                        });
                    }
                    PartitionEval::ForcedUnitary(gg, k) => {
                        if self.forced_unitary.insert((gg, k)) {
                            self.rules_used.insert("partition_unit");
                            self.notes.push(format!(
                                "unit partition at vertex {} leaves the single off-diagonal \
                                 term Q[{},{}], forcing it to be unit; a RIGID verdict is \
                                 excluded",
                                self.vid(u),
                                self.eid(gg),
                                self.eid(k)
                            ));
                        }
                    }
                    PartitionEval::Fault(detail) => {
                        return Err(CertifyError::SoundnessFault {
                            rule: "partition_unit".to_owned(),
                            detail,
                        })
                    }
                    PartitionEval::NotApplicable => {}
                }
            }
        }

        Ok(changed)
    }

    fn run(&mut self) -> Result<(), CertifyError> {
        let (selectors, notes) = enumerate_selectors(self.g, self.opts.selector_cap);
        self.notes.extend(notes);
        let budget = self.m * self.m + self.m;
        let mut s = Scratch::default();
        loop {
            let changed = self.pass(&selectors, &mut s)?;
            if self.changes > budget {
                return Err(CertifyError::Internal(format!(
                    "saturation exceeded the monotone budget of {budget} changes"
                )));
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

/// Run every rule to a fixed point from the all-unknown state.
pub fn saturate(
    g: &DirectedMultigraph,
    opts: &CertifyOptions,
) -> Result<SaturationResult, CertifyError> {
    let mut sat = Sat::new(g, *opts);
    sat.run()?;
    let forced_unitary = sat
        .forced_unitary
        .iter()
        .map(|&(i, j)| (sat.g.edges()[i].id.clone(), sat.g.edges()[j].id.clone()))
        .collect();
    Ok(SaturationResult {
        flags: sat.flags,
        steps: sat.steps,
        notes: sat.notes,
        rules_used: sat.rules_used.iter().map(|s| (*s).to_owned()).collect(),
        changes: sat.changes,
        forced_unitary,
    })
}

// --- certification -------------------------------------------------------------------------

const CITE_FREE_CIRCLES: &str =
    "free product of one circle per edge, C(S¹) ∗ ⋯ ∗ C(S¹), under independent rotations";
const CITE_DOUBLED_FREE_PRODUCT: &str =
    "𝒟_φ(C(S¹) ∗ C(S¹)) — the two-circle free product doubled along the generator swap \
     φ(z₁) = z₂";
const CITE_HYPEROCTAHEDRAL: &str = "H₂^{∞+}";

/// Does the adjacency matrix equal `target` after some relabeling of the
/// two vertices?
fn adjacency_matches_2x2(g: &DirectedMultigraph, target: [[u32; 2]; 2]) -> bool {
    if g.vertex_count() != 2 {
        return false;
    }
    let ids = g.vertex_ids();
    for perm in [[0usize, 1], [1, 0]] {
        let order = vec![ids[perm[0]].clone(), ids[perm[1]].clone()];
        let adj = adjacency_matrix(g, &order).expect("vertex permutation");
        if adj.entries == [vec![target[0][0], target[0][1]], vec![target[1][0], target[1][1]]] {
            return true;
        }
    }
    false
}

/// Decide the rigidity verdict for a connected graph.
///
/// 1. Any pair of parallel edges refutes rigidity outright: the doubling
///    action is built and verified, and the certificate embeds it.
/// 2. Otherwise the rules are saturated. A complete off-diagonal zero
///    pattern certifies `RIGID` with a replayable derivation.
/// 3. An incomplete pattern matching the 2-cycle or the two-loop adjacency
///    yields `KNOWN_LARGER` with the identified symmetry.
/// 4. Anything else is `INCONCLUSIVE`, listing the unresolved pairs.
pub fn certify(
    g: &DirectedMultigraph,
    opts: &CertifyOptions,
) -> Result<Certificate, CertifyError> {
    if let Some(v) = g.isolated_vertex() {
        return Err(CertifyError::NotConnected(v.as_str().to_owned()));
    }

    if let Some((e1, e2)) = g.first_parallel_pair() {
        let spec = doubling_action(g, &e1, &e2).expect("validated parallel pair");
        let report =
            verify_action(g, &spec).map_err(|err| CertifyError::Internal(err.to_string()))?;
        if !report.passed {
            let failing: Vec<String> = report
                .checks
                .iter()
                .filter(|c| !c.ok)
                .map(|c| c.relation.clone())
                .collect();
            return Err(CertifyError::SoundnessFault {
                rule: "doubling_action".to_owned(),
                detail: format!("doubling action failed verification: {}", failing.join("; ")),
            });
        }
        return Ok(Certificate {
            verdict: Verdict::NotRigidParallelEdges,
            rules_used: BTreeSet::new(),
            steps: Vec::new(),
            residual_pairs: Vec::new(),
            citations: Vec::new(),
            action: Some(spec),
            notes: vec![format!(
                "edges {e1} and {e2} are parallel: the verified doubling action permutes \
                 them, a symmetry no family of independent circle rotations contains"
            )],
        });
    }

    let sat = saturate(g, opts)?;
    let mut notes = sat.notes.clone();

    if sat.flags.all_offdiagonal_zero() {
        if !sat.forced_unitary.is_empty() {
            return Err(CertifyError::SoundnessFault {
                rule: "partition_unit".to_owned(),
                detail: "complete zero pattern coexists with a forced off-diagonal unit"
                    .to_owned(),
            });
        }
        notes.push(format!(
            "every off-diagonal coefficient vanishes: the universal linear quantum \
             symmetry is the free product of {} circles",
            g.edge_count()
        ));
        return Ok(Certificate {
            verdict: Verdict::Rigid,
            rules_used: sat.rules_used,
            steps: sat.steps,
            residual_pairs: Vec::new(),
            citations: vec![CITE_FREE_CIRCLES.to_owned()],
            action: None,
            notes,
        });
    }

    let residual_pairs: Vec<(EdgeId, EdgeId)> = sat
        .flags
        .unknown_pairs()
        .into_iter()
        .map(|(i, j)| (g.edges()[i].id.clone(), g.edges()[j].id.clone()))
        .collect();

    if adjacency_matches_2x2(g, [[0, 1], [1, 0]]) {
        notes.push(
            "the 2-cycle adjacency pattern identifies the symmetry as the doubled free \
             product of two circles, strictly larger than the free product itself"
                .to_owned(),
        );
        return Ok(Certificate {
            verdict: Verdict::KnownLarger,
            rules_used: sat.rules_used,
            steps: sat.steps,
            residual_pairs,
            citations: vec![CITE_DOUBLED_FREE_PRODUCT.to_owned()],
            action: None,
            notes,
        });
    }
    if adjacency_matches_2x2(g, [[1, 0], [0, 1]]) {
        notes.push(
            "the two-loop adjacency pattern identifies the symmetry as H₂^{∞+}, strictly \
             larger than the free product of two circles"
                .to_owned(),
        );
        return Ok(Certificate {
            verdict: Verdict::KnownLarger,
            rules_used: sat.rules_used,
            steps: sat.steps,
            residual_pairs,
            citations: vec![CITE_HYPEROCTAHEDRAL.to_owned()],
            action: None,
            notes,
        });
    }

    notes.push(format!(
        "saturation reached a fixed point with {} unresolved coefficient pairs",
        residual_pairs.len()
    ));
    Ok(Certificate {
        verdict: Verdict::Inconclusive,
        rules_used: sat.rules_used,
        steps: sat.steps,
        residual_pairs,
        citations: Vec::new(),
        action: None,
        notes,
    })
}

// --- replay ----------------------------------------------------------------------------------

fn flag_to_ix(g: &DirectedMultigraph, f: &Flag, step: usize) -> Result<FlagIx, ReplayError> {
    let look = |id: &EdgeId| {
        g.edge_index(id).ok_or_else(|| ReplayError::UnknownId {
            step,
            id: id.as_str().to_owned(),
        })
    };
    Ok(match f {
        Flag::Zero { row, col } => FlagIx::Zero(look(row)?, look(col)?),
        Flag::One { edge } => FlagIx::One(look(edge)?),
    })
}

fn selector_to_indices(
    g: &DirectedMultigraph,
    selector: &Selector,
    step: usize,
) -> Result<Vec<Option<usize>>, ReplayError> {
    let n = g.vertex_count();
    let mut sel = vec![None; n];
    for (v, e) in &selector.chosen {
        let vi = g.vertex_index(v).ok_or_else(|| ReplayError::UnknownId {
            step,
            id: v.as_str().to_owned(),
        })?;
        let ei = g.edge_index(e).ok_or_else(|| ReplayError::UnknownId {
            step,
            id: e.as_str().to_owned(),
        })?;
        if g.range_index(ei) != vi {
            return Err(ReplayError::Mismatch {
                step,
                detail: format!("selector assigns {e}, which does not end at {v}"),
            });
        }
        sel[vi] = Some(ei);
    }
    // Every vertex with in-edges must have a choice; the rest must be the
    // declared out-expanded set, of size at most one.
    let mut missing = Vec::new();
    for v in 0..n {
        if sel[v].is_none() && !g.in_edge_indices(v).is_empty() {
            return Err(ReplayError::Mismatch {
                step,
                detail: format!("selector misses vertex {}", g.vertex_ids()[v]),
            });
        }
        if sel[v].is_none() {
            missing.push(g.vertex_ids()[v].clone());
        }
    }
    if missing.len() >= 2 {
        return Err(ReplayError::Mismatch {
            step,
            detail: "selector leaves two or more vertices without in-edges".to_owned(),
        });
    }
    if missing != selector.out_expanded {
        return Err(ReplayError::Mismatch {
            step,
            detail: "declared out-expanded vertices do not match the graph".to_owned(),
        });
    }
    Ok(sel)
}

/// Re-run a recorded derivation from the all-unknown state, re-validating
/// every hypothesis. Returns the final flags; errors if any step's
/// hypotheses fail, its conclusions do not cover what it claims to have
/// produced, or a claimed product was already known (steps record strictly
/// new facts).
pub fn replay(
    g: &DirectedMultigraph,
    steps: &[Step],
    opts: &CertifyOptions,
) -> Result<FlagMatrix, ReplayError> {
    let m = g.edge_count();
    let mut flags = FlagMatrix::new(m);
    let mut s = Scratch::default();
    let ix = |id: &EdgeId, step: usize| {
        g.edge_index(id).ok_or_else(|| ReplayError::UnknownId {
            step,
            id: id.as_str().to_owned(),
        })
    };

    for (k, step) in steps.iter().enumerate() {
        let outcome = match &step.rule {
            RuleApp::FanoutZero { h, e } => {
                eval_fanout(g, &flags, ix(h, k)?, ix(e, k)?, &mut s)
            }
            RuleApp::SinkZero { h, e } => eval_sink(g, &flags, ix(h, k)?, ix(e, k)?, &mut s),
            RuleApp::LoopTransferForward { e, h } => {
                eval_loop(g, &flags, ix(e, k)?, ix(h, k)?, true, &mut s)
            }
            RuleApp::LoopTransferBackward { e, h } => {
                eval_loop(g, &flags, ix(e, k)?, ix(h, k)?, false, &mut s)
            }
            RuleApp::Antipode { row, col } => {
                if !opts.use_antipode {
                    return Err(ReplayError::Mismatch {
                        step: k,
                        detail: "antipode rule is disabled".to_owned(),
                    });
                }
                eval_antipode(&flags, ix(row, k)?, ix(col, k)?, &mut s)
            }
            RuleApp::RowUnitarityOne { edge } => eval_unitarity_one(&flags, ix(edge, k)?, &mut s),
            RuleApp::RowUnitarityZeros { edge } => {
                eval_unitarity_zeros(&flags, ix(edge, k)?, &mut s)
            }
            RuleApp::RangeBalance { left, right, vertex } => {
                let w = g.vertex_index(vertex).ok_or_else(|| ReplayError::UnknownId {
                    step: k,
                    id: vertex.as_str().to_owned(),
                })?;
                eval_balance(g, &flags, ix(left, k)?, ix(right, k)?, w, &mut s)
            }
            RuleApp::PartitionUnit { selector, vertex } => {
                let u = g.vertex_index(vertex).ok_or_else(|| ReplayError::UnknownId {
                    step: k,
                    id: vertex.as_str().to_owned(),
                })?;
                let sel = selector_to_indices(g, selector, k)?;
                match eval_partition(g, &flags, &sel, u, &mut s) {
                    PartitionEval::Applicable => Eval::Applicable,
                    PartitionEval::NotApplicable => Eval::NotApplicable,
                    PartitionEval::ForcedUnitary(_, _) => Eval::NotApplicable,
                    PartitionEval::Fault(d) => Eval::Fault(d),
                }
            }
        };

        match outcome {
            Eval::Applicable => {}
            Eval::NotApplicable => {
                return Err(ReplayError::Mismatch {
                    step: k,
                    detail: "rule hypotheses are not satisfied at this point".to_owned(),
                })
            }
            Eval::Fault(detail) => return Err(ReplayError::Mismatch { step: k, detail }),
        }

        // Consumed flags must match the re-derived hypothesis set.
        let mut recorded: Vec<FlagIx> = step
            .consumed
            .iter()
            .map(|f| flag_to_ix(g, f, k))
            .collect::<Result<_, _>>()?;
        recorded.sort_unstable();
        let mut derived = s.consumed.clone();
        derived.sort_unstable();
        if recorded != derived {
            return Err(ReplayError::Mismatch {
                step: k,
                detail: "recorded hypotheses differ from the re-derived ones".to_owned(),
            });
        }

        // Produced flags must be new conclusions of the instance.
        if step.produced.is_empty() {
            return Err(ReplayError::Mismatch {
                step: k,
                detail: "step produces nothing".to_owned(),
            });
        }
        for f in &step.produced {
            let fx = flag_to_ix(g, f, k)?;
            if !s.produced.contains(&fx) {
                return Err(ReplayError::Mismatch {
                    step: k,
                    detail: format!("flag {f:?} is not a conclusion of this instance"),
                });
            }
            if flags.is_set(fx) {
                return Err(ReplayError::Mismatch {
                    step: k,
                    detail: format!("flag {f:?} was already known"),
                });
            }
        }
        for f in &step.produced {
            flags.set(flag_to_ix(g, f, k)?);
        }
    }
    Ok(flags)
}

// -----------------------------------------------------------------------------
