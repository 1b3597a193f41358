//! Linear coactions on the graph C*-algebra with free-circle coefficients.
//!
//! A linear action sends each partial isometry to a sum
//! `α(S_e) = Σ_f S_f ⊗ c_{f,e}` whose coefficients live in a direct sum of
//! `slots` copies of a free product of circles: each slot is generated by
//! unitary letters `z_1, …, z_letters` with no relations between distinct
//! letters. Coefficients are exact rational combinations of reduced words,
//! and words in different slots multiply to zero.
//!
//! [`verify_action`] checks symbolically that such an assignment extends to
//! a unital *-homomorphism, i.e. that every defining relation of the graph
//! C*-algebra still holds after applying the action. The two built-in
//! actions are the always-valid [`diagonal_action`] (`α(S_e) = S_e ⊗ z_e`)
//! and the [`doubling_action`] on a pair of parallel edges, which exhibits a
//! symmetry that no diagonal action can produce.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{mono_mul, PathMonomial};
use crate::graph::{DirectedMultigraph, EdgeId};

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("graph is not connected (vertex `{0}` touches no edge)")]
    NotConnected(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edges `{0}` and `{1}` are not a pair of distinct parallel edges")]
    NotParallel(String, String),
    #[error("action has no image for edge `{0}`")]
    MissingImage(String),
    #[error("action image for `{edge}` is malformed: {reason}")]
    MalformedImage { edge: String, reason: String },
}

// --- the coefficient algebra ------------------------------------------------

/// Shape of the coefficient C*-algebra: a direct sum of `slots` copies of
/// the free product of `letters` circles.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CoeffAlgebra {
    pub slots: usize,
    pub letters: usize,
}

/// One unitary generator or its adjoint: `z_{index+1}` or `z_{index+1}*`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub index: usize,
    pub star: bool,
}

impl Letter {
    fn inverse(self) -> Letter {
        Letter { index: self.index, star: !self.star }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}{}", self.index + 1, if self.star { "*" } else { "" })
    }
}

/// A reduced word in one slot of the coefficient algebra. Adjacent
/// `z z*` / `z* z` pairs cancel because every letter is a unitary.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct SlotWord {
    pub slot: usize,
    letters: Vec<Letter>,
}

impl SlotWord {
    pub fn empty(slot: usize) -> Self {
        SlotWord { slot, letters: Vec::new() }
    }

    pub fn letter(slot: usize, index: usize) -> Self {
        SlotWord { slot, letters: vec![Letter { index, star: false }] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    fn push_reduced(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    /// Product within the same slot; `None` when the slots differ (the
    /// direct-sum components annihilate each other).
    pub fn mul(&self, other: &SlotWord) -> Option<SlotWord> {
        if self.slot != other.slot {
            return None;
        }
        let mut out = self.clone();
        for &l in &other.letters {
            out.push_reduced(l);
        }
        Some(out)
    }

    pub fn star(&self) -> SlotWord {
        SlotWord {
            slot: self.slot,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn is_empty_word(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word alone, without the slot: `1` or e.g. `z1.z3*`.
    pub fn word_string(&self) -> String {
        if self.letters.is_empty() {
            "1".to_owned()
        } else {
            self.letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(".")
        }
    }
}

/// A rational combination of reduced slot words — one element of the
/// coefficient algebra. All words carry slots below `slots`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoeffWord {
    slots: usize,
    terms: BTreeMap<SlotWord, Rational64>,
}

impl CoeffWord {
    pub fn zero(slots: usize) -> Self {
        CoeffWord { slots, terms: BTreeMap::new() }
    }

    /// The unit `(1, 1, …, 1)` of the direct sum.
    pub fn unit(slots: usize) -> Self {
        let mut w = CoeffWord::zero(slots);
        for s in 0..slots {
            w.add_term(SlotWord::empty(s), Rational64::one());
        }
        w
    }

    /// The generator `z_{index+1}` placed in a single slot (zero elsewhere).
    pub fn letter(slots: usize, slot: usize, index: usize) -> Self {
        let mut w = CoeffWord::zero(slots);
        w.add_term(SlotWord::letter(slot, index), Rational64::one());
        w
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn terms(&self) -> &BTreeMap<SlotWord, Rational64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: SlotWord, c: Rational64) {
        assert!(w.slot < self.slots, "slot out of range");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert_with(Rational64::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &CoeffWord) -> CoeffWord {
        assert_eq!(self.slots, other.slots, "mismatched coefficient algebras");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), *c);
        }
        out
    }

    pub fn scale(&self, c: Rational64) -> CoeffWord {
        let mut out = CoeffWord::zero(self.slots);
        for (w, k) in &self.terms {
            out.add_term(w.clone(), *k * c);
        }
        out
    }

    pub fn mul(&self, other: &CoeffWord) -> CoeffWord {
        assert_eq!(self.slots, other.slots, "mismatched coefficient algebras");
        let mut out = CoeffWord::zero(self.slots);
        for (w, c) in &self.terms {
            for (w2, c2) in &other.terms {
                if let Some(prod) = w.mul(w2) {
                    out.add_term(prod, *c * *c2);
                }
            }
        }
        out
    }

    pub fn star(&self) -> CoeffWord {
        let mut out = CoeffWord::zero(self.slots);
        for (w, c) in &self.terms {
            out.add_term(w.star(), *c);
        }
        out
    }

    fn max_letter(&self) -> Option<usize> {
        self.terms
            .keys()
            .flat_map(|w| w.letters.iter().map(|l| l.index))
            .max()
    }
}

impl fmt::Display for CoeffWord {
    /// One slot renders as a plain sum; several slots as a tuple with `0`
    /// for empty components: `(z1, 0)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let render_slot = |slot: usize| -> String {
            let parts: Vec<String> = self
                .terms
                .iter()
                .filter(|(w, _)| w.slot == slot)
                .map(|(w, c)| {
                    if c.is_one() {
                        w.word_string()
                    } else {
                        format!("{} {}", c, w.word_string())
                    }
                })
                .collect();
            if parts.is_empty() {
                "0".to_owned()
            } else {
                parts.join(" + ")
            }
        };
        if self.slots == 1 {
            f.write_str(&render_slot(0))
        } else {
            let parts: Vec<String> = (0..self.slots).map(render_slot).collect();
            write!(f, "({})", parts.join(", "))
        }
    }
}

impl Serialize for CoeffWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            slot: usize,
            word: String,
            coeff: &'a str,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            let coeff = c.to_string();
            seq.serialize_element(&Term { slot: w.slot, word: w.word_string(), coeff: &coeff })?;
        }
        seq.end()
    }
}

// --- tensors -------------------------------------------------------------------

/// A rational combination of elementary tensors `S_γS_μ* ⊗ w` with `w` a
/// reduced slot word. Both legs multiply exactly, so products and adjoints
/// of action images stay in this form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor {
    slots: usize,
    terms: BTreeMap<(PathMonomial, SlotWord), Rational64>,
}

impl Tensor {
    pub fn zero(slots: usize) -> Self {
        Tensor { slots, terms: BTreeMap::new() }
    }

    /// `m ⊗ w` for every term of `w`.
    pub fn pure(m: &PathMonomial, w: &CoeffWord) -> Self {
        let mut t = Tensor::zero(w.slots());
        for (sw, c) in w.terms() {
            t.add_term(m.clone(), sw.clone(), *c);
        }
        t
    }

    pub fn terms(&self) -> &BTreeMap<(PathMonomial, SlotWord), Rational64> {
        &self.terms
    }

    pub fn add_term(&mut self, m: PathMonomial, w: SlotWord, c: Rational64) {
        assert!(w.slot < self.slots, "slot out of range");
        if c.is_zero() {
            return;
        }
        let key = (m, w);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational64::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.slots, other.slots, "mismatched coefficient algebras");
        let mut out = self.clone();
        for ((m, w), c) in &other.terms {
            out.add_term(m.clone(), w.clone(), *c);
        }
        out
    }

    pub fn mul(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.slots, other.slots, "mismatched coefficient algebras");
        let mut out = Tensor::zero(self.slots);
        for ((m, w), c) in &self.terms {
            for ((m2, w2), c2) in &other.terms {
                let Some(mono) = mono_mul(m, m2) else { continue };
                let Some(word) = w.mul(w2) else { continue };
                out.add_term(mono, word, *c * *c2);
            }
        }
        out
    }

    pub fn star(&self) -> Tensor {
        let mut out = Tensor::zero(self.slots);
        for ((m, w), c) in &self.terms {
            out.add_term(m.star(), w.star(), *c);
        }
        out
    }

    /// Expand every bare projection at a non-sink vertex in the monomial leg
    /// via the fan-out relation; used to compare tensors written over
    /// different spanning monomials.
    pub fn normalize(&self, g: &DirectedMultigraph) -> Tensor {
        let mut out = Tensor::zero(self.slots);
        for ((m, w), c) in &self.terms {
            match m.as_projection() {
                Some(v) => {
                    let vi = g.vertex_index(v).expect("vertex of g");
                    let outs = g.out_edge_indices(vi);
                    if outs.is_empty() {
                        out.add_term(m.clone(), w.clone(), *c);
                    } else {
                        for &ei in outs {
                            let id = &g.edges()[ei].id;
                            let iso = PathMonomial::iso(g, id).expect("edge of g");
                            let diag = PathMonomial::new(iso.gamma().clone(), iso.gamma().clone())
                                .expect("same path");
                            out.add_term(diag, w.clone(), *c);
                        }
                    }
                }
                None => out.add_term(m.clone(), w.clone(), *c),
            }
        }
        out
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((m, w), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "{} ", c)?;
            }
            write!(f, "{} ⊗ [{}]{}", m, w.slot, w.word_string())?;
        }
        Ok(())
    }
}

// --- action specifications ----------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionKind {
    /// `α(S_e) = S_e ⊗ z_e` — one circle per edge, a single slot.
    Diagonal,
    /// The two parallel edges trade places across the two slots.
    Doubling { pair: (EdgeId, EdgeId) },
}

/// A linear action given by explicit images `α(S_e) = Σ_f S_f ⊗ c_{f,e}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ActionSpec {
    pub algebra: CoeffAlgebra,
    #[serde(flatten)]
    pub kind: ActionKind,
    /// For each edge `e`, the list of `(f, c_{f,e})` pairs.
    pub images: BTreeMap<EdgeId, Vec<(EdgeId, CoeffWord)>>,
}

impl ActionSpec {
    /// The image tensor `α(S_e)`.
    pub fn apply(
        &self,
        g: &DirectedMultigraph,
        e: &EdgeId,
    ) -> Result<Tensor, ActionError> {
        let image = self
            .images
            .get(e)
            .ok_or_else(|| ActionError::MissingImage(e.as_str().to_owned()))?;
        let mut t = Tensor::zero(self.algebra.slots);
        for (f, c) in image {
            let mono = PathMonomial::iso(g, f)
                .map_err(|_| ActionError::UnknownEdge(f.as_str().to_owned()))?;
            t = t.add(&Tensor::pure(&mono, c));
        }
        Ok(t)
    }

    /// Structural well-formedness against a graph: every edge has an image,
    /// image targets exist, and slot/letter indices fit the declared shape.
    pub fn validate(&self, g: &DirectedMultigraph) -> Result<(), ActionError> {
        for edge in g.edges() {
            let image = self
                .images
                .get(&edge.id)
                .ok_or_else(|| ActionError::MissingImage(edge.id.as_str().to_owned()))?;
            if image.is_empty() {
                return Err(ActionError::MalformedImage {
                    edge: edge.id.as_str().to_owned(),
                    reason: "empty image".to_owned(),
                });
            }
            for (f, c) in image {
                if g.edge(f).is_none() {
                    return Err(ActionError::UnknownEdge(f.as_str().to_owned()));
                }
                if c.slots() != self.algebra.slots {
                    return Err(ActionError::MalformedImage {
                        edge: edge.id.as_str().to_owned(),
                        reason: format!(
                            "coefficient uses {} slots, algebra has {}",
                            c.slots(),
                            self.algebra.slots
                        ),
                    });
                }
                if let Some(max) = c.max_letter() {
                    if max >= self.algebra.letters {
                        return Err(ActionError::MalformedImage {
                            edge: edge.id.as_str().to_owned(),
                            reason: format!(
                                "letter z{} out of range (algebra has {} letters)",
                                max + 1,
                                self.algebra.letters
                            ),
                        });
                    }
                }
            }
        }
        for e in self.images.keys() {
            if g.edge(e).is_none() {
                return Err(ActionError::UnknownEdge(e.as_str().to_owned()));
            }
        }
        Ok(())
    }
}

/// The diagonal action `α(S_e) = S_e ⊗ z_e`: one slot, one circle per edge.
/// It always verifies, on any graph.
pub fn diagonal_action(g: &DirectedMultigraph) -> ActionSpec {
    let m = g.edge_count();
    let algebra = CoeffAlgebra { slots: 1, letters: m };
    let mut images = BTreeMap::new();
    for (k, edge) in g.edges().iter().enumerate() {
        images.insert(
            edge.id.clone(),
            vec![(edge.id.clone(), CoeffWord::letter(1, 0, k))],
        );
    }
    ActionSpec { algebra, kind: ActionKind::Diagonal, images }
}

/// The doubling action on a pair of distinct parallel edges `e1 ∥ e2`:
/// two slots, and on the pair
///
/// ```text
/// α(S_{e1}) = S_{e1} ⊗ (z_{e1}, 0) + S_{e2} ⊗ (0, z_{e2})
/// α(S_{e2}) = S_{e2} ⊗ (z_{e2}, 0) + S_{e1} ⊗ (0, z_{e1})
/// α(S_e)    = S_e ⊗ (z_e, z_e)          for every other edge
/// ```
///
/// The second slot genuinely permutes the two parallel isometries, so the
/// symmetry it encodes cannot come from independent circle rotations alone.
pub fn doubling_action(
    g: &DirectedMultigraph,
    e1: &EdgeId,
    e2: &EdgeId,
) -> Result<ActionSpec, ActionError> {
    let a = g.edge(e1).ok_or_else(|| ActionError::UnknownEdge(e1.as_str().to_owned()))?;
    let b = g.edge(e2).ok_or_else(|| ActionError::UnknownEdge(e2.as_str().to_owned()))?;
    if e1 == e2 || a.source != b.source || a.range != b.range {
        return Err(ActionError::NotParallel(
            e1.as_str().to_owned(),
            e2.as_str().to_owned(),
        ));
    }
    let m = g.edge_count();
    let algebra = CoeffAlgebra { slots: 2, letters: m };
    let i1 = g.edge_index(e1).expect("edge of g");
    let i2 = g.edge_index(e2).expect("edge of g");
    let mut images = BTreeMap::new();
    for (k, edge) in g.edges().iter().enumerate() {
        let image = if k == i1 {
            vec![
                (e1.clone(), CoeffWord::letter(2, 0, i1)),
                (e2.clone(), CoeffWord::letter(2, 1, i2)),
            ]
        } else if k == i2 {
            vec![
                (e2.clone(), CoeffWord::letter(2, 0, i2)),
                (e1.clone(), CoeffWord::letter(2, 1, i1)),
            ]
        } else {
            let mut c = CoeffWord::zero(2);
            c.add_term(SlotWord::letter(0, k), Rational64::one());
            c.add_term(SlotWord::letter(1, k), Rational64::one());
            vec![(edge.id.clone(), c)]
        };
        images.insert(edge.id.clone(), image);
    }
    Ok(ActionSpec {
        algebra,
        kind: ActionKind::Doubling { pair: (e1.clone(), e2.clone()) },
        images,
    })
}

// --- verification ---------------------------------------------------------------------

/// One relation check inside an [`ActionReport`].
#[derive(Clone, Debug, Serialize)]
pub struct ActionCheck {
    pub relation: String,
    pub ok: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionReport {
    pub checks: Vec<ActionCheck>,
    pub passed: bool,
}

/// Symbolic proof that the action's images satisfy every defining relation:
///
/// * per edge `e`: `α(S_e)* α(S_e)` equals the image of `p_{r(e)}`,
/// * per non-sink `v`: the image of `p_v` equals `Σ_{s(f)=v} α(S_f) α(S_f)*`,
/// * the images of the vertex projections sum to `1 ⊗ 1`.
///
/// The image of `p_v` is computed from the first in-edge of `v`, or from the
/// fan-out relation when `v` has no in-edges; the per-edge check then pins
/// down independence from that choice. Tensors are compared after expanding
/// bare non-sink projections on the monomial leg.
pub fn verify_action(
    g: &DirectedMultigraph,
    spec: &ActionSpec,
) -> Result<ActionReport, ActionError> {
    if let Some(v) = g.isolated_vertex() {
        return Err(ActionError::NotConnected(v.as_str().to_owned()));
    }
    spec.validate(g)?;
    let slots = spec.algebra.slots;

    let edge_ids: Vec<EdgeId> = g.edges().iter().map(|e| e.id.clone()).collect();
    let mut alpha: BTreeMap<EdgeId, Tensor> = BTreeMap::new();
    for e in &edge_ids {
        alpha.insert(e.clone(), spec.apply(g, e)?);
    }

    // Image of each vertex projection.
    let n = g.vertex_count();
    let mut ap: Vec<Tensor> = Vec::with_capacity(n);
    for v in 0..n {
        let t = if let Some(&h) = g.in_edge_indices(v).first() {
            let img = &alpha[&g.edges()[h].id];
            img.star().mul(img)
        } else {
            let mut sum = Tensor::zero(slots);
            for &f in g.out_edge_indices(v) {
                let img = &alpha[&g.edges()[f].id];
                sum = sum.add(&img.mul(&img.star()));
            }
            sum
        };
        ap.push(t.normalize(g));
    }

    let mut checks = Vec::new();

    // (i) isometry relation under the action.
    for e in &edge_ids {
        let img = &alpha[e];
        let lhs = img.star().mul(img).normalize(g);
        let rv = g.vertex_index(&g.edge(e).expect("edge").range).expect("vertex");
        let ok = lhs == ap[rv];
        checks.push(ActionCheck {
            relation: format!("α(S_{})*α(S_{}) = α(p_{})", e, e, g.edge(e).unwrap().range),
            ok,
            detail: if ok {
                None
            } else {
                Some(format!("lhs = {}; rhs = {}", lhs, ap[rv]))
            },
        });
    }

    // (ii) fan-out relation under the action.
    for v in 0..n {
        let outs = g.out_edge_indices(v);
        if outs.is_empty() {
            continue;
        }
        let mut rhs = Tensor::zero(slots);
        for &f in outs {
            let img = &alpha[&g.edges()[f].id];
            rhs = rhs.add(&img.mul(&img.star()));
        }
        let rhs = rhs.normalize(g);
        let ok = ap[v] == rhs;
        checks.push(ActionCheck {
            relation: format!(
                "α(p_{}) = Σ_{{s(f)={}}} α(S_f)α(S_f)*",
                g.vertex_ids()[v],
                g.vertex_ids()[v]
            ),
            ok,
            detail: if ok {
                None
            } else {
                Some(format!("lhs = {}; rhs = {}", ap[v], rhs))
            },
        });
    }

    // (unit) the projection images resolve the identity.
    let mut total = Tensor::zero(slots);
    for t in &ap {
        total = total.add(t);
    }
    let mut unit = Tensor::zero(slots);
    for v in g.vertex_ids() {
        let p = PathMonomial::proj(g, v).expect("vertex of g");
        unit = unit.add(&Tensor::pure(&p, &CoeffWord::unit(slots)));
    }
    let unit = unit.normalize(g);
    let ok = total == unit;
    checks.push(ActionCheck {
        relation: "Σ_v α(p_v) = 1 ⊗ 1".to_owned(),
        ok,
        detail: if ok {
            None
        } else {
            Some(format!("lhs = {}; rhs = {}", total, unit))
        },
    });

    let passed = checks.iter().all(|c| c.ok);
    Ok(ActionReport { checks, passed })
}

// -----------------------------------------------------------------------------
