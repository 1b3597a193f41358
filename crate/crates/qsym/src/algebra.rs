//! Symbolic arithmetic in the graph C*-algebra of a finite directed
//! multigraph: the universal *-algebra generated by one projection `p_v` per
//! vertex and one partial isometry `S_e` per edge, subject to
//!
//! ```text
//! (i)   S_e* S_e = p_{r(e)}                      for every edge e
//! (ii)  p_v     = Σ_{s(f)=v} S_f S_f*            for every non-sink vertex v
//! ```
//!
//! Every element of the *-algebra is a rational linear combination of *path
//! monomials* `S_γ S_μ*` with `r(γ) = r(μ)` (vertex projections are the pair
//! of empty paths anchored at a vertex). Products reduce by a prefix
//! calculus on the inner `S_μ* S_δ` factor, so multiplication is exact and
//! terminates on every input. All coefficients are exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{cycles_geq2, DirectedMultigraph, EdgeId, Path, VertexId};

/// Default bound on the path length of any monomial produced while reducing
/// a word. Only words on graphs with cycles can grow without bound; the cap
/// turns runaway growth into a reportable truncation.
pub const DEFAULT_PATH_CAP: usize = 8;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("unknown vertex `{0}` in word")]
    UnknownVertex(String),
    #[error("unknown edge `{0}` in word")]
    UnknownEdge(String),
    #[error("cannot read word atom `{0}` (expected p.<vertex>, S.<edge> or S*.<edge>)")]
    WordSyntax(String),
    #[error("empty word")]
    EmptyWord,
    #[error("monomial path length exceeded the cap {cap}; partial result has {} terms", partial.terms().len())]
    Truncated { cap: usize, partial: LinComb },
    #[error("term `{0}` lies outside the domain of the state (needs single-edge pairs or sink projections)")]
    OutsideTauDomain(String),
    #[error("graph has a loop or a cycle of length >= 2; the algebra is infinite dimensional")]
    NotAcyclic,
    #[error("graph is not connected (vertex `{0}` touches no edge)")]
    NotConnected(String),
    #[error("term mentions `{0}`, which is not in this graph")]
    ForeignTerm(String),
}

// --- words ------------------------------------------------------------------

/// One letter of a generator word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Atom {
    /// `p.v` — the vertex projection.
    Proj(VertexId),
    /// `S.e` — the edge partial isometry.
    Iso(EdgeId),
    /// `S*.e` — its adjoint.
    IsoStar(EdgeId),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Proj(v) => write!(f, "p.{}", v),
            Atom::Iso(e) => write!(f, "S.{}", e),
            Atom::IsoStar(e) => write!(f, "S*.{}", e),
        }
    }
}

/// Parse a whitespace-separated generator word: atoms `p.<vertex>`,
/// `S.<edge>`, `S*.<edge>`.
pub fn parse_word(text: &str) -> Result<Vec<Atom>, AlgebraError> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        let atom = if let Some(v) = tok.strip_prefix("p.") {
            Atom::Proj(VertexId::new(v))
        } else if let Some(e) = tok.strip_prefix("S*.") {
            Atom::IsoStar(EdgeId::new(e))
        } else if let Some(e) = tok.strip_prefix("S.") {
            Atom::Iso(EdgeId::new(e))
        } else {
            return Err(AlgebraError::WordSyntax(tok.to_owned()));
        };
        match &atom {
            Atom::Proj(v) if v.as_str().is_empty() => {
                return Err(AlgebraError::WordSyntax(tok.to_owned()))
            }
            Atom::Iso(e) | Atom::IsoStar(e) if e.as_str().is_empty() => {
                return Err(AlgebraError::WordSyntax(tok.to_owned()))
            }
            _ => {}
        }
        out.push(atom);
    }
    if out.is_empty() {
        return Err(AlgebraError::EmptyWord);
    }
    Ok(out)
}

// --- path monomials -----------------------------------------------------------

/// A spanning-set monomial `S_γ S_μ*` with `r(γ) = r(μ)`. The vertex
/// projection `p_v` is the monomial whose two paths are both empty at `v`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PathMonomial {
    gamma: Path,
    mu: Path,
}

impl PathMonomial {
    pub fn new(gamma: Path, mu: Path) -> Option<Self> {
        if gamma.range() == mu.range() {
            Some(PathMonomial { gamma, mu })
        } else {
            None
        }
    }

    /// `p_v`.
    pub fn proj(g: &DirectedMultigraph, v: &VertexId) -> Result<Self, AlgebraError> {
        if g.vertex_index(v).is_none() {
            return Err(AlgebraError::UnknownVertex(v.as_str().to_owned()));
        }
        let p = Path::empty_at(v.clone());
        Ok(PathMonomial { gamma: p.clone(), mu: p })
    }

    /// `S_e` (= `S_e S_{p_{r(e)}}*` with an empty co-path).
    pub fn iso(g: &DirectedMultigraph, e: &EdgeId) -> Result<Self, AlgebraError> {
        let edge = g.edge(e).ok_or_else(|| AlgebraError::UnknownEdge(e.as_str().to_owned()))?;
        let gamma = Path::from_edges(g, std::slice::from_ref(e)).expect("edge path");
        Ok(PathMonomial { gamma, mu: Path::empty_at(edge.range.clone()) })
    }

    /// `S_e*`.
    pub fn iso_star(g: &DirectedMultigraph, e: &EdgeId) -> Result<Self, AlgebraError> {
        let m = Self::iso(g, e)?;
        Ok(m.star())
    }

    pub fn gamma(&self) -> &Path {
        &self.gamma
    }
    pub fn mu(&self) -> &Path {
        &self.mu
    }
    /// Common range vertex of the two paths.
    pub fn anchor(&self) -> &VertexId {
        self.gamma.range()
    }

    pub fn star(&self) -> Self {
        PathMonomial { gamma: self.mu.clone(), mu: self.gamma.clone() }
    }

    /// `Some(v)` when this is a bare vertex projection `p_v`.
    pub fn as_projection(&self) -> Option<&VertexId> {
        if self.gamma.is_empty() && self.mu.is_empty() {
            Some(self.gamma.source())
        } else {
            None
        }
    }

    /// Check that every edge and anchor exists in `g` and the paths join up.
    fn validate(&self, g: &DirectedMultigraph) -> Result<(), AlgebraError> {
        for path in [&self.gamma, &self.mu] {
            if path.is_empty() {
                if g.vertex_index(path.source()).is_none() {
                    return Err(AlgebraError::ForeignTerm(path.source().as_str().to_owned()));
                }
            } else if Path::from_edges(g, path.edge_ids()).is_err() {
                return Err(AlgebraError::ForeignTerm(path.to_string()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for PathMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.gamma.is_empty(), self.mu.is_empty()) {
            (true, true) => write!(f, "p_{{{}}}", self.gamma.source()),
            (false, true) => write!(f, "S_{{{}}}", self.gamma),
            (true, false) => write!(f, "S_{{{}}}*", self.mu),
            (false, false) => write!(f, "S_{{{}}}S_{{{}}}*", self.gamma, self.mu),
        }
    }
}

// --- linear combinations -------------------------------------------------------

/// A finite rational linear combination of path monomials. Zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LinComb {
    terms: BTreeMap<PathMonomial, Rational64>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn monomial(m: PathMonomial) -> Self {
        LinComb::term(m, Rational64::one())
    }

    pub fn term(m: PathMonomial, c: Rational64) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(m, c);
        }
        LinComb { terms: t }
    }

    /// The multiplicative unit `Σ_v p_v`.
    pub fn unit(g: &DirectedMultigraph) -> Self {
        let mut out = LinComb::zero();
        for v in g.vertex_ids() {
            out.add_term(PathMonomial::proj(g, v).expect("vertex of g"), Rational64::one());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<PathMonomial, Rational64> {
        &self.terms
    }

    pub fn add_term(&mut self, m: PathMonomial, c: Rational64) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational64::zero);
        *entry += c;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .expect("zero entry present");
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -*c);
        }
        out
    }

    pub fn scale(&self, c: Rational64) -> LinComb {
        let mut out = LinComb::zero();
        for (m, k) in &self.terms {
            out.add_term(m.clone(), *k * c);
        }
        out
    }

    /// The adjoint: swaps each monomial's paths (rational coefficients are
    /// their own conjugates).
    pub fn star(&self) -> LinComb {
        let mut out = LinComb::zero();
        for (m, c) in &self.terms {
            out.add_term(m.star(), *c);
        }
        out
    }

    /// Longest path length appearing in any monomial.
    pub fn max_path_len(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.gamma.len().max(m.mu.len()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = *c < Rational64::zero();
            let mag = if neg { -*c } else { *c };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if !mag.is_one() {
                write!(f, "{} ", mag)?;
            }
            write!(f, "{}", m)?;
        }
        Ok(())
    }
}

impl Serialize for LinComb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            let mut entry = BTreeMap::new();
            entry.insert("monomial", m.to_string());
            entry.insert("coeff", c.to_string());
            seq.serialize_element(&entry)?;
        }
        seq.end()
    }
}

// --- multiplication --------------------------------------------------------------

/// `(S_γ S_μ*)(S_δ S_ν*)` reduced by the prefix calculus:
/// if `μ` is a prefix of `δ` the product is `S_{γ·(δ∖μ)} S_ν*`;
/// if `δ` is a proper prefix of `μ` it is `S_γ S_{ν·(μ∖δ)}*`;
/// otherwise the inner factor `S_μ* S_δ` vanishes.
pub(crate) fn mono_mul(x: &PathMonomial, y: &PathMonomial) -> Option<PathMonomial> {
    let mu = &x.mu;
    let delta = &y.gamma;
    if mu.is_prefix_of(delta) {
        let rest = mu.suffix_after(delta);
        let gamma = x.gamma.concat(&rest).expect("r(γ)=r(μ)=s(rest)");
        PathMonomial::new(gamma, y.mu.clone())
    } else if delta.is_prefix_of(mu) {
        let rest = delta.suffix_after(mu);
        let mu_new = y.mu.concat(&rest).expect("r(ν)=r(δ)=s(rest)");
        PathMonomial::new(x.gamma.clone(), mu_new)
    } else {
        None
    }
}

/// Bilinear product of two combinations over the same graph.
pub fn multiply(
    g: &DirectedMultigraph,
    a: &LinComb,
    b: &LinComb,
) -> Result<LinComb, AlgebraError> {
    for t in a.terms.keys().chain(b.terms.keys()) {
        t.validate(g)?;
    }
    let mut out = LinComb::zero();
    for (x, cx) in &a.terms {
        for (y, cy) in &b.terms {
            if let Some(m) = mono_mul(x, y) {
                out.add_term(m, *cx * *cy);
            }
        }
    }
    Ok(out)
}

/// Expand every *bare* projection `p_v` at a non-sink vertex into
/// `Σ_{s(f)=v} S_f S_f*`. Monomials that are not bare projections are left
/// alone; one pass suffices since the expansion produces no new bare
/// projections.
pub fn expand_vertex_projections(g: &DirectedMultigraph, t: &LinComb) -> LinComb {
    let mut out = LinComb::zero();
    for (m, c) in &t.terms {
        match m.as_projection() {
            Some(v) => {
                let vi = g.vertex_index(v).expect("validated term");
                let outs = g.out_edge_indices(vi);
                if outs.is_empty() {
                    out.add_term(m.clone(), *c);
                } else {
                    for &e in outs {
                        let id = &g.edges()[e].id;
                        let mono = PathMonomial::iso(g, id).expect("edge of g");
                        out.add_term(
                            PathMonomial::new(mono.gamma.clone(), mono.gamma.clone())
                                .expect("same path"),
                            *c,
                        );
                    }
                }
            }
            None => out.add_term(m.clone(), *c),
        }
    }
    out
}

/// Reduce a generator word to a combination of path monomials, then expand
/// bare non-sink projections. Monomial paths are capped at `cap` edges; on
/// graphs with cycles a long enough word overflows the cap and the partial
/// product is returned inside the error.
pub fn normal_form_capped(
    g: &DirectedMultigraph,
    word: &[Atom],
    cap: usize,
) -> Result<LinComb, AlgebraError> {
    if word.is_empty() {
        return Err(AlgebraError::EmptyWord);
    }
    let mut acc: Option<LinComb> = None;
    for atom in word {
        let factor = LinComb::monomial(match atom {
            Atom::Proj(v) => PathMonomial::proj(g, v)?,
            Atom::Iso(e) => PathMonomial::iso(g, e)?,
            Atom::IsoStar(e) => PathMonomial::iso_star(g, e)?,
        });
        let next = match acc {
            None => factor,
            Some(prev) => {
                let prod = multiply(g, &prev, &factor)?;
                if prod.max_path_len() > cap {
                    return Err(AlgebraError::Truncated { cap, partial: prev });
                }
                prod
            }
        };
        acc = Some(next);
    }
    Ok(expand_vertex_projections(g, &acc.expect("nonempty word")))
}

/// [`normal_form_capped`] with the default cap.
pub fn normal_form(g: &DirectedMultigraph, word: &[Atom]) -> Result<LinComb, AlgebraError> {
    normal_form_capped(g, word, DEFAULT_PATH_CAP)
}

// --- dimension (acyclic graphs) ---------------------------------------------------

/// Number of paths ending at each vertex (including the empty path), as a
/// vector indexed like `g.vertex_ids()`. Only meaningful on acyclic graphs.
fn paths_into(g: &DirectedMultigraph) -> Vec<u64> {
    let n = g.vertex_count();
    let mut memo: Vec<Option<u64>> = vec![None; n];
    fn cnt(g: &DirectedMultigraph, v: usize, memo: &mut Vec<Option<u64>>) -> u64 {
        if let Some(c) = memo[v] {
            return c;
        }
        let mut total = 1;
        for &e in g.in_edge_indices(v) {
            total += cnt(g, g.source_index(e), memo);
        }
        memo[v] = Some(total);
        total
    }
    (0..n).map(|v| cnt(g, v, &mut memo)).collect()
}

/// Linear dimension of the graph C*-algebra of a connected acyclic graph:
/// the sink-anchored monomials `S_γ S_μ*` form a basis, giving
/// `Σ_{v sink} (#paths into v)²`.
pub fn dimension(g: &DirectedMultigraph) -> Result<u64, AlgebraError> {
    if let Some(v) = g.isolated_vertex() {
        return Err(AlgebraError::NotConnected(v.as_str().to_owned()));
    }
    let has_loop = (0..g.edge_count()).any(|e| g.is_loop(e));
    if has_loop || !cycles_geq2(g).is_empty() {
        return Err(AlgebraError::NotAcyclic);
    }
    let counts = paths_into(g);
    Ok((0..g.vertex_count())
        .filter(|&v| g.out_edge_indices(v).is_empty())
        .map(|v| counts[v] * counts[v])
        .sum())
}

// --- the state τ and the F matrix ----------------------------------------------------

/// The canonical state on the two-step spanning set: `τ(S_e S_f*) = δ_{ef}`
/// and `τ(p_u) = 1` for sink vertices `u`. Errors on terms outside that
/// span (longer paths, or bare non-sink projections — expand those first).
pub fn tau(g: &DirectedMultigraph, t: &LinComb) -> Result<Rational64, AlgebraError> {
    let mut total = Rational64::zero();
    for (m, c) in &t.terms {
        m.validate(g)?;
        if let Some(v) = m.as_projection() {
            let vi = g.vertex_index(v).expect("validated");
            if g.out_edge_indices(vi).is_empty() {
                total += *c;
            } else {
                return Err(AlgebraError::OutsideTauDomain(m.to_string()));
            }
        } else if m.gamma.len() == 1 && m.mu.len() == 1 {
            if m.gamma == m.mu {
                total += *c;
            }
        } else {
            return Err(AlgebraError::OutsideTauDomain(m.to_string()));
        }
    }
    Ok(total)
}

/// The diagonal matrix `F` with entries `F_{ef} = τ(S_e* S_f)`, in edge
/// declaration order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FMatrix {
    pub edge_order: Vec<EdgeId>,
    pub entries: Vec<Vec<Rational64>>,
}

impl FMatrix {
    pub fn is_diagonal_invertible(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, v)| {
                if i == j {
                    !v.is_zero()
                } else {
                    v.is_zero()
                }
            })
        })
    }
}

impl Serialize for FMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("edge_order", &self.edge_order)?;
        let rows: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect();
        map.serialize_entry("entries", &rows)?;
        map.end()
    }
}

/// Evaluate `F_{ef} = τ(S_e* S_f)` through the engine: reduce, expand bare
/// projections, then apply τ term-wise.
pub fn f_matrix(g: &DirectedMultigraph) -> Result<FMatrix, AlgebraError> {
    let m = g.edge_count();
    let edge_order: Vec<EdgeId> = g.edges().iter().map(|e| e.id.clone()).collect();
    let mut entries = vec![vec![Rational64::zero(); m]; m];
    for (i, e) in edge_order.iter().enumerate() {
        for (j, f) in edge_order.iter().enumerate() {
            let nf = normal_form(g, &[Atom::IsoStar(e.clone()), Atom::Iso(f.clone())])?;
            entries[i][j] = tau(g, &nf)?;
        }
    }
    Ok(FMatrix { edge_order, entries })
}

// --- relation self-test ---------------------------------------------------------------

/// One named relation check inside [`verify_ck_relations`].
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub ok: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CkReport {
    pub checks: Vec<RelationCheck>,
    pub passed: bool,
}

/// Symbolic self-test of the defining relations and their standard
/// consequences under [`multiply`]:
/// `S_e*S_e = p_{r(e)}`; the unit `Σ_v p_v` fixes every generator;
/// `S_e*S_f = 0` for `e ≠ f`; `S_eS_f ≠ 0 ⇔ r(e) = s(f)`;
/// `S_eS_f* ≠ 0 ⇔ r(e) = r(f)`.
pub fn verify_ck_relations(g: &DirectedMultigraph) -> CkReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool, witness: Option<String>| {
        checks.push(RelationCheck { relation: name.to_owned(), ok, witness });
    };

    let edges: Vec<EdgeId> = g.edges().iter().map(|e| e.id.clone()).collect();
    let lc_iso = |e: &EdgeId| LinComb::monomial(PathMonomial::iso(g, e).expect("edge"));
    let lc_star = |e: &EdgeId| LinComb::monomial(PathMonomial::iso_star(g, e).expect("edge"));

    // S_e* S_e = p_{r(e)}
    let mut ok = true;
    let mut witness = None;
    for e in &edges {
        let lhs = multiply(g, &lc_star(e), &lc_iso(e)).expect("same graph");
        let rhs = LinComb::monomial(
            PathMonomial::proj(g, &g.edge(e).expect("edge").range).expect("vertex"),
        );
        if lhs != rhs {
            ok = false;
            witness = Some(format!("edge {}", e));
            break;
        }
    }
    push("isometry: S_e* S_e = p_r(e)", ok, witness);

    // Σ_v p_v is a two-sided unit on generators.
    let unit = LinComb::unit(g);
    let mut ok = true;
    let mut witness = None;
    let mut gens: Vec<LinComb> = Vec::new();
    for v in g.vertex_ids() {
        gens.push(LinComb::monomial(PathMonomial::proj(g, v).expect("vertex")));
    }
    for e in &edges {
        gens.push(lc_iso(e));
        gens.push(lc_star(e));
    }
    for x in &gens {
        let left = multiply(g, &unit, x).expect("same graph");
        let right = multiply(g, x, &unit).expect("same graph");
        if &left != x || &right != x {
            ok = false;
            witness = Some(format!("generator {}", x));
            break;
        }
    }
    push("unit: Σ_v p_v acts as identity on generators", ok, witness);

    // S_e* S_f = 0 for e ≠ f.
    let mut ok = true;
    let mut witness = None;
    'outer: for e in &edges {
        for f in &edges {
            if e == f {
                continue;
            }
            if !multiply(g, &lc_star(e), &lc_iso(f)).expect("same graph").is_zero() {
                ok = false;
                witness = Some(format!("pair ({}, {})", e, f));
                break 'outer;
            }
        }
    }
    push("orthogonality: S_e* S_f = 0 for e ≠ f", ok, witness);

    // S_e S_f ≠ 0 ⇔ r(e) = s(f).
    let mut ok = true;
    let mut witness = None;
    'outer: for e in &edges {
        for f in &edges {
            let nonzero = !multiply(g, &lc_iso(e), &lc_iso(f)).expect("same graph").is_zero();
            let expected = g.edge(e).expect("edge").range == g.edge(f).expect("edge").source;
            if nonzero != expected {
                ok = false;
                witness = Some(format!("pair ({}, {})", e, f));
                break 'outer;
            }
        }
    }
    push("composition: S_e S_f ≠ 0 ⇔ r(e) = s(f)", ok, witness);

    // S_e S_f* ≠ 0 ⇔ r(e) = r(f).
    let mut ok = true;
    let mut witness = None;
    'outer: for e in &edges {
        for f in &edges {
            let nonzero = !multiply(g, &lc_iso(e), &lc_star(f)).expect("same graph").is_zero();
            let expected = g.edge(e).expect("edge").range == g.edge(f).expect("edge").range;
            if nonzero != expected {
                ok = false;
                witness = Some(format!("pair ({}, {})", e, f));
                break 'outer;
            }
        }
    }
    push("co-composition: S_e S_f* ≠ 0 ⇔ r(e) = r(f)", ok, witness);

    let passed = checks.iter().all(|c| c.ok);
    CkReport { checks, passed }
}

// -----------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{graph_from_matrix, parse_graph};
    use proptest::prelude::*;

    fn p3() -> DirectedMultigraph {
        graph_from_matrix(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap()
    }
    fn toeplitz() -> DirectedMultigraph {
        graph_from_matrix(&[vec![1, 1], vec![0, 0]]).unwrap()
    }
    fn eid(s: &str) -> EdgeId {
        EdgeId::new(s)
    }
    fn vid(s: &str) -> VertexId {
        VertexId::new(s)
    }
    fn nf(g: &DirectedMultigraph, w: &str) -> LinComb {
        normal_form(g, &parse_word(w).unwrap()).unwrap()
    }

    #[test]
    fn word_parsing() {
        let w = parse_word("p.1 S.e12 S*.e23").unwrap();
        assert_eq!(
            w,
            vec![
                Atom::Proj(vid("1")),
                Atom::Iso(eid("e12")),
                Atom::IsoStar(eid("e23"))
            ]
        );
        assert!(matches!(parse_word("q.1"), Err(AlgebraError::WordSyntax(_))));
        assert!(matches!(parse_word("S."), Err(AlgebraError::WordSyntax(_))));
        assert!(matches!(parse_word("   "), Err(AlgebraError::EmptyWord)));
    }

    #[test]
    fn defining_relation_isometry() {
        let g = p3();
        let got = nf(&g, "S*.e12 S.e12");
        // p_2 expands at the non-sink vertex 2.
        let e23 = PathMonomial::iso(&g, &eid("e23")).unwrap();
        let expected = LinComb::monomial(
            PathMonomial::new(e23.gamma().clone(), e23.gamma().clone()).unwrap(),
        );
        assert_eq!(got, expected);

        // Unexpanded, the product is the bare projection.
        let raw = multiply(
            &g,
            &LinComb::monomial(PathMonomial::iso_star(&g, &eid("e12")).unwrap()),
            &LinComb::monomial(PathMonomial::iso(&g, &eid("e12")).unwrap()),
        )
        .unwrap();
        assert_eq!(raw, LinComb::monomial(PathMonomial::proj(&g, &vid("2")).unwrap()));
    }

    #[test]
    fn orthogonality_and_zero_products() {
        let g = toeplitz();
        assert!(nf(&g, "S*.e11 S.e12").is_zero());
        assert!(nf(&g, "S.e12 S.e12").is_zero()); // r(e12)=2 ≠ s(e12)=1
        assert!(!nf(&g, "S.e11 S.e12").is_zero()); // 1 -> 1 -> 2 composes
    }

    #[test]
    fn projections_act_as_path_restrictions() {
        let g = p3();
        // p_{s(e)} S_e = S_e, two routes: direct reduction vs expanding the
        // projection by the fan-out relation first.
        let s_e12 = LinComb::monomial(PathMonomial::iso(&g, &eid("e12")).unwrap());
        let p1 = LinComb::monomial(PathMonomial::proj(&g, &vid("1")).unwrap());
        let direct = multiply(&g, &p1, &s_e12).unwrap();
        let expanded = multiply(&g, &expand_vertex_projections(&g, &p1), &s_e12).unwrap();
        assert_eq!(direct, s_e12);
        assert_eq!(expanded, s_e12);

        let p3v = LinComb::monomial(PathMonomial::proj(&g, &vid("3")).unwrap());
        assert!(multiply(&g, &p3v, &s_e12).unwrap().is_zero());
        assert_eq!(multiply(&g, &s_e12, &p3v).unwrap(), LinComb::zero()); // r(e12)=2≠3
    }

    #[test]
    fn normal_form_matches_hand_reductions() {
        // p_1 in the two-vertex path expands to the single fan-out term.
        let p2g = graph_from_matrix(&[vec![0, 1], vec![0, 0]]).unwrap();
        let got = nf(&p2g, "p.1");
        assert_eq!(got.to_string(), "S_{e12}S_{e12}*");

        // An already-reduced monomial with non-sink range stays put.
        let g = p3();
        assert_eq!(nf(&g, "S.e12 S*.e12").to_string(), "S_{e12}S_{e12}*");

        // Sink projections never expand.
        assert_eq!(nf(&g, "p.3").to_string(), "p_{3}");
    }

    #[test]
    fn truncation_on_loops() {
        let g = toeplitz();
        let word: Vec<Atom> = std::iter::repeat(Atom::Iso(eid("e11"))).take(10).collect();
        match normal_form(&g, &word) {
            Err(AlgebraError::Truncated { cap, partial }) => {
                assert_eq!(cap, DEFAULT_PATH_CAP);
                assert_eq!(partial.max_path_len(), DEFAULT_PATH_CAP);
            }
            other => panic!("expected truncation, got {:?}", other),
        }
        // Under a larger cap the same word reduces fine.
        assert_eq!(normal_form_capped(&g, &word, 16).unwrap().terms().len(), 1);
    }

    #[test]
    fn star_is_an_involutive_antihomomorphism() {
        let g = toeplitz();
        let a = nf(&g, "S.e11 S*.e11");
        let b = nf(&g, "S.e11 S.e11 S*.e12");
        assert_eq!(a.star().star(), a);
        let ab = multiply(&g, &a, &b).unwrap();
        let ba_star = multiply(&g, &b.star(), &a.star()).unwrap();
        assert_eq!(ab.star(), ba_star);
    }

    #[test]
    fn dimension_formula() {
        for n in 2..=6usize {
            let mut m = vec![vec![0u32; n]; n];
            for i in 0..n - 1 {
                m[i][i + 1] = 1;
            }
            let g = graph_from_matrix(&m).unwrap();
            assert_eq!(dimension(&g).unwrap(), (n * n) as u64, "path on {n} vertices");
        }

        // Disjoint union of the 2- and 3-vertex paths: 4 + 9.
        let p23 = DirectedMultigraph::new(
            vec!["1", "2", "3", "4", "5"],
            vec![("e12", "1", "2"), ("e34", "3", "4"), ("e45", "4", "5")],
        )
        .unwrap();
        assert_eq!(dimension(&p23).unwrap(), 13);

        assert!(matches!(dimension(&toeplitz()), Err(AlgebraError::NotAcyclic)));
        let k2 = graph_from_matrix(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(dimension(&k2), Err(AlgebraError::NotAcyclic)));
        let stray = parse_graph("vertices: 2\ne11: 1 -> 1\n").unwrap();
        assert!(matches!(dimension(&stray), Err(AlgebraError::NotConnected(_))));
    }

    #[test]
    fn tau_values_and_domain() {
        let g = p3();
        let diag = nf(&g, "S.e12 S*.e12");
        assert_eq!(tau(&g, &diag).unwrap(), Rational64::one());

        // Off-diagonal single-edge pairs evaluate to zero: use the two
        // in-edges of vertex 2 in the square below.
        let h = graph_from_matrix(&[vec![0, 1], vec![0, 1]]).unwrap(); // e12, e22
        let se = PathMonomial::iso(&h, &eid("e12")).unwrap();
        let sf = PathMonomial::iso(&h, &eid("e22")).unwrap();
        let offdiag =
            PathMonomial::new(se.gamma().clone(), sf.gamma().clone()).expect("common range 2");
        let t = LinComb::term(offdiag, Rational64::one());
        assert_eq!(tau(&h, &t).unwrap(), Rational64::zero());

        // Linearity over a scaled diagonal term.
        let mixed = diag.scale(Rational64::new(3, 1));
        assert_eq!(tau(&g, &mixed).unwrap(), Rational64::new(3, 1));

        // Sink projection is in the domain; non-sink bare projection is not.
        assert_eq!(tau(&g, &nf(&g, "p.3")).unwrap(), Rational64::one());
        let bare = LinComb::monomial(PathMonomial::proj(&g, &vid("1")).unwrap());
        assert!(matches!(tau(&g, &bare), Err(AlgebraError::OutsideTauDomain(_))));

        // Length-2 paths are outside the two-step span.
        let w = parse_word("S.e12 S.e23").unwrap();
        let long = normal_form(&g, &w).unwrap();
        assert!(matches!(tau(&g, &long), Err(AlgebraError::OutsideTauDomain(_))));
    }

    #[test]
    fn f_matrix_shapes() {
        let p2g = graph_from_matrix(&[vec![0, 1], vec![0, 0]]).unwrap();
        let f = f_matrix(&p2g).unwrap();
        assert_eq!(f.entries, vec![vec![Rational64::one()]]);

        let f = f_matrix(&toeplitz()).unwrap();
        assert!(f.is_diagonal_invertible());
        // τ(p_1) = 2 by expanding at the two-edge fan-out; τ(p_2) = 1 (sink).
        assert_eq!(f.entries[0][0], Rational64::new(2, 1));
        assert_eq!(f.entries[1][1], Rational64::one());
        assert_eq!(f.entries[0][1], Rational64::zero());
    }

    #[test]
    fn relation_self_test_passes_on_fixtures() {
        for m in [
            vec![vec![0u32, 1], vec![0, 0]],
            vec![vec![1, 1], vec![0, 0]],
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![1, 2], vec![0, 1]],
            vec![vec![1, 0], vec![0, 1]],
        ] {
            let g = graph_from_matrix(&m).unwrap();
            let report = verify_ck_relations(&g);
            assert!(report.passed, "matrix {m:?}: {:?}", report.checks);
        }
    }

    #[test]
    fn display_formats() {
        let g = p3();
        assert_eq!(nf(&g, "p.3").to_string(), "p_{3}");
        assert_eq!(nf(&g, "S.e12 S.e23").to_string(), "S_{e12.e23}");
        assert_eq!(nf(&g, "S*.e23").to_string(), "S_{e23}*");
        let sum = nf(&g, "S.e12 S*.e12").scale(Rational64::new(1, 2)).sub(&nf(&g, "p.3"));
        assert_eq!(sum.to_string(), "1/2 S_{e12}S_{e12}* - p_{3}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        // Left-to-right and right-to-left folding agree (associativity of the
        // reduction), on random short words over the Toeplitz graph.
        #[test]
        fn fold_direction_is_irrelevant(atoms in proptest::collection::vec(0u8..5, 1..6)) {
            let g = toeplitz();
            let lookup = ["e11", "e12"];
            let word: Vec<Atom> = atoms
                .iter()
                .map(|&k| match k {
                    0 => Atom::Proj(vid("1")),
                    1 => Atom::Proj(vid("2")),
                    2 => Atom::Iso(eid(lookup[0])),
                    3 => Atom::Iso(eid(lookup[1])),
                    _ => Atom::IsoStar(eid(lookup[1])),
                })
                .collect();
            let l2r = normal_form_capped(&g, &word, 64);
            // Right-to-left: fold from the back with flipped multiplication.
            let mut acc: Option<LinComb> = None;
            for atom in word.iter().rev() {
                let factor = LinComb::monomial(match atom {
                    Atom::Proj(v) => PathMonomial::proj(&g, v).unwrap(),
                    Atom::Iso(e) => PathMonomial::iso(&g, e).unwrap(),
                    Atom::IsoStar(e) => PathMonomial::iso_star(&g, e).unwrap(),
                });
                acc = Some(match acc {
                    None => factor,
                    Some(prev) => multiply(&g, &factor, &prev).unwrap(),
                });
            }
            let r2l = expand_vertex_projections(&g, &acc.unwrap());
            prop_assert_eq!(l2r.unwrap(), r2l);
        }

        // star(ab) = star(b)star(a) on random monomial pairs in P3.
        #[test]
        fn star_antihomomorphism_random(i in 0usize..4, j in 0usize..4) {
            let g = p3();
            let mono = |k: usize| -> LinComb {
                match k {
                    0 => LinComb::monomial(PathMonomial::iso(&g, &eid("e12")).unwrap()),
                    1 => LinComb::monomial(PathMonomial::iso_star(&g, &eid("e23")).unwrap()),
                    2 => LinComb::monomial(PathMonomial::proj(&g, &vid("2")).unwrap()),
                    _ => nf(&g, "S.e12 S.e23"),
                }
            };
            let (a, b) = (mono(i), mono(j));
            let ab = multiply(&g, &a, &b).unwrap();
            let ba = multiply(&g, &b.star(), &a.star()).unwrap();
            prop_assert_eq!(ab.star(), ba);
        }
    }
}
