//! Finite directed multigraphs and the combinatorial side of the rigidity
//! question: connectivity in the "no stray vertex" sense, simple cycles of
//! length ≥ 2, spanning paths, and the three-part requirement (R) that
//! characterizes graphs whose canonical adjacency matrix is upper triangular
//! with an all-ones superdiagonal.
//!
//! Graphs carry stable, user-visible ids for vertices and edges; every
//! operation that returns witnesses (a cycle, a parallel pair, an ordering)
//! reports them in terms of those ids so that downstream certificates stay
//! readable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

/// Stable name of a vertex. Vertex ids are arbitrary tokens without
/// whitespace, `:`/`,`/`#`, or the arrow `->`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct VertexId(String);

/// Stable name of an edge, same token rules as [`VertexId`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct EdgeId(String);

macro_rules! id_impls {
    ($t:ident) => {
        impl $t {
            pub fn new(s: impl Into<String>) -> Self {
                $t(s.into())
            }
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", self.0)
            }
        }
        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                $t(s.to_owned())
            }
        }
        impl From<String> for $t {
            fn from(s: String) -> Self {
                $t(s)
            }
        }
    };
}
id_impls!(VertexId);
id_impls!(EdgeId);

/// A directed edge `source -> range`. ("Range" is the standard name for the
/// target vertex when edges are read as partial isometries.)
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Edge {
    pub id: EdgeId,
    pub source: VertexId,
    pub range: VertexId,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph needs at least one vertex")]
    NoVertices,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` uses undeclared vertex `{vertex}`")]
    UndeclaredVertex { edge: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("graph is not connected: vertex `{0}` touches no edge")]
    Disconnected(String),
    #[error("ordering is not a permutation of the vertex set")]
    NotAPermutation,
    #[error("matrix must be square and non-empty")]
    BadMatrix,
    #[error("edges {0} and {1} do not join up (range/source mismatch)")]
    BrokenPath(String, String),
}

/// A finite directed multigraph. Vertex and edge order is the declaration
/// order and is significant: tie-breaking throughout the crate is
/// "first declared wins".
#[derive(Clone, Serialize)]
pub struct DirectedMultigraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    #[serde(skip)]
    v_of: BTreeMap<VertexId, usize>,
    #[serde(skip)]
    e_of: BTreeMap<EdgeId, usize>,
    #[serde(skip)]
    src: Vec<usize>,
    #[serde(skip)]
    rng: Vec<usize>,
    #[serde(skip)]
    outs: Vec<Vec<usize>>,
    #[serde(skip)]
    ins: Vec<Vec<usize>>,
}

impl PartialEq for DirectedMultigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}
impl Eq for DirectedMultigraph {}

impl fmt::Debug for DirectedMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectedMultigraph")
            .field("vertices", &self.vertices)
            .field("edges", &self.edges)
            .finish()
    }
}

impl DirectedMultigraph {
    pub fn new<V, E, S>(vertices: Vec<V>, edges: Vec<(E, S, S)>) -> Result<Self, GraphError>
    where
        V: Into<String>,
        E: Into<String>,
        S: Into<String>,
    {
        let vertices: Vec<VertexId> = vertices.into_iter().map(|v| VertexId(v.into())).collect();
        if vertices.is_empty() {
            return Err(GraphError::NoVertices);
        }
        let mut v_of = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if v_of.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.0.clone()));
            }
        }
        let mut e_of = BTreeMap::new();
        let mut built = Vec::with_capacity(edges.len());
        let mut src = Vec::new();
        let mut rng = Vec::new();
        let mut outs = vec![Vec::new(); vertices.len()];
        let mut ins = vec![Vec::new(); vertices.len()];
        for (k, (id, s, r)) in edges.into_iter().enumerate() {
            let id = EdgeId(id.into());
            let s = VertexId(s.into());
            let r = VertexId(r.into());
            if e_of.insert(id.clone(), k).is_some() {
                return Err(GraphError::DuplicateEdge(id.0.clone()));
            }
            let si = *v_of.get(&s).ok_or_else(|| GraphError::UndeclaredVertex {
                edge: id.0.clone(),
                vertex: s.0.clone(),
            })?;
            let ri = *v_of.get(&r).ok_or_else(|| GraphError::UndeclaredVertex {
                edge: id.0.clone(),
                vertex: r.0.clone(),
            })?;
            outs[si].push(k);
            ins[ri].push(k);
            src.push(si);
            rng.push(ri);
            built.push(Edge { id, source: s, range: r });
        }
        Ok(DirectedMultigraph { vertices, edges: built, v_of, e_of, src, rng, outs, ins })
    }

    // --- basic accessors ---------------------------------------------------

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.vertices
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn vertex_index(&self, v: &VertexId) -> Option<usize> {
        self.v_of.get(v).copied()
    }
    pub fn edge_index(&self, e: &EdgeId) -> Option<usize> {
        self.e_of.get(e).copied()
    }
    pub fn edge(&self, e: &EdgeId) -> Option<&Edge> {
        self.edge_index(e).map(|i| &self.edges[i])
    }
    pub fn source_index(&self, e_idx: usize) -> usize {
        self.src[e_idx]
    }
    pub fn range_index(&self, e_idx: usize) -> usize {
        self.rng[e_idx]
    }
    /// Indices of edges with the given source vertex, in declaration order.
    pub fn out_edge_indices(&self, v_idx: usize) -> &[usize] {
        &self.outs[v_idx]
    }
    /// Indices of edges with the given range vertex, in declaration order.
    pub fn in_edge_indices(&self, v_idx: usize) -> &[usize] {
        &self.ins[v_idx]
    }
    pub fn is_loop(&self, e_idx: usize) -> bool {
        self.src[e_idx] == self.rng[e_idx]
    }

    /// All unordered parallel pairs (same source, same range), lexicographic
    /// by edge position. Double loops count.
    pub fn parallel_pairs(&self) -> Vec<(EdgeId, EdgeId)> {
        let mut out = Vec::new();
        for i in 0..self.edges.len() {
            for j in i + 1..self.edges.len() {
                if self.src[i] == self.src[j] && self.rng[i] == self.rng[j] {
                    out.push((self.edges[i].id.clone(), self.edges[j].id.clone()));
                }
            }
        }
        out
    }
    pub fn first_parallel_pair(&self) -> Option<(EdgeId, EdgeId)> {
        self.parallel_pairs().into_iter().next()
    }

    /// Connectivity in the sense used throughout this crate: every vertex is
    /// the source or the range of at least one edge. (This is weaker than
    /// ordinary graph connectivity; see [`is_weakly_connected`].)
    ///
    /// [`is_weakly_connected`]: DirectedMultigraph::is_weakly_connected
    pub fn is_connected(&self) -> bool {
        self.isolated_vertex().is_none()
    }

    /// First vertex touching no edge, if any.
    pub fn isolated_vertex(&self) -> Option<&VertexId> {
        (0..self.vertices.len())
            .find(|&v| self.outs[v].is_empty() && self.ins[v].is_empty())
            .map(|v| &self.vertices[v])
    }

    /// Ordinary connectivity of the underlying undirected graph. Only used
    /// for informational notes; the algebraic results never require it.
    pub fn is_weakly_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in self.outs[v].iter().chain(self.ins[v].iter()) {
                for w in [self.src[e], self.rng[e]] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Serialize back into the graph file format accepted by [`parse_graph`].
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        if self.vertices.len() == 1 {
            let id = self.vertices[0].as_str();
            // A lone numeric id other than "1" would re-parse as a vertex
            // count; the trailing comma forces the list form.
            if id.chars().all(|c| c.is_ascii_digit()) && id != "1" {
                out.push_str(&format!("vertices: {},\n", id));
            } else {
                out.push_str(&format!("vertices: {}\n", id));
            }
        } else {
            let ids: Vec<&str> = self.vertices.iter().map(|v| v.as_str()).collect();
            out.push_str(&format!("vertices: {}\n", ids.join(",")));
        }
        for e in &self.edges {
            out.push_str(&format!("{}: {} -> {}\n", e.id, e.source, e.range));
        }
        out
    }

    /// Graphviz rendering with edge ids as labels.
    pub fn emit_dot(&self) -> String {
        let mut out = String::from("digraph {\n  rankdir=LR;\n");
        for v in &self.vertices {
            out.push_str(&format!("  \"{}\";\n", v));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                e.source, e.range, e.id
            ));
        }
        out.push_str("}\n");
        out
    }
}

// --- the graph file format ----------------------------------------------

fn valid_token(t: &str) -> bool {
    !t.is_empty()
        && !t.contains(|c: char| c.is_whitespace())
        && !t.contains([':', ',', '#'])
        && !t.contains("->")
}

/// Parse the plain-text graph format:
///
/// ```text
/// # comment
/// vertices: 3            # or: vertices: a,b,c
/// e12: 1 -> 2            # labeled edge
/// 2 -> 3                 # unlabeled edge, gets id e<position>
/// ```
///
/// The `vertices:` line must come first; `vertices: <n>` declares vertices
/// named `1..n`. Errors carry 1-based line numbers.
pub fn parse_graph(text: &str) -> Result<DirectedMultigraph, GraphError> {
    let mut vertices: Option<Vec<String>> = None;
    let mut edges: Vec<(String, String, String)> = Vec::new();
    let mut edge_lines = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("vertices:") {
            if vertices.is_some() {
                return Err(GraphError::Parse {
                    line,
                    msg: "second `vertices:` line".into(),
                });
            }
            let rest = rest.trim();
            let list: Vec<String> = if rest.contains(',') {
                rest.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
            } else if rest.chars().all(|c| c.is_ascii_digit()) && !rest.is_empty() {
                let n: usize = rest.parse().map_err(|_| GraphError::Parse {
                    line,
                    msg: format!("bad vertex count `{}`", rest),
                })?;
                if n == 0 || n > 10_000 {
                    return Err(GraphError::Parse {
                        line,
                        msg: format!("vertex count must be in 1..=10000, got {}", n),
                    });
                }
                (1..=n).map(|k| k.to_string()).collect()
            } else if valid_token(rest) {
                vec![rest.to_string()]
            } else {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("cannot read vertex declaration `{}`", rest),
                });
            };
            if list.is_empty() {
                return Err(GraphError::Parse { line, msg: "empty vertex list".into() });
            }
            for t in &list {
                if !valid_token(t) {
                    return Err(GraphError::Parse {
                        line,
                        msg: format!("bad vertex id `{}`", t),
                    });
                }
            }
            vertices = Some(list);
            continue;
        }
        if vertices.is_none() {
            return Err(GraphError::Parse {
                line,
                msg: "the `vertices:` declaration must come before any edge".into(),
            });
        }
        // Edge line: `[id:] source -> range`.
        let (lhs, rhs) = content.split_once("->").ok_or_else(|| GraphError::Parse {
            line,
            msg: format!("expected `[id:] source -> range`, got `{}`", content),
        })?;
        if rhs.contains("->") {
            return Err(GraphError::Parse { line, msg: "more than one `->`".into() });
        }
        edge_lines += 1;
        let (id, src) = match lhs.split_once(':') {
            Some((id, src)) => (id.trim().to_string(), src.trim().to_string()),
            None => (format!("e{}", edge_lines), lhs.trim().to_string()),
        };
        let dst = rhs.trim().to_string();
        for (what, t) in [("edge id", &id), ("source", &src), ("range", &dst)] {
            if !valid_token(t) {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("bad {} `{}`", what, t),
                });
            }
        }
        edges.push((id, src, dst));
    }
    let vertices = vertices.ok_or_else(|| GraphError::Parse {
        line: text.lines().count().max(1),
        msg: "missing `vertices:` declaration".into(),
    })?;
    DirectedMultigraph::new(vertices, edges)
}

// --- adjacency matrices ----------------------------------------------------

/// Multiplicity matrix of a graph under an explicit vertex ordering:
/// `entries[i][j]` counts edges `order[i] -> order[j]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AdjacencyMatrix {
    pub order: Vec<VertexId>,
    pub entries: Vec<Vec<u32>>,
}

impl AdjacencyMatrix {
    /// True when the matrix has the shape that characterizes requirement (R):
    /// zero below the diagonal, ones on the whole superdiagonal, and no entry
    /// exceeding 1. A 1×1 matrix passes vacuously (its only entry still has
    /// to be 0 or 1).
    pub fn is_canonical(&self) -> bool {
        matrix_is_canonical(&self.entries)
    }
}

/// See [`AdjacencyMatrix::is_canonical`].
pub fn matrix_is_canonical(entries: &[Vec<u32>]) -> bool {
    let n = entries.len();
    if n == 0 || entries.iter().any(|row| row.len() != n) {
        return false;
    }
    for (i, row) in entries.iter().enumerate() {
        for (j, &a) in row.iter().enumerate() {
            if a > 1 {
                return false;
            }
            if i > j && a != 0 {
                return false;
            }
            if j == i + 1 && a != 1 {
                return false;
            }
        }
    }
    true
}

/// Multiplicity matrix of `g` under `order`, which must be a permutation of
/// the vertex set.
pub fn adjacency_matrix(
    g: &DirectedMultigraph,
    order: &[VertexId],
) -> Result<AdjacencyMatrix, GraphError> {
    let n = g.vertex_count();
    if order.len() != n {
        return Err(GraphError::NotAPermutation);
    }
    let mut pos = BTreeMap::new();
    for (i, v) in order.iter().enumerate() {
        let idx = g.vertex_index(v).ok_or(GraphError::NotAPermutation)?;
        if pos.insert(idx, i).is_some() {
            return Err(GraphError::NotAPermutation);
        }
    }
    let mut entries = vec![vec![0u32; n]; n];
    for e in 0..g.edge_count() {
        entries[pos[&g.source_index(e)]][pos[&g.range_index(e)]] += 1;
    }
    Ok(AdjacencyMatrix { order: order.to_vec(), entries })
}

/// Build a graph from a multiplicity matrix. Vertices are named `1..n`;
/// an edge `i -> j` is named `e<i><j>`, with letter suffixes `a`, `b`, …
/// when the multiplicity exceeds 1.
pub fn graph_from_matrix(entries: &[Vec<u32>]) -> Result<DirectedMultigraph, GraphError> {
    let n = entries.len();
    if n == 0 || entries.iter().any(|row| row.len() != n) {
        return Err(GraphError::BadMatrix);
    }
    let vertices: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
    let mut edges = Vec::new();
    for (i, row) in entries.iter().enumerate() {
        for (j, &mult) in row.iter().enumerate() {
            let base = if n <= 9 {
                format!("e{}{}", i + 1, j + 1)
            } else {
                format!("e{}_{}", i + 1, j + 1)
            };
            for k in 0..mult {
                let id = if mult == 1 {
                    base.clone()
                } else {
                    // 'a', 'b', ... — census multiplicities stay tiny.
                    format!("{}{}", base, (b'a' + (k % 26) as u8) as char)
                };
                edges.push((id, (i + 1).to_string(), (j + 1).to_string()));
            }
        }
    }
    DirectedMultigraph::new(vertices, edges)
}

// --- paths ------------------------------------------------------------------

/// A finite path of edges, `range(e_i) = source(e_{i+1})`. The empty path is
/// allowed and is anchored at a single vertex (its source and range).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Path {
    source: VertexId,
    range: VertexId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn empty_at(v: VertexId) -> Self {
        Path { source: v.clone(), range: v, edges: Vec::new() }
    }

    pub fn from_edges(g: &DirectedMultigraph, ids: &[EdgeId]) -> Result<Self, GraphError> {
        let mut idx = Vec::with_capacity(ids.len());
        for id in ids {
            idx.push(g.edge_index(id).ok_or_else(|| GraphError::UnknownEdge(id.0.clone()))?);
        }
        match idx.split_first() {
            None => Err(GraphError::BadMatrix), // unreachable via public callers
            Some((&first, rest)) => {
                let mut prev = first;
                for &e in rest {
                    if g.range_index(prev) != g.source_index(e) {
                        return Err(GraphError::BrokenPath(
                            g.edges()[prev].id.0.clone(),
                            g.edges()[e].id.0.clone(),
                        ));
                    }
                    prev = e;
                }
                Ok(Path {
                    source: g.edges()[first].source.clone(),
                    range: g.edges()[prev].range.clone(),
                    edges: ids.to_vec(),
                })
            }
        }
    }

    pub fn source(&self) -> &VertexId {
        &self.source
    }
    pub fn range(&self) -> &VertexId {
        &self.range
    }
    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edges
    }
    pub fn len(&self) -> usize {
        self.edges.len()
    }
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Prefix order on paths sharing a source; the empty path at `v` is a
    /// prefix of every path out of `v`.
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.source == other.source && other.edges.starts_with(&self.edges)
    }

    /// The remainder of `other` after `self` (requires `self.is_prefix_of(other)`).
    /// Needs the graph only to locate the anchor of an empty remainder.
    pub fn suffix_after<'a>(&self, other: &'a Path) -> Path {
        debug_assert!(self.is_prefix_of(other));
        let rest = &other.edges[self.edges.len()..];
        Path { source: self.range.clone(), range: other.range.clone(), edges: rest.to_vec() }
    }

    /// Concatenation; defined when `self.range == other.source`.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.range != other.source {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().cloned());
        Some(Path { source: self.source.clone(), range: other.range.clone(), edges })
    }

    /// Vertex sequence along the path: source, then the range of each edge.
    pub fn vertex_sequence(&self, g: &DirectedMultigraph) -> Vec<VertexId> {
        let mut out = vec![self.source.clone()];
        for id in &self.edges {
            out.push(g.edge(id).expect("path edge in graph").range.clone());
        }
        out
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            write!(f, "()@{}", self.source)
        } else {
            let ids: Vec<&str> = self.edges.iter().map(|e| e.as_str()).collect();
            f.write_str(&ids.join("."))
        }
    }
}

// --- cycles and spanning paths ----------------------------------------------

/// All simple cycles of length ≥ 2, each reported once, anchored at its
/// smallest source vertex (declaration order). Loops are cycles of length 1
/// and are deliberately excluded.
pub fn cycles_geq2(g: &DirectedMultigraph) -> Vec<Vec<EdgeId>> {
    let n = g.vertex_count();
    let mut found = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    let mut used = vec![false; n];

    fn extend(
        g: &DirectedMultigraph,
        start: usize,
        at: usize,
        path: &mut Vec<usize>,
        used: &mut Vec<bool>,
        found: &mut Vec<Vec<EdgeId>>,
    ) {
        for &e in g.out_edge_indices(at) {
            let to = g.range_index(e);
            if to == start {
                if path.len() + 1 >= 2 {
                    let mut cyc: Vec<EdgeId> =
                        path.iter().map(|&k| g.edges()[k].id.clone()).collect();
                    cyc.push(g.edges()[e].id.clone());
                    found.push(cyc);
                }
                continue;
            }
            if to < start || used[to] {
                continue;
            }
            used[to] = true;
            path.push(e);
            extend(g, start, to, path, used, found);
            path.pop();
            used[to] = false;
        }
    }

    for start in 0..n {
        used[start] = true;
        extend(g, start, start, &mut path, &mut used, &mut found);
        used[start] = false;
    }
    found
}

/// A path of exactly `|V| - 1` edges visiting every vertex once, if one
/// exists; the single-vertex graph gets the empty path. The search is
/// exhaustive over vertex orderings (meant for |V| up to ~10) and
/// deterministic: orderings are tried lexicographically in declaration
/// order, and parallel edges are broken by declaration order.
pub fn spanning_path(g: &DirectedMultigraph) -> Option<Path> {
    let n = g.vertex_count();
    if n == 1 {
        return Some(Path::empty_at(g.vertex_ids()[0].clone()));
    }
    for perm in (0..n).permutations(n) {
        let mut edges: Vec<EdgeId> = Vec::with_capacity(n - 1);
        let mut ok = true;
        for w in perm.windows(2) {
            match g.out_edge_indices(w[0]).iter().find(|&&e| g.range_index(e) == w[1]) {
                Some(&e) => edges.push(g.edges()[e].id.clone()),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(Path::from_edges(g, &edges).expect("edges joined by construction"));
        }
    }
    None
}

// --- requirement (R) ---------------------------------------------------------

/// The three parts of requirement (R).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum Requirement {
    /// No simple cycle of length ≥ 2 (loops are fine).
    R1,
    /// A spanning path of length |V| − 1 through every vertex.
    R2,
    /// No multiple edges: every multiplicity is at most 1.
    R3,
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Requirement::R1 => "R1",
            Requirement::R2 => "R2",
            Requirement::R3 => "R3",
        })
    }
}

/// Outcome of [`check_property_r`], with witnesses.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyRReport {
    pub holds: bool,
    pub violated: BTreeSet<Requirement>,
    /// A cycle of length ≥ 2, when R1 fails.
    pub cycle: Option<Vec<EdgeId>>,
    /// A parallel pair, when R3 fails.
    pub parallel_pair: Option<(EdgeId, EdgeId)>,
    /// The spanning path, when R2 holds.
    pub spanning_path: Option<Vec<EdgeId>>,
    /// The vertex ordering induced by the spanning path, when (R) holds.
    pub ordering: Option<Vec<VertexId>>,
}

/// Decide requirement (R) for a connected graph. Errors when some vertex
/// touches no edge (the connectivity precondition).
pub fn check_property_r(g: &DirectedMultigraph) -> Result<PropertyRReport, GraphError> {
    if let Some(v) = g.isolated_vertex() {
        return Err(GraphError::Disconnected(v.as_str().to_owned()));
    }
    let mut violated = BTreeSet::new();
    let cycles = cycles_geq2(g);
    if !cycles.is_empty() {
        violated.insert(Requirement::R1);
    }
    let span = spanning_path(g);
    if span.is_none() {
        violated.insert(Requirement::R2);
    }
    let pairs = g.parallel_pairs();
    if !pairs.is_empty() {
        violated.insert(Requirement::R3);
    }
    let holds = violated.is_empty();
    let ordering = if holds { span.as_ref().map(|p| p.vertex_sequence(g)) } else { None };
    Ok(PropertyRReport {
        holds,
        violated,
        cycle: cycles.into_iter().next(),
        parallel_pair: pairs.into_iter().next(),
        spanning_path: span.map(|p| p.edge_ids().to_vec()),
        ordering,
    })
}

/// The vertex ordering that makes the adjacency matrix canonical, when
/// requirement (R) holds (absent otherwise, including for disconnected
/// graphs).
pub fn canonical_ordering(g: &DirectedMultigraph) -> Option<Vec<VertexId>> {
    canonical_ordering_with_path(g).map(|(o, _)| o)
}

/// Like [`canonical_ordering`] but also returns the spanning path that
/// induces the ordering.
pub fn canonical_ordering_with_path(g: &DirectedMultigraph) -> Option<(Vec<VertexId>, Path)> {
    if !g.is_connected() {
        return None;
    }
    let report = check_property_r(g).ok()?;
    if !report.holds {
        return None;
    }
    let path = Path::from_edges(
        g,
        &report.spanning_path.clone().unwrap_or_default(),
    )
    .ok()
    .unwrap_or_else(|| Path::empty_at(g.vertex_ids()[0].clone()));
    let ordering = report.ordering.expect("ordering present when (R) holds");
    Some((ordering, path))
}

// -----------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vid(s: &str) -> VertexId {
        VertexId::new(s)
    }
    fn eid(s: &str) -> EdgeId {
        EdgeId::new(s)
    }

    // Brute-force cycle oracle: try every edge sequence up to |V| edges,
    // keep the valid simple cycles of length >= 2, canonicalize by rotating
    // the smallest source vertex to the front.
    fn cycles_by_brute_force(g: &DirectedMultigraph) -> BTreeSet<Vec<EdgeId>> {
        let m = g.edge_count();
        let n = g.vertex_count();
        let mut out = BTreeSet::new();
        let mut seq = Vec::new();
        fn rec(
            g: &DirectedMultigraph,
            m: usize,
            n: usize,
            seq: &mut Vec<usize>,
            out: &mut BTreeSet<Vec<EdgeId>>,
        ) {
            if seq.len() >= 2 {
                let joined = seq.windows(2).all(|w| g.range_index(w[0]) == g.source_index(w[1]));
                let closes = g.range_index(*seq.last().unwrap()) == g.source_index(seq[0]);
                let sources: BTreeSet<usize> = seq.iter().map(|&e| g.source_index(e)).collect();
                if joined && closes && sources.len() == seq.len() {
                    let (anchor, _) = seq
                        .iter()
                        .enumerate()
                        .min_by_key(|(_, &e)| g.source_index(e))
                        .unwrap();
                    let rotated: Vec<EdgeId> = (0..seq.len())
                        .map(|k| g.edges()[seq[(anchor + k) % seq.len()]].id.clone())
                        .collect();
                    out.insert(rotated);
                }
            }
            if seq.len() == n {
                return;
            }
            for e in 0..m {
                seq.push(e);
                rec(g, m, n, seq, out);
                seq.pop();
            }
        }
        rec(g, m, n, &mut seq, &mut out);
        out
    }

    // Permutation-search oracle for the canonical-form characterization.
    fn canonical_by_search(g: &DirectedMultigraph) -> Option<Vec<VertexId>> {
        let vs = g.vertex_ids();
        for perm in vs.iter().cloned().permutations(vs.len()) {
            if adjacency_matrix(g, &perm).unwrap().is_canonical() {
                return Some(perm);
            }
        }
        None
    }

    #[test]
    fn parses_a_single_edge() {
        let g = parse_graph("vertices: 2\ne: 1 -> 2\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        let e = g.edge(&eid("e")).unwrap();
        assert_eq!(e.source, vid("1"));
        assert_eq!(e.range, vid("2"));
    }

    #[test]
    fn parses_comments_blank_lines_and_auto_ids() {
        let text = "# single loop plus arrow\nvertices: a,b\n\na -> b   # becomes e1\nl: a -> a\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.edge(&eid("e1")).is_some());
        assert!(g.is_loop(g.edge_index(&eid("l")).unwrap()));
    }

    #[test]
    fn parses_vertex_count_form() {
        let g = parse_graph("vertices: 3\ne12: 1 -> 2\ne23: 2 -> 3\n").unwrap();
        assert_eq!(
            g.vertex_ids().iter().map(|v| v.as_str().to_owned()).collect::<Vec<_>>(),
            vec!["1", "2", "3"]
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_graph("vertices: 2\n1 => 2\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err}");

        let err = parse_graph("e: 1 -> 2\nvertices: 2\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }), "{err}");

        let err = parse_graph("vertices: 2\ne: 1 -> 2\ne: 2 -> 1\n").unwrap_err();
        assert!(matches!(err, GraphError::DuplicateEdge(_)), "{err}");

        let err = parse_graph("vertices: 2\ne: 1 -> 3\n").unwrap_err();
        assert!(matches!(err, GraphError::UndeclaredVertex { .. }), "{err}");

        let err = parse_graph("vertices: 0\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }), "{err}");

        let err = parse_graph("# nothing\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { .. }), "{err}");
    }

    #[test]
    fn connectivity_means_no_stray_vertex() {
        let g = parse_graph("vertices: 2\ne11: 1 -> 1\n").unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.isolated_vertex().unwrap(), &vid("2"));

        // Two arrows sharing no vertex: connected in our sense, ordinarily not.
        let g = graph_from_matrix(&[
            vec![0, 1, 0, 0, 0],
            vec![0, 0, 0, 0, 0],
            vec![0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 1],
            vec![0, 0, 0, 0, 0],
        ])
        .unwrap();
        assert!(g.is_connected());
        assert!(!g.is_weakly_connected());
    }

    #[test]
    fn adjacency_matrix_respects_order() {
        let g = parse_graph("vertices: 2\ne11: 1 -> 1\ne12: 1 -> 2\n").unwrap();
        let natural = adjacency_matrix(&g, g.vertex_ids()).unwrap();
        assert_eq!(natural.entries, vec![vec![1, 1], vec![0, 0]]);
        let flipped = adjacency_matrix(&g, &[vid("2"), vid("1")]).unwrap();
        assert_eq!(flipped.entries, vec![vec![0, 0], vec![1, 1]]);
        let err = adjacency_matrix(&g, &[vid("1"), vid("1")]).unwrap_err();
        assert!(matches!(err, GraphError::NotAPermutation));
    }

    #[test]
    fn cycle_enumeration_matches_brute_force_on_small_graphs() {
        // Exhaustive: all 2-vertex multiplicity-<=2 and 3-vertex simple matrices.
        let mut checked = 0usize;
        for bits in 0..3u32.pow(4) {
            let m = vec![
                vec![bits % 3, (bits / 3) % 3],
                vec![(bits / 9) % 3, (bits / 27) % 3],
            ];
            let g = graph_from_matrix(&m).unwrap();
            let got: BTreeSet<Vec<EdgeId>> = cycles_geq2(&g).into_iter().collect();
            assert_eq!(got, cycles_by_brute_force(&g), "matrix {m:?}");
            checked += 1;
        }
        for bits in 0..2u32.pow(9) {
            let m: Vec<Vec<u32>> =
                (0..3).map(|i| (0..3).map(|j| (bits >> (3 * i + j)) & 1).collect()).collect();
            let g = graph_from_matrix(&m).unwrap();
            let got: BTreeSet<Vec<EdgeId>> = cycles_geq2(&g).into_iter().collect();
            assert_eq!(got, cycles_by_brute_force(&g), "matrix {m:?}");
            checked += 1;
        }
        assert_eq!(checked, 81 + 512);
    }

    #[test]
    fn cycles_on_named_graphs() {
        let p3 = graph_from_matrix(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
        assert!(cycles_geq2(&p3).is_empty());

        let k2 = graph_from_matrix(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(cycles_geq2(&k2), vec![vec![eid("e12"), eid("e21")]]);

        // Loop-only graphs have no cycles of length >= 2.
        let t = graph_from_matrix(&[vec![1, 1], vec![0, 0]]).unwrap();
        assert!(cycles_geq2(&t).is_empty());

        let gamma0 =
            graph_from_matrix(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(cycles_geq2(&gamma0), vec![vec![eid("e23"), eid("e32")]]);
    }

    #[test]
    fn spanning_path_and_its_absence() {
        let p4 = graph_from_matrix(&[
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 0, 0],
        ])
        .unwrap();
        let p = spanning_path(&p4).unwrap();
        assert_eq!(p.edge_ids(), &[eid("e12"), eid("e23"), eid("e34")]);

        let two_loops = graph_from_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(spanning_path(&two_loops).is_none());

        let single_loop = graph_from_matrix(&[vec![1]]).unwrap();
        let p = spanning_path(&single_loop).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.source(), &vid("1"));
    }

    #[test]
    fn property_r_reports_exact_violations() {
        // K2: only R1 fails.
        let k2 = graph_from_matrix(&[vec![0, 1], vec![1, 0]]).unwrap();
        let r = check_property_r(&k2).unwrap();
        assert!(!r.holds);
        assert_eq!(r.violated.iter().copied().collect::<Vec<_>>(), vec![Requirement::R1]);
        assert_eq!(r.cycle, Some(vec![eid("e12"), eid("e21")]));

        // Two loops, no connecting edge: only R2 fails.
        let l11 = graph_from_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
        let r = check_property_r(&l11).unwrap();
        assert_eq!(r.violated.iter().copied().collect::<Vec<_>>(), vec![Requirement::R2]);

        // Loop + double edge: only R3 fails.
        let l2p = graph_from_matrix(&[vec![1, 2], vec![0, 0]]).unwrap();
        let r = check_property_r(&l2p).unwrap();
        assert_eq!(r.violated.iter().copied().collect::<Vec<_>>(), vec![Requirement::R3]);
        assert_eq!(r.parallel_pair, Some((eid("e12a"), eid("e12b"))));

        // Full upper-triangular 5x5 with loops: (R) holds.
        let mut m = vec![vec![0u32; 5]; 5];
        for i in 0..5 {
            for j in i..5 {
                m[i][j] = 1;
            }
        }
        let l9 = graph_from_matrix(&m).unwrap();
        let r = check_property_r(&l9).unwrap();
        assert!(r.holds, "violated: {:?}", r.violated);
        assert_eq!(
            r.ordering.unwrap(),
            (1..=5).map(|k| vid(&k.to_string())).collect::<Vec<_>>()
        );

        // Disconnected input is a precondition error.
        let stray = parse_graph("vertices: 2\ne11: 1 -> 1\n").unwrap();
        assert!(matches!(check_property_r(&stray), Err(GraphError::Disconnected(_))));
    }

    #[test]
    fn canonical_ordering_on_relabeled_path() {
        // P3 with the spanning order 3 -> 1 -> 2.
        let g = DirectedMultigraph::new(
            vec!["1", "2", "3"],
            vec![("a", "3", "1"), ("b", "1", "2")],
        )
        .unwrap();
        let ord = canonical_ordering(&g).unwrap();
        assert_eq!(ord, vec![vid("3"), vid("1"), vid("2")]);
        // Independent oracle: permutation search finds the same (unique) order.
        assert_eq!(canonical_by_search(&g), Some(ord.clone()));
        assert!(adjacency_matrix(&g, &ord).unwrap().is_canonical());

        let gamma0 =
            graph_from_matrix(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(canonical_ordering(&gamma0), None);
        assert_eq!(canonical_by_search(&gamma0), None);
    }

    #[test]
    fn canonical_matrix_shapes() {
        assert!(matrix_is_canonical(&[vec![1, 1], vec![0, 1]]));
        assert!(matrix_is_canonical(&[vec![0]]));
        assert!(matrix_is_canonical(&[vec![1]]));
        assert!(!matrix_is_canonical(&[vec![0, 1], vec![1, 0]])); // below-diagonal entry
        assert!(!matrix_is_canonical(&[vec![0, 2], vec![0, 0]])); // multiplicity 2
        assert!(!matrix_is_canonical(&[vec![1, 0], vec![0, 1]])); // superdiagonal hole
        assert!(!matrix_is_canonical(&[])); // empty
    }

    #[test]
    fn matrix_round_trip_and_ids() {
        let g = graph_from_matrix(&[vec![0, 2], vec![0, 0]]).unwrap();
        let ids: Vec<&str> = g.edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, vec!["e12a", "e12b"]);
        assert_eq!(g.first_parallel_pair(), Some((eid("e12a"), eid("e12b"))));

        let g = graph_from_matrix(&[vec![1, 1], vec![0, 1]]).unwrap();
        let ids: Vec<&str> = g.edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, vec!["e11", "e12", "e22"]);
    }

    #[test]
    fn file_round_trip_on_tricky_names() {
        for g in [
            graph_from_matrix(&[vec![1]]).unwrap(),
            graph_from_matrix(&[vec![1, 2], vec![0, 1]]).unwrap(),
            DirectedMultigraph::new(vec!["7"], vec![("l", "7", "7")]).unwrap(),
            DirectedMultigraph::new(vec!["x"], vec![("l", "x", "x")]).unwrap(),
        ] {
            let text = g.to_file_string();
            assert_eq!(parse_graph(&text).unwrap(), g, "file:\n{text}");
        }
    }

    #[test]
    fn dot_output_labels_edges() {
        let g = parse_graph("vertices: 2\ne12: 1 -> 2\n").unwrap();
        let dot = g.emit_dot();
        assert!(dot.starts_with("digraph {"));
        assert!(dot.contains("\"1\" -> \"2\" [label=\"e12\"];"), "{dot}");
    }

    #[test]
    fn path_prefix_calculus() {
        let g = graph_from_matrix(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
        let full = Path::from_edges(&g, &[eid("e12"), eid("e23")]).unwrap();
        let head = Path::from_edges(&g, &[eid("e12")]).unwrap();
        let empty1 = Path::empty_at(vid("1"));
        assert!(head.is_prefix_of(&full));
        assert!(empty1.is_prefix_of(&full));
        assert!(!full.is_prefix_of(&head));
        let tail = head.suffix_after(&full);
        assert_eq!(tail.edge_ids(), &[eid("e23")]);
        assert_eq!(tail.source(), &vid("2"));
        assert_eq!(head.concat(&tail).unwrap(), full);
        assert_eq!(head.concat(&Path::empty_at(vid("1"))), None);

        let err = Path::from_edges(&g, &[eid("e23"), eid("e12")]).unwrap_err();
        assert!(matches!(err, GraphError::BrokenPath(_, _)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Requirement (R) decision agrees with exhaustive canonical-order search.
        #[test]
        fn property_r_matches_permutation_search(bits in 0u32..3u32.pow(9)) {
            let mut b = bits;
            let m: Vec<Vec<u32>> = (0..3)
                .map(|_| (0..3).map(|_| { let v = b % 3; b /= 3; v }).collect())
                .collect();
            let g = graph_from_matrix(&m).unwrap();
            prop_assume!(g.is_connected());
            let holds = check_property_r(&g).unwrap().holds;
            let search = canonical_by_search(&g).is_some();
            prop_assert_eq!(holds, search, "matrix {:?}", m);
        }

        // graph -> file -> graph is the identity.
        #[test]
        fn file_round_trip(bits in 0u32..3u32.pow(9)) {
            let mut b = bits;
            let m: Vec<Vec<u32>> = (0..3)
                .map(|_| (0..3).map(|_| { let v = b % 3; b /= 3; v }).collect())
                .collect();
            let g = graph_from_matrix(&m).unwrap();
            let text = g.to_file_string();
            prop_assert_eq!(parse_graph(&text).unwrap(), g);
        }

        // graph_from_matrix inverts adjacency_matrix in the natural order.
        #[test]
        fn matrix_round_trip(bits in 0u32..3u32.pow(9)) {
            let mut b = bits;
            let m: Vec<Vec<u32>> = (0..3)
                .map(|_| (0..3).map(|_| { let v = b % 3; b /= 3; v }).collect())
                .collect();
            let g = graph_from_matrix(&m).unwrap();
            let back = adjacency_matrix(&g, g.vertex_ids()).unwrap();
            prop_assert_eq!(back.entries, m);
        }
    }
}
