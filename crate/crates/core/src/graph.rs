//! Compact metric graphs with δ-type vertex conditions and the surgeries
//! used by the interlacing and nodal-count machinery.
//!
//! Edge `i` running from `u` to `v` owns two directed coordinates:
//! index `2i` is the end at `u`, index `2i + 1` the end at `v`. A
//! self-loop therefore contributes two distinct ends at the same vertex.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_TAG: &str = "nodalscope-graph-v1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("malformed graph document: {0}")]
    Malformed(String),
    #[error("unsupported format tag `{0}` (expected `{FORMAT_TAG}`)")]
    UnsupportedFormat(String),
    #[error("edge `{edge}`: nonpositive length {length}")]
    NonPositiveLength { edge: String, length: f64 },
    #[error("edge `{edge}`: dangling endpoint reference `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),
    #[error("vertex `{0}` has no incident edges")]
    IsolatedVertex(String),
    #[error("vertex `{0}`: delta coefficient must be finite")]
    NonFiniteDelta(String),
    #[error("point on edge `{edge}` at offset {offset} is not strictly interior")]
    OffsetAtEndpoint { edge: String, offset: f64 },
    #[error("point on edge `{edge}`: offset {offset} outside [0, {length}]")]
    OffsetOutOfRange { edge: String, offset: f64, length: f64 },
    #[error("cannot glue vertex `{0}` to itself")]
    SameVertex(String),
    #[error("cannot glue Dirichlet vertex `{0}`")]
    DirichletGlue(String),
    #[error("edge list is not a simple cycle: {0}")]
    NotSimpleCycle(String),
    #[error("cycles not disjoint: vertex `{0}` lies on two cycles")]
    CyclesNotDisjoint(String),
}

/// δ-type condition: continuity plus `sum of outgoing derivatives = alpha * f(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexCondition {
    Neumann,
    Dirichlet,
    Delta(f64),
}

impl VertexCondition {
    /// Maps `Delta(0)` to `Neumann` and `Delta(±inf)` to `Dirichlet`.
    pub fn canonical(self) -> Self {
        match self {
            VertexCondition::Delta(a) if a == 0.0 => VertexCondition::Neumann,
            VertexCondition::Delta(a) if a.is_infinite() => VertexCondition::Dirichlet,
            c => c,
        }
    }

    /// Finite coefficient, `None` for Dirichlet.
    pub fn alpha(self) -> Option<f64> {
        match self {
            VertexCondition::Neumann => Some(0.0),
            VertexCondition::Delta(a) => Some(a),
            VertexCondition::Dirichlet => None,
        }
    }

    pub fn from_alpha(alpha: f64) -> Self {
        VertexCondition::Delta(alpha).canonical()
    }

    pub fn is_dirichlet(self) -> bool {
        matches!(self, VertexCondition::Dirichlet)
    }

    pub fn is_neumann(self) -> bool {
        matches!(self.canonical(), VertexCondition::Neumann)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub condition: VertexCondition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub length: f64,
}

/// A point on an edge, `offset` measured from the edge's `from` vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphPoint {
    pub edge: String,
    pub offset: f64,
}

impl GraphPoint {
    pub fn new(edge: impl Into<String>, offset: f64) -> Self {
        GraphPoint { edge: edge.into(), offset }
    }
}

impl fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.edge, self.offset)
    }
}

impl FromStr for GraphPoint {
    type Err = GraphError;

    /// Parses `EDGE:OFFSET`; the split happens at the last colon.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (edge, off) = s
            .rsplit_once(':')
            .ok_or_else(|| GraphError::Malformed(format!("point `{s}` is not EDGE:OFFSET")))?;
        let offset: f64 = off
            .trim()
            .parse()
            .map_err(|_| GraphError::Malformed(format!("point `{s}`: bad offset")))?;
        Ok(GraphPoint::new(edge.trim(), offset))
    }
}

/// Immutable metric graph. All surgeries return new values.
#[derive(Debug, Clone)]
pub struct MetricGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    ends: Vec<Vec<usize>>,
}

impl PartialEq for MetricGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: Vec<(String, VertexCondition)>,
    edges: Vec<(String, String, String, f64)>,
}

impl GraphBuilder {
    pub fn vertex(mut self, id: impl Into<String>, condition: VertexCondition) -> Self {
        self.vertices.push((id.into(), condition));
        self
    }

    pub fn edge(
        mut self,
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        length: f64,
    ) -> Self {
        self.edges.push((id.into(), from.into(), to.into(), length));
        self
    }

    pub fn build(self) -> Result<MetricGraph, GraphError> {
        MetricGraph::new(self.vertices, self.edges)
    }
}

impl MetricGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// Validates and assembles a graph from `(id, condition)` vertices and
    /// `(id, from, to, length)` edges.
    pub fn new(
        vertices: Vec<(String, VertexCondition)>,
        edges: Vec<(String, String, String, f64)>,
    ) -> Result<Self, GraphError> {
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        let mut vs = Vec::with_capacity(vertices.len());
        for (id, condition) in vertices {
            if let VertexCondition::Delta(a) = condition {
                if !a.is_finite() {
                    return Err(GraphError::NonFiniteDelta(id));
                }
            }
            if vertex_index.insert(id.clone(), vs.len()).is_some() {
                return Err(GraphError::DuplicateVertex(id));
            }
            vs.push(Vertex { id, condition: condition.canonical() });
        }
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut es = Vec::with_capacity(edges.len());
        for (id, from, to, length) in edges {
            if !(length > 0.0 && length.is_finite()) {
                return Err(GraphError::NonPositiveLength { edge: id, length });
            }
            let lookup = |v: &String| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| GraphError::DanglingEndpoint { edge: id.clone(), vertex: v.clone() })
            };
            let (f, t) = (lookup(&from)?, lookup(&to)?);
            if edge_index.insert(id.clone(), es.len()).is_some() {
                return Err(GraphError::DuplicateEdge(id));
            }
            es.push(Edge { id, from: f, to: t, length });
        }
        let mut ends = vec![Vec::new(); vs.len()];
        for (i, e) in es.iter().enumerate() {
            ends[e.from].push(2 * i);
            ends[e.to].push(2 * i + 1);
        }
        if let Some(v) = ends.iter().position(|x| x.is_empty()) {
            return Err(GraphError::IsolatedVertex(vs[v].id.clone()));
        }
        Ok(MetricGraph { vertices: vs, edges: es, vertex_index, edge_index, ends })
    }

    /// The graph with no vertices and no edges (what remains after removing
    /// the only cycle of a bare loop).
    pub fn empty() -> Self {
        MetricGraph::new(Vec::new(), Vec::new()).expect("empty graph is valid")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertex_idx(&self, id: &str) -> Result<usize, GraphError> {
        self.vertex_index.get(id).copied().ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn edge_idx(&self, id: &str) -> Result<usize, GraphError> {
        self.edge_index.get(id).copied().ok_or_else(|| GraphError::UnknownEdge(id.to_string()))
    }

    pub fn vertex(&self, id: &str) -> Result<&Vertex, GraphError> {
        Ok(&self.vertices[self.vertex_idx(id)?])
    }

    pub fn edge(&self, id: &str) -> Result<&Edge, GraphError> {
        Ok(&self.edges[self.edge_idx(id)?])
    }

    /// Directed coordinates (edge ends) meeting at vertex `v`.
    pub fn ends(&self, v: usize) -> &[usize] {
        &self.ends[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.ends[v].len()
    }

    /// Vertex at which directed coordinate `j` sits.
    pub fn end_vertex(&self, j: usize) -> usize {
        let e = &self.edges[j / 2];
        if j % 2 == 0 {
            e.from
        } else {
            e.to
        }
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn is_neumann_dirichlet(&self) -> bool {
        self.vertices.iter().all(|v| matches!(v.condition, VertexCondition::Neumann | VertexCondition::Dirichlet))
    }

    /// Component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut dsu = Dsu::new(self.vertices.len());
        for e in &self.edges {
            dsu.union(e.from, e.to);
        }
        let mut label = HashMap::new();
        let labels: Vec<usize> = (0..self.vertices.len())
            .map(|v| {
                let r = dsu.find(v);
                let next = label.len();
                *label.entry(r).or_insert(next)
            })
            .collect();
        (labels, label.len())
    }

    pub fn num_components(&self) -> usize {
        self.components().1
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    /// Components on which every vertex is Neumann; each carries one zero mode.
    pub fn neumann_components(&self) -> usize {
        let (labels, n) = self.components();
        let mut ok = vec![true; n];
        for (v, vert) in self.vertices.iter().enumerate() {
            if vert.condition != VertexCondition::Neumann {
                ok[labels[v]] = false;
            }
        }
        ok.into_iter().filter(|&b| b).count()
    }

    /// `|E| - |V| + #components`; equals `|E| - |V| + 1` when connected.
    pub fn cyclomatic_number(&self) -> usize {
        (self.edges.len() + self.num_components()) - self.vertices.len()
    }

    /// Resolves a point to `(edge index, offset)` after range checks.
    pub fn locate(&self, p: &GraphPoint) -> Result<(usize, f64), GraphError> {
        let i = self.edge_idx(&p.edge)?;
        let len = self.edges[i].length;
        if !(p.offset >= 0.0 && p.offset <= len) {
            return Err(GraphError::OffsetOutOfRange { edge: p.edge.clone(), offset: p.offset, length: len });
        }
        Ok((i, p.offset))
    }

    fn locate_interior(&self, p: &GraphPoint) -> Result<(usize, f64), GraphError> {
        let (i, s) = self.locate(p)?;
        if s <= 0.0 || s >= self.edges[i].length {
            return Err(GraphError::OffsetAtEndpoint { edge: p.edge.clone(), offset: p.offset });
        }
        Ok((i, s))
    }

    fn parts(&self) -> (Vec<(String, VertexCondition)>, Vec<(String, String, String, f64)>) {
        let vs = self.vertices.iter().map(|v| (v.id.clone(), v.condition)).collect();
        let es = self
            .edges
            .iter()
            .map(|e| (e.id.clone(), self.vertices[e.from].id.clone(), self.vertices[e.to].id.clone(), e.length))
            .collect();
        (vs, es)
    }

    fn fresh_vertex_id(&self, base: &str) -> String {
        fresh_id(base, |s| self.vertex_index.contains_key(s))
    }

    fn fresh_edge_id(&self, base: &str, taken: &HashSet<String>) -> String {
        fresh_id(base, |s| self.edge_index.contains_key(s) || taken.contains(s))
    }

    pub fn change_vertex_parameter(&self, v: &str, c: VertexCondition) -> Result<Self, GraphError> {
        let idx = self.vertex_idx(v)?;
        let (mut vs, es) = self.parts();
        vs[idx].1 = c;
        MetricGraph::new(vs, es)
    }

    /// Merges `v1` into `v0`; the merged vertex keeps `v0`'s id and carries
    /// `Delta(alpha0 + alpha1)`.
    pub fn glue_vertices(&self, v0: &str, v1: &str) -> Result<Self, GraphError> {
        let (i0, i1) = (self.vertex_idx(v0)?, self.vertex_idx(v1)?);
        if i0 == i1 {
            return Err(GraphError::SameVertex(v0.to_string()));
        }
        let a0 = self.vertices[i0].condition.alpha().ok_or_else(|| GraphError::DirichletGlue(v0.to_string()))?;
        let a1 = self.vertices[i1].condition.alpha().ok_or_else(|| GraphError::DirichletGlue(v1.to_string()))?;
        let (mut vs, mut es) = self.parts();
        vs[i0].1 = VertexCondition::from_alpha(a0 + a1);
        vs.remove(i1);
        for e in &mut es {
            if e.1 == v1 {
                e.1 = v0.to_string();
            }
            if e.2 == v1 {
                e.2 = v0.to_string();
            }
        }
        MetricGraph::new(vs, es)
    }

    /// Splits the edge at an interior point into `id.a` (from side) and
    /// `id.b` (to side), ending at two new degree-1 vertices.
    pub fn cut_at_point(&self, p: &GraphPoint, alpha_left: f64, alpha_right: f64) -> Result<Self, GraphError> {
        let (i, s) = self.locate_interior(p)?;
        let e = &self.edges[i];
        let left = self.fresh_vertex_id(&format!("{}#l", e.id));
        let right = fresh_id(&format!("{}#r", e.id), |x| self.vertex_index.contains_key(x) || x == left);
        let (mut vs, mut es) = self.parts();
        vs.push((left.clone(), VertexCondition::from_alpha(alpha_left)));
        vs.push((right.clone(), VertexCondition::from_alpha(alpha_right)));
        let (ida, idb) = self.split_ids(&e.id);
        let (u, v) = (self.vertices[e.from].id.clone(), self.vertices[e.to].id.clone());
        es[i] = (ida, u, left, s);
        es.insert(i + 1, (idb, right, v, e.length - s));
        MetricGraph::new(vs, es)
    }

    /// Splits the edge at an interior point with a new degree-2 vertex.
    pub fn insert_degree2_vertex(&self, p: &GraphPoint, c: VertexCondition) -> Result<(Self, String), GraphError> {
        let (i, s) = self.locate_interior(p)?;
        let e = &self.edges[i];
        let w = self.fresh_vertex_id(&format!("{}#p", e.id));
        let (mut vs, mut es) = self.parts();
        vs.push((w.clone(), c));
        let (ida, idb) = self.split_ids(&e.id);
        let (u, v) = (self.vertices[e.from].id.clone(), self.vertices[e.to].id.clone());
        es[i] = (ida, u, w.clone(), s);
        es.insert(i + 1, (idb, w.clone(), v, e.length - s));
        Ok((MetricGraph::new(vs, es)?, w))
    }

    /// Inserts degree-2 vertices at several interior points (possibly on the
    /// same edge); returns the new vertex ids in input order.
    pub fn insert_points(&self, points: &[GraphPoint], c: VertexCondition) -> Result<(Self, Vec<String>), GraphError> {
        let mut located = Vec::with_capacity(points.len());
        for (n, p) in points.iter().enumerate() {
            let (i, s) = self.locate_interior(p)?;
            if located.iter().any(|&(_, j, t)| j == i && t == s) {
                return Err(GraphError::Malformed(format!("point {p} given twice")));
            }
            located.push((n, i, s));
        }
        // Largest offsets first: the piece starting at `from` keeps its
        // coordinate, so later points on the same edge land on it.
        located.sort_by(|x, y| x.1.cmp(&y.1).then(y.2.total_cmp(&x.2)));
        let mut g = self.clone();
        let mut piece: HashMap<usize, String> = HashMap::new();
        let mut ids = vec![String::new(); points.len()];
        for (n, i, s) in located {
            let current = piece.get(&i).cloned().unwrap_or_else(|| self.edges[i].id.clone());
            let slot = g.edge_idx(&current)?;
            let (h, w) = g.insert_degree2_vertex(&GraphPoint::new(current, s), c)?;
            piece.insert(i, h.edges[slot].id.clone());
            g = h;
            ids[n] = w;
        }
        Ok((g, ids))
    }

    fn split_ids(&self, id: &str) -> (String, String) {
        let mut taken = HashSet::new();
        let a = self.fresh_edge_id(&format!("{id}.a"), &taken);
        taken.insert(a.clone());
        let b = self.fresh_edge_id(&format!("{id}.b"), &taken);
        (a, b)
    }

    /// Checks that `cycle` lists the edges of one simple cycle and returns
    /// the vertices on it.
    pub fn cycle_vertices(&self, cycle: &[String]) -> Result<Vec<usize>, GraphError> {
        if cycle.is_empty() {
            return Err(GraphError::NotSimpleCycle("empty edge list".into()));
        }
        let mut seen = HashSet::new();
        let mut incid: HashMap<usize, usize> = HashMap::new();
        let mut dsu = Dsu::new(self.vertices.len());
        for id in cycle {
            let i = self.edge_idx(id)?;
            if !seen.insert(i) {
                return Err(GraphError::NotSimpleCycle(format!("edge `{id}` repeated")));
            }
            let e = &self.edges[i];
            *incid.entry(e.from).or_default() += 1;
            *incid.entry(e.to).or_default() += 1;
            dsu.union(e.from, e.to);
        }
        if let Some((&v, _)) = incid.iter().find(|&(_, &c)| c != 2) {
            return Err(GraphError::NotSimpleCycle(format!(
                "vertex `{}` has {} incidences",
                self.vertices[v].id, incid[&v]
            )));
        }
        let mut vs: Vec<usize> = incid.keys().copied().collect();
        vs.sort_unstable();
        let root = dsu.find(vs[0]);
        if vs.iter().any(|&v| dsu.find(v) != root) {
            return Err(GraphError::NotSimpleCycle("edges form several cycles".into()));
        }
        Ok(vs)
    }

    /// Deletes the cycle's edges; cycle vertices that keep an edge become
    /// Dirichlet, the others disappear.
    pub fn remove_cycle_dirichlet(&self, cycle: &[String]) -> Result<Self, GraphError> {
        let on_cycle: HashSet<usize> = self.cycle_vertices(cycle)?.into_iter().collect();
        let removed: HashSet<&str> = cycle.iter().map(String::as_str).collect();
        let mut keeps = vec![false; self.vertices.len()];
        let mut es = Vec::new();
        for e in &self.edges {
            if removed.contains(e.id.as_str()) {
                continue;
            }
            keeps[e.from] = true;
            keeps[e.to] = true;
            es.push((e.id.clone(), self.vertices[e.from].id.clone(), self.vertices[e.to].id.clone(), e.length));
        }
        let vs = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| keeps[i])
            .map(|(i, v)| {
                let c = if on_cycle.contains(&i) { VertexCondition::Dirichlet } else { v.condition };
                (v.id.clone(), c)
            })
            .collect();
        MetricGraph::new(vs, es)
    }

    /// Fundamental cycles of a BFS spanning forest, as `(edge ids, vertices)`.
    /// Their edge sets span the cycle space over GF(2).
    pub fn fundamental_cycles(&self) -> Vec<(Vec<String>, Vec<usize>)> {
        let n = self.vertices.len();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut tree_edge = vec![false; self.edges.len()];
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for &j in &self.ends[x] {
                    let i = j / 2;
                    let e = &self.edges[i];
                    let y = if e.from == x { e.to } else { e.from };
                    if depth[y] == usize::MAX {
                        depth[y] = depth[x] + 1;
                        parent[y] = Some((x, i));
                        tree_edge[i] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut cycles = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if tree_edge[i] {
                continue;
            }
            let (mut a, mut b) = (e.from, e.to);
            let mut up = Vec::new();
            let mut down = Vec::new();
            let mut verts = vec![a, b];
            while a != b {
                if depth[a] >= depth[b] {
                    let (p, pe) = parent[a].expect("non-root has parent");
                    up.push(pe);
                    a = p;
                    verts.push(a);
                } else {
                    let (p, pe) = parent[b].expect("non-root has parent");
                    down.push(pe);
                    b = p;
                    verts.push(b);
                }
            }
            verts.sort_unstable();
            verts.dedup();
            let mut cyc: Vec<String> = up.iter().map(|&k| self.edges[k].id.clone()).collect();
            cyc.extend(down.iter().rev().map(|&k| self.edges[k].id.clone()));
            cyc.push(e.id.clone());
            cycles.push((cyc, verts));
        }
        cycles
    }

    /// All simple cycles, provided they are pairwise vertex-disjoint.
    ///
    /// Fundamental cycles of a spanning forest are pairwise disjoint exactly
    /// when all simple cycles are, and then they are the only simple cycles.
    pub fn find_cycles(&self) -> Result<Vec<Vec<String>>, GraphError> {
        let mut owner: HashMap<usize, usize> = HashMap::new();
        let mut cycles = Vec::new();
        for (idx, (cyc, verts)) in self.fundamental_cycles().into_iter().enumerate() {
            for v in verts {
                if owner.insert(v, idx).is_some() {
                    return Err(GraphError::CyclesNotDisjoint(self.vertices[v].id.clone()));
                }
            }
            cycles.push(cyc);
        }
        Ok(cycles)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            format: Some(FORMAT_TAG.to_string()),
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexDoc { id: v.id.clone(), condition: v.condition.into() })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    from: self.vertices[e.from].id.clone(),
                    to: self.vertices[e.to].id.clone(),
                    length: e.length,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: GraphDocument = serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
        doc.into_graph()
    }
}

/// Parses a graph document (see [`GraphDocument`]).
pub fn parse_graph(document: &str) -> Result<MetricGraph, GraphError> {
    MetricGraph::from_json(document)
}

/// Serialized graph: `{"format", "vertices": [{id, condition}], "edges": [{id, from, to, length}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub condition: ConditionDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub from: String,
    pub to: String,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConditionDoc {
    Named(String),
    Delta { delta: f64 },
}

impl From<VertexCondition> for ConditionDoc {
    fn from(c: VertexCondition) -> Self {
        match c {
            VertexCondition::Neumann => ConditionDoc::Named("neumann".into()),
            VertexCondition::Dirichlet => ConditionDoc::Named("dirichlet".into()),
            VertexCondition::Delta(a) => ConditionDoc::Delta { delta: a },
        }
    }
}

impl GraphDocument {
    pub fn into_graph(self) -> Result<MetricGraph, GraphError> {
        if let Some(tag) = &self.format {
            if tag != FORMAT_TAG {
                return Err(GraphError::UnsupportedFormat(tag.clone()));
            }
        }
        let mut vs = Vec::with_capacity(self.vertices.len());
        for v in self.vertices {
            let c = match v.condition {
                ConditionDoc::Named(name) => match name.to_ascii_lowercase().as_str() {
                    "neumann" => VertexCondition::Neumann,
                    "dirichlet" => VertexCondition::Dirichlet,
                    other => {
                        return Err(GraphError::Malformed(format!("vertex `{}`: unknown condition `{other}`", v.id)))
                    }
                },
                ConditionDoc::Delta { delta } => VertexCondition::Delta(delta),
            };
            vs.push((v.id, c));
        }
        let es = self.edges.into_iter().map(|e| (e.id, e.from, e.to, e.length)).collect();
        MetricGraph::new(vs, es)
    }
}

fn fresh_id(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..).map(|n| format!("{base}{n}")).find(|s| !taken(s)).expect("unbounded id supply")
}

/// Union-find over `0..n`.
#[derive(Debug, Clone)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}
