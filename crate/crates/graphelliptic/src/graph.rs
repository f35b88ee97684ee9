//! Weighted finite graphs, domain decomposition, and vertex functions.
//!
//! A graph is a vertex list with a positive measure `mu` and symmetric edge
//! weights `w > 0` (zero-weight edges are dropped at load, self-loops are
//! rejected). A [`Domain`] is a connected vertex subset `D` split into the
//! vertex boundary — members with at least one neighbor outside `D`, or a
//! designated superset of those — and the interior. All analysis in the other
//! modules happens on a `Domain`; sums over neighbors are restricted to `D`.

use serde::Deserialize;
use std::collections::{HashMap, VecDeque};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph document parse failure: {0}")]
    Parse(String),
    #[error("vertex {id:?} has non-positive measure {mu}")]
    NonPositiveMeasure { id: String, mu: f64 },
    #[error("edge {a:?}-{b:?} has negative weight {w}")]
    NegativeWeight { a: String, b: String, w: f64 },
    #[error("edge {a:?}-{b:?} appears twice with unequal weights {first} and {second}")]
    AsymmetricWeight {
        a: String,
        b: String,
        first: f64,
        second: f64,
    },
    #[error("self-loop on vertex {id:?}")]
    SelfLoop { id: String },
    #[error("duplicate vertex id {id:?}")]
    DuplicateVertex { id: String },
    #[error("unknown vertex id {id:?}")]
    UnknownVertex { id: String },
}

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("domain has no vertices")]
    EmptyDomain,
    #[error("domain interior is empty")]
    EmptyInterior,
    #[error("domain boundary is empty: no designated boundary and no member has a neighbor outside the domain")]
    EmptyBoundary,
    #[error("domain is not connected in its induced subgraph")]
    DisconnectedDomain,
    #[error("vertex {id:?} is not in the graph")]
    VertexNotInGraph { id: String },
    #[error("duplicate vertex id {id:?} in the domain list")]
    DuplicateVertex { id: String },
    #[error("designated boundary invalid: {reason}")]
    DesignatedBoundaryInvalid { reason: String },
    #[error("vertex function carries {got} values but the domain has {expected} vertices")]
    DomainMismatch { expected: usize, got: usize },
}

/// Symmetric weighted graph with a positive vertex measure.
///
/// Vertices are addressed by their document-order index; ids are looked up
/// through [`WeightedGraph::index_of`].
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    mu: Vec<f64>,
    adj: Vec<Vec<(usize, f64)>>,
    edge_count: usize,
}

impl WeightedGraph {
    /// Builds and validates a graph from `(id, mu)` vertices and
    /// `(a, b, w)` edges. Zero-weight edges are dropped; an edge listed twice
    /// must carry the same weight both times.
    pub fn from_parts<S: AsRef<str>>(
        vertices: &[(S, f64)],
        edges: &[(S, S, f64)],
    ) -> Result<Self, GraphError> {
        let mut ids = Vec::with_capacity(vertices.len());
        let mut index = HashMap::with_capacity(vertices.len());
        let mut mu = Vec::with_capacity(vertices.len());
        for (id, m) in vertices {
            let id = id.as_ref().to_owned();
            if index.contains_key(&id) {
                return Err(GraphError::DuplicateVertex { id });
            }
            if !m.is_finite() || *m <= 0.0 {
                return Err(GraphError::NonPositiveMeasure { id, mu: *m });
            }
            index.insert(id.clone(), ids.len());
            ids.push(id);
            mu.push(*m);
        }

        let mut weights: HashMap<(usize, usize), f64> = HashMap::new();
        for (a, b, w) in edges {
            let (a, b, w) = (a.as_ref(), b.as_ref(), *w);
            let ia = *index
                .get(a)
                .ok_or_else(|| GraphError::UnknownVertex { id: a.to_owned() })?;
            let ib = *index
                .get(b)
                .ok_or_else(|| GraphError::UnknownVertex { id: b.to_owned() })?;
            if !w.is_finite() {
                return Err(GraphError::Parse(format!(
                    "edge {a:?}-{b:?} has non-finite weight"
                )));
            }
            if w < 0.0 {
                return Err(GraphError::NegativeWeight {
                    a: a.to_owned(),
                    b: b.to_owned(),
                    w,
                });
            }
            if ia == ib {
                if w != 0.0 {
                    return Err(GraphError::SelfLoop { id: a.to_owned() });
                }
                continue;
            }
            let key = (ia.min(ib), ia.max(ib));
            match weights.get(&key) {
                Some(&prev) if prev != w => {
                    return Err(GraphError::AsymmetricWeight {
                        a: a.to_owned(),
                        b: b.to_owned(),
                        first: prev,
                        second: w,
                    });
                }
                Some(_) => {}
                None => {
                    weights.insert(key, w);
                }
            }
        }

        let mut adj = vec![Vec::new(); ids.len()];
        let mut edge_count = 0;
        let mut pairs: Vec<_> = weights.into_iter().collect();
        pairs.sort_by_key(|&((a, b), _)| (a, b));
        for ((a, b), w) in pairs {
            if w == 0.0 {
                continue;
            }
            adj[a].push((b, w));
            adj[b].push((a, w));
            edge_count += 1;
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| j);
        }
        Ok(WeightedGraph {
            ids,
            index,
            mu,
            adj,
            edge_count,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn mu(&self, x: usize) -> f64 {
        self.mu[x]
    }

    /// Neighbors of `x` with their (positive) weights, ascending by index.
    pub fn neighbors(&self, x: usize) -> &[(usize, f64)] {
        &self.adj[x]
    }

    /// Weighted degree `sum_y w(x, y)` over the whole graph.
    pub fn degree(&self, x: usize) -> f64 {
        self.adj[x].iter().map(|&(_, w)| w).sum()
    }

    pub fn degree_of(&self, id: &str) -> Result<f64, GraphError> {
        self.index_of(id)
            .map(|x| self.degree(x))
            .ok_or_else(|| GraphError::UnknownVertex { id: id.to_owned() })
    }

    /// Unweighted shortest-path distance; `None` when `y` is unreachable
    /// from `x`, `Some(0)` exactly when `x == y`.
    pub fn path_distance(&self, x: usize, y: usize) -> Option<usize> {
        if x == y {
            return Some(0);
        }
        let mut dist = vec![usize::MAX; self.ids.len()];
        dist[x] = 0;
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            for &(u, _) in &self.adj[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    if u == y {
                        return Some(dist[u]);
                    }
                    queue.push_back(u);
                }
            }
        }
        None
    }
}

/// Parsed graph document: the validated graph plus the optional domain section.
#[derive(Debug, Clone)]
pub struct GraphDocument {
    pub graph: Arc<WeightedGraph>,
    pub domain_vertices: Option<Vec<String>>,
    pub designated_boundary: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawVertex {
    id: String,
    mu: f64,
}

#[derive(Deserialize)]
struct RawEdge {
    a: String,
    b: String,
    w: f64,
}

#[derive(Deserialize)]
struct RawDomain {
    vertices: Vec<String>,
    #[serde(default)]
    boundary: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawGraphDoc {
    vertices: Vec<RawVertex>,
    #[serde(default)]
    edges: Vec<RawEdge>,
    #[serde(default)]
    domain: Option<RawDomain>,
}

/// Parses and validates a JSON graph document.
pub fn load_graph(json: &str) -> Result<GraphDocument, GraphError> {
    let raw: RawGraphDoc =
        serde_json::from_str(json).map_err(|e| GraphError::Parse(e.to_string()))?;
    let vertices: Vec<(String, f64)> = raw.vertices.into_iter().map(|v| (v.id, v.mu)).collect();
    let edges: Vec<(String, String, f64)> =
        raw.edges.into_iter().map(|e| (e.a, e.b, e.w)).collect();
    let graph = WeightedGraph::from_parts(
        &vertices.iter().map(|(i, m)| (i.as_str(), *m)).collect::<Vec<_>>(),
        &edges
            .iter()
            .map(|(a, b, w)| (a.as_str(), b.as_str(), *w))
            .collect::<Vec<_>>(),
    )?;
    Ok(GraphDocument {
        graph: Arc::new(graph),
        domain_vertices: raw.domain.as_ref().map(|d| d.vertices.clone()),
        designated_boundary: raw.domain.and_then(|d| d.boundary),
    })
}

impl GraphDocument {
    /// Decomposes the document's domain section (defaulting to all vertices
    /// when the section is absent).
    pub fn domain(&self) -> Result<Domain, DomainError> {
        let members: Vec<String> = match &self.domain_vertices {
            Some(v) => v.clone(),
            None => (0..self.graph.vertex_count())
                .map(|i| self.graph.id(i).to_owned())
                .collect(),
        };
        Domain::decompose(
            &self.graph,
            &members,
            self.designated_boundary.as_deref(),
        )
    }
}

/// A connected domain `D` with its vertex boundary and interior.
///
/// Vertices of `D` are addressed by *local* index, following the graph's
/// document order. The decomposition is immutable once built; every invariant
/// (connectivity, non-empty interior and boundary, interior vertices having
/// all their neighbors inside `D`) is checked at construction.
#[derive(Debug, Clone)]
pub struct Domain {
    graph: Arc<WeightedGraph>,
    members: Vec<usize>,
    local: HashMap<usize, usize>,
    is_boundary: Vec<bool>,
    interior: Vec<usize>,
    boundary: Vec<usize>,
    adj_in: Vec<Vec<(usize, f64)>>,
    volume: f64,
    mu_min: f64,
    explicit_boundary: bool,
}

impl Domain {
    /// Splits the member set into boundary and interior.
    ///
    /// The computed boundary is `{x in D : exists y outside D with
    /// w(x, y) > 0}`. A designated boundary (for domains without outside
    /// neighbors, e.g. a whole closed graph) must contain the computed one and
    /// replaces it; the result is then flagged [`Domain::explicit_boundary`].
    pub fn decompose<S: AsRef<str>>(
        graph: &Arc<WeightedGraph>,
        members: &[S],
        designated_boundary: Option<&[S]>,
    ) -> Result<Self, DomainError> {
        if members.is_empty() {
            return Err(DomainError::EmptyDomain);
        }
        let mut member_idx = Vec::with_capacity(members.len());
        for id in members {
            let id = id.as_ref();
            let idx = graph
                .index_of(id)
                .ok_or_else(|| DomainError::VertexNotInGraph { id: id.to_owned() })?;
            member_idx.push(idx);
        }
        let mut sorted = member_idx.clone();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(DomainError::DuplicateVertex {
                    id: graph.id(pair[0]).to_owned(),
                });
            }
        }
        let members = sorted;
        let local: HashMap<usize, usize> =
            members.iter().enumerate().map(|(l, &g)| (g, l)).collect();

        // Connectivity of the induced subgraph.
        let mut seen = vec![false; members.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut reached = 1;
        while let Some(l) = queue.pop_front() {
            for &(gn, _) in graph.neighbors(members[l]) {
                if let Some(&ln) = local.get(&gn) {
                    if !seen[ln] {
                        seen[ln] = true;
                        reached += 1;
                        queue.push_back(ln);
                    }
                }
            }
        }
        if reached != members.len() {
            return Err(DomainError::DisconnectedDomain);
        }

        let computed: Vec<bool> = members
            .iter()
            .map(|&g| {
                graph
                    .neighbors(g)
                    .iter()
                    .any(|&(n, _)| !local.contains_key(&n))
            })
            .collect();

        let (is_boundary, explicit_boundary) = match designated_boundary {
            None => (computed, false),
            Some(designated) => {
                let mut flags = vec![false; members.len()];
                for id in designated {
                    let id = id.as_ref();
                    let g = graph
                        .index_of(id)
                        .ok_or_else(|| DomainError::VertexNotInGraph { id: id.to_owned() })?;
                    let l = *local.get(&g).ok_or_else(|| {
                        DomainError::DesignatedBoundaryInvalid {
                            reason: format!("vertex {id:?} is not a domain member"),
                        }
                    })?;
                    flags[l] = true;
                }
                for (l, &c) in computed.iter().enumerate() {
                    if c && !flags[l] {
                        return Err(DomainError::DesignatedBoundaryInvalid {
                            reason: format!(
                                "vertex {:?} has a neighbor outside the domain but is not designated",
                                graph.id(members[l])
                            ),
                        });
                    }
                }
                (flags, true)
            }
        };

        let boundary: Vec<usize> = (0..members.len()).filter(|&l| is_boundary[l]).collect();
        let interior: Vec<usize> = (0..members.len()).filter(|&l| !is_boundary[l]).collect();
        if boundary.is_empty() {
            return Err(DomainError::EmptyBoundary);
        }
        if interior.is_empty() {
            return Err(DomainError::EmptyInterior);
        }

        let adj_in: Vec<Vec<(usize, f64)>> = members
            .iter()
            .map(|&g| {
                graph
                    .neighbors(g)
                    .iter()
                    .filter_map(|&(n, w)| local.get(&n).map(|&ln| (ln, w)))
                    .collect()
            })
            .collect();
        // Interior vertices must keep all their neighbors inside D.
        for &l in &interior {
            debug_assert_eq!(adj_in[l].len(), graph.neighbors(members[l]).len());
        }

        let volume = members.iter().map(|&g| graph.mu(g)).sum();
        let mu_min = members
            .iter()
            .map(|&g| graph.mu(g))
            .fold(f64::INFINITY, f64::min);

        Ok(Domain {
            graph: Arc::clone(graph),
            members,
            local,
            is_boundary,
            interior,
            boundary,
            adj_in,
            volume,
            mu_min,
            explicit_boundary,
        })
    }

    pub fn graph(&self) -> &Arc<WeightedGraph> {
        &self.graph
    }

    /// Number of domain vertices.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn interior_count(&self) -> usize {
        self.interior.len()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary.len()
    }

    /// Total measure `mu(D)`.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `mu_0 = min_D mu`.
    pub fn mu_min(&self) -> f64 {
        self.mu_min
    }

    pub fn explicit_boundary(&self) -> bool {
        self.explicit_boundary
    }

    pub fn graph_index(&self, local: usize) -> usize {
        self.members[local]
    }

    pub fn id_of(&self, local: usize) -> &str {
        self.graph.id(self.members[local])
    }

    pub fn local_of_id(&self, id: &str) -> Option<usize> {
        self.graph.index_of(id).and_then(|g| self.local.get(&g).copied())
    }

    pub fn mu(&self, local: usize) -> f64 {
        self.graph.mu(self.members[local])
    }

    pub fn is_boundary(&self, local: usize) -> bool {
        self.is_boundary[local]
    }

    /// Local indices of interior vertices, ascending.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    /// Local indices of boundary vertices, ascending.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// Neighbors of `local` *within the domain*, as `(local, weight)`.
    pub fn neighbors_in(&self, local: usize) -> &[(usize, f64)] {
        &self.adj_in[local]
    }

    /// Weighted degree restricted to the domain.
    pub fn degree_in(&self, local: usize) -> f64 {
        self.adj_in[local].iter().map(|&(_, w)| w).sum()
    }
}

/// Real-valued function on the vertices of a domain (local index order).
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFn {
    values: Vec<f64>,
}

impl VertexFn {
    pub fn zeros(dom: &Domain) -> Self {
        VertexFn {
            values: vec![0.0; dom.len()],
        }
    }

    pub fn constant(dom: &Domain, c: f64) -> Self {
        VertexFn {
            values: vec![c; dom.len()],
        }
    }

    pub fn from_values(dom: &Domain, values: Vec<f64>) -> Result<Self, DomainError> {
        if values.len() != dom.len() {
            return Err(DomainError::DomainMismatch {
                expected: dom.len(),
                got: values.len(),
            });
        }
        Ok(VertexFn { values })
    }

    /// Zero on the boundary, the given values on the interior (in
    /// [`Domain::interior`] order).
    pub fn from_interior(dom: &Domain, interior_values: &[f64]) -> Self {
        assert_eq!(interior_values.len(), dom.interior_count());
        let mut values = vec![0.0; dom.len()];
        for (&l, &v) in dom.interior().iter().zip(interior_values) {
            values[l] = v;
        }
        VertexFn { values }
    }

    /// Indicator of the interior: 1 on every interior vertex, 0 on the
    /// boundary.
    pub fn interior_indicator(dom: &Domain) -> Self {
        VertexFn::from_interior(dom, &vec![1.0; dom.interior_count()])
    }

    pub fn value(&self, local: usize) -> f64 {
        self.values[local]
    }

    pub fn set(&mut self, local: usize, v: f64) {
        self.values[local] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Interior values in [`Domain::interior`] order.
    pub fn interior_values(&self, dom: &Domain) -> Vec<f64> {
        dom.interior().iter().map(|&l| self.values[l]).collect()
    }

    /// True when every boundary value is exactly zero.
    pub fn is_dirichlet(&self, dom: &Domain) -> bool {
        dom.boundary().iter().all(|&l| self.values[l] == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Sup-norm distance to another vertex function.
    pub fn sup_distance(&self, other: &VertexFn) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn scaled(&self, c: f64) -> VertexFn {
        VertexFn {
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }
}

/// Discrete integral `sum_{x in D} mu(x) u(x)`.
pub fn integrate(dom: &Domain, u: &VertexFn) -> Result<f64, DomainError> {
    if u.len() != dom.len() {
        return Err(DomainError::DomainMismatch {
            expected: dom.len(),
            got: u.len(),
        });
    }
    Ok((0..dom.len()).map(|l| dom.mu(l) * u.value(l)).sum())
}
