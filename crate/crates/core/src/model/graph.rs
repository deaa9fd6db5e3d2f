use crate::error::{GedError, Result};

const NO_EDGE: u32 = u32::MAX;

/// An undirected edge stored with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub label: String,
}

/// Undirected simple graph with opaque label tokens on nodes and edges.
///
/// Node indices are 0-based in the API. File formats use 1-based indices and
/// convert at the boundary.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    id: String,
    labels: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, usize)>>,
    // dense order x order table of edge ids
    lookup: Vec<u32>,
}

impl LabeledGraph {
    /// Builds a graph, rejecting self-loops, duplicate edges and dangling
    /// endpoints.
    pub fn new<I, S>(id: impl Into<String>, labels: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, S)>,
        S: Into<String>,
    {
        let order = labels.len();
        let mut graph = LabeledGraph {
            id: id.into(),
            labels,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); order],
            lookup: vec![NO_EDGE; order * order],
        };
        for (a, b, label) in edges {
            graph.add_edge(a, b, label.into())?;
        }
        Ok(graph)
    }

    /// Graph without edges.
    pub fn isolated(id: impl Into<String>, labels: Vec<String>) -> Self {
        Self::new(id, labels, std::iter::empty::<(usize, usize, String)>())
            .expect("edgeless graph is always valid")
    }

    fn add_edge(&mut self, a: usize, b: usize, label: String) -> Result<()> {
        let order = self.order();
        for index in [a, b] {
            if index >= order {
                return Err(GedError::NodeOutOfRange { index, order });
            }
        }
        if a == b {
            return Err(GedError::SelfLoop(a));
        }
        if self.lookup[a * order + b] != NO_EDGE {
            return Err(GedError::DuplicateEdge(a.min(b), a.max(b)));
        }
        let edge_id = self.edges.len();
        self.lookup[a * order + b] = edge_id as u32;
        self.lookup[b * order + a] = edge_id as u32;
        self.adjacency[a].push((b, edge_id));
        self.adjacency[b].push((a, edge_id));
        self.edges.push(Edge { a: a.min(b), b: a.max(b), label });
        Ok(())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    /// Number of nodes.
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `node` as `(neighbor, edge id)` pairs.
    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    #[inline]
    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        match self.lookup[a * self.order() + b] {
            NO_EDGE => None,
            id => Some(id as usize),
        }
    }

    #[inline]
    pub fn edge_label(&self, a: usize, b: usize) -> Option<&str> {
        self.edge_id(a, b).map(|id| self.edges[id].label.as_str())
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_id(a, b).is_some()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges in a canonical order: sorted by `(a, b)`.
    pub fn sorted_edges(&self) -> Vec<&Edge> {
        let mut edges: Vec<&Edge> = self.edges.iter().collect();
        edges.sort_by_key(|e| (e.a, e.b));
        edges
    }

    /// Structural equality up to edge insertion order; ids are ignored.
    pub fn same_structure(&self, other: &LabeledGraph) -> bool {
        self.labels == other.labels
            && self.size() == other.size()
            && self
                .edges
                .iter()
                .all(|e| other.edge_label(e.a, e.b) == Some(e.label.as_str()))
    }
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.same_structure(other)
    }
}
