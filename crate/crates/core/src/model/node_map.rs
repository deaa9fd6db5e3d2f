use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{GedError, Result};

/// A pair `(source, target)` where `None` stands for the dummy node ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub source: Option<usize>,
    pub target: Option<usize>,
}

impl Assignment {
    pub const DUMMY: Assignment = Assignment { source: None, target: None };

    pub fn new(source: Option<usize>, target: Option<usize>) -> Self {
        Assignment { source, target }
    }

    pub fn substitution(source: usize, target: usize) -> Self {
        Assignment { source: Some(source), target: Some(target) }
    }

    pub fn deletion(source: usize) -> Self {
        Assignment { source: Some(source), target: None }
    }

    pub fn insertion(target: usize) -> Self {
        Assignment { source: None, target: Some(target) }
    }

    pub fn is_substitution(&self) -> bool {
        self.source.is_some() && self.target.is_some()
    }

    pub fn is_dummy(&self) -> bool {
        self.source.is_none() && self.target.is_none()
    }

    fn sort_key(&self) -> (usize, usize) {
        (self.source.unwrap_or(usize::MAX), self.target.unwrap_or(usize::MAX))
    }
}

// Real nodes sort before ε.
impl Ord for Assignment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Assignment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.source {
            Some(i) => write!(f, "(u{},", i + 1)?,
            None => write!(f, "(ε,")?,
        }
        match self.target {
            Some(k) => write!(f, "v{})", k + 1),
            None => write!(f, "ε)"),
        }
    }
}

/// Node map between a source graph with `n` nodes and a target graph with `m`
/// nodes.
///
/// `forward[i]` is the image of source node `i` and `backward[k]` the
/// preimage of target node `k`, `None` meaning ε. The dummy pair `(ε, ε)` is
/// tracked by a flag so the arrays keep their shape. Equality and hashing
/// look only at the arrays: the dummy pair and the cached cost do not change
/// the induced edit path.
#[derive(Debug, Clone)]
pub struct NodeMap {
    forward: Vec<Option<usize>>,
    backward: Vec<Option<usize>>,
    dummy_pair: bool,
    cost: Option<f64>,
}

impl NodeMap {
    /// Wraps raw arrays without checking them; see [`NodeMap::is_consistent`].
    pub fn from_parts(forward: Vec<Option<usize>>, backward: Vec<Option<usize>>) -> Self {
        NodeMap { forward, backward, dummy_pair: false, cost: None }
    }

    /// Builds the map from source images; unmatched targets become insertions.
    pub fn from_forward(forward: Vec<Option<usize>>, target_count: usize) -> Result<Self> {
        let mut backward = vec![None; target_count];
        for (i, image) in forward.iter().enumerate() {
            if let Some(k) = *image {
                if k >= target_count {
                    return Err(GedError::InvalidNodeMap(format!(
                        "source {} mapped to target {} of {target_count}",
                        i + 1,
                        k + 1
                    )));
                }
                if backward[k].is_some() {
                    return Err(GedError::InvalidNodeMap(format!(
                        "target {} assigned twice",
                        k + 1
                    )));
                }
                backward[k] = Some(i);
            }
        }
        Ok(NodeMap::from_parts(forward, backward))
    }

    pub fn from_assignments<I>(source_count: usize, target_count: usize, assignments: I) -> Result<Self>
    where
        I: IntoIterator<Item = Assignment>,
    {
        let mut forward = vec![None; source_count];
        let mut seen = vec![false; source_count];
        let mut dummy = false;
        for a in assignments {
            match a.source {
                Some(i) if i >= source_count => {
                    return Err(GedError::InvalidNodeMap(format!("source {} out of range", i + 1)))
                }
                Some(i) => {
                    if seen[i] {
                        return Err(GedError::InvalidNodeMap(format!("source {} assigned twice", i + 1)));
                    }
                    seen[i] = true;
                    forward[i] = a.target;
                }
                None => dummy |= a.target.is_none(),
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(GedError::InvalidNodeMap(format!("source {} not assigned", i + 1)));
        }
        let mut map = NodeMap::from_forward(forward, target_count)?;
        map.dummy_pair = dummy;
        Ok(map)
    }

    pub fn identity(order: usize) -> Self {
        let ids: Vec<Option<usize>> = (0..order).map(Some).collect();
        NodeMap::from_parts(ids.clone(), ids)
    }

    /// Every source deleted, every target inserted.
    pub fn all_deleted(source_count: usize, target_count: usize) -> Self {
        NodeMap::from_parts(vec![None; source_count], vec![None; target_count])
    }

    pub fn source_count(&self) -> usize {
        self.forward.len()
    }

    pub fn target_count(&self) -> usize {
        self.backward.len()
    }

    #[inline]
    pub fn target(&self, source: usize) -> Option<usize> {
        self.forward[source]
    }

    #[inline]
    pub fn source(&self, target: usize) -> Option<usize> {
        self.backward[target]
    }

    pub fn forward(&self) -> &[Option<usize>] {
        &self.forward
    }

    pub fn backward(&self) -> &[Option<usize>] {
        &self.backward
    }

    pub fn has_dummy_pair(&self) -> bool {
        self.dummy_pair
    }

    pub fn set_dummy_pair(&mut self, present: bool) {
        self.dummy_pair = present;
    }

    pub fn cached_cost(&self) -> Option<f64> {
        self.cost
    }

    pub(crate) fn set_cached_cost(&mut self, cost: f64) {
        self.cost = Some(cost);
    }

    /// Number of assignments, counting `(ε, ε)` when present.
    pub fn len(&self) -> usize {
        self.forward.len()
            + self.backward.iter().filter(|s| s.is_none()).count()
            + usize::from(self.dummy_pair)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Assignments in canonical order: sources ascending, then insertions
    /// ascending, then `(ε, ε)`. This order is sorted under [`Assignment`]'s
    /// `Ord`.
    pub fn assignments(&self) -> Vec<Assignment> {
        let mut out = Vec::with_capacity(self.len());
        out.extend(self.forward.iter().enumerate().map(|(i, &t)| Assignment::new(Some(i), t)));
        out.extend(
            self.backward
                .iter()
                .enumerate()
                .filter(|(_, s)| s.is_none())
                .map(|(k, _)| Assignment::insertion(k)),
        );
        if self.dummy_pair {
            out.push(Assignment::DUMMY);
        }
        out
    }

    pub fn contains(&self, a: &Assignment) -> bool {
        match (a.source, a.target) {
            (Some(i), t) => self.forward.get(i) == Some(&t),
            (None, Some(k)) => self.backward.get(k) == Some(&None),
            (None, None) => self.dummy_pair,
        }
    }

    /// Number of node substitutions.
    pub fn substitution_count(&self) -> usize {
        self.forward.iter().filter(|t| t.is_some()).count()
    }

    /// Checks the mutual-inverse invariant and the array shapes.
    pub fn is_consistent(&self, source_count: usize, target_count: usize) -> bool {
        if self.forward.len() != source_count || self.backward.len() != target_count {
            return false;
        }
        let forward_ok = self.forward.iter().enumerate().all(|(i, t)| match *t {
            Some(k) => k < target_count && self.backward[k] == Some(i),
            None => true,
        });
        let backward_ok = self.backward.iter().enumerate().all(|(k, s)| match *s {
            Some(i) => i < source_count && self.forward[i] == Some(k),
            None => true,
        });
        forward_ok && backward_ok
    }

    /// Replaces the assignments `removed` by `added`. `(ε, ε)` entries are
    /// skipped, and the dummy flag is cleared.
    pub(crate) fn replace(&mut self, removed: &[Assignment], added: &[Assignment]) {
        for a in removed {
            if let Some(i) = a.source {
                self.forward[i] = None;
            }
            if let Some(k) = a.target {
                self.backward[k] = None;
            }
        }
        for a in added {
            if let Some(i) = a.source {
                self.forward[i] = a.target;
            }
            if let Some(k) = a.target {
                self.backward[k] = a.source;
            }
        }
        self.dummy_pair = false;
        self.cost = None;
    }

    /// Binary `(n+1) x (m+1)` matrix, row-major; the last row holds
    /// insertions, the last column deletions, the corner stays 0.
    pub fn to_matrix(&self) -> Vec<f64> {
        let (n, m) = (self.source_count(), self.target_count());
        let mut x = vec![0.0; (n + 1) * (m + 1)];
        for (i, t) in self.forward.iter().enumerate() {
            x[i * (m + 1) + t.unwrap_or(m)] = 1.0;
        }
        for (k, s) in self.backward.iter().enumerate() {
            if s.is_none() {
                x[n * (m + 1) + k] = 1.0;
            }
        }
        x
    }
}

impl PartialEq for NodeMap {
    fn eq(&self, other: &Self) -> bool {
        self.forward == other.forward && self.backward == other.backward
    }
}

impl Eq for NodeMap {}

impl Hash for NodeMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.forward.hash(state);
        self.backward.hash(state);
    }
}

impl fmt::Display for NodeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, a) in self.assignments().iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}
