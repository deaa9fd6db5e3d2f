use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{GedError, Result};

/// Node and edge edit costs as functions of label tokens.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum EditCostModel {
    /// The same constant costs for nodes and edges. Substituting equal labels
    /// is free.
    Constant { sub: f64, del: f64, ins: f64 },
    Table(CostTable),
}

impl EditCostModel {
    pub fn constant(sub: f64, del: f64, ins: f64) -> Result<Self> {
        for (name, value) in [("sub", sub), ("del", del), ("ins", ins)] {
            check_cost(name, value)?;
        }
        Ok(EditCostModel::Constant { sub, del, ins })
    }

    /// Non-metric constant costs: deletion and insertion 1, substitution 3.
    pub fn muta_n() -> Self {
        EditCostModel::Constant { sub: 3.0, del: 1.0, ins: 1.0 }
    }

    #[inline]
    pub fn node_sub(&self, a: &str, b: &str) -> f64 {
        match self {
            EditCostModel::Constant { sub, .. } => constant_sub(*sub, a, b),
            EditCostModel::Table(t) => t.node.sub(a, b),
        }
    }

    #[inline]
    pub fn node_del(&self, a: &str) -> f64 {
        match self {
            EditCostModel::Constant { del, .. } => *del,
            EditCostModel::Table(t) => t.node.del(a),
        }
    }

    #[inline]
    pub fn node_ins(&self, b: &str) -> f64 {
        match self {
            EditCostModel::Constant { ins, .. } => *ins,
            EditCostModel::Table(t) => t.node.ins(b),
        }
    }

    #[inline]
    pub fn edge_sub(&self, a: &str, b: &str) -> f64 {
        match self {
            EditCostModel::Constant { sub, .. } => constant_sub(*sub, a, b),
            EditCostModel::Table(t) => t.edge.sub(a, b),
        }
    }

    #[inline]
    pub fn edge_del(&self, a: &str) -> f64 {
        match self {
            EditCostModel::Constant { del, .. } => *del,
            EditCostModel::Table(t) => t.edge.del(a),
        }
    }

    #[inline]
    pub fn edge_ins(&self, b: &str) -> f64 {
        match self {
            EditCostModel::Constant { ins, .. } => *ins,
            EditCostModel::Table(t) => t.edge.ins(b),
        }
    }

    /// Node cost of an assignment; `(None, None)` is free.
    #[inline]
    pub fn node_assignment(&self, a: Option<&str>, b: Option<&str>) -> f64 {
        match (a, b) {
            (Some(a), Some(b)) => self.node_sub(a, b),
            (Some(a), None) => self.node_del(a),
            (None, Some(b)) => self.node_ins(b),
            (None, None) => 0.0,
        }
    }

    /// Edge cost of an edge pair; `(None, None)` is free.
    #[inline]
    pub fn edge_pair(&self, a: Option<&str>, b: Option<&str>) -> f64 {
        match (a, b) {
            (Some(a), Some(b)) => self.edge_sub(a, b),
            (Some(a), None) => self.edge_del(a),
            (None, Some(b)) => self.edge_ins(b),
            (None, None) => 0.0,
        }
    }

    /// True when substitution costs are symmetric and deletion equals
    /// insertion for every label in `labels`.
    pub fn is_symmetric_on(&self, node_labels: &[&str], edge_labels: &[&str]) -> bool {
        let sym = |labels: &[&str], sub: &dyn Fn(&str, &str) -> f64, del: &dyn Fn(&str) -> f64, ins: &dyn Fn(&str) -> f64| {
            labels.iter().all(|a| {
                del(a) == ins(a) && labels.iter().all(|b| sub(a, b) == sub(b, a))
            })
        };
        sym(node_labels, &|a, b| self.node_sub(a, b), &|a| self.node_del(a), &|a| self.node_ins(a))
            && sym(edge_labels, &|a, b| self.edge_sub(a, b), &|a| self.edge_del(a), &|a| self.edge_ins(a))
    }

    /// Parses `constant:<sub>,<del>,<ins>` or `table:<path>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        if let Some(rest) = spec.strip_prefix("constant:") {
            let values: Vec<f64> = rest
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| GedError::InvalidCost(format!("{spec}: {e}")))?;
            match values.as_slice() {
                [sub, del, ins] => Self::constant(*sub, *del, *ins),
                _ => Err(GedError::InvalidCost(format!("{spec}: expected three values"))),
            }
        } else if let Some(path) = spec.strip_prefix("table:") {
            Ok(EditCostModel::Table(CostTable::load(path)?))
        } else {
            Err(GedError::InvalidCost(format!(
                "{spec}: expected constant:<sub,del,ins> or table:<file>"
            )))
        }
    }
}

#[inline]
fn constant_sub(sub: f64, a: &str, b: &str) -> f64 {
    if a == b {
        0.0
    } else {
        sub
    }
}

fn check_cost(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(GedError::InvalidCost(format!("{name} = {value} must be finite and nonnegative")))
    }
}

/// Tabulated costs for one element kind (nodes or edges).
///
/// Unlisted substitutions of equal labels cost 0; other unlisted entries fall
/// back to the defaults.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSection {
    #[serde(default = "one")]
    pub default_sub: f64,
    #[serde(default = "one")]
    pub default_del: f64,
    #[serde(default = "one")]
    pub default_ins: f64,
    /// Look up `(b, a)` when `(a, b)` is not listed.
    #[serde(default = "yes")]
    pub symmetric: bool,
    #[serde(default)]
    pub sub: Vec<SubEntry>,
    #[serde(default)]
    pub del: HashMap<String, f64>,
    #[serde(default)]
    pub ins: HashMap<String, f64>,
    #[serde(skip)]
    sub_index: HashMap<String, HashMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubEntry {
    pub from: String,
    pub to: String,
    pub cost: f64,
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

impl Default for CostSection {
    fn default() -> Self {
        CostSection {
            default_sub: 1.0,
            default_del: 1.0,
            default_ins: 1.0,
            symmetric: true,
            sub: Vec::new(),
            del: HashMap::new(),
            ins: HashMap::new(),
            sub_index: HashMap::new(),
        }
    }
}

impl CostSection {
    fn finish(mut self, kind: &str) -> Result<Self> {
        check_cost(&format!("{kind}.default_sub"), self.default_sub)?;
        check_cost(&format!("{kind}.default_del"), self.default_del)?;
        check_cost(&format!("{kind}.default_ins"), self.default_ins)?;
        for e in &self.sub {
            check_cost(&format!("{kind}.sub[{} -> {}]", e.from, e.to), e.cost)?;
        }
        for (label, cost) in self.del.iter().chain(self.ins.iter()) {
            check_cost(&format!("{kind}[{label}]"), *cost)?;
        }
        self.sub_index.clear();
        for e in &self.sub {
            self.sub_index
                .entry(e.from.clone())
                .or_default()
                .insert(e.to.clone(), e.cost);
        }
        Ok(self)
    }

    fn lookup(&self, a: &str, b: &str) -> Option<f64> {
        self.sub_index.get(a).and_then(|row| row.get(b)).copied()
    }

    pub fn sub(&self, a: &str, b: &str) -> f64 {
        if let Some(c) = self.lookup(a, b) {
            return c;
        }
        if self.symmetric {
            if let Some(c) = self.lookup(b, a) {
                return c;
            }
        }
        if a == b {
            0.0
        } else {
            self.default_sub
        }
    }

    pub fn del(&self, a: &str) -> f64 {
        self.del.get(a).copied().unwrap_or(self.default_del)
    }

    pub fn ins(&self, b: &str) -> f64 {
        self.ins.get(b).copied().unwrap_or(self.default_ins)
    }
}

/// Fully tabulated edit costs, loaded from TOML:
///
/// ```toml
/// [node]
/// default_sub = 2.0
/// sub = [{ from = "C", to = "N", cost = 1.5 }]
/// del = { C = 1.0 }
///
/// [edge]
/// default_del = 0.5
/// ```
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostTable {
    #[serde(default)]
    pub node: CostSection,
    #[serde(default)]
    pub edge: CostSection,
}

impl CostTable {
    pub fn from_sections(node: CostSection, edge: CostSection) -> Result<Self> {
        Ok(CostTable { node: node.finish("node")?, edge: edge.finish("edge")? })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: CostTable =
            toml::from_str(text).map_err(|e| GedError::InvalidCost(e.to_string()))?;
        Self::from_sections(raw.node, raw.edge)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| GedError::InvalidCost(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
