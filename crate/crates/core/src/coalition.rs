//! Agents, graph-restricted coalitions, characteristic functions and
//! coalition structures.
//!
//! Coalitions are bit masks over at most [`MAX_AGENTS`] agents. A coalition
//! is feasible under an [`AgentGraph`] when the subgraph induced by its
//! members is connected.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of agents a bit-mask table can address.
pub const MAX_AGENTS: usize = 24;

/// Largest number of agents for exhaustive searches over partitions or
/// pairs of coalitions.
pub const MAX_EXHAUSTIVE_AGENTS: usize = 14;

const TIE_TOL: f64 = 1e-9;

pub(crate) fn check_agent_count(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::Capacity {
            what: "agent count",
            got: n,
            max,
        });
    }
    Ok(())
}

/// A subset of agent indices.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_mask(mask: u32) -> Self {
        Coalition(mask)
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Result<Self> {
        let mut mask = 0u32;
        for index in members {
            if index >= MAX_AGENTS {
                return Err(Error::Index {
                    index,
                    n: MAX_AGENTS,
                });
            }
            mask |= 1 << index;
        }
        Ok(Coalition(mask))
    }

    /// # Panics
    /// If `index >= MAX_AGENTS`.
    pub fn singleton(index: usize) -> Self {
        assert!(index < MAX_AGENTS, "agent index {index} out of range");
        Coalition(1 << index)
    }

    /// The coalition of all `n` agents.
    pub fn grand(n: usize) -> Self {
        debug_assert!(n <= MAX_AGENTS);
        if n == 0 {
            Coalition(0)
        } else {
            Coalition(u32::MAX >> (32 - n))
        }
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, index: usize) -> bool {
        index < 32 && self.0 & (1 << index) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_singleton(self) -> bool {
        self.len() == 1
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Coalition) -> Coalition {
        Coalition(self.0 & other.0)
    }

    pub fn difference(self, other: Coalition) -> Coalition {
        Coalition(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Coalition) -> bool {
        self.0 & other.0 == 0
    }

    /// Member indices in ascending order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let index = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(index)
            }
        })
    }

    pub(crate) fn check_within(self, n: usize) -> Result<()> {
        if n < 32 && self.0 >> n != 0 {
            let index = 31 - self.0.leading_zeros() as usize;
            return Err(Error::Index { index, n });
        }
        Ok(())
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

/// The finite set of agents, optionally labelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl AgentSet {
    pub fn new(n: usize) -> Result<Self> {
        check_agent_count(n, MAX_AGENTS)?;
        Ok(AgentSet { n, labels: None })
    }

    pub fn with_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        check_agent_count(labels.len(), MAX_AGENTS)?;
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::InvalidInput(format!("duplicate agent label '{label}'")));
            }
        }
        Ok(AgentSet {
            n: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Display name of agent `index`; unlabelled agents are named `a{index}`.
    pub fn label(&self, index: usize) -> String {
        match &self.labels {
            Some(labels) => labels[index].clone(),
            None => format!("a{index}"),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(labels) => labels.iter().position(|l| l == label),
            None => label
                .strip_prefix('a')
                .and_then(|rest| rest.parse::<usize>().ok())
                .filter(|&i| i < self.n),
        }
    }

    pub fn coalition_of(&self, labels: &[impl AsRef<str>]) -> Result<Coalition> {
        let mut indices = Vec::with_capacity(labels.len());
        for label in labels {
            let label = label.as_ref();
            let index = self
                .index_of(label)
                .ok_or_else(|| Error::InvalidInput(format!("unknown agent '{label}'")))?;
            indices.push(index);
        }
        Coalition::from_members(indices)
    }

    pub fn labels_of(&self, coalition: Coalition) -> Vec<String> {
        coalition.members().map(|i| self.label(i)).collect()
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }
}

/// Undirected relationship graph restricting which coalitions may form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentGraph {
    n: usize,
    adjacency: Vec<u32>,
}

impl AgentGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        check_agent_count(n, MAX_AGENTS)?;
        let mut adjacency = vec![0u32; n];
        for &(a, b) in edges {
            for index in [a, b] {
                if index >= n {
                    return Err(Error::Index { index, n });
                }
            }
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop on agent {a}")));
            }
            adjacency[a] |= 1 << b;
            adjacency[b] |= 1 << a;
        }
        Ok(AgentGraph { n, adjacency })
    }

    pub fn complete(n: usize) -> Result<Self> {
        check_agent_count(n, MAX_AGENTS)?;
        let all = Coalition::grand(n).mask();
        let adjacency = (0..n).map(|i| all & !(1 << i)).collect();
        Ok(AgentGraph { n, adjacency })
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        Self::new(n, &[])
    }

    /// The path a0 - a1 - ... - a(n-1).
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adjacency[a] & (1 << b) != 0
    }

    pub fn neighbors(&self, index: usize) -> Coalition {
        Coalition(self.adjacency[index])
    }

    /// Edges as `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for a in 0..self.n {
            for b in Coalition(self.adjacency[a]).members().filter(|&b| b > a) {
                edges.push((a, b));
            }
        }
        edges
    }

    pub fn without_edge(&self, a: usize, b: usize) -> Self {
        let mut graph = self.clone();
        if a < self.n && b < self.n {
            graph.adjacency[a] &= !(1 << b);
            graph.adjacency[b] &= !(1 << a);
        }
        graph
    }

    // Breadth-first growth from the lowest member, restricted to `members`.
    fn induces_connected(&self, members: Coalition) -> bool {
        let target = members.mask();
        if target.count_ones() <= 1 {
            return true;
        }
        let mut reached = target & target.wrapping_neg();
        let mut frontier = reached;
        while frontier != 0 {
            let mut next = 0u32;
            for i in Coalition(frontier).members() {
                next |= self.adjacency[i];
            }
            next &= target & !reached;
            reached |= next;
            frontier = next;
        }
        reached == target
    }
}

/// Number of coalitions with at least two members among `n` agents.
pub fn count_non_singleton_coalitions(n: usize) -> Result<u64> {
    check_agent_count(n, MAX_AGENTS)?;
    Ok((1u64 << n) - n as u64 - 1)
}

/// Whether the members of `coalition` induce a connected subgraph.
///
/// The empty coalition and singletons are feasible by convention.
pub fn is_feasible(coalition: Coalition, graph: &AgentGraph) -> Result<bool> {
    coalition.check_within(graph.n)?;
    Ok(graph.induces_connected(coalition))
}

/// All feasible coalitions with at least `min_size` members, in ascending
/// bit-mask order.
pub fn enumerate_feasible_coalitions(graph: &AgentGraph, min_size: usize) -> Vec<Coalition> {
    let limit = 1u64 << graph.n;
    (0..limit)
        .map(|mask| Coalition(mask as u32))
        .filter(|c| c.len() >= min_size && graph.induces_connected(*c))
        .collect()
}

/// Explicit table from coalitions to real values.
///
/// `v(∅) = 0` always, and singletons missing from the input are valued 0.
/// The `sustainable` tag records that the values were built from at least
/// one economic and one social utility; it cannot be inferred from the
/// numbers themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicFunction {
    n: usize,
    values: BTreeMap<Coalition, f64>,
    sustainable: bool,
}

impl CharacteristicFunction {
    pub fn new(
        n: usize,
        entries: impl IntoIterator<Item = (Coalition, f64)>,
        sustainable: bool,
    ) -> Result<Self> {
        check_agent_count(n, MAX_AGENTS)?;
        let mut values = BTreeMap::new();
        for (coalition, value) in entries {
            coalition.check_within(n)?;
            if !value.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite value for coalition {coalition:?}"
                )));
            }
            if coalition.is_empty() && value != 0.0 {
                return Err(Error::InvalidInput(
                    "the empty coalition must have value 0".into(),
                ));
            }
            if values.insert(coalition, value).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate value for coalition {coalition:?}"
                )));
            }
        }
        values.insert(Coalition::EMPTY, 0.0);
        for i in 0..n {
            values.entry(Coalition::singleton(i)).or_insert(0.0);
        }
        Ok(CharacteristicFunction {
            n,
            values,
            sustainable,
        })
    }

    /// Tabulates `f` over every non-empty subset of `n` agents.
    pub fn from_fn(n: usize, sustainable: bool, f: impl Fn(Coalition) -> f64) -> Result<Self> {
        check_agent_count(n, MAX_EXHAUSTIVE_AGENTS)?;
        let entries = (1..1u32 << n).map(|mask| {
            let c = Coalition(mask);
            (c, f(c))
        });
        Self::new(n, entries, sustainable)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sustainable(&self) -> bool {
        self.sustainable
    }

    pub fn with_sustainable(mut self, sustainable: bool) -> Self {
        self.sustainable = sustainable;
        self
    }

    pub fn value(&self, coalition: Coalition) -> Option<f64> {
        self.values.get(&coalition).copied()
    }

    pub fn value_of(&self, coalition: Coalition) -> Result<f64> {
        self.value(coalition).ok_or(Error::IncompleteFunction {
            mask: coalition.mask(),
        })
    }

    pub fn grand_value(&self) -> Result<f64> {
        self.value_of(Coalition::grand(self.n))
    }

    pub fn entries(&self) -> impl Iterator<Item = (Coalition, f64)> + '_ {
        self.values.iter().map(|(&c, &v)| (c, v))
    }

    pub fn is_complete(&self) -> bool {
        self.n <= MAX_EXHAUSTIVE_AGENTS && self.values.len() == 1 << self.n
    }

    /// Coalitions with no table entry, ascending.
    pub fn missing(&self) -> Vec<Coalition> {
        (0..1u64 << self.n)
            .map(|m| Coalition(m as u32))
            .filter(|c| !self.values.contains_key(c))
            .collect()
    }

    /// Fills every missing coalition with 0 and returns the coalitions that
    /// were filled.
    pub fn fill_missing_with_zero(&mut self) -> Result<Vec<Coalition>> {
        check_agent_count(self.n, MAX_EXHAUSTIVE_AGENTS)?;
        let missing = self.missing();
        for &c in &missing {
            self.values.insert(c, 0.0);
        }
        Ok(missing)
    }

    /// Errors unless every coalition feasible under `graph` has an entry.
    pub fn check_covers(&self, graph: &AgentGraph) -> Result<()> {
        if graph.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: graph.n,
                context: "graph agent count",
            });
        }
        for c in enumerate_feasible_coalitions(graph, 0) {
            self.value_of(c)?;
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        CharacteristicFunction {
            n: self.n,
            values: self.values.iter().map(|(&c, &v)| (c, v * factor)).collect(),
            sustainable: self.sustainable,
        }
    }

    /// Dense table indexed by bit mask. Requires a complete table.
    pub(crate) fn dense(&self) -> Result<Vec<f64>> {
        check_agent_count(self.n, MAX_EXHAUSTIVE_AGENTS)?;
        (0..1u32 << self.n)
            .map(|mask| self.value_of(Coalition(mask)))
            .collect()
    }
}

/// A partition of the agents into disjoint, graph-feasible coalitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalitionStructure {
    parts: Vec<Coalition>,
}

impl CoalitionStructure {
    pub fn new(parts: Vec<Coalition>, graph: &AgentGraph) -> Result<Self> {
        let mut covered = Coalition::EMPTY;
        for &part in &parts {
            part.check_within(graph.n)?;
            if part.is_empty() {
                return Err(Error::InvalidInput("empty part in coalition structure".into()));
            }
            if !covered.is_disjoint(part) {
                return Err(Error::InvalidInput(format!(
                    "part {part:?} overlaps another part"
                )));
            }
            if !graph.induces_connected(part) {
                return Err(Error::InvalidInput(format!(
                    "part {part:?} is not feasible under the graph"
                )));
            }
            covered = covered.union(part);
        }
        if covered != Coalition::grand(graph.n) {
            return Err(Error::InvalidInput(
                "parts do not cover every agent".into(),
            ));
        }
        Ok(CoalitionStructure { parts })
    }

    pub fn parts(&self) -> &[Coalition] {
        &self.parts
    }

    /// Part masks in ascending order.
    pub fn sorted_masks(&self) -> Vec<u32> {
        let mut masks: Vec<u32> = self.parts.iter().map(|c| c.mask()).collect();
        masks.sort_unstable();
        masks
    }
}

/// Sum of table values over `parts`.
pub fn coalition_sum(parts: &[Coalition], v: &CharacteristicFunction) -> Result<f64> {
    parts.iter().map(|&c| v.value_of(c)).sum()
}

/// Value of a coalition structure: the sum of the values of its parts.
pub fn cs_value(cs: &CoalitionStructure, v: &CharacteristicFunction) -> Result<f64> {
    coalition_sum(&cs.parts, v)
}

/// Exhaustive search for the most valuable coalition structure.
///
/// Dynamic programming over subsets: the part containing the lowest agent
/// of a subset is chosen, then the remainder is solved recursively. Ties
/// (within 1e-9) resolve to the lexicographically smallest sorted list of
/// part masks.
pub fn best_coalition_structure(
    v: &CharacteristicFunction,
    graph: &AgentGraph,
) -> Result<(CoalitionStructure, f64)> {
    let n = v.n;
    check_agent_count(n, MAX_EXHAUSTIVE_AGENTS)?;
    if graph.n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: graph.n,
            context: "graph agent count",
        });
    }
    let size = 1usize << n;
    let feasible: Vec<bool> = (0..size)
        .map(|m| graph.induces_connected(Coalition(m as u32)))
        .collect();

    let mut best_value = vec![0.0f64; size];
    let mut best_parts: Vec<Vec<u32>> = vec![Vec::new(); size];
    for mask in 1..size as u32 {
        let lowest = mask & mask.wrapping_neg();
        let rest_bits = mask & !lowest;
        let mut found: Option<(f64, Vec<u32>)> = None;
        // Submasks of `rest_bits`, each joined with `lowest`.
        let mut sub = rest_bits;
        loop {
            let part = sub | lowest;
            if feasible[part as usize] {
                let remainder = (mask & !part) as usize;
                let value = v.value_of(Coalition(part))? + best_value[remainder];
                let better = match &found {
                    None => true,
                    Some((incumbent, _)) if value > incumbent + TIE_TOL => true,
                    Some((incumbent, parts)) if (value - incumbent).abs() <= TIE_TOL => {
                        merged(&best_parts[remainder], part) < *parts
                    }
                    _ => false,
                };
                if better {
                    found = Some((value, merged(&best_parts[remainder], part)));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest_bits;
        }
        // Singletons are always feasible, so every subset has a candidate.
        let (value, parts) = found.expect("singleton part always feasible");
        best_value[mask as usize] = value;
        best_parts[mask as usize] = parts;
    }

    let full = size - 1;
    let parts = best_parts[full].iter().map(|&m| Coalition(m)).collect();
    Ok((CoalitionStructure { parts }, best_value[full]))
}

fn merged(sorted: &[u32], extra: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(sorted.len() + 1);
    let at = sorted.partition_point(|&m| m < extra);
    out.extend_from_slice(&sorted[..at]);
    out.push(extra);
    out.extend_from_slice(&sorted[at..]);
    out
}
