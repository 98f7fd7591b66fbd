//! JSON game specification files.

use serde::{Deserialize, Serialize};

use crate::coalition::{AgentGraph, AgentSet, CharacteristicFunction, MAX_EXHAUSTIVE_AGENTS};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalitionValue {
    pub coalition: Vec<String>,
    pub value: f64,
}

/// Game as written in a file. A missing `edges` list means every pair of
/// agents is related.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpec {
    pub agents: Vec<String>,
    #[serde(default)]
    pub edges: Option<Vec<(String, String)>>,
    #[serde(default)]
    pub values: Vec<CoalitionValue>,
    #[serde(default)]
    pub sustainable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoadedGame {
    pub agents: AgentSet,
    pub graph: AgentGraph,
    pub function: CharacteristicFunction,
    pub warnings: Vec<String>,
}

impl GameSpec {
    /// Resolves labels and builds the game. Coalitions absent from the file
    /// are valued 0 (with one warning) when the agent count allows a full
    /// table.
    pub fn build(&self) -> Result<LoadedGame> {
        let agents = AgentSet::with_labels(self.agents.iter().cloned())?;
        let n = agents.len();
        let graph = match &self.edges {
            None => AgentGraph::complete(n)?,
            Some(edges) => {
                let pairs = edges
                    .iter()
                    .map(|(a, b)| Ok((agent_index(&agents, a)?, agent_index(&agents, b)?)))
                    .collect::<Result<Vec<_>>>()?;
                AgentGraph::new(n, &pairs)?
            }
        };
        let entries = self
            .values
            .iter()
            .map(|cv| Ok((agents.coalition_of(&cv.coalition)?, cv.value)))
            .collect::<Result<Vec<_>>>()?;
        let mut function = CharacteristicFunction::new(n, entries, self.sustainable)?;
        let mut warnings = Vec::new();
        if n <= MAX_EXHAUSTIVE_AGENTS {
            let filled = function.fill_missing_with_zero()?;
            if !filled.is_empty() {
                warnings.push(format!(
                    "{} coalition(s) without a value were set to 0",
                    filled.len()
                ));
            }
        }
        Ok(LoadedGame {
            agents,
            graph,
            function,
            warnings,
        })
    }
}

fn agent_index(agents: &AgentSet, label: &str) -> Result<usize> {
    agents
        .index_of(label)
        .ok_or_else(|| Error::InvalidInput(format!("unknown agent '{label}'")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalition::{is_feasible, Coalition};

    fn spec(json: &str) -> GameSpec {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn defaults_and_warnings() {
        let game = spec(r#"{"agents": ["x", "y", "z"], "values": [{"coalition": ["x", "y"], "value": 2}]}"#)
            .build()
            .unwrap();
        assert!(game.function.is_complete());
        assert!(!game.function.sustainable());
        assert_eq!(game.warnings.len(), 1);
        assert_eq!(game.function.value(Coalition::grand(3)), Some(0.0));
        assert!(is_feasible(Coalition::grand(3), &game.graph).unwrap());
    }

    #[test]
    fn edges_by_label() {
        let game = spec(r#"{"agents": ["x", "y", "z"], "edges": [["x", "y"]], "values": []}"#)
            .build()
            .unwrap();
        assert!(game.graph.has_edge(0, 1));
        assert!(!is_feasible(Coalition::grand(3), &game.graph).unwrap());
    }

    #[test]
    fn bad_labels_are_input_errors() {
        for json in [
            r#"{"agents": ["x", "x"]}"#,
            r#"{"agents": ["x"], "edges": [["x", "q"]]}"#,
            r#"{"agents": ["x"], "values": [{"coalition": ["q"], "value": 1}]}"#,
            r#"{"agents": ["x", "y"], "values": [{"coalition": ["x"], "value": 1}, {"coalition": ["x"], "value": 2}]}"#,
        ] {
            assert!(spec(json).build().unwrap_err().is_input_error(), "{json}");
        }
        assert!(serde_json::from_str::<GameSpec>(r#"{"agents": [], "colour": 1}"#).is_err());
    }
}
