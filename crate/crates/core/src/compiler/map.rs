use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::Anchor;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentEntry {
    pub name: String,
    /// Printed offset of the segment's left endpoint.
    pub left_offset_expr: String,
    pub anchor: Anchor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClockNames {
    pub active: String,
    pub enabled: Vec<String>,
    pub finished: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionMap {
    pub envelope: String,
    pub segments: Vec<SegmentEntry>,
    pub predicates: ClockNames,
    pub duration_fluent: String,
}

impl ActionMap {
    pub fn clock_predicates(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.predicates.active.as_str())
            .chain(self.predicates.enabled.iter().map(String::as_str))
            .chain(std::iter::once(self.predicates.finished.as_str()))
    }
}

/// Envelope/segment correspondence for every compiled action, keyed by the
/// rich action's name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CompilationMap {
    pub actions: BTreeMap<String, ActionMap>,
}

impl CompilationMap {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("map serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<CompilationMap, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Predicate or function introduced by compilation.
    pub fn is_generated(&self, name: &str) -> bool {
        self.actions.values().any(|m| m.duration_fluent == name || m.clock_predicates().any(|p| p == name))
    }

    /// Rich action name and segment index for a segment action name.
    pub fn segment_of(&self, name: &str) -> Option<(&str, usize)> {
        self.actions
            .iter()
            .find_map(|(rich, m)| m.segments.iter().position(|s| s.name == name).map(|i| (rich.as_str(), i)))
    }
}
