//! The window-transition model learned while executing recipient tests, used
//! to repair crossover offspring by bridging between windows.
//!
//! Edges are (from window, concrete event, to window) triples, including
//! self-transitions; recording is a set union, so it is idempotent and
//! order-independent, and the graph only ever grows during a run.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Mutex;

use crate::appmodel::{Action, Event, Trace};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphEdge {
    pub from: String,
    pub to: String,
    pub event: Event,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GuiGraph {
    nodes: BTreeSet<String>,
    edges: BTreeSet<GraphEdge>,
}

impl GuiGraph {
    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<GraphEdge> {
        &self.edges
    }

    /// Insert every window the trace visited and an edge per executed event
    /// (self-transitions included). Events keep their concrete fill text so
    /// repair paths are replayable.
    pub fn record_trace(&mut self, trace: &Trace) {
        for state in &trace.states {
            self.nodes.insert(state.window_id.clone());
        }
        let mut idx = 0usize;
        for (k, &executed) in trace.executed.iter().enumerate() {
            if !executed {
                continue;
            }
            self.edges.insert(GraphEdge {
                from: trace.states[idx].window_id.clone(),
                to: trace.states[idx + 1].window_id.clone(),
                event: trace.events[k].clone(),
            });
            idx += 1;
        }
    }

    /// Set union with another graph.
    pub fn merge(&mut self, other: &GuiGraph) {
        self.nodes.extend(other.nodes.iter().cloned());
        self.edges.extend(other.edges.iter().cloned());
    }

    /// Shortest event sequence (by hop count) from one window to another
    /// over recorded edges; `from == to` yields the empty sequence, an
    /// unreachable target yields `None`. Neighbors are explored in edge
    /// order (to-window, then target xpath), which fixes tie-breaking.
    pub fn find_path(&self, from: &str, to: &str) -> Option<Vec<Event>> {
        if from == to {
            return Some(Vec::new());
        }
        if !self.nodes.contains(from) {
            return None;
        }
        let mut adjacency: BTreeMap<&str, Vec<&GraphEdge>> = BTreeMap::new();
        for e in &self.edges {
            adjacency.entry(e.from.as_str()).or_default().push(e);
        }
        let mut parent: BTreeMap<&str, &GraphEdge> = BTreeMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(from);
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                let mut path = Vec::new();
                let mut node = cur;
                while node != from {
                    let edge = parent[node];
                    path.push(edge.event.clone());
                    node = edge.from.as_str();
                }
                path.reverse();
                return Some(path);
            }
            if let Some(edges) = adjacency.get(cur) {
                for e in edges {
                    if e.to != from && !parent.contains_key(e.to.as_str()) {
                        parent.insert(e.to.as_str(), e);
                        queue.push_back(e.to.as_str());
                    }
                }
            }
        }
        None
    }

    /// Diagnostic dump, one edge per line:
    /// `from -> to : action xpath [text]` (text only for fills).
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let line = match e.event.action {
                Action::Click => format!("{} -> {} : click {}\n", e.from, e.to, e.event.target_xpath),
                Action::Fill => format!(
                    "{} -> {} : fill {} [{}]\n",
                    e.from,
                    e.to,
                    e.event.target_xpath,
                    e.event.input_text.as_deref().unwrap_or_default()
                ),
            };
            out.push_str(&line);
        }
        out
    }
}

/// Shared wrapper for concurrent recording during parallel fitness
/// evaluation. Recording is a commutative, idempotent union, so the final
/// content does not depend on the evaluation schedule.
#[derive(Debug, Default)]
pub struct SharedGuiGraph {
    inner: Mutex<GuiGraph>,
}

impl SharedGuiGraph {
    pub fn record(&self, trace: &Trace) {
        self.inner.lock().unwrap().record_trace(trace);
    }

    pub fn find_path(&self, from: &str, to: &str) -> Option<Vec<Event>> {
        self.inner.lock().unwrap().find_path(from, to)
    }

    pub fn snapshot(&self) -> GuiGraph {
        self.inner.lock().unwrap().clone()
    }
}
