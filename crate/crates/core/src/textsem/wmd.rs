//! Word Mover's Distance over unit-length embeddings, converted to a
//! similarity in [0, 1], plus the thresholded `IsSemSim` predicate.
//!
//! Both sides put uniform mass 1/n on their (multiset of) in-vocabulary
//! tokens; the exact optimal-transport problem with Euclidean ground cost is
//! solved by successive shortest paths on the scaled integer instance, so the
//! reported value is the true optimum, not an entropic approximation.
//! Similarity = 1 - WMD/2 (pairwise costs range over [0, 2]).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{EmbeddingStore, NormalizedText, SimilarityConfig};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

struct FlowEdge {
    to: usize,
    cap: i64,
    cost: f64,
}

/// Min-cost flow via successive shortest paths with Johnson potentials.
/// Capacities are integers and all costs are non-negative, so Dijkstra is
/// applicable from the first iteration.
struct MinCostFlow {
    edges: Vec<FlowEdge>,
    adj: Vec<Vec<usize>>,
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap, we want the smallest distance;
        // ties broken on the node index for a deterministic visit order.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl MinCostFlow {
    fn new(nodes: usize) -> Self {
        Self {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64, cost: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(FlowEdge { to, cap, cost });
        self.adj[from].push(id);
        self.edges.push(FlowEdge {
            to: from,
            cap: 0,
            cost: -cost,
        });
        self.adj[to].push(id + 1);
        id
    }

    /// Push `target` units from `s` to `t`; panics if the network cannot
    /// carry them (the transport instance is always balanced).
    fn run(&mut self, s: usize, t: usize, target: i64) {
        let n = self.adj.len();
        let mut potential = vec![0.0f64; n];
        let mut pushed = 0i64;
        while pushed < target {
            let mut dist = vec![f64::INFINITY; n];
            let mut prev_edge = vec![usize::MAX; n];
            let mut done = vec![false; n];
            dist[s] = 0.0;
            let mut heap = BinaryHeap::new();
            heap.push(HeapEntry { dist: 0.0, node: s });
            while let Some(HeapEntry { dist: d, node: u }) = heap.pop() {
                if done[u] {
                    continue;
                }
                done[u] = true;
                let _ = d;
                for &eid in &self.adj[u] {
                    let e = &self.edges[eid];
                    if e.cap <= 0 || done[e.to] {
                        continue;
                    }
                    let nd = dist[u] + e.cost + potential[u] - potential[e.to];
                    if nd < dist[e.to] {
                        dist[e.to] = nd;
                        prev_edge[e.to] = eid;
                        heap.push(HeapEntry { dist: nd, node: e.to });
                    }
                }
            }
            assert!(dist[t].is_finite(), "transport network disconnected");
            for v in 0..n {
                if dist[v].is_finite() {
                    potential[v] += dist[v];
                }
            }
            // bottleneck along the shortest path
            let mut bottleneck = target - pushed;
            let mut v = t;
            while v != s {
                let eid = prev_edge[v];
                bottleneck = bottleneck.min(self.edges[eid].cap);
                v = self.edges[eid ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let eid = prev_edge[v];
                self.edges[eid].cap -= bottleneck;
                self.edges[eid ^ 1].cap += bottleneck;
                v = self.edges[eid ^ 1].to;
            }
            pushed += bottleneck;
        }
    }

    /// Flow on a forward edge returned by `add_edge`.
    fn flow(&self, edge_id: usize) -> i64 {
        self.edges[edge_id ^ 1].cap
    }
}

/// Exact minimum transport cost for integer supplies/demands with the given
/// dense cost matrix; returns total cost in (unit x distance).
fn transport(supplies: &[i64], demands: &[i64], cost: &[Vec<f64>]) -> f64 {
    let n = supplies.len();
    let m = demands.len();
    let total: i64 = supplies.iter().sum();
    debug_assert_eq!(total, demands.iter().sum::<i64>());
    let s = n + m;
    let t = n + m + 1;
    let mut net = MinCostFlow::new(n + m + 2);
    let mut arc_ids = vec![vec![0usize; m]; n];
    for (i, &su) in supplies.iter().enumerate() {
        net.add_edge(s, i, su, 0.0);
    }
    for (j, &de) in demands.iter().enumerate() {
        net.add_edge(n + j, t, de, 0.0);
    }
    for i in 0..n {
        for j in 0..m {
            arc_ids[i][j] = net.add_edge(i, n + j, total, cost[i][j]);
        }
    }
    net.run(s, t, total);
    // fixed row-major summation keeps the result bit-stable
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..m {
            let f = net.flow(arc_ids[i][j]);
            if f > 0 {
                sum += f as f64 * cost[i][j];
            }
        }
    }
    sum
}

fn in_vocab<'a>(t: &'a NormalizedText, store: &EmbeddingStore) -> Vec<&'a str> {
    let mut v: Vec<&str> = t
        .tokens()
        .iter()
        .map(String::as_str)
        .filter(|w| store.contains(w))
        .collect();
    // canonical order: WMD ignores token order, and sorting makes the value
    // bitwise invariant under permutations of either sentence
    v.sort_unstable();
    v
}

/// Similarity in [0, 1] between two normalized sentences. Tokens missing
/// from the store are dropped; if either side has no embedded token left,
/// falls back to exact equality of the full normalized token lists.
pub fn sentence_similarity(a: &NormalizedText, b: &NormalizedText, store: &EmbeddingStore) -> f64 {
    let ra = in_vocab(a, store);
    let rb = in_vocab(b, store);
    if ra.is_empty() || rb.is_empty() {
        return if a.tokens() == b.tokens() { 1.0 } else { 0.0 };
    }
    // solve the same instance regardless of argument order
    let (x, y) = if ra <= rb { (&ra, &rb) } else { (&rb, &ra) };
    let n = x.len();
    let m = y.len();
    let scale = lcm(n as u64, m as u64) as i64;
    let cost: Vec<Vec<f64>> = x
        .iter()
        .map(|wx| {
            let vx = store.vector(wx).expect("token checked against store");
            y.iter()
                .map(|wy| euclid(vx, store.vector(wy).expect("token checked against store")))
                .collect()
        })
        .collect();
    let supplies = vec![scale / n as i64; n];
    let demands = vec![scale / m as i64; m];
    let total_cost = transport(&supplies, &demands, &cost);
    let wmd = total_cost / scale as f64;
    (1.0 - wmd / 2.0).clamp(0.0, 1.0)
}

/// True iff the two sentences are semantically similar: similarity strictly
/// greater than the threshold.
pub fn is_sem_sim(
    a: &NormalizedText,
    b: &NormalizedText,
    store: &EmbeddingStore,
    cfg: &SimilarityConfig,
) -> bool {
    sentence_similarity(a, b, store) > cfg.tau
}
