//! The full transition graph of the gossip process for small systems.
//!
//! Nodes are all `2^(n*(n-1))` states; an edge leads from a state to
//! each distinct state reachable by one gossip event (self-loops
//! omitted, so absorbing states are exactly the out-degree-0 nodes).
//! Strongly connected components answer the limit-cycle question: if
//! every terminal SCC is a singleton fixed point, every trajectory can
//! reach an absorbing state.

use std::collections::BTreeSet;

use crate::trustnet::{absorbing_encoding, bit_index};
use crate::{enumerate_events, Error, Result, TrustMatrix};

/// Largest `n` for which the explicit graph fits desk scale
/// (2^20 nodes at n=5).
pub const GRAPH_MAX_AGENTS: u8 = 5;

/// Transition graph in compressed sparse-row form.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    n: u8,
    /// offsets[v]..offsets[v+1] indexes `edges` for node v.
    offsets: Vec<usize>,
    /// Successor encodings, sorted and deduplicated per node.
    edges: Vec<u32>,
}

impl TransitionGraph {
    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Distinct successors of the state with encoding `enc`.
    pub fn successors(&self, enc: u64) -> &[u32] {
        let v = enc as usize;
        &self.edges[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn out_degree(&self, enc: u64) -> usize {
        self.successors(enc).len()
    }

    /// Encodings of the out-degree-0 nodes, ascending.
    pub fn absorbing_encodings(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.node_count() as u64).filter(|&enc| self.out_degree(enc) == 0)
    }

    /// All edges as (source, destination) encoding pairs, ascending.
    pub fn edge_pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (0..self.node_count() as u64).flat_map(|src| {
            self.successors(src)
                .iter()
                .map(move |&dst| (src, u64::from(dst)))
        })
    }
}

/// Builds the full transition graph; `n < 3` yields a graph with no
/// edges, `n > 5` is out of desk scale.
pub fn build_graph(n: u8) -> Result<TransitionGraph> {
    if n == 0 {
        return Err(Error::AgentCount(n));
    }
    if n > GRAPH_MAX_AGENTS {
        return Err(Error::SizeLimit {
            what: "transition graph",
            n,
            limit: GRAPH_MAX_AGENTS,
        });
    }
    let bits = u32::from(n) * u32::from(n - 1);
    let node_count = 1usize << bits;

    // Per event (a,z,y): the trust bit gating it and the two bits the
    // listener reconciles.
    let triggers: Vec<(u64, u64, u64)> = enumerate_events(n)
        .map(|e| {
            (
                1u64 << bit_index(n, e.listener, e.speaker),
                1u64 << bit_index(n, e.speaker, e.target),
                1u64 << bit_index(n, e.listener, e.target),
            )
        })
        .collect();

    let workers = std::thread::available_parallelism()
        .map_or(1, |p| p.get())
        .min(node_count.max(1));
    let boundary =
        |i: usize| -> usize { (node_count as u128 * i as u128 / workers as u128) as usize };
    let chunks: Vec<(Vec<u32>, Vec<u32>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|i| {
                let triggers = &triggers;
                let (lo, hi) = (boundary(i), boundary(i + 1));
                scope.spawn(move || {
                    let mut degrees = Vec::with_capacity(hi - lo);
                    let mut edges = Vec::new();
                    let mut succ = Vec::new();
                    for enc in lo as u64..hi as u64 {
                        succ.clear();
                        for &(gate, source_bit, target_bit) in triggers {
                            if enc & gate != 0 {
                                let next = if enc & source_bit != 0 {
                                    enc | target_bit
                                } else {
                                    enc & !target_bit
                                };
                                if next != enc {
                                    succ.push(next as u32);
                                }
                            }
                        }
                        succ.sort_unstable();
                        succ.dedup();
                        degrees.push(succ.len() as u32);
                        edges.extend_from_slice(&succ);
                    }
                    (edges, degrees)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("graph worker panicked"))
            .collect()
    });

    let mut offsets = Vec::with_capacity(node_count + 1);
    offsets.push(0usize);
    let mut edges = Vec::new();
    for (chunk_edges, degrees) in chunks {
        for d in degrees {
            offsets.push(offsets.last().unwrap() + d as usize);
        }
        edges.extend_from_slice(&chunk_edges);
    }
    debug_assert_eq!(*offsets.last().unwrap(), edges.len());
    Ok(TransitionGraph { n, offsets, edges })
}

/// Census row: how many transient and absorbing states carry exactly
/// `edge_count` trust relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusRow {
    pub edge_count: u32,
    pub transient: u64,
    pub absorbing: u64,
}

/// Strongly-connected-component decomposition summary.
#[derive(Debug, Clone)]
pub struct SccReport {
    pub component_count: usize,
    /// Size of each component, indexed by component id (components are
    /// numbered in reverse topological order).
    pub component_sizes: Vec<u64>,
    /// Members of each terminal (no outgoing edge) component, each list
    /// ascending, lists ordered by smallest member.
    pub terminal_components: Vec<Vec<u64>>,
    /// States-per-trust-edge-count census over the whole graph.
    pub census: Vec<CensusRow>,
    /// Terminal components that are not singleton absorbing states;
    /// non-empty means a limit cycle (or a detector bug).
    pub limit_cycle_suspects: Vec<Vec<u64>>,
}

/// Decomposes the graph into strongly connected components.
pub fn scc(g: &TransitionGraph) -> SccReport {
    let (comp, component_count) = tarjan(g);

    let mut component_sizes = vec![0u64; component_count];
    for &c in &comp {
        component_sizes[c as usize] += 1;
    }

    let mut terminal = vec![true; component_count];
    for v in 0..g.node_count() as u64 {
        let cv = comp[v as usize];
        for &w in g.successors(v) {
            if comp[w as usize] != cv {
                terminal[cv as usize] = false;
            }
        }
    }

    let mut terminal_components: Vec<Vec<u64>> = Vec::new();
    let mut slot = vec![usize::MAX; component_count];
    for v in 0..g.node_count() as u64 {
        let c = comp[v as usize] as usize;
        if !terminal[c] {
            continue;
        }
        if slot[c] == usize::MAX {
            slot[c] = terminal_components.len();
            terminal_components.push(Vec::new());
        }
        terminal_components[slot[c]].push(v);
    }

    let limit_cycle_suspects: Vec<Vec<u64>> = terminal_components
        .iter()
        .filter(|members| members.len() != 1 || !absorbing_encoding(g.n(), members[0]))
        .cloned()
        .collect();

    let bits = u32::from(g.n()) * u32::from(g.n() - 1);
    let mut census: Vec<CensusRow> = (0..=bits)
        .map(|edge_count| CensusRow {
            edge_count,
            transient: 0,
            absorbing: 0,
        })
        .collect();
    for enc in 0..g.node_count() as u64 {
        let row = &mut census[enc.count_ones() as usize];
        if g.out_degree(enc) == 0 {
            row.absorbing += 1;
        } else {
            row.transient += 1;
        }
    }

    SccReport {
        component_count,
        component_sizes,
        terminal_components,
        census,
        limit_cycle_suspects,
    }
}

/// Iterative Tarjan; returns (component id per node, component count).
/// Components are numbered in reverse topological order.
fn tarjan(g: &TransitionGraph) -> (Vec<u32>, usize) {
    const UNVISITED: u32 = u32::MAX;
    let n = g.node_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut comp = vec![UNVISITED; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut frames: Vec<(u32, usize)> = Vec::new();
    let mut counter = 0u32;
    let mut components = 0usize;

    for root in 0..n as u32 {
        if index[root as usize] != UNVISITED {
            continue;
        }
        index[root as usize] = counter;
        low[root as usize] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        frames.push((root, 0));

        while let Some(frame) = frames.last_mut() {
            let (v, edge_pos) = *frame;
            let succ = g.successors(u64::from(v));
            if edge_pos < succ.len() {
                frame.1 += 1;
                let w = succ[edge_pos];
                if index[w as usize] == UNVISITED {
                    index[w as usize] = counter;
                    low[w as usize] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    frames.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
            } else {
                frames.pop();
                if let Some(parent) = frames.last() {
                    let p = parent.0 as usize;
                    low[p] = low[p].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w as usize] = false;
                        comp[w as usize] = components as u32;
                        if w == v {
                            break;
                        }
                    }
                    components += 1;
                }
            }
        }
    }
    (comp, components)
}

/// Absorbing states reachable from `start` by directed paths
/// (including `start` itself when absorbing).
///
/// # Panics
/// If `start` has a different agent count than the graph.
pub fn reachable_fixed_points(g: &TransitionGraph, start: &TrustMatrix) -> BTreeSet<TrustMatrix> {
    assert_eq!(
        start.n(),
        g.n(),
        "start state belongs to a different system"
    );
    let mut visited = vec![false; g.node_count()];
    let mut queue: Vec<u32> = vec![start.encoding_u64() as u32];
    visited[start.encoding_u64() as usize] = true;
    let mut fixed = BTreeSet::new();
    while let Some(v) = queue.pop() {
        let succ = g.successors(u64::from(v));
        if succ.is_empty() {
            fixed.insert(TrustMatrix::from_u64(g.n(), u64::from(v)).unwrap());
            continue;
        }
        for &w in succ {
            if !visited[w as usize] {
                visited[w as usize] = true;
                queue.push(w);
            }
        }
    }
    fixed
}
