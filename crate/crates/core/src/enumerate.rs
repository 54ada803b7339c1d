//! Two independent generators of the absorbing-state set.
//!
//! The brute-force path scans every encoding in `0..2^(n*(n-1))` against
//! the absorbing predicate, sharded across workers. The constructive
//! path generates faction structures (every set partition of the agents,
//! every non-empty core choice per faction) and synthesizes their
//! matrices. The two must produce the same set; that agreement is the
//! central correctness check of the whole model, and the counts tie out
//! against the closed forms in [`count`](crate::count).

use std::time::{Duration, Instant};

use crate::partitions::{block_masks, SetPartitions};
use crate::trustnet::absorbing_encoding;
use crate::{AbsorbingStructure, AgentSet, Error, Faction, Result, TrustMatrix};

/// Largest `n` the exhaustive scan supports (2^42 encodings).
pub const SCAN_MAX_AGENTS: u8 = 7;

/// Largest `n` for which a scan may collect the states it finds.
pub const SCAN_COLLECT_MAX_AGENTS: u8 = 6;

/// Largest `n` for which the constructive path materializes reports.
pub const CONSTRUCTIVE_MAX_AGENTS: u8 = 7;

/// Contiguous encoding range `[lo, hi)` of the `n`-agent state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShardSpec {
    n: u8,
    lo: u64,
    hi: u64,
}

impl ShardSpec {
    pub fn new(n: u8, lo: u64, hi: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::AgentCount(n));
        }
        if n > SCAN_MAX_AGENTS {
            return Err(Error::SizeLimit {
                what: "exhaustive scan",
                n,
                limit: SCAN_MAX_AGENTS,
            });
        }
        let total = state_space(n);
        if lo > hi || hi > total {
            return Err(Error::BadShard { n, lo, hi });
        }
        Ok(ShardSpec { n, lo, hi })
    }

    /// The full state space of `n` agents.
    pub fn full(n: u8) -> Result<Self> {
        if n == 0 {
            return Err(Error::AgentCount(n));
        }
        if n > SCAN_MAX_AGENTS {
            return Err(Error::SizeLimit {
                what: "exhaustive scan",
                n,
                limit: SCAN_MAX_AGENTS,
            });
        }
        Ok(ShardSpec {
            n,
            lo: 0,
            hi: state_space(n),
        })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }
}

/// Number of states for `n ≤ 7` agents: `2^(n*(n-1))`.
fn state_space(n: u8) -> u64 {
    1u64 << (u32::from(n) * u32::from(n - 1))
}

/// How a report's states were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    Constructive,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::BruteForce => "brute-force",
            Method::Constructive => "constructive",
        })
    }
}

/// Outcome of a full enumeration run.
#[derive(Debug, Clone)]
pub struct EnumerationReport {
    pub n: u8,
    pub labeled_count: u64,
    pub elapsed: Duration,
    pub method: Method,
    /// All absorbing states in ascending encoding order, when collection
    /// was requested.
    pub states: Option<Vec<TrustMatrix>>,
}

impl EnumerationReport {
    /// Single-line record: `n=<n> method=<m> count=<c> elapsed_ms=<t>`.
    pub fn record_line(&self) -> String {
        format!(
            "n={} method={} count={} elapsed_ms={}",
            self.n,
            self.method,
            self.labeled_count,
            self.elapsed.as_millis()
        )
    }
}

/// Result of scanning one shard.
#[derive(Debug, Clone)]
pub struct ShardScan {
    pub count: u64,
    /// Absorbing states in ascending encoding order, when requested.
    pub states: Option<Vec<TrustMatrix>>,
}

/// Counts (and optionally collects) the absorbing states in a shard.
pub fn scan_shard(spec: &ShardSpec, collect: bool) -> Result<ShardScan> {
    let n = spec.n;
    if collect && n > SCAN_COLLECT_MAX_AGENTS {
        return Err(Error::SizeLimit {
            what: "scan state collection",
            n,
            limit: SCAN_COLLECT_MAX_AGENTS,
        });
    }
    let mut count = 0u64;
    let mut states = collect.then(Vec::new);
    for enc in spec.lo..spec.hi {
        if absorbing_encoding(n, enc) {
            count += 1;
            if let Some(v) = states.as_mut() {
                v.push(TrustMatrix::from_u64(n, enc).unwrap());
            }
        }
    }
    Ok(ShardScan { count, states })
}

/// Exhaustive scan of the full state space across `workers` shards.
///
/// The space is split into `workers` contiguous shards scanned
/// concurrently; counts and state lists are reduced in shard order, so
/// the result is identical for every worker count.
pub fn scan_all(n: u8, workers: usize, collect: bool) -> Result<EnumerationReport> {
    assert!(workers > 0, "worker count must be positive");
    let full = ShardSpec::full(n)?;
    if collect && n > SCAN_COLLECT_MAX_AGENTS {
        return Err(Error::SizeLimit {
            what: "scan state collection",
            n,
            limit: SCAN_COLLECT_MAX_AGENTS,
        });
    }
    let start = Instant::now();
    let total = full.hi;
    let boundary = |i: usize| -> u64 { (u128::from(total) * i as u128 / workers as u128) as u64 };
    let shards: Vec<ShardSpec> = (0..workers)
        .map(|i| ShardSpec::new(n, boundary(i), boundary(i + 1)).unwrap())
        .collect();

    let scans: Vec<ShardScan> = std::thread::scope(|scope| {
        let handles: Vec<_> = shards
            .iter()
            .map(|spec| scope.spawn(move || scan_shard(spec, collect)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect::<Result<_>>()
    })?;

    let mut count = 0u64;
    let mut states = collect.then(Vec::new);
    for scan in scans {
        count += scan.count;
        if let (Some(all), Some(part)) = (states.as_mut(), scan.states) {
            all.extend(part);
        }
    }
    Ok(EnumerationReport {
        n,
        labeled_count: count,
        elapsed: start.elapsed(),
        method: Method::BruteForce,
        states,
    })
}

/// Generates every faction structure on `n` agents exactly once.
///
/// Set partitions are visited in restricted-growth-string order; within
/// a partition, core choices run through every non-empty subset of each
/// faction in ascending bitmask order, last faction fastest. The
/// sequence length is therefore the sum over partitions of the product
/// of `2^|F| - 1` over factions.
pub fn generate_structures(n: u8) -> StructureIter {
    StructureIter {
        n,
        parts: SetPartitions::new(n),
        blocks: Vec::new(),
        choices: Vec::new(),
        state: if n == 0 {
            IterState::Done
        } else {
            IterState::Fresh
        },
    }
}

/// Matrices of all faction structures on `n` agents, in generation
/// order (not ascending encoding order).
pub fn constructive_states(n: u8) -> impl Iterator<Item = TrustMatrix> {
    generate_structures(n).map(|s| s.synthesize())
}

/// Counts (and optionally collects, sorted ascending) all constructive
/// states, packaged like a scan report.
pub fn constructive_all(n: u8, collect: bool) -> Result<EnumerationReport> {
    if n == 0 {
        return Err(Error::AgentCount(n));
    }
    if n > CONSTRUCTIVE_MAX_AGENTS {
        return Err(Error::SizeLimit {
            what: "constructive enumeration report",
            n,
            limit: CONSTRUCTIVE_MAX_AGENTS,
        });
    }
    let start = Instant::now();
    let mut count = 0u64;
    let mut states = collect.then(Vec::new);
    for m in constructive_states(n) {
        count += 1;
        if let Some(v) = states.as_mut() {
            v.push(m);
        }
    }
    if let Some(v) = states.as_mut() {
        v.sort();
    }
    Ok(EnumerationReport {
        n,
        labeled_count: count,
        elapsed: start.elapsed(),
        method: Method::Constructive,
        states,
    })
}

enum IterState {
    Fresh,
    Running,
    Done,
}

/// Iterator produced by [`generate_structures`].
pub struct StructureIter {
    n: u8,
    parts: SetPartitions,
    /// Member masks of the current partition's blocks.
    blocks: Vec<u16>,
    /// Core choice per block: a non-empty submask over the block's
    /// members, indexed by member rank within the block.
    choices: Vec<u32>,
    state: IterState,
}

impl StructureIter {
    fn load_next_partition(&mut self) -> bool {
        match self.parts.next_rgs() {
            Some(rgs) => {
                block_masks(rgs, &mut self.blocks);
                self.choices.clear();
                self.choices.resize(self.blocks.len(), 1);
                true
            }
            None => false,
        }
    }

    fn build(&self) -> AbsorbingStructure {
        let factions = self
            .blocks
            .iter()
            .zip(&self.choices)
            .map(|(&mask, &choice)| {
                let members = AgentSet::from_mask(mask);
                let mut core = 0u16;
                for (rank, agent) in members.iter().enumerate() {
                    if choice >> rank & 1 != 0 {
                        core |= 1 << agent;
                    }
                }
                Faction::new(members, AgentSet::from_mask(core))
            })
            .collect();
        AbsorbingStructure::from_normalized(self.n, factions)
    }
}

impl Iterator for StructureIter {
    type Item = AbsorbingStructure;

    fn next(&mut self) -> Option<AbsorbingStructure> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                self.state = IterState::Running;
                if !self.load_next_partition() {
                    self.state = IterState::Done;
                    return None;
                }
                return Some(self.build());
            }
            IterState::Running => {}
        }
        let mut b = self.blocks.len();
        loop {
            if b == 0 {
                if !self.load_next_partition() {
                    self.state = IterState::Done;
                    return None;
                }
                return Some(self.build());
            }
            b -= 1;
            let max = (1u32 << self.blocks[b].count_ones()) - 1;
            if self.choices[b] < max {
                self.choices[b] += 1;
                for c in &mut self.choices[b + 1..] {
                    *c = 1;
                }
                return Some(self.build());
            }
        }
    }
}
