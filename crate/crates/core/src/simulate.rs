//! Seeded Monte Carlo gossip trajectories.
//!
//! Each step draws one gossip event uniformly at random, applies it, and
//! checks for absorption. All randomness comes from SplitMix64, so a
//! trajectory is a pure function of (start, seed, max_steps) and results
//! are bit-identical across platforms and schedules.

use std::collections::BTreeMap;

use crate::classify::{iso_class, IsoClass};
use crate::{enumerate_events, Error, GossipEvent, Result, TrustMatrix};

/// SplitMix64 generator (Steele, Lea & Flood's 2014 mixer; the same
/// stream as Vigna's public-domain reference implementation).
///
/// Chosen for bit-reproducible simulations: 64-bit state, trivially
/// seedable, identical output on every platform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound` by rejection sampling (no modulo
    /// bias).
    pub fn uniform(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "uniform bound must be positive");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }
}

/// Deterministic per-trajectory seed for (master seed, start state,
/// replicate index).
///
/// Chains each input word through one SplitMix64 output step, so
/// trajectories are schedule-independent: a trajectory's stream depends
/// only on its own coordinates, never on how work was distributed.
pub fn trajectory_seed(master_seed: u64, start: &TrustMatrix, replicate: u64) -> u64 {
    let mut acc = master_seed;
    for w in start.words() {
        acc = SplitMix64::new(acc ^ w).next_u64();
    }
    acc = SplitMix64::new(acc ^ u64::from(start.n())).next_u64();
    SplitMix64::new(acc ^ replicate).next_u64()
}

/// Outcome of one seeded trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryResult {
    pub start: TrustMatrix,
    pub seed: u64,
    /// False only when the step cap was reached first.
    pub absorbed: bool,
    pub steps_taken: u64,
    pub final_state: TrustMatrix,
    /// Class of the final state, when absorbed.
    pub final_class: Option<IsoClass>,
}

impl TrajectoryResult {
    /// CSV row: `start_hex,seed,absorbed,steps,final_hex,class`
    /// (class empty when not absorbed).
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.start.hex(),
            self.seed,
            self.absorbed,
            self.steps_taken,
            self.final_state.hex(),
            self.final_class
                .as_ref()
                .map_or_else(String::new, ToString::to_string)
        )
    }
}

/// Runs one trajectory: draw a uniform event, apply it, check for
/// absorption, until absorbed or `max_steps` events were applied.
///
/// Systems with `n < 3` have no events and are absorbed at step 0.
pub fn run_trajectory(start: &TrustMatrix, seed: u64, max_steps: u64) -> TrajectoryResult {
    let events: Vec<GossipEvent> = enumerate_events(start.n()).collect();
    let mut rng = SplitMix64::new(seed);
    let mut state = *start;
    let mut steps = 0u64;
    let mut absorbed = state.is_absorbing();
    while !absorbed && steps < max_steps {
        let event = events[rng.uniform(events.len() as u64) as usize];
        state = state
            .apply_gossip(event)
            .expect("enumerated events are valid");
        steps += 1;
        absorbed = state.is_absorbing();
    }
    TrajectoryResult {
        start: *start,
        seed,
        absorbed,
        steps_taken: steps,
        final_state: state,
        final_class: absorbed.then(|| iso_class(&state).expect("absorbed state decomposes")),
    }
}

/// Which start states a basin census covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartSelection {
    /// Every state in the space (n ≤ 5).
    AllStates,
    /// This many uniformly sampled starts, drawn from the master seed's
    /// own stream (n ≤ 8); repeats are merged.
    Sample(u64),
}

/// Largest `n` for all-states basin runs.
pub const BASIN_ALL_MAX_AGENTS: u8 = 5;

/// Largest `n` for sampled basin runs (encodings must fit one word).
pub const BASIN_SAMPLE_MAX_AGENTS: u8 = 8;

/// Empirical absorption distribution for one start state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasinRow {
    pub start: TrustMatrix,
    /// (final absorbing state, trajectories ending there), ascending by
    /// state.
    pub finals: Vec<(TrustMatrix, u64)>,
    /// Trajectories from this start that hit the step cap.
    pub unabsorbed: u64,
}

/// Aggregated basin-of-attraction census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasinCensus {
    pub n: u8,
    pub seeds_per_state: u32,
    pub max_steps: u64,
    pub master_seed: u64,
    /// One row per start state, ascending by start.
    pub rows: Vec<BasinRow>,
    /// (final absorbing state, total trajectories ending there) over all
    /// starts, ascending by state.
    pub totals: Vec<(TrustMatrix, u64)>,
    /// Total trajectories that hit the step cap.
    pub unabsorbed_total: u64,
}

/// Runs `seeds_per_state` trajectories from each selected start and
/// aggregates where they land.
///
/// Per-trajectory seeds come from [`trajectory_seed`], so the census is
/// deterministic in (everything here) and independent of `workers`.
pub fn basin_census(
    n: u8,
    selection: StartSelection,
    seeds_per_state: u32,
    max_steps: u64,
    master_seed: u64,
    workers: usize,
) -> Result<BasinCensus> {
    assert!(workers > 0, "worker count must be positive");
    if n == 0 {
        return Err(Error::AgentCount(n));
    }
    let starts: Vec<TrustMatrix> = match selection {
        StartSelection::AllStates => {
            if n > BASIN_ALL_MAX_AGENTS {
                return Err(Error::SizeLimit {
                    what: "all-states basin census",
                    n,
                    limit: BASIN_ALL_MAX_AGENTS,
                });
            }
            let total = 1u64 << (u32::from(n) * u32::from(n - 1));
            (0..total)
                .map(|enc| TrustMatrix::from_u64(n, enc).unwrap())
                .collect()
        }
        StartSelection::Sample(count) => {
            if n > BASIN_SAMPLE_MAX_AGENTS {
                return Err(Error::SizeLimit {
                    what: "sampled basin census",
                    n,
                    limit: BASIN_SAMPLE_MAX_AGENTS,
                });
            }
            let total = 1u64 << (u32::from(n) * u32::from(n - 1));
            let mut rng = SplitMix64::new(master_seed);
            (0..count)
                .map(|_| TrustMatrix::from_u64(n, rng.uniform(total)).unwrap())
                .collect()
        }
    };

    let runs_of = |start: &TrustMatrix| -> (BTreeMap<TrustMatrix, u64>, u64) {
        let mut finals = BTreeMap::new();
        let mut unabsorbed = 0u64;
        for replicate in 0..u64::from(seeds_per_state) {
            let seed = trajectory_seed(master_seed, start, replicate);
            let result = run_trajectory(start, seed, max_steps);
            if result.absorbed {
                *finals.entry(result.final_state).or_insert(0) += 1;
            } else {
                unabsorbed += 1;
            }
        }
        (finals, unabsorbed)
    };

    type StartOutcome = (TrustMatrix, BTreeMap<TrustMatrix, u64>, u64);
    let boundary =
        |i: usize| -> usize { (starts.len() as u128 * i as u128 / workers as u128) as usize };
    let chunk_results: Vec<Vec<StartOutcome>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|i| {
                let starts = &starts[boundary(i)..boundary(i + 1)];
                let runs_of = &runs_of;
                scope.spawn(move || {
                    starts
                        .iter()
                        .map(|s| {
                            let (finals, unabsorbed) = runs_of(s);
                            (*s, finals, unabsorbed)
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("basin worker panicked"))
            .collect()
    });

    // Merge per-start results (sampled starts may repeat).
    let mut merged: BTreeMap<TrustMatrix, (BTreeMap<TrustMatrix, u64>, u64)> = BTreeMap::new();
    for (start, finals, unabsorbed) in chunk_results.into_iter().flatten() {
        let entry = merged.entry(start).or_default();
        for (state, k) in finals {
            *entry.0.entry(state).or_insert(0) += k;
        }
        entry.1 += unabsorbed;
    }

    let mut totals: BTreeMap<TrustMatrix, u64> = BTreeMap::new();
    let mut unabsorbed_total = 0u64;
    let rows: Vec<BasinRow> = merged
        .into_iter()
        .map(|(start, (finals, unabsorbed))| {
            for (&state, &k) in &finals {
                *totals.entry(state).or_insert(0) += k;
            }
            unabsorbed_total += unabsorbed;
            BasinRow {
                start,
                finals: finals.into_iter().collect(),
                unabsorbed,
            }
        })
        .collect();

    Ok(BasinCensus {
        n,
        seeds_per_state,
        max_steps,
        master_seed,
        rows,
        totals: totals.into_iter().collect(),
        unabsorbed_total,
    })
}
