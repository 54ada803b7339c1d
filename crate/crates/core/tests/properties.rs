//! Randomized invariant checks for the core model.

use gossip_core::classify::{canonical_form, iso_class, relabel};
use gossip_core::enumerate::{scan_all, scan_shard, ShardSpec};
use gossip_core::simulate::run_trajectory;
use gossip_core::trustnet::{
    enumerate_events, AbsorbingStructure, AgentSet, Faction, GossipEvent, TrustMatrix,
};
use proptest::prelude::*;

/// A random matrix for up to 8 agents, built from a raw 56-bit encoding.
fn small_matrix() -> impl Strategy<Value = TrustMatrix> {
    (3u8..=8, any::<u64>()).prop_map(|(n, raw)| {
        let bits = u32::from(n) * u32::from(n - 1);
        TrustMatrix::from_u64(n, raw & ((1u64 << bits) - 1)).unwrap()
    })
}

/// A random matrix for up to 16 agents, one random bit per off-diagonal entry.
fn wide_matrix() -> impl Strategy<Value = TrustMatrix> {
    (1u8..=16, any::<[u64; 4]>()).prop_map(|(n, raw)| {
        let mut m = TrustMatrix::empty(n).unwrap();
        let mut k = 0usize;
        for i in 0..n {
            for j in 0..n {
                if j != i {
                    if raw[k / 64] >> (k % 64) & 1 == 1 {
                        m = m.with_trust(i, j, true);
                    }
                    k += 1;
                }
            }
        }
        m
    })
}

/// A random absorbing structure: random faction labels, random non-empty cores.
fn structure(max_n: u8) -> impl Strategy<Value = AbsorbingStructure> {
    (1u8..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(0..n, usize::from(n)),
                proptest::collection::vec(any::<u64>(), usize::from(n)),
            )
        })
        .prop_map(|(n, labels, picks)| {
            let mut order: Vec<u8> = Vec::new();
            let mut members: Vec<Vec<u8>> = Vec::new();
            for (agent, &label) in labels.iter().enumerate() {
                let slot = match order.iter().position(|&l| l == label) {
                    Some(s) => s,
                    None => {
                        order.push(label);
                        members.push(Vec::new());
                        order.len() - 1
                    }
                };
                members[slot].push(agent as u8);
            }
            let factions = members
                .iter()
                .enumerate()
                .map(|(slot, block)| {
                    let size = block.len() as u32;
                    let choice = 1 + picks[slot] % ((1u64 << size) - 1);
                    let core = block
                        .iter()
                        .enumerate()
                        .filter(|(rank, _)| choice >> rank & 1 == 1)
                        .map(|(_, &agent)| agent)
                        .collect::<AgentSet>();
                    Faction::new(block.iter().copied().collect(), core)
                })
                .collect();
            AbsorbingStructure::new(n, factions).unwrap()
        })
}

proptest! {
    /// A listener who distrusts the speaker ignores the gossip entirely.
    #[test]
    fn gossip_gate_blocks_distrusted_speakers(m in small_matrix(), seed in any::<u64>()) {
        let e = {
            let n = m.n();
            let a = (seed % u64::from(n)) as u8;
            let z = ((seed >> 8) % u64::from(n)) as u8;
            let y = ((seed >> 16) % u64::from(n)) as u8;
            match GossipEvent::new(a, z, y) {
                Ok(e) => e,
                Err(_) => return Ok(()),
            }
        };
        let after = m.apply_gossip(e).unwrap();
        if !m.trusts(e.listener, e.speaker) {
            prop_assert_eq!(after, m);
        }
    }

    /// Gossip rewrites exactly the listener's opinion of the target, or nothing.
    #[test]
    fn gossip_changes_at_most_one_entry(m in small_matrix(), raw in any::<u64>()) {
        let n = m.n();
        let a = (raw % u64::from(n)) as u8;
        let z = ((raw >> 8) % u64::from(n)) as u8;
        let y = ((raw >> 16) % u64::from(n)) as u8;
        let e = match GossipEvent::new(a, z, y) {
            Ok(e) => e,
            Err(_) => return Ok(()),
        };
        let after = m.apply_gossip(e).unwrap();
        let expected = if m.trusts(z, a) {
            m.with_trust(z, y, m.trusts(a, y))
        } else {
            m
        };
        prop_assert_eq!(after, expected);
    }

    /// The fast absorbing predicate agrees with the definition: no event changes the state.
    #[test]
    fn absorbing_matches_event_by_event_definition(m in small_matrix()) {
        if m.n() > 5 {
            return Ok(());
        }
        let fixed = enumerate_events(m.n()).all(|e| m.apply_gossip(e).unwrap() == m);
        prop_assert_eq!(m.is_absorbing(), fixed);
    }

    /// Synthesized structures are absorbing and decompose back to themselves.
    #[test]
    fn structure_synthesis_round_trips(s in structure(8)) {
        let m = s.synthesize();
        prop_assert!(m.is_absorbing());
        prop_assert_eq!(m.decompose().unwrap(), s);
    }

    /// Relabeling agents never changes the faction-size class.
    #[test]
    fn iso_class_is_relabeling_invariant(s in structure(7), perm_seed in any::<u64>()) {
        let m = s.synthesize();
        let perm = pseudo_shuffle(m.n(), perm_seed);
        let relabeled = relabel(&m, &perm);
        prop_assert_eq!(iso_class(&m).unwrap(), iso_class(&relabeled).unwrap());
    }

    /// Relabeling agents never changes the canonical form.
    #[test]
    fn canonical_form_is_relabeling_invariant(s in structure(6), perm_seed in any::<u64>()) {
        let m = s.synthesize();
        let perm = pseudo_shuffle(m.n(), perm_seed);
        let relabeled = relabel(&m, &perm);
        prop_assert_eq!(canonical_form(&m).unwrap(), canonical_form(&relabeled).unwrap());
    }

    /// Text forms parse back to the same matrix.
    #[test]
    fn hex_and_display_round_trip(m in wide_matrix()) {
        prop_assert_eq!(TrustMatrix::from_hex(m.n(), &m.hex()).unwrap(), m);
        prop_assert_eq!(m.to_string().parse::<TrustMatrix>().unwrap(), m);
    }

    /// Any partition of the state space into shards scans to the same total.
    #[test]
    fn shard_counts_sum_to_full_scan(cuts in proptest::collection::vec(0u64..=4096, 0..6)) {
        let n = 4;
        let space = 1u64 << 12;
        let mut bounds = cuts;
        bounds.push(0);
        bounds.push(space);
        bounds.sort_unstable();
        let mut total = 0u64;
        for pair in bounds.windows(2) {
            let spec = ShardSpec::new(n, pair[0], pair[1]).unwrap();
            total += scan_shard(&spec, false).unwrap().count;
        }
        prop_assert_eq!(total, scan_all(n, 2, false).unwrap().labeled_count);
    }

    /// Trajectories replay byte-for-byte and stop on genuinely absorbing states.
    #[test]
    fn trajectory_replays_and_ends_absorbed(enc in 0u64..(1 << 12), seed in any::<u64>()) {
        let start = TrustMatrix::from_u64(4, enc).unwrap();
        let r1 = run_trajectory(&start, seed, 100_000);
        let r2 = run_trajectory(&start, seed, 100_000);
        prop_assert_eq!(r1.csv_line(), r2.csv_line());
        if r1.absorbed {
            prop_assert!(r1.final_state.is_absorbing());
            prop_assert!(r1.final_class.is_some());
        }
    }
}

/// Deterministic Fisher-Yates shuffle of `0..n` driven by a seed.
fn pseudo_shuffle(n: u8, seed: u64) -> Vec<u8> {
    let mut perm: Vec<u8> = (0..n).collect();
    let mut state = seed;
    for i in (1..perm.len()).rev() {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let j = (state >> 33) as usize % (i + 1);
        perm.swap(i, j);
    }
    perm
}
