use std::fmt;
use std::str::FromStr;

use super::structure::{structure_decompose, AbsorbingStructure};
use crate::{Error, Result};

/// Largest supported agent count.
///
/// 16 agents need 240 opinion bits, which fits the four-word backing
/// store; agent subsets fit a `u16` mask.
pub const MAX_AGENTS: u8 = 16;

/// Position of opinion `(i, j)` within the packed encoding.
///
/// Row `i` occupies `n-1` consecutive bits starting at `i*(n-1)`, listing
/// the opinions of agent `i` about every other agent in column order with
/// the diagonal skipped: bit `i*(n-1) + r` holds the opinion about agent
/// `r` when `r < i`, otherwise about agent `r + 1`.
pub(crate) fn bit_index(n: u8, i: u8, j: u8) -> u32 {
    debug_assert!(i != j && i < n && j < n);
    let col = if j < i { j } else { j - 1 };
    u32::from(i) * u32::from(n - 1) + u32::from(col)
}

/// Binary trust matrix on `n` agents with an undefined diagonal.
///
/// `trusts(i, j)` is agent `i`'s opinion of agent `j`; opinions about
/// oneself do not exist. The `n*(n-1)` off-diagonal bits are packed
/// little-endian into up to four words (see [`bit_index`] for the
/// layout), so for `n ≤ 8` a state is a single `u64` and the whole state
/// space is `0..2^(n*(n-1))`.
///
/// Values are immutable; all updates return a new matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TrustMatrix {
    n: u8,
    words: [u64; 4],
}

impl TrustMatrix {
    /// Matrix in which nobody trusts anybody.
    pub fn empty(n: u8) -> Result<Self> {
        if n == 0 || n > MAX_AGENTS {
            return Err(Error::AgentCount(n));
        }
        Ok(TrustMatrix { n, words: [0; 4] })
    }

    /// Matrix in which everybody trusts everybody else.
    pub fn full(n: u8) -> Result<Self> {
        let mut m = TrustMatrix::empty(n)?;
        for b in 0..m.bit_len() {
            m.words[(b / 64) as usize] |= 1u64 << (b % 64);
        }
        Ok(m)
    }

    /// Matrix from an integer encoding; only valid for `n ≤ 8`.
    pub fn from_u64(n: u8, encoding: u64) -> Result<Self> {
        if n == 0 || n > MAX_AGENTS {
            return Err(Error::AgentCount(n));
        }
        let bits = u32::from(n) * u32::from(n - 1);
        if bits < 64 && encoding >> bits != 0 {
            return Err(Error::EncodingOutOfRange { n, encoding });
        }
        Ok(TrustMatrix {
            n,
            words: [encoding, 0, 0, 0],
        })
    }

    /// Matrix from a bare lowercase/uppercase hex encoding (no `0x`).
    pub fn from_hex(n: u8, hex: &str) -> Result<Self> {
        if n == 0 || n > MAX_AGENTS {
            return Err(Error::AgentCount(n));
        }
        if hex.is_empty() || hex.len() > 64 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::Parse(format!("bad hex encoding {hex:?}")));
        }
        let mut words = [0u64; 4];
        let bytes = hex.as_bytes();
        let mut pos = bytes.len();
        for word in &mut words {
            if pos == 0 {
                break;
            }
            let start = pos.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..pos]).unwrap();
            *word = u64::from_str_radix(chunk, 16)
                .map_err(|e| Error::Parse(format!("bad hex encoding {hex:?}: {e}")))?;
            pos = start;
        }
        let m = TrustMatrix { n, words };
        let bits = m.bit_len();
        for b in bits..256 {
            if m.words[(b / 64) as usize] >> (b % 64) & 1 != 0 {
                return Err(Error::EncodingOutOfRange {
                    n,
                    encoding: words[0],
                });
            }
        }
        Ok(m)
    }

    pub(crate) fn from_words(n: u8, words: [u64; 4]) -> Self {
        TrustMatrix { n, words }
    }

    /// Agent count.
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Number of defined opinion bits, `n*(n-1)`.
    pub fn bit_len(&self) -> u32 {
        u32::from(self.n) * u32::from(self.n - 1)
    }

    /// Number of trust relations present (one-bits in the encoding).
    pub fn trust_count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Integer encoding.
    ///
    /// # Panics
    /// For `n > 8` the encoding can exceed 64 bits; use [`hex`](Self::hex)
    /// there instead.
    pub fn encoding_u64(&self) -> u64 {
        assert!(self.n <= 8, "encoding_u64 requires n <= 8");
        self.words[0]
    }

    pub(crate) fn words(&self) -> [u64; 4] {
        self.words
    }

    /// Encoding as a bare lowercase hex string (no `0x`, no padding).
    pub fn hex(&self) -> String {
        let mut top = 3;
        while top > 0 && self.words[top] == 0 {
            top -= 1;
        }
        let mut s = format!("{:x}", self.words[top]);
        for w in self.words[..top].iter().rev() {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    /// Whether agent `i` trusts agent `j`.
    ///
    /// # Panics
    /// If `i == j` (undefined diagonal) or either index is out of range.
    pub fn trusts(&self, i: u8, j: u8) -> bool {
        assert!(i != j, "diagonal opinion ({i},{i}) is undefined");
        assert!(i < self.n && j < self.n, "agent index out of range");
        let b = bit_index(self.n, i, j);
        self.words[(b / 64) as usize] >> (b % 64) & 1 != 0
    }

    /// Copy of the matrix with opinion `(i, j)` set to `value`.
    ///
    /// # Panics
    /// Same conditions as [`trusts`](Self::trusts).
    pub fn with_trust(&self, i: u8, j: u8, value: bool) -> Self {
        assert!(i != j, "diagonal opinion ({i},{i}) is undefined");
        assert!(i < self.n && j < self.n, "agent index out of range");
        let b = bit_index(self.n, i, j);
        let mut words = self.words;
        if value {
            words[(b / 64) as usize] |= 1u64 << (b % 64);
        } else {
            words[(b / 64) as usize] &= !(1u64 << (b % 64));
        }
        TrustMatrix { n: self.n, words }
    }

    /// Agents that `i` trusts.
    pub fn trust_targets(&self, i: u8) -> AgentSet {
        AgentSet::from_mask(self.row_mask(i))
    }

    /// Agents that trust `j`.
    pub fn trusters(&self, j: u8) -> AgentSet {
        let mut mask = 0u16;
        for i in 0..self.n {
            if i != j && self.trusts(i, j) {
                mask |= 1 << i;
            }
        }
        AgentSet::from_mask(mask)
    }

    /// Row `i` as an n-bit agent mask (bit `j` set iff `i` trusts `j`).
    fn row_mask(&self, i: u8) -> u16 {
        assert!(i < self.n, "agent index out of range");
        if self.n <= 8 {
            expand_row(self.n, self.words[0], i)
        } else {
            let mut mask = 0u16;
            for j in 0..self.n {
                if j != i && self.trusts(i, j) {
                    mask |= 1 << j;
                }
            }
            mask
        }
    }

    fn all_row_masks(&self) -> [u16; MAX_AGENTS as usize] {
        let mut rows = [0u16; MAX_AGENTS as usize];
        for i in 0..self.n {
            rows[i as usize] = self.row_mask(i);
        }
        rows
    }

    /// Result of the gossip event `e`: the listener adopts the speaker's
    /// opinion of the target iff the listener trusts the speaker.
    pub fn apply_gossip(&self, e: GossipEvent) -> Result<Self> {
        e.check(self.n)?;
        if !self.trusts(e.listener, e.speaker) {
            return Ok(*self);
        }
        let opinion = self.trusts(e.speaker, e.target);
        Ok(self.with_trust(e.listener, e.target, opinion))
    }

    /// Whether no gossip event changes the state.
    ///
    /// Equivalent to: for every ordered pair `(z, a)` with `z` trusting
    /// `a`, rows `z` and `a` agree on every column other than `z` and `a`.
    /// With rows as bit masks that is one XOR per trusting pair instead
    /// of a scan over all `n(n-1)(n-2)` events.
    pub fn is_absorbing(&self) -> bool {
        if self.n < 3 {
            return true;
        }
        rows_absorbing(self.n, &self.all_row_masks())
    }

    /// Faction/core decomposition; defined only for absorbing states.
    ///
    /// Each agent belongs to exactly one faction. Core members of a
    /// faction trust exactly their faction's core and are trusted by the
    /// whole faction; peripheral members trust exactly their faction's
    /// core and are trusted by nobody. Trust never crosses faction
    /// boundaries, so the matrix is fully determined by the factions and
    /// their cores.
    pub fn decompose(&self) -> Result<AbsorbingStructure> {
        structure_decompose(self)
    }

    /// Human-readable grid with `-` on the diagonal.
    pub fn grid(&self) -> String {
        let n = self.n;
        let mut s = String::new();
        s.push_str("  |");
        for j in 0..n {
            s.push_str(&format!(" {j}"));
        }
        s.push('\n');
        s.push_str("--+");
        s.push_str(&"-".repeat(2 * usize::from(n)));
        s.push('\n');
        for i in 0..n {
            s.push_str(&format!("{i} |"));
            for j in 0..n {
                if i == j {
                    s.push_str(" -");
                } else {
                    s.push_str(if self.trusts(i, j) { " 1" } else { " 0" });
                }
            }
            s.push('\n');
        }
        s
    }
}

/// Expand row `i` of a packed `n ≤ 8` encoding into an n-bit agent mask.
///
/// The packed row is `n-1` contiguous bits with the diagonal skipped;
/// re-inserting a zero hole at position `i` aligns rows so they can be
/// compared with a single XOR.
fn expand_row(n: u8, encoding: u64, i: u8) -> u16 {
    let w = u32::from(n - 1);
    let raw = (encoding >> (u32::from(i) * w)) & ((1u64 << w) - 1);
    let low = raw & ((1u64 << i) - 1);
    let high = raw >> i;
    (low | (high << (i + 1))) as u16
}

fn rows_absorbing(n: u8, rows: &[u16; MAX_AGENTS as usize]) -> bool {
    for z in 0..usize::from(n) {
        let rz = rows[z];
        let mut speakers = rz;
        while speakers != 0 {
            let a = speakers.trailing_zeros() as usize;
            speakers &= speakers - 1;
            let off_pair = !((1u16 << z) | (1u16 << a));
            if (rz ^ rows[a]) & off_pair != 0 {
                return false;
            }
        }
    }
    true
}

/// Absorbing test on a raw encoding, `n ≤ 8` fast path.
///
/// Identical to [`TrustMatrix::is_absorbing`] but skips matrix
/// construction; this is the inner loop of the exhaustive scan.
pub(crate) fn absorbing_encoding(n: u8, encoding: u64) -> bool {
    debug_assert!((1..=8).contains(&n));
    if n < 3 {
        return true;
    }
    let mut rows = [0u16; MAX_AGENTS as usize];
    for i in 0..n {
        rows[i as usize] = expand_row(n, encoding, i);
    }
    rows_absorbing(n, &rows)
}

impl fmt::Display for TrustMatrix {
    /// Formats as `n=<n> state=0x<hex>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} state=0x{}", self.n, self.hex())
    }
}

impl fmt::Debug for TrustMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TrustMatrix({self})")
    }
}

impl FromStr for TrustMatrix {
    type Err = Error;

    /// Parses the `n=<n> state=0x<hex>` display form.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let n_part = parts.next().ok_or_else(|| Error::Parse(s.into()))?;
        let state_part = parts.next().ok_or_else(|| Error::Parse(s.into()))?;
        if parts.next().is_some() {
            return Err(Error::Parse(s.into()));
        }
        let n = n_part
            .strip_prefix("n=")
            .and_then(|v| v.parse::<u8>().ok())
            .ok_or_else(|| Error::Parse(format!("bad agent count in {s:?}")))?;
        let hex = state_part
            .strip_prefix("state=0x")
            .ok_or_else(|| Error::Parse(format!("bad state field in {s:?}")))?;
        TrustMatrix::from_hex(n, hex)
    }
}

impl PartialOrd for TrustMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TrustMatrix {
    /// Orders by agent count, then by integer encoding.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n.cmp(&other.n).then_with(|| {
            let a = self.words.iter().rev();
            let b = other.words.iter().rev();
            a.cmp(b)
        })
    }
}

/// One gossip step: `speaker` tells `listener` its opinion of `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GossipEvent {
    pub speaker: u8,
    pub listener: u8,
    pub target: u8,
}

impl GossipEvent {
    /// Event with pairwise-distinct roles.
    pub fn new(speaker: u8, listener: u8, target: u8) -> Result<Self> {
        let e = GossipEvent {
            speaker,
            listener,
            target,
        };
        e.check(MAX_AGENTS)?;
        Ok(e)
    }

    fn check(&self, n: u8) -> Result<()> {
        let (a, z, y) = (self.speaker, self.listener, self.target);
        if a == z || a == y || z == y || a >= n || z >= n || y >= n {
            return Err(Error::InvalidEvent {
                speaker: a,
                listener: z,
                target: y,
                n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for GossipEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.speaker, self.listener, self.target)
    }
}

/// All `n(n-1)(n-2)` valid events in lexicographic
/// (speaker, listener, target) order. Empty for `n < 3`.
pub fn enumerate_events(n: u8) -> impl Iterator<Item = GossipEvent> {
    (0..n).flat_map(move |a| {
        (0..n).filter(move |&z| z != a).flat_map(move |z| {
            (0..n)
                .filter(move |&y| y != a && y != z)
                .map(move |y| GossipEvent {
                    speaker: a,
                    listener: z,
                    target: y,
                })
        })
    })
}

/// Subset of agents as a 16-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AgentSet(u16);

impl AgentSet {
    /// The empty set.
    pub const EMPTY: AgentSet = AgentSet(0);

    /// Set containing only agent `i`.
    pub fn singleton(i: u8) -> Self {
        assert!(i < MAX_AGENTS, "agent index out of range");
        AgentSet(1 << i)
    }

    /// Set from a raw bit mask (bit `i` ⇔ agent `i`).
    pub fn from_mask(mask: u16) -> Self {
        AgentSet(mask)
    }

    /// Raw bit mask.
    pub fn mask(&self) -> u16 {
        self.0
    }

    pub fn contains(&self, i: u8) -> bool {
        i < MAX_AGENTS && self.0 >> i & 1 != 0
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Smallest member, if any.
    pub fn smallest(&self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as u8)
        }
    }

    pub fn is_subset(&self, other: &AgentSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 & other.0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u8> {
        let mask = self.0;
        (0..MAX_AGENTS).filter(move |i| mask >> i & 1 != 0)
    }
}

impl FromIterator<u8> for AgentSet {
    fn from_iter<T: IntoIterator<Item = u8>>(iter: T) -> Self {
        let mut mask = 0u16;
        for i in iter {
            assert!(i < MAX_AGENTS, "agent index out of range");
            mask |= 1 << i;
        }
        AgentSet(mask)
    }
}

impl fmt::Display for AgentSet {
    /// Formats as `{0,2,5}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Event-by-event restatement of the absorbing condition.
    fn absorbing_naive(m: &TrustMatrix) -> bool {
        enumerate_events(m.n()).all(|e| m.apply_gossip(e).unwrap() == *m)
    }

    #[test]
    fn bit_layout_n3() {
        // Row-major with the diagonal skipped: (0,1) (0,2) (1,0) (1,2) (2,0) (2,1).
        let pairs = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
        for (b, (i, j)) in pairs.into_iter().enumerate() {
            assert_eq!(bit_index(3, i, j), b as u32);
            let m = TrustMatrix::from_u64(3, 1 << b).unwrap();
            assert!(m.trusts(i, j));
            assert_eq!(m.trust_count(), 1);
        }
    }

    #[test]
    fn from_u64_rejects_out_of_range() {
        assert_eq!(
            TrustMatrix::from_u64(2, 4),
            Err(Error::EncodingOutOfRange { n: 2, encoding: 4 })
        );
        assert_eq!(TrustMatrix::from_u64(0, 0), Err(Error::AgentCount(0)));
        assert_eq!(TrustMatrix::from_u64(17, 0), Err(Error::AgentCount(17)));
        assert!(TrustMatrix::from_u64(2, 3).is_ok());
    }

    #[test]
    fn with_trust_round_trip() {
        let m = TrustMatrix::empty(4).unwrap();
        let m = m.with_trust(2, 0, true).with_trust(1, 3, true);
        assert!(m.trusts(2, 0));
        assert!(m.trusts(1, 3));
        assert!(!m.trusts(0, 2));
        assert_eq!(m.with_trust(2, 0, false).trust_count(), 1);
    }

    #[test]
    fn gossip_adopts_opinion_when_listener_trusts_speaker() {
        // Encoding 6 = bits 1,2: trusts(0,2) and trusts(1,0).
        let m = TrustMatrix::from_u64(3, 6).unwrap();
        let e = GossipEvent::new(0, 1, 2).unwrap();
        let out = m.apply_gossip(e).unwrap();
        assert_eq!(out.encoding_u64(), 14);
        assert!(out.trusts(1, 2));
    }

    #[test]
    fn gossip_clears_opinion_when_speaker_distrusts_target() {
        // Encoding 12 = bits 2,3: trusts(1,0) and trusts(1,2); speaker 0
        // distrusts 2, so listener 1 drops its trust in 2.
        let m = TrustMatrix::from_u64(3, 12).unwrap();
        let e = GossipEvent::new(0, 1, 2).unwrap();
        let out = m.apply_gossip(e).unwrap();
        assert_eq!(out.encoding_u64(), 4);
    }

    #[test]
    fn gossip_ignored_without_trust_in_speaker() {
        let m = TrustMatrix::from_u64(3, 3).unwrap();
        for e in enumerate_events(3) {
            if !m.trusts(e.listener, e.speaker) {
                assert_eq!(m.apply_gossip(e).unwrap(), m);
            }
        }
    }

    #[test]
    fn gossip_rejects_bad_events() {
        let m = TrustMatrix::empty(3).unwrap();
        assert!(GossipEvent::new(1, 1, 2).is_err());
        let e = GossipEvent::new(0, 1, 3).unwrap();
        assert_eq!(
            m.apply_gossip(e),
            Err(Error::InvalidEvent {
                speaker: 0,
                listener: 1,
                target: 3,
                n: 3
            })
        );
    }

    #[test]
    fn event_enumeration_counts_and_order() {
        assert_eq!(enumerate_events(1).count(), 0);
        assert_eq!(enumerate_events(2).count(), 0);
        assert_eq!(enumerate_events(3).count(), 6);
        assert_eq!(enumerate_events(4).count(), 24);
        assert_eq!(enumerate_events(5).count(), 60);
        let first: Vec<_> = enumerate_events(3)
            .map(|e| (e.speaker, e.listener, e.target))
            .collect();
        assert_eq!(
            first,
            [
                (0, 1, 2),
                (0, 2, 1),
                (1, 0, 2),
                (1, 2, 0),
                (2, 0, 1),
                (2, 1, 0)
            ]
        );
    }

    #[test]
    fn tiny_systems_are_always_absorbing() {
        assert!(TrustMatrix::empty(1).unwrap().is_absorbing());
        for enc in 0..4 {
            assert!(TrustMatrix::from_u64(2, enc).unwrap().is_absorbing());
        }
    }

    #[test]
    fn absorbing_examples() {
        assert!(TrustMatrix::empty(3).unwrap().is_absorbing());
        assert!(TrustMatrix::full(3).unwrap().is_absorbing());
        assert!(!TrustMatrix::from_u64(3, 9).unwrap().is_absorbing());
    }

    #[test]
    fn absorbing_matches_naive_check_exhaustively() {
        for n in [3u8, 4] {
            for enc in 0..1u64 << (n * (n - 1)) {
                let m = TrustMatrix::from_u64(n, enc).unwrap();
                assert_eq!(m.is_absorbing(), absorbing_naive(&m), "n={n} enc={enc}");
                assert_eq!(absorbing_encoding(n, enc), m.is_absorbing());
            }
        }
    }

    #[test]
    fn absorbing_matches_naive_check_sampled() {
        // Fixed multiplicative walk gives a cheap deterministic sample.
        for n in [5u8, 6, 7, 8] {
            let bits = u32::from(n) * u32::from(n - 1);
            let mut x = 0x9e3779b97f4a7c15u64;
            for _ in 0..2000 {
                x = x
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let enc = x >> (64 - bits);
                let m = TrustMatrix::from_u64(n, enc).unwrap();
                assert_eq!(m.is_absorbing(), absorbing_naive(&m), "n={n} enc={enc}");
                assert_eq!(absorbing_encoding(n, enc), m.is_absorbing());
            }
        }
    }

    #[test]
    fn trust_sets() {
        let m = TrustMatrix::from_u64(3, 6).unwrap();
        assert_eq!(m.trust_targets(0), AgentSet::singleton(2));
        assert_eq!(m.trust_targets(1), AgentSet::singleton(0));
        assert_eq!(m.trusters(0), AgentSet::singleton(1));
        assert_eq!(m.trusters(1), AgentSet::EMPTY);
    }

    #[test]
    fn display_and_parse_round_trip() {
        let m = TrustMatrix::from_u64(3, 0x2a).unwrap();
        assert_eq!(m.to_string(), "n=3 state=0x2a");
        assert_eq!("n=3 state=0x2a".parse::<TrustMatrix>().unwrap(), m);
        let big = TrustMatrix::full(12).unwrap();
        assert_eq!(big.to_string().parse::<TrustMatrix>().unwrap(), big);
        assert!("n=3 state=42".parse::<TrustMatrix>().is_err());
        assert!("n=3 state=0x40".parse::<TrustMatrix>().is_err());
    }

    #[test]
    fn hex_round_trip_multiword() {
        let m = TrustMatrix::full(16).unwrap();
        assert_eq!(m.bit_len(), 240);
        assert_eq!(m.hex().len(), 60);
        assert_eq!(TrustMatrix::from_hex(16, &m.hex()).unwrap(), m);
        assert_eq!(TrustMatrix::empty(5).unwrap().hex(), "0");
    }

    #[test]
    fn ordering_follows_encoding() {
        let a = TrustMatrix::from_u64(3, 5).unwrap();
        let b = TrustMatrix::from_u64(3, 9).unwrap();
        assert!(a < b);
        let big_low = TrustMatrix::from_hex(16, "1").unwrap();
        let big_high = TrustMatrix::from_hex(16, &format!("1{}", "0".repeat(17))).unwrap();
        assert!(big_low < big_high);
    }

    #[test]
    fn grid_marks_diagonal() {
        let g = TrustMatrix::from_u64(3, 6).unwrap().grid();
        let lines: Vec<_> = g.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[2], "0 | - 0 1");
        assert_eq!(lines[3], "1 | 1 - 0");
        assert_eq!(lines[4], "2 | 0 0 -");
    }

    #[test]
    fn agent_set_basics() {
        let s: AgentSet = [0u8, 2, 5].into_iter().collect();
        assert_eq!(s.len(), 3);
        assert_eq!(s.smallest(), Some(0));
        assert!(s.contains(2) && !s.contains(1));
        assert_eq!(s.to_string(), "{0,2,5}");
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert!(AgentSet::singleton(2).is_subset(&s));
        assert_eq!(s.intersection(AgentSet::singleton(1)), AgentSet::EMPTY);
        assert_eq!(
            AgentSet::singleton(1).union(AgentSet::singleton(0)).mask(),
            3
        );
    }
}
