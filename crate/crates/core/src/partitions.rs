//! Set-partition iteration via restricted growth strings.
//!
//! A restricted growth string (RGS) for `{0..n-1}` is `a[0..n]` with
//! `a[0] = 0` and `a[i] ≤ max(a[0..i]) + 1`; `a[i]` is the block of
//! element `i`, blocks numbered by first appearance. Iterating RGSs in
//! lexicographic order visits every set partition exactly once, Bell(n)
//! in total.

/// Lexicographic iterator over all RGSs of length `n`.
///
/// A lending iterator: `next_rgs` returns a view into internal state, so
/// callers copy what they need before advancing.
pub(crate) struct SetPartitions {
    rgs: Vec<u8>,
    /// prefix_max[i] = max(rgs[0..i]); prefix_max[0] unused.
    prefix_max: Vec<u8>,
    started: bool,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: u8) -> Self {
        let n = usize::from(n);
        SetPartitions {
            rgs: vec![0; n],
            prefix_max: vec![0; n],
            started: false,
            done: n == 0,
        }
    }

    pub fn next_rgs(&mut self) -> Option<&[u8]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.rgs);
        }
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.rgs[i] <= self.prefix_max[i] {
                break;
            }
        }
        self.rgs[i] += 1;
        let cap = self.prefix_max[i].max(self.rgs[i]);
        for j in i + 1..n {
            self.rgs[j] = 0;
            self.prefix_max[j] = cap;
        }
        Some(&self.rgs)
    }
}

/// Per-block member masks (bit `i` ⇔ element `i`), blocks in
/// first-appearance order.
pub(crate) fn block_masks(rgs: &[u8], out: &mut Vec<u16>) {
    out.clear();
    for (i, &b) in rgs.iter().enumerate() {
        let b = usize::from(b);
        if b == out.len() {
            out.push(0);
        }
        out[b] |= 1 << i;
    }
}

/// Per-block sizes, blocks in first-appearance order.
pub(crate) fn block_sizes(rgs: &[u8], out: &mut Vec<u8>) {
    out.clear();
    for &b in rgs {
        let b = usize::from(b);
        if b == out.len() {
            out.push(0);
        }
        out[b] += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(n: u8) -> Vec<Vec<u8>> {
        let mut it = SetPartitions::new(n);
        let mut all = Vec::new();
        while let Some(rgs) = it.next_rgs() {
            all.push(rgs.to_vec());
        }
        all
    }

    #[test]
    fn bell_number_counts() {
        let bell = [1usize, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
        for n in 1..=10u8 {
            assert_eq!(collect(n).len(), bell[usize::from(n)], "n={n}");
        }
    }

    #[test]
    fn lexicographic_order_n3() {
        assert_eq!(
            collect(3),
            [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1], [0, 1, 2]]
        );
    }

    #[test]
    fn strings_are_valid_and_distinct() {
        let all = collect(6);
        for rgs in &all {
            assert_eq!(rgs[0], 0);
            let mut max = 0;
            for &v in rgs {
                assert!(v <= max + 1);
                max = max.max(v);
            }
        }
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn block_extraction() {
        let mut masks = Vec::new();
        let mut sizes = Vec::new();
        block_masks(&[0, 1, 0, 2], &mut masks);
        block_sizes(&[0, 1, 0, 2], &mut sizes);
        assert_eq!(masks, [0b0101, 0b0010, 0b1000]);
        assert_eq!(sizes, [2, 1, 1]);
    }

    #[test]
    fn zero_length_yields_nothing() {
        assert!(collect(0).is_empty());
    }
}
