//! Exact closed-form counts of absorbing states.
//!
//! Everything here is arbitrary-precision integer (or exact rational)
//! arithmetic; no floating point.
//!
//! # Labeled counts
//!
//! An absorbing state on `n` labeled agents is a set partition into
//! factions together with a non-empty core per faction, so the count is
//!
//! > a(n) = Σ over set partitions π of Π over factions F of (2^|F| − 1).
//!
//! [`labeled_by_partition_sum`] evaluates that sum literally. A faster
//! recurrence follows from a counting argument: fix agent 0 and condition
//! on its faction. Choosing the k−1 companions (`C(n−1, k−1)` ways) and
//! the faction's non-empty core (`2^k − 1` ways) leaves an arbitrary
//! structure on the remaining n−k agents, giving
//!
//! > a(n) = Σ_{k=1}^{n} C(n−1, k−1) · (2^k − 1) · a(n−k),  a(0) = 1,
//!
//! implemented by [`labeled_by_recurrence`]. Equivalently, since a
//! single faction of size k has 2^k − 1 possible cores, the exponential
//! generating function of one faction is Σ_k (2^k − 1) x^k / k! =
//! e^{2x} − e^x = e^x (e^x − 1), and the exponential formula packages the
//! partition sum as Σ a(n) x^n / n! = exp(e^x (e^x − 1)).
//! [`labeled_by_egf_series`] expands that composition with exact rational
//! coefficients as an independent third route.
//!
//! # Unlabeled counts
//!
//! Up to relabeling, an absorbing state is the multiset of its
//! (faction size, core size) pairs. A faction of size k admits core
//! sizes 1..k, so each part of size k comes in k flavors, and the
//! generating function for the number of classes is MacMahon's plane
//! partition product
//!
//! > Π_{k ≥ 1} (1 − x^k)^{−k}.
//!
//! [`plane_partitions_by_series`] expands the product directly.
//! [`plane_partitions`] instead uses the recurrence obtained by
//! logarithmic differentiation: with P(x) the product above,
//! x·P'(x)/P(x) = Σ_k k²·x^k/(1−x^k) = Σ_m σ₂(m)·x^m where
//! σ₂(m) = Σ_{d|m} d², so comparing coefficients in x·P' = P · Σ σ₂ x^m
//! gives
//!
//! > n · pp(n) = Σ_{m=1}^{n} σ₂(m) · pp(n−m),  pp(0) = 1.
//!
//! [`unlabeled_by_typed_partitions`] counts the (k, m) multisets by
//! direct enumeration as a third route.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::partitions::{block_sizes, SetPartitions};

/// Bound for explicit set-partition iteration (Bell(14) ≈ 1.9·10⁸).
pub const PARTITION_SUM_MAX_N: u8 = 14;

/// Bound for the labeled recurrence.
pub const RECURRENCE_MAX_N: usize = 256;

/// Bound for the σ₂ plane-partition recurrence.
pub const PLANE_PARTITION_MAX_N: usize = 10_000;

/// Bound for the series-product plane-partition expansion.
pub const SERIES_MAX_N: usize = 2_000;

/// Bound for direct typed-partition enumeration.
pub const TYPED_MAX_N: u8 = 30;

/// Labeled count by explicit iteration over set partitions.
pub fn labeled_by_partition_sum(n: u8) -> BigUint {
    assert!(n <= PARTITION_SUM_MAX_N, "partition sum bounded at n=14");
    if n == 0 {
        return BigUint::one();
    }
    let mut total = 0u64;
    let mut sizes = Vec::new();
    let mut parts = SetPartitions::new(n);
    while let Some(rgs) = parts.next_rgs() {
        block_sizes(rgs, &mut sizes);
        let product: u64 = sizes.iter().map(|&s| (1u64 << s) - 1).product();
        total += product;
    }
    BigUint::from(total)
}

/// Per-partition contributions to the partition sum, in set-partition
/// iteration order; their sum is `labeled_by_partition_sum(n)`.
pub fn labeled_partition_terms(n: u8) -> Vec<u64> {
    assert!((1..=12).contains(&n), "per-partition terms bounded at n=12");
    let mut terms = Vec::new();
    let mut sizes = Vec::new();
    let mut parts = SetPartitions::new(n);
    while let Some(rgs) = parts.next_rgs() {
        block_sizes(rgs, &mut sizes);
        terms.push(sizes.iter().map(|&s| (1u64 << s) - 1).product());
    }
    terms
}

/// Labeled counts a(0..=n_max) by the companion-choice recurrence.
pub fn labeled_sequence(n_max: usize) -> Vec<BigUint> {
    assert!(n_max <= RECURRENCE_MAX_N, "recurrence bounded at n=256");
    let mut a: Vec<BigUint> = Vec::with_capacity(n_max + 1);
    a.push(BigUint::one());
    // binom[j] = C(n-1, j) for the current n, updated in place.
    let mut binom: Vec<BigUint> = vec![BigUint::one()];
    for n in 1..=n_max {
        let mut acc = BigUint::zero();
        for k in 1..=n {
            let core_choices = (BigUint::one() << k) - 1u32;
            acc += &binom[k - 1] * core_choices * &a[n - k];
        }
        a.push(acc);
        // Extend Pascal's triangle: row n-1 -> row n.
        binom.push(BigUint::one());
        for j in (1..n).rev() {
            let prev = binom[j - 1].clone();
            binom[j] += prev;
        }
    }
    a
}

/// Labeled count a(n) by the companion-choice recurrence.
pub fn labeled_by_recurrence(n: usize) -> BigUint {
    labeled_sequence(n).pop().unwrap()
}

/// Labeled counts a(0..=n_max) by expanding exp(e^x(e^x−1)) with exact
/// rational coefficients and scaling by n!.
///
/// With f(x) = e^{2x} − e^x (coefficients f_j = (2^j − 1)/j!) and
/// g = exp(f), differentiating g' = f'·g gives the coefficient
/// recurrence g_m = (1/m) Σ_{j=1}^{m} j·f_j·g_{m−j}.
pub fn labeled_by_egf_series(n_max: usize) -> Vec<BigUint> {
    let f: Vec<BigRational> = (0..=n_max)
        .map(|j| {
            if j == 0 {
                BigRational::zero()
            } else {
                let numer = BigInt::from((BigUint::one() << j) - 1u32);
                BigRational::new(numer, factorial(j))
            }
        })
        .collect();
    let mut g: Vec<BigRational> = Vec::with_capacity(n_max + 1);
    g.push(BigRational::one());
    for m in 1..=n_max {
        let mut acc = BigRational::zero();
        for j in 1..=m {
            acc += BigRational::from(BigInt::from(j)) * &f[j] * &g[m - j];
        }
        g.push(acc / BigRational::from(BigInt::from(m)));
    }
    g.iter()
        .enumerate()
        .map(|(m, gm)| {
            let scaled = gm * BigRational::from(factorial(m));
            assert!(scaled.is_integer(), "EGF coefficient {m} not integral");
            scaled
                .to_integer()
                .to_biguint()
                .expect("EGF coefficient is non-negative")
        })
        .collect()
}

fn factorial(n: usize) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    f
}

/// Sum of squared divisors σ₂(m) for m in 0..=n_max (index 0 unused).
fn sigma2_sieve(n_max: usize) -> Vec<u64> {
    let mut sigma2 = vec![0u64; n_max + 1];
    for d in 1..=n_max {
        let dd = (d * d) as u64;
        for multiple in (d..=n_max).step_by(d) {
            sigma2[multiple] += dd;
        }
    }
    sigma2
}

/// Plane-partition counts pp(0..=n_max) by the σ₂ recurrence.
pub fn plane_partitions(n_max: usize) -> Vec<BigUint> {
    assert!(
        n_max <= PLANE_PARTITION_MAX_N,
        "plane-partition recurrence bounded at n=10000"
    );
    let sigma2 = sigma2_sieve(n_max);
    let mut pp: Vec<BigUint> = Vec::with_capacity(n_max + 1);
    pp.push(BigUint::one());
    for n in 1..=n_max {
        let mut acc = BigUint::zero();
        for m in 1..=n {
            acc += &pp[n - m] * sigma2[m];
        }
        let (q, r) = div_rem_u64(acc, n as u64);
        assert!(r.is_zero(), "σ₂ recurrence sum not divisible at n={n}");
        pp.push(q);
    }
    pp
}

fn div_rem_u64(value: BigUint, divisor: u64) -> (BigUint, BigUint) {
    let d = BigUint::from(divisor);
    (&value / &d, value % d)
}

/// Plane-partition counts pp(0..=n_max) by expanding
/// Π_{k=1}^{n_max} (1 − x^k)^{−k} truncated at degree n_max.
///
/// Each factor expands by the binomial series (1 − x^k)^{−k} =
/// Σ_{j ≥ 0} C(k+j−1, j) x^{kj}; factors with k > n_max contribute
/// nothing below the truncation degree.
pub fn plane_partitions_by_series(n_max: usize) -> Vec<BigUint> {
    assert!(n_max <= SERIES_MAX_N, "series product bounded at n=2000");
    let mut coeffs: Vec<BigUint> = vec![BigUint::zero(); n_max + 1];
    coeffs[0] = BigUint::one();
    for k in 1..=n_max {
        // binom[j] = C(k+j-1, j), built by the ratio step
        // C(k+j-1, j) = C(k+j-2, j-1) * (k+j-1) / j (exact division).
        let mut binom: Vec<BigUint> = Vec::with_capacity(n_max / k + 1);
        binom.push(BigUint::one());
        for j in 1..=n_max / k {
            let next = (&binom[j - 1] * ((k + j - 1) as u64)) / (j as u64);
            binom.push(next);
        }
        // Descending update keeps the still-unread lower coefficients at
        // their pre-factor values.
        for m in (k..=n_max).rev() {
            let mut acc = BigUint::zero();
            for j in 1..=m / k {
                acc += &binom[j] * &coeffs[m - k * j];
            }
            coeffs[m] += acc;
        }
    }
    coeffs
}

/// Unlabeled count by direct enumeration of the (k, m) pair multisets
/// with 1 ≤ m ≤ k and faction sizes summing to n.
pub fn unlabeled_by_typed_partitions(n: u8) -> BigUint {
    assert!(
        n <= TYPED_MAX_N,
        "typed-partition enumeration bounded at n=30"
    );
    if n == 0 {
        return BigUint::one();
    }
    // One entry per part type (k, m), k descending: size k appears in k
    // core flavors, so k entries of value k.
    let mut types: Vec<u8> = Vec::new();
    for k in (1..=n).rev() {
        for _ in 0..k {
            types.push(k);
        }
    }
    // first_type_at[r] = first index whose part size fits in r.
    let mut first_type_at = vec![types.len(); usize::from(n) + 1];
    for (r, slot) in first_type_at.iter_mut().enumerate().skip(1) {
        *slot = types
            .iter()
            .position(|&k| usize::from(k) <= r)
            .unwrap_or(types.len());
    }

    fn rec(types: &[u8], first_type_at: &[usize], idx: usize, remaining: u8) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let i = idx.max(first_type_at[usize::from(remaining)]);
        if i >= types.len() {
            return 0;
        }
        let k = types[i];
        let mut total = 0u64;
        for c in 0..=remaining / k {
            total += rec(types, first_type_at, i + 1, remaining - c * k);
        }
        total
    }
    BigUint::from(rec(&types, &first_type_at, 0, n))
}

/// Labeled and unlabeled counts for 0..=n_max, computed by the two
/// recurrences.
#[derive(Debug, Clone)]
pub struct CountTable {
    labeled: Vec<BigUint>,
    unlabeled: Vec<BigUint>,
}

impl CountTable {
    pub fn compute(n_max: usize) -> Self {
        CountTable {
            labeled: labeled_sequence(n_max),
            unlabeled: plane_partitions(n_max),
        }
    }

    pub fn n_max(&self) -> usize {
        self.labeled.len() - 1
    }

    /// a(0..=n_max): absorbing states on labeled agents.
    pub fn labeled(&self) -> &[BigUint] {
        &self.labeled
    }

    /// pp(0..=n_max): absorbing states up to relabeling.
    pub fn unlabeled(&self) -> &[BigUint] {
        &self.unlabeled
    }
}
