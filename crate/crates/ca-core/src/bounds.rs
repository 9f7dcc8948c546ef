//! Known covering array numbers and lower bounds for everything else.

/// Whether a bound is a proven covering array number or only a floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Exact,
    Lower,
}

/// Row-count bound for CA(N; t, k, v) existence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bound {
    pub kind: BoundKind,
    pub value: usize,
}

impl Bound {
    fn exact(value: usize) -> Bound {
        Bound {
            kind: BoundKind::Exact,
            value,
        }
    }

    fn lower(value: usize) -> Bound {
        Bound {
            kind: BoundKind::Lower,
            value,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == BoundKind::Exact
    }
}

/// Covering array numbers established by exhaustive search rather than a
/// closed formula, keyed by (t, k, v).
const KNOWN_NUMBERS: &[(usize, usize, usize, usize)] = &[
    (2, 5, 3, 11),
    (2, 6, 3, 12),
    (2, 8, 3, 13),
    (3, 6, 3, 33),
    (3, 12, 2, 15),
    (3, 13, 2, 16),
    (4, 7, 2, 24),
    (4, 8, 2, 24),
    (4, 13, 2, 32),
    (5, 8, 2, 52),
    (5, 9, 2, 54),
    (5, 14, 2, 64),
    (6, 15, 2, 128),
    (7, 16, 2, 256),
];

fn pow(base: usize, exp: usize) -> usize {
    base.checked_pow(exp as u32).expect("bound overflows usize")
}

fn is_prime_power(v: usize) -> bool {
    if v < 2 {
        return false;
    }
    let mut n = v;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            return n == 1;
        }
        p += 1;
    }
    true // v itself is prime
}

/// C(n, k) saturating at usize::MAX; enough for the binomial existence
/// condition below.
fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// CAN(2, k, 2): the least N with C(N-1, ceil(N/2)) >= k.
fn can_strength2_binary(k: usize) -> usize {
    let mut n = 2;
    loop {
        if binomial(n - 1, n.div_ceil(2)) >= k {
            return n;
        }
        n += 1;
    }
}

/// The covering array number CAN(t, k, v) when a known formula or recorded
/// value applies, otherwise a lower bound. The lower bound is
/// max(v^t, v * CAN(t-1, k-1, v)), the second term coming from the block
/// decomposition: each of the v blocks of a strength-t array is itself a
/// covering array one strength below.
pub fn can_bound(strength: usize, columns: usize, order: usize) -> Bound {
    let t = strength;
    let k = columns;
    let v = order;
    assert!(
        t >= 1 && k >= t && v >= 2,
        "can_bound requires t >= 1, k >= t, v >= 2"
    );

    if t == 1 {
        return Bound::exact(v);
    }
    if k == t {
        return Bound::exact(pow(v, t));
    }
    if v == 2 && k == t + 1 {
        return Bound::exact(pow(2, t));
    }
    if v == 2 && k == t + 2 {
        return Bound::exact(4 * pow(2, t) / 3);
    }
    if v == 2 && t == 2 {
        return Bound::exact(can_strength2_binary(k));
    }
    // CAN(t, k, v) = v^t for t < k <= v+1 when v is a prime power > t,
    // and for k = t+1 when v is a prime power <= t.
    if is_prime_power(v) && v > t && k <= v + 1 {
        return Bound::exact(pow(v, t));
    }
    if is_prime_power(v) && v <= t && k == t + 1 {
        return Bound::exact(pow(v, t));
    }
    // CAN(3, k, v) = v^3 for k <= v+2 when v is a power of two.
    if t == 3 && v.is_power_of_two() && k <= v + 2 {
        return Bound::exact(pow(v, 3));
    }
    if let Some(&(_, _, _, n)) = KNOWN_NUMBERS
        .iter()
        .find(|&&(kt, kk, kv, _)| kt == t && kk == k && kv == v)
    {
        return Bound::exact(n);
    }
    let rec = can_bound(t - 1, k - 1, v).value;
    Bound::lower(pow(v, t).max(v * rec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_cases() {
        assert_eq!(can_bound(1, 7, 4), Bound::exact(4));
        assert_eq!(can_bound(2, 2, 5), Bound::exact(25));
        assert_eq!(can_bound(3, 4, 2), Bound::exact(8));
        assert_eq!(can_bound(3, 5, 2), Bound::exact(10));
        assert_eq!(can_bound(2, 10, 2), Bound::exact(6));
        assert_eq!(can_bound(2, 4, 3), Bound::exact(9));
    }

    #[test]
    fn strength2_binary_series() {
        // least N with C(N-1, ceil(N/2)) >= k
        let want = [
            (2, 4),
            (3, 4),
            (4, 5),
            (5, 6),
            (10, 6),
            (11, 7),
            (15, 7),
            (16, 8),
            (35, 8),
            (36, 9),
        ];
        for (k, n) in want {
            assert_eq!(can_bound(2, k, 2), Bound::exact(n), "k={k}");
        }
    }

    #[test]
    fn recorded_numbers() {
        assert_eq!(can_bound(2, 5, 3), Bound::exact(11));
        assert_eq!(can_bound(2, 6, 3), Bound::exact(12));
        assert_eq!(can_bound(5, 9, 2), Bound::exact(54));
    }

    #[test]
    fn fallback_is_lower_bound() {
        // no formula or recorded number for CAN(2, 7, 3)
        let b = can_bound(2, 7, 3);
        assert_eq!(b.kind, BoundKind::Lower);
        assert!(b.value >= 9);
    }

    #[test]
    fn prime_power_detection() {
        for v in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
            assert!(is_prime_power(v), "{v}");
        }
        for v in [6, 10, 12, 14, 15, 18, 20] {
            assert!(!is_prime_power(v), "{v}");
        }
    }
}
