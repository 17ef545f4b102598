//! Scalar-generic integer kernels.
//!
//! Everything here works for any primitive signed integer through
//! `num-traits`, so the same code path can be exercised at `i64` (the width
//! used by the rest of the crate) and at `i128` as an overflow-free reference.
//! All operations are checked: an overflow yields `None`, never a wrapped value.

use num_traits::{Euclid, PrimInt, Signed};
use std::fmt::{Debug, Display};

/// Signed primitive integer usable by the Brill-Noether kernels.
pub trait BnInt: PrimInt + Signed + Euclid + Debug + Display + Send + Sync + 'static {}

impl<T> BnInt for T where T: PrimInt + Signed + Euclid + Debug + Display + Send + Sync + 'static {}

fn lit<T: BnInt>(n: u8) -> T {
    T::from(n).expect("small literal fits every signed primitive")
}

/// `g - (r + 1)(g - d + r)`, with every intermediate step checked.
pub fn brill_noether_number<T: BnInt>(g: T, r: T, d: T) -> Option<T> {
    let h = g.checked_sub(&d)?.checked_add(&r)?;
    let prod = r.checked_add(&T::one())?.checked_mul(&h)?;
    g.checked_sub(&prod)
}

/// Floor of the square root of a non-negative integer, by monotone bisection.
pub fn isqrt<T: BnInt>(n: T) -> Option<T> {
    if n < T::zero() {
        return None;
    }
    if n < lit(2) {
        return Some(n);
    }
    // invariant: lo^2 <= n < hi^2
    let mut lo = T::one();
    let mut hi = n;
    while hi - lo > T::one() {
        let mid = lo + (hi - lo) / lit(2);
        match mid.checked_mul(&mid) {
            Some(sq) if sq <= n => lo = mid,
            _ => hi = mid,
        }
    }
    Some(lo)
}

/// Ceiling of the square root of a non-negative integer.
pub fn isqrt_ceil<T: BnInt>(n: T) -> Option<T> {
    let s = isqrt(n)?;
    if s.checked_mul(&s)? == n {
        Some(s)
    } else {
        s.checked_add(&T::one())
    }
}

pub fn is_square<T: BnInt>(n: T) -> bool {
    match isqrt(n) {
        Some(s) => s.checked_mul(&s) == Some(n),
        None => false,
    }
}

/// `floor(a / b)` for `b > 0`.
pub fn floor_div<T: BnInt>(a: T, b: T) -> Option<T> {
    if b <= T::zero() {
        return None;
    }
    Some(a.div_euclid(&b))
}

/// `ceil(a / b)` for `b > 0`.
pub fn ceil_div<T: BnInt>(a: T, b: T) -> Option<T> {
    let q = floor_div(a, b)?;
    if a.rem_euclid(&b) == T::zero() {
        Some(q)
    } else {
        q.checked_add(&T::one())
    }
}

/// Least non-negative representative of `a mod m`, `m > 0`.
pub fn mod_floor<T: BnInt>(a: T, m: T) -> Option<T> {
    if m <= T::zero() {
        return None;
    }
    Some(a.rem_euclid(&m))
}

pub fn gcd<T: BnInt>(a: T, b: T) -> T {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != T::zero() {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm<T: BnInt>(a: T, b: T) -> Option<T> {
    if a == T::zero() || b == T::zero() {
        return Some(T::zero());
    }
    (a.abs() / gcd(a, b)).checked_mul(&b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn isqrt_small_values() {
        let expect = [0, 1, 1, 1, 2, 2, 2, 2, 2, 3, 3];
        for (n, s) in expect.iter().enumerate() {
            assert_eq!(isqrt(n as i64), Some(*s));
        }
        assert_eq!(isqrt(-1i64), None);
        assert_eq!(isqrt(i64::MAX), Some(3_037_000_499));
        assert_eq!(isqrt_ceil(42i64), Some(7));
        assert_eq!(isqrt_ceil(49i64), Some(7));
        assert!(is_square(49i32) && !is_square(42i32));
    }

    #[test]
    fn division_helpers() {
        assert_eq!(ceil_div(24i64, 3), Some(8));
        assert_eq!(ceil_div(25i64, 3), Some(9));
        assert_eq!(ceil_div(-5i64, 3), Some(-1));
        assert_eq!(floor_div(-5i64, 3), Some(-2));
        assert_eq!(mod_floor(-5i64, 3), Some(1));
        assert_eq!(mod_floor(5i64, 0), None);
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(brill_noether_number(i64::MAX, i64::MAX, 0), None);
        assert_eq!(brill_noether_number(i8::MAX, 10, 0), None);
        assert_eq!(brill_noether_number(42i8, 6, 41), Some(-7));
    }

    #[test]
    fn lcm_sequence() {
        let mut acc = 1i64;
        let mut seq = Vec::new();
        for n in 1..=7 {
            acc = lcm(acc, n).unwrap();
            seq.push(acc);
        }
        assert_eq!(seq, vec![1, 2, 6, 12, 60, 60, 420]);
    }

    proptest! {
        #[test]
        fn narrow_and_wide_agree(g in -2_000_000i64..2_000_000, r in -5_000i64..5_000, d in -4_000_000i64..4_000_000) {
            let narrow = brill_noether_number(g, r, d);
            let wide = brill_noether_number(g as i128, r as i128, d as i128);
            prop_assert_eq!(narrow.map(i128::from), wide);
        }

        #[test]
        fn isqrt_brackets(n in 0i64..i64::MAX) {
            let s = isqrt(n).unwrap() as i128;
            let n = n as i128;
            prop_assert!(s * s <= n && n < (s + 1) * (s + 1));
        }
    }
}
