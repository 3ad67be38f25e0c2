//! Exact integer helpers shared by the Diophantine solvers.

/// Floor of the square root of a nonnegative integer, computed without
/// floating point.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    // Newton iteration from an upper bound.
    let mut x = 1u128 << ((128 - n.leading_zeros()).div_ceil(2));
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Returns `Some(r)` with `r*r == n` when `n` is a perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n as u128) as i128;
    (r * r == n).then_some(r)
}

/// Exact division, `None` when `den` does not divide `num`.
pub fn exact_div(num: i128, den: i128) -> Option<i128> {
    if den == 0 || num % den != 0 {
        None
    } else {
        Some(num / den)
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_matches_brute_force() {
        for n in 0u128..5000 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "n={n}");
        }
    }

    #[test]
    fn isqrt_large() {
        let big = (1u128 << 100) + 12345;
        let r = isqrt(big);
        assert!(r * r <= big && (r + 1) * (r + 1) > big);
        assert_eq!(exact_sqrt(1209 * 1209), Some(1209));
        assert_eq!(exact_sqrt(1209 * 1209 + 1), None);
        assert_eq!(exact_sqrt(-4), None);
    }

    #[test]
    fn exact_div_and_gcd() {
        assert_eq!(exact_div(12, 4), Some(3));
        assert_eq!(exact_div(13, 4), None);
        assert_eq!(exact_div(1, 0), None);
        assert_eq!(gcd(-12, 18), 6);
        assert_eq!(gcd(0, 0), 0);
    }
}
