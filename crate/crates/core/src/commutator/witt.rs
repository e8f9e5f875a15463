/// Möbius function.
pub fn mobius(m: u64) -> i8 {
    assert!(m >= 1, "mobius is defined for m >= 1");
    let mut n = m;
    let mut sign = 1i8;
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            n /= q;
            if n.is_multiple_of(q) {
                return 0;
            }
            sign = -sign;
        }
        q += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of basic commutators of weight `n` on `d` letters,
/// `(1/n) Σ_{m | n} μ(m) d^{n/m}`.
///
/// Panics if `d^n` does not fit in an `i128`.
pub fn witt_chi(d: u64, n: u32) -> u128 {
    assert!(n >= 1, "weights start at 1");
    let total: i128 = (1..=n)
        .filter(|m| n.is_multiple_of(*m))
        .map(|m| {
            let power = (d as i128)
                .checked_pow(n / m)
                .expect("Witt number overflows i128");
            mobius(m as u64) as i128 * power
        })
        .sum();
    assert_eq!(
        total % n as i128,
        0,
        "Witt sum must be divisible by the weight"
    );
    (total / n as i128) as u128
}

/// `χ_n(d)` as a `u64`, for bound arithmetic.
pub fn witt(d: u64, n: u32) -> u64 {
    u64::try_from(witt_chi(d, n)).expect("Witt number overflows u64")
}
