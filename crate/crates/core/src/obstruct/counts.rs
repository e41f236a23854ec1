/// `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial fits in u64")
}

/// Number of trivial degree-`d` integrals `H^i * p^tau` (`|tau| = d - 2i`,
/// `tau` over the `D - 2` Noether momenta).
pub fn trivial_count(dim: usize, d: usize) -> u64 {
    assert!(dim >= 3, "trivial_count needs D >= 3");
    let (dm, dd) = (dim as u64, d as u64);
    (0..=dd / 2)
        .map(|i| binomial(dd - 2 * i + dm - 3, dm - 3))
        .sum()
}

/// Equations of `S_d`: momentum monomials of degree `d + 1`.
pub fn num_pde_equations(dim: usize, d: usize) -> u64 {
    binomial((d + dim) as u64, dim as u64 - 1)
}

/// Unknown functions of `S_d`: momentum monomials of degree `d`.
pub fn num_ansatz(dim: usize, d: usize) -> u64 {
    binomial((d + dim - 1) as u64, dim as u64 - 1)
}

/// Rows `m_{d,k}` of the prolonged system.
pub fn num_rows(dim: usize, d: usize, k: usize) -> u64 {
    num_pde_equations(dim, d) * binomial(k as u64 + 2, 2)
}

/// Columns `n_{d,k}`: jets with `|sigma| <= k + 1`.
pub fn num_cols(dim: usize, d: usize, k: usize) -> u64 {
    num_ansatz(dim, d) * binomial(k as u64 + 3, 2)
}
