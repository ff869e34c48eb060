//! Fixed inputs shared by the benchmarks.

use lensbordant::Changemaker;

/// `(4s+3, 2s+1, s+1, s, 1, …, 1)` with `s` trailing ones.
pub fn family(s: u64) -> Changemaker {
    let mut v = vec![4 * s + 3, 2 * s + 1, s + 1, s];
    v.extend(std::iter::repeat_n(1, s as usize));
    Changemaker::new(v).expect("family vectors are changemakers")
}

/// Powers of two down to one, padded with a trailing one: `(2ᵏ⁻¹, …, 2, 1, 1)`.
pub fn binary(k: u32) -> Changemaker {
    let mut v: Vec<u64> = (0..k).rev().map(|e| 1u64 << e).collect();
    v.push(1);
    Changemaker::new(v).expect("binary vectors are changemakers")
}
