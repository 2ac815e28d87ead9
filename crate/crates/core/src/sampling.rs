//! Seeded randomness. Every random draw in the crate comes from a stream
//! addressed by `(seed, key)`, so results do not depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fmath;

pub(crate) fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn mix(a: u64, b: u64) -> u64 {
    splitmix(a ^ splitmix(b).rotate_left(17))
}

/// Uniform in [0, 1) from a hash value.
pub(crate) fn unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub(crate) fn stream(seed: u64, key: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(key);
    rng
}

/// Radical inverse of `i` in `base`.
pub(crate) fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Halton point `i` (skipping the origin) in the unit cube of dimension `dim`.
pub(crate) fn halton_point(i: u64, dim: usize) -> [f64; 3] {
    const BASES: [u64; 3] = [2, 3, 5];
    let mut out = [0.0; 3];
    for (a, o) in out.iter_mut().enumerate().take(dim) {
        *o = halton(i + 1, BASES[a]);
    }
    out
}

/// Flat Dirichlet weights written into `out`.
pub(crate) fn dirichlet(rng: &mut impl Rng, out: &mut [f64]) {
    let mut total = 0.0;
    for w in out.iter_mut() {
        let u: f64 = rng.gen();
        *w = -fmath::ln(1.0 - u);
        total += *w;
    }
    if total <= 0.0 {
        let n = out.len() as f64;
        out.iter_mut().for_each(|w| *w = 1.0 / n);
    } else {
        out.iter_mut().for_each(|w| *w /= total);
    }
}

/// Seeded permutation of `0..n`.
pub(crate) fn permutation(rng: &mut impl Rng, n: usize) -> alloc::vec::Vec<u32> {
    let mut v: alloc::vec::Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        v.swap(i, j);
    }
    v
}
