//! Seeded permutation generation, bit-exact on every platform.
//!
//! The generator is xorshift64* with state seeded by one SplitMix64 step:
//!
//! ```text
//! seed step:  z = seed + 0x9E3779B97F4A7C15
//!             z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!             z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!             state = z ^ (z >> 31)        (0 is replaced by 0x9E3779B97F4A7C15)
//! next:       x ^= x >> 12; x ^= x << 25; x ^= x >> 27
//!             return x * 0x2545F4914F6CDD1D
//! ```
//!
//! All arithmetic wraps modulo 2^64. Bounded integers in `[0, s)` use
//! Lemire's multiply-and-reject method on the next output. The shuffle is
//! Fisher–Yates from the last position down: for `i = n-1, …, 1`, swap
//! positions `i` and `bounded(i+1)`.

use mpqs_core::Key;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// xorshift64* seeded through SplitMix64.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(GOLDEN);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Rng {
            state: if z == 0 { GOLDEN } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, s)`; `s` must be positive.
    pub fn below(&mut self, s: u64) -> u64 {
        assert!(s > 0, "empty range");
        let mut m = self.next_u64() as u128 * s as u128;
        if (m as u64) < s {
            let t = s.wrapping_neg() % s;
            while (m as u64) < t {
                m = self.next_u64() as u128 * s as u128;
            }
        }
        (m >> 64) as u64
    }

    pub fn shuffle<T>(&mut self, v: &mut [T]) {
        for i in (1..v.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            v.swap(i, j);
        }
    }
}

/// Uniformly random permutation of `1..=n`.
pub fn gen_permutation(n: usize, seed: u64) -> Vec<Key> {
    assert!(n <= Key::MAX as usize, "n exceeds the key range");
    let mut v: Vec<Key> = (1..=n as Key).collect();
    Rng::new(seed).shuffle(&mut v);
    v
}
