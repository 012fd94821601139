//! Synthetic inputs shared by the benchmarks.

use nafi_core::{normalize, NormalizedToken};

const LETTERS: &[char] = &[
    'ا', 'ب', 'پ', 'ت', 'د', 'ر', 'ز', 'س', 'ش', 'غ', 'ض', 'ک', 'گ', 'ل', 'م', 'ن', 'و', 'ه', 'ی',
];

/// Deterministic xorshift stream; benches need repeatable input, not quality.
pub struct Words {
    state: u64,
}

impl Words {
    pub fn new(seed: u64) -> Self {
        Words { state: seed | 1 }
    }

    fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    pub fn word(&mut self, min_len: usize, max_len: usize) -> String {
        let len = min_len + (self.next_u64() as usize) % (max_len - min_len + 1);
        (0..len)
            .map(|_| LETTERS[(self.next_u64() as usize) % LETTERS.len()])
            .collect()
    }

    pub fn tokens(&mut self, n: usize, min_len: usize, max_len: usize) -> Vec<NormalizedToken> {
        (0..n)
            .map(|_| normalize(&self.word(min_len, max_len)))
            .collect()
    }
}
