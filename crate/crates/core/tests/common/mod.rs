//! Shared helpers for the integration suites: a deterministic PRNG, a
//! permutation generator, and an independent rank-correlation oracle.
//!
//! The oracle deliberately avoids the library's code path: ranks come from
//! counting comparisons rather than sorting, and the correlation is
//! computed from raw sums.

/// xorshift64* — deterministic across platforms, seeded per test.
pub struct Rng(pub u64);

impl Rng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0.wrapping_mul(0x2545_f491_4f6c_dd1d)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    pub fn nonneg_vec(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.next_f64()).collect()
    }
}

/// All permutations of `items`, in a deterministic order.
pub fn permutations(items: &[f64]) -> Vec<Vec<f64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Midranks by counting: rank(i) = 1 + #less(i) + (#equal(i) - 1) / 2.
pub fn oracle_ranks(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&v| {
            let less = values.iter().filter(|&&w| w < v).count();
            let equal = values.iter().filter(|&&w| w == v).count();
            1.0 + less as f64 + (equal as f64 - 1.0) / 2.0
        })
        .collect()
}

/// Pearson correlation from raw sums; `None` when a list is constant.
pub fn oracle_pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let sum_x: f64 = xs.iter().sum();
    let sum_y: f64 = ys.iter().sum();
    let sum_xy: f64 = xs.iter().zip(ys).map(|(a, b)| a * b).sum();
    let sum_x2: f64 = xs.iter().map(|a| a * a).sum();
    let sum_y2: f64 = ys.iter().map(|b| b * b).sum();
    let cov = sum_xy - sum_x * sum_y / n;
    let var_x = sum_x2 - sum_x * sum_x / n;
    let var_y = sum_y2 - sum_y * sum_y / n;
    if var_x <= 0.0 || var_y <= 0.0 {
        return None;
    }
    Some(cov / (var_x * var_y).sqrt())
}

/// Rank-then-correlate, the brute-force route for Spearman's rho.
pub fn oracle_spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    oracle_pearson(&oracle_ranks(xs), &oracle_ranks(ys))
}

/// Relative comparison with an absolute floor of the same tolerance.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
