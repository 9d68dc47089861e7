//! Modular p-ary Gray counter.
//!
//! Enumerates all `p^w` digit vectors so that each step changes exactly one
//! digit, and always by `+1 mod p`. With Gray digits defined from the plain
//! base-p counter `i` as `g_j = (d_j - d_{j+1}) mod p`, incrementing `i`
//! bumps exactly the digit at the position of `i`'s trailing run of `p-1`s:
//! within the run the differences stay zero, at the run boundary the
//! difference is unchanged mod p, and at the run's end it grows by one.
//! That position is just the carry position of an ordinary odometer, so the
//! walker keeps the plain counter alongside the Gray digits and each step
//! costs amortized O(1).
//!
//! Sweep engines depend on two properties, both tested below: every vector
//! is visited exactly once, and the single `+1 mod p` digit change lets an
//! accumulated dot product be updated with one column addition.

/// Stateful Gray walker over `w` digits mod `p`.
pub struct GrayWalker {
    p: u64,
    odometer: Vec<u64>,
    gray: Vec<u64>,
}

impl GrayWalker {
    /// Starts at the all-zero vector (which counts as the first visit).
    pub fn new(p: u64, width: usize) -> Self {
        debug_assert!(p >= 2);
        GrayWalker {
            p,
            odometer: vec![0; width],
            gray: vec![0; width],
        }
    }

    /// Current Gray digits; index 0 is the fastest-changing position.
    pub fn digits(&self) -> &[u64] {
        &self.gray
    }

    /// Advances to the next vector and returns the digit position that was
    /// incremented (`+1 mod p`), or `None` once all `p^w` vectors have
    /// been visited (the digits then stay at the final vector, which for
    /// this code is `(0, …, 0, p-1)` — one wrap step short of zero).
    pub fn step(&mut self) -> Option<usize> {
        let mut pos = 0;
        loop {
            if pos == self.odometer.len() {
                return None; // full cycle complete
            }
            if self.odometer[pos] + 1 < self.p {
                self.odometer[pos] += 1;
                break;
            }
            self.odometer[pos] = 0;
            pos += 1;
        }
        self.gray[pos] += 1;
        if self.gray[pos] == self.p {
            self.gray[pos] = 0;
        }
        Some(pos)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn visits(p: u64, w: usize) -> Vec<Vec<u64>> {
        let mut walker = GrayWalker::new(p, w);
        let mut out = vec![walker.digits().to_vec()];
        while walker.step().is_some() {
            out.push(walker.digits().to_vec());
        }
        out
    }

    #[test]
    fn covers_every_vector_exactly_once() {
        for (p, w) in [(2u64, 1usize), (2, 6), (3, 4), (5, 3), (7, 2)] {
            let seen = visits(p, w);
            assert_eq!(seen.len(), (p as usize).pow(w as u32));
            let dedup: BTreeSet<_> = seen.iter().cloned().collect();
            assert_eq!(dedup.len(), seen.len(), "p={p} w={w} duplicates");
        }
    }

    #[test]
    fn each_step_changes_one_digit_by_plus_one() {
        for (p, w) in [(2u64, 5usize), (3, 4), (5, 3)] {
            let seen = visits(p, w);
            for pair in seen.windows(2) {
                let diffs: Vec<usize> = (0..w)
                    .filter(|&j| pair[0][j] != pair[1][j])
                    .collect();
                assert_eq!(diffs.len(), 1, "exactly one digit changes");
                let j = diffs[0];
                assert_eq!(
                    (pair[0][j] + 1) % p,
                    pair[1][j],
                    "change is +1 mod {p}"
                );
            }
        }
    }

    #[test]
    fn zero_width_walker_visits_the_empty_vector_once() {
        let mut walker = GrayWalker::new(3, 0);
        assert!(walker.digits().is_empty());
        assert!(walker.step().is_none());
    }

    #[test]
    fn ends_one_wrap_step_short_of_zero() {
        let mut walker = GrayWalker::new(3, 3);
        let mut count = 1u32;
        while walker.step().is_some() {
            count += 1;
        }
        assert_eq!(count, 27);
        // The cycle closes: the final vector is a single +1 (at the top
        // digit) away from the all-zero start.
        assert_eq!(walker.digits(), &[0, 0, 2]);
    }
}
