//! Chunk evaluation engines for the exhaustive sweep.
//!
//! Every engine answers the same question for each parameter vector `v`:
//! does at least one Lagrangian's functional group evaluate to zero at `v`
//! (the vector is covered), or does none (the vector is an exception)?
//! The exhaustive walk visits vectors in modular Gray order, so advancing
//! to the next vector changes a single coordinate by `+1 mod p` and every
//! row's accumulated dot product can be updated with one column addition.
//!
//! Three evaluation strategies share that walk:
//!
//! * **Packed mod 2** — each functional row is one bit lane of a `u128`;
//!   a Gray step is a single XOR, and "some row vanishes" is a mask test.
//! * **Packed mod 3** — rows live in two bit planes (`lo` = value 1,
//!   `hi` = value 2) and a Gray step is a handful of bitwise ops that add
//!   the column to all lanes simultaneously, mod 3.
//! * **Portable** — one `u64` accumulator per row with conditional
//!   subtraction; works for any modulus and any row grouping.
//!
//! The packed paths apply only when every Lagrangian contributes exactly
//! one functional row (rank-3 Lagrangians) and at most 128 rows exist in
//! total; otherwise the portable path runs. All paths visit vectors in the
//! identical order and therefore produce identical exception streams and
//! chunk checksums, which the tests check against each other and against
//! direct per-vector evaluation.

use std::sync::atomic::{AtomicBool, Ordering};

use super::gray::GrayWalker;

/// How often the inner loop polls the cancellation flag, as a step mask.
/// Every ~4M steps costs nothing measurable but keeps Ctrl-C latency well
/// under a second at typical step rates.
const CANCEL_CHECK_MASK: u128 = (1 << 22) - 1;

/// Engine preference. `Auto` picks the packed path when the functional
/// shape allows it; `Portable` forces the scalar path. The two produce
/// bit-identical results — `Portable` exists so tests and audits can
/// cross-check the packed arithmetic against plain integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnginePreference {
    #[default]
    Auto,
    Portable,
}

/// Mod-3 bit-sliced addition of 128 lanes at once.
///
/// A lane's value is encoded across two planes: 0 = (0,0), 1 = (1,0),
/// 2 = (0,1). The formulas below are the truth table of addition mod 3 in
/// that encoding, written in disjunctive form; `debug_assert`s and an
/// exhaustive unit test pin them to scalar arithmetic.
#[inline(always)]
fn add3(a: u128, b: u128, c: u128, d: u128) -> (u128, u128) {
    let lo = (a & !c & !d) | (!a & !b & c) | (b & d);
    let hi = (b & !c & !d) | (!a & !b & d) | (a & c);
    (lo, hi)
}

enum Kind {
    /// Some Lagrangian contributes no functional rows (its rank is below
    /// three), so the triple form vanishes on it identically and no
    /// parameter vector can be an exception. No walk is needed.
    TriviallyVanishing,
    Packed2 {
        /// `cols[c]` holds row `r`'s coefficient at coordinate `c` in bit `r`.
        cols: Vec<u128>,
        mask: u128,
    },
    Packed3 {
        cols_lo: Vec<u128>,
        cols_hi: Vec<u128>,
        mask: u128,
    },
    Portable {
        /// Column-major coefficients: `cols[c * rows + r]`.
        cols: Vec<u64>,
        rows: usize,
        /// Half-open row ranges, one per Lagrangian.
        groups: Vec<(usize, usize)>,
    },
}

/// A compiled functional set, ready to run sweep chunks.
pub(super) struct EngineData {
    p: u64,
    m: usize,
    kind: Kind,
}

impl EngineData {
    /// Compiles per-Lagrangian functional rows into an engine.
    ///
    /// `groups[l]` holds the functional rows of Lagrangian `l`; each row has
    /// one coefficient in `[0, p)` per parameter coordinate.
    pub(super) fn from_groups(
        p: u64,
        m: usize,
        groups: &[Vec<Vec<u64>>],
        preference: EnginePreference,
    ) -> Self {
        debug_assert!(groups
            .iter()
            .flatten()
            .all(|row| row.len() == m && row.iter().all(|&x| x < p)));
        if groups.iter().any(|rows| rows.is_empty()) {
            return EngineData { p, m, kind: Kind::TriviallyVanishing };
        }
        let total_rows: usize = groups.iter().map(Vec::len).sum();
        let single_rowed = groups.iter().all(|rows| rows.len() == 1);
        let packable =
            preference == EnginePreference::Auto && single_rowed && total_rows <= 128;
        if packable && p == 2 {
            let mut cols = vec![0u128; m];
            for (r, rows) in groups.iter().enumerate() {
                for (c, &value) in rows[0].iter().enumerate() {
                    if value == 1 {
                        cols[c] |= 1 << r;
                    }
                }
            }
            let mask = mask_for(total_rows);
            return EngineData { p, m, kind: Kind::Packed2 { cols, mask } };
        }
        if packable && p == 3 {
            let mut cols_lo = vec![0u128; m];
            let mut cols_hi = vec![0u128; m];
            for (r, rows) in groups.iter().enumerate() {
                for (c, &value) in rows[0].iter().enumerate() {
                    match value {
                        1 => cols_lo[c] |= 1 << r,
                        2 => cols_hi[c] |= 1 << r,
                        _ => {}
                    }
                }
            }
            let mask = mask_for(total_rows);
            return EngineData { p, m, kind: Kind::Packed3 { cols_lo, cols_hi, mask } };
        }
        // Column-major so a Gray step touches one contiguous slice.
        let mut cols = vec![0u64; total_rows * m];
        let mut row_ranges = Vec::with_capacity(groups.len());
        let mut next_row = 0;
        for rows in groups {
            let start = next_row;
            for row in rows {
                for (c, &value) in row.iter().enumerate() {
                    cols[c * total_rows + next_row] = value;
                }
                next_row += 1;
            }
            row_ranges.push((start, next_row));
        }
        EngineData {
            p,
            m,
            kind: Kind::Portable { cols, rows: total_rows, groups: row_ranges },
        }
    }

    /// Runs one chunk: all vectors extending `prefix`, in Gray order over
    /// the remaining coordinates (last coordinate fastest). Calls
    /// `on_exception` with the full digit vector of every exception, in
    /// visit order. Returns `(visited, exceptions)`, or `None` if `cancel`
    /// was observed set (the partial chunk is discarded).
    pub(super) fn run_chunk(
        &self,
        prefix: &[u64],
        cancel: &AtomicBool,
        on_exception: &mut dyn FnMut(&[u64]),
    ) -> Option<(u128, u128)> {
        debug_assert!(prefix.len() <= self.m);
        debug_assert!(prefix.iter().all(|&d| d < self.p));
        let width = (self.m - prefix.len()) as u32;
        match &self.kind {
            Kind::TriviallyVanishing => Some((u128::from(self.p).pow(width), 0)),
            Kind::Packed2 { cols, mask } => {
                let mut acc = 0u128;
                for (c, &digit) in prefix.iter().enumerate() {
                    if digit == 1 {
                        acc ^= cols[c];
                    }
                }
                let state = Packed2State { acc, cols, mask: *mask };
                self.walk(state, prefix, cancel, on_exception)
            }
            Kind::Packed3 { cols_lo, cols_hi, mask } => {
                let (mut lo, mut hi) = (0u128, 0u128);
                for (c, &digit) in prefix.iter().enumerate() {
                    for _ in 0..digit {
                        (lo, hi) = add3(lo, hi, cols_lo[c], cols_hi[c]);
                    }
                }
                let state = Packed3State { lo, hi, cols_lo, cols_hi, mask: *mask };
                self.walk(state, prefix, cancel, on_exception)
            }
            Kind::Portable { cols, rows, groups } => {
                let mut acc = vec![0u64; *rows];
                for (c, &digit) in prefix.iter().enumerate() {
                    let col = &cols[c * rows..(c + 1) * rows];
                    for (a, &w) in acc.iter_mut().zip(col) {
                        *a = (*a + w * digit) % self.p;
                    }
                }
                let state = PortableState {
                    acc,
                    cols,
                    rows: *rows,
                    p: self.p,
                    groups,
                    hint: 0,
                };
                self.walk(state, prefix, cancel, on_exception)
            }
        }
    }

    fn walk<S: StepState>(
        &self,
        mut state: S,
        prefix: &[u64],
        cancel: &AtomicBool,
        on_exception: &mut dyn FnMut(&[u64]),
    ) -> Option<(u128, u128)> {
        let width = self.m - prefix.len();
        let mut walker = GrayWalker::new(self.p, width);
        let mut full = vec![0u64; self.m];
        full[..prefix.len()].copy_from_slice(prefix);
        let mut visited: u128 = 0;
        let mut exceptions: u128 = 0;
        loop {
            visited += 1;
            if state.is_exception() {
                exceptions += 1;
                // Gray digit 0 is the fastest position, i.e. the last
                // coordinate; reconstruct the full vector for the caller.
                for (d, &g) in walker.digits().iter().enumerate() {
                    full[self.m - 1 - d] = g;
                }
                on_exception(&full);
            }
            if visited & CANCEL_CHECK_MASK == 0 && cancel.load(Ordering::Relaxed) {
                return None;
            }
            match walker.step() {
                Some(d) => state.bump(self.m - 1 - d),
                None => return Some((visited, exceptions)),
            }
        }
    }

    /// Evaluates a single full-length vector directly (no Gray walk).
    /// Used by sampling mode and as an independent oracle for the walk.
    pub(super) fn is_exception_at(&self, v: &[u64]) -> bool {
        debug_assert_eq!(v.len(), self.m);
        debug_assert!(v.iter().all(|&d| d < self.p));
        match &self.kind {
            Kind::TriviallyVanishing => false,
            Kind::Packed2 { cols, mask } => {
                let mut acc = 0u128;
                for (c, &digit) in v.iter().enumerate() {
                    if digit == 1 {
                        acc ^= cols[c];
                    }
                }
                acc & mask == *mask
            }
            Kind::Packed3 { cols_lo, cols_hi, mask } => {
                let (mut lo, mut hi) = (0u128, 0u128);
                for (c, &digit) in v.iter().enumerate() {
                    for _ in 0..digit {
                        (lo, hi) = add3(lo, hi, cols_lo[c], cols_hi[c]);
                    }
                }
                (lo | hi) & mask == *mask
            }
            Kind::Portable { cols, rows, groups } => {
                groups.iter().all(|&(start, end)| {
                    (start..end).any(|r| {
                        let dot: u64 = v
                            .iter()
                            .enumerate()
                            .map(|(c, &digit)| cols[c * rows + r] * digit % self.p)
                            .sum::<u64>()
                            % self.p;
                        dot != 0
                    })
                })
            }
        }
    }

    /// True when the packed bit-sliced path will run under `Auto`.
    #[cfg(test)]
    pub(super) fn is_packed(&self) -> bool {
        matches!(self.kind, Kind::Packed2 { .. } | Kind::Packed3 { .. })
    }
}

fn mask_for(rows: usize) -> u128 {
    debug_assert!(0 < rows && rows <= 128);
    if rows == 128 {
        u128::MAX
    } else {
        (1u128 << rows) - 1
    }
}

/// One engine's incremental state during a Gray walk.
trait StepState {
    /// Does no Lagrangian group vanish at the current vector?
    fn is_exception(&mut self) -> bool;
    /// The walk changed `coordinate` by `+1 mod p`; fold in that column.
    fn bump(&mut self, coordinate: usize);
}

struct Packed2State<'a> {
    acc: u128,
    cols: &'a [u128],
    mask: u128,
}

impl StepState for Packed2State<'_> {
    #[inline(always)]
    fn is_exception(&mut self) -> bool {
        self.acc & self.mask == self.mask
    }

    #[inline(always)]
    fn bump(&mut self, coordinate: usize) {
        self.acc ^= self.cols[coordinate];
    }
}

struct Packed3State<'a> {
    lo: u128,
    hi: u128,
    cols_lo: &'a [u128],
    cols_hi: &'a [u128],
    mask: u128,
}

impl StepState for Packed3State<'_> {
    #[inline(always)]
    fn is_exception(&mut self) -> bool {
        (self.lo | self.hi) & self.mask == self.mask
    }

    #[inline(always)]
    fn bump(&mut self, coordinate: usize) {
        (self.lo, self.hi) = add3(
            self.lo,
            self.hi,
            self.cols_lo[coordinate],
            self.cols_hi[coordinate],
        );
    }
}

struct PortableState<'a> {
    acc: Vec<u64>,
    cols: &'a [u64],
    rows: usize,
    p: u64,
    groups: &'a [(usize, usize)],
    /// Index of the group that vanished most recently. Consecutive Gray
    /// vectors differ in one digit, so the same Lagrangian usually covers
    /// both; checking it first makes the common case one group scan. The
    /// hint only reorders the search for a vanishing group — whether one
    /// exists is unchanged, so results are order-independent.
    hint: usize,
}

impl PortableState<'_> {
    #[inline(always)]
    fn group_vanishes(&self, group: usize) -> bool {
        let (start, end) = self.groups[group];
        self.acc[start..end].iter().all(|&a| a == 0)
    }
}

impl StepState for PortableState<'_> {
    #[inline(always)]
    fn is_exception(&mut self) -> bool {
        if self.group_vanishes(self.hint) {
            return false;
        }
        for g in 0..self.groups.len() {
            if g != self.hint && self.group_vanishes(g) {
                self.hint = g;
                return false;
            }
        }
        true
    }

    #[inline(always)]
    fn bump(&mut self, coordinate: usize) {
        let col = &self.cols[coordinate * self.rows..(coordinate + 1) * self.rows];
        for (a, &w) in self.acc.iter_mut().zip(col) {
            let sum = *a + w;
            *a = if sum >= self.p { sum - self.p } else { sum };
        }
    }
}
