//! Exhaustive search for triple forms that miss every Lagrangian.
//!
//! A clasper family fixes one linking form and `p^m` candidate triple
//! forms, one per parameter vector. For each vector the question is
//! whether the triple form vanishes on at least one Lagrangian of the
//! form; a vector where *no* Lagrangian works is an **exception** — a
//! manifold whose triple form obstructs bounding beyond what the linking
//! form alone can see. This module decides that question for one vector
//! ([`LagrangianFunctionalSet::check_single`]), for the whole family
//! ([`sweep`] in exhaustive mode), or statistically ([`SweepMode::Sample`]).
//!
//! Exhaustive sweeps split the space into chunks by fixing a prefix of the
//! parameter digits, walk each chunk in Gray order so every step is a
//! single column update, optionally spread chunks across worker threads,
//! and can checkpoint finished chunks to a file so a killed run resumes
//! where it left off. Per-chunk checksums over the exception stream make
//! resumed, re-run, re-chunked, and re-ordered sweeps comparable bit for
//! bit.
//!
//! Everything here works in fixed-width integers mod p — the only part of
//! the crate that does. The reduction from the exact rational triple form
//! to these residues is one lemma: λ₃ vanishes on a Lagrangian exactly
//! when `p` times its value at every increasing triple of basis elements
//! is `0 mod p`, and those values are 3×3 minors of the basis matrix. The
//! tests cross-check this path against the exact arithmetic in
//! [`crate::triple`] on thousands of random vectors.

mod checkpoint;
mod engine;
mod gray;

use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::abelian::Subgroup;
use crate::clasper::ClasperFamily;
use crate::linking::LinkingError;

pub use checkpoint::ChunkRecord;
pub use engine::EnginePreference;

use checkpoint::{
    format_digits, read_checkpoint, CheckpointHeader, CheckpointWriter, ChecksumBuilder,
};
use engine::EngineData;

/// Hard ceiling on the number of chunks a sweep may be split into; beyond
/// this the per-chunk bookkeeping dwarfs the work.
const MAX_CHUNK_COUNT: u128 = 1 << 20;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("parameter vector has {got} digits, the family needs {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("digit {digit} at position {index} is out of range mod {p}")]
    DigitOutOfRange { index: usize, digit: u64, p: u64 },
    #[error("invalid sweep options: {0}")]
    InvalidOptions(String),
    #[error("malformed checkpoint: {0}")]
    MalformedCheckpoint(String),
    #[error("checkpoint conflict: {0}")]
    ChunkOverlap(String),
    #[error(
        "sweep interrupted after {} of {} vectors; finished chunks are preserved",
        partial.total,
        partial.target
    )]
    Interrupted { partial: Box<SweepReport> },
    #[error(transparent)]
    Linking(#[from] LinkingError),
    #[error("checkpoint i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// The Lagrangians of a family's linking form, compiled to linear
/// functionals on the parameter space.
///
/// For a Lagrangian `L` with basis `g_1, …, g_r` and a parameter vector
/// `v`, the family's triple form `λ₃ᵥ` vanishes on `L` exactly when, for
/// every increasing basis triple `(g_a, g_b, g_c)`, the residue
///
/// ```text
/// Σ_T  v_T · det( basis minor at coordinate triple T )  ≡ 0  (mod p)
/// ```
///
/// is zero — trilinearity reduces vanishing on all of `L` to vanishing at
/// basis triples, and each basis triple gives one functional row. A
/// vector where every Lagrangian has a nonzero row is an exception.
pub struct LagrangianFunctionalSet {
    p: u64,
    m: usize,
    lagrangians: Vec<Subgroup>,
    /// `groups[l]` = functional rows of `lagrangians[l]`, one per
    /// increasing basis triple, each of length `m`.
    groups: Vec<Vec<Vec<u64>>>,
}

impl LagrangianFunctionalSet {
    /// Enumerates the Lagrangians of `family`'s linking form (in canonical
    /// order) and compiles their functional rows.
    pub fn new(family: &ClasperFamily) -> Result<Self, SearchError> {
        let lagrangians = family.base_form().enumerate_lagrangians()?;
        let p = family.p();
        let triples = family.generator_triples();
        let m = triples.len();
        let group = family.group();
        let mut groups = Vec::with_capacity(lagrangians.len());
        for lagrangian in &lagrangians {
            let basis: Vec<Vec<u64>> = lagrangian
                .generators(group)
                .iter()
                .map(|g| {
                    g.coords()
                        .iter()
                        .map(|c| c.to_u64().expect("reduced coordinate fits in u64"))
                        .collect()
                })
                .collect();
            let mut rows = Vec::new();
            for a in 0..basis.len() {
                for b in a + 1..basis.len() {
                    for c in b + 1..basis.len() {
                        let row: Vec<u64> = triples
                            .iter()
                            .map(|&(i, j, k)| {
                                minor_det_mod(&basis[a], &basis[b], &basis[c], (i, j, k), p)
                            })
                            .collect();
                        rows.push(row);
                    }
                }
            }
            groups.push(rows);
        }
        Ok(LagrangianFunctionalSet { p, m, lagrangians, groups })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Length of the parameter vectors this set evaluates.
    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn lagrangian_count(&self) -> usize {
        self.lagrangians.len()
    }

    /// The `index`-th Lagrangian in canonical enumeration order.
    pub fn lagrangian(&self, index: usize) -> &Subgroup {
        &self.lagrangians[index]
    }

    /// The functional rows of the `index`-th Lagrangian.
    pub fn functional_rows(&self, index: usize) -> &[Vec<u64>] {
        &self.groups[index]
    }

    fn validate(&self, digits: &[u64]) -> Result<(), SearchError> {
        if digits.len() != self.m {
            return Err(SearchError::DimensionMismatch {
                expected: self.m,
                got: digits.len(),
            });
        }
        for (index, &digit) in digits.iter().enumerate() {
            if digit >= self.p {
                return Err(SearchError::DigitOutOfRange { index, digit, p: self.p });
            }
        }
        Ok(())
    }

    /// Checks one parameter vector: returns the index of the first
    /// Lagrangian (in canonical order) on which the triple form vanishes,
    /// or `None` when the vector is an exception.
    pub fn check_single(&self, digits: &[u64]) -> Result<Option<usize>, SearchError> {
        self.validate(digits)?;
        Ok(self.groups.iter().position(|rows| {
            rows.iter().all(|row| dot_mod(row, digits, self.p) == 0)
        }))
    }

    /// True when no Lagrangian covers this vector.
    pub fn is_exception(&self, digits: &[u64]) -> Result<bool, SearchError> {
        Ok(self.check_single(digits)?.is_none())
    }
}

fn dot_mod(row: &[u64], v: &[u64], p: u64) -> u64 {
    debug_assert_eq!(row.len(), v.len());
    row.iter().zip(v).map(|(&w, &d)| w * d % p).sum::<u64>() % p
}

fn minor_det_mod(x: &[u64], y: &[u64], z: &[u64], (i, j, k): (usize, usize, usize), p: u64) -> u64 {
    let e = |r: &[u64], c: usize| r[c] as i128;
    let det = e(x, i) * (e(y, j) * e(z, k) - e(y, k) * e(z, j))
        - e(x, j) * (e(y, i) * e(z, k) - e(y, k) * e(z, i))
        + e(x, k) * (e(y, i) * e(z, j) - e(y, j) * e(z, i));
    det.rem_euclid(p as i128) as u64
}

/// What a sweep visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Every parameter vector, exactly once.
    Exhaustive,
    /// `count` vectors drawn uniformly (with replacement) from a seeded
    /// ChaCha stream; the same seed and count always visit the same
    /// vectors in the same order.
    Sample { count: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub mode: SweepMode,
    /// Minimum number of chunks to split an exhaustive sweep into; rounded
    /// up to the next power of `p` (prefixes of a fixed length). `0` and
    /// `1` both mean a single chunk.
    pub chunks: u64,
    /// Worker threads for exhaustive sweeps. Sampling is sequential — its
    /// whole point is a reproducible stream — and ignores this.
    pub workers: usize,
    /// Checkpoint file: finished chunks already recorded there are not
    /// recomputed, and newly finished chunks are appended. Exhaustive only.
    pub checkpoint: Option<PathBuf>,
    /// Cap on how many exception vectors the report retains.
    pub witness_cap: usize,
    /// Also print every exception to stderr as it is found.
    pub log_exceptions: bool,
    /// Which evaluation engine to use; `Portable` forces the plain-integer
    /// path so the bit-sliced one can be audited against it.
    pub engine: EnginePreference,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            mode: SweepMode::Exhaustive,
            chunks: 1,
            workers: 1,
            checkpoint: None,
            witness_cap: 32,
            log_exceptions: false,
            engine: EnginePreference::Auto,
        }
    }
}

/// Outcome of a sweep.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub p: u64,
    pub n: usize,
    /// Parameter-space dimension `m`.
    pub dimension: usize,
    /// How many vectors the whole sweep was meant to visit.
    pub target: u128,
    /// How many vectors were actually visited (equals `target` unless the
    /// report describes an interrupted sweep).
    pub total: u128,
    pub exceptions: u128,
    /// Up to `witness_cap` exception vectors, as found. Witnesses inside
    /// chunks that were resumed from a checkpoint are not re-derived.
    pub exception_witnesses: Vec<Vec<u64>>,
    /// Per-chunk records, sorted by prefix. Sampling produces a single
    /// record with an empty prefix.
    pub chunks: Vec<ChunkRecord>,
    /// How many chunks were taken from the checkpoint instead of computed.
    pub resumed_chunks: usize,
    pub wall: Duration,
}

impl SweepReport {
    /// The one-line machine-readable summary: `total=… exceptions=…`.
    pub fn summary_line(&self) -> String {
        format!("total={} exceptions={}", self.total, self.exceptions)
    }
}

/// Decides, for every parameter vector the mode selects, whether some
/// Lagrangian covers it. See [`SweepMode`], [`SweepOptions`], and
/// [`SweepReport`]; `cancel` is polled throughout and stops the sweep at a
/// chunk boundary, returning [`SearchError::Interrupted`] with everything
/// finished so far.
pub fn sweep(
    family: &ClasperFamily,
    options: &SweepOptions,
    cancel: &AtomicBool,
) -> Result<SweepReport, SearchError> {
    let start = Instant::now();
    let functionals = LagrangianFunctionalSet::new(family)?;
    debug_assert!(functionals.lagrangian_count() > 0);
    let engine = EngineData::from_groups(
        functionals.p,
        functionals.m,
        &functionals.groups,
        options.engine,
    );
    match options.mode {
        SweepMode::Exhaustive => {
            run_exhaustive(family, &functionals, &engine, options, cancel, start)
        }
        SweepMode::Sample { count, seed } => {
            run_sample(family, &functionals, &engine, count, seed, options, cancel, start)
        }
    }
}

/// The chunk prefix length: the smallest `k` with `p^k >= requested`,
/// capped at `m`. Returns `(k, p^k)`.
fn prefix_length(p: u64, m: usize, requested: u64) -> Result<(usize, u128), SearchError> {
    let requested = u128::from(requested.max(1));
    if requested > MAX_CHUNK_COUNT {
        return Err(SearchError::InvalidOptions(format!(
            "{requested} chunks requested; at most {MAX_CHUNK_COUNT} are supported"
        )));
    }
    let mut k = 0usize;
    let mut count: u128 = 1;
    while count < requested && k < m {
        count *= u128::from(p);
        k += 1;
    }
    if count > MAX_CHUNK_COUNT {
        return Err(SearchError::InvalidOptions(format!(
            "{requested} chunks round up to p^{k} = {count}, above the {MAX_CHUNK_COUNT} cap"
        )));
    }
    Ok((k, count))
}

/// Digits of `index` in base `p`, most significant first, `width` wide.
fn prefix_digits(mut index: u128, p: u64, width: usize) -> Vec<u64> {
    let mut digits = vec![0u64; width];
    for slot in digits.iter_mut().rev() {
        *slot = (index % u128::from(p)) as u64;
        index /= u128::from(p);
    }
    debug_assert_eq!(index, 0);
    digits
}

#[allow(clippy::too_many_arguments)]
fn run_exhaustive(
    family: &ClasperFamily,
    functionals: &LagrangianFunctionalSet,
    engine: &EngineData,
    options: &SweepOptions,
    cancel: &AtomicBool,
    start: Instant,
) -> Result<SweepReport, SearchError> {
    let (p, m) = (functionals.p, functionals.m);
    let target = u128::from(p).checked_pow(m as u32).ok_or_else(|| {
        SearchError::InvalidOptions(format!(
            "exhaustive sweep of p^m = {p}^{m} vectors does not fit in 128 bits"
        ))
    })?;
    let (prefix_len, chunk_count) = prefix_length(p, m, options.chunks)?;
    let header = CheckpointHeader { p, n: family.n(), m, prefix_len };

    // Load previously finished chunks, if any, and open the writer.
    let mut resumed: Vec<ChunkRecord> = Vec::new();
    let mut done = std::collections::BTreeMap::new();
    if let Some(path) = &options.checkpoint {
        if path.exists() {
            let found = read_checkpoint(path)?;
            if found.header != header {
                return Err(SearchError::ChunkOverlap(format!(
                    "checkpoint records a sweep with p={} n={} m={} prefix_len={}, \
                     but this sweep has p={} n={} m={} prefix_len={}",
                    found.header.p,
                    found.header.n,
                    found.header.m,
                    found.header.prefix_len,
                    header.p,
                    header.n,
                    header.m,
                    header.prefix_len
                )));
            }
            done = found.chunks;
        }
    }
    let writer = match &options.checkpoint {
        Some(path) => Some(Mutex::new(CheckpointWriter::open(path, header)?)),
        None => None,
    };

    let mut pending: Vec<Vec<u64>> = Vec::new();
    for index in 0..chunk_count {
        let prefix = prefix_digits(index, p, prefix_len);
        match done.remove(&prefix) {
            Some(record) => resumed.push(record),
            None => pending.push(prefix),
        }
    }
    debug_assert!(done.is_empty(), "every valid prefix is enumerated above");
    let resumed_chunks = resumed.len();

    let next = AtomicU64::new(0);
    let halt = AtomicBool::new(false); // set on write failure, not by the user
    let computed: Mutex<Vec<ChunkRecord>> = Mutex::new(Vec::new());
    let witnesses: Mutex<Vec<Vec<u64>>> = Mutex::new(Vec::new());
    let write_error: Mutex<Option<SearchError>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..options.workers.max(1) {
            scope.spawn(|| loop {
                if cancel.load(Ordering::Relaxed) || halt.load(Ordering::Relaxed) {
                    return;
                }
                let index = next.fetch_add(1, Ordering::Relaxed) as usize;
                let Some(prefix) = pending.get(index) else {
                    return;
                };
                let mut checksum =
                    ChecksumBuilder::new(ChecksumBuilder::EXHAUSTIVE, p, m, prefix);
                let mut on_exception = |digits: &[u64]| {
                    checksum.record_exception(digits);
                    if options.log_exceptions {
                        eprintln!("exception at v=({})", format_digits(digits));
                    }
                    let mut kept = witnesses.lock().unwrap();
                    if kept.len() < options.witness_cap {
                        kept.push(digits.to_vec());
                    }
                };
                let Some((total, exceptions)) =
                    engine.run_chunk(prefix, cancel, &mut on_exception)
                else {
                    return; // cancelled mid-chunk; the partial chunk is discarded
                };
                let record = ChunkRecord {
                    prefix: prefix.clone(),
                    total,
                    exceptions,
                    checksum: checksum.finish(total, exceptions),
                };
                if let Some(writer) = &writer {
                    if let Err(error) = writer.lock().unwrap().append(&record) {
                        *write_error.lock().unwrap() = Some(error);
                        halt.store(true, Ordering::Relaxed);
                        return;
                    }
                }
                computed.lock().unwrap().push(record);
            });
        }
    });

    if let Some(error) = write_error.into_inner().unwrap() {
        return Err(error);
    }
    let mut chunks = resumed;
    chunks.extend(computed.into_inner().unwrap());
    chunks.sort_by(|a, b| a.prefix.cmp(&b.prefix));
    let complete = chunks.len() as u128 == chunk_count;
    let report = SweepReport {
        p,
        n: family.n(),
        dimension: m,
        target,
        total: chunks.iter().map(|r| r.total).sum(),
        exceptions: chunks.iter().map(|r| r.exceptions).sum(),
        exception_witnesses: witnesses.into_inner().unwrap(),
        chunks,
        resumed_chunks,
        wall: start.elapsed(),
    };
    if !complete {
        return Err(SearchError::Interrupted { partial: Box::new(report) });
    }
    debug_assert_eq!(report.total, target);
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn run_sample(
    family: &ClasperFamily,
    functionals: &LagrangianFunctionalSet,
    engine: &EngineData,
    count: u64,
    seed: u64,
    options: &SweepOptions,
    cancel: &AtomicBool,
    start: Instant,
) -> Result<SweepReport, SearchError> {
    if options.checkpoint.is_some() {
        return Err(SearchError::InvalidOptions(
            "checkpoint/resume applies only to exhaustive sweeps".into(),
        ));
    }
    let (p, m) = (functionals.p, functionals.m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checksum =
        ChecksumBuilder::new(ChecksumBuilder::SAMPLE, p, m, &[seed, count]);
    let mut witnesses = Vec::new();
    let mut exceptions: u128 = 0;
    let mut visited: u64 = 0;
    let mut v = vec![0u64; m];
    for i in 0..count {
        if i & 0xF_FFFF == 0 && i > 0 && cancel.load(Ordering::Relaxed) {
            break;
        }
        for digit in v.iter_mut() {
            *digit = rng.random_range(0..p);
        }
        if engine.is_exception_at(&v) {
            exceptions += 1;
            checksum.record_exception(&v);
            if options.log_exceptions {
                eprintln!("exception at v=({})", format_digits(&v));
            }
            if witnesses.len() < options.witness_cap {
                witnesses.push(v.clone());
            }
        }
        visited = i + 1;
    }
    let record = ChunkRecord {
        prefix: Vec::new(),
        total: u128::from(visited),
        exceptions,
        checksum: checksum.finish(u128::from(visited), exceptions),
    };
    let report = SweepReport {
        p,
        n: family.n(),
        dimension: m,
        target: u128::from(count),
        total: u128::from(visited),
        exceptions,
        exception_witnesses: witnesses,
        chunks: vec![record],
        resumed_chunks: 0,
        wall: start.elapsed(),
    };
    if visited < count {
        return Err(SearchError::Interrupted { partial: Box::new(report) });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clasper::{family, ParameterVector};
    use crate::linking::split_form_lagrangian_count;
    use num_bigint::BigInt;

    fn unset() -> AtomicBool {
        AtomicBool::new(false)
    }

    #[test]
    fn functional_sets_have_one_row_per_rank_three_lagrangian() {
        let fam = family(3, 3).unwrap();
        let set = LagrangianFunctionalSet::new(&fam).unwrap();
        assert_eq!(set.p(), 3);
        assert_eq!(set.dimension(), 20);
        assert_eq!(
            BigInt::from(set.lagrangian_count()),
            split_form_lagrangian_count(3, 3)
        );
        for index in 0..set.lagrangian_count() {
            let rows = set.functional_rows(index);
            assert_eq!(rows.len(), 1, "rank-3 Lagrangians give a single row");
            assert_eq!(rows[0].len(), 20);
            assert!(rows[0].iter().any(|&w| w != 0), "independent basis rows have a nonzero maximal minor");
        }

        // Mod 2 the six framings all present the same residue, and the
        // Lagrangians are exactly the self-dual binary codes of length
        // six — classically there are fifteen of them.
        let fam2 = family(2, 3).unwrap();
        let set2 = LagrangianFunctionalSet::new(&fam2).unwrap();
        assert_eq!(set2.lagrangian_count(), 15);
        assert_eq!(set2.dimension(), 20);
    }

    #[test]
    fn the_zero_vector_vanishes_on_the_first_lagrangian() {
        let fam = family(3, 3).unwrap();
        let set = LagrangianFunctionalSet::new(&fam).unwrap();
        assert_eq!(set.check_single(&[0; 20]).unwrap(), Some(0));
        assert!(!set.is_exception(&[0; 20]).unwrap());
    }

    #[test]
    fn check_single_validates_its_input() {
        let fam = family(3, 3).unwrap();
        let set = LagrangianFunctionalSet::new(&fam).unwrap();
        assert!(matches!(
            set.check_single(&[0; 19]),
            Err(SearchError::DimensionMismatch { expected: 20, got: 19 })
        ));
        let mut v = [0u64; 20];
        v[7] = 3;
        assert!(matches!(
            set.check_single(&v),
            Err(SearchError::DigitOutOfRange { index: 7, digit: 3, p: 3 })
        ));
    }

    /// The residue shortcut must agree with the exact rational evaluation:
    /// scan Lagrangians in canonical order both ways and compare indices.
    #[test]
    fn check_single_matches_the_exact_triple_form_oracle() {
        let fam = family(3, 3).unwrap();
        let set = LagrangianFunctionalSet::new(&fam).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let digits: Vec<u64> = (0..20).map(|_| rng.random_range(0..3)).collect();
            let fast = set.check_single(&digits).unwrap();
            let triple = fam
                .lambda3_of(&ParameterVector::new(digits.clone(), 3).unwrap())
                .unwrap();
            let mut exact = None;
            for index in 0..set.lagrangian_count() {
                if triple.vanishes_on(set.lagrangian(index)).unwrap() {
                    exact = Some(index);
                    break;
                }
            }
            assert_eq!(fast, exact, "digits {digits:?}");
        }
    }

    #[test]
    fn exhaustive_sweep_of_the_mod_two_family_finds_no_exceptions() {
        let fam = family(2, 3).unwrap();
        let report = sweep(&fam, &SweepOptions::default(), &unset()).unwrap();
        assert_eq!(report.total, 1 << 20);
        assert_eq!(report.target, 1 << 20);
        assert_eq!(report.exceptions, 0);
        assert_eq!(report.chunks.len(), 1);
        assert!(report.exception_witnesses.is_empty());
        assert_eq!(report.summary_line(), "total=1048576 exceptions=0");
    }

    #[test]
    fn chunking_workers_and_engine_choice_leave_results_unchanged() {
        let fam = family(2, 3).unwrap();
        let baseline = sweep(
            &fam,
            &SweepOptions { chunks: 16, ..SweepOptions::default() },
            &unset(),
        )
        .unwrap();
        assert_eq!(baseline.chunks.len(), 16);
        assert!(baseline.chunks.iter().all(|c| c.prefix.len() == 4));
        assert_eq!(baseline.total, 1 << 20);
        assert_eq!(baseline.exceptions, 0);

        let threaded = sweep(
            &fam,
            &SweepOptions { chunks: 16, workers: 4, ..SweepOptions::default() },
            &unset(),
        )
        .unwrap();
        assert_eq!(threaded.chunks, baseline.chunks);

        let portable = sweep(
            &fam,
            &SweepOptions {
                chunks: 16,
                engine: EnginePreference::Portable,
                ..SweepOptions::default()
            },
            &unset(),
        )
        .unwrap();
        assert_eq!(portable.chunks, baseline.chunks);
    }

    #[test]
    fn chunk_counts_round_up_to_a_power_of_p() {
        assert_eq!(prefix_length(3, 20, 1).unwrap(), (0, 1));
        assert_eq!(prefix_length(3, 20, 2).unwrap(), (1, 3));
        assert_eq!(prefix_length(3, 20, 81).unwrap(), (4, 81));
        assert_eq!(prefix_length(3, 20, 82).unwrap(), (5, 243));
        // Requests beyond p^m cap at one chunk per vector.
        assert_eq!(prefix_length(2, 4, 1000).unwrap(), (4, 16));
        assert!(matches!(
            prefix_length(2, 64, u64::MAX),
            Err(SearchError::InvalidOptions(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_ignores_checkpoint_free_options() {
        let fam = family(3, 3).unwrap();
        let options = SweepOptions {
            mode: SweepMode::Sample { count: 20_000, seed: 42 },
            ..SweepOptions::default()
        };
        let first = sweep(&fam, &options, &unset()).unwrap();
        let second = sweep(&fam, &options, &unset()).unwrap();
        assert_eq!(first.total, 20_000);
        assert_eq!(first.exceptions, 0);
        assert_eq!(first.chunks, second.chunks);
        assert_eq!(first.chunks[0].prefix, Vec::<u64>::new());

        let reseeded = sweep(
            &fam,
            &SweepOptions {
                mode: SweepMode::Sample { count: 20_000, seed: 43 },
                ..SweepOptions::default()
            },
            &unset(),
        )
        .unwrap();
        // The checksum binds the seed, so even an identical outcome is
        // distinguishable from a different stream.
        assert_ne!(first.chunks[0].checksum, reseeded.chunks[0].checksum);
    }

    #[test]
    fn sampling_rejects_checkpoints() {
        let fam = family(3, 3).unwrap();
        let options = SweepOptions {
            mode: SweepMode::Sample { count: 10, seed: 1 },
            checkpoint: Some(std::env::temp_dir().join("unused.ckpt")),
            ..SweepOptions::default()
        };
        assert!(matches!(
            sweep(&fam, &options, &unset()),
            Err(SearchError::InvalidOptions(_))
        ));
    }

    #[test]
    fn checkpoints_resume_without_recomputing_finished_chunks() {
        let fam = family(2, 3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.ckpt");
        let options = SweepOptions {
            chunks: 16,
            checkpoint: Some(path.clone()),
            ..SweepOptions::default()
        };
        let full = sweep(&fam, &options, &unset()).unwrap();
        assert_eq!(full.resumed_chunks, 0);

        // Running again resumes everything from the file.
        let resumed = sweep(&fam, &options, &unset()).unwrap();
        assert_eq!(resumed.resumed_chunks, 16);
        assert_eq!(resumed.chunks, full.chunks);

        // Truncate to the header plus five records, as if the process had
        // been killed mid-run, and sweep again: five resumed, eleven
        // recomputed, identical final records.
        let text = std::fs::read_to_string(&path).unwrap();
        let kept: Vec<&str> = text.lines().take(6).collect();
        std::fs::write(&path, format!("{}\n", kept.join("\n"))).unwrap();
        let recovered = sweep(&fam, &options, &unset()).unwrap();
        assert_eq!(recovered.resumed_chunks, 5);
        assert_eq!(recovered.chunks, full.chunks);
    }

    #[test]
    fn a_checkpoint_from_a_different_sweep_is_refused() {
        let fam2 = family(2, 3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.ckpt");
        let options = SweepOptions {
            chunks: 16,
            checkpoint: Some(path.clone()),
            ..SweepOptions::default()
        };
        sweep(&fam2, &options, &unset()).unwrap();

        // Same family, different chunking.
        let rechunked = SweepOptions {
            chunks: 4,
            checkpoint: Some(path.clone()),
            ..SweepOptions::default()
        };
        assert!(matches!(
            sweep(&fam2, &rechunked, &unset()),
            Err(SearchError::ChunkOverlap(_))
        ));

        // Different family entirely.
        let fam3 = family(3, 3).unwrap();
        let other = SweepOptions {
            chunks: 16,
            checkpoint: Some(path),
            ..SweepOptions::default()
        };
        assert!(matches!(
            sweep(&fam3, &other, &unset()),
            Err(SearchError::ChunkOverlap(_))
        ));
    }

    #[test]
    fn a_pre_set_cancel_flag_interrupts_before_any_work() {
        let fam = family(2, 3).unwrap();
        let cancelled = AtomicBool::new(true);
        match sweep(
            &fam,
            &SweepOptions { chunks: 16, ..SweepOptions::default() },
            &cancelled,
        ) {
            Err(SearchError::Interrupted { partial }) => {
                assert_eq!(partial.total, 0);
                assert_eq!(partial.target, 1 << 20);
                assert!(partial.chunks.is_empty());
            }
            other => panic!("expected Interrupted, got {other:?}"),
        }
    }

    /// Interrupt with a checkpoint, then finish in a second run — the
    /// in-process version of kill-and-resume.
    #[test]
    fn an_interrupted_checkpointed_sweep_finishes_on_resume() {
        let fam = family(2, 3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.ckpt");
        let options = SweepOptions {
            chunks: 16,
            checkpoint: Some(path.clone()),
            ..SweepOptions::default()
        };
        let cancelled = AtomicBool::new(true);
        match sweep(&fam, &options, &cancelled) {
            Err(SearchError::Interrupted { partial }) => assert_eq!(partial.total, 0),
            other => panic!("expected Interrupted, got {other:?}"),
        }

        let finished = sweep(&fam, &options, &unset()).unwrap();
        assert_eq!(finished.total, 1 << 20);
        assert_eq!(finished.exceptions, 0);
    }

    /// A family too small to carry any triple form sweeps trivially: the
    /// parameter space is a single empty vector and nothing is an
    /// exception.
    #[test]
    fn families_without_triples_sweep_trivially() {
        let fam = family(3, 1).unwrap();
        assert_eq!(fam.parameter_dimension(), 0);
        let report = sweep(&fam, &SweepOptions::default(), &unset()).unwrap();
        assert_eq!(report.total, 1);
        assert_eq!(report.exceptions, 0);
    }

    /// The full 3^20 sweep of the mod-three family. Minutes of work even
    /// on the bit-sliced path, so it does not run by default:
    /// `cargo test -p linkform -- --ignored full_mod_three` runs it.
    #[test]
    #[ignore = "full 3^20 exhaustive sweep; run explicitly"]
    fn full_mod_three_sweep_finds_no_exceptions() {
        let fam = family(3, 3).unwrap();
        let options = SweepOptions {
            chunks: 81,
            workers: 8,
            ..SweepOptions::default()
        };
        let report = sweep(&fam, &options, &unset()).unwrap();
        assert_eq!(report.total, 3_486_784_401);
        assert_eq!(report.exceptions, 0);
        assert_eq!(report.chunks.len(), 81);
        eprintln!(
            "full mod-three sweep: {} in {:?}",
            report.summary_line(),
            report.wall
        );
    }

    /// The sweep engines and `check_single` answer the same question
    /// through different code (Gray-walk bit planes vs. row scans); drive
    /// both across one full small family and compare per-vector.
    #[test]
    fn sweep_engine_and_check_single_agree_on_a_full_family() {
        let fam = family(2, 3).unwrap();
        let set = LagrangianFunctionalSet::new(&fam).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let digits: Vec<u64> = (0..20).map(|_| rng.random_range(0..2)).collect();
            assert!(!set.is_exception(&digits).unwrap());
        }
        // And the exhaustive walk agrees in aggregate: zero exceptions.
        let report = sweep(&fam, &SweepOptions::default(), &unset()).unwrap();
        assert_eq!(report.exceptions, 0);
    }

    /// Negating a parameter vector scales every triple-form coefficient by
    /// the unit `-1`, which cannot change where the form vanishes: the
    /// first vanishing Lagrangian must be the same one, index for index.
    #[test]
    fn negating_a_parameter_vector_never_changes_its_verdict() {
        let fam = family(3, 3).unwrap();
        let set = LagrangianFunctionalSet::new(&fam).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let digits: Vec<u64> = (0..20).map(|_| rng.random_range(0..3)).collect();
            let negated: Vec<u64> = digits.iter().map(|&d| (3 - d) % 3).collect();
            assert_eq!(
                set.check_single(&digits).unwrap(),
                set.check_single(&negated).unwrap(),
                "digits {digits:?}"
            );
        }
    }

    /// Scanning the Lagrangians in a different order may change which one
    /// is reported as the first witness, but never whether a vector is an
    /// exception — the early-exit in the engines relies on exactly this.
    #[test]
    fn lagrangian_scan_order_does_not_change_exception_status() {
        let fam = family(2, 3).unwrap();
        let set = LagrangianFunctionalSet::new(&fam).unwrap();
        let reversed: Vec<Vec<Vec<u64>>> = set.groups.iter().rev().cloned().collect();
        for preference in [EnginePreference::Auto, EnginePreference::Portable] {
            let forward = EngineData::from_groups(2, set.m, &set.groups, preference);
            let backward = EngineData::from_groups(2, set.m, &reversed, preference);
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            for _ in 0..2000 {
                let digits: Vec<u64> = (0..20).map(|_| rng.random_range(0..2)).collect();
                assert_eq!(
                    forward.is_exception_at(&digits),
                    backward.is_exception_at(&digits),
                    "digits {digits:?}"
                );
            }
        }
    }

    /// The all-ones vector turns on every clasper coefficient at once; the
    /// sweep says it is not an exception, so a concrete witness Lagrangian
    /// must exist — find it and confirm it against the exact oracle.
    #[test]
    fn the_all_ones_mod_two_vector_has_a_vanishing_lagrangian() {
        let fam = family(2, 3).unwrap();
        let set = LagrangianFunctionalSet::new(&fam).unwrap();
        let all_ones = vec![1u64; 20];
        let witness = set
            .check_single(&all_ones)
            .unwrap()
            .expect("the exhaustive sweep reports no exceptions");
        let triple = fam
            .lambda3_of(&ParameterVector::new(all_ones, 2).unwrap())
            .unwrap();
        assert!(triple.vanishes_on(set.lagrangian(witness)).unwrap());
    }

    /// The distinguished mod-three vector with a single `1` on the first
    /// generator triple — the coefficient pattern of the shipped example
    /// manifold — also has a vanishing Lagrangian.
    #[test]
    fn the_distinguished_mod_three_vector_has_a_vanishing_lagrangian() {
        let fam = family(3, 3).unwrap();
        let set = LagrangianFunctionalSet::new(&fam).unwrap();
        let mut digits = vec![0u64; 20];
        digits[0] = 1;
        assert_eq!(fam.generator_triples()[0], (0, 1, 2));
        let witness = set
            .check_single(&digits)
            .unwrap()
            .expect("the exhaustive sweep reports no exceptions");
        let triple = fam
            .lambda3_of(&ParameterVector::new(digits, 3).unwrap())
            .unwrap();
        assert!(triple.vanishes_on(set.lagrangian(witness)).unwrap());
    }
}
