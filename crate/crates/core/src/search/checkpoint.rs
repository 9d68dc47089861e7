//! Sweep checkpoint files and chunk checksums.
//!
//! A checkpoint file records finished chunks of an exhaustive sweep, one per
//! line, so a killed run can resume without redoing them:
//!
//! ```text
//! sweep p=3 n=3 m=20 prefix_len=4
//! chunk=0,0,0,0 exceptions=0 checksum=5a8b9c0d1e2f3a4b
//! chunk=0,0,0,1 exceptions=0 checksum=94ee027c3b4b3f21
//! ```
//!
//! The header pins the sweep geometry; resuming against a file whose header
//! disagrees is refused rather than silently mixing two different searches.
//! Chunk lines may arrive in any order (workers finish out of order). A
//! torn final line without a trailing newline — the signature of a killed
//! process mid-write — is dropped; any other malformed line is an error.
//!
//! The checksum is FNV-1a over the chunk's identity and its exception
//! vectors in visit order. It deliberately ignores wall time, worker id,
//! and witness sampling, so a resumed or re-run chunk must reproduce the
//! same value bit for bit; the merge step verifies this when a chunk is
//! both resumed and recomputed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::SearchError;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Streaming FNV-1a accumulator for chunk checksums.
///
/// The digest covers, in order: a mode tag, the field characteristic `p`,
/// the parameter dimension `m`, the chunk prefix, every exception vector in
/// the order the walk visits them, and finally the visit and exception
/// counts. Engines feed it incrementally; two engines that disagree on any
/// exception, or on their order, produce different digests.
pub struct ChecksumBuilder {
    state: u64,
}

impl ChecksumBuilder {
    /// Tag for exhaustive chunks.
    pub const EXHAUSTIVE: u64 = 0xE;
    /// Tag for sampling runs (prefix carries the seed and sample count).
    pub const SAMPLE: u64 = 0x5;

    pub fn new(mode_tag: u64, p: u64, m: usize, prefix: &[u64]) -> Self {
        let mut b = ChecksumBuilder { state: FNV_OFFSET };
        b.push(mode_tag);
        b.push(p);
        b.push(m as u64);
        b.push(prefix.len() as u64);
        for &d in prefix {
            b.push(d);
        }
        b
    }

    fn push(&mut self, word: u64) {
        for byte in word.to_le_bytes() {
            self.state ^= u64::from(byte);
            self.state = self.state.wrapping_mul(FNV_PRIME);
        }
    }

    /// Records one exception vector (all `m` digits).
    pub fn record_exception(&mut self, digits: &[u64]) {
        for &d in digits {
            self.push(d);
        }
    }

    /// Seals the digest with the totals.
    pub fn finish(mut self, total: u128, exceptions: u128) -> u64 {
        self.push(total as u64);
        self.push((total >> 64) as u64);
        self.push(exceptions as u64);
        self.push((exceptions >> 64) as u64);
        self.state
    }
}

/// One finished chunk: its prefix, how many vectors it covered, how many
/// were exceptions, and the checksum of its exception stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkRecord {
    pub prefix: Vec<u64>,
    pub total: u128,
    pub exceptions: u128,
    pub checksum: u64,
}

/// Sweep geometry pinned in a checkpoint header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckpointHeader {
    pub p: u64,
    pub n: usize,
    pub m: usize,
    pub prefix_len: usize,
}

impl CheckpointHeader {
    fn to_line(self) -> String {
        format!(
            "sweep p={} n={} m={} prefix_len={}",
            self.p, self.n, self.m, self.prefix_len
        )
    }
}

/// Comma-separated digit list, shared by chunk lines and exception logs.
pub(super) fn format_digits(digits: &[u64]) -> String {
    let mut s = String::new();
    for (i, d) in digits.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{d}");
    }
    s
}

fn record_line(record: &ChunkRecord) -> String {
    format!(
        "chunk={} exceptions={} checksum={:016x}",
        format_digits(&record.prefix),
        record.exceptions,
        record.checksum
    )
}

fn parse_kv<'a>(field: &'a str, key: &str, line_no: usize) -> Result<&'a str, SearchError> {
    field.strip_prefix(key).and_then(|rest| rest.strip_prefix('=')).ok_or_else(|| {
        SearchError::MalformedCheckpoint(format!(
            "line {line_no}: expected `{key}=...`, found `{field}`"
        ))
    })
}

fn parse_number<T: std::str::FromStr>(text: &str, what: &str, line_no: usize) -> Result<T, SearchError> {
    text.parse().map_err(|_| {
        SearchError::MalformedCheckpoint(format!("line {line_no}: bad {what} `{text}`"))
    })
}

fn parse_header(line: &str, line_no: usize) -> Result<CheckpointHeader, SearchError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "sweep" {
        return Err(SearchError::MalformedCheckpoint(format!(
            "line {line_no}: expected sweep header, found `{line}`"
        )));
    }
    Ok(CheckpointHeader {
        p: parse_number(parse_kv(fields[1], "p", line_no)?, "p", line_no)?,
        n: parse_number(parse_kv(fields[2], "n", line_no)?, "n", line_no)?,
        m: parse_number(parse_kv(fields[3], "m", line_no)?, "m", line_no)?,
        prefix_len: parse_number(parse_kv(fields[4], "prefix_len", line_no)?, "prefix_len", line_no)?,
    })
}

fn parse_record(line: &str, line_no: usize, header: &CheckpointHeader) -> Result<ChunkRecord, SearchError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(SearchError::MalformedCheckpoint(format!(
            "line {line_no}: expected `chunk=... exceptions=... checksum=...`, found `{line}`"
        )));
    }
    let prefix_text = parse_kv(fields[0], "chunk", line_no)?;
    let mut prefix = Vec::new();
    if !prefix_text.is_empty() {
        for digit in prefix_text.split(',') {
            prefix.push(parse_number::<u64>(digit, "chunk digit", line_no)?);
        }
    }
    if prefix.len() != header.prefix_len {
        return Err(SearchError::MalformedCheckpoint(format!(
            "line {line_no}: chunk has {} digits, header says {}",
            prefix.len(),
            header.prefix_len
        )));
    }
    if prefix.iter().any(|&d| d >= header.p) {
        return Err(SearchError::MalformedCheckpoint(format!(
            "line {line_no}: chunk digit out of range for p={}",
            header.p
        )));
    }
    let exceptions = parse_number::<u128>(parse_kv(fields[1], "exceptions", line_no)?, "exception count", line_no)?;
    let checksum_text = parse_kv(fields[2], "checksum", line_no)?;
    let checksum = u64::from_str_radix(checksum_text, 16).map_err(|_| {
        SearchError::MalformedCheckpoint(format!("line {line_no}: bad checksum `{checksum_text}`"))
    })?;
    let suffix = (header.m - header.prefix_len) as u32;
    Ok(ChunkRecord {
        prefix,
        total: u128::from(header.p).pow(suffix),
        exceptions,
        checksum,
    })
}

/// Parsed checkpoint: the pinned geometry plus finished chunks keyed by
/// prefix.
#[derive(Debug)]
pub struct Checkpoint {
    pub header: CheckpointHeader,
    pub chunks: BTreeMap<Vec<u64>, ChunkRecord>,
}

/// Reads a checkpoint file, tolerating exactly one torn trailing line.
///
/// Duplicate chunk lines must agree with each other; disagreeing duplicates
/// mean two different sweeps wrote into the same file, which is refused as
/// [`SearchError::ChunkOverlap`].
pub fn read_checkpoint(path: &Path) -> Result<Checkpoint, SearchError> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    // A process killed mid-write leaves an unterminated final line; drop it.
    let complete = match text.rfind('\n') {
        Some(end) => &text[..=end],
        None => "",
    };
    let mut lines = complete
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (first_no, first) = lines.next().ok_or_else(|| {
        SearchError::MalformedCheckpoint("checkpoint file has no complete header line".into())
    })?;
    let header = parse_header(first, first_no)?;
    let mut chunks = BTreeMap::new();
    for (line_no, line) in lines {
        let record = parse_record(line, line_no, &header)?;
        if let Some(previous) = chunks.get(&record.prefix) {
            if *previous != record {
                return Err(SearchError::ChunkOverlap(format!(
                    "chunk {} recorded twice with different results",
                    format_digits(&record.prefix)
                )));
            }
            continue;
        }
        chunks.insert(record.prefix.clone(), record);
    }
    Ok(Checkpoint { header, chunks })
}

/// Append-only checkpoint writer; every record is flushed to the OS before
/// `append` returns, so a kill loses at most the line being written.
pub struct CheckpointWriter {
    out: BufWriter<File>,
}

impl CheckpointWriter {
    /// Opens `path` for appending, writing the header first when the file
    /// is new or empty.
    pub fn open(path: &Path, header: CheckpointHeader) -> Result<Self, SearchError> {
        let file = File::options().create(true).append(true).open(path)?;
        let need_header = file.metadata()?.len() == 0;
        let mut out = BufWriter::new(file);
        if need_header {
            writeln!(out, "{}", header.to_line())?;
            out.flush()?;
        }
        Ok(CheckpointWriter { out })
    }

    pub fn append(&mut self, record: &ChunkRecord) -> Result<(), SearchError> {
        writeln!(self.out, "{}", record_line(record))?;
        self.out.flush()?;
        Ok(())
    }
}
