//! Versioned binary persistence for semantic spaces, plus a JSON export
//! mirror for debugging.
//!
//! Layout (all integers little-endian, fixed width):
//!
//! ```text
//! magic            8 bytes  "PRISPACE"
//! format_version   u16
//! checksum         u32      CRC32 (IEEE) of the body
//! body_len         u64      body size in bytes
//! body:
//!   dim            u64
//!   strategy_tag   u8       0 one-hot, 1 random-placement, 2 half-split
//!   rspec_len      u32      0 for one-hot
//!     r            u32      per entry, ascending
//!     weight_num   u64
//!     weight_den   u64
//!   window         u32
//!   seed           u64
//!   slice_label    u32 length + UTF-8 bytes
//!   total_tokens   u64
//!   word_count     u64
//!   per word:
//!     word         u32 length + UTF-8 bytes
//!     frequency    u64
//!     entry_count  u32
//!       index      u32      per entry, ascending
//!       sign       i8
//!     counts       dim * i64
//! ```
//!
//! A short file is reported as truncation, a wrong body digest as a
//! checksum failure, and an unknown version names both versions.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::ri::{ContextVector, GenStrategy, RSpec, SemanticVector};
use crate::space::{SemanticSpace, SpaceConfig, SpaceError};

const MAGIC: &[u8; 8] = b"PRISPACE";
pub const FORMAT_VERSION: u16 = 1;
const HEADER_LEN: usize = 8 + 2 + 4 + 8;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("not a space file (bad magic)")]
    BadMagic,
    #[error("unsupported format version {found} (this build reads version {supported})")]
    VersionMismatch { found: u16, supported: u16 },
    #[error("checksum mismatch: header says {expected:#010x}, body hashes to {actual:#010x}")]
    ChecksumMismatch { expected: u32, actual: u32 },
    #[error("file truncated")]
    Truncated,
    #[error("corrupt field: {0}")]
    Corrupt(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

pub fn persist(space: &SemanticSpace, path: &Path) -> Result<(), FormatError> {
    let bytes = to_bytes(space);
    let mut file = fs::File::create(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(&bytes).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load(path: &Path) -> Result<SemanticSpace, FormatError> {
    let bytes = fs::read(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    from_bytes(&bytes)
}

pub fn to_bytes(space: &SemanticSpace) -> Vec<u8> {
    let mut body = Vec::new();
    let config = space.config();
    body.extend((config.dim as u64).to_le_bytes());
    let (tag, rspec) = match &config.strategy {
        GenStrategy::OneHot => (0u8, None),
        GenStrategy::RandomPlacement(s) => (1u8, Some(s)),
        GenStrategy::HalfSplit(s) => (2u8, Some(s)),
    };
    body.push(tag);
    match rspec {
        None => body.extend(0u32.to_le_bytes()),
        Some(spec) => {
            body.extend((spec.entries().len() as u32).to_le_bytes());
            for &(r, w) in spec.entries() {
                body.extend(r.to_le_bytes());
                body.extend(w.numer().to_le_bytes());
                body.extend(w.denom().to_le_bytes());
            }
        }
    }
    body.extend((config.window as u32).to_le_bytes());
    body.extend(config.seed.to_le_bytes());
    write_str(&mut body, space.slice_label());
    body.extend(space.total_tokens().to_le_bytes());
    body.extend((space.len() as u64).to_le_bytes());
    for word in space.words() {
        write_str(&mut body, word);
        body.extend(space.frequency(word).to_le_bytes());
        let cv = space.context_vector(word).expect("word present");
        body.extend((cv.entries().len() as u32).to_le_bytes());
        for &(i, s) in cv.entries() {
            body.extend(i.to_le_bytes());
            body.push(s as u8);
        }
        let sv = space.semantic_vector(word).expect("word present");
        for &c in sv.counts() {
            body.extend(c.to_le_bytes());
        }
    }

    let checksum = crc32fast::hash(&body);
    let mut out = Vec::with_capacity(HEADER_LEN + body.len());
    out.extend(MAGIC);
    out.extend(FORMAT_VERSION.to_le_bytes());
    out.extend(checksum.to_le_bytes());
    out.extend((body.len() as u64).to_le_bytes());
    out.extend(body);
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<SemanticSpace, FormatError> {
    if bytes.len() < HEADER_LEN {
        if bytes.len() >= 8 && &bytes[..8] != MAGIC {
            return Err(FormatError::BadMagic);
        }
        return Err(FormatError::Truncated);
    }
    if &bytes[..8] != MAGIC {
        return Err(FormatError::BadMagic);
    }
    let version = u16::from_le_bytes([bytes[8], bytes[9]]);
    if version != FORMAT_VERSION {
        return Err(FormatError::VersionMismatch {
            found: version,
            supported: FORMAT_VERSION,
        });
    }
    let expected = u32::from_le_bytes([bytes[10], bytes[11], bytes[12], bytes[13]]);
    let body_len = u64::from_le_bytes(bytes[14..22].try_into().unwrap()) as usize;
    let body = &bytes[HEADER_LEN..];
    if body.len() < body_len {
        return Err(FormatError::Truncated);
    }
    let body = &body[..body_len];
    let actual = crc32fast::hash(body);
    if actual != expected {
        return Err(FormatError::ChecksumMismatch { expected, actual });
    }

    let mut r = Reader { body, pos: 0 };
    let dim = r.u64()? as usize;
    let tag = r.u8()?;
    let rspec_len = r.u32()? as usize;
    let mut entries = Vec::with_capacity(rspec_len);
    for _ in 0..rspec_len {
        let rv = r.u32()?;
        let num = r.u64()?;
        let den = r.u64()?;
        if den == 0 {
            return Err(FormatError::Corrupt("zero weight denominator".into()));
        }
        entries.push((rv, Ratio::new(num, den)));
    }
    let strategy = match (tag, entries.is_empty()) {
        (0, true) => GenStrategy::OneHot,
        (1, false) => GenStrategy::RandomPlacement(rspec(entries)?),
        (2, false) => GenStrategy::HalfSplit(rspec(entries)?),
        _ => return Err(FormatError::Corrupt(format!("strategy tag {tag}"))),
    };
    let window = r.u32()? as usize;
    let seed = r.u64()?;
    let slice_label = r.string()?;
    let total_tokens = r.u64()?;
    let word_count = r.u64()? as usize;

    let mut words = Vec::with_capacity(word_count);
    let mut context = Vec::with_capacity(word_count);
    let mut semantic = Vec::with_capacity(word_count);
    let mut frequency = Vec::with_capacity(word_count);
    for _ in 0..word_count {
        words.push(r.string()?);
        frequency.push(r.u64()?);
        let entry_count = r.u32()? as usize;
        let mut cv_entries = Vec::with_capacity(entry_count);
        for _ in 0..entry_count {
            let idx = r.u32()?;
            let sign = r.u8()? as i8;
            cv_entries.push((idx, sign));
        }
        context.push(
            ContextVector::new(dim, cv_entries).map_err(|e| FormatError::Corrupt(e.to_string()))?,
        );
        let mut counts = Vec::with_capacity(dim);
        for _ in 0..dim {
            counts.push(r.i64()?);
        }
        semantic.push(SemanticVector::from_counts(counts));
    }
    if r.pos != body.len() {
        return Err(FormatError::Corrupt("trailing bytes in body".into()));
    }

    let config = SpaceConfig {
        dim,
        strategy,
        window,
        seed,
    };
    Ok(SemanticSpace::from_parts(
        config,
        slice_label,
        words,
        context,
        semantic,
        frequency,
        total_tokens,
    )?)
}

fn rspec(entries: Vec<(u32, Ratio<u64>)>) -> Result<RSpec, FormatError> {
    RSpec::weighted(entries).map_err(|e| FormatError::Corrupt(e.to_string()))
}

fn write_str(out: &mut Vec<u8>, s: &str) {
    out.extend((s.len() as u32).to_le_bytes());
    out.extend(s.as_bytes());
}

struct Reader<'a> {
    body: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], FormatError> {
        if self.pos + n > self.body.len() {
            return Err(FormatError::Truncated);
        }
        let s = &self.body[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, FormatError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64, FormatError> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String, FormatError> {
        let len = self.u32()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec())
            .map_err(|_| FormatError::Corrupt("invalid UTF-8 string".into()))
    }
}

#[derive(Serialize)]
struct JsonWord<'a> {
    context: String,
    semantic: &'a [i64],
    frequency: u64,
}

#[derive(Serialize)]
struct JsonSpace<'a> {
    format_version: u16,
    slice_label: &'a str,
    dim: usize,
    strategy: String,
    window: usize,
    seed: u64,
    total_tokens: u64,
    words: BTreeMap<&'a str, JsonWord<'a>>,
}

/// Human-readable JSON mirror of a space, for debugging and diffing.
pub fn to_json_string(space: &SemanticSpace) -> String {
    let words = space
        .words()
        .iter()
        .map(|w| {
            (
                w.as_str(),
                JsonWord {
                    context: space.context_vector(w).expect("word present").to_string(),
                    semantic: space.semantic_vector(w).expect("word present").counts(),
                    frequency: space.frequency(w),
                },
            )
        })
        .collect();
    let mirror = JsonSpace {
        format_version: FORMAT_VERSION,
        slice_label: space.slice_label(),
        dim: space.config().dim,
        strategy: space.config().strategy.to_string(),
        window: space.config().window,
        seed: space.config().seed,
        total_tokens: space.total_tokens(),
        words,
    };
    serde_json::to_string_pretty(&mirror).expect("serializable mirror")
}

pub fn export_json(space: &SemanticSpace, path: &Path) -> Result<(), FormatError> {
    fs::write(path, to_json_string(space)).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}
