//! Shard files and the manifest.
//!
//! A shard is `header || payload || crc32(payload)`. The header is 55 bytes,
//! all integers little-endian:
//!
//! | offset | size | field |
//! |-------:|-----:|-------|
//! | 0  | 4 | magic `RFC1` |
//! | 4  | 1 | version (1) |
//! | 5  | 1 | field width m |
//! | 6  | 4 | reduction polynomial |
//! | 10 | 4 | k |
//! | 14 | 4 | c numerator |
//! | 18 | 4 | c denominator |
//! | 22 | 1 | log base (0 natural, 1 base 2) |
//! | 23 | 8 | master seed |
//! | 31 | 8 | column index |
//! | 39 | 4 | symbol size |
//! | 43 | 8 | original file length |
//! | 51 | 4 | crc32 of bytes 0..51 |

use std::fmt::Write as _;

use rfc_core::{CodeConfig, ColumnId, FieldSpec, LogBase, Ratio};

pub const MAGIC: [u8; 4] = *b"RFC1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 55;
pub const MANIFEST_NAME: &str = "manifest.txt";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("truncated: {0} bytes")]
    Truncated(usize),
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("header checksum mismatch")]
    HeaderCrc,
    #[error("payload checksum mismatch")]
    PayloadCrc,
    #[error("invalid header: {0}")]
    Invalid(String),
    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShardHeader {
    pub field_m: u8,
    pub reduction_poly: u32,
    pub k: u32,
    pub c_numerator: u32,
    pub c_denominator: u32,
    pub log_base: u8,
    pub master_seed: u64,
    pub column_index: u64,
    pub symbol_size: u32,
    pub original_file_len: u64,
}

impl ShardHeader {
    pub fn new(cfg: &CodeConfig, id: ColumnId, symbol_size: u32, original_file_len: u64) -> Self {
        Self {
            field_m: cfg.field().m(),
            reduction_poly: cfg.field().reduction_poly(),
            k: cfg.k(),
            c_numerator: cfg.c().numerator,
            c_denominator: cfg.c().denominator,
            log_base: cfg.log_base().code(),
            master_seed: cfg.master_seed(),
            column_index: id.0,
            symbol_size,
            original_file_len,
        }
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[0..4].copy_from_slice(&MAGIC);
        b[4] = VERSION;
        b[5] = self.field_m;
        b[6..10].copy_from_slice(&self.reduction_poly.to_le_bytes());
        b[10..14].copy_from_slice(&self.k.to_le_bytes());
        b[14..18].copy_from_slice(&self.c_numerator.to_le_bytes());
        b[18..22].copy_from_slice(&self.c_denominator.to_le_bytes());
        b[22] = self.log_base;
        b[23..31].copy_from_slice(&self.master_seed.to_le_bytes());
        b[31..39].copy_from_slice(&self.column_index.to_le_bytes());
        b[39..43].copy_from_slice(&self.symbol_size.to_le_bytes());
        b[43..51].copy_from_slice(&self.original_file_len.to_le_bytes());
        let crc = crc32fast::hash(&b[..51]);
        b[51..55].copy_from_slice(&crc.to_le_bytes());
        b
    }

    /// Parses and validates the first [`HEADER_LEN`] bytes of `bytes`.
    pub fn parse(bytes: &[u8]) -> Result<Self, FormatError> {
        if bytes.len() < HEADER_LEN {
            return Err(FormatError::Truncated(bytes.len()));
        }
        let b = &bytes[..HEADER_LEN];
        if b[0..4] != MAGIC {
            return Err(FormatError::BadMagic);
        }
        if u32::from_le_bytes(b[51..55].try_into().unwrap()) != crc32fast::hash(&b[..51]) {
            return Err(FormatError::HeaderCrc);
        }
        if b[4] != VERSION {
            return Err(FormatError::UnsupportedVersion(b[4]));
        }
        let u32_at = |o: usize| u32::from_le_bytes(b[o..o + 4].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(b[o..o + 8].try_into().unwrap());
        let h = Self {
            field_m: b[5],
            reduction_poly: u32_at(6),
            k: u32_at(10),
            c_numerator: u32_at(14),
            c_denominator: u32_at(18),
            log_base: b[22],
            master_seed: u64_at(23),
            column_index: u64_at(31),
            symbol_size: u32_at(39),
            original_file_len: u64_at(43),
        };
        h.validate()?;
        Ok(h)
    }

    fn validate(&self) -> Result<(), FormatError> {
        let invalid = |m: &str| Err(FormatError::Invalid(m.into()));
        if self.c_denominator == 0 {
            return invalid("c denominator is zero");
        }
        if self.field_m != 8 && self.field_m != 16 {
            return invalid("field width must be 8 or 16");
        }
        if !self.symbol_size.is_multiple_of(u32::from(self.field_m / 8)) {
            return invalid("symbol size is not a multiple of the element size");
        }
        if LogBase::from_code(self.log_base).is_none() {
            return invalid("unknown log base");
        }
        if self.original_file_len > u64::from(self.k) * u64::from(self.symbol_size) {
            return invalid("file length exceeds block capacity");
        }
        Ok(())
    }

    pub fn code_config(&self) -> Result<CodeConfig, FormatError> {
        let field = FieldSpec::new(self.field_m, self.reduction_poly).map_err(|e| FormatError::Invalid(e.to_string()))?;
        let log_base = LogBase::from_code(self.log_base).ok_or_else(|| FormatError::Invalid("unknown log base".into()))?;
        CodeConfig::new(
            self.k,
            Ratio::new(self.c_numerator, self.c_denominator),
            field,
            self.master_seed,
            log_base,
        )
        .map_err(|e| FormatError::Invalid(e.to_string()))
    }

    /// True when both headers describe the same code and file.
    pub fn same_code(&self, other: &Self) -> bool {
        Self {
            column_index: 0,
            ..*self
        } == Self {
            column_index: 0,
            ..*other
        }
    }

    pub fn column(&self) -> ColumnId {
        ColumnId(self.column_index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shard {
    pub header: ShardHeader,
    pub payload: Vec<u8>,
}

impl Shard {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len() + 4);
        out.extend_from_slice(&self.header.to_bytes());
        out.extend_from_slice(&self.payload);
        out.extend_from_slice(&crc32fast::hash(&self.payload).to_le_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, FormatError> {
        let header = ShardHeader::parse(bytes)?;
        let len = header.symbol_size as usize;
        if bytes.len() != HEADER_LEN + len + 4 {
            return Err(FormatError::Truncated(bytes.len()));
        }
        let payload = &bytes[HEADER_LEN..HEADER_LEN + len];
        let crc = u32::from_le_bytes(bytes[HEADER_LEN + len..].try_into().unwrap());
        if crc != crc32fast::hash(payload) {
            return Err(FormatError::PayloadCrc);
        }
        Ok(Self {
            header,
            payload: payload.to_vec(),
        })
    }

    pub fn file_name(index: u64) -> String {
        format!("shard_{index}.rfc")
    }

    /// Index from a `shard_{index}.rfc` file name.
    pub fn index_from_name(name: &str) -> Option<u64> {
        name.strip_prefix("shard_")?.strip_suffix(".rfc")?.parse().ok()
    }
}

/// `name,index,len,crc32hex`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestLine {
    pub name: String,
    pub column_index: u64,
    pub payload_len: usize,
    pub payload_crc32: u32,
}

impl ManifestLine {
    pub fn for_shard(shard: &Shard) -> Self {
        Self {
            name: Shard::file_name(shard.header.column_index),
            column_index: shard.header.column_index,
            payload_len: shard.payload.len(),
            payload_crc32: crc32fast::hash(&shard.payload),
        }
    }
}

pub fn render_manifest(lines: &[ManifestLine]) -> String {
    let mut out = String::new();
    for l in lines {
        writeln!(out, "{},{},{},{:08x}", l.name, l.column_index, l.payload_len, l.payload_crc32).unwrap();
    }
    out
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestLine>, FormatError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let err = |reason: &str| FormatError::Manifest {
                line: i + 1,
                reason: reason.into(),
            };
            let parts: Vec<&str> = l.split(',').collect();
            let [name, index, len, crc] = parts[..] else {
                return Err(err("expected 4 fields"));
            };
            Ok(ManifestLine {
                name: name.to_string(),
                column_index: index.parse().map_err(|_| err("bad index"))?,
                payload_len: len.parse().map_err(|_| err("bad length"))?,
                payload_crc32: u32::from_str_radix(crc, 16).map_err(|_| err("bad crc"))?,
            })
        })
        .collect()
}
