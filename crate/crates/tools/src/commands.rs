//! File-level encode, decode and repair.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use rfc_core::codec::{decode, CodecError, DecodeReport, EncodedSymbol, Encoder, SourceBlock};
use rfc_core::code::ConfigWarning;
use rfc_core::repair::{execute_repair, plan_repair, CountingSource, RepairError, RepairPlan, SymbolSource};
use rfc_core::{Code, CodeConfig, ColumnId, FieldSpec, LogBase, Ratio};

use crate::shard::{parse_manifest, render_manifest, FormatError, ManifestLine, Shard, ShardHeader, HEADER_LEN, MANIFEST_NAME};

#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error("corrupt shard {}: payload checksum mismatch", .0.display())]
    CorruptShard(PathBuf),
    #[error("shard {} does not match the other shards' code parameters", .0.display())]
    HeaderMismatch(PathBuf),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("no shards found")]
    NoShards,
    #[error(transparent)]
    Decode(#[from] CodecError),
    #[error(transparent)]
    Repair(#[from] RepairError),
}

impl ToolError {
    /// 2 when the erasure pattern is unlucky, 3 when files or arguments are broken.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Decode(CodecError::RankDeficient { .. } | CodecError::NotEnoughSymbols { .. }) => 2,
            Self::Repair(RepairError::NoLocalGroup(_) | RepairError::MissingFootprintSymbol(_)) => 2,
            _ => 3,
        }
    }

    /// Decode report, when decoding ran and failed.
    pub fn report(&self) -> Option<&DecodeReport> {
        match self {
            Self::Decode(CodecError::RankDeficient { report, .. }) => Some(report),
            _ => None,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ToolError + '_ {
    move |source| ToolError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone)]
pub struct EncodeOptions {
    pub k: u32,
    pub rate: f64,
    pub c: Ratio,
    pub seed: u64,
    pub field: FieldSpec,
    pub log_base: LogBase,
    pub out_dir: PathBuf,
    /// Append this many new shards after the highest index in the manifest.
    pub extend: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct EncodeSummary {
    pub config: CodeConfig,
    pub symbol_size: usize,
    pub written: Vec<u64>,
    pub warnings: Vec<ConfigWarning>,
}

/// Smallest multiple of the element size holding `len / k` bytes (at least one element).
pub fn symbol_size_for(len: usize, k: u32, field: FieldSpec) -> usize {
    let eb = field.element_bytes();
    let raw = len.div_ceil(k as usize).max(1);
    raw.div_ceil(eb) * eb
}

pub fn encode_file(input: &Path, opts: &EncodeOptions) -> Result<EncodeSummary, ToolError> {
    let data = fs::read(input).map_err(io_err(input))?;
    encode_bytes(&data, opts)
}

pub fn encode_bytes(data: &[u8], opts: &EncodeOptions) -> Result<EncodeSummary, ToolError> {
    let cfg = CodeConfig::new(opts.k, opts.c, opts.field, opts.seed, opts.log_base)
        .map_err(|e| ToolError::ConfigInvalid(e.to_string()))?;
    if !(opts.rate > 0.0 && opts.rate <= 1.0) {
        return Err(ToolError::ConfigInvalid(format!("rate {} outside (0, 1]", opts.rate)));
    }
    let code = Code::new(cfg);
    let symbol_size = symbol_size_for(data.len(), opts.k, opts.field);
    let block = SourceBlock::from_bytes(data, opts.k as usize, symbol_size)?;
    let encoder = Encoder::new(&code, &block)?;
    let header_for = |id: ColumnId| ShardHeader::new(&cfg, id, symbol_size as u32, data.len() as u64);

    fs::create_dir_all(&opts.out_dir).map_err(io_err(&opts.out_dir))?;
    let manifest_path = opts.out_dir.join(MANIFEST_NAME);
    let (range, mut manifest) = match opts.extend {
        None => (0..crate::sim::encoded_count(opts.k, opts.rate) as u64, Vec::new()),
        Some(count) => {
            let text = fs::read_to_string(&manifest_path).map_err(io_err(&manifest_path))?;
            let lines = parse_manifest(&text).map_err(|source| ToolError::Format {
                path: manifest_path.clone(),
                source,
            })?;
            let Some(last) = lines.iter().max_by_key(|l| l.column_index) else {
                return Err(ToolError::NoShards);
            };
            let existing = opts.out_dir.join(&last.name);
            let header = read_header(&existing)?;
            if !header.same_code(&header_for(ColumnId(0))) {
                return Err(ToolError::HeaderMismatch(existing));
            }
            let next = last.column_index + 1;
            (next..next + count, lines)
        }
    };

    let mut written = Vec::new();
    for index in range {
        let id = ColumnId(index);
        let shard = Shard {
            header: header_for(id),
            payload: encoder.symbol(id).payload,
        };
        let path = opts.out_dir.join(Shard::file_name(index));
        fs::write(&path, shard.to_bytes()).map_err(io_err(&path))?;
        manifest.push(ManifestLine::for_shard(&shard));
        written.push(index);
    }
    fs::write(&manifest_path, render_manifest(&manifest)).map_err(io_err(&manifest_path))?;
    Ok(EncodeSummary {
        config: cfg,
        symbol_size,
        written,
        warnings: cfg.warnings(),
    })
}

fn read_header(path: &Path) -> Result<ShardHeader, ToolError> {
    let mut buf = [0u8; HEADER_LEN];
    let mut f = fs::File::open(path).map_err(io_err(path))?;
    f.read_exact(&mut buf).map_err(io_err(path))?;
    ShardHeader::parse(&buf).map_err(|source| ToolError::Format {
        path: path.to_path_buf(),
        source,
    })
}

fn read_shard(path: &Path) -> Result<Shard, ToolError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    Shard::parse(&bytes).map_err(|source| match source {
        FormatError::PayloadCrc => ToolError::CorruptShard(path.to_path_buf()),
        source => ToolError::Format {
            path: path.to_path_buf(),
            source,
        },
    })
}

/// Shard files named by `inputs`; directories contribute their `*.rfc` files.
pub fn collect_shard_paths(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, ToolError> {
    let mut paths = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(input)
                .map_err(io_err(input))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|e| e == "rfc"))
                .collect();
            found.sort();
            paths.extend(found);
        } else {
            paths.push(input.clone());
        }
    }
    Ok(paths)
}

#[derive(Debug, Clone)]
pub struct DecodeSummary {
    pub report: DecodeReport,
    pub shards_read: usize,
    pub bytes_written: u64,
}

pub fn decode_files(inputs: &[PathBuf], out: &Path) -> Result<DecodeSummary, ToolError> {
    let (bytes, report, shards_read) = decode_to_bytes(inputs)?;
    fs::write(out, &bytes).map_err(io_err(out))?;
    Ok(DecodeSummary {
        report,
        shards_read,
        bytes_written: bytes.len() as u64,
    })
}

/// Reads, cross-checks and decodes shards; returns the original file bytes.
pub fn decode_to_bytes(inputs: &[PathBuf]) -> Result<(Vec<u8>, DecodeReport, usize), ToolError> {
    let paths = collect_shard_paths(inputs)?;
    let mut shards: Vec<Shard> = Vec::with_capacity(paths.len());
    let mut first: Option<ShardHeader> = None;
    for path in &paths {
        let shard = read_shard(path)?;
        match first {
            None => first = Some(shard.header),
            Some(h) if !h.same_code(&shard.header) => return Err(ToolError::HeaderMismatch(path.clone())),
            _ => {}
        }
        shards.push(shard);
    }
    let header = first.ok_or(ToolError::NoShards)?;
    let cfg = header.code_config().map_err(|e| ToolError::ConfigInvalid(e.to_string()))?;
    shards.sort_by_key(|s| s.header.column_index);
    shards.dedup_by_key(|s| s.header.column_index);
    let shards_read = shards.len();
    let received: Vec<EncodedSymbol> = shards
        .into_iter()
        .map(|s| EncodedSymbol::new(s.header.column(), s.payload))
        .collect();
    let code = Code::new(cfg);
    let decoded = decode(&code, &received)?;
    let mut bytes = decoded.block.to_bytes();
    bytes.truncate(header.original_file_len as usize);
    Ok((bytes, decoded.report, shards_read))
}

/// Reads whole shard files from a directory, checking them against a header.
struct DirSource {
    dir: PathBuf,
    expected: ShardHeader,
    error: Option<ToolError>,
}

impl SymbolSource for DirSource {
    fn fetch(&mut self, id: ColumnId) -> Option<Vec<u8>> {
        let path = self.dir.join(Shard::file_name(id.0));
        let result = read_shard(&path).and_then(|s| {
            if s.header.same_code(&self.expected) && s.header.column_index == id.0 {
                Ok(s.payload)
            } else {
                Err(ToolError::HeaderMismatch(path))
            }
        });
        match result {
            Ok(p) => Some(p),
            Err(e) => {
                self.error.get_or_insert(e);
                None
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RepairSummary {
    pub plan: RepairPlan,
    /// Shard payloads read to rebuild the target.
    pub reads: usize,
    pub path: PathBuf,
}

/// Rebuilds shard `target` in `dir` from one local group.
///
/// Shard presence is taken from file names and the code parameters from one
/// header; only the shards of the chosen group are read in full.
pub fn repair_shard(dir: &Path, target: u64, out: Option<&Path>) -> Result<RepairSummary, ToolError> {
    let mut present: Vec<ColumnId> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok())
        .filter_map(|e| Shard::index_from_name(e.file_name().to_str()?))
        .filter(|&i| i != target)
        .map(ColumnId)
        .collect();
    present.sort_unstable();
    let first = present.first().ok_or(ToolError::NoShards)?;
    let header = read_header(&dir.join(Shard::file_name(first.0)))?;
    let cfg = header.code_config().map_err(|e| ToolError::ConfigInvalid(e.to_string()))?;
    let code = Code::new(cfg);

    let plan = plan_repair(&code, ColumnId(target), &present)?;
    let mut source = CountingSource::new(DirSource {
        dir: dir.to_path_buf(),
        expected: header,
        error: None,
    });
    let result = execute_repair(&code, &plan, &mut source);
    let reads = source.reads();
    let inner = source.into_inner();
    if let Some(e) = inner.error {
        return Err(e);
    }
    let payload = result?;
    let shard = Shard {
        header: ShardHeader {
            column_index: target,
            ..header
        },
        payload,
    };
    let path = out.map_or_else(|| dir.join(Shard::file_name(target)), Path::to_path_buf);
    fs::write(&path, shard.to_bytes()).map_err(io_err(&path))?;
    Ok(RepairSummary { plan, reads, path })
}
