//! Encoding payloads and maximum-likelihood decoding from any subset of
//! encoded symbols.
//!
//! A payload of `symbol_size` bytes is a vector of field elements (one per
//! byte for GF(2^8), little-endian pairs for GF(2^16)). Decoding factorizes
//! the received columns once and applies the row operations to every payload
//! position together.

use alloc::vec;
use core::borrow::Borrow;
use alloc::vec::Vec;

use crate::code::{Code, Column, ColumnId};
use crate::galois::Field;
use crate::linalg::{GfMatrix, Insert, RowEchelon};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("source block has {got} symbols, code expects {expected}")]
    BlockSize { got: usize, expected: usize },
    #[error("symbol size {0} is not a multiple of the field element size")]
    SymbolSize(usize),
    #[error("source symbols have unequal lengths")]
    RaggedBlock,
    #[error("need at least {need} symbols, got {have}")]
    NotEnoughSymbols { have: usize, need: usize },
    #[error("symbol {id} has payload length {len}, expected {expected}")]
    MalformedSymbol { id: ColumnId, len: usize, expected: usize },
    #[error("symbol {0} received more than once")]
    DuplicateSymbol(ColumnId),
    #[error("received symbols do not determine the block: rank {rank} of {k}")]
    RankDeficient { rank: usize, k: usize, report: DecodeReport },
}

/// The k source symbols of one block, all `symbol_size` bytes long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceBlock {
    symbol_size: usize,
    symbols: Vec<Vec<u8>>,
}

impl SourceBlock {
    pub fn new(symbols: Vec<Vec<u8>>) -> Result<Self, CodecError> {
        let symbol_size = symbols.first().map_or(0, Vec::len);
        if symbols.iter().any(|s| s.len() != symbol_size) {
            return Err(CodecError::RaggedBlock);
        }
        Ok(Self { symbol_size, symbols })
    }

    /// Splits `data` into `k` symbols of `symbol_size` bytes, zero-padding the tail.
    pub fn from_bytes(data: &[u8], k: usize, symbol_size: usize) -> Result<Self, CodecError> {
        if data.len() > k * symbol_size {
            return Err(CodecError::SymbolSize(symbol_size));
        }
        let symbols = (0..k)
            .map(|i| {
                let mut s = vec![0u8; symbol_size];
                let start = (i * symbol_size).min(data.len());
                let end = ((i + 1) * symbol_size).min(data.len());
                s[..end - start].copy_from_slice(&data[start..end]);
                s
            })
            .collect();
        Ok(Self { symbol_size, symbols })
    }

    pub fn k(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol_size(&self) -> usize {
        self.symbol_size
    }

    pub fn symbols(&self) -> &[Vec<u8>] {
        &self.symbols
    }

    pub fn symbol(&self, row: usize) -> &[u8] {
        &self.symbols[row]
    }

    /// Concatenation of all symbols.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.symbols.concat()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedSymbol {
    pub id: ColumnId,
    pub payload: Vec<u8>,
}

impl EncodedSymbol {
    pub fn new(id: ColumnId, payload: Vec<u8>) -> Self {
        Self { id, payload }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Success,
    /// `rank` is the rank of the received columns; `missing_rows` are rows left
    /// without a pivot.
    RankDeficient { rank: usize, missing_rows: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport {
    pub outcome: DecodeOutcome,
    /// Symbols consumed before the solve completed or input ran out.
    pub symbols_used: usize,
    /// Rows fixed directly by a received systematic symbol.
    pub peel_count: usize,
    /// Number of unknowns left for dense elimination.
    pub elimination_dim: usize,
}

impl DecodeReport {
    pub fn is_success(&self) -> bool {
        self.outcome == DecodeOutcome::Success
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Resolve rows from systematic symbols before elimination.
    pub peel: bool,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        Self { peel: true }
    }
}

/// Encoder over one source block; caches the block as field elements.
pub struct Encoder<'a> {
    code: &'a Code,
    block: &'a SourceBlock,
    elements: Vec<Vec<u16>>,
}

impl<'a> Encoder<'a> {
    pub fn new(code: &'a Code, block: &'a SourceBlock) -> Result<Self, CodecError> {
        check_block(code, block)?;
        let field = code.field();
        let elements = block.symbols.iter().map(|s| field.bytes_to_elements(s)).collect();
        Ok(Self { code, block, elements })
    }

    /// Encoded symbol `id`: the source symbol itself when systematic, otherwise
    /// the parity's linear combination taken element-wise.
    pub fn symbol(&self, id: ColumnId) -> EncodedSymbol {
        let payload = match self.code.column(id) {
            Column::Systematic(row) => self.block.symbols[row as usize].clone(),
            Column::Parity(p) => {
                let field = self.code.field();
                let mut acc = vec![0u16; self.elements.first().map_or(0, Vec::len)];
                for &(row, coeff) in p.entries() {
                    field.mul_add_slice(&mut acc, &self.elements[row as usize], coeff);
                }
                field.elements_to_bytes(&acc)
            }
        };
        EncodedSymbol::new(id, payload)
    }
}

fn check_block(code: &Code, block: &SourceBlock) -> Result<(), CodecError> {
    if block.k() != code.k() as usize {
        return Err(CodecError::BlockSize {
            got: block.k(),
            expected: code.k() as usize,
        });
    }
    if !block.symbol_size.is_multiple_of(code.field().spec().element_bytes()) {
        return Err(CodecError::SymbolSize(block.symbol_size));
    }
    Ok(())
}

pub fn encode_symbol(code: &Code, block: &SourceBlock, id: ColumnId) -> Result<EncodedSymbol, CodecError> {
    Ok(Encoder::new(code, block)?.symbol(id))
}

/// The k x |ids| submatrix of `G` for the given columns.
pub fn assemble_matrix(code: &Code, ids: &[ColumnId]) -> GfMatrix {
    let k = code.k() as usize;
    let mut m = GfMatrix::zeros(k, ids.len());
    for (j, &id) in ids.iter().enumerate() {
        for (row, coeff) in code.column(id).entries() {
            m.set(row as usize, j, coeff);
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub block: SourceBlock,
    pub report: DecodeReport,
}

pub fn decode(code: &Code, received: &[EncodedSymbol]) -> Result<Decoded, CodecError> {
    decode_with(code, received, DecodeOptions::default())
}

pub fn decode_with(code: &Code, received: &[EncodedSymbol], opts: DecodeOptions) -> Result<Decoded, CodecError> {
    let k = code.k() as usize;
    if received.len() < k {
        return Err(CodecError::NotEnoughSymbols {
            have: received.len(),
            need: k,
        });
    }
    let mut ids: Vec<ColumnId> = received.iter().map(|s| s.id).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(CodecError::DuplicateSymbol(w[0]));
    }
    let symbol_size = received[0].payload.len();
    if let Some(bad) = received.iter().find(|s| s.payload.len() != symbol_size) {
        return Err(CodecError::MalformedSymbol {
            id: bad.id,
            len: bad.payload.len(),
            expected: symbol_size,
        });
    }
    let columns: Vec<Column> = received.iter().map(|s| code.column(s.id)).collect();
    let payloads: Vec<&[u8]> = received.iter().map(|s| s.payload.as_slice()).collect();
    let (rows, report) = decode_columns(code.field(), code.k(), &columns, &payloads, symbol_size, opts)?;
    let symbols = rows.iter().map(|r| code.field().elements_to_bytes(r)).collect();
    Ok(Decoded {
        block: SourceBlock { symbol_size, symbols },
        report,
    })
}

/// Decodes from explicit columns. `payloads[i]` belongs to `columns[i]`, each
/// `symbol_size` bytes (zero for a rank-only check). Returns the k source
/// symbols as field elements.
pub fn decode_columns<C: Borrow<Column>>(
    field: &Field,
    k: u32,
    columns: &[C],
    payloads: &[&[u8]],
    symbol_size: usize,
    opts: DecodeOptions,
) -> Result<(Vec<Vec<u16>>, DecodeReport), CodecError> {
    assert_eq!(columns.len(), payloads.len());
    let k = k as usize;
    if columns.len() < k {
        return Err(CodecError::NotEnoughSymbols {
            have: columns.len(),
            need: k,
        });
    }
    let eb = field.spec().element_bytes();
    if !symbol_size.is_multiple_of(eb) {
        return Err(CodecError::SymbolSize(symbol_size));
    }
    let width = symbol_size / eb;

    // Phase 1: systematic symbols fix their rows.
    let mut known: Vec<Option<Vec<u16>>> = vec![None; k];
    let mut peel_count = 0;
    if opts.peel {
        for (col, payload) in columns.iter().zip(payloads) {
            if let Column::Systematic(row) = col.borrow() {
                let slot = &mut known[*row as usize];
                if slot.is_none() {
                    *slot = Some(field.bytes_to_elements(payload));
                    peel_count += 1;
                }
            }
        }
    }

    // Phase 2: dense elimination on the unresolved rows.
    let mut unknown_index = vec![u32::MAX; k];
    let mut unresolved = Vec::with_capacity(k - peel_count);
    for row in 0..k {
        if known[row].is_none() {
            unknown_index[row] = unresolved.len() as u32;
            unresolved.push(row as u32);
        }
    }
    let r = unresolved.len();
    let mut echelon = RowEchelon::new(r, width);
    let mut symbols_used = peel_count;
    let mut buf = vec![0u16; r + width];
    for (col, payload) in columns.iter().zip(payloads) {
        let col = col.borrow();
        if echelon.is_full() {
            break;
        }
        if opts.peel && matches!(col, Column::Systematic(_)) {
            continue;
        }
        buf.iter_mut().for_each(|v| *v = 0);
        if width > 0 {
            buf[r..].copy_from_slice(&field.bytes_to_elements(payload));
        }
        for (row, coeff) in col.entries() {
            let ui = unknown_index[row as usize];
            if ui != u32::MAX {
                buf[ui as usize] ^= coeff.value();
            } else if let Some(value) = &known[row as usize] {
                field.mul_add_slice(&mut buf[r..], value, coeff);
            }
        }
        symbols_used += 1;
        // Redundant or inconsistent rows carry no new information.
        let _: Insert = echelon.insert(field, &mut buf);
    }

    if !echelon.is_full() {
        let rank = peel_count + echelon.rank();
        let missing_rows: Vec<u32> = echelon.free_columns().map(|c| unresolved[c]).collect();
        let report = DecodeReport {
            outcome: DecodeOutcome::RankDeficient {
                rank,
                missing_rows,
            },
            symbols_used,
            peel_count,
            elimination_dim: r,
        };
        return Err(CodecError::RankDeficient { rank, k, report });
    }

    let solution = echelon.back_substitute(field).expect("full rank");
    let mut rows: Vec<Vec<u16>> = known.into_iter().map(Option::unwrap_or_default).collect();
    for (i, &row) in unresolved.iter().enumerate() {
        rows[row as usize] = solution[i * width..(i + 1) * width].to_vec();
    }
    let report = DecodeReport {
        outcome: DecodeOutcome::Success,
        symbols_used,
        peel_count,
        elimination_dim: r,
    };
    Ok((rows, report))
}

/// Rank-only decodability check: would `decode` succeed on these columns?
pub fn is_decodable<C: Borrow<Column>>(field: &Field, k: u32, columns: &[C]) -> bool {
    let empty: Vec<&[u8]> = vec![&[]; columns.len()];
    decode_columns(field, k, columns, &empty, 0, DecodeOptions::default()).is_ok()
}

/// Dot product of a sparse column with element vectors.
#[cfg(test)]
fn combine(field: &Field, entries: &[(u32, crate::galois::FieldElement)], values: impl Fn(u32) -> Vec<u16>, width: usize) -> Vec<u16> {
    let mut acc = vec![0u16; width];
    for &(row, coeff) in entries {
        field.mul_add_slice(&mut acc, &values(row), coeff);
    }
    acc
}
