//! Local repair and availability.
//!
//! A parity `v` covering row `u` forms a local group with its footprint, the
//! other rows `v` covers. Since `v = w_u u + sum_i w_i u_i`, the lost `u` is
//! `w_u^{-1} (v - sum_i w_i u_i)`. Parities whose footprints are pairwise
//! disjoint give independent repair paths; their largest number is the
//! availability of `u`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::code::{Code, Column, ColumnId, ParityColumn};
use crate::galois::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepairError {
    #[error("missing footprint symbols for rows {0:?}")]
    MissingFootprintSymbol(Vec<u32>),
    #[error("payload of {id} has length {len}, expected {expected}")]
    PayloadLength { id: ColumnId, len: usize, expected: usize },
    #[error("no local group with all members present can rebuild symbol {0}")]
    NoLocalGroup(ColumnId),
    #[error("symbol {0} could not be read")]
    Unreadable(ColumnId),
}

/// A parity that covers `target`, with the rest of its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGroup {
    pub parity_id: ColumnId,
    pub target: u32,
    pub coeff_u: FieldElement,
    /// Sorted (row, coefficient) pairs of the footprint.
    pub footprint: Vec<(u32, FieldElement)>,
}

impl LocalGroup {
    /// `None` unless `column` has a nonzero coefficient on `target`.
    pub fn from_column(parity_id: ColumnId, column: &ParityColumn, target: u32) -> Option<Self> {
        let coeff_u = column.coefficient(target)?;
        let footprint = column.entries().iter().copied().filter(|&(r, _)| r != target).collect();
        Some(Self {
            parity_id,
            target,
            coeff_u,
            footprint,
        })
    }

    pub fn footprint_rows(&self) -> impl Iterator<Item = u32> + '_ {
        self.footprint.iter().map(|&(r, _)| r)
    }

    /// Symbols read by a repair through this group.
    pub fn access_count(&self) -> usize {
        self.footprint.len() + 1
    }

    pub fn is_isolated_from(&self, other: &LocalGroup) -> bool {
        let (mut a, mut b) = (self.footprint.iter().peekable(), other.footprint.iter().peekable());
        while let (Some(x), Some(y)) = (a.peek(), b.peek()) {
            match x.0.cmp(&y.0) {
                core::cmp::Ordering::Less => {
                    a.next();
                }
                core::cmp::Ordering::Greater => {
                    b.next();
                }
                core::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

/// Local groups of `u` among `parity_ids` (systematic ids are skipped).
pub fn find_covering_parities(code: &Code, u: u32, parity_ids: &[ColumnId]) -> Vec<LocalGroup> {
    parity_ids
        .iter()
        .filter(|&&id| !code.is_systematic(id))
        .filter_map(|&id| LocalGroup::from_column(id, &code.parity_column(id), u))
        .collect()
}

/// Rebuilds the target of `group` from its parity and footprint payloads.
pub fn repair_symbol(
    field: &Field,
    group: &LocalGroup,
    parity_payload: &[u8],
    footprint_payloads: &BTreeMap<u32, &[u8]>,
) -> Result<Vec<u8>, RepairError> {
    let missing: Vec<u32> = group
        .footprint_rows()
        .filter(|r| !footprint_payloads.contains_key(r))
        .collect();
    if !missing.is_empty() {
        return Err(RepairError::MissingFootprintSymbol(missing));
    }
    let len = parity_payload.len();
    let mut acc = field.bytes_to_elements(parity_payload);
    for &(row, coeff) in &group.footprint {
        let p = footprint_payloads[&row];
        if p.len() != len {
            return Err(RepairError::PayloadLength {
                id: ColumnId(row.into()),
                len: p.len(),
                expected: len,
            });
        }
        field.mul_add_slice(&mut acc, &field.bytes_to_elements(p), coeff);
    }
    let inv = field.inv(group.coeff_u).expect("coeff_u is nonzero");
    field.scale_slice(&mut acc, inv);
    Ok(field.elements_to_bytes(&acc))
}

/// Recomputes parity `id` from the systematic symbols of its support.
pub fn repair_parity<'a>(
    code: &Code,
    id: ColumnId,
    systematic: impl Fn(u32) -> Option<&'a [u8]>,
) -> Result<Vec<u8>, RepairError> {
    let column = match code.column(id) {
        Column::Systematic(row) => return systematic(row).map(<[u8]>::to_vec).ok_or(RepairError::MissingFootprintSymbol(vec![row])),
        Column::Parity(p) => p,
    };
    let payloads: Vec<Option<&[u8]>> = column.rows().map(&systematic).collect();
    let missing: Vec<u32> = column
        .rows()
        .zip(&payloads)
        .filter(|(_, p)| p.is_none())
        .map(|(r, _)| r)
        .collect();
    if !missing.is_empty() {
        return Err(RepairError::MissingFootprintSymbol(missing));
    }
    let field = code.field();
    let payloads: Vec<&[u8]> = payloads.into_iter().flatten().collect();
    // A parity with an empty support has an unknown length; it is all zeros.
    let len = payloads.first().map_or(0, |p| p.len());
    let mut acc = vec![0u16; len / field.spec().element_bytes()];
    for (&(row, coeff), p) in column.entries().iter().zip(&payloads) {
        if p.len() != len {
            return Err(RepairError::PayloadLength {
                id: ColumnId(row.into()),
                len: p.len(),
                expected: len,
            });
        }
        field.mul_add_slice(&mut acc, &field.bytes_to_elements(p), coeff);
    }
    Ok(field.elements_to_bytes(&acc))
}

/// Graph on the parities covering `u`; an edge joins overlapping footprints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapGraph {
    vertices: Vec<ColumnId>,
    adjacency: Vec<Vec<usize>>,
}

impl OverlapGraph {
    pub fn new(groups: &[LocalGroup]) -> Self {
        let n = groups.len();
        let mut adjacency = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                if !groups[i].is_isolated_from(&groups[j]) {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        Self {
            vertices: groups.iter().map(|g| g.parity_id).collect(),
            adjacency,
        }
    }

    pub fn vertices(&self) -> &[ColumnId] {
        &self.vertices
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Repeatedly takes a minimum-degree vertex and deletes its neighborhood.
    pub fn greedy_independent_set(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut alive = vec![true; n];
        let mut degree: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        let mut chosen = Vec::new();
        while let Some(v) = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (degree[v], v)) {
            chosen.push(v);
            let mut removed = vec![v];
            removed.extend(self.adjacency[v].iter().copied().filter(|&w| alive[w]));
            for &x in &removed {
                alive[x] = false;
            }
            for &x in &removed {
                for &y in &self.adjacency[x] {
                    degree[y] = degree[y].saturating_sub(1);
                }
            }
        }
        chosen.sort_unstable();
        chosen
    }

    /// Maximum independent set by branch and bound; needs at most 64 vertices.
    pub fn exact_independent_set(&self) -> Vec<usize> {
        let n = self.vertices.len();
        assert!(n <= 64, "exact search limited to 64 vertices");
        let masks: Vec<u64> = self
            .adjacency
            .iter()
            .map(|adj| adj.iter().fold(0u64, |m, &w| m | 1 << w))
            .collect();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut best = 0u64;
        branch(&masks, all, 0, &mut best);
        (0..n).filter(|&v| best >> v & 1 == 1).collect()
    }
}

fn branch(masks: &[u64], candidates: u64, chosen: u64, best: &mut u64) {
    if chosen.count_ones() + candidates.count_ones() <= best.count_ones() {
        return;
    }
    if candidates == 0 {
        *best = chosen;
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    let bit = 1u64 << v;
    branch(masks, candidates & !bit & !masks[v], chosen | bit, best);
    // An isolated candidate is always worth taking.
    if masks[v] & candidates != 0 {
        branch(masks, candidates & !bit, chosen, best);
    }
}

/// Largest overlap graph solved exactly.
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    Exact,
    Greedy,
}

impl SearchMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Greedy => "greedy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Availability {
    /// Size of the pairwise-isolated set found; a lower bound when greedy.
    pub count: usize,
    pub groups: Vec<LocalGroup>,
    pub method: SearchMethod,
}

/// Pairwise-isolated subset of `groups`: exact for small inputs, greedy otherwise.
pub fn isolated_groups(groups: &[LocalGroup]) -> Availability {
    let graph = OverlapGraph::new(groups);
    let (set, method) = if groups.len() <= EXACT_LIMIT {
        (graph.exact_independent_set(), SearchMethod::Exact)
    } else {
        (graph.greedy_independent_set(), SearchMethod::Greedy)
    };
    Availability {
        count: set.len(),
        groups: set.into_iter().map(|i| groups[i].clone()).collect(),
        method,
    }
}

pub fn availability(code: &Code, u: u32, parity_ids: &[ColumnId]) -> Availability {
    isolated_groups(&find_covering_parities(code, u, parity_ids))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowAvailability {
    pub row: u32,
    pub coverage: usize,
    pub availability: usize,
    pub method: SearchMethod,
    pub groups: Vec<ColumnId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvailabilityReport {
    pub rows: Vec<RowAvailability>,
}

impl AvailabilityReport {
    /// Availability of every row given the parities `parity_ids`.
    pub fn compute(code: &Code, parity_ids: &[ColumnId]) -> Self {
        let columns: Vec<(ColumnId, ParityColumn)> = parity_ids
            .iter()
            .filter(|&&id| !code.is_systematic(id))
            .map(|&id| (id, code.parity_column(id)))
            .collect();
        let mut by_row: Vec<Vec<LocalGroup>> = vec![Vec::new(); code.k() as usize];
        for (id, col) in &columns {
            for row in col.rows() {
                by_row[row as usize].extend(LocalGroup::from_column(*id, col, row));
            }
        }
        let rows = by_row
            .into_iter()
            .enumerate()
            .map(|(row, groups)| {
                let a = isolated_groups(&groups);
                RowAvailability {
                    row: row as u32,
                    coverage: groups.len(),
                    availability: a.count,
                    method: a.method,
                    groups: a.groups.iter().map(|g| g.parity_id).collect(),
                }
            })
            .collect();
        Self { rows }
    }

    pub fn min_availability(&self) -> usize {
        self.rows.iter().map(|r| r.availability).min().unwrap_or(0)
    }

    pub fn mean_availability(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().map(|r| r.availability as f64).sum::<f64>() / self.rows.len() as f64
    }

    pub fn min_coverage(&self) -> usize {
        self.rows.iter().map(|r| r.coverage).min().unwrap_or(0)
    }

    pub fn mean_coverage(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().map(|r| r.coverage as f64).sum::<f64>() / self.rows.len() as f64
    }
}

/// Read access to stored symbols.
pub trait SymbolSource {
    fn fetch(&mut self, id: ColumnId) -> Option<Vec<u8>>;
}

/// Counts every fetch made through it.
pub struct CountingSource<S> {
    inner: S,
    reads: usize,
}

impl<S: SymbolSource> CountingSource<S> {
    pub fn new(inner: S) -> Self {
        Self { inner, reads: 0 }
    }

    pub fn reads(&self) -> usize {
        self.reads
    }

    pub fn into_inner(self) -> S {
        self.inner
    }
}

impl<S: SymbolSource> SymbolSource for CountingSource<S> {
    fn fetch(&mut self, id: ColumnId) -> Option<Vec<u8>> {
        self.reads += 1;
        self.inner.fetch(id)
    }
}

impl SymbolSource for BTreeMap<ColumnId, Vec<u8>> {
    fn fetch(&mut self, id: ColumnId) -> Option<Vec<u8>> {
        self.get(&id).cloned()
    }
}

/// How a single lost symbol will be rebuilt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepairPlan {
    Systematic(LocalGroup),
    Parity { id: ColumnId, support: Vec<u32> },
}

impl RepairPlan {
    /// Symbols the plan reads.
    pub fn reads(&self) -> Vec<ColumnId> {
        match self {
            Self::Systematic(g) => core::iter::once(g.parity_id)
                .chain(g.footprint_rows().map(|r| ColumnId(r.into())))
                .collect(),
            Self::Parity { support, .. } => support.iter().map(|&r| ColumnId(r.into())).collect(),
        }
    }
}

/// Picks the smallest local group whose members are all in `present`.
pub fn plan_repair(code: &Code, target: ColumnId, present: &[ColumnId]) -> Result<RepairPlan, RepairError> {
    let mut have_row = vec![false; code.k() as usize];
    for &id in present {
        if code.is_systematic(id) && id != target {
            have_row[id.0 as usize] = true;
        }
    }
    match code.column(target) {
        Column::Systematic(u) => {
            let parities: Vec<ColumnId> = present.iter().copied().filter(|&id| id != target).collect();
            find_covering_parities(code, u, &parities)
                .into_iter()
                .filter(|g| g.footprint_rows().all(|r| have_row[r as usize]))
                .min_by_key(|g| (g.footprint.len(), g.parity_id))
                .map(RepairPlan::Systematic)
                .ok_or(RepairError::NoLocalGroup(target))
        }
        Column::Parity(p) => {
            if p.rows().all(|r| have_row[r as usize]) {
                Ok(RepairPlan::Parity {
                    id: target,
                    support: p.rows().collect(),
                })
            } else {
                Err(RepairError::NoLocalGroup(target))
            }
        }
    }
}

/// Runs `plan`, fetching exactly the symbols in [`RepairPlan::reads`].
pub fn execute_repair(code: &Code, plan: &RepairPlan, source: &mut dyn SymbolSource) -> Result<Vec<u8>, RepairError> {
    let mut fetched: BTreeMap<ColumnId, Vec<u8>> = BTreeMap::new();
    for id in plan.reads() {
        let data = source.fetch(id).ok_or(RepairError::Unreadable(id))?;
        fetched.insert(id, data);
    }
    match plan {
        RepairPlan::Systematic(group) => {
            let footprint: BTreeMap<u32, &[u8]> = group
                .footprint_rows()
                .map(|r| (r, fetched[&ColumnId(r.into())].as_slice()))
                .collect();
            repair_symbol(code.field(), group, &fetched[&group.parity_id], &footprint)
        }
        RepairPlan::Parity { id, .. } => {
            repair_parity(code, *id, |r| fetched.get(&ColumnId(r.into())).map(Vec::as_slice))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{CodeConfig, LogBase, Ratio};
    use crate::codec::{Encoder, SourceBlock};
    use crate::galois::FieldSpec;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn code(k: u32, c: u32, seed: u64) -> Code {
        Code::new(CodeConfig::new(k, Ratio::integer(c), FieldSpec::gf256(), seed, LogBase::Natural).unwrap())
    }

    fn block(k: usize, size: usize, seed: u64) -> SourceBlock {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SourceBlock::new((0..k).map(|_| (0..size).map(|_| rng.next_u32() as u8).collect()).collect()).unwrap()
    }

    fn unit_group(id: u64, target: u32, footprint: &[u32]) -> LocalGroup {
        LocalGroup {
            parity_id: ColumnId(id),
            target,
            coeff_u: FieldElement::ONE,
            footprint: footprint.iter().map(|&r| (r, FieldElement::ONE)).collect(),
        }
    }

    /// u_1 covered by v_1 {u2,u3,u4}, v_2 {u3,u4,u5}, v_3 {u5,u6}, v_M {u_{k-1},u_k}.
    fn footprint_fixture(k: u32) -> Vec<LocalGroup> {
        vec![
            unit_group(100, 1, &[2, 3, 4]),
            unit_group(101, 1, &[3, 4, 5]),
            unit_group(102, 1, &[5, 6]),
            unit_group(103, 1, &[k - 1, k]),
        ]
    }

    #[test]
    fn footprint_of_first_parity() {
        let f = Field::gf256();
        let col = ParityColumn::from_draws(&f, [1, 2, 3, 4].map(|r| (r, FieldElement::ONE)).to_vec());
        let g = LocalGroup::from_column(ColumnId(100), &col, 1).unwrap();
        assert_eq!(g.footprint_rows().collect::<Vec<_>>(), vec![2, 3, 4]);
        assert!(LocalGroup::from_column(ColumnId(100), &col, 7).is_none());
    }

    #[test]
    fn figure_fixture_has_availability_three() {
        let groups = footprint_fixture(20);
        let a = isolated_groups(&groups);
        assert_eq!(a.method, SearchMethod::Exact);
        assert_eq!(a.count, 3);
        let ids: Vec<u64> = a.groups.iter().map(|g| g.parity_id.0).collect();
        assert_eq!(ids, vec![100, 102, 103]);
        let graph = OverlapGraph::new(&groups);
        assert_eq!(graph.edge_count(), 2);
        assert!(graph.greedy_independent_set().len() >= 3);
    }

    #[test]
    fn clique_has_availability_one() {
        let groups: Vec<_> = (0..6).map(|i| unit_group(i, 0, &[9, 10 + i as u32])).collect();
        assert_eq!(isolated_groups(&groups).count, 1);
        assert_eq!(isolated_groups(&[]).count, 0);
    }

    #[test]
    fn uncovered_row_has_no_groups() {
        let code = code(50, 1, 3);
        let ids: Vec<ColumnId> = (50..60).map(ColumnId).collect();
        let u = (0..50).find(|&u| ids.iter().all(|&id| !code.column(id).covers(u))).unwrap();
        assert!(find_covering_parities(&code, u, &ids).is_empty());
    }

    #[test]
    fn repair_examples() {
        let f = Field::gf256();
        let w = f.element(0x1F).unwrap();
        let u = f.element(0xA3).unwrap();
        let single = LocalGroup {
            parity_id: ColumnId(9),
            target: 0,
            coeff_u: w,
            footprint: vec![],
        };
        let v = [f.mul(w, u).value() as u8];
        assert_eq!(repair_symbol(&f, &single, &v, &BTreeMap::new()).unwrap(), vec![0xA3]);

        let g = unit_group(9, 0, &[1, 2]);
        let (a, b, u) = ([1u8, 2, 3], [4u8, 5, 6], [7u8, 8, 9]);
        let v: Vec<u8> = (0..3).map(|i| u[i] ^ a[i] ^ b[i]).collect();
        let fp = BTreeMap::from([(1, &a[..]), (2, &b[..])]);
        assert_eq!(repair_symbol(&f, &g, &v, &fp).unwrap(), u.to_vec());
        let partial = BTreeMap::from([(1, &a[..])]);
        assert_eq!(
            repair_symbol(&f, &g, &v, &partial),
            Err(RepairError::MissingFootprintSymbol(vec![2]))
        );
    }

    #[test]
    fn seeded_repairs_are_exact() {
        let code = code(32, 4, 17);
        let b = block(32, 24, 1);
        let enc = Encoder::new(&code, &b).unwrap();
        let parity_ids: Vec<ColumnId> = (32..64).map(ColumnId).collect();
        let mut repaired = 0;
        for u in 0..32u32 {
            for g in find_covering_parities(&code, u, &parity_ids) {
                assert!(g.access_count() <= code.degree() as usize + 1);
                let v = enc.symbol(g.parity_id).payload;
                let fp_payloads: BTreeMap<u32, Vec<u8>> =
                    g.footprint_rows().map(|r| (r, b.symbol(r as usize).to_vec())).collect();
                let fp: BTreeMap<u32, &[u8]> = fp_payloads.iter().map(|(&r, p)| (r, p.as_slice())).collect();
                assert_eq!(repair_symbol(code.field(), &g, &v, &fp).unwrap(), b.symbol(u as usize));
                repaired += 1;
            }
        }
        assert!(repaired > 32);
    }

    #[test]
    fn parity_repair_and_chained_repair() {
        let code = code(32, 4, 23);
        let b = block(32, 16, 2);
        let enc = Encoder::new(&code, &b).unwrap();
        let parity = ColumnId(40);
        let direct = repair_parity(&code, parity, |r| Some(b.symbol(r as usize))).unwrap();
        assert_eq!(direct, enc.symbol(parity).payload);

        // Lose a support row of `parity`, rebuild it through another parity, then rebuild `parity`.
        let Column::Parity(p) = code.column(parity) else { unreachable!() };
        let lost = p.rows().next().unwrap();
        assert!(repair_parity(&code, parity, |r| (r != lost).then(|| b.symbol(r as usize))).is_err());
        let others: Vec<ColumnId> = (41..200).map(ColumnId).collect();
        let g = find_covering_parities(&code, lost, &others).into_iter().find(|g| g.footprint.iter().all(|&(r, _)| r != lost)).unwrap();
        let fp: BTreeMap<u32, &[u8]> = g.footprint_rows().map(|r| (r, b.symbol(r as usize))).collect();
        let rebuilt = repair_symbol(code.field(), &g, &enc.symbol(g.parity_id).payload, &fp).unwrap();
        let chained = repair_parity(&code, parity, |r| if r == lost { Some(rebuilt.as_slice()) } else { Some(b.symbol(r as usize)) }).unwrap();
        assert_eq!(chained, enc.symbol(parity).payload);
    }

    #[test]
    fn planned_repairs_respect_locality() {
        let code = code(64, 4, 5);
        let b = block(64, 8, 3);
        let enc = Encoder::new(&code, &b).unwrap();
        let store: BTreeMap<ColumnId, Vec<u8>> = (0..128).map(|i| (ColumnId(i), enc.symbol(ColumnId(i)).payload)).collect();
        for target in (0..128).map(ColumnId) {
            let present: Vec<ColumnId> = store.keys().copied().filter(|&id| id != target).collect();
            let Ok(plan) = plan_repair(&code, target, &present) else { continue };
            let mut source = CountingSource::new(store.clone());
            let out = execute_repair(&code, &plan, &mut source).unwrap();
            assert_eq!(out, store[&target]);
            assert_eq!(source.reads(), plan.reads().len());
            assert!(source.reads() <= code.degree() as usize + 1);
        }
    }

    #[test]
    fn greedy_never_beats_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let n = (rng.next_u32() % 16) as usize;
            let groups: Vec<LocalGroup> = (0..n)
                .map(|i| {
                    let mut fp: Vec<u32> = (0..3).map(|_| 1 + rng.next_u32() % 25).collect();
                    fp.sort_unstable();
                    fp.dedup();
                    unit_group(i as u64, 0, &fp)
                })
                .collect();
            let graph = OverlapGraph::new(&groups);
            let exact = graph.exact_independent_set();
            let greedy = graph.greedy_independent_set();
            assert!(greedy.len() <= exact.len());
            assert!(exact.len() <= n);
            for set in [&exact, &greedy] {
                for (i, &a) in set.iter().enumerate() {
                    for &b in &set[i + 1..] {
                        assert!(groups[a].is_isolated_from(&groups[b]));
                    }
                }
            }
            // brute force for tiny graphs
            if n <= 10 {
                let best = (0u32..1 << n)
                    .filter(|&mask| {
                        (0..n).all(|a| (0..n).all(|b| a == b || mask >> a & 1 == 0 || mask >> b & 1 == 0 || groups[a].is_isolated_from(&groups[b])))
                    })
                    .map(u32::count_ones)
                    .max()
                    .unwrap();
                assert_eq!(exact.len(), best as usize);
            }
        }
    }

    #[test]
    fn report_groups_are_disjoint() {
        let code = code(100, 4, 8);
        let ids: Vec<ColumnId> = (100..200).map(ColumnId).collect();
        let report = AvailabilityReport::compute(&code, &ids);
        assert_eq!(report.rows.len(), 100);
        for row in &report.rows {
            assert!(row.availability <= row.coverage);
            assert_eq!(row.availability >= 1, row.coverage >= 1);
            let groups: Vec<LocalGroup> = row
                .groups
                .iter()
                .map(|&id| LocalGroup::from_column(id, &code.parity_column(id), row.row).unwrap())
                .collect();
            for (i, a) in groups.iter().enumerate() {
                for b in &groups[i + 1..] {
                    assert!(a.is_isolated_from(b));
                }
            }
            let direct = availability(&code, row.row, &ids);
            assert_eq!(direct.count, row.availability);
        }
    }
}
