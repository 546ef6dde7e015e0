//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rfc_core::codec::{assemble_matrix, decode, CodecError};
use rfc_core::repair::{execute_repair, isolated_groups, plan_repair, AvailabilityReport, CountingSource, LocalGroup, RepairError};
use rfc_core::rng::{sample_distinct, uniform_below};
use rfc_core::{
    rank, Code, CodeConfig, ColumnId, Encoder, Field, FieldElement, FieldSpec, LogBase, ParityColumn, Ratio, SourceBlock,
};
use rfc_tools::commands::{decode_to_bytes, encode_bytes, EncodeOptions};
use rfc_tools::shard::MANIFEST_NAME;
use rfc_tools::sim::{
    availability_study, converse_check, coverage_stats, matching_rank_crosscheck, run_erasure_sweep, schwartz_zippel_check, ErasureExperiment, GridPoint, SweepMode,
};
use rfc_tools::sim::stats::{le_ci, non_decreasing_ci, non_increasing_ci};
use sha2::{Digest, Sha256};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn cfg(k: u32, c: u32, field: FieldSpec, seed: u64) -> CodeConfig {
    CodeConfig::new(k, Ratio::integer(c), field, seed, LogBase::Natural).unwrap()
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn naive_mul(a: u32, b: u32, poly: u32, m: u32) -> u32 {
    let mut acc = 0u32;
    let (mut a, mut b) = (a, b);
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= poly;
        }
    }
    acc
}

fn field_exactness() -> Verdict {
    let start = Instant::now();
    let f = Field::gf256();
    let e = |v: u32| f.element(v).unwrap();
    let mut checks = 0u64;
    let mut bad = 0u64;
    for a in 0..256u32 {
        let ea = e(a);
        for b in 0..256u32 {
            let eb = e(b);
            let p = f.mul(ea, eb);
            let ok = p.value() as u32 == naive_mul(a, b, 0x11D, 8)
                && p == f.mul(eb, ea)
                && f.add(ea, eb) == f.add(eb, ea)
                && f.add(ea, eb).value() as u32 == a ^ b
                && f.sub(f.add(ea, eb), eb) == ea
                && (b == 0 || f.mul(f.div(ea, eb).unwrap(), eb) == ea);
            checks += 1;
            bad += u64::from(!ok);
        }
        let ok = f.add(ea, FieldElement::ZERO) == ea
            && f.mul(ea, FieldElement::ONE) == ea
            && f.mul(ea, FieldElement::ZERO) == FieldElement::ZERO
            && f.add(ea, ea) == FieldElement::ZERO
            && (a == 0 || f.mul(ea, f.inv(ea).unwrap()) == FieldElement::ONE);
        bad += u64::from(!ok);
    }
    // associativity and distributivity on a stride through all triples
    for a in (0..256u32).step_by(3) {
        for b in 0..256u32 {
            for c in (0..256u32).step_by(17) {
                let (ea, eb, ec) = (e(a), e(b), e(c));
                let ok = f.mul(f.mul(ea, eb), ec) == f.mul(ea, f.mul(eb, ec))
                    && f.mul(ea, f.add(eb, ec)) == f.add(f.mul(ea, eb), f.mul(ea, ec));
                checks += 1;
                bad += u64::from(!ok);
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        bad == 0 && within(elapsed, 5),
        format!("{checks} pair/triple checks, {bad} mismatches, {elapsed:.2?}"),
    )
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let (k, n) = (16u32, 32u64);
    let mut mismatches = 0;
    let mut wrong_bytes = 0;
    let mut successes = 0;
    let trials = 2000u64;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC2_0000 + t);
        let code = Code::new(cfg(k, 4, FieldSpec::gf256(), rng.next_u64()));
        let mut data = vec![0u8; 16 * 8];
        rng.fill_bytes(&mut data);
        let block = SourceBlock::from_bytes(&data, k as usize, 8).unwrap();
        let enc = Encoder::new(&code, &block).unwrap();
        let size = (k - 2 + uniform_below(&mut rng, 7)) as usize;
        let ids: Vec<ColumnId> = sample_distinct(&mut rng, n as u32, size).into_iter().map(|i| ColumnId(i.into())).collect();
        let received: Vec<_> = ids.iter().map(|&id| enc.symbol(id)).collect();
        let oracle = rank(code.field(), &assemble_matrix(&code, &ids)) == k as usize;
        let verdict = match decode(&code, &received) {
            Ok(d) => {
                if d.block.to_bytes() != data {
                    wrong_bytes += 1;
                }
                true
            }
            Err(CodecError::RankDeficient { .. } | CodecError::NotEnoughSymbols { .. }) => false,
            Err(e) => panic!("unexpected decode error {e}"),
        };
        successes += usize::from(verdict);
        mismatches += usize::from(verdict != oracle);
    }
    let elapsed = start.elapsed();
    verdict(
        mismatches == 0 && wrong_bytes == 0 && within(elapsed, 60),
        format!("{trials} trials, {successes} decoded, {mismatches} verdict mismatches, {wrong_bytes} wrong payloads, {elapsed:.2?}"),
    )
}

fn matching_forward_direction() -> Verdict {
    let f = Field::gf256();
    let mut parts = Vec::new();
    let mut pass = true;
    for (k, degree) in [(16u32, 3u32), (32, 4)] {
        let s_values = [0, k as usize / 2, k as usize - 1, k as usize];
        let cells = matching_rank_crosscheck(&f, k, degree, 0.0, &s_values, 1250, 0xACC3 + u64::from(k));
        let samples: usize = cells.iter().map(|c| c.table.total()).sum();
        let violating: usize = cells.iter().map(|c| c.table.no_matching_full_rank).sum();
        let no_matching: usize = cells.iter().map(|c| c.table.total() - c.table.with_matching()).sum();
        pass &= violating == 0 && samples >= 5000;
        parts.push(format!("k={k} d={degree}: {samples} samples, {no_matching} without matching, {violating} full-rank without matching"));
    }
    verdict(pass, parts.join("; "))
}

fn schwartz_zippel() -> Verdict {
    let f = Field::gf256();
    let code_cfg = cfg(16, 4, FieldSpec::gf256(), 0);
    let r = schwartz_zippel_check(&f, 16, code_cfg.degree(), 8, 40, 50, 0xACC4);
    verdict(
        r.samples >= 2000 && r.within_bound(3.0),
        format!(
            "{} samples, singular fraction {:.4} vs bound {:.4} + 3 sigma ({:.4})",
            r.samples,
            r.singular_fraction(),
            r.bound(),
            r.bound() + 3.0 * r.sigma()
        ),
    )
}

fn coverage() -> Verdict {
    let start = Instant::now();
    let stats = coverage_stats(&cfg(200, 4, FieldSpec::gf256(), 0), 1.0, 50, 0xACC5);
    let elapsed = start.elapsed();
    let min_per_seed = stats.per_seed.iter().map(|s| s.1).min().unwrap_or(0);
    verdict(
        stats.mean_within_bounds(3.0) && min_per_seed > 0 && stats.per_seed.len() == 50 && within(elapsed, 60),
        format!(
            "mean {:.3} (se {:.3}) in [{:.3}, {:.3}], smallest per-seed min {min_per_seed}, {elapsed:.2?}",
            stats.mean,
            stats.std_error(),
            stats.bound_lo,
            stats.bound_hi
        ),
    )
}

fn converse() -> Verdict {
    let f = Field::gf256();
    let r = converse_check(&f, 256, 3, 0.2, 500, 0xACC6);
    verdict(
        r.uncovered_rate() >= 0.9 && r.failures >= r.uncovered && r.uncovered_but_decoded == 0,
        format!(
            "k'={}, uncovered {:.3} (analytic {:.4}), failures {:.3}, uncovered yet decoded {}",
            r.k_prime,
            r.uncovered_rate(),
            1.0 - r.analytic_all_covered,
            r.failure_rate(),
            r.uncovered_but_decoded
        ),
    )
}

fn sweep(k: u32, c: u32, mode: SweepMode, grid: &[f64], seed: u64) -> Vec<GridPoint> {
    let exp = ErasureExperiment {
        cfg: cfg(k, c, FieldSpec::gf256(), 0),
        rate: 0.5,
        mode,
        instances: 200,
        trials_per_instance: 100,
        sweep_seed: seed,
    };
    run_erasure_sweep(&exp, grid).unwrap().points
}

fn rates(points: &[GridPoint]) -> String {
    points.iter().map(|p| format!("{:.4}", p.failure_rate)).collect::<Vec<_>>().join(" ")
}

fn erasure_figure() -> Verdict {
    let start = Instant::now();
    let grid: Vec<f64> = (2..=10).map(|i| f64::from(i) * 0.05).collect();
    let small = sweep(100, 6, SweepMode::IidErasure, &grid, 0xACC7);
    let large = sweep(300, 6, SweepMode::IidErasure, &grid, 0xACC7);
    let elapsed = start.elapsed();
    let monotone = non_decreasing_ci(&small) && non_decreasing_ci(&large);
    let ordered = small
        .iter()
        .zip(&large)
        .filter(|(s, _)| s.grid_value <= 0.4 + 1e-9)
        .all(|(s, l)| le_ci(l, s));
    verdict(
        monotone && ordered && within(elapsed, 600),
        format!("k=100 [{}], k=300 [{}], monotone {monotone}, ordered {ordered}, {elapsed:.2?}", rates(&small), rates(&large)),
    )
}

fn overhead_figure() -> Verdict {
    let start = Instant::now();
    let grid: Vec<f64> = (0..=6).map(|i| f64::from(i) * 0.05).collect();
    let points = sweep(100, 4, SweepMode::FixedSubset, &grid, 0xACC8);
    let elapsed = start.elapsed();
    let monotone = non_increasing_ci(&points);
    let strict = points.last().unwrap().failure_rate < points[0].failure_rate;
    verdict(
        monotone && strict && within(elapsed, 600),
        format!("k=100 [{}], monotone {monotone}, strict drop {strict}, {elapsed:.2?}", rates(&points)),
    )
}

fn repair_locality() -> Verdict {
    let code = Code::new(cfg(128, 6, FieldSpec::gf256(), 0xACC9));
    let d = code.degree() as usize;
    let n = 256u64;
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC9);
    let symbol_size = 64;
    let mut data = vec![0u8; 128 * symbol_size];
    rng.fill_bytes(&mut data);
    let block = SourceBlock::from_bytes(&data, 128, symbol_size).unwrap();
    let enc = Encoder::new(&code, &block).unwrap();
    let stored: BTreeMap<ColumnId, Vec<u8>> = (0..n).map(|i| (ColumnId(i), enc.symbol(ColumnId(i)).payload)).collect();

    let (mut repaired, mut uncovered, mut max_reads, mut too_many, mut wrong) = (0, 0, 0, 0, 0);
    for _ in 0..200 {
        let target = ColumnId(u64::from(uniform_below(&mut rng, n as u32)));
        let present: Vec<ColumnId> = stored.keys().copied().filter(|&id| id != target).collect();
        let plan = match plan_repair(&code, target, &present) {
            Ok(p) => p,
            Err(RepairError::NoLocalGroup(_)) => {
                uncovered += 1;
                continue;
            }
            Err(e) => panic!("planning failed: {e}"),
        };
        let mut available = stored.clone();
        available.remove(&target);
        let mut source = CountingSource::new(available);
        let bytes = execute_repair(&code, &plan, &mut source).unwrap();
        repaired += 1;
        max_reads = max_reads.max(source.reads());
        too_many += usize::from(source.reads() > d + 1);
        wrong += usize::from(bytes != stored[&target]);
    }
    verdict(
        too_many == 0 && wrong == 0 && repaired > 0,
        format!("{repaired} repaired, {uncovered} without local group, max reads {max_reads} (limit {}), {wrong} wrong", d + 1),
    )
}

fn availability() -> Verdict {
    let (study, reports) = availability_study(&cfg(300, 4, FieldSpec::gf256(), 0), 1.0, 50, 0xACCA);
    let violations: usize = reports
        .iter()
        .flat_map(|r: &AvailabilityReport| &r.rows)
        .filter(|row| row.coverage >= 1 && row.availability == 0)
        .count();
    let hist: Vec<String> = study.histogram.iter().enumerate().filter(|(_, &n)| n > 0).map(|(a, n)| format!("{a}:{n}")).collect();

    let f = Field::gf256();
    let k = 20u32;
    let groups: Vec<LocalGroup> = [&[1u32, 2, 3, 4][..], &[1, 3, 4, 5], &[1, 5, 6], &[1, k - 1, k]]
        .iter()
        .enumerate()
        .map(|(i, rows)| {
            let col = ParityColumn::from_draws(&f, rows.iter().map(|&r| (r, FieldElement::ONE)).collect());
            LocalGroup::from_column(ColumnId(100 + i as u64), &col, 1).unwrap()
        })
        .collect();
    let fixture = isolated_groups(&groups).count;
    verdict(
        violations == 0 && fixture >= 3 && reports.len() == 50,
        format!("{violations} covered rows without availability, histogram {{{}}}, fixture availability {fixture}", hist.join(" ")),
    )
}

fn cli_end_to_end() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCB);
    let mut data = vec![0u8; 1 << 20];
    rng.fill_bytes(&mut data);
    let want = Sha256::digest(&data);
    let opts = |seed: u64, out_dir: PathBuf| EncodeOptions {
        k: 256,
        rate: 0.5,
        c: Ratio::integer(4),
        seed,
        field: FieldSpec::gf65536(),
        log_base: LogBase::Natural,
        out_dir,
        extend: None,
    };
    let tmp = tempfile::tempdir().unwrap();

    let snapshot = |dir: &PathBuf| -> Vec<(String, Vec<u8>)> {
        let mut files: Vec<_> = fs::read_dir(dir)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    };
    let (a, b) = (tmp.path().join("golden_a"), tmp.path().join("golden_b"));
    encode_bytes(&data, &opts(0x601D, a.clone())).unwrap();
    encode_bytes(&data, &opts(0x601D, b.clone())).unwrap();
    let stable = snapshot(&a) == snapshot(&b);

    let mut ok = 0;
    let runs = 100u64;
    for run in 0..runs {
        let dir = tmp.path().join(format!("run{run}"));
        encode_bytes(&data, &opts(run, dir.clone())).unwrap();
        let mut shards: Vec<PathBuf> = fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.file_name().unwrap() != MANIFEST_NAME)
            .collect();
        shards.sort();
        let delete = (shards.len() * 45).div_ceil(100);
        for i in sample_distinct(&mut rng, shards.len() as u32, delete) {
            fs::remove_file(&shards[i as usize]).unwrap();
        }
        if let Ok((bytes, _, _)) = decode_to_bytes(std::slice::from_ref(&dir)) {
            ok += usize::from(Sha256::digest(&bytes) == want);
        }
        fs::remove_dir_all(&dir).unwrap();
    }
    let elapsed = start.elapsed();
    verdict(
        ok >= 95 && stable,
        format!("{ok}/{runs} runs restored identical bytes, golden shards stable {stable}, {elapsed:.2?}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("field exactness", field_exactness),
        ("decoder matches rank oracle", oracle_equivalence),
        ("full rank implies perfect matching", matching_forward_direction),
        ("singular fraction under k/q", schwartz_zippel),
        ("coverage bounds", coverage),
        ("constant degree leaves rows uncovered", converse),
        ("erasure sweep shape", erasure_figure),
        ("overhead sweep shape", overhead_figure),
        ("repair locality", repair_locality),
        ("availability floor", availability),
        ("CLI end to end", cli_end_to_end),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let label = format!("criterion {:>2} ({name})", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let v = run();
        println!("{} {label}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
