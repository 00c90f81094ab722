//! Acceptance suite: every criterion runs, prints one PASS/FAIL line with its
//! runtime and limit, and the test fails if any criterion fails.

use std::time::{Duration, Instant};

use entry_patterns::canon::{canonical_key, is_binary_perm_similar};
use entry_patterns::classify::classify_normal_binary;
use entry_patterns::constructions::{
    assemble_blocks, block_normality, circulant3, extremal, has_extremal_block_shape, lemma4_catalog,
    with_k_classes, Block,
};
use entry_patterns::max_nonsymmetric_classes;
use entry_patterns::normality::{
    is_normal_binary, is_normal_binary_assignments, is_normal_lemma2, is_normal_random_specialization,
    is_normal_symbolic,
};
use entry_patterns::search::{
    exhaustive_search, restricted_growth_strings, verify_theorem, SearchConfig, Strategy, Verdict,
};
use entry_patterns::Pattern;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 2_000_000_000;

type Outcome = Result<String, String>;

/// Id, name, time limit, check.
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn all_patterns(n: usize) -> impl Iterator<Item = Pattern> {
    restricted_growth_strings(n * n).map(move |cells| Pattern::from_rgs(n, cells).unwrap())
}

fn criterion_1() -> Outcome {
    let mut count = 0;
    for p in all_patterns(2) {
        count += 1;
        let normal = is_normal_lemma2(&p);
        ensure(normal == is_normal_symbolic(&p), || format!("oracles disagree on {p}"))?;
        ensure(normal == p.is_symmetric(), || format!("normal != symmetric for {p}"))?;
    }
    ensure(count == 15, || format!("{count} order-2 patterns"))?;
    Ok(format!("{count} patterns, normal iff symmetric"))
}

fn criterion_2() -> Outcome {
    let r = exhaustive_search(&SearchConfig::new(3, Strategy::ExhaustiveRgs)).map_err(|e| e.to_string())?;
    ensure(r.completed && r.nodes_visited == 21147, || format!("visited {}", r.nodes_visited))?;
    ensure(r.max_classes_found == Some(3), || format!("max {:?}", r.max_classes_found))?;
    let circ = canonical_key(&circulant3(0, 1, 2)).unwrap();
    ensure(r.witnesses.len() == 1 && r.witnesses[0].key.cells == circ.cells, || {
        "witness is not the circulant".to_string()
    })?;
    let ks: Vec<usize> = r.counts_by_k.keys().copied().collect();
    ensure(ks == [2, 3], || format!("class counts {ks:?}"))?;
    Ok(format!("21147 patterns, max 3, counts {:?}", r.counts_by_k))
}

fn criterion_3() -> Outcome {
    let r = verify_theorem(4, BUDGET, 1).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Verified, || r.to_text())?;
    ensure(r.strata.iter().all(|s| s.completed), || "incomplete stratum".to_string())?;
    let ext = canonical_key(&extremal(4).unwrap()).unwrap();
    ensure(r.above_bound.is_empty(), || "witness above the bound".to_string())?;
    ensure(r.at_bound.len() == 1 && r.at_bound[0].key.cells == ext.cells, || {
        "class at k = 5 is not the extremal pattern".to_string()
    })?;
    ensure(r.cross_checks.iter().all(|c| c.completed), || "cross-check incomplete".to_string())?;
    Ok("verified; k >= 6 empty, k = 5 only extremal(4), pruned cross-check agrees".to_string())
}

fn criterion_4() -> Outcome {
    for n in 3..=5 {
        for (m, expected) in [(1, 1), (2, 2), (3, 4)] {
            let r = classify_normal_binary(n, m).map_err(|e| e.to_string())?;
            ensure(r.classes.len() == expected, || format!("n={n} m={m}: {} classes", r.classes.len()))?;
            let catalog = lemma4_catalog(n, m).map_err(|e| e.to_string())?;
            for c in &r.classes {
                let rep = c.representative_matrix();
                let hits = catalog.iter().filter(|f| is_binary_perm_similar(&rep, f).unwrap()).count();
                ensure(hits == 1, || format!("n={n} m={m}: representative matches {hits} catalog forms"))?;
            }
        }
    }
    Ok("class counts (1, 2, 4) at n = 3, 4, 5, representatives match".to_string())
}

/// Random pattern with at most `max_classes` classes; every other one is
/// derived from a normal construction by merging and permuting.
fn random_pattern(rng: &mut ChaCha8Rng, n: usize, max_classes: usize, normal_bias: bool) -> Pattern {
    if normal_bias {
        let top = max_nonsymmetric_classes(n);
        let base = with_k_classes(n, rng.gen_range(2..=top)).unwrap();
        let parts = rng.gen_range(1..=base.class_count().min(max_classes));
        let mut groups = vec![Vec::new(); parts];
        for c in 0..base.class_count() {
            let g = if c < parts { c } else { rng.gen_range(0..parts) };
            groups[g].push(c);
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        base.merge_classes(&groups).unwrap().permute(&perm).unwrap()
    } else {
        let k = rng.gen_range(1..=max_classes);
        let cells: Vec<u16> = (0..n * n).map(|_| rng.gen_range(0..k as u16)).collect();
        Pattern::from_cells(n, &cells).unwrap()
    }
}

fn oracles_agree(p: &Pattern, seed: u64) -> Result<bool, String> {
    let lemma2 = is_normal_lemma2(p);
    let symbolic = is_normal_symbolic(p);
    let subsets = is_normal_binary_assignments(p).map_err(|e| e.to_string())?;
    ensure(lemma2 == symbolic && lemma2 == subsets, || {
        format!("lemma2 {lemma2}, symbolic {symbolic}, subsets {subsets} on {p}")
    })?;
    if lemma2 {
        let random = is_normal_random_specialization(p, 4, seed).map_err(|e| e.to_string())?;
        ensure(random, || format!("random specialization rejects normal {p}"))?;
    }
    Ok(lemma2)
}

fn criterion_5() -> Outcome {
    let mut normal = 0;
    for p in all_patterns(3) {
        normal += oracles_agree(&p, 0)? as usize;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut random_normal = 0;
    for i in 0..10_000u64 {
        let n = rng.gen_range(4..=6);
        let p = random_pattern(&mut rng, n, 10, i % 2 == 0);
        random_normal += oracles_agree(&p, i)? as usize;
    }
    Ok(format!(
        "agree on 21147 order-3 patterns ({normal} normal) and 10000 random ({random_normal} normal)"
    ))
}

fn criterion_6() -> Outcome {
    for n in 3..=12 {
        let p = extremal(n).map_err(|e| e.to_string())?;
        ensure(p.class_count() == max_nonsymmetric_classes(n), || format!("n={n}: {} classes", p.class_count()))?;
        ensure(!p.is_symmetric(), || format!("n={n}: symmetric"))?;
        ensure(is_normal_lemma2(&p) && is_normal_symbolic(&p), || format!("n={n}: not normal"))?;
        ensure(has_extremal_block_shape(&p), || format!("n={n}: block shape"))?;
    }
    Ok("n = 3..12 extremal patterns have the bound, are normal and nonsymmetric".to_string())
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for n in 3..=8 {
        for k in 2..=max_nonsymmetric_classes(n) {
            let p = with_k_classes(n, k).map_err(|e| e.to_string())?;
            ensure(p.class_count() == k, || format!("n={n} k={k}: {} classes", p.class_count()))?;
            ensure(!p.is_symmetric() && is_normal_lemma2(&p), || format!("n={n} k={k}: {p}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} (n, k) pairs realized"))
}

fn criterion_8() -> Outcome {
    let mut total = 0;
    for n in 2..=4 {
        let free = n * n - 1;
        for mask in 1u32..(1 << free) {
            let cells: Vec<u16> = (0..n * n).map(|t| if t == 0 { 0 } else { ((mask >> (t - 1)) & 1) as u16 }).collect();
            let p = Pattern::from_cells(n, &cells).unwrap();
            let first = p.coefficient_matrix(0).unwrap();
            ensure(is_normal_symbolic(&p) == is_normal_binary(&first), || format!("mismatch on {p}"))?;
            total += 1;
        }
        ensure(total > 0, String::new)?;
    }
    ensure(total == 7 + 255 + 32767, || format!("{total} patterns"))?;
    Ok(format!("{total} two-class patterns"))
}

fn random_block(rng: &mut ChaCha8Rng, rows: usize, cols: usize, labels: u16, symmetric: bool) -> Block {
    let mut cells = vec![0u16; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            cells[i * cols + j] = if symmetric && j < i { cells[j * cols + i] } else { rng.gen_range(0..labels) };
        }
    }
    Block::new(rows, cols, cells).unwrap()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut normal = 0;
    for i in 0..1000 {
        let (b1, b2, b3) = if i % 4 == 0 {
            // leading block of an extremal pattern, so many cases are normal
            let n = rng.gen_range(4..=7);
            let p = extremal(n).unwrap();
            let h = n - 3;
            let take = |r0: usize, c0: usize, rows: usize, cols: usize| {
                let cells = (0..rows * cols).map(|t| p.cell(r0 + t / cols, c0 + t % cols)).collect();
                Block::new(rows, cols, cells).unwrap()
            };
            (take(0, 0, h, h), take(0, h, h, 3), take(h, h, 3, 3))
        } else {
            let h = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=3);
            let labels = rng.gen_range(1..=4);
            (
                random_block(&mut rng, h, h, labels, true),
                random_block(&mut rng, h, m, labels, false),
                random_block(&mut rng, m, m, labels, false),
            )
        };
        let by_blocks = block_normality(&b1, &b2, &b3).map_err(|e| e.to_string())?;
        let p = assemble_blocks(&b1, &b2, &b3).map_err(|e| e.to_string())?;
        ensure(by_blocks == is_normal_symbolic(&p), || format!("block criterion disagrees on {p}"))?;
        normal += by_blocks as usize;
    }
    Ok(format!("1000 block patterns agree ({normal} normal)"))
}

fn criterion_10() -> Outcome {
    let r = verify_theorem(5, BUDGET, 1).map_err(|e| e.to_string())?;
    let above = &r.strata[0];
    ensure(above.completed && r.above_bound.is_empty(), || "k >= 9 stratum not cleared".to_string())?;
    let at = &r.strata[1];
    let ext = canonical_key(&extremal(5).unwrap()).unwrap();
    let explored = at.reports.iter().any(|s| s.nodes_visited > 0);
    if explored {
        ensure(r.at_bound.iter().any(|w| w.key.cells == ext.cells), || {
            "extremal(5) missing from witnesses at k = 8".to_string()
        })?;
    }
    if !at.completed {
        ensure(r.verdict == Verdict::Inconclusive && !r.notes.is_empty(), || {
            "incomplete stratum not reported as inconclusive".to_string()
        })?;
        return Ok("k >= 9 empty; k = 8 stratum inconclusive (reported)".to_string());
    }
    ensure(r.verdict == Verdict::Verified, || r.to_text())?;
    Ok(format!(
        "k >= 9 empty; k = 8 completed with only extremal(5); verdict {}",
        r.verdict.name()
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        (1, "order-2 sweep", Duration::from_secs(1), criterion_1),
        (2, "order-3 exhaustive bound", Duration::from_secs(30), criterion_2),
        (3, "order-4 verification", Duration::from_secs(3600), criterion_3),
        (4, "small-occupancy classification", Duration::from_secs(60), criterion_4),
        (5, "oracle equivalence", Duration::from_secs(300), criterion_5),
        (6, "extremal family", Duration::from_secs(60), criterion_6),
        (7, "interval realizability", Duration::from_secs(60), criterion_7),
        (8, "two-class patterns", Duration::from_secs(120), criterion_8),
        (9, "block criterion", Duration::from_secs(60), criterion_9),
        (10, "order-5 verification", Duration::from_secs(3600), criterion_10),
    ];
    let mut failures = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(detail) if elapsed <= limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; exceeded time limit")),
            Err(e) => ("FAIL", e),
        };
        println!(
            "criterion {id:>2} {status} [{name}] {:.2}s (limit {}s): {detail}",
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if status == "FAIL" {
            failures.push(id);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
