//! Exhaustive statement sweeps over canonical sequence grids.
//!
//! Sweeps enumerate multisets, never tuples (every statement is invariant
//! under reordering), shard the canonical tree by first element for
//! parallelism, and merge shard outputs in canonical order so that the
//! resulting report is byte-identical for every worker count. A sweep over
//! the full grid recounts its leaves against the stars-and-bars closed
//! form before declaring itself verified.

use std::collections::BTreeSet;
use std::time::Instant;

use itertools::Itertools;
use serde_json::json;

use crate::enumeration::{davenport, eta, expect_full_grid};
use crate::group::FiniteAbelianGroup;
use crate::sequence::Sequence;
use crate::theorems::schmid::{match_schmid, rank_two_parameters};
use crate::theorems::{Counterexample, Outcome, VerificationReport};
use crate::walk::{
    run_sharded, walk_exact, Budget, GroupCtx, LenRule, LenTableState, MinimalState, PlainState,
    SubsumState,
};
use crate::{Error, Limits, Result, RunConfig, Statement};

#[derive(Default)]
struct ShardOut {
    instances: u64,
    nodes: u64,
    counterexamples: Vec<Counterexample>,
}

fn merge(outs: Vec<ShardOut>) -> ShardOut {
    let mut total = ShardOut::default();
    for o in outs {
        total.instances += o.instances;
        total.nodes += o.nodes;
        total.counterexamples.extend(o.counterexamples);
    }
    total
}

fn assemble(
    statement: Statement,
    group: &FiniteAbelianGroup,
    params: Vec<(String, serde_json::Value)>,
    total: ShardOut,
    start: Instant,
) -> VerificationReport {
    VerificationReport {
        statement,
        group: group.to_string(),
        params,
        outcome: if total.counterexamples.is_empty() {
            Outcome::Verified
        } else {
            Outcome::CounterexampleFound
        },
        counterexamples: total.counterexamples,
        instances_checked: total.instances,
        nodes: total.nodes,
        millis: start.elapsed().as_millis(),
    }
}

/// Sharded walk over the full multiset grid with the exact
/// (sum, length) table riding along; recounts leaves at the end.
fn full_table_sweep<F>(
    group: &FiniteAbelianGroup,
    length: usize,
    cfg: &RunConfig,
    what: &'static str,
    classify: F,
) -> Result<ShardOut>
where
    F: Fn(&GroupCtx, &[usize], &LenTableState) -> Result<Option<Counterexample>> + Sync,
{
    let ctx = GroupCtx::new(group, cfg.limits.walk_group_order)?;
    let budget = Budget::new(cfg.limits.search_nodes, what, cfg.progress);
    let init = LenTableState::empty(&ctx, length, LenRule::None);
    let outs = run_sharded(cfg.threads, ctx.order, |first| {
        let mut budget = budget.fork();
        let mut instances = 0u64;
        let mut counterexamples = Vec::new();
        let nodes = walk_exact(
            &ctx,
            length,
            first..first + 1,
            &init,
            &mut budget,
            &mut |path, state| {
                instances += 1;
                if let Some(cex) = classify(&ctx, path, state)? {
                    counterexamples.push(cex);
                }
                Ok(())
            },
        )?;
        Ok(ShardOut {
            instances,
            nodes,
            counterexamples,
        })
    })?;
    let total = merge(outs);
    expect_full_grid(group.order(), length, total.instances)?;
    Ok(total)
}

/// Sharded walk over the full grid without any riding state.
fn plain_sweep<F>(
    group: &FiniteAbelianGroup,
    length: usize,
    cfg: &RunConfig,
    what: &'static str,
    classify: F,
) -> Result<ShardOut>
where
    F: Fn(&GroupCtx, &[usize]) -> Result<Option<Counterexample>> + Sync,
{
    let ctx = GroupCtx::new(group, cfg.limits.walk_group_order)?;
    let budget = Budget::new(cfg.limits.search_nodes, what, cfg.progress);
    let outs = run_sharded(cfg.threads, ctx.order, |first| {
        let mut budget = budget.fork();
        let mut instances = 0u64;
        let mut counterexamples = Vec::new();
        let nodes = walk_exact(
            &ctx,
            length,
            first..first + 1,
            &PlainState,
            &mut budget,
            &mut |path, _state: &PlainState| {
                instances += 1;
                if let Some(cex) = classify(&ctx, path)? {
                    counterexamples.push(cex);
                }
                Ok(())
            },
        )?;
        Ok(ShardOut {
            instances,
            nodes,
            counterexamples,
        })
    })?;
    let total = merge(outs);
    expect_full_grid(group.order(), length, total.instances)?;
    Ok(total)
}

/// Sharded enumeration of minimal zero-sum sequences of a fixed length.
fn minimal_sweep<F>(
    group: &FiniteAbelianGroup,
    length: usize,
    cfg: &RunConfig,
    what: &'static str,
    classify: F,
) -> Result<ShardOut>
where
    F: Fn(&GroupCtx, &Sequence) -> Result<Option<Counterexample>> + Sync,
{
    let ctx = GroupCtx::new(group, cfg.limits.walk_group_order)?;
    let budget = Budget::new(cfg.limits.search_nodes, what, cfg.progress);
    let init = MinimalState::new(&ctx, length);
    let outs = run_sharded(cfg.threads, ctx.order, |first| {
        let mut budget = budget.fork();
        let mut instances = 0u64;
        let mut counterexamples = Vec::new();
        let nodes = walk_exact(
            &ctx,
            length,
            first..first + 1,
            &init,
            &mut budget,
            &mut |path, _state: &MinimalState| {
                let seq = ctx.sequence_from(path);
                if !seq.is_minimal_zero_sum()? {
                    return Ok(());
                }
                instances += 1;
                if let Some(cex) = classify(&ctx, &seq)? {
                    counterexamples.push(cex);
                }
                Ok(())
            },
        )?;
        Ok(ShardOut {
            instances,
            nodes,
            counterexamples,
        })
    })?;
    Ok(merge(outs))
}

fn require_p_group(group: &FiniteAbelianGroup) -> Result<u64> {
    group
        .p_group_prime()
        .ok_or_else(|| Error::Precondition(format!("{group} is not a p-group")))
}

fn validated_avoid_set(avoid: &[u64], i: u64, modulus: u64) -> Result<BTreeSet<u64>> {
    let set: BTreeSet<u64> = avoid.iter().copied().collect();
    if set.len() as u64 != i - 1 || set.len() != avoid.len() {
        return Err(Error::Precondition(format!(
            "the avoided set must hold exactly i − 1 = {} distinct residues, got {avoid:?}",
            i - 1
        )));
    }
    if set.iter().any(|&b| b < 1 || b >= modulus) {
        return Err(Error::Precondition(format!(
            "avoided residues must lie in [1, {}], got {avoid:?}",
            modulus - 1
        )));
    }
    Ok(set)
}

/// Residue-avoiding zero-sum subsequence over a p-group: for
/// `|S| = D(G)+i−1` with `i ∈ [1, p]` and an `(i−1)`-subset `A` of
/// `[1, p−1]`, returns a non-empty zero-sum subsequence whose length
/// avoids every residue of `A` mod p (smallest such length, canonical
/// witness). Existence is proved, so an exhausted profile raises a
/// soundness alarm with the full instance.
pub fn verify_theorem5(seq: &Sequence, avoid: &[u64], cfg: &RunConfig) -> Result<Sequence> {
    let d = davenport(seq.group(), cfg)?.value;
    verify_theorem5_with_d(seq, avoid, d, &cfg.limits)
}

pub(crate) fn verify_theorem5_with_d(
    seq: &Sequence,
    avoid: &[u64],
    d: u64,
    limits: &Limits,
) -> Result<Sequence> {
    let group = seq.group();
    let p = require_p_group(group)?;
    if seq.len() < d {
        return Err(Error::Precondition(format!(
            "need |S| = D+i−1 ≥ D = {d}, got {}",
            seq.len()
        )));
    }
    let i = seq.len() - d + 1;
    if i > p {
        return Err(Error::Precondition(format!(
            "i = |S| − D + 1 = {i} exceeds p = {p}"
        )));
    }
    let avoid = validated_avoid_set(avoid, i, p)?;
    let profile = seq.zero_sum_profile_with(limits)?;
    for &l in profile.lengths() {
        if !avoid.contains(&(l % p)) {
            return Ok(profile.witness(l).expect("achieved length").clone());
        }
    }
    Err(Error::SoundnessAlarm(format!(
        "residue avoidance failed on S = {seq} over {group} with A = {avoid:?} \
         (zero-sum lengths {:?})",
        profile.lengths()
    )))
}

/// Exhaustive residue-avoidance sweep: every canonical sequence of length
/// `D(G)+i−1` must yield a witness.
pub fn sweep_theorem5(
    group: &FiniteAbelianGroup,
    i: u64,
    avoid: &[u64],
    cfg: &RunConfig,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let p = require_p_group(group)?;
    if i < 1 || i > p {
        return Err(Error::Precondition(format!("i must lie in [1, p] = [1, {p}]")));
    }
    let avoid_set = validated_avoid_set(avoid, i, p)?;
    let d = davenport(group, cfg)?.value;
    let length = (d + i - 1) as usize;
    let avoid_vec: Vec<u64> = avoid_set.iter().copied().collect();
    let total = plain_sweep(group, length, cfg, "residue-avoidance sweep", |ctx, path| {
        let seq = ctx.sequence_from(path);
        match verify_theorem5_with_d(&seq, &avoid_vec, d, &cfg.limits) {
            Ok(witness) => {
                debug_assert!(witness.is_zero_sum());
                Ok(None)
            }
            Err(Error::SoundnessAlarm(_)) => Ok(Some(Counterexample {
                sequence: seq.to_string(),
                clause: "no non-empty zero-sum subsequence length avoids the residue set".into(),
            })),
            Err(e) => Err(e),
        }
    })?;
    Ok(assemble(
        Statement::Theorem5,
        group,
        vec![
            ("i".into(), json!(i)),
            ("A".into(), json!(avoid_vec)),
            ("davenport".into(), json!(d)),
        ],
        total,
        start,
    ))
}

/// Shared core of the normal-structure sweeps: every normal sequence of
/// length `D+i−1` must be `0^i·T` with `T` zero-sumfree.
fn normal_structure_sweep(
    statement: Statement,
    group: &FiniteAbelianGroup,
    i: u64,
    cfg: &RunConfig,
    extra_params: Vec<(String, serde_json::Value)>,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let d = davenport(group, cfg)?.value;
    let length = (d + i - 1) as usize;
    let normal_bound = i as usize; // |S| − D + 1
    let total = full_table_sweep(group, length, cfg, "normal-structure sweep", |ctx, path, state| {
        let mask = state.zero_length_mask();
        if mask == 0 {
            return Err(Error::SoundnessAlarm(format!(
                "{} has no zero-sum subsequence although |S| ≥ D = {d}",
                ctx.sequence_from(path)
            )));
        }
        let long_bits = mask >> (normal_bound + 1);
        if long_bits != 0 {
            return Ok(None); // not normal
        }
        let seq = ctx.sequence_from(path);
        if seq.matches_normal_form(i)? {
            Ok(None)
        } else {
            Ok(Some(Counterexample {
                sequence: seq.to_string(),
                clause: "normal sequence is not 0^i·T with T zero-sumfree".into(),
            }))
        }
    })?;
    let mut params = vec![("i".into(), json!(i)), ("davenport".into(), json!(d))];
    params.extend(extra_params);
    Ok(assemble(statement, group, params, total, start))
}

/// Normal-structure sweep over a p-group with `i ∈ [1, p−1]`.
pub fn sweep_theorem3(
    group: &FiniteAbelianGroup,
    i: u64,
    cfg: &RunConfig,
) -> Result<VerificationReport> {
    let p = require_p_group(group)?;
    if i < 1 || i >= p {
        return Err(Error::Precondition(format!(
            "i must lie in [1, p−1] = [1, {}]",
            p - 1
        )));
    }
    normal_structure_sweep(Statement::Theorem3, group, i, cfg, Vec::new())
}

/// Normal-structure sweep over a rank-two group `C_m ⊕ C_mn` with
/// `i ∈ [1, m−1]`, after verifying Property B for m.
pub fn sweep_theorem4(
    group: &FiniteAbelianGroup,
    i: u64,
    cfg: &RunConfig,
) -> Result<VerificationReport> {
    let (m, _) = rank_two_parameters(group)?;
    if i < 1 || i >= m {
        return Err(Error::Precondition(format!(
            "i must lie in [1, m−1] = [1, {}]",
            m - 1
        )));
    }
    let pb = property_b(m, cfg)?;
    if !pb.is_verified() {
        return Err(Error::Precondition(format!(
            "Property B failed for m = {m}; the rank-two structure sweep needs it"
        )));
    }
    normal_structure_sweep(
        Statement::Theorem4,
        group,
        i,
        cfg,
        vec![("property_b_m".into(), json!(m))],
    )
}

/// Normal-structure sweep over an arbitrary group with `i ∈ [1, n_1−1]` —
/// the falsification harness for the general conjecture.
pub fn sweep_conjecture1(
    group: &FiniteAbelianGroup,
    i: u64,
    cfg: &RunConfig,
) -> Result<VerificationReport> {
    let n1 = group.invariant_factors()[0];
    if i < 1 || i >= n1 {
        return Err(Error::Precondition(format!(
            "i must lie in [1, n_1−1] = [1, {}]",
            n1 - 1
        )));
    }
    normal_structure_sweep(Statement::Conjecture1, group, i, cfg, Vec::new())
}

/// Dispersive-sequence sweep over a p-group: clause (i) — with `i ≥ 2`, a
/// zero-sum length not divisible by p forces two distinct lengths; clause
/// (ii) — no zero-sum length divisible by p forces `i ≤ p−1` and at least
/// `i` distinct lengths.
pub fn sweep_corollary7(
    group: &FiniteAbelianGroup,
    i: u64,
    cfg: &RunConfig,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let p = require_p_group(group)?;
    if i < 1 {
        return Err(Error::Precondition("i must be at least 1".into()));
    }
    let d = davenport(group, cfg)?.value;
    let length = (d + i - 1) as usize;
    let total = full_table_sweep(group, length, cfg, "dispersive sweep", |ctx, path, state| {
        let mask = state.zero_length_mask();
        if mask == 0 {
            return Err(Error::SoundnessAlarm(format!(
                "{} has no zero-sum subsequence although |S| ≥ D = {d}",
                ctx.sequence_from(path)
            )));
        }
        let lengths: Vec<u64> = (1..=length as u64)
            .filter(|&l| mask & (1u128 << l) != 0)
            .collect();
        let distinct = lengths.len() as u64;
        let has_non_p_multiple = lengths.iter().any(|&l| l % p != 0);
        let has_p_multiple = lengths.iter().any(|&l| l % p == 0);
        if i >= 2 && has_non_p_multiple && distinct < 2 {
            return Ok(Some(Counterexample {
                sequence: ctx.sequence_from(path).to_string(),
                clause: "a zero-sum length not divisible by p exists but the sequence is not dispersive".into(),
            }));
        }
        if !has_p_multiple && (i > p - 1 || distinct < i) {
            return Ok(Some(Counterexample {
                sequence: ctx.sequence_from(path).to_string(),
                clause: "no zero-sum length divisible by p, yet fewer than i distinct lengths (or i ≥ p)".into(),
            }));
        }
        Ok(None)
    })?;
    Ok(assemble(
        Statement::Corollary7,
        group,
        vec![("i".into(), json!(i)), ("davenport".into(), json!(d))],
        total,
        start,
    ))
}

/// Property B by enumeration: every minimal zero-sum sequence of length
/// `2n−1` over `C_n ⊕ C_n` must repeat some element `n−1` times.
pub fn property_b(n: u64, cfg: &RunConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    if n < 2 {
        return Err(Error::Precondition("Property B concerns n ≥ 2".into()));
    }
    if n > 5 {
        return Err(Error::ResourceLimit {
            what: format!("Property B enumeration for n = {n}"),
            limit: 5,
        });
    }
    let group = FiniteAbelianGroup::power(n, 2)?;
    let length = (2 * n - 1) as usize;
    let total = minimal_sweep(&group, length, cfg, "Property B enumeration", |_ctx, seq| {
        if seq.max_multiplicity() >= n - 1 {
            Ok(None)
        } else {
            Ok(Some(Counterexample {
                sequence: seq.to_string(),
                clause: "maximal multiplicity below n−1".into(),
            }))
        }
    })?;
    Ok(assemble(
        Statement::PropertyB,
        &group,
        vec![("n".into(), json!(n))],
        total,
        start,
    ))
}

/// Converse shape sweep: with Property B verified for m, every
/// maximal-length minimal zero-sum sequence over `C_m ⊕ C_mn` must match
/// a basis or generating form.
pub fn sweep_theorem8_converse(
    group: &FiniteAbelianGroup,
    cfg: &RunConfig,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let (m, n) = rank_two_parameters(group)?;
    let pb = property_b(m, cfg)?;
    if !pb.is_verified() {
        return Err(Error::Precondition(format!(
            "Property B failed for m = {m}; the shape characterization needs it"
        )));
    }
    let d = davenport(group, cfg)?.value;
    if d != m + m * n - 1 {
        return Err(Error::SoundnessAlarm(format!(
            "D({group}) = {d} by search but the rank-two value is m + mn − 1 = {}",
            m + m * n - 1
        )));
    }
    let total = minimal_sweep(group, d as usize, cfg, "shape converse sweep", |_ctx, seq| {
        if match_schmid(seq)?.is_some() {
            Ok(None)
        } else {
            Ok(Some(Counterexample {
                sequence: seq.to_string(),
                clause: "maximal-length minimal zero-sum sequence matches no shape".into(),
            }))
        }
    })?;
    Ok(assemble(
        Statement::Theorem8,
        group,
        vec![
            ("m".into(), json!(m)),
            ("n".into(), json!(n)),
            ("davenport".into(), json!(d)),
        ],
        total,
        start,
    ))
}

/// Single long-zero-sum instance: `T` zero-sumfree of length `D−1`, `U`
/// non-empty with `Supp(U) ⊆ Supp(T)`, Property B for m — then every
/// non-empty zero-sum subsequence of `TU` has length ≥ m.
pub fn verify_theorem12(
    core: &Sequence,
    extra: &Sequence,
    cfg: &RunConfig,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let group = core.group().clone();
    if extra.group() != &group {
        return Err(Error::GroupMismatch);
    }
    let (m, n) = rank_two_parameters(&group)?;
    let pb = property_b(m, cfg)?;
    if !pb.is_verified() {
        return Err(Error::Precondition(format!("Property B failed for m = {m}")));
    }
    let d = davenport(&group, cfg)?.value;
    if core.len() != d - 1 || !core.is_zero_sumfree()? {
        return Err(Error::Precondition(format!(
            "T must be zero-sumfree of length D−1 = {}",
            d - 1
        )));
    }
    if extra.is_empty() {
        return Err(Error::Precondition("U must be non-empty".into()));
    }
    if extra.support().any(|g| core.multiplicity(g) == 0) {
        return Err(Error::Precondition("Supp(U) must lie inside Supp(T)".into()));
    }
    let joined = core.concat(extra)?;
    let counterexamples = long_zero_sum_violation(&joined, m, &cfg.limits)?;
    Ok(assemble(
        Statement::Theorem12,
        &group,
        vec![
            ("m".into(), json!(m)),
            ("n".into(), json!(n)),
            ("core".into(), json!(core.to_string())),
            ("extra".into(), json!(extra.to_string())),
        ],
        ShardOut {
            instances: 1,
            nodes: 0,
            counterexamples,
        },
        start,
    ))
}

fn long_zero_sum_violation(
    joined: &Sequence,
    m: u64,
    limits: &Limits,
) -> Result<Vec<Counterexample>> {
    let profile = joined.zero_sum_profile_with(limits)?;
    match profile.min_length() {
        None => Err(Error::SoundnessAlarm(format!(
            "{joined} has no zero-sum subsequence although |S| ≥ D"
        ))),
        Some(min) if min < m => Ok(vec![Counterexample {
            sequence: joined.to_string(),
            clause: format!("zero-sum subsequence of length {min} < m = {m}"),
        }]),
        Some(_) => Ok(Vec::new()),
    }
}

/// Long-zero-sum sweep over all `(T, U)` with `|U| ≤ max_extra`.
pub fn sweep_theorem12(
    group: &FiniteAbelianGroup,
    max_extra: usize,
    cfg: &RunConfig,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let (m, n) = rank_two_parameters(group)?;
    if max_extra < 1 {
        return Err(Error::Precondition("need |U| ≥ 1, so max_extra ≥ 1".into()));
    }
    let pb = property_b(m, cfg)?;
    if !pb.is_verified() {
        return Err(Error::Precondition(format!("Property B failed for m = {m}")));
    }
    let d = davenport(group, cfg)?.value;
    let core_len = (d - 1) as usize;
    let ctx = GroupCtx::new(group, cfg.limits.walk_group_order)?;
    let budget = Budget::new(cfg.limits.search_nodes, "long-zero-sum sweep", cfg.progress);
    let init = SubsumState::empty(&ctx);
    let outs = run_sharded(cfg.threads, ctx.order, |first| {
        let mut budget = budget.fork();
        let mut instances = 0u64;
        let mut counterexamples = Vec::new();
        let nodes = walk_exact(
            &ctx,
            core_len,
            first..first + 1,
            &init,
            &mut budget,
            &mut |path, _state: &SubsumState| {
                let core = ctx.sequence_from(path);
                let support: Vec<_> = core.support().cloned().collect();
                for extra_len in 1..=max_extra {
                    for combo in support.iter().combinations_with_replacement(extra_len) {
                        let extra = Sequence::from_elements(
                            group.clone(),
                            combo.into_iter().cloned(),
                        )?;
                        let joined = core.concat(&extra)?;
                        instances += 1;
                        counterexamples.extend(long_zero_sum_violation(
                            &joined,
                            m,
                            &cfg.limits,
                        )?);
                    }
                }
                Ok(())
            },
        )?;
        Ok(ShardOut {
            instances,
            nodes,
            counterexamples,
        })
    })?;
    Ok(assemble(
        Statement::Theorem12,
        group,
        vec![
            ("m".into(), json!(m)),
            ("n".into(), json!(n)),
            ("max_extra".into(), json!(max_extra)),
            ("davenport".into(), json!(d)),
        ],
        merge(outs),
        start,
    ))
}

/// Residue avoidance modulo `n_1` over an arbitrary group: with
/// `|S| = D(G)+i−1`, `i ∈ [1, n_1]`, and `A` an `(i−1)`-subset of
/// `[1, n_1−1]`, some non-empty zero-sum subsequence length must avoid
/// every residue of `A` mod `n_1`.
pub fn sweep_conjecture10(
    group: &FiniteAbelianGroup,
    i: u64,
    avoid: &[u64],
    cfg: &RunConfig,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let n1 = group.invariant_factors()[0];
    if i < 1 || i > n1 {
        return Err(Error::Precondition(format!("i must lie in [1, n_1] = [1, {n1}]")));
    }
    let avoid_set = validated_avoid_set(avoid, i, n1)?;
    let d = davenport(group, cfg)?.value;
    let length = (d + i - 1) as usize;
    let avoid_vec: Vec<u64> = avoid_set.iter().copied().collect();
    let total = full_table_sweep(
        group,
        length,
        cfg,
        "mod-n_1 residue-avoidance sweep",
        |ctx, path, state| {
            let mask = state.zero_length_mask();
            if mask == 0 {
                return Err(Error::SoundnessAlarm(format!(
                    "{} has no zero-sum subsequence although |S| ≥ D = {d}",
                    ctx.sequence_from(path)
                )));
            }
            let avoided = (1..=length as u64)
                .filter(|&l| mask & (1u128 << l) != 0)
                .any(|l| !avoid_set.contains(&(l % n1)));
            if avoided {
                Ok(None)
            } else {
                Ok(Some(Counterexample {
                    sequence: ctx.sequence_from(path).to_string(),
                    clause: "every zero-sum length lands in the avoided residue set mod n_1".into(),
                }))
            }
        },
    )?;
    Ok(assemble(
        Statement::Conjecture10,
        group,
        vec![
            ("i".into(), json!(i)),
            ("A".into(), json!(avoid_vec)),
            ("davenport".into(), json!(d)),
        ],
        total,
        start,
    ))
}

/// Bounded-length zero-sums: with `|S| = η_{ℓm}(G)+i−1` and
/// `i ∈ [1, ℓm]`, some zero-sum subsequence has length in `[i, ℓm]`.
pub fn sweep_conjecture11(
    group: &FiniteAbelianGroup,
    ell: u64,
    i: u64,
    cfg: &RunConfig,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let m = group.exponent();
    let cap = ell * m;
    if ell < 1 || i < 1 || i > cap {
        return Err(Error::Precondition(format!(
            "need ℓ ≥ 1 and i ∈ [1, ℓ·m] = [1, {cap}]"
        )));
    }
    let eta_value = eta(group, ell, cfg)?.value;
    let length = (eta_value + i - 1) as usize;
    let total = full_table_sweep(
        group,
        length,
        cfg,
        "bounded-length zero-sum sweep",
        |ctx, path, state| {
            let mask = state.zero_length_mask();
            let hit = (i..=cap.min(length as u64)).any(|l| mask & (1u128 << l) != 0);
            if hit {
                Ok(None)
            } else {
                Ok(Some(Counterexample {
                    sequence: ctx.sequence_from(path).to_string(),
                    clause: format!("no zero-sum length in [{i}, {cap}]"),
                }))
            }
        },
    )?;
    Ok(assemble(
        Statement::Conjecture11,
        group,
        vec![
            ("ell".into(), json!(ell)),
            ("i".into(), json!(i)),
            ("eta".into(), json!(eta_value)),
        ],
        total,
        start,
    ))
}

/// All `(i−1)`-subsets of `[1, modulus−1]`, in lexicographic order. The
/// acceptance grids quantify over every valid avoided set.
pub fn all_avoid_sets(modulus: u64, i: u64) -> Vec<Vec<u64>> {
    if i == 0 {
        return Vec::new();
    }
    (1..modulus)
        .combinations((i - 1) as usize)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn residue_avoidance_single_instances() {
        let c2 = group("C2");
        let s = Sequence::parse(&c2, "[0 1^2]").unwrap();
        let w = verify_theorem5(&s, &[1], &cfg()).unwrap();
        assert_eq!(w.to_string(), "[1^2]");

        // smallest valid length wins: the single zero
        let c3 = group("C3");
        let s = Sequence::parse(&c3, "[0 1^3]").unwrap();
        let w = verify_theorem5(&s, &[2], &cfg()).unwrap();
        assert_eq!(w.to_string(), "[0]");
    }

    #[test]
    fn residue_avoidance_preconditions() {
        let c6 = group("C6");
        let s = Sequence::parse(&c6, "[1^6]").unwrap();
        assert!(matches!(
            verify_theorem5(&s, &[], &cfg()),
            Err(Error::Precondition(_))
        ));
        let c3 = group("C3");
        let s = Sequence::parse(&c3, "[1^2]").unwrap();
        assert!(matches!(
            verify_theorem5(&s, &[], &cfg()),
            Err(Error::Precondition(_))
        ));
        let s = Sequence::parse(&c3, "[0 1^3]").unwrap();
        // A must avoid 0 and stay below p
        assert!(matches!(
            verify_theorem5(&s, &[0], &cfg()),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            verify_theorem5(&s, &[3], &cfg()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn theorem5_sweep_c3() {
        for avoid in all_avoid_sets(3, 2) {
            let report = sweep_theorem5(&group("C3"), 2, &avoid, &cfg()).unwrap();
            assert!(report.is_verified());
            assert_eq!(report.instances_checked, 15); // C(6,4)
        }
    }

    #[test]
    fn theorem3_sweep_c3() {
        let report = sweep_theorem3(&group("C3"), 2, &cfg()).unwrap();
        assert!(report.is_verified());
        assert_eq!(report.instances_checked, 15);
        assert!(matches!(
            sweep_theorem3(&group("C3"), 3, &cfg()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn corollary7_sweep_c3() {
        let report = sweep_corollary7(&group("C3"), 2, &cfg()).unwrap();
        assert!(report.is_verified());
    }

    #[test]
    fn property_b_small() {
        let report = property_b(2, &cfg()).unwrap();
        assert!(report.is_verified());
        assert!(report.instances_checked > 0);
        let report = property_b(3, &cfg()).unwrap();
        assert!(report.is_verified());
        assert!(matches!(property_b(1, &cfg()), Err(Error::Precondition(_))));
        assert!(matches!(
            property_b(6, &cfg()),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn theorem8_converse_c2_c2() {
        let report = sweep_theorem8_converse(&group("C2xC2"), &cfg()).unwrap();
        assert!(report.is_verified());
        // the only maximal-length minimal zero-sum sequence over C_2² is
        // the basis triple
        assert_eq!(report.instances_checked, 1);
    }

    #[test]
    fn theorem12_single_instance() {
        let g = group("C2xC2");
        let core = Sequence::parse(&g, "[(1,0) (0,1)]").unwrap();
        let extra = Sequence::parse(&g, "[(1,0)]").unwrap();
        let report = verify_theorem12(&core, &extra, &cfg()).unwrap();
        assert!(report.is_verified());

        let bad_extra = Sequence::parse(&g, "[(1,1)]").unwrap();
        assert!(matches!(
            verify_theorem12(&core, &bad_extra, &cfg()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn theorem12_sweep_c2_c2() {
        let report = sweep_theorem12(&group("C2xC2"), 2, &cfg()).unwrap();
        assert!(report.is_verified());
        assert!(report.instances_checked > 0);
    }

    #[test]
    fn conjecture1_sweep_c6() {
        let report = sweep_conjecture1(&group("C6"), 1, &cfg()).unwrap();
        assert!(report.is_verified());
        assert_eq!(report.instances_checked, 462); // C(11,6)
    }

    #[test]
    fn theorem4_sweep_c2_c4() {
        let report = sweep_theorem4(&group("C2xC4"), 1, &cfg()).unwrap();
        assert!(report.is_verified());
        assert!(matches!(
            sweep_theorem4(&group("C2xC4"), 2, &cfg()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn conjecture10_sweep_c6() {
        let report = sweep_conjecture10(&group("C6"), 2, &[1], &cfg()).unwrap();
        assert!(report.is_verified());
        assert_eq!(report.instances_checked, 792); // C(12,7)
    }

    #[test]
    fn conjecture11_reduces_to_davenport_for_ell_1_c3() {
        let report = sweep_conjecture11(&group("C3"), 1, 1, &cfg()).unwrap();
        assert!(report.is_verified());
    }

    #[test]
    fn avoid_set_enumeration() {
        assert_eq!(all_avoid_sets(3, 1), vec![Vec::<u64>::new()]);
        assert_eq!(all_avoid_sets(3, 2), vec![vec![1], vec![2]]);
        assert_eq!(all_avoid_sets(5, 3), vec![
            vec![1, 2], vec![1, 3], vec![1, 4],
            vec![2, 3], vec![2, 4], vec![3, 4],
        ]);
    }

    #[test]
    fn reports_are_identical_across_worker_counts() {
        let base = sweep_theorem3(&group("C3xC3"), 1, &RunConfig::with_threads(1)).unwrap();
        for threads in [2, 8] {
            let other =
                sweep_theorem3(&group("C3xC3"), 1, &RunConfig::with_threads(threads)).unwrap();
            assert_eq!(base.instances_checked, other.instances_checked);
            assert_eq!(base.nodes, other.nodes);
            assert_eq!(base.counterexamples, other.counterexamples);
            assert_eq!(base.outcome, other.outcome);
        }
    }
}
