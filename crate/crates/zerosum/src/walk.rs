//! Canonical multiset search machinery shared by the invariant searches
//! and the exhaustive sweeps.
//!
//! Sequences of a fixed length over a group are enumerated exactly once
//! each as non-decreasing element-index vectors. Search states ride along
//! the DFS and prune subtrees; every state update is incremental, so a
//! node costs O(|G|·depth) bit operations at worst. Shards (fixed first
//! element) are independent, which is what the parallel sweeps exploit.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::group::FiniteAbelianGroup;
use crate::sequence::Sequence;
use crate::{Error, Result};

/// Precomputed index arithmetic for one group.
pub(crate) struct GroupCtx {
    pub group: FiniteAbelianGroup,
    pub order: usize,
    add: Vec<u32>,
}

impl GroupCtx {
    pub fn new(group: &FiniteAbelianGroup, max_order: u64) -> Result<Self> {
        let order = group.order();
        if order > max_order {
            return Err(Error::ResourceLimit {
                what: format!("exhaustive walk over a group of order {order}"),
                limit: max_order,
            });
        }
        let order = order as usize;
        let mut add = vec![0u32; order * order];
        for a in 0..order {
            let ga = group.element_at(a as u64).expect("in range");
            for b in a..order {
                let gb = group.element_at(b as u64).expect("in range");
                let s = group.add(&ga, &gb).expect("same group");
                let idx = group.index_of(&s).expect("valid") as u32;
                add[a * order + b] = idx;
                add[b * order + a] = idx;
            }
        }
        Ok(GroupCtx {
            group: group.clone(),
            order,
            add,
        })
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b] as usize
    }

    pub fn words(&self) -> usize {
        self.order.div_ceil(64)
    }

    pub fn sequence_from(&self, indices: &[usize]) -> Sequence {
        Sequence::from_indices(&self.group, indices)
    }
}

/// Node-count ceiling shared across shards. The shared counter decides
/// aborts; exact per-shard totals come from the walk return values, so
/// successful runs stay deterministic for every thread count.
#[derive(Clone)]
pub(crate) struct Budget {
    shared: Arc<AtomicU64>,
    limit: u64,
    what: &'static str,
    progress: bool,
    local: u64,
    shared_seen: u64,
}

const FLUSH_EVERY: u64 = 4096;

impl Budget {
    pub fn new(limit: u64, what: &'static str, progress: bool) -> Self {
        Budget {
            shared: Arc::new(AtomicU64::new(0)),
            limit,
            what,
            progress,
            local: 0,
            shared_seen: 0,
        }
    }

    pub fn fork(&self) -> Self {
        Budget {
            shared: Arc::clone(&self.shared),
            limit: self.limit,
            what: self.what,
            progress: self.progress,
            local: 0,
            shared_seen: 0,
        }
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.local += 1;
        if self.local >= FLUSH_EVERY || self.shared_seen + self.local > self.limit {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        let before = self.shared.fetch_add(self.local, Ordering::Relaxed);
        let total = before + self.local;
        if self.progress && total / 1_000_000 != before / 1_000_000 {
            eprintln!("… {total} nodes ({})", self.what);
        }
        self.local = 0;
        self.shared_seen = total;
        if total > self.limit {
            return Err(Error::ResourceLimit {
                what: format!("{} (visited about {total} nodes)", self.what),
                limit: self.limit,
            });
        }
        Ok(())
    }
}

/// A prunable search state. `try_extend` writes the extended state into
/// `out` and reports whether the extension survives.
pub(crate) trait WalkState: Clone + Send {
    fn try_extend(&self, ctx: &GroupCtx, elem: usize, out: &mut Self) -> bool;
}

/// No pruning.
#[derive(Clone)]
pub(crate) struct PlainState;

impl WalkState for PlainState {
    fn try_extend(&self, _ctx: &GroupCtx, _elem: usize, _out: &mut Self) -> bool {
        true
    }
}

/// Bitset of the sums of all non-empty sub-multisets. Prunes as soon as
/// the identity becomes a subsum, so surviving prefixes are exactly the
/// zero-sumfree ones.
#[derive(Clone)]
pub(crate) struct SubsumState {
    words: Box<[u64]>,
}

impl SubsumState {
    pub fn empty(ctx: &GroupCtx) -> Self {
        SubsumState {
            words: vec![0u64; ctx.words()].into_boxed_slice(),
        }
    }
}

impl WalkState for SubsumState {
    fn try_extend(&self, ctx: &GroupCtx, elem: usize, out: &mut Self) -> bool {
        out.words.copy_from_slice(&self.words);
        out.words[elem / 64] |= 1u64 << (elem % 64);
        for (w, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let t = ctx.add_idx(w * 64 + b, elem);
                out.words[t / 64] |= 1u64 << (t % 64);
            }
        }
        out.words[0] & 1 == 0
    }
}

/// Zero-sumfree prefix tracking plus the running sum, for minimal
/// zero-sum enumeration: prefixes below the target length must be
/// zero-sumfree, and the final element must close the sum.
#[derive(Clone)]
pub(crate) struct MinimalState {
    pub subsums: SubsumState,
    pub sum: usize,
    pub remaining: usize,
}

impl MinimalState {
    pub fn new(ctx: &GroupCtx, length: usize) -> Self {
        MinimalState {
            subsums: SubsumState::empty(ctx),
            sum: 0,
            remaining: length,
        }
    }
}

impl WalkState for MinimalState {
    fn try_extend(&self, ctx: &GroupCtx, elem: usize, out: &mut Self) -> bool {
        debug_assert!(self.remaining > 0);
        out.sum = ctx.add_idx(self.sum, elem);
        out.remaining = self.remaining - 1;
        if self.remaining == 1 {
            // last slot: only full-sum closure matters; the subsum set is
            // stale past this point
            out.subsums.words.copy_from_slice(&self.subsums.words);
            return out.sum == 0;
        }
        self.subsums.try_extend(ctx, elem, &mut out.subsums)
    }
}

/// Non-empty subsums keyed by length residue class mod `m`. Prunes when a
/// non-empty zero subsum of length ≡ 0 (mod m) appears.
#[derive(Clone)]
pub(crate) struct ModLenState {
    rows: Box<[u64]>,
    words: usize,
    modulus: usize,
}

impl ModLenState {
    pub fn empty(ctx: &GroupCtx, modulus: usize) -> Self {
        ModLenState {
            rows: vec![0u64; ctx.words() * modulus].into_boxed_slice(),
            words: ctx.words(),
            modulus,
        }
    }
}

impl WalkState for ModLenState {
    fn try_extend(&self, ctx: &GroupCtx, elem: usize, out: &mut Self) -> bool {
        out.rows.copy_from_slice(&self.rows);
        for r in 0..self.modulus {
            let dst_row = (r + 1) % self.modulus;
            for w in 0..self.words {
                let mut bits = self.rows[r * self.words + w];
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let t = ctx.add_idx(w * 64 + b, elem);
                    out.rows[dst_row * self.words + t / 64] |= 1u64 << (t % 64);
                }
            }
        }
        let singleton_row = 1 % self.modulus;
        out.rows[singleton_row * self.words + elem / 64] |= 1u64 << (elem % 64);
        out.rows[0] & 1 == 0
    }
}

/// What a full length table should prune on.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum LenRule {
    /// Keep everything (sweeps classify at the leaves).
    None,
    /// Prune once a zero subsum longer than the bound exists
    /// (normal-sequence filtering).
    ZeroLongerThan(usize),
    /// Prune once a zero subsum of length ≤ the bound exists
    /// (η-avoider searches; rows are capped at the bound).
    ZeroAtMost(usize),
}

/// Exact (sum, length) reachability for non-empty sub-multisets, with rows
/// for lengths 1..=max_len.
#[derive(Clone)]
pub(crate) struct LenTableState {
    rows: Box<[u64]>,
    words: usize,
    max_len: usize,
    depth: usize,
    rule: LenRule,
}

impl LenTableState {
    pub fn empty(ctx: &GroupCtx, max_len: usize, rule: LenRule) -> Self {
        assert!(max_len >= 1 && max_len < 128);
        LenTableState {
            rows: vec![0u64; ctx.words() * max_len].into_boxed_slice(),
            words: ctx.words(),
            max_len,
            depth: 0,
            rule,
        }
    }

    #[inline]
    fn row(&self, len: usize) -> &[u64] {
        &self.rows[(len - 1) * self.words..len * self.words]
    }

    /// Bitmask over lengths 1..=max_len whose row reaches the identity.
    pub fn zero_length_mask(&self) -> u128 {
        let mut mask = 0u128;
        for l in 1..=self.max_len.min(self.depth) {
            if self.row(l)[0] & 1 != 0 {
                mask |= 1u128 << l;
            }
        }
        mask
    }
}

impl WalkState for LenTableState {
    fn try_extend(&self, ctx: &GroupCtx, elem: usize, out: &mut Self) -> bool {
        out.rows.copy_from_slice(&self.rows);
        out.depth = self.depth + 1;
        out.max_len = self.max_len;
        out.rule = self.rule;
        let top = self.depth.min(self.max_len - 1);
        for l in (1..=top).rev() {
            let src = (l - 1) * self.words;
            let dst = l * self.words;
            for w in 0..self.words {
                let mut bits = self.rows[src + w];
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let t = ctx.add_idx(w * 64 + b, elem);
                    out.rows[dst + t / 64] |= 1u64 << (t % 64);
                }
            }
        }
        out.rows[elem / 64] |= 1u64 << (elem % 64); // length-1 row
        match self.rule {
            LenRule::None => true,
            LenRule::ZeroLongerThan(bound) => {
                for l in bound + 1..=out.depth.min(out.max_len) {
                    if out.row(l)[0] & 1 != 0 {
                        return false;
                    }
                }
                true
            }
            LenRule::ZeroAtMost(bound) => {
                for l in 1..=bound.min(out.depth).min(out.max_len) {
                    if out.row(l)[0] & 1 != 0 {
                        return false;
                    }
                }
                true
            }
        }
    }
}

/// DFS over canonical (non-decreasing) index vectors of exactly `length`
/// elements, restricted to first elements in `first_range`. Calls
/// `on_leaf` for every surviving full-length vector and returns the number
/// of accepted tree nodes.
pub(crate) fn walk_exact<S: WalkState>(
    ctx: &GroupCtx,
    length: usize,
    first_range: std::ops::Range<usize>,
    init: &S,
    budget: &mut Budget,
    on_leaf: &mut dyn FnMut(&[usize], &S) -> Result<()>,
) -> Result<u64> {
    if length == 0 {
        return Ok(0);
    }
    let mut states: Vec<S> = vec![init.clone(); length + 1];
    let mut path: Vec<usize> = Vec::with_capacity(length);
    let mut nodes = 0u64;
    rec_exact(
        ctx,
        length,
        0,
        first_range,
        &mut states,
        &mut path,
        budget,
        &mut nodes,
        on_leaf,
    )?;
    Ok(nodes)
}

#[allow(clippy::too_many_arguments)]
fn rec_exact<S: WalkState>(
    ctx: &GroupCtx,
    length: usize,
    depth: usize,
    range: std::ops::Range<usize>,
    states: &mut [S],
    path: &mut Vec<usize>,
    budget: &mut Budget,
    nodes: &mut u64,
    on_leaf: &mut dyn FnMut(&[usize], &S) -> Result<()>,
) -> Result<()> {
    for elem in range {
        budget.tick()?;
        let (head, tail) = states.split_at_mut(depth + 1);
        let survives = head[depth].try_extend(ctx, elem, &mut tail[0]);
        if !survives {
            continue;
        }
        *nodes += 1;
        path.push(elem);
        if depth + 1 == length {
            on_leaf(path, &states[depth + 1])?;
        } else {
            rec_exact(
                ctx,
                length,
                depth + 1,
                elem..ctx.order,
                states,
                path,
                budget,
                nodes,
                on_leaf,
            )?;
        }
        path.pop();
    }
    Ok(())
}

/// Result of a deepest-survivor search over a prefix-closed state space.
#[derive(Debug)]
pub(crate) struct Deepest {
    pub depth: usize,
    /// First (lexicographically smallest) survivor at the maximal depth.
    pub witness: Vec<usize>,
    pub nodes: u64,
}

/// Explores the full tree of surviving canonical sequences and reports the
/// maximal depth reached. Valid whenever the state space is closed under
/// taking sub-multisets, which holds for all the avoider searches here.
pub(crate) fn walk_deepest<S: WalkState>(
    ctx: &GroupCtx,
    init: &S,
    budget: &mut Budget,
) -> Result<Deepest> {
    let mut best = Deepest {
        depth: 0,
        witness: Vec::new(),
        nodes: 0,
    };
    let mut states: Vec<S> = vec![init.clone()];
    let mut path: Vec<usize> = Vec::new();
    rec_deepest(ctx, 0, 0, &mut states, &mut path, budget, &mut best)?;
    Ok(best)
}

fn rec_deepest<S: WalkState>(
    ctx: &GroupCtx,
    depth: usize,
    min_elem: usize,
    states: &mut Vec<S>,
    path: &mut Vec<usize>,
    budget: &mut Budget,
    best: &mut Deepest,
) -> Result<()> {
    if states.len() == depth + 1 {
        states.push(states[depth].clone());
    }
    for elem in min_elem..ctx.order {
        budget.tick()?;
        let (head, tail) = states.split_at_mut(depth + 1);
        if !head[depth].try_extend(ctx, elem, &mut tail[0]) {
            continue;
        }
        best.nodes += 1;
        path.push(elem);
        if path.len() > best.depth {
            best.depth = path.len();
            best.witness = path.clone();
        }
        rec_deepest(ctx, depth + 1, elem, states, path, budget, best)?;
        path.pop();
    }
    Ok(())
}

/// Runs `f` once per shard (one shard per first element), in a rayon pool
/// of the requested size, and returns the outputs in shard order so merges
/// are deterministic for every worker count.
pub(crate) fn run_sharded<T: Send, F>(threads: usize, shards: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T> + Sync,
{
    use rayon::prelude::*;
    let run = || (0..shards).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
    if threads == 0 {
        run()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Precondition(format!("cannot build thread pool: {e}")))?;
        pool.install(run)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn ctx(spec: &str) -> GroupCtx {
        let g: FiniteAbelianGroup = spec.parse().unwrap();
        GroupCtx::new(&g, 4096).unwrap()
    }

    fn collect_leaves<S: WalkState>(ctx: &GroupCtx, len: usize, init: &S) -> Vec<Vec<usize>> {
        let mut budget = Budget::new(u64::MAX, "test", false);
        let mut out = Vec::new();
        walk_exact(ctx, len, 0..ctx.order, init, &mut budget, &mut |path, _| {
            out.push(path.to_vec());
            Ok(())
        })
        .unwrap();
        out
    }

    #[test]
    fn plain_walk_counts_multisets() {
        let c = ctx("C2");
        let leaves = collect_leaves(&c, 2, &PlainState);
        assert_eq!(leaves, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);

        // stars and bars: C(|G|+L−1, L)
        let c = ctx("C3xC3");
        let leaves = collect_leaves(&c, 3, &PlainState);
        assert_eq!(leaves.len(), 165); // C(11,3)
        let distinct: BTreeSet<_> = leaves.iter().cloned().collect();
        assert_eq!(distinct.len(), leaves.len());
        for l in &leaves {
            assert!(l.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn zero_sumfree_walk_matches_generate_and_test() {
        for spec in ["C3", "C2xC2", "C6", "C3xC3"] {
            let c = ctx(spec);
            for len in 1..=4usize {
                let pruned = collect_leaves(&c, len, &SubsumState::empty(&c));
                let brute: Vec<Vec<usize>> = collect_leaves(&c, len, &PlainState)
                    .into_iter()
                    .filter(|idxs| {
                        c.sequence_from(idxs).is_zero_sumfree().unwrap()
                    })
                    .collect();
                assert_eq!(pruned, brute, "{spec} length {len}");
            }
        }
    }

    #[test]
    fn zero_sumfree_filter_example_over_c3() {
        let c = ctx("C3");
        let leaves = collect_leaves(&c, 2, &SubsumState::empty(&c));
        // {1·1, 2·2}: 1·2 is excluded because 1+2 = 0
        assert_eq!(leaves, vec![vec![1, 1], vec![2, 2]]);
    }

    #[test]
    fn len_table_matches_profile() {
        let c = ctx("C2xC4");
        let len = 5;
        let init = LenTableState::empty(&c, len, LenRule::None);
        let mut budget = Budget::new(u64::MAX, "test", false);
        walk_exact(&c, len, 0..c.order, &init, &mut budget, &mut |path, st| {
            let seq = c.sequence_from(path);
            let profile = seq.zero_sum_profile().unwrap();
            let mask = st.zero_length_mask();
            for l in 1..=len {
                assert_eq!(
                    mask & (1 << l) != 0,
                    profile.lengths().contains(&(l as u64)),
                    "{seq} length {l}"
                );
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn deepest_zero_sumfree_matches_known_davenport() {
        // D(C_3 ⊕ C_3) = 5, so the deepest zero-sumfree sequence has 4 items
        let c = ctx("C3xC3");
        let mut budget = Budget::new(u64::MAX, "test", false);
        let deepest = walk_deepest(&c, &SubsumState::empty(&c), &mut budget).unwrap();
        assert_eq!(deepest.depth, 4);
        let witness = c.sequence_from(&deepest.witness);
        assert!(witness.is_zero_sumfree().unwrap());
    }

    #[test]
    fn budget_aborts() {
        let c = ctx("C3xC3");
        let mut budget = Budget::new(10, "test", false);
        let err = walk_deepest(&c, &SubsumState::empty(&c), &mut budget).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { limit: 10, .. }));
    }

    #[test]
    fn minimal_state_walk_finds_minimal_zero_sums() {
        let c = ctx("C3xC3");
        let len = 3;
        let init = MinimalState::new(&c, len);
        let mut budget = Budget::new(u64::MAX, "test", false);
        let mut found = Vec::new();
        walk_exact(&c, len, 0..c.order, &init, &mut budget, &mut |path, _| {
            let seq = c.sequence_from(path);
            if seq.is_minimal_zero_sum().unwrap() {
                found.push(seq.to_string());
            }
            Ok(())
        })
        .unwrap();
        let brute: Vec<String> = collect_leaves(&c, len, &PlainState)
            .into_iter()
            .map(|idxs| c.sequence_from(&idxs))
            .filter(|s| s.is_minimal_zero_sum().unwrap())
            .map(|s| s.to_string())
            .collect();
        assert_eq!(found, brute);
        assert!(found.contains(&"[(1,0) (1,1) (1,2)]".to_string()));
    }
}
