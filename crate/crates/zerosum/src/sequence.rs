//! The sequence calculus: multisets over a group, sums and subsums, the
//! exact zero-sum length spectrum, and the classification predicates.
//!
//! A sequence `S = Π g^{v_g(S)}` is a finite multiset of group elements;
//! order is disregarded and repetition allowed. Its zero-sum *profile* is
//! the exact set of lengths `L ∈ [1, |S|]` realized by non-empty zero-sum
//! subsequences, computed by a subset-sum dynamic program over
//! `(group element, subsequence length)` states. Witnesses are
//! reconstructed per achieved length and tie-broken toward the
//! lexicographically smallest element multiset, so reports are identical
//! across runs and platforms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::{Error, Limits, Result};

/// A finite multiset of group elements with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    group: FiniteAbelianGroup,
    multiplicities: BTreeMap<GroupElement, u64>,
    length: u64,
}

/// The exact set of lengths admitting a non-empty zero-sum subsequence,
/// with one concrete witness per achieved length.
#[derive(Debug, Clone)]
pub struct ZeroSumProfile {
    lengths: BTreeSet<u64>,
    witnesses: BTreeMap<u64, Sequence>,
}

impl ZeroSumProfile {
    pub fn lengths(&self) -> &BTreeSet<u64> {
        &self.lengths
    }

    pub fn witness(&self, length: u64) -> Option<&Sequence> {
        self.witnesses.get(&length)
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn min_length(&self) -> Option<u64> {
        self.lengths.iter().next().copied()
    }

    pub fn max_length(&self) -> Option<u64> {
        self.lengths.iter().next_back().copied()
    }
}

/// The `0^k·T·U` decomposition of a normal sequence: `k` zeros, a
/// zero-sumfree core `T` of length `D(G)−1`, and a remainder `U` supported
/// inside `Supp(T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaoZhuangSplit {
    pub zeros: u64,
    pub core: Sequence,
    pub extra: Sequence,
}

impl Sequence {
    pub fn empty(group: FiniteAbelianGroup) -> Self {
        Sequence {
            group,
            multiplicities: BTreeMap::new(),
            length: 0,
        }
    }

    pub fn from_elements<I>(group: FiniteAbelianGroup, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        let mut seq = Sequence::empty(group);
        for e in elements {
            seq.push(e, 1)?;
        }
        Ok(seq)
    }

    pub fn from_pairs<I>(group: FiniteAbelianGroup, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, u64)>,
    {
        let mut seq = Sequence::empty(group);
        for (e, k) in pairs {
            seq.push(e, k)?;
        }
        Ok(seq)
    }

    /// Adds `count` copies of an element.
    pub fn push(&mut self, element: GroupElement, count: u64) -> Result<()> {
        self.group.check(&element)?;
        if count == 0 {
            return Ok(());
        }
        *self.multiplicities.entry(element).or_insert(0) += count;
        self.length += count;
        Ok(())
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn len(&self) -> u64 {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// `v_g(S)`.
    pub fn multiplicity(&self, g: &GroupElement) -> u64 {
        self.multiplicities.get(g).copied().unwrap_or(0)
    }

    /// Support in ascending element order.
    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.multiplicities.keys()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&GroupElement, u64)> {
        self.multiplicities.iter().map(|(g, &k)| (g, k))
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.multiplicities.values().copied().max().unwrap_or(0)
    }

    /// Expands to element indices in canonical (ascending) order.
    pub(crate) fn expand_indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.length as usize);
        for (g, &k) in &self.multiplicities {
            let idx = self.group.index_of(g).expect("validated on insert") as usize;
            for _ in 0..k {
                out.push(idx);
            }
        }
        out
    }

    pub(crate) fn from_indices(group: &FiniteAbelianGroup, indices: &[usize]) -> Sequence {
        let mut seq = Sequence::empty(group.clone());
        for &i in indices {
            let e = group.element_at(i as u64).expect("in range");
            seq.push(e, 1).expect("same group");
        }
        seq
    }

    /// Concatenation (multiset union).
    pub fn concat(&self, other: &Sequence) -> Result<Sequence> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let mut out = self.clone();
        for (g, k) in other.pairs() {
            out.push(g.clone(), k)?;
        }
        Ok(out)
    }

    /// σ(S) = Σ g·v_g(S). The empty sequence sums to the identity.
    pub fn sigma(&self) -> GroupElement {
        let mut acc = self.group.identity();
        for (g, &k) in &self.multiplicities {
            let term = self
                .group
                .scalar_mul(k as i64, g)
                .expect("validated on insert");
            acc = self.group.add(&acc, &term).expect("same group");
        }
        acc
    }

    pub fn zero_sum_profile(&self) -> Result<ZeroSumProfile> {
        self.zero_sum_profile_with(&Limits::default())
    }

    /// Exact length spectrum of non-empty zero-sum subsequences.
    ///
    /// One backward pass builds, for every suffix of the canonical item
    /// list, the table of (sum, length) pairs realizable by its
    /// sub-multisets; the full-sequence table is the spectrum, and a
    /// forward include-first greedy against the suffix tables reconstructs
    /// the lexicographically smallest witness per achieved length.
    pub fn zero_sum_profile_with(&self, limits: &Limits) -> Result<ZeroSumProfile> {
        let n = self.length as usize;
        let order = self.group.order();
        let steps = (order as u128) * (n as u128) * (n as u128);
        if steps > limits.dp_steps as u128 {
            return Err(Error::ResourceLimit {
                what: format!(
                    "zero-sum profile dynamic program needs about {steps} steps \
                     (|G| = {order}, |S| = {n})"
                ),
                limit: limits.dp_steps,
            });
        }
        if order > 4_194_304 {
            return Err(Error::ResourceLimit {
                what: format!("zero-sum profile over a group of order {order}"),
                limit: 4_194_304,
            });
        }
        let order = order as usize;
        let words = order.div_ceil(64);
        let items = self.expand_indices();

        // add/sub permutations per distinct element of S
        let mut perms: BTreeMap<usize, (Vec<u32>, Vec<u32>)> = BTreeMap::new();
        for &it in &items {
            perms.entry(it).or_insert_with(|| {
                let g = self.group.element_at(it as u64).expect("in range");
                let mut add = vec![0u32; order];
                let mut sub = vec![0u32; order];
                for s in 0..order {
                    let e = self.group.element_at(s as u64).expect("in range");
                    let plus = self.group.add(&e, &g).expect("same group");
                    let minus = self.group.sub(&e, &g).expect("same group");
                    add[s] = self.group.index_of(&plus).expect("valid") as u32;
                    sub[s] = self.group.index_of(&minus).expect("valid") as u32;
                }
                (add, sub)
            });
        }

        // suffix[t]: rows ℓ = 0..=n−t of sums realizable by exactly-ℓ
        // sub-multisets of items[t..]
        let row_count = n + 1;
        let table_len = row_count * words;
        let mut suffix: Vec<Vec<u64>> = vec![vec![0u64; table_len]; n + 1];
        suffix[n][0] |= 1; // the empty subset: (sum 0, length 0)
        for t in (0..n).rev() {
            let (prev, rest) = suffix.split_at_mut(t + 1);
            let cur = &mut prev[t];
            let next = &rest[0];
            cur.copy_from_slice(next);
            let (add, _) = &perms[&items[t]];
            let max_len = n - t - 1; // longest subset of items[t+1..]
            for l in (0..=max_len).rev() {
                let src = &next[l * words..(l + 1) * words];
                for (w, &word) in src.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let b = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let s = w * 64 + b;
                        let dst = add[s] as usize;
                        cur[(l + 1) * words + dst / 64] |= 1u64 << (dst % 64);
                    }
                }
            }
        }

        let full = &suffix[0];
        let mut lengths = BTreeSet::new();
        for l in 1..=n {
            if full[l * words] & 1 != 0 {
                lengths.insert(l as u64);
            }
        }

        // Lexicographically smallest witness per achieved length: walk the
        // items in canonical order, including an item whenever the suffix
        // can still complete the remaining (sum, length) target.
        let mut witnesses = BTreeMap::new();
        for &target_len in &lengths {
            let mut need_sum = 0usize; // identity index
            let mut need_len = target_len as usize;
            let mut chosen = Vec::with_capacity(need_len);
            for (t, &it) in items.iter().enumerate() {
                if need_len == 0 {
                    break;
                }
                let (_, sub) = &perms[&it];
                let after_sum = sub[need_sum] as usize;
                let bit = |table: &Vec<u64>, l: usize, s: usize| -> bool {
                    table[l * words + s / 64] & (1u64 << (s % 64)) != 0
                };
                if bit(&suffix[t + 1], need_len - 1, after_sum) {
                    chosen.push(it);
                    need_sum = after_sum;
                    need_len -= 1;
                }
            }
            debug_assert_eq!(need_len, 0);
            debug_assert_eq!(need_sum, 0);
            witnesses.insert(target_len, Sequence::from_indices(&self.group, &chosen));
        }

        Ok(ZeroSumProfile { lengths, witnesses })
    }

    /// No non-empty zero-sum subsequence exists.
    pub fn is_zero_sumfree(&self) -> Result<bool> {
        Ok(self.zero_sum_profile()?.is_empty())
    }

    /// Non-empty with σ(S) = 0.
    pub fn is_zero_sum(&self) -> bool {
        !self.is_empty() && self.sigma().is_identity()
    }

    /// Zero-sum with no proper non-empty zero-sum subsequence.
    pub fn is_minimal_zero_sum(&self) -> Result<bool> {
        if !self.is_zero_sum() {
            return Ok(false);
        }
        let profile = self.zero_sum_profile()?;
        Ok(profile.lengths().len() == 1 && profile.max_length() == Some(self.length))
    }

    /// Every zero-sum subsequence has length at most `|S| − D + 1`, where
    /// `D` is the caller-supplied Davenport constant.
    pub fn is_normal(&self, davenport: u64) -> Result<bool> {
        if self.length < davenport {
            return Err(Error::Precondition(format!(
                "normality needs |S| ≥ D; got |S| = {} and D = {davenport}",
                self.length
            )));
        }
        let profile = self.zero_sum_profile()?;
        match profile.max_length() {
            Some(max) => Ok(max <= self.length - davenport + 1),
            None => Err(Error::InconsistentDavenport {
                davenport,
                sequence: self.to_string(),
                length: self.length,
            }),
        }
    }

    /// Contains two non-empty zero-sum subsequences of distinct lengths.
    pub fn is_dispersive(&self) -> Result<bool> {
        Ok(self.zero_sum_profile()?.lengths().len() >= 2)
    }

    /// Whether `S = 0^i·T` with `T` zero-sumfree. The zero multiplicity
    /// must be exactly `i`: an extra zero would put a zero-sum subsequence
    /// of length `i+1` inside any normal sequence of length `D+i−1`, and a
    /// missing one leaves a zero inside `T`.
    pub fn matches_normal_form(&self, i: u64) -> Result<bool> {
        if i < 1 {
            return Err(Error::Precondition(
                "the zero-prefix length i must be at least 1".into(),
            ));
        }
        if self.multiplicity(&self.group.identity()) != i {
            return Ok(false);
        }
        self.strip_zeros().is_zero_sumfree()
    }

    fn strip_zeros(&self) -> Sequence {
        let mut out = Sequence::empty(self.group.clone());
        for (g, &k) in &self.multiplicities {
            if !g.is_identity() {
                out.push(g.clone(), k).expect("same group");
            }
        }
        out
    }

    /// First valid `0^k·T·U` split in canonical order, or `None` when the
    /// non-zero part admits no split with `T` zero-sumfree of length `D−1`
    /// and `Supp(U) ⊆ Supp(T)`. Requires the sequence to be normal.
    pub fn gao_zhuang_split(&self, davenport: u64) -> Result<Option<GaoZhuangSplit>> {
        Ok(self.gao_zhuang_splits_inner(davenport, true)?.pop())
    }

    /// Every valid split, in canonical order of `T`. Existence is asserted
    /// by the structure theory but uniqueness is not; this lists them all.
    pub fn gao_zhuang_splits(&self, davenport: u64) -> Result<Vec<GaoZhuangSplit>> {
        self.gao_zhuang_splits_inner(davenport, false)
    }

    fn gao_zhuang_splits_inner(
        &self,
        davenport: u64,
        first_only: bool,
    ) -> Result<Vec<GaoZhuangSplit>> {
        if !self.is_normal(davenport)? {
            return Err(Error::Precondition(format!(
                "the split applies to normal sequences only; {self} is not normal for D = {davenport}"
            )));
        }
        let zeros = self.multiplicity(&self.group.identity());
        let nonzero = self.strip_zeros();
        let core_len = davenport - 1;
        debug_assert!(nonzero.len() >= core_len);

        let support: Vec<(GroupElement, u64)> = nonzero
            .pairs()
            .map(|(g, k)| (g.clone(), k))
            .collect();
        let mut out = Vec::new();
        // choose multiplicities for T, taking more of smaller elements
        // first so the expanded index vectors come out in lex order
        fn choose(
            seq: &Sequence,
            support: &[(GroupElement, u64)],
            pos: usize,
            remaining: u64,
            picked: &mut Vec<(GroupElement, u64)>,
            zeros: u64,
            first_only: bool,
            out: &mut Vec<GaoZhuangSplit>,
        ) -> Result<()> {
            if remaining == 0 {
                let group = seq.group().clone();
                let core = Sequence::from_pairs(group.clone(), picked.iter().cloned())?;
                if !core.is_zero_sumfree()? {
                    return Ok(());
                }
                let mut extra = Sequence::empty(group);
                for (g, k) in support {
                    let used = picked
                        .iter()
                        .find(|(h, _)| h == g)
                        .map(|(_, u)| *u)
                        .unwrap_or(0);
                    if *k > used {
                        if used == 0 {
                            return Ok(()); // Supp(U) ⊄ Supp(T)
                        }
                        extra.push(g.clone(), k - used)?;
                    }
                }
                out.push(GaoZhuangSplit {
                    zeros,
                    core,
                    extra,
                });
                return Ok(());
            }
            if pos == support.len() {
                return Ok(());
            }
            let (g, avail) = &support[pos];
            let take_max = remaining.min(*avail);
            for take in (0..=take_max).rev() {
                if take > 0 {
                    picked.push((g.clone(), take));
                }
                choose(
                    seq,
                    support,
                    pos + 1,
                    remaining - take,
                    picked,
                    zeros,
                    first_only,
                    out,
                )?;
                if take > 0 {
                    picked.pop();
                }
                if first_only && !out.is_empty() {
                    return Ok(());
                }
            }
            Ok(())
        }
        let mut picked = Vec::new();
        choose(
            self,
            &support,
            0,
            core_len,
            &mut picked,
            zeros,
            first_only,
            &mut out,
        )?;
        if first_only {
            out.truncate(1);
        }
        Ok(out)
    }

    /// Parses the sequence literal grammar: `[(a,b)^k (c,d) …]` —
    /// whitespace-separated element literals, each with an optional
    /// `^multiplicity`; the zero element may be written `0`.
    pub fn parse(group: &FiniteAbelianGroup, s: &str) -> Result<Sequence> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("sequence literal must be bracketed: {t:?}")))?;
        let mut seq = Sequence::empty(group.clone());
        for token in inner.split_whitespace() {
            let (elem_txt, mult) = match token.rsplit_once('^') {
                Some((e, m)) if !e.ends_with(',') && !e.is_empty() => {
                    let k: u64 = m
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad multiplicity {m:?}")))?;
                    if k == 0 {
                        return Err(Error::Parse("multiplicities must be positive".into()));
                    }
                    (e, k)
                }
                _ => (token, 1),
            };
            seq.push(group.parse_element(elem_txt)?, mult)?;
        }
        Ok(seq)
    }
}

impl fmt::Display for Sequence {
    /// Canonical sorted text form: ascending elements, `^k` for repeats.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (g, k)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if k == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{k}")?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    fn seq(g: &FiniteAbelianGroup, s: &str) -> Sequence {
        Sequence::parse(g, s).unwrap()
    }

    /// Independent oracle: scan all 2^|S| − 1 non-empty subsets.
    fn naive_lengths(s: &Sequence) -> BTreeSet<u64> {
        let items: Vec<GroupElement> = {
            let mut v = Vec::new();
            for (g, k) in s.pairs() {
                for _ in 0..k {
                    v.push(g.clone());
                }
            }
            v
        };
        let n = items.len();
        let mut out = BTreeSet::new();
        for mask in 1u64..(1 << n) {
            let mut acc = s.group().identity();
            for (i, item) in items.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    acc = s.group().add(&acc, item).unwrap();
                }
            }
            if acc.is_identity() {
                out.insert(mask.count_ones() as u64);
            }
        }
        out
    }

    #[test]
    fn sigma_examples() {
        let c3 = group("C3");
        assert!(Sequence::empty(c3.clone()).sigma().is_identity());
        assert!(seq(&c3, "[1^3]").sigma().is_identity());
        let c2c2 = group("C2xC2");
        assert!(seq(&c2c2, "[(1,0) (0,1) (1,1)]").sigma().is_identity());
    }

    #[test]
    fn profile_trivial_examples() {
        let c2 = group("C2");
        let p = seq(&c2, "[0 1^2]").zero_sum_profile().unwrap();
        assert_eq!(
            p.lengths().iter().copied().collect::<Vec<_>>(),
            vec![1, 2, 3]
        );

        let c3 = group("C3");
        let p = seq(&c3, "[1^3]").zero_sum_profile().unwrap();
        assert_eq!(p.lengths().iter().copied().collect::<Vec<_>>(), vec![3]);
    }

    /// Frozen via the subset-scan oracle: lengths {3, 6}.
    #[test]
    fn profile_of_basis_cubes_over_c3_c3() {
        let c3c3 = group("C3xC3");
        let s = seq(&c3c3, "[(1,0)^3 (0,1)^3]");
        assert_eq!(naive_lengths(&s).into_iter().collect::<Vec<_>>(), vec![3, 6]);
        let p = s.zero_sum_profile().unwrap();
        assert_eq!(p.lengths().iter().copied().collect::<Vec<_>>(), vec![3, 6]);
    }

    #[test]
    fn profile_witnesses_check_out() {
        let c2c4 = group("C2xC4");
        let s = seq(&c2c4, "[0 (0,1)^2 (0,2) (1,1) (1,3)]");
        let p = s.zero_sum_profile().unwrap();
        assert_eq!(naive_lengths(&s), *p.lengths());
        for &l in p.lengths() {
            let w = p.witness(l).unwrap();
            assert_eq!(w.len(), l);
            assert!(w.sigma().is_identity());
            // witnesses are sub-multisets
            for (g, k) in w.pairs() {
                assert!(s.multiplicity(g) >= k);
            }
        }
    }

    /// The witness for each length is the lexicographically smallest
    /// zero-sum sub-multiset of that length.
    #[test]
    fn profile_witness_tie_breaking() {
        let c4 = group("C4");
        // length-2 zero-sums: {1,3} and {2,2}; lex order prefers [1 3]
        let s = seq(&c4, "[1 2^2 3]");
        let p = s.zero_sum_profile().unwrap();
        let w = p.witness(2).unwrap();
        assert_eq!(w.to_string(), "[1 3]");
    }

    #[test]
    fn profile_respects_dp_ceiling() {
        let c2 = group("C2");
        let s = seq(&c2, "[1^30]");
        let limits = Limits {
            dp_steps: 10,
            ..Default::default()
        };
        assert!(matches!(
            s.zero_sum_profile_with(&limits),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn zero_sumfree_and_minimal_examples() {
        let c3 = group("C3");
        assert!(seq(&c3, "[1^2]").is_zero_sumfree().unwrap());
        assert!(seq(&c3, "[1 2]").is_minimal_zero_sum().unwrap());

        let c2c2 = group("C2xC2");
        assert!(seq(&c2c2, "[(1,0) (0,1) (1,1)]")
            .is_minimal_zero_sum()
            .unwrap());
        // not minimal: contains proper zero-sums
        assert!(!seq(&c2c2, "[(1,0)^2 (0,1)^2]")
            .is_minimal_zero_sum()
            .unwrap());
        // the empty sequence is not zero-sum
        assert!(!Sequence::empty(c3).is_zero_sum());
    }

    #[test]
    fn normality_examples() {
        let c3 = group("C3");
        assert!(seq(&c3, "[0 1^2]").is_normal(3).unwrap());
        assert!(!seq(&c3, "[1^2 2^2]").is_normal(3).unwrap());
        assert!(seq(&c3, "[0^2 1^2]").is_normal(3).unwrap());
        // |S| < D
        assert!(matches!(
            seq(&c3, "[1^2]").is_normal(3),
            Err(Error::Precondition(_))
        ));
        // zero-sumfree of length ≥ D contradicts the supplied constant
        assert!(matches!(
            seq(&c3, "[1^2]").is_normal(2),
            Err(Error::InconsistentDavenport { davenport: 2, .. })
        ));
    }

    #[test]
    fn dispersive_examples() {
        let c2 = group("C2");
        assert!(seq(&c2, "[0 1^2]").is_dispersive().unwrap());
        let c3 = group("C3");
        assert!(!seq(&c3, "[1^3]").is_dispersive().unwrap());
        let c6 = group("C6");
        assert!(!seq(&c6, "[1^6]").is_dispersive().unwrap());
    }

    #[test]
    fn normal_form_examples() {
        let c3 = group("C3");
        assert!(seq(&c3, "[0^2 1^2]").matches_normal_form(2).unwrap());
        assert!(!seq(&c3, "[0 1 2]").matches_normal_form(1).unwrap());
        let c3c3 = group("C3xC3");
        assert!(seq(&c3c3, "[0^2 (1,0) (0,1)^2]")
            .matches_normal_form(2)
            .unwrap());
        // wrong zero multiplicity
        assert!(!seq(&c3, "[0^2 1^2]").matches_normal_form(1).unwrap());
    }

    #[test]
    fn gao_zhuang_split_examples() {
        let c3 = group("C3");
        let s = seq(&c3, "[0 1^2]");
        let split = s.gao_zhuang_split(3).unwrap().unwrap();
        assert_eq!(split.zeros, 1);
        assert_eq!(split.core.to_string(), "[1^2]");
        assert!(split.extra.is_empty());

        // non-normal input: precondition error
        assert!(matches!(
            seq(&c3, "[1^4]").gao_zhuang_split(3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn gao_zhuang_lists_all_splits() {
        let c2c2 = group("C2xC2");
        // normal of length D = 3 with i = 1: [0 (1,0) (0,1)]
        let s = seq(&c2c2, "[0 (1,0) (0,1)]");
        let splits = s.gao_zhuang_splits(3).unwrap();
        assert_eq!(splits.len(), 1);
        assert_eq!(splits[0].core.to_string(), "[(0,1) (1,0)]");
        let first = s.gao_zhuang_split(3).unwrap().unwrap();
        assert_eq!(first, splits[0]);
    }

    #[test]
    fn concat_adds_sigmas() {
        let c2c4 = group("C2xC4");
        let a = seq(&c2c4, "[(1,0) (0,3)]");
        let b = seq(&c2c4, "[(1,2)^2]");
        let both = a.concat(&b).unwrap();
        assert_eq!(
            both.sigma(),
            c2c4.add(&a.sigma(), &b.sigma()).unwrap()
        );
        assert_eq!(both.len(), 4);
    }

    #[test]
    fn literals_round_trip() {
        let c3c3 = group("C3xC3");
        let s = seq(&c3c3, "[(1,2)^3 0 (2,0)]");
        assert_eq!(s.to_string(), "[0 (1,2)^3 (2,0)]");
        assert_eq!(Sequence::parse(&c3c3, &s.to_string()).unwrap(), s);

        let c6 = group("C6");
        let t = seq(&c6, "[5 1^2 0]");
        assert_eq!(t.to_string(), "[0 1^2 5]");

        assert!(Sequence::parse(&c6, "1 2").is_err());
        assert!(Sequence::parse(&c6, "[1^0]").is_err());
    }
}
