//! A constructive Alon–Friedland–Kalai subset finder.
//!
//! Given a prime `p`, exponents `d_1 ≤ … ≤ d_n`, residue sets `S_j ∋ 0`,
//! and integer vectors `a_1, …, a_m ∈ Z^n`, the theorem guarantees — once
//! `m ≥ Σ_j (p^{d_j} − card_p(S_j)) + 1` — a non-empty index set `I` and
//! members `s_j ∈ S_j` with `Σ_{i∈I} a_{i,j} ≡ s_j (mod p^{d_j})` for all
//! `j`. `card_m(S)` counts distinct residues of `S` modulo `m`; the bound
//! is evaluated with `card_p` exactly as stated, and instances where the
//! `card_p` / `card_{p^{d_j}}` readings differ are flagged rather than
//! silently resolved.
//!
//! The finder returns the lexicographically smallest index set among the
//! minimum-size solutions. Beyond 2^20 subsets it switches to a
//! meet-in-the-middle join on residue vectors that returns the identical
//! answer.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use rand::Rng;

use crate::{Error, Limits, Result};

#[derive(Debug, Clone)]
pub struct AfkInstance {
    prime: u64,
    exponents: Vec<u32>,
    residue_sets: Vec<BTreeSet<i64>>,
    vectors: Vec<Vec<i64>>,
}

/// A found subset: 0-based indices into the vector list plus the matched
/// set members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AfkSolution {
    pub indices: Vec<usize>,
    pub residues: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AfkStrategy {
    /// Pick by instance size: plain below the meet-in-the-middle threshold.
    Auto,
    /// Scan subsets in (size, lex) order.
    Plain,
    /// Split the index range in halves and join on residue vectors.
    MeetInMiddle,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct residues of a set modulo `m`.
fn card_mod(set: &BTreeSet<i64>, m: u64) -> u64 {
    let mut seen = BTreeSet::new();
    for &s in set {
        seen.insert(s.rem_euclid(m as i64));
    }
    seen.len() as u64
}

impl AfkInstance {
    pub fn new(
        prime: u64,
        exponents: Vec<u32>,
        residue_sets: Vec<Vec<i64>>,
        vectors: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::Precondition(format!("{prime} is not prime")));
        }
        let n = exponents.len();
        if n == 0 {
            return Err(Error::Precondition("need at least one coordinate".into()));
        }
        if exponents.iter().any(|&d| d == 0) {
            return Err(Error::Precondition("exponents must be positive".into()));
        }
        if exponents.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Precondition(
                "exponents must be non-decreasing".into(),
            ));
        }
        for &d in &exponents {
            if prime.checked_pow(d).is_none() {
                return Err(Error::Precondition(format!(
                    "modulus {prime}^{d} overflows"
                )));
            }
        }
        if residue_sets.len() != n {
            return Err(Error::Precondition(format!(
                "expected {n} residue sets, got {}",
                residue_sets.len()
            )));
        }
        let residue_sets: Vec<BTreeSet<i64>> = residue_sets
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect();
        for (j, s) in residue_sets.iter().enumerate() {
            let m = prime.pow(exponents[j]) as i64;
            if !s.iter().any(|&x| x.rem_euclid(m) == 0) {
                return Err(Error::Precondition(format!("residue set {j} must contain 0")));
            }
        }
        for v in &vectors {
            if v.len() != n {
                return Err(Error::Precondition(format!(
                    "every vector needs {n} coordinates, got {}",
                    v.len()
                )));
            }
        }
        Ok(AfkInstance {
            prime,
            exponents,
            residue_sets,
            vectors,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn vector_count(&self) -> usize {
        self.vectors.len()
    }

    pub fn coordinate_count(&self) -> usize {
        self.exponents.len()
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.exponents.iter().map(|&d| self.prime.pow(d)).collect()
    }

    /// `Σ_j (p^{d_j} − card_p(S_j)) + 1`, with `card` taken modulo `p`
    /// exactly as the bound is stated.
    pub fn hypothesis_bound(&self) -> u64 {
        let p = self.prime;
        self.exponents
            .iter()
            .zip(&self.residue_sets)
            .map(|(&d, s)| p.pow(d) - card_mod(s, p))
            .sum::<u64>()
            + 1
    }

    /// `m ≥ Σ_j (p^{d_j} − card_p(S_j)) + 1`.
    pub fn hypothesis_holds(&self) -> bool {
        self.vector_count() as u64 >= self.hypothesis_bound()
    }

    /// Whether counting residues mod `p` and mod `p^{d_j}` disagree for
    /// some set — the two readings of the bound then differ, and callers
    /// may want to know.
    pub fn card_readings_differ(&self) -> bool {
        self.exponents
            .iter()
            .zip(&self.residue_sets)
            .any(|(&d, s)| card_mod(s, self.prime) != card_mod(s, self.prime.pow(d)))
    }

    fn reduced_vector(&self, i: usize) -> Vec<u64> {
        let moduli = self.moduli();
        self.vectors[i]
            .iter()
            .zip(&moduli)
            .map(|(&a, &m)| a.rem_euclid(m as i64) as u64)
            .collect()
    }

    /// Residue targets per coordinate: the distinct residues of `S_j`
    /// modulo `p^{d_j}`.
    fn reduced_sets(&self) -> Vec<BTreeSet<u64>> {
        let moduli = self.moduli();
        self.residue_sets
            .iter()
            .zip(&moduli)
            .map(|(s, &m)| s.iter().map(|&x| x.rem_euclid(m as i64) as u64).collect())
            .collect()
    }

    /// Original set members matching the residues of a found subset
    /// (smallest matching member per set).
    fn members_for(&self, indices: &[usize]) -> Vec<i64> {
        let moduli = self.moduli();
        (0..self.coordinate_count())
            .map(|j| {
                let m = moduli[j] as i64;
                let sum: i64 = indices
                    .iter()
                    .map(|&i| self.vectors[i][j].rem_euclid(m))
                    .sum();
                let residue = sum.rem_euclid(m);
                *self.residue_sets[j]
                    .iter()
                    .find(|&&s| s.rem_euclid(m) == residue)
                    .expect("solution residue must come from the set")
            })
            .collect()
    }

    fn subset_matches(&self, indices: &[usize], sets: &[BTreeSet<u64>], moduli: &[u64]) -> bool {
        for j in 0..self.coordinate_count() {
            let m = moduli[j];
            let mut sum = 0u64;
            for &i in indices {
                sum = (sum + self.vectors[i][j].rem_euclid(m as i64) as u64) % m;
            }
            if !sets[j].contains(&sum) {
                return false;
            }
        }
        true
    }

    pub fn find_subset(&self, limits: &Limits) -> Result<Option<AfkSolution>> {
        self.find_subset_with(AfkStrategy::Auto, limits)
    }

    /// Smallest-size, then lexicographically smallest, index set solving
    /// the congruence system. `Ok(None)` is possible only when the
    /// hypothesis bound fails; with the bound satisfied, an exhausted
    /// search is a soundness alarm.
    pub fn find_subset_with(
        &self,
        strategy: AfkStrategy,
        limits: &Limits,
    ) -> Result<Option<AfkSolution>> {
        let m = self.vector_count();
        if m == 0 {
            return Ok(None);
        }
        if m > limits.subset_search_bits as usize {
            return Err(Error::ResourceLimit {
                what: format!("subset search over {m} vectors"),
                limit: limits.subset_search_bits as u64,
            });
        }
        let found = match strategy {
            AfkStrategy::Plain => self.find_plain(),
            AfkStrategy::MeetInMiddle => self.find_mitm(),
            AfkStrategy::Auto => {
                if m <= limits.mitm_threshold_bits as usize {
                    self.find_plain()
                } else {
                    self.find_mitm()
                }
            }
        };
        match found {
            Some(indices) => {
                let residues = self.members_for(&indices);
                Ok(Some(AfkSolution { indices, residues }))
            }
            None if self.hypothesis_holds() => Err(Error::SoundnessAlarm(format!(
                "no subset found although the hypothesis bound {} ≤ m = {} holds",
                self.hypothesis_bound(),
                m
            ))),
            None => Ok(None),
        }
    }

    fn find_plain(&self) -> Option<Vec<usize>> {
        let m = self.vector_count();
        let sets = self.reduced_sets();
        let moduli = self.moduli();
        for k in 1..=m {
            for combo in (0..m).combinations(k) {
                if self.subset_matches(&combo, &sets, &moduli) {
                    return Some(combo);
                }
            }
        }
        None
    }

    fn find_mitm(&self) -> Option<Vec<usize>> {
        let m = self.vector_count();
        let n = self.coordinate_count();
        let moduli = self.moduli();
        let half = m / 2;
        let right: Vec<usize> = (half..m).collect();

        // lex-first subset of the right half per (residue vector, size)
        let mut right_map: HashMap<(Vec<u64>, usize), Vec<usize>> = HashMap::new();
        for size in 0..=right.len() {
            for combo in right.iter().copied().combinations(size) {
                let mut vec = vec![0u64; n];
                for &i in &combo {
                    let rv = self.reduced_vector(i);
                    for j in 0..n {
                        vec[j] = (vec[j] + rv[j]) % moduli[j];
                    }
                }
                right_map.entry((vec, size)).or_insert(combo);
            }
        }

        // all reduced target vectors from the residue sets
        let sets = self.reduced_sets();
        let mut targets: Vec<Vec<u64>> = vec![Vec::new()];
        for s in &sets {
            let mut next = Vec::with_capacity(targets.len() * s.len());
            for t in &targets {
                for &r in s {
                    let mut t2 = t.clone();
                    t2.push(r);
                    next.push(t2);
                }
            }
            targets = next;
        }

        for k in 1..=m {
            let mut best: Option<Vec<usize>> = None;
            let lo = k.saturating_sub(right.len());
            for left_size in lo..=k.min(half) {
                let need = k - left_size;
                for left in (0..half).combinations(left_size) {
                    let mut lv = vec![0u64; n];
                    for &i in &left {
                        let rv = self.reduced_vector(i);
                        for j in 0..n {
                            lv[j] = (lv[j] + rv[j]) % moduli[j];
                        }
                    }
                    for t in &targets {
                        let want: Vec<u64> = (0..n)
                            .map(|j| (t[j] + moduli[j] - lv[j]) % moduli[j])
                            .collect();
                        if let Some(rest) = right_map.get(&(want, need)) {
                            let mut candidate = left.clone();
                            candidate.extend_from_slice(rest);
                            if best.as_ref().is_none_or(|b| candidate < *b) {
                                best = Some(candidate);
                            }
                        }
                    }
                }
            }
            if best.is_some() {
                return best;
            }
        }
        None
    }
}

/// The residue-avoidance reduction: a sequence `S` of length `D(G)+i−1`
/// over a p-group, written in standard-basis coordinates, plus one extra
/// coordinate of exponent 1 whose residue set is the complement of the
/// avoided set `A` in `[0, p−1]`. The hypothesis bound then equals `|S|`
/// exactly, and a found subset is a non-empty zero-sum subsequence whose
/// length avoids `A` mod p.
pub fn residue_avoidance_instance(
    seq: &crate::sequence::Sequence,
    avoid: &[u64],
) -> Result<AfkInstance> {
    let group = seq.group();
    let p = group
        .p_group_prime()
        .ok_or_else(|| Error::Precondition(format!("{group} is not a p-group")))?;
    let rank = group.rank();
    // positions 0..rank carry the standard-basis coordinates; position
    // `rank` is the extra length-counting coordinate of exponent 1
    let exp_of = |pos: usize| -> u32 {
        if pos == rank {
            return 1;
        }
        let mut d = 0u32;
        let mut rest = group.invariant_factors()[pos];
        while rest > 1 {
            rest /= p;
            d += 1;
        }
        d
    };
    let mut order: Vec<usize> = (0..=rank).collect();
    order.sort_by_key(|&pos| exp_of(pos)); // stable: basis order preserved

    let avoid: BTreeSet<u64> = avoid.iter().copied().collect();
    let complement: Vec<i64> = (0..p)
        .filter(|r| !avoid.contains(r))
        .map(|r| r as i64)
        .collect();
    let exponents: Vec<u32> = order.iter().map(|&pos| exp_of(pos)).collect();
    let residue_sets: Vec<Vec<i64>> = order
        .iter()
        .map(|&pos| if pos == rank { complement.clone() } else { vec![0] })
        .collect();

    let mut vectors = Vec::new();
    for (g, k) in seq.pairs() {
        let row: Vec<i64> = order
            .iter()
            .map(|&pos| {
                if pos == rank {
                    1
                } else {
                    g.coords()[pos] as i64
                }
            })
            .collect();
        for _ in 0..k {
            vectors.push(row.clone());
        }
    }
    AfkInstance::new(p, exponents, residue_sets, vectors)
}

/// Parameters for seeded random instance generation.
#[derive(Debug, Clone)]
pub struct RandomAfkParams {
    pub primes: Vec<u64>,
    pub max_coordinates: usize,
    pub max_exponent: u32,
    pub min_vectors: usize,
    pub max_vectors: usize,
}

impl Default for RandomAfkParams {
    fn default() -> Self {
        RandomAfkParams {
            primes: vec![2, 3, 5],
            max_coordinates: 3,
            max_exponent: 2,
            min_vectors: 1,
            max_vectors: 16,
        }
    }
}

/// Draws an instance whose hypothesis bound is satisfied and whose vector
/// count lies in the requested range.
pub fn random_instance<R: Rng>(rng: &mut R, params: &RandomAfkParams) -> AfkInstance {
    loop {
        let p = params.primes[rng.gen_range(0..params.primes.len())];
        let n = rng.gen_range(1..=params.max_coordinates);
        let mut exponents: Vec<u32> = (0..n)
            .map(|_| rng.gen_range(1..=params.max_exponent))
            .collect();
        exponents.sort_unstable();
        let moduli: Vec<u64> = exponents.iter().map(|&d| p.pow(d)).collect();
        let residue_sets: Vec<Vec<i64>> = moduli
            .iter()
            .map(|&m| {
                let mut s = vec![0i64];
                for r in 1..m {
                    if rng.gen_bool(0.5) {
                        s.push(r as i64);
                    }
                }
                s
            })
            .collect();
        let instance_bound = {
            let sets: Vec<BTreeSet<i64>> = residue_sets
                .iter()
                .map(|s| s.iter().copied().collect())
                .collect();
            exponents
                .iter()
                .zip(&sets)
                .map(|(&d, s)| p.pow(d) - card_mod(s, p))
                .sum::<u64>()
                + 1
        };
        if instance_bound > params.max_vectors as u64 {
            continue;
        }
        let lo = params.min_vectors.max(instance_bound as usize);
        let m = rng.gen_range(lo..=params.max_vectors);
        let span = *moduli.last().expect("n ≥ 1") as i64;
        let vectors: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-2 * span..=2 * span)).collect())
            .collect();
        return AfkInstance::new(p, exponents, residue_sets, vectors)
            .expect("construction is valid by design");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn doubled_one_over_c2() {
        let inst = AfkInstance::new(2, vec![1], vec![vec![0]], vec![vec![1], vec![1]]).unwrap();
        assert_eq!(inst.hypothesis_bound(), 2);
        assert!(inst.hypothesis_holds());
        let sol = inst.find_subset(&limits()).unwrap().unwrap();
        assert_eq!(sol.indices, vec![0, 1]);
        assert_eq!(sol.residues, vec![0]);
    }

    #[test]
    fn tripled_one_over_c3() {
        let inst =
            AfkInstance::new(3, vec![1], vec![vec![0]], vec![vec![1], vec![1], vec![1]]).unwrap();
        let sol = inst.find_subset(&limits()).unwrap().unwrap();
        assert_eq!(sol.indices, vec![0, 1, 2]);
    }

    #[test]
    fn hypothesis_can_fail() {
        let inst = AfkInstance::new(2, vec![1], vec![vec![0]], vec![vec![1]]).unwrap();
        assert!(!inst.hypothesis_holds());
        assert_eq!(inst.find_subset(&limits()).unwrap(), None);
    }

    /// Four arbitrary vectors over C_2 ⊕ C_2 (exponents 1,1 and S = {0})
    /// satisfy the bound D*(C_2^2) = 3 ≤ 4, so a subset always exists.
    #[test]
    fn davenport_style_instance_over_c2_c2() {
        let inst = AfkInstance::new(
            2,
            vec![1, 1],
            vec![vec![0], vec![0]],
            vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 0]],
        )
        .unwrap();
        assert!(inst.hypothesis_holds());
        let sol = inst.find_subset(&limits()).unwrap().unwrap();
        // lexicographically smallest among minimum size: {0, 3}
        assert_eq!(sol.indices, vec![0, 3]);
    }

    #[test]
    fn solution_order_is_size_then_lex() {
        // sums mod 4: both {1,3} (indices 0,2) and {2,2} (indices 1,3)
        // work at size 2; lex prefers {0, 2}
        let inst = AfkInstance::new(
            2,
            vec![2],
            vec![vec![0]],
            vec![vec![1], vec![2], vec![3], vec![2]],
        )
        .unwrap();
        let sol = inst.find_subset_with(AfkStrategy::Plain, &limits()).unwrap().unwrap();
        assert_eq!(sol.indices, vec![0, 2]);
    }

    #[test]
    fn negative_coordinates_reduce_correctly() {
        let inst = AfkInstance::new(3, vec![2], vec![vec![0]], vec![vec![-4], vec![13]]).unwrap();
        // −4 ≡ 5, 13 ≡ 4 (mod 9): 5 + 4 = 9 ≡ 0
        let sol = inst.find_subset(&limits()).unwrap().unwrap();
        assert_eq!(sol.indices, vec![0, 1]);
    }

    #[test]
    fn card_reading_flag() {
        // S = {0, 3} mod 9: card_3 = 2 … wait 3 ≡ 0 mod 3, so card_3 = 1
        // while card_9 = 2: readings differ.
        let inst =
            AfkInstance::new(3, vec![2], vec![vec![0, 3]], vec![vec![1]; 9]).unwrap();
        assert!(inst.card_readings_differ());
        let flat = AfkInstance::new(3, vec![1], vec![vec![0, 1]], vec![vec![1]; 3]).unwrap();
        assert!(!flat.card_readings_differ());
    }

    #[test]
    fn mitm_agrees_with_plain_on_seeded_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let params = RandomAfkParams {
            min_vectors: 10,
            max_vectors: 14,
            ..Default::default()
        };
        for _ in 0..50 {
            let inst = random_instance(&mut rng, &params);
            let plain = inst.find_subset_with(AfkStrategy::Plain, &limits()).unwrap();
            let mitm = inst
                .find_subset_with(AfkStrategy::MeetInMiddle, &limits())
                .unwrap();
            assert_eq!(plain, mitm);
            assert!(plain.is_some());
        }
    }

    #[test]
    fn subset_ceiling_is_enforced() {
        let inst = AfkInstance::new(2, vec![1], vec![vec![0]], vec![vec![1]; 30]).unwrap();
        assert!(matches!(
            inst.find_subset(&limits()),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn validation_rejects_bad_instances() {
        assert!(AfkInstance::new(4, vec![1], vec![vec![0]], vec![]).is_err());
        assert!(AfkInstance::new(2, vec![0], vec![vec![0]], vec![]).is_err());
        assert!(AfkInstance::new(2, vec![2, 1], vec![vec![0], vec![0]], vec![]).is_err());
        assert!(AfkInstance::new(2, vec![1], vec![vec![1]], vec![]).is_err());
        assert!(AfkInstance::new(2, vec![1], vec![vec![0]], vec![vec![1, 2]]).is_err());
    }

    /// The reduction from residue avoidance: the bound holds with equality.
    #[test]
    fn residue_avoidance_reduction_bound_is_tight() {
        let group: crate::group::FiniteAbelianGroup = "C3xC3".parse().unwrap();
        // i = 2, |S| = D + 1 = 6, A = {1}
        let seq = crate::sequence::Sequence::parse(
            &group,
            "[(0,1)^2 (1,0)^2 (1,1) (2,1)]",
        )
        .unwrap();
        let inst = residue_avoidance_instance(&seq, &[1]).unwrap();
        assert_eq!(inst.vector_count(), 6);
        assert_eq!(inst.hypothesis_bound(), 6);
        assert!(inst.hypothesis_holds());
        let sol = inst.find_subset(&Limits::default()).unwrap().unwrap();
        assert!(sol.indices.len() % 3 != 1);
    }
}
