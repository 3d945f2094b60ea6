//! The polynomial route to residue-avoiding zero-sum subsequences over an
//! elementary p-group, via Alon's Combinatorial Nullstellensatz.
//!
//! For a sequence `g_1 · … · g_m` over `C_p^r` with `m = D(G)+k−1`,
//! `k ∈ [1, p]`, and a `(k−1)`-subset `A ⊆ [1, p−1]`, build over `F_p`
//!
//! ```text
//! P(x_1,…,x_m) = Π_{h=1}^{r} Π_{j=1}^{p−1} (Σ_i a_{i,h} x_i^{p−1} − j)
//!              · Π_{j∈A} (Σ_i x_i^{p−1} − j)
//!              − δ · Π_i (x_i^{p−1} − 1)
//! ```
//!
//! with `δ` fixed by `P(0,…,0) = 0`. The product part has total degree
//! `(D(G)+k−2)(p−1) < m(p−1)`, so `deg P = m(p−1)` with the coefficient
//! of `Π x_i^{p−1}` equal to `−δ ≠ 0`, and the Nullstellensatz yields a
//! non-zero point where `P` does not vanish. Since `x^{p−1} ∈ {0, 1}`,
//! `P` only depends on the *support* of the point, which collapses the
//! `p^m` search to `2^m` support patterns; the support is exactly a
//! non-empty zero-sum subsequence whose length avoids `A` mod p.
//!
//! The polynomial is represented by this evaluation procedure plus the two
//! symbolic facts (degree, top coefficient); a dense `p^m`-sized expansion
//! exists only inside the small-instance validation tests.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::sequence::Sequence;
use crate::{Error, Limits, Result};

/// The constructed polynomial over `F_p`: coefficient rows of the
/// sequence, the avoided residue set, and the computed `δ`.
#[derive(Debug, Clone)]
pub struct PrimeFieldPoly {
    prime: u64,
    rank: usize,
    k: u64,
    /// `a_{i,h}` for the canonical expansion `g_1, …, g_m`.
    coefficients: Vec<Vec<u64>>,
    avoid: Vec<u64>,
    delta: u64,
}

impl PrimeFieldPoly {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn variables(&self) -> usize {
        self.coefficients.len()
    }

    pub fn avoid(&self) -> &[u64] {
        &self.avoid
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// `deg P = m(p−1)`.
    pub fn total_degree(&self) -> u64 {
        self.variables() as u64 * (self.prime - 1)
    }

    /// Coefficient of `Π x_i^{p−1}`: `−δ`.
    pub fn top_coefficient(&self) -> u64 {
        (self.prime - self.delta) % self.prime
    }

    /// Raw evaluation at an arbitrary point of `F_p^m`.
    pub fn eval_point(&self, point: &[u64]) -> Result<u64> {
        if point.len() != self.variables() {
            return Err(Error::Precondition(format!(
                "expected {} coordinates, got {}",
                self.variables(),
                point.len()
            )));
        }
        let p = self.prime;
        let powers: Vec<u64> = point.iter().map(|&x| pow_mod(x % p, p - 1, p)).collect();
        let mut value = 1u64;
        for h in 0..self.rank {
            let s: u64 = self
                .coefficients
                .iter()
                .zip(&powers)
                .map(|(row, &xp)| row[h] * xp % p)
                .sum::<u64>()
                % p;
            for j in 1..p {
                value = value * ((s + p - j) % p) % p;
            }
        }
        let count: u64 = powers.iter().sum::<u64>() % p;
        for &j in &self.avoid {
            value = value * ((count + p - j % p) % p) % p;
        }
        let mut correction = self.delta;
        for &xp in &powers {
            correction = correction * ((xp + p - 1) % p) % p;
        }
        Ok((value + p - correction) % p)
    }

    /// Support-pattern evaluation: the value of `P` at any point whose
    /// non-zero coordinates sit exactly on `support`.
    pub fn eval_support(&self, support: &[usize]) -> Result<u64> {
        let p = self.prime;
        let m = self.variables();
        for &i in support {
            if i >= m {
                return Err(Error::Precondition(format!(
                    "support index {i} out of range for {m} variables"
                )));
            }
        }
        if support.is_empty() {
            return Ok(0); // the origin, by the choice of δ
        }
        let mut value = 1u64;
        for h in 0..self.rank {
            let s: u64 = support
                .iter()
                .map(|&i| self.coefficients[i][h])
                .sum::<u64>()
                % p;
            for j in 1..p {
                value = value * ((s + p - j) % p) % p;
            }
        }
        let count = (support.len() as u64) % p;
        for &j in &self.avoid {
            value = value * ((count + p - j % p) % p) % p;
        }
        Ok(value)
    }
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Builds the polynomial for a sequence over an elementary p-group with
/// `|S| = D(G)+k−1`, `k ∈ [1, p]`, and a `(k−1)`-subset `A` of `[1, p−1]`.
/// `δ` is computed from the zero-point condition and must be non-zero; the
/// degree inequality is asserted at build time.
pub fn build_p(seq: &Sequence, avoid: &[u64]) -> Result<PrimeFieldPoly> {
    let group = seq.group();
    let p = group
        .p_group_prime()
        .ok_or_else(|| Error::Precondition(format!("{group} is not a p-group")))?;
    if group.invariant_factors().iter().any(|&f| f != p) {
        return Err(Error::Precondition(format!(
            "{group} is not an elementary p-group"
        )));
    }
    let r = group.rank();
    let d = r as u64 * (p - 1) + 1; // D(C_p^r), exact for p-groups
    let m = seq.len();
    if m < d {
        return Err(Error::Precondition(format!(
            "need |S| = D+k−1 ≥ D = {d}, got {m}"
        )));
    }
    let k = m - d + 1;
    if k > p {
        return Err(Error::Precondition(format!(
            "k = |S| − D + 1 = {k} exceeds p = {p}"
        )));
    }
    let avoid_set: BTreeSet<u64> = avoid.iter().copied().collect();
    if avoid_set.len() as u64 != k - 1 || avoid_set.len() != avoid.len() {
        return Err(Error::Precondition(format!(
            "the avoided set must hold exactly k − 1 = {} distinct residues",
            k - 1
        )));
    }
    if avoid_set.iter().any(|&b| b < 1 || b >= p) {
        return Err(Error::Precondition(format!(
            "avoided residues must lie in [1, {}]",
            p - 1
        )));
    }

    let coefficients: Vec<Vec<u64>> = seq
        .expand_indices()
        .iter()
        .map(|&idx| {
            group
                .element_at(idx as u64)
                .expect("in range")
                .coords()
                .to_vec()
        })
        .collect();

    // degree bookkeeping: (D+k−2)(p−1) < m(p−1)
    let product_degree = (d + k - 2) * (p - 1);
    if product_degree >= m * (p - 1) {
        return Err(Error::SoundnessAlarm(format!(
            "degree inequality failed: ({d}+{k}−2)(p−1) = {product_degree} ≥ m(p−1) = {}",
            m * (p - 1)
        )));
    }

    // δ from P(0,…,0) = 0: the product part at the origin divided by
    // Π (0^{p−1} − 1) = (−1)^m
    let mut origin = 1u64;
    for _ in 0..r {
        for j in 1..p {
            origin = origin * (p - j) % p;
        }
    }
    for &j in &avoid_set {
        origin = origin * (p - j) % p;
    }
    let sign = if m % 2 == 0 { 1 } else { p - 1 }; // (−1)^m, and its own inverse
    let delta = origin * sign % p;
    if delta == 0 {
        return Err(Error::SoundnessAlarm(
            "δ = 0 although no avoided residue is a multiple of p".into(),
        ));
    }

    Ok(PrimeFieldPoly {
        prime: p,
        rank: r,
        k,
        coefficients,
        avoid: avoid_set.into_iter().collect(),
        delta,
    })
}

/// Non-zero point with `P ≠ 0`, as a support pattern: the first non-empty
/// support in (size, lex) order whose evaluation is non-zero. The verified
/// top coefficient guarantees existence; exhaustion is a soundness alarm.
pub fn find_witness(poly: &PrimeFieldPoly, limits: &Limits) -> Result<Vec<usize>> {
    let m = poly.variables();
    if m > limits.subset_search_bits as usize {
        return Err(Error::ResourceLimit {
            what: format!("support search over {m} variables"),
            limit: limits.subset_search_bits as u64,
        });
    }
    for size in 1..=m {
        for support in (0..m).combinations(size) {
            if poly.eval_support(&support)? != 0 {
                return Ok(support);
            }
        }
    }
    Err(Error::SoundnessAlarm(format!(
        "P vanishes on every non-zero support although its top coefficient is {} ≠ 0",
        poly.top_coefficient()
    )))
}

/// The sub-multiset of the canonical expansion indexed by a witness
/// support. Guaranteed zero-sum with length avoiding the residue set; both
/// facts are re-checked against the sequence's own zero-sum profile.
pub fn extract_subsequence(seq: &Sequence, support: &[usize], avoid: &[u64]) -> Result<Sequence> {
    let items = seq.expand_indices();
    let mut sorted: Vec<usize> = support.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != support.len() || sorted.iter().any(|&i| i >= items.len()) {
        return Err(Error::Precondition(
            "the support must be a set of valid item indices".into(),
        ));
    }
    if sorted.is_empty() {
        return Err(Error::Precondition("the support must be non-empty".into()));
    }
    let picked: Vec<usize> = sorted.iter().map(|&i| items[i]).collect();
    let sub = Sequence::from_indices(seq.group(), &picked);
    let p = seq
        .group()
        .p_group_prime()
        .ok_or_else(|| Error::Precondition(format!("{} is not a p-group", seq.group())))?;
    if !sub.is_zero_sum() {
        return Err(Error::SoundnessAlarm(format!(
            "extracted subsequence {sub} of {seq} does not sum to zero"
        )));
    }
    if avoid.iter().any(|&b| sub.len() % p == b % p) {
        return Err(Error::SoundnessAlarm(format!(
            "extracted subsequence {sub} has length {} ≡ an avoided residue mod {p}",
            sub.len()
        )));
    }
    if !seq.zero_sum_profile()?.lengths().contains(&sub.len()) {
        return Err(Error::SoundnessAlarm(format!(
            "length {} missing from the zero-sum profile of {seq}",
            sub.len()
        )));
    }
    Ok(sub)
}

/// Outcome of the full pipeline: build, witness search, extraction.
#[derive(Debug, Clone)]
pub struct CnOutcome {
    pub prime: u64,
    pub rank: usize,
    pub k: u64,
    pub avoid: Vec<u64>,
    pub delta: u64,
    /// 0-based indices into the canonical expansion of the sequence.
    pub witness_support: Vec<usize>,
    pub extracted: Sequence,
}

/// Build the polynomial, search the support patterns, extract and
/// cross-check the zero-sum subsequence.
pub fn cn_pipeline(seq: &Sequence, avoid: &[u64], limits: &Limits) -> Result<CnOutcome> {
    let poly = build_p(seq, avoid)?;
    let support = find_witness(&poly, limits)?;
    let extracted = extract_subsequence(seq, &support, avoid)?;
    Ok(CnOutcome {
        prime: poly.prime(),
        rank: poly.rank(),
        k: poly.k(),
        avoid: poly.avoid().to_vec(),
        delta: poly.delta(),
        witness_support: support,
        extracted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use std::collections::BTreeMap;

    fn group(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    fn seq(g: &FiniteAbelianGroup, s: &str) -> Sequence {
        Sequence::parse(g, s).unwrap()
    }

    /// Dense multivariate polynomials over F_p for the small-instance
    /// validation: exponent vector → coefficient.
    #[derive(Clone)]
    struct Dense {
        p: u64,
        terms: BTreeMap<Vec<u16>, u64>,
    }

    impl Dense {
        fn constant(p: u64, m: usize, c: u64) -> Dense {
            let mut terms = BTreeMap::new();
            if c % p != 0 {
                terms.insert(vec![0u16; m], c % p);
            }
            Dense { p, terms }
        }

        fn monomial(p: u64, m: usize, var: usize, exp: u16, c: u64) -> Dense {
            let mut e = vec![0u16; m];
            e[var] = exp;
            let mut terms = BTreeMap::new();
            if c % p != 0 {
                terms.insert(e, c % p);
            }
            Dense { p, terms }
        }

        fn add(&self, other: &Dense) -> Dense {
            let mut terms = self.terms.clone();
            for (e, &c) in &other.terms {
                let entry = terms.entry(e.clone()).or_insert(0);
                *entry = (*entry + c) % self.p;
                if *entry == 0 {
                    terms.remove(e);
                }
            }
            Dense { p: self.p, terms }
        }

        fn mul(&self, other: &Dense) -> Dense {
            let mut terms: BTreeMap<Vec<u16>, u64> = BTreeMap::new();
            for (e1, &c1) in &self.terms {
                for (e2, &c2) in &other.terms {
                    let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                    let entry = terms.entry(e).or_insert(0);
                    *entry = (*entry + c1 * c2) % self.p;
                }
            }
            terms.retain(|_, c| *c != 0);
            Dense { p: self.p, terms }
        }

        fn total_degree(&self) -> u64 {
            self.terms
                .keys()
                .map(|e| e.iter().map(|&x| x as u64).sum())
                .max()
                .unwrap_or(0)
        }

        fn coefficient(&self, e: &[u16]) -> u64 {
            self.terms.get(e).copied().unwrap_or(0)
        }

        fn eval(&self, point: &[u64]) -> u64 {
            let mut acc = 0u64;
            for (e, &c) in &self.terms {
                let mut t = c;
                for (i, &exp) in e.iter().enumerate() {
                    t = t * pow_mod(point[i], exp as u64, self.p) % self.p;
                }
                acc = (acc + t) % self.p;
            }
            acc
        }
    }

    /// Expand the construction symbolically (test-only oracle).
    fn dense_expansion(poly: &PrimeFieldPoly) -> Dense {
        let p = poly.prime;
        let m = poly.variables();
        let mut acc = Dense::constant(p, m, 1);
        for h in 0..poly.rank {
            for j in 1..p {
                let mut factor = Dense::constant(p, m, p - j);
                for i in 0..m {
                    factor = factor.add(&Dense::monomial(
                        p,
                        m,
                        i,
                        (p - 1) as u16,
                        poly.coefficients[i][h],
                    ));
                }
                acc = acc.mul(&factor);
            }
        }
        for &j in &poly.avoid {
            let mut factor = Dense::constant(p, m, p - j);
            for i in 0..m {
                factor = factor.add(&Dense::monomial(p, m, i, (p - 1) as u16, 1));
            }
            acc = acc.mul(&factor);
        }
        let mut corr = Dense::constant(p, m, poly.delta);
        for i in 0..m {
            let factor = Dense::monomial(p, m, i, (p - 1) as u16, 1)
                .add(&Dense::constant(p, m, p - 1));
            corr = corr.mul(&factor);
        }
        // acc − corr
        let neg_corr = Dense {
            p,
            terms: corr
                .terms
                .into_iter()
                .map(|(e, c)| (e, (p - c) % p))
                .collect(),
        };
        acc.add(&neg_corr)
    }

    #[test]
    fn delta_examples() {
        let c2 = group("C2");
        let poly = build_p(&seq(&c2, "[0 1^2]"), &[1]).unwrap();
        assert_eq!(poly.delta(), 1);
        assert_eq!(poly.top_coefficient(), 1);

        let c3 = group("C3");
        let poly = build_p(&seq(&c3, "[0 1^3]"), &[2]).unwrap();
        assert_eq!(poly.delta(), 2);
        assert_eq!(poly.top_coefficient(), 1);
    }

    #[test]
    fn origin_vanishes_on_every_built_instance() {
        for (g, s, avoid) in [
            ("C2", "[0 1^2]", vec![1u64]),
            ("C3", "[0 1^3]", vec![2]),
            ("C3", "[1^3 2^2]", vec![1, 2]),
            ("C2xC2", "[(0,1)^2 (1,0) (1,1)]", vec![1]),
        ] {
            let g = group(g);
            let poly = build_p(&seq(&g, s), &avoid).unwrap();
            let origin = vec![0u64; poly.variables()];
            assert_eq!(poly.eval_point(&origin).unwrap(), 0);
            assert_eq!(poly.eval_support(&[]).unwrap(), 0);
        }
    }

    #[test]
    fn witness_and_extraction_examples() {
        let c2 = group("C2");
        let s = seq(&c2, "[0 1^2]");
        let out = cn_pipeline(&s, &[1], &Limits::default()).unwrap();
        assert_eq!(out.extracted.to_string(), "[1^2]");
        assert_eq!(out.extracted.len() % 2, 0);

        let c3 = group("C3");
        let s = seq(&c3, "[0 1^3]");
        let out = cn_pipeline(&s, &[2], &Limits::default()).unwrap();
        assert_eq!(out.extracted.to_string(), "[0]");
        assert_eq!(out.witness_support, vec![0]);
    }

    #[test]
    fn support_shortcut_matches_raw_evaluation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let c3c3 = group("C3xC3");
        let s = seq(&c3c3, "[(0,1)^2 (1,0)^2 (1,1) (2,1)]");
        let poly = build_p(&s, &[1]).unwrap();
        let m = poly.variables();
        for _ in 0..200 {
            let point: Vec<u64> = (0..m).map(|_| rng.gen_range(0..3)).collect();
            let support: Vec<usize> = (0..m).filter(|&i| point[i] != 0).collect();
            let raw = poly.eval_point(&point).unwrap();
            let shortcut = if support.is_empty() {
                poly.eval_support(&[]).unwrap()
            } else {
                poly.eval_support(&support).unwrap()
            };
            assert_eq!(raw, shortcut);
        }
    }

    /// Small-instance dense expansion: the claimed degree and top
    /// coefficient hold literally, and the evaluation procedure agrees
    /// with the expanded polynomial on every point of F_p^m.
    #[test]
    fn dense_expansion_validates_symbolic_facts() {
        for (g, s, avoid) in [
            ("C2", "[0 1^2]", vec![1u64]),
            ("C2", "[1^2]", vec![]),
            ("C3", "[0 1^3]", vec![2]),
            ("C3", "[1^4 2]", vec![1, 2]),
            ("C2xC2", "[(0,1) (1,0) (1,1)]", vec![]),
            ("C2xC2", "[(0,1)^2 (1,0) (1,1)]", vec![1]),
        ] {
            let g = group(g);
            let sv = seq(&g, s);
            let avoid2: Vec<u64> = avoid.clone();
            let p = g.p_group_prime().unwrap();
            let poly = build_p(&sv, &avoid2).unwrap();
            let dense = dense_expansion(&poly);
            let m = poly.variables();
            assert_eq!(dense.total_degree(), poly.total_degree());
            let top = vec![(p - 1) as u16; m];
            assert_eq!(dense.coefficient(&top), poly.top_coefficient());
            // full agreement on all p^m points
            let mut point = vec![0u64; m];
            loop {
                assert_eq!(dense.eval(&point), poly.eval_point(&point).unwrap());
                let mut carry = 0;
                loop {
                    if carry == m {
                        break;
                    }
                    point[carry] += 1;
                    if point[carry] < p {
                        break;
                    }
                    point[carry] = 0;
                    carry += 1;
                }
                if carry == m {
                    break;
                }
            }
        }
    }

    #[test]
    fn preconditions_are_enforced() {
        let c4 = group("C4");
        let s = seq(&c4, "[1^4]");
        assert!(matches!(build_p(&s, &[]), Err(Error::Precondition(_))));

        let c3 = group("C3");
        // k = 4 > p
        let s = seq(&c3, "[1^6]");
        assert!(matches!(build_p(&s, &[1, 2]), Err(Error::Precondition(_))));

        let s = seq(&c3, "[0 1^3]");
        assert!(matches!(build_p(&s, &[0]), Err(Error::Precondition(_))));
        assert!(matches!(build_p(&s, &[]), Err(Error::Precondition(_))));
    }

    #[test]
    fn support_ceiling_is_enforced() {
        // rank 24 elementary 2-group: D = 25, so k = 2 keeps the build
        // legal while m = 26 exceeds the 2^m support-search ceiling
        let g = FiniteAbelianGroup::power(2, 24).unwrap();
        let e1 = g.standard_basis_element(0).unwrap();
        let s = Sequence::from_pairs(g.clone(), [(e1, 26)]).unwrap();
        let poly = build_p(&s, &[1]).unwrap();
        assert!(matches!(
            find_witness(&poly, &Limits::default()),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
