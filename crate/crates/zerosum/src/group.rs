//! Finite Abelian groups in invariant-factor form and their exact
//! arithmetic.
//!
//! A group is the data of its invariant factors `2 ≤ n_1 | n_2 | … | n_r`;
//! an element is its coordinate vector with `coord_i ∈ [0, n_i)`. Elements
//! are ordered lexicographically by coordinates and indexed `0 … |G|−1` in
//! that order; everything that promises determinism leans on this order.
//! The trivial group only appears as an intermediate of canonicalization
//! and is rejected by every public constructor.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Limits, Result};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `C_{n_1} ⊕ … ⊕ C_{n_r}` with `2 ≤ n_1 | n_2 | … | n_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

/// A coordinate vector modulo the invariant factors of its group.
///
/// Ordering is lexicographic on coordinates, which matches the numeric
/// order of element indices within a fixed group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            write!(f, "0")
        } else if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            write!(f, "(")?;
            for (i, c) in self.coords.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        }
    }
}

/// An ordered tuple of elements whose coordinate box maps bijectively onto
/// the group: `(x_1, …, x_r) ↦ Σ x_i·b_i` hits every element exactly once
/// when `x_i` ranges over `[0, ord(b_i))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub elements: Vec<GroupElement>,
    pub orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// Canonicalizes an arbitrary cyclic decomposition into invariant-factor
    /// form by replacing non-dividing pairs with their (gcd, lcm) until the
    /// divisibility chain holds. Idempotent and order-preserving.
    pub fn new(factors: &[u64]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::TrivialGroup);
        }
        for &f in factors {
            if f < 2 {
                return Err(Error::InvalidFactor(f));
            }
        }
        let mut fs: Vec<u64> = factors.to_vec();
        loop {
            fs.retain(|&f| f > 1);
            fs.sort_unstable();
            let mut replaced = false;
            'scan: for i in 0..fs.len() {
                for j in i + 1..fs.len() {
                    if fs[j] % fs[i] != 0 {
                        let g = gcd(fs[i], fs[j]);
                        let l = lcm(fs[i], fs[j]);
                        fs[i] = g;
                        fs[j] = l;
                        replaced = true;
                        break 'scan;
                    }
                }
            }
            if !replaced {
                break;
            }
        }
        if fs.is_empty() {
            return Err(Error::TrivialGroup);
        }
        Ok(FiniteAbelianGroup { factors: fs })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    /// `C_n ⊕ … ⊕ C_n` with `rank` copies.
    pub fn power(n: u64, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::TrivialGroup);
        }
        Self::new(&vec![n; rank])
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        *self.factors.last().expect("non-trivial group")
    }

    /// `Some(p)` iff every invariant factor is a power of the same prime p.
    pub fn p_group_prime(&self) -> Option<u64> {
        let n = self.factors[0];
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                break;
            }
            p += 1;
        }
        if n % p != 0 {
            p = n; // n itself is prime
        }
        for &f in &self.factors {
            let mut rest = f;
            while rest % p == 0 {
                rest /= p;
            }
            if rest != 1 {
                return None;
            }
        }
        Some(p)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    /// Builds an element from arbitrary integer coordinates, reducing each
    /// modulo its factor.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        let reduced = coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement { coords: reduced })
    }

    /// The standard basis element `e_j` (coordinate 1 in position `j`).
    pub fn standard_basis_element(&self, j: usize) -> Result<GroupElement> {
        if j >= self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: j + 1,
            });
        }
        let mut coords = vec![0; self.rank()];
        coords[j] = 1;
        Ok(GroupElement { coords })
    }

    pub(crate) fn check(&self, g: &GroupElement) -> Result<()> {
        if g.coords.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: g.coords.len(),
            });
        }
        if g.coords.iter().zip(&self.factors).any(|(&c, &n)| c >= n) {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    /// Index of an element under the lexicographic order (mixed radix).
    pub fn index_of(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        let mut idx = 0u64;
        for (&c, &n) in g.coords.iter().zip(&self.factors) {
            idx = idx * n + c;
        }
        Ok(idx)
    }

    pub fn element_at(&self, mut index: u64) -> Result<GroupElement> {
        if index >= self.order() {
            return Err(Error::GroupMismatch);
        }
        let mut coords = vec![0u64; self.rank()];
        for i in (0..self.rank()).rev() {
            coords[i] = index % self.factors[i];
            index /= self.factors[i];
        }
        Ok(GroupElement { coords })
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i).expect("in range"))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| (n - x) % n)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn scalar_mul(&self, k: i64, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| {
                let k_mod = k.rem_euclid(n as i64) as u128;
                ((k_mod * x as u128) % n as u128) as u64
            })
            .collect();
        Ok(GroupElement { coords })
    }

    /// Order of the element: `lcm_i (n_i / gcd(coord_i, n_i))`, the smallest
    /// `k ≥ 1` with `k·g = 0`.
    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        let mut result = 1u64;
        for (&c, &n) in g.coords.iter().zip(&self.factors) {
            result = lcm(result, n / gcd(c, n));
        }
        Ok(result)
    }

    /// Number of distinct values of `Σ x_i·g_i` with `x_i ∈ [0, ord(g_i))`,
    /// i.e. the order of the subgroup generated by the tuple.
    fn span_size(&self, tuple: &[GroupElement]) -> u64 {
        let order = self.order() as usize;
        let mut seen = vec![false; order];
        let mut frontier = vec![self.identity()];
        seen[0] = true;
        let mut count = 1u64;
        for g in tuple {
            let ord = self.element_order(g).expect("checked element");
            let snapshot = frontier.clone();
            for x in &snapshot {
                let mut acc = x.clone();
                for _ in 1..ord {
                    acc = self.add(&acc, g).expect("same group");
                    let idx = self.index_of(&acc).expect("valid") as usize;
                    if !seen[idx] {
                        seen[idx] = true;
                        count += 1;
                        frontier.push(acc.clone());
                    }
                }
            }
        }
        count
    }

    /// Whether the tuple is a basis: the coordinate box has exactly `|G|`
    /// distinct sums. Since the box size is `Π ord(g_i)`, this forces both
    /// generation and injectivity.
    pub fn is_basis(&self, tuple: &[GroupElement]) -> Result<bool> {
        for g in tuple {
            self.check(g)?;
        }
        if tuple.len() != self.rank() {
            return Ok(false);
        }
        let box_size: u128 = tuple
            .iter()
            .map(|g| self.element_order(g).expect("checked") as u128)
            .product();
        if box_size != self.order() as u128 {
            return Ok(false);
        }
        Ok(self.span_size(tuple) == self.order())
    }

    /// Whether the pair generates the whole group.
    pub fn generates(&self, tuple: &[GroupElement]) -> Result<bool> {
        for g in tuple {
            self.check(g)?;
        }
        Ok(self.span_size(tuple) == self.order())
    }

    /// Every ordered basis, in lexicographic order of the concatenated
    /// coordinate tuples. `order_constraints` optionally pins the element
    /// order at each position.
    pub fn bases(&self, order_constraints: Option<&[u64]>) -> Result<BasisIter<'_>> {
        self.bases_with_ceiling(order_constraints, Limits::default().basis_group_order)
    }

    pub fn bases_with_ceiling(
        &self,
        order_constraints: Option<&[u64]>,
        max_order: u64,
    ) -> Result<BasisIter<'_>> {
        if self.order() > max_order {
            return Err(Error::ResourceLimit {
                what: format!(
                    "basis enumeration over a group of order {}",
                    self.order()
                ),
                limit: max_order,
            });
        }
        if let Some(cs) = order_constraints {
            if cs.len() != self.rank() {
                return Err(Error::RankMismatch {
                    expected: self.rank(),
                    got: cs.len(),
                });
            }
        }
        let candidates: Vec<Vec<u64>> = (0..self.rank())
            .map(|pos| {
                (0..self.order())
                    .filter(|&i| {
                        let g = self.element_at(i).expect("in range");
                        let ord = self.element_order(&g).expect("valid");
                        match order_constraints {
                            Some(cs) => ord == cs[pos],
                            None => true,
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(BasisIter {
            group: self,
            candidates,
            cursor: Some(vec![0; self.rank()]),
        })
    }

    /// Ordered pairs `(g_1, g_2)` generating the group with
    /// `ord(g_2) = ord_g2`, in lexicographic order of `(g_1, g_2)` indices.
    ///, unlike bases, the pairs need not be independent.
    pub fn generating_pairs(&self, ord_g2: u64) -> Result<Vec<(GroupElement, GroupElement)>> {
        self.generating_pairs_with_ceiling(ord_g2, Limits::default().basis_group_order)
    }

    pub fn generating_pairs_with_ceiling(
        &self,
        ord_g2: u64,
        max_order: u64,
    ) -> Result<Vec<(GroupElement, GroupElement)>> {
        if self.rank() > 2 {
            return Err(Error::Precondition(format!(
                "generating-pair enumeration needs rank at most 2, got rank {}",
                self.rank()
            )));
        }
        if self.order() > max_order {
            return Err(Error::ResourceLimit {
                what: format!(
                    "generating-pair enumeration over a group of order {}",
                    self.order()
                ),
                limit: max_order,
            });
        }
        let mut pairs = Vec::new();
        for i in 0..self.order() {
            let g1 = self.element_at(i)?;
            for j in 0..self.order() {
                let g2 = self.element_at(j)?;
                if self.element_order(&g2)? != ord_g2 {
                    continue;
                }
                if self.generates(&[g1.clone(), g2.clone()])? {
                    pairs.push((g1.clone(), g2));
                }
            }
        }
        Ok(pairs)
    }

    /// Parses an element literal: `0` (identity), a bare residue for rank-1
    /// groups, or a parenthesized comma list like `(1,2)`.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let t = s.trim();
        if t == "0" {
            return Ok(self.identity());
        }
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let coords: Vec<i64> = inner
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad coordinate {part:?} in {t:?}")))
                })
                .collect::<Result<_>>()?;
            return self.element(&coords);
        }
        let v: i64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad element literal {t:?}")))?;
        if self.rank() != 1 {
            return Err(Error::Parse(format!(
                "bare residue {t:?} only names elements of rank-1 groups; use (a,b,…)"
            )));
        }
        self.element(&[v])
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "C{n}")?;
        }
        Ok(())
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    /// Parses the group literal grammar: `C<n>` joined with `x`,
    /// e.g. `C3xC6`. Factors are canonicalized.
    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in s.trim().split(['x', 'X']) {
            let p = part.trim();
            let digits = p
                .strip_prefix('C')
                .or_else(|| p.strip_prefix('c'))
                .ok_or_else(|| Error::Parse(format!("expected C<n>, got {p:?}")))?;
            let n: u64 = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad cyclic order {digits:?}")))?;
            factors.push(n);
        }
        FiniteAbelianGroup::new(&factors)
    }
}

/// Restartable basis stream: an odometer over per-position candidate
/// element indices, yielding only tuples that pass the bijectivity check.
#[derive(Debug)]
pub struct BasisIter<'g> {
    group: &'g FiniteAbelianGroup,
    candidates: Vec<Vec<u64>>,
    cursor: Option<Vec<usize>>,
}

impl BasisIter<'_> {
    fn advance(&mut self) {
        let Some(cursor) = self.cursor.as_mut() else {
            return;
        };
        for pos in (0..cursor.len()).rev() {
            cursor[pos] += 1;
            if cursor[pos] < self.candidates[pos].len() {
                return;
            }
            cursor[pos] = 0;
        }
        self.cursor = None;
    }
}

impl Iterator for BasisIter<'_> {
    type Item = Basis;

    fn next(&mut self) -> Option<Basis> {
        if self.candidates.iter().any(|c| c.is_empty()) {
            return None;
        }
        loop {
            let cursor = self.cursor.as_ref()?;
            let tuple: Vec<GroupElement> = cursor
                .iter()
                .enumerate()
                .map(|(pos, &ci)| {
                    self.group
                        .element_at(self.candidates[pos][ci])
                        .expect("in range")
                })
                .collect();
            self.advance();
            if self.group.is_basis(&tuple).expect("valid elements") {
                let orders = tuple
                    .iter()
                    .map(|g| self.group.element_order(g).expect("valid"))
                    .collect();
                return Some(Basis {
                    elements: tuple,
                    orders,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn g(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn canonicalize_keeps_canonical_input() {
        let c6 = FiniteAbelianGroup::new(&[6]).unwrap();
        assert_eq!(c6.invariant_factors(), &[6]);
        assert_eq!(c6.order(), 6);
        assert_eq!(c6.exponent(), 6);
        assert_eq!(c6.rank(), 1);
    }

    #[test]
    fn canonicalize_merges_coprime_factors() {
        let c6 = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        assert_eq!(c6.invariant_factors(), &[6]);
    }

    /// Independent oracle for `[4, 6] → [2, 12]`: the multiset of element
    /// orders in Z_4 × Z_6 must match the canonical form's, and for finite
    /// Abelian groups the order statistics determine the isomorphism class.
    #[test]
    fn canonicalize_c4_c6() {
        let canon = FiniteAbelianGroup::new(&[4, 6]).unwrap();
        assert_eq!(canon.invariant_factors(), &[2, 12]);

        let mut raw_orders: BTreeMap<u64, u64> = BTreeMap::new();
        for a in 0..4u64 {
            for b in 0..6u64 {
                let ord_a = 4 / gcd(a, 4);
                let ord_b = 6 / gcd(b, 6);
                *raw_orders.entry(lcm(ord_a, ord_b)).or_default() += 1;
            }
        }
        let mut canon_orders: BTreeMap<u64, u64> = BTreeMap::new();
        for e in canon.elements() {
            *canon_orders.entry(canon.element_order(&e).unwrap()).or_default() += 1;
        }
        assert_eq!(raw_orders, canon_orders);
    }

    #[test]
    fn canonicalize_is_idempotent_and_order_preserving() {
        for factors in [
            vec![4, 6],
            vec![2, 2, 2],
            vec![12, 18],
            vec![6, 10, 15],
            vec![8, 12, 20],
        ] {
            let once = FiniteAbelianGroup::new(&factors).unwrap();
            let twice = FiniteAbelianGroup::new(once.invariant_factors()).unwrap();
            assert_eq!(once, twice);
            assert_eq!(once.order(), factors.iter().product::<u64>());
            let fs = once.invariant_factors();
            for w in fs.windows(2) {
                assert_eq!(w[1] % w[0], 0, "not a divisibility chain: {fs:?}");
            }
        }
    }

    #[test]
    fn trivial_group_is_rejected() {
        assert!(matches!(
            FiniteAbelianGroup::new(&[]),
            Err(Error::TrivialGroup)
        ));
        assert!(matches!(
            FiniteAbelianGroup::new(&[1, 2]),
            Err(Error::InvalidFactor(1))
        ));
    }

    #[test]
    fn addition_examples() {
        let c3c3 = g("C3xC3");
        let a = c3c3.element(&[1, 2]).unwrap();
        let b = c3c3.element(&[2, 2]).unwrap();
        assert_eq!(c3c3.add(&a, &b).unwrap(), c3c3.element(&[0, 1]).unwrap());
        let id = c3c3.identity();
        assert_eq!(c3c3.neg(&id).unwrap(), id);

        let c2c4 = g("C2xC4");
        let e1 = c2c4.element(&[1, 0]).unwrap();
        assert_eq!(c2c4.scalar_mul(5, &e1).unwrap(), e1);
    }

    #[test]
    fn mismatched_groups_error() {
        let c4 = g("C4");
        let c2c2 = g("C2xC2");
        let a = c2c2.element(&[1, 0]).unwrap();
        assert!(matches!(
            c4.add(&a, &a),
            Err(Error::RankMismatch { .. })
        ));
        // same rank, different factors: out-of-range coordinate
        let c9 = g("C9");
        let big = c9.element(&[7]).unwrap();
        assert!(matches!(c4.add(&big, &big), Err(Error::GroupMismatch)));
    }

    #[test]
    fn element_order_examples() {
        let c3c3 = g("C3xC3");
        assert_eq!(c3c3.element_order(&c3c3.identity()).unwrap(), 1);

        // Oracle: iterate additions until the identity recurs.
        let c2c4 = g("C2xC4");
        let order_by_iteration = |x: &GroupElement| {
            let mut acc = x.clone();
            let mut steps = 1u64;
            while !acc.is_identity() {
                acc = c2c4.add(&acc, x).unwrap();
                steps += 1;
            }
            steps
        };
        let x = c2c4.element(&[1, 2]).unwrap();
        assert_eq!(order_by_iteration(&x), 2);
        assert_eq!(c2c4.element_order(&x).unwrap(), 2);
        let y = c2c4.element(&[1, 1]).unwrap();
        assert_eq!(order_by_iteration(&y), 4);
        assert_eq!(c2c4.element_order(&y).unwrap(), 4);

        // ord(e_2) = mn in C_m ⊕ C_mn
        let c3c6 = g("C3xC6");
        let e2 = c3c6.standard_basis_element(1).unwrap();
        assert_eq!(c3c6.element_order(&e2).unwrap(), 6);
    }

    #[test]
    fn element_order_is_minimal_exhaustively() {
        for spec in ["C2", "C5", "C8", "C2xC4", "C3xC3", "C2xC2xC4", "C15", "C4xC4"] {
            let group = g(spec);
            assert!(group.order() <= 256);
            for e in group.elements() {
                let ord = group.element_order(&e).unwrap();
                assert!(group.scalar_mul(ord as i64, &e).unwrap().is_identity());
                for k in 1..ord {
                    assert!(!group.scalar_mul(k as i64, &e).unwrap().is_identity());
                }
            }
        }
    }

    #[test]
    fn indexing_round_trips_in_lex_order() {
        let group = g("C2xC6");
        let mut prev: Option<GroupElement> = None;
        for i in 0..group.order() {
            let e = group.element_at(i).unwrap();
            assert_eq!(group.index_of(&e).unwrap(), i);
            if let Some(p) = prev {
                assert!(p < e, "elements must come out in lexicographic order");
            }
            prev = Some(e);
        }
    }

    /// |GL(2, F_2)| = 6, counted directly from generating pairs.
    #[test]
    fn bases_of_c2_c2() {
        let group = g("C2xC2");
        let bases: Vec<Basis> = group.bases(None).unwrap().collect();
        assert_eq!(bases.len(), 6);

        let mut direct = 0;
        for a in group.elements() {
            for b in group.elements() {
                if !a.is_identity() && !b.is_identity() && a != b {
                    direct += 1;
                }
            }
        }
        assert_eq!(direct, 6);
    }

    #[test]
    fn bases_of_c4_with_order_constraint() {
        let group = g("C4");
        let bases: Vec<Basis> = group.bases(Some(&[4])).unwrap().collect();
        let found: Vec<u64> = bases
            .iter()
            .map(|b| group.index_of(&b.elements[0]).unwrap())
            .collect();
        assert_eq!(found, vec![1, 3]);
    }

    #[test]
    fn constrained_bases_match_filtered_full_enumeration() {
        let group = g("C2xC4");
        let constrained: Vec<Basis> = group.bases(Some(&[2, 4])).unwrap().collect();
        let filtered: Vec<Basis> = group
            .bases(None)
            .unwrap()
            .filter(|b| b.orders == [2, 4])
            .collect();
        assert_eq!(constrained, filtered);
        assert!(!constrained.is_empty());
        for b in &constrained {
            assert_eq!(group.element_order(&b.elements[1]).unwrap(), 4);
        }
    }

    #[test]
    fn every_basis_box_is_bijective() {
        for spec in ["C2xC2", "C2xC4", "C3xC3", "C8"] {
            let group = g(spec);
            // walk the coordinate box explicitly
            fn rec(
                group: &FiniteAbelianGroup,
                basis: &Basis,
                pos: usize,
                acc: &GroupElement,
                seen: &mut [bool],
                count: &mut u64,
            ) {
                if pos == basis.elements.len() {
                    let idx = group.index_of(acc).unwrap() as usize;
                    assert!(!seen[idx], "duplicate image");
                    seen[idx] = true;
                    *count += 1;
                    return;
                }
                let mut cur = acc.clone();
                for _ in 0..basis.orders[pos] {
                    rec(group, basis, pos + 1, &cur, seen, count);
                    cur = group.add(&cur, &basis.elements[pos]).unwrap();
                }
            }
            for basis in group.bases(None).unwrap() {
                let mut seen = vec![false; group.order() as usize];
                let mut count = 0u64;
                rec(&group, &basis, 0, &group.identity(), &mut seen, &mut count);
                assert_eq!(count, group.order());
            }
        }
    }

    #[test]
    fn generating_pairs_of_c2_c2_are_distinct_nonzero_pairs() {
        let group = g("C2xC2");
        let pairs = group.generating_pairs(2).unwrap();
        assert_eq!(pairs.len(), 6);
        for (a, b) in &pairs {
            assert!(!a.is_identity() && !b.is_identity() && a != b);
        }
    }

    #[test]
    fn generating_pairs_of_c4() {
        let group = g("C4");
        let pairs = group.generating_pairs(4).unwrap();
        // any x paired with either generator
        assert_eq!(pairs.len(), 8);
        for (_, g2) in &pairs {
            assert_eq!(group.element_order(g2).unwrap(), 4);
        }
    }

    /// Pairs where g_1 itself has order 4 (so it is no basis complement)
    /// still generate C_2 ⊕ C_4.
    #[test]
    fn generating_pairs_include_non_basis_pairs() {
        let group = g("C2xC4");
        let pairs = group.generating_pairs(4).unwrap();
        let g1 = group.element(&[0, 1]).unwrap();
        let g2 = group.element(&[1, 1]).unwrap();
        assert!(pairs.contains(&(g1.clone(), g2.clone())));
        assert!(!group.is_basis(&[g1, g2]).unwrap());
    }

    #[test]
    fn basis_ceiling_is_enforced() {
        let group = g("C2xC2");
        let err = group.bases_with_ceiling(None, 2).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { limit: 2, .. }));
    }

    #[test]
    fn group_literals_parse_and_display() {
        assert_eq!(g("C3xC6").to_string(), "C3xC6");
        assert_eq!(g("C2xC3").to_string(), "C6");
        assert_eq!(g("c2Xc12").invariant_factors(), &[2, 12]);
        assert!("D4".parse::<FiniteAbelianGroup>().is_err());
        assert!("C0".parse::<FiniteAbelianGroup>().is_err());
    }

    #[test]
    fn element_literals_parse() {
        let c3c3 = g("C3xC3");
        assert_eq!(c3c3.parse_element("0").unwrap(), c3c3.identity());
        assert_eq!(
            c3c3.parse_element("(1,2)").unwrap(),
            c3c3.element(&[1, 2]).unwrap()
        );
        assert_eq!(
            c3c3.parse_element("(-1, 5)").unwrap(),
            c3c3.element(&[2, 2]).unwrap()
        );
        let c6 = g("C6");
        assert_eq!(c6.parse_element("4").unwrap(), c6.element(&[4]).unwrap());
        assert!(c3c3.parse_element("4").is_err());
    }
}
