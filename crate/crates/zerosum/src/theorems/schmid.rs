//! Generators and matchers for the two shapes of maximal-length minimal
//! zero-sum sequences over a rank-two group `G ≅ C_m ⊕ C_mn` (`m ≥ 2`),
//! whose Davenport constant is `m + mn − 1`:
//!
//! * basis form — `e_j^{ord(e_j)−1} · Π_{i=1}^{ord(e_k)} (−x_i e_j + e_k)`
//!   for a basis `(e_1, e_2)` with `ord(e_2) = mn`, `{j,k} = {1,2}`, and
//!   naturals `x_i` with `Σ x_i ≡ −1 (mod ord(e_j))`;
//! * generating form — `g_1^{sm−1} · Π_{i=1}^{(n+1−s)m} (−x_i g_1 + g_2)`
//!   for `s ∈ [1, n]`, a generating pair `{g_1, g_2}` with
//!   `ord(g_2) = mn` and (`s = 1` or `m·g_1 = m·g_2`), and naturals `x_i`
//!   with `Σ x_i = m − 1`.
//!
//! The `s = 1 or m·g_1 = m·g_2` clause is tested verbatim; no
//! strengthening is assumed.

use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::sequence::Sequence;
use crate::{Error, Limits, Result};

/// A parameterization of one of the two shapes. Multipliers are kept in
/// non-decreasing order; the built sequence only depends on their multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchmidForm {
    Basis {
        group: FiniteAbelianGroup,
        elements: [GroupElement; 2],
        /// Index `j` of the repeated basis element (0 or 1).
        head: usize,
        multipliers: Vec<u64>,
    },
    Generating {
        group: FiniteAbelianGroup,
        pair: [GroupElement; 2],
        s: u64,
        multipliers: Vec<u64>,
    },
}

impl SchmidForm {
    pub fn kind_name(&self) -> &'static str {
        match self {
            SchmidForm::Basis { .. } => "basis",
            SchmidForm::Generating { .. } => "generating",
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        match self {
            SchmidForm::Basis { group, .. } | SchmidForm::Generating { group, .. } => group,
        }
    }
}

/// `(m, n)` with `G ≅ C_m ⊕ C_mn`; requires rank exactly 2.
pub fn rank_two_parameters(group: &FiniteAbelianGroup) -> Result<(u64, u64)> {
    if group.rank() != 2 {
        return Err(Error::Precondition(format!(
            "{group} has rank {}, but the maximal-sequence shapes need rank 2",
            group.rank()
        )));
    }
    let f = group.invariant_factors();
    Ok((f[0], f[1] / f[0]))
}

/// Builds the sequence a form describes, validating every invariant of the
/// parameterization first.
pub fn generate_schmid(form: &SchmidForm) -> Result<Sequence> {
    let group = form.group().clone();
    let (m, n) = rank_two_parameters(&group)?;
    let mn = m * n;
    match form {
        SchmidForm::Basis {
            elements,
            head,
            multipliers,
            ..
        } => {
            if *head > 1 {
                return Err(Error::Precondition("head index must be 0 or 1".into()));
            }
            if !group.is_basis(elements)? {
                return Err(Error::Precondition(format!(
                    "({}, {}) is not a basis of {group}",
                    elements[0], elements[1]
                )));
            }
            if group.element_order(&elements[1])? != mn {
                return Err(Error::Precondition(format!(
                    "the second basis element must have order {mn}"
                )));
            }
            let e_j = &elements[*head];
            let e_k = &elements[1 - *head];
            let ord_j = group.element_order(e_j)?;
            let ord_k = group.element_order(e_k)?;
            if multipliers.len() as u64 != ord_k {
                return Err(Error::Precondition(format!(
                    "expected {ord_k} multipliers, got {}",
                    multipliers.len()
                )));
            }
            let sum: u128 = multipliers.iter().map(|&x| x as u128).sum();
            if (sum + 1) % ord_j as u128 != 0 {
                return Err(Error::Precondition(format!(
                    "multiplier sum must be ≡ −1 (mod {ord_j})"
                )));
            }
            let mut seq = Sequence::empty(group.clone());
            seq.push(e_j.clone(), ord_j - 1)?;
            for &x in multipliers {
                let term = group.sub(e_k, &group.scalar_mul(x as i64 % ord_j as i64, e_j)?)?;
                seq.push(term, 1)?;
            }
            Ok(seq)
        }
        SchmidForm::Generating {
            pair,
            s,
            multipliers,
            ..
        } => {
            if *s < 1 || *s > n {
                return Err(Error::Precondition(format!("s must lie in [1, {n}]")));
            }
            if group.element_order(&pair[1])? != mn {
                return Err(Error::Precondition(format!(
                    "the second generator must have order {mn}"
                )));
            }
            if !group.generates(pair)? {
                return Err(Error::Precondition(format!(
                    "({}, {}) does not generate {group}",
                    pair[0], pair[1]
                )));
            }
            let m_g1 = group.scalar_mul(m as i64, &pair[0])?;
            let m_g2 = group.scalar_mul(m as i64, &pair[1])?;
            if *s != 1 && m_g1 != m_g2 {
                return Err(Error::Precondition(
                    "with s > 1 the pair must satisfy m·g_1 = m·g_2".into(),
                ));
            }
            let tail = (n + 1 - s) * m;
            if multipliers.len() as u64 != tail {
                return Err(Error::Precondition(format!(
                    "expected {tail} multipliers, got {}",
                    multipliers.len()
                )));
            }
            let sum: u128 = multipliers.iter().map(|&x| x as u128).sum();
            if sum != (m - 1) as u128 {
                return Err(Error::Precondition(format!(
                    "multiplier sum must equal {}",
                    m - 1
                )));
            }
            let mut seq = Sequence::empty(group.clone());
            seq.push(pair[0].clone(), s * m - 1)?;
            let ord_1 = group.element_order(&pair[0])?;
            for &x in multipliers {
                let term = group.sub(&pair[1], &group.scalar_mul(x as i64 % ord_1 as i64, &pair[0])?)?;
                seq.push(term, 1)?;
            }
            Ok(seq)
        }
    }
}

/// Multiplier recovery for a fixed head/tail shape. Returns the sorted
/// multipliers when every tail element is `anchor − x·base` for a unique
/// `x ∈ [0, ord(base))`.
fn recover_multipliers(
    group: &FiniteAbelianGroup,
    seq: &Sequence,
    base: &GroupElement,
    head_count: u64,
    anchor: &GroupElement,
) -> Result<Option<Vec<u64>>> {
    if seq.multiplicity(base) != head_count {
        return Ok(None);
    }
    let ord_base = group.element_order(base)?;
    let mut solve = vec![None; group.order() as usize];
    for x in 0..ord_base {
        let idx = group.index_of(&group.scalar_mul(x as i64, base)?)? as usize;
        solve[idx] = Some(x);
    }
    let mut multipliers = Vec::new();
    for (g, k) in seq.pairs() {
        if g == base {
            continue;
        }
        let t = group.sub(anchor, g)?;
        match solve[group.index_of(&t)? as usize] {
            Some(x) => multipliers.extend(std::iter::repeat_n(x, k as usize)),
            None => return Ok(None),
        }
    }
    multipliers.sort_unstable();
    Ok(Some(multipliers))
}

/// Searches bases and generating pairs for a parameterization producing
/// the given sequence: basis form first, bases and pairs in canonical
/// order, multipliers recovered as sorted vectors. Returns the first hit.
pub fn match_schmid(seq: &Sequence) -> Result<Option<SchmidForm>> {
    match_schmid_with_ceiling(seq, Limits::default().basis_group_order)
}

pub fn match_schmid_with_ceiling(seq: &Sequence, max_order: u64) -> Result<Option<SchmidForm>> {
    let group = seq.group().clone();
    let (m, n) = rank_two_parameters(&group)?;
    let mn = m * n;
    let d = m + mn - 1;
    if seq.len() != d {
        return Err(Error::Precondition(format!(
            "the shapes describe sequences of length D = {d}; got length {}",
            seq.len()
        )));
    }

    // basis form: ord(e_1) = m is forced by bijectivity once ord(e_2) = mn
    for basis in group.bases_with_ceiling(Some(&[m, mn]), max_order)? {
        for head in 0..2usize {
            let e_j = &basis.elements[head];
            let e_k = &basis.elements[1 - head];
            let ord_j = basis.orders[head];
            if let Some(multipliers) =
                recover_multipliers(&group, seq, e_j, ord_j - 1, e_k)?
            {
                let sum: u128 = multipliers.iter().map(|&x| x as u128).sum();
                if (sum + 1) % ord_j as u128 == 0 {
                    return Ok(Some(SchmidForm::Basis {
                        group,
                        elements: [basis.elements[0].clone(), basis.elements[1].clone()],
                        head,
                        multipliers,
                    }));
                }
            }
        }
    }

    for (g1, g2) in group.generating_pairs_with_ceiling(mn, max_order)? {
        let v = seq.multiplicity(&g1);
        if (v + 1) % m != 0 {
            continue;
        }
        let s = (v + 1) / m;
        if !(1..=n).contains(&s) {
            continue;
        }
        if s != 1 {
            let m_g1 = group.scalar_mul(m as i64, &g1)?;
            let m_g2 = group.scalar_mul(m as i64, &g2)?;
            if m_g1 != m_g2 {
                continue;
            }
        }
        if let Some(multipliers) = recover_multipliers(&group, seq, &g1, v, &g2)? {
            let sum: u128 = multipliers.iter().map(|&x| x as u128).sum();
            if sum == (m - 1) as u128 {
                return Ok(Some(SchmidForm::Generating {
                    group,
                    pair: [g1, g2],
                    s,
                    multipliers,
                }));
            }
        }
    }
    Ok(None)
}

/// All non-decreasing vectors of the given length over `[0, bound)` whose
/// sum is ≡ `residue` (mod `modulus`).
fn sorted_vectors_sum_mod(len: usize, bound: u64, modulus: u64, residue: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(
        len: usize,
        bound: u64,
        modulus: u64,
        residue: u64,
        min: u64,
        sum: u64,
        cur: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if cur.len() == len {
            if sum % modulus == residue {
                out.push(cur.clone());
            }
            return;
        }
        for x in min..bound {
            cur.push(x);
            rec(len, bound, modulus, residue, x, sum + x, cur, out);
            cur.pop();
        }
    }
    rec(len, bound, modulus, residue, 0, 0, &mut cur, &mut out);
    out
}

/// All non-decreasing vectors of the given length with the exact sum.
fn sorted_vectors_sum_exact(len: usize, target: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, target: u64, min: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == len {
            if target == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in min..=target {
            cur.push(x);
            rec(len, target - x, x, cur, out);
            cur.pop();
        }
    }
    rec(len, target, 0, &mut cur, &mut out);
    out
}

/// Every valid parameterization over the group, with multipliers ranging
/// over canonical (sorted) representatives. Distinct forms may build the
/// same sequence.
pub fn schmid_forms(group: &FiniteAbelianGroup) -> Result<Vec<SchmidForm>> {
    let (m, n) = rank_two_parameters(group)?;
    let mn = m * n;
    let mut forms = Vec::new();
    for basis in group.bases(Some(&[m, mn]))? {
        for head in 0..2usize {
            let ord_j = basis.orders[head];
            let ord_k = basis.orders[1 - head];
            for multipliers in
                sorted_vectors_sum_mod(ord_k as usize, ord_j, ord_j, ord_j - 1)
            {
                forms.push(SchmidForm::Basis {
                    group: group.clone(),
                    elements: [basis.elements[0].clone(), basis.elements[1].clone()],
                    head,
                    multipliers,
                });
            }
        }
    }
    for (g1, g2) in group.generating_pairs(mn)? {
        for s in 1..=n {
            if s != 1 {
                let m_g1 = group.scalar_mul(m as i64, &g1)?;
                let m_g2 = group.scalar_mul(m as i64, &g2)?;
                if m_g1 != m_g2 {
                    continue;
                }
            }
            let tail = ((n + 1 - s) * m) as usize;
            for multipliers in sorted_vectors_sum_exact(tail, m - 1) {
                forms.push(SchmidForm::Generating {
                    group: group.clone(),
                    pair: [g1.clone(), g2.clone()],
                    s,
                    multipliers,
                });
            }
        }
    }
    Ok(forms)
}
