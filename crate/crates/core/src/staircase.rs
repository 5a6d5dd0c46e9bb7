//! Reconstruction of the minimal generators of a leading-term ideal inside a
//! box `[0, D]^n`, and of the reduced Gröbner basis, from membership and
//! canonical-form queries alone.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::oracle::{MembershipOracle, TermOracle};
use crate::poly::Polynomial;
use crate::term::{Monomial, TermBox, TermOrder};

/// Outcome of walking the main diagonal `ω^1, ω^2, ...` with `ω = X1...Xn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// `ω^D` is a normal term, so no generator lies in the box.
    ZeroIdeal,
    /// `ω^(j-1)` is normal and `ω^j` is not.
    Found(u32),
}

/// Position of a term of `T(I)` relative to the staircase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// Every predecessor is normal: a minimal generator.
    Corner,
    /// Some predecessors are normal, some are not.
    Border,
    /// Every predecessor lies in `T(I)`.
    Interior,
}

/// How monotone predicates along a line are searched.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanMode {
    /// One query per step, walking the line.
    #[default]
    Linear,
    /// Bisection on the line; fewer queries, different query order.
    Binary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircaseResult {
    /// Minimal generators inside the box, by degree then storage order.
    pub generators: Vec<Monomial>,
    /// `τ - Can(τ)` for each generator `τ`, in the same order.
    pub reduced_basis: Vec<Polynomial>,
    pub queries_used: u64,
    pub bound: u32,
}

impl StaircaseResult {
    /// The basis sorted by leading term under `ord`, largest first.
    pub fn sorted_basis(&self, ord: &TermOrder) -> Vec<Polynomial> {
        let mut v = self.reduced_basis.clone();
        v.sort_by(|a, b| {
            let (ta, tb) = (a.lead_term(ord).unwrap(), b.lead_term(ord).unwrap());
            ord.cmp_raw(&tb, &ta)
        });
        v
    }
}

/// Restriction of an oracle to the hyperplane `X_n = level`, seen as an
/// oracle in the first `n - 1` variables.
pub struct SliceOracle<'a> {
    inner: &'a mut dyn MembershipOracle,
    level: u32,
}

impl<'a> SliceOracle<'a> {
    pub fn new(inner: &'a mut dyn MembershipOracle, level: u32) -> Self {
        assert!(inner.nvars() >= 2, "cannot slice a one-variable ring");
        SliceOracle { inner, level }
    }
}

impl MembershipOracle for SliceOracle<'_> {
    fn nvars(&self) -> usize {
        self.inner.nvars() - 1
    }

    fn member_t(&mut self, t: &Monomial) -> Result<bool> {
        self.inner.member_t(&t.extended(self.level))
    }
}

fn diagonal_power(n: usize, j: u32) -> Monomial {
    Monomial::new(vec![j; n]).expect("n >= 1")
}

/// Smallest `x` in `lo..=hi` with `pred(x)`, for a predicate that is false
/// then true along the range.
fn first_true(
    mode: ScanMode,
    lo: u32,
    hi: u32,
    mut pred: impl FnMut(u32) -> Result<bool>,
) -> Result<Option<u32>> {
    if lo > hi {
        return Ok(None);
    }
    match mode {
        ScanMode::Linear => {
            for x in lo..=hi {
                if pred(x)? {
                    return Ok(Some(x));
                }
            }
            Ok(None)
        }
        ScanMode::Binary => {
            let (mut a, mut b) = (lo, hi + 1);
            while a < b {
                let mid = a + (b - a) / 2;
                if pred(mid)? {
                    b = mid;
                } else {
                    a = mid + 1;
                }
            }
            Ok((a <= hi).then_some(a))
        }
    }
}

/// Scans `ω^1 .. ω^D` for the first power in `T(I)`.
pub fn diagonal_probe(
    o: &mut dyn MembershipOracle,
    bound: u32,
    mode: ScanMode,
) -> Result<ProbeOutcome> {
    if bound == 0 {
        return Err(Error::InvalidBound);
    }
    let n = o.nvars();
    Ok(
        match first_true(mode, 1, bound, |j| o.member_t(&diagonal_power(n, j)))? {
            Some(j) => ProbeOutcome::Found(j),
            None => ProbeOutcome::ZeroIdeal,
        },
    )
}

/// Classifies `t`, which must lie in `T(I)`; costs one query for `t` and one
/// per existing predecessor.
pub fn classify(o: &mut dyn MembershipOracle, t: &Monomial) -> Result<CaseTag> {
    if !o.member_t(t)? {
        return Err(Error::NormalTerm(t.to_string()));
    }
    classify_known(o, t)
}

fn classify_known(o: &mut dyn MembershipOracle, t: &Monomial) -> Result<CaseTag> {
    let (mut inside, mut outside) = (0, 0);
    for v in 0..t.nvars() {
        if let Some(p) = t.predecessor(v)? {
            if o.member_t(&p)? {
                inside += 1;
            } else {
                outside += 1;
            }
        }
    }
    Ok(match (inside, outside) {
        (0, _) => CaseTag::Corner,
        (_, 0) => CaseTag::Interior,
        _ => CaseTag::Border,
    })
}

/// The staircase walk in two variables `X^a Y^b`.
struct Walk<'a> {
    o: &'a mut dyn MembershipOracle,
    bound: u32,
    mode: ScanMode,
    found: BTreeSet<Monomial>,
}

impl Walk<'_> {
    fn mem(&mut self, a: u32, b: u32) -> Result<bool> {
        self.o.member_t(&Monomial::new(vec![a, b]).expect("two variables"))
    }

    fn store(&mut self, a: u32, b: u32) {
        self.found.insert(Monomial::new(vec![a, b]).expect("two variables"));
    }

    /// Least `a` with `X^a Y^b` in `T(I)`, given that `X^from Y^b` is.
    fn leftmost_in_row(&mut self, b: u32, from: u32) -> Result<u32> {
        if from == 0 || self.mem(0, b)? {
            return Ok(0);
        }
        match self.mode {
            ScanMode::Linear => {
                let mut a = from;
                while a > 1 && self.mem(a - 1, b)? {
                    a -= 1;
                }
                Ok(a)
            }
            ScanMode::Binary => {
                Ok(first_true(self.mode, 1, from - 1, |a| self.mem(a, b))?.unwrap_or(from))
            }
        }
    }

    /// Least `b` with `X^a Y^b` in `T(I)`, given that `X^a Y^from` is.
    fn lowest_in_column(&mut self, a: u32, from: u32) -> Result<u32> {
        if from == 0 || self.mem(a, 0)? {
            return Ok(0);
        }
        match self.mode {
            ScanMode::Linear => {
                let mut b = from;
                while b > 1 && self.mem(a, b - 1)? {
                    b -= 1;
                }
                Ok(b)
            }
            ScanMode::Binary => {
                Ok(first_true(self.mode, 1, from - 1, |b| self.mem(a, b))?.unwrap_or(from))
            }
        }
    }

    /// From `X^a Y^b` in `T(I)` with `X^(a-1) Y^b` normal, follows the
    /// staircase towards the `Y` axis, storing every generator met.
    fn up_left(&mut self, mut a: u32, mut b: u32) -> Result<()> {
        while a > 0 && b < self.bound {
            let col = a - 1;
            let Some(nb) = first_true(self.mode, b + 1, self.bound, |y| self.mem(col, y))? else {
                break;
            };
            // X^0 Y^nb was just found in T(I) when col = 0
            let na = if col == 0 { 0 } else { self.leftmost_in_row(nb, col)? };
            self.store(na, nb);
            (a, b) = (na, nb);
        }
        Ok(())
    }

    /// Mirror image of [`up_left`](Self::up_left) towards the `X` axis.
    fn down_right(&mut self, mut a: u32, mut b: u32) -> Result<()> {
        while b > 0 && a < self.bound {
            let row = b - 1;
            let Some(na) = first_true(self.mode, a + 1, self.bound, |x| self.mem(x, row))? else {
                break;
            };
            let nb = if row == 0 { 0 } else { self.lowest_in_column(na, row)? };
            self.store(na, nb);
            (a, b) = (na, nb);
        }
        Ok(())
    }
}

fn two_var(o: &mut dyn MembershipOracle, bound: u32, mode: ScanMode) -> Result<BTreeSet<Monomial>> {
    if o.member_t(&Monomial::one(2))? {
        return Ok(BTreeSet::from([Monomial::one(2)]));
    }
    let j = match diagonal_probe(o, bound, mode)? {
        ProbeOutcome::ZeroIdeal => return Ok(BTreeSet::new()),
        ProbeOutcome::Found(j) => j,
    };
    let mut w = Walk {
        o,
        bound,
        mode,
        found: BTreeSet::new(),
    };
    let left = w.mem(j - 1, j)?;
    let down = w.mem(j, j - 1)?;
    match (left, down) {
        (false, false) => {
            w.store(j, j);
            w.up_left(j, j)?;
            w.down_right(j, j)?;
        }
        (false, true) => {
            let b = w.lowest_in_column(j, j - 1)?;
            w.store(j, b);
            w.down_right(j, b)?;
            w.up_left(j, j)?;
        }
        (true, false) => {
            let a = w.leftmost_in_row(j, j - 1)?;
            w.store(a, j);
            w.up_left(a, j)?;
            w.down_right(j, j)?;
        }
        (true, true) => {
            let a = w.leftmost_in_row(j, j - 1)?;
            let b = w.lowest_in_column(j, j - 1)?;
            w.store(a, j);
            w.store(j, b);
            w.up_left(a, j)?;
            w.down_right(j, b)?;
        }
    }
    Ok(w.found)
}

fn one_var(o: &mut dyn MembershipOracle, bound: u32, mode: ScanMode) -> Result<BTreeSet<Monomial>> {
    let first = first_true(mode, 0, bound, |a| o.member_t(&Monomial::new(vec![a]).unwrap()))?;
    Ok(first
        .map(|a| Monomial::new(vec![a]).unwrap())
        .into_iter()
        .collect())
}

/// Slices the box by the exponent of the last variable.
///
/// The slice at level `k` is `{σ : σ X_n^k ∈ T(I)}`, an upward-closed set in
/// `n - 1` variables that grows with `k`. A generator of the slice at level
/// `k` is a generator of the ideal exactly when it is not in the slice at
/// level `k - 1`.
///
/// Below the first diagonal hit every current slice generator is tested one
/// level down; the slice is recomputed only when some test fails. Above it
/// every level is recomputed, and the comparison with the previous level is
/// done by divisibility without further queries. A diagonal line search per
/// generator would be cheaper but can step over a level that contributes a
/// generator, e.g. `(X1 X2 X3^2, X2^5 X3, X1^5)` loses `X2^5 X3`.
fn sliced(o: &mut dyn MembershipOracle, bound: u32, mode: ScanMode) -> Result<BTreeSet<Monomial>> {
    let n = o.nvars();
    if o.member_t(&Monomial::one(n))? {
        return Ok(BTreeSet::from([Monomial::one(n)]));
    }
    let j = match diagonal_probe(o, bound, mode)? {
        ProbeOutcome::ZeroIdeal => return Ok(BTreeSet::new()),
        ProbeOutcome::Found(j) => j,
    };
    let mut out = BTreeSet::new();
    let top = recon_set(&mut SliceOracle::new(o, j), bound, mode)?;

    let mut cur = top.clone();
    let mut level = j;
    while !cur.is_empty() {
        if level == 0 {
            out.extend(cur.iter().map(|s| s.extended(0)));
            break;
        }
        let mut changed = false;
        for s in &cur {
            if !o.member_t(&s.extended(level - 1))? {
                out.insert(s.extended(level));
                changed = true;
            }
        }
        if changed {
            cur = recon_set(&mut SliceOracle::new(o, level - 1), bound, mode)?;
        }
        level -= 1;
    }

    let mut prev = top;
    for level in j + 1..=bound {
        if prev.iter().any(Monomial::is_one) {
            break;
        }
        let cur = recon_set(&mut SliceOracle::new(o, level), bound, mode)?;
        for s in &cur {
            if !prev.iter().any(|g| g.divides_raw(s)) {
                out.insert(s.extended(level));
            }
        }
        prev = cur;
    }
    Ok(out)
}

fn recon_set(o: &mut dyn MembershipOracle, bound: u32, mode: ScanMode) -> Result<BTreeSet<Monomial>> {
    match o.nvars() {
        0 => Err(Error::Invalid("a ring needs at least one variable".into())),
        1 => one_var(o, bound, mode),
        2 => two_var(o, bound, mode),
        _ => sliced(o, bound, mode),
    }
}

fn sorted(set: BTreeSet<Monomial>) -> Vec<Monomial> {
    let mut v: Vec<_> = set.into_iter().collect();
    v.sort_by(|a, b| a.degree().cmp(&b.degree()).then(a.cmp(b)));
    v
}

/// Minimal generators of the leading-term ideal inside `[0, bound]^n`, found
/// from membership queries only.
pub fn reconstruct_generators(
    o: &mut dyn MembershipOracle,
    bound: u32,
    mode: ScanMode,
) -> Result<Vec<Monomial>> {
    if bound == 0 {
        return Err(Error::InvalidBound);
    }
    recon_set(o, bound, mode).map(sorted)
}

/// The two-variable walk on its own.
pub fn reconstruct_2var(o: &mut dyn MembershipOracle, bound: u32) -> Result<Vec<Monomial>> {
    if o.nvars() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: o.nvars(),
        });
    }
    if bound == 0 {
        return Err(Error::InvalidBound);
    }
    two_var(o, bound, ScanMode::Linear).map(sorted)
}

/// Generators in the box plus `τ - Can(τ)` for each of them.
pub fn reconstruct(o: &mut dyn TermOracle, bound: u32) -> Result<StaircaseResult> {
    reconstruct_with(o, bound, ScanMode::Linear)
}

pub fn reconstruct_with(
    o: &mut dyn TermOracle,
    bound: u32,
    mode: ScanMode,
) -> Result<StaircaseResult> {
    let start = o.query_count();
    let generators = reconstruct_generators(o, bound, mode)?;
    let field = o.field();
    let mut reduced_basis = Vec::with_capacity(generators.len());
    for t in &generators {
        let can = o.can_term(t)?;
        reduced_basis.push(&Polynomial::term(field, t.clone(), 1) - &can);
    }
    Ok(StaircaseResult {
        generators,
        reduced_basis,
        queries_used: o.query_count() - start,
        bound,
    })
}

/// Queries every term of the box and keeps the divisibility-minimal members.
pub fn brute_force_generators(o: &mut dyn MembershipOracle, bound: u32) -> Result<Vec<Monomial>> {
    let n = o.nvars();
    let ord = TermOrder::deglex(n);
    let mut members: Vec<Monomial> = Vec::new();
    for t in TermBox::new(n, bound).enumerate(&ord) {
        if o.member_t(&t)? {
            members.push(t);
        }
    }
    let minimal = members
        .iter()
        .filter(|t| !members.iter().any(|s| s != *t && s.divides_raw(t)))
        .cloned()
        .collect();
    Ok(sorted(minimal))
}

/// `t ∈ T(I)` and every predecessor of `t` is normal.
pub fn is_generator(o: &mut dyn MembershipOracle, t: &Monomial) -> Result<bool> {
    Ok(o.member_t(t)? && classify_known(o, t)? == CaseTag::Corner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Membership by divisibility against known generators.
    struct Divisibility {
        gens: Vec<Monomial>,
        n: usize,
        queries: u64,
    }

    impl Divisibility {
        fn new(n: usize, gens: &[&[u32]]) -> Self {
            Divisibility {
                gens: gens.iter().map(|g| Monomial::new(g.to_vec()).unwrap()).collect(),
                n,
                queries: 0,
            }
        }
    }

    impl MembershipOracle for Divisibility {
        fn nvars(&self) -> usize {
            self.n
        }
        fn member_t(&mut self, t: &Monomial) -> Result<bool> {
            self.queries += 1;
            Ok(self.gens.iter().any(|g| g.divides_raw(t)))
        }
    }

    fn mons(v: &[&[u32]]) -> Vec<Monomial> {
        sorted(v.iter().map(|e| Monomial::new(e.to_vec()).unwrap()).collect())
    }

    /// Minimal generators inside the box, computed without any oracle.
    fn expected(n: usize, gens: &[Monomial], bound: u32) -> Vec<Monomial> {
        let ord = TermOrder::deglex(n);
        let inside: Vec<_> = TermBox::new(n, bound)
            .enumerate(&ord)
            .filter(|t| gens.iter().any(|g| g.divides_raw(t)))
            .collect();
        sorted(
            inside
                .iter()
                .filter(|t| !inside.iter().any(|s| s != *t && s.divides_raw(t)))
                .cloned()
                .collect(),
        )
    }

    #[test]
    fn probe_examples() {
        let mut o = Divisibility::new(2, &[&[2, 2], &[1, 3], &[4, 1], &[0, 8]]);
        assert_eq!(diagonal_probe(&mut o, 8, ScanMode::Linear).unwrap(), ProbeOutcome::Found(2));
        let mut o = Divisibility::new(3, &[&[1, 3, 4], &[0, 5, 3], &[3, 2, 2], &[4, 0, 1]]);
        assert_eq!(diagonal_probe(&mut o, 8, ScanMode::Linear).unwrap(), ProbeOutcome::Found(3));
        assert_eq!(diagonal_probe(&mut o, 8, ScanMode::Binary).unwrap(), ProbeOutcome::Found(3));
        let mut o = Divisibility::new(3, &[]);
        assert_eq!(diagonal_probe(&mut o, 5, ScanMode::Linear).unwrap(), ProbeOutcome::ZeroIdeal);
        assert_eq!(o.queries, 5);
    }

    #[test]
    fn classify_examples() {
        let mut o = Divisibility::new(2, &[&[2, 2], &[1, 3], &[4, 1], &[0, 8]]);
        assert_eq!(classify(&mut o, &Monomial::new(vec![2, 2]).unwrap()).unwrap(), CaseTag::Corner);
        let mut o = Divisibility::new(2, &[&[3, 2]]);
        assert_eq!(classify(&mut o, &Monomial::new(vec![3, 3]).unwrap()).unwrap(), CaseTag::Border);
        let mut o = Divisibility::new(2, &[&[2, 4], &[4, 3]]);
        assert_eq!(classify(&mut o, &Monomial::new(vec![4, 4]).unwrap()).unwrap(), CaseTag::Interior);
        assert!(classify(&mut o, &Monomial::new(vec![1, 1]).unwrap()).is_err());
    }

    #[test]
    fn two_variable_examples() {
        let cases: [(&[&[u32]], u32); 3] = [
            (&[&[2, 2], &[1, 3], &[4, 1], &[0, 8]], 8),
            (&[&[3, 2]], 5),
            (&[&[2, 4], &[4, 3]], 7),
        ];
        for (gens, bound) in cases {
            let mut o = Divisibility::new(2, gens);
            assert_eq!(reconstruct_2var(&mut o, bound).unwrap(), mons(gens));
            assert!(o.queries < ((bound + 1) * (bound + 1)) as u64);
        }
    }

    #[test]
    fn three_variable_example() {
        let gens: &[&[u32]] = &[&[1, 3, 4], &[0, 5, 3], &[3, 2, 2], &[4, 0, 1]];
        let mut o = Divisibility::new(3, gens);
        let got = reconstruct_generators(&mut o, 8, ScanMode::Linear).unwrap();
        assert_eq!(got, mons(gens));
        assert!(o.queries < 729, "{} queries", o.queries);
    }

    #[test]
    fn line_search_counterexample_is_handled() {
        let gens: &[&[u32]] = &[&[1, 1, 2], &[0, 5, 1], &[5, 0, 0]];
        let mut o = Divisibility::new(3, gens);
        assert_eq!(reconstruct_generators(&mut o, 6, ScanMode::Linear).unwrap(), mons(gens));
    }

    #[test]
    fn degenerate_ideals() {
        for n in 1..=4 {
            let mut zero = Divisibility::new(n, &[]);
            assert!(reconstruct_generators(&mut zero, 4, ScanMode::Linear).unwrap().is_empty());
            let one = vec![0u32; n];
            let mut unit = Divisibility::new(n, &[&one]);
            assert_eq!(
                reconstruct_generators(&mut unit, 4, ScanMode::Linear).unwrap(),
                vec![Monomial::one(n)]
            );
            assert_eq!(unit.queries, 1);
        }
        let mut o = Divisibility::new(1, &[&[3]]);
        assert_eq!(reconstruct_generators(&mut o, 5, ScanMode::Linear).unwrap(), mons(&[&[3]]));
        let mut o = Divisibility::new(1, &[&[7]]);
        assert!(reconstruct_generators(&mut o, 5, ScanMode::Linear).unwrap().is_empty());
        assert!(reconstruct_generators(&mut o, 0, ScanMode::Linear).is_err());
    }

    #[test]
    fn brute_force_counts() {
        let mut o = Divisibility::new(2, &[&[2, 2], &[1, 3], &[4, 1], &[0, 8]]);
        assert_eq!(brute_force_generators(&mut o, 8).unwrap().len(), 4);
        assert_eq!(o.queries, 81);
        let mut z = Divisibility::new(3, &[]);
        assert!(brute_force_generators(&mut z, 3).unwrap().is_empty());
        assert_eq!(z.queries, 64);
    }

    fn ideal(n: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
        proptest::collection::vec(proptest::collection::vec(0u32..7, n), 0..6)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_divisibility_oracle(
            n in 1usize..5,
            raw in ideal(4),
            bound in 1u32..7,
            binary in any::<bool>(),
        ) {
            let gens: Vec<Monomial> = raw.iter().map(|e| Monomial::new(e[..n].to_vec()).unwrap()).collect();
            let refs: Vec<&[u32]> = gens.iter().map(|g| g.exps()).collect();
            let mut o = Divisibility::new(n, &refs);
            let mode = if binary { ScanMode::Binary } else { ScanMode::Linear };
            let got = reconstruct_generators(&mut o, bound, mode).unwrap();
            prop_assert_eq!(&got, &expected(n, &gens, bound));
            for t in &got {
                prop_assert!(is_generator(&mut o, t).unwrap());
            }
            for (i, a) in got.iter().enumerate() {
                for b in &got[i + 1..] {
                    prop_assert!(!a.divides_raw(b) && !b.divides_raw(a));
                }
            }
        }
    }
}
