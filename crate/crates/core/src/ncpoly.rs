//! Polynomials in the free algebra `F_p<X1..Xn>` and two-sided reduction.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::{parse_product, render, split_signed};
use crate::term::parse_power;
use crate::word::{Word, WordOrder};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NcPolynomial {
    nvars: usize,
    field: PrimeField,
    terms: BTreeMap<Word, u64>,
}

impl NcPolynomial {
    pub fn zero(nvars: usize, field: PrimeField) -> Self {
        NcPolynomial {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, field: PrimeField, c: i64) -> Self {
        Self::term(field, Word::empty(nvars), c)
    }

    pub fn term(field: PrimeField, w: Word, c: i64) -> Self {
        let mut p = NcPolynomial::zero(w.nvars(), field);
        p.add_term(w, field.reduce(c));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> u64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, u64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn leading(&self, ord: &WordOrder) -> Result<(Word, u64)> {
        self.terms
            .iter()
            .max_by(|a, b| ord.compare(a.0, b.0))
            .map(|(w, &c)| (w.clone(), c))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn lead_word(&self, ord: &WordOrder) -> Result<Word> {
        self.leading(ord).map(|(w, _)| w)
    }

    pub fn monic(&self, ord: &WordOrder) -> Result<NcPolynomial> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let (_, lc) = self.leading(ord)?;
        Ok(self.scale(self.field.inv(lc)))
    }

    pub fn scale(&self, c: u64) -> NcPolynomial {
        let c = c % self.field.modulus();
        let mut out = NcPolynomial::zero(self.nvars, self.field);
        if c != 0 {
            for (w, &a) in &self.terms {
                out.terms.insert(w.clone(), self.field.mul(a, c));
            }
        }
        out
    }

    /// `c * l * self * r`.
    pub fn sandwich(&self, l: &Word, c: u64, r: &Word) -> NcPolynomial {
        let mut out = NcPolynomial::zero(self.nvars, self.field);
        for (w, &a) in &self.terms {
            out.add_term(Word::concat_raw(l, w, r), self.field.mul(a, c));
        }
        out
    }

    pub fn add_term(&mut self, w: Word, c: u64) {
        assert_eq!(w.nvars(), self.nvars, "word and polynomial alphabets differ");
        let c = c % self.field.modulus();
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn same_ring(&self, other: &NcPolynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.modulus(),
                other.field.modulus(),
            ));
        }
        Ok(())
    }

    fn assert_ring(&self, other: &NcPolynomial) {
        if let Err(e) = self.same_ring(other) {
            panic!("{e}");
        }
    }

    /// Parses `2*X1*X2 - X2^2*X1 + 1`; `X1^k` stands for `k` copies of `X1`.
    pub fn parse(text: &str, nvars: usize, field: PrimeField) -> Result<NcPolynomial> {
        let mut p = NcPolynomial::zero(nvars, field);
        for (neg, chunk) in split_signed(text)? {
            let (c, letters) = parse_product(chunk, field, |f| {
                let (var, k) = parse_power(f)?;
                if var >= nvars {
                    return Err(Error::VariableOutOfRange { index: var, nvars });
                }
                Ok(vec![var as u32; k as usize])
            })?;
            let c = if neg { field.neg(c) } else { c };
            p.add_term(Word::new(nvars, letters)?, c);
        }
        Ok(p)
    }

    pub fn format_with(&self, ord: &WordOrder) -> String {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.compare(b.0, a.0));
        render(v.into_iter().map(|(w, &c)| (w.to_string(), self.field.signed(c))))
    }
}

impl fmt::Display for NcPolynomial {
    /// Terms in descending default word order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self
            .terms
            .iter()
            .rev()
            .map(|(w, &c)| (w.to_string(), self.field.signed(c)));
        f.write_str(&render(items))
    }
}

impl Add for &NcPolynomial {
    type Output = NcPolynomial;
    fn add(self, rhs: &NcPolynomial) -> NcPolynomial {
        self.assert_ring(rhs);
        let mut out = self.clone();
        for (w, &c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &NcPolynomial {
    type Output = NcPolynomial;
    fn sub(self, rhs: &NcPolynomial) -> NcPolynomial {
        self.assert_ring(rhs);
        let mut out = self.clone();
        for (w, &c) in &rhs.terms {
            out.add_term(w.clone(), self.field.neg(c));
        }
        out
    }
}

impl Neg for &NcPolynomial {
    type Output = NcPolynomial;
    fn neg(self) -> NcPolynomial {
        self.scale(self.field.modulus() - 1)
    }
}

impl Mul for &NcPolynomial {
    type Output = NcPolynomial;
    fn mul(self, rhs: &NcPolynomial) -> NcPolynomial {
        self.assert_ring(rhs);
        let mut out = NcPolynomial::zero(self.nvars, self.field);
        let one = Word::empty(self.nvars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                out.add_term(Word::concat_raw(a, b, &one), self.field.mul(ca, cb));
            }
        }
        out
    }
}

struct NcReducer {
    lead: Word,
    lc_inv: u64,
    tail: Vec<(Word, u64)>,
}

fn prepare(g: &[NcPolynomial], ord: &WordOrder) -> Vec<NcReducer> {
    g.iter()
        .filter_map(|p| {
            let (lead, lc) = p.leading(ord).ok()?;
            let tail = p
                .terms
                .iter()
                .filter(|(w, _)| **w != lead)
                .map(|(w, &c)| (w.clone(), c))
                .collect();
            Some(NcReducer {
                lead,
                lc_inv: p.field.inv(lc),
                tail,
            })
        })
        .collect()
}

fn order_key(ord: &WordOrder, w: &Word) -> (usize, Vec<u32>) {
    if ord.is_default() {
        return (w.len(), w.letters().to_vec());
    }
    let prec = (0..ord.nvars() as u32)
        .map(|l| {
            (0..ord.nvars() as u32)
                .filter(|&m| {
                    ord.compare(
                        &Word::new(ord.nvars(), vec![m]).unwrap(),
                        &Word::new(ord.nvars(), vec![l]).unwrap(),
                    )
                    .is_lt()
                })
                .count() as u32
        })
        .collect::<Vec<_>>();
    (w.len(), w.letters().iter().map(|&l| prec[l as usize]).collect())
}

/// Finds the rewrite for `w`: leftmost occurrence, then longest lead, then
/// earliest element.
fn find_rewrite<'a>(w: &Word, reducers: &'a [NcReducer]) -> Option<(usize, &'a NcReducer)> {
    let mut best: Option<(usize, &NcReducer)> = None;
    for r in reducers {
        if let Some(pos) = w.find_factor(&r.lead) {
            let better = match best {
                None => true,
                Some((bp, br)) => pos < bp || (pos == bp && r.lead.len() > br.lead.len()),
            };
            if better {
                best = Some((pos, r));
            }
        }
    }
    best
}

fn reduce_nc(f: &NcPolynomial, reducers: &[NcReducer], ord: &WordOrder) -> NcPolynomial {
    let field = f.field;
    let mut work: BTreeMap<(usize, Vec<u32>), (Word, u64)> = f
        .terms
        .iter()
        .map(|(w, &c)| (order_key(ord, w), (w.clone(), c)))
        .collect();
    let mut out = NcPolynomial::zero(f.nvars, field);
    while let Some((_, (w, c))) = work.pop_last() {
        let Some((pos, r)) = find_rewrite(&w, reducers) else {
            out.terms.insert(w, c);
            continue;
        };
        let left = w.slice(0, pos);
        let right = w.slice(pos + r.lead.len(), w.len());
        let factor = field.neg(field.mul(c, r.lc_inv));
        for (t, a) in &r.tail {
            let word = Word::concat_raw(&left, t, &right);
            let delta = field.mul(*a, factor);
            match work.entry(order_key(ord, &word)) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert((word, delta));
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = field.add(e.get().1, delta);
                    if s == 0 {
                        e.remove();
                    } else {
                        e.get_mut().1 = s;
                    }
                }
            }
        }
    }
    out
}

/// Two-sided fully reduced normal form: no support word of the result has a
/// leading word of `g` as a factor.
pub fn nc_normal_form(f: &NcPolynomial, g: &[NcPolynomial], ord: &WordOrder) -> Result<NcPolynomial> {
    for p in g {
        f.same_ring(p)?;
    }
    if ord.nvars() != f.nvars {
        return Err(Error::DimensionMismatch {
            expected: ord.nvars(),
            found: f.nvars,
        });
    }
    Ok(reduce_nc(f, &prepare(g, ord), ord))
}

/// An ambiguity between two leading words and its unresolved remainder.
#[derive(Clone, Debug)]
pub struct Ambiguity {
    pub first: usize,
    pub second: usize,
    pub word: Word,
    pub remainder: NcPolynomial,
}

/// All inclusion and overlap ambiguities whose word has length at most
/// `length_bound` and which do not reduce to zero.
pub fn unresolved_ambiguities(
    g: &[NcPolynomial],
    ord: &WordOrder,
    length_bound: usize,
) -> Result<Vec<Ambiguity>> {
    for (i, p) in g.iter().enumerate() {
        if p.is_zero() || p.leading(ord)?.1 != 1 {
            return Err(Error::NotMonic(i));
        }
        g[0].same_ring(p)?;
    }
    let reducers = prepare(g, ord);
    let leads: Vec<Word> = reducers.iter().map(|r| r.lead.clone()).collect();
    let mut out = Vec::new();
    let mut check = |i: usize, j: usize, word: Word, amb: NcPolynomial| {
        let remainder = reduce_nc(&amb, &reducers, ord);
        if !remainder.is_zero() {
            out.push(Ambiguity {
                first: i,
                second: j,
                word,
                remainder,
            });
        }
    };
    for i in 0..g.len() {
        for j in 0..g.len() {
            let (a, b) = (&leads[i], &leads[j]);
            if i != j && a.len() <= length_bound {
                for pos in Word::positions(b, a).collect::<Vec<_>>() {
                    let l = a.slice(0, pos);
                    let r = a.slice(pos + b.len(), a.len());
                    let amb = &g[i] - &g[j].sandwich(&l, 1, &r);
                    check(i, j, a.clone(), amb);
                }
            }
            for k in 1..a.len().min(b.len()) {
                if a.letters()[a.len() - k..] != b.letters()[..k] {
                    continue;
                }
                let word = Word::concat_raw(a, &b.slice(k, b.len()), &Word::empty(a.nvars()));
                if word.len() > length_bound {
                    continue;
                }
                let one = Word::empty(a.nvars());
                let amb = &g[i].sandwich(&one, 1, &b.slice(k, b.len()))
                    - &g[j].sandwich(&a.slice(0, a.len() - k), 1, &one);
                check(i, j, word, amb);
            }
        }
    }
    Ok(out)
}

/// Every ambiguity up to `length_bound` resolves, i.e. `g` is a Gröbner
/// basis as far as words of that length can tell.
pub fn overlap_check(g: &[NcPolynomial], ord: &WordOrder, length_bound: usize) -> Result<bool> {
    Ok(unresolved_ambiguities(g, ord, length_bound)?.is_empty())
}

/// Length of the longest possible ambiguity word, so that `overlap_check`
/// with this bound is a complete test.
pub fn full_overlap_bound(g: &[NcPolynomial], ord: &WordOrder) -> usize {
    let lens: Vec<usize> = g
        .iter()
        .filter_map(|p| p.lead_word(ord).ok())
        .map(|w| w.len())
        .collect();
    let max = lens.iter().copied().max().unwrap_or(0);
    (2 * max).saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field() -> PrimeField {
        PrimeField::default()
    }

    fn p(s: &str) -> NcPolynomial {
        NcPolynomial::parse(s, 2, field()).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn non_commutative_product() {
        assert_ne!(&p("X1") * &p("X2"), &p("X2") * &p("X1"));
        assert_eq!(&p("X1 + 1") * &p("X2"), p("X1*X2 + X2"));
        assert_eq!(p("X1^2*X2"), p("X1*X1*X2"));
    }

    #[test]
    fn normal_form_examples() {
        let ord = WordOrder::deglex(2);
        let g = vec![p("X1*X2")];
        assert!(nc_normal_form(&p("0"), &g, &ord).unwrap().is_zero());
        let h = nc_normal_form(&p("X1*X1*X2*X1 + X2*X1"), &g, &ord).unwrap();
        assert_eq!(h, p("X2*X1"));
        let g = vec![p("X1*X2 - X2")];
        let f = g[0].sandwich(&w("X2*X1"), 3, &w("X2"));
        assert!(nc_normal_form(&f, &g, &ord).unwrap().is_zero());
    }

    #[test]
    fn overlap_examples() {
        let ord = WordOrder::deglex(2);
        assert!(overlap_check(&[p("X1*X2"), p("X2*X1")], &ord, 10).unwrap());
        assert!(overlap_check(&[p("X1*X1")], &ord, 10).unwrap());
        assert!(overlap_check(&[p("X2*X1 - 1")], &ord, 10).unwrap());
        // X2*X1 -> X1*X2 with X2*X2 -> X1 leaves X2*X2*X1 ambiguous:
        // (X2 X2) X1 -> X1 X1, X2 (X2 X1) -> X2 X1 X2 -> X1 X2 X2 -> X1 X1
        assert!(overlap_check(&[p("X2*X1 - X1*X2"), p("X2*X2 - X1")], &ord, 10).unwrap());
        // X1*X1 -> X2 is fine, but X1*X2 -> 1 leaves X1*X1*X2 unresolved
        let g = [p("X1*X1 - X2"), p("X1*X2 - 1")];
        assert!(!overlap_check(&g, &ord, 10).unwrap());
        assert!(overlap_check(&g, &ord, 2).unwrap());
        assert_eq!(overlap_check(&[p("2*X1*X2")], &ord, 4), Err(Error::NotMonic(0)));
    }

    #[test]
    fn self_overlap_detected() {
        let ord = WordOrder::deglex(2);
        // X1 X1 X1 reduces to X1 X2 or X2 X1
        let g = [p("X1*X1 - X2")];
        assert!(!overlap_check(&g, &ord, 3).unwrap());
    }

    fn poly() -> impl Strategy<Value = NcPolynomial> {
        proptest::collection::vec((proptest::collection::vec(0u32..2, 0..5), -4i64..4), 0..5)
            .prop_map(|ts| {
                let mut p = NcPolynomial::zero(2, PrimeField::new(101).unwrap());
                for (l, c) in ts {
                    p.add_term(Word::new(2, l).unwrap(), PrimeField::new(101).unwrap().reduce(c));
                }
                p
            })
    }

    proptest! {
        #[test]
        fn normal_form_idempotent_and_irreducible(f in poly()) {
            let ord = WordOrder::deglex(2);
            let field = PrimeField::new(101).unwrap();
            let g = vec![
                NcPolynomial::parse("X2*X1 - X1*X2", 2, field).unwrap(),
                NcPolynomial::parse("X2*X2 - X1", 2, field).unwrap(),
            ];
            let h = nc_normal_form(&f, &g, &ord).unwrap();
            prop_assert_eq!(nc_normal_form(&h, &g, &ord).unwrap(), h.clone());
            for word in h.support() {
                for r in &g {
                    prop_assert!(!word.contains_factor(&r.lead_word(&ord).unwrap()));
                }
            }
        }

        #[test]
        fn linear_for_confluent_basis(a in poly(), b in poly(), s in 1u64..100) {
            let ord = WordOrder::deglex(2);
            let field = PrimeField::new(101).unwrap();
            let g = vec![
                NcPolynomial::parse("X2*X1 - X1*X2", 2, field).unwrap(),
                NcPolynomial::parse("X2*X2 - X1", 2, field).unwrap(),
            ];
            let nf = |x: &NcPolynomial| nc_normal_form(x, &g, &ord).unwrap();
            prop_assert_eq!(nf(&(&a.scale(s) + &b)), &nf(&a).scale(s) + &nf(&b));
        }

        #[test]
        fn two_sided_stability(f in poly(), l in proptest::collection::vec(0u32..2, 0..3), r in proptest::collection::vec(0u32..2, 0..3)) {
            let ord = WordOrder::deglex(2);
            let g = [NcPolynomial::parse("X1*X2", 2, PrimeField::new(101).unwrap()).unwrap()];
            let (l, r) = (Word::new(2, l).unwrap(), Word::new(2, r).unwrap());
            for word in f.support() {
                if word.contains_factor(&g[0].lead_word(&ord).unwrap()) {
                    prop_assert!(Word::concat(&l, word, &r).unwrap().contains_factor(&g[0].lead_word(&ord).unwrap()));
                }
            }
        }
    }
}
