//! Canonical-form oracles with query accounting.
//!
//! Reconstruction code only ever sees the traits in this module, never the
//! basis an oracle holds.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groebner::{buchberger, GroebnerBasis};
use crate::ncpoly::{full_overlap_bound, nc_normal_form, unresolved_ambiguities, NcPolynomial};
use crate::poly::Polynomial;
use crate::term::{Monomial, TermOrder};
use crate::word::{Word, WordOrder};

/// Monotone query counter with an optional log of the queried terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ledger<T> {
    count: u64,
    log: Option<Vec<T>>,
}

impl<T: Clone> Ledger<T> {
    pub fn new(logging: bool) -> Self {
        Ledger {
            count: 0,
            log: logging.then(Vec::new),
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Queried terms in order; empty unless logging was requested.
    pub fn log(&self) -> &[T] {
        self.log.as_deref().unwrap_or(&[])
    }

    fn record(&mut self, t: &T) {
        self.count += 1;
        if let Some(log) = &mut self.log {
            log.push(t.clone());
        }
    }
}

/// Decides `t ∈ T(I)` for terms of a commutative ring.
pub trait MembershipOracle {
    fn nvars(&self) -> usize;
    fn member_t(&mut self, t: &Monomial) -> Result<bool>;
}

/// A commutative canonical-form oracle.
pub trait TermOracle: MembershipOracle {
    fn field(&self) -> PrimeField;
    fn can_term(&mut self, t: &Monomial) -> Result<Polynomial>;
    fn query_count(&self) -> u64;

    /// Extension of `can_term` by linearity; one query per support term.
    fn can_poly(&mut self, f: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.nvars(), self.field());
        for (t, c) in f.terms() {
            out = &out + &self.can_term(t)?.scale(c);
        }
        Ok(out)
    }
}

/// A canonical-form oracle over the free algebra.
pub trait WordOracle {
    fn nvars(&self) -> usize;
    fn field(&self) -> PrimeField;
    fn can_word(&mut self, w: &Word) -> Result<NcPolynomial>;
    fn query_count(&self) -> u64;

    fn member_t(&mut self, w: &Word) -> Result<bool> {
        let can = self.can_word(w)?;
        Ok(can != NcPolynomial::term(self.field(), w.clone(), 1))
    }

    fn can_poly(&mut self, f: &NcPolynomial) -> Result<NcPolynomial> {
        let mut out = NcPolynomial::zero(self.nvars(), self.field());
        for (w, c) in f.terms() {
            out = &out + &self.can_word(w)?.scale(c);
        }
        Ok(out)
    }
}

/// Answers `Can(t, I, <)` from a private reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct CanOracle {
    basis: GroebnerBasis,
    ledger: Ledger<Monomial>,
    memo: Option<HashMap<Monomial, Polynomial>>,
}

impl CanOracle {
    /// Completes `generators` with Buchberger's algorithm.
    pub fn new(generators: &[Polynomial], ord: &TermOrder) -> Result<Self> {
        Ok(Self::from_basis(buchberger(generators, ord)?))
    }

    pub fn from_basis(basis: GroebnerBasis) -> Self {
        CanOracle {
            basis,
            ledger: Ledger::new(false),
            memo: None,
        }
    }

    pub fn with_log(mut self) -> Self {
        self.ledger = Ledger::new(true);
        self
    }

    /// Answers repeated queries from a memo without counting them.
    pub fn with_memo(mut self) -> Self {
        self.memo = Some(HashMap::new());
        self
    }

    /// A copy of this oracle with an empty ledger.
    pub fn fresh(&self) -> Self {
        CanOracle {
            basis: self.basis.clone(),
            ledger: Ledger::new(self.ledger.log.is_some()),
            memo: self.memo.as_ref().map(|_| HashMap::new()),
        }
    }

    pub fn ledger(&self) -> &Ledger<Monomial> {
        &self.ledger
    }

    pub fn ord(&self) -> &TermOrder {
        self.basis.ord()
    }

    /// The private basis; only the key owner and test harnesses use this.
    pub fn reveal_basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    /// Queries `Σ Can(l_i t r_i)`, which equals `Can(t)` when
    /// `Σ l_i r_i = 1`.
    pub fn masked_can(
        &mut self,
        t: &Monomial,
        decomposition: &[(Polynomial, Polynomial)],
    ) -> Result<Polynomial> {
        self.check(t)?;
        let field = self.field();
        let tp = Polynomial::term(field, t.clone(), 1);
        let mut total = Polynomial::zero(self.nvars(), field);
        let mut pieces = Vec::with_capacity(decomposition.len());
        for (l, r) in decomposition {
            tp.same_ring(l)?;
            tp.same_ring(r)?;
            let piece = &(l * &tp) * r;
            total = &total + &piece;
            pieces.push(piece);
        }
        if total != tp {
            return Err(Error::BadDecomposition);
        }
        let mut out = Polynomial::zero(self.nvars(), field);
        for piece in &pieces {
            out = &out + &self.can_poly(piece)?;
        }
        Ok(out)
    }

    fn check(&self, t: &Monomial) -> Result<()> {
        if t.nvars() != self.basis.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.nvars(),
                found: t.nvars(),
            });
        }
        Ok(())
    }
}

impl MembershipOracle for CanOracle {
    fn nvars(&self) -> usize {
        self.basis.nvars()
    }

    fn member_t(&mut self, t: &Monomial) -> Result<bool> {
        let can = self.can_term(t)?;
        Ok(can != Polynomial::term(self.field(), t.clone(), 1))
    }
}

impl TermOracle for CanOracle {
    fn field(&self) -> PrimeField {
        self.basis.field()
    }

    fn can_term(&mut self, t: &Monomial) -> Result<Polynomial> {
        self.check(t)?;
        if let Some(hit) = self.memo.as_ref().and_then(|m| m.get(t)) {
            return Ok(hit.clone());
        }
        self.ledger.record(t);
        let can = self
            .basis
            .normal_form(&Polynomial::term(self.field(), t.clone(), 1))?;
        if let Some(memo) = &mut self.memo {
            memo.insert(t.clone(), can.clone());
        }
        Ok(can)
    }

    fn query_count(&self) -> u64 {
        self.ledger.count
    }
}

/// Canonical forms in the free algebra from a verified two-sided basis.
#[derive(Clone, Debug)]
pub struct NcCanOracle {
    basis: Vec<NcPolynomial>,
    ord: WordOrder,
    nvars: usize,
    field: PrimeField,
    ledger: Ledger<Word>,
}

impl NcCanOracle {
    /// Accepts `basis` only if every ambiguity between its leading words
    /// resolves. Elements are made monic; zeros are dropped.
    pub fn new(basis: Vec<NcPolynomial>, ord: WordOrder) -> Result<Self> {
        let basis: Vec<NcPolynomial> = basis
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.monic(&ord))
            .collect::<Result<_>>()?;
        let first = basis.first().ok_or(Error::AllZeroInput)?;
        let (nvars, field) = (first.nvars(), first.field());
        if ord.nvars() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: ord.nvars(),
            });
        }
        let bound = full_overlap_bound(&basis, &ord);
        if let Some(a) = unresolved_ambiguities(&basis, &ord, bound)?.into_iter().next() {
            return Err(Error::NotGroebner(format!(
                "ambiguity {} between elements {} and {} leaves {}",
                a.word,
                a.first + 1,
                a.second + 1,
                a.remainder.format_with(&ord)
            )));
        }
        Ok(NcCanOracle {
            basis,
            ord,
            nvars,
            field,
            ledger: Ledger::new(false),
        })
    }

    pub fn with_log(mut self) -> Self {
        self.ledger = Ledger::new(true);
        self
    }

    pub fn fresh(&self) -> Self {
        let mut o = self.clone();
        o.ledger = Ledger::new(self.ledger.log.is_some());
        o
    }

    pub fn ledger(&self) -> &Ledger<Word> {
        &self.ledger
    }

    pub fn ord(&self) -> &WordOrder {
        &self.ord
    }

    pub fn reveal_basis(&self) -> &[NcPolynomial] {
        &self.basis
    }

    /// Queries `Σ Can(l_i t r_i)` after checking `Σ l_i t r_i = t`.
    pub fn masked_can(
        &mut self,
        t: &Word,
        decomposition: &[(NcPolynomial, NcPolynomial)],
    ) -> Result<NcPolynomial> {
        let tp = NcPolynomial::term(self.field, t.clone(), 1);
        let mut total = NcPolynomial::zero(self.nvars, self.field);
        let mut pieces = Vec::with_capacity(decomposition.len());
        for (l, r) in decomposition {
            tp.same_ring(l)?;
            tp.same_ring(r)?;
            let piece = &(l * &tp) * r;
            total = &total + &piece;
            pieces.push(piece);
        }
        if total != tp {
            return Err(Error::BadDecomposition);
        }
        let mut out = NcPolynomial::zero(self.nvars, self.field);
        for piece in &pieces {
            out = &out + &self.can_poly(piece)?;
        }
        Ok(out)
    }
}

impl WordOracle for NcCanOracle {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn field(&self) -> PrimeField {
        self.field
    }

    fn can_word(&mut self, w: &Word) -> Result<NcPolynomial> {
        if w.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: w.nvars(),
            });
        }
        self.ledger.record(w);
        nc_normal_form(
            &NcPolynomial::term(self.field, w.clone(), 1),
            &self.basis,
            &self.ord,
        )
    }

    fn query_count(&self) -> u64 {
        self.ledger.count
    }
}

/// Answers `CAN <term>` and `COUNT` requests line by line until end of input.
/// Any other request, or a term that does not parse, gets `ERR <reason>`.
pub fn serve<R: BufRead, W: Write>(
    oracle: &mut dyn TermOracle,
    ord: &TermOrder,
    input: R,
    mut output: W,
) -> std::io::Result<()> {
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let reply = match line.split_once(char::is_whitespace) {
            Some(("CAN", term)) => Monomial::parse(term, oracle.nvars())
                .and_then(|t| oracle.can_term(&t))
                .map(|c| c.format_with(ord))
                .unwrap_or_else(|e| format!("ERR {e}")),
            None if line == "COUNT" => oracle.query_count().to_string(),
            _ => "ERR unknown request".to_string(),
        };
        writeln!(output, "{reply}")?;
        output.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field() -> PrimeField {
        PrimeField::default()
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, 2, field()).unwrap()
    }

    fn m(s: &str) -> Monomial {
        Monomial::parse(s, 2).unwrap()
    }

    fn staircase_oracle() -> CanOracle {
        let g: Vec<_> = ["X1^2*X2^2", "X1*X2^3", "X1^4*X2", "X2^8"].iter().map(|s| p(s)).collect();
        CanOracle::new(&g, &TermOrder::deglex(2)).unwrap()
    }

    #[test]
    fn can_term_examples() {
        let mut o = CanOracle::new(&[p("X1^2 + X2")], &TermOrder::deglex(2)).unwrap();
        let c = o.can_term(&m("X1^2")).unwrap();
        assert_eq!(c, p("-X2"));
        // X1^2 - (-X2) is the generator itself
        assert_eq!(&p("X1^2") - &c, p("X1^2 + X2"));
        assert_eq!(o.can_term(&m("X1*X2")).unwrap(), p("X1*X2"));
        assert!(o.can_term(&Monomial::one(3)).is_err());

        let mut o = staircase_oracle();
        assert!(o.can_term(&m("X1^2*X2^2")).unwrap().is_zero());
    }

    #[test]
    fn membership_and_ledger() {
        let mut o = staircase_oracle();
        assert_eq!(o.query_count(), 0);
        assert!(!o.member_t(&Monomial::one(2)).unwrap());
        assert!(!o.member_t(&m("X1*X2^2")).unwrap());
        assert!(!o.member_t(&m("X1^2*X2")).unwrap());
        assert!(o.member_t(&m("X1^2*X2^2")).unwrap());
        assert_eq!(o.query_count(), 4);
        o.can_poly(&p("X1 + X2 + 1")).unwrap();
        assert_eq!(o.query_count(), 7);
        assert!(o.can_poly(&p("0")).unwrap().is_zero());
        assert_eq!(o.query_count(), 7);

        let mut unit = CanOracle::new(&[p("X1 + 1"), p("X1")], &TermOrder::deglex(2)).unwrap();
        assert!(unit.member_t(&Monomial::one(2)).unwrap());
    }

    #[test]
    fn log_and_memo() {
        let mut o = staircase_oracle().with_log();
        o.member_t(&m("X1")).unwrap();
        o.member_t(&m("X1")).unwrap();
        assert_eq!(o.ledger().log(), &[m("X1"), m("X1")]);
        let mut memo = staircase_oracle().with_memo();
        memo.member_t(&m("X1")).unwrap();
        memo.member_t(&m("X1")).unwrap();
        assert_eq!(memo.query_count(), 1);
        assert_eq!(o.fresh().query_count(), 0);
    }

    #[test]
    fn masked_queries() {
        let mut o = CanOracle::new(&[p("X1^2 + X2"), p("X2^3 - 1")], &TermOrder::deglex(2)).unwrap();
        let t = m("X1^3*X2");
        let plain = o.can_term(&t).unwrap();
        let one = Polynomial::constant(2, field(), 1);
        assert_eq!(o.masked_can(&t, &[(one.clone(), one.clone())]).unwrap(), plain);
        let c = Polynomial::constant(2, field(), 7);
        let rest = Polynomial::constant(2, field(), -6);
        assert_eq!(o.masked_can(&t, &[(c, one.clone()), (rest, one.clone())]).unwrap(), plain);
        let l = p("X1 + 1");
        let r = p("X2");
        let fix = &one - &(&l * &r);
        assert_eq!(o.masked_can(&t, &[(l, r), (fix, one.clone())]).unwrap(), plain);
        assert_eq!(
            o.masked_can(&t, &[(p("2"), one)]),
            Err(Error::BadDecomposition)
        );
    }

    #[test]
    fn nc_oracle() {
        let q = |s: &str| NcPolynomial::parse(s, 2, field()).unwrap();
        let ord = WordOrder::deglex(2);
        assert!(NcCanOracle::new(vec![q("X1*X1 - X2"), q("X1*X2 - 1")], ord.clone()).is_err());
        let mut o = NcCanOracle::new(vec![q("X2*X1 - X1*X2"), q("2*X2*X2 - 2*X1")], ord).unwrap();
        let w = Word::parse("X2*X1*X2", 2).unwrap();
        assert_eq!(o.can_word(&w).unwrap(), q("X1^2"));
        assert!(o.member_t(&w).unwrap());
        assert!(!o.member_t(&Word::parse("X1*X2", 2).unwrap()).unwrap());
        assert_eq!(o.query_count(), 3);
        let one = NcPolynomial::constant(2, field(), 1);
        let x = q("X1");
        let masked = o
            .masked_can(&w, &[(q("3"), one.clone()), (q("-2"), one.clone())])
            .unwrap();
        assert_eq!(masked, q("X1^2"));
        assert!(o.masked_can(&w, &[(x, one)]).is_err());
    }

    #[test]
    fn line_protocol() {
        let mut o = CanOracle::new(&[p("X1^2 + X2")], &TermOrder::deglex(2)).unwrap();
        let input = b"CAN X1^2\nCAN X1*X2\nCOUNT\nCAN X9\nHELLO\n";
        let mut out = Vec::new();
        serve(&mut o, &TermOrder::deglex(2), &input[..], &mut out).unwrap();
        let lines: Vec<_> = std::str::from_utf8(&out).unwrap().lines().collect();
        assert_eq!(lines[..3], ["-X2", "X1*X2", "2"]);
        assert!(lines[3].starts_with("ERR"));
        assert_eq!(lines[4], "ERR unknown request");
    }

    proptest! {
        #[test]
        fn presentation_independence(e in proptest::collection::vec((0u32..6, 0u32..6), 1..10), c in 2i64..50) {
            let g = [p("X1^2*X2 + 3*X2^2 + 1"), p("X1^3 - X2")];
            let ord = TermOrder::degrevlex(2);
            let mut a = CanOracle::new(&g, &ord).unwrap();
            let alt = [
                g[0].scale(field().reduce(c)),
                &g[1] + &(&p("X1 + X2") * &g[0]),
            ];
            let mut b = CanOracle::new(&alt, &ord).unwrap();
            for (x, y) in e {
                let t = Monomial::new(vec![x, y]).unwrap();
                let ca = a.can_term(&t).unwrap();
                prop_assert_eq!(&ca, &b.can_term(&t).unwrap());
                for s in ca.support() {
                    prop_assert!(!a.member_t(s).unwrap());
                }
                if a.member_t(&t).unwrap() {
                    prop_assert!(a.member_t(&t.mul(&m("X1*X2")).unwrap()).unwrap());
                }
            }
        }
    }
}
