//! Sparse commutative polynomials over `F_p`, normal forms and S-polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::term::{Monomial, OrderKey, TermOrder};

/// A polynomial stored as a map from terms to nonzero residues.
///
/// Arithmetic through the `std::ops` traits panics when the operands live in
/// different rings; the parsers and constructors validate their input.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    field: PrimeField,
    terms: BTreeMap<Monomial, u64>,
}

impl Polynomial {
    pub fn zero(nvars: usize, field: PrimeField) -> Self {
        Polynomial {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, field: PrimeField, c: i64) -> Self {
        Self::term(field, Monomial::one(nvars), c)
    }

    /// `c * m`.
    pub fn term(field: PrimeField, m: Monomial, c: i64) -> Self {
        let mut p = Polynomial::zero(m.nvars(), field);
        p.add_term(m, field.reduce(c));
        p
    }

    pub fn from_terms<I>(nvars: usize, field: PrimeField, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut p = Polynomial::zero(nvars, field);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: m.nvars(),
                });
            }
            p.add_term(m, field.reduce(c));
        }
        Ok(p)
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

    /// Number of support terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Support terms with their residues, in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Maximal total degree of a support term; 0 for the zero polynomial.
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Support sorted by `ord`, largest first.
    pub fn sorted_terms(&self, ord: &TermOrder) -> Vec<(Monomial, u64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, &c)| (m.clone(), c)).collect();
        v.sort_by(|a, b| ord.cmp_raw(&b.0, &a.0));
        v
    }

    /// Leading term and leading coefficient.
    pub fn leading(&self, ord: &TermOrder) -> Result<(Monomial, u64)> {
        self.check_order(ord)?;
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp_raw(a.0, b.0))
            .map(|(m, &c)| (m.clone(), c))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn lead_term(&self, ord: &TermOrder) -> Result<Monomial> {
        self.leading(ord).map(|(m, _)| m)
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self, ord: &TermOrder) -> Result<Polynomial> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let (_, lc) = self.leading(ord)?;
        Ok(self.scale(self.field.inv(lc)))
    }

    pub fn scale(&self, c: u64) -> Polynomial {
        let c = c % self.field.modulus();
        let mut out = Polynomial::zero(self.nvars, self.field);
        if c != 0 {
            for (m, &a) in &self.terms {
                out.terms.insert(m.clone(), self.field.mul(a, c));
            }
        }
        out
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: u64) -> Polynomial {
        self.assert_term(m);
        let c = c % self.field.modulus();
        let mut out = Polynomial::zero(self.nvars, self.field);
        if c != 0 {
            for (t, &a) in &self.terms {
                let prod = t.mul(m).expect("exponent overflow");
                out.terms.insert(prod, self.field.mul(a, c));
            }
        }
        out
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: u64) {
        self.assert_term(&m);
        let c = c % self.field.modulus();
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
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

    /// The same polynomial with one extra variable appended.
    pub fn extended(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars + 1,
            field: self.field,
            terms: self.terms.iter().map(|(m, &c)| (m.extended(0), c)).collect(),
        }
    }

    pub fn same_ring(&self, other: &Polynomial) -> Result<()> {
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

    pub(crate) fn check_order(&self, ord: &TermOrder) -> Result<()> {
        if ord.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: ord.nvars(),
                found: self.nvars,
            });
        }
        Ok(())
    }

    fn assert_term(&self, m: &Monomial) {
        assert_eq!(m.nvars(), self.nvars, "term and polynomial rings differ");
    }

    fn assert_ring(&self, other: &Polynomial) {
        if let Err(e) = self.same_ring(other) {
            panic!("{e}");
        }
    }

    /// Parses `3*X1^2*X2 - X3 + 7`. Coefficients are integers reduced mod `p`.
    pub fn parse(text: &str, nvars: usize, field: PrimeField) -> Result<Polynomial> {
        let mut p = Polynomial::zero(nvars, field);
        for (sign, chunk) in split_signed(text)? {
            let (c, m) = parse_product(chunk, field, |f| {
                let (var, k) = crate::term::parse_power(f)?;
                if var >= nvars {
                    return Err(Error::VariableOutOfRange { index: var, nvars });
                }
                Ok(vec![(var, k)])
            })?;
            let mut exps = vec![0u32; nvars];
            for (var, k) in m {
                exps[var] = exps[var].checked_add(k).ok_or(Error::ExponentOverflow)?;
            }
            let c = if sign { field.neg(c) } else { c };
            p.add_term(Monomial::new(exps)?, c);
        }
        Ok(p)
    }

    /// Text with terms in descending `ord` and symmetric coefficients.
    pub fn format_with(&self, ord: &TermOrder) -> String {
        let terms = self.sorted_terms(ord);
        let items = terms.iter().map(|(m, c)| (m.to_string(), self.field.signed(*c)));
        render(items)
    }
}

/// Splits `a - b + c` into `(negated, chunk)` pieces.
pub(crate) fn split_signed(text: &str) -> Result<Vec<(bool, &str)>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut out = Vec::new();
    let mut neg = false;
    let mut start = 0;
    let bytes = text.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'+' || b == b'-' {
            let chunk = text[start..i].trim();
            if chunk.is_empty() {
                if !out.is_empty() || i != 0 {
                    return Err(Error::Parse(format!("dangling operator in '{text}'")));
                }
                neg = b == b'-';
            } else {
                out.push((neg, chunk));
                neg = b == b'-';
            }
            start = i + 1;
        }
    }
    let chunk = text[start..].trim();
    if chunk.is_empty() {
        return Err(Error::Parse(format!("dangling operator in '{text}'")));
    }
    out.push((neg, chunk));
    Ok(out)
}

/// Parses `c*f1*f2*...` where each non-numeric factor goes through `factor`.
pub(crate) fn parse_product<T>(
    chunk: &str,
    field: PrimeField,
    mut factor: impl FnMut(&str) -> Result<Vec<T>>,
) -> Result<(u64, Vec<T>)> {
    let mut c = 1u64;
    let mut out = Vec::new();
    for f in chunk.split('*') {
        let f = f.trim();
        if f.is_empty() {
            return Err(Error::Parse(format!("empty factor in '{chunk}'")));
        }
        if f.bytes().all(|b| b.is_ascii_digit()) {
            let v = f
                .parse::<u128>()
                .map_err(|_| Error::Parse(format!("bad coefficient '{f}'")))?;
            c = field.mul(c, (v % field.modulus() as u128) as u64);
        } else if f == "1" {
            continue;
        } else {
            out.extend(factor(f)?);
        }
    }
    Ok((c, out))
}

pub(crate) fn render(items: impl Iterator<Item = (String, i64)>) -> String {
    let mut s = String::new();
    for (i, (m, c)) in items.enumerate() {
        let (neg, a) = (c < 0, c.unsigned_abs());
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        if m == "1" {
            s.push_str(&a.to_string());
        } else if a == 1 {
            s.push_str(&m);
        } else {
            s.push_str(&format!("{a}*{m}"));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for Polynomial {
    /// Descending storage order, which is lex with `X1` most significant.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self
            .terms
            .iter()
            .rev()
            .map(|(m, &c)| (m.to_string(), self.field.signed(c)));
        f.write_str(&render(items))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_ring(rhs);
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.assert_ring(rhs);
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.field.modulus() - 1)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_ring(rhs);
        let mut out = Polynomial::zero(self.nvars, self.field);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                out.add_term(a.mul(b).expect("exponent overflow"), self.field.mul(ca, cb));
            }
        }
        out
    }
}

/// A reducer prepared for repeated use: lead, inverse leading coefficient
/// and the remaining terms.
pub(crate) struct Reducer {
    pub lead: Monomial,
    lc_inv: u64,
    tail: Vec<(Monomial, u64)>,
}

impl Reducer {
    pub fn new(g: &Polynomial, ord: &TermOrder) -> Option<Reducer> {
        let (lead, lc) = g.leading(ord).ok()?;
        let tail = g
            .terms
            .iter()
            .filter(|(m, _)| **m != lead)
            .map(|(m, &c)| (m.clone(), c))
            .collect();
        Some(Reducer {
            lead,
            lc_inv: g.field.inv(lc),
            tail,
        })
    }
}

/// Reducers sorted by the tie-breaking rule: smallest lead first, then input
/// position.
pub(crate) fn prepare(g: &[Polynomial], ord: &TermOrder) -> Vec<Reducer> {
    let mut rs: Vec<(usize, Reducer)> = g
        .iter()
        .enumerate()
        .filter_map(|(i, p)| Reducer::new(p, ord).map(|r| (i, r)))
        .collect();
    rs.sort_by(|a, b| ord.cmp_raw(&a.1.lead, &b.1.lead).then(a.0.cmp(&b.0)));
    rs.into_iter().map(|(_, r)| r).collect()
}

pub(crate) fn reduce_with(f: &Polynomial, reducers: &[Reducer], ord: &TermOrder) -> Polynomial {
    let field = f.field;
    let mut work: BTreeMap<OrderKey, (Monomial, u64)> = f
        .terms
        .iter()
        .map(|(m, &c)| (ord.sort_key(m), (m.clone(), c)))
        .collect();
    let mut out = Polynomial::zero(f.nvars, field);
    while let Some((_, (m, c))) = work.pop_last() {
        let Some(r) = reducers.iter().find(|r| r.lead.divides_raw(&m)) else {
            out.terms.insert(m, c);
            continue;
        };
        let q = m.div_raw(&r.lead).expect("lead divides term");
        let factor = field.neg(field.mul(c, r.lc_inv));
        for (t, a) in &r.tail {
            let prod = t.mul(&q).expect("exponent overflow");
            let delta = field.mul(*a, factor);
            let key = ord.sort_key(&prod);
            match work.entry(key) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert((prod, delta));
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

/// Fully reduced normal form of `f` modulo `g`: no support term of the result
/// is divisible by a leading term of `g`.
///
/// The term reduced at each step is the largest reducible one; among the
/// elements whose lead divides it, the one with the smallest lead wins, ties
/// going to the earlier element. Zero elements of `g` are ignored.
pub fn normal_form(f: &Polynomial, g: &[Polynomial], ord: &TermOrder) -> Result<Polynomial> {
    f.check_order(ord)?;
    for p in g {
        f.same_ring(p)?;
    }
    Ok(reduce_with(f, &prepare(g, ord), ord))
}

/// `lc(g)^-1 (L/T(g)) g - lc(f)^-1 (L/T(f)) f` with `L = lcm(T(f), T(g))`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, ord: &TermOrder) -> Result<Polynomial> {
    f.same_ring(g)?;
    let (tf, cf) = f.leading(ord)?;
    let (tg, cg) = g.leading(ord)?;
    let l = tf.lcm_raw(&tg);
    let field = f.field;
    let a = g.mul_term(&l.div_raw(&tg).expect("lcm"), field.inv(cg));
    let b = f.mul_term(&l.div_raw(&tf).expect("lcm"), field.inv(cf));
    Ok(&a - &b)
}
