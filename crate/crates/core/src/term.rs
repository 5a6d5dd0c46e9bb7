//! Commutative terms `X1^a1 * ... * Xn^an`, term orders and exponent boxes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An exponent vector. The derived `Ord` is plain lexicographic order on the
/// raw vector and only serves as a storage order for maps; use a
/// [`TermOrder`] for anything with algebraic meaning.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Result<Self> {
        if exps.is_empty() {
            return Err(Error::Invalid("a term needs at least one variable".into()));
        }
        Ok(Monomial(exps))
    }

    pub fn one(nvars: usize) -> Self {
        assert!(nvars >= 1);
        Monomial(vec![0; nvars])
    }

    /// The variable with 0-based index `var`.
    pub fn var(nvars: usize, var: usize) -> Result<Self> {
        if var >= nvars {
            return Err(Error::VariableOutOfRange { index: var, nvars });
        }
        let mut e = vec![0; nvars];
        e[var] = 1;
        Ok(Monomial(e))
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn check_dims(&self, other: &Monomial) -> Result<()> {
        if self.nvars() != other.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        Ok(())
    }

    /// `self | other`.
    pub fn divides(&self, other: &Monomial) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self.divides_raw(other))
    }

    #[inline]
    pub(crate) fn divides_raw(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Result<Monomial> {
        self.check_dims(other)?;
        Ok(self.lcm_raw(other))
    }

    pub(crate) fn lcm_raw(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check_dims(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Result<Option<Monomial>> {
        self.check_dims(other)?;
        Ok(self.div_raw(other))
    }

    pub(crate) fn div_raw(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides_raw(self) {
            return None;
        }
        Some(Monomial(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub(crate) fn is_coprime_raw(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// The `X_var`-th predecessor `self / X_var`, absent when the exponent is 0.
    pub fn predecessor(&self, var: usize) -> Result<Option<Monomial>> {
        if var >= self.nvars() {
            return Err(Error::VariableOutOfRange {
                index: var,
                nvars: self.nvars(),
            });
        }
        if self.0[var] == 0 {
            return Ok(None);
        }
        let mut e = self.0.clone();
        e[var] -= 1;
        Ok(Some(Monomial(e)))
    }

    /// `self * X_var^k`.
    pub fn raised(&self, var: usize, k: u32) -> Result<Monomial> {
        if var >= self.nvars() {
            return Err(Error::VariableOutOfRange {
                index: var,
                nvars: self.nvars(),
            });
        }
        let mut e = self.0.clone();
        e[var] = e[var].checked_add(k).ok_or(Error::ExponentOverflow)?;
        Ok(Monomial(e))
    }

    /// The same exponents with `exp` appended as a new last variable.
    pub fn extended(&self, exp: u32) -> Monomial {
        let mut e = self.0.clone();
        e.push(exp);
        Monomial(e)
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn parse(text: &str, nvars: usize) -> Result<Monomial> {
        let mut exps = vec![0u32; nvars];
        let text = text.trim();
        if text == "1" {
            return Ok(Monomial(exps));
        }
        for factor in text.split('*') {
            let (var, k) = parse_power(factor)?;
            if var >= nvars {
                return Err(Error::VariableOutOfRange { index: var, nvars });
            }
            exps[var] = exps[var].checked_add(k).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Monomial(exps))
    }
}

/// Parses `X<i>` or `X<i>^<k>` into a 0-based variable index and exponent.
pub(crate) fn parse_power(factor: &str) -> Result<(usize, u32)> {
    let factor = factor.trim();
    let (base, exp) = match factor.split_once('^') {
        Some((b, e)) => (
            b.trim(),
            e.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?,
        ),
        None => (factor, 1),
    };
    let idx = base
        .strip_prefix('X')
        .or_else(|| base.strip_prefix('x'))
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&i| i >= 1)
        .ok_or_else(|| Error::Parse(format!("expected a variable like X1, got '{base}'")))?;
    Ok((idx - 1, exp))
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "X{}", i + 1)?;
            } else {
                write!(f, "X{}^{}", i + 1, e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    DegLex,
    DegRevLex,
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lex" => Ok(OrderKind::Lex),
            "deglex" | "grlex" => Ok(OrderKind::DegLex),
            "degrevlex" | "grevlex" => Ok(OrderKind::DegRevLex),
            other => Err(Error::Parse(format!("unknown term order '{other}'"))),
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Lex => "lex",
            OrderKind::DegLex => "deglex",
            OrderKind::DegRevLex => "degrevlex",
        })
    }
}

/// A term order together with a variable precedence.
///
/// `precedence[r]` is the variable of rank `r`, rank 0 being the smallest.
/// The default precedence is `X1 < X2 < ... < Xn`.
///
/// * `Lex`: compare exponents from the largest variable down.
/// * `DegLex`: total degree, then `Lex`.
/// * `DegRevLex`: total degree, then from the smallest variable up; the
///   term with the larger exponent there is the smaller term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
}

impl TermOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        TermOrder {
            kind,
            precedence: (0..nvars).collect(),
        }
    }

    pub fn with_precedence(kind: OrderKind, precedence: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; precedence.len()];
        for &v in &precedence {
            if v >= precedence.len() || seen[v] {
                return Err(Error::Invalid(format!(
                    "precedence {precedence:?} is not a permutation"
                )));
            }
            seen[v] = true;
        }
        Ok(TermOrder { kind, precedence })
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars)
    }

    pub fn deglex(nvars: usize) -> Self {
        Self::new(OrderKind::DegLex, nvars)
    }

    pub fn degrevlex(nvars: usize) -> Self {
        Self::new(OrderKind::DegRevLex, nvars)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.precedence.len()
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn is_degree_compatible(&self) -> bool {
        !matches!(self.kind, OrderKind::Lex)
    }

    /// The same order on a ring with `nvars` variables and default precedence.
    pub fn resized(&self, nvars: usize) -> TermOrder {
        TermOrder::new(self.kind, nvars)
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        for m in [a, b] {
            if m.nvars() != self.nvars() {
                return Err(Error::DimensionMismatch {
                    expected: self.nvars(),
                    found: m.nvars(),
                });
            }
        }
        Ok(self.cmp_raw(a, b))
    }

    pub(crate) fn cmp_raw(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), self.nvars());
        debug_assert_eq!(b.nvars(), self.nvars());
        let (ea, eb) = (a.exps(), b.exps());
        let lex_from_top = || {
            for &v in self.precedence.iter().rev() {
                match ea[v].cmp(&eb[v]) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        };
        match self.kind {
            OrderKind::Lex => lex_from_top(),
            OrderKind::DegLex => a.degree().cmp(&b.degree()).then_with(lex_from_top),
            OrderKind::DegRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for &v in &self.precedence {
                    match ea[v].cmp(&eb[v]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }

    /// A key whose lexicographic order agrees with this term order.
    pub(crate) fn sort_key(&self, m: &Monomial) -> OrderKey {
        let e = m.exps();
        let mut key = Vec::with_capacity(e.len() + 1);
        match self.kind {
            OrderKind::Lex => key.extend(self.precedence.iter().rev().map(|&v| e[v] as i64)),
            OrderKind::DegLex => {
                key.push(m.degree() as i64);
                key.extend(self.precedence.iter().rev().map(|&v| e[v] as i64));
            }
            OrderKind::DegRevLex => {
                key.push(m.degree() as i64);
                key.extend(self.precedence.iter().map(|&v| -(e[v] as i64)));
            }
        }
        OrderKey(key)
    }
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct OrderKey(Vec<i64>);

/// The exponent box `B(D) = { X^a : 0 <= a_i <= D }` with `(D+1)^n` terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TermBox {
    pub nvars: usize,
    pub bound: u32,
}

impl TermBox {
    pub fn new(nvars: usize, bound: u32) -> Self {
        TermBox { nvars, bound }
    }

    pub fn len(&self) -> u64 {
        (self.bound as u64 + 1).pow(self.nvars as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.nvars() == self.nvars && m.exps().iter().all(|&e| e <= self.bound)
    }

    /// Every term of the box exactly once, by total degree and then by `ord`.
    pub fn enumerate(&self, ord: &TermOrder) -> std::vec::IntoIter<Monomial> {
        let mut all = Vec::with_capacity(self.len() as usize);
        let mut cur = vec![0u32; self.nvars];
        loop {
            all.push(Monomial(cur.clone()));
            let mut i = 0;
            loop {
                if i == self.nvars {
                    all.sort_by(|a, b| a.degree().cmp(&b.degree()).then(ord.cmp_raw(a, b)));
                    return all.into_iter();
                }
                if cur[i] < self.bound {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}

/// All terms of total degree exactly `deg` in `nvars` variables.
pub fn terms_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, deg, &mut Vec::with_capacity(nvars), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec()).unwrap()
    }

    #[test]
    fn compare_examples() {
        let dl = TermOrder::deglex(2);
        assert_eq!(dl.compare(&m(&[0, 0]), &m(&[1, 0])).unwrap(), Ordering::Less);
        assert_eq!(dl.compare(&m(&[2, 0]), &m(&[1, 1])).unwrap(), Ordering::Less);
        // X*Y against Z^2 with X < Y < Z: X*Y carries the smallest variable.
        let drl = TermOrder::degrevlex(3);
        assert_eq!(
            drl.compare(&m(&[1, 1, 0]), &m(&[0, 0, 2])).unwrap(),
            Ordering::Less
        );
        assert!(dl.compare(&m(&[1, 0]), &m(&[1, 0, 0])).is_err());
    }

    /// Degrevlex from its weight-matrix definition: total degree, then
    /// minus the exponent of the smallest variable, then the next, ...
    fn degrevlex_oracle(a: &[u32], b: &[u32]) -> Ordering {
        let weights = |e: &[u32]| {
            let mut w = vec![e.iter().map(|&x| x as i64).sum::<i64>()];
            w.extend(e.iter().map(|&x| -(x as i64)));
            w
        };
        weights(a).cmp(&weights(b))
    }

    #[test]
    fn degrevlex_matches_weight_definition_on_degree_two() {
        let ord = TermOrder::degrevlex(3);
        let terms = terms_of_degree(3, 2);
        assert_eq!(terms.len(), 6);
        for a in &terms {
            for b in &terms {
                assert_eq!(ord.cmp_raw(a, b), degrevlex_oracle(a.exps(), b.exps()));
            }
        }
    }

    #[test]
    fn divides_and_lcm() {
        assert!(m(&[0, 0]).divides(&m(&[3, 5])).unwrap());
        assert!(!m(&[2, 2]).divides(&m(&[2, 1])).unwrap());
        assert!(m(&[1, 3]).divides(&m(&[1, 3])).unwrap());
        assert_eq!(m(&[2, 0]).lcm(&m(&[0, 3])).unwrap(), m(&[2, 3]));
        assert_eq!(m(&[1, 2]).lcm(&m(&[2, 1])).unwrap(), m(&[2, 2]));
        assert_eq!(m(&[4, 1]).lcm(&m(&[4, 1])).unwrap(), m(&[4, 1]));
        assert!(m(&[1]).divides(&m(&[1, 1])).is_err());
    }

    #[test]
    fn predecessors() {
        assert_eq!(m(&[2, 1]).predecessor(1).unwrap(), Some(m(&[2, 0])));
        assert_eq!(m(&[2, 0]).predecessor(1).unwrap(), None);
        assert_eq!(m(&[0, 0]).predecessor(0).unwrap(), None);
        assert!(m(&[0, 0]).predecessor(2).is_err());
    }

    #[test]
    fn overflow_is_an_error() {
        assert_eq!(m(&[u32::MAX, 0]).mul(&m(&[1, 0])), Err(Error::ExponentOverflow));
    }

    #[test]
    fn box_sizes() {
        let ord = TermOrder::deglex(1);
        let b: Vec<_> = TermBox::new(1, 2).enumerate(&ord).collect();
        assert_eq!(b, vec![m(&[0]), m(&[1]), m(&[2])]);
        assert_eq!(TermBox::new(2, 1).enumerate(&TermOrder::deglex(2)).count(), 4);
        let big: Vec<_> = TermBox::new(3, 8).enumerate(&TermOrder::deglex(3)).collect();
        assert_eq!(big.len(), 729);
        let uniq: std::collections::HashSet<_> = big.iter().collect();
        assert_eq!(uniq.len(), 729);
        assert!(big.windows(2).all(|w| w[0].degree() <= w[1].degree()));
    }

    #[test]
    fn text_round_trip() {
        let t = Monomial::parse("X1^2 * X3", 3).unwrap();
        assert_eq!(t, m(&[2, 0, 1]));
        assert_eq!(t.to_string(), "X1^2*X3");
        assert_eq!(Monomial::parse("1", 2).unwrap().to_string(), "1");
        assert!(Monomial::parse("X4", 3).is_err());
        assert!(Monomial::parse("Y", 3).is_err());
    }

    fn exps(n: usize) -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..6, n).prop_map(Monomial)
    }

    fn kinds() -> impl Strategy<Value = OrderKind> {
        prop_oneof![
            Just(OrderKind::Lex),
            Just(OrderKind::DegLex),
            Just(OrderKind::DegRevLex)
        ]
    }

    proptest! {
        #[test]
        fn semigroup_law(kind in kinds(), a in exps(3), b in exps(3), c in exps(3)) {
            let ord = TermOrder::new(kind, 3);
            let ac = a.mul(&c).unwrap();
            let bc = b.mul(&c).unwrap();
            prop_assert_eq!(ord.cmp_raw(&a, &b), ord.cmp_raw(&ac, &bc));
            prop_assert_ne!(ord.cmp_raw(&Monomial::one(3), &a), Ordering::Greater);
        }

        #[test]
        fn antisymmetric_and_transitive(kind in kinds(), a in exps(3), b in exps(3), c in exps(3)) {
            let ord = TermOrder::new(kind, 3);
            prop_assert_eq!(ord.cmp_raw(&a, &b), ord.cmp_raw(&b, &a).reverse());
            prop_assert_eq!(ord.cmp_raw(&a, &b) == Ordering::Equal, a == b);
            if ord.cmp_raw(&a, &b) == Ordering::Less && ord.cmp_raw(&b, &c) == Ordering::Less {
                prop_assert_eq!(ord.cmp_raw(&a, &c), Ordering::Less);
            }
            prop_assert_eq!(ord.sort_key(&a).cmp(&ord.sort_key(&b)), ord.cmp_raw(&a, &b));
        }

        #[test]
        fn divides_iff_lcm_is_right(a in exps(3), b in exps(3)) {
            prop_assert_eq!(a.divides(&b).unwrap(), a.lcm(&b).unwrap() == b);
        }

        #[test]
        fn predecessor_then_multiply_back(a in exps(3), var in 0usize..3) {
            if let Some(p) = a.predecessor(var).unwrap() {
                prop_assert_eq!(p.mul(&Monomial::var(3, var).unwrap()).unwrap(), a);
            }
        }
    }
}
