//! Recovering part of a two-sided reduced Gröbner basis from a canonical-form
//! oracle and a public set of ideal members, by peeling support words down to
//! minimal generators.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ncpoly::{nc_normal_form, NcPolynomial};
use crate::oracle::WordOracle;
use crate::word::{Word, WordOrder};

/// Support words of `g` that are not a proper factor of another support
/// word. No term order is involved.
pub fn candidate_terms(g: &NcPolynomial) -> Result<Vec<Word>> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let support: Vec<&Word> = g.support().collect();
    Ok(support
        .iter()
        .filter(|w| {
            !support
                .iter()
                .any(|o| o.len() > w.len() && o.contains_factor(w))
        })
        .map(|w| (*w).clone())
        .collect())
}

/// Oracle answers seen during one session, so that a word is never asked
/// twice.
struct Session<'a> {
    o: &'a mut dyn WordOracle,
    seen: HashMap<Word, NcPolynomial>,
}

impl Session<'_> {
    fn can(&mut self, w: &Word) -> Result<NcPolynomial> {
        if let Some(c) = self.seen.get(w) {
            return Ok(c.clone());
        }
        let c = self.o.can_word(w)?;
        self.seen.insert(w.clone(), c.clone());
        Ok(c)
    }

    fn member(&mut self, w: &Word) -> Result<bool> {
        let field = self.o.field();
        Ok(self.can(w)? != NcPolynomial::term(field, w.clone(), 1))
    }

    fn peel(&mut self, start: &Word) -> Result<Word> {
        if !self.member(start)? {
            return Err(Error::NormalTerm(start.to_string()));
        }
        // strip leftmost letters while the rest stays in T(I)
        let mut tau = start.clone();
        let (left, mut omega) = loop {
            let Some((l, rest)) = tau.split_left() else {
                return Ok(tau);
            };
            if self.member(&rest)? {
                tau = rest;
            } else {
                break (l, rest);
            }
        };
        // strip rightmost letters of the normal middle while X_l * middle stays in T(I)
        while let Some((upsilon, _)) = omega.split_right() {
            if self.member(&upsilon.prepend(left))? {
                omega = upsilon;
            } else {
                break;
            }
        }
        Ok(omega.prepend(left))
    }
}

/// Shrinks `start`, a word of `T(I)`, to a minimal generator that is one of
/// its factors.
pub fn peel(o: &mut dyn WordOracle, start: &Word) -> Result<Word> {
    Session {
        o,
        seen: HashMap::new(),
    }
    .peel(start)
}

#[derive(Clone, Debug)]
pub struct Problem1Result {
    /// `τ - Can(τ)` for every peeled generator `τ`, in discovery order.
    pub h: Vec<NcPolynomial>,
    /// One line per round.
    pub trace: Vec<String>,
    pub queries_used: u64,
}

/// Builds `H` with `nc_normal_form(g, H) = 0` for every `g` in `public`.
///
/// Candidate words are chosen from the support alone; `ord` is only used to
/// reduce the public polynomials by the elements found so far.
pub fn solve_problem1(
    o: &mut dyn WordOracle,
    public: &[NcPolynomial],
    ord: &WordOrder,
) -> Result<Problem1Result> {
    let start = o.query_count();
    let mut s = Session {
        o,
        seen: HashMap::new(),
    };
    for (i, g) in public.iter().enumerate() {
        let mut can = NcPolynomial::zero(g.nvars(), g.field());
        for (w, c) in g.terms() {
            can = &can + &s.can(w)?.scale(c);
        }
        if !can.is_zero() {
            return Err(Error::InconsistentPublicSet(format!(
                "element {} has canonical form {}",
                i + 1,
                can.format_with(ord)
            )));
        }
    }
    let mut h: Vec<NcPolynomial> = Vec::new();
    let mut trace = Vec::new();
    let mut residual: Vec<NcPolynomial> = public.to_vec();
    for round in 1.. {
        let Some(r) = residual.iter().find(|r| !r.is_zero()) else {
            break;
        };
        let mut candidates = candidate_terms(r)?;
        candidates.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let mut rest: Vec<Word> = r.support().filter(|w| !candidates.contains(w)).cloned().collect();
        rest.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let mut found = None;
        for w in candidates.iter().chain(&rest) {
            if s.member(w)? {
                found = Some(w.clone());
                break;
            }
        }
        let Some(start_word) = found else {
            return Err(Error::InconsistentPublicSet(
                "a nonzero residual has no support word in T(I)".into(),
            ));
        };
        let tau = s.peel(&start_word)?;
        let can = s.can(&tau)?;
        h.push(&NcPolynomial::term(r.field(), tau.clone(), 1) - &can);
        residual = public
            .iter()
            .map(|g| nc_normal_form(g, &h, ord))
            .collect::<Result<_>>()?;
        let supports: usize = residual.iter().map(NcPolynomial::len).sum();
        trace.push(format!(
            "round {round}: peeled {tau}, |G| residual supports {supports}"
        ));
    }
    Ok(Problem1Result {
        h,
        trace,
        queries_used: s.o.query_count() - start,
    })
}
