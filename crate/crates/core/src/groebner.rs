//! Buchberger completion and reduced Gröbner bases.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::{normal_form, prepare, reduce_with, s_polynomial, Polynomial};
use crate::term::{Monomial, TermOrder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    elements: Vec<Polynomial>,
    ord: TermOrder,
    field: PrimeField,
    reduced: bool,
}

impl GroebnerBasis {
    /// Checks `elements` with [`is_groebner`] and keeps them unchanged.
    pub fn from_verified(elements: Vec<Polynomial>, ord: TermOrder) -> Result<Self> {
        let elements: Vec<_> = elements.into_iter().filter(|g| !g.is_zero()).collect();
        if elements.is_empty() {
            return Err(Error::AllZeroInput);
        }
        for g in &elements {
            g.check_order(&ord)?;
            elements[0].same_ring(g)?;
        }
        if let Some((i, j, r)) = failing_pairs(&elements, &ord).into_iter().next() {
            return Err(Error::NotGroebner(format!(
                "S-polynomial of elements {} and {} reduces to {}",
                i + 1,
                j + 1,
                r.format_with(&ord)
            )));
        }
        let reduced = is_reduced(&elements, &ord);
        Ok(GroebnerBasis {
            field: elements[0].field(),
            elements,
            ord,
            reduced,
        })
    }

    /// The empty basis of the zero ideal.
    pub fn zero_ideal(field: PrimeField, ord: TermOrder) -> Self {
        GroebnerBasis {
            elements: Vec::new(),
            ord,
            field,
            reduced: true,
        }
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn ord(&self) -> &TermOrder {
        &self.ord
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn nvars(&self) -> usize {
        self.ord.nvars()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Leading terms in element order.
    pub fn leads(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|g| g.lead_term(&self.ord).expect("nonzero element"))
            .collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        normal_form(f, &self.elements, &self.ord)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// `t` lies in the leading-term ideal.
    pub fn lead_ideal_contains(&self, t: &Monomial) -> bool {
        self.leads().iter().any(|l| l.divides_raw(t))
    }

    pub fn is_unit(&self) -> bool {
        self.leads().iter().any(Monomial::is_one)
    }

    /// Largest total degree of a basis element.
    pub fn gb_degree(&self) -> u64 {
        self.elements.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Largest total degree of a leading term; equals [`gb_degree`](Self::gb_degree)
    /// for reduced bases under degree-compatible orders.
    pub fn lead_degree(&self) -> u64 {
        self.leads().iter().map(Monomial::degree).max().unwrap_or(0)
    }
}

/// Buchberger's algorithm followed by reduction to the reduced basis.
///
/// Pairs are taken smallest lcm first. A pair is skipped when its leads are
/// coprime, or when some other element's lead divides the lcm and both
/// connecting pairs have already been treated.
pub fn buchberger(f: &[Polynomial], ord: &TermOrder) -> Result<GroebnerBasis> {
    let mut g: Vec<Polynomial> = Vec::new();
    for p in f.iter().filter(|p| !p.is_zero()) {
        p.check_order(ord)?;
        if let Some(first) = g.first() {
            first.same_ring(p)?;
        }
        g.push(p.monic(ord)?);
    }
    if g.is_empty() {
        return Err(Error::AllZeroInput);
    }
    let mut leads: Vec<Monomial> = g.iter().map(|p| p.lead_term(ord).unwrap()).collect();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..g.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    while !leads.iter().any(Monomial::is_one) {
        let Some(&(i, j)) = pending.iter().min_by(|a, b| {
            let la = leads[a.0].lcm_raw(&leads[a.1]);
            let lb = leads[b.0].lcm_raw(&leads[b.1]);
            ord.cmp_raw(&la, &lb).then(a.cmp(b))
        }) else {
            break;
        };
        pending.remove(&(i, j));
        if leads[i].is_coprime_raw(&leads[j]) {
            continue;
        }
        let l = leads[i].lcm_raw(&leads[j]);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chained = (0..g.len()).any(|k| {
            k != i
                && k != j
                && leads[k].divides_raw(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chained {
            continue;
        }
        let s = s_polynomial(&g[i], &g[j], ord)?;
        let h = reduce_with(&s, &prepare(&g, ord), ord);
        if h.is_zero() {
            continue;
        }
        let h = h.monic(ord)?;
        let k = g.len();
        leads.push(h.lead_term(ord)?);
        g.push(h);
        for i in 0..k {
            pending.insert((i, k));
        }
    }
    Ok(GroebnerBasis {
        field: g[0].field(),
        elements: reduce_basis(g, ord),
        ord: ord.clone(),
        reduced: true,
    })
}

/// Minimal, monic, tail-reduced, sorted by leading term descending.
fn reduce_basis(g: Vec<Polynomial>, ord: &TermOrder) -> Vec<Polynomial> {
    let leads: Vec<Monomial> = g.iter().map(|p| p.lead_term(ord).unwrap()).collect();
    let keep: Vec<usize> = (0..g.len())
        .filter(|&i| {
            !(0..g.len()).any(|j| {
                j != i && leads[j].divides_raw(&leads[i]) && (leads[j] != leads[i] || j < i)
            })
        })
        .collect();
    let minimal: Vec<Polynomial> = keep.iter().map(|&i| g[i].clone()).collect();
    let mut out = Vec::with_capacity(minimal.len());
    for (i, p) in minimal.iter().enumerate() {
        let lead = p.lead_term(ord).unwrap();
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        let mut tail = p.clone();
        tail.add_term(lead.clone(), p.field().neg(p.coeff(&lead)));
        let tail = reduce_with(&tail, &prepare(&others, ord), ord);
        let mut q = tail;
        q.add_term(lead.clone(), p.coeff(&lead));
        out.push(q.monic(ord).unwrap());
    }
    out.sort_by(|a, b| ord.cmp_raw(&b.lead_term(ord).unwrap(), &a.lead_term(ord).unwrap()));
    out
}

fn is_reduced(g: &[Polynomial], ord: &TermOrder) -> bool {
    let leads: Vec<(Monomial, u64)> = g.iter().map(|p| p.leading(ord).unwrap()).collect();
    leads.iter().all(|(_, c)| *c == 1)
        && g.iter().enumerate().all(|(i, p)| {
            p.support().all(|t| {
                leads
                    .iter()
                    .enumerate()
                    .all(|(j, (l, _))| !l.divides_raw(t) || (i == j && *t == *l))
            })
        })
}

/// Pairs whose S-polynomial does not reduce to zero, with the remainder.
pub fn failing_pairs(g: &[Polynomial], ord: &TermOrder) -> Vec<(usize, usize, Polynomial)> {
    let reducers = prepare(g, ord);
    let mut out = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            if g[i].is_zero() || g[j].is_zero() {
                continue;
            }
            let Ok(s) = s_polynomial(&g[i], &g[j], ord) else {
                continue;
            };
            let r = reduce_with(&s, &reducers, ord);
            if !r.is_zero() {
                out.push((i, j, r));
            }
        }
    }
    out
}

/// Every pairwise S-polynomial reduces to zero modulo `g`.
pub fn is_groebner(g: &[Polynomial], ord: &TermOrder) -> bool {
    failing_pairs(g, ord).is_empty()
}
