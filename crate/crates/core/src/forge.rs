//! Pairs of ideals that agree on every term of degree at most `δ` but have
//! different reduced bases, so no reconstruction limited to `B(δ)` can tell
//! them apart.
//!
//! From an ideal `J` and `δ > d(J)` this builds `I = X2·J` and
//! `I_δ = X2·J + (h0)`, where `h0 = Ω - Can(Ω, J)` and `Ω` is the smallest
//! term of degree `δ + 1` in `T(J)`.

use crate::error::{Error, Result};
use crate::groebner::{buchberger, is_groebner, GroebnerBasis};
use crate::oracle::{CanOracle, MembershipOracle, TermOracle};
use crate::poly::{normal_form, Polynomial};
use crate::staircase::{reconstruct, StaircaseResult};
use crate::term::{terms_of_degree, Monomial, TermBox, TermOrder};

#[derive(Clone, Debug)]
pub struct ForgeOutput {
    pub j_basis: GroebnerBasis,
    pub delta: u32,
    pub omega: Monomial,
    /// `X1^(δ+1-d_s)·T(γ_s)` for the lowest-degree basis element `γ_s`.
    pub closed_form: Monomial,
    pub closed_form_matches: bool,
    pub h0: Polynomial,
    /// `h0` followed by `X2·γ_i` for every element of the basis of `J`.
    pub h: Vec<Polynomial>,
    pub h_is_groebner: bool,
    pub oracle_i: CanOracle,
    pub oracle_idelta: CanOracle,
}

impl ForgeOutput {
    pub fn ord(&self) -> &TermOrder {
        self.j_basis.ord()
    }

    /// Generators of `X2·J`.
    pub fn i_generators(&self) -> &[Polynomial] {
        &self.h[1..]
    }
}

pub fn build_counterexample(j_gens: &[Polynomial], ord: &TermOrder, delta: u32) -> Result<ForgeOutput> {
    if !ord.is_degree_compatible() {
        return Err(Error::NotDegreeCompatible(ord.kind().to_string()));
    }
    let n = ord.nvars();
    if n < 2 {
        return Err(Error::Invalid("the construction needs at least two variables".into()));
    }
    let j_basis = buchberger(j_gens, ord)?;
    if j_basis.is_unit() {
        return Err(Error::UnitIdeal);
    }
    if j_basis.elements().is_empty() {
        return Err(Error::Invalid("J is the zero ideal".into()));
    }
    let min = j_basis.gb_degree() as u32 + 1;
    if delta < min {
        return Err(Error::DeltaTooSmall { delta, min });
    }
    let field = j_basis.field();

    let omega = terms_of_degree(n, delta + 1)
        .into_iter()
        .filter(|t| j_basis.lead_ideal_contains(t))
        .min_by(|a, b| ord.cmp_raw(a, b))
        .expect("every lead has a multiple of each larger degree");

    let gamma_s = j_basis
        .elements()
        .iter()
        .map(|g| g.lead_term(ord).expect("nonzero"))
        .min_by(|a, b| a.degree().cmp(&b.degree()).then(ord.cmp_raw(a, b)))
        .expect("nonempty basis");
    let shift = (u64::from(delta) + 1 - gamma_s.degree()) as u32;
    let mut exps = gamma_s.exps().to_vec();
    exps[0] += shift;
    let closed_form = Monomial::new(exps)?;
    let closed_form_matches = closed_form == omega;

    let omega_poly = Polynomial::term(field, omega.clone(), 1);
    let h0 = &omega_poly - &normal_form(&omega_poly, j_basis.elements(), ord)?;

    let x2 = Monomial::var(n, 1)?;
    let mut h = vec![h0.clone()];
    h.extend(j_basis.elements().iter().map(|g| g.mul_term(&x2, 1)));
    let h_is_groebner = is_groebner(&h, ord);

    let oracle_i = CanOracle::new(&h[1..], ord)?;
    let oracle_idelta = CanOracle::new(&h, ord)?;
    Ok(ForgeOutput {
        j_basis,
        delta,
        omega,
        closed_form,
        closed_form_matches,
        h0,
        h,
        h_is_groebner,
        oracle_i,
        oracle_idelta,
    })
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub small_bound: u32,
    pub big_bound: u32,
    /// Reconstruction on the `I_δ` oracle at the small bound.
    pub small: StaircaseResult,
    /// Reconstruction on the `I_δ` oracle at the large bound.
    pub big: StaircaseResult,
    /// Reconstruction on the `X2·J` oracle at the small bound.
    pub small_on_i: StaircaseResult,
    /// The small-bound output equals the generators of `T(X2·J)` in the box.
    pub small_matches_i: bool,
    /// The large-bound output equals the generators of `T(I_δ)` in the box.
    pub big_matches_idelta: bool,
    /// Both oracles give the same reconstruction at the small bound.
    pub small_agrees: bool,
    pub differ: bool,
}

fn leads_in_box(b: &GroebnerBasis, bound: u32) -> Vec<Monomial> {
    let bx = TermBox::new(b.nvars(), bound);
    let mut v: Vec<Monomial> = b.leads().into_iter().filter(|t| bx.contains(t)).collect();
    v.sort();
    v
}

fn sorted(mut v: Vec<Monomial>) -> Vec<Monomial> {
    v.sort();
    v
}

/// Runs the reconstruction at `D = δ` and `D = δ + 1` on fresh copies of the
/// oracles.
pub fn demonstrate_bound_necessity(f: &ForgeOutput) -> Result<BoundReport> {
    let (small_bound, big_bound) = (f.delta, f.delta + 1);
    let small = reconstruct(&mut f.oracle_idelta.fresh(), small_bound)?;
    let big = reconstruct(&mut f.oracle_idelta.fresh(), big_bound)?;
    let small_on_i = reconstruct(&mut f.oracle_i.fresh(), small_bound)?;
    let small_matches_i =
        sorted(small.generators.clone()) == leads_in_box(f.oracle_i.reveal_basis(), small_bound);
    let big_matches_idelta =
        sorted(big.generators.clone()) == leads_in_box(f.oracle_idelta.reveal_basis(), big_bound);
    let small_agrees = small.generators == small_on_i.generators && small.reduced_basis == small_on_i.reduced_basis;
    let differ = sorted(small.generators.clone()) != sorted(big.generators.clone());
    Ok(BoundReport {
        small_bound,
        big_bound,
        small,
        big,
        small_on_i,
        small_matches_i,
        big_matches_idelta,
        small_agrees,
        differ,
    })
}

/// Compares both oracles on every term of degree at most `δ`, by membership
/// and by canonical form.
pub fn low_degree_agreement(f: &ForgeOutput) -> Result<bool> {
    let (mut a, mut b) = (f.oracle_i.fresh(), f.oracle_idelta.fresh());
    let n = f.j_basis.nvars();
    for d in 0..=f.delta {
        for t in terms_of_degree(n, d) {
            if a.member_t(&t)? != b.member_t(&t)? || a.can_term(&t)? != b.can_term(&t)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::staircase::brute_force_generators;

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n, PrimeField::default()).unwrap()
    }

    fn m(s: &str, n: usize) -> Monomial {
        Monomial::parse(s, n).unwrap()
    }

    #[test]
    fn pure_power() {
        let ord = TermOrder::degrevlex(2);
        let f = build_counterexample(&[p("X1^2", 2)], &ord, 3).unwrap();
        // degree-4 multiples of X1^2, smallest first
        let mut deg4: Vec<Monomial> = ["X1^4", "X1^3*X2", "X1^2*X2^2"].iter().map(|s| m(s, 2)).collect();
        deg4.sort_by(|a, b| ord.cmp_raw(a, b));
        assert_eq!(f.omega, deg4[0]);
        assert_eq!(f.omega, m("X1^4", 2));
        assert!(f.closed_form_matches);
        assert_eq!(f.h0, p("X1^4", 2));
        assert_eq!(f.h, vec![p("X1^4", 2), p("X1^2*X2", 2)]);
        assert!(f.h_is_groebner);

        let r = demonstrate_bound_necessity(&f).unwrap();
        assert_eq!(r.small.generators, vec![m("X1^2*X2", 2)]);
        let mut big = r.big.generators.clone();
        big.sort();
        let mut want = vec![m("X1^2*X2", 2), m("X1^4", 2)];
        want.sort();
        assert_eq!(big, want);
        // cross-check against exhaustive scans of each box
        assert_eq!(brute_force_generators(&mut f.oracle_i.fresh(), 3).unwrap(), r.small.generators);
        assert_eq!(brute_force_generators(&mut f.oracle_idelta.fresh(), 4).unwrap(), r.big.generators);
        assert!(r.differ && r.small_matches_i && r.big_matches_idelta && r.small_agrees);
        assert!(low_degree_agreement(&f).unwrap());
    }

    #[test]
    fn binomial() {
        let ord = TermOrder::deglex(2);
        let f = build_counterexample(&[p("X1^2 + X2", 2)], &ord, 3).unwrap();
        assert_eq!(f.omega, m("X1^4", 2));
        // X1^4 = (X1^2 + X2)(X1^2 - X2) + X2^2
        let check = &(&p("X1^2 + X2", 2) * &p("X1^2 - X2", 2)) + &p("X2^2", 2);
        assert_eq!(check, p("X1^4", 2));
        assert_eq!(f.h0, p("X1^4 - X2^2", 2));
        assert_eq!(f.h[1], p("X1^2*X2 + X2^2", 2));
        assert!(f.h_is_groebner);
        assert!(f.oracle_idelta.reveal_basis().gb_degree() > 3);
        assert!(low_degree_agreement(&f).unwrap());
        assert!(demonstrate_bound_necessity(&f).unwrap().differ);
    }

    #[test]
    fn containment() {
        let ord = TermOrder::deglex(3);
        let f = build_counterexample(&[p("X1^2 - X3", 3), p("X2*X3 + 1", 3)], &ord, 5).unwrap();
        let big = f.oracle_idelta.reveal_basis();
        for g in f.i_generators() {
            assert!(big.contains(g).unwrap());
        }
    }

    #[test]
    fn rejects_bad_input() {
        let f = || vec![p("X1^2", 2)];
        assert!(matches!(
            build_counterexample(&f(), &TermOrder::lex(2), 3),
            Err(Error::NotDegreeCompatible(_))
        ));
        assert!(matches!(
            build_counterexample(&f(), &TermOrder::deglex(2), 2),
            Err(Error::DeltaTooSmall { delta: 2, min: 3 })
        ));
        assert!(matches!(
            build_counterexample(&[p("X1 + 1", 2), p("X1", 2)], &TermOrder::deglex(2), 3),
            Err(Error::UnitIdeal)
        ));
    }
}
