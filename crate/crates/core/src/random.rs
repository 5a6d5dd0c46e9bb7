//! Seeded generators for terms, polynomials, ideals and decompositions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::PrimeField;
use crate::ncpoly::NcPolynomial;
use crate::poly::Polynomial;
use crate::term::Monomial;
use crate::word::{Word, WordOrder};

pub type Rng64 = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn nonzero_coeff<R: Rng + ?Sized>(rng: &mut R, field: PrimeField) -> u64 {
    rng.gen_range(1..field.modulus())
}

/// A term with every exponent in `0..=max_exp`.
pub fn random_term_in_box<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_exp: u32) -> Monomial {
    let exps = (0..nvars).map(|_| rng.gen_range(0..=max_exp)).collect();
    Monomial::new(exps).expect("nvars > 0")
}

/// A term of total degree at most `max_deg`.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_deg: u32) -> Monomial {
    let mut exps = vec![0u32; nvars];
    let budget = rng.gen_range(0..=max_deg);
    for _ in 0..budget {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::new(exps).expect("nvars > 0")
}

/// `count` terms drawn from the box `[0, bound]^n`, excluding `1`.
pub fn random_monomial_ideal<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    bound: u32,
    count: usize,
) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let t = random_term_in_box(rng, nvars, bound);
        if !t.is_one() {
            out.push(t);
        }
    }
    out
}

/// Up to `nterms` terms of degree at most `max_deg` with random nonzero
/// coefficients.
pub fn random_poly<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    field: PrimeField,
    max_deg: u32,
    nterms: usize,
) -> Polynomial {
    let mut f = Polynomial::zero(nvars, field);
    for _ in 0..nterms {
        let t = random_term(rng, nvars, max_deg);
        f.add_term(t, nonzero_coeff(rng, field));
    }
    f
}

/// Like [`random_poly`], but guaranteed to have a term of degree exactly
/// `deg`.
pub fn random_poly_of_degree<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    field: PrimeField,
    deg: u32,
    nterms: usize,
) -> Polynomial {
    loop {
        let mut exps = vec![0u32; nvars];
        for _ in 0..deg {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        let top = Monomial::new(exps).expect("nvars > 0");
        let mut f = random_poly(rng, nvars, field, deg.saturating_sub(1), nterms.saturating_sub(1));
        f.add_term(top, nonzero_coeff(rng, field));
        if f.degree() == u64::from(deg) {
            return f;
        }
    }
}

/// `Σ q_i g_i` with random `q_i` of degree at most `cap`; never zero unless
/// every `g_i` is zero.
pub fn random_combination<R: Rng + ?Sized>(rng: &mut R, g: &[Polynomial], cap: u32) -> Polynomial {
    let (n, field) = (g[0].nvars(), g[0].field());
    for _ in 0..64 {
        let mut out = Polynomial::zero(n, field);
        for gi in g {
            let q = random_poly(rng, n, field, cap, 3);
            out = &out + &(&q * gi);
        }
        if !out.is_zero() {
            return out;
        }
    }
    g.iter().find(|gi| !gi.is_zero()).cloned().unwrap_or_else(|| Polynomial::zero(n, field))
}

/// Pairs `(l_i, r_i)` with `Σ l_i r_i = 1`.
pub fn unit_decomposition<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    field: PrimeField,
    parts: usize,
    max_deg: u32,
) -> Vec<(Polynomial, Polynomial)> {
    let one = Polynomial::constant(nvars, field, 1);
    let mut pairs = Vec::with_capacity(parts.max(1));
    let mut acc = Polynomial::zero(nvars, field);
    for _ in 1..parts {
        let l = random_poly(rng, nvars, field, max_deg, 3);
        let r = random_poly(rng, nvars, field, max_deg, 3);
        acc = &acc + &(&l * &r);
        pairs.push((l, r));
    }
    pairs.push((&one - &acc, one));
    pairs
}

pub fn random_word<R: Rng + ?Sized>(rng: &mut R, nvars: usize, len: usize) -> Word {
    let letters = (0..len).map(|_| rng.gen_range(0..nvars as u32)).collect();
    Word::new(nvars, letters).expect("letters in range")
}

pub fn random_nc_poly<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    field: PrimeField,
    max_len: usize,
    nterms: usize,
) -> NcPolynomial {
    let mut f = NcPolynomial::zero(nvars, field);
    for _ in 0..nterms {
        let len = rng.gen_range(0..=max_len);
        f.add_term(random_word(rng, nvars, len), nonzero_coeff(rng, field));
    }
    f
}

fn overlaps(a: &Word, b: &Word) -> bool {
    let (la, lb) = (a.letters(), b.letters());
    (1..la.len().min(lb.len())).any(|k| la[la.len() - k..] == lb[..k])
}

fn clashes(a: &Word, b: &Word) -> bool {
    a.contains_factor(b) || b.contains_factor(a) || overlaps(a, b) || overlaps(b, a)
}

/// A reduced two-sided Gröbner basis under deglex whose leading words have
/// no overlaps or inclusions (self-overlaps included), so every ambiguity is
/// vacuous. Tails are random shorter normal words.
pub fn random_nc_basis<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    field: PrimeField,
    count: usize,
    max_len: usize,
) -> Result<Vec<NcPolynomial>> {
    let max_len = max_len.max(2);
    let mut leads: Vec<Word> = Vec::new();
    for _ in 0..count * 200 {
        if leads.len() == count {
            break;
        }
        let len = rng.gen_range(2..=max_len);
        let w = random_word(rng, nvars, len);
        if overlaps(&w, &w) || leads.iter().any(|l| clashes(l, &w)) {
            continue;
        }
        leads.push(w);
    }
    let ord = WordOrder::deglex(nvars);
    let mut basis = Vec::with_capacity(leads.len());
    for lead in &leads {
        let mut g = NcPolynomial::term(field, lead.clone(), 1);
        for _ in 0..rng.gen_range(0..=2) {
            let len = rng.gen_range(0..lead.len());
            let w = random_word(rng, nvars, len);
            if !leads.iter().any(|l| w.contains_factor(l)) {
                g.add_term(w, nonzero_coeff(rng, field));
            }
        }
        basis.push(g.monic(&ord)?);
    }
    Ok(basis)
}

/// `Σ c·λ·g·ρ` over random choices of basis element, coefficient and
/// cofactor words of length at most `max_len`.
pub fn random_nc_combination<R: Rng + ?Sized>(
    rng: &mut R,
    g: &[NcPolynomial],
    pieces: usize,
    max_len: usize,
) -> NcPolynomial {
    let (n, field) = (g[0].nvars(), g[0].field());
    loop {
        let mut out = NcPolynomial::zero(n, field);
        for _ in 0..pieces.max(1) {
            let gi = g.choose(rng).expect("nonempty basis");
            let (ll, rl) = (rng.gen_range(0..=max_len), rng.gen_range(0..=max_len));
            let l = random_word(rng, n, ll);
            let r = random_word(rng, n, rl);
            out = &out + &gi.sandwich(&l, nonzero_coeff(rng, field), &r);
        }
        if !out.is_zero() {
            return out;
        }
    }
}
