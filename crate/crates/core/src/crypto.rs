//! A toy ideal-based public-key scheme: ciphertexts are `M + Σ p_j g_j` for
//! public ideal members `g_j`, and decryption is the canonical form modulo
//! the private ideal. Also the chosen-ciphertext attacks against it.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::forge::ForgeOutput;
use crate::groebner::{buchberger, GroebnerBasis};
use crate::ncpoly::{nc_normal_form, NcPolynomial};
use crate::oracle::{TermOracle, WordOracle};
use crate::poly::{normal_form, Polynomial};
use crate::random::{nonzero_coeff, random_combination, random_poly, random_word, unit_decomposition};
use crate::staircase::{reconstruct, StaircaseResult};
use crate::term::{Monomial, TermBox, TermOrder};
use crate::word::{Word, WordOrder};
use crate::word_recon::solve_problem1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub nvars: usize,
    pub field: PrimeField,
    pub ord: TermOrder,
    /// Public members of the private ideal.
    pub g: Vec<Polynomial>,
    /// Message terms; every one is normal for the private ideal.
    pub t: Vec<Monomial>,
    /// Declared degree bound on ciphertexts.
    pub delta: u32,
    /// Degree cap on the random multipliers.
    pub cap: u32,
}

#[derive(Clone, Debug)]
pub struct KeyPair {
    pub private: GroebnerBasis,
    pub public: PublicKey,
}

pub fn keygen<R: Rng + ?Sized>(
    gens: &[Polynomial],
    ord: &TermOrder,
    l: usize,
    cap: u32,
    m: usize,
    rng: &mut R,
) -> Result<KeyPair> {
    let private = buchberger(gens, ord)?;
    if private.is_unit() {
        return Err(Error::UnitIdeal);
    }
    if private.elements().is_empty() {
        return Err(Error::Invalid("the zero ideal has no ciphertext randomness".into()));
    }
    let g: Vec<Polynomial> = (0..l.max(1))
        .map(|_| random_combination(rng, private.elements(), cap))
        .collect();
    let delta0 = g.iter().map(Polynomial::degree).max().unwrap_or(0) as u32 + cap;
    let mut normal: Vec<Monomial> = TermBox::new(ord.nvars(), delta0)
        .enumerate(ord)
        .filter(|t| !private.lead_ideal_contains(t))
        .collect();
    normal.sort_by(|a, b| ord.cmp_raw(a, b));
    if normal.len() < m {
        return Err(Error::NotEnoughNormalTerms {
            wanted: m,
            found: normal.len(),
        });
    }
    normal.truncate(m);
    let delta = normal.iter().map(Monomial::degree).max().unwrap_or(0).max(u64::from(delta0)) as u32;
    Ok(KeyPair {
        public: PublicKey {
            nvars: ord.nvars(),
            field: private.field(),
            ord: ord.clone(),
            g,
            t: normal,
            delta,
            cap,
        },
        private,
    })
}

impl PublicKey {
    fn check_message(&self, msg: &Polynomial) -> Result<()> {
        if msg.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: msg.nvars(),
            });
        }
        if msg.field() != self.field {
            return Err(Error::FieldMismatch(self.field.modulus(), msg.field().modulus()));
        }
        match msg.support().find(|t| !self.t.contains(t)) {
            Some(t) => Err(Error::UnsupportedMessageTerm(t.to_string())),
            None => Ok(()),
        }
    }

    /// A random message supported on `T`.
    pub fn random_message<R: Rng + ?Sized>(&self, rng: &mut R) -> Polynomial {
        let mut msg = Polynomial::zero(self.nvars, self.field);
        for t in &self.t {
            if rng.gen_bool(0.7) {
                msg.add_term(t.clone(), rng.gen_range(0..self.field.modulus()));
            }
        }
        msg
    }
}

pub fn encrypt<R: Rng + ?Sized>(pk: &PublicKey, msg: &Polynomial, rng: &mut R) -> Result<Polynomial> {
    let p: Vec<Polynomial> = pk
        .g
        .iter()
        .map(|_| random_poly(rng, pk.nvars, pk.field, pk.cap, 4))
        .collect();
    encrypt_with(pk, msg, &p)
}

/// Encryption with caller-chosen multipliers `p_j`.
pub fn encrypt_with(pk: &PublicKey, msg: &Polynomial, p: &[Polynomial]) -> Result<Polynomial> {
    pk.check_message(msg)?;
    if p.len() != pk.g.len() {
        return Err(Error::Invalid(format!("expected {} multipliers, got {}", pk.g.len(), p.len())));
    }
    let mut c = msg.clone();
    for (pj, gj) in p.iter().zip(&pk.g) {
        if pj.degree() > u64::from(pk.cap) {
            return Err(Error::Invalid(format!("multiplier degree {} exceeds cap {}", pj.degree(), pk.cap)));
        }
        c = &c + &(pj * gj);
    }
    Ok(c)
}

pub fn decrypt(o: &mut dyn TermOracle, c: &Polynomial) -> Result<Polynomial> {
    o.can_poly(c)
}

/// Recovers the reduced basis element with leading term `lead` by asking
/// the oracle to decrypt `lead + Σ p_j g_j`. With `masking`, the fake
/// ciphertext is split as `Σ l_i·C·r_i` with `Σ l_i r_i = 1` and each piece
/// is submitted separately.
pub fn bulygin_recover_generator<R: Rng + ?Sized>(
    o: &mut dyn TermOracle,
    pk: &PublicKey,
    lead: &Monomial,
    masking: Option<&mut R>,
) -> Result<Polynomial> {
    if !o.member_t(lead)? {
        return Err(Error::NormalTerm(lead.to_string()));
    }
    let lead_poly = Polynomial::term(pk.field, lead.clone(), 1);
    let answer = match masking {
        None => {
            let p: Vec<Polynomial> = pk.g.iter().map(|_| Polynomial::constant(pk.nvars, pk.field, 1)).collect();
            let mut fake = lead_poly.clone();
            for (pj, gj) in p.iter().zip(&pk.g) {
                fake = &fake + &(pj * gj);
            }
            o.can_poly(&fake)?
        }
        Some(rng) => {
            let mut fake = lead_poly.clone();
            for gj in &pk.g {
                let pj = random_poly(rng, pk.nvars, pk.field, pk.cap, 2);
                fake = &fake + &(&pj * gj);
            }
            let parts = rng.gen_range(2..=4);
            let mut out = Polynomial::zero(pk.nvars, pk.field);
            for (l, r) in unit_decomposition(rng, pk.nvars, pk.field, parts, 1) {
                out = &out + &o.can_poly(&(&(&l * &fake) * &r))?;
            }
            out
        }
    };
    Ok(&lead_poly - &answer)
}

#[derive(Clone, Debug)]
pub struct CommutativeAttack {
    pub ord: TermOrder,
    pub recon: StaircaseResult,
}

impl CommutativeAttack {
    pub fn basis(&self) -> &[Polynomial] {
        &self.recon.reduced_basis
    }

    /// Decrypts without the oracle, by reduction against the recovered basis.
    pub fn decrypt(&self, c: &Polynomial) -> Result<Polynomial> {
        normal_form(c, &self.recon.reduced_basis, &self.ord)
    }
}

/// Reconstructs the private basis inside `B(bound)`, `bound` defaulting to
/// the declared ciphertext degree bound.
pub fn attack_commutative(
    o: &mut dyn TermOracle,
    pk: &PublicKey,
    bound: Option<u32>,
) -> Result<CommutativeAttack> {
    let bound = bound.unwrap_or(pk.delta).max(1);
    Ok(CommutativeAttack {
        ord: pk.ord.clone(),
        recon: reconstruct(o, bound)?,
    })
}

/// A scheme on the larger ideal of a forged pair: the public set is
/// `h0, X2·γ_1, ...`, the message terms are the `m` smallest normal terms,
/// and the declared bound is `δ`, one less than the degree of `h0`.
pub fn forge_scheme(f: &ForgeOutput, m: usize) -> Result<KeyPair> {
    let private = f.oracle_idelta.reveal_basis().clone();
    let ord = f.ord().clone();
    let mut normal: Vec<Monomial> = TermBox::new(ord.nvars(), f.delta)
        .enumerate(&ord)
        .filter(|t| !private.lead_ideal_contains(t))
        .collect();
    normal.sort_by(|a, b| ord.cmp_raw(a, b));
    if normal.len() < m {
        return Err(Error::NotEnoughNormalTerms {
            wanted: m,
            found: normal.len(),
        });
    }
    normal.truncate(m);
    Ok(KeyPair {
        public: PublicKey {
            nvars: ord.nvars(),
            field: private.field(),
            ord,
            g: f.h.clone(),
            t: normal,
            delta: f.delta,
            cap: 0,
        },
        private,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecryptTally {
    pub trials: usize,
    pub agree: usize,
    pub disagree: usize,
}

/// Encrypts `trials` random messages and compares the attack's decryptor
/// with the oracle on each ciphertext.
pub fn compare_decryptors<R: Rng + ?Sized>(
    o: &mut dyn TermOracle,
    pk: &PublicKey,
    attack: &CommutativeAttack,
    trials: usize,
    rng: &mut R,
) -> Result<DecryptTally> {
    let mut tally = DecryptTally {
        trials,
        ..Default::default()
    };
    for _ in 0..trials {
        let msg = pk.random_message(rng);
        let c = encrypt(pk, &msg, rng)?;
        if attack.decrypt(&c)? == decrypt(o, &c)? {
            tally.agree += 1;
        } else {
            tally.disagree += 1;
        }
    }
    Ok(tally)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NcProbeReport {
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub h_size: usize,
    pub queries_used: u64,
}

/// Recovers `H` from the public set, then checks whether reduction by `H`
/// decrypts random ciphertexts `M + Σ c·λ·g_j·ρ` with `M` supported on
/// `message_words`.
pub fn nc_attack_probe<R: Rng + ?Sized>(
    o: &mut dyn WordOracle,
    public: &[NcPolynomial],
    message_words: &[Word],
    ord: &WordOrder,
    trials: usize,
    rng: &mut R,
) -> Result<NcProbeReport> {
    if public.is_empty() {
        return Err(Error::Invalid("empty public set".into()));
    }
    let solved = solve_problem1(o, public, ord)?;
    let (n, field) = (public[0].nvars(), public[0].field());
    let mut report = NcProbeReport {
        trials,
        h_size: solved.h.len(),
        queries_used: solved.queries_used,
        ..Default::default()
    };
    for _ in 0..trials {
        let mut msg = NcPolynomial::zero(n, field);
        for w in message_words {
            if rng.gen_bool(0.6) {
                msg.add_term(w.clone(), nonzero_coeff(rng, field));
            }
        }
        let mut c = msg.clone();
        for g in public {
            for _ in 0..rng.gen_range(0..=2) {
                let (ll, rl) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
                let (l, r) = (random_word(rng, n, ll), random_word(rng, n, rl));
                c = &c + &g.sandwich(&l, nonzero_coeff(rng, field), &r);
            }
        }
        if nc_normal_form(&c, &solved.h, ord)? == msg {
            report.successes += 1;
        } else {
            report.failures += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::build_counterexample;
    use crate::oracle::{CanOracle, MembershipOracle, NcCanOracle};
    use crate::random::seeded;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, 2, f7()).unwrap()
    }

    fn m(s: &str) -> Monomial {
        Monomial::parse(s, 2).unwrap()
    }

    fn toy(seed: u64) -> (KeyPair, CanOracle) {
        let ord = TermOrder::deglex(2);
        let kp = keygen(&[p("X1^2 + X2"), p("X2^2 + 1")], &ord, 2, 1, 4, &mut seeded(seed)).unwrap();
        let o = CanOracle::from_basis(kp.private.clone());
        (kp, o)
    }

    #[test]
    fn toy_keypair() {
        let (kp, mut o) = toy(1);
        let mut t = kp.public.t.clone();
        t.sort();
        let mut want = vec![m("1"), m("X1"), m("X2"), m("X1*X2")];
        want.sort();
        assert_eq!(t, want);
        for tau in &kp.public.t {
            assert_eq!(o.can_term(tau).unwrap(), Polynomial::term(f7(), tau.clone(), 1));
        }
        for g in &kp.public.g {
            assert!(o.can_poly(g).unwrap().is_zero());
        }
        let bound = kp.public.g.iter().map(|g| g.degree()).max().unwrap() + 1;
        assert_eq!(u64::from(kp.public.delta), bound.max(2));
    }

    #[test]
    fn unit_ideal_rejected() {
        let r = keygen(&[p("1")], &TermOrder::deglex(2), 1, 1, 1, &mut seeded(0));
        assert!(matches!(r, Err(Error::UnitIdeal)));
    }

    #[test]
    fn round_trip() {
        let (kp, mut o) = toy(2);
        let mut rng = seeded(3);
        for _ in 0..50 {
            let msg = kp.public.random_message(&mut rng);
            let c = encrypt(&kp.public, &msg, &mut rng).unwrap();
            assert!(c.degree() <= u64::from(kp.public.delta));
            assert_eq!(decrypt(&mut o, &c).unwrap(), msg);
        }
        let zero = Polynomial::zero(2, f7());
        let c = encrypt(&kp.public, &zero, &mut rng).unwrap();
        assert!(kp.private.contains(&c).unwrap());
        let none = vec![Polynomial::zero(2, f7()); kp.public.g.len()];
        let msg = p("3*X1*X2 + 1");
        assert_eq!(encrypt_with(&kp.public, &msg, &none).unwrap(), msg);
        assert!(matches!(
            encrypt(&kp.public, &p("X1^2"), &mut rng),
            Err(Error::UnsupportedMessageTerm(_))
        ));
        assert_eq!(decrypt(&mut o, &(&msg + &kp.public.g[0])).unwrap(), msg);
    }

    #[test]
    fn bulygin() {
        let (kp, mut o) = toy(4);
        let plain = bulygin_recover_generator::<crate::random::Rng64>(&mut o, &kp.public, &m("X1^2"), None).unwrap();
        assert_eq!(plain, p("X1^2 + X2"));
        let mut rng = seeded(5);
        for g in kp.private.elements() {
            let lead = g.lead_term(&kp.public.ord).unwrap();
            let a = bulygin_recover_generator::<crate::random::Rng64>(&mut o, &kp.public, &lead, None).unwrap();
            let b = bulygin_recover_generator(&mut o, &kp.public, &lead, Some(&mut rng)).unwrap();
            assert_eq!(&a, g);
            assert_eq!(a, b);
        }
        assert!(matches!(
            bulygin_recover_generator::<crate::random::Rng64>(&mut o, &kp.public, &m("X1*X2"), None),
            Err(Error::NormalTerm(_))
        ));
    }

    #[test]
    fn commutative_attack() {
        let (kp, mut o) = toy(6);
        let attack = attack_commutative(&mut o, &kp.public, None).unwrap();
        assert_eq!(attack.recon.sorted_basis(&kp.public.ord), kp.private.elements());
        let tally = compare_decryptors(&mut o, &kp.public, &attack, 40, &mut seeded(7)).unwrap();
        assert_eq!(tally.disagree, 0);
        let zero = encrypt(&kp.public, &Polynomial::zero(2, f7()), &mut seeded(8)).unwrap();
        assert!(attack.decrypt(&zero).unwrap().is_zero());
    }

    #[test]
    fn forged_scheme_misdecrypts() {
        let ord = TermOrder::degrevlex(2);
        let j = [Polynomial::parse("X1^2 + X2", 2, f7()).unwrap()];
        let f = build_counterexample(&j, &ord, 3).unwrap();
        let kp = forge_scheme(&f, 3).unwrap();
        let mut o = CanOracle::from_basis(kp.private.clone());
        let attack = attack_commutative(&mut o, &kp.public, None).unwrap();
        assert_eq!(attack.recon.bound, 3);
        let tally = compare_decryptors(&mut o, &kp.public, &attack, 30, &mut seeded(9)).unwrap();
        assert!(tally.disagree >= 1);
        // a ciphertext built from h0 alone is misread by the recovered basis
        let msg = Polynomial::term(f7(), kp.public.t[0].clone(), 1);
        let c = &msg + &f.h0;
        assert_eq!(decrypt(&mut o, &c).unwrap(), msg);
        assert_ne!(attack.decrypt(&c).unwrap(), msg);
        assert!(o.member_t(&f.omega).unwrap());
    }

    #[test]
    fn nc_probe_monomial() {
        let f = f7();
        let ord = WordOrder::deglex(2);
        let w = |s: &str| Word::parse(s, 2).unwrap();
        let gens = vec![NcPolynomial::term(f, w("X1*X2"), 1), NcPolynomial::term(f, w("X2*X2*X1"), 1)];
        let mut o = NcCanOracle::new(gens.clone(), ord.clone()).unwrap();
        let public = vec![gens[0].sandwich(&w("X2"), 3, &w("X1")), gens[1].sandwich(&w("X2"), 2, &w("1"))];
        let msgs = [w("1"), w("X1"), w("X2"), w("X2*X1")];
        let r = nc_attack_probe(&mut o, &public, &msgs, &ord, 40, &mut seeded(3)).unwrap();
        assert_eq!(r.trials, 40);
        assert_eq!(r.successes, 40);
        assert_eq!(r.failures, 0);
        assert_eq!(r.h_size, 2);
    }
}
