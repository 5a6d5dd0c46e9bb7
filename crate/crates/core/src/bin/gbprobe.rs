use std::fmt::Write as _;
use std::io::{self, BufReader};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gbprobe::crypto::{self, PublicKey};
use gbprobe::forge::{build_counterexample, demonstrate_bound_necessity};
use gbprobe::format::{self, FreeFile, IdealFile};
use gbprobe::groebner::{buchberger, GroebnerBasis};
use gbprobe::ncpoly::{full_overlap_bound, unresolved_ambiguities};
use gbprobe::oracle::serve;
use gbprobe::poly::{normal_form, s_polynomial};
use gbprobe::random::seeded;
use gbprobe::staircase::{brute_force_generators, reconstruct_generators, reconstruct_with, ScanMode};
use gbprobe::word_recon::solve_problem1;
use gbprobe::{CanOracle, Error, NcCanOracle, OrderKind, Polynomial, TermOrder, Word, WordOracle};

#[derive(Parser)]
#[command(name = "gbprobe", version, about = "Recover Groebner bases of hidden ideals from canonical-form queries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Override the order named in the input file.
    #[arg(long)]
    order: Option<OrderKind>,
    /// Override the prime named in the input file.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the query ledger to stderr.
    #[arg(long)]
    queries: bool,
    /// Write the main output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reconstruct generators and reduced basis from an oracle for an ideal file.
    Recon {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        bound: u32,
        /// Bisect along lines instead of scanning them.
        #[arg(long)]
        binary: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Recover part of a free-algebra basis from a public set of members.
    NcRecon {
        /// Private basis served by the oracle.
        #[arg(long)]
        ideal: PathBuf,
        /// Public ideal members.
        #[arg(long)]
        public: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Build the pair X2*J and X2*J + (h0) for an ideal J.
    Forge {
        #[arg(long)]
        j: PathBuf,
        #[arg(long)]
        delta: u32,
        /// Also reconstruct at D = delta and D = delta + 1.
        #[arg(long)]
        demo: bool,
        /// Where to write I.ideal and Idelta.ideal.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Generate a key pair from the generators of a private ideal.
    Keygen {
        #[arg(long)]
        ideal: PathBuf,
        /// Number of public ideal members.
        #[arg(long, default_value_t = 2)]
        l: usize,
        /// Degree cap of the encryption multipliers.
        #[arg(long, default_value_t = 1)]
        cap: u32,
        /// Number of message terms.
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        private: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Encrypt messages given on the command line or one per line in a file.
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        message: Vec<String>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Decrypt a ciphertext file with the private basis.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Recover the private basis through the decryption oracle.
    Attack {
        #[arg(long)]
        key: PathBuf,
        /// Private basis standing in for the decryption oracle.
        #[arg(long)]
        oracle: PathBuf,
        /// Defaults to the declared ciphertext degree bound.
        #[arg(long)]
        bound: Option<u32>,
        /// Ciphertexts to decrypt with the recovered basis.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Try decrypting free-algebra ciphertexts with the recovered partial basis.
    NcProbe {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        public: PathBuf,
        /// Message words; defaults to the normal words of length at most 2.
        #[arg(long, value_delimiter = ',')]
        words: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check that a file holds a Groebner basis.
    VerifyGb {
        #[arg(long)]
        ideal: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compare query counts of the scan modes and an exhaustive scan.
    BenchQueries {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        bound: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Answer CAN/COUNT requests on stdin for an ideal file.
    OracleServe {
        #[arg(long)]
        ideal: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Math(Error),
    /// A check ran and did not pass.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::VariableOutOfRange { .. } => Failure::Usage(e.to_string()),
            other => Failure::Math(other),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(common: &Common, text: &str) -> Outcome {
    match &common.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Appends `p=<p>` to the header line so it wins over any earlier value.
fn with_prime(text: &str, p: Option<u64>) -> String {
    let Some(p) = p else {
        return text.to_string();
    };
    let mut out = String::with_capacity(text.len() + 16);
    let mut done = false;
    for line in text.lines() {
        let content = line.split('#').next().unwrap_or("").trim();
        if !done && !content.is_empty() {
            let _ = writeln!(out, "{content} p={p}");
            done = true;
        } else {
            let _ = writeln!(out, "{line}");
        }
    }
    out
}

fn load_ideal(path: &Path, common: &Common) -> std::result::Result<IdealFile, Failure> {
    let mut f = IdealFile::parse(&with_prime(&read(path)?, common.p))?;
    if let Some(kind) = common.order {
        f.ord = TermOrder::new(kind, f.nvars);
    }
    Ok(f)
}

fn load_free(path: &Path, common: &Common) -> std::result::Result<FreeFile, Failure> {
    Ok(FreeFile::parse(&with_prime(&read(path)?, common.p))?)
}

fn basis_of(f: &IdealFile) -> std::result::Result<GroebnerBasis, Failure> {
    if f.polys.iter().all(Polynomial::is_zero) {
        return Ok(GroebnerBasis::zero_ideal(f.field, f.ord.clone()));
    }
    Ok(buchberger(&f.polys, &f.ord)?)
}

fn oracle_for(f: &IdealFile, common: &Common) -> std::result::Result<CanOracle, Failure> {
    let o = CanOracle::from_basis(basis_of(f)?);
    Ok(if common.queries { o.with_log() } else { o })
}

fn print_ledger<T: std::fmt::Display>(count: u64, log: &[T]) {
    eprintln!("ledger {count}");
    for t in log {
        eprintln!("  {t}");
    }
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Recon {
            ideal,
            bound,
            binary,
            common,
        } => {
            let f = load_ideal(&ideal, &common)?;
            let mut o = oracle_for(&f, &common)?;
            let mode = if binary { ScanMode::Binary } else { ScanMode::Linear };
            let r = reconstruct_with(&mut o, bound, mode)?;
            if common.queries {
                print_ledger(o.ledger().count(), o.ledger().log());
            }
            emit(&common, &format::write_result(&r, &f.ord))
        }
        Cmd::NcRecon { ideal, public, common } => {
            let private = load_free(&ideal, &common)?;
            let public = load_free(&public, &common)?;
            let ord = private.ord();
            let o = NcCanOracle::new(private.polys.clone(), ord.clone())?;
            let mut o = if common.queries { o.with_log() } else { o };
            let res = solve_problem1(&mut o, &public.polys, &ord)?;
            for line in &res.trace {
                eprintln!("{line}");
            }
            if common.queries {
                print_ledger(o.ledger().count(), o.ledger().log());
            }
            emit(
                &common,
                &format::write_h(private.nvars, private.field, &res.h, &res.trace, res.queries_used),
            )
        }
        Cmd::Forge {
            j,
            delta,
            demo,
            out_dir,
            common,
        } => {
            let jf = load_ideal(&j, &common)?;
            let f = build_counterexample(&jf.polys, &jf.ord, delta)?;
            let file = |polys: Vec<Polynomial>| IdealFile {
                nvars: jf.nvars,
                field: jf.field,
                ord: jf.ord.clone(),
                polys,
            };
            std::fs::create_dir_all(&out_dir).map_err(|e| Failure::Usage(format!("{}: {e}", out_dir.display())))?;
            write_file(&out_dir.join("I.ideal"), &file(f.i_generators().to_vec()).to_text())?;
            write_file(&out_dir.join("Idelta.ideal"), &file(f.h.clone()).to_text())?;
            let mut s = String::new();
            let _ = writeln!(s, "omega {}", f.omega);
            let _ = writeln!(s, "closed_form {} matches={}", f.closed_form, f.closed_form_matches);
            let _ = writeln!(s, "h0 {}", f.h0.format_with(&jf.ord));
            let _ = writeln!(s, "is_groebner {}", f.h_is_groebner);
            if demo {
                let r = demonstrate_bound_necessity(&f)?;
                let _ = writeln!(s, "# reconstruction at D={}", r.small_bound);
                s.push_str(&format::write_result(&r.small, &jf.ord));
                let _ = writeln!(s, "# reconstruction at D={}", r.big_bound);
                s.push_str(&format::write_result(&r.big, &jf.ord));
                let _ = writeln!(s, "small_matches_i {}", r.small_matches_i);
                let _ = writeln!(s, "big_matches_idelta {}", r.big_matches_idelta);
                let _ = writeln!(s, "differ {}", r.differ);
            }
            emit(&common, &s)
        }
        Cmd::Keygen {
            ideal,
            l,
            cap,
            m,
            public,
            private,
            common,
        } => {
            let f = load_ideal(&ideal, &common)?;
            let kp = crypto::keygen(&f.polys, &f.ord, l, cap, m, &mut seeded(common.seed))?;
            let priv_file = IdealFile {
                nvars: f.nvars,
                field: f.field,
                ord: f.ord.clone(),
                polys: kp.private.elements().to_vec(),
            };
            write_file(&private, &priv_file.to_text())?;
            write_file(&public, &format::write_public_key(&kp.public))?;
            emit(
                &common,
                &format!("keygen l={} m={} delta={}\n", kp.public.g.len(), kp.public.t.len(), kp.public.delta),
            )
        }
        Cmd::Encrypt {
            key,
            message,
            input,
            common,
        } => {
            let pk = format::parse_public_key(&read(&key)?)?;
            let mut texts = message;
            if let Some(path) = input {
                texts.extend(
                    read(&path)?
                        .lines()
                        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
                        .filter(|l| !l.is_empty()),
                );
            }
            if texts.is_empty() {
                return Err(Failure::Usage("no messages given; use --message or --in".into()));
            }
            let mut rng = seeded(common.seed);
            let mut out = Vec::with_capacity(texts.len());
            for t in &texts {
                let msg = Polynomial::parse(t, pk.nvars, pk.field)?;
                out.push(crypto::encrypt(&pk, &msg, &mut rng)?);
            }
            emit(&common, &format::write_polys("cipher", pk.nvars, pk.field, &out, &pk.ord))
        }
        Cmd::Decrypt { key, input, common } => {
            let f = load_ideal(&key, &common)?;
            let mut o = oracle_for(&f, &common)?;
            let (n, field, cts) = format::parse_polys(&read(&input)?, "cipher")?;
            if n != f.nvars || field != f.field {
                return Err(Failure::Usage("ciphertext ring differs from the key".into()));
            }
            let mut s = String::new();
            for c in &cts {
                let _ = writeln!(s, "{}", crypto::decrypt(&mut o, c)?.format_with(&f.ord));
            }
            if common.queries {
                print_ledger(o.ledger().count(), o.ledger().log());
            }
            emit(&common, &s)
        }
        Cmd::Attack {
            key,
            oracle,
            bound,
            input,
            common,
        } => {
            let pk: PublicKey = format::parse_public_key(&read(&key)?)?;
            let mut f = load_ideal(&oracle, &common)?;
            f.ord = pk.ord.clone();
            let mut o = oracle_for(&f, &common)?;
            let attack = crypto::attack_commutative(&mut o, &pk, bound)?;
            let mut s = format::write_result(&attack.recon, &pk.ord);
            if let Some(path) = input {
                let (_, _, cts) = format::parse_polys(&read(&path)?, "cipher")?;
                s.push_str("decrypted\n");
                for c in &cts {
                    let _ = writeln!(s, "{}", attack.decrypt(c)?.format_with(&pk.ord));
                }
            }
            if common.queries {
                print_ledger(o.ledger().count(), o.ledger().log());
            }
            emit(&common, &s)
        }
        Cmd::NcProbe {
            ideal,
            public,
            words,
            trials,
            common,
        } => {
            let private = load_free(&ideal, &common)?;
            let public = load_free(&public, &common)?;
            let ord = private.ord();
            let mut o = NcCanOracle::new(private.polys.clone(), ord.clone())?;
            let message_words: Vec<Word> = if words.is_empty() {
                let mut probe = o.fresh();
                let n = private.nvars;
                let mut all = vec![Word::empty(n)];
                for a in 0..n as u32 {
                    all.push(Word::letter(n, a)?);
                    for b in 0..n as u32 {
                        all.push(Word::new(n, vec![a, b])?);
                    }
                }
                let mut normal = Vec::new();
                for w in all {
                    if !probe.member_t(&w)? {
                        normal.push(w);
                    }
                }
                normal
            } else {
                words
                    .iter()
                    .map(|w| Word::parse(w, private.nvars))
                    .collect::<gbprobe::Result<_>>()?
            };
            let r = crypto::nc_attack_probe(&mut o, &public.polys, &message_words, &ord, trials, &mut seeded(common.seed))?;
            emit(
                &common,
                &format!(
                    "trials {}\nsuccesses {}\nfailures {}\nh_size {}\nqueries {}\n",
                    r.trials, r.successes, r.failures, r.h_size, r.queries_used
                ),
            )
        }
        Cmd::VerifyGb { ideal, common } => {
            let text = with_prime(&read(&ideal)?, common.p);
            let first = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .find(|l| !l.is_empty())
                .unwrap_or("");
            let mut s = String::new();
            let ok = if first.starts_with("free") {
                let f = FreeFile::parse(&text)?;
                let ord = f.ord();
                let g = f
                    .polys
                    .iter()
                    .filter(|p| !p.is_zero())
                    .map(|p| p.monic(&ord))
                    .collect::<gbprobe::Result<Vec<_>>>()?;
                let bad = unresolved_ambiguities(&g, &ord, full_overlap_bound(&g, &ord))?;
                for a in &bad {
                    let _ = writeln!(
                        s,
                        "ambiguity ({},{}) at {}: remainder {}",
                        a.first + 1,
                        a.second + 1,
                        a.word,
                        a.remainder.format_with(&ord)
                    );
                }
                bad.is_empty()
            } else {
                let f = load_ideal(&ideal, &common)?;
                let g: Vec<Polynomial> = f.polys.iter().filter(|p| !p.is_zero()).cloned().collect();
                let mut ok = true;
                for j in 0..g.len() {
                    for i in 0..j {
                        let r = normal_form(&s_polynomial(&g[i], &g[j], &f.ord)?, &g, &f.ord)?;
                        if r.is_zero() {
                            let _ = writeln!(s, "pair ({},{}): reduces to 0", i + 1, j + 1);
                        } else {
                            ok = false;
                            let _ = writeln!(s, "pair ({},{}): remainder {}", i + 1, j + 1, r.format_with(&f.ord));
                        }
                    }
                }
                ok
            };
            let _ = writeln!(s, "{}", if ok { "pass" } else { "fail" });
            emit(&common, &s)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Cmd::BenchQueries { ideal, bound, common } => {
            let f = load_ideal(&ideal, &common)?;
            let o = oracle_for(&f, &common)?;
            let mut s = format!("box {}\n", gbprobe::TermBox::new(f.nvars, bound).len());
            let mut reference = None;
            for (name, mode) in [("linear", Some(ScanMode::Linear)), ("binary", Some(ScanMode::Binary)), ("brute", None)] {
                let mut oc = o.fresh();
                let gens = match mode {
                    Some(m) => reconstruct_generators(&mut oc, bound, m)?,
                    None => brute_force_generators(&mut oc, bound)?,
                };
                let agree = reference.get_or_insert_with(|| gens.clone()) == &gens;
                let _ = writeln!(s, "{name} queries={} generators={} agree={agree}", oc.ledger().count(), gens.len());
            }
            emit(&common, &s)
        }
        Cmd::OracleServe { ideal, common } => {
            let f = load_ideal(&ideal, &common)?;
            let mut o = oracle_for(&f, &common)?;
            let stdin = io::stdin();
            serve(&mut o, &f.ord, BufReader::new(stdin.lock()), io::stdout().lock())
                .map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
