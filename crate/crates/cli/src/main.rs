use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hdvass::constructions::{endmarker_cover_to_reach, eliminate_epsilon_1hd, inverse_hom, product_intersection, product_union};
use hdvass::coverability::karp_miller;
use hdvass::game::{find_nonhd_witness, HdResult};
use hdvass::minsky::{compile_hdness_gadget, compile_inclusion_gadget, compile_regularity_gadget, reachability_warning};
use hdvass::resolvers::{first_enabled, lookahead_resolver, resolve_run, validate_resolver, zero_effect, Resolved, Resolver, ResolverReport};
use hdvass::semantics::{bounded_equiv, bounded_inclusion, language_up_to, member, Equivalence, Inclusion, Membership, SearchOptions};
use hdvass::textio::{parse_2cm, parse_homomorphism, parse_vass, serialize_vass};
use hdvass::{corpus, format_word, word, Error, Letter, Semantics, VassBig};
use num_bigint::BigInt;
use rayon::prelude::*;

const SUCCESS: u8 = 0;
const FOUND: u8 = 1;
const INCONCLUSIVE: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "hdvass", version, about = "VASS language acceptors: membership, history-determinism, constructions")]
struct Cli {
    /// Longest word enumerated by bounded checks.
    #[arg(long, global = true, default_value_t = 8)]
    max_len: usize,
    /// ε-steps allowed between letters and after the last one.
    #[arg(long, global = true, default_value_t = 64)]
    eps_budget: usize,
    /// Letter-game search depth.
    #[arg(long, global = true, default_value_t = 4)]
    horizon: usize,
    /// Re-tag the acceptance semantics of every input automaton.
    #[arg(long, global = true, value_enum)]
    semantics_override: Option<SemArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemArg {
    Cover,
    Reach,
}

impl From<SemArg> for Semantics {
    fn from(s: SemArg) -> Self {
        match s {
            SemArg::Cover => Semantics::Coverability,
            SemArg::Reach => Semantics::Reachability,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Union,
    Inter,
}

#[derive(Clone, Copy, ValueEnum)]
enum Gadget {
    Inclusion,
    Hdness,
    Regularity,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a word is accepted, printing a witness run.
    Member {
        file: PathBuf,
        #[arg(short, long, allow_hyphen_values = true)]
        word: String,
    },
    /// Replay a sequence of transition indices.
    Run {
        file: PathBuf,
        #[arg(short, long)]
        transitions: String,
    },
    /// List accepted words up to --max-len.
    Lang { file: PathBuf },
    /// Bounded language equivalence.
    Equiv { a: PathBuf, b: PathBuf },
    /// Bounded language inclusion of A in B.
    Include { a: PathBuf, b: PathBuf },
    /// Search for a non-history-determinism witness up to --horizon.
    HdCheck { file: PathBuf },
    /// Run a resolver on a word.
    Resolve {
        file: PathBuf,
        #[arg(short, long)]
        resolver: String,
        #[arg(short, long, allow_hyphen_values = true)]
        word: String,
    },
    /// Check a resolver on every accepted word up to --max-len.
    ValidateResolver {
        file: PathBuf,
        #[arg(short, long)]
        resolver: String,
    },
    /// Union or intersection of two automata.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Inverse image under a homomorphism.
    Invhom {
        file: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Remove ε-transitions from a 1-dim coverability automaton.
    RmEps {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Turn a coverability automaton into a reachability one reading an end marker.
    Endmark {
        file: PathBuf,
        #[arg(long)]
        marker: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dump the Karp-Miller tree.
    KarpMiller { file: PathBuf },
    /// Compile a two-counter machine into a reduction gadget.
    #[command(name = "compile-2cm")]
    Compile2cm {
        file: PathBuf,
        #[arg(long, value_enum)]
        gadget: Gadget,
        #[arg(long, value_enum, default_value = "cover")]
        semantics: SemArg,
        /// Output prefix; the inclusion gadget writes PREFIX_A.vass and PREFIX_B.vass.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Catalog of named languages and automata.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    Dump { name: String },
    Verify {
        #[arg(short, default_value_t = 8)]
        n: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Inconclusive(_) => INCONCLUSIVE,
            _ => USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: USAGE,
        message: message.into(),
    }
}

struct Ctx {
    opts: SearchOptions,
    max_len: usize,
    horizon: usize,
    retag: Option<Semantics>,
    out: Vec<String>,
}

impl Ctx {
    fn say(&mut self, line: impl Into<String>) {
        self.out.push(line.into());
    }

    fn header(&mut self, command: &str) {
        let mut line = format!(
            "# hdvass {command} max-len {} eps-budget {} horizon {}",
            self.max_len, self.opts.eps_budget, self.horizon
        );
        if let Some(s) = self.retag {
            line.push_str(&format!(" semantics-override {}", s.keyword()));
        }
        self.say(line);
    }

    fn load(&self, path: &Path) -> Result<VassBig, Failure> {
        let text = read(path)?;
        let mut v: VassBig = parse_vass(&text).map_err(|e| usage(format!("{}:{e}", path.display())))?;
        if let Some(s) = self.retag {
            v.semantics = s;
        }
        Ok(v)
    }

    /// Writes `vass` to `output`, or appends it to stdout.
    fn emit(&mut self, vass: &VassBig, output: Option<&Path>) -> Result<(), Failure> {
        let text = serialize_vass(vass);
        match output {
            Some(p) => {
                fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                self.say(format!("# wrote {}", p.display()));
            }
            None => self.out.extend(text.lines().map(str::to_string)),
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_resolver(spec: &str, vass: &VassBig, opts: SearchOptions) -> Result<Box<dyn Resolver<BigInt>>, Failure> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match kind {
        "corpus" => Box::new(corpus::resolver::<BigInt>(arg)?),
        "lookahead" => {
            let h = arg
                .parse()
                .map_err(|_| usage(format!("bad lookahead horizon `{arg}`")))?;
            Box::new(lookahead_resolver(vass, h, opts))
        }
        "first" => Box::new(first_enabled()),
        "zero" => Box::new(zero_effect()),
        _ => return Err(usage(format!("unknown resolver `{spec}` (corpus:NAME, lookahead:H, first, zero)"))),
    })
}

fn check_word(vass: &VassBig, w: &[Letter]) -> Result<(), Failure> {
    match w.iter().find(|l| !vass.has_letter(l)) {
        Some(l) => Err(Error::UnknownLetter(l.to_string()).into()),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(u8, Vec<String>), Failure> {
    let mut cx = Ctx {
        opts: SearchOptions {
            eps_budget: cli.eps_budget,
        },
        max_len: cli.max_len,
        horizon: cli.horizon,
        retag: cli.semantics_override.map(Semantics::from),
        out: Vec::new(),
    };
    let opts = cx.opts;
    let code = match cli.command {
        Command::Member { file, word: text } => {
            let v = cx.load(&file)?;
            let w = word(&text);
            check_word(&v, &w)?;
            cx.header("member");
            let r = member(&v, &w, opts)?;
            match r.verdict {
                Membership::Accepted(run) => {
                    cx.say("ACCEPTED");
                    cx.out.extend(run.to_lines());
                    SUCCESS
                }
                Membership::Rejected => {
                    cx.say("REJECTED");
                    FOUND
                }
                Membership::Unknown => {
                    cx.say(format!("UNKNOWN budget-used {}", r.budget_used));
                    INCONCLUSIVE
                }
            }
        }
        Command::Run { file, transitions } => {
            let v = cx.load(&file)?;
            let seq = transitions
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| usage(format!("bad transition index `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            cx.header("run");
            match v.replay(&seq) {
                Ok(run) => {
                    let accepting = v.is_accepting(run.end());
                    cx.out.extend(run.to_lines());
                    cx.say(if accepting { "ACCEPTING" } else { "NOT-ACCEPTING" });
                    if accepting {
                        SUCCESS
                    } else {
                        FOUND
                    }
                }
                Err(e @ (Error::DisabledStep { .. } | Error::NotOutgoing { .. } | Error::UnknownTransition(_))) => {
                    cx.say(format!("INVALID {e}"));
                    FOUND
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Lang { file } => {
            let v = cx.load(&file)?;
            cx.header("lang");
            let lang = language_up_to(&v, cx.max_len, opts)?;
            for w in &lang.accepted {
                cx.say(format_word(w));
            }
            for w in &lang.unknown {
                cx.say(format!("? {}", format_word(w)));
            }
            cx.say(format!("# {} accepted, {} unknown", lang.accepted.len(), lang.unknown.len()));
            if lang.unknown.is_empty() {
                SUCCESS
            } else {
                INCONCLUSIVE
            }
        }
        Command::Equiv { a, b } => {
            let (a, b) = (cx.load(&a)?, cx.load(&b)?);
            cx.header("equiv");
            match bounded_equiv(&a, &b, cx.max_len, opts)? {
                Equivalence::Equal => {
                    cx.say(format!("EQUAL-UP-TO {}", cx.max_len));
                    SUCCESS
                }
                Equivalence::Counterexample(w) => {
                    cx.say(format!("COUNTEREXAMPLE {}", format_word(&w)));
                    FOUND
                }
            }
        }
        Command::Include { a, b } => {
            let (a, b) = (cx.load(&a)?, cx.load(&b)?);
            cx.header("include");
            match bounded_inclusion(&a, &b, cx.max_len, opts)? {
                Inclusion::Holds => {
                    cx.say(format!("HOLDS-UP-TO {}", cx.max_len));
                    SUCCESS
                }
                Inclusion::Counterexample(w) => {
                    cx.say(format!("COUNTEREXAMPLE {}", format_word(&w)));
                    FOUND
                }
            }
        }
        Command::HdCheck { file } => {
            let v = cx.load(&file)?;
            cx.header("hd-check");
            match find_nonhd_witness(&v, cx.horizon, opts)? {
                HdResult::NoneUpTo(h) => {
                    cx.say(format!("NO-WITNESS-UP-TO {h}"));
                    SUCCESS
                }
                HdResult::Witness(w) => {
                    cx.say(format!("WITNESS depth {}", w.horizon));
                    cx.out.extend(w.root.to_lines());
                    FOUND
                }
            }
        }
        Command::Resolve {
            file,
            resolver,
            word: text,
        } => {
            let v = cx.load(&file)?;
            let r = parse_resolver(&resolver, &v, opts)?;
            let w = word(&text);
            check_word(&v, &w)?;
            cx.header("resolve");
            cx.say(format!("# resolver {}", r.name()));
            match resolve_run(&v, r.as_ref(), &w, opts)? {
                Resolved::Run(run) => {
                    let accepting = v.is_accepting(run.end());
                    cx.out.extend(run.to_lines());
                    cx.say(if accepting { "ACCEPTING" } else { "NOT-ACCEPTING" });
                    if accepting {
                        SUCCESS
                    } else {
                        FOUND
                    }
                }
                Resolved::Stuck { position, run } => {
                    cx.out.extend(run.to_lines());
                    cx.say(format!("STUCK-AT {position}"));
                    FOUND
                }
            }
        }
        Command::ValidateResolver { file, resolver } => {
            let v = cx.load(&file)?;
            let r = parse_resolver(&resolver, &v, opts)?;
            cx.header("validate-resolver");
            cx.say(format!("# resolver {}", r.name()));
            match validate_resolver(&v, r.as_ref(), cx.max_len, opts)? {
                ResolverReport::Ok => {
                    cx.say(format!("OK-UP-TO {}", cx.max_len));
                    SUCCESS
                }
                ResolverReport::Failure(f) => {
                    let reason = match f.reason {
                        hdvass::resolvers::FailureReason::Stuck => "stuck",
                        hdvass::resolvers::FailureReason::NotAccepting => "not-accepting",
                    };
                    cx.say(format!("FAILURE {} position {} {reason}", format_word(&f.word), f.position));
                    FOUND
                }
            }
        }
        Command::Product { a, b, op, output } => {
            let (a, b) = (cx.load(&a)?, cx.load(&b)?);
            let p = match op {
                Op::Union => product_union(&a, &b)?,
                Op::Inter => product_intersection(&a, &b)?,
            };
            cx.header("product");
            cx.emit(&p, output.as_deref())?;
            SUCCESS
        }
        Command::Invhom { file, map, output } => {
            let v = cx.load(&file)?;
            let h = parse_homomorphism(&read(&map)?).map_err(|e| usage(format!("{}:{e}", map.display())))?;
            let r = inverse_hom(&v, &h)?;
            cx.header("invhom");
            cx.emit(&r, output.as_deref())?;
            SUCCESS
        }
        Command::RmEps { file, output } => {
            let v = cx.load(&file)?;
            let r = eliminate_epsilon_1hd(&v)?;
            cx.header("rm-eps");
            cx.emit(&r, output.as_deref())?;
            SUCCESS
        }
        Command::Endmark { file, marker, output } => {
            let v = cx.load(&file)?;
            let r = endmarker_cover_to_reach(&v, &Letter::new(&marker))?;
            cx.header("endmark");
            cx.emit(&r, output.as_deref())?;
            SUCCESS
        }
        Command::KarpMiller { file } => {
            let v = cx.load(&file)?;
            cx.header("karp-miller");
            cx.say("# state vector parent via");
            cx.out.extend(karp_miller(&v)?.to_lines());
            SUCCESS
        }
        Command::Compile2cm {
            file,
            gadget,
            semantics,
            output,
        } => {
            let text = read(&file)?;
            let m = parse_2cm(&text).map_err(|e| usage(format!("{}:{e}", file.display())))?;
            let semantics = Semantics::from(semantics);
            cx.header("compile-2cm");
            if semantics == Semantics::Reachability {
                if let Some(w) = reachability_warning(&m, 1000) {
                    cx.say(format!("# warning: {w}"));
                }
            }
            let retag = |mut v: VassBig| {
                v.semantics = semantics;
                v
            };
            let with_suffix = |suffix: &str| {
                output.as_ref().map(|p| {
                    let mut s = p.clone().into_os_string();
                    s.push(suffix);
                    PathBuf::from(s)
                })
            };
            match gadget {
                Gadget::Inclusion => {
                    let (a, b) = compile_inclusion_gadget::<BigInt>(&m);
                    cx.emit(&retag(a), with_suffix("_A.vass").as_deref())?;
                    cx.emit(&retag(b), with_suffix("_B.vass").as_deref())?;
                }
                Gadget::Hdness => {
                    let g = compile_hdness_gadget::<BigInt>(&m);
                    cx.emit(&retag(g), with_suffix(".vass").as_deref())?;
                }
                Gadget::Regularity => {
                    let g = compile_regularity_gadget::<BigInt>(&m, semantics);
                    cx.emit(&g, with_suffix(".vass").as_deref())?;
                }
            }
            SUCCESS
        }
        Command::Corpus { action } => match action {
            CorpusAction::List => {
                cx.say("# automaton language resolver");
                for name in corpus::AUTOMATA {
                    let lang = corpus::language_of_automaton(name)?;
                    let r = if corpus::HD_AUTOMATA.contains(name) {
                        format!("R_{}", &name[2..])
                    } else {
                        "-".to_string()
                    };
                    cx.say(format!("{name} {lang} {r}"));
                }
                cx.say("# language definition");
                for name in corpus::LANGUAGES {
                    let l = corpus::predicate(name)?;
                    cx.say(format!("{name} {}", l.definition));
                }
                SUCCESS
            }
            CorpusAction::Dump { name } => {
                let v = corpus::automaton::<BigInt>(&name)?;
                cx.emit(&v, None)?;
                SUCCESS
            }
            CorpusAction::Verify { n } => {
                cx.say(format!("# hdvass corpus verify n {n}"));
                let checks = corpus::separation_checks::<BigInt>(n);
                let results: Vec<_> = if std::env::var("NO_PARALLEL").is_ok_and(|v| v == "1") {
                    checks.iter().map(|c| c.run()).collect()
                } else {
                    checks.par_iter().map(|c| c.run()).collect()
                };
                let report = corpus::SuiteReport { checks: results };
                cx.out.extend(report.to_lines());
                if report.all_passed() {
                    SUCCESS
                } else {
                    FOUND
                }
            }
        },
    };
    Ok((code, cx.out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { SUCCESS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((code, lines)) => {
            let mut stdout = io::stdout().lock();
            for l in lines {
                let _ = writeln!(stdout, "{l}");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
