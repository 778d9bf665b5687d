//! `bessel`: batch driver for the verification engine.
//!
//! Exit codes: 0 verified, 1 counterexample found (listed in the report),
//! 2 usage or configuration error. Reports go to stdout, diagnostics to
//! stderr.

mod report;
mod sweep;

use std::process::ExitCode;
use std::time::Instant;

use bessel_core::chain::{langlands_chain_cached, parse_theta, verify_decomposition, weyl_between_capped, LongestCache};
use bessel_core::matgroup::checks::{run_matchecks, MatCheckSummary};
use bessel_core::matgroup::finite::{coset_oracle, w0_key};
use bessel_core::matgroup::Ring;
use bessel_core::support::{classify_capped, classify_whittaker, describe, CheckId, Classification, Support};
use bessel_core::weyl::coset_reps_capped;
use bessel_core::{GroupDatum, GroupKind};
use clap::{Parser, Subcommand, ValueEnum};

use report::{ChainRow, CosetRow, FactorRow, LemmaRow, MatcheckRow, OracleSummary, OrbitRow, RunReport, SurvivorRow};
use sweep::{parse_kinds, parse_span, Kinds, Span};

#[derive(Parser)]
#[command(name = "bessel", version, about = "Coset, support and chain verification for Bessel models")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Group kinds: `all` or a list such as `so-odd,u-even`.
    #[arg(long, default_value = "so-odd", value_parser = parse_kinds)]
    group: Kinds,
    /// Rank or closed range (`3`, `2..6`, `<=5`).
    #[arg(long, alias = "r", value_parser = parse_span)]
    rank: Span,
    /// Levi size `n`; every valid value when omitted.
    #[arg(long, value_parser = parse_span)]
    n: Option<Span>,
    /// Bessel parameter `ell1`; every valid value when omitted.
    #[arg(long, value_parser = parse_span)]
    ell1: Option<Span>,
}

impl SweepArgs {
    fn kinds(&self) -> Vec<GroupKind> {
        self.group.0.clone()
    }

    fn report(&self, command: &str) -> RunReport {
        RunReport::new(
            command,
            sweep::kinds_text(&self.kinds()),
            self.rank.text(),
            self.n.map(|s| s.text()),
            self.ell1.map(|s| s.text()),
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify every coset of `W / W_M` for the selected configurations.
    Classify {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Use `ell = r` with Levi `GL_r` (the Whittaker case); ignores --n and --ell1.
        #[arg(long)]
        whittaker: bool,
    },
    /// Run structural checks by name (`all` for every check).
    Verify {
        #[arg(long, alias = "check", default_value = "all")]
        lemma: String,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Factor every `w` with `w theta = theta'` into elementary steps.
    Chain {
        #[arg(long, default_value = "so-odd")]
        group: GroupKind,
        #[arg(long, alias = "r")]
        rank: usize,
        /// Comma-separated simple roots, e.g. `e1-e2,e3`.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        theta: String,
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        theta_prime: String,
    },
    /// Seeded random trials of the matrix identities.
    Matcheck {
        #[arg(long, value_enum, default_value_t = Identity::All)]
        identity: Identity,
        /// Work over F_q; rationals when omitted.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "all", value_parser = parse_kinds)]
        group: Kinds,
        #[arg(long, alias = "r", default_value = "2..3", value_parser = parse_span)]
        rank: Span,
    },
    /// Brute-force double cosets over F_q for one orthogonal configuration.
    Oracle {
        #[arg(long, default_value_t = 3)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        delta: i64,
        #[arg(long, default_value = "so-odd")]
        group: GroupKind,
        #[arg(long, alias = "r", default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        ell1: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Identity {
    All,
    Membership,
    Homomorphism,
    Conjugation,
    Commutation,
    W0,
    AlphaEll,
    ChiAdditivity,
}

impl Identity {
    fn name(self) -> &'static str {
        match self {
            Identity::All => "all",
            Identity::Membership => "membership",
            Identity::Homomorphism => "homomorphism",
            Identity::Conjugation => "conjugation",
            Identity::Commutation => "commutation",
            Identity::W0 => "w0",
            Identity::AlphaEll => "alpha-ell",
            Identity::ChiAdditivity => "chi-additivity",
        }
    }

    fn failures(self, s: &MatCheckSummary) -> usize {
        match self {
            Identity::All => s.failures.len(),
            Identity::Membership => s.membership_failures,
            Identity::Homomorphism => s.homomorphism_failures,
            Identity::Conjugation => s.conjugation_failures,
            Identity::Commutation => s.commutation_failures,
            Identity::W0 => s.w0_failures,
            Identity::AlphaEll => s.alpha_ell_failures,
            Identity::ChiAdditivity => s.chi_additivity_failures,
        }
    }

    fn pass(self, s: &MatCheckSummary) -> bool {
        match self {
            Identity::All => s.pass(),
            Identity::Commutation => s.commutation_failures == 0 && s.commutation_signs.len() <= 1,
            other => other.failures(s) == 0,
        }
    }
}

fn classification_rows(report: &mut RunReport, c: &Classification, support: &Support) {
    let label = describe(&c.config);
    for v in &c.verdicts {
        report.cosets.push(CosetRow {
            config: label.clone(),
            coset: v.coset.to_cycles(),
            case_tag: v.case_tag.to_string(),
            x0_verdict: v.verdict_x_zero.label(),
            xnz_verdict: v.verdict_x_nonzero.label(),
            witness: v.witness_text(),
            note: v.note.clone(),
        });
    }
    for s in &c.survivors {
        report.survivors.push(SurvivorRow {
            config: label.clone(),
            coset: s.to_cycles(),
            is_w0: support.is_w0_coset(s),
        });
    }
    for d in &c.discrepancies {
        report.counterexamples.push(format!("{label}: {}: {}", d.coset.to_cycles(), d.detail));
    }
}

fn run(cli: &Cli) -> Result<RunReport, String> {
    let cap = sweep::cap_from_env()?;
    let err = |e: bessel_core::Error| e.to_string();
    match &cli.command {
        Command::Classify { sweep, whittaker } => {
            let mut report = sweep.report("classify");
            if *whittaker {
                report.n = None;
                report.ell1 = None;
                for g in sweep::groups(&sweep.kinds(), sweep.rank)? {
                    let c = classify_whittaker(g).map_err(err)?;
                    classification_rows(&mut report, &c, &Support::whittaker(g));
                }
            } else {
                for config in sweep::configs(&sweep.kinds(), sweep.rank, sweep.n, sweep.ell1)? {
                    let c = classify_capped(&config, cap).map_err(err)?;
                    classification_rows(&mut report, &c, &Support::new(&config).map_err(err)?);
                }
            }
            Ok(report)
        }
        Command::Verify { lemma, sweep } => {
            let checks: Vec<CheckId> = if lemma == "all" {
                CheckId::ALL.to_vec()
            } else {
                lemma.split(',').map(|s| s.trim().parse::<CheckId>().map_err(err)).collect::<Result<_, _>>()?
            };
            let mut report = sweep.report("verify");
            for config in sweep::configs(&sweep.kinds(), sweep.rank, sweep.n, sweep.ell1)? {
                let support = Support::new(&config).map_err(err)?;
                let reps = coset_reps_capped(&config.levi, cap).map_err(err)?;
                for &check in &checks {
                    let rep = support.verify_check(check, &reps);
                    if let Some(ce) = &rep.counterexample {
                        report.counterexamples.push(format!("{check}: {ce}"));
                    }
                    report.lemmas.push(LemmaRow {
                        check: check.to_string(),
                        config: describe(&config),
                        hypothesis_count: rep.hypothesis_count,
                        pass: rep.pass,
                        vacuous: rep.vacuous,
                        counterexample: rep.counterexample,
                    });
                }
            }
            Ok(report)
        }
        Command::Chain { group, rank, theta, theta_prime } => {
            let g = GroupDatum::new(*group, *rank).map_err(err)?;
            let t = parse_theta(g, theta).map_err(err)?;
            let tp = parse_theta(g, theta_prime).map_err(err)?;
            let mut report = RunReport::new("chain", group.name().into(), rank.to_string(), None, None);
            let mut cache = LongestCache::default();
            for w in weyl_between_capped(g, &t, &tp, cap).map_err(err)? {
                let row = match langlands_chain_cached(&t, &w, &mut cache) {
                    Ok(chain) => {
                        let check = verify_decomposition(&chain);
                        let factors = chain
                            .export()
                            .into_iter()
                            .map(|f| FactorRow { theta: f.theta, alpha: f.alpha, w_cycles: f.w_cycles })
                            .collect();
                        ChainRow { w: w.to_cycles(), factors, pass: check.pass, detail: check.detail }
                    }
                    Err(e) => ChainRow { w: w.to_cycles(), factors: Vec::new(), pass: false, detail: Some(e.to_string()) },
                };
                if !row.pass {
                    report.counterexamples.push(format!("{}: {}", row.w, row.detail.clone().unwrap_or_default()));
                }
                report.chains.push(row);
            }
            Ok(report)
        }
        Command::Matcheck { identity, q, trials, seed, group, rank } => {
            let kinds = group.0.clone();
            let mut report = RunReport::new("matcheck", sweep::kinds_text(&kinds), rank.text(), None, None);
            let ring = match q {
                Some(q) => Ring::Prime(*q),
                None => Ring::Rational,
            };
            for g in sweep::groups(&kinds, *rank)? {
                let s = run_matchecks(g, ring, *trials, *seed).map_err(err)?;
                let pass = identity.pass(&s);
                if !pass {
                    report.counterexamples.extend(s.failures.iter().map(|f| format!("{g}: {f}")));
                    if s.failures.is_empty() {
                        report.counterexamples.push(format!("{g}: commutation signs {:?}", s.commutation_signs));
                    }
                }
                report.matchecks.push(MatcheckRow {
                    group: g.to_string(),
                    ring: format!("{ring:?}"),
                    identity: identity.name().into(),
                    trials: *trials,
                    seed: *seed,
                    failures: identity.failures(&s),
                    commutation_signs: s.commutation_signs.clone(),
                    pass,
                });
            }
            Ok(report)
        }
        Command::Oracle { q, delta, group, rank, n, ell1 } => {
            let config = bessel_core::make_config(*group, *rank, *n, *ell1).map_err(err)?;
            let o = coset_oracle(&config, *q, *delta).map_err(err)?;
            let mut report =
                RunReport::new("oracle", group.name().into(), rank.to_string(), Some(n.to_string()), Some(ell1.to_string()));
            let w0 = w0_key(&config);
            for (key, x) in &o.surviving {
                if *key != w0 {
                    report.counterexamples.push(format!("orbit of n({x:?}) w with coset key {key} survives"));
                }
            }
            report.oracle = Some(OracleSummary {
                q: o.q,
                delta: o.delta,
                group_order: o.group_order,
                points: o.points,
                m_chi_order: o.stabilizer.order,
                covered: o.covered,
                length_determines_orbit: o.length_determines_orbit,
                orbits: o
                    .orbits
                    .iter()
                    .map(|orbit| {
                        let (key, x) = orbit.labels.first().cloned().unwrap_or_default();
                        OrbitRow { size: orbit.size, coset_key: key, x, killed_by_unipotent: orbit.killed_by_unipotent }
                    })
                    .collect(),
            });
            Ok(report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Csv => match report.to_csv() {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                },
            };
            println!("{}", text.trim_end());
            eprintln!(
                "{}: {} counterexample(s) in {:.2}s",
                report.command,
                report.counterexamples.len(),
                start.elapsed().as_secs_f64()
            );
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
