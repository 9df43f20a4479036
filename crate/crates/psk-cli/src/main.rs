//! `psk`: command-line front end for psk-core.

mod json;

use clap::{Parser, Subcommand};
use json::{algebra_json, domains_json, frame_json, scr_json, DomainsIn, Object};
use psk_core::algebra::{fronton_expand, validate, Algebra, AnyAlgebra, Class, Sig};
use psk_core::canon::{
    build_scr, classicize, prefilter_magari, prefilter_sim_with, refutes_scr, rewrite_with, CanonicalRule,
    PrefilterOptions, RewriteOptions,
};
use psk_core::duality::{cluster_collapse, complex_algebra, dual_frame, frame_class, frontier, rho_algebra, sigma_algebra, Frame};
use psk_core::enumerate::{enum_frames_capped, enum_posets_capped, ClassFilter, EnumKind, EnumSpec, DEFAULT_MAX_POINTS};
use psk_core::semantics::{eval, rule_valid, Valuation, Validity};
use psk_core::suites::{run_suite, SuiteConfig, SUITES};
use psk_core::syntax::{parse_formula, parse_rule, subformula_closure, translate, translate_rule};
use psk_core::Error;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "psk", version, about = "Finite frontal Heyting and modal algebras, their frames, and canonical rules")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check an algebra (or the complex algebra of a frame) against a class.
    Validate {
        #[arg(long)]
        class: String,
        file: PathBuf,
    },
    /// Evaluate a formula under a valuation.
    Eval {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        formula: String,
        /// JSON object mapping variables to elements.
        #[arg(long, default_value = "{}")]
        valuation: String,
    },
    /// Decide validity of a rule; prints the first countermodel when there is one.
    Check {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        rule: String,
    },
    /// Dual frame of an algebra.
    Dual {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Complex algebra of a frame.
    Complex { file: PathBuf },
    /// Skeleton of a frontal Heyting algebra.
    Sigma { file: PathBuf },
    /// Quasi-open fragment of a K4 algebra.
    Rho { file: PathBuf },
    /// Collapse the clusters of a transitive clm frame.
    Collapse {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// The unique fronton on the lattice of an algebra.
    FrontonExpand { file: PathBuf },
    /// Pre-filtrate a model through the subformulas of a rule.
    Prefilter {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        rule: String,
        #[arg(long, default_value = "{}")]
        valuation: String,
        /// Sim only: put implication values into the box domain as well.
        #[arg(long)]
        classicizable: bool,
    },
    /// Build a pre-stable canonical rule.
    ScrBuild {
        #[arg(long)]
        algebra: PathBuf,
        /// JSON object `{"imp": [[a, b], ..], "box": [a, ..]}`.
        #[arg(long, default_value = "{}")]
        domains: String,
    },
    /// Decide whether an algebra refutes a canonical rule.
    ScrRefute {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        scr: PathBuf,
    },
    /// Translate a sim formula or rule into clm.
    Translate {
        #[arg(long, conflicts_with = "rule")]
        formula: Option<String>,
        #[arg(long)]
        rule: Option<String>,
    },
    /// Classicize a classicizable sim canonical rule.
    Classicize { scr: PathBuf },
    /// Rewrite a rule into canonical rules over algebras within a budget.
    Rewrite {
        #[arg(long)]
        rule: String,
        #[arg(long, default_value = "sim")]
        sig: String,
        #[arg(long, default_value_t = 8)]
        budget: usize,
        #[arg(long)]
        classicizable: bool,
    },
    /// Enumerate posets or frames up to isomorphism, one JSON object per line.
    Enumerate {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        class: Option<String>,
        /// Emit complex algebras instead of frames.
        #[arg(long)]
        algebras: bool,
    },
    /// Maximal and passive points of a set.
    Frontier {
        frame: PathBuf,
        /// Comma-separated point indices.
        #[arg(long, default_value = "")]
        set: String,
    },
    /// Class flags of a frame.
    FrameClass { file: PathBuf },
    /// Run named property suites.
    Verify {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest frame size to enumerate.
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
    },
}

/// Success, semantic negative, or an error to report with exit code 2.
enum Outcome {
    Yes(Value),
    No(Value),
    Text(String),
}

type Run = std::result::Result<Outcome, Error>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = env_usize("PSK_THREADS") {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let (code, out) = match run(cli.cmd) {
        Ok(Outcome::Yes(v)) => (0, pretty(&v)),
        Ok(Outcome::No(v)) => (1, pretty(&v)),
        Ok(Outcome::Text(s)) => (0, s),
        Err(e) => (2, pretty(&json!({"error": e.to_string()}))),
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    if !out.ends_with('\n') {
        let _ = stdout.write_all(b"\n");
    }
    let _ = stdout.flush();
    ExitCode::from(code)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn env_usize(name: &str) -> Option<usize> {
    std::env::var(name).ok().and_then(|s| s.trim().parse().ok())
}

fn max_size() -> usize {
    env_usize("PSK_MAX_SIZE").unwrap_or(DEFAULT_MAX_POINTS)
}

fn load(path: &Path) -> Result<Object, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    json::parse(v).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// An algebra, taking the complex algebra when given a frame.
fn load_algebra(path: &Path) -> Result<AnyAlgebra, Error> {
    match load(path)? {
        Object::Algebra(a) => Ok(a),
        Object::Frame(f) => Ok(complex_algebra(&f)?.algebra),
        Object::Scr(_) => Err(Error::Input(format!("{}: expected an algebra or a frame", path.display()))),
    }
}

fn load_frame(path: &Path) -> Result<Frame, Error> {
    match load(path)? {
        Object::Frame(f) => Ok(f),
        Object::Algebra(a) => Ok(dual_frame(&a)?.frame),
        Object::Scr(_) => Err(Error::Input(format!("{}: expected a frame or an algebra", path.display()))),
    }
}

fn load_scr(path: &Path) -> Result<CanonicalRule, Error> {
    match load(path)? {
        Object::Scr(c) => Ok(c),
        _ => Err(Error::Input(format!("{}: expected a canonical rule", path.display()))),
    }
}

fn parse_valuation(s: &str) -> Result<Valuation, Error> {
    serde_json::from_str(s).map_err(|e| Error::Input(format!("valuation: {e}")))
}

fn parse_sig(s: &str) -> Result<Sig, Error> {
    match s {
        "sim" => Ok(Sig::Sim),
        "clm" => Ok(Sig::Clm),
        _ => Err(Error::Input(format!("unknown signature `{s}`"))),
    }
}

fn check_elems(v: &Valuation, n: usize) -> Result<(), Error> {
    match v.iter().find(|(_, &x)| x >= n) {
        Some((k, x)) => Err(Error::Input(format!("`{k}` is assigned {x}, outside the {n}-element carrier"))),
        None => Ok(()),
    }
}

fn run(cmd: Cmd) -> Run {
    match cmd {
        Cmd::Validate { class, file } => {
            let class = Class::parse(&class).ok_or_else(|| Error::Input(format!("unknown class `{class}`")))?;
            let a = load_algebra(&file)?;
            let r = validate(&a, class)?;
            let v = serde_json::to_value(&r).expect("serializable");
            Ok(if r.is_member() { Outcome::Yes(v) } else { Outcome::No(v) })
        }
        Cmd::Eval { algebra, formula, valuation } => {
            let a = load_algebra(&algebra)?;
            let f = parse_formula(&formula, a.sig())?;
            let v = parse_valuation(&valuation)?;
            check_elems(&v, a.size())?;
            Ok(Outcome::Yes(json!({"value": eval(&a, &v, &f)?})))
        }
        Cmd::Check { algebra, rule } => {
            let a = load_algebra(&algebra)?;
            let r = parse_rule(&rule, a.sig())?;
            Ok(match rule_valid(&a, &r)? {
                Validity::Valid => Outcome::Yes(json!({"valid": true})),
                Validity::Countermodel(v) => Outcome::No(json!({"valid": false, "countermodel": v})),
            })
        }
        Cmd::Dual { file, dot } => {
            let a = load_algebra(&file)?;
            let d = dual_frame(&a)?;
            if dot {
                return Ok(Outcome::Text(d.frame.to_dot()));
            }
            Ok(Outcome::Yes(json!({"frame": frame_json(&d.frame), "points": d.points})))
        }
        Cmd::Complex { file } => {
            let f = load_frame(&file)?;
            let c = complex_algebra(&f)?;
            Ok(Outcome::Yes(json!({"algebra": algebra_json(&c.algebra), "carrier": c.carrier})))
        }
        Cmd::Sigma { file } => {
            let a = load_algebra(&file)?;
            let s = sigma_algebra(a.as_sim()?)?;
            Ok(Outcome::Yes(json!({"algebra": algebra_json(&AnyAlgebra::Clm(s.algebra)), "embedding": s.embed})))
        }
        Cmd::Rho { file } => {
            let a = load_algebra(&file)?;
            let r = rho_algebra(a.as_clm()?)?;
            Ok(Outcome::Yes(json!({"algebra": algebra_json(&AnyAlgebra::Sim(r.algebra)), "inclusion": r.incl})))
        }
        Cmd::Collapse { file, dot } => {
            let f = load_frame(&file)?;
            let (g, map) = cluster_collapse(&f)?;
            if dot {
                return Ok(Outcome::Text(g.to_dot()));
            }
            Ok(Outcome::Yes(json!({"frame": frame_json(&g), "map": map})))
        }
        Cmd::FrontonExpand { file } => {
            let a = load_algebra(&file)?;
            Ok(Outcome::Yes(algebra_json(&AnyAlgebra::Sim(fronton_expand(a.lattice())))))
        }
        Cmd::Prefilter { algebra, rule, valuation, classicizable } => {
            let a = load_algebra(&algebra)?;
            let r = parse_rule(&rule, a.sig())?;
            let v = parse_valuation(&valuation)?;
            check_elems(&v, a.size())?;
            match &a {
                AnyAlgebra::Sim(h) => {
                    let opts = PrefilterOptions { classicizable, ..Default::default() };
                    let p = prefilter_sim_with(h, &v, &subformula_closure(&r), opts)?;
                    Ok(Outcome::Yes(json!({
                        "algebra": algebra_json(&AnyAlgebra::Sim(p.fronton)),
                        "inclusion": p.incl,
                        "valuation": p.valuation,
                        "domains": domains_json(&p.domains),
                    })))
                }
                AnyAlgebra::Clm(m) => {
                    if classicizable {
                        return Err(Error::Input("--classicizable applies to sim algebras".into()));
                    }
                    let p = prefilter_magari(m, &r, &v)?;
                    Ok(Outcome::Yes(json!({
                        "algebra": algebra_json(&AnyAlgebra::Clm(p.algebra)),
                        "embedding": p.embedding,
                        "valuation": p.valuation,
                        "fronton": algebra_json(&AnyAlgebra::Sim(p.fronton)),
                        "fronton_domains": domains_json(&p.domains),
                        "classicized_domain": p.classicized_domain,
                    })))
                }
            }
        }
        Cmd::ScrBuild { algebra, domains } => {
            let a = load_algebra(&algebra)?;
            let d: DomainsIn = serde_json::from_str(&domains).map_err(|e| Error::Input(format!("domains: {e}")))?;
            Ok(Outcome::Yes(scr_json(&build_scr(&a, d.into())?)))
        }
        Cmd::ScrRefute { algebra, scr } => {
            let a = load_algebra(&algebra)?;
            let c = load_scr(&scr)?;
            let v = refutes_scr(&a, &c)?;
            let out = json!({
                "refuted": v.refuted,
                "countermodel": v.valuation,
                "embedding": v.embedding,
                "frame_map": v.frame_map,
            });
            Ok(if v.refuted { Outcome::No(out) } else { Outcome::Yes(out) })
        }
        Cmd::Translate { formula, rule } => match (formula, rule) {
            (Some(f), None) => Ok(Outcome::Yes(json!({"formula": translate(&parse_formula(&f, Sig::Sim)?)?.print(Sig::Clm)}))),
            (None, Some(r)) => Ok(Outcome::Yes(json!({"rule": translate_rule(&parse_rule(&r, Sig::Sim)?)?.print()}))),
            _ => Err(Error::Input("give exactly one of --formula and --rule".into())),
        },
        Cmd::Classicize { scr } => Ok(Outcome::Yes(scr_json(&classicize(&load_scr(&scr)?)?))),
        Cmd::Rewrite { rule, sig, budget, classicizable } => {
            let r = parse_rule(&rule, parse_sig(&sig)?)?;
            let cap = 1usize << max_size().min(16);
            if budget > cap {
                return Err(Error::TooLarge { size: budget, cap });
            }
            let res = rewrite_with(&r, budget, RewriteOptions { classicizable })?;
            Ok(Outcome::Yes(json!({
                "budget": res.budget,
                "complete_up_to_budget": res.complete_up_to_budget,
                "rules": res.rules.iter().map(scr_json).collect::<Vec<_>>(),
            })))
        }
        Cmd::Enumerate { kind, size, class, algebras } => enumerate(&kind, size, class.as_deref(), algebras),
        Cmd::Frontier { frame, set } => {
            let f = load_frame(&frame)?;
            let mut u = 0u64;
            for tok in set.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let x: usize = tok.parse().map_err(|_| Error::Input(format!("bad point `{tok}`")))?;
                if x >= f.size() {
                    return Err(Error::Input(format!("point {x} outside the frame")));
                }
                u |= 1 << x;
            }
            let (max, pas) = frontier(&f, u);
            let pts = |m: u64| (0..f.size()).filter(|&x| m >> x & 1 == 1).collect::<Vec<_>>();
            Ok(Outcome::Yes(json!({"max": pts(max), "pas": pts(pas)})))
        }
        Cmd::FrameClass { file } => {
            let f = load_frame(&file)?;
            Ok(Outcome::Yes(serde_json::to_value(frame_class(&f)?).expect("serializable")))
        }
        Cmd::Verify { suite, max_size: points, budget } => verify(&suite, points, budget),
    }
}

fn enumerate(kind: &str, size: usize, class: Option<&str>, algebras: bool) -> Run {
    let kind: EnumKind = serde_json::from_value(json!(kind)).map_err(|_| Error::Input(format!("unknown kind `{kind}`")))?;
    let class_filter = class
        .map(|c| ClassFilter::parse(c).ok_or_else(|| Error::Input(format!("unknown class filter `{c}`"))))
        .transpose()?;
    let cap = max_size();
    let mut lines = Vec::new();
    if kind == EnumKind::Poset {
        if algebras || class_filter.is_some() {
            return Err(Error::Input("posets take neither --algebras nor --class".into()));
        }
        for p in enum_posets_capped(size, cap)? {
            let leq: Vec<Vec<u8>> = p.iter().map(|r| (0..size).map(|j| (r >> j & 1) as u8).collect()).collect();
            lines.push(json!({"kind": "poset", "n": size, "leq": leq}).to_string());
        }
    } else {
        for f in enum_frames_capped(&EnumSpec { kind, size, class_filter }, cap)? {
            let v = if algebras { algebra_json(&complex_algebra(&f)?.algebra) } else { frame_json(&f) };
            lines.push(v.to_string());
        }
    }
    Ok(Outcome::Text(lines.join("\n")))
}

fn verify(suite: &str, points: Option<usize>, budget: Option<usize>) -> Run {
    let cap = max_size();
    if let Some(n) = points.filter(|&n| n > cap) {
        return Err(Error::TooLarge { size: n, cap });
    }
    let cfg = SuiteConfig { max_points: points, budget };
    let names: Vec<&str> = if suite == "all" {
        SUITES.iter().map(|(s, _)| *s).collect()
    } else {
        vec![suite]
    };
    let mut reports = Vec::new();
    for name in names {
        let r = run_suite(name, &cfg).ok_or_else(|| Error::Input(format!("unknown suite `{name}`")))?;
        reports.push(r);
    }
    let ok = reports.iter().all(|r| r.passed());
    let v = json!({"passed": ok, "suites": reports});
    Ok(if ok { Outcome::Yes(v) } else { Outcome::No(v) })
}
