//! `symlog`: check, mirror, dualize and search proofs in `.blq` scripts,
//! run the bundled corpus, and query the qubit dictionary.
//!
//! Exit codes: 0 ok, 1 failed check or unexpected search result, 2 usage,
//! input or parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use symlog_core::corpus::run_corpus;
use symlog_core::duality::{apply_duality, InvolutionKind, LiteralInvolution};
use symlog_core::kernel::{
    check_proof, proof_duality, search_proof, symmetrize_proof, CalculusConfig, SearchOutcome, MAX_DEPTH,
};
use symlog_core::quantum::{
    apply_gate, bell_formula, collapse, measurement_domain, state_formula, BellPhase, BellState, Gate, Qubit,
};
use symlog_core::registry::{consistency_guard, DomainRecord, GuardOutcome, Registry};
use symlog_core::report::{check_report_json, envelope, proof_json};
use symlog_core::script::{
    formula_string, parse, proof_string, qubit_registry, sequent_string, ConfigFlags, Decl, ItemKind, Script, Style,
};
use symlog_core::{symmetrize_formula, symmetrize_sequent, CorrelationTag, Formula, Sequent, Term};

#[derive(Parser)]
#[command(name = "symlog", version, about = "Proof kernel and qubit dictionary for a symmetric sequent calculus")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Render formulas in text output with Unicode connectives.
    #[arg(long, global = true)]
    unicode: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone, Default)]
struct ScriptOpts {
    /// Context flags, comma separated (left_contexts, right_contexts,
    /// weakening, cut) or `none`. Overrides the script's config line; one
    /// of the two is required.
    #[arg(long, value_name = "FLAGS")]
    config: Option<String>,
    /// Allow a domain to be licensed for both substitution and a d-axiom.
    #[arg(long)]
    collapse_demo: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check every proof in a script, or one named proof.
    Check {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        opts: ScriptOpts,
    },
    /// Mirror a proof, sequent or formula and check the mirrored proof.
    Sym {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[command(flatten)]
        opts: ScriptOpts,
    },
    /// Apply perp or top to a qubit literal.
    Dual {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long, value_enum)]
        duality: DualityArg,
    },
    /// Search for a proof of a named sequent.
    Search {
        file: PathBuf,
        #[arg(long)]
        name: String,
        /// Depth bound; defaults to SYMLOG_DEPTH, else 8.
        #[arg(long)]
        depth: Option<usize>,
        /// Fail when no proof is found (the default).
        #[arg(long, conflicts_with = "expect_not_found")]
        expect_proof: bool,
        /// Fail when a proof is found.
        #[arg(long)]
        expect_not_found: bool,
        #[command(flatten)]
        opts: ScriptOpts,
    },
    /// Run the bundled corpus.
    Corpus,
    /// Describe a qubit given as JSON `{"alpha", "beta", "phi"}`.
    Qstate { file: PathBuf },
    /// Print the formula of a Bell state.
    Bell {
        #[arg(long, value_enum)]
        phase: PhaseArg,
        #[arg(long, value_enum)]
        correlation: CorrelationArg,
    },
    /// Run the consistency guard on a domain.
    Guard {
        domain: String,
        /// Give the built-in V substitution rights next to its d-axiom.
        #[arg(long)]
        collapse_demo: bool,
        /// Take domains and licences from a script instead of the built-ins.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DualityArg {
    Perp,
    Top,
}

#[derive(Clone, Copy, ValueEnum)]
enum PhaseArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorrelationArg {
    #[value(alias = "i")]
    Identical,
    #[value(alias = "o")]
    Opposite,
}

/// What a command produced: `ok` picks the exit code, `text` and `items`
/// are the two renderings, `notes` go to standard error.
struct Report {
    ok: bool,
    text: String,
    items: Vec<Value>,
    notes: Vec<String>,
}

impl Report {
    fn new(ok: bool, text: String, items: Vec<Value>) -> Self {
        Report {
            ok,
            text,
            items,
            notes: Vec::new(),
        }
    }
}

struct Ctx {
    style: Style,
}

impl Ctx {
    fn f(&self, f: &Formula) -> String {
        formula_string(f, self.style)
    }

    fn s(&self, s: &Sequent) -> String {
        sequent_string(s, self.style)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        style: if cli.unicode { Style::Unicode } else { Style::Ascii },
    };
    let name = command_name(&cli.command);
    match run(&cli.command, &ctx) {
        Ok(report) => {
            for n in &report.notes {
                eprintln!("symlog: {n}");
            }
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => {
                    let v = envelope(name, report.ok, report.items);
                    println!("{}", serde_json::to_string_pretty(&v).expect("reports serialize"));
                }
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("symlog: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Sym { .. } => "sym",
        Command::Dual { .. } => "dual",
        Command::Search { .. } => "search",
        Command::Corpus => "corpus",
        Command::Qstate { .. } => "qstate",
        Command::Bell { .. } => "bell",
        Command::Guard { .. } => "guard",
    }
}

fn run(c: &Command, ctx: &Ctx) -> Result<Report> {
    match c {
        Command::Check { file, name, opts } => check(file, name.as_deref(), opts, ctx),
        Command::Sym { file, name, opts } => sym(file, name, opts, ctx),
        Command::Dual { file, name, duality } => dual(file, name, *duality, ctx),
        Command::Search {
            file,
            name,
            depth,
            expect_not_found,
            opts,
            ..
        } => search(file, name, *depth, *expect_not_found, opts, ctx),
        Command::Corpus => corpus(),
        Command::Qstate { file } => qstate(file, ctx),
        Command::Bell { phase, correlation } => bell(*phase, *correlation, ctx),
        Command::Guard {
            domain,
            collapse_demo,
            file,
        } => guard(domain, *collapse_demo, file.as_deref(), ctx),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_script(path: &Path, collapse_demo: bool) -> Result<Script> {
    let text = read(path)?;
    let mut script = parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    if collapse_demo && !script.collapse_demo() {
        script.declarations.push(Decl::CollapseDemo);
    }
    Ok(script)
}

fn parse_flags(text: &str) -> Result<ConfigFlags> {
    let mut flags = ConfigFlags::default();
    if text.trim() == "none" {
        return Ok(flags);
    }
    for name in text.split(',').map(str::trim) {
        if !flags.set(name) {
            bail!("unknown config flag `{name}` (expected {} or none)", ConfigFlags::NAMES.join(", "));
        }
    }
    Ok(flags)
}

/// Script, registry and configuration; flags come from `--config`, else
/// from the script, and it is an error to have neither.
fn setup(path: &Path, opts: &ScriptOpts) -> Result<(Script, Registry, CalculusConfig)> {
    let script = load_script(path, opts.collapse_demo)?;
    let flags = match &opts.config {
        Some(text) => parse_flags(text)?,
        None => script.flags().ok_or_else(|| {
            anyhow!(
                "{} has no config line; pass --config with {} or none",
                path.display(),
                ConfigFlags::NAMES.join(",")
            )
        })?,
    };
    let reg = script.registry().map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let cfg = script
        .config_with(&reg, flags)
        .map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok((script, reg, cfg))
}

fn item<'a>(script: &'a Script, path: &Path, name: &str) -> Result<&'a ItemKind> {
    script
        .item(name)
        .map(|i| &i.kind)
        .ok_or_else(|| anyhow!("{} has no item named `{name}`", path.display()))
}

fn check(path: &Path, name: Option<&str>, opts: &ScriptOpts, ctx: &Ctx) -> Result<Report> {
    let (script, reg, cfg) = setup(path, opts)?;
    let proofs: Vec<_> = match name {
        Some(n) => match item(&script, path, n)? {
            ItemKind::Proof(p) => vec![(n, p)],
            _ => bail!("`{n}` is not a proof"),
        },
        None => script.proofs().collect(),
    };
    let (mut ok, mut text, mut items, mut notes) = (true, String::new(), Vec::new(), Vec::new());
    for (n, p) in proofs {
        let report = check_proof(p, &cfg, &reg);
        let concl = ctx.s(&p.conclusion);
        if report.ok {
            text.push_str(&format!(
                "ok   {n} : {concl} ({} nodes, height {})\n",
                report.stats.nodes, report.stats.height
            ));
        } else {
            ok = false;
            text.push_str(&format!("FAIL {n} : {concl}\n"));
            for e in &report.failures {
                text.push_str(&format!("  {e}\n"));
                notes.push(format!("{n}: {e}"));
            }
        }
        items.push(check_report_json(n, &p.conclusion.to_string(), &report));
    }
    let mut r = Report::new(ok, text, items);
    r.notes = notes;
    Ok(r)
}

fn sym(path: &Path, name: &str, opts: &ScriptOpts, ctx: &Ctx) -> Result<Report> {
    let (script, reg, cfg) = setup(path, opts)?;
    match item(&script, path, name)? {
        ItemKind::Formula(f) => {
            let m = symmetrize_formula(f, &LiteralInvolution::identity());
            let item = json!({"name": name, "formula": f.to_string(), "symmetric": m.to_string()});
            Ok(Report::new(true, format!("{}\n", ctx.f(&m)), vec![item]))
        }
        ItemKind::Sequent(s) => {
            let m = symmetrize_sequent(s, &LiteralInvolution::identity());
            let item = json!({"name": name, "sequent": s.to_string(), "symmetric": m.to_string()});
            Ok(Report::new(true, format!("{}\n", ctx.s(&m)), vec![item]))
        }
        ItemKind::Proof(p) => {
            let original = check_proof(p, &cfg, &reg);
            if let Some(e) = original.first_failure() {
                let mut r = Report::new(false, format!("FAIL {name}: the proof itself does not check\n"), vec![
                    check_report_json(name, &p.conclusion.to_string(), &original),
                ]);
                r.notes.push(format!("{name}: {e}"));
                return Ok(r);
            }
            let inv = LiteralInvolution::identity_with(proof_duality(p));
            let m = symmetrize_proof(p, &inv, &cfg).map_err(|e| anyhow!("{name}: {e}"))?;
            let mirror_cfg = cfg.mirrored();
            let report = check_proof(&m, &mirror_cfg, &reg);
            let sym_name = format!("{name}_sym");
            let mut text = proof_string(&sym_name, &m);
            text.push_str(&format!(
                "{} {sym_name} : {}\n",
                if report.ok { "ok  " } else { "FAIL" },
                ctx.s(&m.conclusion)
            ));
            let mut r = Report::new(report.ok, text, vec![json!({
                "name": name,
                "conclusion": p.conclusion.to_string(),
                "symmetric": m.conclusion.to_string(),
                "duality": inv.membership_duality,
                "proof": proof_json(&m),
                "check": check_report_json(&sym_name, &m.conclusion.to_string(), &report),
            })]);
            r.notes = report.failures.iter().map(|e| format!("{sym_name}: {e}")).collect();
            Ok(r)
        }
    }
}

fn dual(path: &Path, name: &str, duality: DualityArg, ctx: &Ctx) -> Result<Report> {
    let script = load_script(path, false)?;
    let ItemKind::Formula(f) = item(&script, path, name)? else {
        bail!("`{name}` is not a formula item");
    };
    let kind = match duality {
        DualityArg::Perp => InvolutionKind::Perp,
        DualityArg::Top => InvolutionKind::Top,
    };
    match apply_duality(f, kind) {
        Ok(g) => {
            let fixed = g == *f;
            let item = json!({"name": name, "duality": kind.name(), "formula": f.to_string(), "dual": g.to_string(), "fixed": fixed});
            let suffix = if fixed { "  (fixed point)" } else { "" };
            Ok(Report::new(true, format!("{}{suffix}\n", ctx.f(&g)), vec![item]))
        }
        Err(e) => {
            let item = json!({"name": name, "duality": kind.name(), "formula": f.to_string(), "error": e.to_string()});
            let mut r = Report::new(false, String::new(), vec![item]);
            r.notes.push(format!("{name}: {e}"));
            Ok(r)
        }
    }
}

fn depth_bound(explicit: Option<usize>) -> Result<usize> {
    let depth = match explicit {
        Some(d) => d,
        None => match std::env::var("SYMLOG_DEPTH") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| anyhow!("SYMLOG_DEPTH=`{v}` is not a depth"))?,
            Err(_) => symlog_core::kernel::DEFAULT_DEPTH,
        },
    };
    if depth > MAX_DEPTH {
        bail!("depth {depth} exceeds the maximum of {MAX_DEPTH}");
    }
    Ok(depth)
}

fn search(
    path: &Path,
    name: &str,
    depth: Option<usize>,
    expect_not_found: bool,
    opts: &ScriptOpts,
    ctx: &Ctx,
) -> Result<Report> {
    let depth = depth_bound(depth)?;
    let (script, reg, cfg) = setup(path, opts)?;
    let goal = match item(&script, path, name)? {
        ItemKind::Sequent(s) => s.clone(),
        ItemKind::Proof(p) => p.conclusion.clone(),
        ItemKind::Formula(_) => bail!("`{name}` is a formula; search needs a sequent"),
    };
    let outcome = search_proof(&goal, &cfg, &reg, depth)?;
    let shown = ctx.s(&goal);
    Ok(match outcome {
        SearchOutcome::Found(p) => {
            let mut text = format!("found {name} : {shown} (height {})\n", p.height());
            text.push_str(&proof_string(name, &p));
            let item = json!({"name": name, "sequent": goal.to_string(), "depth": depth, "found": true, "proof": proof_json(&p)});
            let mut r = Report::new(!expect_not_found, text, vec![item]);
            if expect_not_found {
                r.notes.push(format!("{name}: a proof was found"));
            }
            r
        }
        SearchOutcome::NotFound { depth } => {
            let text = format!("NotFound {name} : {shown} (depth {depth})\n");
            let item = json!({"name": name, "sequent": goal.to_string(), "depth": depth, "found": false});
            let mut r = Report::new(expect_not_found, text, vec![item]);
            if !expect_not_found {
                r.notes.push(format!("{name}: no proof within depth {depth}"));
            }
            r
        }
    })
}

fn corpus() -> Result<Report> {
    let results = run_corpus()?;
    let mut text = String::new();
    let mut notes = Vec::new();
    for r in &results {
        text.push_str(&format!("{} {:<4} {}\n", if r.ok { "PASS" } else { "FAIL" }, r.id, r.description));
        for l in r.lines.iter().filter(|l| !l.ok) {
            text.push_str(&format!("     {} {}: {}\n", l.item, l.what, l.detail));
            notes.push(format!("{} {} {}: {}", r.id, l.item, l.what, l.detail));
        }
    }
    let passed = results.iter().filter(|r| r.ok).count();
    text.push_str(&format!("{passed}/{} entries pass\n", results.len()));
    let items = results
        .iter()
        .map(|r| serde_json::to_value(r).expect("results serialize"))
        .collect();
    let mut r = Report::new(passed == results.len(), text, items);
    r.notes = notes;
    Ok(r)
}

fn domain_json(d: &DomainRecord) -> Value {
    json!({
        "name": d.name,
        "entries": d.entries.iter().map(Term::to_string).collect::<Vec<_>>(),
        "focused": d.focused,
        "virtual_singleton": d.virtual_singleton,
        "duality": d.duality,
        "inhabited": d.inhabited,
    })
}

fn qstate(path: &Path, ctx: &Ctx) -> Result<Report> {
    let raw: Qubit = serde_json::from_str(&read(path)?).with_context(|| format!("{}", path.display()))?;
    let q = Qubit::new(raw.alpha, raw.beta, raw.phi).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let domain = measurement_domain(&q).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let state = state_formula(&q)?;
    let measured = collapse(&q)?;
    let mut text = format!("qubit     alpha={} beta={} phi={}\n", q.alpha, q.beta, q.phi);
    text.push_str(&format!("domain    {} = {{{}}}\n", domain.name, domain.entries.iter().map(Term::to_string).collect::<Vec<_>>().join(", ")));
    text.push_str(&format!("state     {}\n", ctx.f(&state)));
    text.push_str(&format!("collapse  {}\n", ctx.f(&measured)));
    let mut gates = Vec::new();
    for g in [Gate::X, Gate::Z] {
        let after = state_formula(&apply_gate(g, &q)).ok();
        let dual = apply_duality(&state, g.duality()).ok();
        let agrees = after.is_some() && after == dual;
        let show = |f: &Option<Formula>| f.as_ref().map_or("-".to_string(), |f| ctx.f(f));
        text.push_str(&format!(
            "{g:?}         {}   {} {}\n",
            show(&after),
            g.duality().name(),
            if agrees { "agrees" } else { "n/a" }
        ));
        gates.push(json!({
            "gate": g,
            "after_gate": after.map(|f| f.to_string()),
            "duality": g.duality().name(),
            "dual": dual.map(|f| f.to_string()),
            "agrees": agrees,
        }));
    }
    let item = json!({
        "qubit": q,
        "domain": domain_json(&domain),
        "state": state.to_string(),
        "collapse": measured.to_string(),
        "gates": gates,
    });
    Ok(Report::new(true, text, vec![item]))
}

fn bell(phase: PhaseArg, correlation: CorrelationArg, ctx: &Ctx) -> Result<Report> {
    let b = BellState {
        phase: match phase {
            PhaseArg::Plus => BellPhase::Plus,
            PhaseArg::Minus => BellPhase::Minus,
        },
        correlation: match correlation {
            CorrelationArg::Identical => CorrelationTag::Identical,
            CorrelationArg::Opposite => CorrelationTag::Opposite,
        },
    };
    let f = bell_formula(b);
    let perp_fixed = apply_duality(&f, InvolutionKind::Perp).is_ok_and(|g| g == f);
    let item = json!({"state": b, "formula": f.to_string(), "perp_fixed": perp_fixed});
    Ok(Report::new(true, format!("{}\n", ctx.f(&f)), vec![item]))
}

/// Qubit domains, a focused `D = {T1, T2}` and a virtual `V = {T1, T2}`
/// whose substitution licence follows `collapse_demo`.
fn builtin_registry(collapse_demo: bool) -> Registry {
    let mut reg = qubit_registry(collapse_demo);
    let pair = vec![Term::constant("T1"), Term::constant("T2")];
    let mut v = DomainRecord::virtual_singleton("V", pair.clone(), "d");
    v.substitution_allowed = collapse_demo;
    for r in [DomainRecord::focused("D", pair), v] {
        reg.register(r).expect("built-in domains are valid");
    }
    reg
}

fn guard(domain: &str, collapse_demo: bool, file: Option<&Path>, ctx: &Ctx) -> Result<Report> {
    // The guard's own proofs use cut and nothing else.
    let flags = ConfigFlags {
        cut: true,
        ..ConfigFlags::default()
    };
    let (reg, cfg) = match file {
        Some(path) => {
            let script = load_script(path, collapse_demo)?;
            let reg = script.registry().map_err(|e| anyhow!("{}: {e}", path.display()))?;
            let cfg = script
                .config_with(&reg, flags)
                .map_err(|e| anyhow!("{}: {e}", path.display()))?;
            (reg, cfg)
        }
        None => {
            let reg = builtin_registry(collapse_demo);
            let cfg = CalculusConfig::from_registry(&reg, false, false, false, true);
            (reg, cfg)
        }
    };
    let outcome = consistency_guard(&reg, &cfg, domain)?;
    let licences = json!({
        "substitution": cfg.allows_substitution(domain),
        "d_axiom": cfg.d_axiom_domains.iter().filter(|(d, _)| d == domain).map(|(_, k)| k.clone()).collect::<Vec<_>>(),
    });
    Ok(match outcome {
        GuardOutcome::Collapse(proofs) => {
            let mut ok = true;
            let mut text = format!("{domain} collapses: {} entry equations\n", proofs.len());
            let mut eqs = Vec::new();
            for (k, p) in proofs.iter().enumerate() {
                let report = check_proof(&p.proof, &cfg, &reg);
                ok &= report.ok;
                let n = format!("collapse_{}", k + 1);
                text.push_str(&proof_string(&n, &p.proof));
                text.push_str(&format!(
                    "{} {n} : {}\n",
                    if report.ok { "ok  " } else { "FAIL" },
                    ctx.s(&p.proof.conclusion)
                ));
                eqs.push(json!({
                    "left": p.left.to_string(),
                    "right": p.right.to_string(),
                    "proof": proof_json(&p.proof),
                    "check": check_report_json(&n, &p.proof.conclusion.to_string(), &report),
                }));
            }
            Report::new(ok, text, vec![json!({"domain": domain, "licences": licences, "outcome": "collapse", "equations": eqs})])
        }
        GuardOutcome::Consistent(refl) => {
            let mut text = format!("{domain} consistent\n");
            if let Some(p) = &refl {
                text.push_str(&format!("extensional singleton: {}\n", ctx.s(&p.conclusion)));
            }
            let item = json!({
                "domain": domain,
                "licences": licences,
                "outcome": "consistent",
                "reflexivity": refl.as_ref().map(proof_json),
            });
            Report::new(true, text, vec![item])
        }
    })
}
