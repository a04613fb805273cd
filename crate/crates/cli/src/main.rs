use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use aisr::algebra::diamond_addition;
use aisr::basis::{
    completeness_evidence, mutation_test, theorem_report, verify_claim, verify_cross_claims,
    BasisClaim, ClaimSet, ModelLibrary, Status,
};
use aisr::catalog::{parse_partition, Catalog};
use aisr::enumerate::{census_diff, enumerate_order, enumerate_with_reduct};
use aisr::oracles::{check_oracle, check_s0, Oracle, OracleReport};
use aisr::satisfaction::{satisfies_scheme_with, Budget, DEFAULT_BUDGET};
use aisr::search::{canonical_form, congruences, find_embedding, subdirect_decompositions};
use aisr::structural::{format_power_map, load_structure_claims, verify_structure_claims};
use aisr::textfmt::read_algebra;
use aisr::{parse_scheme, power, print_algebra, quotient, Corpus, CorpusBounds, FiniteAiSemiring};

const EXIT_FAILS: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_CLAIM: u8 = 5;

/// Verification workbench for finite ai-semirings.
#[derive(Parser)]
#[command(name = "aisr", version, about)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Catalog data directory (overrides WORKBENCH_DATA).
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Record,
}

#[derive(Args, Clone, Copy)]
struct CorpusArgs {
    /// Distinct variables in corpus identities.
    #[arg(long, default_value_t = 3)]
    vars: usize,
    /// Maximum word length.
    #[arg(long, default_value_t = 3)]
    word_len: usize,
    /// Maximum number of summands on the left.
    #[arg(long, default_value_t = 3)]
    summands: usize,
}

impl CorpusArgs {
    fn corpus(self) -> anyhow::Result<Corpus> {
        if self.vars == 0 || self.word_len == 0 || self.summands == 0 {
            bail!("corpus bounds must be positive");
        }
        Ok(Corpus::generate(CorpusBounds::new(self.vars, self.word_len, self.summands))?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Browse named algebras.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
    /// Check the ai-semiring axioms for names or algebra files.
    Validate {
        targets: Vec<String>,
        /// Every catalog entry.
        #[arg(long)]
        all: bool,
    },
    /// Decide an identity (or scheme) in an algebra; exit 1 when it fails.
    Check {
        /// Catalog name or algebra file.
        algebra: String,
        identity: String,
        /// Maximum number of assignments to evaluate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Verify recorded basis claims, structural claims and cross claims.
    Verify {
        /// Claim files to verify.
        claims: Vec<PathBuf>,
        /// Every recorded claim.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Enumerate ai-semirings up to isomorphism.
    Enumerate {
        #[arg(long)]
        order: usize,
        /// `diamond`, or an algebra file whose addition is kept fixed.
        #[arg(long)]
        reduct: Option<String>,
        /// Allow the order-4 run over all additions.
        #[arg(long)]
        stretch: bool,
        /// Write representatives as algebra files into this directory.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Print every canonical form.
        #[arg(long)]
        list: bool,
    },
    /// Find an embedding of A into B or into a power `B^k`.
    Embed { algebra: String, target: String },
    /// List congruences, or print the quotient by one partition.
    Quotient {
        algebra: String,
        /// 1-based partition such as `{{1,3},{2},{4}}`.
        partition: Option<String>,
    },
    /// List two-factor subdirect decompositions.
    Decompose { algebra: String },
    /// Test a syntactic condition against brute-force satisfaction.
    OracleTest {
        /// s41, s2, s4, s57, s53, s58, s59, s60, s44, s46, s0 or all.
        oracle: String,
        /// Base algebra for s0 (default: every catalog algebra of order ≤ 3).
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Summary over all 93 table algebras.
    Report {
        /// Also run completeness evidence with models up to this order.
        #[arg(long)]
        completeness: Option<usize>,
        /// Run the single-scheme deletion test for these algebras.
        #[arg(long = "mutate")]
        mutate: Vec<String>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Every name, table entries first.
    List,
    /// An algebra's tables and provenance.
    Show { name: String },
    /// Re-run every recorded route to each derived entry.
    Check,
}

/// Emits human lines or `key=value` records.
struct Out {
    format: Format,
}

fn quote(v: &str) -> String {
    if v.is_empty() || v.chars().any(|c| c.is_whitespace() || c == '"' || c == '=') {
        format!("{v:?}")
    } else {
        v.to_string()
    }
}

impl Out {
    fn emit(&self, human: impl Display, record: &[(&str, String)]) {
        match self.format {
            Format::Human => println!("{human}"),
            Format::Record => {
                let parts: Vec<String> = record.iter().map(|(k, v)| format!("{k}={}", quote(v))).collect();
                println!("{}", parts.join(" "));
            }
        }
    }

    /// Verbatim block in human mode only.
    fn text(&self, s: &str) {
        if self.format == Format::Human {
            print!("{s}");
        }
    }
}

struct Ctx {
    out: Out,
    data: Option<PathBuf>,
    catalog: Option<Catalog>,
}

impl Ctx {
    fn catalog(&mut self) -> anyhow::Result<&Catalog> {
        if self.catalog.is_none() {
            let c = match &self.data {
                Some(d) => Catalog::load(d)?,
                None => Catalog::open_default()?,
            };
            self.catalog = Some(c);
        }
        Ok(self.catalog.as_ref().expect("catalog loaded"))
    }

    /// A file path if one exists, otherwise a catalog name.
    fn algebra(&mut self, s: &str) -> anyhow::Result<(String, FiniteAiSemiring)> {
        let p = Path::new(s);
        if p.is_file() {
            let a = read_algebra(p)?;
            let name = a.name().map(str::to_string).unwrap_or_else(|| s.to_string());
            return Ok((name, a));
        }
        let e = self.catalog()?.get(s)?;
        Ok((e.name.clone(), e.algebra.clone()))
    }
}

fn yes(b: bool) -> String {
    if b { "pass" } else { "fail" }.to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILS);
        }
    }
    let mut ctx = Ctx {
        out: Out { format: cli.format },
        data: cli.data,
        catalog: None,
    };
    match run(&mut ctx, cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    use aisr::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::UnknownName(_) | E::Io { .. }) => EXIT_UNKNOWN,
        Some(E::Parse { .. } | E::Claim { .. } | E::EmptyScheme) => EXIT_PARSE,
        Some(E::Budget { .. } | E::Bound { .. }) => EXIT_BUDGET,
        _ => EXIT_FAILS,
    }
}

fn run(ctx: &mut Ctx, cmd: Command) -> anyhow::Result<u8> {
    match cmd {
        Command::Catalog { action } => cmd_catalog(ctx, action),
        Command::Validate { targets, all } => cmd_validate(ctx, targets, all),
        Command::Check { algebra, identity, budget } => cmd_check(ctx, &algebra, &identity, budget),
        Command::Verify { claims, all, corpus } => cmd_verify(ctx, claims, all, corpus),
        Command::Enumerate { order, reduct, stretch, emit, list } => {
            cmd_enumerate(ctx, order, reduct, stretch, emit, list)
        }
        Command::Embed { algebra, target } => cmd_embed(ctx, &algebra, &target),
        Command::Quotient { algebra, partition } => cmd_quotient(ctx, &algebra, partition),
        Command::Decompose { algebra } => cmd_decompose(ctx, &algebra),
        Command::OracleTest { oracle, base, corpus } => cmd_oracle(ctx, &oracle, base, corpus),
        Command::Report { completeness, mutate, corpus } => cmd_report(ctx, completeness, mutate, corpus),
    }
}

fn cmd_catalog(ctx: &mut Ctx, action: CatalogCmd) -> anyhow::Result<u8> {
    let cat = ctx.catalog()?.clone();
    let out = &ctx.out;
    match action {
        CatalogCmd::List => {
            for e in cat.entries() {
                let tag = if e.provisional { " (provisional)" } else { "" };
                out.emit(
                    format!("{}  order {}  {}{tag}", e.name, e.algebra.order(), e.provenance),
                    &[
                        ("name", e.name.clone()),
                        ("order", e.algebra.order().to_string()),
                        ("provenance", e.provenance.to_string()),
                        ("provisional", e.provisional.to_string()),
                    ],
                );
            }
        }
        CatalogCmd::Show { name } => {
            let e = cat.get(&name)?;
            out.text(&print_algebra(&e.algebra));
            out.emit(
                format!("provenance {}", e.provenance),
                &[("name", e.name.clone()), ("provenance", e.provenance.to_string())],
            );
            for r in &e.alternates {
                out.emit(format!("alternate {r}"), &[("name", e.name.clone()), ("alternate", r.to_string())]);
            }
            if e.provisional {
                out.emit("provisional", &[("name", e.name.clone()), ("provisional", "true".into())]);
            }
            out.emit(
                format!("canonical {}", canonical_form(&e.algebra)?),
                &[("name", e.name.clone()), ("canonical", canonical_form(&e.algebra)?.to_string())],
            );
        }
        CatalogCmd::Check => {
            let mut ok = true;
            for e in cat.derived() {
                let r = cat.cross_check(&e.name)?;
                ok &= r.is_consistent();
                out.emit(
                    format!("{} {} ({} routes)", yes(r.is_consistent()), e.name, r.routes.len()),
                    &[
                        ("name", e.name.clone()),
                        ("routes", r.routes.len().to_string()),
                        ("consistent", r.is_consistent().to_string()),
                    ],
                );
            }
            return Ok(if ok { 0 } else { EXIT_CLAIM });
        }
    }
    Ok(0)
}

fn cmd_validate(ctx: &mut Ctx, targets: Vec<String>, all: bool) -> anyhow::Result<u8> {
    let mut items = Vec::new();
    if all {
        for e in ctx.catalog()?.entries() {
            items.push((e.name.clone(), e.algebra.clone()));
        }
    }
    for t in &targets {
        items.push(ctx.algebra(t)?);
    }
    if items.is_empty() {
        bail!("nothing to validate: give names, files or --all");
    }
    let mut ok = true;
    for (name, a) in items {
        let r = a.validate();
        ok &= r.violations.is_empty();
        let first = r.violations.first().map(|v| format!("{v}")).unwrap_or_default();
        let human = if r.violations.is_empty() {
            format!("valid {name}")
        } else {
            format!("invalid {name}: {} violations, first {first}", r.violations.len())
        };
        ctx.out.emit(human, &[
            ("name", name),
            ("valid", r.violations.is_empty().to_string()),
            ("violations", r.violations.len().to_string()),
            ("first", first),
        ]);
    }
    Ok(if ok { 0 } else { EXIT_FAILS })
}

fn cmd_check(ctx: &mut Ctx, alg: &str, identity: &str, budget: u64) -> anyhow::Result<u8> {
    let scheme = parse_scheme(identity)?;
    let (name, a) = ctx.algebra(alg)?;
    let v = satisfies_scheme_with(&a, &scheme, Budget(budget))?;
    match v {
        aisr::SchemeVerdict::Holds => {
            ctx.out.emit("holds", &[("algebra", name), ("identity", scheme.to_string()), ("verdict", "holds".into())]);
            Ok(0)
        }
        aisr::SchemeVerdict::Fails { expansion, witness } => {
            let human = if scheme.optional().is_empty() {
                format!("fails {witness}")
            } else {
                format!("fails {witness} in {expansion}")
            };
            ctx.out.emit(human, &[
                ("algebra", name),
                ("identity", scheme.to_string()),
                ("verdict", "fails".into()),
                ("witness", witness.to_string()),
                ("expansion", expansion.to_string()),
            ]);
            Ok(EXIT_FAILS)
        }
    }
}

fn cmd_verify(ctx: &mut Ctx, files: Vec<PathBuf>, all: bool, corpus: CorpusArgs) -> anyhow::Result<u8> {
    if !all && files.is_empty() {
        bail!("give claim files or --all");
    }
    let cat = ctx.catalog()?.clone();
    let recorded = ClaimSet::for_catalog(&cat)?;
    let corpus = corpus.corpus()?;
    let out = &ctx.out;
    let mut ok = true;
    if all {
        let mut sound = 0;
        let mut fb = 0;
        let mut nfb_pass = 0;
        let mut nfb = 0;
        for e in cat.all_table1() {
            let r = verify_claim(&cat, &recorded, &e.name, &corpus)?;
            let passed = r.passed();
            ok &= passed;
            match r.claim.status {
                Status::FinitelyBased => {
                    fb += 1;
                    sound += passed as usize;
                }
                Status::NonfinitelyBased => {
                    nfb += 1;
                    nfb_pass += passed as usize;
                }
            }
            out.emit(
                format!("{} {} {} {} ({} schemes, {} checks)", yes(passed), e.name, r.claim.status, r.claim.source, r.soundness.results.len(), r.checks.len()),
                &[
                    ("kind", "basis".into()),
                    ("algebra", e.name.clone()),
                    ("status", r.claim.status.to_string()),
                    ("source", r.claim.source.to_string()),
                    ("schemes", r.soundness.results.len().to_string()),
                    ("checks", r.checks.len().to_string()),
                    ("result", yes(passed)),
                ],
            );
            if !passed {
                print_claim_failures(out, &r);
            }
        }
        let structure = verify_structure_claims(&cat, &load_structure_claims(&cat)?)?;
        let spass = structure.iter().filter(|o| o.passed).count();
        for o in &structure {
            ok &= o.passed;
            out.emit(o, &[("kind", "structure".into()), ("claim", o.claim.to_string()), ("result", yes(o.passed)), ("detail", o.detail.clone())]);
        }
        let cross = verify_cross_claims(&cat, &recorded)?;
        let cpass = cross.iter().filter(|(_, r)| r.passed()).count();
        for (x, r) in &cross {
            ok &= r.passed();
            out.emit(
                format!("{} {} satisfies the basis of {}", yes(r.passed()), x.algebra, x.basis_of),
                &[("kind", "cross".into()), ("algebra", x.algebra.clone()), ("basis_of", x.basis_of.clone()), ("result", yes(r.passed()))],
            );
        }
        out.emit(
            format!(
                "summary: soundness {sound}/{fb} finitely based, nfb structural {nfb_pass}/{nfb}, structure {spass}/{}, cross {cpass}/{}",
                structure.len(),
                cross.len()
            ),
            &[
                ("kind", "summary".into()),
                ("soundness", format!("{sound}/{fb}")),
                ("nfb_structural", format!("{nfb_pass}/{nfb}")),
                ("structure", format!("{spass}/{}", structure.len())),
                ("cross", format!("{cpass}/{}", cross.len())),
            ],
        );
    }
    for f in files {
        let claim = BasisClaim::read(&f)?;
        let name = claim.algebra.clone();
        let mut claims: Vec<BasisClaim> = recorded.claims().filter(|c| c.algebra != name).cloned().collect();
        claims.push(claim);
        let set = ClaimSet::from_claims(claims)?;
        let r = verify_claim(&cat, &set, &name, &corpus)?;
        for (s, v) in &r.soundness.results {
            let (word, witness) = match v {
                aisr::SchemeVerdict::Holds => ("holds", String::new()),
                aisr::SchemeVerdict::Fails { expansion, witness } => ("fails", format!("{witness} in {expansion}")),
            };
            out.emit(
                if witness.is_empty() { format!("{word} {s}") } else { format!("{word} {s} | {witness}") },
                &[("algebra", name.clone()), ("scheme", s.to_string()), ("verdict", word.into()), ("witness", witness)],
            );
        }
        for c in &r.checks {
            out.emit(c, &[("algebra", name.clone()), ("check", c.label.clone()), ("result", yes(c.passed)), ("detail", c.detail.clone())]);
        }
        ok &= r.passed();
        out.emit(format!("{} {name}", yes(r.passed())), &[("algebra", name.clone()), ("result", yes(r.passed()))]);
    }
    Ok(if ok { 0 } else { EXIT_CLAIM })
}

fn print_claim_failures(out: &Out, r: &aisr::basis::ClaimReport) {
    for (s, v) in &r.soundness.results {
        if let aisr::SchemeVerdict::Fails { expansion, witness } = v {
            out.emit(
                format!("    fails {s} | {witness} in {expansion}"),
                &[("algebra", r.claim.algebra.clone()), ("scheme", s.to_string()), ("verdict", "fails".into()), ("witness", witness.to_string())],
            );
        }
    }
    for c in r.checks.iter().filter(|c| !c.passed) {
        out.emit(format!("    {c}"), &[("algebra", r.claim.algebra.clone()), ("check", c.label.clone()), ("result", "fail".into())]);
    }
}

fn census_expected(n: usize) -> Option<usize> {
    match n {
        1 => Some(1),
        2 => Some(6),
        3 => Some(61),
        4 => Some(866),
        _ => None,
    }
}

fn cmd_enumerate(
    ctx: &mut Ctx,
    order: usize,
    reduct: Option<String>,
    stretch: bool,
    emit: Option<PathBuf>,
    list: bool,
) -> anyhow::Result<u8> {
    let mut code = 0;
    let (res, diamond) = match reduct.as_deref() {
        None => (enumerate_order(order, stretch)?, false),
        Some("diamond") => {
            if order != 4 {
                bail!("the diamond addition has order 4");
            }
            (enumerate_with_reduct(4, &diamond_addition())?, true)
        }
        Some(path) => {
            let a = read_algebra(Path::new(path))?;
            if a.order() != order {
                bail!("reduct file has order {}, expected {order}", a.order());
            }
            (enumerate_with_reduct(order, a.add_table())?, false)
        }
    };
    let out = &ctx.out;
    out.emit(format!("count {}", res.count), &[("order", order.to_string()), ("count", res.count.to_string())]);
    if reduct.is_none() {
        if let Some(exp) = census_expected(order) {
            if res.count != exp {
                out.emit(format!("census mismatch: expected {exp}"), &[("expected", exp.to_string()), ("match", "false".into())]);
                for (i, rep) in res.forms.iter().enumerate() {
                    out.emit(format!("form {rep}"), &[("index", (i + 1).to_string()), ("form", rep.to_string())]);
                }
                code = EXIT_CLAIM;
            }
        }
    }
    if diamond {
        let cat = ctx.catalog()?.clone();
        let table: Vec<_> = cat
            .all_table1()
            .iter()
            .map(|e| canonical_form(&e.algebra))
            .collect::<aisr::Result<_>>()?;
        let (missing, extra) = census_diff(&res.forms, &table);
        let bij = missing.is_empty() && extra.is_empty() && res.count == table.len();
        let out = &ctx.out;
        out.emit(
            format!("table1 bijection: {}", if bij { "ok" } else { "mismatch" }),
            &[("table1_bijection", bij.to_string())],
        );
        for m in &missing {
            out.emit(format!("missing {m}"), &[("missing", m.to_string())]);
        }
        for x in &extra {
            out.emit(format!("extra {x}"), &[("extra", x.to_string())]);
        }
        if !bij {
            code = EXIT_CLAIM;
        }
    }
    let out = &ctx.out;
    if list {
        for (i, f) in res.forms.iter().enumerate() {
            out.emit(format!("{} {f}", i + 1), &[("index", (i + 1).to_string()), ("form", f.to_string())]);
        }
    }
    if let Some(dir) = emit {
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (i, rep) in res.representatives.iter().enumerate() {
            let named = rep.clone().with_name(format!("E_{order}_{}", i + 1));
            let p = dir.join(format!("E_{order}_{}.alg", i + 1));
            fs::write(&p, print_algebra(&named)).with_context(|| format!("writing {}", p.display()))?;
        }
        out.emit(format!("wrote {} files to {}", res.count, dir.display()), &[("emitted", res.count.to_string())]);
    }
    Ok(code)
}

fn cmd_embed(ctx: &mut Ctx, alg: &str, target: &str) -> anyhow::Result<u8> {
    let (name, a) = ctx.algebra(alg)?;
    let (tname, k) = match target.rsplit_once('^') {
        Some((t, k)) if k.chars().all(|c| c.is_ascii_digit()) && !k.is_empty() => (t, k.parse::<usize>()?),
        _ => (target, 1),
    };
    if k == 0 {
        bail!("power must be at least 1");
    }
    let (_, b) = ctx.algebra(tname)?;
    let p = power(&b, k);
    match find_embedding(&a, &p)? {
        Some(m) => {
            let shown = if k == 1 { m.to_string() } else { format_power_map(&m, b.order(), k) };
            ctx.out.emit(format!("embedding {shown}"), &[("algebra", name), ("target", target.to_string()), ("map", shown.clone())]);
            Ok(0)
        }
        None => {
            ctx.out.emit("no embedding", &[("algebra", name), ("target", target.to_string()), ("map", "none".into())]);
            Ok(EXIT_FAILS)
        }
    }
}

fn cmd_quotient(ctx: &mut Ctx, alg: &str, partition: Option<String>) -> anyhow::Result<u8> {
    let (name, a) = ctx.algebra(alg)?;
    match partition {
        Some(p) => {
            let p = parse_partition(&p)?;
            if p.len() != a.order() {
                bail!(aisr::Error::NotCongruence(format!("partition covers {} elements, algebra has {}", p.len(), a.order())));
            }
            if !aisr::is_congruence(&a, &p) {
                ctx.out.emit(format!("not a congruence: {p}"), &[("algebra", name), ("partition", p.to_string()), ("congruence", "false".into())]);
                return Ok(EXIT_FAILS);
            }
            let q = quotient(&a, &p)?.with_name(format!("{name}/{p}"));
            let ids = ctx.catalog()?.identify(&q).join(",");
            ctx.out.text(&print_algebra(&q));
            ctx.out.emit(format!("isomorphic to: {}", if ids.is_empty() { "-" } else { &ids }), &[
                ("algebra", name),
                ("partition", p.to_string()),
                ("congruence", "true".into()),
                ("identified", ids.clone()),
            ]);
            Ok(0)
        }
        None => {
            let cons = congruences(&a)?;
            for c in cons {
                let q = quotient(&a, &c)?;
                let ids = ctx.catalog()?.identify(&q).join(",");
                ctx.out.emit(
                    format!("{c}  order {}  {}", q.order(), if ids.is_empty() { "-" } else { &ids }),
                    &[("algebra", name.clone()), ("partition", c.to_string()), ("order", q.order().to_string()), ("identified", ids.clone())],
                );
            }
            Ok(0)
        }
    }
}

fn cmd_decompose(ctx: &mut Ctx, alg: &str) -> anyhow::Result<u8> {
    let (name, a) = ctx.algebra(alg)?;
    let decs = subdirect_decompositions(&a)?;
    if decs.is_empty() {
        ctx.out.emit("subdirectly irreducible", &[("algebra", name), ("decompositions", "0".into())]);
        return Ok(0);
    }
    for (p, q) in decs {
        let qa = quotient(&a, &p)?;
        let qb = quotient(&a, &q)?;
        let cat = ctx.catalog()?;
        let id = |x: &FiniteAiSemiring| {
            let v = cat.identify(x);
            if v.is_empty() { format!("order-{}", x.order()) } else { v.join("=") }
        };
        let (ia, ib) = (id(&qa), id(&qb));
        ctx.out.emit(
            format!("{p} x {q}  ->  {ia} x {ib}"),
            &[("algebra", name.clone()), ("kernel1", p.to_string()), ("kernel2", q.to_string()), ("factor1", ia), ("factor2", ib)],
        );
    }
    Ok(0)
}

fn emit_oracle(out: &Out, label: &str, algebra: &str, exact: bool, r: &OracleReport) {
    let human = if exact {
        if r.passed() {
            format!("{label} on {algebra}: equivalence: exact ({} pairs)", r.checked)
        } else {
            format!("{label} on {algebra}: equivalence: {} disagreements ({} pairs)", r.violations.len(), r.checked)
        }
    } else if r.passed() {
        format!(
            "{label} on {algebra}: necessity: no violations ({} nontrivial pairs, {} not covered, {} trivial skipped)",
            r.checked, r.not_covered, r.skipped_trivial
        )
    } else {
        format!("{label} on {algebra}: necessity: {} violations ({} nontrivial pairs)", r.violations.len(), r.checked)
    };
    out.emit(
        human,
        &[
            ("oracle", label.to_string()),
            ("algebra", algebra.to_string()),
            ("mode", if exact { "equivalence" } else { "necessity" }.into()),
            ("pairs", r.checked.to_string()),
            ("satisfied", r.satisfied.to_string()),
            ("skipped_trivial", r.skipped_trivial.to_string()),
            ("not_covered", r.not_covered.to_string()),
            ("violations", r.violations.len().to_string()),
        ],
    );
    for v in &r.violations {
        out.emit(format!("  {v}"), &[("oracle", label.to_string()), ("violation", v.to_string())]);
    }
}

fn cmd_oracle(ctx: &mut Ctx, key: &str, base: Option<String>, corpus: CorpusArgs) -> anyhow::Result<u8> {
    let corpus = corpus.corpus()?;
    let cat = ctx.catalog()?.clone();
    let key = key.to_lowercase();
    let mut ok = true;
    let oracles: Vec<Oracle> = match key.as_str() {
        "all" => Oracle::ALL.to_vec(),
        "s0" => Vec::new(),
        k => vec![Oracle::from_key(k).ok_or_else(|| aisr::Error::UnknownName(k.to_string()))?],
    };
    for o in oracles {
        let r = check_oracle(o, cat.algebra(o.algebra_name())?, &corpus)?;
        ok &= r.passed();
        emit_oracle(&ctx.out, &o.key(), o.algebra_name(), o.is_exact(), &r);
    }
    if key == "s0" || key == "all" {
        let bases: Vec<String> = match base {
            Some(b) => vec![cat.get(&b)?.name.clone()],
            None => cat.derived().iter().filter(|e| e.algebra.order() <= 3).map(|e| e.name.clone()).collect(),
        };
        for b in bases {
            let r = check_s0(cat.algebra(&b)?, &corpus)?;
            ok &= r.passed();
            emit_oracle(&ctx.out, "s0", &format!("{b}^0"), true, &r);
        }
    }
    Ok(if ok { 0 } else { EXIT_CLAIM })
}

fn cmd_report(ctx: &mut Ctx, completeness: Option<usize>, mutate: Vec<String>, corpus: CorpusArgs) -> anyhow::Result<u8> {
    let cat = ctx.catalog()?.clone();
    let claims = ClaimSet::for_catalog(&cat)?;
    let corpus = corpus.corpus()?;
    let lib = match completeness.or(if mutate.is_empty() { None } else { Some(4) }) {
        Some(k) => Some(ModelLibrary::up_to(k)?),
        None => None,
    };
    let rep = theorem_report(&cat, &claims, &corpus, completeness.and(lib.as_ref()))?;
    let out = &ctx.out;
    for r in &rep.rows {
        let comp = match &r.completeness {
            Some(c) if c.passed() => format!("no countermodel of order ≤ {}", c.max_order),
            Some(c) => format!("{} red flags at order ≤ {}", c.red_flags.len(), c.max_order),
            None => "not run".into(),
        };
        out.emit(
            format!("{:<10} {:<3} {:<26} verified={} completeness: {comp}", r.algebra, r.status.to_string(), r.source.to_string(), yes(r.verified)),
            &[
                ("algebra", r.algebra.clone()),
                ("status", r.status.to_string()),
                ("source", r.source.to_string()),
                ("verified", yes(r.verified)),
                ("completeness", comp.clone()),
            ],
        );
        if let Some(c) = &r.completeness {
            for f in c.red_flags.iter().take(5) {
                out.emit(format!("    red flag {} (countermodel {})", f.pair, canonical_form(&f.model)?), &[("algebra", r.algebra.clone()), ("red_flag", f.pair.to_string())]);
            }
        }
    }
    let mut code = if rep.passed() { 0 } else { EXIT_CLAIM };
    for n in &mutate {
        let lib = lib.as_ref().expect("library built for mutation");
        let name = cat.get(n)?.name.clone();
        let schemes = claims.schemes(&name)?;
        let a = cat.algebra(&name)?;
        let base = completeness_evidence(&name, a, &schemes, &corpus, lib)?;
        out.emit(base.summary(), &[("algebra", name.clone()), ("completeness", base.summary())]);
        let muts = mutation_test(&name, a, &schemes, &corpus, lib)?;
        let flagged = muts.iter().any(|m| m.red_flags > 0);
        for m in &muts {
            out.emit(
                format!("    without {}: {} red flags", m.dropped, m.red_flags),
                &[("algebra", name.clone()), ("dropped", m.dropped.to_string()), ("red_flags", m.red_flags.to_string())],
            );
        }
        if !flagged || !base.passed() {
            code = EXIT_CLAIM;
        }
    }
    let zero = rep.rows.iter().find(|r| r.status == Status::NonfinitelyBased);
    out.emit(
        format!(
            "summary: {} rows, {} finitely based, {} nonfinitely based, {} verified{}",
            rep.rows.len(),
            rep.finitely_based(),
            rep.nonfinitely_based(),
            rep.verified(),
            zero.map(|z| format!("; {} zero-adjunction structure {}", z.algebra, yes(z.verified))).unwrap_or_default()
        ),
        &[
            ("rows", rep.rows.len().to_string()),
            ("fb", rep.finitely_based().to_string()),
            ("nfb", rep.nonfinitely_based().to_string()),
            ("verified", rep.verified().to_string()),
        ],
    );
    Ok(code)
}
