use std::fmt::Write as _;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppalg_core::approximation::{initial_module, initial_variable_names, is_maximal_rigid, mutate};
use ppalg_core::catalog::{Catalog, CatalogId, ModuleSum};
use ppalg_core::cluster::{exchange_graph, GraphOptions, Seed};
use ppalg_core::endo_quiver::exchange_data;
use ppalg_core::intmat;
use ppalg_core::linalg::{is_prime, Field};
use ppalg_core::module::Module;
use ppalg_core::module_rep::{ext1_dim, from_json};
use ppalg_core::quiver::DynkinType;
use ppalg_core::semicanonical::{phi_evaluate, reduce_module, w0_pattern, MAX_PHI_DIM};
use ppalg_core::verify::{Verifier, VerifyOptions, SUITES};
use ppalg_core::{Error, Result};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ppalg", version, about = "Rigid modules, mutation and cluster seeds for preprojective algebras")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldMode {
    Rational,
    Fp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Table,
    Json,
    Dot,
}

#[derive(Args)]
struct Config {
    /// Dynkin type: A2, A3 or A4.
    #[arg(long = "type", global = true, default_value = "A2")]
    dynkin: String,
    /// Ground field for Ext computations in `rigid-check`.
    #[arg(long, global = true, value_enum, default_value_t = FieldMode::Rational)]
    field: FieldMode,
    /// The prime for `--field fp`.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on resolution lengths (at least 3).
    #[arg(long, global = true, default_value_t = 6)]
    cap: usize,
    /// Allow the long A4 exchange graph computations.
    #[arg(long, global = true)]
    deep: bool,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Table)]
    emit: Emit,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog, initial module and its exchange data.
    Build,
    /// The indecomposable rigid modules.
    Catalog,
    /// Ext¹ between the given summands; rigid, basic and complete or not.
    RigidCheck {
        /// Comma-separated summands: S2, P1, T3, #5, a socle profile like
        /// "2 / 1 3", or a path to a module JSON file.
        #[arg(long)]
        module: String,
    },
    /// Mutate the initial module along a sequence of positions.
    Mutate {
        /// Comma-separated 1-based positions.
        #[arg(long, value_delimiter = ',', required = true)]
        sequence: Vec<usize>,
    },
    /// Closure of the initial module under mutation.
    ExchangeGraph,
    /// Run an invariant suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Evaluate φ_M on x_{i_1}(t_1)⋯x_{i_k}(t_k).
    Phi {
        #[arg(long)]
        module: String,
        /// Comma-separated vertices; defaults to the reduced word 1,2,1,3,2,1,….
        #[arg(long, value_delimiter = ',')]
        word: Vec<usize>,
    },
    /// Start the HTTP explorer service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Only this origin may make cross-origin requests.
        #[arg(long)]
        origin: Option<String>,
    },
}

impl Config {
    fn dynkin(&self) -> Result<DynkinType> {
        self.dynkin.parse()
    }

    fn field(&self) -> Result<Field> {
        match (self.field, self.prime) {
            (FieldMode::Rational, _) => Ok(Field::Rational),
            (FieldMode::Fp, Some(p)) if is_prime(p) => Ok(Field::prime(p)?),
            (FieldMode::Fp, Some(p)) => Err(Error::Invalid(format!("{p} is not prime"))),
            (FieldMode::Fp, None) => Err(Error::Invalid("--field fp needs --prime".into())),
        }
    }

    fn catalog(&self) -> Result<Catalog> {
        Catalog::enumerate(self.dynkin()?)
    }
}

/// One summand: `S2`, `P1`, `T3` (initial module position), `#5`, or a
/// socle profile.
fn parse_summand(cat: &Catalog, s: &str) -> Result<CatalogId> {
    let s = s.trim();
    let index = |rest: &str, len: usize| -> Result<usize> {
        let i: usize = rest.parse().map_err(|_| Error::Invalid(format!("bad index in {s}")))?;
        if i == 0 || i > len {
            return Err(Error::OutOfRange(i, len));
        }
        Ok(i - 1)
    };
    let n = cat.dynkin().rank();
    if let Some(rest) = s.strip_prefix('#') {
        let i: usize = rest.parse().map_err(|_| Error::Invalid(format!("bad id {s}")))?;
        return if i < cat.len() { Ok(i) } else { Err(Error::OutOfRange(i, cat.len())) };
    }
    if s.len() > 1 && s[1..].chars().all(|c| c.is_ascii_digit()) {
        match &s[..1] {
            "S" => return Ok(cat.simple_ids()[index(&s[1..], n)?]),
            "P" => return Ok(cat.projective_ids()[index(&s[1..], n)?]),
            "T" => {
                let t = initial_module(cat)?;
                return Ok(t[index(&s[1..], t.len())?]);
            }
            _ => {}
        }
    }
    cat.by_profile(s).ok_or_else(|| Error::NotInCatalog(s.to_string()))
}

/// A module given as comma-separated summands, or a JSON file.
fn parse_module(cat: &Catalog, s: &str) -> Result<(Module, Option<Vec<CatalogId>>)> {
    if s.ends_with(".json") {
        let text = std::fs::read_to_string(s).map_err(|e| Error::Invalid(format!("{s}: {e}")))?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{s}: {e}")))?;
        return Ok((from_json(&v)?, None));
    }
    let ids = s.split(',').map(|p| parse_summand(cat, p)).collect::<Result<Vec<_>>>()?;
    let parts: Vec<&Module> = ids.iter().map(|&i| cat.rep(i)).collect();
    Ok((Module::direct_sum_all(Field::Rational, cat.sig().clone(), &parts), Some(ids)))
}

fn matrix_block(name: &str, m: &[Vec<i64>]) -> String {
    format!("{name}:\n{}\n", intmat::render(m))
}

fn build(cfg: &Config) -> Result<String> {
    let cat = cfg.catalog()?;
    let t = initial_module(&cat)?;
    let d = exchange_data(&cat, &t)?;
    if cfg.emit == Emit::Json {
        return Ok(json!({
            "type": cat.dynkin().to_string(),
            "catalog_count": cat.len(),
            "initial": t.iter().map(|&i| json!({"id": i, "profile": cat.entry(i).profile})).collect::<Vec<_>>(),
            "exchange_data": d.to_json(),
            "variables": initial_variable_names(&cat),
        })
        .to_string());
    }
    let mut s = format!("{}: {} indecomposable rigid modules\n", cat.dynkin(), cat.len());
    for (i, &id) in t.iter().enumerate() {
        let kind = if i < d.exchangeable { "" } else { " (projective)" };
        let _ = writeln!(s, "T{} = {}{kind}", i + 1, cat.entry(id).profile);
    }
    s.push_str(&matrix_block("B(T)°", &d.b_circ));
    s.push_str(&matrix_block("C_T", &d.cartan));
    s.push_str(&matrix_block("R_T", &d.ringel));
    Ok(s)
}

fn catalog(cfg: &Config) -> Result<String> {
    let cat = cfg.catalog()?;
    if cfg.emit == Emit::Json {
        return Ok(cat.to_json().to_string());
    }
    let mut s = format!("{:>3}  {:<12}  {:<18}  {:<10}  rigid\n", "id", "dim", "profile", "projective");
    for e in cat.entries() {
        let _ = writeln!(
            s,
            "{:>3}  {:<12}  {:<18}  {:<10}  {}",
            e.id,
            format!("{:?}", e.dims),
            e.profile,
            if e.projective { "yes" } else { "no" },
            if e.rigid { "yes" } else { "no" }
        );
    }
    Ok(s)
}

fn rigid_check(cfg: &Config, module: &str) -> Result<String> {
    let cat = cfg.catalog()?;
    let field = cfg.field()?;
    let (m, given) = parse_module(&cat, module)?;
    let ids = match given {
        Some(ids) => ids,
        None => cat.canonical_sum(&m)?.0.iter().flat_map(|(&i, &k)| std::iter::repeat(i).take(k)).collect(),
    };
    let over = |x: &Module| -> Result<Module> {
        match field {
            Field::Rational => Ok(x.clone()),
            _ => reduce_module(x, field.characteristic())
                .ok_or_else(|| Error::Invalid(format!("cannot reduce modulo {}", field.characteristic()))),
        }
    };
    let reps = ids.iter().map(|&i| over(cat.rep(i))).collect::<Result<Vec<_>>>()?;
    let mut table = Vec::new();
    let mut total = 0;
    for x in &reps {
        let mut row = Vec::new();
        for y in &reps {
            let e = ext1_dim(x, y)?;
            total += e;
            row.push(e as i64);
        }
        table.push(row);
    }
    let sum = ModuleSum::from_ids(&ids);
    let basic = sum.is_basic();
    let complete = total == 0 && basic && is_maximal_rigid(&cat, &ids);
    if cfg.emit == Emit::Json {
        return Ok(json!({
            "summands": ids.iter().map(|&i| cat.entry(i).profile.clone()).collect::<Vec<_>>(),
            "ext1": table,
            "rigid": total == 0,
            "basic": basic,
            "complete": complete,
        })
        .to_string());
    }
    let mut s = String::new();
    for (i, &id) in ids.iter().enumerate() {
        let _ = writeln!(s, "M{} = {}", i + 1, cat.entry(id).profile);
    }
    s.push_str(&matrix_block("dim Ext¹(M_i, M_j)", &table));
    let _ = writeln!(s, "rigid: {}\nbasic: {basic}\ncomplete: {complete}", total == 0);
    Ok(s)
}

fn mutate_walk(cfg: &Config, sequence: &[usize]) -> Result<String> {
    let cat = cfg.catalog()?;
    let names = initial_variable_names(&cat);
    let mut order = initial_module(&cat)?;
    let mut seed = Seed::initial(exchange_data(&cat, &order)?.b_circ);
    let mut steps = Vec::new();
    let mut s = String::new();
    for &k in sequence {
        if k == 0 || k > order.len() {
            return Err(Error::OutOfRange(k, order.len()));
        }
        let m = mutate(&cat, &order, k - 1)?;
        seed = seed.mutate(k - 1)?;
        let var = seed.vars[k - 1].render(&names);
        let (old, new) = (cat.entry(order[k - 1]).profile.clone(), cat.entry(m.result[k - 1]).profile.clone());
        let _ = writeln!(s, "mutate at T{k}: ({old}) ↦ ({new})");
        let _ = writeln!(s, "  {}", m.left.render(&cat));
        let _ = writeln!(s, "  {}", m.right.render(&cat));
        let _ = writeln!(s, "  new cluster variable: {var}");
        steps.push(json!({
            "k": k,
            "removed": old,
            "added": new,
            "left": m.left.summary(&cat),
            "right": m.right.summary(&cat),
            "variable": var,
        }));
        order = m.result;
    }
    let d = exchange_data(&cat, &order)?;
    if cfg.emit == Emit::Json {
        return Ok(json!({
            "type": cat.dynkin().to_string(),
            "steps": steps,
            "result": order.iter().map(|&i| cat.entry(i).profile.clone()).collect::<Vec<_>>(),
            "b_circ": d.b_circ,
        })
        .to_string());
    }
    s.push_str("result:\n");
    for (i, &id) in order.iter().enumerate() {
        let _ = writeln!(s, "  T{} = {}", i + 1, cat.entry(id).profile);
    }
    s.push_str(&matrix_block("B(T)°", &d.b_circ));
    Ok(s)
}

fn graph(cfg: &Config) -> Result<String> {
    let cat = cfg.catalog()?;
    if cat.dynkin().rank() > 3 && !cfg.deep {
        return Err(Error::Invalid(format!("the {} exchange graph is large; pass --deep", cat.dynkin())));
    }
    let t = initial_module(&cat)?;
    let progress = |v: usize, f: usize| eprintln!("{v} vertices, frontier {f}");
    let g = exchange_graph(&cat, &t, GraphOptions::default(), Some(&progress))?;
    Ok(match cfg.emit {
        Emit::Dot => g.to_dot(&cat),
        Emit::Json => g.to_json(&cat).to_string(),
        Emit::Table => {
            let mut s = format!("{} vertices, {} edges\n", g.vertices.len(), g.edges().len());
            for l in g.tally.counts.iter().map(|(k, &(p, f))| {
                format!("{} {k} {p}/{}", if f == 0 { "PASS" } else { "FAIL" }, p + f)
            }) {
                let _ = writeln!(s, "{l}");
            }
            s
        }
    })
}

/// Output and whether every check passed.
fn verify(cfg: &Config, suite: &str) -> Result<(String, bool)> {
    if !SUITES.contains(&suite) {
        return Err(Error::Invalid(format!("unknown suite {suite}; expected one of {}", SUITES.join(", "))));
    }
    let opts = VerifyOptions { deep: cfg.deep, seed: cfg.seed, cap: cfg.cap };
    let v = Verifier::new(cfg.dynkin()?, opts)?;
    let r = v.run(suite)?;
    if cfg.emit == Emit::Json {
        return Ok((serde_json::to_string(&r).expect("report serializes"), r.passed()));
    }
    let mut s = String::new();
    for l in r.lines() {
        let _ = writeln!(s, "{l}");
    }
    for f in &r.tally.failures {
        let _ = writeln!(s, "  {f}");
    }
    let _ = writeln!(s, "{} {} {}", r.dynkin, suite, if r.passed() { "passed" } else { "FAILED" });
    Ok((s, r.passed()))
}

fn phi(cfg: &Config, module: &str, word: &[usize]) -> Result<String> {
    let cat = cfg.catalog()?;
    let (m, _) = parse_module(&cat, module)?;
    if m.total_dim() > MAX_PHI_DIM {
        return Err(Error::TooLarge(format!("total dimension {} exceeds {MAX_PHI_DIM}", m.total_dim())));
    }
    let pattern = if word.is_empty() {
        w0_pattern(cat.dynkin())?
    } else {
        let n = cat.dynkin().rank();
        word.iter().map(|&v| if v == 0 || v > n { Err(Error::OutOfRange(v, n)) } else { Ok(v - 1) }).collect::<Result<_>>()?
    };
    let p = phi_evaluate(&m, &pattern)?;
    Ok(if cfg.emit == Emit::Json { p.to_json().to_string() } else { format!("{p}\n") })
}

fn serve(port: u16, origin: Option<String>) -> Result<String> {
    let rt = tokio::runtime::Runtime::new().map_err(|e| Error::Invalid(e.to_string()))?;
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    eprintln!("listening on http://{addr}");
    rt.block_on(ppalg_explorer::serve(addr, origin)).map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(String::new())
}

fn run(cli: &Cli) -> Result<(String, bool)> {
    let cfg = &cli.config;
    if cfg.cap < 3 {
        return Err(Error::Invalid(format!("--cap must be at least 3, got {}", cfg.cap)));
    }
    cfg.field()?;
    let out = match &cli.command {
        Command::Build => build(cfg)?,
        Command::Catalog => catalog(cfg)?,
        Command::RigidCheck { module } => rigid_check(cfg, module)?,
        Command::Mutate { sequence } => mutate_walk(cfg, sequence)?,
        Command::ExchangeGraph => graph(cfg)?,
        Command::Verify { suite } => return verify(cfg, suite),
        Command::Phi { module, word } => phi(cfg, module, word)?,
        Command::Serve { port, origin } => serve(*port, origin.clone())?,
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("PPALG_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(&cli) {
        Ok((out, ok)) => {
            let written = match &cli.config.out {
                Some(path) => std::fs::write(path, &out).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{out}");
                    if !out.is_empty() && !out.ends_with('\n') {
                        println!();
                    }
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
