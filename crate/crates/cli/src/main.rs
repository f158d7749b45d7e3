mod store;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hallforge::dh::element_rows;
use hallforge::verify::{run_suites, Suite, VerifyConfig};
use hallforge::{
    Budget, Coeff, ComplexLiteral, CoproductVariant, DHAlgebra, DHElement, HallAlgebra, HallError, HallSym, IsoLabel,
    KClass, LinComb, PairingVariant, Quiver, RepCategory, DEFAULT_BUDGET,
};
use serde_json::{json, Value};

use crate::store::FileStore;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "hallforge", version, about = "Exact Hall algebra computations for small quivers over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite to run (repeatable); all suites if omitted.
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
    /// Export multiplication, coproduct and pairing tables as JSON.
    Table {
        #[command(flatten)]
        common: Common,
    },
    /// Decompose a complex given as JSON (inline or a file path).
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        complex: String,
    },
    /// Multiply two basis symbols.
    Mul {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "star")]
        product: Product,
        left: String,
        right: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Product {
    /// `[A] <> [B]`; symbols like `(1,0)#0`.
    Diamond,
    /// twisted product; symbols like `[(1,0)#0]K(1,-1)`.
    Star,
    /// product of complexes; symbols `E..`, `F..`, `C..`, `C*..`, `K(..)`, `K*(..)`.
    Dh,
}

#[derive(Args)]
struct Common {
    /// Fixture name (a1, a2, kronecker) or path to a quiver JSON file.
    #[arg(long, default_value = "a2")]
    quiver: String,
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Bound on total dimension.
    #[arg(long = "max-dim", default_value_t = 2)]
    max_dim: usize,
    /// K-exponents range over [-kgrid, kgrid] per vertex.
    #[arg(long, default_value_t = 2)]
    kgrid: i64,
    /// Largest enumeration allowed.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long = "cache-dir", env = "HALLFORGE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache directory.
    #[arg(long = "no-cache")]
    no_cache: bool,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Budget(String),
    Other(String),
}

impl From<HallError> for Failure {
    fn from(e: HallError) -> Self {
        match e {
            HallError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            HallError::UnsupportedField(_)
            | HallError::UnknownFixture(_)
            | HallError::InvalidQuiver(_)
            | HallError::CyclicQuiver
            | HallError::Parse(_)
            | HallError::NotAComplex(_)
            | HallError::NotProjective(_)
            | HallError::DimensionMismatch(_)
            | HallError::NotKFree => Failure::Usage(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn load_quiver(spec: &str) -> Result<Quiver, Failure> {
    match Quiver::fixture(spec) {
        Ok(q) => Ok(q),
        Err(HallError::UnknownFixture(_)) if Path::new(spec).is_file() => {
            let text = std::fs::read_to_string(spec).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
            Ok(Quiver::from_json(&text)?)
        }
        Err(e) => Err(e.into()),
    }
}

fn open_category(c: &Common) -> Result<(RepCategory, Option<Arc<FileStore>>), Failure> {
    if c.kgrid < 0 {
        return Err(Failure::Usage("kgrid must be nonnegative".into()));
    }
    let quiver = load_quiver(&c.quiver)?;
    let mut cat = RepCategory::new(quiver, c.q)?.with_budget(Budget(c.budget));
    let mut store = None;
    if let (Some(dir), false) = (&c.cache_dir, c.no_cache) {
        let s = Arc::new(FileStore::open(dir).map_err(|e| Failure::Usage(format!("cache dir {}: {e}", dir.display())))?);
        cat = cat.with_store(s.clone());
        store = Some(s);
    }
    Ok((cat, store))
}

fn emit(c: &Common, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    match &c.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Other(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn rows<K: Ord + Clone + std::fmt::Display>(x: &LinComb<K>) -> Value {
    Value::Array(x.iter().map(|(k, c)| json!([k.to_string(), c.to_string()])).collect())
}

fn cmd_verify(common: &Common, suites: &[String]) -> Outcome {
    if common.max_dim == 0 {
        return Err(Failure::Usage("--max-dim must be at least 1".into()));
    }
    let suites: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites.iter().map(|s| s.parse::<Suite>()).collect::<Result<_, _>>()?
    };
    let (cat, store) = open_category(common)?;
    let cfg = VerifyConfig { max_dim: common.max_dim, kgrid: common.kgrid };
    let start = Instant::now();
    let report = run_suites(&cat, &suites, &cfg);
    let (hits, misses, store_hits) = cat.stats.snapshot();
    let mut value = serde_json::to_value(&report).expect("serializable");
    value["runtime"] = json!({
        "elapsed_ms": start.elapsed().as_millis() as u64,
        "memo_hits": hits,
        "memo_misses": misses,
        "store_hits": store_hits,
        "corrupt_cache_entries": store.map_or(0, |s| s.corrupt_entries()),
    });
    emit(common, &value)?;
    for s in &report.suites {
        let verdict = if s.passed() { "PASS" } else { "FAIL" };
        eprintln!("{verdict} {}", s.suite);
    }
    Ok(if report.budget_exceeded {
        EXIT_BUDGET
    } else if report.passed {
        0
    } else {
        EXIT_FAIL
    })
}

fn cmd_table(common: &Common) -> Outcome {
    let (cat, _) = open_category(common)?;
    let h = HallAlgebra::new(&cat);
    let dh = DHAlgebra::new(&cat);
    let labels = cat.labels_up_to(common.max_dim)?;
    let mut records = Vec::new();
    for a in &labels {
        for b in &labels {
            if a.total_dim() + b.total_dim() > common.max_dim {
                continue;
            }
            let (x, y) = (h.basis(a), h.basis(b));
            records.push(json!({"op": "diamond", "left": a.to_string(), "right": b.to_string(), "result": rows(&h.diamond(&x, &y)?)}));
            records.push(json!({"op": "star", "left": a.to_string(), "right": b.to_string(), "result": rows(&h.star(&x, &y)?)}));
            let e = dh.mul(&dh.e(a)?, &dh.f(b)?)?;
            records.push(json!({"op": "dh", "left": format!("E{a}"), "right": format!("F{b}"), "result": rows(&e)}));
            let c = dh.mul(&dh.complex_term(a, &cat.zero_label()), &dh.complex_term(&cat.zero_label(), b))?;
            records.push(json!({"op": "dh", "left": format!("C{a}"), "right": format!("C*{b}"), "result": rows(&c)}));
            let p = h.pairing(&x, &y, PairingVariant::Aut)?;
            records.push(json!({"op": "pairing", "left": a.to_string(), "right": b.to_string(), "result": p.to_string()}));
        }
    }
    for a in &labels {
        let d = h.coproduct(&h.basis(a), CoproductVariant::Green)?;
        let result: Vec<Value> = d.iter().map(|((l, r), c)| json!([l.to_string(), r.to_string(), c.to_string()])).collect();
        records.push(json!({"op": "coproduct", "left": a.to_string(), "result": result}));
    }
    let value = json!({
        "schema_version": hallforge::verify::SCHEMA_VERSION,
        "quiver": cat.quiver().canonical_key(),
        "q": cat.q(),
        "max_dim": common.max_dim,
        "coefficients": "a + b*t with t^2 = q",
        "coproduct": CoproductVariant::Green.name(),
        "pairing": PairingVariant::Aut.name(),
        "labels": labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "records": records,
    });
    emit(common, &value)?;
    Ok(0)
}

fn cmd_decompose(common: &Common, complex: &str) -> Outcome {
    let (cat, _) = open_category(common)?;
    let text = if Path::new(complex).is_file() {
        std::fs::read_to_string(complex).map_err(|e| Failure::Usage(format!("{complex}: {e}")))?
    } else {
        complex.to_string()
    };
    let lit: ComplexLiteral = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("complex literal: {e}")))?;
    let m = lit.build(cat.field(), cat.quiver())?;
    let dh = DHAlgebra::new(&cat);
    let d = dh.complexes().decompose(&m)?;
    let nf = dh.normalize_class(&d.class, &Coeff::from_int(1));
    let value = json!({
        "exponent": d.exponent,
        "homology": [d.class.a.to_string(), d.class.b.to_string()],
        "p": d.class.p,
        "q": d.class.q,
        "class": d.class.to_string(),
        "normal_form": rows(&nf),
    });
    emit(common, &value)?;
    Ok(0)
}

fn parse_class(s: &str) -> Result<KClass, Failure> {
    let inner = s
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| Failure::Usage(format!("class '{s}' must look like (1,-1)")))?;
    inner
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("class '{s}'"))))
        .collect()
}

/// `[(1,0)#0]`, `[(1,0)#0]K(1,-1)`, `K(1,-1)` or a bare label.
fn parse_hall_symbol(cat: &RepCategory, s: &str) -> Result<HallSym, Failure> {
    let n = cat.num_vertices();
    let (label, k) = if let Some(rest) = s.strip_prefix('[') {
        let (l, tail) = rest.split_once(']').ok_or_else(|| Failure::Usage(format!("symbol '{s}'")))?;
        (l.parse::<IsoLabel>()?, tail)
    } else if s.starts_with('K') {
        (IsoLabel::zero(n), s)
    } else {
        (s.parse::<IsoLabel>()?, "")
    };
    let k = match k.strip_prefix('K') {
        Some(c) => parse_class(c)?,
        None if k.is_empty() => vec![0; n],
        None => return Err(Failure::Usage(format!("symbol '{s}'"))),
    };
    check_len(n, &[label.dimvec.len(), k.len()])?;
    Ok(HallSym { label, k })
}

fn check_len(n: usize, lens: &[usize]) -> Result<(), Failure> {
    if lens.iter().any(|&l| l != n) {
        return Err(Failure::Usage(format!("expected {n} entries per vector")));
    }
    Ok(())
}

fn parse_dh_symbol(dh: &DHAlgebra, s: &str) -> Result<DHElement, Failure> {
    let cat = dh.category();
    let n = cat.num_vertices();
    let label = |x: &str| -> Result<IsoLabel, Failure> {
        let l = x.parse::<IsoLabel>()?;
        check_len(n, &[l.dimvec.len()])?;
        Ok(l)
    };
    let class = |x: &str| -> Result<KClass, Failure> {
        let c = parse_class(x)?;
        check_len(n, &[c.len()])?;
        Ok(c)
    };
    let zero = cat.zero_label();
    Ok(if let Some(x) = s.strip_prefix("K*") {
        dh.k_minus(&class(x)?)
    } else if let Some(x) = s.strip_prefix('K') {
        dh.k_plus(&class(x)?)
    } else if let Some(x) = s.strip_prefix("C*") {
        dh.complex_term(&zero, &label(x)?)
    } else if let Some(x) = s.strip_prefix('C') {
        dh.complex_term(&label(x)?, &zero)
    } else if let Some(x) = s.strip_prefix('E') {
        dh.e(&label(x)?)?
    } else if let Some(x) = s.strip_prefix('F') {
        dh.f(&label(x)?)?
    } else {
        return Err(Failure::Usage(format!("symbol '{s}': expected E, F, C, C*, K or K* prefix")));
    })
}

fn cmd_mul(common: &Common, product: Product, left: &str, right: &str) -> Outcome {
    let (cat, _) = open_category(common)?;
    let result = match product {
        Product::Diamond | Product::Star => {
            let h = HallAlgebra::new(&cat);
            let x = LinComb::basis(parse_hall_symbol(&cat, left)?);
            let y = LinComb::basis(parse_hall_symbol(&cat, right)?);
            match product {
                Product::Diamond => rows(&h.diamond(&x, &y)?),
                _ => rows(&h.star(&x, &y)?),
            }
        }
        Product::Dh => {
            let dh = DHAlgebra::new(&cat);
            let x = parse_dh_symbol(&dh, left)?;
            let y = parse_dh_symbol(&dh, right)?;
            let r = dh.mul(&x, &y)?;
            Value::Array(element_rows(&r).into_iter().map(|(k, c)| json!([k, c])).collect())
        }
    };
    emit(common, &json!({"left": left, "right": right, "result": result}))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify { common, suites } => cmd_verify(common, suites),
        Command::Table { common } => cmd_table(common),
        Command::Decompose { common, complex } => cmd_decompose(common, complex),
        Command::Mul { common, product, left, right } => cmd_mul(common, *product, left, right),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_BUDGET)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
