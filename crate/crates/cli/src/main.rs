use std::io::Read;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use llv_core::arithmetic::{arithmetic_search, lagrangian_chern};
use llv_core::lattice::orbit_invariants_equal;
use llv_core::lines::{chern_isotropic_k32, chern_phio, phio_h_with_square, ChernData};
use llv_core::verify::run_verify_with;
use llv_core::monodromy::{bkr_bundle_c1, chi_involution, ek_pipeline, fz_bundle_c1};
use llv_core::{fmt_q, parse_q, q, run_verify, Error, LLVSpace, LLVVector, ObjectSpec, Preset, Q};
use serde_json::Value;

const PRESETS: &str = "\
Preset lattices (H² bases, in order):
  K3          U³ ⊕ E8(−1)²      labels e1 f1 e2 f2 e3 f3 x1..x8 y1..y8
  HilbK3 n    K3 ⊕ ⟨2−2n⟩       extra label delta
  Kum n       U³ ⊕ ⟨−2n−2⟩      labels e1 f1 e2 f2 e3 f3 delta
Vectors are written as integer or p/q combinations, e.g. \"2*e1+3*f1-delta\".

Families for `ell` (JSON object, keys `type` and `n` default to HilbK3, 2):
  {\"family\":\"StructureSheaf\"}
  {\"family\":\"Skyscraper\"}
  {\"family\":\"Lagrangian\",\"lambda\":VEC,\"t\":Q}       or \"chiZ\":INT instead of t
  {\"family\":\"PhiO\",\"r0\":INT,\"h\":VEC}
  {\"family\":\"Isotropic\",\"r0\":INT,\"h\":VEC}
  {\"family\":\"KappaTriple\",\"x\":Q,\"y\":Q,\"z\":Q,\"c1\":VEC}
Rationals are JSON integers or strings \"p/q\".

Exit codes: 0 ok, 1 verification failure, 2 domain error, 3 parse error.";

#[derive(Parser)]
#[command(name = "llv", version, about = "Exact LLV lattice computations for K3^[n] and Kummer type", after_help = PRESETS)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// LLV line of an object given as a JSON document, a file path, or `-` for stdin.
    #[command(after_help = PRESETS)]
    Ell { spec: String },
    /// Chern data and Euler characteristic on K3^[2].
    Chern(ChernArgs),
    /// Admissibility search for lagrangian surface classes.
    Search {
        #[arg(long)]
        max_lambda_sq: i64,
        #[arg(long)]
        max_c: String,
        /// Divisibilities to include (comma separated).
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u8, 2])]
        div: Vec<u8>,
    },
    /// Derived-monodromy constructions.
    Monodromy(MonodromyArgs),
    /// Lattice invariants of a preset and its vectors.
    #[command(after_help = PRESETS)]
    Lattice(LatticeArgs),
    /// Replay the golden-value table.
    Verify {
        /// JSON file holding an 8×8 replacement for the E8(−1) Gram block.
        #[arg(long, hide = true)]
        e8_gram: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ChernFamily {
    #[value(name = "phiO")]
    PhiO,
    Isotropic,
    Lagrangian,
}

#[derive(Args)]
struct ChernArgs {
    #[arg(long, value_enum)]
    family: ChernFamily,
    #[arg(long)]
    r0: Option<i64>,
    /// Class h (or λ for lagrangian) as a combination of basis labels.
    #[arg(long, conflicts_with = "h_sq")]
    h: Option<String>,
    /// Square of h (or λ); a representative is chosen.
    #[arg(long)]
    h_sq: Option<String>,
    /// χ(Z) for the lagrangian family.
    #[arg(long)]
    chi_z: Option<i64>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("construction").required(true).multiple(false)))]
struct MonodromyArgs {
    /// E_k pipeline for the given k.
    #[arg(long, group = "construction")]
    ek: Option<i64>,
    /// χ-involution on K3^[n].
    #[arg(long, group = "construction")]
    chi: Option<u32>,
    /// BKR bundle of rank r₀ on K3^[n].
    #[arg(long, group = "construction")]
    bkr: Option<i64>,
    /// Fourier transform bundle of rank r₀ on K3^[n].
    #[arg(long, group = "construction")]
    fz: Option<i64>,
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// c₁ on the K3 (bkr) or λ (fz), in K3 labels.
    #[arg(long, default_value = "0")]
    class: String,
    /// Sign character for bkr.
    #[arg(long, default_value = "plus", value_parser = ["plus", "minus"])]
    sign: String,
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long, default_value = "HilbK3")]
    preset: String,
    #[arg(long)]
    n: Option<u32>,
    /// H² vector to inspect.
    #[arg(long)]
    vector: Option<String>,
    /// LLV vector as `r;h;s`.
    #[arg(long)]
    mukai: Option<String>,
    /// Compare the orbit invariants of two H² vectors.
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    orbit: Option<Vec<String>>,
}

enum Failure {
    Verify,
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::UnknownPreset(_) => 3,
        _ => 2,
    }
}

type Out = Vec<(String, Value)>;

fn emit(json: bool, rows: Out) {
    if json {
        let map: serde_json::Map<String, Value> = rows.into_iter().collect();
        println!("{}", serde_json::to_string_pretty(&Value::Object(map)).expect("serializable"));
    } else {
        for (k, v) in rows {
            match v {
                Value::String(s) => println!("{k}: {s}"),
                Value::Array(items) => {
                    println!("{k}:");
                    for i in items {
                        match i {
                            Value::String(s) => println!("  {s}"),
                            other => println!("  {other}"),
                        }
                    }
                }
                other => println!("{k}: {other}"),
            }
        }
    }
}

fn row(k: &str, v: impl Into<Value>) -> (String, Value) {
    (k.to_string(), v.into())
}

fn read_spec(arg: &str) -> Result<String, Error> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

fn cmd_ell(json: bool, spec: &str) -> Result<(), Failure> {
    let text = read_spec(spec)?;
    let spec = ObjectSpec::from_json(&text)?;
    let report = spec.evaluate()?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        return Ok(());
    }
    let mut out: Out = vec![
        row("family", report.family),
        row("space", report.space),
        row("generator", report.generator),
        row("square", report.square),
    ];
    if let Some(m) = report.in_integral_lattice {
        out.push(row("in Lambda_X", m.to_string()));
    }
    if let Some(d) = report.div_in_integral_lattice {
        out.push(row("div in Lambda_X", d));
    }
    if !report.congruences.is_empty() {
        let c: Vec<Value> = report
            .congruences
            .iter()
            .map(|c| format!("{} {}: {}", if c.holds { "ok  " } else { "FAIL" }, c.condition, c.detail).into())
            .collect();
        out.push(row("congruences", c));
    }
    for a in report.alternatives {
        out.push(row(&a.name, a.vector));
    }
    if !report.notes.is_empty() {
        out.push(row("notes", report.notes.into_iter().map(Value::from).collect::<Vec<_>>()));
    }
    emit(false, out);
    Ok(())
}

fn chern_rows(space: &LLVSpace, data: &ChernData, generator: &LLVVector, square: &Q) -> Out {
    vec![
        row("rank", fmt_q(&data.rank)),
        row("chi", fmt_q(&data.chi)),
        row("line", generator.render(&space.h2.labels)),
        row("line square", fmt_q(square)),
    ]
}

fn cmd_chern(json: bool, a: &ChernArgs) -> Result<(), Failure> {
    let space = LLVSpace::hilb(2)?;
    let need_r0 = || a.r0.ok_or_else(|| Error::Parse("--r0 is required for this family".into()));
    let vector = |r0: i64, for_phio: bool| -> Result<Vec<Q>, Error> {
        match (&a.h, &a.h_sq) {
            (Some(h), _) => space.h2.parse_vector(h),
            (None, Some(sq)) if for_phio => phio_h_with_square(&space, r0, &parse_q(sq)?),
            (None, Some(sq)) => space.vector_with_square(&parse_q(sq)?),
            (None, None) => Err(Error::Parse("one of --h or --h-sq is required".into())),
        }
    };
    let mut out: Out = Vec::new();
    match a.family {
        ChernFamily::PhiO => {
            let r0 = need_r0()?;
            let h = vector(r0, true)?;
            let c = chern_phio(&space, r0, &h)?;
            out.push(row("family", "phiO"));
            out.push(row("r0", r0.to_string()));
            out.push(row("h", space.h2.render(&h)));
            out.push(row("h square", fmt_q(&space.h2.pair(&h, &h)?)));
            out.extend(chern_rows(&space, &c.data, &c.line.line.generator, &c.line.line.square));
            out.push(row("kappa", format!("({}, {}, {})", fmt_q(&c.kappa.x), fmt_q(&c.kappa.y), fmt_q(&c.kappa.z))));
        }
        ChernFamily::Isotropic => {
            let r0 = need_r0()?;
            let h = vector(r0, false)?;
            let c = chern_isotropic_k32(&space, r0, &h)?;
            out.push(row("family", "isotropic"));
            out.push(row("r0", r0.to_string()));
            out.push(row("h", space.h2.render(&h)));
            out.push(row("h square", fmt_q(&space.h2.pair(&h, &h)?)));
            out.extend(chern_rows(&space, &c.data, &c.line.line.generator, &c.line.line.square));
        }
        ChernFamily::Lagrangian => {
            let chi = a.chi_z.ok_or_else(|| Error::Parse("--chi-z is required for lagrangian".into()))?;
            let lam = vector(0, false)?;
            let l = lagrangian_chern(&space, &lam, chi)?;
            out.push(row("family", "lagrangian"));
            out.push(row("lambda", space.h2.render(&lam)));
            out.push(row("lambda square", fmt_q(&l.data.lambda_sq)));
            out.push(row("chi(Z)", chi.to_string()));
            out.push(row("c", fmt_q(&l.data.c)));
            out.push(row("t", fmt_q(&l.data.t)));
            out.push(row("chi(O_Z)", fmt_q(&l.data.chi_oz)));
        }
    }
    emit(json, out);
    Ok(())
}

fn cmd_search(json: bool, max_lambda_sq: i64, max_c: &str, div: &[u8]) -> Result<(), Failure> {
    let bound = parse_q(max_c)?;
    let rows = arithmetic_search(max_lambda_sq, &bound, div)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&rows).expect("serializable"));
        return Ok(());
    }
    println!("lambda_sq, c, t, div, chi_Z, chi_O_Z");
    for r in &rows {
        println!("{}, {}, {}, {}, {}, {}", r.lambda_sq, fmt_q(&r.c), fmt_q(&r.t), r.div, r.chi_z, fmt_q(&r.chi_oz));
    }
    println!("{} rows", rows.len());
    Ok(())
}

fn cmd_monodromy(json: bool, a: &MonodromyArgs) -> Result<(), Failure> {
    let mut out: Out = Vec::new();
    if let Some(k) = a.ek {
        let e = ek_pipeline(k)?;
        let s = LLVSpace::hilb(2)?;
        let l = &s.h2.labels;
        out.push(row("k", k.to_string()));
        out.push(row("h~", s.h2.render(&e.h_tilde)));
        out.push(row("lambda", s.h2.render(&e.lambda)));
        out.push(row("twisted", e.twisted.render(l)));
        out.push(row("after phi_P", e.after_phi_p.render(l)));
        out.push(row("after chi", e.after_chi.render(l)));
        out.push(row("rank", fmt_q(&e.rank)));
        out.push(row("c1", s.h2.render(&e.c1)));
        out.push(row("line", e.generator.render(l)));
        out.push(row("stated c1", s.h2.render(&e.stated_c1)));
        out.push(row("stated c1 matches", e.c1_matches_stated.to_string()));
    } else if let Some(n) = a.chi {
        let s = LLVSpace::hilb(n)?;
        let c = chi_involution(&s)?;
        let (det, orient) = c.det_and_orientation();
        out.push(row("n", n.to_string()));
        out.push(row("det", det.to_string()));
        out.push(row("orientation", orient.to_string()));
        out.push(row("preserves Lambda_X", c.preserves_integral_llv()?.to_string()));
        let img: Vec<Value> = (0..s.dim())
            .map(|i| {
                let mut v = vec![q(0); s.dim()];
                v[i] = q(1);
                c.apply(&LLVVector::from_coords(&v)).map(|w| w.render(&s.h2.labels).into())
            })
            .collect::<Result<_, _>>()?;
        out.push(row("columns", img));
    } else {
        let k3 = LLVSpace::k3();
        let cl = k3.h2.parse_vector(&a.class)?;
        let r0 = a.bkr.or(a.fz).expect("clap group");
        let s = LLVSpace::hilb(a.n)?;
        if a.bkr.is_some() {
            let sign = if a.sign == "plus" { llv_core::BkrSign::Plus } else { llv_core::BkrSign::Minus };
            let b = bkr_bundle_c1(r0, &cl, a.n, sign)?;
            out.push(row("rank", fmt_q(&b.rank)));
            out.push(row("c1", s.h2.render(&b.c1)));
            out.push(row("t", fmt_q(&b.t)));
            out.push(row("s", fmt_q(&b.s)));
            out.push(row("line", b.line.generator.render(&s.h2.labels)));
        } else {
            let f = fz_bundle_c1(r0, &cl, a.n)?;
            out.push(row("rank", fmt_q(&f.rank)));
            out.push(row("c1", s.h2.render(&f.c1)));
            out.push(row("line", f.line.generator.render(&s.h2.labels)));
            out.push(row("matches isotropic line", f.matches_isotropic.to_string()));
        }
    }
    emit(json, out);
    Ok(())
}

fn cmd_lattice(json: bool, a: &LatticeArgs) -> Result<(), Failure> {
    let s = LLVSpace::from_preset(Preset::parse(&a.preset, a.n)?)?;
    let (p, m, z) = s.h2.signature();
    let mut out: Out = vec![
        row("name", s.h2.name.clone()),
        row("rank", s.rank().to_string()),
        row("signature", format!("({p},{m},{z})")),
        row("even", s.h2.is_even().to_string()),
        row("fujiki constant", fmt_q(&s.fujiki)),
        row("labels", s.h2.labels.join(" ")),
    ];
    if let Some(v) = &a.vector {
        let x = s.h2.parse_vector(v)?;
        out.push(row("vector", s.h2.render(&x)));
        out.push(row("square", fmt_q(&s.h2.pair(&x, &x)?)));
        let integral = x.iter().all(|c| c.is_integer());
        out.push(row("integral", integral.to_string()));
        if integral && x.iter().any(|c| *c != q(0)) {
            out.push(row("div", s.h2.divisibility(&x)?.to_string()));
            out.push(row("primitive", s.h2.is_primitive(&x)?.to_string()));
        }
    }
    if let Some(m) = &a.mukai {
        let parts: Vec<&str> = m.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::Parse("--mukai expects `r;h;s`".into()).into());
        }
        let h = if parts[1].trim().is_empty() { vec![q(0); s.rank()] } else { s.h2.parse_vector(parts[1])? };
        let x = s.triple(parse_q(parts[0])?, h, parse_q(parts[2])?);
        out.push(row("llv vector", x.render(&s.h2.labels)));
        out.push(row("llv square", fmt_q(&s.square(&x)?)));
        let member = s.in_integral_llv(&x)?;
        out.push(row("in Lambda_X", member.to_string()));
        if member && !x.is_zero() {
            out.push(row("div in Lambda_X", s.div_in_integral_llv(&x)?.to_string()));
        }
    }
    if let Some(o) = &a.orbit {
        let x = s.h2.parse_vector(&o[0])?;
        let y = s.h2.parse_vector(&o[1])?;
        out.push(row("same orbit invariants", orbit_invariants_equal(&s.h2, &x, &y)?.to_string()));
    }
    emit(json, out);
    Ok(())
}

fn cmd_verify(json: bool, e8: Option<&str>) -> Result<(), Failure> {
    let report = match e8 {
        None => run_verify(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            let g: [[i64; 8]; 8] =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("e8 gram: {e}")))?;
            run_verify_with(&g)
        }
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        for c in &report.checks {
            if c.passed {
                println!("PASS {}", c.name);
            } else {
                println!("FAIL {}: expected {}, got {}", c.name, c.expected, c.actual);
            }
        }
        if report.all_passed() {
            println!("all {} checks passed", report.total);
        } else {
            println!("{} of {} checks failed", report.failed, report.total);
        }
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let j = cli.json;
    let res = match &cli.cmd {
        Cmd::Ell { spec } => cmd_ell(j, spec),
        Cmd::Chern(a) => cmd_chern(j, a),
        Cmd::Search { max_lambda_sq, max_c, div } => cmd_search(j, *max_lambda_sq, max_c, div),
        Cmd::Monodromy(a) => cmd_monodromy(j, a),
        Cmd::Lattice(a) => cmd_lattice(j, a),
        Cmd::Verify { e8_gram } => cmd_verify(j, e8_gram.as_deref()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
