//! Command-line front end. Every subcommand writes one JSON document (or a
//! text rendering) to `out`; diagnostics go to `err`.
//!
//! Exit codes: 0 success, 1 unparsable input, 2 violated precondition,
//! 3 resource cap exceeded.

use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::BaseAlgebra;
use crate::error::{Error, Result};
use crate::hallbasis::HallBasis;
use crate::ncpoly::{parse_rational, CommPoly, LocalizedElement, NCPoly};
use crate::pbw::{
    extract_c_operator, formal_section_mul, pbw_normalize, truncated_mul, BilinearOperator, BracketMonomial,
    FormalSection, OperatorTable, PBWElement,
};
use crate::matrix::Matrix;
use crate::quiver::{
    check_localization_point, enumerate_dimvectors, euler_form, euler_form_extended, extend_quiver,
    extend_rep_with_inverse, localization_data, Quiver, QuiverRep,
};
use crate::repscheme::{decompose_rep_quiver, relation_ideal, variable_names, Presentation};
use crate::rootalg::{lower, raise, random_matrix_map, root_presentation, RootKind};
use crate::sample;
use crate::selftest;
use crate::strata::{build_tilde_rep, enumerate_substrata, fiber_setting_report, stratum_dimension};

pub const SCHEMA: &str = "ncformal/1";

#[derive(Parser, Debug)]
#[command(name = "ncformal", version, about = "Formal structure of noncommutative manifolds, computed exactly")]
struct Cli {
    /// Output format; defaults to json (text for selftest)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest Hall basis weight any command may build
    #[arg(long, global = true, default_value_t = 8)]
    max_weight: usize,
    /// Largest polynomial degree or interpolation bound accepted
    #[arg(long, global = true, default_value_t = 10)]
    max_degree: usize,
    /// Largest matrix size or module dimension accepted
    #[arg(long, global = true, default_value_t = 6)]
    max_n: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the Hall basis of the free Lie algebra up to a weight
    HallBasis {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        weight: usize,
    },
    /// Normal form of a noncommutative polynomial in the PBW basis
    PbwNormalize {
        #[arg(long)]
        d: usize,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Product in the truncation modulo F^{-K}; operands are polynomials or PBW JSON
    TruncMul {
        #[arg(long)]
        d: usize,
        #[arg(long = "K")]
        k: usize,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Extract the bilinear operator C_{λμ}^ν by interpolation
    ExtractOp {
        #[arg(long)]
        d: usize,
        /// JSON list of basis indices
        #[arg(long, default_value = "[]")]
        lambda: String,
        #[arg(long, default_value = "[]")]
        mu: String,
        #[arg(long)]
        nu: String,
        #[arg(long, default_value_t = 5)]
        bound: u32,
        /// Hall basis weight used for indices and straightening
        #[arg(long, default_value_t = 4)]
        weight: usize,
    },
    /// Product of sections over the basic open of a center polynomial
    SectionMul {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        center: String,
        #[arg(long = "K")]
        k: usize,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Euler form of the extended quiver
    Euler {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',')]
        beta: Option<Vec<i64>>,
    },
    /// The extended quiver, optionally with the inverse arrows
    Extend {
        #[arg(long)]
        quiver: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        inverse: bool,
    },
    /// Dimension vectors with k entries and total n
    Dimvectors {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Check the localization relations at a representation of the localized quiver
    CheckLocalization {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        n: usize,
        /// Build a random base representation of this dimension vector and its tilde extension
        #[arg(long, value_delimiter = ',', conflicts_with = "rep")]
        alpha: Option<Vec<usize>>,
        /// Representation JSON {"dims": [...], "maps": [[["1", "0"], ...], ...]}
        #[arg(long)]
        rep: Option<String>,
    },
    /// Ideal of rep_n A from a presentation
    RepIdeal {
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        n: usize,
    },
    /// Decomposition of rep_n of a path algebra by dimension vector
    RepDecompose {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        n: usize,
    },
    /// Presentation of the n-th root algebra
    Root(RootArgs),
    /// Randomized round trips between matrix maps and root maps
    RootRoundtrip {
        #[command(flatten)]
        kind: RootArgs,
        #[arg(long, value_enum, default_value_t = AlgebraChoice::M2)]
        algebra: AlgebraChoice,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Substrata of iss_m with dimensions and local quiver settings
    Strata {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Report only this substratum (1-based) with its fiber setting
        #[arg(long)]
        local_quiver: Option<usize>,
    },
    /// Run the acceptance checks
    Selftest {
        /// Run a single criterion
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct RootArgs {
    /// Free algebra: number of generators and n
    #[arg(long, num_args = 2, value_names = ["D", "N"], conflicts_with = "quiver")]
    free: Option<Vec<usize>>,
    #[arg(long, requires = "n")]
    quiver: Option<String>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgebraChoice {
    Q,
    M2,
    Trunc3,
    Dual,
    Upper,
}

struct Ctx {
    format: Format,
    seed: u64,
    max_weight: usize,
    max_degree: usize,
    max_n: usize,
}

impl Ctx {
    fn weight_cap(&self, w: usize) -> Result<()> {
        cap("basis weight", w, self.max_weight)
    }

    fn degree_cap(&self, d: usize) -> Result<()> {
        cap("degree", d, self.max_degree)
    }

    fn n_cap(&self, n: usize) -> Result<()> {
        cap("n", n, self.max_n)
    }
}

fn cap(what: &str, value: usize, max: usize) -> Result<()> {
    if value > max {
        return Err(Error::ResourceCap(format!("{what} {value} exceeds the cap {max}")));
    }
    Ok(())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 1,
        Error::ResourceCap(_) => 3,
        _ => 2,
    }
}

fn contract_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("").to_string()
}

/// Runs one invocation; `args` excludes the program name.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = std::iter::once("ncformal".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let default_format = if matches!(cli.command, Command::Selftest { .. }) { Format::Text } else { Format::Json };
    let ctx = Ctx {
        format: cli.format.unwrap_or(default_format),
        seed: cli.seed,
        max_weight: cli.max_weight,
        max_degree: cli.max_degree,
        max_n: cli.max_n,
    };
    match dispatch(&ctx, cli.command) {
        Ok((value, text, code)) => {
            let rendered = match ctx.format {
                Format::Json => {
                    let mut v = value;
                    v["schema"] = json!(SCHEMA);
                    serde_json::to_string_pretty(&v).expect("json renders") + "\n"
                }
                Format::Text => text.unwrap_or_else(|| serde_json::to_string_pretty(&value).expect("json renders") + "\n"),
            };
            if out.write_all(rendered.as_bytes()).is_err() {
                return 2;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", contract_name(&e));
            exit_code(&e)
        }
    }
}

type Output = (Value, Option<String>, i32);

fn dispatch(ctx: &Ctx, cmd: Command) -> Result<Output> {
    match cmd {
        Command::HallBasis { d, weight } => hall_basis(ctx, d, weight),
        Command::PbwNormalize { d, poly } => pbw_normalize_cmd(ctx, d, &poly),
        Command::TruncMul { d, k, a, b } => trunc_mul(ctx, d, k, &a, &b),
        Command::ExtractOp { d, lambda, mu, nu, bound, weight } => extract_op(ctx, d, &lambda, &mu, &nu, bound, weight),
        Command::SectionMul { d, center, k, a, b } => section_mul(ctx, d, &center, k, &a, &b),
        Command::Euler { quiver, n, alpha, beta } => euler(&load_quiver(&quiver)?, n, alpha, beta),
        Command::Extend { quiver, n, inverse } => extend(ctx, &load_quiver(&quiver)?, n, inverse),
        Command::Dimvectors { k, n } => {
            ctx.n_cap(n)?;
            let v = enumerate_dimvectors(k, n);
            Ok((json!({ "k": k, "n": n, "count": v.len(), "dimvectors": v }), None, 0))
        }
        Command::CheckLocalization { quiver, n, alpha, rep } => {
            check_localization(ctx, &load_quiver(&quiver)?, n, alpha, rep)
        }
        Command::RepIdeal { presentation, n } => rep_ideal(ctx, &presentation, n),
        Command::RepDecompose { quiver, n } => {
            ctx.n_cap(n)?;
            let recs = decompose_rep_quiver(&load_quiver(&quiver)?, n)?;
            Ok((json!({ "n": n, "records": recs }), None, 0))
        }
        Command::Root(args) => root(ctx, &args),
        Command::RootRoundtrip { kind, algebra, samples } => root_roundtrip(ctx, &kind, algebra, samples),
        Command::Strata { quiver, n, m, local_quiver } => strata(ctx, &load_quiver(&quiver)?, n, m, local_quiver),
        Command::Selftest { only } => selftest_cmd(ctx, only),
    }
}

/// Inline JSON, or a path to a JSON file.
fn load(s: &str) -> Result<String> {
    if s.trim_start().starts_with(['{', '[']) {
        return Ok(s.to_string());
    }
    std::fs::read_to_string(s).map_err(|e| Error::Parse(format!("cannot read {s}: {e}")))
}

fn load_quiver(s: &str) -> Result<Quiver> {
    Quiver::from_json(&load(s)?)
}

fn parse_json(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

fn hall_basis(ctx: &Ctx, d: usize, weight: usize) -> Result<Output> {
    ctx.weight_cap(weight)?;
    let b = HallBasis::new(d, weight)?;
    let elements: Vec<Value> = (0..b.len())
        .map(|i| json!({ "index": i + 1, "sexpr": b.sexpr(i), "weight": b.weight(i), "ord": b.ord(i) }))
        .collect();
    let mut text = String::new();
    for i in 0..b.len() {
        text.push_str(&format!("{:>4}  w={}  ord={}  {}\n", i + 1, b.weight(i), b.ord(i), b.sexpr(i)));
    }
    let v = json!({ "d": d, "max_weight": weight, "layer_sizes": b.layer_sizes(), "elements": elements });
    Ok((v, Some(text), 0))
}

fn pbw_to_json(e: &PBWElement, b: &HallBasis) -> Value {
    let terms: Vec<Value> = e
        .terms()
        .map(|(m, f)| json!({ "monomial": m.to_indices(), "display": m.display(b), "coeff": f.to_string() }))
        .collect();
    json!({ "d": e.d(), "terms": terms, "display": e.display(b) })
}

fn pbw_from_json(v: &Value, b: &HallBasis) -> Result<PBWElement> {
    let d = b.d();
    let terms = v["terms"].as_array().ok_or_else(|| Error::Parse("PBW JSON needs a \"terms\" list".into()))?;
    let mut out = PBWElement::zero(d);
    for t in terms {
        let m = monomial_from_json(&t["monomial"], b)?;
        let f = t["coeff"].as_str().ok_or_else(|| Error::Parse("term needs a \"coeff\" string".into()))?;
        out.add_term(m, CommPoly::parse(f, d)?)?;
    }
    Ok(out)
}

fn monomial_from_json(v: &Value, b: &HallBasis) -> Result<BracketMonomial> {
    let idx: Vec<usize> = serde_json::from_value(v.clone())
        .map_err(|e| Error::Parse(format!("monomial must be a list of basis indices: {e}")))?;
    BracketMonomial::from_indices(&idx, b)
}

fn nc_degree(p: &NCPoly) -> usize {
    p.degree().unwrap_or(0)
}

fn pbw_normalize_cmd(ctx: &Ctx, d: usize, poly: &str) -> Result<Output> {
    let p = NCPoly::parse(poly, d)?;
    let deg = nc_degree(&p).max(1);
    ctx.degree_cap(deg)?;
    ctx.weight_cap(deg)?;
    let b = HallBasis::new(d, deg)?;
    let e = pbw_normalize(&p, &b)?;
    Ok((pbw_to_json(&e, &b), Some(e.display(&b) + "\n"), 0))
}

/// A PBW operand: JSON as printed by `pbw-normalize`, or a polynomial.
enum Operand {
    Pbw(Value),
    Poly(NCPoly),
}

fn operand(s: &str, d: usize) -> Result<Operand> {
    if s.trim_start().starts_with('{') {
        Ok(Operand::Pbw(parse_json(s)?))
    } else {
        Ok(Operand::Poly(NCPoly::parse(s, d)?))
    }
}

fn operand_weight(o: &Operand) -> usize {
    match o {
        Operand::Poly(p) => nc_degree(p),
        Operand::Pbw(v) => v["terms"]
            .as_array()
            .map(|ts| ts.iter().filter_map(|t| t["monomial"].as_array().map(Vec::len)).max().unwrap_or(0))
            .unwrap_or(0),
    }
}

fn resolve(o: Operand, b: &HallBasis) -> Result<PBWElement> {
    match o {
        Operand::Pbw(v) => pbw_from_json(&v, b),
        Operand::Poly(p) => pbw_normalize(&p, b),
    }
}

fn trunc_mul(ctx: &Ctx, d: usize, k: usize, a: &str, b: &str) -> Result<Output> {
    let (oa, ob) = (operand(a, d)?, operand(b, d)?);
    let w = k.max(operand_weight(&oa)).max(operand_weight(&ob)).max(2);
    ctx.degree_cap(w)?;
    ctx.weight_cap(w)?;
    let basis = HallBasis::new(d, w)?;
    let (x, y) = (resolve(oa, &basis)?, resolve(ob, &basis)?);
    let e = truncated_mul(&x, &y, k, &basis)?;
    let mut v = pbw_to_json(&e, &basis);
    v["K"] = json!(k);
    Ok((v, Some(e.display(&basis) + "\n"), 0))
}

fn op_to_json(op: &BilinearOperator) -> Value {
    let terms: Vec<Value> = op
        .terms
        .iter()
        .map(|t| json!({ "coeff": t.coeff.to_string(), "alpha": t.alpha.0, "beta": t.beta.0 }))
        .collect();
    json!({
        "lambda": op.lambda.to_indices(),
        "mu": op.mu.to_indices(),
        "nu": op.nu.to_indices(),
        "terms": terms,
        "display": op.display(),
    })
}

fn extract_op(ctx: &Ctx, d: usize, lambda: &str, mu: &str, nu: &str, bound: u32, weight: usize) -> Result<Output> {
    ctx.weight_cap(weight)?;
    ctx.degree_cap(bound as usize)?;
    let b = HallBasis::new(d, weight)?;
    let l = monomial_from_json(&parse_json(lambda)?, &b)?;
    let m = monomial_from_json(&parse_json(mu)?, &b)?;
    let n = monomial_from_json(&parse_json(nu)?, &b)?;
    let op = extract_c_operator(&l, &m, &n, bound, &b)?;
    let mut v = op_to_json(&op);
    v["bound"] = json!(bound);
    v["stabilized"] = json!(true);
    Ok((v, Some(op.display() + "\n"), 0))
}

fn section_from(s: &str, center: &CommPoly, k: usize, b: &HallBasis) -> Result<FormalSection> {
    let d = b.d();
    let mut out = FormalSection::new(center.clone(), k)?;
    if !s.trim_start().starts_with('{') {
        out.add_term(BracketMonomial::empty(), LocalizedElement::from_poly(CommPoly::parse(s, d)?, center.clone())?)?;
        return Ok(out);
    }
    let v = parse_json(s)?;
    let terms = v["terms"].as_array().ok_or_else(|| Error::Parse("section JSON needs a \"terms\" list".into()))?;
    for t in terms {
        let m = monomial_from_json(&t["monomial"], b)?;
        let num = t["num"].as_str().ok_or_else(|| Error::Parse("term needs a \"num\" string".into()))?;
        let power = t["power"].as_u64().unwrap_or(0) as u32;
        out.add_term(m, LocalizedElement::new(CommPoly::parse(num, d)?, power, center.clone())?)?;
    }
    Ok(out)
}

fn section_mul(ctx: &Ctx, d: usize, center: &str, k: usize, a: &str, b: &str) -> Result<Output> {
    ctx.weight_cap(k.max(2))?;
    let basis = HallBasis::new(d, k.max(2))?;
    let f = CommPoly::parse(center, d)?;
    let (x, y) = (section_from(a, &f, k, &basis)?, section_from(b, &f, k, &basis)?);
    let table = OperatorTable::new(&basis, k)?;
    let s = formal_section_mul(&x, &y, &table)?;
    let terms: Vec<Value> = s
        .terms()
        .map(|(m, g)| {
            json!({
                "monomial": m.to_indices(),
                "num": g.numerator().to_string(),
                "power": g.power(),
                "display": g.to_string(),
            })
        })
        .collect();
    let v = json!({ "d": d, "center": f.to_string(), "K": k, "terms": terms, "display": s.display(&basis) });
    Ok((v, Some(s.display(&basis) + "\n"), 0))
}

fn euler(q: &Quiver, n: usize, alpha: Option<Vec<i64>>, beta: Option<Vec<i64>>) -> Result<Output> {
    let ext = extend_quiver(q, n, false)?;
    let form = euler_form(ext.quiver());
    let mut v = json!({ "n": n, "matrix": form.matrix });
    if let (Some(a), Some(b)) = (alpha, beta) {
        let block = euler_form_extended(q, n, &a, &b)?;
        let direct = form.eval(&a, &b)?;
        v["value"] = json!(block);
        v["direct"] = json!(direct);
    }
    Ok((v, None, 0))
}

fn extend(ctx: &Ctx, q: &Quiver, n: usize, inverse: bool) -> Result<Output> {
    ctx.n_cap(n)?;
    let ext = extend_quiver(q, n, inverse)?;
    let eq = ext.quiver();
    let labels: Vec<String> = (0..eq.num_arrows()).map(|a| ext.arrow_label(a)).collect();
    let mut v = parse_json(&eq.to_json())?;
    v["n"] = json!(n);
    v["labels"] = json!(labels);
    Ok((v, None, 0))
}

fn rep_from_json(v: &Value, q: Arc<Quiver>) -> Result<QuiverRep> {
    let dims: Vec<usize> =
        serde_json::from_value(v["dims"].clone()).map_err(|e| Error::Parse(format!("\"dims\": {e}")))?;
    let raw: Vec<Vec<Vec<String>>> =
        serde_json::from_value(v["maps"].clone()).map_err(|e| Error::Parse(format!("\"maps\": {e}")))?;
    let mut maps = Vec::new();
    for (a, rows) in raw.iter().enumerate() {
        let (s, t) = q.arrows().get(a).copied().ok_or(Error::LengthMismatch { expected: q.num_arrows(), found: raw.len() })?;
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = if parsed.is_empty() {
            Matrix::rat_zeros(*dims.get(t - 1).unwrap_or(&0), *dims.get(s - 1).unwrap_or(&0))
        } else {
            Matrix::from_rows(parsed)?
        };
        maps.push(m);
    }
    QuiverRep::new(q, dims, maps)
}

fn check_localization(
    ctx: &Ctx,
    q: &Quiver,
    n: usize,
    alpha: Option<Vec<usize>>,
    rep: Option<String>,
) -> Result<Output> {
    ctx.n_cap(n)?;
    let full = extend_quiver(q, n, true)?;
    let data = localization_data(&full)?;
    if let Some(r) = rep {
        let rep = rep_from_json(&parse_json(&load(&r)?)?, full.quiver().clone())?;
        let holds = check_localization_point(&data, &rep)?;
        return Ok((json!({ "n": n, "relations_hold": holds }), None, 0));
    }
    let alpha = alpha.ok_or_else(|| Error::InvalidArgument("pass --alpha or --rep".into()))?;
    let mut rng = sample::rng(ctx.seed);
    let s = sample::quiver_rep(&mut rng, &Arc::new(q.clone()), alpha);
    let tilde = build_tilde_rep(&s, n)?;
    let extended = extend_rep_with_inverse(tilde.ext(), tilde.rep())?;
    let holds = match &extended {
        Some(r) => check_localization_point(&data, r)?,
        None => false,
    };
    let v = json!({ "n": n, "alpha": s.dims(), "invertible": extended.is_some(), "relations_hold": holds });
    Ok((v, None, 0))
}

fn rep_ideal(ctx: &Ctx, presentation: &str, n: usize) -> Result<Output> {
    ctx.n_cap(n)?;
    let p = Presentation::from_json(&load(presentation)?)?;
    let ideal = relation_ideal(&p, n)?;
    let names = variable_names(n, p.d());
    let polys: Vec<Value> =
        ideal.polys.iter().map(|lp| json!({ "label": lp.label(), "poly": lp.poly.display_with(&names) })).collect();
    let v = json!({ "d": p.d(), "n": n, "variables": names, "polynomials": polys });
    Ok((v, None, 0))
}

fn root_kind(ctx: &Ctx, args: &RootArgs) -> Result<RootKind> {
    let kind = match (&args.free, &args.quiver) {
        (Some(v), None) => RootKind::Free { d: v[0], n: v[1] },
        (None, Some(q)) => RootKind::PathAlgebra {
            quiver: Arc::new(load_quiver(q)?),
            n: args.n.ok_or_else(|| Error::InvalidArgument("--quiver needs --n".into()))?,
        },
        _ => return Err(Error::InvalidArgument("pass --free D N or --quiver Q --n N".into())),
    };
    ctx.n_cap(kind.n())?;
    Ok(kind)
}

fn root(ctx: &Ctx, args: &RootArgs) -> Result<Output> {
    let kind = root_kind(ctx, args)?;
    let pres = root_presentation(&kind)?;
    let names = pres.generator_names();
    let rels: Vec<String> = pres.relations().iter().map(|r| r.display_with(&names)).collect();
    let v = json!({
        "n": kind.n(),
        "generators": names,
        "relations": rels,
        "effective_generators": pres.effective_generator_count(),
    });
    Ok((v, None, 0))
}

fn root_roundtrip(ctx: &Ctx, args: &RootArgs, algebra: AlgebraChoice, samples: usize) -> Result<Output> {
    let kind = root_kind(ctx, args)?;
    let alg = match algebra {
        AlgebraChoice::Q => BaseAlgebra::rationals(),
        AlgebraChoice::M2 => BaseAlgebra::matrix_algebra(2),
        AlgebraChoice::Trunc3 => BaseAlgebra::truncated_poly(3),
        AlgebraChoice::Dual => BaseAlgebra::dual_numbers(),
        AlgebraChoice::Upper => BaseAlgebra::upper_triangular(),
    };
    let pres = root_presentation(&kind)?;
    let mut rng = sample::rng(ctx.seed);
    let mut failures = Vec::new();
    for i in 0..samples {
        let phi = random_matrix_map(&mut rng, &kind, &alg)?;
        let psi = lower(&pres, &phi)?;
        if raise(&pres, &psi)? != phi || lower(&pres, &raise(&pres, &psi)?)? != psi {
            failures.push(i);
        }
    }
    let v = json!({
        "algebra": alg.name(),
        "seed": ctx.seed,
        "samples": samples,
        "generators": pres.generators().len(),
        "failures": failures,
        "passed": failures.is_empty(),
    });
    let code = if failures.is_empty() { 0 } else { 2 };
    Ok((v, None, code))
}

fn strata(ctx: &Ctx, q: &Quiver, n: usize, m: usize, only: Option<usize>) -> Result<Output> {
    ctx.n_cap(n)?;
    ctx.n_cap(m)?;
    let all = enumerate_substrata(m, n, q);
    let mut reports = Vec::new();
    for (i, t) in all.iter().enumerate() {
        if only.is_some_and(|j| j != i + 1) {
            continue;
        }
        let mut r = json!({
            "index": i + 1,
            "lambda": t.partition,
            "alphas": t.dim_vectors,
            "dimension": stratum_dimension(t, n, q)?,
        });
        match fiber_setting_report(t, n, q) {
            Ok(fiber) => {
                r["local_quiver"] = serde_json::to_value(&fiber.setting).expect("serializable");
                if only.is_some() {
                    r["thetas"] = serde_json::to_value(&fiber.thetas).expect("serializable");
                }
            }
            Err(e @ Error::NegativeArrowCount { .. }) if only.is_none() => r["local_quiver_error"] = json!(e.to_string()),
            Err(e) => return Err(e),
        }
        reports.push(r);
    }
    if let Some(j) = only {
        if reports.is_empty() {
            return Err(Error::InvalidArgument(format!("substratum {j} out of range 1..={}", all.len())));
        }
    }
    Ok((json!({ "n": n, "m": m, "count": all.len(), "substrata": reports }), None, 0))
}

fn selftest_cmd(ctx: &Ctx, only: Option<usize>) -> Result<Output> {
    let results = match only {
        Some(id) => vec![selftest::run_criterion(id, ctx.seed)],
        None => selftest::run_all(ctx.seed),
    };
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!(
            "{:>2}  {}  {:<40} {}\n",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        ));
    }
    let passed = results.iter().all(|r| r.passed);
    let v = json!({ "seed": ctx.seed, "passed": passed, "criteria": results });
    Ok((v, Some(text), if passed { 0 } else { 2 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&args, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn value(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn examples() {
        let (code, out, _) = call(&["hall-basis", "--d", "2", "--weight", "3", "--format", "json"]);
        assert_eq!(code, 0);
        let v = value(&out);
        assert_eq!(v["elements"].as_array().unwrap().len(), 5);
        assert_eq!(v["schema"], SCHEMA);
        let (code, out, _) = call(&["pbw-normalize", "--d", "2", "x2*x1"]);
        assert_eq!(code, 0);
        assert_eq!(value(&out)["terms"].as_array().unwrap().len(), 2);
        let loops = Quiver::loops(2).to_json();
        let (code, out, _) = call(&["strata", "--quiver", &loops, "--n", "2", "--m", "2"]);
        assert_eq!(code, 0);
        assert_eq!(value(&out)["substrata"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["no-such-command"]).0, 1);
        assert_eq!(call(&["pbw-normalize", "--d", "2", "x2*+"]).0, 1);
        let (code, _, err) = call(&["dimvectors", "--k", "2", "--n", "100"]);
        assert_eq!(code, 3);
        assert!(err.contains("ResourceCap"));
        let (code, _, err) = call(&["trunc-mul", "--d", "2", "--K", "0", "x1", "x2"]);
        assert_eq!(code, 2, "{err}");
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn round_trips_own_output() {
        let (_, out, _) = call(&["pbw-normalize", "--d", "2", "x2*x1"]);
        let (code, prod, _) = call(&["trunc-mul", "--d", "2", "--K", "2", &out, "1"]);
        assert_eq!(code, 0);
        let a = value(&out);
        let p = value(&prod);
        assert_eq!(a["terms"], p["terms"]);
        let (_, ext, _) = call(&["extend", "--quiver", r#"{"vertices": 1, "arrows": [[1, 1]]}"#, "--n", "2"]);
        let (code, e, _) = call(&["euler", "--quiver", &ext, "--n", "1"]);
        assert_eq!(code, 0);
        assert_eq!(value(&e)["matrix"].as_array().unwrap().len(), 3);
        let (_, sec, _) = call(&["section-mul", "--d", "2", "--center", "x1", "--K", "2", "x2", "1"]);
        let (code, again, _) = call(&["section-mul", "--d", "2", "--center", "x1", "--K", "2", &sec, "1"]);
        assert_eq!(code, 0);
        assert_eq!(value(&sec)["terms"], value(&again)["terms"]);
    }

    #[test]
    fn subcommands() {
        let (code, out, _) = call(&["section-mul", "--d", "2", "--center", "x1", "--K", "2", "x2",
            r#"{"terms": [{"monomial": [], "num": "1", "power": 1}]}"#]);
        assert_eq!(code, 0);
        assert_eq!(value(&out)["terms"].as_array().unwrap().len(), 2);
        let (code, out, _) = call(&["extract-op", "--d", "2", "--nu", "[3]", "--bound", "5"]);
        assert_eq!(code, 0);
        assert_eq!(value(&out)["terms"][0]["alpha"], json!([0, 1]));
        let (code, out, _) = call(&["root", "--free", "2", "2"]);
        assert_eq!(code, 0);
        assert_eq!(value(&out)["generators"].as_array().unwrap().len(), 8);
        let loops = Quiver::loops(2).to_json();
        let (_, out, _) = call(&["root", "--quiver", &loops, "--n", "2"]);
        assert_eq!(value(&out)["effective_generators"], 8);
        let (code, out, _) = call(&["root-roundtrip", "--quiver", &loops, "--n", "2", "--samples", "5", "--seed", "4"]);
        assert_eq!(code, 0);
        assert_eq!(value(&out)["passed"], true);
        let pres = r#"{"d": 2, "relations": ["x1*x2 - x2*x1"]}"#;
        let (_, out, _) = call(&["rep-ideal", "--presentation", pres, "--n", "2"]);
        assert_eq!(value(&out)["polynomials"][0]["label"], "f1_11");
        let (_, out, _) = call(&["check-localization", "--quiver", &loops, "--n", "2", "--alpha", "2"]);
        assert_eq!(value(&out)["relations_hold"], true);
        let (_, out, _) = call(&["dimvectors", "--k", "3", "--n", "2"]);
        assert_eq!(value(&out)["count"], 6);
        let (_, out, _) = call(&["strata", "--quiver", &loops, "--n", "2", "--m", "2", "--local-quiver", "2"]);
        assert_eq!(value(&out)["substrata"][0]["local_quiver"]["arrow_counts"], json!([[8, 7], [7, 8]]));
        let (code, out, _) = call(&["rep-decompose", "--quiver", &loops, "--n", "2"]);
        assert_eq!(code, 0);
        assert_eq!(value(&out)["records"][0]["rep_dim"], 8);
        let one = r#"{"vertices": 1, "arrows": [[1, 1], [1, 1]]}"#;
        let rep = r#"{"dims": [1, 1], "maps": [[["0"]], [["0"]], [["1"]], [["1"]]]}"#;
        let (code, out, _) = call(&["check-localization", "--quiver", one, "--n", "1", "--rep", rep]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(value(&out)["relations_hold"], true);
    }

    #[test]
    fn selftest_single() {
        let (code, out, _) = call(&["selftest", "--only", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("PASS"));
    }
}
