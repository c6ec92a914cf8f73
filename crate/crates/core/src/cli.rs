//! The `spincount` command line.
//!
//! Human mode prints `key: value` lines, except that a record led by `value`
//! prints only that value; `--json` prints one JSON object per result line. Rationals are always
//! strings (`"3/4"`), so values stay exact.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::caps::Caps;
use crate::classify::{classify_relations, classify_two_spin, classify_with_updown};
use crate::error::Error;
use crate::funcs::{fourier, inverse_fourier, parse_rational, property_report, PBFunction, SignedTable, Q};
use crate::gadgets::{
    approx_pin, extract_nonlsm_binary, make_up_down, normalize_unary, pinning_analysis, symmetrize, Direction, Gadget,
    PinningVerdict, SymMode,
};
use crate::instances::{
    hadamard, holographic_transform, near_assignment_total, to_holant_certified, z_exact_capped, z_product_type,
    CspInstance, HolantInstance, Table,
};
use crate::matching::{
    build_triangle_graph, estimate_z_fpras, holant_fourier_form, integerize, lift_instance, EstimatorConfig, FourierForm,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "spincount", version, about = "Exact and approximate partition functions of Boolean weighted CSPs")]
struct Cli {
    /// One JSON object per result line.
    #[arg(long, global = true)]
    json: bool,
    /// Variable limit for exhaustive evaluation (also read from SPINCOUNT_BRUTE_CAP).
    #[arg(long, global = true)]
    brute_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// A single binary function.
    TwoSpin,
    /// A set of functions together with up and down unaries.
    Updown,
    /// The supports, as a family of relations.
    Relations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dir {
    Up,
    Down,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Complexity verdicts.
    Classify {
        #[arg(long = "fun", required = true)]
        funs: Vec<String>,
        #[arg(long, value_enum, default_value = "two-spin")]
        kind: Kind,
    },
    /// Structural properties of each function.
    Props {
        #[arg(long = "fun", required = true)]
        funs: Vec<String>,
    },
    /// Fourier coefficients, or the inverse transform of a signed table.
    Fourier {
        #[arg(long = "fun", required = true)]
        funs: Vec<String>,
        #[arg(long)]
        inverse: bool,
    },
    /// Gadget constructions with their pps traces.
    Gadget {
        #[command(subcommand)]
        gadget: GadgetCommand,
    },
    /// Whether the pinning clone holds both an increasing and a decreasing unary.
    Pinning {
        #[arg(long = "fun", required = true)]
        funs: Vec<String>,
    },
    /// Exact partition function of an instance file (`-` for stdin).
    ZExact {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "brute")]
        method: Method,
    },
    /// Partition function through the perfect matching pipeline.
    ZEstimate {
        path: PathBuf,
        #[arg(long, default_value = "1/10")]
        epsilon: String,
        #[arg(long, default_value = "1/4")]
        delta: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Graphs (and components) with at most this many vertices are counted exactly.
        #[arg(long, default_value_t = 30)]
        exact_cap: usize,
        #[arg(long)]
        step_constant: Option<f64>,
    },
    /// Converts to holant form and checks that Z is unchanged.
    HolantCheck {
        path: PathBuf,
        /// Also apply the Hadamard transform and report the scaled total.
        #[arg(long)]
        hadamard: bool,
        /// Also report the near-assignment total.
        #[arg(long)]
        near: bool,
    },
    /// Triangle graph of a holant instance, or of the lifted Fourier form of a binary instance.
    TriangleGraph {
        path: PathBuf,
        /// Also report the integerized multigraph size and denominator.
        #[arg(long)]
        integerize: bool,
    },
}

#[derive(Debug, Subcommand)]
enum GadgetCommand {
    /// Up and down unaries from a binary with opposite-sign middle coefficients.
    Updown {
        #[arg(long = "fun")]
        fun: String,
    },
    /// Symmetric binary: 1 is f(x,y)f(y,x), 2 sums f(x,z)f(y,z) over z, 3 weights z by `--up`.
    Symmetrize {
        #[arg(long = "fun")]
        fun: String,
        #[arg(long, default_value_t = 1)]
        mode: u8,
        /// Unary for mode 3.
        #[arg(long)]
        up: Option<String>,
    },
    /// A nontrivial non-lsm binary from a non-lsm `f` and a nontrivial binary `g`.
    Extract {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Least power of a unary whose off-pin entry is at most `--epsilon`.
    ApproxPin {
        #[arg(long = "fun")]
        fun: String,
        #[arg(long)]
        epsilon: String,
    },
    /// Divides a unary by u(1) (up) or u(0) (down).
    Normalize {
        #[arg(long = "fun")]
        fun: String,
        #[arg(long, value_enum)]
        direction: Dir,
    },
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capacity { .. } => EXIT_CAPACITY,
            Error::Verification(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, msg: msg.into() }
}

type Record = Vec<(&'static str, Value)>;
type Out = std::result::Result<Vec<Record>, Failure>;

fn rat(q: &Q) -> Value {
    Value::String(q.to_string())
}

fn opt_bool(b: Option<bool>) -> Value {
    b.map_or(Value::Null, Value::Bool)
}

/// `<arity> <values..>`, or the bare table when its length is a power of two.
fn literal(lit: &str) -> String {
    let n = lit.split_whitespace().count();
    let prefixed = n >= 2 && lit.split_whitespace().next().and_then(|t| t.parse::<u32>().ok()).is_some_and(|k| k < 31 && n == (1 << k) + 1);
    if !prefixed && n.is_power_of_two() {
        format!("{} {lit}", n.trailing_zeros())
    } else {
        lit.to_string()
    }
}

fn parse_fun(lit: &str) -> Result<PBFunction, Failure> {
    PBFunction::from_str(&literal(lit)).map_err(|e| input(format!("function literal `{lit}`: {e}")))
}

fn parse_funs(lits: &[String]) -> Result<Vec<PBFunction>, Failure> {
    lits.iter().map(|l| parse_fun(l)).collect()
}

fn read_instance(path: &PathBuf) -> Result<CspInstance, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| input(format!("{}: {e}", path.display())))?;
    CspInstance::parse(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn gadget_fields(prefix: &'static str, trace_key: &'static str, g: &Gadget) -> Record {
    vec![(prefix, Value::String(g.function.to_string())), (trace_key, Value::String(g.trace.to_string()))]
}

fn classify(funs: &[String], kind: Kind) -> Out {
    let fs = parse_funs(funs)?;
    match kind {
        Kind::TwoSpin => fs
            .iter()
            .map(|f| {
                let v = classify_two_spin(f)?;
                let e = &v.evidence;
                Ok(vec![
                    ("function", Value::String(f.to_string())),
                    ("tag", json!(v.tag.name())),
                    ("trivial", json!(e.trivial)),
                    ("lsm", json!(e.lsm)),
                    ("fourier_01", rat(&e.fourier_01)),
                    ("fourier_10", rat(&e.fourier_10)),
                    ("monotone", json!(e.monotone)),
                    ("flip_monotone", json!(e.flip_monotone)),
                    ("symmetric", json!(e.symmetric)),
                    ("fpras_via_flip", opt_bool(e.fpras_via_flip)),
                    ("open_branch", e.open_branch.map_or(Value::Null, |b| json!(b.name()))),
                ])
            })
            .collect(),
        Kind::Updown => {
            let v = classify_with_updown(&fs);
            Ok(vec![vec![
                ("tag", json!(v.tag.name())),
                ("bis_easy_flag", json!(v.bis_easy_flag)),
                ("non_product", v.non_product.map_or(Value::Null, |i| json!(i + 1))),
                ("non_lsm", v.non_lsm.map_or(Value::Null, |i| json!(i + 1))),
            ]])
        }
        Kind::Relations => {
            let rels: Vec<_> = fs.iter().map(PBFunction::support).collect();
            Ok(vec![vec![("tag", json!(classify_relations(&rels).name()))]])
        }
    }
}

fn props(funs: &[String]) -> Out {
    Ok(parse_funs(funs)?
        .iter()
        .map(|f| {
            let r = property_report(f);
            vec![
                ("function", Value::String(f.to_string())),
                ("arity", json!(r.arity)),
                ("permissive", json!(r.permissive)),
                ("lsm", json!(r.lsm)),
                ("log_modular", json!(r.log_modular)),
                ("monotone", json!(r.monotone)),
                ("monotone_on_support", json!(r.monotone_on_support)),
                ("support_join_closed", json!(r.support_join_closed)),
                ("pure", json!(r.pure)),
                ("pure_value", r.pure_value.as_ref().map_or(Value::Null, rat)),
                ("affine_support", json!(r.affine_support)),
                ("in_cp", json!(r.in_cp)),
                ("in_sdp3", json!(r.in_sdp3)),
                ("pin_monotone", json!(crate::funcs::is_pin_monotone(f))),
                ("trivial", opt_bool(r.trivial)),
                ("ferromagnetic", opt_bool(r.ferromagnetic)),
                ("ising", opt_bool(r.ising)),
                ("symmetric", opt_bool(r.symmetric)),
            ]
        })
        .collect())
}

fn fourier_cmd(funs: &[String], inverse: bool) -> Out {
    funs.iter()
        .map(|lit| {
            let out = if inverse {
                let t = SignedTable::from_str(&literal(lit)).map_err(|e| input(format!("table literal `{lit}`: {e}")))?;
                inverse_fourier(&t)
            } else {
                fourier(&parse_fun(lit)?)
            };
            Ok(vec![("input", json!(lit)), ("value", Value::String(out.to_string()))])
        })
        .collect()
}

fn gadget(cmd: &GadgetCommand) -> Out {
    let rec = match cmd {
        GadgetCommand::Updown { fun } => {
            let ud = make_up_down(&parse_fun(fun)?)?;
            let mut r = gadget_fields("up", "up_trace", &ud.up);
            r.extend(gadget_fields("down", "down_trace", &ud.down));
            r.push(("swapped", json!(ud.swapped)));
            r
        }
        GadgetCommand::Symmetrize { fun, mode, up } => {
            let up = up.as_deref().map(parse_fun).transpose()?;
            let (g, rep) = symmetrize(&parse_fun(fun)?, SymMode::try_from(*mode)?, up.as_ref())?;
            let mut r = gadget_fields("function", "trace", &g);
            r.extend([("lsm", json!(rep.lsm)), ("ising", opt_bool(rep.ising)), ("symmetric", opt_bool(rep.symmetric))]);
            r
        }
        GadgetCommand::Extract { f, g } => gadget_fields("function", "trace", &extract_nonlsm_binary(&parse_fun(f)?, &parse_fun(g)?)?),
        GadgetCommand::ApproxPin { fun, epsilon } => {
            let eps = parse_rational(epsilon)?;
            let (p, k) = approx_pin(&parse_fun(fun)?, &eps)?;
            vec![("function", Value::String(p.to_string())), ("power", json!(k))]
        }
        GadgetCommand::Normalize { fun, direction } => {
            let dir = if *direction == Dir::Up { Direction::Up } else { Direction::Down };
            let (u, s) = normalize_unary(&parse_fun(fun)?, dir)?;
            vec![("function", Value::String(u.to_string())), ("scale", rat(&s))]
        }
    };
    Ok(vec![rec])
}

fn pinning(funs: &[String]) -> Out {
    let fs = parse_funs(funs)?;
    let v = pinning_analysis(&fs)?;
    let rec = match &v {
        PinningVerdict::AllPure => vec![("verdict", json!("all_pure"))],
        PinningVerdict::MonotoneFamily { index, witness } => vec![
            ("verdict", json!("monotone_family")),
            ("index", json!(index + 1)),
            ("witness", Value::String(witness.to_string())),
        ],
        PinningVerdict::FlippedMonotoneFamily { index, witness } => vec![
            ("verdict", json!("flipped_monotone_family")),
            ("index", json!(index + 1)),
            ("witness", Value::String(witness.to_string())),
        ],
        PinningVerdict::BothUnaries { case, up, down } => {
            let mut r = vec![("verdict", json!("both_unaries")), ("case", json!(case))];
            r.extend(gadget_fields("up", "up_trace", up));
            r.extend(gadget_fields("down", "down_trace", down));
            r
        }
    };
    Ok(vec![rec])
}

fn z_exact_cmd(path: &PathBuf, method: Method, caps: &Caps) -> Out {
    let inst = read_instance(path)?;
    let z = match method {
        Method::Brute => z_exact_capped(&inst, caps.brute_force)?,
        Method::Product => z_product_type(&inst)?,
    };
    Ok(vec![vec![("value", rat(&z))]])
}

/// The binary function an instance is over; an instance without constraints uses EQ.
fn instance_binary(inst: &CspInstance) -> Result<PBFunction, Failure> {
    match inst.used_functions().as_slice() {
        [] => Ok(crate::funcs::named::eq()),
        [name] => match inst.function(name) {
            Some(Table::Function(f)) if f.arity() == 2 => Ok(f.clone()),
            _ => Err(input(format!("`{name}` is not a nonnegative binary function"))),
        },
        many => Err(input(format!("instance uses {} functions, expected one", many.len()))),
    }
}

fn z_estimate(
    path: &PathBuf,
    epsilon: &str,
    delta: &str,
    seed: u64,
    exact_cap: usize,
    step_constant: Option<f64>,
) -> Out {
    let inst = read_instance(path)?;
    let f = instance_binary(&inst)?;
    let mut cfg = EstimatorConfig {
        epsilon: parse_rational(epsilon)?,
        delta: parse_rational(delta)?,
        seed,
        exact_cap,
        ..EstimatorConfig::default()
    };
    if let Some(c) = step_constant {
        cfg.step_constant = c;
    }
    let e = estimate_z_fpras(&f, &inst, &cfg)?;
    Ok(vec![vec![
        ("value", rat(&e.value)),
        ("exact", json!(e.exact)),
        ("graph_vertices", json!(e.graph_vertices)),
        ("levels", json!(e.levels)),
        ("steps", json!(e.steps)),
        ("seed", json!(seed)),
    ]])
}

fn holant_check(path: &PathBuf, hadamard_too: bool, near: bool, caps: &Caps) -> Out {
    let inst = read_instance(path)?;
    let (h, cert) = to_holant_certified(&inst, caps)?;
    let mut r: Record = vec![
        ("holant", Value::String(h.instance().serialize())),
        ("variables", json!(h.instance().n_vars())),
        ("certified", json!(cert.is_some())),
    ];
    if let Some(c) = &cert {
        r.extend([("z_before", rat(&c.z_before)), ("z_after", rat(&c.z_after))]);
    }
    if hadamard_too {
        let t = holographic_transform(&h, &hadamard())?;
        r.push(("transformed", Value::String(t.instance().serialize())));
        r.push(("z_transformed", rat(&z_exact_capped(t.instance(), caps.brute_force)?)));
    }
    if near {
        r.push(("near_assignments", rat(&near_assignment_total(&h, caps)?)));
    }
    Ok(vec![r])
}

fn triangle_graph(path: &PathBuf, integerize_too: bool) -> Out {
    let inst = read_instance(path)?;
    let (holant, kappa) = match HolantInstance::new(inst.clone()) {
        Ok(h) if inst.used_functions().iter().all(|n| matches!(inst.function(n), Some(Table::Function(f)) if f.arity() == 3)) => {
            (h, None)
        }
        _ => match holant_fourier_form(&lift_instance(&inst)?)? {
            FourierForm::Zero => return Err(input("some constraint is identically zero; the graph is empty")),
            FourierForm::Holant { holant, kappa } => (holant, Some(kappa)),
        },
    };
    let g = build_triangle_graph(&holant)?;
    let mut r: Record = vec![
        ("graph", Value::String(g.to_string())),
        ("vertices", json!(g.n_vertices())),
        ("edges", json!(g.edges().len())),
        ("kappa", kappa.as_ref().map_or(Value::Null, rat)),
    ];
    if integerize_too {
        let (m, d) = integerize(&g)?;
        r.extend([("denominator", Value::String(d.to_string())), ("multigraph_edges", Value::String(m.n_edges().to_string()))]);
    }
    Ok(vec![r])
}

fn dispatch(cli: &Cli) -> Out {
    let mut caps = Caps::from_env();
    if let Some(c) = cli.brute_cap {
        caps.brute_force = c;
        caps.near_assignment = c;
    }
    match &cli.command {
        Command::Classify { funs, kind } => classify(funs, *kind),
        Command::Props { funs } => props(funs),
        Command::Fourier { funs, inverse } => fourier_cmd(funs, *inverse),
        Command::Gadget { gadget: g } => gadget(g),
        Command::Pinning { funs } => pinning(funs),
        Command::ZExact { path, method } => z_exact_cmd(path, *method, &caps),
        Command::ZEstimate { path, epsilon, delta, seed, exact_cap, step_constant } => {
            z_estimate(path, epsilon, delta, *seed, *exact_cap, *step_constant)
        }
        Command::HolantCheck { path, hadamard, near } => holant_check(path, *hadamard, *near, &caps),
        Command::TriangleGraph { path, integerize } => triangle_graph(path, *integerize),
    }
}

fn render(rec: &Record, json_mode: bool) -> String {
    if json_mode {
        let m: Map<String, Value> = rec.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        return format!("{}\n", Value::Object(m));
    }
    if let Some(("value", Value::String(s))) = rec.first() {
        return format!("{s}\n");
    }
    let mut out = String::new();
    for (k, v) in rec {
        match v {
            Value::String(s) if s.contains('\n') => {
                out.push_str(&format!("{k}:\n"));
                for line in s.lines() {
                    out.push_str(&format!("  {line}\n"));
                }
            }
            Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
            other => out.push_str(&format!("{k}: {other}\n")),
        }
    }
    out
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = catch_unwind(AssertUnwindSafe(|| dispatch(&cli)))
        .unwrap_or_else(|_| Err(Failure { code: EXIT_INTERNAL, msg: "internal error".into() }));
    match result {
        Ok(records) => {
            // Human mode separates multiple records with a blank line.
            let body: Vec<String> = records.iter().map(|r| render(r, cli.json)).collect();
            let text = if cli.json { body.concat() } else { body.join("\n") };
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_INTERNAL;
            }
            EXIT_OK
        }
        Err(f) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({"error": f.msg, "exit_code": f.code}));
            }
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}
