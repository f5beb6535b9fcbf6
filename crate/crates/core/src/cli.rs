//! Command-line front end. [`run`] parses an argument vector and returns
//! the exit code together with human and machine renderings, so the whole
//! interface is testable without spawning processes.
//!
//! Exit codes: 0 success or property holds, 1 property fails (a
//! certificate is included), 2 input error.

use std::fmt::{Display, Write as _};
use std::fs;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::autgroup::{self, OrbitMode};
use crate::cuts::{self, Connectivity, CutClass, CutOracle};
use crate::cyclic::{self, MobiusMap, Orientation, ProjPoint};
use crate::fieldgen::{self, Localization};
use crate::ordline::{self, AffineMap, Interval, Shift, Side};
use crate::rational::Rational;
use crate::structures::{parse_structure, FiniteStructure};
use crate::uniformity::{self, Outcome, UniformityVerdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub format: Format,
    pub text: String,
    pub machine: Value,
}

impl CommandResult {
    /// What the binary prints: the text, or one JSON record per line.
    pub fn output(&self) -> String {
        match self.format {
            Format::Human => self.text.clone(),
            Format::Machine => format!("{}\n", self.machine),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "unilocal", version, about = "Uniformity checks and constructions on the rational line")]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite relational structures.
    #[command(subcommand)]
    Structure(StructureCmd),
    /// Decide n-uniformity of a finite structure.
    Uniformity(UniformityArgs),
    /// Affine maps and shifts of the rational line.
    #[command(subcommand)]
    Line(LineCmd),
    /// Field operations relative to a chosen zero and one.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Cyclic order on the projective line.
    #[command(subcommand)]
    Cyclic(CyclicCmd),
    /// Rays, Galois closures and Dedekind cuts.
    #[command(subcommand)]
    Cuts(CutsCmd),
}

#[derive(Subcommand, Debug)]
enum StructureCmd {
    /// Parse and print in canonical form.
    Parse {
        #[arg(long)]
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// List the automorphisms.
    Aut {
        #[arg(long)]
        file: String,
        #[arg(long, default_value_t = autgroup::DEFAULT_CAP)]
        cap: usize,
    },
    /// Orbits on n-subsets or distinct n-tuples.
    Orbits {
        #[arg(long)]
        file: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tuples: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Schema,
    Orbit,
    Both,
}

#[derive(Args, Debug)]
struct UniformityArgs {
    #[arg(long)]
    structure: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    #[arg(long, default_value_t = 3)]
    depth: usize,
}

#[derive(Subcommand, Debug)]
enum LineCmd {
    /// Raising, lowering, identity or mixed.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        map: AffineMap,
    },
    /// Commutation and mutual preservation of graphs.
    Commute {
        #[arg(long, allow_hyphen_values = true)]
        f: AffineMap,
        #[arg(long, allow_hyphen_values = true)]
        g: AffineMap,
    },
    /// Tiles of a shift around a base point.
    Tile {
        #[arg(long, allow_hyphen_values = true)]
        shift: Shift,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        base: Rational,
        #[arg(long)]
        window: i64,
    },
    /// Factor a map through a shift.
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        map: AffineMap,
        #[arg(long, allow_hyphen_values = true)]
        shift: Shift,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },
    /// Whole tiles of a raising shift inside [lo, hi).
    Measure {
        #[arg(long, allow_hyphen_values = true)]
        shift: Shift,
        #[arg(long, allow_hyphen_values = true)]
        lo: Rational,
        #[arg(long, allow_hyphen_values = true)]
        hi: Rational,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Args, Debug)]
struct LocArgs {
    #[arg(long, allow_hyphen_values = true)]
    zero: Rational,
    #[arg(long, allow_hyphen_values = true)]
    one: Rational,
}

#[derive(Subcommand, Debug)]
enum FieldCmd {
    /// Evaluate an expression with the localized operations. Integers are
    /// literal points, `[p/q]` is a literal rational, and `+ - * /` and
    /// unary `-` are the localized operations.
    Eval {
        #[command(flatten)]
        loc: LocArgs,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Check the field axioms and order compatibility on sampled triples.
    Verify {
        #[command(flatten)]
        loc: LocArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// The isomorphism between two localizations.
    Iso {
        #[arg(long, allow_hyphen_values = true)]
        from_zero: Rational,
        #[arg(long, allow_hyphen_values = true)]
        from_one: Rational,
        #[arg(long, allow_hyphen_values = true)]
        to_zero: Rational,
        #[arg(long, allow_hyphen_values = true)]
        to_one: Rational,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Image of [lo, hi) under multiplication by a factor.
    Stretch {
        #[command(flatten)]
        loc: LocArgs,
        #[arg(long, allow_hyphen_values = true)]
        factor: Rational,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        lo: Rational,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        hi: Rational,
    },
}

#[derive(Subcommand, Debug)]
enum CyclicCmd {
    /// Orientation of three points, e.g. `--points 1,3,inf`.
    Orient {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Sort points in the linear order obtained by cutting at a point.
    Linearize {
        #[arg(long, allow_hyphen_values = true)]
        at: ProjPoint,
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Whether x ↦ (ax+b)/(cx+d) preserves or reverses orientation.
    Mobius {
        #[arg(long, allow_hyphen_values = true)]
        a: Rational,
        #[arg(long, allow_hyphen_values = true)]
        b: Rational,
        #[arg(long, allow_hyphen_values = true)]
        c: Rational,
        #[arg(long, allow_hyphen_values = true)]
        d: Rational,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    Lt,
    Le,
    SqLt,
}

#[derive(Subcommand, Debug)]
enum CutsCmd {
    /// X^> and X^< of a finite set, e.g. `--set 1,2,3`.
    Rays {
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        set: String,
    },
    /// Check X^><> = X^> and X^<>< = X^<.
    Galois {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// Principal cut or gap, at a denominator bound.
    Classify {
        #[arg(long, value_enum)]
        oracle: OracleKind,
        #[arg(long, allow_hyphen_values = true)]
        target: Rational,
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
    },
    /// Classify a family of cuts, each given as `lt C`, `le C` or `sq-lt T`.
    Probe {
        #[arg(long = "oracle", required = true, allow_hyphen_values = true)]
        oracles: Vec<String>,
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
    },
}

struct InputError(String);

fn input(e: impl Display) -> InputError {
    InputError(e.to_string())
}

/// A successful command: exit code, text and machine fields.
struct Report {
    exit_code: i32,
    text: String,
    fields: Value,
}

impl Report {
    fn ok(text: String, fields: Value) -> Self {
        Report {
            exit_code: 0,
            text,
            fields,
        }
    }

    fn verdict(holds: bool, text: String, fields: Value) -> Self {
        Report {
            exit_code: if holds { 0 } else { 1 },
            text,
            fields,
        }
    }
}

type Res = Result<Report, InputError>;

fn record(command: &str, exit_code: i32, fields: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("exit_code".into(), json!(exit_code));
    if let Value::Object(f) = fields {
        m.extend(f);
    }
    Value::Object(m)
}

/// Parse `argv` (program name first) and execute.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let format = if argv.windows(2).any(|w| w[0] == "--format" && w[1] == "machine")
        || argv.iter().any(|a| a == "--format=machine")
    {
        Format::Machine
    } else {
        Format::Human
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            let fields = if code == 0 {
                json!({ "message": text })
            } else {
                json!({ "error": text })
            };
            return CommandResult {
                exit_code: code,
                format,
                text,
                machine: record("", code, fields),
            };
        }
    };
    let name = command_name(&cli.command);
    let (exit_code, text, fields) = match dispatch(&cli) {
        Ok(r) => (r.exit_code, r.text, r.fields),
        Err(InputError(msg)) => (2, format!("error: {msg}\n"), json!({ "error": msg })),
    };
    CommandResult {
        exit_code,
        format: cli.format,
        text,
        machine: record(&name, exit_code, fields),
    }
}

fn command_name(c: &Command) -> String {
    let (top, sub) = match c {
        Command::Structure(s) => (
            "structure",
            match s {
                StructureCmd::Parse { .. } => "parse",
                StructureCmd::Aut { .. } => "aut",
                StructureCmd::Orbits { .. } => "orbits",
            },
        ),
        Command::Uniformity(_) => return "uniformity".into(),
        Command::Line(l) => (
            "line",
            match l {
                LineCmd::Classify { .. } => "classify",
                LineCmd::Commute { .. } => "commute",
                LineCmd::Tile { .. } => "tile",
                LineCmd::Factor { .. } => "factor",
                LineCmd::Measure { .. } => "measure",
            },
        ),
        Command::Field(f) => (
            "field",
            match f {
                FieldCmd::Eval { .. } => "eval",
                FieldCmd::Verify { .. } => "verify",
                FieldCmd::Iso { .. } => "iso",
                FieldCmd::Stretch { .. } => "stretch",
            },
        ),
        Command::Cyclic(c) => (
            "cyclic",
            match c {
                CyclicCmd::Orient { .. } => "orient",
                CyclicCmd::Linearize { .. } => "linearize",
                CyclicCmd::Mobius { .. } => "mobius",
            },
        ),
        Command::Cuts(c) => (
            "cuts",
            match c {
                CutsCmd::Rays { .. } => "rays",
                CutsCmd::Galois { .. } => "galois",
                CutsCmd::Classify { .. } => "classify",
                CutsCmd::Probe { .. } => "probe",
            },
        ),
    };
    format!("{top} {sub}")
}

fn dispatch(cli: &Cli) -> Res {
    match &cli.command {
        Command::Structure(c) => structure(c),
        Command::Uniformity(a) => uniformity_cmd(a),
        Command::Line(c) => line(c),
        Command::Field(c) => field(c, cli.seed),
        Command::Cyclic(c) => cyclic_cmd(c, cli.seed),
        Command::Cuts(c) => cuts_cmd(c),
    }
}

fn load(path: &str) -> Result<FiniteStructure, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))?;
    parse_structure(&text).map_err(|e| InputError(format!("{path}: {e}")))
}

fn names(s: &FiniteStructure, t: &[usize]) -> Vec<String> {
    t.iter().map(|&i| s.element_name(i).to_string()).collect()
}

fn tuple_text(s: &FiniteStructure, t: &[usize]) -> String {
    format!("({})", names(s, t).join(","))
}

fn structure(c: &StructureCmd) -> Res {
    match c {
        StructureCmd::Parse { file, json } => {
            let s = load(file)?;
            let text = if *json { s.render_json() } else { s.render_text() };
            let doc: Value = serde_json::from_str(&s.render_json()).map_err(input)?;
            Ok(Report::ok(text, json!({ "structure": doc })))
        }
        StructureCmd::Aut { file, cap } => {
            let s = load(file)?;
            let group = autgroup::automorphisms_capped(&s, *cap).map_err(input)?;
            let mut text = format!("{} automorphisms\n", group.len());
            let mut listed = Vec::new();
            for p in &group {
                let _ = writeln!(text, "  {}", p.cycles(&s));
                listed.push(json!({ "cycles": p.cycles(&s), "images": names(&s, p.images()) }));
            }
            Ok(Report::ok(text, json!({ "order": group.len(), "automorphisms": listed })))
        }
        StructureCmd::Orbits { file, n, tuples } => {
            let s = load(file)?;
            if *n == 0 || *n > s.size() {
                return Err(InputError(format!("n must lie in 1..={}", s.size())));
            }
            let mode = if *tuples { OrbitMode::Tuples } else { OrbitMode::Subsets };
            let p = autgroup::orbit_partition(&s, *n, mode).map_err(input)?;
            let mut text = format!("{} orbits\n", p.len());
            let mut classes = Vec::new();
            for class in &p.classes {
                let members: Vec<String> = class.iter().map(|t| tuple_text(&s, t)).collect();
                let _ = writeln!(text, "  {}", members.join(" "));
                classes.push(json!(members));
            }
            Ok(Report::ok(
                text,
                json!({ "n": n, "mode": if *tuples { "tuples" } else { "subsets" }, "orbits": classes }),
            ))
        }
    }
}

fn verdict_json(s: &FiniteStructure, v: &UniformityVerdict) -> Value {
    let mut m = serde_json::to_value(v.method).unwrap_or_default();
    let obj = m.as_object_mut().expect("method serializes to an object");
    obj.insert("uniform".into(), json!(v.is_uniform()));
    match &v.outcome {
        Outcome::Uniform => {}
        Outcome::Formula {
            formula,
            witness,
            violating,
        } => {
            obj.insert("formula".into(), json!(formula.to_string()));
            obj.insert("witness".into(), json!(names(s, witness)));
            obj.insert("violating".into(), json!(names(s, violating)));
        }
        Outcome::Orbits { first, second } => {
            obj.insert("first".into(), json!(names(s, first)));
            obj.insert("second".into(), json!(names(s, second)));
        }
    }
    m
}

fn verdict_text(s: &FiniteStructure, v: &UniformityVerdict) -> String {
    let head = match v.method {
        uniformity::Method::Schema { depth } => format!("schema (depth {depth})"),
        uniformity::Method::Orbit => "orbit".to_string(),
    };
    match &v.outcome {
        Outcome::Uniform => format!("{head}: uniform\n"),
        Outcome::Formula {
            formula,
            witness,
            violating,
        } => format!(
            "{head}: not uniform\n  counterexample: {formula}\n  holds at {}, fails at every arrangement of {}\n",
            tuple_text(s, witness),
            tuple_text(s, violating)
        ),
        Outcome::Orbits { first, second } => format!(
            "{head}: not uniform\n  {} and {} lie in different orbits\n",
            tuple_text(s, first),
            tuple_text(s, second)
        ),
    }
}

fn uniformity_cmd(a: &UniformityArgs) -> Res {
    let s = load(&a.structure)?;
    let mut verdicts = Vec::new();
    if matches!(a.method, MethodArg::Schema | MethodArg::Both) {
        verdicts.push(uniformity::check_uniformity_schema(&s, a.n, a.depth).map_err(input)?);
    }
    if matches!(a.method, MethodArg::Orbit | MethodArg::Both) {
        verdicts.push(uniformity::check_uniformity_orbits(&s, a.n).map_err(input)?);
    }
    let mut text = String::new();
    let mut certified = true;
    for v in &verdicts {
        text.push_str(&verdict_text(&s, v));
        certified &= v.certify(&s).map_err(input)?;
    }
    let uniform = verdicts.iter().all(UniformityVerdict::is_uniform);
    let agree = verdicts.windows(2).all(|w| w[0].is_uniform() == w[1].is_uniform());
    if verdicts.len() == 2 {
        text.push_str(if agree { "methods agree\n" } else { "methods disagree\n" });
    }
    let mut fields = json!({
        "n": a.n,
        "uniform": uniform,
        "certified": certified,
        "verdicts": verdicts.iter().map(|v| verdict_json(&s, v)).collect::<Vec<_>>(),
    });
    if verdicts.len() == 2 {
        fields["agree"] = json!(agree);
    }
    Ok(Report::verdict(uniform, text, fields))
}

fn line(c: &LineCmd) -> Res {
    match c {
        LineCmd::Classify { map } => {
            let d = ordline::classify_displacement(map);
            let name = serde_json::to_value(d).unwrap_or_default();
            let text = format!("{map}: {}\n", name.as_str().unwrap_or_default());
            Ok(Report::ok(
                text,
                json!({ "map": map, "displacement": d, "order_preserving": map.is_order_preserving() }),
            ))
        }
        LineCmd::Commute { f, g } => {
            let samples = ordline::default_samples();
            let c = ordline::commutes(f, g);
            let gf = ordline::preserves_construct(g, f, &samples);
            let fg = ordline::preserves_construct(f, g, &samples);
            let witness = |w: &Option<(Rational, Rational, Rational)>| {
                w.as_ref()
                    .map(|(x, a, b)| json!({ "x": x, "image": [a, b] }))
                    .unwrap_or(Value::Null)
            };
            let mut text = format!(
                "{}\n  {g} preserves the graph of {f}: {}\n  {f} preserves the graph of {g}: {}\n",
                if c { "commute" } else { "do not commute" },
                gf.preserved,
                fg.preserved
            );
            if let Some((x, a, b)) = &gf.witness {
                let _ = writeln!(text, "  witness: x = {x}, ({a}, {b}) is off the graph of {f}");
            }
            Ok(Report::verdict(
                c,
                text,
                json!({
                    "f": f, "g": g, "commute": c,
                    "g_preserves_f": gf.preserved, "f_preserves_g": fg.preserved,
                    "witness": witness(&gf.witness),
                }),
            ))
        }
        LineCmd::Tile { shift, base, window } => {
            let t = ordline::tile_line(shift, base, *window).map_err(input)?;
            let disjoint = t.is_disjoint();
            let union = t.union();
            let exact = union.as_ref() == Some(&t.expected_cover());
            let advances = t.advances();
            let mut text = String::new();
            for (j, tile) in &t.tiles {
                let _ = writeln!(text, "{j:>6}  {tile}");
            }
            let _ = writeln!(
                text,
                "disjoint: {disjoint}\nunion: {}\nexact cover: {exact}\neach tile maps to the next: {advances}",
                union.as_ref().map(ToString::to_string).unwrap_or_else(|| "not an interval".into())
            );
            let tiles: Vec<Value> = t.tiles.iter().map(|(j, i)| json!({ "index": j, "lo": i.lo, "hi": i.hi })).collect();
            Ok(Report::verdict(
                disjoint && exact && advances,
                text,
                json!({
                    "shift": shift.map(), "base": base, "window": window, "tiles": tiles,
                    "disjoint": disjoint, "exact_cover": exact, "advances": advances,
                }),
            ))
        }
        LineCmd::Factor { map, shift, side } => {
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let h = ordline::factor_through_shift(map, shift, side);
            let back = match side {
                Side::Left => shift.map().compose(&h),
                Side::Right => h.compose(shift.map()),
            };
            let ok = &back == map;
            Ok(Report::verdict(
                ok,
                format!("h = {h}\n"),
                json!({ "map": map, "shift": shift.map(), "side": side, "h": h, "recomposes": ok }),
            ))
        }
        LineCmd::Measure { shift, lo, hi } => {
            let i = Interval::new(lo.clone(), hi.clone()).map_err(input)?;
            let (count, rem) = ordline::shift_measure(shift, &i).map_err(input)?;
            Ok(Report::ok(
                format!("{count} tiles, remainder {rem}\n"),
                json!({ "shift": shift.map(), "interval": i, "count": count.to_string(), "remainder": rem }),
            ))
        }
    }
}

fn localization(l: &LocArgs) -> Result<Localization, InputError> {
    Localization::new(l.zero.clone(), l.one.clone()).map_err(input)
}

fn field(c: &FieldCmd, seed: u64) -> Res {
    match c {
        FieldCmd::Eval { loc, expr } => {
            let l = localization(loc)?;
            let v = eval_expr(&l, expr)?;
            Ok(Report::ok(format!("{v}\n"), json!({ "localization": l, "expr": expr, "value": v })))
        }
        FieldCmd::Verify { loc, samples } => {
            let l = localization(loc)?;
            let rep = fieldgen::verify_field_axioms(&l, *samples, seed).map_err(input)?;
            let order = if l.one() > l.zero() {
                Some(fieldgen::order_compatibility(&l, *samples, seed).map_err(input)?)
            } else {
                None
            };
            let mut text = String::new();
            for a in &rep.axioms {
                let name = serde_json::to_value(a.axiom).unwrap_or_default();
                let _ = write!(text, "{:<16} {}", name.as_str().unwrap_or_default(), if a.passed { "pass" } else { "FAIL" });
                if let Some([x, y, w]) = &a.counterexample {
                    let _ = write!(text, " at ({x}, {y}, {w})");
                }
                text.push('\n');
            }
            match &order {
                Some(o) => {
                    let _ = writeln!(text, "positives closed: {}", o.positives_closed);
                    let _ = writeln!(text, "negation reverses order: {}", o.negation_reverses);
                }
                None => text.push_str("order checks skipped: one lies below zero\n"),
            }
            let holds = rep.all_pass() && order.as_ref().is_none_or(|o| o.passed());
            Ok(Report::verdict(holds, text, json!({ "field": rep, "order": order })))
        }
        FieldCmd::Iso {
            from_zero,
            from_one,
            to_zero,
            to_one,
            samples,
        } => {
            let l1 = Localization::new(from_zero.clone(), from_one.clone()).map_err(input)?;
            let l2 = Localization::new(to_zero.clone(), to_one.clone()).map_err(input)?;
            let phi = fieldgen::localization_iso(&l1, &l2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let failure = (0..*samples).find_map(|_| {
                let x = Rational::sample(&mut rng, 1000, 97);
                let y = Rational::sample(&mut rng, 1000, 97);
                (!fieldgen::iso_holds_at(&phi, &l1, &l2, &x, &y)).then_some([x, y])
            });
            let mut text = format!("phi(x) = {phi}\n");
            match &failure {
                None => {
                    let _ = writeln!(text, "homomorphism on {samples} sampled pairs");
                }
                Some([x, y]) => {
                    let _ = writeln!(text, "fails at ({x}, {y})");
                }
            }
            Ok(Report::verdict(
                failure.is_none(),
                text,
                json!({ "from": l1, "to": l2, "phi": phi, "samples": samples, "counterexample": failure }),
            ))
        }
        FieldCmd::Stretch { loc, factor, lo, hi } => {
            let l = localization(loc)?;
            let i = Interval::new(lo.clone(), hi.clone()).map_err(input)?;
            let img = fieldgen::stretch_image(&l, factor, &i).map_err(input)?;
            let shown = if img.reversed {
                format!("({}, {}]", img.interval.lo, img.interval.hi)
            } else {
                img.interval.to_string()
            };
            Ok(Report::ok(
                format!(
                    "{i} -> {shown}{}\n",
                    if img.reversed { " (order reversed)" } else { "" }
                ),
                json!({ "localization": l, "factor": factor, "interval": i, "image": img }),
            ))
        }
    }
}

/// Recursive descent over the localized field operations.
struct ExprParser<'a> {
    l: &'a Localization,
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn skip(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> InputError {
        InputError(format!("expression column {}: {msg}", self.pos + 1))
    }

    fn expr(&mut self) -> Result<Rational, InputError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { self.l.add(&acc, &rhs) } else { self.l.sub(&acc, &rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Rational, InputError> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' {
                self.l.mul(&acc, &rhs)
            } else {
                self.l.div(&acc, &rhs).map_err(input)?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Rational, InputError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.l.neg(&v));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Rational, InputError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'[') => {
                let start = self.pos + 1;
                let end = self.src[start..]
                    .iter()
                    .position(|&c| c == b']')
                    .ok_or_else(|| self.err("unclosed `[`"))?;
                let lit = std::str::from_utf8(&self.src[start..start + end]).map_err(input)?;
                self.pos = start + end + 1;
                lit.trim().parse().map_err(input)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let lit = std::str::from_utf8(&self.src[start..self.pos]).map_err(input)?;
                lit.parse().map_err(input)
            }
            Some(_) => Err(self.err("expected a number, `[p/q]` or `(`")),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Evaluates `expr` with the operations of `l`.
pub fn eval_field_expr(l: &Localization, expr: &str) -> Result<Rational, String> {
    eval_expr(l, expr).map_err(|e| e.0)
}

fn eval_expr(l: &Localization, expr: &str) -> Result<Rational, InputError> {
    let mut p = ExprParser {
        l,
        src: expr.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

fn point_list(s: &str) -> Result<Vec<ProjPoint>, InputError> {
    s.split(',').map(|p| p.parse::<ProjPoint>().map_err(input)).collect()
}

fn rational_list(s: &str) -> Result<Vec<Rational>, InputError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<Rational>().map_err(input))
        .collect()
}

fn random_point(rng: &mut ChaCha8Rng) -> ProjPoint {
    if rng.gen_ratio(1, 12) {
        ProjPoint::Infinity
    } else {
        ProjPoint::Finite(Rational::sample(rng, 50, 9))
    }
}

/// `count` random triples of pairwise distinct points.
pub fn random_triples(rng: &mut ChaCha8Rng, count: usize) -> Vec<[ProjPoint; 3]> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let t = [random_point(rng), random_point(rng), random_point(rng)];
        if t[0] != t[1] && t[1] != t[2] && t[0] != t[2] {
            out.push(t);
        }
    }
    out
}

fn cyclic_cmd(c: &CyclicCmd, seed: u64) -> Res {
    match c {
        CyclicCmd::Orient { points } => {
            let pts = point_list(points)?;
            let [p, q, r] = <[ProjPoint; 3]>::try_from(pts).map_err(|_| InputError("need exactly three points".into()))?;
            let o = cyclic::cyclic_orient(&p, &q, &r).map_err(input)?;
            Ok(Report::ok(
                format!("cyclic({p}, {q}, {r}) = {o}\n"),
                json!({ "points": [p, q, r], "cyclic": o }),
            ))
        }
        CyclicCmd::Linearize { at, points } => {
            let pts = point_list(points)?;
            let sorted = cyclic::linearize_at(at.clone()).sort(&pts).map_err(input)?;
            let shown: Vec<String> = sorted.iter().map(ToString::to_string).collect();
            Ok(Report::ok(
                format!("{}\n", shown.join(" < ")),
                json!({ "at": at, "sorted": sorted }),
            ))
        }
        CyclicCmd::Mobius { a, b, c, d, samples } => {
            let m = MobiusMap::new(a.clone(), b.clone(), c.clone(), d.clone()).map_err(input)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let triples = random_triples(&mut rng, (*samples).max(1));
            let o = cyclic::mobius_orientation(&m, &triples).map_err(input)?;
            let expected = Orientation::expected(&m);
            let name = serde_json::to_value(o).unwrap_or_default();
            Ok(Report::verdict(
                o == expected,
                format!("{m}: {} (det {})\n", name.as_str().unwrap_or_default(), m.det()),
                json!({ "map": m, "det": m.det(), "orientation": o, "expected": expected, "samples": triples.len() }),
            ))
        }
    }
}

fn oracle(kind: OracleKind, target: &Rational) -> Result<CutOracle, InputError> {
    Ok(match kind {
        OracleKind::Lt => CutOracle::lt(target.clone()),
        OracleKind::Le => CutOracle::le(target.clone()),
        OracleKind::SqLt => CutOracle::sq_lt(target.clone()).map_err(input)?,
    })
}

fn oracle_spec(spec: &str) -> Result<CutOracle, InputError> {
    let mut parts = spec.split_whitespace();
    let (Some(kind), Some(target), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(InputError(format!("oracle `{spec}`: expected `lt C`, `le C` or `sq-lt T`")));
    };
    let kind = OracleKind::from_str(kind, false).map_err(InputError)?;
    oracle(kind, &target.parse().map_err(input)?)
}

fn cuts_cmd(c: &CutsCmd) -> Res {
    match c {
        CutsCmd::Rays { set } => {
            let xs = rational_list(set)?;
            let (up, down) = (cuts::upper_set(&xs), cuts::lower_set(&xs));
            let mut text = format!("upper: {up}\nlower: {down}\n");
            if xs.is_empty() {
                text.push_str("note: the empty set is bounded by everything\n");
            }
            Ok(Report::ok(text, json!({ "set": xs, "upper": up, "lower": down, "empty_set": xs.is_empty() })))
        }
        CutsCmd::Galois { set } => {
            let xs = rational_list(set)?;
            let rep = cuts::galois_closure_check(&xs).map_err(input)?;
            let text = format!(
                "X^>   = {}\nX^><  = {}\nX^><> = {}\nX^<   = {}\nX^<>  = {}\nX^<>< = {}\n{}\n",
                rep.upper,
                rep.upper_lower,
                rep.upper_lower_upper,
                rep.lower,
                rep.lower_upper,
                rep.lower_upper_lower,
                if rep.passed() { "pass" } else { "FAIL" }
            );
            let passed = rep.passed();
            Ok(Report::verdict(passed, text, json!({ "set": xs, "report": rep, "passed": passed })))
        }
        CutsCmd::Classify { oracle: kind, target, bound } => {
            let o = oracle(*kind, target)?;
            let class = cuts::classify_cut(&o, *bound).map_err(input)?;
            Ok(Report::ok(
                format!("{}: {class}\n", o.label()),
                json!({ "oracle": o.label(), "bound": bound, "result": class }),
            ))
        }
        CutsCmd::Probe { oracles, bound } => {
            let family = oracles.iter().map(|s| oracle_spec(s)).collect::<Result<Vec<_>, _>>()?;
            let verdict = cuts::connectivity_probe(&family, *bound).map_err(input)?;
            let (holds, text) = match &verdict {
                Connectivity::ConnectedEvidence { classes } => (
                    true,
                    format!("connected evidence: all {} cuts principal at bound {bound}\n", classes.len()),
                ),
                Connectivity::Disconnected { label, class, .. } => (false, format!("disconnected: {label} is a {class}\n")),
                Connectivity::Inconclusive { classes } => {
                    let open = classes.iter().filter(|c| matches!(c, CutClass::Unresolved { .. })).count();
                    (true, format!("inconclusive: {open} unresolved cuts\n"))
                }
            };
            Ok(Report::verdict(holds, text, json!({ "bound": bound, "verdict": verdict })))
        }
    }
}
