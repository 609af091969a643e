//! `qrm`: quantum Reed-Muller subcube codes from the command line.
//!
//! Exit codes: 0 success, 1 domain error (invalid code, out-of-band subset),
//! 2 usage error, 3 verification failure with witness.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qrm_core::classify::{
    admissible_table, classify_dim, thresholds, Classification, OperatorSpec,
};
use qrm_core::code::{table_rows, LogicalIndex, QrmCode};
use qrm_core::error::Error;
use qrm_core::hypercube::{parse_subcube, GenSet, OctaSimplex, Subcube};
use qrm_core::oracle::{
    auto_mode, oracle_classify, phase_of_operator, verify_equivalence_with, OracleMode,
    DEFAULT_SAMPLES, DEFAULT_SEED,
};
use qrm_core::pauli::Basis;
use qrm_core::ring::conjecture_probe;
use qrm_core::synthesis::{
    arbitrary_subcube_circuit, decompose_to_standard, minimal_covers, CzCircuit, Gate,
};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "qrm",
    about = "Quantum Reed-Muller codes via hypercube subcubes: parameters, operator classification, multi-controlled-Z synthesis, brute-force verification",
    version
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for sampled verification and randomized probes.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Force sampled verification with this many logical words.
    #[arg(long, global = true)]
    sample: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Z,
    X,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Basis {
        match b {
            BasisArg::Z => Basis::Z,
            BasisArg::X => Basis::X,
        }
    }
}

#[derive(Args)]
struct CodeArgs {
    /// Hypercube dimension (2^m physical qubits).
    m: u32,
    /// X stabilizers act on (m-q)-cubes.
    q: u32,
    /// Z stabilizers act on (r+1)-cubes.
    r: u32,
}

impl CodeArgs {
    fn build(&self) -> Result<QrmCode, Error> {
        QrmCode::new(self.m, self.q, self.r)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Code parameters [[n, kappa, d]] and the top hierarchy level.
    Params(CodeArgs),

    /// All codes with at least one logical qubit and k_max above a bound.
    Table {
        #[arg(long, default_value_t = 10)]
        max_m: u32,
        #[arg(long, default_value_t = 2)]
        min_kmax: u32,
    },

    /// Classify a subcube operator, or print the whole admissible table.
    Classify {
        #[command(flatten)]
        code: CodeArgs,
        /// Hierarchy level of the single-qubit rotation.
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, value_enum, default_value_t = BasisArg::Z)]
        basis: BasisArg,
        /// Alternate the rotation with its adjoint by vertex parity.
        #[arg(long)]
        signed: bool,
        /// Subcube, e.g. "0110+<1,4>" or "<2,3,4>".
        #[arg(long, conflicts_with_all = ["cube_dim", "admissible"])]
        cube: Option<String>,
        /// Classify by dimension alone.
        #[arg(long, conflicts_with = "admissible")]
        cube_dim: Option<u32>,
        /// Print classifications for all operator kinds and dimensions.
        #[arg(long)]
        admissible: bool,
        /// Highest level row of the admissible table (default: k_max).
        #[arg(long)]
        max_k: Option<u32>,
    },

    /// The minimal covers of a generator subset.
    Covers {
        #[command(flatten)]
        code: CodeArgs,
        /// Comma-separated generator indices, e.g. "1,2,3".
        #[arg(long = "K")]
        k_set: String,
    },

    /// The logical multi-controlled-Z circuit of a subcube operator.
    Synthesize {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        k: u32,
        /// Standard subcube by generator indices, e.g. "1,2,3".
        #[arg(long = "K", conflicts_with = "cube")]
        k_set: Option<String>,
        /// Arbitrary subcube, e.g. "1000+<2,3,4>".
        #[arg(long)]
        cube: Option<String>,
        #[arg(long)]
        signed: bool,
        /// Also emit the physical transversal operator as OpenQASM.
        #[arg(long)]
        qasm: bool,
    },

    /// Standard-subcube decomposition of a subcube operator.
    Decompose {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        cube: String,
        #[arg(long)]
        signed: bool,
    },

    /// Brute-force verification of an operator, optionally against a circuit.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        cube: String,
        #[arg(long)]
        signed: bool,
        /// Circuit JSON emitted by `synthesize` to check equivalence against.
        #[arg(long)]
        against_circuit: Option<String>,
    },

    /// Convert between subcubes and hyperoctahedral simplices.
    Dual {
        #[arg(long)]
        m: u32,
        #[arg(long, conflicts_with = "simplex")]
        cube: Option<String>,
        /// Simplex string over {0,1,*}, e.g. "1*0".
        #[arg(long)]
        simplex: Option<String>,
    },

    /// Randomized probe of the stacked-module membership of preserving
    /// diagonal operators.
    RingProbe {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
}

struct CommandOutput {
    payload: Value,
    text: String,
    exit: u8,
}

impl CommandOutput {
    fn ok(payload: Value, text: String) -> Self {
        CommandOutput {
            payload,
            text,
            exit: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.payload).expect("serializable payload")
                ),
                Format::Text => println!("{}", out.text),
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<CommandOutput, Error> {
    match &cli.command {
        Command::Params(code) => cmd_params(code),
        Command::Table { max_m, min_kmax } => cmd_table(*max_m, *min_kmax),
        Command::Classify {
            code,
            k,
            basis,
            signed,
            cube,
            cube_dim,
            admissible,
            max_k,
        } => cmd_classify(
            code,
            *k,
            (*basis).into(),
            *signed,
            cube.as_deref(),
            *cube_dim,
            *admissible,
            *max_k,
        ),
        Command::Covers { code, k_set } => cmd_covers(code, k_set),
        Command::Synthesize {
            code,
            k,
            k_set,
            cube,
            signed,
            qasm,
        } => cmd_synthesize(code, *k, k_set.as_deref(), cube.as_deref(), *signed, *qasm),
        Command::Decompose {
            code,
            k,
            cube,
            signed,
        } => cmd_decompose(code, *k, cube, *signed),
        Command::Verify {
            code,
            k,
            cube,
            signed,
            against_circuit,
        } => cmd_verify(
            code,
            *k,
            cube,
            *signed,
            against_circuit.as_deref(),
            cli.sample,
            cli.seed,
        ),
        Command::Dual { m, cube, simplex } => cmd_dual(*m, cube.as_deref(), simplex.as_deref()),
        Command::RingProbe { code, k, trials } => cmd_ring_probe(code, *k, *trials, cli.seed),
    }
}

fn code_json(code: &QrmCode) -> Value {
    json!({ "m": code.m(), "q": code.q(), "r": code.r() })
}

fn tag_name(tag: Classification) -> &'static str {
    match tag {
        Classification::NotPreserving => "NotPreserving",
        Classification::Stabilizer => "Stabilizer",
        Classification::NontrivialLogical => "NontrivialLogical",
    }
}

fn tag_cell(tag: Classification) -> &'static str {
    match tag {
        Classification::NontrivialLogical => "L",
        Classification::Stabilizer => "I",
        Classification::NotPreserving => ".",
    }
}

fn parse_gen_list(s: &str, m: u32) -> Result<GenSet, Error> {
    let mut set = GenSet::EMPTY;
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: u32 = part
            .parse()
            .map_err(|_| Error::Parse(format!("invalid generator index {part:?}")))?;
        if i < 1 || i > m {
            return Err(Error::Parse(format!(
                "generator index {i} out of range 1..={m}"
            )));
        }
        if set.contains(i) {
            return Err(Error::Parse(format!("duplicate generator index {i}")));
        }
        set = set.insert(i);
    }
    Ok(set)
}

fn gate_labels(gate: &Gate) -> Vec<String> {
    gate.iter().map(|j| format!("J={}", j.0)).collect()
}

fn parse_gate_label(label: &str, m: u32) -> Result<LogicalIndex, Error> {
    let inner = label
        .strip_prefix("J={")
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("expected a label like J={{1,3}}, got {label:?}")))?;
    Ok(LogicalIndex(parse_gen_list(inner, m)?))
}

fn circuit_json(code: &QrmCode, k: u32, signed: bool, circuit: &CzCircuit) -> Value {
    let gates: Vec<Vec<String>> = circuit.gates().map(gate_labels).collect();
    json!({
        "schema": SCHEMA,
        "code": code_json(code),
        "k": k,
        "signed": signed,
        "gates": gates,
        "text": circuit.to_string(),
    })
}

fn parse_circuit_json(raw: &str, m: u32) -> Result<CzCircuit, Error> {
    let value: Value =
        serde_json::from_str(raw).map_err(|e| Error::Parse(format!("bad circuit JSON: {e}")))?;
    let gates = value
        .get("gates")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("circuit JSON lacks a `gates` array".into()))?;
    let mut parsed = Vec::new();
    for gate in gates {
        let members = gate
            .as_array()
            .ok_or_else(|| Error::Parse("each gate must be an array of labels".into()))?;
        let mut g = Gate::new();
        for label in members {
            let label = label
                .as_str()
                .ok_or_else(|| Error::Parse("gate labels must be strings".into()))?;
            g.insert(parse_gate_label(label, m)?);
        }
        parsed.push(g);
    }
    Ok(CzCircuit::from_gates(parsed))
}

/// The physical transversal operator as OpenQASM over the fixed vertex
/// ordering; `z_k` is rz(pi/2^k) up to global phase.
fn qasm_of(spec: &OperatorSpec) -> String {
    let k = spec.level;
    let denom = 1u64 << k;
    let angle = if denom == 1 {
        "pi".to_string()
    } else {
        format!("pi/{denom}")
    };
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    out.push_str(&format!(
        "// z_{k} == rz({angle}) up to global phase; z_{k}_dg is its inverse\n"
    ));
    out.push_str(&format!("gate z_{k} a {{ rz({angle}) a; }}\n"));
    out.push_str(&format!("gate z_{k}_dg a {{ rz(-{angle}) a; }}\n"));
    out.push_str(&format!("qreg q[{}];\n", 1u64 << spec.subcube.m()));
    let mut vertices: Vec<u32> = spec.subcube.vertices().collect();
    vertices.sort_unstable();
    for v in vertices {
        if spec.signed && v.count_ones() % 2 == 1 {
            out.push_str(&format!("z_{k}_dg q[{v}];\n"));
        } else {
            out.push_str(&format!("z_{k} q[{v}];\n"));
        }
    }
    out
}

fn cmd_params(args: &CodeArgs) -> Result<CommandOutput, Error> {
    let code = args.build()?;
    let p = code.params();
    let payload = json!({
        "schema": SCHEMA,
        "m": code.m(),
        "q": code.q(),
        "r": code.r(),
        "n": p.n,
        "kappa": p.kappa,
        "d": p.d,
        "k_max": p.k_max,
    });
    let text = format!(
        "{code}: [[{}, {}, {}]], k_max = {}",
        p.n, p.kappa, p.d, p.k_max
    );
    Ok(CommandOutput::ok(payload, text))
}

fn cmd_table(max_m: u32, min_kmax: u32) -> Result<CommandOutput, Error> {
    let rows = table_rows(max_m, min_kmax)?;
    let payload = json!({
        "schema": SCHEMA,
        "max_m": max_m,
        "min_kmax": min_kmax,
        "rows": rows,
    });
    let mut text = String::from("m\tq\tr\tn\tkappa\td\tk_max");
    for row in &rows {
        text.push_str(&format!(
            "\n{}\t{}\t{}\t{}\t{}\t{}\t{}",
            row.m, row.q, row.r, row.n, row.kappa, row.d, row.k_max
        ));
    }
    Ok(CommandOutput::ok(payload, text))
}

#[allow(clippy::too_many_arguments)]
fn cmd_classify(
    args: &CodeArgs,
    k: u32,
    basis: Basis,
    signed: bool,
    cube: Option<&str>,
    cube_dim: Option<u32>,
    admissible: bool,
    max_k: Option<u32>,
) -> Result<CommandOutput, Error> {
    let code = args.build()?;
    if admissible {
        let top = max_k.unwrap_or_else(|| code.k_max());
        let table = admissible_table(&code, top);
        let rows: Vec<Value> = table
            .iter()
            .map(|row| {
                json!({
                    "label": row.label(),
                    "basis": row.basis,
                    "k": row.level,
                    "entries": row.entries.iter().map(|&t| tag_name(t)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let payload = json!({
            "schema": SCHEMA,
            "code": code_json(&code),
            "dims": (0..=code.m()).collect::<Vec<_>>(),
            "rows": rows,
        });
        let mut text =
            format!("{code} admissible dimensions (L logic, I identity, . leaves code space)\n");
        text.push_str("dim     ");
        for d in 0..=code.m() {
            text.push_str(&format!("{d:>3}"));
        }
        for row in &table {
            text.push_str(&format!("\n{:<8}", row.label()));
            for &t in &row.entries {
                text.push_str(&format!("{:>3}", tag_cell(t)));
            }
        }
        return Ok(CommandOutput::ok(payload, text));
    }

    let dim = match (cube, cube_dim) {
        (Some(s), None) => parse_subcube(s, code.m())?.dim(),
        (None, Some(d)) => {
            if d > code.m() {
                return Err(Error::InvalidArgument(format!(
                    "cube dimension {d} exceeds m={}",
                    code.m()
                )));
            }
            d
        }
        _ => {
            return Err(Error::InvalidArgument(
                "classify needs exactly one of --cube, --cube-dim, --admissible".into(),
            ))
        }
    };
    let tag = classify_dim(&code, basis, k, dim);
    let t = thresholds(&code, basis, k);
    let payload = json!({
        "schema": SCHEMA,
        "code": code_json(&code),
        "basis": basis,
        "k": k,
        "signed": signed,
        "dim": dim,
        "tag": tag_name(tag),
        "thresholds": {
            "preserve_min_dim": t.preserve_min_dim,
            "logical_max_dim": t.logical_max_dim,
            "stabilizer_min_dim": t.stabilizer_min_dim,
        },
    });
    let text = format!(
        "{code} {:?}({k}) on a dim-{dim} subcube: {} (preserves at dim >= {}, logic through dim {}, stabilizer at dim >= {})",
        basis,
        tag_name(tag),
        t.preserve_min_dim,
        t.logical_max_dim,
        t.stabilizer_min_dim
    );
    Ok(CommandOutput::ok(payload, text))
}

fn cmd_covers(args: &CodeArgs, k_list: &str) -> Result<CommandOutput, Error> {
    let code = args.build()?;
    let k_set = parse_gen_list(k_list, code.m())?;
    let family = minimal_covers(&code, k_set)?;
    let covers: Vec<Vec<String>> = family.covers.iter().map(gate_labels).collect();
    let payload = json!({
        "schema": SCHEMA,
        "code": code_json(&code),
        "K": k_set.to_string(),
        "k": family.level,
        "count": covers.len(),
        "covers": covers,
    });
    let mut text = format!(
        "{code}: {} minimal covers of K={k_set} (level {})",
        family.covers.len(),
        family.level
    );
    for cover in &family.covers {
        let members: Vec<String> = cover.iter().map(|j| j.0.to_string()).collect();
        text.push_str(&format!("\n[{}]", members.join(",")));
    }
    Ok(CommandOutput::ok(payload, text))
}

fn cmd_synthesize(
    args: &CodeArgs,
    k: u32,
    k_list: Option<&str>,
    cube: Option<&str>,
    signed: bool,
    qasm: bool,
) -> Result<CommandOutput, Error> {
    let code = args.build()?;
    let subcube = match (k_list, cube) {
        (Some(list), None) => Subcube::standard(code.m(), parse_gen_list(list, code.m())?)?,
        (None, Some(s)) => parse_subcube(s, code.m())?,
        _ => {
            return Err(Error::InvalidArgument(
                "synthesize needs exactly one of --K, --cube".into(),
            ))
        }
    };
    let spec = OperatorSpec::z(k, subcube, signed);
    let circuit = arbitrary_subcube_circuit(&code, &spec)?;
    let mut payload = circuit_json(&code, k, signed, &circuit);
    payload["cube"] = Value::String(subcube.to_string());
    let mut text = format!(
        "{code} {}Z({k}) on {subcube} implements: {circuit}",
        if signed { "signed " } else { "" }
    );
    if qasm {
        let q = qasm_of(&spec);
        payload["qasm"] = Value::String(q.clone());
        text.push_str("\n--- physical operator ---\n");
        text.push_str(&q);
    }
    Ok(CommandOutput::ok(payload, text))
}

fn cmd_decompose(
    args: &CodeArgs,
    k: u32,
    cube: &str,
    signed: bool,
) -> Result<CommandOutput, Error> {
    let code = args.build()?;
    let subcube = parse_subcube(cube, code.m())?;
    let terms = decompose_to_standard(&code, k, &subcube, signed)?;
    let term_values: Vec<Value> = terms
        .iter()
        .map(|(level, k_set)| json!({ "level": level, "K": k_set.to_string() }))
        .collect();
    let payload = json!({
        "schema": SCHEMA,
        "code": code_json(&code),
        "cube": subcube.to_string(),
        "k": k,
        "signed": signed,
        "terms": term_values,
    });
    let mut text = format!("{code}: {} standard terms for {subcube}", terms.len());
    for (level, k_set) in &terms {
        let standard = Subcube::standard(code.m(), *k_set)?;
        text.push_str(&format!("\nlevel {level} on {standard}"));
    }
    Ok(CommandOutput::ok(payload, text))
}

fn cmd_verify(
    args: &CodeArgs,
    k: u32,
    cube: &str,
    signed: bool,
    against: Option<&str>,
    sample: Option<usize>,
    seed: u64,
) -> Result<CommandOutput, Error> {
    let code = args.build()?;
    let subcube = parse_subcube(cube, code.m())?;
    let spec = OperatorSpec::z(k, subcube, signed);
    let mode = match sample {
        Some(samples) => OracleMode::Sampled { samples, seed },
        None => auto_mode(&code, DEFAULT_SAMPLES, seed)?,
    };

    if let Some(path) = against {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
        let circuit = parse_circuit_json(&raw, code.m())?;
        let report = verify_equivalence_with(&code, &spec, &circuit, mode)?;
        let payload = json!({
            "schema": SCHEMA,
            "code": code_json(&code),
            "cube": subcube.to_string(),
            "k": k,
            "signed": signed,
            "sampled": report.sampled,
            "equivalent": report.equivalent,
            "mismatch": report.mismatch,
            "not_preserving": report.not_preserving,
        });
        let text = if report.equivalent {
            format!("{code}: operator matches the circuit on all checked logical words")
        } else {
            format!("{code}: NOT equivalent ({report:?})")
        };
        return Ok(CommandOutput {
            exit: if report.equivalent { 0 } else { 3 },
            payload,
            text,
        });
    }

    let f = phase_of_operator(&spec)?;
    let verdict = oracle_classify(&code, &f, mode)?;
    let formula = qrm_core::classify(&code, &spec);
    let agrees = verdict.tag == formula;
    let ok = verdict.tag != Classification::NotPreserving && agrees;
    let payload = json!({
        "schema": SCHEMA,
        "code": code_json(&code),
        "cube": subcube.to_string(),
        "k": k,
        "signed": signed,
        "sampled": verdict.sampled,
        "tag": tag_name(verdict.tag),
        "formula_tag": tag_name(formula),
        "agrees_with_formula": agrees,
        "witness": verdict.witness,
    });
    let text = format!(
        "{code}: oracle says {} (thresholds say {})",
        tag_name(verdict.tag),
        tag_name(formula)
    );
    Ok(CommandOutput {
        exit: if ok { 0 } else { 3 },
        payload,
        text,
    })
}

fn cmd_dual(m: u32, cube: Option<&str>, simplex: Option<&str>) -> Result<CommandOutput, Error> {
    let (subcube, simplex) = match (cube, simplex) {
        (Some(s), None) => {
            let c = parse_subcube(s, m)?;
            (c, OctaSimplex::from_subcube(&c))
        }
        (None, Some(s)) => {
            let sx: OctaSimplex = s.parse()?;
            if sx.m() != m {
                return Err(Error::InvalidArgument(format!(
                    "simplex has {} cells but m={m}",
                    sx.m()
                )));
            }
            (sx.to_subcube(), sx)
        }
        _ => {
            return Err(Error::InvalidArgument(
                "dual needs exactly one of --cube, --simplex".into(),
            ))
        }
    };
    let payload = json!({
        "schema": SCHEMA,
        "m": m,
        "cube": subcube.to_string(),
        "cube_dim": subcube.dim(),
        "simplex": simplex.to_string(),
        "simplex_dim": simplex.dim(),
    });
    let text = format!(
        "cube {subcube} (dim {}) <-> simplex {simplex} (dim {})",
        subcube.dim(),
        simplex.dim()
    );
    Ok(CommandOutput::ok(payload, text))
}

fn cmd_ring_probe(args: &CodeArgs, k: u32, trials: u64, seed: u64) -> Result<CommandOutput, Error> {
    let code = args.build()?;
    let report = conjecture_probe(&code, k, trials, seed)?;
    let payload = json!({
        "schema": SCHEMA,
        "report": report,
    });
    let mut text = format!("{code} level {k}: {}", report.summary);
    for arm in &report.arms {
        text.push_str(&format!(
            "\n{:?}: {} trials, {} preserving, {} members",
            arm.arm, arm.trials, arm.preserving, arm.members
        ));
    }
    Ok(CommandOutput::ok(payload, text))
}
