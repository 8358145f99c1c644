use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use goppa_cyclic::cyclic::{extract_generator, min_distance};
use goppa_cyclic::gf2m::FieldSpec;
use goppa_cyclic::goppa::{admissible_poly, build_code, Coefficients, GoppaInstance, Variant};
use goppa_cyclic::harness::{
    reproduce_example, run_case, sweep, tower_for, CaseSpec, MatrixSource, SupportSelector,
    SweepConfig,
};
use goppa_cyclic::projline::{orbit_of, partition, spectral, MoebiusMap, ProjPoint};
use goppa_cyclic::Result;

#[derive(Parser)]
#[command(
    name = "goppa-cyclic",
    version,
    about = "Cyclic Goppa codes from projective-linear maps"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// m=<int>[,poly=0x<hex>]
    #[arg(long)]
    field: String,
}

#[derive(Args, Clone)]
struct MapArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// [[a,b],[c,d]] with element literals such as g^5, 0, 1
    #[arg(long)]
    matrix: String,
    #[arg(long, default_value_t = 0)]
    frob: u32,
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[command(flatten)]
    map: MapArgs,
    /// orbit-of:<elt>, orbit-infty or auto
    #[arg(long, default_value = "auto")]
    support: String,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long, default_value_t = 0)]
    t: u32,
    #[arg(long, default_value = "expurgated")]
    variant: String,
    /// Take g with coefficients in the base field (needs s = t when the
    /// eigenvalues lie in the extension).
    #[arg(long)]
    base_coefficients: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a field and print its parameters.
    Field(FieldArgs),
    /// Order, eigenvalues and fixed points of a map.
    Spectral(MapArgs),
    /// One orbit, or the whole partition of the projective line.
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        /// A point literal or inf; omit for the full partition.
        #[arg(long)]
        point: Option<String>,
    },
    /// Build a Goppa code and report its dimension.
    Code {
        #[command(flatten)]
        args: CodeArgs,
        /// Also compute the minimum distance.
        #[arg(long)]
        distance: bool,
    },
    /// Build a code and compare its generator with the prediction.
    Verify(CodeArgs),
    /// Rebuild one of the worked examples.
    Reproduce {
        #[arg(long)]
        example: String,
    },
    /// Seeded random cases.
    Sweep {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Additional probes of maps with a Frobenius twist.
        #[arg(long, default_value_t = 0)]
        twisted: usize,
    },
}

struct Outcome {
    report: Value,
    text: String,
    ok: bool,
}

fn parse_field(text: &str) -> Result<FieldSpec> {
    let text = text.trim();
    if text.starts_with("gf2m") {
        FieldSpec::parse(text)
    } else {
        FieldSpec::parse(&format!("gf2m {text}"))
    }
}

fn parse_map(args: &MapArgs) -> Result<MoebiusMap> {
    let field = parse_field(&args.field.field)?;
    MoebiusMap::parse(&field, &args.matrix, args.frob)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn field_cmd(args: &FieldArgs) -> Result<Outcome> {
    let f = parse_field(&args.field)?;
    let report = json!({
        "m": f.m(),
        "poly": format!("{:#x}", f.poly()),
        "generator": format!("{:#b}", f.generator().bits()),
        "size": f.size(),
        "default_poly": f.is_default_poly(),
    });
    Ok(Outcome {
        text: format!("{f}\nsize {}", f.size()),
        report,
        ok: true,
    })
}

fn spectral_cmd(args: &MapArgs) -> Result<Outcome> {
    let map = parse_map(args)?;
    let tower = tower_for(map.field())?;
    let s = spectral(&map, &tower)?;
    let report = json!({
        "matrix": map.to_string(),
        "order": s.n,
        "branch": if s.reducible { "reducible" } else { "irreducible" },
        "working_field": s.working_field().to_string(),
        "trace": s.trace.to_string(),
        "rho": s.rho.to_string(),
        "rho_inv": s.rho_inv.to_string(),
        "fixed_points": [s.fixed1.to_string(), s.fixed2.to_string()],
        "diagonalizes": s.diagonalizes(),
    });
    let text =
        format!(
        "matrix {map}\norder {}\nbranch {}\nworking field {}\nrho {} rho^-1 {}\nfixed points {} {}",
        s.n,
        if s.reducible { "reducible" } else { "irreducible" },
        s.working_field(),
        s.rho,
        s.rho_inv,
        s.fixed1,
        s.fixed2
    );
    Ok(Outcome {
        report,
        text,
        ok: true,
    })
}

fn orbit_cmd(args: &MapArgs, point: Option<&str>) -> Result<Outcome> {
    let map = parse_map(args)?;
    let orbits = match point {
        Some(p) => vec![orbit_of(&map, &ProjPoint::parse(map.field(), p)?)],
        None => partition(&map)?,
    };
    let lists: Vec<Vec<String>> = orbits
        .iter()
        .map(|o| o.points().iter().map(ToString::to_string).collect())
        .collect();
    let text = lists
        .iter()
        .map(|l| format!("[{}] ({})", l.join(", "), l.len()))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome {
        report: json!({ "matrix": map.to_string(), "orbits": lists }),
        text,
        ok: true,
    })
}

fn code_cmd(args: &CodeArgs, distance: bool) -> Result<Outcome> {
    let variant: Variant = args.variant.parse()?;
    if variant != Variant::Plain {
        let case = case_from(args)?;
        let r = run_case(&case)?;
        let mut report = json!({
            "n": r.n,
            "k": r.k,
            "variant": r.variant,
            "goppa_polynomial": r.goppa_polynomial,
            "support": r.support,
            "is_cyclic": r.is_cyclic,
            "generator_hex": r.generator_hex,
            "generator_human": r.generator_human,
            "warnings": r.warnings,
        });
        if distance {
            report["d"] = json!(r.d);
        }
        let mut text = format!(
            "[{}, {}] {} code, g = {}",
            r.n, r.k, r.variant, r.goppa_polynomial
        );
        if distance {
            text += &format!(
                "\nd = {}",
                r.d.map_or("undefined".into(), |d| d.to_string())
            );
        }
        for w in &r.warnings {
            text += &format!("\nwarning: {w}");
        }
        return Ok(Outcome {
            report,
            text,
            ok: true,
        });
    }
    // plain codes: no prediction, any orbit avoiding the roots of g
    let map = parse_map(&args.map)?;
    let s = spectral(&map, &tower_for(map.field())?)?;
    let g = admissible_poly(&s, args.s, args.t, Coefficients::Working)?.g;
    let selector: SupportSelector = args.support.parse()?;
    let support = match selector {
        SupportSelector::OrbitOf(lit) => {
            let x = s.base_field().parse_element(&lit)?;
            let x = if s.reducible { x } else { s.tower.embed(&x)? };
            orbit_of(&s.working_map, &ProjPoint::Finite(x)).finite_points()
        }
        _ => goppa_cyclic::harness::first_free_orbit(&s.working_map, s.n)?.finite_points(),
    };
    let code = build_code(&GoppaInstance::new(support, g.clone(), Variant::Plain)?);
    let rep = extract_generator(&code, false)?;
    let d = if distance { min_distance(&code)? } else { None };
    Ok(Outcome {
        report: json!({
            "n": code.n(), "k": code.k(), "variant": "plain", "d": d,
            "goppa_polynomial": g.to_human(), "is_cyclic": rep.is_cyclic,
            "generator_hex": rep.generator.as_ref().and_then(|g| g.to_hex()),
        }),
        text: format!(
            "[{}, {}] plain code, g = {}",
            code.n(),
            code.k(),
            g.to_human()
        ),
        ok: true,
    })
}

fn case_from(args: &CodeArgs) -> Result<CaseSpec> {
    let field = parse_field(&args.map.field.field)?;
    let mut case = CaseSpec::new(
        "cli",
        field.m(),
        MatrixSource::Literal {
            text: args.map.matrix.clone(),
        },
        args.s,
        args.t,
        args.variant.parse()?,
    );
    case.poly = Some(field.poly());
    case.frob = args.map.frob;
    case.support = args.support.parse()?;
    if args.base_coefficients {
        case.coefficients = Coefficients::Base;
    }
    Ok(case)
}

fn verify_cmd(args: &CodeArgs) -> Result<Outcome> {
    let r = run_case(&case_from(args)?)?;
    let text = format!(
        "[{}, {}, {}] {} s={} t={}\ngenerator {}\npredicted {}\nmatch {}",
        r.n,
        r.k,
        r.d.map_or("-".into(), |d| d.to_string()),
        r.variant,
        r.s,
        r.t,
        r.generator_human
            .clone()
            .unwrap_or_else(|| "none (not cyclic)".into()),
        r.predicted_generator_human,
        r.matches
    );
    Ok(Outcome {
        ok: r.matches,
        report: to_value(&r),
        text,
    })
}

fn reproduce_cmd(id: &str) -> Result<Outcome> {
    let rep = reproduce_example(id)?;
    let mut text = format!(
        "example {} over {} with {}\n",
        rep.id, rep.field, rep.matrix
    );
    for c in &rep.cases {
        text += &format!(
            "  s={} t={} {:<10} [{}, {}, {}] {} {}\n",
            c.s,
            c.t,
            c.variant.to_string(),
            c.n,
            c.k,
            c.d.map_or("-".into(), |d| d.to_string()),
            c.generator_human.as_deref().unwrap_or("-"),
            if c.matches { "ok" } else { "MISMATCH" }
        );
    }
    for c in &rep.checks {
        text += &format!(
            "  {}: {} ({})\n",
            c.name,
            if c.ok { "ok" } else { "FAIL" },
            c.detail
        );
    }
    for n in &rep.notes {
        text += &format!("  note: {n}\n");
    }
    Ok(Outcome {
        ok: rep.pass,
        report: to_value(&rep),
        text,
    })
}

fn sweep_cmd(count: usize, seed: u64, twisted: usize) -> Result<Outcome> {
    let mut config = SweepConfig::new(count, seed);
    config.twisted_probes = twisted;
    let sum = sweep(&config);
    let mut text = format!(
        "{} cases (seed {}): {} passed, {} failed, {} skipped\nreducible {} irreducible {}, expurgated {} extended {}, zero codes {}",
        sum.count,
        sum.seed,
        sum.passed,
        sum.failed,
        sum.skipped,
        sum.reducible,
        sum.irreducible,
        sum.expurgated,
        sum.extended,
        sum.zero_codes
    );
    if twisted > 0 {
        text += &format!(
            "\ntwisted probes {}: {} with an invariant g, {} cyclic",
            sum.twisted.probes, sum.twisted.with_invariant_polynomial, sum.twisted.cyclic
        );
    }
    for f in &sum.failures {
        text += &format!("\nFAIL {}: {:?}", f.label, f.invariant_failures);
    }
    for e in &sum.errors {
        text += &format!("\nERROR {e}");
    }
    Ok(Outcome {
        ok: sum.ok(),
        report: to_value(&sum),
        text,
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Field(a) => field_cmd(a),
        Command::Spectral(a) => spectral_cmd(a),
        Command::Orbit { map, point } => orbit_cmd(map, point.as_deref()),
        Command::Code { args, distance } => code_cmd(args, *distance),
        Command::Verify(a) => verify_cmd(a),
        Command::Reproduce { example } => reproduce_cmd(example),
        Command::Sweep {
            count,
            seed,
            twisted,
        } => sweep_cmd(*count, *seed, *twisted),
    }
}

fn emit(cli: &Cli, body: String) -> ExitCode {
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, body + "\n") {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{body}"),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.report).unwrap()
            } else {
                out.text
            };
            let code = emit(&cli, body);
            if code != ExitCode::SUCCESS {
                return code;
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let status = if e.is_skip() { 3 } else { 2 };
            if cli.json {
                let body = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
                println!("{}", serde_json::to_string_pretty(&body).unwrap());
            } else {
                eprintln!("error ({}): {e}", e.kind());
            }
            ExitCode::from(status)
        }
    }
}
