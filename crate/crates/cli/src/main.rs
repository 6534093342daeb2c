use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use reducedpoly::construction::{
    build_family_member, sweep_family, DeltaRange, StartMode, SweepOptions, TargetDeltas,
    DEFAULT_RESIDUAL_TOL, REFERENCE_INITIAL_GUESS,
};
use reducedpoly::report::{sha256_hex, ConstructionDistances, JsonReport, ReportInputs};
use reducedpoly::{
    is_reduced, minimum_width, parse_off, scan_certificate, strictly_antipodal_pairs, write_off,
    AntipodalPair, Polytope, Vec3, DEFAULT_TOLERANCE,
};

#[derive(Parser)]
#[command(
    name = "reducedpoly",
    version,
    about = "Width and reducedness of convex 3-polytopes"
)]
struct Cli {
    /// Relative tolerance for all geometric comparisons.
    #[arg(long = "tol", global = true, env = "REDUCEDPOLY_TOL", default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FileArgs {
    /// Input polytope in OFF format.
    file: PathBuf,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal width and the antipodal pairs attaining it.
    Width(FileArgs),
    /// Reducedness verdict; exits 0 if reduced, 1 if not.
    Check(FileArgs),
    /// Search for a certificate of non-reducedness.
    Certify(FileArgs),
    /// All strictly antipodal face pairs.
    Antipodal(FileArgs),
    /// Solve for a reduced twelve-vertex polytope with the given distances
    /// (always at the default tolerance).
    Construct {
        #[arg(long)]
        d1: f64,
        #[arg(long)]
        d2: f64,
        #[arg(long)]
        d3: f64,
        /// Write the OFF file here instead of standard output.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Print the Newton iterates to standard error.
        #[arg(long)]
        trace: bool,
        /// JSON report path; defaults to the output path with extension `.json`.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Starting point `x,s,h,r`.
        #[arg(long, value_parser = parse_init)]
        init: Option<[f64; 4]>,
    },
    /// Solve over a grid of distances given as `lo:hi:n`.
    Sweep {
        #[arg(long, value_parser = parse_range)]
        d1: DeltaRange,
        #[arg(long, value_parser = parse_range)]
        d2: DeltaRange,
        #[arg(long, value_parser = parse_range)]
        d3: DeltaRange,
        /// Write the table here instead of standard output.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Start every cell from the default guess instead of a solved neighbour.
        #[arg(long)]
        cold: bool,
    },
}

fn parse_range(s: &str) -> Result<DeltaRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || format!("expected lo:hi:n, got '{s}'");
    match parts.as_slice() {
        [v] => v.parse().map(DeltaRange::single).map_err(|_| bad()),
        [lo, hi, n] => {
            let lo: f64 = lo.parse().map_err(|_| bad())?;
            let hi: f64 = hi.parse().map_err(|_| bad())?;
            let n: usize = n.parse().map_err(|_| bad())?;
            DeltaRange::new(lo, hi, n).map_err(|e| e.to_string())
        }
        _ => Err(bad()),
    }
}

fn parse_init(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    v.try_into()
        .map_err(|_| "expected four comma-separated numbers".to_string())
}

struct Loaded {
    polytope: Polytope,
    inputs: ReportInputs,
}

fn load(path: &Path, tol: f64) -> Result<Loaded> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone())
        .with_context(|| format!("{} is not UTF-8", path.display()))?;
    let polytope = parse_off(&text, tol).with_context(|| format!("loading {}", path.display()))?;
    Ok(Loaded {
        polytope,
        inputs: ReportInputs {
            file: Some(path.display().to_string()),
            sha256: Some(sha256_hex(&bytes)),
            tolerance: tol,
            ..Default::default()
        },
    })
}

/// Writes to stdout; a reader that went away (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn fmt_vec(v: Vec3) -> String {
    format!("({}, {}, {})", v.x, v.y, v.z)
}

fn fmt_pairs(out: &mut String, pairs: &[AntipodalPair]) {
    for p in pairs {
        let _ = writeln!(
            out,
            "  {} | {}  distance {}  direction {}",
            p.face1,
            p.face2,
            p.distance,
            fmt_vec(p.direction)
        );
    }
}

fn cmd_width(args: &FileArgs, tol: f64) -> Result<ExitCode> {
    let l = load(&args.file, tol)?;
    let w = minimum_width(&l.polytope);
    if args.json {
        let mut r = JsonReport::new("width", l.inputs);
        r.outputs.omega = Some(w.omega);
        r.outputs.attaining_pairs = Some(w.attaining_pairs);
        emit(&(r.to_json()? + "\n"))?;
    } else {
        let mut out = format!("omega = {}\n", w.omega);
        let _ = writeln!(out, "attaining pairs: {}", w.attaining_pairs.len());
        fmt_pairs(&mut out, &w.attaining_pairs);
        emit(&out)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(args: &FileArgs, tol: f64) -> Result<ExitCode> {
    let l = load(&args.file, tol)?;
    let rep = is_reduced(&l.polytope);
    let reduced = rep.reduced;
    if args.json {
        let mut r = JsonReport::new("check", l.inputs);
        r.outputs.omega = Some(rep.omega);
        r.outputs.reduced = Some(rep.reduced);
        r.outputs.reducedness = Some(rep);
        emit(&(r.to_json()? + "\n"))?;
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "reduced: {}", if reduced { "yes" } else { "no" });
        let _ = writeln!(out, "omega = {}", rep.omega);
        let _ = writeln!(
            out,
            "marked {} of {} vertices",
            rep.marked_count(),
            rep.vertex_status.len()
        );
        let _ = writeln!(out, "vertex\tmarked\twitness\tdistance\trelint\tnear_miss");
        for s in &rep.vertex_status {
            let _ = writeln!(
                out,
                "v{}\t{}\t{}\t{}\t{}\t{}",
                s.vertex + 1,
                if s.marked { "yes" } else { "no" },
                s.witness_facet
                    .as_ref()
                    .map_or("-".to_string(), |f| f.to_string()),
                s.distance.map_or("-".to_string(), |d| d.to_string()),
                s.projection_in_relint
                    .map_or("-", |b| if b { "yes" } else { "no" }),
                if s.near_miss { "yes" } else { "no" },
            );
        }
        emit(&out)?;
    }
    Ok(if reduced {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_certify(args: &FileArgs, tol: f64) -> Result<ExitCode> {
    let l = load(&args.file, tol)?;
    let cert = scan_certificate(&l.polytope);
    if cert.is_some() && is_reduced(&l.polytope).reduced {
        eprintln!("warning: certificate found but the reducedness check also passes; the tolerance is too loose");
    }
    if args.json {
        let mut r = JsonReport::new("certify", l.inputs);
        r.outputs.certificate_found = Some(cert.is_some());
        r.outputs.omega = cert.as_ref().map(|c| c.omega);
        r.outputs.certificate = cert;
        emit(&(r.to_json()? + "\n"))?;
        return Ok(ExitCode::SUCCESS);
    }
    let Some(c) = cert else {
        emit("none found\n")?;
        return Ok(ExitCode::SUCCESS);
    };
    let rep = &c.report;
    let mut out = String::new();
    let _ = writeln!(out, "certificate found: polytope is not reduced");
    let _ = writeln!(out, "omega = {}", c.omega);
    let _ = writeln!(out, "facet {}", rep.facet);
    let cycle: Vec<String> = rep
        .facet_cycle
        .iter()
        .map(|i| format!("v{}", i + 1))
        .collect();
    let _ = writeln!(out, "facet cycle {}", cycle.join(" "));
    let _ = writeln!(out, "vertex v{}", rep.vertex + 1);
    let _ = writeln!(
        out,
        "alignment rotation {} groups {:?}",
        rep.alignment.rotation, rep.alignment.groups
    );
    let _ = writeln!(
        out,
        "(a) {} | {}  rho {}",
        rep.evidence_a.face1, rep.evidence_a.face2, rep.evidence_a.rho
    );
    for e in &rep.evidence_b {
        let _ = writeln!(out, "(b) {} | {}  slack {}", e.face1, e.face2, e.slack);
    }
    for g in &rep.evidence_c {
        for e in &g.fan_facets {
            let _ = writeln!(out, "(c) {} | {}  rho {}", e.face1, e.face2, e.rho);
        }
    }
    emit(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_antipodal(args: &FileArgs, tol: f64) -> Result<ExitCode> {
    let l = load(&args.file, tol)?;
    let pairs = strictly_antipodal_pairs(&l.polytope);
    if args.json {
        let mut r = JsonReport::new("antipodal", l.inputs);
        r.outputs.antipodal_pairs = Some(pairs);
        emit(&(r.to_json()? + "\n"))?;
    } else {
        let mut out = format!("strictly antipodal pairs: {}\n", pairs.len());
        fmt_pairs(&mut out, &pairs);
        emit(&out)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct(
    deltas: [f64; 3],
    output: Option<&Path>,
    trace: bool,
    report: Option<&Path>,
    init: Option<[f64; 4]>,
) -> Result<ExitCode> {
    let deltas = TargetDeltas::new(deltas[0], deltas[1], deltas[2])?;
    let member = build_family_member(&deltas, init)?;
    if trace {
        for (i, (q, r)) in member
            .trace
            .iterates
            .iter()
            .zip(&member.trace.residual_norms)
            .enumerate()
        {
            eprintln!(
                "{i}\tx={}\ts={}\th={}\tr={}\tresidual={:e}",
                q[0], q[1], q[2], q[3], r
            );
        }
    }
    let off = write_off(&member.polytope);
    let mut inputs = ReportInputs {
        tolerance: DEFAULT_TOLERANCE,
        deltas: Some(deltas),
        initial_guess: Some(init.unwrap_or(REFERENCE_INITIAL_GUESS)),
        residual_tolerance: Some(DEFAULT_RESIDUAL_TOL),
        ..Default::default()
    };
    let report_path = match (report, output) {
        (Some(r), _) => Some(r.to_path_buf()),
        (None, Some(o)) => Some(o.with_extension("json")),
        (None, None) => None,
    };
    if let Some(o) = output {
        fs::write(o, &off).with_context(|| format!("writing {}", o.display()))?;
        inputs.file = Some(o.display().to_string());
        inputs.sha256 = Some(sha256_hex(off.as_bytes()));
    } else {
        emit(&off)?;
    }
    if let Some(path) = report_path {
        let mut r = JsonReport::new("construct", inputs);
        r.outputs.omega = Some(member.reducedness.omega);
        r.outputs.reduced = Some(member.reducedness.reduced);
        r.outputs.params = Some(member.params);
        r.outputs.distances = Some(ConstructionDistances {
            defining: member.defining_distances,
            facet_edge: member.facet_edge_distance,
            edge_edge: member.edge_edge_distance,
        });
        r.outputs.trace = Some(member.trace);
        r.outputs.reducedness = Some(member.reducedness);
        fs::write(&path, r.to_json()? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(ranges: [DeltaRange; 3], output: Option<&Path>, cold: bool) -> Result<ExitCode> {
    let options = SweepOptions {
        start: if cold {
            StartMode::Cold
        } else {
            StartMode::Warm
        },
    };
    let rows = sweep_family(&ranges, &options);
    let mut r = JsonReport::new(
        "sweep",
        ReportInputs {
            tolerance: DEFAULT_TOLERANCE,
            initial_guess: Some(REFERENCE_INITIAL_GUESS),
            residual_tolerance: Some(DEFAULT_RESIDUAL_TOL),
            ranges: Some(ranges),
            ..Default::default()
        },
    );
    r.outputs.sweep = Some(rows);
    let text = r.to_json()? + "\n";
    match output {
        Some(o) => fs::write(o, text).with_context(|| format!("writing {}", o.display()))?,
        None => emit(&text)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        bail!("tolerance must be positive, got {tol}");
    }
    match &cli.command {
        Command::Width(a) => cmd_width(a, tol),
        Command::Check(a) => cmd_check(a, tol),
        Command::Certify(a) => cmd_certify(a, tol),
        Command::Antipodal(a) => cmd_antipodal(a, tol),
        Command::Construct {
            d1,
            d2,
            d3,
            output,
            trace,
            report,
            init,
        } => cmd_construct(
            [*d1, *d2, *d3],
            output.as_deref(),
            *trace,
            report.as_deref(),
            *init,
        ),
        Command::Sweep {
            d1,
            d2,
            d3,
            output,
            cold,
        } => cmd_sweep([*d1, *d2, *d3], output.as_deref(), *cold),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
