use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nonhaus::audit::{
    parse_plfield, parse_plpath, render_figure, run_audit, AuditFlags, ReportDocument, SvgScene,
};
use nonhaus::embedding::EmbeddingSpec;
use nonhaus::lifting::{
    attempt_homotopy_lift, enumerate_lifts, make_gamma, make_merging_field, verify_lift_continuity,
};
use nonhaus::space::{pseudo_dist, separable, separation_report, CanonicalPoint, SpaceConfig, TopologyModel};
use nonhaus::symmetry::{deck_group, deck_samples, deck_verify, DeckElement};
use nonhaus::thickened::thick_audit;
use nonhaus::{Error, Q};

#[derive(Parser)]
#[command(name = "nonhaus", version, about = "Audit of the line with k inseparable origins")]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Shared {
    /// Number of origins.
    #[arg(long, global = true, default_value_t = 2)]
    k: usize,
    #[arg(long, global = true, default_value = "quotient")]
    model: TopologyModel,
    /// Basepoint coordinate of the loop through z.
    #[arg(long, global = true, default_value = "1")]
    x0: Q,
    /// Require the origin choice to be constant on the whole zero set.
    #[arg(long, global = true)]
    paper_constancy: bool,
    #[arg(long, global = true, default_value = "main")]
    embedding: EmbeddingSpec,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Claims audit table with certificates.
    Audit {
        /// Load a report and re-check every certificate instead of auditing.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Enumerate lifts of a path from a start point.
    Lift {
        /// Path in `plpath v1` format; defaults to the loop through z at x0.
        #[arg(long)]
        path: Option<PathBuf>,
        /// Start point, `o2` or a nonzero rational; defaults to the path's start.
        #[arg(long)]
        start: Option<CanonicalPoint>,
    },
    /// Try to lift a homotopy field given a lift of its bottom edge.
    Homotopy {
        /// Field in `plfield v1` format; defaults to the merging field.
        #[arg(long)]
        field: Option<PathBuf>,
        /// Bottom assignment, e.g. `1/4=1,3/4=2`.
        #[arg(long, default_value = "1/4=1,3/4=2")]
        assign: String,
    },
    /// Deck group table, or checks for one permutation.
    Deck {
        /// Images of 1..=k, e.g. `2,1,3`.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Pseudometric distance and separability, or the separation report.
    Metric {
        #[arg(long)]
        p: Option<CanonicalPoint>,
        #[arg(long)]
        q: Option<CanonicalPoint>,
    },
    /// SVG figure of the branches, the curve and the projection.
    Render {
        /// Draw the k lifts of the loop through z at x0.
        #[arg(long)]
        lifts: bool,
    },
    /// Thickened-variant audit.
    Thick {
        #[arg(long, default_value_t = 32)]
        grid: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Recheck(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_recheck() {
            Failure::Recheck(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn parse_assignment(text: &str) -> Result<BTreeMap<Q, usize>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (t, o) = pair
                .split_once('=')
                .ok_or_else(|| Failure::Input(format!("expected `t=origin`, found {pair:?}")))?;
            let t: Q = t.trim().parse().map_err(|e: nonhaus::rational::ParseQError| Failure::Input(e.to_string()))?;
            let o: usize = o.trim().parse().map_err(|_| Failure::Input(format!("bad origin index {o:?}")))?;
            Ok((t, o))
        })
        .collect()
}

fn parse_perm(text: &str) -> Result<DeckElement, Failure> {
    let perm = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| Failure::Input(format!("bad permutation entry {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DeckElement::new(perm)?)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let s = &cli.shared;
    let _ = std::env::var("NONHAUS_SEED");
    let cfg = SpaceConfig::new(s.k, s.model)?;
    match &cli.command {
        Command::Audit { verify: Some(path) } => {
            let doc: ReportDocument = serde_json::from_str(&read(path)?)?;
            doc.recheck()?;
            Ok(format!("{}: {} certificates re-checked\n", path.display(), doc.certificates.len()))
        }
        Command::Audit { verify: None } => {
            let flags = AuditFlags {
                x0: s.x0.clone(),
                paper_constancy: s.paper_constancy,
            };
            let doc = run_audit(&cfg, &flags)?;
            if s.json {
                to_json(&doc)
            } else {
                Ok(doc.render_table())
            }
        }
        Command::Lift { path, start } => {
            let path = match path {
                Some(p) => parse_plpath(&read(p)?)?,
                None => make_gamma(&s.x0)?,
            };
            let start = match start {
                Some(p) => p.clone(),
                None => CanonicalPoint::regular(path.start().clone())?,
            };
            let lifts = enumerate_lifts(&path, &start, &cfg)?;
            let verdicts = lifts
                .iter()
                .map(|l| verify_lift_continuity(l, &cfg))
                .collect::<Result<Vec<_>, _>>()?;
            if s.json {
                let items: Vec<_> = lifts
                    .iter()
                    .zip(&verdicts)
                    .map(|(l, v)| serde_json::json!({ "lift": l, "continuity": v }))
                    .collect();
                return to_json(&serde_json::json!({
                    "k": s.k,
                    "model": s.model,
                    "start": start,
                    "lift_count": lifts.len(),
                    "lifts": items,
                }));
            }
            let mut out = format!("{} lifts from {start}\n", lifts.len());
            for (l, v) in lifts.iter().zip(&verdicts) {
                let choice: Vec<String> = l.origin_choice.iter().map(|o| format!("o{o}")).collect();
                let _ = writeln!(out, "  origins [{}]  continuous: {}", choice.join(", "), v.continuous);
            }
            Ok(out)
        }
        Command::Homotopy { field, assign } => {
            let field = match field {
                Some(p) => parse_plfield(&read(p)?)?,
                None => make_merging_field(),
            };
            let bottom = parse_assignment(assign)?;
            let cert = attempt_homotopy_lift(&field, &bottom, &cfg, s.paper_constancy)?;
            if s.json {
                to_json(&cert)
            } else {
                Ok(format!(
                    "{} zero-set components\noutcome: {}\n{}\n",
                    cert.zero_set.components.len(),
                    serde_json::to_string(&cert.outcome)?,
                    cert.justification
                ))
            }
        }
        Command::Deck { sigma: Some(text) } => {
            let g = parse_perm(text)?;
            if g.degree() != s.k {
                return Err(Failure::Input(format!("permutation has degree {}, expected {}", g.degree(), s.k)));
            }
            let report = deck_verify(&g, &deck_samples(s.k));
            if s.json {
                to_json(&report)
            } else {
                Ok(format!("{g}: all checks pass = {}\n", report.all_pass()))
            }
        }
        Command::Deck { sigma: None } => {
            let table = deck_group(s.k)?;
            if s.json {
                return to_json(&table.summary());
            }
            let sum = table.summary();
            Ok(format!(
                "Deck group for k = {}: order {}, homomorphism {}, faithful {}, abelian {}\n",
                sum.k, sum.order, sum.homomorphism, sum.faithful, sum.abelian
            ))
        }
        Command::Metric { p: Some(p), q: Some(q) } => {
            cfg.check_point(p)?;
            cfg.check_point(q)?;
            let d = pseudo_dist(p, q);
            let v = separable(p, q, &cfg)?;
            if s.json {
                return to_json(&serde_json::json!({ "distance": d, "separation": v }));
            }
            Ok(format!("d({p}, {q}) = {d}\n{:?} separable in {}: {}\n", v.axiom, s.model, v.holds))
        }
        Command::Metric { p: None, q: None } => {
            let report = separation_report(&cfg)?;
            if s.json {
                return to_json(&report);
            }
            let mut out = String::new();
            for v in &report {
                let _ = writeln!(out, "{:?} in {}: {}", v.axiom, v.model, if v.holds { "holds" } else { "fails" });
            }
            Ok(out)
        }
        Command::Metric { .. } => Err(Failure::Input("--p and --q must be given together".into())),
        Command::Render { lifts } => {
            let mut scene = SvgScene::new(s.k);
            scene.embedding = s.embedding;
            if *lifts {
                make_gamma(&s.x0)?;
                scene.lifts_from = Some(s.x0.clone());
            }
            Ok(render_figure(&scene)?)
        }
        Command::Thick { grid } => {
            let report = thick_audit(*grid, s.embedding)?;
            if s.json {
                return to_json(&report);
            }
            let mut out = format!(
                "grid {} ({}), coverage {:.4}\n",
                report.grid_n, report.embedding, report.coverage.fraction
            );
            for row in &report.verdicts {
                let _ = writeln!(out, "  {}: {}  ({})", row.claim, row.holds, row.evidence);
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(text) => match &cli.shared.out {
            Some(path) => match std::fs::write(path, text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    ExitCode::from(2)
                }
            },
            None => {
                print!("{text}");
                ExitCode::SUCCESS
            }
        },
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Recheck(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
