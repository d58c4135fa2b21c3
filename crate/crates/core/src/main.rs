use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lingeo::claims::{run_claim, Verdict, CLAIM_IDS};
use lingeo::geomaut::geometric_group;
use lingeo::gf::field_of_order;
use lingeo::graphauto::{are_isomorphic, automorphism_group, ColoredGraph};
use lingeo::linrep::{nvt_check, LinRep};
use lingeo::pointsets::{
    closure, construct_named, property_star, tangent_cover, PointSet, StarVerdict, TangentVerdict,
};

#[derive(Parser)]
#[command(name = "lingeo", version, about = "Linear representations of point sets in PG(n, q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A point set K in H∞ = PG(n, q): a named construction or a point file.
#[derive(Args)]
struct SetArgs {
    /// Named construction (conic_arc, hyperoval, two_lines, baer_subplane, ...)
    #[arg(long, conflicts_with = "file")]
    set: Option<String>,
    /// Dimension n of the hyperplane at infinity
    #[arg(long, requires = "set")]
    n: Option<usize>,
    /// Field order
    #[arg(long, requires = "set")]
    q: Option<u32>,
    /// Subfield order for `subgeometry`
    #[arg(long)]
    q0: Option<u32>,
    /// Point file: header `d q`, then one point of PG(d, q) per line with first coordinate 0
    #[arg(long)]
    file: Option<PathBuf>,
}

impl SetArgs {
    fn load(&self) -> Result<PointSet, String> {
        if let Some(path) = &self.file {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            return PointSet::from_point_file(&text).map_err(|e| e.to_string());
        }
        let name = self.set.as_deref().ok_or("give --set NAME --n N --q Q or --file PATH")?;
        let n = self.n.ok_or("--set needs --n")?;
        let q = self.q.ok_or("--set needs --q")?;
        let field = field_of_order(q).map_err(|e| e.to_string())?;
        construct_named(name, n, &field, self.q0).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Graph6,
    Dimacs,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a point set and print it as a point file
    Pointset {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Print the smallest subgeometry containing the set
    Closure {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Decide Property (*); exit 1 when violated
    CheckStar {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Decide whether every point outside K lies on a tangent; exit 1 when violated
    CheckTangent {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Export the incidence graph of T*_n(K)
    BuildGraph {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, value_enum, default_value = "graph6")]
        out: GraphFormat,
        /// Write the graph here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write the vertex-object sidecar JSON here
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Automorphism group of the incidence graph or its geometric subgroup
    Aut {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, conflicts_with = "geometric")]
        graph: bool,
        #[arg(long)]
        geometric: bool,
        /// Write the group as JSON here
        #[arg(long)]
        group_out: Option<PathBuf>,
    },
    /// Test two graph6 files for isomorphism; exit 1 when not isomorphic
    Iso { a: PathBuf, b: PathBuf },
    /// Distance-4 certificate separating lines from points; exit 1 when it fails
    Nvt {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Run a claim (or `all`) and write one JSON report per claim
    Verify {
        claim: String,
        /// Also run slow extended claims
        #[arg(long)]
        extended: bool,
        /// Directory for the reports
        #[arg(long, default_value = "reports")]
        out_dir: PathBuf,
    },
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_graph6(path: &PathBuf) -> Result<ColoredGraph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    ColoredGraph::from_graph6(text.trim()).map_err(|e| format!("{}: {e}", path.display()))
}

fn build(set: &SetArgs) -> Result<LinRep, String> {
    LinRep::build(&set.load()?).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Pointset { set } => {
            let k = set.load()?;
            print!("{}", k.to_point_file());
            eprintln!("{} points", k.len());
            Ok(true)
        }
        Command::Closure { set } => {
            let c = closure(&set.load()?).map_err(|e| e.to_string())?;
            print!("{}", c.to_point_file());
            eprintln!("{} points", c.len());
            Ok(true)
        }
        Command::CheckStar { set } => {
            let verdict = property_star(&set.load()?).map_err(|e| e.to_string())?;
            let out = match &verdict {
                StarVerdict::Holds => json!({"property_star": "holds"}),
                StarVerdict::Violated { witness_plane } => {
                    json!({"property_star": "violated", "witness_plane": witness_plane.rows().iter().map(|r| r.iter().map(|x| x.index()).collect::<Vec<_>>()).collect::<Vec<_>>()})
                }
            };
            println!("{out}");
            Ok(verdict == StarVerdict::Holds)
        }
        Command::CheckTangent { set } => {
            let verdict = tangent_cover(&set.load()?);
            let out = match &verdict {
                TangentVerdict::Holds => json!({"tangent_cover": "holds"}),
                TangentVerdict::Violated { witness_point } => {
                    json!({"tangent_cover": "violated", "witness_point": witness_point.indices()})
                }
            };
            println!("{out}");
            Ok(verdict == TangentVerdict::Holds)
        }
        Command::BuildGraph { set, out, output, sidecar } => {
            let t = build(&set)?;
            let inc = t.incidence_graph();
            let text = match out {
                GraphFormat::Graph6 => inc.graph().to_graph6() + "\n",
                GraphFormat::Dimacs => inc.to_dimacs(),
            };
            write_or_print(&output, &text)?;
            if let Some(p) = sidecar {
                let json = serde_json::to_string_pretty(&t.sidecar()).unwrap() + "\n";
                fs::write(&p, json).map_err(|e| format!("{}: {e}", p.display()))?;
            }
            Ok(true)
        }
        Command::Aut { set, graph, geometric, group_out } => {
            if !graph && !geometric {
                return Err("aut needs --graph or --geometric".into());
            }
            let t = build(&set)?;
            let (order, group) = if geometric {
                let g = geometric_group(&t);
                (g.order, g.group)
            } else {
                let a = automorphism_group(&t.incidence_graph().colored(true));
                (a.order, a.group)
            };
            println!("{order}");
            if let Some(p) = group_out {
                let json = serde_json::to_string(&group.to_file()).unwrap() + "\n";
                fs::write(&p, json).map_err(|e| format!("{}: {e}", p.display()))?;
            }
            Ok(true)
        }
        Command::Iso { a, b } => {
            let (g1, g2) = (read_graph6(&a)?, read_graph6(&b)?);
            let out = match are_isomorphic(&g1, &g2) {
                Some(m) => json!({"isomorphic": true, "mapping": m.images()}),
                None => json!({"isomorphic": false}),
            };
            println!("{out}");
            Ok(out["isomorphic"] == true)
        }
        Command::Nvt { set } => {
            let report = nvt_check(&build(&set)?);
            println!("{}", serde_json::to_string(&report).unwrap());
            Ok(report.applicable() && report.certificate_holds())
        }
        Command::Verify { claim, extended, out_dir } => {
            let ids: Vec<&str> = if claim == "all" { CLAIM_IDS.to_vec() } else { vec![claim.as_str()] };
            fs::create_dir_all(&out_dir).map_err(|e| format!("{}: {e}", out_dir.display()))?;
            let mut all_pass = true;
            for id in ids {
                let timed = run_claim(id, extended).map_err(|e| e.to_string())?;
                let r = &timed.report;
                fs::write(out_dir.join(format!("{id}.json")), r.to_json()).map_err(|e| e.to_string())?;
                let word = match r.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "FAIL",
                    Verdict::Documented => "documented",
                    Verdict::Skipped => "skipped",
                };
                println!("{id}: {word}");
                eprintln!("{id}: {:.2} s", timed.wall_time.as_secs_f64());
                all_pass &= r.passed();
            }
            Ok(all_pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
