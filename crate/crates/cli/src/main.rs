use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use k3bhcr::catalog::{
    build_catalog, enumerate_weights, golden_rows, load_golden, potentials_for_weights, subgroup_tables, to_csv,
    to_json, to_text, verify_golden, verify_mirrors, Report, DEFAULT_DMAX,
};
use k3bhcr::groups::{intermediate_subgroups, j_group, quotient_structure, sl_group};
use k3bhcr::involution::{fixed_locus, lattice_route};
use k3bhcr::quotient::{mirror_pair_check, quotient_triple};
use k3bhcr::wps::{hypersurface_singularities, WeightSystem};
use k3bhcr::{nikulin_triple, Potential};

#[derive(Parser)]
#[command(name = "k3bhcr", version, about = "Invariants of K3 surfaces x^2 = f(y,z,w) and their BHK mirrors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List weight systems and their potentials up to a degree bound.
    Enumerate {
        #[arg(long, default_value_t = DEFAULT_DMAX)]
        dmax: i64,
    },
    /// Full analysis of one potential, e.g. "x^2 + y^3*z + z^9*w + w^10".
    Analyze { potential: String },
    /// Mirror check for a table row, e.g. T5:3a.
    MirrorCheck {
        #[arg(long)]
        row: String,
    },
    /// Triples of all quotients X/G~ for a table row, e.g. T1:1.
    Quotients {
        #[arg(long)]
        row: String,
    },
    /// Write the catalog as csv, json or text.
    EmitTables {
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DMAX)]
        dmax: i64,
    },
    /// Compare the catalog with golden tables and check the mirror relation.
    Verify {
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

fn row_potential(id: &str) -> Result<Potential> {
    let row = golden_rows().into_iter().find(|r| r.id() == id).ok_or_else(|| anyhow!("no table row {id}"))?;
    Ok(row.potential()?)
}

fn analyze(text: &str) -> Result<bool> {
    let p = Potential::parse_k3(text)?;
    if !p.charges()?.is_calabi_yau() {
        bail!("{p} is not Calabi-Yau: the charges do not sum to 1");
    }
    let ws = WeightSystem::of(&p)?;
    println!("potential   {p}");
    println!("shape       {}", p.shape_tag()?);
    println!("weights     {:?}  degree {}", ws.weights, ws.degree);
    let sl = sl_group(&p)?;
    let j = j_group(&p)?;
    println!("|SL| {}  |J| {}  SL/J {}", sl.order(), j.order(), quotient_structure(&sl, &j)?);
    for r in hypersurface_singularities(&p, &ws)? {
        println!("  A{} x{} at {:?} ({:?})", r.ade_type, r.multiplicity, r.location, r.iota_orbit);
    }
    let fl = fixed_locus(&p, &ws)?;
    println!("fixed curve genus {}  extra rational curves {:?}", fl.curve_genus, fl.extra_rational_curves);
    let route = lattice_route(&p, &[])?;
    println!("resolved quotient plane: {} rays, orders {:?}", route.surface.len(), route.orders);
    let t = nikulin_triple(&p)?;
    println!("(r,a,delta) = {t}");
    let pt = p.transpose();
    println!("transpose   {pt}  weights {:?}", pt.charges()?.w);
    Ok(true)
}

fn print_report(rep: &Report) -> bool {
    print!("{}", rep.render());
    rep.passed()
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Enumerate { dmax } => {
            let mut count = 0;
            for ws in enumerate_weights(dmax) {
                let ps = potentials_for_weights(&ws);
                count += ps.len();
                let fs: Vec<String> = ps.iter().map(Potential::f_text).collect();
                println!("{:?}  d={}  {}", ws.weights, ws.degree, fs.join("  "));
            }
            println!("{count} potentials");
            Ok(true)
        }
        Command::Analyze { potential } => analyze(&potential),
        Command::MirrorCheck { row } => {
            let p = row_potential(&row)?;
            let mut ok = true;
            for g in intermediate_subgroups(&p)? {
                match mirror_pair_check(&p, &g) {
                    Ok(r) => println!("{r}"),
                    Err(e) => {
                        ok = false;
                        println!("FAIL {e}");
                    }
                }
            }
            Ok(ok)
        }
        Command::Quotients { row } => {
            let p = row_potential(&row)?;
            let mut ok = true;
            for g in intermediate_subgroups(&p)? {
                match quotient_triple(&p, &g) {
                    Ok(q) => {
                        let sing: Vec<String> =
                            q.orbits.ade_totals().iter().map(|(k, n)| format!("{n}A{k}")).collect();
                        println!(
                            "G~ = {:<12} {:<10} g' = {:<3} {}",
                            q.structure.to_string(),
                            q.triple.to_string(),
                            q.orbits.quotient_genus,
                            sing.join("+")
                        );
                    }
                    Err(e) => {
                        ok = false;
                        println!("FAIL {e}");
                    }
                }
            }
            Ok(ok)
        }
        Command::EmitTables { format, out, dmax } => {
            let cat = build_catalog(dmax);
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let (name, body) = match format {
                Format::Csv => ("catalog.csv", to_csv(&cat)?),
                Format::Json => ("catalog.json", to_json(&cat)?),
                Format::Text => ("catalog.txt", to_text(&cat)),
            };
            let path = out.join(name);
            std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            println!("{} rows -> {}", cat.entries.len(), path.display());
            let clean = cat.flagged().next().is_none();
            Ok(clean)
        }
        Command::Verify { golden } => {
            let rows = match golden {
                Some(path) => load_golden(&path)?,
                None => golden_rows(),
            };
            if rows.is_empty() {
                bail!("golden file has no rows");
            }
            let cat = build_catalog(DEFAULT_DMAX);
            println!("== golden rows");
            let a = print_report(&verify_golden(&cat, &rows));
            println!("== mirrors");
            let b = print_report(&verify_mirrors(&cat));
            println!("== subgroup tables");
            let mut rep = Report::default();
            for t in subgroup_tables() {
                let p = Potential::parse_k3(&t.f)?;
                for (i, r) in t.rows.iter().enumerate() {
                    let id = format!("T{}:{}", t.table, i + 1);
                    let g = k3bhcr::catalog::subgroup_from_vectors(&p, &r.g_vectors)?;
                    match mirror_pair_check(&p, &g) {
                        Ok(m) => {
                            let ok = [m.triple.r, m.triple.a, i64::from(m.triple.delta)] == r.g_triple
                                && [m.transpose_triple.r, m.transpose_triple.a, i64::from(m.transpose_triple.delta)]
                                    == r.gt_triple;
                            rep.push(id, ok, m.to_string());
                        }
                        Err(e) => rep.push(id, false, e.to_string()),
                    }
                }
            }
            let c = print_report(&rep);
            Ok(a && b && c)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
