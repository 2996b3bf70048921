//! Command-line front end: argument parsing, file loading, dispatch.
//!
//! Exit codes: 0 success, 1 computation error, 2 input error. The thread
//! count can be set with `--threads` or the `TV_THREADS` environment
//! variable.

use crate::category::FusionCategory;
use crate::center::{
    center_hom, colored_rotation, induct, validate_center_object, vec_g_center_simples,
    CenterObject,
};
use crate::complex::CellComplex;
use crate::diagram::{Coupon, DiagEdge, SphereDiagram};
use crate::error::{Result, TvError};
use crate::group::GroupTable;
use crate::io;
use crate::scalar::{parse_scalar, Scalar};
use crate::statesum::{surface_state_space, tv_invariant, tv_vector_full};
use crate::trees::TreeSpace;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "tv", about = "Turaev-Viro state-sum invariants over spherical fusion categories")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for the label sum (default: TV_THREADS or all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format: text (default) or machine.
    #[arg(long, global = true, default_value = "text")]
    pub format: String,
    /// Dump one line per labeling contribution.
    #[arg(long, global = true)]
    pub trace_labelings: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The Turaev-Viro invariant of a closed 3-manifold.
    Invariant {
        #[arg(short, long)]
        category: String,
        #[arg(short, long)]
        manifold: String,
    },
    /// Extended invariant of a manifold with colored tubes.
    ExtInvariant {
        #[arg(short, long)]
        category: String,
        #[arg(short, long)]
        manifold: String,
        /// Center-object files, one per color index.
        #[arg(long)]
        center: Vec<PathBuf>,
    },
    /// Dimension of the TQFT space of a closed surface.
    Dim {
        #[arg(short, long)]
        category: String,
        #[arg(short, long)]
        surface: String,
    },
    /// Dimension of the extended TQFT space of a surface with colored disks.
    ExtDim {
        #[arg(short, long)]
        category: String,
        #[arg(short, long)]
        surface: String,
        #[arg(long)]
        center: Vec<PathBuf>,
    },
    /// Validate a manifold or surface file.
    CheckComplex {
        #[arg(short, long)]
        manifold: String,
    },
    /// Replay a move script against a manifold file.
    ApplyMoves {
        #[arg(short, long)]
        manifold: String,
        #[arg(long)]
        moves: PathBuf,
    },
    /// Evaluate a colored graph on the sphere from a debug-format file.
    EvalGraph {
        #[arg(short, long)]
        category: String,
        #[arg(short, long)]
        graph: PathBuf,
    },
    /// Dimension of a center hom space between two center-object files.
    CenterHom {
        #[arg(short, long)]
        category: String,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
    /// Induction of a multiplicity vector, written as a center-object file.
    Induct {
        #[arg(short, long)]
        category: String,
        /// Multiplicities, one per simple (e.g. 1,0).
        #[arg(long)]
        mult: String,
    },
    /// Validate a center-object file against its category.
    ValidateCenter {
        #[arg(short, long)]
        category: String,
        #[arg(long)]
        center: PathBuf,
    },
    /// Brute-force oracles: Dijkgraaf-Witten values and D(G) counts.
    Oracle {
        #[arg(long)]
        group: String,
        #[arg(long)]
        manifold_name: String,
    },
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| TvError::Io(path.to_string(), e))
}

fn builtin_group(name: &str) -> Option<GroupTable> {
    match name {
        "z2" => Some(GroupTable::cyclic(2)),
        "z3" => Some(GroupTable::cyclic(3)),
        "z4" => Some(GroupTable::cyclic(4)),
        "s3" => Some(GroupTable::s3()),
        _ => None,
    }
}

/// Load a category: a builtin name (`vec-z2`, `vec-z3`, `vec-s3`,
/// `fibonacci`) or a file path.
pub fn load_category(spec: &str) -> Result<FusionCategory> {
    match spec {
        "vec-z2" => crate::category::builtin_vec_g("vec-z2", &GroupTable::cyclic(2)),
        "vec-z3" => crate::category::builtin_vec_g("vec-z3", &GroupTable::cyclic(3)),
        "vec-s3" => crate::category::builtin_vec_g("vec-s3", &GroupTable::s3()),
        "fibonacci" => crate::category::builtin_fibonacci(),
        path => io::parse_category(&read(path)?),
    }
}

/// Load a manifold/surface: a canned name or a file path.
pub fn load_manifold(spec: &str) -> Result<(CellComplex, io::ManifoldExtras)> {
    if let Ok(cx) = crate::complex::canned(spec) {
        return Ok((cx, io::ManifoldExtras::default()));
    }
    io::parse_manifold(&read(spec)?)
}

fn parse_graph(text: &str, cat: &FusionCategory) -> Result<SphereDiagram> {
    let mut coupons: Vec<Coupon> = Vec::new();
    let mut edges = Vec::new();
    let mut colors: Vec<Option<Vec<Scalar>>> = Vec::new();
    for (no, toks) in text.lines().enumerate().filter_map(|(no, raw)| {
        let s = raw.split('#').next().unwrap_or("").trim();
        if s.is_empty() {
            None
        } else {
            Some((no + 1, s.split_whitespace().collect::<Vec<_>>()))
        }
    }) {
        match toks[0] {
            "graph" => {}
            "coupon" => {
                let legs: Vec<usize> = toks[3..]
                    .iter()
                    .map(|t| {
                        cat.simple_by_name(t).ok_or_else(|| {
                            TvError::Parse(format!("line {no}: unknown simple `{t}`"))
                        })
                    })
                    .collect::<Result<_>>()?;
                coupons.push(Coupon { legs, color: None });
                colors.push(None);
            }
            "edge" => {
                let (l, r) = toks[1]
                    .split_once('=')
                    .ok_or_else(|| TvError::Parse(format!("line {no}: edge a.b=c.d")))?;
                let pd = |s: &str| -> Result<(usize, usize)> {
                    let (a, b) = s
                        .split_once('.')
                        .ok_or_else(|| TvError::Parse(format!("line {no}: dart is c.s")))?;
                    Ok((
                        a.parse().map_err(|_| TvError::Parse(format!("line {no}: bad dart")))?,
                        b.parse().map_err(|_| TvError::Parse(format!("line {no}: bad dart")))?,
                    ))
                };
                edges.push(DiagEdge { ends: [pd(l)?, pd(r)?] });
            }
            "color" => {
                let idx: usize = toks[1]
                    .parse()
                    .map_err(|_| TvError::Parse(format!("line {no}: bad coupon index")))?;
                let coords: Vec<Scalar> = toks[3..]
                    .iter()
                    .map(|t| parse_scalar(t, cat.backend))
                    .collect::<Result<_>>()?;
                colors[idx] = Some(coords);
            }
            other => return Err(TvError::Parse(format!("line {no}: unknown directive `{other}`"))),
        }
    }
    let mut d = SphereDiagram { coupons, edges, loops: vec![] };
    for (i, c) in colors.into_iter().enumerate() {
        let space = TreeSpace::hom(cat, &d.coupons[i].legs);
        let coords = match c {
            Some(v) => {
                if v.len() != space.dim() {
                    return Err(TvError::Parse(format!(
                        "coupon {i}: {} coordinates for a dimension-{} space",
                        v.len(),
                        space.dim()
                    )));
                }
                v
            }
            None => {
                if space.dim() == 1 {
                    vec![cat.one()]
                } else {
                    return Err(TvError::Parse(format!(
                        "coupon {i} needs explicit coordinates (dim {})",
                        space.dim()
                    )));
                }
            }
        };
        d.coupons[i].color = Some(crate::trees::TreeVector {
            source: cat.unit,
            word: d.coupons[i].legs.clone(),
            coords,
        });
    }
    Ok(d)
}

fn load_centers(cat: &FusionCategory, paths: &[PathBuf]) -> Result<Vec<CenterObject>> {
    paths
        .iter()
        .map(|p| {
            let y = io::parse_center(&read(&p.display().to_string())?, cat)?;
            validate_center_object(cat, &y)?;
            Ok(y)
        })
        .collect()
}

fn print_value(cfg: &RunConfig, label: &str, value: &Scalar, backend: &str) {
    if cfg.format == "machine" {
        println!("{value}");
    } else {
        println!("{label} = {value} ({backend})");
    }
}

/// Run a parsed configuration; the returned integer is the process exit
/// code (0 ok, 1 computation error, 2 input error).
pub fn run(cfg: &RunConfig) -> i32 {
    if let Some(t) = cfg.threads.or_else(|| {
        std::env::var("TV_THREADS").ok().and_then(|v| v.parse().ok())
    }) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match dispatch(cfg) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                TvError::Io(..) | TvError::Parse(_) | TvError::UnknownCanned(_) => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(cfg: &RunConfig) -> Result<()> {
    match &cfg.command {
        Command::Invariant { category, manifold } => {
            let cat = load_category(category)?;
            let (cx, _) = load_manifold(manifold)?;
            if cfg.trace_labelings {
                trace_labelings(&cat, &cx)?;
            }
            let v = tv_invariant(&cat, &cx)?;
            print_value(cfg, "Z_TV", &v, &format!("{}", cat.backend));
            Ok(())
        }
        Command::ExtInvariant { category, manifold, center } => {
            let cat = load_category(category)?;
            let (cx, extras) = load_manifold(manifold)?;
            let colors = load_centers(&cat, center)?;
            let m = io::build_extended(cx, &extras, colors);
            let v = crate::extended::ext_invariant(&cat, &m)?;
            print_value(cfg, "Z_TV^ext", &v, &format!("{}", cat.backend));
            Ok(())
        }
        Command::Dim { category, surface } => {
            let cat = load_category(category)?;
            let (n, _) = load_manifold(surface)?;
            let d = crate::statesum::tqft_space_dim(&cat, &n)?;
            if cfg.format == "machine" {
                println!("{d}");
            } else {
                let h = surface_state_space(&cat, &n)?.total_dim;
                println!("dim Z_TV = {d} (H dim {h})");
            }
            Ok(())
        }
        Command::ExtDim { category, surface, center } => {
            let cat = load_category(category)?;
            let (n, extras) = load_manifold(surface)?;
            let colors = load_centers(&cat, center)?;
            let s = io::build_extended_surface(n, &extras);
            let p = crate::extended::ext_projector(&cat, &s, &colors)?;
            let d = p.values.rank();
            if cfg.format == "machine" {
                println!("{d}");
            } else {
                println!("dim Z_TV^ext = {d} (H dim {})", p.space.total_dim);
            }
            Ok(())
        }
        Command::CheckComplex { manifold } => {
            let (cx, extras) = load_manifold(manifold)?;
            cx.validate()?;
            if cx.dim == 3 {
                crate::complex::manifold_checks(&cx)?;
            }
            println!(
                "ok: {} vertices, {} edges, {} faces, {} cells, {} boundary faces, {} disks, {} tubes",
                cx.live_verts().count(),
                cx.live_edges().count(),
                cx.live_faces().count(),
                cx.live_cells().count(),
                cx.boundary_faces().len(),
                extras.disks.len(),
                extras.tubes.len(),
            );
            Ok(())
        }
        Command::ApplyMoves { manifold, moves } => {
            let (mut cx, _) = load_manifold(manifold)?;
            let script = io::parse_moves(&read(&moves.display().to_string())?)?;
            for (i, m) in script.iter().enumerate() {
                cx = cx
                    .apply_move_oneway(m)
                    .map_err(|e| TvError::MoveInapplicable(format!("step {i}: {e}")))?;
            }
            print!("{}", io::serialize_manifold(&cx, &io::ManifoldExtras::default()));
            Ok(())
        }
        Command::EvalGraph { category, graph } => {
            let cat = load_category(category)?;
            let d = parse_graph(&read(&graph.display().to_string())?, &cat)?;
            let v = crate::diagram::evaluate_sphere(&cat, &d)?;
            print_value(cfg, "Z_RT", &v, &format!("{}", cat.backend));
            Ok(())
        }
        Command::CenterHom { category, from, to } => {
            let cat = load_category(category)?;
            let y = load_centers(&cat, std::slice::from_ref(from))?.remove(0);
            let z = load_centers(&cat, std::slice::from_ref(to))?.remove(0);
            let hom = center_hom(&cat, &y, &z)?;
            println!("dim Hom_Z = {}", hom.dim);
            Ok(())
        }
        Command::Induct { category, mult } => {
            let cat = load_category(category)?;
            let v: Vec<usize> = mult
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| TvError::Parse("bad multiplicity".into())))
                .collect::<Result<_>>()?;
            if v.len() != cat.rank() {
                return Err(TvError::Parse("one multiplicity per simple".into()));
            }
            let iv = induct(&cat, &v)?;
            validate_center_object(&cat, &iv)?;
            print!("{}", io::serialize_center(&cat, &iv));
            Ok(())
        }
        Command::ValidateCenter { category, center } => {
            let cat = load_category(category)?;
            let y = io::parse_center(&read(&center.display().to_string())?, &cat)?;
            validate_center_object(&cat, &y)?;
            // also check the rotation machinery accepts it
            let _ = colored_rotation(&cat, &y, &[cat.unit])?;
            println!("ok: valid center object over {}", cat.name);
            Ok(())
        }
        Command::Oracle { group, manifold_name } => {
            let g = builtin_group(group)
                .ok_or_else(|| TvError::Parse(format!("unknown group `{group}`")))?;
            let v = crate::oracle::oracle_dw(&g, manifold_name)?;
            println!("{}/{}", v.numer(), v.denom());
            Ok(())
        }
    }
}

fn trace_labelings(cat: &FusionCategory, cx: &CellComplex) -> Result<()> {
    let labelings = crate::statesum::admissible_labelings(cat, cx);
    eprintln!("{} admissible labelings", labelings.len());
    for l in &labelings {
        // re-run the closed state sum restricted to one labeling by listing
        // its edge weight; detailed per-labeling values come from the full
        // vector below
        let labels: Vec<String> =
            l.iter().map(|(e, x)| format!("{e}:{}", cat.simples[*x].name)).collect();
        eprintln!("labeling {}", labels.join(" "));
    }
    let sv = tv_vector_full(cat, cx)?;
    for (key, t) in &sv.blocks {
        eprintln!("boundary block {key:?}: {} entries", t.data.len());
    }
    Ok(())
}

/// Convenience wrapper around the Vec_G center enumeration for the CLI and
/// examples.
pub fn builtin_center_simples(cat: &FusionCategory, group: &str) -> Result<Vec<CenterObject>> {
    let g = builtin_group(group)
        .ok_or_else(|| TvError::Parse(format!("unknown group `{group}`")))?;
    Ok(vec_g_center_simples(cat, &g)?.objects)
}
