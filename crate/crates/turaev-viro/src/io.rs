//! Text file formats: category files, manifold files (`tri` and `cw`
//! sections, with optional extended `disk`/`tube` lines), center-object
//! files, move scripts, and a diagram debug format.
//!
//! All formats are line oriented; `#` starts a comment. Scalars use the
//! exact literal grammar of the backend (`p/q`, `a+b s` with `s` the fixed
//! square root, decimal complex `x+yi`). Round-trips are bit-exact for the
//! exact backends.

use crate::category::{FEntry, FusionCategory, RawCategory};
use crate::center::{in_triples, out_triples, CenterBraiding, CenterObject};
use crate::complex::{Cell3, CellComplex, MoveInstance, ShellFace, SignedEdge, Triangulation};
use crate::diagram::CrossDir;
use crate::error::{Result, TvError};
use crate::extended::{ExtendedManifold, ExtendedSurface, Tube, TubeKind};
use crate::matrix::Matrix;
use crate::scalar::{parse_scalar, Backend, Scalar};
use std::collections::HashMap;

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(no, raw)| {
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            None
        } else {
            Some((no + 1, stripped.split_whitespace().collect()))
        }
    })
}

fn perr(no: usize, msg: impl std::fmt::Display) -> TvError {
    TvError::Parse(format!("line {no}: {msg}"))
}

// ---- category files ---------------------------------------------------

pub fn parse_category(text: &str) -> Result<FusionCategory> {
    let mut name = String::from("category");
    let mut backend = None;
    let mut simples: Vec<(String, usize, String, Option<String>)> = Vec::new();
    let mut fusion: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut fentries: Vec<(usize, Vec<usize>, String)> = Vec::new();
    let mut global: Option<String> = None;
    for (no, toks) in lines(text) {
        match toks[0] {
            "category" => name = toks.get(1).unwrap_or(&"category").to_string(),
            "backend" => {
                backend = Some(match toks.get(1) {
                    Some(&"rational") => Backend::Rational,
                    Some(&"complex") => Backend::Complex,
                    Some(&"quad") => {
                        let m: i64 = toks
                            .get(2)
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| perr(no, "quad backend needs an integer"))?;
                        Backend::Quad(m)
                    }
                    _ => return Err(perr(no, "unknown backend")),
                });
            }
            "simple" => {
                // simple <idx> <name> dual=<idx> qdim=<lit> [sqrt=<lit>]
                if toks.len() < 5 {
                    return Err(perr(no, "simple needs idx name dual= qdim="));
                }
                let idx: usize =
                    toks[1].parse().map_err(|_| perr(no, "bad simple index"))?;
                if idx != simples.len() {
                    return Err(perr(no, "simples must be listed in order"));
                }
                let mut dual = None;
                let mut qdim = None;
                let mut sqrt = None;
                for t in &toks[3..] {
                    if let Some(v) = t.strip_prefix("dual=") {
                        dual = Some(v.parse().map_err(|_| perr(no, "bad dual"))?);
                    } else if let Some(v) = t.strip_prefix("qdim=") {
                        qdim = Some(v.to_string());
                    } else if let Some(v) = t.strip_prefix("sqrt=") {
                        sqrt = Some(v.to_string());
                    }
                }
                let dual = dual.ok_or_else(|| perr(no, "missing dual="))?;
                let qdim = qdim.ok_or_else(|| perr(no, "missing qdim="))?;
                simples.push((toks[2].to_string(), dual, qdim, sqrt));
            }
            "fusion" => {
                if toks.len() != 5 {
                    return Err(perr(no, "fusion a b c N"));
                }
                let v: Vec<usize> = toks[1..]
                    .iter()
                    .map(|t| t.parse().map_err(|_| perr(no, "bad fusion entry")))
                    .collect::<Result<_>>()?;
                fusion.insert((v[0], v[1], v[2]), v[3]);
            }
            "F" => {
                // F a b c d e f mu nu rho sigma = <lit>
                let eq = toks
                    .iter()
                    .position(|&t| t == "=")
                    .ok_or_else(|| perr(no, "F entry needs ="))?;
                if eq != 11 || toks.len() < 13 {
                    return Err(perr(no, "F a b c d e f mu nu rho sigma = value"));
                }
                let nums: Vec<usize> = toks[1..11]
                    .iter()
                    .map(|t| t.parse().map_err(|_| perr(no, "bad F index")))
                    .collect::<Result<_>>()?;
                fentries.push((no, nums, toks[12..].join("")));
            }
            "globaldim" => global = Some(toks[1..].join("")),
            other => return Err(perr(no, format!("unknown directive `{other}`"))),
        }
    }
    let backend = backend.ok_or_else(|| TvError::Parse("missing backend".into()))?;
    let mut raw = RawCategory {
        name,
        backend,
        simple_names: simples.iter().map(|s| s.0.clone()).collect(),
        dual: simples.iter().map(|s| s.1).collect(),
        unit: 0,
        fusion,
        qdim: simples
            .iter()
            .map(|s| parse_scalar(&s.2, backend))
            .collect::<Result<_>>()?,
        sqrt_qdim: simples
            .iter()
            .map(|s| s.3.as_ref().map(|t| parse_scalar(t, backend)).transpose())
            .collect::<Result<_>>()?,
        global_dim: global.map(|t| parse_scalar(&t, backend)).transpose()?,
        fentries: Vec::new(),
    };
    for (no, nums, lit) in fentries {
        raw.fentries.push(FEntry {
            a: nums[0],
            b: nums[1],
            c: nums[2],
            d: nums[3],
            e: nums[4],
            f: nums[5],
            mu: nums[6],
            nu: nums[7],
            rho: nums[8],
            sigma: nums[9],
            value: parse_scalar(&lit, backend).map_err(|e| perr(no, e))?,
        });
    }
    FusionCategory::from_raw(raw)
}

pub fn serialize_category(cat: &FusionCategory) -> String {
    let mut out = String::new();
    out.push_str(&format!("category {}\n", cat.name));
    out.push_str(&format!(
        "backend {}\n",
        match cat.backend {
            Backend::Rational => "rational".to_string(),
            Backend::Quad(m) => format!("quad {m}"),
            Backend::Complex => "complex".to_string(),
        }
    ));
    for s in &cat.simples {
        let sqrt = match &cat.sqrt_qdim[s.index] {
            Some(v) => format!(" sqrt={v}"),
            None => String::new(),
        };
        out.push_str(&format!(
            "simple {} {} dual={} qdim={}{}\n",
            s.index, s.name, s.dual, cat.qdim[s.index], sqrt
        ));
    }
    if let Some(d) = &cat.global_dim {
        out.push_str(&format!("globaldim {d}\n"));
    }
    let r = cat.rank();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let n = cat.n(a, b, c);
                if n > 0 {
                    out.push_str(&format!("fusion {a} {b} {c} {n}\n"));
                }
            }
        }
    }
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                if a == cat.unit || b == cat.unit || c == cat.unit {
                    continue;
                }
                for d in 0..r {
                    let rows = cat.lhs_triples(a, b, c, d);
                    let cols = cat.rhs_triples(a, b, c, d);
                    if rows.is_empty() {
                        continue;
                    }
                    let m = cat.f_matrix(a, b, c, d);
                    for (ri, &(e, mu, nu)) in rows.iter().enumerate() {
                        for (ci, &(f, rho, sigma)) in cols.iter().enumerate() {
                            if !m[(ri, ci)].is_zero() {
                                out.push_str(&format!(
                                    "F {a} {b} {c} {d} {e} {f} {mu} {nu} {rho} {sigma} = {}\n",
                                    m[(ri, ci)]
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

// ---- manifold files -----------------------------------------------------

#[derive(Debug, Clone, Default)]
pub struct ManifoldExtras {
    pub disks: Vec<(usize, usize)>,                   // (face, marked vertex)
    pub tubes: Vec<TubeSpec>,
}

#[derive(Debug, Clone)]
pub struct TubeSpec {
    pub open: bool,
    pub cell: usize,
    pub bottom: usize,
    pub top: usize,
    pub marked_bottom: usize,
    pub marked_top: usize,
    pub color: usize,
    pub longitude: Vec<(usize, CrossDir)>,
}

fn parse_signed(tok: &str, no: usize) -> Result<SignedEdge> {
    if let Some(rest) = tok.strip_prefix('~') {
        Ok((rest.parse().map_err(|_| perr(no, "bad edge ref"))?, true))
    } else {
        Ok((tok.parse().map_err(|_| perr(no, "bad edge ref"))?, false))
    }
}

fn show_signed(se: SignedEdge) -> String {
    if se.1 {
        format!("~{}", se.0)
    } else {
        format!("{}", se.0)
    }
}

pub fn parse_manifold(text: &str) -> Result<(CellComplex, ManifoldExtras)> {
    let mut extras = ManifoldExtras::default();
    let mut mode = "";
    let mut cx = CellComplex::default();
    let mut tri = Triangulation::default();
    let mut have_tri = false;
    for (no, toks) in lines(text) {
        match toks[0] {
            "manifold" => {}
            "tri" => {
                mode = "tri";
                have_tri = true;
            }
            "cw" => {
                mode = "cw";
                let dim: usize = toks
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| perr(no, "cw needs a dimension"))?;
                cx.dim = dim;
            }
            "tet" if mode == "tri" => {
                // tet <i> : <spec0> <spec1> <spec2> <spec3>; spec = - or t:abcd
                let idx: usize = toks[1].parse().map_err(|_| perr(no, "bad tet index"))?;
                while tri.gluings.len() <= idx {
                    tri.gluings.push([None, None, None, None]);
                }
                let colon = toks.iter().position(|&t| t == ":").unwrap_or(1);
                let specs = &toks[colon + 1..];
                if specs.len() != 4 {
                    return Err(perr(no, "tet needs 4 face specs"));
                }
                for (fi, spec) in specs.iter().enumerate() {
                    if *spec == "-" {
                        continue;
                    }
                    let (t, p) = spec
                        .split_once(':')
                        .ok_or_else(|| perr(no, "face spec is t:perm"))?;
                    let t: usize = t.parse().map_err(|_| perr(no, "bad tet ref"))?;
                    if p.len() != 4 {
                        return Err(perr(no, "perm needs 4 digits"));
                    }
                    let mut perm = [0usize; 4];
                    for (k, ch) in p.chars().enumerate() {
                        perm[k] =
                            ch.to_digit(10).ok_or_else(|| perr(no, "bad perm digit"))? as usize;
                    }
                    tri.gluings[idx][fi] = Some((t, perm));
                }
            }
            "vertices" if mode == "cw" => {
                let n: usize = toks[1].parse().map_err(|_| perr(no, "bad vertex count"))?;
                for _ in 0..n {
                    cx.add_vertex();
                }
            }
            "edge" if mode == "cw" => {
                let t: usize = toks[2].parse().map_err(|_| perr(no, "bad tail"))?;
                let h: usize = toks[3].parse().map_err(|_| perr(no, "bad head"))?;
                cx.add_edge(t, h);
            }
            "face" if mode == "cw" => {
                let colon = toks.iter().position(|&t| t == ":").ok_or_else(|| perr(no, "face needs :"))?;
                let word: Vec<SignedEdge> = toks[colon + 1..]
                    .iter()
                    .map(|t| parse_signed(t, no))
                    .collect::<Result<_>>()?;
                cx.add_face(word);
            }
            "cell" if mode == "cw" => {
                // cell <id> shell <f+rot|f-rot>... glue <a.b=c.d>...
                let mut shell: Vec<Option<ShellFace>> = Vec::new();
                let mut glue = HashMap::new();
                let mut it = toks[2..].iter();
                while let Some(&tok) = it.next() {
                    match tok {
                        "shell" | "glue" | ":" => continue,
                        t if t.contains('=') => {
                            let (l, r) = t.split_once('=').unwrap();
                            let pd = |s: &str| -> Result<(usize, usize)> {
                                let (a, b) =
                                    s.split_once('.').ok_or_else(|| perr(no, "dart is sf.slot"))?;
                                Ok((
                                    a.parse().map_err(|_| perr(no, "bad dart"))?,
                                    b.parse().map_err(|_| perr(no, "bad dart"))?,
                                ))
                            };
                            let (a, b) = (pd(l)?, pd(r)?);
                            glue.insert(a, b);
                            glue.insert(b, a);
                        }
                        t => {
                            let (plus, rest) = if let Some((f, r)) = t.split_once('+') {
                                (true, (f, r))
                            } else if let Some((f, r)) = t.split_once('-') {
                                (false, (f, r))
                            } else {
                                return Err(perr(no, "shell face is f+rot or f-rot"));
                            };
                            shell.push(Some(ShellFace {
                                face: rest.0.parse().map_err(|_| perr(no, "bad face ref"))?,
                                plus,
                                rot: rest.1.parse().map_err(|_| perr(no, "bad rot"))?,
                            }));
                        }
                    }
                }
                cx.add_cell(Cell3 { shell, glue });
            }
            "disk" => {
                // disk face=<f> marked=<v>
                let mut f = None;
                let mut v = None;
                for t in &toks[1..] {
                    if let Some(x) = t.strip_prefix("face=") {
                        f = x.parse().ok();
                    }
                    if let Some(x) = t.strip_prefix("marked=") {
                        v = x.parse().ok();
                    }
                }
                extras.disks.push((
                    f.ok_or_else(|| perr(no, "disk needs face="))?,
                    v.ok_or_else(|| perr(no, "disk needs marked="))?,
                ));
            }
            "tube" => {
                // tube open|closed cell=<c> bottom=<f> top=<f> markb=<v>
                //   markt=<v> color=<k> longitude=<e:L|e:R,...>
                let open = match toks.get(1) {
                    Some(&"open") => true,
                    Some(&"closed") => false,
                    _ => return Err(perr(no, "tube open|closed")),
                };
                let mut spec = TubeSpec {
                    open,
                    cell: 0,
                    bottom: 0,
                    top: 0,
                    marked_bottom: 0,
                    marked_top: 0,
                    color: 0,
                    longitude: vec![],
                };
                for t in &toks[2..] {
                    if let Some(x) = t.strip_prefix("cell=") {
                        spec.cell = x.parse().map_err(|_| perr(no, "bad cell"))?;
                    } else if let Some(x) = t.strip_prefix("bottom=") {
                        spec.bottom = x.parse().map_err(|_| perr(no, "bad bottom"))?;
                    } else if let Some(x) = t.strip_prefix("top=") {
                        spec.top = x.parse().map_err(|_| perr(no, "bad top"))?;
                    } else if let Some(x) = t.strip_prefix("markb=") {
                        spec.marked_bottom = x.parse().map_err(|_| perr(no, "bad markb"))?;
                    } else if let Some(x) = t.strip_prefix("markt=") {
                        spec.marked_top = x.parse().map_err(|_| perr(no, "bad markt"))?;
                    } else if let Some(x) = t.strip_prefix("color=") {
                        spec.color = x.parse().map_err(|_| perr(no, "bad color"))?;
                    } else if let Some(x) = t.strip_prefix("longitude=") {
                        if !x.is_empty() {
                            for part in x.split(',') {
                                let (e, d) = part
                                    .split_once(':')
                                    .ok_or_else(|| perr(no, "longitude is e:L or e:R"))?;
                                let dir = match d {
                                    "L" => CrossDir::LeftToRight,
                                    "R" => CrossDir::RightToLeft,
                                    _ => return Err(perr(no, "direction is L or R")),
                                };
                                spec.longitude.push((
                                    e.parse().map_err(|_| perr(no, "bad edge index"))?,
                                    dir,
                                ));
                            }
                        }
                    }
                }
                extras.tubes.push(spec);
            }
            other => return Err(perr(no, format!("unknown directive `{other}`"))),
        }
    }
    if have_tri {
        let cx = crate::complex::from_triangulation(&tri)?;
        return Ok((cx, extras));
    }
    cx.validate()?;
    Ok((cx, extras))
}

pub fn serialize_manifold(cx_raw: &CellComplex, extras_raw: &ManifoldExtras) -> String {
    // compact the complex and remap the extras through the same renumbering
    let vmap: HashMap<usize, usize> =
        cx_raw.live_verts().enumerate().map(|(i, v)| (v, i)).collect();
    let fmap: HashMap<usize, usize> =
        cx_raw.live_faces().enumerate().map(|(i, f)| (f, i)).collect();
    let cmap: HashMap<usize, usize> =
        cx_raw.live_cells().enumerate().map(|(i, c)| (c, i)).collect();
    let extras = ManifoldExtras {
        disks: extras_raw.disks.iter().map(|&(f, v)| (fmap[&f], vmap[&v])).collect(),
        tubes: extras_raw
            .tubes
            .iter()
            .map(|t| TubeSpec {
                open: t.open,
                cell: cmap[&t.cell],
                bottom: fmap[&t.bottom],
                top: fmap[&t.top],
                marked_bottom: vmap[&t.marked_bottom],
                marked_top: vmap[&t.marked_top],
                color: t.color,
                longitude: t.longitude.clone(),
            })
            .collect(),
    };
    let extras = &extras;
    let cx = &cx_raw.compact();
    let mut out = String::new();
    out.push_str(&format!("cw {}\n", cx.dim));
    out.push_str(&format!("vertices {}\n", cx.verts.len()));
    for e in cx.live_edges() {
        let ed = cx.edge(e);
        out.push_str(&format!("edge {e} {} {}\n", ed.tail, ed.head));
    }
    for f in cx.live_faces() {
        let w: Vec<String> = cx.face(f).word.iter().map(|&se| show_signed(se)).collect();
        out.push_str(&format!("face {f} : {}\n", w.join(" ")));
    }
    for c in cx.live_cells() {
        let cell = cx.cell(c);
        let mut parts = vec!["shell".to_string()];
        for s in cell.shell.iter().flatten() {
            parts.push(format!("{}{}{}", s.face, if s.plus { '+' } else { '-' }, s.rot));
        }
        parts.push("glue".to_string());
        let mut pairs: Vec<((usize, usize), (usize, usize))> = Vec::new();
        for (&d, &p) in &cell.glue {
            if d < p {
                pairs.push((d, p));
            }
        }
        pairs.sort();
        for (d, p) in pairs {
            parts.push(format!("{}.{}={}.{}", d.0, d.1, p.0, p.1));
        }
        out.push_str(&format!("cell {c} {}\n", parts.join(" ")));
    }
    for &(f, v) in &extras.disks {
        out.push_str(&format!("disk face={f} marked={v}\n"));
    }
    for t in &extras.tubes {
        let lon: Vec<String> = t
            .longitude
            .iter()
            .map(|&(e, d)| {
                format!("{e}:{}", if d == CrossDir::LeftToRight { "L" } else { "R" })
            })
            .collect();
        out.push_str(&format!(
            "tube {} cell={} bottom={} top={} markb={} markt={} color={} longitude={}\n",
            if t.open { "open" } else { "closed" },
            t.cell,
            t.bottom,
            t.top,
            t.marked_bottom,
            t.marked_top,
            t.color,
            lon.join(",")
        ));
    }
    out
}

/// Assemble an extended manifold from a parsed complex and extras.
pub fn build_extended(
    cx: CellComplex,
    extras: &ManifoldExtras,
    colors: Vec<CenterObject>,
) -> ExtendedManifold {
    let tubes = extras
        .tubes
        .iter()
        .map(|t| Tube {
            kind: if t.open { TubeKind::Open } else { TubeKind::Closed },
            cell: t.cell,
            bottom: t.bottom,
            top: t.top,
            marked_bottom: t.marked_bottom,
            marked_top: t.marked_top,
            color: t.color,
            longitude: t.longitude.clone(),
        })
        .collect();
    ExtendedManifold { base: cx, tubes, colors }
}

pub fn build_extended_surface(cx: CellComplex, extras: &ManifoldExtras) -> ExtendedSurface {
    ExtendedSurface {
        base: cx,
        disks: extras.disks.iter().map(|d| d.0).collect(),
        marked: extras.disks.iter().map(|d| d.1).collect(),
    }
}

// ---- center-object files -------------------------------------------------

pub fn parse_center(text: &str, cat: &FusionCategory) -> Result<CenterObject> {
    let mut name = String::from("center");
    let mut underlying = vec![0usize; cat.rank()];
    let mut entries: Vec<(usize, usize, Vec<usize>, Scalar)> = Vec::new();
    for (no, toks) in lines(text) {
        match toks[0] {
            "center" => name = toks.get(1).unwrap_or(&"center").to_string(),
            "object" => {
                if toks.len() != cat.rank() + 1 {
                    return Err(perr(no, "object needs one multiplicity per simple"));
                }
                for (i, t) in toks[1..].iter().enumerate() {
                    underlying[i] = t.parse().map_err(|_| perr(no, "bad multiplicity"))?;
                }
            }
            "beta" => {
                // beta v c j b nu i a mu = value
                let eq = toks.iter().position(|&t| t == "=").ok_or_else(|| perr(no, "beta needs ="))?;
                if eq != 9 {
                    return Err(perr(no, "beta v c j b nu i a mu = value"));
                }
                let nums: Vec<usize> = toks[1..9]
                    .iter()
                    .map(|t| t.parse().map_err(|_| perr(no, "bad beta index")))
                    .collect::<Result<_>>()?;
                let val = parse_scalar(&toks[10..].join(""), cat.backend)
                    .or_else(|_| parse_scalar(&toks[10..].join(""), Backend::Rational))?;
                entries.push((nums[0], nums[1], nums[2..8].to_vec(), val));
            }
            other => return Err(perr(no, format!("unknown directive `{other}`"))),
        }
    }
    let mut braiding = Vec::with_capacity(cat.rank());
    for v in 0..cat.rank() {
        let mut blocks = HashMap::new();
        for c in 0..cat.rank() {
            let ins = in_triples(cat, &underlying, v, c);
            let outs = out_triples(cat, &underlying, v, c);
            if ins.is_empty() && outs.is_empty() {
                continue;
            }
            blocks.insert(c, Matrix::zeros(outs.len(), ins.len()));
        }
        braiding.push(CenterBraiding { blocks });
    }
    for (v, c, idx, val) in entries {
        let ins = in_triples(cat, &underlying, v, c);
        let outs = out_triples(cat, &underlying, v, c);
        let ri = outs
            .iter()
            .position(|&t| t == (idx[0], idx[1], idx[2]))
            .ok_or_else(|| TvError::Parse(format!("beta out-triple {idx:?} inadmissible")))?;
        let ci = ins
            .iter()
            .position(|&t| t == (idx[3], idx[4], idx[5]))
            .ok_or_else(|| TvError::Parse(format!("beta in-triple {idx:?} inadmissible")))?;
        let block = braiding[v].blocks.get_mut(&c).unwrap();
        block[(ri, ci)] = val;
    }
    Ok(CenterObject { name, underlying, braiding })
}

pub fn serialize_center(cat: &FusionCategory, y: &CenterObject) -> String {
    let mut out = String::new();
    out.push_str(&format!("center {}\n", y.name.replace(' ', "_")));
    let mults: Vec<String> = y.underlying.iter().map(|m| m.to_string()).collect();
    out.push_str(&format!("object {}\n", mults.join(" ")));
    for v in 0..cat.rank() {
        for c in 0..cat.rank() {
            let ins = in_triples(cat, &y.underlying, v, c);
            let outs = out_triples(cat, &y.underlying, v, c);
            if ins.is_empty() {
                continue;
            }
            let Some(block) = y.braiding[v].blocks.get(&c) else { continue };
            for (ri, &(j, b, nu)) in outs.iter().enumerate() {
                for (ci, &(i, a, mu)) in ins.iter().enumerate() {
                    if !block[(ri, ci)].is_zero() {
                        out.push_str(&format!(
                            "beta {v} {c} {j} {b} {nu} {i} {a} {mu} = {}\n",
                            block[(ri, ci)]
                        ));
                    }
                }
            }
        }
    }
    out
}

// ---- move scripts ---------------------------------------------------------

pub fn parse_moves(text: &str) -> Result<Vec<MoveInstance>> {
    let mut out = Vec::new();
    for (no, toks) in lines(text) {
        let mv = match toks[0] {
            "M1" => MoveInstance::M1 {
                vertex: toks[1].parse().map_err(|_| perr(no, "bad vertex"))?,
            },
            "M2" => MoveInstance::M2 {
                edge: toks[1].parse().map_err(|_| perr(no, "bad edge"))?,
            },
            "M3" => MoveInstance::M3 {
                face: toks[1].parse().map_err(|_| perr(no, "bad face"))?,
            },
            "invM1" => MoveInstance::InvM1 {
                edge: toks[1].parse().map_err(|_| perr(no, "bad edge"))?,
            },
            "invM2" => MoveInstance::InvM2 {
                face: toks[1].parse().map_err(|_| perr(no, "bad face"))?,
                cut: (
                    toks[2].parse().map_err(|_| perr(no, "bad cut"))?,
                    toks[3].parse().map_err(|_| perr(no, "bad cut"))?,
                ),
            },
            "invM3" => {
                let cell = toks[1].parse().map_err(|_| perr(no, "bad cell"))?;
                let mut cycle = Vec::new();
                for t in &toks[2..] {
                    let (a, b) = t.split_once('.').ok_or_else(|| perr(no, "dart is sf.slot"))?;
                    cycle.push((
                        a.parse().map_err(|_| perr(no, "bad dart"))?,
                        b.parse().map_err(|_| perr(no, "bad dart"))?,
                    ));
                }
                MoveInstance::InvM3 { cell, cycle }
            }
            other => return Err(perr(no, format!("unknown move `{other}`"))),
        };
        out.push(mv);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{builtin_fibonacci, builtin_vec_g};
    use crate::center::{validate_center_object, vec_g_center_simples};
    use crate::group::GroupTable;

    #[test]
    fn category_round_trip_exact() {
        for cat in [
            builtin_vec_g("vec-z2", &GroupTable::cyclic(2)).unwrap(),
            builtin_vec_g("vec-s3", &GroupTable::s3()).unwrap(),
            builtin_fibonacci().unwrap(),
        ] {
            let text = serialize_category(&cat);
            let re = parse_category(&text).unwrap();
            let text2 = serialize_category(&re);
            assert_eq!(text, text2, "category file round trip for {}", cat.name);
            assert_eq!(re.rank(), cat.rank());
            assert_eq!(re.global_dim_sq, cat.global_dim_sq);
        }
    }

    #[test]
    fn manifold_round_trip() {
        for name in ["s3-two-tet", "t3", "s2xs1", "lens(3,1)"] {
            let cx = crate::complex::canned(name).unwrap();
            let text = serialize_manifold(&cx, &ManifoldExtras::default());
            let (re, _) = parse_manifold(&text).unwrap();
            let text2 = serialize_manifold(&re, &ManifoldExtras::default());
            assert_eq!(text, text2, "manifold round trip for {name}");
            re.validate().unwrap();
        }
    }

    #[test]
    fn triangulation_file() {
        let text = "manifold s3\ntri\ntet 0 : 1:0123 1:0123 1:0123 1:0123\n\
                    tet 1 : 0:0123 0:0123 0:0123 0:0123\n";
        let (cx, _) = parse_manifold(text).unwrap();
        assert_eq!(cx.live_cells().count(), 2);
        assert!(cx.is_closed());
    }

    #[test]
    fn center_round_trip() {
        let table = GroupTable::cyclic(2);
        let cat = builtin_vec_g("vec-z2", &table).unwrap();
        let c = vec_g_center_simples(&cat, &table).unwrap();
        for y in &c.objects {
            let text = serialize_center(&cat, y);
            let re = parse_center(&text, &cat).unwrap();
            assert_eq!(serialize_center(&cat, &re), text);
            validate_center_object(&cat, &re).unwrap();
        }
    }

    #[test]
    fn parse_error_reports_line() {
        let bad = "category x\nbackend rational\nsimple 0 one dual=0\n";
        match parse_category(bad) {
            Err(TvError::Parse(msg)) => assert!(msg.contains("line 3")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
