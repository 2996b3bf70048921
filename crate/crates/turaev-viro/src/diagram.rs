//! Colored graphs on the sphere and their scalar evaluation.
//!
//! A [`SphereDiagram`] is a rotation system: coupons with cyclic leg lists,
//! edges pairing legs, plus free loops. [`flatten`] turns it into a
//! [`PlanarSlicing`] — a deterministic program of elementary levels (cups,
//! caps, coupon insertions) on a single evolving strand word — and
//! [`evaluate`] replays that program through the fusion-tree kernel.
//!
//! Arcs colored by center objects are handled by expanding each arc into
//! simple components and replacing every arc-edge crossing by a small
//! coupon built from the half-braiding, the arc always passing under the
//! edge.

use crate::category::{FusionCategory, SimpleIx};
use crate::center::CenterObject;
use crate::error::{Result, TvError};
use crate::scalar::Scalar;
use crate::trees::{rotate_by, TreeSpace, TreeVector, WordState};
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct Coupon {
    /// Labels of incident edge ends in clockwise order, as read at this
    /// coupon (an edge leaving with label X is read as X, arriving as X*).
    pub legs: Vec<SimpleIx>,
    /// Color in `<legs...>`, tree basis of the stored linear order.
    pub color: Option<TreeVector>,
}

/// An edge joins two coupon slots carrying dual labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagEdge {
    pub ends: [(usize, usize); 2],
}

#[derive(Debug, Clone, Default)]
pub struct SphereDiagram {
    pub coupons: Vec<Coupon>,
    pub edges: Vec<DiagEdge>,
    /// Free loops with no coupons on them.
    pub loops: Vec<SimpleIx>,
}

/// One elementary level of a slicing; strands not named are identities.
#[derive(Debug, Clone)]
pub enum SliceOp {
    /// Insert `coev_X` at `pos`.
    Cup { pos: usize, label: SimpleIx },
    /// Evaluate the adjacent dual pair at `pos`, `pos+1`.
    Cap { pos: usize },
    /// Insert coupon `id`, legs rotated forward by `rotation`, at `pos`.
    /// The rotation is realized by bending strands (cups and caps).
    Coupon { id: usize, pos: usize, rotation: usize },
    /// A free loop: a cup immediately closed by a cap.
    Loop { label: SimpleIx },
}

#[derive(Debug, Clone)]
pub struct PlanarSlicing {
    pub ops: Vec<SliceOp>,
}

impl SphereDiagram {
    pub fn partner(&self, end: (usize, usize)) -> Option<(usize, usize)> {
        for e in &self.edges {
            if e.ends[0] == end {
                return Some(e.ends[1]);
            }
            if e.ends[1] == end {
                return Some(e.ends[0]);
            }
        }
        None
    }

    /// Structural checks: every leg in exactly one edge, dual labels on the
    /// two ends, rotation system of every connected component a sphere.
    pub fn validate(&self, cat: &FusionCategory) -> Result<()> {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            for &(c, s) in &e.ends {
                if c >= self.coupons.len() || s >= self.coupons[c].legs.len() {
                    return Err(TvError::Diagram(format!("edge {i} references missing leg")));
                }
                if seen.insert((c, s), i).is_some() {
                    return Err(TvError::Diagram(format!("leg ({c},{s}) used twice")));
                }
            }
            let l0 = self.coupons[e.ends[0].0].legs[e.ends[0].1];
            let l1 = self.coupons[e.ends[1].0].legs[e.ends[1].1];
            if cat.dual(l0) != l1 {
                return Err(TvError::Diagram(format!(
                    "edge {i} joins non-dual labels {} and {}",
                    cat.simples[l0].name, cat.simples[l1].name
                )));
            }
        }
        for (c, coupon) in self.coupons.iter().enumerate() {
            for s in 0..coupon.legs.len() {
                if !seen.contains_key(&(c, s)) {
                    return Err(TvError::Diagram(format!("leg ({c},{s}) is dangling")));
                }
            }
            if let Some(color) = &coupon.color {
                if color.word != coupon.legs {
                    return Err(TvError::Diagram(format!(
                        "coupon {c} color word does not match its legs"
                    )));
                }
            }
        }
        for comp in self.components() {
            let v = comp.len() as i64;
            let e = self.edges.iter().filter(|e| comp.contains(&e.ends[0].0)).count() as i64;
            let f = self.faces_of(&comp).len() as i64;
            if v != 0 && v - e + f != 2 {
                return Err(TvError::NotSpherical(format!(
                    "component has Euler characteristic {}",
                    v - e + f
                )));
            }
        }
        Ok(())
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.coupons.len();
        let mut comp = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(c) = stack.pop() {
                members.push(c);
                for s in 0..self.coupons[c].legs.len() {
                    if let Some((c2, _)) = self.partner((c, s)) {
                        if comp[c2] == usize::MAX {
                            comp[c2] = id;
                            stack.push(c2);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    fn faces_of(&self, comp: &[usize]) -> Vec<Vec<(usize, usize)>> {
        let mut darts: Vec<(usize, usize)> = Vec::new();
        for &c in comp {
            for s in 0..self.coupons[c].legs.len() {
                darts.push((c, s));
            }
        }
        let step = |d: (usize, usize)| -> (usize, usize) {
            let (c2, s2) = self.partner(d).expect("validated diagram");
            let deg = self.coupons[c2].legs.len();
            (c2, (s2 + 1) % deg)
        };
        let mut used: HashMap<(usize, usize), bool> = darts.iter().map(|&d| (d, false)).collect();
        let mut faces = Vec::new();
        for &d0 in &darts {
            if used[&d0] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = d0;
            loop {
                face.push(d);
                *used.get_mut(&d).unwrap() = true;
                d = step(d);
                if d == d0 {
                    break;
                }
            }
            face.sort_unstable();
            faces.push(face);
        }
        faces.sort();
        faces
    }

    /// All faces of the diagram, deterministically ordered.
    pub fn faces(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for comp in self.components() {
            out.extend(self.faces_of(&comp));
        }
        out.sort();
        out
    }
}

/// Deterministic flattening: a merge sweep rooted at the lowest coupon
/// incident to `outer_face`. Every coupon appears exactly once.
pub fn flatten(diagram: &SphereDiagram, outer_face: usize) -> Result<PlanarSlicing> {
    let faces = diagram.faces();
    if !diagram.coupons.is_empty() && outer_face >= faces.len() {
        return Err(TvError::Diagram(format!("outer face {outer_face} out of range")));
    }
    let mut ops = Vec::new();
    for &label in &diagram.loops {
        ops.push(SliceOp::Loop { label });
    }
    let mut placed = vec![false; diagram.coupons.len()];
    let mut word: Vec<(usize, usize)> = Vec::new();
    let mut first = true;

    while placed.iter().any(|p| !p) || !word.is_empty() {
        // cap the leftmost adjacent matched pair
        let mut progressed = false;
        for p in 0..word.len().saturating_sub(1) {
            if diagram.partner(word[p]) == Some(word[p + 1]) {
                ops.push(SliceOp::Cap { pos: p });
                word.remove(p + 1);
                word.remove(p);
                progressed = true;
                break;
            }
        }
        if progressed {
            continue;
        }
        // place the partner coupon of the leftmost dart with an unplaced one
        for p in 0..word.len() {
            let (c2, s2) = diagram.partner(word[p]).expect("validated diagram");
            if placed[c2] {
                continue;
            }
            let deg = diagram.coupons[c2].legs.len();
            let rotation = (deg - s2) % deg;
            ops.push(SliceOp::Coupon { id: c2, pos: p + 1, rotation });
            for k in 0..deg {
                word.insert(p + 1 + k, (c2, (s2 + k) % deg));
            }
            placed[c2] = true;
            progressed = true;
            break;
        }
        if progressed {
            continue;
        }
        // start a new component
        let root = if first {
            faces
                .get(outer_face)
                .and_then(|f| f.iter().map(|&(c, _)| c).find(|&c| !placed[c]))
                .or_else(|| (0..diagram.coupons.len()).find(|&c| !placed[c]))
        } else {
            (0..diagram.coupons.len()).find(|&c| !placed[c])
        };
        if let Some(root) = root {
            first = false;
            let pos = word.len();
            let deg = diagram.coupons[root].legs.len();
            ops.push(SliceOp::Coupon { id: root, pos, rotation: 0 });
            for k in 0..deg {
                word.push((root, k));
            }
            placed[root] = true;
            continue;
        }
        return Err(TvError::Diagram(
            "flatten made no progress; rotation system is inconsistent".into(),
        ));
    }
    Ok(PlanarSlicing { ops })
}

/// Replay a slicing, taking coupon colors from `colors` (indexed by coupon).
pub fn evaluate_with_colors(
    cat: &FusionCategory,
    slicing: &PlanarSlicing,
    colors: &[TreeVector],
) -> Result<Scalar> {
    let mut state = WordState::empty(cat);
    let mut loop_factor = cat.one();
    for op in &slicing.ops {
        match op {
            SliceOp::Loop { label } => {
                loop_factor = &loop_factor * &cat.qdim[*label];
            }
            SliceOp::Cup { pos, label } => state.cup(cat, *pos, *label),
            SliceOp::Cap { pos } => state.cap(cat, *pos)?,
            SliceOp::Coupon { id, pos, rotation } => {
                let color = colors
                    .get(*id)
                    .ok_or_else(|| TvError::Diagram(format!("missing color for coupon {id}")))?;
                let rotated = rotate_by(cat, color, *rotation);
                state.insert_closed(cat, *pos, &rotated);
            }
        }
    }
    Ok(&state.scalar(cat)? * &loop_factor)
}

/// Compose the level maps against the colors stored in the diagram.
pub fn evaluate(
    cat: &FusionCategory,
    diagram: &SphereDiagram,
    slicing: &PlanarSlicing,
) -> Result<Scalar> {
    let colors: Vec<TreeVector> = diagram
        .coupons
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.color.clone().ok_or_else(|| TvError::Diagram(format!("coupon {i} has no color")))
        })
        .collect::<Result<_>>()?;
    evaluate_with_colors(cat, slicing, &colors)
}

/// Evaluate a colored graph on the sphere (canonical outer face 0).
pub fn evaluate_sphere(cat: &FusionCategory, diagram: &SphereDiagram) -> Result<Scalar> {
    diagram.validate(cat)?;
    let slicing = flatten(diagram, 0)?;
    evaluate(cat, diagram, &slicing)
}

// ---- arc decorations -------------------------------------------------------

/// Which way the arc passes under an edge, relative to the edge direction
/// from its end 0 towards its end 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossDir {
    LeftToRight,
    RightToLeft,
}

/// An oriented arc colored by a center object. Its endpoints occupy slots
/// of coupons (whose colors then live in extended hom spaces), and it
/// crosses ordinary edges transversally, always underneath.
#[derive(Debug, Clone)]
pub struct Arc {
    pub color: usize,
    pub start: (usize, usize),
    pub end: (usize, usize),
    /// Ordered crossings along the arc: (edge index, direction).
    pub crossings: Vec<(usize, CrossDir)>,
}

#[derive(Debug, Clone)]
pub struct ArcDecoration {
    pub colors: Vec<CenterObject>,
    pub arcs: Vec<Arc>,
}

/// Coupon colors of a decorated diagram, one block per assignment of
/// center-object components to the coupon's arc slots (in slot order).
#[derive(Debug, Clone)]
pub struct DecoratedColor {
    pub blocks: HashMap<Vec<(SimpleIx, usize)>, TreeVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegKind {
    Simple(SimpleIx),
    /// (arc index, true = arriving end, read dualized).
    ArcEnd(usize, bool),
}

/// A sphere diagram decorated by center-colored arcs.
#[derive(Debug, Clone)]
pub struct DecoratedDiagram {
    pub coupons: Vec<Vec<LegKind>>,
    pub edges: Vec<DiagEdge>,
    pub colors: Vec<DecoratedColor>,
    pub decoration: ArcDecoration,
}

/// Evaluate a decorated diagram: sum over component assignments of every
/// arc segment, crossings replaced by half-braiding coupons.
pub fn evaluate_with_arcs(cat: &FusionCategory, d: &DecoratedDiagram) -> Result<Scalar> {
    for arc in &d.decoration.arcs {
        if arc.color >= d.decoration.colors.len() {
            return Err(TvError::Extended("arc color out of range".into()));
        }
    }
    let mut assignment: Vec<Vec<(SimpleIx, usize)>> = d
        .decoration
        .arcs
        .iter()
        .map(|a| vec![(0usize, 0usize); a.crossings.len() + 1])
        .collect();
    let mut total = cat.zero();
    sum_assignments(cat, d, 0, &mut assignment, &mut total)?;
    Ok(total)
}

fn sum_assignments(
    cat: &FusionCategory,
    d: &DecoratedDiagram,
    arc_ix: usize,
    assignment: &mut Vec<Vec<(SimpleIx, usize)>>,
    total: &mut Scalar,
) -> Result<()> {
    if arc_ix == d.decoration.arcs.len() {
        let value = evaluate_assignment(cat, d, assignment)?;
        *total = &*total + &value;
        return Ok(());
    }
    let arc = &d.decoration.arcs[arc_ix];
    let comps = d.decoration.colors[arc.color].components();
    if comps.is_empty() {
        return Ok(());
    }
    let segs = arc.crossings.len() + 1;
    let mut odometer = vec![0usize; segs];
    loop {
        for (s, &c) in odometer.iter().enumerate() {
            assignment[arc_ix][s] = comps[c];
        }
        sum_assignments(cat, d, arc_ix + 1, assignment, total)?;
        let mut i = 0;
        loop {
            if i == segs {
                return Ok(());
            }
            odometer[i] += 1;
            if odometer[i] < comps.len() {
                break;
            }
            odometer[i] = 0;
            i += 1;
        }
    }
}

fn evaluate_assignment(
    cat: &FusionCategory,
    d: &DecoratedDiagram,
    assignment: &[Vec<(SimpleIx, usize)>],
) -> Result<Scalar> {
    let deco = &d.decoration;
    let mut plain = SphereDiagram::default();
    for (ci, legs) in d.coupons.iter().enumerate() {
        let mut resolved = Vec::with_capacity(legs.len());
        let mut key = Vec::new();
        for leg in legs {
            match *leg {
                LegKind::Simple(l) => resolved.push(l),
                LegKind::ArcEnd(a, arriving) => {
                    let seg = if arriving { assignment[a].len() - 1 } else { 0 };
                    let (simple, copy) = assignment[a][seg];
                    key.push((simple, copy));
                    resolved.push(if arriving { cat.dual(simple) } else { simple });
                }
            }
        }
        let block = match d.colors[ci].blocks.get(&key) {
            Some(b) => b.clone(),
            None => TreeSpace::hom(cat, &resolved).zero_vector(cat),
        };
        if block.word != resolved {
            return Err(TvError::Extended(format!(
                "decorated color block of coupon {ci} has word {:?}, expected {:?}",
                block.word, resolved
            )));
        }
        plain.coupons.push(Coupon { legs: resolved, color: Some(block) });
    }
    // crossing coupons
    let mut crossing_id: HashMap<(usize, usize), usize> = HashMap::new();
    for (ai, arc) in deco.arcs.iter().enumerate() {
        let color = &deco.colors[arc.color];
        for (ki, &(edge, dir)) in arc.crossings.iter().enumerate() {
            let v = edge_label_from_end0(cat, d, edge);
            let (legs, vector) =
                crossing_coupon(cat, color, v, assignment[ai][ki], assignment[ai][ki + 1], dir)?;
            crossing_id.insert((ai, ki), plain.coupons.len());
            plain.coupons.push(Coupon { legs, color: Some(vector) });
        }
    }
    // wire original edges, subdivided at their crossings
    for (ei, e) in d.edges.iter().enumerate() {
        let mut crossings: Vec<(usize, usize)> = Vec::new();
        for (ai, arc) in deco.arcs.iter().enumerate() {
            for (ki, &(edge, _)) in arc.crossings.iter().enumerate() {
                if edge == ei {
                    crossings.push((ai, ki));
                }
            }
        }
        let mut prev = e.ends[0];
        for &(ai, ki) in &crossings {
            let cid = crossing_id[&(ai, ki)];
            // the edge always enters a crossing coupon at slot 2 and
            // leaves at slot 0 (see crossing_coupon)
            plain.edges.push(DiagEdge { ends: [prev, (cid, 2)] });
            prev = (cid, 0);
        }
        plain.edges.push(DiagEdge { ends: [prev, e.ends[1]] });
    }
    // wire arc segments
    for (ai, arc) in deco.arcs.iter().enumerate() {
        let mut prev = arc.start;
        for ki in 0..arc.crossings.len() {
            let cid = crossing_id[&(ai, ki)];
            let (arc_in, arc_out) = match arc.crossings[ki].1 {
                CrossDir::LeftToRight => (3usize, 1usize),
                CrossDir::RightToLeft => (1usize, 3usize),
            };
            plain.edges.push(DiagEdge { ends: [prev, (cid, arc_in)] });
            prev = (cid, arc_out);
        }
        plain.edges.push(DiagEdge { ends: [prev, arc.end] });
    }
    evaluate_sphere(cat, &plain)
}

fn edge_label_from_end0(cat: &FusionCategory, d: &DecoratedDiagram, edge: usize) -> SimpleIx {
    let _ = cat;
    let (c, s) = d.edges[edge].ends[0];
    match d.coupons[c][s] {
        // the crossing's incoming slot (which faces end0) must carry the
        // dual of this leg, so the coupon word is built on the leg label
        LegKind::Simple(l) => l,
        LegKind::ArcEnd(..) => unreachable!("arcs do not cross arc segments"),
    }
}

/// The 4-valent coupon replacing one crossing of an arc (component
/// `(i,a) -> (j,b)` of `y`) under an edge labeled `v` in the direction of
/// travel from its end 0.
///
/// Slot layout, clockwise:
/// * `LeftToRight`: 0 edge-out `v`, 1 arc-out `j`, 2 edge-in `v*`, 3 arc-in `i*`
/// * `RightToLeft`: 0 edge-out `v`, 1 arc-in `i*`, 2 edge-in `v*`, 3 arc-out `j`
fn crossing_coupon(
    cat: &FusionCategory,
    y: &CenterObject,
    v: SimpleIx,
    input: (SimpleIx, usize),
    output: (SimpleIx, usize),
    dir: CrossDir,
) -> Result<(Vec<SimpleIx>, TreeVector)> {
    let (i, a) = input;
    let (j, b) = output;
    match dir {
        CrossDir::LeftToRight => {
            let g = y.braiding_pair(cat, v, (i, a), (j, b))?;
            let mut st = WordState::empty(cat);
            st.cup(cat, 0, i);
            st.cup(cat, 1, v);
            // word (i, v, v*, i*)
            st.apply_pair(cat, 0, &g)?;
            // word (v, j, v*, i*)
            Ok((vec![v, j, cat.dual(v), cat.dual(i)], st.to_vector(cat)))
        }
        CrossDir::RightToLeft => {
            let g = y.braiding_inv_pair(cat, v, (i, a), (j, b))?;
            let mut st = WordState::empty(cat);
            st.cup(cat, 0, v);
            st.cup(cat, 1, i);
            // word (v, i, i*, v*)
            st.apply_pair(cat, 0, &g)?;
            // word (j, v, i*, v*); rotate one step to (v, i*, v*, j)
            let rotated = rotate_by(cat, &st.to_vector(cat), 3);
            Ok((vec![v, cat.dual(i), cat.dual(v), j], rotated))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{builtin_fibonacci, builtin_vec_g};
    use crate::group::GroupTable;
    use crate::scalar::Scalar;
    use crate::trees::{cyclic_rotate, dual_basis_pair, dual_word, pairing};

    fn z2() -> FusionCategory {
        builtin_vec_g("vec-z2", &GroupTable::cyclic(2)).unwrap()
    }

    fn s3cat() -> FusionCategory {
        builtin_vec_g("vec-s3", &GroupTable::s3()).unwrap()
    }

    fn fib() -> FusionCategory {
        builtin_fibonacci().unwrap()
    }

    #[test]
    fn empty_diagram_is_one() {
        let cat = z2();
        let d = SphereDiagram::default();
        assert_eq!(evaluate_sphere(&cat, &d).unwrap(), cat.one());
    }

    #[test]
    fn free_loop_is_quantum_dimension() {
        let cat = fib();
        let d = SphereDiagram { loops: vec![1], ..Default::default() };
        assert_eq!(evaluate_sphere(&cat, &d).unwrap(), cat.qdim[1]);
        let s = flatten(&d, 0).unwrap();
        assert!(matches!(s.ops[0], SliceOp::Loop { .. }));
    }

    fn theta(
        cat: &FusionCategory,
        word: &[SimpleIx],
        v: TreeVector,
        w: TreeVector,
    ) -> SphereDiagram {
        let n = word.len();
        let legs0 = word.to_vec();
        let legs1 = dual_word(cat, word);
        let edges = (0..n).map(|k| DiagEdge { ends: [(0, k), (1, n - 1 - k)] }).collect();
        SphereDiagram {
            coupons: vec![
                Coupon { legs: legs0, color: Some(v) },
                Coupon { legs: legs1, color: Some(w) },
            ],
            edges,
            loops: vec![],
        }
    }

    #[test]
    fn theta_reproduces_pairing() {
        for cat in [z2(), fib()] {
            for word in [vec![1usize, 1], vec![1, 1, 1]] {
                let sp = TreeSpace::hom(&cat, &word);
                let spd = TreeSpace::hom(&cat, &dual_word(&cat, &word));
                if sp.dim() == 0 {
                    continue;
                }
                for i in 0..sp.dim() {
                    for j in 0..spd.dim() {
                        let v = sp.basis_vector(&cat, i);
                        let w = spd.basis_vector(&cat, j);
                        let d = theta(&cat, &word, v.clone(), w.clone());
                        let val = evaluate_sphere(&cat, &d).unwrap();
                        let expect = pairing(&cat, &v, &w).unwrap();
                        assert_eq!(val, expect, "theta != pairing over {} {word:?}", cat.name);
                    }
                }
            }
        }
    }

    #[test]
    fn theta_with_dual_bases_counts_dimension() {
        for cat in [z2(), s3cat(), fib()] {
            for word in [vec![1usize, 1, 1], vec![1, 1, 1, 1]] {
                let sp = TreeSpace::hom(&cat, &word);
                if sp.dim() == 0 {
                    continue;
                }
                let (l, r) = dual_basis_pair(&cat, &word).unwrap();
                let mut total = cat.zero();
                for (v, w) in l.iter().zip(&r) {
                    let d = theta(&cat, &word, v.clone(), w.clone());
                    total = &total + &evaluate_sphere(&cat, &d).unwrap();
                }
                assert_eq!(
                    total,
                    Scalar::from_int(sp.dim() as i64).promote(cat.backend).unwrap()
                );
            }
        }
    }

    #[test]
    fn zero_color_and_linearity() {
        let cat = fib();
        let word = vec![1usize, 1, 1];
        let sp = TreeSpace::hom(&cat, &word);
        let spd = TreeSpace::hom(&cat, &dual_word(&cat, &word));
        let v = sp.basis_vector(&cat, 0);
        let w = spd.basis_vector(&cat, 0);
        let zero = sp.zero_vector(&cat);
        assert!(evaluate_sphere(&cat, &theta(&cat, &word, zero, w.clone())).unwrap().is_zero());
        let a = evaluate_sphere(&cat, &theta(&cat, &word, v.clone(), w.clone())).unwrap();
        let b = evaluate_sphere(&cat, &theta(&cat, &word, v.scale(&Scalar::from_int(2)), w))
            .unwrap();
        assert_eq!(&a + &a, b);
    }

    #[test]
    fn k4_group_delta_and_face_independence() {
        let cat = s3cat();
        let mut coupons = Vec::new();
        for _ in 0..4 {
            coupons.push(Coupon { legs: vec![0, 0, 0], color: None });
        }
        let edges = vec![
            DiagEdge { ends: [(0, 0), (1, 0)] },
            DiagEdge { ends: [(0, 1), (2, 0)] },
            DiagEdge { ends: [(0, 2), (3, 0)] },
            DiagEdge { ends: [(1, 1), (3, 2)] },
            DiagEdge { ends: [(1, 2), (2, 1)] },
            DiagEdge { ends: [(2, 2), (3, 1)] },
        ];
        let mut d = SphereDiagram { coupons, edges, loops: vec![] };
        let sp = TreeSpace::hom(&cat, &[0, 0, 0]);
        for c in &mut d.coupons {
            c.color = Some(sp.basis_vector(&cat, 0));
        }
        d.validate(&cat).unwrap();
        let faces = d.faces();
        assert_eq!(faces.len(), 4);
        let base = evaluate_sphere(&cat, &d).unwrap();
        assert_eq!(base, cat.one());
        for f in 0..faces.len() {
            let s = flatten(&d, f).unwrap();
            assert_eq!(evaluate(&cat, &d, &s).unwrap(), base, "face {f} differs");
        }
    }

    #[test]
    fn starting_edge_rotation_invariance() {
        let cat = fib();
        let word = vec![1usize, 1, 1];
        let sp = TreeSpace::hom(&cat, &word);
        let spd = TreeSpace::hom(&cat, &dual_word(&cat, &word));
        let v = sp.basis_vector(&cat, 0);
        let w = spd.basis_vector(&cat, 0);
        let base = evaluate_sphere(&cat, &theta(&cat, &word, v.clone(), w.clone())).unwrap();
        // rotate coupon 0 forward: slot k now holds the leg formerly at the
        // last position; color becomes z(v)
        let v_rot = cyclic_rotate(&cat, &v);
        let d2 = SphereDiagram {
            coupons: vec![
                Coupon { legs: word.clone(), color: Some(v_rot) },
                Coupon { legs: dual_word(&cat, &word), color: Some(w) },
            ],
            edges: vec![
                DiagEdge { ends: [(0, 1), (1, 2)] },
                DiagEdge { ends: [(0, 2), (1, 1)] },
                DiagEdge { ends: [(0, 0), (1, 0)] },
            ],
            loops: vec![],
        };
        assert_eq!(evaluate_sphere(&cat, &d2).unwrap(), base);
    }

    #[test]
    fn disjoint_union_multiplies() {
        let cat = fib();
        let word = vec![1usize, 1, 1];
        let sp = TreeSpace::hom(&cat, &word);
        let spd = TreeSpace::hom(&cat, &dual_word(&cat, &word));
        let v = sp.basis_vector(&cat, 0);
        let w = spd.basis_vector(&cat, 0);
        let one = theta(&cat, &word, v, w);
        let a = evaluate_sphere(&cat, &one).unwrap();
        let mut two = one.clone();
        let off = two.coupons.len();
        for c in one.coupons.iter() {
            two.coupons.push(c.clone());
        }
        for e in one.edges.iter() {
            two.edges.push(DiagEdge {
                ends: [(e.ends[0].0 + off, e.ends[0].1), (e.ends[1].0 + off, e.ends[1].1)],
            });
        }
        assert_eq!(evaluate_sphere(&cat, &two).unwrap(), &a * &a);
    }

    #[test]
    fn bubble_on_a_line_factorizes() {
        // a simple X-line through a coupon pair is (phi,phi')/d_X times the
        // identity line, so closing with any 2-valent bubble factorizes:
        // eval(with bubble) * d_X = eval(plain theta) * eval(loop with bubble)
        let cat = fib();
        let x = 1usize;
        let w = vec![x, cat.dual(x)];
        let sp = TreeSpace::hom(&cat, &w);
        let phi = sp.basis_vector(&cat, 0);
        let phi_d = TreeSpace::hom(&cat, &dual_word(&cat, &w)).basis_vector(&cat, 0);
        let bw = vec![cat.dual(x), x];
        let bubble = TreeSpace::hom(&cat, &bw).basis_vector(&cat, 0);

        let plain_val = evaluate_sphere(&cat, &theta(&cat, &w, phi.clone(), phi_d.clone())).unwrap();
        let loop_bubble = SphereDiagram {
            coupons: vec![Coupon { legs: bw.clone(), color: Some(bubble.clone()) }],
            edges: vec![DiagEdge { ends: [(0, 1), (0, 0)] }],
            loops: vec![],
        };
        let loop_val = evaluate_sphere(&cat, &loop_bubble).unwrap();
        let with_bubble = SphereDiagram {
            coupons: vec![
                Coupon { legs: w.clone(), color: Some(phi) },
                Coupon { legs: dual_word(&cat, &w), color: Some(phi_d) },
                Coupon { legs: bw, color: Some(bubble) },
            ],
            edges: vec![
                DiagEdge { ends: [(0, 0), (2, 0)] },
                DiagEdge { ends: [(2, 1), (1, 1)] },
                DiagEdge { ends: [(0, 1), (1, 0)] },
            ],
            loops: vec![],
        };
        let with_val = evaluate_sphere(&cat, &with_bubble).unwrap();
        assert_eq!(&with_val * &cat.qdim[x], &plain_val * &loop_val);
    }
}
