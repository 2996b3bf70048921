//! Extended surfaces (embedded disks colored by center objects), extended
//! 3-manifolds (framed tubes with longitudes), their state spaces,
//! invariants and cylinder projectors.
//!
//! A longitude is stored combinatorially as its ordered crossing list over
//! the dual-graph edges of the tube cell's boundary sphere, the arc always
//! passing under the edges.

use crate::category::{FusionCategory, SimpleIx};
use crate::center::CenterObject;
use crate::complex::{dual_graph, CellComplex, Cylinder};
use crate::diagram::{
    evaluate_with_arcs, Arc, ArcDecoration, CrossDir, DecoratedColor, DecoratedDiagram, DiagEdge,
    LegKind,
};
use crate::error::{Result, TvError};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::statesum::{admissible_labelings_except, word_labels, Labeling, Tensor};
use crate::trees::{gram_matrix, rotate_by, TreeSpace, TreeVector};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

/// A surface with embedded disks: the disk interiors are single 2-cells and
/// the marked points are vertices at which the disk words start.
#[derive(Debug, Clone)]
pub struct ExtendedSurface {
    pub base: CellComplex,
    pub disks: Vec<usize>,
    pub marked: Vec<usize>,
}

impl ExtendedSurface {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.base.dim != 2 {
            return Err(TvError::Extended("extended surface must be 2-dimensional".into()));
        }
        for (k, &f) in self.disks.iter().enumerate() {
            if self.base.faces.get(f).map_or(true, |x| x.is_none()) {
                return Err(TvError::Extended(format!("disk {k} is not a live face")));
            }
            let w = &self.base.face(f).word;
            let (tail, _) = self.base.edge_endpoints(w[0]);
            if tail != self.marked[k] {
                return Err(TvError::Extended(format!(
                    "disk {k}: word must start at the marked point"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TubeKind {
    /// Bottom and top disks on the boundary.
    Open,
    /// Internal disk cutting the solid torus open.
    Closed,
}

#[derive(Debug, Clone)]
pub struct Tube {
    pub kind: TubeKind,
    pub cell: usize,
    /// Open: (bottom face, top face); closed: the internal disk twice.
    pub bottom: usize,
    pub top: usize,
    pub marked_bottom: usize,
    pub marked_top: usize,
    pub color: usize,
    /// Ordered crossings along the longitude over the dual-graph edges of
    /// the tube cell: (skeleton edge index, direction).
    pub longitude: Vec<(usize, CrossDir)>,
}

#[derive(Debug, Clone)]
pub struct ExtendedManifold {
    pub base: CellComplex,
    pub tubes: Vec<Tube>,
    pub colors: Vec<CenterObject>,
}

impl ExtendedManifold {
    pub fn validate(&self, cat: &FusionCategory) -> Result<()> {
        self.base.validate()?;
        let boundary = self.base.boundary_faces();
        for (k, t) in self.tubes.iter().enumerate() {
            if t.color >= self.colors.len() {
                return Err(TvError::Extended(format!("tube {k}: color out of range")));
            }
            if self.base.cells.get(t.cell).map_or(true, |c| c.is_none()) {
                return Err(TvError::Extended(format!("tube {k}: dead cell")));
            }
            let sfaces: Vec<usize> = self
                .base
                .live_shell_faces(t.cell)
                .iter()
                .map(|&s| self.base.cell(t.cell).shell[s].unwrap().face)
                .collect();
            match t.kind {
                TubeKind::Open => {
                    for f in [t.bottom, t.top] {
                        if !boundary.contains(&f) {
                            return Err(TvError::Extended(format!(
                                "tube {k}: open tube disks must be boundary faces"
                            )));
                        }
                        if !sfaces.contains(&f) {
                            return Err(TvError::Extended(format!(
                                "tube {k}: disk not on the tube cell"
                            )));
                        }
                    }
                }
                TubeKind::Closed => {
                    if t.bottom != t.top {
                        return Err(TvError::Extended(format!(
                            "tube {k}: closed tube uses one internal disk"
                        )));
                    }
                    if sfaces.iter().filter(|&&f| f == t.bottom).count() != 2 {
                        return Err(TvError::Extended(format!(
                            "tube {k}: internal disk must appear twice on the tube cell"
                        )));
                    }
                }
            }
        }
        for y in &self.colors {
            if y.underlying.len() != cat.rank() {
                return Err(TvError::Extended("color has wrong rank".into()));
            }
        }
        Ok(())
    }
}

/// Dimensions of a disk slot: one block per component of the color.
fn disk_slot_dims(
    cat: &FusionCategory,
    comps: &[(SimpleIx, usize)],
    labels: &[SimpleIx],
) -> (Vec<usize>, usize) {
    let mut dims = Vec::new();
    let mut total = 0;
    for &(i, _) in comps {
        let mut w = Vec::with_capacity(labels.len() + 1);
        w.push(i);
        w.extend_from_slice(labels);
        let d = TreeSpace::hom(cat, &w).dim();
        dims.push(d);
        total += d;
    }
    (dims, total)
}

/// Extended state-space dimensions of a colored extended surface:
/// ordinary 2-cells contribute their hom spaces, disks the colored ones.
pub struct ExtStateSpace {
    pub labelings: Vec<Labeling>,
    pub block_dims: Vec<usize>,
    pub total_dim: usize,
}

pub fn ext_state_space(
    cat: &FusionCategory,
    n: &ExtendedSurface,
    colors: &[&CenterObject],
) -> Result<ExtStateSpace> {
    n.validate()?;
    if colors.len() != n.disks.len() {
        return Err(TvError::Extended("one color per disk required".into()));
    }
    let labelings = admissible_labelings_except(cat, &n.base, &n.disks);
    let mut block_dims = Vec::new();
    let mut total = 0;
    for l in &labelings {
        let mut dim = 1usize;
        for f in n.base.live_faces() {
            let labels = word_labels(cat, &n.base, l, f, true);
            if let Some(k) = n.disks.iter().position(|&d| d == f) {
                let (_, t) = disk_slot_dims(cat, &colors[k].components(), &labels);
                dim *= t;
            } else {
                dim *= TreeSpace::hom(cat, &labels).dim();
            }
        }
        block_dims.push(dim);
        total += dim;
    }
    Ok(ExtStateSpace { labelings, block_dims, total_dim: total })
}

/// Slot layout of a tube-cell tensor: like the ordinary cell slots but disk
/// slots are flattened over (component, tree index).
pub struct ExtCellSlots {
    pub faces: Vec<usize>,
    pub sides: Vec<bool>,
    pub dims: Vec<usize>,
    /// per slot: None for ordinary faces; for disk slots the component
    /// blocks (component, tree dim) in order
    pub disk_blocks: Vec<Option<Vec<((SimpleIx, usize), usize)>>>,
}

/// The tube-cell tensor: the decorated dual sphere of the cell, the
/// longitude arc joining the two disk coupons, evaluated against all basis
/// choices. Open tubes read color `Y` at the top disk and `Y*` at the
/// bottom; closed tubes use `Y` at the positive copy of the internal disk.
pub fn tube_cell_vector(
    cat: &FusionCategory,
    m: &ExtendedManifold,
    tube_ix: usize,
    l: &Labeling,
) -> Result<(ExtCellSlots, Tensor)> {
    let tube = &m.tubes[tube_ix];
    let cx = &m.base;
    let cell = tube.cell;
    let color = &m.colors[tube.color];
    let comps = color.components();
    let skel = dual_graph(cx, cell)?;

    // classify coupons and build slot data
    let mut faces = Vec::new();
    let mut sides = Vec::new();
    let mut dims = Vec::new();
    let mut disk_blocks: Vec<Option<Vec<((SimpleIx, usize), usize)>>> = Vec::new();
    let mut coupon_words: Vec<Vec<SimpleIx>> = Vec::new();
    let mut arc_role: Vec<Option<bool>> = Vec::new(); // Some(arriving?)
    for &sfi in &skel.shell_of_coupon {
        let s = cx.cell(cell).shell[sfi].unwrap();
        let labels = word_labels(cat, cx, l, s.face, !s.plus);
        faces.push(s.face);
        sides.push(s.plus);
        let is_disk = s.face == tube.bottom || s.face == tube.top;
        if is_disk {
            if s.rot != 0 {
                return Err(TvError::Extended(
                    "tube disk shell faces must be unrotated (marked-point start)".into(),
                ));
            }
            // arriving at the "top-like" copy: for open tubes the top face,
            // for closed tubes the positive copy
            let arriving = match tube.kind {
                TubeKind::Open => s.face == tube.top,
                TubeKind::Closed => s.plus,
            };
            arc_role.push(Some(arriving));
            let mut blocks = Vec::new();
            let mut total = 0;
            for &(i, a) in &comps {
                // slot consumes H(disk-with-color)^*: the coupon word is the
                // reversed dual of (Y-or-Y*, labels(face, side)); the arc
                // component letter sits at the end
                let mut w = labels.clone();
                let ltr = if arriving { cat.dual(i) } else { i };
                w.push(ltr);
                let d = TreeSpace::hom(cat, &w).dim();
                blocks.push(((i, a), d));
                total += d;
            }
            dims.push(total);
            disk_blocks.push(Some(blocks));
            coupon_words.push(labels);
        } else {
            arc_role.push(None);
            dims.push(TreeSpace::hom(cat, &labels).dim());
            disk_blocks.push(None);
            coupon_words.push(labels);
        }
    }

    // decorated diagram skeleton
    let mut legs: Vec<Vec<LegKind>> = Vec::new();
    let mut start = None;
    let mut end = None;
    for (ci, w) in coupon_words.iter().enumerate() {
        let mut lv: Vec<LegKind> = w.iter().map(|&x| LegKind::Simple(x)).collect();
        if let Some(arriving) = arc_role[ci] {
            lv.push(LegKind::ArcEnd(0, arriving));
            if arriving {
                end = Some((ci, lv.len() - 1));
            } else {
                start = Some((ci, lv.len() - 1));
            }
        }
        legs.push(lv);
    }
    let (start, end) = match (start, end) {
        (Some(s), Some(e)) => (s, e),
        _ => return Err(TvError::Extended("tube disks not found on the cell".into())),
    };
    let edges: Vec<DiagEdge> = skel.edges.iter().map(|&(a, b)| DiagEdge { ends: [a, b] }).collect();
    let arc = Arc { color: 0, start, end, crossings: tube.longitude.clone() };

    let slots = ExtCellSlots { faces, sides, dims: dims.clone(), disk_blocks: disk_blocks.clone() };
    let mut tensor = Tensor::zeros(dims.clone(), cat);
    if dims.iter().any(|&d| d == 0) {
        return Ok((slots, tensor));
    }

    // enumerate slot bases: ordinary slots feed rotated tree bases; disk
    // slots feed (component, tree) blocks
    let spaces: Vec<Vec<(Option<(SimpleIx, usize)>, TreeSpace)>> = (0..dims.len())
        .map(|k| match &disk_blocks[k] {
            None => {
                vec![(None, TreeSpace::hom(cat, &coupon_words[k]))]
            }
            Some(blocks) => blocks
                .iter()
                .map(|&((i, a), _)| {
                    let arriving = arc_role[k].unwrap();
                    let mut w = coupon_words[k].clone();
                    w.push(if arriving { cat.dual(i) } else { i });
                    (Some((i, a)), TreeSpace::hom(cat, &w))
                })
                .collect(),
        })
        .collect();

    let mut idx = vec![0usize; dims.len()];
    loop {
        // decode each slot index into (component, tree index)
        let mut colors_blocks: Vec<DecoratedColor> = Vec::new();
        let mut ok = true;
        for k in 0..dims.len() {
            let mut blocks = HashMap::new();
            match &disk_blocks[k] {
                None => {
                    let sp = &spaces[k][0].1;
                    let s = cx.cell(cell).shell[skel.shell_of_coupon[k]].unwrap();
                    let v = rotate_by(cat, &sp.basis_vector(cat, idx[k]), s.rot);
                    blocks.insert(Vec::new(), v);
                }
                Some(bl) => {
                    // find the component block containing idx[k]
                    let mut rest = idx[k];
                    let mut found = None;
                    for (bi, &(comp, d)) in bl.iter().enumerate() {
                        if rest < d {
                            found = Some((bi, comp, rest));
                            break;
                        }
                        rest -= d;
                    }
                    let Some((bi, comp, tree_ix)) = found else {
                        ok = false;
                        break;
                    };
                    let sp = &spaces[k][bi].1;
                    let v = sp.basis_vector(cat, tree_ix);
                    blocks.insert(vec![comp], v);
                }
            }
            colors_blocks.push(DecoratedColor { blocks });
        }
        if ok {
            let d = DecoratedDiagram {
                coupons: legs.clone(),
                edges: edges.clone(),
                colors: colors_blocks,
                decoration: ArcDecoration { colors: vec![color.clone()], arcs: vec![arc.clone()] },
            };
            let val = evaluate_with_arcs(cat, &d)?;
            let flat = tensor.flat(&idx);
            tensor.data[flat] = val;
        }
        // odometer
        let mut k = dims.len();
        loop {
            if k == 0 {
                return Ok((slots, tensor));
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Extended state vector: like the ordinary one but boundary disk slots are
/// flattened over color components; in the boundary-rescaled gauge.
pub struct ExtStateVector {
    pub boundary_faces: Vec<usize>,
    pub boundary_edges: Vec<usize>,
    pub blocks: BTreeMap<Vec<SimpleIx>, Tensor>,
}

/// The extended invariant: like the ordinary state sum with tube cells
/// contributing their decorated tensors; tube-boundary cells count as
/// internal unless on the boundary of the manifold.
pub fn ext_vector_full(cat: &FusionCategory, m: &ExtendedManifold) -> Result<ExtStateVector> {
    m.validate(cat)?;
    let cx = &m.base;
    let boundary_faces: Vec<usize> = {
        let mut b = cx.boundary_faces();
        b.sort_unstable();
        b
    };
    let boundary_edges = cx.boundary_edges();
    let tube_of_cell: HashMap<usize, usize> =
        m.tubes.iter().enumerate().map(|(i, t)| (t.cell, i)).collect();
    // closed-tube internal disks are contracted with colored dual bases
    let closed_disks: Vec<(usize, usize)> = m
        .tubes
        .iter()
        .enumerate()
        .filter(|(_, t)| t.kind == TubeKind::Closed)
        .map(|(i, t)| (t.bottom, i))
        .collect();

    let skip: Vec<usize> = m
        .tubes
        .iter()
        .flat_map(|t| [t.bottom, t.top])
        .collect();
    let labelings = admissible_labelings_except(cat, cx, &skip);
    let results: Vec<Result<(Vec<SimpleIx>, Tensor, Scalar)>> = labelings
        .par_iter()
        .map(|l| {
            let t = contract_ext(cat, m, l, &boundary_faces, &tube_of_cell, &closed_disks)?;
            let mut w = cat.one();
            let boundary = cx.boundary_edges();
            for (&e, &x) in l {
                if !boundary.contains(&e) {
                    w = &w * &cat.qdim[x];
                }
            }
            let key: Vec<SimpleIx> = boundary_edges.iter().map(|e| l[e]).collect();
            Ok((key, t, w))
        })
        .collect();
    let mut blocks: BTreeMap<Vec<SimpleIx>, Tensor> = BTreeMap::new();
    for r in results {
        let (key, t, w) = r?;
        match blocks.get_mut(&key) {
            Some(acc) => {
                for (a, b) in acc.data.iter_mut().zip(&t.data) {
                    *a = &*a + &(b * &w);
                }
            }
            None => {
                let mut t2 = t;
                for v in t2.data.iter_mut() {
                    *v = &*v * &w;
                }
                blocks.insert(key, t2);
            }
        }
    }
    let norm = {
        let two_v = cx.two_v();
        if two_v % 2 == 0 {
            cat.global_dim_sq.pow(-(two_v / 2))
        } else {
            cat.global_dim
                .clone()
                .ok_or_else(|| TvError::SquareRoot("odd boundary vertex count needs D".into()))?
                .pow(-two_v)
        }
    };
    for t in blocks.values_mut() {
        for v in t.data.iter_mut() {
            *v = &*v * &norm;
        }
    }
    Ok(ExtStateVector { boundary_faces, boundary_edges, blocks })
}

fn contract_ext(
    cat: &FusionCategory,
    m: &ExtendedManifold,
    l: &Labeling,
    boundary_faces: &[usize],
    tube_of_cell: &HashMap<usize, usize>,
    closed_disks: &[(usize, usize)],
) -> Result<Tensor> {
    let cx = &m.base;
    let cells: Vec<usize> = cx.live_cells().collect();
    // per cell tensors (ordinary or tube)
    enum CellData {
        Ordinary(crate::statesum::CellSlots, Tensor),
        Tube(ExtCellSlots, Tensor),
    }
    let mut data = Vec::new();
    for &c in &cells {
        if let Some(&ti) = tube_of_cell.get(&c) {
            let (s, t) = tube_cell_vector(cat, m, ti, l)?;
            data.push(CellData::Tube(s, t));
        } else {
            let (s, t) = crate::statesum::cell_vector(cat, cx, c, l)?;
            data.push(CellData::Ordinary(s, t));
        }
    }
    // boundary slot dims (disk faces of open tubes get colored dims)
    let open_disk: HashMap<usize, (usize, bool)> = m
        .tubes
        .iter()
        .enumerate()
        .filter(|(_, t)| t.kind == TubeKind::Open)
        .flat_map(|(i, t)| [(t.bottom, (i, false)), (t.top, (i, true))])
        .collect();
    let mut bdims = Vec::new();
    for &f in boundary_faces {
        let labels = word_labels(cat, cx, l, f, false);
        match open_disk.get(&f) {
            Some(&(ti, arriving)) => {
                let comps = m.colors[m.tubes[ti].color].components();
                let mut total = 0;
                for &(i, _) in &comps {
                    let mut w = labels.clone();
                    w.push(if arriving { cat.dual(i) } else { i });
                    total += TreeSpace::hom(cat, &w).dim();
                }
                bdims.push(total);
            }
            None => bdims.push(TreeSpace::hom(cat, &labels).dim()),
        }
    }
    let mut out = Tensor::zeros(bdims.clone(), cat);
    if bdims.iter().any(|&d| d == 0) {
        return Ok(out);
    }
    // interior faces: ordinary dual bases; closed-tube disks: colored
    let occ = cx.face_occurrences();
    let mut interior: Vec<usize> = Vec::new();
    for f in cx.live_faces() {
        if occ.get(&f).map_or(0, |v| v.len()) == 2 {
            interior.push(f);
        }
    }
    let mut idims = Vec::new();
    let mut couplers: Vec<Coupler> = Vec::new();
    for &f in &interior {
        if let Some(&(_, ti)) = closed_disks.iter().find(|&&(d, _)| d == f) {
            let comps = m.colors[m.tubes[ti].color].components();
            let labels = word_labels(cat, cx, l, f, true);
            // colored dual bases: block diagonal over components; plus side
            // word (labels, i) paired against (i*, rev labels)... both sides
            // are stored with the component letter LAST on the coupon, so
            // pair blockwise with the tree Gram of (labels ++ i)
            let mut dims_plus = Vec::new();
            let mut ginvs = Vec::new();
            for &(i, _) in &comps {
                let mut w = labels.clone();
                w.push(cat.dual(i)); // plus-copy slot word ends with i*
                let sp = TreeSpace::hom(cat, &w);
                dims_plus.push(sp.dim());
                if sp.dim() > 0 {
                    ginvs.push(Some(gram_matrix(cat, &w)?.inverse()?));
                } else {
                    ginvs.push(None);
                }
            }
            let total: usize = dims_plus.iter().sum();
            idims.push(total * total.min(1).max(1)); // placeholder, fixed below
            couplers.push(Coupler::Colored { dims: dims_plus, ginvs });
            let n = idims.len();
            idims[n - 1] = total;
        } else {
            let w = word_labels(cat, cx, l, f, true);
            let (plus_basis, minus_basis) = crate::trees::dual_basis_pair(cat, &w)?;
            idims.push(plus_basis.len());
            couplers.push(Coupler::Plain { plus_basis, minus_basis });
        }
    }
    if idims.iter().any(|&d| d == 0) {
        return Ok(out);
    }

    enum Coupler {
        Plain { plus_basis: Vec<TreeVector>, minus_basis: Vec<TreeVector> },
        Colored { dims: Vec<usize>, ginvs: Vec<Option<Matrix>> },
    }

    let all_b = multi_index_list(&bdims);
    let all_i = multi_index_list(&idims);
    for bidx in &all_b {
        let mut total = cat.zero();
        for iidx in &all_i {
            let mut product = cat.one();
            'cells: for cd in &data {
                let (faces, sides, dims, tensor) = match cd {
                    CellData::Ordinary(s, t) => (&s.faces, &s.sides, &s.dims, t),
                    CellData::Tube(s, t) => (&s.faces, &s.sides, &s.dims, t),
                };
                let mut terms: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), cat.one())];
                for (k, &f) in faces.iter().enumerate() {
                    if let Some(bpos) = boundary_faces.iter().position(|&b| b == f) {
                        for t in terms.iter_mut() {
                            t.0.push(bidx[bpos]);
                        }
                        continue;
                    }
                    let ipos = interior.iter().position(|&i| i == f).expect("interior face");
                    let alpha = iidx[ipos];
                    match &couplers[ipos] {
                        Coupler::Plain { plus_basis, minus_basis } => {
                            let vec =
                                if sides[k] { &minus_basis[alpha] } else { &plus_basis[alpha] };
                            let mut next = Vec::new();
                            for (coord, val) in vec.coords.iter().enumerate() {
                                if val.is_zero() {
                                    continue;
                                }
                                for (base, scale) in &terms {
                                    let mut b = base.clone();
                                    b.push(coord);
                                    next.push((b, scale * val));
                                }
                            }
                            terms = next;
                        }
                        Coupler::Colored { dims: cdims, ginvs } => {
                            // decode alpha into (component block, tree pair):
                            // the contraction couples the plus copy index p
                            // and minus copy index q through ginv[q][p];
                            // realize by summing: the iidx runs over the
                            // plus-side basis; the minus side expands via
                            // the inverse Gram
                            if sides[k] {
                                // plus copy: direct basis index
                                for t in terms.iter_mut() {
                                    t.0.push(alpha);
                                }
                            } else {
                                // minus copy: expand over its basis with
                                // inverse-Gram coefficients of the same
                                // component block
                                let (bi, local) = decode_block(cdims, alpha);
                                let Some(g) = &ginvs[bi] else {
                                    terms.clear();
                                    product = cat.zero();
                                    break 'cells;
                                };
                                let offset: usize = cdims[..bi].iter().sum();
                                let mut next = Vec::new();
                                for q in 0..cdims[bi] {
                                    let coeff = &g[(q, local)];
                                    if coeff.is_zero() {
                                        continue;
                                    }
                                    for (base, scale) in &terms {
                                        let mut b = base.clone();
                                        b.push(offset + q);
                                        next.push((b, scale * coeff));
                                    }
                                }
                                terms = next;
                            }
                        }
                    }
                    if terms.is_empty() {
                        product = cat.zero();
                        break 'cells;
                    }
                }
                let mut cell_val = cat.zero();
                for (ix, scale) in &terms {
                    debug_assert_eq!(ix.len(), dims.len());
                    let v = tensor.get(ix);
                    if !v.is_zero() {
                        cell_val = &cell_val + &(v * scale);
                    }
                }
                if cell_val.is_zero() {
                    product = cat.zero();
                    break;
                }
                product = &product * &cell_val;
            }
            total = &total + &product;
        }
        let flat = out.flat(bidx);
        out.data[flat] = total;
    }
    Ok(out)
}

fn decode_block(dims: &[usize], mut ix: usize) -> (usize, usize) {
    for (bi, &d) in dims.iter().enumerate() {
        if ix < d {
            return (bi, ix);
        }
        ix -= d;
    }
    panic!("index out of blocks");
}

fn multi_index_list(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        out = out
            .iter()
            .flat_map(|base| {
                (0..d).map(move |i| {
                    let mut b = base.clone();
                    b.push(i);
                    b
                })
            })
            .collect();
    }
    out
}

/// The scalar extended invariant of a closed extended manifold.
pub fn ext_invariant(cat: &FusionCategory, m: &ExtendedManifold) -> Result<Scalar> {
    let sv = ext_vector_full(cat, m)?;
    if !sv.boundary_faces.is_empty() {
        return Err(TvError::Extended("extended invariant of a manifold with boundary".into()));
    }
    let mut total = cat.zero();
    for t in sv.blocks.values() {
        total = &total + &t.data[0];
    }
    Ok(total)
}

/// The extended cylinder over a colored extended surface: disks become open
/// straight tubes (prisms with the vertical longitude crossing the vertical
/// edge's dual loop once).
pub struct ExtCylinder {
    pub manifold: ExtendedManifold,
    pub cylinder: Cylinder,
    pub bottom_disks: Vec<usize>,
    pub top_disks: Vec<usize>,
}

pub fn ext_cylinder(
    cat: &FusionCategory,
    n: &ExtendedSurface,
    colors: &[CenterObject],
) -> Result<ExtCylinder> {
    n.validate()?;
    let cy = crate::complex::cylinder(&n.base)?;
    let mut tubes = Vec::new();
    for (k, &disk) in n.disks.iter().enumerate() {
        // the prism over the disk face is the tube cell: find it by its
        // bottom face
        let bottom = cy.bottom_face[&disk];
        let top = cy.top_face[&disk];
        let cell = cy
            .complex
            .live_cells()
            .find(|&c| {
                cy.complex
                    .live_shell_faces(c)
                    .iter()
                    .any(|&s| cy.complex.cell(c).shell[s].unwrap().face == bottom)
            })
            .ok_or_else(|| TvError::Extended("disk prism not found".into()))?;
        // longitude: the vertical edge at the marked point lifts to a dual
        // loop on the prism; cross it once
        let vert = cy.vertical_edge[&n.marked[k]];
        let skel = dual_graph(&cy.complex, cell)?;
        let mut crossing = None;
        for (ei, &((c1, s1), (c2, s2))) in skel.edges.iter().enumerate() {
            // dart slots back to shell slots
            let sf1 = skel.shell_of_coupon[c1];
            let deg1 = skel.coupon_degree[c1];
            let se1 = cy.complex.shell_word(cell, sf1)[deg1 - 1 - s1];
            let _ = (c2, s2);
            if se1.0 == vert {
                crossing = Some(ei);
                break;
            }
        }
        let ei = crossing
            .ok_or_else(|| TvError::Extended("vertical dual edge not found on prism".into()))?;
        tubes.push(Tube {
            kind: TubeKind::Open,
            cell,
            bottom,
            top,
            marked_bottom: cy.bottom_vert[&n.marked[k]],
            marked_top: cy.top_vert[&n.marked[k]],
            color: k,
            longitude: vec![(ei, CrossDir::LeftToRight)],
        });
    }
    let manifold = ExtendedManifold { base: cy.complex.clone(), tubes, colors: colors.to_vec() };
    manifold.validate(cat)?;
    let bottom_disks = n.disks.iter().map(|d| cy.bottom_face[d]).collect();
    let top_disks = n.disks.iter().map(|d| cy.top_face[d]).collect();
    Ok(ExtCylinder { manifold, cylinder: cy, bottom_disks, top_disks })
}

/// The extended cylinder projector as a value matrix on the extended state
/// space (rank = dimension of the extended TQFT space).
pub struct ExtProjector {
    pub values: Matrix,
    pub space: ExtStateSpace,
}

pub fn ext_projector(
    cat: &FusionCategory,
    n: &ExtendedSurface,
    colors: &[CenterObject],
) -> Result<ExtProjector> {
    let ec = ext_cylinder(cat, n, colors)?;
    let sv = ext_vector_full(cat, &ec.manifold)?;
    let crefs: Vec<&CenterObject> = colors.iter().collect();
    let space = ext_state_space(cat, n, &crefs)?;
    let cy = &ec.cylinder;

    // assemble the value matrix: rows = top slots, cols = bottom slots,
    // blocks over labeling pairs; incoming blocks carry the full prod(d)
    let total = space.total_dim;
    let mut values = Matrix::zeros(total, total);
    let mut offsets = vec![0usize; space.labelings.len()];
    {
        let mut acc = 0;
        for (i, d) in space.block_dims.iter().enumerate() {
            offsets[i] = acc;
            acc += d;
        }
    }
    let faces_sorted = sv.boundary_faces.clone();
    for (l1i, l1) in space.labelings.iter().enumerate() {
        for (l2i, l2) in space.labelings.iter().enumerate() {
            let mut key = Vec::with_capacity(sv.boundary_edges.len());
            for &be in &sv.boundary_edges {
                if let Some((&se, _)) = cy.bottom_edge.iter().find(|(_, &ce)| ce == be) {
                    key.push(l1[&se]);
                } else if let Some((&se, _)) = cy.top_edge.iter().find(|(_, &ce)| ce == be) {
                    key.push(l2[&se]);
                } else {
                    return Err(TvError::Extended("boundary edge not on either end".into()));
                }
            }
            let Some(block) = sv.blocks.get(&key) else { continue };
            // slot dims in boundary face order
            let mut dims = Vec::new();
            for (k, &bf) in faces_sorted.iter().enumerate() {
                let _ = k;
                dims.push(block.dims[faces_sorted.iter().position(|&x| x == bf).unwrap()]);
            }
            // wire: bottom faces map to n-faces with l1, top with l2; the
            // per-surface flattening multiplies slot indices in sorted
            // n-face order with disks flattened over components
            let surf_faces: Vec<usize> = {
                let mut f: Vec<usize> = n.base.live_faces().collect();
                f.sort_unstable();
                f
            };
            let slot_dim = |l: &Labeling, f: usize, arriving: bool| -> usize {
                let labels = word_labels(cat, &n.base, l, f, true);
                if let Some(k) = n.disks.iter().position(|&d| d == f) {
                    let comps = colors[k].components();
                    let mut total = 0;
                    for &(i, _) in &comps {
                        // bottom copies store the reversed word; top the
                        // plain one; the slot words are the reversed duals,
                        // so both are captured by (labels, +/- i) counts
                        let mut w = labels.clone();
                        w.push(if arriving { cat.dual(i) } else { i });
                        total += TreeSpace::hom(cat, &w).dim();
                    }
                    total
                } else {
                    TreeSpace::hom(cat, &labels).dim()
                }
            };
            let _ = slot_dim;
            // incoming weight
            let mut w1sq = cat.one();
            for e in n.base.live_edges() {
                w1sq = &w1sq * &cat.qdim[l1[&e]];
            }
            // iterate block entries and scatter into the matrix
            for (flat, v) in block.data.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                // decode multi-index
                let mut rest = flat;
                let mut midx = vec![0usize; dims.len()];
                for k in (0..dims.len()).rev() {
                    midx[k] = rest % dims[k];
                    rest /= dims[k];
                }
                // split into bottom (col) and top (row) flats over the
                // surface block structure
                let mut col = 0usize;
                let mut row = 0usize;
                let mut cmul = 1usize;
                let mut rmul = 1usize;
                // iterate surface faces in REVERSE sorted order to build
                // row-major flats
                for &sf in surf_faces.iter().rev() {
                    let bf = cy.bottom_face[&sf];
                    let tf = cy.top_face[&sf];
                    let bslot = faces_sorted.iter().position(|&x| x == bf).unwrap();
                    let tslot = faces_sorted.iter().position(|&x| x == tf).unwrap();
                    col += midx[bslot] * cmul;
                    cmul *= dims[bslot];
                    row += midx[tslot] * rmul;
                    rmul *= dims[tslot];
                }
                let r = offsets[l2i] + row;
                let c = offsets[l1i] + col;
                values[(r, c)] = &values[(r, c)] + &(v * &w1sq);
            }
        }
    }
    Ok(ExtProjector { values, space })
}

/// Glue two embedded disks of an extended surface: remove them, connect the
/// boundary circles with a cylinder made of one new edge between the marked
/// points and one new 2-cell.
pub fn glue_disks(n: &ExtendedSurface, a: usize, b: usize) -> Result<ExtendedSurface> {
    if a == b || a >= n.disks.len() || b >= n.disks.len() {
        return Err(TvError::Extended("glue_disks needs two distinct disks".into()));
    }
    let mut base = n.base.clone();
    let fa = n.disks[a];
    let fb = n.disks[b];
    let pa = n.marked[a];
    let pb = n.marked[b];
    let eps = base.add_edge(pa, pb);
    let wa = base.face(fa).word.clone();
    let wb = base.face(fb).word.clone();
    let mut word = wa;
    word.push((eps, false));
    word.extend(wb);
    word.push((eps, true));
    base.faces[fa] = None;
    base.faces[fb] = None;
    base.add_face(word);
    let mut disks = Vec::new();
    let mut marked = Vec::new();
    for (k, &d) in n.disks.iter().enumerate() {
        if k != a && k != b {
            disks.push(d);
            marked.push(n.marked[k]);
        }
    }
    let out = ExtendedSurface { base, disks, marked };
    out.base.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::builtin_vec_g;
    use crate::center::{vec_g_center_simples, CenterObject};
    use crate::complex::n_punctured_sphere;
    use crate::group::GroupTable;

    fn z2() -> (FusionCategory, GroupTable) {
        (builtin_vec_g("vec-z2", &GroupTable::cyclic(2)).unwrap(), GroupTable::cyclic(2))
    }

    fn punctured(n: usize) -> ExtendedSurface {
        let ps = n_punctured_sphere(n);
        ExtendedSurface { base: ps.complex, disks: ps.disks, marked: ps.marked }
    }

    #[test]
    fn ext_state_space_dims() {
        let (cat, _) = z2();
        let s = punctured(1);
        let u = CenterObject::unit(&cat);
        let sp = ext_state_space(&cat, &s, &[&u]).unwrap();
        // raw dim: sum over X of <X, u-label, X*> with the disk <Y, u*>:
        // unit color forces u = 1 on the loop; spokes anything: dim 2
        assert_eq!(sp.total_dim, 2);
        // zero punctures: reduces to the ordinary state space (sphere-like)
        let s0 = punctured(0);
        let sp0 = ext_state_space(&cat, &s0, &[]).unwrap();
        assert_eq!(sp0.total_dim, 1);
    }

    #[test]
    fn unit_color_tube_reduces_to_plain_invariant() {
        let (cat, _) = z2();
        // cylinder over the 1-punctured sphere with the unit color, then
        // the projector trace equals the ordinary sphere projector trace
        let s = punctured(1);
        let u = CenterObject::unit(&cat);
        let p = ext_projector(&cat, &s, &[u]).unwrap();
        assert_eq!(p.values.rank(), 1, "unit-colored 1-puncture sphere has dim 1");
    }

    #[test]
    fn one_puncture_simple_colors() {
        let (cat, table) = z2();
        let c = vec_g_center_simples(&cat, &table).unwrap();
        for (k, y) in c.objects.iter().enumerate() {
            let s = punctured(1);
            let p = ext_projector(&cat, &s, &[y.clone()]).unwrap();
            let expect = c.hom_one_dim(&table, &[k]).unwrap();
            assert_eq!(
                p.values.rank(),
                expect,
                "1-punctured sphere colored {} (dim Hom(1, Y) = {expect})",
                y.name
            );
        }
    }

    #[test]
    fn glue_disks_two_punctures_gives_torus_counts() {
        let s = punctured(2);
        let g = glue_disks(&s, 0, 1).unwrap();
        // sphere with two disks glued into a handle: genus 1
        assert_eq!(g.base.euler_characteristic(), 0);
        assert_eq!(g.disks.len(), 0);
    }
}

// ---- cylinder over an annulus ---------------------------------------------

/// The solid torus `S^1 x I x I` as the cylinder over a one-face annulus:
/// a single cube cell whose boundary carries the two annuli, the inner and
/// outer cylinders, and the interior square with both orientations.
pub struct AnnulusCylinder {
    pub complex: CellComplex,
    pub cell: usize,
    /// shell faces in slot order: bottom annulus, top annulus, inner
    /// cylinder, interior square (+), outer cylinder, interior square (-)
    pub slot_words: Vec<Vec<SimpleIx>>,
}

/// Build the annulus cylinder. Labelings assign simples to the eight edges
/// of the cylinder complex (three bottom copies, three top copies, two
/// verticals).
pub fn annulus_cylinder() -> Result<AnnulusCylinder> {
    let mut ann = CellComplex::new_surface();
    let p_in = ann.add_vertex();
    let p_out = ann.add_vertex();
    let a_in = ann.add_edge(p_in, p_in);
    let a_out = ann.add_edge(p_out, p_out);
    let r = ann.add_edge(p_in, p_out);
    ann.add_face(vec![(a_in, false), (r, false), (a_out, true), (r, true)]);
    let cy = crate::complex::cylinder(&ann)?;
    let cx = cy.complex.clone();
    let cell = cx.live_cells().next().expect("one cell");
    Ok(AnnulusCylinder { complex: cx, cell, slot_words: Vec::new() })
}

/// Dual hom-space words of the six slots of the annulus cylinder under a
/// labeling of its edges.
pub fn annulus_slot_words(
    cat: &FusionCategory,
    ac: &AnnulusCylinder,
    l: &Labeling,
) -> Vec<Vec<SimpleIx>> {
    let cx = &ac.complex;
    cx.live_shell_faces(ac.cell)
        .iter()
        .map(|&sfi| {
            let s = cx.cell(ac.cell).shell[sfi].unwrap();
            word_labels(cat, cx, l, s.face, !s.plus)
        })
        .collect()
}

/// Evaluate the annulus-cylinder kernel on six morphism vectors by the
/// fixed hand-assembled slicing of the flattened cube (independent of the
/// generic planner).
pub fn annulus_cylinder_eval(
    cat: &FusionCategory,
    ac: &AnnulusCylinder,
    inputs: &[TreeVector; 6],
) -> Result<Scalar> {
    use crate::diagram::{PlanarSlicing, SliceOp};
    let ops = vec![
        SliceOp::Coupon { id: 0, pos: 0, rotation: 0 },
        SliceOp::Coupon { id: 2, pos: 0, rotation: 0 },
        SliceOp::Cap { pos: 3 },
        SliceOp::Coupon { id: 3, pos: 3, rotation: 0 },
        SliceOp::Cap { pos: 2 },
        SliceOp::Cap { pos: 4 },
        SliceOp::Coupon { id: 1, pos: 2, rotation: 1 },
        SliceOp::Cap { pos: 1 },
        SliceOp::Cap { pos: 3 },
        SliceOp::Coupon { id: 4, pos: 3, rotation: 2 },
        SliceOp::Cap { pos: 2 },
        SliceOp::Cap { pos: 4 },
        SliceOp::Cap { pos: 3 },
        SliceOp::Coupon { id: 5, pos: 3, rotation: 3 },
        SliceOp::Cap { pos: 2 },
        SliceOp::Cap { pos: 4 },
        SliceOp::Cap { pos: 1 },
        SliceOp::Cap { pos: 0 },
    ];
    let slicing = PlanarSlicing { ops };
    crate::diagram::evaluate_with_colors(cat, &slicing, inputs)
}

/// The same contraction through the generic dual-graph pipeline.
pub fn annulus_cylinder_eval_generic(
    cat: &FusionCategory,
    ac: &AnnulusCylinder,
    inputs: &[TreeVector; 6],
) -> Result<Scalar> {
    let skel = dual_graph(&ac.complex, ac.cell)?;
    let coupons = skel
        .shell_of_coupon
        .iter()
        .zip(inputs.iter())
        .map(|(&sfi, v)| {
            let _ = sfi;
            crate::diagram::Coupon { legs: v.word.clone(), color: Some(v.clone()) }
        })
        .collect();
    let edges = skel.edges.iter().map(|&(a, b)| DiagEdge { ends: [a, b] }).collect();
    let d = crate::diagram::SphereDiagram { coupons, edges, loops: vec![] };
    crate::diagram::evaluate_sphere(cat, &d)
}

#[cfg(test)]
mod annulus_tests {
    use super::*;
    use crate::category::{builtin_fibonacci, builtin_vec_g};
    use crate::group::GroupTable;
    use crate::scalar::Scalar;
    use rand::{Rng, SeedableRng};

    #[test]
    fn two_paths_agree_and_units_give_one() {
        let cat = builtin_vec_g("vec-z2", &GroupTable::cyclic(2)).unwrap();
        let ac = annulus_cylinder().unwrap();
        // trivial labeling: every edge unit
        let l: Labeling = ac.complex.live_edges().map(|e| (e, 0usize)).collect();
        let words = annulus_slot_words(&cat, &ac, &l);
        let inputs: Vec<TreeVector> = words
            .iter()
            .map(|w| TreeSpace::hom(&cat, w).basis_vector(&cat, 0))
            .collect();
        let inputs: [TreeVector; 6] = inputs.try_into().unwrap();
        let hand = annulus_cylinder_eval(&cat, &ac, &inputs).unwrap();
        let gen = annulus_cylinder_eval_generic(&cat, &ac, &inputs).unwrap();
        assert_eq!(hand, Scalar::one());
        assert_eq!(hand, gen);
    }

    #[test]
    fn two_paths_agree_on_random_tuples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for cat in [
            builtin_vec_g("vec-z2", &GroupTable::cyclic(2)).unwrap(),
            builtin_fibonacci().unwrap(),
        ] {
            let ac = annulus_cylinder().unwrap();
            let labelings = crate::statesum::admissible_labelings(&cat, &ac.complex);
            assert!(!labelings.is_empty());
            let mut done = 0;
            for _ in 0..20 {
                let l = &labelings[rng.gen_range(0..labelings.len())];
                let words = annulus_slot_words(&cat, &ac, l);
                let mut inputs = Vec::new();
                for w in &words {
                    let sp = TreeSpace::hom(&cat, w);
                    assert!(sp.dim() > 0, "admissible labeling has zero slot");
                    let mut v = sp.zero_vector(&cat);
                    for c in v.coords.iter_mut() {
                        *c = Scalar::from_int(rng.gen_range(-2..=2)).promote(cat.backend).unwrap();
                    }
                    inputs.push(v);
                }
                let inputs: [TreeVector; 6] = inputs.try_into().unwrap();
                let hand = annulus_cylinder_eval(&cat, &ac, &inputs).unwrap();
                let gen = annulus_cylinder_eval_generic(&cat, &ac, &inputs).unwrap();
                assert_eq!(hand, gen, "two-path mismatch over {}", cat.name);
                done += 1;
            }
            assert!(done >= 10, "not enough tuples for {}", cat.name);
        }
    }

    #[test]
    fn bilinearity_in_each_slot() {
        let cat = builtin_vec_g("vec-z2", &GroupTable::cyclic(2)).unwrap();
        let ac = annulus_cylinder().unwrap();
        let l: Labeling = ac.complex.live_edges().map(|e| (e, 0usize)).collect();
        let words = annulus_slot_words(&cat, &ac, &l);
        let base: Vec<TreeVector> = words
            .iter()
            .map(|w| TreeSpace::hom(&cat, w).basis_vector(&cat, 0))
            .collect();
        for k in 0..6 {
            let mut doubled = base.clone();
            doubled[k] = doubled[k].scale(&Scalar::from_int(2));
            let a = annulus_cylinder_eval(&cat, &ac, &base.clone().try_into().unwrap()).unwrap();
            let b = annulus_cylinder_eval(&cat, &ac, &doubled.try_into().unwrap()).unwrap();
            assert_eq!(&a + &a, b, "slot {k} not linear");
        }
    }
}
