//! Polytope decompositions of surfaces and 3-manifolds.
//!
//! Cells are stored under stable ids (tombstoned on removal) so that moves
//! and their inverses restore a complex literally. A 3-cell carries its
//! boundary 2-sphere as a list of shell faces — references `(face, side,
//! rotation)` into the complex — plus a gluing involution on the shell
//! darts. Shell words are derived from the face words, so every edit to a
//! face word comes with an explicit old-slot-to-new-slot map that is pushed
//! through the shells.

use crate::error::{Result, TvError};
use std::collections::HashMap;

/// An oriented reference to an edge: `(edge id, false)` traverses it from
/// tail to head.
pub type SignedEdge = (usize, bool);

pub fn rev(e: SignedEdge) -> SignedEdge {
    (e.0, !e.1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Closed edge word, counterclockwise for the face's own orientation.
    pub word: Vec<SignedEdge>,
}

/// One face of the boundary sphere of a 3-cell: which face of the complex,
/// which side of it, and a rotation offset into the oriented word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShellFace {
    pub face: usize,
    pub plus: bool,
    pub rot: usize,
}

pub type Dart = (usize, usize); // (shell-face index, slot)

#[derive(Debug, Clone, PartialEq)]
pub struct Cell3 {
    pub shell: Vec<Option<ShellFace>>,
    /// Fixed-point-free involution on live shell darts.
    pub glue: HashMap<Dart, Dart>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CellComplex {
    pub dim: usize,
    pub verts: Vec<bool>, // live flags
    pub edges: Vec<Option<Edge>>,
    pub faces: Vec<Option<Face>>,
    pub cells: Vec<Option<Cell3>>,
}

impl CellComplex {
    pub fn new_surface() -> Self {
        CellComplex { dim: 2, ..Default::default() }
    }

    pub fn new_3manifold() -> Self {
        CellComplex { dim: 3, ..Default::default() }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.verts.push(true);
        self.verts.len() - 1
    }

    pub fn add_edge(&mut self, tail: usize, head: usize) -> usize {
        self.edges.push(Some(Edge { tail, head }));
        self.edges.len() - 1
    }

    pub fn add_face(&mut self, word: Vec<SignedEdge>) -> usize {
        self.faces.push(Some(Face { word }));
        self.faces.len() - 1
    }

    pub fn add_cell(&mut self, cell: Cell3) -> usize {
        self.cells.push(Some(cell));
        self.cells.len() - 1
    }

    pub fn live_verts(&self) -> impl Iterator<Item = usize> + '_ {
        self.verts.iter().enumerate().filter(|(_, &l)| l).map(|(i, _)| i)
    }

    pub fn live_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().enumerate().filter(|(_, e)| e.is_some()).map(|(i, _)| i)
    }

    pub fn live_faces(&self) -> impl Iterator<Item = usize> + '_ {
        self.faces.iter().enumerate().filter(|(_, f)| f.is_some()).map(|(i, _)| i)
    }

    pub fn live_cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().enumerate().filter(|(_, c)| c.is_some()).map(|(i, _)| i)
    }

    pub fn edge(&self, e: usize) -> &Edge {
        self.edges[e].as_ref().expect("live edge")
    }

    pub fn face(&self, f: usize) -> &Face {
        self.faces[f].as_ref().expect("live face")
    }

    pub fn cell(&self, c: usize) -> &Cell3 {
        self.cells[c].as_ref().expect("live cell")
    }

    pub fn edge_endpoints(&self, e: SignedEdge) -> (usize, usize) {
        let ed = self.edge(e.0);
        if e.1 {
            (ed.head, ed.tail)
        } else {
            (ed.tail, ed.head)
        }
    }

    /// The face's boundary word for the chosen side.
    pub fn oriented_word(&self, face: usize, plus: bool) -> Vec<SignedEdge> {
        let w = &self.face(face).word;
        if plus {
            w.clone()
        } else {
            w.iter().rev().map(|&e| rev(e)).collect()
        }
    }

    /// Word of a shell face: the oriented word rotated by `rot`.
    pub fn shell_word(&self, cell: usize, sf: usize) -> Vec<SignedEdge> {
        let s = self.cell(cell).shell[sf].expect("live shell face");
        let w = self.oriented_word(s.face, s.plus);
        let n = w.len();
        (0..n).map(|k| w[(k + s.rot) % n]).collect()
    }

    pub fn live_shell_faces(&self, cell: usize) -> Vec<usize> {
        self.cell(cell)
            .shell
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(i, _)| i)
            .collect()
    }

    /// Occurrences of each face among the shells: (cell, shell index, side).
    pub fn face_occurrences(&self) -> HashMap<usize, Vec<(usize, usize, bool)>> {
        let mut occ: HashMap<usize, Vec<(usize, usize, bool)>> = HashMap::new();
        for c in self.live_cells() {
            for sfi in self.live_shell_faces(c) {
                let s = self.cell(c).shell[sfi].unwrap();
                occ.entry(s.face).or_default().push((c, sfi, s.plus));
            }
        }
        occ
    }

    /// Faces on the boundary (3-manifolds: one shell occurrence; surfaces:
    /// every face is "boundary" in this sense but the notion is unused).
    pub fn boundary_faces(&self) -> Vec<usize> {
        if self.dim == 2 {
            return Vec::new();
        }
        let occ = self.face_occurrences();
        self.live_faces().filter(|f| occ.get(f).map_or(0, |v| v.len()) == 1).collect()
    }

    pub fn boundary_edges(&self) -> Vec<usize> {
        let bf: Vec<usize> = self.boundary_faces();
        let mut out: Vec<usize> = bf
            .iter()
            .flat_map(|&f| self.face(f).word.iter().map(|&(e, _)| e))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        let be = self.boundary_edges();
        let mut out: Vec<usize> = be
            .iter()
            .flat_map(|&e| {
                let ed = self.edge(e);
                [ed.tail, ed.head]
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_closed(&self) -> bool {
        self.dim == 3 && self.boundary_faces().is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.live_verts().count() as i64 - self.live_edges().count() as i64
            + self.live_faces().count() as i64
            - self.live_cells().count() as i64
    }

    /// Structural validation: closed face words, shell gluings forming
    /// 2-spheres, and the boundary bookkeeping (interior faces appear on
    /// shells exactly twice with opposite sides, boundary faces once with
    /// the positive side).
    pub fn validate(&self) -> Result<()> {
        for e in self.live_edges() {
            let ed = self.edge(e);
            if !self.verts.get(ed.tail).copied().unwrap_or(false)
                || !self.verts.get(ed.head).copied().unwrap_or(false)
            {
                return Err(TvError::Complex(format!("edge {e} has dead endpoint")));
            }
        }
        for f in self.live_faces() {
            let w = &self.face(f).word;
            if w.is_empty() {
                return Err(TvError::Complex(format!("face {f} has empty word")));
            }
            for (k, &se) in w.iter().enumerate() {
                if self.edges.get(se.0).map_or(true, |e| e.is_none()) {
                    return Err(TvError::Complex(format!("face {f} references dead edge")));
                }
                let (_, head) = self.edge_endpoints(se);
                let (tail2, _) = self.edge_endpoints(w[(k + 1) % w.len()]);
                if head != tail2 {
                    return Err(TvError::Complex(format!(
                        "face {f} word is not a closed edge path at position {k}"
                    )));
                }
            }
        }
        if self.dim == 2 {
            if self.live_cells().count() != 0 {
                return Err(TvError::Complex("surface with 3-cells".into()));
            }
            return Ok(());
        }
        for c in self.live_cells() {
            self.validate_shell(c)?;
        }
        // boundary bookkeeping
        let occ = self.face_occurrences();
        for f in self.live_faces() {
            match occ.get(&f).map(|v| v.as_slice()) {
                Some([(_, _, true)]) => {}
                Some([a, b]) if a.2 != b.2 => {}
                Some([_]) => {
                    return Err(TvError::Complex(format!(
                        "boundary face {f} appears with its negative side"
                    )));
                }
                other => {
                    return Err(TvError::Complex(format!(
                        "face {f} has {} shell occurrences",
                        other.map_or(0, |v| v.len())
                    )));
                }
            }
        }
        Ok(())
    }

    fn validate_shell(&self, c: usize) -> Result<()> {
        let cell = self.cell(c);
        let sfis = self.live_shell_faces(c);
        let mut darts: Vec<Dart> = Vec::new();
        for &sfi in &sfis {
            let w = self.shell_word(c, sfi);
            for slot in 0..w.len() {
                darts.push((sfi, slot));
            }
        }
        for &d in &darts {
            let p = *cell
                .glue
                .get(&d)
                .ok_or_else(|| TvError::Complex(format!("cell {c}: unglued dart {d:?}")))?;
            if p == d {
                return Err(TvError::Complex(format!("cell {c}: dart glued to itself")));
            }
            if cell.glue.get(&p) != Some(&d) {
                return Err(TvError::Complex(format!("cell {c}: glue not involutive at {d:?}")));
            }
            let e1 = self.shell_word(c, d.0)[d.1];
            let e2 = self.shell_word(c, p.0)[p.1];
            if e1 != rev(e2) {
                return Err(TvError::Complex(format!(
                    "cell {c}: glued darts carry non-opposite edges {e1:?} vs {e2:?}"
                )));
            }
        }
        if cell.glue.len() != darts.len() {
            return Err(TvError::Complex(format!("cell {c}: stale glue entries")));
        }
        // sphere check: V - E + F = 2, vertices counted as orbits of the
        // corner walk glue(rotate(d)) which fixes the head vertex of a dart
        let e_count = darts.len() / 2;
        let f_count = sfis.len();
        let next = |d: Dart| -> Dart {
            let deg = self.shell_word(c, d.0).len();
            cell.glue[&(d.0, (d.1 + 1) % deg)]
        };
        let mut seen: HashMap<Dart, bool> = darts.iter().map(|&d| (d, false)).collect();
        let mut v_count = 0usize;
        for &d0 in &darts {
            if seen[&d0] {
                continue;
            }
            v_count += 1;
            let mut d = d0;
            loop {
                *seen.get_mut(&d).unwrap() = true;
                let (_, v0) = self.edge_endpoints(self.shell_word(c, d.0)[d.1]);
                d = next(d);
                let (_, v1) = self.edge_endpoints(self.shell_word(c, d.0)[d.1]);
                if v1 != v0 {
                    return Err(TvError::Complex(format!(
                        "cell {c}: corner walk changes vertex at {d:?}"
                    )));
                }
                if d == d0 {
                    break;
                }
            }
        }
        let chi = v_count as i64 - e_count as i64 + f_count as i64;
        if chi != 2 {
            return Err(TvError::Complex(format!(
                "cell {c}: boundary has Euler characteristic {chi}, not a sphere"
            )));
        }
        Ok(())
    }

    /// First homology invariant factors (d_1 | d_2 | ...; 0 = a free factor)
    /// of the chain complex over the integers.
    pub fn homology_h1(&self) -> Vec<i64> {
        // boundary matrices with compact reindexing
        let vmap: HashMap<usize, usize> =
            self.live_verts().enumerate().map(|(i, v)| (v, i)).collect();
        let emap: HashMap<usize, usize> =
            self.live_edges().enumerate().map(|(i, e)| (e, i)).collect();
        let nv = vmap.len();
        let ne = emap.len();
        let mut d1 = vec![vec![0i64; ne]; nv];
        for (e, &col) in &emap {
            let ed = self.edge(*e);
            d1[vmap[&ed.tail]][col] -= 1;
            d1[vmap[&ed.head]][col] += 1;
        }
        let faces: Vec<usize> = self.live_faces().collect();
        let mut d2 = vec![vec![0i64; faces.len()]; ne];
        for (col, &f) in faces.iter().enumerate() {
            for &(e, r) in &self.face(f).word {
                d2[emap[&e]][col] += if r { -1 } else { 1 };
            }
        }
        let rank_d1 = smith_normal_form(&mut d1.clone()).iter().filter(|&&x| x != 0).count();
        let snf_d2 = smith_normal_form(&mut d2);
        let rank_d2 = snf_d2.iter().filter(|&&x| x != 0).count();
        // H1 = Z^{ne - rank d1 - rank d2} + sum of torsion from d2
        let free = ne - rank_d1 - rank_d2;
        let mut factors: Vec<i64> =
            snf_d2.iter().filter(|&&x| x.abs() > 1).map(|&x| x.abs()).collect();
        for _ in 0..free {
            factors.push(0);
        }
        factors.sort_unstable();
        factors
    }

    /// Renumber all cells densely (dropping tombstones), preserving order.
    pub fn compact(&self) -> CellComplex {
        let vmap: HashMap<usize, usize> =
            self.live_verts().enumerate().map(|(i, v)| (v, i)).collect();
        let emap: HashMap<usize, usize> =
            self.live_edges().enumerate().map(|(i, e)| (e, i)).collect();
        let fmap: HashMap<usize, usize> =
            self.live_faces().enumerate().map(|(i, f)| (f, i)).collect();
        let mut out = CellComplex { dim: self.dim, ..Default::default() };
        for _ in 0..vmap.len() {
            out.add_vertex();
        }
        for e in self.live_edges() {
            let ed = self.edge(e);
            out.add_edge(vmap[&ed.tail], vmap[&ed.head]);
        }
        for f in self.live_faces() {
            let word = self.face(f).word.iter().map(|&(e, r)| (emap[&e], r)).collect();
            out.add_face(word);
        }
        for c in self.live_cells() {
            let cell = self.cell(c);
            // shell faces also compact
            let live_sf: Vec<usize> = self.live_shell_faces(c);
            let sfmap: HashMap<usize, usize> =
                live_sf.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let shell = live_sf
                .iter()
                .map(|&s| {
                    let sf = cell.shell[s].unwrap();
                    Some(ShellFace { face: fmap[&sf.face], plus: sf.plus, rot: sf.rot })
                })
                .collect();
            let glue = cell
                .glue
                .iter()
                .map(|(&(a, sa), &(b, sb))| ((sfmap[&a], sa), (sfmap[&b], sb)))
                .collect();
            out.add_cell(Cell3 { shell, glue });
        }
        out
    }

    /// 2 * v(M): twice the vertex weight of the normalization (interior
    /// vertices count 1, boundary vertices 1/2).
    pub fn two_v(&self) -> i64 {
        let boundary = self.boundary_vertices();
        let total = self.live_verts().count() as i64;
        2 * total - boundary.len() as i64
    }
}

/// Smith normal form diagonal of an integer matrix (destructive helper).
pub fn smith_normal_form(m: &mut Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut r0 = 0;
    let mut c0 = 0;
    while r0 < rows && c0 < cols {
        // find a pivot with minimal absolute value
        let mut pivot: Option<(usize, usize)> = None;
        for i in r0..rows {
            for j in c0..cols {
                if m[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(r0, pi);
        for row in m.iter_mut() {
            row.swap(c0, pj);
        }
        // eliminate
        let mut again = true;
        while again {
            again = false;
            for i in (r0 + 1)..rows {
                if m[i][c0] != 0 {
                    let q = m[i][c0] / m[r0][c0];
                    for j in c0..cols {
                        m[i][j] -= q * m[r0][j];
                    }
                    if m[i][c0] != 0 {
                        m.swap(r0, i);
                        again = true;
                    }
                }
            }
            for j in (c0 + 1)..cols {
                if m[r0][j] != 0 {
                    let q = m[r0][j] / m[r0][c0];
                    for i in r0..rows {
                        let t = q * m[i][c0];
                        m[i][j] -= t;
                    }
                    if m[r0][j] != 0 {
                        for row in m.iter_mut() {
                            row.swap(c0, j);
                        }
                        again = true;
                    }
                }
            }
        }
        diag.push(m[r0][c0].abs());
        r0 += 1;
        c0 += 1;
    }
    // enforce divisibility chain (sufficient for our small cases)
    diag.sort_unstable();
    loop {
        let mut changed = false;
        for i in 0..diag.len().saturating_sub(1) {
            if diag[i] != 0 && diag[i + 1] % diag[i] != 0 {
                let a = diag[i];
                let b = diag[i + 1];
                let g = gcd(a, b);
                diag[i] = g;
                diag[i + 1] = a / g * b;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    diag
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

// ---- moves -----------------------------------------------------------------

/// A move of the polytope calculus, or an exact-restore payload produced as
/// the inverse of an applied move.
#[derive(Debug, Clone)]
pub enum MoveInstance {
    /// Remove a vertex with an open-book neighborhood, merging its two edges.
    M1 { vertex: usize },
    /// Remove a regular edge adjacent to exactly two distinct 2-cells.
    M2 { edge: usize },
    /// Remove a regular interior 2-cell adjacent to two distinct 3-cells.
    M3 { face: usize },
    /// Split an edge by a fresh vertex.
    InvM1 { edge: usize },
    /// Split a face along a fresh edge between the corners before positions
    /// `cut.0 < cut.1` of its canonical word.
    InvM2 { face: usize, cut: (usize, usize) },
    /// Split a 3-cell along a fresh 2-cell whose boundary is the given
    /// simple dart cycle on the cell's shell.
    InvM3 { cell: usize, cycle: Vec<Dart> },
    /// Surgical restoration of the pieces a forward application removed.
    Restore(Box<Snapshot>),
}

#[derive(Debug, Clone, Default)]
pub struct Snapshot {
    pub kill_verts: Vec<usize>,
    pub kill_edges: Vec<usize>,
    pub kill_faces: Vec<usize>,
    pub kill_cells: Vec<usize>,
    pub put_verts: Vec<usize>,
    pub put_edges: Vec<(usize, Edge)>,
    pub put_faces: Vec<(usize, Face)>,
    pub put_cells: Vec<(usize, Cell3)>,
    /// truncate storage back to these lengths (fresh ids were appended)
    pub len_verts: usize,
    pub len_edges: usize,
    pub len_faces: usize,
    pub len_cells: usize,
}

impl CellComplex {
    fn snapshot_base(&self) -> Snapshot {
        Snapshot {
            len_verts: self.verts.len(),
            len_edges: self.edges.len(),
            len_faces: self.faces.len(),
            len_cells: self.cells.len(),
            ..Default::default()
        }
    }

    fn apply_snapshot(&self, s: &Snapshot) -> CellComplex {
        let mut c = self.clone();
        for &v in &s.kill_verts {
            c.verts[v] = false;
        }
        for &e in &s.kill_edges {
            c.edges[e] = None;
        }
        for &f in &s.kill_faces {
            c.faces[f] = None;
        }
        for &x in &s.kill_cells {
            c.cells[x] = None;
        }
        c.verts.truncate(s.len_verts);
        c.edges.truncate(s.len_edges);
        c.faces.truncate(s.len_faces);
        c.cells.truncate(s.len_cells);
        for &v in &s.put_verts {
            c.verts[v] = true;
        }
        for (e, data) in &s.put_edges {
            c.edges[*e] = Some(data.clone());
        }
        for (f, data) in &s.put_faces {
            c.faces[*f] = Some(data.clone());
        }
        for (x, data) in &s.put_cells {
            c.cells[*x] = Some(data.clone());
        }
        c
    }

    /// Corners of faces located at a vertex: (face, word position k) such
    /// that head(word[k]) = v (the corner between positions k and k+1).
    pub fn corners_at(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for f in self.live_faces() {
            let w = &self.face(f).word;
            for (k, &se) in w.iter().enumerate() {
                if self.edge_endpoints(se).1 == v {
                    out.push((f, k));
                }
            }
        }
        out
    }

    fn edge_ends_at(&self, v: usize) -> Vec<(usize, bool)> {
        // (edge, true = head end)
        let mut out = Vec::new();
        for e in self.live_edges() {
            let ed = self.edge(e);
            if ed.tail == v {
                out.push((e, false));
            }
            if ed.head == v {
                out.push((e, true));
            }
        }
        out
    }

    /// Apply a move, returning the new complex and the exact inverse.
    pub fn apply_move(&self, m: &MoveInstance) -> Result<(CellComplex, MoveInstance)> {
        match m {
            MoveInstance::M1 { vertex } => self.move_m1(*vertex),
            MoveInstance::M2 { edge } => self.move_m2(*edge),
            MoveInstance::M3 { face } => self.move_m3(*face),
            MoveInstance::InvM1 { edge } => self.move_inv_m1(*edge),
            MoveInstance::InvM2 { face, cut } => self.move_inv_m2(*face, *cut),
            MoveInstance::InvM3 { cell, cycle } => self.move_inv_m3(*cell, cycle),
            MoveInstance::Restore(s) => {
                let c = self.apply_snapshot(s);
                Err(TvError::Other(format!(
                    "restore payloads have no generic inverse; got complex with {} cells",
                    c.live_cells().count()
                )))
            }
        }
    }

    /// Apply a move without asking for the inverse (restores included).
    pub fn apply_move_oneway(&self, m: &MoveInstance) -> Result<CellComplex> {
        match m {
            MoveInstance::Restore(s) => Ok(self.apply_snapshot(s)),
            _ => Ok(self.apply_move(m)?.0),
        }
    }

    // -- M1 -------------------------------------------------------------

    fn m1_config(&self, v: usize) -> Result<(usize, usize)> {
        if !self.verts.get(v).copied().unwrap_or(false) {
            return Err(TvError::MoveInapplicable(format!("vertex {v} not in complex")));
        }
        let ends = self.edge_ends_at(v);
        if ends.len() != 2 {
            return Err(TvError::MoveInapplicable(format!(
                "vertex {v} has {} edge ends, need exactly 2",
                ends.len()
            )));
        }
        let (e1, e2) = (ends[0].0, ends[1].0);
        if e1 == e2 {
            return Err(TvError::MoveInapplicable(format!(
                "the two 1-cells at vertex {v} are not distinct"
            )));
        }
        // every face has at most one corner at v, and there is at least one
        let corners = self.corners_at(v);
        if corners.is_empty() {
            return Err(TvError::MoveInapplicable(format!("vertex {v} has no leaves")));
        }
        let mut faces_seen: Vec<usize> = corners.iter().map(|&(f, _)| f).collect();
        faces_seen.sort_unstable();
        let before = faces_seen.len();
        faces_seen.dedup();
        if faces_seen.len() != before {
            return Err(TvError::MoveInapplicable(format!(
                "leaves at vertex {v} are not distinct 2-cells"
            )));
        }
        Ok((e1, e2))
    }

    fn move_m1(&self, v: usize) -> Result<(CellComplex, MoveInstance)> {
        let (e1, e2) = self.m1_config(v)?;
        let mut snap = self.snapshot_base();
        snap.put_verts.push(v);
        snap.put_edges.push((e1, self.edge(e1).clone()));
        snap.put_edges.push((e2, self.edge(e2).clone()));

        let mut out = self.clone();
        // merged edge: from the far end of e1 to the far end of e2
        let far = |e: usize| {
            let ed = self.edge(e);
            if ed.tail == v {
                ed.head
            } else {
                ed.tail
            }
        };
        let em = out.add_edge(far(e1), far(e2));
        snap.kill_edges.push(em);

        // rewrite face words; record position maps and the merged-pair
        // partner of each deleted position for the shells
        let mut edits: HashMap<usize, (Vec<Option<usize>>, HashMap<usize, usize>)> =
            HashMap::new();
        for (f, k) in self.corners_at(v) {
            snap.put_faces.push((f, self.face(f).clone()));
            let w = self.face(f).word.clone();
            let n = w.len();
            let k2 = (k + 1) % n;
            // merged letter: +em when entering along e1, -em along e2
            let entering = w[k].0;
            let merged = if entering == e1 { (em, false) } else { (em, true) };
            let mut neww = Vec::with_capacity(n - 1);
            let mut map: Vec<Option<usize>> = vec![None; n];
            for (pos, &se) in w.iter().enumerate() {
                if pos == k2 {
                    continue;
                }
                if pos == k {
                    map[pos] = Some(neww.len());
                    neww.push(merged);
                } else {
                    map[pos] = Some(neww.len());
                    neww.push(se);
                }
            }
            out.faces[f] = Some(Face { word: neww });
            let partner: HashMap<usize, usize> = [(k2, k)].into_iter().collect();
            edits.insert(f, (map, partner));
        }
        out.verts[v] = false;
        out.edges[e1] = None;
        out.edges[e2] = None;

        // push the edits through every shell
        for c in self.live_cells() {
            let changed = self
                .live_shell_faces(c)
                .iter()
                .any(|&sfi| edits.contains_key(&self.cell(c).shell[sfi].unwrap().face));
            if !changed {
                continue;
            }
            snap.put_cells.push((c, self.cell(c).clone()));
            let newcell = self.reshell_after_word_edits(c, &edits, &out)?;
            out.cells[c] = Some(newcell);
        }
        out.validate_after_move()?;
        Ok((out, MoveInstance::Restore(Box::new(snap))))
    }

    /// Rebuild a cell's shell after face-word edits: slot maps come from
    /// the per-face position maps; a dart over a deleted position resolves
    /// to the dart over its recorded merge partner.
    fn reshell_after_word_edits(
        &self,
        c: usize,
        edits: &HashMap<usize, (Vec<Option<usize>>, HashMap<usize, usize>)>,
        new_complex: &CellComplex,
    ) -> Result<Cell3> {
        let cell = self.cell(c);
        let mut shell: Vec<Option<ShellFace>> = Vec::with_capacity(cell.shell.len());
        let mut slot_maps: Vec<Option<Vec<Option<usize>>>> = Vec::new();
        // slot -> face position, per shell face (for partner resolution)
        let mut pos_of_slot: Vec<Option<Vec<usize>>> = Vec::new();
        for (sfi, s) in cell.shell.iter().enumerate() {
            let Some(s) = s else {
                shell.push(None);
                slot_maps.push(None);
                pos_of_slot.push(None);
                continue;
            };
            let Some((map, _)) = edits.get(&s.face) else {
                shell.push(Some(*s));
                let n = self.shell_word(c, sfi).len();
                slot_maps.push(Some((0..n).map(Some).collect()));
                pos_of_slot.push(Some((0..n).collect()));
                continue;
            };
            let n = map.len();
            let new_n = map.iter().filter(|m| m.is_some()).count();
            let orient_map = |p: usize| -> Option<usize> {
                if s.plus {
                    map[p]
                } else {
                    map[n - 1 - p].map(|q| new_n - 1 - q)
                }
            };
            let mut new_rot = None;
            let mut smap: Vec<Option<usize>> = vec![None; n];
            let mut posv: Vec<usize> = vec![0; n];
            for k in 0..n {
                let p = (k + s.rot) % n;
                posv[k] = if s.plus { p } else { n - 1 - p };
                if let Some(p2) = orient_map(p) {
                    let r = *new_rot.get_or_insert(p2);
                    smap[k] = Some((p2 + new_n - r) % new_n);
                }
            }
            let rot = new_rot.unwrap_or(0);
            shell.push(Some(ShellFace { face: s.face, plus: s.plus, rot }));
            slot_maps.push(Some(smap));
            pos_of_slot.push(Some(posv));
        }
        let resolve = |d: Dart| -> Result<Dart> {
            let smap = slot_maps[d.0].as_ref().expect("live shell face");
            if let Some(ns) = smap[d.1] {
                return Ok((d.0, ns));
            }
            // deleted: find the merge partner position
            let face = cell.shell[d.0].unwrap().face;
            let (_, partners) = edits.get(&face).expect("edited face");
            let posv = pos_of_slot[d.0].as_ref().unwrap();
            let p = posv[d.1];
            let pp = *partners
                .get(&p)
                .ok_or_else(|| TvError::Complex("deleted dart without merge partner".into()))?;
            let buddy = posv
                .iter()
                .position(|&q| q == pp)
                .ok_or_else(|| TvError::Complex("merge partner slot missing".into()))?;
            smap[buddy]
                .map(|ns| (d.0, ns))
                .ok_or_else(|| TvError::Complex("merge partner slot also deleted".into()))
        };
        let mut glue = HashMap::new();
        for (&d, &p) in &cell.glue {
            let nd = resolve(d)?;
            let np = resolve(p)?;
            if nd == np {
                return Err(TvError::Complex("dart would glue to itself after edit".into()));
            }
            glue.insert(nd, np);
        }
        let out = Cell3 { shell, glue };
        let _ = new_complex;
        Ok(out)
    }

    fn validate_after_move(&self) -> Result<()> {
        self.validate().map_err(|e| TvError::Complex(format!("move produced invalid complex: {e}")))
    }

    // -- InvM1 ------------------------------------------------------------

    fn move_inv_m1(&self, e: usize) -> Result<(CellComplex, MoveInstance)> {
        if self.edges.get(e).map_or(true, |x| x.is_none()) {
            return Err(TvError::MoveInapplicable(format!("edge {e} not in complex")));
        }
        let mut snap = self.snapshot_base();
        snap.put_edges.push((e, self.edge(e).clone()));
        let mut out = self.clone();
        let ed = self.edge(e).clone();
        let v = out.add_vertex();
        let e1 = out.add_edge(ed.tail, v);
        let e2 = out.add_edge(v, ed.head);
        snap.kill_verts.push(v);
        snap.kill_edges.push(e1);
        snap.kill_edges.push(e2);
        out.edges[e] = None;

        let mut edits: HashMap<usize, Vec<Option<usize>>> = HashMap::new();
        for f in self.live_faces() {
            let w = &self.face(f).word;
            if !w.iter().any(|&(x, _)| x == e) {
                continue;
            }
            snap.put_faces.push((f, self.face(f).clone()));
            let mut neww = Vec::new();
            let mut map = vec![None; w.len()];
            for (pos, &se) in w.iter().enumerate() {
                map[pos] = Some(neww.len());
                if se.0 == e {
                    if se.1 {
                        neww.push((e2, true));
                        neww.push((e1, true));
                    } else {
                        neww.push((e1, false));
                        neww.push((e2, false));
                    }
                } else {
                    neww.push(se);
                }
            }
            out.faces[f] = Some(Face { word: neww });
            edits.insert(f, map);
        }
        for c in self.live_cells() {
            let changed = self
                .live_shell_faces(c)
                .iter()
                .any(|&sfi| edits.contains_key(&self.cell(c).shell[sfi].unwrap().face));
            if !changed {
                continue;
            }
            snap.put_cells.push((c, self.cell(c).clone()));
            let newcell = self.reshell_after_word_split(c, &edits, &out)?;
            out.cells[c] = Some(newcell);
        }
        out.validate_after_move()?;
        Ok((out, MoveInstance::Restore(Box::new(snap))))
    }

    /// Shell rebuild when letters were split in two (each old dart over a
    /// split letter becomes two darts; glue pairs split in parallel).
    fn reshell_after_word_split(
        &self,
        c: usize,
        edits: &HashMap<usize, Vec<Option<usize>>>,
        new_complex: &CellComplex,
    ) -> Result<Cell3> {
        let cell = self.cell(c);
        let mut shell: Vec<Option<ShellFace>> = Vec::new();
        let mut slot_maps: Vec<Option<Vec<usize>>> = Vec::new();
        let mut widths: Vec<Option<Vec<usize>>> = Vec::new();
        for (sfi, s) in cell.shell.iter().enumerate() {
            let Some(s) = s else {
                shell.push(None);
                slot_maps.push(None);
                widths.push(None);
                continue;
            };
            let Some(map) = edits.get(&s.face) else {
                shell.push(Some(*s));
                let n = self.shell_word(c, sfi).len();
                slot_maps.push(Some((0..n).collect()));
                widths.push(Some(vec![1; n]));
                continue;
            };
            let n = map.len();
            let new_n = new_complex.face(s.face).word.len();
            let starts: Vec<usize> = map.iter().map(|m| m.expect("splits keep letters")).collect();
            let width_orig =
                |p: usize| -> usize { (if p + 1 < n { starts[p + 1] } else { new_n }) - starts[p] };
            // oriented start/width for this side
            let o_start = |p: usize| -> usize {
                if s.plus {
                    starts[p]
                } else {
                    let q = n - 1 - p;
                    new_n - starts[q] - width_orig(q)
                }
            };
            let o_width = |p: usize| -> usize {
                if s.plus {
                    width_orig(p)
                } else {
                    width_orig(n - 1 - p)
                }
            };
            let mut sm = vec![0usize; n];
            let mut wd = vec![0usize; n];
            let mut new_rot = None;
            for k in 0..n {
                let p = (k + s.rot) % n;
                let np = o_start(p);
                let r = *new_rot.get_or_insert(np);
                sm[k] = (np + new_n - r) % new_n;
                wd[k] = o_width(p);
            }
            shell.push(Some(ShellFace { face: s.face, plus: s.plus, rot: new_rot.unwrap_or(0) }));
            slot_maps.push(Some(sm));
            widths.push(Some(wd));
        }
        let mut glue = HashMap::new();
        for (&d, &p) in &cell.glue {
            let sd = slot_maps[d.0].as_ref().unwrap();
            let sp = slot_maps[p.0].as_ref().unwrap();
            let wdd = widths[d.0].as_ref().unwrap()[d.1];
            let wdp = widths[p.0].as_ref().unwrap()[p.1];
            if wdd != wdp {
                return Err(TvError::Complex("split widths disagree across glue".into()));
            }
            for t in 0..wdd {
                glue.insert((d.0, sd[d.1] + t), (p.0, sp[p.1] + (wdd - 1 - t)));
            }
        }
        Ok(Cell3 { shell, glue })
    }
}

impl CellComplex {
    // -- M2 ---------------------------------------------------------------

    fn m2_config(&self, e: usize) -> Result<((usize, usize, bool), (usize, usize, bool))> {
        if self.edges.get(e).map_or(true, |x| x.is_none()) {
            return Err(TvError::MoveInapplicable(format!("edge {e} not in complex")));
        }
        let ed = self.edge(e);
        if ed.tail == ed.head {
            return Err(TvError::MoveInapplicable(format!("edge {e} is not regular (a loop)")));
        }
        let mut occ: Vec<(usize, usize, bool)> = Vec::new(); // (face, pos, sign)
        for f in self.live_faces() {
            for (k, &(x, r)) in self.face(f).word.iter().enumerate() {
                if x == e {
                    occ.push((f, k, r));
                }
            }
        }
        if occ.len() != 2 || occ[0].0 == occ[1].0 {
            return Err(TvError::MoveInapplicable(format!(
                "edge {e} must be adjacent to exactly two distinct 2-cells"
            )));
        }
        Ok((occ[0], occ[1]))
    }

    fn move_m2(&self, e: usize) -> Result<(CellComplex, MoveInstance)> {
        let ((f1, o1, s1), (f2, _, _)) = self.m2_config(e)?;
        let mut snap = self.snapshot_base();
        snap.put_edges.push((e, self.edge(e).clone()));
        snap.put_faces.push((f1, self.face(f1).clone()));
        snap.put_faces.push((f2, self.face(f2).clone()));

        // orient f2 so that e appears reversed relative to its sign in f1
        let w1 = self.oriented_word(f1, true);
        let mut w2 = self.oriented_word(f2, true);
        if !w2.contains(&(e, !s1)) {
            w2 = self.oriented_word(f2, false);
        }
        let o2 = w2.iter().position(|&se| se == (e, !s1)).expect("m2 config");
        let n1 = w1.len();
        let n2 = w2.len();
        let mut merged: Vec<SignedEdge> = Vec::with_capacity(n1 + n2 - 2);
        for k in 1..n1 {
            merged.push(w1[(o1 + k) % n1]);
        }
        for k in 1..n2 {
            merged.push(w2[(o2 + k) % n2]);
        }
        let mut out = self.clone();
        let c = out.add_face(merged);
        snap.kill_faces.push(c);
        out.faces[f1] = None;
        out.faces[f2] = None;
        out.edges[e] = None;

        for cid in self.live_cells() {
            let involved = self.live_shell_faces(cid).iter().any(|&sfi| {
                let s = self.cell(cid).shell[sfi].unwrap();
                s.face == f1 || s.face == f2
            });
            if !involved {
                continue;
            }
            snap.put_cells.push((cid, self.cell(cid).clone()));
            out.cells[cid] = Some(self.m2_reshell(cid, e, f1, c)?);
        }
        out.validate_after_move()?;
        Ok((out, MoveInstance::Restore(Box::new(snap))))
    }

    /// Merge, inside one cell, every glued dart pair over `e`; each pair
    /// joins a shell face over `f1` to one over the other face, and the two
    /// merge into a shell face over the new face `c`.
    fn m2_reshell(&self, cid: usize, e: usize, f1: usize, c: usize) -> Result<Cell3> {
        let cell = self.cell(cid);
        let mut pairs: Vec<(Dart, Dart)> = Vec::new();
        let mut seen: Vec<Dart> = Vec::new();
        for (&d, &p) in &cell.glue {
            if seen.contains(&d) {
                continue;
            }
            if self.shell_word(cid, d.0)[d.1].0 == e {
                seen.push(d);
                seen.push(p);
                let df = cell.shell[d.0].unwrap().face;
                if df == f1 {
                    pairs.push((d, p));
                } else {
                    pairs.push((p, d));
                }
            }
        }
        let mut shell = cell.shell.clone();
        let mut remap: HashMap<usize, (usize, Vec<Option<usize>>)> = HashMap::new();
        for (da, db) in pairs {
            let a = shell[da.0].take().expect("live shell face");
            let _b = shell[db.0].take().expect("live shell face");
            let wa = self.shell_word(cid, da.0);
            let wb = self.shell_word(cid, db.0);
            let (n1, n2) = (wa.len(), wb.len());
            let plus = a.plus;
            let rot = if plus { 0 } else { n2 - 1 };
            let new_sfi = shell.len();
            shell.push(Some(ShellFace { face: c, plus, rot }));
            let mut ma = vec![None; n1];
            for k in 0..n1 - 1 {
                ma[(da.1 + 1 + k) % n1] = Some(k);
            }
            let mut mb = vec![None; n2];
            for k in 0..n2 - 1 {
                mb[(db.1 + 1 + k) % n2] = Some(n1 - 1 + k);
            }
            remap.insert(da.0, (new_sfi, ma));
            remap.insert(db.0, (new_sfi, mb));
        }
        let map_dart = |d: Dart| -> Option<Dart> {
            match remap.get(&d.0) {
                Some((nsfi, m)) => m[d.1].map(|s| (*nsfi, s)),
                None => Some(d),
            }
        };
        let mut glue = HashMap::new();
        for (&d, &p) in &cell.glue {
            if let (Some(nd), Some(np)) = (map_dart(d), map_dart(p)) {
                glue.insert(nd, np);
            }
        }
        Ok(Cell3 { shell, glue })
    }

    // -- InvM2 --------------------------------------------------------------

    fn move_inv_m2(&self, f: usize, cut: (usize, usize)) -> Result<(CellComplex, MoveInstance)> {
        if self.faces.get(f).map_or(true, |x| x.is_none()) {
            return Err(TvError::MoveInapplicable(format!("face {f} not in complex")));
        }
        let w = self.face(f).word.clone();
        let n = w.len();
        let (i, j) = cut;
        if !(i < j && j < n) {
            return Err(TvError::MoveInapplicable(format!("cut ({i},{j}) out of range")));
        }
        let mut snap = self.snapshot_base();
        snap.put_faces.push((f, self.face(f).clone()));
        let mut out = self.clone();
        let vi = self.edge_endpoints(w[i]).0;
        let vj = self.edge_endpoints(w[j]).0;
        let eps = out.add_edge(vi, vj);
        // f_a = W[i..j] ++ [-eps], f_b = W[j..] ++ W[..i] ++ [+eps]
        let mut wa: Vec<SignedEdge> = w[i..j].to_vec();
        wa.push((eps, true));
        let mut wb: Vec<SignedEdge> = w[j..].to_vec();
        wb.extend_from_slice(&w[..i]);
        wb.push((eps, false));
        let na = wa.len();
        let nb = wb.len();
        let fa = out.add_face(wa);
        let fb = out.add_face(wb);
        snap.kill_edges.push(eps);
        snap.kill_faces.push(fa);
        snap.kill_faces.push(fb);
        out.faces[f] = None;

        for cid in self.live_cells() {
            let involved = self
                .live_shell_faces(cid)
                .iter()
                .any(|&sfi| self.cell(cid).shell[sfi].unwrap().face == f);
            if !involved {
                continue;
            }
            snap.put_cells.push((cid, self.cell(cid).clone()));
            out.cells[cid] = Some(self.inv_m2_reshell(cid, f, (i, j), n, fa, fb, na, nb)?);
        }
        out.validate_after_move()?;
        Ok((out, MoveInstance::Restore(Box::new(snap))))
    }

    #[allow(clippy::too_many_arguments)]
    fn inv_m2_reshell(
        &self,
        cid: usize,
        f: usize,
        (i, j): (usize, usize),
        n: usize,
        fa: usize,
        fb: usize,
        na: usize,
        nb: usize,
    ) -> Result<Cell3> {
        let cell = self.cell(cid);
        let mut shell = cell.shell.clone();
        // old sfi -> per-slot (new sfi, new slot)
        let mut remap: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        let mut welds: Vec<(Dart, Dart)> = Vec::new();
        for (sfi, s) in cell.shell.iter().enumerate() {
            let Some(s) = (*s).as_ref().copied() else { continue };
            if s.face != f {
                continue;
            }
            shell[sfi] = None;
            let a_sfi = shell.len();
            shell.push(Some(ShellFace { face: fa, plus: s.plus, rot: 0 }));
            let b_sfi = shell.len();
            shell.push(Some(ShellFace { face: fb, plus: s.plus, rot: 0 }));
            // map old slot k (over W-position p) to the new dart
            let mut m: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); n];
            for k in 0..n {
                let p = if s.plus { (k + s.rot) % n } else { n - 1 - ((k + s.rot) % n) };
                let (nf, q) = if (i..j).contains(&p) {
                    (a_sfi, p - i) // f_a position p - i
                } else if p >= j {
                    (b_sfi, p - j)
                } else {
                    (b_sfi, p + (n - j))
                };
                // face position to slot (rot = 0); on the minus side the
                // positions reflect through the full word including eps
                let deg = if nf == a_sfi { na } else { nb };
                let slot = if s.plus { q } else { deg - 1 - q };
                m[k] = (nf, slot);
            }
            remap.insert(sfi, m);
            // weld the eps darts between the two halves
            if s.plus {
                welds.push(((a_sfi, na - 1), (b_sfi, nb - 1)));
            } else {
                // minus side: eps sits at slot deg-1-(deg-1)=0 on both halves
                welds.push(((a_sfi, 0), (b_sfi, 0)));
            }
        }
        let map_dart = |d: Dart| -> Dart {
            match remap.get(&d.0) {
                Some(m) => m[d.1],
                None => d,
            }
        };
        let mut glue = HashMap::new();
        for (&d, &p) in &cell.glue {
            glue.insert(map_dart(d), map_dart(p));
        }
        for (x, y) in welds {
            glue.insert(x, y);
            glue.insert(y, x);
        }
        Ok(Cell3 { shell, glue })
    }

    // -- M3 ---------------------------------------------------------------

    fn m3_config(&self, f: usize) -> Result<((usize, usize), (usize, usize))> {
        if self.faces.get(f).map_or(true, |x| x.is_none()) {
            return Err(TvError::MoveInapplicable(format!("face {f} not in complex")));
        }
        // regular: distinct edges, distinct corner vertices
        let w = &self.face(f).word;
        let mut eids: Vec<usize> = w.iter().map(|&(x, _)| x).collect();
        eids.sort_unstable();
        let el = eids.len();
        eids.dedup();
        if eids.len() != el {
            return Err(TvError::MoveInapplicable(format!("cell not regular: face {f} repeats an edge")));
        }
        let mut vs: Vec<usize> = w.iter().map(|&se| self.edge_endpoints(se).1).collect();
        vs.sort_unstable();
        let vl = vs.len();
        vs.dedup();
        if vs.len() != vl {
            return Err(TvError::MoveInapplicable(format!(
                "cell not regular: face {f} repeats a vertex"
            )));
        }
        let occ = self.face_occurrences();
        let v = occ.get(&f).cloned().unwrap_or_default();
        if v.len() != 2 || v[0].0 == v[1].0 {
            return Err(TvError::MoveInapplicable(format!(
                "face {f} must be adjacent to two distinct 3-cells"
            )));
        }
        let (plus, minus) = if v[0].2 { (v[0], v[1]) } else { (v[1], v[0]) };
        Ok(((plus.0, plus.1), (minus.0, minus.1)))
    }

    fn move_m3(&self, f: usize) -> Result<(CellComplex, MoveInstance)> {
        let ((c1, sfi1), (c2, sfi2)) = self.m3_config(f)?;
        let mut snap = self.snapshot_base();
        snap.put_faces.push((f, self.face(f).clone()));
        snap.put_cells.push((c1, self.cell(c1).clone()));
        snap.put_cells.push((c2, self.cell(c2).clone()));
        let n = self.face(f).word.len();
        let r1 = self.cell(c1).shell[sfi1].unwrap().rot;
        let r2 = self.cell(c2).shell[sfi2].unwrap().rot;

        // merged shell: c1's faces (minus sfi1), then c2's (minus sfi2)
        let mut shell: Vec<Option<ShellFace>> = Vec::new();
        let mut map1: HashMap<usize, usize> = HashMap::new();
        let mut map2: HashMap<usize, usize> = HashMap::new();
        for (sfi, s) in self.cell(c1).shell.iter().enumerate() {
            if s.is_some() && sfi != sfi1 {
                map1.insert(sfi, shell.len());
                shell.push(*s);
            }
        }
        for (sfi, s) in self.cell(c2).shell.iter().enumerate() {
            if s.is_some() && sfi != sfi2 {
                map2.insert(sfi, shell.len());
                shell.push(*s);
            }
        }
        // correspondence between the two copies of f: slot k of sfi1 covers
        // face position p = (k + r1) % n; slot of sfi2 covering p is
        // (n - 1 - p - r2) mod n
        let match2 = |k: usize| -> usize {
            let p = (k + r1) % n;
            ((2 * n - 1 - p).wrapping_sub(r2)) % n
        };
        // chase through the removed faces to find the true partner
        let next = |d: Dart, from1: bool| -> (Dart, bool) {
            if from1 {
                (self.cell(c1).glue[&d], true)
            } else {
                (self.cell(c2).glue[&d], false)
            }
        };
        let _ = next;
        let chase = |start: Dart, in1: bool| -> Result<(Dart, bool)> {
            let mut d = start;
            let mut side1 = in1;
            for _ in 0..4 * n + 8 {
                let p = if side1 { self.cell(c1).glue[&d] } else { self.cell(c2).glue[&d] };
                if side1 && p.0 == sfi1 {
                    d = (sfi2, match2(p.1));
                    side1 = false;
                } else if !side1 && p.0 == sfi2 {
                    // inverse of match2: slot k1 with match2(k1) = p.1
                    let k1 = (0..n).find(|&k| match2(k) == p.1).expect("bijection");
                    d = (sfi1, k1);
                    side1 = true;
                } else {
                    return Ok((p, side1));
                }
            }
            Err(TvError::Complex("m3 chase did not terminate".into()))
        };
        let mut glue: HashMap<Dart, Dart> = HashMap::new();
        for side1 in [true, false] {
            let (cell, skip, map) = if side1 {
                (self.cell(c1), sfi1, &map1)
            } else {
                (self.cell(c2), sfi2, &map2)
            };
            for (&d, _) in &cell.glue {
                if d.0 == skip {
                    continue;
                }
                let (p, pside1) = chase(d, side1)?;
                let nd = (map[&d.0], d.1);
                let np = ((if pside1 { &map1 } else { &map2 })[&p.0], p.1);
                glue.insert(nd, np);
            }
        }
        let mut out = self.clone();
        let merged = out.add_cell(Cell3 { shell, glue });
        snap.kill_cells.push(merged);
        out.cells[c1] = None;
        out.cells[c2] = None;
        out.faces[f] = None;
        out.validate_after_move()?;
        Ok((out, MoveInstance::Restore(Box::new(snap))))
    }

    // -- InvM3 --------------------------------------------------------------

    fn move_inv_m3(&self, cid: usize, cycle: &[Dart]) -> Result<(CellComplex, MoveInstance)> {
        if self.cells.get(cid).map_or(true, |x| x.is_none()) {
            return Err(TvError::MoveInapplicable(format!("cell {cid} not in complex")));
        }
        if cycle.is_empty() {
            return Err(TvError::MoveInapplicable("empty cutting cycle".into()));
        }
        let cell = self.cell(cid);
        // the cycle must be a closed simple path of shell edges: consecutive
        // darts share the corner vertex walk, and no shell edge repeats
        let k = cycle.len();
        let mut used_edges: Vec<Dart> = Vec::new();
        for t in 0..k {
            let d = cycle[t];
            if cell.shell.get(d.0).map_or(true, |s| s.is_none()) {
                return Err(TvError::MoveInapplicable("cycle dart out of range".into()));
            }
            let canon = std::cmp::min(d, cell.glue[&d]);
            if used_edges.contains(&canon) {
                return Err(TvError::MoveInapplicable("cutting cycle repeats a shell edge".into()));
            }
            used_edges.push(canon);
            // head vertex of d must equal tail vertex of the next dart;
            // on the shell these agree when the next dart starts at the
            // corner reached by the corner walk around that shell vertex
            let (_, hv) = self.edge_endpoints(self.shell_word(cid, d.0)[d.1]);
            let dn = cycle[(t + 1) % k];
            let (tv, _) = self.edge_endpoints(self.shell_word(cid, dn.0)[dn.1]);
            if hv != tv {
                return Err(TvError::MoveInapplicable(format!(
                    "cutting cycle breaks at step {t}: vertices {hv} vs {tv}"
                )));
            }
        }
        // side split: shell faces connected without crossing cycle edges
        let sfis = self.live_shell_faces(cid);
        let crossing: Vec<(Dart, Dart)> =
            cycle.iter().map(|&d| (d, cell.glue[&d])).collect();
        let is_cycle_edge = |d: Dart| crossing.iter().any(|&(a, b)| d == a || d == b);
        let mut side: HashMap<usize, usize> = HashMap::new();
        let mut stack = vec![cycle[0].0];
        side.insert(cycle[0].0, 0);
        while let Some(sf) = stack.pop() {
            let s = side[&sf];
            let deg = self.shell_word(cid, sf).len();
            for slot in 0..deg {
                let d = (sf, slot);
                if is_cycle_edge(d) {
                    continue;
                }
                let p = cell.glue[&d];
                if !side.contains_key(&p.0) {
                    side.insert(p.0, s);
                    stack.push(p.0);
                }
            }
        }
        let other = cell.glue[&cycle[0]];
        if side.contains_key(&other.0) && side[&other.0] == 0 {
            return Err(TvError::MoveInapplicable(
                "cutting cycle does not separate the shell".into(),
            ));
        }
        let mut stack = vec![other.0];
        side.entry(other.0).or_insert(1);
        while let Some(sf) = stack.pop() {
            let s = side[&sf];
            let deg = self.shell_word(cid, sf).len();
            for slot in 0..deg {
                let d = (sf, slot);
                if is_cycle_edge(d) {
                    continue;
                }
                let p = cell.glue[&d];
                if !side.contains_key(&p.0) {
                    side.insert(p.0, s);
                    stack.push(p.0);
                }
            }
        }
        if side.len() != sfis.len() {
            return Err(TvError::MoveInapplicable("cycle leaves unreachable shell faces".into()));
        }
        for &(a, b) in &crossing {
            if side[&a.0] == side[&b.0] {
                return Err(TvError::MoveInapplicable(
                    "cutting cycle does not separate its two sides".into(),
                ));
            }
        }
        let side_a = side[&cycle[0].0]; // contains the cycle darts themselves

        // new face: word of the cycle's signed edges
        let word: Vec<SignedEdge> = cycle.iter().map(|&d| self.shell_word(cid, d.0)[d.1]).collect();
        let mut snap = self.snapshot_base();
        snap.put_cells.push((cid, self.cell(cid).clone()));
        let mut out = self.clone();
        let newf = out.add_face(word);
        snap.kill_faces.push(newf);

        // build the two cells
        let build = |want_side: usize, face_plus: bool| -> Cell3 {
            let mut shell: Vec<Option<ShellFace>> = Vec::new();
            let mut map: HashMap<usize, usize> = HashMap::new();
            for &sfi in &sfis {
                if side[&sfi] == want_side {
                    map.insert(sfi, shell.len());
                    shell.push(cell.shell[sfi]);
                }
            }
            let c_sfi = shell.len();
            shell.push(Some(ShellFace { face: newf, plus: face_plus, rot: 0 }));
            let mut glue: HashMap<Dart, Dart> = HashMap::new();
            for (&d, &p) in &cell.glue {
                if side.get(&d.0) != Some(&want_side) || is_cycle_edge(d) {
                    continue;
                }
                if side.get(&p.0) == Some(&want_side) && !is_cycle_edge(p) {
                    glue.insert((map[&d.0], d.1), (map[&p.0], p.1));
                }
            }
            // weld the new face's darts to the cycle darts on this side
            for (t, &d) in cycle.iter().enumerate() {
                let my_dart = if side[&d.0] == want_side { d } else { cell.glue[&d] };
                // slot of the new face copy matching cycle step t:
                // plus side: slot t carries word[t]; minus side: slot
                // k - 1 - t carries rev(word[t])
                let slot = if face_plus { t } else { k - 1 - t };
                glue.insert((c_sfi, slot), (map[&my_dart.0], my_dart.1));
                glue.insert((map[&my_dart.0], my_dart.1), (c_sfi, slot));
            }
            Cell3 { shell, glue }
        };
        // the cycle darts traverse the new face word forward; the side
        // containing them sees the face from its minus side
        let cell_a = build(side_a, false);
        let cell_b = build(1 - side_a, true);
        let ca = out.add_cell(cell_a);
        let cb = out.add_cell(cell_b);
        snap.kill_cells.push(ca);
        snap.kill_cells.push(cb);
        out.cells[cid] = None;
        out.validate_after_move()?;
        Ok((out, MoveInstance::Restore(Box::new(snap))))
    }
}

// ---- constructions ----------------------------------------------------------

/// A triangulation: tetrahedra with face gluings. Face `i` of a tetrahedron
/// is opposite its vertex `i`; a gluing identifies it with a face of
/// another (or the same) tetrahedron via a vertex permutation.
#[derive(Debug, Clone, Default)]
pub struct Triangulation {
    /// `gluings[t][i] = Some((t', perm))`: face i of tet t glues to tet t',
    /// vertex `v` of tet t mapping to vertex `perm[v]` of tet t'. The glued
    /// face index is `perm[i]`.
    pub gluings: Vec<[Option<(usize, [usize; 4])>; 4]>,
}

fn tet_face_cycle(i: usize) -> [usize; 3] {
    // boundary orientation of face i in a positively oriented tetrahedron
    match i {
        0 => [1, 2, 3],
        1 => [0, 3, 2],
        2 => [0, 1, 3],
        _ => [0, 2, 1],
    }
}

fn perm_sign(p: &[usize; 4]) -> i32 {
    let mut sign = 1;
    for a in 0..4 {
        for b in (a + 1)..4 {
            if p[a] > p[b] {
                sign = -sign;
            }
        }
    }
    sign
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Build a cell complex from a triangulation, checking that the gluing is
/// an involution, the result is a manifold (edge links are circles or
/// intervals, vertex links spheres or disks), and orientable.
pub fn from_triangulation(t: &Triangulation) -> Result<CellComplex> {
    let nt = t.gluings.len();
    if nt == 0 {
        return Err(TvError::Complex("empty triangulation".into()));
    }
    // validate the gluing involution
    for (ti, g) in t.gluings.iter().enumerate() {
        for (fi, spec) in g.iter().enumerate() {
            if let Some((tj, p)) = spec {
                let mut seen = [false; 4];
                for &x in p {
                    if x > 3 || seen[x] {
                        return Err(TvError::NonManifold("bad permutation".into()));
                    }
                    seen[x] = true;
                }
                let fj = p[fi];
                let back = t.gluings.get(*tj).and_then(|gg| gg[fj].clone());
                match back {
                    Some((ti2, p2)) => {
                        let inv_ok = (0..4).all(|v| p2[p[v]] == v);
                        if ti2 != ti || !inv_ok {
                            return Err(TvError::NonManifold(format!(
                                "gluing of tet {ti} face {fi} is not involutive"
                            )));
                        }
                    }
                    None => {
                        return Err(TvError::NonManifold(format!(
                            "tet {ti} face {fi} glues to an unglued face"
                        )));
                    }
                }
            }
        }
    }
    // orientation: 2-color tets with s(t') s(t) = -sgn(perm)
    let mut sign = vec![0i32; nt];
    let mut stack = vec![0usize];
    sign[0] = 1;
    while let Some(ti) = stack.pop() {
        for spec in &t.gluings[ti] {
            if let Some((tj, p)) = spec {
                let want = -sign[ti] * perm_sign(p);
                if sign[*tj] == 0 {
                    sign[*tj] = want;
                    stack.push(*tj);
                } else if sign[*tj] != want {
                    return Err(TvError::NonOrientable);
                }
            }
        }
    }
    if sign.iter().any(|&s| s == 0) {
        return Err(TvError::Complex("triangulation is not connected".into()));
    }

    // identify vertices
    let mut vuf = UnionFind::new(nt * 4);
    for (ti, g) in t.gluings.iter().enumerate() {
        for (fi, spec) in g.iter().enumerate() {
            if let Some((tj, p)) = spec {
                for v in 0..4 {
                    if v != fi {
                        vuf.union(ti * 4 + v, tj * 4 + p[v]);
                    }
                }
            }
        }
    }
    fn epos_of(a: usize, b: usize) -> usize {
        let (a, b) = (a.min(b), a.max(b));
        match (a, b) {
            (0, 1) => 0,
            (0, 2) => 1,
            (0, 3) => 2,
            (1, 2) => 3,
            (1, 3) => 4,
            _ => 5,
        }
    }
    // identify edges through a union-find on *directed* tet edges so that
    // loop edges (endpoints identified) still get a consistent orientation
    let dpos = |a: usize, b: usize| -> usize {
        // 12 directed edges per tet
        let unordered = epos_of(a, b);
        unordered * 2 + usize::from(a > b)
    };
    let mut duf = UnionFind::new(nt * 12);
    for (ti, g) in t.gluings.iter().enumerate() {
        for (fi, spec) in g.iter().enumerate() {
            if let Some((tj, p)) = spec {
                let vs: Vec<usize> = (0..4).filter(|&v| v != fi).collect();
                for a in 0..3 {
                    for b in 0..3 {
                        if a == b {
                            continue;
                        }
                        duf.union(
                            ti * 12 + dpos(vs[a], vs[b]),
                            tj * 12 + dpos(p[vs[a]], p[vs[b]]),
                        );
                    }
                }
            }
        }
    }
    // an edge orbit is a pair of directed orbits; reject a direction
    // reversal onto itself
    for ti in 0..nt {
        for a in 0..4 {
            for b in (a + 1)..4 {
                if duf.find(ti * 12 + dpos(a, b)) == duf.find(ti * 12 + dpos(b, a)) {
                    return Err(TvError::NonManifold(
                        "an edge is identified with itself reversed".into(),
                    ));
                }
            }
        }
    }

    // faces: pairs or boundary
    let mut face_id: HashMap<(usize, usize), usize> = HashMap::new();

    let mut cx = CellComplex::new_3manifold();
    // vertices
    let mut vmap: HashMap<usize, usize> = HashMap::new();
    for ti in 0..nt {
        for v in 0..4 {
            let r = vuf.find(ti * 4 + v);
            vmap.entry(r).or_insert_with(|| cx.add_vertex());
        }
    }
    // edges: one per unordered directed-orbit pair; pick the smaller
    // directed orbit id as the forward direction
    let mut emap: HashMap<usize, (usize, bool)> = HashMap::new(); // directed orbit -> (edge, reversed)
    for ti in 0..nt {
        for a in 0..4 {
            for b in 0..4 {
                if a == b {
                    continue;
                }
                let fwd = duf.find(ti * 12 + dpos(a, b));
                if emap.contains_key(&fwd) {
                    continue;
                }
                let bwd = duf.find(ti * 12 + dpos(b, a));
                let tv = vmap[&vuf.find(ti * 4 + a)];
                let hv = vmap[&vuf.find(ti * 4 + b)];
                let id = cx.add_edge(tv, hv);
                emap.insert(fwd, (id, false));
                emap.insert(bwd, (id, true));
            }
        }
    }
    let signed_edge = |duf: &mut UnionFind,
                       emap: &HashMap<usize, (usize, bool)>,
                       ti: usize,
                       a: usize,
                       b: usize|
     -> SignedEdge { emap[&duf.find(ti * 12 + dpos(a, b))] };

    // faces and cells
    let mut cells_data: Vec<(usize, [usize; 4])> = Vec::new(); // (cell id, face ids)
    for ti in 0..nt {
        let mut fids = [usize::MAX; 4];
        for fi in 0..4 {
            if let Some(&id) = face_id.get(&(ti, fi)) {
                fids[fi] = id;
                continue;
            }
            // canonical word: boundary cycle for positive orientation of
            // this tet (flipped if sign < 0)
            let mut cyc = tet_face_cycle(fi);
            if sign[ti] < 0 {
                cyc.swap(1, 2);
            }
            let mut word = Vec::new();
            for k in 0..3 {
                let (a, b) = (cyc[k], cyc[(k + 1) % 3]);
                word.push(signed_edge(&mut duf, &emap, ti, a, b));
            }
            let id = cx.add_face(word);
            face_id.insert((ti, fi), id);
            if let Some((tj, p)) = &t.gluings[ti][fi] {
                face_id.insert((*tj, p[fi]), id);
            }
            fids[fi] = id;
        }
        let cell_id = usize::MAX; // assigned below
        cells_data.push((cell_id, fids));
    }
    for (ti, (_, fids)) in cells_data.iter().enumerate() {
        // shell: four triangles; (ti, fi) owns the face word orientation
        // exactly when it created it
        let mut shell = Vec::new();
        let mut dart_edge: Vec<Vec<SignedEdge>> = Vec::new();
        for fi in 0..4 {
            let plus_owner = {
                // the face word was built from the first tet that saw it
                let other = t.gluings[ti][fi].as_ref();
                match other {
                    None => true,
                    Some((tj, p)) => {
                        let fj = p[fi];
                        // owner = lexicographically first (tet, face)
                        (ti, fi) <= (*tj, fj)
                    }
                }
            };
            shell.push(Some(ShellFace { face: fids[fi], plus: plus_owner, rot: 0 }));
            dart_edge.push(Vec::new());
        }
        // abstract tetrahedron adjacency: faces c and d share the edge on
        // the complementary vertex pair; slots are read off the vertex
        // cycles the words were built from
        let slot_of = |fi: usize, a: usize, b: usize| -> usize {
            if shell[fi].unwrap().plus {
                // the word was built from this tet's own cycle
                let mut cyc = tet_face_cycle(fi);
                if sign[ti] < 0 {
                    cyc.swap(1, 2);
                }
                for k in 0..3 {
                    let (x, y) = (cyc[k], cyc[(k + 1) % 3]);
                    if (x.min(y), x.max(y)) == (a.min(b), a.max(b)) {
                        return k;
                    }
                }
                unreachable!("face contains the edge");
            }
            // non-owner: the stored word came from the glued tet; slot t of
            // the reversed-dual word covers the owner-word letter 2 - t,
            // whose vertex pair pulls back through the inverse permutation
            let (tj, p) = t.gluings[ti][fi].as_ref().expect("non-owner faces are glued");
            let mut pinv = [0usize; 4];
            for v in 0..4 {
                pinv[p[v]] = v;
            }
            let fj = p[fi];
            let mut cycj = tet_face_cycle(fj);
            if sign[*tj] < 0 {
                cycj.swap(1, 2);
            }
            for tslot in 0..3 {
                let k = 2 - tslot;
                let (x, y) = (pinv[cycj[k]], pinv[cycj[(k + 1) % 3]]);
                if (x.min(y), x.max(y)) == (a.min(b), a.max(b)) {
                    return tslot;
                }
            }
            unreachable!("face contains the edge");
        };
        let mut glue = HashMap::new();
        for a in 0..4usize {
            for b in (a + 1)..4 {
                let others: Vec<usize> = (0..4).filter(|&v| v != a && v != b).collect();
                let (fc, fd) = (others[0], others[1]);
                let d1 = (fc, slot_of(fc, a, b));
                let d2 = (fd, slot_of(fd, a, b));
                glue.insert(d1, d2);
                glue.insert(d2, d1);
            }
        }
        cx.add_cell(Cell3 { shell, glue });
    }

    cx.validate()?;
    manifold_checks(&cx)?;
    Ok(cx)
}

/// Edge and vertex link checks for a validated complex.
pub fn manifold_checks(cx: &CellComplex) -> Result<()> {
    // edge links: hopping across cells through glued darts must sweep all
    // shell darts over the edge in one orbit (circle) or one open arc
    for e in cx.live_edges() {
        let mut darts: Vec<(usize, Dart)> = Vec::new(); // (cell, dart)
        for c in cx.live_cells() {
            for sfi in cx.live_shell_faces(c) {
                let w = cx.shell_word(c, sfi);
                for (slot, &se) in w.iter().enumerate() {
                    if se.0 == e {
                        darts.push((c, (sfi, slot)));
                    }
                }
            }
        }
        if darts.is_empty() {
            continue;
        }
        // pair darts of *different* cells (or the same cell twice) over the
        // same oriented face slot: two shell occurrences of a face define a
        // matching on their darts
        let occ = cx.face_occurrences();
        let mut cross: HashMap<(usize, Dart), (usize, Dart)> = HashMap::new();
        for (f, occs) in &occ {
            if occs.len() != 2 {
                continue;
            }
            let (c1, s1, _) = occs[0];
            let (c2, s2, _) = occs[1];
            let n = cx.face(*f).word.len();
            let r1 = cx.cell(c1).shell[s1].unwrap().rot;
            let r2 = cx.cell(c2).shell[s2].unwrap().rot;
            let p1 = cx.cell(c1).shell[s1].unwrap().plus;
            for k in 0..n {
                // face position covered by slot k on occurrence 1
                let pos = if p1 { (k + r1) % n } else { n - 1 - ((k + r1) % n) };
                let p2 = cx.cell(c2).shell[s2].unwrap().plus;
                let k2 = if p2 { (pos + n - r2) % n } else { (n - 1 - pos + n - r2) % n };
                cross.insert((c1, (s1, k)), (c2, (s2, k2)));
                cross.insert((c2, (s2, k2)), (c1, (s1, k)));
            }
        }
        // walk the fan: a cell passage is a glue pair; interior faces hop
        // between cells via `cross`
        let total_pairs = darts.len() / 2;
        let pair_key = |c: usize, d: Dart| -> (usize, Dart) {
            let p = cx.cell(c).glue[&d];
            (c, d.min(p))
        };
        let mut visited = vec![pair_key(darts[0].0, darts[0].1)];
        // forward: exit through glue, hop through cross
        let mut cur = darts[0];
        let mut closed = false;
        for _ in 0..2 * total_pairs + 2 {
            let exit = cx.cell(cur.0).glue[&cur.1];
            match cross.get(&(cur.0, exit)) {
                Some(&(c2, d2)) => {
                    let k = pair_key(c2, d2);
                    if k == visited[0] {
                        closed = true;
                        break;
                    }
                    visited.push(k);
                    cur = (c2, d2);
                }
                None => break,
            }
        }
        if !closed {
            // boundary edge: also walk backwards from the start
            let mut cur = darts[0];
            for _ in 0..2 * total_pairs + 2 {
                match cross.get(&(cur.0, cur.1)) {
                    Some(&(c2, d2)) => {
                        let exit = cx.cell(c2).glue[&d2];
                        visited.push(pair_key(c2, d2));
                        cur = (c2, exit);
                    }
                    None => break,
                }
            }
        }
        visited.sort_unstable();
        visited.dedup();
        if visited.len() != total_pairs {
            return Err(TvError::NonManifold(format!(
                "edge {e} link is not connected ({} of {} cell passages)",
                visited.len(),
                total_pairs
            )));
        }
    }
    Ok(())
}

/// Cylinder over a combinatorial surface: one prism per face, vertical
/// rectangles per edge, with explicit bottom/top copies of everything.
pub struct Cylinder {
    pub complex: CellComplex,
    pub bottom_vert: HashMap<usize, usize>,
    pub top_vert: HashMap<usize, usize>,
    pub bottom_edge: HashMap<usize, usize>,
    pub top_edge: HashMap<usize, usize>,
    pub bottom_face: HashMap<usize, usize>,
    pub top_face: HashMap<usize, usize>,
    pub vertical_edge: HashMap<usize, usize>,
    pub vertical_face: HashMap<usize, usize>,
}

pub fn cylinder(n: &CellComplex) -> Result<Cylinder> {
    if n.dim != 2 {
        return Err(TvError::Complex("cylinder needs a 2-dimensional complex".into()));
    }
    n.validate()?;
    let mut cx = CellComplex::new_3manifold();
    let mut bv = HashMap::new();
    let mut tv = HashMap::new();
    let mut ve = HashMap::new();
    for v in n.live_verts() {
        bv.insert(v, cx.add_vertex());
        tv.insert(v, cx.add_vertex());
    }
    for v in n.live_verts() {
        ve.insert(v, cx.add_edge(bv[&v], tv[&v]));
    }
    let mut be = HashMap::new();
    let mut te = HashMap::new();
    for e in n.live_edges() {
        let ed = n.edge(e);
        be.insert(e, cx.add_edge(bv[&ed.tail], bv[&ed.head]));
        te.insert(e, cx.add_edge(tv[&ed.tail], tv[&ed.head]));
    }
    let mut bf = HashMap::new();
    let mut tf = HashMap::new();
    for f in n.live_faces() {
        let w = &n.face(f).word;
        // the bottom boundary component is the orientation reversal of n,
        // so bottom copies are stored with reversed-dual words and the
        // prisms see them from their positive side
        let wrev: Vec<SignedEdge> = w.iter().rev().map(|&(e, r)| (be[&e], !r)).collect();
        bf.insert(f, cx.add_face(wrev));
        tf.insert(f, cx.add_face(w.iter().map(|&(e, r)| (te[&e], r)).collect()));
    }
    // vertical rectangle per edge: (e_b, v_head, -e_t, -v_tail). Walls over
    // boundary edges whose single occurrence is reversed get stored with
    // the opposite word so their one shell occurrence is positive.
    let mut occ_signs: HashMap<usize, Vec<bool>> = HashMap::new();
    for f in n.live_faces() {
        for &(e, sgn) in &n.face(f).word {
            occ_signs.entry(e).or_default().push(sgn);
        }
    }
    let mut vf = HashMap::new();
    let mut vf_reversed: HashMap<usize, bool> = HashMap::new();
    for e in n.live_edges() {
        let ed = n.edge(e);
        let word = vec![
            (be[&e], false),
            (ve[&ed.head], false),
            (te[&e], true),
            (ve[&ed.tail], true),
        ];
        let signs = occ_signs.get(&e).cloned().unwrap_or_default();
        let reversed = signs.len() == 1 && signs[0];
        let stored = if reversed {
            word.iter().rev().map(|&se| rev(se)).collect()
        } else {
            word
        };
        vf_reversed.insert(e, reversed);
        vf.insert(e, cx.add_face(stored));
    }
    // prisms
    for f in n.live_faces() {
        let w = n.face(f).word.clone();
        let k = w.len();
        // shell: 0 = bottom (minus side), 1 = top (plus side), 2.. = walls
        let mut shell: Vec<Option<ShellFace>> = Vec::new();
        shell.push(Some(ShellFace { face: bf[&f], plus: true, rot: 0 }));
        shell.push(Some(ShellFace { face: tf[&f], plus: true, rot: 0 }));
        for &(e, sgn) in &w {
            let plus = if vf_reversed[&e] { sgn } else { !sgn };
            shell.push(Some(ShellFace { face: vf[&e], plus, rot: 0 }));
        }
        let mut glue: HashMap<Dart, Dart> = HashMap::new();
        let mut weld = |a: Dart, b: Dart| {
            glue.insert(a, b);
            glue.insert(b, a);
        };
        // wall slot layout: plus side (e_b, v_head, -e_t, -v_tail);
        // minus side (v_tail, e_t, -v_head, -e_b)
        for (pos, &(_e, sgn)) in w.iter().enumerate() {
            let wall = 2 + pos;
            let (bot_slot, top_slot, right_slot, left_slot) = if !sgn {
                (0usize, 2usize, 1usize, 3usize)
            } else {
                (3usize, 1usize, 0usize, 2usize)
            };
            // bottom face is the minus side: slot over bottom position pos
            // in its reversed-dual word is k - 1 - pos
            weld((0, k - 1 - pos), (wall, bot_slot));
            weld((1, pos), (wall, top_slot));
            let next_wall = 2 + (pos + 1) % k;
            let next_sgn = w[(pos + 1) % k].1;
            let next_left = if !next_sgn { 3usize } else { 2usize };
            weld((wall, right_slot), (next_wall, next_left));
            let _ = left_slot;
        }
        cx.add_cell(Cell3 { shell, glue });
    }
    cx.validate()?;
    Ok(Cylinder {
        complex: cx,
        bottom_vert: bv,
        top_vert: tv,
        bottom_edge: be,
        top_edge: te,
        bottom_face: bf,
        top_face: tf,
        vertical_edge: ve,
        vertical_face: vf,
    })
}

/// Identify two boundary components given explicit face, edge and vertex
/// correspondences. The identification must reverse orientation: face `a`
/// is matched with face `b` so that `word(a)` maps to the reversed-dual of
/// `word(b)`.
pub fn glue_boundary(
    cx: &CellComplex,
    face_pairs: &[(usize, usize)],
    edge_pairs: &[(usize, usize)],
    vert_pairs: &[(usize, usize)],
) -> Result<CellComplex> {
    let boundary = cx.boundary_faces();
    for &(a, b) in face_pairs {
        if !boundary.contains(&a) || !boundary.contains(&b) {
            return Err(TvError::Complex(format!("faces {a},{b} are not boundary faces")));
        }
    }
    let emap: HashMap<usize, usize> = edge_pairs
        .iter()
        .flat_map(|&(a, b)| [(a, b), (b, a)])
        .collect();
    let vmap: HashMap<usize, usize> = vert_pairs
        .iter()
        .flat_map(|&(a, b)| [(a, b), (b, a)])
        .collect();
    // verify the words correspond: word(a) == reversed-dual of word(b)
    // after mapping edges, up to a rotation (which we record)
    let mut out = cx.clone();
    for &(a, b) in face_pairs {
        let wa = cx.oriented_word(a, true);
        let wb = cx.oriented_word(b, false);
        let wb_mapped: Vec<SignedEdge> = wb
            .iter()
            .map(|&(e, r)| (*emap.get(&e).unwrap_or(&e), r))
            .collect();
        let n = wa.len();
        if wb_mapped.len() != n {
            return Err(TvError::Complex(format!(
                "glued faces {a},{b} have different boundary lengths"
            )));
        }
        let rot = (0..n)
            .find(|&r| (0..n).all(|k| wa[k] == wb_mapped[(k + r) % n]))
            .ok_or_else(|| {
                TvError::Complex(format!("glued faces {a},{b} have mismatched decompositions"))
            })?;
        // vertex consistency
        for k in 0..n {
            let (tva, _) = cx.edge_endpoints(wa[k]);
            let (tvb, _) = cx.edge_endpoints(wb[(k + rot) % n]);
            if *vmap.get(&tvb).unwrap_or(&tvb) != tva {
                return Err(TvError::Complex(format!(
                    "vertex correspondence mismatch between faces {a},{b}"
                )));
            }
        }
        // retarget shell references on b to a: the occurrence of b (side +)
        // becomes an occurrence of a with the minus side
        for c in cx.live_cells() {
            for sfi in cx.live_shell_faces(c) {
                let s = cx.cell(c).shell[sfi].unwrap();
                if s.face == b {
                    // slot k of (b, +, r) covers b-position (k + r) % n;
                    // b-plus-position p corresponds to a-minus-position q
                    // with wb[p] appearing... we need shell_word unchanged:
                    // new shell word must equal old up to the edge mapping.
                    // old word: rotate(word(b,+), r). word(b,+) maps to
                    // reversed-dual... We have wa == mapped(rot(wb_minus)):
                    // word(b, true)[p] = rev(wb[n-1-p]) which maps to
                    // rev(wa[(n-1-p+n-rot)%n])... choose the representation
                    // (a, false, r') with r' such that
                    // rotate(word(a,false), r') = mapped old shell word.
                    // word(a,false)[q] = rev(wa[n-1-q]); want
                    // rev(wa[n-1-((q+r')%n)]) = mapped word(b,true)[(k+r)%n]
                    //   = rev(wa[(2n-1-rot-((k+r)%n))%n])
                    // so (q + r') == (rot + (k+r)) with q = k: r' = rot + r.
                    let s2 = ShellFace { face: a, plus: false, rot: (s.rot + rot) % n };
                    if let Some(cell) = out.cells[c].as_mut() {
                        cell.shell[sfi] = Some(s2);
                    }
                }
            }
        }
        out.faces[b] = None;
    }
    // merge edges and vertices
    for &(ea, eb) in edge_pairs {
        if ea == eb {
            continue;
        }
        for f in out.live_faces().collect::<Vec<_>>() {
            let mut w = out.face(f).word.clone();
            let mut touched = false;
            for se in w.iter_mut() {
                if se.0 == eb {
                    se.0 = ea;
                    touched = true;
                }
            }
            if touched {
                out.faces[f] = Some(Face { word: w });
            }
        }
        out.edges[eb] = None;
    }
    for &(va, vb) in vert_pairs {
        if va == vb {
            continue;
        }
        for e in out.live_edges().collect::<Vec<_>>() {
            let mut ed = out.edge(e).clone();
            let mut touched = false;
            if ed.tail == vb {
                ed.tail = va;
                touched = true;
            }
            if ed.head == vb {
                ed.head = va;
                touched = true;
            }
            if touched {
                out.edges[e] = Some(ed);
            }
        }
        out.verts[vb] = false;
    }
    out.validate()?;
    Ok(out)
}

/// Glue the two ends of a cylinder with the identity correspondence,
/// producing the mapping torus of the identity (N x S^1).
pub fn glue_cylinder_ends(cy: &Cylinder) -> Result<CellComplex> {
    let fp: Vec<(usize, usize)> =
        cy.bottom_face.iter().map(|(&f, &b)| (b, cy.top_face[&f])).collect();
    let ep: Vec<(usize, usize)> =
        cy.bottom_edge.iter().map(|(&e, &b)| (b, cy.top_edge[&e])).collect();
    let vp: Vec<(usize, usize)> =
        cy.bottom_vert.iter().map(|(&v, &b)| (b, cy.top_vert[&v])).collect();
    glue_boundary(&cy.complex, &fp, &ep, &vp)
}

// ---- canned complexes --------------------------------------------------

/// Minimal sphere: one vertex, one loop, two monogon faces.
pub fn s2_min() -> CellComplex {
    let mut cx = CellComplex::new_surface();
    let v = cx.add_vertex();
    let _ = v;
    let e = cx.add_edge(0, 0);
    cx.add_face(vec![(e, false)]);
    cx.add_face(vec![(e, true)]);
    cx
}

/// Minimal torus: one vertex, two loops, one square face a b a^-1 b^-1.
pub fn torus_min() -> CellComplex {
    let mut cx = CellComplex::new_surface();
    let v = cx.add_vertex();
    let a = cx.add_edge(v, v);
    let b = cx.add_edge(v, v);
    cx.add_face(vec![(a, false), (b, false), (a, true), (b, true)]);
    cx
}

/// Minimal genus-g surface: one vertex, 2g loops, one 4g-gon.
pub fn genus_g_min(g: usize) -> CellComplex {
    let mut cx = CellComplex::new_surface();
    let v = cx.add_vertex();
    let mut word = Vec::new();
    for _ in 0..g {
        let a = cx.add_edge(v, v);
        let b = cx.add_edge(v, v);
        word.extend_from_slice(&[(a, false), (b, false), (a, true), (b, true)]);
    }
    cx.add_face(word);
    cx
}

/// Sphere with `n` embedded disks: a hub vertex, a spoke to each marked
/// point, a loop around each disk; returns the complex together with the
/// disk faces and their marked points.
pub struct PuncturedSphere {
    pub complex: CellComplex,
    pub disks: Vec<usize>,
    pub marked: Vec<usize>,
    pub outer: usize,
}

pub fn n_punctured_sphere(n: usize) -> PuncturedSphere {
    let mut cx = CellComplex::new_surface();
    let hub = cx.add_vertex();
    let mut disks = Vec::new();
    let mut marked = Vec::new();
    let mut outer_word = Vec::new();
    for _ in 0..n {
        let p = cx.add_vertex();
        let spoke = cx.add_edge(hub, p);
        let lp = cx.add_edge(p, p);
        outer_word.push((spoke, false));
        outer_word.push((lp, false));
        outer_word.push((spoke, true));
        disks.push(cx.add_face(vec![(lp, true)]));
        marked.push(p);
    }
    if n == 0 {
        // plain sphere: fall back to the minimal decomposition but keep the
        // hub so the structure stays uniform
        let e = cx.add_edge(hub, hub);
        let outer = cx.add_face(vec![(e, false)]);
        cx.add_face(vec![(e, true)]);
        return PuncturedSphere { complex: cx, disks, marked, outer };
    }
    let outer = cx.add_face(outer_word);
    PuncturedSphere { complex: cx, disks, marked, outer }
}

/// S^3 with one cell in each dimension: vertex, loop, monogon, ball.
pub fn s3_onecell() -> CellComplex {
    let mut cx = CellComplex::new_3manifold();
    let v = cx.add_vertex();
    let e = cx.add_edge(v, v);
    let f = cx.add_face(vec![(e, false)]);
    let mut glue = HashMap::new();
    glue.insert((0usize, 0usize), (1usize, 0usize));
    glue.insert((1usize, 0usize), (0usize, 0usize));
    cx.add_cell(Cell3 {
        shell: vec![
            Some(ShellFace { face: f, plus: true, rot: 0 }),
            Some(ShellFace { face: f, plus: false, rot: 0 }),
        ],
        glue,
    });
    cx
}

/// Two-tetrahedron S^3: the double of a tetrahedron.
pub fn s3_two_tet() -> Result<CellComplex> {
    let mut t = Triangulation::default();
    let id = [0usize, 1, 2, 3];
    t.gluings = vec![
        [Some((1, id)), Some((1, id)), Some((1, id)), Some((1, id))],
        [Some((0, id)), Some((0, id)), Some((0, id)), Some((0, id))],
    ];
    from_triangulation(&t)
}

/// Lens space L(p, q) from the join of two p-gons, quotiented: p
/// tetrahedra, `gcd(p, q) = 1`, `p >= 2`.
pub fn lens_space(p: usize, q: usize) -> Result<CellComplex> {
    if p < 2 {
        return Err(TvError::UnknownCanned(format!("lens({p},{q}) needs p >= 2")));
    }
    if gcd(p as i64, q as i64) != 1 {
        return Err(TvError::UnknownCanned(format!("lens({p},{q}) needs gcd(p,q) = 1")));
    }
    let mut t = Triangulation::default();
    t.gluings = vec![[None; 4]; p];
    for j in 0..p {
        // face 0 of tet_j glues to face 1 of tet_{j-q} with perm (0 1)
        let tj = (j + p - (q % p)) % p;
        t.gluings[j][0] = Some((tj, [1, 0, 2, 3]));
        t.gluings[tj][1] = Some((j, [1, 0, 2, 3]));
        // face 2 of tet_j glues to face 3 of tet_{j+1} with perm (2 3)
        let tj2 = (j + 1) % p;
        t.gluings[j][2] = Some((tj2, [0, 1, 3, 2]));
        t.gluings[tj2][3] = Some((j, [0, 1, 3, 2]));
    }
    from_triangulation(&t)
}

/// Catalogue of canned complexes.
pub fn canned(name: &str) -> Result<CellComplex> {
    match name {
        "s2-min" => Ok(s2_min()),
        "torus-min" => Ok(torus_min()),
        "s3-onecell" => Ok(s3_onecell()),
        "s3-two-tet" => s3_two_tet(),
        "s2xs1" => glue_cylinder_ends(&cylinder(&s2_min())?),
        "t3" => glue_cylinder_ends(&cylinder(&torus_min())?),
        other => {
            if let Some(rest) = other.strip_prefix("genus-") {
                if let Some(g) = rest.strip_suffix("-min").and_then(|s| s.parse::<usize>().ok()) {
                    return Ok(genus_g_min(g));
                }
            }
            if let Some(rest) = other.strip_prefix("lens(") {
                if let Some(body) = rest.strip_suffix(')') {
                    let parts: Vec<&str> = body.split(',').collect();
                    if parts.len() == 2 {
                        if let (Ok(p), Ok(q)) =
                            (parts[0].trim().parse::<usize>(), parts[1].trim().parse::<usize>())
                        {
                            return lens_space(p, q);
                        }
                    }
                }
            }
            if let Some(rest) = other.strip_prefix("n-punctured-sphere(") {
                if let Some(n) = rest.strip_suffix(')').and_then(|s| s.parse::<usize>().ok()) {
                    return Ok(n_punctured_sphere(n).complex);
                }
            }
            Err(TvError::UnknownCanned(other.to_string()))
        }
    }
}

// ---- dual graph skeleton -----------------------------------------------

/// The dual graph on the boundary sphere of a 3-cell: one coupon per shell
/// face, one edge per glued dart pair. Coupon slot `t` of a degree-`n`
/// coupon corresponds to shell slot `n - 1 - t` (the coupon word is the
/// reversed-dual of the shell word).
#[derive(Debug, Clone)]
pub struct DualGraphSkeleton {
    pub shell_of_coupon: Vec<usize>,
    pub coupon_degree: Vec<usize>,
    pub edges: Vec<((usize, usize), (usize, usize))>,
}

pub fn dual_graph(cx: &CellComplex, cell: usize) -> Result<DualGraphSkeleton> {
    if cx.cells.get(cell).map_or(true, |c| c.is_none()) {
        return Err(TvError::Complex(format!("cell {cell} not in complex")));
    }
    let sfis = cx.live_shell_faces(cell);
    let coupon_of: HashMap<usize, usize> =
        sfis.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut degree = Vec::new();
    for &sfi in &sfis {
        degree.push(cx.shell_word(cell, sfi).len());
    }
    let mut edges = Vec::new();
    let mut seen: Vec<Dart> = Vec::new();
    for (&d, &p) in &cx.cell(cell).glue {
        if seen.contains(&d) {
            continue;
        }
        seen.push(d);
        seen.push(p);
        let cd = coupon_of[&d.0];
        let cp = coupon_of[&p.0];
        let sd = degree[cd] - 1 - d.1;
        let sp = degree[cp] - 1 - p.1;
        let (a, b) = if (cd, sd) <= (cp, sp) { ((cd, sd), (cp, sp)) } else { ((cp, sp), (cd, sd)) };
        edges.push((a, b));
    }
    edges.sort();
    Ok(DualGraphSkeleton { shell_of_coupon: sfis, coupon_degree: degree, edges })
}

// ---- Pachner moves as compositions of elementary moves -------------------

/// The Pachner 3-2 move around an interior edge shared by exactly three
/// tetrahedron-like cells, as the move sequence
/// (remove one side face, remove the common edge, remove the merged face,
/// add the equatorial face). Returns the result and the witnessing moves.
pub fn pachner_32(cx: &CellComplex, edge: usize) -> Result<(CellComplex, Vec<MoveInstance>)> {
    // configuration: three distinct faces around the edge
    let mut around: Vec<usize> = Vec::new();
    for f in cx.live_faces() {
        if cx.face(f).word.iter().any(|&(e, _)| e == edge) {
            around.push(f);
        }
    }
    if around.len() != 3 {
        return Err(TvError::MoveInapplicable(format!(
            "edge {edge} has {} incident faces, need 3",
            around.len()
        )));
    }
    // link vertices: third corner of each triangle
    let ed = cx.edge(edge).clone();
    let mut link: Vec<usize> = Vec::new();
    for &f in &around {
        for &se in &cx.face(f).word {
            let (t, _) = cx.edge_endpoints(se);
            if t != ed.tail && t != ed.head && !link.contains(&t) {
                link.push(t);
            }
        }
    }
    if link.len() != 3 {
        return Err(TvError::MoveInapplicable("link of the edge is not a triangle".into()));
    }
    let mut moves = Vec::new();
    let m1 = MoveInstance::M3 { face: around[0] };
    let (c1, _) = cx.apply_move(&m1)?;
    moves.push(m1);
    let m2 = MoveInstance::M2 { edge };
    let (c2, _) = c1.apply_move(&m2)?;
    moves.push(m2);
    // the merged face is the newest live face
    let merged_face = c2.live_faces().max().ok_or_else(|| TvError::Complex("no faces".into()))?;
    let m3 = MoveInstance::M3 { face: merged_face };
    let (c3, _) = c2.apply_move(&m3)?;
    moves.push(m3);
    // cut the merged ball along the triangle through the link vertices
    let ball = c3.live_cells().max().unwrap();
    let cycle = find_triangle_cycle(&c3, ball, &link)?;
    let m4 = MoveInstance::InvM3 { cell: ball, cycle };
    let (c4, _) = c3.apply_move(&m4)?;
    moves.push(m4);
    Ok((c4, moves))
}

/// Find a simple 3-dart cycle on the shell of `cell` visiting the three
/// given vertices (the equatorial triangle of a Pachner configuration).
fn find_triangle_cycle(cx: &CellComplex, cell: usize, link: &[usize]) -> Result<Vec<Dart>> {
    let sfis = cx.live_shell_faces(cell);
    let mut darts: Vec<(Dart, usize, usize)> = Vec::new(); // (dart, tail vertex, head vertex)
    for &sfi in &sfis {
        let w = cx.shell_word(cell, sfi);
        for (slot, &se) in w.iter().enumerate() {
            let (t, h) = cx.edge_endpoints(se);
            darts.push(((sfi, slot), t, h));
        }
    }
    let pairs =
        [(link[0], link[1]), (link[1], link[2]), (link[2], link[0])];
    // pick one dart per leg, then verify the cycle splits the shell
    let candidates: Vec<Vec<Dart>> = pairs
        .iter()
        .map(|&(a, b)| {
            darts
                .iter()
                .filter(|&&(_, t, h)| t == a && h == b)
                .map(|&(d, _, _)| d)
                .collect()
        })
        .collect();
    for &d0 in &candidates[0] {
        for &d1 in &candidates[1] {
            for &d2 in &candidates[2] {
                let cycle = vec![d0, d1, d2];
                let probe = MoveInstance::InvM3 { cell, cycle: cycle.clone() };
                if cx.apply_move(&probe).is_ok() {
                    return Ok(cycle);
                }
            }
        }
    }
    Err(TvError::MoveInapplicable("no separating triangle cycle found".into()))
}

/// The Pachner 4-1 move around an interior vertex whose star is four
/// tetrahedron-like cells, as the sequence of two face removals, two edge
/// removals, the vertex removal, and the final face merge and removal.
pub fn pachner_41(cx: &CellComplex, vertex: usize) -> Result<(CellComplex, Vec<MoveInstance>)> {
    // edges at the vertex
    let star_edges: Vec<usize> = cx
        .live_edges()
        .filter(|&e| {
            let ed = cx.edge(e);
            ed.tail == vertex || ed.head == vertex
        })
        .collect();
    if star_edges.len() != 4 {
        return Err(TvError::MoveInapplicable(format!(
            "vertex {vertex} has {} incident edges, need 4",
            star_edges.len()
        )));
    }
    // faces with a corner at the vertex, tagged by their pair of star edges
    let mut starfaces: Vec<(usize, usize, usize)> = Vec::new();
    for (f, k) in cx.corners_at(vertex) {
        let w = &cx.face(f).word;
        let e_in = w[k].0;
        let e_out = w[(k + 1) % w.len()].0;
        starfaces.push((f, e_in.min(e_out), e_in.max(e_out)));
    }
    if starfaces.len() != 6 {
        return Err(TvError::MoveInapplicable("vertex star is not four tetrahedra".into()));
    }
    // pick g1 and the opposite g2 sharing no star edge
    let (g1, a1, b1) = starfaces[0];
    let (g2, _, _) = *starfaces
        .iter()
        .find(|&&(_, a, b)| a != a1 && a != b1 && b != a1 && b != b1)
        .ok_or_else(|| TvError::MoveInapplicable("no opposite face at the vertex".into()))?;
    let mut moves = Vec::new();
    let mut cur = cx.clone();
    for mv in [MoveInstance::M3 { face: g1 }, MoveInstance::M3 { face: g2 }] {
        let (next, _) = cur.apply_move(&mv)?;
        moves.push(mv);
        cur = next;
    }
    // the two star edges of g1 are now each adjacent to exactly two faces
    for e in [a1, b1] {
        let mv = MoveInstance::M2 { edge: e };
        let (next, _) = cur.apply_move(&mv)?;
        moves.push(mv);
        cur = next;
    }
    // the vertex now has the remaining two star edges
    let mv = MoveInstance::M1 { vertex };
    let (next, _) = cur.apply_move(&mv)?;
    moves.push(mv);
    cur = next;
    // the merged edge is the newest
    let q = cur.live_edges().max().unwrap();
    let mv = MoveInstance::M2 { edge: q };
    let (next, _) = cur.apply_move(&mv)?;
    moves.push(mv);
    cur = next;
    let h = cur.live_faces().max().unwrap();
    let mv = MoveInstance::M3 { face: h };
    let (next, _) = cur.apply_move(&mv)?;
    moves.push(mv);
    cur = next;
    Ok((cur, moves))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canned_counts() {
        let s2 = s2_min();
        s2.validate().unwrap();
        assert_eq!(
            (s2.live_verts().count(), s2.live_edges().count(), s2.live_faces().count()),
            (1, 1, 2)
        );
        let t2 = torus_min();
        t2.validate().unwrap();
        assert_eq!(
            (t2.live_verts().count(), t2.live_edges().count(), t2.live_faces().count()),
            (1, 2, 1)
        );
        let s3 = s3_onecell();
        s3.validate().unwrap();
        assert!(s3.is_closed());
        assert_eq!(s3.euler_characteristic(), 0);
        assert_eq!(s3.homology_h1(), Vec::<i64>::new());
    }

    #[test]
    fn two_tet_sphere() {
        let cx = s3_two_tet().unwrap();
        cx.validate().unwrap();
        assert!(cx.is_closed());
        assert_eq!(
            (
                cx.live_verts().count(),
                cx.live_edges().count(),
                cx.live_faces().count(),
                cx.live_cells().count()
            ),
            (4, 6, 4, 2)
        );
        assert_eq!(cx.homology_h1(), Vec::<i64>::new());
        manifold_checks(&cx).unwrap();
    }

    #[test]
    fn single_tet_has_sphere_boundary() {
        let mut t = Triangulation::default();
        t.gluings = vec![[None, None, None, None]];
        let cx = from_triangulation(&t).unwrap();
        cx.validate().unwrap();
        assert_eq!(cx.boundary_faces().len(), 4);
        assert_eq!(cx.boundary_vertices().len(), 4);
        assert_eq!(cx.two_v(), 4);
    }

    #[test]
    fn orientation_reversing_gluing_rejected() {
        // identity permutation on a self-gluing pairs up a tet with itself
        // orientation-incompatibly
        let mut t = Triangulation::default();
        let id = [0usize, 1, 2, 3];
        // swap two faces of the same tet with an odd... use an even perm to
        // force the orientation contradiction s*s = -sgn = -1 with s^2 = 1
        t.gluings = vec![[Some((0, [1, 0, 3, 2])), Some((0, [1, 0, 3, 2])), None, None]];
        let res = from_triangulation(&t);
        assert!(res.is_err());
        let _ = id;
    }

    #[test]
    fn lens_spaces_have_cyclic_h1() {
        for (p, q) in [(2usize, 1usize), (3, 1), (4, 1), (5, 2)] {
            let cx = lens_space(p, q).unwrap();
            cx.validate().unwrap();
            assert!(cx.is_closed(), "lens({p},{q}) should be closed");
            assert_eq!(cx.homology_h1(), vec![p as i64], "H1 of lens({p},{q})");
            manifold_checks(&cx).unwrap();
        }
    }

    #[test]
    fn cylinder_over_sphere_is_saturn() {
        let cy = cylinder(&s2_min()).unwrap();
        let cx = &cy.complex;
        // 2 vertices, 3 edges (2 horizontal copies + 1 vertical),
        // 5 faces (2+2 copies + 1 rectangle), 2 wedge cells
        assert_eq!(
            (
                cx.live_verts().count(),
                cx.live_edges().count(),
                cx.live_faces().count(),
                cx.live_cells().count()
            ),
            (2, 3, 5, 2)
        );
        assert_eq!(cx.boundary_faces().len(), 4);
    }

    #[test]
    fn cylinder_over_torus_and_t3() {
        let cy = cylinder(&torus_min()).unwrap();
        assert_eq!(cy.complex.live_cells().count(), 1);
        assert_eq!(cy.complex.boundary_faces().len(), 2);
        let t3 = glue_cylinder_ends(&cy).unwrap();
        t3.validate().unwrap();
        assert!(t3.is_closed());
        assert_eq!(
            (
                t3.live_verts().count(),
                t3.live_edges().count(),
                t3.live_faces().count(),
                t3.live_cells().count()
            ),
            (1, 3, 3, 1)
        );
        assert_eq!(t3.homology_h1(), vec![0, 0, 0]);
    }

    #[test]
    fn s2xs1_counts() {
        let cx = canned("s2xs1").unwrap();
        assert!(cx.is_closed());
        assert_eq!(cx.euler_characteristic(), 0);
        assert_eq!(cx.homology_h1(), vec![0]);
    }

    #[test]
    fn dual_graph_shapes() {
        // tetrahedron cell: dual graph = K4 (4 coupons of valence 3)
        let mut t = Triangulation::default();
        t.gluings = vec![[None; 4]];
        let cx = from_triangulation(&t).unwrap();
        let cell = cx.live_cells().next().unwrap();
        let dg = dual_graph(&cx, cell).unwrap();
        assert_eq!(dg.shell_of_coupon.len(), 4);
        assert!(dg.coupon_degree.iter().all(|&d| d == 3));
        assert_eq!(dg.edges.len(), 6);
        // prism over a square: 2 coupons of valence 4 + 4 of valence 4...
        // over an n-gon: 2 coupons of valence n and n of valence 4
        let mut sq = CellComplex::new_surface();
        let v = sq.add_vertex();
        let w = sq.add_vertex();
        let e1 = sq.add_edge(v, w);
        let e2 = sq.add_edge(w, v);
        sq.add_face(vec![(e1, false), (e2, false)]);
        sq.add_face(vec![(e2, true), (e1, true)]);
        // use the triangle-free bigon sphere instead: prism over a bigon face
        let cyl = cylinder(&sq).unwrap();
        let c0 = cyl.complex.live_cells().next().unwrap();
        let dg2 = dual_graph(&cyl.complex, c0).unwrap();
        let mut degs: Vec<usize> = dg2.coupon_degree.clone();
        degs.sort_unstable();
        assert_eq!(degs, vec![2, 2, 4, 4]);
    }

    #[test]
    fn move_round_trips_restore_exactly() {
        // M2 on the saturn cylinder: merge the two sphere copies... use a
        // cleaner case: split then merge on the two-tet sphere
        let cx = s3_two_tet().unwrap();
        // InvM1 on some edge, then restore
        let e = cx.live_edges().next().unwrap();
        let (split, inv) = cx.apply_move(&MoveInstance::InvM1 { edge: e }).unwrap();
        split.validate().unwrap();
        assert_eq!(split.live_edges().count(), 7);
        let back = split.apply_move_oneway(&inv).unwrap();
        assert_eq!(back, cx);

        // M3 on an interior face, then restore
        let f = cx.live_faces().next().unwrap();
        let (merged, inv) = cx.apply_move(&MoveInstance::M3 { face: f }).unwrap();
        merged.validate().unwrap();
        assert_eq!(merged.live_cells().count(), 1);
        let back = merged.apply_move_oneway(&inv).unwrap();
        assert_eq!(back, cx);

        // InvM2 splitting a face of the merged complex
        let f2 = merged.live_faces().next().unwrap();
        let n = merged.face(f2).word.len();
        if n >= 2 {
            let (split2, inv2) =
                merged.apply_move(&MoveInstance::InvM2 { face: f2, cut: (0, 1) }).unwrap();
            split2.validate().unwrap();
            let back2 = split2.apply_move_oneway(&inv2).unwrap();
            assert_eq!(back2, merged);
        }
    }

    #[test]
    fn m1_merges_split_edge() {
        let cx = s3_two_tet().unwrap();
        let e = cx.live_edges().next().unwrap();
        let (split, _) = cx.apply_move(&MoveInstance::InvM1 { edge: e }).unwrap();
        // the fresh vertex is the last one
        let v = split.live_verts().max().unwrap();
        let (merged, inv) = split.apply_move(&MoveInstance::M1 { vertex: v }).unwrap();
        merged.validate().unwrap();
        assert_eq!(merged.live_edges().count(), cx.live_edges().count());
        let back = merged.apply_move_oneway(&inv).unwrap();
        assert_eq!(back, split);
    }

    #[test]
    fn m3_inapplicable_on_boundary_face() {
        let mut t = Triangulation::default();
        t.gluings = vec![[None; 4]];
        let cx = from_triangulation(&t).unwrap();
        let f = cx.live_faces().next().unwrap();
        let res = cx.apply_move(&MoveInstance::M3 { face: f });
        assert!(matches!(res, Err(TvError::MoveInapplicable(_))));
    }

    #[test]
    fn m2_then_inv_m2_on_surface() {
        let mut sq = CellComplex::new_surface();
        let v = sq.add_vertex();
        let w = sq.add_vertex();
        let e1 = sq.add_edge(v, w);
        let e2 = sq.add_edge(w, v);
        sq.add_face(vec![(e1, false), (e2, false)]);
        sq.add_face(vec![(e2, true), (e1, true)]);
        sq.validate().unwrap();
        let (merged, inv) = sq.apply_move(&MoveInstance::M2 { edge: e2 }).unwrap();
        merged.validate().unwrap();
        assert_eq!(merged.live_faces().count(), 1);
        let back = merged.apply_move_oneway(&inv).unwrap();
        assert_eq!(back, sq);
    }

    #[test]
    fn pachner_32_on_three_tet_loop() {
        // three tetrahedra around a common edge: glue T_k face 2 to
        // T_{k+1} face 3 in a cycle (the suspension of a triangle = S^3
        // as a 3-tet pillow), then close the outer boundary by doubling
        // with identity gluings... instead use the standard 3-tet S^3:
        // the triple join quotient is exactly lens(3,1)? Use a direct
        // construction: three tets forming the 3-2 configuration inside
        // the two-tet sphere after a 2-3 move is not available; test the
        // configuration finder on lens(3,1) which has interior edges of
        // degree 3.
        let cx = lens_space(3, 1).unwrap();
        // find an edge with exactly three incident faces
        let mut target = None;
        for e in cx.live_edges() {
            let cnt = cx
                .live_faces()
                .filter(|&f| cx.face(f).word.iter().any(|&(x, _)| x == e))
                .count();
            if cnt == 3 {
                target = Some(e);
                break;
            }
        }
        if let Some(e) = target {
            match pachner_32(&cx, e) {
                Ok((out, moves)) => {
                    out.validate().unwrap();
                    assert_eq!(moves.len(), 4);
                    // replaying the moves reproduces the result
                    let mut cur = cx.clone();
                    for m in &moves {
                        cur = cur.apply_move_oneway(m).unwrap();
                    }
                    assert_eq!(cur, out);
                    assert_eq!(out.live_cells().count(), cx.live_cells().count() - 1);
                }
                Err(TvError::MoveInapplicable(_)) => {
                    // the configuration may be degenerate in this census
                }
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
    }
}
