//! Drinfeld-center machinery: half-braiding data, the induction functor,
//! the averaging projector onto center homs, colored hom spaces, and the
//! gluing isomorphism.
//!
//! A center object is stored as multiplicities of its underlying object
//! over the simples of `C` together with one block matrix per simple `v`
//! describing the half-braiding `Y (x) X_v -> X_v (x) Y` channel-wise in
//! fusion-tree bases.

use crate::category::{FusionCategory, SimpleIx};
use crate::error::{Result, TvError};
use crate::group::{irreps, GroupTable, Irrep};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::trees::{
    cyclic_rotate, dual_basis_pair, rotate_by, PairMorphism, TreeSpace, TreeVector, WordState,
};
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct CenterObject {
    pub name: String,
    /// Multiplicity of each simple of `C` in the underlying object.
    pub underlying: Vec<usize>,
    /// `braiding[v]` describes `Y (x) X_v -> X_v (x) Y`.
    pub braiding: Vec<CenterBraiding>,
}

/// Half-braiding against one simple `v`: for each channel `c`, a matrix
/// from the stacked spaces `(i, copy a, mu in N(i,v;c))` to
/// `(j, copy b, nu in N(v,j;c))`.
#[derive(Debug, Clone)]
pub struct CenterBraiding {
    pub blocks: HashMap<SimpleIx, Matrix>,
}

/// Flattened domain index set of a braiding block.
pub fn in_triples(
    cat: &FusionCategory,
    underlying: &[usize],
    v: SimpleIx,
    c: SimpleIx,
) -> Vec<(SimpleIx, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..cat.rank() {
        for a in 0..underlying[i] {
            for mu in 0..cat.n(i, v, c) {
                out.push((i, a, mu));
            }
        }
    }
    out
}

/// Flattened codomain index set of a braiding block.
pub fn out_triples(
    cat: &FusionCategory,
    underlying: &[usize],
    v: SimpleIx,
    c: SimpleIx,
) -> Vec<(SimpleIx, usize, usize)> {
    let mut out = Vec::new();
    for j in 0..cat.rank() {
        for b in 0..underlying[j] {
            for nu in 0..cat.n(v, j, c) {
                out.push((j, b, nu));
            }
        }
    }
    out
}

impl CenterObject {
    /// The unit center object: underlying `1`, identity half-braiding.
    pub fn unit(cat: &FusionCategory) -> CenterObject {
        let mut underlying = vec![0usize; cat.rank()];
        underlying[cat.unit] = 1;
        let braiding = (0..cat.rank())
            .map(|v| {
                let mut blocks = HashMap::new();
                blocks.insert(v, Matrix::identity(1));
                CenterBraiding { blocks }
            })
            .collect();
        CenterObject { name: "unit".into(), underlying, braiding }
    }

    /// Flattened component list `(simple, copy)`.
    pub fn components(&self) -> Vec<(SimpleIx, usize)> {
        let mut out = Vec::new();
        for (i, &m) in self.underlying.iter().enumerate() {
            for a in 0..m {
                out.push((i, a));
            }
        }
        out
    }

    pub fn qdim(&self, cat: &FusionCategory) -> Scalar {
        let mut d = cat.zero();
        for (i, &m) in self.underlying.iter().enumerate() {
            for _ in 0..m {
                d = &d + &cat.qdim[i];
            }
        }
        d
    }

    /// Component `(i,a) -> (j,b)` of the half-braiding against `v`, as a
    /// pair morphism `X_i (x) X_v -> X_v (x) X_j`.
    pub fn braiding_pair(
        &self,
        cat: &FusionCategory,
        v: SimpleIx,
        input: (SimpleIx, usize),
        output: (SimpleIx, usize),
    ) -> Result<PairMorphism> {
        let (i, a) = input;
        let (j, b) = output;
        let mut blocks = HashMap::new();
        for c in 0..cat.rank() {
            let ins = in_triples(cat, &self.underlying, v, c);
            let outs = out_triples(cat, &self.underlying, v, c);
            let n_in = cat.n(i, v, c);
            let n_out = cat.n(v, j, c);
            if n_in == 0 || n_out == 0 {
                continue;
            }
            let big = self.braiding[v]
                .blocks
                .get(&c)
                .ok_or_else(|| TvError::Center(format!("missing braiding block v={v} c={c}")))?;
            let mut m = Matrix::zeros(n_out, n_in);
            for nu in 0..n_out {
                let ri = outs.iter().position(|&t| t == (j, b, nu)).unwrap();
                for mu in 0..n_in {
                    let ci = ins.iter().position(|&t| t == (i, a, mu)).unwrap();
                    m[(nu, mu)] = big[(ri, ci)].clone();
                }
            }
            blocks.insert(c, m);
        }
        Ok(PairMorphism { from: (i, v), to: (v, j), blocks })
    }

    /// Component of the inverse half-braiding, `X_v (x) X_i -> X_j (x) X_v`.
    pub fn braiding_inv_pair(
        &self,
        cat: &FusionCategory,
        v: SimpleIx,
        input: (SimpleIx, usize),
        output: (SimpleIx, usize),
    ) -> Result<PairMorphism> {
        let (i, a) = input;
        let (j, b) = output;
        let mut blocks = HashMap::new();
        for c in 0..cat.rank() {
            let ins = in_triples(cat, &self.underlying, v, c);
            let outs = out_triples(cat, &self.underlying, v, c);
            if ins.is_empty() && outs.is_empty() {
                continue;
            }
            if ins.len() != outs.len() {
                return Err(TvError::Center(format!(
                    "braiding block v={v} c={c} is not square"
                )));
            }
            let big = self.braiding[v]
                .blocks
                .get(&c)
                .ok_or_else(|| TvError::Center(format!("missing braiding block v={v} c={c}")))?;
            let inv = big.inverse().map_err(|_| {
                TvError::Center(format!("half-braiding not invertible at v={v} c={c}"))
            })?;
            let n_from = cat.n(v, i, c);
            let n_to = cat.n(j, v, c);
            if n_from == 0 || n_to == 0 {
                continue;
            }
            let mut m = Matrix::zeros(n_to, n_from);
            for mu in 0..n_to {
                let ri = ins.iter().position(|&t| t == (j, b, mu)).unwrap();
                for nu in 0..n_from {
                    let ci = outs.iter().position(|&t| t == (i, a, nu)).unwrap();
                    m[(mu, nu)] = inv[(ri, ci)].clone();
                }
            }
            blocks.insert(c, m);
        }
        Ok(PairMorphism { from: (v, i), to: (j, v), blocks })
    }

    /// Dual center object: underlying multiplicities of the duals, copy
    /// indices preserved. The dual half-braiding is transported through
    /// `phi* = (ev (x) id) o (id (x) phi^-1 (x) id) o (id (x) coev)`.
    pub fn dual(&self, cat: &FusionCategory) -> Result<CenterObject> {
        let underlying: Vec<usize> =
            (0..cat.rank()).map(|i| self.underlying[cat.dual(i)]).collect();
        let mut braiding = Vec::with_capacity(cat.rank());
        for v in 0..cat.rank() {
            let mut blocks = HashMap::new();
            for ch in 0..cat.rank() {
                let ins = in_triples(cat, &underlying, v, ch);
                let outs = out_triples(cat, &underlying, v, ch);
                if ins.is_empty() && outs.is_empty() {
                    continue;
                }
                let mut m = Matrix::zeros(outs.len(), ins.len());
                for (ci, &(istar, a, mu)) in ins.iter().enumerate() {
                    let i = cat.dual(istar);
                    let word = vec![istar, v, cat.dual(ch)];
                    let space = TreeSpace::hom(cat, &word);
                    let Some(start) =
                        space.basis.iter().position(|p| p.channels[1] == ch && p.mults[1] == mu)
                    else {
                        continue;
                    };
                    // (istar, v, ch*) -> cup with Y-component j after v
                    // -> inverse-braid (v, j-comp) to (i, a)
                    // -> cap (istar, i) -> (v, j*, ch*)
                    for (j, &mj) in self.underlying.iter().enumerate() {
                        for b in 0..mj {
                            let mut st =
                                WordState::from_vector(cat, &space.basis_vector(cat, start));
                            st.cup(cat, 2, j);
                            // word: (istar, v, j, j*, ch*)
                            let g = self.braiding_inv_pair(cat, v, (j, b), (i, a))?;
                            if st.apply_pair(cat, 1, &g).is_err() {
                                continue;
                            }
                            // word: (istar, i, v, j*, ch*)
                            if st.cap(cat, 0).is_err() {
                                continue;
                            }
                            // word: (v, j*, ch*)
                            let out_vec = st.to_vector(cat);
                            let out_space = TreeSpace::hom(cat, &[v, cat.dual(j), cat.dual(ch)]);
                            for (ri, &(jstar2, b2, nu)) in outs.iter().enumerate() {
                                if jstar2 != cat.dual(j) || b2 != b {
                                    continue;
                                }
                                if let Some(bi) = out_space
                                    .basis
                                    .iter()
                                    .position(|p| p.channels[1] == ch && p.mults[1] == nu)
                                {
                                    m[(ri, ci)] = &m[(ri, ci)] + &out_vec.coords[bi];
                                }
                            }
                        }
                    }
                }
                blocks.insert(ch, m);
            }
            braiding.push(CenterBraiding { blocks });
        }
        Ok(CenterObject { name: format!("{}*", self.name), underlying, braiding })
    }
}

/// Check the half-braiding coherence of a center object: blocks square and
/// invertible, identity against the unit, and multiplicativity
/// `phi_{v(x)w} = (id (x) phi_w)(phi_v (x) id)` on every pair of simples.
/// Reports the first failing pair.
pub fn validate_center_object(cat: &FusionCategory, y: &CenterObject) -> Result<()> {
    if y.braiding.len() != cat.rank() || y.underlying.len() != cat.rank() {
        return Err(TvError::Center("braiding/underlying arrays have wrong length".into()));
    }
    // block shape and invertibility
    for v in 0..cat.rank() {
        for c in 0..cat.rank() {
            let ins = in_triples(cat, &y.underlying, v, c);
            let outs = out_triples(cat, &y.underlying, v, c);
            if ins.is_empty() && outs.is_empty() {
                continue;
            }
            if ins.len() != outs.len() {
                return Err(TvError::Center(format!("block (v={v}, c={c}) not square")));
            }
            let m = y.braiding[v]
                .blocks
                .get(&c)
                .ok_or_else(|| TvError::Center(format!("missing block (v={v}, c={c})")))?;
            if m.rows != outs.len() || m.cols != ins.len() {
                return Err(TvError::Center(format!("block (v={v}, c={c}) has wrong shape")));
            }
            if m.inverse().is_err() {
                return Err(TvError::Center(format!("block (v={v}, c={c}) not invertible")));
            }
        }
    }
    // unit column
    let comps = y.components();
    for &(i, a) in &comps {
        for &(j, b) in &comps {
            let g = y.braiding_pair(cat, cat.unit, (i, a), (j, b))?;
            for (c, m) in &g.blocks {
                let expect = if i == j && a == b && *c == i { cat.one() } else { cat.zero() };
                if m.rows * m.cols > 0 && !m[(0, 0)].approx_eq(&expect) {
                    return Err(TvError::Center(
                        "half-braiding against the unit is not the identity".into(),
                    ));
                }
            }
        }
    }
    // multiplicativity, checked on closed words <i, v, w, t>
    for v in 0..cat.rank() {
        for w in 0..cat.rank() {
            if !braiding_multiplicative(cat, y, v, w)? {
                return Err(TvError::Center(format!(
                    "half-braiding coherence fails at pair ({}, {})",
                    cat.simples[v].name, cat.simples[w].name
                )));
            }
        }
    }
    Ok(())
}

fn braiding_multiplicative(
    cat: &FusionCategory,
    y: &CenterObject,
    v: SimpleIx,
    w: SimpleIx,
) -> Result<bool> {
    let comps = y.components();
    for t in 0..cat.rank() {
        for &(i, a) in &comps {
            let word = vec![i, v, w, t];
            let space = TreeSpace::hom(cat, &word);
            for bi in 0..space.dim() {
                let basis = space.basis_vector(cat, bi);
                // LHS: braid past v, then past w
                let mut lhs: HashMap<(SimpleIx, usize), TreeVector> = HashMap::new();
                for &(k, c1) in &comps {
                    let g1 = y.braiding_pair(cat, v, (i, a), (k, c1))?;
                    let mut st = WordState::from_vector(cat, &basis);
                    if st.apply_pair(cat, 0, &g1).is_err() {
                        continue;
                    }
                    for &(j, b) in &comps {
                        let g2 = y.braiding_pair(cat, w, (k, c1), (j, b))?;
                        let mut run = WordState::from_vector(cat, &st.to_vector(cat));
                        if run.apply_pair(cat, 1, &g2).is_err() {
                            continue;
                        }
                        let vec = run.to_vector(cat);
                        lhs.entry((j, b))
                            .and_modify(|e| *e = e.add(&vec))
                            .or_insert(vec);
                    }
                }
                // RHS: fuse (v,w), braid past the channel, unfuse
                let mut rhs: HashMap<(SimpleIx, usize), TreeVector> = HashMap::new();
                let st0 = WordState::from_vector(cat, &basis);
                for (u, rho, stu) in st0.fuse_split(cat, 1) {
                    for &(j, b) in &comps {
                        let g = y.braiding_pair(cat, u, (i, a), (j, b))?;
                        let mut run = WordState::from_vector(cat, &stu.to_vector(cat));
                        if run.apply_pair(cat, 0, &g).is_err() {
                            continue;
                        }
                        // the fused channel letter is now at position 0
                        run.unfuse(cat, 0, v, w, rho);
                        let vec = run.to_vector(cat);
                        rhs.entry((j, b))
                            .and_modify(|e| *e = e.add(&vec))
                            .or_insert(vec);
                    }
                }
                // compare
                for &(j, b) in &comps {
                    let target = TreeSpace::hom(cat, &[v, w, j, t]);
                    let zero = target.zero_vector(cat);
                    let l = lhs.get(&(j, b)).unwrap_or(&zero);
                    let r = rhs.get(&(j, b)).unwrap_or(&zero);
                    if !l.approx_eq(r) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The induction `I(V) = (+)_i X_i (x) V (x) X_i*` of a multiplicity vector
/// `V` over the simples, with the half-braiding normalized by
/// `sqrt(d_i) sqrt(d_j)` (falling back to `d_i` when the square roots do not
/// exist in the backend; the two normalizations are equivalent).
pub fn induct(cat: &FusionCategory, mult: &[usize]) -> Result<CenterObject> {
    assert_eq!(mult.len(), cat.rank());
    // component copies of I(V) at simple j: (i, s, t < mult[s], tree of
    // Hom(j, i (x) s (x) i*))
    let mut copies: Vec<Vec<(SimpleIx, SimpleIx, usize, usize)>> = vec![Vec::new(); cat.rank()];
    for j in 0..cat.rank() {
        for i in 0..cat.rank() {
            for s in 0..cat.rank() {
                if mult[s] == 0 {
                    continue;
                }
                let space = TreeSpace::new(cat, j, &[i, s, cat.dual(i)]);
                for t in 0..mult[s] {
                    for tri in 0..space.dim() {
                        copies[j].push((i, s, t, tri));
                    }
                }
            }
        }
    }
    let underlying: Vec<usize> = copies.iter().map(|c| c.len()).collect();

    let use_sqrt = (0..cat.rank()).all(|i| cat.sqrt_qdim[i].is_some());
    let norm = |i: SimpleIx, ip: SimpleIx| -> Scalar {
        if use_sqrt {
            &cat.sqrt_qdim[i].clone().unwrap() * &cat.sqrt_qdim[ip].clone().unwrap()
        } else {
            cat.qdim[i].clone()
        }
    };

    let mut braiding = Vec::with_capacity(cat.rank());
    for wsimple in 0..cat.rank() {
        let mut blocks: HashMap<SimpleIx, Matrix> = HashMap::new();
        for ch in 0..cat.rank() {
            let ins = in_triples(cat, &underlying, wsimple, ch);
            let outs = out_triples(cat, &underlying, wsimple, ch);
            if ins.is_empty() && outs.is_empty() {
                continue;
            }
            let mut m = Matrix::zeros(outs.len(), ins.len());
            for (ci, &(j, bcopy, mu)) in ins.iter().enumerate() {
                let (i, s, t, tri) = copies[j][bcopy];
                let istar = cat.dual(i);
                let jtree = TreeSpace::new(cat, j, &[i, s, istar]);
                let tpath = &jtree.basis[tri];
                // start: basis of <j, w, ch*> with channel ch, mult mu
                let word = vec![j, wsimple, cat.dual(ch)];
                let space = TreeSpace::hom(cat, &word);
                let Some(b0) = space
                    .basis
                    .iter()
                    .position(|p| p.channels[1] == ch && p.mults[1] == mu)
                else {
                    continue;
                };
                let mut st = WordState::from_vector(cat, &space.basis_vector(cat, b0));
                // expand letter j into the tree (i, s, i*)
                st.unfuse(cat, 0, tpath.channels[1], istar, tpath.mults[2]);
                st.unfuse(cat, 0, i, s, tpath.mults[1]);
                // word: (i, s, i*, w, ch*)
                for ip in 0..cat.rank() {
                    // dual-basis pairs of <i*, w, ip> and <ip*, w*, i>
                    let vtx = vec![cat.dual(i), wsimple, ip];
                    if TreeSpace::hom(cat, &vtx).dim() == 0 {
                        continue;
                    }
                    let (phis, phistars) = dual_basis_pair(cat, &vtx)?;
                    for (phi, phistar) in phis.iter().zip(&phistars) {
                        // v1 = (cap (x) id) o (id_i (x) phi): apply at letter i
                        let mut s1 = WordState::from_vector(cat, &st.to_vector(cat));
                        s1.insert_closed(cat, 1, phi);
                        // word: (i, i*, w, ip, s, i*, w, ch*)
                        if s1.cap(cat, 0).is_err() {
                            continue;
                        }
                        // word: (w, ip, s, i*, w, ch*)
                        // v2 from phistar in <ip*, w*, i>: insert before the
                        // (i*, w) pair and cap twice
                        s1.insert_closed(cat, 3, phistar);
                        // word: (w, ip, s, ip*, w*, i, i*, w, ch*)
                        if s1.cap(cat, 5).is_err() {
                            continue;
                        }
                        // word: (w, ip, s, ip*, w*, w, ch*)
                        if s1.cap(cat, 4).is_err() {
                            continue;
                        }
                        // word: (w, ip, s, ip*, ch*)
                        s1.scale(&norm(i, ip));
                        // refuse (ip, s, ip*) into the output component trees
                        for (c2, rho2, s2) in s1.fuse_split(cat, 1) {
                            for (k, rho3, s3) in s2.fuse_split(cat, 1) {
                                // output copy: (ip, s, t, tree with channels
                                // (ip, c2, k), mults (0, rho2, rho3))
                                let ktree = TreeSpace::new(cat, k, &[ip, s, cat.dual(ip)]);
                                let Some(tri_out) = ktree.basis.iter().position(|p| {
                                    p.channels[1] == c2 && p.mults[1] == rho2 && p.mults[2] == rho3
                                }) else {
                                    continue;
                                };
                                let Some(bout) = copies[k]
                                    .iter()
                                    .position(|&e| e == (ip, s, t, tri_out))
                                else {
                                    continue;
                                };
                                // s3 word: (w, k, ch*); read off nu components
                                let out_vec = s3.to_vector(cat);
                                let out_space =
                                    TreeSpace::hom(cat, &[wsimple, k, cat.dual(ch)]);
                                for nu in 0..cat.n(wsimple, k, ch) {
                                    let Some(bi) = out_space.basis.iter().position(|p| {
                                        p.channels[1] == ch && p.mults[1] == nu
                                    }) else {
                                        continue;
                                    };
                                    let Some(ri) =
                                        outs.iter().position(|&x| x == (k, bout, nu))
                                    else {
                                        continue;
                                    };
                                    m[(ri, ci)] = &m[(ri, ci)] + &out_vec.coords[bi];
                                }
                            }
                        }
                    }
                }
            }
            blocks.insert(ch, m);
        }
        braiding.push(CenterBraiding { blocks });
    }
    Ok(CenterObject { name: "I(V)".into(), underlying, braiding })
}

/// A morphism in `Hom_C(Y, Z)` between center objects: one multiplicity
/// matrix per simple (rows = Z copies, cols = Y copies).
#[derive(Debug, Clone)]
pub struct CenterMorphism {
    pub per_simple: Vec<Matrix>,
}

impl CenterMorphism {
    pub fn basis_element(
        cat: &FusionCategory,
        y: &CenterObject,
        z: &CenterObject,
        i: SimpleIx,
        a: usize,
        b: usize,
    ) -> CenterMorphism {
        let mut per_simple: Vec<Matrix> = (0..cat.rank())
            .map(|k| Matrix::zeros(z.underlying[k], y.underlying[k]))
            .collect();
        per_simple[i][(b, a)] = cat.one();
        CenterMorphism { per_simple }
    }
}

/// Basis labels `(simple, y-copy, z-copy)` of `Hom_C(Y, Z)`.
pub fn hom_c_basis(
    cat: &FusionCategory,
    y: &CenterObject,
    z: &CenterObject,
) -> Vec<(SimpleIx, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..cat.rank() {
        for a in 0..y.underlying[i] {
            for b in 0..z.underlying[i] {
                out.push((i, a, b));
            }
        }
    }
    out
}

/// Does `psi` commute with the half-braidings (is it a morphism in the
/// center)? Exact matrix identity per simple and channel.
pub fn commutes_with_braiding(
    cat: &FusionCategory,
    y: &CenterObject,
    z: &CenterObject,
    psi: &CenterMorphism,
) -> bool {
    for v in 0..cat.rank() {
        for c in 0..cat.rank() {
            let ins_y = in_triples(cat, &y.underlying, v, c);
            let outs_y = out_triples(cat, &y.underlying, v, c);
            let ins_z = in_triples(cat, &z.underlying, v, c);
            let outs_z = out_triples(cat, &z.underlying, v, c);
            if ins_y.is_empty() || outs_z.is_empty() {
                continue;
            }
            let by = match y.braiding[v].blocks.get(&c) {
                Some(m) => m,
                None => continue,
            };
            let bz = match z.braiding[v].blocks.get(&c) {
                Some(m) => m,
                None => continue,
            };
            // psi (x) id on in-triples, id (x) psi on out-triples
            let mut psi_in = Matrix::zeros(ins_z.len(), ins_y.len());
            for (r, &(i2, a2, mu2)) in ins_z.iter().enumerate() {
                for (cc, &(i, a, mu)) in ins_y.iter().enumerate() {
                    if i == i2 && mu == mu2 {
                        psi_in[(r, cc)] = psi.per_simple[i][(a2, a)].clone();
                    }
                }
            }
            let mut psi_out = Matrix::zeros(outs_z.len(), outs_y.len());
            for (r, &(j2, b2, nu2)) in outs_z.iter().enumerate() {
                for (cc, &(j, b, nu)) in outs_y.iter().enumerate() {
                    if j == j2 && nu == nu2 {
                        psi_out[(r, cc)] = psi.per_simple[j][(b2, b)].clone();
                    }
                }
            }
            let lhs = bz.mul(&psi_in);
            let rhs = psi_out.mul(by);
            if !lhs.approx_eq(&rhs, 1e-9) {
                return false;
            }
        }
    }
    true
}

/// The averaging operator `P = (1/D^2) sum_X d_X (conjugation by the
/// half-braidings)` on `Hom_C(Y, Z)`, as a matrix in the basis
/// [`hom_c_basis`]. `P` is a projector onto `Hom_{Z(C)}(Y, Z)`.
pub fn projector_p(cat: &FusionCategory, y: &CenterObject, z: &CenterObject) -> Result<Matrix> {
    let basis = hom_c_basis(cat, y, z);
    let dim = basis.len();
    let mut p = Matrix::zeros(dim, dim);
    let ycomps = y.components();
    let zcomps = z.components();
    for (col, &(i, a, b)) in basis.iter().enumerate() {
        // m_X(e_{i,a->b}): Y-component (i1,a1) enters, is braided to (i,a),
        // psi sends it to Z-component (i,b), which is braided to (i1,b2).
        for x in 0..cat.rank() {
            for &(i1, a1) in &ycomps {
                let word = vec![i1, cat.dual(i1)];
                let space = TreeSpace::hom(cat, &word);
                if space.dim() == 0 {
                    continue;
                }
                let mut st0 = WordState::from_vector(cat, &space.basis_vector(cat, 0));
                st0.cup(cat, 0, x);
                // word: (x, x*, i1, i1*)
                let g1 = y.braiding_inv_pair(cat, cat.dual(x), (i1, a1), (i, a))?;
                let mut st1 = st0;
                if st1.apply_pair(cat, 1, &g1).is_err() {
                    continue;
                }
                // word: (x, i, x*, i1*); psi: copy a of Y -> copy b of Z
                for &(j, b2) in &zcomps {
                    if j != i1 {
                        continue; // the closure (j, i1*) vanishes otherwise
                    }
                    let g2 = z.braiding_pair(cat, cat.dual(x), (i, b), (j, b2))?;
                    let mut st2 = WordState::from_vector(cat, &st1.to_vector(cat));
                    if st2.apply_pair(cat, 1, &g2).is_err() {
                        continue;
                    }
                    // word: (x, x*, i1, i1*)
                    if st2.cap(cat, 0).is_err() {
                        continue;
                    }
                    let out = st2.to_vector(cat);
                    if out.coords.is_empty() {
                        continue;
                    }
                    let coeff = &out.coords[0] * &cat.qdim[x];
                    let Some(row) = basis.iter().position(|&t| t == (i1, a1, b2)) else {
                        continue;
                    };
                    p[(row, col)] = &p[(row, col)] + &coeff;
                }
            }
        }
    }
    Ok(p.scale(&cat.global_dim_sq.inv()?))
}

/// Basis of `Hom_{Z(C)}(Y, Z)` as the image of the averaging projector;
/// returns the projector matrix and the selected column basis.
pub struct CenterHomSpace {
    pub projector: Matrix,
    pub basis: Vec<CenterMorphism>,
    pub dim: usize,
}

pub fn center_hom(cat: &FusionCategory, y: &CenterObject, z: &CenterObject) -> Result<CenterHomSpace> {
    let p = projector_p(cat, y, z)?;
    let labels = hom_c_basis(cat, y, z);
    let pivots = p.column_space_pivots();
    let mut basis = Vec::new();
    for &col in &pivots {
        let mut per_simple: Vec<Matrix> = (0..cat.rank())
            .map(|k| Matrix::zeros(z.underlying[k], y.underlying[k]))
            .collect();
        for (row, &(i, a, b)) in labels.iter().enumerate() {
            per_simple[i][(b, a)] = p[(row, col)].clone();
        }
        basis.push(CenterMorphism { per_simple });
    }
    let dim = basis.len();
    Ok(CenterHomSpace { projector: p, basis, dim })
}

/// The colored hom space `<V_1,...,V_n>_Y = Hom(1, Y (x) V_1 ... V_n)`,
/// expanded over the components of `Y`, together with its rotation `z_Y`.
pub struct ColoredHomSpace {
    pub components: Vec<(SimpleIx, usize)>,
    pub blocks: Vec<TreeSpace>,
    pub offsets: Vec<usize>,
    pub dim: usize,
}

pub fn colored_hom(cat: &FusionCategory, y: &CenterObject, word: &[SimpleIx]) -> ColoredHomSpace {
    let components = y.components();
    let mut blocks = Vec::new();
    let mut offsets = Vec::new();
    let mut dim = 0;
    for &(i, _) in &components {
        let mut w = vec![i];
        w.extend_from_slice(word);
        let sp = TreeSpace::hom(cat, &w);
        offsets.push(dim);
        dim += sp.dim();
        blocks.push(sp);
    }
    ColoredHomSpace { components, blocks, offsets, dim }
}

/// Matrix of the rotation `z_Y` on a colored hom space: the cyclic rotation
/// of the closed word followed by the inverse half-braiding pulling `Y`
/// back to the front.
pub fn colored_rotation(
    cat: &FusionCategory,
    y: &CenterObject,
    word: &[SimpleIx],
) -> Result<Matrix> {
    let src = colored_hom(cat, y, word);
    if word.is_empty() {
        return Ok(Matrix::identity(src.dim));
    }
    let mut rotated = vec![*word.last().unwrap()];
    rotated.extend_from_slice(&word[..word.len() - 1]);
    let dst = colored_hom(cat, y, &rotated);
    let mut m = Matrix::zeros(dst.dim, src.dim);
    for (ci, &(i, a)) in src.components.iter().enumerate() {
        for bi in 0..src.blocks[ci].dim() {
            let v = src.blocks[ci].basis_vector(cat, bi);
            let z = cyclic_rotate(cat, &v);
            // word now (w_n, i, w_1..w_{n-1}); pull Y back through w_n
            for (cj, &(j, b)) in dst.components.iter().enumerate() {
                let g = y.braiding_inv_pair(cat, *word.last().unwrap(), (i, a), (j, b))?;
                let mut st = WordState::from_vector(cat, &z);
                if st.apply_pair(cat, 0, &g).is_err() {
                    continue;
                }
                let out = st.to_vector(cat);
                for (k, val) in out.coords.iter().enumerate() {
                    m[(dst.offsets[cj] + k, src.offsets[ci] + bi)] =
                        &m[(dst.offsets[cj] + k, src.offsets[ci] + bi)] + val;
                }
            }
        }
    }
    Ok(m)
}

/// The gluing map
/// `(+)_Z <Z, A> (x) <Z*, B>  ->  (+)_X <A, X, B, X*>`
/// of the surface-gluing lemma, assembled for a supplied enumeration of the
/// simple center objects. The `sqrt(d_X d_Z)/D` normalization is applied
/// when representable in the backend and dropped otherwise (a block scaling
/// that affects neither invertibility nor dimensions).
pub struct GluingIso {
    pub matrix: Matrix,
    pub domain_dim: usize,
    pub codomain_dim: usize,
}

pub fn gluing_iso(
    cat: &FusionCategory,
    simple_centers: &[CenterObject],
    a_word: &[SimpleIx],
    b_word: &[SimpleIx],
) -> Result<GluingIso> {
    // codomain: (+)_X <A, X, B, X*>
    let mut cod_spaces = Vec::new();
    let mut cod_offsets = Vec::new();
    let mut cod_dim = 0;
    for x in 0..cat.rank() {
        let mut w = a_word.to_vec();
        w.push(x);
        w.extend_from_slice(b_word);
        w.push(cat.dual(x));
        let sp = TreeSpace::hom(cat, &w);
        cod_offsets.push(cod_dim);
        cod_dim += sp.dim();
        cod_spaces.push(sp);
    }
    // domain
    struct DomBlock {
        z: usize,
        phi_space: TreeSpace,
        psi_space: TreeSpace,
        offset: usize,
        phi_comp: (usize, usize),
        psi_comp: (usize, usize),
    }
    let mut dom_blocks: Vec<DomBlock> = Vec::new();
    let mut dom_dim = 0;
    let duals: Vec<CenterObject> =
        simple_centers.iter().map(|z| z.dual(cat)).collect::<Result<_>>()?;
    for (zi, z) in simple_centers.iter().enumerate() {
        for &(i, a) in &z.components() {
            let mut w = vec![i];
            w.extend_from_slice(a_word);
            let phi_space = TreeSpace::hom(cat, &w);
            if phi_space.dim() == 0 {
                continue;
            }
            for &(i2, a2) in &duals[zi].components() {
                let mut w2 = vec![i2];
                w2.extend_from_slice(b_word);
                let psi_space = TreeSpace::hom(cat, &w2);
                if psi_space.dim() == 0 {
                    continue;
                }
                let d = phi_space.dim() * psi_space.dim();
                dom_blocks.push(DomBlock {
                    z: zi,
                    phi_space: TreeSpace::hom(cat, &w),
                    psi_space,
                    offset: dom_dim,
                    phi_comp: (i, a),
                    psi_comp: (i2, a2),
                });
                dom_dim += d;
            }
        }
    }

    let mut m = Matrix::zeros(cod_dim, dom_dim);
    let alen = a_word.len();
    for block in &dom_blocks {
        let z = &simple_centers[block.z];
        let (i, a) = block.phi_comp;
        let (i2, a2) = block.psi_comp;
        // scale: sqrt(d_X d_Z)/D when available
        let dz = z.qdim(cat);
        for x in 0..cat.rank() {
            let scale = gluing_scale(cat, x, &dz);
            if scale.is_zero() {
                continue;
            }
            for pi in 0..block.phi_space.dim() {
                for qi in 0..block.psi_space.dim() {
                    let col = block.offset + pi * block.psi_space.dim() + qi;
                    let phi = block.phi_space.basis_vector(cat, pi);
                    let psi = block.psi_space.basis_vector(cat, qi);
                    // (i, A) -> (A, i)
                    let rot = rotate_by(cat, &phi, a_word.len());
                    let mut st = WordState::from_vector(cat, &rot);
                    st.cup(cat, alen, x);
                    // (A, X, X*, i)
                    let g = z.braiding_inv_pair(cat, cat.dual(x), (i, a), (i2_dual(cat, i2), a2))?;
                    // the inverse braiding maps (X*, i) -> (j, X*); for the
                    // cap against psi's first letter i2 we need j = i2*
                    if st.apply_pair(cat, alen + 1, &g).is_err() {
                        continue;
                    }
                    // (A, X, j, X*)
                    st.insert_closed(cat, alen + 2, &psi);
                    // (A, X, j, i2, B, X*)
                    if st.cap(cat, alen + 1).is_err() {
                        continue;
                    }
                    // (A, X, B, X*)
                    let out = st.to_vector(cat);
                    for (k, val) in out.coords.iter().enumerate() {
                        let row = cod_offsets[x] + k;
                        m[(row, col)] = &m[(row, col)] + &(val * &scale);
                    }
                }
            }
        }
    }
    Ok(GluingIso { matrix: m, domain_dim: dom_dim, codomain_dim: cod_dim })
}

fn i2_dual(cat: &FusionCategory, i2: SimpleIx) -> SimpleIx {
    cat.dual(i2)
}

fn gluing_scale(cat: &FusionCategory, x: SimpleIx, dz: &Scalar) -> Scalar {
    let sx = cat.sqrt_qdim[x].clone();
    // sqrt(d_Z): try to take it inside the backend when d_Z is a perfect
    // square of a small integer, else fall back to 1
    let sz = sqrt_in_backend(cat, dz);
    match (sx, sz, &cat.global_dim) {
        (Some(a), Some(b), Some(d)) => &(&a * &b) / d,
        (Some(a), Some(b), None) => &a * &b,
        _ => cat.one(),
    }
}

fn sqrt_in_backend(cat: &FusionCategory, v: &Scalar) -> Option<Scalar> {
    if v.is_one() {
        return Some(cat.one());
    }
    if let Some(r) = v.as_rational() {
        // integer square root attempt on numerator/denominator
        use num_traits::ToPrimitive;
        let num = r.numer().to_i64()?;
        let den = r.denom().to_i64()?;
        if num >= 0 {
            let sn = (num as f64).sqrt().round() as i64;
            let sd = (den as f64).sqrt().round() as i64;
            if sn * sn == num && sd * sd == den && sd != 0 {
                return Some(Scalar::ratio(sn, sd).promote(cat.backend).ok()?);
            }
        }
    }
    if cat.backend == crate::scalar::Backend::Complex {
        let c = v.to_c64();
        return Some(Scalar::C64(c.sqrt()));
    }
    None
}

/// Simple objects of `Z(Vec_G)`: one per (conjugacy class, irreducible
/// representation of the centralizer), built from exact character data.
pub struct VecGCenter {
    pub objects: Vec<CenterObject>,
    /// (class index, irrep index) per object.
    pub tags: Vec<(usize, usize)>,
    pub classes: Vec<Vec<usize>>,
    pub class_irreps: Vec<Vec<Irrep>>,
    /// per class: map from element to its transversal conjugator
    /// `h = t_h g t_h^{-1}`.
    pub transversal: Vec<HashMap<usize, usize>>,
}

pub fn vec_g_center_simples(cat: &FusionCategory, table: &GroupTable) -> Result<VecGCenter> {
    if cat.rank() != table.order {
        return Err(TvError::Center("category rank does not match group order".into()));
    }
    let classes = table.conjugacy_classes();
    let mut objects = Vec::new();
    let mut tags = Vec::new();
    let mut class_irreps = Vec::new();
    let mut transversal = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        let g = class[0];
        let (cz, _embed) = table.centralizer(g);
        let reps = irreps(&cz).ok_or_else(|| {
            TvError::Center(format!(
                "no exact irrep data for the centralizer of element {g}; \
                 supply center-object files"
            ))
        })?;
        // transversal
        let mut t: HashMap<usize, usize> = HashMap::new();
        for h in 0..table.order {
            let hc = table.conj(g, h);
            t.entry(hc).or_insert(h);
        }
        // re-index centralizer elements inside the big group
        let (cz_table, cz_embed) = table.centralizer(g);
        let _ = cz_table;
        for (ri, rep) in reps.iter().enumerate() {
            let deg = rep.dim;
            let mut underlying = vec![0usize; table.order];
            for &h in class {
                underlying[h] = deg;
            }
            let mut braiding = Vec::with_capacity(table.order);
            for v in 0..table.order {
                let mut blocks = HashMap::new();
                for ch in 0..table.order {
                    let ins = in_triples(cat, &underlying, v, ch);
                    let outs = out_triples(cat, &underlying, v, ch);
                    if ins.is_empty() && outs.is_empty() {
                        continue;
                    }
                    let mut m = Matrix::zeros(outs.len(), ins.len());
                    for (cix, &(h, a, _mu)) in ins.iter().enumerate() {
                        let hp = table.conj(h, table.inv(v));
                        // k = t_{h'}^{-1} v^{-1} t_h lies in C(g)
                        let k = table.mul(
                            table.mul(table.inv(t[&hp]), table.inv(v)),
                            t[&h],
                        );
                        let klocal = cz_embed
                            .iter()
                            .position(|&e| e == k)
                            .ok_or_else(|| TvError::Center("transversal error".into()))?;
                        for (rix, &(h2, b, _nu)) in outs.iter().enumerate() {
                            if h2 != hp {
                                continue;
                            }
                            m[(rix, cix)] = rep.mats[klocal][(b, a)].clone();
                        }
                    }
                    blocks.insert(ch, m);
                }
                braiding.push(CenterBraiding { blocks });
            }
            objects.push(CenterObject {
                name: format!("([g{}],pi{})", g, ri),
                underlying,
                braiding,
            });
            tags.push((ci, ri));
        }
        class_irreps.push(reps);
        transversal.push(t);
    }
    Ok(VecGCenter { objects, tags, classes, class_irreps, transversal })
}

impl VecGCenter {
    /// Character of simple `k` on a commuting pair `(a, b)`.
    pub fn character(&self, table: &GroupTable, k: usize, a: usize, b: usize) -> Scalar {
        let (ci, ri) = self.tags[k];
        if !self.classes[ci].contains(&a) {
            return Scalar::zero();
        }
        let t = self.transversal[ci][&a];
        // conjugate b into the centralizer of the class representative
        let blocal = table.mul(table.mul(table.inv(t), b), t);
        let g = self.classes[ci][0];
        let (_, embed) = table.centralizer(g);
        match embed.iter().position(|&e| e == blocal) {
            Some(pos) => self.class_irreps[ci][ri].character(pos),
            None => Scalar::zero(),
        }
    }

    /// `dim Hom_{Z(Vec_G)}(1, Y_{k_1} (x) ... (x) Y_{k_n})`. Characters of
    /// the double convolve over the group coordinate under tensor products:
    /// `chi_{V (x) W}(a, b) = sum_{a1 a2 = a} chi_V(a1,b) chi_W(a2,b)`, and
    /// the multiplicity of the trivial is the average of the character at
    /// `a = e` over `b`.
    pub fn hom_one_dim(&self, table: &GroupTable, picks: &[usize]) -> Result<usize> {
        let n = picks.len();
        let mut total = Scalar::zero();
        for b in 0..table.order {
            // sum over tuples (a_1..a_n) with product e
            let mut tuple = vec![0usize; n];
            loop {
                let mut prod_elem = 0usize;
                for &a in &tuple {
                    prod_elem = table.mul(prod_elem, a);
                }
                if prod_elem == 0 {
                    let mut prod = Scalar::one();
                    for (i, &k) in picks.iter().enumerate() {
                        prod = &prod * &self.character(table, k, tuple[i], b);
                        if prod.is_zero() {
                            break;
                        }
                    }
                    total = &total + &prod;
                }
                // odometer
                let mut i = 0;
                loop {
                    if i == n {
                        break;
                    }
                    tuple[i] += 1;
                    if tuple[i] < table.order {
                        break;
                    }
                    tuple[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
        let avg = &total / &Scalar::from_int(table.order as i64);
        let c = avg.to_c64();
        if (c.im).abs() > 1e-9 || (c.re - c.re.round()).abs() > 1e-9 {
            return Err(TvError::Center(format!("character sum is not an integer: {avg}")));
        }
        Ok(c.re.round() as usize)
    }

    pub fn dual_index(&self, table: &GroupTable, k: usize) -> usize {
        // dual of ([g], pi) corresponds to ([g^-1], conjugate pi); identify
        // it by matching characters
        let n = self.objects.len();
        'outer: for k2 in 0..n {
            for a in 0..table.order {
                for b in 0..table.order {
                    if table.mul(a, b) != table.mul(b, a) {
                        continue;
                    }
                    let lhs = self.character(table, k2, a, b);
                    let rhs = self.character(table, k, table.inv(a), table.inv(b));
                    if !lhs.approx_eq(&rhs) {
                        continue 'outer;
                    }
                }
            }
            return k2;
        }
        panic!("dual simple not found in Z(Vec_G) enumeration");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{builtin_fibonacci, builtin_vec_g};

    fn z2() -> (FusionCategory, GroupTable) {
        (builtin_vec_g("vec-z2", &GroupTable::cyclic(2)).unwrap(), GroupTable::cyclic(2))
    }

    #[test]
    fn unit_center_object_validates() {
        let (cat, _) = z2();
        let u = CenterObject::unit(&cat);
        validate_center_object(&cat, &u).unwrap();
        let fibcat = builtin_fibonacci().unwrap();
        validate_center_object(&fibcat, &CenterObject::unit(&fibcat)).unwrap();
    }

    #[test]
    fn broken_braiding_rejected() {
        let (cat, _) = z2();
        let mut u = CenterObject::unit(&cat);
        // a non-unimodular braiding entry breaks multiplicativity at (g1,g1)
        if let Some(m) = u.braiding[1].blocks.get_mut(&1) {
            m[(0, 0)] = Scalar::from_int(2);
        }
        let res = validate_center_object(&cat, &u);
        assert!(res.is_err());
        // flipping a sign instead produces the other invertible object,
        // which is again a valid half-braiding
        let mut s = CenterObject::unit(&cat);
        if let Some(m) = s.braiding[1].blocks.get_mut(&1) {
            m[(0, 0)] = -&m[(0, 0)];
        }
        validate_center_object(&cat, &s).unwrap();
    }

    #[test]
    fn d_z2_center_enumeration() {
        let (cat, table) = z2();
        let c = vec_g_center_simples(&cat, &table).unwrap();
        assert_eq!(c.objects.len(), 4);
        for y in &c.objects {
            validate_center_object(&cat, y).unwrap();
        }
        // quantum dimensions are all 1
        for y in &c.objects {
            assert!(y.qdim(&cat).is_one());
        }
    }

    #[test]
    fn d_s3_center_enumeration() {
        let table = GroupTable::s3();
        let cat = builtin_vec_g("vec-s3", &table).unwrap();
        let c = vec_g_center_simples(&cat, &table).unwrap();
        assert_eq!(c.objects.len(), 8);
        for y in &c.objects {
            validate_center_object(&cat, y).unwrap();
        }
        // sum of squared dims = |G|^2 = 36
        let mut total = Scalar::zero();
        for y in &c.objects {
            let d = y.qdim(&cat);
            total = &total + &(&d * &d);
        }
        assert!(total.approx_eq(&Scalar::from_int(36)));
    }

    #[test]
    fn induction_validates_and_adjoint_dims() {
        let (cat, _) = z2();
        // I(1): underlying = (+)_i X_i 1 X_i*: multiplicity 2 at the unit
        let mut v = vec![0usize; cat.rank()];
        v[cat.unit] = 1;
        let iv = induct(&cat, &v).unwrap();
        assert_eq!(iv.underlying[0], 2);
        assert_eq!(iv.underlying[1], 0);
        validate_center_object(&cat, &iv).unwrap();

        let fib = builtin_fibonacci().unwrap();
        let mut v = vec![0usize; 2];
        v[0] = 1;
        let iv = induct(&fib, &v).unwrap();
        // I(1) = 1 (x) 1 (x) 1 + t (x) 1 (x) t = 1 + 1 + t
        assert_eq!(iv.underlying, vec![2, 1]);
        validate_center_object(&fib, &iv).unwrap();

        // adjunction: dim Hom_{Z}(I(V), Z) = dim Hom_C(V, Z) for Z = I(1)
        let hom = center_hom(&fib, &iv, &iv).unwrap();
        // Hom_C(1, I(1) underlying) = multiplicity of unit = 2
        assert_eq!(hom.dim, 2);
    }

    #[test]
    fn projector_is_projector() {
        let (cat, table) = z2();
        let c = vec_g_center_simples(&cat, &table).unwrap();
        for y in &c.objects {
            for z in &c.objects {
                let p = projector_p(&cat, y, z).unwrap();
                let p2 = p.mul(&p);
                assert!(p2.approx_eq(&p, 1e-9), "P^2 != P");
                // simple objects: dim Hom_Z = delta
                let same = y.name == z.name;
                assert_eq!(p.rank(), usize::from(same), "{} vs {}", y.name, z.name);
                // image commutes with braidings
                let ch = center_hom(&cat, y, z).unwrap();
                for b in &ch.basis {
                    assert!(commutes_with_braiding(&cat, y, z, b));
                }
            }
        }
    }

    #[test]
    fn colored_rotation_invertible_and_unit_reduces() {
        let (cat, _) = z2();
        let u = CenterObject::unit(&cat);
        let m = colored_rotation(&cat, &u, &[1, 1]).unwrap();
        assert_eq!(m.rank(), m.rows);
        // z_Y with Y = unit has z^n = id
        let m2 = {
            let first = colored_rotation(&cat, &u, &[1, 1]).unwrap();
            let second = colored_rotation(&cat, &u, &[1, 1]).unwrap();
            second.mul(&first)
        };
        assert!(m2.approx_eq(&Matrix::identity(m2.rows), 1e-12));
    }

    #[test]
    fn colored_rotation_nontrivial_period() {
        // regression fixture: over Vec_Z2 with Y = ([g1], sign), the
        // rotation on <g0, g1>_Y squares to -1, so z_Y^n != id in general
        let (cat, table) = z2();
        let c = vec_g_center_simples(&cat, &table).unwrap();
        let y = c
            .objects
            .iter()
            .enumerate()
            .find(|(k, o)| {
                o.underlying[1] == 1 && c.character(&table, *k, 1, 1) == Scalar::from_int(-1)
            })
            .map(|(_, o)| o.clone())
            .expect("([g1], sign) exists");
        let m1 = colored_rotation(&cat, &y, &[0, 1]).unwrap();
        let m2 = colored_rotation(&cat, &y, &[1, 0]).unwrap();
        let square = m2.mul(&m1);
        let minus_one = Matrix::identity(square.rows).scale(&Scalar::from_int(-1));
        assert!(square.approx_eq(&minus_one, 1e-12), "z_Y^2 should be -1 here");
        // with the unit color the rotation is the plain one: z^2 = id
        let u = CenterObject::unit(&cat);
        let n1 = colored_rotation(&cat, &u, &[0, 1]).unwrap();
        let n2 = colored_rotation(&cat, &u, &[1, 0]).unwrap();
        assert!(n2.mul(&n1).approx_eq(&Matrix::identity(n1.cols), 1e-12));
    }

    #[test]
    fn gluing_iso_z2_unit_words() {
        let (cat, table) = z2();
        let c = vec_g_center_simples(&cat, &table).unwrap();
        let g = gluing_iso(&cat, &c.objects, &[], &[]).unwrap();
        assert_eq!(g.domain_dim, 2);
        assert_eq!(g.codomain_dim, 2);
        assert_eq!(g.matrix.rank(), 2, "gluing map must be invertible");
    }
}

/// The four simple objects of the center of Fibonacci, over the complex
/// backend: the unit, the two chiralities on underlying `t` (half-braiding
/// the R-symbol phases), and the product object on underlying `1 + t`.
pub fn fib_center_simples(cat: &FusionCategory) -> Result<Vec<CenterObject>> {
    if cat.rank() != 2 || cat.backend != crate::scalar::Backend::Complex {
        return Err(TvError::Center("needs the complex-backend Fibonacci".into()));
    }
    let r1 = Scalar::C64(num_complex::Complex64::from_polar(1.0, -4.0 * std::f64::consts::PI / 5.0));
    let rt = Scalar::C64(num_complex::Complex64::from_polar(1.0, 3.0 * std::f64::consts::PI / 5.0));
    let braid = |chiral: bool| -> PairMorphism {
        let (a, b) = if chiral {
            (r1.clone(), rt.clone())
        } else {
            (r1.inv().unwrap(), rt.inv().unwrap())
        };
        let mut blocks = HashMap::new();
        let mut m0 = Matrix::zeros(1, 1);
        m0[(0, 0)] = a;
        let mut m1 = Matrix::zeros(1, 1);
        m1[(0, 0)] = b;
        blocks.insert(0, m0);
        blocks.insert(1, m1);
        PairMorphism { from: (1, 1), to: (1, 1), blocks }
    };
    let tau_object = |chiral: bool, name: &str| -> CenterObject {
        let underlying = vec![0, 1];
        let mut braiding = Vec::new();
        for v in 0..2 {
            let mut blocks = HashMap::new();
            if v == 0 {
                blocks.insert(1, Matrix::identity(1));
            } else {
                let g = braid(chiral);
                for (c, m) in g.blocks {
                    blocks.insert(c, m);
                }
            }
            braiding.push(CenterBraiding { blocks });
        }
        CenterObject { name: name.into(), underlying, braiding }
    };
    let unit = CenterObject::unit(cat);
    let y_r = tau_object(true, "(t,1)");
    let y_l = tau_object(false, "(1,t)");

    // the product object t (x) t-bar: underlying 1 + t, half-braiding
    // (c_{t,V} (x) id) o (id (x) c^{-1}_{V,t}) extracted component-wise
    let underlying = vec![1usize, 1];
    let fwd = braid(true);
    let inv = braid(false); // phases inverted = c^{-1} blocks for (t,t)
    let mut braiding = Vec::new();
    for v in 0..2 {
        let mut blocks = HashMap::new();
        for ch in 0..2 {
            let ins = in_triples(cat, &underlying, v, ch);
            let outs = out_triples(cat, &underlying, v, ch);
            if ins.is_empty() && outs.is_empty() {
                continue;
            }
            let mut m = Matrix::zeros(outs.len(), ins.len());
            for (ci, &(i, _a, mu)) in ins.iter().enumerate() {
                // start from <i, v, ch*> with channel ch index mu
                let word = vec![i, v, cat.dual(ch)];
                let space = TreeSpace::hom(cat, &word);
                let Some(b0) =
                    space.basis.iter().position(|p| p.channels[1] == ch && p.mults[1] == mu)
                else {
                    continue;
                };
                let mut st = WordState::from_vector(cat, &space.basis_vector(cat, b0));
                // unfuse the component letter into (t, t)
                st.unfuse(cat, 0, 1, 1, 0);
                // word (t, t, v, ch*): inverse braiding on (B=t, v)
                if v == 1 {
                    if st.apply_pair(cat, 1, &inv).is_err() {
                        continue;
                    }
                    // word (t, v, t, ch*): forward braiding on (A=t, v)
                    if st.apply_pair(cat, 0, &fwd).is_err() {
                        continue;
                    }
                } else {
                    // unit v: braidings are identities; reorder letters by
                    // fusing/unfusing through the unit
                    // (t, t, 1, ch*) -> (1, t, t, ch*) is trivial up to the
                    // unit letter position; handle by moving the unit via
                    // fuse/unfuse of adjacent pairs
                    // simpler: v = 0 braiding of any object is the identity
                    // on components; fill directly
                }
                if v == 0 {
                    // identity: out-triple equals in-triple
                    if let Some(ri) = outs.iter().position(|&t| t == (i, 0, mu)) {
                        m[(ri, ci)] = cat.one();
                    }
                    continue;
                }
                // word (v, t, t, ch*): fuse the (t,t) pair into components
                for (j, rho, s2) in st.fuse_split(cat, 1) {
                    if rho != 0 {
                        continue;
                    }
                    let out_vec = s2.to_vector(cat);
                    let out_space = TreeSpace::hom(cat, &[v, j, cat.dual(ch)]);
                    for nu in 0..cat.n(v, j, ch) {
                        let Some(bi) = out_space
                            .basis
                            .iter()
                            .position(|p| p.channels[1] == ch && p.mults[1] == nu)
                        else {
                            continue;
                        };
                        let Some(ri) = outs.iter().position(|&t| t == (j, 0, nu)) else {
                            continue;
                        };
                        m[(ri, ci)] = &m[(ri, ci)] + &out_vec.coords[bi];
                    }
                }
            }
            blocks.insert(ch, m);
        }
        braiding.push(CenterBraiding { blocks });
    }
    let y_d = CenterObject { name: "(t,t)".into(), underlying, braiding };

    for y in [&unit, &y_r, &y_l, &y_d] {
        validate_center_object(cat, y)?;
    }
    Ok(vec![unit, y_r, y_l, y_d])
}

#[cfg(test)]
mod fib_center_tests {
    use super::*;
    use crate::category::builtin_fibonacci_complex;

    #[test]
    fn fib_center_validates_and_glues() {
        let cat = builtin_fibonacci_complex().unwrap();
        let simples = fib_center_simples(&cat).unwrap();
        assert_eq!(simples.len(), 4);
        // global dimension of the center = D^4 = (sum d_i^2)^2
        let mut total = Scalar::zero();
        for y in &simples {
            let d = y.qdim(&cat);
            total = &total + &(&d * &d);
        }
        let dd = &cat.global_dim_sq * &cat.global_dim_sq;
        assert!(total.approx_eq(&dd), "sum d_Z^2 = D^4");
        // gluing isomorphism with the supplied center data is invertible
        let g = gluing_iso(&cat, &simples, &[], &[]).unwrap();
        assert_eq!(g.domain_dim, g.codomain_dim);
        assert_eq!(g.matrix.rank(), g.domain_dim, "gluing map invertible");
        let g2 = gluing_iso(&cat, &simples, &[1], &[1]).unwrap();
        assert_eq!(g2.domain_dim, g2.codomain_dim);
        assert_eq!(g2.matrix.rank(), g2.domain_dim);
    }
}
