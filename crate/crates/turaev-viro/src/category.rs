//! Spherical fusion category data: simple labels, fusion multiplicities,
//! quantum dimensions with fixed square roots, F-symbols, and the duality
//! coefficients the graphical calculus needs.
//!
//! All data is validated at construction: unit fusion rules, dual
//! involution, dimension consistency, the pentagon identity on every
//! admissible sextet, and the sphericity conditions tying the cup/cap
//! normalizations to `F` and the quantum dimensions.

use crate::error::{Result, TvError};
use crate::group::GroupTable;
use crate::matrix::Matrix;
use crate::scalar::{Backend, Scalar};
use num_rational::BigRational;
use std::collections::HashMap;

/// Index of a simple object.
pub type SimpleIx = usize;

#[derive(Debug, Clone)]
pub struct SimpleLabel {
    pub index: SimpleIx,
    pub name: String,
    pub dual: SimpleIx,
}

/// Validated spherical fusion category data.
#[derive(Debug, Clone)]
pub struct FusionCategory {
    pub name: String,
    pub backend: Backend,
    pub simples: Vec<SimpleLabel>,
    pub unit: SimpleIx,
    fusion: Vec<usize>,
    pub qdim: Vec<Scalar>,
    /// Chosen square roots; absent entries mean the root does not exist in
    /// the backend field (operations that need it report an error).
    pub sqrt_qdim: Vec<Option<Scalar>>,
    pub global_dim_sq: Scalar,
    pub global_dim: Option<Scalar>,
    fmats: HashMap<(SimpleIx, SimpleIx, SimpleIx, SimpleIx), Matrix>,
    finv: HashMap<(SimpleIx, SimpleIx, SimpleIx, SimpleIx), Matrix>,
    /// Coefficient of `coev_a` against the fusion-tree basis of <a, a*>.
    pub cup_coeff: Vec<Scalar>,
    /// Coefficient of `ev_a : a* (x) a -> 1` against the dual basis.
    pub cap_coeff: Vec<Scalar>,
}

/// Raw, not yet validated category data as read from a file or builder.
#[derive(Debug, Clone)]
pub struct RawCategory {
    pub name: String,
    pub backend: Backend,
    pub simple_names: Vec<String>,
    pub dual: Vec<SimpleIx>,
    pub unit: SimpleIx,
    pub fusion: HashMap<(SimpleIx, SimpleIx, SimpleIx), usize>,
    pub qdim: Vec<Scalar>,
    pub sqrt_qdim: Vec<Option<Scalar>>,
    pub global_dim: Option<Scalar>,
    /// entries (a,b,c,d, mu,nu,rho,sigma, e,f) -> value, in the convention
    /// (Y^{ab}_{e;mu} (x) id_c) Y^{ec}_{d;nu}
    ///   = sum F[(e,mu,nu),(f,rho,sigma)] (id_a (x) Y^{bc}_{f;rho}) Y^{af}_{d;sigma}
    pub fentries: Vec<FEntry>,
}

#[derive(Debug, Clone)]
pub struct FEntry {
    pub a: SimpleIx,
    pub b: SimpleIx,
    pub c: SimpleIx,
    pub d: SimpleIx,
    pub e: SimpleIx,
    pub f: SimpleIx,
    pub mu: usize,
    pub nu: usize,
    pub rho: usize,
    pub sigma: usize,
    pub value: Scalar,
}

impl FusionCategory {
    pub fn rank(&self) -> usize {
        self.simples.len()
    }

    pub fn n(&self, a: SimpleIx, b: SimpleIx, c: SimpleIx) -> usize {
        let r = self.rank();
        self.fusion[(a * r + b) * r + c]
    }

    pub fn dual(&self, a: SimpleIx) -> SimpleIx {
        self.simples[a].dual
    }

    pub fn is_unit(&self, a: SimpleIx) -> bool {
        a == self.unit
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero().promote(self.backend).unwrap()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one().promote(self.backend).unwrap()
    }

    pub fn sqrt_qdim_req(&self, a: SimpleIx) -> Result<Scalar> {
        self.sqrt_qdim[a].clone().ok_or_else(|| {
            TvError::SquareRoot(format!(
                "sqrt of quantum dimension of `{}` is not representable in backend {}",
                self.simples[a].name, self.backend
            ))
        })
    }

    /// Row index set of `F[a,b,c;d]`: triples `(e, mu, nu)` with
    /// `mu < N(a,b;e)`, `nu < N(e,c;d)`, lexicographically ordered.
    pub fn lhs_triples(&self, a: SimpleIx, b: SimpleIx, c: SimpleIx, d: SimpleIx) -> Vec<(SimpleIx, usize, usize)> {
        let mut out = Vec::new();
        for e in 0..self.rank() {
            let m = self.n(a, b, e);
            let n = self.n(e, c, d);
            for mu in 0..m {
                for nu in 0..n {
                    out.push((e, mu, nu));
                }
            }
        }
        out
    }

    /// Column index set of `F[a,b,c;d]`: triples `(f, rho, sigma)` with
    /// `rho < N(b,c;f)`, `sigma < N(a,f;d)`.
    pub fn rhs_triples(&self, a: SimpleIx, b: SimpleIx, c: SimpleIx, d: SimpleIx) -> Vec<(SimpleIx, usize, usize)> {
        let mut out = Vec::new();
        for f in 0..self.rank() {
            let m = self.n(b, c, f);
            let n = self.n(a, f, d);
            for rho in 0..m {
                for sigma in 0..n {
                    out.push((f, rho, sigma));
                }
            }
        }
        out
    }

    fn unit_f(&self, a: SimpleIx, b: SimpleIx, c: SimpleIx, d: SimpleIx) -> Option<Matrix> {
        if a != self.unit && b != self.unit && c != self.unit {
            return None;
        }
        let n = self.lhs_triples(a, b, c, d).len();
        debug_assert_eq!(n, self.rhs_triples(a, b, c, d).len());
        Some(Matrix::identity(n))
    }

    /// The F-matrix for the quadruple, rows indexed by [`Self::lhs_triples`],
    /// columns by [`Self::rhs_triples`]. Quadruples with a unit argument are
    /// identity matrices by the gauge normalization.
    pub fn f_matrix(&self, a: SimpleIx, b: SimpleIx, c: SimpleIx, d: SimpleIx) -> Matrix {
        if let Some(m) = self.unit_f(a, b, c, d) {
            return m;
        }
        if let Some(m) = self.fmats.get(&(a, b, c, d)) {
            return m.clone();
        }
        let n = self.lhs_triples(a, b, c, d).len();
        Matrix::zeros(n, n)
    }

    pub fn f_inv(&self, a: SimpleIx, b: SimpleIx, c: SimpleIx, d: SimpleIx) -> Matrix {
        if let Some(m) = self.unit_f(a, b, c, d) {
            return m;
        }
        if let Some(m) = self.finv.get(&(a, b, c, d)) {
            return m.clone();
        }
        let n = self.lhs_triples(a, b, c, d).len();
        Matrix::zeros(n, n)
    }

    pub fn simple_by_name(&self, name: &str) -> Option<SimpleIx> {
        self.simples.iter().position(|s| s.name == name)
    }

    /// Validate raw data and derive the duality coefficients.
    pub fn from_raw(raw: RawCategory) -> Result<FusionCategory> {
        let r = raw.simple_names.len();
        if raw.dual.len() != r || raw.qdim.len() != r || raw.sqrt_qdim.len() != r {
            return Err(TvError::Category("per-simple arrays have inconsistent lengths".into()));
        }
        if raw.unit >= r {
            return Err(TvError::Category("unit index out of range".into()));
        }
        for (i, &d) in raw.dual.iter().enumerate() {
            if d >= r {
                return Err(TvError::Category(format!("dual index of simple {i} out of range")));
            }
            if raw.dual[d] != i {
                return Err(TvError::Category(format!("dual is not an involution at {i}")));
            }
        }
        if raw.dual[raw.unit] != raw.unit {
            return Err(TvError::Category("dual(unit) != unit".into()));
        }

        let mut fusion = vec![0usize; r * r * r];
        for (&(a, b, c), &m) in &raw.fusion {
            if a >= r || b >= r || c >= r {
                return Err(TvError::Category("fusion index out of range".into()));
            }
            fusion[(a * r + b) * r + c] = m;
        }
        let n = |a: usize, b: usize, c: usize| fusion[(a * r + b) * r + c];

        // unit rules and dual fusion rule
        for j in 0..r {
            for k in 0..r {
                let expect = usize::from(j == k);
                if n(raw.unit, j, k) != expect || n(j, raw.unit, k) != expect {
                    return Err(TvError::UnitFusion(format!(
                        "N(1,{j};{k}) or N({j},1;{k}) != {expect}"
                    )));
                }
            }
            for i in 0..r {
                let expect = usize::from(j == raw.dual[i]);
                if n(i, j, raw.unit) != expect {
                    return Err(TvError::UnitFusion(format!(
                        "N({i},{j};1) = {}, expected {expect}",
                        n(i, j, raw.unit)
                    )));
                }
            }
        }
        // pivotal symmetries of the fusion multiplicities
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    if n(a, b, c) != n(b, raw.dual[c], raw.dual[a]) {
                        return Err(TvError::Category(format!(
                            "fusion table breaks cyclic duality at ({a},{b};{c})"
                        )));
                    }
                    if n(a, b, c) != n(raw.dual[b], raw.dual[a], raw.dual[c]) {
                        return Err(TvError::Category(format!(
                            "fusion table breaks reversal duality at ({a},{b};{c})"
                        )));
                    }
                }
            }
        }

        // scalar backends and dimension data
        let backend = raw.backend;
        let promote = |s: &Scalar| -> Result<Scalar> { s.promote(backend) };
        let qdim: Vec<Scalar> = raw.qdim.iter().map(promote).collect::<Result<_>>()?;
        let mut sqrt_qdim: Vec<Option<Scalar>> = Vec::with_capacity(r);
        for s in &raw.sqrt_qdim {
            sqrt_qdim.push(match s {
                Some(v) => Some(promote(v)?),
                None => None,
            });
        }
        for i in 0..r {
            if qdim[i].is_zero() {
                return Err(TvError::DimensionInconsistency(format!("d_{i} = 0")));
            }
            if qdim[i] != qdim[raw.dual[i]] {
                return Err(TvError::DimensionInconsistency(format!("d_{i} != d_{{{i}*}}")));
            }
            if let Some(s) = &sqrt_qdim[i] {
                if &(s * s) != &qdim[i] {
                    return Err(TvError::SquareRoot(format!("sqrt_qdim({i})^2 != d_{i}")));
                }
                match &sqrt_qdim[raw.dual[i]] {
                    Some(sd) if sd == s => {}
                    _ => {
                        return Err(TvError::SquareRoot(format!(
                            "sqrt_qdim({i}) inconsistent with its dual"
                        )))
                    }
                }
            }
        }
        if !qdim[raw.unit].is_one() {
            return Err(TvError::DimensionInconsistency("d_1 != 1".into()));
        }
        match &sqrt_qdim[raw.unit] {
            Some(s) if s.is_one() => {}
            _ => return Err(TvError::SquareRoot("sqrt_qdim(unit) must be 1".into())),
        }
        // d_a d_b = sum_c N(a,b;c) d_c
        for a in 0..r {
            for b in 0..r {
                let mut rhs = Scalar::zero().promote(backend)?;
                for c in 0..r {
                    for _ in 0..n(a, b, c) {
                        rhs = &rhs + &qdim[c];
                    }
                }
                if rhs != &qdim[a] * &qdim[b] {
                    return Err(TvError::DimensionInconsistency(format!(
                        "d_{a} d_{b} != sum N d at ({a},{b})"
                    )));
                }
            }
        }
        let mut dd = Scalar::zero().promote(backend)?;
        for d in &qdim {
            dd = &dd + &(d * d);
        }
        if dd.is_zero() {
            return Err(TvError::DimensionInconsistency("global dimension D^2 = 0".into()));
        }
        let global_dim = match &raw.global_dim {
            Some(g) => {
                let g = promote(g)?;
                if !(&g * &g).approx_eq(&dd) {
                    return Err(TvError::DimensionInconsistency("global_dim^2 != sum d_i^2".into()));
                }
                Some(g)
            }
            None => None,
        };

        // assemble F-matrices
        let simples: Vec<SimpleLabel> = raw
            .simple_names
            .iter()
            .enumerate()
            .map(|(i, name)| SimpleLabel { index: i, name: name.clone(), dual: raw.dual[i] })
            .collect();
        let mut cat = FusionCategory {
            name: raw.name,
            backend,
            simples,
            unit: raw.unit,
            fusion,
            qdim,
            sqrt_qdim,
            global_dim_sq: dd,
            global_dim,
            fmats: HashMap::new(),
            finv: HashMap::new(),
            cup_coeff: Vec::new(),
            cap_coeff: Vec::new(),
        };

        let mut grouped: HashMap<(usize, usize, usize, usize), Vec<&FEntry>> = HashMap::new();
        for e in &raw.fentries {
            grouped.entry((e.a, e.b, e.c, e.d)).or_default().push(e);
        }
        for (&(a, b, c, d), entries) in &grouped {
            let rows = cat.lhs_triples(a, b, c, d);
            let cols = cat.rhs_triples(a, b, c, d);
            if rows.len() != cols.len() {
                return Err(TvError::DimensionInconsistency(format!(
                    "F block ({a},{b},{c};{d}) is {}x{}",
                    rows.len(),
                    cols.len()
                )));
            }
            let mut m = Matrix::zeros(rows.len(), cols.len());
            for e in entries {
                let ri = rows
                    .iter()
                    .position(|&t| t == (e.e, e.mu, e.nu))
                    .ok_or_else(|| TvError::Category(format!("F row ({},{},{}) inadmissible", e.e, e.mu, e.nu)))?;
                let ci = cols
                    .iter()
                    .position(|&t| t == (e.f, e.rho, e.sigma))
                    .ok_or_else(|| TvError::Category(format!("F col ({},{},{}) inadmissible", e.f, e.rho, e.sigma)))?;
                m[(ri, ci)] = promote(&e.value)?;
            }
            if a == cat.unit || b == cat.unit || c == cat.unit {
                if !m.approx_eq(&Matrix::identity(rows.len()), 1e-12) {
                    return Err(TvError::Category(format!(
                        "F with a unit argument must be the identity at ({a},{b},{c};{d})"
                    )));
                }
                continue; // synthesized on access
            }
            cat.fmats.insert((a, b, c, d), m);
        }
        // every admissible non-unit quadruple must have an invertible matrix
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    if a == cat.unit || b == cat.unit || c == cat.unit {
                        continue;
                    }
                    for d in 0..r {
                        let dim = cat.lhs_triples(a, b, c, d).len();
                        if dim == 0 {
                            continue;
                        }
                        let m = cat.fmats.get(&(a, b, c, d)).ok_or_else(|| {
                            TvError::Category(format!("missing F block ({a},{b},{c};{d})"))
                        })?;
                        let inv = m.inverse().map_err(|_| {
                            TvError::Category(format!("F block ({a},{b},{c};{d}) not invertible"))
                        })?;
                        cat.finv.insert((a, b, c, d), inv);
                    }
                }
            }
        }

        cat.check_pentagon()?;
        cat.derive_duality()?;
        Ok(cat)
    }

    /// Pentagon identity on all admissible sextets.
    fn check_pentagon(&self) -> Result<()> {
        let r = self.rank();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        for t in 0..r {
                            self.pentagon_at(a, b, c, d, t)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn pentagon_at(&self, a: usize, b: usize, c: usize, d: usize, t: usize) -> Result<()> {
        // Left comb basis: ab->f (m1), fc->g (m2), gd->t (m3).
        // Right comb basis: cd->l (n1), bl->k (n2), ak->t (n3).
        // Path I:  F[f,c,d;t] then F[a,b,l;t].
        // Path II: F[a,b,c;g], F[a,h,d;t], F[b,c,d;k].
        let lefts: Vec<(usize, usize, usize, usize, usize)> = {
            let mut v = Vec::new();
            for f in 0..self.rank() {
                for g in 0..self.rank() {
                    for m1 in 0..self.n(a, b, f) {
                        for m2 in 0..self.n(f, c, g) {
                            for m3 in 0..self.n(g, d, t) {
                                v.push((f, g, m1, m2, m3));
                            }
                        }
                    }
                }
            }
            v
        };
        if lefts.is_empty() {
            return Ok(());
        }
        let rights: Vec<(usize, usize, usize, usize, usize)> = {
            let mut v = Vec::new();
            for l in 0..self.rank() {
                for k in 0..self.rank() {
                    for n1 in 0..self.n(c, d, l) {
                        for n2 in 0..self.n(b, l, k) {
                            for n3 in 0..self.n(a, k, t) {
                                v.push((l, k, n1, n2, n3));
                            }
                        }
                    }
                }
            }
            v
        };

        for &(f, g, m1, m2, m3) in &lefts {
            for &(l, k, n1, n2, n3) in &rights {
                // Path I
                let f1 = self.f_matrix(f, c, d, t);
                let rows1 = self.lhs_triples(f, c, d, t);
                let cols1 = self.rhs_triples(f, c, d, t);
                let f2 = self.f_matrix(a, b, l, t);
                let rows2 = self.lhs_triples(a, b, l, t);
                let cols2 = self.rhs_triples(a, b, l, t);
                let mut path1 = self.zero();
                let r1 = rows1.iter().position(|&x| x == (g, m2, m3));
                let c2t = cols2.iter().position(|&x| x == (k, n2, n3));
                if let (Some(r1), Some(c2t)) = (r1, c2t) {
                    for sigma in 0..self.n(f, l, t) {
                        let c1 = cols1.iter().position(|&x| x == (l, n1, sigma)).unwrap();
                        let r2 = rows2.iter().position(|&x| x == (f, m1, sigma)).unwrap();
                        path1 = &path1 + &(&f1[(r1, c1)] * &f2[(r2, c2t)]);
                    }
                }
                // Path II
                let mut path2 = self.zero();
                let fa = self.f_matrix(a, b, c, g);
                let rows_a = self.lhs_triples(a, b, c, g);
                let cols_a = self.rhs_triples(a, b, c, g);
                if let Some(ra) = rows_a.iter().position(|&x| x == (f, m1, m2)) {
                    for h in 0..self.rank() {
                        for p1 in 0..self.n(b, c, h) {
                            for p2 in 0..self.n(a, h, g) {
                                let ca = cols_a.iter().position(|&x| x == (h, p1, p2)).unwrap();
                                if fa[(ra, ca)].is_zero() {
                                    continue;
                                }
                                let fb = self.f_matrix(a, h, d, t);
                                let rows_b = self.lhs_triples(a, h, d, t);
                                let cols_b = self.rhs_triples(a, h, d, t);
                                let rb = match rows_b.iter().position(|&x| x == (g, p2, m3)) {
                                    Some(x) => x,
                                    None => continue,
                                };
                                for p3 in 0..self.n(h, d, k) {
                                    let cb = match cols_b.iter().position(|&x| x == (k, p3, n3)) {
                                        Some(x) => x,
                                        None => continue,
                                    };
                                    if fb[(rb, cb)].is_zero() {
                                        continue;
                                    }
                                    let fc = self.f_matrix(b, c, d, k);
                                    let rows_c = self.lhs_triples(b, c, d, k);
                                    let cols_c = self.rhs_triples(b, c, d, k);
                                    let rc = match rows_c.iter().position(|&x| x == (h, p1, p3)) {
                                        Some(x) => x,
                                        None => continue,
                                    };
                                    let cc = match cols_c.iter().position(|&x| x == (l, n1, n2)) {
                                        Some(x) => x,
                                        None => continue,
                                    };
                                    path2 = &path2
                                        + &(&(&fa[(ra, ca)] * &fb[(rb, cb)]) * &fc[(rc, cc)]);
                                }
                            }
                        }
                    }
                }
                if !path1.approx_eq(&path2) {
                    return Err(TvError::Pentagon { a, b, c, d, e: t, f });
                }
            }
        }
        Ok(())
    }

    /// Derive cup/cap coefficients from `F` and check sphericity.
    ///
    /// With `f_a` the unit-unit entry of `F[a,a*,a;a]` the zigzag equations
    /// force `cap_a = 1/(cup_a f_a)`; left and right traces agree for every
    /// simple exactly when `f_a f_{a*} = 1/d_a^2`, with `d_a f_a = 1` for
    /// self-dual `a`.
    fn derive_duality(&mut self) -> Result<()> {
        let r = self.rank();
        let mut fval = Vec::with_capacity(r);
        for a in 0..r {
            let ad = self.dual(a);
            let rows = self.lhs_triples(a, ad, a, a);
            let cols = self.rhs_triples(a, ad, a, a);
            let ri = rows
                .iter()
                .position(|&(e, _, _)| e == self.unit)
                .ok_or_else(|| TvError::Category(format!("no unit channel in F[{a},{a}*,{a};{a}]")))?;
            let ci = cols.iter().position(|&(f, _, _)| f == self.unit).unwrap();
            let m = self.f_matrix(a, ad, a, a);
            let fa = m[(ri, ci)].clone();
            if fa.is_zero() {
                return Err(TvError::Category(format!(
                    "sphericity: unit F entry vanishes for simple {a}"
                )));
            }
            // zigzag pair consistency against the inverse matrix on the dual
            let minv = self.f_inv(ad, a, ad, ad);
            let rows_d = self.rhs_triples(ad, a, ad, ad);
            let cols_d = self.lhs_triples(ad, a, ad, ad);
            let rdi = rows_d.iter().position(|&(f, _, _)| f == self.unit).unwrap();
            let cdi = cols_d.iter().position(|&(e, _, _)| e == self.unit).unwrap();
            if !minv[(rdi, cdi)].approx_eq(&fa) {
                return Err(TvError::Category(format!(
                    "sphericity: zigzag pair mismatch for simple {a}"
                )));
            }
            fval.push(fa);
        }
        for a in 0..r {
            let ad = self.dual(a);
            let prod = &fval[a] * &fval[ad];
            let expect = (&self.qdim[a] * &self.qdim[a]).inv()?;
            if !prod.approx_eq(&expect) {
                return Err(TvError::Category(format!(
                    "sphericity: left/right traces disagree for simple {a} (f_a f_a* != 1/d^2)"
                )));
            }
            if a == ad {
                let k = &self.qdim[a] * &fval[a];
                if !k.approx_eq(&self.one()) {
                    return Err(TvError::Category(format!(
                        "pivotal normalization for self-dual simple {a} requires d*F = +1 (got {k}); \
                         this gauge is unsupported"
                    )));
                }
            }
        }
        let mut cup = vec![self.one(); r];
        let mut cap = vec![self.one(); r];
        for a in 0..r {
            let ad = self.dual(a);
            if a <= ad {
                cup[a] = self.one();
                cup[ad] = &self.qdim[a] * &fval[a];
            }
        }
        for a in 0..r {
            cap[a] = (&cup[a] * &fval[a]).inv()?;
        }
        // sanity: loops close to d on both sides
        for a in 0..r {
            let ad = self.dual(a);
            debug_assert!((&cap[ad] * &cup[a]).approx_eq(&self.qdim[a]));
            debug_assert!((&cap[a] * &cup[ad]).approx_eq(&self.qdim[a]));
        }
        self.cup_coeff = cup;
        self.cap_coeff = cap;
        Ok(())
    }
}

/// `Vec_G` for a finite group: simples are group elements, fusion is the
/// group law, every F-symbol is 1, exact rational backend.
pub fn builtin_vec_g(name: &str, table: &GroupTable) -> Result<FusionCategory> {
    let n = table.order;
    let mut fusion = HashMap::new();
    let mut fentries = Vec::new();
    for a in 0..n {
        for b in 0..n {
            fusion.insert((a, b, table.mul(a, b)), 1);
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a == 0 || b == 0 || c == 0 {
                    continue;
                }
                let ab = table.mul(a, b);
                let bc = table.mul(b, c);
                let d = table.mul(ab, c);
                fentries.push(FEntry {
                    a,
                    b,
                    c,
                    d,
                    e: ab,
                    f: bc,
                    mu: 0,
                    nu: 0,
                    rho: 0,
                    sigma: 0,
                    value: Scalar::one(),
                });
            }
        }
    }
    FusionCategory::from_raw(RawCategory {
        name: name.to_string(),
        backend: Backend::Rational,
        simple_names: (0..n).map(|i| format!("g{i}")).collect(),
        dual: (0..n).map(|i| table.inv(i)).collect(),
        unit: 0,
        fusion,
        qdim: vec![Scalar::one(); n],
        sqrt_qdim: vec![Some(Scalar::one()); n],
        global_dim: None,
        fentries,
    })
}

/// The Fibonacci category over `Q(sqrt 5)`, in a gauge whose F-matrix is
/// rational over the field:
///
/// ```text
/// F[t,t,t;t] = [ 1/phi   1    ]
///              [ 1/phi  -1/phi]
/// ```
pub fn builtin_fibonacci() -> Result<FusionCategory> {
    let half = BigRational::new(1.into(), 2.into());
    let phi = Scalar::quad(5, half.clone(), half.clone());
    let phi_inv = phi.inv().unwrap();
    let mut fusion = HashMap::new();
    fusion.insert((0, 0, 0), 1);
    fusion.insert((0, 1, 1), 1);
    fusion.insert((1, 0, 1), 1);
    fusion.insert((1, 1, 0), 1);
    fusion.insert((1, 1, 1), 1);
    let entry = |d: usize, e: usize, f: usize, value: Scalar| FEntry {
        a: 1,
        b: 1,
        c: 1,
        d,
        e,
        f,
        mu: 0,
        nu: 0,
        rho: 0,
        sigma: 0,
        value,
    };
    let fentries = vec![
        entry(1, 0, 0, phi_inv.clone()),
        entry(1, 0, 1, Scalar::one()),
        entry(1, 1, 0, phi_inv.clone()),
        entry(1, 1, 1, -&phi_inv),
        entry(0, 1, 1, Scalar::one()),
    ];
    FusionCategory::from_raw(RawCategory {
        name: "fibonacci".to_string(),
        backend: Backend::Quad(5),
        simple_names: vec!["1".to_string(), "t".to_string()],
        dual: vec![0, 1],
        unit: 0,
        fusion,
        qdim: vec![Scalar::one(), phi],
        sqrt_qdim: vec![Some(Scalar::one()), None],
        global_dim: None,
        fentries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vec_z2_loads() {
        let cat = builtin_vec_g("vec-z2", &GroupTable::cyclic(2)).unwrap();
        assert_eq!(cat.rank(), 2);
        assert_eq!(cat.global_dim_sq, Scalar::from_int(2));
        assert_eq!(cat.n(1, 1, 0), 1);
        assert_eq!(cat.n(1, 1, 1), 0);
    }

    #[test]
    fn vec_s3_loads() {
        let cat = builtin_vec_g("vec-s3", &GroupTable::s3()).unwrap();
        assert_eq!(cat.rank(), 6);
        assert_eq!(cat.global_dim_sq, Scalar::from_int(6));
    }

    #[test]
    fn fibonacci_loads_and_pentagon_holds() {
        let cat = builtin_fibonacci().unwrap();
        let half = BigRational::new(1.into(), 2.into());
        let phi = Scalar::quad(5, half.clone(), half.clone());
        assert_eq!(cat.qdim[1], phi);
        // defining relation d^2 = d + 1 exactly
        assert_eq!(&cat.qdim[1] * &cat.qdim[1], &cat.qdim[1] + &Scalar::one());
        // D^2 = (5 + sqrt5)/2
        let expected = Scalar::quad(5, BigRational::new(5.into(), 2.into()), half);
        assert_eq!(cat.global_dim_sq, expected);
    }

    #[test]
    fn corrupt_pentagon_detected() {
        // flip a sign in the Fibonacci F-matrix
        let half = BigRational::new(1.into(), 2.into());
        let phi = Scalar::quad(5, half.clone(), half.clone());
        let phi_inv = phi.inv().unwrap();
        let mut fusion = HashMap::new();
        fusion.insert((0, 0, 0), 1);
        fusion.insert((0, 1, 1), 1);
        fusion.insert((1, 0, 1), 1);
        fusion.insert((1, 1, 0), 1);
        fusion.insert((1, 1, 1), 1);
        let entry = |e: usize, f: usize, value: Scalar| FEntry {
            a: 1, b: 1, c: 1, d: 1, e, f, mu: 0, nu: 0, rho: 0, sigma: 0, value,
        };
        let fentries = vec![
            entry(0, 0, phi_inv.clone()),
            entry(0, 1, Scalar::one()),
            entry(1, 0, -&phi_inv),
            entry(1, 1, -&phi_inv),
        ];
        let res = FusionCategory::from_raw(RawCategory {
            name: "bad-fib".to_string(),
            backend: Backend::Quad(5),
            simple_names: vec!["1".to_string(), "t".to_string()],
            dual: vec![0, 1],
            unit: 0,
            fusion,
            qdim: vec![Scalar::one(), phi],
            sqrt_qdim: vec![Some(Scalar::one()), None],
            global_dim: None,
            fentries,
        });
        assert!(matches!(res, Err(TvError::Pentagon { .. }) | Err(TvError::Category(_))));
    }

    #[test]
    fn unit_fusion_violation_detected() {
        let mut fusion = HashMap::new();
        fusion.insert((0, 0, 0), 0usize); // N(1,1;1) = 0
        let res = FusionCategory::from_raw(RawCategory {
            name: "bad".into(),
            backend: Backend::Rational,
            simple_names: vec!["1".into()],
            dual: vec![0],
            unit: 0,
            fusion,
            qdim: vec![Scalar::one()],
            sqrt_qdim: vec![Some(Scalar::one())],
            global_dim: None,
            fentries: vec![],
        });
        assert!(matches!(res, Err(TvError::UnitFusion(_))));
    }

    #[test]
    fn duality_coefficients_vec_g() {
        let cat = builtin_vec_g("vec-s3", &GroupTable::s3()).unwrap();
        for a in 0..cat.rank() {
            assert!(cat.cup_coeff[a].is_one());
            assert!(cat.cap_coeff[a].is_one());
        }
    }

    #[test]
    fn duality_coefficients_fibonacci() {
        let cat = builtin_fibonacci().unwrap();
        // cup_t = 1, cap_t = 1/f_t = phi
        assert!(cat.cup_coeff[1].is_one());
        assert_eq!(cat.cap_coeff[1], cat.qdim[1]);
    }

    #[test]
    fn fibonacci_dimension_from_pentagon_oracle() {
        // Independent oracle: for fusion rules t(x)t = 1+t and a symmetric
        // unitary ansatz F = [[x, y],[y, -x]], the pentagon forces
        // x = 1/d with d^2 = d + 1. Solve numerically and compare.
        let mut d = 1.5f64;
        for _ in 0..60 {
            d = (d * d + 1.0) / (2.0 * d - 1.0); // Newton on d^2 - d - 1
        }
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((d - phi).abs() < 1e-12);
        let cat = builtin_fibonacci().unwrap();
        assert!((cat.qdim[1].to_c64().re - phi).abs() < 1e-12);
    }
}

/// Fibonacci over complex doubles, with numeric square roots and global
/// dimension available.
pub fn builtin_fibonacci_complex() -> Result<FusionCategory> {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut fusion = HashMap::new();
    fusion.insert((0, 0, 0), 1);
    fusion.insert((0, 1, 1), 1);
    fusion.insert((1, 0, 1), 1);
    fusion.insert((1, 1, 0), 1);
    fusion.insert((1, 1, 1), 1);
    let entry = |d: usize, e: usize, f: usize, value: Scalar| FEntry {
        a: 1,
        b: 1,
        c: 1,
        d,
        e,
        f,
        mu: 0,
        nu: 0,
        rho: 0,
        sigma: 0,
        value,
    };
    let fentries = vec![
        entry(1, 0, 0, Scalar::complex(1.0 / phi, 0.0)),
        entry(1, 0, 1, Scalar::complex(1.0, 0.0)),
        entry(1, 1, 0, Scalar::complex(1.0 / phi, 0.0)),
        entry(1, 1, 1, Scalar::complex(-1.0 / phi, 0.0)),
        entry(0, 1, 1, Scalar::complex(1.0, 0.0)),
    ];
    FusionCategory::from_raw(RawCategory {
        name: "fibonacci-complex".to_string(),
        backend: Backend::Complex,
        simple_names: vec!["1".to_string(), "t".to_string()],
        dual: vec![0, 1],
        unit: 0,
        fusion,
        qdim: vec![Scalar::complex(1.0, 0.0), Scalar::complex(phi, 0.0)],
        sqrt_qdim: vec![
            Some(Scalar::complex(1.0, 0.0)),
            Some(Scalar::complex(phi.sqrt(), 0.0)),
        ],
        global_dim: Some(Scalar::complex((1.0 + phi * phi).sqrt(), 0.0)),
        fentries,
    })
}
