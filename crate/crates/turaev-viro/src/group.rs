//! Finite group multiplication tables and the small amount of character
//! theory the quantum-double constructions need.

use crate::error::{Result, TvError};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use num_rational::BigRational;
use num_traits::One;

/// A finite group as a multiplication table. Element 0 is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupTable {
    pub order: usize,
    mul: Vec<usize>,
}

impl GroupTable {
    pub fn new(order: usize, mul: Vec<usize>) -> Result<Self> {
        if mul.len() != order * order {
            return Err(TvError::NotAGroup(format!(
                "table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if mul.iter().any(|&x| x >= order) {
            return Err(TvError::NotAGroup("entry out of range".into()));
        }
        let g = GroupTable { order, mul };
        for a in 0..order {
            if g.mul(0, a) != a || g.mul(a, 0) != a {
                return Err(TvError::NotAGroup(format!("0 is not an identity at {a}")));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        return Err(TvError::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        for a in 0..order {
            if (0..order).all(|b| g.mul(a, b) != 0) {
                return Err(TvError::NotAGroup(format!("{a} has no inverse")));
            }
        }
        Ok(g)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.mul(a, b) == 0).expect("validated group")
    }

    pub fn conj(&self, g: usize, by: usize) -> usize {
        self.mul(self.mul(by, g), self.inv(by))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        GroupTable { order: n, mul }
    }

    /// Symmetric group on 3 letters; elements ordered
    /// e, (12), (13), (23), (123), (132).
    pub fn s3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
        let mut mul = Vec::with_capacity(36);
        for a in &perms {
            for b in &perms {
                let c = compose(a, b);
                mul.push(perms.iter().position(|p| *p == c).unwrap());
            }
        }
        GroupTable { order: 6, mul }
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order).map(|h| self.conj(g, h)).collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Elements commuting with `g`, as a subgroup table plus the embedding.
    pub fn centralizer(&self, g: usize) -> (GroupTable, Vec<usize>) {
        let elems: Vec<usize> =
            (0..self.order).filter(|&h| self.mul(g, h) == self.mul(h, g)).collect();
        let index = |x: usize| elems.iter().position(|&e| e == x).unwrap();
        let mul = elems
            .iter()
            .flat_map(|&a| elems.iter().map(move |&b| (a, b)))
            .map(|(a, b)| index(self.mul(a, b)))
            .collect();
        (GroupTable { order: elems.len(), mul }, elems)
    }

    /// Order of an element.
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    /// A generator, when the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order).find(|&g| self.element_order(g) == self.order)
    }
}

/// A matrix representation of a group, entry `mats[g]` for each element.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub dim: usize,
    pub mats: Vec<Matrix>,
}

impl Irrep {
    pub fn character(&self, g: usize) -> Scalar {
        self.mats[g].trace()
    }
}

/// Primitive n-th root of unity in the smallest backend we support exactly,
/// complex otherwise.
fn root_of_unity(n: usize, k: usize) -> Scalar {
    let k = k % n;
    match n {
        1 => Scalar::one(),
        2 => Scalar::from_int(if k == 0 { 1 } else { -1 }),
        3 | 6 => {
            // exp(2 pi i k / n) in Q(sqrt(-3))
            let sixth = k * (6 / n);
            let half = BigRational::new(1.into(), 2.into());
            match sixth {
                0 => Scalar::one(),
                1 => Scalar::quad(-3, half.clone(), half),
                2 => Scalar::quad(-3, -half.clone(), half),
                3 => Scalar::from_int(-1),
                4 => Scalar::quad(-3, -half.clone(), -half),
                5 => Scalar::quad(-3, half.clone(), -half),
                _ => unreachable!(),
            }
        }
        4 => match k {
            0 => Scalar::one(),
            1 => Scalar::quad(-1, BigRational::from_integer(0.into()), BigRational::one()),
            2 => Scalar::from_int(-1),
            _ => Scalar::quad(-1, BigRational::from_integer(0.into()), -BigRational::one()),
        },
        _ => {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
            Scalar::complex(theta.cos(), theta.sin())
        }
    }
}

/// Irreducible representations of the group, exact where we can manage it.
///
/// Supported: cyclic groups and S3-shaped tables. Returns `None` otherwise;
/// callers fall back to user-supplied center files.
pub fn irreps(g: &GroupTable) -> Option<Vec<Irrep>> {
    if let Some(gen) = g.cyclic_generator() {
        let n = g.order;
        // log table: element -> power of the generator
        let mut log = vec![0usize; n];
        let mut x = 0usize;
        for p in 0..n {
            log[x] = p;
            x = g.mul(x, gen);
        }
        return Some(
            (0..n)
                .map(|k| Irrep {
                    dim: 1,
                    mats: (0..n)
                        .map(|e| {
                            let mut m = Matrix::zeros(1, 1);
                            m[(0, 0)] = root_of_unity(n, (k * log[e]) % n);
                            m
                        })
                        .collect(),
                })
                .collect(),
        );
    }
    if g.order == 6 && *g == GroupTable::s3() {
        let one = |v: i64| {
            let mut m = Matrix::zeros(1, 1);
            m[(0, 0)] = Scalar::from_int(v);
            m
        };
        let triv = Irrep { dim: 1, mats: (0..6).map(|_| one(1)).collect() };
        let sign =
            Irrep { dim: 1, mats: [1, -1, -1, -1, 1, 1].iter().map(|&v| one(v)).collect() };
        // integral model of the 2-dimensional representation
        let m2 = |e: [[i64; 2]; 2]| {
            Matrix::from_fn(2, 2, |i, j| Scalar::from_int(e[i][j]))
        };
        let id = m2([[1, 0], [0, 1]]);
        let r = m2([[0, -1], [1, -1]]); // (123)
        let r2 = r.mul(&r); // (132)
        let s = m2([[0, 1], [1, 0]]); // (12)
        let std2 = Irrep {
            dim: 2,
            mats: vec![id, s.clone(), r.mul(&s), r2.mul(&s), r.clone(), r2.clone()],
        };
        return Some(vec![triv, sign, std2]);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_structure() {
        let g = GroupTable::s3();
        assert!(!g.is_abelian());
        let classes = g.conjugacy_classes();
        assert_eq!(classes.len(), 3);
        let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        let (c, _) = g.centralizer(1); // a transposition
        assert_eq!(c.order, 2);
        let (c, _) = g.centralizer(4); // a 3-cycle
        assert_eq!(c.order, 3);
    }

    #[test]
    fn non_associative_rejected() {
        // 2x2 table that is not associative / not a group
        let bad = GroupTable::new(2, vec![0, 1, 1, 1]);
        assert!(bad.is_err());
    }

    #[test]
    fn irreps_are_homomorphisms() {
        for g in [GroupTable::cyclic(3), GroupTable::cyclic(4), GroupTable::s3()] {
            let reps = irreps(&g).unwrap();
            let total: usize = reps.iter().map(|r| r.dim * r.dim).sum();
            assert_eq!(total, g.order);
            for rep in &reps {
                for a in 0..g.order {
                    for b in 0..g.order {
                        let lhs = rep.mats[a].mul(&rep.mats[b]);
                        assert!(
                            lhs.approx_eq(&rep.mats[g.mul(a, b)], 1e-12),
                            "hom property failed"
                        );
                    }
                }
            }
        }
    }
}
