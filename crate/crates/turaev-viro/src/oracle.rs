//! Brute-force cross-check oracles: group-homomorphism counting from
//! fundamental-group presentations, Dijkgraaf-Witten values, and quantum
//! double irrep counts.

use crate::error::{Result, TvError};
use crate::group::GroupTable;
use num_rational::BigRational;

/// A finite presentation: `gens` generators, relators as words of
/// `(generator, inverted)` letters.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub gens: usize,
    pub relators: Vec<Vec<(usize, bool)>>,
}

/// Presentations of the fundamental groups of the canned manifolds.
pub fn presentation_of(name: &str) -> Result<Presentation> {
    let p = match name {
        "s3-onecell" | "s3-two-tet" | "s3" => Presentation { gens: 0, relators: vec![] },
        "s2xs1" => Presentation { gens: 1, relators: vec![] },
        "t3" => Presentation {
            gens: 3,
            relators: vec![commutator(0, 1), commutator(0, 2), commutator(1, 2)],
        },
        "torus-min" | "t2" => Presentation { gens: 2, relators: vec![commutator(0, 1)] },
        other => {
            if let Some(rest) = other.strip_prefix("lens(") {
                if let Some(body) = rest.strip_suffix(')') {
                    let parts: Vec<&str> = body.split(',').collect();
                    if parts.len() == 2 {
                        if let Ok(p) = parts[0].trim().parse::<usize>() {
                            return Ok(Presentation {
                                gens: 1,
                                relators: vec![vec![(0, false); p]],
                            });
                        }
                    }
                }
            }
            if let Some(rest) = other.strip_prefix("genus-") {
                if let Some(g) = rest.strip_suffix("-min").and_then(|s| s.parse::<usize>().ok()) {
                    // surface group: product of g commutators
                    let mut rel = Vec::new();
                    for k in 0..g {
                        rel.extend(commutator(2 * k, 2 * k + 1));
                    }
                    return Ok(Presentation { gens: 2 * g, relators: vec![rel] });
                }
            }
            return Err(TvError::UnknownCanned(other.to_string()));
        }
    };
    Ok(p)
}

fn commutator(a: usize, b: usize) -> Vec<(usize, bool)> {
    vec![(a, false), (b, false), (a, true), (b, true)]
}

/// Count homomorphisms from the presented group to `g` by brute force.
pub fn count_homomorphisms(p: &Presentation, g: &GroupTable) -> u64 {
    let n = g.order;
    let mut assign = vec![0usize; p.gens];
    let mut count = 0u64;
    loop {
        let ok = p.relators.iter().all(|rel| {
            let mut acc = 0usize;
            for &(gen, inv) in rel {
                let x = if inv { g.inv(assign[gen]) } else { assign[gen] };
                acc = g.mul(acc, x);
            }
            acc == 0
        });
        if ok {
            count += 1;
        }
        // odometer
        let mut i = 0;
        loop {
            if i == p.gens {
                return count;
            }
            assign[i] += 1;
            if assign[i] < n {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

/// The Dijkgraaf-Witten value `|Hom(pi_1(M), G)| / |G|` for a canned closed
/// manifold, as an exact rational.
pub fn oracle_dw(group: &GroupTable, manifold: &str) -> Result<BigRational> {
    let p = presentation_of(manifold)?;
    let homs = count_homomorphisms(&p, group);
    Ok(BigRational::new((homs as i64).into(), (group.order as i64).into()))
}

/// Number of simple objects of the quantum double `D(G)`: pairs of a
/// conjugacy class and an irreducible character of its centralizer.
pub fn dg_irrep_count(group: &GroupTable) -> usize {
    group
        .conjugacy_classes()
        .iter()
        .map(|class| {
            let (cz, _) = group.centralizer(class[0]);
            cz.conjugacy_classes().len()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dw_values() {
        let z2 = GroupTable::cyclic(2);
        let z3 = GroupTable::cyclic(3);
        let s3 = GroupTable::s3();
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(oracle_dw(&z2, "s3").unwrap(), r(1, 2));
        assert_eq!(oracle_dw(&z2, "s2xs1").unwrap(), r(1, 1));
        assert_eq!(oracle_dw(&z2, "t3").unwrap(), r(4, 1));
        assert_eq!(oracle_dw(&z3, "t3").unwrap(), r(9, 1));
        assert_eq!(oracle_dw(&s3, "t3").unwrap(), r(8, 1));
        assert_eq!(oracle_dw(&s3, "s2xs1").unwrap(), r(1, 1));
        assert_eq!(oracle_dw(&z2, "lens(2,1)").unwrap(), r(1, 1));
        assert_eq!(oracle_dw(&z2, "lens(3,1)").unwrap(), r(1, 2));
        assert_eq!(oracle_dw(&z3, "lens(3,1)").unwrap(), r(1, 1));
        assert_eq!(oracle_dw(&s3, "lens(2,1)").unwrap(), r(2, 3));
        assert_eq!(oracle_dw(&s3, "lens(3,1)").unwrap(), r(1, 2));
    }

    #[test]
    fn quantum_double_counts() {
        assert_eq!(dg_irrep_count(&GroupTable::cyclic(2)), 4);
        assert_eq!(dg_irrep_count(&GroupTable::cyclic(3)), 9);
        assert_eq!(dg_irrep_count(&GroupTable::s3()), 8);
    }

    #[test]
    fn genus_two_flat_count() {
        let p = presentation_of("genus-2-min").unwrap();
        assert_eq!(count_homomorphisms(&p, &GroupTable::cyclic(2)), 16);
    }
}
