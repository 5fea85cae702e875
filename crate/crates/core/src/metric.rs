//! The ultrametric on marked groups, truncated at a maximal relation length.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{solve_rows, Matrix};
use crate::marked::MarkedGroup;
use crate::oracle::OracleKind;
use crate::word::{self, Word};

pub const DEFAULT_RMAX: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Agreement {
    /// Relations agree up to length `v`; `witness` has length `v + 1` and is
    /// a relation of exactly one of the two groups.
    Exact {
        v: usize,
        witness: Word,
    },
    AtLeast {
        bound: usize,
    },
}

impl Agreement {
    /// The integer `v`, or the lower bound.
    pub fn radius(&self) -> usize {
        match self {
            Agreement::Exact { v, .. } => *v,
            Agreement::AtLeast { bound } => *bound,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Agreement::Exact { .. })
    }

    pub fn witness(&self) -> Option<&Word> {
        match self {
            Agreement::Exact { witness, .. } => Some(witness),
            Agreement::AtLeast { .. } => None,
        }
    }

    /// `e^-v`, an upper bound when the agreement is not exact.
    pub fn distance(&self) -> f64 {
        (-(self.radius() as f64)).exp()
    }
}

fn check_arity(a: &MarkedGroup, b: &MarkedGroup) -> Result<()> {
    if a.arity() != b.arity() {
        return Err(Error::Arity {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    Ok(())
}

/// Compares relation sets by increasing length; the witness is the
/// shortlex-least discrepancy.
pub fn agreement_radius(a: &MarkedGroup, b: &MarkedGroup, rmax: usize) -> Result<Agreement> {
    check_arity(a, b)?;
    let n = a.arity();
    for len in 1..=rmax {
        let words = word::reduced_words_of_length(n, len);
        let hit = words
            .into_par_iter()
            .find_first(|w| a.relation_test(w) != b.relation_test(w));
        if let Some(witness) = hit {
            return Ok(Agreement::Exact {
                v: len - 1,
                witness,
            });
        }
    }
    Ok(Agreement::AtLeast { bound: rmax })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub index: i64,
    pub agreement: Agreement,
}

pub fn converge_check<F>(
    family: F,
    limit: &MarkedGroup,
    indices: &[i64],
    rmax: usize,
) -> Result<Vec<ConvergenceRow>>
where
    F: Fn(i64) -> Result<MarkedGroup> + Sync,
{
    indices
        .par_iter()
        .map(|&i| {
            let m = family(i)?;
            Ok(ConvergenceRow {
                index: i,
                agreement: agreement_radius(&m, limit, rmax)?,
            })
        })
        .collect()
}

/// Subgroup membership of ball elements, exact when the ambient group is
/// abelian and by bounded search otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NonMember,
    Unknown,
}

pub fn subgroup_membership(
    m: &MarkedGroup,
    t: &[Word],
    vertices: &[Word],
    search: usize,
) -> Result<Vec<Membership>> {
    let amb = m.oracle();
    if matches!(amb.kind(), OracleKind::Abelian | OracleKind::FiniteCyclic) {
        let data = amb.abelian_data().unwrap();
        let mut rows: Vec<Vec<i64>> = t
            .iter()
            .map(|w| m.to_ambient(w).exponent_sums(data.rank))
            .collect();
        rows.extend(data.relations.iter().cloned());
        let mat = Matrix::from_rows(rows, data.rank);
        return Ok(vertices
            .iter()
            .map(|v| {
                let e = m.to_ambient(v).exponent_sums(data.rank);
                if solve_rows(&mat, &e).is_some() {
                    Membership::Member
                } else {
                    Membership::NonMember
                }
            })
            .collect());
    }
    let sub = m.remark_subgroup(t)?;
    let elems: Vec<Word> = sub
        .ball_vertices(search)?
        .iter()
        .map(|w| w.substitute(t))
        .collect();
    Ok(vertices
        .par_iter()
        .map(|v| {
            if elems.iter().any(|e| m.equal(v, e)) {
                Membership::Member
            } else {
                Membership::Unknown
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct HausdorffAgreement {
    /// Largest ball radius on which both balls and both traces agree.
    pub agreement: Agreement,
    /// First radius at which a trace comparison could not be decided.
    pub unknown_at: Option<usize>,
}

/// Ball radius agreement of two marked groups together with the traces of
/// the subgroups generated by `t1`, `t2` on those balls.
pub fn hausdorff_agreement(
    (m1, t1): (&MarkedGroup, &[Word]),
    (m2, t2): (&MarkedGroup, &[Word]),
    rmax: usize,
) -> Result<HausdorffAgreement> {
    check_arity(m1, m2)?;
    for r in 0..=rmax {
        let b1 = m1.ball(r)?;
        let b2 = m2.ball(r)?;
        if b1 != b2 {
            let w = b1
                .vertices
                .iter()
                .zip(&b2.vertices)
                .find(|(x, y)| x != y)
                .map(|(x, y)| x.min(y).clone())
                .unwrap_or_else(|| {
                    b1.vertices
                        .get(b2.len())
                        .or_else(|| b2.vertices.get(b1.len()))
                        .cloned()
                        .unwrap_or_default()
                });
            return Ok(HausdorffAgreement {
                agreement: Agreement::Exact {
                    v: r.saturating_sub(1),
                    witness: w,
                },
                unknown_at: None,
            });
        }
        let s1 = subgroup_membership(m1, t1, &b1.vertices, rmax)?;
        let s2 = subgroup_membership(m2, t2, &b2.vertices, rmax)?;
        for (i, (x, y)) in s1.iter().zip(&s2).enumerate() {
            if x == y && *x != Membership::Unknown {
                continue;
            }
            if *x == Membership::Unknown || *y == Membership::Unknown {
                if x == y {
                    continue;
                }
                return Ok(HausdorffAgreement {
                    agreement: Agreement::AtLeast {
                        bound: r.saturating_sub(1),
                    },
                    unknown_at: Some(r),
                });
            }
            return Ok(HausdorffAgreement {
                agreement: Agreement::Exact {
                    v: r.saturating_sub(1),
                    witness: b1.vertices[i].clone(),
                },
                unknown_at: None,
            });
        }
    }
    Ok(HausdorffAgreement {
        agreement: Agreement::AtLeast { bound: rmax },
        unknown_at: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_versus_integers() {
        let a =
            agreement_radius(&MarkedGroup::cyclic(5), &MarkedGroup::free_abelian(1), 6).unwrap();
        assert_eq!(a.radius(), 4);
        assert_eq!(a.witness(), Some(&Word::gen(1).pow(5)));
    }

    #[test]
    fn self_distance() {
        let m = MarkedGroup::free(2);
        assert_eq!(
            agreement_radius(&m, &m, 5).unwrap(),
            Agreement::AtLeast { bound: 5 }
        );
    }

    #[test]
    fn z_with_two_markings() {
        let a = agreement_radius(
            &MarkedGroup::integers_marked(&[1, 3]),
            &MarkedGroup::free_abelian(2),
            6,
        )
        .unwrap();
        assert_eq!(a.radius(), 3);
    }

    #[test]
    fn trace_of_subgroup() {
        let t = [Word::gen(1)];
        let h = hausdorff_agreement(
            (&MarkedGroup::free_abelian(2), &t),
            (&MarkedGroup::integers_marked(&[1, 5]), &t),
            4,
        )
        .unwrap();
        // balls agree up to radius 2 (relations up to length 5), but s2 lies
        // in <s1> only in the second group
        assert_eq!(h.agreement.radius(), 0);
    }
}
