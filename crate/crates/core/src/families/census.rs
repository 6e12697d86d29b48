use std::collections::BTreeMap;

use super::genus::{index_two_equivalent, p33_hk, p35_h, torus_equivalent};
use super::{group_order, FamilyParams, Torus, Verdict};
use crate::error::{consistency, domain, Result};
use crate::numthy::{gcd, valuation, PrimePower};
use crate::pgu::ElementType;

/// Number of non-identity elements of each type.
pub type Census = BTreeMap<ElementType, u64>;

struct Tally {
    census: Census,
    order: u64,
}

impl Tally {
    fn new(order: u64) -> Tally {
        Tally {
            census: Census::new(),
            order,
        }
    }

    fn put(&mut self, ty: ElementType, n: u64) -> &mut Tally {
        if n > 0 {
            *self.census.entry(ty).or_default() += n;
        }
        self
    }

    /// Assigns every element not yet counted to `ty`.
    fn rest(&mut self, ty: ElementType, params: &FamilyParams) -> Result<Census> {
        let counted: u64 = self.census.values().sum();
        let rest = (self.order - 1).checked_sub(counted).ok_or_else(|| {
            consistency!(
                "{} {params}: census exceeds the group order",
                params.family()
            )
        })?;
        self.put(ty, rest);
        Ok(std::mem::take(&mut self.census))
    }
}

fn ensure_valid(q: &PrimePower, params: &FamilyParams) -> Result<()> {
    match super::validate(q, params)? {
        Verdict::Valid => Ok(()),
        Verdict::Invalid(why) => Err(domain!(
            "{} {params} is not valid for q={q}: {why}",
            params.family()
        )),
    }
}

/// The element census implied by the construction.
pub fn predicted_census(q: &PrimePower, params: &FamilyParams) -> Result<Census> {
    use ElementType::*;
    use FamilyParams as P;
    ensure_valid(q, params)?;
    let qq = q.q();
    let q1 = qq + 1;
    let mut t = Tally::new(group_order(params));
    if let Some(tor) = torus_equivalent(params) {
        return t.put(A, tor.a + tor.b + tor.c - 3).rest(B1, params);
    }
    if let Some((a, c, e)) = index_two_equivalent(params) {
        return index_two_even(&mut t, a, c, e).rest(B1, params);
    }
    match *params {
        P::P32 { a, c, e } => index_two_even(&mut t, a, c, e).rest(B1, params),
        P::P33 { a, c, e, l } => {
            let (h, k) = p33_hk(qq, a, c, e, l);
            t.put(A, 2 * a + c - 3 + h).put(B2, k).rest(B1, params)
        }
        P::P34 { a, e, .. } => {
            let coset = if q.p() == 3 { D } else { B2 };
            t.put(A, 3 * (a - 1)).put(coset, 2 * e).rest(B1, params)
        }
        P::P35 { a, e, l, .. } => {
            let b3 = match p35_h(qq, a, l) {
                2 => 4 * e / 3,
                0 => 2 * e,
                _ => 0,
            };
            t.put(A, 3 * (a - 1)).put(B3, b3).rest(B1, params)
        }
        P::P36 { a, e } => {
            let odd = qq % 2 == 1;
            t.put(A, 3 * (a - 1));
            if odd {
                t.put(A, 3 * e / a);
                if !(q1 / 2).is_multiple_of(a) {
                    t.put(B2, 3 * e / 2);
                }
            } else {
                t.put(C, 3 * e / a).put(E, 3 * e - 3 * e / a);
            }
            match qq % 3 {
                0 => t.put(D, 2 * e),
                1 => t.put(B2, 2 * e),
                _ if !(q1 / 3).is_multiple_of(a) => t.put(B3, 4 * e / 3),
                _ => &mut t,
            };
            t.rest(B1, params)
        }
        P::Psl22EvenN { omega } => t
            .put(A, omega - 1)
            .put(C, 3)
            .put(E, 3 * (omega - 1))
            .rest(B2, params),
        P::CycQm { omega, .. } => t.put(A, omega - 1).rest(B2, params),
        P::Eab { f, omega } => {
            let inv = (1 << f) - 1;
            t.put(A, omega - 1).put(C, inv).rest(E, params)
        }
        P::DihQm { d, omega } => t
            .put(A, omega - 1)
            .put(C, d)
            .put(E, d * (omega - 1))
            .rest(B2, params),
        P::A4 { omega } => t
            .put(A, omega - 1)
            .put(C, 3)
            .put(E, 3 * (omega - 1))
            .rest(B2, params),
        P::A5 { omega } => {
            t.put(A, omega - 1)
                .put(C, 15)
                .put(E, 15 * (omega - 1))
                .put(B2, 20 * omega);
            if (qq - 1).is_multiple_of(5) {
                t.put(B2, 24 * omega);
            } else if omega % 5 == 0 {
                t.put(A, 48);
            }
            t.rest(B1, params)
        }
        P::Eabsd { f, omega, .. } => {
            let inv = (1 << f) - 1;
            t.put(A, omega - 1)
                .put(C, inv)
                .put(E, inv * (omega - 1))
                .rest(B2, params)
        }
        P::Psl2f { f, omega } => {
            let big = 1u64 << f;
            let g = gcd(big + 1, omega);
            let split = big * (big * big - big) / 2 * omega;
            t.put(A, omega - 1)
                .put(C, big * big - 1)
                .put(E, (big * big - 1) * (omega - 1))
                .put(B2, big * (big + 1) * (big - 2) / 2 * omega);
            if (q.n() as u64 / f) % 2 == 1 {
                t.put(A, (big * big - big) * (g - 1));
                t.rest(B1, params)
            } else {
                t.put(B2, split).rest(B1, params)
            }
        }
        P::Psl22Nonsplit { .. } => unreachable!("rejected by validate"),
        P::T31(_) | P::CycQp(_) | P::Omega { .. } | P::Psl22Split { .. } | P::DihQp { .. } => {
            unreachable!("handled above")
        }
    }
}

fn index_two_even(t: &mut Tally, a: u64, c: u64, e: u64) -> &mut Tally {
    use ElementType::*;
    t.put(A, 2 * a + c - 3).put(C, e / c).put(E, e - e / c)
}

/// Homology counts per center, in descending order, where the construction
/// determines them.
pub fn expected_centers(q: &PrimePower, params: &FamilyParams) -> Result<Option<Vec<u64>>> {
    use FamilyParams as P;
    ensure_valid(q, params)?;
    let qq = q.q();
    let mut counts = if let Some(t) = torus_equivalent(params) {
        vec![t.a - 1, t.b - 1, t.c - 1]
    } else if let Some((a, c, _)) = index_two_equivalent(params) {
        vec![a - 1, a - 1, c - 1]
    } else {
        match *params {
            P::P32 { a, c, .. } => vec![a - 1, a - 1, c - 1],
            P::P33 { a, c, e, l } => {
                if p33_hk(qq, a, c, e, l).0 != 0 {
                    return Ok(None);
                }
                vec![a - 1, a - 1, c - 1]
            }
            P::P34 { a, .. } | P::P35 { a, .. } => vec![a - 1; 3],
            P::P36 { a, .. } => {
                if qq % 2 == 1 {
                    return Ok(None);
                }
                vec![a - 1; 3]
            }
            P::A5 { omega } if omega % 5 == 0 => return Ok(None),
            P::Psl2f { f, omega }
                if (q.n() as u64 / f) % 2 == 1 && gcd((1 << f) + 1, omega) > 1 =>
            {
                return Ok(None)
            }
            P::Psl22EvenN { omega }
            | P::CycQm { omega, .. }
            | P::Eab { omega, .. }
            | P::DihQm { omega, .. }
            | P::A4 { omega }
            | P::A5 { omega }
            | P::Eabsd { omega, .. }
            | P::Psl2f { omega, .. } => vec![omega - 1],
            _ => return Ok(None),
        }
    };
    counts.retain(|&c| c > 0);
    counts.sort_unstable_by(|x, y| y.cmp(x));
    Ok(Some(counts))
}

/// Cyclic factor orders of each Sylow subgroup of a torus group, one entry
/// per prime of `q + 1`.
pub fn sylow_structure(q: &PrimePower, t: &Torus) -> Vec<(u64, Vec<u64>)> {
    q.q_plus_one()
        .factors()
        .iter()
        .enumerate()
        .map(|(i, &(p, _))| {
            let (s, tt, u) = (valuation(t.a, p), valuation(t.b, p), valuation(t.c, p));
            let v = t.v.get(i).copied().unwrap_or(0);
            let hi = p.pow(v + s.max(tt).max(u));
            let lo = p.pow(s.min(tt).min(u));
            let dividing = [s, tt, u].iter().filter(|&&x| x > 0).count();
            let mut parts = if dividing <= 1 {
                vec![hi]
            } else {
                vec![hi, lo]
            };
            parts.retain(|&x| x > 1);
            (p, parts)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilyId;

    fn census(q: u64, f: FamilyId, s: &str) -> Vec<(ElementType, u64)> {
        let pp = PrimePower::new(q).unwrap();
        predicted_census(&pp, &FamilyParams::parse(f, s).unwrap())
            .unwrap()
            .into_iter()
            .collect()
    }

    #[test]
    fn examples() {
        use ElementType::*;
        assert_eq!(
            census(13, FamilyId::P34, "a=2,e=28,m=3"),
            vec![(A, 3), (B1, 24), (B2, 56)]
        );
        assert_eq!(
            census(8, FamilyId::P32, "a=1,c=3,e=3"),
            vec![(A, 2), (C, 1), (E, 2)]
        );
        assert_eq!(
            census(5, FamilyId::T31, "a=2,b=2,c=2,e=12,v=0:1"),
            vec![(A, 3), (B1, 8)]
        );
        assert_eq!(
            census(4, FamilyId::A5, "omega=1"),
            vec![(B1, 24), (B2, 20), (C, 15)]
        );
    }

    #[test]
    fn census_matches_genus() {
        for q in [3u64, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 125] {
            let pp = PrimePower::new(q).unwrap();
            for f in crate::families::FamilyId::ALL {
                for params in crate::families::enumerate(&pp, f).unwrap() {
                    let c = predicted_census(&pp, &params).unwrap();
                    let r = crate::families::genus(&pp, &params).unwrap();
                    let delta: u64 = c.iter().map(|(t, n)| t.contribution(q) * n).sum();
                    let lhs = (q * q - q - 2) as i128 - delta as i128;
                    let rhs = 2 * r.group_order as i128 * (r.genus as i128 - 1);
                    assert_eq!(lhs, rhs, "q={q} {f} {params}");
                }
            }
        }
    }

    #[test]
    fn sylow_examples() {
        let pp = PrimePower::new(5).unwrap();
        let t = Torus {
            a: 2,
            b: 2,
            c: 2,
            e: 12,
            v: vec![0, 1],
        };
        assert_eq!(
            sylow_structure(&pp, &t),
            vec![(2, vec![2, 2]), (3, vec![3])]
        );
    }
}
