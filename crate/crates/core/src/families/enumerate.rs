use super::validate::smallest_witness;
use super::{validate, FamilyId, FamilyParams, Torus};
use crate::error::{consistency, Error, Result};
use crate::numthy::{divisors, gcd, valuation, PrimePower};

/// Hard cap on the number of tuples produced per family and `q`.
pub const MAX_TUPLES: usize = 10_000_000;

struct Out {
    family: FamilyId,
    items: Vec<FamilyParams>,
}

impl Out {
    fn push(&mut self, p: FamilyParams) -> Result<()> {
        if self.items.len() >= MAX_TUPLES {
            return Err(Error::Capacity(format!(
                "{} produces more than {MAX_TUPLES} tuples",
                self.family
            )));
        }
        self.items.push(p);
        Ok(())
    }
}

/// Every valid parameter tuple of `family` at `q`, in a canonical order.
/// Families that do not apply to `q` yield nothing.
pub fn enumerate(q: &PrimePower, family: FamilyId) -> Result<Vec<FamilyParams>> {
    use FamilyParams as P;
    let mut out = Out {
        family,
        items: Vec::new(),
    };
    if !family.applies_to(q) {
        return Ok(out.items);
    }
    let qq = q.q();
    let q1 = qq + 1;
    let dq1 = divisors(q1);
    let n = q.n() as u64;
    match family {
        FamilyId::T31 => tori(q, &mut out, |t| Some(P::T31(t)))?,
        FamilyId::CycQp => tori(q, &mut out, |t| (t.e > t.c).then_some(P::CycQp(t)))?,
        FamilyId::P32 | FamilyId::P33 => {
            for &c in &dq1 {
                for a in divisors(c) {
                    for x in divisors(q1 / c) {
                        if gcd(x, c / a) != 1 {
                            continue;
                        }
                        let e = a * c * x;
                        if family == FamilyId::P32 {
                            out.push(P::P32 { a, c, e })?;
                        } else if (a % 2 == 0 || c % 2 == 1) && x % 2 == 0 {
                            continue;
                        } else {
                            for l in divisors(c) {
                                out.push(P::P33 { a, c, e, l })?;
                            }
                        }
                    }
                }
            }
        }
        FamilyId::P34 | FamilyId::P35 => {
            for &a in &dq1 {
                for y in divisors(q1 / a) {
                    if y % 2 == 0 || gcd(y, a) != 1 {
                        continue;
                    }
                    let Some(m) = smallest_witness(y) else {
                        continue;
                    };
                    let e = a * a * y;
                    if family == FamilyId::P34 {
                        out.push(P::P34 { a, e, m })?;
                    } else {
                        for &l in &dq1 {
                            out.push(P::P35 { a, e, l, m })?;
                        }
                    }
                }
            }
        }
        FamilyId::P36 => {
            for &a in &dq1 {
                out.push(P::P36 { a, e: a * a })?;
                if q1.is_multiple_of(3) && a % 3 != 0 {
                    out.push(P::P36 { a, e: 3 * a * a })?;
                }
            }
        }
        FamilyId::Psl22EvenN | FamilyId::A4 | FamilyId::A5 if n.is_multiple_of(2) => {
            for &omega in &dq1 {
                out.push(match family {
                    FamilyId::Psl22EvenN => P::Psl22EvenN { omega },
                    FamilyId::A4 => P::A4 { omega },
                    _ => P::A5 { omega },
                })?;
            }
        }
        FamilyId::Psl22Split if n % 2 == 1 => {
            for &omega in &dq1 {
                out.push(P::Psl22Split { omega })?;
            }
        }
        FamilyId::Omega => {
            for &omega in &dq1 {
                out.push(P::Omega { omega })?;
            }
        }
        FamilyId::CycQm | FamilyId::DihQm => {
            for d in divisors(qq - 1) {
                for &omega in &dq1 {
                    out.push(if family == FamilyId::CycQm {
                        P::CycQm { d, omega }
                    } else {
                        P::DihQm { d, omega }
                    })?;
                }
            }
        }
        FamilyId::DihQp => {
            for &d in &dq1 {
                for &omega in &dq1 {
                    out.push(P::DihQp { d, omega })?;
                }
            }
        }
        FamilyId::Eab | FamilyId::Eabsd => {
            for f in 1..=n {
                let ds = if family == FamilyId::Eab {
                    vec![1]
                } else {
                    divisors(gcd((1 << f) - 1, qq - 1))
                };
                for d in ds {
                    for &omega in &dq1 {
                        out.push(if family == FamilyId::Eab {
                            P::Eab { f, omega }
                        } else {
                            P::Eabsd { f, d, omega }
                        })?;
                    }
                }
            }
        }
        FamilyId::Psl2f => {
            for f in (2..=n).filter(|f| n.is_multiple_of(*f)) {
                for &omega in &dq1 {
                    out.push(P::Psl2f { f, omega })?;
                }
            }
        }
        _ => {}
    }
    for p in &out.items {
        if !validate(q, p)?.is_valid() {
            return Err(consistency!(
                "enumerated {family} {p} fails validation at q={q}"
            ));
        }
    }
    Ok(out.items)
}

/// Torus tuples with `a <= b`.
fn tori(q: &PrimePower, out: &mut Out, keep: impl Fn(Torus) -> Option<FamilyParams>) -> Result<()> {
    let q1 = q.q() + 1;
    let primes = q.q_plus_one().factors().to_vec();
    let dq1 = divisors(q1);
    for &a in &dq1 {
        for &b in dq1.iter().filter(|&&b| b >= a) {
            // choices of u_i, then of v_i, per prime
            let mut c_opts: Vec<Vec<u32>> = Vec::new();
            for &(p, r) in &primes {
                let (s, t) = (valuation(a, p), valuation(b, p));
                c_opts.push(if s != t {
                    vec![s.min(t)]
                } else {
                    (s..=r).collect()
                });
            }
            for us in product(&c_opts) {
                let c: u64 = primes
                    .iter()
                    .zip(&us)
                    .map(|(&(p, _), &u)| p.pow(u))
                    .product();
                let mut v_opts: Vec<Vec<u32>> = Vec::new();
                for (&(p, r), &u) in primes.iter().zip(&us) {
                    let (s, t) = (valuation(a, p), valuation(b, p));
                    let twos = [s, t, u].iter().filter(|&&x| x > 0).count();
                    if p == 2 && twos == 2 {
                        return Err(consistency!("2 divides exactly two of a={a}, b={b}, c={c}"));
                    }
                    let hi = r - s.max(t).max(u);
                    v_opts.push(if p == 2 && twos != 1 {
                        vec![0]
                    } else {
                        (0..=hi).collect()
                    });
                }
                let base = a * b * c / gcd(a, b);
                for v in product(&v_opts) {
                    let e = base
                        * primes
                            .iter()
                            .zip(&v)
                            .map(|(&(p, _), &x)| p.pow(x))
                            .product::<u64>();
                    if let Some(p) = keep(Torus { a, b, c, e, v }) {
                        out.push(p)?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn product(opts: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut acc: Vec<Vec<u32>> = vec![Vec::new()];
    for o in opts {
        acc = acc
            .iter()
            .flat_map(|prefix| {
                o.iter().map(move |&x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    #[test]
    fn examples() {
        assert!(enumerate(&pp(4), FamilyId::P33).unwrap().is_empty());
        let p34 = enumerate(&pp(13), FamilyId::P34).unwrap();
        assert!(p34.contains(&FamilyParams::P34 { a: 2, e: 28, m: 3 }));
        assert_eq!(
            enumerate(&pp(4), FamilyId::A5).unwrap(),
            vec![FamilyParams::A5 { omega: 1 }, FamilyParams::A5 { omega: 5 }]
        );
        assert!(enumerate(&pp(8), FamilyId::Psl22Nonsplit)
            .unwrap()
            .is_empty());
        let psl = enumerate(&pp(32), FamilyId::Psl2f).unwrap();
        assert!(psl
            .iter()
            .all(|p| matches!(p, FamilyParams::Psl2f { f: 5, .. })));
    }

    #[test]
    fn torus_count_matches_subgroup_count_at_small_q() {
        // C_4 x C_4 has 15 subgroups; up to swapping the first two axes the
        // parameter tuples are fewer, and each subgroup has one tuple.
        let t = enumerate(&pp(3), FamilyId::T31).unwrap();
        assert!(t
            .iter()
            .all(|p| matches!(p, FamilyParams::T31(t) if t.a <= t.b)));
        let full = FamilyParams::T31(Torus {
            a: 4,
            b: 4,
            c: 4,
            e: 16,
            v: vec![0],
        });
        assert!(t.contains(&full));
    }
}
