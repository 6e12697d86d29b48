use std::fmt;

use super::{FamilyId, FamilyParams, Torus};
use crate::error::{domain, Result};
use crate::numthy::{gcd, valuation, PrimePower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// The first violated condition.
    Invalid(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("valid"),
            Verdict::Invalid(why) => write!(f, "invalid: {why}"),
        }
    }
}

fn div(d: u64, n: u64) -> bool {
    d != 0 && n.is_multiple_of(d)
}

fn div128(d: u128, n: u128) -> bool {
    d != 0 && n.is_multiple_of(d)
}

/// Collects conditions and reports the first failure.
struct Checks(Option<String>);

impl Checks {
    fn new() -> Checks {
        Checks(None)
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) -> &mut Checks {
        if self.0.is_none() && !ok {
            self.0 = Some(what());
        }
        self
    }

    fn verdict(&mut self) -> Verdict {
        match self.0.take() {
            None => Verdict::Valid,
            Some(why) => Verdict::Invalid(why),
        }
    }
}

pub fn validate(q: &PrimePower, params: &FamilyParams) -> Result<Verdict> {
    let family = params.family();
    if !family.applies_to(q) {
        let why = match family {
            FamilyId::P32 => "requires q even".to_string(),
            FamilyId::P33 => "requires q odd".to_string(),
            FamilyId::P34 => "requires 3 not dividing q+1".to_string(),
            FamilyId::P35 => "requires 3 dividing q+1".to_string(),
            _ => "requires q even".to_string(),
        };
        return Err(domain!("{family} {why}; q = {q}"));
    }
    let qq = q.q();
    let q1 = qq + 1;
    let sq = (q1 as u128) * (q1 as u128);
    let n = q.n() as u64;
    let mut c = Checks::new();
    use FamilyParams as P;
    Ok(match params {
        P::T31(t) => torus(q, t),
        P::CycQp(t) => match torus(q, t) {
            Verdict::Valid => c
                .require(t.e > t.c, || {
                    format!("e={} must exceed c={} (otherwise G = G(Omega))", t.e, t.c)
                })
                .verdict(),
            bad => bad,
        },
        P::P32 { a, c: cc, e } => index_two(&mut c, q1, sq, *a, *cc, *e).verdict(),
        P::P33 { a, c: cc, e, l } => {
            let (a, cc, e, l) = (*a, *cc, *e, *l);
            index_two(&mut c, q1, sq, a, cc, e)
                .require(div(l, cc), || format!("l={l} must divide c={cc}"))
                .require(
                    !(a % 2 == 0 || cc % 2 == 1) || (e as u128 / (a as u128 * cc as u128)) % 2 == 1,
                    || {
                        format!(
                            "e/(ac)={} must be odd when 2|a or 2∤c",
                            e as u128 / (a as u128 * cc as u128)
                        )
                    },
                )
                .verdict()
        }
        P::P34 { a, e, m } => index_three(&mut c, q1, sq, *a, *e, *m).verdict(),
        P::P35 { a, e, l, m } => index_three(&mut c, q1, sq, *a, *e, *m)
            .require(div(*l, q1), || format!("l={l} must divide q+1={q1}"))
            .verdict(),
        P::P36 { a, e } => {
            let (a, e) = (*a, *e);
            let three = q1.is_multiple_of(3) && a % 3 != 0;
            let (a2, e) = (a as u128 * a as u128, e as u128);
            c.require(div(a, q1), || format!("a={a} must divide q+1={q1}"))
                .require(e == a2 || (three && e == 3u128.saturating_mul(a2)), || {
                    if three {
                        format!(
                            "e={e} must be a^2={a2} or 3a^2={}",
                            3u128.saturating_mul(a2)
                        )
                    } else {
                        format!("e={e} must be a^2={a2}")
                    }
                })
                .verdict()
        }
        P::Psl22EvenN { omega } => omega_divides(&mut c, *omega, q1)
            .require(n.is_multiple_of(2), || format!("requires n even; n = {n}"))
            .verdict(),
        P::Psl22Split { omega } => omega_divides(&mut c, *omega, q1)
            .require(n % 2 == 1, || format!("requires n odd; n = {n}"))
            .verdict(),
        P::Psl22Nonsplit { omega } => {
            let omega = *omega;
            let k = valuation(omega, 3);
            omega_divides(&mut c, omega, q1)
                .require(n % 2 == 1, || format!("requires n odd; n = {n}"))
                .require(k >= 1, || format!("requires 3 | omega; omega = {omega}"))
                .require(3u64.checked_pow(k + 1).is_some_and(|t| div(t, q1)), || {
                    match 3u64.checked_pow(k + 1) {
                        Some(t) => format!("k={k} but 3^{}={t} does not divide {q1}=q+1", k + 1),
                        None => format!("k={k} but 3^{} exceeds q+1={q1}", k + 1),
                    }
                })
                .require(false, || {
                    "no such group: for q even G(H) x G(Omega) always splits, so G/G(Omega) = S3 forces the split case"
                        .to_string()
                })
                .verdict()
        }
        P::CycQm { d, omega } => omega_divides(&mut c, *omega, q1)
            .require(div(*d, qq - 1), || {
                format!("d={d} must divide q-1={}", qq - 1)
            })
            .verdict(),
        P::Eab { f, omega } => omega_divides(&mut c, *omega, q1)
            .require(*f <= n, || format!("f={f} must be at most n={n}"))
            .verdict(),
        P::DihQm { d, omega } => omega_divides(&mut c, *omega, q1)
            .require(div(*d, qq - 1), || {
                format!("d={d} must divide q-1={}", qq - 1)
            })
            .verdict(),
        P::A4 { omega } | P::A5 { omega } => omega_divides(&mut c, *omega, q1)
            .require(n.is_multiple_of(2), || format!("requires n even; n = {n}"))
            .verdict(),
        P::Eabsd { f, d, omega } => {
            let (f, d) = (*f, *d);
            let bound = if f <= n {
                gcd((1u64 << f) - 1, qq - 1)
            } else {
                0
            };
            omega_divides(&mut c, *omega, q1)
                .require(f <= n, || format!("f={f} must be at most n={n}"))
                .require(div(d, bound), || {
                    format!("d={d} must divide gcd(2^f-1, q-1)={bound}")
                })
                .verdict()
        }
        P::Psl2f { f, omega } => omega_divides(&mut c, *omega, q1)
            .require(*f > 1, || format!("f={f} must exceed 1"))
            .require(div(*f, n), || format!("f={f} must divide n={n}"))
            .verdict(),
        P::Omega { omega } => omega_divides(&mut c, *omega, q1).verdict(),
        P::DihQp { d, omega } => omega_divides(&mut c, *omega, q1)
            .require(div(*d, q1), || format!("d={d} must divide q+1={q1}"))
            .verdict(),
    })
}

fn omega_divides(c: &mut Checks, omega: u64, q1: u64) -> &mut Checks {
    c.require(div(omega, q1), || {
        format!("omega={omega} must divide q+1={q1}")
    })
}

fn index_two(c: &mut Checks, q1: u64, sq: u128, a: u64, cc: u64, e: u64) -> &mut Checks {
    c.require(div128(e as u128, sq), || {
        format!("e={e} must divide (q+1)^2={sq}")
    })
    .require(div(cc, q1), || format!("c={cc} must divide q+1={q1}"))
    .require(div(a, cc), || format!("a={a} must divide c={cc}"))
    .require(div128(a as u128 * cc as u128, e as u128), || {
        format!("ac={} must divide e={e}", a as u128 * cc as u128)
    });
    if c.0.is_some() {
        return c;
    }
    let x = e / (a * cc);
    c.require(div(e / a, q1), || {
        format!("e/a={} must divide q+1={q1}", e / a)
    })
    .require(gcd(x, cc / a) == 1, || {
        format!("gcd(e/(ac), c/a)=gcd({x}, {}) must be 1", cc / a)
    })
}

fn index_three(c: &mut Checks, q1: u64, sq: u128, a: u64, e: u64, m: u64) -> &mut Checks {
    let a2 = a as u128 * a as u128;
    c.require(div128(e as u128, sq), || {
        format!("e={e} must divide (q+1)^2={sq}")
    })
    .require(div128(a2, e as u128), || {
        format!("a^2={a2} must divide e={e}")
    });
    if c.0.is_some() {
        return c;
    }
    c.require(div(e / a, q1), || {
        format!("e/a={} must divide q+1={q1}", e / a)
    });
    if c.0.is_some() {
        return c;
    }
    let y = e / (a * a);
    c.require(y % 2 == 1, || format!("e/a^2={y} must be odd"))
        .require(gcd(y, a) == 1, || {
            format!("gcd(e/a^2, a)=gcd({y}, {a}) must be 1")
        })
        .require(m <= y && is_witness(m, y), || match smallest_witness(y) {
            Some(w) => {
                format!("m={m} is not a witness: need m <= {y} and {y} | m^2-m+1 (e.g. m={w})")
            }
            None => format!("no m <= {y} with {y} | m^2-m+1"),
        })
}

fn is_witness(m: u64, y: u64) -> bool {
    let m = m as u128;
    (m * m - m + 1).is_multiple_of(y as u128)
}

/// Smallest `m` in `1..=y` with `y | m^2 - m + 1`.
pub(crate) fn smallest_witness(y: u64) -> Option<u64> {
    (1..=y).find(|&m| is_witness(m, y))
}

/// Conditions on (a, b, c, e, v) for a subgroup of the pointwise stabilizer.
fn torus(q: &PrimePower, t: &Torus) -> Verdict {
    let q1 = q.q() + 1;
    let mut c = Checks::new();
    let Torus { a, b, c: cc, e, v } = t;
    let (a, b, cc, e) = (*a, *b, *cc, *e);
    let primes = q.q_plus_one().factors();
    c.require(div(a, q1), || format!("a={a} must divide q+1={q1}"))
        .require(div(b, q1), || format!("b={b} must divide q+1={q1}"))
        .require(div(cc, q1), || format!("c={cc} must divide q+1={q1}"))
        .require(v.len() == primes.len(), || {
            format!(
                "v has {} entries but q+1={q1} has {} prime factors",
                v.len(),
                primes.len()
            )
        });
    if c.0.is_some() {
        return c.verdict();
    }
    let mut extra: u128 = 1;
    for (&(p, r), &vi) in primes.iter().zip(v) {
        let (s, tt, u) = (valuation(a, p), valuation(b, p), valuation(cc, p));
        if s != tt {
            c.require(u == s.min(tt), || {
                format!("at p={p}: u={u} must equal min(s,t)={}", s.min(tt))
            });
        } else {
            c.require(s <= u && u <= r, || {
                format!("at p={p}: u={u} must lie in [{s}, {r}]")
            });
        }
        let m = s.max(tt).max(u);
        c.require(vi <= r - m.min(r), || {
            format!("at p={p}: v={vi} exceeds r-max(s,t,u)={}", r - m.min(r))
        });
        if p == 2 && ((a & b & cc) % 2 == 1 || (a % 2 == 0 && b % 2 == 0 && cc % 2 == 0)) {
            c.require(vi == 0, || {
                "at p=2: v must be 0 when 2∤abc or 2|gcd(a,b,c)".to_string()
            });
        }
        extra = extra.saturating_mul((p as u128).saturating_pow(vi));
    }
    if c.0.is_some() {
        return c.verdict();
    }
    let base = a as u128 * b as u128 * cc as u128 / gcd(a, b) as u128;
    let expect = base.saturating_mul(extra);
    c.require(e as u128 == expect, || {
        format!("e={e} must equal abc/gcd(a,b)*prod p^v = {expect}")
    })
    .verdict()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    fn check(q: u64, f: FamilyId, s: &str) -> Result<Verdict> {
        validate(&pp(q), &FamilyParams::parse(f, s).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(
            check(13, FamilyId::P34, "a=2,e=28,m=3").unwrap(),
            Verdict::Valid
        );
        assert!(matches!(
            check(8, FamilyId::P33, "a=1,c=1,e=1,l=1"),
            Err(crate::Error::Domain(_))
        ));
        let v = check(8, FamilyId::Psl22Nonsplit, "omega=9").unwrap();
        assert!(
            matches!(&v, Verdict::Invalid(why) if why.contains("27")),
            "{v}"
        );
        assert!(check(5, FamilyId::T31, "a=2,b=2,c=2,e=12,v=0:1")
            .unwrap()
            .is_valid());
        assert!(check(4, FamilyId::T31, "a=1,b=1,c=1,e=5,v=1")
            .unwrap()
            .is_valid());
        assert!(check(8, FamilyId::P32, "a=1,c=3,e=3").unwrap().is_valid());
    }

    #[test]
    fn torus_conditions() {
        // u must equal min(s,t) when s != t
        assert!(!check(5, FamilyId::T31, "a=2,b=1,c=2,e=4,v=0:0")
            .unwrap()
            .is_valid());
        // the 2-adic clause
        assert!(!check(5, FamilyId::T31, "a=1,b=1,c=1,e=2,v=1:0")
            .unwrap()
            .is_valid());
        assert!(!check(5, FamilyId::T31, "a=2,b=2,c=2,e=16,v=1:0")
            .unwrap()
            .is_valid());
        assert!(check(7, FamilyId::T31, "a=2,b=1,c=1,e=4,v=1")
            .unwrap()
            .is_valid());
        // e must match the product
        assert!(!check(5, FamilyId::T31, "a=2,b=2,c=2,e=8,v=0:1")
            .unwrap()
            .is_valid());
        assert!(!check(5, FamilyId::T31, "a=2,b=2,c=2,e=12,v=0")
            .unwrap()
            .is_valid());
    }

    #[test]
    fn index_three_witness() {
        assert!(check(13, FamilyId::P34, "a=2,e=28,m=5").unwrap().is_valid());
        assert!(!check(13, FamilyId::P34, "a=2,e=28,m=4").unwrap().is_valid());
        assert!(!check(13, FamilyId::P34, "a=1,e=14,m=1").unwrap().is_valid());
        assert!(matches!(
            check(5, FamilyId::P34, "a=1,e=1,m=1"),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn pole_polar_conditions() {
        assert!(check(4, FamilyId::A5, "omega=5").unwrap().is_valid());
        assert!(!check(8, FamilyId::A5, "omega=3").unwrap().is_valid());
        assert!(check(32, FamilyId::Psl2f, "f=5,omega=1")
            .unwrap()
            .is_valid());
        assert!(!check(32, FamilyId::Psl2f, "f=2,omega=1")
            .unwrap()
            .is_valid());
        assert!(check(16, FamilyId::Eabsd, "f=2,d=3,omega=17")
            .unwrap()
            .is_valid());
        assert!(!check(16, FamilyId::Eabsd, "f=3,d=3,omega=1")
            .unwrap()
            .is_valid());
        assert!(!check(8, FamilyId::CycQp, "a=1,b=1,c=3,e=3,v=0")
            .unwrap()
            .is_valid());
        assert!(check(8, FamilyId::CycQp, "a=1,b=1,c=1,e=3,v=1")
            .unwrap()
            .is_valid());
    }
}
