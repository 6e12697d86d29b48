use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{FamilyParams, Torus, Verdict};
use crate::error::{consistency, domain, Result};
use crate::numthy::{gcd, PrimePower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusRecord {
    pub genus: u64,
    pub group_order: u64,
    pub params: FamilyParams,
}

impl Serialize for GenusRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GenusRecord", 4)?;
        st.serialize_field("family", self.params.family().name())?;
        st.serialize_field("params", &self.params.to_json())?;
        st.serialize_field("genus", &self.genus)?;
        st.serialize_field("group_order", &self.group_order)?;
        st.end()
    }
}

/// Exact quotient, or an internal-consistency error.
fn exact(num: i128, den: i128, what: &dyn Fn() -> String) -> Result<i128> {
    if den == 0 || num % den != 0 {
        return Err(consistency!("{}: {num}/{den} is not an integer", what()));
    }
    Ok(num / den)
}

/// The parameters of index-two groups realised by a pole-polar family.
pub(crate) fn index_two_equivalent(params: &FamilyParams) -> Option<(u64, u64, u64)> {
    match *params {
        FamilyParams::Psl22Split { omega } => {
            Some((if omega % 3 == 0 { 3 } else { 1 }, omega, 3 * omega))
        }
        FamilyParams::DihQp { d, omega } => Some((gcd(d, omega), omega, d * omega)),
        _ => None,
    }
}

/// The torus parameters of groups inside the pointwise triangle stabilizer.
pub(crate) fn torus_equivalent(params: &FamilyParams) -> Option<Torus> {
    match params {
        FamilyParams::T31(t) | FamilyParams::CycQp(t) => Some(t.clone()),
        FamilyParams::Omega { omega } => Some(Torus {
            a: 1,
            b: 1,
            c: *omega,
            e: *omega,
            v: Vec::new(),
        }),
        _ => None,
    }
}

pub fn group_order(params: &FamilyParams) -> u64 {
    use FamilyParams as P;
    match *params {
        P::T31(ref t) | P::CycQp(ref t) => t.e,
        P::P32 { e, .. } | P::P33 { e, .. } => 2 * e,
        P::P34 { e, .. } | P::P35 { e, .. } => 3 * e,
        P::P36 { e, .. } => 6 * e,
        P::Psl22EvenN { omega } | P::Psl22Split { omega } | P::Psl22Nonsplit { omega } => 6 * omega,
        P::CycQm { d, omega } => d * omega,
        P::Eab { f, omega } => pow2(f).saturating_mul(omega),
        P::DihQm { d, omega } | P::DihQp { d, omega } => 2 * d * omega,
        P::A4 { omega } => 12 * omega,
        P::A5 { omega } => 60 * omega,
        P::Eabsd { f, d, omega } => pow2(f).saturating_mul(d).saturating_mul(omega),
        P::Psl2f { f, omega } => {
            let n = pow2(f);
            n.saturating_mul(n.saturating_mul(n).saturating_sub(1))
                .saturating_mul(omega)
        }
        P::Omega { omega } => omega,
    }
}

fn pow2(f: u64) -> u64 {
    2u64.saturating_pow(f.min(64) as u32)
}

pub fn genus(q: &PrimePower, params: &FamilyParams) -> Result<GenusRecord> {
    if let Verdict::Invalid(why) = super::validate(q, params)? {
        return Err(domain!(
            "{} {params} is not valid for q={q}: {why}",
            params.family()
        ));
    }
    let g = raw_genus(q, params)?;
    let top = q.hermitian_genus() as i128;
    if !(0..=top).contains(&g) {
        return Err(consistency!(
            "{} {params} at q={q} gives genus {g} outside [0, {top}]",
            params.family()
        ));
    }
    Ok(GenusRecord {
        genus: g as u64,
        group_order: group_order(params),
        params: params.clone(),
    })
}

fn raw_genus(q: &PrimePower, params: &FamilyParams) -> Result<i128> {
    use FamilyParams as P;
    let qq = q.q() as i128;
    let q1 = qq + 1;
    let what = || format!("{} {params} at q={qq}", params.family());
    let what = &what;
    if let Some(t) = torus_equivalent(params) {
        let (a, b, c, e) = (t.a as i128, t.b as i128, t.c as i128, t.e as i128);
        let d = a + b + c - 3;
        return exact(q1 * (qq - 2 - d) + 2 * e, 2 * e, what);
    }
    if let Some((a, c, e)) = index_two_equivalent(params) {
        return index_two_even(qq, a as i128, c as i128, e as i128, what);
    }
    Ok(match *params {
        P::P32 { a, c, e } => index_two_even(qq, a as i128, c as i128, e as i128, what)?,
        P::P33 { a, c, e, l } => {
            let (h, k) = p33_hk(q.q(), a, c, e, l);
            let (a, c, e) = (a as i128, c as i128, e as i128);
            exact(
                q1 * (qq - 2 * a - c + 1 - h as i128) - 2 * k as i128 + 4 * e,
                4 * e,
                what,
            )?
        }
        P::P34 { a, e, .. } => {
            let (a, e) = (a as i128, e as i128);
            exact(q1 * (qq - 3 * a + 1) + 2 * e, 6 * e, what)?
        }
        P::P35 { a, e, l, .. } => {
            let h = p35_h(q.q(), a, l) as i128;
            let (a, e) = (a as i128, e as i128);
            exact(q1 * (qq - 3 * a + 1) + h * e, 6 * e, what)?
        }
        P::P36 { a, e } => {
            let (r2, s3, t) = p36_rst(q.q(), a, e, what)?;
            let (a, e) = (a as i128, e as i128);
            let three_e_over_a = exact(3 * e, a, what)?;
            exact(
                q1 * (qq - 3 * a + 1 - three_e_over_a) - r2 - s3 - t + 12 * e,
                12 * e,
                what,
            )?
        }
        P::Psl22EvenN { omega } => {
            let w = omega as i128;
            exact(qq * qq - w * qq - 3 * qq + 4 * w - 4, 12 * w, what)?
        }
        P::Psl22Nonsplit { .. } => unreachable!("rejected by validate"),
        P::CycQm { d, omega } => {
            let (d, w) = (d as i128, omega as i128);
            exact(q1 * (qq - w - 1) + 2 * w, 2 * d * w, what)?
        }
        P::Eab { f, omega } => eabsd(qq, f, 1, omega, what)?,
        P::Eabsd { f, d, omega } => eabsd(qq, f, d, omega, what)?,
        P::DihQm { d, omega } => {
            let (d, w) = (d as i128, omega as i128);
            exact(
                qq * qq - qq * w - qq * d + w * d + w - d - 1,
                4 * d * w,
                what,
            )?
        }
        P::A4 { omega } => {
            let w = omega as i128;
            exact(qq * qq - qq * w + 4 * w - 3 * qq - 4, 24 * w, what)?
        }
        P::A5 { omega } => {
            let w = omega as i128;
            let eps = if (qq - 1) % 5 == 0 {
                w
            } else if w % 5 == 0 {
                q1
            } else {
                0
            };
            exact(q1 * (qq - w - 16) + 65 * w - 48 * eps, 120 * w, what)?
        }
        P::Psl2f { f, omega } => {
            let n = q.n() as u64;
            let big = (1i128) << f;
            let w = omega as i128;
            let den = 2 * big * (big + 1) * (big - 1) * w;
            if (n / f) % 2 == 1 {
                let g = gcd((1u64 << f) + 1, omega) as i128;
                let num = q1 * (qq - w - big * (big - 1) * g - big)
                    + (big + 1) * w * (big * big - big + 1);
                exact(num, den, what)?
            } else {
                let num =
                    q1 * (qq - big * big - w) - w * (2 * big * big * big - big * big - 2 * big - 1);
                exact(num, den, what)? + 1
            }
        }
        P::T31(_) | P::CycQp(_) | P::Omega { .. } | P::Psl22Split { .. } | P::DihQp { .. } => {
            unreachable!("handled above")
        }
    })
}

fn index_two_even(qq: i128, a: i128, c: i128, e: i128, what: &dyn Fn() -> String) -> Result<i128> {
    let e_over_c = exact(e, c, what)?;
    exact(
        (qq + 1) * (qq - 2 * a - c - e_over_c + 1) + 3 * e,
        4 * e,
        what,
    )
}

fn eabsd(qq: i128, f: u64, d: u64, omega: u64, what: &dyn Fn() -> String) -> Result<i128> {
    let big = 1i128 << f;
    let (d, w) = (d as i128, omega as i128);
    exact(
        (qq + 1) * (qq - w - big) + w * (big + 1),
        2 * big * d * w,
        what,
    )
}

/// Numbers of type A and type B2 elements outside the pointwise stabilizer
/// for index two and q odd. Rows are tested top-down.
pub(crate) fn p33_hk(q: u64, a: u64, c: u64, e: u64, l: u64) -> (u64, u64) {
    let q1 = q + 1;
    if !q1.is_multiple_of(2 * a) {
        (e / c, e / 2)
    } else if !c.is_multiple_of(2 * a) {
        (e / c, 0)
    } else if !q1.is_multiple_of(2 * l) {
        (0, e)
    } else if !c.is_multiple_of(2 * l) {
        (0, 0)
    } else {
        (2 * e / c, 0)
    }
}

pub(crate) fn p35_h(q: u64, a: u64, l: u64) -> u64 {
    let third = (q + 1) / 3;
    if !third.is_multiple_of(a) {
        2
    } else if !third.is_multiple_of(l) {
        0
    } else {
        6
    }
}

/// `(2r, 3s, t)` for index six.
fn p36_rst(q: u64, a: u64, e: u64, what: &dyn Fn() -> String) -> Result<(i128, i128, i128)> {
    let e = e as i128;
    let odd = q % 2 == 1;
    let wild_half = odd && !q.div_ceil(2).is_multiple_of(a);
    let r2 = match (q % 3, wild_half) {
        (0 | 1, true) => 7 * e,
        (2, true) => 3 * e,
        (0 | 1, false) => 4 * e,
        _ => 0,
    };
    let s3 = if q % 3 == 2 && !((q + 1) / 3).is_multiple_of(a) {
        3 * exact(4 * e, 3, what)?
    } else {
        0
    };
    let t = if odd { 0 } else { 3 * e };
    Ok((r2, s3, t))
}
