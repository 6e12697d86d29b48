//! Dense polynomials over F_{q^2}, lowest degree first.

use crate::gf::{Fe, FieldCtx};

pub(crate) type Poly = Vec<Fe>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[Fe]) -> Option<usize> {
    a.iter().rposition(|x| !x.is_zero())
}

pub(crate) fn monic(ctx: &FieldCtx, a: Poly) -> Poly {
    let a = trim(a);
    match a.last() {
        Some(&lead) if lead != Fe::ONE => {
            let s = ctx.recip(lead);
            a.into_iter().map(|x| ctx.mul(x, s)).collect()
        }
        _ => a,
    }
}

pub(crate) fn rem(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Poly {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let inv = ctx.recip(b[db]);
    let mut r = trim(a.to_vec());
    while r.len() > db {
        let k = r.len() - 1;
        let f = ctx.mul(r[k], inv);
        for (i, &bi) in b.iter().enumerate() {
            r[k - db + i] = ctx.sub(r[k - db + i], ctx.mul(f, bi));
        }
        r = trim(r);
    }
    r
}

pub(crate) fn gcd(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Poly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(ctx, &x, &y);
        x = y;
        y = r;
    }
    monic(ctx, x)
}

pub(crate) fn mul(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
        }
    }
    out
}

pub(crate) fn powmod(ctx: &FieldCtx, a: &[Fe], mut e: u64, m: &[Fe]) -> Poly {
    let mut acc = vec![Fe::ONE];
    let mut base = rem(ctx, a, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(ctx, &mul(ctx, &acc, &base), m);
        }
        e >>= 1;
        if e > 0 {
            base = rem(ctx, &mul(ctx, &base, &base), m);
        }
    }
    acc
}

/// `a - T`.
pub(crate) fn minus_t(ctx: &FieldCtx, a: &[Fe]) -> Poly {
    let mut out = a.to_vec();
    if out.len() < 2 {
        out.resize(2, Fe::ZERO);
    }
    out[1] = ctx.sub(out[1], Fe::ONE);
    trim(out)
}

pub(crate) fn eval(ctx: &FieldCtx, a: &[Fe], x: Fe) -> Fe {
    a.iter()
        .rev()
        .fold(Fe::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
}

pub(crate) fn derivative(ctx: &FieldCtx, a: &[Fe]) -> Poly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ctx.mul(ctx.from_int(i as i64), c))
            .collect(),
    )
}

/// Distinct roots in F_{q^2} by exhaustive search.
pub(crate) fn roots(ctx: &FieldCtx, a: &[Fe]) -> Vec<Fe> {
    ctx.elements()
        .filter(|&x| eval(ctx, a, x).is_zero())
        .collect()
}

/// Multiplicity of the root `r`.
pub(crate) fn multiplicity(ctx: &FieldCtx, a: &[Fe], r: Fe) -> u32 {
    let mut cur = trim(a.to_vec());
    let mut k = 0;
    while cur.len() > 1 && eval(ctx, &cur, r).is_zero() {
        // synthetic division by (T - r)
        let n = cur.len() - 1;
        let mut quot = vec![Fe::ZERO; n];
        let mut carry = Fe::ZERO;
        for i in (0..n).rev() {
            carry = ctx.add(cur[i + 1], ctx.mul(carry, r));
            quot[i] = carry;
        }
        cur = quot;
        k += 1;
    }
    k
}

/// The repeated root of a cubic and its multiplicity, if any.
pub(crate) fn repeated_root(ctx: &FieldCtx, chi: &[Fe]) -> Option<(Fe, u32)> {
    let g = gcd(ctx, chi, &derivative(ctx, chi));
    let pth_root = |x: Fe| ctx.pow(x, ctx.q2() / ctx.p());
    let r = match degree(&g)? {
        0 => return None,
        1 => ctx.neg(g[0]),
        // (T - r)^2, whose derivative vanishes in characteristic 2
        2 if ctx.p() == 2 => pth_root(g[0]),
        2 => ctx.neg(ctx.mul(g[1], ctx.recip(ctx.from_int(2)))),
        // T^3 - r^3 in characteristic 3
        _ => pth_root(ctx.neg(chi[0])),
    };
    Some((r, multiplicity(ctx, chi, r)))
}

/// Characteristic polynomial `det(T I - M)`, monic of degree 3.
pub(crate) fn char_poly(ctx: &FieldCtx, m: &[Fe; 9]) -> Poly {
    let tr = ctx.add(ctx.add(m[0], m[4]), m[8]);
    let minor =
        |a: usize, b: usize, c: usize, d: usize| ctx.sub(ctx.mul(m[a], m[d]), ctx.mul(m[b], m[c]));
    let s2 = ctx.add(
        ctx.add(minor(0, 1, 3, 4), minor(0, 2, 6, 8)),
        minor(4, 5, 7, 8),
    );
    let d = super::det(ctx, m);
    vec![ctx.neg(d), s2, ctx.neg(tr), Fe::ONE]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_of_diagonal() {
        let c = FieldCtx::for_q(7).unwrap();
        let (a, b, z) = (c.gen_pow(3), c.gen_pow(10), Fe::ZERO);
        let m = [a, z, z, z, b, z, z, z, b];
        let chi = char_poly(&c, &m);
        let mut r = roots(&c, &chi);
        r.sort();
        assert_eq!(r, {
            let mut v = vec![a, b];
            v.sort();
            v
        });
        assert_eq!(multiplicity(&c, &chi, a), 1);
        assert_eq!(multiplicity(&c, &chi, b), 2);
        assert_eq!(repeated_root(&c, &chi), Some((b, 2)));
    }

    #[test]
    fn repeated_roots_in_small_characteristic() {
        for q in [2u64, 3, 4, 8, 9, 5] {
            let c = FieldCtx::for_q(q).unwrap();
            for (a, b) in [(c.gen_pow(3), c.gen_pow(7)), (Fe::ONE, c.g())] {
                let z = Fe::ZERO;
                let chi = char_poly(&c, &[a, z, z, z, b, z, z, z, b]);
                assert_eq!(
                    repeated_root(&c, &chi),
                    if a == b { Some((b, 3)) } else { Some((b, 2)) }
                );
                let chi = char_poly(&c, &[b, z, z, z, b, z, z, z, b]);
                assert_eq!(repeated_root(&c, &chi), Some((b, 3)));
            }
        }
    }

    #[test]
    fn frobenius_power_detects_split() {
        let c = FieldCtx::for_q(5).unwrap();
        // (T - 1)(T - g)(T - g^2)
        let f = mul(
            &c,
            &mul(&c, &[c.neg(Fe::ONE), Fe::ONE], &[c.neg(c.g()), Fe::ONE]),
            &[c.neg(c.gen_pow(2)), Fe::ONE],
        );
        let h = powmod(&c, &[Fe::ZERO, Fe::ONE], c.q2(), &f);
        let hx = minus_t(&c, &h);
        assert_eq!(degree(&gcd(&c, &f, &hx)), Some(3));
    }
}
