//! Fixed points of tame elements on the curve, counted over the algebraic
//! closure.

use super::classify::{eigenvector, simple_eigenvalue};
use super::poly::{self, Poly};
use super::{classify, shift, GramForm, ProjMatrix, Vec3};
use crate::error::{consistency, domain, Result};
use crate::gf::{Fe, FieldCtx};
use crate::pgu::EigenPattern;

pub fn fixed_points_on_curve(ctx: &FieldCtx, m: &ProjMatrix, gram: &GramForm) -> Result<u64> {
    let class = classify(ctx, m)?;
    if !class.ty.is_tame() {
        return Err(domain!("{m} is wild (type {})", class.ty));
    }
    let chi = poly::char_poly(ctx, m.entries());
    match class.pattern {
        EigenPattern::Double { .. } => homology_fixed_points(ctx, m, gram, &chi),
        EigenPattern::Distinct => {
            let mut count = 0;
            for r in poly::roots(ctx, &chi) {
                let v = eigenvector(ctx, m, r)
                    .ok_or_else(|| consistency!("no eigenvector for a simple eigenvalue of {m}"))?;
                count += gram.on_curve(ctx, &v) as u64;
            }
            Ok(count)
        }
        EigenPattern::Irreducible => irreducible_fixed_points(ctx, m, gram, &chi),
        EigenPattern::Triple { .. } => {
            Err(consistency!("tame element {m} with a triple eigenvalue"))
        }
    }
}

/// Curve points on the axis plus the center, if it lies on the curve.
fn homology_fixed_points(
    ctx: &FieldCtx,
    m: &ProjMatrix,
    gram: &GramForm,
    chi: &Poly,
) -> Result<u64> {
    let (r, _) = poly::repeated_root(ctx, chi)
        .ok_or_else(|| consistency!("{m} has no repeated eigenvalue"))?;
    let s = simple_eigenvalue(ctx, chi, r);
    let a = shift(ctx, m.entries(), r);
    let n: Vec3 = (0..3)
        .map(|i| [a[3 * i], a[3 * i + 1], a[3 * i + 2]])
        .find(|row| row.iter().any(|x| !x.is_zero()))
        .ok_or_else(|| consistency!("homology {m} is scalar"))?;
    let (o, z) = (Fe::ONE, Fe::ZERO);
    let (u, w) = if !n[0].is_zero() {
        let inv = ctx.recip(n[0]);
        (
            [ctx.neg(ctx.mul(n[1], inv)), o, z],
            [ctx.neg(ctx.mul(n[2], inv)), z, o],
        )
    } else if !n[1].is_zero() {
        ([o, z, z], [z, ctx.neg(ctx.mul(n[2], ctx.recip(n[1]))), o])
    } else {
        ([o, z, z], [z, o, z])
    };
    let mut count = gram.on_curve(ctx, &w) as u64;
    for t in ctx.elements() {
        let x: Vec3 = std::array::from_fn(|i| ctx.add(u[i], ctx.mul(t, w[i])));
        count += gram.on_curve(ctx, &x) as u64;
    }
    let center =
        eigenvector(ctx, m, s).ok_or_else(|| consistency!("homology {m} has no center"))?;
    Ok(count + gram.on_curve(ctx, &center) as u64)
}

/// Arithmetic in F_{q^2}[T] / (chi) for an irreducible cubic `chi`.
struct Cubic<'a> {
    ctx: &'a FieldCtx,
    chi: &'a [Fe],
}

type K = [Fe; 3];

impl Cubic<'_> {
    fn add(&self, a: &K, b: &K) -> K {
        std::array::from_fn(|i| self.ctx.add(a[i], b[i]))
    }

    fn sub(&self, a: &K, b: &K) -> K {
        std::array::from_fn(|i| self.ctx.sub(a[i], b[i]))
    }

    fn mul(&self, a: &K, b: &K) -> K {
        let r = poly::rem(self.ctx, &poly::mul(self.ctx, a, b), self.chi);
        std::array::from_fn(|i| r.get(i).copied().unwrap_or(Fe::ZERO))
    }

    fn pow(&self, a: &K, mut e: u64) -> K {
        let mut acc = [Fe::ONE, Fe::ZERO, Fe::ZERO];
        let mut base = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            base = self.mul(&base, &base);
        }
        acc
    }

    fn scalar(x: Fe) -> K {
        [x, Fe::ZERO, Fe::ZERO]
    }

    fn is_zero(a: &K) -> bool {
        a.iter().all(|x| x.is_zero())
    }
}

/// The three eigenvectors are Galois conjugate over F_{q^2}, so they are
/// either all on the curve or none is.
fn irreducible_fixed_points(
    ctx: &FieldCtx,
    m: &ProjMatrix,
    gram: &GramForm,
    chi: &Poly,
) -> Result<u64> {
    let k = Cubic { ctx, chi };
    let theta: K = [Fe::ZERO, Fe::ONE, Fe::ZERO];
    let rows: [[K; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let e = Cubic::scalar(m.entry(i, j));
            if i == j {
                k.sub(&e, &theta)
            } else {
                e
            }
        })
    });
    let cross = |a: &[K; 3], b: &[K; 3]| -> [K; 3] {
        [
            k.sub(&k.mul(&a[1], &b[2]), &k.mul(&a[2], &b[1])),
            k.sub(&k.mul(&a[2], &b[0]), &k.mul(&a[0], &b[2])),
            k.sub(&k.mul(&a[0], &b[1]), &k.mul(&a[1], &b[0])),
        ]
    };
    let v = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| cross(&rows[i], &rows[j]))
        .find(|v| v.iter().any(|x| !Cubic::is_zero(x)))
        .ok_or_else(|| consistency!("no eigenvector over the cubic extension for {m}"))?;
    let vq: [K; 3] = std::array::from_fn(|j| k.pow(&v[j], ctx.q()));
    let b = gram.matrix();
    let mut h = [Fe::ZERO; 3];
    for i in 0..3 {
        for j in 0..3 {
            let bij = Cubic::scalar(b[3 * i + j]);
            h = k.add(&h, &k.mul(&k.mul(&v[i], &bij), &vq[j]));
        }
    }
    Ok(if Cubic::is_zero(&h) { 3 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgu::{classify, ElementType, Model};

    #[test]
    fn homology_axis_is_a_chord() {
        for q in [3u64, 4, 5, 8] {
            let c = FieldCtx::for_q(q).unwrap();
            let gram = GramForm::new(&c, Model::Model1);
            let l = c.root_of_unity(q + 1).unwrap();
            let m = ProjMatrix::diag(&c, l, l, Fe::ONE).unwrap();
            assert_eq!(fixed_points_on_curve(&c, &m, &gram).unwrap(), q + 1);
        }
    }

    #[test]
    fn b1_fixes_no_curve_point() {
        let c = FieldCtx::for_q(5).unwrap();
        let gram = GramForm::new(&c, Model::Model1);
        let l = c.root_of_unity(6).unwrap();
        let m = ProjMatrix::diag(&c, l, c.pow(l, 2), Fe::ONE).unwrap();
        assert_eq!(fixed_points_on_curve(&c, &m, &gram).unwrap(), 0);
    }

    #[test]
    fn b2_fixes_two_curve_points() {
        for q in [4u64, 8] {
            let c = FieldCtx::for_q(q).unwrap();
            let gram = GramForm::new(&c, Model::Model3);
            let t = c.gen_pow(q + 1);
            let m = ProjMatrix::diag(&c, t, c.recip(t), Fe::ONE).unwrap();
            assert_eq!(classify(&c, &m).unwrap().ty, ElementType::B2);
            assert_eq!(fixed_points_on_curve(&c, &m, &gram).unwrap(), 2);
        }
    }

    #[test]
    fn b3_fixes_three_curve_points() {
        let c = FieldCtx::for_q(5).unwrap();
        let gram = GramForm::new(&c, Model::Model1);
        let (t, o, z) = (c.root_of_unity(3).unwrap(), Fe::ONE, Fe::ZERO);
        let m = ProjMatrix::new(&c, [z, t, z, z, z, o, o, z, z]).unwrap();
        assert_eq!(fixed_points_on_curve(&c, &m, &gram).unwrap(), 3);
    }

    #[test]
    fn wild_is_rejected() {
        let c = FieldCtx::for_q(4).unwrap();
        let gram = GramForm::new(&c, Model::Model3);
        let z = Fe::ZERO;
        let m = ProjMatrix::new(&c, [Fe::ONE, z, z, Fe::ONE, Fe::ONE, z, z, z, Fe::ONE]).unwrap();
        assert!(matches!(
            fixed_points_on_curve(&c, &m, &gram),
            Err(crate::Error::Domain(_))
        ));
    }
}
