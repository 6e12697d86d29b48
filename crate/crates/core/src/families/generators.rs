use super::genus::index_two_equivalent;
use super::{FamilyParams, Torus, Verdict};
use crate::error::{domain, Result};
use crate::gf::{Fe, FieldCtx};
use crate::numthy::{gcd, valuation, PrimePower};
use crate::pgu::{GramForm, Model, ProjMatrix};

/// A generating set for the group described by `params`, with the form it
/// preserves.
pub fn generators(ctx: &FieldCtx, params: &FamilyParams) -> Result<(GramForm, Vec<ProjMatrix>)> {
    use FamilyParams as P;
    let q = PrimePower::new(ctx.q())?;
    if let Verdict::Invalid(why) = super::validate(&q, params)? {
        return Err(domain!(
            "{} {params} is not valid for q={q}: {why}",
            params.family()
        ));
    }
    let m1 = GramForm::new(ctx, Model::Model1);
    let m3 = GramForm::new(ctx, Model::Model3);
    let b = Builder { ctx };
    if let Some((a, c, e)) = index_two_equivalent(params) {
        if let P::Psl22Split { omega } = *params {
            let mut gens = b.sl22()?;
            gens.extend(b.omega(omega)?);
            return Ok((m3, gens));
        }
        let P::DihQp { d, omega } = *params else {
            unreachable!()
        };
        debug_assert_eq!((a, c, e), (gcd(d, omega), omega, d * omega));
        let x = ctx.root_of_unity(d)?;
        let s = ctx.add(x, ctx.recip(x));
        let mut gens = vec![b.block(Fe::ZERO, Fe::ONE, Fe::ONE, s)?, b.swap2()?];
        gens.extend(b.omega(omega)?);
        return Ok((m3, gens));
    }
    let gens = match params {
        P::T31(t) | P::CycQp(t) => return Ok((m1, b.torus(&q, t)?)),
        P::Omega { omega } => return Ok((m3, b.omega(*omega)?)),
        P::P32 { a, c, e } => {
            let mut g = b.index_two_base(*a, *c, *e)?;
            g.push(b.monomial([1, 0, 2], [Fe::ONE, Fe::ONE, Fe::ONE])?);
            return Ok((m1, g));
        }
        P::P33 { a, c, e, l } => {
            let mut g = b.index_two_base(*a, *c, *e)?;
            let t = ctx.root_of_unity(*l)?;
            g.push(b.monomial([1, 0, 2], [t, Fe::ONE, Fe::ONE])?);
            return Ok((m1, g));
        }
        P::P34 { a, e, m } | P::P35 { a, e, m, .. } => {
            let l = if let P::P35 { l, .. } = params { *l } else { 1 };
            let mut g = b.k_group(*a)?;
            let rho = ctx.root_of_unity(e / (a * a))?;
            g.push(b.diag(rho, ctx.pow(rho, *m))?);
            let t = ctx.root_of_unity(l)?;
            g.push(b.monomial([1, 2, 0], [t, Fe::ONE, Fe::ONE])?);
            return Ok((m1, g));
        }
        P::P36 { a, e } => {
            let mut g = b.k_group(*a)?;
            if *e == 3 * a * a {
                let rho = ctx.root_of_unity(3)?;
                g.push(b.diag(rho, ctx.recip(rho))?);
            }
            g.push(b.monomial([1, 2, 0], [Fe::ONE; 3])?);
            g.push(b.monomial([1, 0, 2], [Fe::ONE; 3])?);
            return Ok((m1, g));
        }
        P::Psl22EvenN { .. } => b.sl22()?,
        P::CycQm { d, .. } => vec![b.torus2(*d)?],
        P::DihQm { d, .. } => vec![b.torus2(*d)?, b.swap2()?],
        P::Eab { f, .. } => {
            let basis = if (ctx.n() as u64).is_multiple_of(*f) {
                b.subfield_basis(*f)
            } else {
                b.monomials(*f)
            };
            b.transvections(&basis)?
        }
        P::Eabsd { f, d, .. } => {
            let mut g = b.transvections(&b.span_basis(*f))?;
            g.push(b.torus2(*d)?);
            g
        }
        P::A4 { .. } => {
            let mut g = b.transvections(&b.subfield_basis(2))?;
            g.push(b.torus2(3)?);
            g
        }
        P::A5 { .. } => {
            let mut g = b.transvections(&b.subfield_basis(2))?;
            g.push(b.swap2()?);
            g
        }
        P::Psl2f { f, .. } => {
            let mut g = b.transvections(&b.subfield_basis(*f))?;
            g.push(b.swap2()?);
            g
        }
        P::Psl22Nonsplit { .. } | P::Psl22Split { .. } | P::DihQp { .. } => unreachable!(),
    };
    let omega = match *params {
        P::Psl22EvenN { omega }
        | P::CycQm { omega, .. }
        | P::DihQm { omega, .. }
        | P::Eab { omega, .. }
        | P::Eabsd { omega, .. }
        | P::A4 { omega }
        | P::A5 { omega }
        | P::Psl2f { omega, .. } => omega,
        _ => unreachable!(),
    };
    let mut gens = gens;
    gens.extend(b.omega(omega)?);
    Ok((m3, gens))
}

/// The generators of the non-split S3-extension construction, kept for
/// diagnostics: they generate a group of order `18 * omega`, not `6 * omega`.
pub fn nonsplit_construction(ctx: &FieldCtx, omega: u64) -> Result<(GramForm, Vec<ProjMatrix>)> {
    let q1 = ctx.q() + 1;
    let k = valuation(omega, 3);
    let top = 3u64.pow(k + 1);
    if ctx.p() != 2 || k == 0 || !q1.is_multiple_of(top) || !q1.is_multiple_of(omega) {
        return Err(domain!(
            "construction needs q even, 3 | omega | q+1 and 3^(k+1) | q+1"
        ));
    }
    let b = Builder { ctx };
    let lambda = ctx.root_of_unity(3)?;
    let mu = ctx.root_of_unity(top)?;
    let xi = ctx.root_of_unity(omega / 3u64.pow(k))?;
    let gens = vec![
        b.diag(ctx.mul(lambda, mu), ctx.mul(ctx.recip(lambda), mu))?,
        b.monomial([1, 0, 2], [Fe::ONE; 3])?,
        b.diag(xi, xi)?,
    ];
    Ok((GramForm::new(ctx, Model::Model1), gens))
}

struct Builder<'a> {
    ctx: &'a FieldCtx,
}

impl Builder<'_> {
    fn diag(&self, x: Fe, y: Fe) -> Result<ProjMatrix> {
        ProjMatrix::diag(self.ctx, x, y, Fe::ONE)
    }

    /// Row `i` holds `scale[i]` in column `perm[i]` and zeros elsewhere.
    fn monomial(&self, perm: [usize; 3], scale: [Fe; 3]) -> Result<ProjMatrix> {
        let mut m = [Fe::ZERO; 9];
        for row in 0..3 {
            m[3 * row + perm[row]] = scale[row];
        }
        ProjMatrix::new(self.ctx, m)
    }

    fn block(&self, a: Fe, b: Fe, c: Fe, d: Fe) -> Result<ProjMatrix> {
        ProjMatrix::block(self.ctx, a, b, c, d)
    }

    fn swap2(&self) -> Result<ProjMatrix> {
        self.block(Fe::ZERO, Fe::ONE, Fe::ONE, Fe::ZERO)
    }

    fn torus2(&self, d: u64) -> Result<ProjMatrix> {
        let t = self.ctx.root_of_unity(d)?;
        self.block(t, Fe::ZERO, Fe::ZERO, self.ctx.recip(t))
    }

    fn sl22(&self) -> Result<Vec<ProjMatrix>> {
        Ok(vec![
            self.swap2()?,
            self.block(Fe::ONE, Fe::ONE, Fe::ZERO, Fe::ONE)?,
        ])
    }

    fn omega(&self, omega: u64) -> Result<Vec<ProjMatrix>> {
        let xi = self.ctx.root_of_unity(omega)?;
        Ok(vec![self.diag(xi, xi)?])
    }

    fn transvections(&self, basis: &[Fe]) -> Result<Vec<ProjMatrix>> {
        basis
            .iter()
            .map(|&u| self.block(Fe::ONE, u, Fe::ZERO, Fe::ONE))
            .collect()
    }

    /// `1, g, ..., g^{f-1}` for a generator `g` of `F_{2^f}`; requires `f | n`.
    fn subfield_basis(&self, f: u64) -> Vec<Fe> {
        let gen = self.ctx.gen_pow((self.ctx.q2() - 1) / ((1 << f) - 1));
        (0..f).map(|i| self.ctx.pow(gen, i)).collect()
    }

    /// The first `f` powers of a generator of `F_q`.
    fn monomials(&self, f: u64) -> Vec<Fe> {
        let theta = self.ctx.gen_pow(self.ctx.q() + 1);
        (0..f).map(|i| self.ctx.pow(theta, i)).collect()
    }

    /// An F_2-basis of an `F_{2^g}`-subspace of `F_q` of dimension `f / g`,
    /// `g = gcd(f, n)`; for `f | n` this is the subfield `F_{2^f}`.
    fn span_basis(&self, f: u64) -> Vec<Fe> {
        let g = gcd(f, self.ctx.n() as u64);
        let inner = self.subfield_basis(g);
        let outer = self.monomials(f / g);
        outer
            .iter()
            .flat_map(|&o| inner.iter().map(move |&i| self.ctx.mul(o, i)))
            .collect()
    }

    fn index_two_base(&self, a: u64, c: u64, e: u64) -> Result<Vec<ProjMatrix>> {
        let ctx = self.ctx;
        let lambda = ctx.root_of_unity(a)?;
        let mu = ctx.root_of_unity(c)?;
        let rho = ctx.root_of_unity(e / c)?;
        Ok(vec![
            self.diag(lambda, Fe::ONE)?,
            self.diag(mu, mu)?,
            self.diag(rho, ctx.recip(rho))?,
        ])
    }

    fn k_group(&self, a: u64) -> Result<Vec<ProjMatrix>> {
        let l = self.ctx.root_of_unity(a)?;
        Ok(vec![self.diag(l, Fe::ONE)?, self.diag(Fe::ONE, l)?])
    }

    fn torus(&self, q: &PrimePower, t: &Torus) -> Result<Vec<ProjMatrix>> {
        let ctx = self.ctx;
        let (la, lb, lc) = (
            ctx.root_of_unity(t.a)?,
            ctx.root_of_unity(t.b)?,
            ctx.root_of_unity(t.c)?,
        );
        let mut gens = vec![
            self.diag(la, Fe::ONE)?,
            self.diag(Fe::ONE, lb)?,
            self.diag(lc, lc)?,
        ];
        for (&(p, _), &v) in q.q_plus_one().factors().iter().zip(&t.v) {
            if v == 0 {
                continue;
            }
            let (s, tt, u) = (valuation(t.a, p), valuation(t.b, p), valuation(t.c, p));
            let m = s.max(tt).max(u);
            let ord = p.pow(v + m);
            let z = ctx.root_of_unity(ord)?;
            let zp = |k: i128| ctx.pow(z, k.rem_euclid(ord as i128) as u64);
            let gen = if s > tt {
                self.diag(z, zp(p.pow(s - tt) as i128))?
            } else if tt > s {
                self.diag(zp(p.pow(tt - s) as i128), z)?
            } else if s < u {
                self.diag(zp(p.pow(u - s) as i128 - 1), zp(-1))?
            } else {
                self.diag(z, zp(2))?
            };
            gens.push(gen);
        }
        Ok(gens)
    }
}
