//! Projective 3x3 matrices over F_{q^2} and the unitary groups preserving
//! the two Hermitian curve models.

mod classify;
mod fixed;
mod poly;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, parse_err, Result};
use crate::gf::{ElementLiteral, Fe, FieldCtx};
use crate::numthy::{factorize, lcm};

pub use classify::{
    classify, classify_with_order, homology_center, EigenPattern, ElementClass, ElementType,
};
pub use fixed::fixed_points_on_curve;

/// Row-major 3x3 matrix.
pub type Mat = [Fe; 9];

/// Column vector, also used for projective points.
pub type Vec3 = [Fe; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// `X^{q+1} + Y^{q+1} + Z^{q+1} = 0`
    Model1,
    /// `X Y^q - X^q Y + w3 Z^{q+1} = 0`
    Model3,
}

impl std::str::FromStr for Model {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Model> {
        match s.to_ascii_lowercase().as_str() {
            "model1" | "m1" | "1" => Ok(Model::Model1),
            "model3" | "m3" | "3" => Ok(Model::Model3),
            _ => Err(parse_err!("unknown curve model {s:?}")),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Model1 => "MODEL1",
            Model::Model3 => "MODEL3",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GramForm {
    model: Model,
    b: Mat,
}

impl GramForm {
    pub fn new(ctx: &FieldCtx, model: Model) -> GramForm {
        let (o, z) = (Fe::ONE, Fe::ZERO);
        let b = match model {
            Model::Model1 => [o, z, z, z, o, z, z, z, o],
            Model::Model3 => {
                let w3 = if ctx.p() == 2 {
                    o
                } else {
                    ctx.gen_pow((ctx.q() - 1) / 2)
                };
                [z, o, z, ctx.neg(o), z, z, z, z, w3]
            }
        };
        GramForm { model, b }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn matrix(&self) -> &Mat {
        &self.b
    }

    /// `x^T B y^q`.
    pub fn form(&self, ctx: &FieldCtx, x: &Vec3, y: &Vec3) -> Fe {
        let mut acc = Fe::ZERO;
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                let t = ctx.mul(self.b[3 * i + j], ctx.conj(yj));
                acc = ctx.add(acc, ctx.mul(xi, t));
            }
        }
        acc
    }

    /// Whether `x` lies on the curve.
    pub fn on_curve(&self, ctx: &FieldCtx, x: &Vec3) -> bool {
        self.form(ctx, x, x).is_zero()
    }

    pub fn is_hermitian(&self, ctx: &FieldCtx) -> bool {
        (0..3).all(|i| (0..3).all(|j| ctx.conj(self.b[3 * i + j]) == self.b[3 * j + i]))
    }
}

/// A nonsingular matrix modulo scalars, stored with its first nonzero
/// entry equal to one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjMatrix(Mat);

impl ProjMatrix {
    pub fn identity() -> ProjMatrix {
        let (o, z) = (Fe::ONE, Fe::ZERO);
        ProjMatrix([o, z, z, z, o, z, z, z, o])
    }

    /// Normalizes a raw matrix; singular input is rejected.
    pub fn new(ctx: &FieldCtx, m: Mat) -> Result<ProjMatrix> {
        if det(ctx, &m).is_zero() {
            return Err(domain!("singular matrix {}", ProjMatrix(m)));
        }
        Ok(Self::normalized(ctx, m))
    }

    pub fn diag(ctx: &FieldCtx, a: Fe, b: Fe, c: Fe) -> Result<ProjMatrix> {
        let z = Fe::ZERO;
        Self::new(ctx, [a, z, z, z, b, z, z, z, c])
    }

    /// Embeds a 2x2 block in the upper-left corner.
    pub fn block(ctx: &FieldCtx, a: Fe, b: Fe, c: Fe, d: Fe) -> Result<ProjMatrix> {
        let z = Fe::ZERO;
        Self::new(ctx, [a, b, z, c, d, z, z, z, Fe::ONE])
    }

    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<ProjMatrix> {
        let lits = parse_matrix_literal(s)?;
        Self::new(ctx, lits.map(|l| ctx.element(l)))
    }

    fn normalized(ctx: &FieldCtx, mut m: Mat) -> ProjMatrix {
        let lead = *m.iter().find(|x| !x.is_zero()).expect("nonzero matrix");
        if lead != Fe::ONE {
            let s = ctx.recip(lead);
            for x in m.iter_mut() {
                *x = ctx.mul(*x, s);
            }
        }
        ProjMatrix(m)
    }

    pub fn entries(&self) -> &Mat {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> Fe {
        self.0[3 * row + col]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn mul(&self, ctx: &FieldCtx, rhs: &ProjMatrix) -> ProjMatrix {
        Self::normalized(ctx, mat_mul(ctx, &self.0, &rhs.0))
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> ProjMatrix {
        Self::normalized(ctx, adjugate(ctx, &self.0))
    }

    pub fn pow(&self, ctx: &FieldCtx, mut e: u128) -> ProjMatrix {
        let mut acc = Self::identity();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ctx, &base);
            }
        }
        acc
    }

    /// `n^{-1} self n`.
    pub fn conjugate_by(&self, ctx: &FieldCtx, n: &ProjMatrix) -> ProjMatrix {
        n.inverse(ctx).mul(ctx, self).mul(ctx, n)
    }

    /// The matrix applied to a column vector.
    pub fn apply(&self, ctx: &FieldCtx, v: &Vec3) -> Vec3 {
        let m = &self.0;
        std::array::from_fn(|i| dot(ctx, &[m[3 * i], m[3 * i + 1], m[3 * i + 2]], v))
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(if i % 3 == 0 { ";" } else { "," })?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Parses `"a,b,c;d,e,f;g,h,i"` into nine element literals.
pub fn parse_matrix_literal(s: &str) -> Result<[ElementLiteral; 9]> {
    let rows: Vec<&str> = s.trim().split(';').collect();
    if rows.len() != 3 {
        return Err(parse_err!(
            "matrix literal needs 3 rows, found {}",
            rows.len()
        ));
    }
    let mut out = [ElementLiteral::Zero; 9];
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != 3 {
            return Err(parse_err!(
                "row {} needs 3 entries, found {}",
                i + 1,
                cells.len()
            ));
        }
        for (j, cell) in cells.iter().enumerate() {
            out[3 * i + j] = cell.parse()?;
        }
    }
    Ok(out)
}

pub fn dot(ctx: &FieldCtx, a: &Vec3, b: &Vec3) -> Fe {
    let t = ctx.add(ctx.mul(a[0], b[0]), ctx.mul(a[1], b[1]));
    ctx.add(t, ctx.mul(a[2], b[2]))
}

pub fn mat_mul(ctx: &FieldCtx, a: &Mat, b: &Mat) -> Mat {
    let mut out = [Fe::ZERO; 9];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Fe::ZERO;
            for k in 0..3 {
                acc = ctx.add(acc, ctx.mul(a[3 * i + k], b[3 * k + j]));
            }
            out[3 * i + j] = acc;
        }
    }
    out
}

pub fn det(ctx: &FieldCtx, m: &Mat) -> Fe {
    let minor =
        |a: usize, b: usize, c: usize, d: usize| ctx.sub(ctx.mul(m[a], m[d]), ctx.mul(m[b], m[c]));
    let t0 = ctx.mul(m[0], minor(4, 5, 7, 8));
    let t1 = ctx.mul(m[1], minor(3, 5, 6, 8));
    let t2 = ctx.mul(m[2], minor(3, 4, 6, 7));
    ctx.add(ctx.sub(t0, t1), t2)
}

fn adjugate(ctx: &FieldCtx, m: &Mat) -> Mat {
    let c = |a: usize, b: usize, cc: usize, d: usize| {
        ctx.sub(ctx.mul(m[a], m[d]), ctx.mul(m[b], m[cc]))
    };
    [
        c(4, 5, 7, 8),
        c(2, 1, 8, 7),
        c(1, 2, 4, 5),
        c(5, 3, 8, 6),
        c(0, 2, 6, 8),
        c(2, 0, 5, 3),
        c(3, 4, 6, 7),
        c(1, 0, 7, 6),
        c(0, 1, 3, 4),
    ]
}

pub fn cross(ctx: &FieldCtx, a: &Vec3, b: &Vec3) -> Vec3 {
    [
        ctx.sub(ctx.mul(a[1], b[2]), ctx.mul(a[2], b[1])),
        ctx.sub(ctx.mul(a[2], b[0]), ctx.mul(a[0], b[2])),
        ctx.sub(ctx.mul(a[0], b[1]), ctx.mul(a[1], b[0])),
    ]
}

/// Scales a nonzero vector so its first nonzero coordinate is one.
pub fn normalize_point(ctx: &FieldCtx, v: &Vec3) -> Option<Vec3> {
    let lead = *v.iter().find(|x| !x.is_zero())?;
    let s = ctx.recip(lead);
    Some(v.map(|x| ctx.mul(x, s)))
}

pub fn rank(ctx: &FieldCtx, m: &Mat) -> usize {
    let mut a = *m;
    let mut r = 0;
    for col in 0..3 {
        let Some(piv) = (r..3).find(|&i| !a[3 * i + col].is_zero()) else {
            continue;
        };
        for j in 0..3 {
            a.swap(3 * r + j, 3 * piv + j);
        }
        let inv = ctx.recip(a[3 * r + col]);
        for i in 0..3 {
            if i == r || a[3 * i + col].is_zero() {
                continue;
            }
            let f = ctx.mul(a[3 * i + col], inv);
            for j in 0..3 {
                a[3 * i + j] = ctx.sub(a[3 * i + j], ctx.mul(f, a[3 * r + j]));
            }
        }
        r += 1;
    }
    r
}

/// `M - s I`.
pub(crate) fn shift(ctx: &FieldCtx, m: &Mat, s: Fe) -> Mat {
    let mut out = *m;
    for i in 0..3 {
        out[4 * i] = ctx.sub(out[4 * i], s);
    }
    out
}

/// Whether `M^T B M^q` is a nonzero multiple of `B`.
pub fn is_unitary(ctx: &FieldCtx, gram: &GramForm, m: &ProjMatrix) -> bool {
    let mt: Mat = std::array::from_fn(|k| m.0[3 * (k % 3) + k / 3]);
    let ms = m.0.map(|x| ctx.conj(x));
    let p = mat_mul(ctx, &mat_mul(ctx, &mt, &gram.b), &ms);
    let idx = gram
        .b
        .iter()
        .position(|x| !x.is_zero())
        .expect("nonzero form");
    let Ok(lambda) = ctx.div(p[idx], gram.b[idx]) else {
        return false;
    };
    !lambda.is_zero()
        && p.iter()
            .zip(&gram.b)
            .all(|(&x, &y)| x == ctx.mul(lambda, y))
}

/// A multiple of every element order in PGU(3, q).
fn order_bound(ctx: &FieldCtx) -> u128 {
    let (p, q) = (ctx.p(), ctx.q());
    let tame = lcm(q * q - 1, q * q - q + 1) as u128;
    tame * (p as u128) * (p as u128)
}

fn order_bound_primes(ctx: &FieldCtx) -> Vec<u64> {
    let q = ctx.q();
    let mut ps: Vec<u64> = [q - 1, q + 1, q * q - q + 1, ctx.p()]
        .iter()
        .flat_map(|&x| factorize(x.max(1)).primes().collect::<Vec<_>>())
        .collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// Least `k >= 1` with `M^k` scalar.
pub fn proj_order(ctx: &FieldCtx, m: &ProjMatrix) -> Result<u64> {
    let mut x = order_bound(ctx);
    if !m.pow(ctx, x).is_identity() {
        return Err(crate::error::consistency!(
            "{m} has no order dividing {x}; it is not in PGU(3,{})",
            ctx.q()
        ));
    }
    for r in order_bound_primes(ctx) {
        let r = r as u128;
        while x.is_multiple_of(r) && m.pow(ctx, x / r).is_identity() {
            x /= r;
        }
    }
    Ok(x as u64)
}

/// The unitary quasi-reflection `x -> x - (1 - zeta) h(x, v) / h(v, v) v`
/// for a Hermitian form, `zeta^{q+1} = 1` and `h(v, v) != 0`.
pub fn quasi_reflection(ctx: &FieldCtx, gram: &GramForm, v: &Vec3, zeta: Fe) -> Result<ProjMatrix> {
    if !gram.is_hermitian(ctx) {
        return Err(domain!(
            "{} form is not Hermitian over this field",
            gram.model
        ));
    }
    if ctx.pow(zeta, ctx.q() + 1) != Fe::ONE {
        return Err(domain!("{zeta} is not a (q+1)-th root of unity"));
    }
    let eta = gram.form(ctx, v, v);
    if eta.is_zero() {
        return Err(domain!("reflection vector is isotropic"));
    }
    let c = ctx.div(ctx.sub(Fe::ONE, zeta), eta)?;
    let vs = v.map(|x| ctx.conj(x));
    let w: Vec3 = std::array::from_fn(|i| {
        dot(
            ctx,
            &[gram.b[3 * i], gram.b[3 * i + 1], gram.b[3 * i + 2]],
            &vs,
        )
    });
    let mut r = ProjMatrix::identity().0;
    for i in 0..3 {
        for j in 0..3 {
            let t = ctx.mul(c, ctx.mul(v[i], w[j]));
            r[3 * i + j] = ctx.sub(r[3 * i + j], t);
        }
    }
    ProjMatrix::new(ctx, r)
}
