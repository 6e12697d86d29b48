use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::{self, Poly};
use super::{cross, normalize_point, proj_order, rank, shift, ProjMatrix, Vec3};
use crate::error::{consistency, domain, Result};
use crate::gf::{Fe, FieldCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ElementType {
    A,
    B1,
    B2,
    B3,
    C,
    D,
    E,
}

impl ElementType {
    pub const ALL: [ElementType; 7] = [
        ElementType::A,
        ElementType::B1,
        ElementType::B2,
        ElementType::B3,
        ElementType::C,
        ElementType::D,
        ElementType::E,
    ];

    /// Contribution `i(sigma)` to the different.
    pub fn contribution(self, q: u64) -> u64 {
        match self {
            ElementType::A => q + 1,
            ElementType::B1 => 0,
            ElementType::B2 => 2,
            ElementType::B3 => 3,
            ElementType::C => q + 2,
            ElementType::D => 2,
            ElementType::E => 1,
        }
    }

    pub fn is_tame(self) -> bool {
        matches!(
            self,
            ElementType::A | ElementType::B1 | ElementType::B2 | ElementType::B3
        )
    }
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for ElementType {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        ElementType::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| crate::error::parse_err!("unknown element type {s:?}"))
    }
}

/// Eigenvalue structure of a representative matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EigenPattern {
    /// Three distinct eigenvalues in F_{q^2}.
    Distinct,
    /// No eigenvalue in F_{q^2}.
    Irreducible,
    /// One eigenvalue of multiplicity two.
    Double { eigenspace_dim: u8 },
    /// A single eigenvalue of multiplicity three.
    Triple { eigenspace_dim: u8 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementClass {
    #[serde(rename = "type")]
    pub ty: ElementType,
    pub contribution: u64,
    pub order: u64,
    pub pattern: EigenPattern,
}

pub fn classify(ctx: &FieldCtx, m: &ProjMatrix) -> Result<ElementClass> {
    if m.is_identity() {
        return Err(domain!("the identity has no class"));
    }
    let order = proj_order(ctx, m)?;
    classify_with_order(ctx, m, order)
}

/// Classifies a non-identity element whose projective order is already known.
pub fn classify_with_order(ctx: &FieldCtx, m: &ProjMatrix, order: u64) -> Result<ElementClass> {
    if m.is_identity() || order <= 1 {
        return Err(domain!("the identity has no class"));
    }
    let (p, q) = (ctx.p(), ctx.q());
    let chi = poly::char_poly(ctx, m.entries());
    let (ty, pattern) = if order.is_multiple_of(p) {
        wild(ctx, m, &chi, order)?
    } else {
        tame(ctx, m, &chi, order)?
    };
    Ok(ElementClass {
        ty,
        contribution: ty.contribution(q),
        order,
        pattern,
    })
}

fn wild(
    ctx: &FieldCtx,
    m: &ProjMatrix,
    chi: &Poly,
    order: u64,
) -> Result<(ElementType, EigenPattern)> {
    let (p, q) = (ctx.p(), ctx.q());
    let roots = poly::roots(ctx, chi);
    let pattern = match roots.as_slice() {
        [r] if poly::multiplicity(ctx, chi, *r) == 3 => EigenPattern::Triple {
            eigenspace_dim: (3 - rank(ctx, &shift(ctx, m.entries(), *r))) as u8,
        },
        [r, s] => {
            let double = if poly::multiplicity(ctx, chi, *r) == 2 {
                *r
            } else {
                *s
            };
            EigenPattern::Double {
                eigenspace_dim: (3 - rank(ctx, &shift(ctx, m.entries(), double))) as u8,
            }
        }
        _ => {
            return Err(consistency!(
                "wild element {m} of order {order} is not unipotent up to a homology"
            ))
        }
    };
    let ty = match (order, pattern) {
        (o, EigenPattern::Triple { eigenspace_dim: 2 }) if o == p => ElementType::C,
        (o, EigenPattern::Triple { eigenspace_dim: 1 }) if o == p && p != 2 => ElementType::D,
        (4, EigenPattern::Triple { eigenspace_dim: 1 }) if p == 2 => ElementType::D,
        (o, EigenPattern::Double { eigenspace_dim: 1 }) if (q + 1) % (o / p) == 0 && o / p > 1 => {
            ElementType::E
        }
        _ => {
            return Err(consistency!(
                "wild element {m} of order {order} has eigen pattern {pattern:?}"
            ))
        }
    };
    Ok((ty, pattern))
}

fn tame(
    ctx: &FieldCtx,
    m: &ProjMatrix,
    chi: &Poly,
    order: u64,
) -> Result<(ElementType, EigenPattern)> {
    let q = ctx.q();
    if let Some((r, mult)) = poly::repeated_root(ctx, chi) {
        if mult != 2 || !(q + 1).is_multiple_of(order) {
            return Err(consistency!(
                "tame element {m} of order {order} with repeated eigenvalues is not a homology"
            ));
        }
        let dim = 3 - rank(ctx, &shift(ctx, m.entries(), r));
        if dim != 2 {
            return Err(consistency!("tame element {m} is not diagonalizable"));
        }
        return Ok((ElementType::A, EigenPattern::Double { eigenspace_dim: 2 }));
    }
    let frob = poly::powmod(ctx, &[Fe::ZERO, Fe::ONE], ctx.q2(), chi);
    let split = poly::gcd(ctx, chi, &poly::minus_t(ctx, &frob));
    match poly::degree(&split) {
        None | Some(0) => {
            if !(q * q - q + 1).is_multiple_of(order) && !(order == 3 && (q + 1).is_multiple_of(3))
            {
                return Err(consistency!(
                    "element {m} of order {order} has an irreducible characteristic polynomial"
                ));
            }
            Ok((ElementType::B3, EigenPattern::Irreducible))
        }
        Some(3) => {
            let ty = if (q + 1).is_multiple_of(order) {
                ElementType::B1
            } else if (q * q - 1).is_multiple_of(order) {
                ElementType::B2
            } else {
                return Err(consistency!("element {m} of order {order} splits but its order divides neither q+1 nor q^2-1"));
            };
            Ok((ty, EigenPattern::Distinct))
        }
        _ => Err(consistency!(
            "characteristic polynomial of {m} has a single root in F_(q^2)"
        )),
    }
}

/// The center of a homology: the eigenvector of its simple eigenvalue.
/// Returns `None` for elements that are not homologies.
pub fn homology_center(ctx: &FieldCtx, m: &ProjMatrix) -> Option<Vec3> {
    let chi = poly::char_poly(ctx, m.entries());
    match poly::repeated_root(ctx, &chi) {
        Some((r, 2)) => eigenvector(ctx, m, simple_eigenvalue(ctx, &chi, r)),
        _ => None,
    }
}

/// The third eigenvalue when `r` is a double one: the eigenvalues sum to the trace.
pub(crate) fn simple_eigenvalue(ctx: &FieldCtx, chi: &[Fe], r: Fe) -> Fe {
    ctx.sub(ctx.neg(chi[2]), ctx.add(r, r))
}

/// A vector spanning the kernel of `M - s I`, when that kernel is a line.
pub(crate) fn eigenvector(ctx: &FieldCtx, m: &ProjMatrix, s: Fe) -> Option<Vec3> {
    let a = shift(ctx, m.entries(), s);
    let rows: [Vec3; 3] = std::array::from_fn(|i| [a[3 * i], a[3 * i + 1], a[3 * i + 2]]);
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| cross(ctx, &rows[i], &rows[j]))
        .find_map(|v| normalize_point(ctx, &v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgu::{is_unitary, GramForm, Model};

    fn ctx(q: u64) -> FieldCtx {
        FieldCtx::for_q(q).unwrap()
    }

    #[test]
    fn homologies_are_type_a() {
        for q in [3u64, 4, 5, 7, 8, 9] {
            let c = ctx(q);
            let l = c.root_of_unity(q + 1).unwrap();
            let m = ProjMatrix::diag(&c, l, l, Fe::ONE).unwrap();
            let k = classify(&c, &m).unwrap();
            assert_eq!(
                (k.ty, k.contribution, k.order),
                (ElementType::A, q + 1, q + 1)
            );
            assert_eq!(homology_center(&c, &m), Some([Fe::ZERO, Fe::ZERO, Fe::ONE]));
        }
    }

    #[test]
    fn distinct_roots_of_q_plus_one_are_b1() {
        for q in [4u64, 5, 7, 8, 9] {
            let c = ctx(q);
            let l = c.root_of_unity(q + 1).unwrap();
            let m = ProjMatrix::diag(&c, l, c.pow(l, 2), Fe::ONE).unwrap();
            let k = classify(&c, &m).unwrap();
            assert_eq!((k.ty, k.contribution), (ElementType::B1, 0));
            assert_eq!(homology_center(&c, &m), None);
        }
    }

    #[test]
    fn model3_transvections_are_elations() {
        for q in [2u64, 4, 8, 16] {
            let c = ctx(q);
            let gram = GramForm::new(&c, Model::Model3);
            let z = Fe::ZERO;
            for t in c.units().filter(|&t| c.in_subfield(t)) {
                let m = ProjMatrix::new(&c, [Fe::ONE, z, z, t, Fe::ONE, z, z, z, Fe::ONE]).unwrap();
                assert!(is_unitary(&c, &gram, &m));
                let k = classify(&c, &m).unwrap();
                assert_eq!((k.ty, k.contribution, k.order), (ElementType::C, q + 2, 2));
            }
        }
    }

    #[test]
    fn split_torus_elements_outside_q_plus_one_are_b2() {
        // In the 2x2 block of MODEL3, diag(t, t^{-1}) with t in F_q has order dividing q-1.
        for q in [4u64, 8, 16] {
            let c = ctx(q);
            let gram = GramForm::new(&c, Model::Model3);
            let t = c.gen_pow(q + 1);
            let m = ProjMatrix::diag(&c, t, c.recip(t), Fe::ONE).unwrap();
            assert!(is_unitary(&c, &gram, &m));
            let k = classify(&c, &m).unwrap();
            assert_eq!((k.ty, k.order), (ElementType::B2, q - 1));
        }
    }

    #[test]
    fn coordinate_three_cycle() {
        let (o, z) = (Fe::ONE, Fe::ZERO);
        for (q, ty) in [
            (4u64, ElementType::B2),
            (7, ElementType::B2),
            (5, ElementType::B1),
            (3, ElementType::D),
        ] {
            let c = ctx(q);
            let m = ProjMatrix::new(&c, [z, o, z, z, z, o, o, z, z]).unwrap();
            let k = classify(&c, &m).unwrap();
            assert_eq!((k.ty, k.order), (ty, 3), "q={q}");
        }
    }

    #[test]
    fn twisted_three_cycle_is_b3() {
        // t of order 3 is not a cube in F_25, so T^3 - t is irreducible.
        let c = ctx(5);
        let (t, o, z) = (c.root_of_unity(3).unwrap(), Fe::ONE, Fe::ZERO);
        let m = ProjMatrix::new(&c, [z, t, z, z, z, o, o, z, z]).unwrap();
        assert!(is_unitary(&c, &GramForm::new(&c, Model::Model1), &m));
        let k = classify(&c, &m).unwrap();
        assert_eq!(
            (k.ty, k.contribution, k.pattern),
            (ElementType::B3, 3, EigenPattern::Irreducible)
        );
    }

    #[test]
    fn identity_is_rejected() {
        let c = ctx(5);
        assert!(classify(&c, &ProjMatrix::identity()).is_err());
    }

    #[test]
    fn type_parsing() {
        for t in ElementType::ALL {
            assert_eq!(t.to_string().parse::<ElementType>().unwrap(), t);
        }
    }
}
