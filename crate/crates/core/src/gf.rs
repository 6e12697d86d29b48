//! Arithmetic in F_{q^2} in discrete-log form.
//!
//! An element is either zero or `g^k` for the fixed primitive element `g`.
//! Multiplication adds exponents; addition goes through a Zech table
//! holding `log(1 + g^k)` for every `k`.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, parse_err, Error, Result};
use crate::numthy::{factorize, is_prime};

/// Largest field order for which a table is built.
pub const MAX_FIELD_SIZE: u64 = 1 << 24;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(NONE);
    pub const ONE: Fe = Fe(0);

    pub fn is_zero(self) -> bool {
        self.0 == NONE
    }

    /// Discrete logarithm to base `g`, `None` for zero.
    pub fn log(self) -> Option<u32> {
        (!self.is_zero()).then_some(self.0)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            NONE => f.write_str("0"),
            0 => f.write_str("1"),
            k => write!(f, "g^{k}"),
        }
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A field element literal before it is bound to a context:
/// `0`, `1`, `g` or `g^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementLiteral {
    Zero,
    Power(u64),
}

impl FromStr for ElementLiteral {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(ElementLiteral::Zero),
            "1" => Ok(ElementLiteral::Power(0)),
            "g" => Ok(ElementLiteral::Power(1)),
            t => {
                let k = t
                    .strip_prefix("g^")
                    .ok_or_else(|| parse_err!("bad field element literal {t:?}"))?;
                if k.is_empty() || !k.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(parse_err!("bad exponent in field element literal {t:?}"));
                }
                k.parse()
                    .map(ElementLiteral::Power)
                    .map_err(|_| parse_err!("exponent out of range in {t:?}"))
            }
        }
    }
}

impl fmt::Display for ElementLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ElementLiteral::Zero => f.write_str("0"),
            ElementLiteral::Power(0) => f.write_str("1"),
            ElementLiteral::Power(k) => write!(f, "g^{k}"),
        }
    }
}

pub struct FieldCtx {
    p: u64,
    n: u32,
    q: u64,
    ord: u32,
    modulus: Vec<u64>,
    generator: Vec<u64>,
    neg_shift: u32,
    zech: Vec<u32>,
    exp_code: Vec<u32>,
    log_code: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

/// Builds the context for F_{q^2}, `q = p^n`.
pub fn make_ctx(p: u64, n: u32) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(domain!("{p} is not prime"));
    }
    if n == 0 {
        return Err(domain!("exponent n must be positive"));
    }
    let deg = 2 * n;
    let size = (p as u128).checked_pow(deg).unwrap_or(u128::MAX);
    if size > MAX_FIELD_SIZE as u128 {
        return Err(Error::Capacity(format!(
            "field of order {p}^{deg} exceeds the table budget of {MAX_FIELD_SIZE} elements"
        )));
    }
    let size = size as u64;
    let q = p.pow(n);
    let ord = size - 1;
    let deg = deg as usize;

    let modulus = lex_residues(p, deg)
        .map(|mut c| {
            c.push(1);
            c
        })
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial exists in every degree");

    let ord_primes: Vec<u64> = factorize(ord).primes().collect();
    let one = poly_one(deg);
    let generator = lex_residues(p, deg)
        .filter(|c| c.iter().any(|&x| x != 0))
        .find(|c| {
            ord_primes
                .iter()
                .all(|&r| poly_powmod(c, ord / r, &modulus, p) != one)
        })
        .expect("the multiplicative group is cyclic");

    let mut exp_code = Vec::with_capacity(ord as usize);
    let mut log_code = vec![NONE; size as usize];
    let mut cur = one.clone();
    for k in 0..ord as u32 {
        let code = encode(&cur, p);
        if log_code[code as usize] != NONE {
            return Err(Error::Consistency(format!(
                "generator of F_{p}^{deg} repeats at exponent {k}"
            )));
        }
        log_code[code as usize] = k;
        exp_code.push(code);
        cur = poly_mulmod(&cur, &generator, &modulus, p);
    }

    let zech = exp_code
        .iter()
        .map(|&code| {
            let c0 = code as u64 % p;
            let shifted = code as u64 - c0 + (c0 + 1) % p;
            log_code[shifted as usize]
        })
        .collect();

    let neg_shift = if p == 2 { 0 } else { (ord / 2) as u32 };

    Ok(FieldCtx {
        p,
        n,
        q,
        ord: ord as u32,
        modulus,
        generator,
        neg_shift,
        zech,
        exp_code,
        log_code,
    })
}

impl FieldCtx {
    /// Context for F_{q^2} from `q` itself.
    pub fn for_q(q: u64) -> Result<FieldCtx> {
        let (p, n) =
            crate::numthy::prime_power(q).ok_or_else(|| domain!("{q} is not a prime power"))?;
        make_ctx(p, n)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q2(&self) -> u64 {
        self.q * self.q
    }

    /// Order of the multiplicative group, `q^2 - 1`.
    pub fn unit_order(&self) -> u64 {
        self.ord as u64
    }

    /// Coefficients `c_0..c_{2n}` of the defining polynomial.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Coefficients of `g` as a residue modulo the defining polynomial.
    pub fn generator_residue(&self) -> &[u64] {
        &self.generator
    }

    pub fn g(&self) -> Fe {
        Fe(if self.ord == 1 { 0 } else { 1 })
    }

    /// `g^k` for any `k`, reduced modulo `q^2 - 1`.
    pub fn gen_pow(&self, k: u64) -> Fe {
        Fe((k % self.ord as u64) as u32)
    }

    pub fn element(&self, lit: ElementLiteral) -> Fe {
        match lit {
            ElementLiteral::Zero => Fe::ZERO,
            ElementLiteral::Power(k) => self.gen_pow(k),
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<Fe> {
        s.parse().map(|lit| self.element(lit))
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, i: i64) -> Fe {
        let r = i.rem_euclid(self.p as i64) as usize;
        if r == 0 {
            Fe::ZERO
        } else {
            Fe(self.log_code[r])
        }
    }

    /// Coefficients of `x` as a polynomial residue, lowest degree first.
    pub fn residue(&self, x: Fe) -> Vec<u64> {
        let deg = self.modulus.len() - 1;
        let mut code = if x.is_zero() {
            0
        } else {
            self.exp_code[x.0 as usize] as u64
        };
        (0..deg)
            .map(|_| {
                let c = code % self.p;
                code /= self.p;
                c
            })
            .collect()
    }

    pub fn from_residue(&self, coeffs: &[u64]) -> Fe {
        let code = encode(coeffs, self.p);
        if code == 0 {
            Fe::ZERO
        } else {
            Fe(self.log_code[code as usize])
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let (x, y) = (a.0, b.0);
        let d = if y >= x { y - x } else { y + self.ord - x };
        let z = self.zech[d as usize];
        if z == NONE {
            Fe::ZERO
        } else {
            Fe(self.reduce(x as u64 + z as u64))
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a.is_zero() {
            a
        } else {
            Fe(self.reduce(a.0 as u64 + self.neg_shift as u64))
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            Fe::ZERO
        } else {
            Fe(self.reduce(a.0 as u64 + b.0 as u64))
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            Err(domain!("zero has no inverse"))
        } else {
            Ok(self.recip(a))
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Inverse of an element known to be nonzero.
    #[inline]
    pub(crate) fn recip(&self, a: Fe) -> Fe {
        debug_assert!(!a.is_zero());
        Fe(if a.0 == 0 { 0 } else { self.ord - a.0 })
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            Fe::ONE
        } else if a.is_zero() {
            a
        } else {
            Fe(((a.0 as u128 * e as u128) % self.ord as u128) as u32)
        }
    }

    /// The Frobenius `x -> x^q`.
    #[inline]
    pub fn conj(&self, a: Fe) -> Fe {
        if a.is_zero() {
            a
        } else {
            Fe(((a.0 as u64 * self.q) % self.ord as u64) as u32)
        }
    }

    pub fn norm(&self, a: Fe) -> Fe {
        self.mul(a, self.conj(a))
    }

    pub fn trace(&self, a: Fe) -> Fe {
        self.add(a, self.conj(a))
    }

    pub fn in_subfield(&self, a: Fe) -> bool {
        self.conj(a) == a
    }

    pub fn element_order(&self, a: Fe) -> Result<u64> {
        let k = a
            .log()
            .ok_or_else(|| domain!("zero has no multiplicative order"))?;
        let ord = self.ord as u64;
        Ok(ord / crate::numthy::gcd(k as u64, ord))
    }

    /// The canonical element `g^((q^2-1)/m)` of exact order `m`.
    pub fn root_of_unity(&self, m: u64) -> Result<Fe> {
        let ord = self.ord as u64;
        if m == 0 || !ord.is_multiple_of(m) {
            return Err(domain!("{m} does not divide q^2-1 = {ord}"));
        }
        Ok(self.gen_pow(ord / m))
    }

    /// All field elements, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        std::iter::once(Fe::ZERO).chain((0..self.ord).map(Fe))
    }

    pub fn units(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.ord).map(Fe)
    }

    #[inline]
    fn reduce(&self, k: u64) -> u32 {
        let o = self.ord as u64;
        (if k >= o { k - o } else { k }) as u32
    }
}

/// Residues of degree below `deg` in lexicographic order of `(c_0, c_1, ...)`.
fn lex_residues(p: u64, deg: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(deg as u32);
    (0..total).map(move |mut idx| {
        let mut c = vec![0u64; deg];
        for slot in c.iter_mut().rev() {
            *slot = idx % p;
            idx /= p;
        }
        c
    })
}

fn encode(coeffs: &[u64], p: u64) -> u32 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}

fn poly_one(deg: usize) -> Vec<u64> {
    let mut v = vec![0; deg];
    v[0] = 1;
    v
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Product of two residues reduced modulo the monic `f`.
fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let deg = f.len() - 1;
    let mut prod = vec![0u64; 2 * deg];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (deg..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &fi) in f[..deg].iter().enumerate() {
            let j = k - deg + i;
            prod[j] = (prod[j] + (p - fi) * c) % p;
        }
    }
    prod.truncate(deg);
    prod.resize(deg, 0);
    prod
}

fn poly_powmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let deg = f.len() - 1;
    let mut acc = poly_one(deg);
    let mut base = a.to_vec();
    base.resize(deg, 0);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, f, p);
        }
        base = poly_mulmod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = crate::numthy::pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let k = r.len() - 1;
        let c = r[k] * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            let j = k - db + i;
            r[j] = (r[j] + (p - bi) * c % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd_degree(a: &[u64], b: &[u64], p: u64) -> usize {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x.len().saturating_sub(1)
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if f[0] == 0 {
        return deg == 1;
    }
    let mut x = vec![0u64; deg];
    if deg == 1 {
        return true;
    }
    x[1] = 1;
    let frob = |k: usize| {
        let mut acc = x.clone();
        for _ in 0..k {
            acc = poly_powmod(&acc, p, f, p);
        }
        acc
    };
    if frob(deg) != x {
        return false;
    }
    factorize(deg as u64).primes().all(|r| {
        let mut h = frob(deg / r as usize);
        h[1] = (h[1] + p - 1) % p;
        poly_gcd_degree(f, &h, p) == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SMALL: [(u64, u32); 10] = [
        (2, 1),
        (3, 1),
        (2, 2),
        (5, 1),
        (7, 1),
        (2, 3),
        (3, 2),
        (11, 1),
        (13, 1),
        (2, 4),
    ];

    /// Multiplication done directly on residues, independent of the tables.
    fn residue_mul(ctx: &FieldCtx, a: Fe, b: Fe) -> Fe {
        let r = poly_mulmod(&ctx.residue(a), &ctx.residue(b), ctx.modulus(), ctx.p());
        ctx.from_residue(&r)
    }

    fn residue_add(ctx: &FieldCtx, a: Fe, b: Fe) -> Fe {
        let (x, y) = (ctx.residue(a), ctx.residue(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % ctx.p()).collect();
        ctx.from_residue(&s)
    }

    #[test]
    fn context_examples() {
        let c = make_ctx(2, 2).unwrap();
        assert_eq!(
            (c.q(), c.q2(), c.element_order(c.g()).unwrap()),
            (4, 16, 15)
        );
        let c = make_ctx(13, 1).unwrap();
        assert_eq!(
            (c.q(), c.q2(), c.element_order(c.g()).unwrap()),
            (13, 169, 168)
        );
        let c = make_ctx(5, 3).unwrap();
        assert_eq!((c.q(), c.q2()), (125, 15625));
        assert!(matches!(make_ctx(2, 13), Err(Error::Capacity(_))));
        assert!(matches!(make_ctx(4, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn defining_polynomials_are_lex_minimal() {
        // x^2 + x + 1 over F_2, x^2 + 1 over F_3, x^4 + x^3 + 1 over F_2.
        assert_eq!(make_ctx(2, 1).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(make_ctx(3, 1).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(make_ctx(2, 2).unwrap().modulus(), &[1, 0, 0, 1, 1]);
        // x^2 + 1 is irreducible mod 7; (1 + x)^2 = 2x has order 12, so 1 + 2x is the first primitive.
        let c7 = make_ctx(7, 1).unwrap();
        assert_eq!(c7.modulus(), &[1, 0, 1]);
        assert_eq!(c7.generator_residue(), &[1, 2]);
    }

    #[test]
    fn order_examples() {
        for (p, n) in SMALL {
            let c = make_ctx(p, n).unwrap();
            let q = c.q();
            assert_eq!(c.element_order(Fe::ONE).unwrap(), 1);
            assert_eq!(c.element_order(c.gen_pow(q - 1)).unwrap(), q + 1);
            assert_eq!(c.root_of_unity(1).unwrap(), Fe::ONE);
            assert_eq!(c.root_of_unity(q + 1).unwrap(), c.gen_pow(q - 1));
            if p != 2 {
                assert_eq!(c.root_of_unity(2).unwrap(), c.neg(Fe::ONE));
            }
            assert!(c.element_order(Fe::ZERO).is_err());
            assert!(c.root_of_unity(q * q).is_err());
        }
    }

    #[test]
    fn tables_match_residue_arithmetic() {
        for (p, n) in SMALL {
            let c = make_ctx(p, n).unwrap();
            let els: Vec<Fe> = c.elements().collect();
            for &a in &els {
                for &b in &els {
                    assert_eq!(c.add(a, b), residue_add(&c, a, b));
                    assert_eq!(c.mul(a, b), residue_mul(&c, a, b));
                }
            }
        }
    }

    #[test]
    fn conjugation_fixes_exactly_the_subfield() {
        for (p, n) in SMALL.iter().copied().chain([(5, 2), (2, 5), (3, 3)]) {
            let c = make_ctx(p, n).unwrap();
            let fixed = c.elements().filter(|&x| c.in_subfield(x)).count() as u64;
            assert_eq!(fixed, c.q());
            for x in c.elements() {
                assert_eq!(c.conj(c.conj(x)), x);
                assert!(c.in_subfield(c.norm(x)));
            }
            assert_eq!(c.conj(Fe::ONE), Fe::ONE);
            assert_eq!(c.mul(c.conj(c.g()), c.g()), c.gen_pow(c.q() + 1));
        }
    }

    #[test]
    fn roots_of_unity_have_exact_order() {
        for (p, n) in SMALL {
            let c = make_ctx(p, n).unwrap();
            for m in crate::numthy::divisors(c.unit_order()) {
                let z = c.root_of_unity(m).unwrap();
                assert_eq!(c.pow(z, m), Fe::ONE);
                for r in factorize(m).primes() {
                    assert_ne!(c.pow(z, m / r), Fe::ONE);
                }
            }
        }
    }

    #[test]
    fn prime_field_embedding() {
        let c = make_ctx(7, 1).unwrap();
        assert_eq!(c.from_int(0), Fe::ZERO);
        assert_eq!(c.from_int(1), Fe::ONE);
        assert_eq!(c.add(c.from_int(3), c.from_int(5)), c.from_int(1));
        assert_eq!(c.from_int(-1), c.neg(Fe::ONE));
    }

    #[test]
    fn literals() {
        assert_eq!("0".parse::<ElementLiteral>().unwrap(), ElementLiteral::Zero);
        assert_eq!(
            "1".parse::<ElementLiteral>().unwrap(),
            ElementLiteral::Power(0)
        );
        assert_eq!(
            " g^17 ".parse::<ElementLiteral>().unwrap(),
            ElementLiteral::Power(17)
        );
        for bad in [
            "",
            "2",
            "g^",
            "g^-1",
            "h^3",
            "g^+3",
            "g^99999999999999999999999",
        ] {
            assert!(bad.parse::<ElementLiteral>().is_err(), "{bad}");
        }
        let c = make_ctx(3, 1).unwrap();
        assert_eq!(c.parse_element("g^9").unwrap(), c.g());
        assert_eq!(c.gen_pow(5).to_string(), "g^5");
        assert_eq!(Fe::ONE.to_string(), "1");
    }

    fn ctx_and_triple() -> impl Strategy<Value = ((u64, u32), u32, u32, u32)> {
        (
            prop::sample::select(vec![(2u64, 3u32), (3, 2), (5, 1), (13, 1), (2, 5), (5, 2)]),
            any::<u32>(),
            any::<u32>(),
            any::<u32>(),
        )
    }

    proptest! {
        #[test]
        fn field_axioms(((p, n), x, y, z) in ctx_and_triple()) {
            let c = make_ctx(p, n).unwrap();
            let pick = |r: u32| {
                let k = r as u64 % c.q2();
                if k == 0 { Fe::ZERO } else { c.gen_pow(k) }
            };
            let (a, b, d) = (pick(x), pick(y), pick(z));
            prop_assert_eq!(c.add(c.add(a, b), d), c.add(a, c.add(b, d)));
            prop_assert_eq!(c.mul(c.mul(a, b), d), c.mul(a, c.mul(b, d)));
            prop_assert_eq!(c.mul(a, c.add(b, d)), c.add(c.mul(a, b), c.mul(a, d)));
            prop_assert_eq!(c.add(a, c.neg(a)), Fe::ZERO);
            prop_assert_eq!(c.sub(c.add(a, b), b), a);
            if !a.is_zero() {
                prop_assert_eq!(c.mul(a, c.inv(a).unwrap()), Fe::ONE);
            }
            prop_assert_eq!(c.conj(c.add(a, b)), c.add(c.conj(a), c.conj(b)));
            prop_assert_eq!(c.conj(c.mul(a, b)), c.mul(c.conj(a), c.conj(b)));
        }
    }
}
