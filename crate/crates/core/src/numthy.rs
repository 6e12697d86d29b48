//! Exact integer number theory by trial division.

use std::fmt;

/// Prime factorization as ascending `(prime, exponent)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PrimeFactorization {
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exponent of `p`, zero when `p` does not occur.
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(r, _)| r == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn value(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }

    pub fn num_divisors(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}:{e}")?;
        }
        f.write_str("}")
    }
}

pub fn factorize(mut n: u64) -> PrimeFactorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    PrimeFactorization { factors }
}

pub fn divisors(n: u64) -> Vec<u64> {
    divisors_of(&factorize(n))
}

pub fn divisors_of(f: &PrimeFactorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in f.factors() {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    assert!(n >= 1 && p >= 2);
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn divides(d: u64, n: u64) -> bool {
    d != 0 && n.is_multiple_of(d)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let f = factorize(n);
    f.factors() == [(n, 1)]
}

/// Writes `q = p^n` with `p` prime, or returns `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    match factorize(q).factors() {
        [(p, n)] => Some((*p, *n)),
        _ => None,
    }
}

/// `b^e mod m` for moduli below 2^63.
pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc = 1u128 % m128;
    let mut base = b as u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

/// A prime power `q = p^n` together with the factorization of `q + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePower {
    q: u64,
    p: u64,
    n: u32,
    q_plus_one: PrimeFactorization,
}

impl PrimePower {
    pub fn new(q: u64) -> crate::Result<PrimePower> {
        let (p, n) = prime_power(q)
            .ok_or_else(|| crate::Error::Domain(format!("{q} is not a prime power")))?;
        Ok(PrimePower {
            q,
            p,
            n,
            q_plus_one: factorize(q + 1),
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    /// Factorization of `q + 1`.
    pub fn q_plus_one(&self) -> &PrimeFactorization {
        &self.q_plus_one
    }

    /// Genus of the Hermitian curve, `q(q-1)/2`.
    pub fn hermitian_genus(&self) -> u64 {
        self.q * (self.q - 1) / 2
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

impl std::str::FromStr for PrimePower {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<PrimePower> {
        let t = s.trim();
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(crate::Error::Parse(format!(
                "{s:?} is not a positive integer"
            )));
        }
        let q: u64 = t
            .parse()
            .map_err(|_| crate::Error::Parse(format!("{s:?} is out of range")))?;
        if q > 1 << 32 {
            return Err(crate::Error::Domain(format!("{q} is too large")));
        }
        PrimePower::new(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).is_empty());
        assert_eq!(factorize(9).factors(), &[(3, 2)]);
        assert_eq!(factorize(2188).factors(), &[(2, 2), (547, 1)]);
        assert!(is_prime(547));
        assert_eq!(factorize(2188).to_string(), "{2:2, 547:1}");
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(6), vec![1, 2, 3, 6]);
        assert_eq!(divisors(14), vec![1, 2, 7, 14]);
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(9, 3), 2);
        assert_eq!(valuation(14, 3), 0);
        assert_eq!(valuation(2188, 2), 2);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(2187), Some((3, 7)));
        assert_eq!(prime_power(128), Some((2, 7)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn prime_power_parsing() {
        let q: PrimePower = "128".parse().unwrap();
        assert_eq!((q.p(), q.n(), q.is_even()), (2, 7, true));
        assert_eq!(q.q_plus_one().factors(), &[(3, 1), (43, 1)]);
        assert!(matches!(
            "6".parse::<PrimePower>(),
            Err(crate::Error::Domain(_))
        ));
        assert!(matches!(
            "-3".parse::<PrimePower>(),
            Err(crate::Error::Parse(_))
        ));
        assert_eq!(
            PrimePower::new(6).unwrap_err().to_string(),
            "domain error: 6 is not a prime power"
        );
    }

    proptest! {
        #[test]
        fn factorization_reconstructs(n in 1u64..10_000_000) {
            let f = factorize(n);
            prop_assert_eq!(f.value(), n as u128);
            for &(p, e) in f.factors() {
                prop_assert!(is_prime(p));
                prop_assert_eq!(valuation(n, p), e);
            }
        }

        #[test]
        fn divisor_count_matches(n in 1u64..200_000) {
            let f = factorize(n);
            let ds = divisors(n);
            prop_assert_eq!(ds.len() as u64, f.num_divisors());
            prop_assert!(ds.iter().all(|d| n % d == 0));
            prop_assert!(ds.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn gcd_lcm_product(a in 1u64..100_000, b in 1u64..100_000) {
            prop_assert_eq!(gcd(a, b) * lcm(a, b), a * b);
        }
    }
}
