//! Integer and rational helpers: valuations, Kronecker symbols, factorization,
//! Chinese remaindering and squarefree parts.
//!
//! Integers handled here are desk-scale (below 2^63 in absolute value);
//! intermediate products are carried in `i128`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rationals, always normalized with positive denominator.
pub type Rational = BigRational;

/// Builds the rational `num/den`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn big_to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow("conversion to i64"))
}

/// Prime factorization `n = sign * prod p^e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeFactorization {
    pub n: i64,
    pub sign: i8,
    pub factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> i128 {
        self.factors
            .iter()
            .fold(self.sign as i128, |acc, &(p, e)| acc * (p as i128).pow(e))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// `v_p(n)` for a nonzero integer.
pub fn valuation_int(n: i128, p: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ValuationOfZero);
    }
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Ok(v)
}

fn valuation_big(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (quo, rem) = n.div_rem(&p);
        if !rem.is_zero() {
            return v;
        }
        n = quo;
        v += 1;
    }
}

/// `v_p(x) = v_p(num) - v_p(den)` for a nonzero rational.
pub fn valuation(x: &Rational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    Ok(valuation_big(x.numer(), p) as i64 - valuation_big(x.denom(), p) as i64)
}

/// Kronecker symbol `(a/n)`, the multiplicative extension of the Legendre symbol.
pub fn kronecker(a: i64, n: i64) -> i8 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut k: i8 = 1;
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v % 2 == 1 {
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            k = -k;
        }
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // n odd and positive: Jacobi symbol with a possibly negative.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                k = -k;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        a %= n;
    }
    if n == 1 {
        k
    } else {
        0
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let quo = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - quo * r);
        (old_s, s) = (s, old_s - quo * s);
        (old_t, t) = (t, old_t - quo * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m > 0`, if it exists.
pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn collect_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    collect_factors(d, out);
    collect_factors(n / d, out);
}

const TRIAL_BOUND: u64 = 1_000_000;

/// Factors a nonzero integer by trial division up to 10^6, then Pollard rho.
pub fn factorize(n: i64) -> Result<PrimeFactorization> {
    if n == 0 {
        return Err(Error::ZeroInput("factorize"));
    }
    let sign = if n < 0 { -1 } else { 1 };
    let mut m = n.unsigned_abs();
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p * p <= m && p <= TRIAL_BOUND {
        while m.is_multiple_of(p) {
            primes.push(p);
            m /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    collect_factors(m, &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(PrimeFactorization { n, sign, factors })
}

/// Distinct prime divisors of `n`, increasing.
pub fn prime_divisors(n: i64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    factorize(n).map(|f| f.primes().collect()).unwrap_or_default()
}

/// Positive divisors of a positive integer, increasing.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    if n == 0 {
        return Vec::new();
    }
    let f = factorize(n as i64).expect("nonzero");
    for &(p, e) in &f.factors {
        let len = out.len();
        let mut pk = 1;
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

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && factorize(n).map(|f| f.is_squarefree()).unwrap_or(false)
}

/// The squarefree integer `s` (same sign as `n`) with `n / s` a perfect square.
pub fn squarefree_part(n: i64) -> Result<i64> {
    let f = factorize(n).map_err(|_| Error::ZeroInput("squarefree_part"))?;
    Ok(f.factors
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .fold(f.sign as i64, |acc, &(p, _)| acc * p as i64))
}

/// Integer square root of a nonnegative integer, if exact.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Solves a system of congruences `x = r_k (mod m_k)`.
///
/// Overlapping moduli are accepted when the residues agree. Returns the
/// smallest nonnegative solution modulo the lcm of the moduli.
pub fn crt_solve(congruences: &[(i64, i64)]) -> Result<i64> {
    let mut x: i128 = 0;
    let mut m: i128 = 1;
    for &(r, n) in congruences {
        if n <= 0 {
            return Err(Error::InvalidArgument(format!("modulus {n} must be positive")));
        }
        let (r, n) = ((r as i128).rem_euclid(n as i128), n as i128);
        let (g, p, _) = ext_gcd(m, n);
        if (r - x) % g != 0 {
            return Err(Error::InconsistentCongruences(format!(
                "x = {x} mod {m} and x = {r} mod {n}"
            )));
        }
        let step = n / g;
        let t = ((r - x) / g % step * (p % step)).rem_euclid(step);
        x += m * t;
        m *= step;
        x = x.rem_euclid(m);
        if m > i64::MAX as i128 {
            return Err(Error::Overflow("crt_solve"));
        }
    }
    Ok(x as i64)
}

/// Least common denominator of a slice of rationals.
/// Serializes a rational as its `num/den` string.
pub fn serialize_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Clears a rational to an integer in the same square class: `num * den`.
pub(crate) fn square_class_integer(x: &Rational) -> Result<i64> {
    big_to_i64(&(x.numer() * x.denom()))
}
