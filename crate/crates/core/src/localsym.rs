//! Hilbert symbols over Q, ramification of `(a, b / Q)` and the
//! splitting-field test for imaginary quadratic fields.

use serde::{Deserialize, Serialize};

use crate::arith::{self, kronecker, prime_divisors, squarefree_part, Rational};
use crate::error::{Error, Result};
use crate::quat::QuatAlgebra;

fn split_off(n: i128, p: u64) -> (u32, i128) {
    let (mut n, p) = (n, p as i128);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

fn eps_parity(x: i128) -> u32 {
    ((x - 1) / 2).rem_euclid(2) as u32
}

fn omega_parity(x: i128) -> u32 {
    ((x * x - 1) / 8).rem_euclid(2) as u32
}

fn sign_of(exponent: u32) -> i8 {
    if exponent.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(a, b)_p` by the closed formulas: for odd `p`
/// `(-1)^{v(a)v(b)eps(p)} (a~/p)^{v(b)} (b~/p)^{v(a)}`, and at 2
/// `(-1)^{eps(a~)eps(b~) + v(a)omega(b~) + v(b)omega(a~)}`.
pub fn hilbert_formula(a: i64, b: i64, p: u64) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroInput("hilbert symbol"));
    }
    let (va, ua) = split_off(a as i128, p);
    let (vb, ub) = split_off(b as i128, p);
    if p == 2 {
        let e = eps_parity(ua) * eps_parity(ub) + va * omega_parity(ub) + vb * omega_parity(ua);
        return Ok(sign_of(e));
    }
    let mut s = sign_of(va * vb * eps_parity(p as i128));
    let pi = p as i64;
    if vb % 2 == 1 {
        s *= kronecker(ua as i64, pi);
    }
    if va % 2 == 1 {
        s *= kronecker(ub as i64, pi);
    }
    Ok(s)
}

/// `(a, b)_inf`: `-1` exactly when both arguments are negative.
pub fn hilbert_infinity(a: i64, b: i64) -> i8 {
    if a < 0 && b < 0 {
        -1
    } else {
        1
    }
}

/// Ground-truth Hilbert symbol: `+1` iff `z^2 = a x^2 + b y^2` has a
/// nontrivial solution over `Z_p`.
///
/// Primitive solutions are searched residue class by residue class modulo
/// `p^j`, normalizing the first unit coordinate to 1. A class is accepted
/// once it solves the conic modulo `p^(2t+1)`, where `t` is the smallest
/// valuation of a partial derivative, which makes it liftable by Hensel's
/// lemma. The search depth is capped at `v_p(4ab) + 3` after removing
/// square factors of `p` from `a` and `b`.
pub fn hilbert_oracle(a: i64, b: i64, p: u64) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroInput("hilbert symbol"));
    }
    let reduce = |n: i64| {
        let (v, u) = split_off(n as i128, p);
        u * (p as i128).pow(v % 2)
    };
    let (a, b) = (reduce(a), reduce(b));
    let depth = split_off(4 * a * b, p).0 + 3;
    let conic = Conic { a, b, p: p as i128, depth };
    Ok(if conic.has_point() { 1 } else { -1 })
}

struct Conic {
    a: i128,
    b: i128,
    p: i128,
    depth: u32,
}

impl Conic {
    fn value(&self, v: [i128; 3], modulus: i128) -> i128 {
        let m = |x: i128| x.rem_euclid(modulus);
        m(m(self.a * m(v[0] * v[0])) + m(self.b * m(v[1] * v[1])) - m(v[2] * v[2]))
    }

    fn val(&self, x: i128, cap: u32) -> u32 {
        if x == 0 {
            return cap;
        }
        split_off(x, self.p as u64).0.min(cap)
    }

    fn liftable(&self, v: [i128; 3], level: u32, modulus: i128) -> bool {
        let partials = [
            2 * self.a * v[0],
            2 * self.b * v[1],
            2 * v[2],
        ];
        let t = partials
            .iter()
            .map(|&d| self.val(d.rem_euclid(modulus), level))
            .min()
            .unwrap_or(level);
        2 * t < level && self.value(v, self.p.pow(2 * t + 1)) == 0
    }

    // Pivot patterns: x = 1; x = 0 (mod p), y = 1; x = y = 0 (mod p), z = 1.
    fn has_point(&self) -> bool {
        let p = self.p;
        for pivot in 0..3 {
            for s in 0..p {
                for t in 0..p {
                    let v = match pivot {
                        0 => [1, s, t],
                        1 => [0, 1, s],
                        _ => {
                            if s != 0 || t != 0 {
                                continue;
                            }
                            [0, 0, 1]
                        }
                    };
                    if pivot == 1 && t != 0 {
                        continue;
                    }
                    if self.value(v, p) == 0 && self.search(v, pivot, 1) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn search(&self, v: [i128; 3], pivot: usize, level: u32) -> bool {
        let modulus = self.p.pow(level);
        if self.liftable(v, level, modulus) {
            return true;
        }
        if level >= self.depth {
            return false;
        }
        let next = modulus * self.p;
        let free: [usize; 2] = match pivot {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        for s in 0..self.p {
            for t in 0..self.p {
                let mut w = v;
                w[free[0]] += s * modulus;
                w[free[1]] += t * modulus;
                if self.value(w, next) == 0 && self.search(w, pivot, level + 1) {
                    return true;
                }
            }
        }
        false
    }
}

/// Hilbert symbol of two nonzero rationals at a finite prime.
pub fn hilbert_rational(a: &Rational, b: &Rational, p: u64) -> Result<i8> {
    hilbert_formula(
        arith::square_class_integer(a)?,
        arith::square_class_integer(b)?,
        p,
    )
}

/// Places where a quaternion algebra is ramified.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RamificationSet {
    pub primes: Vec<u64>,
    pub includes_infinity: bool,
}

impl RamificationSet {
    pub fn cardinality(&self) -> usize {
        self.primes.len() + usize::from(self.includes_infinity)
    }

    /// Product of the finite ramified primes.
    pub fn discriminant(&self) -> u64 {
        self.primes.iter().product()
    }

    pub fn is_split(&self) -> bool {
        self.cardinality() == 0
    }
}

/// Ramification set of `(a, b / Q)` from integer parameters.
pub fn ramification_of(a: i64, b: i64) -> Result<RamificationSet> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroInput("ramification set"));
    }
    let mut candidates = prime_divisors(a);
    candidates.extend(prime_divisors(b));
    candidates.push(2);
    candidates.sort_unstable();
    candidates.dedup();
    let mut primes = Vec::new();
    for p in candidates {
        if hilbert_formula(a, b, p)? == -1 {
            primes.push(p);
        }
    }
    Ok(RamificationSet { primes, includes_infinity: hilbert_infinity(a, b) == -1 })
}

pub fn ramification_set(d: &QuatAlgebra) -> Result<RamificationSet> {
    ramification_of(
        arith::square_class_integer(d.a())?,
        arith::square_class_integer(d.b())?,
    )
}

/// `disc(D)`: the product of the finite ramified primes.
pub fn disc_of(d: &QuatAlgebra) -> Result<u64> {
    Ok(ramification_set(d)?.discriminant())
}

pub fn is_indefinite(d: &QuatAlgebra) -> Result<bool> {
    Ok(!ramification_set(d)?.includes_infinity)
}

/// An imaginary quadratic field `Q(sqrt(-d))` with `d > 0` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ImagQuadField {
    d: u64,
    disc: i64,
}

impl ImagQuadField {
    pub fn new(d: u64) -> Result<Self> {
        if d == 0 || !arith::is_squarefree(d as i64) {
            return Err(Error::InvalidField(format!("d = {d} must be positive and squarefree")));
        }
        let m = -(d as i64);
        let disc = if m.rem_euclid(4) == 1 { m } else { 4 * m };
        Ok(ImagQuadField { d, disc })
    }

    /// The field `Q(sqrt(delta))` for a negative rational `delta`.
    pub fn from_square(delta: &Rational) -> Result<Self> {
        let n = arith::square_class_integer(delta)?;
        if n >= 0 {
            return Err(Error::InvalidField(format!("{delta} is not negative")));
        }
        Self::new((-squarefree_part(n)?) as u64)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Field discriminant: `-d` when `-d = 1 mod 4`, else `-4d`.
    pub fn disc(&self) -> i64 {
        self.disc
    }
}

/// Whether `L` splits the totally indefinite algebra `D`: no ramified prime
/// of `D` splits in `L`.
pub fn splits(l: &ImagQuadField, d: &QuatAlgebra) -> Result<bool> {
    let ram = ramification_set(d)?;
    if ram.includes_infinity {
        return Err(Error::NotIndefinite);
    }
    Ok(splits_disc(l, ram.discriminant()))
}

/// Splitting test from the discriminant of an indefinite algebra.
pub fn splits_disc(l: &ImagQuadField, disc: u64) -> bool {
    prime_divisors(disc as i64)
        .into_iter()
        .all(|p| kronecker(l.disc(), p as i64) != 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formula_examples() {
        for p in [2u64, 3, 5, 7] {
            for b in [-7i64, -1, 2, 3, 12] {
                assert_eq!(hilbert_formula(1, b, p).unwrap(), 1);
            }
        }
        assert_eq!(hilbert_formula(-1, 3, 2).unwrap(), -1);
        assert_eq!(hilbert_formula(-1, 3, 3).unwrap(), -1);
        assert!(hilbert_formula(0, 3, 3).is_err());
    }

    #[test]
    fn oracle_examples() {
        for p in [2u64, 3, 5, 7, 11] {
            for a in [-6i64, -1, 2, 7, 12] {
                assert_eq!(hilbert_oracle(a, -a, p).unwrap(), 1);
            }
        }
        assert_eq!(hilbert_oracle(2, 5, 5).unwrap(), -1);
        assert_eq!(hilbert_oracle(-4, 3, 2).unwrap(), -1);
        assert_eq!(hilbert_oracle(-1, -1, 2).unwrap(), -1);
        assert_eq!(hilbert_oracle(-1, -1, 3).unwrap(), 1);
        assert!(hilbert_oracle(3, 0, 3).is_err());
    }

    #[test]
    fn infinity_examples() {
        assert_eq!(hilbert_infinity(-1, -1), -1);
        assert_eq!(hilbert_infinity(-1, 3), 1);
        assert_eq!(hilbert_infinity(3, 5), 1);
    }

    #[test]
    fn ramification_examples() {
        let d = QuatAlgebra::from_ints(-1, 3).unwrap();
        let r = ramification_set(&d).unwrap();
        assert_eq!(r, RamificationSet { primes: vec![2, 3], includes_infinity: false });
        let h = QuatAlgebra::from_ints(-1, -1).unwrap();
        let r = ramification_set(&h).unwrap();
        assert_eq!(r, RamificationSet { primes: vec![2], includes_infinity: true });
        let m = QuatAlgebra::from_ints(1, 1).unwrap();
        assert!(ramification_set(&m).unwrap().is_split());
        assert_eq!(disc_of(&d).unwrap(), 6);
        assert_eq!(disc_of(&m).unwrap(), 1);
        assert_eq!(disc_of(&QuatAlgebra::from_ints(-4, 3).unwrap()).unwrap(), 6);
    }

    #[test]
    fn rational_parameters_use_square_classes() {
        let d = QuatAlgebra::new(crate::arith::q(-1, 4), crate::arith::q(3, 25)).unwrap();
        assert_eq!(disc_of(&d).unwrap(), 6);
        let d = QuatAlgebra::new(crate::arith::q(-1, 2), crate::arith::qi(3)).unwrap();
        assert_eq!(ramification_set(&d).unwrap(), ramification_of(-2, 3).unwrap());
    }

    #[test]
    fn splitting_examples() {
        let d = QuatAlgebra::from_ints(-1, 3).unwrap();
        assert!(splits(&ImagQuadField::new(1).unwrap(), &d).unwrap());
        assert!(!splits(&ImagQuadField::new(7).unwrap(), &d).unwrap());
        // (-2, 5) has discriminant 10.
        let d10 = QuatAlgebra::from_ints(-2, 5).unwrap();
        assert_eq!(disc_of(&d10).unwrap(), 10);
        assert!(splits(&ImagQuadField::new(2).unwrap(), &d10).unwrap());
        let h = QuatAlgebra::from_ints(-1, -1).unwrap();
        assert_eq!(splits(&ImagQuadField::new(1).unwrap(), &h), Err(Error::NotIndefinite));
    }

    #[test]
    fn field_discriminants() {
        assert_eq!(ImagQuadField::new(1).unwrap().disc(), -4);
        assert_eq!(ImagQuadField::new(2).unwrap().disc(), -8);
        assert_eq!(ImagQuadField::new(3).unwrap().disc(), -3);
        assert_eq!(ImagQuadField::new(7).unwrap().disc(), -7);
        assert!(ImagQuadField::new(4).is_err());
        assert_eq!(ImagQuadField::from_square(&crate::arith::q(-12, 1)).unwrap().d(), 3);
    }

    #[test]
    fn formula_matches_oracle_small() {
        for p in [2u64, 3, 5, 7] {
            for a in -20i64..=20 {
                for b in -20i64..=20 {
                    if a == 0 || b == 0 {
                        continue;
                    }
                    assert_eq!(
                        hilbert_formula(a, b, p).unwrap(),
                        hilbert_oracle(a, b, p).unwrap(),
                        "({a},{b})_{p}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn symmetric_bimultiplicative_square_invariant(
            a in -500i64..500, b in -500i64..500, c in -500i64..500, s in 1i64..30,
            pi in 0usize..8,
        ) {
            prop_assume!(a != 0 && b != 0 && c != 0);
            let p = [2u64, 3, 5, 7, 11, 13, 17, 19][pi];
            let h = |x, y| hilbert_formula(x, y, p).unwrap();
            prop_assert_eq!(h(a, b), h(b, a));
            prop_assert_eq!(h(a, b * c), h(a, b) * h(a, c));
            prop_assert_eq!(h(a * s * s, b), h(a, b));
        }

        #[test]
        fn ramification_parity(a in -100_000i64..100_000, b in -100_000i64..100_000) {
            prop_assume!(a != 0 && b != 0);
            prop_assert_eq!(ramification_of(a, b).unwrap().cardinality() % 2, 0);
        }
    }
}
