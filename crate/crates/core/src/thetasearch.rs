//! Presentations `D = (disc L, theta / Q)` of an indefinite quaternion
//! algebra given by its discriminant, for a fixed imaginary quadratic
//! splitting field `L`.
//!
//! Every verdict is decided by the ramification set of `(disc L, theta)`.
//! The congruence conditions on `m = theta / m0` are evaluated alongside as
//! a fast path, and any disagreement with the ramification set is reported.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::{self, crt_solve, gcd, kronecker, prime_divisors, squarefree_part};
use crate::error::{Error, Result};
use crate::localsym::{ramification_of, splits_disc, ImagQuadField};
use crate::quat::QuatAlgebra;

/// Product of the odd primes dividing `disc` that do not divide `disc L`.
pub fn compute_m0(disc: u64, l: &ImagQuadField) -> u64 {
    prime_divisors(disc as i64)
        .into_iter()
        .filter(|&p| p != 2 && l.disc() % p as i64 != 0)
        .product()
}

fn check_disc(disc: u64) -> Result<()> {
    if disc == 0 || !arith::is_squarefree(disc as i64) {
        return Err(Error::InvalidArgument(format!("discriminant {disc} must be squarefree")));
    }
    if prime_divisors(disc as i64).len() % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "{disc} has an odd number of prime factors; no indefinite algebra has it"
        )));
    }
    Ok(())
}

/// One of the congruence conditions on `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

/// Result of [`check_theta`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaCheck {
    pub theta: i64,
    pub m0: u64,
    /// `theta / m0` when `m0 | theta`.
    pub m: Option<i64>,
    /// Ground truth: `(disc L, theta)` ramifies exactly at the primes of `disc`.
    pub verdict: bool,
    /// Conjunction of the congruence conditions.
    pub fast_path: bool,
    pub conditions: Vec<Condition>,
}

impl ThetaCheck {
    pub fn disagrees(&self) -> bool {
        self.verdict != self.fast_path
    }
}

fn eps(x: i64) -> i64 {
    ((x - 1) / 2).rem_euclid(2)
}

fn omega(x: i64) -> i64 {
    let x = x as i128;
    ((x * x - 1) / 8).rem_euclid(2) as i64
}

fn split_off(n: i64, p: i64) -> (u32, i64) {
    let (mut n, mut v) = (n, 0);
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// Ground truth for `D = (disc L, theta / Q)`.
pub fn presents(theta: i64, disc: u64, l: &ImagQuadField) -> Result<bool> {
    if theta == 0 {
        return Err(Error::ZeroInput("theta"));
    }
    let ram = ramification_of(l.disc(), theta)?;
    Ok(!ram.includes_infinity && ram.primes == prime_divisors(disc as i64))
}

/// The congruence conditions on `m = theta / m0`, one entry per item.
fn conditions(m: i64, m0: u64, disc: u64, l: &ImagQuadField) -> Vec<Condition> {
    let dl = l.disc();
    let m0i = m0 as i64;
    let theta = m * m0i;
    let disc_primes = prime_divisors(disc as i64);
    let ramified = |p: u64| disc_primes.contains(&p);
    let mut out = Vec::new();

    out.push(Condition {
        name: "m positive",
        holds: m > 0,
        detail: format!("m = {m}"),
    });

    // Odd primes of m outside m0 * disc L must stay unramified.
    let mut bad = Vec::new();
    for p in prime_divisors(m) {
        let pi = p as i64;
        if p == 2 || m0i % pi == 0 || dl % pi == 0 {
            continue;
        }
        let (v, _) = split_off(m, pi);
        if v % 2 == 1 && kronecker(dl, pi) == -1 {
            bad.push(p);
        }
    }
    out.push(Condition {
        name: "odd p not dividing m0 disc L is unramified",
        holds: bad.is_empty(),
        detail: if bad.is_empty() { String::new() } else { format!("ramified at {bad:?}") },
    });

    let mut bad = Vec::new();
    for p in prime_divisors(m0i) {
        let pi = p as i64;
        let (v, _) = split_off(m, pi);
        if v % 2 == 1 || kronecker(dl, pi) != -1 {
            bad.push(p);
        }
    }
    out.push(Condition {
        name: "v_p(m) even for p | m0",
        holds: bad.is_empty(),
        detail: if bad.is_empty() { String::new() } else { format!("fails at {bad:?}") },
    });

    let mut bad = Vec::new();
    for p in prime_divisors(dl) {
        if p == 2 {
            continue;
        }
        let pi = p as i64;
        let (v, unit) = split_off(m, pi);
        let mut s = if (v as i64 * eps(pi)) % 2 == 0 { 1 } else { -1 };
        if v % 2 == 1 {
            s *= kronecker(dl / pi, pi);
        }
        s *= kronecker(m0i, pi) * kronecker(unit, pi);
        if (s == -1) != ramified(p) {
            bad.push(p);
        }
    }
    out.push(Condition {
        name: "symbol at odd p | disc L",
        holds: bad.is_empty(),
        detail: if bad.is_empty() { String::new() } else { format!("fails at {bad:?}") },
    });

    let two = ramified(2);
    let d = l.d() as i64;
    let (v2, theta_unit) = split_off(theta, 2);
    let v2 = v2 as i64;
    let (case, holds) = match dl.rem_euclid(8) {
        5 => ("disc L = 5 mod 8", two == (v2 % 2 == 1)),
        1 => ("disc L = 1 mod 8", !two),
        _ if (-d).rem_euclid(4) == 3 => (
            "-d = 3 mod 4",
            two == ((eps(theta_unit) + v2 * omega(-d)) % 2 == 1),
        ),
        _ => (
            "-d even",
            two == ((eps(-d / 2) * eps(theta_unit) + omega(theta_unit) + v2 * omega(-d / 2)) % 2
                == 1),
        ),
    };
    out.push(Condition {
        name: "p = 2",
        holds,
        detail: case.to_string(),
    });
    out
}

/// Decides whether `D = (disc L, theta / Q)` for the algebra of
/// discriminant `disc`, with per-condition diagnostics.
pub fn check_theta(theta: i64, disc: u64, l: &ImagQuadField) -> Result<ThetaCheck> {
    if theta == 0 {
        return Err(Error::ZeroInput("theta"));
    }
    let m0 = compute_m0(disc, l);
    let verdict = presents(theta, disc, l)?;
    if theta % m0 as i64 != 0 {
        return Ok(ThetaCheck {
            theta,
            m0,
            m: None,
            verdict,
            fast_path: false,
            conditions: vec![Condition {
                name: "m0 divides theta",
                holds: false,
                detail: format!("{m0} does not divide {theta}"),
            }],
        });
    }
    let m = theta / m0 as i64;
    let conditions = conditions(m, m0, disc, l);
    let fast_path = conditions.iter().all(|c| c.holds);
    Ok(ThetaCheck { theta, m0, m: Some(m), verdict, fast_path, conditions })
}

/// Two coprime presentations `theta_i = 2^s m0 m_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaPair {
    pub disc: u64,
    pub d: u64,
    pub disc_l: i64,
    pub m0: u64,
    pub s: u32,
    pub m1: u64,
    pub m2: u64,
    pub theta1: i64,
    pub theta2: i64,
}

const SEARCH_LIMIT: i64 = 50_000_000;

/// Residues `r mod q` admitted by the local condition at one modulus.
fn admissible_residues(q: i64, admits: impl Fn(i64) -> bool) -> Vec<i64> {
    (0..q).filter(|&r| gcd(r, q) == 1 && admits(r)).collect()
}

/// The lexicographically smallest pair `(m1, m2)` of coprime integers,
/// coprime to `2 m0 disc L`, with `D = (disc L, 2^s m0 m_i / Q)`.
///
/// Candidates are drawn in increasing order from the residue classes
/// allowed by the local conditions at `m0`, at the odd primes of `disc L`
/// and modulo 16, combined by CRT; each candidate is confirmed against
/// the ramification set.
pub fn find_theta_pair(disc: u64, l: &ImagQuadField) -> Result<ThetaPair> {
    check_disc(disc)?;
    if !splits_disc(l, disc) {
        return Err(Error::NotSplittingField);
    }
    let dl = l.disc();
    let m0 = compute_m0(disc, l);
    let s: u32 = u32::from(dl.rem_euclid(8) == 5 && disc.is_multiple_of(2));
    let scale = (1i64 << s) * m0 as i64;
    let ramified = |p: u64| disc.is_multiple_of(p);

    let mut moduli: Vec<(i64, Vec<i64>)> = Vec::new();
    if m0 > 1 {
        moduli.push((m0 as i64, admissible_residues(m0 as i64, |_| true)));
    }
    for p in prime_divisors(dl) {
        if p == 2 {
            continue;
        }
        let pi = p as i64;
        let res = admissible_residues(pi, |r| {
            let m = (1i64 << s) * r;
            let sym = kronecker(m0 as i64, pi) * kronecker(m, pi);
            (sym == -1) == ramified(p)
        });
        moduli.push((pi, res));
    }
    let two = admissible_residues(16, |r| {
        let c = conditions((1i64 << s) * r, m0, disc, l);
        c.last().map(|c| c.holds).unwrap_or(false)
    });
    moduli.push((16, two));

    let mut classes: Vec<i64> = vec![0];
    let mut modulus = 1i64;
    for (q, residues) in &moduli {
        let mut next = Vec::with_capacity(classes.len() * residues.len());
        for &c in &classes {
            for &r in residues {
                next.push(crt_solve(&[(c, modulus), (r, *q)])?);
            }
        }
        modulus *= q;
        classes = next;
    }
    classes.sort_unstable();
    if classes.is_empty() {
        return Err(Error::NotSplittingField);
    }

    let coprime_base = 2 * m0 as i64 * dl.abs();
    let mut found: Vec<i64> = Vec::new();
    let mut k = 0i64;
    while found.len() < 2 {
        let base = k * modulus;
        if base > SEARCH_LIMIT {
            return Err(Error::InvalidArgument(format!(
                "no presentation pair found below {SEARCH_LIMIT}"
            )));
        }
        for &r in &classes {
            let n = base + r;
            if n == 0 || gcd(n, coprime_base) != 1 {
                continue;
            }
            if let Some(&m1) = found.first() {
                if gcd(n, m1) != 1 {
                    continue;
                }
            }
            if presents(scale * n, disc, l)? {
                found.push(n);
                if found.len() == 2 {
                    break;
                }
            }
        }
        k += 1;
    }
    let (m1, m2) = (found[0], found[1]);
    Ok(ThetaPair {
        disc,
        d: l.d(),
        disc_l: dl,
        m0,
        s,
        m1: m1 as u64,
        m2: m2 as u64,
        theta1: scale * m1,
        theta2: scale * m2,
    })
}

/// Whether `D = (disc L, m0 / Q)`; for `disc = 1` the algebra is split and
/// the criterion holds trivially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IsoCriterion {
    pub holds: bool,
    pub split_algebra: bool,
}

pub fn iso_criterion(disc: u64, l: &ImagQuadField) -> Result<IsoCriterion> {
    check_disc(disc)?;
    if !splits_disc(l, disc) {
        return Err(Error::NotSplittingField);
    }
    let m0 = compute_m0(disc, l);
    let check = check_theta(m0 as i64, disc, l)?;
    Ok(IsoCriterion { holds: check.verdict, split_algebra: disc == 1 })
}

/// A presentation `(-d, theta)` of the indefinite algebra of discriminant
/// `disc`, using the smallest `d` whose field splits it.
pub fn algebra_for_disc(disc: u64) -> Result<Arc<QuatAlgebra>> {
    check_disc(disc)?;
    for d in 1..10_000u64 {
        if !arith::is_squarefree(d as i64) {
            continue;
        }
        let l = ImagQuadField::new(d)?;
        if !splits_disc(&l, disc) {
            continue;
        }
        let pair = find_theta_pair(disc, &l)?;
        let a = squarefree_part(l.disc())?;
        return QuatAlgebra::from_ints(a, pair.theta1);
    }
    Err(Error::NotSplittingField)
}
