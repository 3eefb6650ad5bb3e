//! Positive definite binary quadratic forms, class groups of imaginary
//! quadratic orders, the stratified set of ideal classes and the Picard
//! action on it.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{divisors, ext_gcd, gcd, is_squarefree};
use crate::error::{Error, Result};
use crate::localsym::ImagQuadField;
use crate::orders::QuadOrder;

/// `A x^2 + B xy + C y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let f = QuadForm { a, b, c };
        if a <= 0 {
            return Err(Error::InvalidForm(format!("{f}: leading coefficient must be positive")));
        }
        if f.discriminant() >= 0 {
            return Err(Error::InvalidForm(format!("{f}: discriminant must be negative")));
        }
        Ok(f)
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The form `x^2 + (D mod 2) xy + ...` of discriminant `disc`.
    pub fn principal(disc: i64) -> Result<Self> {
        check_discriminant(disc)?;
        let b = disc.rem_euclid(2);
        QuadForm::new(1, b, (b * b - disc) / 4)
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// The opposite form, inverse in the class group.
    pub fn opposite(&self) -> Self {
        QuadForm { a: self.a, b: -self.b, c: self.c }.reduced()
    }

    /// The reduced form properly equivalent to `self`.
    pub fn reduced(&self) -> Self {
        let (mut a, mut b, mut c) = (self.a, self.b, self.c);
        loop {
            if b > a || b <= -a {
                // b -> b + 2ak into (-a, a]
                let k = (a - b).div_euclid(2 * a);
                c += k * (a * k + b);
                b += 2 * a * k;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            return QuadForm { a, b, c };
        }
    }

    /// Applies `(x, y) -> (p x + q y, r x + s y)` with `ps - qr = 1`.
    pub fn transform(&self, p: i64, q: i64, r: i64, s: i64) -> Self {
        QuadForm {
            a: self.eval(p, r),
            b: 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s,
            c: self.eval(q, s),
        }
    }
}

fn check_discriminant(disc: i64) -> Result<()> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidForm(format!("{disc} is not a negative discriminant")));
    }
    Ok(())
}

/// Reduced form equivalent to `f`; errors on non-negative discriminant.
pub fn reduce(f: &QuadForm) -> Result<QuadForm> {
    let f = QuadForm::new(f.a, f.b, f.c)?;
    Ok(f.reduced())
}

/// Dirichlet composition, returning the reduced representative.
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm> {
    let disc = f.discriminant();
    if disc != g.discriminant() {
        return Err(Error::DiscriminantMismatch(disc, g.discriminant()));
    }
    if !f.is_primitive() || !g.is_primitive() {
        return Err(Error::InvalidForm(format!("{f} or {g} is not primitive")));
    }
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2) = (g.a as i128, g.b as i128);
    let disc = disc as i128;
    let mid = (b1 + b2) / 2;
    let (g1, u1, v1) = ext_gcd(a1, a2);
    let (e, u2, w) = ext_gcd(g1, mid);
    let (u, v) = (u1 * u2, v1 * u2);
    let big_a = a1 * a2 / (e * e);
    let num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) / 2;
    let big_b = (num / e).rem_euclid(2 * big_a);
    let big_c = (big_b * big_b - disc) / (4 * big_a);
    let conv = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("form composition"));
    Ok(QuadForm { a: conv(big_a)?, b: conv(big_b)?, c: conv(big_c)? }.reduced())
}

/// All reduced primitive forms of discriminant `disc`, principal form first.
pub fn reduced_forms(disc: i64) -> Result<Vec<QuadForm>> {
    check_discriminant(disc)?;
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -disc {
        for b in (-a + 1)..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm { a, b, c: num / (4 * a) };
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    Ok(out)
}

pub fn class_number(disc: i64) -> Result<u64> {
    Ok(reduced_forms(disc)?.len() as u64)
}

/// `Pic(O_{L,c})` realized on reduced forms of discriminant `c^2 disc L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassGroup {
    pub order: QuadOrder,
    pub discriminant: i64,
    pub elements: Vec<QuadForm>,
}

impl ClassGroup {
    pub fn identity(&self) -> QuadForm {
        self.elements[0]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, f: &QuadForm) -> bool {
        self.elements.binary_search(f).is_ok()
    }

    pub fn mul(&self, x: &QuadForm, y: &QuadForm) -> Result<QuadForm> {
        if x.discriminant() != self.discriminant {
            return Err(Error::DiscriminantMismatch(self.discriminant, x.discriminant()));
        }
        compose(x, y)
    }

    pub fn inverse(&self, x: &QuadForm) -> QuadForm {
        x.opposite()
    }
}

pub fn class_group(order: &QuadOrder) -> Result<ClassGroup> {
    let discriminant = order.discriminant();
    let mut elements = reduced_forms(discriminant)?;
    elements.sort();
    Ok(ClassGroup { order: *order, discriminant, elements })
}

/// An ideal class whose multiplicator ring is `O_{L, conductor}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IdealClass {
    pub conductor: u64,
    pub form: QuadForm,
}

/// `Id(O_{L,c})/~` as the disjoint union over `c' | c` of `Pic(O_{L,c'})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealClassSet {
    pub order: QuadOrder,
    pub strata: BTreeMap<u64, ClassGroup>,
}

impl IdealClassSet {
    pub fn len(&self) -> usize {
        self.strata.values().map(ClassGroup::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = IdealClass> + '_ {
        self.strata
            .iter()
            .flat_map(|(&c, g)| g.elements.iter().map(move |&form| IdealClass { conductor: c, form }))
    }
}

pub fn ideal_class_set(order: &QuadOrder) -> Result<IdealClassSet> {
    let mut strata = BTreeMap::new();
    for cp in divisors(order.conductor) {
        let sub = QuadOrder::new(order.field, cp)?;
        strata.insert(cp, class_group(&sub)?);
    }
    Ok(IdealClassSet { order: *order, strata })
}

/// A form properly equivalent to `f` whose leading coefficient is prime to `m`.
pub fn representative_prime_to(f: &QuadForm, m: u64) -> QuadForm {
    let m = m as i64;
    for bound in 1i64.. {
        for x in -bound..=bound {
            for y in [-bound, bound] {
                for (p, r) in [(x, y), (y, x)] {
                    if gcd(p, r) != 1 || gcd(f.eval(p, r), m) != 1 {
                        continue;
                    }
                    let (_, s, q) = ext_gcd(p as i128, r as i128);
                    // p s - q' r = 1 with q' = -q
                    return f.transform(p, -(q as i64), r, s as i64);
                }
            }
        }
    }
    unreachable!("primitive forms represent integers prime to any modulus")
}

/// Image of the class of `f` in `Pic(O_{L,c'})` under extension of ideals.
pub fn project(order: &QuadOrder, f: &QuadForm, c_prime: u64) -> Result<QuadForm> {
    let c = order.conductor;
    if c_prime == 0 || !c.is_multiple_of(c_prime) {
        return Err(Error::NotADivisor(c_prime as i64, c as i64));
    }
    if f.discriminant() != order.discriminant() {
        return Err(Error::DiscriminantMismatch(order.discriminant(), f.discriminant()));
    }
    if c_prime == c {
        return Ok(f.reduced());
    }
    let k = (c / c_prime) as i64;
    let target = QuadOrder::new(order.field, c_prime)?.discriminant();
    let g = representative_prime_to(f, c);
    let two_a = 2 * g.a;
    let b2 = (0..two_a)
        .find(|&x| (k * x - g.b).rem_euclid(two_a) == 0 && (x * x - target).rem_euclid(4 * g.a) == 0)
        .ok_or_else(|| Error::InvalidForm(format!("{g} has no lift to discriminant {target}")))?;
    Ok(QuadForm { a: g.a, b: b2, c: (b2 * b2 - target) / (4 * g.a) }.reduced())
}

/// `J . x = project(J, c') * x` for `J` in `Pic(O_{L,c})` and `x` in stratum `c'`.
pub fn act(order: &QuadOrder, j: &QuadForm, x: &IdealClass) -> Result<IdealClass> {
    let expected = QuadOrder::new(order.field, x.conductor)?.discriminant();
    if x.form.discriminant() != expected {
        return Err(Error::DiscriminantMismatch(expected, x.form.discriminant()));
    }
    let pj = project(order, j, x.conductor)?;
    Ok(IdealClass { conductor: x.conductor, form: compose(&pj, &x.form)? })
}

/// `|A_{D,c}|` from the attained conductors `gamma`: the sum of
/// `h(c'^2 disc L)` over the divisor closure of `gamma`.
pub fn count_a_dc(disc_d: u64, l: &ImagQuadField, c: u64, gamma: &[u64]) -> Result<u64> {
    if disc_d == 0 || !is_squarefree(disc_d as i64) {
        return Err(Error::InvalidArgument(format!("disc {disc_d} is not squarefree")));
    }
    if c == 0 {
        return Err(Error::ZeroInput("conductor"));
    }
    let mut closure = std::collections::BTreeSet::new();
    for &g in gamma {
        if g == 0 || !c.is_multiple_of(g) {
            return Err(Error::NotADivisor(g as i64, c as i64));
        }
        closure.extend(divisors(g));
    }
    closure
        .into_iter()
        .map(|cp| class_number(QuadOrder::new(*l, cp)?.discriminant()))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm { a, b, c }
    }

    fn order(d: u64, c: u64) -> QuadOrder {
        QuadOrder::new(ImagQuadField::new(d).unwrap(), c).unwrap()
    }

    /// Breadth-first search over words in `S`, `T`, `T^-1` of bounded length.
    fn equivalent_by_search(x: &QuadForm, y: &QuadForm, depth: usize) -> bool {
        let mut frontier = vec![*x];
        let mut seen = std::collections::HashSet::from([*x]);
        for _ in 0..depth {
            let mut next = Vec::new();
            for g in frontier {
                if g == *y {
                    return true;
                }
                for h in [g.transform(0, -1, 1, 0), g.transform(1, 1, 0, 1), g.transform(1, -1, 0, 1)] {
                    if seen.insert(h) {
                        next.push(h);
                    }
                }
            }
            frontier = next;
        }
        frontier.contains(y)
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce(&f(1, 0, 1)).unwrap(), f(1, 0, 1));
        assert_eq!(reduce(&f(3, 4, 2)).unwrap(), f(1, 0, 2));
        assert!(!f(2, 0, 1).is_reduced());
        assert!(equivalent_by_search(&f(2, 0, 1), &f(1, 0, 2), 2));
        assert_eq!(reduce(&f(5, 6, 2)).unwrap(), f(1, 0, 1));
        assert!(equivalent_by_search(&f(3, 4, 2), &f(1, 0, 2), 8));
        assert!(equivalent_by_search(&f(5, 6, 2), &f(1, 0, 1), 8));
        assert!(reduce(&f(1, 3, 1)).is_err());
    }

    #[test]
    fn composition_examples() {
        assert_eq!(compose(&f(2, 1, 3), &f(2, -1, 3)).unwrap(), f(1, 1, 6));
        assert_eq!(compose(&f(2, 2, 5), &f(2, 2, 5)).unwrap(), f(1, 0, 9));
        assert_eq!(compose(&f(1, 1, 6), &f(2, 1, 3)).unwrap(), f(2, 1, 3));
        assert!(matches!(compose(&f(1, 0, 1), &f(1, 1, 6)), Err(Error::DiscriminantMismatch(..))));
    }

    #[test]
    fn class_number_examples() {
        for (d, h) in [(-3, 1), (-4, 1), (-20, 2), (-23, 3), (-36, 2), (-47, 5), (-16, 1)] {
            assert_eq!(class_number(d).unwrap(), h, "h({d})");
        }
        assert_eq!(reduced_forms(-36).unwrap(), vec![f(1, 0, 9), f(2, 2, 5)]);
        assert!(class_number(-5).is_err());
    }

    #[test]
    fn ideal_class_sets() {
        assert_eq!(ideal_class_set(&order(1, 1)).unwrap().len(), 1);
        let s = ideal_class_set(&order(1, 3)).unwrap();
        assert_eq!(s.strata.keys().copied().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!((s.strata[&1].len(), s.strata[&3].len()), (1, 2));
        assert_eq!(ideal_class_set(&order(1, 2)).unwrap().len(), 2);
    }

    #[test]
    fn projection_and_action() {
        let o = order(1, 3);
        let pic = class_group(&o).unwrap();
        for x in &pic.elements {
            assert_eq!(project(&o, x, 1).unwrap(), f(1, 0, 1));
            assert_eq!(project(&o, x, 3).unwrap(), *x);
        }
        assert!(matches!(project(&o, &pic.elements[0], 2), Err(Error::NotADivisor(2, 3))));
        let top = IdealClass { conductor: 3, form: f(1, 0, 9) };
        let moved = act(&o, &f(2, 2, 5), &top).unwrap();
        assert_eq!(moved.form, f(2, 2, 5));
        assert_eq!(act(&o, &f(2, 2, 5), &moved).unwrap(), top);
        let bottom = IdealClass { conductor: 1, form: f(1, 0, 1) };
        assert_eq!(act(&o, &f(2, 2, 5), &bottom).unwrap(), bottom);
    }

    #[test]
    fn counting() {
        let l = ImagQuadField::new(1).unwrap();
        assert_eq!(count_a_dc(6, &l, 3, &[1]).unwrap(), 1);
        assert_eq!(count_a_dc(6, &l, 3, &[3]).unwrap(), 3);
        assert_eq!(count_a_dc(6, &l, 3, &[]).unwrap(), 0);
        assert!(matches!(count_a_dc(6, &l, 3, &[2]), Err(Error::NotADivisor(2, 3))));
    }

    fn arb_form() -> impl Strategy<Value = QuadForm> {
        (1i64..50, -60i64..60, 1i64..50)
            .prop_filter("definite", |(a, b, c)| b * b < 4 * a * c)
            .prop_map(|(a, b, c)| f(a, b, c))
    }

    proptest! {
        #[test]
        fn reduction_is_canonical(x in arb_form(), p in -3i64..4, r in -3i64..4) {
            prop_assume!(gcd(p, r) == 1);
            let (_, s, q) = ext_gcd(p as i128, r as i128);
            let y = x.transform(p, -(q as i64), r, s as i64);
            prop_assert_eq!(y.discriminant(), x.discriminant());
            prop_assert!(x.reduced().is_reduced());
            prop_assert_eq!(y.reduced(), x.reduced());
        }

        #[test]
        fn composition_axioms(d in 3i64..400) {
            let disc = -d;
            prop_assume!(matches!(disc.rem_euclid(4), 0 | 1));
            let forms = reduced_forms(disc).unwrap();
            let e = QuadForm::principal(disc).unwrap();
            prop_assert_eq!(forms[0], e);
            for x in &forms {
                prop_assert_eq!(compose(&e, x).unwrap(), *x);
                prop_assert_eq!(compose(x, &x.opposite()).unwrap(), e);
                for y in forms.iter().take(4) {
                    let xy = compose(x, y).unwrap();
                    prop_assert!(forms.contains(&xy));
                    prop_assert_eq!(xy, compose(y, x).unwrap());
                }
            }
        }
    }
}
