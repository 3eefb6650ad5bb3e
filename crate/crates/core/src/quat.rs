//! The quaternion algebra `(a, b / Q)` with basis `1, i, j, ij`, where
//! `i^2 = a`, `j^2 = b` and `ij = -ji`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::arith::{qi, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuatAlgebra {
    a: Rational,
    b: Rational,
}

impl QuatAlgebra {
    pub fn new(a: Rational, b: Rational) -> Result<Arc<Self>> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidAlgebra(format!("({a}, {b}) has a zero parameter")));
        }
        Ok(Arc::new(QuatAlgebra { a, b }))
    }

    /// Convenience constructor for integer parameters.
    pub fn from_ints(a: i64, b: i64) -> Result<Arc<Self>> {
        Self::new(qi(a), qi(b))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn element(self: &Arc<Self>, coords: [Rational; 4]) -> QuatElement {
        QuatElement { alg: Arc::clone(self), c: coords }
    }

    pub fn from_ints_coords(self: &Arc<Self>, coords: [i64; 4]) -> QuatElement {
        self.element(coords.map(qi))
    }

    pub fn scalar(self: &Arc<Self>, x: Rational) -> QuatElement {
        self.element([x, Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn one(self: &Arc<Self>) -> QuatElement {
        self.scalar(Rational::one())
    }

    pub fn zero(self: &Arc<Self>) -> QuatElement {
        self.scalar(Rational::zero())
    }

    pub fn i(self: &Arc<Self>) -> QuatElement {
        self.from_ints_coords([0, 1, 0, 0])
    }

    pub fn j(self: &Arc<Self>) -> QuatElement {
        self.from_ints_coords([0, 0, 1, 0])
    }

    pub fn ij(self: &Arc<Self>) -> QuatElement {
        self.from_ints_coords([0, 0, 0, 1])
    }

    pub fn basis(self: &Arc<Self>) -> [QuatElement; 4] {
        [self.one(), self.i(), self.j(), self.ij()]
    }
}

impl fmt::Display for QuatAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {} / Q)", self.a, self.b)
    }
}

/// An element `x0 + x1 i + x2 j + x3 ij`.
///
/// The arithmetic operators panic when the operands live in different
/// algebras; [`qmul`] and [`QuatElement::checked_add`] report the mismatch
/// as an error instead.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuatElement {
    alg: Arc<QuatAlgebra>,
    c: [Rational; 4],
}

impl QuatElement {
    pub fn algebra(&self) -> &Arc<QuatAlgebra> {
        &self.alg
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// True when the element is a rational multiple of 1.
    pub fn is_scalar(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn same_parent(&self, other: &QuatElement) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) || *self.alg == *other.alg {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    pub fn checked_add(&self, other: &QuatElement) -> Result<QuatElement> {
        self.same_parent(other)?;
        Ok(self + other)
    }

    pub fn scale(&self, s: &Rational) -> QuatElement {
        self.alg.element(self.c.clone().map(|x| x * s))
    }

    /// Standard involution `x -> tr(x) - x`.
    pub fn conj(&self) -> QuatElement {
        let [x0, x1, x2, x3] = self.c.clone();
        self.alg.element([x0, -x1, -x2, -x3])
    }

    /// Reduced trace `2 x0`.
    pub fn trace(&self) -> Rational {
        &self.c[0] * qi(2)
    }

    /// Reduced norm `x0^2 - a x1^2 - b x2^2 + ab x3^2`.
    pub fn norm(&self) -> Rational {
        let (a, b) = (&self.alg.a, &self.alg.b);
        let [x0, x1, x2, x3] = &self.c;
        x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3
    }

    /// `conj(x) / norm(x)`.
    pub fn inverse(&self) -> Result<QuatElement> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::NonInvertible);
        }
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn pow(&self, e: u32) -> QuatElement {
        (0..e).fold(self.alg.one(), |acc, _| &acc * self)
    }

    /// The common denominator of the coordinates.
    pub fn denominator(&self) -> num_bigint::BigInt {
        crate::arith::common_denominator(self.c.iter())
    }

    /// Coordinates rendered as `p/q` strings (integers without denominator).
    pub fn coord_strings(&self) -> [String; 4] {
        self.c.clone().map(|x| x.to_string())
    }
}

fn product(alg: &QuatAlgebra, x: &[Rational; 4], y: &[Rational; 4]) -> [Rational; 4] {
    let (a, b) = (&alg.a, &alg.b);
    let ab = a * b;
    [
        &x[0] * &y[0] + a * &x[1] * &y[1] + b * &x[2] * &y[2] - &ab * &x[3] * &y[3],
        &x[0] * &y[1] + &x[1] * &y[0] - b * &x[2] * &y[3] + b * &x[3] * &y[2],
        &x[0] * &y[2] + &x[2] * &y[0] + a * &x[1] * &y[3] - a * &x[3] * &y[1],
        &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1],
    ]
}

/// Checked multiplication.
pub fn qmul(x: &QuatElement, y: &QuatElement) -> Result<QuatElement> {
    x.same_parent(y)?;
    Ok(x.alg.element(product(&x.alg, &x.c, &y.c)))
}

/// Checked inverse.
pub fn qinv(x: &QuatElement) -> Result<QuatElement> {
    x.inverse()
}

impl<'a> Mul<&'a QuatElement> for &'a QuatElement {
    type Output = QuatElement;
    fn mul(self, rhs: &'a QuatElement) -> QuatElement {
        qmul(self, rhs).expect("quaternion product across algebras")
    }
}

impl<'a> Add<&'a QuatElement> for &'a QuatElement {
    type Output = QuatElement;
    fn add(self, rhs: &'a QuatElement) -> QuatElement {
        self.same_parent(rhs).expect("quaternion sum across algebras");
        let c = std::array::from_fn(|k| &self.c[k] + &rhs.c[k]);
        self.alg.element(c)
    }
}

impl<'a> Sub<&'a QuatElement> for &'a QuatElement {
    type Output = QuatElement;
    fn sub(self, rhs: &'a QuatElement) -> QuatElement {
        self.same_parent(rhs).expect("quaternion difference across algebras");
        let c = std::array::from_fn(|k| &self.c[k] - &rhs.c[k]);
        self.alg.element(c)
    }
}

impl Neg for &QuatElement {
    type Output = QuatElement;
    fn neg(self) -> QuatElement {
        self.alg.element(self.c.clone().map(|x| -x))
    }
}

impl fmt::Display for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "ij"];
        let mut wrote = false;
        for (x, name) in self.c.iter().zip(names) {
            if x.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match (name.is_empty(), x.is_one()) {
                (true, _) => write!(f, "{x}")?,
                (false, true) => write!(f, "{name}")?,
                (false, false) => write!(f, "({x}){name}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for QuatElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(4)?;
        for s in self.coord_strings() {
            t.serialize_element(&s)?;
        }
        t.end()
    }
}

/// A trace-zero element `g` with `g^2 = delta`, i.e. the image of a
/// trace-zero generator of a quadratic field under an embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    image: QuatElement,
    delta: Rational,
}

impl Embedding {
    pub fn image(&self) -> &QuatElement {
        &self.image
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn algebra(&self) -> &Arc<QuatAlgebra> {
        self.image.algebra()
    }

    /// True when the generated field is imaginary quadratic.
    pub fn is_imaginary(&self) -> bool {
        self.delta < Rational::zero()
    }
}

/// Validates that `g` is a nonzero trace-zero element; `delta = -norm(g)`.
pub fn embedding_from_element(g: &QuatElement) -> Result<Embedding> {
    if g.is_zero() {
        return Err(Error::ZeroInput("embedding generator"));
    }
    let tr = g.trace();
    if !tr.is_zero() {
        return Err(Error::NonzeroTrace(tr.to_string()));
    }
    let delta = -g.norm();
    if delta.is_zero() {
        // Nilpotent: does not generate a field.
        return Err(Error::NonInvertible);
    }
    Ok(Embedding { image: g.clone(), delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use proptest::prelude::*;

    fn alg() -> Arc<QuatAlgebra> {
        QuatAlgebra::from_ints(-1, 3).unwrap()
    }

    fn arb_elem(d: Arc<QuatAlgebra>) -> impl Strategy<Value = QuatElement> {
        prop::array::uniform4((-30i64..30, 1i64..6))
            .prop_map(move |cs| d.element(cs.map(|(n, den)| q(n, den))))
    }

    #[test]
    fn basis_products() {
        let d = alg();
        assert_eq!(qmul(&d.i(), &d.j()).unwrap(), d.ij());
        assert_eq!(qmul(&d.j(), &d.i()).unwrap(), -&d.ij());
        assert_eq!(d.ij().pow(2), d.scalar(qi(3)));
        assert_eq!(d.i().pow(2), d.scalar(qi(-1)));
        assert_eq!(d.j().pow(2), d.scalar(qi(3)));
    }

    #[test]
    fn mismatched_parents_rejected() {
        let d = alg();
        let e = QuatAlgebra::from_ints(-1, 5).unwrap();
        assert_eq!(qmul(&d.i(), &e.i()), Err(Error::ParentMismatch));
        assert!(d.i().checked_add(&e.j()).is_err());
        let d2 = QuatAlgebra::from_ints(-1, 3).unwrap();
        assert!(qmul(&d.i(), &d2.j()).is_ok());
    }

    #[test]
    fn involution_norm_trace() {
        let d = alg();
        assert_eq!(d.i().conj(), -&d.i());
        assert!(d.i().trace().is_zero());
        assert_eq!(d.i().norm(), qi(1));
        assert_eq!(d.j().norm(), qi(-3));
    }

    #[test]
    fn inverses() {
        let d = alg();
        assert_eq!(qinv(&d.one()).unwrap(), d.one());
        assert_eq!(qinv(&d.i()).unwrap(), -&d.i());
        assert_eq!(qinv(&d.j()).unwrap(), d.j().scale(&q(1, 3)));
        // 1 + j has norm 1 - 3 = -2; an isotropic element needs a split algebra.
        let m = QuatAlgebra::from_ints(1, 1).unwrap();
        let x = &m.one() + &m.i();
        assert_eq!(qinv(&x), Err(Error::NonInvertible));
        assert_eq!(Error::NonInvertible.to_string(), "non-invertible element");
    }

    #[test]
    fn embeddings() {
        let d = alg();
        let e = embedding_from_element(&d.i()).unwrap();
        assert_eq!(*e.delta(), qi(-1));
        let g = &d.i().scale(&qi(2)) + &d.ij();
        let e = embedding_from_element(&g).unwrap();
        assert_eq!(*e.delta(), qi(-1));
        assert_eq!(g.pow(2), d.scalar(qi(-1)));
        let bad = &d.one() + &d.i();
        assert!(matches!(embedding_from_element(&bad), Err(Error::NonzeroTrace(_))));
        assert!(embedding_from_element(&d.zero()).is_err());
    }

    #[test]
    fn serializes_as_rational_strings() {
        let d = alg();
        let x = d.element([q(1, 2), qi(0), q(-3, 4), qi(5)]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"["1/2","0","-3/4","5"]"#);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn cayley_hamilton(x in arb_elem(alg())) {
            let lhs = &(&x.pow(2) - &x.scale(&x.trace())) + &x.algebra().scalar(x.norm());
            prop_assert!(lhs.is_zero());
        }

        #[test]
        fn norm_is_multiplicative(x in arb_elem(alg()), y in arb_elem(alg())) {
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn conj_is_anti_automorphism(x in arb_elem(alg()), y in arb_elem(alg())) {
            prop_assert_eq!((&x * &y).conj(), &y.conj() * &x.conj());
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!(&x + &x.conj(), x.algebra().scalar(x.trace()));
            prop_assert_eq!(&x * &x.conj(), x.algebra().scalar(x.norm()));
        }

        #[test]
        fn associativity(x in arb_elem(alg()), y in arb_elem(alg()), z in arb_elem(alg())) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }
    }
}
