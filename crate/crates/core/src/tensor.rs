//! Arithmetic in `M = D (x)_Q L` and the correspondence between embeddings
//! `L -> D` and non-trivial idempotents of `M`.
//!
//! `L` is never represented abstractly: a trace-zero `alpha in L` with
//! `alpha^2 = delta` is fixed per [`TensorAlgebra`], and an element of `M`
//! is a pair `(a, b)` standing for `a (x) 1 + b (x) alpha`. The same pair is
//! written `x1 (x) 1 + x2 (x) alpha` when discussing the projection
//! idempotent of a product `E x E'`; both names refer to these coordinates.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{common_denominator, qi, Rational};
use crate::error::{Error, Result};
use crate::linalg::rational_kernel;
use crate::quat::{embedding_from_element, Embedding, QuatAlgebra, QuatElement};

/// `D (x)_Q Q(alpha)` with `alpha^2 = delta < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorAlgebra {
    quat: Arc<QuatAlgebra>,
    delta: Rational,
}

impl TensorAlgebra {
    pub fn new(quat: Arc<QuatAlgebra>, delta: Rational) -> Result<Arc<Self>> {
        if delta >= Rational::zero() {
            return Err(Error::InvalidField(format!("delta = {delta} must be negative")));
        }
        Ok(Arc::new(TensorAlgebra { quat, delta }))
    }

    pub fn quat(&self) -> &Arc<QuatAlgebra> {
        &self.quat
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn element(self: &Arc<Self>, a: QuatElement, b: QuatElement) -> Result<TensorElement> {
        if **a.algebra() != *self.quat || **b.algebra() != *self.quat {
            return Err(Error::ParentMismatch);
        }
        Ok(TensorElement { alg: Arc::clone(self), a, b })
    }

    /// `h (x) 1`.
    pub fn from_quat(self: &Arc<Self>, h: &QuatElement) -> Result<TensorElement> {
        self.element(h.clone(), self.quat.zero())
    }

    /// The L-scalar `x + y alpha`.
    pub fn scalar(self: &Arc<Self>, s: &LScalar) -> TensorElement {
        TensorElement {
            alg: Arc::clone(self),
            a: self.quat.scalar(s.rational.clone()),
            b: self.quat.scalar(s.alpha.clone()),
        }
    }

    pub fn one(self: &Arc<Self>) -> TensorElement {
        self.scalar(&LScalar::new(qi(1), qi(0)))
    }

    pub fn zero(self: &Arc<Self>) -> TensorElement {
        self.scalar(&LScalar::new(qi(0), qi(0)))
    }

    /// `1 (x) alpha`.
    pub fn alpha(self: &Arc<Self>) -> TensorElement {
        self.scalar(&LScalar::new(qi(0), qi(1)))
    }
}

/// An element `x + y alpha` of `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LScalar {
    #[serde(serialize_with = "crate::arith::serialize_rational")]
    pub rational: Rational,
    #[serde(serialize_with = "crate::arith::serialize_rational")]
    pub alpha: Rational,
}

impl LScalar {
    pub fn new(rational: Rational, alpha: Rational) -> Self {
        LScalar { rational, alpha }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.alpha.is_zero()
    }
}

/// `a (x) 1 + b (x) alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    alg: Arc<TensorAlgebra>,
    a: QuatElement,
    b: QuatElement,
}

impl Serialize for TensorElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.a, &self.b).serialize(s)
    }
}

impl TensorElement {
    pub fn algebra(&self) -> &Arc<TensorAlgebra> {
        &self.alg
    }

    /// The `1`-coordinate `a` (also written `x1`).
    pub fn a(&self) -> &QuatElement {
        &self.a
    }

    /// The `alpha`-coordinate `b` (also written `x2`).
    pub fn b(&self) -> &QuatElement {
        &self.b
    }

    fn same_parent(&self, other: &TensorElement) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) || *self.alg == *other.alg {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    fn with(&self, a: QuatElement, b: QuatElement) -> TensorElement {
        TensorElement { alg: Arc::clone(&self.alg), a, b }
    }

    pub fn add(&self, other: &TensorElement) -> Result<TensorElement> {
        self.same_parent(other)?;
        Ok(self.with(&self.a + &other.a, &self.b + &other.b))
    }

    pub fn sub(&self, other: &TensorElement) -> Result<TensorElement> {
        self.same_parent(other)?;
        Ok(self.with(&self.a - &other.a, &self.b - &other.b))
    }

    pub fn neg(&self) -> TensorElement {
        self.with(-&self.a, -&self.b)
    }

    pub fn scale(&self, s: &Rational) -> TensorElement {
        self.with(self.a.scale(s), self.b.scale(s))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The element as an L-scalar, if it is one.
    pub fn as_scalar(&self) -> Option<LScalar> {
        (self.a.is_scalar() && self.b.is_scalar())
            .then(|| LScalar::new(self.a.coords()[0].clone(), self.b.coords()[0].clone()))
    }
}

/// `(a1, b1)(a2, b2) = (a1 a2 + delta b1 b2, a1 b2 + b1 a2)`.
pub fn tmul(x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
    x.same_parent(y)?;
    let delta = &x.alg.delta;
    let a = &(&x.a * &y.a) + &(&x.b * &y.b).scale(delta);
    let b = &(&x.a * &y.b) + &(&x.b * &y.a);
    Ok(x.with(a, b))
}

/// Involution `a (x) 1 + b (x) alpha -> conj(a) (x) 1 + conj(b) (x) alpha`.
pub fn tconj(x: &TensorElement) -> TensorElement {
    x.with(x.a.conj(), x.b.conj())
}

/// Reduced trace over `L`: `tr(a) + tr(b) alpha`.
pub fn ttrace(x: &TensorElement) -> LScalar {
    LScalar::new(x.a.trace(), x.b.trace())
}

/// Reduced norm over `L`: `x * tconj(x)`, which is always an L-scalar.
pub fn tnorm(x: &TensorElement) -> LScalar {
    tmul(x, &tconj(x))
        .expect("same parent")
        .as_scalar()
        .expect("x * conj(x) is central")
}

/// Inverse of `h (x) 1` for invertible `h`.
fn quat_inverse_tensor(alg: &Arc<TensorAlgebra>, h: &QuatElement) -> Result<TensorElement> {
    alg.from_quat(&h.inverse()?)
}

/// A non-trivial idempotent: `e^2 = e`, `tr(e) = 1`, `n(e) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Idempotent {
    e: TensorElement,
}

impl Idempotent {
    /// Validates the idempotent invariants.
    pub fn new(e: TensorElement) -> Result<Self> {
        let sq = tmul(&e, &e)?;
        if sq != e {
            return Err(Error::NotIdempotent("e^2 != e".into()));
        }
        if ttrace(&e) != LScalar::new(qi(1), qi(0)) {
            return Err(Error::NotIdempotent(format!(
                "trace {} + {} alpha != 1",
                ttrace(&e).rational,
                ttrace(&e).alpha
            )));
        }
        if !tnorm(&e).is_zero() {
            return Err(Error::NotIdempotent("nonzero reduced norm".into()));
        }
        Ok(Idempotent { e })
    }

    pub fn element(&self) -> &TensorElement {
        &self.e
    }

    /// `conj(e) = 1 - e`.
    pub fn complement(&self) -> Idempotent {
        Idempotent { e: tconj(&self.e) }
    }
}

/// `e = 1/2 (1 (x) 1 + g^{-1} (x) alpha)`.
pub fn idempotent_from_embedding(alg: &Arc<TensorAlgebra>, g: &Embedding) -> Result<Idempotent> {
    if **g.algebra() != **alg.quat() {
        return Err(Error::ParentMismatch);
    }
    if g.delta() != alg.delta() {
        return Err(Error::DeltaMismatch {
            expected: alg.delta().to_string(),
            found: g.delta().to_string(),
        });
    }
    let half = Rational::new(1.into(), 2.into());
    let quat = alg.quat();
    let e = alg.element(quat.scalar(half.clone()), g.image().inverse()?.scale(&half))?;
    Idempotent::new(e)
}

/// `alpha -> a b^{-1}` for `e = a (x) 1 + b (x) alpha`.
pub fn embedding_from_idempotent(e: &Idempotent) -> Result<Embedding> {
    let (a, b) = (e.e.a(), e.e.b());
    let b_inv = b.inverse().map_err(|_| {
        Error::NotIdempotent("alpha-coordinate is not invertible; no embedding over a field".into())
    })?;
    let g = a * &b_inv;
    let emb = embedding_from_element(&g)?;
    if emb.delta() != e.e.alg.delta() {
        return Err(Error::DeltaMismatch {
            expected: e.e.alg.delta().to_string(),
            found: emb.delta().to_string(),
        });
    }
    Ok(emb)
}

/// Replaces `alpha` by `lambda * alpha`: `(a, b) -> (a, b / lambda)` in the
/// algebra with `delta * lambda^2`.
pub fn rescale_alpha(e: &Idempotent, lambda: &Rational) -> Result<Idempotent> {
    if lambda.is_zero() {
        return Err(Error::ZeroInput("rescale factor"));
    }
    let alg = e.e.algebra();
    let scaled = TensorAlgebra::new(Arc::clone(alg.quat()), alg.delta() * lambda * lambda)?;
    let el = scaled.element(e.e.a().clone(), e.e.b().scale(&lambda.recip()))?;
    Idempotent::new(el)
}

/// Outcome of checking the identities relating `e`, `conj(e)` and
/// `iota(alpha) = x1 x2^{-1}` inside `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IotaIdentities {
    /// `ebar iota = ebar iota ebar = ebar (-1 (x) alpha)`.
    pub ebar_absorbs: bool,
    /// `e iota e = e (1 (x) alpha)`.
    pub e_iota_e: bool,
    /// `e iota ebar = iota (conj(x1) - x1) (x) 1 + (conj(x1) - x1) (x) alpha`.
    pub e_iota_ebar: bool,
    /// `(e - ebar) iota - 1 (x) alpha = e iota ebar`.
    pub difference: bool,
    /// `ebar iota e = 0`.
    pub ebar_iota_e_vanishes: bool,
}

impl IotaIdentities {
    pub fn all(&self) -> bool {
        self.ebar_absorbs
            && self.e_iota_e
            && self.e_iota_ebar
            && self.difference
            && self.ebar_iota_e_vanishes
    }
}

/// Evaluates the identities for an idempotent `e` and the embedding `g`
/// (taken as `iota(alpha) (x) 1`).
pub fn verify_iota_identities(g: &Embedding, e: &Idempotent) -> Result<IotaIdentities> {
    let alg = e.e.algebra();
    let iota = alg.from_quat(g.image())?;
    let e_el = e.element();
    let ebar = e.complement().e;
    let alpha = alg.alpha();
    let m = |x: &TensorElement, y: &TensorElement| tmul(x, y);

    let ebar_iota = m(&ebar, &iota)?;
    let ebar_absorbs =
        ebar_iota == m(&ebar_iota, &ebar)? && ebar_iota == m(&ebar, &alpha.neg())?;
    let e_iota_e = m(&m(e_el, &iota)?, e_el)? == m(e_el, &alpha)?;

    let x1 = e_el.a();
    let diff = &x1.conj() - x1;
    let e_iota_ebar = m(&m(e_el, &iota)?, &ebar)?;
    let rhs3 = alg.element(g.image() * &diff, diff.clone())?;
    let rhs4 = m(&e_el.sub(&ebar)?, &iota)?.sub(&alpha)?;
    let aux = m(&m(&ebar, &iota)?, e_el)?;

    Ok(IotaIdentities {
        ebar_absorbs,
        e_iota_e,
        e_iota_ebar: e_iota_ebar == rhs3,
        difference: rhs4 == e_iota_ebar,
        ebar_iota_e_vanishes: aux.is_zero(),
    })
}

/// Deterministic choice of `u` with `u g = -g u` and `u^2 != 0`, scaled to
/// integer coordinates with content 1.
pub fn find_u(g: &Embedding) -> Result<QuatElement> {
    let quat = g.algebra();
    let basis = quat.basis();
    // Columns: coordinates of u_k g + g u_k for basis element u_k.
    let images: Vec<QuatElement> = basis
        .iter()
        .map(|u| &(u * g.image()) + &(g.image() * u))
        .collect();
    let rows: Vec<Vec<Rational>> = (0..4)
        .map(|r| images.iter().map(|im| im.coords()[r].clone()).collect())
        .collect();
    for v in rational_kernel(&rows, 4) {
        let u = quat.element([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]);
        let sq = u.pow(2);
        if sq.is_scalar() && !sq.coords()[0].is_zero() {
            let den = common_denominator(u.coords().iter());
            let mut u = u.scale(&Rational::from_integer(den));
            let content = u
                .coords()
                .iter()
                .fold(num_bigint::BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x.numer()));
            if !content.is_zero() && !content.is_one() {
                u = u.scale(&Rational::from_integer(content).recip());
            }
            return Ok(u);
        }
    }
    Err(Error::NonInvertible)
}

/// Checks `(u (x) 1) e (u (x) 1)^{-1} = 1 - e`.
pub fn u_conjugates_to_complement(e: &Idempotent, u: &QuatElement) -> Result<bool> {
    let alg = e.element().algebra();
    let ut = alg.from_quat(u)?;
    let ut_inv = quat_inverse_tensor(alg, u)?;
    let conj = tmul(&tmul(&ut, e.element())?, &ut_inv)?;
    Ok(conj == alg.one().sub(e.element())?)
}
