//! Lattices and orders in `(a, b / Q)`, maximal orders, and conductors of
//! optimal embeddings of imaginary quadratic orders.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{self, common_denominator, exact_sqrt, prime_divisors, qi, Rational};
use crate::error::{Error, Result};
use crate::linalg::{determinant, hnf, integer_left_kernel, rational_kernel};
use crate::localsym::{disc_of, splits_disc, ImagQuadField};
use crate::quat::{Embedding, QuatAlgebra, QuatElement};

/// A full-rank Z-lattice in `D`, stored as `H / N` where `N` is the least
/// common denominator of the lattice and `H` the row Hermite normal form
/// of `N * L`. Two lattices are equal iff their stored forms are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuatLattice {
    alg: Arc<QuatAlgebra>,
    denom: BigInt,
    hnf: Vec<Vec<BigInt>>,
}

impl QuatLattice {
    /// The Z-span of `gens`; errors unless it has rank 4.
    pub fn from_generators(alg: &Arc<QuatAlgebra>, gens: &[QuatElement]) -> Result<Self> {
        for g in gens {
            if **g.algebra() != **alg {
                return Err(Error::ParentMismatch);
            }
        }
        let denom = common_denominator(gens.iter().flat_map(|g| g.coords().iter()));
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| {
                g.coords()
                    .iter()
                    .map(|x| (x * Rational::from_integer(denom.clone())).to_integer())
                    .collect()
            })
            .collect();
        let h = hnf(&rows);
        if h.len() != 4 {
            return Err(Error::InvalidOrder(format!("lattice has rank {} instead of 4", h.len())));
        }
        // N * L may have a smaller common denominator once in HNF.
        let content = h.iter().flatten().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let g = content.gcd(&denom);
        let (denom, h) = if g.is_one() {
            (denom, h)
        } else {
            (&denom / &g, h.into_iter().map(|r| r.into_iter().map(|x| x / &g).collect()).collect())
        };
        Ok(QuatLattice { alg: Arc::clone(alg), denom, hnf: h })
    }

    pub fn algebra(&self) -> &Arc<QuatAlgebra> {
        &self.alg
    }

    /// Basis elements, rows of the canonical form.
    pub fn basis(&self) -> Vec<QuatElement> {
        let n = Rational::from_integer(self.denom.clone());
        self.hnf
            .iter()
            .map(|r| {
                self.alg
                    .element(std::array::from_fn(|k| Rational::from_integer(r[k].clone()) / &n))
            })
            .collect()
    }

    /// Basis matrix with rational entries.
    pub fn basis_matrix(&self) -> Vec<Vec<Rational>> {
        self.basis().iter().map(|b| b.coords().to_vec()).collect()
    }

    /// Integer coordinates of `x` in the stored basis, if `x` lies in the lattice.
    pub fn coefficients(&self, x: &QuatElement) -> Option<[BigInt; 4]> {
        let n = Rational::from_integer(self.denom.clone());
        let mut v: Vec<Rational> = x.coords().iter().map(|c| c * &n).collect();
        if v.iter().any(|c| !c.is_integer()) {
            return None;
        }
        let mut out: [BigInt; 4] = Default::default();
        // The HNF is upper triangular with pivots on the diagonal.
        for row in 0..4 {
            let pivot = Rational::from_integer(self.hnf[row][row].clone());
            let c = &v[row] / &pivot;
            if !c.is_integer() {
                return None;
            }
            for (k, vk) in v.iter_mut().enumerate().skip(row) {
                *vk -= &c * Rational::from_integer(self.hnf[row][k].clone());
            }
            out[row] = c.to_integer();
        }
        Some(out)
    }

    pub fn contains(&self, x: &QuatElement) -> bool {
        **x.algebra() == *self.alg && self.coefficients(x).is_some()
    }

    /// `|det|` of the basis matrix (covolume relative to `Z<1,i,j,ij>`).
    pub fn covolume(&self) -> Rational {
        determinant(&self.basis_matrix()).abs()
    }

    /// Sum of two lattices in the same algebra.
    pub fn sum(&self, extra: &[QuatElement]) -> Result<Self> {
        let mut gens = self.basis();
        gens.extend_from_slice(extra);
        Self::from_generators(&self.alg, &gens)
    }

    /// `[other : self]` for `self ⊆ other`.
    pub fn index_in(&self, other: &QuatLattice) -> Rational {
        self.covolume() / other.covolume()
    }

    pub fn is_sublattice_of(&self, other: &QuatLattice) -> bool {
        self.basis().iter().all(|b| other.contains(b))
    }
}

impl Serialize for QuatLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[String; 4]> = self.basis().iter().map(QuatElement::coord_strings).collect();
        rows.serialize(s)
    }
}

/// An order: a full-rank lattice containing 1 and closed under products.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct QuatOrder {
    lattice: QuatLattice,
}

impl QuatOrder {
    pub fn lattice(&self) -> &QuatLattice {
        &self.lattice
    }

    pub fn algebra(&self) -> &Arc<QuatAlgebra> {
        self.lattice.algebra()
    }

    pub fn basis(&self) -> Vec<QuatElement> {
        self.lattice.basis()
    }

    pub fn contains(&self, x: &QuatElement) -> bool {
        self.lattice.contains(x)
    }

    /// `Z<1, i, j, ij>`; requires integral parameters.
    pub fn standard(alg: &Arc<QuatAlgebra>) -> Result<Self> {
        if !alg.a().is_integer() || !alg.b().is_integer() {
            return Err(Error::InvalidOrder(format!("{alg} has non-integral parameters")));
        }
        order_from_basis(alg, &alg.basis())
    }
}

fn products_outside(lat: &QuatLattice) -> Vec<QuatElement> {
    let basis = lat.basis();
    let mut out = Vec::new();
    for x in &basis {
        for y in &basis {
            let p = x * y;
            if !lat.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// Validates that `gens` span an order.
pub fn order_from_basis(alg: &Arc<QuatAlgebra>, gens: &[QuatElement]) -> Result<QuatOrder> {
    let lattice = QuatLattice::from_generators(alg, gens)?;
    if !lattice.contains(&alg.one()) {
        return Err(Error::InvalidOrder("lattice does not contain 1".into()));
    }
    if let Some(p) = products_outside(&lattice).first() {
        return Err(Error::InvalidOrder(format!("not closed under multiplication: {p}")));
    }
    Ok(QuatOrder { lattice })
}

/// Square root of `|det(tr(b_i conj(b_j)))|`.
pub fn reduced_discriminant(o: &QuatOrder) -> Result<u64> {
    let basis = o.basis();
    let gram: Vec<Vec<Rational>> = basis
        .iter()
        .map(|x| basis.iter().map(|y| (x * &y.conj()).trace()).collect())
        .collect();
    let det = determinant(&gram).abs();
    if !det.is_integer() {
        return Err(Error::InvalidOrder(format!("Gram determinant {det} is not integral")));
    }
    let det = det.to_integer().to_i128().ok_or(Error::Overflow("reduced discriminant"))?;
    let root = exact_sqrt(det)
        .ok_or_else(|| Error::InvalidOrder(format!("Gram determinant {det} is not a square")))?;
    u64::try_from(root).map_err(|_| Error::Overflow("reduced discriminant"))
}

pub fn is_maximal(o: &QuatOrder) -> Result<bool> {
    Ok(reduced_discriminant(o)? == disc_of(o.algebra())?)
}

fn is_integral(x: &QuatElement) -> bool {
    x.trace().is_integer() && x.norm().is_integer()
}

/// The order generated by `o` and `x`, if it exists with index at most `bound`.
fn adjoin(o: &QuatOrder, x: &QuatElement, bound: &Rational) -> Option<QuatOrder> {
    let mut lat = o.lattice.sum(std::slice::from_ref(x)).ok()?;
    loop {
        if o.lattice.index_in(&lat) > *bound || !lat.basis().iter().all(is_integral) {
            return None;
        }
        let extra = products_outside(&lat);
        if extra.is_empty() {
            return Some(QuatOrder { lattice: lat });
        }
        lat = lat.sum(&extra).ok()?;
    }
}

/// An order strictly containing `o` with index a power of `p`, if any.
///
/// If `o` is not maximal at `p`, some `x in (1/p) o \ o` generates a larger
/// order together with `o`; candidates are the classes of `(1/p) o / o` up
/// to scaling by units mod `p`.
fn enlarge_at(o: &QuatOrder, p: u64, bound: &Rational) -> Option<QuatOrder> {
    let basis = o.basis();
    let pr = qi(p as i64).recip();
    let p = p as i64;
    let total = p.pow(4);
    for code in 1..total {
        let digits = [code % p, code / p % p, code / (p * p) % p, code / (p * p * p)];
        // Normalize: the first nonzero digit is 1.
        if digits.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let mut x = o.algebra().zero();
        for (c, b) in digits.iter().zip(&basis) {
            if *c != 0 {
                x = &x + &b.scale(&qi(*c));
            }
        }
        let x = x.scale(&pr);
        if !is_integral(&x) {
            continue;
        }
        if let Some(bigger) = adjoin(o, &x, bound) {
            return Some(bigger);
        }
    }
    None
}

/// A maximal order containing `o`, obtained by repeated `p`-saturation at
/// the primes dividing `reduced_discriminant(o) / disc(D)`.
pub fn maximalize(o: &QuatOrder) -> Result<QuatOrder> {
    let disc = disc_of(o.algebra())?;
    let mut cur = o.clone();
    loop {
        let rd = reduced_discriminant(&cur)?;
        if rd == disc {
            return Ok(cur);
        }
        if rd % disc != 0 {
            return Err(Error::InvalidOrder(format!(
                "reduced discriminant {rd} is not a multiple of disc {disc}"
            )));
        }
        let bound = qi((rd / disc) as i64);
        let mut grown = None;
        for p in prime_divisors((rd / disc) as i64) {
            if let Some(bigger) = enlarge_at(&cur, p, &bound) {
                grown = Some(bigger);
                break;
            }
        }
        cur = grown.ok_or_else(|| {
            Error::InvalidOrder(format!("no enlargement found at reduced discriminant {rd}"))
        })?;
    }
}

/// A maximal order of an algebra with integral parameters.
pub fn maximal_order(alg: &Arc<QuatAlgebra>) -> Result<QuatOrder> {
    maximalize(&QuatOrder::standard(alg)?)
}

/// An imaginary quadratic order `Z + c O_L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadOrder {
    pub field: ImagQuadField,
    pub conductor: u64,
}

impl QuadOrder {
    pub fn new(field: ImagQuadField, conductor: u64) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::ZeroInput("conductor"));
        }
        Ok(QuadOrder { field, conductor })
    }

    /// `c^2 disc L`.
    pub fn discriminant(&self) -> i64 {
        (self.conductor * self.conductor) as i64 * self.field.disc()
    }
}

/// The rank-2 lattice `(Q + Q g) ∩ O` as two elements of `D`.
pub fn intersect_with_field(o: &QuatOrder, g: &QuatElement) -> Result<[QuatElement; 2]> {
    let alg = o.algebra();
    let span = [alg.one().coords().to_vec(), g.coords().to_vec()];
    let normals = rational_kernel(&span, 4);
    let basis = o.basis();
    // m[i][k] = <b_i, w_k>, scaled per column to integers.
    let mut cols: Vec<Vec<Rational>> = normals
        .iter()
        .map(|w| {
            basis
                .iter()
                .map(|b| b.coords().iter().zip(w).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect();
    for col in cols.iter_mut() {
        let den = common_denominator(col.iter());
        for x in col.iter_mut() {
            *x *= Rational::from_integer(den.clone());
        }
    }
    let m: Vec<Vec<BigInt>> = (0..4)
        .map(|i| cols.iter().map(|c| c[i].to_integer()).collect())
        .collect();
    let kernel = integer_left_kernel(&m);
    if kernel.len() != 2 {
        return Err(Error::InvalidOrder(format!(
            "intersection has rank {} instead of 2",
            kernel.len()
        )));
    }
    let elem = |row: &Vec<BigInt>| {
        row.iter().zip(&basis).fold(alg.zero(), |acc, (c, b)| {
            &acc + &b.scale(&Rational::from_integer(c.clone()))
        })
    };
    Ok([elem(&kernel[0]), elem(&kernel[1])])
}

/// Discriminant of a rank-2 ring `Z x + Z y` inside a quadratic subfield:
/// `-det(tr(x_i conj(x_j)))`.
pub fn rank2_discriminant(basis: &[QuatElement; 2]) -> Rational {
    let gram: Vec<Vec<Rational>> = basis
        .iter()
        .map(|x| basis.iter().map(|y| (x * &y.conj()).trace()).collect())
        .collect();
    -determinant(&gram)
}

/// The conductor `c` with `iota^{-1}(O) = Z + c O_L` for the embedding
/// sending a trace-zero generator of `L` to `g`.
pub fn embedding_conductor(o: &QuatOrder, g: &Embedding, l: &ImagQuadField) -> Result<u64> {
    if **g.algebra() != **o.algebra() {
        return Err(Error::ParentMismatch);
    }
    let generated = ImagQuadField::from_square(g.delta())
        .map_err(|e| Error::FieldMismatch(e.to_string()))?;
    if generated != *l {
        return Err(Error::FieldMismatch(format!(
            "g^2 = {} generates Q(sqrt(-{})), not Q(sqrt(-{}))",
            g.delta(),
            generated.d(),
            l.d()
        )));
    }
    let lattice = intersect_with_field(o, g.image())?;
    let disc = rank2_discriminant(&lattice);
    let ratio = disc / qi(l.disc());
    if !ratio.is_integer() || ratio.is_negative() {
        return Err(Error::InvalidOrder(format!(
            "intersection discriminant is not c^2 disc L (ratio {ratio})"
        )));
    }
    let r = ratio.to_integer().to_i128().ok_or(Error::Overflow("conductor"))?;
    let c = exact_sqrt(r).ok_or_else(|| {
        Error::InvalidOrder(format!("intersection discriminant ratio {r} is not a square"))
    })?;
    u64::try_from(c).map_err(|_| Error::Overflow("conductor"))
}

/// Existence of an optimal embedding of `O_{L,c}` into a maximal order of
/// the indefinite algebra of discriminant `disc`: `L` splits and no
/// ramified prime divides `c`.
pub fn optimal_embedding_exists(disc: u64, l: &ImagQuadField, c: u64) -> bool {
    splits_disc(l, disc) && prime_divisors(disc as i64).iter().all(|p| !c.is_multiple_of(*p))
}

/// Image of the standard generator of `O_L` (`sqrt(-d)` or `(1 + sqrt(-d))/2`)
/// under the embedding determined by `g`.
pub fn image_of_generator(g: &Embedding, l: &ImagQuadField) -> Result<QuatElement> {
    // delta = -d f^2
    let f2 = -g.delta() / qi(l.d() as i64);
    let num = exact_sqrt(arith::big_to_i64(f2.numer())? as i128);
    let den = exact_sqrt(arith::big_to_i64(f2.denom())? as i128);
    let (Some(num), Some(den)) = (num, den) else {
        return Err(Error::FieldMismatch(format!("{} is not -d times a square", g.delta())));
    };
    let f = Rational::new(BigInt::from(num), BigInt::from(den));
    let sqrt_d = g.image().scale(&f.recip());
    if l.disc() % 4 == 0 {
        Ok(sqrt_d)
    } else {
        let alg = g.algebra();
        Ok((&alg.one() + &sqrt_d).scale(&Rational::new(1.into(), 2.into())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::quat::embedding_from_element;

    fn alg() -> Arc<QuatAlgebra> {
        QuatAlgebra::from_ints(-1, 3).unwrap()
    }

    #[test]
    fn standard_order() {
        let d = alg();
        let o = order_from_basis(&d, &d.basis()).unwrap();
        assert_eq!(reduced_discriminant(&o).unwrap(), 12);
        assert!(!is_maximal(&o).unwrap());
    }

    #[test]
    fn rejects_non_orders() {
        let d = alg();
        let gens = [d.one(), d.i().scale(&q(1, 2)), d.j(), d.ij()];
        assert!(matches!(order_from_basis(&d, &gens), Err(Error::InvalidOrder(_))));
        let gens = [d.i(), d.j(), d.ij(), d.i().scale(&qi(2))];
        assert!(order_from_basis(&d, &gens).is_err());
        let gens = [d.one(), d.i(), d.j()];
        assert!(order_from_basis(&d, &gens).is_err());
    }

    #[test]
    fn hurwitz_like_lattice_decided_by_closure() {
        let d = alg();
        let h = d.element([q(1, 2), q(1, 2), q(1, 2), q(1, 2)]);
        let gens = [d.one(), d.i(), d.j(), h.clone()];
        let lat = QuatLattice::from_generators(&d, &gens).unwrap();
        let closed = products_outside(&lat).is_empty() && lat.contains(&d.one());
        assert_eq!(order_from_basis(&d, &gens).is_ok(), closed);
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let d = alg();
        let a = QuatLattice::from_generators(&d, &d.basis()).unwrap();
        let shuffled = [&d.i() + &d.one(), d.ij(), &d.j() - &d.i(), d.one()];
        let b = QuatLattice::from_generators(&d, &shuffled).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sublattice_scales_discriminant() {
        let d = alg();
        let gens = [d.one(), d.i().scale(&qi(3)), d.j(), d.ij()];
        // Z + 3Zi + Zj + Zij is closed: products of i-multiples land in the span.
        let o = order_from_basis(&d, &gens).unwrap();
        assert_eq!(reduced_discriminant(&o).unwrap(), 36);
    }

    #[test]
    fn maximal_order_of_disc_6() {
        let d = alg();
        let o = QuatOrder::standard(&d).unwrap();
        let m = maximalize(&o).unwrap();
        assert_eq!(reduced_discriminant(&m).unwrap(), 6);
        assert!(is_maximal(&m).unwrap());
        assert!(o.lattice().is_sublattice_of(m.lattice()));
        assert_eq!(o.lattice().index_in(m.lattice()), qi(2));
        assert_eq!(maximalize(&m).unwrap(), m);
    }

    #[test]
    fn conductor_of_i() {
        let d = alg();
        let m = maximal_order(&d).unwrap();
        let l = ImagQuadField::new(1).unwrap();
        let g = embedding_from_element(&d.i()).unwrap();
        let c = embedding_conductor(&m, &g, &l).unwrap();
        let lat = intersect_with_field(&m, g.image()).unwrap();
        assert_eq!(rank2_discriminant(&lat), qi((c * c) as i64 * l.disc()));
        let g3 = embedding_from_element(&d.i().scale(&qi(3))).unwrap();
        assert_eq!(embedding_conductor(&m, &g3, &l).unwrap(), c);
        let g_half = embedding_from_element(&d.i().scale(&q(1, 2))).unwrap();
        assert_eq!(embedding_conductor(&m, &g_half, &l).unwrap(), c);
        let wrong = ImagQuadField::new(2).unwrap();
        assert!(matches!(embedding_conductor(&m, &g, &wrong), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn conductor_matches_membership_oracle() {
        let d = alg();
        let m = maximal_order(&d).unwrap();
        for coords in [[0, 1, 0, 0], [0, 1, 1, 0], [0, 2, 1, 1], [0, 0, 1, 1], [0, 3, 0, 1]] {
            let g = d.from_ints_coords(coords);
            let Ok(emb) = embedding_from_element(&g) else { continue };
            if !emb.is_imaginary() {
                continue;
            }
            let l = ImagQuadField::from_square(emb.delta()).unwrap();
            let c = embedding_conductor(&m, &emb, &l).unwrap();
            let w = image_of_generator(&emb, &l).unwrap();
            let oracle = (1..).find(|&k| m.contains(&w.scale(&qi(k)))).unwrap();
            assert_eq!(c, oracle as u64, "{g}");
        }
    }

    #[test]
    fn optimal_embedding_criterion() {
        let qi1 = ImagQuadField::new(1).unwrap();
        assert!(optimal_embedding_exists(6, &qi1, 1));
        assert!(!optimal_embedding_exists(6, &qi1, 2));
        assert!(!optimal_embedding_exists(6, &qi1, 3));
        assert!(optimal_embedding_exists(6, &qi1, 5));
        let l7 = ImagQuadField::new(7).unwrap();
        assert!((1..10).all(|c| !optimal_embedding_exists(6, &l7, c)));
    }
}
