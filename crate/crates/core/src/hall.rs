//! The Hall algebra of `rep(Q, F_q)`: the plain product, the twisted product with
//! adjoined `K_alpha`, coproducts, counit and pairings.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::category::{IsoLabel, RepCategory};
use crate::error::{HallError, Result};
use crate::lincomb::LinComb;
use crate::quiver::{class_add, to_class, KClass};
use crate::Coeff;

/// Basis symbol `[A] * K_alpha`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct HallSym {
    pub label: IsoLabel,
    pub k: KClass,
}

impl HallSym {
    pub fn plain(label: IsoLabel) -> Self {
        let n = label.dimvec.len();
        HallSym { label, k: vec![0; n] }
    }

    pub fn k_only(alpha: KClass) -> Self {
        let n = alpha.len();
        HallSym { label: IsoLabel::zero(n), k: alpha }
    }

    pub fn is_k_free(&self) -> bool {
        self.k.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for HallSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.label)?;
        if !self.is_k_free() {
            let k: Vec<String> = self.k.iter().map(i64::to_string).collect();
            write!(f, "K({})", k.join(","))?;
        }
        Ok(())
    }
}

pub type HallElement = LinComb<HallSym>;
pub type TensorElement = LinComb<(HallSym, HallSym)>;
pub type Tensor3Element = LinComb<(HallSym, HallSym, HallSym)>;

/// Which coproduct to use on the extended algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoproductVariant {
    /// `t^<B,C> |Ext(B,C)_A| / |Aut A| [B] (x) [C]`, no K-twist.
    PlainAut,
    /// Same coefficient, with `K_{cl C}` inserted on the left factor.
    KTwistedAut,
    /// `t^<B,C> F^A_{BC} [B] K_{cl C} (x) [C]` with the number of subobjects
    /// `F^A_{BC} = |Ext(B,C)_A| |Aut A| / (|Aut B| |Aut C| |Hom(B,C)|)`.
    Green,
}

impl CoproductVariant {
    pub const ALL: [CoproductVariant; 3] =
        [CoproductVariant::PlainAut, CoproductVariant::KTwistedAut, CoproductVariant::Green];

    pub fn name(self) -> &'static str {
        match self {
            CoproductVariant::PlainAut => "plain-aut",
            CoproductVariant::KTwistedAut => "k-twisted-aut",
            CoproductVariant::Green => "green",
        }
    }
}

/// Which normalization to use for `([A]K_a, [B]K_b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingVariant {
    /// `delta_{A,B} / |Aut A| * t^(a,b)`.
    InverseAut,
    /// `delta_{A,B} * |Aut A| * t^(a,b)`.
    Aut,
}

impl PairingVariant {
    pub fn name(self) -> &'static str {
        match self {
            PairingVariant::InverseAut => "inverse-aut",
            PairingVariant::Aut => "aut",
        }
    }
}

pub(crate) fn q_power(q: u32, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), e)
}

pub(crate) fn ratio(n: BigInt, d: BigInt) -> Coeff {
    Coeff::from_rational(BigRational::new(n, d))
}

pub struct HallAlgebra<'c> {
    cat: &'c RepCategory,
}

impl<'c> HallAlgebra<'c> {
    pub fn new(cat: &'c RepCategory) -> Self {
        HallAlgebra { cat }
    }

    pub fn category(&self) -> &RepCategory {
        self.cat
    }

    pub fn t(&self, k: i64) -> Coeff {
        Coeff::tpow(self.cat.q(), k)
    }

    pub fn unit(&self) -> HallElement {
        HallElement::basis(HallSym::plain(self.cat.zero_label()))
    }

    pub fn basis(&self, label: &IsoLabel) -> HallElement {
        HallElement::basis(HallSym::plain(label.clone()))
    }

    pub fn k(&self, alpha: &[i64]) -> HallElement {
        HallElement::basis(HallSym::k_only(alpha.to_vec()))
    }

    pub fn euler(&self, a: &[i64], b: &[i64]) -> i64 {
        self.cat.euler_form(a, b)
    }

    pub fn sym_euler(&self, a: &[i64], b: &[i64]) -> i64 {
        self.cat.sym_euler_form(a, b)
    }

    /// `[A] <> [B] = sum_C |Ext(A,B)_C| / |Hom(A,B)| [C]`.
    pub fn diamond_basis(&self, a: &IsoLabel, b: &IsoLabel) -> Result<HallElement> {
        let dist = self.cat.ext_distribution(a, b)?;
        let hom = q_power(self.cat.q(), self.cat.hom_dim(a, b)?);
        Ok(dist
            .iter()
            .map(|(c, &n)| (HallSym::plain(c.clone()), ratio(BigInt::from(n), hom.clone())))
            .collect())
    }

    pub fn diamond(&self, x: &HallElement, y: &HallElement) -> Result<HallElement> {
        if x.keys().chain(y.keys()).any(|s| !s.is_k_free()) {
            return Err(HallError::NotKFree);
        }
        let mut out = HallElement::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_scaled(&self.diamond_basis(&a.label, &b.label)?, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// `([A]K_a) * ([B]K_b) = t^{(a, cl B) + <A, B>} ([A] <> [B]) K_{a+b}`.
    pub fn star_basis(&self, x: &HallSym, y: &HallSym) -> Result<HallElement> {
        let ca = x.label.class();
        let cb = y.label.class();
        let e = self.sym_euler(&x.k, &cb) + self.euler(&ca, &cb);
        let k = class_add(&x.k, &y.k);
        let s = self.t(e);
        let prod = self.diamond_basis(&x.label, &y.label)?;
        Ok(prod.iter().map(|(c, v)| (HallSym { label: c.label.clone(), k: k.clone() }, v * &s)).collect())
    }

    pub fn star(&self, x: &HallElement, y: &HallElement) -> Result<HallElement> {
        let mut out = HallElement::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_scaled(&self.star_basis(a, b)?, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Pairs `(B, C)` of registered classes with `dim B + dim C = dim A`.
    pub fn splittings(&self, a: &IsoLabel) -> Result<Vec<(IsoLabel, IsoLabel)>> {
        let mut out = Vec::new();
        for db in sub_dimvecs(&a.dimvec) {
            let dc: Vec<usize> = a.dimvec.iter().zip(&db).map(|(x, y)| x - y).collect();
            for b in self.cat.labels_with_dimvec(&db)? {
                for c in self.cat.labels_with_dimvec(&dc)? {
                    out.push((b.clone(), c));
                }
            }
        }
        Ok(out)
    }

    pub fn coproduct_basis(&self, x: &HallSym, variant: CoproductVariant) -> Result<TensorElement> {
        let a = &x.label;
        let aut_a = BigInt::from(self.cat.aut_order(a)?);
        let mut out = TensorElement::zero();
        for (b, c) in self.splittings(a)? {
            let n = self.cat.ext_count_with_middle(&b, &c, a)?;
            if n == 0 {
                continue;
            }
            let cb = b.class();
            let cc = c.class();
            let coeff = match variant {
                CoproductVariant::PlainAut | CoproductVariant::KTwistedAut => ratio(BigInt::from(n), aut_a.clone()),
                CoproductVariant::Green => {
                    let den = BigInt::from(self.cat.aut_order(&b)?)
                        * BigInt::from(self.cat.aut_order(&c)?)
                        * q_power(self.cat.q(), self.cat.hom_dim(&b, &c)?);
                    ratio(BigInt::from(n) * aut_a.clone(), den)
                }
            } * self.t(self.euler(&cb, &cc));
            let left_k = match variant {
                CoproductVariant::PlainAut => x.k.clone(),
                _ => class_add(&x.k, &cc),
            };
            out.add_term((HallSym { label: b, k: left_k }, HallSym { label: c, k: x.k.clone() }), coeff);
        }
        Ok(out)
    }

    pub fn coproduct(&self, x: &HallElement, variant: CoproductVariant) -> Result<TensorElement> {
        let mut out = TensorElement::zero();
        for (s, c) in x.iter() {
            out.add_scaled(&self.coproduct_basis(s, variant)?, c);
        }
        Ok(out)
    }

    pub fn counit(&self, x: &HallElement) -> Coeff {
        x.iter().filter(|(s, _)| s.label.is_zero()).map(|(_, c)| c.clone()).sum()
    }

    pub fn pairing_basis(&self, x: &HallSym, y: &HallSym, variant: PairingVariant) -> Result<Coeff> {
        if x.label != y.label {
            return Ok(Coeff::zero());
        }
        let aut = BigInt::from(self.cat.aut_order(&x.label)?);
        let base = match variant {
            PairingVariant::InverseAut => ratio(BigInt::one(), aut),
            PairingVariant::Aut => ratio(aut, BigInt::one()),
        };
        Ok(base * self.t(self.sym_euler(&x.k, &y.k)))
    }

    pub fn pairing(&self, x: &HallElement, y: &HallElement, variant: PairingVariant) -> Result<Coeff> {
        let mut acc = Coeff::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let p = self.pairing_basis(a, b, variant)?;
                if !p.is_zero() {
                    acc += ca * &(cb * &p);
                }
            }
        }
        Ok(acc)
    }

    /// `(x1 (x) x2, y1 (x) y2) = (x1, y1)(x2, y2)`.
    pub fn tensor_pairing(&self, x: &TensorElement, y: &TensorElement, variant: PairingVariant) -> Result<Coeff> {
        let mut acc = Coeff::zero();
        for ((x1, x2), cx) in x.iter() {
            for ((y1, y2), cy) in y.iter() {
                let p1 = self.pairing_basis(x1, y1, variant)?;
                if p1.is_zero() {
                    continue;
                }
                let p2 = self.pairing_basis(x2, y2, variant)?;
                acc += cx * &(cy * &(&p1 * &p2));
            }
        }
        Ok(acc)
    }

    pub fn tensor(&self, x: &HallElement, y: &HallElement) -> TensorElement {
        x.bilinear(y, |a, b| TensorElement::basis((a.clone(), b.clone())))
    }

    /// Componentwise twisted product on the tensor square.
    pub fn tensor_star(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero();
        for ((x1, x2), cx) in x.iter() {
            for ((y1, y2), cy) in y.iter() {
                let left = self.star_basis(x1, y1)?;
                let right = self.star_basis(x2, y2)?;
                out.add_scaled(&self.tensor(&left, &right), &(cx * cy));
            }
        }
        Ok(out)
    }

    /// `(Delta (x) 1) Delta x`.
    pub fn coproduct_left(&self, x: &HallElement, variant: CoproductVariant) -> Result<Tensor3Element> {
        let mut out = Tensor3Element::zero();
        for ((a, b), c) in self.coproduct(x, variant)?.iter() {
            for ((a1, a2), ca) in self.coproduct_basis(a, variant)?.iter() {
                out.add_term((a1.clone(), a2.clone(), b.clone()), c * ca);
            }
        }
        Ok(out)
    }

    /// `(1 (x) Delta) Delta x`.
    pub fn coproduct_right(&self, x: &HallElement, variant: CoproductVariant) -> Result<Tensor3Element> {
        let mut out = Tensor3Element::zero();
        for ((a, b), c) in self.coproduct(x, variant)?.iter() {
            for ((b1, b2), cb) in self.coproduct_basis(b, variant)?.iter() {
                out.add_term((a.clone(), b1.clone(), b2.clone()), c * cb);
            }
        }
        Ok(out)
    }

    /// `(eps (x) 1) Delta x` and `(1 (x) eps) Delta x`.
    pub fn counit_contractions(&self, x: &HallElement, variant: CoproductVariant) -> Result<(HallElement, HallElement)> {
        let d = self.coproduct(x, variant)?;
        let mut left = HallElement::zero();
        let mut right = HallElement::zero();
        for ((a, b), c) in d.iter() {
            if a.label.is_zero() {
                left.add_term(b.clone(), c.clone());
            }
            if b.label.is_zero() {
                right.add_term(a.clone(), c.clone());
            }
        }
        Ok((left, right))
    }
}

/// All `d' <= d` componentwise, lexicographic.
pub fn sub_dimvecs(d: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &x in d {
        out = out.into_iter().flat_map(|p| (0..=x).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out
}

/// Class of a symbol's underlying object.
pub fn symbol_class(s: &HallSym) -> KClass {
    to_class(&s.label.dimvec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn cat(name: &str, q: u32) -> RepCategory {
        RepCategory::new(Quiver::fixture(name).unwrap(), q).unwrap()
    }

    fn l(d: &[usize], i: usize) -> IsoLabel {
        IsoLabel { dimvec: d.to_vec(), index: i }
    }

    #[test]
    fn diamond_examples() {
        for q in [2u32, 3] {
            let a1 = cat("a1", q);
            let h = HallAlgebra::new(&a1);
            let k = l(&[1], 0);
            assert_eq!(h.diamond(&h.unit(), &h.basis(&k)).unwrap(), h.basis(&k));
            assert_eq!(h.diamond_basis(&k, &k).unwrap(), h.basis(&l(&[2], 0)).scaled(&Coeff::ratio(1, q as i64)));

            let a2 = cat("a2", q);
            let h = HallAlgebra::new(&a2);
            let (s1, s2) = (l(&[1, 0], 0), l(&[0, 1], 0));
            let expect = h.basis(&l(&[1, 1], 0)).plus(&h.basis(&l(&[1, 1], 1)).scaled(&Coeff::from_int(q as i64 - 1)));
            assert_eq!(h.diamond_basis(&s1, &s2).unwrap(), expect);
            assert_eq!(h.diamond_basis(&s2, &s1).unwrap(), h.basis(&l(&[1, 1], 0)));
        }
    }

    #[test]
    fn star_examples() {
        let a1 = cat("a1", 2);
        let h = HallAlgebra::new(&a1);
        let k = h.basis(&l(&[1], 0));
        assert_eq!(h.star(&k, &k).unwrap(), h.basis(&l(&[2], 0)).scaled(&h.t(-1)));
        assert_eq!(h.star(&h.k(&[3]), &h.k(&[-3])).unwrap(), h.unit());
        assert!(matches!(h.diamond(&h.k(&[1]), &k), Err(HallError::NotKFree)));

        let a2 = cat("a2", 2);
        let h = HallAlgebra::new(&a2);
        let s2 = h.basis(&l(&[0, 1], 0));
        let lhs = h.star(&h.k(&[1, 0]), &s2).unwrap();
        let rhs = h.star(&s2, &h.k(&[1, 0])).unwrap().scaled(&h.t(-1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn coproduct_examples() {
        let a2 = cat("a2", 2);
        let h = HallAlgebra::new(&a2);
        let zero = HallSym::plain(a2.zero_label());
        assert_eq!(
            h.coproduct(&h.unit(), CoproductVariant::PlainAut).unwrap(),
            TensorElement::basis((zero.clone(), zero.clone()))
        );
        let s1 = HallSym::plain(l(&[1, 0], 0));
        let d = h.coproduct(&HallElement::basis(s1.clone()), CoproductVariant::PlainAut).unwrap();
        let expect: TensorElement = [((s1.clone(), zero.clone()), Coeff::one()), ((zero, s1.clone()), Coeff::one())]
            .into_iter()
            .collect();
        assert_eq!(d, expect);
        let split = h.basis(&l(&[1, 1], 0));
        let d = h.coproduct(&split, CoproductVariant::PlainAut).unwrap();
        assert_eq!(d.coeff(&(s1, HallSym::plain(l(&[0, 1], 0)))), h.t(-1));
    }

    #[test]
    fn pairing_examples() {
        let a2 = cat("a2", 2);
        let h = HallAlgebra::new(&a2);
        let s1 = h.basis(&l(&[1, 0], 0));
        let s2 = h.basis(&l(&[0, 1], 0));
        for v in [PairingVariant::InverseAut, PairingVariant::Aut] {
            assert_eq!(h.pairing(&s1, &s2, v).unwrap(), Coeff::zero());
            assert_eq!(h.pairing(&s1, &s1, v).unwrap(), Coeff::one());
            let (a, b) = ([1, -2], [0, 1]);
            assert_eq!(h.pairing(&h.k(&a), &h.k(&b), v).unwrap(), h.t(h.sym_euler(&a, &b)));
        }
    }

    #[test]
    fn sub_dimvec_enumeration() {
        assert_eq!(sub_dimvecs(&[1, 2]).len(), 6);
        assert_eq!(sub_dimvecs(&[]), vec![Vec::<usize>::new()]);
    }
}
