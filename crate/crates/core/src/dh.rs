//! The localized Hall algebra of two-periodic complexes, in the normal form
//! `K_alpha * K*_beta * [C_A + C_B*]`, and the relations linking it to the
//! extended Hall algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::category::{IsoLabel, RepCategory};
use crate::complex::{ComplexCategory, ComplexClass, TwoComplex};
use crate::error::Result;
use crate::hall::{CoproductVariant, HallAlgebra, HallElement, HallSym, PairingVariant};
use crate::lincomb::LinComb;
use crate::quiver::{class_add, class_neg, class_sub, to_class, KClass};
use crate::Coeff;

/// `K_alpha * K*_beta * [C_A + C_B*]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct DHTerm {
    pub alpha: KClass,
    pub beta: KClass,
    pub a: IsoLabel,
    pub b: IsoLabel,
}

impl DHTerm {
    pub fn unit(n: usize) -> Self {
        DHTerm { alpha: vec![0; n], beta: vec![0; n], a: IsoLabel::zero(n), b: IsoLabel::zero(n) }
    }

    /// `cl A - cl B`, the class of the complex part.
    pub fn hat(&self) -> KClass {
        class_sub(&self.a.class(), &self.b.class())
    }

    pub fn homology_dim(&self) -> usize {
        self.a.total_dim() + self.b.total_dim()
    }

    pub fn star(&self) -> Self {
        DHTerm { alpha: self.beta.clone(), beta: self.alpha.clone(), a: self.b.clone(), b: self.a.clone() }
    }

    fn shifted(&self, alpha: &[i64], beta: &[i64]) -> Self {
        DHTerm { alpha: class_add(&self.alpha, alpha), beta: class_add(&self.beta, beta), a: self.a.clone(), b: self.b.clone() }
    }
}

impl fmt::Display for DHTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |x: &[i64]| x.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "K({})K*({})[C{} + C*{}]", v(&self.alpha), v(&self.beta), self.a, self.b)
    }
}

pub type DHElement = LinComb<DHTerm>;

pub fn dh_star(x: &DHElement) -> DHElement {
    x.iter().map(|(k, c)| (k.star(), c.clone())).collect()
}

/// Order used for triangularity: homology dimension first.
fn triangular_key(t: &DHTerm) -> (usize, IsoLabel, IsoLabel, KClass, KClass) {
    (t.homology_dim(), t.a.clone(), t.b.clone(), t.alpha.clone(), t.beta.clone())
}

/// How the double relation is written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DoublePattern {
    /// `sum (a2, b1) I+(a1) I-(b2) = sum (a1, b2) I-(b1) I+(a2)`.
    Crossed,
    /// `sum (a2, b2) I+(a1) I-(b1) = sum (a1, b1) I-(b2) I+(a2)`.
    SameSide,
}

impl DoublePattern {
    pub fn name(self) -> &'static str {
        match self {
            DoublePattern::Crossed => "crossed",
            DoublePattern::SameSide => "same-side",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DoubleConvention {
    pub pattern: DoublePattern,
    pub coproduct: CoproductVariant,
    pub pairing: PairingVariant,
}

impl Default for DoubleConvention {
    fn default() -> Self {
        DoubleConvention { pattern: DoublePattern::Crossed, coproduct: CoproductVariant::Green, pairing: PairingVariant::Aut }
    }
}

impl fmt::Display for DoubleConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.pattern.name(), self.coproduct.name(), self.pairing.name())
    }
}

/// Outcome of one double-relation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleReport {
    pub case: String,
    pub a: String,
    pub b: String,
    pub convention: String,
    pub lhs: Vec<(String, String)>,
    pub rhs: Vec<(String, String)>,
    pub equal: bool,
}

pub fn element_rows(x: &DHElement) -> Vec<(String, String)> {
    x.iter().map(|(k, c)| (k.to_string(), c.to_string())).collect()
}

/// Summary of the triangular-basis check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularReport {
    pub products: usize,
    pub rank: usize,
    pub triangular: bool,
    pub failures: Vec<String>,
}

impl TriangularReport {
    pub fn passed(&self) -> bool {
        self.triangular && self.rank == self.products
    }
}

type CoreKey = (IsoLabel, IsoLabel, IsoLabel, IsoLabel);

pub struct DHAlgebra<'c> {
    cc: ComplexCategory<'c>,
    hall: HallAlgebra<'c>,
    core: Mutex<HashMap<CoreKey, Arc<DHElement>>>,
}

impl<'c> DHAlgebra<'c> {
    pub fn new(cat: &'c RepCategory) -> Self {
        DHAlgebra { cc: ComplexCategory::new(cat), hall: HallAlgebra::new(cat), core: Mutex::default() }
    }

    pub fn category(&self) -> &'c RepCategory {
        self.cc.category()
    }

    pub fn complexes(&self) -> &ComplexCategory<'c> {
        &self.cc
    }

    pub fn hall(&self) -> &HallAlgebra<'c> {
        &self.hall
    }

    fn n(&self) -> usize {
        self.category().num_vertices()
    }

    fn t(&self, k: i64) -> Coeff {
        Coeff::tpow(self.category().q(), k)
    }

    fn sym(&self, a: &[i64], b: &[i64]) -> i64 {
        self.category().sym_euler_form(a, b)
    }

    pub fn unit(&self) -> DHElement {
        DHElement::basis(DHTerm::unit(self.n()))
    }

    pub fn k_plus(&self, alpha: &[i64]) -> DHElement {
        DHElement::basis(DHTerm { alpha: alpha.to_vec(), ..DHTerm::unit(self.n()) })
    }

    pub fn k_minus(&self, beta: &[i64]) -> DHElement {
        DHElement::basis(DHTerm { beta: beta.to_vec(), ..DHTerm::unit(self.n()) })
    }

    /// `[C_A + C_B*]`.
    pub fn complex_term(&self, a: &IsoLabel, b: &IsoLabel) -> DHElement {
        DHElement::basis(DHTerm { a: a.clone(), b: b.clone(), ..DHTerm::unit(self.n()) })
    }

    fn proj_class(&self, m: &[usize]) -> KClass {
        to_class(&self.category().quiver().projective_sum_dimvec(m))
    }

    /// `[L] = t^e K_{cl P} K*_{cl Q} [C_A + C_B*]` for a complex class.
    pub fn class_term(&self, c: &ComplexClass) -> (i64, DHTerm) {
        let cp = self.proj_class(&c.p);
        let cq = self.proj_class(&c.q);
        let hat = class_sub(&c.a.class(), &c.b.class());
        let e = self.category().euler_form(&class_sub(&cq, &cp), &hat);
        (e, DHTerm { alpha: cp, beta: cq, a: c.a.clone(), b: c.b.clone() })
    }

    pub fn normalize_class(&self, c: &ComplexClass, coeff: &Coeff) -> DHElement {
        let (e, term) = self.class_term(c);
        DHElement::term(term, coeff * &self.t(e))
    }

    /// `coeff * [M]` in normal form.
    pub fn normalize(&self, m: &TwoComplex, coeff: &Coeff) -> Result<DHElement> {
        let d = self.cc.decompose(m)?;
        Ok(self.normalize_class(&d.class, coeff))
    }

    /// `[C_A + C_B*] * [C_A' + C_B'*]`, memoized.
    fn core_product(&self, key: &CoreKey) -> Result<Arc<DHElement>> {
        if let Some(x) = self.core.lock().unwrap().get(key) {
            return Ok(x.clone());
        }
        let n = self.n();
        let u = ComplexClass { a: key.0.clone(), b: key.1.clone(), p: vec![0; n], q: vec![0; n] };
        let v = ComplexClass { a: key.2.clone(), b: key.3.clone(), p: vec![0; n], q: vec![0; n] };
        let mut out = DHElement::zero();
        for (l, c) in self.cc.raw_product(&u, &v)?.iter() {
            let (e, term) = self.class_term(l);
            out.add_term(term, c * &self.t(e));
        }
        Ok(self.core.lock().unwrap().entry(key.clone()).or_insert_with(|| Arc::new(out)).clone())
    }

    pub fn mul_terms(&self, x: &DHTerm, y: &DHTerm) -> Result<DHElement> {
        // move K_alpha' K*_beta' left across [C_A + C_B*]
        let hat = x.hat();
        let e = self.sym(&y.beta, &hat) - self.sym(&y.alpha, &hat);
        let scale = self.t(e);
        let alpha = class_add(&x.alpha, &y.alpha);
        let beta = class_add(&x.beta, &y.beta);
        let core = self.core_product(&(x.a.clone(), x.b.clone(), y.a.clone(), y.b.clone()))?;
        Ok(core.iter().map(|(t, c)| (t.shifted(&alpha, &beta), c * &scale)).collect())
    }

    pub fn mul(&self, x: &DHElement, y: &DHElement) -> Result<DHElement> {
        let mut out = DHElement::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_scaled(&self.mul_terms(a, b)?, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// `E_A = t^{<cl P_A, cl A>} K_{-cl P_A} [C_A]`.
    pub fn e(&self, a: &IsoLabel) -> Result<DHElement> {
        let r = self.category().resolution(a)?;
        let cp = to_class(r.p.dimvec());
        let coeff = self.t(self.category().euler_form(&cp, &a.class()));
        Ok(DHElement::term(DHTerm { alpha: class_neg(&cp), ..DHTerm { a: a.clone(), ..DHTerm::unit(self.n()) } }, coeff))
    }

    pub fn f(&self, a: &IsoLabel) -> Result<DHElement> {
        Ok(dh_star(&self.e(a)?))
    }

    /// `[A] K_alpha -> E_A * K_alpha`, extended linearly.
    pub fn embed_plus(&self, h: &HallElement) -> Result<DHElement> {
        let mut out = DHElement::zero();
        for (s, c) in h.iter() {
            out.add_scaled(&self.mul(&self.e(&s.label)?, &self.k_plus(&s.k))?, c);
        }
        Ok(out)
    }

    /// `[A] K_alpha -> F_A * K*_alpha`, extended linearly.
    pub fn embed_minus(&self, h: &HallElement) -> Result<DHElement> {
        let mut out = DHElement::zero();
        for (s, c) in h.iter() {
            out.add_scaled(&self.mul(&self.f(&s.label)?, &self.k_minus(&s.k))?, c);
        }
        Ok(out)
    }

    fn embed_sym_plus(&self, s: &HallSym) -> Result<DHElement> {
        self.embed_plus(&HallElement::basis(s.clone()))
    }

    fn embed_sym_minus(&self, s: &HallSym) -> Result<DHElement> {
        self.embed_minus(&HallElement::basis(s.clone()))
    }

    /// Both sides of the double relation for basis symbols `a`, `b`.
    pub fn double_sides(&self, a: &HallSym, b: &HallSym, conv: DoubleConvention) -> Result<(DHElement, DHElement)> {
        let da = self.hall.coproduct_basis(a, conv.coproduct)?;
        let db = self.hall.coproduct_basis(b, conv.coproduct)?;
        let mut lhs = DHElement::zero();
        let mut rhs = DHElement::zero();
        for ((a1, a2), ca) in da.iter() {
            for ((b1, b2), cb) in db.iter() {
                let c = ca * cb;
                let (pl, pr) = match conv.pattern {
                    DoublePattern::Crossed => (
                        self.hall.pairing_basis(a2, b1, conv.pairing)?,
                        self.hall.pairing_basis(a1, b2, conv.pairing)?,
                    ),
                    DoublePattern::SameSide => (
                        self.hall.pairing_basis(a2, b2, conv.pairing)?,
                        self.hall.pairing_basis(a1, b1, conv.pairing)?,
                    ),
                };
                let (lb, rb) = match conv.pattern {
                    DoublePattern::Crossed => (b2, b1),
                    DoublePattern::SameSide => (b1, b2),
                };
                if !pl.is_zero() {
                    let prod = self.mul(&self.embed_sym_plus(a1)?, &self.embed_sym_minus(lb)?)?;
                    lhs.add_scaled(&prod, &(&c * &pl));
                }
                if !pr.is_zero() {
                    let prod = self.mul(&self.embed_sym_minus(rb)?, &self.embed_sym_plus(a2)?)?;
                    rhs.add_scaled(&prod, &(&c * &pr));
                }
            }
        }
        Ok((lhs, rhs))
    }

    pub fn check_double_relation(&self, a: &HallSym, b: &HallSym, conv: DoubleConvention) -> Result<DoubleReport> {
        let (lhs, rhs) = self.double_sides(a, b, conv)?;
        let tag = |s: &HallSym| if s.label.is_zero() { "K" } else { "A" };
        Ok(DoubleReport {
            case: format!("{}{}", tag(a), tag(b)),
            a: a.to_string(),
            b: b.to_string(),
            convention: conv.to_string(),
            equal: lhs == rhs,
            lhs: element_rows(&lhs),
            rhs: element_rows(&rhs),
        })
    }

    /// `E_A * K_alpha * K*_beta * F_B` for all `A`, `B` of total dimension at most
    /// `bound` and `alpha`, `beta` in `[-kgrid, kgrid]^n`: each must have the
    /// leading term `(alpha - cl P_A, beta - cl P_B, A, B)` with every other term of
    /// smaller homology dimension, and the whole family must have full rank.
    pub fn check_triangular_basis(&self, bound: usize, kgrid: i64) -> Result<TriangularReport> {
        let labels = self.category().labels_up_to(bound)?;
        let grid = k_grid(self.n(), kgrid);
        let mut pivots: BTreeMap<(usize, IsoLabel, IsoLabel, KClass, KClass), DHElement> = BTreeMap::new();
        let mut failures = Vec::new();
        let mut products = 0;
        for a in &labels {
            for b in &labels {
                let ea = self.e(a)?;
                let fb = self.f(b)?;
                let pa = to_class(self.category().resolution(a)?.p.dimvec());
                let pb = to_class(self.category().resolution(b)?.p.dimvec());
                for alpha in &grid {
                    for beta in &grid {
                        products += 1;
                        let kk = self.mul(&self.k_plus(alpha), &self.k_minus(beta))?;
                        let x = self.mul(&self.mul(&ea, &kk)?, &fb)?;
                        let lead = DHTerm { alpha: class_sub(alpha, &pa), beta: class_sub(beta, &pb), a: a.clone(), b: b.clone() };
                        let dim = a.total_dim() + b.total_dim();
                        let ok = !x.coeff(&lead).is_zero() && x.keys().all(|t| t == &lead || t.homology_dim() < dim);
                        if !ok {
                            failures.push(format!("E{a} K{alpha:?} K*{beta:?} F{b}"));
                        }
                        reduce_into(&mut pivots, x);
                    }
                }
            }
        }
        Ok(TriangularReport { products, rank: pivots.len(), triangular: failures.is_empty(), failures })
    }

    /// `(a b) c = a (b c)` on normal-form terms.
    pub fn check_associative(&self, x: &DHTerm, y: &DHTerm, z: &DHTerm) -> Result<bool> {
        let (x, y, z) = (DHElement::basis(x.clone()), DHElement::basis(y.clone()), DHElement::basis(z.clone()));
        Ok(self.mul(&self.mul(&x, &y)?, &z)? == self.mul(&x, &self.mul(&y, &z)?)?)
    }
}

/// All vectors in `[-r, r]^n`, lexicographic.
pub fn k_grid(n: usize, r: i64) -> Vec<KClass> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p: KClass| (-r..=r).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out
}

/// Gaussian elimination over `Q(sqrt q)`: reduce `x` against pivot rows and keep it
/// if something nonzero remains.
fn reduce_into(pivots: &mut BTreeMap<(usize, IsoLabel, IsoLabel, KClass, KClass), DHElement>, mut x: DHElement) -> bool {
    loop {
        let Some(lead) = x.keys().max_by_key(|t| triangular_key(t)).cloned() else {
            return false;
        };
        let key = triangular_key(&lead);
        match pivots.get(&key) {
            Some(row) => {
                let c = x.coeff(&lead);
                x = x.minus(&row.scaled(&c));
            }
            None => {
                let inv = x.coeff(&lead).checked_inv().expect("leading coefficient is nonzero");
                pivots.insert(key, x.scaled(&inv));
                return true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn setup(name: &str, q: u32) -> RepCategory {
        RepCategory::new(Quiver::fixture(name).unwrap(), q).unwrap()
    }

    fn l(d: &[usize], i: usize) -> IsoLabel {
        IsoLabel { dimvec: d.to_vec(), index: i }
    }

    #[test]
    fn normal_forms_of_acyclic_complexes() {
        let cat = setup("a2", 2);
        let dh = DHAlgebra::new(&cat);
        let cc = dh.complexes();
        let one = Coeff::from_int(1);
        assert_eq!(dh.normalize(&cc.k_of(&[1, 0]), &one).unwrap(), dh.k_plus(&[1, 1]));
        let m = cc.sum(&cc.k_of(&[0, 1]), &cc.kstar_of(&[1, 0]));
        assert_eq!(dh.normalize(&m, &one).unwrap(), dh.mul(&dh.k_plus(&[0, 1]), &dh.k_minus(&[1, 1])).unwrap());
        let s1 = l(&[1, 0], 0);
        assert_eq!(dh.normalize(&cc.c_of(&s1).unwrap(), &one).unwrap(), dh.complex_term(&s1, &cat.zero_label()));
    }

    #[test]
    fn e_examples() {
        let cat = setup("a2", 2);
        let dh = DHAlgebra::new(&cat);
        assert_eq!(dh.e(&cat.zero_label()).unwrap(), dh.unit());
        let e = dh.e(&l(&[1, 0], 0)).unwrap();
        let term = DHTerm { alpha: vec![0, -1], ..DHTerm { a: l(&[1, 0], 0), ..DHTerm::unit(2) } };
        assert_eq!(e, DHElement::basis(term));
        let p1 = l(&[1, 1], 1);
        assert_eq!(dh.e(&p1).unwrap(), dh.complex_term(&p1, &cat.zero_label()));
    }

    #[test]
    fn k_symbols_commute() {
        let cat = setup("a2", 3);
        let dh = DHAlgebra::new(&cat);
        let (a, b) = (dh.k_plus(&[1, -2]), dh.k_minus(&[0, 1]));
        assert_eq!(dh.mul(&a, &b).unwrap(), dh.mul(&b, &a).unwrap());
        let x = dh.complex_term(&l(&[1, 0], 0), &cat.zero_label());
        let alpha = [1i64, 1];
        let lhs = dh.mul(&dh.k_plus(&alpha), &x).unwrap();
        let rhs = dh.mul(&x, &dh.k_plus(&alpha)).unwrap().scaled(&Coeff::tpow(3, cat.sym_euler_form(&alpha, &[1, 0])));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn grid() {
        assert_eq!(k_grid(2, 1).len(), 9);
        assert_eq!(k_grid(1, 2), vec![vec![-2], vec![-1], vec![0], vec![1], vec![2]]);
    }
}
