//! Verification suites: each runs a family of exact identities over every basis
//! element within a dimension bound and tallies pass/fail with counterexamples.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::category::{IsoLabel, RepCategory};
use crate::complex::ComplexClass;
use crate::dh::{dh_star, k_grid, DHAlgebra, DHElement, DHTerm, DoubleConvention, DoublePattern};
use crate::error::{HallError, Result};
use crate::hall::{CoproductVariant, HallAlgebra, HallElement, HallSym, PairingVariant};
use crate::quiver::{class_sub, to_class, KClass};
use crate::Coeff;

pub const SCHEMA_VERSION: u32 = 1;
const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    HallAssoc,
    Bialgebra,
    Pairing,
    ComplexRelations,
    Triangular,
    DoubleRelation,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::HallAssoc,
        Suite::Bialgebra,
        Suite::Pairing,
        Suite::ComplexRelations,
        Suite::Triangular,
        Suite::DoubleRelation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::HallAssoc => "hall-assoc",
            Suite::Bialgebra => "bialgebra",
            Suite::Pairing => "pairing",
            Suite::ComplexRelations => "complex-relations",
            Suite::Triangular => "triangular",
            Suite::DoubleRelation => "double-relation",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HallError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| HallError::Parse(format!("unknown suite '{s}'")))
    }
}

/// One identity checked over many cases. Informational checks are reported
/// but do not affect the verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub counted: bool,
    pub cases: usize,
    pub failures: usize,
    pub passed: bool,
    pub counterexamples: Vec<String>,
}

impl Check {
    fn from_cases(name: impl Into<String>, counted: bool, results: Vec<(bool, String)>) -> Self {
        let cases = results.len();
        let bad: Vec<String> = results.into_iter().filter(|(ok, _)| !ok).map(|(_, s)| s).collect();
        Check {
            name: name.into(),
            counted,
            cases,
            failures: bad.len(),
            passed: bad.is_empty(),
            counterexamples: bad.into_iter().take(MAX_COUNTEREXAMPLES).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed || !c.counted)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub max_dim: usize,
    pub kgrid: i64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_dim: 2, kgrid: 2 }
    }
}

/// Run one suite. Budget overruns propagate so the caller can report partially.
pub fn run_suite(cat: &RepCategory, suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::HallAssoc => hall_assoc(cat, cfg)?,
        Suite::Bialgebra => bialgebra(cat, cfg)?,
        Suite::Pairing => pairing(cat, cfg)?,
        Suite::ComplexRelations => complex_relations(cat, cfg)?,
        Suite::Triangular => triangular(cat, cfg)?,
        Suite::DoubleRelation => double_relation(cat, cfg)?,
    };
    Ok(SuiteReport { suite, checks, error: None })
}

fn collect<T: Send + Sync>(items: Vec<T>, f: impl Fn(&T) -> Result<(bool, String)> + Sync + Send) -> Result<Vec<(bool, String)>> {
    items.par_iter().map(f).collect()
}

/// `K`-exponents used where a full grid would be too many triples: `0` and `+-e_i`.
pub fn k_probes(n: usize) -> Vec<KClass> {
    let mut out = vec![vec![0; n]];
    for i in 0..n {
        for s in [1, -1] {
            let mut v = vec![0; n];
            v[i] = s;
            out.push(v);
        }
    }
    out
}

fn triples(labels: &[IsoLabel], bound: usize) -> Vec<(IsoLabel, IsoLabel, IsoLabel)> {
    let mut out = Vec::new();
    for a in labels {
        for b in labels {
            for c in labels {
                if a.total_dim() + b.total_dim() + c.total_dim() <= bound {
                    out.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
    }
    out
}

fn pairs(labels: &[IsoLabel], bound: usize) -> Vec<(IsoLabel, IsoLabel)> {
    let mut out = Vec::new();
    for a in labels {
        for b in labels {
            if a.total_dim() + b.total_dim() <= bound {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

fn sym(label: &IsoLabel, k: &[i64]) -> HallSym {
    HallSym { label: label.clone(), k: k.to_vec() }
}

fn hall_assoc(cat: &RepCategory, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let h = HallAlgebra::new(cat);
    let labels = cat.labels_up_to(cfg.max_dim)?;
    let mut checks = Vec::new();

    let items = triples(&labels, cfg.max_dim);
    let res = collect(items, |(a, b, c)| {
        let (x, y, z) = (h.basis(a), h.basis(b), h.basis(c));
        let l = h.diamond(&h.diamond(&x, &y)?, &z)?;
        let r = h.diamond(&x, &h.diamond(&y, &z)?)?;
        Ok((l == r, format!("({a} <> {b}) <> {c}")))
    })?;
    checks.push(Check::from_cases("diamond-associative", true, res));

    let probes = k_probes(cat.num_vertices());
    let mut items = Vec::new();
    for (a, b, c) in triples(&labels, cfg.max_dim) {
        for ka in &probes {
            for kb in &probes {
                for kc in &probes {
                    items.push((sym(&a, ka), sym(&b, kb), sym(&c, kc)));
                }
            }
        }
    }
    let res = collect(items, |(a, b, c)| {
        let (x, y, z) = (HallElement::basis(a.clone()), HallElement::basis(b.clone()), HallElement::basis(c.clone()));
        let l = h.star(&h.star(&x, &y)?, &z)?;
        let r = h.star(&x, &h.star(&y, &z)?)?;
        Ok((l == r, format!("({a} * {b}) * {c}")))
    })?;
    checks.push(Check::from_cases("star-associative", true, res));

    let res = collect(labels.clone(), |a| {
        let x = h.basis(a);
        let ok = h.diamond(&h.unit(), &x)? == x && h.diamond(&x, &h.unit())? == x;
        Ok((ok, format!("unit with {a}")))
    })?;
    checks.push(Check::from_cases("unit", true, res));
    Ok(checks)
}

fn coproduct_symbols(cat: &RepCategory, bound: usize) -> Result<Vec<HallSym>> {
    let probes = k_probes(cat.num_vertices());
    let mut out = Vec::new();
    for a in cat.labels_up_to(bound)? {
        for k in &probes {
            out.push(sym(&a, k));
        }
    }
    Ok(out)
}

fn bialgebra(cat: &RepCategory, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let h = HallAlgebra::new(cat);
    let syms = coproduct_symbols(cat, cfg.max_dim)?;
    let mut checks = Vec::new();
    for variant in CoproductVariant::ALL {
        let counted = variant == CoproductVariant::Green;
        let res = collect(syms.clone(), |s| {
            let x = HallElement::basis(s.clone());
            Ok((h.coproduct_left(&x, variant)? == h.coproduct_right(&x, variant)?, format!("{s}")))
        })?;
        checks.push(Check::from_cases(format!("coassociative[{}]", variant.name()), counted, res));

        let res = collect(syms.clone(), |s| {
            let x = HallElement::basis(s.clone());
            let (l, r) = h.counit_contractions(&x, variant)?;
            Ok((l == x && r == x, format!("{s}")))
        })?;
        checks.push(Check::from_cases(format!("counit[{}]", variant.name()), counted, res));

        let mut items = Vec::new();
        for x in &syms {
            for y in &syms {
                if x.label.total_dim() + y.label.total_dim() <= cfg.max_dim {
                    items.push((x.clone(), y.clone()));
                }
            }
        }
        let res = collect(items, |(a, b)| {
            let (x, y) = (HallElement::basis(a.clone()), HallElement::basis(b.clone()));
            let l = h.coproduct(&h.star(&x, &y)?, variant)?;
            let r = h.tensor_star(&h.coproduct(&x, variant)?, &h.coproduct(&y, variant)?)?;
            Ok((l == r, format!("Delta({a} * {b})")))
        })?;
        checks.push(Check::from_cases(format!("homomorphism[{}]", variant.name()), counted, res));
    }
    Ok(checks)
}

fn pairing(cat: &RepCategory, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let h = HallAlgebra::new(cat);
    let syms = coproduct_symbols(cat, cfg.max_dim)?;
    let mut checks = Vec::new();
    let mut items = Vec::new();
    for x in &syms {
        for y in &syms {
            if x.label.total_dim() + y.label.total_dim() > cfg.max_dim {
                continue;
            }
            for z in &syms {
                if z.label.dimvec.iter().sum::<usize>() == x.label.total_dim() + y.label.total_dim() {
                    items.push((x.clone(), y.clone(), z.clone()));
                }
            }
        }
    }
    let combos = [
        (CoproductVariant::Green, PairingVariant::Aut, true),
        (CoproductVariant::Green, PairingVariant::InverseAut, false),
        (CoproductVariant::PlainAut, PairingVariant::InverseAut, false),
        (CoproductVariant::KTwistedAut, PairingVariant::InverseAut, false),
    ];
    for (cop, pair, counted) in combos {
        let res = collect(items.clone(), |(a, b, c)| {
            let (x, y, z) = (HallElement::basis(a.clone()), HallElement::basis(b.clone()), HallElement::basis(c.clone()));
            let l = h.pairing(&h.star(&x, &y)?, &z, pair)?;
            let r = h.tensor_pairing(&h.tensor(&x, &y), &h.coproduct(&z, cop)?, pair)?;
            Ok((l == r, format!("({a} * {b}, {c})")))
        })?;
        checks.push(Check::from_cases(format!("hopf-pairing[{}/{}]", cop.name(), pair.name()), counted, res));
    }
    let res = collect(syms.clone(), |a| {
        let mut ok = true;
        for b in &syms {
            ok &= h.pairing_basis(a, b, PairingVariant::Aut)? == h.pairing_basis(b, a, PairingVariant::Aut)?;
        }
        Ok((ok, format!("{a}")))
    })?;
    checks.push(Check::from_cases("symmetric", true, res));
    Ok(checks)
}

/// Normal-form complexes `C_A + C_B*` with `dim A + dim B <= bound`.
fn normal_form_classes(cat: &RepCategory, bound: usize) -> Result<Vec<ComplexClass>> {
    let labels = cat.labels_up_to(bound)?;
    let n = cat.num_vertices();
    Ok(pairs(&labels, bound)
        .into_iter()
        .map(|(a, b)| ComplexClass { a, b, p: vec![0; n], q: vec![0; n] })
        .collect())
}

/// Normal forms with at most one indecomposable projective in each `K` part.
fn classes_with_k(cat: &RepCategory, bound: usize) -> Result<Vec<ComplexClass>> {
    let n = cat.num_vertices();
    let mut mults = vec![vec![0; n]];
    for i in 0..n {
        let mut m = vec![0; n];
        m[i] = 1;
        mults.push(m);
    }
    let mut out = Vec::new();
    for c in normal_form_classes(cat, bound)? {
        for p in &mults {
            for q in &mults {
                out.push(ComplexClass { p: p.clone(), q: q.clone(), ..c.clone() });
            }
        }
    }
    Ok(out)
}

fn complex_relations(cat: &RepCategory, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let dh = DHAlgebra::new(cat);
    let cc = dh.complexes();
    let f = cat.field();
    let n = cat.num_vertices();
    let q = cat.q();
    let bound = cfg.max_dim;
    let small = bound.min(1);
    let mut checks = Vec::new();

    let nf = normal_form_classes(cat, bound)?;
    let mut items = Vec::new();
    for u in &nf {
        for v in &nf {
            items.push((u.clone(), v.clone()));
        }
    }
    let res = collect(items, |(u, v)| {
        let x = cc.reassemble(u)?;
        let y = cc.reassemble(v)?;
        let (_, htp) = cc.complex_hom(&x, &cc.shift(&y));
        let ext = cc.ext1_space(&x, &y).dim();
        Ok((ext == htp, format!("Ext1({u}, {v}) = {ext}, homotopy classes = {htp}")))
    })?;
    checks.push(Check::from_cases("ext-equals-homotopy", true, res));

    let labels = cat.labels_up_to(bound)?;
    let mut items = Vec::new();
    for a in &labels {
        for b in &labels {
            items.push((a.clone(), b.clone()));
        }
    }
    let res = collect(items, |(a, b)| {
        let ca = cc.c_of(a)?;
        let cb = cc.shift(&cc.c_of(b)?);
        let (dim, _) = cc.complex_hom(&ca, &cb);
        let pa = to_class(cat.resolution(a)?.p.dimvec());
        let qb = to_class(cat.resolution(b)?.q.dimvec());
        let e = cat.euler_form(&pa, &qb);
        let lhs = num_traits::pow(BigInt::from(q), dim);
        let ok = e >= 0 && lhs == num_traits::pow(BigInt::from(q), e as usize);
        Ok((ok, format!("|Hom(C{a}, C*{b})| = {lhs}, exponent {e}")))
    })?;
    checks.push(Check::from_cases("hom-c-cstar", true, res));

    // every complex met: normal forms with K parts, and all middle terms of
    // extensions between small ones
    let with_k = classes_with_k(cat, bound)?;
    let res = collect(with_k.clone(), |c| {
        let x = cc.reassemble(c)?;
        let d = cc.decompose(&x)?;
        let (r1, r0) = x.rank_vectors(f);
        let pa = cat.resolution(&c.a)?;
        let pb = cat.resolution(&c.b)?;
        let plus = |m: &[usize], p: &[usize]| -> Vec<usize> {
            cat.quiver().projective_sum_dimvec(m).iter().zip(p).map(|(x, y)| x + y).collect()
        };
        let ok = d.class == *c && r1 == plus(&c.p, pa.p.dimvec()) && r0 == plus(&c.q, pb.p.dimvec());
        Ok((ok, format!("{c}")))
    })?;
    checks.push(Check::from_cases("decompose-normal-forms", true, res));

    let smalls = classes_with_k(cat, small)?;
    let mut items = Vec::new();
    for u in &smalls {
        for v in &smalls {
            items.push((u.clone(), v.clone()));
        }
    }
    let round_trips: Vec<(bool, String, bool, bool)> = items
        .par_iter()
        .map(|(u, v)| -> Result<(bool, String, bool, bool)> {
            let x = cc.reassemble(u)?;
            let y = cc.reassemble(v)?;
            let space = cc.ext1_space(&x, &y);
            let mut ok = true;
            let mut acyclic_ok = true;
            let both_acyclic = u.is_acyclic() && v.is_acyclic();
            let mut total = 0u64;
            for mid in cc.ext1_middles(&x, &y, &space)? {
                total += 1;
                let d = cc.decompose(&mid)?;
                let back = cc.reassemble(&d.class)?;
                ok &= cc.is_isomorphic(&mid, &back)?;
                let (h0, h1) = cc.homology_labels(&mid)?;
                acyclic_ok &= (h0.is_zero() && h1.is_zero()) == d.class.is_acyclic();
                if both_acyclic {
                    acyclic_ok &= d.class.is_acyclic();
                }
            }
            let expected = num_traits::pow(BigInt::from(q), space.dim());
            ok &= BigInt::from(total) == expected;
            Ok((ok, format!("middles of ({u}, {v})"), acyclic_ok, both_acyclic))
        })
        .collect::<Result<_>>()?;
    checks.push(Check::from_cases(
        "decompose-reassemble-isomorphic",
        true,
        round_trips.iter().map(|(ok, s, _, _)| (*ok, s.clone())).collect(),
    ));
    checks.push(Check::from_cases(
        "acyclic-split",
        true,
        round_trips.iter().map(|(_, s, ok, _)| (*ok, s.clone())).collect(),
    ));

    let pairs_nf: Vec<(ComplexClass, ComplexClass)> =
        smalls.iter().flat_map(|u| smalls.iter().map(move |v| (u.clone(), v.clone()))).take(64).collect();
    let res = collect(pairs_nf, |(u, v)| {
        let x = cc.reassemble(u)?;
        let y = cc.reassemble(v)?;
        let ok = cc.is_isomorphic(&cc.sum(&x, &y), &cc.sum(&y, &x))?;
        let d1 = cc.decompose(&cc.sum(&x, &y))?;
        let d2 = cc.decompose(&cc.sum(&y, &x))?;
        Ok((ok && d1 == d2, format!("{u} + {v}")))
    })?;
    checks.push(Check::from_cases("decompose-isomorphism-invariant", true, res));

    // [K_P] * [M] = t^<P, M^> [K_P + M], [K_P*] * [M] = t^-<P, M^> [K_P* + M],
    // [M] * [K_P] = t^-<M^, P> [K_P + M]
    let mut items = Vec::new();
    for i in 0..n {
        for m in &nf {
            items.push((i, m.clone()));
        }
    }
    let res = collect(items, |(i, m)| {
        let mut unit = vec![0; n];
        unit[*i] = 1;
        let pc = to_class(&cat.quiver().projective_dimvec(*i));
        let hat = class_sub(&m.a.class(), &m.b.class());
        let kp = ComplexClass { p: unit.clone(), ..ComplexClass::zero(n) };
        let kq = ComplexClass { q: unit.clone(), ..ComplexClass::zero(n) };
        let with_p = ComplexClass { p: class_add_usize(&m.p, &unit), ..m.clone() };
        let with_q = ComplexClass { q: class_add_usize(&m.q, &unit), ..m.clone() };
        let t = |e: i64| Coeff::tpow(q, e);
        let ok = cc.raw_product(&kp, m)? == crate::LinComb::term(with_p.clone(), t(cat.euler_form(&pc, &hat)))
            && cc.raw_product(&kq, m)? == crate::LinComb::term(with_q.clone(), t(-cat.euler_form(&pc, &hat)))
            && cc.raw_product(m, &kp)? == crate::LinComb::term(with_p, t(-cat.euler_form(&hat, &pc)))
            && cc.raw_product(m, &kq)? == crate::LinComb::term(with_q, t(cat.euler_form(&hat, &pc)));
        Ok((ok, format!("P{} with {m}", i + 1)))
    })?;
    checks.push(Check::from_cases("acyclic-products", true, res));

    // K_alpha well defined: [K_P] * [K_Q'] = [K_P'] * [K_Q] when P - Q = P' - Q'
    let mults: Vec<Vec<usize>> = k_grid(n, 1).into_iter().map(|v| v.iter().map(|x| (x + 1) as usize).collect()).collect();
    let mut items = Vec::new();
    for p in &mults {
        for qm in &mults {
            for p2 in &mults {
                let diff: Vec<i64> = (0..n).map(|i| p2[i] as i64 - p[i] as i64 + qm[i] as i64).collect();
                if diff.iter().all(|&d| (0..=2).contains(&d)) {
                    let q2: Vec<usize> = diff.iter().map(|&d| d as usize).collect();
                    items.push((p.clone(), qm.clone(), p2.clone(), q2));
                }
            }
        }
    }
    let res = collect(items, |(p, qm, p2, q2)| {
        let k = |m: &Vec<usize>| ComplexClass { p: m.clone(), ..ComplexClass::zero(n) };
        let ks = |m: &Vec<usize>| ComplexClass { q: m.clone(), ..ComplexClass::zero(n) };
        let ok = cc.raw_product(&k(p), &k(q2))? == cc.raw_product(&k(p2), &k(qm))?
            && cc.raw_product(&ks(p), &ks(q2))? == cc.raw_product(&ks(p2), &ks(qm))?
            && cc.raw_product(&k(p), &ks(qm))? == cc.raw_product(&ks(qm), &k(p))?;
        Ok((ok, format!("P={p:?} Q={qm:?} P'={p2:?} Q'={q2:?}")))
    })?;
    checks.push(Check::from_cases("k-well-defined", true, res));

    let grid = k_grid(n, cfg.kgrid.min(1));
    let mut items = Vec::new();
    for alpha in &grid {
        for m in &nf {
            items.push((alpha.clone(), m.clone()));
        }
    }
    let res = collect(items, |(alpha, m)| {
        let x = dh.complex_term(&m.a, &m.b);
        let hat = class_sub(&m.a.class(), &m.b.class());
        let e = cat.sym_euler_form(alpha, &hat);
        let ok = dh.mul(&dh.k_plus(alpha), &x)? == dh.mul(&x, &dh.k_plus(alpha))?.scaled(&Coeff::tpow(q, e))
            && dh.mul(&dh.k_minus(alpha), &x)? == dh.mul(&x, &dh.k_minus(alpha))?.scaled(&Coeff::tpow(q, -e))
            && dh.mul(&dh.k_plus(alpha), &dh.k_minus(alpha))? == dh.mul(&dh.k_minus(alpha), &dh.k_plus(alpha))?;
        Ok((ok, format!("K{alpha:?} with {m}")))
    })?;
    checks.push(Check::from_cases("k-commutation", true, res));

    let terms = dh_terms(cat, small)?;
    let mut items = Vec::new();
    for x in &terms {
        for y in &terms {
            items.push((x.clone(), y.clone()));
        }
    }
    let res = collect(items.clone(), |(x, y)| {
        let (ex, ey) = (DHElement::basis(x.clone()), DHElement::basis(y.clone()));
        let ok = dh_star(&dh.mul(&ex, &ey)?) == dh.mul(&dh_star(&ex), &dh_star(&ey))?;
        Ok((ok, format!("{x} * {y}")))
    })?;
    checks.push(Check::from_cases("star-automorphism", true, res));

    let mut triples_t = Vec::new();
    for (x, y) in &items {
        for z in &terms {
            if x.homology_dim() + y.homology_dim() + z.homology_dim() <= bound {
                triples_t.push((x.clone(), y.clone(), z.clone()));
            }
        }
    }
    let res = collect(triples_t, |(x, y, z)| Ok((dh.check_associative(x, y, z)?, format!("({x} * {y}) * {z}"))))?;
    checks.push(Check::from_cases("dh-associative", true, res));

    let h = dh.hall();
    let syms = coproduct_symbols(cat, bound)?;
    let mut items = Vec::new();
    for a in &syms {
        for b in &syms {
            if a.label.total_dim() + b.label.total_dim() <= bound {
                items.push((a.clone(), b.clone()));
            }
        }
    }
    let res = collect(items, |(a, b)| {
        let (x, y) = (HallElement::basis(a.clone()), HallElement::basis(b.clone()));
        let prod = h.star(&x, &y)?;
        let plus = dh.embed_plus(&prod)? == dh.mul(&dh.embed_plus(&x)?, &dh.embed_plus(&y)?)?;
        let minus = dh.embed_minus(&prod)? == dh.mul(&dh.embed_minus(&x)?, &dh.embed_minus(&y)?)?;
        Ok((plus && minus, format!("I({a} * {b})")))
    })?;
    checks.push(Check::from_cases("embeddings-multiplicative", true, res));
    Ok(checks)
}

fn class_add_usize(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Normal-form terms with `K`-exponents from the probe set.
fn dh_terms(cat: &RepCategory, bound: usize) -> Result<Vec<DHTerm>> {
    let probes = k_probes(cat.num_vertices());
    let mut out = Vec::new();
    for c in normal_form_classes(cat, bound)? {
        for (alpha, beta) in probes.iter().zip(probes.iter().rev()) {
            out.push(DHTerm { alpha: alpha.clone(), beta: beta.clone(), a: c.a.clone(), b: c.b.clone() });
        }
    }
    Ok(out)
}

fn triangular(cat: &RepCategory, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let dh = DHAlgebra::new(cat);
    let r = dh.check_triangular_basis(cfg.max_dim, cfg.kgrid)?;
    let mut tri = Check::from_cases("triangular", true, vec![]);
    tri.cases = r.products;
    tri.failures = r.failures.len();
    tri.passed = r.triangular;
    tri.counterexamples = r.failures.iter().take(MAX_COUNTEREXAMPLES).cloned().collect();
    let rank = Check {
        name: "independent".into(),
        counted: true,
        cases: r.products,
        failures: r.products - r.rank,
        passed: r.rank == r.products,
        counterexamples: if r.rank == r.products { vec![] } else { vec![format!("rank {} of {}", r.rank, r.products)] },
    };
    Ok(vec![tri, rank])
}

/// Symbols `K_alpha` on the grid and `[A]` within the bound.
pub fn double_symbols(cat: &RepCategory, bound: usize, kgrid: i64) -> Result<Vec<HallSym>> {
    let mut out: Vec<HallSym> = k_grid(cat.num_vertices(), kgrid).into_iter().map(HallSym::k_only).collect();
    for a in cat.labels_up_to(bound)? {
        if !a.is_zero() {
            out.push(HallSym::plain(a));
        }
    }
    Ok(out)
}

pub fn same_side_convention() -> DoubleConvention {
    DoubleConvention { pattern: DoublePattern::SameSide, coproduct: CoproductVariant::PlainAut, pairing: PairingVariant::InverseAut }
}

fn double_check(dh: &DHAlgebra, name: String, counted: bool, items: Vec<(HallSym, HallSym)>, conv: DoubleConvention) -> Result<Check> {
    let res = collect(items, |(a, b)| {
        let r = dh.check_double_relation(a, b, conv)?;
        Ok((r.equal, format!("({a}, {b}) [{}]", r.case)))
    })?;
    Ok(Check::from_cases(name, counted, res))
}

fn double_relation(cat: &RepCategory, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let dh = DHAlgebra::new(cat);
    let syms = double_symbols(cat, cfg.max_dim, cfg.kgrid)?;
    let all: Vec<(HallSym, HallSym)> = syms.iter().flat_map(|a| syms.iter().map(move |b| (a.clone(), b.clone()))).collect();
    let conv = DoubleConvention::default();
    let mut checks = vec![double_check(&dh, format!("double-relation[{conv}]"), true, all, conv)?];

    let mixed: Vec<HallSym> = coproduct_symbols(cat, cfg.max_dim.min(1))?;
    let items: Vec<(HallSym, HallSym)> =
        mixed.iter().flat_map(|a| mixed.iter().map(move |b| (a.clone(), b.clone()))).collect();
    checks.push(double_check(&dh, format!("double-relation-mixed[{conv}]"), true, items.clone(), conv)?);

    let others = [
        same_side_convention(),
        DoubleConvention { pattern: DoublePattern::SameSide, ..conv },
        DoubleConvention { coproduct: CoproductVariant::PlainAut, pairing: PairingVariant::InverseAut, ..conv },
    ];
    for other in others {
        checks.push(double_check(&dh, format!("double-relation[{other}]"), false, items.clone(), other)?);
    }
    Ok(checks)
}

/// Full report for a set of suites; stops at the first budget overrun.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub quiver: String,
    pub q: u32,
    pub config: VerifyConfig,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
    pub budget_exceeded: bool,
}

pub fn run_suites(cat: &RepCategory, suites: &[Suite], cfg: &VerifyConfig) -> VerifyReport {
    let mut out = Vec::new();
    let mut budget_exceeded = false;
    for &s in suites {
        match run_suite(cat, s, cfg) {
            Ok(r) => out.push(r),
            Err(e) => {
                budget_exceeded = e.is_budget();
                out.push(SuiteReport { suite: s, checks: vec![], error: Some(e.to_string()) });
                if budget_exceeded {
                    break;
                }
            }
        }
    }
    let passed = out.iter().all(SuiteReport::passed) && out.len() == suites.len();
    VerifyReport {
        schema_version: SCHEMA_VERSION,
        quiver: cat.quiver().canonical_key(),
        q: cat.q(),
        config: cfg.clone(),
        suites: out,
        passed,
        budget_exceeded,
    }
}
