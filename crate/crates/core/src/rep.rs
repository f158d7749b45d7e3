//! Concrete representations of a quiver over `F_q` and the linear algebra on them:
//! morphism spaces, extension spaces, projectives, kernels and minimal resolutions.

use std::fmt;

use crate::error::{HallError, Result};
use crate::field::{Fq, GaloisField};
use crate::matrix::{complement_coordinates, enumerate_vectors, Budget, EchelonBasis, FieldMatrix};
use crate::quiver::Quiver;

/// A representation: a space per vertex and a matrix (target x source) per arrow.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RepObject {
    dimvec: Vec<usize>,
    maps: Vec<FieldMatrix>,
}

impl fmt::Debug for RepObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep{:?}{:?}", self.dimvec, self.maps)
    }
}

impl RepObject {
    pub fn new(quiver: &Quiver, dimvec: Vec<usize>, maps: Vec<FieldMatrix>) -> Result<Self> {
        if dimvec.len() != quiver.num_vertices() || maps.len() != quiver.num_arrows() {
            return Err(HallError::DimensionMismatch(format!(
                "representation with {} spaces and {} maps on {}",
                dimvec.len(),
                maps.len(),
                quiver
            )));
        }
        for (a, (&(s, t), m)) in quiver.arrows().iter().zip(&maps).enumerate() {
            if m.shape() != (dimvec[t], dimvec[s]) {
                return Err(HallError::DimensionMismatch(format!(
                    "arrow {a} needs a {}x{} matrix, got {}x{}",
                    dimvec[t],
                    dimvec[s],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(RepObject { dimvec, maps })
    }

    pub fn zero(quiver: &Quiver) -> Self {
        let n = quiver.num_vertices();
        RepObject { dimvec: vec![0; n], maps: vec![FieldMatrix::zeros(0, 0); quiver.num_arrows()] }
    }

    /// All arrow maps zero: the semisimple representation with the given dimensions.
    pub fn semisimple(quiver: &Quiver, dimvec: &[usize]) -> Self {
        let maps = quiver.arrows().iter().map(|&(s, t)| FieldMatrix::zeros(dimvec[t], dimvec[s])).collect();
        RepObject { dimvec: dimvec.to_vec(), maps }
    }

    pub fn dimvec(&self) -> &[usize] {
        &self.dimvec
    }

    pub fn total_dim(&self) -> usize {
        self.dimvec.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn maps(&self) -> &[FieldMatrix] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &FieldMatrix {
        &self.maps[arrow]
    }

    /// Number of matrix entries, i.e. the exponent of the representation space size.
    pub fn entry_count(quiver: &Quiver, dimvec: &[usize]) -> usize {
        quiver.arrows().iter().map(|&(s, t)| dimvec[s] * dimvec[t]).sum()
    }

    /// Concatenated row-major entries of all arrow maps.
    pub fn entries(&self) -> Vec<Fq> {
        self.maps.iter().flat_map(|m| m.entries().iter().copied()).collect()
    }

    pub fn from_entries(quiver: &Quiver, dimvec: &[usize], entries: &[Fq]) -> Self {
        let mut pos = 0;
        let maps = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| {
                let len = dimvec[t] * dimvec[s];
                let m = FieldMatrix::new(dimvec[t], dimvec[s], entries[pos..pos + len].to_vec()).unwrap();
                pos += len;
                m
            })
            .collect();
        RepObject { dimvec: dimvec.to_vec(), maps }
    }

    /// Matrix of the path (a sequence of arrows) acting from its start to its end.
    pub fn path_map(&self, f: &GaloisField, start: usize, path: &[usize]) -> FieldMatrix {
        let mut m = FieldMatrix::identity(self.dimvec[start]);
        for &a in path {
            m = self.maps[a].mul(f, &m);
        }
        m
    }
}

/// Family of linear maps `source_i -> target_i`, one per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    parts: Vec<FieldMatrix>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mor{:?}", self.parts)
    }
}

impl Morphism {
    pub fn new(parts: Vec<FieldMatrix>) -> Self {
        Morphism { parts }
    }

    pub fn zero(source: &[usize], target: &[usize]) -> Self {
        Morphism { parts: source.iter().zip(target).map(|(&s, &t)| FieldMatrix::zeros(t, s)).collect() }
    }

    pub fn identity(dimvec: &[usize]) -> Self {
        Morphism { parts: dimvec.iter().map(|&d| FieldMatrix::identity(d)).collect() }
    }

    pub fn parts(&self) -> &[FieldMatrix] {
        &self.parts
    }

    pub fn part(&self, vertex: usize) -> &FieldMatrix {
        &self.parts[vertex]
    }

    pub fn source_dimvec(&self) -> Vec<usize> {
        self.parts.iter().map(|m| m.cols()).collect()
    }

    pub fn target_dimvec(&self) -> Vec<usize> {
        self.parts.iter().map(|m| m.rows()).collect()
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, f: &GaloisField, other: &Morphism) -> Morphism {
        Morphism { parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.mul(f, b)).collect() }
    }

    pub fn add(&self, f: &GaloisField, other: &Morphism) -> Morphism {
        Morphism { parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.add(f, b)).collect() }
    }

    pub fn sub(&self, f: &GaloisField, other: &Morphism) -> Morphism {
        Morphism { parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.sub(f, b)).collect() }
    }

    pub fn neg(&self, f: &GaloisField) -> Morphism {
        Morphism { parts: self.parts.iter().map(|a| a.neg(f)).collect() }
    }

    pub fn scale(&self, f: &GaloisField, s: Fq) -> Morphism {
        Morphism { parts: self.parts.iter().map(|a| a.scale(f, s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(FieldMatrix::is_zero)
    }

    pub fn is_invertible(&self, f: &GaloisField) -> bool {
        self.parts.iter().all(|m| m.is_invertible(f))
    }

    pub fn rank_vector(&self, f: &GaloisField) -> Vec<usize> {
        self.parts.iter().map(|m| m.rank(f)).collect()
    }

    pub fn block_diag(&self, other: &Morphism) -> Morphism {
        Morphism { parts: self.parts.iter().zip(&other.parts).map(|(a, b)| FieldMatrix::block_diag(a, b)).collect() }
    }

    pub fn flatten(&self) -> Vec<Fq> {
        self.parts.iter().flat_map(|m| m.entries().iter().copied()).collect()
    }

    pub fn from_flat(source: &[usize], target: &[usize], data: &[Fq]) -> Morphism {
        let mut pos = 0;
        let parts = source
            .iter()
            .zip(target)
            .map(|(&s, &t)| {
                let m = FieldMatrix::new(t, s, data[pos..pos + s * t].to_vec()).unwrap();
                pos += s * t;
                m
            })
            .collect();
        Morphism { parts }
    }

    /// Linear combination `sum c_k basis_k`.
    pub fn combination(f: &GaloisField, source: &[usize], target: &[usize], coeffs: &[Fq], basis: &[Morphism]) -> Morphism {
        let mut out = Morphism::zero(source, target);
        for (c, b) in coeffs.iter().zip(basis) {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.parts.iter_mut().zip(&b.parts) {
                o.axpy(f, *c, p);
            }
        }
        out
    }

    /// Does this family intertwine the arrow maps of `a` and `b`?
    pub fn is_morphism(&self, f: &GaloisField, quiver: &Quiver, a: &RepObject, b: &RepObject) -> bool {
        self.source_dimvec() == a.dimvec
            && self.target_dimvec() == b.dimvec
            && quiver.arrows().iter().enumerate().all(|(k, &(s, t))| {
                self.parts[t].mul(f, a.map(k)) == b.map(k).mul(f, &self.parts[s])
            })
    }
}

/// Matrix whose k-th column is `map(e_k)` for the standard basis of an `n`-dimensional domain.
pub(crate) fn matrix_of_linear(n: usize, out_len: usize, mut map: impl FnMut(&[Fq]) -> Vec<Fq>) -> FieldMatrix {
    let mut cols = Vec::with_capacity(n);
    let mut e = vec![Fq::ZERO; n];
    for k in 0..n {
        e[k] = Fq::ONE;
        let col = map(&e);
        debug_assert_eq!(col.len(), out_len);
        cols.push(col);
        e[k] = Fq::ZERO;
    }
    FieldMatrix::from_columns(out_len, &cols)
}

fn vertex_product_len(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Basis of `Hom(a, b)` from the intertwining equations `f_t A_x = B_x f_s`.
pub fn hom_space(f: &GaloisField, quiver: &Quiver, a: &RepObject, b: &RepObject) -> Vec<Morphism> {
    let unknowns = vertex_product_len(&a.dimvec, &b.dimvec);
    let eq_len: usize = quiver.arrows().iter().map(|&(s, t)| b.dimvec[t] * a.dimvec[s]).sum();
    let eqs = matrix_of_linear(unknowns, eq_len, |x| {
        let m = Morphism::from_flat(&a.dimvec, &b.dimvec, x);
        let mut out = Vec::with_capacity(eq_len);
        for (k, &(s, t)) in quiver.arrows().iter().enumerate() {
            out.extend_from_slice(m.parts[t].mul(f, a.map(k)).sub(f, &b.map(k).mul(f, &m.parts[s])).entries());
        }
        out
    });
    eqs.kernel(f).iter().map(|v| Morphism::from_flat(&a.dimvec, &b.dimvec, v)).collect()
}

/// Cocycle representing an extension class: one matrix `A_s -> B_t` per arrow.
pub type Cocycle = Vec<FieldMatrix>;

/// A fixed transversal of `Ext^1(a, b) = coker(phi)` with
/// `phi(f)_x = B_x f_s - f_t A_x`.
#[derive(Clone, Debug)]
pub struct ExtSpace {
    pub basis: Vec<Cocycle>,
    shapes: Vec<(usize, usize)>,
}

impl ExtSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cocycle(&self, f: &GaloisField, coeffs: &[Fq]) -> Cocycle {
        let mut out: Cocycle = self.shapes.iter().map(|&(r, c)| FieldMatrix::zeros(r, c)).collect();
        for (c, e) in coeffs.iter().zip(&self.basis) {
            for (o, m) in out.iter_mut().zip(e) {
                o.axpy(f, *c, m);
            }
        }
        out
    }

    /// Every class once, in lexicographic order of the transversal coordinates.
    pub fn classes<'a>(&'a self, f: &'a GaloisField, budget: Budget) -> Result<impl Iterator<Item = Cocycle> + 'a> {
        Ok(enumerate_vectors(f, self.dim(), budget)?.map(move |c| self.cocycle(f, &c)))
    }
}

pub fn ext_space(f: &GaloisField, quiver: &Quiver, a: &RepObject, b: &RepObject) -> ExtSpace {
    let shapes: Vec<(usize, usize)> = quiver.arrows().iter().map(|&(s, t)| (b.dimvec[t], a.dimvec[s])).collect();
    let target_len: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let unknowns = vertex_product_len(&a.dimvec, &b.dimvec);
    let phi = matrix_of_linear(unknowns, target_len, |x| {
        let m = Morphism::from_flat(&a.dimvec, &b.dimvec, x);
        let mut out = Vec::with_capacity(target_len);
        for (k, &(s, t)) in quiver.arrows().iter().enumerate() {
            out.extend_from_slice(b.map(k).mul(f, &m.parts[s]).sub(f, &m.parts[t].mul(f, a.map(k))).entries());
        }
        out
    });
    let image: Vec<Vec<Fq>> = (0..phi.cols()).map(|c| phi.column(c)).collect();
    let basis = complement_coordinates(f, target_len, &image)
        .into_iter()
        .map(|coord| {
            let mut v = vec![Fq::ZERO; target_len];
            v[coord] = Fq::ONE;
            split_cocycle(&shapes, &v)
        })
        .collect();
    ExtSpace { basis, shapes }
}

fn split_cocycle(shapes: &[(usize, usize)], v: &[Fq]) -> Cocycle {
    let mut pos = 0;
    shapes
        .iter()
        .map(|&(r, c)| {
            let m = FieldMatrix::new(r, c, v[pos..pos + r * c].to_vec()).unwrap();
            pos += r * c;
            m
        })
        .collect()
}

/// Middle term of the extension `0 -> b -> c -> a -> 0` given by `e`:
/// `c_i = b_i + a_i` with arrow maps `[[B_x, e_x], [0, A_x]]`.
pub fn middle_term(quiver: &Quiver, a: &RepObject, b: &RepObject, e: &Cocycle) -> RepObject {
    let dimvec: Vec<usize> = b.dimvec.iter().zip(&a.dimvec).map(|(x, y)| x + y).collect();
    let maps = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, &(s, t))| {
            FieldMatrix::block(b.map(k), &e[k], &FieldMatrix::zeros(a.dimvec[t], b.dimvec[s]), a.map(k))
        })
        .collect();
    RepObject { dimvec, maps }
}

pub fn direct_sum(a: &RepObject, b: &RepObject) -> RepObject {
    let dimvec = a.dimvec.iter().zip(&b.dimvec).map(|(x, y)| x + y).collect();
    let maps = a.maps.iter().zip(&b.maps).map(|(x, y)| FieldMatrix::block_diag(x, y)).collect();
    RepObject { dimvec, maps }
}

/// Position of a basis path `(type, copy, path)` inside `P(m)` at vertex `j`:
/// types in vertex order, then copies, then paths in quiver order.
pub fn projective_basis_index(quiver: &Quiver, m: &[usize], ty: usize, copy: usize, j: usize, path_pos: usize) -> usize {
    let before: usize = (0..ty).map(|i| m[i] * quiver.paths(i, j).len()).sum();
    before + copy * quiver.paths(ty, j).len() + path_pos
}

/// The projective `P(m) = sum_i P_i^{m_i}` in canonical basis order.
pub fn projective_sum(quiver: &Quiver, m: &[usize]) -> RepObject {
    let dimvec = quiver.projective_sum_dimvec(m);
    let maps = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| {
            let mut mat = FieldMatrix::zeros(dimvec[t], dimvec[s]);
            for ty in 0..m.len() {
                for copy in 0..m[ty] {
                    for (pi, p) in quiver.paths(ty, s).iter().enumerate() {
                        let mut ext = p.clone();
                        ext.push(a);
                        let qi = quiver.paths(ty, t).iter().position(|x| *x == ext).expect("extended path exists");
                        mat.set(
                            projective_basis_index(quiver, m, ty, copy, t, qi),
                            projective_basis_index(quiver, m, ty, copy, s, pi),
                            Fq::ONE,
                        );
                    }
                }
            }
            mat
        })
        .collect();
    RepObject { dimvec, maps }
}

pub fn indecomposable_projectives(quiver: &Quiver) -> Vec<RepObject> {
    (0..quiver.num_vertices())
        .map(|i| {
            let mut m = vec![0; quiver.num_vertices()];
            m[i] = 1;
            projective_sum(quiver, &m)
        })
        .collect()
}

/// For each vertex, standard vectors spanning a complement of the radical
/// (the sum of images of incoming arrows).
pub fn top_complement(f: &GaloisField, quiver: &Quiver, a: &RepObject) -> Vec<Vec<Vec<Fq>>> {
    (0..quiver.num_vertices())
        .map(|v| {
            let mut image = Vec::new();
            for (k, &(_, t)) in quiver.arrows().iter().enumerate() {
                if t == v {
                    let m = a.map(k);
                    image.extend((0..m.cols()).map(|c| m.column(c)));
                }
            }
            complement_coordinates(f, a.dimvec[v], &image)
                .into_iter()
                .map(|c| {
                    let mut e = vec![Fq::ZERO; a.dimvec[v]];
                    e[c] = Fq::ONE;
                    e
                })
                .collect()
        })
        .collect()
}

/// Projective cover `P(m) -> a` sending each top generator to a chosen top vector.
pub fn projective_cover(f: &GaloisField, quiver: &Quiver, a: &RepObject) -> (Vec<usize>, Morphism) {
    let tops = top_complement(f, quiver, a);
    let m: Vec<usize> = tops.iter().map(Vec::len).collect();
    let pdim = quiver.projective_sum_dimvec(&m);
    let n = quiver.num_vertices();
    let parts = (0..n)
        .map(|j| {
            let mut mat = FieldMatrix::zeros(a.dimvec[j], pdim[j]);
            for ty in 0..n {
                for (copy, v) in tops[ty].iter().enumerate() {
                    for (pi, p) in quiver.paths(ty, j).iter().enumerate() {
                        let img = a.path_map(f, ty, p).mul_vec(f, v);
                        let col = projective_basis_index(quiver, &m, ty, copy, j, pi);
                        for (r, x) in img.into_iter().enumerate() {
                            mat.set(r, col, x);
                        }
                    }
                }
            }
            mat
        })
        .collect();
    (m, Morphism::new(parts))
}

/// Subrepresentation spanned (vertexwise) by the given vectors, which must be
/// closed under the arrow maps, together with its inclusion.
pub fn subrepresentation(
    f: &GaloisField,
    quiver: &Quiver,
    a: &RepObject,
    basis: &[Vec<Vec<Fq>>],
) -> Result<(RepObject, Morphism)> {
    let incl: Vec<FieldMatrix> =
        basis.iter().enumerate().map(|(v, vecs)| FieldMatrix::from_columns(a.dimvec[v], vecs)).collect();
    let dimvec: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut maps = Vec::with_capacity(quiver.num_arrows());
    for (k, &(s, t)) in quiver.arrows().iter().enumerate() {
        let pushed = a.map(k).mul(f, &incl[s]);
        let m = incl[t]
            .solve_matrix(f, &pushed)
            .ok_or_else(|| HallError::Internal("subspace is not closed under an arrow map".into()))?;
        maps.push(m);
    }
    Ok((RepObject { dimvec, maps }, Morphism::new(incl)))
}

/// Kernel of a morphism as a subrepresentation of its source.
pub fn kernel(f: &GaloisField, quiver: &Quiver, source: &RepObject, mor: &Morphism) -> Result<(RepObject, Morphism)> {
    let basis: Vec<Vec<Vec<Fq>>> = mor.parts.iter().map(|m| m.kernel(f)).collect();
    subrepresentation(f, quiver, source, &basis)
}

/// `sub / subsub` where both are vertexwise spans inside `m`, `subsub` contained in `sub`,
/// both closed under the arrow maps. The quotient basis extends an echelon basis of
/// `subsub` by vectors of `sub` taken in order.
pub fn subquotient(
    f: &GaloisField,
    quiver: &Quiver,
    m: &RepObject,
    sub: &[Vec<Vec<Fq>>],
    subsub: &[Vec<Vec<Fq>>],
) -> Result<RepObject> {
    let n = quiver.num_vertices();
    let mut reps: Vec<Vec<Vec<Fq>>> = Vec::with_capacity(n);
    let mut denominators: Vec<Vec<Vec<Fq>>> = Vec::with_capacity(n);
    for v in 0..n {
        let mut ech = EchelonBasis::new();
        let mut den = Vec::new();
        for x in &subsub[v] {
            if ech.insert(f, x) {
                den.push(x.clone());
            }
        }
        let mut chosen = Vec::new();
        for x in &sub[v] {
            if ech.insert(f, x) {
                chosen.push(x.clone());
            }
        }
        reps.push(chosen);
        denominators.push(den);
    }
    let dimvec: Vec<usize> = reps.iter().map(Vec::len).collect();
    let mut maps = Vec::with_capacity(quiver.num_arrows());
    for (k, &(s, t)) in quiver.arrows().iter().enumerate() {
        let mut cols = denominators[t].clone();
        cols.extend(reps[t].iter().cloned());
        let frame = FieldMatrix::from_columns(m.dimvec[t], &cols);
        let pushed = m.map(k).mul(f, &FieldMatrix::from_columns(m.dimvec[s], &reps[s]));
        let coords = frame
            .solve_matrix(f, &pushed)
            .ok_or_else(|| HallError::Internal("subquotient is not closed under an arrow map".into()))?;
        let skip = denominators[t].len();
        let rows: Vec<usize> = (skip..skip + reps[t].len()).collect();
        let cols_idx: Vec<usize> = (0..reps[s].len()).collect();
        maps.push(coords.permuted(&rows, &cols_idx));
    }
    Ok(RepObject { dimvec, maps })
}

/// `0 -> P(p) --f--> P(q) --cover--> a -> 0` with `f` in the radical.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub p_mult: Vec<usize>,
    pub q_mult: Vec<usize>,
    pub p: RepObject,
    pub q: RepObject,
    pub f: Morphism,
    pub cover: Morphism,
}

pub fn minimal_resolution(f: &GaloisField, quiver: &Quiver, a: &RepObject) -> Result<Resolution> {
    let (q_mult, cover) = projective_cover(f, quiver, a);
    let q = projective_sum(quiver, &q_mult);
    let (k, incl) = kernel(f, quiver, &q, &cover)?;
    let (p_mult, kcover) = projective_cover(f, quiver, &k);
    if !kcover.is_invertible(f) {
        return Err(HallError::Internal("kernel of a projective cover is not projective".into()));
    }
    let p = projective_sum(quiver, &p_mult);
    let map = incl.compose(f, &kcover);
    Ok(Resolution { p_mult, q_mult, p, q, f: map, cover })
}

/// Scalar component between the `(ty, c1)` summand of `P(m_src)` and the `(ty, c2)`
/// summand of `P(m_tgt)`: the coefficient on the trivial path.
pub fn same_type_scalar(quiver: &Quiver, m_src: &[usize], m_tgt: &[usize], mor: &Morphism, ty: usize, c1: usize, c2: usize) -> Fq {
    let row = projective_basis_index(quiver, m_tgt, ty, c2, ty, 0);
    let col = projective_basis_index(quiver, m_src, ty, c1, ty, 0);
    mor.part(ty).get(row, col)
}

/// Minimality: no same-type component of `P(m_src) -> P(m_tgt)` is a nonzero scalar.
pub fn is_radical_map(quiver: &Quiver, m_src: &[usize], m_tgt: &[usize], mor: &Morphism) -> bool {
    (0..quiver.num_vertices()).all(|ty| {
        (0..m_src[ty]).all(|c1| (0..m_tgt[ty]).all(|c2| same_type_scalar(quiver, m_src, m_tgt, mor, ty, c1, c2).is_zero()))
    })
}

/// Exhaustive search of `Hom(m, n)` for a vertexwise invertible element.
pub fn is_isomorphic(f: &GaloisField, quiver: &Quiver, m: &RepObject, n: &RepObject, budget: Budget) -> Result<bool> {
    if m.dimvec != n.dimvec {
        return Ok(false);
    }
    if m == n {
        return Ok(true);
    }
    let basis = hom_space(f, quiver, m, n);
    for c in enumerate_vectors(f, basis.len(), budget)? {
        if Morphism::combination(f, &m.dimvec, &n.dimvec, &c, &basis).is_invertible(f) {
            return Ok(true);
        }
    }
    Ok(false)
}
