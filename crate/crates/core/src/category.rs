//! The category `rep(Q, F_q)` with a lazily built isomorphism-class registry and
//! memoized counting queries.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{HallError, Result};
use crate::field::{Fq, GaloisField};
use crate::matrix::{enumerate_vectors, Budget};
use crate::quiver::{to_class, KClass, Quiver};
use crate::rep::{self, ExtSpace, Morphism, RepObject, Resolution};

/// Isomorphism class: the dimension vector and the position of the class among
/// the classes of that dimension vector, ordered by lex-least representative.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct IsoLabel {
    pub dimvec: Vec<usize>,
    pub index: usize,
}

impl IsoLabel {
    pub fn zero(n: usize) -> Self {
        IsoLabel { dimvec: vec![0; n], index: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.dimvec.iter().all(|&d| d == 0)
    }

    pub fn total_dim(&self) -> usize {
        self.dimvec.iter().sum()
    }

    pub fn class(&self) -> KClass {
        to_class(&self.dimvec)
    }
}

impl Ord for IsoLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total_dim(), &self.dimvec, self.index).cmp(&(other.total_dim(), &other.dimvec, other.index))
    }
}

impl PartialOrd for IsoLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IsoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.dimvec.iter().map(usize::to_string).collect();
        write!(f, "({})#{}", d.join(","), self.index)
    }
}

impl FromStr for IsoLabel {
    type Err = HallError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HallError::Parse(format!("iso label '{s}'"));
        let (d, i) = s.split_once('#').ok_or_else(bad)?;
        let d = d.strip_prefix('(').and_then(|d| d.strip_suffix(')')).ok_or_else(bad)?;
        let dimvec = if d.is_empty() {
            Vec::new()
        } else {
            d.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<Vec<usize>>>()?
        };
        Ok(IsoLabel { dimvec, index: i.parse().map_err(|_| bad())? })
    }
}

/// All isomorphism classes with one dimension vector.
#[derive(Debug)]
pub struct DimClasses {
    pub dimvec: Vec<usize>,
    /// class of each arrow-matrix tuple, indexed base `q`, first entry most significant
    table: Vec<u32>,
    pub representatives: Vec<RepObject>,
    pub orbit_sizes: Vec<u64>,
}

impl DimClasses {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn tuple_count(&self) -> usize {
        self.table.len()
    }

    pub fn class_of_index(&self, idx: usize) -> usize {
        self.table[idx] as usize
    }
}

fn encode(q: u64, entries: &[u8]) -> usize {
    entries.iter().fold(0u64, |acc, &x| acc * q + x as u64) as usize
}

fn decode(q: u64, mut idx: u64, out: &mut [u8]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % q) as u8;
        idx /= q;
    }
}

/// Orbit classification of all tuples of one dimension vector under `prod_v GL(d_v)`.
fn classify(f: &GaloisField, quiver: &Quiver, dimvec: &[usize], budget: Budget) -> Result<DimClasses> {
    let n_entries = RepObject::entry_count(quiver, dimvec);
    let size = budget.check_power(|| format!("representations of dimension vector {dimvec:?}"), f.order(), n_entries)?;
    let q = f.order() as u64;
    // entry offsets of each arrow block
    let mut offsets = Vec::new();
    let mut pos = 0;
    for &(s, t) in quiver.arrows() {
        offsets.push(pos);
        pos += dimvec[s] * dimvec[t];
    }
    let g = f.generator();
    let g_inv = f.inv(g).unwrap();

    enum Gen {
        Scale(usize, Fq, Fq),
        Transvection(usize, usize, usize),
    }
    let mut gens = Vec::new();
    for (v, &d) in dimvec.iter().enumerate() {
        if d == 0 {
            continue;
        }
        if f.order() > 2 {
            gens.push(Gen::Scale(v, g, g_inv));
        }
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    gens.push(Gen::Transvection(v, i, j));
                }
            }
        }
    }
    let apply = |gen: &Gen, e: &mut [u8]| {
        for (k, &(s, t)) in quiver.arrows().iter().enumerate() {
            let (rows, cols) = (dimvec[t], dimvec[s]);
            let base = offsets[k];
            let at = |r: usize, c: usize| base + r * cols + c;
            match *gen {
                Gen::Scale(v, g, g_inv) => {
                    if t == v {
                        for c in 0..cols {
                            e[at(0, c)] = f.mul(Fq(e[at(0, c)]), g).0;
                        }
                    }
                    if s == v {
                        for r in 0..rows {
                            e[at(r, 0)] = f.mul(Fq(e[at(r, 0)]), g_inv).0;
                        }
                    }
                }
                Gen::Transvection(v, i, j) => {
                    // g = I + E_ij acts as row_i += row_j on the left,
                    // g^-1 = I - E_ij as col_j -= col_i on the right
                    if t == v {
                        for c in 0..cols {
                            e[at(i, c)] = f.add(Fq(e[at(i, c)]), Fq(e[at(j, c)])).0;
                        }
                    }
                    if s == v {
                        for r in 0..rows {
                            e[at(r, j)] = f.sub(Fq(e[at(r, j)]), Fq(e[at(r, i)])).0;
                        }
                    }
                }
            }
        }
    };

    let size = size as usize;
    let mut table = vec![u32::MAX; size];
    let mut representatives = Vec::new();
    let mut orbit_sizes = Vec::new();
    let mut cur = vec![0u8; n_entries];
    let mut queue = VecDeque::new();
    for start in 0..size {
        if table[start] != u32::MAX {
            continue;
        }
        let class = representatives.len() as u32;
        decode(q, start as u64, &mut cur);
        let entries: Vec<Fq> = cur.iter().map(|&x| Fq(x)).collect();
        representatives.push(RepObject::from_entries(quiver, dimvec, &entries));
        table[start] = class;
        queue.push_back(start);
        let mut count = 0u64;
        while let Some(idx) = queue.pop_front() {
            count += 1;
            for gen in &gens {
                decode(q, idx as u64, &mut cur);
                apply(gen, &mut cur);
                let next = encode(q, &cur);
                if table[next] == u32::MAX {
                    table[next] = class;
                    queue.push_back(next);
                }
            }
        }
        orbit_sizes.push(count);
    }
    Ok(DimClasses { dimvec: dimvec.to_vec(), table, representatives, orbit_sizes })
}

/// `|GL_d(F_q)|`.
pub fn gl_order(q: u64, d: usize) -> u128 {
    let qd = (q as u128).pow(d as u32);
    (0..d).map(|i| qd - (q as u128).pow(i as u32)).product()
}

/// External persistence for expensive counts, keyed by strings that already
/// include the quiver and the field.
pub trait CountStore: Send + Sync {
    fn load(&self, key: &str) -> Option<String>;
    fn store(&self, key: &str, value: &str);
}

#[derive(Default, Debug)]
pub struct CacheStats {
    pub hits: AtomicU64,
    pub misses: AtomicU64,
    pub store_hits: AtomicU64,
}

impl CacheStats {
    pub fn snapshot(&self) -> (u64, u64, u64) {
        (
            self.hits.load(Ordering::Relaxed),
            self.misses.load(Ordering::Relaxed),
            self.store_hits.load(Ordering::Relaxed),
        )
    }
}

type Memo<K, V> = Mutex<HashMap<K, V>>;

/// Distribution of middle terms over the classes of `Ext^1(a, b)`.
pub type ExtDistribution = BTreeMap<IsoLabel, u64>;

pub struct RepCategory {
    quiver: Quiver,
    field: GaloisField,
    budget: Budget,
    registry: Memo<Vec<usize>, Arc<DimClasses>>,
    aut: Memo<IsoLabel, u64>,
    hom_dims: Memo<(IsoLabel, IsoLabel), usize>,
    ext_dist: Memo<(IsoLabel, IsoLabel), Arc<ExtDistribution>>,
    resolutions: Memo<IsoLabel, Arc<Resolution>>,
    store: Option<Arc<dyn CountStore>>,
    pub stats: CacheStats,
}

impl fmt::Debug for RepCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rep({}, F_{})", self.quiver, self.field.order())
    }
}

fn memo_get<K: std::hash::Hash + Eq, V: Clone>(m: &Memo<K, V>, k: &K) -> Option<V> {
    m.lock().unwrap().get(k).cloned()
}

fn memo_put<K: std::hash::Hash + Eq, V: Clone>(m: &Memo<K, V>, k: K, v: V) -> V {
    m.lock().unwrap().entry(k).or_insert(v).clone()
}

impl RepCategory {
    pub fn new(quiver: Quiver, q: u32) -> Result<Self> {
        Ok(RepCategory {
            quiver,
            field: GaloisField::new(q)?,
            budget: Budget::default(),
            registry: Mutex::default(),
            aut: Mutex::default(),
            hom_dims: Mutex::default(),
            ext_dist: Mutex::default(),
            resolutions: Mutex::default(),
            store: None,
            stats: CacheStats::default(),
        })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_store(mut self, store: Arc<dyn CountStore>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver.num_vertices()
    }

    /// Prefix for persistent cache keys.
    pub fn store_key(&self, op: &str, args: &str) -> String {
        format!("{}|q={}|{}|{}", self.quiver.canonical_key(), self.q(), op, args)
    }

    pub(crate) fn store_load(&self, op: &str, args: &str) -> Option<String> {
        let v = self.store.as_ref()?.load(&self.store_key(op, args));
        if v.is_some() {
            self.stats.store_hits.fetch_add(1, Ordering::Relaxed);
        }
        v
    }

    pub(crate) fn store_save(&self, op: &str, args: &str, value: &str) {
        if let Some(s) = &self.store {
            s.store(&self.store_key(op, args), value);
        }
    }

    pub fn euler_form(&self, a: &[i64], b: &[i64]) -> i64 {
        self.quiver.euler_form(a, b)
    }

    pub fn sym_euler_form(&self, a: &[i64], b: &[i64]) -> i64 {
        self.quiver.sym_euler_form(a, b)
    }

    pub fn zero_label(&self) -> IsoLabel {
        IsoLabel::zero(self.num_vertices())
    }

    pub fn classes(&self, dimvec: &[usize]) -> Result<Arc<DimClasses>> {
        if dimvec.len() != self.num_vertices() {
            return Err(HallError::DimensionMismatch(format!("dimension vector {dimvec:?}")));
        }
        if let Some(c) = memo_get(&self.registry, &dimvec.to_vec()) {
            return Ok(c);
        }
        let c = Arc::new(classify(&self.field, &self.quiver, dimvec, self.budget)?);
        Ok(memo_put(&self.registry, dimvec.to_vec(), c))
    }

    pub fn labels_with_dimvec(&self, dimvec: &[usize]) -> Result<Vec<IsoLabel>> {
        let c = self.classes(dimvec)?;
        Ok((0..c.len()).map(|index| IsoLabel { dimvec: dimvec.to_vec(), index }).collect())
    }

    /// Every dimension vector with total dimension at most `bound`, in label order.
    pub fn dimvecs_up_to(&self, bound: usize) -> Vec<Vec<usize>> {
        fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for d in 0..=left {
                cur.push(d);
                rec(n, left - d, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self.num_vertices(), bound, &mut Vec::new(), &mut out);
        out.sort_by_key(|d| (d.iter().sum::<usize>(), d.clone()));
        out
    }

    /// The registry up to a total-dimension bound.
    pub fn labels_up_to(&self, bound: usize) -> Result<Vec<IsoLabel>> {
        let mut out = Vec::new();
        for d in self.dimvecs_up_to(bound) {
            out.extend(self.labels_with_dimvec(&d)?);
        }
        Ok(out)
    }

    pub fn representative(&self, label: &IsoLabel) -> Result<RepObject> {
        let c = self.classes(&label.dimvec)?;
        c.representatives
            .get(label.index)
            .cloned()
            .ok_or_else(|| HallError::Internal(format!("no class {label}")))
    }

    pub fn identify(&self, m: &RepObject) -> Result<IsoLabel> {
        let c = self.classes(m.dimvec())?;
        let q = self.q() as u64;
        let entries: Vec<u8> = m.entries().iter().map(|x| x.0).collect();
        Ok(IsoLabel { dimvec: m.dimvec().to_vec(), index: c.class_of_index(encode(q, &entries)) })
    }

    pub fn orbit_size(&self, label: &IsoLabel) -> Result<u64> {
        Ok(self.classes(&label.dimvec)?.orbit_sizes[label.index])
    }

    /// `|prod_v GL(d_v)|` for the label's dimension vector.
    pub fn group_order(&self, dimvec: &[usize]) -> u128 {
        dimvec.iter().map(|&d| gl_order(self.q() as u64, d)).product()
    }

    pub fn hom_basis(&self, a: &RepObject, b: &RepObject) -> Vec<Morphism> {
        rep::hom_space(&self.field, &self.quiver, a, b)
    }

    pub fn ext_space(&self, a: &RepObject, b: &RepObject) -> ExtSpace {
        rep::ext_space(&self.field, &self.quiver, a, b)
    }

    pub fn hom_dim(&self, a: &IsoLabel, b: &IsoLabel) -> Result<usize> {
        let key = (a.clone(), b.clone());
        if let Some(d) = memo_get(&self.hom_dims, &key) {
            return Ok(d);
        }
        let d = self.hom_basis(&self.representative(a)?, &self.representative(b)?).len();
        Ok(memo_put(&self.hom_dims, key, d))
    }

    pub fn ext_dim(&self, a: &IsoLabel, b: &IsoLabel) -> Result<usize> {
        Ok(self.ext_space(&self.representative(a)?, &self.representative(b)?).dim())
    }

    /// `|Aut(a)|`, counted by enumerating `End(a)` and testing invertibility.
    pub fn aut_order(&self, label: &IsoLabel) -> Result<u64> {
        if let Some(n) = memo_get(&self.aut, label) {
            return Ok(n);
        }
        let m = self.representative(label)?;
        let basis = self.hom_basis(&m, &m);
        let mut count = 0u64;
        for c in enumerate_vectors(&self.field, basis.len(), self.budget)? {
            if Morphism::combination(&self.field, m.dimvec(), m.dimvec(), &c, &basis).is_invertible(&self.field) {
                count += 1;
            }
        }
        Ok(memo_put(&self.aut, label.clone(), count))
    }

    /// Middle-term classes of all extensions `0 -> b -> c -> a -> 0`.
    pub fn ext_distribution(&self, a: &IsoLabel, b: &IsoLabel) -> Result<Arc<ExtDistribution>> {
        let key = (a.clone(), b.clone());
        if let Some(d) = memo_get(&self.ext_dist, &key) {
            self.stats.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(d);
        }
        self.stats.misses.fetch_add(1, Ordering::Relaxed);
        let args = format!("{a}|{b}");
        if let Some(text) = self.store_load("ext", &args) {
            if let Some(dist) = parse_distribution(&text) {
                return Ok(memo_put(&self.ext_dist, key, Arc::new(dist)));
            }
        }
        let ra = self.representative(a)?;
        let rb = self.representative(b)?;
        let space = self.ext_space(&ra, &rb);
        let mut dist = ExtDistribution::new();
        for e in space.classes(&self.field, self.budget)? {
            let c = rep::middle_term(&self.quiver, &ra, &rb, &e);
            *dist.entry(self.identify(&c)?).or_insert(0) += 1;
        }
        self.store_save("ext", &args, &render_distribution(&dist));
        Ok(memo_put(&self.ext_dist, key, Arc::new(dist)))
    }

    pub fn ext_count_with_middle(&self, a: &IsoLabel, b: &IsoLabel, c: &IsoLabel) -> Result<u64> {
        Ok(self.ext_distribution(a, b)?.get(c).copied().unwrap_or(0))
    }

    pub fn direct_sum_label(&self, a: &IsoLabel, b: &IsoLabel) -> Result<IsoLabel> {
        self.identify(&rep::direct_sum(&self.representative(a)?, &self.representative(b)?))
    }

    pub fn resolution(&self, label: &IsoLabel) -> Result<Arc<Resolution>> {
        if let Some(r) = memo_get(&self.resolutions, label) {
            return Ok(r);
        }
        let r = rep::minimal_resolution(&self.field, &self.quiver, &self.representative(label)?)?;
        Ok(memo_put(&self.resolutions, label.clone(), Arc::new(r)))
    }

    pub fn is_isomorphic(&self, m: &RepObject, n: &RepObject) -> Result<bool> {
        rep::is_isomorphic(&self.field, &self.quiver, m, n, self.budget)
    }
}

fn render_distribution(d: &ExtDistribution) -> String {
    let v: Vec<(String, u64)> = d.iter().map(|(k, n)| (k.to_string(), *n)).collect();
    serde_json::to_string(&v).expect("serializable")
}

fn parse_distribution(text: &str) -> Option<ExtDistribution> {
    let v: Vec<(String, u64)> = serde_json::from_str(text).ok()?;
    v.into_iter().map(|(k, n)| Some((k.parse().ok()?, n))).collect()
}
