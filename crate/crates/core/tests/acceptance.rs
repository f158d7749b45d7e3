//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any counted criterion fails. Informational lines start with INFO.
//!
//! Every comparison is exact (tolerance 0); wall-clock targets are checked too.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use hallforge::verify::{run_suite, Check, Suite, VerifyConfig};
use hallforge::{Coeff, HallAlgebra, HallSym, IsoLabel, Quiver, RepCategory};

const CRIT1_LIMIT: Duration = Duration::from_secs(120);
const CRIT6_LIMIT: Duration = Duration::from_secs(600);

struct Line {
    id: &'static str,
    counted: bool,
    passed: bool,
    detail: String,
}

#[derive(Default)]
struct Ledger {
    lines: Vec<Line>,
}

impl Ledger {
    fn record(&mut self, id: &'static str, counted: bool, passed: bool, detail: String) {
        let tag = match (counted, passed) {
            (false, true) => "INFO PASS",
            (false, false) => "INFO FAIL",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        println!("{tag} {id}: {detail}");
        self.lines.push(Line { id, counted, passed, detail });
    }
}

fn category(fixture: &str, q: u32) -> RepCategory {
    RepCategory::new(Quiver::fixture(fixture).unwrap(), q).unwrap()
}

fn suite_checks(cat: &RepCategory, suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Check>, String> {
    run_suite(cat, suite, cfg).map(|r| r.checks).map_err(|e| e.to_string())
}

fn summarize(checks: &[&Check]) -> (bool, String) {
    let ok = checks.iter().all(|c| c.passed);
    let parts: Vec<String> = checks.iter().map(|c| format!("{} {}/{}", c.name, c.cases - c.failures, c.cases)).collect();
    (ok, parts.join(", "))
}

fn pick<'a>(checks: &'a [Check], names: &[&str]) -> Vec<&'a Check> {
    checks.iter().filter(|c| names.iter().any(|n| c.name == *n)).collect()
}

/// Brute-force Hall numbers for one- and two-vertex linear quivers over a prime
/// field, independent of the library: representations are tuples of integer
/// matrices mod p, subrepresentations are enumerated as subspace tuples and
/// classes are told apart by (dimension vector, rank of the arrow map).
mod oracle {
    use std::collections::BTreeSet;

    pub type Vector = Vec<u32>;

    #[derive(Clone, Debug)]
    pub struct Rep {
        pub p: u32,
        pub dims: Vec<usize>,
        /// `None` for the one-vertex quiver, otherwise the matrix (rows = target).
        pub arrow: Option<Vec<Vec<u32>>>,
    }

    pub type Invariant = (Vec<usize>, usize);

    fn all_vectors(p: u32, n: usize) -> Vec<Vector> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out.into_iter().flat_map(|v| (0..p).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }

    pub fn rank(p: u32, rows: &[Vector]) -> usize {
        let mut m: Vec<Vector> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..m.len()).find(|&i| m[i][c] % p != 0) else { continue };
            m.swap(r, piv);
            let inv = (1..p).find(|&x| (x * m[r][c]) % p == 1).unwrap();
            let pivot_row: Vector = m[r].iter().map(|&x| (x * inv) % p).collect();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && row[c] % p != 0 {
                    let f = row[c];
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x = (*x + p * p - (f * y) % p) % p;
                    }
                }
            }
            m[r] = pivot_row;
            r += 1;
        }
        r
    }

    /// Every subspace of `F_p^n` as the sorted set of its vectors, with a basis.
    pub fn subspaces(p: u32, n: usize) -> Vec<(BTreeSet<Vector>, Vec<Vector>)> {
        let vectors = all_vectors(p, n);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut frontier = vec![vec![]];
        for _ in 0..=n {
            let mut next = Vec::new();
            for basis in frontier {
                let span = span_of(p, n, &basis);
                if seen.insert(span.clone()) {
                    for v in &vectors {
                        if !span.contains(v) {
                            next.push([basis.clone(), vec![v.clone()]].concat());
                        }
                    }
                    out.push((span, basis));
                }
            }
            frontier = next;
        }
        out
    }

    fn span_of(p: u32, n: usize, basis: &[Vector]) -> BTreeSet<Vector> {
        all_vectors(p, basis.len())
            .into_iter()
            .map(|c| (0..n).map(|i| c.iter().zip(basis).map(|(a, b)| a * b[i]).sum::<u32>() % p).collect())
            .collect()
    }

    fn apply(p: u32, m: &[Vec<u32>], v: &[u32]) -> Vector {
        m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<u32>() % p).collect()
    }

    fn matrices(p: u32, rows: usize, cols: usize) -> Vec<Vec<Vec<u32>>> {
        all_vectors(p, rows * cols).into_iter().map(|e| e.chunks(cols.max(1)).take(rows).map(<[u32]>::to_vec).collect()).collect()
    }

    fn mat_mul(p: u32, a: &[Vec<u32>], b: &[Vec<u32>], inner: usize, cols: usize) -> Vec<Vec<u32>> {
        a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum::<u32>() % p).collect()).collect()
    }

    fn invertible(p: u32, m: &[Vec<u32>]) -> bool {
        rank(p, m) == m.len()
    }

    impl Rep {
        pub fn invariant(&self) -> Invariant {
            let r = match &self.arrow {
                Some(m) if self.dims[0] > 0 && self.dims[1] > 0 => rank(self.p, m),
                _ => 0,
            };
            (self.dims.clone(), r)
        }

        /// Invertible endomorphisms, counted by running over all matrix tuples.
        pub fn aut_order(&self) -> u64 {
            let p = self.p;
            let g: Vec<Vec<Vec<Vec<u32>>>> =
                self.dims.iter().map(|&d| matrices(p, d, d).into_iter().filter(|m| invertible(p, m)).collect()).collect();
            match &self.arrow {
                None => g[0].len() as u64,
                Some(f) => {
                    let (d1, d2) = (self.dims[0], self.dims[1]);
                    let mut n = 0;
                    for g1 in &g[0] {
                        for g2 in &g[1] {
                            if mat_mul(p, g2, f, d2, d1) == mat_mul(p, f, g1, d1, d1) {
                                n += 1;
                            }
                        }
                    }
                    n
                }
            }
        }

        /// Number of subrepresentations `U` with `U ~ sub` and `self/U ~ quot`.
        pub fn filtrations(&self, quot: &Invariant, sub: &Invariant) -> u64 {
            let p = self.p;
            let spaces: Vec<_> = self.dims.iter().map(|&d| subspaces(p, d)).collect();
            let mut n = 0;
            match &self.arrow {
                None => {
                    for (_, basis) in &spaces[0] {
                        let u = vec![basis.len()];
                        let q = vec![self.dims[0] - basis.len()];
                        if (u, 0) == *sub && (q, 0) == *quot {
                            n += 1;
                        }
                    }
                }
                Some(f) => {
                    for (_, b1) in &spaces[0] {
                        let image: Vec<Vector> = b1.iter().map(|v| apply(p, f, v)).collect();
                        for (set2, b2) in &spaces[1] {
                            if !image.iter().all(|w| set2.contains(w)) {
                                continue;
                            }
                            let sub_rank = if image.is_empty() || self.dims[1] == 0 { 0 } else { rank(p, &image) };
                            let full_image: Vec<Vector> = (0..self.dims[0])
                                .map(|j| f.iter().map(|row| row[j]).collect())
                                .chain(b2.iter().cloned())
                                .collect();
                            let with_u = if full_image.is_empty() || self.dims[1] == 0 { 0 } else { rank(p, &full_image) };
                            let u = (vec![b1.len(), b2.len()], sub_rank);
                            let qd = vec![self.dims[0] - b1.len(), self.dims[1] - b2.len()];
                            let quot_rank = with_u - b2.len();
                            if u == *sub && (qd, quot_rank) == *quot {
                                n += 1;
                            }
                        }
                    }
                }
            }
            n
        }
    }
}

fn oracle_rep(cat: &RepCategory, label: &IsoLabel) -> oracle::Rep {
    let m = cat.representative(label).unwrap();
    let f = cat.field();
    let to_int = |x| f.coefficients(x)[0];
    let arrow = (cat.num_vertices() == 2).then(|| {
        let a = m.map(0);
        (0..a.rows()).map(|r| (0..a.cols()).map(|c| to_int(a.get(r, c))).collect()).collect()
    });
    oracle::Rep { p: cat.q(), dims: label.dimvec.clone(), arrow }
}

/// `[A] <> [B]` predicted by counting filtrations: the coefficient of `[L]` is
/// `F^L_{A,B} |Aut A| |Aut B| / |Aut L|`.
fn oracle_diamond(cat: &RepCategory, a: &IsoLabel, b: &IsoLabel) -> Vec<(IsoLabel, Coeff)> {
    let (ra, rb) = (oracle_rep(cat, a), oracle_rep(cat, b));
    let dims: Vec<usize> = a.dimvec.iter().zip(&b.dimvec).map(|(x, y)| x + y).collect();
    let mut out = Vec::new();
    for l in cat.labels_with_dimvec(&dims).unwrap() {
        let rl = oracle_rep(cat, &l);
        let count = rl.filtrations(&ra.invariant(), &rb.invariant());
        if count > 0 {
            let num = (count * ra.aut_order() * rb.aut_order()) as i64;
            out.push((l, Coeff::ratio(num, rl.aut_order() as i64)));
        }
    }
    out
}

fn label_with(cat: &RepCategory, dimvec: &[usize], pred: impl Fn(&oracle::Rep) -> bool) -> IsoLabel {
    cat.labels_with_dimvec(dimvec).unwrap().into_iter().find(|l| pred(&oracle_rep(cat, l))).unwrap()
}

fn diamond_matches(h: &HallAlgebra, a: &IsoLabel, b: &IsoLabel, expected: &[(IsoLabel, Coeff)]) -> bool {
    let got = h.diamond_basis(a, b).unwrap();
    let want: hallforge::HallElement = expected.iter().map(|(l, c)| (HallSym::plain(l.clone()), c.clone())).collect();
    got == want
}

/// Classical products from closed formulas and from the filtration oracle.
fn classical_values(fixture: &str, q: u32) -> (bool, String) {
    let cat = category(fixture, q);
    let h = HallAlgebra::new(&cat);
    let inv_q = Coeff::ratio(1, q as i64);
    let mut ok = true;
    let mut notes = Vec::new();
    let mut check = |what: &str, a: &IsoLabel, b: &IsoLabel, formula: Vec<(IsoLabel, Coeff)>| {
        let oracle = oracle_diamond(&cat, a, b);
        let good = diamond_matches(&h, a, b, &formula) && diamond_matches(&h, a, b, &oracle);
        ok &= good;
        notes.push(format!("{what} {}", if good { "ok" } else { "MISMATCH" }));
    };
    if fixture == "a1" {
        let k = cat.labels_with_dimvec(&[1]).unwrap()[0].clone();
        let k2 = cat.labels_with_dimvec(&[2]).unwrap()[0].clone();
        check("[k]<>[k]=q^-1[k^2]", &k, &k, vec![(k2, inv_q)]);
    } else {
        let s1 = label_with(&cat, &[1, 0], |_| true);
        let s2 = label_with(&cat, &[0, 1], |_| true);
        let split = label_with(&cat, &[1, 1], |r| r.invariant().1 == 0);
        let p1 = label_with(&cat, &[1, 1], |r| r.invariant().1 == 1);
        check(
            "[S1]<>[S2]=[S1+S2]+(q-1)[P1]",
            &s1,
            &s2,
            vec![(split.clone(), Coeff::from_int(1)), (p1, Coeff::from_int(q as i64 - 1))],
        );
        check("[S2]<>[S1]=[S1+S2]", &s2, &s1, vec![(split, Coeff::from_int(1))]);
    }
    // every product landing in total dimension <= 3
    let labels = cat.labels_up_to(3).unwrap();
    let mut sweep = 0;
    let mut sweep_bad = 0;
    for a in &labels {
        for b in &labels {
            if a.total_dim() + b.total_dim() <= 3 {
                sweep += 1;
                if !diamond_matches(&h, a, b, &oracle_diamond(&cat, a, b)) {
                    sweep_bad += 1;
                }
            }
        }
    }
    ok &= sweep_bad == 0;
    notes.push(format!("oracle sweep {}/{sweep}", sweep - sweep_bad));
    (ok, notes.join(", "))
}

fn criterion1(ledger: &mut Ledger) {
    let cfg = VerifyConfig { max_dim: 3, kgrid: 1 };
    let mut ok = true;
    let mut parts = Vec::new();
    for fixture in ["a1", "a2"] {
        let start = Instant::now();
        let mut fixture_ok = true;
        for q in [2, 3] {
            let cat = category(fixture, q);
            match suite_checks(&cat, Suite::HallAssoc, &cfg) {
                Ok(checks) => {
                    let (good, s) = summarize(&checks.iter().collect::<Vec<_>>());
                    let (cgood, cs) = classical_values(fixture, q);
                    fixture_ok &= good && cgood;
                    parts.push(format!("{fixture} q={q} [{s}; {cs}]"));
                }
                Err(e) => {
                    fixture_ok = false;
                    parts.push(format!("{fixture} q={q} error: {e}"));
                }
            }
        }
        let elapsed = start.elapsed();
        fixture_ok &= elapsed < CRIT1_LIMIT;
        parts.push(format!("{fixture} {:.1}s (limit {}s)", elapsed.as_secs_f64(), CRIT1_LIMIT.as_secs()));
        ok &= fixture_ok;
    }
    ledger.record("criterion-1 hall products", true, ok, parts.join("; "));
}

fn criterion2(ledger: &mut Ledger) {
    let cfg = VerifyConfig { max_dim: 3, kgrid: 1 };
    let mut ok = true;
    let mut parts = Vec::new();
    let mut info = Vec::new();
    for fixture in ["a1", "a2"] {
        for q in [2, 3] {
            let cat = category(fixture, q);
            let mut checks = Vec::new();
            for suite in [Suite::Bialgebra, Suite::Pairing] {
                match suite_checks(&cat, suite, &cfg) {
                    Ok(c) => checks.extend(c),
                    Err(e) => {
                        ok = false;
                        parts.push(format!("{fixture} q={q} {suite} error: {e}"));
                    }
                }
            }
            let counted: Vec<&Check> = checks.iter().filter(|c| c.counted).collect();
            let (good, s) = summarize(&counted);
            ok &= good;
            parts.push(format!("{fixture} q={q} [{s}]"));
            for c in checks.iter().filter(|c| !c.counted) {
                info.push((format!("{fixture} q={q}"), c.clone()));
            }
        }
    }
    ledger.record("criterion-2 bialgebra and pairing", true, ok, parts.join("; "));
    for (at, c) in info {
        ledger.record("criterion-2 variant", false, c.passed, format!("{at} {} {}/{}", c.name, c.cases - c.failures, c.cases));
    }
}

const CRIT3: [&str; 6] = [
    "ext-equals-homotopy",
    "hom-c-cstar",
    "decompose-normal-forms",
    "decompose-reassemble-isomorphic",
    "acyclic-split",
    "decompose-isomorphism-invariant",
];
const CRIT4: [&str; 3] = ["acyclic-products", "k-commutation", "k-well-defined"];
const DH_STRUCTURE: [&str; 3] = ["star-automorphism", "dh-associative", "embeddings-multiplicative"];

fn criteria3to5(ledger: &mut Ledger) {
    let cfg = VerifyConfig { max_dim: 2, kgrid: 2 };
    let (mut ok3, mut ok4, mut ok5, mut okdh) = (true, true, true, true);
    let (mut p3, mut p4, mut p5, mut pdh) = (vec![], vec![], vec![], vec![]);
    for (fixture, q) in [("a1", 2), ("a1", 3), ("a2", 2), ("a2", 3)] {
        let cat = category(fixture, q);
        let at = format!("{fixture} q={q}");
        match suite_checks(&cat, Suite::ComplexRelations, &cfg) {
            Ok(checks) => {
                for (names, ok, parts) in
                    [(&CRIT3[..], &mut ok3, &mut p3), (&CRIT4[..], &mut ok4, &mut p4), (&DH_STRUCTURE[..], &mut okdh, &mut pdh)]
                {
                    let picked = pick(&checks, names);
                    let (good, s) = summarize(&picked);
                    *ok &= good && picked.len() == names.len();
                    parts.push(format!("{at} [{s}]"));
                }
            }
            Err(e) => {
                ok3 = false;
                ok4 = false;
                okdh = false;
                p3.push(format!("{at} error: {e}"));
            }
        }
        match suite_checks(&cat, Suite::Triangular, &cfg) {
            Ok(checks) => {
                let (good, s) = summarize(&checks.iter().collect::<Vec<_>>());
                ok5 &= good;
                p5.push(format!("{at} [{s}]"));
            }
            Err(e) => {
                ok5 = false;
                p5.push(format!("{at} error: {e}"));
            }
        }
    }
    ledger.record("criterion-3 complex layer", true, ok3, p3.join("; "));
    ledger.record("criterion-4 acyclic relations and K", true, ok4, p4.join("; "));
    ledger.record("criterion-5 triangular basis", true, ok5, p5.join("; "));
    ledger.record("criterion-6 prerequisites", true, okdh, pdh.join("; "));
}

fn double_run(cat: &RepCategory, cfg: &VerifyConfig) -> Result<Vec<Check>, String> {
    suite_checks(cat, Suite::DoubleRelation, cfg)
}

fn criterion6(ledger: &mut Ledger) {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    let mut info = Vec::new();
    let runs = [("a2", 2, 2), ("a2", 3, 2), ("a1", 2, 3), ("a1", 3, 3)];
    for (fixture, q, max_dim) in runs {
        let cat = category(fixture, q);
        let at = format!("{fixture} q={q} dim<={max_dim}");
        match double_run(&cat, &VerifyConfig { max_dim, kgrid: 2 }) {
            Ok(checks) => {
                let counted: Vec<&Check> = checks.iter().filter(|c| c.counted).collect();
                let (good, s) = summarize(&counted);
                ok &= good;
                parts.push(format!("{at} [{s}]"));
                for c in checks.iter().filter(|c| !c.counted) {
                    info.push((at.clone(), c.clone()));
                }
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{at} error: {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < CRIT6_LIMIT;
    parts.push(format!("{:.1}s (limit {}s)", elapsed.as_secs_f64(), CRIT6_LIMIT.as_secs()));
    ledger.record("criterion-6 double relation", true, ok, parts.join("; "));
    for (at, c) in info {
        ledger.record("criterion-6 other conventions", false, c.passed, format!("{at} {} {}/{}", c.name, c.cases - c.failures, c.cases));
    }
}

/// Kronecker quiver with dimension vectors up to (1,1) and K on [-2,2]^2.
fn kronecker_stretch(ledger: &mut Ledger, q: u32) {
    let start = Instant::now();
    let cat = category("kronecker", q);
    let dh = hallforge::DHAlgebra::new(&cat);
    let mut syms: Vec<HallSym> = hallforge::dh::k_grid(2, 2).into_iter().map(HallSym::k_only).collect();
    let small: BTreeSet<Vec<usize>> = [vec![1, 0], vec![0, 1], vec![1, 1]].into_iter().collect();
    for l in cat.labels_up_to(2).unwrap() {
        if small.contains(&l.dimvec) {
            syms.push(HallSym::plain(l));
        }
    }
    let conv = hallforge::DoubleConvention::default();
    let mut cases = 0;
    let mut bad = 0;
    let mut err = None;
    'outer: for a in &syms {
        for b in &syms {
            match dh.check_double_relation(a, b, conv) {
                Ok(r) => {
                    cases += 1;
                    bad += usize::from(!r.equal);
                }
                Err(e) => {
                    err = Some(e.to_string());
                    break 'outer;
                }
            }
        }
    }
    let detail = match err {
        Some(e) => format!("kronecker q={q} error after {cases} pairs: {e}"),
        None => format!("kronecker q={q} dimvec<=(1,1) {}/{cases} in {:.1}s", cases - bad, start.elapsed().as_secs_f64()),
    };
    ledger.record("criterion-6 stretch", false, bad == 0 && cases == syms.len() * syms.len(), detail);
}

fn main() {
    println!("acceptance: exact equality throughout (tolerance 0)");
    let mut ledger = Ledger::default();
    criterion1(&mut ledger);
    criterion2(&mut ledger);
    criteria3to5(&mut ledger);
    criterion6(&mut ledger);
    kronecker_stretch(&mut ledger, 2);
    kronecker_stretch(&mut ledger, 3);
    let failed: Vec<&Line> = ledger.lines.iter().filter(|l| l.counted && !l.passed).collect();
    println!(
        "acceptance: {} counted, {} failed, {} informational",
        ledger.lines.iter().filter(|l| l.counted).count(),
        failed.len(),
        ledger.lines.iter().filter(|l| !l.counted).count()
    );
    if !failed.is_empty() {
        for l in failed {
            eprintln!("failed {}: {}", l.id, l.detail);
        }
        std::process::exit(1);
    }
}
