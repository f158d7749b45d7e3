//! Finite acyclic quivers, their paths and the Euler form.

use std::fmt;

use serde_json::Value;

use crate::error::{HallError, Result};

/// Integer vector indexed by vertices, the class of a representation.
pub type KClass = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    name: String,
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
    /// `paths[i][j]`: paths from `i` to `j` as arrow sequences, shortest first.
    paths: Vec<Vec<Vec<Vec<usize>>>>,
    topo: Vec<usize>,
}

impl Quiver {
    pub fn new(name: impl Into<String>, vertices: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(HallError::InvalidQuiver("no vertices".into()));
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(HallError::InvalidQuiver(format!("duplicate vertex '{v}'")));
            }
        }
        if let Some(&(s, t)) = arrows.iter().find(|&&(s, t)| s >= n || t >= n) {
            return Err(HallError::InvalidQuiver(format!("arrow {s}->{t} leaves the vertex set")));
        }
        // Kahn's algorithm; leftovers mean a cycle
        let mut indeg = vec![0usize; n];
        for &(_, t) in &arrows {
            indeg[t] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            topo.push(v);
            for &(s, t) in &arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        ready.push(t);
                    }
                }
            }
        }
        if topo.len() != n {
            return Err(HallError::CyclicQuiver);
        }

        let mut paths = vec![vec![Vec::new(); n]; n];
        for (i, row) in paths.iter_mut().enumerate() {
            let mut frontier: Vec<(usize, Vec<usize>)> = vec![(i, Vec::new())];
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for (end, p) in frontier {
                    for (a, &(s, t)) in arrows.iter().enumerate() {
                        if s == end {
                            let mut q = p.clone();
                            q.push(a);
                            next.push((t, q));
                        }
                    }
                    row[end].push(p);
                }
                frontier = next;
            }
        }
        Ok(Quiver { name: name.into(), vertices, arrows, paths, topo })
    }

    /// Built-in fixtures: `a1` (one vertex), `a2` (1 -> 2), `kronecker` (1 => 2).
    pub fn fixture(name: &str) -> Result<Self> {
        let names = |k: usize| (1..=k).map(|i| i.to_string()).collect::<Vec<_>>();
        match name {
            "a1" => Self::new("a1", names(1), vec![]),
            "a2" => Self::new("a2", names(2), vec![(0, 1)]),
            "kronecker" => Self::new("kronecker", names(2), vec![(0, 1), (0, 1)]),
            other => Err(HallError::UnknownFixture(other.to_string())),
        }
    }

    /// Parse `{"vertices": [...], "arrows": [...]}`. Arrows are `[s, t]` or
    /// `{"source": s, "target": t}`; endpoints are vertex names or 0-based positions.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| HallError::Parse(e.to_string()))?;
        let bad = |msg: &str| HallError::InvalidQuiver(msg.to_string());
        let vertices: Vec<String> = v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing 'vertices' array"))?
            .iter()
            .map(|x| match x {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(bad("vertex names must be strings or numbers")),
            })
            .collect::<Result<_>>()?;
        let endpoint = |x: &Value| -> Result<usize> {
            match x {
                Value::String(s) => {
                    vertices.iter().position(|v| v == s).ok_or_else(|| bad(&format!("unknown vertex '{s}'")))
                }
                Value::Number(n) => n.as_u64().map(|k| k as usize).ok_or_else(|| bad("bad vertex index")),
                _ => Err(bad("arrow endpoints must be names or indices")),
            }
        };
        let mut arrows = Vec::new();
        for a in v.get("arrows").and_then(Value::as_array).ok_or_else(|| bad("missing 'arrows' array"))? {
            let (s, t) = match a {
                Value::Array(pair) if pair.len() == 2 => (&pair[0], &pair[1]),
                Value::Object(o) => (
                    o.get("source").ok_or_else(|| bad("arrow without 'source'"))?,
                    o.get("target").ok_or_else(|| bad("arrow without 'target'"))?,
                ),
                _ => return Err(bad("arrows must be [source, target] or {source, target}")),
            };
            arrows.push((endpoint(s)?, endpoint(t)?));
        }
        let name = v.get("name").and_then(Value::as_str).unwrap_or("custom").to_string();
        Self::new(name, vertices, arrows)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    /// Structural description independent of the display name, used for cache keys.
    pub fn canonical_key(&self) -> String {
        let arrows: Vec<String> = self.arrows.iter().map(|(s, t)| format!("{s}>{t}")).collect();
        format!("n={};a={}", self.vertices.len(), arrows.join(","))
    }

    /// Vertices ordered so that every arrow points forward.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn paths(&self, from: usize, to: usize) -> &[Vec<usize>] {
        &self.paths[from][to]
    }

    /// Dimension vector of the indecomposable projective at `i`.
    pub fn projective_dimvec(&self, i: usize) -> Vec<usize> {
        (0..self.num_vertices()).map(|j| self.paths[i][j].len()).collect()
    }

    /// Multiplicities `m` with `sum_i m_i dim P_i = dimvec`, if nonnegative ones exist.
    pub fn projective_multiplicities(&self, dimvec: &[usize]) -> Option<Vec<usize>> {
        let n = self.num_vertices();
        let mut m = vec![0i64; n];
        for &j in &self.topo {
            let covered: i64 = (0..n).filter(|&i| i != j).map(|i| m[i] * self.paths[i][j].len() as i64).sum();
            m[j] = dimvec[j] as i64 - covered;
            if m[j] < 0 {
                return None;
            }
        }
        Some(m.into_iter().map(|x| x as usize).collect())
    }

    /// `sum_i m_i dim P_i`.
    pub fn projective_sum_dimvec(&self, m: &[usize]) -> Vec<usize> {
        let n = self.num_vertices();
        (0..n).map(|j| (0..n).map(|i| m[i] * self.paths[i][j].len()).sum()).collect()
    }

    pub fn zero_class(&self) -> KClass {
        vec![0; self.num_vertices()]
    }

    /// `<alpha, beta> = sum_i alpha_i beta_i - sum_{a: i -> j} alpha_i beta_j`.
    pub fn euler_form(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        debug_assert_eq!(alpha.len(), self.num_vertices());
        debug_assert_eq!(beta.len(), self.num_vertices());
        let diag: i64 = alpha.iter().zip(beta).map(|(a, b)| a * b).sum();
        let off: i64 = self.arrows.iter().map(|&(s, t)| alpha[s] * beta[t]).sum();
        diag - off
    }

    pub fn sym_euler_form(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        self.euler_form(alpha, beta) + self.euler_form(beta, alpha)
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrows: Vec<String> =
            self.arrows.iter().map(|&(s, t)| format!("{}->{}", self.vertices[s], self.vertices[t])).collect();
        write!(f, "{} [{}]", self.name, arrows.join(", "))
    }
}

pub fn to_class(dimvec: &[usize]) -> KClass {
    dimvec.iter().map(|&d| d as i64).collect()
}

pub fn class_add(a: &[i64], b: &[i64]) -> KClass {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn class_sub(a: &[i64], b: &[i64]) -> KClass {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn class_neg(a: &[i64]) -> KClass {
    a.iter().map(|x| -x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_and_paths() {
        let a2 = Quiver::fixture("a2").unwrap();
        assert_eq!(a2.projective_dimvec(0), vec![1, 1]);
        assert_eq!(a2.projective_dimvec(1), vec![0, 1]);
        let kr = Quiver::fixture("kronecker").unwrap();
        assert_eq!(kr.projective_dimvec(0), vec![1, 2]);
        assert_eq!(kr.paths(0, 1), &[vec![0], vec![1]]);
        assert_eq!(kr.projective_multiplicities(&[1, 3]), Some(vec![1, 1]));
        assert_eq!(kr.projective_multiplicities(&[1, 1]), None);
        assert_eq!(kr.projective_sum_dimvec(&[2, 1]), vec![2, 5]);
        assert!(matches!(Quiver::fixture("d4"), Err(HallError::UnknownFixture(_))));
    }

    #[test]
    fn rejects_cycles() {
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(Quiver::new("c", names.clone(), vec![(0, 1), (1, 0)]), Err(HallError::CyclicQuiver));
        assert_eq!(Quiver::new("loop", names, vec![(0, 0)]), Err(HallError::CyclicQuiver));
    }

    #[test]
    fn json_forms() {
        let a = Quiver::from_json(r#"{"vertices": ["u", "v"], "arrows": [["u", "v"]]}"#).unwrap();
        let b = Quiver::from_json(r#"{"vertices": ["u", "v"], "arrows": [{"source": 0, "target": 1}]}"#).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_eq!(a.canonical_key(), Quiver::fixture("a2").unwrap().canonical_key());
        assert!(Quiver::from_json(r#"{"vertices": ["u"], "arrows": [["u", "w"]]}"#).is_err());
    }

    #[test]
    fn euler_form_examples() {
        let a2 = Quiver::fixture("a2").unwrap();
        assert_eq!(a2.euler_form(&[1, 0], &[0, 1]), -1);
        assert_eq!(a2.euler_form(&[0, 1], &[1, 0]), 0);
        assert_eq!(a2.sym_euler_form(&[1, 0], &[0, 1]), -1);
        assert_eq!(a2.euler_form(&[3, -2], &[0, 0]), 0);
        let a1 = Quiver::fixture("a1").unwrap();
        for m in 0..4 {
            for n in 0..4 {
                assert_eq!(a1.euler_form(&[m], &[n]), m * n);
            }
        }
    }
}
