//! Finite formal linear combinations with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::Coeff;

/// `sum c_k [k]`, zero coefficients never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Coeff>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, Coeff::from_int(1))
    }

    pub fn term(k: K, c: Coeff) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: K, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &Coeff) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * s);
        }
    }

    pub fn scaled(&self, s: &Coeff) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Coeff::from_int(1));
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Coeff::from_int(-1));
        out
    }

    pub fn coeff(&self, k: &K) -> Coeff {
        self.terms.get(k).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Coeff)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Linear extension of `f` on basis symbols.
    pub fn map_linear<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> LinComb<L>) -> LinComb<L> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Bilinear extension of `f` on pairs of basis symbols.
    pub fn bilinear<L: Ord + Clone, M: Ord + Clone>(
        &self,
        other: &LinComb<L>,
        mut f: impl FnMut(&K, &L) -> LinComb<M>,
    ) -> LinComb<M> {
        let mut out = LinComb::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_scaled(&f(a, b), &(ca * cb));
            }
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Coeff)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Coeff)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Ord + fmt::Display> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){k}")?;
        }
        Ok(())
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(k, c)| (k, c.to_string()))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_drops_terms() {
        let mut x = LinComb::basis("a");
        x.add_term("b", Coeff::t(2));
        let y = x.minus(&LinComb::basis("a"));
        assert_eq!(y, LinComb::term("b", Coeff::t(2)));
        assert!(x.minus(&x).is_zero());
        assert_eq!(x.coeff(&"c"), Coeff::zero());
    }

    #[test]
    fn bilinear_extension() {
        let x: LinComb<u8> = [(1, Coeff::from_int(2)), (2, Coeff::from_int(3))].into_iter().collect();
        let y = x.bilinear(&x, |a, b| LinComb::basis(a + b));
        assert_eq!(y.coeff(&2), Coeff::from_int(4));
        assert_eq!(y.coeff(&3), Coeff::from_int(12));
        assert_eq!(y.coeff(&4), Coeff::from_int(9));
    }
}
