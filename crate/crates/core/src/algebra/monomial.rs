use std::cmp::Ordering;
use std::sync::Arc;

/// Exponent vector. Ordered graded-lexicographically: lower total degree
/// first, then by variable order (a higher power of an earlier variable
/// sorts first within a degree).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn one(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn var(n: usize, idx: usize) -> Self {
        let mut e = vec![0; n];
        e[idx] = 1;
        Self(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        self.divides(other)
            .then(|| Self(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered list of holomorphic variable names shared by a polynomial's terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Self(names.iter().map(|s| s.as_ref().to_owned()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

impl std::fmt::Display for Vars {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.0.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order() {
        let one = Monomial::new(vec![0, 0]);
        let z1 = Monomial::new(vec![1, 0]);
        let z2 = Monomial::new(vec![0, 1]);
        let z1z2 = Monomial::new(vec![1, 1]);
        let mut v = vec![z1z2.clone(), z2.clone(), one.clone(), z1.clone()];
        v.sort();
        assert_eq!(v, vec![one, z1, z2, z1z2]);
    }

    #[test]
    fn division() {
        let a = Monomial::new(vec![1, 2]);
        let b = Monomial::new(vec![3, 2]);
        assert_eq!(a.quotient_of(&b), Some(Monomial::new(vec![2, 0])));
        assert_eq!(b.quotient_of(&a), None);
    }
}
