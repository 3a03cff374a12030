//! Sparse term-map kernels shared by holomorphic and Hermitian polynomials.

use std::collections::BTreeMap;

use super::{ExactComplex, Monomial};

pub(crate) type TermMap = BTreeMap<Monomial, ExactComplex>;

pub(crate) fn accumulate(map: &mut TermMap, mono: Monomial, coef: &ExactComplex) {
    if coef.is_zero() {
        return;
    }
    match map.entry(mono) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coef.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += coef;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub(crate) fn add(a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = a.clone();
    for (m, c) in b {
        accumulate(&mut out, m.clone(), c);
    }
    out
}

pub(crate) fn neg(a: &TermMap) -> TermMap {
    a.iter().map(|(m, c)| (m.clone(), -c)).collect()
}

pub(crate) fn sub(a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = a.clone();
    for (m, c) in b {
        accumulate(&mut out, m.clone(), &-c);
    }
    out
}

pub(crate) fn mul(a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = TermMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            accumulate(&mut out, ma.mul(mb), &(ca * cb));
        }
    }
    out
}

pub(crate) fn scale(a: &TermMap, k: &ExactComplex) -> TermMap {
    if k.is_zero() {
        return TermMap::new();
    }
    a.iter().map(|(m, c)| (m.clone(), c * k)).collect()
}

pub(crate) fn pow(a: &TermMap, n_slots: usize, exp: u32) -> TermMap {
    let mut acc = one(n_slots);
    for _ in 0..exp {
        acc = mul(&acc, a);
    }
    acc
}

pub(crate) fn one(n_slots: usize) -> TermMap {
    let mut m = TermMap::new();
    m.insert(Monomial::one(n_slots), ExactComplex::one());
    m
}

/// Greatest common monomial divisor of all terms; `None` for the zero map.
pub(crate) fn monomial_content(a: &TermMap) -> Option<Monomial> {
    let mut it = a.keys();
    let first = it.next()?.clone();
    Some(it.fold(first, |g, m| g.gcd(m)))
}

pub(crate) fn div_monomial(a: &TermMap, d: &Monomial) -> Option<TermMap> {
    a.iter()
        .map(|(m, c)| d.quotient_of(m).map(|q| (q, c.clone())))
        .collect()
}

/// Exact quotient `a / d` when `d` divides `a`.
///
/// Division by a single polynomial: the remainder under a monomial order is
/// zero iff `d` divides `a`, so the first leading term that `lt(d)` fails to
/// divide settles the question.
pub(crate) fn div_exact(a: &TermMap, d: &TermMap) -> Option<TermMap> {
    let (ld, lc) = d.iter().next_back()?;
    let lc_inv = lc.recip()?;
    let mut rem = a.clone();
    let mut quot = TermMap::new();
    while let Some((lm, lcoef)) = rem.iter().next_back() {
        let q_mono = ld.quotient_of(lm)?;
        let q_coef = lcoef * &lc_inv;
        for (m, c) in d {
            accumulate(&mut rem, m.mul(&q_mono), &-(c * &q_coef));
        }
        accumulate(&mut quot, q_mono, &q_coef);
    }
    Some(quot)
}
