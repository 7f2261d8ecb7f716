//! Linear differential expressions `Σ_α c_α ∂^α φ` in an unspecified argument.
//!
//! Used as the component type when covariant derivatives act on a generic
//! density: the result is the operator itself in canonical coordinate form.

use std::collections::BTreeMap;

use crate::poly::{Monomial, Poly};
use crate::rational::Rational;
use crate::tensor::Component;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffExpr {
    n: usize,
    /// multi-index `α` (exponent vector of `∂`) ↦ coefficient `c_α`
    terms: BTreeMap<Monomial, Poly>,
}

impl DiffExpr {
    pub fn zero(n: usize) -> Self {
        DiffExpr {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The argument `φ` itself.
    pub fn identity(n: usize) -> Self {
        Self::derivative(n, Monomial::one(n), Poly::one(n))
    }

    /// `coefficient * ∂^alpha φ`.
    pub fn derivative(n: usize, alpha: Monomial, coefficient: Poly) -> Self {
        let mut e = Self::zero(n);
        e.add_term(alpha, &coefficient);
        e
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order present; 0 for the zero expression.
    pub fn order(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn coefficient(&self, alpha: &Monomial) -> Poly {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.terms.iter()
    }

    fn add_term(&mut self, alpha: Monomial, c: &Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn sub(&self, other: &DiffExpr) -> DiffExpr {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), &-c);
        }
        out
    }

    /// Evaluates the expression on a concrete polynomial `φ`.
    pub fn apply(&self, phi: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (alpha, c) in &self.terms {
            let mut d = phi.clone();
            for (i, &e) in alpha.exponents().iter().enumerate() {
                for _ in 0..e {
                    d = d.partial(i);
                }
            }
            out.add_product(c, &d);
        }
        out
    }

    /// Operator composition `self ∘ inner`.
    pub fn compose(&self, inner: &DiffExpr) -> DiffExpr {
        let mut out = DiffExpr::zero(self.n);
        for (alpha, c) in &self.terms {
            let mut d = inner.clone();
            for (i, &e) in alpha.exponents().iter().enumerate() {
                for _ in 0..e {
                    d = Component::partial(&d, i);
                }
            }
            out.add_product(c, &d);
        }
        out
    }
}

impl Component for DiffExpr {
    fn zero(n: usize) -> Self {
        DiffExpr::zero(n)
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, rhs: &Self) {
        for (a, c) in &rhs.terms {
            self.add_term(a.clone(), c);
        }
    }

    fn add_product(&mut self, factor: &Poly, rhs: &Self) {
        if factor.is_zero() {
            return;
        }
        for (a, c) in &rhs.terms {
            self.add_term(a.clone(), &(factor * c));
        }
    }

    fn sub_product(&mut self, factor: &Poly, rhs: &Self) {
        if factor.is_zero() {
            return;
        }
        for (a, c) in &rhs.terms {
            self.add_term(a.clone(), &-(factor * c));
        }
    }

    fn scale(&self, r: &Rational) -> Self {
        let mut out = DiffExpr::zero(self.n);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), &c.scale(r));
        }
        out
    }

    /// Leibniz rule: `∂_i(c ∂^α φ) = (∂_i c) ∂^α φ + c ∂^{α+e_i} φ`.
    fn partial(&self, i: usize) -> Self {
        let mut out = DiffExpr::zero(self.n);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), &c.partial(i));
            out.add_term(a.bump(i), c);
        }
        out
    }
}
