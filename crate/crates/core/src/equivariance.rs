//! Infinitesimal actions of vector fields on densities, symbols and
//! operators, and the flat-case `sl(n+1)` equivariance check.

use std::fmt;

use crate::diffexpr::DiffExpr;
use crate::error::{check_dim, Error, Result};
use crate::parse::parse_vector_field;
use crate::poly::{Monomial, Poly};
use crate::quantization::{quantize, CoefficientSet, Diff3Operator, Weights};
use crate::tensor::{Component, Connection, Symbol3, TensorDensity};

/// Polynomial vector field `X = X^i ∂_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    n: usize,
    components: Vec<Poly>,
}

impl VectorField {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        let n = components.len();
        for c in &components {
            check_dim(n, c.dim())?;
        }
        Ok(VectorField { n, components })
    }

    /// Parses `Σ coefficient * ∂k`, e.g. `x1^2*∂2` or `x1*d1 + x2*d2`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        Self::new(parse_vector_field(text, n)?)
    }

    /// `∂_i` (0-based).
    pub fn translation(n: usize, i: usize) -> Self {
        let mut components = vec![Poly::zero(n); n];
        components[i] = Poly::one(n);
        VectorField { n, components }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn divergence(&self) -> Poly {
        let mut d = Poly::zero(self.n);
        for (i, c) in self.components.iter().enumerate() {
            d += &c.partial(i);
        }
        d
    }

    /// `X(f) = X^i ∂_i f`.
    pub fn derive(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (i, c) in self.components.iter().enumerate() {
            out.add_product(c, &f.partial(i));
        }
        out
    }

    /// Lie bracket `[X, Y]^i = X(Y^i) − Y(X^i)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        check_dim(self.n, other.n)?;
        Ok(VectorField {
            n: self.n,
            components: (0..self.n)
                .map(|i| &self.derive(&other.components[i]) - &other.derive(&self.components[i]))
                .collect(),
        })
    }

    /// As a first-order differential expression `X^i ∂_i`.
    fn as_expr(&self) -> DiffExpr {
        let mut e = DiffExpr::zero(self.n);
        for (i, c) in self.components.iter().enumerate() {
            e.accumulate(&DiffExpr::derivative(self.n, Monomial::var(self.n, i), c.clone()));
        }
        e
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let d = format!("∂{}", i + 1);
            if c == &Poly::one(self.n) {
                parts.push(d);
            } else if c.num_terms() == 1 && !text.starts_with('-') {
                parts.push(format!("{text}*{d}"));
            } else {
                parts.push(format!("({text})*{d}"));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Generators of the projective algebra `sl(n+1)` acting on `R^n`: the
/// translations `∂_i`, the linear fields `x^i ∂_j` and the quadratic fields
/// `x^i x^j ∂_j` (summed over `j`), `n + n² + n` fields in all.
pub fn sl_generators(n: usize) -> Vec<VectorField> {
    let mut out: Vec<VectorField> = (0..n).map(|i| VectorField::translation(n, i)).collect();
    for i in 0..n {
        for j in 0..n {
            let mut components = vec![Poly::zero(n); n];
            components[j] = Poly::var(n, i);
            out.push(VectorField { n, components });
        }
    }
    for i in 0..n {
        let xi = Poly::var(n, i);
        let components = (0..n).map(|j| &xi * &Poly::var(n, j)).collect();
        out.push(VectorField { n, components });
    }
    out
}

/// `L_X φ = X^i ∂_i φ + λ (∂_i X^i) φ` for a density of weight `λ`.
pub fn lie_density(x: &VectorField, phi: &TensorDensity) -> Result<TensorDensity> {
    check_dim(x.n, phi.dim())?;
    if phi.rank() != 0 {
        return Err(Error::ShapeMismatch("lie_density expects a scalar density".into()));
    }
    let value = phi.value();
    let mut out = x.derive(value);
    out.add_product(&x.divergence().scale(phi.weight()), value);
    Ok(TensorDensity::scalar(out, phi.weight().clone()))
}

/// `L_X P^{ijk} = X^m ∂_m P^{ijk} − P^{mjk} ∂_m X^i − P^{imk} ∂_m X^j − P^{ijm} ∂_m X^k + δ (∂_m X^m) P^{ijk}`.
pub fn lie_symbol(x: &VectorField, p: &Symbol3) -> Result<Symbol3> {
    let n = x.n;
    check_dim(n, p.dim())?;
    let jac: Vec<Vec<Poly>> = (0..n)
        .map(|i| (0..n).map(|m| x.components[i].partial(m)).collect())
        .collect();
    let weighted_div = x.divergence().scale(p.weight());
    let t = TensorDensity::from_fn(n, 3, 0, p.weight().clone(), |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut v = x.derive(p.get(i, j, k));
        for m in 0..n {
            v.sub_product(&jac[i][m], p.get(m, j, k));
            v.sub_product(&jac[j][m], p.get(i, m, k));
            v.sub_product(&jac[k][m], p.get(i, j, m));
        }
        v.add_product(&weighted_div, p.get(i, j, k));
        v
    });
    Symbol3::new(t)
}

/// `(L_X A)(φ) = L_X^μ(A φ) − A(L_X^λ φ)`, re-collected into canonical form.
pub fn lie_operator(x: &VectorField, a: &Diff3Operator) -> Result<Diff3Operator> {
    let n = x.n;
    check_dim(n, a.dim())?;
    let w = a.weights();
    let div = x.divergence();
    let a_phi = a.expr();

    let mut outer = x.as_expr().compose(a_phi);
    outer.add_product(&div.scale(&w.mu()), a_phi);

    let mut lie_phi = x.as_expr();
    lie_phi.add_product(&div.scale(w.lambda()), &DiffExpr::identity(n));
    let inner = a_phi.compose(&lie_phi);

    Diff3Operator::from_expr(w.clone(), outer.sub(&inner))
}

/// Outcome of comparing `Q(L_X P)` with `L_X Q(P)`.
#[derive(Clone, Debug)]
pub struct EquivarianceVerdict {
    pub holds: bool,
    /// `Q(L_X P) − L_X Q(P)`
    pub residual: Diff3Operator,
}

/// Checks `Q(L_X P) == L_X(Q(P))` over the flat projective structure.
pub fn check_equivariance(
    x: &VectorField,
    w: &Weights,
    c: &CoefficientSet,
    p: &Symbol3,
) -> Result<EquivarianceVerdict> {
    check_dim(w.n(), x.n)?;
    let flat = Connection::flat(w.n());
    let lhs = quantize(&lie_symbol(x, p)?, &flat, w, c)?;
    let rhs = lie_operator(x, &quantize(p, &flat, w, c)?)?;
    let residual = lhs.difference(&rhs)?;
    Ok(EquivarianceVerdict {
        holds: residual.is_zero(),
        residual,
    })
}
