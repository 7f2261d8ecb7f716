//! Coefficients of the projectively invariant quantization, the map itself,
//! and third-order operators in canonical coordinate form.

use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

use crate::diffexpr::DiffExpr;
use crate::error::{check_dim, Error, Result};
use crate::poly::{Monomial, Poly};
use crate::rational::{int, rat, Rational};
use crate::tensor::{
    covariant_derivative, divergence3, pair, ricci_with, Component, Connection,
    RicciConvention, Symbol3, Tensor, TensorDensity,
};

/// Dimension and density weights: the operator maps `λ`-densities to
/// `μ`-densities and the symbol has weight `δ = μ − λ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Weights {
    n: usize,
    lambda: Rational,
    delta: Rational,
}

impl Weights {
    pub fn new(n: usize, lambda: Rational, delta: Rational) -> Result<Self> {
        if n <= 1 {
            return Err(Error::DimensionTooSmall(n));
        }
        Ok(Weights { n, lambda, delta })
    }

    /// Validates a caller-supplied `μ` against `λ + δ`.
    pub fn with_mu(n: usize, lambda: Rational, delta: Rational, mu: Rational) -> Result<Self> {
        if mu != &lambda + &delta {
            return Err(Error::InconsistentMu {
                lambda: Box::new(lambda),
                delta: Box::new(delta),
                mu: Box::new(mu),
            });
        }
        Self::new(n, lambda, delta)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn mu(&self) -> Rational {
        &self.lambda + &self.delta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Alpha,
    Beta1,
    Beta2,
    Eta1,
    Eta2,
    Eta3,
}

impl Coefficient {
    pub const ALL: [Coefficient; 6] = [
        Coefficient::Alpha,
        Coefficient::Beta1,
        Coefficient::Beta2,
        Coefficient::Eta1,
        Coefficient::Eta2,
        Coefficient::Eta3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Coefficient::Alpha => "alpha",
            Coefficient::Beta1 => "beta1",
            Coefficient::Beta2 => "beta2",
            Coefficient::Eta1 => "eta1",
            Coefficient::Eta2 => "eta2",
            Coefficient::Eta3 => "eta3",
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Coefficient {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Coefficient::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| format!("unknown coefficient {s:?} (expected one of alpha, beta1, beta2, eta1, eta2, eta3)"))
    }
}

/// The six constants `α, β1, β2, η1, η2, η3` of the quantization formula.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoefficientSet {
    pub alpha: Rational,
    pub beta1: Rational,
    pub beta2: Rational,
    pub eta1: Rational,
    pub eta2: Rational,
    pub eta3: Rational,
}

impl CoefficientSet {
    pub fn get(&self, c: Coefficient) -> &Rational {
        match c {
            Coefficient::Alpha => &self.alpha,
            Coefficient::Beta1 => &self.beta1,
            Coefficient::Beta2 => &self.beta2,
            Coefficient::Eta1 => &self.eta1,
            Coefficient::Eta2 => &self.eta2,
            Coefficient::Eta3 => &self.eta3,
        }
    }

    pub fn get_mut(&mut self, c: Coefficient) -> &mut Rational {
        match c {
            Coefficient::Alpha => &mut self.alpha,
            Coefficient::Beta1 => &mut self.beta1,
            Coefficient::Beta2 => &mut self.beta2,
            Coefficient::Eta1 => &mut self.eta1,
            Coefficient::Eta2 => &mut self.eta2,
            Coefficient::Eta3 => &mut self.eta3,
        }
    }

    /// Copy with `amount` added to one coefficient.
    pub fn perturbed(&self, c: Coefficient, amount: &Rational) -> Self {
        let mut out = self.clone();
        *out.get_mut(c) += amount;
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coefficient, &Rational)> {
        Coefficient::ALL.into_iter().map(move |c| (c, self.get(c)))
    }
}

impl fmt::Display for CoefficientSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(c, v)| format!("{c}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// The three weights `δ` at which a denominator of the generic coefficients
/// vanishes: `(n+3)/(n+1), (n+4)/(n+1), (n+5)/(n+1)`.
pub fn resonant_deltas(n: usize) -> [Rational; 3] {
    let n = n as i64;
    [rat(n + 3, n + 1), rat(n + 4, n + 1), rat(n + 5, n + 1)]
}

fn resonant_list(n: usize) -> String {
    resonant_deltas(n)
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Generic-weight coefficients.
pub fn resolve_coefficients(w: &Weights) -> Result<CoefficientSet> {
    if w.n <= 1 {
        return Err(Error::DimensionTooSmall(w.n));
    }
    if resonant_deltas(w.n).contains(&w.delta) {
        return Err(Error::ResonantDelta {
            n: w.n,
            delta: w.delta.clone(),
        });
    }
    let np1 = int(w.n as i64 + 1);
    let nm1 = int(w.n as i64 - 1);
    let lam = &w.lambda * &np1;
    let shifted = (Rational::one() - &w.delta) * &np1;

    let alpha = (int(6) + int(3) * &lam) / (int(4) + &shifted);
    let beta1 = (Rational::one() + &lam) / (int(3) + &shifted) * &alpha;
    let beta2 = (int(2) + int(3) * &lam - (int(4) + &shifted) * &beta1) / &nm1;
    let eta1 = &lam / (int(6) + int(3) * &shifted) * &beta1;
    let eta3 = (&lam - &eta1 * (int(4) + &shifted)) / &nm1;
    let eta2 = (&lam * &alpha - (int(10) + int(3) * &shifted) * &eta1) / &nm1;
    Ok(CoefficientSet {
        alpha,
        beta1,
        beta2,
        eta1,
        eta2,
        eta3,
    })
}

/// One row of the resonant table: the weights at which a quantization exists
/// for resonant `δ`, with coefficients depending on a free parameter `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonantRow {
    pub n: usize,
    pub delta: Rational,
    pub lambda: Rational,
    pub mu: Rational,
    row: usize,
}

impl ResonantRow {
    pub fn coefficients(&self, t: &Rational) -> CoefficientSet {
        let n = self.n as i64;
        let s = rat(1, 1 - n);
        let s3 = rat(1, 3 - 3 * n);
        let t = t.clone();
        let one = Rational::one();
        let (alpha, beta1, beta2, eta1, eta2, eta3) = match self.row {
            0 => (
                t.clone(),
                t.clone(),
                int(4) * &s,
                &t * rat(1, 3),
                rat(4, 3) * &t * &s,
                int(2) * &s,
            ),
            1 => (
                Rational::zero(),
                t.clone(),
                (int(4) + &t) * &s,
                rat(2, 3) * &t,
                rat(2, 3) * &t * &s,
                (int(6) + int(2) * &t) * &s3,
            ),
            2 => (
                int(3),
                t.clone(),
                (&one + &t) * &s,
                &t * rat(1, 3),
                (int(9) + &t) * &s3,
                (int(3) + &t) * &s3,
            ),
            3 => (
                Rational::zero(),
                Rational::zero(),
                int(4) * &s,
                t.clone(),
                int(4) * &s * &t,
                int(2) * (&one + &t) * &s,
            ),
            4 => (
                rat(3, 2),
                Rational::zero(),
                s.clone(),
                t.clone(),
                rat(1, 2) * (int(8) * &t + int(3)) * &s,
                (&one + int(2) * &t) * &s,
            ),
            5 => (
                int(3),
                int(3),
                int(4) * &s,
                t.clone(),
                int(4) * &s * &t,
                int(2) * &s * &t,
            ),
            _ => unreachable!("resonant table has six rows"),
        };
        CoefficientSet {
            alpha,
            beta1,
            beta2,
            eta1,
            eta2,
            eta3,
        }
    }

    pub fn weights(&self) -> Result<Weights> {
        Weights::with_mu(self.n, self.lambda.clone(), self.delta.clone(), self.mu.clone())
    }
}

/// The six `(δ, λ, μ)` rows admitting a quantization at resonant `δ`.
pub fn resonant_rows(n: usize) -> Vec<ResonantRow> {
    let m = n as i64;
    let d = |a: i64| rat(m + a, m + 1);
    let l = |a: i64| rat(a, m + 1);
    [
        (d(5), l(-2), d(3)),
        (d(4), l(-2), d(2)),
        (d(4), l(-1), d(3)),
        (d(3), l(-2), d(1)),
        (d(3), l(-1), d(2)),
        (d(3), l(0), d(3)),
    ]
    .into_iter()
    .enumerate()
    .map(|(row, (delta, lambda, mu))| ResonantRow {
        n,
        delta,
        lambda,
        mu,
        row,
    })
    .collect()
}

/// Coefficients at a resonant `δ` from the table row matching `(δ, λ)`.
pub fn resolve_coefficients_resonant(
    n: usize,
    delta: &Rational,
    lambda: &Rational,
    t: &Rational,
) -> Result<CoefficientSet> {
    if n <= 1 {
        return Err(Error::DimensionTooSmall(n));
    }
    let row = resonant_rows(n)
        .into_iter()
        .find(|r| &r.delta == delta && &r.lambda == lambda)
        .ok_or_else(|| Error::NoMatchingRow {
            n,
            delta: Box::new(delta.clone()),
            lambda: Box::new(lambda.clone()),
            resonant: resonant_list(n),
        })?;
    row.weights()?;
    Ok(row.coefficients(t))
}

fn multi_index(n: usize, indices: &[usize]) -> Monomial {
    let mut exps = vec![0u32; n];
    for &i in indices {
        exps[i] += 1;
    }
    Monomial::from_exponents(&exps)
}

/// Number of orderings of the index multiset described by `alpha`.
fn orderings(alpha: &Monomial) -> Rational {
    let fact = |k: u32| (1..=k as i64).product::<i64>();
    let total = fact(alpha.degree());
    let denom: i64 = alpha.exponents().iter().map(|&e| fact(e)).product();
    int(total / denom)
}

/// Third-order operator `A3^{ijk}∂_i∂_j∂_k + A2^{ij}∂_i∂_j + A1^k∂_k + A0`
/// from `λ`-densities to `μ`-densities.
///
/// Stored as a [`DiffExpr`], so the symmetric parts of `A3` and `A2` are the
/// only parts that survive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diff3Operator {
    weights: Weights,
    expr: DiffExpr,
}

impl Diff3Operator {
    pub fn zero(weights: Weights) -> Self {
        let n = weights.n;
        Diff3Operator {
            weights,
            expr: DiffExpr::zero(n),
        }
    }

    pub fn from_expr(weights: Weights, expr: DiffExpr) -> Result<Self> {
        check_dim(weights.n, expr.dim())?;
        if expr.order() > 3 {
            return Err(Error::OrderTooHigh(expr.order()));
        }
        Ok(Diff3Operator { weights, expr })
    }

    /// Builds the operator from coefficient tensors of shapes `(3,0)`, `(2,0)`,
    /// `(1,0)` and a scalar; non-symmetric parts of `a3`, `a2` drop out.
    pub fn from_components(
        weights: Weights,
        a3: &TensorDensity,
        a2: &TensorDensity,
        a1: &TensorDensity,
        a0: &Poly,
    ) -> Result<Self> {
        let n = weights.n;
        let mut expr = DiffExpr::zero(n);
        for (rank, t) in [(3, a3), (2, a2), (1, a1)] {
            check_dim(n, t.dim())?;
            if t.upper() != rank || t.lower() != 0 {
                return Err(Error::ShapeMismatch(format!(
                    "order-{rank} coefficient must have shape ({rank},0), got ({},{})",
                    t.upper(),
                    t.lower()
                )));
            }
            for (idx, c) in t.iter() {
                expr.accumulate(&DiffExpr::derivative(n, multi_index(n, &idx), c.clone()));
            }
        }
        check_dim(n, a0.dim())?;
        expr.add_product(a0, &DiffExpr::identity(n));
        Self::from_expr(weights, expr)
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.n
    }

    pub fn expr(&self) -> &DiffExpr {
        &self.expr
    }

    pub fn is_zero(&self) -> bool {
        self.expr.is_zero()
    }

    /// Symmetric coefficient tensor of the order-`k` part (`k ≤ 3`); weight `δ`.
    pub fn coefficients(&self, k: usize) -> TensorDensity {
        let n = self.weights.n;
        TensorDensity::from_fn(n, k, 0, self.weights.delta.clone(), |idx| {
            let alpha = multi_index(n, idx);
            let c = self.expr.coefficient(&alpha);
            c.scale(&orderings(&alpha).recip())
        })
    }

    pub fn a3(&self) -> TensorDensity {
        self.coefficients(3)
    }

    pub fn a2(&self) -> TensorDensity {
        self.coefficients(2)
    }

    pub fn a1(&self) -> TensorDensity {
        self.coefficients(1)
    }

    pub fn a0(&self) -> Poly {
        self.expr.coefficient(&Monomial::one(self.weights.n))
    }

    /// Nonzero coefficients labelled `A3^{i,j,k}` (1-based, `i ≤ j ≤ k`) down
    /// to `A0`, in a fixed order.
    pub fn labelled_components(&self) -> Vec<(String, Poly)> {
        let mut out = Vec::new();
        for k in (1..=3usize).rev() {
            let t = self.coefficients(k);
            for (idx, c) in t.iter() {
                if c.is_zero() || idx.windows(2).any(|w| w[0] > w[1]) {
                    continue;
                }
                let label: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
                out.push((format!("A{k}^{{{}}}", label.join(",")), c.clone()));
            }
        }
        let a0 = self.a0();
        if !a0.is_zero() {
            out.push(("A0".to_string(), a0));
        }
        out
    }

    fn compatible(&self, other: &Diff3Operator) -> Result<()> {
        check_dim(self.dim(), other.dim())?;
        if self.weights.lambda != other.weights.lambda {
            return Err(Error::WeightMismatch {
                expected: Box::new(self.weights.lambda.clone()),
                found: Box::new(other.weights.lambda.clone()),
            });
        }
        if self.weights.delta != other.weights.delta {
            return Err(Error::WeightMismatch {
                expected: Box::new(self.weights.mu()),
                found: Box::new(other.weights.mu()),
            });
        }
        Ok(())
    }

    /// `self − other`.
    pub fn difference(&self, other: &Diff3Operator) -> Result<Diff3Operator> {
        self.compatible(other)?;
        Ok(Diff3Operator {
            weights: self.weights.clone(),
            expr: self.expr.sub(&other.expr),
        })
    }
}

/// Componentwise equality after symmetrization; differing weights are an
/// error rather than inequality.
pub fn operator_equal(a: &Diff3Operator, b: &Diff3Operator) -> Result<bool> {
    a.compatible(b)?;
    Ok(a.expr == b.expr)
}

/// Applies the operator to a `λ`-density, giving a `μ`-density.
pub fn apply(a: &Diff3Operator, phi: &TensorDensity) -> Result<TensorDensity> {
    check_dim(a.dim(), phi.dim())?;
    if phi.rank() != 0 {
        return Err(Error::ShapeMismatch("operators act on scalar densities".into()));
    }
    if phi.weight() != a.weights.lambda() {
        return Err(Error::WeightMismatch {
            expected: Box::new(a.weights.lambda.clone()),
            found: Box::new(phi.weight().clone()),
        });
    }
    Ok(TensorDensity::scalar(a.expr.apply(phi.value()), a.weights.mu()))
}

/// The quantization map with the default Ricci convention.
pub fn quantize(
    p: &Symbol3,
    conn: &Connection,
    w: &Weights,
    c: &CoefficientSet,
) -> Result<Diff3Operator> {
    quantize_with(p, conn, w, c, RicciConvention::default())
}

/// ```text
/// P^{ijk}∇_i∇_j∇_k + α ∇_kP^{ijk} ∇_i∇_j + (β1 ∇_i∇_jP^{ijk} + β2 P^{ijk}R_{ij}) ∇_k
///   + η1 ∇_i∇_j∇_kP^{ijk} + η2 R_{ij}∇_kP^{ijk} + η3 ∇_iR_{jk} P^{ijk}
/// ```
/// expanded into canonical coordinate form.
pub fn quantize_with(
    p: &Symbol3,
    conn: &Connection,
    w: &Weights,
    c: &CoefficientSet,
    convention: RicciConvention,
) -> Result<Diff3Operator> {
    let n = w.n;
    check_dim(n, p.dim())?;
    check_dim(n, conn.dim())?;
    if p.weight() != w.delta() {
        return Err(Error::WeightMismatch {
            expected: Box::new(w.delta.clone()),
            found: Box::new(p.weight().clone()),
        });
    }

    // the generic λ-density and its covariant derivatives, as operators
    let phi = Tensor::scalar(DiffExpr::identity(n), w.lambda.clone());
    let d1 = covariant_derivative(&phi, conn)?;
    let d2 = covariant_derivative(&d1, conn)?;
    let d3 = covariant_derivative(&d2, conn)?;

    // ∇_kP^{ijk}, then ∇_j∇_kP^{ijk} and ∇_i∇_j∇_kP^{ijk}; contraction commutes with ∇
    let div = divergence3(p, conn)?;
    let div2 = covariant_derivative(&div, conn)?.contract(0, 0)?;
    let div3 = covariant_derivative(&div2, conn)?.contract(0, 0)?;

    let ric = ricci_with(conn, convention);
    let dric = covariant_derivative(&ric, conn)?;
    // P^{ijk} R_{ij}
    let p_ric = TensorDensity::from_fn(n, 1, 0, w.delta.clone(), |idx| {
        let k = idx[0];
        let mut acc = Poly::zero(n);
        for i in 0..n {
            for j in 0..n {
                acc.add_product(p.get(i, j, k), ric.get(&[i, j]));
            }
        }
        acc
    });

    let mut expr = pair(p.tensor(), &d3)?;
    expr.accumulate(&pair(&div, &d2)?.scale(&c.alpha));
    let first_order = div2.scale(&c.beta1).checked_add(&p_ric.scale(&c.beta2))?;
    expr.accumulate(&pair(&first_order, &d1)?);

    let mut zeroth = div3.value().scale(&c.eta1);
    zeroth += &pair(&div, &ric)?.scale(&c.eta2);
    zeroth += &pair(p.tensor(), &dric)?.scale(&c.eta3);
    expr.add_product(&zeroth, &DiffExpr::identity(n));

    Diff3Operator::from_expr(w.clone(), expr)
}
