//! Connections, weighted tensor fields and covariant differentiation.
//!
//! A [`Tensor`] of shape `(p, q)` stores `n^(p+q)` components in row-major
//! order over the index tuple `(upper_1..upper_p, lower_1..lower_q)`. A
//! covariant derivative prepends its new index to the lower block, so the
//! component `[.., a, b, c]` of `∇∇∇T` is `∇_a ∇_b ∇_c T`.

use num_traits::Zero;
use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;

/// Coefficient type of a tensor field: anything that forms a module over the
/// polynomials and admits coordinate partial derivatives.
pub trait Component: Clone + PartialEq + fmt::Debug {
    fn zero(n: usize) -> Self;
    fn dim(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn accumulate(&mut self, rhs: &Self);
    /// `self += factor * rhs`
    fn add_product(&mut self, factor: &Poly, rhs: &Self);
    /// `self -= factor * rhs`
    fn sub_product(&mut self, factor: &Poly, rhs: &Self);
    fn scale(&self, r: &Rational) -> Self;
    fn partial(&self, i: usize) -> Self;
}

impl Component for Poly {
    fn zero(n: usize) -> Self {
        Poly::zero(n)
    }

    fn dim(&self) -> usize {
        Poly::dim(self)
    }

    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }

    fn accumulate(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn add_product(&mut self, factor: &Poly, rhs: &Self) {
        if !factor.is_zero() && !rhs.is_zero() {
            *self += &(factor * rhs);
        }
    }

    fn sub_product(&mut self, factor: &Poly, rhs: &Self) {
        if !factor.is_zero() && !rhs.is_zero() {
            *self -= &(factor * rhs);
        }
    }

    fn scale(&self, r: &Rational) -> Self {
        Poly::scale(self, r)
    }

    fn partial(&self, i: usize) -> Self {
        Poly::partial(self, i)
    }
}

/// Mixed tensor field of contravariant rank `upper`, covariant rank `lower`
/// and density weight `weight`.
#[derive(Clone, PartialEq, Debug)]
pub struct Tensor<C> {
    n: usize,
    upper: usize,
    lower: usize,
    weight: Rational,
    components: Vec<C>,
}

/// Tensor field with polynomial components.
pub type TensorDensity = Tensor<Poly>;

fn decode(mut flat: usize, n: usize, rank: usize) -> Vec<usize> {
    let mut idx = vec![0; rank];
    for slot in (0..rank).rev() {
        idx[slot] = flat % n;
        flat /= n;
    }
    idx
}

impl<C: Component> Tensor<C> {
    pub fn new(
        n: usize,
        upper: usize,
        lower: usize,
        weight: Rational,
        components: Vec<C>,
    ) -> Result<Self> {
        let expected = n.pow((upper + lower) as u32);
        if components.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "expected {expected} components for shape ({upper},{lower}) at n={n}, got {}",
                components.len()
            )));
        }
        for c in &components {
            check_dim(n, c.dim())?;
        }
        Ok(Tensor {
            n,
            upper,
            lower,
            weight,
            components,
        })
    }

    pub fn from_fn(
        n: usize,
        upper: usize,
        lower: usize,
        weight: Rational,
        mut f: impl FnMut(&[usize]) -> C,
    ) -> Self {
        let rank = upper + lower;
        let components = (0..n.pow(rank as u32))
            .map(|flat| f(&decode(flat, n, rank)))
            .collect();
        Tensor {
            n,
            upper,
            lower,
            weight,
            components,
        }
    }

    pub fn zeros(n: usize, upper: usize, lower: usize, weight: Rational) -> Self {
        Self::from_fn(n, upper, lower, weight, |_| C::zero(n))
    }

    /// A weighted scalar `(0, 0, weight)`.
    pub fn scalar(value: C, weight: Rational) -> Self {
        let n = value.dim();
        Tensor {
            n,
            upper: 0,
            lower: 0,
            weight,
            components: vec![value],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn rank(&self) -> usize {
        self.upper + self.lower
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn with_weight(mut self, weight: Rational) -> Self {
        self.weight = weight;
        self
    }

    pub fn components(&self) -> &[C] {
        &self.components
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.n);
            acc * self.n + i
        })
    }

    /// Component at `(upper indices.., lower indices..)`, 0-based.
    pub fn get(&self, idx: &[usize]) -> &C {
        &self.components[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: C) {
        let f = self.flat(idx);
        self.components[f] = value;
    }

    /// The single component of a rank-0 tensor.
    pub fn value(&self) -> &C {
        assert_eq!(self.rank(), 0, "value() on a tensor of positive rank");
        &self.components[0]
    }

    /// Iterates `(index tuple, component)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &C)> + '_ {
        let rank = self.rank();
        self.components
            .iter()
            .enumerate()
            .map(move |(f, c)| (decode(f, self.n, rank), c))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Component::is_zero)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        check_dim(self.n, other.n)?;
        if self.upper != other.upper || self.lower != other.lower {
            return Err(Error::ShapeMismatch(format!(
                "({},{}) vs ({},{})",
                self.upper, self.lower, other.upper, other.lower
            )));
        }
        if self.weight != other.weight {
            return Err(Error::WeightMismatch {
                expected: Box::new(self.weight.clone()),
                found: Box::new(other.weight.clone()),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.components.iter_mut().zip(&other.components) {
            a.accumulate(b);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Tensor {
            n: self.n,
            upper: self.upper,
            lower: self.lower,
            weight: self.weight.clone(),
            components: self.components.iter().map(|c| c.scale(r)).collect(),
        }
    }

    /// Multiplies every component by a polynomial; the weight is unchanged.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        let mut out = Self::zeros(self.n, self.upper, self.lower, self.weight.clone());
        for (o, c) in out.components.iter_mut().zip(&self.components) {
            o.add_product(p, c);
        }
        out
    }

    /// Contracts upper slot `u` against lower slot `l` (both 0-based within
    /// their blocks).
    pub fn contract(&self, u: usize, l: usize) -> Result<Self> {
        if u >= self.upper || l >= self.lower {
            return Err(Error::ShapeMismatch(format!(
                "cannot contract upper slot {u} with lower slot {l} of a ({},{}) tensor",
                self.upper, self.lower
            )));
        }
        let n = self.n;
        let lower_at = self.upper - 1 + l;
        Ok(Self::from_fn(
            n,
            self.upper - 1,
            self.lower - 1,
            self.weight.clone(),
            |idx| {
                let mut full = Vec::with_capacity(idx.len() + 2);
                full.extend_from_slice(&idx[..u]);
                full.push(0);
                full.extend_from_slice(&idx[u..lower_at]);
                full.push(0);
                full.extend_from_slice(&idx[lower_at..]);
                let mut acc = C::zero(n);
                for a in 0..n {
                    full[u] = a;
                    full[lower_at + 1] = a;
                    acc.accumulate(self.get(&full));
                }
                acc
            },
        ))
    }
}

/// Full contraction `Σ_I a^I b_I` of a purely contravariant polynomial tensor
/// against a purely covariant tensor of the same rank.
pub fn pair<C: Component>(a: &TensorDensity, b: &Tensor<C>) -> Result<C> {
    check_dim(a.dim(), b.dim())?;
    if a.lower() != 0 || b.upper() != 0 || a.upper() != b.lower() {
        return Err(Error::ShapeMismatch(format!(
            "cannot pair ({},{}) with ({},{})",
            a.upper(),
            a.lower(),
            b.upper(),
            b.lower()
        )));
    }
    let mut acc = C::zero(a.dim());
    for (x, y) in a.components().iter().zip(b.components()) {
        acc.add_product(x, y);
    }
    Ok(acc)
}

/// Torsion-free affine connection given by its Christoffel symbols `Γ^k_{ij}`.
#[derive(Clone, PartialEq, Debug)]
pub struct Connection {
    n: usize,
    gamma: Vec<Poly>,
    traces: Vec<Poly>,
}

impl Connection {
    /// `gamma[k*n*n + i*n + j]` is `Γ^k_{ij}`; must be symmetric in `i, j`.
    pub fn new(n: usize, gamma: Vec<Poly>) -> Result<Self> {
        if gamma.len() != n * n * n {
            return Err(Error::ShapeMismatch(format!(
                "connection needs {} components, got {}",
                n * n * n,
                gamma.len()
            )));
        }
        for g in &gamma {
            check_dim(n, g.dim())?;
        }
        for k in 0..n {
            for i in 0..n {
                for j in (i + 1)..n {
                    if gamma[k * n * n + i * n + j] != gamma[k * n * n + j * n + i] {
                        return Err(Error::AsymmetricConnection { k, i, j });
                    }
                }
            }
        }
        let traces = (0..n)
            .map(|m| {
                let mut t = Poly::zero(n);
                for a in 0..n {
                    t += &gamma[a * n * n + a * n + m];
                }
                t
            })
            .collect();
        Ok(Connection { n, gamma, traces })
    }

    /// `f(k, i, j)` is consulted for `i <= j` only and mirrored.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Poly) -> Result<Self> {
        let mut gamma = vec![Poly::zero(n); n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let g = f(k, i, j);
                    gamma[k * n * n + j * n + i] = g.clone();
                    gamma[k * n * n + i * n + j] = g;
                }
            }
        }
        Self::new(n, gamma)
    }

    /// All Christoffel symbols zero: the standard flat projective structure.
    pub fn flat(n: usize) -> Self {
        Self::new(n, vec![Poly::zero(n); n * n * n]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `Γ^k_{ij}`, 0-based.
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &Poly {
        &self.gamma[k * self.n * self.n + i * self.n + j]
    }

    /// `Σ_a Γ^a_{am}`.
    pub fn trace(&self, m: usize) -> &Poly {
        &self.traces[m]
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.iter().all(Poly::is_zero)
    }
}

/// Fully symmetric contravariant 3-tensor density of weight `δ`.
#[derive(Clone, PartialEq, Debug)]
pub struct Symbol3(TensorDensity);

impl Symbol3 {
    pub fn new(tensor: TensorDensity) -> Result<Self> {
        if tensor.upper() != 3 || tensor.lower() != 0 {
            return Err(Error::ShapeMismatch(format!(
                "a degree-3 symbol has shape (3,0), got ({},{})",
                tensor.upper(),
                tensor.lower()
            )));
        }
        for (idx, c) in tensor.iter() {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            let perms = [[i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]];
            if perms.iter().any(|p| tensor.get(p) != c) {
                return Err(Error::AsymmetricSymbol { i, j, k });
            }
        }
        Ok(Symbol3(tensor))
    }

    /// `f(i, j, k)` is consulted with `i <= j <= k` only.
    pub fn from_fn(n: usize, weight: Rational, mut f: impl FnMut(usize, usize, usize) -> Poly) -> Self {
        let mut t = TensorDensity::zeros(n, 3, 0, weight);
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let v = f(i, j, k);
                    for p in [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
                        t.set(&p, v.clone());
                    }
                }
            }
        }
        Symbol3(t)
    }

    pub fn tensor(&self) -> &TensorDensity {
        &self.0
    }

    pub fn into_tensor(self) -> TensorDensity {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn weight(&self) -> &Rational {
        self.0.weight()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Poly {
        self.0.get(&[i, j, k])
    }
}

/// Weighted covariant derivative; the new covariant index becomes the first
/// lower index.
///
/// `(∇T)^{u..}_{m l..} = ∂_m T + Σ_upper Γ^u_{ma} T[u→a] − Σ_lower Γ^a_{ml} T[l→a] − w Γ^a_{am} T`
pub fn covariant_derivative<C: Component>(t: &Tensor<C>, conn: &Connection) -> Result<Tensor<C>> {
    check_dim(t.dim(), conn.dim())?;
    let n = t.dim();
    let (p, q) = (t.upper(), t.lower());
    let weight = t.weight().clone();
    let has_weight = !weight.is_zero();
    let weighted_traces: Vec<Poly> = if has_weight {
        (0..n).map(|m| conn.trace(m).scale(&weight)).collect()
    } else {
        Vec::new()
    };
    let flat_conn = conn.is_flat();
    let mut base = vec![0usize; p + q];
    Ok(Tensor::from_fn(n, p, q + 1, weight.clone(), |idx| {
        let m = idx[p];
        base[..p].copy_from_slice(&idx[..p]);
        base[p..].copy_from_slice(&idx[p + 1..]);
        let mut v = t.get(&base).partial(m);
        if flat_conn {
            return v;
        }
        let mut probe = base.clone();
        for s in 0..p {
            let u = base[s];
            for a in 0..n {
                let g = conn.gamma(u, m, a);
                if g.is_zero() {
                    continue;
                }
                probe[s] = a;
                v.add_product(g, t.get(&probe));
            }
            probe[s] = u;
        }
        for s in p..(p + q) {
            let l = base[s];
            for a in 0..n {
                let g = conn.gamma(a, m, l);
                if g.is_zero() {
                    continue;
                }
                probe[s] = a;
                v.sub_product(g, t.get(&probe));
            }
            probe[s] = l;
        }
        if has_weight {
            v.sub_product(&weighted_traces[m], t.get(&base));
        }
        v
    }))
}

/// `k`-fold covariant derivative; the outermost derivative index comes first.
pub fn iterated_covariant<C: Component>(
    t: &Tensor<C>,
    conn: &Connection,
    k: usize,
) -> Result<Tensor<C>> {
    if k == 0 {
        return Err(Error::ShapeMismatch(
            "iterated covariant derivative needs k >= 1".into(),
        ));
    }
    let mut out = covariant_derivative(t, conn)?;
    for _ in 1..k {
        out = covariant_derivative(&out, conn)?;
    }
    Ok(out)
}

/// `∇_k P^{ijk}`: a symmetric `(2,0)` density of the symbol's weight.
pub fn divergence3(p: &Symbol3, conn: &Connection) -> Result<TensorDensity> {
    covariant_derivative(p.tensor(), conn)?.contract(2, 0)
}

/// The projectively equivalent connection
/// `Γ̃^k_{ij} = Γ^k_{ij} + δ^k_i ω_j + δ^k_j ω_i`.
pub fn projective_shift(conn: &Connection, omega: &TensorDensity) -> Result<Connection> {
    check_dim(conn.dim(), omega.dim())?;
    if omega.upper() != 0 || omega.lower() != 1 || !omega.weight().is_zero() {
        return Err(Error::ShapeMismatch(
            "projective shift needs a one-form of shape (0,1) and weight 0".into(),
        ));
    }
    let n = conn.dim();
    Connection::from_fn(n, |k, i, j| {
        let mut g = conn.gamma(k, i, j).clone();
        if i == k {
            g += omega.get(&[j]);
        }
        if j == k {
            g += omega.get(&[i]);
        }
        g
    })
}

/// Sign and trace convention for the Ricci tensor.
///
/// With `R^ρ_{σμν} = ∂_μ Γ^ρ_{νσ} − ∂_ν Γ^ρ_{μσ} + Γ^ρ_{μλ} Γ^λ_{νσ} − Γ^ρ_{νλ} Γ^λ_{μσ}`:
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RicciConvention {
    /// `R_{ij} = R^m_{imj} = ∂_m Γ^m_{ij} − ∂_j Γ^m_{mi} + Γ^m_{mp} Γ^p_{ij} − Γ^m_{jp} Γ^p_{mi}`.
    Standard,
    /// `R_{ij} = R^m_{ijm}`, the negative of [`RicciConvention::Standard`].
    /// This is the convention under which the quantization coefficients make
    /// the map projectively invariant.
    #[default]
    OppositeTrace,
    /// `∂_m Γ^m_{ij} − ∂_i Γ^m_{mj} + Γ^m_{mp} Γ^p_{ij} − Γ^m_{ip} Γ^p_{mj}`: the
    /// transpose of `Standard`. Differs from it only in the antisymmetric part.
    Transposed,
}

/// Ricci tensor in the default ([`RicciConvention::OppositeTrace`]) convention.
pub fn ricci(conn: &Connection) -> TensorDensity {
    ricci_with(conn, RicciConvention::default())
}

pub fn ricci_with(conn: &Connection, convention: RicciConvention) -> TensorDensity {
    let n = conn.dim();
    let standard = |i: usize, j: usize| {
        let mut r = -conn.trace(i).partial(j);
        for m in 0..n {
            r += &conn.gamma(m, i, j).partial(m);
            r.add_product(conn.trace(m), conn.gamma(m, i, j));
            for p in 0..n {
                r.sub_product(conn.gamma(m, j, p), conn.gamma(p, m, i));
            }
        }
        r
    };
    TensorDensity::from_fn(n, 0, 2, Rational::zero(), |idx| {
        let (i, j) = (idx[0], idx[1]);
        match convention {
            RicciConvention::Standard => standard(i, j),
            RicciConvention::OppositeTrace => -standard(i, j),
            RicciConvention::Transposed => standard(j, i),
        }
    })
}
