//! Test-only oracles, written independently of the library's tensor code:
//! tensors are plain index maps and every formula is expanded by brute force.
#![allow(dead_code)]

use std::collections::HashMap;

use projquant_core::rational::Rational;
use projquant_core::{parse_poly, CoefficientSet, Connection, Poly, RicciConvention, Symbol3};

pub fn p(text: &str, n: usize) -> Poly {
    parse_poly(text, n).unwrap()
}

pub fn all_indices(n: usize, rank: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |a| {
                    let mut v = prefix.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Brute-force tensor: `upper` contravariant slots followed by lower slots.
#[derive(Clone, Debug)]
pub struct RawTensor {
    pub n: usize,
    pub upper: usize,
    pub lower: usize,
    pub weight: Rational,
    pub c: HashMap<Vec<usize>, Poly>,
}

impl RawTensor {
    pub fn scalar(phi: Poly, weight: Rational) -> Self {
        let n = phi.dim();
        let mut c = HashMap::new();
        c.insert(vec![], phi);
        RawTensor { n, upper: 0, lower: 0, weight, c }
    }

    pub fn symbol(s: &Symbol3) -> Self {
        let n = s.dim();
        let mut c = HashMap::new();
        for idx in all_indices(n, 3) {
            c.insert(idx.clone(), s.get(idx[0], idx[1], idx[2]).clone());
        }
        RawTensor { n, upper: 3, lower: 0, weight: s.weight().clone(), c }
    }

    pub fn at(&self, idx: &[usize]) -> &Poly {
        &self.c[idx]
    }
}

pub fn gamma_of(conn: &Connection) -> impl Fn(usize, usize, usize) -> Poly + '_ {
    move |k, i, j| conn.gamma(k, i, j).clone()
}

/// `(∇T)` with the new index inserted right after the upper block.
pub fn nabla(t: &RawTensor, conn: &Connection) -> RawTensor {
    let n = t.n;
    let g = gamma_of(conn);
    let mut c = HashMap::new();
    for idx in all_indices(n, t.upper + t.lower + 1) {
        let m = idx[t.upper];
        let mut base: Vec<usize> = idx[..t.upper].to_vec();
        base.extend_from_slice(&idx[t.upper + 1..]);
        let mut v = t.at(&base).partial(m);
        for s in 0..t.upper {
            for a in 0..n {
                let mut b = base.clone();
                b[s] = a;
                v = &v + &(&g(base[s], m, a) * t.at(&b));
            }
        }
        for s in t.upper..(t.upper + t.lower) {
            for a in 0..n {
                let mut b = base.clone();
                b[s] = a;
                v = &v - &(&g(a, m, base[s]) * t.at(&b));
            }
        }
        let mut trace = Poly::zero(n);
        for a in 0..n {
            trace = &trace + &g(a, a, m);
        }
        v = &v - &(&trace.scale(&t.weight) * t.at(&base));
        c.insert(idx, v);
    }
    RawTensor { n, upper: t.upper, lower: t.lower + 1, weight: t.weight.clone(), c }
}

/// Full Riemann tensor `R^ρ_{σμν} = ∂_μΓ^ρ_{νσ} − ∂_νΓ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}`,
/// keyed `[ρ, σ, μ, ν]`.
pub fn riemann(conn: &Connection) -> HashMap<Vec<usize>, Poly> {
    let n = conn.dim();
    let g = gamma_of(conn);
    let mut out = HashMap::new();
    for idx in all_indices(n, 4) {
        let (r, s, mu, nu) = (idx[0], idx[1], idx[2], idx[3]);
        let mut v = &g(r, nu, s).partial(mu) - &g(r, mu, s).partial(nu);
        for l in 0..n {
            v = &v + &(&g(r, mu, l) * &g(l, nu, s));
            v = &v - &(&g(r, nu, l) * &g(l, mu, s));
        }
        out.insert(idx, v);
    }
    out
}

/// Ricci by tracing the Riemann tensor.
pub fn ricci_oracle(conn: &Connection, convention: RicciConvention) -> RawTensor {
    let n = conn.dim();
    let riem = riemann(conn);
    let mut c = HashMap::new();
    for idx in all_indices(n, 2) {
        let (i, j) = (idx[0], idx[1]);
        let mut v = Poly::zero(n);
        for m in 0..n {
            let term = match convention {
                RicciConvention::Standard => riem[&vec![m, i, m, j]].clone(),
                RicciConvention::OppositeTrace => riem[&vec![m, i, j, m]].clone(),
                RicciConvention::Transposed => riem[&vec![m, j, m, i]].clone(),
            };
            v = &v + &term;
        }
        c.insert(idx, v);
    }
    RawTensor { n, upper: 0, lower: 2, weight: Rational::from_integer(0.into()), c }
}

/// Evaluates the quantized operator on a concrete density by expanding every
/// term of the formula with full (uncontracted) covariant derivatives.
pub fn quantized_action(
    sym: &Symbol3,
    conn: &Connection,
    lambda: &Rational,
    c: &CoefficientSet,
    convention: RicciConvention,
    phi: &Poly,
) -> Poly {
    let n = sym.dim();
    let ph = RawTensor::scalar(phi.clone(), lambda.clone());
    let d1 = nabla(&ph, conn);
    let d2 = nabla(&d1, conn);
    let d3 = nabla(&d2, conn);
    let pt = RawTensor::symbol(sym);
    let p1 = nabla(&pt, conn);
    let p2 = nabla(&p1, conn);
    let p3 = nabla(&p2, conn);
    let r = ricci_oracle(conn, convention);
    let r1 = nabla(&r, conn);
    let mut out = Poly::zero(n);
    for idx in all_indices(n, 3) {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let pc = pt.at(&[i, j, k]);
        out = &out + &(pc * d3.at(&[i, j, k]));
        out = &out + &(&p1.at(&[i, j, k, k]).scale(&c.alpha) * d2.at(&[i, j]));
        let lin = &p2.at(&[i, j, k, i, j]).scale(&c.beta1) + &(pc * r.at(&[i, j])).scale(&c.beta2);
        out = &out + &(&lin * d1.at(&[k]));
        let zero = &(&p3.at(&[i, j, k, i, j, k]).scale(&c.eta1)
            + &(r.at(&[i, j]) * p1.at(&[i, j, k, k])).scale(&c.eta2))
            + &(r1.at(&[i, j, k]) * pc).scale(&c.eta3);
        out = &out + &(&zero * phi);
    }
    out
}

/// Flat-case action `P∂∂∂φ + α ∂_kP ∂∂φ + β1 ∂∂P ∂φ + η1 ∂∂∂P φ`, plain partials only.
pub fn flat_quantized_action(sym: &Symbol3, c: &CoefficientSet, phi: &Poly) -> Poly {
    let n = sym.dim();
    let mut out = Poly::zero(n);
    for idx in all_indices(n, 3) {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let pc = sym.get(i, j, k);
        out = &out + &(pc * &phi.partial(i).partial(j).partial(k));
        out = &out + &(&pc.partial(k).scale(&c.alpha) * &phi.partial(i).partial(j));
        out = &out + &(&pc.partial(i).partial(j).scale(&c.beta1) * &phi.partial(k));
        out = &out + &(&pc.partial(i).partial(j).partial(k).scale(&c.eta1) * phi);
    }
    out
}

/// `X^i ∂_i f + weight (∂_i X^i) f`.
pub fn lie_on_density(x: &[Poly], weight: &Rational, f: &Poly) -> Poly {
    let n = x.len();
    let mut out = Poly::zero(n);
    let mut div = Poly::zero(n);
    for i in 0..n {
        out = &out + &(&x[i] * &f.partial(i));
        div = &div + &x[i].partial(i);
    }
    &out + &(&div.scale(weight) * f)
}

/// Probe densities: all monomials of degree ≤ 3 plus a dense polynomial.
pub fn probes(n: usize) -> Vec<Poly> {
    let mut out = vec![Poly::one(n)];
    for deg in 1..=3 {
        for idx in all_indices(n, deg) {
            if idx.windows(2).all(|w| w[0] <= w[1]) {
                let mut m = Poly::one(n);
                for &i in &idx {
                    m = &m * &Poly::var(n, i);
                }
                out.push(m);
            }
        }
    }
    let dense = (0..n).fold(Poly::one(n), |acc, i| &acc + &Poly::var(n, i));
    out.push(dense.pow(4));
    out
}
