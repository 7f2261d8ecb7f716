//! Seeded generators for randomized verification instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Monomial, Poly};
use crate::rational::{rat, Rational};
use crate::tensor::{Connection, Symbol3, TensorDensity};

/// Reproducible source of random polynomials, connections, forms and symbols.
pub struct RandomSource {
    rng: ChaCha8Rng,
}

fn monomials(n: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(n)];
    for _ in 0..max_degree {
        let mut next = out.clone();
        for m in &out {
            for i in 0..n {
                next.push(m.bump(i));
            }
        }
        next.sort();
        next.dedup();
        out = next;
    }
    out
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Small nonzero-or-zero rational `p/q` with `|p| ≤ 4`, `1 ≤ q ≤ 3`.
    pub fn rational(&mut self) -> Rational {
        rat(self.rng.gen_range(-4..=4), self.rng.gen_range(1..=3))
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if r != rat(0, 1) {
                return r;
            }
        }
    }

    /// Sparse polynomial of total degree at most `max_degree`; each monomial
    /// is present with probability one half.
    pub fn poly(&mut self, n: usize, max_degree: u32) -> Poly {
        let terms: Vec<(Monomial, Rational)> = monomials(n, max_degree)
            .into_iter()
            .filter_map(|m| self.rng.gen_bool(0.5).then(|| (m, self.nonzero_rational())))
            .collect();
        Poly::from_terms(n, terms)
    }

    pub fn connection(&mut self, n: usize, max_degree: u32) -> Connection {
        Connection::from_fn(n, |_, _, _| self.poly(n, max_degree)).expect("symmetric by construction")
    }

    pub fn one_form(&mut self, n: usize, max_degree: u32) -> TensorDensity {
        TensorDensity::from_fn(n, 0, 1, rat(0, 1), |_| self.poly(n, max_degree))
    }

    pub fn density(&mut self, n: usize, weight: Rational, max_degree: u32) -> TensorDensity {
        TensorDensity::scalar(self.poly(n, max_degree), weight)
    }

    pub fn symbol(&mut self, n: usize, weight: Rational, max_degree: u32) -> Symbol3 {
        Symbol3::from_fn(n, weight, |_, _, _| self.poly(n, max_degree))
    }
}
