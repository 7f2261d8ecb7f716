//! Problem documents: TOML with explicit 1-based index keys.
//!
//! ```toml
//! n = 2
//! lambda = "0"
//! delta = "1/2"
//! omega = ["x2", "1"]
//! phi = "x1^2"
//!
//! [connection]
//! "1,1,1" = "x2"
//!
//! [symbol]
//! "1,1,1" = "x1"
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use projquant_core::rational::int;
use projquant_core::{
    parse_poly, parse_rational, Connection, Poly, Rational, Symbol3, TensorDensity,
};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemDocument {
    pub n: usize,
    pub lambda: Rational,
    pub delta: Rational,
    pub t: Option<Rational>,
    /// `None` when the document has no `[connection]` table (flat).
    pub connection: Option<Connection>,
    pub symbol: Option<Symbol3>,
    pub omega: Option<TensorDensity>,
    pub phi: Option<Poly>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    n: i64,
    lambda: RawRational,
    delta: RawRational,
    t: Option<RawRational>,
    connection: Option<BTreeMap<String, String>>,
    symbol: Option<BTreeMap<String, String>>,
    omega: Option<Vec<String>>,
    phi: Option<String>,
}

fn rational_field(name: &str, raw: RawRational) -> Result<Rational, CliError> {
    match raw {
        RawRational::Int(v) => Ok(int(v)),
        RawRational::Text(s) => parse_rational(&s)
            .map_err(|e| CliError::Input(format!("{name} = {s:?}: {e}"))),
    }
}

fn poly_field(name: &str, text: &str, n: usize) -> Result<Poly, CliError> {
    parse_poly(text, n).map_err(|e| CliError::Input(format!("{name} = {text:?}: {e}")))
}

fn index_key(section: &str, key: &str, n: usize) -> Result<[usize; 3], CliError> {
    let bad = |why: &str| CliError::Input(format!("{section} key {key:?}: {why}"));
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad("expected three comma-separated indices"));
    }
    let mut out = [0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        let v: usize = p.parse().map_err(|_| bad("indices must be positive integers"))?;
        if v == 0 || v > n {
            return Err(bad(&format!("index {v} out of range 1..={n}")));
        }
        *slot = v - 1;
    }
    Ok(out)
}

/// Collects entries under a normalized key, rejecting contradictory duplicates.
fn normalized(
    section: &str,
    entries: &BTreeMap<String, String>,
    n: usize,
    normalize: impl Fn([usize; 3]) -> [usize; 3],
) -> Result<HashMap<[usize; 3], Poly>, CliError> {
    let mut out: HashMap<[usize; 3], (String, Poly)> = HashMap::new();
    for (key, text) in entries {
        let idx = normalize(index_key(section, key, n)?);
        let value = poly_field(&format!("{section}.{key:?}"), text, n)?;
        if let Some((prev_key, prev)) = out.get(&idx) {
            if prev != &value {
                return Err(CliError::Input(format!(
                    "{section} entries {prev_key:?} and {key:?} contradict the index symmetry"
                )));
            }
        } else {
            out.insert(idx, (key.clone(), value));
        }
    }
    Ok(out.into_iter().map(|(k, (_, v))| (k, v)).collect())
}

impl ProblemDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawDocument =
            toml::from_str(text).map_err(|e| CliError::Input(format!("document: {e}")))?;
        if raw.n < 1 {
            return Err(CliError::Input(format!("n must be positive (got {})", raw.n)));
        }
        let n = raw.n as usize;
        let lambda = rational_field("lambda", raw.lambda)?;
        let delta = rational_field("delta", raw.delta)?;
        let t = raw.t.map(|v| rational_field("t", v)).transpose()?;

        let connection = match raw.connection {
            None => None,
            Some(entries) => {
                let map = normalized("connection", &entries, n, |[k, i, j]| {
                    [k, i.min(j), i.max(j)]
                })?;
                let conn = Connection::from_fn(n, |k, i, j| {
                    map.get(&[k, i, j]).cloned().unwrap_or_else(|| Poly::zero(n))
                })?;
                Some(conn)
            }
        };

        let symbol = match raw.symbol {
            None => None,
            Some(entries) => {
                let map = normalized("symbol", &entries, n, |mut idx| {
                    idx.sort_unstable();
                    idx
                })?;
                Some(Symbol3::from_fn(n, delta.clone(), |i, j, k| {
                    map.get(&[i, j, k]).cloned().unwrap_or_else(|| Poly::zero(n))
                }))
            }
        };

        let omega = match raw.omega {
            None => None,
            Some(list) => {
                if list.len() != n {
                    return Err(CliError::Input(format!(
                        "omega has {} entries, expected n = {n}",
                        list.len()
                    )));
                }
                let comps = list
                    .iter()
                    .enumerate()
                    .map(|(i, s)| poly_field(&format!("omega[{}]", i + 1), s, n))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(TensorDensity::new(n, 0, 1, int(0), comps)?)
            }
        };

        let phi = raw.phi.map(|s| poly_field("phi", &s, n)).transpose()?;

        Ok(ProblemDocument {
            n,
            lambda,
            delta,
            t,
            connection,
            symbol,
            omega,
            phi,
        })
    }

    pub fn phi_density(&self) -> Option<TensorDensity> {
        self.phi
            .as_ref()
            .map(|p| TensorDensity::scalar(p.clone(), self.lambda.clone()))
    }

    pub fn connection_or_flat(&self) -> Connection {
        self.connection
            .clone()
            .unwrap_or_else(|| Connection::flat(self.n))
    }

    /// Canonical text: fixed key order, nonzero entries only, symbol keys with
    /// `i ≤ j ≤ k`, connection keys with `i ≤ j`.
    pub fn to_canonical(&self) -> String {
        let q = |s: String| toml::Value::String(s).to_string();
        let mut out = String::new();
        writeln!(out, "n = {}", self.n).unwrap();
        writeln!(out, "lambda = {}", q(self.lambda.to_string())).unwrap();
        writeln!(out, "delta = {}", q(self.delta.to_string())).unwrap();
        if let Some(t) = &self.t {
            writeln!(out, "t = {}", q(t.to_string())).unwrap();
        }
        if let Some(om) = &self.omega {
            let items: Vec<String> = om.components().iter().map(|p| q(p.to_string())).collect();
            writeln!(out, "omega = [{}]", items.join(", ")).unwrap();
        }
        if let Some(phi) = &self.phi {
            writeln!(out, "phi = {}", q(phi.to_string())).unwrap();
        }
        let n = self.n;
        if let Some(conn) = &self.connection {
            out.push_str("\n[connection]\n");
            for k in 0..n {
                for i in 0..n {
                    for j in i..n {
                        let g = conn.gamma(k, i, j);
                        if !g.is_zero() {
                            let key = format!("{},{},{}", k + 1, i + 1, j + 1);
                            writeln!(out, "{} = {}", q(key), q(g.to_string())).unwrap();
                        }
                    }
                }
            }
        }
        if let Some(sym) = &self.symbol {
            out.push_str("\n[symbol]\n");
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        let p = sym.get(i, j, k);
                        if !p.is_zero() {
                            let key = format!("{},{},{}", i + 1, j + 1, k + 1);
                            writeln!(out, "{} = {}", q(key), q(p.to_string())).unwrap();
                        }
                    }
                }
            }
        }
        out
    }
}
