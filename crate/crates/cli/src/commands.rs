use projquant_core::random::RandomSource;
use projquant_core::rational::int;
use projquant_core::{
    apply, check_equivariance, covariant_derivative, divergence3, operator_equal,
    projective_shift, quantize_with, resolve_coefficients, resolve_coefficients_resonant,
    resonant_deltas, ricci_with, sl_generators, Coefficient, CoefficientSet, Error, Poly,
    Rational, RicciConvention, TensorDensity, VectorField, Weights,
};

use crate::document::ProblemDocument;
use crate::report::{entries, Entry, Report};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Coefficients,
    Quantize,
    VerifyProjective,
    VerifySl,
    ShiftIdentities,
    Ricci,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Coefficients => "coefficients",
            Command::Quantize => "quantize",
            Command::VerifyProjective => "verify-projective",
            Command::VerifySl => "verify-sl",
            Command::ShiftIdentities => "shift-identities",
            Command::Ricci => "ricci",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Overrides the document's `t`.
    pub t: Option<Rational>,
    pub perturb: Vec<(Coefficient, Rational)>,
    pub seed: Option<u64>,
    pub extra_fields: Vec<String>,
    pub convention: RicciConvention,
}

const SYMBOL_DEGREE: u32 = 2;
const OMEGA_DEGREE: u32 = 1;
const PHI_DEGREE: u32 = 3;

/// Fills missing symbol, ω and φ with random objects.
fn seed_document(doc: &mut ProblemDocument, seed: u64) {
    let mut rng = RandomSource::new(seed);
    let n = doc.n;
    if doc.symbol.is_none() {
        doc.symbol = Some(rng.symbol(n, doc.delta.clone(), SYMBOL_DEGREE));
    }
    if doc.omega.is_none() {
        doc.omega = Some(rng.one_form(n, OMEGA_DEGREE));
    }
    if doc.phi.is_none() {
        doc.phi = Some(rng.poly(n, PHI_DEGREE));
    }
}

fn missing(field: &str, command: Command) -> CliError {
    CliError::Usage(format!(
        "{} requires `{field}` in the document (or --seed)",
        command.name()
    ))
}

/// Resolved weights and coefficients, with a line describing how they were
/// obtained.
fn coefficients(
    doc: &ProblemDocument,
    opts: &Options,
) -> Result<(Weights, CoefficientSet, String), CliError> {
    let n = doc.n;
    let t = opts.t.as_ref().or(doc.t.as_ref());
    let (w, mut c, how) = if resonant_deltas(n).contains(&doc.delta) && n > 1 {
        let Some(t) = t else {
            return Err(Error::ResonantDelta {
                n,
                delta: doc.delta.clone(),
            }
            .into());
        };
        let c = resolve_coefficients_resonant(n, &doc.delta, &doc.lambda, t)?;
        let row = projquant_core::resonant_rows(n)
            .into_iter()
            .find(|r| r.delta == doc.delta && r.lambda == doc.lambda)
            .expect("resolver found the row");
        (row.weights()?, c, format!("resonant (t={t})"))
    } else {
        let w = Weights::new(n, doc.lambda.clone(), doc.delta.clone())?;
        let c = resolve_coefficients(&w)?;
        (w, c, "generic".to_string())
    };
    for (coef, amount) in &opts.perturb {
        c = c.perturbed(*coef, amount);
    }
    Ok((w, c, how))
}

fn coefficient_values(report: &mut Report, w: &Weights, how: String) {
    report.value("weights", format!("lambda={} delta={} mu={}", w.lambda(), w.delta(), w.mu()));
    report.value("coefficients", how);
}

pub fn run(command: Command, mut doc: ProblemDocument, opts: &Options) -> Result<Report, CliError> {
    let mut report = Report::new(command.name());
    if let Some(seed) = opts.seed {
        seed_document(&mut doc, seed);
        report.seeded_document = Some(doc.to_canonical());
    }
    match command {
        Command::Coefficients => {
            let (w, c, how) = coefficients(&doc, opts)?;
            report.summary = Some(c.to_string());
            coefficient_values(&mut report, &w, how);
            for (k, v) in c.iter() {
                report.value(k.name(), v);
            }
        }
        Command::Quantize => {
            let sym = doc.symbol.as_ref().ok_or_else(|| missing("symbol", command))?;
            let (w, c, how) = coefficients(&doc, opts)?;
            coefficient_values(&mut report, &w, how);
            let q = quantize_with(sym, &doc.connection_or_flat(), &w, &c, opts.convention)?;
            let comps = q.labelled_components();
            if comps.is_empty() {
                report.value("Q(P)", "0");
            }
            report.values.extend(entries(comps));
            if let Some(phi) = doc.phi_density() {
                report.value("Q(P)phi", apply(&q, &phi)?.value());
            }
        }
        Command::VerifyProjective => {
            let sym = doc.symbol.as_ref().ok_or_else(|| missing("symbol", command))?;
            let omega = doc.omega.as_ref().ok_or_else(|| missing("omega", command))?;
            let (w, c, how) = coefficients(&doc, opts)?;
            coefficient_values(&mut report, &w, how);
            let conn = doc.connection_or_flat();
            let shifted = projective_shift(&conn, omega)?;
            let a = quantize_with(sym, &conn, &w, &c, opts.convention)?;
            let b = quantize_with(sym, &shifted, &w, &c, opts.convention)?;
            let residual = if operator_equal(&a, &b)? {
                Vec::new()
            } else {
                entries(a.difference(&b)?.labelled_components())
            };
            report.check("Q^∇(P) == Q^∇̃(P)", residual);
            report.conclude();
        }
        Command::VerifySl => {
            if doc.connection.is_some() {
                return Err(CliError::Usage(
                    "verify-sl works on the flat connection; remove the [connection] table".into(),
                ));
            }
            let sym = doc.symbol.as_ref().ok_or_else(|| missing("symbol", command))?;
            let (w, c, how) = coefficients(&doc, opts)?;
            coefficient_values(&mut report, &w, how);
            let mut fields: Vec<(String, VectorField)> = sl_generators(doc.n)
                .into_iter()
                .map(|x| (x.to_string(), x))
                .collect();
            for text in &opts.extra_fields {
                let x = VectorField::parse(text, doc.n).map_err(|e| match e {
                    Error::Parse(p) => CliError::Input(format!("--extra-field {text:?}: {p}")),
                    other => CliError::Input(format!("--extra-field {text:?}: {other}")),
                })?;
                fields.push((format!("extra {x}"), x));
            }
            for (name, x) in fields {
                let v = check_equivariance(&x, &w, &c, sym)?;
                let residual = if v.holds {
                    Vec::new()
                } else {
                    entries(v.residual.labelled_components())
                };
                report.check(format!("X = {name}"), residual);
            }
            report.conclude();
        }
        Command::ShiftIdentities => {
            let omega = doc.omega.as_ref().ok_or_else(|| missing("omega", command))?;
            if doc.phi.is_none() && doc.symbol.is_none() {
                return Err(missing("phi` or `symbol", command));
            }
            let n = doc.n;
            let np1 = int(n as i64 + 1);
            let conn = doc.connection_or_flat();
            let shifted = projective_shift(&conn, omega)?;
            if let Some(phi) = doc.phi_density() {
                let factor = &doc.lambda * &np1;
                report.value("density shift factor", &factor);
                let extra = omega.mul_poly(phi.value()).scale(&factor).with_weight(doc.lambda.clone());
                let lhs = covariant_derivative(&phi, &conn)?;
                let rhs = covariant_derivative(&phi, &shifted)?.checked_add(&extra)?;
                let diff = lhs.checked_sub(&rhs)?;
                report.check(
                    "∇_kφ == ∇̃_kφ + λ(n+1)ω_kφ",
                    lower_residual(&diff, "∇_kφ"),
                );
            }
            if let Some(sym) = &doc.symbol {
                let factor = &np1 * &doc.delta - int(n as i64 + 5);
                report.value("divergence shift factor", &factor);
                let extra = TensorDensity::from_fn(n, 2, 0, doc.delta.clone(), |idx| {
                    let mut acc = Poly::zero(n);
                    for i in 0..n {
                        acc += &(omega.get(&[i]) * sym.get(i, idx[0], idx[1]));
                    }
                    acc.scale(&factor)
                });
                let lhs = divergence3(sym, &conn)?;
                let rhs = divergence3(sym, &shifted)?.checked_add(&extra)?;
                let diff = lhs.checked_sub(&rhs)?;
                report.check(
                    "∇_kP^{ijk} == ∇̃_kP^{ijk} + ((n+1)δ−(n+5))ω_kP^{ijk}",
                    upper_residual(&diff),
                );
            }
            report.conclude();
        }
        Command::Ricci => {
            let conn = doc.connection_or_flat();
            report.value("convention", format!("{:?}", opts.convention));
            let r = ricci_with(&conn, opts.convention);
            for (idx, p) in r.iter() {
                report.value(format!("R_{{{},{}}}", idx[0] + 1, idx[1] + 1), p);
            }
        }
    }
    Ok(report)
}

fn lower_residual(t: &TensorDensity, name: &str) -> Vec<Entry> {
    t.iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(idx, p)| Entry::new(format!("{name}[k={}]", idx[0] + 1), p))
        .collect()
}

fn upper_residual(t: &TensorDensity) -> Vec<Entry> {
    t.iter()
        .filter(|(idx, p)| idx[0] <= idx[1] && !p.is_zero())
        .map(|(idx, p)| Entry::new(format!("div^{{{},{}}}", idx[0] + 1, idx[1] + 1), p))
        .collect()
}
