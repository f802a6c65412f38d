use serde_json::{json, Map, Value};

use cue_moments::combinatorics::{enumerate_margin_tables, kostka, magic_square_count, table_pair_count};
use cue_moments::cue_asymptotic::{
    bulk_moment, bulk_moment_exact, fourth_moment_micro, micro_limit, micro_limit_padded,
};
use cue_moments::cue_exact::{finite_n_moment, finite_n_moment_rational};
use cue_moments::exact::{binomial, format_rational, rational_from_int};
use cue_moments::haar_mc::{mc_moment_with, McConfig, Sampler};
use cue_moments::numeric::biguint_to_f64;
use cue_moments::zeta_side::{
    dirichlet_sum, euler_a, euler_a_gamma, euler_h, lindelof_leading, pair_identity_check, EulerProductConfig,
    LindelofMode, ShiftVector,
};
use cue_moments::{DerivativeIndex, MomentValue};

use crate::output::{Cx, Document, Point};
use crate::{crosscheck, Command, Failure, ModeArg, SamplerArg};

/// Above this many `(Q, R)` table pairs the bulk sum gets slow.
const TABLE_PAIR_WARNING: u64 = 10_000_000;

/// Relative standard error above which Monte Carlo estimates are refused.
const MAX_RELATIVE_STDERR: f64 = 0.5;

pub fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn moment_point(inputs: Map<String, Value>, v: &MomentValue) -> Point {
    let mut p = Point::new(inputs, v.numeric.into());
    p.exact = v.exact.as_ref().map(format_rational);
    p
}

fn warn_table_pairs(mu: &DerivativeIndex, nu: &DerivativeIndex) {
    let pairs = table_pair_count(mu.entries(), nu.entries());
    if pairs > TABLE_PAIR_WARNING.into() {
        eprintln!("warning: {pairs} table pairs to sum; this may take a while");
    }
}

pub fn run(cmd: Command) -> Result<(Document, u8), Failure> {
    let doc = match cmd {
        Command::Bulk { pair, z } => {
            warn_table_pairs(&pair.mu, &pair.nu);
            let mut v = bulk_moment(&pair.mu, &pair.nu, z.value)?;
            if let Some(q) = &z.exact {
                v = bulk_moment_exact(&pair.mu, &pair.nu, q)?;
            }
            let inputs = obj(json!({"mu": pair.mu.to_string(), "nu": pair.nu.to_string(), "z": z.text}));
            Document::new(
                "bulk_moment",
                "cue_asymptotic",
                "mu! nu! (1-|z|^2)^-(KL+|mu|+|nu|) sum_{Q,R} prod p_{Q_ij,R_ij}(z)",
                moment_point(inputs, &v),
            )
        }
        Command::Exact { pair, z, n } => {
            let mut grid = Vec::with_capacity(n.len());
            for &size in &n {
                let v = match &z.exact {
                    Some(q) => finite_n_moment_rational(&pair.mu, &pair.nu, q, size)?,
                    None => finite_n_moment(&pair.mu, &pair.nu, z.value, size)?,
                };
                let inputs =
                    obj(json!({"mu": pair.mu.to_string(), "nu": pair.nu.to_string(), "z": z.text, "N": size}));
                grid.push(moment_point(inputs, &v));
            }
            let last = grid.last().cloned().ok_or_else(|| Failure::Invalid("--N needs a value".into()))?;
            let mut doc = Document::new(
                "finite_n_moment",
                "cue_exact",
                "mu! nu! sum Kostka coefficients x det of kernel derivatives at |z|^2",
                last,
            );
            if grid.len() > 1 {
                doc.grid = grid;
            }
            doc
        }
        Command::Micro { pair, c, pad } => {
            let (v, mu, nu) = if pad {
                let p = micro_limit_padded(&pair.mu, &pair.nu, c.value)?;
                (p.value, p.mu, p.nu)
            } else {
                (micro_limit(&pair.mu, &pair.nu, c.value)?, pair.mu, pair.nu)
            };
            let inputs = obj(json!({"mu": mu.to_string(), "nu": nu.to_string(), "c": c.text}));
            let mut doc = Document::new(
                "micro_limit",
                "cue_asymptotic",
                "mu! nu! sum Kostka coefficients x det I_{alpha_i+beta_j}(2 Re c)",
                moment_point(inputs, &v),
            );
            doc.normalization = Some(v.normalization.to_string());
            doc
        }
        Command::Fourth { k, c } => {
            let v = fourth_moment_micro(k, c);
            let inputs = obj(json!({"k": k, "c": c}));
            let mut doc = Document::new(
                "fourth_moment_micro",
                "cue_asymptotic",
                "sum_{i,j<=k} C1_ij I_{4k-i-j+2} I_{i+j} - C2_ij I_{3k-i-j+1} I_{k+i+j+1}",
                moment_point(inputs, &v),
            );
            doc.normalization = Some(v.normalization.to_string());
            doc
        }
        Command::Mc { pair, z, n, samples, seed, sampler, allow_noisy } => {
            let sampler = match sampler {
                SamplerArg::Verblunsky => Sampler::Verblunsky,
                SamplerArg::Qr => Sampler::Qr,
            };
            let e = mc_moment_with(&pair.mu, &pair.nu, z.value, n, samples, seed, &McConfig { sampler })?;
            let rel = e.relative_stderr();
            if rel > MAX_RELATIVE_STDERR && !allow_noisy {
                return Err(Failure::Quality(format!(
                    "relative standard error {rel:.3} exceeds {MAX_RELATIVE_STDERR}; raise --samples or pass --allow-noisy"
                )));
            }
            let inputs = obj(json!({
                "mu": pair.mu.to_string(), "nu": pair.nu.to_string(), "z": z.text, "N": n,
                "samples": samples, "seed": seed, "sampler": format!("{sampler:?}").to_lowercase(),
            }));
            let mut p = Point::new(inputs, e.mean.into());
            p.stderr = Some(Cx { re: e.stderr_re, im: e.stderr_im });
            Document::new("mc_moment", "haar_mc", "sample mean of prod Lambda^(mu_i)(z) conj(Lambda^(nu_j)(z))", p)
        }
        Command::Tables { mu, nu, cols, limit } => tables(mu, nu, cols, limit)?,
        Command::Kostka { lambda, mu } => {
            let k = kostka(&lambda, &mu);
            let inputs = obj(json!({"lambda": lambda.to_string(), "mu": mu.to_string()}));
            let mut p = Point::new(inputs, Cx::real(biguint_to_f64(&k)));
            p.exact = Some(format_rational(&rational_from_int(k)));
            Document::new("kostka", "combinatorics", "semistandard tableaux of shape lambda and content mu", p)
        }
        Command::ZetaPredict { pair, sigma, mode, primes } => {
            let cfg = EulerProductConfig::new(primes, 1e-17)?;
            let (m, label, formula) = match mode {
                ModeArg::Asymptotic => (
                    LindelofMode::Asymptotic,
                    "asymptotic",
                    "(-1)^(|mu|+|nu|) a_{K,L} h_{mu,nu} (2 sigma - 1)^-(KL+|mu|+|nu|)",
                ),
                ModeArg::FiniteSigma => (
                    LindelofMode::FiniteSigma,
                    "finite-sigma",
                    "mu! nu! sum_{Q,R} prod zeta^(Q_ij+R_ij)(2 sigma) / (Q_ij! R_ij!)",
                ),
            };
            let v = lindelof_leading(&pair.mu, &pair.nu, sigma, m, &cfg)?;
            let inputs = obj(json!({
                "mu": pair.mu.to_string(), "nu": pair.nu.to_string(), "sigma": sigma, "mode": label, "primes": primes,
            }));
            Document::new("lindelof_leading", "zeta_side", formula, Point::new(inputs, Cx::real(v)))
        }
        Command::ZetaSum { pair, sigma, m } => {
            let s = dirichlet_sum(&pair.mu, &pair.nu, sigma, m)?;
            let inputs = obj(json!({"mu": pair.mu.to_string(), "nu": pair.nu.to_string(), "sigma": sigma, "M": m}));
            let mut p = Point::new(inputs, Cx::real(s.value));
            p.tail_bound = Some(s.tail_bound);
            Document::new("dirichlet_sum", "zeta_side", "(-1)^(|mu|+|nu|) sum_{m<=M} A_mu(m) A_nu(m) m^(-2 sigma)", p)
        }
        Command::ZetaIdentity { alpha, beta, sigma, m } => {
            let a = ShiftVector::new(alpha.0)?;
            let b = ShiftVector::new(beta.0)?;
            let r = pair_identity_check(&a, &b, sigma, m)?;
            let inputs = obj(json!({"alpha": a.shifts(), "beta": b.shifts(), "sigma": sigma, "M": m}));
            let mut p = Point::new(inputs, Cx::real(r.lhs));
            p.tail_bound = Some(r.tail_bound);
            Document::new(
                "pair_identity_check",
                "zeta_side",
                "sum_{m<=M} sigma_alpha(m) sigma_beta(m) m^(-2 sigma) vs prod zeta(2 sigma + alpha_i + beta_j) / zeta(4 sigma + sum)",
                p,
            )
            .detail("rhs", r.rhs)
            .detail("deviation", r.deviation)
        }
        Command::EulerA { k, l, primes, tol, sigma, gamma } => {
            let cfg = EulerProductConfig::new(primes, tol)?;
            let integer = |x: f64| -> Result<u32, Failure> {
                if x >= 1.0 && x.fract() == 0.0 && x <= f64::from(u32::MAX) {
                    Ok(x as u32)
                } else {
                    Err(Failure::Invalid(format!("K and L must be positive integers without --gamma, got {x}")))
                }
            };
            let e = match (gamma, sigma) {
                (true, Some(_)) => return Err(Failure::Invalid("--gamma and --sigma cannot be combined".into())),
                (true, None) => euler_a_gamma(k, l, &cfg)?,
                (false, Some(s)) => euler_h(integer(k)?, integer(l)?, s, &cfg)?,
                (false, None) => euler_a(integer(k)?, integer(l)?, &cfg)?,
            };
            let inputs = obj(json!({"K": k, "L": l, "primes": primes, "tol": tol, "sigma": sigma, "gamma": gamma}));
            let mut p = Point::new(inputs, Cx::real(e.value));
            p.tail_bound = Some(e.tail_estimate);
            Document::new(
                "euler_a",
                "zeta_side",
                "prod_{p<=P} (1-1/p)^(KL) sum_m d_K(p^m) d_L(p^m) p^(-m)",
                p,
            )
            .detail("primes_used", e.primes)
        }
        Command::Crosscheck { grid, seed } => return crosscheck::run(grid, seed),
    };
    Ok((doc, 0))
}

fn tables(
    mu: DerivativeIndex,
    nu: Option<DerivativeIndex>,
    cols: Option<usize>,
    limit: usize,
) -> Result<Document, Failure> {
    let k = mu.len();
    let (count, l) = match (&nu, cols) {
        (Some(n), _) => (magic_square_count(mu.entries(), n.entries()), n.len()),
        (None, Some(l)) if l > 0 => {
            let c = mu
                .entries()
                .iter()
                .map(|&r| binomial(u64::from(r) + l as u64 - 1, l as u64 - 1))
                .product();
            (c, l)
        }
        _ => return Err(Failure::Invalid("tables needs --nu or a positive --cols".into())),
    };
    let listed: Vec<Value> = enumerate_margin_tables(Some(mu.entries()), nu.as_ref().map(|n| n.entries()), k, l)?
        .take(limit)
        .map(|t| {
            let rows: Vec<Vec<u32>> = (0..t.rows()).map(|i| (0..t.cols()).map(|j| t.get(i, j)).collect()).collect();
            json!(rows)
        })
        .collect();
    let mut inputs = obj(json!({"mu": mu.to_string(), "cols": l}));
    if let Some(n) = &nu {
        inputs.insert("nu".into(), json!(n.to_string()));
    }
    let mut p = Point::new(inputs, Cx::real(biguint_to_f64(&count)));
    p.exact = Some(format_rational(&rational_from_int(count)));
    let mut doc = Document::new("contingency_tables", "combinatorics", "non-negative integer matrices with fixed margins", p)
        .detail("tables", listed);
    if let Some(n) = &nu {
        doc = doc.detail("table_pairs", table_pair_count(mu.entries(), n.entries()).to_string());
    }
    Ok(doc)
}
