//! Paired comparisons between routes that share no code path.

use num_complex::Complex64;
use serde_json::{json, Value};

use cue_moments::cue_asymptotic::{bulk_moment, fourth_moment_micro, micro_limit};
use cue_moments::cue_exact::{dd_moment_oracle, finite_n_moment};
use cue_moments::haar_mc::mc_moment;
use cue_moments::{DerivativeIndex, MomentValue, Normalization};

use crate::commands::obj;
use crate::output::{Cx, Document, Point};
use crate::{Failure, GridArg};

struct Check {
    name: &'static str,
    mu: DerivativeIndex,
    nu: DerivativeIndex,
    extra: Value,
    reference: Complex64,
    candidate: Complex64,
    deviation: f64,
    tolerance: f64,
}

fn di(v: &[u32]) -> DerivativeIndex {
    DerivativeIndex::new(v.to_vec()).expect("non-empty")
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn num(v: MomentValue) -> Complex64 {
    v.numeric
}

fn pairs(grid: GridArg) -> Vec<(DerivativeIndex, DerivativeIndex)> {
    let mut v: Vec<(&[u32], &[u32])> = vec![(&[1], &[1]), (&[1, 0], &[0, 1]), (&[2], &[1])];
    if let GridArg::Standard = grid {
        v.extend_from_slice(&[(&[1, 1], &[1, 1]), (&[2, 1], &[0, 2]), (&[3], &[3]), (&[2, 0], &[1, 1])]);
    }
    v.into_iter().map(|(a, b)| (di(a), di(b))).collect()
}

fn checks(grid: GridArg, seed: u64) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    let bulk_z = Complex64::new(0.3, 0.4);
    let mc_z = Complex64::new(0.4, 0.2);
    let c = Complex64::new(0.5, 0.0);
    let (mc_samples, micro_n) = match grid {
        GridArg::Quick => (20_000, 256),
        GridArg::Standard => (100_000, 256),
    };
    for (mu, nu) in pairs(grid) {
        let exact = num(finite_n_moment(&mu, &nu, bulk_z, 200)?);
        let bulk = num(bulk_moment(&mu, &nu, bulk_z)?);
        out.push(Check {
            name: "exact_vs_bulk",
            extra: json!({"z": "0.3,0.4", "N": 200}),
            reference: bulk,
            candidate: exact,
            deviation: rel(exact, bulk),
            tolerance: 1e-6,
            mu: mu.clone(),
            nu: nu.clone(),
        });

        let exact = num(finite_n_moment(&mu, &nu, mc_z, 8)?);
        let e = mc_moment(&mu, &nu, mc_z, 8, mc_samples, seed)?;
        out.push(Check {
            name: "exact_vs_mc",
            extra: json!({"z": "0.4,0.2", "N": 8, "samples": mc_samples, "seed": seed}),
            reference: exact,
            candidate: e.mean,
            deviation: (e.mean - exact).norm(),
            tolerance: 4.0 * (e.stderr_re + e.stderr_im),
            mu: mu.clone(),
            nu: nu.clone(),
        });

        let dd = dd_moment_oracle(&mu, &nu, mc_z, 8, 0.1)?;
        out.push(Check {
            name: "exact_vs_divided_differences",
            extra: json!({"z": "0.4,0.2", "N": 8}),
            reference: exact,
            candidate: dd,
            deviation: rel(dd, exact),
            tolerance: 1e-6,
            mu: mu.clone(),
            nu: nu.clone(),
        });

        if mu.len() == nu.len() {
            let limit = micro_limit(&mu, &nu, c)?;
            let e = match limit.normalization {
                Normalization::PowerOfN(e) => e,
                _ => 0,
            };
            let z = Complex64::new(1.0, 0.0) - c / f64::from(micro_n);
            let scaled = num(finite_n_moment(&mu, &nu, z, micro_n)?) / f64::from(micro_n).powi(e as i32);
            out.push(Check {
                name: "exact_vs_micro",
                extra: json!({"c": "0.5", "N": micro_n}),
                reference: limit.numeric,
                candidate: scaled,
                deviation: rel(scaled, limit.numeric),
                tolerance: 0.05,
                mu: mu.clone(),
                nu: nu.clone(),
            });
        }
    }
    let kmax = match grid {
        GridArg::Quick => 2,
        GridArg::Standard => 4,
    };
    for k in 0..=kmax {
        for cr in [0.0, 0.7] {
            let idx = di(&[k, k]);
            let closed = fourth_moment_micro(k, cr).numeric;
            let general = num(micro_limit(&idx, &idx, Complex64::new(cr, 0.0))?);
            out.push(Check {
                name: "fourth_vs_micro",
                extra: json!({"c": cr}),
                reference: general,
                candidate: closed,
                deviation: rel(closed, general),
                tolerance: 1e-10,
                mu: idx.clone(),
                nu: idx,
            });
        }
    }
    Ok(out)
}

pub fn run(grid: GridArg, seed: u64) -> Result<(Document, u8), Failure> {
    let all = checks(grid, seed)?;
    let failed = all.iter().filter(|c| !(c.deviation <= c.tolerance)).count();
    let worst = all.iter().map(|c| c.deviation / c.tolerance).fold(0.0, f64::max);
    let mut rows = Vec::with_capacity(all.len());
    let mut summary = Vec::with_capacity(all.len());
    for c in &all {
        let mut inputs = obj(json!({"check": c.name, "mu": c.mu.to_string(), "nu": c.nu.to_string()}));
        inputs.extend(obj(c.extra.clone()));
        let mut p = Point::new(inputs, c.candidate.into());
        p.tail_bound = Some(c.tolerance);
        rows.push(p);
        summary.push(json!({
            "check": c.name,
            "mu": c.mu.to_string(),
            "nu": c.nu.to_string(),
            "reference": Cx::from(c.reference),
            "candidate": Cx::from(c.candidate),
            "deviation": c.deviation,
            "tolerance": c.tolerance,
            "pass": c.deviation <= c.tolerance,
        }));
    }
    let label = match grid {
        GridArg::Quick => "quick",
        GridArg::Standard => "standard",
    };
    let top = Point::new(obj(json!({"grid": label, "seed": seed})), Cx::real(worst));
    let mut doc = Document::new(
        "crosscheck",
        "cli",
        "worst deviation / tolerance over paired route comparisons",
        top,
    )
    .detail("checks", summary)
    .detail("failed", failed);
    doc.grid = rows;
    for c in all.iter().filter(|c| !(c.deviation <= c.tolerance)) {
        eprintln!("crosscheck failed: {} {}|{} deviation {:.3e} > {:.3e}", c.name, c.mu, c.nu, c.deviation, c.tolerance);
    }
    Ok((doc, if failed == 0 { 0 } else { 3 }))
}
