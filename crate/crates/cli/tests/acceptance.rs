//! The acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the report is always printed.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use common::{brute::Brute, pqmkz, read_csv, TEST_PARAMS};
use pqmkz::{
    apply_monomial, corollary1_bounds, jackson_integral, kernel_monomial_integral, kernel_value,
    lemma2_lhs, lemma2_rhs, lemma3_check, pq_beta_closed, pq_beta_integral, st_convergence_check,
    sup_error, theorem1_bounds, theorem53_check, Function1D, ModulusGrid, OperatorConfig, PQParams,
    SeqScheme, UniformGrid,
};
use pqmkz_cli::{run, CommandKind, RunConfig};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

const NORMALIZATION_PARAMS: [(f64, f64); 3] = [(1.0, 0.9), (0.95, 0.9), (0.9, 0.8)];
const NORMALIZATION_DEGREES: [u32; 3] = [5, 10, 25];

fn pq(p: f64, q: f64) -> PQParams {
    PQParams::new(p, q).unwrap()
}

/// x ∈ {0, 0.05, …, 0.95}
fn coarse_grid() -> impl Iterator<Item = f64> {
    (0..20).map(|i| f64::from(i) * 0.05)
}

fn within(name: &str, elapsed: Duration, limit: Duration, detail: String) -> Verdict {
    if elapsed < limit {
        Ok(format!("{detail}; {:.2}s", elapsed.as_secs_f64()))
    } else {
        Err(format!(
            "{name} took {:.2}s (limit {}s)",
            elapsed.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

fn normalization() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (p, q) in NORMALIZATION_PARAMS {
        for n in NORMALIZATION_DEGREES {
            let config = OperatorConfig::new(n).with_tail_tol(1e-12);
            for x in coarse_grid() {
                let v = apply_monomial(0, x, pq(p, q), &config)
                    .map_err(|e| e.to_string())?
                    .value;
                worst = worst.max((v - 1.0).abs());
            }
        }
    }
    if worst > 1e-9 {
        return Err(format!("max |M(e0) - 1| = {worst:e}"));
    }
    within(
        "normalization",
        start.elapsed(),
        Duration::from_secs(5),
        format!("max |M(e0) - 1| = {worst:.2e}"),
    )
}

fn kernel_moment_oracle() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (p, q) in TEST_PARAMS {
        let params = pq(p, q);
        for n in 0..=10 {
            for k in 0..=10 {
                for s in 0..=2 {
                    let closed = kernel_monomial_integral(n, k, s, params);
                    let numeric = jackson_integral(
                        |t| kernel_value(n, k, t, params) * t.powi(s as i32),
                        params,
                        closed * 1e-13,
                    )
                    .map_err(|e| e.to_string())?;
                    worst = worst.max(((numeric.value - closed) / closed).abs());
                }
            }
        }
    }
    if worst > 1e-8 {
        return Err(format!("max relative error {worst:e}"));
    }
    within(
        "kernel moments",
        start.elapsed(),
        Duration::from_secs(30),
        format!("max relative error {worst:.2e}"),
    )
}

fn beta_oracle() -> Verdict {
    let mut worst: f64 = 0.0;
    for (p, q) in TEST_PARAMS {
        let params = pq(p, q);
        for t in 1..=8 {
            for s in 1..=8 {
                let closed = pq_beta_closed(t, s, params).map_err(|e| e.to_string())?;
                let numeric =
                    pq_beta_integral(t, s, params, closed * 1e-14).map_err(|e| e.to_string())?;
                worst = worst.max(((numeric.value - closed) / closed).abs());
            }
        }
    }
    if worst <= 1e-8 {
        Ok(format!("max relative error {worst:.2e}"))
    } else {
        Err(format!("max relative error {worst:e}"))
    }
}

fn summation_identity() -> Verdict {
    let mut worst: f64 = 0.0;
    for (p, q) in TEST_PARAMS {
        let params = pq(p, q);
        for r in [1, 2] {
            for n in [5, 8] {
                let config = OperatorConfig::new(n);
                for x in [0.1, 0.3, 0.5, 0.7] {
                    let lhs = lemma2_lhs(r, x, params, &config).map_err(|e| e.to_string())?;
                    let rhs = lemma2_rhs(n, r, x, params).map_err(|e| e.to_string())?;
                    worst = worst.max(((lhs - rhs) / rhs).abs());
                }
            }
        }
    }
    if worst <= 1e-6 {
        Ok(format!("max relative error {worst:.2e}"))
    } else {
        Err(format!("max relative error {worst:e}"))
    }
}

fn reciprocal_inequality() -> Verdict {
    let mut cases = 0;
    for (p, q) in TEST_PARAMS {
        let params = pq(p, q);
        for total in 1..=50u32 {
            for k in 0..=total {
                for r in 0..=10 {
                    if !lemma3_check(total - k, k, r, params) {
                        return Err(format!(
                            "fails at n={}, k={k}, r={r}, (p,q)=({p},{q})",
                            total - k
                        ));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn moment_bounds() -> Verdict {
    let mut checked = 0;
    for (p, q) in NORMALIZATION_PARAMS {
        let params = pq(p, q);
        for n in NORMALIZATION_DEGREES {
            let config = OperatorConfig::new(n).with_tail_tol(1e-12);
            for x in coarse_grid() {
                let reports = [
                    ("e1", theorem1_bounds(1, x, params, &config)),
                    ("e2", theorem1_bounds(2, x, params, &config)),
                    ("psi1", corollary1_bounds(1, x, params, &config)),
                    ("psi2", corollary1_bounds(2, x, params, &config)),
                ];
                for (name, report) in reports {
                    let report = report.map_err(|e| e.to_string())?;
                    if !report.holds {
                        return Err(format!(
                            "{name} at n={n}, x={x}, (p,q)=({p},{q}): {report:?}"
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} bounds hold"))
}

fn uniform_convergence() -> Verdict {
    let scheme = SeqScheme::default();
    let grid = UniformGrid::new(0.0, 0.99, 100).unwrap();
    let e2 = Function1D::monomial(2);
    let errors: Vec<f64> = [10, 20, 40, 80]
        .iter()
        .map(|&n| sup_error(&e2, &scheme, &OperatorConfig::new(n), &grid))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let detail = format!("sup errors {errors:.4?}");
    if decreasing && errors[3] < 0.5 * errors[0] {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn modulus_inequality() -> Verdict {
    let scheme = SeqScheme::default();
    let mut worst_ratio: f64 = 0.0;
    for f in Function1D::figure_functions() {
        for n in [10, 25] {
            let config = OperatorConfig::new(n);
            for x in coarse_grid() {
                let check = theorem53_check(&f, x, &scheme, &config, ModulusGrid::default())
                    .map_err(|e| e.to_string())?;
                if !check.holds {
                    return Err(format!("{:?} n={n} x={x}: {check:?}", f.name()));
                }
                worst_ratio = worst_ratio.max(check.lhs / check.rhs);
            }
        }
    }
    Ok(format!("max lhs/rhs {worst_ratio:.3}"))
}

fn figure_reproduction() -> Verdict {
    let outcome = run(&RunConfig::new(CommandKind::Figures)).map_err(|e| e.to_string())?;
    let brute = Brute::new(0.95, 0.9);
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for f in Function1D::figure_functions() {
        let name = f.name().unwrap();
        let csv = outcome
            .artifacts
            .iter()
            .find(|a| a.name.as_deref() == Some(&format!("{name}.csv")))
            .ok_or_else(|| format!("no CSV for {name}"))?;
        let (header, rows) = read_csv(&csv.contents);
        if header != ["x", "f", "Mtilde", "abs_error"] || rows.len() != 200 {
            return Err(format!(
                "{name}.csv has header {header:?} and {} rows",
                rows.len()
            ));
        }
        for target in [0.0, 0.25, 0.5, 0.75] {
            let row = rows
                .iter()
                .find(|r| (r[0].parse::<f64>().unwrap() - target).abs() < 1e-12)
                .ok_or_else(|| format!("x={target} missing from {name}.csv"))?;
            let x: f64 = row[0].parse().unwrap();
            let mtilde: f64 = row[2].parse().unwrap();
            let expected = brute.operator(|t| f.eval(t), 25, x, 150);
            let err = ((mtilde - expected) / expected).abs();
            if err > 1e-8 {
                return Err(format!("{name} at x={x}: {mtilde} vs oracle {expected}"));
            }
            worst = worst.max(err);
            compared += 1;
        }
    }
    Ok(format!("{compared} values, max relative error {worst:.2e}"))
}

fn statistical_demo() -> Verdict {
    let scheme = SeqScheme::default();
    let q_report =
        st_convergence_check(|n| scheme.q_n(n), 1.0, 0.01, 10_000).map_err(|e| e.to_string())?;
    if q_report.density > 0.005 {
        return Err(format!("q_n violator density {}", q_report.density));
    }
    let outcome = run(&RunConfig::new(CommandKind::Statdemo)).map_err(|e| e.to_string())?;
    let (_, rows) = read_csv(&outcome.artifacts[0].contents);
    let last = rows
        .iter()
        .find(|r| r[0] == "p_n^n" && r[3] == "10000")
        .ok_or("no p_n^n row at n = 10^4")?;
    let value: f64 = last[6].parse().unwrap();
    let limit = (-1.0f64 / 3.0).exp();
    if (value - limit).abs() <= 1e-3 {
        Ok(format!(
            "q_n density {}, p_n^n(10^4) = {value:.6} vs {limit:.6}",
            q_report.density
        ))
    } else {
        Err(format!("p_n^n(10^4) = {value} vs {limit}"))
    }
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            for (name, bytes) in snapshot(&path) {
                files.insert(
                    format!("{}/{name}", path.file_name().unwrap().to_string_lossy()),
                    bytes,
                );
            }
        } else {
            files.insert(
                path.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&path).unwrap(),
            );
        }
    }
    files
}

fn determinism() -> Verdict {
    let invocations: &[&[&str]] = &[
        &["eval", "--out", "out.csv"],
        &["eval", "--format", "json", "--out", "out.json"],
        &[
            "eval",
            "--format",
            "svg",
            "--function",
            "cubic",
            "--out",
            "out.svg",
        ],
        &["moments", "--out", "out.csv"],
        &["bounds", "--out", "out.json"],
        &["converge", "--out", "out.csv"],
        &["figures", "--out", "figs"],
        &["statdemo", "--out", "out.csv"],
        &["statdemo", "--self-test", "--out", "checks.csv"],
    ];
    for args in invocations {
        let runs: Vec<_> = (0..2)
            .map(|_| {
                let dir = tempfile::tempdir().unwrap();
                let out = pqmkz(args, dir.path());
                (out.status.success(), snapshot(dir.path()))
            })
            .collect();
        if !runs[0].0 || !runs[1].0 {
            return Err(format!("`pqmkz {}` exited with failure", args.join(" ")));
        }
        if runs[0].1.is_empty() || runs[0].1 != runs[1].1 {
            return Err(format!(
                "`pqmkz {}` output differs between runs",
                args.join(" ")
            ));
        }
    }
    Ok(format!("{} invocations byte-identical", invocations.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("normalization M(e0) = 1", normalization),
        ("kernel moments vs Jackson integral", kernel_moment_oracle),
        ("Beta closed form vs Jackson integral", beta_oracle),
        ("weighted reciprocal summation identity", summation_identity),
        ("reciprocal integer inequality", reciprocal_inequality),
        ("moment and central-moment bounds", moment_bounds),
        ("uniform convergence on x^2", uniform_convergence),
        ("modulus-of-continuity error bound", modulus_inequality),
        ("figure data vs brute-force oracle", figure_reproduction),
        ("statistical convergence demo", statistical_demo),
        ("deterministic CLI output", determinism),
    ];
    let mut failures = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        match criterion() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
