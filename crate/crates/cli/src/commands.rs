use std::fs;
use std::io::Write;

use num_bigint::BigUint;
use serde::Serialize;

use schurweyl::exponent::{convergence_table, exponent_rate, ConvergenceRow, ExponentResult};
use schurweyl::measure::{distribution, log2_failure_and_success, sample_outcomes, Threshold};
use schurweyl::schur::SchmidtSpectrum;
use schurweyl::verify::{run_suite, VerifyConfig};

use crate::args::{
    Command, Common, DistArgs, ExponentArgs, FailArgs, Format, SampleArgs, SpectrumArgs, VerifyArgs,
};
use crate::Failure;

/// Sums further than this from one are renormalized with a warning.
const RENORMALIZE_WARNING: f64 = 1e-9;

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Dist(a) => dist(a),
        Command::Failprob(a) => failprob(a),
        Command::Exponent(a) => exponent(a),
        Command::Sample(a) => sample(a),
        Command::Verify(a) => verify(a),
    }
}

fn spectrum(args: &SpectrumArgs) -> Result<SchmidtSpectrum, Failure> {
    let preset_dim = || {
        let d = args.d.unwrap_or(2);
        SchmidtSpectrum::uniform(d).map_err(Failure::from)
    };
    match args.p.trim() {
        "bell" | "uniform" => return preset_dim(),
        _ => {}
    }
    let values: Vec<f64> = args
        .p
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("cannot parse spectrum entry {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    if let Some(d) = args.d {
        if d != values.len() {
            return Err(Failure::Usage(format!(
                "--d {d} but --p has {} entries",
                values.len()
            )));
        }
    }
    let p = SchmidtSpectrum::from_weights(values.clone())?;
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > RENORMALIZE_WARNING {
        eprintln!(
            "warning: spectrum sums to {sum}; renormalized to {:?}",
            p.values()
        );
    }
    Ok(p)
}

fn emit(common: &Common, body: String) -> Result<(), Failure> {
    match &common.out {
        Some(path) => {
            fs::write(path, body).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::Compute(e.to_string())),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Compute(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_table(preamble: &str, header: &[String], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(preamble.as_bytes().to_vec());
    w.write_record(header)
        .map_err(|e| Failure::Compute(e.to_string()))?;
    for r in rows {
        w.write_record(r)
            .map_err(|e| Failure::Compute(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Compute(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Compute(e.to_string()))
}

// shortest round-trip form, as in the JSON output; non-finite values are empty
fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::Number::from_f64(x).map_or_else(String::new, |v| v.to_string())
    } else {
        String::new()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, num)
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn lambda_header(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("lambda_{i}")).collect()
}

fn dist(a: DistArgs) -> Result<(), Failure> {
    let p = spectrum(&a.spectrum)?;
    let report = distribution(a.n, &p)?.report();
    let body = match a.common.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut header = lambda_header(report.d);
            header.extend(["probability", "log2_probability", "L", "rate"].map(String::from));
            let rows: Vec<Vec<String>> = report
                .entries
                .iter()
                .map(|e| {
                    let mut r: Vec<String> = e.lambda.iter().map(|x| x.to_string()).collect();
                    r.push(num(e.probability));
                    r.push(opt(e.log2_probability));
                    r.push(e.output_dim.clone());
                    r.push(num(e.rate));
                    r
                })
                .collect();
            csv_table("", &header, &rows)?
        }
    };
    emit(&a.common, body)
}

#[derive(Serialize)]
struct FailReport {
    n: usize,
    d: usize,
    p: Vec<f64>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    rate: Option<f64>,
    #[serde(rename = "S")]
    threshold: String,
    #[serde(rename = "P")]
    probability: f64,
    #[serde(rename = "log2_P")]
    log2_probability: Option<f64>,
    #[serde(rename = "log2_success")]
    log2_success: Option<f64>,
}

fn failprob(a: FailArgs) -> Result<(), Failure> {
    let p = spectrum(&a.spectrum)?;
    let threshold = match (a.rate, &a.dimension) {
        (Some(r), None) => Threshold::Rate(r),
        (None, Some(s)) => Threshold::Dimension(
            s.trim()
                .parse::<BigUint>()
                .map_err(|_| Failure::Usage(format!("--S {s:?} is not a nonnegative integer")))?,
        ),
        _ => return Err(Failure::Usage("give exactly one of --R and --S".into())),
    };
    let s = threshold.dimension(a.n)?;
    let (log2_fail, log2_pass) = log2_failure_and_success(a.n, &p, &threshold)?;
    let report = FailReport {
        n: a.n,
        d: p.dim(),
        p: p.values().to_vec(),
        rate: a.rate,
        threshold: s.to_string(),
        probability: log2_fail.exp2(),
        log2_probability: finite(log2_fail),
        log2_success: finite(log2_pass),
    };
    let body = match a.common.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let header = ["n", "R", "S", "P", "log2_P", "log2_success"].map(String::from);
            let row = vec![
                report.n.to_string(),
                opt(report.rate),
                report.threshold.clone(),
                num(report.probability),
                opt(report.log2_probability),
                opt(report.log2_success),
            ];
            csv_table("", &header, &[row])?
        }
    };
    emit(&a.common, body)
}

#[derive(Serialize)]
struct ExponentReport {
    #[serde(flatten)]
    result: ExponentResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    convergence: Option<Vec<ConvergenceRow>>,
}

fn exponent(a: ExponentArgs) -> Result<(), Failure> {
    let p = spectrum(&a.spectrum)?;
    let result = exponent_rate(a.rate, &p)?;
    let convergence = match &a.empirical {
        Some(grid) => Some(convergence_table(&p, a.rate, grid)?),
        None => None,
    };
    let body = match a.common.format {
        Format::Json => json(&ExponentReport {
            result,
            convergence,
        })?,
        Format::Csv => match convergence {
            Some(rows) => {
                let header = [
                    "n",
                    "R",
                    "failure_prob_log2",
                    "empirical_exponent",
                    "analytic_exponent",
                    "gap",
                ]
                .map(String::from);
                let rows: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.n.to_string(),
                            num(r.rate),
                            num(r.failure_prob_log2),
                            num(r.empirical_exponent),
                            num(r.analytic_exponent),
                            num(r.gap),
                        ]
                    })
                    .collect();
                csv_table("", &header, &rows)?
            }
            None => {
                let d = p.dim();
                let mut header: Vec<String> = [
                    "R",
                    "value",
                    "beta_star",
                    "method",
                    "iterations",
                    "residual",
                ]
                .map(String::from)
                .into();
                header.extend((1..=d).map(|i| format!("q_{i}")));
                let method = serde_json::to_value(result.solver.method)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default();
                let mut row = vec![
                    num(result.rate),
                    num(result.value),
                    opt(result.beta_star),
                    method,
                    result.solver.iterations.to_string(),
                    num(result.solver.residual),
                ];
                row.extend(result.q_star.values().iter().map(|&x| num(x)));
                csv_table("", &header, &[row])?
            }
        },
    };
    emit(&a.common, body)
}

#[derive(Serialize)]
struct SampleReport {
    n: usize,
    d: usize,
    p: Vec<f64>,
    seed: u64,
    count: usize,
    samples: Vec<Vec<usize>>,
}

fn sample(a: SampleArgs) -> Result<(), Failure> {
    let p = spectrum(&a.spectrum)?;
    let seed = a.seed.unwrap_or_else(rand::random);
    let d = p.dim();
    let samples: Vec<Vec<usize>> = sample_outcomes(a.n, &p, a.count, seed)
        .into_iter()
        .map(|l| l.padded(d).expect("RSK shapes have at most d rows"))
        .collect();
    let body = match a.common.format {
        Format::Json => json(&SampleReport {
            n: a.n,
            d,
            p: p.values().to_vec(),
            seed,
            count: a.count,
            samples,
        })?,
        Format::Csv => {
            let mut header = vec!["sample".to_string()];
            header.extend(lambda_header(d));
            let rows: Vec<Vec<String>> = samples
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let mut r = vec![i.to_string()];
                    r.extend(l.iter().map(|x| x.to_string()));
                    r
                })
                .collect();
            csv_table(&format!("# seed={seed}\n"), &header, &rows)?
        }
    };
    emit(&a.common, body)
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let suite = a.suite.parse()?;
    let mut config = VerifyConfig::new(suite, a.n, a.d, a.seed.unwrap_or_else(rand::random));
    config.states = a.states;
    config.twirl_samples = a.samples;
    let report = run_suite(&config)?;
    let body = match a.common.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let header = ["name", "max_residual", "tolerance", "pass"].map(String::from);
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        num(c.max_residual),
                        num(c.tolerance),
                        c.pass.to_string(),
                    ]
                })
                .collect();
            let mut preamble = format!(
                "# suite={} n={} d={} seed={}\n",
                report.suite, report.n, report.d, report.seed
            );
            for s in &report.skipped {
                preamble.push_str(&format!("# skipped {s}\n"));
            }
            csv_table(&preamble, &header, &rows)?
        }
    };
    emit(&a.common, body)?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Compute("verification failed".into()))
    }
}
