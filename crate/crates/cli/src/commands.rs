use std::path::Path;

use qmeter_core::format::vector_to_value;
use qmeter_core::mutual_info::summarize;
use qmeter_core::structure::{as_efficient, is_irreducible, OperationKind};
use qmeter_core::verify::{self, check_nonnegativity_on, reducible_instrument};
use qmeter_core::{PropertyReport, RandomModel, StateEnsemble};
use serde_json::{json, Value};

use crate::args::{ClassifyArgs, ComputeArgs, Fixture, OutputArgs, VerifyArgs};
use crate::document::Document;
use crate::error::{CliError, EXIT_OK, EXIT_PROPERTY_FAILURE};
use crate::fixtures;
use crate::output::{machine_json, render, sig12, sig12_list, Table};

/// What a command prints and how the process exits.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: u8,
}

fn finish(
    out: &OutputArgs,
    text: &str,
    machine: &Value,
    exit_code: u8,
) -> Result<Outcome, CliError> {
    if let Some(path) = &out.output {
        write_file(path, &machine_json(machine))?;
    }
    Ok(Outcome {
        stdout: render(out.format, text, machine),
        exit_code,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn compute(args: &ComputeArgs) -> Result<Outcome, CliError> {
    let path = args.doc.display().to_string();
    let lib = Document::read(&args.doc)?.load()?;
    let rho = lib.state(&args.state, &path)?;
    let m = lib.instrument(&args.measurement, &path)?;
    if m.input_dim() != rho.dim() {
        return Err(CliError::Usage(format!(
            "state `{}` has dimension {}, measurement `{}` acts on dimension {}",
            args.state,
            rho.dim(),
            args.measurement,
            m.input_dim()
        )));
    }
    if !args.general {
        as_efficient(&m).map_err(|e| {
            CliError::Usage(format!(
                "measurement `{}`: {e} (or pass --general)",
                args.measurement
            ))
        })?;
    }
    let context = format!("state `{}`, measurement `{}`", args.state, args.measurement);
    let s = summarize(rho, &m).map_err(|e| CliError::invalid(&context, e))?;

    let mut t = Table::default();
    t.num("H(rho)", s.entropy)
        .row("outcome distribution", sig12_list(&s.distribution))
        .num("H(outcomes)", s.outcome_entropy)
        .num("<H> mean posteriori", s.mean_posteriori_entropy)
        .num("ER direct", s.er_direct)
        .num("I(rho,Pi) relative route", s.qc_mutual_info)
        .num("cross residual", s.cross_residual)
        .num("I(rho,Pi) quantum route", s.qc_mutual_info_quantum)
        .row("efficient", yes_no(s.efficient));
    match (s.lambda_mutual_info, s.identity_residual) {
        (Some(l), Some(r)) => {
            t.num("I(rho,Lambda)", l).num("identity residual", r);
        }
        _ => {
            t.row("I(rho,Lambda)", "n/a (not efficient)")
                .row("identity residual", "n/a (not efficient)");
        }
    }
    t.num("general bound", s.general_bound);
    let machine = json!({
        "command": "compute",
        "document": path,
        "state": args.state,
        "measurement": args.measurement,
        "labels": m.labels(),
        "summary": s,
    });
    finish(&args.out, &t.render(), &machine, EXIT_OK)
}

fn kind_name(kind: &OperationKind) -> &'static str {
    match kind {
        OperationKind::Null => "null",
        OperationKind::Efficient => "efficient",
        OperationKind::CommonRange(_) => "common-range",
        OperationKind::Mixing => "mixing",
    }
}

fn pairs_text(v: &qmeter_core::ComplexVector) -> String {
    let items: Vec<String> = v
        .iter()
        .map(|z| format!("({}, {})", sig12(z.re), sig12(z.im)))
        .collect();
    format!("[{}]", items.join(", "))
}

pub fn classify(args: &ClassifyArgs) -> Result<Outcome, CliError> {
    let path = args.doc.display().to_string();
    let lib = Document::read(&args.doc)?.load()?;
    let m = lib.instrument(&args.instrument, &path)?;
    let report = is_irreducible(&m, args.trials, args.seed)
        .map_err(|e| CliError::invalid(format!("instrument `{}`", args.instrument), e))?;

    let mut t = Table::default();
    t.row("irreducible", yes_no(report.irreducible))
        .row("efficient", yes_no(report.efficient));
    let mut ops = Vec::new();
    for (i, e) in report.operations.iter().enumerate() {
        let desc = format!(
            "{}, {} Kraus after reduction",
            kind_name(&e.kind),
            e.reduced_kraus_count
        );
        t.row(format!("operation {i} [{}]", e.label), desc);
        let mut op = json!({
            "label": e.label,
            "kind": kind_name(&e.kind),
            "reduced_kraus_count": e.reduced_kraus_count,
        });
        if let OperationKind::CommonRange(cr) = &e.kind {
            t.row("  common range psi", pairs_text(&cr.psi))
                .num("  rank-one residual", cr.residual);
            op["psi"] = vector_to_value(&cr.psi);
            op["functionals"] = Value::Array(cr.functionals.iter().map(vector_to_value).collect());
            op["residual"] = json!(cr.residual);
        }
        ops.push(op);
    }
    t.row("sampled pure inputs", report.trials.to_string())
        .num("min posteriori purity", report.monte_carlo_purity);
    let witness = report.witness.as_ref().map(
        |w| json!({"purity": w.purity, "outcome": w.outcome, "input": vector_to_value(&w.input)}),
    );
    if let Some(w) = &report.witness {
        if !report.irreducible {
            t.row(
                "mixed posteriori witness",
                format!("outcome {} from input {}", w.outcome, pairs_text(&w.input)),
            );
        }
    }
    let machine = json!({
        "command": "classify",
        "document": path,
        "instrument": args.instrument,
        "irreducible": report.irreducible,
        "efficient": report.efficient,
        "operations": ops,
        "trials": report.trials,
        "seed": args.seed,
        "min_purity": report.monte_carlo_purity,
        "witness": witness,
    });
    finish(&args.out, &t.render(), &machine, EXIT_OK)
}

pub fn model_of(args: &VerifyArgs) -> RandomModel {
    let default_ensemble = if args.fixture.is_some() {
        StateEnsemble::HaarPure
    } else {
        StateEnsemble::GinibreMixed
    };
    RandomModel {
        seed: args.seed,
        dims: args.dims,
        outcomes: args.outcomes,
        trials: args.trials,
        ensemble: args.ensemble.map_or(default_ensemble, Into::into),
        tolerance_scale: args.tolerance_scale,
    }
}

fn report_line(r: &PropertyReport) -> String {
    format!(
        "{} {:<20} trials={:<4} max_violation={} tolerance={}\n",
        if r.pass { "PASS" } else { "FAIL" },
        r.property,
        r.trials,
        sig12(r.max_violation),
        sig12(r.tolerance)
    )
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let model = model_of(args);
    model
        .validate()
        .map_err(|e| CliError::Usage(format!("invalid random model: {e}")))?;
    let reports = match args.fixture {
        Some(Fixture::Reducible) => {
            if args.suite != verify::NONNEGATIVITY {
                return Err(CliError::Usage(format!(
                    "--fixture applies to the `{}` check only",
                    verify::NONNEGATIVITY
                )));
            }
            vec![check_nonnegativity_on(&reducible_instrument(), &model)
                .map_err(|e| CliError::invalid("reducible fixture", e))?]
        }
        None => verify::run_suite(&args.suite, &model)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown suite `{}`; expected `all`, `full` or one of: {}",
                    args.suite,
                    verify::THEOREM_PROPERTIES
                        .iter()
                        .chain(&verify::CONSISTENCY_PROPERTIES)
                        .copied()
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })?
            .map_err(|e| CliError::invalid(format!("suite `{}`", args.suite), e))?,
    };
    let passed = reports.iter().filter(|r| r.pass).count();
    let mut text: String = reports.iter().map(report_line).collect();
    text.push_str(&format!("{passed}/{} properties passed\n", reports.len()));
    let machine = json!({
        "command": "verify",
        "suite": args.suite,
        "fixture": args.fixture.map(|_| "reducible"),
        "model": model,
        "pass": passed == reports.len(),
        "reports": reports,
    });
    let code = if passed == reports.len() {
        EXIT_OK
    } else {
        EXIT_PROPERTY_FAILURE
    };
    finish(&args.out, &text, &machine, code)
}

pub fn write_fixtures(dir: &Path) -> Result<Outcome, CliError> {
    let written = fixtures::write_all(dir)?;
    let mut stdout = String::new();
    for p in written {
        stdout.push_str(&p);
        stdout.push('\n');
    }
    Ok(Outcome {
        stdout,
        exit_code: EXIT_OK,
    })
}
