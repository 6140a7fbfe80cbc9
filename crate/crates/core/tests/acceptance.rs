//! Acceptance criteria 1 to 8. Runs without the libtest harness so that the
//! verdict of every criterion is printed even when output is captured.

use std::process::ExitCode;
use std::time::Instant;

use qschur::schur::CommutatorForm;
use qschur::suites::{self, Conventions, SuiteReport, TransferParams};
use qschur::Result;

type Criterion = fn(&Conventions) -> Result<Vec<SuiteReport>>;

fn hecke(conv: &Conventions) -> Result<Vec<SuiteReport>> {
    Ok(vec![suites::hecke_relations(3, 5, conv)])
}

fn module_relations(conv: &Conventions) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for n in 2..=3 {
        for d in 1..=4 {
            out.push(suites::module_relations(n, d, conv)?);
        }
    }
    // the other commutator form has to be rejected
    let other = Conventions {
        commutator: CommutatorForm::PreviousIndex,
        ..*conv
    };
    let mut probe = SuiteReport::new("relations", &other);
    let rejected = !suites::module_relations(3, 2, &other)?.passed();
    probe.cases.push(qschur::suites::Case {
        id: "n=3/D=2/previous-index-rejected".into(),
        status: if rejected { suites::Status::Pass } else { suites::Status::Fail },
        detail: String::new(),
    });
    out.push(probe);
    Ok(out)
}

fn statistics(conv: &Conventions) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for n in 2..=3 {
        for d in 1..=4 {
            out.push(suites::statistics(n, d, conv)?);
        }
    }
    Ok(out)
}

fn crystal(conv: &Conventions) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for n in 2..=3 {
        for d in 1..=4 {
            out.push(suites::crystal(n, d, conv)?);
        }
    }
    Ok(out)
}

fn canonical(conv: &Conventions) -> Result<Vec<SuiteReport>> {
    Ok(vec![suites::canonical(2, 1, 2, conv)?, suites::canonical(2, 2, 2, conv)?])
}

fn schur(conv: &Conventions) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for d in 1..=3 {
        out.push(suites::schur(2, d, 200, conv)?);
    }
    out.push(suites::schur(3, 1, 200, conv)?);
    out.push(suites::schur(3, 2, 200, conv)?);
    Ok(out)
}

fn transfer(conv: &Conventions) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        suites::transfer(2, 1, TransferParams::default(), conv)?,
        suites::transfer(2, 2, TransferParams::default(), conv)?,
    ])
}

fn determinism(conv: &Conventions) -> Result<Vec<SuiteReport>> {
    let dir = tempfile::tempdir().map_err(|e| qschur::Error::Io(e.to_string()))?;
    Ok(vec![suites::determinism(2, 2, dir.path(), conv)?])
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("Hecke presentation", hecke),
        ("module relations", module_relations),
        ("statistics identities", statistics),
        ("crystal base", crystal),
        ("canonical bases", canonical),
        ("homomorphism to the q-Schur algebra", schur),
        ("transfer", transfer),
        ("determinism and round trips", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let conv = Conventions::default();
    let mut all_ok = true;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let k = k + 1;
        let name = format!("criterion_{k}");
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (ok, summary) = match run(&conv) {
            Ok(reports) => {
                for r in &reports {
                    for c in &r.cases {
                        let interesting = c.id.contains("/identity/")
                            || c.id.contains("canonical-sweep")
                            || c.id.contains("/commutator/");
                        if c.status == suites::Status::Fail {
                            println!("  FAIL {}/{} {}", r.suite, c.id, c.detail);
                        } else if interesting {
                            println!("  {} {}", c.id, c.detail);
                        }
                    }
                }
                let cases: usize = reports.iter().map(|r| r.cases.len()).sum();
                (reports.iter().all(SuiteReport::passed), format!("{cases} cases"))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        all_ok &= ok;
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {k} ({title}): {verdict} [{summary}, {:.1}s]",
            start.elapsed().as_secs_f64()
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
