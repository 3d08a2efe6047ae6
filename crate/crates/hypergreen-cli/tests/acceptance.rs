//! Acceptance gate: one pass/fail line per criterion. All criteria are
//! evaluated before the final assertion so a failure reports the full
//! picture.

use std::process::Command;

use hypergreen_cli::verify::{self, Check};

struct Criterion {
    label: &'static str,
    pass: bool,
    detail: String,
}

fn from_checks(label: &'static str, checks: &[Check], names: &[&str]) -> Criterion {
    let selected: Vec<&Check> = checks
        .iter()
        .filter(|c| names.contains(&c.name.as_str()))
        .collect();
    assert_eq!(selected.len(), names.len(), "missing checks for {label}");
    let pass = selected.iter().all(|c| c.pass);
    let detail = selected
        .iter()
        .map(|c| format!("{}={:.3e} (tol {:.1e})", c.name, c.measured, c.tolerance))
        .collect::<Vec<_>>()
        .join(", ");
    Criterion { label, pass, detail }
}

/// Byte-identical artifacts across two identical binary invocations.
fn determinism_criterion() -> Criterion {
    let bin = env!("CARGO_BIN_EXE_hypergreen");
    let dir = std::env::temp_dir().join("hypergreen-acceptance");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let config = format!(
        "{}/tests/data/solve.toml",
        env!("CARGO_MANIFEST_DIR")
    );
    let mut outputs = Vec::new();
    for run in 0..2 {
        let solve_out = dir.join(format!("solve-{run}.csv"));
        let status = Command::new(bin)
            .args(["solve", "--config", &config, "--out"])
            .arg(&solve_out)
            .status()
            .expect("spawn solve");
        assert!(status.success(), "solve run {run} failed");
        let verify_out = dir.join(format!("verify-{run}.txt"));
        let status = Command::new(bin)
            .args(["verify", "--suite", "domain", "--seed", "3", "--out"])
            .arg(&verify_out)
            .status()
            .expect("spawn verify");
        assert!(status.success(), "verify run {run} failed");
        outputs.push((
            std::fs::read(&solve_out).expect("solve artifact"),
            std::fs::read(&verify_out).expect("verify artifact"),
        ));
    }
    let pass = outputs[0] == outputs[1];
    Criterion {
        label: "criterion 10: determinism (solve + verify byte-identical)",
        pass,
        detail: format!(
            "solve bytes {} == {}, verify bytes {} == {}",
            outputs[0].0.len(),
            outputs[1].0.len(),
            outputs[0].1.len(),
            outputs[1].1.len()
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let seed = 0u64;
    let hyperfun = verify::suite_hyperfun(seed);
    let kernel = verify::suite_kernel(seed);
    let solver = verify::suite_solver(seed);
    let oracle = verify::suite_oracle(seed);

    let criteria = vec![
        from_checks(
            "criterion 1: Gauss summation at the boundary point",
            &hyperfun,
            &["gauss-summation-series-vs-closed", "gauss-closed-vs-gamma-oracle"],
        ),
        from_checks(
            "criterion 2: negative-argument auto-transformation",
            &hyperfun,
            &["gauss-negative-transform"],
        ),
        from_checks(
            "criterion 3: decomposition formula and index parity",
            &hyperfun,
            &["decomposition-vs-reference", "index-map-parity"],
        ),
        from_checks(
            "criterion 4: limit identity (series vs closed form)",
            &hyperfun,
            &["aleph-limit-identity"],
        ),
        from_checks("criterion 5: sphere constants", &hyperfun, &["sphere-constants"]),
        from_checks(
            "criterion 6: fundamental solution (residual, trace, symmetry)",
            &kernel,
            &["q-residual-order", "q-trace-exponent", "q-symmetry"],
        ),
        from_checks(
            "criterion 7: gradient formulas and adjacent relation",
            &kernel,
            &["gradient-vs-fd", "adjacent-relation"],
        ),
        from_checks(
            "criterion 8: Green's function boundary behavior",
            &kernel,
            &["green-boundary-vanishing", "boundary-kernel-vs-limit"],
        ),
        from_checks(
            "criterion 9: Dirichlet solver (constant, manufactured, fd, maximum principle)",
            &[&solver[..], &oracle[..]].concat(),
            &[
                "solver-constant-data",
                "solver-manufactured-pole",
                "solver-vs-fd-cross-check",
                "solver-maximum-principle",
            ],
        ),
        determinism_criterion(),
    ];

    let mut all = true;
    for c in &criteria {
        all &= c.pass;
        println!(
            "{} {} [{}]",
            if c.pass { "PASS" } else { "FAIL" },
            c.label,
            c.detail
        );
    }
    assert!(all, "one or more acceptance criteria failed");
}
