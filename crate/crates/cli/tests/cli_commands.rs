use std::process::{Command, Output};

use pilotbound_cli::{fig1, fig2, fig3, fig4, linear_grid, Unit};

fn pilotbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pilotbound")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = pilotbound(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn parse_value(line: &str) -> f64 {
    line.split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn fig1_share_runs_from_half_to_high_snr_limit() {
    let t = fig1(&linear_grid(-20.0, 30.0, 0.5).unwrap()).unwrap();
    let nu: Vec<f64> = t.column("nu_opt").unwrap().into_iter().map(Option::unwrap).collect();
    assert!((nu[0] - 0.5).abs() < 2e-3, "{}", nu[0]);
    let high = (3.0 - 3f64.sqrt()) / 2.0;
    assert!((nu.last().unwrap() - high).abs() < 5e-3, "{}", nu.last().unwrap());
    assert!(nu.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn fig2_optimum_dominates_fixed_shares() {
    let t = fig2(&linear_grid(-20.0, 30.0, 2.5).unwrap(), Unit::Nats).unwrap();
    for row in &t.rows {
        let [_, opt, low, high] = [row[0], row[1], row[2], row[3]].map(Option::unwrap);
        assert!(opt >= low - 1e-12 && opt >= high - 1e-12, "{row:?}");
    }
}

#[test]
fn fig3_endpoints() {
    let t = fig3(&[0.0, 1.0], 1.0, Unit::Nats).unwrap();
    let row = |i: usize| -> Vec<f64> { t.rows[i].iter().map(|c| c.unwrap()).collect() };
    let rayleigh = row(0);
    assert_eq!(rayleigh[1], 0.0);
    assert!((rayleigh[2] - 0.046961).abs() < 1e-6, "{rayleigh:?}");
    assert!(rayleigh[3] >= rayleigh[2] - 1e-12);
    let los = row(1);
    assert!((los[1] - 2f64.ln()).abs() < 1e-12, "{los:?}");
    assert!(los[3] >= los[1].max(los[2]) - 1e-12);
}

#[test]
fn fig4_orthogonal_wins_at_long_coherence() {
    let t = fig4(&[1, 2, 100], 0.1, Unit::Nats).unwrap();
    assert_eq!(t.rows[0][2], None);
    let (sup, orth) = (t.rows[2][1].unwrap(), t.rows[2][2].unwrap());
    assert!(orth > sup, "{sup} vs {orth}");
    assert!(t.to_csv().lines().nth(1).unwrap().ends_with(','));
}

#[test]
fn bound_subcommand_values() {
    let v = parse_value(&stdout(&["bound", "--theorem", "1", "--rho", "1", "--nu", "0.5"]));
    assert!((v - 0.0465200156349).abs() < 1e-12, "{v}");
    let block = parse_value(&stdout(&["bound", "--theorem", "block", "--nc", "2", "--rho", "1", "--nu", "0.5"]));
    assert!((block - 0.088311767839658).abs() < 1e-12, "{block}");
    let medard = stdout(&["bound", "--theorem", "medard", "--preset", "rician:1", "--rho", "1", "--unit", "bits"]);
    assert_eq!(medard.trim(), "1 bits");
}

#[test]
fn bound_rejects_bad_input() {
    let out = pilotbound(&["bound", "--theorem", "1", "--rho", "1", "--nu", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pilotbound(&["bound", "--theorem", "block", "--lambda", "0.5", "--nu", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_output_is_deterministic() {
    let args = ["fig1", "--snr-db-start", "-5", "--snr-db-stop", "5", "--snr-db-step", "1"];
    let first = stdout(&args);
    assert_eq!(first, stdout(&args));
    assert!(first.starts_with("SNRdB,nu_opt\n"));
    assert_eq!(first.lines().count(), 12);
}

#[test]
fn validate_reports_and_exits_cleanly() {
    let report = stdout(&["validate", "--rho", "1", "--n", "200000", "--seed", "3"]);
    assert!(report.starts_with("quantity, analytic, mc, se, pass"));
    assert!(!report.contains("fail"), "{report}");
}
