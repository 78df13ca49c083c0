use charp_cli::{parse_session, run_command, CliError, Options, COMMANDS};
use serde_json::Value;

const SEGRE: &str = include_str!("../../../sessions/segre.charp");
const CONE: &str = include_str!("../../../sessions/cone.charp");
const PLANE: &str = include_str!("../../../sessions/plane.charp");

fn run(session: &str, command: &str) -> (charp_cli::Report, Vec<Value>) {
    let spec = parse_session(session).unwrap();
    let report = run_command(&spec, command, &Options::default()).unwrap();
    let lines = report
        .to_json_lines()
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (report, lines)
}

#[test]
fn trace_eval_uses_the_declared_map() {
    let (report, lines) = run(SEGRE, "trace-eval");
    assert_eq!(report.exit_code(), 0);
    assert_eq!(lines[0]["data"]["map"], "phi");
    assert_eq!(lines[0]["data"]["value"], "1");
}

#[test]
fn bare_trace_when_e_is_given() {
    let (_, lines) = run(&format!("{SEGRE}param e = 1;"), "trace-eval");
    assert_eq!(lines[0]["data"]["map"], "Phi^1");
    assert_eq!(lines[0]["data"]["value"], "0");
}

#[test]
fn lala_check_reproduces_the_worked_lift() {
    let (report, lines) = run(SEGRE, "lala-check");
    assert_eq!(report.exit_code(), 0);
    let data = &lines[0]["data"];
    assert_eq!(data["psi"], "x1*y0*y1");
    assert_eq!(data["lift"]["value"], "y0_1*x1_2*y1_2");
    let (_, first) = run(&format!("{SEGRE}param residual = first;"), "lala-check");
    assert_eq!(first[0]["data"]["lift"]["value"], "x1_1*y0_1*y1_1");
}

#[test]
fn summary_is_the_last_line() {
    for command in ["trace-eval", "lala-check", "compat-check"] {
        let (report, lines) = run(SEGRE, command);
        let summary = lines.last().unwrap();
        assert_eq!(summary["type"], "summary");
        assert_eq!(summary["command"], command);
        assert_eq!(summary["records"], lines.len() - 1);
        assert_eq!(summary["verdict"], report.verdict.to_string());
        assert!(lines[..lines.len() - 1].iter().all(|l| l["type"] == "record"));
    }
}

#[test]
fn incompatible_ideal_fails() {
    let (report, lines) = run(SEGRE, "compat-check");
    assert_eq!(report.exit_code(), 1);
    assert_eq!(lines[0]["data"]["compatible"], false);
}

#[test]
fn cone_symbolic_and_containment() {
    let (report, _) = run(CONE, "symbolic");
    assert_eq!(report.exit_code(), 0);
    let (report, lines) = run(CONE, "ustp");
    assert_eq!(report.exit_code(), 0);
    assert!(lines.last().unwrap()["caveats"].as_array().unwrap().iter().any(|c| c.as_str().unwrap().contains("primality")));
}

#[test]
fn plane_test_ideal_commands() {
    assert_eq!(run(PLANE, "testideal").0.exit_code(), 0);
    assert_eq!(run(PLANE, "bs-check").0.exit_code(), 0);
    // 5/6 at p = 2 does not stabilize within the default budget.
    assert_eq!(run(PLANE, "subadd-check").0.exit_code(), 2);
    let spec = parse_session(&PLANE.replace("5/6", "1")).unwrap();
    let report = run_command(&spec, "subadd-check", &Options::default()).unwrap();
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn every_listed_command_is_dispatched() {
    let spec = parse_session("char 2; vars x;").unwrap();
    for command in COMMANDS {
        match run_command(&spec, command, &Options::default()) {
            Err(CliError::Usage(msg)) => assert!(!msg.contains("unknown command"), "{command}: {msg}"),
            Err(CliError::Core(_)) | Ok(_) => {}
            Err(other) => panic!("{command}: {other}"),
        }
    }
    assert!(matches!(run_command(&spec, "nope", &Options::default()), Err(CliError::Usage(_))));
}

#[test]
fn caps_surface_as_errors() {
    let spec = parse_session(SEGRE).unwrap();
    let opts = Options { cap: Some(10), ..Options::default() };
    assert!(run_command(&spec, "dn-witness", &opts).is_err());
}

#[test]
fn lift_verify_sweeps_all_basis_elements_at_two() {
    let (report, lines) = run("char 2; segre r=1 s=1;", "lift-verify");
    assert_eq!(report.exit_code(), 0);
    assert_eq!(lines[0]["data"]["result"]["basis_elements"], 256);
}

#[test]
fn trace_of_the_top_monomial_is_one() {
    let (_, lines) = run("char 2; segre r=1 s=1; param f = x0*y0*x1*y1;", "trace-eval");
    assert_eq!(lines[0]["data"]["value"], "1");
}

#[test]
fn ustp_passes_on_the_cone_in_each_small_characteristic() {
    for p in [2, 3, 5] {
        let (report, lines) = run(&CONE.replace("char 3;", &format!("char {p};")), "ustp");
        assert_eq!(report.exit_code(), 0, "p = {p}");
        assert_eq!(lines[0]["data"]["report"]["levels"].as_array().unwrap().len(), 3);
    }
}
