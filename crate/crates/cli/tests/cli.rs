use std::process::{Command, Output};

fn pizzeria(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pizzeria"))
        .args(args)
        .env_remove("PIZZERIA_TRUNC_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn nu_on_cusp_axis() {
    let o = pizzeria(&["nu", "y^2-x^3", "y = 0 [x>0]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn nu_along_branch_is_infinite() {
    let o = pizzeria(&["nu", "y^2-x^3", "y = x^(3/2) [x>0]"]);
    assert_eq!(stdout(&o), "inf\n");
}

#[test]
fn width_and_contact_are_exact() {
    assert_eq!(
        stdout(&pizzeria(&["width", "y^2-x^3", "y = 0 [x>0]"])),
        "3/2\n"
    );
    assert_eq!(stdout(&pizzeria(&["width", "x*y", "y = x^3 [x>0]"])), "3\n");
    assert_eq!(
        stdout(&pizzeria(&[
            "contact",
            "y^2-x^3",
            "y = x^(3/2)",
            "y = 2*x^(3/2)"
        ])),
        "3/2\n"
    );
    assert_eq!(
        stdout(&pizzeria(&[
            "contact",
            "y^2-x^3",
            "y = 0 [x>0]",
            "x = 0 [y>0]"
        ])),
        "1\n"
    );
}

#[test]
fn resolve_cusp() {
    let dot = std::env::temp_dir().join(format!("pizzeria-cusp-{}.dot", std::process::id()));
    let o = pizzeria(&["resolve", "y^2-x^3", "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let components: Vec<&str> = text.lines().filter(|l| l.starts_with("lbar=")).collect();
    assert_eq!(
        components,
        [
            "lbar=1 E1 l=1 m=1 r=2",
            "lbar=2 E2 l=1 m=2 r=3",
            "lbar=4 E3 l=2 m=3 r=6"
        ]
    );
    assert!(components[2].ends_with("E3 l=2 m=3 r=6"));
    assert!(text.contains("edge E1 -- E3\nedge E2 -- E3\nbranch B1 meets E3\n"));
    let graph = std::fs::read_to_string(&dot).unwrap();
    std::fs::remove_file(&dot).ok();
    assert!(graph.starts_with("graph resolution {") && graph.contains("E3 -- B1;"));
}

#[test]
fn puiseux_lists_cusp_half_branches() {
    let text = stdout(&pizzeria(&["puiseux", "y^2-x^3"]));
    assert!(text.contains("real y = -x^(3/2) [x>0] multiplicity=1 ramification=2"));
    assert!(text.contains("real y = x^(3/2) [x>0] multiplicity=1 ramification=2"));
}

#[test]
fn pizza_json_for_cross() {
    let o = pizzeria(&["pizza", "x*y", "--json"]);
    let slice =
        |s: i8| format!(r#"{{"beta":"1","Q":["2","inf"],"mu":{{"a":"1","b":"-1"}},"sign":{s}}}"#);
    let expected = format!(
        r#"{{"germ":"x*y","slices":[{},{},{},{}]}}"#,
        slice(-1),
        slice(1),
        slice(-1),
        slice(1)
    );
    assert_eq!(stdout(&o), expected + "\n");
}

#[test]
fn pizza_text_for_circle() {
    let text = stdout(&pizzeria(&["pizza", "x^2+y^2"]));
    assert_eq!(
        text,
        "germ x^2 + y^2\nslice 0: beta=1 Q=[2, 2] mu=1 sign=1\n"
    );
}

#[test]
fn equiv_exit_codes() {
    let o = pizzeria(&["equiv", "x^2+y^2", "x^2+y^4"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(
        text.starts_with("NOT_EQUIVALENT\narc x = 0 [y>0]: nu 2 vs 4"),
        "{text}"
    );
    let o = pizzeria(&["equiv", "x*y", "x^2-y^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("EQUIVALENT\nrotation="));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    for args in [
        vec!["nu", "1 + x", "y = 0"],
        vec!["nu", "y^2-x^3", "y = x^(1/2) [x>0]"],
        vec!["nu", "y^2-", "y = 0"],
        vec!["frobnicate"],
        vec!["nu", "y^2-x^3"],
    ] {
        let o = pizzeria(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn truncation_cap_variable_is_validated() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_pizzeria"))
            .args(["nu", "y^2-x^3", "y = 0 [x>0]"])
            .env("PIZZERIA_TRUNC_CAP", cap)
            .output()
            .unwrap()
    };
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("many").status.code(), Some(2));
    let o = run("64");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn output_is_deterministic() {
    let args = ["pizza", "(y^2-x^3)*(y-x^2)"];
    assert_eq!(pizzeria(&args).stdout, pizzeria(&args).stdout);
}
