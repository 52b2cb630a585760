use std::process::{Command, Output};

use serde_json::Value;
use tubecc::{char_module, LaurentPoly, TubeModule};

fn tubecc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tubecc"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn documented_commands() {
    let cases: &[(&[&str], &str)] = &[
        (&["--rank", "1", "char", "E(1,5)"], "6\n"),
        (&["--rank", "3", "char", "0"], "1\n"),
        (
            &["--rank", "4", "decompose", "E(2,5)"],
            "{E(2,1): 2, E(4,1): 1}\n",
        ),
        (&["--rank", "4", "rigid", "E(1,4)"], "false\n"),
        (&["--rank", "4", "rigid", "E(1,3) + E(2,2)"], "true\n"),
        (&["--rank", "2", "decompose", "E(1,2)"], "{0: 3}\n"),
        (&["--rank", "4", "hom", "E(1,2)", "E(2,3)"], "1\n"),
        (&["--rank", "4", "hom", "E(1,2)", "E(4,3)"], "0\n"),
    ];
    for (args, want) in cases {
        let o = tubecc(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o), *want, "{args:?}");
    }
}

#[test]
fn exit_code_contract() {
    assert_eq!(
        tubecc(&["--rank", "3", "char", "E(1,2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tubecc(&["--rank", "3", "char", "E(4,2)+"]).status.code(),
        Some(2)
    );
    assert_eq!(tubecc(&["char", "E(1,2)"]).status.code(), Some(2));
    assert_eq!(
        tubecc(&["--rank", "3", "--format", "yaml", "char", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        tubecc(&["--rank", "2", "decompose", "--poly", "{\"rank\": 2}"])
            .status
            .code(),
        Some(2)
    );
    let o = tubecc(&["verify", "--suite", "ar", "--max-rank", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("total: 28 checked, 0 failures\n"));
}

#[test]
fn corrupted_euler_form_is_caught() {
    let o = tubecc(&[
        "verify",
        "--suite",
        "all",
        "--max-rank",
        "3",
        "--fault",
        "euler-sign",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first failure"));
}

#[test]
fn printed_modules_reparse() {
    let o = tubecc(&[
        "--rank",
        "4",
        "--format",
        "json",
        "decompose",
        "E(1,4)",
        "E(2,1)",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rank"], 4);
    let mut sum = LaurentPoly::zero(4);
    for t in v["terms"].as_array().unwrap() {
        let m = TubeModule::parse(4, t["module"].as_str().unwrap()).unwrap();
        assert_eq!(m.to_expr(), t["module"].as_str().unwrap());
        sum = &sum + &char_module(&m).scale(&t["coeff"].as_i64().unwrap().into());
    }
    assert_eq!(
        sum,
        char_module(&TubeModule::parse(4, "E(1,4)+E(2,1)").unwrap())
    );

    let o = tubecc(&[
        "--rank", "3", "--format", "json", "mult", "E(1,2)", "E(3,1)",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verified"], true);
    for t in v["terms"].as_array().unwrap() {
        let s = t["module"].as_str().unwrap();
        assert_eq!(TubeModule::parse(3, s).unwrap().to_expr(), s);
    }
}

#[test]
fn json_characters_round_trip() {
    let o = tubecc(&["--rank", "5", "--format", "json", "char", "E(2,9)+E(3,4)"]);
    let p = LaurentPoly::from_json(stdout(&o).trim()).unwrap();
    assert_eq!(
        p,
        char_module(&TubeModule::parse(5, "E(2,9)+E(3,4)").unwrap())
    );
    let o = tubecc(&["--rank", "5", "decompose", "--poly", stdout(&o).trim()]);
    assert_eq!(o.status.code(), Some(0));
}
