use std::process::{Command, Output};

fn kummerlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kummerlab")).args(args).output().expect("spawn kummerlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn pairs_file(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("kummerlab-{}-{name}.csv", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn help_exits_zero() {
    assert_eq!(kummerlab(&["--help"]).status.code(), Some(0));
    assert_eq!(kummerlab(&["sweep", "--help"]).status.code(), Some(0));
}

#[test]
fn bad_input_exits_four() {
    assert_eq!(kummerlab(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(kummerlab(&["field", "info", "no_such_field"]).status.code(), Some(4));
    let f = pairs_file("bad", "2 0;3 0\n");
    assert_eq!(kummerlab(&["symbols", "--field", "qzeta3", "--pairs", &f]).status.code(), Some(4));
    let f = pairs_file("zero", "0 0,3 0\n");
    assert_eq!(kummerlab(&["symbols", "--field", "qzeta3", "--pairs", &f]).status.code(), Some(4));
}

#[test]
fn precision_beyond_the_cap_exits_three() {
    let o = kummerlab(&["--precision", "99", "tate-kernel", "--field", "qzeta3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precision exhausted"));
}

#[test]
fn missing_class_group_representatives_exit_two() {
    assert_eq!(kummerlab(&["tate-kernel", "--field", "q257"]).status.code(), Some(2));
}

#[test]
fn field_info_is_json() {
    let o = kummerlab(&["field", "info", "qzeta9"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn symbols_tsv_layout() {
    let f = pairs_file("ok", "# a,b\n2 0,3 0\n7 1,1 -1\n3 0,-1 -1\n");
    let o = kummerlab(&["symbols", "--field", "qzeta3", "--pairs", &f]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("pair\tplace\tvalue"));
    let mut residuals = 0;
    for l in lines {
        let cols: Vec<&str> = l.split('\t').collect();
        assert_eq!(cols.len(), 3, "{l}");
        let v: u64 = cols[2].parse().unwrap();
        assert!(v < 3);
        if cols[1] == "residual" {
            residuals += 1;
            assert_eq!(v, 0);
        }
    }
    assert_eq!(residuals, 3);
}

#[test]
fn sweep_is_independent_of_jobs() {
    let run = |jobs: &str| {
        let o = kummerlab(&["--jobs", jobs, "sweep", "--field", "qzeta3", "--radicand-norm-max", "40"]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let v: serde_json::Value = serde_json::from_str(&one).unwrap();
    assert!(v["kummer_lines"].as_u64().unwrap() > 0);
}

#[test]
fn cap_reports_the_bound() {
    let o = kummerlab(&["cap", "--field", "qzeta3", "--ext", "rad7", "--w", "units"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["selected"]["bound"]["t_w"], 2);
    assert_eq!(v["selected"]["bound"]["bound"], "9");
}

#[test]
fn verify_suite_subset_passes() {
    let o = kummerlab(&["verify-suite", "--only", "3,4,9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
