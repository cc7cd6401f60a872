use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_richbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_verdicts_and_exit_codes() {
    let o = run(&["check", "abba"]);
    assert_eq!(stdout(&o).trim(), "rich 4/4");
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["check", "abca"]);
    assert_eq!(stdout(&o).trim(), "not-rich 3/4");
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["check", ""]);
    assert_eq!(stdout(&o).trim(), "rich 0/0");
    assert_eq!(o.status.code(), Some(0));

    assert_eq!(run(&["check", "abc", "--q", "2"]).status.code(), Some(2));
    assert_eq!(run(&["check", "ab!"]).status.code(), Some(2));
}

#[test]
fn count_tables() {
    let o = run(&["count", "--q", "2", "--n", "3"]);
    assert_eq!(stdout(&o), "n,R\n1,2\n2,4\n3,8\n");
    let o = run(&["count", "--q", "1", "--n", "4"]);
    assert_eq!(stdout(&o), "n,R\n1,1\n2,1\n3,1\n4,1\n");
    let one = run(&["count", "--q", "2", "--n", "12", "--threads", "1"]);
    let four = run(&["count", "--q", "2", "--n", "12", "--threads", "4"]);
    assert_eq!(one.stdout, four.stdout);
    assert!(stdout(&one).ends_with("12,3246\n"));
}

#[test]
fn csv_and_json_agree() {
    let csv = stdout(&run(&["count", "--q", "3", "--n", "6"]));
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&[
        "count", "--q", "3", "--n", "6", "--format", "json",
    ])))
    .unwrap();
    for (line, row) in csv.lines().skip(1).zip(json.as_array().unwrap()) {
        let (n, r) = line.split_once(',').unwrap();
        assert_eq!(row["n"].to_string(), n);
        assert_eq!(row["R"].as_str().unwrap(), r);
    }
}

#[test]
fn enumerate_and_sample() {
    let o = run(&["enumerate", "--q", "2", "--n", "2"]);
    assert_eq!(stdout(&o), "aa\nab\nba\nbb\n");
    let o = run(&["enumerate", "--q", "2", "--n", "9"]);
    assert_eq!(stdout(&o).lines().count(), 488);
    let a = run(&["sample", "--q", "3", "--n", "40", "--seed", "5"]);
    let b = run(&["sample", "--q", "3", "--n", "40", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let w = stdout(&a);
    let o = run(&["check", w.trim(), "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bound_grid() {
    let o = run(&["bound", "--n", "1e3,1e6,1e9,1e12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,f,tau,e_n,lnq_G,R,verdict_G,verdict_B")
    );
    let rates: Vec<f64> = lines
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            c[3].parse::<f64>().unwrap() / c[0].parse::<f64>().unwrap()
        })
        .collect();
    assert_eq!(rates.len(), 4);
    assert!(rates.windows(2).all(|w| w[1] < w[0]));

    let o = run(&["bound", "--phi", "sqrt", "--q", "2", "--n", "1e6"]);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let f: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((f - 1.732).abs() < 1e-3);

    let o = run(&["bound", "--n", "1e6", "--lambda", "1.2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lambda"));
}

#[test]
fn bound_with_counts() {
    let o = run(&["bound", "--n", "4,8,12"]);
    let text = stdout(&o);
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",less,less"), "{line}");
    }
    assert!(text.contains("\n12,") && text.contains(",3246,"));
}

#[test]
fn config_file_and_flags() {
    let dir = std::env::temp_dir().join(format!("richbound-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.txt");
    std::fs::write(&path, "# test\nlambda = 0.6\nk1_exp=1\n").unwrap();
    let p = path.to_str().unwrap();
    let with_file = stdout(&run(&["bound", "--n", "1e12", "--config", p]));
    assert_eq!(
        with_file.lines().nth(1).unwrap().split(',').nth(2),
        Some("4")
    );
    // flags win over the file
    let o = run(&["bound", "--n", "1e12", "--config", p, "--lambda", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&path, "bogus=1\n").unwrap();
    assert_eq!(
        run(&["bound", "--n", "10", "--config", p]).status.code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn fit_c6_default() {
    let o = run(&["fit-c6", "--j", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("c6 = 3\n"));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = run(&["verify", "--samples", "50", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL oracle equivalence"));

    assert_eq!(run(&["verify", "--n", "40"]).status.code(), Some(3));
}

#[test]
fn table_rows() {
    let o = run(&["table", "--n", "12", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[7]["R"], "252");
    assert!(rows[0]["f"].is_null());
    assert_eq!(v["conditional_on_config"], true);
}

#[test]
fn bad_grid_values() {
    assert_eq!(run(&["bound", "--n", "1.5e0"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "--n", "0"]).status.code(), Some(2));
}
