use std::process::Command;

use serde_json::Value;

fn k2lab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_k2lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = k2lab(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn sum_l_report_shape() {
    let v = json(&["--q", "5", "--g", "0", "--experiment", "sum-l"]);
    assert_eq!(v["meta"]["q"], 5);
    assert_eq!(v["meta"]["gamma"], 2);
    assert_eq!(v["meta"]["mode"], "sum-l");
    assert_eq!(v["meta"]["sample_size"], 0);
    let rows = v["results"].as_array().unwrap();
    let total = rows.iter().find(|r| r["name"] == "l_sum_main_term").unwrap();
    assert_eq!(total["empirical"]["num"], "104");
    assert_eq!(total["empirical"]["den"], "5");
    assert!(v["fixtures_version"].is_string());
    assert!(v.get("runtime_seconds").is_none());
}

#[test]
fn even_average_with_other_generator() {
    let a = json(&["--q", "5", "--g", "1", "--experiment", "avg-even"]);
    let b = json(&["--q", "5", "--g", "1", "--experiment", "avg-even", "--gamma", "3"]);
    assert_eq!(b["meta"]["gamma"], 3);
    assert_eq!(a["results"], b["results"]);
}

#[test]
fn identities_exit_zero_and_csv() {
    let out = k2lab(&["--q", "7", "--g", "0", "--experiment", "identities", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")), "{text}");
}

#[test]
fn sampled_runs_repeat_and_write_files() {
    let dir = std::env::temp_dir().join(format!("k2lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let paths: Vec<_> = [1, 2]
        .into_iter()
        .map(|t| {
            let path = dir.join(format!("r{t}.json"));
            let threads = t.to_string();
            let out = k2lab(&[
                "--q", "5", "--g", "2", "--experiment", "avg-even", "--sample", "40", "--seed", "7",
                "--threads", &threads, "--out", path.to_str().unwrap(),
            ]);
            assert!(out.status.success());
            assert!(out.stdout.is_empty());
            path
        })
        .collect();
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["meta"]["sample_size"], 40);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bad_input_is_reported() {
    for (args, needle) in [
        (vec!["--q", "9", "--experiment", "sum-l"], "not prime"),
        (vec!["--q", "5", "--gamma", "4", "--experiment", "sum-l"], "does not generate"),
        (vec!["--q", "5", "--g", "3", "--experiment", "sum-l"], "budget"),
    ] {
        let out = k2lab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr).to_lowercase();
        assert!(err.contains(needle), "{args:?}: {err}");
    }
    assert!(!k2lab(&["--experiment", "nope"]).status.success());
}
