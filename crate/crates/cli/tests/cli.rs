use std::path::PathBuf;
use std::process::{Command, Output};

fn dilation(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilation")).args(args).output().expect("binary runs")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dilation-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(dilation(&[]).status.code(), Some(1));
    assert_eq!(dilation(&["table3"]).status.code(), Some(1));
    assert_eq!(dilation(&["table1", "--alpha", "1.5"]).status.code(), Some(1));
    assert_eq!(dilation(&["table1", "--grid", "1:0:0.1"]).status.code(), Some(1));
    assert_eq!(dilation(&["rate-study", "--dimension", "1"]).status.code(), Some(1));
    assert_eq!(dilation(&["table2", "--n", "50", "--subsample-size", "50"]).status.code(), Some(1));
    assert_eq!(dilation(&["--help"]).status.code(), Some(0));
}

#[test]
fn cara_check_exit_codes() {
    let ok = dilation(&["cara-check"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("true"));
    let point = dilation(&["cara-check", "--lambda-lo", "1", "--lambda-hi", "1", "--eta", "0.3"]);
    assert_eq!(point.status.code(), Some(0));
    // the analytic interval [1/2, 2] is not on a grid that stops at 1.5
    let clipped = dilation(&["cara-check", "--grid", "0:1.5:0.001"]);
    assert_eq!(clipped.status.code(), Some(2));
}

#[test]
fn csv_output_and_summary() {
    let out = temp_path("table1.csv");
    let run = dilation(&[
        "table1",
        "--n",
        "40",
        "--mc-reps",
        "5",
        "--bootstrap-reps",
        "100",
        "--alpha",
        "0.05",
        "--alpha",
        "0.1",
        "--grid",
        "-3:3:0.01",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("rejection_rate"));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "design,n,alpha,aux_size,reps,rejections,rejection_rate,mc_se,seed");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("table1,40,0.05,100,5,"));
    assert!(!csv.contains('\r') && csv.ends_with('\n'));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let cfg = temp_path("run.cfg");
    let out_cfg = temp_path("from_config.csv");
    std::fs::write(
        &cfg,
        format!("# small run\nn=30\nmc-reps=4\nbootstrap-reps=100\nalpha=0.1\nseed=9\nout={}\n", out_cfg.display()),
    )
    .unwrap();
    let run = dilation(&["table1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let from_file = std::fs::read_to_string(&out_cfg).unwrap();
    assert!(from_file.lines().nth(1).unwrap().starts_with("table1,30,0.1,100,4,"));
    assert!(from_file.lines().nth(1).unwrap().ends_with(",9"));

    let out_flag = temp_path("from_flags.csv");
    let run = dilation(&[
        "table1",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "10",
        "--alpha",
        "0.05",
        "--out",
        out_flag.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let row = std::fs::read_to_string(&out_flag).unwrap().lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("table1,30,0.05,100,4,") && row.ends_with(",10"), "{row}");

    std::fs::write(&cfg, "bogus=1\n").unwrap();
    assert_eq!(dilation(&["table1", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn csv_is_identical_across_worker_counts() {
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let out = temp_path(&format!("table2_w{workers}.csv"));
        let run = dilation(&[
            "table2",
            "--n",
            "50",
            "--mc-reps",
            "8",
            "--bootstrap-reps",
            "50",
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(run.status.code(), Some(0));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
