use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use clap::Parser;
use illposed::{resolve, Cli};
use illposed_core::field_io::save_binary;
use illposed_core::*;

fn illposed(args: &[&str], env_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_illposed"));
    cmd.args(args).env_remove("ILLPOSED_OUTPUT_DIR");
    if let Some(d) = env_dir {
        cmd.env("ILLPOSED_OUTPUT_DIR", d);
    }
    cmd.output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn small_cascade(dir: &Path) -> Output {
    illposed(&["cascade", "--set", "points=32768", "--set", "j_max=8", "--output-dir", dir.to_str().unwrap()], None)
}

#[test]
fn norm_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let g = UniformPeriodicGrid::new(1, 1024, 4.0).unwrap();
    let f = Field::from_fn_1d(g, |x| (-(x * x)).exp() * (5.0 * x).cos()).unwrap();
    let path = dir.path().join("f.bin");
    save_binary(&f, &path).unwrap();
    let out = illposed(&["norm", "--input", path.to_str().unwrap(), "--s", "2", "--p", "2", "--j-max", "5"], None);
    assert!(out.status.success(), "{}", stderr(&out));
    let printed: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    let want = besov_norm(&f, BesovIndex::new(2.0, 2.0).unwrap(), 5).unwrap();
    assert!((printed / want - 1.0).abs() < 1e-14);

    let missing = illposed(&["norm", "--input", "/nonexistent/f.bin", "--s", "2", "--p", "2"], None);
    assert_eq!(missing.status.code(), Some(1));
    let bad_index = illposed(&["norm", "--input", path.to_str().unwrap(), "--s", "2", "--p", "0.5"], None);
    assert_eq!(bad_index.status.code(), Some(2));
}

#[test]
fn cascade_reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = small_cascade(a.path());
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    assert_eq!(small_cascade(b.path()).status.code(), Some(0));
    for name in ["cascade.csv", "cascade.dat"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let csv = std::fs::read_to_string(a.path().join("cascade.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,t,err_ap1,err_ap2,err_ap3,err_ap4");
    assert_eq!(lines.iter().filter(|l| l.starts_with("8,")).count(), 4);
    assert!(lines.iter().any(|l| l.starts_with("order,8,")));
    assert_eq!(*lines.last().unwrap(), "result,pass");
}

#[test]
fn failed_checks_exit_one_and_still_write_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = illposed(
        &[
            "burgers-gap",
            "--n",
            "8,12",
            "--set",
            "points=32768",
            "--set",
            "j_max=8",
            "--jobs",
            "1",
            "--output-dir",
            dir.path().to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("burgers-gap.csv")).unwrap();
    assert!(csv.starts_with("n,t_n,init_dist,block_gap,besov_gap,floor_estimate,ap4_gap,cascade_budget,origin_gap\n"));
    assert!(csv.lines().any(|l| l.starts_with("8,")));
    assert!(csv.lines().any(|l| l.starts_with("failure,12,")));
    assert!(csv.lines().any(|l| l == "check,failed_cells,1e0,<=,0e0,fail"));
    assert!(dir.path().join("burgers-gap.dat").exists());
}

#[test]
fn environment_supplies_the_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = illposed(&["cascade", "--set", "points=32768", "--set", "j_max=8", "--save-data"], Some(dir.path()));
    assert!(out.status.success(), "{}", stderr(&out));
    for name in ["cascade.csv", "cascade-u0.bin", "cascade-u0.csv"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
}

#[test]
fn config_errors_exit_two_with_locations() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    std::fs::write(&cfg, "jobs = 1\n\n[cascade]\npoints = 32768\nj_mx = 8\n").unwrap();
    let out = illposed(&["cascade", "--config", cfg.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("run.ini:5"), "{msg}");
    assert!(msg.contains("did you mean `j_max`"), "{msg}");

    let out = illposed(&["lemmas", "--set", "cascade.ponts=3"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("did you mean `points`"));
    assert_eq!(illposed(&["lemmas", "--jobs", "0"], None).status.code(), Some(2));
    assert_eq!(illposed(&["euler-gap", "--s", "1.5"], None).status.code(), Some(2));
    assert_eq!(illposed(&["no-such-command"], None).status.code(), Some(2));
}

#[test]
fn settings_layer_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    std::fs::write(&cfg, "output_dir = from-file\njobs = 3\n[euler-gap]\nn = 5..6\ns = 3\npoints = 512\n").unwrap();
    let parse = |extra: &[&str]| {
        let mut argv = vec!["illposed", "euler-gap", "--config", cfg.to_str().unwrap()];
        argv.extend_from_slice(extra);
        Cli::try_parse_from(argv).unwrap()
    };
    let env = Some(PathBuf::from("from-env"));
    let r = resolve(&parse(&[]), env.clone()).unwrap().unwrap();
    assert_eq!(r.scenario.n_list, vec![5, 6]);
    assert_eq!(r.scenario.index.s, 3.0);
    assert_eq!(r.scenario.points_per_axis, 512);
    assert_eq!(r.jobs, Some(3));
    assert_eq!(r.output_dir, PathBuf::from("from-file"));

    let r = resolve(&parse(&["--set", "points=256", "--set", "n=7", "--n", "8..9", "--jobs", "2"]), env.clone())
        .unwrap()
        .unwrap();
    assert_eq!(r.scenario.points_per_axis, 256);
    assert_eq!(r.scenario.n_list, vec![8, 9]);
    assert_eq!(r.jobs, Some(2));

    let bare = Cli::try_parse_from(["illposed", "lemmas", "--output-dir", "flag"]).unwrap();
    assert_eq!(resolve(&bare, env.clone()).unwrap().unwrap().output_dir, PathBuf::from("flag"));
    let bare = Cli::try_parse_from(["illposed", "lemmas"]).unwrap();
    assert_eq!(resolve(&bare, env).unwrap().unwrap().output_dir, PathBuf::from("from-env"));
}
