use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_secure-ia"));
    cmd.env_remove("SECURE_IA_LOG");
    cmd
}

fn run(args: &[&str], cwd: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Second column of an `iteration,leakage` file.
fn trace(path: &Path) -> Vec<f64> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn feasibility_of_the_test_systems() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "feasible", "--K", "3", "--M", "9", "--N", "9", "--Ne", "6", "--d", "3",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("wslm=true zfws=true"), "{}", stdout(&o));
    assert!(stdout(&o).contains("117") && stdout(&o).contains("81"));

    let o = run(
        &[
            "feasible", "--K", "3", "--M", "9", "--N", "9", "--Ne", "9", "--d", "3",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("wslm=true zfws=false"));

    // infeasible is still a successful run
    let o = run(&["feasible", "--preset", "15151833"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("zfws=false"));

    let o = run(
        &[
            "feasible", "--K", "1", "--M", "4", "--N", "4", "--Ne", "2", "--d", "2",
        ],
        dir.path(),
    );
    let text = stdout(&o);
    let neq = text.lines().find(|l| l.contains("Neq")).unwrap();
    assert_eq!(neq.split_whitespace().last(), Some("0"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["feasible", "--K", "three"],
        vec!["feasible", "--K", "3"],
        vec!["feasible", "--preset", "1234"],
        vec![
            "feasible", "--K", "3", "--M", "2", "--N", "9", "--Ne", "6", "--d", "3",
        ],
        vec!["converge", "--preset", "9963"],
        vec!["converge", "--preset", "9963", "--scheme", "magic"],
        vec![
            "converge",
            "--preset",
            "9963",
            "--scheme",
            "wslm",
            "--eps-leakage",
            "-1",
        ],
        vec!["sweep", "--preset", "9963", "--trials", "0"],
        vec!["sweep", "--preset", "9963", "--snr-step", "0"],
        vec!["sweep", "--preset", "9963", "--ne", "3,6"],
        vec!["sweep", "--preset", "9963", "--mode", "ne"],
        vec!["bogus"],
    ] {
        let o = run(&args, dir.path());
        assert_eq!(
            code(&o),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn wslm_convergence_trace() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "converge", "--preset", "9963", "--scheme", "wslm", "--seed", "3", "--out", "t.csv",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("termination=converged"));
    let j = trace(&dir.path().join("t.csv"));
    assert!(j.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(*j.last().unwrap() <= 1e-9);
}

#[test]
fn zfws_converges_in_a_few_iterations() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "converge", "--preset", "6642", "--scheme", "zfws", "--out", "z.csv",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let j = trace(&dir.path().join("z.csv"));
    assert!(j.len() <= 21, "{} points", j.len());
    assert!(*j.last().unwrap() <= 1e-9);
}

#[test]
fn single_iteration_budget() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "converge",
            "--preset",
            "9963",
            "--scheme",
            "wslm",
            "--kappa-max",
            "1",
            "--out",
            "k.csv",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("termination=max_iterations iterations=1"));
    assert_eq!(trace(&dir.path().join("k.csv")).len(), 2);
}

#[test]
fn wslm_with_too_few_eavesdropper_antennas_fails_at_runtime() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "converge", "--K", "2", "--M", "6", "--N", "6", "--Ne", "2", "--d", "3", "--scheme",
            "wslm",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Ne = 2"));
}

#[test]
fn repeated_sweeps_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str, jobs: &'static str| {
        vec![
            "sweep",
            "--mode",
            "snr",
            "--preset",
            "9933",
            "--trials",
            "50",
            "--seed",
            "7",
            "--snr-min",
            "0",
            "--snr-max",
            "50",
            "--snr-step",
            "10",
            "--jobs",
            jobs,
            "--out",
            out,
        ]
    };
    assert_eq!(code(&run(&args("a", "1"), dir.path())), 0);
    assert_eq!(code(&run(&args("b", "3"), dir.path())), 0);
    for f in ["snr_raw.csv", "snr_aggregate.csv", "snr_plot.gp"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let raw = std::fs::read_to_string(dir.path().join("a/snr_raw.csv")).unwrap();
    assert_eq!(raw.lines().count(), 1 + 3 * 6 * 50);
}

#[test]
fn ne_sweep_lists_every_eavesdropper_size() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "sweep", "--mode", "ne", "--preset", "9933", "--ne", "3,6,9", "--trials", "4", "--out",
            "ne",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(dir.path().join("ne/ne_improvement.csv")).unwrap();
    for scheme in ["conventional", "wslm", "zfws"] {
        for ne in ["3", "6", "9"] {
            let hits = table
                .lines()
                .filter(|l| l.starts_with(&format!("{scheme},{ne},")))
                .count();
            assert_eq!(hits, 1, "{scheme} Ne={ne}");
        }
    }
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("file"), "x").unwrap();
    let o = run(
        &[
            "sweep", "--preset", "6642", "--trials", "1", "--snr", "10", "--out", "file/sub",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 1);
    let o = run(
        &[
            "converge",
            "--preset",
            "6642",
            "--scheme",
            "zfws",
            "--out",
            "file/t.csv",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 1);
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.conf"),
        "# shared\npreset = 6642\ntrials = 3\nscheme = zfws\n\n[quick]\nsnr = 20\ntrials = 2\nout = from_file\n",
    )
    .unwrap();
    let o = run(
        &[
            "sweep",
            "--config",
            "run.conf",
            "--section",
            "quick",
            "--trials",
            "5",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let raw = std::fs::read_to_string(dir.path().join("from_file/snr_raw.csv")).unwrap();
    // 5 trials from the flag, 1 scheme and 1 SNR point from the file
    assert_eq!(raw.lines().count(), 1 + 5);
    assert!(raw
        .lines()
        .skip(1)
        .all(|l| l.starts_with("zfws,3,6,6,4,2,20,")));

    std::fs::write(
        dir.path().join("bad.conf"),
        "preset = 6642\ncolour = blue\n",
    )
    .unwrap();
    let o = run(&["feasible", "--config", "bad.conf"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
}

#[test]
fn zfws_leads_at_30_db_on_the_first_system() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "sweep", "--preset", "9963", "--snr", "30", "--trials", "200", "--seed", "1",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mean = |scheme: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(scheme)).unwrap();
        line.split_whitespace().nth(2).unwrap().parse().unwrap()
    };
    let z = mean("zfws");
    assert!(z > mean("wslm") && z > mean("conventional"), "{text}");
}

#[test]
fn log_level_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["sweep", "--preset", "6642", "--trials", "1", "--snr", "0"])
        .current_dir(dir.path())
        .env("SECURE_IA_LOG", "info")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("snr sweep"));
}
