use std::fs;
use std::process::{Command, Output};

fn firefly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_firefly")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn simulate_shows_flipping_triple() {
    let o = firefly(&["simulate", "--kappa", "3", "--rule", "fca", "--length", "12", "--steps", "1", "--init", "120"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("120120120120"));
    assert!(s.contains("221221221221"));
}

#[test]
fn oracle_covariances_pass() {
    let o = firefly(&["oracle", "--check", "covariances"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for v in ["40/81", "-17/243", "-19/729", "-2/729", "8/27", "PASS"] {
        assert!(s.contains(v), "missing {v} in {s}");
    }
}

#[test]
fn oracle_comparison_walk_and_small_t_pass() {
    assert!(firefly(&["oracle", "--check", "prop62"]).status.success());
    let o = firefly(&["oracle", "--check", "small-t-equivalence", "--tau-max", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1100/6561"));
}

#[test]
fn unknown_input_exits_2() {
    assert_eq!(firefly(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(firefly(&["simulate", "--colour", "3"]).status.code(), Some(2));
    assert_eq!(firefly(&["oracle", "--check", "nothing"]).status.code(), Some(2));
    assert_eq!(firefly(&["simulate", "--rule", "life"]).status.code(), Some(2));
    assert_eq!(firefly(&["disagree-exact", "--tau", "0"]).status.code(), Some(2));
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["simulate", "cluster-rate", "excitations", "qtable", "disagree-exact", "genfun", "oracle"] {
        let o = firefly(&[sub, "--help"]);
        assert!(o.status.success(), "{sub}");
        let s = stdout(&o);
        for flag in ["--out", "--seed", "--config", "--threads"] {
            assert!(s.contains(flag), "{sub} help lacks {flag}");
        }
    }
}

#[test]
fn qtable_base_row_is_all_ones() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("q.csv");
    let o = firefly(&["qtable", "--T", "0", "--mode", "exact", "--out", p.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&p).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,x,t,numerator,log3_denominator"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5 * 9);
    assert!(rows.iter().all(|r| r.ends_with(",0,1,0")));
    assert!(dir.path().join("q.csv.meta.json").exists());
}

#[test]
fn qtable_float_agrees_with_exact() {
    let dir = tempfile::tempdir().unwrap();
    let (pe, pf) = (dir.path().join("e.csv"), dir.path().join("f.csv"));
    assert!(firefly(&["qtable", "--T", "30", "--x-max", "2", "--out", pe.to_str().unwrap()]).status.success());
    assert!(firefly(&["qtable", "--T", "30", "--x-max", "2", "--mode", "float", "--out", pf.to_str().unwrap()])
        .status
        .success());
    let e = fs::read_to_string(pe).unwrap();
    let f = fs::read_to_string(pf).unwrap();
    for (le, lf) in e.lines().skip(1).zip(f.lines().skip(1)) {
        let ce: Vec<&str> = le.split(',').collect();
        let cf: Vec<&str> = lf.split(',').collect();
        assert_eq!(ce[..3], cf[..3]);
        let exact = ce[3].parse::<f64>().unwrap() / 3f64.powi(ce[4].parse().unwrap());
        let float: f64 = cf[3].parse().unwrap();
        assert!((exact - float).abs() < 1e-13, "{le} vs {lf}");
    }
}

#[test]
fn cluster_rate_config_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.conf");
    fs::write(&cfg, "name = small\nkappa = 4\ntimes = 10,40\nlength = 2048\ntrials = 2\nseed = 5\n").unwrap();
    let mut bodies = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let p = dir.path().join(name);
        let o = firefly(&["cluster-rate", "--config", cfg.to_str().unwrap(), "--runs", "3", "--out", p.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        bodies.push(fs::read_to_string(&p).unwrap());
        let meta = fs::read_to_string(dir.path().join(format!("{name}.meta.json"))).unwrap();
        assert!(meta.contains("\"trials\": 3") && meta.contains("\"kappa\": 4"));
    }
    assert_eq!(bodies[0], bodies[1]);
    assert!(bodies[0].starts_with("kappa,t,L,runs,edges_sampled,p_hat,stderr,sqrt_t_p_hat\n4,10,2048,3,6144,"));
    fs::write(&cfg, "kappa = 4\nspeed = 9\n").unwrap();
    assert_eq!(firefly(&["cluster-rate", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn excitations_writes_ne_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("ne.csv");
    let o = firefly(&["excitations", "--tau", "30", "--trials", "200", "--sandwich", "--out", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&p).unwrap();
    assert!(text.starts_with("r,empirical_cdf,theory_cdf,abs_diff\n"));
    assert!(stdout(&o).contains("0 failures"));
    assert_eq!(firefly(&["excitations", "--kappa", "4"]).status.code(), Some(2));
    assert!(firefly(&["excitations", "--kappa", "4", "--fit-sigma", "--tau", "50", "--trials", "50"]).status.success());
}

#[test]
fn genfun_writes_constants() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.csv");
    let o = firefly(&["genfun", "--u", "0.5,0.999999", "--out", p.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&p).unwrap();
    assert_eq!(text.lines().next(), Some("u,q_minus,ratio_to_3sqrt3_over_2,detA_residual"));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[2] - 1.5 * 3f64.sqrt()).abs() < 1e-2);
    assert!(dir.path().join("constants.json").exists());
    assert_eq!(firefly(&["genfun", "--u", "1.5"]).status.code(), Some(2));
}
