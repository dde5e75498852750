use std::process::Command;

fn mocoscale() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mocoscale"));
    c.env("RUST_LOG", "warn");
    c
}

fn ok(c: &mut Command) -> String {
    let out = c.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn full_workflow() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(mocoscale().args(["gen", "--family", "motsp", "--dim", "30", "--objectives", "2", "--seed", "42", "--out"]).arg(d.join("inst.json")));
    ok(mocoscale().args(["gen", "--family", "moqap", "--dim", "10", "--seed", "4", "--embed-data", "--out"]).arg(d.join("q.json")));
    let q: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("q.json")).unwrap()).unwrap();
    assert_eq!(q["data"]["moqap"]["dist"].as_array().unwrap().len(), 100);

    ok(mocoscale().args(["refpoint", "--samples", "200", "--seed", "3", "--instance"]).arg(d.join("inst.json")).arg("--out").arg(d.join("ref.json")));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("ref.json")).unwrap()).unwrap();
    assert_eq!(r["instance_id"], "motsp-D30-m2-s42");

    std::fs::write(d.join("pts.csv"), "f1,f2\n1,3\n2,2\n3,1\n").unwrap();
    std::fs::write(
        d.join("r4.json"),
        r#"{"instance_id": "x", "n_samples": 0, "sampling_seed": 0, "values": [4, 4], "senses": ["min", "min"]}"#,
    )
    .unwrap();
    let hv = ok(mocoscale().arg("hv").arg("--archive").arg(d.join("pts.csv")).arg("--ref").arg(d.join("r4.json")));
    assert_eq!(hv.trim(), "6");

    let config = serde_json::json!({
        "families": ["mokp"], "dimensions": [20], "budgets": [300], "algorithms": ["SEMO", "SEMOx"],
        "runs": 2, "base_seed": 1, "reference_samples": 100, "output_dir": d.join("grid"),
    });
    std::fs::write(d.join("cfg.json"), config.to_string()).unwrap();
    ok(mocoscale().arg("run").arg("--config").arg(d.join("cfg.json")).env("MOCOSCALE_WORKERS", "2"));
    let refused = mocoscale().arg("run").arg("--config").arg(d.join("cfg.json")).output().unwrap();
    assert!(!refused.status.success());
    let resumed = ok(mocoscale().arg("run").arg("--config").arg(d.join("cfg.json")).args(["--resume", "--workers", "1"]));
    assert!(resumed.contains("completed 0, already recorded 4"));

    let archive = d.join("grid/archives/mokp-D20/semo-b300-r0.csv.gz");
    let hv = ok(mocoscale().arg("hv").arg("--archive").arg(&archive).arg("--ref").arg(d.join("grid/instances/mokp-D20.ref.json")));
    let first: serde_json::Value =
        serde_json::from_str(std::fs::read_to_string(d.join("grid/mokp-D20.jsonl")).unwrap().lines().next().unwrap()).unwrap();
    let stored = first["final_hv"].as_f64().unwrap();
    assert!((hv.trim().parse::<f64>().unwrap() - stored).abs() <= 1e-9 * stored.abs().max(1.0));

    ok(mocoscale().arg("summarize").arg("--records").arg(d.join("grid")).arg("--out").arg(d.join("sum")).args(["--holm-scope", "global", "--alpha", "0.1"]));
    assert!(std::fs::read_to_string(d.join("sum/summary.txt")).unwrap().contains("SEMOx"));
    ok(mocoscale().arg("plot-data").arg("--records").arg(d.join("grid")).args(["--family", "mokp", "--dim", "20", "--budget", "300", "--out"]).arg(d.join("plot")));
    assert!(d.join("plot/trajectory.csv").exists());
}

#[test]
fn bad_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!mocoscale().args(["gen", "--family", "tsp", "--dim", "5", "--seed", "1", "--out"]).arg(dir.path().join("a")).output().unwrap().status.success());
    assert!(!mocoscale().args(["gen", "--family", "monk", "--dim", "5", "--seed", "1", "--out"]).arg(dir.path().join("a")).output().unwrap().status.success());
    assert!(!mocoscale().args(["summarize", "--records", "/nonexistent", "--out"]).arg(dir.path()).output().unwrap().status.success());
}
