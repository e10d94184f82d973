use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use minrel::coeff::rank_minrelation;
use minrel::matrix::{pairwise_matrix, Metric};
use minrel::synth::gen_multiplication;
use serde_json::Value;

fn minrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minrel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Data lines of a CSV output (comments dropped).
fn data_lines(s: &str) -> Vec<&str> {
    s.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn coeff_hand_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "xy.csv", "x,y\n1,1\n2,2\n3,3\n");
    let o = minrel(&["coeff", "--input", &input, "--x", "x", "--y", "y", "--metric", "iota"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("# command=coeff"));
    assert!(text.contains("# ties=average"));
    assert_eq!(data_lines(&text), ["metric,value,degenerate,m", "iota,0.951807228916,false,3"]);

    let o = minrel(&["coeff", "--input", &input, "--x", "x", "--y", "y", "--metric", "spearman", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["result"]["m"], 3);
    assert_eq!(v["config"]["metric"], "spearman");
}

#[test]
fn coeff_orientation_flips_sign() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "xy.csv", "x,y\n0.3,1\n1.2,0.2\n-0.7,-0.3\n2.2,2\n0.1,0.8\n");
    let get = |orient: &str| {
        let o = minrel(&[
            "coeff", "--input", &input, "--x", "x", "--y", "y", "--orientation", orient, "--format", "json",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["result"]["value"].as_f64().unwrap()
    };
    assert_eq!(get("+,+"), -get("+,-"));
    let o = minrel(&["coeff", "--input", &input, "--x", "x", "--y", "y", "--metric", "pearson", "--orientation", "-,+"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_2_and_cite_the_cell() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.csv", "x,y\n1,2\nabc,3\n");
    let o = minrel(&["coeff", "--input", &input, "--x", "x", "--y", "y"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3, column `x`"), "{}", stderr(&o));

    let ok = write(dir.path(), "ok.csv", "x,y\n1,2\n2,3\n");
    assert_eq!(minrel(&["coeff", "--input", &ok, "--x", "x", "--y", "nope"]).status.code(), Some(2));
    assert_eq!(minrel(&["coeff", "--input", &ok, "--x", "x", "--y", "y", "--metric", "kendall"]).status.code(), Some(2));
    assert_eq!(minrel(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_values_policy() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "na.csv", "x,y\n1,2\nNA,3\n2,1\n3,5\n");
    let o = minrel(&["coeff", "--input", &input, "--x", "x", "--y", "y"]);
    assert_eq!(o.status.code(), Some(2));
    let o = minrel(&["coeff", "--input", &input, "--x", "x", "--y", "y", "--na", "drop-rows", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["m"], 3);
}

#[test]
fn strict_mode_exits_3_on_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "const.csv", "x,y\n1,5\n2,5\n3,5\n");
    let args = ["coeff", "--input", &input, "--x", "x", "--y", "y", "--metric", "pearson"];
    let o = minrel(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pearson,0,true,3"));
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(minrel(&strict).status.code(), Some(3));
}

#[test]
fn io_failure_exits_4() {
    let o = minrel(&["gen", "multiplication", "--m", "5", "--output", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(4));
    let o = minrel(&["matrix", "--input", "/nonexistent-dir/in.csv"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn gen_is_deterministic_and_structurally_exact() {
    let a = minrel(&["gen", "multiplication", "--m", "5", "--seed", "7"]);
    let b = minrel(&["gen", "multiplication", "--m", "5", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "A,B,C");
    assert_eq!(lines.len(), 6);
    for line in &lines[1..] {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(v[0], v[1] * v[2]);
    }
    assert!(minrel(&["gen", "spiral"]).status.code() == Some(2));
}

#[test]
fn gen_output_round_trips_through_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mult.csv");
    let path = path.to_str().unwrap();
    let o = minrel(&["gen", "multiplication", "--m", "1000", "--seed", "3", "--output", path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());

    let o = minrel(&["matrix", "--input", path, "--metric", "iota", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mem = pairwise_matrix(&gen_multiplication(1000, 3).unwrap().dataset, Metric::Iota).unwrap();
    let names = ["A", "B", "C"];
    for (i, a) in names.iter().enumerate() {
        for (j, b) in names.iter().enumerate() {
            assert_eq!(v["result"]["values"][a][b].as_f64().unwrap(), mem.value(i, j));
        }
    }
    let ab = v["result"]["values"]["A"]["B"].as_f64().unwrap();
    let ba = v["result"]["values"]["B"]["A"].as_f64().unwrap();
    assert!(ab > 0.95 && ab - ba > 0.1, "{ab} {ba}");

    let o = minrel(&["coeff", "--input", path, "--x", "A", "--y", "B", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let g = gen_multiplication(1000, 3).unwrap().dataset;
    let direct = rank_minrelation(g.column("A").unwrap(), g.column("B").unwrap()).unwrap().value;
    assert_eq!(v["result"]["value"].as_f64().unwrap(), direct);
}

#[test]
fn matrix_csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lin.csv");
    let path = path.to_str().unwrap();
    minrel(&["gen", "linear", "--m", "200", "--seed", "1", "--output", path]);
    let csv = stdout(&minrel(&["matrix", "--input", path, "--metric", "spearman"]));
    let json: Value =
        serde_json::from_str(&stdout(&minrel(&["matrix", "--input", path, "--metric", "spearman", "--format", "json"])))
            .unwrap();
    let body: Vec<&str> = csv.lines().skip_while(|l| l.starts_with('#')).collect();
    let header: Vec<&str> = body[0].split(',').skip(1).collect();
    assert_eq!(header, ["A", "B", "C", "D"]);
    for row in &body[1..=4] {
        let cells: Vec<&str> = row.split(',').collect();
        for (j, cell) in cells[1..].iter().enumerate() {
            let from_csv: f64 = cell.parse().unwrap();
            let from_json = json["result"]["values"][cells[0]][header[j]].as_f64().unwrap();
            assert!((from_csv - from_json).abs() <= 1e-11 * from_json.abs().max(1e-300));
            if cells[0] == header[j] {
                assert!((from_csv - 1.0).abs() < 1e-12);
            }
            let mirror = json["result"]["values"][header[j]][cells[0]].as_f64().unwrap();
            assert_eq!(from_json, mirror);
        }
    }
    assert!(csv.contains("# degenerate\n"));
}

#[test]
fn rank_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("comb.csv");
    let path = path.to_str().unwrap();
    minrel(&["gen", "combined", "--m", "1000", "--seed", "11", "--output", path]);
    let o = minrel(&["rank", "--input", path, "--target", "A", "--criterion", "rho2", "--relevant", "B,C,D"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "position,name,score");
    assert!(lines[1].starts_with("1,G,"), "{text}");
    assert!(text.contains("# relevant=B,C,D\n"));
    assert!(text.contains("# avg_position="));

    let o = minrel(&["rank", "--input", path, "--target", "A", "--criterion", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = minrel(&["rank", "--input", path, "--target", "Q"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn experiment_command_small_run() {
    let o = minrel(&["experiment", "table2", "--reps", "5", "--m", "300", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("quantity,x,y,mean,std_err,reference,tolerance,result"));
    assert!(text.contains("iota(X,Y),A,B,"));
    assert!(text.contains("# overall="));
    assert_eq!(minrel(&["experiment", "table9"]).status.code(), Some(2));
    assert_eq!(minrel(&["experiment", "table2", "--reps", "0"]).status.code(), Some(2));
}

#[test]
fn compare_and_cv_commands() {
    let o = minrel(&["compare", "--datasets", "4", "--m", "200", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v["result"];
    let total = r["wins"].as_u64().unwrap() + r["losses"].as_u64().unwrap() + r["draws"].as_u64().unwrap();
    assert_eq!(total, 4);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lin.csv");
    let path = path.to_str().unwrap();
    minrel(&["gen", "linear", "--m", "400", "--seed", "5", "--output", path]);
    let o = minrel(&["compare", "--input", path, "--task", "A=B,C", "--task", "B=A", "--min-relevant", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("skipped=1"));
    assert_eq!(minrel(&["compare", "--input", path]).status.code(), Some(2));

    let o = minrel(&["cv", "--input", path, "--target", "A", "--criterion", "rho2", "--sizes", "2..3", "--folds", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let rows = data_lines(&text);
    assert_eq!(rows[0], "size,mse,features");
    assert!(rows[2].starts_with("3,") && rows[2].ends_with("B C D"), "{text}");
}
