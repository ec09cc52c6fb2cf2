use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rocbird::render::read_curve_csv;
use rocbird::ChartKind;
use serde_json::Value;

fn rocbird(args: &[&str], input: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rocbird"))
        .args(args)
        .arg("--input")
        .arg(input)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write_input(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("input.csv");
    fs::write(&path, text).unwrap();
    path
}

fn random_input(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::from("label,score_a,score_b,score_c\n");
    for _ in 0..n {
        let label = ["a", "b", "c"][rng.gen_range(0..3)];
        let s: [f64; 3] = rng.gen();
        text += &format!("{label},{},{},{}\n", s[0], s[1], s[2]);
    }
    text
}

fn summary(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn random_scores_give_chance_auroc() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(tmp.path(), &random_input(1000, 99));
    let out = tmp.path().join("out");
    let res = rocbird(&["summary"], &input, &out);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let s = summary(&out);
    for class in s["classes"].as_array().unwrap() {
        let auroc = class["auroc"].as_f64().unwrap();
        assert!((auroc - 0.5).abs() <= 0.1, "{}: {auroc}", class["class"]);
    }
}

#[test]
fn unsmoothed_bird_is_rejected_before_any_output() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(tmp.path(), &random_input(20, 1));
    let out = tmp.path().join("out");
    let res = rocbird(
        &["chart", "--charts", "BIRD", "--smoothing", "0"],
        &input,
        &out,
    );
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("smoothing"));
    assert!(!out.exists());
}

#[test]
fn subcommands_write_their_own_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(tmp.path(), &random_input(50, 2));
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(rocbird(&["summary"], &input, &a).status.success());
    assert_eq!(listing(&a), ["summary.json"]);
    assert!(rocbird(&["curves", "--charts", "roc,bift"], &input, &b)
        .status
        .success());
    assert_eq!(listing(&b), ["bift.csv", "roc.csv"]);
}

#[test]
fn degenerate_class_aborts_unless_skipped() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(
        tmp.path(),
        "label,score_a,score_b,score_c\na,0.9,0.1,0\nb,0.2,0.8,0\na,0.6,0.3,0\nb,0.5,0.5,0\n",
    );
    let out = tmp.path().join("out");
    let res = rocbird(&["summary"], &input, &out);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("\"c\""));

    let res = rocbird(&["summary", "--skip-degenerate"], &input, &out);
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("warning"));
    let s = summary(&out);
    assert_eq!(s["classes"].as_array().unwrap().len(), 2);
    assert!(s["multiclass"]["bookmaker_informedness"].is_null());
}

#[test]
fn malformed_input_reports_the_line() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(tmp.path(), "label,score_a,score_b\na,0.1,0.2\nb,oops,0.3\n");
    let res = rocbird(&["summary"], &input, &tmp.path().join("out"));
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 3"));
}

fn trapezoid(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
        .sum()
}

#[test]
fn summary_is_recomputable_from_curve_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let text = random_input(300, 5)
        .lines()
        .map(|l| {
            // Coarsen scores to two decimals so the sweeps contain ties.
            if l.starts_with("label") {
                return l.to_string();
            }
            let mut parts = l.split(',');
            let label = parts.next().unwrap().to_string();
            std::iter::once(label)
                .chain(parts.map(|v| format!("{:.2}", v.parse::<f64>().unwrap())))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n");
    let input = write_input(tmp.path(), &text);
    let out = tmp.path().join("out");
    assert!(rocbird(&["chart"], &input, &out).status.success());
    let s = summary(&out);
    let dataset = rocbird::run::parse_input_csv(&text).unwrap();

    for kind in ChartKind::ALL {
        let rows = read_curve_csv(
            &fs::read_to_string(out.join(format!("{}.csv", kind.file_stem()))).unwrap(),
        )
        .unwrap();
        for (c, name) in dataset.class_names().iter().enumerate() {
            let mut distinct: Vec<f64> = dataset.column(c).collect();
            distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
            distinct.dedup();
            let expected = distinct.len() + 1 - usize::from(kind.is_precision_recall());
            assert_eq!(
                rows.iter().filter(|r| &r.class == name).count(),
                expected,
                "{kind} {name}"
            );
        }
    }

    let roc = read_curve_csv(&fs::read_to_string(out.join("roc.csv")).unwrap()).unwrap();
    let boc = read_curve_csv(&fs::read_to_string(out.join("boc.csv")).unwrap()).unwrap();
    for class in s["classes"].as_array().unwrap() {
        let name = class["class"].as_str().unwrap();
        let pts: Vec<_> = roc
            .iter()
            .filter(|r| r.class == name)
            .map(|r| (r.x, r.y))
            .collect();
        let auroc = trapezoid(&pts);
        assert!((class["auroc"].as_f64().unwrap() - auroc).abs() <= 1e-12);
        assert!((class["gini"].as_f64().unwrap() - (2.0 * auroc - 1.0)).abs() <= 1e-12);
        let bpts: Vec<_> = boc
            .iter()
            .filter(|r| r.class == name)
            .map(|r| (r.x, r.y))
            .collect();
        assert!((class["auboc"].as_f64().unwrap() - trapezoid(&bpts)).abs() <= 1e-12);

        // Skew 1: the first point of maximal tpr - fpr.
        let best = pts
            .iter()
            .copied()
            .reduce(|a, b| if b.1 - b.0 > a.1 - a.0 { b } else { a })
            .unwrap();
        let bp = &class["best_operating_point"];
        assert_eq!(
            (bp["fpr"].as_f64().unwrap(), bp["tpr"].as_f64().unwrap()),
            best
        );
        assert!((class["informedness"].as_f64().unwrap() - (best.1 - best.0)).abs() <= 1e-12);

        let c = dataset.class_index(name).unwrap();
        assert_eq!(class["positives"].as_u64().unwrap(), dataset.class_count(c));
    }
}
