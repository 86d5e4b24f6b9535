use mpqs_harness::report::{emit_csv, to_csv_string, ResultRow, HEADER};
use mpqs_harness::stats::{rel_dev, Summary};

fn fixture_rows() -> Vec<ResultRow> {
    let r =
        |experiment: &str, k, n, trials, seed, statistic: &str, mean, stddev, theory, rel_dev| {
            ResultRow {
                experiment: experiment.to_string(),
                k,
                n,
                trials,
                seed,
                statistic: statistic.to_string(),
                mean,
                stddev,
                theory,
                rel_dev,
            }
        };
    vec![
        r(
            "classify",
            2,
            1000,
            3,
            7,
            "comparisons/n",
            1.5,
            0.1,
            Some(1.5),
            Some(0.0),
        ),
        r(
            "partition",
            9,
            1_000_000,
            100,
            42,
            "l1_misses/n",
            1.0 / 3.0,
            0.0,
            None,
            None,
        ),
        r(
            "sort",
            5,
            1 << 20,
            20,
            u64::MAX,
            "writes, total",
            0.1 + 0.2,
            1e-7,
            Some(101.0 / 42.0),
            Some(0.875),
        ),
    ]
}

#[test]
fn header_only_for_no_rows() {
    assert_eq!(to_csv_string(&[]), format!("{}\n", HEADER.join(",")));
    assert_eq!(
        HEADER.join(","),
        "experiment,k,n,trials,seed,statistic,mean,stddev,theory,rel_dev"
    );
}

#[test]
fn one_row_two_lines() {
    let s = to_csv_string(&fixture_rows()[..1]);
    assert_eq!(s.lines().count(), 2);
    assert!(s.ends_with('\n'));
}

#[test]
fn golden_fixture() {
    let want = include_str!("fixtures/three_rows.csv");
    assert_eq!(to_csv_string(&fixture_rows()), want);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    emit_csv(&fixture_rows(), &path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), want.as_bytes());
}

#[test]
fn numbers_round_trip() {
    for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-9, 123_456.789, 5e15] {
        let row = ResultRow::new(
            "e",
            1,
            2,
            1,
            0,
            "s",
            Summary {
                count: 1,
                mean: x,
                stddev: 0.0,
            },
            None,
        );
        let s = to_csv_string(&[row]);
        let mean = s.lines().nth(1).unwrap().split(',').nth(6).unwrap();
        assert_eq!(mean.parse::<f64>().unwrap(), x);
    }
}

#[test]
fn summary_and_relative_deviation() {
    let s = Summary::of(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
    assert_eq!(s.mean, 5.0);
    assert!((s.stddev - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
    assert_eq!(Summary::of(&[3.0]).stddev, 0.0);
    assert_eq!(rel_dev(1.1, 1.0).map(|d| (d * 1e9).round()), Some(1e8));
    assert_eq!(rel_dev(0.5, 0.0), None);
    let row = ResultRow::new("e", 1, 2, 1, 0, "s", Summary::of(&[0.9, 1.1]), Some(2.0));
    assert_eq!(row.rel_dev, Some(0.5));
}
