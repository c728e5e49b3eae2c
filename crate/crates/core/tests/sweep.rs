use std::collections::BTreeSet;

use np2::sweep::{read_jsonl, run_sweep, verdict, write_csv, write_jsonl, Domain, Predictor, SweepSpec, CSV_COLUMNS};
use np2::vss::StructureCache;

fn jsonl(spec: &SweepSpec, threads: Option<usize>) -> Vec<u8> {
    let out = run_sweep(spec, threads).unwrap();
    let mut buf = Vec::new();
    write_jsonl(&out.records, &mut buf).unwrap();
    buf
}

#[test]
fn serial_and_parallel_output_is_identical() {
    let spec = SweepSpec { genus_min: 3, ..SweepSpec::exhaustive(1, 8) };
    let serial = jsonl(&spec, Some(1));
    assert_eq!(serial, jsonl(&spec, Some(4)));
    assert_eq!(serial, jsonl(&spec, None));
}

#[test]
fn random_sweeps_repeat_by_seed() {
    let spec = SweepSpec { domain: Domain::Random { seed: 42, count: 5 }, ..SweepSpec::exhaustive(1, 3) };
    let a = jsonl(&spec, None);
    assert_eq!(a, jsonl(&spec, Some(2)));
    assert_eq!(a.iter().filter(|&&b| b == b'\n').count(), 5);
    let other = SweepSpec { domain: Domain::Random { seed: 43, count: 40 }, ..SweepSpec::exhaustive(2, 4) };
    assert_eq!(run_sweep(&other, None).unwrap().records.len(), 40);
}

#[test]
fn records_rerun_to_the_same_verdicts() {
    let spec = SweepSpec { genus_min: 4, ..SweepSpec::exhaustive(1, 6) };
    let out = run_sweep(&spec, None).unwrap();
    let cache = StructureCache::default();
    for r in out.records.iter().step_by(5) {
        let f = r.curve().unwrap();
        let oracle = Some(np2::sweep::oracle_vertex(&f).unwrap());
        assert_eq!(&verdict(&f, &spec.predictors, oracle, &cache), r);
    }
}

#[test]
fn reports_round_trip_and_are_stable() {
    let spec = SweepSpec::exhaustive(2, 3);
    let out = run_sweep(&spec, None).unwrap();
    let mut buf = Vec::new();
    write_jsonl(&out.records, &mut buf).unwrap();
    assert_eq!(read_jsonl(buf.as_slice()).unwrap(), out.records);

    let mut csv_a = Vec::new();
    write_csv(&out.records, &mut csv_a).unwrap();
    let mut csv_b = Vec::new();
    write_csv(&run_sweep(&spec, Some(3)).unwrap().records, &mut csv_b).unwrap();
    assert_eq!(csv_a, csv_b);
    let text = String::from_utf8(csv_a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    assert_eq!(lines.count(), out.records.len());
}

#[test]
fn predictor_subsets() {
    let spec = SweepSpec::exhaustive(1, 5).with_predictors([Predictor::Hasse]);
    let out = run_sweep(&spec, None).unwrap();
    assert!(out.records.iter().all(|r| r.oracle.is_none() && r.vss.is_none() && r.hasse.is_some()));
    assert_eq!(out.summary.hasse.absent, 32);
    assert!(SweepSpec::exhaustive(1, 5).with_predictors(BTreeSet::new()).curves().is_err());
}

#[test]
fn fixed_coefficients_restrict_the_family() {
    let spec = SweepSpec::exhaustive(1, 7).with_fixed(15, 1).with_fixed(13, 0);
    let out = run_sweep(&spec, None).unwrap();
    assert_eq!(out.records.len(), 64);
    assert!(out.records.iter().all(|r| !r.coeffs.contains("13:")));
    assert_eq!(out.summary.disagreements(), 0);
}
