mod common;

use jensen_core::sequences::{
    load_sequence, partition_table, CacheRecord, GammaCache, SequenceFileFormat, SequenceKind,
    SequenceProvider, CACHE_FILE_NAME,
};
use jensen_core::zeta::GammaSource;
use jensen_core::{BigReal, Error};
use proptest::prelude::*;
use rug::{Float, Integer};

use common::partitions_by_parts;

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn pentagonal_table_matches_parts_recurrence() {
    assert_eq!(partition_table(400), partitions_by_parts(400));
}

#[test]
fn csv_and_json_partition_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = partitions_by_parts(10);
    let mut csv = String::from("n,value\n");
    let mut json = Vec::new();
    for (n, v) in p.iter().enumerate() {
        csv.push_str(&format!("{n},{v}\n"));
        json.push(format!("[{n}, \"{v}\"]"));
    }
    let csv_path = write(&dir, "p.csv", &csv);
    let json_path = write(&dir, "p.json", &format!("[{}]", json.join(", ")));
    for (path, format) in [
        (csv_path, SequenceFileFormat::Csv),
        (json_path, SequenceFileFormat::Json),
    ] {
        assert_eq!(SequenceFileFormat::from_path(&path), Some(format));
        let seq = load_sequence(&path, format).unwrap();
        assert_eq!(seq.kind(), SequenceKind::UserFile);
        assert_eq!(seq.domain(), (0, Some(10)));
        assert!(seq.has_exact());
        for (n, v) in p.iter().enumerate() {
            assert_eq!(seq.exact_at(n as u64).unwrap().as_ref(), Some(v));
        }
        assert!(matches!(
            seq.exact_at(11),
            Err(Error::OutOfDomain { n: 11, .. })
        ));
    }
}

#[test]
fn json_numbers_and_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "s.json", "[[5, 1.5], [6, 2], [7, \"3.25e2\"]]");
    let seq = load_sequence(&path, SequenceFileFormat::Json).unwrap();
    assert!(!seq.has_exact());
    assert_eq!(seq.exact_at(5).unwrap(), None);
    assert_eq!(seq.value_at(7, 64).unwrap().to_f64(), 325.0);
    assert_eq!(seq.domain(), (5, Some(7)));
}

#[test]
fn malformed_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (
            "gap.csv",
            "n,value\n0,1\n1,1\n3,3\n",
            "gap in index: expected n=2, found n=3",
        ),
        ("neg.csv", "n,value\n0,1\n1,-4\n", "not positive"),
        ("zero.json", "[[0, 1], [1, 0]]", "not positive"),
        ("empty.csv", "n,value\n", "no records"),
        ("header.csv", "k,v\n0,1\n", "header"),
        ("text.csv", "n,value\n0,abc\n", "bad value"),
        ("shape.json", "{\"n\": 1}", "array"),
    ];
    for (name, text, needle) in cases {
        let path = write(&dir, name, text);
        let format = SequenceFileFormat::from_path(&path).unwrap();
        match load_sequence(&path, format) {
            Err(Error::SequenceFormat { reason, .. }) => {
                assert!(reason.contains(needle), "{name}: {reason}")
            }
            other => panic!("{name}: {other:?}"),
        }
    }
}

#[test]
fn zeta_provider_cache_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = {
        let seq = SequenceProvider::zeta_gamma(Some(dir.path())).unwrap();
        let v = seq.value_at(25, 192).unwrap();
        seq.flush().unwrap();
        v
    };
    let cache = GammaCache::open(dir.path()).unwrap();
    assert_eq!(cache.len(), 1);
    let seq = SequenceProvider::zeta_gamma(Some(dir.path())).unwrap();
    let second = seq.value_at(25, 192).unwrap();
    assert_eq!(first.prec(), second.prec());
    assert_eq!(first.as_float(), second.as_float());
    // a lower precision is served from the stored record, rounded
    let lower = seq.value_at(25, 128).unwrap();
    assert_eq!(lower.as_float(), &Float::with_val(128, first.as_float()));
}

#[test]
fn corrupt_cache_records_are_loud() {
    let dir = tempfile::tempdir().unwrap();
    let good =
        CacheRecord::from_value(3, &BigReal::from_f64(0.125, 64), GammaSource::ExactIntegral)
            .unwrap()
            .render();
    write(
        &dir,
        CACHE_FILE_NAME,
        &format!("{good}\n\nn=4 prec=64 src=exact val=12e3\n"),
    );
    match SequenceProvider::zeta_gamma(Some(dir.path())) {
        Err(Error::CacheParse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

fn random_value() -> impl Strategy<Value = (u64, BigReal)> {
    (
        1u64..100_000,
        64u32..600,
        prop::collection::vec(any::<u64>(), 10),
        -200_000i32..200_000,
        any::<bool>(),
    )
        .prop_map(|(n, prec, limbs, exp, negative)| {
            let mantissa = Integer::from_digits(&limbs, rug::integer::Order::Lsf);
            let mut x = Float::with_val(prec, mantissa);
            if x.is_zero() {
                x = Float::with_val(prec, 1u32);
            }
            x >>= x.get_exp().unwrap();
            x <<= exp;
            if negative {
                x = -x;
            }
            (n, BigReal::new(x))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cache_record_round_trip((n, value) in random_value(), asym in any::<bool>()) {
        let source = if asym { GammaSource::Asymptotic } else { GammaSource::ExactIntegral };
        let record = CacheRecord::from_value(n, &value, source).unwrap();
        let parsed = CacheRecord::parse(&record.render()).unwrap();
        prop_assert_eq!(&parsed, &record);
        let back = parsed.to_value();
        prop_assert_eq!(back.prec(), value.prec());
        prop_assert_eq!(back.as_float(), value.as_float());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn cache_file_round_trip(values in prop::collection::vec(random_value(), 1..30)) {
        let dir = tempfile::tempdir().unwrap();
        let cache = GammaCache::open(dir.path()).unwrap();
        for (n, v) in &values {
            cache.insert(*n, v, GammaSource::ExactIntegral).unwrap();
        }
        cache.flush().unwrap();
        let reopened = GammaCache::open(dir.path()).unwrap();
        prop_assert_eq!(reopened.records(), cache.records());
        for record in reopened.records() {
            let got = reopened.get(record.n, record.prec_bits, GammaSource::ExactIntegral).unwrap();
            let expected = record.to_value();
            prop_assert_eq!(got.as_float(), expected.as_float());
        }
    }
}
