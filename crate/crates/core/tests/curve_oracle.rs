mod common;

use common::{specs_over, worst_curve_deviation, P_GRID};
use wtail::{ModelId, SeededStream, SortedSample};

#[test]
fn curves_match_naive_recomputation_on_all_models() {
    for (m, model) in ModelId::STUDY.iter().enumerate() {
        for n in [50, 200] {
            let s = model.spec().sample(n, SeededStream::new(99, m as u64)).unwrap();
            for spec in specs_over(&P_GRID) {
                let d = worst_curve_deviation(&s, spec);
                assert!(d < 1e-9, "{model} n={n} {}: {d:e}", spec.id());
            }
        }
    }
}

#[test]
fn exponential_n200_every_family() {
    let s = ModelId::Exponential.spec().sample(200, SeededStream::new(3, 0)).unwrap();
    let specs = specs_over(&P_GRID);
    assert_eq!(specs.len(), 4 * 6 - 2);
    for spec in specs {
        assert!(worst_curve_deviation(&s, spec) < 1e-9, "{}", spec.id());
    }
}

#[test]
fn extreme_exponents_stay_accurate() {
    let s = ModelId::Exponential.spec().sample(500, SeededStream::new(4, 0)).unwrap();
    for spec in specs_over(&[-25.0, -10.0, -0.9, 1e-3, 7.5, 12.0]) {
        let d = worst_curve_deviation(&s, spec);
        assert!(d < 1e-9, "{}: {d:e}", spec.id());
    }
}

#[test]
fn sub_ranges_agree_with_full_curve() {
    let s = ModelId::HalfNormal.spec().sample(300, SeededStream::new(5, 1)).unwrap();
    for spec in specs_over(&[-2.0, 0.5, 2.0]) {
        let full = wtail::wtc_curve(&s, spec, 1..=299).unwrap();
        let part = wtail::wtc_curve(&s, spec, 40..=120).unwrap();
        assert_eq!(&full[39..120], &part[..]);
    }
}

#[test]
fn tied_thresholds_are_undefined_for_negative_power_means() {
    let s = SortedSample::from_sorted(vec![1.0, 2.0, 2.0, 2.0, 5.0]).unwrap();
    let spec = wtail::EstimatorSpec::new(wtail::Family::TildeG, -0.5).unwrap();
    let curve = wtail::wtc_curve(&s, spec, 1..=4).unwrap();
    assert!(curve[0].is_some());
    assert_eq!(&curve[1..3], &[None, None]);
    assert!(curve[3].is_some());
}
