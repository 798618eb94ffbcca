use std::path::PathBuf;

use torus_lefschetz::json;
use torus_lefschetz::lattice::vec2;
use torus_lefschetz::oracle::{self, SearchBudget};
use torus_lefschetz::trace::{self, ActionSide, TheoremVerdict};
use torus_lefschetz::*;

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn corpus_documents_match_golden_files() {
    for (name, phi, data) in trace::corpus() {
        let text = json::to_canonical_string(&json::document_to_json(&phi, &data));
        assert_eq!(text, golden(&format!("{name}.json")), "{name}");
    }
}

#[test]
fn generated_shear_data_matches_golden_file() {
    let phi = Endomorphism::from_rows(1, 1, 0, 1);
    let data = oracle::generate_valid_data(&phi, &SearchBudget::default(), 0).unwrap();
    let text = json::to_canonical_string(&json::document_to_json(&phi, &data));
    assert_eq!(text, golden("generated_shear_seed0.json"));
}

#[test]
fn corpus_reports() {
    let reports: Vec<(&str, TraceReport)> = trace::corpus()
        .into_iter()
        .map(|(name, phi, data)| (name, trace::analyze_data(&phi, &data, ActionSide::Right, DEFAULT_SUPPORT_BOUND).unwrap()))
        .collect();
    for (name, rep) in &reports {
        assert_eq!(rep.theorem, TheoremVerdict::Holds, "{name}");
    }
    let shear = &reports.iter().find(|(n, _)| *n == "shear").unwrap().1;
    assert_eq!(shear.nielsen, 2);
    assert_eq!(shear.lefschetz, vec2(-2, 0));
    assert_eq!(shear.alpha, Some(vec2(1, 0)));
    for name in ["fixed_point_free", "scaling"] {
        let rep = &reports.iter().find(|(n, _)| *n == name).unwrap().1;
        assert_eq!((rep.nielsen, rep.lefschetz.clone()), (0, vec2(0, 0)), "{name}");
    }
}

/// Every corpus component: a Trivial verdict must be matched by a brute-force
/// certificate at some window up to the cap, a Nontrivial one by failure at
/// every window up to the cap.
#[test]
fn corpus_components_agree_with_brute_force() {
    const CAP: u32 = 5;
    for (name, phi, data) in trace::corpus() {
        let r = trace::one_parameter_trace(&phi, &data, ActionSide::Right).unwrap();
        for (class, c) in decompose_components(&phi, &r) {
            let found = (0..=CAP).find_map(|w| oracle::brute_certificate(&phi, &c, &SearchBudget::window(w)).unwrap());
            match is_trivial(&phi, &c, DEFAULT_SUPPORT_BOUND).unwrap() {
                TrivialityVerdict::Nontrivial(_) => assert!(found.is_none(), "{name} {class}"),
                TrivialityVerdict::Trivial(y) => {
                    assert_eq!(d2(&phi, &y), c);
                    let b = found.unwrap_or_else(|| panic!("{name} {class}: no brute certificate up to window {CAP}"));
                    assert_eq!(d2(&phi, &b), c);
                }
                TrivialityVerdict::Unknown(_) => panic!("{name} {class}: unknown"),
            }
        }
    }
}

#[test]
fn malformed_cellular_data_is_rejected() {
    let (phi, mut data) = trace::shear_example();
    data.d0[0] = &data.d0[0] + &RingElement::one();
    let err = trace::one_parameter_trace(&phi, &data, ActionSide::Right).unwrap_err();
    match err {
        Error::InvalidCellular(vs) => assert!(!vs.is_empty()),
        e => panic!("unexpected error {e}"),
    }
    assert!(json::document_from_json(&json::parse("{\"phi\": [[1,1],[0]]}").unwrap()).is_err());
}
