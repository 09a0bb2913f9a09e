use std::path::PathBuf;

use levi_core::settings::{self, Setting};
use levi_core::space::PairingKind;
use levi_cli::model::{load_model, Model};

fn model(name: &str) -> Model {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(format!("{name}.model"));
    load_model(&p).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Same space, same named subspaces, same Levi datum.
fn matches(m: &Model, s: &Setting) {
    assert_eq!(*m.space, *s.space, "{}: space", s.name);
    for (n, sub) in &s.subspaces {
        assert_eq!(m.subspace(n).unwrap(), sub, "{}: subspace {n}", s.name);
    }
    assert_eq!(m.levi("L").unwrap(), s.levi.as_ref().unwrap(), "{}: levi", s.name);
    assert!(m.diagnostics.is_empty(), "{}: {:?}", s.name, m.diagnostics);
}

#[test]
fn corpus_matches_library_settings() {
    matches(&model("two_couple"), &settings::two_couple().unwrap());
    matches(&model("three_parabolic"), &settings::three_parabolic().unwrap());
    matches(&model("one_block"), &settings::one_block().unwrap());
    matches(&model("eight_five"), &settings::eight_five(true).unwrap());
    matches(&model("negative"), &settings::negative().unwrap());
    matches(&model("selfdual_so"), &settings::selfdual(PairingKind::SelfdualSymmetric).unwrap());
    matches(&model("selfdual_sp"), &settings::selfdual(PairingKind::SelfdualAntisymmetric).unwrap());
}

#[test]
fn derived_declarations() {
    let m = model("one_block");
    assert!(m.subspace("XP").unwrap().is_zero());
    let v1 = m.eval(levi_core::space::Side::Left, "span{V[1]}").unwrap();
    assert_eq!(*m.subspace("YP").unwrap(), v1);
    let m = model("selfdual_so");
    let meet = m.subspace("WPP").unwrap().intersect(m.subspace("WP").unwrap()).unwrap();
    assert_eq!(meet, *m.subspace("E").unwrap());
}

/// Every canonical printed subspace parses back to itself.
#[test]
fn printed_subspaces_round_trip() {
    for name in ["two_couple", "three_parabolic", "one_block", "eight_five", "negative", "selfdual_so", "selfdual_sp"] {
        let m = model(name);
        for (n, s) in &m.subspaces {
            for t in [s.clone(), s.perp(), s.closure()] {
                let text = t.to_string();
                let back = m.eval(t.side(), &text).unwrap_or_else(|e| panic!("{name}/{n}: `{text}`: {e}"));
                assert_eq!(back, t, "{name}/{n}: `{text}`");
                assert_eq!(back.to_string(), text);
            }
        }
    }
}
