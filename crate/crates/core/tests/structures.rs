mod common;

use proptest::prelude::*;
use unilocal::structures::{parse_structure, FiniteStructure, Signature, StructureError};

#[test]
fn text_format_with_comments() {
    let s = parse_structure(
        "# a path\nsignature\nedge/2\ncol/1\nuniverse\na b c  # three\nrelations\nedge (a,b) (b,c)\ncol (b)\n",
    )
    .unwrap();
    assert_eq!(s.size(), 3);
    assert_eq!(s.signature().arity("col"), Some(1));
    assert!(s.holds(0, &[0, 1]) && !s.holds(0, &[1, 0]));
    assert_eq!(s.relation("col").unwrap().len(), 1);
}

#[test]
fn parse_errors_carry_lines() {
    let bad_arity = "signature\nlt/2\nuniverse\na b\nrelations\nlt (a,b,a)\n";
    assert!(matches!(
        parse_structure(bad_arity),
        Err(StructureError::ArityMismatch { line: 6, expected: 2, found: 3, .. })
    ));
    let unknown = "signature\nlt/2\nuniverse\na b\nrelations\nlt (a,z)\n";
    assert!(matches!(parse_structure(unknown), Err(StructureError::UnknownElement { line: 6, .. })));
    let rel = "signature\nlt/2\nuniverse\na\nrelations\ngt (a,a)\n";
    assert!(matches!(parse_structure(rel), Err(StructureError::UnknownRelation { .. })));
    assert!(parse_structure("{\"signature\": 3}").is_err());
}

#[test]
fn builder_rejects_duplicates() {
    let sig = Signature::new().with("p", 1);
    assert!(FiniteStructure::new(sig, &["a", "a"], &[]).is_err());
}

proptest! {
    #[test]
    fn text_round_trip(s in common::arb_structure(5)) {
        let text = s.render_text();
        let back = parse_structure(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.render_text(), text);
    }

    #[test]
    fn json_round_trip(s in common::arb_structure(5)) {
        let back = parse_structure(&s.render_json()).unwrap();
        prop_assert_eq!(back, s);
    }
}
