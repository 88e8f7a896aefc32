use qindex::pachner::{
    apply_move, index_zero, invariance_check, parse_paths, verify_path, verify_path_with_efficiency, Invariance,
    MoveSpec,
};
use qindex::series::{HalfInt, TruncatedSeries};
use qindex::tri::{decode_isosig, encode_isosig};

fn path_file(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn all_tables_replay() {
    let expect = [("solid_torus.path", 3), ("trefoil_short.path", 1), ("trefoil_oneeff.path", 1)];
    for (name, count) in expect {
        let paths = parse_paths(&path_file(name)).unwrap();
        assert_eq!(paths.len(), count, "{name}");
        for p in &paths {
            verify_path(p).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

#[test]
fn one_efficient_trefoil_path_keeps_index() {
    let path = parse_paths(&path_file("trefoil_oneeff.path")).unwrap().remove(0);
    let report = verify_path_with_efficiency(&path).unwrap();
    assert_eq!(report.steps, 12);
    assert!(report.all_one_efficient(), "{:?}", report.efficiency);
    let order = HalfInt::from_int(5);
    for sig in &report.signatures {
        let (s, _) = index_zero(&decode_isosig(sig).unwrap(), order).unwrap();
        assert_eq!(s, TruncatedSeries::one(order), "{sig}");
    }
    for step in &path {
        if let Some(m) = step.mv {
            let t = decode_isosig(&step.isosig).unwrap();
            assert!(invariance_check(&t, m, order).unwrap().holds(), "{}", step.isosig);
        }
    }
}

#[test]
fn two_zero_precondition_reported() {
    let t = decode_isosig("eLAkbbcdddhjac").unwrap();
    let d = t.edge_classes().unwrap().degrees();
    let e = (0..d.len())
        .find(|&e| {
            apply_move(&t, MoveSpec::TwoZero { edge: e }).map(|r| encode_isosig(&r) == "cPcbbbdxm").unwrap_or(false)
        })
        .unwrap();
    let out = invariance_check(&t, MoveSpec::TwoZero { edge: e }, HalfInt::from_int(5)).unwrap();
    assert!(matches!(out, Invariance::NotOneEfficient { side: 0, .. }), "{out:?}");
}

#[test]
fn fig8_two_three_invariance() {
    let t = decode_isosig("cPcbbbiht").unwrap();
    let mut checked = 0;
    for face in 0..t.triangles().len() {
        if apply_move(&t, MoveSpec::TwoThree { face }).is_err() {
            continue;
        }
        match invariance_check(&t, MoveSpec::TwoThree { face }, HalfInt::from_int(5)).unwrap() {
            Invariance::Agree(s) => {
                checked += 1;
                assert_eq!(s.coeff(HalfInt::from_int(1)), (-2).into());
            }
            Invariance::NotOneEfficient { .. } => {}
            other => panic!("face {face}: {other:?}"),
        }
    }
    assert!(checked > 0);
}
