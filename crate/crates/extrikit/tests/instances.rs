use extrikit::instances::bundle::complexes_provenance;
use extrikit::instances::{build_a4sub, fixture, parse_instance, to_bundle_json, validate_instance, FIXTURES};
use extrikit::{Fp, QInstance, Rational};

fn fx(name: &str) -> QInstance {
    fixture::<Rational>(name, 0).unwrap()
}

#[test]
fn shipped_a4sub_matches_the_builder() {
    let (inst, cc, decs) = build_a4sub::<Rational>(0).unwrap();
    let json = to_bundle_json(&inst);
    let prov = complexes_provenance(&cc, &inst, &decs);
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    if std::env::var("EXTRIKIT_REGEN").is_ok() {
        std::fs::write(format!("{dir}/a4sub.json"), &json).unwrap();
        std::fs::write(format!("{dir}/a4sub.provenance.json"), &prov).unwrap();
    }
    assert_eq!(json, std::fs::read_to_string(format!("{dir}/a4sub.json")).unwrap());
    assert_eq!(prov, std::fs::read_to_string(format!("{dir}/a4sub.provenance.json")).unwrap());
}

#[test]
fn every_fixture_validates() {
    for name in FIXTURES {
        let inst = fx(name);
        let rep = validate_instance(&inst);
        assert!(rep.ok(), "{name}: {:?}", rep.failures);
    }
}

#[test]
fn bundles_round_trip() {
    for name in FIXTURES {
        let inst = fx(name);
        let json = to_bundle_json(&inst);
        let back: QInstance = parse_instance(&json, None).unwrap();
        assert_eq!(to_bundle_json(&back), json, "{name}");
    }
}

#[test]
fn fixtures_validate_in_positive_characteristic() {
    for name in FIXTURES {
        let inst = fixture::<Fp>(name, 5).unwrap();
        let rep = validate_instance(&inst);
        assert!(rep.ok(), "{name}: {:?}", rep.failures);
        assert_eq!(inst.e.dims(), fx(name).e.dims(), "{name}");
    }
}

#[test]
fn malformed_bundles_are_rejected() {
    assert!(parse_instance::<Rational>("{", None).is_err());
    let json = to_bundle_json(&fx("twoterm_a2"));
    let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
    v["field"]["characteristic"] = 4.into();
    assert!(parse_instance::<Fp>(&v.to_string(), None).is_err());
}
