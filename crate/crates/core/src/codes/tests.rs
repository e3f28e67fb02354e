use super::*;

const PRINTED_H: [&str; 12] = [
    "100010001000",
    "010001000100",
    "001000100010",
    "000100010001",
    "100010001000",
    "010001000100",
    "001000100010",
    "000100010001",
    "100010001000",
    "010001000100",
    "001000100010",
    "000100010001",
];

fn all_pass(spec: &RegeneratingCodeSpec) -> bool {
    verify_recovery(spec).passed() && verify_repair(spec).unwrap().passed()
}

#[test]
fn congruence_d3_matches_printed_matrix() {
    let spec = build_congruence_family(3).unwrap();
    let printed = Gf2Matrix::from_bitstrings(&PRINTED_H, 12).unwrap();
    assert_eq!(spec.parity.as_ref().unwrap(), &printed);
    assert_eq!(gf2_rank(&printed), 4);
    assert_eq!((spec.b, spec.alpha, spec.beta), (8, 3, 2));
    assert!(verify_parity_structure(&spec).passed());
}

#[test]
fn congruence_family_passes_for_small_d() {
    for d in 3..=6 {
        let spec = build_congruence_family(d).unwrap();
        assert_eq!(spec.b, (d - 1) * (d + 1));
        spec.validate().unwrap();
        assert!(all_pass(&spec), "d={d}");
        assert!(verify_parity_structure(&spec).passed(), "d={d}");
    }
    assert!(build_congruence_family(2).is_err());
}

#[test]
fn congruence_block_ranks() {
    let spec = build_congruence_family(4).unwrap();
    assert_eq!(gf2_rank(spec.parity.as_ref().unwrap()), 5);
    let ranks = parity_block_ranks(&spec).unwrap();
    for (i, row) in ranks.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            assert_eq!(r, if i == j { 4 } else { 3 });
        }
    }
}

#[test]
fn builtins_pass() {
    let c423 = builtin_code_423();
    assert_eq!((c423.b, c423.alpha, c423.beta), (4, 2, 1));
    assert!(c423.repair.values().all(|m| m.rows() == 1));
    assert_eq!(verify_recovery(&c423).checked, 6);
    assert!(all_pass(&c423));
    let c433 = builtin_code_433();
    assert_eq!((c433.b, c433.alpha, c433.beta), (8, 3, 2));
    assert_eq!(verify_recovery(&c433).checked, 4);
    assert!(all_pass(&c433));
}

#[test]
fn code_423_server_rows() {
    let c = builtin_code_423();
    // x, z+t on server 1; y+x on server 3
    assert_eq!(c.node_rows(1).to_bitstrings(), ["1000", "0011"]);
    assert_eq!(c.node_rows(3).to_bitstrings(), ["0010", "1100"]);
    let x_plus_y = Gf2Matrix::from_bitstrings(&["1100"], 4).unwrap();
    let servers12 = c.node_rows(2).vstack(&c.node_rows(1)).unwrap();
    assert!(gf2_solve(&servers12, &x_plus_y).unwrap().is_some());
    assert!(gf2_solve(&c.node_rows(2), &x_plus_y).unwrap().is_none());
}

#[test]
fn code_433_server_rows() {
    let c = builtin_code_433();
    assert_eq!(
        c.node_rows(1).to_bitstrings(),
        ["10000000", "01000000", "00001001"]
    );
    assert_eq!(
        c.node_rows(4).to_bitstrings(),
        ["00000010", "00000001", "00100100"]
    );
}

#[test]
fn broken_repair_fails() {
    let mut c = builtin_code_433();
    let short = c.repair[&(2, 1)].select_rows(&[0]);
    c.repair.insert((2, 1), short);
    let report = verify_repair(&c).unwrap();
    assert!(!report.passed());
    assert!(report.failure.unwrap().contains("node 1"));

    let mut c = builtin_code_423();
    c.repair.insert((3, 1), Gf2Matrix::zeros(1, 2));
    assert!(!verify_repair(&c).unwrap().passed());

    let mut c = builtin_code_423();
    c.repair.remove(&(4, 2));
    let err = verify_repair(&c).unwrap_err();
    assert!(err.to_string().contains("4->2"));
}

#[test]
fn identity_parity_fails_orthogonality() {
    let mut c = builtin_code_423();
    c.parity = Some(Gf2Matrix::identity(8));
    let report = verify_parity_structure(&c);
    assert!(!report.passed());
    assert!(report.failure.unwrap().contains("orthogonal"));
}

#[test]
fn json_round_trip() {
    for spec in [
        builtin_code_423(),
        builtin_code_433(),
        build_congruence_family(4).unwrap(),
    ] {
        let text = spec.to_json();
        assert_eq!(RegeneratingCodeSpec::from_json(&text).unwrap(), spec);
    }
    let text = builtin_code_423().to_json();
    assert!(text.contains("\"2->1\""));
    assert!(RegeneratingCodeSpec::from_json(&text.replace("\"2->1\"", "\"2-1\"")).is_err());
    assert!(RegeneratingCodeSpec::from_json("{").is_err());
}
