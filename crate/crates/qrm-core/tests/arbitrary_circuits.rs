//! End-to-end checks that arbitrary (shifted) subcube operators synthesize
//! to circuits the oracle confirms, and that their standard-term
//! decompositions reproduce the original phase profile.

use qrm_core::classify::{classify, Classification, OperatorSpec};
use qrm_core::code::QrmCode;
use qrm_core::hypercube::{all_subcubes, parse_subcube, Subcube};
use qrm_core::oracle::{
    phase_of_operator, phase_profile_with, verify_equivalence_with, OracleMode,
};
use qrm_core::synthesis::{arbitrary_subcube_circuit, decompose_to_standard};

fn code(m: u32, q: u32, r: u32) -> QrmCode {
    QrmCode::new(m, q, r).unwrap()
}

#[test]
fn arbitrary_subcube_circuits_verify_by_oracle() {
    for c in [code(3, 0, 1), code(4, 0, 2), code(5, 1, 2), code(5, 0, 2)] {
        for a in all_subcubes(c.m()).unwrap() {
            for k in 0..=c.k_max() {
                for signed in [true, false] {
                    let spec = OperatorSpec::z(k, a, signed);
                    if classify(&c, &spec) == Classification::NotPreserving {
                        continue;
                    }
                    let circuit = arbitrary_subcube_circuit(&c, &spec).unwrap();
                    let report =
                        verify_equivalence_with(&c, &spec, &circuit, OracleMode::Exhaustive)
                            .unwrap();
                    assert!(
                        report.equivalent,
                        "{c} A={a} k={k} signed={signed}: {report:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn standard_term_products_reproduce_the_profile() {
    let c = code(4, 0, 2);
    for a in all_subcubes(4).unwrap() {
        for k in 0..=c.k_max() {
            for signed in [true, false] {
                let spec = OperatorSpec::z(k, a, signed);
                if classify(&c, &spec) == Classification::NotPreserving {
                    continue;
                }
                let mut product = qrm_core::oracle::PhaseFunction::zero(4, k).unwrap();
                for (level, k_set) in decompose_to_standard(&c, k, &a, signed).unwrap() {
                    assert_eq!(level, k);
                    let term = OperatorSpec::z(level, Subcube::standard(4, k_set).unwrap(), signed);
                    product = product.add(&phase_of_operator(&term).unwrap()).unwrap();
                }
                let original = phase_profile_with(
                    &c,
                    &phase_of_operator(&spec).unwrap(),
                    OracleMode::Exhaustive,
                )
                .unwrap();
                let rebuilt = phase_profile_with(&c, &product, OracleMode::Exhaustive).unwrap();
                for (v, p) in original.entries() {
                    assert_eq!(
                        rebuilt.value(v),
                        Some(p),
                        "{c} A={a} k={k} signed={signed} v={v}"
                    );
                }
            }
        }
    }
}

#[test]
fn adjacent_order_codes_ignore_shifts() {
    // In QRM_m(r-1,r), operators of the same type implement the same logic.
    let c = code(4, 1, 2);
    for (shifted, standard) in [
        ("0010+<1,2>", "<1,2>"),
        ("1000+<2,3>", "<2,3>"),
        ("0001+<1,2,3>", "<1,2,3>"),
    ] {
        let a = parse_subcube(shifted, 4).unwrap();
        let b = parse_subcube(standard, 4).unwrap();
        let Some(k) = qrm_core::synthesis::level_of(&c, a.type_mask()) else {
            // Types outside every band (like 3-sets here) have no circuit.
            assert!(qrm_core::synthesis::level_of(&c, b.type_mask()).is_none());
            continue;
        };
        let pa = phase_profile_with(
            &c,
            &phase_of_operator(&OperatorSpec::z(k, a, true)).unwrap(),
            OracleMode::Exhaustive,
        )
        .unwrap();
        let pb = phase_profile_with(
            &c,
            &phase_of_operator(&OperatorSpec::z(k, b, true)).unwrap(),
            OracleMode::Exhaustive,
        )
        .unwrap();
        for (v, p) in pa.entries() {
            assert_eq!(pb.value(v), Some(p), "shift changed the logic at v={v}");
        }
    }
}
