mod common;

use hdvass::corpus;
use hdvass::textio::{parse_2cm, parse_vass, serialize_2cm, serialize_vass};
use hdvass::{Vass64, VassBig};
use num_bigint::BigInt;
use proptest::prelude::*;

use common::arb_valid_vass;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialize_then_parse_is_identity(v in arb_valid_vass()) {
        let text = serialize_vass(&v);
        let back: Vass64 = parse_vass(&text).unwrap();
        prop_assert_eq!(&back, &v);
        prop_assert_eq!(serialize_vass(&back), text);
    }
}

#[test]
fn corpus_automata_round_trip() {
    for name in corpus::AUTOMATA {
        let v: VassBig = corpus::automaton(name).unwrap();
        let back: VassBig = parse_vass(&serialize_vass(&v)).unwrap();
        assert_eq!(back, v, "{name}");
    }
}

#[test]
fn big_effects_survive() {
    let text = "vass big\ndim 1\nsemantics cover\nalphabet a\nstate q initial accepting\ntrans q a +123456789012345678901234567890 q\n";
    let v: VassBig = parse_vass(text).unwrap();
    assert_eq!(v.transitions[0].effect[0], "123456789012345678901234567890".parse::<BigInt>().unwrap());
    assert_eq!(serialize_vass(&v), text);
}

#[test]
fn two_counter_machines_round_trip() {
    let text = "2cm m\nstate s initial\nstate t\nstate h halting\ntrans s inc1 t\ntrans t ztest2 h\ntrans t dec2 t\n";
    let m = parse_2cm(text).unwrap();
    assert_eq!(parse_2cm(&serialize_2cm(&m)).unwrap(), m);
}
