use std::collections::BTreeMap;

use healthwise_core::wire::messages::{GetProductResponse, Message, ProductInfo};
use healthwise_core::wire::{
    parse_envelope, render_fault, render_request, Envelope, Fault, FaultCode, OPERATIONS,
};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn golden(name: &str) -> Vec<u8> {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn golden_get_product_request() {
    let fields = BTreeMap::from([("barcode".to_string(), "4006381333931".to_string())]);
    assert_eq!(render_request("GetProduct", &fields).unwrap(), golden("get_product_request.xml"));
}

#[test]
fn golden_get_product_response() {
    let response = GetProductResponse {
        product: ProductInfo {
            gtin: "4006381333931".into(),
            name: "Choco Wafer".into(),
            energy_per_100g: 500.0,
            protein_per_100g: 6.5,
            fat_per_100g: 25.0,
            carb_per_100g: 62.0,
        },
    };
    let bytes = healthwise_core::wire::render_body(&response.to_element());
    assert_eq!(bytes, golden("get_product_response.xml"));
    let Envelope::Response(el) = parse_envelope(&bytes).unwrap() else {
        panic!("expected a response");
    };
    assert_eq!(GetProductResponse::from_element(&el).unwrap(), response);
}

#[test]
fn golden_product_not_found_fault() {
    let fault = Fault::new(FaultCode::ProductNotFound, "no product with barcode 5901234123457");
    assert_eq!(render_fault(&fault), golden("product_not_found_fault.xml"));
    assert_eq!(
        parse_envelope(&golden("product_not_found_fault.xml")).unwrap(),
        Envelope::Fault(fault)
    );
}

const ALPHABET: &[char] = &[
    'a', 'Z', '0', '9', ' ', '<', '>', '&', '"', '\'', ';', '#', '/', '=', '\t', '\n', '\r', 'é',
    'ß', '€', '日', '🍎', ']', '[', '!', '?', '-',
];

fn random_value(rng: &mut impl Rng) -> String {
    let len = rng.random_range(0..24);
    let mut s: String = (0..len).map(|_| *ALPHABET.choose(rng).unwrap()).collect();
    if rng.random_bool(0.1) {
        s.push_str("]]>&amp;<![CDATA[");
    }
    s
}

fn random_request(rng: &mut impl Rng) -> (&'static str, BTreeMap<String, String>) {
    let op = OPERATIONS.choose(rng).unwrap();
    let mut fields = BTreeMap::new();
    for f in op.fields {
        if f.required || rng.random_bool(0.5) {
            fields.insert(f.name.to_string(), random_value(rng));
        }
    }
    (op.name, fields)
}

#[test]
fn parse_render_identity_over_random_envelopes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x50a9);
    for _ in 0..1000 {
        let (op, fields) = random_request(&mut rng);
        let bytes = render_request(op, &fields).unwrap();
        assert_eq!(render_request(op, &fields).unwrap(), bytes, "rendering is deterministic");
        match parse_envelope(&bytes) {
            Ok(Envelope::Request(req)) => {
                assert_eq!(req.operation.name, op);
                assert_eq!(req.fields, fields);
                assert_eq!(req.render(), bytes);
            }
            other => panic!("{op} {fields:?}: {other:?}"),
        }
    }
}

#[test]
fn faults_round_trip_for_every_code() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfa);
    for &code in FaultCode::ALL {
        let fault = Fault::new(code, random_value(&mut rng));
        assert_eq!(parse_envelope(&render_fault(&fault)).unwrap(), Envelope::Fault(fault));
    }
}

#[test]
fn random_bytes_never_panic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb17e);
    let seed = golden("get_product_request.xml");
    for i in 0..2000 {
        let bytes: Vec<u8> = if i % 2 == 0 {
            (0..rng.random_range(0..200)).map(|_| rng.random()).collect()
        } else {
            let mut b = seed.clone();
            for _ in 0..rng.random_range(1..6) {
                let at = rng.random_range(0..b.len());
                b[at] = rng.random();
            }
            b
        };
        let _ = parse_envelope(&bytes);
    }
}
