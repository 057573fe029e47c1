//! Wire-format fixtures: the exact JSON shapes consumed and produced by the
//! CLI, plus round-trip properties for every serializable artifact.

use efxlab_core::*;

#[test]
fn valuation_json_shapes_parse() {
    let fixtures = [
        r#"{"type":"additive","weights":[2,2,4]}"#,
        r#"{"type":"budget_additive","weights":[2,2,4],"budget":4}"#,
        r#"{"type":"unit_demand","weights":[1,"3/2",0]}"#,
        r#"{"type":"oxs","matrix":[[5,4],[5,1]]}"#,
        r#"{"type":"table","m":2,"values":[0,0,0,1]}"#,
    ];
    for text in fixtures {
        let v: Valuation = serde_json::from_str(text).expect(text);
        let round: Valuation = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, round, "round trip of {text}");
    }
}

#[test]
fn valuation_json_rejects_malformed_input() {
    // wrong table size
    assert!(serde_json::from_str::<Valuation>(r#"{"type":"table","m":2,"values":[0,1]}"#).is_err());
    // non-normalized table
    assert!(serde_json::from_str::<Valuation>(r#"{"type":"table","m":1,"values":[1,2]}"#).is_err());
    // unknown type tag
    assert!(serde_json::from_str::<Valuation>(r#"{"type":"quadratic","weights":[]}"#).is_err());
    // ragged OXS matrix
    assert!(serde_json::from_str::<Valuation>(r#"{"type":"oxs","matrix":[[1],[1,2]]}"#).is_err());
    // float weights are rejected: the core is exact
    assert!(serde_json::from_str::<Valuation>(r#"{"type":"additive","weights":[1.5]}"#).is_err());
}

#[test]
fn instance_and_allocation_shapes_parse() {
    let instance = r#"{"m":4,"n":2,"identical":true,"agents":[
        {"type":"table","m":4,"values":[0,11,10,15,10,15,17,18,16,18,18,18,18,18,18,18]}
    ]}"#;
    let inst: Instance = serde_json::from_str(instance).unwrap();
    assert_eq!(inst.agents(), 2);
    assert_eq!(inst.goods(), 4);
    assert_eq!(
        inst.shared_valuation().unwrap().clone(),
        greedy_trap_example().valuation
    );

    let alloc: Allocation =
        serde_json::from_str(r#"{"n":2,"m":4,"bundles":[[3],[0,1,2]]}"#).unwrap();
    assert_eq!(alloc.bundle(0).goods(), vec![3]);

    let heterogeneous = r#"{"m":2,"agents":[
        {"type":"additive","weights":[3,1]},
        {"type":"additive","weights":[1,3]}
    ]}"#;
    let inst: Instance = serde_json::from_str(heterogeneous).unwrap();
    assert_eq!(inst.agents(), 2);
    assert!(inst.shared_valuation().is_none());
}

#[test]
fn circuit_json_shape_parses() {
    let text = r#"{"inputs":2,"gates":[
        {"op":"INPUT","args":[0]},
        {"op":"INPUT","args":[1]},
        {"op":"AND","args":[0,1]},
        {"op":"XOR","args":[0,1]}
    ],"outputs":[3,2]}"#;
    let c: BoolCircuit = serde_json::from_str(text).unwrap();
    // half adder: s = a xor b, carry = a and b
    assert_eq!(c.eval(0b11), num::BigUint::from(2u8));
    assert_eq!(c.eval(0b01), num::BigUint::from(1u8));
}

#[test]
fn reduction_artifacts_round_trip() {
    let flip = FlipInstance::new(gen::flip_circuit(3, 12, 3, 7)).unwrap();
    let art = flip_to_kneser(&flip).unwrap();
    let json = serde_json::to_string(&art).unwrap();
    assert!(json.contains("\"backmap\":{\"kind\":\"prefix\"}"), "{json}");
    let back: FlipToKneserArtifact = serde_json::from_str(&json).unwrap();
    assert_eq!(art, back);

    let maximized = KneserInstance::new(
        negate_outputs(art.target.circuit()),
        art.target.k(),
        Direction::Maximize,
    )
    .unwrap();
    let efx = kneser_to_efx(&maximized).unwrap();
    let json = serde_json::to_string(&efx).unwrap();
    assert!(json.contains("\"kind\":\"size-k-bundle\""), "{json}");
    assert!(json.contains("\"type\":\"kneser_efx\""), "{json}");
    let back: KneserToEfxArtifact = serde_json::from_str(&json).unwrap();
    assert_eq!(efx, back);

    // the reduced valuation itself round-trips through valuation JSON
    let v_json = serde_json::to_string(&efx.valuation).unwrap();
    let v_back: Valuation = serde_json::from_str(&v_json).unwrap();
    assert_eq!(efx.valuation, v_back);
}

#[test]
fn verdict_and_witness_shapes() {
    let v = greedy_trap_example().valuation;
    let alloc: Allocation =
        serde_json::from_str(r#"{"n":2,"m":4,"bundles":[[3],[0,1,2]]}"#).unwrap();
    let verdict = is_efx_identical(&v, &alloc).unwrap();
    let json = serde_json::to_string(&verdict).unwrap();
    assert_eq!(json, r#"{"verdict":"violation","i":0,"j":1,"g":0}"#);

    let ok = serde_json::to_string(&EfxVerdict::Ok).unwrap();
    assert_eq!(ok, r#"{"verdict":"ok"}"#);
}

#[test]
fn greedy_trace_log_format() {
    let v = greedy_trap_example().valuation;
    let (_, trace) = greedy_efx(&v, 2);
    let log = trace.to_log();
    let lines: Vec<&str> = log.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "1 0 3 16", "round agent good value");
    assert_eq!(lines[1], "2 1 0 11");
}
