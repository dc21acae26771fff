use contract_forge::PolyhedralContract;
use contract_forge_labs::aircraft::{
    evaluate_instance, HxKind, OperatingPoint, PhysicalConstants, ToleranceVector,
};
use contract_forge_labs::mission::{
    five_step_sequence, schedule, OperationalRequirements, TaskHyperparameters,
};
use contract_forge_service::{handle, Response};
use serde_json::{json, Value};

fn c1() -> Value {
    json!({"input_vars": ["i"], "output_vars": ["o"], "assumptions": ["|i| <= 2"], "guarantees": ["o - i <= 0", "i - 2o <= 2"]})
}

fn c2() -> Value {
    json!({"input_vars": ["o"], "output_vars": ["o_p"], "assumptions": ["o <= 0.2", "-o <= 1"], "guarantees": ["o_p - o <= 0"]})
}

fn c1_weak() -> Value {
    json!({"input_vars": ["i"], "output_vars": ["o"], "assumptions": ["|i| <= 2"], "guarantees": ["|o| <= 3"]})
}

fn contract(v: &Value) -> PolyhedralContract {
    PolyhedralContract::from_json_str(&v.to_string()).unwrap()
}

fn post(path: &str, body: Value) -> Response {
    let r = handle("POST", path, body.to_string().as_bytes());
    assert_ne!(r.status, 500);
    assert!(r.body["elapsed_ms"].as_f64().unwrap() >= 0.0);
    if r.body["ok"] == json!(false) {
        assert!(!r.body["diagnostic"].is_null() || r.body["error"].is_string());
    }
    r
}

fn result_contract(r: &Response) -> PolyhedralContract {
    contract(&r.body["result"]["contract"])
}

#[test]
fn health() {
    let r = handle("GET", "/api/health", b"");
    assert_eq!(r.status, 200);
    assert_eq!(r.body["ok"], json!(true));
    assert_eq!(handle("POST", "/api/health", b"").status, 405);
}

#[test]
fn compose_matches_the_library() {
    let r = post("/api/compose", json!({"contracts": [c1(), c2()]}));
    assert_eq!(r.status, 200);
    let direct = contract(&c1()).compose(&contract(&c2())).unwrap();
    assert_eq!(result_contract(&r), direct);
    assert_eq!(r.body["result"]["text"], json!(direct.to_string()));
    assert!(r.body["result"]["text"]
        .as_str()
        .unwrap()
        .contains("-i + o_p <= 0"));
}

#[test]
fn compose_keeping_a_connection() {
    let r = post(
        "/api/compose",
        json!({"contracts": [c1(), c2()], "options": {"keep": ["o"]}}),
    );
    assert_eq!(r.status, 200);
    assert_eq!(
        r.body["result"]["contract"]["output_vars"],
        json!(["o", "o_p"])
    );
}

#[test]
fn incompatible_composition_is_422_with_diagnostic() {
    let r = post("/api/compose", json!({"contracts": [c1_weak(), c2()]}));
    assert_eq!(r.status, 422);
    assert_eq!(r.body["ok"], json!(false));
    assert_eq!(r.body["diagnostic"]["variables"], json!(["o"]));
    assert_eq!(
        r.body["diagnostic"]["failed_terms"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
    assert!(r.body["error"]
        .as_str()
        .unwrap()
        .starts_with("Could not eliminate variables ['o']"));
}

#[test]
fn malformed_requests_are_400() {
    assert_eq!(handle("POST", "/api/compose", b"{not json").status, 400);
    assert_eq!(
        post("/api/compose", json!({"contracts": [c1()]})).status,
        400
    );
    let bad =
        json!({"input_vars": ["i"], "output_vars": [], "assumptions": ["i <="], "guarantees": []});
    assert_eq!(
        post("/api/merge", json!({"contracts": [bad, c1()]})).status,
        400
    );
    assert_eq!(
        post("/api/optimize", json!({"contracts": [c1()], "options": {}})).status,
        400
    );
    assert_eq!(handle("POST", "/api/nothing", b"{}").status, 404);
    assert_eq!(handle("GET", "/api/compose", b"").status, 405);
}

#[test]
fn preflight_is_allowed() {
    assert_eq!(handle("OPTIONS", "/api/compose", b"").status, 204);
}

#[test]
fn quotient_merge_and_refines() {
    let top = json!({"input_vars": ["i"], "output_vars": ["o_p"], "assumptions": ["|i| <= 1"], "guarantees": ["o_p - 2i = 1"]});
    let part = json!({"input_vars": ["i"], "output_vars": ["o"], "assumptions": ["|i| <= 2"], "guarantees": ["o - 2i = 0"]});
    let r = post("/api/quotient", json!({"contracts": [top, part]}));
    assert_eq!(r.status, 200);
    let got = result_contract(&r);
    let expected = contract(&top).quotient(&contract(&part)).unwrap();
    assert_eq!(got.inputs(), expected.inputs());
    assert_eq!(got.outputs(), expected.outputs());
    assert!(got.equivalent(&expected));

    let f = json!({"input_vars": ["i"], "output_vars": ["o"], "assumptions": ["|i| <= 2"], "guarantees": ["o - 2i = 1"]});
    let p = json!({"input_vars": ["temp"], "output_vars": ["P"], "assumptions": ["temp <= 90"], "guarantees": ["P <= 2.1"]});
    let r = post("/api/merge", json!({"contracts": [f, p]}));
    assert_eq!(r.status, 200);
    assert_eq!(
        result_contract(&r),
        contract(&f).merge(&contract(&p)).unwrap()
    );
    assert_eq!(r.body["result"]["compatible"], json!(true));

    let r = post("/api/refines", json!({"contracts": [c1_weak(), c1()]}));
    assert_eq!(r.status, 200);
    assert_eq!(
        r.body["result"],
        json!(contract(&c1_weak())
            .refines(&contract(&c1()))
            .unwrap()
            .to_json())
    );
    assert_eq!(r.body["result"]["refines"], json!(false));
}

#[test]
fn bounds_and_optimize() {
    let composed = contract(&c1()).compose(&contract(&c2())).unwrap().to_json();
    let r = post(
        "/api/bounds",
        json!({"contracts": [composed], "options": {"var": "o_p"}}),
    );
    assert_eq!(r.status, 200);
    assert_eq!(r.body["result"]["o_p"]["lower"], Value::Null);
    assert!((r.body["result"]["o_p"]["upper"].as_f64().unwrap() - 0.2).abs() < 1e-9);
    let r = post("/api/bounds", json!({"contracts": [composed]}));
    assert_eq!(r.body["result"].as_object().unwrap().len(), 2);
    let r = post(
        "/api/optimize",
        json!({"contracts": [composed], "options": {"expr": "i", "direction": "max"}}),
    );
    assert!((r.body["result"]["value"].as_f64().unwrap() - 0.2).abs() < 1e-9);
    let r = post(
        "/api/optimize",
        json!({"contracts": [composed], "options": {"expr": "o_p", "direction": "min"}}),
    );
    assert_eq!(r.body["result"]["unbounded"], json!(true));
    let infeasible = json!({"input_vars": ["x"], "output_vars": [], "assumptions": ["x <= 1", "x >= 2"], "guarantees": []});
    let r = post(
        "/api/bounds",
        json!({"contracts": [infeasible], "options": {"var": "x"}}),
    );
    assert_eq!(r.status, 422);
    assert!(r.body["error"].as_str().unwrap().contains("infeasible"));
}

#[test]
fn mission_schedulability_matches_the_library() {
    let r = post(
        "/api/mission/schedulability",
        json!({"options": {"sequence": ["DSN", "CHRG", "SBO", "TCM"]}}),
    );
    assert_eq!(r.status, 200);
    let direct = schedule(
        &five_step_sequence(),
        &TaskHyperparameters::default(),
        &OperationalRequirements::default(),
    )
    .unwrap();
    assert_eq!(r.body["result"]["schedule"], json!(direct));
    assert_eq!(r.body["result"]["schedule"]["admissible"], json!(true));
    let r = post(
        "/api/mission/schedulability",
        json!({"options": {"sequence": ["WARP"]}}),
    );
    assert_eq!(r.status, 400);
}

#[test]
fn aircraft_evaluate_matches_the_library() {
    let op = OperatingPoint {
        alt: 15.0,
        thrust: 20000.0,
        mdot_in: 9.316,
        mdot_a: 0.429,
    };
    let r = post(
        "/api/aircraft/evaluate",
        json!({"options": {"op": op, "eps": 0.01, "hx": "controlled"}}),
    );
    assert_eq!(r.status, 200);
    let direct = evaluate_instance(
        &PhysicalConstants::default(),
        &op,
        &ToleranceVector::uniform(0.01),
        HxKind::Controlled,
    )
    .unwrap();
    assert_eq!(r.body["result"]["instance"], json!(direct));
    assert_eq!(r.body["result"]["valid"], json!(true));
    assert!(r.body["elapsed_ms"].as_f64().unwrap() < 3000.0);
    let bad = OperatingPoint { mdot_in: 0.1, ..op };
    assert_eq!(
        post(
            "/api/aircraft/evaluate",
            json!({"options": {"op": bad, "eps": 0.01, "hx": "fixed"}})
        )
        .status,
        400
    );
}

#[test]
fn aircraft_explore_on_a_small_grid() {
    let r = post(
        "/api/aircraft/explore",
        json!({"options": {"altitudes": [15.0], "thrusts": [20000.0], "mdot_in": [8.0], "mdot_a": [1.0, 2.0]}}),
    );
    assert_eq!(r.status, 200);
    assert_eq!(r.body["result"]["rows"].as_array().unwrap().len(), 4);
}
