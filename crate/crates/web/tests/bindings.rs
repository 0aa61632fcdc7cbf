use crncdr_web::*;
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn emission() {
    let v = parse(emission_orders_json("1/2", "0", "1", "1"));
    assert_eq!((v["e"].as_str(), v["f"].as_str(), v["linear"].as_bool()), (Some("2"), Some("-1"), Some(false)));
    assert_eq!(parse(emission_orders_json("1", "0", "3", "1"))["linear"], true);
    assert!(emission_orders_json("1/2", "0", "1/2", "1").is_err());
    assert!(emission_orders_json("half", "0", "1", "1").is_err());
}

#[test]
fn screen() {
    let v = parse(beccs_screen_json("4", "2", "3", "2"));
    assert_eq!(v["multistationary"], true);
    assert_eq!(v["injectivity"], "NotInjective");
    assert!(v["witness"]["mu"].as_str().unwrap().starts_with('('));
    let v = parse(beccs_screen_json("0", "0", "2", "-1"));
    assert_eq!(v["multistationary"], false);
    assert_eq!(v["class"], "PNull");
    assert_eq!(parse(beccs_screen_json("2", "1", "1", "2"))["balanced_negative"], true);
}

#[test]
fn simulation_is_thinned_and_conservative() {
    let v = parse(simulate_beccs_json("4", "2", "3", "2", "1,2,1,1,1", 50.0));
    let t = v["t"].as_array().unwrap();
    assert!(t.len() <= MAX_POINTS + 1 && t.len() > 1);
    assert_eq!(t.last().unwrap().as_f64(), Some(50.0));
    assert!(v["max_total_drift"].as_f64().unwrap() < 1e-8);
    assert!(simulate_beccs_json("4", "2", "3", "2", "1,2", 1.0).is_err());
}
