use hpl_web::{design_order, obi_sweep, response_curves};

fn y3(json: &str) -> Vec<f64> {
    let row: serde_json::Value = serde_json::from_str(json).unwrap();
    row["multipliers"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect()
}

#[test]
fn design_matches_reference_multiplier() {
    let y = y3(&design_order(3, 2, 2).unwrap());
    assert_eq!(y.len(), 3);
    assert!((y[2] - 2.293).abs() < 0.01, "{y:?}");
    assert!(design_order(3, 2, 14).is_err());
}

#[test]
fn curves_have_unit_passband_and_lower_stopband() {
    let y = y3(&design_order(3, 2, 5).unwrap());
    let c = response_curves(3, 2, 5, y, 200.0, 300.0, 101).unwrap();
    assert_eq!(c.len(), 303);
    let at = |f: f64| c.chunks(3).find(|t| (t[0] - f).abs() < 1e-9).unwrap().to_vec();
    let pass = at(250.0);
    assert!((pass[1] - 1.0).abs() < 1e-9 && (pass[2] - 1.0).abs() < 1e-6, "{pass:?}");
    let band: Vec<&[f64]> = c.chunks(3).filter(|t| t[0] <= 225.0 || t[0] >= 275.0).collect();
    let max = |i: usize| band.iter().map(|t| t[i]).fold(0.0, f64::max);
    assert!(max(2) < 0.1 * max(1), "{} vs {}", max(2), max(1));
    assert!(response_curves(3, 2, 5, vec![1.0; 2], 200.0, 300.0, 10).is_err());
    assert!(response_curves(3, 2, 5, vec![1.0; 3], 300.0, 200.0, 10).is_err());
}

#[test]
fn unit_multipliers_reproduce_baseline_sweep() {
    let s = obi_sweep(3, 2, 4, vec![1.0; 3], 0.05, 3, 1).unwrap();
    assert_eq!(s.len(), 9);
    for t in s.chunks(3) {
        assert!((t[1] - t[2]).abs() < 1e-9, "{t:?}");
    }
    assert!(s[7] > s[1]);
    let w = obi_sweep(3, 2, 4, vec![1.0, 1.0, 2.293], 0.05, 3, 1).unwrap();
    assert!(w[8] < w[7]);
}
