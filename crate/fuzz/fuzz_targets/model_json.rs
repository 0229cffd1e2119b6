//! Model JSON parsing: must not panic; accepted models round-trip and can be
//! evaluated and realized without panicking.

#![no_main]

use baryfit::io::{model_to_json, parse_model_json};
use baryfit::{realize, Complex64};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(model) = parse_model_json(text) else {
        return;
    };
    assert_eq!(parse_model_json(&model_to_json(&model)).expect("re-parse of written model"), model);
    let _ = model.eval(Complex64::new(0.25, -0.5));
    if let Ok(real) = realize(&model) {
        let _ = real.transfer(Complex64::new(0.0, 1.0));
    }
});
