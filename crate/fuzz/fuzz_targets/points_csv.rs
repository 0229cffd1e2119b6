//! Evaluation-point CSV parsing: must not panic; accepted input round-trips.

#![no_main]

use baryfit::io::{parse_points_csv, points_to_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(points) = parse_points_csv(text) else {
        return;
    };
    assert_eq!(parse_points_csv(&points_to_csv(&points)).expect("re-parse of written points"), points);
});
