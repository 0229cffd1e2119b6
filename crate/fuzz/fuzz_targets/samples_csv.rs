//! Sample CSV parsing: must not panic, and anything accepted must survive a
//! write/read round trip bit for bit.

#![no_main]

use baryfit::io::{parse_samples_csv, samples_to_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(samples) = parse_samples_csv(text) else {
        return;
    };
    let back = parse_samples_csv(&samples_to_csv(&samples)).expect("re-parse of written samples");
    let bits = |v: &[baryfit::Complex64]| v.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>();
    assert_eq!(bits(back.points()), bits(samples.points()));
    assert_eq!(bits(back.values()), bits(samples.values()));
});
