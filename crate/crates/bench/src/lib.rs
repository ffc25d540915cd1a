//! Inputs shared by the benchmarks in `benches/`.

use iotacurve::iota::{build_standard, product};
use iotacurve::{AlmostIotaComplex, StandardParams};

pub fn standard(text: &str) -> AlmostIotaComplex {
    build_standard(&text.parse::<StandardParams>().expect("valid params"))
}

/// Standard complexes of increasing length.
pub fn chain(pairs: usize) -> AlmostIotaComplex {
    let body: Vec<String> = (0..pairs)
        .map(|k| {
            let sign = if k % 2 == 0 { '+' } else { '-' };
            let b = (k % 3 + 1) as i64 * if k % 4 < 2 { 1 } else { -1 };
            format!("{},{}", sign, b)
        })
        .collect();
    standard(&format!("C({})", body.join(",")))
}

pub fn product_of(a: &str, b: &str) -> AlmostIotaComplex {
    product(&standard(a), &standard(b))
}
