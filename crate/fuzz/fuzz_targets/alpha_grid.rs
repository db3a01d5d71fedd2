#![no_main]

use libfuzzer_sys::fuzz_target;
use rtkm_cli::parse_alpha_grid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(grid) = parse_alpha_grid(text) {
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert!(grid.iter().all(|a| (0.0..1.0).contains(a)));
    }
});
