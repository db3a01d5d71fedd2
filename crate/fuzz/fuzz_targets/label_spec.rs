#![no_main]

use libfuzzer_sys::fuzz_target;
use rtkm::data::LabelSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = text.parse::<LabelSpec>() {
        assert_eq!(spec.to_string().parse::<LabelSpec>().ok(), Some(spec));
    }
});
