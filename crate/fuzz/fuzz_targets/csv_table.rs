#![no_main]

use libfuzzer_sys::fuzz_target;
use rtkm::data::{to_dataset, InvalidRowPolicy, LabelSpec, LabeledTable, LoadOptions, MixedLabelPolicy};

fuzz_target!(|data: &[u8]| {
    // The first byte picks the loader options; the rest is the file.
    let Some((&mode, text)) = data.split_first() else {
        return;
    };
    let labels = match mode % 5 {
        0 => LabelSpec::None,
        1 => LabelSpec::LastClassColumn,
        2 => LabelSpec::ClassColumn(0),
        3 => LabelSpec::Indicators { first: 1, last: 2 },
        _ => LabelSpec::TrailingIndicators(2),
    };
    let options = LoadOptions {
        has_header: mode & 0x10 != 0,
        labels,
        features: None,
        invalid_rows: if mode & 0x20 != 0 {
            InvalidRowPolicy::Skip
        } else {
            InvalidRowPolicy::Reject
        },
    };
    if let Ok(table) = LabeledTable::from_reader(text, &options) {
        let _ = table.meta();
        let _ = to_dataset(&table, &[0], MixedLabelPolicy::Inlier);
        let mut out = Vec::new();
        if table.write_csv(&mut out).is_ok() {
            let again = LabeledTable::from_reader(
                out.as_slice(),
                &LoadOptions {
                    labels: table.written_label_spec(),
                    ..LoadOptions::default()
                },
            );
            assert!(again.is_ok(), "written table does not load back");
        }
    }
});
