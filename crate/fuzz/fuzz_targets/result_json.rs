#![no_main]

use libfuzzer_sys::fuzz_target;
use rtkm::metrics::Clustering;
use rtkm_cli::manifest::FitArtifact;

fuzz_target!(|data: &[u8]| {
    if let Ok(artifact) = serde_json::from_slice::<FitArtifact>(data) {
        let _ = Clustering::from_fit(&artifact.result);
        let text = serde_json::to_string(&artifact).expect("artifact serializes");
        let _ = serde_json::from_str::<FitArtifact>(&text);
    }
});
