#![no_main]

use libfuzzer_sys::fuzz_target;
use maxwell_harness::loading::{Keyframes, LoadingProgram};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(frames) = Keyframes::from_json_str(text) else { return };
    let isochoric = frames.isochoric;
    let program = LoadingProgram::Keyframes(frames);
    for t in program.grid(16) {
        if let Ok(f) = program.deformation(t) {
            assert!(f.is_finite());
            if isochoric {
                assert!((f.det() - 1.0).abs() < 1e-9, "det = {}", f.det());
            }
        }
    }
});
