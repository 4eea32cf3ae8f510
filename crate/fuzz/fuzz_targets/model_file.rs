#![no_main]

use libfuzzer_sys::fuzz_target;
use maxwell_core::composite::CompositeModel;
use maxwell_core::tensor3::SymTensor3;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(model) = CompositeModel::from_json_str(text) else { return };
    let again = CompositeModel::from_json_str(&model.to_json_string()).expect("serialized model parses");
    assert_eq!(model, again);
    let stress = model.stress(&SymTensor3::IDENTITY).expect("natural state is admissible");
    assert!(stress.is_finite());
});
