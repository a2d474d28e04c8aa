//! Golden fixture files: each is the canonical emission of a library fixture.
//! Run with `NCL_BLESS=1` to regenerate.

use std::fs;
use std::path::PathBuf;

use ncl::fixtures;
use ncl::{emit_realization, parse_realization, Realization};

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn golden() -> Vec<(&'static str, Realization)> {
    vec![
        ("even-weight.json", fixtures::even_weight_tail_biting()),
        ("even-weight-dual.json", fixtures::even_weight_tail_biting().dualize()),
        ("reed-muller.json", fixtures::reed_muller_parity_realization()),
        ("tail-biting-5-3.json", fixtures::unobservable_5_3_tail_biting()),
        ("tail-biting-5-3-dual.json", fixtures::unobservable_5_3_tail_biting().dualize()),
        ("tail-biting-5-3-product.json", fixtures::degenerate_5_2_product()),
        ("nonminimal-trellis.json", fixtures::nonminimal_322_conventional()),
    ]
}

#[test]
fn fixture_files_match_library_fixtures() {
    let bless = std::env::var_os("NCL_BLESS").is_some();
    for (name, r) in golden() {
        let text = emit_realization(&r);
        if bless {
            fs::write(path(name), &text).unwrap();
        }
        let on_disk = fs::read_to_string(path(name)).unwrap();
        assert_eq!(on_disk, text, "{name} is stale; rerun with NCL_BLESS=1");
        let parsed = parse_realization(&on_disk).unwrap();
        assert_eq!(parsed, r, "{name}");
        assert_eq!(emit_realization(&parsed), on_disk, "{name} round trip");
    }
}
