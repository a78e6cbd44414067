#![no_main]

use imhd::io::parse_vtk;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(grid) = parse_vtk(text) {
        let again = parse_vtk(&grid.to_text()).expect("written grid parses");
        assert_eq!(again.points.len(), grid.points.len());
        assert_eq!(again.cells, grid.cells);
    }
});
