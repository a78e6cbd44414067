use imhd::assembly::Method;
use imhd::bench::manufactured_smooth_2d;
use imhd::fem::{FeSystem, FieldSolution};
use imhd::io::{parse_vtk, solution_grid, write_vtk, VTK_TRIANGLE};
use imhd::iterate::run;

#[test]
fn zero_solution_file() {
    let exact = manufactured_smooth_2d();
    let cfg = exact.config(Method::Oseen);
    let sys = FeSystem::new(exact.mesh(3).unwrap(), cfg.boundary_mode, &cfg.temperature_walls).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.vtk");
    write_vtk(&FieldSolution::zeros(&sys), &sys, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# vtk DataFile Version 3.0\n"));
    assert!(text.contains("DATASET UNSTRUCTURED_GRID"));
    let g = parse_vtk(&text).unwrap();
    assert_eq!(g.points.len(), 16);
    assert_eq!(g.cells.len(), 18);
    assert!(g.cell_types.iter().all(|&t| t == VTK_TRIANGLE));
    let names: Vec<&str> = g.point_data.iter().chain(&g.cell_data).map(|a| a.name.as_str()).collect();
    assert_eq!(names, ["velocity", "pressure", "temperature", "potential", "current", "divJ"]);
    assert!(g.point_data.iter().chain(&g.cell_data).all(|a| a.max_abs() == 0.0));
}

#[test]
fn converged_fields_round_trip() {
    let exact = manufactured_smooth_2d();
    let cfg = exact.config(Method::Newton);
    let sys = FeSystem::new(exact.mesh(8).unwrap(), cfg.boundary_mode, &cfg.temperature_walls).unwrap();
    let (s, _) = run(&sys, &cfg).unwrap();
    let g = solution_grid(&s, &sys);
    let back = parse_vtk(&g.to_text()).unwrap();
    assert_eq!(back, g);
    assert_eq!(back.points.len(), sys.mesh().num_vertices());
    assert_eq!(back.cells.len(), sys.mesh().num_triangles());
    assert!(back.cell_array("divJ").unwrap().max_abs() <= 1e-10);
    let vel = back.point_array("velocity").unwrap();
    let ns = sys.layout.n_scalar_u;
    assert_eq!(vel.values[3 * 5 + 1], s.u[ns + 5]);
    assert_eq!(back.point_array("temperature").unwrap().values, s.theta);
}
