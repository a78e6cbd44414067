//! Legacy ASCII VTK unstructured grids: writer for solutions and a reader
//! for the subset the writer produces.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fem::{FeSystem, FieldSolution};

pub const VTK_TRIANGLE: u8 = 5;

/// Point or cell attribute: `components` is 1 for scalars, 3 for vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct VtkArray {
    pub name: String,
    pub components: usize,
    pub values: Vec<f64>,
}

impl VtkArray {
    pub fn scalars(name: &str, values: Vec<f64>) -> Self {
        VtkArray { name: name.into(), components: 1, values }
    }

    /// Planar vectors stored with a zero third component.
    pub fn vectors2(name: &str, xy: impl IntoIterator<Item = [f64; 2]>) -> Self {
        let values = xy.into_iter().flat_map(|[x, y]| [x, y, 0.0]).collect();
        VtkArray { name: name.into(), components: 3, values }
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.components
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VtkGrid {
    pub title: String,
    pub points: Vec<[f64; 3]>,
    pub cells: Vec<Vec<usize>>,
    pub cell_types: Vec<u8>,
    pub point_data: Vec<VtkArray>,
    pub cell_data: Vec<VtkArray>,
}

impl VtkGrid {
    pub fn point_array(&self, name: &str) -> Option<&VtkArray> {
        self.point_data.iter().find(|a| a.name == name)
    }

    pub fn cell_array(&self, name: &str) -> Option<&VtkArray> {
        self.cell_data.iter().find(|a| a.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# vtk DataFile Version 3.0");
        let _ = writeln!(s, "{}", self.title.lines().next().unwrap_or(""));
        let _ = writeln!(s, "ASCII");
        let _ = writeln!(s, "DATASET UNSTRUCTURED_GRID");
        let _ = writeln!(s, "POINTS {} double", self.points.len());
        for p in &self.points {
            let _ = writeln!(s, "{:e} {:e} {:e}", p[0], p[1], p[2]);
        }
        let size: usize = self.cells.iter().map(|c| c.len() + 1).sum();
        let _ = writeln!(s, "CELLS {} {}", self.cells.len(), size);
        for c in &self.cells {
            let _ = write!(s, "{}", c.len());
            for v in c {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "CELL_TYPES {}", self.cell_types.len());
        for t in &self.cell_types {
            let _ = writeln!(s, "{t}");
        }
        for (section, n, arrays) in
            [("POINT_DATA", self.points.len(), &self.point_data), ("CELL_DATA", self.cells.len(), &self.cell_data)]
        {
            if arrays.is_empty() {
                continue;
            }
            let _ = writeln!(s, "{section} {n}");
            for a in arrays {
                if a.components == 1 {
                    let _ = writeln!(s, "SCALARS {} double 1", a.name);
                    let _ = writeln!(s, "LOOKUP_TABLE default");
                } else {
                    let _ = writeln!(s, "VECTORS {} double", a.name);
                }
                for row in a.values.chunks(a.components) {
                    let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
                    let _ = writeln!(s, "{}", line.join(" "));
                }
            }
        }
        s
    }
}

/// Grid with velocity (vertex values, bubbles dropped), pressure and
/// temperature on points; potential, cell-mean current and its divergence on
/// cells.
pub fn solution_grid(sol: &FieldSolution, sys: &FeSystem) -> VtkGrid {
    let mesh = sys.mesh();
    let (nv, nt) = (mesh.num_vertices(), mesh.num_triangles());
    let ns = sys.layout.n_scalar_u;
    let mut j_mean = Vec::with_capacity(nt);
    let mut div_j = Vec::with_capacity(nt);
    for t in 0..nt {
        let el = sys.element(t);
        j_mean.push(sol.current_at(&el, [1.0 / 3.0; 3]).0);
        div_j.push(sol.current_div(&el));
    }
    VtkGrid {
        title: "imhd solution".into(),
        points: mesh.vertices.iter().map(|p| [p[0], p[1], 0.0]).collect(),
        cells: mesh.triangles.iter().map(|t| t.to_vec()).collect(),
        cell_types: vec![VTK_TRIANGLE; nt],
        point_data: vec![
            VtkArray::vectors2("velocity", (0..nv).map(|v| [sol.u[v], sol.u[ns + v]])),
            VtkArray::scalars("pressure", sol.p.clone()),
            VtkArray::scalars("temperature", sol.theta.clone()),
        ],
        cell_data: vec![
            VtkArray::scalars("potential", sol.phi.clone()),
            VtkArray::vectors2("current", j_mean),
            VtkArray::scalars("divJ", div_j),
        ],
    }
}

pub fn write_vtk(sol: &FieldSolution, sys: &FeSystem, path: &Path) -> Result<()> {
    std::fs::write(path, solution_grid(sol, sys).to_text())?;
    Ok(())
}

/// Whitespace-separated tokens tagged with their line numbers.
struct Tokens<'a> {
    toks: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let line = self.toks.get(self.pos).map_or(self.last_line, |t| t.0);
        Err(Error::Parse { line, msg: msg.into() })
    }

    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn next(&mut self, what: &str) -> Result<&'a str> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.1)
            }
            None => self.err(format!("unexpected end of file, expected {what}")),
        }
    }

    fn expect(&mut self, word: &str) -> Result<()> {
        let t = self.next(word)?;
        if t.eq_ignore_ascii_case(word) {
            Ok(())
        } else {
            self.pos -= 1;
            self.err(format!("expected `{word}`, found `{t}`"))
        }
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let t = self.next(what)?;
        t.parse().or_else(|_| {
            self.pos -= 1;
            self.err(format!("invalid {what} `{t}`"))
        })
    }

    /// Count that cannot exceed the tokens left, `per` tokens each.
    fn bounded_count(&mut self, what: &str, per: usize) -> Result<usize> {
        let n = self.count(what)?;
        let left = self.toks.len() - self.pos;
        if n.checked_mul(per).is_none_or(|need| need > left) {
            return self.err(format!("{what} {n} exceeds the remaining data"));
        }
        Ok(n)
    }

    fn float(&mut self) -> Result<f64> {
        let t = self.next("a number")?;
        match t.parse::<f64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos -= 1;
                self.err(format!("invalid number `{t}`"))
            }
        }
    }
}

fn data_type(tok: &mut Tokens) -> Result<()> {
    let t = tok.next("a data type")?;
    match t.to_ascii_lowercase().as_str() {
        "float" | "double" | "int" | "long" | "short" | "char" | "unsigned_char" | "unsigned_int" => Ok(()),
        _ => {
            tok.pos -= 1;
            tok.err(format!("unsupported data type `{t}`"))
        }
    }
}

fn attributes(tok: &mut Tokens, n: usize, out: &mut Vec<VtkArray>) -> Result<()> {
    while let Some(kw) = tok.peek() {
        let components = match kw.to_ascii_uppercase().as_str() {
            "SCALARS" => {
                tok.pos += 1;
                let name = tok.next("an array name")?.to_string();
                data_type(tok)?;
                let mut c = 1;
                if tok.peek().is_some_and(|t| !t.eq_ignore_ascii_case("LOOKUP_TABLE")) {
                    c = tok.count("component count")?;
                    if !(1..=4).contains(&c) {
                        tok.pos -= 1;
                        return tok.err(format!("component count {c} outside 1..=4"));
                    }
                }
                tok.expect("LOOKUP_TABLE")?;
                tok.next("a lookup table name")?;
                (name, c)
            }
            "VECTORS" | "NORMALS" => {
                tok.pos += 1;
                let name = tok.next("an array name")?.to_string();
                data_type(tok)?;
                (name, 3)
            }
            _ => return Ok(()),
        };
        let (name, c) = components;
        if n.checked_mul(c).is_none_or(|need| need > tok.toks.len() - tok.pos) {
            return tok.err(format!("array `{name}` needs {n} x {c} values"));
        }
        let mut values = Vec::with_capacity(n * c);
        for _ in 0..n * c {
            values.push(tok.float()?);
        }
        out.push(VtkArray { name, components: c, values });
    }
    Ok(())
}

/// Reads a legacy ASCII unstructured grid.
pub fn parse_vtk(text: &str) -> Result<VtkGrid> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if !header.trim_start().starts_with("# vtk DataFile Version") {
        return Err(Error::Parse { line: 1, msg: "missing `# vtk DataFile Version` header".into() });
    }
    let title = lines.next().ok_or(Error::Parse { line: 2, msg: "missing title line".into() })?;
    let fmt = lines.next().unwrap_or("").trim();
    if !fmt.eq_ignore_ascii_case("ASCII") {
        return Err(Error::Parse { line: 3, msg: format!("expected ASCII, found `{fmt}`") });
    }
    let mut toks = Vec::new();
    let mut last_line = 3;
    for (i, l) in lines.enumerate() {
        last_line = i + 4;
        toks.extend(l.split_whitespace().map(|t| (i + 4, t)));
    }
    let mut tok = Tokens { toks, pos: 0, last_line };

    tok.expect("DATASET")?;
    tok.expect("UNSTRUCTURED_GRID")?;
    tok.expect("POINTS")?;
    let np = tok.bounded_count("point count", 3)?;
    data_type(&mut tok)?;
    let mut points = Vec::with_capacity(np);
    for _ in 0..np {
        points.push([tok.float()?, tok.float()?, tok.float()?]);
    }

    tok.expect("CELLS")?;
    let nc = tok.bounded_count("cell count", 1)?;
    let size = tok.bounded_count("cell list size", 1)?;
    let start = tok.pos;
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let k = tok.bounded_count("cell size", 1)?;
        let mut c = Vec::with_capacity(k);
        for _ in 0..k {
            let v = tok.count("point index")?;
            if v >= np {
                tok.pos -= 1;
                return tok.err(format!("point index {v} out of range (0..{np})"));
            }
            c.push(v);
        }
        cells.push(c);
    }
    if tok.pos - start != size {
        return tok.err(format!("cell list has {} entries, header says {size}", tok.pos - start));
    }

    tok.expect("CELL_TYPES")?;
    let nt = tok.count("cell type count")?;
    if nt != nc {
        tok.pos -= 1;
        return tok.err(format!("{nt} cell types for {nc} cells"));
    }
    let mut cell_types = Vec::with_capacity(nc);
    for _ in 0..nc {
        let t = tok.next("a cell type")?;
        match t.parse::<u8>() {
            Ok(v) => cell_types.push(v),
            Err(_) => {
                tok.pos -= 1;
                return tok.err(format!("invalid cell type `{t}`"));
            }
        }
    }

    let mut grid = VtkGrid { title: title.to_string(), points, cells, cell_types, ..Default::default() };
    while let Some(kw) = tok.peek() {
        let (n, out) = match kw.to_ascii_uppercase().as_str() {
            "POINT_DATA" => (grid.points.len(), &mut grid.point_data),
            "CELL_DATA" => (grid.cells.len(), &mut grid.cell_data),
            _ => return tok.err(format!("unexpected `{kw}`")),
        };
        tok.pos += 1;
        let declared = tok.count("attribute count")?;
        if declared != n {
            tok.pos -= 1;
            return tok.err(format!("{kw} {declared} does not match {n}"));
        }
        attributes(&mut tok, n, out)?;
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> VtkGrid {
        VtkGrid {
            title: "t".into(),
            points: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            cells: vec![vec![0, 1, 2]],
            cell_types: vec![VTK_TRIANGLE],
            point_data: vec![VtkArray::scalars("a", vec![0.1, -2.5e-7, 3.0])],
            cell_data: vec![VtkArray::vectors2("v", [[1.0, 2.0]])],
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let g = tiny();
        assert_eq!(parse_vtk(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn rejects_bad_input_with_line() {
        let text = tiny().to_text();
        let bad_index = text.replace("3 0 1 2", "3 0 1 7");
        assert!(matches!(parse_vtk(&bad_index), Err(Error::Parse { line: 10, .. })));
        let huge = text.replace("POINTS 3", "POINTS 99999999999");
        assert!(parse_vtk(&huge).is_err());
        assert!(parse_vtk("").is_err());
        assert!(parse_vtk(&text[..text.len() - 10]).is_err());
    }
}
