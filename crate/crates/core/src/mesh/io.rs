//! Mesh import/export.
//!
//! Native format (line oriented, `#` comments):
//!
//! ```text
//! POLYMESH 1
//! DIM 2|3
//! VERTICES <n>        # then n lines: x y [z]
//! FACES <n>           # then n lines: <nv> v0 v1 ...
//! CELLS <n>           # then n lines: <nf> f0 f1 ...
//! BOUNDARY <n>        # then n lines: <face> D|N <group>
//! ```
//!
//! Face vertex lists are oriented loops (segments in 2D); cells reference
//! faces by id, so general polytopes and non-matching interfaces round-trip
//! exactly. The Gmsh reader accepts the ASCII v2 subset with elements of type
//! 2 (triangle) and 4 (tetrahedron); in 3D, triangles carry boundary groups
//! through their first tag.

use super::{FaceTag, Mesh, MeshError, Vec3};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Native,
    GmshV2,
}

impl MeshFormat {
    /// Picks a format from a file extension (`.msh` is Gmsh, anything else native).
    pub fn from_path(path: &Path) -> MeshFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("msh") => MeshFormat::GmshV2,
            _ => MeshFormat::Native,
        }
    }
}

pub fn import_mesh(path: &Path, format: MeshFormat) -> Result<Mesh, MeshError> {
    let text = std::fs::read_to_string(path).map_err(|source| MeshError::Io {
        path: path.display().to_string(),
        source,
    })?;
    match format {
        MeshFormat::Native => parse_native(&text),
        MeshFormat::GmshV2 => parse_gmsh(&text),
    }
}

pub fn export_mesh(mesh: &Mesh, path: &Path, format: MeshFormat) -> Result<(), MeshError> {
    let text = match format {
        MeshFormat::Native => write_native(mesh),
        MeshFormat::GmshV2 => write_gmsh(mesh)?,
    };
    std::fs::write(path, text).map_err(|source| MeshError::Io {
        path: path.display().to_string(),
        source,
    })
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            iter: text.lines().enumerate(),
        }
    }

    /// Next non-empty, non-comment line with its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.iter.by_ref() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                return Some((i + 1, line));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), MeshError> {
        self.next_content().ok_or_else(|| MeshError::Parse {
            line: 0,
            message: format!("unexpected end of file, expected {what}"),
        })
    }
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T, MeshError> {
    Err(MeshError::Parse {
        line,
        message: message.into(),
    })
}

fn parse_count(line: usize, header: &str, keyword: &str) -> Result<usize, MeshError> {
    let mut it = header.split_whitespace();
    match it.next() {
        Some(k) if k.eq_ignore_ascii_case(keyword) => {}
        other => return parse_err(line, format!("expected {keyword}, found {other:?}")),
    }
    match it.next().map(str::parse::<usize>) {
        Some(Ok(n)) => Ok(n),
        _ => parse_err(line, format!("expected a count after {keyword}")),
    }
}

fn parse_native(text: &str) -> Result<Mesh, MeshError> {
    let mut lines = Lines::new(text);

    let (ln, magic) = lines.expect("POLYMESH header")?;
    if !magic.to_ascii_uppercase().starts_with("POLYMESH") {
        return parse_err(ln, "missing POLYMESH header");
    }
    let (ln, dim_line) = lines.expect("DIM")?;
    let dim = parse_count(ln, dim_line, "DIM")?;
    if dim != 2 && dim != 3 {
        return parse_err(ln, format!("unsupported dimension {dim}"));
    }

    let (ln, header) = lines.expect("VERTICES")?;
    let n_vertices = parse_count(ln, header, "VERTICES")?;
    let mut vertices = Vec::with_capacity(n_vertices);
    for _ in 0..n_vertices {
        let (ln, line) = lines.expect("vertex coordinates")?;
        let coords: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse).collect();
        match coords {
            Ok(c) if c.len() >= dim => vertices.push(Vec3::new(
                c[0],
                c[1],
                if dim == 3 { c[2] } else { 0.0 },
            )),
            _ => return parse_err(ln, "bad vertex line"),
        }
    }

    let (ln, header) = lines.expect("FACES")?;
    let n_faces = parse_count(ln, header, "FACES")?;
    let mut face_loops = Vec::with_capacity(n_faces);
    for _ in 0..n_faces {
        let (ln, line) = lines.expect("face vertex list")?;
        let ids = parse_id_list(ln, line, vertices.len(), "vertex")?;
        let expected_min = if dim == 2 { 2 } else { 3 };
        if ids.len() < expected_min || (dim == 2 && ids.len() != 2) {
            return parse_err(ln, format!("face needs {expected_min}+ vertices"));
        }
        face_loops.push(ids);
    }

    let (ln, header) = lines.expect("CELLS")?;
    let n_cells = parse_count(ln, header, "CELLS")?;
    let mut cell_faces = Vec::with_capacity(n_cells);
    for _ in 0..n_cells {
        let (ln, line) = lines.expect("cell face list")?;
        let ids = parse_id_list(ln, line, face_loops.len(), "face")?;
        if ids.len() < dim + 1 {
            return parse_err(ln, "cell needs at least dim+1 faces");
        }
        cell_faces.push(ids);
    }

    let (ln, header) = lines.expect("BOUNDARY")?;
    let n_boundary = parse_count(ln, header, "BOUNDARY")?;
    let mut tags = vec![FaceTag::Interior; face_loops.len()];
    for _ in 0..n_boundary {
        let (ln, line) = lines.expect("boundary tag")?;
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return parse_err(ln, "expected: <face> D|N <group>");
        }
        let fid: usize = match parts[0].parse() {
            Ok(v) if v < face_loops.len() => v,
            _ => return parse_err(ln, "bad face id"),
        };
        let group: u32 = match parts[2].parse() {
            Ok(v) => v,
            _ => return parse_err(ln, "bad group id"),
        };
        tags[fid] = match parts[1] {
            "D" | "d" => FaceTag::Dirichlet(group),
            "N" | "n" => FaceTag::Neumann(group),
            other => return parse_err(ln, format!("bad boundary kind {other:?}")),
        };
    }

    Mesh::assemble(dim, vertices, face_loops, cell_faces, Some(tags))
}

fn parse_id_list(
    line_no: usize,
    line: &str,
    bound: usize,
    what: &str,
) -> Result<Vec<usize>, MeshError> {
    let mut it = line.split_whitespace();
    let count: usize = match it.next().map(str::parse) {
        Some(Ok(n)) => n,
        _ => return parse_err(line_no, "expected a leading count"),
    };
    let ids: Result<Vec<usize>, _> = it.map(str::parse).collect();
    match ids {
        Ok(v) if v.len() == count => {
            if let Some(&bad) = v.iter().find(|&&id| id >= bound) {
                parse_err(line_no, format!("{what} id {bad} out of range"))
            } else {
                Ok(v)
            }
        }
        _ => parse_err(line_no, format!("expected {count} {what} ids")),
    }
}

fn write_native(mesh: &Mesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "POLYMESH 1");
    let _ = writeln!(out, "DIM {}", mesh.dim());
    let _ = writeln!(out, "VERTICES {}", mesh.n_vertices());
    for v in mesh.vertices() {
        if mesh.dim() == 2 {
            let _ = writeln!(out, "{:.17e} {:.17e}", v.x, v.y);
        } else {
            let _ = writeln!(out, "{:.17e} {:.17e} {:.17e}", v.x, v.y, v.z);
        }
    }
    let _ = writeln!(out, "FACES {}", mesh.n_faces());
    for f in mesh.faces() {
        let ids: Vec<String> = f.vertices.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{} {}", f.vertices.len(), ids.join(" "));
    }
    let _ = writeln!(out, "CELLS {}", mesh.n_cells());
    for c in mesh.cells() {
        let ids: Vec<String> = c.faces.iter().map(|f| f.to_string()).collect();
        let _ = writeln!(out, "{} {}", c.faces.len(), ids.join(" "));
    }
    let boundary: Vec<(usize, FaceTag)> = (0..mesh.n_faces())
        .filter_map(|f| {
            let t = mesh.tag(f);
            t.is_boundary().then_some((f, t))
        })
        .collect();
    let _ = writeln!(out, "BOUNDARY {}", boundary.len());
    for (f, t) in boundary {
        let (kind, group) = match t {
            FaceTag::Dirichlet(g) => ("D", g),
            FaceTag::Neumann(g) => ("N", g),
            FaceTag::Interior => unreachable!(),
        };
        let _ = writeln!(out, "{f} {kind} {group}");
    }
    out
}

fn parse_gmsh(text: &str) -> Result<Mesh, MeshError> {
    let mut lines = Lines::new(text);
    let mut node_ids: Vec<u64> = Vec::new();
    let mut nodes: Vec<Vec3> = Vec::new();
    let mut triangles: Vec<(u32, [u64; 3])> = Vec::new();
    let mut tets: Vec<[u64; 4]> = Vec::new();

    while let Some((ln, line)) = lines.next_content() {
        match line {
            "$MeshFormat" => {
                let (ln, version) = lines.expect("mesh format version")?;
                if !version.starts_with("2.") {
                    return parse_err(ln, format!("unsupported Gmsh version {version}"));
                }
                let (_, end) = lines.expect("$EndMeshFormat")?;
                if end != "$EndMeshFormat" {
                    return parse_err(ln, "missing $EndMeshFormat");
                }
            }
            "$Nodes" => {
                let (ln, count) = lines.expect("node count")?;
                let n: usize = count
                    .parse()
                    .map_err(|_| MeshError::Parse {
                        line: ln,
                        message: "bad node count".into(),
                    })?;
                for _ in 0..n {
                    let (ln, line) = lines.expect("node")?;
                    let parts: Vec<&str> = line.split_whitespace().collect();
                    if parts.len() < 4 {
                        return parse_err(ln, "node needs: id x y z");
                    }
                    let id: u64 = parts[0]
                        .parse()
                        .map_err(|_| MeshError::Parse {
                            line: ln,
                            message: "bad node id".into(),
                        })?;
                    let xyz: Result<Vec<f64>, _> =
                        parts[1..4].iter().map(|s| s.parse()).collect();
                    match xyz {
                        Ok(c) => {
                            node_ids.push(id);
                            nodes.push(Vec3::new(c[0], c[1], c[2]));
                        }
                        Err(_) => return parse_err(ln, "bad node coordinates"),
                    }
                }
                let (ln, end) = lines.expect("$EndNodes")?;
                if end != "$EndNodes" {
                    return parse_err(ln, "missing $EndNodes");
                }
            }
            "$Elements" => {
                let (ln, count) = lines.expect("element count")?;
                let n: usize = count
                    .parse()
                    .map_err(|_| MeshError::Parse {
                        line: ln,
                        message: "bad element count".into(),
                    })?;
                for _ in 0..n {
                    let (ln, line) = lines.expect("element")?;
                    let parts: Result<Vec<u64>, _> =
                        line.split_whitespace().map(str::parse).collect();
                    let parts = match parts {
                        Ok(p) if p.len() >= 3 => p,
                        _ => return parse_err(ln, "bad element line"),
                    };
                    let etype = parts[1];
                    let ntags = parts[2] as usize;
                    let nodes_start = 3 + ntags;
                    let first_tag = if ntags > 0 { parts[3] as u32 } else { 0 };
                    match etype {
                        2 => {
                            if parts.len() != nodes_start + 3 {
                                return parse_err(ln, "triangle needs 3 nodes");
                            }
                            triangles.push((
                                first_tag,
                                [
                                    parts[nodes_start],
                                    parts[nodes_start + 1],
                                    parts[nodes_start + 2],
                                ],
                            ));
                        }
                        4 => {
                            if parts.len() != nodes_start + 4 {
                                return parse_err(ln, "tetrahedron needs 4 nodes");
                            }
                            tets.push([
                                parts[nodes_start],
                                parts[nodes_start + 1],
                                parts[nodes_start + 2],
                                parts[nodes_start + 3],
                            ]);
                        }
                        // the subset reader skips points/lines and rejects the rest
                        15 | 1 => {}
                        other => {
                            return parse_err(ln, format!("unsupported element type {other}"))
                        }
                    }
                }
                let (ln, end) = lines.expect("$EndElements")?;
                if end != "$EndElements" {
                    return parse_err(ln, "missing $EndElements");
                }
            }
            section if section.starts_with('$') => {
                // skip unknown sections
                let end = format!("$End{}", &section[1..]);
                loop {
                    let (_, l) = lines.expect(&end)?;
                    if l == end {
                        break;
                    }
                }
            }
            _ => return parse_err(ln, format!("unexpected line {line:?}")),
        }
    }

    if nodes.is_empty() {
        return parse_err(0, "no nodes found");
    }
    let id_map: std::collections::HashMap<u64, usize> = node_ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i))
        .collect();
    let remap = |id: u64, what: &str| -> Result<usize, MeshError> {
        id_map.get(&id).copied().ok_or_else(|| MeshError::Parse {
            line: 0,
            message: format!("{what} references unknown node {id}"),
        })
    };

    if !tets.is_empty() {
        let mut cells = Vec::with_capacity(tets.len());
        for t in &tets {
            let vs = [
                remap(t[0], "tet")?,
                remap(t[1], "tet")?,
                remap(t[2], "tet")?,
                remap(t[3], "tet")?,
            ];
            cells.push(super::generate::tet_faces(&nodes, &vs));
        }
        let mut mesh = super::from_cell_loops(3, nodes, Some(cells), None)?;
        // boundary groups from tagged surface triangles
        if !triangles.is_empty() {
            let mut key_to_group = std::collections::HashMap::new();
            for (tag, tri) in &triangles {
                let mut key = [
                    remap(tri[0], "triangle")?,
                    remap(tri[1], "triangle")?,
                    remap(tri[2], "triangle")?,
                ];
                key.sort_unstable();
                key_to_group.insert(key, *tag);
            }
            mesh.retag_boundary(|_, face| {
                let mut key = [face.vertices[0], face.vertices[1], face.vertices[2]];
                key.sort_unstable();
                match key_to_group.get(&key) {
                    Some(&g) => FaceTag::Dirichlet(g),
                    None => FaceTag::Dirichlet(0),
                }
            });
        }
        Ok(mesh)
    } else if !triangles.is_empty() {
        let mut cells = Vec::with_capacity(triangles.len());
        for (_, tri) in &triangles {
            let mut vs = vec![
                remap(tri[0], "triangle")?,
                remap(tri[1], "triangle")?,
                remap(tri[2], "triangle")?,
            ];
            // enforce counter-clockwise orientation
            let (a, b, c) = (nodes[vs[0]], nodes[vs[1]], nodes[vs[2]]);
            if super::cross2(b - a, c - a) < 0.0 {
                vs.swap(1, 2);
            }
            cells.push(vs);
        }
        super::from_cell_loops(2, nodes, None, Some(cells))
    } else {
        parse_err(0, "no triangles or tetrahedra found")
    }
}

fn write_gmsh(mesh: &Mesh) -> Result<String, MeshError> {
    let simplex = mesh
        .cells()
        .iter()
        .all(|c| c.faces.len() == mesh.dim() + 1);
    if !simplex {
        return Err(MeshError::Unsupported(
            "Gmsh export supports simplicial meshes only".into(),
        ));
    }
    let mut out = String::new();
    let _ = writeln!(out, "$MeshFormat\n2.2 0 8\n$EndMeshFormat");
    let _ = writeln!(out, "$Nodes\n{}", mesh.n_vertices());
    for (i, v) in mesh.vertices().iter().enumerate() {
        let _ = writeln!(out, "{} {:.17e} {:.17e} {:.17e}", i + 1, v.x, v.y, v.z);
    }
    let _ = writeln!(out, "$EndNodes");
    let boundary: Vec<usize> = mesh.boundary_faces().collect();
    let n_elems = mesh.n_cells() + if mesh.dim() == 3 { boundary.len() } else { 0 };
    let _ = writeln!(out, "$Elements\n{n_elems}");
    let mut eid = 1;
    if mesh.dim() == 3 {
        for f in &boundary {
            let fv = &mesh.face(*f).vertices;
            let g = mesh.tag(*f).group().unwrap_or(0);
            let _ = writeln!(
                out,
                "{eid} 2 2 {g} {g} {} {} {}",
                fv[0] + 1,
                fv[1] + 1,
                fv[2] + 1
            );
            eid += 1;
        }
        for c in 0..mesh.n_cells() {
            let vs = mesh.cell_vertices(c);
            // reorder for positive orientation
            let (a, b, cc, d) = (
                mesh.vertex(vs[0]),
                mesh.vertex(vs[1]),
                mesh.vertex(vs[2]),
                mesh.vertex(vs[3]),
            );
            let vol = (b - a).cross(&(cc - a)).dot(&(d - a));
            let order = if vol > 0.0 {
                [vs[0], vs[1], vs[2], vs[3]]
            } else {
                [vs[0], vs[2], vs[1], vs[3]]
            };
            let _ = writeln!(
                out,
                "{eid} 4 2 1 1 {} {} {} {}",
                order[0] + 1,
                order[1] + 1,
                order[2] + 1,
                order[3] + 1
            );
            eid += 1;
        }
    } else {
        for c in 0..mesh.n_cells() {
            let vs = mesh.cell_vertices(c);
            let _ = writeln!(
                out,
                "{eid} 2 2 1 1 {} {} {}",
                vs[0] + 1,
                vs[1] + 1,
                vs[2] + 1
            );
            eid += 1;
        }
    }
    let _ = writeln!(out, "$EndElements");
    Ok(out)
}
