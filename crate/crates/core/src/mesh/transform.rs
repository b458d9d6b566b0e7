//! Mesh transforms producing general polytopal meshes: pairwise cell
//! agglomeration (creating non-matching interfaces) and random interior-node
//! perturbation. Both are deterministic functions of (mesh, parameters, seed).

use super::{FaceTag, Mesh, MeshError, Vec3};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Merges pairs of neighbouring cells by removing their common face, until
/// about `merge_fraction` of the cells have been merged. A pair is skipped if
/// the merged cell would not be star-shaped with respect to its barycenter.
pub fn agglomerate(mesh: &Mesh, merge_fraction: f64, seed: u64) -> Result<Mesh, MeshError> {
    if !(0.0..=0.5).contains(&merge_fraction) {
        return Err(MeshError::BadMergeFraction(merge_fraction));
    }
    if merge_fraction == 0.0 {
        return Ok(mesh.clone());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<usize> = mesh.interior_faces().collect();
    candidates.shuffle(&mut rng);

    let target = (merge_fraction * mesh.n_cells() as f64).round() as usize;
    let mut merged_with: Vec<Option<usize>> = vec![None; mesh.n_cells()];
    let mut touched = vec![false; mesh.n_cells()];
    let mut merged_cells = 0usize;

    for fid in candidates {
        if merged_cells >= target {
            break;
        }
        let f = mesh.face(fid);
        let (a, b) = (f.cells[0].unwrap(), f.cells[1].unwrap());
        if touched[a] || touched[b] {
            continue;
        }
        if !merged_pair_is_star_shaped(mesh, a, b) {
            continue;
        }
        touched[a] = true;
        touched[b] = true;
        merged_with[a] = Some(b);
        merged_cells += 2;
    }

    // assemble the new cell list: merged pairs keep the union of their faces
    // minus every face they share
    let mut new_cells: Vec<Vec<usize>> = Vec::new();
    let mut consumed = vec![false; mesh.n_cells()];
    for a in 0..mesh.n_cells() {
        if consumed[a] {
            continue;
        }
        if let Some(b) = merged_with[a] {
            consumed[a] = true;
            consumed[b] = true;
            new_cells.push(union_faces(mesh, a, b));
        } else if !touched[a] {
            consumed[a] = true;
            new_cells.push(mesh.cell(a).faces.clone());
        }
    }

    rebuild(mesh, new_cells)
}

fn union_faces(mesh: &Mesh, a: usize, b: usize) -> Vec<usize> {
    let fa = &mesh.cell(a).faces;
    let fb = &mesh.cell(b).faces;
    let shared: Vec<usize> = fa.iter().copied().filter(|f| fb.contains(f)).collect();
    fa.iter()
        .chain(fb.iter())
        .copied()
        .filter(|f| !shared.contains(f))
        .collect()
}

fn merged_pair_is_star_shaped(mesh: &Mesh, a: usize, b: usize) -> bool {
    let ca = mesh.cell(a);
    let cb = mesh.cell(b);
    let vol = ca.volume + cb.volume;
    let bc = (ca.volume * ca.barycenter + cb.volume * cb.barycenter) / vol;
    let faces = union_faces(mesh, a, b);
    for fid in faces {
        let f = mesh.face(fid);
        let owner_is_pair = f.cells[0] == Some(a) || f.cells[0] == Some(b);
        let n = if owner_is_pair { f.normal } else { -f.normal };
        // planar faces: all (barycenter, face sub-simplex) volumes share the
        // sign of the barycenter-to-plane height
        let height = (f.barycenter - bc).dot(&n);
        if height <= 1e-12 * vol.powf(1.0 / mesh.dim() as f64) {
            return false;
        }
    }
    true
}

fn rebuild(mesh: &Mesh, new_cells: Vec<Vec<usize>>) -> Result<Mesh, MeshError> {
    // drop faces that are no longer referenced, keep ids compact
    let mut used = vec![false; mesh.n_faces()];
    for cf in &new_cells {
        for &f in cf {
            used[f] = true;
        }
    }
    let mut remap = vec![usize::MAX; mesh.n_faces()];
    let mut face_loops = Vec::new();
    let mut tags = Vec::new();
    for f in 0..mesh.n_faces() {
        if used[f] {
            remap[f] = face_loops.len();
            face_loops.push(mesh.face(f).vertices.clone());
            tags.push(mesh.tag(f));
        }
    }
    let cell_faces: Vec<Vec<usize>> = new_cells
        .into_iter()
        .map(|cf| cf.into_iter().map(|f| remap[f]).collect())
        .collect();
    // interior tags stay interior: merged faces were removed entirely
    Mesh::assemble(
        mesh.dim(),
        mesh.vertices().to_vec(),
        face_loops,
        cell_faces,
        Some(tags),
    )
}

/// Randomly moves interior vertices (2D only), skipping any move that would
/// break star-shapedness of an incident cell. Boundary vertices stay put.
pub fn perturb_nodes(mesh: &Mesh, amplitude: f64, seed: u64) -> Result<Mesh, MeshError> {
    if mesh.dim() != 2 {
        return Err(MeshError::PerturbUnsupported);
    }
    let limit = 0.5 * mesh.min_edge_length();
    if amplitude >= limit {
        return Err(MeshError::PerturbTooLarge { amplitude, limit });
    }
    if amplitude == 0.0 {
        return Ok(mesh.clone());
    }

    let mut on_boundary = vec![false; mesh.n_vertices()];
    for f in mesh.boundary_faces() {
        for &v in &mesh.face(f).vertices {
            on_boundary[v] = true;
        }
    }
    let mut vertex_cells: Vec<Vec<usize>> = vec![Vec::new(); mesh.n_vertices()];
    for c in 0..mesh.n_cells() {
        for v in mesh.cell_vertices(c) {
            vertex_cells[v].push(c);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moved = mesh.vertices().to_vec();
    let face_loops: Vec<Vec<usize>> = (0..mesh.n_faces())
        .map(|f| mesh.face(f).vertices.clone())
        .collect();
    let cell_faces: Vec<Vec<usize>> = (0..mesh.n_cells())
        .map(|c| mesh.cell(c).faces.clone())
        .collect();
    let tags: Vec<FaceTag> = (0..mesh.n_faces()).map(|f| mesh.tag(f)).collect();

    for v in 0..mesh.n_vertices() {
        // draw for every vertex so the random stream does not depend on the
        // boundary layout
        let dx = rng.random_range(-amplitude..=amplitude);
        let dy = rng.random_range(-amplitude..=amplitude);
        if on_boundary[v] {
            continue;
        }
        let old = moved[v];
        moved[v] = old + Vec3::new(dx, dy, 0.0);
        let candidate = Mesh::assemble(
            2,
            moved.clone(),
            face_loops.clone(),
            cell_faces.clone(),
            Some(tags.clone()),
        );
        let ok = match candidate {
            Ok(m) => vertex_cells[v].iter().all(|&c| m.is_star_shaped(c)),
            Err(_) => false,
        };
        if !ok {
            moved[v] = old;
        }
    }

    Mesh::assemble(2, moved, face_loops, cell_faces, Some(tags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_structured, CellType};

    #[test]
    fn agglomerate_preserves_volume_and_merges_cells() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[4, 4], CellType::Quad).unwrap();
        let a = agglomerate(&m, 0.3, 42).unwrap();
        assert!(a.n_cells() > 8 && a.n_cells() < 16, "got {}", a.n_cells());
        assert!((a.total_volume() - m.total_volume()).abs() < 1e-12 * m.total_volume());
        assert!(a.validate().pass());
    }

    #[test]
    fn agglomerate_zero_fraction_is_identity() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[3, 3], CellType::Quad).unwrap();
        let a = agglomerate(&m, 0.0, 7).unwrap();
        assert_eq!(a.n_cells(), m.n_cells());
        assert_eq!(a.n_faces(), m.n_faces());
    }

    #[test]
    fn agglomerate_is_deterministic() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[8, 8], CellType::Quad).unwrap();
        let a = agglomerate(&m, 0.3, 5).unwrap();
        let b = agglomerate(&m, 0.3, 5).unwrap();
        assert_eq!(a.n_cells(), b.n_cells());
        for (ca, cb) in a.cells().iter().zip(b.cells()) {
            assert_eq!(ca.faces, cb.faces);
        }
    }

    #[test]
    fn agglomerate_creates_hanging_node_witness() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[16, 16], CellType::Quad).unwrap();
        let a = agglomerate(&m, 0.3, 42).unwrap();
        let witness = a.interior_faces().any(|f| {
            let face = a.face(f);
            let da = a.cell(face.cells[0].unwrap()).diameter;
            let db = a.cell(face.cells[1].unwrap()).diameter;
            (da - db).abs() > 1e-9 * da.max(db)
        });
        assert!(witness, "expected a face with unequal neighbor diameters");
    }

    #[test]
    fn agglomerate_rejects_bad_fraction() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[2, 2], CellType::Quad).unwrap();
        assert!(matches!(
            agglomerate(&m, 0.7, 1),
            Err(MeshError::BadMergeFraction(_))
        ));
    }

    #[test]
    fn perturb_zero_amplitude_is_identity() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[4, 4], CellType::Quad).unwrap();
        let p = perturb_nodes(&m, 0.0, 1).unwrap();
        for (a, b) in m.vertices().iter().zip(p.vertices()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn perturb_keeps_boundary_and_star_shape() {
        let m = generate_structured(&[0.0, 0.0], &[1.0, 1.0], &[8, 8], CellType::Quad).unwrap();
        let h = 1.0 / 8.0;
        let p = perturb_nodes(&m, 0.2 * h, 1).unwrap();
        assert!(p.validate().pass());
        // boundary untouched
        for f in m.boundary_faces() {
            for &v in &m.face(f).vertices {
                assert_eq!(m.vertex(v), p.vertex(v));
            }
        }
        // something actually moved
        let moved = m
            .vertices()
            .iter()
            .zip(p.vertices())
            .any(|(a, b)| (a - b).norm() > 1e-12);
        assert!(moved);
    }

    #[test]
    fn perturb_rejects_3d() {
        let m = generate_structured(
            &[0.0, 0.0, 0.0],
            &[1.0, 1.0, 1.0],
            &[2, 2, 2],
            CellType::Tet,
        )
        .unwrap();
        assert!(matches!(
            perturb_nodes(&m, 0.01, 1),
            Err(MeshError::PerturbUnsupported)
        ));
    }
}
