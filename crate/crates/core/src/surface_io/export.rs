//! OBJ / PLY surface export and CSV derivative fields.

use std::collections::HashMap;
use std::io::Write;

use crate::bb_core::Vector2;
use crate::error::{Error, Result};
use crate::hermite::jet::jet_slot;
use crate::hermite::refine::{surface_normal, MacroPatch, RefinementLevel};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Ply,
}

/// Graph surface `(x, y, f)` with per-vertex unit normals.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub positions: Vec<[f64; 3]>,
    pub normals: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Vertex(usize),
    /// `(a, b, s)`: point `s/n` of the way from mesh vertex `a < b`.
    Edge(usize, usize, usize),
    Interior(usize, usize, usize),
}

fn point_key<S>(patch_index: usize, p: &MacroPatch<S>, i: usize, j: usize) -> Key {
    let n = p.n;
    let [a, b, c] = p.vertex_ids;
    let edge = |p: usize, q: usize, s: usize| if p < q { Key::Edge(p, q, s) } else { Key::Edge(q, p, n - s) };
    match (i, j) {
        (0, 0) => Key::Vertex(a),
        (i, 0) if i == n => Key::Vertex(b),
        (0, j) if j == n => Key::Vertex(c),
        (i, 0) => edge(a, b, i),
        (0, j) => edge(a, c, j),
        (_, j) if i + j == n => edge(b, c, j),
        _ => Key::Interior(patch_index, i, j),
    }
}

/// Points shared between macro triangles are emitted once.
pub fn surface_mesh<S: Scalar>(level: &RefinementLevel<S>) -> Result<SurfaceMesh> {
    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut mesh = SurfaceMesh {
        positions: Vec::new(),
        normals: Vec::new(),
        faces: Vec::new(),
    };
    for (pi, p) in level.patches.iter().enumerate() {
        let (a, b) = p.basis();
        let mut local = HashMap::new();
        for j in 0..=p.n {
            for i in 0..=p.n - j {
                let key = point_key(pi, p, i, j);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = mesh.positions.len();
                        let xy = p.point(i, j).to_f64();
                        let jet = p.jet(i, j);
                        mesh.positions.push([xy[0], xy[1], jet.v[0].to_f64()]);
                        mesh.normals.push(surface_normal(jet, &a, &b)?);
                        index.insert(key, id);
                        id
                    }
                };
                local.insert((i, j), id);
            }
        }
        for f in p.faces() {
            mesh.faces.push(f.map(|ij| local[&ij]));
        }
    }
    Ok(mesh)
}

pub fn write_obj(mesh: &SurfaceMesh, w: &mut impl Write) -> Result<()> {
    for p in &mesh.positions {
        writeln!(w, "v {} {} {}", p[0], p[1], p[2])?;
    }
    for n in &mesh.normals {
        writeln!(w, "vn {} {} {}", n[0], n[1], n[2])?;
    }
    for f in &mesh.faces {
        let [a, b, c] = f.map(|v| v + 1);
        writeln!(w, "f {a}//{a} {b}//{b} {c}//{c}")?;
    }
    Ok(())
}

pub fn write_ply(mesh: &SurfaceMesh, w: &mut impl Write) -> Result<()> {
    write!(
        w,
        "ply\nformat binary_little_endian 1.0\nelement vertex {}\n\
         property float x\nproperty float y\nproperty float z\n\
         property float nx\nproperty float ny\nproperty float nz\n\
         element face {}\nproperty list uchar int vertex_indices\nend_header\n",
        mesh.positions.len(),
        mesh.faces.len()
    )?;
    for (p, n) in mesh.positions.iter().zip(&mesh.normals) {
        for v in p.iter().chain(n) {
            w.write_all(&(*v as f32).to_le_bytes())?;
        }
    }
    for f in &mesh.faces {
        w.write_all(&[3u8])?;
        for &v in f {
            let v = i32::try_from(v).map_err(|_| Error::Io("vertex index exceeds PLY int range".into()))?;
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn export_mesh<S: Scalar>(level: &RefinementLevel<S>, format: MeshFormat, w: &mut impl Write) -> Result<()> {
    let mesh = surface_mesh(level)?;
    match format {
        MeshFormat::Obj => write_obj(&mesh, w),
        MeshFormat::Ply => write_ply(&mesh, w),
    }
}

/// Jet slot for a selector `f`, `t`, `m`, `tt`, …, `mmm`.
pub fn field_selector(which: &str) -> Result<usize> {
    let bad = || Error::UnknownSelector(which.to_string());
    if which == "f" {
        return Ok(0);
    }
    if which.is_empty() || which.len() > 3 || !which.chars().all(|c| c == 't' || c == 'm') {
        return Err(bad());
    }
    // canonical spelling has all t's first
    let a = which.chars().filter(|&c| c == 't').count();
    let b = which.len() - a;
    if which != "t".repeat(a) + &"m".repeat(b) {
        return Err(bad());
    }
    Ok(jet_slot(a, b))
}

/// CSV `x,y,value` of the selected derivative along `(t, m)` at every grid
/// point of every macro triangle. Points on macro edges appear once per
/// adjacent triangle, so one-sided values stay visible.
pub fn export_derivative_field<S: Scalar>(
    level: &RefinementLevel<S>,
    which: &str,
    frame: Option<(Vector2<S>, Vector2<S>)>,
    w: &mut impl Write,
) -> Result<()> {
    let slot = field_selector(which)?;
    let (t, m) = frame.unwrap_or((Vector2::new(S::one(), S::zero()), Vector2::new(S::zero(), S::one())));
    writeln!(w, "x,y,value")?;
    for p in &level.patches {
        for j in 0..=p.n {
            for i in 0..=p.n - j {
                let xy = p.point(i, j).to_f64();
                let v = p.directional_jet(i, j, &t, &m)?.v[slot].to_f64();
                writeln!(w, "{},{},{}", xy[0], xy[1], v)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::refine::refine_levels;
    use crate::surface_io::{delta_data, hexagon, two_triangles};

    #[test]
    fn selectors() {
        assert_eq!(field_selector("f").unwrap(), 0);
        assert_eq!(field_selector("m").unwrap(), 2);
        assert_eq!(field_selector("tm").unwrap(), 4);
        assert_eq!(field_selector("mmm").unwrap(), 9);
        for bad in ["", "x", "mt", "tttt"] {
            assert!(matches!(field_selector(bad), Err(Error::UnknownSelector(_))));
        }
    }

    #[test]
    fn zero_spline_is_flat() {
        let l = refine_levels(&two_triangles::<f64>().initial_level().unwrap(), 2);
        let mesh = surface_mesh(&l).unwrap();
        assert!(mesh.normals.iter().all(|n| *n == [0.0, 0.0, 1.0]));
        assert!(mesh.positions.iter().all(|p| p[2] == 0.0));
        let mut csv = Vec::new();
        export_derivative_field(&l, "ttm", None, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.lines().skip(1).all(|l| l.ends_with(",0")));
    }

    #[test]
    fn hexagon_counts_and_indices() {
        let tri = delta_data(&hexagon::<f64>(), 0).unwrap();
        let l = refine_levels(&tri.initial_level().unwrap(), 2);
        let mesh = surface_mesh(&l).unwrap();
        let n = 4;
        assert_eq!(mesh.faces.len(), 6 * n * n);
        assert_eq!(mesh.positions.len(), 7 + 12 * (n - 1) + 6 * (n - 1) * (n - 2) / 2);
        assert!(mesh.faces.iter().flatten().all(|&v| v < mesh.positions.len()));
        for nrm in &mesh.normals {
            assert!((nrm.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn obj_is_deterministic_and_ply_sized() {
        let tri = delta_data(&two_triangles::<f64>(), 2).unwrap();
        let l = refine_levels(&tri.initial_level().unwrap(), 2);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        export_mesh(&l, MeshFormat::Obj, &mut a).unwrap();
        export_mesh(&refine_levels(&tri.initial_level().unwrap(), 2), MeshFormat::Obj, &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 32);
        let mesh = surface_mesh(&l).unwrap();
        let mut ply = Vec::new();
        write_ply(&mesh, &mut ply).unwrap();
        let header_end = ply.windows(11).position(|w| w == b"end_header\n").unwrap() + 11;
        assert_eq!(ply.len() - header_end, mesh.positions.len() * 24 + mesh.faces.len() * 13);
    }
}
