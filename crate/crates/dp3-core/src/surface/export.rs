//! OBJ and PLY writers.

use std::io::Write;

use crate::error::Result;

use super::mesh::SurfaceMesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Ply,
}

/// `x` rounded to 9 significant digits, printed without exponent.
fn obj_number(x: f64) -> String {
    let rounded: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    format!("{rounded}")
}

pub fn write_obj<W: Write>(mesh: &SurfaceMesh, out: &mut W) -> Result<()> {
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", obj_number(v[0]), obj_number(v[1]), obj_number(v[2]))?;
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

pub fn write_ply<W: Write>(mesh: &SurfaceMesh, out: &mut W) -> Result<()> {
    write!(
        out,
        "ply\nformat binary_little_endian 1.0\nelement vertex {}\nproperty double x\nproperty double y\nproperty double z\n\
         element face {}\nproperty list uchar int vertex_indices\nend_header\n",
        mesh.vertices.len(),
        mesh.faces.len()
    )?;
    let mut buf = Vec::with_capacity(24 * mesh.vertices.len() + 13 * mesh.faces.len());
    for v in &mesh.vertices {
        for x in v {
            buf.extend_from_slice(&x.to_le_bytes());
        }
    }
    for f in &mesh.faces {
        buf.push(3u8);
        for &i in f {
            buf.extend_from_slice(&(i as i32).to_le_bytes());
        }
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn export_mesh(mesh: &SurfaceMesh, format: MeshFormat) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    match format {
        MeshFormat::Obj => write_obj(mesh, &mut out)?,
        MeshFormat::Ply => write_ply(mesh, &mut out)?,
    }
    Ok(out)
}

/// Vertices and faces of an OBJ file with `v` and triangular `f` records.
pub fn parse_obj(text: &str) -> Option<(Vec<[f64; 3]>, Vec<[usize; 3]>)> {
    let mut vs = Vec::new();
    let mut fs = Vec::new();
    for line in text.lines() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let p: Vec<f64> = it.map(|t| t.parse().ok()).collect::<Option<_>>()?;
                vs.push([*p.first()?, *p.get(1)?, *p.get(2)?]);
            }
            Some("f") => {
                let p: Vec<usize> = it.map(|t| t.parse().ok()).collect::<Option<_>>()?;
                if p.len() != 3 || p.contains(&0) {
                    return None;
                }
                fs.push([p[0] - 1, p[1] - 1, p[2] - 1]);
            }
            None => {}
            Some(_) => return None,
        }
    }
    Some((vs, fs))
}
