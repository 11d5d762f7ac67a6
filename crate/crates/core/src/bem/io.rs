//! Plain-text export of meshes and solutions.

use std::io::{self, Write};

use num_complex::Complex64;

use super::mesh::{Mesh, MeshVariant};
use crate::geometry::Element;

/// ASCII mesh: a header line, then one line per element with its three
/// vertices, collocation point and unit normal.
pub fn write_mesh<W: Write>(mesh: &Mesh, mut w: W) -> io::Result<()> {
    let tag = match mesh.variant {
        MeshVariant::Curved => "curved",
        MeshVariant::Flat => "flat",
    };
    writeln!(w, "# mesh {tag} elements={} inner={} a={} b={}", mesh.len(), mesh.n_inner, mesh.radii.0, mesh.radii.1)?;
    writeln!(w, "# x0 y0 z0 x1 y1 z1 x2 y2 z2 cx cy cz nx ny nz vibrating")?;
    for (i, e) in mesh.elements.iter().enumerate() {
        let mut fields: Vec<String> = Vec::with_capacity(16);
        for v in Element::vertices(e) {
            fields.extend(v.iter().map(|c| format!("{c:.17e}")));
        }
        fields.extend(mesh.collocation[i].iter().map(|c| format!("{c:.17e}")));
        fields.extend(mesh.normals[i].iter().map(|c| format!("{c:.17e}")));
        fields.push(u8::from(mesh.vibrating[i]).to_string());
        writeln!(w, "{}", fields.join(" "))?;
    }
    Ok(())
}

/// CSV with columns `index,re,im,exact_re,exact_im`.
pub fn write_solution_csv<W: Write>(p: &[Complex64], exact: &[Complex64], mut w: W) -> io::Result<()> {
    if p.len() != exact.len() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, format!("length mismatch: {} vs {}", p.len(), exact.len())));
    }
    writeln!(w, "index,re,im,exact_re,exact_im")?;
    for (i, (z, e)) in p.iter().zip(exact).enumerate() {
        writeln!(w, "{i},{:.17e},{:.17e},{:.17e},{:.17e}", z.re, z.im, e.re, e.im)?;
    }
    Ok(())
}
