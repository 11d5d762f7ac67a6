use std::collections::HashMap;

use crate::geometry::{Element, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeshVariant {
    /// Exact spherical triangles.
    Curved,
    /// Chord triangles through the same vertices.
    Flat,
}

/// Elements of a closed triangulated sphere centred at the origin, with
/// normals pointing away from the centre.
///
/// Starts from an icosahedron and applies `subdivisions` rounds of edge
/// midpoint refinement, projecting new vertices onto the sphere.
pub fn icosphere(subdivisions: usize, radius: f64, variant: MeshVariant) -> Vec<Element> {
    let (verts, faces) = icosphere_topology(subdivisions);
    faces
        .iter()
        .map(|f| {
            let [a, b, c] = f.map(|i| verts[i] * radius);
            match variant {
                MeshVariant::Curved => Element::spherical(radius, a, b, c),
                MeshVariant::Flat => Element::flat(a, b, c),
            }
        })
        .collect()
}

/// Unit-sphere vertices and outward-oriented faces.
pub(crate) fn icosphere_topology(subdivisions: usize) -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vec3> = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |i: usize, j: usize, verts: &mut Vec<Vec3>| {
            let key = (i.min(j), i.max(j));
            *mid.entry(key).or_insert_with(|| {
                verts.push(((verts[i] + verts[j]) * 0.5).normalize());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        faces = next;
    }
    for f in faces.iter_mut() {
        let (a, b, c) = (verts[f[0]], verts[f[1]], verts[f[2]]);
        if (b - a).cross(&(c - a)).dot(&(a + b + c)) < 0.0 {
            f.swap(1, 2);
        }
    }
    (verts, faces)
}

/// Boundary mesh of the cavity between two concentric spheres.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub elements: Vec<Element>,
    /// `r_q(1/3, 1/3)` of each element.
    pub collocation: Vec<Vec3>,
    /// Unit normal at each collocation point.
    pub normals: Vec<Vec3>,
    /// `false`: normals point out of the fluid domain (towards the centre on
    /// the inner sphere, away from it on the outer sphere). `true`: reversed.
    pub normals_into_domain: bool,
    /// Elements on the inner sphere whose collocation point lies strictly
    /// above the equator; centroids on `z = 0` (up to rounding) are at rest.
    pub vibrating: Vec<bool>,
    /// Longest vertex-to-vertex chord of each element.
    pub edge_lengths: Vec<f64>,
    /// Number of elements on the inner sphere; they come first.
    pub n_inner: usize,
    pub radii: (f64, f64),
    pub variant: MeshVariant,
}

/// Inner sphere of radius `a` followed by outer sphere of radius `b`.
pub fn cavity_mesh(subdivisions: usize, a: f64, b: f64, variant: MeshVariant, normals_into_domain: bool) -> Mesh {
    let inner = icosphere(subdivisions, a, variant);
    let outer = icosphere(subdivisions, b, variant);
    let n_inner = inner.len();
    let elements: Vec<Element> = if normals_into_domain {
        inner.into_iter().chain(outer.iter().map(Element::flip)).collect()
    } else {
        inner.iter().map(Element::flip).chain(outer).collect()
    };
    let samples: Vec<_> = elements.iter().map(|e| e.sample(1.0 / 3.0, 1.0 / 3.0).expect("centroid inside triangle")).collect();
    let collocation: Vec<Vec3> = samples.iter().map(|s| s.r).collect();
    let normals = samples.iter().map(|s| s.n).collect();
    let vibrating = collocation.iter().enumerate().map(|(i, x)| i < n_inner && x.z > 1e-12 * a).collect();
    let edge_lengths = elements.iter().map(Element::diameter).collect();
    Mesh { elements, collocation, normals, normals_into_domain, vibrating, edge_lengths, n_inner, radii: (a, b), variant }
}

impl Mesh {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Sign `s` such that `s * n` points out of the fluid domain.
    pub fn domain_sign(&self) -> f64 {
        if self.normals_into_domain {
            -1.0
        } else {
            1.0
        }
    }
}
