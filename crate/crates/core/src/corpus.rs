//! Generators for the standard test surfaces (spheres, torus, Klein
//! bottle, projective plane, genus-2 surface, bands, disks) plus the
//! combinatorial 1-to-4 subdivision operator used for scaling runs.
//!
//! All generators are deterministic; the expected homology of each mesh is
//! pinned in the test suites against the brute-force oracle.

use crate::complex::OrientedComplex2;

/// A single filled triangle: the minimal disk.
pub fn single_triangle() -> OrientedComplex2 {
    OrientedComplex2::from_triangles(3, &[[0, 1, 2]]).unwrap()
}

/// Fan of `n >= 3` triangles around an interior vertex; a disk whose
/// boundary is the rim cycle.
pub fn disk_fan(n: usize) -> OrientedComplex2 {
    assert!(n >= 3);
    let tris: Vec<[usize; 3]> = (1..=n)
        .map(|i| [0, i, if i == n { 1 } else { i + 1 }])
        .collect();
    OrientedComplex2::from_triangles(n + 1, &tris).unwrap()
}

/// Boundary of the tetrahedron: the 4-triangle sphere.
pub fn sphere_tetra() -> OrientedComplex2 {
    OrientedComplex2::from_triangles(4, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap()
}

/// Icosahedron vertices as golden-ratio coordinates, antipodal pairs at
/// indices (2i, 2i+1).
fn icosahedron_coords() -> Vec<[f64; 3]> {
    let p = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut v = Vec::new();
    for (s1, s2) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
        v.push([0.0, s1, s2 * p]);
        v.push([s1, s2 * p, 0.0]);
        v.push([s2 * p, 0.0, s1]);
    }
    v
}

fn icosahedron_faces(coords: &[[f64; 3]]) -> Vec<[usize; 3]> {
    let d2 = |a: [f64; 3], b: [f64; 3]| {
        (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
    };
    // Every edge of the icosahedron has squared length 4 in these
    // coordinates, and its faces are exactly the mutually adjacent triples.
    let adj = |i: usize, j: usize| (d2(coords[i], coords[j]) - 4.0).abs() < 1e-9;
    let mut faces = Vec::new();
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            if !adj(i, j) {
                continue;
            }
            for k in j + 1..coords.len() {
                if adj(i, k) && adj(j, k) {
                    faces.push([i, j, k]);
                }
            }
        }
    }
    assert_eq!(faces.len(), 20);
    faces
}

/// The icosahedral sphere: 12 vertices, 30 edges, 20 triangles.
pub fn sphere_icosa() -> OrientedComplex2 {
    let coords = icosahedron_coords();
    OrientedComplex2::from_triangles(12, &icosahedron_faces(&coords)).unwrap()
}

/// The 6-vertex projective plane, as the antipodal quotient of the
/// icosahedron.
pub fn projective_plane() -> OrientedComplex2 {
    let coords = icosahedron_coords();
    let antipode = |i: usize| -> usize {
        let neg = [-coords[i][0], -coords[i][1], -coords[i][2]];
        coords
            .iter()
            .position(|c| {
                (c[0] - neg[0]).abs() < 1e-9
                    && (c[1] - neg[1]).abs() < 1e-9
                    && (c[2] - neg[2]).abs() < 1e-9
            })
            .unwrap()
    };
    let class = |i: usize| i.min(antipode(i));
    // Dense labels for the 6 antipodal classes, in order of appearance.
    let mut labels = Vec::new();
    let mut label_of = [usize::MAX; 12];
    for i in 0..12 {
        let c = class(i);
        if label_of[c] == usize::MAX {
            label_of[c] = labels.len();
            labels.push(c);
        }
    }
    let mut faces: Vec<[usize; 3]> = icosahedron_faces(&coords)
        .into_iter()
        .map(|f| {
            let mut g = f.map(|v| label_of[class(v)]);
            g.sort_unstable();
            g
        })
        .collect();
    faces.sort_unstable();
    faces.dedup();
    assert_eq!(faces.len(), 10);
    OrientedComplex2::from_triangles(6, &faces).unwrap()
}

/// The 7-vertex (Csaszar) torus: the complete graph K7 with faces
/// {i, i+1, i+3} and {i, i+2, i+3} mod 7.
pub fn torus_7() -> OrientedComplex2 {
    let mut tris = Vec::with_capacity(14);
    for i in 0..7usize {
        tris.push([i, (i + 1) % 7, (i + 3) % 7]);
        tris.push([i, (i + 2) % 7, (i + 3) % 7]);
    }
    OrientedComplex2::from_triangles(7, &tris).unwrap()
}

/// 9-vertex Klein bottle: a 3x3 grid, periodic horizontally, glued top to
/// bottom with a horizontal flip.
pub fn klein_bottle() -> OrientedComplex2 {
    let corner = |i: usize, j: usize| -> usize {
        let i = i % 3;
        if j < 3 {
            3 * j + i
        } else {
            (3 - i) % 3
        }
    };
    let mut tris = Vec::with_capacity(18);
    for j in 0..3 {
        for i in 0..3 {
            let (c00, c10) = (corner(i, j), corner(i + 1, j));
            let (c01, c11) = (corner(i, j + 1), corner(i + 1, j + 1));
            tris.push([c00, c10, c11]);
            tris.push([c00, c11, c01]);
        }
    }
    OrientedComplex2::from_triangles(9, &tris).unwrap()
}

/// Closed orientable genus-2 surface: two 7-vertex tori, each with one
/// triangle removed, glued along the resulting boundary cycles.
pub fn genus_2() -> OrientedComplex2 {
    let hole = [0usize, 1, 3]; // the i = 0 face {i, i+1, i+3}
    let torus_faces = || -> Vec<[usize; 3]> {
        let mut tris = Vec::new();
        for i in 0..7usize {
            tris.push([i, (i + 1) % 7, (i + 3) % 7]);
            tris.push([i, (i + 2) % 7, (i + 3) % 7]);
        }
        tris
    };
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for f in torus_faces() {
        let mut g = f;
        g.sort_unstable();
        if g != hole {
            faces.push(g);
        }
    }
    // Second copy: relabel v -> v + 7, then identify its hole boundary
    // (7, 8, 10) with (0, 1, 3); surviving vertices get dense labels.
    let map = |v: usize| -> usize {
        match v + 7 {
            7 => 0,
            8 => 1,
            10 => 3,
            9 => 7,
            11 => 8,
            12 => 9,
            13 => 10,
            _ => unreachable!(),
        }
    };
    for f in torus_faces() {
        let mut g = f;
        g.sort_unstable();
        if g != hole {
            let mut h = g.map(map);
            h.sort_unstable();
            faces.push(h);
        }
    }
    OrientedComplex2::from_triangles(11, &faces).unwrap()
}

/// Annulus built from a 2 x n cylinder strip, `n >= 3`.
pub fn annulus(n: usize) -> OrientedComplex2 {
    assert!(n >= 3);
    let col = |c: usize| -> (usize, usize) {
        let c = c % n;
        (c, n + c)
    };
    let mut tris = Vec::new();
    for c in 0..n {
        let (bl, tl) = col(c);
        let (br, tr) = col(c + 1);
        tris.push([bl, br, tr]);
        tris.push([bl, tr, tl]);
    }
    OrientedComplex2::from_triangles(2 * n, &tris).unwrap()
}

/// Moebius band from a 2 x n strip whose last column glues back flipped.
pub fn mobius_band(n: usize) -> OrientedComplex2 {
    assert!(n >= 4);
    let col = |c: usize| -> (usize, usize) {
        if c < n {
            (c, n + c)
        } else {
            (n, 0) // flipped return to column 0
        }
    };
    let mut tris = Vec::new();
    for c in 0..n {
        let (bl, tl) = col(c);
        let (br, tr) = col(c + 1);
        tris.push([bl, br, tr]);
        tris.push([bl, tr, tl]);
    }
    OrientedComplex2::from_triangles(2 * n, &tris).unwrap()
}

/// Disjoint union of the tetrahedral sphere and the 7-vertex torus.
pub fn two_component() -> OrientedComplex2 {
    let mut tris = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    for i in 0..7usize {
        tris.push([4 + i, 4 + (i + 1) % 7, 4 + (i + 3) % 7]);
        tris.push([4 + i, 4 + (i + 2) % 7, 4 + (i + 3) % 7]);
    }
    OrientedComplex2::from_triangles(11, &tris).unwrap()
}

/// The surface of a cube with each square face split into two triangles.
pub fn hollow_cube() -> OrientedComplex2 {
    let quads = [
        [0, 1, 2, 3], // bottom
        [4, 5, 6, 7], // top
        [0, 1, 5, 4],
        [1, 2, 6, 5],
        [2, 3, 7, 6],
        [3, 0, 4, 7],
    ];
    let mut tris = Vec::new();
    for q in quads {
        tris.push([q[0], q[1], q[2]]);
        tris.push([q[0], q[2], q[3]]);
    }
    OrientedComplex2::from_triangles(8, &tris).unwrap()
}

/// Splits every triangle into four via edge midpoints. Preserves the
/// topology while quadrupling the triangle count; purely combinatorial.
pub fn subdivide(c: &OrientedComplex2) -> OrientedComplex2 {
    let nv = c.vertex_count();
    let mid = |e: usize| nv + e;
    let mut tris = Vec::with_capacity(4 * c.triangle_count());
    for t in 0..c.triangle_count() {
        let [a, b, d] = c.triangle_vertices(t);
        // triangle_edges entry i omits vertex i
        let [e_bd, e_ad, e_ab] = c.triangle_edges(t);
        let (mab, mad, mbd) = (mid(e_ab), mid(e_ad), mid(e_bd));
        tris.push([a, mab, mad]);
        tris.push([b, mab, mbd]);
        tris.push([d, mad, mbd]);
        tris.push([mab, mad, mbd]);
    }
    OrientedComplex2::from_triangles(nv + c.edge_count(), &tris).unwrap()
}

/// Serializes a complex in TRI format.
pub fn to_tri_string(c: &OrientedComplex2) -> String {
    let mut out = String::new();
    for t in 0..c.triangle_count() {
        let [a, b, d] = c.triangle_vertices(t);
        out.push_str(&format!("{a} {b} {d}\n"));
    }
    out
}

/// Serializes a complex in OFF format with placeholder coordinates.
pub fn to_off_string(c: &OrientedComplex2) -> String {
    let mut out = format!(
        "OFF\n{} {} {}\n",
        c.vertex_count(),
        c.triangle_count(),
        c.edge_count()
    );
    for _ in 0..c.vertex_count() {
        out.push_str("0 0 0\n");
    }
    for t in 0..c.triangle_count() {
        let [a, b, d] = c.triangle_vertices(t);
        out.push_str(&format!("3 {a} {b} {d}\n"));
    }
    out
}

/// The named acceptance corpus.
pub fn corpus() -> Vec<(&'static str, OrientedComplex2)> {
    vec![
        ("single-triangle", single_triangle()),
        ("disk-fan", disk_fan(6)),
        ("sphere-tetra", sphere_tetra()),
        ("sphere-icosa", sphere_icosa()),
        ("torus-7", torus_7()),
        ("klein-bottle", klein_bottle()),
        ("projective-plane", projective_plane()),
        ("genus-2", genus_2()),
        ("annulus", annulus(5)),
        ("mobius-band", mobius_band(5)),
        ("two-component", two_component()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ManifoldKind;

    #[test]
    fn counts_and_euler() {
        let cases: Vec<(OrientedComplex2, (usize, usize, usize), i64)> = vec![
            (sphere_tetra(), (4, 6, 4), 2),
            (sphere_icosa(), (12, 30, 20), 2),
            (torus_7(), (7, 21, 14), 0),
            (klein_bottle(), (9, 27, 18), 0),
            (projective_plane(), (6, 15, 10), 1),
            (genus_2(), (11, 39, 26), -2),
            (hollow_cube(), (8, 18, 12), 2),
        ];
        for (c, (v, e, t), chi) in cases {
            assert_eq!(
                (c.vertex_count(), c.edge_count(), c.triangle_count()),
                (v, e, t)
            );
            assert_eq!(c.euler_characteristic(), chi);
        }
    }

    #[test]
    fn corpus_is_manifold() {
        for (name, c) in corpus() {
            let report = c
                .validate_manifold()
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(
                report.pinch_vertices.is_empty(),
                "{name} has pinch vertices"
            );
            let closed = matches!(name, |"sphere-tetra"| "sphere-icosa"
                | "torus-7"
                | "klein-bottle"
                | "projective-plane"
                | "genus-2"
                | "two-component");
            let expected = if closed {
                ManifoldKind::Closed
            } else {
                ManifoldKind::WithBoundary
            };
            assert_eq!(report.kind, expected, "{name}");
        }
    }

    #[test]
    fn subdivision_preserves_euler() {
        for (name, c) in corpus() {
            let s = subdivide(&c);
            assert_eq!(s.triangle_count(), 4 * c.triangle_count(), "{name}");
            assert_eq!(s.euler_characteristic(), c.euler_characteristic(), "{name}");
            s.validate_manifold()
                .unwrap_or_else(|e| panic!("{name} subdivided: {e}"));
        }
    }

    #[test]
    fn serializers_round_trip() {
        for (name, c) in corpus() {
            let tri = OrientedComplex2::parse_tri(&to_tri_string(&c)).unwrap();
            assert_eq!(tri.triangle_count(), c.triangle_count(), "{name}");
            let off = OrientedComplex2::parse_off(&to_off_string(&c)).unwrap();
            assert_eq!(off.cell_count(), c.cell_count(), "{name}");
        }
    }
}
