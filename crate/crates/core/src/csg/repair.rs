//! Turns the polygon soup produced by BSP clipping into an indexed,
//! watertight triangle mesh.
//!
//! BSP splitting leaves coincident-but-distinct vertices and T-junctions
//! (a vertex of one polygon lying in the middle of a neighbour's edge).
//! Both break edge-pair topology, so the soup is welded, every edge gets the
//! vertices lying on it inserted, and each polygon is then ear-clipped.

use nalgebra::{Point3, Vector3};

use super::bsp::Polygon;
use crate::mesh::{weld_points, Face, Mesh};

/// Distance under which two output vertices are merged.
pub const WELD_EPSILON: f64 = 1e-7;

/// Triangles below this area (m²) are never emitted.
pub const MIN_TRIANGLE_AREA: f64 = 1e-12;

struct IndexedPolygon {
    indices: Vec<usize>,
    normal: Vector3<f64>,
}

pub fn polygons_to_mesh(polygons: &[Polygon]) -> Mesh {
    let mut points = Vec::new();
    for p in polygons {
        points.extend_from_slice(&p.vertices);
    }
    let (positions, remap) = weld_points(&points, WELD_EPSILON);

    let mut cursor = 0;
    let mut indexed: Vec<IndexedPolygon> = Vec::with_capacity(polygons.len());
    for p in polygons {
        let ids: Vec<usize> = remap[cursor..cursor + p.vertices.len()].to_vec();
        cursor += p.vertices.len();
        let ids = simplify_cycle(ids);
        if ids.len() >= 3 {
            indexed.push(IndexedPolygon {
                indices: ids,
                normal: p.plane.normal,
            });
        }
    }

    insert_t_junctions(&positions, &mut indexed);

    let mut faces: Vec<Face> = Vec::new();
    for poly in &indexed {
        let ids = simplify_cycle(poly.indices.clone());
        if ids.len() >= 3 {
            ear_clip(&positions, &ids, &poly.normal, &mut faces);
        }
    }
    compact(positions, faces)
}

/// Drops repeated consecutive indices and back-and-forth spikes (a, b, a).
fn simplify_cycle(mut ids: Vec<usize>) -> Vec<usize> {
    loop {
        let n = ids.len();
        if n < 3 {
            return ids;
        }
        let mut changed = false;
        for i in 0..n {
            let next = ids[(i + 1) % n];
            if ids[i] == next {
                ids.remove((i + 1) % n);
                changed = true;
                break;
            }
            let after = ids[(i + 2) % n];
            if ids[i] == after {
                // i -> next -> i: remove the spike tip and one copy of i.
                let tip = (i + 1) % n;
                let dup = (i + 2) % n;
                let (hi, lo) = (tip.max(dup), tip.min(dup));
                ids.remove(hi);
                ids.remove(lo);
                changed = true;
                break;
            }
        }
        if !changed {
            return ids;
        }
    }
}

/// Splits every polygon edge at the welded vertices lying on it.
fn insert_t_junctions(positions: &[Point3<f64>], polygons: &mut [IndexedPolygon]) {
    let mut used = vec![false; positions.len()];
    for p in polygons.iter() {
        for &i in &p.indices {
            used[i] = true;
        }
    }
    // Candidate vertices sorted by x so each edge only scans its x-range.
    let mut by_x: Vec<usize> = (0..positions.len()).filter(|&i| used[i]).collect();
    by_x.sort_by(|&a, &b| positions[a].x.total_cmp(&positions[b].x).then(a.cmp(&b)));
    let xs: Vec<f64> = by_x.iter().map(|&i| positions[i].x).collect();

    for poly in polygons.iter_mut() {
        let n = poly.indices.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let (a, b) = (poly.indices[k], poly.indices[(k + 1) % n]);
            out.push(a);
            let (pa, pb) = (positions[a], positions[b]);
            let d = pb - pa;
            let len2 = d.norm_squared();
            if len2 <= WELD_EPSILON * WELD_EPSILON {
                continue;
            }
            let lo = pa.x.min(pb.x) - WELD_EPSILON;
            let hi = pa.x.max(pb.x) + WELD_EPSILON;
            let start = xs.partition_point(|&x| x < lo);
            let mut on_edge: Vec<(f64, usize)> = Vec::new();
            for (&q, &qx) in by_x[start..].iter().zip(&xs[start..]) {
                if qx > hi {
                    break;
                }
                if q == a || q == b {
                    continue;
                }
                let w = positions[q] - pa;
                let t = w.dot(&d) / len2;
                let along = t * len2.sqrt();
                if along <= WELD_EPSILON || (1.0 - t) * len2.sqrt() <= WELD_EPSILON {
                    continue;
                }
                let dist2 = (w - d * t).norm_squared();
                if dist2 <= WELD_EPSILON * WELD_EPSILON {
                    on_edge.push((t, q));
                }
            }
            on_edge.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            out.extend(on_edge.into_iter().map(|(_, q)| q));
        }
        poly.indices = out;
    }
}

/// Ear clipping in the polygon's plane. Collinear vertices are never ear
/// tips, so they end up as corners of neighbouring triangles.
fn ear_clip(
    positions: &[Point3<f64>],
    ids: &[usize],
    normal: &Vector3<f64>,
    faces: &mut Vec<Face>,
) {
    let u = normal.cross(&least_aligned_axis(normal)).normalize();
    let v = normal.cross(&u);
    let pts: Vec<[f64; 2]> = ids
        .iter()
        .map(|&i| {
            let p = positions[i].coords;
            [p.dot(&u), p.dot(&v)]
        })
        .collect();
    let cross = |a: usize, b: usize, c: usize| -> f64 {
        let (pa, pb, pc) = (pts[a], pts[b], pts[c]);
        (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0])
    };
    let min_cross = 2.0 * MIN_TRIANGLE_AREA;

    let mut ring: Vec<usize> = (0..ids.len()).collect();
    while ring.len() > 3 {
        let n = ring.len();
        let ear = (0..n).find(|&k| {
            let (a, b, c) = (ring[(k + n - 1) % n], ring[k], ring[(k + 1) % n]);
            if cross(a, b, c) <= min_cross {
                return false;
            }
            ring.iter().all(|&q| {
                if ids[q] == ids[a] || ids[q] == ids[b] || ids[q] == ids[c] {
                    return true;
                }
                // Reject if q is inside or on the triangle, including points
                // on the diagonal a-c up to rounding.
                !(cross(a, b, q) >= -min_cross
                    && cross(b, c, q) >= -min_cross
                    && cross(c, a, q) >= -min_cross)
            })
        });
        let Some(k) = ear else {
            // Whatever remains is degenerate (collinear); its edges pair up.
            return;
        };
        let (a, b, c) = (ring[(k + n - 1) % n], ring[k], ring[(k + 1) % n]);
        faces.push([ids[a], ids[b], ids[c]]);
        ring.remove(k);
    }
    if ring.len() == 3 && cross(ring[0], ring[1], ring[2]) > min_cross {
        faces.push([ids[ring[0]], ids[ring[1]], ids[ring[2]]]);
    }
}

fn least_aligned_axis(n: &Vector3<f64>) -> Vector3<f64> {
    let a = n.abs();
    if a.x <= a.y && a.x <= a.z {
        Vector3::x()
    } else if a.y <= a.z {
        Vector3::y()
    } else {
        Vector3::z()
    }
}

/// Drops unreferenced vertices, keeping first-use order.
fn compact(positions: Vec<Point3<f64>>, faces: Vec<Face>) -> Mesh {
    let mut remap = vec![usize::MAX; positions.len()];
    let mut vertices = Vec::new();
    let faces = faces
        .into_iter()
        .filter(|[a, b, c]| a != b && b != c && a != c)
        .map(|f| {
            f.map(|i| {
                if remap[i] == usize::MAX {
                    remap[i] = vertices.len();
                    vertices.push(positions[i]);
                }
                remap[i]
            })
        })
        .collect();
    Mesh::from_parts(vertices, faces)
}
