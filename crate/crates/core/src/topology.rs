//! Edge incidence, printability checks and Euler-characteristic genus.
//!
//! Edges are identified by exact vertex-index pairs. Coincident vertices are
//! never merged here; run [`crate::mesh::weld`] first on triangle soups.

use std::collections::HashMap;

use crate::error::{Error, Result, TopologyCheck};
use crate::mesh::Mesh;

#[derive(Debug, Default, Clone, Copy)]
struct EdgeUse {
    /// Traversals from the lower to the higher index.
    forward: u32,
    backward: u32,
}

impl EdgeUse {
    fn faces(&self) -> u32 {
        self.forward + self.backward
    }
}

/// Undirected edge table with per-direction traversal counts.
pub(crate) struct EdgeMap {
    edges: HashMap<(usize, usize), EdgeUse>,
}

impl EdgeMap {
    pub(crate) fn build(mesh: &Mesh) -> Self {
        let mut edges: HashMap<(usize, usize), EdgeUse> =
            HashMap::with_capacity(mesh.face_count() * 3 / 2);
        for f in mesh.faces() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let e = edges.entry((a.min(b), a.max(b))).or_default();
                if a < b {
                    e.forward += 1;
                } else {
                    e.backward += 1;
                }
            }
        }
        Self { edges }
    }

    pub(crate) fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub(crate) fn is_watertight(&self) -> bool {
        self.edges.values().all(|e| e.faces() == 2)
    }

    pub(crate) fn is_consistently_wound(&self) -> bool {
        self.edges
            .values()
            .filter(|e| e.faces() >= 2)
            .all(|e| e.forward == 1 && e.backward == 1)
    }

    fn max_edge_valence(&self) -> u32 {
        self.edges.values().map(EdgeUse::faces).max().unwrap_or(0)
    }
}

/// Outcome of [`validate_printable`]. Failures are encoded, never raised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrintabilityReport {
    pub watertight: bool,
    pub manifold: bool,
    pub consistent_winding: bool,
    /// Present only for a watertight, manifold, single-component mesh.
    pub genus: Option<i64>,
    pub component_count: usize,
}

impl PrintabilityReport {
    pub fn is_printable(&self) -> bool {
        self.watertight && self.manifold && self.consistent_winding
    }
}

impl std::fmt::Display for PrintabilityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "watertight: {}", self.watertight)?;
        writeln!(f, "manifold: {}", self.manifold)?;
        writeln!(f, "consistent_winding: {}", self.consistent_winding)?;
        match self.genus {
            Some(g) => writeln!(f, "genus: {g}")?,
            None => writeln!(f, "genus: undefined")?,
        }
        write!(f, "components: {}", self.component_count)
    }
}

pub fn validate_printable(mesh: &Mesh) -> PrintabilityReport {
    let edges = EdgeMap::build(mesh);
    let watertight = edges.is_watertight();
    let consistent_winding = edges.is_consistently_wound();
    let manifold = edges.max_edge_valence() <= 2 && vertex_stars_are_disks(mesh);
    let component_count = count_components(mesh);
    let genus =
        (watertight && manifold && component_count == 1).then(|| genus_from_counts(mesh, &edges));
    PrintabilityReport {
        watertight,
        manifold,
        consistent_winding,
        genus,
        component_count,
    }
}

/// Genus from V - E + F = 2 - 2g. Requires a closed, manifold, connected mesh.
pub fn euler_genus(mesh: &Mesh) -> Result<i64> {
    let edges = EdgeMap::build(mesh);
    if !edges.is_watertight() {
        return Err(Error::TopologyUndefined(TopologyCheck::Watertight));
    }
    if edges.max_edge_valence() > 2 || !vertex_stars_are_disks(mesh) {
        return Err(Error::TopologyUndefined(TopologyCheck::Manifold));
    }
    let components = count_components(mesh);
    if components != 1 {
        return Err(Error::TopologyUndefined(TopologyCheck::SingleComponent {
            components,
        }));
    }
    Ok(genus_from_counts(mesh, &edges))
}

/// V - E + F over referenced vertices.
pub fn euler_characteristic(mesh: &Mesh) -> i64 {
    let edges = EdgeMap::build(mesh);
    referenced_vertex_count(mesh) as i64 - edges.edge_count() as i64 + mesh.face_count() as i64
}

fn genus_from_counts(mesh: &Mesh, edges: &EdgeMap) -> i64 {
    let chi =
        referenced_vertex_count(mesh) as i64 - edges.edge_count() as i64 + mesh.face_count() as i64;
    (2 - chi) / 2
}

fn referenced_vertex_count(mesh: &Mesh) -> usize {
    let mut used = vec![false; mesh.vertex_count()];
    for f in mesh.faces() {
        for &v in f {
            used[v] = true;
        }
    }
    used.into_iter().filter(|u| *u).count()
}

/// Each vertex's link (the edges opposite it in its incident faces) must be
/// a single path or cycle.
fn vertex_stars_are_disks(mesh: &Mesh) -> bool {
    let mut links: Vec<Vec<(usize, usize)>> = vec![Vec::new(); mesh.vertex_count()];
    for &[a, b, c] in mesh.faces() {
        links[a].push((b, c));
        links[b].push((c, a));
        links[c].push((a, b));
    }
    links
        .iter()
        .all(|link| link.is_empty() || link_is_disk(link))
}

fn link_is_disk(link: &[(usize, usize)]) -> bool {
    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(u, v) in link {
        adjacency.entry(u).or_default().push(v);
        adjacency.entry(v).or_default().push(u);
    }
    if adjacency.values().any(|n| n.len() > 2) {
        return false;
    }
    let start = link[0].0;
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &v in &adjacency[&u] {
            if !seen.contains(&v) {
                seen.push(v);
                stack.push(v);
            }
        }
    }
    seen.len() == adjacency.len()
}

/// Connected components of the face graph (faces sharing a vertex).
pub fn count_components(mesh: &Mesh) -> usize {
    let mut parent: Vec<usize> = (0..mesh.vertex_count()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut used = vec![false; mesh.vertex_count()];
    for &[a, b, c] in mesh.faces() {
        used[a] = true;
        used[b] = true;
        used[c] = true;
        for (x, y) in [(a, b), (b, c)] {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
    }
    (0..mesh.vertex_count())
        .filter(|&v| used[v] && find(&mut parent, v) == v)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{apply_transform, Transform};
    use crate::primitives::make_cuboid;

    #[test]
    fn cuboid_is_printable_genus_zero() {
        let r = validate_printable(&make_cuboid());
        assert!(r.watertight && r.manifold && r.consistent_winding);
        assert_eq!(r.genus, Some(0));
        assert_eq!(r.component_count, 1);
        assert_eq!(euler_genus(&make_cuboid()).unwrap(), 0);
    }

    #[test]
    fn missing_face_breaks_watertightness() {
        let cube = make_cuboid();
        let open = Mesh::new(cube.vertices().to_vec(), cube.faces()[..11].to_vec()).unwrap();
        let r = validate_printable(&open);
        assert!(!r.watertight);
        assert_eq!(r.genus, None);
        assert!(matches!(
            euler_genus(&open),
            Err(Error::TopologyUndefined(TopologyCheck::Watertight))
        ));
    }

    #[test]
    fn two_cubes_are_two_components() {
        let cube = make_cuboid();
        let other = apply_transform(&cube, &Transform::translation([2.0, 0.0, 0.0])).unwrap();
        let both = cube.concat(&other);
        let r = validate_printable(&both);
        assert!(r.watertight && r.manifold);
        assert_eq!(r.component_count, 2);
        assert_eq!(r.genus, None);
        assert!(matches!(
            euler_genus(&both),
            Err(Error::TopologyUndefined(TopologyCheck::SingleComponent {
                components: 2
            }))
        ));
    }

    #[test]
    fn flipped_face_breaks_winding_only() {
        let cube = make_cuboid();
        let mut faces = cube.faces().to_vec();
        faces[0] = [faces[0][0], faces[0][2], faces[0][1]];
        let m = Mesh::new(cube.vertices().to_vec(), faces).unwrap();
        let r = validate_printable(&m);
        assert!(r.watertight);
        assert!(!r.consistent_winding);
    }

    #[test]
    fn cubes_sharing_a_vertex_are_not_manifold() {
        // Two cubes touching at a single corner, welded into one vertex.
        let cube = make_cuboid();
        let other = apply_transform(&cube, &Transform::translation([1.0, 1.0, 1.0])).unwrap();
        let joined = crate::mesh::weld(&cube.concat(&other), 1e-9);
        assert_eq!(joined.vertex_count(), 15);
        let r = validate_printable(&joined);
        assert!(r.watertight);
        assert!(!r.manifold);
        assert!(matches!(
            euler_genus(&joined),
            Err(Error::TopologyUndefined(TopologyCheck::Manifold))
        ));
    }
}
