//! BSP tree over convex polygons, used to clip one solid against another.

use nalgebra::{Point3, Vector3};

/// Vertices closer than this to a plane are treated as lying on it.
pub const PLANE_EPSILON: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: Vector3<f64>,
    pub offset: f64,
}

impl Plane {
    pub fn from_points(a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>) -> Option<Self> {
        let n = (b - a).cross(&(c - a));
        let len = n.norm();
        if !len.is_finite() || len <= 0.0 {
            return None;
        }
        let normal = n / len;
        Some(Self {
            normal,
            offset: normal.dot(&a.coords),
        })
    }

    pub fn flip(&mut self) {
        self.normal = -self.normal;
        self.offset = -self.offset;
    }

    pub fn distance(&self, p: &Point3<f64>) -> f64 {
        self.normal.dot(&p.coords) - self.offset
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Coplanar = 0,
    Front = 1,
    Back = 2,
    Spanning = 3,
}

#[derive(Debug, Clone)]
pub struct Polygon {
    pub vertices: Vec<Point3<f64>>,
    pub plane: Plane,
}

impl Polygon {
    pub fn new(vertices: Vec<Point3<f64>>) -> Option<Self> {
        let plane = Plane::from_points(&vertices[0], &vertices[1], &vertices[2])?;
        Some(Self { vertices, plane })
    }

    pub fn flip(&mut self) {
        self.vertices.reverse();
        self.plane.flip();
    }
}

/// Sorts `polygon` relative to `plane`. Coplanar pieces go to `coplanar_front`
/// or `coplanar_back` depending on whether their normal agrees with the plane.
fn split_polygon(
    plane: &Plane,
    polygon: Polygon,
    coplanar_front: &mut Vec<Polygon>,
    coplanar_back: &mut Vec<Polygon>,
    front: &mut Vec<Polygon>,
    back: &mut Vec<Polygon>,
) {
    let mut polygon_type = 0u8;
    let types: Vec<Side> = polygon
        .vertices
        .iter()
        .map(|v| {
            let t = plane.distance(v);
            let side = if t < -PLANE_EPSILON {
                Side::Back
            } else if t > PLANE_EPSILON {
                Side::Front
            } else {
                Side::Coplanar
            };
            polygon_type |= side as u8;
            side
        })
        .collect();

    match polygon_type {
        0 => {
            if plane.normal.dot(&polygon.plane.normal) > 0.0 {
                coplanar_front.push(polygon);
            } else {
                coplanar_back.push(polygon);
            }
        }
        1 => front.push(polygon),
        2 => back.push(polygon),
        _ => {
            let n = polygon.vertices.len();
            let mut f = Vec::with_capacity(n + 1);
            let mut b = Vec::with_capacity(n + 1);
            for i in 0..n {
                let j = (i + 1) % n;
                let (ti, tj) = (types[i], types[j]);
                let (vi, vj) = (polygon.vertices[i], polygon.vertices[j]);
                if ti != Side::Back {
                    f.push(vi);
                }
                if ti != Side::Front {
                    b.push(vi);
                }
                if (ti as u8 | tj as u8) == Side::Spanning as u8 {
                    let t = (plane.offset - plane.normal.dot(&vi.coords))
                        / plane.normal.dot(&(vj - vi));
                    let v = vi + (vj - vi) * t;
                    f.push(v);
                    b.push(v);
                }
            }
            if f.len() >= 3 {
                front.push(Polygon {
                    vertices: f,
                    plane: polygon.plane,
                });
            }
            if b.len() >= 3 {
                back.push(Polygon {
                    vertices: b,
                    plane: polygon.plane,
                });
            }
        }
    }
}

/// Node of a BSP tree. The plane of the first polygon inserted splits space;
/// polygons coplanar with it are stored at the node.
#[derive(Debug, Default, Clone)]
pub struct BspNode {
    plane: Option<Plane>,
    polygons: Vec<Polygon>,
    front: Option<Box<BspNode>>,
    back: Option<Box<BspNode>>,
}

impl BspNode {
    pub fn new(polygons: Vec<Polygon>) -> Self {
        let mut node = Self::default();
        node.build(polygons);
        node
    }

    /// Converts solid space to empty space and vice versa.
    pub fn invert(&mut self) {
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            for p in &mut node.polygons {
                p.flip();
            }
            if let Some(plane) = &mut node.plane {
                plane.flip();
            }
            std::mem::swap(&mut node.front, &mut node.back);
            if let Some(f) = node.front.as_deref_mut() {
                stack.push(f);
            }
            if let Some(b) = node.back.as_deref_mut() {
                stack.push(b);
            }
        }
    }

    /// Removes the parts of `polygons` that lie inside this tree's solid.
    pub fn clip_polygons(&self, polygons: Vec<Polygon>) -> Vec<Polygon> {
        let Some(plane) = &self.plane else {
            return polygons;
        };
        let mut front = Vec::new();
        let mut back = Vec::new();
        for p in polygons {
            let mut cf = Vec::new();
            let mut cb = Vec::new();
            split_polygon(plane, p, &mut cf, &mut cb, &mut front, &mut back);
            front.append(&mut cf);
            back.append(&mut cb);
        }
        let mut front = match &self.front {
            Some(node) => node.clip_polygons(front),
            None => front,
        };
        let back = match &self.back {
            Some(node) => node.clip_polygons(back),
            None => Vec::new(),
        };
        front.extend(back);
        front
    }

    /// Removes every polygon of this tree that lies inside `other`.
    pub fn clip_to(&mut self, other: &BspNode) {
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            node.polygons = other.clip_polygons(std::mem::take(&mut node.polygons));
            if let Some(f) = node.front.as_deref_mut() {
                stack.push(f);
            }
            if let Some(b) = node.back.as_deref_mut() {
                stack.push(b);
            }
        }
    }

    pub fn all_polygons(&self) -> Vec<Polygon> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.extend(node.polygons.iter().cloned());
            if let Some(b) = node.back.as_deref() {
                stack.push(b);
            }
            if let Some(f) = node.front.as_deref() {
                stack.push(f);
            }
        }
        out
    }

    pub fn into_polygons(self) -> Vec<Polygon> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.extend(node.polygons);
            if let Some(b) = node.back {
                stack.push(*b);
            }
            if let Some(f) = node.front {
                stack.push(*f);
            }
        }
        out
    }

    pub fn build(&mut self, polygons: Vec<Polygon>) {
        if polygons.is_empty() {
            return;
        }
        let plane = *self.plane.get_or_insert(polygons[0].plane);
        let mut front = Vec::new();
        let mut back = Vec::new();
        let mut coplanar_front = Vec::new();
        let mut coplanar_back = Vec::new();
        for p in polygons {
            split_polygon(
                &plane,
                p,
                &mut coplanar_front,
                &mut coplanar_back,
                &mut front,
                &mut back,
            );
        }
        self.polygons.append(&mut coplanar_front);
        self.polygons.append(&mut coplanar_back);
        if !front.is_empty() {
            self.front.get_or_insert_with(Default::default).build(front);
        }
        if !back.is_empty() {
            self.back.get_or_insert_with(Default::default).build(back);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(z: f64) -> Polygon {
        Polygon::new(vec![
            Point3::new(0.0, 0.0, z),
            Point3::new(1.0, 0.0, z),
            Point3::new(1.0, 1.0, z),
            Point3::new(0.0, 1.0, z),
        ])
        .unwrap()
    }

    #[test]
    fn plane_normal_is_unit() {
        let p = Plane::from_points(
            &Point3::new(0.0, 0.0, 0.0),
            &Point3::new(3.0, 0.0, 0.0),
            &Point3::new(0.0, 7.0, 0.0),
        )
        .unwrap();
        assert!((p.normal.norm() - 1.0).abs() < 1e-12);
        assert_eq!(p.normal, Vector3::new(0.0, 0.0, 1.0));
        assert!(
            Plane::from_points(&Point3::origin(), &Point3::origin(), &Point3::origin()).is_none()
        );
    }

    #[test]
    fn spanning_polygon_is_split_in_two() {
        let plane = Plane {
            normal: Vector3::new(1.0, 0.0, 0.0),
            offset: 0.25,
        };
        let (mut cf, mut cb, mut f, mut b) = (vec![], vec![], vec![], vec![]);
        split_polygon(&plane, square(0.0), &mut cf, &mut cb, &mut f, &mut b);
        assert!(cf.is_empty() && cb.is_empty());
        assert_eq!((f.len(), b.len()), (1, 1));
        assert_eq!(f[0].vertices.len(), 4);
        assert!(f[0].vertices.iter().all(|v| v.x >= 0.25 - 1e-15));
        assert!(b[0].vertices.iter().all(|v| v.x <= 0.25 + 1e-15));
    }

    #[test]
    fn near_plane_vertices_count_as_coplanar() {
        let plane = Plane {
            normal: Vector3::new(0.0, 0.0, 1.0),
            offset: 0.0,
        };
        let (mut cf, mut cb, mut f, mut b) = (vec![], vec![], vec![], vec![]);
        split_polygon(
            &plane,
            square(PLANE_EPSILON / 2.0),
            &mut cf,
            &mut cb,
            &mut f,
            &mut b,
        );
        assert_eq!(cf.len(), 1);
        let mut flipped = square(0.0);
        flipped.flip();
        split_polygon(&plane, flipped, &mut cf, &mut cb, &mut f, &mut b);
        assert_eq!(cb.len(), 1);
    }

    #[test]
    fn nodes_hold_only_coplanar_polygons() {
        let node = BspNode::new(vec![square(0.0), square(1.0), square(0.0)]);
        let plane = node.plane.unwrap();
        assert_eq!(node.polygons.len(), 2);
        for p in &node.polygons {
            assert!(p
                .vertices
                .iter()
                .all(|v| plane.distance(v).abs() <= PLANE_EPSILON));
        }
    }
}
