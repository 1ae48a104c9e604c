//! Shared fixtures: axis-aligned boxes with analytic membership, the chair
//! transform table, and seeded random box pairs.
#![allow(dead_code)]

use meshforge::mesh::{apply_transform, Transform};
use meshforge::primitives::make_cuboid;
use meshforge::Mesh;
use rand::Rng;

/// The nine cuboid transforms of the chair (position, scale); rotations are zero.
pub const CHAIR_TRS: [([f64; 3], [f64; 3]); 9] = [
    ([0.0, 0.044, 0.4], [0.1, 0.1, 0.01]),
    ([0.0, 0.0, 0.355], [0.1, 0.012, 0.1]),
    ([-0.03, -0.034, 0.386], [0.015, 0.07, 0.015]),
    ([-0.03, -0.034, 0.326], [0.015, 0.07, 0.015]),
    ([0.03, -0.034, 0.326], [0.015, 0.07, 0.015]),
    ([0.03, -0.034, 0.386], [0.015, 0.07, 0.015]),
    ([-0.045, 0.017, 0.3525], [0.01, 0.035, 0.095]),
    ([0.045, 0.017, 0.3525], [0.01, 0.035, 0.095]),
    ([0.0, 0.0175, 0.3525], [0.12, 0.018, 0.07]),
];

#[derive(Debug, Clone, Copy)]
pub struct Box3 {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Box3 {
    pub fn from_trs(pos: [f64; 3], scale: [f64; 3]) -> Self {
        Self {
            min: [0, 1, 2].map(|i| pos[i] - scale[i] / 2.0),
            max: [0, 1, 2].map(|i| pos[i] + scale[i] / 2.0),
        }
    }

    pub fn center(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| (self.min[i] + self.max[i]) / 2.0)
    }

    pub fn size(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.max[i] - self.min[i])
    }

    pub fn volume(&self) -> f64 {
        self.size().iter().product()
    }

    pub fn mesh(&self) -> Mesh {
        apply_transform(
            &make_cuboid(),
            &Transform::new(self.center(), [0.0; 3], self.size()),
        )
        .unwrap()
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    pub fn hull(&self, o: &Box3) -> Box3 {
        Box3 {
            min: [0, 1, 2].map(|i| self.min[i].min(o.min[i])),
            max: [0, 1, 2].map(|i| self.max[i].max(o.max[i])),
        }
    }

    /// Intersection box; may be inverted (negative size) when disjoint.
    pub fn meet(&self, o: &Box3) -> Box3 {
        Box3 {
            min: [0, 1, 2].map(|i| self.min[i].max(o.min[i])),
            max: [0, 1, 2].map(|i| self.max[i].min(o.max[i])),
        }
    }

    pub fn overlap_volume(&self, o: &Box3) -> f64 {
        self.meet(o).size().iter().map(|s| s.max(0.0)).product()
    }
}

pub fn chair_boxes() -> Vec<Box3> {
    CHAIR_TRS
        .iter()
        .map(|&(p, s)| Box3::from_trs(p, s))
        .collect()
}

/// Centers uniform in [-0.5, 0.5]^3, side lengths uniform in [0.25, 1].
pub fn random_box(rng: &mut impl Rng) -> Box3 {
    let c: [f64; 3] = [0, 1, 2].map(|_| rng.gen_range(-0.5..0.5));
    let s: [f64; 3] = [0, 1, 2].map(|_| rng.gen_range(0.25..1.0));
    Box3::from_trs(c, s)
}

pub fn random_box_pair(rng: &mut impl Rng) -> (Box3, Box3) {
    (random_box(rng), random_box(rng))
}
