//! The nine-cuboid chair built directly through the library API.

mod common;

use meshforge::csg::union;
use meshforge::mesh::{bounding_dimensions, resize, signed_volume, weld};
use meshforge::topology::validate_printable;
use meshforge::Mesh;

use common::{chair_boxes, Box3};

fn chair() -> Mesh {
    chair_boxes()
        .iter()
        .map(Box3::mesh)
        .reduce(|acc, m| union(&acc, &m).unwrap())
        .unwrap()
}

#[test]
fn aabb_matches_per_box_oracle() {
    let boxes = chair_boxes();
    let hull = boxes.iter().skip(1).fold(boxes[0], |h, b| h.hull(b));
    let expected = hull.size();
    // Hand arithmetic on the table gives the same numbers.
    for (e, h) in expected.iter().zip([0.120, 0.163, 0.100]) {
        assert!((e - h).abs() < 1e-12);
    }
    let (dims, _) = bounding_dimensions(&chair()).unwrap();
    for i in 0..3 {
        assert!((dims[i] - expected[i]).abs() <= 1e-6, "{dims:?}");
    }
}

#[test]
fn chair_is_printable_and_connected() {
    let m = weld(&chair(), 1e-7);
    let r = validate_printable(&m);
    assert!(r.is_printable(), "{r}");
    assert_eq!(r.component_count, 1);
}

#[test]
fn chair_doubles_under_resize() {
    let big = resize(&chair(), [2.0; 3]).unwrap();
    let (d, _) = bounding_dimensions(&big).unwrap();
    for (got, want) in d.iter().zip([0.240, 0.326, 0.200]) {
        assert!((got - want).abs() < 1e-9, "{d:?}");
    }
    let v = signed_volume(&chair()).unwrap();
    assert!((signed_volume(&big).unwrap() - 8.0 * v).abs() < 1e-12);
}

#[test]
fn fold_order_does_not_change_the_solid() {
    let forward = chair();
    let backward = chair_boxes()
        .iter()
        .rev()
        .map(Box3::mesh)
        .reduce(|acc, m| union(&acc, &m).unwrap())
        .unwrap();
    let (vf, vb) = (
        signed_volume(&forward).unwrap(),
        signed_volume(&backward).unwrap(),
    );
    assert!((vf - vb).abs() <= 1e-6 * vf);
    assert_eq!(
        bounding_dimensions(&forward).unwrap().1,
        bounding_dimensions(&backward).unwrap().1
    );
}
