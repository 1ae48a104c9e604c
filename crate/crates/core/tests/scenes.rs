mod common;

use common::{chair_boxes, Box3, CHAIR_TRS};
use meshforge::csg::{intersection, union};
use meshforge::io::{parse_obj, parse_stl};
use meshforge::mesh::{apply_transform, bounding_dimensions, signed_volume, weld, Transform};
use meshforge::primitives::make_cuboid;
use meshforge::script::{run_script, scenes};
use meshforge::topology::{euler_genus, validate_printable};

#[test]
fn chair_scene_dimensions_and_printability() {
    let r = run_script(scenes::CHAIR, None).unwrap();
    assert_eq!(r.output.as_deref(), Some("chair"));
    let hull = chair_boxes()
        .iter()
        .skip(1)
        .fold(chair_boxes()[0], |h, b| h.hull(b));
    let expected = hull.size();
    let (d, _) = bounding_dimensions(r.output_mesh().unwrap()).unwrap();
    for i in 0..3 {
        assert!(
            (d[i] - expected[i]).abs() <= 1e-6,
            "axis {i}: {} vs {}",
            d[i],
            expected[i]
        );
    }
    assert_eq!(r.text(), "chair: 0.120000 0.163000 0.100000\n");

    let exported = std::str::from_utf8(&r.exports[0].bytes).unwrap();
    let m = parse_obj(exported).unwrap();
    assert!(validate_printable(&m).is_printable());
    let (d, _) = bounding_dimensions(&m).unwrap();
    assert!((0..3).all(|i| (d[i] - expected[i]).abs() <= 1e-6));
}

#[test]
fn chair_scene_equals_programmatic_fold() {
    let r = run_script(scenes::CHAIR, None).unwrap();
    let cubes: Vec<_> = CHAIR_TRS
        .iter()
        .map(|(p, s)| apply_transform(&make_cuboid(), &Transform::new(*p, [0.0; 3], *s)).unwrap())
        .collect();
    let folded = cubes[1..]
        .iter()
        .try_fold(cubes[0].clone(), |acc, c| union(&acc, c))
        .unwrap();
    let out = r.output_mesh().unwrap();
    assert_eq!(out.vertices(), folded.vertices());
    assert_eq!(out.faces(), folded.faces());
}

#[test]
fn subtract_scene_volume_identity() {
    let r = run_script(scenes::SUBTRACT, None).unwrap();
    let a = &r.objects["block"];
    let b = &r.objects["tool"];
    let notched = &r.objects["notched"];
    assert!(validate_printable(notched).is_printable());
    let expected = signed_volume(a).unwrap() - signed_volume(&intersection(a, b).unwrap()).unwrap();
    assert!((signed_volume(notched).unwrap() - expected).abs() <= 1e-6);
    let analytic = Box3::from_trs([0.0; 3], [0.2, 0.1, 0.1]).volume()
        - Box3::from_trs([0.0; 3], [0.2, 0.1, 0.1])
            .overlap_volume(&Box3::from_trs([0.1, 0.05, 0.0], [0.1, 0.1, 0.2]));
    assert!((signed_volume(notched).unwrap() - analytic).abs() <= 1e-9);

    let stl = weld(&parse_stl(&r.exports[0].bytes).unwrap(), 1e-7);
    assert!(validate_printable(&stl).watertight);
}

#[test]
fn ring_scene_has_one_handle() {
    let r = run_script(scenes::RING, None).unwrap();
    assert_eq!(euler_genus(r.output_mesh().unwrap()).unwrap(), 1);
}

#[test]
fn replay_is_byte_identical() {
    for scene in [scenes::CHAIR, scenes::SUBTRACT, scenes::RING] {
        let a = run_script(scene, None).unwrap();
        let b = run_script(scene, None).unwrap();
        assert_eq!(a.exports, b.exports);
        assert_eq!(a.text(), b.text());
    }
}
