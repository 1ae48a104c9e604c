use meshforge::deform::DisplacementField;
use meshforge::io::{parse_obj, parse_stl};
use meshforge::mesh::{apply_transform, bounding_dimensions, resize_to, signed_volume, Transform};
use meshforge::primitives::{make_cuboid, make_cylinder, make_ellipsoid};
use meshforge::script::parse_script;
use meshforge::voxel::{iou, voxelize, Frame, VoxelGrid};
use meshforge::Mesh;
use proptest::prelude::*;

fn primitive() -> impl Strategy<Value = Mesh> {
    prop_oneof![
        Just(make_cuboid()),
        (3usize..12, 3usize..16).prop_map(|(st, se)| make_ellipsoid(st, se).unwrap()),
        (3usize..24).prop_map(|s| make_cylinder(s).unwrap()),
    ]
}

fn vec3(lo: f64, hi: f64) -> impl Strategy<Value = [f64; 3]> {
    [lo..hi, lo..hi, lo..hi]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_keeps_topology(
        m in primitive(),
        pos in vec3(-5.0, 5.0),
        rot in vec3(-180.0, 180.0),
        scale in vec3(0.1, 3.0),
    ) {
        let t = apply_transform(&m, &Transform::new(pos, rot, scale)).unwrap();
        prop_assert_eq!(t.vertex_count(), m.vertex_count());
        prop_assert_eq!(t.faces(), m.faces());
        let expected = signed_volume(&m).unwrap() * scale.iter().product::<f64>();
        prop_assert!((signed_volume(&t).unwrap() - expected).abs() <= 1e-9 * expected.abs().max(1.0));
    }

    #[test]
    fn flipping_negates_volume(m in primitive()) {
        let v = signed_volume(&m).unwrap();
        let f = signed_volume(&m.flipped()).unwrap();
        prop_assert!((v + f).abs() <= 1e-12);
        prop_assert!(v > 0.0);
    }

    #[test]
    fn resize_to_hits_target(m in primitive(), target in vec3(1e-3, 10.0)) {
        let r = resize_to(&m, target).unwrap();
        let (d, _) = bounding_dimensions(&r).unwrap();
        for i in 0..3 {
            prop_assert!((d[i] - target[i]).abs() <= 1e-9 * target[i]);
        }
        prop_assert!(r.shares_faces_with(&m));
    }

    #[test]
    fn iou_is_symmetric_and_bounded(
        ca in vec3(-0.5, 0.5), sa in vec3(0.2, 1.0),
        cb in vec3(-0.5, 0.5), sb in vec3(0.2, 1.0),
    ) {
        let a = apply_transform(&make_cuboid(), &Transform::new(ca, [0.0; 3], sa)).unwrap();
        let b = apply_transform(&make_cuboid(), &Transform::new(cb, [0.0; 3], sb)).unwrap();
        let frame = bounding_dimensions(&a).unwrap().1.union(&bounding_dimensions(&b).unwrap().1);
        let ga = voxelize(&a, 16, Frame::Shared(frame)).unwrap();
        let gb = voxelize(&b, 16, Frame::Shared(frame)).unwrap();
        let ab = iou(&ga, &gb).unwrap();
        prop_assert_eq!(ab.to_bits(), iou(&gb, &ga).unwrap().to_bits());
        prop_assert!((0.0..=1.0).contains(&ab));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn text_parsers_never_panic(s in "\\PC{0,200}") {
        let _ = parse_obj(&s);
        let _ = parse_stl(s.as_bytes());
        let _ = parse_script(&s);
        let _ = VoxelGrid::parse_vox(&s);
        let _ = DisplacementField::parse(&s);
    }

    #[test]
    fn line_shaped_input_never_panics(
        lines in prop::collection::vec(
            prop_oneof![
                "v( -?[0-9]{1,2}(\\.[0-9])?){0,4}",
                "f( -?[0-9]{1,2}(/[0-9]?){0,2}){0,5}",
                "(cube|sphere|add|subtract|resize|export|match|select) [a-c0-9 .]{0,20}",
                "(dims|origin|cell|MFVOX)( [0-9.e-]{1,4}){0,3}",
                "[0-9a-f]{0,64}",
            ],
            0..20,
        )
    ) {
        let text = lines.join("\n");
        let _ = parse_obj(&text);
        let _ = parse_script(&text);
        let _ = VoxelGrid::parse_vox(&text);
    }

    #[test]
    fn binary_stl_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
        let _ = parse_stl(&bytes);
        let mut framed = vec![0u8; 80];
        framed.extend_from_slice(&2u32.to_le_bytes());
        framed.extend_from_slice(&bytes);
        let _ = parse_stl(&framed);
    }
}
