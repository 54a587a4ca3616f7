//! Worked examples through the public API.

use std::f64::consts::PI;

use heatimages_core::asympt::expansion;
use heatimages_core::kernel::{peak, DEFAULT_EPSILON};
use heatimages_core::*;

fn sorted_images(set: &ImageSet) -> Vec<(Vec<f64>, i32)> {
    let mut v: Vec<(Vec<f64>, i32)> = set.entries.iter().map(|e| (e.point.clone(), e.sign)).collect();
    v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    v
}

#[test]
fn interval_images() {
    let d = DomainDescriptor::interval(1.0).unwrap();
    // −2.3 sits 2.6 away from the base point.
    let set = enumerate_images(&d, &[0.3], 2.6).unwrap();
    let got = sorted_images(&set);
    let want = [(-2.3, -1), (-1.7, 1), (-0.3, -1), (0.3, 1), (1.7, -1), (2.3, 1)];
    assert_eq!(got.len(), want.len());
    for ((p, s), (wp, ws)) in got.iter().zip(want) {
        assert!((p[0] - wp).abs() < 1e-12);
        assert_eq!(*s, ws);
    }
}

#[test]
fn quarter_plane_images() {
    let d = DomainDescriptor::wedge(2).unwrap();
    let set = enumerate_images(&d, &[0.3, 0.4], 10.0).unwrap();
    let got = sorted_images(&set);
    let want = [
        (vec![-0.3, -0.4], 1),
        (vec![-0.3, 0.4], -1),
        (vec![0.3, -0.4], -1),
        (vec![0.3, 0.4], 1),
    ];
    assert_eq!(got.len(), 4);
    for ((p, s), (wp, ws)) in got.iter().zip(want) {
        assert!(p.iter().zip(&wp).all(|(a, b)| (a - b).abs() < 1e-12));
        assert_eq!(*s, ws);
    }
}

#[test]
fn box_face_images() {
    let d = DomainDescriptor::cuboid(1.0, 1.0, 2.0).unwrap();
    let y = [0.5, 0.5, 1.0];
    let set = enumerate_images(&d, &y, 1.01).unwrap();
    let faces: Vec<_> = set.entries.iter().filter(|e| e.sign == -1).collect();
    assert_eq!(faces.len(), 4);
    // Brute force: the reflection of the centre through each face plane.
    for w in d.walls() {
        let s = w.signed_distance(&y);
        let r: Vec<f64> = y.iter().zip(&w.normal).map(|(yi, ni)| yi - 2.0 * s * ni).collect();
        let dist = ((r[0] - y[0]).powi(2) + (r[1] - y[1]).powi(2) + (r[2] - y[2]).powi(2)).sqrt();
        let found = set.entries.iter().any(|e| e.point.iter().zip(&r).all(|(a, b)| (a - b).abs() < 1e-12));
        assert_eq!(found, dist <= 1.01);
    }
    let cube = DomainDescriptor::cuboid(1.0, 1.0, 1.0).unwrap();
    let set = enumerate_images(&cube, &[0.5; 3], 1.01).unwrap();
    assert_eq!(set.entries.iter().filter(|e| e.sign == -1).count(), 6);
    assert_eq!(set.len(), 7);
}

#[test]
fn kernel_examples() {
    for (n, t) in [(1, 0.3), (2, 0.05), (3, 2.0)] {
        let x = vec![0.2; n];
        assert!((free_kernel(&x, &x, t).unwrap() - peak(t, n)).abs() < 1e-15 * peak(t, n));
    }
    let v = free_kernel(&[0.0], &[2.0], 1.0).unwrap();
    assert!((v - (-1.0f64).exp() / (2.0 * PI.sqrt())).abs() < 1e-16);

    // Interval diagonal at the midpoint against its image series.
    let d = DomainDescriptor::interval(1.0).unwrap();
    let t: f64 = 0.01;
    let y: f64 = 0.5;
    let got = diagonal_kernel(&d, &[y], t, 1e-15).unwrap();
    let mut series = 1.0;
    for n in -20i32..=20 {
        let nl = n as f64;
        series -= (-(y + nl).powi(2) / t).exp();
        if n != 0 {
            series += (-(nl * nl) / t).exp();
        }
    }
    let want = series / (4.0 * PI * t).sqrt();
    assert!((got - want).abs() < 1e-13 * peak(t, 1));

    // Wedge m = 3 on the diagonal: rotation terms minus reflection terms.
    let w = DomainDescriptor::wedge(3).unwrap();
    let (r, th) = (0.4f64, 0.3f64);
    let p = [r * th.cos(), r * th.sin()];
    let mut rot = 0.0;
    for k in 1..3 {
        rot += (-(r * r) * (k as f64 * PI / 3.0).sin().powi(2) / t).exp();
    }
    // Mirrors through the lines at angles 0, π/3 and 2π/3.
    let refl: f64 = (0..3)
        .map(|j| {
            let a = j as f64 * PI / 3.0;
            let s = -a.sin() * p[0] + a.cos() * p[1];
            (-(s * s) / t).exp()
        })
        .sum();
    let total = diagonal_kernel(&w, &p, t, 1e-15).unwrap() * 4.0 * PI * t;
    assert!((total - (1.0 + rot - refl)).abs() < 1e-12);
}

#[test]
fn reduced_norm_examples() {
    use nalgebra::DMatrix;
    let r = [0.7, -1.3];
    assert!(reduced_norm(&r, &DMatrix::identity(2, 2)).unwrap().abs() < 1e-15);
    let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
    assert!((reduced_norm(&r, &g).unwrap() - 4.0 * 1.3 * 1.3).abs() < 1e-14);
    let (m, k) = (5u32, 2u32);
    let a = 2.0 * PI * k as f64 / m as f64;
    let rot = DMatrix::from_row_slice(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()]);
    let rr = r[0] * r[0] + r[1] * r[1];
    let want = 4.0 * rr * (k as f64 * PI / m as f64).sin().powi(2);
    assert!((reduced_norm(&r, &rot).unwrap() - want).abs() < 1e-14);
}

#[test]
fn traces() {
    let q = QuadratureConfig::default();
    let rect = DomainDescriptor::rectangle(1.0, 2.0).unwrap();
    let z = partition_numeric(&rect, 0.05, &q, DEFAULT_EPSILON).unwrap();
    assert!((z - spectral_partition_box(&[1.0, 2.0], 0.05, 1e-15).unwrap()).abs() < 1e-8);

    let seg = DomainDescriptor::interval(1.0).unwrap();
    let z = partition_numeric(&seg, 0.01, &q, DEFAULT_EPSILON).unwrap();
    assert!((z - (1.0 / (2.0 * (PI * 0.01).sqrt()) - 0.5)).abs() < 1e-9);

    let tri = DomainDescriptor::triangle(3, 3, 3, 1.0).unwrap();
    let t: f64 = 0.005;
    let z = partition_numeric(&tri, t, &q, DEFAULT_EPSILON).unwrap();
    let want = 3f64.sqrt() / (16.0 * PI * t) - 3.0 / (8.0 * (PI * t).sqrt()) + 1.0 / 3.0;
    assert!((z - want).abs() < 1e-6);
}

#[test]
fn wedge_constants() {
    assert!((wedge_constant_numeric(3, 1.0, 0.01).unwrap() - 1.0 / 9.0).abs() < 1e-10);
    assert!((wedge_constant_numeric(2, 1.0, 0.01).unwrap() - 1.0 / 16.0).abs() < 1e-10);
    assert!(wedge_constant_numeric(5, 1.0, 1e8).unwrap().abs() < 1e-8);
}

#[test]
fn extrapolated_constants() {
    let q = QuadratureConfig::default();
    let ts = [0.02, 0.01, 0.005];
    let tri = DomainDescriptor::triangle(2, 4, 4, 1.0).unwrap();
    assert!((topological_extrapolate(&tri, &ts, &q, 1e-6).unwrap() - 0.375).abs() < 1e-4);
    let cube = DomainDescriptor::cuboid(1.0, 1.0, 2.0).unwrap();
    assert!((topological_extrapolate(&cube, &ts, &q, 1e-6).unwrap() + 0.125).abs() < 1e-4);
    let sq = DomainDescriptor::rectangle(1.0, 1.0).unwrap();
    assert!((topological_extrapolate(&sq, &ts, &q, 1e-6).unwrap() - 0.25).abs() < 1e-6);
}

#[test]
fn closed_forms() {
    assert!((interval_asympt(1.0, 1.0 / (4.0 * PI)).unwrap() - 0.5).abs() < 1e-14);
    assert!((corner_term(PI / 2.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
    for n in 3..=12 {
        let angle = PI - 2.0 * PI / n as f64;
        let got = corner_term_curvature(&vec![angle; n]).unwrap();
        let nf = n as f64;
        assert!((got - (nf - 1.0) / (6.0 * (nf - 2.0))).abs() < 1e-12);
    }
    assert!((wedge_constant(6).unwrap() - 35.0 / 144.0).abs() < 1e-15);
    let half: f64 = 1.0 / 16.0 + 1.0 / 9.0 + 35.0 / 144.0;
    assert!((half - 5.0 / 12.0).abs() < 1e-15);
    assert!((trihedral_constant(2).unwrap() * 8.0 + 0.125).abs() < 1e-15);
    assert!((trihedral_constant(3).unwrap() * 6.0 + 1.0 / 6.0).abs() < 1e-15);
    let r4 = 2.0 * trihedral_constant(2).unwrap() + 4.0 * trihedral_constant(4).unwrap();
    assert!((r4 + 3.0 / 16.0).abs() < 1e-15);
    let r6 = 2.0 * (trihedral_constant(2).unwrap() + trihedral_constant(3).unwrap() + trihedral_constant(6).unwrap());
    assert!((r6 + 5.0 / 24.0).abs() < 1e-15);

    let tri = DomainDescriptor::triangle(2, 3, 6, 1.0).unwrap();
    assert!((topological_constant(&tri).unwrap() - 5.0 / 12.0).abs() < 1e-14);
    let e = expansion(&DomainDescriptor::triangle(3, 3, 3, 1.0).unwrap()).unwrap();
    assert_eq!(e.to_string().chars().last(), Some('3'));
    assert!(e.to_string().ends_with("1/3"));

    for shape in TriangleShape::ALL {
        let d = DomainDescriptor::prism(shape, 1.0, 1.0).unwrap();
        let label = shape.prism_label();
        let v = prism_asympt(label, 1.0, 1.0, 0.02).unwrap();
        assert!((v - expansion(&d).unwrap().evaluate(0.02).unwrap()).abs() < 1e-12);
    }
    let e = expansion(&DomainDescriptor::prism(TriangleShape::IsoscelesRight, 1.0, 1.0).unwrap()).unwrap();
    assert!((e.coefficient(-2) + (1.0 + (2.0 + 2f64.sqrt())) / (16.0 * PI)).abs() < 1e-14);
    assert!(prism_asympt([2, 2, 5], 1.0, 1.0, 0.1).is_err());
}

#[test]
fn identity_sums() {
    for (m, s, c) in [(2, 1.0, 0.0), (3, 8.0 / 3.0, 2.0 / 3.0), (7, 16.0, 10.0), (12, 143.0 / 3.0, 110.0 / 3.0)] {
        let a = sin2_inverse_sum(m).unwrap();
        let b = cot2_sum(m).unwrap();
        assert!((a.numeric - s).abs() < 1e-12 * s.max(1.0));
        assert!((b.numeric - c).abs() < 1e-12 * c.max(1.0));
    }
}

#[test]
fn box_table_entries() {
    let table = box_contribution_table(1.0, 1.0, 1.0, 0.25).unwrap();
    let e1 = 0.842_700_792_949_714_9;
    assert!((table[0].value + e1 / (16.0 * PI)).abs() < 1e-15);
    assert!((table[0].value + 0.016_765).abs() < 1e-6);
    let t = 1e-4;
    let small = box_contribution_table(1.0, 2.0, 3.0, t).unwrap();
    assert!((small[3].value - 3.0 / (64.0 * (PI * t).sqrt())).abs() < 1e-12);
    let swapped = box_contribution_table(2.0, 1.0, 3.0, 0.1).unwrap();
    let plain = box_contribution_table(1.0, 2.0, 3.0, 0.1).unwrap();
    assert_eq!(plain[0].value, swapped[1].value);
    assert_eq!(plain[1].value, swapped[0].value);
}

#[test]
fn spectral_examples() {
    let v = spectral_partition_box(&[1.0], 1.0, 1e-17).unwrap();
    assert!((v - (-PI * PI).exp()).abs() < 1e-17);
    let v = spectral_partition_box(&[1.0], 0.01, 1e-15).unwrap();
    assert!((v - interval_asympt(1.0, 0.01).unwrap()).abs() < 1e-12);
}

#[test]
fn catalogue_json() {
    let spec: DomainSpec = serde_json::from_str(r#"{"kind":"Rectangle","params":{"a":1,"b":2}}"#).unwrap();
    let d = spec.build().unwrap();
    assert_eq!(d.box_edges(), Some(vec![1.0, 2.0]));
    let spec: DomainSpec =
        serde_json::from_str(r#"{"kind":"Triangle","params":{"p":2,"q":3,"r":6,"a":1}}"#).unwrap();
    assert_eq!(spec.build().unwrap().kind(), DomainKind::Triangle);
    let bad: DomainSpec = serde_json::from_str(r#"{"kind":"Triangle","params":{"p":3,"q":3,"r":4,"a":1}}"#).unwrap();
    assert!(matches!(bad.build(), Err(Error::InadmissibleAngles { .. })));
    assert!(serde_json::from_str::<DomainSpec>(r#"{"kind":"Blob"}"#).is_err());
}
