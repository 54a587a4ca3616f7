//! Cross-checks against oracles computed independently in this file.

use std::f64::consts::PI;

use heatimages_core::asympt::expansion;
use heatimages_core::kernel::DEFAULT_EPSILON;
use heatimages_core::*;

/// Dirichlet spectrum of the equilateral triangle of side a:
/// λ = 16π²/(9a²)·(m² + mn + n²), m, n ≥ 1.
fn equilateral_trace(a: f64, t: f64) -> f64 {
    let c = 16.0 * PI * PI / (9.0 * a * a) * t;
    let mut sum = 0.0;
    for m in (1..400).rev() {
        for n in (1..400).rev() {
            let (m, n) = (m as f64, n as f64);
            sum += (-c * (m * m + m * n + n * n)).exp();
        }
    }
    sum
}

#[test]
fn equilateral_spectrum() {
    let q = QuadratureConfig::default();
    for (a, t) in [(1.0, 0.005), (1.0, 0.02), (1.5, 0.05)] {
        let d = DomainDescriptor::triangle(3, 3, 3, a).unwrap();
        let z = partition_numeric(&d, t, &q, DEFAULT_EPSILON).unwrap();
        let want = equilateral_trace(a, t);
        assert!((z - want).abs() < 1e-9 * want, "a={a} t={t}: {z} vs {want}");
    }
}

#[test]
fn box_double_sum() {
    let (a, b, c, t) = (1.0, 1.0, 2.0, 0.04);
    let mut direct = 0.0;
    for i in (1..60).rev() {
        for j in (1..60).rev() {
            for k in (1..120).rev() {
                let (i, j, k) = (i as f64, j as f64, k as f64);
                direct += (-PI * PI * t * (i * i / (a * a) + j * j / (b * b) + k * k / (c * c))).exp();
            }
        }
    }
    let s = spectral_partition_box(&[a, b, c], t, 1e-15).unwrap();
    assert!((s - direct).abs() < 1e-12 * direct);
    let d = DomainDescriptor::cuboid(a, b, c).unwrap();
    let z = partition_numeric(&d, t, &QuadratureConfig::default(), DEFAULT_EPSILON).unwrap();
    assert!((z - direct).abs() < 1e-9 * direct);
}

/// Series for small x, Lentz continued fraction for erfc beyond.
fn erf_oracle(x: f64) -> f64 {
    if x < 0.0 {
        return -erf_oracle(-x);
    }
    if x < 2.5 {
        let mut term = x;
        let mut sum = x;
        for n in 1..200 {
            term *= -x * x / n as f64;
            let add = term / (2 * n + 1) as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return 2.0 / PI.sqrt() * sum;
    }
    // erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
    let mut f = x;
    for k in (1..200).rev() {
        f = x + (k as f64 / 2.0) / f;
    }
    1.0 - (-x * x).exp() / (PI.sqrt() * f)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn erf_identities_against_quadrature() {
    for (a, b) in [(1.0, 1.0), (1.0, 2f64.sqrt()), (0.3, 2.0), (2.0, 2.5), (5.0, 0.7)] {
        let ids = erf_integral_identities(a, b).unwrap();
        let upper = 9.0 / b;
        let first = simpson(|x| erf_oracle(a * x) * (-b * b * x * x).exp(), 0.0, upper, 40_000);
        assert!((ids.first - first).abs() < 1e-10, "a={a} b={b}: {} vs {first}", ids.first);
        let second = simpson(|x| x * erf_oracle(a * x) * (-b * b * x * x).exp(), 0.0, upper, 40_000);
        match ids.second {
            Ok(v) => {
                assert!(b * b > a * a);
                assert!((v - second).abs() < 1e-10, "a={a} b={b}: {v} vs {second}");
            }
            Err(e) => {
                assert!(b * b <= a * a);
                assert!(matches!(e, Error::DomainViolation(_)));
            }
        }
    }
    let one = erf_integral_identities(1.0, 1.0).unwrap().first;
    assert!((one - PI.sqrt() / 4.0).abs() < 1e-15);
    assert!((one - 0.443_113).abs() < 1e-6);
    let two = erf_integral_identities(1.0, 2f64.sqrt()).unwrap().second.unwrap();
    assert!((two - 1.0 / (4.0 * 3f64.sqrt())).abs() < 1e-15);
    let far = erf_integral_identities(1e9, 2.0).unwrap().first;
    assert!((far - PI.sqrt() / 4.0).abs() < 1e-9);
}

#[test]
fn erf_matches_oracle() {
    // The series loses a few digits to cancellation near x = 2.5.
    for i in 0..=600 {
        let x = i as f64 / 100.0 - 1.0;
        assert!((heatimages_core::numeric::erf(x) - erf_oracle(x)).abs() < 1e-13, "x={x}");
    }
}

#[test]
fn box_table_octant_quadrature() {
    // The R_a1 entry of the table is the integral of −(4πt)^(−3/2)e^(−x²/t)
    // over the octant [0,a/2]×[0,b/2]×[0,c/2].
    let (a, b, c, t) = (1.0, 1.5, 0.5, 0.1);
    let table = box_contribution_table(a, b, c, t).unwrap();
    let gx = simpson(|x| (-x * x / t).exp(), 0.0, a / 2.0, 4000);
    let want = -(b / 2.0) * (c / 2.0) * gx / (4.0 * PI * t).powf(1.5);
    assert!((table[0].value - want).abs() < 1e-13);
    // Rotation R_a1·R_a2: e^(−(x²+y²)/t) integrated over x, y; free along z.
    let gy = simpson(|y| (-y * y / t).exp(), 0.0, b / 2.0, 4000);
    let want = (c / 2.0) * gx * gy / (4.0 * PI * t).powf(1.5);
    assert!((table[3].value - want).abs() < 1e-13);
}

/// The widely quoted closed form of the (2,2,3) prism trace.
fn quoted_prism_223(a: f64, c: f64, t: f64) -> [f64; 4] {
    let s3 = 3f64.sqrt();
    [
        s3 * a * a * c / (4.0 * (4.0 * PI * t).powf(1.5)),
        -a * (a * s3 / 2.0 + 3.0 * c) / (16.0 * PI * t),
        3.0 * (2.0 * a + c) / (32.0 * (PI * t).sqrt()),
        -1.0 / 6.0,
    ]
}

#[test]
fn prism_expansion_against_quoted_form() {
    let (a, c, t) = (1.0, 0.7, 0.02);
    let d = DomainDescriptor::prism(TriangleShape::Equilateral, a, c).unwrap();
    let e = expansion(&d).unwrap();
    let quoted = quoted_prism_223(a, c, t);
    let ours = [-3, -2, -1, 0].map(|k| e.coefficient(k) * t.powf(k as f64 / 2.0));
    assert!((ours[0] - quoted[0]).abs() < 1e-12 * quoted[0].abs());
    assert!((ours[1] - quoted[1]).abs() < 1e-12 * quoted[1].abs());
    assert!((ours[3] - quoted[3]).abs() < 1e-15);
    // Edge term: six base edges at π/2 (1/16 each) and three vertical edges
    // at π/3 (1/9 each), divided by 2√π.
    let edge = (6.0 * a / 16.0 + 3.0 * c / 9.0) / (2.0 * (PI * t).sqrt());
    assert!((ours[2] - edge).abs() < 1e-12 * edge);
    // The quoted vertical-edge weight 3/32 disagrees with 1/6 and with the
    // numerical trace; only the base-edge part 6a/32 agrees.
    let z = partition_numeric(&d, t, &QuadratureConfig::default(), DEFAULT_EPSILON).unwrap();
    let ours_total: f64 = ours.iter().sum();
    let quoted_total: f64 = quoted.iter().sum();
    assert!((z - ours_total).abs() < 1e-8);
    let gap = (z - quoted_total).abs();
    let predicted = (c / 6.0 - 3.0 * c / 32.0) / (PI * t).sqrt();
    assert!((gap - predicted).abs() < 1e-8, "gap {gap} predicted {predicted}");
}
