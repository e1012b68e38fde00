#![allow(dead_code)]

use g4_core::{Curve, Domain, GalileanMotion, HelixFamily, Params};
use rand::Rng;

/// Central finite-difference estimate of the k-th derivative (k = 1..=4).
pub fn central_diff(f: &dyn Fn(f64) -> f64, x: f64, k: usize, h: f64) -> f64 {
    match k {
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => {
            (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h.powi(3))
        }
        4 => {
            (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h))
                / h.powi(4)
        }
        _ => panic!("unsupported order {k}"),
    }
}

/// Richardson extrapolation of [`central_diff`], starting at `h0` and halving `levels` times.
pub fn richardson(f: &dyn Fn(f64) -> f64, x: f64, k: usize, h0: f64, levels: usize) -> f64 {
    let mut table: Vec<f64> = (0..=levels)
        .map(|i| central_diff(f, x, k, h0 / 2f64.powi(i as i32)))
        .collect();
    for m in 1..=levels {
        let factor = 4f64.powi(m as i32);
        table = table
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
    }
    table[0]
}

pub fn fd_derivative(f: &dyn Fn(f64) -> f64, x: f64, k: usize) -> f64 {
    richardson(f, x, k, 0.1, 3)
}

pub fn random_unit(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n: f64 = v.iter().map(|c: &f64| c * c).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|c| c / n);
        }
    }
}

pub fn random_motion(rng: &mut impl Rng) -> GalileanMotion {
    let u = random_unit(rng);
    let pi = std::f64::consts::PI;
    GalileanMotion::new(
        rng.gen_range(-pi..pi),
        rng.gen_range(-pi..pi),
        rng.gen_range(0.0..pi),
        rng.gen_range(-3.0..3.0),
        u[0].acos(),
        u[1].acos(),
        u[2].acos(),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
    )
    .expect("unit direction")
}

pub fn helix(a: f64, p: f64, q: f64, samples: usize) -> Curve {
    HelixFamily::new(a, p, q)
        .unwrap()
        .curve(Domain::new(0.0, std::f64::consts::TAU, samples).unwrap())
}

/// Polynomial curves that are special Frenet curves on [-1, 1].
pub fn polynomial_curves(samples: usize) -> Vec<Curve> {
    let d = Domain::new(-1.0, 1.0, samples).unwrap();
    [
        ("poly-a", "s^2/2", "s^3/6", "s^4/24"),
        ("poly-b", "s^2 + s", "s^3/3 - s", "s^2/2 + s^4/12"),
        ("poly-c", "s^3/6 + s^2/2", "s^2/2 - s^4/24", "s^3/6"),
    ]
    .into_iter()
    .map(|(name, y, z, w)| Curve::parse(name, y, z, w, Params::new(), d).unwrap())
    .collect()
}

/// HelixFamily(1,1,1), HelixFamily(2,1,3) and the three polynomial curves.
pub fn test_corpus(samples: usize) -> Vec<Curve> {
    let mut v = vec![helix(1.0, 1.0, 1.0, samples), helix(2.0, 1.0, 3.0, samples)];
    v.extend(polynomial_curves(samples));
    v
}
