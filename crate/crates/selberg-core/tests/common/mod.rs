//! Reference values computed without the library: real Gauss series, Beta via statrs,
//! and the displayed two-variable and D-type connection matrices.

#![allow(dead_code)]

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

pub fn s(x: f64) -> f64 {
    (PI * x).sin()
}

pub fn beta(x: f64, y: f64) -> f64 {
    gamma(x) * gamma(y) / gamma(x + y)
}

/// Gauss series for `|x| ≤ 0.95`; Pfaff's transform when `x < −1/2`.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> f64 {
    if x < -0.5 {
        return (1.0 - x).powf(-a) * hyp2f1(a, c - b, c, x / (x - 1.0));
    }
    assert!(x.abs() <= 0.95, "series argument {x} too large");
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 0..20000 {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `[F, F′, F″]` of `₂F₁(a, b; c; x)` by differentiating the series.
pub fn hyp2f1_derivs(a: f64, b: f64, c: f64, x: f64) -> [f64; 3] {
    [
        hyp2f1(a, b, c, x),
        a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, x),
        a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0)) * hyp2f1(a + 2.0, b + 2.0, c + 2.0, x),
    ]
}

/// One-variable basis functions as Beta times a Gauss function.
pub fn m1_i(j: usize, a: f64, b: f64, c: f64, z: f64) -> f64 {
    let l = -a - b - c - 1.0;
    match j {
        0 => beta(b + 1.0, l) * hyp2f1(-c, l, -a - c, z),
        _ => {
            beta(a + 1.0, c + 1.0) * z.abs().powf(a + c + 1.0) * hyp2f1(-b, a + 1.0, a + c + 2.0, z)
        }
    }
}

pub fn m1_j(j: usize, a: f64, b: f64, c: f64, z: f64) -> f64 {
    let l = -a - b - c - 1.0;
    match j {
        0 => beta(a + 1.0, l) * hyp2f1(-c, l, -b - c, 1.0 - z),
        _ => {
            beta(b + 1.0, c + 1.0)
                * (1.0 - z).powf(b + c + 1.0)
                * hyp2f1(-a, b + 1.0, b + c + 2.0, 1.0 - z)
        }
    }
}

pub fn m1_k(j: usize, a: f64, b: f64, c: f64, z: f64) -> f64 {
    let l = -a - b - c - 1.0;
    let w = -1.0 / z;
    match j {
        0 => beta(c + 1.0, l) * w.powf(l) * hyp2f1(-b, l, -a - b, 1.0 / z),
        _ => beta(a + 1.0, b + 1.0) * w.powf(-c) * hyp2f1(-c, a + 1.0, a + b + 2.0, 1.0 / z),
    }
}

/// `(I_0, I_1)` as a function of `z` for `0 < z < 1`: values and first two derivatives.
pub fn m1_i_derivs(j: usize, a: f64, b: f64, c: f64, z: f64) -> [f64; 3] {
    let l = -a - b - c - 1.0;
    match j {
        0 => hyp2f1_derivs(-c, l, -a - c, z).map(|d| beta(b + 1.0, l) * d),
        _ => {
            let e = a + c + 1.0;
            let [f, f1, f2] = hyp2f1_derivs(-b, a + 1.0, a + c + 2.0, z);
            let (u, u1, u2) = (
                z.powf(e),
                e * z.powf(e - 1.0),
                e * (e - 1.0) * z.powf(e - 2.0),
            );
            let k = beta(a + 1.0, c + 1.0);
            [
                k * u * f,
                k * (u1 * f + u * f1),
                k * (u2 * f + 2.0 * u1 * f1 + u * f2),
            ]
        }
    }
}

/// Closed-form two-variable matrix on `0 < z < 1`, with the second printed form of the
/// middle entry returned separately.
pub fn explicit_m2(a: f64, b: f64, c: f64, g: f64) -> ([[f64; 3]; 3], f64) {
    let h = g / 2.0;
    let (bc, abc) = (b + c, a + b + c);
    let p11_alt =
        s(c) * s(abc + h) / (s(bc) * s(bc + h)) - s(a) * s(b + h) / (s(bc + g) * s(bc + h));
    (
        [
            [
                s(a) * s(a + h) / (s(bc) * s(bc + h)),
                -s(a) * s(c) / (s(bc) * s(bc + g)),
                s(c) * s(c + h) / (s(bc + g) * s(bc + h)),
            ],
            [
                -s(a + h) * s(abc + h) * s(g) / (s(bc) * s(bc + h) * s(h)),
                -s(b) * s(a + h) / (s(bc) * s(bc + h))
                    + s(abc + g) * s(c + h) / (s(bc + g) * s(bc + h)),
                s(b + h) * s(c + h) * s(g) / (s(bc + g) * s(bc + h) * s(h)),
            ],
            [
                s(abc + h) * s(abc + g) / (s(bc) * s(bc + h)),
                s(b) * s(abc + g) / (s(bc) * s(bc + g)),
                s(b + h) * s(b) / (s(bc + g) * s(bc + h)),
            ],
        ],
        p11_alt,
    )
}

/// One-variable matrix `I_i = Σ p_ij J_j`, from the Gauss connection formula.
pub fn explicit_m1(a: f64, b: f64, c: f64) -> [[f64; 2]; 2] {
    [
        [s(a) / s(b + c), -s(c) / s(b + c)],
        [-s(a + b + c) / s(b + c), -s(b) / s(b + c)],
    ]
}

pub fn dtype_rho1() -> [[f64; 3]; 3] {
    let h = s(1.0 / 6.0);
    [[h, -1.0, h], [-h, 0.0, h], [h, 1.0, h]]
}

pub fn dtype_rho2() -> [[f64; 5]; 5] {
    let r5 = 5f64.sqrt();
    let (p, n) = ((r5 - 1.0) / 4.0, (-r5 - 1.0) / 4.0);
    [
        [p, n, 1.0, n, p],
        [-p, 0.5, 0.0, -0.5, p],
        [p, 0.0, (1.0 - r5) / 2.0, 0.0, p],
        [-p, -0.5, 0.0, 0.5, p],
        [p, -n, 1.0, -n, p],
    ]
}
