//! Reference implementations used only by tests. Nothing here shares code
//! with the library's evaluation paths.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// Heights of the first 50 nontrivial zeros (15 significant digits, from a
/// high-precision reference). Each is also checked against a sign change of
/// the Euler-Maclaurin Hardy Z function in the oracle tests.
pub const ZERO_TABLE: [f64; 50] = [
    14.1347251417347,
    21.0220396387716,
    25.0108575801457,
    30.4248761258595,
    32.9350615877392,
    37.5861781588257,
    40.9187190121475,
    43.327073280915,
    48.0051508811672,
    49.7738324776723,
    52.9703214777145,
    56.4462476970634,
    59.3470440026024,
    60.8317785246098,
    65.1125440480816,
    67.0798105294942,
    69.546401711174,
    72.0671576744819,
    75.7046906990839,
    77.1448400688748,
    79.3373750202494,
    82.910380854086,
    84.7354929805171,
    87.4252746131252,
    88.8091112076345,
    92.4918992705585,
    94.6513440405199,
    95.8706342282453,
    98.8311942181937,
    101.317851005731,
    103.725538040478,
    105.446623052326,
    107.168611184276,
    111.02953554317,
    111.874659176993,
    114.320220915453,
    116.226680320858,
    118.790782865976,
    121.370125002421,
    122.946829293553,
    124.256818554346,
    127.516683879596,
    129.578704199956,
    131.087688530933,
    133.497737202998,
    134.756509753374,
    138.116042054533,
    139.736208952121,
    141.123707404021,
    143.111845807621,
];

// B_2j for j = 1..=10
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Euler-Maclaurin zeta with head length N = 40 + |t| and ten correction terms.
pub fn zeta_em(s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let big_n = 40 + s.im.abs().ceil() as u64;
    let nf = big_n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..big_n {
        sum += Complex64::new(k as f64, 0.0).powc(-s);
    }
    let n_pow = Complex64::new(nf, 0.0).powc(-s);
    sum += n_pow * nf / (s - one);
    sum += n_pow * 0.5;
    // rising factorial s (s+1) ... (s + 2j - 2), times N^(-s - 2j + 1) / (2j)!
    let mut rising = s;
    let mut fact = 2.0_f64;
    let mut npow = n_pow / nf;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let j = j + 1;
        sum += rising * npow * (*b / fact);
        let m = (2 * j) as f64;
        rising = rising * (s + (m - 1.0)) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        npow = npow / (nf * nf);
    }
    sum
}

/// Riemann-Siegel theta by its Stirling expansion (accurate for t > 10).
pub fn theta(t: f64) -> f64 {
    t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
}

/// Hardy's Z(t) = e^(i theta(t)) zeta(1/2 + i t), real-valued.
pub fn hardy_z(t: f64) -> f64 {
    let z = zeta_em(Complex64::new(0.5, t));
    (Complex64::from_polar(1.0, theta(t)) * z).re
}

/// Bisection on a sign change of Z inside [lo, hi].
pub fn bracket_zero(mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut zlo = hardy_z(lo);
    if zlo.signum() == hardy_z(hi).signum() {
        return None;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let zm = hardy_z(mid);
        if zm.signum() == zlo.signum() {
            lo = mid;
            zlo = zm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Central finite difference.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Deterministic 64-bit LCG mapped to [0, 1), so sampled inputs are stable.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
