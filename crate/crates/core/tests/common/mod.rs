//! Test-only oracles, written from the estimator definitions and kept
//! independent of the library's computation paths.
#![allow(dead_code)]

use wtail::{EstimatorSpec, Family, SortedSample};

/// Literal `O(k)` evaluation with the textbook formulas.
pub fn naive_wtc(s: &SortedSample, k: usize, spec: EstimatorSpec) -> Option<f64> {
    let x = s.values();
    let n = x.len();
    let thr = x[n - k - 1];
    let top = &x[n - k..];
    let v: Vec<f64> = top.iter().map(|xi| xi.ln() - thr.ln()).collect();
    let p = spec.p;
    let mean = match spec.family {
        Family::HatG | Family::HatGG => {
            if p == 0.0 {
                v.iter().sum::<f64>() / k as f64
            } else {
                // 1 - 1/m written as (m - 1)/m, with m - 1 summed through expm1
                let m = v.iter().map(|vi| (p * vi).exp()).sum::<f64>() / k as f64;
                let m1 = v.iter().map(|vi| (p * vi).exp_m1()).sum::<f64>() / k as f64;
                m1 / (m * p)
            }
        }
        Family::TildeG | Family::TildeGG => {
            if p < 0.0 && v.iter().any(|vi| *vi == 0.0) {
                return None;
            }
            let m = v.iter().map(|vi| vi.powf(p)).sum::<f64>() / k as f64;
            (m / gamma(p + 1.0)).powf(1.0 / p)
        }
    };
    let nf = n as f64;
    Some(match spec.family {
        Family::HatGG | Family::TildeGG => (nf / k as f64).ln() * mean,
        Family::HatG | Family::TildeG => {
            let t: f64 = (1..=k)
                .map(|i| ((nf + 1.0) / i as f64).ln().ln())
                .sum::<f64>()
                / k as f64
                - ((nf + 1.0) / (k as f64 + 1.0)).ln().ln();
            mean / t
        }
    })
}

/// Lanczos approximation (g = 7, n = 9) of Γ(z) for z > 0.
pub fn gamma(z: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * z).sin() * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut a = C[0];
    let t = z + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * a
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300) || a == b
}

/// Small deterministic generator for test fixtures (xorshift64*).
pub struct Xorshift(pub u64);

impl Xorshift {
    pub fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 >> 12;
        self.0 ^= self.0 << 25;
        self.0 ^= self.0 >> 27;
        let v = self.0.wrapping_mul(0x2545_F491_4F6C_DD1D);
        ((v >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn exponential(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| -self.next_f64().ln()).collect()
    }
}

pub const P_GRID: [f64; 6] = [-2.0, -0.25, 0.25, 1.0, 2.0, 3.5];

/// Every valid `(family, p)` pair over `ps`.
pub fn specs_over(ps: &[f64]) -> Vec<EstimatorSpec> {
    Family::ALL
        .iter()
        .flat_map(|&f| ps.iter().filter_map(move |&p| EstimatorSpec::new(f, p).ok()))
        .collect()
}

/// Largest relative deviation between `wtc_curve` and the literal oracle.
pub fn worst_curve_deviation(s: &SortedSample, spec: EstimatorSpec) -> f64 {
    let n = s.len();
    let curve = wtail::wtc_curve(s, spec, 1..=n - 1).expect("valid range");
    let mut worst: f64 = 0.0;
    for k in 1..n {
        match (curve[k - 1], naive_wtc(s, k, spec)) {
            (Some(a), Some(b)) => {
                let d = (a - b).abs() / a.abs().max(b.abs()).max(1e-300);
                worst = worst.max(d);
            }
            (None, None) => {}
            _ => return f64::INFINITY,
        }
    }
    worst
}
