use crate::error::{invalid, Result};

/// Inner and outer radius of the ψ transition.
const RISE_START: f64 = 1.0;
const RISE_END: f64 = 4.0 / 3.0;

/// Smooth step on `[0, 1]` from 0 to 1 built from `e^{−1/x}`.
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / x).exp();
    let b = (-1.0 / (1.0 - x)).exp();
    a / (a + b)
}

/// Monotone piecewise-cubic Hermite interpolant on a uniform mesh.
#[derive(Debug, Clone)]
struct MonotoneCubic {
    x0: f64,
    step: f64,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    fn new(x0: f64, x1: f64, y: Vec<f64>) -> Self {
        let n = y.len();
        let step = (x1 - x0) / (n - 1) as f64;
        let secant: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]) / step).collect();
        let mut slope = vec![0.0; n];
        for i in 1..n - 1 {
            let (a, b) = (secant[i - 1], secant[i]);
            slope[i] = if a * b <= 0.0 { 0.0 } else { 2.0 * a * b / (a + b) };
        }
        // endpoints are flat for the smooth step
        Self { x0, step, y, slope }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let u = (x - self.x0) / self.step;
        if u <= 0.0 {
            return self.y[0];
        }
        if u >= (n - 1) as f64 {
            return self.y[n - 1];
        }
        let i = (u.floor() as usize).min(n - 2);
        let t = u - i as f64;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.y[i] + h10 * self.step * self.slope[i] + h01 * self.y[i + 1] + h11 * self.step * self.slope[i + 1]
    }
}

/// Radial cutoffs: `ψ` equals 1 on `|ξ| ≤ 1` and 0 beyond `4/3`;
/// `φ(r) = ψ(r/2) − ψ(r)` is supported in `[1, 8/3]`.
#[derive(Debug, Clone)]
pub struct BumpPair {
    profile: MonotoneCubic,
}

impl BumpPair {
    pub const MIN_RESOLUTION: usize = 1024;

    pub fn new(mesh_resolution: usize) -> Result<Self> {
        if mesh_resolution < Self::MIN_RESOLUTION {
            return Err(invalid(
                "mesh_resolution",
                format!("{mesh_resolution} < {}", Self::MIN_RESOLUTION),
            ));
        }
        let n = mesh_resolution;
        let y = (0..n)
            .map(|i| 1.0 - smooth_step(i as f64 / (n - 1) as f64))
            .collect();
        let pair = Self {
            profile: MonotoneCubic::new(RISE_START, RISE_END, y),
        };
        let worst = (0..2000)
            .map(|i| {
                let r = 0.001 + 40.0 * i as f64 / 2000.0;
                (pair.partition_sum(r, 8) - 1.0).abs()
            })
            .fold(0.0, f64::max);
        if worst > 1e-12 {
            return Err(invalid("mesh_resolution", format!("partition defect {worst:e}")));
        }
        Ok(pair)
    }

    pub fn psi(&self, r: f64) -> f64 {
        let r = r.abs();
        if r <= RISE_START {
            1.0
        } else if r >= RISE_END {
            0.0
        } else {
            self.profile.eval(r)
        }
    }

    pub fn phi(&self, r: f64) -> f64 {
        self.psi(r / 2.0) - self.psi(r)
    }

    /// Cutoff of shell `index`: `ψ(r)` for −1, otherwise `φ(2^{−index} r)`.
    pub fn shell(&self, index: i32, r: f64) -> f64 {
        if index < 0 {
            self.psi(r)
        } else {
            self.phi(r * 0.5f64.powi(index))
        }
    }

    /// `ψ(r) + Σ_{j=0}^{last} φ(2^{−j} r)`.
    pub fn partition_sum(&self, r: f64, last: i32) -> f64 {
        (-1..=last).map(|j| self.shell(j, r)).sum()
    }

    /// Support of shell `index` as a closed radius interval.
    pub fn shell_support(index: i32) -> (f64, f64) {
        if index < 0 {
            (0.0, RISE_END)
        } else {
            let s = 2f64.powi(index);
            (s * RISE_START, s * 2.0 * RISE_END)
        }
    }

    /// Largest shell whose open support meets `[0, max_radius]`.
    pub fn last_shell(max_radius: f64) -> i32 {
        let mut j = -1;
        while 2f64.powi(j + 1) * RISE_START < max_radius {
            j += 1;
        }
        j
    }
}
