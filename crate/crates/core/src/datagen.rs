//! Seeded synthetic data sources.
//!
//! Every generator is a pure function of its configuration: the same seed
//! always produces bit-identical data. Randomness comes from [`SplitMix64`],
//! a fully specified 64-bit generator, so data sets can be regenerated by
//! other implementations.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::pca::Dataset;

/// SplitMix64 with a Box–Muller Gaussian transform.
///
/// State transition: `state += 0x9E3779B97F4A7C15`; output
/// `z = state; z = (z ^ z>>30)·0xBF58476D1CE4E5B9; z = (z ^ z>>27)·0x94D049BB133111EB; z ^ z>>31`
/// (wrapping arithmetic). Uniform doubles take the top 53 bits:
/// `(z >> 11)·2⁻⁵³ ∈ [0, 1)`. Gaussians are produced in pairs from two
/// uniforms `u₁, u₂` as `√(−2 ln(1 − u₁))·(cos 2πu₂, sin 2πu₂)`, cosine first.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal deviate.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.next_f64(); // (0, 1]
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

/// Signal-to-noise ratio as a ratio of variances.
pub fn snr(signal_variance: f64, noise_variance: f64) -> Result<f64> {
    if !(noise_variance > 0.0) {
        return Err(Error::UndefinedSnr(noise_variance));
    }
    if !(signal_variance >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "signal variance must be non-negative, got {signal_variance}"
        )));
    }
    Ok(signal_variance / noise_variance)
}

/// A camera's image plane, given by two orthonormal 3-vectors. A point `p`
/// is recorded as `(p·horizontal, p·vertical)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    pub horizontal: [f64; 3],
    pub vertical: [f64; 3],
}

impl Camera {
    /// Camera looking along `(cos e·cos a, cos e·sin a, sin e)` for azimuth
    /// `a` and elevation `e`, with its image axes rolled by `roll` about the
    /// line of sight. Angles in degrees; `|elevation| < 90`.
    pub fn from_angles(azimuth: f64, elevation: f64, roll: f64) -> Self {
        let (sa, ca) = azimuth.to_radians().sin_cos();
        let (se, ce) = elevation.to_radians().sin_cos();
        let (sr, cr) = roll.to_radians().sin_cos();
        let look = [ce * ca, ce * sa, se];
        let right = [sa, -ca, 0.0];
        // up = look × right
        let up = [
            look[1] * right[2] - look[2] * right[1],
            look[2] * right[0] - look[0] * right[2],
            look[0] * right[1] - look[1] * right[0],
        ];
        let mix = |a: f64, b: f64| -> [f64; 3] {
            [
                a * right[0] + b * up[0],
                a * right[1] + b * up[1],
                a * right[2] + b * up[2],
            ]
        };
        Self {
            horizontal: mix(cr, sr),
            vertical: mix(-sr, cr),
        }
    }

    fn record(&self, p: &[f64; 3]) -> (f64, f64) {
        (dot(p, &self.horizontal), dot(p, &self.vertical))
    }
}

/// The default rig. No two image planes are parallel and none of the
/// relative angles is a multiple of 90°.
pub fn default_cameras() -> [Camera; 3] {
    [
        Camera::from_angles(30.0, 15.0, 10.0),
        Camera::from_angles(110.0, -20.0, -25.0),
        Camera::from_angles(250.0, 35.0, 40.0),
    ]
}

/// A ball on an ideal spring, filmed by three cameras.
#[derive(Debug, Clone, PartialEq)]
pub struct SpringConfig {
    pub amplitude: f64,
    /// Oscillation frequency in Hz.
    pub frequency: f64,
    /// Camera frame rate in Hz.
    pub sample_rate: f64,
    /// Recording length in seconds.
    pub duration: f64,
    pub cameras: [Camera; 3],
    /// Direction of motion in world coordinates (unit length).
    pub motion_axis: [f64; 3],
    /// Standard deviation of the independent Gaussian noise added to every
    /// recorded coordinate.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SpringConfig {
    /// 120 Hz for ten minutes (72000 samples), unit amplitude at 0.5 Hz,
    /// motion along the world x axis, no noise.
    fn default() -> Self {
        Self {
            amplitude: 1.0,
            frequency: 0.5,
            sample_rate: 120.0,
            duration: 600.0,
            cameras: default_cameras(),
            motion_axis: [1.0, 0.0, 0.0],
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

pub const SPRING_NAMES: [&str; 6] = ["xA", "yA", "xB", "yB", "xC", "yC"];

impl SpringConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Sets the noise level so that signal variance along the direction of
    /// motion over noise variance equals `snr`.
    pub fn with_snr(mut self, snr: f64) -> Result<Self> {
        if !(snr > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "SNR must be positive, got {snr}"
            )));
        }
        self.noise_sigma = (self.signal_variance()? / snr).sqrt();
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        const TOL: f64 = 1e-12;
        for (name, value) in [
            ("amplitude", self.amplitude),
            ("frequency", self.frequency),
            ("noise_sigma", self.noise_sigma),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite and non-negative, got {value}"
                )));
            }
        }
        if !(self.sample_rate > 0.0 && self.duration > 0.0) {
            return Err(Error::InvalidConfig(
                "sample_rate and duration must be positive".into(),
            ));
        }
        let count = self.sample_rate * self.duration;
        if !count.is_finite()
            || (count - count.round()).abs() > 1e-9 * count.max(1.0)
            || count < 2.0
        {
            return Err(Error::InvalidConfig(format!(
                "sample_rate × duration must be an integer ≥ 2, got {count}"
            )));
        }
        if (dot(&self.motion_axis, &self.motion_axis) - 1.0).abs() > TOL {
            return Err(Error::InvalidConfig(
                "motion_axis must be a unit vector".into(),
            ));
        }
        for (i, cam) in self.cameras.iter().enumerate() {
            let hh = dot(&cam.horizontal, &cam.horizontal) - 1.0;
            let vv = dot(&cam.vertical, &cam.vertical) - 1.0;
            let hv = dot(&cam.horizontal, &cam.vertical);
            if hh.abs() > TOL || vv.abs() > TOL || hv.abs() > TOL {
                return Err(Error::InvalidConfig(format!(
                    "camera {i} image axes are not orthonormal"
                )));
            }
        }
        Ok(())
    }

    /// Number of recorded samples, `sample_rate × duration`.
    pub fn samples(&self) -> usize {
        (self.sample_rate * self.duration).round() as usize
    }

    /// Image of the motion axis in the 6-D measurement space. Noiseless
    /// recordings all lie on the line through the mean along this vector.
    pub fn signal_direction(&self) -> [f64; 6] {
        let mut w = [0.0; 6];
        for (c, cam) in self.cameras.iter().enumerate() {
            let (x, y) = cam.record(&self.motion_axis);
            w[2 * c] = x;
            w[2 * c + 1] = y;
        }
        w
    }

    fn displacement(&self, k: usize) -> f64 {
        let t = k as f64 / self.sample_rate;
        self.amplitude * (2.0 * PI * self.frequency * t).cos()
    }

    /// Population variance of the noiseless recording along its own line,
    /// i.e. the top eigenvalue of the noiseless covariance matrix.
    pub fn signal_variance(&self) -> Result<f64> {
        self.validate()?;
        let n = self.samples();
        let mean = (0..n).map(|k| self.displacement(k)).sum::<f64>() / n as f64;
        let var = (0..n)
            .map(|k| (self.displacement(k) - mean).powi(2))
            .sum::<f64>()
            / n as f64;
        let w = self.signal_direction();
        Ok(var * dot(&w, &w))
    }
}

/// Records the spring: position `amplitude·cos(2πft)·motion_axis` projected
/// into each camera, rows ordered `xA, yA, xB, yB, xC, yC`.
pub fn generate_spring(cfg: &SpringConfig) -> Result<Dataset> {
    cfg.validate()?;
    let n = cfg.samples();
    let mut rng = SplitMix64::new(cfg.seed);
    let mut data = vec![0.0; 6 * n];
    for k in 0..n {
        let s = cfg.displacement(k);
        let p = [
            s * cfg.motion_axis[0],
            s * cfg.motion_axis[1],
            s * cfg.motion_axis[2],
        ];
        for (c, cam) in cfg.cameras.iter().enumerate() {
            let (x, y) = cam.record(&p);
            data[2 * c * n + k] = x;
            data[(2 * c + 1) * n + k] = y;
        }
        if cfg.noise_sigma > 0.0 {
            for row in 0..6 {
                data[row * n + k] += cfg.noise_sigma * rng.next_gaussian();
            }
        }
    }
    Dataset::new(
        Matrix::new(6, n, data)?,
        SPRING_NAMES.iter().map(|s| s.to_string()).collect(),
    )
}

/// Two unit-variance measurements with correlation `rho`:
/// `r₁ = z₁`, `r₂ = ρ·z₁ + √(1 − ρ²)·z₂`. At `|ρ| = 1` the rows are exactly
/// proportional.
pub fn generate_correlated_pair(rho: f64, n: usize, seed: u64) -> Result<Dataset> {
    if !(rho.abs() <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "rho must lie in [-1, 1], got {rho}"
        )));
    }
    if n < 3 {
        return Err(Error::InvalidConfig(format!(
            "need at least 3 samples, got {n}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let spread = (1.0 - rho * rho).sqrt();
    let mut data = vec![0.0; 2 * n];
    for k in 0..n {
        let z1 = rng.next_gaussian();
        let z2 = rng.next_gaussian();
        data[k] = z1;
        data[n + k] = rho * z1 + spread * z2;
    }
    Dataset::new(Matrix::new(2, n, data)?, vec!["r1".into(), "r2".into()])
}

#[derive(Debug, Clone, PartialEq)]
pub enum FailureKind {
    /// Points on a circle at a uniformly random phase.
    FerrisWheel { radius: f64 },
    /// Two elongated clusters along non-perpendicular axes. Each sample picks
    /// an axis with the given mixture weights and a position uniform on
    /// `[-1, 1]` along it.
    NonOrthogonal {
        axes_deg: [f64; 2],
        weights: [f64; 2],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailureConfig {
    pub kind: FailureKind,
    pub n: usize,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl FailureConfig {
    pub fn ferris_wheel(n: usize, seed: u64) -> Self {
        Self {
            kind: FailureKind::FerrisWheel { radius: 1.0 },
            n,
            noise_sigma: 0.0,
            seed,
        }
    }

    /// Axes at 0° and 45°, equal weights.
    pub fn non_orthogonal(n: usize, seed: u64) -> Self {
        Self {
            kind: FailureKind::NonOrthogonal {
                axes_deg: [0.0, 45.0],
                weights: [0.5, 0.5],
            },
            n,
            noise_sigma: 0.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidConfig(format!(
                "need at least 3 samples, got {}",
                self.n
            )));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::InvalidConfig(
                "noise_sigma must be non-negative".into(),
            ));
        }
        match &self.kind {
            FailureKind::FerrisWheel { radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "radius must be positive, got {radius}"
                    )));
                }
            }
            FailureKind::NonOrthogonal { axes_deg, weights } => {
                if !axes_deg.iter().all(|a| a.is_finite()) {
                    return Err(Error::InvalidConfig("axis angles must be finite".into()));
                }
                if !(weights.iter().all(|w| *w >= 0.0) && weights[0] + weights[1] > 0.0) {
                    return Err(Error::InvalidConfig(
                        "weights must be non-negative, not both zero".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

pub fn generate_failure(cfg: &FailureConfig) -> Result<Dataset> {
    cfg.validate()?;
    let n = cfg.n;
    let mut rng = SplitMix64::new(cfg.seed);
    let mut data = vec![0.0; 2 * n];
    for k in 0..n {
        let (x, y) = match &cfg.kind {
            FailureKind::FerrisWheel { radius } => {
                let theta = TAU * rng.next_f64();
                (radius * theta.cos(), radius * theta.sin())
            }
            FailureKind::NonOrthogonal { axes_deg, weights } => {
                let pick = rng.next_f64() * (weights[0] + weights[1]);
                let angle = if pick < weights[0] {
                    axes_deg[0]
                } else {
                    axes_deg[1]
                };
                let t = 2.0 * rng.next_f64() - 1.0;
                let (s, c) = angle.to_radians().sin_cos();
                (t * c, t * s)
            }
        };
        data[k] = x;
        data[n + k] = y;
        if cfg.noise_sigma > 0.0 {
            data[k] += cfg.noise_sigma * rng.next_gaussian();
            data[n + k] += cfg.noise_sigma * rng.next_gaussian();
        }
    }
    Dataset::new(Matrix::new(2, n, data)?, vec!["x".into(), "y".into()])
}
