//! Marginal noise models, reproducible sampling streams, and the standard
//! normal CDF that every probability prediction in this crate goes through.
//!
//! Only zero-symmetric families are constructible: the normal-limit formula
//! the predictions rest on assumes symmetric noise, so the type system
//! refuses anything else.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Supported marginal noise families, both symmetric about zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseFamily {
    /// Uniform on `[-half_width, half_width]`.
    UniformSymmetric { half_width: f64 },
    /// Centered normal with standard deviation `std`.
    Gaussian { std: f64 },
}

/// A marginal noise law together with its variance `sigma^2` and raw fourth
/// moment `mu4`, the two quantities the preservation-probability formula
/// consumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NoiseSpecWire", into = "NoiseSpecWire")]
pub struct NoiseSpec {
    family: NoiseFamily,
    variance: f64,
    fourth_moment: f64,
}

/// JSON shape: `{"family": "...", "param": x, "variance": v, "fourth_moment": m}`.
#[derive(Serialize, Deserialize)]
struct NoiseSpecWire {
    family: String,
    param: f64,
    variance: f64,
    fourth_moment: f64,
}

impl From<NoiseSpec> for NoiseSpecWire {
    fn from(spec: NoiseSpec) -> Self {
        let (family, param) = match spec.family {
            NoiseFamily::UniformSymmetric { half_width } => ("uniform".to_string(), half_width),
            NoiseFamily::Gaussian { std } => ("gaussian".to_string(), std),
        };
        NoiseSpecWire { family, param, variance: spec.variance, fourth_moment: spec.fourth_moment }
    }
}

impl TryFrom<NoiseSpecWire> for NoiseSpec {
    type Error = Error;

    fn try_from(wire: NoiseSpecWire) -> Result<Self> {
        match wire.family.as_str() {
            "uniform" => NoiseSpec::uniform(wire.param),
            "gaussian" => NoiseSpec::gaussian(wire.param),
            other => Err(Error::invalid(format!("unknown noise family '{other}'"))),
        }
    }
}

impl NoiseSpec {
    /// Uniform noise on `[-half_width, half_width]`:
    /// `sigma^2 = a^2/3`, `mu4 = a^4/5`.
    pub fn uniform(half_width: f64) -> Result<Self> {
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(Error::invalid(format!(
                "uniform half-width must be positive and finite, got {half_width}"
            )));
        }
        let variance = half_width * half_width / 3.0;
        let fourth_moment = half_width.powi(4) / 5.0;
        Ok(Self::checked(NoiseFamily::UniformSymmetric { half_width }, variance, fourth_moment))
    }

    /// Centered Gaussian noise: `sigma^2 = s^2`, `mu4 = 3 s^4`.
    pub fn gaussian(std: f64) -> Result<Self> {
        if !std.is_finite() || std <= 0.0 {
            return Err(Error::invalid(format!(
                "gaussian standard deviation must be positive and finite, got {std}"
            )));
        }
        let variance = std * std;
        let fourth_moment = 3.0 * std.powi(4);
        Ok(Self::checked(NoiseFamily::Gaussian { std }, variance, fourth_moment))
    }

    fn checked(family: NoiseFamily, variance: f64, fourth_moment: f64) -> Self {
        // Jensen: mu4 >= sigma^4 for every distribution.
        debug_assert!(fourth_moment >= variance * variance);
        Self { family, variance, fourth_moment }
    }

    pub fn family(&self) -> NoiseFamily {
        self.family
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn fourth_moment(&self) -> f64 {
        self.fourth_moment
    }

    /// `mu4 + 3 sigma^4`, the per-coordinate noise floor of the
    /// squared-distance-difference variance.
    pub fn noise_floor(&self) -> f64 {
        self.fourth_moment + 3.0 * self.variance * self.variance
    }

    /// One draw from the marginal law.
    #[inline]
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self.family {
            NoiseFamily::UniformSymmetric { half_width } => {
                (2.0 * rng.gen::<f64>() - 1.0) * half_width
            }
            NoiseFamily::Gaussian { std } => {
                let n: f64 = rng.sample(StandardNormal);
                n * std
            }
        }
    }

    /// `d` independent draws from the marginal law.
    pub fn sample(&self, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        if d == 0 {
            return Err(Error::invalid("sample dimension must be at least 1"));
        }
        Ok((0..d).map(|_| self.draw(rng)).collect())
    }

    /// Exact second moment of the distance between two independent noise
    /// vectors of dimension `d`: `E ||n1 - n2||^2 = 2 d sigma^2`.
    pub fn expected_noise_sq_distance(&self, d: usize) -> f64 {
        2.0 * d as f64 * self.variance
    }
}

impl std::str::FromStr for NoiseSpec {
    type Err = Error;

    /// Parses the CLI syntax `uniform:0.75` / `gaussian:1.0`.
    fn from_str(s: &str) -> Result<Self> {
        let (family, param) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("noise spec '{s}' is not of the form family:param")))?;
        let value: f64 = param
            .parse()
            .map_err(|_| Error::invalid(format!("noise parameter '{param}' is not a number")))?;
        match family {
            "uniform" => NoiseSpec::uniform(value),
            "gaussian" => NoiseSpec::gaussian(value),
            other => Err(Error::invalid(format!("unknown noise family '{other}'"))),
        }
    }
}

/// Master seed plus the derivation rule mapping `(replicate, point)` to an
/// independent generator stream.
///
/// Streams are ChaCha8 with the nonce set to `replicate << 32 | point`, so
/// any worker can recreate any stream without coordination and parallel
/// runs are bit-identical to serial ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    master_seed: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Independent substream for one `(replicate, point)` work unit.
    pub fn stream(&self, replicate: u64, point: u64) -> ChaCha8Rng {
        assert!(replicate < (1 << 32), "replicate index out of range");
        assert!(point < (1 << 32), "point index out of range");
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream((replicate << 32) | point);
        rng
    }
}

// --- Standard normal CDF and quantile -------------------------------------
//
// The CDF uses W. J. Cody's rational Chebyshev approximation of erf/erfc
// (the CALERF scheme), good to a few ulps; the quantile uses Acklam's
// rational approximation polished by one Halley step against the CDF.

const ERF_A: [f64; 5] = [
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
    1.85777706184603153e-1,
];
const ERF_B: [f64; 4] = [
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
];
const ERFC_C: [f64; 9] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
    2.15311535474403846e-8,
];
const ERFC_D: [f64; 8] = [
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
];
const ERFC_P: [f64; 6] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
];
const ERFC_Q: [f64; 5] = [
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
];
const ONE_OVER_SQRT_PI: f64 = 5.641_895_835_477_562_9e-1;

fn erf_small(x: f64) -> f64 {
    let z = x * x;
    let mut num = ERF_A[4] * z;
    let mut den = z;
    for i in 0..3 {
        num = (num + ERF_A[i]) * z;
        den = (den + ERF_B[i]) * z;
    }
    x * (num + ERF_A[3]) / (den + ERF_B[3])
}

fn erfc_mid(y: f64) -> f64 {
    let mut num = ERFC_C[8] * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + ERFC_C[i]) * y;
        den = (den + ERFC_D[i]) * y;
    }
    let r = (num + ERFC_C[7]) / (den + ERFC_D[7]);
    let ysq = (y * 16.0).floor() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * r
}

fn erfc_large(y: f64) -> f64 {
    let inv_sq = 1.0 / (y * y);
    let mut num = ERFC_P[5] * inv_sq;
    let mut den = inv_sq;
    for i in 0..4 {
        num = (num + ERFC_P[i]) * inv_sq;
        den = (den + ERFC_Q[i]) * inv_sq;
    }
    let mut r = inv_sq * (num + ERFC_P[4]) / (den + ERFC_Q[4]);
    r = (ONE_OVER_SQRT_PI - r) / y;
    let ysq = (y * 16.0).floor() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * r
}

/// erfc for all finite arguments.
fn erfc(x: f64) -> f64 {
    let y = x.abs();
    let r = if y <= 0.46875 {
        return 1.0 - erf_small(x);
    } else if y <= 4.0 {
        erfc_mid(y)
    } else {
        erfc_large(y)
    };
    if x < 0.0 {
        2.0 - r
    } else {
        r
    }
}

/// Total-function CDF used internally once inputs are validated.
#[inline]
pub(crate) fn phi(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t == f64::INFINITY {
        return 1.0;
    }
    if t == f64::NEG_INFINITY {
        return 0.0;
    }
    (0.5 * erfc(-t / std::f64::consts::SQRT_2)).clamp(0.0, 1.0)
}

/// Standard normal CDF. `+inf`/`-inf` are accepted as limits; NaN is not.
pub fn std_normal_cdf(t: f64) -> Result<f64> {
    if t.is_nan() {
        return Err(Error::invalid("NaN argument to the standard normal CDF"));
    }
    Ok(phi(t))
}

/// Standard normal quantile for `p` in the open interval (0, 1).
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("quantile argument must lie in (0, 1), got {p}")));
    }
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383577518672690e2,
        -3.066479806614716e1,
        2.506628277459239e0,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838e0,
        -2.549732539343734e0,
        4.374664141464968e0,
        2.938163982698783e0,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996e0,
        3.754408661907416e0,
    ];
    const P_LOW: f64 = 0.02425;

    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // One Halley step against the high-precision CDF.
    let e = phi(x) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    x -= u / (1.0 + x * u / 2.0);
    Ok(x)
}
