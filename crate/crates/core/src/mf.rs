//! Membership-function families.
//!
//! Every family is stored as a kind tag plus a flat parameter vector so the
//! trainer can treat premise parameters uniformly. Parameter layouts:
//!
//! | kind                  | params                     |
//! |-----------------------|----------------------------|
//! | `Triangular`          | `a, b, c`                  |
//! | `Trapezoidal`         | `a, b, c, d`               |
//! | `Gaussian`            | `m, sigma`                 |
//! | `TwoSideGaussian`     | `m1, sigma1, m2, sigma2`   |
//! | `BellShape`           | `a, b, c`                  |
//! | `ProductTwoSigmoid`   | `slope1, c1, slope2, c2`   |
//! | `DiffTwoSigmoid`      | `slope1, c1, slope2, c2`   |
//! | `PiShape`             | `a, b, c, d`               |
//!
//! Piecewise families treat a collapsed flank (`a == b` or `c == d`) as a
//! shoulder: the degree is 1 at the collapsed knot instead of 0.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Step used for central differences on piecewise families.
pub const FD_STEP: f64 = 1e-6;

/// Lower clamp for widths, sigmas and bell exponents.
pub const MIN_WIDTH: f64 = 1e-6;

/// Half-transition steepness of the sigmoid families built by
/// [`MembershipFunction::from_bounds`]. A sigmoid whose argument reaches this
/// value is within 1.1e-10 of saturation.
const SIGMOID_REACH: f64 = 23.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MfKind {
    Triangular,
    Trapezoidal,
    Gaussian,
    TwoSideGaussian,
    BellShape,
    ProductTwoSigmoid,
    DiffTwoSigmoid,
    PiShape,
}

impl MfKind {
    pub const ALL: [MfKind; 8] = [
        MfKind::Triangular,
        MfKind::Trapezoidal,
        MfKind::Gaussian,
        MfKind::TwoSideGaussian,
        MfKind::BellShape,
        MfKind::ProductTwoSigmoid,
        MfKind::DiffTwoSigmoid,
        MfKind::PiShape,
    ];

    pub fn arity(self) -> usize {
        match self {
            MfKind::Gaussian => 2,
            MfKind::Triangular | MfKind::BellShape => 3,
            MfKind::Trapezoidal
            | MfKind::TwoSideGaussian
            | MfKind::ProductTwoSigmoid
            | MfKind::DiffTwoSigmoid
            | MfKind::PiShape => 4,
        }
    }

    /// Families whose parameter gradients are computed analytically.
    pub fn is_smooth(self) -> bool {
        !matches!(self, MfKind::Triangular | MfKind::Trapezoidal | MfKind::PiShape)
    }

    pub fn name(self) -> &'static str {
        match self {
            MfKind::Triangular => "triangular",
            MfKind::Trapezoidal => "trapezoidal",
            MfKind::Gaussian => "gaussian",
            MfKind::TwoSideGaussian => "two_side_gaussian",
            MfKind::BellShape => "bell_shape",
            MfKind::ProductTwoSigmoid => "product_two_sigmoid",
            MfKind::DiffTwoSigmoid => "diff_two_sigmoid",
            MfKind::PiShape => "pi_shape",
        }
    }
}

impl fmt::Display for MfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown membership function kind `{0}`")]
pub struct UnknownKind(pub String);

impl FromStr for MfKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MfKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MfError {
    #[error("{kind} expects {expected} parameters, got {got}")]
    ParamCount { kind: MfKind, expected: usize, got: usize },
    #[error("{kind} parameters out of order: {params:?}")]
    ParamOrder { kind: MfKind, params: Vec<f64> },
    #[error("{kind} parameter `{name}` must be positive, got {value}")]
    ParamSign {
        kind: MfKind,
        name: &'static str,
        value: f64,
    },
    #[error("{kind} parameter #{index} is not finite")]
    NonFinite { kind: MfKind, index: usize },
    #[error("bounds out of order: left={left}, mean={mean}, right={right}")]
    BoundsOrder { left: f64, mean: f64, right: f64 },
}

/// `(left, mean, right)` bounds of a linguistic term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermBounds {
    pub left: f64,
    pub mean: f64,
    pub right: f64,
}

impl TermBounds {
    pub const fn new(left: f64, mean: f64, right: f64) -> Self {
        TermBounds { left, mean, right }
    }
}

/// A validated membership function.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipFunction {
    kind: MfKind,
    params: Vec<f64>,
}

impl MembershipFunction {
    pub fn new(kind: MfKind, params: Vec<f64>) -> Result<Self, MfError> {
        validate(kind, &params)?;
        Ok(MembershipFunction { kind, params })
    }

    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self, MfError> {
        Self::new(MfKind::Triangular, vec![a, b, c])
    }

    pub fn gaussian(m: f64, sigma: f64) -> Result<Self, MfError> {
        Self::new(MfKind::Gaussian, vec![m, sigma])
    }

    pub fn kind(&self) -> MfKind {
        self.kind
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval_raw(self.kind, &self.params, x)
    }

    /// Partial derivatives of the degree at `x` with respect to each parameter.
    pub fn grad_params(&self, x: f64) -> Vec<f64> {
        if self.kind.is_smooth() {
            analytic_grad(self.kind, &self.params, x)
        } else {
            let mut p = self.params.clone();
            (0..p.len())
                .map(|i| {
                    let orig = p[i];
                    p[i] = orig + FD_STEP;
                    let hi = eval_raw(self.kind, &p, x);
                    p[i] = orig - FD_STEP;
                    let lo = eval_raw(self.kind, &p, x);
                    p[i] = orig;
                    (hi - lo) / (2.0 * FD_STEP)
                })
                .collect()
        }
    }

    /// Builds a member of `kind` from expert `(left, mean, right)` bounds.
    ///
    /// The result peaks at `mean` and its effective support is roughly
    /// `[left, right]`; a zero-width flank becomes a shoulder.
    pub fn from_bounds(kind: MfKind, left: f64, mean: f64, right: f64) -> Result<Self, MfError> {
        if !(left <= mean && mean <= right) {
            return Err(MfError::BoundsOrder { left, mean, right });
        }
        let (l, m, r) = (left, mean, right);
        let params = match kind {
            MfKind::Triangular => vec![l, m, r],
            MfKind::Trapezoidal | MfKind::PiShape => vec![l, (l + m) / 2.0, (m + r) / 2.0, r],
            MfKind::Gaussian => vec![m, ((r - l) / 6.0).max(MIN_WIDTH)],
            MfKind::TwoSideGaussian => vec![m, ((m - l) / 3.0).max(MIN_WIDTH), m, ((r - m) / 3.0).max(MIN_WIDTH)],
            MfKind::BellShape => vec![((r - l) / 4.0).max(MIN_WIDTH), 2.0, m],
            MfKind::ProductTwoSigmoid | MfKind::DiffTwoSigmoid => {
                let rise = (m - l).max(MIN_WIDTH);
                let fall = (r - m).max(MIN_WIDTH);
                let s1 = 2.0 * SIGMOID_REACH / rise;
                let s2 = 2.0 * SIGMOID_REACH / fall;
                let c1 = m - rise / 2.0;
                let c2 = m + fall / 2.0;
                if kind == MfKind::ProductTwoSigmoid {
                    vec![s1, c1, -s2, c2]
                } else {
                    vec![s1, c1, s2, c2]
                }
            }
        };
        Self::new(kind, params)
    }

    /// Recovers `(left, mean, right)` bounds; the inverse of
    /// [`from_bounds`](Self::from_bounds) for functions it produced.
    pub fn bounds(&self) -> TermBounds {
        let p = &self.params;
        let (l, m, r) = match self.kind {
            MfKind::Triangular => (p[0], p[1], p[2]),
            MfKind::Trapezoidal | MfKind::PiShape => {
                let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
                let m = ((2.0 * b - a) + (2.0 * c - d)) / 2.0;
                (a, m.clamp(b, c), d)
            }
            MfKind::Gaussian => (p[0] - 3.0 * p[1], p[0], p[0] + 3.0 * p[1]),
            MfKind::TwoSideGaussian => {
                let (m1, s1, m2, s2) = (p[0], p[1], p[2], p[3]);
                (m1 - 3.0 * s1, (m1 + m2) / 2.0, m2 + 3.0 * s2)
            }
            MfKind::BellShape => (p[2] - 2.0 * p[0], p[2], p[2] + 2.0 * p[0]),
            MfKind::ProductTwoSigmoid | MfKind::DiffTwoSigmoid => {
                let (s1, c1, s2, c2) = (p[0], p[1], p[2].abs(), p[3]);
                let half_rise = if s1 != 0.0 { SIGMOID_REACH / s1.abs() } else { 0.0 };
                let half_fall = if s2 != 0.0 { SIGMOID_REACH / s2 } else { 0.0 };
                let m = ((c1 + half_rise) + (c2 - half_fall)) / 2.0;
                let l = (c1 - half_rise).min(m);
                let r = (c2 + half_fall).max(m);
                (l, m, r)
            }
        };
        TermBounds::new(l, m, r)
    }

    /// Defuzzification gravity: the mean of [`bounds`](Self::bounds).
    pub fn gravity(&self) -> f64 {
        self.bounds().mean
    }

    /// Restores validity after an unconstrained parameter update.
    pub fn project(&mut self) {
        let p = &mut self.params;
        for v in p.iter_mut() {
            if !v.is_finite() {
                *v = 0.0;
            }
        }
        match self.kind {
            MfKind::Triangular | MfKind::Trapezoidal | MfKind::PiShape => {
                p.sort_by(f64::total_cmp);
            }
            MfKind::Gaussian => p[1] = p[1].max(MIN_WIDTH),
            MfKind::TwoSideGaussian => {
                if p[0] > p[2] {
                    p.swap(0, 2);
                }
                p[1] = p[1].max(MIN_WIDTH);
                p[3] = p[3].max(MIN_WIDTH);
            }
            MfKind::BellShape => {
                p[0] = p[0].max(MIN_WIDTH);
                p[1] = p[1].max(MIN_WIDTH);
            }
            MfKind::ProductTwoSigmoid | MfKind::DiffTwoSigmoid => {}
        }
    }

    pub(crate) fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }
}

pub fn validate(kind: MfKind, params: &[f64]) -> Result<(), MfError> {
    if params.len() != kind.arity() {
        return Err(MfError::ParamCount {
            kind,
            expected: kind.arity(),
            got: params.len(),
        });
    }
    if let Some(index) = params.iter().position(|v| !v.is_finite()) {
        return Err(MfError::NonFinite { kind, index });
    }
    let sorted = |ps: &[f64]| ps.windows(2).all(|w| w[0] <= w[1]);
    let positive = |name: &'static str, value: f64| {
        if value > 0.0 {
            Ok(())
        } else {
            Err(MfError::ParamSign { kind, name, value })
        }
    };
    let order_err = || MfError::ParamOrder {
        kind,
        params: params.to_vec(),
    };
    match kind {
        MfKind::Triangular | MfKind::Trapezoidal | MfKind::PiShape => {
            if !sorted(params) {
                return Err(order_err());
            }
        }
        MfKind::Gaussian => positive("sigma", params[1])?,
        MfKind::TwoSideGaussian => {
            positive("sigma1", params[1])?;
            positive("sigma2", params[3])?;
            if params[0] > params[2] {
                return Err(order_err());
            }
        }
        MfKind::BellShape => {
            positive("a", params[0])?;
            positive("b", params[1])?;
        }
        MfKind::ProductTwoSigmoid | MfKind::DiffTwoSigmoid => {}
    }
    Ok(())
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Evaluates without validating; total for any finite parameter vector of
/// the right arity, which finite differencing relies on.
pub(crate) fn eval_raw(kind: MfKind, p: &[f64], x: f64) -> f64 {
    let v = match kind {
        MfKind::Triangular => trapezoid(p[0], p[1], p[1], p[2], x),
        MfKind::Trapezoidal => trapezoid(p[0], p[1], p[2], p[3], x),
        MfKind::PiShape => pi_shape(p[0], p[1], p[2], p[3], x),
        MfKind::Gaussian => gauss(p[0], p[1], x),
        MfKind::TwoSideGaussian => {
            let left = if x < p[0] { gauss(p[0], p[1], x) } else { 1.0 };
            let right = if x > p[2] { gauss(p[2], p[3], x) } else { 1.0 };
            left * right
        }
        MfKind::BellShape => 1.0 / (1.0 + ((x - p[2]) / p[0]).abs().powf(2.0 * p[1])),
        MfKind::ProductTwoSigmoid => sigmoid(p[0] * (x - p[1])) * sigmoid(p[2] * (x - p[3])),
        MfKind::DiffTwoSigmoid => sigmoid(p[0] * (x - p[1])) - sigmoid(p[2] * (x - p[3])),
    };
    v.clamp(0.0, 1.0)
}

fn gauss(m: f64, sigma: f64, x: f64) -> f64 {
    let u = (x - m) / sigma;
    (-0.5 * u * u).exp()
}

fn trapezoid(a: f64, b: f64, c: f64, d: f64, x: f64) -> f64 {
    if x < a || x > d {
        0.0
    } else if x < b {
        (x - a) / (b - a)
    } else if x <= c {
        1.0
    } else {
        (d - x) / (d - c)
    }
}

fn pi_shape(a: f64, b: f64, c: f64, d: f64, x: f64) -> f64 {
    if x < a || x > d {
        0.0
    } else if x < b {
        let w = b - a;
        if x <= (a + b) / 2.0 {
            2.0 * ((x - a) / w).powi(2)
        } else {
            1.0 - 2.0 * ((x - b) / w).powi(2)
        }
    } else if x <= c {
        1.0
    } else {
        let w = d - c;
        if x <= (c + d) / 2.0 {
            1.0 - 2.0 * ((x - c) / w).powi(2)
        } else {
            2.0 * ((x - d) / w).powi(2)
        }
    }
}

fn analytic_grad(kind: MfKind, p: &[f64], x: f64) -> Vec<f64> {
    match kind {
        MfKind::Gaussian => {
            let (m, s) = (p[0], p[1]);
            let mu = gauss(m, s, x);
            let dx = x - m;
            vec![mu * dx / (s * s), mu * dx * dx / (s * s * s)]
        }
        MfKind::TwoSideGaussian => {
            let (m1, s1, m2, s2) = (p[0], p[1], p[2], p[3]);
            let mut g = vec![0.0; 4];
            if x < m1 {
                let mu = gauss(m1, s1, x);
                let dx = x - m1;
                g[0] = mu * dx / (s1 * s1);
                g[1] = mu * dx * dx / (s1 * s1 * s1);
            }
            if x > m2 {
                let mu = gauss(m2, s2, x);
                let dx = x - m2;
                g[2] = mu * dx / (s2 * s2);
                g[3] = mu * dx * dx / (s2 * s2 * s2);
            }
            g
        }
        MfKind::BellShape => {
            let (a, b, c) = (p[0], p[1], p[2]);
            let dx = x - c;
            if dx == 0.0 {
                return vec![0.0; 3];
            }
            let u = (dx / a).abs();
            let q = u.powf(2.0 * b);
            let mu = 1.0 / (1.0 + q);
            let mu2q = mu * mu * q;
            vec![2.0 * b * mu2q / a, -2.0 * mu2q * u.ln(), 2.0 * b * mu2q / dx]
        }
        MfKind::ProductTwoSigmoid => {
            let (s1, c1, s2, c2) = (p[0], p[1], p[2], p[3]);
            let f1 = sigmoid(s1 * (x - c1));
            let f2 = sigmoid(s2 * (x - c2));
            let d1 = f1 * (1.0 - f1);
            let d2 = f2 * (1.0 - f2);
            vec![d1 * (x - c1) * f2, -d1 * s1 * f2, d2 * (x - c2) * f1, -d2 * s2 * f1]
        }
        MfKind::DiffTwoSigmoid => {
            let (s1, c1, s2, c2) = (p[0], p[1], p[2], p[3]);
            let f1 = sigmoid(s1 * (x - c1));
            let f2 = sigmoid(s2 * (x - c2));
            let raw = f1 - f2;
            if !(0.0..=1.0).contains(&raw) {
                return vec![0.0; 4];
            }
            let d1 = f1 * (1.0 - f1);
            let d2 = f2 * (1.0 - f2);
            vec![d1 * (x - c1), -d1 * s1, -d2 * (x - c2), d2 * s2]
        }
        MfKind::Triangular | MfKind::Trapezoidal | MfKind::PiShape => {
            unreachable!("piecewise families use finite differences")
        }
    }
}
