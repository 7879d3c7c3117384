// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::Vec3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

/// Grid used to certify `|γ'| > 0`.
const REGULARITY_GRID: usize = 4096;

/// Closed space curve γ(s), s ∈ [0, 2π), stored as a truncated Fourier series.
#[derive(Clone, Debug)]
pub struct Centerline {
    series: FourierSeries<3>,
    length: f64,
}

impl Centerline {
    /// Trigonometric interpolant through equispaced samples `γ(2πj/N)`.
    pub fn from_samples(samples: &[Vec3]) -> Result<Self> {
        let n = samples.len();
        if n < 5 || n.is_multiple_of(2) {
            return Err(Error::BadSampleCount(n));
        }
        let raw: Vec<[f64; 3]> = samples.iter().map(|p| [p.x, p.y, p.z]).collect();
        Self::from_series(FourierSeries::from_samples(&raw).truncated(1e-16))
    }

    /// Builds a centerline from a closed-form parameterization sampled at `n`
    /// points; harmonics below 1e-15 of the largest are dropped.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Vec3) -> Result<Self> {
        if n < 5 || n.is_multiple_of(2) {
            return Err(Error::BadSampleCount(n));
        }
        let series = FourierSeries::from_fn(n, |s| {
            let p = f(s);
            [p.x, p.y, p.z]
        });
        Self::from_series(series.truncated(1e-15))
    }

    pub fn from_series(series: FourierSeries<3>) -> Result<Self> {
        let mut curve = Self {
            series,
            length: 0.0,
        };
        let n = REGULARITY_GRID.max(4 * curve.series.mode_count());
        let h = TAU / n as f64;
        let speeds: Vec<f64> = (0..n).map(|j| curve.speed(h * j as f64)).collect();
        let max_speed = speeds.iter().cloned().fold(0.0, f64::max);
        for (j, &v) in speeds.iter().enumerate() {
            if !(v > 1e-12 * max_speed) || !v.is_finite() {
                return Err(Error::IrregularCurve {
                    s: h * j as f64,
                    speed: v,
                });
            }
        }
        // Trapezoid rule is spectrally accurate for the periodic speed.
        curve.length = speeds.iter().sum::<f64>() * h;
        Ok(curve)
    }

    pub fn builtin(builtin: &Builtin) -> Result<Self> {
        builtin.validate()?;
        let b = *builtin;
        let n = match b {
            Builtin::FourBall => 1025,
            _ => 129,
        };
        Self::from_fn(n, move |s| b.point(s))
    }

    pub fn series(&self) -> &FourierSeries<3> {
        &self.series
    }

    /// Total arclength L.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mode_count(&self) -> usize {
        self.series.mode_count()
    }

    pub fn point(&self, s: f64) -> Vec3 {
        Vec3::from(self.series.eval(s))
    }

    /// γ, γ', γ'' at `s`.
    pub fn derivatives(&self, s: f64) -> [Vec3; 3] {
        self.series.eval_with_derivatives(s).map(Vec3::from)
    }

    /// Derivative of order 0, 1 or 2 of the interpolant.
    pub fn eval(&self, s: f64, order: usize) -> Result<Vec3> {
        if order > 2 {
            return Err(Error::BadDerivativeOrder(order));
        }
        Ok(Vec3::from(self.series.derivative(s, order)))
    }

    pub fn speed(&self, s: f64) -> f64 {
        Vec3::from(self.series.derivative(s, 1)).norm()
    }

    /// Rigid motion `x ↦ rotation·x + shift` applied to the curve.
    pub fn transformed(&self, rotation: &nalgebra::Matrix3<f64>, shift: &Vec3) -> Result<Self> {
        let (mean, cos, sin) = self.series.coefficients();
        let rot = |v: &[f64; 3]| -> [f64; 3] {
            let w = rotation * Vec3::from(*v);
            [w.x, w.y, w.z]
        };
        let m = rot(mean);
        let series = FourierSeries::from_coefficients(
            [m[0] + shift.x, m[1] + shift.y, m[2] + shift.z],
            cos.iter().map(rot).collect(),
            sin.iter().map(rot).collect(),
        );
        Self::from_series(series)
    }

    /// Uniform scaling about the origin.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_series(self.series.scaled(factor))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CenterlineJson::from(self)).expect("centerline serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CenterlineJson =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        raw.try_into()
    }
}

/// On-disk form: `{"modes": 2K+1, "coeffs": [[[re, im] x 3] per mode k = -K..=K]}`.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CenterlineJson {
    pub modes: usize,
    pub coeffs: Vec<[[f64; 2]; 3]>,
}

impl From<&Centerline> for CenterlineJson {
    fn from(c: &Centerline) -> Self {
        let coeffs: Vec<[[f64; 2]; 3]> = c
            .series
            .complex_coefficients()
            .iter()
            .map(|m| m.map(|z| [z.re, z.im]))
            .collect();
        Self {
            modes: coeffs.len(),
            coeffs,
        }
    }
}

impl TryFrom<CenterlineJson> for Centerline {
    type Error = Error;

    fn try_from(raw: CenterlineJson) -> Result<Self> {
        if raw.modes != raw.coeffs.len() || raw.modes.is_multiple_of(2) {
            return Err(Error::Serialization(format!(
                "`modes` = {} must be odd and equal the number of coefficient rows ({})",
                raw.modes,
                raw.coeffs.len()
            )));
        }
        let coeffs: Vec<[Complex64; 3]> = raw
            .coeffs
            .iter()
            .map(|m| m.map(|[re, im]| Complex64::new(re, im)))
            .collect();
        let series = FourierSeries::from_complex_coefficients(&coeffs)
            .ok_or_else(|| Error::Serialization("coefficient count must be odd".into()))?;
        Centerline::from_series(series)
    }
}

/// Named closed curves used throughout the experiments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Builtin {
    Circle { radius: f64 },
    /// (cos s, aspect·sin s, 0)
    Ellipse { aspect: f64 },
    /// (sin s + 2 sin 2s, cos s − 2 cos 2s, −sin 3s)
    Trefoil,
    /// Boundary of the unit ball of the 4-norm in the plane.
    FourBall,
    /// (sin 2s, 1.6 sin s, 0.3 cos s)
    Figure8,
    /// (cos s (1 + H cos 3s), sin s (1 + H cos 3s), H sin 3s); nearly
    /// self-intersecting as H → 1.
    Hairtie { h: f64 },
}

impl Builtin {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Builtin::Circle { radius } if !(radius > 0.0 && radius.is_finite()) => Err(
                Error::BadBuiltinParameter(format!("circle radius must be positive, got {radius}")),
            ),
            Builtin::Ellipse { aspect } if !(aspect > 0.0 && aspect.is_finite()) => Err(
                Error::BadBuiltinParameter(format!("ellipse aspect must be positive, got {aspect}")),
            ),
            Builtin::Hairtie { h } if !(0.0..1.0).contains(&h) => Err(Error::BadBuiltinParameter(
                format!("hairtie H must satisfy 0 <= H < 1, got {h}"),
            )),
            _ => Ok(()),
        }
    }

    /// Closed-form parameterization.
    pub fn point(&self, s: f64) -> Vec3 {
        let (sn, cs) = s.sin_cos();
        match *self {
            Builtin::Circle { radius } => Vec3::new(radius * cs, radius * sn, 0.0),
            Builtin::Ellipse { aspect } => Vec3::new(cs, aspect * sn, 0.0),
            Builtin::Trefoil => Vec3::new(
                sn + 2.0 * (2.0 * s).sin(),
                cs - 2.0 * (2.0 * s).cos(),
                -(3.0 * s).sin(),
            ),
            Builtin::FourBall => {
                let r = (cs.powi(4) + sn.powi(4)).powf(-0.25);
                Vec3::new(r * cs, r * sn, 0.0)
            }
            Builtin::Figure8 => Vec3::new((2.0 * s).sin(), 1.6 * sn, 0.3 * cs),
            Builtin::Hairtie { h } => {
                let r = 1.0 + h * (3.0 * s).cos();
                Vec3::new(cs * r, sn * r, h * (3.0 * s).sin())
            }
        }
    }

    /// Parameter values of the three near-approach points of the hairtie.
    pub fn hairtie_approach_points() -> [f64; 3] {
        [PI / 3.0, PI, 5.0 * PI / 3.0]
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Circle { radius } => write!(f, "circle({radius})"),
            Builtin::Ellipse { aspect } => write!(f, "ellipse({aspect})"),
            Builtin::Trefoil => write!(f, "trefoil"),
            Builtin::FourBall => write!(f, "fourball"),
            Builtin::Figure8 => write!(f, "figure8"),
            Builtin::Hairtie { h } => write!(f, "hairtie({h})"),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    /// Accepts `name` or `name(param)`, e.g. `trefoil`, `circle(0.5)`, `hairtie(0.9)`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, param) = match text.find('(') {
            Some(open) if text.ends_with(')') => {
                let inner = &text[open + 1..text.len() - 1];
                let value: f64 = inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::BadBuiltinParameter(format!("`{inner}` is not a number")))?;
                (&text[..open], Some(value))
            }
            Some(_) => return Err(Error::UnknownBuiltin(text.to_string())),
            None => (text, None),
        };
        let builtin = match (name.to_ascii_lowercase().as_str(), param) {
            ("circle", p) => Builtin::Circle {
                radius: p.unwrap_or(1.0),
            },
            ("ellipse", p) => Builtin::Ellipse {
                aspect: p.unwrap_or(2.5),
            },
            ("trefoil", None) => Builtin::Trefoil,
            ("fourball", None) => Builtin::FourBall,
            ("figure8", None) => Builtin::Figure8,
            ("hairtie", Some(h)) => Builtin::Hairtie { h },
            ("hairtie", None) => {
                return Err(Error::BadBuiltinParameter(
                    "hairtie requires a parameter, e.g. hairtie(0.9)".into(),
                ))
            }
            _ => return Err(Error::UnknownBuiltin(text.to_string())),
        };
        builtin.validate()?;
        Ok(builtin)
    }
}
