//! Named analytic profiles used to describe spatial fields in configs.
//!
//! Accepted forms (as TOML numbers or strings):
//!
//! * `1.5` or `"1.5"` : constant
//! * `"zero"`
//! * `"gaussian(center, width, amp)"` : `amp * exp(-((x - center) / width)^2)`
//! * `"step(a, b, amp)"` : `amp` on `[a, b]`, zero elsewhere
//! * `"sine(width, amp)"` : `amp * sin(pi * x / width)`

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::DplError;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Profile {
    #[default]
    Zero,
    Constant(f64),
    Gaussian {
        center: f64,
        width: f64,
        amp: f64,
    },
    Step {
        a: f64,
        b: f64,
        amp: f64,
    },
    Sine {
        width: f64,
        amp: f64,
    },
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Profile::Zero => 0.0,
            Profile::Constant(c) => c,
            Profile::Gaussian { center, width, amp } => {
                let s = (x - center) / width;
                amp * (-s * s).exp()
            }
            Profile::Step { a, b, amp } => {
                if (a..=b).contains(&x) {
                    amp
                } else {
                    0.0
                }
            }
            Profile::Sine { width, amp } => amp * (std::f64::consts::PI * x / width).sin(),
        }
    }

    pub fn sample(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Profile::Zero => true,
            Profile::Constant(c) => c == 0.0,
            Profile::Gaussian { amp, .. }
            | Profile::Step { amp, .. }
            | Profile::Sine { amp, .. } => amp == 0.0,
        }
    }

    pub fn scaled(&self, factor: f64) -> Profile {
        match *self {
            Profile::Zero => Profile::Zero,
            Profile::Constant(c) => Profile::Constant(c * factor),
            Profile::Gaussian { center, width, amp } => Profile::Gaussian {
                center,
                width,
                amp: amp * factor,
            },
            Profile::Step { a, b, amp } => Profile::Step {
                a,
                b,
                amp: amp * factor,
            },
            Profile::Sine { width, amp } => Profile::Sine {
                width,
                amp: amp * factor,
            },
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Profile::Zero => write!(f, "zero"),
            Profile::Constant(c) => write!(f, "{c}"),
            Profile::Gaussian { center, width, amp } => {
                write!(f, "gaussian({center}, {width}, {amp})")
            }
            Profile::Step { a, b, amp } => write!(f, "step({a}, {b}, {amp})"),
            Profile::Sine { width, amp } => write!(f, "sine({width}, {amp})"),
        }
    }
}

fn parse_args(body: &str, name: &str, n: usize) -> Result<Vec<f64>, DplError> {
    let args: Result<Vec<f64>, _> = body.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let args = args.map_err(|e| DplError::Config(format!("bad argument in {name}(...): {e}")))?;
    if args.len() != n {
        return Err(DplError::Config(format!(
            "{name}(...) takes {n} arguments, got {}",
            args.len()
        )));
    }
    if args.iter().any(|v| !v.is_finite()) {
        return Err(DplError::Config(format!(
            "{name}(...) arguments must be finite"
        )));
    }
    Ok(args)
}

impl FromStr for Profile {
    type Err = DplError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("zero") {
            return Ok(Profile::Zero);
        }
        if let Ok(c) = s.parse::<f64>() {
            if !c.is_finite() {
                return Err(DplError::Config(format!(
                    "non-finite constant profile {s:?}"
                )));
            }
            return Ok(Profile::Constant(c));
        }
        let (name, rest) = s
            .split_once('(')
            .ok_or_else(|| DplError::Config(format!("unrecognized profile {s:?}")))?;
        let body = rest
            .strip_suffix(')')
            .ok_or_else(|| DplError::Config(format!("unterminated profile {s:?}")))?;
        match name.trim() {
            "gaussian" => {
                let v = parse_args(body, "gaussian", 3)?;
                if v[1] <= 0.0 {
                    return Err(DplError::Config("gaussian width must be positive".into()));
                }
                Ok(Profile::Gaussian {
                    center: v[0],
                    width: v[1],
                    amp: v[2],
                })
            }
            "step" => {
                let v = parse_args(body, "step", 3)?;
                if v[0] > v[1] {
                    return Err(DplError::Config("step(a, b, amp) needs a <= b".into()));
                }
                Ok(Profile::Step {
                    a: v[0],
                    b: v[1],
                    amp: v[2],
                })
            }
            "sine" => {
                let v = parse_args(body, "sine", 2)?;
                if v[0] <= 0.0 {
                    return Err(DplError::Config("sine width must be positive".into()));
                }
                Ok(Profile::Sine {
                    width: v[0],
                    amp: v[1],
                })
            }
            other => Err(DplError::Config(format!("unknown profile name {other:?}"))),
        }
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(v) => Ok(Profile::Constant(v)),
            Raw::Int(v) => Ok(Profile::Constant(v as f64)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match *self {
            Profile::Constant(c) => ser.serialize_f64(c),
            _ => ser.serialize_str(&self.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_profiles() {
        assert_eq!("zero".parse::<Profile>().unwrap(), Profile::Zero);
        assert_eq!("2.5".parse::<Profile>().unwrap(), Profile::Constant(2.5));
        assert_eq!(
            "gaussian(-1.0, 0.2, 3)".parse::<Profile>().unwrap(),
            Profile::Gaussian {
                center: -1.0,
                width: 0.2,
                amp: 3.0
            }
        );
        assert_eq!(
            " step( 0, 1 , 0.5 ) ".parse::<Profile>().unwrap(),
            Profile::Step {
                a: 0.0,
                b: 1.0,
                amp: 0.5
            }
        );
    }

    #[test]
    fn rejects_malformed() {
        assert!("gaussian(1, 2)".parse::<Profile>().is_err());
        assert!("gaussian(1, 0, 1)".parse::<Profile>().is_err());
        assert!("step(2, 1, 1)".parse::<Profile>().is_err());
        assert!("cosine(1)".parse::<Profile>().is_err());
        assert!("gaussian(1,2,3".parse::<Profile>().is_err());
    }

    #[test]
    fn evaluates() {
        let g = Profile::Gaussian {
            center: 1.0,
            width: 0.5,
            amp: 2.0,
        };
        assert_eq!(g.eval(1.0), 2.0);
        assert!((g.eval(1.5) - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        let s = Profile::Step {
            a: 0.0,
            b: 1.0,
            amp: 3.0,
        };
        assert_eq!(s.eval(0.5), 3.0);
        assert_eq!(s.eval(1.5), 0.0);
        let w = Profile::Sine {
            width: 2.0,
            amp: 3.0,
        };
        assert!((w.eval(1.0) - 3.0).abs() < 1e-15);
        assert!(w.eval(2.0).abs() < 1e-15);
    }

    #[test]
    fn display_round_trips() {
        for p in [
            Profile::Zero,
            Profile::Constant(-0.25),
            Profile::Gaussian {
                center: -1.0,
                width: 0.18,
                amp: 1.0,
            },
            Profile::Step {
                a: -2.0,
                b: -1.0,
                amp: 4.0,
            },
            Profile::Sine {
                width: 3.5,
                amp: -2.0,
            },
        ] {
            assert_eq!(p.to_string().parse::<Profile>().unwrap(), p);
        }
    }
}
