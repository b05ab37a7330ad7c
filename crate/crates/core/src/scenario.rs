//! Wire format for scenario configurations. Rationals travel as
//! "numerator/denominator" strings so exactness survives serialization;
//! every structural constraint is re-checked at load time.

use std::str::FromStr;

use num::{BigInt, BigRational, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::duality::{Mutation, Scenario};
use crate::error::{AlgebraError, Result};
use crate::psdo::Window;

/// Exact rational carried as a string on the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatStr(pub BigRational);

/// Parse "a/b" or "a" into an exact rational; rejects zero denominators
/// without panicking.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let numer = BigInt::from_str(num)
        .map_err(|e| AlgebraError::InvalidInput(format!("bad numerator {:?}: {}", num, e)))?;
    let denom = BigInt::from_str(den)
        .map_err(|e| AlgebraError::InvalidInput(format!("bad denominator {:?}: {}", den, e)))?;
    if denom.is_zero() {
        return Err(AlgebraError::InvalidInput(format!(
            "zero denominator in {:?}",
            s
        )));
    }
    Ok(BigRational::new(numer, denom))
}

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s)
            .map(RatStr)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WindowConfig {
    pub z_min: i64,
    pub z_max: i64,
    pub d_min: i64,
    pub d_max: i64,
}

impl WindowConfig {
    pub fn to_window(&self) -> Result<Window> {
        Window::working(self.z_min, self.z_max, self.d_min, self.d_max)
    }
}

/// Parse the command-line window flag "zmin,zmax,dmin,dmax".
pub fn parse_window_flag(s: &str) -> Result<WindowConfig> {
    let parts: Vec<&str> = s.split(',').map(|p| p.trim()).collect();
    if parts.len() != 4 {
        return Err(AlgebraError::InvalidInput(
            "window flag wants four comma-separated integers".into(),
        ));
    }
    let mut vals = [0i64; 4];
    for (t, p) in parts.iter().enumerate() {
        vals[t] = p
            .parse()
            .map_err(|e| AlgebraError::InvalidInput(format!("bad window bound {:?}: {}", p, e)))?;
    }
    let wc = WindowConfig {
        z_min: vals[0],
        z_max: vals[1],
        d_min: vals[2],
        d_max: vals[3],
    };
    wc.to_window()?;
    Ok(wc)
}

/// One verification scenario as found in a config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaudinConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub d: u16,
    pub p: u16,
    pub q: u16,
    pub m: u16,
    pub n: u16,
    pub xi: Vec<u32>,
    pub gamma: Vec<u32>,
    pub w: Vec<RatStr>,
    pub z: Vec<RatStr>,
    #[serde(default)]
    pub window: Option<WindowConfig>,
    #[serde(default)]
    pub gen_window: Option<WindowConfig>,
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default)]
    pub mutation: Option<String>,
}

impl GaudinConfig {
    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| AlgebraError::InvalidInput(format!("config parse error: {}", e)))
    }

    /// Default working window: both exponents in [-8, d+2].
    pub fn default_window(&self) -> WindowConfig {
        WindowConfig {
            z_min: -8,
            z_max: self.d as i64 + 2,
            d_min: -8,
            d_max: self.d as i64 + 2,
        }
    }

    /// Default generator window, small enough for enveloping-algebra
    /// commutator sweeps.
    pub fn default_gen_window(&self) -> WindowConfig {
        WindowConfig {
            z_min: -4,
            z_max: self.d as i64 + 1,
            d_min: -4,
            d_max: self.d as i64 + 1,
        }
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        let window = self
            .window
            .unwrap_or_else(|| self.default_window())
            .to_window()?;
        let gen_window = self
            .gen_window
            .unwrap_or_else(|| self.default_gen_window())
            .to_window()?;
        let mutation = match self.mutation.as_deref() {
            None => None,
            Some("flip-xy-sign") => Some(Mutation::FlipXySign),
            Some("flip-xx-sign") => Some(Mutation::FlipXxSign),
            Some(other) => {
                return Err(AlgebraError::InvalidInput(format!(
                    "unknown mutation {:?}",
                    other
                )))
            }
        };
        let sc = Scenario {
            name: self.name.clone().unwrap_or_else(|| "scenario".into()),
            d: self.d,
            p: self.p,
            q: self.q,
            m: self.m,
            n: self.n,
            xi: self.xi.clone(),
            gamma: self.gamma.clone(),
            w: self.w.iter().map(|r| r.0.clone()).collect(),
            z: self.z.iter().map(|r| r.0.clone()).collect(),
            window,
            gen_window,
            mutation,
        };
        sc.validate()?;
        Ok(sc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/4").unwrap(), crate::ring::rat(3, 4));
        assert_eq!(parse_rational("-5").unwrap(), crate::ring::rat(-5, 1));
        assert_eq!(parse_rational(" 7 / -2 ").unwrap(), crate::ring::rat(-7, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn window_flag_parsing() {
        let w = parse_window_flag("-8,3,-8,3").unwrap();
        assert_eq!((w.z_min, w.z_max, w.d_min, w.d_max), (-8, 3, -8, 3));
        assert!(parse_window_flag("1,2,3").is_err());
        assert!(parse_window_flag("5,1,0,0").is_err());
    }

    #[test]
    fn config_roundtrip_and_validation() {
        let text = r#"{
            "name": "d1-m1",
            "d": 1, "p": 0, "q": 0, "m": 1, "n": 0,
            "xi": [1], "gamma": [1],
            "w": ["1"], "z": ["1/2"],
            "suites": ["duality"]
        }"#;
        let cfg = GaudinConfig::parse_json(text).unwrap();
        let sc = cfg.to_scenario().unwrap();
        assert_eq!(sc.d, 1);
        assert_eq!(sc.z[0], crate::ring::rat(1, 2));
        // malformed composition is rejected
        let bad = r#"{
            "d": 2, "p": 0, "q": 0, "m": 1, "n": 0,
            "xi": [1], "gamma": [1],
            "w": ["1"], "z": ["1/2"]
        }"#;
        let cfg2 = GaudinConfig::parse_json(bad).unwrap();
        assert!(cfg2.to_scenario().is_err());
        // serialization keeps rationals as strings
        let back = serde_json::to_string(&cfg).unwrap();
        assert!(back.contains("\"1/2\""));
    }
}
