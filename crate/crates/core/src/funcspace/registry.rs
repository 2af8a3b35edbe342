//! Textual names for the built-in function families, as used on the command
//! line and in configuration files.
//!
//! Line families: `gaussian[:center,sigma]`, `bump[:center,radius]`,
//! `indicator[:a,b]`, `power[:s]`, `exp[:rate]`, `rayleigh`.
//!
//! Periodic families: `trigpoly:k=<int>:<re>[:<im>],...`, `const[:c]`,
//! `basis:k`, `cos[:k]`, `holder-cusp[:gamma[,shift]]`.

use std::str::FromStr;

use num_complex::Complex64;

use super::circle::PeriodicFn;
use super::line::Function1D;
use crate::error::{Error, Result};

fn split(s: &str) -> (&str, Option<&str>) {
    match s.trim().split_once(':') {
        Some((name, rest)) => (name.trim(), Some(rest.trim())),
        None => (s.trim(), None),
    }
}

fn numbers(input: &str, args: Option<&str>, defaults: &[f64]) -> Result<Vec<f64>> {
    let Some(args) = args else {
        return Ok(defaults.to_vec());
    };
    let vals = args
        .split(',')
        .map(|a| a.trim().parse::<f64>().map_err(|_| Error::parse(input, format!("`{a}` is not a number"))))
        .collect::<Result<Vec<_>>>()?;
    if vals.len() > defaults.len() {
        return Err(Error::parse(input, format!("expected at most {} parameters", defaults.len())));
    }
    let mut out = defaults.to_vec();
    out[..vals.len()].copy_from_slice(&vals);
    Ok(out)
}

impl FromStr for Function1D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = split(s);
        match name {
            "gaussian" => {
                let v = numbers(s, args, &[0.0, 1.0])?;
                Function1D::gaussian(v[0], v[1])
            }
            "bump" => {
                let v = numbers(s, args, &[0.0, 1.0])?;
                Function1D::bump(v[0], v[1])
            }
            "indicator" => {
                let v = numbers(s, args, &[0.0, 1.0])?;
                Function1D::indicator(v[0], v[1])
            }
            "power" => Function1D::power(numbers(s, args, &[0.5])?[0]),
            "exp" => Function1D::exp(numbers(s, args, &[1.0])?[0]),
            "rayleigh" => {
                numbers(s, args, &[])?;
                Ok(Function1D::rayleigh())
            }
            _ => Err(Error::parse(s, "unknown function family")),
        }
    }
}

fn parse_coeffs(input: &str, body: &str) -> Result<Vec<(i64, Complex64)>> {
    body.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|term| {
            let term = term.trim();
            let rest = term
                .strip_prefix("k=")
                .ok_or_else(|| Error::parse(input, format!("coefficient `{term}` must look like k=<int>:<re>[:<im>]")))?;
            let mut parts = rest.split(':');
            let k: i64 = parts
                .next()
                .and_then(|p| p.trim().parse().ok())
                .ok_or_else(|| Error::parse(input, format!("bad frequency in `{term}`")))?;
            let num = |p: Option<&str>, default: Option<f64>| -> Result<f64> {
                match p {
                    Some(p) => p.trim().parse().map_err(|_| Error::parse(input, format!("bad number in `{term}`"))),
                    None => default.ok_or_else(|| Error::parse(input, format!("missing real part in `{term}`"))),
                }
            };
            let re = num(parts.next(), None)?;
            let im = num(parts.next(), Some(0.0))?;
            if parts.next().is_some() {
                return Err(Error::parse(input, format!("too many fields in `{term}`")));
            }
            Ok((k, Complex64::new(re, im)))
        })
        .collect()
}

impl FromStr for PeriodicFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = split(s);
        match name {
            "trigpoly" => {
                let body = args.ok_or_else(|| Error::parse(s, "trigpoly needs coefficients"))?;
                let pairs = parse_coeffs(s, body)?;
                if pairs.is_empty() {
                    return Err(Error::parse(s, "trigpoly needs at least one coefficient"));
                }
                Ok(PeriodicFn::trig_poly(&pairs))
            }
            "const" => Ok(PeriodicFn::constant(numbers(s, args, &[1.0])?[0])),
            "basis" => {
                let k = args
                    .and_then(|a| a.parse::<i64>().ok())
                    .ok_or_else(|| Error::parse(s, "basis needs an integer frequency"))?;
                Ok(PeriodicFn::basis(k))
            }
            "cos" => {
                let k = match args {
                    None => 1,
                    Some(a) => a.parse::<i64>().map_err(|_| Error::parse(s, "cos needs an integer frequency"))?,
                };
                // cos kt = √(π/2)(e_k + e_{-k})
                let c = Complex64::new((std::f64::consts::PI / 2.0).sqrt(), 0.0);
                if k == 0 {
                    return Ok(PeriodicFn::constant(1.0));
                }
                Ok(PeriodicFn::trig_poly(&[(k, c), (-k, c)]))
            }
            "holder-cusp" => {
                let v = numbers(s, args, &[0.5, 0.0])?;
                PeriodicFn::holder_cusp(v[0], v[1])
            }
            _ => Err(Error::parse(s, "unknown periodic family")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{Periodic, RealFunction};

    #[test]
    fn line_families_parse_and_display() {
        for s in ["gaussian:0.5,2", "bump:0,1", "indicator:0,1", "power:0.5", "exp:2", "rayleigh"] {
            let f: Function1D = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        let g: Function1D = "gaussian".parse().unwrap();
        assert_eq!(g.to_string(), "gaussian:0,1");
    }

    #[test]
    fn line_family_errors() {
        for s in ["nope", "gaussian:a", "gaussian:0,-1", "power:1.5", "indicator:2,1", "gaussian:1,2,3", "rayleigh:1"] {
            assert!(s.parse::<Function1D>().is_err(), "{s}");
        }
    }

    #[test]
    fn periodic_families_parse() {
        let p: PeriodicFn = "trigpoly:k=1:1".parse().unwrap();
        assert_eq!(p.spectrum().unwrap().get(1), Complex64::new(1.0, 0.0));
        let q: PeriodicFn = "trigpoly:k=-3:0.5:2,k=2:1".parse().unwrap();
        assert_eq!(q.spectrum().unwrap().get(-3), Complex64::new(0.5, 2.0));
        let c: PeriodicFn = "const:2".parse().unwrap();
        assert!((c.eval(0.3).re - 2.0).abs() < 1e-15);
        let cos: PeriodicFn = "cos:2".parse().unwrap();
        assert!((cos.eval(0.4).re - 0.8f64.cos()).abs() < 1e-15);
        let h: PeriodicFn = "holder-cusp:0.25".parse().unwrap();
        assert!(matches!(h, PeriodicFn::HolderCusp { gamma, .. } if gamma == 0.25));
        for bad in ["trigpoly", "trigpoly:x=1:1", "trigpoly:k=1", "holder-cusp:1.5", "basis", "wave"] {
            assert!(bad.parse::<PeriodicFn>().is_err(), "{bad}");
        }
    }

    #[test]
    fn parsed_gaussian_evaluates() {
        let f: Function1D = "gaussian:1,2".parse().unwrap();
        assert_eq!(f.eval(1.0), 1.0);
    }
}
