use std::str::FromStr;

use num_complex::Complex64;

use cue_moments::exact::parse_rational;
use cue_moments::ExactRational;

/// `"re"` or `"re,im"`. Keeps the exact value of a real input written as
/// an integer, a terminating decimal or `p/q`.
#[derive(Debug, Clone)]
pub struct ComplexArg {
    pub value: Complex64,
    pub exact: Option<ExactRational>,
    pub text: String,
}

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let real = |t: &str| -> Result<(f64, Option<ExactRational>), String> {
            match parse_rational(t) {
                Some(q) => Ok((cue_moments::exact::rational_to_f64(&q), Some(q))),
                None => t
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .map(|v| (v, None))
                    .ok_or_else(|| format!("{t:?} is not a real number")),
            }
        };
        match parts.as_slice() {
            [re] => {
                let (v, q) = real(re)?;
                Ok(Self { value: Complex64::new(v, 0.0), exact: q, text: s.to_owned() })
            }
            [re, im] => {
                let (r, q) = real(re)?;
                let (i, _) = real(im)?;
                let exact = if i == 0.0 { q } else { None };
                Ok(Self { value: Complex64::new(r, i), exact, text: s.to_owned() })
            }
            _ => Err(format!("expected \"re\" or \"re,im\", got {s:?}")),
        }
    }
}

/// Comma-separated reals.
#[derive(Debug, Clone)]
pub struct RealList(pub Vec<f64>);

impl FromStr for RealList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| format!("{t:?} is not a real number")))
            .collect::<Result<Vec<f64>, String>>()
            .map(RealList)
    }
}
