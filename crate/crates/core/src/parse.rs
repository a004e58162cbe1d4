//! Text inputs: q lists, level ranges, family names, suite names, and the
//! versioned JSON envelope for reports.

use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::chartab::SigmaFamily;
use crate::error::{Error, Result};
use crate::ffield::prime_power;
use crate::verify::Suite;

/// Current version of every JSON and CSV layout.
pub const SCHEMA: &str = "1";
/// Longest list [`parse_n_list`] and [`parse_q_list`] will expand.
pub const LIST_LIMIT: usize = 100_000;

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

/// Comma-separated prime powers, e.g. `2,3,4`.
pub fn parse_q_list(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let q: u64 = part.parse().map_err(|_| usage(format!("`{part}` is not a field size")))?;
        if prime_power(q).is_none() {
            return Err(usage(format!("q = {q} is not a prime power")));
        }
        out.push(q);
        if out.len() > LIST_LIMIT {
            return Err(usage("q list too long"));
        }
    }
    Ok(out)
}

/// Comma-separated levels or inclusive ranges, e.g. `4`, `1..8`, `1,3,5..7`.
pub fn parse_n_list(s: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let num = |t: &str| -> Result<i64> {
            t.trim().parse().map_err(|_| usage(format!("`{t}` is not a level")))
        };
        let (lo, hi) = match part.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let n = num(part)?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(usage(format!("empty range `{part}`")));
        }
        if (hi - lo) as u128 + out.len() as u128 >= LIST_LIMIT as u128 {
            return Err(usage("level list too long"));
        }
        out.extend(lo..=hi);
    }
    Ok(out)
}

/// A family as typed on the command line. `typeI`/`typeII` pick the family
/// of that type matching the parity of `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaArg {
    Family(SigmaFamily),
    TypeI,
    TypeII,
}

impl SigmaArg {
    pub fn resolve(&self, q: u64) -> Result<SigmaFamily> {
        let s = match self {
            SigmaArg::Family(s) => s.clone(),
            SigmaArg::TypeI => SigmaFamily::generic(false, q.is_multiple_of(2)),
            SigmaArg::TypeII => SigmaFamily::generic(true, q.is_multiple_of(2)),
        };
        s.check_parity(q)?;
        Ok(s)
    }
}

impl FromStr for SigmaArg {
    type Err = Error;

    /// `chi5`, `chi4`, `x4`, `x5`, `nongeneric`, `typeI`, `typeII`, optionally
    /// with parameter names in parentheses, e.g. `chi4(a,b)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once('(') {
            Some((n, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| usage(format!("unclosed `(` in `{s}`")))?;
                let args: Vec<String> = inner.split(',').map(|a| a.trim().to_string()).collect();
                if args.iter().any(|a| a.is_empty() || a.contains(['(', ')'])) {
                    return Err(usage(format!("bad parameters in `{s}`")));
                }
                (n.trim(), Some(args))
            }
            None => (s, None),
        };
        let arity = |want: usize, defaults: &[&str]| -> Result<Vec<String>> {
            match &args {
                None => Ok(defaults.iter().map(|d| d.to_string()).collect()),
                Some(a) if a.len() == want => Ok(a.clone()),
                Some(a) => Err(usage(format!("`{name}` takes {want} parameters, got {}", a.len()))),
            }
        };
        let fam = match name.to_ascii_lowercase().as_str() {
            "chi5" => {
                let a = arity(1, &["k"])?;
                SigmaFamily::Chi5(a[0].clone())
            }
            "chi4" => {
                let a = arity(2, &["k", "l"])?;
                SigmaFamily::Chi4(a[0].clone(), a[1].clone())
            }
            "x4" => {
                let a = arity(1, &["Θ"])?;
                SigmaFamily::X4(a[0].clone())
            }
            "x5" => {
                let a = arity(2, &["Λ", "ω"])?;
                SigmaFamily::X5(a[0].clone(), a[1].clone())
            }
            "nongeneric" | "typei" | "typeii" if args.is_some() => {
                return Err(usage(format!("`{name}` takes no parameters")))
            }
            "nongeneric" => SigmaFamily::Nongeneric,
            "typei" => return Ok(SigmaArg::TypeI),
            "typeii" => return Ok(SigmaArg::TypeII),
            _ => return Err(usage(format!("unknown family `{name}`"))),
        };
        Ok(SigmaArg::Family(fam))
    }
}

/// `counts`, `rg`, `chartab`, `theorem`, or `all`.
pub fn parse_suite(s: &str) -> Result<Vec<Suite>> {
    match s.trim().to_ascii_lowercase().as_str() {
        "all" => Ok(Suite::ALL.to_vec()),
        name => Suite::ALL
            .iter()
            .find(|x| x.name() == name)
            .map(|x| vec![*x])
            .ok_or_else(|| usage(format!("unknown suite `{name}`"))),
    }
}

/// Serializes `x` as a JSON object carrying `"schema": "1"` and `"kind"`.
pub fn encode_report<T: Serialize>(kind: &str, x: &T) -> Result<String> {
    let body = serde_json::to_value(x).map_err(|e| usage(e.to_string()))?;
    let mut obj = Map::new();
    obj.insert("schema".into(), Value::String(SCHEMA.into()));
    obj.insert("kind".into(), Value::String(kind.into()));
    obj.insert("report".into(), body);
    serde_json::to_string_pretty(&Value::Object(obj)).map_err(|e| usage(e.to_string()))
}

/// Inverse of [`encode_report`]. Rejects other schema versions and kinds.
pub fn decode_report<T: DeserializeOwned>(kind: &str, s: &str) -> Result<T> {
    let v: Value = serde_json::from_str(s).map_err(|e| usage(format!("bad JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| usage("report is not a JSON object"))?;
    match obj.get("schema").and_then(Value::as_str) {
        Some(SCHEMA) => {}
        other => return Err(usage(format!("unsupported schema {other:?}"))),
    }
    match obj.get("kind").and_then(Value::as_str) {
        Some(k) if k == kind => {}
        other => return Err(usage(format!("expected a `{kind}` report, got {other:?}"))),
    }
    let body = obj.get("report").cloned().ok_or_else(|| usage("missing `report`"))?;
    serde_json::from_value(body).map_err(|e| usage(format!("bad `{kind}` report: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::{dim_klingen, DimReport, DimRequest, Mode};

    #[test]
    fn lists() {
        assert_eq!(parse_q_list("2, 3,4").unwrap(), vec![2, 3, 4]);
        assert!(parse_q_list("6").is_err());
        assert!(parse_q_list("").is_err());
        assert_eq!(parse_n_list("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_n_list("2,5..=6").unwrap(), vec![2, 5, 6]);
        assert!(parse_n_list("4..1").is_err());
        assert!(parse_n_list("0..99999999999").is_err());
    }

    #[test]
    fn families() {
        assert_eq!("chi5".parse::<SigmaArg>().unwrap(), SigmaArg::Family(SigmaFamily::Chi5("k".into())));
        assert_eq!(
            "X5(a, b)".parse::<SigmaArg>().unwrap(),
            SigmaArg::Family(SigmaFamily::X5("a".into(), "b".into()))
        );
        assert_eq!("typeII".parse::<SigmaArg>().unwrap().resolve(3).unwrap(), SigmaFamily::generic(true, false));
        assert!("chi5".parse::<SigmaArg>().unwrap().resolve(3).is_err());
        assert!("chi4(a)".parse::<SigmaArg>().is_err());
        assert!("typeI(x)".parse::<SigmaArg>().is_err());
        assert!("chi5(".parse::<SigmaArg>().is_err());
    }

    #[test]
    fn suites() {
        assert_eq!(parse_suite("all").unwrap().len(), 4);
        assert_eq!(parse_suite("rg").unwrap(), vec![Suite::Rg]);
        assert!(parse_suite("everything").is_err());
    }

    #[test]
    fn envelope_round_trip() {
        let r = dim_klingen(&DimRequest::new(2, 6, SigmaFamily::generic(true, true)), Mode::Both).unwrap();
        let s = encode_report("dim", &r).unwrap();
        assert!(s.contains("\"schema\": \"1\""));
        assert_eq!(decode_report::<DimReport>("dim", &s).unwrap(), r);
        assert!(decode_report::<DimReport>("verify", &s).is_err());
        assert!(decode_report::<DimReport>("dim", &s.replace("\"1\"", "\"2\"")).is_err());
    }
}
