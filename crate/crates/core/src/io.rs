//! Profile and utility-vector serialization.
//!
//! JSON profiles look like
//! `{"alternatives":["c1","c2"],"voters":[{"id":"v1","approves":["c1"]}],"k":1}`.
//! The text format is a header line `m n k` followed by one line per voter
//! listing 1-based alternative indices, with `-` for an empty ballot.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ApprovalProfile, Instance, UtilityVector};
use crate::rational::Rational;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileJson {
    alternatives: Vec<String>,
    voters: Vec<VoterJson>,
    k: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VoterJson {
    id: String,
    approves: Vec<String>,
}

pub fn parse_profile_json(text: &str) -> Result<Instance> {
    let raw: ProfileJson = serde_json::from_str(text)?;
    let mut voter_names = Vec::with_capacity(raw.voters.len());
    let mut approvals = Vec::with_capacity(raw.voters.len());
    for voter in raw.voters {
        let set = voter
            .approves
            .iter()
            .map(|name| {
                raw.alternatives
                    .iter()
                    .position(|a| a == name)
                    .ok_or_else(|| Error::UnknownAlternative(name.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        voter_names.push(voter.id);
        approvals.push(set);
    }
    let profile = ApprovalProfile::new(raw.alternatives, voter_names, approvals)?;
    Instance::new(profile, raw.k)
}

pub fn to_profile_json(instance: &Instance) -> String {
    let p = instance.profile();
    let raw = ProfileJson {
        alternatives: p.alternative_names().to_vec(),
        voters: (0..p.num_voters())
            .map(|v| VoterJson {
                id: p.voter_name(v).to_string(),
                approves: p
                    .approvals(v)
                    .iter()
                    .map(|&c| p.alternative_name(c).to_string())
                    .collect(),
            })
            .collect(),
        k: instance.k(),
    };
    serde_json::to_string(&raw).expect("profile serializes")
}

pub fn parse_profile_text(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header \"m n k\"".into(),
    })?;
    let nums = header
        .split_whitespace()
        .map(|t| parse_uint(hline, t))
        .collect::<Result<Vec<_>>>()?;
    let [m, n, k] = nums[..] else {
        return Err(Error::Parse {
            line: hline,
            message: format!("header must have 3 fields, found {}", nums.len()),
        });
    };
    let mut approvals = Vec::with_capacity(n);
    for (line, body) in lines {
        if approvals.len() == n {
            return Err(Error::Parse {
                line,
                message: format!("expected {n} ballot lines, found more"),
            });
        }
        let mut set = Vec::new();
        if body != "-" {
            for tok in body.split_whitespace() {
                let idx = parse_uint(line, tok)?;
                if idx == 0 || idx > m {
                    return Err(Error::Parse {
                        line,
                        message: format!("index {idx} out of range [1, {m}]"),
                    });
                }
                set.push(idx - 1);
            }
        }
        approvals.push(set);
    }
    if approvals.len() != n {
        return Err(Error::Parse {
            line: hline,
            message: format!("expected {n} ballot lines, found {}", approvals.len()),
        });
    }
    Instance::new(ApprovalProfile::from_approvals(m, approvals)?, k)
}

fn parse_uint(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a nonnegative integer, found {tok:?}"),
    })
}

/// Text form of an instance. Names are dropped; indices are 1-based.
pub fn to_profile_text(instance: &Instance) -> String {
    let p = instance.profile();
    let mut out = format!("{} {} {}\n", instance.m(), instance.n(), instance.k());
    for v in 0..p.num_voters() {
        let a = p.approvals(v);
        if a.is_empty() {
            out.push('-');
        } else {
            let toks: Vec<String> = a.iter().map(|c| (c + 1).to_string()).collect();
            out.push_str(&toks.join(" "));
        }
        out.push('\n');
    }
    out
}

pub fn serialize_utility_vector(alpha: &UtilityVector) -> String {
    serde_json::to_string(alpha).expect("vector serializes")
}

pub fn parse_utility_vector(text: &str, n: usize) -> Result<UtilityVector> {
    let raw: Vec<String> = serde_json::from_str(text)?;
    let values = raw
        .iter()
        .map(|s| s.parse::<Rational>())
        .collect::<Result<Vec<_>>>()?;
    let alpha = UtilityVector::new(values)?;
    alpha.check_len(n)?;
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_text_profile() {
        let inst = parse_profile_text("3 4 2\n1\n1\n1 2\n2 3").unwrap();
        assert_eq!((inst.m(), inst.n(), inst.k()), (3, 4, 2));
        assert_eq!(inst.profile().approvals(3), &[1, 2]);
        assert_eq!(inst.profile().voter_name(0), "v1");
    }

    #[test]
    fn empty_ballot_in_text() {
        let inst = parse_profile_text("1 1 1\n-").unwrap();
        assert!(inst.profile().approvals(0).is_empty());
    }

    #[test]
    fn text_errors() {
        assert!(matches!(parse_profile_text("2 1 2\n3"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_profile_text("2 2 1\n1").is_err());
        assert!(parse_profile_text("2 1 1\n1\n2").is_err());
        assert!(parse_profile_text("2 1 1\nx").is_err());
        assert!(parse_profile_text("2 1\n1").is_err());
    }

    #[test]
    fn json_errors() {
        let unknown = r#"{"alternatives":["a"],"voters":[{"id":"v","approves":["b"]}],"k":1}"#;
        assert!(matches!(parse_profile_json(unknown), Err(Error::UnknownAlternative(_))));
        let k0 = r#"{"alternatives":["a"],"voters":[],"k":0}"#;
        assert!(matches!(parse_profile_json(k0), Err(Error::KOutOfRange { .. })));
        assert!(matches!(parse_profile_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn utility_vector_io() {
        let a = UtilityVector::new(vec![Rational::frac(4, 3), Rational::one()]).unwrap();
        assert_eq!(serialize_utility_vector(&a), r#"["4/3","1"]"#);
        assert_eq!(parse_utility_vector(r#"["4/3","1"]"#, 2).unwrap(), a);
        assert!(matches!(parse_utility_vector(r#"["1/0"]"#, 1), Err(Error::ZeroDenominator)));
        assert!(matches!(
            parse_utility_vector(r#"["1"]"#, 2),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            parse_utility_vector(r#"["-1"]"#, 1),
            Err(Error::NegativeUtility { .. })
        ));
    }
}
