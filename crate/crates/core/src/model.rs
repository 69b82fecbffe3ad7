//! Profiles, instances, index sets and utility vectors.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Scoring rule tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Av,
    Sav,
    Cc,
    Pav,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::Av, Rule::Sav, Rule::Cc, Rule::Pav];

    /// AV and SAV decompose over alternatives as well as voters.
    pub fn is_totally_separable(self) -> bool {
        matches!(self, Rule::Av | Rule::Sav)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Av => "av",
            Rule::Sav => "sav",
            Rule::Cc => "cc",
            Rule::Pav => "pav",
        })
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "av" => Ok(Rule::Av),
            "sav" => Ok(Rule::Sav),
            "cc" => Ok(Rule::Cc),
            "pav" => Ok(Rule::Pav),
            other => Err(format!("unknown rule {other:?} (expected av, sav, cc or pav)")),
        }
    }
}

macro_rules! index_set {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Vec<usize>);

        impl $name {
            /// Sorts and deduplicates the given indices.
            pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
                let mut v: Vec<usize> = members.into_iter().collect();
                v.sort_unstable();
                v.dedup();
                $name(v)
            }

            pub fn empty() -> Self {
                $name(Vec::new())
            }

            pub fn members(&self) -> &[usize] {
                &self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn contains(&self, index: usize) -> bool {
                self.0.binary_search(&index).is_ok()
            }

            pub fn iter(&self) -> impl Iterator<Item = &usize> + '_ {
                self.0.iter()
            }

            pub fn into_vec(self) -> Vec<usize> {
                self.0
            }
        }

        impl FromIterator<usize> for $name {
            fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
                $name::new(iter)
            }
        }

        impl<'a> IntoIterator for &'a $name {
            type Item = &'a usize;
            type IntoIter = std::slice::Iter<'a, usize>;
            fn into_iter(self) -> Self::IntoIter {
                self.0.iter()
            }
        }
    };
}

index_set!(
    /// A set of alternative indices in ascending order.
    Committee
);
index_set!(
    /// A set of voter indices in ascending order.
    Coalition
);

impl Committee {
    pub fn check(&self, profile: &ApprovalProfile) -> Result<()> {
        check_indices("alternative", &self.0, profile.num_alternatives())
    }
}

impl Coalition {
    pub fn check(&self, profile: &ApprovalProfile) -> Result<()> {
        check_indices("voter", &self.0, profile.num_voters())
    }

    pub fn grand(n: usize) -> Self {
        Coalition((0..n).collect())
    }
}

fn check_indices(kind: &'static str, indices: &[usize], limit: usize) -> Result<()> {
    match indices.iter().find(|&&i| i >= limit) {
        Some(&index) => Err(Error::IndexOutOfRange { kind, index, limit }),
        None => Ok(()),
    }
}

/// Alternatives, voters and their approval sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApprovalProfile {
    alternative_names: Vec<String>,
    voter_names: Vec<String>,
    approvals: Vec<Vec<usize>>,
}

impl ApprovalProfile {
    pub fn new(
        alternative_names: Vec<String>,
        voter_names: Vec<String>,
        approvals: Vec<Vec<usize>>,
    ) -> Result<Self> {
        check_names(&alternative_names)?;
        check_names(&voter_names)?;
        if approvals.len() != voter_names.len() {
            return Err(Error::LengthMismatch {
                expected: voter_names.len(),
                actual: approvals.len(),
            });
        }
        let m = alternative_names.len();
        let approvals = approvals
            .into_iter()
            .map(|a| {
                check_indices("alternative", &a, m)?;
                let mut a = a;
                a.sort_unstable();
                a.dedup();
                Ok(a)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ApprovalProfile {
            alternative_names,
            voter_names,
            approvals,
        })
    }

    /// Profile with generated names `c1..cm` and `v1..vn`.
    pub fn from_approvals(m: usize, approvals: Vec<Vec<usize>>) -> Result<Self> {
        let alts = (1..=m).map(|j| format!("c{j}")).collect();
        let voters = (1..=approvals.len()).map(|i| format!("v{i}")).collect();
        ApprovalProfile::new(alts, voters, approvals)
    }

    pub fn num_alternatives(&self) -> usize {
        self.alternative_names.len()
    }

    pub fn num_voters(&self) -> usize {
        self.voter_names.len()
    }

    /// Sorted approval set of voter `i`.
    pub fn approvals(&self, voter: usize) -> &[usize] {
        &self.approvals[voter]
    }

    pub fn all_approvals(&self) -> &[Vec<usize>] {
        &self.approvals
    }

    pub fn approves(&self, voter: usize, alternative: usize) -> bool {
        self.approvals[voter].binary_search(&alternative).is_ok()
    }

    /// Voters approving `alternative`, ascending.
    pub fn approvers(&self, alternative: usize) -> Vec<usize> {
        (0..self.num_voters())
            .filter(|&v| self.approves(v, alternative))
            .collect()
    }

    pub fn alternative_names(&self) -> &[String] {
        &self.alternative_names
    }

    pub fn voter_names(&self) -> &[String] {
        &self.voter_names
    }

    pub fn alternative_name(&self, index: usize) -> &str {
        &self.alternative_names[index]
    }

    pub fn voter_name(&self, index: usize) -> &str {
        &self.voter_names[index]
    }

    pub fn alternative_index(&self, name: &str) -> Result<usize> {
        self.alternative_names
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAlternative(name.to_string()))
    }

    pub fn voter_index(&self, name: &str) -> Result<usize> {
        self.voter_names
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVoter(name.to_string()))
    }

    pub fn check_voter(&self, voter: usize) -> Result<()> {
        check_indices("voter", &[voter], self.num_voters())
    }
}

fn check_names(names: &[String]) -> Result<()> {
    let mut seen = HashMap::with_capacity(names.len());
    for name in names {
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        if seen.insert(name.as_str(), ()).is_some() {
            return Err(Error::DuplicateName(name.clone()));
        }
    }
    Ok(())
}

/// A profile together with the committee size `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    profile: ApprovalProfile,
    k: usize,
}

impl Instance {
    pub fn new(profile: ApprovalProfile, k: usize) -> Result<Self> {
        let m = profile.num_alternatives();
        if k == 0 || k > m {
            return Err(Error::KOutOfRange { k, m });
        }
        Ok(Instance { profile, k })
    }

    /// Shorthand for [`ApprovalProfile::from_approvals`] followed by [`Instance::new`].
    pub fn from_approvals(m: usize, approvals: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        Instance::new(ApprovalProfile::from_approvals(m, approvals)?, k)
    }

    pub fn profile(&self) -> &ApprovalProfile {
        &self.profile
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.profile.num_voters()
    }

    pub fn m(&self) -> usize {
        self.profile.num_alternatives()
    }

    /// Committee from alternative names.
    pub fn committee<S: AsRef<str>>(&self, names: &[S]) -> Result<Committee> {
        names
            .iter()
            .map(|s| self.profile.alternative_index(s.as_ref()))
            .collect()
    }

    /// Coalition from voter names.
    pub fn coalition<S: AsRef<str>>(&self, names: &[S]) -> Result<Coalition> {
        names
            .iter()
            .map(|s| self.profile.voter_index(s.as_ref()))
            .collect()
    }

    pub fn committee_names(&self, committee: &Committee) -> Vec<String> {
        committee
            .iter()
            .map(|&c| self.profile.alternative_name(c).to_string())
            .collect()
    }

    pub fn coalition_names(&self, coalition: &Coalition) -> Vec<String> {
        coalition
            .iter()
            .map(|&v| self.profile.voter_name(v).to_string())
            .collect()
    }
}

/// Nonnegative per-voter payoffs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct UtilityVector(Vec<Rational>);

impl UtilityVector {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(index) = values.iter().position(Rational::is_negative) {
            return Err(Error::NegativeUtility {
                index,
                value: values[index].to_string(),
            });
        }
        Ok(UtilityVector(values))
    }

    pub fn zeros(n: usize) -> Self {
        UtilityVector(vec![Rational::zero(); n])
    }

    /// Integer vector; always nonnegative.
    pub fn from_integers(values: &[u64]) -> Self {
        UtilityVector(values.iter().map(|&x| Rational::from_integer(x)).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, voter: usize) -> &Rational {
        &self.0[voter]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.0.iter()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn sum_over(&self, coalition: &Coalition) -> Rational {
        coalition.iter().map(|&v| &self.0[v]).sum()
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() == n {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: n,
                actual: self.0.len(),
            })
        }
    }
}

impl<'de> Deserialize<'de> for UtilityVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<Rational>::deserialize(d)?;
        UtilityVector::new(values).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for UtilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}
