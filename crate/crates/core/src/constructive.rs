//! Constructive core elements, justified representation and the utility
//! bijections between AV, PAV and SAV.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ApprovalProfile, Coalition, Committee, Instance, Rule, UtilityVector};
use crate::rational::Rational;
use crate::scoring::{induced_scores, score_unchecked};

/// Payoffs in the TU core for a totally separable rule (AV or SAV).
///
/// Alternatives are ranked by total score (ties to the lower index). Every
/// voter receives the equal share `k * score(c_k) / n` of the `k`-th
/// alternative's score, and each of the first `k - 1` alternatives hands out
/// its surplus over `c_k` to its supporters in proportion to their scores.
pub fn algorithm1_totsep(instance: &Instance, rule: Rule) -> Result<UtilityVector> {
    if !rule.is_totally_separable() {
        return Err(Error::UnsupportedRule(
            rule,
            "the construction needs a totally separable rule (av or sav)",
        ));
    }
    let p = instance.profile();
    Ok(separable_allocation(instance, |v, c| {
        score_unchecked(rule, p, v, &Committee::new([c]))
    }))
}

fn separable_allocation(
    instance: &Instance,
    pair: impl Fn(usize, usize) -> Rational,
) -> UtilityVector {
    let (n, m, k) = (instance.n(), instance.m(), instance.k());
    if n == 0 {
        return UtilityVector::zeros(0);
    }
    let table: Vec<Vec<Rational>> = (0..n).map(|v| (0..m).map(|c| pair(v, c)).collect()).collect();
    let totals: Vec<Rational> = (0..m).map(|c| table.iter().map(|row| &row[c]).sum()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| totals[b].cmp(&totals[a]).then(a.cmp(&b)));
    let last = &totals[order[k - 1]];
    let base = last * &Rational::frac(k as i64, n as i64);
    let values = (0..n)
        .map(|v| {
            let mut x = base.clone();
            for &c in &order[..k - 1] {
                let s = &table[v][c];
                if !s.is_zero() {
                    x += &(&totals[c] - last) / &totals[c] * s;
                }
            }
            x
        })
        .collect();
    UtilityVector::new(values).expect("allocation is nonnegative")
}

/// How the greedy CC construction breaks ties between equally good alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LowestIndex,
    HighestIndex,
}

/// Greedy CC committee: repeatedly add the alternative approved by the most
/// still-unrepresented voters, then pad with the lowest unused indices.
/// Returns the induced CC utilities and the committee.
pub fn algorithm2_greedy_cc(instance: &Instance) -> (UtilityVector, Committee) {
    algorithm2_greedy_cc_with(instance, TieBreak::LowestIndex)
}

pub fn algorithm2_greedy_cc_with(instance: &Instance, tie: TieBreak) -> (UtilityVector, Committee) {
    let p = instance.profile();
    let (n, m, k) = (instance.n(), instance.m(), instance.k());
    let mut covered = vec![false; n];
    let mut chosen = vec![false; m];
    let mut picks = 0;
    while picks < k {
        let gain = |c: usize| (0..n).filter(|&v| !covered[v] && p.approves(v, c)).count();
        let candidates = (0..m).filter(|&c| !chosen[c]);
        let best = match tie {
            TieBreak::LowestIndex => candidates.rev().max_by_key(|&c| gain(c)),
            TieBreak::HighestIndex => candidates.max_by_key(|&c| gain(c)),
        };
        let Some(c) = best.filter(|&c| gain(c) > 0) else {
            break;
        };
        chosen[c] = true;
        picks += 1;
        for v in 0..n {
            if p.approves(v, c) {
                covered[v] = true;
            }
        }
    }
    for c in 0..m {
        if picks == k {
            break;
        }
        if !chosen[c] {
            chosen[c] = true;
            picks += 1;
        }
    }
    let committee = Committee::new((0..m).filter(|&c| chosen[c]));
    let alpha = induced_scores(Rule::Cc, p, &committee).expect("indices in range");
    (UtilityVector::new(alpha).expect("nonnegative"), committee)
}

/// A cohesive group left without any approved committee member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JrViolation {
    pub cohesive_group: Coalition,
    pub common_alternative: usize,
}

/// Checks justified representation for a size-`k` committee.
///
/// Reports the first alternative approved by at least `ceil(n/k)` voters who
/// approve nothing in the committee, with the lowest-indexed such voters.
pub fn jr_check(instance: &Instance, committee: &Committee) -> Result<Option<JrViolation>> {
    let p = instance.profile();
    committee.check(p)?;
    if committee.len() != instance.k() {
        return Err(Error::WrongCommitteeSize {
            expected: instance.k(),
            actual: committee.len(),
        });
    }
    let (n, k) = (instance.n(), instance.k());
    let quota = n.div_ceil(k).max(1);
    let unrepresented: Vec<usize> = (0..n)
        .filter(|&v| !committee.iter().any(|&c| p.approves(v, c)))
        .collect();
    for c in 0..instance.m() {
        let group: Vec<usize> = unrepresented
            .iter()
            .copied()
            .filter(|&v| p.approves(v, c))
            .take(quota)
            .collect();
        if group.len() == quota {
            return Ok(Some(JrViolation {
                cohesive_group: Coalition::new(group),
                common_alternative: c,
            }));
        }
    }
    Ok(None)
}

fn out_of_domain(index: usize, value: &Rational) -> Error {
    Error::OutOfDomain {
        index,
        value: value.to_string(),
    }
}

/// AV utilities to PAV utilities: `t` becomes the harmonic number `H(t)`.
/// Values must be integers in `0..=k`.
pub fn map_av_to_pav(alpha: &UtilityVector, k: usize) -> Result<UtilityVector> {
    let values = alpha
        .iter()
        .enumerate()
        .map(|(i, x)| match x.to_u64() {
            Some(t) if t as usize <= k => Ok(Rational::harmonic(t as usize)),
            _ => Err(out_of_domain(i, x)),
        })
        .collect::<Result<Vec<_>>>()?;
    UtilityVector::new(values)
}

/// Inverse of [`map_av_to_pav`].
pub fn map_pav_to_av(alpha: &UtilityVector, k: usize) -> Result<UtilityVector> {
    let harmonics: Vec<Rational> = (0..=k).map(Rational::harmonic).collect();
    let values = alpha
        .iter()
        .enumerate()
        .map(|(i, x)| {
            harmonics
                .iter()
                .position(|h| h == x)
                .map(Rational::from)
                .ok_or_else(|| out_of_domain(i, x))
        })
        .collect::<Result<Vec<_>>>()?;
    UtilityVector::new(values)
}

fn check_profile_len(alpha: &UtilityVector, profile: &ApprovalProfile) -> Result<()> {
    alpha.check_len(profile.num_voters())
}

/// AV utilities to SAV utilities: `t` becomes `t / |A(v)|` (zero for an empty
/// ballot). Values must be integers in `0..=|A(v)|`.
pub fn map_av_to_sav(alpha: &UtilityVector, profile: &ApprovalProfile) -> Result<UtilityVector> {
    check_profile_len(alpha, profile)?;
    let values = alpha
        .iter()
        .enumerate()
        .map(|(v, x)| {
            let a = profile.approvals(v).len();
            match x.to_u64() {
                Some(0) => Ok(Rational::zero()),
                Some(t) if t as usize <= a => Ok(Rational::frac(t as i64, a as i64)),
                _ => Err(out_of_domain(v, x)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    UtilityVector::new(values)
}

/// Inverse of [`map_av_to_sav`].
pub fn map_sav_to_av(alpha: &UtilityVector, profile: &ApprovalProfile) -> Result<UtilityVector> {
    check_profile_len(alpha, profile)?;
    let values = alpha
        .iter()
        .enumerate()
        .map(|(v, x)| {
            let a = profile.approvals(v).len();
            let t = x * &Rational::from(a);
            match t.to_u64() {
                Some(t) if t as usize <= a && (a > 0 || x.is_zero()) => Ok(Rational::from(t as usize)),
                _ => Err(out_of_domain(v, x)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    UtilityVector::new(values)
}
