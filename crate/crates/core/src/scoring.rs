//! Rule scores, seat caps, coalition values and winning committees.

use serde::Serialize;

use crate::engine::Engine;
use crate::error::Result;
use crate::guard::EnumerationGuard;
use crate::model::{ApprovalProfile, Coalition, Committee, Instance, Rule};
use crate::rational::Rational;

/// A committee with its score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScoredCommittee {
    pub committee: Committee,
    pub score: Rational,
}

/// Score of `voter` for `committee` under `rule`.
pub fn voter_score(
    rule: Rule,
    profile: &ApprovalProfile,
    voter: usize,
    committee: &Committee,
) -> Result<Rational> {
    profile.check_voter(voter)?;
    committee.check(profile)?;
    Ok(score_unchecked(rule, profile, voter, committee))
}

pub(crate) fn score_unchecked(
    rule: Rule,
    profile: &ApprovalProfile,
    voter: usize,
    committee: &Committee,
) -> Rational {
    let approved = profile.approvals(voter);
    let t = committee.iter().filter(|&&c| profile.approves(voter, c)).count();
    match rule {
        Rule::Av => Rational::from(t),
        Rule::Sav if approved.is_empty() => Rational::zero(),
        Rule::Sav => Rational::frac(t as i64, approved.len() as i64),
        Rule::Cc => Rational::from(t.min(1)),
        Rule::Pav => Rational::harmonic(t),
    }
}

/// Sum of the coalition members' scores.
pub fn coalition_score(
    rule: Rule,
    profile: &ApprovalProfile,
    coalition: &Coalition,
    committee: &Committee,
) -> Result<Rational> {
    coalition.check(profile)?;
    committee.check(profile)?;
    Ok(coalition
        .iter()
        .map(|&v| score_unchecked(rule, profile, v, committee))
        .sum())
}

/// `floor(|coalition| * k / n)`.
pub fn seat_cap(instance: &Instance, coalition: &Coalition) -> usize {
    seat_cap_for_size(instance, coalition.len())
}

pub fn seat_cap_for_size(instance: &Instance, size: usize) -> usize {
    if instance.n() == 0 {
        return 0;
    }
    size * instance.k() / instance.n()
}

/// The coalition's value: its best score over committees within its seat cap.
///
/// The witness is the lexicographically first maximizer of size `min(cap, m)`,
/// or the empty committee when the cap is zero.
pub fn coalition_value(
    instance: &Instance,
    rule: Rule,
    coalition: &Coalition,
    guard: &EnumerationGuard,
) -> Result<ScoredCommittee> {
    coalition.check(instance.profile())?;
    let cap = seat_cap(instance, coalition).min(instance.m());
    if !rule.is_totally_separable() {
        guard.check_committees(instance.m(), cap)?;
    }
    let engine = Engine::new(instance.profile(), rule, cap)?;
    let groups = engine.groups(coalition.iter());
    let (value, committee) = engine.best_committee(&groups, cap);
    Ok(ScoredCommittee {
        committee: Committee::new(committee),
        score: engine.to_rational(value),
    })
}

/// `χ(V)` and every size-`k` committee attaining it, in lexicographic order.
pub fn winning_committees(
    instance: &Instance,
    rule: Rule,
    guard: &EnumerationGuard,
) -> Result<(Rational, Vec<Committee>)> {
    if !rule.is_totally_separable() {
        guard.check_committees(instance.m(), instance.k())?;
    }
    let engine = Engine::new(instance.profile(), rule, instance.k())?;
    let grand = Coalition::grand(instance.n());
    let groups = engine.groups(grand.iter());
    let (value, committees) = engine.all_best_committees(&groups, instance.k(), guard)?;
    Ok((
        engine.to_rational(value),
        committees.into_iter().map(Committee::new).collect(),
    ))
}

/// Per-voter scores induced by `committee`.
pub fn induced_scores(
    rule: Rule,
    profile: &ApprovalProfile,
    committee: &Committee,
) -> Result<Vec<Rational>> {
    committee.check(profile)?;
    Ok((0..profile.num_voters())
        .map(|v| score_unchecked(rule, profile, v, committee))
        .collect())
}
