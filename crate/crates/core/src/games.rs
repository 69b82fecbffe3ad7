//! Blocking coalitions, core membership and core non-emptiness.
//!
//! Blocking searches visit coalitions by size and then lexicographically, and
//! committees lexicographically; the first hit is reported. Coalitions whose
//! seat cap is zero are never blocking and are skipped.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::engine::{committees, Engine};
use crate::error::Result;
use crate::guard::EnumerationGuard;
use crate::model::{Coalition, Committee, Instance, Rule, UtilityVector};
use crate::rational::Rational;
use crate::scoring::{score_unchecked, seat_cap_for_size};
use crate::simplex::{solve_feasibility, FarkasCertificate, Feasibility, LinearSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GameModel {
    Tu,
    Ntu,
}

impl fmt::Display for GameModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameModel::Tu => "tu",
            GameModel::Ntu => "ntu",
        })
    }
}

impl FromStr for GameModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "tu" => Ok(GameModel::Tu),
            "ntu" => Ok(GameModel::Ntu),
            other => Err(format!("unknown model {other:?} (expected tu or ntu)")),
        }
    }
}

/// What the blocking coalition secures with its committee.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Achieved {
    /// Total coalition score (TU).
    Total(Rational),
    /// Score of each coalition member, in coalition order (NTU).
    PerVoter(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockingWitness {
    pub coalition: Coalition,
    pub committee: Committee,
    pub model: GameModel,
    pub achieved: Achieved,
}

impl BlockingWitness {
    /// Recomputes every score from scratch and checks that the witness blocks `alpha`.
    pub fn verify(&self, instance: &Instance, rule: Rule, alpha: &UtilityVector) -> bool {
        let p = instance.profile();
        if self.coalition.is_empty()
            || self.coalition.check(p).is_err()
            || self.committee.check(p).is_err()
            || alpha.len() != instance.n()
            || self.committee.len() > seat_cap_for_size(instance, self.coalition.len())
        {
            return false;
        }
        let scores: Vec<Rational> = self
            .coalition
            .iter()
            .map(|&v| score_unchecked(rule, p, v, &self.committee))
            .collect();
        match (&self.model, &self.achieved) {
            (GameModel::Tu, Achieved::Total(total)) => {
                let sum: Rational = scores.iter().sum();
                &sum == total && sum > alpha.sum_over(&self.coalition)
            }
            (GameModel::Ntu, Achieved::PerVoter(per)) => {
                per == &scores
                    && self
                        .coalition
                        .iter()
                        .zip(&scores)
                        .all(|(&v, s)| s > alpha.get(v))
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InfeasibleReason {
    /// TU: the payoffs do not add up to the grand coalition's value.
    SumMismatch { sum: Rational, grand_value: Rational },
    /// NTU: no committee of size at most `k` induces the vector.
    NotInducible,
}

impl fmt::Display for InfeasibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfeasibleReason::SumMismatch { sum, grand_value } => {
                write!(f, "payoffs sum to {sum} but the grand coalition is worth {grand_value}")
            }
            InfeasibleReason::NotInducible => {
                f.write_str("no admissible committee induces this vector")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreVerdict {
    Member,
    Blocked(BlockingWitness),
    Infeasible(InfeasibleReason),
}

impl CoreVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, CoreVerdict::Member)
    }
}

/// Voters grouped by (ballot, payoff), in order of first member.
struct Classes {
    members: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl Classes {
    fn new(engine: &Engine, alpha: &UtilityVector) -> Self {
        let mut index: HashMap<(u128, &Rational), usize> = HashMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut class_of = Vec::with_capacity(engine.n());
        for v in 0..engine.n() {
            let key = (engine.masks[v], alpha.get(v));
            let c = *index.entry(key).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            members[c].push(v);
            class_of.push(c);
        }
        Classes { members, class_of }
    }

    /// Visits, in lexicographic order, every coalition of `size` voters that
    /// takes a prefix of each class. Any coalition can be turned into such a
    /// one of the same composition that is lexicographically no larger.
    fn visit<F: FnMut(&[usize], &[usize]) -> bool>(&self, size: usize, visit: &mut F) -> bool {
        let mut taken = vec![0usize; self.members.len()];
        let mut chosen = Vec::with_capacity(size);
        self.dfs(size, &mut taken, &mut chosen, visit)
    }

    fn dfs<F: FnMut(&[usize], &[usize]) -> bool>(
        &self,
        need: usize,
        taken: &mut [usize],
        chosen: &mut Vec<usize>,
        visit: &mut F,
    ) -> bool {
        if need == 0 {
            return visit(chosen, taken);
        }
        let last = chosen.last().copied();
        let mut candidates = Vec::new();
        let mut room = 0;
        for (c, m) in self.members.iter().enumerate() {
            if let Some(&next) = m.get(taken[c]) {
                if last.is_none_or(|l| next > l) {
                    candidates.push(next);
                    room += m.len() - taken[c];
                }
            }
        }
        if room < need {
            return false;
        }
        candidates.sort_unstable();
        for next in candidates {
            let c = self.class_of[next];
            taken[c] += 1;
            chosen.push(next);
            if self.dfs(need - 1, taken, chosen, visit) {
                return true;
            }
            chosen.pop();
            taken[c] -= 1;
        }
        false
    }
}

fn check_alpha(instance: &Instance, alpha: &UtilityVector) -> Result<()> {
    alpha.check_len(instance.n())
}

/// First TU-blocking coalition for `alpha`, if any.
pub fn find_tu_blocking(
    instance: &Instance,
    rule: Rule,
    alpha: &UtilityVector,
    guard: &EnumerationGuard,
) -> Result<Option<BlockingWitness>> {
    check_alpha(instance, alpha)?;
    guard.check_instance(instance)?;
    let engine = Engine::new(instance.profile(), rule, instance.k())?;
    let classes = Classes::new(&engine, alpha);
    let scale = Rational::from_integer(engine.scale);
    let class_alpha: Vec<Rational> = classes
        .members
        .iter()
        .map(|m| alpha.get(m[0]) * &scale)
        .collect();
    for size in 1..=instance.n() {
        let cap = seat_cap_for_size(instance, size).min(instance.m());
        if cap == 0 {
            continue;
        }
        let mut hit = None;
        classes.visit(size, &mut |coalition, counts| {
            let mut groups = Vec::new();
            let mut claimed = Rational::zero();
            for (c, &x) in counts.iter().enumerate() {
                if x > 0 {
                    groups.push((classes.members[c][0], x as i128));
                    claimed += &class_alpha[c] * &Rational::from(x);
                }
            }
            let (value, committee) = engine.best_committee(&groups, cap);
            if Rational::from_integer(value) > claimed {
                hit = Some(BlockingWitness {
                    coalition: Coalition::new(coalition.iter().copied()),
                    committee: Committee::new(committee),
                    model: GameModel::Tu,
                    achieved: Achieved::Total(engine.to_rational(value)),
                });
                true
            } else {
                false
            }
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// Smallest `t` with `table[t] > alpha * scale`, per voter.
fn improvement_thresholds(engine: &Engine, alpha: &[Rational]) -> Vec<Option<u32>> {
    let scale = Rational::from_integer(engine.scale);
    (0..engine.n())
        .map(|v| {
            let bar = &alpha[v] * &scale;
            engine
                .table(v)
                .iter()
                .position(|&s| Rational::from_integer(s) > bar)
                .map(|t| t as u32)
        })
        .collect()
}

fn ntu_blocking_from_thresholds(
    instance: &Instance,
    engine: &Engine,
    thresholds: &[Option<u32>],
) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = instance.n();
    let m = instance.m();
    // Only the smallest coalition size for each committee size matters: a
    // blocking coalition's subsets with the same cap also block.
    let mut last_cap = 0;
    for size in 1..=n {
        let cap = seat_cap_for_size(instance, size).min(m);
        if cap == last_cap {
            continue;
        }
        last_cap = cap;
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        for (mask, committee) in committees(m, cap) {
            let mut improved = Vec::with_capacity(size);
            for v in 0..n {
                if let Some(t) = thresholds[v] {
                    if (engine.masks[v] & mask).count_ones() >= t {
                        improved.push(v);
                        if improved.len() == size {
                            break;
                        }
                    }
                }
            }
            if improved.len() == size && best.as_ref().is_none_or(|(b, _)| improved < *b) {
                best = Some((improved, committee));
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

/// First NTU-blocking coalition for `alpha`, if any.
pub fn find_ntu_blocking(
    instance: &Instance,
    rule: Rule,
    alpha: &UtilityVector,
    guard: &EnumerationGuard,
) -> Result<Option<BlockingWitness>> {
    check_alpha(instance, alpha)?;
    guard.check_instance(instance)?;
    let engine = Engine::new(instance.profile(), rule, instance.k())?;
    let thresholds = improvement_thresholds(&engine, alpha.values());
    Ok(
        ntu_blocking_from_thresholds(instance, &engine, &thresholds).map(|(coalition, committee)| {
            let committee = Committee::new(committee);
            let per = coalition
                .iter()
                .map(|&v| score_unchecked(rule, instance.profile(), v, &committee))
                .collect();
            BlockingWitness {
                coalition: Coalition::new(coalition),
                committee,
                model: GameModel::Ntu,
                achieved: Achieved::PerVoter(per),
            }
        }),
    )
}

/// Value of the grand coalition, without listing its maximizers.
fn grand_value(instance: &Instance, rule: Rule, guard: &EnumerationGuard) -> Result<Rational> {
    if !rule.is_totally_separable() {
        guard.check_committees(instance.m(), instance.k())?;
    }
    let engine = Engine::new(instance.profile(), rule, instance.k())?;
    let grand = Coalition::grand(instance.n());
    let (value, _) = engine.best_committee(&engine.groups(grand.iter()), instance.k());
    Ok(engine.to_rational(value))
}

pub fn tu_core_membership(
    instance: &Instance,
    rule: Rule,
    alpha: &UtilityVector,
    guard: &EnumerationGuard,
) -> Result<CoreVerdict> {
    check_alpha(instance, alpha)?;
    let sum = alpha.sum();
    let grand = grand_value(instance, rule, guard)?;
    if sum != grand {
        return Ok(CoreVerdict::Infeasible(InfeasibleReason::SumMismatch {
            sum,
            grand_value: grand,
        }));
    }
    Ok(match find_tu_blocking(instance, rule, alpha, guard)? {
        Some(w) => CoreVerdict::Blocked(w),
        None => CoreVerdict::Member,
    })
}

/// Lexicographically first committee of size at most `k` (smaller sizes first)
/// inducing exactly `alpha`.
pub fn ntu_feasibility_witness(
    instance: &Instance,
    rule: Rule,
    alpha: &UtilityVector,
    guard: &EnumerationGuard,
) -> Result<Option<Committee>> {
    check_alpha(instance, alpha)?;
    guard.check_instance(instance)?;
    let engine = Engine::new(instance.profile(), rule, instance.k())?;
    let scale = Rational::from_integer(engine.scale);
    // bit t of allowed[v] is set when t approved members give voter v exactly alpha(v)
    let allowed: Vec<u128> = (0..instance.n())
        .map(|v| {
            let target = alpha.get(v) * &scale;
            engine
                .table(v)
                .iter()
                .enumerate()
                .filter(|(_, &s)| Rational::from_integer(s) == target)
                .fold(0u128, |acc, (t, _)| acc | 1 << t)
        })
        .collect();
    if allowed.contains(&0) {
        return Ok(None);
    }
    for size in 0..=instance.k() {
        for (mask, committee) in committees(instance.m(), size) {
            let fits = (0..instance.n())
                .all(|v| allowed[v] >> (engine.masks[v] & mask).count_ones() & 1 == 1);
            if fits {
                return Ok(Some(Committee::new(committee)));
            }
        }
    }
    Ok(None)
}

pub fn ntu_core_membership(
    instance: &Instance,
    rule: Rule,
    alpha: &UtilityVector,
    guard: &EnumerationGuard,
) -> Result<CoreVerdict> {
    if ntu_feasibility_witness(instance, rule, alpha, guard)?.is_none() {
        return Ok(CoreVerdict::Infeasible(InfeasibleReason::NotInducible));
    }
    Ok(match find_ntu_blocking(instance, rule, alpha, guard)? {
        Some(w) => CoreVerdict::Blocked(w),
        None => CoreVerdict::Member,
    })
}

/// Committees whose induced vectors lie in the NTU core.
///
/// All size-`k` committees are listed in lexicographic order. Under CC, whose
/// scores saturate, smaller committees are scanned afterwards (by size, then
/// lexicographically) and listed when they induce a stable vector that no
/// size-`k` committee induces.
pub fn enumerate_ntu_core(
    instance: &Instance,
    rule: Rule,
    guard: &EnumerationGuard,
) -> Result<Vec<(Committee, UtilityVector)>> {
    guard.check_instance(instance)?;
    let engine = Engine::new(instance.profile(), rule, instance.k())?;
    let n = instance.n();
    let mut stable: HashMap<Vec<i128>, bool> = HashMap::new();
    let mut is_stable = |vector: &[i128]| -> bool {
        if let Some(&s) = stable.get(vector) {
            return s;
        }
        let alpha: Vec<Rational> = vector.iter().map(|&x| engine.to_rational(x)).collect();
        let thresholds = improvement_thresholds(&engine, &alpha);
        let s = ntu_blocking_from_thresholds(instance, &engine, &thresholds).is_none();
        stable.insert(vector.to_vec(), s);
        s
    };
    let induced = |mask: u128| -> Vec<i128> { (0..n).map(|v| engine.voter(v, mask)).collect() };
    let to_vector = |vector: &[i128]| {
        UtilityVector::new(vector.iter().map(|&x| engine.to_rational(x)).collect())
            .expect("scores are nonnegative")
    };
    let mut out = Vec::new();
    let mut full_vectors = HashSet::new();
    for (mask, committee) in committees(instance.m(), instance.k()) {
        let vector = induced(mask);
        if is_stable(&vector) {
            out.push((Committee::new(committee), to_vector(&vector)));
        }
        full_vectors.insert(vector);
    }
    if rule == Rule::Cc {
        for size in 0..instance.k() {
            for (mask, committee) in committees(instance.m(), size) {
                let vector = induced(mask);
                if !full_vectors.contains(&vector) && is_stable(&vector) {
                    out.push((Committee::new(committee), to_vector(&vector)));
                }
            }
        }
    }
    Ok(out)
}

/// Result of deciding whether the TU core is non-empty.
#[derive(Debug, Clone)]
pub enum TuCoreOutcome {
    NonEmpty(UtilityVector),
    /// The core constraints are contradictory. `system` holds the grand
    /// coalition's equality and the coalition rows needed for the proof, one
    /// inequality per entry of `coalitions`; `certificate` refutes it.
    Empty {
        system: LinearSystem,
        coalitions: Vec<Coalition>,
        certificate: FarkasCertificate,
    },
}

const ROWS_PER_ROUND: usize = 32;

/// Decides TU-core non-emptiness with an exact LP over all coalitions.
///
/// Coalition rows are added lazily: the solver starts from the efficiency
/// equality and repeatedly adds the most violated coalition constraints.
pub fn tu_core_nonempty(
    instance: &Instance,
    rule: Rule,
    guard: &EnumerationGuard,
) -> Result<TuCoreOutcome> {
    guard.check_instance(instance)?;
    let n = instance.n();
    let engine = Engine::new(instance.profile(), rule, instance.k())?;
    let values = engine.all_coalition_values(instance.k())?;
    let full = (1usize << n) - 1;
    let grand = engine.to_rational(values[full]);

    let mut system = LinearSystem::new(n, true);
    system.add_equality(vec![Rational::one(); n], grand)?;
    let mut active: Vec<usize> = Vec::new();
    loop {
        let point = match solve_feasibility(&system)? {
            Feasibility::Feasible(point) => point,
            Feasibility::Infeasible(certificate) => {
                return Ok(TuCoreOutcome::Empty {
                    system,
                    coalitions: active.iter().map(|&s| coalition_of(s, n)).collect(),
                    certificate,
                });
            }
        };
        let scale = Rational::from_integer(engine.scale);
        let scaled: Vec<Rational> = point.iter().map(|x| x * &scale).collect();
        let mut sums = vec![Rational::zero(); full + 1];
        let mut violated: Vec<(Rational, usize)> = Vec::new();
        for s in 1..=full {
            let low = s.trailing_zeros() as usize;
            sums[s] = &sums[s & (s - 1)] + &scaled[low];
            if values[s] > 0 {
                let gap = Rational::from_integer(values[s]) - &sums[s];
                if gap.is_positive() {
                    violated.push((gap, s));
                }
            }
        }
        if violated.is_empty() {
            return Ok(TuCoreOutcome::NonEmpty(UtilityVector::new(point)?));
        }
        violated.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, s) in violated.iter().take(ROWS_PER_ROUND) {
            let row = (0..n)
                .map(|v| Rational::from((s >> v & 1) as i64))
                .collect();
            system.add_inequality(row, engine.to_rational(values[s]))?;
            active.push(s);
        }
    }
}

fn coalition_of(mask: usize, n: usize) -> Coalition {
    Coalition::new((0..n).filter(|&v| mask >> v & 1 == 1))
}
