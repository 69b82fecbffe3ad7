//! Integer score tables shared by the enumeration-heavy operations.
//!
//! Every voter score is stored as an integer multiple of a common `scale`, so
//! sums over coalitions stay in `i128` and comparisons are exact. Committees
//! are bitmasks over alternatives, which caps the engine at 128 alternatives.

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::guard::EnumerationGuard;
use crate::model::{ApprovalProfile, Rule};
use crate::rational::Rational;

pub(crate) const MAX_ALTERNATIVES: usize = 128;
pub(crate) const MAX_MASK_VOTERS: usize = 26;

pub(crate) fn mask_of(indices: &[usize]) -> u128 {
    indices.iter().fold(0u128, |acc, &c| acc | (1u128 << c))
}

/// Committees of exactly `size` alternatives out of `m`, in lexicographic order.
pub(crate) fn committees(m: usize, size: usize) -> impl Iterator<Item = (u128, Vec<usize>)> {
    (0..m).combinations(size).map(|c| (mask_of(&c), c))
}

#[derive(Debug, Clone)]
pub(crate) struct Engine {
    pub rule: Rule,
    pub m: usize,
    pub masks: Vec<u128>,
    /// `tables[v][t]` is the scaled score of voter `v` with `t` approved members.
    tables: Vec<Vec<i128>>,
    pub scale: i128,
}

impl Engine {
    /// Builds tables for committees of at most `max_size` alternatives.
    pub fn new(profile: &ApprovalProfile, rule: Rule, max_size: usize) -> Result<Self> {
        let m = profile.num_alternatives();
        if m > MAX_ALTERNATIVES {
            return Err(Error::EngineLimit(format!(
                "{m} alternatives (at most {MAX_ALTERNATIVES} supported)"
            )));
        }
        let sizes: Vec<usize> = profile.all_approvals().iter().map(Vec::len).collect();
        let overflow = || Error::EngineLimit("scores do not fit in 128-bit integers".into());
        let max_t = sizes.iter().copied().max().unwrap_or(0).min(max_size);
        let scale: i128 = match rule {
            Rule::Av | Rule::Cc => 1,
            Rule::Pav => (1..=max_t as i128).try_fold(1i128, |acc, z| {
                acc.checked_mul(z / acc.gcd(&z)).ok_or_else(overflow)
            })?,
            Rule::Sav => sizes
                .iter()
                .filter(|&&s| s > 0)
                .try_fold(1i128, |acc, &s| {
                    let s = s as i128;
                    acc.checked_mul(s / acc.gcd(&s)).ok_or_else(overflow)
                })?,
        };
        let mut tables = Vec::with_capacity(sizes.len());
        let mut total: i128 = 0;
        for &a in &sizes {
            let len = a.min(max_size);
            let table: Vec<i128> = (0..=len as i128)
                .map(|t| match rule {
                    Rule::Av => t,
                    Rule::Cc => t.min(1),
                    Rule::Sav if a == 0 => 0,
                    Rule::Sav => t * (scale / a as i128),
                    Rule::Pav => (1..=t).map(|z| scale / z).sum(),
                })
                .collect();
            total = total
                .checked_add(*table.last().expect("nonempty table"))
                .ok_or_else(overflow)?;
            tables.push(table);
        }
        Ok(Engine {
            rule,
            m,
            masks: profile.all_approvals().iter().map(|a| mask_of(a)).collect(),
            tables,
            scale,
        })
    }

    /// `χ(S)` for every coalition `S`, indexed by voter bitmask.
    ///
    /// Coalitions with the same number of voters of each ballot type share a
    /// value, so each distinct composition is solved once.
    pub fn all_coalition_values(&self, k: usize) -> Result<Vec<i128>> {
        let n = self.n();
        if n > MAX_MASK_VOTERS {
            return Err(Error::EngineLimit(format!(
                "{n} voters (at most {MAX_MASK_VOTERS} for full coalition tables)"
            )));
        }
        let reps = self.groups((0..n).collect::<Vec<_>>().iter());
        let class_of: Vec<usize> = (0..n)
            .map(|v| {
                reps.iter()
                    .position(|&(r, _)| self.masks[r] == self.masks[v])
                    .expect("every voter has a class")
            })
            .collect();
        let mut slot_of_key: HashMap<Vec<u8>, u32> = HashMap::new();
        let mut keys: Vec<Vec<u8>> = Vec::new();
        let slots: Vec<u32> = (0usize..1 << n)
            .map(|s| {
                let mut key = vec![0u8; reps.len()];
                for (v, &c) in class_of.iter().enumerate() {
                    key[c] += (s >> v & 1) as u8;
                }
                *slot_of_key.entry(key).or_insert_with_key(|key| {
                    keys.push(key.clone());
                    keys.len() as u32 - 1
                })
            })
            .collect();
        let values: Vec<i128> = keys
            .par_iter()
            .map(|key| {
                let size: usize = key.iter().map(|&x| x as usize).sum();
                let cap = (size * k).checked_div(n).unwrap_or(0).min(self.m);
                let groups: Vec<(usize, i128)> = key
                    .iter()
                    .zip(&reps)
                    .filter(|(&x, _)| x > 0)
                    .map(|(&x, &(r, _))| (r, x as i128))
                    .collect();
                self.best_committee(&groups, cap).0
            })
            .collect();
        Ok(slots.into_iter().map(|i| values[i as usize]).collect())
    }

    pub fn n(&self) -> usize {
        self.masks.len()
    }

    pub fn voter(&self, v: usize, committee: u128) -> i128 {
        let t = (self.masks[v] & committee).count_ones() as usize;
        self.tables[v][t]
    }

    pub fn table(&self, v: usize) -> &[i128] {
        &self.tables[v]
    }

    pub fn to_rational(&self, scaled: i128) -> Rational {
        Rational::from_scaled(scaled, self.scale)
    }

    /// Collapses voters into `(representative, multiplicity)` groups by ballot.
    pub fn groups<'a>(&self, voters: impl IntoIterator<Item = &'a usize>) -> Vec<(usize, i128)> {
        let mut index: HashMap<u128, usize> = HashMap::new();
        let mut groups: Vec<(usize, i128)> = Vec::new();
        for &v in voters {
            match index.get(&self.masks[v]) {
                Some(&g) => groups[g].1 += 1,
                None => {
                    index.insert(self.masks[v], groups.len());
                    groups.push((v, 1));
                }
            }
        }
        groups
    }

    pub fn group_score(&self, groups: &[(usize, i128)], committee: u128) -> i128 {
        groups
            .iter()
            .map(|&(v, mult)| mult * self.voter(v, committee))
            .sum()
    }

    /// Scaled score of each alternative alone, for the separable rules.
    fn singleton_scores(&self, groups: &[(usize, i128)]) -> Vec<i128> {
        let mut scores = vec![0i128; self.m];
        for &(v, mult) in groups {
            if self.tables[v].len() < 2 {
                continue;
            }
            let unit = mult * self.tables[v][1];
            let mut mask = self.masks[v];
            while mask != 0 {
                let c = mask.trailing_zeros() as usize;
                scores[c] += unit;
                mask &= mask - 1;
            }
        }
        scores
    }

    /// Best committee of `min(size, m)` alternatives for the grouped voters.
    /// Ties go to the lexicographically first committee.
    pub fn best_committee(&self, groups: &[(usize, i128)], size: usize) -> (i128, Vec<usize>) {
        let size = size.min(self.m);
        if size == 0 {
            return (0, Vec::new());
        }
        if self.rule.is_totally_separable() {
            let scores = self.singleton_scores(groups);
            let mut order: Vec<usize> = (0..self.m).collect();
            order.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));
            let mut chosen = order[..size].to_vec();
            chosen.sort_unstable();
            let value = chosen.iter().map(|&c| scores[c]).sum();
            return (value, chosen);
        }
        let mut best: Option<(i128, Vec<usize>)> = None;
        for (mask, c) in committees(self.m, size) {
            let s = self.group_score(groups, mask);
            if best.as_ref().is_none_or(|(b, _)| s > *b) {
                best = Some((s, c));
            }
        }
        best.expect("at least one committee")
    }

    /// All committees of exactly `size` alternatives attaining the best score, in
    /// lexicographic order.
    pub fn all_best_committees(
        &self,
        groups: &[(usize, i128)],
        size: usize,
        guard: &EnumerationGuard,
    ) -> Result<(i128, Vec<Vec<usize>>)> {
        let size = size.min(self.m);
        if self.rule.is_totally_separable() {
            let scores = self.singleton_scores(groups);
            let mut sorted = scores.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            if size == 0 {
                return Ok((0, vec![Vec::new()]));
            }
            let threshold = sorted[size - 1];
            let forced: Vec<usize> = (0..self.m).filter(|&c| scores[c] > threshold).collect();
            let ties: Vec<usize> = (0..self.m).filter(|&c| scores[c] == threshold).collect();
            let value = sorted[..size].iter().sum();
            guard.check_committees(ties.len(), size - forced.len())?;
            let mut out: Vec<Vec<usize>> = ties
                .into_iter()
                .combinations(size - forced.len())
                .map(|extra| forced.iter().copied().chain(extra).sorted().collect())
                .collect();
            out.sort();
            return Ok((value, out));
        }
        let mut best = i128::MIN;
        let mut out = Vec::new();
        for (mask, c) in committees(self.m, size) {
            let s = self.group_score(groups, mask);
            if s > best {
                best = s;
                out.clear();
            }
            if s == best {
                out.push(c);
            }
        }
        Ok((best, out))
    }
}
