//! Generators turning exact cover, biclique and set cover instances into
//! committee voting instances, plus exhaustive deciders for the sources.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ApprovalProfile, Instance, UtilityVector};
use crate::rational::Rational;

/// Restricted exact cover by 3-sets: `3q` elements, `3q` triples, every
/// element in exactly three triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rx3cInstance {
    pub universe_size: usize,
    pub triples: Vec<[usize; 3]>,
}

/// Undirected simple graph on `vertex_count` vertices and a target side size `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicliqueInstance {
    pub vertex_count: usize,
    pub edges: Vec<[usize; 2]>,
    pub h: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetCoverInstance {
    pub universe_size: usize,
    pub sets: Vec<Vec<usize>>,
    pub h: usize,
}

fn invalid(message: impl Into<String>) -> Error {
    Error::InvalidSource(message.into())
}

impl Rx3cInstance {
    pub fn validate(&self) -> Result<()> {
        let u = self.universe_size;
        if u == 0 || !u.is_multiple_of(3) {
            return Err(invalid(format!("universe size {u} is not a positive multiple of 3")));
        }
        if self.triples.len() != u {
            return Err(invalid(format!("{} triples, expected {u}", self.triples.len())));
        }
        let mut freq = vec![0usize; u];
        for t in &self.triples {
            if t.iter().any(|&e| e >= u) {
                return Err(invalid(format!("triple {t:?} leaves the universe")));
            }
            if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
                return Err(invalid(format!("triple {t:?} repeats an element")));
            }
            for &e in t {
                freq[e] += 1;
            }
        }
        if let Some(e) = freq.iter().position(|&f| f != 3) {
            return Err(invalid(format!("element {e} occurs in {} triples", freq[e])));
        }
        Ok(())
    }

    /// Whether `universe_size / 3` of the triples partition the universe.
    pub fn has_exact_cover(&self) -> bool {
        let q = self.universe_size / 3;
        let full = (1u128 << self.universe_size) - 1;
        let masks: Vec<u128> = self
            .triples
            .iter()
            .map(|t| t.iter().fold(0, |m, &e| m | 1 << e))
            .collect();
        masks.iter().copied().combinations(q).any(|c| {
            let mut acc = 0u128;
            for m in c {
                if acc & m != 0 {
                    return false;
                }
                acc |= m;
            }
            acc == full
        })
    }
}

impl BicliqueInstance {
    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_count;
        if self.h == 0 {
            return Err(invalid("h must be positive"));
        }
        if n < 2 || n < 2 * self.h {
            return Err(invalid(format!("need at least max(2h, 2) vertices, got {n}")));
        }
        for &[a, b] in &self.edges {
            if a >= n || b >= n {
                return Err(invalid(format!("edge ({a}, {b}) leaves the vertex set")));
            }
            if a == b {
                return Err(invalid(format!("self-loop at {a}")));
            }
        }
        Ok(())
    }

    fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.vertex_count;
        let mut adj = vec![vec![false; n]; n];
        for &[a, b] in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        adj
    }

    /// A pair of disjoint `h`-sets with every cross edge present, if any.
    pub fn find_biclique(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let adj = self.adjacency();
        let n = self.vertex_count;
        for left in (0..n).combinations(self.h) {
            let common: Vec<usize> = (0..n)
                .filter(|&w| left.iter().all(|&u| adj[u][w]))
                .collect();
            if common.len() >= self.h {
                return Some((left, common[..self.h].to_vec()));
            }
        }
        None
    }

    pub fn has_biclique(&self) -> bool {
        self.find_biclique().is_some()
    }
}

impl SetCoverInstance {
    pub fn validate(&self) -> Result<()> {
        if self.h == 0 {
            return Err(invalid("h must be positive"));
        }
        if self.sets.is_empty() {
            return Err(invalid("no sets"));
        }
        for (i, s) in self.sets.iter().enumerate() {
            if s.is_empty() {
                return Err(invalid(format!("set {i} is empty")));
            }
            if let Some(&e) = s.iter().find(|&&e| e >= self.universe_size) {
                return Err(invalid(format!("set {i} contains {e}, outside the universe")));
            }
        }
        Ok(())
    }

    /// Whether at most `h` sets cover the universe.
    pub fn has_set_cover(&self) -> bool {
        let u = self.universe_size;
        let mut covered = vec![false; u];
        for s in &self.sets {
            for &e in s {
                covered[e] = true;
            }
        }
        if covered.contains(&false) {
            return false;
        }
        (0..=self.h.min(self.sets.len())).any(|size| {
            (0..self.sets.len()).combinations(size).any(|pick| {
                let mut hit = vec![false; u];
                for &i in &pick {
                    for &e in &self.sets[i] {
                        hit[e] = true;
                    }
                }
                hit.iter().all(|&x| x)
            })
        })
    }
}

/// One voter per element approving the sets that contain it.
fn incidence_instance(universe_size: usize, sets: &[Vec<usize>], k: usize) -> Result<Instance> {
    let mut approvals = vec![Vec::new(); universe_size];
    for (j, s) in sets.iter().enumerate() {
        for &e in s {
            approvals[e].push(j);
        }
    }
    Instance::from_approvals(sets.len(), approvals, k)
}

/// Voter per element, alternative per triple, `k = universe_size / 3`.
pub fn gen_rx3c_core_nonempty(src: &Rx3cInstance) -> Result<Instance> {
    src.validate()?;
    let sets: Vec<Vec<usize>> = src.triples.iter().map(|t| t.to_vec()).collect();
    incidence_instance(src.universe_size, &sets, src.universe_size / 3)
}

/// Same instance as [`gen_rx3c_core_nonempty`] with the all-ones vector.
pub fn gen_rx3c_pav_membership(src: &Rx3cInstance) -> Result<(Instance, UtilityVector)> {
    let inst = gen_rx3c_core_nonempty(src)?;
    let alpha = UtilityVector::from_integers(&vec![1; inst.n()]);
    Ok((inst, alpha))
}

/// Sizes of the groups in a generated biclique instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BicliqueLayout {
    pub vertices: usize,
    pub full_voters: usize,
    pub empty_voters: usize,
    pub k: usize,
}

impl BicliqueLayout {
    pub fn of(src: &BicliqueInstance) -> Self {
        let n = src.vertex_count;
        let l = n * n + 1;
        BicliqueLayout {
            vertices: n,
            full_voters: l * n * n - (n - src.h),
            empty_voters: src.h * n * n - src.h,
            k: l + src.h,
        }
    }

    /// Indices of the empty voters, which follow the vertex and full voters.
    pub fn empty_voter_range(&self) -> std::ops::Range<usize> {
        let start = self.vertices + self.full_voters;
        start..start + self.empty_voters
    }
}

/// Vertex alternatives `c*` and `k` dummies `d*`; vertex voters `v*` approve
/// their neighbours, full voters `o*` approve every dummy, empty voters `b*`
/// approve nothing.
pub fn gen_biclique_av_membership(src: &BicliqueInstance) -> Result<(Instance, UtilityVector)> {
    src.validate()?;
    let layout = BicliqueLayout::of(src);
    let n = src.vertex_count;
    let h = src.h;
    let k = layout.k;
    let adj = src.adjacency();

    let alternatives: Vec<String> = (1..=n)
        .map(|i| format!("c{i}"))
        .chain((1..=k).map(|i| format!("d{i}")))
        .collect();
    let mut voters = Vec::new();
    let mut approvals = Vec::new();
    for (i, row) in adj.iter().enumerate() {
        voters.push(format!("v{}", i + 1));
        approvals.push((0..n).filter(|&j| row[j]).collect());
    }
    let dummies: Vec<usize> = (n..n + k).collect();
    for i in 1..=layout.full_voters {
        voters.push(format!("o{i}"));
        approvals.push(dummies.clone());
    }
    for i in 1..=layout.empty_voters {
        voters.push(format!("b{i}"));
        approvals.push(Vec::new());
    }
    let inst = Instance::new(ApprovalProfile::new(alternatives, voters, approvals)?, k)?;

    let vertex_value = Rational::from_integer(h) - Rational::frac(1, n as i64);
    let eps = Rational::new(n * h - 1, layout.full_voters)?;
    let full_value = Rational::from_integer(k) - eps;
    let alpha = std::iter::repeat_n(vertex_value, n)
        .chain(std::iter::repeat_n(full_value, layout.full_voters))
        .chain(std::iter::repeat_n(Rational::zero(), layout.empty_voters))
        .collect();
    Ok((inst, UtilityVector::new(alpha)?))
}

/// Voter per element, alternative per set, `k = h`, all-ones vector.
pub fn gen_setcover_cc_membership(src: &SetCoverInstance) -> Result<(Instance, UtilityVector)> {
    src.validate()?;
    if src.h > src.sets.len() {
        return Err(invalid(format!(
            "h = {} exceeds the number of sets {}",
            src.h,
            src.sets.len()
        )));
    }
    let inst = incidence_instance(src.universe_size, &src.sets, src.h)?;
    let alpha = UtilityVector::from_integers(&vec![1; inst.n()]);
    Ok((inst, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{
        ntu_core_membership, tu_core_membership, tu_core_nonempty, CoreVerdict, TuCoreOutcome,
    };
    use crate::guard::EnumerationGuard;
    use crate::model::{Coalition, Rule};
    use crate::scoring::seat_cap;

    fn covered() -> Rx3cInstance {
        Rx3cInstance {
            universe_size: 6,
            triples: vec![[0, 1, 2], [3, 4, 5], [0, 1, 3], [2, 4, 5], [0, 2, 4], [1, 3, 5]],
        }
    }

    #[test]
    fn rx3c_validation() {
        assert!(covered().validate().is_ok());
        let mut bad = covered();
        bad.triples[0] = [0, 0, 1];
        assert!(matches!(bad.validate(), Err(Error::InvalidSource(_))));
        bad.triples[0] = [0, 1, 3];
        assert!(bad.validate().is_err());
    }

    #[test]
    fn rx3c_cover_gives_nonempty_core_and_member() {
        let src = covered();
        assert!(src.has_exact_cover());
        let inst = gen_rx3c_core_nonempty(&src).unwrap();
        assert_eq!((inst.n(), inst.m(), inst.k()), (6, 6, 2));
        let g = EnumerationGuard::default();
        assert!(matches!(
            tu_core_nonempty(&inst, Rule::Cc, &g).unwrap(),
            TuCoreOutcome::NonEmpty(_)
        ));
        let (inst, alpha) = gen_rx3c_pav_membership(&src).unwrap();
        assert!(tu_core_membership(&inst, Rule::Pav, &alpha, &g).unwrap().is_member());
        assert!(tu_core_membership(&inst, Rule::Cc, &alpha, &g).unwrap().is_member());
    }

    #[test]
    fn degenerate_rx3c() {
        let src = Rx3cInstance { universe_size: 3, triples: vec![[0, 1, 2]; 3] };
        assert!(src.has_exact_cover());
        let (inst, alpha) = gen_rx3c_pav_membership(&src).unwrap();
        let v = tu_core_membership(&inst, Rule::Pav, &alpha, &EnumerationGuard::default());
        assert!(v.unwrap().is_member());
    }

    #[test]
    fn biclique_counts() {
        for (n, h) in [(2, 1), (3, 1), (4, 2), (5, 2)] {
            let src = BicliqueInstance { vertex_count: n, edges: vec![], h };
            let layout = BicliqueLayout::of(&src);
            let (inst, alpha) = gen_biclique_av_membership(&src).unwrap();
            assert_eq!(inst.n(), layout.k * n * n);
            assert_eq!(inst.m(), n + layout.k);
            let coalition = Coalition::new((0..h).chain(layout.empty_voter_range()));
            assert_eq!(seat_cap(&inst, &coalition), h);
            let grand = Rational::from_integer(layout.k * layout.full_voters);
            assert_eq!(alpha.sum(), grand);
        }
        let bad = BicliqueInstance { vertex_count: 3, edges: vec![], h: 2 };
        assert!(gen_biclique_av_membership(&bad).is_err());
    }

    #[test]
    fn biclique_verdicts_smallest() {
        let g = EnumerationGuard::overridden();
        let with = BicliqueInstance { vertex_count: 2, edges: vec![[0, 1]], h: 1 };
        let without = BicliqueInstance { vertex_count: 2, edges: vec![], h: 1 };
        let (inst, alpha) = gen_biclique_av_membership(&with).unwrap();
        let v = tu_core_membership(&inst, Rule::Av, &alpha, &g).unwrap();
        assert!(matches!(v, CoreVerdict::Blocked(_)));
        let (inst, alpha) = gen_biclique_av_membership(&without).unwrap();
        assert!(tu_core_membership(&inst, Rule::Av, &alpha, &g).unwrap().is_member());
    }

    #[test]
    fn set_cover_verdicts() {
        let g = EnumerationGuard::default();
        let trivial = SetCoverInstance { universe_size: 1, sets: vec![vec![0]], h: 1 };
        let (inst, alpha) = gen_setcover_cc_membership(&trivial).unwrap();
        assert!(ntu_core_membership(&inst, Rule::Cc, &alpha, &g).unwrap().is_member());

        let src = SetCoverInstance {
            universe_size: 4,
            sets: vec![vec![0, 1], vec![1, 2], vec![2, 3]],
            h: 1,
        };
        assert!(!src.has_set_cover());
        let (inst, alpha) = gen_setcover_cc_membership(&src).unwrap();
        let v = ntu_core_membership(&inst, Rule::Cc, &alpha, &g).unwrap();
        assert!(matches!(v, CoreVerdict::Infeasible(_)));
        let src = SetCoverInstance { h: 2, ..src };
        assert!(src.has_set_cover());
        let (inst, alpha) = gen_setcover_cc_membership(&src).unwrap();
        assert!(ntu_core_membership(&inst, Rule::Cc, &alpha, &g).unwrap().is_member());
    }

    #[test]
    fn sources_round_trip_json() {
        let src = covered();
        let text = serde_json::to_string(&src).unwrap();
        assert_eq!(serde_json::from_str::<Rx3cInstance>(&text).unwrap(), src);
    }
}
