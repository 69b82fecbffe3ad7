//! Exact Shapley values of the coalition-value game.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::guard::EnumerationGuard;
use crate::model::{Instance, Rule, UtilityVector};
use crate::rational::Rational;

/// Shapley value of every voter, from the values of all `2^n` coalitions.
pub fn shapley_value(
    instance: &Instance,
    rule: Rule,
    guard: &EnumerationGuard,
) -> Result<UtilityVector> {
    guard.check_instance(instance)?;
    let n = instance.n();
    if n == 0 {
        return Ok(UtilityVector::zeros(0));
    }
    let engine = Engine::new(instance.profile(), rule, instance.k())?;
    let values = engine.all_coalition_values(instance.k())?;

    // sums[i][s]: total marginal contribution of voter i to coalitions of size s
    let sums: Vec<Vec<i128>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let bit = 1usize << i;
            let mut by_size = vec![0i128; n];
            for s in 0..values.len() {
                if s & bit == 0 {
                    let size = s.count_ones() as usize;
                    by_size[size] = by_size[size]
                        .checked_add(values[s | bit] - values[s])
                        .ok_or_else(overflow)?;
                }
            }
            Ok(by_size)
        })
        .collect::<Result<_>>()?;

    let factorial = |x: usize| -> BigInt { (1..=x).map(BigInt::from).product() };
    let total = factorial(n);
    let weights: Vec<Rational> = (0..n)
        .map(|s| {
            Rational::new(factorial(s) * factorial(n - s - 1), total.clone())
                .expect("n! is positive")
        })
        .collect();
    let scale = Rational::from_integer(engine.scale);
    let phi = sums
        .iter()
        .map(|by_size| {
            let x: Rational = by_size
                .iter()
                .zip(&weights)
                .map(|(&m, w)| w * &Rational::from_integer(m))
                .sum();
            x / &scale
        })
        .collect();
    UtilityVector::new(phi)
}

fn overflow() -> Error {
    Error::EngineLimit("marginal sums do not fit in 128-bit integers".into())
}
