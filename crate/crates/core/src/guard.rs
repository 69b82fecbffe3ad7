use crate::error::{Error, Result};
use crate::model::Instance;

/// Limits on exhaustive enumeration.
///
/// Operations that enumerate coalitions or committees refuse instances with
/// more than `max_voters` voters or more than `max_committees` committees of
/// some admissible size, unless `override_limits` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationGuard {
    pub max_voters: usize,
    pub max_committees: u128,
    pub override_limits: bool,
}

impl Default for EnumerationGuard {
    fn default() -> Self {
        EnumerationGuard {
            max_voters: 20,
            max_committees: 10_000_000,
            override_limits: false,
        }
    }
}

impl EnumerationGuard {
    pub fn overridden() -> Self {
        EnumerationGuard {
            override_limits: true,
            ..Self::default()
        }
    }

    pub fn check_voters(&self, n: usize) -> Result<()> {
        if !self.override_limits && n > self.max_voters {
            return Err(Error::GuardExceeded(format!(
                "{n} voters exceeds the limit of {}",
                self.max_voters
            )));
        }
        Ok(())
    }

    /// Checks `C(m, size)` against the committee limit.
    pub fn check_committees(&self, m: usize, size: usize) -> Result<()> {
        if self.override_limits {
            return Ok(());
        }
        let count = binomial(m, size);
        if count > self.max_committees {
            return Err(Error::GuardExceeded(format!(
                "C({m}, {size}) = {count} committees exceeds the limit of {}",
                self.max_committees
            )));
        }
        Ok(())
    }

    /// Checks every committee size up to `max_size`.
    pub fn check_committees_up_to(&self, m: usize, max_size: usize) -> Result<()> {
        let max_size = max_size.min(m);
        // binomials are unimodal in the lower argument
        self.check_committees(m, max_size.min(m / 2))
    }

    /// Checks the voter count and all committee sizes up to `k`.
    pub fn check_instance(&self, instance: &Instance) -> Result<()> {
        self.check_voters(instance.n())?;
        self.check_committees_up_to(instance.m(), instance.k())
    }
}

/// `C(n, r)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at each step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
