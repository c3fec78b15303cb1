use std::ops::Add;

use serde::Serialize;

use crate::error::{Error, Result};

/// Budget consumed by a protocol, by round.
///
/// `eps0` pays for the noisy max degree, `eps1` for randomized response
/// on neighbor lists, `eps2` for Laplace-noised per-user statistics.
/// Composition is sequential.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PrivacyBudget {
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl PrivacyBudget {
    pub fn new(eps0: f64, eps1: f64, eps2: f64) -> Result<Self> {
        for (name, v) in [("eps0", eps0), ("eps1", eps1), ("eps2", eps2)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} = {v} must be a finite non-negative number")));
            }
        }
        Ok(PrivacyBudget { eps0, eps1, eps2 })
    }

    pub fn max_degree(eps0: f64) -> Self {
        PrivacyBudget { eps0, ..Default::default() }
    }

    pub fn randomized_response(eps1: f64) -> Self {
        PrivacyBudget { eps1, ..Default::default() }
    }

    pub fn laplace(eps2: f64) -> Self {
        PrivacyBudget { eps2, ..Default::default() }
    }

    /// Guarantee for neighbor lists differing in one bit.
    pub fn edge_ldp_total(&self) -> f64 {
        self.eps0 + self.eps1 + self.eps2
    }

    /// Guarantee for graphs differing in one edge. Noisy degrees pay twice
    /// because one edge moves two degrees; the lower-triangular rounds do not.
    pub fn entire_edge_ldp_total(&self) -> f64 {
        2.0 * self.eps0 + self.eps1 + self.eps2
    }
}

impl Add for PrivacyBudget {
    type Output = PrivacyBudget;

    fn add(self, rhs: Self) -> Self {
        PrivacyBudget {
            eps0: self.eps0 + rhs.eps0,
            eps1: self.eps1 + rhs.eps1,
            eps2: self.eps2 + rhs.eps2,
        }
    }
}
