use super::Algorithm;
use crate::error::{Error, Result};
use crate::mech::{rr_flip_prob, PrivacyBudget};

/// Squared error.
pub fn l2_loss(estimate: f64, truth: f64) -> f64 {
    (estimate - truth).powi(2)
}

/// `|estimate - truth| / max(truth, 0.001·n)`.
pub fn relative_error(estimate: f64, truth: f64, n: usize) -> f64 {
    relative_error_with_floor(estimate, truth, 0.001 * n as f64)
}

/// `|estimate - truth| / max(truth, floor)`.
pub fn relative_error_with_floor(estimate: f64, truth: f64, floor: f64) -> f64 {
    (estimate - truth).abs() / truth.max(floor)
}

/// Order-of-magnitude upper bound on the expected l2 loss, with every
/// hidden constant set to 1. Only the shape in `n`, `d_tilde` and the
/// budget is meaningful.
///
/// `alpha` is the edge density, needed by the one-round triangle bound.
pub fn predict_bounds(
    algorithm: Algorithm,
    n: usize,
    d_tilde: usize,
    k: u32,
    budget: &PrivacyBudget,
    alpha: Option<f64>,
) -> Result<f64> {
    let n = n as f64;
    let d = d_tilde as f64;
    let PrivacyBudget { eps1, eps2, .. } = *budget;
    let positive = |name: &str, e: f64| {
        if e > 0.0 {
            Ok(e)
        } else {
            Err(Error::invalid(format!("{name} must be positive for the {} bound", algorithm.id())))
        }
    };
    match algorithm {
        Algorithm::LocalLapKstar | Algorithm::CentralLapKstar => {
            let central = d.powi(2 * k as i32 - 2) / positive("eps2", eps2)?.powi(2);
            Ok(if algorithm == Algorithm::LocalLapKstar { n * central } else { central })
        }
        Algorithm::CentralLapTriangle => Ok(d * d / positive("eps2", eps2)?.powi(2)),
        Algorithm::LocalRrTriangle => {
            let e = positive("eps1", eps1)?;
            let alpha = alpha
                .filter(|a| (0.0..=1.0).contains(a))
                .ok_or_else(|| Error::invalid("the randomized-response triangle bound needs an edge density"))?;
            let p = rr_flip_prob(e);
            let beta = alpha * (1.0 - p) + (1.0 - alpha) * p;
            Ok((6.0 * e).exp() / e.exp_m1().powi(6) * beta * n.powi(4))
        }
        Algorithm::Local2RoundsTriangle => {
            let e1 = positive("eps1", eps1)?;
            let e2 = positive("eps2", eps2)?;
            Ok(e1.exp() / e1.exp_m1().powi(2) * (d.powi(3) * n + e1.exp() / (e2 * e2) * d * d * n))
        }
        Algorithm::LocalRrTriangleNoEmp | Algorithm::Clustering => {
            Err(Error::invalid(format!("no loss bound for {}", algorithm.id())))
        }
    }
}
