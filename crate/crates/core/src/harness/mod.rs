//! Monte Carlo experiment driver.
//!
//! A run fixes a base graph, then for every trial draws a node sample,
//! resolves the degree cap, runs one estimator and scores it against the
//! exact count. All randomness is derived from the master seed and the
//! trial index, so a run is bitwise reproducible regardless of thread
//! scheduling.

mod metrics;
mod output;

pub use metrics::{l2_loss, predict_bounds, relative_error, relative_error_with_floor};
pub use output::{write_outputs, write_reports_csv, CSV_HEADER};

use std::borrow::Cow;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::estimators::{
    central_lap_kstar, central_lap_triangle, estimate_clustering, local_2rounds_triangle, local_lap_kstar,
    local_rr_triangle, noisy_max_degree, EstimatorOutput, Round1Mode, Round2Noise, TwoRoundOptions,
};
use crate::graph::{
    clustering_coefficient, count_kstars, count_triangles, generate_er, load_edge_list, max_degree, sample_induced,
    Graph,
};
use crate::mech::{PrivacyBudget, RandomSource, Role, TrialSource};

/// Floor of the clustering-coefficient relative error. The coefficient lies
/// in `[0, 1]`, so the count floor `0.001·n` does not apply.
pub const CLUSTERING_RE_FLOOR: f64 = 0.001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    LocalLapKstar,
    CentralLapKstar,
    LocalRrTriangle,
    LocalRrTriangleNoEmp,
    Local2RoundsTriangle,
    CentralLapTriangle,
    Clustering,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::LocalLapKstar,
        Algorithm::CentralLapKstar,
        Algorithm::LocalRrTriangle,
        Algorithm::LocalRrTriangleNoEmp,
        Algorithm::Local2RoundsTriangle,
        Algorithm::CentralLapTriangle,
        Algorithm::Clustering,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::LocalLapKstar => "local-lap-kstar",
            Algorithm::CentralLapKstar => "central-lap-kstar",
            Algorithm::LocalRrTriangle => "local-rr-tri",
            Algorithm::LocalRrTriangleNoEmp => "local-rr-tri-noemp",
            Algorithm::Local2RoundsTriangle => "local-2rounds-tri",
            Algorithm::CentralLapTriangle => "central-lap-tri",
            Algorithm::Clustering => "clustering",
        }
    }

    pub fn is_kstar(self) -> bool {
        matches!(self, Algorithm::LocalLapKstar | Algorithm::CentralLapKstar)
    }

    /// Whether the estimator takes a degree cap.
    pub fn uses_d_tilde(self) -> bool {
        !matches!(self, Algorithm::LocalRrTriangle | Algorithm::LocalRrTriangleNoEmp)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::config(format!("unknown algorithm '{s}'")))
    }
}

/// How the degree cap `d_tilde` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DTildePolicy {
    Explicit(usize),
    /// The sampled graph's true maximum degree (treated as public).
    TrueMax,
    /// Noisy max degree, paid for with `eps0`.
    Private,
}

impl DTildePolicy {
    pub fn label(self) -> &'static str {
        match self {
            DTildePolicy::Explicit(_) => "explicit",
            DTildePolicy::TrueMax => "true",
            DTildePolicy::Private => "private",
        }
    }
}

impl FromStr for DTildePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "true" => Ok(DTildePolicy::TrueMax),
            "private" => Ok(DTildePolicy::Private),
            _ => s
                .parse()
                .map(DTildePolicy::Explicit)
                .map_err(|_| Error::config(format!("degree cap must be N, 'true' or 'private', got '{s}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum GraphSource {
    File(PathBuf),
    /// Generated once per run from the master seed.
    Er { n: usize, alpha: f64 },
    InMemory(Arc<Graph>),
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub source: GraphSource,
    /// Users sampled per trial; `None` uses the whole base graph.
    pub n: Option<usize>,
    /// Star size for k-star estimators.
    pub k: u32,
    pub eps: f64,
    /// Fractions of `eps` for `(eps0, eps1, eps2)`. `None` picks
    /// `(0.1, 0.45, 0.45)` under the private cap and `(0, 0.5, 0.5)` otherwise.
    pub split: Option<[f64; 3]>,
    pub d_tilde: DTildePolicy,
    pub trials: u64,
    pub seed: u64,
    pub round1: Round1Mode,
    pub round2_noise: Round2Noise,
    /// Reuse trial 0's node sample in every trial.
    pub fix_sample: bool,
    /// Silence every noise channel; estimators then return exact counts.
    pub noiseless: bool,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, source: GraphSource) -> Self {
        ExperimentConfig {
            algorithm,
            source,
            n: None,
            k: 2,
            eps: 1.0,
            split: None,
            d_tilde: DTildePolicy::TrueMax,
            trials: 1,
            seed: 0,
            round1: Round1Mode::default(),
            round2_noise: Round2Noise::default(),
            fix_sample: false,
            noiseless: false,
        }
    }

    pub fn resolved_split(&self) -> [f64; 3] {
        self.split.unwrap_or(match self.d_tilde {
            DTildePolicy::Private => [0.1, 0.45, 0.45],
            _ => [0.0, 0.5, 0.5],
        })
    }

    pub fn validate(&self) -> Result<()> {
        let alg = self.algorithm;
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::config(format!("eps = {} must be positive and finite", self.eps)));
        }
        if self.trials == 0 {
            return Err(Error::config("at least one trial is required"));
        }
        let [f0, f1, f2] = self.resolved_split();
        if [f0, f1, f2].iter().any(|f| !(*f >= 0.0 && f.is_finite())) || ((f0 + f1 + f2) - 1.0).abs() > 1e-9 {
            return Err(Error::config(format!("split {f0},{f1},{f2} must be non-negative and sum to 1")));
        }
        match (self.d_tilde, f0 > 0.0) {
            (DTildePolicy::Private, false) => {
                return Err(Error::config("the private degree cap needs a positive eps0 share"))
            }
            (DTildePolicy::Explicit(_) | DTildePolicy::TrueMax, true) => {
                return Err(Error::config("an eps0 share is only spent under the private degree cap"))
            }
            _ => {}
        }
        if !alg.uses_d_tilde() && self.d_tilde == DTildePolicy::Private {
            return Err(Error::config(format!("{alg} takes no degree cap")));
        }
        if f0 >= 1.0 {
            return Err(Error::config("no budget left after the degree cap"));
        }
        if matches!(alg, Algorithm::Local2RoundsTriangle | Algorithm::Clustering) && (f1 == 0.0 || f2 == 0.0) {
            return Err(Error::config(format!("{alg} needs positive eps1 and eps2 shares")));
        }
        if alg.is_kstar() && self.k == 0 {
            return Err(Error::config("k must be at least 1"));
        }
        if let GraphSource::Er { n, alpha } = self.source {
            if !(0.0..=1.0).contains(&alpha) || n == 0 {
                return Err(Error::config(format!("bad random graph parameters {n},{alpha}")));
            }
        }
        Ok(())
    }

    /// Machine-readable echo of the configuration.
    pub fn echo(&self) -> serde_json::Value {
        let source = match &self.source {
            GraphSource::File(p) => json!({ "file": p.display().to_string() }),
            GraphSource::Er { n, alpha } => json!({ "er": { "n": n, "alpha": alpha } }),
            GraphSource::InMemory(g) => json!({ "in_memory": { "n": g.n(), "edges": g.edge_count() } }),
        };
        let d_tilde = match self.d_tilde {
            DTildePolicy::Explicit(d) => json!(d),
            p => json!(p.label()),
        };
        json!({
            "algorithm": self.algorithm.id(),
            "source": source,
            "n": self.n,
            "k": self.algorithm.is_kstar().then_some(self.k),
            "eps": self.eps,
            "split": self.resolved_split(),
            "d_tilde": d_tilde,
            "trials": self.trials,
            "seed": self.seed,
            "round1": format!("{:?}", self.round1).to_lowercase(),
            "tight_round2_noise": self.round2_noise == Round2Noise::Tight,
            "fix_sample": self.fix_sample,
            "noiseless": self.noiseless,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub algorithm: &'static str,
    pub trial: u64,
    /// Users in the sampled graph.
    pub n: usize,
    pub k: Option<u32>,
    pub estimate: f64,
    pub truth: f64,
    pub l2: f64,
    pub relative_error: f64,
    pub d_tilde_used: Option<usize>,
    pub budget: PrivacyBudget,
    pub wall_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub trials: u64,
    pub mean_l2: f64,
    pub mean_relative_error: f64,
    pub stddev_l2: f64,
    pub mean_estimate: f64,
    pub truth_mean: f64,
}

impl Summary {
    pub fn of(reports: &[TrialReport]) -> Summary {
        let t = reports.len() as f64;
        let mean = |f: fn(&TrialReport) -> f64| reports.iter().map(f).sum::<f64>() / t;
        let mean_l2 = mean(|r| r.l2);
        let var = if reports.len() > 1 {
            reports.iter().map(|r| (r.l2 - mean_l2).powi(2)).sum::<f64>() / (t - 1.0)
        } else {
            0.0
        };
        Summary {
            trials: reports.len() as u64,
            mean_l2,
            mean_relative_error: mean(|r| r.relative_error),
            stddev_l2: var.sqrt(),
            mean_estimate: mean(|r| r.estimate),
            truth_mean: mean(|r| r.truth),
        }
    }
}

/// Per-estimator reports behind a clustering run.
#[derive(Clone, Debug)]
pub struct ClusteringParts {
    pub triangles: Vec<TrialReport>,
    pub two_stars: Vec<TrialReport>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub reports: Vec<TrialReport>,
    pub parts: Option<ClusteringParts>,
    pub summary: Summary,
    /// Loss bound with unit constants, from trial 0's cap and budget.
    pub order_only_l2_bound: Option<f64>,
    pub wall_seconds: f64,
}

/// Runs every trial of `config`. Trials run in parallel; reports come back
/// in trial order.
pub fn run_trials(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let started = Instant::now();
    let root = if config.noiseless {
        RandomSource::new(config.seed).noiseless()
    } else {
        RandomSource::new(config.seed)
    };
    let base: Arc<Graph> = match &config.source {
        GraphSource::File(path) => Arc::new(load_edge_list(path)?),
        GraphSource::Er { n, alpha } => {
            Arc::new(generate_er(*n, *alpha, &mut root.trial(0).stream(Role::Generation, 0))?)
        }
        GraphSource::InMemory(g) => Arc::clone(g),
    };
    let n_sub = config.n.unwrap_or(base.n());
    if n_sub == 0 || n_sub > base.n() {
        return Err(Error::config(format!("sample size {n_sub} must be in 1..={}", base.n())));
    }
    let sample = |trial: u64| -> Result<Cow<'_, Graph>> {
        if n_sub == base.n() {
            return Ok(Cow::Borrowed(&*base));
        }
        let t = if config.fix_sample { 0 } else { trial };
        Ok(Cow::Owned(sample_induced(&base, n_sub, &mut root.trial(t).stream(Role::Sampling, 0))?))
    };
    let fixed = match config.fix_sample && n_sub < base.n() {
        true => Some(sample(0)?.into_owned()),
        false => None,
    };

    let outcomes = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let g = match &fixed {
                Some(g) => Cow::Borrowed(g),
                None => sample(t)?,
            };
            run_one(config, &g, &root.trial(t))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut reports = Vec::with_capacity(outcomes.len());
    let mut parts = ClusteringParts { triangles: Vec::new(), two_stars: Vec::new() };
    for (report, sub) in outcomes {
        reports.push(report);
        if let Some((tri, stars)) = sub {
            parts.triangles.push(tri);
            parts.two_stars.push(stars);
        }
    }
    let summary = Summary::of(&reports);
    let density = if base.n() > 1 {
        2.0 * base.edge_count() as f64 / (base.n() as f64 * (base.n() as f64 - 1.0))
    } else {
        0.0
    };
    let alpha = match config.source {
        GraphSource::Er { alpha, .. } => alpha,
        _ => density,
    };
    let first = &reports[0];
    let order_only_l2_bound = predict_bounds(
        config.algorithm,
        n_sub,
        first.d_tilde_used.unwrap_or(0),
        config.k,
        &first.budget,
        Some(alpha),
    )
    .ok();
    Ok(RunOutput {
        config: config.clone(),
        reports,
        parts: (config.algorithm == Algorithm::Clustering).then_some(parts),
        summary,
        order_only_l2_bound,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

type Outcome = (TrialReport, Option<(TrialReport, TrialReport)>);

fn run_one(config: &ExperimentConfig, g: &Graph, src: &TrialSource) -> Result<Outcome> {
    let started = Instant::now();
    let alg = config.algorithm;
    if alg == Algorithm::Clustering {
        let tri = score(Algorithm::Local2RoundsTriangle, config, g, &(*src).lane(1), 2)?;
        let stars = score(Algorithm::LocalLapKstar, config, g, &(*src).lane(2), 2)?;
        let (tri_out, tri_report) = tri;
        let (stars_out, stars_report) = stars;
        let cc = estimate_clustering(&tri_out, &stars_out)?;
        let truth = clustering_coefficient(tri_report.truth, stars_report.truth);
        let report = TrialReport {
            algorithm: alg.id(),
            trial: src.trial_index(),
            n: g.n(),
            k: None,
            estimate: cc.coefficient,
            truth,
            l2: l2_loss(cc.coefficient, truth),
            relative_error: relative_error_with_floor(cc.coefficient, truth, CLUSTERING_RE_FLOOR),
            d_tilde_used: tri_report.d_tilde_used,
            budget: tri_report.budget + stars_report.budget,
            wall_time: started.elapsed().as_secs_f64(),
        };
        return Ok((report, Some((tri_report, stars_report))));
    }
    let (_, report) = score(alg, config, g, src, config.k)?;
    Ok((report, None))
}

/// Runs one estimator at the full `config.eps` and scores it.
fn score(
    alg: Algorithm,
    config: &ExperimentConfig,
    g: &Graph,
    src: &TrialSource,
    k: u32,
) -> Result<(EstimatorOutput, TrialReport)> {
    let started = Instant::now();
    let [f0, f1, f2] = config.resolved_split();
    let eps0 = f0 * config.eps;
    let rest = config.eps - eps0;
    let d_tilde = if alg.uses_d_tilde() {
        Some(match config.d_tilde {
            DTildePolicy::Explicit(d) => d,
            DTildePolicy::TrueMax => max_degree(g),
            DTildePolicy::Private => noisy_max_degree(g, eps0, src)?.1,
        })
    } else {
        None
    };
    let d = d_tilde.unwrap_or(0);
    let out = match alg {
        Algorithm::LocalLapKstar => local_lap_kstar(g, rest, d, k, src)?,
        Algorithm::CentralLapKstar => central_lap_kstar(g, rest, d, k, src)?,
        Algorithm::LocalRrTriangle => local_rr_triangle(g, rest, src, true)?,
        Algorithm::LocalRrTriangleNoEmp => local_rr_triangle(g, rest, src, false)?,
        Algorithm::CentralLapTriangle => central_lap_triangle(g, rest, d, src)?,
        Algorithm::Local2RoundsTriangle => {
            let opts = TwoRoundOptions { round1: config.round1, noise: config.round2_noise };
            local_2rounds_triangle(g, f1 * config.eps, f2 * config.eps, d, src, opts)?
        }
        Algorithm::Clustering => unreachable!("clustering is scored from its parts"),
    };
    let truth = if alg.is_kstar() {
        count_kstars(g, k)? as f64
    } else {
        count_triangles(g) as f64
    };
    let budget = out.budget_spent + PrivacyBudget::max_degree(eps0);
    let report = TrialReport {
        algorithm: alg.id(),
        trial: src.trial_index(),
        n: g.n(),
        k: alg.is_kstar().then_some(k),
        estimate: out.estimate,
        truth,
        l2: l2_loss(out.estimate, truth),
        relative_error: relative_error(out.estimate, truth, g.n()),
        d_tilde_used: d_tilde,
        budget,
        wall_time: started.elapsed().as_secs_f64(),
    };
    Ok((out, report))
}
