use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::action::TorusAction;
use super::metric::{
    average_metric, conformal_factor_f64, gram_matrix, orbit_invariance_check, orbit_volume, required_nodes,
    split_metric, MetricField, Quadrature, TransverseMetric,
};
use super::transverse::{flat_kahler_form, standard_j};
use super::FoliationError;

/// Volume tolerance for orbit integrals.
pub const VOLUME_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct TautConfig {
    pub action: TorusAction,
    pub metric: MetricField,
    /// Average the metric over the action before rescaling.
    pub average: bool,
    pub samples: usize,
    pub tol: f64,
    pub orbits: usize,
    /// Group parameters per orbit for the invariance check.
    pub orbit_samples: usize,
    /// Quadrature nodes per circle factor; `None` picks a safe count.
    pub nodes: Option<usize>,
    pub seed: u64,
}

impl TautConfig {
    pub fn new(action: TorusAction, metric: MetricField) -> Self {
        Self {
            action,
            metric,
            average: false,
            samples: 1000,
            tol: 1e-12,
            orbits: 50,
            orbit_samples: 12,
            nodes: None,
            seed: 0x7a07,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measured {
    pub passed: bool,
    pub max_dev: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TautReport {
    /// `|det M₁ − 1|` over the sample points.
    pub det_m1: Measured,
    /// `|vol − (2π)^m|` over the sampled orbits under `g₁`.
    pub orbit_volume: Measured,
    /// Variation of `u₀` and `M₀` along sampled orbits.
    pub invariance: Measured,
    /// Change of the vertical Gram matrix under the split metric.
    pub split: Measured,
}

/// Deterministic points on the unit sphere of ℝ^d.
pub fn sphere_samples(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            out.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// The taut-metric checks on sampled points and orbits of the unit sphere.
pub fn run_taut_suite(cfg: &TautConfig) -> Result<TautReport, FoliationError> {
    let action = &cfg.action;
    let d = action.real_dim();
    if cfg.metric.dim() != d {
        return Err(FoliationError::DimensionMismatch { expected: d, found: cfg.metric.dim() });
    }
    let m = action.rank();
    let degree = cfg.metric.polynomial_degree().unwrap_or(2);
    let nodes = cfg.nodes.unwrap_or_else(|| required_nodes(degree, action).max(16));
    let g0 = if cfg.average {
        average_metric(&cfg.metric, &Quadrature::Torus { action: action.clone(), nodes })?
    } else {
        cfg.metric.clone()
    };
    let g1 = MetricField::Taut { base: Box::new(g0.clone()), action: action.clone() };
    let fields = action.fundamental_fields();
    let points = sphere_samples(d, cfg.samples.max(cfg.orbits), cfg.seed);

    let mut det_dev: f64 = 0.0;
    for p in points.iter().take(cfg.samples) {
        let m1 = gram_matrix(&g1, &fields, p)?;
        det_dev = det_dev.max((m1.determinant() - 1.0).abs());
    }

    let target = std::f64::consts::TAU.powi(m as i32);
    let mut vol_dev: f64 = 0.0;
    let mut inv_dev: f64 = 0.0;
    let params: Vec<Vec<f64>> = {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0b17);
        (0..cfg.orbit_samples)
            .map(|_| (0..m).map(|_| rand::Rng::random_range(&mut rng, 0.0..std::f64::consts::TAU)).collect())
            .collect()
    };
    for p in points.iter().take(cfg.orbits) {
        let vol = orbit_volume(&g1, action, p, nodes)?;
        vol_dev = vol_dev.max((vol - target).abs());
        let field = |x: &[f64]| -> Result<Vec<f64>, FoliationError> {
            let m0 = gram_matrix(&g0, &fields, x)?;
            let u0 = conformal_factor_f64(&m0, m)?;
            Ok(std::iter::once(u0).chain(m0.iter().cloned()).collect())
        };
        let v = orbit_invariance_check(field, action, p, &params, cfg.tol)?;
        inv_dev = inv_dev.max(v.max_dev);
    }

    let omega = flat_kahler_form(action.complex_dim(), 0);
    let h = TransverseMetric::Form { omega, j: standard_j(action.complex_dim(), 0) };
    let g = split_metric(&g1, h, action)?;
    let mut split_dev: f64 = 0.0;
    for p in points.iter().take(cfg.samples) {
        let a = gram_matrix(&g1, &fields, p)?;
        let b = gram_matrix(&g, &fields, p)?;
        split_dev = split_dev.max(max_abs_diff(a.as_slice(), b.as_slice()));
    }

    Ok(TautReport {
        det_m1: Measured { passed: det_dev <= cfg.tol, max_dev: det_dev },
        orbit_volume: Measured { passed: vol_dev <= VOLUME_TOL, max_dev: vol_dev },
        invariance: Measured { passed: inv_dev <= cfg.tol, max_dev: inv_dev },
        split: Measured { passed: split_dev <= cfg.tol, max_dev: split_dev },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_hopf_small_run() {
        let mut cfg = TautConfig::new(TorusAction::circle(&[1, 2]).unwrap(), MetricField::flat(4));
        cfg.samples = 50;
        cfg.orbits = 5;
        let r = run_taut_suite(&cfg).unwrap();
        assert!(r.det_m1.passed && r.orbit_volume.passed && r.invariance.passed && r.split.passed, "{r:?}");
    }

    #[test]
    fn samples_lie_on_sphere() {
        for p in sphere_samples(4, 20, 3) {
            let n: f64 = p.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
        assert_eq!(sphere_samples(4, 5, 9), sphere_samples(4, 5, 9));
    }
}
