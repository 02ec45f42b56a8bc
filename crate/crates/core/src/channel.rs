//! Forward model of a heralded single-photon source mixed with channel noise,
//! attenuated by the channel and observed through a photon-number-resolving
//! detector at several efficiencies.
//!
//! The chain is `b(m)` (noise) -> `p(m)` (noise plus heralded photon) ->
//! `Pi(k)` (photocounts after binomial thinning with survival `tau_ch * eta`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `sum(probs) == 1` for every distribution type in this module.
pub const NORM_TOL: f64 = 1e-9;

/// Tail mass left out when a cutoff is derived rather than given.
pub const DEFAULT_TAIL_EPSILON: f64 = 1e-8;

/// Common read access to a discrete probability mass function over `0..len`.
pub trait Pmf {
    fn probs(&self) -> &[f64];

    fn mean(&self) -> f64 {
        self.probs()
            .iter()
            .enumerate()
            .map(|(m, &p)| m as f64 * p)
            .sum()
    }
}

fn check_probabilities(field: &str, probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::invalid(field, "empty distribution"));
    }
    if let Some((i, &p)) = probs
        .iter()
        .enumerate()
        .find(|(_, &p)| !p.is_finite() || !(0.0..=1.0).contains(&p))
    {
        return Err(Error::invalid(
            field,
            format!("entry {i} = {p} is outside [0, 1]"),
        ));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized {
            sum,
            tolerance: NORM_TOL,
        });
    }
    Ok(())
}

fn check_unit_interval(field: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(field, format!("{x} is outside [0, 1]")));
    }
    Ok(())
}

/// Noise photon-number distribution `b(0..=M)`.
///
/// Parametric constructors renormalize over the truncated support and keep
/// the discarded tail probability in `tail_mass`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseDistribution {
    probs: Vec<f64>,
    #[serde(default)]
    tail_mass: f64,
}

impl NoiseDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_probabilities("noise distribution", &probs)?;
        Ok(Self {
            probs,
            tail_mass: 0.0,
        })
    }

    /// All mass on `n` photons, padded with zeros up to `cutoff`.
    pub fn fock(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(Error::invalid(
                "fock state",
                format!("photon number {n} exceeds cutoff {cutoff}"),
            ));
        }
        let mut probs = vec![0.0; cutoff + 1];
        probs[n] = 1.0;
        Ok(Self {
            probs,
            tail_mass: 0.0,
        })
    }

    pub fn uniform(cutoff: usize) -> Self {
        let n = cutoff + 1;
        Self {
            probs: vec![1.0 / n as f64; n],
            tail_mass: 0.0,
        }
    }

    /// Builds from a point already on the simplex (e.g. a projection result)
    /// without re-checking.
    pub(crate) fn from_simplex_point(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= NORM_TOL);
        Self {
            probs,
            tail_mass: 0.0,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.probs.len() - 1
    }

    /// Probability of the untruncated law beyond the cutoff that was dropped
    /// before renormalization (zero for explicit distributions).
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }
}

impl Pmf for NoiseDistribution {
    fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Photon-number distribution at the channel input after the heralded photon
/// has been added, `p(0..=M+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedDistribution(Vec<f64>);

impl MixedDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_probabilities("mixed distribution", &probs)?;
        Ok(Self(probs))
    }
}

impl Pmf for MixedDistribution {
    fn probs(&self) -> &[f64] {
        &self.0
    }
}

/// Photocount distribution `Pi(0..=K)` for one efficiency setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhotocountDistribution(Vec<f64>);

impl PhotocountDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_probabilities("photocount distribution", &probs)?;
        Ok(Self(probs))
    }

    pub fn kmax(&self) -> usize {
        self.0.len() - 1
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.0
    }
}

impl Pmf for PhotocountDistribution {
    fn probs(&self) -> &[f64] {
        &self.0
    }
}

/// Source and channel parameters: heralded photon probability `xi` and
/// channel transmittance `tau_ch`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelScenario {
    pub xi: f64,
    pub tau_ch: f64,
}

impl ChannelScenario {
    pub fn new(xi: f64, tau_ch: f64) -> Result<Self> {
        let s = Self { xi, tau_ch };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_interval("xi", self.xi)?;
        check_unit_interval("tau_ch", self.tau_ch)
    }
}

/// Detector efficiency settings obtained by placing a variable attenuator in
/// front of a detector with overall efficiency `eta_tot`.
///
/// Setting `i` has efficiency `eta_i = eta_tot * settings[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionPlan {
    pub eta_tot: f64,
    pub settings: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_det: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl DetectionPlan {
    pub fn new(eta_tot: f64, settings: Vec<f64>) -> Result<Self> {
        let plan = Self {
            eta_tot,
            settings,
            eta_det: None,
            gamma: None,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Detector efficiency `eta_det` behind an insertion loss `gamma`.
    pub fn from_components(eta_det: f64, gamma: f64, settings: Vec<f64>) -> Result<Self> {
        let plan = Self {
            eta_tot: gamma * eta_det,
            settings,
            eta_det: Some(eta_det),
            gamma: Some(gamma),
        };
        plan.validate()?;
        Ok(plan)
    }

    /// `n` attenuation settings evenly spaced over `(0, 1]`, ending at 1.
    /// With `n = 10` these are 0.1, 0.2, ..., 1.0.
    pub fn evenly_spaced(eta_tot: f64, n: usize) -> Result<Self> {
        let settings = (1..=n).map(|i| i as f64 / n as f64).collect();
        Self::new(eta_tot, settings)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta_tot > 0.0 && self.eta_tot <= 1.0) {
            return Err(Error::invalid(
                "eta_tot",
                format!("{} is outside (0, 1]", self.eta_tot),
            ));
        }
        if self.settings.is_empty() {
            return Err(Error::invalid("settings", "no attenuation settings"));
        }
        for (i, &t) in self.settings.iter().enumerate() {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::invalid(
                    "settings",
                    format!("setting {i} = {t} is outside (0, 1]"),
                ));
            }
            if self.settings[..i].contains(&t) {
                return Err(Error::invalid(
                    "settings",
                    format!("setting {i} = {t} is duplicated"),
                ));
            }
        }
        match (self.eta_det, self.gamma) {
            (None, None) => {}
            (Some(eta_det), Some(gamma)) => {
                check_unit_interval("eta_det", eta_det)?;
                check_unit_interval("gamma", gamma)?;
                if (gamma * eta_det - self.eta_tot).abs() > 1e-12 {
                    return Err(Error::invalid(
                        "eta_tot",
                        format!(
                            "{} does not equal gamma * eta_det = {}",
                            self.eta_tot,
                            gamma * eta_det
                        ),
                    ));
                }
            }
            _ => {
                return Err(Error::invalid(
                    "eta_det",
                    "eta_det and gamma must be given together",
                ))
            }
        }
        Ok(())
    }

    pub fn efficiencies(&self) -> Vec<f64> {
        self.settings.iter().map(|t| self.eta_tot * t).collect()
    }
}

/// Adds a heralded photon, present with probability `xi`, to the noise:
/// `p(m) = b(m-1) xi + b(m) (1 - xi)`.
pub fn mix_source_noise(b: &NoiseDistribution, xi: f64) -> Result<MixedDistribution> {
    check_unit_interval("xi", xi)?;
    let sum: f64 = b.probs.iter().sum();
    if (sum - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized {
            sum,
            tolerance: NORM_TOL,
        });
    }
    let n = b.probs.len();
    let mut p = vec![0.0; n + 1];
    for (m, &bm) in b.probs.iter().enumerate() {
        p[m] += bm * (1.0 - xi);
        p[m + 1] += bm * xi;
    }
    Ok(MixedDistribution(p))
}

/// Rows `m = 0..n` of the binomial survival kernel, `row[m][k] = C(m,k) q^k (1-q)^(m-k)`.
///
/// Built by the Pascal recurrence (one photon at a time), which only adds
/// nonnegative terms and is exact at `q = 0` and `q = 1`.
pub(crate) fn thinning_kernel(q: f64, n: usize) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(n);
    let mut row = vec![1.0];
    for _ in 0..n {
        let mut next = vec![0.0; row.len() + 1];
        for (k, &r) in row.iter().enumerate() {
            next[k] += (1.0 - q) * r;
            next[k + 1] += q * r;
        }
        rows.push(std::mem::replace(&mut row, next));
    }
    rows
}

/// Photocount law when each photon survives independently with probability `q`.
pub fn binomial_thinning<P: Pmf + ?Sized>(p: &P, q: f64) -> Result<PhotocountDistribution> {
    check_unit_interval("q", q)?;
    let probs = p.probs();
    let kernel = thinning_kernel(q, probs.len());
    let mut out = vec![0.0; probs.len()];
    for (row, &pm) in kernel.iter().zip(probs) {
        for (o, &r) in out.iter_mut().zip(row) {
            *o += pm * r;
        }
    }
    Ok(PhotocountDistribution(out))
}

/// Exact photocount distributions for every setting of `plan`.
pub fn forward_photocounts(
    b: &NoiseDistribution,
    scenario: &ChannelScenario,
    plan: &DetectionPlan,
) -> Result<Vec<PhotocountDistribution>> {
    scenario.validate()?;
    plan.validate()?;
    let mixed = mix_source_noise(b, scenario.xi)?;
    plan.efficiencies()
        .into_iter()
        .map(|eta| binomial_thinning(&mixed, scenario.tau_ch * eta))
        .collect()
}

/// Parametric noise families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Poisson,
    /// Single-mode Bose-Einstein statistics, `b(m) = mu^m / (1 + mu)^(m + 1)`.
    Thermal,
}

impl NoiseKind {
    /// Untruncated probability mass at `m`.
    pub fn pmf(self, mu: f64, m: usize) -> f64 {
        if mu == 0.0 {
            return if m == 0 { 1.0 } else { 0.0 };
        }
        match self {
            NoiseKind::Poisson => {
                let ln_fact: f64 = (2..=m).map(|j| (j as f64).ln()).sum();
                (m as f64 * mu.ln() - mu - ln_fact).exp()
            }
            NoiseKind::Thermal => {
                let r = mu / (1.0 + mu);
                r.powi(m as i32) / (1.0 + mu)
            }
        }
    }

    /// Untruncated probability of more than `cutoff` photons.
    pub fn tail(self, mu: f64, cutoff: usize) -> f64 {
        if mu == 0.0 {
            return 0.0;
        }
        match self {
            NoiseKind::Poisson => poisson_tail(mu, cutoff),
            NoiseKind::Thermal => (mu / (1.0 + mu)).powi(cutoff as i32 + 1),
        }
    }

    /// Law truncated at `cutoff` and renormalized.
    pub fn distribution(self, mu: f64, cutoff: usize) -> Result<NoiseDistribution> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::invalid("mu", format!("{mu} must be finite and >= 0")));
        }
        let raw: Vec<f64> = match self {
            NoiseKind::Poisson => poisson_terms(mu, cutoff),
            NoiseKind::Thermal => (0..=cutoff).map(|m| self.pmf(mu, m)).collect(),
        };
        let total: f64 = raw.iter().sum();
        Ok(NoiseDistribution {
            probs: raw.into_iter().map(|x| x / total).collect(),
            tail_mass: self.tail(mu, cutoff),
        })
    }
}

pub fn poisson_noise(mu: f64, cutoff: usize) -> Result<NoiseDistribution> {
    NoiseKind::Poisson.distribution(mu, cutoff)
}

pub fn thermal_noise(mu: f64, cutoff: usize) -> Result<NoiseDistribution> {
    NoiseKind::Thermal.distribution(mu, cutoff)
}

// e^-mu mu^m / m! for m = 0..=cutoff by the ratio recurrence, in log space.
fn poisson_terms(mu: f64, cutoff: usize) -> Vec<f64> {
    if mu == 0.0 {
        let mut v = vec![0.0; cutoff + 1];
        v[0] = 1.0;
        return v;
    }
    let ln_mu = mu.ln();
    let mut ln_p = -mu;
    let mut out = Vec::with_capacity(cutoff + 1);
    for m in 0..=cutoff {
        if m > 0 {
            ln_p += ln_mu - (m as f64).ln();
        }
        out.push(ln_p.exp());
    }
    out
}

// Sums the terms beyond the cutoff directly instead of `1 - cdf`, which
// cancels catastrophically for small tails.
fn poisson_tail(mu: f64, cutoff: usize) -> f64 {
    let ln_mu = mu.ln();
    let mut ln_p = -mu;
    for m in 1..=cutoff + 1 {
        ln_p += ln_mu - (m as f64).ln();
    }
    let mut m = cutoff + 1;
    let mut term = ln_p.exp();
    let mut tail = 0.0;
    loop {
        tail += term;
        m += 1;
        term *= mu / m as f64;
        if (m as f64) > mu && term <= tail * 1e-17 {
            break;
        }
        if term == 0.0 && (m as f64) > mu {
            break;
        }
    }
    tail
}

/// Smallest cutoff `M` whose untruncated tail probability `P(m > M)` is below `epsilon`.
pub fn truncation_bound(kind: NoiseKind, mu: f64, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(
            "epsilon",
            format!("{epsilon} is outside (0, 1)"),
        ));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::invalid("mu", format!("{mu} must be finite and >= 0")));
    }
    if mu == 0.0 {
        return Ok(0);
    }
    let mut m = match kind {
        // r^(M+1) < eps, started from the closed form and corrected below.
        NoiseKind::Thermal => {
            let r = mu / (1.0 + mu);
            ((epsilon.ln() / r.ln()).ceil() as usize).saturating_sub(2)
        }
        NoiseKind::Poisson => mu.floor() as usize,
    };
    while m > 0 && kind.tail(mu, m - 1) < epsilon {
        m -= 1;
    }
    while kind.tail(mu, m) >= epsilon {
        m += 1;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn mixing_limits() {
        let b = poisson_noise(0.84, 6).unwrap();
        let p = mix_source_noise(&b, 0.0).unwrap();
        assert_eq!(&p.probs()[..7], b.probs());
        assert_eq!(p.probs()[7], 0.0);

        let vac = NoiseDistribution::fock(0, 0).unwrap();
        assert_eq!(mix_source_noise(&vac, 1.0).unwrap().probs(), &[0.0, 1.0]);
        assert_eq!(mix_source_noise(&vac, 0.5).unwrap().probs(), &[0.5, 0.5]);
    }

    #[test]
    fn mixing_at_heralding_efficiency() {
        let b = poisson_noise(0.84, 10).unwrap();
        let p = mix_source_noise(&b, 0.092).unwrap();
        // (1 - xi) e^-mu / (1 - tail): tail beyond 10 is ~5e-11
        let expected = 0.908 * (-0.84f64).exp();
        assert!((p.probs()[0] - expected).abs() < 1e-9);
        assert!((p.probs()[0] - 0.392).abs() < 5e-4);
    }

    #[test]
    fn mixing_rejects_bad_xi() {
        let b = NoiseDistribution::uniform(3);
        assert!(mix_source_noise(&b, 1.2).is_err());
        assert!(mix_source_noise(&b, -0.1).is_err());
    }

    #[test]
    fn rejects_unnormalized_noise() {
        assert!(matches!(
            NoiseDistribution::new(vec![0.5, 0.4]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(NoiseDistribution::new(vec![1.2, -0.2]).is_err());
    }

    #[test]
    fn thinning_small_cases() {
        let one = MixedDistribution::new(vec![0.0, 1.0]).unwrap();
        assert!(close(binomial_thinning(&one, 0.3).unwrap().probs(), &[0.7, 0.3], 1e-15));
        let two = MixedDistribution::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            binomial_thinning(&two, 0.5).unwrap().probs(),
            &[0.25, 0.5, 0.25]
        );
        let p = mix_source_noise(&thermal_noise(1.3, 9).unwrap(), 0.2).unwrap();
        assert_eq!(binomial_thinning(&p, 1.0).unwrap().probs(), p.probs());
        assert!(binomial_thinning(&p, 1.5).is_err());
    }

    #[test]
    fn thinned_poisson_is_poisson() {
        // Oracle: Poisson thinning identity, evaluated term by term.
        let (mu, q, m) = (1.7, 0.35, 40);
        let p = poisson_noise(mu, m).unwrap();
        let pi = binomial_thinning(&p, q).unwrap();
        let mut term = (-q * mu).exp();
        for k in 0..=m {
            if k > 0 {
                term *= q * mu / k as f64;
            }
            assert!((pi.probs()[k] - term).abs() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn forward_empty_channel() {
        let b = NoiseDistribution::fock(0, 4).unwrap();
        let scen = ChannelScenario::new(0.0, 0.85).unwrap();
        let plan = DetectionPlan::evenly_spaced(0.509, 10).unwrap();
        for pi in forward_photocounts(&b, &scen, &plan).unwrap() {
            assert_eq!(pi.probs()[0], 1.0);
            assert!(pi.probs()[1..].iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn forward_vacuum_dominates_at_reference_scale() {
        let scen = ChannelScenario::new(0.092, 0.85).unwrap();
        let plan = DetectionPlan::evenly_spaced(0.509, 10).unwrap();
        for (kind, mu) in [(NoiseKind::Poisson, 0.84), (NoiseKind::Thermal, 2.0)] {
            let b = kind.distribution(mu, 30).unwrap();
            for pi in forward_photocounts(&b, &scen, &plan).unwrap() {
                let p0 = pi.probs()[0];
                assert!(pi.probs()[1..].iter().all(|&x| x < p0));
            }
        }
    }

    #[test]
    fn poisson_and_thermal_shapes() {
        assert_eq!(poisson_noise(0.0, 5).unwrap().probs(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(thermal_noise(0.0, 3).unwrap().probs(), &[1.0, 0.0, 0.0, 0.0]);

        // Oracle: partial series of e^-1 / m!.
        let raw0 = NoiseKind::Poisson.pmf(1.0, 0);
        assert!((raw0 - 0.367_879_441_171_442_3).abs() < 1e-15);
        let partial: f64 = (0..=10usize)
            .map(|m| (-1.0f64).exp() / (1..=m).map(|j| j as f64).product::<f64>())
            .sum();
        let b = poisson_noise(1.0, 10).unwrap();
        assert!((b.probs()[0] - raw0).abs() < 1e-7);
        assert!((b.probs()[0] - raw0 / partial).abs() < 1e-15);
        assert!((b.tail_mass() - (1.0 - partial)).abs() < 1e-15);

        // Oracle: geometric 2^-(m+1).
        let t = thermal_noise(1.0, 60).unwrap();
        for (m, &x) in t.probs().iter().enumerate().take(20) {
            assert!((x - 0.5f64.powi(m as i32 + 1)).abs() < 1e-15);
        }
        assert!(thermal_noise(-1.0, 3).is_err());
        assert!(poisson_noise(-0.1, 3).is_err());
    }

    #[test]
    fn noise_means() {
        for mu in [0.45, 0.84, 1.78, 2.0] {
            let m_p = truncation_bound(NoiseKind::Poisson, mu, 1e-14).unwrap();
            let m_t = truncation_bound(NoiseKind::Thermal, mu, 1e-14).unwrap();
            assert!((poisson_noise(mu, m_p).unwrap().mean() - mu).abs() < 1e-11);
            assert!((thermal_noise(mu, m_t).unwrap().mean() - mu).abs() < 1e-11);
        }
    }

    #[test]
    fn truncation_bound_examples() {
        assert_eq!(truncation_bound(NoiseKind::Poisson, 0.0, 1e-6).unwrap(), 0);
        assert!(truncation_bound(NoiseKind::Poisson, 1.0, 0.0).is_err());
        assert!(truncation_bound(NoiseKind::Poisson, 1.0, 1.0).is_err());

        // Oracle: cumulative partial sums of the Poisson(2) pmf.
        let mut cdf = 0.0;
        let mut term = (-2.0f64).exp();
        let mut expected = None;
        for m in 0..40 {
            if m > 0 {
                term *= 2.0 / m as f64;
            }
            cdf += term;
            if 1.0 - cdf < 1e-6 {
                expected = Some(m);
                break;
            }
        }
        assert_eq!(
            truncation_bound(NoiseKind::Poisson, 2.0, 1e-6).unwrap(),
            expected.unwrap()
        );

        // thermal(1): tail 2^-(M+1) < 1e-6 first at M = 19
        assert_eq!(truncation_bound(NoiseKind::Thermal, 1.0, 1e-6).unwrap(), 19);
    }

    #[test]
    fn truncation_bound_monotone() {
        for kind in [NoiseKind::Poisson, NoiseKind::Thermal] {
            let mut last = 0;
            for i in 0..60 {
                let mu = i as f64 * 0.1;
                let m = truncation_bound(kind, mu, 1e-8).unwrap();
                assert!(m >= last);
                last = m;
            }
            let mut last = usize::MAX;
            for e in 1..14 {
                let m = truncation_bound(kind, 1.5, 10f64.powi(-e)).unwrap();
                assert!(last == usize::MAX || m >= last);
                last = m;
            }
        }
    }

    #[test]
    fn plan_validation() {
        assert!(DetectionPlan::new(0.0, vec![0.5]).is_err());
        assert!(DetectionPlan::new(0.5, vec![0.5, 0.5]).is_err());
        assert!(DetectionPlan::new(0.5, vec![0.0, 0.5]).is_err());
        let p = DetectionPlan::from_components(0.67, 0.76, vec![0.5, 1.0]).unwrap();
        assert!((p.eta_tot - 0.5092).abs() < 1e-12);
        let p = DetectionPlan::evenly_spaced(0.509, 10).unwrap();
        assert_eq!(p.settings[0], 0.1);
        assert_eq!(p.settings[9], 1.0);
    }
}
