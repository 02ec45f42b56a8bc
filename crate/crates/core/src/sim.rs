//! Finite-sample photocount acquisitions.
//!
//! Every efficiency setting draws from its own ChaCha8 stream, keyed by the
//! run seed and the bit pattern of the setting's attenuation value, so a
//! setting's histogram does not depend on where it sits in the plan or on how
//! settings are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    forward_photocounts, ChannelScenario, DetectionPlan, NoiseDistribution, Pmf,
    PhotocountDistribution,
};
use crate::error::{Error, Result};

/// Identifier of the generator and substream rule, written into dataset metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng(seed_from_u64(seed)); stream = f64 bits of attenuation setting";

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub scenario: ChannelScenario,
    pub noise: NoiseDistribution,
    pub plan: DetectionPlan,
    pub shots_per_setting: u64,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.plan.validate()?;
        if self.shots_per_setting < 1 {
            return Err(Error::invalid("shots_per_setting", "must be at least 1"));
        }
        if self.plan.settings.len() < 2 {
            return Err(Error::invalid(
                "settings",
                "at least two efficiency settings are required",
            ));
        }
        Ok(())
    }
}

/// Counts for one efficiency setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingRecord {
    pub eta: f64,
    /// `counts[k]` events with `k` photocounts; trailing zero bins are trimmed.
    pub counts: Vec<u64>,
    pub shots: u64,
}

impl SettingRecord {
    pub fn new(eta: f64, mut counts: Vec<u64>, shots: u64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::invalid("eta", format!("{eta} is outside (0, 1]")));
        }
        let total: u64 = counts.iter().sum();
        if total != shots {
            return Err(Error::invalid(
                "shots",
                format!("histogram total {total} differs from shots {shots}"),
            ));
        }
        if shots == 0 {
            return Err(Error::invalid("shots", "must be at least 1"));
        }
        while counts.len() > 1 && counts.last() == Some(&0) {
            counts.pop();
        }
        Ok(Self { eta, counts, shots })
    }

    pub fn frequencies(&self) -> Vec<f64> {
        empirical_probabilities(&self.counts, self.shots)
            .expect("record totals are checked on construction")
    }
}

/// Photocount histograms over a set of efficiency settings, plus free-form
/// provenance (seed, generator, source file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDataset {
    pub records: Vec<SettingRecord>,
    #[serde(default)]
    pub provenance: Vec<(String, String)>,
}

impl EmpiricalDataset {
    pub fn efficiencies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.eta).collect()
    }

    pub fn kmax(&self) -> usize {
        self.records
            .iter()
            .map(|r| r.counts.len() - 1)
            .max()
            .unwrap_or(0)
    }

    /// Frequencies of every setting, zero-padded to a common length `kmax + 1`.
    pub fn frequency_table(&self) -> Vec<Vec<f64>> {
        let len = self.kmax() + 1;
        self.records
            .iter()
            .map(|r| {
                let mut f = r.frequencies();
                f.resize(len, 0.0);
                f
            })
            .collect()
    }
}

/// `P(k) = counts(k) / shots`.
pub fn empirical_probabilities(counts: &[u64], shots: u64) -> Result<Vec<f64>> {
    let total: u64 = counts.iter().sum();
    if total != shots || shots == 0 {
        return Err(Error::invalid(
            "shots",
            format!("histogram total {total} differs from shots {shots}"),
        ));
    }
    let n = shots as f64;
    Ok(counts.iter().map(|&c| c as f64 / n).collect())
}

/// Histogram of `shots` independent draws from `pi` by inverse-CDF lookup.
pub fn sample_photocounts<R: Rng + ?Sized>(
    pi: &PhotocountDistribution,
    shots: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    if shots < 1 {
        return Err(Error::invalid("shots", "must be at least 1"));
    }
    let probs = pi.probs();
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cdf.push(acc);
    }
    // Rounding can leave the last cumulative value just under 1; draws above
    // it go to the last bin that carries mass.
    let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut hist = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u: f64 = rng.gen();
        let k = cdf.partition_point(|&c| c <= u).min(last);
        hist[k] += 1;
    }
    Ok(hist)
}

pub fn setting_rng(seed: u64, setting: f64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(setting.to_bits());
    rng
}

/// Simulates one acquisition run: exact photocount laws per setting, then
/// `shots_per_setting` draws from each.
pub fn simulate_run(config: &SimulationConfig) -> Result<EmpiricalDataset> {
    config.validate()?;
    let exact = forward_photocounts(&config.noise, &config.scenario, &config.plan)?;
    let etas = config.plan.efficiencies();
    let records = exact
        .par_iter()
        .zip(config.plan.settings.par_iter())
        .zip(etas.par_iter())
        .map(|((pi, &setting), &eta)| {
            let mut rng = setting_rng(config.seed, setting);
            let counts = sample_photocounts(pi, config.shots_per_setting, &mut rng)?;
            SettingRecord::new(eta, counts, config.shots_per_setting)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalDataset {
        records,
        provenance: vec![
            ("source".into(), "simulate".into()),
            ("seed".into(), config.seed.to_string()),
            ("rng".into(), RNG_ALGORITHM.into()),
        ],
    })
}
