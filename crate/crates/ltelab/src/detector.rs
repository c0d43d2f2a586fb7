//! k-NN interference detection over performance-measurement counters.
//!
//! The classifier follows the plain nearest-neighbor recipe: compute the
//! distance from the query to every training sample, sort ascending, take
//! the k smallest, and return the majority label. Ties are broken by the
//! nearest neighbor among the tied classes, then by lowest category index;
//! equal distances order by training-sample index.
//!
//! Feature vectors are synthesized from link-model reports: an uplink
//! control-region decode-failure rate and the uplink degradation fraction,
//! each perturbed by seeded Gaussian measurement noise, standing in for the
//! anonymized counters of a production eNB.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{CellConfig, SUBFRAMES_PER_FRAME};
use crate::harness;
use crate::interference::{InterferenceScenario, ScenarioKind};
use crate::linkmodel::{LinkConfig, ThroughputReport};

#[derive(Debug, Error)]
pub enum DetectorError {
    #[error("feature dimensionality mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid training data: {0}")]
    InvalidTraining(String),
    #[error("experiment configuration: {0}")]
    InvalidExperiment(String),
    #[error(transparent)]
    Harness(#[from] harness::HarnessError),
}

/// Ordered metric values for one observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn validate(&self) -> Result<(), DetectorError> {
        if self.0.is_empty() || self.0.iter().any(|v| !v.is_finite()) {
            return Err(DetectorError::InvalidTraining(
                "feature values must be finite and non-empty".into(),
            ));
        }
        Ok(())
    }
}

/// One labeled training sample; the label is an index into the training
/// set's category list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub features: FeatureVector,
    pub label: usize,
}

/// Labeled samples plus the declared category set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSet {
    pub categories: Vec<String>,
    pub samples: Vec<Sample>,
}

impl TrainingSet {
    pub fn validate(&self) -> Result<(), DetectorError> {
        if self.categories.is_empty() {
            return Err(DetectorError::InvalidTraining("no categories declared".into()));
        }
        if self.samples.is_empty() {
            return Err(DetectorError::InvalidTraining("no training samples".into()));
        }
        let dim = self.samples[0].features.dim();
        for sample in &self.samples {
            sample.features.validate()?;
            if sample.features.dim() != dim {
                return Err(DetectorError::DimensionMismatch {
                    expected: dim,
                    got: sample.features.dim(),
                });
            }
            if sample.label >= self.categories.len() {
                return Err(DetectorError::InvalidTraining(format!(
                    "label index {} outside {} categories",
                    sample.label,
                    self.categories.len()
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.samples.first().map_or(0, |s| s.features.dim())
    }

    /// CSV form: feature columns then the label name.
    pub fn to_csv(&self) -> String {
        let dim = self.dim();
        let mut out = String::new();
        for i in 0..dim {
            out.push_str(&format!("feature_{},", i + 1));
        }
        out.push_str("label\n");
        for sample in &self.samples {
            for v in &sample.features.0 {
                out.push_str(&format!("{v:.9},"));
            }
            out.push_str(&self.categories[sample.label]);
            out.push('\n');
        }
        out
    }
}

/// Distance metric between feature vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DistanceMetric {
    #[default]
    Euclidean,
    Manhattan,
}

/// Distance between two equal-dimensional feature vectors.
pub fn distance(
    a: &FeatureVector,
    b: &FeatureVector,
    metric: DistanceMetric,
) -> Result<f64, DetectorError> {
    if a.dim() != b.dim() {
        return Err(DetectorError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let d = match metric {
        DistanceMetric::Euclidean => a
            .0
            .iter()
            .zip(&b.0)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
        DistanceMetric::Manhattan => a.0.iter().zip(&b.0).map(|(x, y)| (x - y).abs()).sum(),
    };
    Ok(d)
}

/// Per-feature affine normalization parameters (z-score).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureScale {
    pub offset: f64,
    pub scale: f64,
}

/// Z-score parameters per feature; features with no spread keep unit scale
/// so they normalize to zero rather than blowing up.
pub fn fit_normalization(training: &TrainingSet) -> Result<Vec<FeatureScale>, DetectorError> {
    training.validate()?;
    let dim = training.dim();
    let n = training.samples.len() as f64;
    let mut scales = Vec::with_capacity(dim);
    for i in 0..dim {
        let mean = training.samples.iter().map(|s| s.features.0[i]).sum::<f64>() / n;
        let var = training
            .samples
            .iter()
            .map(|s| (s.features.0[i] - mean).powi(2))
            .sum::<f64>()
            / n;
        let sd = var.sqrt();
        scales.push(FeatureScale {
            offset: mean,
            scale: if sd > 0.0 { sd } else { 1.0 },
        });
    }
    Ok(scales)
}

/// Applies normalization parameters to a vector.
pub fn normalize(features: &FeatureVector, scales: &[FeatureScale]) -> FeatureVector {
    FeatureVector(
        features
            .0
            .iter()
            .zip(scales)
            .map(|(v, s)| (v - s.offset) / s.scale)
            .collect(),
    )
}

/// Immutable k-NN model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub training: TrainingSet,
    pub k: usize,
    pub metric: DistanceMetric,
    /// Present when the model was fit with feature normalization.
    pub normalization: Option<Vec<FeatureScale>>,
}

impl KnnModel {
    /// Builds a model, optionally fitting z-score normalization.
    pub fn fit(
        training: TrainingSet,
        k: usize,
        metric: DistanceMetric,
        normalize_features: bool,
    ) -> Result<Self, DetectorError> {
        training.validate()?;
        if k == 0 || k > training.samples.len() {
            return Err(DetectorError::InvalidModel(format!(
                "k must be in 1..={}, got {k}",
                training.samples.len()
            )));
        }
        let normalization = if normalize_features {
            Some(fit_normalization(&training)?)
        } else {
            None
        };
        Ok(KnnModel {
            training,
            k,
            metric,
            normalization,
        })
    }

    /// Classifies a query by majority vote among its k nearest samples.
    pub fn classify(&self, x: &FeatureVector) -> Result<usize, DetectorError> {
        if x.dim() != self.training.dim() {
            return Err(DetectorError::DimensionMismatch {
                expected: self.training.dim(),
                got: x.dim(),
            });
        }
        if self.k > self.training.samples.len() {
            return Err(DetectorError::InvalidModel(format!(
                "k = {} exceeds {} training samples",
                self.k,
                self.training.samples.len()
            )));
        }
        let query = match &self.normalization {
            Some(scales) => normalize(x, scales),
            None => x.clone(),
        };

        // Distance to every training sample, stable-ordered by (distance,
        // sample index) so equal distances resolve deterministically.
        let mut distances: Vec<(f64, usize)> = Vec::with_capacity(self.training.samples.len());
        for (index, sample) in self.training.samples.iter().enumerate() {
            let features = match &self.normalization {
                Some(scales) => normalize(&sample.features, scales),
                None => sample.features.clone(),
            };
            distances.push((distance(&query, &features, self.metric)?, index));
        }
        distances.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let neighbors = &distances[..self.k];
        let n_categories = self.training.categories.len();
        let mut votes = vec![0usize; n_categories];
        let mut best_rank = vec![usize::MAX; n_categories];
        for (rank, &(_, index)) in neighbors.iter().enumerate() {
            let label = self.training.samples[index].label;
            votes[label] += 1;
            best_rank[label] = best_rank[label].min(rank);
        }
        let max_votes = *votes.iter().max().expect("non-empty categories");
        // Majority vote; among tied classes the one owning the single
        // nearest neighbor wins, then the lowest category index.
        let winner = (0..n_categories)
            .filter(|&c| votes[c] == max_votes)
            .min_by_key(|&c| (best_rank[c], c))
            .expect("at least one tied class");
        Ok(winner)
    }

    pub fn category_name(&self, label: usize) -> &str {
        &self.training.categories[label]
    }
}

/// Default category names for the two-class experiment.
pub const LABEL_INTERFERENCE: &str = "Interference";
pub const LABEL_NO_INTERFERENCE: &str = "NoInterference";

/// Two PM-counter stand-ins from a throughput report: the uplink
/// control-region decode-failure rate (gated subframes over the frame) and
/// the uplink degradation fraction, each with seeded Gaussian noise.
pub fn synth_pm_counters(
    report: &ThroughputReport,
    link: &LinkConfig,
    noise_sd: f64,
    seed: u64,
) -> FeatureVector {
    let failure_rate =
        f64::from(report.gates_tripped.pucch) / SUBFRAMES_PER_FRAME as f64;
    let degradation = report.ul_degradation(link);
    let mut values = vec![failure_rate, degradation];
    if noise_sd > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, noise_sd).expect("valid noise sd");
        for v in &mut values {
            *v += noise.sample(&mut rng);
        }
    }
    FeatureVector(values)
}

/// Configuration of the detection experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectionConfig {
    pub cell: CellConfig,
    pub link: LinkConfig,
    /// Scenario providing the "Interference" class.
    pub interference_kind: ScenarioKind,
    pub isr_re_db: f64,
    pub samples_per_class: usize,
    pub k: usize,
    pub metric: DistanceMetric,
    pub noise_sd: f64,
    pub seed: u64,
    pub train_fraction: f64,
    /// Displace one held-out interference point toward the other cluster.
    pub displace_one_holdout: bool,
    /// Displacement toward the opposing cluster center, as a fraction of
    /// the center-to-center line.
    pub displacement: f64,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig {
            cell: CellConfig::default(),
            link: LinkConfig::default(),
            interference_kind: ScenarioKind::PucchTarget,
            isr_re_db: 5.0,
            samples_per_class: 40,
            k: 3,
            metric: DistanceMetric::Euclidean,
            noise_sd: 0.05,
            seed: 7,
            train_fraction: 0.8,
            displace_one_holdout: true,
            displacement: 0.35,
        }
    }
}

/// Outcome of the detection experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub config: DetectionConfig,
    pub n_train: usize,
    pub n_holdout: usize,
    /// Rows: true class; columns: predicted class.
    pub confusion: Vec<Vec<u32>>,
    pub per_class_accuracy: Vec<ClassAccuracy>,
    pub overall_accuracy: f64,
    /// Verdict on the deliberately displaced point, when enabled.
    pub displaced_point_correct: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassAccuracy {
    pub category: String,
    pub correct: u32,
    pub total: u32,
    pub accuracy: f64,
}

/// Generates the two-class PM-counter data set used by the experiment.
///
/// Class 0 is the interference scenario, class 1 the quiet baseline; both
/// are link-model evaluations perturbed per-sample by seeded noise.
pub fn generate_labeled_samples(
    config: &DetectionConfig,
) -> Result<TrainingSet, DetectorError> {
    let run = harness::RunConfig {
        cell: config.cell.clone(),
        link: config.link.clone(),
        ..harness::RunConfig::default()
    };
    let interference = InterferenceScenario::new(config.interference_kind, config.isr_re_db);
    let (inter_report, _) = harness::run_scenario(&run, &interference, config.isr_re_db)?;
    let quiet = InterferenceScenario::new(ScenarioKind::None, 0.0);
    let (quiet_report, _) = harness::run_scenario(&run, &quiet, 0.0)?;

    let mut samples = Vec::with_capacity(2 * config.samples_per_class);
    for (label, report) in [(0usize, &inter_report), (1, &quiet_report)] {
        for i in 0..config.samples_per_class {
            let sample_seed = config
                .seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add((label as u64) << 32)
                .wrapping_add(i as u64);
            samples.push(Sample {
                features: synth_pm_counters(report, &config.link, config.noise_sd, sample_seed),
                label,
            });
        }
    }
    Ok(TrainingSet {
        categories: vec![LABEL_INTERFERENCE.into(), LABEL_NO_INTERFERENCE.into()],
        samples,
    })
}

/// Runs the two-class detection experiment: seeded train/holdout split,
/// k-NN classification of the held-out points, and a confusion matrix.
pub fn run_detection_experiment(config: &DetectionConfig) -> Result<DetectionReport, DetectorError> {
    if !(config.train_fraction > 0.0 && config.train_fraction < 1.0) {
        return Err(DetectorError::InvalidExperiment(format!(
            "train_fraction must be in (0, 1), got {}",
            config.train_fraction
        )));
    }
    if !(0.0..1.0).contains(&config.displacement) {
        return Err(DetectorError::InvalidExperiment(format!(
            "displacement must be in [0, 1), got {}",
            config.displacement
        )));
    }
    let data = generate_labeled_samples(config)?;
    let n_categories = data.categories.len();

    // Seeded per-class split so both classes keep the same proportions.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5EED_5911);
    let mut train = Vec::new();
    let mut holdout = Vec::new();
    for label in 0..n_categories {
        let mut indexed: Vec<&Sample> =
            data.samples.iter().filter(|s| s.label == label).collect();
        indexed.shuffle(&mut rng);
        let n_train = ((indexed.len() as f64) * config.train_fraction).round() as usize;
        if n_train == 0 || n_train == indexed.len() {
            return Err(DetectorError::InvalidExperiment(format!(
                "class {label}: {} samples cannot satisfy an {:.0}/{:.0} split",
                indexed.len(),
                config.train_fraction * 100.0,
                (1.0 - config.train_fraction) * 100.0
            )));
        }
        train.extend(indexed[..n_train].iter().map(|s| (*s).clone()));
        holdout.extend(indexed[n_train..].iter().map(|s| (*s).clone()));
    }

    let training = TrainingSet {
        categories: data.categories.clone(),
        samples: train,
    };
    if config.k > training.samples.len() {
        return Err(DetectorError::InvalidExperiment(format!(
            "k = {} exceeds {} training samples",
            config.k,
            training.samples.len()
        )));
    }

    // Cluster centers from the training data, for the displaced point.
    let centroids: Vec<FeatureVector> = (0..n_categories)
        .map(|label| {
            let members: Vec<&Sample> = training
                .samples
                .iter()
                .filter(|s| s.label == label)
                .collect();
            let dim = training.dim();
            let mut center = vec![0.0; dim];
            for s in &members {
                for (c, v) in center.iter_mut().zip(&s.features.0) {
                    *c += v;
                }
            }
            for c in &mut center {
                *c /= members.len() as f64;
            }
            FeatureVector(center)
        })
        .collect();

    let mut displaced_index = None;
    if config.displace_one_holdout {
        if let Some(pos) = holdout.iter().position(|s| s.label == 0) {
            let own = &centroids[0];
            let other = &centroids[1];
            let moved: Vec<f64> = own
                .0
                .iter()
                .zip(&other.0)
                .map(|(o, t)| o + config.displacement * (t - o))
                .collect();
            holdout[pos].features = FeatureVector(moved);
            displaced_index = Some(pos);
        }
    }

    let model = KnnModel::fit(training, config.k, config.metric, true)?;
    let mut confusion = vec![vec![0u32; n_categories]; n_categories];
    let mut displaced_correct = None;
    for (i, sample) in holdout.iter().enumerate() {
        let predicted = model.classify(&sample.features)?;
        confusion[sample.label][predicted] += 1;
        if displaced_index == Some(i) {
            displaced_correct = Some(predicted == sample.label);
        }
    }

    let per_class_accuracy: Vec<ClassAccuracy> = (0..n_categories)
        .map(|label| {
            let total: u32 = confusion[label].iter().sum();
            let correct = confusion[label][label];
            ClassAccuracy {
                category: data.categories[label].clone(),
                correct,
                total,
                accuracy: if total == 0 {
                    0.0
                } else {
                    f64::from(correct) / f64::from(total)
                },
            }
        })
        .collect();
    let total: u32 = confusion.iter().flatten().sum();
    let correct: u32 = (0..n_categories).map(|c| confusion[c][c]).sum();

    Ok(DetectionReport {
        config: config.clone(),
        n_train: model.training.samples.len(),
        n_holdout: holdout.len(),
        confusion,
        per_class_accuracy,
        overall_accuracy: f64::from(correct) / f64::from(total),
        displaced_point_correct: displaced_correct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn two_cluster_set() -> TrainingSet {
        TrainingSet {
            categories: vec!["A".into(), "B".into()],
            samples: vec![
                Sample { features: FeatureVector(vec![0.0, 0.0]), label: 0 },
                Sample { features: FeatureVector(vec![0.0, 1.0]), label: 0 },
                Sample { features: FeatureVector(vec![1.0, 0.0]), label: 0 },
                Sample { features: FeatureVector(vec![10.0, 10.0]), label: 1 },
                Sample { features: FeatureVector(vec![10.0, 11.0]), label: 1 },
                Sample { features: FeatureVector(vec![11.0, 10.0]), label: 1 },
            ],
        }
    }

    /// Exhaustive-sort majority-vote oracle with the documented tie rules,
    /// independent of the model implementation.
    fn oracle_classify(
        training: &TrainingSet,
        query: &FeatureVector,
        k: usize,
        metric: DistanceMetric,
    ) -> usize {
        let mut dists: Vec<(f64, usize, usize)> = training
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| (distance(query, &s.features, metric).unwrap(), i, s.label))
            .collect();
        dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let top = &dists[..k];
        let n_cat = training.categories.len();
        let mut counts = vec![0usize; n_cat];
        for &(_, _, label) in top {
            counts[label] += 1;
        }
        let max = *counts.iter().max().unwrap();
        (0..n_cat)
            .filter(|&c| counts[c] == max)
            .min_by_key(|&c| {
                let rank = top.iter().position(|&(_, _, l)| l == c).unwrap();
                (rank, c)
            })
            .unwrap()
    }

    #[test]
    fn classify_matches_worked_examples() {
        let model = KnnModel::fit(two_cluster_set(), 3, DistanceMetric::Euclidean, false).unwrap();
        assert_eq!(model.classify(&FeatureVector(vec![0.5, 0.5])).unwrap(), 0);
        assert_eq!(model.classify(&FeatureVector(vec![10.5, 10.5])).unwrap(), 1);
    }

    #[test]
    fn k1_returns_exact_match_label() {
        let model = KnnModel::fit(two_cluster_set(), 1, DistanceMetric::Euclidean, false).unwrap();
        assert_eq!(model.classify(&FeatureVector(vec![10.0, 11.0])).unwrap(), 1);
        assert_eq!(model.classify(&FeatureVector(vec![0.0, 1.0])).unwrap(), 0);
    }

    #[test]
    fn classify_rejects_bad_inputs() {
        let model = KnnModel::fit(two_cluster_set(), 3, DistanceMetric::Euclidean, false).unwrap();
        assert!(matches!(
            model.classify(&FeatureVector(vec![1.0])),
            Err(DetectorError::DimensionMismatch { .. })
        ));
        assert!(KnnModel::fit(two_cluster_set(), 7, DistanceMetric::Euclidean, false).is_err());
        assert!(KnnModel::fit(two_cluster_set(), 0, DistanceMetric::Euclidean, false).is_err());
    }

    #[test]
    fn distance_basics() {
        let a = FeatureVector(vec![0.0, 0.0]);
        let b = FeatureVector(vec![3.0, 4.0]);
        assert_eq!(distance(&a, &b, DistanceMetric::Euclidean).unwrap(), 5.0);
        assert_eq!(distance(&a, &b, DistanceMetric::Manhattan).unwrap(), 7.0);
        assert_eq!(distance(&a, &a, DistanceMetric::Euclidean).unwrap(), 0.0);
        let c = FeatureVector(vec![1.0]);
        assert!(distance(&a, &c, DistanceMetric::Euclidean).is_err());
    }

    #[test]
    fn distance_is_symmetric_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = FeatureVector((0..4).map(|_| rng.random_range(-5.0..5.0)).collect());
            let b = FeatureVector((0..4).map(|_| rng.random_range(-5.0..5.0)).collect());
            for metric in [DistanceMetric::Euclidean, DistanceMetric::Manhattan] {
                let ab = distance(&a, &b, metric).unwrap();
                let ba = distance(&b, &a, metric).unwrap();
                assert_eq!(ab, ba);
            }
        }
    }

    #[test]
    fn classify_agrees_with_oracle_on_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(911);
        let mut checked = 0usize;
        while checked < 1000 {
            let n_cat = rng.random_range(2..4usize);
            let n_samples = rng.random_range(6..30usize);
            let dim = rng.random_range(1..4usize);
            // Integer lattice coordinates provoke exact distance ties.
            let training = TrainingSet {
                categories: (0..n_cat).map(|c| format!("C{c}")).collect(),
                samples: (0..n_samples)
                    .map(|_| Sample {
                        features: FeatureVector(
                            (0..dim).map(|_| f64::from(rng.random_range(0..5i32))).collect(),
                        ),
                        label: rng.random_range(0..n_cat),
                    })
                    .collect(),
            };
            for &k in &[1usize, 3, 5] {
                if k > n_samples {
                    continue;
                }
                let model =
                    KnnModel::fit(training.clone(), k, DistanceMetric::Euclidean, false).unwrap();
                let query = FeatureVector(
                    (0..dim).map(|_| f64::from(rng.random_range(0..5i32))).collect(),
                );
                assert_eq!(
                    model.classify(&query).unwrap(),
                    oracle_classify(&training, &query, k, DistanceMetric::Euclidean),
                    "k = {k}"
                );
                checked += 1;
            }
        }
    }

    #[test]
    fn classification_invariant_to_training_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(5150);
        for _ in 0..50 {
            // Continuous coordinates: distance ties are measure-zero.
            let training = TrainingSet {
                categories: vec!["A".into(), "B".into()],
                samples: (0..20)
                    .map(|i| Sample {
                        features: FeatureVector(vec![
                            rng.random_range(-1.0..1.0),
                            rng.random_range(-1.0..1.0),
                        ]),
                        label: i % 2,
                    })
                    .collect(),
            };
            let query = FeatureVector(vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
            let base = KnnModel::fit(training.clone(), 3, DistanceMetric::Euclidean, false)
                .unwrap()
                .classify(&query)
                .unwrap();
            let mut shuffled = training.clone();
            shuffled.samples.shuffle(&mut rng);
            let permuted = KnnModel::fit(shuffled, 3, DistanceMetric::Euclidean, false)
                .unwrap()
                .classify(&query)
                .unwrap();
            assert_eq!(base, permuted);
        }
    }

    #[test]
    fn normalization_degenerate_and_zscore_behavior() {
        let training = TrainingSet {
            categories: vec!["A".into()],
            samples: vec![
                Sample { features: FeatureVector(vec![5.0, 3.0]), label: 0 },
                Sample { features: FeatureVector(vec![5.0, 7.0]), label: 0 },
                Sample { features: FeatureVector(vec![5.0, 5.0]), label: 0 },
            ],
        };
        let scales = fit_normalization(&training).unwrap();
        // Constant feature: unit scale, offset at the constant.
        assert_eq!(scales[0].offset, 5.0);
        assert_eq!(scales[0].scale, 1.0);
        assert_eq!(normalize(&training.samples[0].features, &scales).0[0], 0.0);
        // Spread feature: z-scored to mean 0, sd 1 over the set.
        let normalized: Vec<f64> = training
            .samples
            .iter()
            .map(|s| normalize(&s.features, &scales).0[1])
            .collect();
        let mean: f64 = normalized.iter().sum::<f64>() / 3.0;
        let sd = (normalized.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 3.0).sqrt();
        assert!(mean.abs() < 1e-12);
        assert!((sd - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalization_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let training = TrainingSet {
            categories: vec!["A".into()],
            samples: (0..30)
                .map(|_| Sample {
                    features: FeatureVector(vec![
                        rng.random_range(-3.0..9.0),
                        rng.random_range(100.0..200.0),
                    ]),
                    label: 0,
                })
                .collect(),
        };
        let scales = fit_normalization(&training).unwrap();
        let normalized = TrainingSet {
            categories: training.categories.clone(),
            samples: training
                .samples
                .iter()
                .map(|s| Sample {
                    features: normalize(&s.features, &scales),
                    label: s.label,
                })
                .collect(),
        };
        let rescales = fit_normalization(&normalized).unwrap();
        for sample in &normalized.samples {
            let twice = normalize(&sample.features, &rescales);
            for (a, b) in twice.0.iter().zip(&sample.features.0) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn normalized_classification_is_scale_invariant() {
        // Power-of-two scaling keeps the z-scores bit-identical.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for &factor in &[0.5f64, 4.0, 1024.0] {
            let training = TrainingSet {
                categories: vec!["A".into(), "B".into()],
                samples: (0..24)
                    .map(|i| Sample {
                        features: FeatureVector(vec![
                            rng.random_range(-1.0..1.0) + if i % 2 == 0 { 0.0 } else { 3.0 },
                            rng.random_range(-1.0..1.0),
                        ]),
                        label: i % 2,
                    })
                    .collect(),
            };
            let query = FeatureVector(vec![rng.random_range(-1.0..4.0), rng.random_range(-1.0..1.0)]);
            let base = KnnModel::fit(training.clone(), 3, DistanceMetric::Euclidean, true)
                .unwrap()
                .classify(&query)
                .unwrap();

            let scaled_training = TrainingSet {
                categories: training.categories.clone(),
                samples: training
                    .samples
                    .iter()
                    .map(|s| Sample {
                        features: FeatureVector(vec![s.features.0[0] * factor, s.features.0[1]]),
                        label: s.label,
                    })
                    .collect(),
            };
            let scaled_query = FeatureVector(vec![query.0[0] * factor, query.0[1]]);
            let scaled = KnnModel::fit(scaled_training, 3, DistanceMetric::Euclidean, true)
                .unwrap()
                .classify(&scaled_query)
                .unwrap();
            assert_eq!(base, scaled, "factor {factor}");
        }
    }

    #[test]
    fn pm_counters_baseline_and_determinism() {
        let link = LinkConfig::default();
        let quiet = ThroughputReport::nominal(&link);
        let clean = synth_pm_counters(&quiet, &link, 0.0, 1);
        assert_eq!(clean.0, vec![0.0, 0.0]);

        let noisy_a = synth_pm_counters(&quiet, &link, 0.05, 99);
        let noisy_b = synth_pm_counters(&quiet, &link, 0.05, 99);
        assert_eq!(noisy_a, noisy_b);
        let other_seed = synth_pm_counters(&quiet, &link, 0.05, 100);
        assert_ne!(noisy_a, other_seed);
    }

    #[test]
    fn pm_counters_rise_under_pucch_interference() {
        let config = DetectionConfig::default();
        let run = harness::RunConfig {
            cell: config.cell.clone(),
            link: config.link.clone(),
            ..harness::RunConfig::default()
        };
        let scenario = InterferenceScenario::new(ScenarioKind::PucchTarget, 5.0);
        let (report, _) = harness::run_scenario(&run, &scenario, 5.0).unwrap();
        let features = synth_pm_counters(&report, &config.link, 0.0, 0);
        assert!(features.0[0] > 0.5, "failure rate {}", features.0[0]);
        assert!(features.0[1] > 0.5, "degradation {}", features.0[1]);
    }

    #[test]
    fn experiment_reaches_full_accuracy_with_defaults() {
        let report = run_detection_experiment(&DetectionConfig::default()).unwrap();
        assert_eq!(report.overall_accuracy, 1.0);
        assert_eq!(report.displaced_point_correct, Some(true));
        for class in &report.per_class_accuracy {
            assert_eq!(class.accuracy, 1.0, "{}", class.category);
        }
        // Seeded experiment is byte-reproducible.
        let again = run_detection_experiment(&DetectionConfig::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }

    #[test]
    fn experiment_accuracy_collapses_under_heavy_noise() {
        let config = DetectionConfig {
            noise_sd: 50.0,
            displace_one_holdout: false,
            samples_per_class: 100,
            ..DetectionConfig::default()
        };
        let report = run_detection_experiment(&config).unwrap();
        // Clusters this blurred approach coin-flip accuracy.
        assert!(
            report.overall_accuracy < 0.8,
            "accuracy {} with overwhelming noise",
            report.overall_accuracy
        );
    }

    #[test]
    fn experiment_rejects_impossible_split() {
        let config = DetectionConfig {
            samples_per_class: 2,
            train_fraction: 0.9,
            ..DetectionConfig::default()
        };
        assert!(run_detection_experiment(&config).is_err());
    }

    #[test]
    fn training_set_csv_has_header_and_labels() {
        let csv = two_cluster_set().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "feature_1,feature_2,label");
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.lines().last().unwrap().ends_with(",B"));
    }
}
