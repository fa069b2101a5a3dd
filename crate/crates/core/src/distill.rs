//! Logit-level distillation objective
//!
//! ```text
//! L = a * CE(softmax(z_s), y) + (1 - a) * tau^2 * KL(softmax(z_s / tau) || softmax(z_t / tau))
//! ```
//!
//! The KL term defaults to student-first order, `sum p_s ln(p_s / p_t)`.
//! [`KlDirection::TeacherStudent`] selects the order most distillation code
//! uses. Cross-entropy uses the raw student logits (`tau = 1`).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{exp, ln};

/// Log-probabilities are floored at `ln(1e-300)`.
const LOG_FLOOR: f64 = -690.775_527_898_213_7;

/// Validated logit vector: at least two finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct LogitVector(Vec<f64>);

impl LogitVector {
    /// Validates and wraps `values`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidLogits("need at least two classes"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidLogits("entries must be finite"));
        }
        Ok(Self(values))
    }

    /// The entries.
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Argument order of the KL term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum KlDirection {
    /// `KL(student || teacher)`.
    #[default]
    StudentTeacher,
    /// `KL(teacher || student)`.
    TeacherStudent,
}

/// Weight and temperature of the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistillConfig {
    /// Weight of the hard-label cross-entropy, in `[0, 1]`.
    pub alpha: f64,
    /// Softmax temperature, `> 0`.
    pub tau: f64,
    /// KL argument order.
    #[cfg_attr(feature = "serde", serde(default))]
    pub direction: KlDirection,
}

impl DistillConfig {
    /// Validated configuration with the default KL direction.
    pub fn new(alpha: f64, tau: f64) -> Result<Self> {
        let c = Self { alpha, tau, direction: KlDirection::default() };
        c.validate()?;
        Ok(c)
    }

    /// Same configuration with another KL direction.
    pub fn with_direction(mut self, direction: KlDirection) -> Self {
        self.direction = direction;
        self
    }

    /// Checks `0 <= alpha <= 1` and `tau > 0`.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidConfig("alpha must lie in [0, 1]"));
        }
        check_tau(self.tau)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig("temperature must be positive and finite"))
    }
}

/// Log-softmax of `z / tau`, floored at `ln(1e-300)`.
pub fn log_softmax(z: &LogitVector, tau: f64) -> Result<Vec<f64>> {
    check_tau(tau)?;
    let max = z.0.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v / tau));
    let shifted: Vec<f64> = z.0.iter().map(|&v| v / tau - max).collect();
    let log_sum = ln(shifted.iter().map(|&s| exp(s)).sum::<f64>());
    Ok(shifted.into_iter().map(|s| (s - log_sum).max(LOG_FLOOR)).collect())
}

/// Softmax of `z / tau` with max-subtraction.
pub fn softmax(z: &LogitVector, tau: f64) -> Result<Vec<f64>> {
    check_tau(tau)?;
    let max = z.0.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v / tau));
    let e: Vec<f64> = z.0.iter().map(|&v| exp(v / tau - max)).collect();
    let sum: f64 = e.iter().sum();
    Ok(e.into_iter().map(|v| v / sum).collect())
}

/// Components of the distillation objective.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistillLoss {
    /// `a * CE + (1 - a) * tau^2 * KL`.
    pub total: f64,
    /// Hard-label cross-entropy of the student at `tau = 1`.
    pub cross_entropy: f64,
    /// KL divergence between the tempered distributions, before weighting.
    pub kl: f64,
}

fn check_pair(student: &LogitVector, teacher: &LogitVector, label: usize) -> Result<()> {
    if student.len() != teacher.len() {
        return Err(Error::LengthMismatch { student: student.len(), teacher: teacher.len() });
    }
    if label >= student.len() {
        return Err(Error::LabelOutOfRange { label, classes: student.len() });
    }
    Ok(())
}

fn kl(p_log: &[f64], q_log: &[f64]) -> f64 {
    let d: f64 = p_log.iter().zip(q_log).map(|(&lp, &lq)| exp(lp) * (lp - lq)).sum();
    d.max(0.0)
}

/// Evaluates the objective for one example.
pub fn distill_loss(
    student: &LogitVector,
    teacher: &LogitVector,
    label: usize,
    config: &DistillConfig,
) -> Result<DistillLoss> {
    config.validate()?;
    check_pair(student, teacher, label)?;
    let cross_entropy = -log_softmax(student, 1.0)?[label];
    let ls = log_softmax(student, config.tau)?;
    let lt = log_softmax(teacher, config.tau)?;
    let kl = match config.direction {
        KlDirection::StudentTeacher => kl(&ls, &lt),
        KlDirection::TeacherStudent => kl(&lt, &ls),
    };
    let total = config.alpha * cross_entropy + (1.0 - config.alpha) * config.tau * config.tau * kl;
    Ok(DistillLoss { total, cross_entropy, kl })
}

/// Gradient of [`distill_loss`]'s total with respect to the student logits.
pub fn distill_loss_grad(
    student: &LogitVector,
    teacher: &LogitVector,
    label: usize,
    config: &DistillConfig,
) -> Result<Vec<f64>> {
    config.validate()?;
    check_pair(student, teacher, label)?;
    let p1 = softmax(student, 1.0)?;
    let ls = log_softmax(student, config.tau)?;
    let lt = log_softmax(teacher, config.tau)?;
    let ps: Vec<f64> = ls.iter().map(|&l| exp(l)).collect();

    // d(tau^2 KL)/dz_s = tau * dKL/d(z_s / tau).
    let soft: Vec<f64> = match config.direction {
        KlDirection::StudentTeacher => {
            let d = kl(&ls, &lt);
            ps.iter().zip(ls.iter().zip(&lt)).map(|(&p, (&a, &b))| p * (a - b - d)).collect()
        }
        KlDirection::TeacherStudent => {
            let pt = lt.iter().map(|&l| exp(l));
            ps.iter().zip(pt).map(|(&p, q)| p - q).collect()
        }
    };
    let hard = config.alpha;
    let weight = (1.0 - config.alpha) * config.tau;
    Ok(p1
        .iter()
        .zip(&soft)
        .enumerate()
        .map(|(i, (&p, &s))| {
            let onehot = if i == label { 1.0 } else { 0.0 };
            hard * (p - onehot) + weight * s
        })
        .collect())
}
