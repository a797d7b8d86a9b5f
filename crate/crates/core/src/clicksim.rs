//! Cascading click models.
//!
//! A simulated user scans the displayed list from the top. At each rank the
//! document is clicked with a probability that depends on its relevance grade;
//! after a click the user stops with a grade-dependent probability.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::QueryData;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{ClickVector, MultileavedList};

/// Largest list length [`click_distribution`] will enumerate.
pub const MAX_ENUMERATED_CLICKS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClickModel {
    pub name: String,
    /// Click probability indexed by relevance grade.
    pub p_click: Vec<f64>,
    /// Stop probability after a click, indexed by relevance grade.
    pub p_stop: Vec<f64>,
}

impl ClickModel {
    pub fn new(name: impl Into<String>, p_click: Vec<f64>, p_stop: Vec<f64>) -> Result<Self> {
        if p_click.is_empty() || p_click.len() != p_stop.len() {
            return Err(Error::Config(
                "click and stop probability arrays must be non-empty and equally long".into(),
            ));
        }
        if p_click.iter().chain(&p_stop).any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Config("click model probabilities must lie in [0, 1]".into()));
        }
        Ok(ClickModel {
            name: name.into(),
            p_click,
            p_stop,
        })
    }

    pub fn perfect() -> Self {
        ClickModel {
            name: "perf".into(),
            p_click: vec![0.0, 0.2, 0.4, 0.8, 1.0],
            p_stop: vec![0.0, 0.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn navigational() -> Self {
        ClickModel {
            name: "nav".into(),
            p_click: vec![0.05, 0.3, 0.5, 0.7, 0.95],
            p_stop: vec![0.2, 0.3, 0.5, 0.7, 0.9],
        }
    }

    pub fn informational() -> Self {
        ClickModel {
            name: "inf".into(),
            p_click: vec![0.4, 0.6, 0.7, 0.8, 0.9],
            p_stop: vec![0.1, 0.2, 0.3, 0.4, 0.5],
        }
    }

    /// Looks up a built-in model (`perf`, `nav` or `inf`).
    pub fn by_name(name: &str) -> Result<Self> {
        builtin_click_models()
            .into_iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::UnknownName {
                kind: "click model",
                name: name.into(),
            })
    }

    pub fn max_grade(&self) -> usize {
        self.p_click.len() - 1
    }

    fn grade_index(&self, grade: u8) -> Result<usize> {
        let g = grade as usize;
        if g >= self.p_click.len() {
            return Err(Error::GradeOutOfRange {
                grade,
                max: self.max_grade(),
            });
        }
        Ok(g)
    }

    /// Grade indices of the displayed documents, validated against the model.
    fn displayed_grades(&self, m: &MultileavedList, q: &QueryData) -> Result<Vec<usize>> {
        m.displayed
            .iter()
            .map(|&d| {
                let rel = q.relevance(d).ok_or(Error::DocumentNotFound(d))?;
                self.grade_index(rel)
            })
            .collect()
    }
}

/// The perfect, navigational and informational models.
pub fn builtin_click_models() -> Vec<ClickModel> {
    vec![
        ClickModel::perfect(),
        ClickModel::navigational(),
        ClickModel::informational(),
    ]
}

pub fn simulate_clicks<R: Rng + ?Sized>(
    model: &ClickModel,
    m: &MultileavedList,
    q: &QueryData,
    rng: &mut R,
) -> Result<ClickVector> {
    let grades = model.displayed_grades(m, q)?;
    let mut clicks = vec![false; grades.len()];
    for (i, &g) in grades.iter().enumerate() {
        if rng.random::<f64>() < model.p_click[g] {
            clicks[i] = true;
            if rng.random::<f64>() < model.p_stop[g] {
                break;
            }
        }
    }
    Ok(ClickVector(clicks))
}

/// Exact probability of every click pattern on `m`.
///
/// All `2^k` patterns are present, including those with probability zero.
pub fn click_distribution<S: Scalar>(
    model: &ClickModel,
    m: &MultileavedList,
    q: &QueryData,
) -> Result<BTreeMap<ClickVector, S>> {
    let k = m.len();
    if k > MAX_ENUMERATED_CLICKS {
        return Err(Error::TooManyClicks {
            k,
            limit: MAX_ENUMERATED_CLICKS,
        });
    }
    let grades = model.displayed_grades(m, q)?;
    let click: Vec<S> = grades.iter().map(|&g| S::from_f64(model.p_click[g])).collect();
    let stop: Vec<S> = grades.iter().map(|&g| S::from_f64(model.p_stop[g])).collect();

    let mut by_bits = vec![S::zero(); 1 << k];
    // (rank index, bits so far, probability) while the user is still scanning
    let mut stack = vec![(0usize, 0u32, S::one())];
    while let Some((i, bits, p)) = stack.pop() {
        if i == k {
            by_bits[bits as usize] += p;
            continue;
        }
        let skip = p.clone() * (S::one() - click[i].clone());
        stack.push((i + 1, bits, skip));
        let clicked = p * click[i].clone();
        let clicked_bits = bits | 1 << i;
        by_bits[clicked_bits as usize] += clicked.clone() * stop[i].clone();
        stack.push((i + 1, clicked_bits, clicked * (S::one() - stop[i].clone())));
    }

    Ok(by_bits
        .into_iter()
        .enumerate()
        .map(|(bits, p)| (ClickVector::from_bits(k, bits as u32), p))
        .collect())
}
