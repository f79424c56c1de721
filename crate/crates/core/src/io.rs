//! JSON forms of functions, certificates, order sets and synthesis results.
//! Rationals are written as `"p/q"` strings.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::classifier::Label;
use crate::error::{Error, Result};
use crate::gfunc::GroupFunction;
use crate::group::FiniteGroup;
use crate::orders::OrderSet;
use crate::scalar::{format_rational, parse_rational, rational_str, rational_vec};
use crate::shatter::{CertificateEntry, ShatterCertificate};
use crate::synth::{SynthMode, Synthesis, UTower};
use crate::Rational;

/// Builds each group spec once so functions read together share one group.
#[derive(Debug, Default)]
pub struct GroupCache {
    groups: HashMap<String, Arc<FiniteGroup>>,
}

impl GroupCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, spec: &str) -> Result<Arc<FiniteGroup>> {
        if let Some(g) = self.groups.get(spec) {
            return Ok(g.clone());
        }
        let g = Arc::new(FiniteGroup::from_spec_str(spec)?);
        self.groups.insert(spec.to_string(), g.clone());
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub group: String,
    #[serde(with = "rational_vec")]
    pub values: Vec<Rational>,
}

impl FunctionJson {
    pub fn from_function(f: &GroupFunction<Rational>) -> Self {
        Self { group: f.group().label().to_string(), values: f.values().to_vec() }
    }

    pub fn to_function(&self, cache: &mut GroupCache) -> Result<GroupFunction<Rational>> {
        GroupFunction::new(cache.get(&self.group)?, self.values.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyJson {
    pub labels: Vec<i8>,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    /// Group the certified functions live on, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub m: usize,
    pub dichotomies: Vec<DichotomyJson>,
    pub shattered: bool,
}

impl CertificateJson {
    pub fn from_certificate(cert: &ShatterCertificate<Rational>) -> Self {
        let dichotomies = cert
            .entries
            .iter()
            .map(|e| DichotomyJson {
                labels: e.labels.iter().map(|l| l.as_i8()).collect(),
                status: if e.witness.is_some() { "witnessed" } else { "unreachable" }.into(),
                c1: e.witness.as_ref().map(|w| format_rational(&w.0)),
                c2: e.witness.as_ref().map(|w| format_rational(&w.1)),
            })
            .collect();
        Self { group: None, m: cert.m, dichotomies, shattered: cert.shattered }
    }

    pub fn to_certificate(&self) -> Result<ShatterCertificate<Rational>> {
        let entries = self
            .dichotomies
            .iter()
            .map(|d| {
                let labels = d
                    .labels
                    .iter()
                    .map(|&v| Label::from_i8(v).ok_or_else(|| Error::Format(format!("label {v} is not -1 or 1"))))
                    .collect::<Result<Vec<_>>>()?;
                if labels.len() != self.m {
                    return Err(Error::Format(format!("dichotomy has {} labels, expected {}", labels.len(), self.m)));
                }
                let witness = match (d.status.as_str(), &d.c1, &d.c2) {
                    ("witnessed", Some(c1), Some(c2)) => Some((parse(c1)?, parse(c2)?)),
                    ("unreachable", None, None) => None,
                    _ => return Err(Error::Format(format!("inconsistent dichotomy entry {d:?}"))),
                };
                Ok(CertificateEntry { labels, witness })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ShatterCertificate { m: self.m, entries, shattered: self.shattered })
    }
}

fn parse(text: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| Error::Format(format!("bad rational {text:?}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pair(#[serde(with = "rational_str")] pub Rational, #[serde(with = "rational_str")] pub Rational);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerJson {
    #[serde(with = "rational_vec")]
    pub epsilons: Vec<Rational>,
    /// `(a_{i,1}, a_{i,2})` for `u_0 .. u_{2m+1}`.
    pub coeffs: Vec<Pair>,
}

/// Everything needed to re-verify a synthesized kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthJson {
    pub group: String,
    pub mode: SynthMode,
    pub g: usize,
    #[serde(with = "rational_str")]
    pub b: Rational,
    #[serde(with = "rational_str")]
    pub c: Rational,
    pub m: usize,
    pub orders: OrderSet,
    pub kernel: FunctionJson,
    pub u: TowerJson,
    pub subsets: Vec<Vec<usize>>,
    #[serde(with = "rational_str")]
    pub epsilon: Rational,
    #[serde(with = "rational_vec")]
    pub thresholds: Vec<Rational>,
    #[serde(with = "rational_vec")]
    pub ms: Vec<Rational>,
    #[serde(with = "rational_vec")]
    pub big_ms: Vec<Rational>,
}

impl SynthJson {
    pub fn from_synthesis(s: &Synthesis<Rational>) -> Self {
        Self {
            group: s.group.label().to_string(),
            mode: s.mode,
            g: s.g,
            b: s.b.clone(),
            c: s.c.clone(),
            m: s.m,
            orders: s.orders.clone(),
            kernel: FunctionJson::from_function(&s.kernel),
            u: TowerJson {
                epsilons: s.tower.epsilons.clone(),
                coeffs: s.tower.coeffs.iter().map(|(a, b)| Pair(a.clone(), b.clone())).collect(),
            },
            subsets: s.subsets.clone(),
            epsilon: s.epsilon.clone(),
            thresholds: s.thresholds.clone(),
            ms: s.ms.clone(),
            big_ms: s.big_ms.clone(),
        }
    }

    pub fn to_synthesis(&self, cache: &mut GroupCache) -> Result<Synthesis<Rational>> {
        let group = cache.get(&self.group)?;
        group.check_element(self.g)?;
        if self.u.coeffs.len() != 2 * self.m + 2 || self.u.epsilons.len() != self.m {
            return Err(Error::Format("tower size does not match m".into()));
        }
        let kernel = self.kernel.to_function(cache)?;
        let tower = UTower {
            b: self.b.clone(),
            c: self.c.clone(),
            p: self.m,
            epsilons: self.u.epsilons.clone(),
            coeffs: self.u.coeffs.iter().map(|Pair(a, b)| (a.clone(), b.clone())).collect(),
        };
        for h in self.subsets.iter().flatten() {
            group.check_element(*h)?;
        }
        Ok(Synthesis {
            group,
            mode: self.mode,
            g: self.g,
            b: self.b.clone(),
            c: self.c.clone(),
            m: self.m,
            orders: self.orders.clone(),
            kernel,
            tower,
            subsets: self.subsets.clone(),
            epsilon: self.epsilon.clone(),
            thresholds: self.thresholds.clone(),
            ms: self.ms.clone(),
            big_ms: self.big_ms.clone(),
        })
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}
